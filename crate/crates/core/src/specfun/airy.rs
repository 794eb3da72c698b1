//! Real-argument Airy functions Ai, Bi and their derivatives.
//!
//! * `-7 <= x <= 2.5`: Maclaurin series, `Ai = c1 f - c2 g`, `Bi = sqrt(3) (c1 f + c2 g)`.
//! * `x > 2.5`: Ai via `Ai(x) = sqrt(x/3) K_{1/3}(zeta) / pi` with `K` from Steed's
//!   continued fraction; Bi keeps the series (all terms positive, no cancellation).
//! * `x < -7`: oscillatory asymptotic expansions, truncated at the smallest term.
//!
//! `zeta = 2/3 |x|^{3/2}` throughout.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ai(0) = 3^{-2/3} / Gamma(2/3).
pub const AI_0: f64 = 0.355_028_053_887_817_2;
/// -Ai'(0) = 3^{-1/3} / Gamma(1/3).
pub const NEG_AI_PRIME_0: f64 = 0.258_819_403_792_806_8;
const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Largest `|x|` accepted.
pub const AIRY_MAX_ARG: f64 = 40.0;

const SERIES_NEG_LIMIT: f64 = -7.0;
const SERIES_POS_LIMIT_AI: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AiryBranch {
    Ai,
    Bi,
}

impl AiryBranch {
    pub fn name(self) -> &'static str {
        match self {
            AiryBranch::Ai => "Ai",
            AiryBranch::Bi => "Bi",
        }
    }
}

/// Value and derivative at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValue {
    pub value: f64,
    pub derivative: f64,
    /// Set when Ai is requested beyond `AIRY_MAX_ARG` and 0 is returned.
    pub underflow: bool,
}

/// `Ai(x)` or `Bi(x)`.
pub fn airy(branch: AiryBranch, x: f64) -> Result<f64> {
    airy_eval(branch, x).map(|v| v.value)
}

/// `Ai'(x)` or `Bi'(x)`.
pub fn airy_prime(branch: AiryBranch, x: f64) -> Result<f64> {
    airy_eval(branch, x).map(|v| v.derivative)
}

pub fn airy_eval(branch: AiryBranch, x: f64) -> Result<AiryValue> {
    if !x.is_finite() {
        return Err(Error::Range(format!("Airy argument must be finite, got {x}")));
    }
    if x > AIRY_MAX_ARG {
        return match branch {
            AiryBranch::Ai => Ok(AiryValue { value: 0.0, derivative: 0.0, underflow: true }),
            AiryBranch::Bi => Err(Error::Range(format!("Bi({x}) overflows; |x| must be <= {AIRY_MAX_ARG}"))),
        };
    }
    if x < -AIRY_MAX_ARG {
        return Err(Error::Range(format!("Airy argument {x} below -{AIRY_MAX_ARG}")));
    }

    let (value, derivative) = match branch {
        AiryBranch::Ai if x > SERIES_POS_LIMIT_AI => ai_bessel(x),
        _ if x < SERIES_NEG_LIMIT => {
            let a = asymptotic_negative(-x);
            match branch {
                AiryBranch::Ai => (a.ai, a.ai_prime),
                AiryBranch::Bi => (a.bi, a.bi_prime),
            }
        }
        _ => {
            let s = maclaurin(x);
            match branch {
                AiryBranch::Ai => (AI_0 * s.f - NEG_AI_PRIME_0 * s.g, AI_0 * s.df - NEG_AI_PRIME_0 * s.dg),
                AiryBranch::Bi => (
                    SQRT_3 * (AI_0 * s.f + NEG_AI_PRIME_0 * s.g),
                    SQRT_3 * (AI_0 * s.df + NEG_AI_PRIME_0 * s.dg),
                ),
            }
        }
    };
    Ok(AiryValue { value, derivative, underflow: false })
}

/// The two standard power-series solutions of `y'' = x y` and their derivatives.
#[derive(Debug, Clone, Copy)]
struct Maclaurin {
    f: f64,
    df: f64,
    g: f64,
    dg: f64,
}

fn maclaurin(x: f64) -> Maclaurin {
    const MAX_TERMS: usize = 2000;
    let x3 = x * x * x;

    // f = sum 3^k (1/3)_k x^{3k} / (3k)!,  g = sum 3^k (2/3)_k x^{3k+1} / (3k+1)!
    let mut tf = 1.0;
    let mut tg = x;
    let mut tdf = x * x / 2.0;
    let mut tdg = 1.0;
    let (mut f, mut g, mut df, mut dg) = (tf, tg, tdf, tdg);

    for k in 0..MAX_TERMS {
        let kf = k as f64;
        tf *= x3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        tg *= x3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        tdg *= x3 / ((3.0 * kf + 1.0) * (3.0 * kf + 3.0));
        // df starts at k = 1
        tdf *= x3 / ((3.0 * kf + 3.0) * (3.0 * kf + 5.0));
        f += tf;
        g += tg;
        df += tdf;
        dg += tdg;
        let scale = f.abs() + g.abs() + df.abs() + dg.abs();
        if tf.abs() + tg.abs() + tdf.abs() + tdg.abs() <= 1e-18 * scale && 3.0 * kf > x.abs().powf(1.5) {
            break;
        }
    }
    Maclaurin { f, df, g, dg }
}

#[derive(Debug, Clone, Copy)]
struct Oscillatory {
    ai: f64,
    ai_prime: f64,
    bi: f64,
    bi_prime: f64,
}

/// Asymptotic expansions for `Ai(-z)`, `Bi(-z)` with `z > 0` large.
fn asymptotic_negative(z: f64) -> Oscillatory {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let (pu, qu) = alternating_sums(zeta, false);
    let (pv, qv) = alternating_sums(zeta, true);
    let theta = zeta - FRAC_PI_4;
    let (s, c) = theta.sin_cos();
    let z4 = z.powf(0.25);
    let pre = 1.0 / (PI.sqrt() * z4);
    let pre_d = z4 / PI.sqrt();
    Oscillatory {
        ai: pre * (c * pu + s * qu),
        ai_prime: pre_d * (s * pv - c * qv),
        bi: pre * (-s * pu + c * qu),
        bi_prime: pre_d * (c * pv + s * qv),
    }
}

/// `(sum (-1)^k a_{2k} zeta^{-2k}, sum (-1)^k a_{2k+1} zeta^{-2k-1})` with
/// `a = u` or `a = v`, truncated before the terms start growing.
fn alternating_sums(zeta: f64, derivative: bool) -> (f64, f64) {
    let mut u = 1.0_f64;
    let mut even = 1.0;
    let mut odd = 0.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let a = if derivative { -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u } else { u };
        let term = a / zeta.powi(k);
        if term.abs() >= last || term.abs() < 1e-17 {
            break;
        }
        last = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            even += sign * term;
        } else {
            odd += sign * term;
        }
    }
    (even, odd)
}

fn ai_bessel(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (k13, k43) = bessel_k_steed(1.0 / 3.0, zeta);
    // K_{4/3} = K_{2/3} + (2/3) / zeta * K_{1/3}
    let k23 = k43 - 2.0 / (3.0 * zeta) * k13;
    let ai = (x / 3.0).sqrt() * k13 / PI;
    let ai_prime = -x / (PI * SQRT_3) * k23;
    (ai, ai_prime)
}

/// `(K_nu(x), K_{nu+1}(x))` for `|nu| <= 1/2`, `x >= 2`, via Steed's method on
/// the second continued fraction.
fn bessel_k_steed(nu: f64, x: f64) -> (f64, f64) {
    debug_assert!(nu.abs() <= 0.5 && x >= 2.0);
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - nu * nu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..100_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-16 {
            break;
        }
    }
    h *= a1;
    let k_nu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k_nu1 = k_nu * (nu + x + 0.5 - h) / x;
    (k_nu, k_nu1)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Maclaurin-only evaluation, used as an oracle for the other branches.
    fn series(branch: AiryBranch, x: f64) -> f64 {
        let s = maclaurin(x);
        match branch {
            AiryBranch::Ai => AI_0 * s.f - NEG_AI_PRIME_0 * s.g,
            AiryBranch::Bi => SQRT_3 * (AI_0 * s.f + NEG_AI_PRIME_0 * s.g),
        }
    }

    #[test]
    fn origin_values() {
        assert_eq!(airy(AiryBranch::Ai, 0.0).unwrap(), 0.355_028_053_887_817_2);
        assert!((airy(AiryBranch::Bi, 0.0).unwrap() - 0.614_926_627_446_000_7).abs() < 1e-16);
        assert!((airy_prime(AiryBranch::Ai, 0.0).unwrap() + NEG_AI_PRIME_0).abs() < 1e-17);
    }

    #[test]
    fn first_zero_of_ai() {
        // bisection on the series oracle
        let (mut lo, mut hi) = (-2.5_f64, -2.2_f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if series(AiryBranch::Ai, mid) * series(AiryBranch::Ai, lo) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((lo + 2.338_107_410_459_767).abs() < 1e-12, "{lo}");
        assert!(airy(AiryBranch::Ai, -2.338_107_410_459_767).unwrap().abs() < 1e-9);
    }

    #[test]
    fn branches_agree_at_switch_points() {
        // the series is still accurate a little past each switch
        for x in [-7.0_f64, -6.9] {
            for b in [AiryBranch::Ai, AiryBranch::Bi] {
                let a = asymptotic_negative(-x);
                let asym = if b == AiryBranch::Ai { a.ai } else { a.bi };
                assert!((asym - series(b, x)).abs() < 1e-10, "{b:?} {x}");
            }
        }
        for x in [2.5_f64, 2.6, 3.0] {
            let (ai, _) = ai_bessel(x);
            assert!(((ai - series(AiryBranch::Ai, x)) / ai).abs() < 1e-11, "{x}");
        }
    }

    #[test]
    fn reference_values() {
        // independent reference values (Cephes via scipy.special.airy)
        let cases = [
            (AiryBranch::Ai, 1.0, 0.135_292_416_312_881_47),
            (AiryBranch::Bi, 1.0, 1.207_423_594_952_871_5),
            (AiryBranch::Ai, 5.0, 1.083_444_281_360_743_3e-4),
            (AiryBranch::Ai, 10.0, 1.104_753_255_289_865_4e-10),
            (AiryBranch::Bi, 10.0, 4.556_411_535_482_265_4e8),
            (AiryBranch::Ai, -10.0, 0.040_241_238_486_441_955),
            (AiryBranch::Bi, -10.0, -0.314_679_829_643_838_8),
        ];
        for (b, x, want) in cases {
            let got = airy(b, x).unwrap();
            assert!(((got - want) / want).abs() < 1e-10, "{b:?}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn wronskian_is_inverse_pi() {
        let mut x = -8.0;
        while x <= 8.0 {
            let a = airy_eval(AiryBranch::Ai, x).unwrap();
            let b = airy_eval(AiryBranch::Bi, x).unwrap();
            let w = a.value * b.derivative - a.derivative * b.value;
            assert!((w - 1.0 / PI).abs() < 1e-9, "x = {x}: {w}");
            x += 0.01;
        }
    }

    #[test]
    fn satisfies_airy_equation() {
        let h = 1e-3;
        for b in [AiryBranch::Ai, AiryBranch::Bi] {
            let mut x = -9.0;
            while x < 4.0 {
                let y = |t: f64| airy(b, t).unwrap();
                let second = (y(x - h) - 2.0 * y(x) + y(x + h)) / (h * h);
                let scale = 1.0 + y(x).abs() * (1.0 + x.abs());
                assert!((second - x * y(x)).abs() < 1e-5 * scale, "{b:?} x = {x}");
                x += 0.37;
            }
        }
    }

    #[test]
    fn out_of_range() {
        assert!(airy(AiryBranch::Bi, 41.0).is_err());
        let a = airy_eval(AiryBranch::Ai, 41.0).unwrap();
        assert!(a.underflow && a.value == 0.0);
        assert!(airy(AiryBranch::Ai, -41.0).is_err());
        assert!(airy(AiryBranch::Ai, f64::NAN).is_err());
    }
}
