use crate::error::{domain, Result};

/// Largest degree accepted by [`hermite`].
pub const HERMITE_MAX_DEGREE: i32 = 50;

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence
/// `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite(n: i32, x: f64) -> Result<f64> {
    if !(0..=HERMITE_MAX_DEGREE).contains(&n) {
        return domain(format!("Hermite degree must be in 0..={HERMITE_MAX_DEGREE}, got {n}"));
    }
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return Ok(prev);
    }
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders() {
        assert_eq!(hermite(0, 7.3).unwrap(), 1.0);
        for x in [-2.5, 0.0, 0.3, 11.0] {
            assert_eq!(hermite(1, x).unwrap(), 2.0 * x);
        }
        // H_3 = 8x^3 - 12x
        assert_eq!(hermite(3, 2.0).unwrap(), 40.0);
        // H_4 = 16x^4 - 48x^2 + 12
        assert_eq!(hermite(4, 1.0).unwrap(), -20.0);
    }

    #[test]
    fn degree_out_of_range() {
        assert!(hermite(-1, 0.0).is_err());
        assert!(hermite(51, 0.0).is_err());
        assert!(hermite(50, 0.5).is_ok());
    }

    #[test]
    fn derivative_identity_by_finite_differences() {
        // d/dx H_n = 2n H_{n-1}
        let h = 1e-5;
        for n in 1..=10 {
            let mut x = -3.0;
            while x <= 3.0 {
                let fd = (hermite(n, x + h).unwrap() - hermite(n, x - h).unwrap()) / (2.0 * h);
                let exact = 2.0 * n as f64 * hermite(n - 1, x).unwrap();
                let scale = exact.abs().max(1.0);
                assert!((fd - exact).abs() / scale < 1e-6, "n={n} x={x}: {fd} vs {exact}");
                x += 0.25;
            }
        }
    }
}
