use num_complex::Complex64;
use proptest::prelude::*;

use bohmlab::analytic::{Family, ReferenceFamily};
use bohmlab::bohm::{
    bohm_trajectories, continuity_residual, newton_residual, polar_decompose, recompose, ComplexField, PacketComponent,
    PacketSpec, WaveProvider,
};
use bohmlab::eigensolver::{solve_bound_state, BoundaryChoice};
use bohmlab::fields::{laplacian, normalize, Field, Grid, GridKind, Meaning};
use bohmlab::qpotential::{node_count, node_mask, quantum_potential, quantum_potential_with_tol, stationary_identity_residual};
use bohmlab::PhysParams;

fn grid() -> Grid {
    Grid::with_spacing(GridKind::Cartesian, -4.0, 4.0, 0.02).unwrap()
}

fn smooth(a: f64, b: f64, c: f64) -> impl Fn(f64) -> f64 {
    move |x| (-(x - a) * (x - a) / (1.0 + b * b)).exp() + c * (x * b).sin() * 0.1 + 0.05
}

/// `e^{i theta}` times another provider.
struct Phased<'a> {
    inner: &'a PacketSpec,
    theta: f64,
}

impl WaveProvider for Phased<'_> {
    fn params(&self) -> PhysParams {
        self.inner.params()
    }

    fn psi(&self, x: f64, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.theta) * self.inner.psi(x, t)
    }

    fn derivatives(&self, x: f64, t: f64) -> Option<[Complex64; 4]> {
        let c = Complex64::from_polar(1.0, self.theta);
        self.inner.derivatives(x, t).map(|d| d.map(|z| c * z))
    }

    fn peak_modulus(&self, t: f64) -> f64 {
        self.inner.peak_modulus(t)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_is_linear(a in -2.0..2.0f64, b in 0.1..2.0f64, c in -1.0..1.0f64, s in -3.0..3.0f64, t in -3.0..3.0f64) {
        let g = grid();
        let f = Field::from_fn(g, Meaning::Generic, smooth(a, b, c)).unwrap();
        let h = Field::from_fn(g, Meaning::Generic, |x| (x * c).cos() * b).unwrap();
        let combo = Field::new(g, f.values().iter().zip(h.values()).map(|(u, v)| s * u + t * v).collect(), Meaning::Generic).unwrap();
        let lf = laplacian(&f).unwrap();
        let lh = laplacian(&h).unwrap();
        let lc = laplacian(&combo).unwrap();
        let scale = 1.0 / (g.spacing() * g.spacing());
        for (i, _, v) in lc.valid() {
            let expect = s * lf.values()[i] + t * lh.values()[i];
            prop_assert!((v - expect).abs() <= 1e-12 * scale * (1.0 + s.abs() + t.abs()));
        }
        prop_assert_eq!(lc.mask(), lf.mask());
    }

    #[test]
    fn normalize_is_idempotent(a in -2.0..2.0f64, b in 0.1..2.0f64, c in -1.0..1.0f64, k in 0.01..100.0f64) {
        let f = Field::from_fn(grid(), Meaning::Amplitude, |x| k * smooth(a, b, c)(x)).unwrap();
        let once = normalize(&f).unwrap();
        let twice = normalize(&once).unwrap();
        for (u, v) in once.values().iter().zip(twice.values()) {
            prop_assert!((u - v).abs() <= 1e-14 * u.abs().max(1e-300));
        }
        prop_assert!(twice.is_normalized());
    }

    #[test]
    fn quantum_potential_ignores_scale(a in -2.0..2.0f64, b in 0.1..2.0f64, c in -1.0..1.0f64, e in -20i32..20, k in 0.01..100.0f64) {
        let p = PhysParams::new(1.0, 1.0).unwrap();
        let f = Field::from_fn(grid(), Meaning::Amplitude, smooth(a, b, c)).unwrap();
        let base = quantum_potential(&f, &p).unwrap();
        let exact = quantum_potential(&f.scaled(2f64.powi(e)), &p).unwrap();
        prop_assert_eq!(base.values(), exact.values());
        prop_assert_eq!(base.mask(), exact.mask());
        let scaled = quantum_potential(&f.scaled(k), &p).unwrap();
        for (i, _, v) in base.valid() {
            prop_assert!((v - scaled.values()[i]).abs() <= 1e-6 * (1.0 + v.abs()));
        }
    }

    #[test]
    fn larger_node_tolerance_masks_more(shift in -3.0..3.0f64, freq in 0.5..4.0f64, lo in 1e-8..1e-4f64, ratio in 1.0..1e3f64) {
        let p = PhysParams::new(1.0, 1.0).unwrap();
        let f = Field::from_fn(grid(), Meaning::Amplitude, |x| (freq * (x - shift)).sin() * (-x * x / 8.0).exp()).unwrap();
        let loose = quantum_potential_with_tol(&f, &p, lo).unwrap();
        let strict = quantum_potential_with_tol(&f, &p, lo * ratio).unwrap();
        for (a, b) in loose.mask().iter().zip(strict.mask()) {
            prop_assert!(*a || !*b);
        }
    }

    #[test]
    fn polar_recomposition(a in -2.0..2.0f64, b in 0.1..2.0f64, k in -5.0..5.0f64, w in -1.0..1.0f64) {
        let psi = ComplexField::from_fn(grid(), 0.0, |x| {
            Complex64::from_polar((-(x - a) * (x - a) / (1.0 + b)).exp(), k * x) + w * Complex64::new((b * x).cos(), 0.0)
        })
        .unwrap();
        let (r, s) = polar_decompose(&psi, 1e-6).unwrap();
        prop_assert!(r.values().iter().all(|&v| v >= 0.0));
        let back = recompose(&r, &s, 0.0).unwrap();
        for (i, _, _) in s.valid() {
            prop_assert!((back.value(i) - psi.value(i)).norm() <= 1e-12);
        }
        for w2 in s.valid().collect::<Vec<_>>().windows(2) {
            if w2[1].0 == w2[0].0 + 1 {
                prop_assert!((w2[1].2 - w2[0].2).abs() <= std::f64::consts::PI);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn harmonic_identity_and_sturm_nodes(omega in 0.3..2.0f64, m in 0.5..2.0f64, n in 0usize..5) {
        let fam = ReferenceFamily::new(Family::Harmonic { omega }, PhysParams::new(m, 1.0).unwrap()).unwrap();
        let g = fam.default_grid(0.005 * fam.length_scale()).unwrap();
        let v = fam.classical_potential_field(&g).unwrap();
        let sol = solve_bound_state(&v, n, &fam.params, BoundaryChoice::DirichletBox).unwrap();
        let rep = stationary_identity_residual(&v, &sol, &fam.params, 1e-6).unwrap();
        prop_assert!(rep.max_residual <= 1e-3 * sol.energy.abs().max(1.0));
        prop_assert!((sol.energy - fam.reference_energy(n).unwrap()).abs() <= 1e-4 * sol.energy);
        prop_assert_eq!(node_count(&sol.amplitude, &node_mask(&sol.amplitude, 1e-6)), n);
    }

    #[test]
    fn symmetric_pairs_never_cross(offset in 2.0..6.0f64, sigma in 0.5..1.5f64, x0 in 0.05..2.0f64) {
        let p = PhysParams::new(1.0, 1.0).unwrap();
        let spec = PacketSpec::two_gaussian(offset, sigma, p).unwrap();
        let trajs = bohm_trajectories(&spec, &[-x0, x0], 3.0, 1e-2).unwrap();
        for t in &trajs {
            prop_assert!(t.positions.iter().all(|x| x.signum() == t.initial_position.signum()));
        }
        for (a, b) in trajs[0].positions.iter().zip(&trajs[1].positions) {
            prop_assert!((a + b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn residuals_ignore_global_phase(k in -2.0..2.0f64, sigma in 0.6..1.5f64, t0 in 0.0..2.0f64) {
        let p = PhysParams::new(1.0, 1.0).unwrap();
        let spec = PacketSpec::new(
            vec![PacketComponent { center: -1.0, sigma, k, weight: 1.0 }, PacketComponent { center: 1.5, sigma, k: -k, weight: 0.5 }],
            p,
        )
        .unwrap();
        let theta = std::f64::consts::PI / 3.0;
        let g = Grid::with_spacing(GridKind::Cartesian, -12.0, 12.0, 0.01).unwrap();
        let snaps: Vec<_> = (0..3).map(|j| spec.sample(&g, t0 + j as f64 * 1e-3).unwrap()).collect();
        let phased: Vec<_> = snaps.iter().map(|s| s.with_global_phase(theta)).collect();
        let r0 = continuity_residual(&snaps, &p).unwrap();
        let r1 = continuity_residual(&phased, &p).unwrap();
        prop_assert_eq!(r0.mask(), r1.mask());
        for (a, b) in r0.values().iter().zip(r1.values()) {
            prop_assert!((a - b).abs() <= 1e-9);
        }

        let rotated = Phased { inner: &spec, theta };
        let a = bohm_trajectories(&spec, &[0.3], 1.0, 1e-3).unwrap();
        let b = bohm_trajectories(&rotated, &[0.3], 1.0, 1e-3).unwrap();
        for (x, y) in a[0].positions.iter().zip(&b[0].positions) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
        let na = newton_residual(&a[0], &spec).unwrap();
        let nb = newton_residual(&b[0], &rotated).unwrap();
        prop_assert!((na - nb).abs() <= 1e-6 * na.max(1e-3));
    }
}
