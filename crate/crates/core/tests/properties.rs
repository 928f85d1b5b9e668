use foliate_core::bending::{epsilon_deformed_bending, total_bending};
use foliate_core::bounds::{einstein_bound, lower_bound, BoundCase, BoundCaseKind};
use foliate_core::tube::jacobi_ode_oracle;
use foliate_core::{
    BendingResult, Block, Family, FocalVariety, InitKind, JacobiSolution, ModelSpace, QuadratureConfig, SplitDims,
    TorsionCoefficients, TubeProfile,
};
use num_rational::Rational64;
use proptest::prelude::*;

fn split() -> impl Strategy<Value = SplitDims> {
    (1usize..=5, 1usize..=5).prop_map(|(q, h)| SplitDims::new(q + h, q).unwrap())
}

fn cfg() -> QuadratureConfig<f64> {
    QuadratureConfig::default().with_rel_tol(1e-11)
}

fn space() -> impl Strategy<Value = ModelSpace<f64>> {
    prop_oneof![
        (2usize..=7).prop_map(|m| ModelSpace::sphere(m, 1.0).unwrap()),
        (2usize..=7).prop_map(|m| ModelSpace::real_projective(m, 1.0).unwrap()),
        (1usize..=5).prop_map(|m| ModelSpace::complex_projective(m, 1.0).unwrap()),
        (1usize..=4).prop_map(|m| ModelSpace::quaternionic_projective(m, 1.0).unwrap()),
        Just(ModelSpace::cayley_plane(1.0).unwrap()),
    ]
}

fn finite_profile() -> impl Strategy<Value = (&'static str, &'static str)> {
    prop::sample::select(vec![
        ("S:3", "point"),
        ("S:5", "point"),
        ("RP:4", "point"),
        ("S:5", "sub:S:2"),
        ("CP:3", "sub:CP:1"),
        ("HP:2", "point"),
        ("HP:3", "sub:HP:1"),
        ("CaP2", "point"),
    ])
}

fn profile(space: &str, focal: &str, lambda: f64) -> TubeProfile<f64> {
    TubeProfile::new(ModelSpace::parse(space, lambda).unwrap(), FocalVariety::parse(focal).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn torsion_identities_hold_in_floating_point(dims in split(), seed in any::<u64>()) {
        let xi = TorsionCoefficients::<f64>::random(dims, seed);
        let tol = 64.0 * f64::EPSILON * xi.roundoff_scale().max(1.0);
        let d = xi.derive();
        prop_assert!((d.norm_xi_sq - 2.0 * (d.sigma_v + d.sigma_h)).abs() <= tol);
        let (rv, rh) = xi.mu_identity_residual();
        prop_assert!(rv.abs() <= tol && rh.abs() <= tol);
        let (sv, sh) = xi.sigma_inequality_slack();
        prop_assert!(sv >= -tol && sh >= -tol);
        let (qv, qh) = xi.sigma_slack_sum_of_squares();
        prop_assert!((sv - qv).abs() <= tol && (sh - qh).abs() <= tol);
        prop_assert!(xi.mean_curvature_bound_slack() >= -tol);
        let (bv, bh) = xi.block_mean_curvature_slacks();
        prop_assert!(bv >= -tol && bh >= -tol);
    }

    #[test]
    fn torsion_identities_are_exact_over_rationals(dims in split(), seed in any::<u64>()) {
        let xi = TorsionCoefficients::<Rational64>::random_dyadic(dims, seed, 6);
        let zero = Rational64::from_integer(0);
        let d = xi.derive();
        prop_assert_eq!(d.norm_xi_sq, Rational64::from_integer(2) * (d.sigma_v + d.sigma_h));
        prop_assert_eq!(xi.mu_identity_residual(), (zero, zero));
        prop_assert_eq!(xi.sigma_inequality_slack(), xi.sigma_slack_sum_of_squares());
        let (sv, sh) = xi.sigma_inequality_slack();
        prop_assert!(sv >= zero && sh >= zero);
    }

    #[test]
    fn umbilical_blocks_attain_sigma_equality(h in 1usize..=4, q in 2usize..=5, seed in any::<u64>()) {
        let dims = SplitDims::new(q + h, q).unwrap();
        let integrable = q >= 3;
        let xi = TorsionCoefficients::<Rational64>::random_dyadic(dims, seed, 6)
            .make_umbilical(Block::Vertical, integrable, seed ^ 1);
        prop_assert_eq!(xi.sigma_inequality_slack().0, Rational64::from_integer(0));
        let flags = xi.classify(Rational64::from_integer(0));
        prop_assert!(flags.v_umbilical);
        prop_assert_eq!(flags.v_integrable, integrable);
    }

    #[test]
    fn horizontal_umbilical_witness(q in 1usize..=4, h in 2usize..=5, seed in any::<u64>()) {
        let dims = SplitDims::new(q + h, q).unwrap();
        let xi = TorsionCoefficients::<Rational64>::random_dyadic(dims, seed, 6)
            .make_umbilical(Block::Horizontal, h >= 3, seed);
        prop_assert_eq!(xi.sigma_inequality_slack().1, Rational64::from_integer(0));
        prop_assert!(xi.classify(Rational64::from_integer(0)).h_umbilical);
    }

    #[test]
    fn spectra_are_consistent(s in space()) {
        let spec = s.jacobi_spectrum();
        prop_assert_eq!(spec.iter().map(|(_, m)| m).sum::<usize>(), s.dim() - 1);
        prop_assert!(spec.iter().all(|(k, _)| *k > 0.0));
        let ric: f64 = spec.iter().map(|(k, m)| k * *m as f64).sum();
        prop_assert!((s.scalar_curvature() - s.dim() as f64 * ric).abs() < 1e-9);
    }

    #[test]
    fn mixed_scalar_curvature_is_symmetric(s in space(), q in 1usize..=16) {
        let n = s.dim();
        prop_assume!(q < n);
        if let (Ok(a), Ok(b)) = (s.mixed_scalar_curvature(q), s.mixed_scalar_curvature(n - q)) {
            prop_assert!((a - b).abs() < 1e-12);
            if s.is_constant_curvature() {
                let kappa = s.jacobi_spectrum()[0].0;
                prop_assert!((a + b - 2.0 * (q * (n - q)) as f64 * kappa).abs() < 1e-9);
            } else if q % (s.nu() + 1) == 0 {
                prop_assert!((a + b - 2.0 * (q * (n - q)) as f64 * s.lambda()).abs() < 1e-9);
            }
        }
        prop_assert_eq!(s.mixed_scalar_curvature(n).unwrap(), 0.0);
    }

    #[test]
    fn jacobi_closed_forms_match_ode(kappa in 0.0f64..6.0, t in 0.02f64..0.98, normal in any::<bool>()) {
        let init = if normal { InitKind::Normal } else { InitKind::Tangent };
        let sol = JacobiSolution::new(kappa, init).unwrap();
        let r = if kappa > 0.0 { t * std::f64::consts::PI / kappa.sqrt() } else { 3.0 * t };
        let oracle = jacobi_ode_oracle(kappa, init, r, 4000).unwrap();
        prop_assert!((sol.f(r) - oracle).abs() <= 1e-9);
    }

    #[test]
    fn riccati_and_log_derivative(entry in finite_profile(), lambda in 0.3f64..3.0, t in 0.05f64..0.95) {
        let p = profile(entry.0, entry.1, lambda);
        let r = t * p.mu();
        let d = 1e-6 * p.mu();
        for (i, b) in p.branches().iter().enumerate() {
            let deriv = (p.alpha(i, r + d) - p.alpha(i, r - d)) / (2.0 * d);
            let a = p.alpha(i, r);
            let rhs = -b.kappa - a * a;
            prop_assert!((deriv - rhs).abs() <= 1e-6 * rhs.abs().max(1.0));
        }
        let logd = (p.theta(r + d).ln() - p.theta(r - d).ln()) / (2.0 * d);
        prop_assert!((logd - p.sum_alpha(r)).abs() <= 1e-6 * p.sum_alpha(r).abs().max(1.0));
    }

    #[test]
    fn radial_second_mean_curvature_matches_torsion(entry in finite_profile(), t in 0.05f64..0.95) {
        let p = profile(entry.0, entry.1, 1.0);
        let r = t * p.mu();
        let d = p.radial_coefficients(r).unwrap().derive();
        let direct = p.second_mean_curvature(r);
        prop_assert!((d.mu_h - direct).abs() <= 1e-10 * direct.abs().max(1.0));
        prop_assert_eq!(d.mu_v, 0.0);
        prop_assert!((0.5 * d.sigma_h - 0.5 * p.sum_alpha_sq(r)).abs() <= 1e-10 * p.sum_alpha_sq(r).max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bending_scales_linearly_in_lambda(entry in finite_profile(), lambda in 0.25f64..4.0) {
        let one = total_bending(&profile(entry.0, entry.1, 1.0), &cfg()).unwrap().per_volume.value().unwrap();
        let scaled = total_bending(&profile(entry.0, entry.1, lambda), &cfg()).unwrap().per_volume.value().unwrap();
        prop_assert!((scaled - lambda * one).abs() <= 1e-8 * scaled.abs());
    }

    #[test]
    fn epsilon_deformation_is_monotone(entry in finite_profile(), a in 0.0f64..1.5, b in 0.0f64..1.5) {
        let p = profile(entry.0, entry.1, 1.0);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let blo = epsilon_deformed_bending(&p, lo, &cfg()).unwrap().per_volume.value().unwrap();
        let bhi = epsilon_deformed_bending(&p, hi, &cfg()).unwrap().per_volume.value().unwrap();
        let full = total_bending(&p, &cfg()).unwrap().per_volume.value().unwrap();
        prop_assert!(blo <= bhi + 1e-10 && bhi <= full + 1e-10 && blo >= 0.0);
    }

    #[test]
    fn case_one_bound_is_below_finite_bending(entry in finite_profile()) {
        let p = profile(entry.0, entry.1, 1.0);
        let bound = lower_bound(&BoundCase::new(BoundCaseKind::IQ1, *p.space(), 1).unwrap()).unwrap().value;
        let value = total_bending(&p, &cfg()).unwrap().per_volume.value().unwrap();
        prop_assert!(bound <= value + 1e-10);
        if matches!(p.space().family(), Family::Sphere | Family::RealProjective) && entry.1 == "point" {
            prop_assert!((bound - value).abs() <= 1e-8);
        }
    }
}

#[test]
fn error_estimates_are_honest() {
    for (space, focal) in [("S:4", "point"), ("HP:2", "point"), ("S:5", "sub:S:2"), ("CaP2", "point")] {
        let p = profile(space, focal, 1.0);
        let coarse_cfg = QuadratureConfig::default().with_rel_tol(1e-6);
        let fine_cfg = QuadratureConfig::default().with_rel_tol(5e-7);
        let (coarse, err) = match total_bending(&p, &coarse_cfg).unwrap().per_volume {
            BendingResult::Finite { value, error_estimate } => (value, error_estimate),
            other => panic!("{other:?}"),
        };
        let fine = total_bending(&p, &fine_cfg).unwrap().per_volume.value().unwrap();
        assert!((coarse - fine).abs() <= err.max(f64::EPSILON * coarse.abs() * 16.0), "{space} {focal}");
    }
}

#[test]
fn einstein_bound_matches_case_one_on_constant_curvature() {
    for m in 3..9 {
        for s in [ModelSpace::sphere(m, 0.7f64).unwrap(), ModelSpace::real_projective(m, 0.7).unwrap()] {
            let case_one = lower_bound(&BoundCase::new(BoundCaseKind::IQ1, s, 1).unwrap()).unwrap().value;
            assert!((einstein_bound(&s).unwrap() - case_one).abs() < 1e-14);
        }
    }
}

#[test]
fn deterministic_across_thread_counts() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| foliate_core::table1_report(1.0, &cfg()).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one, four);
}
