use multiplier_lab::arith::{
    euler_split_coefficients, gauss_sum, pentagonal_coefficients, primitive_characters, CoefficientStream,
};
use multiplier_lab::farey::nearest_fraction;
use multiplier_lab::multipliers::{euler_f1_direct, euler_f2_direct, eval_multiplier, quadfield_multiplier, EvalParams, MultiplierSpec};
use multiplier_lab::operators::{
    apply_fractional_on, apply_stein_weiss, circulant_symbol, sw_conditions_check, BoxRegion, LatticeFunction, SWParams,
    WeightNorm,
};
use multiplier_lab::weaktype::{distribution_function, weak_norm, SampleGrid};
use multiplier_lab::Complex64;
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn stream() -> impl Strategy<Value = CoefficientStream> {
    prop_oneof![
        Just(CoefficientStream::all_ones()),
        Just(CoefficientStream::Pentagonal),
        Just(CoefficientStream::power(2).unwrap()),
        Just(CoefficientStream::power(3).unwrap()),
        Just(CoefficientStream::ideal_norm(-4).unwrap()),
        Just(CoefficientStream::ideal_norm(-23).unwrap()),
    ]
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fractional_is_linear(
        f in prop::collection::vec(complex(), 1..12),
        g in prop::collection::vec(complex(), 1..12),
        lo_f in -10i64..10,
        lo_g in -10i64..10,
        a in complex(),
        b in complex(),
        s in 0.05..0.95f64,
        stream in stream(),
    ) {
        let f = LatticeFunction::on_z(lo_f, f).unwrap();
        let g = LatticeFunction::on_z(lo_g, g).unwrap();
        let window = BoxRegion::interval(-12, 60).unwrap();
        let lhs = apply_fractional_on(&f.combine(a, &g, b).unwrap(), &stream, s, &window).unwrap();
        let tf = apply_fractional_on(&f, &stream, s, &window).unwrap();
        let tg = apply_fractional_on(&g, &stream, s, &window).unwrap();
        for (i, v) in lhs.values().iter().enumerate() {
            prop_assert!(close(*v, a * tf.values()[i] + b * tg.values()[i], 1e-12));
        }
    }

    /// With one factor, `γ = δ = 0` and sources left of every output point,
    /// `Σ_m |n − m|^{α−1} f(m)` is the one-sided operator with `s = 1 − α`.
    #[test]
    fn stein_weiss_reduces_to_fractional(
        values in prop::collection::vec(complex(), 1..16),
        alpha in 0.1..0.9f64,
        width in 1i64..30,
    ) {
        let len = values.len() as i64;
        let f = LatticeFunction::on_z(-len, values).unwrap();
        let window = BoxRegion::interval(1, width).unwrap();
        let params = SWParams::new(vec![alpha], 0.0, 0.0, 2.0, 2.0).unwrap();
        let sw = apply_stein_weiss(&f, &params, &window).unwrap();
        let frac = apply_fractional_on(&f, &CoefficientStream::all_ones(), 1.0 - alpha, &window).unwrap();
        for (x, y) in sw.values().iter().zip(frac.values()) {
            prop_assert!(close(*x, *y, 1e-12), "{x} vs {y}");
        }
    }

    #[test]
    fn sw_conditions_ignore_factor_order(
        factors in prop::collection::vec((1usize..4, 0.05..0.95f64), 1..4),
        gamma in -0.5..0.9f64,
        delta in -0.5..0.9f64,
        p in 1.05..3.0f64,
        dq in 0.0..4.0f64,
        rotate in 0usize..3,
    ) {
        let dims: Vec<usize> = factors.iter().map(|f| f.0).collect();
        let alphas: Vec<f64> = factors.iter().map(|f| f.1 * f.0 as f64).collect();
        let r = rotate % dims.len();
        let mut dims2 = dims.clone();
        let mut alphas2 = alphas.clone();
        dims2.rotate_left(r);
        alphas2.rotate_left(r);
        dims2.reverse();
        alphas2.reverse();
        for norm in [WeightNorm::Euclidean, WeightNorm::Sup] {
            let a = SWParams::new(alphas.clone(), gamma, delta, p, p + dq).unwrap().with_norm(norm);
            let b = SWParams::new(alphas2.clone(), gamma, delta, p, p + dq).unwrap().with_norm(norm);
            let ra = sw_conditions_check(&a, &dims).unwrap();
            let rb = sw_conditions_check(&b, &dims2).unwrap();
            prop_assert_eq!(ra.passed, rb.passed);
            let margins = |rep: &multiplier_lab::operators::SwReport| {
                let mut m: Vec<f64> = rep.conditions.iter().map(|c| c.margin).collect();
                m.sort_by(f64::total_cmp);
                m
            };
            for (x, y) in margins(&ra).iter().zip(margins(&rb)) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn circulant_symbol_samples_the_multiplier(
        log_g in 3u32..9,
        s in 0.0..0.95f64,
        stream in stream(),
    ) {
        let g = 1usize << log_g;
        let params = EvalParams::for_grid(g).unwrap();
        let spec = match &stream {
            CoefficientStream::Power { k } => MultiplierSpec::power(*k, s).unwrap(),
            other => MultiplierSpec::plain(other.clone(), s).unwrap(),
        };
        let sym = circulant_symbol(&stream, s, g, &params).unwrap();
        for (j, z) in sym.iter().enumerate() {
            let m = eval_multiplier(&spec, j as f64 / g as f64, &params);
            prop_assert!((z - m).norm() < 1e-9 * (1.0 + m.norm()), "j={j}: {z} vs {m}");
        }
    }

    #[test]
    fn weak_norm_is_homogeneous(
        mags in prop::collection::vec(0.0..100.0f64, 2..200),
        t in 0.01..100.0f64,
        r in 0.5..10.0f64,
        lo in 0.0..20.0f64,
        span in 0.0..80.0f64,
    ) {
        let grid = SampleGrid::from_magnitudes(mags.clone(), 0.0, 0).unwrap();
        let scaled = SampleGrid::from_magnitudes(mags.iter().map(|m| m * t).collect(), 0.0, 0).unwrap();
        for (a, b) in [(0.0, f64::INFINITY), (lo, lo + span)] {
            let w = weak_norm(&grid, r, (a, b)).unwrap();
            let ws = weak_norm(&scaled, r, (a * t, b * t)).unwrap();
            prop_assert!((ws - t * w).abs() <= 1e-12 * (t * w).max(1e-300), "{ws} vs {}", t * w);
        }
    }

    #[test]
    fn distribution_function_is_monotone(
        mags in prop::collection::vec(0.0..10.0f64, 2..300),
        mut alphas in prop::collection::vec(0.001..12.0f64, 0..40),
    ) {
        alphas.sort_by(f64::total_cmp);
        let grid = SampleGrid::from_magnitudes(mags, 0.0, 0).unwrap();
        let lambdas = distribution_function(&grid, &alphas);
        prop_assert_eq!(lambdas.len(), alphas.len());
        prop_assert!(lambdas.iter().all(|l| (0.0..=1.0).contains(l)));
        prop_assert!(lambdas.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn nearest_fraction_meets_the_dirichlet_bound(x in 1e-9..=1.0f64, q_max in 1i64..2000) {
        let (frac, delta) = nearest_fraction(x, q_max).unwrap();
        let (p, q) = (frac.p(), frac.q());
        prop_assert!(1 <= q && q <= q_max);
        prop_assert_eq!(num_integer::gcd(p, q), 1);
        prop_assert!(delta.abs() <= 1.0 / (q as f64 * (q_max + 1) as f64) + 1e-15);
        let back = (p as f64 / q as f64 + delta - x).rem_euclid(1.0);
        prop_assert!(back.min(1.0 - back) < 1e-12);
    }

    #[test]
    fn euler_halves_sum_to_pentagonal_series(x in 0.0..1.0f64, y in 0.01..0.5f64) {
        let m = 4000;
        let (f1, f2) = euler_split_coefficients(m);
        let pent = pentagonal_coefficients(m);
        prop_assert!((0..=m).all(|n| f1[n] + f2[n] == pent[n]));
        let series: Complex64 = pent
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(n, &a)| {
                let n = n as f64;
                a as f64 * (-2.0 * std::f64::consts::PI * n * y).exp()
                    * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * n * x)
            })
            .sum();
        let halves = euler_f1_direct(x, y, None).unwrap() + euler_f2_direct(x, y, None).unwrap();
        prop_assert!((series - halves).norm() < 1e-10, "{series} vs {halves}");
    }

    #[test]
    fn quadfield_paths_agree(
        disc in prop::sample::select(vec![-3i64, -4, -7, -8, -15, -20, -23, -47, -84]),
        s in 0.1..1.5f64,
        x in 0.0..1.0f64,
        n_max in 10u64..2000,
    ) {
        let v = quadfield_multiplier(disc, s, x, n_max).unwrap();
        prop_assert!(close(v.lattice, v.norm_counts, 1e-10), "{} vs {}", v.lattice, v.norm_counts);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauss_sums_have_modulus_sqrt_n(n in 3u64..400) {
        for chi in primitive_characters(n).unwrap() {
            let tau = gauss_sum(&chi).unwrap();
            prop_assert!((tau.norm_sqr() - n as f64).abs() < 1e-9 * n as f64);
        }
    }
}
