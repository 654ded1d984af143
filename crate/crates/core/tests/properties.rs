use proptest::prelude::*;
use riskytime::affine::{riccati_solve, AffineParams, CompensatorLoadings, RiskyDates};
use riskytime::default_sim::{first_passage, survival_probability, HazardAtom, HazardPath};
use riskytime::grid::PiecewiseLinear;
use riskytime::merton::{gaussian_phi_expectation, variance_path, MertonSetup};
use riskytime::model::{CompensatorSpec, ForwardSurface, RiskySchedule, RiskyTime};
use riskytime::par::{map_paths, Execution};

fn schedule(atoms: &[(f64, f64)]) -> RiskySchedule {
    RiskySchedule::new(
        atoms
            .iter()
            .map(|&(u, g)| RiskyTime::new(u, g, None).unwrap())
            .collect(),
    )
    .unwrap()
}

fn two_atoms() -> impl Strategy<Value = Vec<(f64, f64)>> {
    (0.1f64..0.9, 1.1f64..1.9, 0.0f64..0.9, 0.0f64..0.9)
        .prop_map(|(u1, u2, g1, g2)| vec![(u1, g1), (u2, g2)])
}

proptest! {
    #[test]
    fn bond_prices_are_discount_factors(
        f in proptest::collection::vec(0.0f64..0.2, 5),
        premiums in (0.0f64..1.0, 0.0f64..1.0),
        atoms in two_atoms(),
        t in 0.0f64..2.0,
        dm in 0.0f64..2.0,
    ) {
        let curve = PiecewiseLinear::new(vec![0.0, 0.5, 1.0, 1.5, 2.0], f).unwrap();
        let grid: Vec<f64> = (0..=8).map(|k| k as f64 * 0.25).collect();
        let s = ForwardSurface::static_curve(
            grid, &curve, &[premiums.0, premiums.1], schedule(&atoms)).unwrap();
        let m = (t + dm).min(2.0);
        let p = s.bond_price(t, m, false).unwrap();
        prop_assert!(p > 0.0 && p <= 1.0);
        prop_assert!(s.bond_price_left(t, m, false).unwrap() >= p);
        prop_assert_eq!(s.bond_price(t, t, false).unwrap(), 1.0);
        prop_assert_eq!(s.bond_price(t, m, true).unwrap(), 0.0);
        if m < 2.0 {
            prop_assert!(s.bond_price(t, (m + 0.1).min(2.0), false).unwrap() <= p);
        }
    }

    #[test]
    fn survival_is_exp_of_minus_h_prime(
        h in proptest::collection::vec(0.0f64..0.5, 3),
        atoms in two_atoms(),
        t in 0.0f64..2.0,
    ) {
        let spec = CompensatorSpec::new(
            PiecewiseLinear::new(vec![0.0, 1.0, 2.0], h).unwrap(),
            schedule(&atoms),
        ).unwrap();
        let s = survival_probability(&spec, t).unwrap();
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert!((-s.ln() - spec.h_prime(t).unwrap()).abs() < 1e-14);
        let later = (t + 0.05).min(2.0);
        prop_assert!(survival_probability(&spec, later).unwrap() <= s);
        prop_assert!(spec.compensator_path(later).unwrap() >= spec.compensator_path(t).unwrap());
    }

    #[test]
    fn first_passage_is_monotone_in_the_threshold(
        lam in proptest::collection::vec(0.0f64..2.0, 4),
        lp in 0.0f64..1.0,
        z1 in 0.0f64..3.0,
        dz in 0.0f64..1.0,
    ) {
        let lam = PiecewiseLinear::new(vec![0.0, 1.0, 2.0, 3.0], lam).unwrap();
        let path = HazardPath::new(lam, vec![HazardAtom { u: 1.5, lam_prime: lp }], 3.0).unwrap();
        let a = first_passage(&path, z1);
        let b = first_passage(&path, z1 + dz);
        prop_assert!(a.tau <= b.tau);
        if a.tau.is_finite() {
            // the cumulative hazard reaches the threshold at tau
            prop_assert!(path.cumulative(a.tau).unwrap() >= z1 - 1e-9);
        }
    }

    #[test]
    fn phi_expectation_reflects(a in -5.0f64..5.0, b in 0.0f64..3.0) {
        let p = gaussian_phi_expectation(a, b).unwrap();
        let q = gaussian_phi_expectation(-a, b).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!((p + q - 1.0).abs() < 1e-15);
    }

    #[test]
    fn variance_only_decreases(var_x in 0.01f64..1.0, sigma in 0.05f64..1.0, eta in 0.01f64..2.0,
                               t in 0.0f64..5.0, dt in 0.0f64..1.0) {
        let s = MertonSetup {
            v0: 1.0, sigma, mu_x: 0.0, var_x, k: 0.8, k_prime: 0.7,
            t_pay: 3.0, u_pay: 5.0, news_time: 2.0, sigma_eta: eta, r: 0.0,
        };
        let a = variance_path(&s, t);
        let b = variance_path(&s, t + dt);
        prop_assert!(b <= a && b > 0.0);
        if t < 2.0 && t + dt >= 2.0 {
            prop_assert!(b < a);
        }
    }

    #[test]
    fn constant_hazard_loading_integrates_linearly(c in 0.0f64..1.0, m in 0.1f64..3.0) {
        let params = AffineParams::new(
            1, 1, vec![0.0], vec![vec![0.0]], vec![vec![0.0]], vec![vec![vec![0.0]]],
        ).unwrap();
        let mut loadings = CompensatorLoadings::zero(1, 0);
        loadings.phi0 = PiecewiseLinear::constant(c, 0.0, 0.0).unwrap();
        let sol = riccati_solve(&params, &loadings, &RiskyDates::default(), m, 1e-2).unwrap();
        for k in 0..=10 {
            let t = m * k as f64 / 10.0;
            let (a, b) = sol.eval(t).unwrap();
            prop_assert!((a - c * (m - t)).abs() < 1e-12);
            prop_assert_eq!(b[0], 0.0);
        }
    }

    #[test]
    fn ensembles_ignore_scheduling(n in 0usize..300, seed in any::<u64>()) {
        use rand::Rng;
        let f = |i: u64| riskytime::par::path_rng(seed, i).random::<u64>();
        prop_assert_eq!(map_paths(Execution::Sequential, n, f), map_paths(Execution::Parallel, n, f));
    }
}
