//! Library results against independent reference computations.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use riskytime::affine::{affine_compensator, cir_closed_form, riccati_solve, CirParams, StatePath};
use riskytime::merton::{
    default_prob_t, filter_step, gaussian_phi_expectation, news_update, variance_path, FilterState,
    MertonSetup,
};
use riskytime::normal::cdf;
use riskytime::par::path_rng;

/// Physicists' Gauss-Hermite rule by Golub-Welsch.
fn gauss_hermite(n: usize) -> Vec<(f64, f64)> {
    let mut j = DMatrix::zeros(n, n);
    for k in 1..n {
        let off = (k as f64 / 2.0).sqrt();
        j[(k, k - 1)] = off;
        j[(k - 1, k)] = off;
    }
    let eig = SymmetricEigen::new(j);
    (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], std::f64::consts::PI.sqrt() * v0 * v0)
        })
        .collect()
}

#[test]
fn phi_expectation_matches_hermite_quadrature() {
    let rule = gauss_hermite(64);
    for i in 0..20 {
        for j in 0..20 {
            let a = -3.0 + 6.0 * i as f64 / 19.0;
            let b = 2.0 * j as f64 / 19.0;
            let quad: f64 = rule
                .iter()
                .map(|&(x, w)| w * cdf(a + b * std::f64::consts::SQRT_2 * x))
                .sum::<f64>()
                / std::f64::consts::PI.sqrt();
            let got = gaussian_phi_expectation(a, b).unwrap();
            assert!((got - quad).abs() < 1e-10, "a={a} b={b}: {got} vs {quad}");
        }
    }
}

fn setup(var_x: f64, sigma: f64, s: f64, eta: f64) -> MertonSetup {
    MertonSetup {
        v0: 1.0,
        sigma,
        mu_x: 0.05,
        var_x,
        k: 0.8,
        k_prime: 0.7,
        t_pay: s + 1.0,
        u_pay: s + 3.0,
        news_time: s,
        sigma_eta: eta,
        r: 0.0,
    }
}

/// Posterior of `X ~ N(m, v)` after `Y_t = Xt + σW_t` and, optionally,
/// `Y′ = X + ηξ`.
fn conjugate(m: f64, v: f64, sigma: f64, t: f64, y: f64, news: Option<(f64, f64)>) -> (f64, f64) {
    let mut prec = 1.0 / v + t / (sigma * sigma);
    let mut num = m / v + y / (sigma * sigma);
    if let Some((yp, eta)) = news {
        prec += 1.0 / (eta * eta);
        num += yp / (eta * eta);
    }
    (num / prec, 1.0 / prec)
}

#[test]
fn filter_tracks_the_conjugate_posterior() {
    let s = setup(0.04, 0.2, 2.0, 0.1);
    let mut rng = path_rng(5, 0);
    let x: f64 = s.mu_x + s.var_x.sqrt() * rng.sample::<f64, _>(StandardNormal);
    let yp = x + s.sigma_eta * rng.sample::<f64, _>(StandardNormal);
    let dt = 1e-4;
    let n = (s.u_pay / dt).round() as usize;
    let k_news = (s.news_time / dt).round() as usize;
    let mut state = FilterState::prior(&s);
    let mut y = 0.0;
    for k in 1..=n {
        let dy = x * dt + s.sigma * dt.sqrt() * rng.sample::<f64, _>(StandardNormal);
        y += dy;
        state = filter_step(&state, dy, dt, &s).unwrap();
        if k == k_news {
            state = news_update(&state, yp, &s).unwrap();
        }
    }
    let (m, v) = conjugate(
        s.mu_x,
        s.var_x,
        s.sigma,
        s.u_pay,
        y,
        Some((yp, s.sigma_eta)),
    );
    assert!((state.sigma - v).abs() < 1e-12, "{} vs {v}", state.sigma);
    assert!((state.xhat - m).abs() < 1e-3, "{} vs {m}", state.xhat);
}

#[test]
fn variance_path_matches_conjugate_precision() {
    let s = setup(1.0, 1.0, 1.0, 1.0);
    let before = variance_path(&s, 1.0 - 1e-12);
    assert!((before - 0.5).abs() < 1e-11);
    assert!((variance_path(&s, 1.0) - 1.0 / 3.0).abs() < 1e-15);
    for &t in &[0.3, 1.7, 3.9] {
        let news = (t >= 1.0).then_some((0.0, 1.0));
        let (_, v) = conjugate(0.0, 1.0, 1.0, t, 0.0, news);
        assert!((variance_path(&s, t) - v).abs() < 1e-15);
    }
}

#[test]
fn news_update_is_the_two_observation_posterior() {
    // prior N(0.1, 0.5) at S, one reading with unit noise
    let s = setup(1.0, 1.0, 1.0, 1.0);
    let state = FilterState {
        t: 1.0,
        xhat: 0.1,
        sigma: 0.5,
    };
    let post = news_update(&state, 0.4, &s).unwrap();
    let prec = 1.0 / 0.5 + 1.0;
    let mean = (0.1 / 0.5 + 0.4) / prec;
    assert!((post.xhat - mean).abs() < 1e-15);
    assert!((post.xhat - 0.2).abs() < 1e-15);
    assert!((post.sigma - 1.0 / prec).abs() < 1e-15);
}

#[test]
fn default_probability_matches_two_level_monte_carlo() {
    let s = setup(0.04, 0.2, 1.0, 0.1);
    let state = FilterState {
        t: s.t_pay - 1.0,
        xhat: 0.05,
        sigma: 0.04,
    };
    let p = default_prob_t(&state, 1.0, &s).unwrap();
    let mut rng = path_rng(17, 0);
    let n = 1_000_000;
    let mut hits = 0usize;
    for _ in 0..n {
        let x = 0.05 + 0.2 * rng.sample::<f64, _>(StandardNormal);
        let z: f64 = rng.sample(StandardNormal);
        let log_v = x - 0.5 * 0.04 + 0.2 * z;
        if log_v < 0.8f64.ln() {
            hits += 1;
        }
    }
    let mc = hits as f64 / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!((mc - p).abs() < 3.0 * se, "mc {mc} vs {p} (se {se})");
}

#[test]
fn riccati_matches_cir_closed_form_in_every_branch() {
    let cir = CirParams::new(0.02, -0.3, 0.2, 0.5).unwrap();
    let (params, loadings, dates) = cir.to_affine(1.0).unwrap();
    for &m in &[0.5, 1.0, 1.5, 2.0] {
        let sol = riccati_solve(&params, &loadings, &dates, m, 1e-4).unwrap();
        for k in 0..=40 {
            let t = m * k as f64 / 40.0;
            let (a, b) = sol.eval(t).unwrap();
            let (ac, bc) = cir_closed_form(&cir, t, m, 1.0).unwrap();
            assert!(
                (a - ac).abs() < 1e-10 && (b[0] - bc).abs() < 1e-10,
                "t={t} T={m}"
            );
        }
    }
}

#[test]
fn atom_of_the_affine_compensator() {
    let cir = CirParams::new(0.02, -0.3, 0.2, 1.0).unwrap();
    let (_, mut loadings, dates) = cir.to_affine(1.0).unwrap();
    loadings.psi0[0] = riskytime::grid::PiecewiseLinear::constant(0.0, 0.0, 0.0).unwrap();
    let path = StatePath::constant(vec![0.0, 0.5, 1.0, 1.5], &[0.2]).unwrap();
    let h = affine_compensator(&loadings, &path, &dates, 1.5).unwrap();
    assert!((h - 0.181_269_246_922_018).abs() < 1e-12, "{h}");
    assert_eq!(
        affine_compensator(&loadings, &path, &dates, 0.9).unwrap(),
        0.0
    );
}
