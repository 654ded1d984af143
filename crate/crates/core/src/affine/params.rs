use crate::error::{invalid, Error, Result};
use crate::grid::{check_strictly_increasing, PiecewiseLinear};
use crate::model::RiskySchedule;
use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

const SYM_TOL: f64 = 1e-12;

/// Affine diffusion on `ℝ₊^m × ℝ^{d−m}` with drift `μ(x) = μ_0 + Σ x_i μ_i`
/// and diffusion `½ σ(x)ᵀσ(x) = σ_0 + Σ x_i σ_i`.
///
/// The cone coordinates come first. `mu[i]` is the drift loading of `x_i`
/// (column `i` of the drift matrix) and `sigma[i]` the matching diffusion
/// loading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAffineParams", into = "RawAffineParams")]
pub struct AffineParams {
    dim: usize,
    cone_dim: usize,
    mu0: Vec<f64>,
    mu: Vec<Vec<f64>>,
    sigma0: Vec<Vec<f64>>,
    sigma: Vec<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
struct RawAffineParams {
    dim: usize,
    cone_dim: usize,
    mu0: Vec<f64>,
    mu: Vec<Vec<f64>>,
    sigma0: Vec<Vec<f64>>,
    sigma: Vec<Vec<Vec<f64>>>,
}

impl TryFrom<RawAffineParams> for AffineParams {
    type Error = Error;
    fn try_from(r: RawAffineParams) -> Result<Self> {
        AffineParams::new(r.dim, r.cone_dim, r.mu0, r.mu, r.sigma0, r.sigma)
    }
}

impl From<AffineParams> for RawAffineParams {
    fn from(p: AffineParams) -> Self {
        RawAffineParams {
            dim: p.dim,
            cone_dim: p.cone_dim,
            mu0: p.mu0,
            mu: p.mu,
            sigma0: p.sigma0,
            sigma: p.sigma,
        }
    }
}

fn check_square(m: &[Vec<f64>], d: usize, name: &str) -> Result<()> {
    if m.len() != d || m.iter().any(|row| row.len() != d) {
        return Err(invalid(format!("{name} must be {d} x {d}")));
    }
    if m.iter().flatten().any(|v| !v.is_finite()) {
        return Err(invalid(format!("{name} has a non-finite entry")));
    }
    Ok(())
}

fn check_psd(m: &[Vec<f64>], name: &str) -> Result<()> {
    let d = m.len();
    for k in 0..d {
        for l in 0..k {
            if (m[k][l] - m[l][k]).abs() > SYM_TOL {
                return Err(Error::NotAdmissible(format!("{name} is not symmetric")));
            }
        }
    }
    let mat = DMatrix::from_fn(d, d, |k, l| m[k][l]);
    let min_eig = SymmetricEigen::new(mat).eigenvalues.min();
    if min_eig < -SYM_TOL {
        return Err(Error::NotAdmissible(format!(
            "{name} is not positive semidefinite (eigenvalue {min_eig})"
        )));
    }
    Ok(())
}

impl AffineParams {
    pub fn new(
        dim: usize,
        cone_dim: usize,
        mu0: Vec<f64>,
        mu: Vec<Vec<f64>>,
        sigma0: Vec<Vec<f64>>,
        sigma: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        if dim == 0 || cone_dim > dim {
            return Err(invalid(format!(
                "need 0 <= cone_dim <= dim, dim > 0 (got {cone_dim}, {dim})"
            )));
        }
        if mu0.len() != dim || mu.len() != dim || mu.iter().any(|v| v.len() != dim) {
            return Err(invalid(format!(
                "drift loadings must be {dim}-vectors, {dim} of them"
            )));
        }
        if mu0
            .iter()
            .chain(mu.iter().flatten())
            .any(|v| !v.is_finite())
        {
            return Err(invalid("drift loadings must be finite"));
        }
        check_square(&sigma0, dim, "sigma0")?;
        if sigma.len() != dim {
            return Err(invalid(format!("need {dim} diffusion loadings")));
        }
        for (i, s) in sigma.iter().enumerate() {
            check_square(s, dim, &format!("sigma[{i}]"))?;
        }
        let p = Self {
            dim,
            cone_dim,
            mu0,
            mu,
            sigma0,
            sigma,
        };
        p.check_admissible()?;
        Ok(p)
    }

    fn check_admissible(&self) -> Result<()> {
        let (d, m) = (self.dim, self.cone_dim);
        let na = |msg: String| Err(Error::NotAdmissible(msg));
        check_psd(&self.sigma0, "sigma0")?;
        for (i, s) in self.sigma.iter().enumerate() {
            check_psd(s, &format!("sigma[{i}]"))?;
        }
        for k in 0..m {
            for l in 0..d {
                if self.sigma0[k][l] != 0.0 {
                    return na(format!("sigma0[{k}][{l}] touches cone coordinate {k}"));
                }
            }
        }
        for j in m..d {
            if self.sigma[j].iter().flatten().any(|&v| v != 0.0) {
                return na(format!("diffusion cannot load on real coordinate {j}"));
            }
        }
        for i in 0..m {
            for k in 0..m {
                if k == i {
                    continue;
                }
                for l in 0..d {
                    if self.sigma[i][k][l] != 0.0 {
                        return na(format!(
                            "sigma[{i}][{k}][{l}]: cone coordinate {k} cannot diffuse through x_{i}"
                        ));
                    }
                }
            }
        }
        for k in 0..m {
            if self.mu0[k] < 0.0 {
                return na(format!("mu0[{k}] = {} points out of the cone", self.mu0[k]));
            }
        }
        for j in m..d {
            for k in 0..m {
                if self.mu[j][k] != 0.0 {
                    return na(format!(
                        "cone drift {k} cannot depend on real coordinate {j}"
                    ));
                }
            }
        }
        for i in 0..m {
            for k in 0..m {
                if k != i && self.mu[i][k] < 0.0 {
                    return na(format!(
                        "mu[{i}][{k}] = {} points out of the cone",
                        self.mu[i][k]
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cone_dim(&self) -> usize {
        self.cone_dim
    }

    pub fn mu0(&self) -> &[f64] {
        &self.mu0
    }

    pub fn mu(&self, i: usize) -> &[f64] {
        &self.mu[i]
    }

    pub fn sigma0(&self) -> &[Vec<f64>] {
        &self.sigma0
    }

    pub fn sigma(&self, i: usize) -> &[Vec<f64>] {
        &self.sigma[i]
    }

    pub fn in_state_space(&self, x: &[f64]) -> bool {
        x.len() == self.dim
            && x.iter().all(|v| v.is_finite())
            && x[..self.cone_dim].iter().all(|&v| v >= 0.0)
    }

    /// `μ(x)`.
    pub fn drift(&self, x: &[f64]) -> Vec<f64> {
        let mut out = self.mu0.clone();
        for (xi, col) in x.iter().zip(&self.mu) {
            for (o, c) in out.iter_mut().zip(col) {
                *o += xi * c;
            }
        }
        out
    }

    /// `σ_0 + Σ x_i σ_i`, half the instantaneous covariance.
    pub fn half_covariance(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut out = self.sigma0.clone();
        for (xi, s) in x.iter().zip(&self.sigma) {
            for (orow, srow) in out.iter_mut().zip(s) {
                for (o, v) in orow.iter_mut().zip(srow) {
                    *o += xi * v;
                }
            }
        }
        out
    }

    /// Symmetric square root of `2(σ_0 + Σ x_i σ_i)`, used as `σ(x)`.
    pub fn diffusion(&self, x: &[f64]) -> DMatrix<f64> {
        let d = self.dim;
        let half = self.half_covariance(x);
        if d == 1 {
            return DMatrix::from_element(1, 1, (2.0 * half[0][0]).max(0.0).sqrt());
        }
        let cov = DMatrix::from_fn(d, d, |k, l| 2.0 * half[k][l]);
        let eig = SymmetricEigen::new(cov);
        let sqrt_vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
        &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose()
    }
}

/// Loadings of the affine compensator: hazard `φ_0(s) + ψ_0(s)ᵀX_s` and atom
/// exponents `φ_i + ψ_iᵀX_{u_i}` at the risky dates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompensatorLoadings {
    pub phi0: PiecewiseLinear,
    pub psi0: Vec<PiecewiseLinear>,
    pub jumps: Vec<AtomLoading>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomLoading {
    pub phi: f64,
    pub psi: Vec<f64>,
}

impl CompensatorLoadings {
    /// All-zero loadings for `dim` factors and `n_atoms` risky dates.
    pub fn zero(dim: usize, n_atoms: usize) -> Self {
        let zero = PiecewiseLinear::constant(0.0, 0.0, 0.0).expect("valid constant");
        Self {
            phi0: zero.clone(),
            psi0: vec![zero; dim],
            jumps: vec![
                AtomLoading {
                    phi: 0.0,
                    psi: vec![0.0; dim]
                };
                n_atoms
            ],
        }
    }

    /// Checks that hazard and atoms are non-negative on the whole state
    /// space of `params`, and that there is one atom loading per date.
    pub fn validate(&self, params: &AffineParams, dates: &RiskyDates) -> Result<()> {
        let (d, m) = (params.dim(), params.cone_dim());
        if self.psi0.len() != d {
            return Err(invalid(format!("psi0 needs {d} components")));
        }
        if self.jumps.len() != dates.len() {
            return Err(invalid(format!(
                "{} atom loadings for {} risky dates",
                self.jumps.len(),
                dates.len()
            )));
        }
        if self.phi0.min_value() < 0.0 {
            return Err(Error::NotAdmissible("phi0 must be non-negative".into()));
        }
        for (k, p) in self.psi0.iter().enumerate() {
            if k < m && p.min_value() < 0.0 {
                return Err(Error::NotAdmissible(format!(
                    "psi0[{k}] must be non-negative"
                )));
            }
            if k >= m && p.values().iter().any(|&v| v != 0.0) {
                return Err(Error::NotAdmissible(format!(
                    "psi0[{k}] loads on a real coordinate"
                )));
            }
        }
        for (i, j) in self.jumps.iter().enumerate() {
            if j.psi.len() != d || !j.phi.is_finite() || j.psi.iter().any(|v| !v.is_finite()) {
                return Err(invalid(format!(
                    "atom loading {i} must be finite with {d} components"
                )));
            }
            if j.phi < 0.0
                || j.psi[..m].iter().any(|&v| v < 0.0)
                || j.psi[m..].iter().any(|&v| v != 0.0)
            {
                return Err(Error::NotAdmissible(format!(
                    "atom loading {i} can be negative on the state space"
                )));
            }
        }
        Ok(())
    }

    /// `φ_0(s) + ψ_0(s)ᵀx`.
    pub fn hazard(&self, s: f64, x: &[f64]) -> f64 {
        self.phi0.eval(s)
            + self
                .psi0
                .iter()
                .zip(x)
                .map(|(p, xi)| p.eval(s) * xi)
                .sum::<f64>()
    }

    /// `φ_i + ψ_iᵀx`.
    pub fn atom_exponent(&self, i: usize, x: &[f64]) -> f64 {
        let j = &self.jumps[i];
        j.phi + j.psi.iter().zip(x).map(|(p, xi)| p * xi).sum::<f64>()
    }
}

/// Strictly increasing positive risky dates of an affine model.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RiskyDates(Vec<f64>);

impl RiskyDates {
    pub fn new(dates: Vec<f64>) -> Result<Self> {
        check_strictly_increasing(&dates, "risky dates")?;
        if dates.first().is_some_and(|&u| u <= 0.0) {
            return Err(invalid("risky dates must be positive"));
        }
        Ok(Self(dates))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<f64>> for RiskyDates {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        RiskyDates::new(v)
    }
}

impl From<RiskyDates> for Vec<f64> {
    fn from(d: RiskyDates) -> Self {
        d.0
    }
}

impl TryFrom<&RiskySchedule> for RiskyDates {
    type Error = Error;
    fn try_from(s: &RiskySchedule) -> Result<Self> {
        RiskyDates::new(s.times())
    }
}
