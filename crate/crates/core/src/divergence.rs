//! Divergences between distributions and their local quadratic structure.
//!
//! A divergence here is a smooth nonnegative discrepancy `D(S||R)` vanishing
//! iff `S = R`, with a positive-definite local matrix `A` (half the Hessian
//! of `S -> D(S||R)` at `S = R` in reduced coordinates). A divergence is
//! *invariant* when `A = eta * Sigma_P` for a `P`-independent constant
//! `eta > 0`, where `Sigma_P` is the inverse of the reduced multinomial
//! covariance. Invariance is what makes the test's null law asymptotically
//! pivotal, so detecting it numerically is a first-class operation.
//!
//! Reduced coordinates drop the last component: perturbing coordinate `i`
//! adds to `P_i` and subtracts from `P_k`, which is the convention baked into
//! `Sigma_P`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::simplex::Distribution;

/// Default finite-difference step factor; the actual step is this times the
/// smallest probability of the expansion point.
pub const DEFAULT_STEP_FACTOR: f64 = 1e-4;

/// Default relative Frobenius tolerance for invariance detection, an order
/// of magnitude above observed finite-difference noise.
pub const INVARIANCE_TOL: f64 = 1e-5;

/// A user-supplied convex generator for an f-divergence
/// `D_f(S||R) = sum_i R_i f(S_i / R_i)`.
#[derive(Clone)]
pub struct FDivGenerator {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    d2: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    /// `lim_{t->inf} f(t)/t`, weighting mass that `R` excludes; `+inf` when
    /// the generator grows superlinearly.
    slope_at_inf: f64,
}

impl core::fmt::Debug for FDivGenerator {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FDivGenerator")
            .field("name", &self.name)
            .finish()
    }
}

impl FDivGenerator {
    /// Register a generator. `f(1)` must vanish and `f` must be strictly
    /// convex at 1 (checked via `d2` when given, numerically otherwise).
    pub fn new(
        name: &str,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        d2: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
        slope_at_inf: f64,
    ) -> Result<Self> {
        if f(1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter("f-divergence generator must satisfy f(1) = 0"));
        }
        let gen = Self {
            name: name.to_string(),
            f,
            d2,
            slope_at_inf,
        };
        if gen.second_derivative_at_one() <= 0.0 {
            return Err(Error::InvalidParameter(
                "f-divergence generator must be strictly convex at 1",
            ));
        }
        Ok(gen)
    }

    /// The shipped squared-Hellinger generator `f(t) = (sqrt(t) - 1)^2`.
    pub fn squared_hellinger() -> Self {
        Self {
            name: "squared-hellinger".to_string(),
            f: Arc::new(|t: f64| {
                let s = t.sqrt() - 1.0;
                s * s
            }),
            d2: Some(Arc::new(|t: f64| 0.5 * t.powf(-1.5))),
            slope_at_inf: 1.0,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `f''(1)`, from the supplied derivative or a central second difference.
    pub fn second_derivative_at_one(&self) -> f64 {
        match &self.d2 {
            Some(d2) => d2(1.0),
            None => {
                let h = 1e-5;
                ((self.f)(1.0 + h) - 2.0 * (self.f)(1.0) + (self.f)(1.0 - h)) / (h * h)
            }
        }
    }
}

/// A divergence selected from the registry.
#[derive(Debug, Clone)]
pub enum Divergence {
    /// Kullback-Leibler divergence `sum S ln(S/R)`.
    Kl,
    /// Jensen-Shannon divergence, the two-KL midpoint average.
    Js,
    /// Renyi divergence of order `alpha` (`alpha > 0`, `alpha != 1`).
    Renyi { alpha: f64 },
    /// Pearson chi-square divergence `sum (S-R)^2 / R`.
    ChiSq,
    /// Squared Euclidean distance `sum (S-R)^2` (not invariant).
    SqL2,
    /// f-divergence with a user-supplied generator.
    FDiv(FDivGenerator),
}

impl Divergence {
    /// Renyi divergence with validated order.
    pub fn renyi(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha == 1.0 {
            return Err(Error::InvalidParameter("Renyi order must be positive and != 1"));
        }
        Ok(Self::Renyi { alpha })
    }

    /// Canonical spec string: `kl`, `js`, `renyi:<alpha>`, `chi2`, `sql2`,
    /// `fdiv:<generator>`.
    pub fn id(&self) -> String {
        match self {
            Self::Kl => "kl".to_string(),
            Self::Js => "js".to_string(),
            Self::Renyi { alpha } => format!("renyi:{alpha}"),
            Self::ChiSq => "chi2".to_string(),
            Self::SqL2 => "sql2".to_string(),
            Self::FDiv(g) => format!("fdiv:{}", g.name()),
        }
    }

    /// Parse the string grammar accepted by [`Divergence::id`].
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "kl" => Ok(Self::Kl),
            "js" => Ok(Self::Js),
            "chi2" => Ok(Self::ChiSq),
            "sql2" => Ok(Self::SqL2),
            _ => {
                if let Some(alpha) = s.strip_prefix("renyi:") {
                    let alpha: f64 = alpha
                        .parse()
                        .map_err(|_| Error::ParseDivergence(s.to_string()))?;
                    return Self::renyi(alpha);
                }
                if let Some(name) = s.strip_prefix("fdiv:") {
                    return match name {
                        "squared-hellinger" => Ok(Self::FDiv(FDivGenerator::squared_hellinger())),
                        _ => Err(Error::ParseDivergence(s.to_string())),
                    };
                }
                Err(Error::ParseDivergence(s.to_string()))
            }
        }
    }

    /// Evaluate `D(S||R)`.
    ///
    /// Boundary conventions: `0 ln(0/q) = 0`; mass where the second argument
    /// vanishes costs `+inf` for KL, chi-square, and Renyi with `alpha > 1`;
    /// JS is always finite; Renyi with `alpha < 1` is infinite only for
    /// disjoint supports. `+inf` is a valid return, not an error.
    pub fn evaluate(&self, s: &Distribution, r: &Distribution) -> Result<f64> {
        if s.k() != r.k() {
            return Err(Error::DimensionMismatch(s.k(), r.k()));
        }
        let sp = s.probs();
        let rp = r.probs();
        let v = match self {
            Self::Kl => kl(sp, rp),
            Self::Js => {
                let m: Vec<f64> = sp.iter().zip(rp).map(|(&a, &b)| 0.5 * (a + b)).collect();
                0.5 * kl(sp, &m) + 0.5 * kl(rp, &m)
            }
            Self::Renyi { alpha } => renyi(sp, rp, *alpha),
            Self::ChiSq => {
                let mut acc = 0.0;
                for (&a, &b) in sp.iter().zip(rp) {
                    if b == 0.0 {
                        if a > 0.0 {
                            return Ok(f64::INFINITY);
                        }
                    } else {
                        let d = a - b;
                        acc += d * d / b;
                    }
                }
                acc
            }
            Self::SqL2 => sp
                .iter()
                .zip(rp)
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum(),
            Self::FDiv(g) => {
                let mut acc = 0.0;
                for (&a, &b) in sp.iter().zip(rp) {
                    if b > 0.0 {
                        acc += b * (g.f)(a / b);
                    } else if a > 0.0 {
                        acc += a * g.slope_at_inf;
                        if !acc.is_finite() {
                            return Ok(f64::INFINITY);
                        }
                    }
                }
                acc
            }
        };
        // Clamp the tiny negative residue evaluate can leave at S = R.
        Ok(if v > -1e-12 && v < 0.0 { 0.0 } else { v })
    }
}

fn kl(s: &[f64], r: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&a, &b) in s.iter().zip(r) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return f64::INFINITY;
        }
        acc += a * (a / b).ln();
    }
    acc
}

fn renyi(s: &[f64], r: &[f64], alpha: f64) -> f64 {
    let mut sum = 0.0;
    for (&a, &b) in s.iter().zip(r) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            if alpha > 1.0 {
                return f64::INFINITY;
            }
            continue;
        }
        sum += a.powf(alpha) * b.powf(1.0 - alpha);
    }
    if sum == 0.0 {
        // Disjoint supports with alpha < 1.
        return f64::INFINITY;
    }
    sum.ln() / (alpha - 1.0)
}

/// The matrix `Sigma_P` with `1/P_i + 1/P_k` on the diagonal and `1/P_k`
/// elsewhere: the inverse of the covariance of the first `k-1` empirical
/// frequencies.
pub fn sigma_matrix(p: &Distribution) -> Result<DMatrix<f64>> {
    if !p.is_interior() {
        return Err(Error::NotInterior);
    }
    let k = p.k();
    let probs = p.probs();
    let inv_last = 1.0 / probs[k - 1];
    let mut m = DMatrix::from_element(k - 1, k - 1, inv_last);
    for i in 0..k - 1 {
        m[(i, i)] += 1.0 / probs[i];
    }
    Ok(m)
}

/// Closed-form inverse of [`sigma_matrix`]: `diag(p) - p p^T` on the first
/// `k-1` coordinates.
pub fn sigma_inverse(p: &Distribution) -> Result<DMatrix<f64>> {
    if !p.is_interior() {
        return Err(Error::NotInterior);
    }
    let k = p.k();
    let probs = p.probs();
    let mut m = DMatrix::zeros(k - 1, k - 1);
    for i in 0..k - 1 {
        for j in 0..k - 1 {
            m[(i, j)] = if i == j {
                probs[i] - probs[i] * probs[j]
            } else {
                -probs[i] * probs[j]
            };
        }
    }
    Ok(m)
}

/// Local matrix `A_{D,P}`: half the Hessian of `S -> D(S||P)` at `S = P` in
/// reduced coordinates, by central second differences with one Richardson
/// extrapolation level, symmetrized.
///
/// `step` overrides the base step; the default is
/// [`DEFAULT_STEP_FACTOR`] `* min_i P_i`.
pub fn local_matrix(div: &Divergence, p: &Distribution, step: Option<f64>) -> Result<DMatrix<f64>> {
    if !p.is_interior() {
        return Err(Error::NotInterior);
    }
    let min_p = p.probs().iter().cloned().fold(f64::INFINITY, f64::min);
    let eps = step.unwrap_or(DEFAULT_STEP_FACTOR * min_p);
    if eps <= 0.0 || !eps.is_finite() {
        return Err(Error::InvalidParameter("step must be positive and finite"));
    }
    // The stencil reaches P_i +- 2*eps on each free coordinate and up to
    // -2*eps on the dependent one.
    if p.probs().iter().any(|&pi| pi - 2.0 * eps <= 0.0) {
        return Err(Error::StepExitsInterior { step: eps });
    }
    let coarse = half_hessian(div, p, eps)?;
    let fine = half_hessian(div, p, eps / 2.0)?;
    let mut a = (fine * 4.0 - coarse) / 3.0;
    let at = a.transpose();
    a = (a + at) * 0.5;
    Ok(a)
}

/// Central-difference half-Hessian at a fixed step.
fn half_hessian(div: &Divergence, p: &Distribution, eps: f64) -> Result<DMatrix<f64>> {
    let km1 = p.k() - 1;
    let base = p.probs();
    // Perturbations live in the reduced chart: +delta on coordinate i is
    // compensated by -delta on the last coordinate.
    let shifted = |moves: &[(usize, f64)]| -> Distribution {
        let mut v = base.to_vec();
        for &(i, d) in moves {
            v[i] += d;
            v[km1] -= d;
        }
        Distribution::from_probs_unchecked(v)
    };
    let d0 = div.evaluate(p, p)?;
    let mut h = DMatrix::zeros(km1, km1);
    for i in 0..km1 {
        let plus = div.evaluate(&shifted(&[(i, eps)]), p)?;
        let minus = div.evaluate(&shifted(&[(i, -eps)]), p)?;
        h[(i, i)] = (plus - 2.0 * d0 + minus) / (eps * eps);
        for j in i + 1..km1 {
            let pp = div.evaluate(&shifted(&[(i, eps), (j, eps)]), p)?;
            let pm = div.evaluate(&shifted(&[(i, eps), (j, -eps)]), p)?;
            let mp = div.evaluate(&shifted(&[(i, -eps), (j, eps)]), p)?;
            let mm = div.evaluate(&shifted(&[(i, -eps), (j, -eps)]), p)?;
            let v = (pp - pm - mp + mm) / (4.0 * eps * eps);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    Ok(h * 0.5)
}

/// Detect invariance at `P`: fit `eta = trace(Sigma^-1 A) / (k-1)` and accept
/// iff the relative Frobenius residual `||A - eta Sigma||_F / ||A||_F` is
/// within `tol`.
pub fn invariance_constant(div: &Divergence, p: &Distribution, tol: f64) -> Result<Option<f64>> {
    let a = local_matrix(div, p, None)?;
    let sigma = sigma_matrix(p)?;
    let sigma_inv = sigma_inverse(p)?;
    let km1 = a.nrows();
    let eta = (&sigma_inv * &a).trace() / km1 as f64;
    let residual = (&a - &sigma * eta).norm();
    if residual <= tol * a.norm() {
        Ok(Some(eta))
    } else {
        Ok(None)
    }
}

/// Eigenvalues of `Sigma^{-1/2} A Sigma^{-1/2}`, sorted descending.
///
/// These are the weights of the generalized chi-square limit of half the
/// scaled statistic under the null.
pub fn local_eigenvalues(div: &Divergence, p: &Distribution) -> Result<Vec<f64>> {
    let a = local_matrix(div, p, None)?;
    let sigma = sigma_matrix(p)?;
    let sqrt_inv = symmetric_inverse_sqrt(&sigma)?;
    let mut m = &sqrt_inv * a * &sqrt_inv;
    let mt = m.transpose();
    m = (m + mt) * 0.5;
    let mut eigs: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().cloned().collect();
    eigs.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    if eigs.last().copied().unwrap_or(0.0) <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            min_eig: eigs.last().copied().unwrap_or(f64::NAN),
        });
    }
    Ok(eigs)
}

fn symmetric_inverse_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = m.clone().symmetric_eigen();
    let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eig <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eig });
    }
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| 1.0 / v.sqrt()));
    Ok(&eig.eigenvectors * d * eig.eigenvectors.transpose())
}
