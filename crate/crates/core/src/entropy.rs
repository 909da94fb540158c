//! Shannon and von Neumann entropies and the entropic lower bounds built on them.
//!
//! All logarithms are base 2. Entropies of the classical-quantum joint state
//! `σ_XQ = Σ p_x |x⟩⟨x| ⊗ ρ_x` come from the ensemble-level identity
//! `S(XQ) = H(p) + Σ p_x S(ρ_x)`, so `σ_XQ` is never diagonalized. With
//! `S(Q) = S(Σ p_x ρ_x)` this gives
//!
//! ```text
//! I(X:Q) = S(Σ p_x ρ_x) − Σ p_x S(ρ_x)        (Holevo quantity)
//! S(X|Q) = S(XQ) − S(Q) = H(p) − I(X:Q)
//! ```
//!
//! and the entropic bound `P* ≥ 2^{−S(X|Q)}`. Note that `S(Σ p_x ρ_x) − Σ p_x S(ρ_x)`
//! is the mutual information, not `S(XQ)`; only the final exponent matters here.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::ensemble::{ClassicalEnsemble, DensityOperator, Ensemble, TOL_NORM, TOL_PSD};
use crate::error::{Error, Result};
use crate::linalg::C64;

/// `−Σ p log₂ p` with `0 log 0 = 0`.
pub fn shannon(p: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for &v in p {
        if v.is_nan() || v < 0.0 {
            return Err(Error::ProbabilityOutOfRange { value: v });
        }
        sum += v;
    }
    if (sum - 1.0).abs() > TOL_NORM {
        return Err(Error::NotNormalized { sum });
    }
    Ok(entropy_bits(p))
}

/// Unchecked `−Σ p log₂ p`, skipping non-positive entries.
fn entropy_bits(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| -v * v.log2())
        .sum::<f64>()
        .max(0.0)
}

/// `S(ρ) = −Tr ρ log₂ ρ` from the spectrum; eigenvalues in `[−1e-10, 0)` count as zero.
pub fn von_neumann(rho: &DensityOperator) -> Result<f64> {
    let spectrum = rho.eig()?;
    if let Some(&min) = spectrum.eigenvalues.last() {
        if min < -TOL_PSD {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
    }
    Ok(entropy_bits(&spectrum.eigenvalues))
}

/// Every entropy appearing in the entropic bound, in bits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyProfile {
    /// `H(p)` of the labels.
    pub h_x: f64,
    /// `S(Σ p_x ρ_x)`.
    pub s_avg: f64,
    /// `S(ρ_x)` per member.
    pub s_members: Vec<f64>,
    /// `I(X:Q)`.
    pub holevo: f64,
    /// `S(X|Q)`.
    pub cond: f64,
}

pub fn profile(e: &Ensemble) -> Result<EntropyProfile> {
    let probs = e.probs();
    let h_x = shannon(&probs)?;
    let s_avg = von_neumann(&e.average_state())?;
    let s_members = e
        .members()
        .iter()
        .map(|m| von_neumann(&m.state))
        .collect::<Result<Vec<_>>>()?;
    let mean_member: f64 = probs.iter().zip(&s_members).map(|(p, s)| p * s).sum();
    let holevo = s_avg - mean_member;
    Ok(EntropyProfile {
        h_x,
        s_avg,
        s_members,
        holevo,
        cond: h_x - holevo,
    })
}

fn clamp_probability(p: f64) -> f64 {
    // Roundoff can push an exact 1 to 1 + ulp.
    if p > 1.0 && p <= 1.0 + 1e-9 {
        1.0
    } else {
        p
    }
}

/// `2^{−S(X|Q)}`.
pub fn entropic_bound(e: &Ensemble) -> Result<f64> {
    Ok(entropic_bound_from(&profile(e)?))
}

pub fn entropic_bound_from(profile: &EntropyProfile) -> f64 {
    clamp_probability((-profile.cond).exp2())
}

/// `2^{S(ρ)} / N` for an average state of `N` pure states.
///
/// A mixture of `N` pure states has `S(ρ) ≤ log₂ N`; anything larger is
/// reported as [`Error::InconsistentInput`].
pub fn pure_state_bound(rho: &DensityOperator, n_states: usize) -> Result<f64> {
    if n_states == 0 {
        return Err(Error::InconsistentInput(
            "number of states must be positive".into(),
        ));
    }
    let s = von_neumann(rho)?;
    let log_n = (n_states as f64).log2();
    if s > log_n + 1e-9 {
        return Err(Error::InconsistentInput(format!(
            "S(rho) = {s} bits exceeds log2 N = {log_n} for N = {n_states}"
        )));
    }
    Ok(clamp_probability(s.exp2() / n_states as f64))
}

/// `H(X|Y) = −Σ p(x,y) log₂ p(x|y)`.
pub fn classical_conditional_entropy(c: &ClassicalEnsemble) -> f64 {
    let cond = c.conditional_x_given_y();
    let mut h = 0.0;
    for (row, crow) in c.joint().iter().zip(&cond) {
        for (&pxy, &pxgy) in row.iter().zip(crow) {
            if pxy > 0.0 {
                h -= pxy * pxgy.log2();
            }
        }
    }
    h.max(0.0)
}

/// `2^{−H(X|Y)}`.
pub fn classical_bound(c: &ClassicalEnsemble) -> f64 {
    clamp_probability((-classical_conditional_entropy(c)).exp2())
}

/// `Σ_y p(y) max_x p(x|y) = Σ_y max_x p(x, y)`.
pub fn classical_optimum(c: &ClassicalEnsemble) -> f64 {
    (0..c.outcomes())
        .map(|y| c.joint().iter().map(|r| r[y]).fold(0.0, f64::max))
        .sum()
}

/// `H(X:Y) = H(X) + H(Y) − H(XY)` of a joint grid.
pub fn mutual_information(c: &ClassicalEnsemble) -> f64 {
    let flat: Vec<f64> = c.joint().iter().flatten().copied().collect();
    entropy_bits(&c.marginal_x()) + entropy_bits(&c.marginal_y()) - entropy_bits(&flat)
}

/// Joint distribution `p(x, y) = p_x ⟨u_y|ρ_x|u_y⟩` of the label and the
/// outcome of measuring in the orthonormal basis given by the columns of `basis`.
pub fn measured_joint(e: &Ensemble, basis: &DMatrix<C64>) -> Result<ClassicalEnsemble> {
    if basis.nrows() != e.dim() || basis.ncols() != e.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            found: basis.nrows(),
        });
    }
    let columns: Vec<_> = basis.column_iter().map(|c| c.into_owned()).collect();
    let mut joint: Vec<Vec<f64>> = e
        .members()
        .iter()
        .map(|m| {
            columns
                .iter()
                .map(|u| (m.prob * m.state.expectation(u)).max(0.0))
                .collect()
        })
        .collect();
    // Renormalize away roundoff so the grid passes validation.
    let total: f64 = joint.iter().flatten().sum();
    for row in &mut joint {
        for v in row.iter_mut() {
            *v /= total;
        }
    }
    crate::ensemble::make_classical(joint)
}

/// Classical mutual information between the label and a projective
/// measurement outcome; never exceeds the Holevo quantity.
pub fn measured_mutual_information(e: &Ensemble, basis: &DMatrix<C64>) -> Result<f64> {
    Ok(mutual_information(&measured_joint(e, basis)?))
}
