//! Competing lower bounds: the square-root measurement, the pairwise-overlap
//! bound, and the exact two-state (Helstrom) value.

use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::linalg::{trace_product, HermitianOperator, EPS_RANK_REL};

/// A measurement `{M_x}`, one element per ensemble member.
///
/// `support` is the projector the elements sum to. For measurements built on
/// a rank-deficient average state this is the support of that state, not the
/// identity; [`Povm::completed`] turns it into a measurement on the full space.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    pub elements: Vec<HermitianOperator>,
    pub support: HermitianOperator,
}

impl Povm {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sum(&self) -> HermitianOperator {
        let dim = self.support.dim();
        self.elements
            .iter()
            .fold(HermitianOperator::zeros(dim), |acc, m| acc.add(m))
    }

    /// `‖Σ M_x − support‖_F`.
    pub fn completeness_residual(&self) -> f64 {
        self.sum().sub(&self.support).frobenius_norm()
    }

    /// Smallest eigenvalue over all elements.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        self.elements
            .iter()
            .map(HermitianOperator::min_eigenvalue)
            .try_fold(f64::INFINITY, |acc, v| v.map(|v| acc.min(v)))
    }

    /// Assigns `1 − support` to the first element so the elements sum to the
    /// identity. States living in the support see no difference.
    pub fn completed(&self) -> Povm {
        let dim = self.support.dim();
        let rest = HermitianOperator::identity(dim).sub(&self.support);
        let mut elements = self.elements.clone();
        if let Some(first) = elements.first_mut() {
            *first = first.add(&rest);
        }
        Povm {
            elements,
            support: HermitianOperator::identity(dim),
        }
    }

    /// `Σ p_x Tr(M_x ρ_x)`.
    pub fn success_probability(&self, e: &Ensemble) -> Result<f64> {
        if self.len() != e.len() {
            return Err(Error::WrongMemberCount {
                expected: e.len(),
                found: self.len(),
            });
        }
        e.members()
            .iter()
            .zip(&self.elements)
            .map(|(m, el)| trace_product(el, &m.state).map(|t| m.prob * t))
            .sum()
    }
}

/// `π_x = p_x ρ^{−1/2} ρ_x ρ^{−1/2}` with the inverse square root taken on
/// the support of `ρ = Σ p_x ρ_x`.
pub fn srm_povm(e: &Ensemble) -> Result<Povm> {
    let spectrum = e.average_state().eig()?;
    let inv_sqrt = spectrum.map(|l| l.powf(-0.5), true)?;
    let support = spectrum.support_projector();
    let elements = e
        .weighted_states()
        .iter()
        .map(|g| inv_sqrt.sandwich(g))
        .collect();
    let povm = Povm { elements, support };
    let residual = povm.completeness_residual();
    debug_assert!(residual <= 1e-8, "SRM completeness residual {residual:e}");
    Ok(povm)
}

/// `Σ p_x Tr(ρ_x π_x)` for the square-root measurement.
pub fn srm_bound(e: &Ensemble) -> Result<f64> {
    srm_povm(e)?.success_probability(e)
}

/// `Σ_i p_i² / Σ_j p_j |⟨ψ_i|ψ_j⟩|²` for an ensemble of pure states.
///
/// Overlaps come from the stored state vectors when every member has one,
/// otherwise from `Tr(ρ_i ρ_j)`.
pub fn pairwise_bound(e: &Ensemble) -> Result<f64> {
    let members = e.members();
    for (index, m) in members.iter().enumerate() {
        if m.vector.is_some() {
            continue;
        }
        let ev = m.state.eig()?.eigenvalues;
        let second = ev.get(1).copied().unwrap_or(0.0);
        if second > EPS_RANK_REL * ev[0] {
            return Err(Error::MixedStateMember {
                index,
                second_eigenvalue: second,
            });
        }
    }
    let n = members.len();
    let mut overlap = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let o = if i == j {
                1.0
            } else {
                match (&members[i].vector, &members[j].vector) {
                    (Some(a), Some(b)) => a.dotc(b).norm_sqr(),
                    _ => trace_product(&members[i].state, &members[j].state)?,
                }
            };
            overlap[i][j] = o;
            overlap[j][i] = o;
        }
    }
    let bound = (0..n)
        .filter(|&i| members[i].prob > 0.0)
        .map(|i| {
            let denom: f64 = (0..n).map(|j| members[j].prob * overlap[i][j]).sum();
            members[i].prob * members[i].prob / denom
        })
        .sum::<f64>();
    Ok(bound.min(1.0))
}

/// `½(1 + ‖p₁ρ₁ − p₂ρ₂‖₁)`, the optimum for two states.
pub fn helstrom(e: &Ensemble) -> Result<f64> {
    if e.len() != 2 {
        return Err(Error::WrongMemberCount {
            expected: 2,
            found: e.len(),
        });
    }
    let w = e.weighted_states();
    let trace_norm: f64 = w[0]
        .sub(&w[1])
        .eig()?
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .sum();
    Ok((0.5 * (1.0 + trace_norm)).min(1.0))
}
