//! Ensembles `{p_x, ρ_x}` of labelled states, plus the parametric families
//! used throughout the examples and the classical (diagonal) special case.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Deref;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{HermitianOperator, C64};

/// Tolerance on probability sums and state traces.
pub const TOL_NORM: f64 = 1e-10;
/// Smallest eigenvalue still accepted as "positive semidefinite".
pub const TOL_PSD: f64 = 1e-10;
/// Unit-norm tolerance for state vectors read from input files.
pub const TOL_VECTOR_NORM: f64 = 1e-6;

/// A positive semidefinite, unit-trace Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator(HermitianOperator);

impl DensityOperator {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let trace = op.trace();
        if (trace - 1.0).abs() > TOL_NORM {
            return Err(Error::TraceNotOne { trace });
        }
        let min_eigenvalue = op.min_eigenvalue()?;
        if min_eigenvalue < -TOL_PSD {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self(op))
    }

    /// `|ψ⟩⟨ψ|` for an exactly normalized `ψ`.
    pub fn pure(psi: &DVector<C64>) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > TOL_NORM {
            return Err(Error::VectorNotNormalized { norm });
        }
        Ok(Self(HermitianOperator::outer(psi)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(HermitianOperator::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn into_operator(self) -> HermitianOperator {
        self.0
    }
}

impl Deref for DensityOperator {
    type Target = HermitianOperator;

    fn deref(&self) -> &HermitianOperator {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub prob: f64,
    pub state: DensityOperator,
    /// The state vector, kept when the member was built from one.
    pub vector: Option<DVector<C64>>,
}

impl Member {
    pub fn mixed(prob: f64, state: DensityOperator) -> Self {
        Self {
            prob,
            state,
            vector: None,
        }
    }

    pub fn pure(prob: f64, psi: DVector<C64>) -> Result<Self> {
        Ok(Self {
            prob,
            state: DensityOperator::pure(&psi)?,
            vector: Some(psi),
        })
    }
}

/// An ordered list of `(p_x, ρ_x)`; the classical-quantum joint state is
/// represented by this list and never built as an `N·dim` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    dim: usize,
    label: String,
    members: Vec<Member>,
}

impl Ensemble {
    pub fn new(label: impl Into<String>, members: Vec<Member>) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyEnsemble)?;
        let dim = first.state.dim();
        let mut sum = 0.0;
        for (index, m) in members.iter().enumerate() {
            if m.state.dim() != dim {
                return Err(Error::member(
                    index,
                    Error::DimensionMismatch {
                        expected: dim,
                        found: m.state.dim(),
                    },
                ));
            }
            if !(0.0..=1.0).contains(&m.prob) {
                return Err(Error::member(
                    index,
                    Error::ProbabilityOutOfRange { value: m.prob },
                ));
            }
            sum += m.prob;
        }
        if (sum - 1.0).abs() > TOL_NORM {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self {
            dim,
            label: label.into(),
            members,
        })
    }

    /// Builds an ensemble of pure states from `(p_x, ψ_x)` pairs.
    pub fn from_pure(label: impl Into<String>, states: Vec<(f64, DVector<C64>)>) -> Result<Self> {
        let members = states
            .into_iter()
            .enumerate()
            .map(|(i, (p, psi))| Member::pure(p, psi).map_err(|e| Error::member(i, e)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(label, members)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn probs(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.prob).collect()
    }

    /// `p_x ρ_x` for every member.
    pub fn weighted_states(&self) -> Vec<HermitianOperator> {
        self.members.iter().map(|m| m.state.scale(m.prob)).collect()
    }

    /// `ρ = Σ p_x ρ_x`.
    pub fn average_state(&self) -> DensityOperator {
        let sum = self
            .weighted_states()
            .iter()
            .fold(HermitianOperator::zeros(self.dim), |acc, s| acc.add(s));
        DensityOperator(sum)
    }

    /// Applies `ρ_x → U ρ_x U†` (and `ψ_x → U ψ_x`) to every member.
    pub fn conjugated(&self, u: &DMatrix<C64>) -> Self {
        let members = self
            .members
            .iter()
            .map(|m| Member {
                prob: m.prob,
                state: DensityOperator(m.state.conjugate_by(u)),
                vector: m.vector.as_ref().map(|v| u * v),
            })
            .collect();
        Self {
            dim: self.dim,
            label: self.label.clone(),
            members,
        }
    }

    /// Reorders members so that member `i` of the result is member `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.len());
        Self {
            dim: self.dim,
            label: self.label.clone(),
            members: order.iter().map(|&i| self.members[i].clone()).collect(),
        }
    }
}

fn ket(entries: &[f64]) -> DVector<C64> {
    DVector::from_iterator(entries.len(), entries.iter().map(|&x| C64::new(x, 0.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreeStateVariant {
    /// `ψ₂ = |1⟩`
    Original,
    /// `ψ₂ = (|0⟩ + |1⟩)/√2`.
    ///
    /// The figure caption for this family prints `(|0⟩+|1⟩)/2`, which is not
    /// normalized; the normalized vector is used.
    ReplacedPsi2,
}

/// Three equiprobable qutrit states
/// `ψ₁ = sinθ|0⟩ + cosθ|2⟩`, `ψ₂`, `ψ₃ = −sinθ|0⟩ + cosθ|2⟩`.
pub fn make_three_state(theta: f64, variant: ThreeStateVariant) -> Ensemble {
    let (s, c) = theta.sin_cos();
    let psi2 = match variant {
        ThreeStateVariant::Original => ket(&[0.0, 1.0, 0.0]),
        ThreeStateVariant::ReplacedPsi2 => ket(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]),
    };
    let label = match variant {
        ThreeStateVariant::Original => format!("three_state_original(theta={theta})"),
        ThreeStateVariant::ReplacedPsi2 => format!("three_state_replaced(theta={theta})"),
    };
    let p = 1.0 / 3.0;
    Ensemble::from_pure(
        label,
        vec![(p, ket(&[s, 0.0, c])), (p, psi2), (p, ket(&[-s, 0.0, c]))],
    )
    .expect("three-state family is always valid")
}

/// Four qubit states `|0⟩`, `sinθ|0⟩ + cosθ|1⟩`, `|1⟩`, `cosθ|0⟩ − sinθ|1⟩`
/// with priors `(q/2, (1−q)/2, q/2, (1−q)/2)`; `q = 1/2` is the equiprobable case.
pub fn make_four_state(theta: f64, q: f64) -> Result<Ensemble> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::ProbabilityOutOfRange { value: q });
    }
    let (s, c) = theta.sin_cos();
    let a = q / 2.0;
    let b = (1.0 - q) / 2.0;
    Ensemble::from_pure(
        format!("four_state(theta={theta}, q={q})"),
        vec![
            (a, ket(&[1.0, 0.0])),
            (b, ket(&[s, c])),
            (a, ket(&[0.0, 1.0])),
            (b, ket(&[c, -s])),
        ],
    )
}

/// A joint distribution `p(x, y)`; rows are labels `x`, columns outcomes `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalEnsemble {
    joint: Vec<Vec<f64>>,
}

pub fn make_classical(joint: Vec<Vec<f64>>) -> Result<ClassicalEnsemble> {
    let cols = joint.first().map(Vec::len).unwrap_or(0);
    if joint.is_empty() || cols == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let mut sum = 0.0;
    for row in &joint {
        if row.len() != cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: row.len(),
            });
        }
        for &v in row {
            if v.is_nan() || v < 0.0 || v.is_infinite() {
                return Err(Error::ProbabilityOutOfRange { value: v });
            }
            sum += v;
        }
    }
    if (sum - 1.0).abs() > TOL_NORM {
        return Err(Error::NotNormalized { sum });
    }
    Ok(ClassicalEnsemble { joint })
}

impl ClassicalEnsemble {
    pub fn joint(&self) -> &[Vec<f64>] {
        &self.joint
    }

    pub fn labels(&self) -> usize {
        self.joint.len()
    }

    pub fn outcomes(&self) -> usize {
        self.joint[0].len()
    }

    /// `p(x)`, the row sums.
    pub fn marginal_x(&self) -> Vec<f64> {
        self.joint.iter().map(|r| r.iter().sum()).collect()
    }

    /// `p(y)`, the column sums.
    pub fn marginal_y(&self) -> Vec<f64> {
        (0..self.outcomes())
            .map(|y| self.joint.iter().map(|r| r[y]).sum())
            .collect()
    }

    /// `p(x|y)`, indexed `[x][y]`; columns with `p(y) = 0` are all zero.
    pub fn conditional_x_given_y(&self) -> Vec<Vec<f64>> {
        let py = self.marginal_y();
        self.joint
            .iter()
            .map(|r| {
                r.iter()
                    .zip(&py)
                    .map(|(&pxy, &p)| if p > 0.0 { pxy / p } else { 0.0 })
                    .collect()
            })
            .collect()
    }

    /// Embeds `ρ_x = Σ_y p(y|x) |y⟩⟨y|`. Labels with `p(x) = 0` get the
    /// maximally mixed state; they carry no weight.
    pub fn to_ensemble(&self) -> Ensemble {
        let k = self.outcomes();
        let members = self
            .joint
            .iter()
            .zip(self.marginal_x())
            .map(|(row, px)| {
                let state = if px > 0.0 {
                    let diag: Vec<f64> = row.iter().map(|v| v / px).collect();
                    DensityOperator(HermitianOperator::diag(&diag))
                } else {
                    DensityOperator::maximally_mixed(k)
                };
                Member::mixed(px, state)
            })
            .collect();
        Ensemble::new("classical", members).expect("validated joint distribution")
    }
}
