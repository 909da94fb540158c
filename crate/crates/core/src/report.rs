//! Every applicable bound for one ensemble, side by side with the oracle bracket.

use serde::Serialize;

use crate::bounds::{helstrom, pairwise_bound, srm_povm};
use crate::ensemble::Ensemble;
use crate::entropy::{self, EntropyProfile};
use crate::error::{Error, Result};
use crate::linalg::EPS_RANK_REL;
use crate::oracle::{min_entropy_from, optimal_success, MinEntropy, OracleOptions};

/// Slack allowed between a lower bound and the oracle's upper bracket.
pub const BOUND_SLACK: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub label: String,
    pub dim: usize,
    pub n_states: usize,
    /// `2^{−S(X|Q)}`.
    pub entropic: f64,
    /// `2^{S(ρ)}/N`, only for ensembles of pure states.
    pub pure_state: Option<f64>,
    pub srm: f64,
    /// Only for ensembles of pure states.
    pub pairwise: Option<f64>,
    /// Only for two-member ensembles.
    pub helstrom: Option<f64>,
    pub oracle_primal: f64,
    pub oracle_dual: f64,
    pub oracle_gap: f64,
    pub oracle_iterations: usize,
    pub oracle_converged: bool,
    pub min_entropy: MinEntropy,
    pub profile: EntropyProfile,
    pub srm_completeness_residual: f64,
    pub srm_min_eigenvalue: f64,
}

impl BoundReport {
    /// Every lower bound present, by name.
    pub fn lower_bounds(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![("entropic", self.entropic), ("srm", self.srm)];
        out.extend(self.pure_state.map(|v| ("pure_state", v)));
        out.extend(self.pairwise.map(|v| ("pairwise", v)));
        out.extend(self.helstrom.map(|v| ("helstrom", v)));
        out
    }

    /// Lower bounds that exceed the oracle's dual value by more than [`BOUND_SLACK`].
    pub fn violations(&self) -> Vec<(&'static str, f64)> {
        let mut bad: Vec<_> = self
            .lower_bounds()
            .into_iter()
            .filter(|&(_, v)| v > self.oracle_dual + BOUND_SLACK)
            .collect();
        if self.oracle_primal > self.oracle_dual + BOUND_SLACK {
            bad.push(("oracle_primal", self.oracle_primal));
        }
        bad
    }
}

/// True when every member is a pure state (rank one within the rank cutoff).
pub fn all_pure(e: &Ensemble) -> Result<bool> {
    for m in e.members() {
        if m.vector.is_some() {
            continue;
        }
        let ev = m.state.eig()?.eigenvalues;
        if ev.get(1).copied().unwrap_or(0.0) > EPS_RANK_REL * ev[0] {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn bound_report(e: &Ensemble, opts: &OracleOptions) -> Result<BoundReport> {
    let profile = entropy::profile(e)?;
    let povm = srm_povm(e)?;
    let pure = all_pure(e)?;
    let pure_state = if pure {
        match entropy::pure_state_bound(&e.average_state(), e.len()) {
            Ok(v) => Some(v),
            Err(Error::InconsistentInput(_)) => None,
            Err(other) => return Err(other),
        }
    } else {
        None
    };
    let oracle = optimal_success(e, opts)?;
    Ok(BoundReport {
        label: e.label().to_owned(),
        dim: e.dim(),
        n_states: e.len(),
        entropic: entropy::entropic_bound_from(&profile),
        pure_state,
        srm: povm.success_probability(e)?,
        pairwise: if pure { Some(pairwise_bound(e)?) } else { None },
        helstrom: if e.len() == 2 {
            Some(helstrom(e)?)
        } else {
            None
        },
        oracle_primal: oracle.primal,
        oracle_dual: oracle.dual,
        oracle_gap: oracle.gap,
        oracle_iterations: oracle.iterations,
        oracle_converged: oracle.converged,
        min_entropy: min_entropy_from(&oracle),
        profile,
        srm_completeness_residual: povm.completeness_residual(),
        srm_min_eigenvalue: povm.min_eigenvalue()?,
    })
}
