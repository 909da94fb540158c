//! Certified optimum of the minimum-error discrimination problem
//!
//! ```text
//! maximize    Σ p_x Tr(M_x ρ_x)   over POVMs {M_x}
//! minimize    Tr Y                subject to Y ≥ p_x ρ_x for all x
//! ```
//!
//! The primal side runs the fixed-point iteration
//! `M_x ← Λ⁺ G_x M_x G_x Λ⁺` with `G_x = p_x ρ_x` and
//! `Λ = (Σ G_x M_x G_x)^{1/2}`, repairing each iterate back onto the POVM set
//! so every reported primal value is achieved by an actual measurement. The
//! dual side turns each iterate into a feasible `Y` by shifting the Hermitian
//! part of `Σ G_x M_x` up until it dominates every `G_x`. The optimum is then
//! bracketed by `[best primal, best dual]` no matter how well the iteration did.
//!
//! For a classical-quantum state the optimum also gives the conditional
//! min-entropy: `S_min(X|Q) = −log₂ P*`.

use serde::Serialize;

use crate::bounds::Povm;
use crate::ensemble::Ensemble;
use crate::entropy;
use crate::error::Result;
use crate::linalg::{trace_product, HermitianOperator};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleOptions {
    /// Stop once `dual − primal ≤ tol`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 10_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    /// Success probability of `povm`.
    pub primal: f64,
    /// `Tr Y` of `certificate`.
    pub dual: f64,
    pub gap: f64,
    pub iterations: usize,
    /// False when `max_iter` ran out before the gap closed; the bracket is
    /// still valid.
    pub converged: bool,
    pub povm: Povm,
    pub certificate: HermitianOperator,
}

impl OracleResult {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.primal + self.dual)
    }
}

/// Puts a near-POVM back on the POVM set: spreads `1 − Σ M_x` evenly, clips
/// each element to PSD, then renormalizes so `Σ M_x = 1` to working precision.
fn repair(elements: &mut [HermitianOperator]) -> Result<()> {
    let n = elements.len();
    let dim = elements[0].dim();
    let deficit = HermitianOperator::identity(dim).sub(&sum(elements));
    let share = deficit.scale(1.0 / n as f64);
    for m in elements.iter_mut() {
        *m = m.add(&share).eig()?.map(|l| l.max(0.0), false)?;
    }
    let total = sum(elements).eig()?;
    // The clipped sum stays within roundoff of 1, so it is invertible.
    let inv_sqrt = total.map(|l| l.powf(-0.5), false)?;
    for m in elements.iter_mut() {
        *m = inv_sqrt.sandwich(m);
    }
    Ok(())
}

fn sum(ops: &[HermitianOperator]) -> HermitianOperator {
    ops.iter().skip(1).fold(ops[0].clone(), |acc, m| acc.add(m))
}

fn primal_value(weighted: &[HermitianOperator], elements: &[HermitianOperator]) -> Result<f64> {
    weighted
        .iter()
        .zip(elements)
        .map(|(g, m)| trace_product(g, m))
        .sum()
}

/// Dual-feasible `Y = Ŷ + max(λ*, 0)·1` from the current iterate.
fn certificate(
    weighted: &[HermitianOperator],
    elements: &[HermitianOperator],
) -> Result<HermitianOperator> {
    let dim = weighted[0].dim();
    let product = weighted
        .iter()
        .zip(elements)
        .fold(nalgebra::DMatrix::zeros(dim, dim), |acc, (g, m)| {
            acc + g.matrix() * m.matrix()
        });
    let y_hat = HermitianOperator::hermitian_part_of(&product);
    let mut shift = 0.0f64;
    for g in weighted {
        shift = shift.max(g.sub(&y_hat).max_eigenvalue()?);
    }
    Ok(y_hat.shift(shift))
}

/// Brackets the optimal success probability between an achievable primal
/// value and a dual certificate.
pub fn optimal_success(e: &Ensemble, opts: &OracleOptions) -> Result<OracleResult> {
    let n = e.len();
    let dim = e.dim();
    let weighted = e.weighted_states();

    // Always-available floor: guess the most likely label.
    let guess =
        e.probs().iter().enumerate().fold(
            0,
            |best, (i, &p)| if p > e.members()[best].prob { i } else { best },
        );
    let mut best_elements: Vec<HermitianOperator> = (0..n)
        .map(|i| {
            if i == guess {
                HermitianOperator::identity(dim)
            } else {
                HermitianOperator::zeros(dim)
            }
        })
        .collect();
    let mut best_primal = primal_value(&weighted, &best_elements)?;
    let mut best_cert = certificate(&weighted, &best_elements)?;
    let mut best_dual = best_cert.trace();

    let mut elements = vec![HermitianOperator::identity(dim).scale(1.0 / n as f64); n];
    let mut iterations = 0;
    let mut converged = best_dual - best_primal <= opts.tol;

    while !converged && iterations < opts.max_iter {
        iterations += 1;

        let primal = primal_value(&weighted, &elements)?;
        if primal > best_primal {
            best_primal = primal;
            best_elements.clone_from(&elements);
        }
        let cert = certificate(&weighted, &elements)?;
        let dual = cert.trace();
        if dual < best_dual {
            best_dual = dual;
            best_cert = cert;
        }
        if best_dual - best_primal <= opts.tol {
            converged = true;
            break;
        }

        let sandwiched: Vec<HermitianOperator> = weighted
            .iter()
            .zip(&elements)
            .map(|(g, m)| g.sandwich(m))
            .collect();
        let lambda_pinv = sum(&sandwiched).eig()?.map(|l| l.powf(-0.5), true)?;
        elements = sandwiched.iter().map(|t| lambda_pinv.sandwich(t)).collect();
        repair(&mut elements)?;
    }

    repair(&mut best_elements)?;
    let primal = primal_value(&weighted, &best_elements)?;
    let dual = best_dual;
    Ok(OracleResult {
        primal,
        dual,
        gap: dual - primal,
        iterations,
        converged: converged || dual - primal <= opts.tol,
        povm: Povm {
            elements: best_elements,
            support: HermitianOperator::identity(dim),
        },
        certificate: best_cert,
    })
}

/// `S_min(X|Q) = −log₂ P*` with an uncertainty half-width from the bracket.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MinEntropy {
    /// Evaluated at the bracket midpoint, in bits.
    pub value: f64,
    /// `log₂(dual / primal) / 2`.
    pub half_width: f64,
}

pub fn min_entropy_from(result: &OracleResult) -> MinEntropy {
    MinEntropy {
        value: -result.midpoint().log2(),
        half_width: 0.5 * (result.dual / result.primal).log2().max(0.0),
    }
}

pub fn min_entropy_cond(e: &Ensemble, opts: &OracleOptions) -> Result<MinEntropy> {
    Ok(min_entropy_from(&optimal_success(e, opts)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Monotonicity {
    pub s_min: f64,
    pub s_cond: f64,
    /// `s_min ≤ s_cond + 1e-6`.
    pub holds: bool,
}

/// Compares `S_min(X|Q)` from the oracle with `S(X|Q)` from the entropies.
pub fn check_monotonicity(e: &Ensemble) -> Result<Monotonicity> {
    check_monotonicity_with(e, &OracleOptions::default())
}

pub fn check_monotonicity_with(e: &Ensemble, opts: &OracleOptions) -> Result<Monotonicity> {
    let s_min = min_entropy_cond(e, opts)?.value;
    let s_cond = entropy::profile(e)?.cond;
    Ok(Monotonicity {
        s_min,
        s_cond,
        holds: s_min <= s_cond + 1e-6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::helstrom;
    use crate::ensemble::{make_four_state, make_three_state, ThreeStateVariant};
    use crate::linalg::C64;
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn ket(v: &[f64]) -> DVector<C64> {
        DVector::from_iterator(v.len(), v.iter().map(|&x| C64::new(x, 0.0)))
    }

    fn pair(a: &[f64], b: &[f64]) -> Ensemble {
        Ensemble::from_pure("pair", vec![(0.5, ket(a)), (0.5, ket(b))]).unwrap()
    }

    fn assert_feasible(r: &OracleResult, e: &Ensemble) {
        assert!(r.primal <= r.dual + 1e-9);
        assert!(r.povm.completeness_residual() <= 1e-8);
        assert!(r.povm.min_eigenvalue().unwrap() >= -1e-9);
        for g in e.weighted_states() {
            assert!(r.certificate.sub(&g).min_eigenvalue().unwrap() >= -1e-8);
        }
        assert_abs_diff_eq!(
            r.povm.success_probability(e).unwrap(),
            r.primal,
            epsilon = 1e-12
        );
    }

    #[test]
    fn orthogonal_pair_is_perfect() {
        let e = pair(&[1.0, 0.0], &[0.0, 1.0]);
        let r = optimal_success(&e, &OracleOptions::default()).unwrap();
        assert_abs_diff_eq!(r.primal, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.dual, 1.0, epsilon = 1e-9);
        assert!(r.converged);
        assert_feasible(&r, &e);
    }

    #[test]
    fn four_state_optimum_is_half() {
        let e = make_four_state(PI / 3.0, 0.5).unwrap();
        let r = optimal_success(&e, &OracleOptions::default()).unwrap();
        assert!((r.primal - 0.5).abs() < 1e-6);
        assert!((r.dual - 0.5).abs() < 1e-6);
        assert_feasible(&r, &e);
    }

    #[test]
    fn zero_plus_matches_helstrom() {
        let e = pair(&[1.0, 0.0], &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let r = optimal_success(&e, &OracleOptions::default()).unwrap();
        let h = helstrom(&e).unwrap();
        assert!((r.midpoint() - h).abs() < 1e-6);
        assert!(r.primal <= h + 1e-12 && h <= r.dual + 1e-12);
        assert_feasible(&r, &e);
    }

    #[test]
    fn degenerate_three_state_converges() {
        let e = make_three_state(0.0, ThreeStateVariant::Original);
        let r = optimal_success(&e, &OracleOptions::default()).unwrap();
        // |1⟩ vs two copies of |2⟩: 1/3 + 1/3
        assert!((r.midpoint() - 2.0 / 3.0).abs() < 1e-6, "{r:?}");
        assert_feasible(&r, &e);
    }

    #[test]
    fn non_convergence_is_flagged_not_fatal() {
        let e = make_three_state(0.4, ThreeStateVariant::ReplacedPsi2);
        let r = optimal_success(
            &e,
            &OracleOptions {
                tol: 0.0,
                max_iter: 3,
            },
        )
        .unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 3);
        assert_feasible(&r, &e);
    }

    #[test]
    fn min_entropy_examples() {
        let opts = OracleOptions::default();
        let m = min_entropy_cond(&pair(&[1.0, 0.0], &[0.0, 1.0]), &opts).unwrap();
        assert_abs_diff_eq!(m.value, 0.0, epsilon = 1e-8);
        let m = min_entropy_cond(&pair(&[1.0, 0.0], &[1.0, 0.0]), &opts).unwrap();
        assert_abs_diff_eq!(m.value, 1.0, epsilon = 1e-8);
        let m = min_entropy_cond(&make_four_state(0.8, 0.5).unwrap(), &opts).unwrap();
        assert_abs_diff_eq!(m.value, 1.0, epsilon = 1e-5);
        assert!(m.half_width >= 0.0);
    }

    #[test]
    fn monotonicity_examples() {
        let m = check_monotonicity(&pair(&[1.0, 0.0], &[0.0, 1.0])).unwrap();
        assert_abs_diff_eq!(m.s_min, 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(m.s_cond, 0.0, epsilon = 1e-9);
        assert!(m.holds);
        let m = check_monotonicity(&pair(&[1.0, 0.0], &[1.0, 0.0])).unwrap();
        assert_abs_diff_eq!(m.s_min, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(m.s_cond, 1.0, epsilon = 1e-9);
        assert!(m.holds);
        let m =
            check_monotonicity(&make_three_state(PI / 5.0, ThreeStateVariant::Original)).unwrap();
        assert!(m.holds, "{m:?}");
    }
}
