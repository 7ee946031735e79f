//! Certification of state sets: the SIC overlap condition, frame
//! potentials, t-design residuals, and tightness bounds.
//!
//! Two independent design checks are provided on purpose. The frame
//! potential is a scalar computed from pairwise overlaps; the design
//! residual compares the weighted tensor-power average against the
//! normalized symmetric-subspace projector entrywise. They agree exactly
//! in infinite precision (`residual^2 = potential - bound`) and catch
//! different numerical failure modes in finite precision.

use num_complex::Complex64;
use serde::Serialize;

use crate::comb::binomial;
use crate::error::{Error, Result};
use crate::tensor::{
    symmetrizer_with_cap, Operator, PureState, Tolerance, DEFAULT_SIZE_CAP,
};

/// Slack accepted when validating that explicit weights sum to 1, and when
/// deciding whether explicit weights are effectively uniform.
const WEIGHT_TOL: f64 = 1e-12;

/// An ordered list of pure states sharing one dimension, optionally
/// weighted. Absent weights mean uniform `1/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSet {
    dim: usize,
    states: Vec<PureState>,
    weights: Option<Vec<f64>>,
}

impl StateSet {
    pub fn new(states: Vec<PureState>, weights: Option<Vec<f64>>) -> Result<Self> {
        let dim = match states.first() {
            Some(s) => s.dim(),
            None => {
                return Err(Error::DimensionMismatch(
                    "state set must be nonempty".into(),
                ))
            }
        };
        if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "state of dimension {} in a set of dimension {dim}",
                bad.dim()
            )));
        }
        if let Some(w) = &weights {
            if w.len() != states.len() {
                return Err(Error::InvalidWeights(format!(
                    "{} weights for {} states",
                    w.len(),
                    states.len()
                )));
            }
            if let Some(bad) = w.iter().find(|&&x| !(x > 0.0)) {
                return Err(Error::InvalidWeights(format!(
                    "weights must be strictly positive, got {bad}"
                )));
            }
            let sum: f64 = w.iter().sum();
            if (sum - 1.0).abs() > WEIGHT_TOL {
                return Err(Error::InvalidWeights(format!(
                    "weights sum to {sum}, expected 1"
                )));
            }
        }
        Ok(StateSet {
            dim,
            states,
            weights,
        })
    }

    /// Uniformly weighted set.
    pub fn uniform(states: Vec<PureState>) -> Result<Self> {
        StateSet::new(states, None)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty sets
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &PureState {
        &self.states[i]
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// Weight of the i-th state: explicit, or `1/n`.
    pub fn weight(&self, i: usize) -> f64 {
        match &self.weights {
            Some(w) => w[i],
            None => 1.0 / self.states.len() as f64,
        }
    }

    /// True when weights are absent or all equal `1/n` within slack.
    pub fn is_effectively_uniform(&self) -> bool {
        match &self.weights {
            None => true,
            Some(w) => {
                let u = 1.0 / w.len() as f64;
                w.iter().all(|&x| (x - u).abs() <= WEIGHT_TOL)
            }
        }
    }

    /// `<psi_j|psi_k>`.
    pub fn overlap(&self, j: usize, k: usize) -> Complex64 {
        self.states[j].inner(&self.states[k])
    }
}

/// The outcome of certifying one state set at one t.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignReport {
    pub dim: usize,
    pub t: u32,
    pub n_points: usize,
    pub frame_potential: f64,
    pub fp_lower_bound: f64,
    pub residual_frobenius: f64,
    pub is_t_design: bool,
    /// Set when the set is a t-design meeting the point-count lower bound.
    pub is_tight: bool,
    /// Populated only for uniformly weighted sets with `n = dim^2` at t = 2.
    pub is_sic: Option<bool>,
    pub max_overlap_deviation: f64,
    pub tolerance_used: Tolerance,
}

/// Max over ordered pairs j != k of `| |<psi_j|psi_k>|^2 - 1/(d+1) |`.
/// Returns 0 for a single-state set, which has no such pairs.
pub fn max_overlap_deviation(s: &StateSet) -> f64 {
    let target = 1.0 / (s.dim() as f64 + 1.0);
    let n = s.len();
    let mut max_dev = 0.0f64;
    for j in 0..n {
        debug_assert!((s.overlap(j, j).norm_sqr() - 1.0).abs() < 1e-11);
        for k in 0..n {
            if j == k {
                continue;
            }
            let dev = (s.overlap(j, k).norm_sqr() - target).abs();
            max_dev = max_dev.max(dev);
        }
    }
    max_dev
}

/// Deviation of a candidate SIC from the defining overlap condition: all
/// cross overlaps-squared must equal `1/(d+1)`. Requires exactly `d^2`
/// uniformly weighted states.
pub fn sic_overlap_deviation(s: &StateSet) -> Result<f64> {
    let d = s.dim();
    if s.len() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "a SIC in dimension {d} needs {} states, got {}",
            d * d,
            s.len()
        )));
    }
    if !s.is_effectively_uniform() {
        return Err(Error::InvalidWeights(
            "SIC certification requires uniform weights".into(),
        ));
    }
    Ok(max_overlap_deviation(s))
}

/// Frame potential `F_t = sum_{j,k} w_j w_k |<psi_j|psi_k>|^(2t)`.
///
/// With weights summing to 1 this satisfies `F_t >= 1/binom(d+t-1, t)`,
/// with equality exactly on weighted t-designs.
pub fn frame_potential(s: &StateSet, t: u32) -> f64 {
    assert!(t >= 1, "frame potential needs t >= 1");
    let n = s.len();
    let mut total = 0.0;
    for j in 0..n {
        for k in 0..n {
            let p = s.overlap(j, k).norm_sqr();
            total += s.weight(j) * s.weight(k) * p.powi(t as i32);
        }
    }
    total
}

/// The analytic frame-potential lower bound `1/binom(d+t-1, t)`.
pub fn fp_lower_bound(d: usize, t: u32) -> Result<f64> {
    Ok(1.0 / binomial((d + t as usize - 1) as u64, t as u64)? as f64)
}

/// Weighted sum of t-fold tensor-power projectors,
/// `sum_i w_i (|psi_i><psi_i|)^(x t)`, on the factors `[d; t]`.
pub(crate) fn tensor_power_average(s: &StateSet, t: u32, cap: usize) -> Result<Operator> {
    assert!(t >= 1, "tensor power average needs t >= 1");
    let d = s.dim();
    let mut n: usize = 1;
    for _ in 0..t {
        n = n
            .checked_mul(d)
            .filter(|&n| n <= cap)
            .ok_or(Error::SizeCapExceeded {
                requested: d.pow(t),
                cap,
            })?;
    }
    let mut entries = ndarray::Array2::<Complex64>::zeros((n, n));
    for i in 0..s.len() {
        let v = s.state(i).tensor_power(t);
        let w = s.weight(i);
        let amps = v.amplitudes();
        for r in 0..n {
            let wr = amps[r] * w;
            for c in 0..n {
                entries[[r, c]] += wr * amps[c].conj();
            }
        }
    }
    Operator::new(vec![d; t as usize], entries)
}

/// Frobenius norm and matrix of the design defect
/// `Delta = sum_i w_i (|psi_i><psi_i|)^(x t) - S_{d,t} / binom(d+t-1, t)`.
/// The set is a t-design exactly when the defect vanishes.
pub fn design_residual(s: &StateSet, t: u32, tol: &Tolerance) -> Result<(f64, Operator)> {
    design_residual_with_cap(s, t, tol, DEFAULT_SIZE_CAP)
}

pub fn design_residual_with_cap(
    s: &StateSet,
    t: u32,
    _tol: &Tolerance,
    cap: usize,
) -> Result<(f64, Operator)> {
    let d = s.dim();
    let average = tensor_power_average(s, t, cap)?;
    let scale = 1.0 / binomial((d + t as usize - 1) as u64, t as u64)? as f64;
    let target = &symmetrizer_with_cap(d, t, cap)? * scale;
    let delta = &average - &target;
    Ok((delta.frobenius_norm(), delta))
}

/// Frobenius defect of POVM completeness, `|| sum_j Pi_j - I ||_F` with
/// `Pi_j = (1/d) |psi_j><psi_j|`. Requires `d^2` states; vanishes for any
/// SIC.
pub fn povm_completeness_check(s: &StateSet) -> Result<f64> {
    let d = s.dim();
    if s.len() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "POVM completeness needs {} states in dimension {d}, got {}",
            d * d,
            s.len()
        )));
    }
    let mut sum = ndarray::Array2::<Complex64>::zeros((d, d));
    for state in s.states() {
        let amps = state.amplitudes();
        for r in 0..d {
            for c in 0..d {
                sum[[r, c]] += amps[r] * amps[c].conj() / d as f64;
            }
        }
    }
    for i in 0..d {
        sum[[i, i]] -= Complex64::ONE;
    }
    Ok(sum.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
}

/// Point-count lower bound for a t-design in dimension d:
/// `binom(d + floor(t/2) - 1, floor(t/2)) * binom(d + ceil(t/2) - 1, ceil(t/2))`,
/// in exact integer arithmetic. Designs meeting it are called tight.
pub fn tight_bound(d: usize, t: u32) -> Result<u128> {
    let lo = (t / 2) as u64;
    let hi = t.div_ceil(2) as u64;
    let d = d as u64;
    binomial(d + lo - 1, lo)?
        .checked_mul(binomial(d + hi - 1, hi)?)
        .ok_or(Error::Overflow)
}

/// Runs every certification check on a state set and aggregates the
/// outcome. Deterministic: identical inputs produce identical reports.
pub fn certify(s: &StateSet, t: u32, tol: &Tolerance) -> Result<DesignReport> {
    certify_with_cap(s, t, tol, DEFAULT_SIZE_CAP)
}

pub fn certify_with_cap(
    s: &StateSet,
    t: u32,
    tol: &Tolerance,
    cap: usize,
) -> Result<DesignReport> {
    let d = s.dim();
    let n = s.len();
    let potential = frame_potential(s, t);
    let bound = fp_lower_bound(d, t)?;
    let (residual, _) = design_residual_with_cap(s, t, tol, cap)?;
    let is_t_design = residual <= tol.verify_eps;
    let is_tight = is_t_design && n as u128 == tight_bound(d, t)?;
    let max_dev = max_overlap_deviation(s);
    let is_sic = if n == d * d && t == 2 && s.is_effectively_uniform() {
        Some(max_dev <= tol.verify_eps)
    } else {
        None
    };
    Ok(DesignReport {
        dim: d,
        t,
        n_points: n,
        frame_potential: potential,
        fp_lower_bound: bound,
        residual_frobenius: residual,
        is_t_design,
        is_tight,
        is_sic,
        max_overlap_deviation: max_dev,
        tolerance_used: *tol,
    })
}
