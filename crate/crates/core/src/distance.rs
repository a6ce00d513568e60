//! Distances between outcome distributions and the observable distances they
//! induce.
//!
//! For two POVMs on a common outcome set the worst-case (over states) uniform
//! distance is `max_a ‖A_a − A'_a‖`, and the worst-case total-variation
//! distance is `max_Δ ‖A_Δ − A'_Δ‖` over outcome subsets. Both suprema are
//! attained at a pure state, an eigenvector of the extremal eigenvalue of the
//! maximizing difference, which is returned as a witness.

use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::linalg::{eigh, CMatrix, HermitianEigen};
use crate::povm::{Povm, State};
use crate::subsets::{check_capacity, for_each_half_subset, mask_indices};

/// `max_x |p(x) − q(x)|`
pub fn dist_inf(p: &[f64], q: &[f64]) -> Result<f64> {
    check_lengths(p, q)?;
    Ok(p.iter().zip(q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// `(1/2) Σ_x |p(x) − q(x)|`, the total-variation distance.
pub fn dist_l1(p: &[f64], q: &[f64]) -> Result<f64> {
    check_lengths(p, q)?;
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

fn check_lengths(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != q.len() {
        return invalid(format!(
            "distributions have different lengths ({} vs {})",
            p.len(),
            q.len()
        ));
    }
    Ok(())
}

/// Where the supremum defining an observable distance is attained.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Outcome(String),
    Subset(Vec<String>),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Outcome(label) => write!(f, "outcome {label}"),
            Witness::Subset(labels) => write!(f, "subset {{{}}}", labels.join(", ")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DistanceValue {
    pub value: f64,
    pub witness: Witness,
    pub witness_state: Option<State>,
}

fn check_comparable(a: &Povm, b: &Povm) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.outcomes() != b.outcomes() {
        return invalid(format!(
            "observables have different outcome sets: [{}] vs [{}]",
            a.outcomes().join(", "),
            b.outcomes().join(", ")
        ));
    }
    Ok(())
}

fn extremal_state(spec: &HermitianEigen) -> Result<State> {
    let k = if spec.min().abs() > spec.max().abs() {
        0
    } else {
        spec.values.len() - 1
    };
    State::pure(&spec.vector(k))
}

/// Uniform observable distance `max_a ‖A_a − A'_a‖`.
pub fn d_inf(a: &Povm, b: &Povm) -> Result<DistanceValue> {
    check_comparable(a, b)?;
    let mut best: Option<(f64, usize, HermitianEigen)> = None;
    for (k, (x, y)) in a.elements().iter().zip(b.elements()).enumerate() {
        let spec = eigh(&(x - y))?;
        let norm = spec.max_abs();
        if best.as_ref().is_none_or(|(v, _, _)| norm > *v) {
            best = Some((norm, k, spec));
        }
    }
    let (value, k, spec) = best.expect("at least one outcome");
    Ok(DistanceValue {
        value,
        witness: Witness::Outcome(a.outcomes()[k].clone()),
        witness_state: Some(extremal_state(&spec)?),
    })
}

/// Total-variation observable distance `max_Δ ‖A_Δ − A'_Δ‖`.
///
/// Subsets are visited in Gray-code order skipping complements; the first
/// maximum wins ties.
pub fn d_l1(a: &Povm, b: &Povm) -> Result<DistanceValue> {
    check_comparable(a, b)?;
    check_capacity("observable outcome set", a.len())?;
    let diffs: Vec<CMatrix> = a
        .elements()
        .iter()
        .zip(b.elements())
        .map(|(x, y)| x - y)
        .collect();
    let mut best = (f64::NEG_INFINITY, 0u32);
    let mut failure = None;
    for_each_half_subset(&diffs, |mask, acc| {
        if failure.is_some() {
            return;
        }
        match eigh(acc) {
            Ok(spec) => {
                if spec.max_abs() > best.0 {
                    best = (spec.max_abs(), mask);
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let (value, mask) = best;
    let members = mask_indices(mask, a.len());
    let mut acc = CMatrix::zeros(a.dim());
    for &k in &members {
        acc += &diffs[k];
    }
    let spec = eigh(&acc)?;
    Ok(DistanceValue {
        value,
        witness: Witness::Subset(members.iter().map(|&k| a.outcomes()[k].clone()).collect()),
        witness_state: Some(extremal_state(&spec)?),
    })
}
