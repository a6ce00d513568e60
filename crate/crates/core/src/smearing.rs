//! Coarse-graining of POVMs along outcome functions, and error operators.

use rand::Rng;

use crate::distance::d_inf;
use crate::error::{invalid, Error, Result};
use crate::linalg::{op_norm, CMatrix};
use crate::povm::Povm;

/// Reserved separator between the two coordinates of a product outcome.
pub const PRODUCT_SEPARATOR: char = '|';

/// Total function between two finite outcome sets. Targets need not be hit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeMap {
    source: Vec<String>,
    target: Vec<String>,
    assignment: Vec<usize>,
}

impl OutcomeMap {
    /// `assignment[i]` is the index in `target` of the image of `source[i]`.
    pub fn from_indices(source: Vec<String>, target: Vec<String>, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.len() {
            return invalid(format!(
                "map assigns {} of {} source outcomes",
                assignment.len(),
                source.len()
            ));
        }
        if let Some(&bad) = assignment.iter().find(|&&t| t >= target.len()) {
            return invalid(format!("target index {bad} out of range"));
        }
        Ok(Self {
            source,
            target,
            assignment,
        })
    }

    /// Builds a map from `(source, target)` label pairs; every source label
    /// must appear exactly once.
    pub fn from_pairs(source: &[String], target: &[String], pairs: &[(String, String)]) -> Result<Self> {
        let mut assignment = vec![None; source.len()];
        for (s, t) in pairs {
            let i = source
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| Error::InvalidInput(format!("unknown source outcome {s:?}")))?;
            let j = target
                .iter()
                .position(|x| x == t)
                .ok_or_else(|| Error::InvalidInput(format!("unknown target outcome {t:?}")))?;
            if assignment[i].replace(j).is_some() {
                return invalid(format!("source outcome {s:?} mapped twice"));
            }
        }
        let assignment = assignment
            .into_iter()
            .enumerate()
            .map(|(i, j)| j.ok_or_else(|| Error::InvalidInput(format!("source outcome {:?} is unmapped", source[i]))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(source.to_vec(), target.to_vec(), assignment)
    }

    pub fn identity(labels: &[String]) -> Self {
        Self {
            source: labels.to_vec(),
            target: labels.to_vec(),
            assignment: (0..labels.len()).collect(),
        }
    }

    pub fn constant(source: &[String], label: &str) -> Self {
        Self {
            source: source.to_vec(),
            target: vec![label.to_string()],
            assignment: vec![0; source.len()],
        }
    }

    /// Uniformly random assignment.
    pub fn random<R: Rng>(source: &[String], target: &[String], rng: &mut R) -> Self {
        Self {
            source: source.to_vec(),
            target: target.to_vec(),
            assignment: (0..source.len()).map(|_| rng.random_range(0..target.len())).collect(),
        }
    }

    pub fn source(&self) -> &[String] {
        &self.source
    }

    pub fn target(&self) -> &[String] {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Label pairs in source order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.source
            .iter()
            .zip(&self.assignment)
            .map(|(s, &t)| (s.as_str(), self.target[t].as_str()))
    }

    /// `then ∘ self`
    pub fn then(&self, then: &OutcomeMap) -> Result<OutcomeMap> {
        if then.source != self.target {
            return invalid("composition requires the second map's source to equal the first map's target");
        }
        Ok(Self {
            source: self.source.clone(),
            target: then.target.clone(),
            assignment: self.assignment.iter().map(|&j| then.assignment[j]).collect(),
        })
    }

    /// Number of source outcomes mapped to each target.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.target.len()];
        for &t in &self.assignment {
            sizes[t] += 1;
        }
        sizes
    }
}

/// `f(F)_a = Σ_{x : f(x) = a} F_x`, with zero elements on unhit targets.
pub fn marginalize(f_povm: &Povm, map: &OutcomeMap) -> Result<Povm> {
    if f_povm.outcomes() != map.source() {
        return invalid("outcome map source does not match the POVM's outcomes");
    }
    let mut elements = vec![CMatrix::zeros(f_povm.dim()); map.target().len()];
    for (e, &t) in f_povm.elements().iter().zip(map.assignment()) {
        elements[t] += e;
    }
    Povm::new(map.target().to_vec(), elements)
}

/// Product outcome labels `"a|b"` in lexicographic order.
pub fn product_labels(omega_a: &[String], omega_b: &[String]) -> Result<Vec<String>> {
    for label in omega_a.iter().chain(omega_b) {
        if label.contains(PRODUCT_SEPARATOR) {
            return invalid(format!(
                "outcome label {label:?} contains the reserved separator '{PRODUCT_SEPARATOR}'"
            ));
        }
    }
    Ok(omega_a
        .iter()
        .flat_map(|a| omega_b.iter().map(move |b| format!("{a}{PRODUCT_SEPARATOR}{b}")))
        .collect())
}

/// The product set `Ω_A × Ω_B` with its two coordinate projections.
pub fn coordinate_maps(omega_a: &[String], omega_b: &[String]) -> Result<(OutcomeMap, OutcomeMap)> {
    if omega_a.is_empty() || omega_b.is_empty() {
        return invalid("outcome sets must be nonempty");
    }
    let labels = product_labels(omega_a, omega_b)?;
    let nb = omega_b.len();
    let to_a = (0..labels.len()).map(|k| k / nb).collect();
    let to_b = (0..labels.len()).map(|k| k % nb).collect();
    Ok((
        OutcomeMap::from_indices(labels.clone(), omega_a.to_vec(), to_a)?,
        OutcomeMap::from_indices(labels, omega_b.to_vec(), to_b)?,
    ))
}

/// The joint observable `{A_a B_b}` of two commuting POVMs on `Ω_A × Ω_B`.
pub fn commuting_product(a: &Povm, b: &Povm) -> Result<Povm> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let labels = product_labels(a.outcomes(), b.outcomes())?;
    let mut elements = Vec::with_capacity(labels.len());
    for x in a.elements() {
        for y in b.elements() {
            let prod = x * y;
            if !prod.is_hermitian() {
                return invalid("observables do not commute; A_a B_b is not Hermitian");
            }
            elements.push(prod.hermitian_part());
        }
    }
    Povm::new(labels, elements)
}

/// `ε_a = f(F)_a − A_a` together with their operator norms.
#[derive(Clone, Debug)]
pub struct ErrorOperators {
    pub outcomes: Vec<String>,
    pub operators: Vec<CMatrix>,
    pub norms: Vec<f64>,
}

impl ErrorOperators {
    /// `max_a ‖ε_a‖`, equal to the uniform distance between `A` and `f(F)`.
    pub fn max_norm(&self) -> f64 {
        self.norms.iter().copied().fold(0.0, f64::max)
    }
}

pub fn error_operators(a: &Povm, f_povm: &Povm, map: &OutcomeMap) -> Result<ErrorOperators> {
    if a.dim() != f_povm.dim() {
        return Err(Error::DimensionMismatch(a.dim(), f_povm.dim()));
    }
    if map.target() != a.outcomes() {
        return invalid("outcome map target does not match the observable's outcomes");
    }
    let approx = marginalize(f_povm, map)?;
    let operators: Vec<CMatrix> = approx
        .elements()
        .iter()
        .zip(a.elements())
        .map(|(x, y)| x - y)
        .collect();
    let norms = operators.iter().map(op_norm).collect::<Result<Vec<_>>>()?;
    debug_assert!(d_inf(a, &approx)
        .map(|d| (d.value - norms.iter().copied().fold(0.0, f64::max)).abs() < 1e-12)
        .unwrap_or(true));
    Ok(ErrorOperators {
        outcomes: a.outcomes().to_vec(),
        operators,
        norms,
    })
}
