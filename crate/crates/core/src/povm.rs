//! POVMs, density operators, outcome statistics and intrinsic uncertainty.

use std::collections::HashSet;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, eigh, op_norm, pauli, CMatrix};
use crate::subsets::{check_capacity, for_each_half_subset};

/// Maximum entrywise deviation of `Σ_a A_a` from the identity.
pub const COMPLETENESS_TOL: f64 = 1e-8;
/// Most negative eigenvalue tolerated in a POVM element.
pub const PSD_TOL: f64 = 1e-9;

const RANDOM_POVM_ATTEMPTS: u64 = 10;

/// Tolerances applied by [`validate_povm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub psd: f64,
    pub completeness: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            psd: PSD_TOL,
            completeness: COMPLETENESS_TOL,
        }
    }
}

impl Tolerance {
    pub fn uniform(tol: f64) -> Self {
        Self {
            psd: tol,
            completeness: tol,
        }
    }
}

/// Finite family of labelled effects on a common Hilbert space.
///
/// Construction only checks shape (labels distinct, dimensions equal);
/// positivity and completeness are checked by [`validate_povm`] so that
/// invalid files can still be loaded and reported on.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    outcomes: Vec<String>,
    elements: Vec<CMatrix>,
}

impl Povm {
    pub fn new(outcomes: Vec<String>, elements: Vec<CMatrix>) -> Result<Self> {
        if outcomes.is_empty() {
            return invalid("a POVM needs at least one outcome");
        }
        if outcomes.len() != elements.len() {
            return invalid(format!(
                "{} outcome labels but {} elements",
                outcomes.len(),
                elements.len()
            ));
        }
        let mut seen = HashSet::new();
        for label in &outcomes {
            if !seen.insert(label.as_str()) {
                return invalid(format!("duplicate outcome label {label:?}"));
            }
        }
        let dim = elements[0].dim();
        if let Some(bad) = elements.iter().find(|e| e.dim() != dim) {
            return Err(Error::DimensionMismatch(dim, bad.dim()));
        }
        Ok(Self { outcomes, elements })
    }

    /// Like [`Povm::new`] with outcome labels `"0"`, `"1"`, …
    pub fn from_elements(elements: Vec<CMatrix>) -> Result<Self> {
        let outcomes = (0..elements.len()).map(|k| k.to_string()).collect();
        Self::new(outcomes, elements)
    }

    /// Builds and validates against the default tolerances.
    pub fn new_checked(outcomes: Vec<String>, elements: Vec<CMatrix>) -> Result<Self> {
        let p = Self::new(outcomes, elements)?;
        let report = validate_povm(&p, Tolerance::default());
        if !report.is_valid() {
            return invalid(format!("not a POVM: {report}"));
        }
        Ok(p)
    }

    /// The single-outcome POVM `{1}`.
    pub fn trivial(dim: usize) -> Self {
        Self {
            outcomes: vec!["1".to_string()],
            elements: vec![CMatrix::identity(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &CMatrix {
        &self.elements[k]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o == label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &CMatrix)> {
        self.outcomes.iter().map(String::as_str).zip(&self.elements)
    }

    pub fn into_parts(self) -> (Vec<String>, Vec<CMatrix>) {
        (self.outcomes, self.elements)
    }

    /// `Σ_a A_a`
    pub fn total(&self) -> CMatrix {
        linalg::sum(self.elements.iter()).expect("nonempty")
    }

    /// Same elements under new labels.
    pub fn relabel(&self, outcomes: Vec<String>) -> Result<Self> {
        Self::new(outcomes, self.elements.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NotHermitian { outcome: String, deviation: f64 },
    NegativeEigenvalue { outcome: String, min_eigenvalue: f64 },
    Incomplete { deviation: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotHermitian { outcome, deviation } => {
                write!(f, "element {outcome:?} is not Hermitian (deviation {deviation:.3e})")
            }
            Violation::NegativeEigenvalue {
                outcome,
                min_eigenvalue,
            } => write!(
                f,
                "element {outcome:?} has negative eigenvalue {min_eigenvalue:.6e}"
            ),
            Violation::Incomplete { deviation } => {
                write!(f, "elements do not sum to identity (max deviation {deviation:.6e})")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks Hermiticity, positivity and completeness. Violations are returned
/// as data.
pub fn validate_povm(p: &Povm, tol: Tolerance) -> ValidationReport {
    let mut violations = Vec::new();
    for (label, e) in p.iter() {
        let dev = e.hermitian_deviation();
        let herm_tol = (linalg::HERMITIAN_RTOL * e.max_abs().max(1.0)).max(tol.psd);
        if dev > herm_tol {
            violations.push(Violation::NotHermitian {
                outcome: label.to_string(),
                deviation: dev,
            });
            continue;
        }
        // Within tolerance, so symmetrizing inside eigh is harmless.
        match eigh(&e.hermitian_part()) {
            Ok(spec) if spec.min() < -tol.psd => violations.push(Violation::NegativeEigenvalue {
                outcome: label.to_string(),
                min_eigenvalue: spec.min(),
            }),
            Ok(_) => {}
            Err(_) => violations.push(Violation::NotHermitian {
                outcome: label.to_string(),
                deviation: dev,
            }),
        }
    }
    let deviation = p.total().max_abs_diff(&CMatrix::identity(p.dim()));
    if deviation > tol.completeness {
        violations.push(Violation::Incomplete { deviation });
    }
    ValidationReport { violations }
}

/// True iff every element is a projection: `‖A_a² − A_a‖ ≤ tol`.
pub fn is_pvm(p: &Povm, tol: f64) -> bool {
    p.elements().iter().all(|e| {
        let defect = &(e * e) - e;
        matches!(op_norm(&defect), Ok(n) if n <= tol)
    })
}

/// `‖A − A²‖`
fn projection_defect(a: &CMatrix) -> Result<f64> {
    op_norm(&(a - &(a * a)))
}

/// Intrinsic uncertainty `V(A) = max_a ‖A_a − A_a²‖`, in `[0, 1/4]`.
pub fn intrinsic_uncertainty_inf(p: &Povm) -> Result<f64> {
    p.elements()
        .iter()
        .try_fold(0.0f64, |acc, e| Ok(acc.max(projection_defect(e)?)))
}

/// Subset version `V₁(A) = max_Δ ‖A_Δ(1 − A_Δ)‖` with `A_Δ = Σ_{a∈Δ} A_a`.
pub fn intrinsic_uncertainty_l1(p: &Povm) -> Result<f64> {
    check_capacity("POVM outcome set", p.len())?;
    let mut best = 0.0f64;
    let mut failure = None;
    for_each_half_subset(p.elements(), |_, acc| {
        if failure.is_some() {
            return;
        }
        match projection_defect(acc) {
            Ok(v) => best = best.max(v),
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(best),
    }
}

/// Density operator.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    matrix: CMatrix,
}

impl State {
    pub const TRACE_TOL: f64 = 1e-10;

    /// Validates Hermiticity, positivity (to [`PSD_TOL`]) and unit trace.
    pub fn from_density(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_hermitian() {
            return Err(Error::NotHermitian(matrix.hermitian_deviation()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > Self::TRACE_TOL || tr.im.abs() > Self::TRACE_TOL {
            return invalid(format!("state trace is {tr}, expected 1"));
        }
        let min = linalg::min_eigenvalue(&matrix)?;
        if min < -PSD_TOL {
            return invalid(format!("state has negative eigenvalue {min:.3e}"));
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    /// `|ψ⟩⟨ψ|` after normalizing `ψ`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || norm.is_nan() || norm <= 0.0 || !norm.is_finite() {
            return invalid("pure state vector must be nonzero and finite");
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self {
            matrix: CMatrix::outer(&v),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// Haar-random pure state.
    pub fn random_pure<R: Rng>(dim: usize, rng: &mut R) -> Self {
        let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        Self::pure(&v).expect("gaussian vector is nonzero with probability one")
    }

    /// Random mixed state `GG*/tr(GG*)` with Ginibre `G`.
    pub fn random_mixed<R: Rng>(dim: usize, rng: &mut R) -> Self {
        let g = ginibre(dim, rng);
        let rho = &g * &g.adjoint();
        let tr = rho.trace().re;
        Self {
            matrix: rho.scale(1.0 / tr).hermitian_part(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `tr(ρ X)`
    pub fn expectation(&self, x: &CMatrix) -> Complex64 {
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.matrix[(i, j)] * x[(j, i)];
            }
        }
        acc
    }
}

/// Outcome statistics of a POVM in a state.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    /// Clipped at zero and renormalized; safe for distance functions.
    pub probs: Vec<f64>,
    /// `Re tr(ρ A_a)` before clipping.
    pub raw: Vec<f64>,
}

/// `p(a) = tr(ρ A_a)`.
pub fn outcome_distribution(p: &Povm, state: &State) -> Result<Distribution> {
    if p.dim() != state.dim() {
        return Err(Error::DimensionMismatch(p.dim(), state.dim()));
    }
    let raw: Vec<f64> = p.elements().iter().map(|e| state.expectation(e).re).collect();
    let clipped: Vec<f64> = raw.iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let probs = if total > 0.0 {
        clipped.iter().map(|x| x / total).collect()
    } else {
        clipped
    };
    Ok(Distribution { probs, raw })
}

fn bloch_operator(n: [f64; 3]) -> CMatrix {
    let [sx, sy, sz] = pauli();
    let mut m = sx.scale(n[0]);
    m += &sy.scale(n[1]);
    m += &sz.scale(n[2]);
    m
}

fn check_unit(n: [f64; 3]) -> Result<()> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if norm.is_nan() || (norm - 1.0).abs() > 1e-9 {
        return invalid(format!("Bloch vector must have unit length, got {norm}"));
    }
    Ok(())
}

/// Rank-one projector `E(n) = (1 + n·σ)/2`.
pub fn qubit_projector(n: [f64; 3]) -> Result<CMatrix> {
    check_unit(n)?;
    Ok((&CMatrix::identity(2) + &bloch_operator(n)).scale(0.5))
}

/// Sharp qubit observable `{E(n), E(−n)}` with outcomes `"+"`, `"-"`.
pub fn qubit_pvm(n: [f64; 3]) -> Result<Povm> {
    noisy_qubit_povm(n, 1.0)
}

/// Unsharp qubit observable `{(1 ± η n·σ)/2}` with outcomes `"+"`, `"-"`.
pub fn noisy_qubit_povm(n: [f64; 3], eta: f64) -> Result<Povm> {
    check_unit(n)?;
    if !(0.0..=1.0).contains(&eta) {
        return invalid(format!("sharpness η must lie in [0, 1], got {eta}"));
    }
    let id = CMatrix::identity(2);
    let b = bloch_operator(n).scale(eta);
    Povm::new(
        vec!["+".to_string(), "-".to_string()],
        vec![(&id + &b).scale(0.5), (&id - &b).scale(0.5)],
    )
}

/// Bloch vector in the x–z plane at polar angle `theta` from +z.
pub fn bloch_xz(theta: f64) -> [f64; 3] {
    [theta.sin(), 0.0, theta.cos()]
}

fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let data = (0..dim * dim).map(|_| gaussian(rng)).collect();
    CMatrix::from_vec(dim, data).expect("finite gaussian samples")
}

/// Random full-rank POVM: `S^{-1/2} G_k S^{-1/2}` with `G_k = R_k R_k*`,
/// `R_k` complex Gaussian and `S = Σ_k G_k`. Deterministic in `seed`.
pub fn random_povm(dim: usize, n_outcomes: usize, seed: u64) -> Result<Povm> {
    if dim == 0 || n_outcomes == 0 {
        return invalid("random_povm needs dim ≥ 1 and at least one outcome");
    }
    if n_outcomes == 1 {
        return Povm::from_elements(vec![CMatrix::identity(dim)]);
    }
    let mut last_err = None;
    for attempt in 0..RANDOM_POVM_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let gs: Vec<CMatrix> = (0..n_outcomes)
            .map(|_| {
                let r = ginibre(dim, &mut rng);
                &r * &r.adjoint()
            })
            .collect();
        let s = linalg::sum(gs.iter()).expect("nonempty");
        match linalg::inverse_sqrt(&s) {
            Ok(h) => {
                let elements = gs.iter().map(|g| (&(&h * g) * &h).hermitian_part()).collect();
                return Povm::from_elements(elements);
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Numerical("random_povm failed".into())))
}

/// Random projective measurement: the eigenbasis of a random Hermitian
/// matrix is split into `n_outcomes` contiguous blocks (empty blocks give
/// zero elements when `n_outcomes > dim`).
pub fn random_pvm(dim: usize, n_outcomes: usize, seed: u64) -> Result<Povm> {
    if dim == 0 || n_outcomes == 0 {
        return invalid("random_pvm needs dim ≥ 1 and at least one outcome");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = ginibre(dim, &mut rng).hermitian_part();
    let basis = eigh(&h)?;
    let mut elements = vec![CMatrix::zeros(dim); n_outcomes];
    for k in 0..dim {
        let block = rng.random_range(0..n_outcomes);
        elements[block] += &CMatrix::outer(&basis.vector(k));
    }
    Povm::from_elements(elements)
}
