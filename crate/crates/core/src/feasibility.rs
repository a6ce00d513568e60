//! Numerical search for (approximate) joint observables.
//!
//! Any joint measurement `(F, f_A, f_B)` can be pushed forward along
//! `x ↦ (f_A(x), f_B(x))` to a POVM on `Ω_A × Ω_B` with the same two
//! marginals, so the search runs over product-outcome POVMs only and reads
//! the observables off with the coordinate maps.
//!
//! Both searches are convex feasibility problems in the joint elements
//! `F_{ab}`: positivity is a product of PSD cones, exact marginals are an
//! affine set, and approximate marginals `‖Σ_b F_{ab} − A_a‖ ≤ t` are
//! operator intervals. Each set has a closed-form Frobenius projection and
//! Dykstra's algorithm cycles through them. Projection methods produce no
//! dual certificate, so infeasibility is only ever certified analytically
//! (by the commutator condition); a stalled solver reports `Undecided`.

use std::fmt;

use rayon::prelude::*;

use crate::bounds::{check_corollary_joint, check_theorem1, JointScheme, SLACK_TOL};
use crate::distance::d_inf;
use crate::error::{Error, Result};
use crate::linalg::{self, clip_spectrum, inverse_sqrt, op_norm, project_psd, CMatrix};
use crate::povm::{validate_povm, Povm, Tolerance};
use crate::smearing::{coordinate_maps, marginalize, OutcomeMap};

/// Tolerance at which a feasible witness must validate as a POVM.
pub const WITNESS_POVM_TOL: f64 = 1e-7;
/// Largest marginal deviation allowed for a feasible witness.
pub const WITNESS_MARGINAL_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    pub max_iter: usize,
    /// Terminal residual (max constraint violation).
    pub tol: f64,
    /// Iterations without residual improvement before giving up.
    pub stagnation_window: usize,
    pub stagnation_eps: f64,
    /// Run the analytic commutator screen before iterating.
    pub screen: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iter: 20_000,
            tol: 1e-9,
            stagnation_window: 500,
            stagnation_eps: 1e-12,
            screen: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Feasible,
    Infeasible,
    Undecided,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Feasible => "feasible",
            Status::Infeasible => "infeasible",
            Status::Undecided => "undecided",
        })
    }
}

#[derive(Clone, Debug)]
pub struct FeasibilityResult {
    pub status: Status,
    /// Joint POVM on `Ω_A × Ω_B`, present iff feasible.
    pub witness: Option<Povm>,
    pub residual: f64,
    pub iterations: usize,
    pub certificate_note: String,
}

type Joint = Vec<CMatrix>;

/// A closed convex set of joint element families with a Frobenius projection.
trait ConvexSet: Sync {
    fn project(&self, x: &[CMatrix]) -> Result<Joint>;
}

/// `F_{ab} ⪰ floor · 1` for every element.
struct PsdCone {
    floor: f64,
}

impl ConvexSet for PsdCone {
    fn project(&self, x: &[CMatrix]) -> Result<Joint> {
        x.iter().map(|m| clip_spectrum(m, self.floor, f64::INFINITY)).collect()
    }
}

/// `Σ_b F_{ab} = A_a` and `Σ_a F_{ab} = B_b`.
struct ExactMarginals<'a> {
    a: &'a [CMatrix],
    b: &'a [CMatrix],
}

impl ConvexSet for ExactMarginals<'_> {
    fn project(&self, x: &[CMatrix]) -> Result<Joint> {
        let (na, nb) = (self.a.len(), self.b.len());
        let row_excess: Vec<CMatrix> = (0..na)
            .map(|i| {
                let mut s = -&self.a[i];
                for j in 0..nb {
                    s += &x[i * nb + j];
                }
                s
            })
            .collect();
        let col_excess: Vec<CMatrix> = (0..nb)
            .map(|j| {
                let mut s = -&self.b[j];
                for i in 0..na {
                    s += &x[i * nb + j];
                }
                s
            })
            .collect();
        let total = (&linalg::sum(row_excess.iter()).unwrap() + &linalg::sum(col_excess.iter()).unwrap())
            .scale(0.5 / (na * nb) as f64);
        let mut out = Vec::with_capacity(na * nb);
        for i in 0..na {
            let ri = row_excess[i].scale(1.0 / nb as f64);
            for j in 0..nb {
                let mut y = &x[i * nb + j] - &ri;
                y -= &col_excess[j].scale(1.0 / na as f64);
                y += &total;
                out.push(y.hermitian_part());
            }
        }
        Ok(out)
    }
}

/// Eigenvalues below this (relative to the largest) count as zero when
/// computing supports.
const RANK_TOL: f64 = 1e-10;

fn support_projector(m: &CMatrix) -> Result<CMatrix> {
    let e = linalg::eigh(m)?;
    let cut = RANK_TOL * e.max_abs().max(1.0);
    Ok(e.reassemble(|l| if l > cut { 1.0 } else { 0.0 }))
}

/// `F_{ab} = P_{ab} F_{ab} P_{ab}`, with `P_{ab}` the projector onto
/// `range(A_a) ∩ range(B_b)`. Every joint observable satisfies this since
/// `F_{ab} ⪯ A_a` and `F_{ab} ⪯ B_b`.
struct Face {
    /// `None` where the face is the whole space.
    projectors: Vec<Option<CMatrix>>,
}

impl Face {
    fn new(a: &[CMatrix], b: &[CMatrix]) -> Result<Self> {
        let dim = a[0].dim();
        let id = CMatrix::identity(dim);
        let pa = a.iter().map(support_projector).collect::<Result<Vec<_>>>()?;
        let pb = b.iter().map(support_projector).collect::<Result<Vec<_>>>()?;
        let mut projectors = Vec::with_capacity(a.len() * b.len());
        for x in &pa {
            for y in &pb {
                // range(P) ∩ range(Q) is the kernel of (1 − P) + (1 − Q)
                let gap = &(&id - x) + &(&id - y);
                let e = linalg::eigh(&gap)?;
                let p = e.reassemble(|l| if l < 1e-8 { 1.0 } else { 0.0 });
                let full = e.values.iter().all(|&l| l < 1e-8);
                projectors.push(if full { None } else { Some(p) });
            }
        }
        Ok(Self { projectors })
    }

    fn is_trivial(&self) -> bool {
        self.projectors.iter().all(Option::is_none)
    }
}

impl ConvexSet for Face {
    fn project(&self, x: &[CMatrix]) -> Result<Joint> {
        Ok(x.iter()
            .zip(&self.projectors)
            .map(|(m, p)| match p {
                Some(p) => (&(p * m) * p).hermitian_part(),
                None => m.clone(),
            })
            .collect())
    }
}

/// `Σ_{ab} F_{ab} = 1`.
struct UnitSum;

impl ConvexSet for UnitSum {
    fn project(&self, x: &[CMatrix]) -> Result<Joint> {
        let n = x.len();
        let mut excess = linalg::sum(x.iter()).unwrap();
        excess -= &CMatrix::identity(excess.dim());
        let shift = excess.scale(1.0 / n as f64);
        Ok(x.iter().map(|m| (m - &shift).hermitian_part()).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    A,
    B,
}

/// `‖marginal_k − target_k‖ ≤ radius` for every outcome `k` of one side.
struct MarginalBall<'a> {
    side: Side,
    targets: &'a [CMatrix],
    na: usize,
    nb: usize,
    radius: f64,
}

impl MarginalBall<'_> {
    fn group(&self, k: usize) -> Vec<usize> {
        match self.side {
            Side::A => (0..self.nb).map(|j| k * self.nb + j).collect(),
            Side::B => (0..self.na).map(|i| i * self.nb + k).collect(),
        }
    }
}

impl ConvexSet for MarginalBall<'_> {
    // For a fixed group, the nearest family with sum in a convex set K shifts
    // every member by (P_K(s) − s)/|group|, where s is the current sum.
    fn project(&self, x: &[CMatrix]) -> Result<Joint> {
        let mut out: Joint = x.to_vec();
        for (k, target) in self.targets.iter().enumerate() {
            let idx = self.group(k);
            let mut diff = -target;
            for &i in &idx {
                diff += &x[i];
            }
            let clipped = clip_spectrum(&diff, -self.radius, self.radius)?;
            let shift = (&clipped - &diff).scale(1.0 / idx.len() as f64);
            for &i in &idx {
                out[i] = (&x[i] + &shift).hermitian_part();
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Termination {
    Converged,
    Stagnated,
    Exhausted,
}

struct Run {
    x: Joint,
    residual: f64,
    iterations: usize,
    termination: Termination,
}

/// Cyclic Dykstra projections onto the intersection of `sets`, stopping once
/// `residual(x) ≤ tol`, on stagnation, or when the budget runs out.
fn dykstra(
    sets: &[&dyn ConvexSet],
    x0: Joint,
    opts: &SolverOptions,
    residual: impl Fn(&[CMatrix]) -> Result<f64>,
) -> Result<Run> {
    let mut x = x0;
    let mut r = residual(&x)?;
    if r <= opts.tol {
        return Ok(Run {
            x,
            residual: r,
            iterations: 0,
            termination: Termination::Converged,
        });
    }
    let dim = x[0].dim();
    let mut corrections: Vec<Joint> = vec![vec![CMatrix::zeros(dim); x.len()]; sets.len()];
    let mut best = r;
    let mut last_improvement = 0;
    for iter in 1..=opts.max_iter {
        for (set, p) in sets.iter().zip(corrections.iter_mut()) {
            let shifted: Joint = x.iter().zip(p.iter()).map(|(xi, pi)| xi + pi).collect();
            let projected = set.project(&shifted)?;
            for ((pi, si), zi) in p.iter_mut().zip(&shifted).zip(&projected) {
                *pi = si - zi;
            }
            x = projected;
        }
        r = residual(&x)?;
        if r <= opts.tol {
            return Ok(Run {
                x,
                residual: r,
                iterations: iter,
                termination: Termination::Converged,
            });
        }
        if r < best - opts.stagnation_eps {
            best = r;
            last_improvement = iter;
        } else if iter - last_improvement >= opts.stagnation_window {
            return Ok(Run {
                x,
                residual: r,
                iterations: iter,
                termination: Termination::Stagnated,
            });
        }
    }
    Ok(Run {
        x,
        residual: r,
        iterations: opts.max_iter,
        termination: Termination::Exhausted,
    })
}

/// Warm start `F_{ab} ∝ (A_a B_b + B_b A_a)/2`, clipped to PSD and congruence
/// normalized so the family sums to the identity. Exact for commuting pairs.
pub fn product_initial_guess(a: &Povm, b: &Povm) -> Result<Vec<CMatrix>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let mut elements = Vec::with_capacity(a.len() * b.len());
    for x in a.elements() {
        for y in b.elements() {
            elements.push(project_psd(&(x * y).hermitian_part())?);
        }
    }
    Ok(normalize_to_unit_sum(&elements).unwrap_or(elements))
}

/// `S^{-1/2} F S^{-1/2}` with `S = Σ F`; preserves positivity.
fn normalize_to_unit_sum(elements: &[CMatrix]) -> Result<Vec<CMatrix>> {
    let s = linalg::sum(elements.iter()).expect("nonempty");
    let h = inverse_sqrt(&s)?;
    Ok(elements.iter().map(|f| (&(&h * f) * &h).hermitian_part()).collect())
}

fn marginal_sums(x: &[CMatrix], na: usize, nb: usize) -> (Vec<CMatrix>, Vec<CMatrix>) {
    let rows = (0..na)
        .map(|i| linalg::sum(x[i * nb..(i + 1) * nb].iter()).unwrap())
        .collect();
    let cols = (0..nb)
        .map(|j| linalg::sum((0..na).map(|i| &x[i * nb + j])).unwrap())
        .collect();
    (rows, cols)
}

fn max_deviation(got: &[CMatrix], want: &[CMatrix]) -> Result<f64> {
    got.iter()
        .zip(want)
        .try_fold(0.0f64, |acc, (g, w)| Ok(acc.max(op_norm(&(g - w))?)))
}

fn min_eigen_violation(x: &[CMatrix]) -> Result<f64> {
    x.iter()
        .try_fold(0.0f64, |acc, m| Ok(acc.max(-linalg::min_eigenvalue(m)?)))
}

/// Product labels and coordinate maps for a pair of observables.
pub fn product_structure(a: &Povm, b: &Povm) -> Result<(OutcomeMap, OutcomeMap)> {
    coordinate_maps(a.outcomes(), b.outcomes())
}

/// Decides whether `a` and `b` admit a joint observable.
///
/// The commutator screen runs first (when enabled) and certifies
/// infeasibility analytically. Otherwise Dykstra iterations look for a joint
/// POVM with the exact marginals, cycling through the PSD cone, the supports
/// forced by rank-deficient marginals, and the affine marginal constraints;
/// success is `Feasible` with a validated witness, anything else is
/// `Undecided`. Instances whose constraint sets meet at a small angle converge
/// slowly and may exhaust the budget.
pub fn check_joint_measurability(a: &Povm, b: &Povm, opts: &SolverOptions) -> Result<FeasibilityResult> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let (map_a, map_b) = product_structure(a, b)?;

    if opts.screen {
        let screen = check_corollary_joint(a, b)?;
        if !screen.satisfied {
            return Ok(FeasibilityResult {
                status: Status::Infeasible,
                witness: None,
                residual: f64::NAN,
                iterations: 0,
                certificate_note: format!(
                    "commutator condition violated: sqrt(V_A V_B)={:.6} < max||[A_a,B_b]||/2={:.6}, slack={:.6e}",
                    screen.lhs, screen.rhs, screen.slack
                ),
            });
        }
    }

    let (na, nb) = (a.len(), b.len());
    let marginals = ExactMarginals {
        a: a.elements(),
        b: b.elements(),
    };
    let cone = PsdCone { floor: 0.0 };
    let face = Face::new(a.elements(), b.elements())?;
    let mut sets: Vec<&dyn ConvexSet> = vec![&cone];
    if !face.is_trivial() {
        sets.push(&face);
    }
    sets.push(&marginals);
    let residual = |x: &[CMatrix]| -> Result<f64> {
        let (rows, cols) = marginal_sums(x, na, nb);
        let dev = max_deviation(&rows, a.elements())?.max(max_deviation(&cols, b.elements())?);
        Ok(dev.max(min_eigen_violation(x)?))
    };
    let run = dykstra(&sets, product_initial_guess(a, b)?, opts, residual)?;

    if run.termination == Termination::Converged {
        // clear the residual negativity so the witness validates at default tolerances
        let polished = if run.iterations == 0 {
            run.x
        } else {
            let clipped = run.x.iter().map(project_psd).collect::<Result<Vec<_>>>()?;
            normalize_to_unit_sum(&clipped).unwrap_or(run.x)
        };
        let witness = Povm::new(map_a.source().to_vec(), polished)?;
        let report = validate_povm(&witness, Tolerance::uniform(WITNESS_POVM_TOL));
        let dev_a = d_inf(a, &marginalize(&witness, &map_a)?)?.value;
        let dev_b = d_inf(b, &marginalize(&witness, &map_b)?)?.value;
        if report.is_valid() && dev_a <= WITNESS_MARGINAL_TOL && dev_b <= WITNESS_MARGINAL_TOL {
            return Ok(FeasibilityResult {
                status: Status::Feasible,
                witness: Some(witness),
                residual: run.residual,
                iterations: run.iterations,
                certificate_note: format!(
                    "joint observable found (marginal deviations {dev_a:.3e}, {dev_b:.3e})"
                ),
            });
        }
        return Ok(FeasibilityResult {
            status: Status::Undecided,
            witness: None,
            residual: run.residual,
            iterations: run.iterations,
            certificate_note: format!("converged iterate failed witness checks: {report}"),
        });
    }
    let why = match run.termination {
        Termination::Stagnated => format!(
            "residual stagnated for {} iterations",
            opts.stagnation_window
        ),
        _ => "iteration budget exhausted".to_string(),
    };
    Ok(FeasibilityResult {
        status: Status::Undecided,
        witness: None,
        residual: run.residual,
        iterations: run.iterations,
        certificate_note: format!("{why}; residual {:.3e} above tolerance, no certificate", run.residual),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrontierOptions {
    pub solver: SolverOptions,
    /// Bisection stops once the bracket on `Y` is this narrow.
    pub bisect_tol: f64,
    /// Slack allowed between a query's targets and the achieved distances.
    pub accept_tol: f64,
}

impl Default for FrontierOptions {
    fn default() -> Self {
        Self {
            solver: SolverOptions {
                max_iter: 3_000,
                tol: 1e-10,
                stagnation_window: 500,
                stagnation_eps: 1e-12,
                screen: false,
            },
            bisect_tol: 1e-4,
            accept_tol: 1e-7,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FrontierPoint {
    pub x_target: f64,
    pub x_achieved: f64,
    pub y_achieved: f64,
    /// Joint POVM on `Ω_A × Ω_B` achieving the two distances.
    pub witness: Povm,
    /// Slack of the uniform-distance tradeoff at the achieved point.
    pub theorem1_slack: f64,
}

struct Candidate {
    x: f64,
    y: f64,
    elements: Vec<CMatrix>,
}

fn evaluate(a: &Povm, b: &Povm, elements: Vec<CMatrix>) -> Result<Candidate> {
    let (rows, cols) = marginal_sums(&elements, a.len(), b.len());
    Ok(Candidate {
        x: max_deviation(&rows, a.elements())?,
        y: max_deviation(&cols, b.elements())?,
        elements,
    })
}

/// Smallest achievable `Y = D(B, marginal_B(F))` subject to
/// `D(A, marginal_A(F)) ≤ x_target`, found by bisection on `Y` with a
/// feasibility query at each step.
///
/// The returned witness is always an exact POVM (congruence normalized), so
/// every tradeoff inequality applies to the reported pair.
pub fn frontier_point(a: &Povm, b: &Povm, x_target: f64, opts: &FrontierOptions) -> Result<FrontierPoint> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if x_target.is_nan() || x_target < 0.0 {
        return Err(Error::InvalidInput(format!("X target must be nonnegative, got {x_target}")));
    }
    let (map_a, map_b) = product_structure(a, b)?;
    let labels = map_a.source().to_vec();
    let (na, nb) = (a.len(), b.len());
    let accept = opts.accept_tol;

    // Seeds that are always valid POVMs: A read exactly with B guessed
    // blindly, B read exactly with A guessed blindly, and the product guess.
    let mut seeds = Vec::new();
    let blind_b: Vec<CMatrix> = a
        .elements()
        .iter()
        .flat_map(|x| std::iter::repeat_n(x.scale(1.0 / nb as f64), nb))
        .collect();
    seeds.push(blind_b);
    let mut blind_a = Vec::with_capacity(na * nb);
    for _ in 0..na {
        for y in b.elements() {
            blind_a.push(y.scale(1.0 / na as f64));
        }
    }
    seeds.push(blind_a);
    seeds.push(product_initial_guess(a, b)?);

    let mut best: Option<Candidate> = None;
    for s in seeds {
        let c = evaluate(a, b, s)?;
        if c.x <= x_target + accept && best.as_ref().is_none_or(|bst| c.y < bst.y) {
            best = Some(c);
        }
    }
    let mut best = best.ok_or_else(|| {
        Error::Undecided(format!("no valid joint observable found for X target {x_target}"))
    })?;

    let residual_for = |y_radius: f64| {
        move |x: &[CMatrix]| -> Result<f64> {
            let (rows, cols) = marginal_sums(x, na, nb);
            let ex_a = (max_deviation(&rows, a.elements())? - x_target).max(0.0);
            let ex_b = (max_deviation(&cols, b.elements())? - y_radius).max(0.0);
            let mut total = linalg::sum(x.iter()).unwrap();
            total -= &CMatrix::identity(x[0].dim());
            Ok(ex_a.max(ex_b).max(op_norm(&total)?).max(min_eigen_violation(x)?))
        }
    };

    let mut lo = 0.0f64;
    let mut hi = best.y;
    while hi - lo > opts.bisect_tol {
        let mid = 0.5 * (lo + hi);
        let ball_a = MarginalBall {
            side: Side::A,
            targets: a.elements(),
            na,
            nb,
            radius: x_target,
        };
        let ball_b = MarginalBall {
            side: Side::B,
            targets: b.elements(),
            na,
            nb,
            radius: mid,
        };
        let cone = PsdCone { floor: 0.0 };
        let sets: [&dyn ConvexSet; 4] = [&ball_a, &ball_b, &UnitSum, &cone];
        let run = dykstra(&sets, best.elements.clone(), &opts.solver, residual_for(mid))?;
        let accepted = if run.residual <= accept {
            normalize_to_unit_sum(&run.x)
                .ok()
                .map(|els| evaluate(a, b, els))
                .transpose()?
                .filter(|c| c.x <= x_target + accept && c.y <= mid + accept)
        } else {
            None
        };
        match accepted {
            Some(c) => {
                hi = mid.min(c.y).max(lo);
                if c.y < best.y {
                    best = c;
                }
            }
            None => lo = mid,
        }
    }

    let witness = Povm::new(labels, best.elements)?;
    let report = check_theorem1(a, b, JointScheme::new(&witness, &map_a, &map_b))?;
    if report.slack < -SLACK_TOL {
        return Err(Error::Numerical(format!(
            "frontier witness violates the uniform tradeoff (slack {:.3e})",
            report.slack
        )));
    }
    Ok(FrontierPoint {
        x_target,
        x_achieved: report.x,
        y_achieved: report.y,
        witness,
        theorem1_slack: report.slack,
    })
}

/// Frontier points for each target, computed independently on up to
/// `threads` workers and then made monotone: a witness found for a smaller
/// target also serves every larger one.
pub fn frontier_sweep(
    a: &Povm,
    b: &Povm,
    x_targets: &[f64],
    opts: &FrontierOptions,
    threads: usize,
) -> Result<Vec<FrontierPoint>> {
    let solve = |&t: &f64| frontier_point(a, b, t, opts);
    let mut points: Vec<FrontierPoint> = if threads <= 1 {
        x_targets.iter().map(solve).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
        pool.install(|| x_targets.par_iter().map(solve).collect::<Result<_>>())?
    };

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].x_target.total_cmp(&points[j].x_target));
    for w in 1..order.len() {
        let (prev, cur) = (order[w - 1], order[w]);
        if points[prev].y_achieved < points[cur].y_achieved {
            let target = points[cur].x_target;
            points[cur] = FrontierPoint {
                x_target: target,
                ..points[prev].clone()
            };
        }
    }
    Ok(points)
}

/// `n` evenly spaced targets on `[0, x_max]`.
pub fn target_grid(x_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|k| x_max * k as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::check_corollary_joint;
    use crate::povm::{ginibre, noisy_qubit_povm, qubit_pvm, random_povm};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn noisy_pair(eta: f64) -> (Povm, Povm) {
        (
            noisy_qubit_povm([1.0, 0.0, 0.0], eta).unwrap(),
            noisy_qubit_povm([0.0, 0.0, 1.0], eta).unwrap(),
        )
    }

    #[test]
    fn exact_marginal_projection_hits_targets() {
        let a = random_povm(2, 3, 1).unwrap();
        let b = random_povm(2, 2, 2).unwrap();
        let x: Joint = random_povm(2, 6, 3).unwrap().elements().to_vec();
        let set = ExactMarginals {
            a: a.elements(),
            b: b.elements(),
        };
        let y = set.project(&x).unwrap();
        let (rows, cols) = marginal_sums(&y, 3, 2);
        assert!(max_deviation(&rows, a.elements()).unwrap() < 1e-12);
        assert!(max_deviation(&cols, b.elements()).unwrap() < 1e-12);
        // idempotent
        let z = set.project(&y).unwrap();
        for (p, q) in y.iter().zip(&z) {
            assert!(p.max_abs_diff(q) < 1e-14);
        }
    }

    #[test]
    fn marginal_ball_projection_lands_in_ball() {
        let a = random_povm(2, 2, 4).unwrap();
        let x: Joint = random_povm(2, 4, 5).unwrap().elements().to_vec();
        let ball = MarginalBall {
            side: Side::A,
            targets: a.elements(),
            na: 2,
            nb: 2,
            radius: 0.05,
        };
        let y = ball.project(&x).unwrap();
        let (rows, _) = marginal_sums(&y, 2, 2);
        assert!(max_deviation(&rows, a.elements()).unwrap() <= 0.05 + 1e-12);
    }

    #[test]
    fn commuting_pvms_are_feasible_immediately() {
        let a = qubit_pvm([0.0, 0.0, 1.0]).unwrap();
        let b = Povm::from_elements(vec![
            CMatrix::from_real_diagonal(&[0.25, 0.5]),
            CMatrix::from_real_diagonal(&[0.75, 0.5]),
        ])
        .unwrap();
        let r = check_joint_measurability(&a, &b, &SolverOptions::default()).unwrap();
        assert_eq!(r.status, Status::Feasible);
        assert_eq!(r.iterations, 0);
        let w = r.witness.unwrap();
        assert!(w.element(0).max_abs_diff(&CMatrix::from_real_diagonal(&[0.25, 0.0])) < 1e-12);
    }

    #[test]
    fn orthogonal_sharp_qubits_are_certified_infeasible() {
        let a = qubit_pvm([1.0, 0.0, 0.0]).unwrap();
        let b = qubit_pvm([0.0, 0.0, 1.0]).unwrap();
        let r = check_joint_measurability(&a, &b, &SolverOptions::default()).unwrap();
        assert_eq!(r.status, Status::Infeasible);
        assert!(r.certificate_note.contains("commutator condition violated"));
    }

    #[test]
    fn noisy_pair_on_both_sides_of_threshold() {
        let (a, b) = noisy_pair(0.70);
        let r = check_joint_measurability(&a, &b, &SolverOptions::default()).unwrap();
        assert_eq!(r.status, Status::Feasible, "{}", r.certificate_note);

        let (a, b) = noisy_pair(0.72);
        let r = check_joint_measurability(&a, &b, &SolverOptions::default()).unwrap();
        assert_eq!(r.status, Status::Infeasible);
        let raw = SolverOptions {
            screen: false,
            ..SolverOptions::default()
        };
        let r = check_joint_measurability(&a, &b, &raw).unwrap();
        assert_eq!(r.status, Status::Undecided);
        assert!(r.residual > raw.tol);
        assert!(!check_corollary_joint(&a, &b).unwrap().satisfied);
    }

    #[test]
    fn marginals_of_random_rank_one_joint_are_recovered() {
        for seed in [0u64, 3, 9] {
            // rank-one elements give sharp marginals, which the product guess misses
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let gs: Vec<CMatrix> = (0..6).map(|_| CMatrix::outer(&ginibre(3, &mut rng).column(0))).collect();
            let h = inverse_sqrt(&linalg::sum(gs.iter()).unwrap()).unwrap();
            let f = Povm::from_elements(gs.iter().map(|g| (&(&h * g) * &h).hermitian_part()).collect()).unwrap();
            let a = Povm::from_elements((0..3).map(|i| &f.elements()[2 * i] + &f.elements()[2 * i + 1]).collect())
                .unwrap();
            let b = Povm::from_elements(vec![
                linalg::sum(f.elements().iter().step_by(2)).unwrap(),
                linalg::sum(f.elements().iter().skip(1).step_by(2)).unwrap(),
            ])
            .unwrap();
            let r = check_joint_measurability(&a, &b, &SolverOptions::default()).unwrap();
            assert_eq!(r.status, Status::Feasible, "seed {seed}: {}", r.certificate_note);
            assert!(r.iterations > 0);
            let w = r.witness.unwrap();
            assert!(validate_povm(&w, Tolerance::default()).is_valid());
            let (ma, mb) = product_structure(&a, &b).unwrap();
            assert!(d_inf(&a, &marginalize(&w, &ma).unwrap()).unwrap().value <= WITNESS_MARGINAL_TOL);
            assert!(d_inf(&b, &marginalize(&w, &mb).unwrap()).unwrap().value <= WITNESS_MARGINAL_TOL);
        }
    }

    #[test]
    fn face_restriction_keeps_supports() {
        let a = qubit_pvm([0.0, 0.0, 1.0]).unwrap();
        let b = noisy_qubit_povm([1.0, 0.0, 0.0], 0.5).unwrap();
        let face = Face::new(a.elements(), b.elements()).unwrap();
        // B is full rank, so each face is the support of the matching A element
        for (k, p) in face.projectors.iter().enumerate() {
            let p = p.as_ref().unwrap();
            assert!(p.max_abs_diff(a.element(k / 2)) < 1e-12);
        }
        let full = Face::new(b.elements(), b.elements()).unwrap();
        assert!(full.is_trivial());
    }

    #[test]
    fn dimension_mismatch() {
        let a = random_povm(2, 2, 1).unwrap();
        let b = random_povm(3, 2, 1).unwrap();
        assert!(matches!(
            check_joint_measurability(&a, &b, &SolverOptions::default()),
            Err(Error::DimensionMismatch(2, 3))
        ));
        assert!(frontier_point(&a, &b, 0.1, &FrontierOptions::default()).is_err());
    }

    #[test]
    fn frontier_for_commuting_pair_reaches_origin() {
        let a = qubit_pvm([0.0, 0.0, 1.0]).unwrap();
        let b = noisy_qubit_povm([0.0, 0.0, 1.0], 0.4).unwrap();
        let p = frontier_point(&a, &b, 0.0, &FrontierOptions::default()).unwrap();
        assert!(p.x_achieved < 1e-9 && p.y_achieved < 1e-9);
    }

    #[test]
    fn frontier_at_zero_for_orthogonal_sharp_qubits() {
        let a = qubit_pvm([0.0, 0.0, 1.0]).unwrap();
        let b = qubit_pvm([1.0, 0.0, 0.0]).unwrap();
        let p = frontier_point(&a, &b, 0.0, &FrontierOptions::default()).unwrap();
        assert!(p.x_achieved <= 1e-6);
        // a residual X of order 1e-7 lowers Y through the square-root term
        let floor = crate::bounds::pvm_contour(p.x_achieved, 0.5).unwrap();
        assert!(p.y_achieved >= floor - 1e-9);
        assert!(p.y_achieved >= 0.49);
        assert!(p.y_achieved <= 0.5 + 1e-3);
        assert!(p.theorem1_slack >= -1e-9);
    }

    #[test]
    fn sweep_is_monotone() {
        let a = qubit_pvm([0.0, 0.0, 1.0]).unwrap();
        let b = qubit_pvm([1.0, 0.0, 0.0]).unwrap();
        let targets = target_grid(0.5, 6);
        let pts = frontier_sweep(&a, &b, &targets, &FrontierOptions::default(), 2).unwrap();
        assert!(pts.windows(2).all(|w| w[1].y_achieved <= w[0].y_achieved + 1e-6));
        for p in &pts {
            assert!(p.x_achieved <= p.x_target + 1e-6);
        }
        let seq = frontier_sweep(&a, &b, &targets, &FrontierOptions::default(), 1).unwrap();
        for (p, q) in pts.iter().zip(&seq) {
            assert_eq!(p.y_achieved, q.y_achieved);
        }
    }
}
