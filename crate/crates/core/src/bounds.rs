//! Error–disturbance style tradeoff inequalities for approximate joint
//! measurements.
//!
//! Every checker returns a [`TradeoffReport`] holding both sides of the
//! inequality. The universally valid inequalities (the two main tradeoffs and
//! their projective specializations) must come out satisfied for every valid
//! input; a violation there means a numerical bug. The joint-measurability
//! condition is different: it is necessary only, so a violation proves that
//! no joint observable exists while satisfaction proves nothing.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;

use crate::distance::{d_inf, d_l1};
use crate::error::{invalid, Error, Result};
use crate::linalg::{commutator_norm, CMatrix};
use crate::povm::{intrinsic_uncertainty_inf, intrinsic_uncertainty_l1, is_pvm, Povm};
use crate::smearing::{marginalize, OutcomeMap};
use crate::subsets::{check_capacity, for_each_half_subset};

/// Reports with `lhs − rhs ≥ −SLACK_TOL` count as satisfied.
pub const SLACK_TOL: f64 = 1e-9;

/// Tolerance used when an inequality requires projective inputs.
pub const PVM_TOL: f64 = 1e-9;

/// Combined cap on `(|Ω_A| − 1) + (|Ω_B| − 1)` for the subset-pair search.
pub const MAX_SUBSET_PAIR_BITS: usize = 24;

const CONTOUR_TOL: f64 = 1e-10;

/// Upper end of the accuracy axis used for the admissible-region curves.
pub const REGION_X_MAX: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InequalityId {
    Theorem1,
    Theorem2,
    CorPvmInf,
    CorJoint,
    CorPvmInstrument,
    CorPvmL1,
    Qubit,
    Heinosaari,
}

impl InequalityId {
    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::Theorem1 => "theorem1",
            InequalityId::Theorem2 => "theorem2",
            InequalityId::CorPvmInf => "cor_pvm_inf",
            InequalityId::CorJoint => "cor_joint",
            InequalityId::CorPvmInstrument => "cor_pvm_instrument",
            InequalityId::CorPvmL1 => "cor_pvm_l1",
            InequalityId::Qubit => "qubit",
            InequalityId::Heinosaari => "heinosaari",
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TradeoffReport {
    pub inequality: InequalityId,
    /// Distance between `A` and its reconstruction.
    pub x: f64,
    /// Distance between `B` and its reconstruction.
    pub y: f64,
    pub v_a: f64,
    pub v_b: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
    pub note: Option<String>,
}

impl TradeoffReport {
    fn new(inequality: InequalityId, x: f64, y: f64, v_a: f64, v_b: f64, lhs: f64, rhs: f64) -> Self {
        let slack = lhs - rhs;
        Self {
            inequality,
            x,
            y,
            v_a,
            v_b,
            lhs,
            rhs,
            slack,
            satisfied: slack >= -SLACK_TOL,
            note: None,
        }
    }
}

impl fmt::Display for TradeoffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "inequality: {}", self.inequality)?;
        writeln!(f, "X: {:.12}", self.x)?;
        writeln!(f, "Y: {:.12}", self.y)?;
        writeln!(f, "V_A: {:.12}", self.v_a)?;
        writeln!(f, "V_B: {:.12}", self.v_b)?;
        writeln!(f, "lhs: {:.12}", self.lhs)?;
        writeln!(f, "rhs: {:.12}", self.rhs)?;
        writeln!(f, "slack: {:.12}", self.slack)?;
        write!(
            f,
            "status: {}",
            if self.satisfied { "satisfied" } else { "violated" }
        )?;
        if let Some(note) = &self.note {
            write!(f, "\nnote: {note}")?;
        }
        Ok(())
    }
}

fn same_dim(a: &Povm, b: &Povm) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(())
}

/// `max_{a,b} ‖[A_a, B_b]‖`
pub fn max_commutator_norm(a: &Povm, b: &Povm) -> Result<f64> {
    same_dim(a, b)?;
    let mut best = 0.0f64;
    for x in a.elements() {
        for y in b.elements() {
            best = best.max(commutator_norm(x, y)?);
        }
    }
    Ok(best)
}

fn half_subset_sums(p: &Povm) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(1 << (p.len() - 1));
    for_each_half_subset(p.elements(), |_, acc| out.push(acc.clone()));
    out
}

/// `max_{Δ_A, Δ_B} ‖[A_{Δ_A}, B_{Δ_B}]‖` over all pairs of outcome subsets.
pub fn max_subset_commutator_norm(a: &Povm, b: &Povm) -> Result<f64> {
    same_dim(a, b)?;
    check_capacity("A outcome set", a.len())?;
    check_capacity("B outcome set", b.len())?;
    let bits = (a.len() - 1) + (b.len() - 1);
    if bits > MAX_SUBSET_PAIR_BITS {
        return Err(Error::Capacity {
            what: "subset pairs (log2)",
            got: bits,
            limit: MAX_SUBSET_PAIR_BITS,
        });
    }
    // Complements flip the sign of the commutator, so half of each side suffices.
    let sums_a = half_subset_sums(a);
    let sums_b = half_subset_sums(b);
    let mut best = 0.0f64;
    for x in &sums_a {
        for y in &sums_b {
            best = best.max(commutator_norm(x, y)?);
        }
    }
    Ok(best)
}

fn check_nonnegative(args: &[(&str, f64)]) -> Result<()> {
    for (name, v) in args {
        if v.is_nan() || *v < 0.0 {
            return invalid(format!("{name} must be nonnegative, got {v}"));
        }
    }
    Ok(())
}

/// `2XY + X + Y + 2·sqrt(2X + V_A)·sqrt(2Y + V_B)`
pub fn theorem1_lhs(x: f64, y: f64, v_a: f64, v_b: f64) -> Result<f64> {
    check_nonnegative(&[("X", x), ("Y", y), ("V_A", v_a), ("V_B", v_b)])?;
    Ok(2.0 * x * y + x + y + 2.0 * (2.0 * x + v_a).sqrt() * (2.0 * y + v_b).sqrt())
}

/// Projective specialization: `2XY + X + Y + 4·sqrt(XY)`.
pub fn pvm_lhs(x: f64, y: f64) -> Result<f64> {
    theorem1_lhs(x, y, 0.0, 0.0)
}

/// Projective joint instrument: `2XY + X + Y`.
pub fn pvm_instrument_lhs(x: f64, y: f64) -> Result<f64> {
    check_nonnegative(&[("X", x), ("Y", y)])?;
    Ok(2.0 * x * y + x + y)
}

/// An approximate joint measurement of `a` and `b`: a POVM `joint` and the
/// outcome functions reading off each observable.
#[derive(Clone, Copy, Debug)]
pub struct JointScheme<'a> {
    pub joint: &'a Povm,
    pub map_a: &'a OutcomeMap,
    pub map_b: &'a OutcomeMap,
}

impl<'a> JointScheme<'a> {
    pub fn new(joint: &'a Povm, map_a: &'a OutcomeMap, map_b: &'a OutcomeMap) -> Self {
        Self { joint, map_a, map_b }
    }

    /// The two reconstructed observables, after checking compatibility.
    pub fn marginals(&self, a: &Povm, b: &Povm) -> Result<(Povm, Povm)> {
        same_dim(a, b)?;
        same_dim(a, self.joint)?;
        if self.map_a.target() != a.outcomes() {
            return invalid("map for A does not land in A's outcome set");
        }
        if self.map_b.target() != b.outcomes() {
            return invalid("map for B does not land in B's outcome set");
        }
        Ok((marginalize(self.joint, self.map_a)?, marginalize(self.joint, self.map_b)?))
    }
}

/// Uniform-distance tradeoff with intrinsic uncertainties.
pub fn check_theorem1(a: &Povm, b: &Povm, scheme: JointScheme<'_>) -> Result<TradeoffReport> {
    let (ma, mb) = scheme.marginals(a, b)?;
    let x = d_inf(a, &ma)?.value;
    let y = d_inf(b, &mb)?.value;
    let v_a = intrinsic_uncertainty_inf(a)?;
    let v_b = intrinsic_uncertainty_inf(b)?;
    let lhs = theorem1_lhs(x, y, v_a, v_b)?;
    let rhs = max_commutator_norm(a, b)?;
    Ok(TradeoffReport::new(InequalityId::Theorem1, x, y, v_a, v_b, lhs, rhs))
}

/// Total-variation tradeoff over outcome subsets.
pub fn check_theorem2(a: &Povm, b: &Povm, scheme: JointScheme<'_>) -> Result<TradeoffReport> {
    let (ma, mb) = scheme.marginals(a, b)?;
    let x = d_l1(a, &ma)?.value;
    let y = d_l1(b, &mb)?.value;
    let v_a = intrinsic_uncertainty_l1(a)?;
    let v_b = intrinsic_uncertainty_l1(b)?;
    let lhs = theorem1_lhs(x, y, v_a, v_b)?;
    let rhs = max_subset_commutator_norm(a, b)?;
    Ok(TradeoffReport::new(InequalityId::Theorem2, x, y, v_a, v_b, lhs, rhs))
}

fn require_pvms(a: &Povm, b: &Povm) -> Result<()> {
    if !is_pvm(a, PVM_TOL) || !is_pvm(b, PVM_TOL) {
        return invalid("this inequality requires both observables to be projective");
    }
    Ok(())
}

/// Uniform-distance tradeoff for two projective observables.
pub fn check_corollary_pvm_inf(a: &Povm, b: &Povm, scheme: JointScheme<'_>) -> Result<TradeoffReport> {
    require_pvms(a, b)?;
    let (ma, mb) = scheme.marginals(a, b)?;
    let x = d_inf(a, &ma)?.value;
    let y = d_inf(b, &mb)?.value;
    let lhs = pvm_lhs(x, y)?;
    let rhs = max_commutator_norm(a, b)?;
    Ok(TradeoffReport::new(InequalityId::CorPvmInf, x, y, 0.0, 0.0, lhs, rhs))
}

/// Total-variation tradeoff for two projective observables.
pub fn check_corollary_pvm_l1(a: &Povm, b: &Povm, scheme: JointScheme<'_>) -> Result<TradeoffReport> {
    require_pvms(a, b)?;
    let (ma, mb) = scheme.marginals(a, b)?;
    let x = d_l1(a, &ma)?.value;
    let y = d_l1(b, &mb)?.value;
    let lhs = pvm_lhs(x, y)?;
    let rhs = max_subset_commutator_norm(a, b)?;
    Ok(TradeoffReport::new(InequalityId::CorPvmL1, x, y, 0.0, 0.0, lhs, rhs))
}

/// Necessary condition for joint measurability:
/// `sqrt(V(A)·V(B)) ≥ (1/2) max ‖[A_a, B_b]‖`.
///
/// A violated report proves `a` and `b` are not jointly measurable; a
/// satisfied report is inconclusive.
pub fn check_corollary_joint(a: &Povm, b: &Povm) -> Result<TradeoffReport> {
    let v_a = intrinsic_uncertainty_inf(a)?;
    let v_b = intrinsic_uncertainty_inf(b)?;
    let lhs = (v_a * v_b).sqrt();
    let rhs = 0.5 * max_commutator_norm(a, b)?;
    let mut report = TradeoffReport::new(InequalityId::CorJoint, 0.0, 0.0, v_a, v_b, lhs, rhs);
    report.note = Some(if report.satisfied {
        "necessary condition only: satisfied, joint measurability not decided".to_string()
    } else {
        format!(
            "necessary condition only: violated (slack={:.6e}), observables are not jointly measurable",
            report.slack
        )
    });
    Ok(report)
}

/// Tradeoff when the joint observable is itself projective:
/// `2XY + X + Y ≥ max ‖[A_a, B_b]‖`.
pub fn check_corollary_pvm_instrument(a: &Povm, b: &Povm, scheme: JointScheme<'_>) -> Result<TradeoffReport> {
    if !is_pvm(scheme.joint, PVM_TOL) {
        return invalid("the joint observable must be projective for this inequality");
    }
    let (ma, mb) = scheme.marginals(a, b)?;
    let x = d_inf(a, &ma)?.value;
    let y = d_inf(b, &mb)?.value;
    let v_a = intrinsic_uncertainty_inf(a)?;
    let v_b = intrinsic_uncertainty_inf(b)?;
    let lhs = pvm_instrument_lhs(x, y)?;
    let rhs = max_commutator_norm(a, b)?;
    Ok(TradeoffReport::new(InequalityId::CorPvmInstrument, x, y, v_a, v_b, lhs, rhs))
}

fn check_angle(theta: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return invalid(format!("angle must lie in [0, π/2], got {theta}"));
    }
    Ok(())
}

/// Commutator bound `sin(θ)/2` for two sharp qubit observables at angle θ.
pub fn qubit_rhs(theta: f64) -> Result<f64> {
    check_angle(theta)?;
    Ok(0.5 * theta.sin())
}

/// Linear bound on `X + Y` for sharp qubit observables at angle θ:
/// `sqrt(1/2)·(cos(θ/2) + sin(θ/2) − 1)`.
pub fn heinosaari_lower_bound(theta: f64) -> f64 {
    FRAC_1_SQRT_2 * ((0.5 * theta).cos() + (0.5 * theta).sin() - 1.0)
}

/// Qubit specialization of the projective tradeoff for accuracies `x`, `y`.
pub fn check_qubit(theta: f64, x: f64, y: f64) -> Result<TradeoffReport> {
    let lhs = pvm_lhs(x, y)?;
    Ok(TradeoffReport::new(InequalityId::Qubit, x, y, 0.0, 0.0, lhs, qubit_rhs(theta)?))
}

pub fn check_heinosaari(theta: f64, x: f64, y: f64) -> Result<TradeoffReport> {
    check_nonnegative(&[("X", x), ("Y", y)])?;
    check_angle(theta)?;
    Ok(TradeoffReport::new(
        InequalityId::Heinosaari,
        x,
        y,
        0.0,
        0.0,
        x + y,
        heinosaari_lower_bound(theta),
    ))
}

/// Smallest `Y ≥ 0` with `2XY + X + Y + 4·sqrt(XY) ≥ target`, by bisection
/// (the left side is increasing in `Y`).
pub fn pvm_contour(x: f64, target: f64) -> Result<f64> {
    check_nonnegative(&[("X", x), ("target", target)])?;
    if x >= target {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, target);
    while hi - lo > CONTOUR_TOL {
        let mid = 0.5 * (lo + hi);
        if pvm_lhs(x, mid)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Boundary curves of the regions of accuracy pairs `(X, Y)` not excluded by
/// the qubit tradeoff and by the linear bound, on a shared `X` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleRegion {
    pub theta: f64,
    pub x: Vec<f64>,
    pub y_pvm: Vec<f64>,
    pub y_linear: Vec<f64>,
}

impl AdmissibleRegion {
    pub fn pvm_curve(&self) -> Vec<(f64, f64)> {
        self.x.iter().copied().zip(self.y_pvm.iter().copied()).collect()
    }

    pub fn linear_curve(&self) -> Vec<(f64, f64)> {
        self.x.iter().copied().zip(self.y_linear.iter().copied()).collect()
    }
}

/// Evaluates both boundary curves on `grid_size` evenly spaced points of
/// `[0, REGION_X_MAX]`.
pub fn admissible_region_curves(theta: f64, grid_size: usize) -> Result<AdmissibleRegion> {
    if grid_size < 2 {
        return invalid("grid needs at least two points");
    }
    let target = qubit_rhs(theta)?;
    let linear = heinosaari_lower_bound(theta);
    let x: Vec<f64> = (0..grid_size)
        .map(|k| REGION_X_MAX * k as f64 / (grid_size - 1) as f64)
        .collect();
    let y_pvm = x.iter().map(|&xi| pvm_contour(xi, target)).collect::<Result<Vec<_>>>()?;
    let y_linear = x.iter().map(|&xi| (linear - xi).max(0.0)).collect();
    Ok(AdmissibleRegion {
        theta,
        x,
        y_pvm,
        y_linear,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::povm::{bloch_xz, noisy_qubit_povm, qubit_pvm, random_povm};
    use crate::smearing::{commuting_product, coordinate_maps};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    fn orthogonal_noisy_pair(eta: f64) -> (Povm, Povm) {
        (
            noisy_qubit_povm([1.0, 0.0, 0.0], eta).unwrap(),
            noisy_qubit_povm([0.0, 0.0, 1.0], eta).unwrap(),
        )
    }

    #[test]
    fn qubit_commutator_norm_matches_sine() {
        for theta in [0.0, FRAC_PI_6, FRAC_PI_4, 1.0, FRAC_PI_2] {
            let a = qubit_pvm(bloch_xz(0.0)).unwrap();
            let b = qubit_pvm(bloch_xz(theta)).unwrap();
            let got = max_commutator_norm(&a, &b).unwrap();
            assert!((got - 0.5 * theta.sin()).abs() < 1e-10, "θ={theta}");
            let subsets = max_subset_commutator_norm(&a, &b).unwrap();
            assert!((subsets - got).abs() < 1e-12);
        }
    }

    #[test]
    fn commuting_pair_has_zero_commutators() {
        let a = Povm::from_elements(vec![
            CMatrix::from_real_diagonal(&[0.2, 1.0, 0.5]),
            CMatrix::from_real_diagonal(&[0.8, 0.0, 0.5]),
        ])
        .unwrap();
        let b = qubit_pvm([0.0, 0.0, 1.0]).unwrap();
        let b3 = Povm::from_elements(vec![
            CMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]),
            CMatrix::from_real_diagonal(&[0.0, 1.0, 1.0]),
        ])
        .unwrap();
        assert_eq!(max_commutator_norm(&a, &b3).unwrap(), 0.0);
        assert_eq!(max_subset_commutator_norm(&a, &b3).unwrap(), 0.0);
        assert!(max_commutator_norm(&a, &b).is_err());
    }

    #[test]
    fn subset_norm_dominates_singletons() {
        for seed in 0..10 {
            let a = random_povm(3, 3, seed).unwrap();
            let b = random_povm(3, 4, seed + 100).unwrap();
            let single = max_commutator_norm(&a, &b).unwrap();
            // exhaustive double loop
            let mut oracle = 0.0f64;
            for x in a.elements() {
                for y in b.elements() {
                    let c = crate::linalg::commutator(x, y).unwrap();
                    oracle = oracle.max(crate::linalg::op_norm(&c).unwrap());
                }
            }
            assert!((single - oracle).abs() < 1e-12);
            assert!(max_subset_commutator_norm(&a, &b).unwrap() >= single - 1e-14);
        }
    }

    #[test]
    fn theorem1_lhs_values() {
        assert_eq!(theorem1_lhs(0.0, 0.0, 0.0, 0.0).unwrap(), 0.0);
        assert!((theorem1_lhs(0.0, 0.0, 1.0 / 16.0, 1.0 / 16.0).unwrap() - 0.125).abs() < 1e-15);
        let x = (10f64.sqrt() - 3.0) / 2.0;
        assert!((theorem1_lhs(x, x, 0.0, 0.0).unwrap() - 0.5).abs() < 1e-12);
        assert!(theorem1_lhs(-0.1, 0.0, 0.0, 0.0).is_err());
        assert!(theorem1_lhs(0.0, 0.0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn theorem1_on_commuting_product() {
        let a = Povm::from_elements(vec![
            CMatrix::from_real_diagonal(&[0.3, 0.6]),
            CMatrix::from_real_diagonal(&[0.7, 0.4]),
        ])
        .unwrap();
        let b = qubit_pvm([0.0, 0.0, 1.0]).unwrap();
        let joint = commuting_product(&a, &b).unwrap();
        let (fa, fb) = coordinate_maps(a.outcomes(), b.outcomes()).unwrap();
        let r = check_theorem1(&a, &b, JointScheme::new(&joint, &fa, &fb)).unwrap();
        assert!(r.x < 1e-15 && r.y < 1e-15 && r.rhs == 0.0 && r.satisfied);
    }

    #[test]
    fn theorem1_with_uninformative_joint() {
        let a = qubit_pvm([0.0, 0.0, 1.0]).unwrap();
        let b = qubit_pvm([1.0, 0.0, 0.0]).unwrap();
        let (fa, fb) = coordinate_maps(a.outcomes(), b.outcomes()).unwrap();
        let joint = Povm::new(fa.source().to_vec(), vec![CMatrix::identity(2).scale(0.25); 4]).unwrap();
        let r = check_theorem1(&a, &b, JointScheme::new(&joint, &fa, &fb)).unwrap();
        assert!((r.x - 0.5).abs() < 1e-15 && (r.y - 0.5).abs() < 1e-15);
        assert!((r.lhs - 3.5).abs() < 1e-14);
        assert!((r.rhs - 0.5).abs() < 1e-14);
        assert!(r.satisfied);
        assert_eq!(r.slack, r.lhs - r.rhs);

        let t2 = check_theorem2(&a, &b, JointScheme::new(&joint, &fa, &fb)).unwrap();
        assert!((t2.x - r.x).abs() < 1e-14 && (t2.y - r.y).abs() < 1e-14);
        assert!((t2.lhs - r.lhs).abs() < 1e-12 && (t2.rhs - r.rhs).abs() < 1e-12);

        let c1 = check_corollary_pvm_inf(&a, &b, JointScheme::new(&joint, &fa, &fb)).unwrap();
        assert!((c1.lhs - r.lhs).abs() < 1e-12);
    }

    #[test]
    fn joint_condition_threshold() {
        let (a, b) = orthogonal_noisy_pair(0.70);
        let r = check_corollary_joint(&a, &b).unwrap();
        assert!((r.lhs - 0.1275).abs() < 1e-12);
        assert!((r.rhs - 0.1225).abs() < 1e-12);
        assert!(r.satisfied);

        let (a, b) = orthogonal_noisy_pair(0.72);
        let r = check_corollary_joint(&a, &b).unwrap();
        assert!((r.lhs - 0.1204).abs() < 1e-12);
        assert!((r.rhs - 0.1296).abs() < 1e-12);
        assert!(!r.satisfied);
        assert!(r.note.as_deref().unwrap().contains("not jointly measurable"));

        let r = check_corollary_joint(&qubit_pvm([1.0, 0.0, 0.0]).unwrap(), &qubit_pvm([0.0, 0.0, 1.0]).unwrap())
            .unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(!r.satisfied);
    }

    #[test]
    fn projective_joint_instrument() {
        let a = qubit_pvm([0.0, 0.0, 1.0]).unwrap();
        let b = qubit_pvm([1.0, 0.0, 0.0]).unwrap();
        let (fa, fb) = coordinate_maps(a.outcomes(), b.outcomes()).unwrap();
        let z = a.element(0).clone();
        let zbar = a.element(1).clone();
        let joint = Povm::new(
            fa.source().to_vec(),
            vec![z, CMatrix::zeros(2), CMatrix::zeros(2), zbar],
        )
        .unwrap();
        let r = check_corollary_pvm_instrument(&a, &b, JointScheme::new(&joint, &fa, &fb)).unwrap();
        assert!(r.x < 1e-15);
        assert!((r.y - FRAC_1_SQRT_2).abs() < 1e-14);
        assert!((r.lhs - FRAC_1_SQRT_2).abs() < 1e-14);
        assert!(r.satisfied);

        let noisy = Povm::new(fa.source().to_vec(), vec![CMatrix::identity(2).scale(0.25); 4]).unwrap();
        assert!(check_corollary_pvm_instrument(&a, &b, JointScheme::new(&noisy, &fa, &fb)).is_err());
    }

    #[test]
    fn pvm_corollaries_require_projective_inputs() {
        let (a, b) = orthogonal_noisy_pair(0.5);
        let (fa, fb) = coordinate_maps(a.outcomes(), b.outcomes()).unwrap();
        let joint = Povm::new(fa.source().to_vec(), vec![CMatrix::identity(2).scale(0.25); 4]).unwrap();
        assert!(check_corollary_pvm_inf(&a, &b, JointScheme::new(&joint, &fa, &fb)).is_err());
        assert!(check_corollary_pvm_l1(&a, &b, JointScheme::new(&joint, &fa, &fb)).is_err());
    }

    #[test]
    fn scheme_compatibility_is_checked() {
        let a = qubit_pvm([0.0, 0.0, 1.0]).unwrap();
        let b = qubit_pvm([1.0, 0.0, 0.0]).unwrap();
        let (fa, fb) = coordinate_maps(a.outcomes(), b.outcomes()).unwrap();
        let joint = Povm::new(fa.source().to_vec(), vec![CMatrix::identity(2).scale(0.25); 4]).unwrap();
        assert!(check_theorem1(&a, &b, JointScheme::new(&joint, &fb, &fa)).is_ok());
        let c = random_povm(2, 3, 1).unwrap();
        assert!(check_theorem1(&c, &b, JointScheme::new(&joint, &fa, &fb)).is_err());
    }

    #[test]
    fn qubit_rhs_values() {
        assert_eq!(qubit_rhs(0.0).unwrap(), 0.0);
        assert_eq!(qubit_rhs(FRAC_PI_2).unwrap(), 0.5);
        assert!((qubit_rhs(FRAC_PI_4).unwrap() - 2f64.sqrt() / 4.0).abs() < 1e-15);
        assert!(qubit_rhs(-0.1).is_err());
        assert!(qubit_rhs(2.0).is_err());
    }

    #[test]
    fn linear_bound_values() {
        assert_eq!(heinosaari_lower_bound(0.0), 0.0);
        assert!((heinosaari_lower_bound(FRAC_PI_2) - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-15);
        let grid: Vec<f64> = (0..=100).map(|k| FRAC_PI_2 * k as f64 / 100.0).collect();
        assert!(grid.windows(2).all(|w| heinosaari_lower_bound(w[1]) > heinosaari_lower_bound(w[0])));
    }

    #[test]
    fn region_curves_at_right_angle() {
        let region = admissible_region_curves(FRAC_PI_2, 101).unwrap();
        assert_eq!(region.x.len(), 101);
        assert!((region.y_pvm[0] - 0.5).abs() < 1e-9);
        assert!(region.y_pvm.windows(2).all(|w| w[1] <= w[0]));
        let sym = (10f64.sqrt() - 3.0) / 2.0;
        assert!((pvm_contour(sym, 0.5).unwrap() - sym).abs() < 1e-9);
        for (x, y) in region.linear_curve() {
            if y > 0.0 {
                assert!((x + y - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-12);
            }
        }
        assert!(admissible_region_curves(FRAC_PI_2, 1).is_err());
    }

    #[test]
    fn theorem1_lhs_monotone() {
        let base = [0.1, 0.2, 0.05, 0.07];
        let f = |v: [f64; 4]| theorem1_lhs(v[0], v[1], v[2], v[3]).unwrap();
        for k in 0..4 {
            let mut bumped = base;
            bumped[k] += 0.01;
            assert!(f(bumped) >= f(base));
        }
    }
}
