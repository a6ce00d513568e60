//! Randomized property suites over generated POVM instances.
//!
//! The tradeoff inequalities hold for every valid input, so a single
//! violation in these suites points at a numerical bug rather than at the
//! inputs.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{
    check_corollary_pvm_instrument, check_theorem1, check_theorem2, JointScheme, SLACK_TOL,
};
use crate::distance::{d_inf, d_l1};
use crate::error::Result;
use crate::linalg::CMatrix;
use crate::povm::{
    intrinsic_uncertainty_inf, intrinsic_uncertainty_l1, is_pvm, random_povm, random_pvm, validate_povm, Povm,
    Tolerance,
};
use crate::smearing::{error_operators, marginalize, OutcomeMap};

/// A random approximate joint measurement of a random pair.
#[derive(Clone, Debug)]
pub struct Instance {
    pub a: Povm,
    pub b: Povm,
    pub joint: Povm,
    pub map_a: OutcomeMap,
    pub map_b: OutcomeMap,
}

impl Instance {
    pub fn scheme(&self) -> JointScheme<'_> {
        JointScheme::new(&self.joint, &self.map_a, &self.map_b)
    }
}

/// Ranges for [`random_instance`]; all bounds inclusive.
#[derive(Clone, Copy, Debug)]
pub struct InstanceShape {
    pub dims: (usize, usize),
    pub outcomes: (usize, usize),
    pub joint_outcomes: (usize, usize),
    pub projective_joint: bool,
}

impl InstanceShape {
    pub const THEOREM1: Self = Self {
        dims: (2, 4),
        outcomes: (2, 4),
        joint_outcomes: (1, 8),
        projective_joint: false,
    };
    pub const THEOREM2: Self = Self {
        dims: (2, 3),
        outcomes: (2, 3),
        joint_outcomes: (1, 6),
        projective_joint: false,
    };
    pub const PVM_JOINT: Self = Self {
        dims: (2, 4),
        outcomes: (2, 4),
        joint_outcomes: (1, 8),
        projective_joint: true,
    };
}

pub fn random_instance<R: Rng>(rng: &mut R, shape: InstanceShape) -> Result<Instance> {
    let dim = rng.random_range(shape.dims.0..=shape.dims.1);
    let na = rng.random_range(shape.outcomes.0..=shape.outcomes.1);
    let nb = rng.random_range(shape.outcomes.0..=shape.outcomes.1);
    let nf = rng.random_range(shape.joint_outcomes.0..=shape.joint_outcomes.1);
    let a = random_povm(dim, na, rng.random())?;
    let b = random_povm(dim, nb, rng.random())?;
    let joint = if shape.projective_joint {
        random_pvm(dim, nf, rng.random())?
    } else {
        random_povm(dim, nf, rng.random())?
    };
    let map_a = OutcomeMap::random(joint.outcomes(), a.outcomes(), rng);
    let map_b = OutcomeMap::random(joint.outcomes(), b.outcomes(), rng);
    Ok(Instance {
        a,
        b,
        joint,
        map_a,
        map_b,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub trials: usize,
    pub violations: usize,
    /// Smallest observed margin (inequality slack or invariant headroom).
    pub worst_margin: f64,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            trials: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
        }
    }

    fn record(&mut self, margin: f64, ok: bool) {
        self.trials += 1;
        self.worst_margin = self.worst_margin.min(margin);
        if !ok {
            self.violations += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<22} {} trials={} violations={} worst_margin={:.3e}",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.trials,
            self.violations,
            self.worst_margin
        )
    }
}

fn inequality_suite(
    name: &'static str,
    trials: usize,
    seed: u64,
    shape: InstanceShape,
    check: impl Fn(&Instance) -> Result<f64>,
) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteResult::new(name);
    for _ in 0..trials {
        let inst = random_instance(&mut rng, shape)?;
        let slack = check(&inst)?;
        out.record(slack, slack >= -SLACK_TOL);
    }
    Ok(out)
}

pub fn theorem1_suite(trials: usize, seed: u64) -> Result<SuiteResult> {
    inequality_suite("theorem1", trials, seed, InstanceShape::THEOREM1, |i| {
        Ok(check_theorem1(&i.a, &i.b, i.scheme())?.slack)
    })
}

pub fn theorem2_suite(trials: usize, seed: u64) -> Result<SuiteResult> {
    inequality_suite("theorem2", trials, seed, InstanceShape::THEOREM2, |i| {
        Ok(check_theorem2(&i.a, &i.b, i.scheme())?.slack)
    })
}

pub fn pvm_instrument_suite(trials: usize, seed: u64) -> Result<SuiteResult> {
    inequality_suite("cor_pvm_instrument", trials, seed, InstanceShape::PVM_JOINT, |i| {
        Ok(check_corollary_pvm_instrument(&i.a, &i.b, i.scheme())?.slack)
    })
}

/// Metric axioms for both observable distances on random triples.
pub fn metric_suite(trials: usize, seed: u64) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteResult::new("metric_axioms");
    for _ in 0..trials {
        let dim = rng.random_range(2..=4);
        let n = rng.random_range(2..=4);
        let p = random_povm(dim, n, rng.random())?;
        let q = random_povm(dim, n, rng.random())?;
        let r = random_povm(dim, n, rng.random())?;
        let mut margin = f64::INFINITY;
        let mut ok = true;
        for dist in [d_inf, d_l1] {
            let pq = dist(&p, &q)?.value;
            let qp = dist(&q, &p)?.value;
            let qr = dist(&q, &r)?.value;
            let pr = dist(&p, &r)?.value;
            let pp = dist(&p, &p)?.value;
            let tri = pq + qr - pr;
            margin = margin.min(tri);
            ok &= pq == qp && pp == 0.0 && tri >= -1e-9;
        }
        ok &= d_l1(&p, &q)?.value >= d_inf(&p, &q)?.value - 1e-12;
        out.record(margin, ok);
    }
    Ok(out)
}

/// Structural invariants: `V, V₁ ∈ [0, 1/4]`, `V = 0 ⇔ PVM`, functoriality of
/// coarse-graining and `Σ_a ε_a = 0`.
pub fn invariant_suite(trials: usize, seed: u64) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteResult::new("invariants");
    for t in 0..trials {
        let dim = rng.random_range(2..=4);
        let na = rng.random_range(2..=4);
        let nf = rng.random_range(1..=8);
        // Alternate generic and projective inputs so both sides of V = 0 ⇔ PVM are hit.
        let a = if t % 2 == 0 {
            random_povm(dim, na, rng.random())?
        } else {
            random_pvm(dim, na, rng.random())?
        };
        let f = random_povm(dim, nf, rng.random())?;
        let mid: Vec<String> = (0..rng.random_range(1..=5)).map(|k| format!("m{k}")).collect();
        let g1 = OutcomeMap::random(f.outcomes(), &mid, &mut rng);
        let g2 = OutcomeMap::random(&mid, a.outcomes(), &mut rng);

        let v = intrinsic_uncertainty_inf(&a)?;
        let v1 = intrinsic_uncertainty_l1(&a)?;
        let mut ok = (0.0..=0.25 + 1e-12).contains(&v) && (0.0..=0.25 + 1e-12).contains(&v1) && v1 >= v - 1e-12;
        ok &= (v <= 1e-9) == is_pvm(&a, 1e-9);

        let two_step = marginalize(&marginalize(&f, &g1)?, &g2)?;
        let one_step = marginalize(&f, &g1.then(&g2)?)?;
        let func_gap = two_step
            .elements()
            .iter()
            .zip(one_step.elements())
            .map(|(x, y)| x.max_abs_diff(y))
            .fold(0.0, f64::max);
        ok &= func_gap <= 1e-12;
        ok &= validate_povm(&one_step, Tolerance::default()).is_valid();

        let eps = error_operators(&a, &f, &g1.then(&g2)?)?;
        let total = crate::linalg::sum(eps.operators.iter()).unwrap_or_else(|| CMatrix::zeros(dim));
        let eps_sum = total.max_abs();
        ok &= eps_sum <= 1e-10;
        let closed = d_inf(&a, &one_step)?.value;
        ok &= (eps.max_norm() - closed).abs() <= 1e-12;

        out.record(0.25 - v.max(v1), ok);
    }
    Ok(out)
}

/// Runs every suite with `trials` instances each.
pub fn run_all(trials: usize, seed: u64) -> Result<Vec<SuiteResult>> {
    Ok(vec![
        theorem1_suite(trials, seed)?,
        theorem2_suite(trials.div_ceil(2), seed.wrapping_add(1))?,
        pvm_instrument_suite(trials.div_ceil(2), seed.wrapping_add(2))?,
        metric_suite(trials, seed.wrapping_add(3))?,
        invariant_suite(trials, seed.wrapping_add(4))?,
    ])
}
