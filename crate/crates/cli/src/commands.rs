use std::path::Path;

use povm_tradeoff::bounds::{
    admissible_region_curves, check_corollary_joint, check_corollary_pvm_inf, check_corollary_pvm_instrument,
    check_corollary_pvm_l1, check_theorem1, check_theorem2, max_commutator_norm, qubit_rhs, JointScheme,
};
use povm_tradeoff::distance::{d_inf, d_l1};
use povm_tradeoff::feasibility::{
    check_joint_measurability, frontier_sweep, product_structure, target_grid, FrontierOptions, SolverOptions,
    Status,
};
use povm_tradeoff::povm::{bloch_xz, intrinsic_uncertainty_inf, is_pvm, qubit_pvm, Tolerance, PSD_TOL};
use povm_tradeoff::selftest;
use povm_tradeoff::smearing::product_labels;
use povm_tradeoff::{OutcomeMap, Povm};

use crate::format::{csv, emit, load_outcome_map, load_povm, save_povm, save_state};
use crate::{Cli, CliError, Command, Inequality, LoadOptions, Metric};

struct Loader<'a> {
    opts: &'a LoadOptions,
}

impl Loader<'_> {
    fn tolerance(&self) -> Tolerance {
        Tolerance {
            psd: self.opts.psd_tol,
            completeness: self.opts.completeness_tol,
        }
    }

    fn povm(&self, path: &Path) -> Result<Povm, CliError> {
        Ok(load_povm(path, self.tolerance(), !self.opts.lenient)?.povm)
    }

    fn pair(&self, a: &Path, b: &Path) -> Result<(Povm, Povm), CliError> {
        let a = self.povm(a)?;
        let b = self.povm(b)?;
        if a.dim() != b.dim() {
            return Err(CliError::Invalid(format!(
                "observables act on different spaces (dim {} vs {})",
                a.dim(),
                b.dim()
            )));
        }
        Ok((a, b))
    }
}

pub(crate) fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    let loader = Loader { opts: &cli.load };
    match &cli.command {
        Command::Validate { povm } => validate(&loader, povm),
        Command::Distance {
            metric,
            a,
            b,
            witness_out,
        } => distance(&loader, *metric, a, b, witness_out),
        Command::Bounds {
            inequality,
            a,
            b,
            joint,
            map_a,
            map_b,
        } => bounds(&loader, *inequality, a, b, joint.as_deref(), map_a.as_deref(), map_b.as_deref()),
        Command::CheckJoint {
            a,
            b,
            max_iter,
            tol,
            stagnation_window,
            no_screen,
            witness_out,
        } => {
            let opts = SolverOptions {
                max_iter: *max_iter,
                tol: *tol,
                stagnation_window: *stagnation_window,
                screen: !no_screen,
                ..SolverOptions::default()
            };
            check_joint(&loader, a, b, &opts, witness_out)
        }
        Command::Frontier {
            a,
            b,
            grid,
            x_max,
            out,
            bisect_tol,
            accept_tol,
            max_iter,
            threads,
        } => {
            let mut opts = FrontierOptions {
                bisect_tol: *bisect_tol,
                accept_tol: *accept_tol,
                ..FrontierOptions::default()
            };
            opts.solver.max_iter = *max_iter;
            frontier(&loader, a, b, *grid, *x_max, &opts, *threads, out.as_deref())
        }
        Command::QubitDemo { theta, grid, out } => qubit_demo(*theta, *grid, out.as_deref()),
        Command::Selftest { trials, seed } => run_selftest(*trials, *seed),
    }
}

fn validate(loader: &Loader<'_>, path: &Path) -> Result<i32, CliError> {
    let loaded = load_povm(path, loader.tolerance(), false)?;
    let p = &loaded.povm;
    println!("file: {}", path.display());
    println!("dim: {}", p.dim());
    println!("outcomes: {}", p.outcomes().join(", "));
    if loaded.report.is_valid() {
        println!("projective: {}", is_pvm(p, PSD_TOL));
        println!("intrinsic_uncertainty: {:.12}", intrinsic_uncertainty_inf(p)?);
        println!("status: valid");
        Ok(0)
    } else {
        println!("status: invalid");
        for v in &loaded.report.violations {
            println!("violation: {v}");
        }
        Ok(1)
    }
}

fn distance(loader: &Loader<'_>, metric: Metric, a: &Path, b: &Path, witness_out: &Path) -> Result<i32, CliError> {
    let (a, b) = loader.pair(a, b)?;
    let d = match metric {
        Metric::Inf => d_inf(&a, &b)?,
        Metric::L1 => d_l1(&a, &b)?,
    };
    println!("metric: {}", if metric == Metric::Inf { "inf" } else { "l1" });
    println!("value: {:.12}", d.value);
    println!("attained_at: {}", d.witness);
    if let Some(state) = &d.witness_state {
        save_state(witness_out, state)?;
        println!("witness_state: {}", witness_out.display());
    }
    Ok(0)
}

fn scheme_maps(
    joint: &Povm,
    a: &Povm,
    b: &Povm,
    map_a: Option<&Path>,
    map_b: Option<&Path>,
) -> Result<(OutcomeMap, OutcomeMap), CliError> {
    match (map_a, map_b) {
        (Some(fa), Some(fb)) => Ok((
            load_outcome_map(fa, joint.outcomes(), a.outcomes())?,
            load_outcome_map(fb, joint.outcomes(), b.outcomes())?,
        )),
        (None, None) if joint.outcomes() == product_labels(a.outcomes(), b.outcomes())?.as_slice() => {
            Ok(product_structure(a, b)?)
        }
        (None, None) => Err(CliError::Usage(
            "--map-a and --map-b are required unless the joint outcomes are the product labels `a|b`".into(),
        )),
        _ => Err(CliError::Usage("--map-a and --map-b must be given together".into())),
    }
}

fn bounds(
    loader: &Loader<'_>,
    which: Inequality,
    a: &Path,
    b: &Path,
    joint: Option<&Path>,
    map_a: Option<&Path>,
    map_b: Option<&Path>,
) -> Result<i32, CliError> {
    let (a, b) = loader.pair(a, b)?;
    let report = if which == Inequality::CorJoint {
        check_corollary_joint(&a, &b)?
    } else {
        let joint_path = joint.ok_or_else(|| CliError::Usage("this inequality needs --joint".into()))?;
        let f = loader.povm(joint_path)?;
        if f.dim() != a.dim() {
            return Err(CliError::Invalid(format!(
                "joint observable has dim {}, expected {}",
                f.dim(),
                a.dim()
            )));
        }
        let (fa, fb) = scheme_maps(&f, &a, &b, map_a, map_b)?;
        let scheme = JointScheme::new(&f, &fa, &fb);
        match which {
            Inequality::Theorem1 => check_theorem1(&a, &b, scheme)?,
            Inequality::Theorem2 => check_theorem2(&a, &b, scheme)?,
            Inequality::CorPvmInstrument => check_corollary_pvm_instrument(&a, &b, scheme)?,
            Inequality::CorPvmInf => check_corollary_pvm_inf(&a, &b, scheme)?,
            Inequality::CorPvmL1 => check_corollary_pvm_l1(&a, &b, scheme)?,
            Inequality::CorJoint => unreachable!(),
        }
    };
    println!("{report}");
    Ok(0)
}

fn check_joint(
    loader: &Loader<'_>,
    a: &Path,
    b: &Path,
    opts: &SolverOptions,
    witness_out: &Path,
) -> Result<i32, CliError> {
    let (a, b) = loader.pair(a, b)?;
    let r = check_joint_measurability(&a, &b, opts)?;
    println!("status: {}", r.status);
    println!("residual: {:.3e}", r.residual);
    println!("iterations: {}", r.iterations);
    println!("note: {}", r.certificate_note);
    if let (Status::Feasible, Some(w)) = (r.status, &r.witness) {
        save_povm(witness_out, w)?;
        println!("witness: {}", witness_out.display());
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn frontier(
    loader: &Loader<'_>,
    a: &Path,
    b: &Path,
    grid: usize,
    x_max: f64,
    opts: &FrontierOptions,
    threads: usize,
    out: Option<&Path>,
) -> Result<i32, CliError> {
    if grid == 0 {
        return Err(CliError::Usage("--grid must be positive".into()));
    }
    let (a, b) = loader.pair(a, b)?;
    let points = frontier_sweep(&a, &b, &target_grid(x_max, grid), opts, threads)?;
    let text = csv(
        &["X_target", "X_achieved", "Y_achieved"],
        points.iter().map(|p| vec![p.x_target, p.x_achieved, p.y_achieved]),
    );
    emit(out, &text)?;
    Ok(0)
}

fn qubit_demo(theta: f64, grid: usize, out: Option<&Path>) -> Result<i32, CliError> {
    let rhs = qubit_rhs(theta)?;
    let a = qubit_pvm([0.0, 0.0, 1.0])?;
    let b = qubit_pvm(bloch_xz(theta))?;
    let measured = max_commutator_norm(&a, &b)?;
    if (measured - rhs).abs() > 1e-10 {
        return Err(povm_tradeoff::Error::Numerical(format!(
            "commutator norm {measured} disagrees with sin(theta)/2 = {rhs}"
        ))
        .into());
    }
    let region = admissible_region_curves(theta, grid)?;
    let rows = (0..region.x.len()).map(|k| vec![region.x[k], region.y_pvm[k], region.y_linear[k]]);
    emit(out, &csv(&["X", "Y_cor1", "Y_heinosaari"], rows))?;
    Ok(0)
}

fn run_selftest(trials: usize, seed: u64) -> Result<i32, CliError> {
    let suites = selftest::run_all(trials, seed)?;
    for s in &suites {
        println!("{s}");
    }
    Ok(if suites.iter().all(|s| s.passed()) { 0 } else { 1 })
}
