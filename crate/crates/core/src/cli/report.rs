use serde::Serialize;
use serde_json::Value;

use super::{CommandKind, RunConfig};
use crate::dilation::{
    dilate, failure_probability, post_select, sample_post_selection, success_probability, Ancilla,
    BlockResiduals, Branch, DilationResult,
};
use crate::discrim::{helstrom_error_ncopy, simulate_discrimination};
use crate::error::{Error, Result};
use crate::linalg::{collinearity, eig_general, CMat, C64};
use crate::machines::{
    cloning_operator, deleting_operator, state_pair, MachineKind, MachineOp, TAU,
};
use crate::par::{derive_seed, map_indexed, Exec};
use crate::pseudo::{
    build_system, closed_form_eigenstates, pseudo_unitarity_residual, CLOSED_FORM_EIGENVALUES,
};

/// A finished report. Tabular commands carry their table under `"rows"`.
#[derive(Clone, Debug, PartialEq)]
pub struct Report(pub Value);

impl Report {
    fn from_serialize<T: Serialize>(body: &T) -> Result<Self> {
        serde_json::to_value(body)
            .map(Report)
            .map_err(|e| Error::InvalidArgument(format!("report serialization: {e}")))
    }

    pub fn value(&self) -> &Value {
        &self.0
    }

    pub fn rows(&self) -> Option<&Vec<Value>> {
        self.0.get("rows").and_then(Value::as_array)
    }
}

#[derive(Serialize, Clone, Copy)]
struct Complex {
    re: f64,
    im: f64,
}

impl From<C64> for Complex {
    fn from(z: C64) -> Self {
        Complex { re: z.re, im: z.im }
    }
}

fn complex_matrix(m: &[Vec<C64>]) -> Vec<Vec<Complex>> {
    m.iter()
        .map(|r| r.iter().map(|&z| z.into()).collect())
        .collect()
}

/// Validates `cfg` and builds the report for its command.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    match cfg.command {
        CommandKind::Spectrum => cmd_spectrum(cfg),
        CommandKind::Delete => cmd_delete(cfg),
        CommandKind::Clone => cmd_clone(cfg),
        CommandKind::Discriminate => cmd_discriminate(cfg),
        CommandKind::Dilate => cmd_dilate(cfg),
        CommandKind::Sweep => cmd_sweep(cfg),
    }
}

#[derive(Serialize)]
struct SpectrumReport {
    command: CommandKind,
    theta: f64,
    eigenvalues: Vec<f64>,
    eigenvalues_max_imag: f64,
    eigen_residual: f64,
    closed_form_eigenvalues: [f64; 4],
    hermiticity_residual: f64,
    pseudo_hermiticity_residual: f64,
    eta_eigenvalues: Vec<f64>,
    eta_positive_definite: bool,
    closed_form_eta_norms: Vec<f64>,
    eta_gram: Vec<Vec<Complex>>,
    eta_gram_deviation: f64,
    tau: f64,
    pseudo_unitarity_residual: f64,
    unitarity_residual: f64,
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Report> {
    let sys = build_system(cfg.theta)?;
    let eigenvalues = sys.eigenvalues();
    let eigen_residual = sys
        .eigs
        .iter()
        .map(|p| {
            sys.h
                .apply(&p.vector)
                .map(|hv| hv.max_abs_diff(&p.vector.scale(p.value)))
        })
        .try_fold(0.0_f64, |m, r| r.map(|r| m.max(r)))?;

    let eta_eigenvalues: Vec<f64> = eig_general(&sys.eta)?.iter().map(|p| p.value.re).collect();
    let closed = closed_form_eigenstates(&sys);
    let closed_form_eta_norms = closed
        .iter()
        .map(|v| sys.eta_inner(v, v).map(|z| z.re))
        .collect::<Result<Vec<_>>>()?;
    let normalized = closed
        .iter()
        .map(|v| sys.eta_normalized(v))
        .collect::<Result<Vec<_>>>()?;
    let gram = sys.eta_gram(&normalized)?;
    let mut deviation = 0.0_f64;
    for (i, row) in gram.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            let delta = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((z - delta).norm());
        }
    }

    let u = sys.evolution(TAU)?;
    Report::from_serialize(&SpectrumReport {
        command: cfg.command,
        theta: cfg.theta,
        eigenvalues: eigenvalues.iter().map(|z| z.re).collect(),
        eigenvalues_max_imag: eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
        eigen_residual,
        closed_form_eigenvalues: CLOSED_FORM_EIGENVALUES,
        hermiticity_residual: (&sys.h - &sys.h.adjoint()).max_abs(),
        pseudo_hermiticity_residual: sys.pseudo_hermiticity_residual(),
        eta_positive_definite: eta_eigenvalues.iter().all(|&l| l > 0.0),
        eta_eigenvalues,
        closed_form_eta_norms,
        eta_gram: complex_matrix(&gram),
        eta_gram_deviation: deviation,
        tau: TAU,
        pseudo_unitarity_residual: pseudo_unitarity_residual(&u, &sys.eta)?,
        unitarity_residual: u.unitarity_residual(),
    })
}

#[derive(Serialize)]
struct MonteCarlo {
    trials: u64,
    seed: u64,
    successes: u64,
    empirical_p: f64,
    std_error: f64,
    z_score: f64,
    within_3sigma: bool,
}

#[derive(Serialize)]
struct InputReport {
    state: &'static str,
    collinearity: f64,
    constant: Complex,
    success_probability: f64,
    failure_probability: f64,
    post_selected_collinearity: f64,
    monte_carlo: Option<MonteCarlo>,
}

#[derive(Serialize)]
struct MachineReport {
    command: CommandKind,
    theta: f64,
    tau: f64,
    lambda_max: f64,
    branch: Branch,
    singular_values: Vec<f64>,
    inputs: Vec<InputReport>,
}

pub fn cmd_delete(cfg: &RunConfig) -> Result<Report> {
    machine_report(cfg, deleting_operator(cfg.theta)?)
}

pub fn cmd_clone(cfg: &RunConfig) -> Result<Report> {
    machine_report(cfg, cloning_operator(cfg.theta)?)
}

fn machine_report(cfg: &RunConfig, machine: MachineOp) -> Result<Report> {
    let pair = state_pair(cfg.theta)?;
    let d = dilate(&machine.op)?;
    let mut inputs = Vec::with_capacity(2);
    for (which, state) in [(0usize, "alpha1"), (1, "alpha2")] {
        let action = machine.act_on_pair(&pair, which)?;
        let p = success_probability(&d, &action.input)?;
        let kept = post_select(&d, &action.input, Ancilla::Keep0)?;
        let monte_carlo = if cfg.trials > 0 {
            let seed = derive_seed(cfg.seed, which as u64);
            let s = sample_post_selection(&d, &action.input, cfg.trials, seed)?;
            Some(binomial_check(p, s.successes, s.trials, seed))
        } else {
            None
        };
        inputs.push(InputReport {
            state,
            collinearity: action.collinearity,
            constant: action.constant.into(),
            success_probability: p,
            failure_probability: failure_probability(&d, &action.input)?,
            post_selected_collinearity: collinearity(&kept.out_state, &action.target)?,
            monte_carlo,
        });
    }
    Report::from_serialize(&MachineReport {
        command: cfg.command,
        theta: cfg.theta,
        tau: machine.tau,
        lambda_max: d.lambda_max,
        branch: d.branch,
        singular_values: d.singulars,
        inputs,
    })
}

fn binomial_check(p: f64, successes: u64, trials: u64, seed: u64) -> MonteCarlo {
    let empirical_p = successes as f64 / trials as f64;
    let std_error = (p * (1.0 - p) / trials as f64).sqrt();
    let dev = (empirical_p - p).abs();
    let z_score = if std_error > 0.0 {
        dev / std_error
    } else {
        0.0
    };
    MonteCarlo {
        trials,
        seed,
        successes,
        empirical_p,
        std_error,
        z_score,
        within_3sigma: if std_error > 0.0 {
            z_score <= 3.0
        } else {
            dev == 0.0
        },
    }
}

#[derive(Serialize)]
struct DiscrimRow {
    n: u32,
    p_err: f64,
    trials: Option<u64>,
    errors: Option<u64>,
    empirical_error: Option<f64>,
    std_error: Option<f64>,
    ci_low: Option<f64>,
    ci_high: Option<f64>,
    within_3sigma: Option<bool>,
}

#[derive(Serialize)]
struct DiscrimReport {
    command: CommandKind,
    theta: f64,
    p1: f64,
    overlap: f64,
    copies: u32,
    seed: u64,
    rows: Vec<DiscrimRow>,
}

pub fn cmd_discriminate(cfg: &RunConfig) -> Result<Report> {
    let mut rows = Vec::with_capacity(cfg.copies as usize);
    for n in 1..=cfg.copies {
        let p_err = helstrom_error_ncopy(cfg.theta, cfg.p1, n)?;
        let mut row = DiscrimRow {
            n,
            p_err,
            trials: None,
            errors: None,
            empirical_error: None,
            std_error: None,
            ci_low: None,
            ci_high: None,
            within_3sigma: None,
        };
        if cfg.trials > 0 {
            let seed = derive_seed(cfg.seed, u64::from(n));
            let s = simulate_discrimination(cfg.theta, cfg.p1, n, cfg.trials, seed)?;
            let e = s.empirical_error;
            let se = (e * (1.0 - e) / s.trials as f64).sqrt();
            let check = binomial_check(p_err, s.errors, s.trials, seed);
            row.trials = Some(s.trials);
            row.errors = Some(s.errors);
            row.empirical_error = Some(e);
            row.std_error = Some(se);
            row.ci_low = Some((e - 3.0 * se).max(0.0));
            row.ci_high = Some((e + 3.0 * se).min(1.0));
            row.within_3sigma = Some(check.within_3sigma);
        }
        rows.push(row);
    }
    Report::from_serialize(&DiscrimReport {
        command: cfg.command,
        theta: cfg.theta,
        p1: cfg.p1,
        overlap: cfg.theta.tanh().abs(),
        copies: cfg.copies,
        seed: cfg.seed,
        rows,
    })
}

#[derive(Serialize)]
struct DilationEntry {
    machine: MachineKind,
    singular_values: Vec<f64>,
    lambda_max: f64,
    lambda_min: f64,
    branch: Branch,
    u_tot_unitarity_residual: f64,
    block_residuals: BlockResiduals,
    block_residual_max: f64,
}

#[derive(Serialize)]
struct DilateReport {
    command: CommandKind,
    theta: f64,
    machines: Vec<DilationEntry>,
}

fn dilation_entry(kind: MachineKind, d: &DilationResult) -> DilationEntry {
    let blocks = d.block_residuals();
    DilationEntry {
        machine: kind,
        singular_values: d.singulars.clone(),
        lambda_max: d.lambda_max,
        lambda_min: d.singulars.last().copied().unwrap_or(0.0),
        branch: d.branch,
        u_tot_unitarity_residual: d.unitarity_residual(),
        block_residual_max: blocks.max(),
        block_residuals: blocks,
    }
}

pub fn cmd_dilate(cfg: &RunConfig) -> Result<Report> {
    let del = deleting_operator(cfg.theta)?;
    let clo = cloning_operator(cfg.theta)?;
    let machines = vec![
        dilation_entry(MachineKind::Delete, &dilate(&del.op)?),
        dilation_entry(MachineKind::Clone, &dilate(&clo.op)?),
    ];
    Report::from_serialize(&DilateReport {
        command: cfg.command,
        theta: cfg.theta,
        machines,
    })
}

#[derive(Serialize)]
struct SweepRow {
    theta: f64,
    overlap: f64,
    p_success_delete_alpha1: f64,
    p_success_delete_alpha2: f64,
    p_success_clone_alpha1: f64,
    p_success_clone_alpha2: f64,
    p_err_single: f64,
    p_err_ncopy: f64,
}

#[derive(Serialize)]
struct SweepReport {
    command: CommandKind,
    p1: f64,
    copies: u32,
    theta_min: f64,
    theta_max: f64,
    steps: usize,
    rows: Vec<SweepRow>,
}

fn machine_success(op: &CMat, kind: MachineKind, theta: f64) -> Result<[f64; 2]> {
    let machine = MachineOp {
        op: op.clone(),
        kind,
        theta,
        tau: TAU,
    };
    let pair = state_pair(theta)?;
    let d = dilate(op)?;
    let mut out = [0.0; 2];
    for (which, slot) in out.iter_mut().enumerate() {
        let action = machine.act_on_pair(&pair, which)?;
        *slot = success_probability(&d, &action.input)?;
    }
    Ok(out)
}

fn sweep_row(theta: f64, p1: f64, copies: u32) -> Result<SweepRow> {
    let del = deleting_operator(theta)?;
    let clo = cloning_operator(theta)?;
    let [d1, d2] = machine_success(&del.op, MachineKind::Delete, theta)?;
    let [c1, c2] = machine_success(&clo.op, MachineKind::Clone, theta)?;
    Ok(SweepRow {
        theta,
        overlap: theta.tanh(),
        p_success_delete_alpha1: d1,
        p_success_delete_alpha2: d2,
        p_success_clone_alpha1: c1,
        p_success_clone_alpha2: c2,
        p_err_single: helstrom_error_ncopy(theta, p1, 1)?,
        p_err_ncopy: helstrom_error_ncopy(theta, p1, copies)?,
    })
}

/// Grid point `i` of `steps` points spanning `[min, max]`, endpoints exact.
fn grid_point(min: f64, max: f64, steps: usize, i: usize) -> f64 {
    if steps == 1 {
        return min;
    }
    if i + 1 == steps {
        return max;
    }
    let last = (steps - 1) as f64;
    (min * (last - i as f64) + max * i as f64) / last
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<Report> {
    let rows = map_indexed(cfg.steps, Exec::default(), |i| {
        let theta = grid_point(cfg.theta_min, cfg.theta_max, cfg.steps, i);
        sweep_row(theta, cfg.p1, cfg.copies)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Report::from_serialize(&SweepReport {
        command: cfg.command,
        p1: cfg.p1,
        copies: cfg.copies,
        theta_min: cfg.theta_min,
        theta_max: cfg.theta_max,
        steps: cfg.steps,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_hits_endpoints_and_zero() {
        let pts: Vec<f64> = (0..41).map(|i| grid_point(-2.0, 2.0, 41, i)).collect();
        assert_eq!(pts[0], -2.0);
        assert_eq!(pts[20], 0.0);
        assert_eq!(pts[19], -0.1);
        assert_eq!(pts[40], 2.0);
        assert_eq!(grid_point(0.3, 0.7, 1, 0), 0.3);
    }

    #[test]
    fn binomial_check_degenerate_probability() {
        assert!(binomial_check(1.0, 10, 10, 0).within_3sigma);
        assert!(!binomial_check(1.0, 9, 10, 0).within_3sigma);
    }
}
