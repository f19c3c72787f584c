//! Experiment drivers.

use nlsampling::algebra::PNorm;
use nlsampling::companding::{reconstruct_hybrid, reconstruct_van_cittert, Preconditioner};
use nlsampling::fri::{blind_coarse_estimate, blind_recover, check_rank_condition, identify};
use nlsampling::solver::{SolverOptions, SolverTrace};
use nlsampling::Vector;

use crate::artifact::{Artifact, Table};
use crate::config::{Experiment, ExperimentConfig};
use crate::instances::{self, CompandingInstance, FriInstance, FRI_DELTA0};
use crate::{CliError, Result};

/// Iterations reported for the Van-Cittert table.
pub const TABLE1_ROWS: [usize; 7] = [5, 10, 15, 20, 30, 40, 50];
/// Iterations reported for the hybrid table.
pub const TABLE2_ROWS: [usize; 6] = [5, 6, 7, 8, 9, 10];
/// Iterations reported for the identification tables.
pub const IDENTIFY_ROWS: [usize; 7] = [1, 5, 10, 15, 20, 25, 30];
/// Raw data misfit ratio at which the hybrid solver switches to quasi-Newton.
pub const SWITCH_RATIO: f64 = 0.10;
/// Interval `[0, 0.4]` where no noise touches the adjacent samples.
pub const QUIET_SEGMENT: (f64, f64) = (0.0, 0.4);

const COMPANDING_COLUMNS: [&str; 5] = ["iteration", "linf_error", "l2_error_rms", "l1_error_mean", "data_error"];
const IDENTIFY_COLUMNS: [&str; 4] = ["iteration", "amplitude_error", "position_error", "sample_error"];

fn pipeline(config: &ExperimentConfig) -> impl Fn(nlsampling::Error) -> CliError + '_ {
    move |source| CliError::Pipeline { source, config: config.echo() }
}

fn expect(config: &ExperimentConfig, want: &[Experiment]) -> Result<()> {
    if want.contains(&config.experiment) {
        Ok(())
    } else {
        Err(CliError::Config(format!("experiment {} does not match this driver", config.experiment.name())))
    }
}

/// Iterate `n` of a retained trace, clamped to the last recorded one.
fn iterate(trace: &SolverTrace, n: usize) -> &Vector {
    &trace.iterates[n.min(trace.iterates.len() - 1)]
}

fn companding_row(inst: &CompandingInstance, x: &Vector, n: usize) -> Result<Vec<f64>> {
    let e = x - &inst.x_true;
    let len = e.len() as f64;
    let data = inst.model.forward_sample(x).map_err(|s| CliError::Pipeline { source: s, config: String::new() })?;
    Ok(vec![n as f64, e.amax(), e.norm() / len.sqrt(), PNorm::L1.of(&e) / len, (data - &inst.y).amax()])
}

fn companding_table(name: &str, inst: &CompandingInstance, trace: &SolverTrace, rows: &[usize]) -> Result<Table> {
    let mut t = Table::new(name, &COMPANDING_COLUMNS).log_scale();
    for &n in rows {
        t.push(companding_row(inst, iterate(trace, n), n)?);
    }
    Ok(t)
}

fn solver_options(config: &ExperimentConfig, reference: Option<Vector>, tol: f64) -> SolverOptions {
    SolverOptions { tol, max_iter: config.max_iter, reference, retain_iterates: true, ..SolverOptions::default() }
}

/// Instance and full Van-Cittert trace of the Table-1 experiment.
pub fn table1_trace(config: &ExperimentConfig) -> Result<(CompandingInstance, SolverTrace)> {
    let inst = instances::companding_instance(config)?;
    let opts = solver_options(config, Some(inst.x_true.clone()), 0.0);
    let trace = reconstruct_van_cittert(&inst.model, &inst.y, config.alpha, Preconditioner::Normalized, &opts)
        .map_err(pipeline(config))?;
    Ok((inst, trace))
}

/// Van-Cittert reconstruction of a companded spline from box averages.
pub fn run_table1(config: &ExperimentConfig) -> Result<Artifact> {
    expect(config, &[Experiment::CompandingTable1])?;
    let (inst, trace) = table1_trace(config)?;
    let rows: Vec<usize> = TABLE1_ROWS.iter().copied().filter(|&n| n <= config.max_iter).collect();
    let table = companding_table("table1", &inst, &trace, &rows)?;
    let mut summary = vec![("rejected_draws".to_string(), inst.rejected as f64)];
    if let Some(r) = trace.rate() {
        summary.push(("rate".into(), r));
    }
    summary.push(("final_linf_error".into(), (&trace.x - &inst.x_true).amax()));
    Ok(Artifact { tables: vec![table], summary, notes: trace.warnings.clone(), completed: true })
}

/// Instance and hybrid trace of the Table-2 experiment.
pub fn table2_trace(config: &ExperimentConfig) -> Result<(CompandingInstance, SolverTrace)> {
    let inst = instances::companding_instance(config)?;
    let opts = solver_options(config, Some(inst.x_true.clone()), 1e-14);
    let trace = reconstruct_hybrid(&inst.model, &inst.y, config.alpha, SWITCH_RATIO, Preconditioner::Normalized, &opts)
        .map_err(pipeline(config))?;
    Ok((inst, trace))
}

/// Van-Cittert steps followed by quasi-Newton steps once the data misfit
/// drops below ten percent.
pub fn run_table2(config: &ExperimentConfig) -> Result<Artifact> {
    expect(config, &[Experiment::CompandingTable2])?;
    let (inst, trace) = table2_trace(config)?;
    let table = companding_table("table2", &inst, &trace, &TABLE2_ROWS)?;
    let mut summary = vec![("rejected_draws".to_string(), inst.rejected as f64)];
    if let Some(s) = trace.switch_iteration {
        summary.push(("switch_iteration".into(), s as f64));
    }
    summary.push(("iterations".into(), trace.iterations as f64));
    summary.push(("final_linf_error".into(), (&trace.x - &inst.x_true).amax()));
    Ok(Artifact { tables: vec![table], summary, notes: trace.warnings.clone(), completed: trace.converged })
}

/// Outcome of the piecewise-noise experiment.
#[derive(Debug, Clone)]
pub struct NoiseOutcome {
    pub instance: CompandingInstance,
    pub noise: Vector,
    pub clean: SolverTrace,
    pub noisy: SolverTrace,
    /// `‖x^ε - x‖_∞` between the two limits.
    pub deviation: f64,
    /// Largest spline deviation over the sampled grid.
    pub global_signal_deviation: f64,
    /// Largest spline deviation over the quiet segment.
    pub local_signal_deviation: f64,
}

const SIGNAL_GRID: usize = 801;

/// Reconstruct from clean and from noisy samples with the same solver.
pub fn noise_outcome(config: &ExperimentConfig) -> Result<NoiseOutcome> {
    let err = pipeline(config);
    let instance = instances::companding_instance(config)?;
    let noise = instances::piecewise_noise(config.seed, &instance.y, config.noise_level);
    let opts = SolverOptions { tol: 1e-13, max_iter: config.max_iter, ..SolverOptions::default() };
    let solve = |y: &Vector| reconstruct_van_cittert(&instance.model, y, config.alpha, Preconditioner::Normalized, &opts);
    let clean = solve(&instance.y).map_err(&err)?;
    let noisy = solve(&(&instance.y + &noise)).map_err(&err)?;
    let deviation = (&noisy.x - &clean.x).amax();
    let (mut global, mut local) = (0.0f64, 0.0f64);
    for i in 0..SIGNAL_GRID {
        let t = -2.0 + 4.0 * i as f64 / (SIGNAL_GRID - 1) as f64;
        let d = (instance.model.signal(&noisy.x, t) - instance.model.signal(&clean.x, t)).abs();
        global = global.max(d);
        if (QUIET_SEGMENT.0..=QUIET_SEGMENT.1).contains(&t) {
            local = local.max(d);
        }
    }
    Ok(NoiseOutcome {
        instance,
        noise,
        clean,
        noisy,
        deviation,
        global_signal_deviation: global,
        local_signal_deviation: local,
    })
}

/// Piecewise noise on the box averages; reports the coefficient deviation and
/// the signal and sample curves.
pub fn run_noise_demo(config: &ExperimentConfig) -> Result<Artifact> {
    expect(config, &[Experiment::CompandingNoise])?;
    let out = noise_outcome(config)?;
    let model = &out.instance.model;
    let mut signal = Table::new("noise_signal", &["t", "original", "difference"]);
    for i in 0..SIGNAL_GRID {
        let t = -2.0 + 4.0 * i as f64 / (SIGNAL_GRID - 1) as f64;
        let h = model.signal(&out.instance.x_true, t);
        signal.push(vec![t, h, model.signal(&out.noisy.x, t) - model.signal(&out.clean.x, t)]);
    }
    let mut samples = Table::new("noise_samples", &["box", "samples", "noise"]);
    for i in 0..out.noise.len() {
        samples.push(vec![(i + 1) as f64, out.instance.y[i], out.noise[i]]);
    }
    let summary = vec![
        ("rejected_draws".to_string(), out.instance.rejected as f64),
        ("signal_peak".into(), model.signal_at_nodes(&out.instance.x_true).amax()),
        ("deviation".into(), out.deviation),
        ("global_signal_deviation".into(), out.global_signal_deviation),
        ("local_signal_deviation".into(), out.local_signal_deviation),
    ];
    let mut notes = out.clean.warnings.clone();
    notes.extend(out.noisy.warnings.iter().cloned());
    Ok(Artifact {
        tables: vec![signal, samples],
        summary,
        notes,
        completed: out.clean.converged && out.noisy.converged,
    })
}

/// Identification trace and per-iterate errors; on divergence the partial
/// trace is kept and the error is returned alongside.
pub struct IdentifyOutcome {
    pub instance: FriInstance,
    pub trace: SolverTrace,
    pub failure: Option<nlsampling::Error>,
}

impl IdentifyOutcome {
    /// `(‖c_n - c_∞‖_∞, ‖σ_n - σ_∞‖_∞, ‖⟨F(h_n) - F(h), Ψ⟩‖_∞)` for iterate `n`.
    pub fn errors(&self, n: usize) -> Result<(f64, f64, f64)> {
        let lin = &self.instance.lin;
        let u = iterate(&self.trace, n);
        let (sigma, c) = lin.split(u);
        let (pos, amp) = lin.perturbed(&sigma, &c);
        let s = lin.samples(&pos, &amp).map_err(|e| CliError::Pipeline { source: e, config: String::new() })?;
        Ok(((&c - &self.instance.c_true).amax(), (&sigma - &self.instance.sigma_true).amax(), (s - &self.instance.y_clean).amax()))
    }
}

pub fn identify_outcome(config: &ExperimentConfig) -> Result<IdentifyOutcome> {
    let instance = instances::fri_instance(config)?;
    let opts = solver_options(config, None, 0.0);
    match identify(&instance.lin, &instance.y, config.alpha, FRI_DELTA0, &opts) {
        Ok(id) => Ok(IdentifyOutcome { instance, trace: id.trace, failure: None }),
        Err(nlsampling::Error::Divergence { iteration, reason, trace: Some(trace) }) => {
            let trace = *trace;
            let failure = Some(nlsampling::Error::Divergence { iteration, reason, trace: None });
            Ok(IdentifyOutcome { instance, trace, failure })
        }
        Err(e) => Err(pipeline(config)(e)),
    }
}

fn identify_artifact(config: &ExperimentConfig, name: &str) -> Result<Artifact> {
    let out = identify_outcome(config)?;
    let mut table = Table::new(name, &IDENTIFY_COLUMNS).log_scale();
    let last = out.trace.iterates.len().saturating_sub(1);
    for &n in IDENTIFY_ROWS.iter().filter(|&&n| n <= config.max_iter) {
        if out.failure.is_some() && n > last {
            break;
        }
        let (c, s, d) = out.errors(n)?;
        table.push(vec![n as f64, c, s, d]);
    }
    let (c, s, d) = out.errors(last)?;
    let mut notes = out.trace.warnings.clone();
    if let Some(f) = &out.failure {
        notes.push(format!("stopped early: {f}"));
    }
    Ok(Artifact {
        tables: vec![table],
        summary: vec![
            ("rejected_draws".to_string(), out.instance.rejected as f64),
            ("iterations".into(), last as f64),
            ("amplitude_error".into(), c),
            ("position_error".into(), s),
            ("sample_error".into(), d),
        ],
        notes,
        completed: out.failure.is_none(),
    })
}

/// Identification of innovation positions and amplitudes from noiseless samples.
pub fn run_table3(config: &ExperimentConfig) -> Result<Artifact> {
    expect(config, &[Experiment::FriTable3])?;
    identify_artifact(config, "table3")
}

/// Identification from samples with bounded uniform noise.
pub fn run_table4(config: &ExperimentConfig) -> Result<Artifact> {
    expect(config, &[Experiment::FriTable4])?;
    identify_artifact(config, "table4")
}

/// Blind recovery of a perturbed shift-invariant signal from two sampler
/// channels. Out-of-regime perturbations surface the pipeline error.
pub fn run_blind_demo(config: &ExperimentConfig) -> Result<Artifact> {
    expect(config, &[Experiment::BlindDemo])?;
    let err = pipeline(config);
    let inst = instances::blind_instance(config)?;
    let rank = check_rank_condition(&inst.config, &inst.phi).map_err(&err)?;
    if !rank.holds {
        return Err(err(nlsampling::Error::RankCondition { min_singular: rank.min_sigma }));
    }
    let coarse = blind_coarse_estimate(&inst.config, &inst.phi, &inst.samples).map_err(&err)?;
    let opts = SolverOptions { tol: 1e-13, max_iter: config.max_iter, ..SolverOptions::default() };
    let rec = blind_recover(&inst.config, &inst.phi, &inst.samples, &inst.rule, &opts).map_err(&err)?;
    let support_exact = coarse.support == inst.support && coarse.ambiguous.is_empty();
    let mut table = Table::new("blind", &["index", "position", "recovered_position", "amplitude", "recovered_amplitude"]);
    let (mut perr, mut aerr) = (f64::NAN, f64::NAN);
    if rec.positions.len() == inst.positions.len() && support_exact {
        perr = 0.0;
        aerr = 0.0;
        for (i, (&p, &a)) in inst.positions.iter().zip(&inst.amplitudes).enumerate() {
            perr = perr.max((rec.positions[i] - p).abs());
            aerr = aerr.max((rec.amplitudes[i] - a).abs());
            table.push(vec![inst.support[i] as f64, p, rec.positions[i], a, rec.amplitudes[i]]);
        }
    }
    let iterations = rec.identification.as_ref().map_or(0, |id| id.trace.iterations);
    Ok(Artifact {
        tables: vec![table],
        summary: vec![
            ("rank_min_singular".to_string(), rank.min_sigma),
            ("support_exact".into(), if support_exact { 1.0 } else { 0.0 }),
            ("ambiguous".into(), coarse.ambiguous.len() as f64),
            ("iterations".into(), iterations as f64),
            ("position_error".into(), perr),
            ("amplitude_error".into(), aerr),
        ],
        notes: rec.identification.map(|id| id.trace.warnings).unwrap_or_default(),
        completed: support_exact,
    })
}

/// Dispatch on the experiment tag.
pub fn run(config: &ExperimentConfig) -> Result<Artifact> {
    config.validate()?;
    match config.experiment {
        Experiment::CompandingTable1 => run_table1(config),
        Experiment::CompandingTable2 => run_table2(config),
        Experiment::CompandingNoise => run_noise_demo(config),
        Experiment::FriTable3 => run_table3(config),
        Experiment::FriTable4 => run_table4(config),
        Experiment::BlindDemo => run_blind_demo(config),
    }
}
