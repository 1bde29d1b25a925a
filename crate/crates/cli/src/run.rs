//! Experiment drivers, one per command.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use spinforge_core::evolve::{exact_evolve, trotter_evolve, trotter_series, uniform_times};
use spinforge_core::models::{ModelKind, ModelSpec};
use spinforge_core::observables::{
    bell_q, default_theta_points, phase_probe_state, spin_moments, spin_squeezing, symmetric_fidelity,
    y_aligned_frame, FrameMode,
};
use spinforge_core::probe::{certify, reconstruct_pm, sample_probe_grid};
use spinforge_core::spinspace::{coherent_x_state, magnetization_distribution, symmetric_projector, StateVector};
use spinforge_core::swt::{chi_numeric, dispersion, effective_chi, magnon_gap, one_magnon_energies, CouplingProfile};

use crate::config::{Command, ExperimentConfig, FrameChoice, Method, ProbeState};
use crate::table::ResultTable;
use crate::CliError;

/// Reference coupling used for the rescaled axis when the model does not twist.
pub fn chi_ref(spec: &ModelSpec) -> f64 {
    spec.j0.abs() / (2.0 * (spec.n_sites.max(2) - 1) as f64)
}

/// `|χ|` of the effective collective model, or [`chi_ref`] when it vanishes.
pub fn axis_chi(spec: &ModelSpec) -> Result<f64, CliError> {
    let chi = effective_chi(spec)?.abs();
    Ok(if chi > 0.0 { chi } else { chi_ref(spec) })
}

/// Uniform time grid for one model; the default horizon is `π/|χ|`.
pub fn time_points(cfg: &ExperimentConfig, spec: &ModelSpec) -> Result<Vec<f64>, CliError> {
    let chi = axis_chi(spec)?;
    let t_max = match cfg.time_grid.t_max {
        Some(t) if cfg.time_grid.rescaled => t * PI / chi,
        Some(t) => t,
        None => PI / chi,
    };
    Ok(uniform_times(t_max, cfg.time_grid.n_points)?)
}

fn frame_mode(choice: FrameChoice) -> FrameMode {
    match choice {
        FrameChoice::Optimize => FrameMode::Optimize,
        FrameChoice::Identity => FrameMode::Identity,
        FrameChoice::YAligned => FrameMode::Fixed(y_aligned_frame()),
    }
}

/// Evolves `|+x⟩^N` to every time with the selected integrator.
pub fn evolve_states(
    cfg: &ExperimentConfig,
    spec: &ModelSpec,
    times: &[f64],
    method: Method,
) -> Result<Vec<StateVector>, CliError> {
    let psi0 = coherent_x_state(spec.n_sites)?;
    Ok(match method {
        Method::Exact => exact_evolve(&spec.build()?, &psi0, times)?,
        Method::Trotter => match cfg.trotter_steps {
            Some(n) => times
                .iter()
                .map(|&t| trotter_evolve(spec, &psi0, t, n))
                .collect::<Result<_, _>>()?,
            None => trotter_series(spec, &psi0, times, cfg.max_phase)?,
        },
    })
}

fn oat_twin(spec: &ModelSpec) -> Result<ModelSpec, CliError> {
    Ok(ModelSpec::oat(spec.n_sites, effective_chi(spec)?))
}

fn xi2_or_nan(state: &StateVector) -> Result<f64, CliError> {
    use spinforge_core::Error;
    match spin_squeezing(state) {
        Ok(r) => Ok(r.xi2),
        Err(Error::UndefinedMeanSpin { .. }) => Ok(f64::NAN),
        Err(e) => Err(e.into()),
    }
}

fn rescaled(times: &[f64], chi: f64) -> Vec<f64> {
    times.iter().map(|t| chi * t / PI).collect()
}

/// Runs one experiment; `jobs` sizes the sweep worker pool.
pub fn run(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<ResultTable, CliError> {
    let table = match cfg.command {
        Command::Dispersion => run_dispersion(cfg)?,
        Command::Chi => run_chi(cfg)?,
        Command::Evolve => run_evolve(cfg)?,
        Command::Bell => run_bell(cfg)?,
        Command::Squeeze => run_squeeze(cfg)?,
        Command::Fidelity => run_fidelity(cfg)?,
        Command::Probe => run_probe(cfg)?,
        Command::PhaseDiagram => run_phase_diagram(cfg, jobs)?,
    };
    let mut echo: serde_json::Map<String, Value> =
        cfg.echo.iter().map(|(k, v)| (k.clone(), Value::from(v.as_str()))).collect();
    echo.insert("command".into(), cfg.command.name().into());
    Ok(table
        .with_meta("config", Value::Object(echo))
        .with_meta("model", model_json(&cfg.model))
        .with_meta(
            "versions",
            json!({ "spinforge": env!("CARGO_PKG_VERSION"), "spinforge-core": spinforge_core::VERSION }),
        ))
}

fn model_json(spec: &ModelSpec) -> Value {
    json!({
        "kind": spec.kind.name(),
        "n_sites": spec.n_sites,
        "j0": spec.j0,
        "hz": spec.hz,
        "delta": spec.delta,
        "gamma": spec.gamma,
        "kac": spec.kac,
        "distance": spec.distance.name(),
        "chi": spec.chi,
    })
}

fn run_dispersion(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let (magnon_spec, delta) = match cfg.model.kind {
        ModelKind::StaggeredXxx => (ModelSpec { hz: 0.0, ..cfg.model.clone() }, 0.0),
        ModelKind::LongRangeXxz => (cfg.model.clone(), cfg.model.delta),
        k => {
            return Err(CliError::Config(format!("dispersion is not defined for kind {}", k.name())));
        }
    };
    let profile = CouplingProfile::from_spec(&magnon_spec)?;
    let numeric = one_magnon_energies(&magnon_spec.build()?)?;
    let q: Vec<f64> = numeric.iter().map(|p| p.0).collect();
    let eps_n: Vec<f64> = numeric.iter().map(|p| p.1).collect();
    let eps_a = q.iter().map(|&q| dispersion(&profile, delta, q)).collect::<Result<Vec<_>, _>>()?;
    let diff: Vec<f64> = eps_a.iter().zip(&eps_n).map(|(a, b)| (a - b).abs()).collect();
    let max_diff = diff.iter().copied().fold(0.0, f64::max);
    Ok(ResultTable::new(vec![
        ("q", q),
        ("eps_analytic", eps_a),
        ("eps_numeric", eps_n),
        ("abs_diff", diff),
    ])?
    .with_meta(
        "summary",
        json!({ "max_abs_diff": max_diff, "magnon_gap": magnon_gap(&profile, delta) }),
    ))
}

fn run_chi(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let spec = &cfg.model;
    let analytic = effective_chi(spec)?;
    let numeric = chi_numeric(&spec.build()?, spec.n_sites)?;
    let rel = if analytic != 0.0 {
        ((numeric - analytic) / analytic).abs()
    } else {
        f64::NAN
    };
    ResultTable::new(vec![
        ("n_sites", vec![spec.n_sites as f64]),
        ("hz", vec![spec.hz]),
        ("delta", vec![spec.delta]),
        ("gamma", vec![spec.gamma]),
        ("chi_analytic", vec![analytic]),
        ("chi_numeric", vec![numeric]),
        ("rel_diff", vec![rel]),
    ])
}

fn run_evolve(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let times = time_points(cfg, &cfg.model)?;
    let states = evolve_states(cfg, &cfg.model, &times, cfg.method)?;
    let mut s = [vec![], vec![], vec![]];
    let mut norm = vec![];
    for st in &states {
        let (mean, _) = spin_moments(st)?;
        for a in 0..3 {
            s[a].push(mean[a]);
        }
        norm.push(st.norm_sqr().sqrt());
    }
    let [sx, sy, sz] = s;
    ResultTable::new(vec![
        ("t", times.clone()),
        ("chi_t_over_pi", rescaled(&times, axis_chi(&cfg.model)?)),
        ("sx", sx),
        ("sy", sy),
        ("sz", sz),
        ("norm", norm),
    ])
}

fn bell_series(states: &[StateVector], mode: &FrameMode) -> Result<Vec<f64>, CliError> {
    states.iter().map(|s| Ok(bell_q(s, mode)?.q)).collect()
}

fn run_bell(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let spec = &cfg.model;
    let times = time_points(cfg, spec)?;
    let mode = frame_mode(cfg.frame);
    let q_exact = bell_series(&evolve_states(cfg, spec, &times, Method::Exact)?, &mode)?;
    let q_oat = bell_series(&evolve_states(cfg, &oat_twin(spec)?, &times, Method::Exact)?, &mode)?;
    let q_trotter = if spec.kind == ModelKind::StaggeredXxx {
        bell_series(&evolve_states(cfg, spec, &times, Method::Trotter)?, &mode)?
    } else {
        vec![f64::NAN; times.len()]
    };
    ResultTable::new(vec![
        ("t", times.clone()),
        ("chi_t_over_pi", rescaled(&times, axis_chi(spec)?)),
        ("Q_exact", q_exact),
        ("Q_oat", q_oat),
        ("Q_trotter", q_trotter),
    ])
}

fn run_squeeze(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let spec = &cfg.model;
    let times = time_points(cfg, spec)?;
    let xi = |states: Vec<StateVector>| -> Result<Vec<f64>, CliError> { states.iter().map(xi2_or_nan).collect() };
    let exact = xi(evolve_states(cfg, spec, &times, cfg.method)?)?;
    let oat = xi(evolve_states(cfg, &oat_twin(spec)?, &times, Method::Exact)?)?;
    ResultTable::new(vec![
        ("t", times.clone()),
        ("chi_t_over_pi", rescaled(&times, axis_chi(spec)?)),
        ("xi2_exact", exact),
        ("xi2_oat", oat),
    ])
}

fn run_fidelity(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let spec = &cfg.model;
    let times = time_points(cfg, spec)?;
    let proj = symmetric_projector(spec.n_sites)?;
    let f = evolve_states(cfg, spec, &times, cfg.method)?
        .iter()
        .map(|s| symmetric_fidelity(s, &proj))
        .collect::<Result<Vec<_>, _>>()?;
    ResultTable::new(vec![
        ("t", times.clone()),
        ("chi_t_over_pi", rescaled(&times, axis_chi(spec)?)),
        ("F_sym", f),
    ])
}

/// The chain state handed to the probe readout.
pub fn probe_input(cfg: &ExperimentConfig) -> Result<StateVector, CliError> {
    let n = cfg.model.n_sites;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut draw = |len: usize| -> Vec<C64> {
        (0..len)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    };
    Ok(match cfg.state {
        ProbeState::Evolved => {
            let t = match cfg.t {
                Some(t) => t,
                None => FRAC_PI_2 / axis_chi(&cfg.model)?,
            };
            exact_evolve(&cfg.model.build()?, &coherent_x_state(n)?, &[t])?.remove(0)
        }
        ProbeState::Coherent => coherent_x_state(n)?,
        ProbeState::Ghz => StateVector::ghz_z(n)?,
        ProbeState::RandomSymmetric => StateVector::from_dicke(n, &draw(n + 1))?.normalized()?,
        ProbeState::Random => StateVector::new(n, false, draw(1usize << n))?.normalized()?,
    })
}

fn run_probe(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let n = cfg.model.n_sites;
    let psi = probe_input(cfg)?;
    let n_theta = cfg.n_theta.unwrap_or_else(|| default_theta_points(n));
    let grid = sample_probe_grid(&psi, n_theta)?;
    let (mut k_col, mut tau, mut theta, mut re, mut im) = (vec![], vec![], vec![], vec![], vec![]);
    for k in 0..=n {
        for j in 0..n_theta {
            let a = grid.get(k, j);
            k_col.push(k as f64);
            tau.push(grid.tau_grid()[k]);
            theta.push(grid.theta_grid()[j]);
            re.push(a.re);
            im.push(a.im);
        }
    }
    let table = reconstruct_pm(&grid);
    let mut recon_err: f64 = 0.0;
    for (j, &th) in table.theta().iter().enumerate() {
        let direct = magnetization_distribution(&phase_probe_state(&psi, th)?)?;
        for (i, (_, p)) in direct.iter().enumerate() {
            recon_err = recon_err.max((table.row(j)[i] - p).abs());
        }
    }
    let q_fixed = bell_q(&psi, &FrameMode::Fixed(y_aligned_frame()))?.q;
    let mut summary = json!({
        "max_reconstruction_error": recon_err,
        "q_fixed_frame": json_number(q_fixed),
    });
    if n.is_multiple_of(2) {
        let c = certify(&psi, n_theta)?;
        summary["coherence_re"] = c.coherence.re.into();
        summary["coherence_im"] = c.coherence.im.into();
        summary["q_probe"] = json_number(c.q);
    }
    Ok(ResultTable::new(vec![
        ("k", k_col),
        ("tau", tau),
        ("theta", theta),
        ("re_a", re),
        ("im_a", im),
    ])?
    .with_meta("summary", summary))
}

fn json_number(x: f64) -> Value {
    if x.is_finite() {
        x.into()
    } else {
        Value::String(crate::table::format_value(x))
    }
}

/// Per-cell figures of merit of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSummary {
    pub q_max: f64,
    pub xi2_min: f64,
    pub f_sym_min: f64,
    pub chi: f64,
}

/// Exact evolution of one model over its own time grid.
pub fn run_cell(cfg: &ExperimentConfig, spec: &ModelSpec) -> Result<CellSummary, CliError> {
    let times = time_points(cfg, spec)?;
    let states = evolve_states(cfg, spec, &times, Method::Exact)?;
    let proj = symmetric_projector(spec.n_sites)?;
    let mode = frame_mode(cfg.frame);
    let mut out = CellSummary {
        q_max: f64::NEG_INFINITY,
        xi2_min: f64::NAN,
        f_sym_min: f64::INFINITY,
        chi: effective_chi(spec)?,
    };
    for s in &states {
        out.q_max = out.q_max.max(bell_q(s, &mode)?.q);
        let xi = xi2_or_nan(s)?;
        if !xi.is_nan() && !(xi >= out.xi2_min) {
            out.xi2_min = xi;
        }
        out.f_sym_min = out.f_sym_min.min(symmetric_fidelity(s, &proj)?);
    }
    Ok(out)
}

fn run_phase_diagram(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<ResultTable, CliError> {
    if !matches!(cfg.model.kind, ModelKind::LongRangeXxz | ModelKind::IsingLimit) {
        return Err(CliError::Config("phase-diagram needs kind longrange_xxz or ising_limit".into()));
    }
    let sweep = cfg.sweep.ok_or_else(|| CliError::Config("missing sweep ranges".into()))?;
    let cells: Vec<(f64, f64)> = sweep
        .delta
        .values()
        .into_iter()
        .flat_map(|d| sweep.gamma.values().into_iter().map(move |g| (d, g)))
        .collect();
    let work = |&(delta, gamma): &(f64, f64)| {
        run_cell(cfg, &ModelSpec { delta, gamma, ..cfg.model.clone() })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let results: Vec<CellSummary> = pool
        .install(|| cells.par_iter().map(work).collect::<Result<Vec<_>, _>>())?;
    let col = |f: fn(&CellSummary) -> f64| results.iter().map(f).collect::<Vec<_>>();
    ResultTable::new(vec![
        ("delta", cells.iter().map(|c| c.0).collect()),
        ("gamma", cells.iter().map(|c| c.1).collect()),
        ("Q_max", col(|c| c.q_max)),
        ("xi2_min", col(|c| c.xi2_min)),
        ("F_sym_min", col(|c| c.f_sym_min)),
        ("chi", col(|c| c.chi)),
    ])
}
