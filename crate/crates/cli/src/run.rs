//! Dispatch from a validated config to the library, plus CSV emission.

use std::path::{Path, PathBuf};

use hisd::dynamics::{integrate, prepare_initial_state, SaddleParams, SolverState};
use hisd::energy::{EnergyLandscape, FourWellEnergy, QuadraticSphereEnergy, RosenbrockChainEnergy};
use hisd::export::{
    write_convergence, write_file, write_index_robust, write_lemma_samples, write_lemma_summary, write_pathway,
    write_probes, write_trajectory,
};
use hisd::harness::{
    convergence_study, index_robust_study, lemma_scaling_study, pathway_convergence_study, random_initial_state,
    IndexRobustSetup, Relaxation,
};
use hisd::{HisdError, Trajectory64};

use crate::config::{EnergyKind, ExperimentConfig, Mode};
use crate::CliError;

type Landscape = Box<dyn EnergyLandscape<f64>>;

fn landscape(config: &ExperimentConfig) -> Result<Landscape, CliError> {
    let p = &config.energy_params;
    Ok(match config.energy {
        EnergyKind::Fourwell => Box::new(FourWellEnergy::new(p[0], p[1])),
        EnergyKind::Rosenbrock => Box::new(RosenbrockChainEnergy::new(p[0], p[1])),
        EnergyKind::Quadratic if p.is_empty() => Box::new(QuadraticSphereEnergy::integer_spectrum(config.d)),
        EnergyKind::Quadratic => Box::new(
            QuadraticSphereEnergy::new(p.clone()).map_err(|e| CliError::Config(format!("`energy_params`: {e}")))?,
        ),
    })
}

fn params(config: &ExperimentConfig, tau: f64) -> Result<SaddleParams<f64>, CliError> {
    SaddleParams::new(config.k, config.alpha, config.beta, tau, config.horizon)
        .and_then(|p| p.with_theta(config.theta))
        .map_err(|e| CliError::Config(e.to_string()))
}

/// Initial states in config order. Quadratic configs without `x0` draw a
/// seeded state.
fn initial_states(config: &ExperimentConfig) -> Result<Vec<SolverState<f64>>, CliError> {
    let bad = |e: HisdError| CliError::Config(format!("`x0`/`V0`: {e}"));
    if config.x0.is_empty() {
        return Ok(vec![random_initial_state(config.d, config.k, config.seed).map_err(bad)?]);
    }
    let v0 = config.v0.as_deref().unwrap_or_default();
    config.x0.iter().map(|x| prepare_initial_state(x, v0).map_err(bad)).collect()
}

/// One line per integration: step size, final energy and worst constraint defect.
fn summary_line(label: &str, landscape: &Landscape, traj: &Trajectory64) -> String {
    let end = traj.final_state();
    let energy = landscape.energy(&end.x).unwrap_or(f64::NAN);
    format!(
        "{label} tau={:e} steps={} final_energy={energy:.10e} max_defect={:.3e}",
        traj.params.tau,
        traj.steps(),
        traj.max_defects.max_defect()
    )
}

struct Session<'a> {
    config: &'a ExperimentConfig,
    landscape: Landscape,
    out_dir: PathBuf,
    lines: Vec<String>,
}

impl Session<'_> {
    fn file(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    fn write<F>(&self, name: &str, body: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut dyn std::io::Write) -> hisd::Result<()>,
    {
        let path = self.file(name);
        write_file(&path, |w| body(w)).map_err(|e| CliError::Io {
            stage: "write",
            detail: format!("{}: {e}", path.display()),
        })
    }

    /// Integrates once per step size to report the summary line for each run.
    fn summarize(&mut self, label: &str, initial: &SolverState<f64>, taus: &[f64]) -> Result<(), CliError> {
        for &tau in taus {
            let p = params(self.config, tau)?;
            let traj = integrate(&self.landscape, initial, &p, usize::MAX)
                .map_err(|e| CliError::from_hisd("integrate", e))?;
            self.lines.push(summary_line(label, &self.landscape, &traj));
        }
        Ok(())
    }

    fn run(&mut self) -> Result<(), CliError> {
        let initial = &initial_states(self.config)?[0];
        let p = params(self.config, self.config.tau)?;
        let traj = integrate(&self.landscape, initial, &p, self.config.record_every)
            .map_err(|e| CliError::from_hisd("run", e))?;
        self.write("trajectory.csv", |w| write_trajectory(w, &traj))?;
        self.write("probes.csv", |w| write_probes(w, &traj))?;
        self.lines.push(summary_line("run", &self.landscape, &traj));
        Ok(())
    }

    fn converge(&mut self) -> Result<(), CliError> {
        let initial = &initial_states(self.config)?[0];
        let p = params(self.config, self.config.tau)?;
        let table = convergence_study(&self.landscape, initial, &p, &self.config.tau_list, self.config.tau_ref)
            .map_err(|e| CliError::from_hisd("converge", e))?;
        self.write("convergence.csv", |w| write_convergence(w, &table))?;
        self.summarize("converge", initial, &self.config.tau_list.clone())?;
        for row in &table.rows {
            let rate = row.rate_x.map_or_else(|| "-".to_string(), |r| format!("{r:.3}"));
            self.lines.push(format!(
                "converge tau={:e} err_x={:.3e} rate_x={rate} err_v_avg={:.3e}",
                row.errors.tau, row.errors.err_x, row.errors.err_v_avg
            ));
        }
        Ok(())
    }

    fn lemmas(&mut self) -> Result<(), CliError> {
        let initial = &initial_states(self.config)?[0];
        let p = params(self.config, self.config.tau)?;
        let report = lemma_scaling_study(&self.landscape, initial, &p, &self.config.tau_list)
            .map_err(|e| CliError::from_hisd("lemmas", e))?;
        self.write("lemma_samples.csv", |w| write_lemma_samples(w, &report))?;
        self.write("lemma_summary.csv", |w| write_lemma_summary(w, &report))?;
        self.summarize("lemmas", initial, &self.config.tau_list.clone())?;
        let flagged = report.flagged();
        self.lines.push(if flagged.is_empty() {
            "lemmas: every probe scales at order >= 1.7 or is exactly zero".to_string()
        } else {
            format!("lemmas: below order 1.7: {}", flagged.join(", "))
        });
        Ok(())
    }

    fn pathway(&mut self) -> Result<(), CliError> {
        let initials = initial_states(self.config)?;
        let p = params(self.config, self.config.tau)?;
        let target = self.config.target.as_deref().unwrap_or_default();
        let reports = pathway_convergence_study(&self.landscape, &initials, &p, &self.config.tau_list, target)
            .map_err(|e| CliError::from_hisd("pathway", e))?;
        self.write("pathway.csv", |w| write_pathway(w, &reports))?;
        for (i, initial) in initials.iter().enumerate() {
            let traj = integrate(&self.landscape, initial, &p, self.config.record_every)
                .map_err(|e| CliError::from_hisd("pathway", e))?;
            self.write(&format!("pathway_{i}.csv"), |w| write_trajectory(w, &traj))?;
            self.lines.push(summary_line(&format!("pathway[{i}]"), &self.landscape, &traj));
        }
        for (i, rep) in reports.iter().enumerate() {
            let ratios: Vec<String> = rep.cauchy_ratios().iter().map(|r| format!("{r:.3}")).collect();
            self.lines.push(format!("pathway[{i}] cauchy_ratios=[{}]", ratios.join(", ")));
        }
        Ok(())
    }

    fn index_robust(&mut self) -> Result<(), CliError> {
        let c = self.config;
        let setup = |relaxation| IndexRobustSetup {
            d: c.d,
            k_list: c.k_list.clone(),
            relaxation,
            tau: c.tau,
            tau_ref: c.tau_ref,
            horizon: c.horizon,
            seed: c.seed,
        };
        let stage = |e| CliError::from_hisd("index-robust", e);
        let scaled = index_robust_study(&setup(Relaxation::ScaledByIndex { q0: c.q0 })).map_err(stage)?;
        let fixed = index_robust_study(&setup(Relaxation::Fixed(c.alpha))).map_err(stage)?;
        self.write("index_robust.csv", |w| write_index_robust(w, &scaled, false))?;
        self.write("index_robust_unscaled.csv", |w| write_index_robust(w, &fixed, true))?;
        for row in &scaled.rows {
            let initial = random_initial_state(c.d, row.k, c.seed).map_err(stage)?;
            let p = SaddleParams::new(row.k, row.alpha, row.beta, c.tau, c.horizon).map_err(stage)?;
            let traj = integrate(&self.landscape, &initial, &p, usize::MAX).map_err(stage)?;
            self.lines.push(summary_line(&format!("index-robust k={}", row.k), &self.landscape, &traj));
        }
        self.lines.push(format!("index-robust ratio={:.4}", scaled.ratio()));
        Ok(())
    }
}

/// Runs the experiment, writes its CSV files under `output_dir` and returns
/// the summary lines.
pub fn run_experiment(config: &ExperimentConfig, output_override: Option<&Path>) -> Result<Vec<String>, CliError> {
    let out_dir = output_override.map_or_else(|| config.output_dir.clone(), Path::to_path_buf);
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::Io {
        stage: "create output directory",
        detail: format!("{}: {e}", out_dir.display()),
    })?;
    let mut session = Session {
        config,
        landscape: landscape(config)?,
        out_dir,
        lines: Vec::new(),
    };
    match config.mode {
        Mode::Run => session.run()?,
        Mode::Converge => session.converge()?,
        Mode::Lemmas => session.lemmas()?,
        Mode::Pathway => session.pathway()?,
        Mode::IndexRobust => session.index_robust()?,
    }
    Ok(session.lines)
}
