//! Experiment configuration: a flat TOML document, validated per mode.

use std::path::PathBuf;

use hisd::harness::{is_dyadic, DEFAULT_REFERENCE_TAU};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyKind {
    Fourwell,
    Rosenbrock,
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Run,
    Converge,
    Lemmas,
    Pathway,
    IndexRobust,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Run => "run",
            Mode::Converge => "converge",
            Mode::Lemmas => "lemmas",
            Mode::Pathway => "pathway",
            Mode::IndexRobust => "index-robust",
        }
    }
}

/// The document as written. Every key is optional here; [`parse_config`]
/// decides what each mode requires.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    energy: Option<EnergyKind>,
    #[serde(default)]
    energy_params: Vec<f64>,
    d: Option<usize>,
    k: Option<usize>,
    alpha: Option<f64>,
    beta: Option<f64>,
    tau: Option<f64>,
    #[serde(rename = "T")]
    horizon: Option<f64>,
    theta: Option<f64>,
    x0: Option<Vec<f64>>,
    #[serde(rename = "V0")]
    v0: Option<Vec<Vec<f64>>>,
    tau_list: Option<Vec<f64>>,
    tau_ref: Option<f64>,
    seed: Option<u64>,
    mode: Option<Mode>,
    output_dir: Option<PathBuf>,
    record_every: Option<usize>,
    k_list: Option<Vec<usize>>,
    q0: Option<f64>,
    x0_list: Option<Vec<Vec<f64>>>,
    target: Option<Vec<f64>>,
}

/// A validated experiment with all defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub energy: EnergyKind,
    pub energy_params: Vec<f64>,
    pub d: usize,
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
    pub horizon: f64,
    pub theta: f64,
    /// Starting points; one for every mode except `pathway`, which may list several.
    pub x0: Vec<Vec<f64>>,
    pub v0: Option<Vec<Vec<f64>>>,
    pub tau_list: Vec<f64>,
    pub tau_ref: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub record_every: usize,
    pub k_list: Vec<usize>,
    pub q0: f64,
    pub target: Option<Vec<f64>>,
}

fn invalid(key: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("`{key}`: {why}"))
}

fn missing(key: &str, mode: Mode) -> CliError {
    invalid(key, format!("required for mode `{}`", mode.name()))
}

fn positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(key, format!("must be positive and finite, got {v}")))
    }
}

fn dyadic(key: &str, v: f64) -> Result<f64, CliError> {
    if is_dyadic(v) {
        Ok(v)
    } else {
        Err(invalid(key, format!("{v} is not an exact power of two")))
    }
}

/// Parses and validates a config. `mode` comes from the subcommand; a `mode`
/// key in the document must agree with it.
pub fn parse_config(text: &str, mode: Mode) -> Result<ExperimentConfig, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;
    if let Some(m) = raw.mode {
        if m != mode {
            return Err(invalid(
                "mode",
                format!("document says `{}` but `{}` was requested", m.name(), mode.name()),
            ));
        }
    }
    let energy = raw.energy.ok_or_else(|| missing("energy", mode))?;

    let d = match energy {
        EnergyKind::Fourwell => 2,
        EnergyKind::Rosenbrock => 3,
        EnergyKind::Quadratic if raw.energy_params.is_empty() => raw.d.ok_or_else(|| missing("d", mode))?,
        EnergyKind::Quadratic => raw.energy_params.len(),
    };
    if let Some(given) = raw.d {
        if given != d {
            return Err(invalid("d", format!("{given} does not match the {d}-dimensional energy")));
        }
    }
    match energy {
        EnergyKind::Fourwell | EnergyKind::Rosenbrock if raw.energy_params.len() != 2 => {
            return Err(invalid("energy_params", "expects two values"));
        }
        EnergyKind::Quadratic if mode == Mode::IndexRobust && !raw.energy_params.is_empty() => {
            return Err(invalid("energy_params", "index-robust uses the spectrum 1..d; leave it empty"));
        }
        _ => {}
    }
    if energy != EnergyKind::Quadratic && mode == Mode::IndexRobust {
        return Err(invalid("energy", "index-robust runs on the quadratic energy"));
    }

    let k_list = match (mode, raw.k_list) {
        (Mode::IndexRobust, Some(list)) if !list.is_empty() => list,
        (Mode::IndexRobust, _) => return Err(missing("k_list", mode)),
        (_, Some(_)) => return Err(invalid("k_list", "only used by mode `index-robust`")),
        (_, None) => Vec::new(),
    };
    let k = match mode {
        Mode::IndexRobust => *k_list.iter().max().unwrap(),
        _ => raw.k.ok_or_else(|| missing("k", mode))?,
    };
    if k == 0 || k >= d {
        let key = if mode == Mode::IndexRobust { "k_list" } else { "k" };
        return Err(invalid(key, format!("need 1 <= k < d = {d}, got {k}")));
    }

    let tau_list = match raw.tau_list {
        Some(list) if list.is_empty() => return Err(invalid("tau_list", "is empty")),
        Some(list) => list,
        None if matches!(mode, Mode::Converge | Mode::Lemmas | Mode::Pathway) => {
            return Err(missing("tau_list", mode))
        }
        None => Vec::new(),
    };
    for &t in &tau_list {
        dyadic("tau_list", positive("tau_list", t)?)?;
    }
    let tau = match raw.tau.or_else(|| tau_list.first().copied()) {
        Some(t) => positive("tau", t)?,
        None => return Err(missing("tau", mode)),
    };
    if mode != Mode::Run {
        dyadic("tau", tau)?;
    }
    let tau_ref = dyadic("tau_ref", positive("tau_ref", raw.tau_ref.unwrap_or(DEFAULT_REFERENCE_TAU))?)?;

    let x0 = match (mode, raw.x0, raw.x0_list) {
        (_, Some(_), Some(_)) => return Err(invalid("x0_list", "give either `x0` or `x0_list`")),
        (Mode::Pathway, None, Some(list)) if !list.is_empty() => list,
        (_, None, Some(_)) => return Err(invalid("x0_list", "only used by mode `pathway`")),
        (_, Some(x), None) => vec![x],
        (Mode::IndexRobust, None, None) => Vec::new(),
        (_, None, None) if energy == EnergyKind::Quadratic => Vec::new(),
        (_, None, _) => return Err(missing("x0", mode)),
    };
    if mode == Mode::IndexRobust && !x0.is_empty() {
        return Err(invalid("x0", "index-robust draws seeded initial data"));
    }
    for x in &x0 {
        if x.len() != d {
            return Err(invalid("x0", format!("expected {d} entries, got {}", x.len())));
        }
    }
    if let Some(v0) = &raw.v0 {
        if mode == Mode::IndexRobust {
            return Err(invalid("V0", "index-robust draws seeded initial data"));
        }
        if v0.len() != k || v0.iter().any(|v| v.len() != d) {
            return Err(invalid("V0", format!("expected {k} rows of {d} entries")));
        }
    } else if !x0.is_empty() {
        return Err(missing("V0", mode));
    }

    let target = raw.target;
    if let Some(t) = &target {
        if t.len() != d {
            return Err(invalid("target", format!("expected {d} entries, got {}", t.len())));
        }
    }
    if mode == Mode::Pathway && target.is_none() {
        return Err(missing("target", mode));
    }

    let record_every = raw.record_every.unwrap_or(1);
    if record_every == 0 {
        return Err(invalid("record_every", "must be at least 1"));
    }

    let alpha = positive("alpha", raw.alpha.unwrap_or(1.0))?;
    let beta = positive("beta", raw.beta.unwrap_or(1.0))?;
    if mode == Mode::IndexRobust && alpha != beta {
        // The unscaled contrast sweep runs with alpha = beta.
        return Err(invalid("beta", "index-robust needs alpha = beta"));
    }

    Ok(ExperimentConfig {
        mode,
        energy,
        energy_params: raw.energy_params,
        d,
        k,
        alpha,
        beta,
        tau,
        horizon: positive("T", raw.horizon.ok_or_else(|| missing("T", mode))?)?,
        theta: raw.theta.unwrap_or(0.1),
        x0,
        v0: raw.v0,
        tau_list,
        tau_ref,
        seed: raw.seed.unwrap_or(0),
        output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("output")),
        record_every,
        k_list,
        q0: positive("q0", raw.q0.unwrap_or(1.0))?,
        target,
    })
}
