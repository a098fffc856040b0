use std::f64::consts::FRAC_1_SQRT_2;

use qsl_disturb::presets::{calibrated_t_a, Recipe, Study, SweepRange};
use qsl_disturb::{DisturbanceConfig, Error, ModelConfig, QubitState, SpectralDensity};

use crate::args::{BathKind, RunArgs};
use crate::UsageError;

/// Map a core error to a usage error naming the flag it came from.
pub fn usage(err: Error, steps_flag: &str) -> anyhow::Error {
    let flag = match &err {
        Error::InvalidParameter { name, .. } => match *name {
            "t_a" => "--ta".to_string(),
            "n_steps" => steps_flag.to_string(),
            "bloch" | "rho_ee" | "rho_eg" => "--r1/--r2/--r3".to_string(),
            "sweep value" => "--sweep".to_string(),
            other => format!("--{}", other.replace('_', "-")),
        },
        Error::UnknownAxis(_) | Error::AxisNotApplicable { .. } => "--sweep".to_string(),
        _ => return err.into(),
    };
    UsageError(format!("{flag}: {err}")).into()
}

fn bath_kind(args: &RunArgs, recipe: Option<&Recipe>) -> BathKind {
    if let Some(kind) = args.bath {
        return kind;
    }
    if let Some(r) = recipe {
        return match r.cfg.bath {
            SpectralDensity::Ohmic { .. } => BathKind::Ohmic,
            SpectralDensity::Lorentzian { .. } => BathKind::Lorentzian,
        };
    }
    let lorentzian = [args.gamma, args.lambda, args.delta, args.delta_over_lambda];
    if lorentzian.iter().any(Option::is_some) {
        BathKind::Lorentzian
    } else {
        BathKind::Ohmic
    }
}

pub fn bath(args: &RunArgs, recipe: Option<&Recipe>) -> anyhow::Result<SpectralDensity> {
    let kind = bath_kind(args, recipe);
    let foreign: &[(&str, Option<f64>)] = match kind {
        BathKind::Ohmic => &[
            ("--gamma", args.gamma),
            ("--lambda", args.lambda),
            ("--delta", args.delta),
            ("--delta-over-lambda", args.delta_over_lambda),
        ],
        BathKind::Lorentzian => &[("--eta", args.eta), ("--s", args.s), ("--omega-c", args.omega_c)],
    };
    if let Some((flag, _)) = foreign.iter().find(|(_, v)| v.is_some()) {
        let other = match kind {
            BathKind::Ohmic => "lorentzian",
            BathKind::Lorentzian => "ohmic",
        };
        return Err(UsageError(format!("{flag} applies to --bath {other} only")).into());
    }

    let base = recipe.map(|r| r.cfg.bath);
    let bath = match kind {
        BathKind::Ohmic => {
            let (eta, s, omega_c) = match base {
                Some(SpectralDensity::Ohmic { eta, s, omega_c }) => (eta, s, omega_c),
                _ => (1.0, 1.0, 1.0),
            };
            SpectralDensity::Ohmic {
                eta: args.eta.unwrap_or(eta),
                s: args.s.unwrap_or(s),
                omega_c: args.omega_c.unwrap_or(omega_c),
            }
        }
        BathKind::Lorentzian => {
            let (gamma, lambda, ratio) = match base {
                Some(SpectralDensity::Lorentzian { gamma, lambda, delta }) => (gamma, lambda, delta / lambda),
                _ => (10.0, 1.0, 1.0),
            };
            let lambda = args.lambda.unwrap_or(lambda);
            SpectralDensity::Lorentzian {
                gamma: args.gamma.unwrap_or(gamma),
                lambda,
                delta: args.delta.unwrap_or(args.delta_over_lambda.unwrap_or(ratio) * lambda),
            }
        }
    };
    bath.validate().map_err(|e| usage(e, "--n-steps"))?;
    Ok(bath)
}

pub fn model(args: &RunArgs, recipe: Option<&Recipe>) -> anyhow::Result<ModelConfig> {
    let bath = bath(args, recipe)?;
    let preset_dist = recipe.map(|r| r.cfg.dist).filter(|d| d.enabled);
    let sz_a = args.sz_a.or(preset_dist.map(|d| d.sz_a));
    if args.ta.is_some() && sz_a.is_none() {
        return Err(UsageError("--ta requires --sz-a".into()).into());
    }
    let dist = DisturbanceConfig {
        enabled: sz_a.is_some(),
        t_a: args.ta.unwrap_or_else(|| calibrated_t_a(&bath)),
        sz_a: sz_a.unwrap_or(1.0),
    };
    let cfg = ModelConfig::new(bath, dist).with_omega_s(args.omega_s.unwrap_or(0.0));
    cfg.validate().map_err(|e| usage(e, "--n-steps"))?;
    Ok(cfg)
}

pub fn initial_state(args: &RunArgs) -> anyhow::Result<QubitState> {
    let given = [args.r1, args.r2, args.r3];
    let state = if given.iter().all(Option::is_none) {
        QubitState::from_bloch(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0)
    } else {
        QubitState::from_bloch(args.r1.unwrap_or(0.0), args.r2.unwrap_or(0.0), args.r3.unwrap_or(0.0))
    };
    state.map_err(|e| usage(e, "--n-steps"))
}

/// Parse `name:start:stop:step`.
pub fn sweep_spec(spec: &str) -> anyhow::Result<(String, SweepRange)> {
    let bad = |why: String| -> anyhow::Error { UsageError(format!("--sweep `{spec}`: {why}")).into() };
    let parts: Vec<&str> = spec.split(':').collect();
    let [name, start, stop, step] = parts[..] else {
        return Err(bad("expected name:start:stop:step".into()));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("`{s}` is not a number")))
    };
    let range = SweepRange::new(num(start)?, num(stop)?, num(step)?).map_err(|e| bad(e.to_string()))?;
    Ok((name.trim().to_string(), range))
}

/// The sweep to run: explicit flag first, then the preset's.
pub fn sweep(args: &RunArgs, recipe: Option<&Recipe>) -> anyhow::Result<Option<(String, SweepRange)>> {
    if let Some(spec) = &args.sweep {
        return sweep_spec(spec).map(Some);
    }
    Ok(recipe.map(|r| match r.study {
        Study::NonMarkovianity { axis, range } => (axis.name().to_string(), range),
        Study::SpeedLimit { taus, .. } => ("tau".to_string(), taus),
    }))
}

pub fn positive(value: f64, flag: &str) -> anyhow::Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(UsageError(format!("{flag}: must be finite and > 0, got {value}")).into())
    }
}
