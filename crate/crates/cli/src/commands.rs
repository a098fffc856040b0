use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use rayon::prelude::*;

use qsl_disturb::calibration::{calibrate, coupling_onset_targets};
use qsl_disturb::nonmarkov::{self, measure, measure_from_trajectory, SweepAxis, DEFAULT_N_STEPS, DEFAULT_T_MAX};
use qsl_disturb::output::{fmt_float, fmt_opt};
use qsl_disturb::presets::{Recipe, Study};
use qsl_disturb::qsl::{qsl_table, write_qsl_csv, Route, DEFAULT_QSL_STEPS};
use qsl_disturb::quadrature::QuadratureSettings;
use qsl_disturb::spectral::{oracle_quadrature, oracle_quadrature_with};
use qsl_disturb::{coherence_trajectory, g_real, psi, Domain, Kernel, ModelConfig, SpectralDensity};

use crate::args::{CalibrateArgs, RunArgs, ValidateArgs};
use crate::model::{self, positive, usage};
use crate::plot::{self, Curve};
use crate::UsageError;

/// Numerical warnings collected during a run.
#[derive(Debug, Default)]
pub struct Report {
    pub warnings: Vec<String>,
}

fn open(out: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_plot(csv: &Path, xlabel: &str, ylabel: &str, curves: &[Curve]) -> anyhow::Result<()> {
    let path = plot::script_path(csv);
    fs::write(&path, plot::script(csv, xlabel, ylabel, curves))
        .with_context(|| format!("writing {}", path.display()))?;
    eprintln!("plot script: {}", path.display());
    Ok(())
}

fn recipe(args: &RunArgs) -> Option<Recipe> {
    args.preset.map(|p| p.recipe())
}

fn grid(args: &RunArgs) -> anyhow::Result<(f64, usize)> {
    let t_max = positive(args.t_max.unwrap_or(DEFAULT_T_MAX), "--t-max")?;
    let n_steps = args.n_steps.unwrap_or(DEFAULT_N_STEPS);
    if n_steps < 2 {
        return Err(UsageError(format!("--n-steps: must be >= 2, got {n_steps}")).into());
    }
    Ok((t_max, n_steps))
}

fn needs_out(args: &RunArgs, what: &str) -> anyhow::Result<PathBuf> {
    args.out
        .clone()
        .ok_or_else(|| UsageError(format!("{what} requires --out")).into())
}

fn reference_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}_reference.csv"))
}

pub fn traj(args: &RunArgs) -> anyhow::Result<Report> {
    let recipe = recipe(args);
    let cfg = model::model(args, recipe.as_ref())?;
    let initial = model::initial_state(args)?;
    let (t_max, n_steps) = grid(args)?;
    if args.sweep.is_some() {
        return Err(UsageError("--sweep does not apply to traj".into()).into());
    }
    let out = if args.paired || args.plot {
        Some(needs_out(
            args,
            if args.paired { "--paired with traj" } else { "--plot" },
        )?)
    } else {
        args.out.clone()
    };

    let traj = coherence_trajectory(&cfg, &initial, t_max, n_steps).map_err(|e| usage(e, "--n-steps"))?;
    traj.write_csv(open(out.as_deref())?)?;
    let n = measure_from_trajectory(&traj)?;
    eprintln!(
        "coherence remaining C(t_max)/C(0) = {:.6e}; positive variation of C = {:.6e}",
        n.coherence_remaining, n.n_value
    );

    let mut curves = Vec::new();
    if let Some(out) = &out {
        curves.push(Curve::solid(out, 1, 7, "with disturbance"));
        if args.paired {
            let path = reference_path(out);
            let reference = coherence_trajectory(&cfg.without_disturbance(), &initial, t_max, n_steps)?;
            reference.write_csv(open(Some(&path))?)?;
            eprintln!("reference trajectory: {}", path.display());
            curves.push(Curve::dashed(&path, 1, 7, "without disturbance"));
        }
        if args.plot {
            write_plot(out, "t", "C_{l1}", &curves)?;
        }
    }
    Ok(Report::default())
}

fn reference_sweep(
    cfg: &ModelConfig,
    axis: SweepAxis,
    values: &[f64],
    t_max: f64,
    n_steps: usize,
) -> anyhow::Result<Vec<(f64, nonmarkov::NonMarkovResult)>> {
    values
        .par_iter()
        .map(|&v| {
            let point = axis.apply(cfg, v)?.without_disturbance();
            Ok((v, measure(&point, t_max, n_steps)?))
        })
        .collect()
}

pub fn nonmark(args: &RunArgs) -> anyhow::Result<Report> {
    let recipe = recipe(args);
    if let Some(Recipe {
        study: Study::SpeedLimit { .. },
        ..
    }) = recipe
    {
        return Err(UsageError(format!(
            "--preset {} is a speed-limit recipe; use `qsl`",
            args.preset.unwrap()
        ))
        .into());
    }
    let cfg = model::model(args, recipe.as_ref())?;
    let (t_max, n_steps) = grid(args)?;
    if args.plot {
        needs_out(args, "--plot")?;
    }

    let Some((name, range)) = model::sweep(args, recipe.as_ref())? else {
        if args.out.is_some() || args.plot {
            return Err(UsageError("nonmark writes CSV only for a sweep; add --sweep".into()).into());
        }
        let r = measure(&cfg, t_max, n_steps)?;
        println!("n_value = {}", fmt_float(r.n_value));
        println!("n_revivals = {}", r.n_revivals());
        println!("coherence_remaining = {}", fmt_float(r.coherence_remaining));
        if args.paired {
            let reference = measure(&cfg.without_disturbance(), t_max, n_steps)?;
            println!("n_value_reference = {}", fmt_float(reference.n_value));
            println!("n_revivals_reference = {}", reference.n_revivals());
        }
        return Ok(Report::default());
    };

    let axis: SweepAxis = name.parse().map_err(|e| usage(e, "--n-steps"))?;
    let values = range.values();
    let rows = nonmarkov::sweep(&cfg, axis, &values, t_max, n_steps).map_err(|e| usage(e, "--n-steps"))?;
    let reference = if args.paired {
        Some(reference_sweep(&cfg, axis, &values, t_max, n_steps)?)
    } else {
        None
    };
    nonmarkov::write_sweep_csv(open(args.out.as_deref())?, &rows, reference.as_deref())?;

    let show = |v: Option<f64>| v.map_or("none".to_string(), |v| format!("{axis} = {v}"));
    eprintln!(
        "{} points, {axis} step {}, dt = {}",
        values.len(),
        range.step,
        t_max / n_steps as f64
    );
    eprintln!("onset (N > 1e-6): {}", show(nonmarkov::onset(&rows)));
    if let Some(reference) = &reference {
        eprintln!("onset without disturbance: {}", show(nonmarkov::onset(reference)));
    }
    let remaining = rows.iter().map(|(_, r)| r.coherence_remaining);
    let (lo, hi) = remaining.fold((f64::INFINITY, 0.0f64), |(lo, hi), c| (lo.min(c), hi.max(c)));
    eprintln!("coherence remaining at t_max = {t_max}: {lo:.3e} .. {hi:.3e}");

    if args.plot {
        let out = needs_out(args, "--plot")?;
        let mut curves = vec![Curve::solid(&out, 1, 2, "with disturbance")];
        if reference.is_some() {
            curves.push(Curve::dashed(&out, 1, 5, "without disturbance"));
        }
        write_plot(&out, axis.name(), "N", &curves)?;
    }
    Ok(Report::default())
}

pub fn qsl(args: &RunArgs) -> anyhow::Result<Report> {
    let recipe = recipe(args);
    let mut tau_d = 1.0;
    match recipe {
        Some(Recipe {
            study: Study::NonMarkovianity { .. },
            ..
        }) => {
            return Err(UsageError(format!(
                "--preset {} is a non-Markovianity recipe; use `nonmark`",
                args.preset.unwrap()
            ))
            .into())
        }
        Some(Recipe {
            study: Study::SpeedLimit { tau_d: d, .. },
            ..
        }) => tau_d = d,
        None => {}
    }
    let cfg = model::model(args, recipe.as_ref())?;
    let initial = model::initial_state(args)?;
    let tau_d = positive(args.tau_d.unwrap_or(tau_d), "--tau-d")?;
    let steps = args.qsl_steps.unwrap_or(DEFAULT_QSL_STEPS);
    if args.plot {
        needs_out(args, "--plot")?;
    }

    let taus = match model::sweep(args, recipe.as_ref())? {
        Some((name, range)) if name == "tau" => range.values(),
        Some((name, _)) => return Err(UsageError(format!("--sweep: qsl sweeps `tau`, not `{name}`")).into()),
        None => {
            let tau = args.tau.unwrap_or(0.0);
            if !(tau >= 0.0 && tau.is_finite()) {
                return Err(UsageError(format!("--tau: must be finite and >= 0, got {tau}")).into());
            }
            vec![tau]
        }
    };
    if taus.iter().any(|&t| t < 0.0) {
        return Err(UsageError("--sweep: tau must be >= 0".into()).into());
    }

    let rows = qsl_table(&cfg, &initial, &taus, tau_d, steps, args.paired).map_err(|e| usage(e, "--qsl-steps"))?;
    let route: Route = args.route.map(Into::into).unwrap_or_default();
    write_qsl_csv(open(args.out.as_deref())?, &rows, route)?;

    let mut report = Report::default();
    let frozen = rows.iter().filter(|r| r.generic.frozen).count();
    let exceeding = rows
        .iter()
        .filter(|r| {
            r.tau_qsl(route) > tau_d * (1.0 + 1e-9)
                || r.reference_tau_qsl(route).is_some_and(|v| v > tau_d * (1.0 + 1e-9))
        })
        .count();
    if frozen > 0 {
        report.warnings.push(format!(
            "{frozen} window(s) with frozen dynamics; tau_qsl reported as 0"
        ));
    }
    if exceeding > 0 {
        report
            .warnings
            .push(format!("{exceeding} window(s) with tau_qsl > tau_D"));
    }

    let mean = |f: &dyn Fn(&qsl_disturb::qsl::QslRow) -> f64| rows.iter().map(f).sum::<f64>() / rows.len() as f64;
    eprintln!(
        "{} window(s), tau_D = {tau_d}, {steps} panels per window, route {route:?}",
        rows.len()
    );
    eprintln!("mean tau_qsl = {:.6e}", mean(&|r| r.tau_qsl(route)));
    if args.paired {
        let below = rows
            .iter()
            .filter(|r| r.tau_qsl(route) <= r.reference_tau_qsl(route).unwrap_or(f64::INFINITY) + 1e-9)
            .count();
        eprintln!(
            "mean tau_qsl without disturbance = {:.6e}; disturbed <= undisturbed at {below}/{} windows",
            mean(&|r| r.reference_tau_qsl(route).unwrap_or(0.0)),
            rows.len()
        );
    }

    if args.plot {
        let out = needs_out(args, "--plot")?;
        let mut curves = vec![Curve::solid(&out, 1, 2, "with disturbance")];
        if args.paired {
            curves.push(Curve::dashed(&out, 1, 3, "without disturbance"));
        }
        write_plot(&out, "tau", "tau_{QSL}", &curves)?;
    }
    Ok(report)
}

/// Returns whether every Ohmic case passed.
pub fn validate(_args: &ValidateArgs) -> anyhow::Result<(bool, Report)> {
    const TIMES: [f64; 6] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
    let rel = |a: f64, b: f64| if a == b { 0.0 } else { (a - b).abs() / b.abs() };
    let mut ok = true;
    for s in [0.5, 1.0, 2.0, 3.0] {
        for eta in [0.5, 1.0, 5.0] {
            let bath = SpectralDensity::ohmic(eta, s, 1.0)?;
            let mut worst: f64 = 0.0;
            for t in TIMES {
                worst = worst
                    .max(rel(g_real(&bath, t)?, oracle_quadrature(&bath, Kernel::GReal, t)?))
                    .max(rel(psi(&bath, t)?, oracle_quadrature(&bath, Kernel::Psi, t)?));
            }
            let pass = worst < 1e-6;
            ok &= pass;
            println!(
                "ohmic s={s} eta={eta} max_rel_err={worst:.3e} {}",
                if pass { "ok" } else { "FAIL" }
            );
        }
    }

    let mut report = Report::default();
    let settings = QuadratureSettings::default();
    for delta in [1.0, 5.0] {
        let bath = SpectralDensity::lorentzian(10.0, 1.0, delta)?;
        let mut worst: f64 = 0.0;
        for k in 1..=100 {
            let t = k as f64 * 0.1;
            worst = worst
                .max(rel(
                    g_real(&bath, t)?,
                    oracle_quadrature_with(&bath, Kernel::GReal, t, Domain::FullLine, &settings)?,
                ))
                .max(rel(
                    psi(&bath, t)?,
                    oracle_quadrature_with(&bath, Kernel::Psi, t, Domain::FullLine, &settings)?,
                ));
        }
        println!("lorentzian gamma=10 lambda=1 delta={delta} full-line max_rel_err={worst:.3e}");
        if worst >= 1e-3 {
            report.warnings.push(format!(
                "Lorentzian delta={delta} disagrees with quadrature ({worst:.3e})"
            ));
        }
    }
    Ok((ok, report))
}

pub fn run_calibrate(args: &CalibrateArgs) -> anyhow::Result<Report> {
    let (_, range) = model::sweep_spec(&format!("ta:{}", args.ta_range))
        .map_err(|_| UsageError(format!("--ta-range `{}`: expected start:stop:step", args.ta_range)))?;
    let candidates = range.values();
    if candidates.iter().any(|&t| t < 0.0) {
        return Err(UsageError("--ta-range: values must be >= 0".into()).into());
    }
    positive(args.t_max, "--t-max")?;
    let targets = coupling_onset_targets();
    let report = calibrate(&targets, &candidates, args.tolerance, args.t_max, args.n_steps)
        .map_err(|e| usage(e, "--n-steps"))?;

    let mut out = csv::Writer::from_writer(open(args.out.as_deref())?);
    let mut header = vec!["t_a".to_string()];
    header.extend(report.labels.iter().map(|l| format!("onset_{l}")));
    out.write_record(&header)?;
    for row in &report.rows {
        let mut record = vec![fmt_float(row.t_a)];
        record.extend(row.onsets.iter().map(|&o| fmt_opt(o)));
        out.write_record(&record)?;
    }
    out.flush()?;

    for (k, label) in report.labels.iter().enumerate() {
        eprintln!(
            "{label} (reported {}): T_A within +-{} at {:?}",
            report.expected[k],
            args.tolerance,
            report.matching_t_a(k)
        );
    }
    let all: Vec<usize> = (0..targets.len()).collect();
    eprintln!("common T_A for the Ohmic targets: {:?}", report.common_t_a(&[0, 1, 2]));
    eprintln!("common T_A for all targets: {:?}", report.common_t_a(&all));
    Ok(Report::default())
}
