//! Parameter sweeps behind `duality run`. Points are evaluated on the rayon
//! pool; rayon's indexed `collect` keeps grid order, so artifacts do not
//! depend on the worker count.
//!
//! Column conventions: angles in radians, `port` is 0-based, `seed` is the
//! seed of the Poisson draw on that row.

use std::path::PathBuf;

use duality_core::bsgen::PhaseArray;
use duality_core::delayed_choice::{
    classical_distribution, quantum_distribution, sample_counts, simulate_full, ControlSetting, FringeSetup,
    InterferometerConfig, PortDistribution,
};
use duality_core::metrics::{
    analytic_compensation, chsh_value, find_prime_maximum, l1_coherence, measurement_density, min_entropy,
    operational_diagonal, pearson_distance, ChshSettings, Compensation, DualityReport, Family,
};
use duality_core::qcore::{DensityMatrix, StateVector};
use duality_core::sorkin::{run_batch, SorkinRun, PATHS};
use duality_core::C64;
use rayon::prelude::*;

use crate::config::{ExperimentSpec, FamilyChoice, OutputFormat, Scenario};
use crate::io::{artifact_path, duality_cells, sorkin_table, write_text, Table, DUALITY_COLUMNS};
use crate::plot::{heatmap, line_plot};
use crate::Result;

/// Tables and rendered plots of one run, before anything touches disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub tables: Vec<Table>,
    /// `(file stem, SVG document)`.
    pub plots: Vec<(String, String)>,
}

fn families(choice: FamilyChoice) -> Vec<Family> {
    match choice {
        FamilyChoice::Quantum => vec![Family::Quantum],
        FamilyChoice::Classical => vec![Family::Classical],
        FamilyChoice::Both => vec![Family::Quantum, Family::Classical],
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Quantum => "quantum",
        Family::Classical => "classical",
    }
}

fn config(spec: &ExperimentSpec, d: usize, alpha: f64, delta: f64, theta: f64) -> Result<InterferometerConfig> {
    Ok(InterferometerConfig::ramp(d, alpha, delta, theta)?.with_source_noise(spec.source_noise)?)
}

/// Validates `spec` and computes its artifacts.
pub fn evaluate(spec: &ExperimentSpec) -> Result<Artifacts> {
    spec.validate()?;
    match spec.scenario {
        Scenario::Transition => transition(spec),
        Scenario::Duality => duality(spec),
        Scenario::Fringe => fringe(spec),
        Scenario::Sorkin => sorkin(spec),
        Scenario::Randomness => randomness(spec),
        Scenario::Bell => bell(spec),
        Scenario::Pearson => pearson(spec),
    }
}

/// Evaluates `spec` and writes one file per table and format into the
/// resolved output directory. Returns the written paths in order.
pub fn run(spec: &ExperimentSpec) -> Result<Vec<PathBuf>> {
    let artifacts = evaluate(spec)?;
    let dir = spec.resolved_output_dir();
    let mut written = Vec::new();
    for format in &spec.formats {
        match format {
            OutputFormat::Csv => {
                for t in &artifacts.tables {
                    let p = artifact_path(&dir, &t.name, "csv");
                    write_text(&p, &t.to_csv())?;
                    written.push(p);
                }
            }
            OutputFormat::Json => {
                for t in &artifacts.tables {
                    let p = artifact_path(&dir, &t.name, "json");
                    write_text(&p, &t.to_json())?;
                    written.push(p);
                }
            }
            OutputFormat::Svg => {
                for (name, svg) in &artifacts.plots {
                    let p = artifact_path(&dir, name, "svg");
                    write_text(&p, svg)?;
                    written.push(p);
                }
            }
        }
    }
    Ok(written)
}

fn transition(spec: &ExperimentSpec) -> Result<Artifacts> {
    let d = spec.d;
    let (alphas, deltas, thetas) = (spec.alpha.points(), spec.delta.points(), spec.theta.points());
    let fams = families(spec.family);
    let mut points = Vec::new();
    for &f in &fams {
        for &delta in &deltas {
            for &alpha in &alphas {
                for &theta in &thetas {
                    points.push((f, alpha, delta, theta));
                }
            }
        }
    }
    let results: Vec<(PortDistribution, Vec<u64>)> = points
        .par_iter()
        .enumerate()
        .map(|(i, &(f, alpha, delta, theta))| {
            let dist = simulate_full(&config(spec, d, alpha, delta, theta)?, f.herald())?;
            let counts = sample_counts(&dist, spec.mean_total, spec.seed.wrapping_add(i as u64))?.counts;
            Ok((dist, counts))
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(
        "transition",
        &["d", "family", "alpha", "delta", "theta", "port", "probability", "counts", "seed"],
    );
    for (i, (&(f, alpha, delta, theta), (dist, counts))) in points.iter().zip(&results).enumerate() {
        let seed = spec.seed.wrapping_add(i as u64);
        for (port, (&p, &n)) in dist.probabilities().iter().zip(counts).enumerate() {
            table.push(vec![
                d.into(),
                family_name(f).into(),
                alpha.into(),
                delta.into(),
                theta.into(),
                port.into(),
                p.into(),
                n.into(),
                seed.into(),
            ]);
        }
    }

    // Port-0 surface over (θ, α) at the first δ of each family.
    let mut plots = Vec::new();
    let per_family = deltas.len() * alphas.len() * thetas.len();
    for (k, &f) in fams.iter().enumerate() {
        let block = &results[k * per_family..k * per_family + alphas.len() * thetas.len()];
        let values: Vec<Vec<f64>> = block
            .chunks(thetas.len())
            .map(|row| row.iter().map(|(dist, _)| dist.probabilities()[0]).collect())
            .collect();
        let title = format!("{} transition, d = {d}, δ = {:.3}, port 0", family_name(f), deltas[0]);
        plots.push((
            format!("transition_{}", family_name(f)),
            heatmap(&title, "θ (rad)", "α (rad)", &thetas, &alphas, &values),
        ));
    }
    Ok(Artifacts {
        tables: vec![table],
        plots,
    })
}

fn compensation_for(family: Family, cfg: &InterferometerConfig) -> Result<Compensation> {
    Ok(match family {
        // With source noise the incoherent part moves the peak, so scan.
        Family::Quantum if cfg.source_noise() > 0.0 => Compensation::NumericScan,
        Family::Quantum => Compensation::Analytic(analytic_compensation(cfg.d(), cfg.control())?),
        Family::Classical => Compensation::Analytic(PhaseArray::zeros(cfg.d())?),
    })
}

fn duality(spec: &ExperimentSpec) -> Result<Artifacts> {
    let d = spec.d;
    let (alphas, deltas) = (spec.alpha.points(), spec.delta.points());
    let fams = families(spec.family);
    let mut points = Vec::new();
    for &f in &fams {
        for &delta in &deltas {
            for &alpha in &alphas {
                points.push((f, alpha, delta));
            }
        }
    }
    let reports: Vec<(DualityReport, DualityReport)> = points
        .par_iter()
        .map(|&(f, alpha, delta)| {
            let cfg = config(spec, d, alpha, delta, std::f64::consts::PI)?;
            let density = DualityReport::from_density(&measurement_density(&cfg, f, 0)?)?;
            let probe = FringeSetup::new(cfg.clone(), f.herald(), 0)?;
            let scan = find_prime_maximum(&probe, compensation_for(f, &cfg)?)?;
            let fringe = DualityReport::from_fringe(&scan, &operational_diagonal(&probe)?)?;
            Ok((density, fringe))
        })
        .collect::<Result<_>>()?;

    let mut columns = vec!["d", "family", "alpha", "delta"];
    columns.extend(&DUALITY_COLUMNS[1..]);
    let mut table = Table::new("duality", &columns);
    for (&(f, alpha, delta), (a, b)) in points.iter().zip(&reports) {
        for r in [a, b] {
            let mut row = vec![d.into(), family_name(f).into(), alpha.into(), delta.into()];
            row.extend(duality_cells(r).into_iter().skip(1));
            table.push(row);
        }
    }

    let mut series = Vec::new();
    for (k, &f) in fams.iter().enumerate() {
        let block = &reports[k * deltas.len() * alphas.len()..][..alphas.len()];
        let name = family_name(f);
        let curve = |g: &dyn Fn(&(DualityReport, DualityReport)) -> f64| -> Vec<(f64, f64)> {
            alphas.iter().zip(block).map(|(&a, r)| (a, g(r))).collect()
        };
        series.push((format!("C²+D² {name}"), curve(&|r| r.0.c2_plus_d2())));
        series.push((format!("C {name}"), curve(&|r| r.0.coherence)));
        series.push((format!("D {name}"), curve(&|r| r.0.distinguishability)));
        series.push((format!("V fringe {name}"), curve(&|r| r.1.visibility)));
    }
    let title = format!("duality, d = {d}, δ = {:.3}", deltas[0]);
    Ok(Artifacts {
        tables: vec![table],
        plots: vec![("duality".into(), line_plot(&title, "α (rad)", "value", &series))],
    })
}

struct FringeResult {
    intensities: Vec<f64>,
    i_max: f64,
    i_inc: f64,
    visibility: f64,
    coherence: f64,
    distinguishability: f64,
}

fn fringe(spec: &ExperimentSpec) -> Result<Artifacts> {
    let d = spec.d;
    let (alphas, deltas, thetas) = (spec.alpha.points(), spec.delta.points(), spec.theta.points());
    let fams = families(spec.family);
    let mut points = Vec::new();
    for &f in &fams {
        for &delta in &deltas {
            for &alpha in &alphas {
                points.push((f, alpha, delta));
            }
        }
    }
    let results: Vec<FringeResult> = points
        .par_iter()
        .map(|&(f, alpha, delta)| {
            let cfg = InterferometerConfig::ideal(d)?
                .with_control(ControlSetting::new(alpha, delta)?)
                .with_source_noise(spec.source_noise)?;
            let rho = measurement_density(&cfg, f, 0)?;
            let probe = FringeSetup::new(cfg.clone(), f.herald(), 0)?;
            let scan = find_prime_maximum(&probe, compensation_for(f, &cfg)?)?;
            let report = DualityReport::from_fringe(&scan, &operational_diagonal(&probe)?)?;
            let q_total: f64 = (0..d).map(|i| probe.single_path_probability(i)).sum::<std::result::Result<f64, _>>()?;
            // Common ramp `kθ` on top of the compensating setting.
            let base = scan.argmax.phases().to_vec();
            let intensities = thetas
                .iter()
                .map(|&t| {
                    let phases: Vec<f64> = base.iter().enumerate().map(|(k, b)| b + k as f64 * t).collect();
                    Ok(probe.port_probability(&PhaseArray::new(phases)?)? / (d as f64 * q_total))
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(FringeResult {
                intensities,
                i_max: scan.i_max,
                i_inc: scan.i_inc,
                visibility: report.visibility,
                coherence: l1_coherence(&rho, false),
                distinguishability: report.distinguishability,
            })
        })
        .collect::<Result<_>>()?;

    let mut curve = Table::new("fringe", &["d", "family", "alpha", "delta", "theta", "port", "intensity"]);
    let mut summary = Table::new(
        "fringe_summary",
        &[
            "d",
            "family",
            "alpha",
            "delta",
            "port",
            "i_max",
            "i_inc",
            "visibility",
            "l1_coherence",
            "l1_coherence_normalized",
            "distinguishability",
        ],
    );
    for (&(f, alpha, delta), r) in points.iter().zip(&results) {
        for (&theta, &i) in thetas.iter().zip(&r.intensities) {
            curve.push(vec![
                d.into(),
                family_name(f).into(),
                alpha.into(),
                delta.into(),
                theta.into(),
                0usize.into(),
                i.into(),
            ]);
        }
        summary.push(vec![
            d.into(),
            family_name(f).into(),
            alpha.into(),
            delta.into(),
            0usize.into(),
            r.i_max.into(),
            r.i_inc.into(),
            r.visibility.into(),
            r.coherence.into(),
            (r.coherence / (d - 1) as f64).into(),
            r.distinguishability.into(),
        ]);
    }
    let series: Vec<(String, Vec<(f64, f64)>)> = points
        .iter()
        .zip(&results)
        .take(8)
        .map(|(&(f, alpha, _), r)| {
            (
                format!("{} α={alpha:.3}", family_name(f)),
                thetas.iter().copied().zip(r.intensities.iter().copied()).collect(),
            )
        })
        .collect();
    let title = format!("multipath fringe, d = {d}, port 0");
    Ok(Artifacts {
        tables: vec![curve, summary],
        plots: vec![("fringe".into(), line_plot(&title, "ramp θ (rad)", "I / (d·ΣI_i)", &series))],
    })
}

fn sorkin(spec: &ExperimentSpec) -> Result<Artifacts> {
    let run = SorkinRun {
        phases: PhaseArray::zeros(PATHS)?,
        leakage: spec.leakage,
        mean_total: spec.mean_total,
        seed: spec.seed,
        trials: spec.trials,
    };
    let report = run_batch(&run)?;
    let kappas: Vec<(f64, f64)> = report
        .trials
        .iter()
        .enumerate()
        .map(|(i, t)| (i as f64, t.terms.kappa))
        .collect();
    let n = kappas.len() as f64;
    let series = vec![
        ("κ per trial".to_string(), kappas),
        ("κ mean".to_string(), vec![(0.0, report.kappa_mean), (n - 1.0, report.kappa_mean)]),
        ("κ exact".to_string(), vec![(0.0, report.exact.kappa), (n - 1.0, report.exact.kappa)]),
    ];
    let title = format!("Sorkin parameter, ε = {}, mean {}", spec.leakage, spec.mean_total);
    Ok(Artifacts {
        tables: vec![sorkin_table(&report)],
        plots: vec![("sorkin".into(), line_plot(&title, "trial", "κ", &series))],
    })
}

/// Empirical `H_min` of Poisson counts; `None` when nothing was counted.
pub fn empirical_min_entropy(counts: &[u64]) -> Option<f64> {
    let total: u64 = counts.iter().sum();
    let max = *counts.iter().max()?;
    (total > 0).then(|| -((max as f64) / total as f64).log2())
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, v.sqrt())
}

fn randomness(spec: &ExperimentSpec) -> Result<Artifacts> {
    let d = spec.d;
    let (alphas, deltas, thetas) = (spec.alpha.points(), spec.delta.points(), spec.theta.points());
    let fams = families(spec.family);
    let mut points = Vec::new();
    for &f in &fams {
        for &delta in &deltas {
            for &alpha in &alphas {
                for &theta in &thetas {
                    points.push((f, alpha, delta, theta));
                }
            }
        }
    }
    let trials = spec.trials as u64;
    let results: Vec<(f64, f64, f64)> = points
        .par_iter()
        .enumerate()
        .map(|(i, &(f, alpha, delta, theta))| {
            let dist = simulate_full(&config(spec, d, alpha, delta, theta)?, f.herald())?;
            let base = spec.seed.wrapping_add(i as u64 * trials);
            let samples = (0..trials)
                .filter_map(|t| {
                    sample_counts(&dist, spec.mean_total, base.wrapping_add(t))
                        .map(|r| empirical_min_entropy(&r.counts))
                        .transpose()
                })
                .collect::<std::result::Result<Vec<f64>, _>>()?;
            let (m, s) = if samples.is_empty() { (f64::NAN, f64::NAN) } else { mean_std(&samples) };
            Ok((min_entropy(&dist), m, s))
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(
        "randomness",
        &["d", "family", "alpha", "delta", "theta", "h_min", "h_min_sampled_mean", "h_min_sampled_std", "seed", "trials"],
    );
    for (i, (&(f, alpha, delta, theta), &(h, m, s))) in points.iter().zip(&results).enumerate() {
        table.push(vec![
            d.into(),
            family_name(f).into(),
            alpha.into(),
            delta.into(),
            theta.into(),
            h.into(),
            m.into(),
            s.into(),
            spec.seed.wrapping_add(i as u64 * trials).into(),
            trials.into(),
        ]);
    }
    // H_min over α at the first δ and θ of each family.
    let per_family = deltas.len() * alphas.len() * thetas.len();
    let mut series = Vec::new();
    for (k, &f) in fams.iter().enumerate() {
        let pick = |j: usize| &results[k * per_family + j * thetas.len()];
        series.push((
            format!("H_min {}", family_name(f)),
            alphas.iter().enumerate().map(|(j, &a)| (a, pick(j).0)).collect(),
        ));
        series.push((
            format!("sampled {}", family_name(f)),
            alphas.iter().enumerate().map(|(j, &a)| (a, pick(j).1)).collect(),
        ));
    }
    let title = format!("min-entropy, d = {d}, θ = {:.3}", thetas[0]);
    Ok(Artifacts {
        tables: vec![table],
        plots: vec![("randomness".into(), line_plot(&title, "α (rad)", "bits", &series))],
    })
}

fn phi_plus() -> Result<StateVector> {
    let a = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    Ok(StateVector::new(vec![a, z, z, a])?)
}

fn bell(spec: &ExperimentSpec) -> Result<Artifacts> {
    let bell = phi_plus()?;
    let settings = ChshSettings::optimal();
    let mut table = Table::new("bell", &["source_noise", "bell_weight", "fidelity", "chsh", "violates"]);
    let mut curve = Vec::new();
    for p in spec.noise.points() {
        let rho = DensityMatrix::werner(1.0 - p)?;
        let s = chsh_value(&rho, &settings)?;
        table.push(vec![p.into(), (1.0 - p).into(), rho.fidelity(&bell)?.into(), s.into(), (s > 2.0).into()]);
        curve.push((p, s));
    }
    let bound = vec![(curve[0].0, 2.0), (curve[curve.len() - 1].0, 2.0)];
    let series = vec![("S".to_string(), curve), ("classical bound".to_string(), bound)];
    Ok(Artifacts {
        tables: vec![table],
        plots: vec![("bell".into(), line_plot("CHSH value of a Werner source", "noise weight p", "S", &series))],
    })
}

/// Port-0 probabilities of both families over the `(α, θ)` grid.
pub fn transition_surfaces(
    d: usize,
    delta: f64,
    source_noise: f64,
    alphas: &[f64],
    thetas: &[f64],
) -> duality_core::Result<(Vec<f64>, Vec<f64>)> {
    let pts: Vec<(f64, f64)> = alphas.iter().flat_map(|&a| thetas.iter().map(move |&t| (a, t))).collect();
    let pairs: Vec<(f64, f64)> = pts
        .par_iter()
        .map(|&(a, t)| {
            let cfg = InterferometerConfig::ramp(d, a, delta, t)?.with_source_noise(source_noise)?;
            Ok((classical_distribution(&cfg)?.probabilities()[0], quantum_distribution(&cfg)?.probabilities()[0]))
        })
        .collect::<duality_core::Result<_>>()?;
    Ok(pairs.into_iter().unzip())
}

fn pearson(spec: &ExperimentSpec) -> Result<Artifacts> {
    let (alphas, deltas, thetas) = (spec.alpha.points(), spec.delta.points(), spec.theta.points());
    let mut table = Table::new("pearson", &["d", "delta", "points", "pearson_distance"]);
    let mut series = Vec::new();
    for &delta in &deltas {
        let mut curve = Vec::new();
        for &d in &spec.dims {
            let (x, y) = transition_surfaces(d, delta, spec.source_noise, &alphas, &thetas)?;
            let r = pearson_distance(&x, &y)?;
            table.push(vec![d.into(), delta.into(), x.len().into(), r.into()]);
            curve.push((d as f64, r));
        }
        series.push((format!("δ = {delta:.3}"), curve));
    }
    Ok(Artifacts {
        tables: vec![table],
        plots: vec![(
            "pearson".into(),
            line_plot("classical vs quantum transition surfaces", "d", "Pearson distance", &series),
        )],
    })
}
