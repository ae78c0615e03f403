//! The acceptance suite behind `duality verify`. Each criterion reports
//! what it measured, the tolerance it was held to, and its wall time.
//! `Fast` shrinks grids and trial counts; `Full` uses the stated sizes.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use duality_core::bsgen::PhaseArray;
use duality_core::delayed_choice::{
    classical_distribution, quantum_distribution, sample_counts, simulate_full, simulate_with_eraser, Eraser,
    FringeSetup, Herald, InterferometerConfig, PortDistribution, Readout,
};
use duality_core::mesh::{compile, evaluate_unitary, haar_random};
use duality_core::metrics::{
    analytic_compensation, bell_weight_for_fidelity, chsh_value, classical_fidelity, find_prime_maximum,
    l1_coherence, measurement_density, min_entropy, operational_diagonal, pearson_distance, ChshSettings,
    Compensation, DualityReport, Family,
};
use duality_core::qcore::{DensityMatrix, StateVector};
use duality_core::sorkin::{exact_probabilities, kappa, run_batch, SorkinRun, PATHS};
use duality_core::C64;
use rayon::prelude::*;

use crate::scenario::{empirical_min_entropy, transition_surfaces};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Fast,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub suite: Suite,
    /// Eraser used wherever the full simulation is checked against the
    /// closed forms; replace it to confirm the suite catches a wrong one.
    pub eraser: Eraser,
}

impl Options {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            eraser: Eraser::standard(),
        }
    }

    fn full(&self) -> bool {
        self.suite == Suite::Full
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "oracle equivalence"),
    (2, "duality saturation"),
    (3, "visibility equals coherence"),
    (4, "Sorkin parameter"),
    (5, "min-entropy"),
    (6, "CHSH violation"),
    (7, "mesh compiler"),
    (8, "transition fidelity"),
    (9, "Pearson distance"),
    (10, "control-phase physics"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Measured quantities, one `; `-separated clause per check.
    pub measured: String,
    pub tolerance: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{:>2}] {}: {} | tolerance: {} | {:.2} s",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.tolerance,
            self.elapsed.as_secs_f64()
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub results: Vec<CriterionResult>,
    pub elapsed: Duration,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CriterionResult> {
        self.results.iter().filter(|r| !r.passed)
    }
}

/// Outcome of one criterion body before timing is attached.
struct Outcome {
    passed: bool,
    measured: String,
    tolerance: String,
}

type Check = Result<Outcome, String>;

fn err(e: impl fmt::Display) -> String {
    e.to_string()
}

pub fn run_criterion(id: u8, opts: &Options) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .unwrap_or("unknown criterion");
    let start = Instant::now();
    let outcome = match id {
        1 => oracle_equivalence(opts),
        2 => duality_saturation(opts),
        3 => visibility_equals_coherence(opts),
        4 => sorkin(opts),
        5 => randomness(opts),
        6 => bell(opts),
        7 => mesh(opts),
        8 => transition_fidelity(opts),
        9 => pearson(opts),
        10 => delta_physics(opts),
        _ => Err(format!("no criterion {id}")),
    };
    let elapsed = start.elapsed();
    let outcome = outcome.unwrap_or_else(|e| Outcome {
        passed: false,
        measured: format!("error: {e}"),
        tolerance: "-".into(),
    });
    let mut result = CriterionResult {
        id,
        name,
        passed: outcome.passed,
        measured: outcome.measured,
        tolerance: outcome.tolerance,
        elapsed,
    };
    if let Some(budget) = budget(id).filter(|_| opts.full()) {
        result.tolerance.push_str(&format!("; runtime < {} s", budget.as_secs()));
        if elapsed >= budget {
            result.passed = false;
            result.measured.push_str("; runtime budget exceeded");
        }
    }
    result
}

fn budget(id: u8) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(30)),
        4 => Some(Duration::from_secs(60)),
        7 => Some(Duration::from_secs(10)),
        _ => None,
    }
}

/// Runs every criterion in order, handing each result to `on_result` as
/// soon as it is known.
pub fn run_suite_with(opts: &Options, mut on_result: impl FnMut(&CriterionResult)) -> Report {
    let start = Instant::now();
    let results = CRITERIA
        .iter()
        .map(|&(id, _)| {
            let r = run_criterion(id, opts);
            on_result(&r);
            r
        })
        .collect();
    Report {
        suite: opts.suite,
        results,
        elapsed: start.elapsed(),
    }
}

pub fn run_suite(opts: &Options) -> Report {
    run_suite_with(opts, |_| {})
}

/// `n` points from `0` to `2π` inclusive.
fn turn(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 * PI * i as f64 / (n - 1) as f64).collect()
}

const DELTAS: [f64; 3] = [0.0, PI / 2.0, 3.0 * PI / 2.0];

fn oracle_equivalence(opts: &Options) -> Check {
    let (na, nt) = if opts.full() { (17, 33) } else { (9, 9) };
    let mut points = Vec::new();
    for d in [2, 4, 8] {
        for &delta in &DELTAS {
            for &alpha in &turn(na) {
                for &theta in &turn(nt) {
                    points.push((d, alpha, delta, theta));
                }
            }
        }
    }
    let worst: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&(d, alpha, delta, theta)| {
            let cfg = InterferometerConfig::ramp(d, alpha, delta, theta)?;
            let q = simulate_with_eraser(&cfg, Herald::Control1, &opts.eraser)?.max_abs_diff(&quantum_distribution(&cfg)?)?;
            let c = simulate_with_eraser(&cfg, Herald::TraceOut, &opts.eraser)?.max_abs_diff(&classical_distribution(&cfg)?)?;
            Ok((q, c))
        })
        .collect::<duality_core::Result<_>>()
        .map_err(err)?;
    let q = worst.iter().map(|w| w.0).fold(0.0, f64::max);
    let c = worst.iter().map(|w| w.1).fold(0.0, f64::max);
    Ok(Outcome {
        passed: q <= 1e-10 && c <= 1e-10,
        measured: format!("{} settings; max |Δp| quantum {q:.2e}, classical {c:.2e}", points.len()),
        tolerance: "1e-10".into(),
    })
}

fn duality_saturation(opts: &Options) -> Check {
    let na = if opts.full() { 17 } else { 9 };
    // The measurement density does not depend on the path phases, so the
    // θ axis of the grid adds no new states.
    let mut q_worst: f64 = 0.0;
    let mut c_excess: f64 = f64::NEG_INFINITY;
    let mut wrong_equality = Vec::new();
    for d in [2, 4, 8] {
        for &delta in &DELTAS {
            for &alpha in &turn(na) {
                let cfg = InterferometerConfig::ramp(d, alpha, delta, PI).map_err(err)?;
                let q = DualityReport::from_density(&measurement_density(&cfg, Family::Quantum, 0).map_err(err)?)
                    .map_err(err)?;
                q_worst = q_worst.max((q.c2_plus_d2() - 1.0).abs());
                let c = DualityReport::from_density(&measurement_density(&cfg, Family::Classical, 0).map_err(err)?)
                    .map_err(err)?;
                c_excess = c_excess.max(c.c2_plus_d2() - 1.0);
                let pure_point = [0.0, PI, 2.0 * PI].iter().any(|a| (alpha - a).abs() < 1e-12);
                if ((c.c2_plus_d2() - 1.0).abs() <= 1e-9) != pure_point {
                    wrong_equality.push(format!("d={d} α={alpha:.4}"));
                }
            }
        }
    }
    let cfg = InterferometerConfig::ramp(2, PI / 2.0, 0.0, PI).map_err(err)?;
    let half = DualityReport::from_density(&measurement_density(&cfg, Family::Classical, 0).map_err(err)?)
        .map_err(err)?
        .c2_plus_d2();
    Ok(Outcome {
        passed: q_worst < 1e-9 && c_excess <= 1e-9 && wrong_equality.is_empty() && (half - 0.5).abs() <= 1e-9,
        measured: format!(
            "quantum max |C²+D²-1| {q_worst:.2e}; classical max C²+D²-1 {c_excess:.2e}; equality off α∈{{0,π}}: {}; classical d=2 α=π/2: {half:.12}",
            if wrong_equality.is_empty() { "none".to_string() } else { wrong_equality.join(", ") }
        ),
        tolerance: "1e-9".into(),
    })
}

fn fringe_visibility(cfg: &InterferometerConfig, family: Family) -> duality_core::Result<(f64, Vec<f64>)> {
    let probe = FringeSetup::new(cfg.clone(), family.herald(), 0)?;
    let comp = match family {
        Family::Quantum => analytic_compensation(cfg.d(), cfg.control())?,
        Family::Classical => PhaseArray::zeros(cfg.d())?,
    };
    let scan = find_prime_maximum(&probe, Compensation::Analytic(comp))?;
    let diag = operational_diagonal(&probe)?;
    Ok((DualityReport::from_fringe(&scan, &diag)?.visibility, diag))
}

fn visibility_equals_coherence(opts: &Options) -> Check {
    let na = if opts.full() { 17 } else { 9 };
    let mut wave_dev: f64 = 0.0;
    let mut l1_dev: f64 = 0.0;
    let mut sweep_dev: f64 = 0.0;
    let mut match_dev: f64 = 0.0;
    for d in 2..=8 {
        for family in [Family::Quantum, Family::Classical] {
            let cfg = InterferometerConfig::ramp(d, PI, 0.0, PI).map_err(err)?;
            let (v, _) = fringe_visibility(&cfg, family).map_err(err)?;
            wave_dev = wave_dev.max((v - 1.0).abs());
            let rho = measurement_density(&cfg, family, 0).map_err(err)?;
            l1_dev = l1_dev.max((l1_coherence(&rho, false) - (d - 1) as f64).abs());
        }
        for &alpha in &turn(na) {
            let cfg = InterferometerConfig::ramp(d, alpha, 0.0, PI).map_err(err)?;
            let (v, _) = fringe_visibility(&cfg, Family::Classical).map_err(err)?;
            sweep_dev = sweep_dev.max((v - (alpha / 2.0).sin().powi(2)).abs());
            let rho = measurement_density(&cfg, Family::Classical, 0).map_err(err)?;
            match_dev = match_dev.max((v - l1_coherence(&rho, true)).abs());
        }
    }
    Ok(Outcome {
        passed: wave_dev <= 1e-6 && l1_dev <= 1e-6 && sweep_dev <= 1e-6 && match_dev <= 1e-6,
        measured: format!(
            "d=2..8 α=π: max |V-1| {wave_dev:.2e}, max |C_l1-(d-1)| {l1_dev:.2e}; classical sweep: max |V-sin²(α/2)| {sweep_dev:.2e}, max |V-C(ρ)| {match_dev:.2e}"
        ),
        tolerance: "1e-6".into(),
    })
}

fn sorkin(_opts: &Options) -> Check {
    let ideal = kappa(&exact_probabilities(&PhaseArray::zeros(PATHS).map_err(err)?, 0.0).map_err(err)?).map_err(err)?;
    let report = run_batch(&SorkinRun::standard()).map_err(err)?;
    let se = report.kappa_standard_error();
    let consistent = report.kappa_mean.abs() < 3.0 * se;
    let std_ok = (5e-4..=5e-2).contains(&report.kappa_std);
    Ok(Outcome {
        passed: ideal.kappa.abs() <= 1e-12 && consistent && std_ok,
        measured: format!(
            "ideal κ {:.2e}; ε=0.003 10⁴ 60 trials seed 0: κ_mean {:.5} (noise-free {:.5}), κ_std {:.5}, 3·SE {:.5}",
            ideal.kappa, report.kappa_mean, report.exact.kappa, report.kappa_std, 3.0 * se
        ),
        tolerance: "|κ ideal| ≤ 1e-12; |κ_mean| < 3·κ_std/√60; κ_std ∈ [5e-4, 5e-2]".into(),
    })
}

/// Poisson mean per port in the sampled min-entropy check.
pub const COUNTS_PER_PORT: f64 = 1e4;

fn randomness(opts: &Options) -> Check {
    let trials: u64 = if opts.full() { 200 } else { 50 };
    let mut exact_dev: f64 = 0.0;
    let mut worst_fraction: f64 = 1.0;
    let mut fractions = Vec::new();
    for d in 2..=8usize {
        let target = (d as f64).log2();
        // Exactly uniform input gives exactly log₂ d for powers of two.
        let exact = min_entropy(&PortDistribution::uniform(Readout::UpperOnly, d).map_err(err)?);
        if d.is_power_of_two() && exact != target {
            exact_dev = f64::INFINITY;
        }
        let mut uniform = None;
        for theta in [0.0, 0.7, PI, 4.0] {
            let cfg = InterferometerConfig::ramp(d, 0.0, 0.0, theta).map_err(err)?;
            let dist = quantum_distribution(&cfg).map_err(err)?;
            // Phase factors round at the 1e-16 level away from multiples of π.
            exact_dev = exact_dev.max((min_entropy(&dist) - target).abs());
            uniform.get_or_insert(dist);
        }
        let dist = uniform.expect("at least one phase setting");
        let hits = (0..trials)
            .into_par_iter()
            .map(|seed| {
                let rec = sample_counts(&dist, COUNTS_PER_PORT * d as f64, seed)?;
                Ok(empirical_min_entropy(&rec.counts).is_some_and(|h| (h - target).abs() <= 0.05))
            })
            .collect::<duality_core::Result<Vec<bool>>>()
            .map_err(err)?
            .into_iter()
            .filter(|&ok| ok)
            .count();
        let fraction = hits as f64 / trials as f64;
        worst_fraction = worst_fraction.min(fraction);
        fractions.push(format!("{d}:{fraction:.3}"));
    }
    Ok(Outcome {
        passed: exact_dev <= 1e-12 && worst_fraction >= 0.95,
        measured: format!(
            "α=0 max |H_min-log₂d| {exact_dev:.1e}; fraction within 0.05 bits over {trials} trials at {COUNTS_PER_PORT:e} counts/port: {}",
            fractions.join(" ")
        ),
        tolerance: "1e-12 (exact for uniform input at powers of two); ≥ 95% within 0.05 bits".into(),
    })
}

fn product_state(t1: f64, p1: f64, t2: f64, p2: f64) -> duality_core::Result<DensityMatrix> {
    let qubit = |t: f64, p: f64| [C64::new((t / 2.0).cos(), 0.0), C64::from_polar((t / 2.0).sin(), p)];
    let (a, b) = (qubit(t1, p1), qubit(t2, p2));
    let amps = vec![a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
    DensityMatrix::from_pure(&StateVector::new(amps)?)
}

fn bell(_opts: &Options) -> Check {
    let optimal = ChshSettings::optimal();
    let ideal = chsh_value(&DensityMatrix::werner(1.0).map_err(err)?, &optimal).map_err(err)?;
    let weight = bell_weight_for_fidelity(0.962);
    let noisy = chsh_value(&DensityMatrix::werner(weight).map_err(err)?, &optimal).map_err(err)?;
    let sweep: Vec<f64> = (0..=20)
        .map(|k| DensityMatrix::werner(1.0 - k as f64 / 20.0).and_then(|rho| chsh_value(&rho, &optimal)))
        .collect::<duality_core::Result<_>>()
        .map_err(err)?;
    let monotone = sweep.windows(2).all(|w| w[1] < w[0]);
    // Separable inputs: product states on a Bloch grid, the classically
    // correlated mixture and the separable Werner boundary, each against
    // the optimal and a grid of analyzer settings.
    let mut separable = vec![DensityMatrix::werner(1.0 / 3.0).map_err(err)?];
    let grid = [0.0, 0.6, PI / 2.0, 2.0, PI];
    for &t1 in &grid {
        for &t2 in &grid {
            for &p in &[0.0, PI / 2.0] {
                separable.push(product_state(t1, p, t2, 0.0).map_err(err)?);
            }
        }
    }
    let zero = product_state(0.0, 0.0, 0.0, 0.0).map_err(err)?;
    let one = product_state(PI, 0.0, PI, 0.0).map_err(err)?;
    separable.push(DensityMatrix::mixture(&[(0.5, &zero), (0.5, &one)]).map_err(err)?);
    let mut settings = vec![optimal];
    for k in 0..6 {
        let t = k as f64 * PI / 6.0;
        settings.push(ChshSettings {
            a: t,
            a_prime: t + PI / 2.0,
            b: t / 2.0 + PI / 4.0,
            b_prime: t / 3.0 + 3.0 * PI / 4.0,
        });
    }
    let mut sep_max: f64 = 0.0;
    for rho in &separable {
        for s in &settings {
            sep_max = sep_max.max(chsh_value(rho, s).map_err(err)?.abs());
        }
    }
    Ok(Outcome {
        passed: (ideal - 2.0 * 2f64.sqrt()).abs() <= 1e-9 && noisy > 2.0 && monotone && sep_max <= 2.0 + 1e-9,
        measured: format!(
            "ideal S {ideal:.12}; fidelity 0.962 → Bell weight {weight:.5}, S {noisy:.4}; S strictly decreasing in p over 21 points: {monotone}; max |S| separable {sep_max:.6}"
        ),
        tolerance: "|S-2√2| ≤ 1e-9; S > 2; separable |S| ≤ 2 + 1e-9".into(),
    })
}

fn mesh(opts: &Options) -> Check {
    let per_d: u64 = if opts.full() { 100 } else { 20 };
    let mut worst: f64 = 0.0;
    let mut bad_counts = Vec::new();
    for d in [2usize, 4, 8, 16] {
        let results: Vec<(f64, usize)> = (0..per_d)
            .into_par_iter()
            .map(|i| {
                let u = haar_random(d, 1000 * d as u64 + i)?;
                let m = compile(&u)?;
                let back = evaluate_unitary(&m)?;
                Ok((back.matrix().distance_up_to_phase(u.matrix())?, m.nodes().len()))
            })
            .collect::<duality_core::Result<_>>()
            .map_err(err)?;
        for (dist, nodes) in results {
            worst = worst.max(dist);
            if nodes != d * (d - 1) / 2 {
                bad_counts.push(format!("d={d}: {nodes}"));
            }
        }
    }
    Ok(Outcome {
        passed: worst <= 1e-9 && bad_counts.is_empty(),
        measured: format!(
            "{per_d} Haar unitaries per d∈{{2,4,8,16}}; max Frobenius distance {worst:.2e}; node-count mismatches: {}",
            if bad_counts.is_empty() { "none".to_string() } else { bad_counts.join(", ") }
        ),
        tolerance: "1e-9 up to global phase; d(d-1)/2 nodes".into(),
    })
}

/// Mean per-point fidelity of one sampled surface against theory.
fn sampled_surface_fidelity(theory: &[PortDistribution], mean_total: f64, seed: u64) -> duality_core::Result<f64> {
    let mut sum = 0.0;
    for (k, dist) in theory.iter().enumerate() {
        let rec = sample_counts(dist, mean_total, seed.wrapping_mul(1 << 20).wrapping_add(k as u64))?;
        let freq = rec.frequencies().ok_or(duality_core::Error::AllPathsBlocked)?;
        sum += classical_fidelity(&freq, dist.probabilities())?;
    }
    Ok(sum / theory.len() as f64)
}

fn transition_fidelity(opts: &Options) -> Check {
    let (n, trials) = if opts.full() { (65, 100u64) } else { (17, 20) };
    let grid = turn(n);
    let mut clauses = Vec::new();
    let mut passed = true;
    for (d, threshold) in [(2usize, 0.99), (8, 0.97)] {
        for (family, herald) in [(Family::Quantum, Herald::Control1), (Family::Classical, Herald::TraceOut)] {
            let pts: Vec<(f64, f64)> = grid.iter().flat_map(|&a| grid.iter().map(move |&t| (a, t))).collect();
            let pairs: Vec<(PortDistribution, f64)> = pts
                .par_iter()
                .map(|&(a, t)| {
                    let cfg = InterferometerConfig::ramp(d, a, 0.0, t)?;
                    let theory = match family {
                        Family::Quantum => quantum_distribution(&cfg)?,
                        Family::Classical => classical_distribution(&cfg)?,
                    };
                    let sim = simulate_with_eraser(&cfg, herald, &opts.eraser)?;
                    let f = classical_fidelity(sim.probabilities(), theory.probabilities())?;
                    Ok((theory, f))
                })
                .collect::<duality_core::Result<_>>()
                .map_err(err)?;
            let noiseless_gap = pairs.iter().map(|p| 1.0 - p.1).fold(0.0, f64::max);
            let theory: Vec<PortDistribution> = pairs.into_iter().map(|p| p.0).collect();
            let fids: Vec<f64> = (0..trials)
                .into_par_iter()
                .map(|s| sampled_surface_fidelity(&theory, 1e4, s))
                .collect::<duality_core::Result<_>>()
                .map_err(err)?;
            let fraction = fids.iter().filter(|&&f| f >= threshold).count() as f64 / trials as f64;
            let mean = fids.iter().sum::<f64>() / trials as f64;
            passed &= noiseless_gap < 1e-12 && fraction >= 0.95;
            let fam = if family == Family::Quantum { "quantum" } else { "classical" };
            clauses.push(format!(
                "d={d} {fam}: noiseless 1-F {noiseless_gap:.1e}, sampled mean F {mean:.5}, {:.0}% of {trials} ≥ {threshold}",
                100.0 * fraction
            ));
        }
    }
    Ok(Outcome {
        passed,
        measured: format!("{n}×{n} (α,θ) grid, δ=0, 10⁴ counts/point; {}", clauses.join("; ")),
        tolerance: "1-F < 1e-12 noiseless; ≥ 95% of trials at threshold".into(),
    })
}

fn pearson(opts: &Options) -> Check {
    let n = if opts.full() { 65 } else { 33 };
    let grid = turn(n);
    let mut clauses = Vec::new();
    let mut passed = true;
    for delta in [0.0, PI / 2.0] {
        let distances: Vec<f64> = [2usize, 4, 8, 16]
            .iter()
            .map(|&d| {
                let (x, y) = transition_surfaces(d, delta, 0.0, &grid, &grid)?;
                pearson_distance(&x, &y)
            })
            .collect::<duality_core::Result<_>>()
            .map_err(err)?;
        let decreasing = distances.windows(2).all(|w| w[1] < w[0]);
        passed &= decreasing;
        let shown: Vec<String> = distances.iter().map(|r| format!("{r:.4}")).collect();
        clauses.push(format!("δ={delta:.4}: d=2,4,8,16 → {} (strictly decreasing: {decreasing})", shown.join(", ")));
    }
    Ok(Outcome {
        passed,
        measured: format!("{n}×{n} (α,θ) grid; {}", clauses.join("; ")),
        tolerance: "strict decrease".into(),
    })
}

fn delta_physics(opts: &Options) -> Check {
    let (na, nt, nd) = if opts.full() { (17, 33, 65) } else { (9, 9, 17) };
    let deltas: Vec<f64> = (0..nd).map(|k| -PI + 2.0 * PI * k as f64 / (nd - 1) as f64).collect();
    let mut points = Vec::new();
    for d in [2, 4, 8] {
        for &alpha in &turn(na) {
            for &theta in &turn(nt) {
                points.push((d, alpha, theta));
            }
        }
    }
    let invariance = points
        .par_iter()
        .map(|&(d, alpha, theta)| {
            let reference = simulate_full(&InterferometerConfig::ramp(d, alpha, 0.0, theta)?, Herald::TraceOut)?;
            deltas.iter().try_fold(0.0f64, |acc, &delta| {
                let cfg = InterferometerConfig::ramp(d, alpha, delta, theta)?;
                Ok(acc.max(simulate_full(&cfg, Herald::TraceOut)?.max_abs_diff(&reference)?))
            })
        })
        .collect::<duality_core::Result<Vec<f64>>>()
        .map_err(err)?
        .into_iter()
        .fold(0.0, f64::max);
    let mut best_range: f64 = 0.0;
    let mut best_theta = 0.0;
    for &theta in &turn(nt) {
        let values = deltas
            .iter()
            .map(|&delta| {
                let cfg = InterferometerConfig::ramp(2, 1.5 * PI, delta, theta)?;
                Ok(simulate_full(&cfg, Herald::Control1)?.probabilities()[0])
            })
            .collect::<duality_core::Result<Vec<f64>>>()
            .map_err(err)?;
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo > best_range {
            best_range = hi - lo;
            best_theta = theta;
        }
    }
    Ok(Outcome {
        passed: invariance <= 1e-12 && best_range >= 0.1,
        measured: format!(
            "classical max |Δp| over {nd} δ values {invariance:.2e}; quantum d=2 α=3π/2 port-0 range over δ {best_range:.4} (at θ={best_theta:.4})"
        ),
        tolerance: "invariance 1e-12; range ≥ 0.1".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_criterion_dispatches() {
        for (id, name) in CRITERIA {
            assert!(!name.is_empty());
            assert!(budget(id).is_none() || matches!(id, 1 | 4 | 7));
        }
        let r = run_criterion(42, &Options::new(Suite::Fast));
        assert!(!r.passed);
    }
}
