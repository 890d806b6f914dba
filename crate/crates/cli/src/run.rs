use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use geraghty_core::builtins;
use geraghty_core::bvp::{
    check_gate_conditions, default_bundle, solve_bvp, verify_condition_i, verify_contraction_bound,
    BvpOperator, BvpProblem, BvpSolution, Rhs,
};
use geraghty_core::framework::sampling::{grid_pairs, grid_triples, linspace, positive_pairs, random_pairs, rng};
use geraghty_core::framework::{
    check_alpha_admissible, check_cclass, check_cg_simulation, check_geraghty_beta, check_triangular_alpha,
    check_zeta_pointwise, check_zeta_sequences, verify_contraction, SequenceProbe,
};
use geraghty_core::picard::{alpha_orbit_check, monotone_gap_check, ratio_beta_check};
use geraghty_core::{
    picard_iterate, CheckKind, CheckResult, ContractionBundle, GeraghtyBeta, GridFunction, IterationTrace,
    Mapping, MetricSpace, PicardConfig, Point, Relation, VerificationReport, Witness,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::{BundleSpec, CarrierSpec, Mode, RunConfig};
use crate::error::{exit, CliError};

/// Witnesses listed per check in `report.txt`.
const TEXT_WITNESSES: usize = 10;
const PROBE_LEN: usize = 200;
const ORBIT_STEPS: usize = 20;
const TRIPLES_PER_AXIS: usize = 21;

#[derive(Debug)]
pub struct RunOutcome {
    pub exit_code: u8,
    /// One-line summary for the terminal.
    pub summary: String,
    pub files: Vec<PathBuf>,
}

pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<RunOutcome, CliError> {
    let mut g = rng(cfg.seed);
    let artifacts = match cfg.mode {
        Mode::Verify => run_verify(cfg, &mut g)?,
        Mode::Iterate => run_iterate(cfg)?,
        Mode::SolveBvp => run_solve(cfg, &mut g)?,
    };
    artifacts.write(cfg, out_dir)
}

struct Artifacts {
    header: Vec<String>,
    report: VerificationReport,
    trace: Option<IterationTrace>,
    solution: Option<GridFunction>,
    converged: bool,
}

impl Artifacts {
    fn write(self, cfg: &RunConfig, out_dir: &Path) -> Result<RunOutcome, CliError> {
        fs::create_dir_all(out_dir).map_err(|e| io_error(out_dir, e))?;
        let mut files = Vec::new();

        let mut text = format!("mode: {}\nseed: {}\n", cfg.mode.as_str(), cfg.seed);
        for line in &self.header {
            let _ = writeln!(text, "{line}");
        }
        text.push('\n');
        text.push_str(&self.report.to_text(TEXT_WITNESSES));
        files.push(write_file(out_dir, "report.txt", text.as_bytes())?);
        files.push(write_file(out_dir, "report.csv", self.report.to_csv_string()?.as_bytes())?);
        if let Some(trace) = &self.trace {
            let mut buf = Vec::new();
            trace.write_csv(&mut buf)?;
            files.push(write_file(out_dir, "trace.csv", &buf)?);
        }
        if let Some(x) = &self.solution {
            let mut buf = Vec::new();
            x.write_csv(&mut buf)?;
            files.push(write_file(out_dir, "solution.csv", &buf)?);
        }

        let exit_code = if !self.converged {
            exit::NOT_CONVERGED
        } else if !self.report.passed() {
            exit::VERIFICATION_FAILED
        } else {
            exit::OK
        };
        let failed: Vec<&str> = self
            .report
            .checks()
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect();
        let mut summary = format!(
            "{}: {} checks, {}",
            cfg.mode.as_str(),
            self.report.checks().len(),
            if failed.is_empty() { "all passed".to_string() } else { format!("failed: {}", failed.join(", ")) }
        );
        if let Some(trace) = &self.trace {
            let _ = write!(summary, "; iteration {} after {} steps", trace.termination.as_str(), trace.iterations());
        }
        Ok(RunOutcome {
            exit_code,
            summary,
            files,
        })
    }
}

fn io_error(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        context: format!("cannot write {}", path.display()),
        source,
    }
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| io_error(&path, e))?;
    Ok(path)
}

fn space(carrier: &CarrierSpec) -> Result<MetricSpace, CliError> {
    Ok(match carrier {
        CarrierSpec::HalfLine => MetricSpace::half_line(),
        CarrierSpec::Interval { lo, hi } => MetricSpace::interval(*lo, *hi)?,
        CarrierSpec::Grid { n } => MetricSpace::grid(*n)?,
    })
}

/// Resolved bundle selection: the preset first, then explicit keys, then the
/// parameter overrides.
struct Selection {
    mapping: Option<Mapping>,
    bundle: Option<ContractionBundle>,
    beta: Option<GeraghtyBeta>,
}

fn select(spec: &BundleSpec) -> Result<Selection, CliError> {
    let preset = match spec.preset.as_deref() {
        None => None,
        Some("example31_bundle") => Some(builtins::example31_bundle()),
        Some(other) => {
            return Err(geraghty_core::Error::Config(format!("unknown bundle preset {other:?}")).into())
        }
    };
    let mapping = spec.mapping.as_deref().map(builtins::mapping).transpose()?;
    let alpha = spec.alpha.as_deref().map(builtins::alpha).transpose()?;
    let mut zeta = spec.zeta.as_deref().map(builtins::zeta).transpose()?;
    let beta = spec.beta.as_deref().map(builtins::beta).transpose()?;
    let mut g = spec.g.as_deref().map(builtins::cclass).transpose()?;
    if let Some(lambda) = spec.lambda {
        zeta = Some(builtins::zeta(&format!("zeta1:{lambda}"))?);
    }
    if let (Some(k), Some(r)) = (spec.k, spec.r) {
        g = Some(geraghty_core::CClassFunction::damped(k, r)?);
    }

    let mapping = mapping.or_else(|| preset.as_ref().map(|b| b.mapping.clone()));
    let beta = beta.or_else(|| preset.as_ref().map(|b| b.beta.clone()));
    let alpha = alpha.or_else(|| preset.as_ref().map(|b| b.alpha.clone()));
    let zeta = zeta.or_else(|| preset.as_ref().map(|b| b.zeta.clone()));
    let g = g.or_else(|| preset.as_ref().map(|b| b.g.clone()));
    let bundle = match (&mapping, alpha, &beta, zeta, g) {
        (Some(m), Some(alpha), Some(b), Some(zeta), Some(g)) => Some(ContractionBundle {
            mapping: m.clone(),
            alpha,
            beta: b.clone(),
            zeta,
            g,
        }),
        _ => None,
    };
    Ok(Selection { mapping, bundle, beta })
}

fn zeta_probes() -> Vec<SequenceProbe> {
    [0.5, 1.0, 2.0]
        .into_iter()
        .map(|l| {
            SequenceProbe::from_fn(
                PROBE_LEN,
                move |k| l - l / (2.0 * (k + 1) as f64),
                move |k| l + l / (2.0 * (k + 1) as f64),
            )
        })
        .collect()
}

fn beta_probes() -> Vec<Vec<f64>> {
    let seq = |f: fn(f64) -> f64| (1..=PROBE_LEN).map(|k| f(k as f64)).collect();
    vec![seq(|k| 1.0 / k), seq(|k| 1.0 + 1.0 / k), seq(|k| k)]
}

fn run_verify(cfg: &RunConfig, g: &mut ChaCha8Rng) -> Result<Artifacts, CliError> {
    let space = space(&cfg.carrier)?;
    let bundle = select(&cfg.bundle)?.bundle.ok_or_else(|| {
        CliError::Validation("verify needs mapping, alpha, zeta, beta and g (or a preset)".into())
    })?;
    let s = &cfg.sampling;

    let mut pairs = grid_pairs(s.grid_lo, s.grid_hi, s.grid_per_axis);
    pairs.extend(random_pairs(g, s.random_lo, s.random_hi, s.random_pairs));
    let points: Vec<(Point, Point)> = pairs
        .iter()
        .map(|&(x, y)| {
            let (px, py) = (Point::Scalar(x), Point::Scalar(y));
            if !space.contains(&px) || !space.contains(&py) {
                return Err(CliError::Validation(format!(
                    "sample pair ({x}, {y}) lies outside the carrier"
                )));
            }
            Ok((px, py))
        })
        .collect::<Result<_, _>>()?;
    let triples: Vec<(Point, Point, Point)> = grid_triples(s.grid_lo, s.grid_hi, TRIPLES_PER_AXIS)
        .into_iter()
        .map(|(x, z, y)| (Point::Scalar(x), Point::Scalar(z), Point::Scalar(y)))
        .collect();
    let axiom = positive_pairs(s.axiom_hi, s.axiom_grid_per_axis, s.axiom_random, g.random());
    let probes = zeta_probes();
    let betas = linspace(0.0, s.axiom_hi, 1001);

    let x0 = Point::Scalar(cfg.picard.x0);
    space.check(&x0).map_err(|e| CliError::Validation(format!("x0: {e}")))?;

    let mut report = check_zeta_pointwise(&bundle.zeta, &axiom)
        .merge(check_zeta_sequences(&bundle.zeta, &probes)?)
        .merge(check_cclass(&bundle.g, &axiom))
        .merge(check_cg_simulation(&bundle.zeta, &bundle.g, &axiom, &probes)?)
        .merge(check_geraghty_beta(&bundle.beta, &betas, &beta_probes()))
        .merge(check_alpha_admissible(&bundle.mapping, &bundle.alpha, &points)?)
        .merge(check_triangular_alpha(&bundle.alpha, &triples))
        .merge(alpha_orbit_check(&bundle.mapping, &bundle.alpha, &x0, ORBIT_STEPS)?)
        .merge(verify_contraction(&bundle, &points, &space)?);

    // beta(0) = 1 is harmless: M(x, y) = 0 forces x = y = Tx, where the
    // inequality no longer involves beta.
    let only_at_zero = report
        .check("beta_range")
        .is_some_and(|c| !c.witnesses.is_empty() && c.witnesses.iter().all(|w| w.scalar("t") == Some(0.0)));
    if only_at_zero {
        report.downgrade_to_caveat(
            "beta_range",
            "beta(0) = 1; the contraction inequality only evaluates beta(M) at M = 0 when x = y = Tx",
        );
    }

    Ok(Artifacts {
        header: vec![
            format!("mapping: {}", bundle.mapping.name()),
            format!("alpha: {}", bundle.alpha.name()),
            format!("zeta: {}", bundle.zeta.name()),
            format!("beta: {}", bundle.beta.name()),
            format!("G: {}", bundle.g.name()),
            format!("pairs: {}", points.len()),
        ],
        report,
        trace: None,
        solution: None,
        converged: true,
    })
}

fn convergence_check(trace: &IterationTrace, tolerance: f64) -> CheckResult {
    let last_gap = trace.gaps.last().copied().unwrap_or(0.0);
    let worst = last_gap.max(trace.residual);
    let witnesses = if trace.converged() {
        Vec::new()
    } else {
        vec![Witness::new(
            vec![("iterations", Point::Scalar(trace.iterations() as f64))],
            "max(gap, residual) <= tolerance",
            worst,
            Relation::Le,
            tolerance,
        )]
    };
    CheckResult::from_witnesses("picard_convergence", CheckKind::Pointwise, 1, witnesses).with_note(format!(
        "terminated {} after {} iterations",
        trace.termination.as_str(),
        trace.iterations()
    ))
}

fn monotone_check(trace: &IterationTrace) -> CheckResult {
    let witnesses = if monotone_gap_check(trace) {
        Vec::new()
    } else {
        trace
            .gaps
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1] > w[0] + trace.epsilon)
            .map(|(k, w)| {
                Witness::new(
                    vec![("index", Point::Scalar(k as f64))],
                    "gap_{k+1} <= gap_k",
                    w[1],
                    Relation::Le,
                    w[0],
                )
            })
            .collect()
    };
    CheckResult::from_witnesses(
        "gap_monotone",
        CheckKind::Pointwise,
        trace.gaps.len().saturating_sub(1),
        witnesses,
    )
}

fn run_iterate(cfg: &RunConfig) -> Result<Artifacts, CliError> {
    let space = space(&cfg.carrier)?;
    let selection = select(&cfg.bundle)?;
    let mapping = selection.mapping.expect("config requires a mapping");
    let p = &cfg.picard;
    let pc = PicardConfig::new(p.tolerance, p.max_iterations)?.with_divergence_bound(p.divergence_bound);
    let x0 = Point::Scalar(p.x0);
    let trace = picard_iterate(&mapping, &x0, &pc, &space)?;

    let mut report = VerificationReport::new()
        .with(convergence_check(&trace, p.tolerance))
        .with(monotone_check(&trace));
    if let Some(beta) = &selection.beta {
        report = report.merge(ratio_beta_check(&trace, beta));
    }
    Ok(Artifacts {
        header: vec![
            format!("mapping: {}", mapping.name()),
            format!("x0: {}", p.x0),
            format!("termination: {}", trace.termination.as_str()),
            format!("iterations: {}", trace.iterations()),
            format!("limit: {}", trace.last()),
        ],
        converged: trace.converged(),
        report,
        trace: Some(trace),
        solution: None,
    })
}

fn random_grid(g: &mut ChaCha8Rng, n: usize) -> Result<GridFunction, CliError> {
    Ok(GridFunction::new((0..=n).map(|_| g.random_range(0.0..=1.0)).collect())?)
}

fn bvp_report(
    problem: &BvpProblem,
    solution: &BvpSolution,
    g: &mut ChaCha8Rng,
    count: usize,
) -> Result<VerificationReport, CliError> {
    let n = problem.n;
    let pairs: Vec<(GridFunction, GridFunction)> = (0..count)
        .map(|_| Ok((random_grid(g, n)?, random_grid(g, n)?)))
        .collect::<Result<_, CliError>>()?;
    let point_pairs: Vec<(Point, Point)> =
        pairs.iter().map(|(x, y)| (Point::Grid(x.clone()), Point::Grid(y.clone()))).collect();
    let triples: Vec<(f64, f64, f64)> = (0..5 * count)
        .map(|_| (g.random_range(0.0..=1.0), g.random_range(0.0..=1.0), g.random_range(0.0..=1.0)))
        .collect();
    let op = BvpOperator::new(problem)?;
    let x0 = GridFunction::zeros(n);
    let bound = GeraghtyBeta::new("1/8", |_| 0.125);

    Ok(VerificationReport::new()
        .with(convergence_check(&solution.trace, problem.tolerance))
        .merge(ratio_beta_check(&solution.trace, &bound))
        .merge(verify_condition_i(problem, &op, &triples)?)
        .merge(verify_contraction_bound(problem, &pairs)?)
        .merge(verify_contraction(&default_bundle(problem)?, &point_pairs, &problem.space())?)
        .merge(check_gate_conditions(problem, &x0, &pairs, Some(&solution.trace))?))
}

fn run_solve(cfg: &RunConfig, g: &mut ChaCha8Rng) -> Result<Artifacts, CliError> {
    let spec = cfg.bvp.as_ref().expect("config requires [bvp]");
    let problem = BvpProblem::new(Rhs::parse(&spec.rhs)?, spec.n, spec.tolerance)?;
    let pc = PicardConfig::new(spec.tolerance, spec.max_iterations)?
        .with_divergence_bound(cfg.picard.divergence_bound);
    let solution = solve_bvp(&problem, &pc)?;
    let report = bvp_report(&problem, &solution, g, spec.verify_pairs)?;
    let estimate = solution
        .contraction_estimate
        .map_or_else(|| "n/a".to_string(), |r| format!("{r}"));
    Ok(Artifacts {
        header: vec![
            format!("rhs: {}", problem.rhs.name()),
            format!("n: {}", problem.n),
            format!("tolerance: {}", problem.tolerance),
            format!("termination: {}", solution.trace.termination.as_str()),
            format!("iterations: {}", solution.trace.iterations()),
            format!("contraction estimate: {estimate}"),
            format!("second-difference residual: {}", solution.residual),
        ],
        converged: solution.converged(),
        report,
        trace: Some(solution.trace),
        solution: Some(solution.x),
    })
}
