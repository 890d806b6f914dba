//! Picard iteration `x_{n+1} = T x_n` with the diagnostics the convergence
//! argument predicts: decreasing successive gaps, gap ratios bounded by
//! `beta(gap)`, and `alpha >= 1` along the orbit.

use std::io::Write;

use crate::error::{Error, Result};
use crate::framework::{
    AlphaFunction, CheckKind, CheckResult, GeraghtyBeta, Mapping, Relation, Status,
    VerificationReport, Witness,
};
use crate::metric::{MetricSpace, Point, SCALAR_EPS};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PicardConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Any gap above this ends the run as diverged.
    pub divergence_bound: f64,
}

impl Default for PicardConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 1000,
            divergence_bound: 1e9,
        }
    }
}

impl PicardConfig {
    pub fn new(tolerance: f64, max_iterations: usize) -> Result<Self> {
        let cfg = Self {
            tolerance,
            max_iterations,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_divergence_bound(mut self, bound: f64) -> Self {
        self.divergence_bound = bound;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.max_iterations < 1 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if !(self.divergence_bound > 0.0) {
            return Err(Error::Config(format!(
                "divergence bound must be positive, got {}",
                self.divergence_bound
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIterations,
    Diverged,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::MaxIterations => "max_iterations",
            Termination::Diverged => "diverged",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationTrace {
    pub iterates: Vec<Point>,
    /// `gaps[k] = d(x_k, x_{k+1})`.
    pub gaps: Vec<f64>,
    /// `ratios[k] = gaps[k+1] / gaps[k]`, absent when `gaps[k]` is below the
    /// carrier tolerance.
    pub ratios: Vec<Option<f64>>,
    pub termination: Termination,
    /// `d(x_last, T x_last)`; infinite when it could not be evaluated.
    pub residual: f64,
    /// Tolerance of the carrier the orbit lives in.
    pub epsilon: f64,
}

impl IterationTrace {
    pub fn iterations(&self) -> usize {
        self.gaps.len()
    }

    pub fn last(&self) -> &Point {
        self.iterates.last().expect("a trace always holds the start point")
    }

    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    pub fn max_ratio(&self) -> Option<f64> {
        self.ratios.iter().flatten().copied().reduce(f64::max)
    }

    /// Rows `iteration_index,gap,ratio,residual`: row `k` holds
    /// `d(x_k, x_{k+1})`, its ratio to the previous gap, and
    /// `d(x_{k+1}, T x_{k+1})`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["iteration_index", "gap", "ratio", "residual"])?;
        for (k, gap) in self.gaps.iter().enumerate() {
            let ratio = match k {
                0 => String::new(),
                _ => self.ratios[k - 1].map(|r| r.to_string()).unwrap_or_default(),
            };
            let residual = self.gaps.get(k + 1).copied().unwrap_or(self.residual);
            out.write_record([k.to_string(), gap.to_string(), ratio, residual.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

fn step(mapping: &Mapping, space: &MetricSpace, x: &Point, index: usize) -> Result<Point> {
    let y = mapping.apply(x).map_err(|e| Error::Escaped {
        index,
        reason: e.to_string(),
    })?;
    space.check(&y).map_err(|e| Error::Escaped {
        index,
        reason: e.to_string(),
    })?;
    Ok(y)
}

/// Iterates from `x0` until the successive gap and the fixed-point residual
/// both fall to the tolerance, the iteration budget runs out, or a gap
/// exceeds the divergence bound.
pub fn picard_iterate(
    mapping: &Mapping,
    x0: &Point,
    cfg: &PicardConfig,
    space: &MetricSpace,
) -> Result<IterationTrace> {
    cfg.validate()?;
    space.check(x0).map_err(|e| Error::Escaped {
        index: 0,
        reason: e.to_string(),
    })?;
    let eps = space.epsilon();
    let mut iterates = vec![x0.clone()];
    let mut gaps: Vec<f64> = Vec::new();
    let mut next = step(mapping, space, x0, 1)?;
    let mut termination = Termination::MaxIterations;
    let mut residual = f64::INFINITY;

    for k in 0..cfg.max_iterations {
        let gap = space.distance(iterates.last().expect("non-empty"), &next)?;
        iterates.push(next.clone());
        gaps.push(gap);
        if !gap.is_finite() || gap > cfg.divergence_bound {
            termination = Termination::Diverged;
            residual = step(mapping, space, &next, k + 2)
                .and_then(|t| space.distance(&next, &t))
                .unwrap_or(f64::INFINITY);
            break;
        }
        let after = step(mapping, space, &next, k + 2)?;
        residual = space.distance(&next, &after)?;
        if gap <= cfg.tolerance && residual <= cfg.tolerance {
            termination = Termination::Converged;
            break;
        }
        next = after;
    }

    let ratios = gaps
        .windows(2)
        .map(|w| (w[0] >= eps).then(|| w[1] / w[0]))
        .collect();
    Ok(IterationTrace {
        iterates,
        gaps,
        ratios,
        termination,
        residual,
        epsilon: eps,
    })
}

/// True iff the gaps never increase by more than the carrier tolerance.
/// Traces with fewer than two gaps pass vacuously.
pub fn monotone_gap_check(trace: &IterationTrace) -> bool {
    trace.gaps.windows(2).all(|w| w[1] <= w[0] + trace.epsilon)
}

/// Each observed ratio `gap_{k+1} / gap_k` must not exceed `beta(gap_k)`.
pub fn ratio_beta_check(trace: &IterationTrace, beta: &GeraghtyBeta) -> VerificationReport {
    let mut checked = 0;
    let mut witnesses = Vec::new();
    for (k, ratio) in trace.ratios.iter().enumerate() {
        let Some(r) = *ratio else { continue };
        checked += 1;
        let gap = trace.gaps[k];
        let bound = beta.eval(gap);
        if !Relation::Le.holds(r, bound, trace.epsilon) {
            witnesses.push(Witness::new(
                vec![("index", Point::Scalar(k as f64)), ("gap", Point::Scalar(gap))],
                "gap_{k+1} / gap_k <= beta(gap_k)",
                r,
                Relation::Le,
                bound,
            ));
        }
    }
    VerificationReport::new().with(CheckResult::from_witnesses(
        "ratio_beta",
        CheckKind::Pointwise,
        checked,
        witnesses,
    ))
}

/// Checks `alpha(x_n, x_m) >= 1` for all `0 <= n < m <= n_max` along the
/// orbit of `x0`. When `alpha(x0, T x0) < 1` the hypothesis is unmet and no
/// verdict on `T` is drawn.
pub fn alpha_orbit_check(
    mapping: &Mapping,
    alpha: &AlphaFunction,
    x0: &Point,
    n_max: usize,
) -> Result<VerificationReport> {
    let mut orbit = vec![x0.clone()];
    for _ in 0..n_max.max(1) {
        let next = mapping.apply(orbit.last().expect("non-empty"))?;
        orbit.push(next);
    }
    let idx = |i: usize| Point::Scalar(i as f64);

    let start = alpha.eval(&orbit[0], &orbit[1]);
    if start < 1.0 - SCALAR_EPS {
        let w = Witness::new(
            vec![("n", idx(0)), ("m", idx(1))],
            "alpha(x0, Tx0) >= 1",
            start,
            Relation::Ge,
            1.0,
        );
        let check = CheckResult {
            name: "alpha_orbit".into(),
            kind: CheckKind::Pointwise,
            status: Status::HypothesisUnmet,
            samples: 1,
            witnesses: vec![w],
            note: Some("start point does not satisfy alpha(x0, Tx0) >= 1".into()),
        };
        return Ok(VerificationReport::new().with(check));
    }

    let mut witnesses = Vec::new();
    let mut checked = 0;
    for n in 0..=n_max {
        for m in (n + 1)..=n_max {
            checked += 1;
            let v = alpha.eval(&orbit[n], &orbit[m]);
            if !Relation::Ge.holds(v, 1.0, SCALAR_EPS) {
                witnesses.push(Witness::new(
                    vec![
                        ("n", idx(n)),
                        ("m", idx(m)),
                        ("x_n", orbit[n].clone()),
                        ("x_m", orbit[m].clone()),
                    ],
                    "alpha(x_n, x_m) >= 1",
                    v,
                    Relation::Ge,
                    1.0,
                ));
            }
        }
    }
    let mut check = CheckResult::from_witnesses("alpha_orbit", CheckKind::Pointwise, checked, witnesses);
    // Order by position along the orbit rather than by margin.
    check.witnesses.sort_by(|a, b| {
        let key = |w: &Witness| (w.scalar("n").unwrap_or(0.0), w.scalar("m").unwrap_or(0.0));
        key(a).partial_cmp(&key(b)).expect("indices are finite")
    });
    Ok(VerificationReport::new().with(check))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StartOutcome {
    pub start: Point,
    /// The termination reason, or the error that stopped the orbit.
    pub termination: std::result::Result<Termination, String>,
    pub limit: Option<Point>,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessReport {
    pub outcomes: Vec<StartOutcome>,
    /// Representatives of the distinct limits among converged orbits.
    pub limits: Vec<Point>,
    /// Limits closer than this are considered the same.
    pub separation: f64,
}

impl UniquenessReport {
    /// Every orbit converged and all limits coincide.
    pub fn is_unique(&self) -> bool {
        self.limits.len() == 1
            && self
                .outcomes
                .iter()
                .all(|o| o.termination == Ok(Termination::Converged))
    }

    pub fn to_report(&self, space: &MetricSpace) -> VerificationReport {
        let mut witnesses = Vec::new();
        for (i, a) in self.limits.iter().enumerate() {
            for b in &self.limits[i + 1..] {
                let d = space.distance(a, b).unwrap_or(f64::INFINITY);
                witnesses.push(Witness::new(
                    vec![("limit_a", a.clone()), ("limit_b", b.clone())],
                    "distinct limits coincide",
                    d,
                    Relation::Le,
                    self.separation,
                ));
            }
        }
        let stuck: Vec<Witness> = self
            .outcomes
            .iter()
            .filter(|o| o.termination != Ok(Termination::Converged))
            .map(|o| {
                Witness::new(
                    vec![("start", o.start.clone())],
                    match &o.termination {
                        Ok(t) => format!("orbit converges (ended {})", t.as_str()),
                        Err(e) => format!("orbit converges (failed: {e})"),
                    },
                    o.iterations as f64,
                    Relation::Lt,
                    o.iterations as f64,
                )
            })
            .collect();
        VerificationReport::new()
            .with(CheckResult::from_witnesses(
                "uniqueness_limits",
                CheckKind::Falsification,
                self.outcomes.len(),
                witnesses,
            ))
            .with(CheckResult::from_witnesses(
                "uniqueness_orbits",
                CheckKind::Pointwise,
                self.outcomes.len(),
                stuck,
            ))
    }
}

/// Runs Picard from every start and groups the limits; limits farther apart
/// than `10 * tolerance` are distinct.
pub fn uniqueness_probe(
    mapping: &Mapping,
    starts: &[Point],
    cfg: &PicardConfig,
    space: &MetricSpace,
) -> Result<UniquenessReport> {
    cfg.validate()?;
    let separation = 10.0 * cfg.tolerance;
    let mut outcomes = Vec::with_capacity(starts.len());
    let mut limits: Vec<Point> = Vec::new();
    for start in starts {
        match picard_iterate(mapping, start, cfg, space) {
            Ok(trace) => {
                let limit = trace.last().clone();
                if trace.converged() {
                    let mut known = false;
                    for rep in &limits {
                        if space.distance(rep, &limit)? <= separation {
                            known = true;
                            break;
                        }
                    }
                    if !known {
                        limits.push(limit.clone());
                    }
                }
                outcomes.push(StartOutcome {
                    start: start.clone(),
                    termination: Ok(trace.termination),
                    limit: Some(limit),
                    iterations: trace.iterations(),
                });
            }
            Err(e) => outcomes.push(StartOutcome {
                start: start.clone(),
                termination: Err(e.to_string()),
                limit: None,
                iterations: 0,
            }),
        }
    }
    Ok(UniquenessReport {
        outcomes,
        limits,
        separation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::sampling::{grid_pairs, linspace, to_point_pairs};
    use crate::framework::{verify_contraction, CClassFunction, ContractionBundle, SimulationFunction};
    use proptest::prelude::*;

    fn sc(x: f64) -> Point {
        Point::Scalar(x)
    }

    fn third() -> Mapping {
        Mapping::scalar("x/3", |x| x / 3.0)
    }

    fn line() -> MetricSpace {
        MetricSpace::half_line()
    }

    #[test]
    fn geometric_orbit_converges() {
        let cfg = PicardConfig::new(1e-10, 100).unwrap();
        let trace = picard_iterate(&third(), &sc(1.0), &cfg, &line()).unwrap();
        assert!(trace.converged());
        assert!((21..=23).contains(&trace.iterations()), "{}", trace.iterations());
        assert!(trace.last().as_scalar().unwrap().abs() < 1e-10);
        assert_eq!(trace.gaps.len(), trace.iterates.len() - 1);
        assert!(trace.residual <= 1e-10);
        // x_n = 3^-n, so gap_k = (2/3) 3^-k up to accumulated rounding.
        for (k, g) in trace.gaps.iter().enumerate() {
            let expected = 2.0 / 3.0 * 3f64.powi(-(k as i32));
            assert!((g - expected).abs() <= 1e-14 * expected);
        }
    }

    #[test]
    fn identity_converges_in_one_step() {
        let cfg = PicardConfig::default();
        let trace = picard_iterate(&Mapping::identity(), &sc(0.7), &cfg, &line()).unwrap();
        assert!(trace.converged());
        assert_eq!(trace.iterations(), 1);
        assert_eq!(trace.residual, 0.0);
        assert!(monotone_gap_check(&trace));
        assert!(trace.ratios.is_empty());
    }

    #[test]
    fn tripling_diverges() {
        let cfg = PicardConfig::default().with_divergence_bound(1e6);
        let trace = picard_iterate(&Mapping::affine(3.0, 0.0), &sc(1.0), &cfg, &line()).unwrap();
        assert_eq!(trace.termination, Termination::Diverged);
        assert!(*trace.gaps.last().unwrap() > 1e6);
    }

    #[test]
    fn max_iterations_bounds_trace_length() {
        let cfg = PicardConfig::new(1e-14, 5).unwrap();
        let trace = picard_iterate(&third(), &sc(1.0), &cfg, &line()).unwrap();
        assert_eq!(trace.termination, Termination::MaxIterations);
        assert_eq!(trace.iterates.len(), 6);
    }

    #[test]
    fn escaping_orbit_is_an_error_with_index() {
        let unit = MetricSpace::interval(0.0, 1.0).unwrap();
        let err = picard_iterate(&Mapping::affine(3.0, 0.0), &sc(0.2), &PicardConfig::default(), &unit)
            .unwrap_err();
        assert!(matches!(err, Error::Escaped { index: 2, .. }), "{err}");
    }

    #[test]
    fn invalid_config() {
        assert!(PicardConfig::new(0.0, 10).is_err());
        assert!(PicardConfig::new(1e-6, 0).is_err());
    }

    #[test]
    fn monotone_gap_examples() {
        let cfg = PicardConfig::default();
        let trace = picard_iterate(&third(), &sc(1.0), &cfg, &line()).unwrap();
        assert!(monotone_gap_check(&trace));
        let mut synthetic = trace.clone();
        synthetic.gaps = vec![0.1, 0.3];
        assert!(!monotone_gap_check(&synthetic));
    }

    #[test]
    fn ratio_beta_examples() {
        let cfg = PicardConfig::default();
        let trace = picard_iterate(&third(), &sc(1.0), &cfg, &line()).unwrap();
        assert!(ratio_beta_check(&trace, &GeraghtyBeta::inverse_one_plus()).passed());
        assert!((GeraghtyBeta::inverse_one_plus().eval(2.0 / 3.0) - 0.6).abs() < 1e-15);
        assert!(ratio_beta_check(&trace, &GeraghtyBeta::constant(0.5)).passed());
        let r = ratio_beta_check(&trace, &GeraghtyBeta::constant(0.25));
        let c = r.check("ratio_beta").unwrap();
        assert_eq!(c.status, Status::Fail);
        assert!(c.witnesses.iter().any(|w| w.scalar("index") == Some(0.0)));
    }

    fn example_map() -> Mapping {
        Mapping::scalar("x/3 on [0,1], else 3x", |x| if x <= 1.0 { x / 3.0 } else { 3.0 * x })
    }

    #[test]
    fn alpha_orbit_examples() {
        let ind = AlphaFunction::box_indicator(0.0, 1.0);
        assert!(alpha_orbit_check(&example_map(), &ind, &sc(1.0), 10).unwrap().passed());
        let any = Mapping::affine(2.0, 1.0);
        assert!(alpha_orbit_check(&any, &AlphaFunction::constant_one(), &sc(1.0), 10)
            .unwrap()
            .passed());

        let triple = Mapping::affine(3.0, 0.0);
        let r = alpha_orbit_check(&triple, &ind, &sc(0.25), 4).unwrap();
        let c = r.check("alpha_orbit").unwrap();
        assert_eq!(c.status, Status::Fail);
        // Orbit 0.25, 0.75, 2.25, ...: every pair reaching x_2 violates.
        let pairs: Vec<_> = c.witnesses.iter().map(|w| (w.scalar("n"), w.scalar("m"))).collect();
        assert!(pairs.contains(&(Some(1.0), Some(2.0))));
        assert!(!pairs.contains(&(Some(0.0), Some(1.0))));
        assert_eq!(pairs[0], (Some(0.0), Some(2.0)));

        let r = alpha_orbit_check(&triple, &ind, &sc(0.5), 4).unwrap();
        assert_eq!(r.check("alpha_orbit").unwrap().status, Status::HypothesisUnmet);
    }

    #[test]
    fn uniqueness_examples() {
        let cfg = PicardConfig::default();
        let starts = [sc(0.0), sc(0.3), sc(1.0)];
        let u = uniqueness_probe(&third(), &starts, &cfg, &line()).unwrap();
        assert!(u.is_unique());
        assert!(u.limits[0].as_scalar().unwrap().abs() < 1e-9);

        let u = uniqueness_probe(&Mapping::identity(), &[sc(0.2), sc(0.8)], &cfg, &line()).unwrap();
        assert_eq!(u.limits.len(), 2);
        assert!(!u.is_unique());
        assert!(!u.to_report(&line()).passed());

        let u = uniqueness_probe(&Mapping::affine(0.5, 0.25), &[sc(0.0), sc(1.0)], &cfg, &line()).unwrap();
        assert!(u.is_unique());
        assert!((u.limits[0].as_scalar().unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn uniqueness_reports_divergent_starts() {
        let cfg = PicardConfig::default();
        let u = uniqueness_probe(&example_map(), &[sc(0.5), sc(2.0)], &cfg, &line()).unwrap();
        assert_eq!(u.outcomes[1].termination, Ok(Termination::Diverged));
        assert_eq!(u.limits.len(), 1);
        assert!(!u.is_unique());
    }

    #[test]
    fn trace_csv_layout() {
        let cfg = PicardConfig::new(1e-3, 50).unwrap();
        let trace = picard_iterate(&Mapping::affine(0.5, 0.0), &sc(1.0), &cfg, &line()).unwrap();
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("iteration_index,gap,ratio,residual"));
        assert_eq!(lines.next(), Some("0,0.5,,0.25"));
        assert_eq!(lines.next(), Some("1,0.25,0.5,0.125"));
        assert_eq!(text.lines().count(), trace.iterations() + 1);
    }

    #[test]
    fn deterministic_traces() {
        let cfg = PicardConfig::default();
        let a = picard_iterate(&example_map(), &sc(0.77), &cfg, &line()).unwrap();
        let b = picard_iterate(&example_map(), &sc(0.77), &cfg, &line()).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn verified_contraction_has_monotone_gaps(a in -1.5..1.5_f64, b in -1.0..1.0_f64) {
            let bundle = ContractionBundle {
                mapping: Mapping::affine(a, b),
                alpha: AlphaFunction::constant_one(),
                beta: GeraghtyBeta::constant(0.9),
                zeta: SimulationFunction::linear(0.9),
                g: CClassFunction::difference(0.0).unwrap(),
            };
            let pairs = to_point_pairs(&grid_pairs(-2.0, 2.0, 41));
            let space = MetricSpace::interval(f64::MIN, f64::MAX).unwrap();
            let verified = verify_contraction(&bundle, &pairs, &space).unwrap().passed();
            prop_assert_eq!(verified, a.abs() <= 0.81 + 1e-12);
            if verified {
                for x0 in linspace(-2.0, 2.0, 5) {
                    let trace = picard_iterate(&bundle.mapping, &sc(x0), &PicardConfig::default(), &space).unwrap();
                    prop_assert!(monotone_gap_check(&trace));
                }
            }
        }
    }
}
