//! Sampling verifiers for the axioms of each function family and for the
//! master contraction inequality
//! `zeta(alpha(x,y) d(Tx,Ty), beta(M) M) >= C_G`.
//!
//! Failures are reported as witnesses, never as errors. Errors are reserved
//! for malformed input (a mapping that leaves its carrier, probe sequences
//! outside the axiom's domain).

use crate::error::{Error, Result};
use crate::metric::{MetricSpace, Point, SCALAR_EPS};

use super::functions::{
    AlphaFunction, CClassFunction, ContractionBundle, GeraghtyBeta, Mapping, SequenceAxiom,
    SimulationFunction,
};
use super::report::{CheckKind, CheckResult, Relation, VerificationReport, Witness};

/// Shortest tail used to estimate an upper limit.
pub const MIN_TAIL: usize = 25;
/// `beta(t_n)` counts as tending to 1 once the tail is this close to 1.
pub const BETA_LIMIT_TOL: f64 = 1e-6;
/// A tail whose smallest argument exceeds this is bounded away from 0.
pub const BETA_LIMIT_FLOOR: f64 = 1e-6;

/// Paired positive sequences with a common positive limit.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceProbe {
    pub t: Vec<f64>,
    pub s: Vec<f64>,
}

impl SequenceProbe {
    pub fn new(t: Vec<f64>, s: Vec<f64>) -> Self {
        Self { t, s }
    }

    /// `t_k = t(k), s_k = s(k)` for `k = 1..=len`.
    pub fn from_fn(len: usize, t: impl Fn(usize) -> f64, s: impl Fn(usize) -> f64) -> Self {
        Self {
            t: (1..=len).map(&t).collect(),
            s: (1..=len).map(&s).collect(),
        }
    }
}

/// Number of trailing terms used as the upper-limit estimate window.
pub fn tail_len(len: usize) -> usize {
    (len / 4).max(MIN_TAIL).min(len)
}

fn sc(x: f64) -> Point {
    Point::Scalar(x)
}

fn image(mapping: &Mapping, space: &MetricSpace, x: &Point) -> Result<Point> {
    let tx = mapping.apply(x)?;
    space.check(&tx).map_err(|e| {
        Error::Domain(format!("{} maps {x} outside the carrier: {e}", mapping.name()))
    })?;
    Ok(tx)
}

fn m_from_images(space: &MetricSpace, x: &Point, y: &Point, tx: &Point, ty: &Point) -> Result<f64> {
    Ok(space
        .distance(x, y)?
        .max(space.distance(x, tx)?)
        .max(space.distance(y, ty)?))
}

/// `M(x, y) = max{d(x, y), d(x, Tx), d(y, Ty)}`.
pub fn eval_m(mapping: &Mapping, x: &Point, y: &Point, space: &MetricSpace) -> Result<f64> {
    let tx = image(mapping, space, x)?;
    let ty = image(mapping, space, y)?;
    m_from_images(space, x, y, &tx, &ty)
}

/// Evaluates the left-hand side of the contraction inequality at one pair.
pub fn contraction_lhs(
    bundle: &ContractionBundle,
    x: &Point,
    y: &Point,
    space: &MetricSpace,
) -> Result<f64> {
    let tx = image(&bundle.mapping, space, x)?;
    let ty = image(&bundle.mapping, space, y)?;
    let m = m_from_images(space, x, y, &tx, &ty)?;
    let t = bundle.alpha.eval(x, y) * space.distance(&tx, &ty)?;
    Ok(bundle.zeta.eval(t, bundle.beta.eval(m) * m))
}

/// Axioms `zeta(0, 0) = 0` and `zeta(t, s) < s - t` for positive samples.
/// Non-positive samples are skipped by the strictness check.
pub fn check_zeta_pointwise(zeta: &SimulationFunction, samples: &[(f64, f64)]) -> VerificationReport {
    let origin = zeta.eval(0.0, 0.0);
    let mut origin_ws = Vec::new();
    if !Relation::Eq.holds(origin, 0.0, SCALAR_EPS) {
        origin_ws.push(Witness::new(
            vec![("t", sc(0.0)), ("s", sc(0.0))],
            "zeta(0,0) = 0",
            origin,
            Relation::Eq,
            0.0,
        ));
    }

    let positive: Vec<_> = samples.iter().filter(|(t, s)| *t > 0.0 && *s > 0.0).collect();
    let strict_ws = positive
        .iter()
        .filter_map(|&&(t, s)| {
            let lhs = zeta.eval(t, s);
            let rhs = s - t;
            (!Relation::Lt.holds(lhs, rhs, SCALAR_EPS)).then(|| {
                Witness::new(
                    vec![("t", sc(t)), ("s", sc(s))],
                    "zeta(t,s) < s - t",
                    lhs,
                    Relation::Lt,
                    rhs,
                )
            })
        })
        .collect();

    VerificationReport::new()
        .with(CheckResult::from_witnesses("zeta_origin", CheckKind::Pointwise, 1, origin_ws))
        .with(CheckResult::from_witnesses(
            "zeta_strict",
            CheckKind::Pointwise,
            positive.len(),
            strict_ws,
        ))
}

fn validate_probe(i: usize, p: &SequenceProbe, require_ordered: bool) -> Result<()> {
    if p.t.len() != p.s.len() {
        return Err(Error::Domain(format!(
            "probe {i}: sequence lengths differ ({} vs {})",
            p.t.len(),
            p.s.len()
        )));
    }
    if p.t.len() < MIN_TAIL {
        return Err(Error::Domain(format!(
            "probe {i}: needs at least {MIN_TAIL} terms, got {}",
            p.t.len()
        )));
    }
    for (k, (&t, &s)) in p.t.iter().zip(&p.s).enumerate() {
        if !(t > 0.0 && s > 0.0) || !t.is_finite() || !s.is_finite() {
            return Err(Error::Domain(format!(
                "probe {i}, term {k}: terms must be positive and finite (t={t}, s={s})"
            )));
        }
        if require_ordered && t >= s {
            return Err(Error::Domain(format!(
                "probe {i}, term {k}: ordered probes need t < s (t={t}, s={s})"
            )));
        }
    }
    Ok(())
}

/// Estimates `limsup zeta(t_n, s_n)` by the tail maximum and flags probes
/// whose estimate is not below `threshold`.
fn sequence_check(
    name: &str,
    probes: &[SequenceProbe],
    require_ordered: bool,
    threshold: f64,
    eval: impl Fn(f64, f64) -> f64,
) -> Result<CheckResult> {
    let mut witnesses = Vec::new();
    for (i, p) in probes.iter().enumerate() {
        validate_probe(i, p, require_ordered)?;
        let start = p.t.len() - tail_len(p.t.len());
        let (k, value) = (start..p.t.len())
            .map(|k| (k, eval(p.t[k], p.s[k])))
            .fold((start, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });
        if !Relation::Lt.holds(value, threshold, SCALAR_EPS) {
            witnesses.push(Witness::new(
                vec![
                    ("probe", sc(i as f64)),
                    ("n", sc(k as f64)),
                    ("t", sc(p.t[k])),
                    ("s", sc(p.s[k])),
                ],
                "limsup zeta(t_n,s_n) < threshold (tail max)",
                value,
                Relation::Lt,
                threshold,
            ));
        }
    }
    Ok(CheckResult::from_witnesses(name, CheckKind::Falsification, probes.len(), witnesses)
        .with_note("upper limit estimated by the maximum over the last quarter of each probe"))
}

/// Sequence axiom for a simulation function, in the mode its
/// [`SequenceAxiom`] selects. A pass means no probe refuted the axiom.
pub fn check_zeta_sequences(
    zeta: &SimulationFunction,
    probes: &[SequenceProbe],
) -> Result<VerificationReport> {
    let (name, ordered) = match zeta.axiom() {
        SequenceAxiom::Classic => ("zeta_sequences", false),
        SequenceAxiom::Ordered => ("zeta_sequences_ordered", true),
    };
    let check = sequence_check(name, probes, ordered, 0.0, |t, s| zeta.eval(t, s))?;
    Ok(VerificationReport::new().with(check))
}

/// C-class axioms and property `C_G` on `(s, t)` samples.
pub fn check_cclass(g: &CClassFunction, samples: &[(f64, f64)]) -> VerificationReport {
    let c_g = g.c_g();
    let mut bound = Vec::new();
    let mut equality = Vec::new();
    let mut order = Vec::new();
    for &(s, t) in samples {
        let v = g.eval(s, t);
        let inputs = || vec![("s", sc(s)), ("t", sc(t))];
        if !Relation::Le.holds(v, s, SCALAR_EPS) {
            bound.push(Witness::new(inputs(), "G(s,t) <= s", v, Relation::Le, s));
        }
        if (v - s).abs() <= SCALAR_EPS {
            let smaller = s.min(t);
            if !Relation::Le.holds(smaller, 0.0, SCALAR_EPS) {
                equality.push(Witness::new(
                    inputs(),
                    "G(s,t) = s implies min(s,t) = 0",
                    smaller,
                    Relation::Le,
                    0.0,
                ));
            }
        }
        if v > c_g + SCALAR_EPS && !Relation::Gt.holds(s, t, 0.0) {
            order.push(Witness::new(inputs(), "G(s,t) > C_G implies s > t", s, Relation::Gt, t));
        }
    }

    let mut ts: Vec<f64> = samples.iter().map(|&(_, t)| t).collect();
    ts.push(0.0);
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let at_zero = ts
        .iter()
        .filter_map(|&t| {
            let v = g.eval(0.0, t);
            (!Relation::Le.holds(v, c_g, SCALAR_EPS)).then(|| {
                Witness::new(
                    vec![("s", sc(0.0)), ("t", sc(t))],
                    "G(0,t) <= C_G",
                    v,
                    Relation::Le,
                    c_g,
                )
            })
        })
        .collect();

    let n = samples.len();
    VerificationReport::new()
        .with(CheckResult::from_witnesses("cclass_bound", CheckKind::Pointwise, n, bound))
        .with(CheckResult::from_witnesses("cclass_equality", CheckKind::Pointwise, n, equality))
        .with(CheckResult::from_witnesses("cg_implies_order", CheckKind::Pointwise, n, order))
        .with(
            CheckResult::from_witnesses("cg_at_zero", CheckKind::Pointwise, ts.len(), at_zero)
                .with_note("clause 'G(s,t) <= C_G for all t' leaves s unquantified; checked at s = 0"),
        )
}

/// Range `0 <= beta(t) < 1` on samples, plus a falsification probe of the
/// limit property: `beta(t_n) -> 1` must force `t_n -> 0`.
pub fn check_geraghty_beta(
    beta: &GeraghtyBeta,
    samples: &[f64],
    probe_sequences: &[Vec<f64>],
) -> VerificationReport {
    let mut range = Vec::new();
    for &t in samples {
        let v = beta.eval(t);
        if !Relation::Ge.holds(v, 0.0, SCALAR_EPS) {
            range.push(Witness::new(vec![("t", sc(t))], "beta(t) >= 0", v, Relation::Ge, 0.0));
        }
        if !Relation::Lt.holds(v, 1.0, SCALAR_EPS) {
            range.push(Witness::new(vec![("t", sc(t))], "beta(t) < 1", v, Relation::Lt, 1.0));
        }
    }

    let mut limit = Vec::new();
    for (i, seq) in probe_sequences.iter().enumerate() {
        if seq.is_empty() {
            continue;
        }
        let tail = &seq[seq.len() - tail_len(seq.len())..];
        let (t_star, b_star) = tail
            .iter()
            .map(|&t| (t, beta.eval(t)))
            .fold((tail[0], f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });
        let near_one = tail.iter().all(|&t| (1.0 - beta.eval(t)).abs() <= BETA_LIMIT_TOL);
        let floor = tail.iter().copied().fold(f64::INFINITY, f64::min);
        if near_one && floor > BETA_LIMIT_FLOOR {
            limit.push(Witness::new(
                vec![("probe", sc(i as f64)), ("t", sc(t_star)), ("tail_min_t", sc(floor))],
                "beta(t_n) -> 1 forces t_n -> 0",
                b_star,
                Relation::Lt,
                1.0,
            ));
        }
    }

    VerificationReport::new()
        .with(CheckResult::from_witnesses("beta_range", CheckKind::Pointwise, samples.len(), range))
        .with(
            CheckResult::from_witnesses(
                "beta_limit",
                CheckKind::Falsification,
                probe_sequences.len(),
                limit,
            )
            .with_note(format!(
                "a probe refutes membership when its tail stays within {BETA_LIMIT_TOL:e} of 1 \
                 while its arguments stay above {BETA_LIMIT_FLOOR:e}"
            )),
        )
}

/// `alpha(x, y) >= 1` implies `alpha(Tx, Ty) >= 1`.
pub fn check_alpha_admissible(
    mapping: &Mapping,
    alpha: &AlphaFunction,
    samples: &[(Point, Point)],
) -> Result<VerificationReport> {
    let mut witnesses = Vec::new();
    for (x, y) in samples {
        if alpha.eval(x, y) < 1.0 - SCALAR_EPS {
            continue;
        }
        let (tx, ty) = (mapping.apply(x)?, mapping.apply(y)?);
        let after = alpha.eval(&tx, &ty);
        if !Relation::Ge.holds(after, 1.0, SCALAR_EPS) {
            witnesses.push(Witness::new(
                vec![("x", x.clone()), ("y", y.clone())],
                "alpha(x,y) >= 1 implies alpha(Tx,Ty) >= 1",
                after,
                Relation::Ge,
                1.0,
            ));
        }
    }
    Ok(VerificationReport::new().with(CheckResult::from_witnesses(
        "alpha_admissible",
        CheckKind::Pointwise,
        samples.len(),
        witnesses,
    )))
}

/// `alpha(x, z) >= 1` and `alpha(z, y) >= 1` imply `alpha(x, y) >= 1`, on
/// triples given as `(x, z, y)`.
pub fn check_triangular_alpha(
    alpha: &AlphaFunction,
    triples: &[(Point, Point, Point)],
) -> VerificationReport {
    let witnesses = triples
        .iter()
        .filter(|(x, z, y)| {
            alpha.eval(x, z) >= 1.0 - SCALAR_EPS && alpha.eval(z, y) >= 1.0 - SCALAR_EPS
        })
        .filter_map(|(x, z, y)| {
            let v = alpha.eval(x, y);
            (!Relation::Ge.holds(v, 1.0, SCALAR_EPS)).then(|| {
                Witness::new(
                    vec![("x", x.clone()), ("z", z.clone()), ("y", y.clone())],
                    "alpha(x,z) >= 1 and alpha(z,y) >= 1 imply alpha(x,y) >= 1",
                    v,
                    Relation::Ge,
                    1.0,
                )
            })
        })
        .collect();
    VerificationReport::new().with(CheckResult::from_witnesses(
        "alpha_triangular",
        CheckKind::Pointwise,
        triples.len(),
        witnesses,
    ))
}

/// `zeta(t, s) < G(s, t)` on positive samples and, along ordered probes,
/// `limsup zeta(t_n, s_n) < C_G`.
pub fn check_cg_simulation(
    zeta: &SimulationFunction,
    g: &CClassFunction,
    samples: &[(f64, f64)],
    probes: &[SequenceProbe],
) -> Result<VerificationReport> {
    let positive: Vec<_> = samples.iter().filter(|(t, s)| *t > 0.0 && *s > 0.0).collect();
    let pointwise = positive
        .iter()
        .filter_map(|&&(t, s)| {
            let lhs = zeta.eval(t, s);
            let rhs = g.eval(s, t);
            (!Relation::Lt.holds(lhs, rhs, SCALAR_EPS)).then(|| {
                Witness::new(
                    vec![("t", sc(t)), ("s", sc(s))],
                    "zeta(t,s) < G(s,t)",
                    lhs,
                    Relation::Lt,
                    rhs,
                )
            })
        })
        .collect();
    let sequences = sequence_check("cg_sim_sequences", probes, true, g.c_g(), |t, s| {
        zeta.eval(t, s)
    })?;
    Ok(VerificationReport::new()
        .with(CheckResult::from_witnesses(
            "cg_sim_pointwise",
            CheckKind::Pointwise,
            positive.len(),
            pointwise,
        ))
        .with(sequences))
}

/// Checks `zeta(alpha(x,y) d(Tx,Ty), beta(M) M) >= C_G` on every pair, with
/// the carrier's tolerance.
pub fn verify_contraction(
    bundle: &ContractionBundle,
    pairs: &[(Point, Point)],
    space: &MetricSpace,
) -> Result<VerificationReport> {
    let c_g = bundle.g.c_g();
    let eps = space.epsilon();
    let mut witnesses = Vec::new();
    for (x, y) in pairs {
        let lhs = contraction_lhs(bundle, x, y, space)?;
        if !Relation::Ge.holds(lhs, c_g, eps) {
            witnesses.push(Witness::new(
                vec![("x", x.clone()), ("y", y.clone())],
                "zeta(alpha*d(Tx,Ty), beta(M)*M) >= C_G",
                lhs,
                Relation::Ge,
                c_g,
            ));
        }
    }
    Ok(VerificationReport::new().with(CheckResult::from_witnesses(
        "contraction_inequality",
        CheckKind::Pointwise,
        pairs.len(),
        witnesses,
    )))
}
