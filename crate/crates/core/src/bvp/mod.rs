//! `-x'' = f(t, x)` on `[0, 1]` with `x(0) = x(1) = 0`, solved by Picard
//! iteration on the Green's-function operator
//! `(Tx)(t) = int_0^1 G(t, s) f(s, x(s)) ds`.
//!
//! Boundary data is homogeneous: the kernel vanishes at both ends, so the
//! integral form only represents zero Dirichlet values.

mod green;
mod oracle;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub use green::{green_kernel, green_row_integral, panel_weights, GreenQuadrature};
pub use oracle::{fd_oracle, ORACLE_DAMPING, ORACLE_MAX_ITERATIONS};

use crate::error::{Error, Result};
use crate::framework::{
    AlphaFunction, CClassFunction, CheckKind, CheckResult, ContractionBundle, GeraghtyBeta, Mapping,
    Relation, SimulationFunction, VerificationReport, Witness,
};
use crate::metric::{node, sup_metric, GridFunction, MetricSpace, Point, GRID_EPS};
use crate::picard::{picard_iterate, IterationTrace, PicardConfig};

/// Contraction constant of the operator for a 1-Lipschitz right-hand side:
/// `sup_t int_0^1 G(t, s) ds`.
pub const GREEN_BOUND: f64 = 0.125;

#[derive(Clone)]
pub struct Rhs {
    name: String,
    f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Rhs").field(&self.name).finish()
    }
}

impl Rhs {
    pub fn new(name: impl Into<String>, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn zero() -> Self {
        Self::new("zero", |_, _| 0.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("const:{c}"), move |_, _| c)
    }

    /// `pi^2 sin(pi t)`, whose solution is `sin(pi t)`.
    pub fn pi2sin() -> Self {
        Self::new("pi2sin", |t, _| PI * PI * (PI * t).sin())
    }

    pub fn sin_plus_one() -> Self {
        Self::new("sin_plus_one", |_, x| x.sin() + 1.0)
    }

    /// `k x`.
    pub fn linear(k: f64) -> Self {
        Self::new(format!("linear:{k}"), move |_, x| k * x)
    }

    /// Parses `zero`, `const:c`, `pi2sin`, `sin_plus_one` or `linear:k`.
    pub fn parse(selector: &str) -> Result<Self> {
        let number = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Config(format!("bad number {s:?} in rhs selector")))
        };
        match selector.trim() {
            "zero" => Ok(Self::zero()),
            "pi2sin" => Ok(Self::pi2sin()),
            "sin_plus_one" => Ok(Self::sin_plus_one()),
            s => {
                if let Some(c) = s.strip_prefix("const:") {
                    Ok(Self::constant(number(c)?))
                } else if let Some(k) = s.strip_prefix("linear:") {
                    Ok(Self::linear(number(k)?))
                } else {
                    Err(Error::Config(format!("unknown rhs selector {s:?}")))
                }
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, t: f64, x: f64) -> f64 {
        (self.f)(t, x)
    }
}

/// The gate `xi(a, b)`: pairs of functions with `xi(x(t), y(t)) > 0` at every
/// node are admissible.
#[derive(Clone)]
pub struct Gate {
    name: String,
    f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Gate").field(&self.name).finish()
    }
}

impl Default for Gate {
    fn default() -> Self {
        Self::new("xi = 1", |_, _| 1.0)
    }
}

impl Gate {
    pub fn new(name: impl Into<String>, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, a: f64, b: f64) -> f64 {
        (self.f)(a, b)
    }

    /// `xi(x(t_i), y(t_i)) > 0` at every node.
    pub fn admits(&self, x: &GridFunction, y: &GridFunction) -> bool {
        x.values().iter().zip(y.values()).all(|(a, b)| self.eval(*a, *b) > 0.0)
    }
}

#[derive(Clone, Debug)]
pub struct BvpProblem {
    pub rhs: Rhs,
    /// Grid intervals; even, at least 2.
    pub n: usize,
    pub tolerance: f64,
    pub gate: Gate,
}

impl BvpProblem {
    pub fn new(rhs: Rhs, n: usize, tolerance: f64) -> Result<Self> {
        let p = Self {
            rhs,
            n,
            tolerance,
            gate: Gate::default(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_gate(mut self, gate: Gate) -> Self {
        self.gate = gate;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !self.n.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "grid size n must be even and at least 2, got {}",
                self.n
            )));
        }
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }

    pub fn space(&self) -> MetricSpace {
        MetricSpace::grid(self.n).expect("validated grid size")
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(|i| node(i, self.n))
    }
}

/// The integral operator with its quadrature weights precomputed.
#[derive(Clone, Debug)]
pub struct BvpOperator {
    problem: BvpProblem,
    quadrature: Arc<GreenQuadrature>,
}

impl BvpOperator {
    pub fn new(problem: &BvpProblem) -> Result<Self> {
        problem.validate()?;
        Ok(Self {
            problem: problem.clone(),
            quadrature: Arc::new(GreenQuadrature::new(problem.n)?),
        })
    }

    pub fn problem(&self) -> &BvpProblem {
        &self.problem
    }

    pub fn quadrature(&self) -> &GreenQuadrature {
        &self.quadrature
    }

    pub fn apply(&self, x: &GridFunction) -> Result<GridFunction> {
        let n = self.problem.n;
        if x.intervals() != n {
            return Err(Error::Dimension {
                left: x.len(),
                right: n + 1,
            });
        }
        let mut phi = Vec::with_capacity(n + 1);
        for (i, xi) in x.values().iter().enumerate() {
            let v = self.problem.rhs.eval(node(i, n), *xi);
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    value: v,
                    context: format!("f(t, x) at node {i}"),
                });
            }
            phi.push(v);
        }
        let mut out = self.quadrature.apply(&phi);
        out[0] = 0.0;
        out[n] = 0.0;
        GridFunction::new(out)
    }

    pub fn to_mapping(&self) -> Mapping {
        let op = self.clone();
        Mapping::new(format!("bvp_operator[{}]", self.problem.rhs.name()), move |p| {
            Ok(Point::Grid(op.apply(p.as_grid()?)?))
        })
    }
}

/// One application of the integral operator.
pub fn integral_operator(problem: &BvpProblem, x: &GridFunction) -> Result<GridFunction> {
    BvpOperator::new(problem)?.apply(x)
}

#[derive(Clone, Debug)]
pub struct BvpSolution {
    pub x: GridFunction,
    pub trace: IterationTrace,
    /// Largest observed gap ratio, when any ratio was defined.
    pub contraction_estimate: Option<f64>,
    /// `max_i |-(x_{i-1} - 2 x_i + x_{i+1}) / h^2 - f(t_i, x_i)|` over interior
    /// nodes.
    pub residual: f64,
}

impl BvpSolution {
    pub fn converged(&self) -> bool {
        self.trace.converged()
    }
}

/// Second-difference residual of a grid function against the equation.
pub fn second_difference_residual(problem: &BvpProblem, x: &GridFunction) -> f64 {
    let n = x.intervals();
    let h2 = (1.0 / n as f64).powi(2);
    let v = x.values();
    (1..n)
        .map(|i| {
            let lap = -(v[i - 1] - 2.0 * v[i] + v[i + 1]) / h2;
            (lap - problem.rhs.eval(node(i, n), v[i])).abs()
        })
        .fold(0.0, f64::max)
}

/// Picard iteration on the integral operator from `x0 = 0`.
pub fn solve_bvp(problem: &BvpProblem, cfg: &PicardConfig) -> Result<BvpSolution> {
    let op = BvpOperator::new(problem)?;
    let x0 = Point::Grid(GridFunction::zeros(problem.n));
    let trace = picard_iterate(&op.to_mapping(), &x0, cfg, &problem.space())?;
    let x = trace.last().as_grid()?.clone();
    let residual = second_difference_residual(problem, &x);
    Ok(BvpSolution {
        contraction_estimate: trace.max_ratio(),
        residual,
        x,
        trace,
    })
}

/// `alpha(x, y) = 1` if the gate admits the pair at every node, else 0.
pub fn gate_alpha(gate: &Gate) -> AlphaFunction {
    let gate = gate.clone();
    AlphaFunction::new(format!("alpha_gate: [{}]", gate.name()), move |x, y| {
        match (x, y) {
            (Point::Grid(a), Point::Grid(b)) if gate.admits(a, b) => 1.0,
            _ => 0.0,
        }
    })
}

/// `zeta(t, s) = s/4 - t`, `beta = 1/2`, `G(s, t) = s - t` with `C_G = 0`,
/// and the gate-induced `alpha`: the instantiation under which
/// `||Tx - Ty|| <= M/8` is exactly the contraction inequality.
pub fn default_bundle(problem: &BvpProblem) -> Result<ContractionBundle> {
    Ok(ContractionBundle {
        mapping: BvpOperator::new(problem)?.to_mapping(),
        alpha: gate_alpha(&problem.gate),
        beta: GeraghtyBeta::constant(0.5),
        zeta: SimulationFunction::linear(0.25),
        g: CClassFunction::difference(0.0)?,
    })
}

fn nearest_node(t: f64, n: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t={t} outside [0, 1]")));
    }
    Ok((t * n as f64).round() as usize)
}

/// `|f(t,a) - f(t,b)| <= max{|a-b|, |a-(Ta)(t)|, |b-(Tb)(t)|}` on triples
/// `(t, a, b)` admitted by the gate, where `a` and `b` enter the operator
/// as constant functions and `t` is snapped to the nearest grid node.
pub fn verify_condition_i(
    problem: &BvpProblem,
    op: &BvpOperator,
    samples: &[(f64, f64, f64)],
) -> Result<VerificationReport> {
    let n = problem.n;
    let mut checked = 0;
    let mut witnesses = Vec::new();
    for &(t, a, b) in samples {
        if problem.gate.eval(a, b) <= 0.0 {
            continue;
        }
        checked += 1;
        let i = nearest_node(t, n)?;
        let ti = node(i, n);
        let ta = op.apply(&GridFunction::constant(n, a)?)?.values()[i];
        let tb = op.apply(&GridFunction::constant(n, b)?)?.values()[i];
        let lhs = (problem.rhs.eval(ti, a) - problem.rhs.eval(ti, b)).abs();
        let rhs = (a - b).abs().max((a - ta).abs()).max((b - tb).abs());
        if !Relation::Le.holds(lhs, rhs, GRID_EPS) {
            witnesses.push(Witness::new(
                vec![("t", Point::Scalar(ti)), ("a", Point::Scalar(a)), ("b", Point::Scalar(b))],
                "|f(t,a)-f(t,b)| <= max{|a-b|,|a-Ta(t)|,|b-Tb(t)|}",
                lhs,
                Relation::Le,
                rhs,
            ));
        }
    }
    Ok(VerificationReport::new().with(CheckResult::from_witnesses(
        "condition_i",
        CheckKind::Pointwise,
        checked,
        witnesses,
    )))
}

/// `||Tx - Ty|| <= M(x, y) / 8` on sampled pairs of grid functions.
pub fn verify_contraction_bound(
    problem: &BvpProblem,
    pairs: &[(GridFunction, GridFunction)],
) -> Result<VerificationReport> {
    let op = BvpOperator::new(problem)?;
    let mut witnesses = Vec::new();
    for (x, y) in pairs {
        let (tx, ty) = (op.apply(x)?, op.apply(y)?);
        let m = sup_metric(x, y)?
            .max(sup_metric(x, &tx)?)
            .max(sup_metric(y, &ty)?);
        let lhs = sup_metric(&tx, &ty)?;
        let rhs = GREEN_BOUND * m;
        if !Relation::Le.holds(lhs, rhs, GRID_EPS) {
            witnesses.push(Witness::new(
                vec![("x", Point::Grid(x.clone())), ("y", Point::Grid(y.clone()))],
                "||Tx - Ty|| <= M(x,y)/8",
                lhs,
                Relation::Le,
                rhs,
            ));
        }
    }
    Ok(VerificationReport::new().with(CheckResult::from_witnesses(
        "contraction_bound",
        CheckKind::Pointwise,
        pairs.len(),
        witnesses,
    )))
}

/// Finite checks of the gate conditions: `xi(x0(t), Tx0(t)) >= 0` at the
/// start point, gate preservation `xi(x(t),y(t)) > 0 => xi(Tx(t),Ty(t)) > 0`
/// on sampled pairs, and, along a Picard trace, `xi(x_n(t), x_{n+1}(t)) > 0`
/// for all `n` implying `xi(x_n(t), x(t)) > 0` against the final iterate.
pub fn check_gate_conditions(
    problem: &BvpProblem,
    x0: &GridFunction,
    pairs: &[(GridFunction, GridFunction)],
    trace: Option<&IterationTrace>,
) -> Result<VerificationReport> {
    let op = BvpOperator::new(problem)?;
    let gate = &problem.gate;
    let n = problem.n;

    let tx0 = op.apply(x0)?;
    let start = (0..=n)
        .filter_map(|i| {
            let v = gate.eval(x0.values()[i], tx0.values()[i]);
            (!Relation::Ge.holds(v, 0.0, 0.0)).then(|| {
                Witness::new(
                    vec![("t", Point::Scalar(node(i, n)))],
                    "xi(x0(t), Tx0(t)) >= 0",
                    v,
                    Relation::Ge,
                    0.0,
                )
            })
        })
        .collect();

    let mut preserved = Vec::new();
    for (x, y) in pairs {
        let (tx, ty) = (op.apply(x)?, op.apply(y)?);
        for i in 0..=n {
            if gate.eval(x.values()[i], y.values()[i]) > 0.0 {
                let v = gate.eval(tx.values()[i], ty.values()[i]);
                if !Relation::Gt.holds(v, 0.0, 0.0) {
                    preserved.push(Witness::new(
                        vec![
                            ("t", Point::Scalar(node(i, n))),
                            ("x", Point::Grid(x.clone())),
                            ("y", Point::Grid(y.clone())),
                        ],
                        "xi(x(t),y(t)) > 0 implies xi(Tx(t),Ty(t)) > 0",
                        v,
                        Relation::Gt,
                        0.0,
                    ));
                }
            }
        }
    }

    let mut report = VerificationReport::new()
        .with(CheckResult::from_witnesses("condition_ii", CheckKind::Pointwise, n + 1, start))
        .with(CheckResult::from_witnesses(
            "condition_iii",
            CheckKind::Pointwise,
            pairs.len(),
            preserved,
        ));

    if let Some(trace) = trace {
        let orbit: Vec<&GridFunction> = trace
            .iterates
            .iter()
            .map(Point::as_grid)
            .collect::<Result<_>>()?;
        let limit = *orbit.last().expect("non-empty trace");
        let mut sequence = Vec::new();
        for i in 0..=n {
            let chained = orbit
                .windows(2)
                .all(|w| gate.eval(w[0].values()[i], w[1].values()[i]) > 0.0);
            if !chained {
                continue;
            }
            for (k, xk) in orbit.iter().enumerate() {
                let v = gate.eval(xk.values()[i], limit.values()[i]);
                if !Relation::Gt.holds(v, 0.0, 0.0) {
                    sequence.push(Witness::new(
                        vec![("t", Point::Scalar(node(i, n))), ("n", Point::Scalar(k as f64))],
                        "xi(x_n(t), x(t)) > 0 along a gated orbit",
                        v,
                        Relation::Gt,
                        0.0,
                    ));
                }
            }
        }
        report.push(
            CheckResult::from_witnesses("condition_iv", CheckKind::Falsification, n + 1, sequence)
                .with_note("checked against the final iterate of one observed orbit"),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::{sampling::rng, Status};
    use rand::Rng;

    fn problem(rhs: Rhs) -> BvpProblem {
        BvpProblem::new(rhs, 100, 1e-10).unwrap()
    }

    fn sine_error(x: &GridFunction) -> f64 {
        x.values()
            .iter()
            .enumerate()
            .map(|(i, v)| (v - (PI * x.node(i)).sin()).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn problem_validation() {
        assert!(BvpProblem::new(Rhs::zero(), 1, 1e-6).is_err());
        assert!(BvpProblem::new(Rhs::zero(), 11, 1e-6).is_err());
        assert!(BvpProblem::new(Rhs::zero(), 10, 0.0).is_err());
    }

    #[test]
    fn rhs_selectors() {
        assert_eq!(Rhs::parse("const:2.5").unwrap().eval(0.3, 9.0), 2.5);
        assert_eq!(Rhs::parse("linear:2").unwrap().eval(0.3, 1.5), 3.0);
        assert_eq!(Rhs::parse("zero").unwrap().eval(0.1, 1.0), 0.0);
        assert!(Rhs::parse("const:abc").is_err());
        assert!(Rhs::parse("cubic").is_err());
    }

    #[test]
    fn operator_zero_rhs() {
        let p = problem(Rhs::zero());
        let x = GridFunction::from_fn(100, |t| t.sin()).unwrap();
        assert!(integral_operator(&p, &x).unwrap().values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn operator_constant_rhs_matches_closed_form() {
        let p = problem(Rhs::constant(2.0));
        let x = GridFunction::from_fn(100, |t| 5.0 * t).unwrap();
        let tx = integral_operator(&p, &x).unwrap();
        for (i, v) in tx.values().iter().enumerate() {
            let t = tx.node(i);
            assert!((v - (t - t * t)).abs() < 1e-14);
        }
    }

    #[test]
    fn operator_sine_rhs() {
        let p = problem(Rhs::pi2sin());
        let tx = integral_operator(&p, &GridFunction::zeros(100)).unwrap();
        assert!(sine_error(&tx) < 1e-5, "{}", sine_error(&tx));
        assert_eq!(tx.values()[0], 0.0);
        assert_eq!(tx.values()[100], 0.0);
    }

    #[test]
    fn operator_rejects_wrong_grid_and_non_finite_rhs() {
        let p = problem(Rhs::constant(1.0));
        assert!(integral_operator(&p, &GridFunction::zeros(50)).is_err());
        let bad = problem(Rhs::new("1/x", |_, x| 1.0 / x));
        assert!(matches!(
            integral_operator(&bad, &GridFunction::zeros(100)),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn discrete_maximum_principle() {
        let p = problem(Rhs::new("x^2 + t", |t, x| x * x + t));
        let mut g = rng(3);
        for _ in 0..20 {
            let x = GridFunction::new((0..=100).map(|_| g.random_range(-2.0..2.0)).collect()).unwrap();
            assert!(integral_operator(&p, &x).unwrap().values().iter().all(|v| *v >= 0.0));
        }
    }

    #[test]
    fn solve_sine() {
        let sol = solve_bvp(&problem(Rhs::pi2sin()), &PicardConfig::default()).unwrap();
        assert!(sol.converged());
        assert!(sol.trace.iterations() <= 2);
        assert!(sine_error(&sol.x) < 5e-4);
        // The second difference amplifies quadrature error by 4 / h^2.
        assert!(sol.residual < 0.2, "{}", sol.residual);
    }

    #[test]
    fn solve_zero() {
        let sol = solve_bvp(&problem(Rhs::zero()), &PicardConfig::default()).unwrap();
        assert!(sol.converged());
        assert_eq!(sol.trace.iterations(), 1);
        assert!(sol.x.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn solve_nonlinear_matches_oracle() {
        let p = problem(Rhs::sin_plus_one());
        let sol = solve_bvp(&p, &PicardConfig::default()).unwrap();
        assert!(sol.converged());
        assert!(sol.contraction_estimate.unwrap() <= GREEN_BOUND + 1e-6);
        let oracle = fd_oracle(&p).unwrap();
        let h2 = 1e-4;
        assert!(sup_metric(&sol.x, &oracle).unwrap() <= 10.0 * f64::max(h2, p.tolerance));
        assert_eq!(sol.x.values()[0], 0.0);
        assert_eq!(sol.x.values()[100], 0.0);
    }

    #[test]
    fn condition_i_examples() {
        let triples: Vec<(f64, f64, f64)> = (0..=10)
            .flat_map(|i| {
                [(-1.0, 2.0), (0.3, 0.1), (1.0, 0.0)].map(|(a, b)| (i as f64 / 10.0, a, b))
            })
            .collect();
        let half = problem(Rhs::linear(0.5));
        let op = BvpOperator::new(&half).unwrap();
        assert!(verify_condition_i(&half, &op, &triples).unwrap().passed());

        let sine = problem(Rhs::new("sin x", |_, x| x.sin()));
        let op = BvpOperator::new(&sine).unwrap();
        assert!(verify_condition_i(&sine, &op, &triples).unwrap().passed());

        let double = problem(Rhs::linear(2.0));
        let op = BvpOperator::new(&double).unwrap();
        let r = verify_condition_i(&double, &op, &[(0.5, 1.0, 0.0)]).unwrap();
        let w = r.check("condition_i").unwrap().worst().unwrap().clone();
        // T(const 1)(0.5) = 2 * 1/8, so the max is max{1, 0.75, 0} = 1 < 2.
        assert!((w.lhs - 2.0).abs() < 1e-14);
        assert!((w.rhs - 1.0).abs() < 1e-14);
    }

    #[test]
    fn condition_i_respects_gate() {
        let double = problem(Rhs::linear(2.0)).with_gate(Gate::new("a < b", |a, b| b - a));
        let op = BvpOperator::new(&double).unwrap();
        let r = verify_condition_i(&double, &op, &[(0.5, 1.0, 0.0)]).unwrap();
        assert!(r.passed());
        assert_eq!(r.check("condition_i").unwrap().samples, 0);
    }

    #[test]
    fn contraction_bound_examples() {
        let p = problem(Rhs::linear(0.5));
        let one = GridFunction::constant(100, 1.0).unwrap();
        let zero = GridFunction::zeros(100);
        assert!(verify_contraction_bound(&p, &[(one.clone(), one.clone())]).unwrap().passed());
        assert!(verify_contraction_bound(&p, &[(one.clone(), zero.clone())]).unwrap().passed());
        let op = BvpOperator::new(&p).unwrap();
        let gap = sup_metric(&op.apply(&one).unwrap(), &op.apply(&zero).unwrap()).unwrap();
        assert!((gap - 1.0 / 16.0).abs() < 1e-14);

        let p = problem(Rhs::sin_plus_one());
        let mut g = rng(11);
        let mut random = || GridFunction::new((0..=100).map(|_| g.random_range(0.0..=1.0)).collect()).unwrap();
        let pairs: Vec<_> = (0..50).map(|_| (random(), random())).collect();
        assert!(verify_contraction_bound(&p, &pairs).unwrap().passed());
    }

    #[test]
    fn contraction_bound_violation() {
        let p = problem(Rhs::linear(12.0));
        let one = GridFunction::constant(100, 1.0).unwrap();
        let r = verify_contraction_bound(&p, &[(one, GridFunction::zeros(100))]).unwrap();
        assert_eq!(r.check("contraction_bound").unwrap().status, Status::Fail);
    }

    #[test]
    fn default_bundle_instantiation() {
        let p = BvpProblem::new(Rhs::sin_plus_one(), 20, 1e-10).unwrap();
        let b = default_bundle(&p).unwrap();
        assert_eq!(b.zeta.eval(0.1, 1.0), 0.15);
        assert_eq!(b.beta.eval(7.0), 0.5);
        assert_eq!(b.g.c_g(), 0.0);
        let mut g = rng(5);
        let mut random = || Point::Grid(GridFunction::new((0..=20).map(|_| g.random_range(-1.0..=1.0)).collect()).unwrap());
        let pairs: Vec<_> = (0..30).map(|_| (random(), random())).collect();
        let r = crate::framework::verify_contraction(&b, &pairs, &p.space()).unwrap();
        assert!(r.passed(), "{}", r.to_text(3));
    }

    #[test]
    fn gate_conditions_default_gate() {
        let p = BvpProblem::new(Rhs::sin_plus_one(), 20, 1e-10).unwrap();
        let sol = solve_bvp(&p, &PicardConfig::default()).unwrap();
        let pairs = vec![(GridFunction::zeros(20), GridFunction::constant(20, 1.0).unwrap())];
        let r = check_gate_conditions(&p, &GridFunction::zeros(20), &pairs, Some(&sol.trace)).unwrap();
        assert!(r.passed(), "{}", r.to_text(3));
        assert!(r.check("condition_iv").is_some());
    }

    #[test]
    fn gate_conditions_detect_broken_gate() {
        // xi(a, b) = b - a - 0.5 forbids the start point's image.
        let p = BvpProblem::new(Rhs::sin_plus_one(), 20, 1e-10)
            .unwrap()
            .with_gate(Gate::new("b - a - 0.5", |a, b| b - a - 0.5));
        let r = check_gate_conditions(&p, &GridFunction::zeros(20), &[], None).unwrap();
        assert!(!r.check("condition_ii").unwrap().passed());
    }
}
