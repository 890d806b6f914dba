//! Partial orders and the indicator `alpha(x, y) = [x <= y]` they induce,
//! which turns monotone-operator hypotheses into contraction-framework
//! inputs.

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::framework::{
    AlphaFunction, CheckKind, CheckResult, Mapping, Relation, VerificationReport, Witness,
};
use crate::metric::{MetricSpace, Point};

type Comparator = Arc<dyn Fn(&Point, &Point) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct PartialOrder {
    name: String,
    leq: Comparator,
}

impl fmt::Debug for PartialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("PartialOrder").field(&self.name).finish()
    }
}

impl PartialOrder {
    pub fn new(
        name: impl Into<String>,
        leq: impl Fn(&Point, &Point) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            leq: Arc::new(leq),
        }
    }

    /// `x <= y` on scalars.
    pub fn natural() -> Self {
        Self::new("natural", |x, y| match (x, y) {
            (Point::Scalar(a), Point::Scalar(b)) => a <= b,
            _ => false,
        })
    }

    /// `x(t_i) <= y(t_i)` at every grid node.
    pub fn pointwise() -> Self {
        Self::new("pointwise", |x, y| match (x, y) {
            (Point::Grid(a), Point::Grid(b)) => {
                a.len() == b.len() && a.values().iter().zip(b.values()).all(|(p, q)| p <= q)
            }
            _ => false,
        })
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "natural" => Some(Self::natural()),
            "pointwise" => Some(Self::pointwise()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn leq(&self, x: &Point, y: &Point) -> bool {
        (self.leq)(x, y)
    }
}

/// Reflexivity, metric antisymmetry and transitivity on the sampled points
/// (transitivity over all ordered triples of samples).
pub fn check_order_axioms(
    order: &PartialOrder,
    samples: &[Point],
    space: &MetricSpace,
) -> Result<VerificationReport> {
    let eps = space.epsilon();

    let reflexive = samples
        .iter()
        .filter(|x| !order.leq(x, x))
        .map(|x| Witness::new(vec![("x", x.clone())], "x <= x", 0.0, Relation::Ge, 1.0))
        .collect();

    let mut antisymmetric = Vec::new();
    for (i, x) in samples.iter().enumerate() {
        for y in &samples[i + 1..] {
            if order.leq(x, y) && order.leq(y, x) {
                let d = space.distance(x, y)?;
                if !Relation::Le.holds(d, 0.0, eps) {
                    antisymmetric.push(Witness::new(
                        vec![("x", x.clone()), ("y", y.clone())],
                        "x <= y and y <= x imply d(x,y) = 0",
                        d,
                        Relation::Le,
                        0.0,
                    ));
                }
            }
        }
    }

    let mut transitive = Vec::new();
    for x in samples {
        for z in samples {
            if !order.leq(x, z) {
                continue;
            }
            for y in samples {
                if order.leq(z, y) && !order.leq(x, y) {
                    transitive.push(Witness::new(
                        vec![("x", x.clone()), ("z", z.clone()), ("y", y.clone())],
                        "x <= z and z <= y imply x <= y",
                        0.0,
                        Relation::Ge,
                        1.0,
                    ));
                }
            }
        }
    }

    let n = samples.len();
    Ok(VerificationReport::new()
        .with(CheckResult::from_witnesses("order_reflexive", CheckKind::Pointwise, n, reflexive))
        .with(CheckResult::from_witnesses(
            "order_antisymmetric",
            CheckKind::Pointwise,
            n * n.saturating_sub(1) / 2,
            antisymmetric,
        ))
        .with(CheckResult::from_witnesses(
            "order_transitive",
            CheckKind::Pointwise,
            n * n * n,
            transitive,
        )))
}

/// `alpha(x, y) = 1` if `x <= y`, else 0.
pub fn alpha_from_order(order: &PartialOrder) -> AlphaFunction {
    let order = order.clone();
    AlphaFunction::new(format!("alpha_order: [{}]", order.name()), move |x, y| {
        if order.leq(x, y) {
            1.0
        } else {
            0.0
        }
    })
}

/// `x <= y` implies `Tx <= Ty` on every sampled pair.
pub fn check_increasing(
    mapping: &Mapping,
    order: &PartialOrder,
    pairs: &[(Point, Point)],
) -> Result<VerificationReport> {
    let mut witnesses = Vec::new();
    for (x, y) in pairs {
        if !order.leq(x, y) {
            continue;
        }
        let (tx, ty) = (mapping.apply(x)?, mapping.apply(y)?);
        if !order.leq(&tx, &ty) {
            witnesses.push(Witness::new(
                vec![("x", x.clone()), ("y", y.clone()), ("Tx", tx), ("Ty", ty)],
                "x <= y implies Tx <= Ty",
                0.0,
                Relation::Ge,
                1.0,
            ));
        }
    }
    Ok(VerificationReport::new().with(CheckResult::from_witnesses(
        "increasing",
        CheckKind::Pointwise,
        pairs.len(),
        witnesses,
    )))
}

/// `x1 <= T x1`.
pub fn check_initial_point(mapping: &Mapping, order: &PartialOrder, x1: &Point) -> Result<bool> {
    Ok(order.leq(x1, &mapping.apply(x1)?))
}

/// Checks that the first `horizon` Picard steps from `x1` form a chain
/// `x_n <= x_{n+1}`.
pub fn check_orbit_chain(
    mapping: &Mapping,
    order: &PartialOrder,
    x1: &Point,
    horizon: usize,
) -> Result<VerificationReport> {
    let mut witnesses = Vec::new();
    let mut current = x1.clone();
    for n in 0..horizon {
        let next = mapping.apply(&current)?;
        if !order.leq(&current, &next) {
            witnesses.push(Witness::new(
                vec![("n", Point::Scalar(n as f64)), ("x_n", current.clone())],
                "x_n <= x_{n+1}",
                0.0,
                Relation::Ge,
                1.0,
            ));
        }
        current = next;
    }
    Ok(VerificationReport::new().with(CheckResult::from_witnesses(
        "orbit_chain",
        CheckKind::Pointwise,
        horizon,
        witnesses,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::check_triangular_alpha;
    use crate::framework::sampling::{grid_pairs, linspace, to_point_pairs};
    use crate::metric::GridFunction;
    use proptest::prelude::*;

    fn sc(x: f64) -> Point {
        Point::Scalar(x)
    }

    #[test]
    fn order_alpha_examples() {
        let alpha = alpha_from_order(&PartialOrder::natural());
        assert_eq!(alpha.eval(&sc(0.2), &sc(0.7)), 1.0);
        assert_eq!(alpha.eval(&sc(0.7), &sc(0.2)), 0.0);
        let pw = alpha_from_order(&PartialOrder::pointwise());
        let zero = Point::Grid(GridFunction::zeros(10));
        let one = Point::Grid(GridFunction::constant(10, 1.0).unwrap());
        assert_eq!(pw.eval(&zero, &one), 1.0);
        assert_eq!(pw.eval(&one, &zero), 0.0);
    }

    #[test]
    fn builtin_orders_satisfy_axioms() {
        let pts: Vec<Point> = linspace(0.0, 1.0, 11).into_iter().map(sc).collect();
        let space = MetricSpace::interval(0.0, 1.0).unwrap();
        assert!(check_order_axioms(&PartialOrder::natural(), &pts, &space).unwrap().passed());

        let grid = MetricSpace::grid(4).unwrap();
        let fns: Vec<Point> = [0.0, 0.5, 1.0]
            .iter()
            .flat_map(|&a| {
                [0.0, 1.0].map(|b| Point::Grid(GridFunction::from_fn(4, |t| a + b * t).unwrap()))
            })
            .collect();
        assert!(check_order_axioms(&PartialOrder::pointwise(), &fns, &grid).unwrap().passed());
    }

    #[test]
    fn non_order_is_caught() {
        let everything = PartialOrder::new("total", |_, _| true);
        let pts = vec![sc(0.0), sc(1.0)];
        let space = MetricSpace::interval(0.0, 1.0).unwrap();
        let r = check_order_axioms(&everything, &pts, &space).unwrap();
        assert!(!r.check("order_antisymmetric").unwrap().passed());

        let strict = PartialOrder::new("strict", |x, y| x.as_scalar().unwrap() < y.as_scalar().unwrap());
        let r = check_order_axioms(&strict, &pts, &space).unwrap();
        assert!(!r.check("order_reflexive").unwrap().passed());
    }

    #[test]
    fn increasing_examples() {
        let order = PartialOrder::natural();
        let pairs = to_point_pairs(&grid_pairs(0.0, 1.0, 21));
        let third = Mapping::scalar("x/3", |x| x / 3.0);
        assert!(check_increasing(&third, &order, &pairs).unwrap().passed());
        let constant = Mapping::scalar("0.4", |_| 0.4);
        assert!(check_increasing(&constant, &order, &pairs).unwrap().passed());

        let flip = Mapping::affine(-1.0, 1.0);
        let r = check_increasing(&flip, &order, &[(sc(0.0), sc(1.0))]).unwrap();
        let w = r.check("increasing").unwrap().worst().unwrap().clone();
        assert_eq!((w.scalar("Tx"), w.scalar("Ty")), (Some(1.0), Some(0.0)));
    }

    #[test]
    fn initial_point_examples() {
        let order = PartialOrder::natural();
        assert!(check_initial_point(&Mapping::affine(0.5, 0.25), &order, &sc(0.0)).unwrap());
        let third = Mapping::scalar("x/3", |x| x / 3.0);
        assert!(check_initial_point(&third, &order, &sc(0.0)).unwrap());
        assert!(!check_initial_point(&third, &order, &sc(1.0)).unwrap());
    }

    #[test]
    fn increasing_orbit_is_a_chain() {
        let order = PartialOrder::natural();
        let t = Mapping::affine(0.5, 0.25);
        assert!(check_orbit_chain(&t, &order, &sc(0.0), 30).unwrap().passed());
        assert!(!check_orbit_chain(&t, &order, &sc(1.0), 5).unwrap().passed());
    }

    proptest! {
        #[test]
        fn order_alpha_is_triangular(xs in proptest::collection::vec(-5.0..5.0_f64, 3..8)) {
            let alpha = alpha_from_order(&PartialOrder::natural());
            let pts: Vec<Point> = xs.into_iter().map(sc).collect();
            let mut triples = Vec::new();
            for x in &pts { for z in &pts { for y in &pts {
                triples.push((x.clone(), z.clone(), y.clone()));
            }}}
            prop_assert!(check_triangular_alpha(&alpha, &triples).passed());
        }

        #[test]
        fn increasing_map_is_order_admissible(a in 0.0..2.0_f64, b in -1.0..1.0_f64) {
            let order = PartialOrder::natural();
            let t = Mapping::affine(a, b);
            let pairs = to_point_pairs(&grid_pairs(-1.0, 1.0, 9));
            prop_assert!(check_increasing(&t, &order, &pairs).unwrap().passed());
            let alpha = alpha_from_order(&order);
            prop_assert!(crate::framework::check_alpha_admissible(&t, &alpha, &pairs).unwrap().passed());
        }
    }
}
