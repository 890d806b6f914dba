use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metric::Point;

type Unary = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type Binary = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type PointPair = Arc<dyn Fn(&Point, &Point) -> f64 + Send + Sync>;
type PointMap = Arc<dyn Fn(&Point) -> Result<Point> + Send + Sync>;

/// A candidate member of the Geraghty class: `beta: [0, inf) -> [0, 1)`.
#[derive(Clone)]
pub struct GeraghtyBeta {
    name: String,
    f: Unary,
}

impl GeraghtyBeta {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    /// `1 / (1 + t)`. Note that this touches 1 at `t = 0`.
    pub fn inverse_one_plus() -> Self {
        Self::new("beta_inv: 1/(1+t)", |t| 1.0 / (1.0 + t))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("beta_const: {c}"), move |_| c)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }
}

/// Which sequence axiom a simulation function is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceAxiom {
    /// Any positive sequences with a common positive limit.
    Classic,
    /// Additionally requires `t_n < s_n`.
    Ordered,
}

/// `zeta(t, s)`, where `t` is the image distance and `s` the scaled reference
/// distance.
#[derive(Clone)]
pub struct SimulationFunction {
    name: String,
    f: Binary,
    axiom: SequenceAxiom,
}

impl SimulationFunction {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
            axiom: SequenceAxiom::Classic,
        }
    }

    pub fn with_axiom(mut self, axiom: SequenceAxiom) -> Self {
        self.axiom = axiom;
        self
    }

    /// `lambda * s - t` for `lambda` in `(0, 1)`.
    pub fn linear(lambda: f64) -> Self {
        Self::new(format!("zeta1: {lambda}*s - t"), move |t, s| lambda * s - t)
    }

    /// `s * phi(s) - t` with `phi: [0, inf) -> [0, 1)`.
    ///
    /// The usual statement of this family bounds the upper limit of a second
    /// symbol; it is taken to be `phi` itself here.
    pub fn with_phi(
        phi_name: &str,
        phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(format!("zeta2: s*phi(s) - t, phi = {phi_name}"), move |t, s| {
            s * phi(s) - t
        })
    }

    /// `s - psi(s) - t` with `psi` continuous and vanishing only at 0.
    pub fn with_psi(
        psi_name: &str,
        psi: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(format!("zeta3: s - psi(s) - t, psi = {psi_name}"), move |t, s| {
            s - psi(s) - t
        })
    }

    /// `s / (s + 1) - t`.
    pub fn rational() -> Self {
        Self::new("zeta_rational: s/(s+1) - t", |t, s| s / (s + 1.0) - t)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn axiom(&self) -> SequenceAxiom {
        self.axiom
    }

    pub fn eval(&self, t: f64, s: f64) -> f64 {
        (self.f)(t, s)
    }
}

/// `G(s, t)` together with its threshold constant `C_G`.
#[derive(Clone)]
pub struct CClassFunction {
    name: String,
    f: Binary,
    c_g: f64,
}

impl CClassFunction {
    pub fn new(
        name: impl Into<String>,
        c_g: f64,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(c_g >= 0.0) || !c_g.is_finite() {
            return Err(Error::Domain(format!("C_G must be finite and >= 0, got {c_g}")));
        }
        Ok(Self {
            name: name.into(),
            f: Arc::new(f),
            c_g,
        })
    }

    /// `s - t` with `C_G = r`.
    pub fn difference(r: f64) -> Result<Self> {
        Self::new(format!("cclass_a: s - t, C_G = {r}"), r, |s, t| s - t)
    }

    /// `s - (2 + t) t / (1 + t)` with `C_G = 0`.
    pub fn rational_shift() -> Self {
        Self::new("cclass_b: s - (2+t)t/(1+t), C_G = 0", 0.0, |s, t| {
            s - (2.0 + t) * t / (1.0 + t)
        })
        .expect("constant C_G is valid")
    }

    /// `s / (1 + k t)` with `C_G = r / (1 + k)`, `k >= 1`, `r >= 2`.
    pub fn damped(k: f64, r: f64) -> Result<Self> {
        if !(k >= 1.0) {
            return Err(Error::Domain(format!("cclass_c needs k >= 1, got {k}")));
        }
        if !(r >= 2.0) {
            return Err(Error::Domain(format!("cclass_c needs r >= 2, got {r}")));
        }
        Self::new(
            format!("cclass_c: s/(1+{k}t), C_G = {r}/(1+{k})"),
            r / (1.0 + k),
            move |s, t| s / (1.0 + k * t),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn c_g(&self) -> f64 {
        self.c_g
    }

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        (self.f)(s, t)
    }
}

/// `alpha: X x X -> [0, inf)`.
#[derive(Clone)]
pub struct AlphaFunction {
    name: String,
    f: PointPair,
}

impl AlphaFunction {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&Point, &Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn constant_one() -> Self {
        Self::new("alpha_one", |_, _| 1.0)
    }

    /// 1 when both scalars lie in `[lo, hi]`, 0 otherwise (also 0 for grid
    /// points).
    pub fn box_indicator(lo: f64, hi: f64) -> Self {
        Self::new(format!("alpha_indicator: [{lo},{hi}]^2"), move |x, y| {
            let inside = |p: &Point| matches!(p, Point::Scalar(v) if *v >= lo && *v <= hi);
            if inside(x) && inside(y) {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: &Point, y: &Point) -> f64 {
        (self.f)(x, y)
    }
}

/// A self-map `T` of a carrier.
#[derive(Clone)]
pub struct Mapping {
    name: String,
    f: PointMap,
}

impl Mapping {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&Point) -> Result<Point> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    /// Lifts a real function to a map on scalar points.
    pub fn scalar(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(name, move |p| {
            let y = f(p.as_scalar()?);
            if !y.is_finite() {
                return Err(Error::NonFinite {
                    value: y,
                    context: format!("image of {p}"),
                });
            }
            Ok(Point::Scalar(y))
        })
    }

    pub fn identity() -> Self {
        Self::new("identity", |p| Ok(p.clone()))
    }

    /// `x -> a x + b` on scalars.
    pub fn affine(a: f64, b: f64) -> Self {
        Self::scalar(format!("affine: {a}*x + {b}"), move |x| a * x + b)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        (self.f)(x)
    }
}

/// One contraction hypothesis: a mapping with its `alpha`, `beta`, `zeta`
/// and C-class function.
#[derive(Clone, Debug)]
pub struct ContractionBundle {
    pub mapping: Mapping,
    pub alpha: AlphaFunction,
    pub beta: GeraghtyBeta,
    pub zeta: SimulationFunction,
    pub g: CClassFunction,
}

macro_rules! debug_by_name {
    ($($ty:ty),*) => {$(
        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_tuple(stringify!($ty)).field(&self.name).finish()
            }
        }
    )*};
}

debug_by_name!(GeraghtyBeta, SimulationFunction, CClassFunction, AlphaFunction, Mapping);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cclass_parameter_validation() {
        assert!(CClassFunction::damped(0.5, 2.0).is_err());
        assert!(CClassFunction::damped(2.0, 1.0).is_err());
        assert!(CClassFunction::difference(-1.0).is_err());
        let c = CClassFunction::damped(2.0, 2.0).unwrap();
        assert!((c.c_g() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.eval(3.0, 1.0), 1.0);
    }

    #[test]
    fn scalar_mapping_rejects_grid_and_overflow() {
        let t = Mapping::affine(3.0, 0.0);
        assert!(t.apply(&Point::Grid(crate::metric::GridFunction::zeros(2))).is_err());
        assert!(t.apply(&Point::Scalar(f64::MAX)).is_err());
        assert_eq!(t.apply(&Point::Scalar(2.0)).unwrap(), Point::Scalar(6.0));
    }

    #[test]
    fn indicator_alpha() {
        let a = AlphaFunction::box_indicator(0.0, 1.0);
        assert_eq!(a.eval(&Point::Scalar(0.0), &Point::Scalar(1.0)), 1.0);
        assert_eq!(a.eval(&Point::Scalar(0.5), &Point::Scalar(1.5)), 0.0);
    }
}
