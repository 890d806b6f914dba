//! Carriers and metrics.
//!
//! Two kinds of points are supported: scalars on a real interval with the
//! absolute-difference metric, and continuous functions on `[0, 1]`
//! represented by their values on a uniform grid of `n + 1` nodes, compared
//! with the sup metric. Non-finite values are rejected at construction.

use std::fmt;
use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Strict-inequality and equality tolerance for scalar checks.
pub const SCALAR_EPS: f64 = 1e-12;
/// Strict-inequality and equality tolerance for grid-function checks.
pub const GRID_EPS: f64 = 1e-9;
/// Default number of grid intervals.
pub const DEFAULT_GRID_INTERVALS: usize = 100;

/// Values of a continuous function on the uniform grid `t_i = i / n`,
/// `i = 0..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Domain(format!(
                "a grid function needs at least 2 nodes, got {}",
                values.len()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite {
                value: *v,
                context: format!("grid node {i}"),
            });
        }
        Ok(Self { values })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new((0..=n).map(|i| f(node(i, n))).collect())
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::new(vec![c; n + 1])
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![0.0; n + 1],
        }
    }

    /// Number of grid intervals (`len - 1`).
    pub fn intervals(&self) -> usize {
        self.values.len() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn node(&self, i: usize) -> f64 {
        node(i, self.intervals())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "value"])?;
        for (i, v) in self.values.iter().enumerate() {
            out.write_record([self.node(i).to_string(), v.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads `t,value` rows. Nodes must form the uniform grid over `[0, 1]`.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut input = csv::Reader::from_reader(r);
        let mut rows = Vec::new();
        for record in input.records() {
            let record = record?;
            let parse = |k: usize| -> Result<f64> {
                let field = record.get(k).ok_or_else(|| {
                    Error::Domain(format!("row {} is missing column {k}", rows.len() + 1))
                })?;
                field.trim().parse::<f64>().map_err(|e| {
                    Error::Domain(format!("row {}: bad number {field:?}: {e}", rows.len() + 1))
                })
            };
            rows.push((parse(0)?, parse(1)?));
        }
        if rows.len() < 2 {
            return Err(Error::Domain("grid CSV needs at least 2 rows".into()));
        }
        let n = rows.len() - 1;
        for (i, (t, _)) in rows.iter().enumerate() {
            if (t - node(i, n)).abs() > 1e-9 {
                return Err(Error::Domain(format!(
                    "row {i}: node t={t} is not on the uniform grid with {n} intervals"
                )));
            }
        }
        Self::new(rows.into_iter().map(|(_, v)| v).collect())
    }
}

/// The `i`-th node of the uniform grid with `n` intervals over `[0, 1]`.
pub fn node(i: usize, n: usize) -> f64 {
    // The last node is exactly 1.0 rather than n * (1/n).
    i as f64 / n as f64
}

/// An element of a carrier.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Scalar(f64),
    Grid(GridFunction),
}

impl Point {
    pub fn scalar(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::NonFinite {
                value: x,
                context: "scalar point".into(),
            });
        }
        Ok(Point::Scalar(x))
    }

    pub fn as_scalar(&self) -> Result<f64> {
        match self {
            Point::Scalar(x) => Ok(*x),
            Point::Grid(_) => Err(Error::Kind("expected a scalar, found a grid function".into())),
        }
    }

    pub fn as_grid(&self) -> Result<&GridFunction> {
        match self {
            Point::Grid(g) => Ok(g),
            Point::Scalar(_) => Err(Error::Kind("expected a grid function, found a scalar".into())),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Point::Scalar(x) => x.is_finite(),
            Point::Grid(g) => g.values.iter().all(|v| v.is_finite()),
        }
    }
}

impl From<GridFunction> for Point {
    fn from(g: GridFunction) -> Self {
        Point::Grid(g)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Scalar(x) => write!(f, "{x}"),
            Point::Grid(g) => {
                let sup = g.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                write!(f, "grid[n={}](sup={sup})", g.intervals())
            }
        }
    }
}

/// `|x - y|`.
pub fn scalar_metric(x: f64, y: f64) -> Result<f64> {
    for v in [x, y] {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                value: v,
                context: "scalar metric argument".into(),
            });
        }
    }
    Ok((x - y).abs())
}

/// `max_i |x(t_i) - y(t_i)|`.
pub fn sup_metric(x: &GridFunction, y: &GridFunction) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.values
        .iter()
        .zip(&y.values)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Carrier {
    /// Closed interval `[lo, hi]`; `hi` may be `+inf` for a half-line.
    Interval { lo: f64, hi: f64 },
    /// Grid-sampled `C[0, 1]` with `n` intervals.
    Grid { n: usize },
}

/// A carrier together with its metric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricSpace {
    carrier: Carrier,
}

impl MetricSpace {
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || !lo.is_finite() || lo > hi {
            return Err(Error::Domain(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self {
            carrier: Carrier::Interval { lo, hi },
        })
    }

    /// `[0, inf)`.
    pub fn half_line() -> Self {
        Self {
            carrier: Carrier::Interval {
                lo: 0.0,
                hi: f64::INFINITY,
            },
        }
    }

    pub fn grid(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("grid needs at least one interval".into()));
        }
        Ok(Self {
            carrier: Carrier::Grid { n },
        })
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    /// Tolerance used for strict inequalities on this space.
    pub fn epsilon(&self) -> f64 {
        match self.carrier {
            Carrier::Interval { .. } => SCALAR_EPS,
            Carrier::Grid { .. } => GRID_EPS,
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.check(x).is_ok()
    }

    pub fn check(&self, x: &Point) -> Result<()> {
        match (self.carrier, x) {
            (Carrier::Interval { lo, hi }, Point::Scalar(v)) => {
                if !v.is_finite() {
                    Err(Error::NonFinite {
                        value: *v,
                        context: "scalar point".into(),
                    })
                } else if *v < lo || *v > hi {
                    Err(Error::Domain(format!("{v} is outside [{lo}, {hi}]")))
                } else {
                    Ok(())
                }
            }
            (Carrier::Grid { n }, Point::Grid(g)) => {
                if g.intervals() != n {
                    Err(Error::Dimension {
                        left: g.len(),
                        right: n + 1,
                    })
                } else if !x.is_finite() {
                    Err(Error::NonFinite {
                        value: f64::NAN,
                        context: "grid function".into(),
                    })
                } else {
                    Ok(())
                }
            }
            (Carrier::Interval { .. }, Point::Grid(_)) => {
                Err(Error::Kind("grid function on a scalar carrier".into()))
            }
            (Carrier::Grid { .. }, Point::Scalar(_)) => {
                Err(Error::Kind("scalar on a grid-function carrier".into()))
            }
        }
    }

    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        match (x, y) {
            (Point::Scalar(a), Point::Scalar(b)) => scalar_metric(*a, *b),
            (Point::Grid(a), Point::Grid(b)) => sup_metric(a, b),
            _ => Err(Error::Kind("cannot measure a scalar against a grid function".into())),
        }
    }
}
