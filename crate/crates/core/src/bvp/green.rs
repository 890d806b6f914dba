//! Green's function of `-x'' = f` with homogeneous Dirichlet data on
//! `[0, 1]`, and the quadrature weights that apply it on a uniform grid.

use crate::error::{Error, Result};
use crate::metric::node;

/// `G(t, s) = t (1 - s)` for `t <= s`, `s (1 - t)` for `s <= t`.
pub fn green_kernel(t: f64, s: f64) -> Result<f64> {
    for (name, v) in [("t", t), ("s", s)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain(format!("green kernel argument {name}={v} outside [0, 1]")));
        }
    }
    Ok(kernel(t, s))
}

fn kernel(t: f64, s: f64) -> f64 {
    if t <= s {
        t * (1.0 - s)
    } else {
        s * (1.0 - t)
    }
}

/// Closed form of `int_0^1 G(t, s) ds = t/2 - t^2/2`.
pub fn green_row_integral(t: f64) -> f64 {
    -(t * t) / 2.0 + t / 2.0
}

/// Composite Newton-Cotes weights for `m` equal intervals of width `h`:
/// Simpson when `m` is even; Simpson followed by one 3/8 panel when `m` is
/// odd; the trapezoid rule for a single interval.
pub fn panel_weights(m: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; m + 1];
    if m == 0 {
        return w;
    }
    if m == 1 {
        w[0] = h / 2.0;
        w[1] = h / 2.0;
        return w;
    }
    let simpson_intervals = if m.is_multiple_of(2) { m } else { m - 3 };
    for start in (0..simpson_intervals).step_by(2) {
        w[start] += h / 3.0;
        w[start + 1] += 4.0 * h / 3.0;
        w[start + 2] += h / 3.0;
    }
    if m % 2 == 1 {
        let s = simpson_intervals;
        let c = 3.0 * h / 8.0;
        w[s] += c;
        w[s + 1] += 3.0 * c;
        w[s + 2] += 3.0 * c;
        w[s + 3] += c;
    }
    w
}

/// Dense `(n+1) x (n+1)` matrix `W` with `(Tx)_i = sum_j W_ij f(t_j, x_j)`.
///
/// Row `i` integrates `G(t_i, .) phi` over `[0, t_i]` and `[t_i, 1]`
/// separately, so each panel sees a smooth integrand despite the kink of the
/// kernel at `s = t_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct GreenQuadrature {
    n: usize,
    weights: Vec<f64>,
}

impl GreenQuadrature {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "quadrature grid needs an even number of intervals >= 2, got {n}"
            )));
        }
        let h = 1.0 / n as f64;
        let size = n + 1;
        let mut weights = vec![0.0; size * size];
        // Rows 0 and n vanish: G(0, s) = G(1, s) = 0.
        for i in 1..n {
            let t = node(i, n);
            let row = &mut weights[i * size..(i + 1) * size];
            for (j, w) in panel_weights(i, h).into_iter().enumerate() {
                row[j] += w * kernel(t, node(j, n));
            }
            for (k, w) in panel_weights(n - i, h).into_iter().enumerate() {
                let j = i + k;
                row[j] += w * kernel(t, node(j, n));
            }
        }
        Ok(Self { n, weights })
    }

    pub fn intervals(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let size = self.n + 1;
        &self.weights[i * size..(i + 1) * size]
    }

    /// Numerical `int_0^1 G(t_i, s) ds`.
    pub fn row_integral(&self, i: usize) -> f64 {
        self.row(i).iter().sum()
    }

    /// `sum_j W_ij phi_j` for every row.
    pub fn apply(&self, phi: &[f64]) -> Vec<f64> {
        debug_assert_eq!(phi.len(), self.n + 1);
        (0..=self.n)
            .map(|i| self.row(i).iter().zip(phi).map(|(w, p)| w * p).sum())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_examples() {
        assert_eq!(green_kernel(0.5, 0.5).unwrap(), 0.25);
        assert_eq!(green_kernel(0.0, 0.3).unwrap(), 0.0);
        assert_eq!(green_kernel(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(green_kernel(0.25, 0.75).unwrap(), 0.0625);
        assert!(green_kernel(1.5, 0.5).is_err());
        assert!(green_kernel(0.5, -0.1).is_err());
    }

    #[test]
    fn row_integral_examples() {
        assert_eq!(green_row_integral(0.5), 0.125);
        assert_eq!(green_row_integral(0.0), 0.0);
        assert_eq!(green_row_integral(0.25), 0.09375);
    }

    #[test]
    fn panel_weights_integrate_cubics_exactly() {
        for m in 1..12 {
            let h = 1.0 / m as f64;
            let w = panel_weights(m, h);
            let total: f64 = w.iter().sum();
            assert!((total - 1.0).abs() < 1e-14, "m={m}");
            if m >= 2 {
                let cubic: f64 = w.iter().enumerate().map(|(j, w)| w * (j as f64 * h).powi(3)).sum();
                assert!((cubic - 0.25).abs() < 1e-14, "m={m}");
            }
        }
    }

    #[test]
    fn weights_are_nonnegative() {
        let q = GreenQuadrature::new(20).unwrap();
        assert!(q.weights.iter().all(|w| *w >= 0.0));
    }

    #[test]
    fn rejects_odd_or_tiny_grids() {
        assert!(GreenQuadrature::new(7).is_err());
        assert!(GreenQuadrature::new(0).is_err());
        assert!(GreenQuadrature::new(2).is_ok());
    }

    #[test]
    fn quadrature_matches_fine_reference() {
        // Brute-force reference: midpoint rule with 20000 cells per node.
        let n = 40;
        let q = GreenQuadrature::new(n).unwrap();
        let phi_fn = |s: f64| (3.0 * s).cos() + s * s;
        let phi: Vec<f64> = (0..=n).map(|j| phi_fn(node(j, n))).collect();
        let out = q.apply(&phi);
        for (i, v) in out.iter().enumerate() {
            let t = node(i, n);
            let cells = 20_000;
            let reference: f64 = (0..cells)
                .map(|c| {
                    let s = (c as f64 + 0.5) / cells as f64;
                    kernel(t, s) * phi_fn(s)
                })
                .sum::<f64>()
                / cells as f64;
            assert!((v - reference).abs() < 1e-5, "i={i}: {v} vs {reference}");
        }
    }

    proptest! {
        #[test]
        fn kernel_symmetric_and_bounded(t in 0.0..=1.0_f64, s in 0.0..=1.0_f64) {
            let a = green_kernel(t, s).unwrap();
            prop_assert_eq!(a, green_kernel(s, t).unwrap());
            prop_assert!((0.0..=0.25).contains(&a));
        }
    }
}
