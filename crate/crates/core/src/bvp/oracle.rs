//! Independent cross-check for the integral-operator solver: second-order
//! central differences on the same grid, solved by damped fixed-point
//! iteration `x <- (1 - w) x + w A^{-1} F(x)` where `A` is the discrete
//! `-d^2/dt^2` with zero boundary values.

use crate::error::{Error, Result};
use crate::metric::{node, GridFunction};

use super::BvpProblem;

pub const ORACLE_DAMPING: f64 = 0.8;
pub const ORACLE_MAX_ITERATIONS: usize = 10_000;

/// Solves the tridiagonal system `(-1, 2, -1) / h^2 u = rhs` (Thomas
/// algorithm); `rhs` holds the interior nodes only.
fn solve_laplacian(rhs: &[f64], h: f64) -> Vec<f64> {
    let m = rhs.len();
    let h2 = h * h;
    let mut c_prime = vec![0.0; m];
    let mut d_prime = vec![0.0; m];
    // Diagonal 2/h^2, off-diagonals -1/h^2; scaled by h^2 throughout.
    let (a, b, c) = (-1.0, 2.0, -1.0);
    for i in 0..m {
        let denom = if i == 0 { b } else { b - a * c_prime[i - 1] };
        c_prime[i] = c / denom;
        let prev = if i == 0 { 0.0 } else { d_prime[i - 1] };
        d_prime[i] = (rhs[i] * h2 - a * prev) / denom;
    }
    let mut u = vec![0.0; m];
    for i in (0..m).rev() {
        u[i] = d_prime[i] - if i + 1 < m { c_prime[i] * u[i + 1] } else { 0.0 };
    }
    u
}

/// Finite-difference solution of the problem, for verification only.
pub fn fd_oracle(problem: &BvpProblem) -> Result<GridFunction> {
    let n = problem.n;
    let h = 1.0 / n as f64;
    let tol = problem.tolerance;
    let mut x = vec![0.0; n + 1];
    let mut last_update = f64::INFINITY;
    for _ in 0..ORACLE_MAX_ITERATIONS {
        let rhs: Vec<f64> = (1..n).map(|i| problem.rhs.eval(node(i, n), x[i])).collect();
        if let Some(v) = rhs.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                value: *v,
                context: "oracle right-hand side".into(),
            });
        }
        let u = solve_laplacian(&rhs, h);
        last_update = 0.0;
        for (i, ui) in u.into_iter().enumerate() {
            let new = (1.0 - ORACLE_DAMPING) * x[i + 1] + ORACLE_DAMPING * ui;
            last_update = f64::max(last_update, (new - x[i + 1]).abs());
            x[i + 1] = new;
        }
        if last_update <= tol {
            return GridFunction::new(x);
        }
    }
    Err(Error::Oracle {
        iterations: ORACLE_MAX_ITERATIONS,
        last_update,
    })
}
