//! Finite sections of exponential systems {e^{-2 pi i lambda_k xi}} on a
//! band [-Omega/2, Omega/2]: Gram assembly in closed form, frame-bound
//! estimates from extreme eigenvalues, and regularized dual-coefficient
//! solves.
//!
//! The Gram is real and symmetric,
//!   G_{mn} = int e^{2 pi i (lambda_n - lambda_m) xi} d xi
//!          = Omega * sinc(Omega (lambda_n - lambda_m)),
//! and independent of a common shift of all nodes, which is what makes the
//! per-row solves of the irregular reconstruction share one factorization.

use std::sync::OnceLock;

use nalgebra::{Cholesky, DMatrix, Dyn};
use num_complex::Complex64;

use crate::error::{OpError, Result};
use crate::sinc::sinc;

#[derive(Debug)]
pub struct ExponentialFrame {
    nodes: Vec<f64>,
    omega: f64,
    rho: f64,
    gram: DMatrix<f64>,
    chol: OnceLock<Option<Cholesky<f64, Dyn>>>,
    bounds: OnceLock<(f64, f64)>,
}

impl ExponentialFrame {
    pub fn new(nodes: Vec<f64>, omega: f64, rho: f64) -> Result<Self> {
        if nodes.is_empty() {
            return Err(OpError::InvalidParameter("frame needs at least one node".into()));
        }
        if !(omega > 0.0) {
            return Err(OpError::InvalidParameter(format!("band must be positive, got {omega}")));
        }
        if rho < 0.0 {
            return Err(OpError::InvalidParameter(format!(
                "regularization must be nonnegative, got {rho}"
            )));
        }
        let gram = gram_matrix(&nodes, omega);
        Ok(Self { nodes, omega, rho, gram, chol: OnceLock::new(), bounds: OnceLock::new() })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// Extreme eigenvalues of the Gram: the finite-section estimates
    /// (A_est, B_est) of the frame bounds of the infinite system.
    pub fn bounds(&self) -> (f64, f64) {
        *self.bounds.get_or_init(|| {
            let eig = self.gram.clone().symmetric_eigenvalues();
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &v in eig.iter() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            (lo, hi)
        })
    }

    /// Cheap upper bound on B_est (Gershgorin row sum); used to scale the
    /// default regularization without an eigensolve.
    pub fn gershgorin_upper(&self) -> f64 {
        let n = self.gram.nrows();
        let mut best = 0.0f64;
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                row += self.gram[(i, j)].abs();
            }
            best = best.max(row);
        }
        best
    }

    /// Solve (G + rho I) c = rhs for dual-frame coefficients of the finite
    /// section.  With rho = 0 this requires the Gram to be positive
    /// definite, i.e. an actual (finite) Riesz system.
    pub fn solve(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        if rhs.len() != self.nodes.len() {
            return Err(OpError::InvalidParameter(format!(
                "rhs length {} != node count {}",
                rhs.len(),
                self.nodes.len()
            )));
        }
        let chol = self
            .chol
            .get_or_init(|| {
                let mut m = self.gram.clone();
                for i in 0..m.nrows() {
                    m[(i, i)] += self.rho;
                }
                Cholesky::new(m)
            })
            .as_ref()
            .ok_or(OpError::SingularSystem)?;
        let n = rhs.len();
        let mut re = nalgebra::DVector::from_iterator(n, rhs.iter().map(|c| c.re));
        let mut im = nalgebra::DVector::from_iterator(n, rhs.iter().map(|c| c.im));
        chol.solve_mut(&mut re);
        chol.solve_mut(&mut im);
        Ok((0..n).map(|i| Complex64::new(re[i], im[i])).collect())
    }
}

/// Closed-form Gram of the exponential system on the band.
pub fn gram_matrix(nodes: &[f64], omega: f64) -> DMatrix<f64> {
    let n = nodes.len();
    DMatrix::from_fn(n, n, |i, j| omega * sinc(omega * (nodes[j] - nodes[i])))
}

/// Central `size` nodes of a sorted list.
pub fn central_section(nodes: &[f64], size: usize) -> &[f64] {
    let size = size.min(nodes.len()).max(1);
    let start = (nodes.len() - size) / 2;
    &nodes[start..start + size]
}

/// (A_est, B_est) of the central finite section of the given size.
pub fn frame_bounds(nodes: &[f64], omega: f64, section: usize) -> Result<(f64, f64)> {
    if section < 1 {
        return Err(OpError::InvalidParameter("section must be at least 1".into()));
    }
    let frame = ExponentialFrame::new(central_section(nodes, section).to_vec(), omega, 0.0)?;
    Ok(frame.bounds())
}

/// Frame-bound estimates over a family of section sizes; by Cauchy
/// interlacing A_est is non-increasing and B_est non-decreasing in size.
pub fn frame_bounds_sections(
    nodes: &[f64],
    omega: f64,
    sections: &[usize],
) -> Result<Vec<(usize, f64, f64)>> {
    sections
        .iter()
        .map(|&s| frame_bounds(nodes, omega, s).map(|(a, b)| (s, a, b)))
        .collect()
}
