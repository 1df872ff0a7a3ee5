//! Reconstruction reports: the estimated model plus error metrics against
//! a ground truth and any norm-identity residuals computed along the way.

use std::fmt::Write as _;

use crate::model::OperatorModel;

/// One interior coefficient-error entry: (t index, lattice index, re, im).
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorEntry {
    pub t_index: usize,
    pub lattice_index: i64,
    pub re_err: f64,
    pub im_err: f64,
}

#[derive(Debug, Clone)]
pub struct ReconReport {
    pub estimate: OperatorModel,
    /// Largest coefficient error on the interior, when truth was supplied.
    pub max_error: Option<f64>,
    /// Hilbert-Schmidt norm of the interior coefficient error.
    pub l2_error: Option<f64>,
    pub norm_identity_residual: Option<f64>,
    pub condition_estimate: Option<f64>,
    pub regularization: Option<f64>,
    /// Lattice taps excluded on each side for the interior metrics.
    pub trim: usize,
    pub off_grid_lookups: usize,
    pub entries: Vec<ErrorEntry>,
}

impl ReconReport {
    pub fn new(estimate: OperatorModel, trim: usize) -> Self {
        Self {
            estimate,
            max_error: None,
            l2_error: None,
            norm_identity_residual: None,
            condition_estimate: None,
            regularization: None,
            trim,
            off_grid_lookups: 0,
            entries: Vec::new(),
        }
    }

    /// Fill error metrics against a ground-truth model of identical shape.
    pub fn compare_with(&mut self, truth: &OperatorModel) {
        assert_eq!(self.estimate.shape(), truth.shape(), "models must share a shape");
        let shape = self.estimate.shape().clone();
        let w = self.estimate.t_grid().step;
        let mut max_err = 0.0f64;
        let mut l2 = 0.0f64;
        self.entries.clear();
        for n in self.estimate.interior_lattice(self.trim) {
            for i in 0..shape.n_t {
                let d = self.estimate.coeff(n, i) - truth.coeff(n, i);
                max_err = max_err.max(d.norm());
                l2 += d.norm_sqr();
                self.entries.push(ErrorEntry {
                    t_index: i,
                    lattice_index: n,
                    re_err: d.re,
                    im_err: d.im,
                });
            }
        }
        self.max_error = Some(max_err);
        self.l2_error = Some((shape.spacing * w * l2).sqrt());
    }

    /// CSV rendering: one row per interior entry plus a summary row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_index,lattice_index,re_err,im_err\n");
        for e in &self.entries {
            let _ = writeln!(out, "{},{},{},{}", e.t_index, e.lattice_index, e.re_err, e.im_err);
        }
        let _ = writeln!(
            out,
            "summary,max={},l2={},residual={}",
            self.max_error.unwrap_or(f64::NAN),
            self.l2_error.unwrap_or(f64::NAN),
            self.norm_identity_residual.unwrap_or(f64::NAN),
        );
        out
    }
}
