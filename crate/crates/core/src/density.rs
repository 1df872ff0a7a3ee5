//! Point-set analysis for sampling node sets: quarter-period perturbation
//! check and finite-window Beurling density estimates.

use crate::error::{OpError, Result};

/// Result of the quarter-period perturbation check.
#[derive(Debug, Clone, PartialEq)]
pub struct KadecReport {
    /// L = max_k |lambda_k - kT|.
    pub l: f64,
    /// true iff L < T/4, the sharp threshold for the perturbed exponential
    /// system to stay a Riesz basis.
    pub pass: bool,
}

/// Check |lambda_k - kT| <= L < T/4 for nodes indexed by consecutive
/// integers.  The base index is inferred from the first node, so windows
/// not containing k = 0 are handled too.
pub fn kadec_check(nodes: &[f64], period: f64) -> Result<KadecReport> {
    if nodes.is_empty() {
        return Err(OpError::InvalidParameter("empty node list".into()));
    }
    if !(period > 0.0) {
        return Err(OpError::InvalidParameter(format!("period must be positive, got {period}")));
    }
    for (i, pair) in nodes.windows(2).enumerate() {
        if !(pair[1] > pair[0]) {
            return Err(OpError::NodesNotMonotone { index: i });
        }
    }
    let k0 = (nodes[0] / period).round() as i64;
    let mut l = 0.0f64;
    for (j, &node) in nodes.iter().enumerate() {
        let k = k0 + j as i64;
        l = l.max((node - k as f64 * period).abs());
    }
    Ok(KadecReport { l, pass: l < 0.25 * period })
}

/// Extremal node counts in sliding windows of one length.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityWindow {
    pub h: f64,
    pub n_plus: usize,
    pub n_minus: usize,
}

/// Finite-window density report.  The limits in the definition of the
/// upper/lower densities are not computable from finite data, so this
/// carries ratio curves plus estimates from the largest window, flagged
/// with a boundary-truncation caveat.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub windows: Vec<DensityWindow>,
    /// n_plus/h for the largest h.
    pub d_plus_est: f64,
    /// n_minus/h for the largest h.
    pub d_minus_est: f64,
    /// always true: finite data can only bound the asymptotic densities
    pub truncation_caveat: bool,
}

fn count_in(nodes: &[f64], lo: f64, hi: f64) -> usize {
    // number of nodes in [lo, hi)
    let a = nodes.partition_point(|&x| x < lo);
    let b = nodes.partition_point(|&x| x < hi);
    b - a
}

/// Slide `[x - h/2, x + h/2)` over the covered range for each window length
/// and record extremal counts.  Counts change only when a window edge
/// crosses a node, so evaluating at those critical positions is exact.
pub fn beurling_density(nodes: &[f64], h_list: &[f64]) -> Result<DensityReport> {
    if nodes.len() < 2 {
        return Err(OpError::InvalidParameter("need at least two nodes".into()));
    }
    for (i, pair) in nodes.windows(2).enumerate() {
        if !(pair[1] > pair[0]) {
            return Err(OpError::NodesNotMonotone { index: i });
        }
    }
    let span = nodes[nodes.len() - 1] - nodes[0];
    let mut windows = Vec::with_capacity(h_list.len());
    for &h in h_list {
        if !(h > 0.0) {
            return Err(OpError::InvalidParameter(format!("window length must be positive, got {h}")));
        }
        if h > span {
            return Err(OpError::WindowExceedsSpan { h, span });
        }
        // maximal count: left-closed windows starting at each node
        let mut n_plus = 0usize;
        for &a in nodes {
            if a + h > nodes[nodes.len() - 1] + 1e-12 {
                break;
            }
            n_plus = n_plus.max(count_in(nodes, a, a + h));
        }
        // minimal count over fully covered windows: the count function of
        // the left edge is right-continuous and changes at lambda_k and
        // lambda_k - h; evaluate just at/after each breakpoint
        let lo_limit = nodes[0];
        let hi_limit = nodes[nodes.len() - 1] - h;
        let mut n_minus = usize::MAX;
        let mut consider = |a: f64| {
            if a >= lo_limit - 1e-12 && a <= hi_limit + 1e-12 {
                n_minus = n_minus.min(count_in(nodes, a, a + h));
            }
        };
        for &x in nodes {
            consider(x);
            // just after the node leaves through the left edge
            consider(x + 1e-9 * h.max(1.0));
            consider(x - h);
        }
        consider(lo_limit);
        consider(hi_limit);
        if n_minus == usize::MAX {
            n_minus = 0;
        }
        windows.push(DensityWindow { h, n_plus, n_minus });
    }
    let last = windows
        .iter()
        .max_by(|a, b| a.h.total_cmp(&b.h))
        .expect("nonempty h list")
        .clone();
    Ok(DensityReport {
        d_plus_est: last.n_plus as f64 / last.h,
        d_minus_est: last.n_minus as f64 / last.h,
        windows,
        truncation_caveat: true,
    })
}
