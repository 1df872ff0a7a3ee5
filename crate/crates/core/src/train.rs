//! Delta-train identifiers: weighted impulse trains, possibly with
//! derivative orders, that probe an operator in a single shot.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64;

use crate::error::{OpError, Result};
use crate::sinc::MAX_SINC_DERIV;

/// Finite weighted delta train `sum_k c_k * d^{r_k} delta_{lambda_k}`.
///
/// Nodes are strictly increasing; a derivative order r means the channel
/// formed from the r-th x-derivative of the impulse response is probed.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaTrain {
    pub nodes: Vec<f64>,
    pub weights: Vec<Complex64>,
    pub derivative_orders: Vec<u32>,
}

impl DeltaTrain {
    pub fn new(nodes: Vec<f64>, weights: Vec<Complex64>, derivative_orders: Vec<u32>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() || nodes.len() != derivative_orders.len() {
            return Err(OpError::InvalidParameter(
                "train nodes, weights and orders must be nonempty and equal length".into(),
            ));
        }
        for (i, pair) in nodes.windows(2).enumerate() {
            if !(pair[1] > pair[0]) {
                return Err(OpError::NodesNotMonotone { index: i });
            }
        }
        if weights.iter().all(|c| c.norm() == 0.0) {
            return Err(OpError::InvalidParameter("train weights must not all be zero".into()));
        }
        if let Some(&r) = derivative_orders.iter().find(|&&r| r > MAX_SINC_DERIV) {
            return Err(OpError::UnsupportedDerivativeOrder(r));
        }
        Ok(Self { nodes, weights, derivative_orders })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Smallest gap between consecutive nodes.
    pub fn min_gap(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|p| p[1] - p[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// `sum_k delta_{kT}` over the index window.
pub fn uniform_train(period: f64, k_range: RangeInclusive<i64>) -> Result<DeltaTrain> {
    if !(period > 0.0) {
        return Err(OpError::InvalidParameter(format!("period must be positive, got {period}")));
    }
    if k_range.is_empty() {
        return Err(OpError::InvalidParameter("empty index range".into()));
    }
    let nodes: Vec<f64> = k_range.clone().map(|k| k as f64 * period).collect();
    let n = nodes.len();
    DeltaTrain::new(nodes, vec![Complex64::new(1.0, 0.0); n], vec![0; n])
}

/// Channel-j mixing train of the DFT family: nodes n/M with weights
/// e^{2 pi i j n / (MN)}.  The weights are MN-periodic roots of unity.
pub fn dft_train(m: usize, n: usize, j: usize, n_range: RangeInclusive<i64>) -> Result<DeltaTrain> {
    let mn = m * n;
    if m == 0 || n == 0 {
        return Err(OpError::InvalidParameter("M and N must be positive".into()));
    }
    if j >= mn {
        return Err(OpError::InvalidParameter(format!("channel index {j} not in [0, {mn})")));
    }
    if n_range.is_empty() {
        return Err(OpError::InvalidParameter("empty index range".into()));
    }
    let nodes: Vec<f64> = n_range.clone().map(|k| k as f64 / m as f64).collect();
    let weights: Vec<Complex64> = n_range
        .clone()
        .map(|k| {
            // reduce mod MN before the trig call so far windows stay exact
            let km = k.rem_euclid(mn as i64);
            Complex64::from_polar(1.0, 2.0 * PI * (j as i64 * km) as f64 / mn as f64)
        })
        .collect();
    let len = nodes.len();
    DeltaTrain::new(nodes, weights, vec![0; len])
}

/// `sum_k delta_{kN + alpha}` with unit weights; one channel of a periodic
/// nonuniform family.
pub fn periodic_nonuniform_train(
    period: f64,
    alpha: f64,
    k_range: RangeInclusive<i64>,
) -> Result<DeltaTrain> {
    if !(period > 0.0) {
        return Err(OpError::InvalidParameter(format!("period must be positive, got {period}")));
    }
    if !(0.0..period).contains(&alpha) {
        return Err(OpError::InvalidParameter(format!(
            "alpha must lie in [0, {period}), got {alpha}"
        )));
    }
    if k_range.is_empty() {
        return Err(OpError::InvalidParameter("empty index range".into()));
    }
    let nodes: Vec<f64> = k_range.clone().map(|k| k as f64 * period + alpha).collect();
    let n = nodes.len();
    DeltaTrain::new(nodes, vec![Complex64::new(1.0, 0.0); n], vec![0; n])
}

/// Perturbed train `lambda_k = kT + eps(k)`; records L = max |eps|.
/// Whether L passes the quarter-period bound is judged separately by
/// [`crate::density::kadec_check`].
pub fn kadec_train<F: Fn(i64) -> f64>(
    period: f64,
    perturbation: F,
    k_range: RangeInclusive<i64>,
) -> Result<(DeltaTrain, f64)> {
    if !(period > 0.0) {
        return Err(OpError::InvalidParameter(format!("period must be positive, got {period}")));
    }
    if k_range.is_empty() {
        return Err(OpError::InvalidParameter("empty index range".into()));
    }
    let mut l_max = 0.0f64;
    let nodes: Vec<f64> = k_range
        .clone()
        .map(|k| {
            let eps = perturbation(k);
            l_max = l_max.max(eps.abs());
            k as f64 * period + eps
        })
        .collect();
    let n = nodes.len();
    let train = DeltaTrain::new(nodes, vec![Complex64::new(1.0, 0.0); n], vec![0; n])?;
    Ok((train, l_max))
}

/// `sum_k delta^{(r)}_{kN}`: uniform train probing the r-th derivative
/// channel.
pub fn derivative_train(period: f64, r: u32, k_range: RangeInclusive<i64>) -> Result<DeltaTrain> {
    if r > MAX_SINC_DERIV {
        return Err(OpError::UnsupportedDerivativeOrder(r));
    }
    let mut train = uniform_train(period, k_range)?;
    train.derivative_orders.iter_mut().for_each(|o| *o = r);
    Ok(train)
}
