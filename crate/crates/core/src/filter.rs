//! Reconstruction filters and the classical sampling baseline.
//!
//! A filter here is a real, even, band-limited interpolation kernel phi
//! whose transform equals 1 on the signal band [-Omega/2, Omega/2] and is
//! supported in [-(1/T - Omega/2), 1/T - Omega/2].  At the critical rate
//! T*Omega = 1 this forces the sinc kernel; below it there is room for a
//! trapezoidal transform, realized in closed form as a product of two sinc
//! factors (convolution of two rectangles in frequency).

use num_complex::Complex64;

use crate::error::{OpError, Result};
use crate::grid::TimeGrid;
use crate::sinc::sinc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    CriticalSinc,
    Trapezoid,
}

/// Interpolation kernel for sample period `t` and flat band `omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct Filter {
    pub t: f64,
    pub omega: f64,
    pub kind: FilterKind,
}

impl Filter {
    /// phi(x); phi(0) = 1/T and phi vanishes on the nonzero sample lattice.
    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            FilterKind::CriticalSinc => sinc(x / self.t) / self.t,
            FilterKind::Trapezoid => {
                // hat(phi) is the trapezoid with flat top [-omega/2, omega/2]
                // and base [-beta, beta], beta = 1/T - omega/2; in time this
                // is (1/T) sinc(x/T) sinc((1/T - omega) x)
                sinc(x / self.t) * sinc((1.0 / self.t - self.omega) * x) / self.t
            }
        }
    }

    /// Frequency-domain support radius beta = 1/T - omega/2.
    pub fn band_edge(&self) -> f64 {
        1.0 / self.t - 0.5 * self.omega
    }
}

/// Build the reconstruction filter for sample period `t` and band `omega`.
/// T*Omega = 1 gives the critical sinc; T*Omega < 1 the trapezoid.
pub fn make_filter(t: f64, omega: f64) -> Result<Filter> {
    if !(t > 0.0) || !(omega > 0.0) {
        return Err(OpError::InvalidParameter(format!(
            "filter needs positive T and Omega, got T={t}, Omega={omega}"
        )));
    }
    let product = t * omega;
    if product > 1.0 + 1e-12 {
        return Err(OpError::FilterBandwidthProduct(product));
    }
    let kind = if (product - 1.0).abs() <= 1e-12 {
        FilterKind::CriticalSinc
    } else {
        FilterKind::Trapezoid
    };
    Ok(Filter { t, omega, kind })
}

/// Window function r: exactly the characteristic function of [0, T'].
/// Evaluation happens only on node-offset points, where only the values of
/// r matter, never its smoothness.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowFunction {
    pub t_prime: f64,
    pub t: f64,
}

impl WindowFunction {
    pub fn new(t_prime: f64, t: f64) -> Result<Self> {
        if !(t_prime > 0.0) || t_prime > t {
            return Err(OpError::SupportExceedsPeriod { t_prime, t });
        }
        Ok(Self { t_prime, t })
    }

    pub fn eval(&self, t: f64) -> f64 {
        if (0.0..=self.t_prime).contains(&t) {
            1.0
        } else {
            0.0
        }
    }
}

/// Classical sampling expansion: f(t) = T sum_n f(nT) phi(t - nT) evaluated
/// on a grid.  Samples are (abscissa, value) pairs on the lattice T*Z.
pub fn wks_reconstruct(
    samples: &[(f64, Complex64)],
    filter: &Filter,
    eval_grid: &TimeGrid,
) -> Result<Vec<Complex64>> {
    for &(x, _) in samples {
        let ratio = x / filter.t;
        if (ratio - ratio.round()).abs() > 1e-9 {
            return Err(OpError::SpacingMismatch { expected: filter.t, got: x });
        }
    }
    let mut out = vec![Complex64::default(); eval_grid.count];
    for (i, v) in out.iter_mut().enumerate() {
        let t = eval_grid.point(i);
        let mut acc = Complex64::default();
        for &(xn, fn_val) in samples {
            acc += fn_val * filter.eval(t - xn);
        }
        *v = acc * filter.t;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn critical_filter_lattice_values() {
        let f = make_filter(1.0, 1.0).unwrap();
        assert_eq!(f.kind, FilterKind::CriticalSinc);
        assert!((f.eval(0.0) - 1.0).abs() < 1e-15);
        for m in 1..20 {
            assert!(f.eval(m as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn filter_is_even() {
        for &(t, omega) in &[(1.0, 1.0), (1.0, 0.8), (0.5, 1.6)] {
            let f = make_filter(t, omega).unwrap();
            for i in 0..200 {
                let x = 0.037 * i as f64;
                assert!((f.eval(x) - f.eval(-x)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_supercritical_product() {
        assert!(matches!(
            make_filter(1.0, 1.2),
            Err(OpError::FilterBandwidthProduct(_))
        ));
    }

    /// Transform oracle by band-limited Poisson summation: phi lies in
    /// PW([-beta, beta]) with beta = 0.6 here, so sampling at rate B = 2.5
    /// is alias-free for |nu| <= B - beta and
    /// hat(phi)(nu) = (1/B) sum_n phi(n/B) e^{-2 pi i n nu / B} exactly;
    /// the truncated tail is bounded by 2.5/K ~ 2.5e-7 at K = 1e7.
    fn poisson_ft(f: &Filter, nu: f64) -> f64 {
        let b = 2.5;
        let k_max = 10_000_000i64;
        let mut acc = f.eval(0.0);
        for n in 1..=k_max {
            let xn = n as f64 / b;
            acc += 2.0 * f.eval(xn) * (2.0 * PI * nu * xn).cos();
        }
        acc / b
    }

    #[test]
    fn trapezoid_transform_shape() {
        let f = make_filter(1.0, 0.8).unwrap();
        assert_eq!(f.kind, FilterKind::Trapezoid);
        assert!((f.band_edge() - 0.6).abs() < 1e-15);
        // flat top = 1
        for &nu in &[0.0, 0.25, -0.4] {
            let v = poisson_ft(&f, nu);
            assert!((v - 1.0).abs() < 1e-6, "nu={nu}: {v}");
        }
        // zero beyond the base
        for &nu in &[0.61, 0.8, -1.0] {
            let v = poisson_ft(&f, nu);
            assert!(v.abs() < 1e-6, "nu={nu}: {v}");
        }
        // midpoint of the ramp: value 1/2
        let v = poisson_ft(&f, 0.5);
        assert!((v - 0.5).abs() < 1e-6, "ramp midpoint: {v}");
    }

    #[test]
    fn wks_zero_samples() {
        let f = make_filter(1.0, 1.0).unwrap();
        let samples: Vec<(f64, Complex64)> =
            (-10..=10).map(|n| (n as f64, Complex64::default())).collect();
        let grid = TimeGrid::new(-2.0, 0.1, 41).unwrap();
        let out = wks_reconstruct(&samples, &f, &grid).unwrap();
        assert!(out.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn wks_reproduces_sinc() {
        // f = sinc(x/T): samples are the unit impulse, so the expansion
        // returns T * phi = sinc(x/T) itself; direct sinc evaluation is the
        // oracle
        let t = 1.0;
        let f = make_filter(t, 1.0).unwrap();
        let samples: Vec<(f64, Complex64)> = (-40..=40)
            .map(|n| (n as f64 * t, Complex64::new(sinc(n as f64), 0.0)))
            .collect();
        let grid = TimeGrid::new(-8.0, 0.0625, 257).unwrap();
        let out = wks_reconstruct(&samples, &f, &grid).unwrap();
        for (i, v) in out.iter().enumerate() {
            let x = grid.point(i);
            assert!((v.re - sinc(x)).abs() < 1e-9, "x={x}");
            assert!(v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn wks_exponential_oversampled() {
        // f(x) = e^{2 pi i nu0 x}, nu0 = 0.3*Omega, T*Omega = 0.8 trapezoid;
        // closed-form exponential is the oracle; every eval point keeps a
        // 64-tap margin to the sample window edge
        let omega = 0.8;
        let t = 1.0;
        let nu0 = 0.3 * omega;
        let f = make_filter(t, omega).unwrap();
        let samples: Vec<(f64, Complex64)> = (-96..=96)
            .map(|n| {
                let x = n as f64 * t;
                (x, Complex64::from_polar(1.0, 2.0 * PI * nu0 * x))
            })
            .collect();
        let grid = TimeGrid::new(-32.0, 0.25, 257).unwrap();
        let out = wks_reconstruct(&samples, &f, &grid).unwrap();
        let mut worst = 0.0f64;
        for (i, v) in out.iter().enumerate() {
            let x = grid.point(i);
            let exact = Complex64::from_polar(1.0, 2.0 * PI * nu0 * x);
            worst = worst.max((v - exact).norm());
        }
        assert!(worst < 1e-3, "interior max error {worst:.3e}");
    }

    #[test]
    fn wks_rejects_off_lattice_samples() {
        let f = make_filter(1.0, 1.0).unwrap();
        let samples = vec![(0.3, Complex64::default())];
        let grid = TimeGrid::new(0.0, 1.0, 2).unwrap();
        assert!(matches!(
            wks_reconstruct(&samples, &f, &grid),
            Err(OpError::SpacingMismatch { .. })
        ));
    }

    #[test]
    fn window_function_is_indicator() {
        let r = WindowFunction::new(0.75, 1.0).unwrap();
        assert_eq!(r.eval(0.0), 1.0);
        assert_eq!(r.eval(0.75), 1.0);
        assert_eq!(r.eval(0.76), 0.0);
        assert_eq!(r.eval(-0.1), 0.0);
        assert!(WindowFunction::new(1.5, 1.0).is_err());
    }
}
