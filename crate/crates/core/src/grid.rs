//! Evaluation grids and aligned channel-output containers.

use num_complex::Complex64;

use crate::error::{OpError, Result};

/// Uniform grid: points `origin + i*step` for `0 <= i < count`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    pub origin: f64,
    pub step: f64,
    pub count: usize,
}

impl TimeGrid {
    pub fn new(origin: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0) {
            return Err(OpError::InvalidParameter(format!(
                "grid step must be positive, got {step}"
            )));
        }
        if count == 0 {
            return Err(OpError::InvalidParameter("grid count must be positive".into()));
        }
        Ok(Self { origin, step, count })
    }

    /// Midpoint grid with `count` points covering `[0, length]`:
    /// t_i = (i + 1/2) * length / count.
    pub fn midpoints(length: f64, count: usize) -> Result<Self> {
        if !(length > 0.0) {
            return Err(OpError::InvalidParameter(format!(
                "grid length must be positive, got {length}"
            )));
        }
        let step = length / count as f64;
        Self::new(0.5 * step, step, count)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.step
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.point(i))
    }
}

/// Channel output evaluated on an aligned grid: `values[n][i]` is the output
/// at the point `base_grid.point(i) + shifts[n]`.  Alignment means the
/// first argument of the impulse response never needs interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledOutput {
    pub base_grid: TimeGrid,
    pub shifts: Vec<f64>,
    pub values: Vec<Vec<Complex64>>,
    pub channel_tag: usize,
}

impl SampledOutput {
    pub fn zeroed(base_grid: TimeGrid, shifts: Vec<f64>, channel_tag: usize) -> Self {
        let values = vec![vec![Complex64::new(0.0, 0.0); base_grid.count]; shifts.len()];
        Self { base_grid, shifts, values, channel_tag }
    }

    pub fn value(&self, shift_idx: usize, time_idx: usize) -> Complex64 {
        self.values[shift_idx][time_idx]
    }

    /// Evaluation abscissa for entry (n, i).
    pub fn point(&self, shift_idx: usize, time_idx: usize) -> f64 {
        self.base_grid.point(time_idx) + self.shifts[shift_idx]
    }

    /// Largest |value| over the whole output.
    pub fn sup_norm(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|row| row.iter())
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Quadrature L2 norm squared: sum of |v|^2 weighted by the base-grid
    /// step.  With shifts one period apart this is the Riemann sum for the
    /// squared L2 norm of the output over the line.
    pub fn l2_norm_sq(&self) -> f64 {
        let w = self.base_grid.step;
        self.values
            .iter()
            .flat_map(|row| row.iter())
            .map(|v| v.norm_sqr() * w)
            .sum()
    }

    /// Linear combination with another output on identical grids.
    pub fn axpy(&mut self, alpha: Complex64, other: &SampledOutput) {
        assert_eq!(self.shifts.len(), other.shifts.len());
        assert_eq!(self.base_grid, other.base_grid);
        for (row, orow) in self.values.iter_mut().zip(&other.values) {
            for (v, ov) in row.iter_mut().zip(orow) {
                *v += alpha * ov;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_grid_covers_interval() {
        let g = TimeGrid::midpoints(1.0, 4).unwrap();
        let pts: Vec<f64> = g.iter().collect();
        assert_eq!(pts, vec![0.125, 0.375, 0.625, 0.875]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(TimeGrid::new(0.0, 0.0, 3).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0).is_err());
        assert!(TimeGrid::midpoints(-1.0, 3).is_err());
    }

    #[test]
    fn output_points_are_shifted_grid() {
        let g = TimeGrid::midpoints(1.0, 2).unwrap();
        let out = SampledOutput::zeroed(g, vec![-1.0, 0.0, 1.0], 0);
        assert_eq!(out.point(0, 0), -0.75);
        assert_eq!(out.point(2, 1), 1.75);
        assert_eq!(out.sup_norm(), 0.0);
    }
}
