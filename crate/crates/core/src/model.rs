//! Discretized time-varying operators.
//!
//! An operator is represented by its impulse response on a critical sinc
//! lattice in the second variable and a midpoint grid in the first:
//!
//!   h(t, x) = sum_n a_n(t) * sinc((x - t - n*spacing) / spacing)
//!
//! so that h(t, t + m*spacing) = a_m(t) exactly, and the spreading function
//! eta(t, .) is supported in [-1/(2*spacing), 1/(2*spacing)] by construction.
//! All supported workflows evaluate on aligned points t_i + shift, where the
//! first argument lands on the grid and no interpolation is ever needed.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{OpError, Result};
use crate::grid::{SampledOutput, TimeGrid};
use crate::sinc::sinc_deriv;
use crate::train::DeltaTrain;

/// Largest node/shift magnitude the aligned evaluator accepts before
/// floating-point cancellation in `x - lambda` becomes unreliable.
pub const EVAL_WINDOW_LIMIT: f64 = 1e9;

/// Shape of a model: everything but the coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelShape {
    pub spacing: f64,
    pub temporal_support: f64,
    pub n_min: i64,
    pub n_max: i64,
    pub n_t: usize,
}

impl ModelShape {
    pub fn new(spacing: f64, temporal_support: f64, n_min: i64, n_max: i64, n_t: usize) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(OpError::InvalidParameter(format!("spacing must be positive, got {spacing}")));
        }
        if !(temporal_support > 0.0) {
            return Err(OpError::InvalidParameter(format!(
                "temporal support must be positive, got {temporal_support}"
            )));
        }
        if n_min > n_max {
            return Err(OpError::InvalidParameter(format!(
                "lattice window [{n_min}, {n_max}] is empty"
            )));
        }
        if n_t == 0 {
            return Err(OpError::InvalidParameter("N_t must be positive".into()));
        }
        Ok(Self { spacing, temporal_support, n_min, n_max, n_t })
    }

    pub fn bandwidth(&self) -> f64 {
        1.0 / self.spacing
    }

    pub fn lattice_len(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }
}

/// Finite sinc-series representation of a time-varying impulse response.
/// The single source of truth for an operator: all four guises (h, eta,
/// sigma, kappa) are evaluated from the same coefficient array.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorModel {
    shape: ModelShape,
    t_grid: TimeGrid,
    /// coeffs[n - n_min][i] = a_n(t_i)
    coeffs: Vec<Vec<Complex64>>,
}

impl OperatorModel {
    pub fn zero(shape: ModelShape) -> Self {
        let t_grid = TimeGrid::midpoints(shape.temporal_support, shape.n_t)
            .expect("shape validated on construction");
        let coeffs = vec![vec![Complex64::default(); shape.n_t]; shape.lattice_len()];
        Self { shape, t_grid, coeffs }
    }

    /// I.i.d. complex Gaussian coefficients (components N(0, 1/2), so unit
    /// complex variance) from a ChaCha8 stream; bit-identical for a fixed
    /// seed on every platform.
    pub fn random(shape: ModelShape, seed: u64) -> Self {
        let mut model = Self::zero(shape);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        for row in model.coeffs.iter_mut() {
            for c in row.iter_mut() {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                *c = Complex64::new(re * scale, im * scale);
            }
        }
        model
    }

    pub fn shape(&self) -> &ModelShape {
        &self.shape
    }

    pub fn spacing(&self) -> f64 {
        self.shape.spacing
    }

    pub fn temporal_support(&self) -> f64 {
        self.shape.temporal_support
    }

    pub fn bandwidth(&self) -> f64 {
        self.shape.bandwidth()
    }

    pub fn t_grid(&self) -> &TimeGrid {
        &self.t_grid
    }

    pub fn lattice_indices(&self) -> impl Iterator<Item = i64> {
        self.shape.n_min..=self.shape.n_max
    }

    pub fn coeff(&self, n: i64, i: usize) -> Complex64 {
        self.coeffs[(n - self.shape.n_min) as usize][i]
    }

    pub fn set_coeff(&mut self, n: i64, i: usize, value: Complex64) {
        self.coeffs[(n - self.shape.n_min) as usize][i] = value;
    }

    /// Nearest-midpoint row for a first argument inside the support;
    /// `None` outside [0, T'].  The flag is false when t was not (up to
    /// 1e-9 steps) a grid midpoint, i.e. a diagnostics-only lookup.
    pub fn row_lookup(&self, t: f64) -> Option<(usize, bool)> {
        if t < 0.0 || t > self.shape.temporal_support {
            return None;
        }
        let pos = t / self.t_grid.step - 0.5;
        let idx = (pos.round() as i64).clamp(0, self.shape.n_t as i64 - 1) as usize;
        let aligned = (pos - idx as f64).abs() < 1e-9;
        Some((idx, aligned))
    }

    /// Time-varying impulse response h(t, x).  Zero exactly for t outside
    /// [0, T']; inside, t snaps to the nearest grid row and the row's sinc
    /// series is evaluated at x.
    pub fn eval_h(&self, t: f64, x: f64) -> Complex64 {
        self.eval_h_deriv(0, t, x)
    }

    /// r-th derivative of h in the second variable (closed-form derivative
    /// of the sinc series).
    pub fn eval_h_deriv(&self, r: u32, t: f64, x: f64) -> Complex64 {
        let Some((row, _)) = self.row_lookup(t) else {
            return Complex64::default();
        };
        let t_row = self.t_grid.point(row);
        let inv = 1.0 / self.shape.spacing;
        let scale = inv.powi(r as i32);
        let mut acc = Complex64::default();
        for (off, col) in self.coeffs.iter().enumerate() {
            let n = self.shape.n_min + off as i64;
            let u = (x - t_row) * inv - n as f64;
            acc += col[row] * (sinc_deriv(r, u) * scale);
        }
        acc
    }

    /// Spreading function eta(t, nu): closed-form Fourier transform of the
    /// sinc series; zero exactly outside the band |nu| <= 1/(2*spacing) and
    /// outside the temporal support.
    pub fn eval_eta(&self, t: f64, nu: f64) -> Complex64 {
        if nu.abs() > 0.5 * self.shape.bandwidth() {
            return Complex64::default();
        }
        let Some((row, _)) = self.row_lookup(t) else {
            return Complex64::default();
        };
        let t_row = self.t_grid.point(row);
        let d = self.shape.spacing;
        let mut acc = Complex64::default();
        for (off, col) in self.coeffs.iter().enumerate() {
            let n = self.shape.n_min + off as i64;
            acc += col[row] * Complex64::from_polar(d, -2.0 * PI * (t_row + n as f64 * d) * nu);
        }
        acc
    }

    /// Kohn-Nirenberg-style symbol slice sigma(x, xi): midpoint quadrature
    /// of h(t, x) e^{-2 pi i t xi} over the t grid.  Diagnostics only; no
    /// reconstruction path depends on it.
    pub fn eval_sigma(&self, x: f64, xi: f64) -> Complex64 {
        let w = self.t_grid.step;
        let mut acc = Complex64::default();
        for i in 0..self.shape.n_t {
            let t = self.t_grid.point(i);
            acc += self.eval_h(t, x) * Complex64::from_polar(w, -2.0 * PI * t * xi);
        }
        acc
    }

    /// Hilbert-Schmidt norm: sqrt(spacing * sum_i w_i sum_n |a_n(t_i)|^2),
    /// the Parseval form for the orthogonal sinc family with midpoint
    /// weights w_i = T'/N_t.
    pub fn hs_norm(&self) -> f64 {
        let w = self.t_grid.step;
        let total: f64 = self
            .coeffs
            .iter()
            .flat_map(|col| col.iter())
            .map(|c| c.norm_sqr())
            .sum();
        (self.shape.spacing * w * total).sqrt()
    }

    /// Channel output of a delta train at one point:
    /// y(x) = sum_k c_k D^{r_k} h(x - lambda_k, x); only nodes with
    /// x - lambda_k inside [0, T'] contribute.
    pub fn eval_train_output(&self, train: &DeltaTrain, x: f64) -> Complex64 {
        let mut acc = Complex64::default();
        for ((&lambda, &c), &r) in train
            .nodes
            .iter()
            .zip(&train.weights)
            .zip(&train.derivative_orders)
        {
            let t_arg = x - lambda;
            if t_arg < 0.0 || t_arg > self.shape.temporal_support {
                continue;
            }
            acc += c * self.eval_h_deriv(r, t_arg, x);
        }
        acc
    }

    /// Apply a train and collect the output on the aligned grid
    /// {base.point(i) + shifts[n]}.
    pub fn apply_train_on(
        &self,
        train: &DeltaTrain,
        base: &TimeGrid,
        shifts: &[f64],
        channel_tag: usize,
    ) -> Result<SampledOutput> {
        for &lambda in &train.nodes {
            if lambda.abs() > EVAL_WINDOW_LIMIT {
                return Err(OpError::NodeOutOfWindow { node: lambda, limit: EVAL_WINDOW_LIMIT });
            }
        }
        for &s in shifts {
            if s.abs() > EVAL_WINDOW_LIMIT {
                return Err(OpError::NodeOutOfWindow { node: s, limit: EVAL_WINDOW_LIMIT });
            }
        }
        let mut out = SampledOutput::zeroed(base.clone(), shifts.to_vec(), channel_tag);
        for (n, &shift) in shifts.iter().enumerate() {
            for i in 0..base.count {
                let x = base.point(i) + shift;
                out.values[n][i] = self.eval_train_output(train, x);
            }
        }
        Ok(out)
    }

    /// [`Self::apply_train_on`] with the model's own t grid as base.
    pub fn apply_train(&self, train: &DeltaTrain, shifts: &[f64]) -> Result<SampledOutput> {
        self.apply_train_on(train, &self.t_grid.clone(), shifts, 0)
    }

    /// Interior x-lattice columns after trimming `trim` taps on each side.
    pub fn interior_lattice(&self, trim: usize) -> std::ops::RangeInclusive<i64> {
        let t = trim as i64;
        (self.shape.n_min + t)..=(self.shape.n_max - t)
    }

    /// Largest coefficient difference against another model of identical
    /// shape, restricted to interior lattice columns.
    pub fn max_coeff_diff(&self, other: &OperatorModel, trim: usize) -> f64 {
        assert_eq!(self.shape, other.shape, "models must share a shape");
        let mut worst = 0.0f64;
        for n in self.interior_lattice(trim) {
            for i in 0..self.shape.n_t {
                worst = worst.max((self.coeff(n, i) - other.coeff(n, i)).norm());
            }
        }
        worst
    }

    /// Serialize to the documented text format: a tag line, a header line
    /// `spacing T' n_min n_max N_t`, then one `n i re im` row per
    /// coefficient.  Floats are printed in shortest round-trip form, so
    /// parse(write(model)) == model bit for bit.
    pub fn to_text(&self) -> String {
        let s = &self.shape;
        let mut out = String::new();
        out.push_str("opsamp-model 1\n");
        let _ = writeln!(out, "{} {} {} {} {}", s.spacing, s.temporal_support, s.n_min, s.n_max, s.n_t);
        for n in self.lattice_indices() {
            for i in 0..s.n_t {
                let c = self.coeff(n, i);
                let _ = writeln!(out, "{} {} {} {}", n, i, c.re, c.im);
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, tag) = lines
            .next()
            .ok_or_else(|| OpError::Parse { line: 1, msg: "empty model file".into() })?;
        if tag.trim() != "opsamp-model 1" {
            return Err(OpError::Parse { line: 1, msg: format!("unexpected tag `{tag}`") });
        }
        let (ln, header) = lines
            .next()
            .ok_or_else(|| OpError::Parse { line: 2, msg: "missing header".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(OpError::Parse { line: ln + 1, msg: "header needs 5 fields".into() });
        }
        let parse_f = |s: &str, ln: usize| -> Result<f64> {
            s.parse().map_err(|_| OpError::Parse { line: ln + 1, msg: format!("bad float `{s}`") })
        };
        let parse_i = |s: &str, ln: usize| -> Result<i64> {
            s.parse().map_err(|_| OpError::Parse { line: ln + 1, msg: format!("bad integer `{s}`") })
        };
        let shape = ModelShape::new(
            parse_f(fields[0], ln)?,
            parse_f(fields[1], ln)?,
            parse_i(fields[2], ln)?,
            parse_i(fields[3], ln)?,
            parse_i(fields[4], ln)? as usize,
        )?;
        let mut model = Self::zero(shape);
        for (ln, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(OpError::Parse { line: ln + 1, msg: "coefficient row needs 4 fields".into() });
            }
            let n = parse_i(f[0], ln)?;
            let i = parse_i(f[1], ln)? as usize;
            if n < model.shape.n_min || n > model.shape.n_max || i >= model.shape.n_t {
                return Err(OpError::Parse { line: ln + 1, msg: format!("index ({n}, {i}) out of range") });
            }
            model.set_coeff(n, i, Complex64::new(parse_f(f[2], ln)?, parse_f(f[3], ln)?));
        }
        Ok(model)
    }
}
