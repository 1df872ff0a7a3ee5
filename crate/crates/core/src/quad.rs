//! Composite Gauss–Legendre quadrature.
//!
//! Used by the verification side of the toolkit (transform consistency
//! checks against closed forms); the reconstruction paths themselves never
//! integrate numerically.

use num_complex::Complex64;

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integrate a complex-valued function over [a, b] with `panels` panels of
/// `pts`-point Gauss–Legendre each.
pub fn integrate_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    pts: usize,
) -> Complex64 {
    let (nodes, weights) = gauss_legendre(pts);
    let h = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in nodes.iter().zip(&weights) {
            acc += f(mid + 0.5 * h * x) * (0.5 * h * w);
        }
    }
    acc
}

/// Real-valued counterpart of [`integrate_complex`].
pub fn integrate_real<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, pts: usize) -> f64 {
    integrate_complex(|x| Complex64::new(f(x), 0.0), a, b, panels, pts).re
}
