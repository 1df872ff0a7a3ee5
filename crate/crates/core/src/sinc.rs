//! The normalized-argument sinc kernel sinc(u) = sin(pi u)/(pi u) with
//! sinc(0) = 1, together with its closed-form derivatives up to order 4.
//!
//! Derivatives are needed because derivative-probing channels act on the
//! kernel series through d/dx, and compounding finite differences would
//! cost several digits.  Near u = 0 the closed forms are catastrophically
//! cancelling, so a truncated even Taylor series is used there instead.

use std::f64::consts::PI;

/// Highest derivative order supported by [`sinc_deriv`].
pub const MAX_SINC_DERIV: u32 = 4;

/// sin(pi u) with argument reduction: exact flip at integers instead of
/// evaluating sin at a large argument.
pub fn sin_pi(u: f64) -> f64 {
    let n = u.round();
    let w = u - n; // exact for |w| <= 0.5 (Sterbenz)
    let s = (PI * w).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// cos(pi u) with the same argument reduction as [`sin_pi`].
pub fn cos_pi(u: f64) -> f64 {
    let n = u.round();
    let w = u - n;
    let c = (PI * w).cos();
    if (n as i64) % 2 == 0 {
        c
    } else {
        -c
    }
}

/// sinc(u) = sin(pi u)/(pi u), sinc(0) = 1.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        // 1 - (pi u)^2/6 suffices to full precision here
        let p = PI * u;
        1.0 - p * p / 6.0
    } else {
        sin_pi(u) / (PI * u)
    }
}

/// r-th derivative of sinc at u, r <= [`MAX_SINC_DERIV`].
///
/// Panics if r exceeds the supported order; callers validate first.
pub fn sinc_deriv(r: u32, u: f64) -> f64 {
    assert!(r <= MAX_SINC_DERIV, "sinc derivative order {r} unsupported");
    if r == 0 {
        return sinc(u);
    }
    if u.abs() < 0.5 {
        return sinc_deriv_taylor(r, u);
    }
    let s = sin_pi(u);
    let c = cos_pi(u);
    let u2 = u * u;
    match r {
        1 => c / u - s / (PI * u2),
        2 => -PI * s / u - 2.0 * c / u2 + 2.0 * s / (PI * u2 * u),
        3 => {
            let u3 = u2 * u;
            -PI * PI * c / u + 3.0 * PI * s / u2 + 6.0 * c / u3 - 6.0 * s / (PI * u2 * u2)
        }
        4 => {
            let u3 = u2 * u;
            let u4 = u2 * u2;
            PI * PI * PI * s / u + 4.0 * PI * PI * c / u2 - 12.0 * PI * s / u3
                - 24.0 * c / u4
                + 24.0 * s / (PI * u4 * u)
        }
        _ => unreachable!(),
    }
}

// sinc(u) = sum_k (-1)^k (pi u)^{2k} / (2k+1)!; differentiate term-wise.
// 18 terms give full f64 precision for |u| < 0.5.
fn sinc_deriv_taylor(r: u32, u: f64) -> f64 {
    let mut acc = 0.0;
    // coefficient of u^{2k} is ck = (-1)^k pi^{2k} / (2k+1)!
    let mut ck = 1.0;
    for k in 0u32..18 {
        if 2 * k >= r {
            // d^r/du^r of u^{2k} = (2k)(2k-1)...(2k-r+1) u^{2k-r}
            let mut fall = 1.0;
            for j in 0..r {
                fall *= (2 * k - j) as f64;
            }
            acc += ck * fall * u.powi((2 * k - r) as i32);
        }
        // advance ck -> c_{k+1}
        ck *= -(PI * PI) / (((2 * k + 2) * (2 * k + 3)) as f64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_lattice_values() {
        assert_eq!(sinc(0.0), 1.0);
        for m in 1..40 {
            assert!(sinc(m as f64).abs() < 1e-15, "sinc({m}) != 0");
            assert!(sinc(-(m as f64)).abs() < 1e-15);
        }
    }

    #[test]
    fn sinc_half_integer() {
        // sinc(1/2) = 2/pi
        assert!((sinc(0.5) - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn argument_reduction_matches_naive_sin() {
        for i in 0..200 {
            let u = -7.3 + 0.07 * i as f64;
            assert!((sin_pi(u) - (PI * u).sin()).abs() < 1e-12);
            assert!((cos_pi(u) - (PI * u).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn taylor_and_closed_form_agree_at_crossover() {
        // both branches are available just outside the crossover
        for r in 1..=MAX_SINC_DERIV {
            for &u in &[0.5000001, 0.6, 0.75, -0.5000001, -0.62] {
                let closed = sinc_deriv(r, u);
                let taylor = sinc_deriv_taylor(r, u);
                assert!(
                    (closed - taylor).abs() < 1e-11,
                    "order {r} at u={u}: closed={closed} taylor={taylor}"
                );
            }
        }
    }

    // independent oracle: central finite differences of sinc itself
    fn fd_deriv(r: u32, u: f64, h: f64) -> f64 {
        match r {
            1 => (sinc(u + h) - sinc(u - h)) / (2.0 * h),
            2 => (sinc(u + h) - 2.0 * sinc(u) + sinc(u - h)) / (h * h),
            3 => (sinc(u + 2.0 * h) - 2.0 * sinc(u + h) + 2.0 * sinc(u - h)
                - sinc(u - 2.0 * h))
                / (2.0 * h * h * h),
            4 => (sinc(u + 2.0 * h) - 4.0 * sinc(u + h) + 6.0 * sinc(u) - 4.0 * sinc(u - h)
                + sinc(u - 2.0 * h))
                / (h * h * h * h),
            _ => unreachable!(),
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for r in 1..=MAX_SINC_DERIV {
            let h = match r {
                1 => 1e-5,
                2 => 1e-4,
                _ => 1e-3,
            };
            let tol = match r {
                1 => 1e-9,
                2 => 1e-6,
                3 => 2e-4,
                _ => 2e-3,
            };
            for i in 0..120 {
                let u = -6.05 + 0.1 * i as f64;
                let exact = sinc_deriv(r, u);
                let approx = fd_deriv(r, u, h);
                assert!(
                    (exact - approx).abs() < tol,
                    "order {r} at u={u}: exact={exact} fd={approx}"
                );
            }
        }
    }

    #[test]
    fn odd_even_symmetry() {
        // sinc is even, so odd derivatives are odd and even ones even
        for r in 0..=MAX_SINC_DERIV {
            for i in 1..60 {
                let u = 0.11 * i as f64;
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                let a = sinc_deriv(r, u);
                let b = sinc_deriv(r, -u);
                assert!((a - sign * b).abs() < 1e-12, "r={r} u={u}");
            }
        }
    }
}
