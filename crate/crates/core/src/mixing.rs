//! Per-shift mixing matrices for multi-channel identification.
//!
//! With MN channels probing at rate M, the channel outputs at one aligned
//! point mix the MN unknown response values through a matrix A_k indexed by
//! the shift k.  For the root-of-unity weight family every A_k is a unitary
//! DFT matrix; for general MN-periodic weights invertibility (with bounded
//! condition) is all that is required.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{OpError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixingKind {
    Dft,
    General,
}

#[derive(Debug, Clone)]
pub struct MixingMatrix {
    pub size: usize,
    pub shift: i64,
    pub kind: MixingKind,
    matrix: DMatrix<Complex64>,
    inverse: DMatrix<Complex64>,
    pub condition: f64,
}

impl MixingMatrix {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// x = A_k^{-1} b.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.size);
        let mut out = vec![Complex64::default(); self.size];
        for (r, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex64::default();
            for (j, &bj) in b.iter().enumerate() {
                acc += self.inverse[(r, j)] * bj;
            }
            *slot = acc;
        }
        out
    }

    /// b = A_k x.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.size);
        let mut out = vec![Complex64::default(); self.size];
        for (j, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex64::default();
            for (r, &xr) in x.iter().enumerate() {
                acc += self.matrix[(j, r)] * xr;
            }
            *slot = acc;
        }
        out
    }
}

/// Unitary DFT mixing matrix for shift k:
/// entries (1/sqrt(MN)) e^{2 pi i j (k - r) / MN} with channel row j and
/// response column r, both 0-indexed.  Unitarity is verified to 1e-12 at
/// construction.
pub fn dft_mixing_matrix(m: usize, n: usize, k: i64) -> Result<MixingMatrix> {
    if m == 0 || n == 0 {
        return Err(OpError::InvalidParameter("M and N must be positive".into()));
    }
    let mn = m * n;
    let scale = 1.0 / (mn as f64).sqrt();
    let matrix = DMatrix::from_fn(mn, mn, |j, r| {
        let e = (j as i64 * (k - r as i64)).rem_euclid(mn as i64);
        Complex64::from_polar(scale, 2.0 * PI * e as f64 / mn as f64)
    });
    let inverse = matrix.adjoint();
    // construction-time unitarity check
    let mut defect = 0.0f64;
    let prod = &matrix * &inverse;
    for j in 0..mn {
        for r in 0..mn {
            let expect = if j == r { 1.0 } else { 0.0 };
            defect = defect.max((prod[(j, r)] - Complex64::new(expect, 0.0)).norm());
        }
    }
    assert!(defect < 1e-12, "DFT mixing matrix lost unitarity: {defect:.3e}");
    Ok(MixingMatrix { size: mn, shift: k, kind: MixingKind::Dft, matrix, inverse, condition: 1.0 })
}

/// General mixing matrix from one period of MN-periodic channel weights:
/// (A_k)_{j,r} = c_{j, (k - r) mod MN}.  Rejects singular matrices and
/// conditions beyond `cond_limit`.
pub fn general_mixing_matrix(
    coeffs: &[Vec<Complex64>],
    k: i64,
    cond_limit: f64,
) -> Result<MixingMatrix> {
    let mn = coeffs.len();
    if mn == 0 || coeffs.iter().any(|row| row.len() != mn) {
        return Err(OpError::InvalidParameter(
            "weight table must be MN x MN (one period per channel)".into(),
        ));
    }
    let matrix = DMatrix::from_fn(mn, mn, |j, r| {
        let idx = (k - r as i64).rem_euclid(mn as i64) as usize;
        coeffs[j][idx]
    });
    let svd = matrix.clone().svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    if smin <= 1e-12 * smax.max(1.0) {
        return Err(OpError::SingularSystem);
    }
    let condition = smax / smin;
    if condition > cond_limit {
        return Err(OpError::IllConditioned { cond: condition, limit: cond_limit });
    }
    let inverse = matrix
        .clone()
        .try_inverse()
        .ok_or(OpError::SingularSystem)?;
    Ok(MixingMatrix { size: mn, shift: k, kind: MixingKind::General, matrix, inverse, condition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_single_channel() {
        let a = dft_mixing_matrix(1, 1, 0).unwrap();
        assert_eq!(a.size, 1);
        assert!((a.matrix()[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn two_channel_instance() {
        // M=1, N=2, k=0: rows j=0,1, columns r=0,1, exponent j(k-r)/2:
        // (1/sqrt2) [[1, 1], [1, e^{-pi i}]] = (1/sqrt2) [[1,1],[1,-1]]
        let a = dft_mixing_matrix(1, 2, 0).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        let expect = [
            [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
        ];
        for j in 0..2 {
            for r in 0..2 {
                assert!((a.matrix()[(j, r)] - expect[j][r]).norm() < 1e-14, "({j},{r})");
            }
        }
    }

    #[test]
    fn dft_matrices_are_unitary() {
        // direct multiply oracle over all shifts of the 2x2-channel family
        for k in 0..4i64 {
            let a = dft_mixing_matrix(2, 2, k).unwrap();
            let prod = a.matrix() * a.matrix().adjoint();
            for j in 0..4 {
                for r in 0..4 {
                    let expect = if j == r { 1.0 } else { 0.0 };
                    assert!(
                        (prod[(j, r)] - Complex64::new(expect, 0.0)).norm() < 1e-14,
                        "k={k} ({j},{r})"
                    );
                }
            }
        }
    }

    #[test]
    fn dft_solve_preserves_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = dft_mixing_matrix(2, 2, 3).unwrap();
        for _ in 0..16 {
            let x: Vec<Complex64> = (0..4)
                .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            let b = a.apply(&x);
            let nx: f64 = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            let nb: f64 = b.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            assert!((nx - nb).abs() < 1e-12);
            let back = a.solve(&b);
            for (u, v) in back.iter().zip(&x) {
                assert!((u - v).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn general_matrix_from_dft_weights_matches_dft() {
        let (m, n) = (2, 2);
        let mn = m * n;
        let coeffs: Vec<Vec<Complex64>> = (0..mn)
            .map(|j| {
                (0..mn)
                    .map(|nn| {
                        Complex64::from_polar(
                            1.0 / (mn as f64).sqrt(),
                            2.0 * PI * (j * nn) as f64 / mn as f64,
                        )
                    })
                    .collect()
            })
            .collect();
        for k in 0..4i64 {
            let a = dft_mixing_matrix(m, n, k).unwrap();
            let g = general_mixing_matrix(&coeffs, k, 1e3).unwrap();
            for j in 0..mn {
                for r in 0..mn {
                    assert!((a.matrix()[(j, r)] - g.matrix()[(j, r)]).norm() < 1e-12);
                }
            }
            assert!((g.condition - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rank_deficient_weights_rejected() {
        // two equal channel rows make every A_k singular
        let row: Vec<Complex64> =
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.4), Complex64::new(0.0, 1.0)];
        let coeffs = vec![row.clone(), row.clone(), row.clone(), row];
        assert!(matches!(
            general_mixing_matrix(&coeffs, 0, 1e6),
            Err(OpError::SingularSystem)
        ));
    }

    #[test]
    fn condition_limit_enforced() {
        let coeffs = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1e-3, 0.0)],
        ];
        assert!(matches!(
            general_mixing_matrix(&coeffs, 0, 10.0),
            Err(OpError::IllConditioned { .. })
        ));
        assert!(general_mixing_matrix(&coeffs, 0, 1e6).is_ok());
    }
}
