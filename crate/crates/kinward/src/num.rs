//! Scalar abstraction for the numeric core.
//!
//! Everything downstream of file parsing is generic over [`Real`], so the
//! same estimators and tests run in `f32` or `f64`. The crate root exports
//! `f64` aliases for the common case.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use ndarray::{Array1, Array2, ScalarOperand};
use num_traits::{Num, NumAssign};

use crate::error::NumericError;

/// Floating-point scalar usable by the estimators and test statistics.
///
/// The method set is deliberately explicit (rather than re-exporting
/// `num_traits::Float`) so call sites resolve unambiguously, and so the
/// symmetric eigensolver can dispatch to the right LAPACK driver per type.
pub trait Real:
    Num
    + NumAssign
    + std::ops::Neg<Output = Self>
    + PartialOrd
    + Copy
    + Debug
    + Display
    + Sum
    + ScalarOperand
    + Send
    + Sync
    + 'static
{
    fn from_f64(v: f64) -> Self;
    fn from_usize(v: usize) -> Self;
    fn to_f64(self) -> f64;

    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn ln(self) -> Self;
    fn ln_1p(self) -> Self;
    fn exp(self) -> Self;
    fn log10(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn mul_add(self, a: Self, b: Self) -> Self;

    fn is_nan(self) -> bool;
    fn is_finite(self) -> bool;

    fn maximum(self, other: Self) -> Self;
    fn minimum(self, other: Self) -> Self;

    fn epsilon() -> Self;
    fn infinity() -> Self;
    fn nan() -> Self;

    /// Eigendecomposition of a symmetric matrix, eigenvalues ascending.
    ///
    /// Backed by LAPACK's divide-and-conquer driver (`ssyevd`/`dsyevd`).
    fn sym_eigh(a: &Array2<Self>) -> Result<SymEigh<Self>, NumericError>;
}

/// Eigenpairs of a symmetric matrix; `values[k]` goes with column `k` of
/// `vectors`, eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct SymEigh<T> {
    pub values: Array1<T>,
    pub vectors: Array2<T>,
}

macro_rules! impl_real {
    ($t:ty, $syevd:path) => {
        impl Real for $t {
            #[inline]
            fn from_f64(v: f64) -> Self {
                v as $t
            }
            #[inline]
            fn from_usize(v: usize) -> Self {
                v as $t
            }
            #[inline]
            fn to_f64(self) -> f64 {
                self as f64
            }
            #[inline]
            fn abs(self) -> Self {
                self.abs()
            }
            #[inline]
            fn sqrt(self) -> Self {
                self.sqrt()
            }
            #[inline]
            fn ln(self) -> Self {
                self.ln()
            }
            #[inline]
            fn ln_1p(self) -> Self {
                self.ln_1p()
            }
            #[inline]
            fn exp(self) -> Self {
                self.exp()
            }
            #[inline]
            fn log10(self) -> Self {
                self.log10()
            }
            #[inline]
            fn powi(self, n: i32) -> Self {
                self.powi(n)
            }
            #[inline]
            fn mul_add(self, a: Self, b: Self) -> Self {
                self.mul_add(a, b)
            }
            #[inline]
            fn is_nan(self) -> bool {
                self.is_nan()
            }
            #[inline]
            fn is_finite(self) -> bool {
                self.is_finite()
            }
            #[inline]
            fn maximum(self, other: Self) -> Self {
                self.max(other)
            }
            #[inline]
            fn minimum(self, other: Self) -> Self {
                self.min(other)
            }
            #[inline]
            fn epsilon() -> Self {
                <$t>::EPSILON
            }
            #[inline]
            fn infinity() -> Self {
                <$t>::INFINITY
            }
            #[inline]
            fn nan() -> Self {
                <$t>::NAN
            }

            fn sym_eigh(a: &Array2<Self>) -> Result<SymEigh<Self>, NumericError> {
                let n = a.nrows();
                if n != a.ncols() {
                    return Err(NumericError::NotSquare {
                        rows: n,
                        cols: a.ncols(),
                    });
                }
                if n == 0 {
                    return Err(NumericError::EmptyMatrix);
                }
                // LAPACK overwrites the input with eigenvectors (column-major).
                // The input is symmetric, so row-/column-major layout is moot.
                let mut amat: Vec<$t> = a.iter().cloned().collect();
                let mut w = vec![0 as $t; n];
                let ni = n as i32;
                let mut info = 0i32;
                let jobz = b'V' as std::ffi::c_char;
                let uplo = b'L' as std::ffi::c_char;
                unsafe {
                    // Workspace query, then the real call.
                    let (mut lwork, mut liwork) = (-1i32, -1i32);
                    let mut work_q = [0 as $t; 1];
                    let mut iwork_q = [0i32; 1];
                    $syevd(
                        &jobz,
                        &uplo,
                        &ni,
                        amat.as_mut_ptr(),
                        &ni,
                        w.as_mut_ptr(),
                        work_q.as_mut_ptr(),
                        &lwork,
                        iwork_q.as_mut_ptr(),
                        &liwork,
                        &mut info,
                    );
                    if info != 0 {
                        return Err(NumericError::Lapack { routine: "syevd", info });
                    }
                    lwork = work_q[0] as i32;
                    liwork = iwork_q[0];
                    let mut work = vec![0 as $t; lwork as usize];
                    let mut iwork = vec![0i32; liwork as usize];
                    $syevd(
                        &jobz,
                        &uplo,
                        &ni,
                        amat.as_mut_ptr(),
                        &ni,
                        w.as_mut_ptr(),
                        work.as_mut_ptr(),
                        &lwork,
                        iwork.as_mut_ptr(),
                        &liwork,
                        &mut info,
                    );
                }
                if info != 0 {
                    return Err(NumericError::Lapack { routine: "syevd", info });
                }
                // amat now holds eigenvectors column-major: column k starts at k*n.
                // Reading it as a row-major (n, n) array gives the transpose, so
                // eigenvector k ends up in row k; transpose back.
                let vectors = Array2::from_shape_vec((n, n), amat)
                    .expect("eigenvector buffer has n*n elements")
                    .reversed_axes();
                Ok(SymEigh {
                    values: Array1::from_vec(w),
                    vectors,
                })
            }
        }
    };
}

impl_real!(f32, lapack_sys::ssyevd_);
impl_real!(f64, lapack_sys::dsyevd_);

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn eigh_recovers_diagonal() {
        let a = array![[3.0f64, 0.0], [0.0, 1.0]];
        let e = f64::sym_eigh(&a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-12);
        assert!((e.values[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eigh_reconstructs_symmetric_matrix() {
        let a = array![
            [2.0f64, 0.5, 0.1],
            [0.5, 1.5, -0.3],
            [0.1, -0.3, 1.0]
        ];
        let e = f64::sym_eigh(&a).unwrap();
        let lam = Array2::from_diag(&e.values);
        let recon = e.vectors.dot(&lam).dot(&e.vectors.t());
        for (x, y) in a.iter().zip(recon.iter()) {
            assert!((x - y).abs() < 1e-12, "reconstruction off: {x} vs {y}");
        }
        // Orthonormal columns.
        let vtv = e.vectors.t().dot(&e.vectors);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((vtv[(i, j)] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigh_f32_works() {
        let a = array![[2.0f32, 1.0], [1.0, 2.0]];
        let e = f32::sym_eigh(&a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-5);
        assert!((e.values[1] - 3.0).abs() < 1e-5);
    }

    #[test]
    fn eigh_rejects_non_square() {
        let a = Array2::<f64>::zeros((2, 3));
        assert!(f64::sym_eigh(&a).is_err());
    }
}
