//! Dense complex linear algebra for the small (dimension <= 8) operators used
//! throughout the crate.
//!
//! [`CMat`] is a row-major complex matrix and [`Ket`] a state vector. Composite systems use the standard Kronecker ordering:
//! in `kron(a, b)` the first factor is the most significant index.

mod eig;
mod expm;
pub mod random;
mod svd;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;

pub use eig::{eig_general, EigPair};
pub use expm::{expm, expm_eigen, expm_series};
pub use svd::{svd, SvdResult};

use crate::error::{Error, Result};

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        CMat {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_vec",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(CMat { rows, cols, data })
    }

    /// Builds a matrix from nested rows. Panics on ragged input; intended for
    /// literals.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Self {
        let cols = rows[0].as_ref().len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix literal");
            data.extend_from_slice(r.as_ref());
        }
        CMat {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let converted: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| re(x)).collect())
            .collect();
        CMat::from_rows(&converted)
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = CMat::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let e: Vec<C64> = entries.iter().map(|&x| re(x)).collect();
        CMat::diag(&e)
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &Ket, v: &Ket) -> Self {
        let mut m = CMat::zeros(u.dim(), v.dim());
        for i in 0..u.dim() {
            for j in 0..v.dim() {
                m[(i, j)] = u[i] * v[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[C64]) {
        for (i, &z) in col.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        let mut m = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> CMat {
        let mut m = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> CMat {
        self.scale(re(s))
    }

    pub fn matmul(&self, other: &CMat) -> Result<CMat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += aik * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &CMat) -> Result<CMat> {
        self.zip_with(other, "add", |x, y| x + y)
    }

    pub fn try_sub(&self, other: &CMat) -> Result<CMat> {
        self.zip_with(other, "sub", |x, y| x - y)
    }

    fn zip_with(
        &self,
        other: &CMat,
        op: &'static str,
        f: impl Fn(C64, C64) -> C64,
    ) -> Result<CMat> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        })
    }

    pub fn apply(&self, v: &Ket) -> Result<Ket> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                op: "apply",
                left: self.shape(),
                right: (v.dim(), 1),
            });
        }
        let amp = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect();
        Ket::new(amp)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |self - other|` entrywise.
    pub fn max_abs_diff(&self, other: &CMat) -> Result<f64> {
        Ok(self.try_sub(other)?.max_abs())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()).is_ok_and(|r| r <= tol)
    }

    /// `max |A^dagger A - 1|`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.cols;
        (&self.adjoint() * self)
            .max_abs_diff(&CMat::identity(n))
            .unwrap_or(f64::INFINITY)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitarity_residual() <= tol
    }

    /// Solves `self * X = rhs` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &CMat) -> Result<CMat> {
        if !self.is_square() || rhs.rows != self.rows {
            return Err(Error::DimensionMismatch {
                op: "solve",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        let scale = a.max_abs();
        if scale == 0.0 {
            return Err(Error::Singular);
        }
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
                .unwrap();
            if a[(p, k)].norm() <= f64::EPSILON * scale {
                return Err(Error::Singular);
            }
            if p != k {
                a.swap_rows(p, k);
                b.swap_rows(p, k);
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / pivot;
                if f == ZERO {
                    continue;
                }
                for j in k..n {
                    let t = a[(k, j)];
                    a[(i, j)] -= f * t;
                }
                for j in 0..b.cols {
                    let t = b[(k, j)];
                    b[(i, j)] -= f * t;
                }
            }
        }
        for j in 0..b.cols {
            for i in (0..n).rev() {
                let mut s = b[(i, j)];
                for k in i + 1..n {
                    s -= a[(i, k)] * b[(k, j)];
                }
                b[(i, j)] = s / a[(i, i)];
            }
        }
        Ok(b)
    }

    pub fn inverse(&self) -> Result<CMat> {
        self.solve(&CMat::identity(self.rows))
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        for j in 0..self.cols {
            self.data.swap(r1 * self.cols + j, r2 * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// Operator forms panic on non-conforming shapes; use the `try_*`/`matmul`
// methods where shapes come from the caller.
impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        self.matmul(rhs).expect("matmul: non-conforming shapes")
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        self.try_add(rhs).expect("add: non-conforming shapes")
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        self.try_sub(rhs).expect("sub: non-conforming shapes")
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product; block `(i, j)` of the result is `a[i, j] * b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Pauli matrices and the 2x2 identity.
pub mod pauli {
    use super::{c, CMat};

    pub fn id() -> CMat {
        CMat::identity(2)
    }

    pub fn x() -> CMat {
        CMat::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn y() -> CMat {
        CMat::from_rows(&[[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
    }

    pub fn z() -> CMat {
        CMat::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]])
    }
}

/// State vector of dimension at most 8; qubit registers use 2, 4 or 8.
#[derive(Clone, PartialEq)]
pub struct Ket(Vec<C64>);

impl Ket {
    pub fn new(amp: Vec<C64>) -> Result<Self> {
        if amp.is_empty() || amp.len() > 8 {
            return Err(Error::KetDimension(amp.len()));
        }
        if amp.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Ket(amp))
    }

    pub fn from_real(amp: &[f64]) -> Result<Self> {
        Ket::new(amp.iter().map(|&x| re(x)).collect())
    }

    /// Computational basis state `|index>` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        let mut amp = vec![ZERO; dim];
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        amp[index] = ONE;
        Ket::new(amp)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Ket> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::InvalidArgument(
                "cannot normalize the zero vector".into(),
            ));
        }
        Ok(self.scale(re(1.0 / n)))
    }

    pub fn scale(&self, s: C64) -> Ket {
        Ket(self.0.iter().map(|&z| z * s).collect())
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Ket) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                op: "inner",
                left: (self.dim(), 1),
                right: (other.dim(), 1),
            });
        }
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum())
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &Ket) -> Result<Ket> {
        let mut amp = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.0 {
            for b in &other.0 {
                amp.push(a * b);
            }
        }
        Ket::new(amp)
    }

    pub fn add(&self, other: &Ket) -> Result<Ket> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                op: "ket add",
                left: (self.dim(), 1),
                right: (other.dim(), 1),
            });
        }
        Ket::new(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Euclidean distance to `other`, largest component.
    pub fn max_abs_diff(&self, other: &Ket) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for Ket {
    type Output = C64;
    #[inline]
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl fmt::Debug for Ket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ket[")?;
        for (k, z) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:+.6}{:+.6}i", z.re, z.im)?;
        }
        write!(f, "]")
    }
}

/// Modulus of the overlap of the normalized vectors; 1 means equal up to a
/// complex scalar. Returns 0 when either vector vanishes.
pub fn collinearity(u: &Ket, w: &Ket) -> Result<f64> {
    let (nu, nw) = (u.norm(), w.norm());
    if nu == 0.0 || nw == 0.0 {
        return Ok(0.0);
    }
    Ok((u.inner(w)?.norm() / (nu * nw)).min(1.0))
}

/// The scalar `k` minimizing `|out - k * target|`.
pub fn proportionality(out: &Ket, target: &Ket) -> Result<C64> {
    let tt = target.norm().powi(2);
    if tt == 0.0 {
        return Err(Error::InvalidArgument("zero target vector".into()));
    }
    Ok(target.inner(out)? / tt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_identities_is_identity() {
        let k = kron(&pauli::id(), &pauli::id());
        assert_eq!(k, CMat::identity(4));
    }

    #[test]
    fn kron_z_x_block_structure() {
        // [[X, 0], [0, -X]]
        let k = kron(&pauli::z(), &pauli::x());
        let expected = CMat::from_real_rows(&[
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, -1.0, 0.0],
        ]);
        assert_eq!(k, expected);
    }

    #[test]
    fn adjoint_involution_and_identity_product() {
        let a = CMat::from_rows(&[[c(1.0, 2.0), c(-0.5, 0.0)], [c(0.0, -3.0), c(4.0, 1.0)]]);
        assert_eq!(a.adjoint().adjoint(), a);
        assert_eq!(&CMat::identity(2) * &a, a);
        assert_eq!(a.adjoint()[(0, 1)], c(0.0, 3.0));
    }

    #[test]
    fn pauli_x_flips_zero() {
        let zero = Ket::basis(2, 0).unwrap();
        let one = Ket::basis(2, 1).unwrap();
        assert_eq!(pauli::x().apply(&zero).unwrap(), one);
    }

    #[test]
    fn mismatched_shapes_are_errors() {
        let a = CMat::identity(2);
        let b = CMat::identity(4);
        assert!(matches!(a.matmul(&b), Err(Error::DimensionMismatch { .. })));
        assert!(a.try_add(&b).is_err());
        assert!(b.apply(&Ket::basis(2, 0).unwrap()).is_err());
    }

    #[test]
    fn non_finite_entries_rejected() {
        assert_eq!(
            CMat::from_vec(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        );
        assert_eq!(
            Ket::new(vec![ONE, c(f64::INFINITY, 0.0)]),
            Err(Error::NonFinite)
        );
        assert_eq!(Ket::new(vec![ONE; 9]), Err(Error::KetDimension(9)));
    }

    #[test]
    fn solve_recovers_inverse() {
        let a = CMat::from_rows(&[[c(2.0, 1.0), c(1.0, 0.0)], [c(0.0, -1.0), c(3.0, 0.5)]]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).max_abs_diff(&CMat::identity(2)).unwrap() < 1e-14);
        let singular = CMat::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert_eq!(singular.inverse(), Err(Error::Singular));
    }

    #[test]
    fn collinearity_ignores_phase_and_scale() {
        let u = Ket::new(vec![c(1.0, 1.0), c(0.5, -0.25)]).unwrap();
        let w = u.scale(c(-3.0, 2.0));
        assert!((collinearity(&u, &w).unwrap() - 1.0).abs() < 1e-15);
        let k = proportionality(&w, &u).unwrap();
        assert!((k - c(-3.0, 2.0)).norm() < 1e-14);
    }
}
