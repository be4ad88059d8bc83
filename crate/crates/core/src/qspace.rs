//! Quaternionic matrices, Hermitian forms and their isometry groups,
//! boundary points of quaternionic hyperbolic space, Lie algebras, and the
//! dimensions of adjoint eigenspaces.
//!
//! Vectors are columns and `H^m` is a right module: scalars act as `z * q`.
//! Real-linear maps on `m x m` quaternionic matrices are written as real
//! matrices on `R^{4 m^2}`, using the row-major entry order and the
//! component order `(w, x, y, z)` inside each entry.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::quat::Quaternion;
use crate::Tolerance;

/// Dense matrix over the quaternions, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QMatrixRepr")]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Quaternion>,
}

#[derive(Deserialize)]
struct QMatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Quaternion>,
}

impl TryFrom<QMatrixRepr> for QMatrix {
    type Error = Error;
    fn try_from(r: QMatrixRepr) -> Result<Self> {
        QMatrix::new(r.rows, r.cols, r.entries)
    }
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Quaternion>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", entries.len()),
            });
        }
        Ok(QMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Quaternion::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                Quaternion::ONE
            } else {
                Quaternion::ZERO
            }
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Quaternion,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        QMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix from nested rows; panics on ragged input.
    pub fn from_rows<R: AsRef<[Quaternion]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |r, c| rows[r].as_ref()[c])
    }

    pub fn column(values: &[Quaternion]) -> Self {
        QMatrix {
            rows: values.len(),
            cols: 1,
            entries: values.to_vec(),
        }
    }

    pub fn diag(values: &[Quaternion]) -> Self {
        let n = values.len();
        Self::from_fn(
            n,
            n,
            |r, c| if r == c { values[r] } else { Quaternion::ZERO },
        )
    }

    /// Square matrix with only the anti-diagonal corners `(0, n-1)` and
    /// `(n-1, 0)` set; for `2 x 2` this is `[[0, top], [bottom, 0]]`.
    pub fn anti_diag2(top: Quaternion, bottom: Quaternion) -> Self {
        Self::from_rows(&[[Quaternion::ZERO, top], [bottom, Quaternion::ZERO]])
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
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Quaternion {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, q: Quaternion) {
        self.entries[r * self.cols + c] = q;
    }

    pub fn col(&self, c: usize) -> QMatrix {
        QMatrix::column(&(0..self.rows).map(|r| self.get(r, c)).collect::<Vec<_>>())
    }

    pub fn set_col(&mut self, c: usize, v: &QMatrix) {
        for r in 0..self.rows {
            self.set(r, c, v.get(r, 0));
        }
    }

    /// Matrix whose columns are the given column vectors.
    pub fn from_columns(columns: &[QMatrix]) -> Self {
        let rows = columns.first().map_or(0, |c| c.rows);
        Self::from_fn(rows, columns.len(), |r, c| columns[c].get(r, 0))
    }

    /// Conjugate transpose.
    pub fn adj(&self) -> QMatrix {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&q| f(q)).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> QMatrix {
        self.map(|q| q * s)
    }

    /// `self * q` with `q` acting on the right of every entry.
    pub fn right_scale(&self, q: Quaternion) -> QMatrix {
        self.map(|e| e * q)
    }

    /// `q * self`.
    pub fn left_scale(&self, q: Quaternion) -> QMatrix {
        self.map(|e| q * e)
    }

    /// Largest entry norm.
    pub fn max_norm(&self) -> f64 {
        self.entries.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// Euclidean norm of all entries.
    pub fn frobenius(&self) -> f64 {
        self.entries
            .iter()
            .map(|q| q.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `max_norm(self - other)`; infinite on shape mismatch.
    pub fn dist(&self, other: &QMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max)
    }

    /// `sum_k conj(self_k) other_k` for two columns.
    pub fn euclidean_inner(&self, other: &QMatrix) -> Quaternion {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(Quaternion::ZERO, |acc, (a, b)| acc + a.conj() * *b)
    }

    pub fn try_mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = Quaternion::ZERO;
            for k in 0..self.cols {
                acc += self.get(r, k) * other.get(k, c);
            }
            acc
        }))
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting. All row
    /// operations multiply on the left, which is valid over a division ring.
    pub fn inverse(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", self.rows, self.cols),
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        let scale = self.max_norm().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a.get(x, col).norm().total_cmp(&a.get(y, col).norm()))
                .expect("nonempty range");
            if a.get(pivot, col).norm() <= 1e-14 * scale {
                return Err(Error::Singular);
            }
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p_inv = a.get(col, col).inverse().ok_or(Error::Singular)?;
            for c in 0..n {
                a.set(col, c, p_inv * a.get(col, c));
                inv.set(col, c, p_inv * inv.get(col, c));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col);
                if f == Quaternion::ZERO {
                    continue;
                }
                for c in 0..n {
                    a.set(r, c, a.get(r, c) - f * a.get(col, c));
                    inv.set(r, c, inv.get(r, c) - f * inv.get(col, c));
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Complex adjoint: each entry `c1 + c2 j` becomes the block
    /// `[[c1, c2], [-conj(c2), conj(c1)]]`.
    pub fn complex_adjoint(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(2 * self.rows, 2 * self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let s = self.get(r, c).split();
                m[(2 * r, 2 * c)] = s.c1;
                m[(2 * r, 2 * c + 1)] = s.c2;
                m[(2 * r + 1, 2 * c)] = -s.c2.conj();
                m[(2 * r + 1, 2 * c + 1)] = s.c1.conj();
            }
        }
        m
    }

    /// Inverse of [`Self::complex_adjoint`] on a single column: the complex
    /// vector `(u_0, w_0, u_1, w_1, ...)` maps to entries `u_c - conj(w_c) j`.
    /// An eigenvector of the complex adjoint for `lambda` maps to a right
    /// eigenvector `M v = v lambda`.
    pub fn column_from_complex(x: &DVector<Complex64>) -> QMatrix {
        let n = x.len() / 2;
        QMatrix::column(
            &(0..n)
                .map(|c| Quaternion::from_split(x[2 * c], -x[2 * c + 1].conj()))
                .collect::<Vec<_>>(),
        )
    }

    /// Flattening to `R^{4 rows cols}`.
    pub fn to_real(&self) -> DVector<f64> {
        DVector::from_iterator(
            4 * self.entries.len(),
            self.entries.iter().flat_map(|q| [q.w, q.x, q.y, q.z]),
        )
    }

    pub fn from_real(rows: usize, cols: usize, v: &[f64]) -> Result<QMatrix> {
        if v.len() != 4 * rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} reals", 4 * rows * cols),
                found: format!("{} reals", v.len()),
            });
        }
        QMatrix::new(
            rows,
            cols,
            v.chunks_exact(4)
                .map(|c| Quaternion::new(c[0], c[1], c[2], c[3]))
                .collect(),
        )
    }

    /// `q`-th standard basis element of the flattening.
    pub fn real_basis(rows: usize, cols: usize, idx: usize) -> QMatrix {
        let mut v = vec![0.0; 4 * rows * cols];
        v[idx] = 1.0;
        QMatrix::from_real(rows, cols, &v).expect("sizes agree")
    }
}

/// Matrix of a real-linear map on `rows x cols` quaternionic matrices.
pub fn real_operator(rows: usize, cols: usize, f: impl Fn(&QMatrix) -> QMatrix) -> DMatrix<f64> {
    let n = 4 * rows * cols;
    let images: Vec<DVector<f64>> = (0..n)
        .map(|i| f(&QMatrix::real_basis(rows, cols, i)).to_real())
        .collect();
    let out_len = images.first().map_or(0, |v| v.len());
    DMatrix::from_fn(out_len, n, |r, c| images[c][r])
}

impl<'a> Mul<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &'a QMatrix) -> QMatrix {
        self.try_mul(rhs).expect("matrix dimensions agree")
    }
}

impl<'a> Add<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &'a QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a QMatrix> for &'a QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &'a QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        self.map(|q| -q)
    }
}

/// Which Hermitian form a space carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormTag {
    /// Anti-diagonal corners with an identity middle block.
    H1,
    /// Ball model `diag(-1, 1, ..., 1)`.
    H0,
    /// Positive definite `I_n`, whose isometry group is the compact `Sp(n)`.
    Compact,
}

impl FormTag {
    pub fn as_str(self) -> &'static str {
        match self {
            FormTag::H1 => "h1",
            FormTag::H0 => "h0",
            FormTag::Compact => "compact",
        }
    }
}

impl std::str::FromStr for FormTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h1" => Ok(FormTag::H1),
            "h0" => Ok(FormTag::H0),
            "compact" => Ok(FormTag::Compact),
            other => Err(Error::InvalidArgument(format!(
                "unknown form tag {other:?}"
            ))),
        }
    }
}

/// `H^{n,1}` with one of its Hermitian forms, or `H^n` with the standard
/// positive form when the tag is [`FormTag::Compact`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpace {
    n: usize,
    form: FormTag,
    gram: QMatrix,
}

impl HermitianSpace {
    pub fn new(n: usize, form: FormTag) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        let size = match form {
            FormTag::Compact => n,
            _ => n + 1,
        };
        let gram = QMatrix::from_fn(size, size, |r, c| {
            let one = Quaternion::ONE;
            match form {
                FormTag::H1 => {
                    let corner = (r == 0 && c == size - 1) || (r == size - 1 && c == 0);
                    let middle = r == c && r != 0 && r != size - 1;
                    if corner || middle {
                        one
                    } else {
                        Quaternion::ZERO
                    }
                }
                FormTag::H0 if r == c => {
                    if r == 0 {
                        -one
                    } else {
                        one
                    }
                }
                FormTag::Compact if r == c => one,
                _ => Quaternion::ZERO,
            }
        });
        Ok(HermitianSpace { n, form, gram })
    }

    /// `H^{1,1}` with the anti-diagonal form, the working space for pairs.
    pub fn h1(n: usize) -> Self {
        Self::new(n.max(1), FormTag::H1).expect("n >= 1")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn form(&self) -> FormTag {
        self.form
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    /// Side length of the matrices acting on this space.
    pub fn size(&self) -> usize {
        self.gram.rows
    }

    fn check_column(&self, z: &QMatrix) -> Result<()> {
        if z.rows != self.size() || z.cols != 1 {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x1 column", self.size()),
                found: format!("{}x{}", z.rows, z.cols),
            });
        }
        Ok(())
    }

    fn check_square(&self, m: &QMatrix) -> Result<()> {
        if m.rows != self.size() || m.cols != self.size() {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0} matrix", self.size()),
                found: format!("{}x{}", m.rows, m.cols),
            });
        }
        Ok(())
    }

    /// `<z, w> = w^* G z`.
    pub fn hermitian_product(&self, z: &QMatrix, w: &QMatrix) -> Result<Quaternion> {
        self.check_column(z)?;
        self.check_column(w)?;
        Ok((&(&w.adj() * &self.gram) * z).get(0, 0))
    }

    /// `max_norm(M^* G M - G)`.
    pub fn membership_residual(&self, m: &QMatrix) -> Result<f64> {
        self.check_square(m)?;
        Ok((&(&m.adj() * &self.gram) * m).dist(&self.gram))
    }

    pub fn is_group_member(&self, m: &QMatrix, tol: f64) -> Result<bool> {
        Ok(self.membership_residual(m)? <= tol)
    }

    /// Membership with the tolerance scaled by `max(1, |M|^2)`, appropriate
    /// for products whose entries are far from unit size.
    pub fn check_member_scaled(&self, m: &QMatrix, tol: f64) -> Result<()> {
        let residual = self.membership_residual(m)?;
        if residual > tol * m.max_norm().powi(2).max(1.0) {
            return Err(Error::NotGroupMember { residual });
        }
        Ok(())
    }

    /// `G^{-1} M^* G`. All three Gram matrices are involutions, so
    /// `G^{-1} = G`.
    pub fn group_inverse(&self, m: &QMatrix, tol: f64) -> Result<QMatrix> {
        self.check_member_scaled(m, tol)?;
        Ok(self.group_inverse_unchecked(m))
    }

    pub(crate) fn group_inverse_unchecked(&self, m: &QMatrix) -> QMatrix {
        &(&self.gram * &m.adj()) * &self.gram
    }

    /// Orthonormal real basis of `{X : X^* G + G X = 0}`.
    pub fn lie_algebra_basis(&self) -> Vec<QMatrix> {
        let m = self.size();
        basis_matrices(m, &self.lie_algebra_matrix(&Tolerance::default()))
    }

    /// Basis of the Lie algebra as the columns of a real `4m^2 x d` matrix.
    fn lie_algebra_matrix(&self, tol: &Tolerance) -> DMatrix<f64> {
        let m = self.size();
        let op = real_operator(m, m, |x| &(&x.adj() * &self.gram) + &(&self.gram * x));
        linalg::kernel(&op, tol.rank)
    }

    /// Dimensions of the `+1` and `-1` eigenspaces of `Ad(s)` on the Lie
    /// algebra, for a group element with `s^2 = +-I`.
    pub fn ad_eigenspace_dims(&self, s: &QMatrix, tol: &Tolerance) -> Result<LieDims> {
        self.check_square(s)?;
        let m = self.size();
        let sq = s * s;
        let id = QMatrix::identity(m);
        let scale = s.max_norm().powi(2).max(1.0);
        let plus = sq.dist(&id);
        let minus = sq.dist(&-&id);
        let s_inv = if plus <= tol.construction * scale {
            s.clone()
        } else if minus <= tol.construction * scale {
            -s
        } else {
            return Err(Error::NotInvolutionLike {
                residual: plus.min(minus),
            });
        };
        self.check_member_scaled(s, tol.construction)?;
        let basis = self.lie_algebra_matrix(tol);
        let ad = real_operator(m, m, |x| &(s * x) * &s_inv);
        let restricted = basis.transpose() * ad * &basis;
        let d = basis.ncols();
        let eye = DMatrix::<f64>::identity(d, d);
        // The restricted operator has eigenvalues +-1, so the threshold is
        // absolute in units of its norm.
        let floor = 1e-8 * restricted.norm().max(1.0);
        let plus_one = d - linalg::rank_above(&(&restricted - &eye), floor);
        let minus_one = d - linalg::rank_above(&(&restricted + &eye), floor);
        Ok(LieDims {
            total: d,
            plus_one,
            minus_one,
        })
    }

    /// A fixed skew-involution of the group: for `H1` the anti-diagonal
    /// corners are `j` and the middle block is `i I`; otherwise `i I`.
    pub fn canonical_skew_involution(&self) -> QMatrix {
        let m = self.size();
        match self.form {
            FormTag::H1 => QMatrix::from_fn(m, m, |r, c| {
                if (r == 0 && c == m - 1) || (r == m - 1 && c == 0) {
                    Quaternion::J
                } else if r == c && r != 0 && r != m - 1 {
                    Quaternion::I
                } else {
                    Quaternion::ZERO
                }
            }),
            _ => QMatrix::identity(m).left_scale(Quaternion::I),
        }
    }
}

fn basis_matrices(m: usize, basis: &DMatrix<f64>) -> Vec<QMatrix> {
    (0..basis.ncols())
        .map(|c| QMatrix::from_real(m, m, basis.column(c).as_slice()).expect("sizes agree"))
        .collect()
}

/// Generators of `Sp(n,1)` for the `H1` form. Products of these reach the
/// whole group.
pub mod generators {
    use super::QMatrix;
    use crate::quat::Quaternion;

    /// `diag(a, I, conj(a)^{-1})`; panics on `a = 0`.
    pub fn dilation(n: usize, a: Quaternion) -> QMatrix {
        let m = n + 1;
        let last = a.conj().inverse().expect("nonzero dilation");
        QMatrix::from_fn(m, m, |r, c| match (r, c) {
            (0, 0) => a,
            _ if r == m - 1 && c == m - 1 => last,
            _ if r == c => Quaternion::ONE,
            _ => Quaternion::ZERO,
        })
    }

    /// Heisenberg translation by a pure quaternion `x` and `y in H^{n-1}`:
    /// `[[1, -y^*, x - |y|^2/2], [0, I, y], [0, 0, 1]]`.
    pub fn translation(n: usize, x: Quaternion, y: &[Quaternion]) -> QMatrix {
        assert_eq!(y.len(), n - 1, "translation needs n-1 middle coordinates");
        let m = n + 1;
        let y2: f64 = y.iter().map(|q| q.norm_sqr()).sum();
        let mut t = QMatrix::identity(m);
        t.set(
            0,
            m - 1,
            Quaternion::pure(x.vector()) - Quaternion::real(y2 / 2.0),
        );
        for (k, &yk) in y.iter().enumerate() {
            t.set(0, k + 1, -yk.conj());
            t.set(k + 1, m - 1, yk);
        }
        t
    }

    /// `diag(lambda, U, lambda)` for a unit `lambda` and `U` in `Sp(n-1)`.
    pub fn rotation(lambda: Quaternion, u: &QMatrix) -> QMatrix {
        let m = u.rows() + 2;
        QMatrix::from_fn(m, m, |r, c| {
            if (r == 0 && c == 0) || (r == m - 1 && c == m - 1) {
                lambda
            } else if r == 0 || c == 0 || r == m - 1 || c == m - 1 {
                Quaternion::ZERO
            } else {
                u.get(r - 1, c - 1)
            }
        })
    }

    /// Exchanges the two isotropic corners: anti-diagonal ones, identity
    /// middle block.
    pub fn swap(n: usize) -> QMatrix {
        let m = n + 1;
        QMatrix::from_fn(m, m, |r, c| {
            let corner = (r == 0 && c == m - 1) || (r == m - 1 && c == 0);
            if corner || (r == c && r != 0 && r != m - 1) {
                Quaternion::ONE
            } else {
                Quaternion::ZERO
            }
        })
    }
}

/// `Ad(s)` eigenspace dimensions on `sp(n)` for `s` in the compact `Sp(n)`.
pub fn compact_ad_dims(n: usize, s: &QMatrix, tol: &Tolerance) -> Result<LieDims> {
    HermitianSpace::new(n, FormTag::Compact)?.ad_eigenspace_dims(s, tol)
}

/// Real dimensions of a Lie algebra and its `Ad(s)` eigenspaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieDims {
    pub total: usize,
    pub plus_one: usize,
    pub minus_one: usize,
}

/// A point of the boundary of quaternionic hyperbolic space in the `H1`
/// model. Finite points carry their standard lift (last coordinate `1`);
/// the point at infinity has lift `(1, 0, ..., 0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryPoint {
    Finite(QMatrix),
    Infinity,
}

/// `|z_last| <= INFINITY_REL * |z|` is read as the point at infinity.
const INFINITY_REL: f64 = 1e-12;

impl BoundaryPoint {
    fn require_h1(space: &HermitianSpace) -> Result<()> {
        if space.form != FormTag::H1 {
            return Err(Error::UnsupportedForm {
                form: space.form.as_str().into(),
            });
        }
        Ok(())
    }

    /// Projects a null vector to its boundary point, rejecting vectors that
    /// are not null to `tol` (relative to `|z|^2`).
    pub fn from_lift(space: &HermitianSpace, z: &QMatrix, tol: f64) -> Result<Self> {
        Self::require_h1(space)?;
        space.check_column(z)?;
        let norm = z.frobenius();
        if norm == 0.0 {
            return Err(Error::InvalidArgument(
                "zero vector has no projective point".into(),
            ));
        }
        let value = space.hermitian_product(z, z)?.w;
        if value.abs() > tol * norm * norm {
            return Err(Error::NotNull { value });
        }
        let last = z.get(z.rows - 1, 0);
        if last.norm() <= INFINITY_REL * norm {
            return Ok(BoundaryPoint::Infinity);
        }
        let inv = last.inverse().expect("nonzero");
        let mut lift = z.right_scale(inv);
        lift.set(z.rows - 1, 0, Quaternion::ONE);
        Ok(BoundaryPoint::Finite(lift))
    }

    /// `o = (0, ..., 0, 1)`.
    pub fn origin(space: &HermitianSpace) -> Self {
        let mut v = vec![Quaternion::ZERO; space.size()];
        *v.last_mut().expect("size >= 1") = Quaternion::ONE;
        BoundaryPoint::Finite(QMatrix::column(&v))
    }

    /// Finite point with standard lift `(q, 0, ..., 0, 1)`; null iff `q` is
    /// purely imaginary.
    pub fn finite(space: &HermitianSpace, q: Quaternion, tol: f64) -> Result<Self> {
        let mut v = vec![Quaternion::ZERO; space.size()];
        v[0] = q;
        *v.last_mut().expect("size >= 1") = Quaternion::ONE;
        Self::from_lift(space, &QMatrix::column(&v), tol)
    }

    pub fn lift(&self, space: &HermitianSpace) -> QMatrix {
        match self {
            BoundaryPoint::Finite(z) => z.clone(),
            BoundaryPoint::Infinity => {
                let mut v = vec![Quaternion::ZERO; space.size()];
                v[0] = Quaternion::ONE;
                QMatrix::column(&v)
            }
        }
    }

    /// Image under the projective action of a matrix.
    pub fn apply(&self, space: &HermitianSpace, g: &QMatrix, tol: f64) -> Result<Self> {
        let z = g.try_mul(&self.lift(space))?;
        Self::from_lift(space, &z, tol)
    }

    /// Chordal distance between projective points: `sqrt(1 - |<u,v>|^2)`
    /// for Euclidean-unit lifts `u`, `v`.
    pub fn distance(&self, other: &BoundaryPoint, space: &HermitianSpace) -> f64 {
        let u = self.lift(space);
        let v = other.lift(space);
        let u = u.scale(1.0 / u.frobenius());
        let v = v.scale(1.0 / v.frobenius());
        // |v - u <u,v>| equals sqrt(1 - |<u,v>|^2) without cancellation.
        let proj = u.right_scale(u.euclidean_inner(&v));
        (&v - &proj).frobenius()
    }

    pub fn approx_eq(&self, other: &BoundaryPoint, space: &HermitianSpace, tol: f64) -> bool {
        self.distance(other, space) <= tol
    }
}
