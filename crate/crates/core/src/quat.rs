//! Hamilton quaternions and the scalar-level solvers used by the
//! constructions in [`crate::reversers`] and [`crate::cartan`].
//!
//! Quaternions are stored scalar-first as `w + x i + y j + z k`. The complex
//! split `q = c1 + c2 j` uses `c1 = w + x i` and `c2 = y + z i`, so that
//! `j z = conj(z) j` for every complex `z`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of the quaternion algebra. Serialized as `[w, x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

impl From<Complex64> for Quaternion {
    fn from(c: Complex64) -> Self {
        Quaternion::new(c.re, c.im, 0.0, 0.0)
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    /// Pure quaternion with vector part `v`.
    #[inline]
    pub const fn pure(v: [f64; 3]) -> Self {
        Quaternion::new(0.0, v[0], v[1], v[2])
    }

    /// `e^{i angle}`.
    pub fn exp_i(angle: f64) -> Self {
        Quaternion::new(angle.cos(), angle.sin(), 0.0, 0.0)
    }

    /// `e^{j angle}`.
    pub fn exp_j(angle: f64) -> Self {
        Quaternion::new(angle.cos(), 0.0, angle.sin(), 0.0)
    }

    /// `cos(angle) + sin(angle) * axis` for a unit pure `axis`.
    pub fn exp_axis(angle: f64, axis: [f64; 3]) -> Self {
        let s = angle.sin();
        Quaternion::new(angle.cos(), s * axis[0], s * axis[1], s * axis[2])
    }

    /// Reassembles `c1 + c2 j`.
    pub fn from_split(c1: Complex64, c2: Complex64) -> Self {
        Quaternion::new(c1.re, c1.im, c2.re, c2.im)
    }

    pub fn split(self) -> ComplexSplit {
        ComplexSplit {
            c1: Complex64::new(self.w, self.x),
            c2: Complex64::new(self.y, self.z),
        }
    }

    #[inline]
    pub fn vector(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Norm of the vector part.
    #[inline]
    pub fn vector_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        let n = self.norm_sqr();
        if n == 0.0 {
            None
        } else {
            Some(self.conj() / n)
        }
    }

    /// Unit quaternion in the direction of `self`, `None` for zero.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n == 0.0 {
            None
        } else {
            Some(self / n)
        }
    }

    /// Euclidean inner product on the underlying `R^4`.
    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// True if the `j` and `k` coefficients vanish to `tol`.
    pub fn is_complex(self, tol: f64) -> bool {
        self.y.abs() <= tol && self.z.abs() <= tol
    }

    /// Complex number `w + x i`; only meaningful when [`Self::is_complex`].
    pub fn complex_part(self) -> Complex64 {
        Complex64::new(self.w, self.x)
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        (self - other).norm()
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

/// `q = c1 + c2 j` with complex `c1`, `c2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexSplit {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl ComplexSplit {
    pub fn reassemble(self) -> Quaternion {
        Quaternion::from_split(self.c1, self.c2)
    }
}

/// The complex representative of a similarity class of quaternions:
/// `Re(q) + |Im(q)| i`, which always has nonnegative imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueClass {
    pub rep: Complex64,
    pub modulus: f64,
}

impl EigenvalueClass {
    /// Builds the class of a complex number; the sign of its imaginary part
    /// is discarded.
    pub fn from_complex(z: Complex64) -> Self {
        let rep = Complex64::new(z.re, z.im.abs());
        EigenvalueClass {
            rep,
            modulus: rep.norm(),
        }
    }

    /// Argument of the representative, in `[0, pi]`.
    pub fn angle(&self) -> f64 {
        self.rep.im.atan2(self.rep.re).clamp(0.0, PI)
    }

    pub fn approx_eq(&self, other: &EigenvalueClass, tol: f64) -> bool {
        (self.rep - other.rep).norm() <= tol
    }
}

pub fn similarity_representative(q: Quaternion) -> EigenvalueClass {
    EigenvalueClass::from_complex(Complex64::new(q.w, q.vector_norm()))
}

/// Smallest `theta` in `[0, 2pi)` with `Re(c2 e^{-i theta}) = 0`.
///
/// For `c2 = 0` every angle works and `0` is returned.
pub fn solve_orthogonal_phase(c2: Complex64) -> f64 {
    if c2.norm() <= 1e-300 {
        return 0.0;
    }
    // c cos(t) + d sin(t) = 0  <=>  (cos t, sin t) is orthogonal to (c, d).
    let first = wrap_phase(c2.re.atan2(-c2.im));
    let second = wrap_phase(first + PI);
    first.min(second)
}

/// `e^{i theta}` for the angle of [`solve_orthogonal_phase`], formed as
/// `+-i c2 / |c2|` without a round trip through trigonometry.
pub fn orthogonal_phase_unit(c2: Complex64) -> Complex64 {
    let n = c2.norm();
    if n <= 1e-300 {
        return Complex64::new(1.0, 0.0);
    }
    let u = Complex64::i() * c2 / n;
    if u.im < 0.0 || (u.im == 0.0 && u.re < 0.0) {
        -u
    } else {
        u
    }
}

fn wrap_phase(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Unit pure `u` with `u w conj(u) = v`, for pure `v`, `w` of equal modulus.
///
/// Generic case `u = (v + w) / |v + w|`. When `v = -w` the first of `j`, `k`,
/// `i` with a component orthogonal to `v` is projected and normalized.
pub fn solve_reflection_axis(v: Quaternion, w: Quaternion, tol: f64) -> Result<Quaternion> {
    for q in [v, w] {
        if q.w.abs() > tol.max(tol * q.norm()) {
            return Err(Error::NotPure { real: q.w });
        }
    }
    let v = Quaternion::pure(v.vector());
    let w = Quaternion::pure(w.vector());
    let (nv, nw) = (v.norm(), w.norm());
    if nv == 0.0 && nw == 0.0 {
        return Err(Error::ZeroInput);
    }
    if (nv - nw).abs() > tol * nv.max(nw).max(1.0) {
        return Err(Error::MismatchedModuli {
            left: nv,
            right: nw,
        });
    }
    let sum = v + w;
    // Floating-point addition is correctly rounded, so the direction of
    // v + w stays accurate even when v and w are nearly antipodal.
    if sum.norm() > 1e-14 * nv {
        return Ok(sum / sum.norm());
    }
    let unit_v = v / nv;
    for candidate in [Quaternion::J, Quaternion::K, Quaternion::I] {
        let perp = candidate - unit_v * candidate.dot(unit_v);
        let n = perp.norm();
        if n > tol {
            return Ok(perp / n);
        }
    }
    unreachable!("one of j, k, i always has a component orthogonal to a nonzero vector")
}

/// `mu b conj(mu)` for a unit `mu`.
pub fn conjugate_by_unit(mu: Quaternion, b: Quaternion, tol: f64) -> Result<Quaternion> {
    let n = mu.norm();
    if (n - 1.0).abs() > tol {
        return Err(Error::NotUnit { norm: n });
    }
    Ok(mu * b * mu.conj())
}

/// A square root of `-1`, `mu`, with `a = mu b conj(mu)`.
///
/// Exists iff `Re(a) = Re(b)` and `|a| = |b|`. When both vector parts vanish
/// any square root of `-1` works and `j` is returned.
pub fn unit_conjugator(a: Quaternion, b: Quaternion, tol: f64) -> Result<Quaternion> {
    let scale = a.norm().max(b.norm()).max(1.0);
    if (a.w - b.w).abs() > tol * scale || (a.norm() - b.norm()).abs() > tol * scale {
        return Err(Error::MismatchedModuli {
            left: a.norm(),
            right: b.norm(),
        });
    }
    let va = Quaternion::pure(a.vector());
    let vb = Quaternion::pure(b.vector());
    match solve_reflection_axis(va, vb, tol * scale) {
        Ok(u) => Ok(u),
        Err(Error::ZeroInput) => Ok(Quaternion::J),
        Err(e) => Err(e),
    }
}
