//! Reverser spaces and the decisions and constructions of strongly doubly
//! reversible pairs: `Sp(1)`, `SO(3)`, `SO(4)`, and hyperbolic pairs in
//! `Sp(1,1)`.

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cartan::{self, DISTINCT_TOL};
use crate::error::{Error, Result};
use crate::linalg;
use crate::qspace::{real_operator, BoundaryPoint, FormTag, HermitianSpace, QMatrix};
use crate::quat::{orthogonal_phase_unit, solve_reflection_axis, Quaternion};
use crate::spectral::{self, HyperbolicData};
use crate::Tolerance;

/// Real basis of `{X : X g = g^{-1} X for every g}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReverserSpace {
    pub ambient_dim: usize,
    pub dim: usize,
    pub basis: Vec<QMatrix>,
}

fn check_square_family(gs: &[QMatrix]) -> Result<usize> {
    let m = gs.first().map_or(0, QMatrix::rows);
    if m == 0 {
        return Err(Error::InvalidArgument(
            "at least one matrix is required".into(),
        ));
    }
    for g in gs {
        if g.rows() != m || g.cols() != m {
            return Err(Error::DimensionMismatch {
                expected: format!("{m}x{m} matrix"),
                found: format!("{}x{}", g.rows(), g.cols()),
            });
        }
    }
    Ok(m)
}

/// Kernel of the stacked operators `X -> X g_i - g_i^{-1} X` on the real
/// flattening of `m x m` quaternionic matrices.
pub fn reverser_space(gs: &[QMatrix], tol: &Tolerance) -> Result<ReverserSpace> {
    let m = check_square_family(gs)?;
    let n = 4 * m * m;
    let mut stacked = DMatrix::<f64>::zeros(n * gs.len(), n);
    for (k, g) in gs.iter().enumerate() {
        let g_inv = g.inverse()?;
        let op = real_operator(m, m, |x| &(x * g) - &(&g_inv * x));
        stacked.view_mut((k * n, 0), (n, n)).copy_from(&op);
    }
    let kernel = linalg::kernel(&stacked, tol.rank);
    let basis: Vec<QMatrix> = (0..kernel.ncols())
        .map(|c| QMatrix::from_real(m, m, kernel.column(c).as_slice()).expect("sizes agree"))
        .collect();
    Ok(ReverserSpace {
        ambient_dim: n,
        dim: basis.len(),
        basis,
    })
}

/// `max_i |X g_i - g_i^{-1} X|`.
pub fn reversal_residual(gs: &[QMatrix], x: &QMatrix) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for g in gs {
        let g_inv = g.inverse()?;
        worst = worst.max((&(x * g) - &(&g_inv * x)).max_norm());
    }
    Ok(worst)
}

/// Two reversers of the same tuple differ by an element of its centralizer.
pub fn reverser_coset_check(
    gs: &[QMatrix],
    h1: &QMatrix,
    h2: &QMatrix,
    tol: &Tolerance,
) -> Result<bool> {
    check_square_family(gs)?;
    for h in [h1, h2] {
        let residual = reversal_residual(gs, h)?;
        let scale = h.max_norm().max(1.0) * gs.iter().map(QMatrix::max_norm).fold(1.0, f64::max);
        if residual > tol.construction * scale {
            return Err(Error::NotReverser { residual });
        }
    }
    let z = &h1.inverse()? * h2;
    let scale = z.max_norm().max(1.0) * gs.iter().map(QMatrix::max_norm).fold(1.0, f64::max);
    Ok(gs
        .iter()
        .all(|g| (&(&z * g) - &(g * &z)).max_norm() <= tol.construction * scale))
}

/// A verified order-two reverser of a tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReverserWitness {
    pub c: QMatrix,
    /// `C^2 = square_sign * I`.
    pub square_sign: i8,
    /// `max_i |C g_i C^{-1} - g_i^{-1}|`.
    pub residual_conj: f64,
    /// `|C^* G C - G|`.
    pub residual_group: f64,
}

impl ReverserWitness {
    /// Checks membership, `C^2 = +-I` and every reversal, each to `tol`
    /// relative to the sizes of the matrices involved.
    pub fn verify(space: &HermitianSpace, gs: &[QMatrix], c: &QMatrix, tol: f64) -> Result<Self> {
        let size = space.size();
        if c.rows() != size || c.cols() != size {
            return Err(Error::DimensionMismatch {
                expected: format!("{size}x{size} matrix"),
                found: format!("{}x{}", c.rows(), c.cols()),
            });
        }
        let cn = c.max_norm().max(1.0);
        let residual_group = space.membership_residual(c)?;
        if residual_group > tol * cn * cn {
            return Err(Error::NotGroupMember {
                residual: residual_group,
            });
        }
        let sq = c * c;
        let id = QMatrix::identity(size);
        let (plus, minus) = (sq.dist(&id), sq.dist(&-&id));
        let square_sign: i8 = if plus <= minus { 1 } else { -1 };
        if plus.min(minus) > tol * cn * cn {
            return Err(Error::NotInvolutionLike {
                residual: plus.min(minus),
            });
        }
        let c_inv = c.scale(f64::from(square_sign));
        let mut residual_conj: f64 = 0.0;
        let mut scale: f64 = 1.0;
        for g in gs {
            let g_inv = g.inverse()?;
            residual_conj = residual_conj.max((&(&(c * g) * &c_inv) - &g_inv).max_norm());
            scale = scale.max(cn * cn * g.max_norm()).max(g_inv.max_norm());
        }
        if residual_conj > tol * scale {
            return Err(Error::NotReverser {
                residual: residual_conj,
            });
        }
        Ok(ReverserWitness {
            c: c.clone(),
            square_sign,
            residual_conj,
            residual_group,
        })
    }
}

/// Why a pair is certified not strongly doubly reversible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// No nonzero matrix reverses both elements.
    EmptyReverserSpace { ambient_dim: usize },
    /// Hyperbolic elements sharing exactly one fixed point; `distance` is
    /// the chordal distance between the two unshared points.
    SingleSharedFixedPoint { distance: f64 },
    /// The two Cartan invariants that an interchanging involution would
    /// have to equalize.
    CartanMismatch { first: f64, second: f64 },
    /// No member of the hyperbolic reverser family reverses the other
    /// element; `residual` measures the failed condition.
    NoFamilyParameter { condition: String, residual: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub reason: String,
    pub violation: Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum SdrVerdict {
    Yes { witness: ReverserWitness },
    No { certificate: Certificate },
    Inconclusive { reason: String },
}

impl SdrVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, SdrVerdict::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, SdrVerdict::No { .. })
    }

    pub fn witness(&self) -> Option<&ReverserWitness> {
        match self {
            SdrVerdict::Yes { witness } => Some(witness),
            _ => None,
        }
    }

    fn no(reason: impl Into<String>, violation: Violation) -> Self {
        SdrVerdict::No {
            certificate: Certificate {
                reason: reason.into(),
                violation,
            },
        }
    }
}

fn compact1() -> HermitianSpace {
    HermitianSpace::new(1, FormTag::Compact).expect("n = 1")
}

fn check_unit(p: Quaternion, tol: f64) -> Result<()> {
    let n = p.norm();
    if (n - 1.0).abs() > tol {
        return Err(Error::NotUnit { norm: n });
    }
    Ok(())
}

/// A unit `q` with `q^2 = -1` reversing both unit quaternions.
///
/// `p1` is first rotated onto the complex line by a unit pure `s`; the
/// reverser is then `conj(s) e^{i theta1} j s` with `theta1` chosen so that
/// `Re(c2 e^{-i theta1}) = 0` for the `j`-part `c2` of `s p2 conj(s)`. When
/// `p1` is real every `e^{i theta} j` reverses it and `s = 1`.
pub fn sdr_sp1(p1: Quaternion, p2: Quaternion, tol: &Tolerance) -> Result<ReverserWitness> {
    let unit_tol = tol.construction.max(1e-9);
    check_unit(p1, unit_tol)?;
    check_unit(p2, unit_tol)?;
    let v = Quaternion::pure(p1.vector());
    let vn = v.norm();
    let along_i = vn <= 1e-12 || (v.y.hypot(v.z) <= 1e-12 * vn);
    let s = if along_i {
        Quaternion::ONE
    } else {
        solve_reflection_axis(Quaternion::I, v / vn, 1e-9)?
    };
    let p2_rot = s * p2 * s.conj();
    let q_local = Quaternion::from(orthogonal_phase_unit(p2_rot.split().c2)) * Quaternion::J;
    let q = s.conj() * q_local * s;
    ReverserWitness::verify(
        &compact1(),
        &[QMatrix::column(&[p1]), QMatrix::column(&[p2])],
        &QMatrix::column(&[q]),
        unit_tol,
    )
}

/// Rotation `x -> q x conj(q)` of the pure quaternions, in the basis
/// `(i, j, k)`.
pub fn so3_from_quat(q: Quaternion) -> Matrix3<f64> {
    let basis = [Quaternion::I, Quaternion::J, Quaternion::K];
    Matrix3::from_fn(|r, c| {
        let v = (q * basis[c] * q.conj()).vector();
        v[r]
    })
}

fn canonical_sign(q: Quaternion) -> Quaternion {
    let first = [q.w, q.x, q.y, q.z]
        .into_iter()
        .find(|c| c.abs() > 1e-12)
        .unwrap_or(1.0);
    if first < 0.0 {
        -q
    } else {
        q
    }
}

fn check_rotation(r: &DMatrix<f64>, n: usize) -> Result<()> {
    if r.nrows() != n || r.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{n} real matrix"),
            found: format!("{}x{}", r.nrows(), r.ncols()),
        });
    }
    let residual = (r.transpose() * r - DMatrix::<f64>::identity(n, n)).amax();
    let det = r.determinant();
    if residual > 1e-9 || (det - 1.0).abs() > 1e-9 {
        return Err(Error::NotRotation { residual, det });
    }
    Ok(())
}

/// Unit quaternion lift of a rotation of `R^3`, with its first nonzero
/// component positive.
pub fn quat_from_so3(r: &DMatrix<f64>) -> Result<Quaternion> {
    check_rotation(r, 3)?;
    let m = |i: usize, j: usize| r[(i, j)];
    let trace = m(0, 0) + m(1, 1) + m(2, 2);
    // Shepperd: divide by the largest of the four squared components.
    let cands = [trace, m(0, 0), m(1, 1), m(2, 2)];
    let big = (0..4)
        .max_by(|&a, &b| cands[a].total_cmp(&cands[b]))
        .expect("four candidates");
    let q = match big {
        0 => {
            let s = (1.0 + trace).sqrt() * 2.0;
            Quaternion::new(
                s / 4.0,
                (m(2, 1) - m(1, 2)) / s,
                (m(0, 2) - m(2, 0)) / s,
                (m(1, 0) - m(0, 1)) / s,
            )
        }
        1 => {
            let s = (1.0 + m(0, 0) - m(1, 1) - m(2, 2)).sqrt() * 2.0;
            Quaternion::new(
                (m(2, 1) - m(1, 2)) / s,
                s / 4.0,
                (m(0, 1) + m(1, 0)) / s,
                (m(0, 2) + m(2, 0)) / s,
            )
        }
        2 => {
            let s = (1.0 - m(0, 0) + m(1, 1) - m(2, 2)).sqrt() * 2.0;
            Quaternion::new(
                (m(0, 2) - m(2, 0)) / s,
                (m(0, 1) + m(1, 0)) / s,
                s / 4.0,
                (m(1, 2) + m(2, 1)) / s,
            )
        }
        _ => {
            let s = (1.0 - m(0, 0) - m(1, 1) + m(2, 2)).sqrt() * 2.0;
            Quaternion::new(
                (m(1, 0) - m(0, 1)) / s,
                (m(0, 2) + m(2, 0)) / s,
                (m(1, 2) + m(2, 1)) / s,
                s / 4.0,
            )
        }
    };
    let q = canonical_sign(q.normalized().expect("rotation lift is nonzero"));
    Ok(q)
}

/// Rotation `x -> p x conj(q)` of `H = R^4`, basis `(1, i, j, k)`.
pub fn so4_from_pair(p: Quaternion, q: Quaternion) -> DMatrix<f64> {
    let basis = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    DMatrix::from_fn(4, 4, |r, c| {
        let y = p * basis[c] * q.conj();
        [y.w, y.x, y.y, y.z][r]
    })
}

fn dm3(m: &Matrix3<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(3, 3, |r, c| m[(r, c)])
}

/// Lifts a rotation of `R^4` to `(p, q)` with `R x = p x conj(q)`.
///
/// `w = R(1) = p conj(q)`; right multiplication by `conj(w)` turns `R` into
/// `x -> p x conj(p)`, whose `3 x 3` block lifts to `p`; then `q = conj(w) p`.
pub fn so4_factor(r: &DMatrix<f64>) -> Result<(Quaternion, Quaternion)> {
    check_rotation(r, 4)?;
    let w = Quaternion::new(r[(0, 0)], r[(1, 0)], r[(2, 0)], r[(3, 0)]);
    let right = so4_from_pair(Quaternion::ONE, w);
    let s = right * r;
    let block = s.view((1, 1), (3, 3)).into_owned();
    let p = quat_from_so3(&block).map_err(|_| Error::FactorizationFailure {
        residual: (s.view((1, 1), (3, 3)).transpose() * s.view((1, 1), (3, 3))
            - DMatrix::<f64>::identity(3, 3))
        .amax(),
    })?;
    let q = w.conj() * p;
    let residual = (so4_from_pair(p, q) - r).amax();
    if residual > 1e-9 {
        return Err(Error::FactorizationFailure { residual });
    }
    Ok((p, q))
}

/// Involutions with `g1 = i1 i2` and `g2 = i1 i3`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvolutionTriple {
    pub i1: DMatrix<f64>,
    pub i2: DMatrix<f64>,
    pub i3: DMatrix<f64>,
}

impl InvolutionTriple {
    /// Largest residual among `i_m^2 = I`, `i1 i2 = g1`, `i1 i3 = g2`.
    pub fn residual(&self, g1: &DMatrix<f64>, g2: &DMatrix<f64>) -> f64 {
        let n = self.i1.nrows();
        let id = DMatrix::<f64>::identity(n, n);
        [
            (&self.i1 * &self.i1 - &id).amax(),
            (&self.i2 * &self.i2 - &id).amax(),
            (&self.i3 * &self.i3 - &id).amax(),
            (&self.i1 * &self.i2 - g1).amax(),
            (&self.i1 * &self.i3 - g2).amax(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    fn checked(self, g1: &DMatrix<f64>, g2: &DMatrix<f64>) -> Result<Self> {
        let residual = self.residual(g1, g2);
        if residual > 1e-9 {
            return Err(Error::FactorizationFailure { residual });
        }
        Ok(self)
    }
}

/// Involution triple for two rotations of `R^3`, through `Sp(1)`:
/// `(-q, q p1, q p2)` projected, with `q` from [`sdr_sp1`].
pub fn sdr_so3(r1: &DMatrix<f64>, r2: &DMatrix<f64>, tol: &Tolerance) -> Result<InvolutionTriple> {
    let p1 = quat_from_so3(r1)?;
    let p2 = quat_from_so3(r2)?;
    let q = sdr_sp1(p1, p2, tol)?.c.get(0, 0);
    InvolutionTriple {
        i1: dm3(&so3_from_quat(-q)),
        i2: dm3(&so3_from_quat(q * p1)),
        i3: dm3(&so3_from_quat(q * p2)),
    }
    .checked(r1, r2)
}

/// Involution triple for two rotations of `R^4`, componentwise through
/// `Sp(1) x Sp(1)`.
pub fn sdr_so4(r1: &DMatrix<f64>, r2: &DMatrix<f64>, tol: &Tolerance) -> Result<InvolutionTriple> {
    let (p1, q1) = so4_factor(r1)?;
    let (p2, q2) = so4_factor(r2)?;
    let a = sdr_sp1(p1, p2, tol)?.c.get(0, 0);
    let b = sdr_sp1(q1, q2, tol)?.c.get(0, 0);
    InvolutionTriple {
        i1: so4_from_pair(-a, -b),
        i2: so4_from_pair(a * p1, b * q1),
        i3: so4_from_pair(a * p2, b * q2),
    }
    .checked(r1, r2)
}

/// `diag(r e^{i theta}, r^{-1} e^{i theta})`.
pub fn hyperbolic_normal(r: f64, theta: f64) -> QMatrix {
    let e = Complex64::from_polar(1.0, theta);
    QMatrix::diag(&[Quaternion::from(e * r), Quaternion::from(e / r)])
}

/// `C(b) = [[0, b j], [conj(b)^{-1} j, 0]]`.
pub fn family_member(b: Complex64) -> Result<QMatrix> {
    if b.norm() == 0.0 {
        return Err(Error::ZeroParameter);
    }
    let top = Quaternion::from(b) * Quaternion::J;
    let bottom = Quaternion::from(b.conj().inv()) * Quaternion::J;
    Ok(QMatrix::anti_diag2(top, bottom))
}

/// The reverser `C(b)` of a hyperbolic normal form.
pub fn hyperbolic_reverser_family(a_normal: &QMatrix, b: Complex64) -> Result<QMatrix> {
    let is_normal = a_normal.rows() == 2
        && a_normal.cols() == 2
        && a_normal.get(0, 1).norm() == 0.0
        && a_normal.get(1, 0).norm() == 0.0
        && a_normal.get(0, 0).is_complex(1e-12)
        && a_normal.get(1, 1).is_complex(1e-12)
        && a_normal.get(0, 0).norm() < 1.0;
    if !is_normal {
        return Err(Error::PreconditionViolated {
            detail: "expected diag(r e^{i theta}, r^{-1} e^{i theta}) with 0 < r < 1".into(),
        });
    }
    family_member(b)
}

/// Confirms that a reverser of two hyperbolic elements squares to `-I`.
pub fn upgrade_reverser(
    space: &HermitianSpace,
    a: &QMatrix,
    b: &QMatrix,
    c: &QMatrix,
    tol: &Tolerance,
) -> Result<ReverserWitness> {
    for g in [a, b] {
        if !spectral::classify(space, g, tol)?.is_hyperbolic() {
            return Err(Error::NotHyperbolic);
        }
    }
    space.check_member_scaled(c, tol.construction)?;
    let pair = [a.clone(), b.clone()];
    let residual = reversal_residual(&pair, c)?;
    let scale = c.max_norm().max(1.0) * a.max_norm().max(b.max_norm()).max(1.0) * 2.0;
    if residual > tol.construction * scale {
        return Err(Error::NotReverser { residual });
    }
    let sq = (c * c).dist(&-&QMatrix::identity(space.size()));
    if sq > tol.construction * c.max_norm().powi(2).max(1.0) {
        return Err(Error::SquareCheckFailed { residual: sq });
    }
    ReverserWitness::verify(space, &pair, c, tol.construction)
}

fn require_sp11(space: &HermitianSpace) -> Result<()> {
    if space.form() != FormTag::H1 || space.n() != 1 {
        return Err(Error::UnsupportedForm {
            form: format!("{} with n = {}", space.form().as_str(), space.n()),
        });
    }
    Ok(())
}

/// How many of `a`'s fixed points are fixed points of `b`.
fn shared_fixed_points(space: &HermitianSpace, ha: &HyperbolicData, hb: &HyperbolicData) -> usize {
    let ours = [&ha.attracting, &ha.repelling];
    let theirs = [&hb.attracting, &hb.repelling];
    ours.iter()
        .filter(|p| theirs.iter().any(|q| p.distance(q, space) <= 1e-8))
        .count()
}

/// Hyperbolic pairs with a common fixed point: SDR exactly when both fixed
/// points agree. The witness conjugates `B` to `diag(mu, .)` in `A`'s frame
/// and uses `C(b)` with `Re(b conj(c2)) = 0` for `mu = c1 + c2 j`.
pub fn sdr_hyperbolic_common_fixed(
    space: &HermitianSpace,
    a: &QMatrix,
    b: &QMatrix,
    tol: &Tolerance,
) -> Result<SdrVerdict> {
    require_sp11(space)?;
    let ha = spectral::hyperbolic_normal_form(space, a, tol)?;
    let hb = spectral::hyperbolic_normal_form(space, b, tol)?;
    match shared_fixed_points(space, &ha, &hb) {
        0 => Err(Error::PreconditionViolated {
            detail: "the hyperbolic elements have no common fixed point".into(),
        }),
        1 => {
            let pa = [&ha.attracting, &ha.repelling];
            let pb = [&hb.attracting, &hb.repelling];
            let mut distance: f64 = 0.0;
            for p in pa {
                for q in pb {
                    distance = distance.max(p.distance(q, space));
                }
            }
            Ok(SdrVerdict::no(
                "the elements share exactly one fixed point",
                Violation::SingleSharedFixedPoint { distance },
            ))
        }
        _ => {
            let c_inv = space.group_inverse(&ha.c_a, tol.construction)?;
            let b_local = &(&c_inv * b) * &ha.c_a;
            let c2 = b_local.get(0, 0).split().c2;
            let param = if c2.norm() > 1e-12 {
                Complex64::i() * c2 / c2.norm()
            } else {
                Complex64::i()
            };
            // Any positive multiple of `param` works; pick the one that
            // balances the two halves and so minimizes the witness norm.
            let upper =
                QMatrix::anti_diag2(Quaternion::from(param) * Quaternion::J, Quaternion::ZERO);
            let lower = QMatrix::anti_diag2(
                Quaternion::ZERO,
                Quaternion::from(param.conj().inv()) * Quaternion::J,
            );
            let p = &(&ha.c_a * &upper) * &c_inv;
            let q = &(&ha.c_a * &lower) * &c_inv;
            let rho = (q.frobenius() / p.frobenius()).sqrt();
            let witness_c = &p.scale(rho) + &q.scale(1.0 / rho);
            let witness = ReverserWitness::verify(
                space,
                &[a.clone(), b.clone()],
                &witness_c,
                tol.construction,
            )?;
            Ok(SdrVerdict::Yes { witness })
        }
    }
}

/// The two angles of the Cartan necessary condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartanCheck {
    pub first: f64,
    pub second: f64,
    pub verdict: SdrVerdict,
}

/// Compares `A(a_A, r_A, a_B)` with `A(r_A, a_A, r_B)` for given fixed
/// points. Unequal angles certify "not SDR"; equal ones decide nothing.
pub fn cartan_condition_points(
    space: &HermitianSpace,
    a_a: &BoundaryPoint,
    r_a: &BoundaryPoint,
    a_b: &BoundaryPoint,
    r_b: &BoundaryPoint,
    tol: &Tolerance,
) -> Result<CartanCheck> {
    require_sp11(space)?;
    for p in [a_a, r_a] {
        for q in [a_b, r_b] {
            if p.distance(q, space) <= DISTINCT_TOL {
                return Err(Error::CommonFixedPoint);
            }
        }
    }
    let first = cartan::cartan_invariant(space, a_a, r_a, a_b)?.angle;
    let second = cartan::cartan_invariant(space, r_a, a_a, r_b)?.angle;
    let verdict = if (first - second).abs() > tol.construction.max(1e-8) {
        SdrVerdict::no(
            "Cartan invariants differ, so no involution interchanges both fixed-point pairs",
            Violation::CartanMismatch { first, second },
        )
    } else {
        SdrVerdict::Inconclusive {
            reason: "Cartan invariants agree; interchanging the fixed points is necessary but not sufficient"
                .into(),
        }
    };
    Ok(CartanCheck {
        first,
        second,
        verdict,
    })
}

/// [`cartan_condition_points`] on the fixed points of two hyperbolic
/// elements.
pub fn cartan_necessary_condition(
    space: &HermitianSpace,
    a: &QMatrix,
    b: &QMatrix,
    tol: &Tolerance,
) -> Result<CartanCheck> {
    require_sp11(space)?;
    let ha = spectral::hyperbolic_normal_form(space, a, tol)?;
    let hb = spectral::hyperbolic_normal_form(space, b, tol)?;
    cartan_condition_points(
        space,
        &ha.attracting,
        &ha.repelling,
        &hb.attracting,
        &hb.repelling,
        tol,
    )
}

/// Outcome of the family-parameter predicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredicateReport {
    pub verdict: SdrVerdict,
    /// The parameter `t` of the reverser `C(t)`, when one exists.
    pub t: Option<Complex64>,
    /// The closed-form conditions, evaluated when `a2, c1, c2, d2` are all
    /// nonzero.
    pub closed_form: Option<bool>,
}

struct Entries {
    a2: Complex64,
    b1: Complex64,
    b2: Complex64,
    c1: Complex64,
    c2: Complex64,
    d2: Complex64,
}

impl Entries {
    fn of(b: &QMatrix) -> Self {
        let (a, bb, c, d) = (
            b.get(0, 0).split(),
            b.get(0, 1).split(),
            b.get(1, 0).split(),
            b.get(1, 1).split(),
        );
        Entries {
            a2: a.c2,
            b1: bb.c1,
            b2: bb.c2,
            c1: c.c1,
            c2: c.c2,
            d2: d.c2,
        }
    }

    /// Residual of the system `Re(a2 conj t) = Re(d2 conj t) = 0`,
    /// `b1 = |t|^2 c1`, `b2 = -t^2 conj(c2)`.
    fn residual(&self, t: Complex64) -> f64 {
        [
            (self.a2 * t.conj()).re.abs(),
            (self.d2 * t.conj()).re.abs(),
            (self.b1 - self.c1 * t.norm_sqr()).norm(),
            (self.b2 + t * t * self.c2.conj()).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

type Infeasible = (String, f64);

/// Closed-form search for `t != 0` solving the family system.
fn solve_family_parameter(e: &Entries, eps: f64) -> std::result::Result<Complex64, Infeasible> {
    let small = |z: Complex64| z.norm() <= eps;
    let i = Complex64::i();
    let t = if !small(e.a2) || !small(e.d2) {
        // Re(x conj t) = 0 confines t to the line i x R.
        let base = if e.a2.norm() >= e.d2.norm() {
            e.a2
        } else {
            e.d2
        };
        let u = i * base / base.norm();
        let off = (e.a2 * u.conj()).re.abs().max((e.d2 * u.conj()).re.abs());
        if off > eps {
            return Err((
                "a2 and d2 are not real multiples of each other, forcing t = 0".into(),
                off,
            ));
        }
        let sigma = if !small(e.c1) {
            e.b1 / e.c1
        } else if !small(e.c2) {
            -e.b2 / (u * u * e.c2.conj())
        } else {
            Complex64::new(1.0, 0.0)
        };
        if sigma.im.abs() > eps * sigma.norm().max(1.0) || sigma.re <= eps {
            return Err((
                "|t|^2 would have to be a nonpositive or nonreal number".into(),
                sigma.im.abs().max(-sigma.re),
            ));
        }
        u * sigma.re.sqrt()
    } else {
        let sigma = if !small(e.c1) {
            e.b1 / e.c1
        } else if !small(e.c2) {
            Complex64::new(e.b2.norm() / e.c2.norm(), 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        if sigma.im.abs() > eps * sigma.norm().max(1.0) || sigma.re <= eps {
            return Err((
                "|t|^2 would have to be a nonpositive or nonreal number".into(),
                sigma.im.abs().max(-sigma.re),
            ));
        }
        let s2 = sigma.re;
        let phase = if !small(e.c2) {
            let e2 = -e.b2 / (e.c2.conj() * s2);
            e2.arg() / 2.0
        } else {
            0.0
        };
        Complex64::from_polar(s2.sqrt(), phase)
    };
    let residual = e.residual(t);
    if residual > eps {
        return Err((
            "the remaining conditions b1 = |t|^2 c1, b2 = -t^2 conj(c2) fail".into(),
            residual,
        ));
    }
    Ok(t)
}

/// The closed-form conditions `b2 c1 |a2|^2 = b1 conj(c2) a2^2`,
/// `a2 = lambda d2` with `lambda` real, and `b1 / (c1 |a2|^2)` real and
/// nonnegative.
fn closed_form(e: &Entries, eps: f64) -> Option<bool> {
    if [e.a2, e.c1, e.c2, e.d2].iter().any(|z| z.norm() <= eps) {
        return None;
    }
    let first = (e.b2 * e.c1 * e.a2.norm_sqr() - e.b1 * e.c2.conj() * e.a2 * e.a2).norm();
    let lambda = e.a2 / e.d2;
    let ratio = e.b1 / (e.c1 * e.a2.norm_sqr());
    let scale = (e.b2.norm() * e.c1.norm() + e.b1.norm() * e.c2.norm()) * e.a2.norm_sqr();
    Some(
        first <= eps * scale.max(1.0)
            && lambda.im.abs() <= eps * lambda.norm().max(1.0)
            && ratio.im.abs() <= eps * ratio.norm().max(1.0)
            && ratio.re >= -eps,
    )
}

/// Whether `B` is reversed, together with `A = diag(r e^{i theta},
/// r^{-1} e^{i theta})`, by some `C(t)` of the hyperbolic reverser family.
///
/// For `theta` in `{0, pi}` the family does not contain every reverser of
/// `A`, so a negative answer is reported as inconclusive.
pub fn sdr_vs_standard_predicate(
    space: &HermitianSpace,
    b: &QMatrix,
    r: f64,
    theta: f64,
    tol: &Tolerance,
) -> Result<PredicateReport> {
    require_sp11(space)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("r = {r} is not in (0, 1)")));
    }
    space.check_member_scaled(b, tol.construction)?;
    let a = hyperbolic_normal(r, theta);
    let e = Entries::of(b);
    let eps = tol.construction * b.max_norm().powi(2).max(1.0);
    let closed = closed_form(&e, eps);
    let degenerate_angle = theta.sin().abs() <= 1e-9;
    let (verdict, t) = match solve_family_parameter(&e, eps) {
        Ok(t) => {
            let c = family_member(t)?;
            match ReverserWitness::verify(space, &[a, b.clone()], &c, tol.construction) {
                Ok(witness) => (SdrVerdict::Yes { witness }, Some(t)),
                Err(err) => (
                    SdrVerdict::Inconclusive {
                        reason: format!(
                            "family parameter found but its witness failed verification: {err}"
                        ),
                    },
                    Some(t),
                ),
            }
        }
        Err(_) if degenerate_angle => (
            SdrVerdict::Inconclusive {
                reason: "theta is 0 or pi, where the family misses some reversers".into(),
            },
            None,
        ),
        Err((condition, residual)) => (
            SdrVerdict::no(
                "no member of the reverser family of A reverses B",
                Violation::NoFamilyParameter {
                    condition,
                    residual,
                },
            ),
            None,
        ),
    };
    Ok(PredicateReport {
        verdict,
        t,
        closed_form: closed,
    })
}

/// Decision for a general pair in `Sp(1,1)`.
///
/// An empty reverser space certifies "no". Otherwise, when one element is
/// hyperbolic the other is moved into its frame and the family predicate
/// decides; any `Yes` carries a witness checked against the original pair.
pub fn sdr_sp11(
    space: &HermitianSpace,
    a: &QMatrix,
    b: &QMatrix,
    tol: &Tolerance,
) -> Result<SdrVerdict> {
    require_sp11(space)?;
    for g in [a, b] {
        space.check_member_scaled(g, tol.construction)?;
    }
    let rs = reverser_space(&[a.clone(), b.clone()], tol)?;
    if rs.dim == 0 {
        return Ok(SdrVerdict::no(
            "no nonzero matrix reverses both elements",
            Violation::EmptyReverserSpace {
                ambient_dim: rs.ambient_dim,
            },
        ));
    }
    for (x, y) in [(a, b), (b, a)] {
        let report = spectral::classify(space, x, tol)?;
        let spectral::Verdict::Hyperbolic(h) = report.verdict else {
            continue;
        };
        let c_inv = space.group_inverse(&h.c_a, tol.construction)?;
        let y_local = &(&c_inv * y) * &h.c_a;
        let pred = sdr_vs_standard_predicate(space, &y_local, h.r, h.theta, tol)?;
        return Ok(match pred.verdict {
            SdrVerdict::Yes { witness } => {
                let c = &(&h.c_a * &witness.c) * &c_inv;
                match ReverserWitness::verify(space, &[a.clone(), b.clone()], &c, tol.construction)
                {
                    Ok(witness) => SdrVerdict::Yes { witness },
                    Err(err) => SdrVerdict::Inconclusive {
                        reason: format!("transported witness failed verification: {err}"),
                    },
                }
            }
            other => other,
        });
    }
    Ok(SdrVerdict::Inconclusive {
        reason: "neither element is hyperbolic and the reverser space is nonzero".into(),
    })
}

/// For a hyperbolic `A = i1 i2` with `i1^2 = i2^2 = -I`, whether both
/// factors swap the two fixed points of `A`.
pub fn fixed_point_permutation_check(
    space: &HermitianSpace,
    a: &QMatrix,
    i1: &QMatrix,
    i2: &QMatrix,
    tol: &Tolerance,
) -> Result<bool> {
    let scale = i1.max_norm().max(1.0) * i2.max_norm().max(1.0);
    let residual = (i1 * i2).dist(a);
    if residual > tol.construction * scale {
        return Err(Error::NotFactorization { residual });
    }
    let minus = -&QMatrix::identity(space.size());
    for i in [i1, i2] {
        let residual = (i * i).dist(&minus);
        if residual > tol.construction * i.max_norm().powi(2).max(1.0) {
            return Err(Error::NotFactorization { residual });
        }
    }
    let h = spectral::hyperbolic_normal_form(space, a, tol)?;
    for i in [i1, i2] {
        let to_r = h.attracting.apply(space, i, 1e-7)?;
        let to_a = h.repelling.apply(space, i, 1e-7)?;
        if to_r.distance(&h.repelling, space) > 1e-8 || to_a.distance(&h.attracting, space) > 1e-8 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qspace::generators::*;
    use std::f64::consts::PI;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;
    const ONE: Quaternion = Quaternion::ONE;
    const ZERO: Quaternion = Quaternion::ZERO;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn scalar(x: Quaternion) -> QMatrix {
        QMatrix::column(&[x])
    }

    fn some_g() -> QMatrix {
        &(&dilation(1, q(0.8, 0.3, -0.2, 0.5)) * &translation(1, q(0.0, 0.7, 0.1, -0.4), &[]))
            * &(&swap(1) * &translation(1, q(0.0, -0.2, 0.9, 0.3), &[]))
    }

    fn conj_by(g: &QMatrix, a: &QMatrix) -> QMatrix {
        &(g * a) * &HermitianSpace::h1(1).group_inverse(g, 1e-9).unwrap()
    }

    #[test]
    fn reverser_space_examples() {
        let e = scalar(Quaternion::exp_i(PI / 3.0));
        let rs = reverser_space(std::slice::from_ref(&e), &tol()).unwrap();
        assert_eq!(rs.dim, 2);
        for x in &rs.basis {
            let v = x.get(0, 0);
            assert!(v.w.abs() < 1e-12 && v.x.abs() < 1e-12);
        }
        let f = scalar(Quaternion::exp_j(PI / 4.0));
        let rs = reverser_space(&[e, f], &tol()).unwrap();
        assert_eq!(rs.dim, 1);
        let v = rs.basis[0].get(0, 0);
        assert!((v.z.abs() - 1.0).abs() < 1e-12);
        assert_eq!(reverser_space(&[scalar(ONE)], &tol()).unwrap().dim, 4);
        assert!(matches!(
            reverser_space(&[scalar(ONE), QMatrix::identity(2)], &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reverser_space_of_normal_form_is_antidiagonal_cj() {
        let a = hyperbolic_normal(0.5, PI / 3.0);
        let rs = reverser_space(&[a], &tol()).unwrap();
        for x in &rs.basis {
            let off_pattern = x.get(0, 0).norm()
                + x.get(1, 1).norm()
                + x.get(0, 1).split().c1.norm()
                + x.get(1, 0).split().c1.norm();
            assert!(off_pattern < 1e-8);
        }
        // Linear span of {C(b)}: independent complex parameters on both corners.
        assert_eq!(rs.dim, 4);
    }

    #[test]
    fn coset_examples() {
        let e = scalar(Quaternion::exp_i(PI / 3.0));
        assert!(
            reverser_coset_check(std::slice::from_ref(&e), &scalar(J), &scalar(K), &tol()).unwrap()
        );
        assert!(
            reverser_coset_check(std::slice::from_ref(&e), &scalar(J), &scalar(J), &tol()).unwrap()
        );
        let a = hyperbolic_normal(0.5, PI / 3.0);
        let c1 = family_member(Complex64::new(1.0, 0.0)).unwrap();
        let ci = family_member(Complex64::i()).unwrap();
        assert!(reverser_coset_check(&[a], &c1, &ci, &tol()).unwrap());
        assert!(matches!(
            reverser_coset_check(&[e], &scalar(ONE), &scalar(J), &tol()),
            Err(Error::NotReverser { .. })
        ));
    }

    #[test]
    fn sp1_examples() {
        let p1 = Quaternion::exp_i(PI / 3.0);
        let w = sdr_sp1(p1, Quaternion::exp_j(PI / 4.0), &tol()).unwrap();
        assert!((w.c.get(0, 0) - K).norm() < 1e-12);
        assert_eq!(w.square_sign, -1);
        let w = sdr_sp1(p1, p1, &tol()).unwrap();
        assert!((w.c.get(0, 0) - J).norm() < 1e-12);
        let w = sdr_sp1(ONE, Quaternion::exp_j(PI / 4.0), &tol()).unwrap();
        assert!((w.c.get(0, 0) - K).norm() < 1e-12);
        let w = sdr_sp1(-ONE, -ONE, &tol()).unwrap();
        assert!((w.c.get(0, 0) - J).norm() < 1e-12);
        assert!(matches!(
            sdr_sp1(ONE * 2.0, ONE, &tol()),
            Err(Error::NotUnit { .. })
        ));
    }

    #[test]
    fn sp1_off_axis() {
        let p1 = Quaternion::exp_axis(1.1, [0.6, 0.0, 0.8]);
        let p2 = Quaternion::exp_axis(2.3, [0.0, -0.28, 0.96]);
        let w = sdr_sp1(p1, p2, &tol()).unwrap();
        assert!(w.residual_conj < 1e-12);
        let c = w.c.get(0, 0);
        assert!((c * c + ONE).norm() < 1e-12);
    }

    fn rot_z(a: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(
            3,
            3,
            &[a.cos(), -a.sin(), 0.0, a.sin(), a.cos(), 0.0, 0.0, 0.0, 1.0],
        )
    }

    fn rot_x(a: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(
            3,
            3,
            &[1.0, 0.0, 0.0, 0.0, a.cos(), -a.sin(), 0.0, a.sin(), a.cos()],
        )
    }

    #[test]
    fn so3_lift_round_trip() {
        for qq in [
            q(0.3, -0.5, 0.8, 0.1),
            q(0.0, 1.0, 0.0, 0.0),
            q(0.01, 0.0, 0.7, -0.7),
            ONE,
        ] {
            let u = qq.normalized().unwrap();
            let r = dm3(&so3_from_quat(u));
            let back = quat_from_so3(&r).unwrap();
            assert!((back - canonical_sign(u)).norm() < 1e-12);
        }
        assert!(
            (dm3(&so3_from_quat(Quaternion::exp_i(PI / 3.0))) - rot_x(2.0 * PI / 3.0)).amax()
                < 1e-12
        );
    }

    #[test]
    fn so3_examples() {
        let id = DMatrix::<f64>::identity(3, 3);
        let t = sdr_so3(&id, &id, &tol()).unwrap();
        assert!((&t.i1 - &t.i2).amax() < 1e-12 && (&t.i1 - &t.i3).amax() < 1e-12);
        let t = sdr_so3(&rot_z(2.0 * PI / 3.0), &rot_x(PI / 2.0), &tol()).unwrap();
        assert!(t.residual(&rot_z(2.0 * PI / 3.0), &rot_x(PI / 2.0)) < 1e-12);
        let t = sdr_so3(&rot_z(PI), &id, &tol()).unwrap();
        assert!((&t.i2 - &t.i1 * rot_z(PI)).amax() < 1e-12);
        let bad = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0]);
        assert!(matches!(
            sdr_so3(&bad, &id, &tol()),
            Err(Error::NotRotation { .. })
        ));
    }

    #[test]
    fn so4_examples() {
        let id = DMatrix::<f64>::identity(4, 4);
        let t = sdr_so4(&id, &id, &tol()).unwrap();
        assert!(t.residual(&id, &id) < 1e-12);
        let r1 = so4_from_pair(Quaternion::exp_i(PI / 3.0), ONE);
        let r2 = so4_from_pair(ONE, Quaternion::exp_j(PI / 4.0));
        let t = sdr_so4(&r1, &r2, &tol()).unwrap();
        assert!(t.residual(&r1, &r2) < 1e-12);
        let p = q(0.2, -0.4, 0.1, 0.9).normalized().unwrap();
        let qq = q(-0.6, 0.3, 0.3, 0.2).normalized().unwrap();
        let (fp, fq) = so4_factor(&so4_from_pair(p, qq)).unwrap();
        assert!((so4_from_pair(fp, fq) - so4_from_pair(p, qq)).amax() < 1e-12);
    }

    #[test]
    fn family_examples() {
        let a = hyperbolic_normal(0.5, PI / 3.0);
        let c = hyperbolic_reverser_family(&a, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(c, QMatrix::anti_diag2(J, J));
        let s = HermitianSpace::h1(1);
        for b in [Complex64::new(0.3, -2.0), Complex64::new(-1.0, 0.5)] {
            let c = hyperbolic_reverser_family(&a, b).unwrap();
            let w = ReverserWitness::verify(&s, std::slice::from_ref(&a), &c, 1e-10).unwrap();
            assert_eq!(w.square_sign, -1);
        }
        assert_eq!(
            hyperbolic_reverser_family(&a, Complex64::new(0.0, 0.0)),
            Err(Error::ZeroParameter)
        );
    }

    #[test]
    fn upgrade_examples() {
        let s = HermitianSpace::h1(1);
        let a = hyperbolic_normal(0.5, PI / 3.0);
        let b = QMatrix::diag(&[J * 2.0, J * 0.5]);
        let c = QMatrix::anti_diag2(K, K);
        let w = upgrade_reverser(&s, &a, &b, &c, &tol()).unwrap();
        assert_eq!(w.square_sign, -1);
        let c = family_member(Complex64::new(0.4, 0.2)).unwrap();
        upgrade_reverser(&s, &a, &a, &c, &tol()).unwrap();
        assert!(matches!(
            upgrade_reverser(&s, &a, &b, &QMatrix::identity(2), &tol()),
            Err(Error::NotReverser { .. })
        ));
    }

    #[test]
    fn common_fixed_examples() {
        let s = HermitianSpace::h1(1);
        let a = hyperbolic_normal(0.5, PI / 3.0);
        let b = QMatrix::diag(&[J * 2.0, J * 0.5]);
        let v = sdr_hyperbolic_common_fixed(&s, &a, &b, &tol()).unwrap();
        let w = v.witness().unwrap();
        assert!(w.c.dist(&QMatrix::anti_diag2(K, K)) < 1e-12);

        // Keep o, move infinity to (i, 1): conjugate by a map fixing o.
        let g = QMatrix::from_rows(&[[ONE, ZERO], [-I, ONE]]);
        assert!(s.is_group_member(&g, 1e-12).unwrap());
        let b2 = conj_by(&g, &hyperbolic_normal(0.3, 1.0));
        let v = sdr_hyperbolic_common_fixed(&s, &a, &b2, &tol()).unwrap();
        assert!(v.is_no());

        let v = sdr_hyperbolic_common_fixed(&s, &a, &a, &tol()).unwrap();
        assert!(v.is_yes());

        let far = conj_by(&some_g(), &a);
        assert!(matches!(
            sdr_hyperbolic_common_fixed(&s, &a, &far, &tol()),
            Err(Error::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn cartan_condition_examples() {
        let s = HermitianSpace::h1(1);
        let a = hyperbolic_normal(0.5, PI / 3.0);
        let b = conj_by(&some_g(), &hyperbolic_normal(0.3, 0.7));
        let check = cartan_necessary_condition(&s, &a, &b, &tol()).unwrap();
        assert!(matches!(check.verdict, SdrVerdict::Inconclusive { .. }));
        assert!((check.first - PI / 2.0).abs() < 1e-8 && (check.second - PI / 2.0).abs() < 1e-8);
        assert_eq!(
            cartan_necessary_condition(&s, &a, &a, &tol()),
            Err(Error::CommonFixedPoint)
        );
        let not_null = QMatrix::column(&[q(0.5, 0.3, 0.0, 0.0), ONE]);
        assert!(matches!(
            BoundaryPoint::from_lift(&s, &not_null, 1e-9),
            Err(Error::NotNull { .. })
        ));
    }

    #[test]
    fn predicate_examples() {
        let s = HermitianSpace::h1(1);
        let b = QMatrix::from_rows(&[[ZERO, I], [I, -ONE]]);
        let rep = sdr_vs_standard_predicate(&s, &b, 0.5, PI / 3.0, &tol()).unwrap();
        let t = rep.t.unwrap();
        assert!(
            (t - Complex64::new(1.0, 0.0)).norm() < 1e-12
                || (t + Complex64::new(1.0, 0.0)).norm() < 1e-12
        );
        assert!(
            rep.verdict
                .witness()
                .unwrap()
                .c
                .dist(&QMatrix::anti_diag2(J, J))
                < 1e-12
                || rep
                    .verdict
                    .witness()
                    .unwrap()
                    .c
                    .dist(&QMatrix::anti_diag2(-J, -J))
                    < 1e-12
        );

        let b = QMatrix::diag(&[J * 2.0, J * 0.5]);
        let rep = sdr_vs_standard_predicate(&s, &b, 0.5, PI / 3.0, &tol()).unwrap();
        let t = rep.t.unwrap();
        assert!((t.re).abs() < 1e-12 && (t.im.abs() - 1.0).abs() < 1e-12);
        assert!(rep.verdict.is_yes());

        let b = QMatrix::from_rows(&[[ONE, ZERO], [I, ONE]]);
        let rep = sdr_vs_standard_predicate(&s, &b, 0.5, PI / 3.0, &tol()).unwrap();
        assert!(rep.verdict.is_no());
        let rep = sdr_vs_standard_predicate(&s, &b, 0.5, 0.0, &tol()).unwrap();
        assert!(matches!(rep.verdict, SdrVerdict::Inconclusive { .. }));
    }

    #[test]
    fn permutation_examples() {
        let s = HermitianSpace::h1(1);
        let a = hyperbolic_normal(0.5, PI / 3.0);
        let c = family_member(Complex64::new(1.0, 0.0)).unwrap();
        let i1 = -&c;
        let i2 = &c * &a;
        assert!(fixed_point_permutation_check(&s, &a, &i1, &i2, &tol()).unwrap());
        let g = some_g();
        assert!(fixed_point_permutation_check(
            &s,
            &conj_by(&g, &a),
            &conj_by(&g, &i1),
            &conj_by(&g, &i2),
            &tol()
        )
        .unwrap());
        assert!(matches!(
            fixed_point_permutation_check(&s, &a, &i1, &i1, &tol()),
            Err(Error::NotFactorization { .. })
        ));
    }

    #[test]
    fn sp11_decisions() {
        let s = HermitianSpace::h1(1);
        let a = hyperbolic_normal(0.5, PI / 3.0);
        let b = QMatrix::diag(&[J * 2.0, J * 0.5]);
        let g = some_g();
        let v = sdr_sp11(&s, &conj_by(&g, &a), &conj_by(&g, &b), &tol()).unwrap();
        assert!(v.is_yes());
        let v = sdr_sp11(&s, &a, &conj_by(&g, &hyperbolic_normal(0.3, 0.7)), &tol()).unwrap();
        assert!(v.is_no());
    }
}
