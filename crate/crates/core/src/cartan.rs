//! Hermitian triple products, the Cartan angular invariant, and the
//! skew-involution interchanging two pairs of boundary points.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qspace::{BoundaryPoint, HermitianSpace, QMatrix};
use crate::quat::{unit_conjugator, Quaternion};
use crate::Tolerance;

/// Two boundary points closer than this (chordal distance) coincide.
pub const DISTINCT_TOL: f64 = 1e-9;
/// `|H|` below this is a degenerate triple.
pub const ZERO_TRIPLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartanValue {
    pub angle: f64,
    #[serde(rename = "H")]
    pub triple: Quaternion,
}

/// Triple product `<z3, z1> <z2, z3> <z1, z2>` of three lifts.
///
/// With `<z, w> = w^* G z` this ordering is the one whose similarity class
/// is unchanged, up to a positive factor, when any lift is rescaled by a
/// nonzero quaternion: rescaling `z1` by `l` turns it into
/// `conj(l) H l`. The forward product `<z1, z2> <z2, z3> <z3, z1>` lacks
/// this property once the pairings stop commuting (`n >= 2`). For `n = 1`
/// boundary points both orderings have the same real part and norm.
pub fn hermitian_triple_of_lifts(
    space: &HermitianSpace,
    z1: &QMatrix,
    z2: &QMatrix,
    z3: &QMatrix,
) -> Result<Quaternion> {
    Ok(space.hermitian_product(z3, z1)?
        * space.hermitian_product(z2, z3)?
        * space.hermitian_product(z1, z2)?)
}

fn check_distinct(space: &HermitianSpace, points: &[&BoundaryPoint]) -> bool {
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            if p.distance(q, space) <= DISTINCT_TOL {
                return false;
            }
        }
    }
    true
}

/// Triple product of the standard lifts (`(1, 0, ..., 0)` for infinity).
pub fn hermitian_triple(
    space: &HermitianSpace,
    p1: &BoundaryPoint,
    p2: &BoundaryPoint,
    p3: &BoundaryPoint,
) -> Result<Quaternion> {
    if !check_distinct(space, &[p1, p2, p3]) {
        return Err(Error::DegenerateTriple);
    }
    hermitian_triple_of_lifts(space, &p1.lift(space), &p2.lift(space), &p3.lift(space))
}

/// `arccos(Re(-H) / |H|)`, in `[0, pi/2]`.
pub fn cartan_invariant(
    space: &HermitianSpace,
    p1: &BoundaryPoint,
    p2: &BoundaryPoint,
    p3: &BoundaryPoint,
) -> Result<CartanValue> {
    let h = hermitian_triple(space, p1, p2, p3)?;
    angle_of_triple(h)
}

/// Angle of a triple product; errors when `|H|` vanishes or the ratio falls
/// below zero beyond rounding.
pub fn angle_of_triple(h: Quaternion) -> Result<CartanValue> {
    let norm = h.norm();
    if norm < ZERO_TRIPLE_TOL {
        return Err(Error::ZeroTriple { norm });
    }
    let ratio = -h.w / norm;
    if ratio < -1e-9 {
        return Err(Error::CartanOutOfRange { ratio });
    }
    let angle = ratio.clamp(-1.0, 1.0).acos().clamp(0.0, FRAC_PI_2);
    Ok(CartanValue { angle, triple: h })
}

/// Change of basis in `Sp(1,1)` taking `o` to `a` and `infinity` to `r`:
/// columns `(r, a <a, r>^{-1})`, so that the pairing of the columns is one.
fn frame(space: &HermitianSpace, a: &BoundaryPoint, r: &BoundaryPoint) -> Result<QMatrix> {
    let r_lift = r.lift(space);
    let a_lift = a.lift(space);
    let h = space.hermitian_product(&a_lift, &r_lift)?;
    let h_inv = h
        .inverse()
        .filter(|_| h.norm() > ZERO_TRIPLE_TOL)
        .ok_or_else(|| Error::DegenerateConfiguration {
            detail: "points are not distinct".into(),
        })?;
    Ok(QMatrix::from_columns(&[r_lift, a_lift.right_scale(h_inv)]))
}

fn finite_coordinate(space: &HermitianSpace, p: &BoundaryPoint) -> Result<Quaternion> {
    match p {
        BoundaryPoint::Finite(z) if z.get(0, 0).norm() > DISTINCT_TOL => Ok(z.get(0, 0)),
        _ => Err(Error::DegenerateConfiguration {
            detail: format!(
                "point {:?} collides with a fixed point",
                p.lift(space).entries()
            ),
        }),
    }
}

/// A skew-involution `C` in `Sp(1,1)` with `C a_A = r_A`, `C a_B = r_B`
/// projectively (and back).
///
/// After moving `(a_A, r_A)` to `(o, infinity)` the points `a_B`, `r_B`
/// have lifts `(r1, 1)`, `(s1, 1)`; with `k = |r1| |s1|` and `mu^2 = -1`
/// solving `r1 / |r1| = mu (s1^{-1} / |s1^{-1}|) conj(mu)` the matrix
/// `[[0, sqrt(k) mu], [mu / sqrt(k), 0]]` is the answer in those coordinates.
pub fn interchanging_skew_involution(
    space: &HermitianSpace,
    a_a: &BoundaryPoint,
    r_a: &BoundaryPoint,
    a_b: &BoundaryPoint,
    r_b: &BoundaryPoint,
    tol: &Tolerance,
) -> Result<QMatrix> {
    if space.size() != 2 {
        return Err(Error::InvalidArgument(
            "interchanging skew-involutions are built for n = 1".into(),
        ));
    }
    if !check_distinct(space, &[a_a, r_a, a_b, r_b]) {
        return Err(Error::DegenerateConfiguration {
            detail: "the four boundary points are not pairwise distinct".into(),
        });
    }
    let first = cartan_invariant(space, a_a, r_a, a_b)?.angle;
    let second = cartan_invariant(space, r_a, a_a, r_b)?.angle;
    if (first - second).abs() > tol.construction.max(1e-8) {
        return Err(Error::InvariantMismatch { first, second });
    }

    let g = frame(space, a_a, r_a)?;
    let g_inv = space.group_inverse(&g, tol.construction)?;
    let null_tol = 1e-8;
    let r1 = finite_coordinate(space, &a_b.apply(space, &g_inv, null_tol)?)?;
    let s1 = finite_coordinate(space, &r_b.apply(space, &g_inv, null_tol)?)?;
    let s1_inv = s1.inverse().expect("nonzero");
    let k = r1.norm() * s1.norm();
    let mu = unit_conjugator(r1 / r1.norm(), s1_inv / s1_inv.norm(), 1e-8)?;
    let sk = k.sqrt();
    let c_local = QMatrix::anti_diag2(mu * sk, mu * (1.0 / sk));
    let c = &(&g * &c_local) * &g_inv;

    verify_interchange(space, &c, [a_a, r_a, a_b, r_b], tol)?;
    Ok(c)
}

/// Checks membership, `C^2 = -I`, and both swaps.
pub fn verify_interchange(
    space: &HermitianSpace,
    c: &QMatrix,
    [a_a, r_a, a_b, r_b]: [&BoundaryPoint; 4],
    tol: &Tolerance,
) -> Result<()> {
    space.check_member_scaled(c, tol.construction)?;
    let scale = c.max_norm().powi(2).max(1.0);
    let sq = (c * c).dist(&-&QMatrix::identity(space.size()));
    if sq > tol.construction * scale {
        return Err(Error::NotInvolutionLike { residual: sq });
    }
    let swap_tol = 1e-8;
    for (from, to) in [(a_a, r_a), (r_a, a_a), (a_b, r_b), (r_b, a_b)] {
        let image = from.apply(space, c, swap_tol)?;
        let d = image.distance(to, space);
        if d > swap_tol {
            return Err(Error::DegenerateConfiguration {
                detail: format!("constructed involution misses a swap by {d:e}"),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qspace::generators::*;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    fn pt(s: &HermitianSpace, x: Quaternion) -> BoundaryPoint {
        BoundaryPoint::finite(s, x, 1e-9).unwrap()
    }

    fn some_g() -> QMatrix {
        &(&dilation(1, q(0.8, 0.3, -0.2, 0.5)) * &translation(1, q(0.0, 0.7, 0.1, -0.4), &[]))
            * &(&swap(1) * &translation(1, q(0.0, -0.2, 0.9, 0.3), &[]))
    }

    #[test]
    fn triple_examples() {
        let s = HermitianSpace::h1(1);
        let o = BoundaryPoint::origin(&s);
        let inf = BoundaryPoint::Infinity;
        let p = pt(&s, I);
        assert_eq!(hermitian_triple(&s, &o, &inf, &p).unwrap(), I);
        assert_eq!(
            hermitian_triple(&s, &o, &inf, &o),
            Err(Error::DegenerateTriple)
        );
        let h = hermitian_triple(&s, &p, &pt(&s, I * 2.0), &o).unwrap();
        assert!(h.w.abs() < 1e-15);
    }

    #[test]
    fn invariant_examples() {
        let s = HermitianSpace::h1(1);
        let o = BoundaryPoint::origin(&s);
        let inf = BoundaryPoint::Infinity;
        let v = cartan_invariant(&s, &o, &inf, &pt(&s, I)).unwrap();
        assert!((v.angle - FRAC_PI_2).abs() < 1e-15);
        let v = cartan_invariant(&s, &pt(&s, I), &pt(&s, J), &pt(&s, K)).unwrap();
        assert!((v.angle - FRAC_PI_2).abs() < 1e-12);
        let json = serde_json::to_string(&v).unwrap();
        assert!(json.contains("\"H\""));
    }

    #[test]
    fn invariant_under_group_and_lift_rescaling() {
        let s = HermitianSpace::h1(2);
        let tol = 1e-9;
        // Three null vectors of H^{2,1}.
        let p1 = BoundaryPoint::Infinity;
        let p2 = BoundaryPoint::origin(&s);
        let y = q(0.3, -0.2, 0.5, 0.1);
        let p3_lift =
            QMatrix::column(&[q(-y.norm_sqr() / 2.0, 0.4, 0.2, -0.3), y, Quaternion::ONE]);
        let p3 = BoundaryPoint::from_lift(&s, &p3_lift, tol).unwrap();
        let base = cartan_invariant(&s, &p1, &p2, &p3).unwrap().angle;
        assert!(base > 0.0 && base < FRAC_PI_2);

        let g = &(&dilation(2, q(0.7, 0.1, 0.3, -0.2))
            * &translation(2, q(0.0, 0.5, 0.1, 0.2), &[q(0.3, -0.4, 0.2, 0.1)]))
            * &(&swap(2) * &translation(2, q(0.0, -0.1, 0.2, 0.6), &[q(-0.2, 0.1, 0.5, 0.0)]));
        let moved: Vec<BoundaryPoint> = [&p1, &p2, &p3]
            .iter()
            .map(|p| p.apply(&s, &g, 1e-8).unwrap())
            .collect();
        let after = cartan_invariant(&s, &moved[0], &moved[1], &moved[2])
            .unwrap()
            .angle;
        assert!((after - base).abs() < 1e-8);

        let lam = q(-1.3, 0.2, 2.0, 0.7);
        let rescaled = BoundaryPoint::from_lift(&s, &p3_lift.right_scale(lam), tol).unwrap();
        let again = cartan_invariant(&s, &p1, &p2, &rescaled).unwrap().angle;
        assert!((again - base).abs() < 1e-9);

        // Raw lifts, each rescaled by a different quaternion.
        let lifts = [p1.lift(&s), p2.lift(&s), p3_lift.clone()];
        let lams = [q(0.3, -1.0, 0.4, 2.0), q(-0.7, 0.1, 0.9, 0.2), lam];
        let h0 = hermitian_triple_of_lifts(&s, &lifts[0], &lifts[1], &lifts[2]).unwrap();
        let scaled: Vec<QMatrix> = lifts
            .iter()
            .zip(lams)
            .map(|(z, l)| z.right_scale(l))
            .collect();
        let h1 = hermitian_triple_of_lifts(&s, &scaled[0], &scaled[1], &scaled[2]).unwrap();
        let a0 = angle_of_triple(h0).unwrap().angle;
        let a1 = angle_of_triple(h1).unwrap().angle;
        assert!((a0 - a1).abs() < 1e-9);
    }

    #[test]
    fn zero_triple_is_rejected() {
        assert!(matches!(
            angle_of_triple(Quaternion::ZERO),
            Err(Error::ZeroTriple { .. })
        ));
    }

    #[test]
    fn skew_involution_example() {
        let s = HermitianSpace::h1(1);
        let tol = Tolerance::default();
        let o = BoundaryPoint::origin(&s);
        let inf = BoundaryPoint::Infinity;
        let c = interchanging_skew_involution(&s, &o, &inf, &pt(&s, I), &pt(&s, -I), &tol).unwrap();
        // r1 = i and s1^{-1} = i, so mu = i and k = 1.
        assert!(c.dist(&QMatrix::anti_diag2(I, I)) < 1e-12);
        assert!((&c * &c).dist(&-&QMatrix::identity(2)) < 1e-12);

        let err = interchanging_skew_involution(&s, &o, &inf, &pt(&s, I), &pt(&s, I), &tol);
        assert!(matches!(err, Err(Error::DegenerateConfiguration { .. })));
    }

    #[test]
    fn skew_involution_is_equivariant() {
        let s = HermitianSpace::h1(1);
        let tol = Tolerance::default();
        let g = some_g();
        let pts: Vec<BoundaryPoint> = [
            BoundaryPoint::origin(&s),
            BoundaryPoint::Infinity,
            pt(&s, q(0.0, 0.3, 1.2, -0.5)),
            pt(&s, q(0.0, -2.0, 0.1, 0.4)),
        ]
        .iter()
        .map(|p| p.apply(&s, &g, 1e-8).unwrap())
        .collect();
        let c =
            interchanging_skew_involution(&s, &pts[0], &pts[1], &pts[2], &pts[3], &tol).unwrap();
        verify_interchange(&s, &c, [&pts[0], &pts[1], &pts[2], &pts[3]], &tol).unwrap();
    }
}
