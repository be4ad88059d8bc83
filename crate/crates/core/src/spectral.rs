//! Right eigenvalues through the complex adjoint, the
//! hyperbolic/elliptic/parabolic trichotomy, and the normal form of a
//! hyperbolic isometry.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::qspace::{BoundaryPoint, FormTag, HermitianSpace, QMatrix};
use crate::quat::{EigenvalueClass, Quaternion};
use crate::Tolerance;

/// Sign of `<v, v>`; `Zero` for null vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormSign {
    Neg,
    Zero,
    Pos,
}

/// A right eigenvalue class with an eigenvector `M v = v rep`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub class: EigenvalueClass,
    pub vector: QMatrix,
    /// Filled in by [`classify`], which knows the Hermitian form.
    pub herm_norm_sign: Option<NormSign>,
}

/// Two eigenvalues of the complex adjoint belong to one cluster when they
/// differ by at most this, relative to `max(1, |lambda|)`.
const CLUSTER_REL: f64 = 1e-5;
/// Residual bound for `|M v - v lambda|`, relative to `max(1, |M|)`.
const EIGEN_RESIDUAL: f64 = 1e-8;
/// `|<v, v>|` at or below this (for Euclidean-unit `v`) counts as null.
const NULL_BAND: f64 = 1e-9;
/// Negativity threshold of the form restricted to an eigenspace. Defective
/// (parabolic) eigenvalues are only resolved to about `sqrt(eps)`, so the
/// band is wider than [`NULL_BAND`].
const ELLIPTIC_BAND: f64 = 1e-6;

/// Pairs the spectrum of the complex adjoint into conjugate pairs and keeps
/// one representative per pair, with nonnegative imaginary part.
fn paired_representatives(mut eig: Vec<Complex64>) -> Vec<Complex64> {
    let mut reps = Vec::with_capacity(eig.len() / 2);
    while eig.len() >= 2 {
        let top = (0..eig.len())
            .max_by(|&a, &b| eig[a].im.total_cmp(&eig[b].im))
            .expect("nonempty");
        let lambda = eig.swap_remove(top);
        let target = lambda.conj();
        let partner = (0..eig.len())
            .min_by(|&a, &b| {
                (eig[a] - target)
                    .norm()
                    .total_cmp(&(eig[b] - target).norm())
            })
            .expect("nonempty");
        let mu = eig.swap_remove(partner);
        let avg = (lambda + mu.conj()) * 0.5;
        reps.push(Complex64::new(avg.re, avg.im.abs()));
    }
    reps
}

/// Groups nearby representatives and replaces each by its cluster mean.
fn cluster(reps: &[Complex64]) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
    for &z in reps {
        let hit = out
            .iter_mut()
            .find(|(c, _)| (*c - z).norm() <= CLUSTER_REL * c.norm().max(z.norm()).max(1.0));
        match hit {
            Some((c, members)) => {
                members.push(z);
                *c = members.iter().sum::<Complex64>() / members.len() as f64;
            }
            None => out.push((z, vec![z])),
        }
    }
    out.into_iter().map(|(c, m)| (c, m.len())).collect()
}

fn class_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    let ca = EigenvalueClass::from_complex(*a);
    let cb = EigenvalueClass::from_complex(*b);
    ca.modulus
        .total_cmp(&cb.modulus)
        .then(ca.angle().total_cmp(&cb.angle()))
}

/// Normalizes `v` to Euclidean norm one and fixes the complex phase so that
/// its first nonzero entry has a real positive complex part (or, when that
/// part vanishes, a real positive `j` part). Right multiplication by a unit
/// complex number preserves `M v = v lambda` for complex `lambda`.
fn gauge(v: &QMatrix) -> QMatrix {
    let v = v.scale(1.0 / v.frobenius());
    let Some(first) = v.entries().iter().find(|q| q.norm() > 1e-8) else {
        return v;
    };
    let s = first.split();
    let phase = if s.c1.norm() > 1e-8 {
        s.c1.conj() / s.c1.norm()
    } else {
        // q e^{i psi} = c1 e^{i psi} + c2 e^{-i psi} j
        s.c2 / s.c2.norm()
    };
    v.right_scale(Quaternion::from(phase))
}

/// Complex vectors spanning `ker(chi(M) - lambda)` numerically.
fn complex_eigenspace(chi: &DMatrix<Complex64>, lambda: Complex64) -> Vec<DVector<Complex64>> {
    let n = chi.nrows();
    let shifted = chi - DMatrix::<Complex64>::identity(n, n) * lambda;
    let scale = chi.norm().max(1.0);
    linalg::complex_near_null(&shifted, 1e-7 * scale)
}

/// Keeps the columns that are right-linearly independent over the
/// quaternions. The kept vectors are returned unchanged: projecting with
/// quaternion coefficients would break `M v = v lambda`.
fn quaternionic_independent(vs: &[QMatrix]) -> Vec<QMatrix> {
    let mut orth: Vec<QMatrix> = Vec::new();
    let mut kept = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for b in &orth {
            let proj = b.right_scale(b.euclidean_inner(&w));
            w = &w - &proj;
        }
        let norm = w.frobenius();
        if norm > 1e-6 * v.frobenius().max(f64::MIN_POSITIVE) {
            orth.push(w.scale(1.0 / norm));
            kept.push(v.clone());
        }
    }
    kept
}

/// Right eigenvalue classes of a square quaternionic matrix with one
/// eigenvector per class, counted with algebraic multiplicity and sorted by
/// modulus, then by angle.
pub fn right_eigen(m: &QMatrix) -> Result<Vec<EigenPair>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let chi = m.complex_adjoint();
    let eig = chi
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::ConvergenceFailure {
            detail: "complex Schur form is not triangular".into(),
        })?;
    let mut clusters = cluster(&paired_representatives(eig.iter().cloned().collect()));
    clusters.sort_by(|a, b| class_order(&a.0, &b.0));

    let scale = m.max_norm().max(1.0);
    let mut out = Vec::with_capacity(m.rows());
    for (lambda, mult) in clusters {
        let lambda = Complex64::new(lambda.re, lambda.im.max(0.0));
        let lq = Quaternion::from(lambda);
        let columns: Vec<QMatrix> = complex_eigenspace(&chi, lambda)
            .iter()
            .map(QMatrix::column_from_complex)
            .collect();
        let mut vectors = quaternionic_independent(&columns);
        if vectors.is_empty() {
            return Err(Error::ConvergenceFailure {
                detail: format!("no eigenvector for eigenvalue {lambda}"),
            });
        }
        vectors.truncate(mult);
        for k in 0..mult {
            let v = gauge(&vectors[k.min(vectors.len() - 1)]);
            let residual = (&(m * &v) - &v.right_scale(lq)).max_norm();
            if residual > EIGEN_RESIDUAL * scale {
                return Err(Error::ConvergenceFailure {
                    detail: format!("eigenvector residual {residual:e} for eigenvalue {lambda}"),
                });
            }
            out.push(EigenPair {
                class: EigenvalueClass::from_complex(lambda),
                vector: v,
                herm_norm_sign: None,
            });
        }
    }
    Ok(out)
}

/// Data of a hyperbolic element written as `A = C_A E_A C_A^{-1}` with
/// `E_A = diag(r e^{i theta}, e^{i phi_1}, ..., r^{-1} e^{i theta})`.
///
/// The columns of `C_A` are `(r_A, x_1, ..., x_{n-1}, a_A)`: lifts of the
/// repelling point, unit positive eigenvectors, and a lift of the attracting
/// point with `<a_A, r_A> = 1`. For a diagonal `A` this makes `C_A = I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicData {
    pub r: f64,
    pub theta: f64,
    pub phis: Vec<f64>,
    pub attracting: BoundaryPoint,
    pub repelling: BoundaryPoint,
    pub c_a: QMatrix,
    pub e_a: QMatrix,
}

impl HyperbolicData {
    /// Lift of the attracting point as stored in `C_A`.
    pub fn attracting_lift(&self) -> QMatrix {
        self.c_a.col(self.c_a.cols() - 1)
    }

    /// Lift of the repelling point as stored in `C_A`.
    pub fn repelling_lift(&self) -> QMatrix {
        self.c_a.col(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Verdict {
    Hyperbolic(HyperbolicData),
    Elliptic,
    Parabolic,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Hyperbolic(_) => "hyperbolic",
            Verdict::Elliptic => "elliptic",
            Verdict::Parabolic => "parabolic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub verdict: Verdict,
    pub eigen: Vec<EigenPair>,
}

/// Flat JSON view of an [`IsometryReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometrySummary {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    pub eigenvalues: Vec<[f64; 2]>,
}

impl IsometryReport {
    pub fn summary(&self) -> IsometrySummary {
        let (r, theta) = match &self.verdict {
            Verdict::Hyperbolic(h) => (Some(h.r), Some(h.theta)),
            _ => (None, None),
        };
        IsometrySummary {
            verdict: self.verdict.name().into(),
            r,
            theta,
            eigenvalues: self
                .eigen
                .iter()
                .map(|e| [e.class.rep.re, e.class.rep.im])
                .collect(),
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self.verdict, Verdict::Hyperbolic(_))
    }
}

fn norm_sign(value: f64) -> NormSign {
    if value < -NULL_BAND {
        NormSign::Neg
    } else if value > NULL_BAND {
        NormSign::Pos
    } else {
        NormSign::Zero
    }
}

/// True when the Hermitian form takes a negative value on the eigenspace of
/// `lambda`. The form is restricted to the complex eigenspace of the
/// complex adjoint, where it becomes the Hermitian matrix `K^* (G x I_2) K`.
fn eigenspace_has_negative_vector(
    space: &HermitianSpace,
    chi: &DMatrix<Complex64>,
    lambda: Complex64,
) -> bool {
    let kernel = complex_eigenspace(chi, lambda);
    let size = space.size();
    let mut g = DMatrix::<Complex64>::zeros(2 * size, 2 * size);
    for r in 0..size {
        for c in 0..size {
            let w = space.gram().get(r, c).w;
            g[(2 * r, 2 * c)] = Complex64::new(w, 0.0);
            g[(2 * r + 1, 2 * c + 1)] = Complex64::new(w, 0.0);
        }
    }
    let k = DMatrix::from_columns(&kernel);
    let restricted = k.adjoint() * g * &k;
    let herm = (&restricted + restricted.adjoint()) * Complex64::new(0.5, 0.0);
    linalg::hermitian_eigenvalues(&herm)
        .first()
        .is_some_and(|&min| min < -ELLIPTIC_BAND)
}

/// Hyperbolic, elliptic or parabolic.
pub fn classify(space: &HermitianSpace, m: &QMatrix, tol: &Tolerance) -> Result<IsometryReport> {
    space.check_member_scaled(m, tol.construction)?;
    let mut eigen = right_eigen(m)?;
    for e in &mut eigen {
        let value = space.hermitian_product(&e.vector, &e.vector)?.w;
        e.herm_norm_sign = Some(norm_sign(value));
    }
    let hyperbolic = eigen
        .iter()
        .any(|e| (e.class.modulus - 1.0).abs() > tol.unit_band);
    let verdict = if hyperbolic {
        Verdict::Hyperbolic(normal_form_from_eigen(space, m, &eigen, tol)?)
    } else {
        let chi = m.complex_adjoint();
        let mut reps: Vec<Complex64> = eigen.iter().map(|e| e.class.rep).collect();
        reps.dedup_by(|a, b| (*a - *b).norm() <= CLUSTER_REL);
        if reps
            .iter()
            .any(|&l| eigenspace_has_negative_vector(space, &chi, l))
        {
            Verdict::Elliptic
        } else {
            Verdict::Parabolic
        }
    };
    Ok(IsometryReport { verdict, eigen })
}

/// `A = C_A E_A C_A^{-1}` for a hyperbolic `A`.
pub fn hyperbolic_normal_form(
    space: &HermitianSpace,
    a: &QMatrix,
    tol: &Tolerance,
) -> Result<HyperbolicData> {
    match classify(space, a, tol)?.verdict {
        Verdict::Hyperbolic(data) => Ok(data),
        _ => Err(Error::NotHyperbolic),
    }
}

/// Projects `z` onto the form-orthogonal complement of unit positive
/// vectors with complex coefficients, then normalizes `<z, z> = 1`.
fn form_orthonormalize(space: &HermitianSpace, xs: &[QMatrix]) -> Result<Vec<QMatrix>> {
    let mut out: Vec<QMatrix> = Vec::with_capacity(xs.len());
    for x in xs {
        let mut z = x.clone();
        for b in &out {
            let c = space.hermitian_product(&z, b)?;
            z = &z - &b.right_scale(c);
        }
        let norm2 = space.hermitian_product(&z, &z)?.w;
        if norm2 <= NULL_BAND {
            return Err(Error::ConvergenceFailure {
                detail: "unit-modulus eigenvector is not positive".into(),
            });
        }
        out.push(z.scale(1.0 / norm2.sqrt()));
    }
    Ok(out)
}

fn normal_form_from_eigen(
    space: &HermitianSpace,
    a: &QMatrix,
    eigen: &[EigenPair],
    tol: &Tolerance,
) -> Result<HyperbolicData> {
    if space.form() != FormTag::H1 {
        return Err(Error::UnsupportedForm {
            form: space.form().as_str().into(),
        });
    }
    let size = space.size();
    if eigen.len() != size {
        return Err(Error::ConvergenceFailure {
            detail: format!("{} eigenvalue classes for size {size}", eigen.len()),
        });
    }
    // Sorted by modulus: the first is r e^{i theta}, the last its partner.
    let rep_pair = &eigen[0];
    let att_pair = &eigen[size - 1];
    let r = rep_pair.class.modulus;
    let separated = r < 1.0 - tol.unit_band && att_pair.class.modulus > 1.0 + tol.unit_band;
    if !separated {
        return Err(Error::NotHyperbolic);
    }
    let theta = rep_pair.class.angle();
    let middle = &eigen[1..size - 1];
    if middle
        .iter()
        .any(|e| (e.class.modulus - 1.0).abs() > tol.unit_band.sqrt())
    {
        return Err(Error::NotHyperbolic);
    }

    let r_lift = rep_pair.vector.clone();
    let a_raw = att_pair.vector.clone();
    let h = space.hermitian_product(&a_raw, &r_lift)?;
    let h_inv =
        h.inverse()
            .filter(|_| h.norm() > 1e-12)
            .ok_or_else(|| Error::ConvergenceFailure {
                detail: "attracting and repelling eigenvectors are orthogonal".into(),
            })?;
    let a_lift = a_raw.right_scale(h_inv);
    let xs = form_orthonormalize(
        space,
        &middle.iter().map(|e| e.vector.clone()).collect::<Vec<_>>(),
    )?;

    let mut columns = Vec::with_capacity(size);
    columns.push(r_lift.clone());
    columns.extend(xs);
    columns.push(a_lift.clone());
    let c_a = QMatrix::from_columns(&columns);

    let e_rep = Quaternion::from(Complex64::from_polar(r, theta));
    let e_att = Quaternion::from(Complex64::from_polar(1.0 / r, theta));
    let phis: Vec<f64> = middle.iter().map(|e| e.class.angle()).collect();
    let mut diag = Vec::with_capacity(size);
    diag.push(e_rep);
    diag.extend(phis.iter().map(|&p| Quaternion::exp_i(p)));
    diag.push(e_att);
    let e_a = QMatrix::diag(&diag);

    let rebuilt = &(&c_a * &e_a) * &space.group_inverse_unchecked(&c_a);
    let residual = rebuilt.dist(a);
    if residual > 1e-8 * a.max_norm().max(1.0) {
        return Err(Error::ConvergenceFailure {
            detail: format!("normal form residual {residual:e}"),
        });
    }
    let null_tol = tol.construction.max(1e-8);
    Ok(HyperbolicData {
        r,
        theta,
        phis,
        attracting: BoundaryPoint::from_lift(space, &a_lift, null_tol)?,
        repelling: BoundaryPoint::from_lift(space, &r_lift, null_tol)?,
        c_a,
        e_a,
    })
}

/// Conjugacy of hyperbolic elements: equal eigenvalue classes.
pub fn are_conjugate_hyperbolic(
    space: &HermitianSpace,
    a: &QMatrix,
    b: &QMatrix,
    tol: &Tolerance,
) -> Result<bool> {
    let ra = classify(space, a, tol)?;
    let rb = classify(space, b, tol)?;
    if !ra.is_hyperbolic() || !rb.is_hyperbolic() {
        return Err(Error::NotHyperbolic);
    }
    Ok(ra.eigen.len() == rb.eigen.len()
        && ra.eigen.iter().zip(&rb.eigen).all(|(x, y)| {
            x.class
                .approx_eq(&y.class, tol.unit_band * x.class.modulus.max(1.0))
        }))
}
