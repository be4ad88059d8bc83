//! Seeded sampling on `Sp(1)`, `Sp(n)` and `Sp(1,1)`, the Monte Carlo
//! genericity experiments and the Lie-algebra dimension audit.
//!
//! Each trial draws from its own ChaCha stream keyed by `(seed, trial)`, so a
//! report depends only on the seed and the trial count.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qspace::{compact_ad_dims, FormTag, HermitianSpace, LieDims, QMatrix};
use crate::quat::Quaternion;
use crate::reversers::{self, SdrVerdict};
use crate::Tolerance;

/// The RNG of trial `trial` under master seed `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn gaussian_quat<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    Quaternion::new(
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    )
}

/// Uniform unit quaternion: a normalized standard Gaussian 4-vector.
pub fn sample_sp1<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    loop {
        if let Some(q) = gaussian_quat(rng).normalized() {
            return q;
        }
    }
}

/// Haar-distributed element of `Sp(n)`: quaternionic Gram-Schmidt, with
/// right scalars, on a Gaussian matrix.
pub fn sample_compact<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<QMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    loop {
        let g = QMatrix::from_fn(n, n, |_, _| gaussian_quat(rng));
        let mut cols: Vec<QMatrix> = Vec::with_capacity(n);
        let mut ok = true;
        for c in 0..n {
            let mut v = g.col(c);
            for u in &cols {
                let coef = u.euclidean_inner(&v);
                v = &v - &u.right_scale(coef);
            }
            let norm = v.frobenius();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            cols.push(v.scale(1.0 / norm));
        }
        if ok {
            return Ok(QMatrix::from_columns(&cols));
        }
    }
}

/// One letter of an `Sp(1,1)` word: `0` hyperbolic, `1` unipotent, `2` `C(b)`.
fn sample_letter<R: Rng + ?Sized>(kind: usize, rng: &mut R) -> QMatrix {
    match kind {
        0 => {
            let r = rng.random_range(0.6..0.95);
            let theta = rng.random_range(0.0..PI);
            reversers::hyperbolic_normal(r, theta)
        }
        1 => {
            let x = loop {
                let v: [f64; 3] = [
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                ];
                if v.iter().map(|c| c * c).sum::<f64>() <= 1.0 {
                    break Quaternion::pure(v);
                }
            };
            QMatrix::from_rows(&[[Quaternion::ONE, Quaternion::ZERO], [x, Quaternion::ONE]])
        }
        _ => {
            let rho: f64 = rng.random_range(0.8..1.25);
            let phi: f64 = rng.random_range(0.0..2.0 * PI);
            reversers::family_member(Complex64::from_polar(rho, phi)).expect("rho > 0")
        }
    }
}

/// Length of the generator words behind [`sample_sp11`].
pub const WORD_LENGTH: usize = 8;

/// A product of [`WORD_LENGTH`] letters with random parameters: hyperbolic
/// `diag(r e^{i theta}, r^{-1} e^{i theta})` with `r in [0.6, 0.95)` and
/// `theta in [0, pi)`; unipotent `[[1, 0], [x, 1]]` with `x` pure and
/// `|x| <= 1`; `C(b)` with `|b| in [0.8, 1.25)`.
///
/// Letter kinds cycle hyperbolic, unipotent, `C` from a random offset.
/// `C(b)` turns lower unipotents into upper ones, so the cycle puts
/// unipotents on both sides of some `C` letter and the word leaves the
/// triangular subgroups; with independently drawn kinds about a quarter of
/// all words stay triangular.
///
/// The noncompact group carries no Haar probability; this is a proxy.
pub fn sample_sp11<R: Rng + ?Sized>(rng: &mut R) -> QMatrix {
    let offset = rng.random_range(0..3usize);
    let mut m = QMatrix::identity(2);
    for k in 0..WORD_LENGTH {
        m = &m * &sample_letter((offset + k) % 3, rng);
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupTag {
    Sp1,
    Sp2,
    So4,
    Sp11,
}

impl GroupTag {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupTag::Sp1 => "sp1",
            GroupTag::Sp2 => "sp2",
            GroupTag::So4 => "so4",
            GroupTag::Sp11 => "sp11",
        }
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GroupTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sp1" => Ok(GroupTag::Sp1),
            "sp2" => Ok(GroupTag::Sp2),
            "so4" => Ok(GroupTag::So4),
            "sp11" => Ok(GroupTag::Sp11),
            _ => Err(Error::UnknownGroup(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub yes: usize,
    pub no: usize,
    pub inconclusive: usize,
}

/// Residuals of the witnesses behind `Yes` verdicts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub count: usize,
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub group: GroupTag,
    pub trials: usize,
    pub seed: u64,
    pub fraction_sdr: f64,
    /// Reverser-space dimension of each pair, counted. For `so4` this is
    /// the real space `{X : X R_i = R_i^T X}`.
    pub dim_histogram: BTreeMap<usize, usize>,
    pub outcomes: OutcomeCounts,
    pub residual_stats: ResidualStats,
    pub note: String,
}

impl ExperimentReport {
    /// Share of trials whose reverser space is trivial.
    pub fn fraction_dim_zero(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        *self.dim_histogram.get(&0).unwrap_or(&0) as f64 / self.trials as f64
    }
}

enum Outcome {
    Yes,
    No,
    Inconclusive,
}

struct Trial {
    dim: usize,
    outcome: Outcome,
    residual: Option<f64>,
}

fn verdict_outcome(v: &SdrVerdict) -> (Outcome, Option<f64>) {
    match v {
        SdrVerdict::Yes { witness } => (
            Outcome::Yes,
            Some(witness.residual_conj.max(witness.residual_group)),
        ),
        SdrVerdict::No { .. } => (Outcome::No, None),
        SdrVerdict::Inconclusive { .. } => (Outcome::Inconclusive, None),
    }
}

fn run_trial(group: GroupTag, seed: u64, index: u64, tol: &Tolerance) -> Result<Trial> {
    let mut rng = trial_rng(seed, index);
    match group {
        GroupTag::Sp1 => {
            let p1 = sample_sp1(&mut rng);
            let p2 = sample_sp1(&mut rng);
            let pair = [QMatrix::column(&[p1]), QMatrix::column(&[p2])];
            let dim = reversers::reverser_space(&pair, tol)?.dim;
            let w = reversers::sdr_sp1(p1, p2, tol)?;
            let c = w.c.get(0, 0);
            let residual = w.residual_conj.max((c * c + Quaternion::ONE).norm());
            Ok(Trial {
                dim,
                outcome: Outcome::Yes,
                residual: Some(residual),
            })
        }
        GroupTag::So4 => {
            let (p1, q1) = (sample_sp1(&mut rng), sample_sp1(&mut rng));
            let (p2, q2) = (sample_sp1(&mut rng), sample_sp1(&mut rng));
            let r1 = reversers::so4_from_pair(p1, q1);
            let r2 = reversers::so4_from_pair(p2, q2);
            let triple = reversers::sdr_so4(&r1, &r2, tol)?;
            let dim = real_reverser_dim(&r1, &r2, tol);
            Ok(Trial {
                dim,
                outcome: Outcome::Yes,
                residual: Some(triple.residual(&r1, &r2)),
            })
        }
        GroupTag::Sp2 => {
            let a = sample_compact(2, &mut rng)?;
            let b = sample_compact(2, &mut rng)?;
            let dim = reversers::reverser_space(&[a, b], tol)?.dim;
            let outcome = if dim == 0 {
                Outcome::No
            } else {
                Outcome::Inconclusive
            };
            Ok(Trial {
                dim,
                outcome,
                residual: None,
            })
        }
        GroupTag::Sp11 => {
            let space = HermitianSpace::h1(1);
            let a = sample_sp11(&mut rng);
            let b = sample_sp11(&mut rng);
            let dim = reversers::reverser_space(&[a.clone(), b.clone()], tol)?.dim;
            let (outcome, residual) = match reversers::sdr_sp11(&space, &a, &b, tol) {
                Ok(v) => verdict_outcome(&v),
                Err(_) => (Outcome::Inconclusive, None),
            };
            Ok(Trial {
                dim,
                outcome,
                residual,
            })
        }
    }
}

/// Dimension of `{X real 4x4 : X R_i = R_i^T X}`.
fn real_reverser_dim(
    r1: &nalgebra::DMatrix<f64>,
    r2: &nalgebra::DMatrix<f64>,
    tol: &Tolerance,
) -> usize {
    let n = 16;
    let mut stacked = nalgebra::DMatrix::<f64>::zeros(2 * n, n);
    for (k, r) in [r1, r2].into_iter().enumerate() {
        for idx in 0..n {
            let mut x = nalgebra::DMatrix::<f64>::zeros(4, 4);
            x[(idx / 4, idx % 4)] = 1.0;
            let img = &x * r - r.transpose() * &x;
            for (p, v) in img.iter().enumerate() {
                stacked[(k * n + p, idx)] = *v;
            }
        }
    }
    crate::linalg::kernel(&stacked, tol.rank).ncols()
}

fn note(group: GroupTag) -> &'static str {
    match group {
        GroupTag::Sp1 => "every pair decided by the constructive Sp(1) reverser",
        GroupTag::So4 => {
            "every pair decided by the Sp(1) x Sp(1) lift; dim is the real reverser space in gl(4)"
        }
        GroupTag::Sp2 => {
            "Haar pairs; dim 0 certifies no reverser, dim > 0 is counted as inconclusive"
        }
        GroupTag::Sp11 => "generator-word proxy, not Haar; dim 0 certifies no reverser",
    }
}

/// Samples `trials` pairs in `group`, in parallel, and reduces the per-trial
/// verdicts in trial order.
pub fn genericity_experiment(
    group: GroupTag,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<ExperimentReport> {
    let results: Vec<Result<Trial>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| run_trial(group, seed, i, tol))
        .collect();
    let mut dim_histogram = BTreeMap::new();
    let mut outcomes = OutcomeCounts::default();
    let mut stats = ResidualStats::default();
    let mut sum = 0.0;
    for r in results {
        let t = r?;
        *dim_histogram.entry(t.dim).or_insert(0) += 1;
        match t.outcome {
            Outcome::Yes => outcomes.yes += 1,
            Outcome::No => outcomes.no += 1,
            Outcome::Inconclusive => outcomes.inconclusive += 1,
        }
        if let Some(res) = t.residual {
            stats.count += 1;
            stats.max = stats.max.max(res);
            sum += res;
        }
    }
    if stats.count > 0 {
        stats.mean = sum / stats.count as f64;
    }
    Ok(ExperimentReport {
        group,
        trials,
        seed,
        fraction_sdr: if trials == 0 {
            0.0
        } else {
            outcomes.yes as f64 / trials as f64
        },
        dim_histogram,
        outcomes,
        residual_stats: stats,
        note: note(group).to_string(),
    })
}

/// One line of the dimension audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub algebra: String,
    pub involution: String,
    pub computed: LieDims,
    pub formula: LieDims,
}

impl AuditRow {
    pub fn matches(&self) -> bool {
        self.computed == self.formula
    }
}

/// `diag(1, ..., 1, -1, ..., -1)` with `k` trailing `-1`s.
fn signed_diag(n: usize, k: usize) -> QMatrix {
    let v: Vec<Quaternion> = (0..n)
        .map(|r| {
            if r < n - k {
                Quaternion::ONE
            } else {
                -Quaternion::ONE
            }
        })
        .collect();
    QMatrix::diag(&v)
}

/// Computed against closed-form dimensions, for `n = 1..=max_n`:
/// `sp(n,1)` under its canonical skew-involution, and `sp(n)` under
/// `diag(I_{n-k}, -I_k)` and `i I`.
pub fn dimension_audit(max_n: usize, tol: &Tolerance) -> Result<Vec<AuditRow>> {
    if max_n == 0 || max_n > 3 {
        return Err(Error::InvalidArgument(format!(
            "max_n = {max_n} is not in 1..=3"
        )));
    }
    let mut rows = Vec::new();
    for n in 1..=max_n {
        let space = HermitianSpace::h1(n);
        let s = space.canonical_skew_involution();
        let computed = space.ad_eigenspace_dims(&s, tol)?;
        let total = (n + 1) * (2 * n + 3);
        let minus = (n + 1) * (n + 2);
        rows.push(AuditRow {
            algebra: format!("sp({n},1)"),
            involution: "canonical skew".into(),
            computed,
            formula: LieDims {
                total,
                plus_one: total - minus,
                minus_one: minus,
            },
        });
        let total_c = n * (2 * n + 1);
        for k in 1..n {
            let computed = compact_ad_dims(n, &signed_diag(n, k), tol)?;
            let minus = 4 * k * (n - k);
            rows.push(AuditRow {
                algebra: format!("sp({n})"),
                involution: format!("diag(I_{}, -I_{k})", n - k),
                computed,
                formula: LieDims {
                    total: total_c,
                    plus_one: total_c - minus,
                    minus_one: minus,
                },
            });
        }
        let compact = HermitianSpace::new(n, FormTag::Compact)?;
        let computed = compact_ad_dims(n, &compact.canonical_skew_involution(), tol)?;
        let minus = n * (n + 1);
        rows.push(AuditRow {
            algebra: format!("sp({n})"),
            involution: "i I".into(),
            computed,
            formula: LieDims {
                total: total_c,
                plus_one: total_c - minus,
                minus_one: minus,
            },
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral;

    #[test]
    fn sp1_samples_are_unit_and_reproducible() {
        let mut rng = trial_rng(42, 0);
        let first = sample_sp1(&mut rng);
        assert!((first.norm() - 1.0).abs() < 1e-12);
        let again = sample_sp1(&mut trial_rng(42, 0));
        assert_eq!(first, again);
        let other = sample_sp1(&mut trial_rng(42, 1));
        assert_ne!(first, other);
    }

    #[test]
    fn sp1_sample_mean_is_small() {
        let mut rng = trial_rng(3, 0);
        let mut acc = Quaternion::ZERO;
        let n = 100_000;
        for _ in 0..n {
            acc += sample_sp1(&mut rng);
        }
        assert!((acc / n as f64).norm() < 0.02);
    }

    #[test]
    fn compact_samples_are_unitary() {
        let mut rng = trial_rng(5, 0);
        for n in 1..=3 {
            for _ in 0..300 {
                let m = sample_compact(n, &mut rng).unwrap();
                let r = (&m.adj() * &m).dist(&QMatrix::identity(n));
                assert!(r < 1e-10, "residual {r}");
            }
        }
    }

    #[test]
    fn sp11_samples_are_members() {
        let space = HermitianSpace::h1(1);
        let mut rng = trial_rng(9, 0);
        let mut counts = BTreeMap::new();
        for _ in 0..300 {
            let m = sample_sp11(&mut rng);
            let res = space.membership_residual(&m).unwrap();
            assert!(res < 1e-9, "residual {res}");
            let v = spectral::classify(&space, &m, &Tolerance::default()).unwrap();
            *counts.entry(v.verdict.name()).or_insert(0) += 1;
        }
        assert!(counts.contains_key("hyperbolic") && counts.contains_key("elliptic"));
    }

    #[test]
    fn group_tags_parse() {
        assert_eq!("SP11".parse::<GroupTag>().unwrap(), GroupTag::Sp11);
        assert_eq!(
            "so3".parse::<GroupTag>(),
            Err(Error::UnknownGroup("so3".into()))
        );
    }

    #[test]
    fn small_experiments() {
        let tol = Tolerance::default();
        let r = genericity_experiment(GroupTag::Sp1, 200, 7, &tol).unwrap();
        assert_eq!(r.fraction_sdr, 1.0);
        assert!(r.residual_stats.max < 1e-9);
        assert_eq!(r.dim_histogram.values().sum::<usize>(), 200);
        let r = genericity_experiment(GroupTag::So4, 50, 7, &tol).unwrap();
        assert_eq!(r.fraction_sdr, 1.0);
        let r = genericity_experiment(GroupTag::Sp2, 50, 7, &tol).unwrap();
        assert_eq!(r.outcomes.yes, 0);
        assert_eq!(r.outcomes.no, r.dim_histogram[&0]);
    }

    #[test]
    fn reports_do_not_depend_on_thread_count() {
        let tol = Tolerance::default();
        let wide = genericity_experiment(GroupTag::Sp11, 40, 11, &tol).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let narrow = pool.install(|| genericity_experiment(GroupTag::Sp11, 40, 11, &tol).unwrap());
        assert_eq!(wide, narrow);
    }

    #[test]
    fn audit_matches_formulas() {
        let rows = dimension_audit(2, &Tolerance::default()).unwrap();
        for row in &rows {
            assert!(row.matches(), "{row:?}");
        }
        let first = &rows[0];
        assert_eq!(
            (
                first.computed.total,
                first.computed.plus_one,
                first.computed.minus_one
            ),
            (10, 4, 6)
        );
        assert!(dimension_audit(4, &Tolerance::default()).is_err());
    }
}
