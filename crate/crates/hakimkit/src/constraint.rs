//! Volume-form constraints for axes-fixing maps.
//!
//! A map (z e^{w g}, w e^{z h}) preserves the meromorphic volume form
//! dz ∧ dw / (zw) exactly when the pair (g, h) satisfies the first-order
//! PDE whose residual is computed by [`pde_residual`]:
//!
//! ```text
//! E = g_z + h_w − g·h − z·g·h_z − w·h·g_w − zw·g_w·h_z + zw·g_z·h_w
//! ```
//!
//! The Jacobian determinant of the expanded map factors as
//! e^{wg + zh} · (1 + zw·E), so E ≡ 0 is equivalent to the determinant
//! identity det JF = e^{wg + zh}.
//!
//! On the lowest-degree slices the PDE forces a linear relation between
//! the coefficients of g and h ([`relation_check`]), and that relation in
//! turn pins the residual index of every non-degenerate characteristic
//! direction of the expanded map at −(k+1), where k is the common order
//! of (g, h). [`verify_prop2`] checks this both as an exact polynomial
//! identity and numerically through the direction pipeline.
//!
//! [`complete_h`] solves the PDE for h given g: the system is triangular
//! degree by degree, with the pure-z coefficients of h left free.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::coeff::{Coeff, GaussianRational};
use crate::hakim::{directions_from_pair, DirectionKind, HakimError, ProjectiveDirection};
use crate::maps::{classify_fixed_point, AxesFixingMap, FixedPointClass, HomogeneousPair, MapError};
use crate::series::{Monomial, Series, SeriesError, Var};

/// Relative tolerance for coefficient-relation checks in the floating
/// domain; exact coefficients are compared exactly.
pub const RELATION_FLOAT_TOL: f64 = 1e-10;

/// Tolerance on |A + (k+1)| for the numeric index checks.
pub const NUMERIC_INDEX_TOL: f64 = 1e-8;

/// Tolerance on the unit-volume evidence at sampled fixed points:
/// ||det DF| − 1| off the axes, min |μ − 1| on them.
pub const VOLUME_TOL: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum ConstraintError {
    #[error("free axis coefficient of degree {degree} exceeds the requested truncation {trunc}")]
    FreeCoefficientBeyondTruncation { degree: u32, trunc: u32 },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Hakim(#[from] HakimError),
}

/// Size of a residual series: certified zero in the exact domain, or a
/// sup norm over coefficients otherwise.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum ResidualNorm {
    /// Every coefficient is exactly zero (exact domain only).
    ExactZero,
    /// Largest coefficient magnitude.
    Sup(f64),
}

impl ResidualNorm {
    /// The norm as a float; zero for [`ResidualNorm::ExactZero`].
    pub fn value(&self) -> f64 {
        match self {
            ResidualNorm::ExactZero => 0.0,
            ResidualNorm::Sup(v) => *v,
        }
    }
}

impl std::fmt::Display for ResidualNorm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ResidualNorm::ExactZero => write!(f, "exactly zero"),
            ResidualNorm::Sup(v) => write!(f, "sup norm {v:.3e}"),
        }
    }
}

/// One failed instance of the coefficient relation
/// h[α−1, β] = −(α/β) · g[α, β−1].
#[derive(Clone, PartialEq, Debug)]
pub struct RelationViolation<C: Coeff> {
    pub alpha: u32,
    pub beta: u32,
    /// The coefficient h[α−1, β] actually present.
    pub lhs: C,
    /// The value −(α/β) · g[α, β−1] the relation demands.
    pub rhs: C,
}

/// Outcome of [`relation_check`].
#[derive(Clone, PartialEq, Debug)]
pub struct ConstraintReport<C: Coeff> {
    pub pde_residual_norm: ResidualNorm,
    pub relation_violations: Vec<RelationViolation<C>>,
    /// Highest coefficient degree the relation window covered:
    /// min(2k, trunc), or 0 when the pair is identically zero.
    pub checked_degree: u32,
}

impl<C: Coeff> ConstraintReport<C> {
    pub fn relation_clean(&self) -> bool {
        self.relation_violations.is_empty()
    }
}

/// Residual of the volume-form PDE for the pair (g, h), trusted one
/// degree below the pair's truncation.
///
/// Every composite is truncated to the common window before combining,
/// so the result is the exact jet of E through degree trunc − 1.
pub fn pde_residual<C: Coeff>(m: &AxesFixingMap<C>) -> Series<C> {
    let g = m.g();
    let h = m.h();
    let t1 = m.trunc().saturating_sub(1);

    let g_z = g.diff(Var::Z);
    let g_w = g.diff(Var::W);
    let h_z = h.diff(Var::Z);
    let h_w = h.diff(Var::W);

    let gt = g.truncated(t1);
    let ht = h.truncated(t1);

    let gh = gt.mul(&ht).expect("common truncation");
    let z_g_hz = gt.mul(&h_z).expect("common truncation").mul_var(Var::Z).truncated(t1);
    let w_h_gw = ht.mul(&g_w).expect("common truncation").mul_var(Var::W).truncated(t1);
    let zw_gw_hz = g_w
        .mul(&h_z)
        .expect("common truncation")
        .mul_var(Var::Z)
        .mul_var(Var::W)
        .truncated(t1);
    let zw_gz_hw = g_z
        .mul(&h_w)
        .expect("common truncation")
        .mul_var(Var::Z)
        .mul_var(Var::W)
        .truncated(t1);

    g_z.add(&h_w)
        .and_then(|e| e.sub(&gh))
        .and_then(|e| e.sub(&z_g_hz))
        .and_then(|e| e.sub(&w_h_gw))
        .and_then(|e| e.sub(&zw_gw_hz))
        .and_then(|e| e.add(&zw_gz_hw))
        .expect("all terms truncated to the common window")
}

fn residual_norm<C: Coeff>(e: &Series<C>) -> ResidualNorm {
    if C::EXACT && e.is_empty() {
        ResidualNorm::ExactZero
    } else {
        ResidualNorm::Sup(e.max_coeff_norm())
    }
}

/// Check the lowest-window coefficient relation forced by the PDE:
/// for every coefficient degree α + β − 1 in [k, min(2k, trunc)] with
/// α, β ≥ 1, the pair must satisfy h[α−1, β] = −(α/β) · g[α, β−1].
///
/// The report also carries the PDE residual norm of the pair. Exact
/// coefficients are compared exactly; floating ones within
/// [`RELATION_FLOAT_TOL`] relative to the pair's largest coefficient.
pub fn relation_check<C: Coeff>(m: &AxesFixingMap<C>) -> ConstraintReport<C> {
    let e = pde_residual(m);
    let pde_residual_norm = residual_norm(&e);

    let (relation_violations, checked_degree) = match m.k() {
        None => (Vec::new(), 0),
        Some(k) => {
            let top = (2 * k).min(m.trunc());
            let scale = m
                .g()
                .max_coeff_norm()
                .max(m.h().max_coeff_norm())
                .max(1.0);
            let mut violations = Vec::new();
            for n in k..=top {
                for alpha in 1..=n {
                    let beta = n + 1 - alpha;
                    let lhs = m.h().coeff(alpha - 1, beta);
                    let rhs = m
                        .g()
                        .coeff(alpha, beta - 1)
                        .mul(&C::from_ratio(-(alpha as i64), beta as i64));
                    let diff = lhs.sub(&rhs);
                    let bad = if C::EXACT {
                        !diff.is_zero()
                    } else {
                        diff.to_c64().norm() > RELATION_FLOAT_TOL * scale
                    };
                    if bad {
                        violations.push(RelationViolation { alpha, beta, lhs, rhs });
                    }
                }
            }
            (violations, top)
        }
    };

    ConstraintReport {
        pde_residual_norm,
        relation_violations,
        checked_degree,
    }
}

/// Solve the volume-form PDE for h given g, degree by degree, up to the
/// requested truncation.
///
/// At residual degree n the only degree-(n+1) coefficients of h that can
/// appear enter linearly through h_w, so each residual monomial
/// e · z^a w^b is cancelled by setting h[a, b+1] = −e / (b+1). The
/// pure-z coefficients h[n, 0] never appear and stay free; supply them
/// through `free_axis_coeffs` (degree → value, absent means zero).
/// Terms of g above `trunc` cannot influence the solved window and are
/// ignored.
///
/// The result satisfies `pde_residual == 0` through degree trunc − 1.
pub fn complete_h(
    g: &Series<GaussianRational>,
    free_axis_coeffs: &BTreeMap<u32, GaussianRational>,
    trunc: u32,
) -> Result<Series<GaussianRational>, ConstraintError> {
    let g_work: Series<GaussianRational> = Series::from_monomials(
        trunc,
        g.monomials().filter(|t| t.alpha + t.beta <= trunc),
    )?;

    let mut h: Series<GaussianRational> = Series::zero(trunc);
    for (&degree, c) in free_axis_coeffs {
        if degree > trunc {
            return Err(ConstraintError::FreeCoefficientBeyondTruncation { degree, trunc });
        }
        if !c.is_zero() {
            h = h.add(&Series::monomial(trunc, degree, 0, c.clone())?)?;
        }
    }

    for n in 0..trunc {
        let m = AxesFixingMap::new(g_work.clone(), h.clone())?;
        let slice = pde_residual(&m).homogeneous_slice(n);
        if slice.is_empty() {
            continue;
        }
        let corrections = slice.monomials().map(|t| {
            let divisor = GaussianRational::from_i64((t.beta + 1) as i64, 0);
            Monomial {
                alpha: t.alpha,
                beta: t.beta + 1,
                coeff: t.coeff.div(&divisor).neg(),
            }
        });
        h = h.add(&Series::from_monomials(trunc, corrections)?)?;
    }

    debug_assert!(
        pde_residual(&AxesFixingMap::new(g_work, h.clone()).expect("matching truncations"))
            .is_empty(),
        "triangular solve must clear the residual window"
    );
    Ok(h)
}

/// One numeric index check: a non-degenerate direction of the expanded
/// map with its computed residual index, compared against −(k+1).
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct DirectionCheck {
    /// Affine coordinate of the direction (1, u0). For axes-fixing maps
    /// the direction at infinity is always degenerate, so every
    /// non-degenerate direction is finite.
    pub u0: Complex64,
    pub index: Complex64,
    /// The predicted value −(k+1).
    pub target: f64,
    /// |index − target|.
    pub deviation: f64,
    /// deviation ≤ [`NUMERIC_INDEX_TOL`].
    pub pass: bool,
}

/// Outcome of [`verify_prop2`].
#[derive(Clone, PartialEq, Debug)]
pub struct Prop2Report {
    /// Whether the prediction applies: the coefficient relation holds
    /// and the pair has a finite common order.
    pub applicable: bool,
    /// Common order k of (g, h); `None` for the identity pair.
    pub k: Option<u32>,
    /// Whether the degree-k coefficient identity
    /// N(u) ≡ −(k+1)·D(u) holds exactly; `None` when k is.
    pub exact_identity: Option<bool>,
    /// Numeric index checks, one per non-degenerate direction of the
    /// expanded map. Computed even when the relation fails, so callers
    /// can observe how the index moves off −(k+1).
    pub numeric: Vec<DirectionCheck>,
    /// Relation and PDE-residual evidence for the pair.
    pub relation_report: ConstraintReport<GaussianRational>,
    /// True only if the prediction applies and either route contradicts
    /// it. Never expected for genuine inputs.
    pub falsified: bool,
}

/// Verify the index prediction for a relation-clean pair: every
/// non-degenerate characteristic direction of the expanded map has
/// residual index −(k+1).
///
/// Two independent routes are checked. The exact route tests the
/// degree-k coefficient identity N(u) ≡ −(k+1)·D(u), where
/// D(u) = Σ_β g[k−β, β] u^β and N collects the direction-polynomial
/// derivative data. The numeric route runs the floating direction
/// pipeline on the lowest-degree pair of the expansion and compares
/// each non-degenerate index against −(k+1) within
/// [`NUMERIC_INDEX_TOL`].
pub fn verify_prop2(m: &AxesFixingMap<GaussianRational>) -> Result<Prop2Report, ConstraintError> {
    let relation_report = relation_check(m);
    let k = match m.k() {
        Some(k) => k,
        None => {
            return Ok(Prop2Report {
                applicable: false,
                k: None,
                exact_identity: None,
                numeric: Vec::new(),
                relation_report,
                falsified: false,
            });
        }
    };
    let applicable = relation_report.relation_clean();
    let g = m.g();
    let h = m.h();

    let kp1 = (k as i64) + 1;
    let mut exact_identity = true;
    for j in 0..=k {
        let n_j = if j < k {
            h.coeff(k - j - 1, j + 1)
                .sub(&g.coeff(k - j, j))
                .mul_int((j as i64) + 1)
        } else {
            g.coeff(0, k).mul_int(kp1).neg()
        };
        let target = g.coeff(k - j, j).mul_int(kp1).neg();
        if !n_j.sub(&target).is_zero() {
            exact_identity = false;
        }
    }

    // Lowest-degree pair of the expansion: z·w times the degree-k slices.
    let p = g
        .homogeneous_slice(k)
        .to_float()
        .mul_var(Var::Z)
        .mul_var(Var::W);
    let q = h
        .homogeneous_slice(k)
        .to_float()
        .mul_var(Var::Z)
        .mul_var(Var::W);
    let pair = HomogeneousPair::new(k + 2, p, q);
    let dirs = directions_from_pair(&pair)?;

    let target = -((k as f64) + 1.0);
    let mut numeric = Vec::new();
    for d in dirs.directions {
        if d.kind != DirectionKind::NonDegenerate {
            continue;
        }
        let ProjectiveDirection::Finite(u0) = d.direction else {
            // The direction at infinity of an axes-fixing expansion has
            // λ = 0 and never reaches this branch.
            continue;
        };
        let index = d
            .index
            .expect("non-degenerate directions carry an index");
        let deviation = (index - target).norm();
        numeric.push(DirectionCheck {
            u0,
            index,
            target,
            deviation,
            pass: deviation <= NUMERIC_INDEX_TOL,
        });
    }

    let falsified = applicable && (!exact_identity || numeric.iter().any(|c| !c.pass));
    Ok(Prop2Report {
        applicable,
        k: Some(k),
        exact_identity: Some(exact_identity),
        numeric,
        relation_report,
        falsified,
    })
}

/// Evidence gathered at one sampled fixed point.
#[derive(Clone, Debug)]
pub struct FixedPointCheck {
    pub point: (Complex64, Complex64),
    pub residual: f64,
    pub det: Complex64,
    pub eigenvalues: (Complex64, Complex64),
    pub class: FixedPointClass,
    /// Off the axes: ||det DF| − 1|. On an axis the determinant carries
    /// the free axis data instead, so the invariant is the guaranteed
    /// unit eigenvalue: min |μ − 1|.
    pub volume_deviation: f64,
    /// volume_deviation ≤ [`VOLUME_TOL`].
    pub volume_ok: bool,
    pub not_attracting: bool,
}

/// Outcome of [`no_attracting_fixed_points_check`].
#[derive(Clone, Debug)]
pub struct NoAttractingReport {
    /// Residual norm of the pair; callers should only trust the check
    /// when this is (numerically) zero, since the argument rests on the
    /// preserved volume form.
    pub pde_residual_norm: ResidualNorm,
    pub checks: Vec<FixedPointCheck>,
    /// True when every sampled point is non-attracting with the
    /// expected volume evidence.
    pub all_pass: bool,
}

/// Confirm that sampled fixed points of the expanded map are never
/// attracting, with the volume evidence that forces it: unit-modulus
/// Jacobian determinant off the axes, a unit eigenvalue on them.
///
/// Fails with [`MapError::NotFixed`] (wrapped) if a sample is not fixed
/// within `point_tol`. On-axis samples of an axes-fixing map are always
/// exactly fixed; off-axis samples must be located by the caller.
pub fn no_attracting_fixed_points_check(
    m: &AxesFixingMap<Complex64>,
    samples: &[(Complex64, Complex64)],
    point_tol: f64,
) -> Result<NoAttractingReport, ConstraintError> {
    let pde_residual_norm = residual_norm(&pde_residual(m));
    let f = m.expand();
    let mut checks = Vec::with_capacity(samples.len());
    let mut all_pass = true;
    for &p0 in samples {
        let rep = classify_fixed_point(&f, p0, point_tol)?;
        let on_axis = p0.0.norm() <= point_tol || p0.1.norm() <= point_tol;
        let volume_deviation = if on_axis {
            let (m1, m2) = rep.eigenvalues;
            (m1 - 1.0).norm().min((m2 - 1.0).norm())
        } else {
            (rep.det.norm() - 1.0).abs()
        };
        let volume_ok = volume_deviation <= VOLUME_TOL;
        let not_attracting = rep.class != FixedPointClass::Attracting;
        all_pass &= volume_ok && not_attracting;
        checks.push(FixedPointCheck {
            point: p0,
            residual: rep.residual,
            det: rep.det,
            eigenvalues: rep.eigenvalues,
            class: rep.class,
            volume_deviation,
            volume_ok,
            not_attracting,
        });
    }
    Ok(NoAttractingReport {
        pde_residual_norm,
        checks,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    type G = GaussianRational;

    fn q(n: i64, d: i64) -> G {
        G::from_ratios(n, d, 0, 1)
    }

    fn int(n: i64) -> G {
        G::from_i64(n, 0)
    }

    fn var(v: Var, trunc: u32) -> Series<G> {
        Series::variable(v, trunc).unwrap()
    }

    fn exact_map(g: Series<G>, h: Series<G>) -> AxesFixingMap<G> {
        AxesFixingMap::new(g, h).unwrap()
    }

    #[test]
    fn residual_of_identity_pair_is_empty() {
        let m = exact_map(Series::zero(5), Series::zero(5));
        let e = pde_residual(&m);
        assert!(e.is_empty());
        assert_eq!(e.trunc(), 4);
        assert_eq!(residual_norm(&e), ResidualNorm::ExactZero);
    }

    #[test]
    fn residual_of_constant_pair_is_their_negated_product() {
        let m = exact_map(Series::constant(int(3), 4), Series::constant(int(5), 4));
        let e = pde_residual(&m);
        let expected = Series::constant(int(-15), 3);
        assert_eq!(e, expected);
    }

    #[test]
    fn residual_vanishes_for_known_solution() {
        // g = z pairs with h = −w: the cross terms cancel exactly.
        let g = var(Var::Z, 6);
        let h = var(Var::W, 6).neg();
        let e = pde_residual(&exact_map(g, h));
        assert!(e.is_empty());
    }

    #[test]
    fn relation_clean_pair_reports_no_violations() {
        // g = z, h = z − w satisfies h[0,1] = −(1/1)·g[1,0].
        let g = var(Var::Z, 6);
        let h = var(Var::Z, 6).sub(&var(Var::W, 6)).unwrap();
        let report = relation_check(&exact_map(g, h));
        assert!(report.relation_clean());
        assert_eq!(report.checked_degree, 2);
    }

    #[test]
    fn relation_violation_is_located_and_valued() {
        // g = z, h = z + w breaks the relation at (α, β) = (1, 1).
        let g = var(Var::Z, 6);
        let h = var(Var::Z, 6).add(&var(Var::W, 6)).unwrap();
        let report = relation_check(&exact_map(g, h));
        assert_eq!(report.relation_violations.len(), 1);
        let v = &report.relation_violations[0];
        assert_eq!((v.alpha, v.beta), (1, 1));
        assert_eq!(v.lhs, int(1));
        assert_eq!(v.rhs, int(-1));
    }

    #[test]
    fn relation_window_is_empty_for_order_zero() {
        let m = exact_map(Series::constant(int(1), 3), Series::constant(int(2), 3));
        let report = relation_check(&m);
        assert!(report.relation_clean());
        assert_eq!(report.checked_degree, 0);
    }

    fn completed(g: &Series<G>, trunc: u32) -> Series<G> {
        complete_h(g, &BTreeMap::new(), trunc).unwrap()
    }

    #[test]
    fn completion_oracles_match_hand_solutions() {
        // Four closed forms solved by hand from the residual recursion.
        let z5 = var(Var::Z, 5);
        let w5 = var(Var::W, 5);

        assert_eq!(completed(&z5, 5), w5.neg());
        assert_eq!(completed(&w5, 5), Series::zero(5));

        let z2 = z5.mul(&z5).unwrap();
        let expected = z5.mul(&w5).unwrap().scale(&int(-2));
        assert_eq!(completed(&z2, 5), expected);

        let zw = z5.mul(&w5).unwrap();
        let expected = w5.mul(&w5).unwrap().scale(&q(-1, 2));
        assert_eq!(completed(&zw, 5), expected);
    }

    #[test]
    fn completion_of_coupled_linear_pair() {
        // g = z + w, truncation 6, all free axis coefficients zero:
        // h = −w − (2/3)w³ + (1/3)zw⁴ − (4/15)w⁵.
        let g = var(Var::Z, 6).add(&var(Var::W, 6)).unwrap();
        let h = completed(&g, 6);
        let expected = Series::from_monomials(
            6,
            vec![
                Monomial { alpha: 0, beta: 1, coeff: int(-1) },
                Monomial { alpha: 0, beta: 3, coeff: q(-2, 3) },
                Monomial { alpha: 1, beta: 4, coeff: q(1, 3) },
                Monomial { alpha: 0, beta: 5, coeff: q(-4, 15) },
            ],
        )
        .unwrap();
        assert_eq!(h, expected);
        assert!(pde_residual(&exact_map(g, h)).is_empty());
    }

    #[test]
    fn completion_with_free_axis_coefficients() {
        // With g = 0 the residual is h_w, so pure-z data passes through.
        let free = BTreeMap::from([(0, int(1)), (2, int(5))]);
        let h = complete_h(&Series::zero(4), &free, 4).unwrap();
        let expected = Series::one(4)
            .add(&Series::monomial(4, 2, 0, int(5)).unwrap())
            .unwrap();
        assert_eq!(h, expected);

        // g = z with a free linear axis term: the solve corrects the
        // mixed coefficients around it.
        let free = BTreeMap::from([(1, int(1))]);
        let h = complete_h(&var(Var::Z, 4), &free, 4).unwrap();
        let expected = Series::from_monomials(
            4,
            vec![
                Monomial { alpha: 1, beta: 0, coeff: int(1) },
                Monomial { alpha: 0, beta: 1, coeff: int(-1) },
                Monomial { alpha: 2, beta: 1, coeff: int(2) },
            ],
        )
        .unwrap();
        assert_eq!(h, expected);
    }

    #[test]
    fn completion_rejects_free_coefficient_beyond_truncation() {
        let free = BTreeMap::from([(7, int(1))]);
        let err = complete_h(&Series::zero(4), &free, 4).unwrap_err();
        assert!(matches!(
            err,
            ConstraintError::FreeCoefficientBeyondTruncation { degree: 7, trunc: 4 }
        ));
    }

    #[test]
    fn completion_is_idempotent_on_its_own_output() {
        let g = var(Var::Z, 6).add(&var(Var::W, 6)).unwrap();
        let h = completed(&g, 6);
        let again = completed(&g, 6);
        assert_eq!(h, again);
    }

    #[test]
    fn determinant_identity_holds_for_completed_pairs() {
        // det JF = e^{wg + zh} one degree below truncation whenever the
        // residual window is clear.
        let g = var(Var::Z, 6).add(&var(Var::W, 6)).unwrap();
        let h = completed(&g, 6);
        let f = exact_map(g.clone(), h.clone()).expand();
        let det = f.jacobian_det();
        let exponent = g
            .mul_var(Var::W)
            .truncated(5)
            .add(&h.mul_var(Var::Z).truncated(5))
            .unwrap();
        let rhs = exponent.exp_series().unwrap();
        assert_eq!(det, rhs);
    }

    #[test]
    fn index_identity_verified_for_order_zero_pair() {
        let m = exact_map(Series::constant(int(1), 3), Series::constant(int(2), 3));
        let report = verify_prop2(&m).unwrap();
        assert!(report.applicable);
        assert_eq!(report.k, Some(0));
        assert_eq!(report.exact_identity, Some(true));
        assert!(!report.falsified);
        assert_eq!(report.numeric.len(), 1);
        let check = &report.numeric[0];
        assert!((check.u0 - 2.0).norm() < 1e-12);
        assert!((check.index + 1.0).norm() < 1e-12);
        assert!(check.pass);
    }

    #[test]
    fn index_identity_verified_for_order_one_pair() {
        // g = z, h = z − w: single non-degenerate direction at u = 1/2
        // with index −2.
        let g = var(Var::Z, 6);
        let h = var(Var::Z, 6).sub(&var(Var::W, 6)).unwrap();
        let report = verify_prop2(&exact_map(g, h)).unwrap();
        assert!(report.applicable);
        assert_eq!(report.exact_identity, Some(true));
        assert!(!report.falsified);
        assert_eq!(report.numeric.len(), 1);
        let check = &report.numeric[0];
        assert!((check.u0 - 0.5).norm() < 1e-12);
        assert!((check.index + 2.0).norm() < 1e-10);
        assert!(check.pass);
    }

    #[test]
    fn index_identity_verified_for_order_two_pair() {
        // g = z², h = z² − 2zw: relation-clean with one non-degenerate
        // direction at u = 1/3 and index −3.
        let z = var(Var::Z, 5);
        let w = var(Var::W, 5);
        let g = z.mul(&z).unwrap();
        let h = g.sub(&z.mul(&w).unwrap().scale(&int(2))).unwrap();
        let report = verify_prop2(&exact_map(g, h)).unwrap();
        assert!(report.applicable);
        assert_eq!(report.k, Some(2));
        assert_eq!(report.exact_identity, Some(true));
        assert!(!report.falsified);
        assert_eq!(report.numeric.len(), 1);
        let check = &report.numeric[0];
        assert!((check.u0 - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-12);
        assert!((check.index + 3.0).norm() < 1e-10);
        assert!(check.pass);
    }

    #[test]
    fn broken_relation_moves_the_index_off_target() {
        // g = z, h = z − 2w violates the relation; the lone
        // non-degenerate direction then carries index −3 instead of −2,
        // and the report marks the prediction inapplicable rather than
        // falsified.
        let g = var(Var::Z, 6);
        let h = var(Var::Z, 6)
            .sub(&var(Var::W, 6).scale(&int(2)))
            .unwrap();
        let report = verify_prop2(&exact_map(g, h)).unwrap();
        assert!(!report.applicable);
        assert_eq!(report.exact_identity, Some(false));
        assert!(!report.falsified);
        assert_eq!(report.numeric.len(), 1);
        let check = &report.numeric[0];
        assert!((check.index + 3.0).norm() < 1e-10);
        assert!(check.deviation >= 0.1);
        assert!(!check.pass);
    }

    #[test]
    fn identity_pair_is_not_applicable() {
        let m = exact_map(Series::zero(4), Series::zero(4));
        let report = verify_prop2(&m).unwrap();
        assert!(!report.applicable);
        assert_eq!(report.k, None);
        assert_eq!(report.exact_identity, None);
        assert!(report.numeric.is_empty());
        assert!(!report.falsified);
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sampled_fixed_points_are_never_attracting() {
        // g = z, h = −w preserves the volume form exactly; every
        // on-axis point is fixed with a unit eigenvalue.
        let g: Series<Complex64> = Series::variable(Var::Z, 12).unwrap();
        let h = Series::variable(Var::W, 12).unwrap().neg();
        let m = AxesFixingMap::new(g, h).unwrap();
        let samples = [
            (c(0.0, 0.0), c(0.0, 0.0)),
            (c(2.0, 0.0), c(0.0, 0.0)),
            (c(0.0, 3.0), c(0.0, 0.0)),
            (c(0.0, 0.0), c(-1.0, 0.5)),
        ];
        let report = no_attracting_fixed_points_check(&m, &samples, 1e-9).unwrap();
        assert_eq!(report.pde_residual_norm, ResidualNorm::Sup(0.0));
        assert!(report.all_pass);
        assert_eq!(report.checks.len(), 4);
        assert_eq!(report.checks[0].class, FixedPointClass::TangentToIdentity);
        for check in &report.checks {
            assert!(check.not_attracting);
            assert!(check.volume_ok, "volume deviation {}", check.volume_deviation);
        }
    }

    #[test]
    fn non_fixed_sample_is_rejected() {
        let g: Series<Complex64> = Series::variable(Var::Z, 8).unwrap();
        let h = Series::variable(Var::W, 8).unwrap().neg();
        let m = AxesFixingMap::new(g, h).unwrap();
        let err = no_attracting_fixed_points_check(&m, &[(c(1.0, 0.0), c(1.0, 0.0))], 1e-9)
            .unwrap_err();
        assert!(matches!(err, ConstraintError::Map(MapError::NotFixed { .. })));
    }
}
