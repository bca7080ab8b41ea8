//! Tangent-to-identity map germs of (C^2, 0) and the axes-fixing normal form.
//!
//! A [`TangentMap`] is F(z, w) = (z + p, w + q) with p, q of total degree at
//! least two: the derivative at the origin is the identity. A map that fixes
//! both coordinate axes pointwise can be written as
//!
//! F(z, w) = (z e^{w g(z, w)}, w e^{z h(z, w)})
//!
//! and [`AxesFixingMap`] stores that (g, h) data. [`AxesFixingMap::expand`]
//! and [`contract`] convert between the two presentations; the round trip is
//! the identity on the jets both sides can represent.

use num_complex::Complex64;
use thiserror::Error;

use crate::coeff::{Coeff, GaussianRational};
use crate::series::{Series, SeriesError, Var};

/// Absolute tolerance for fixed-point and derivative validation in the
/// floating domain.
pub const DEFAULT_POINT_TOL: f64 = 1e-9;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum MapError {
    #[error("component truncation orders differ: {left} vs {right}")]
    ComponentTruncationMismatch { left: u32, right: u32 },
    #[error("{component} contains the low-order term z^{alpha} w^{beta}; a tangent-to-identity map has no terms of degree <= 1")]
    LowOrderTerm {
        component: &'static str,
        alpha: u32,
        beta: u32,
    },
    #[error("the map is the identity up to its truncation order; its vanishing order is undefined")]
    IdentityJet,
    #[error("{component} is not divisible by {var}: the map does not fix both axes (term z^{alpha} w^{beta})")]
    NotAxesFixing {
        component: &'static str,
        var: Var,
        alpha: u32,
        beta: u32,
    },
    #[error("point is not fixed within tolerance: |F(p) - p| = {residual:.3e} > {tol:.3e}")]
    NotFixed { residual: f64, tol: f64 },
    #[error("derivative at the point is not the identity within tolerance: deviation {deviation:.3e} > {tol:.3e}")]
    DerivativeNotIdentity { deviation: f64, tol: f64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Germ F(z, w) = (z + p(z, w), w + q(z, w)) with dF(0) = Id.
#[derive(Clone, PartialEq, Debug)]
pub struct TangentMap<C: Coeff> {
    p: Series<C>,
    q: Series<C>,
}

impl<C: Coeff> TangentMap<C> {
    /// Validates the shared truncation order and the absence of terms of
    /// total degree <= 1 in either component.
    pub fn new(p: Series<C>, q: Series<C>) -> Result<Self, MapError> {
        if p.trunc() != q.trunc() {
            return Err(MapError::ComponentTruncationMismatch {
                left: p.trunc(),
                right: q.trunc(),
            });
        }
        for (series, component) in [(&p, "p"), (&q, "q")] {
            if let Some(t) = series.monomials().find(|t| t.alpha + t.beta <= 1) {
                return Err(MapError::LowOrderTerm {
                    component,
                    alpha: t.alpha,
                    beta: t.beta,
                });
            }
        }
        Ok(TangentMap { p, q })
    }

    pub fn p(&self) -> &Series<C> {
        &self.p
    }

    pub fn q(&self) -> &Series<C> {
        &self.q
    }

    pub fn trunc(&self) -> u32 {
        self.p.trunc()
    }

    /// Vanishing order: the smallest total degree appearing in (p, q).
    /// Errors on the identity jet.
    pub fn order(&self) -> Result<u32, MapError> {
        match (self.p.lowest_degree(), self.q.lowest_degree()) {
            (None, None) => Err(MapError::IdentityJet),
            (a, b) => Ok(a.into_iter().chain(b).min().expect("one side present")),
        }
    }

    /// The homogeneous pair (P, Q) of degree `order` leading the expansion.
    pub fn leading_pair(&self) -> Result<HomogeneousPair<C>, MapError> {
        let degree = self.order()?;
        Ok(HomogeneousPair {
            degree,
            p: self.p.homogeneous_slice(degree),
            q: self.q.homogeneous_slice(degree),
        })
    }

    /// det dF as a series, trusted one degree below the map itself.
    pub fn jacobian_det(&self) -> Series<C> {
        let t = self.trunc().saturating_sub(1);
        let one = Series::one(t);
        let a11 = one.add(&self.p.diff(Var::Z)).expect("same truncation");
        let a22 = one.add(&self.q.diff(Var::W)).expect("same truncation");
        let main = a11.mul(&a22).expect("same truncation");
        let cross = self
            .p
            .diff(Var::W)
            .mul(&self.q.diff(Var::Z))
            .expect("same truncation");
        main.sub(&cross).expect("same truncation")
    }

    /// Numeric evaluation of F at a point.
    pub fn eval_map(&self, z: Complex64, w: Complex64) -> (Complex64, Complex64) {
        (z + self.p.eval(z, w), w + self.q.eval(z, w))
    }

    /// Numeric derivative matrix [[dF1/dz, dF1/dw], [dF2/dz, dF2/dw]].
    pub fn derivative_at(&self, z: Complex64, w: Complex64) -> [[Complex64; 2]; 2] {
        let one = Complex64::new(1.0, 0.0);
        [
            [
                one + self.p.diff(Var::Z).eval(z, w),
                self.p.diff(Var::W).eval(z, w),
            ],
            [
                self.q.diff(Var::Z).eval(z, w),
                one + self.q.diff(Var::W).eval(z, w),
            ],
        ]
    }
}

impl TangentMap<GaussianRational> {
    pub fn to_float(&self) -> TangentMap<Complex64> {
        TangentMap {
            p: self.p.to_float(),
            q: self.q.to_float(),
        }
    }
}

/// Axes-fixing normal form data (g, h), both at one truncation order.
#[derive(Clone, PartialEq, Debug)]
pub struct AxesFixingMap<C: Coeff> {
    g: Series<C>,
    h: Series<C>,
}

impl<C: Coeff> AxesFixingMap<C> {
    pub fn new(g: Series<C>, h: Series<C>) -> Result<Self, MapError> {
        if g.trunc() != h.trunc() {
            return Err(MapError::ComponentTruncationMismatch {
                left: g.trunc(),
                right: h.trunc(),
            });
        }
        Ok(AxesFixingMap { g, h })
    }

    pub fn g(&self) -> &Series<C> {
        &self.g
    }

    pub fn h(&self) -> &Series<C> {
        &self.h
    }

    pub fn trunc(&self) -> u32 {
        self.g.trunc()
    }

    /// Common lowest degree of (g, h): the minimum of the two lowest total
    /// degrees, `None` when both vanish (the identity map).
    pub fn k(&self) -> Option<u32> {
        match (self.g.lowest_degree(), self.h.lowest_degree()) {
            (None, None) => None,
            (a, b) => a.into_iter().chain(b).min(),
        }
    }

    /// Expand (z e^{wg}, w e^{zh}) into a tangent-to-identity map, truncated
    /// at this map's truncation order.
    pub fn expand(&self) -> TangentMap<C> {
        let t = self.trunc();
        let expm1 = |factor: &Series<C>, outer: Var| -> Series<C> {
            let inner = factor
                .mul_var(match outer {
                    Var::Z => Var::W,
                    Var::W => Var::Z,
                })
                .truncated(t);
            let e = inner
                .exp_series()
                .expect("w*g and z*h have zero constant term")
                .sub(&Series::one(t))
                .expect("same truncation");
            e.mul_var(outer).truncated(t)
        };
        let p = expm1(&self.g, Var::Z);
        let q = expm1(&self.h, Var::W);
        TangentMap::new(p, q).expect("z(e^{wg} - 1) and w(e^{zh} - 1) have degree >= 2")
    }
}

impl AxesFixingMap<GaussianRational> {
    pub fn to_float(&self) -> AxesFixingMap<Complex64> {
        AxesFixingMap {
            g: self.g.to_float(),
            h: self.h.to_float(),
        }
    }
}

/// Recover (g, h) from a tangent-to-identity map that fixes both axes.
/// The result is trusted two degrees below the input: g = log(1 + w r)/w
/// with r = p/(zw), and likewise for h.
pub fn contract<C: Coeff>(f: &TangentMap<C>) -> Result<AxesFixingMap<C>, MapError> {
    let divide = |s: &Series<C>, component: &'static str| -> Result<Series<C>, MapError> {
        s.divide_monomial(Var::Z)
            .and_then(|s| s.divide_monomial(Var::W))
            .map_err(|e| match e {
                SeriesError::NotDivisible { var, alpha, beta } => MapError::NotAxesFixing {
                    component,
                    var,
                    alpha,
                    beta,
                },
                other => MapError::Series(other),
            })
    };
    let r = divide(f.p(), "p")?;
    let s = divide(f.q(), "q")?;
    let g = r
        .mul_var(Var::W)
        .log1p_series()?
        .divide_monomial(Var::W)?;
    let h = s
        .mul_var(Var::Z)
        .log1p_series()?
        .divide_monomial(Var::Z)?;
    AxesFixingMap::new(g, h)
}

/// Homogeneous leading pair (P, Q) of one total degree.
#[derive(Clone, PartialEq, Debug)]
pub struct HomogeneousPair<C: Coeff> {
    degree: u32,
    p: Series<C>,
    q: Series<C>,
}

impl<C: Coeff> HomogeneousPair<C> {
    pub fn new(degree: u32, p: Series<C>, q: Series<C>) -> Self {
        debug_assert!(p.monomials().all(|m| m.alpha + m.beta == degree));
        debug_assert!(q.monomials().all(|m| m.alpha + m.beta == degree));
        HomogeneousPair { degree, p, q }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn p(&self) -> &Series<C> {
        &self.p
    }

    pub fn q(&self) -> &Series<C> {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_empty() && self.q.is_empty()
    }

    /// Exchange the two coordinates: the pair of sigma o F o sigma for
    /// sigma(z, w) = (w, z).
    pub fn swap_chart(&self) -> Self {
        HomogeneousPair {
            degree: self.degree,
            p: self.q.swap_vars(),
            q: self.p.swap_vars(),
        }
    }

    /// P(1, u) and Q(1, u) evaluated in the coefficient domain.
    pub fn eval_affine(&self, u: &C) -> (C, C) {
        let one = C::one();
        (
            self.p.eval_in_domain(&one, u),
            self.q.eval_in_domain(&one, u),
        )
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.p.max_coeff_norm().max(self.q.max_coeff_norm())
    }
}

impl HomogeneousPair<GaussianRational> {
    pub fn to_float(&self) -> HomogeneousPair<Complex64> {
        HomogeneousPair {
            degree: self.degree,
            p: self.p.to_float(),
            q: self.q.to_float(),
        }
    }
}

/// How a fixed point sits under the derivative of the map.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FixedPointClass {
    /// dF = Id within tolerance.
    TangentToIdentity,
    /// Both eigenvalue moduli strictly below one.
    Attracting,
    /// One eigenvalue equals one within tolerance, the other has modulus < 1.
    SemiAttracting,
    /// One eigenvalue equals one within tolerance, the other has modulus > 1.
    SemiRepelling,
    Other,
}

impl std::fmt::Display for FixedPointClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FixedPointClass::TangentToIdentity => "tangent-to-identity",
            FixedPointClass::Attracting => "attracting",
            FixedPointClass::SemiAttracting => "semi-attracting",
            FixedPointClass::SemiRepelling => "semi-repelling",
            FixedPointClass::Other => "other",
        };
        write!(f, "{s}")
    }
}

/// Eigenvalues, derivative, and classification of a validated fixed point.
#[derive(Clone, Debug)]
pub struct FixedPointReport {
    pub point: (Complex64, Complex64),
    pub residual: f64,
    pub derivative: [[Complex64; 2]; 2],
    pub det: Complex64,
    pub eigenvalues: (Complex64, Complex64),
    pub class: FixedPointClass,
}

/// Eigenvalues of a 2x2 complex matrix via the quadratic formula, taking the
/// discriminant branch that avoids cancellation and recovering the second
/// eigenvalue from the determinant.
pub fn eigenvalues_2x2(m: [[Complex64; 2]; 2]) -> (Complex64, Complex64) {
    let half_tr = (m[0][0] + m[1][1]) * 0.5;
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let s = (half_tr * half_tr - det).sqrt();
    let (plus, minus) = (half_tr + s, half_tr - s);
    let mu1 = if plus.norm() >= minus.norm() { plus } else { minus };
    let mu2 = if mu1.norm() > 0.0 { det / mu1 } else { mu1 };
    (mu1, mu2)
}

/// Validate that `p0` is fixed (within `tol`) and classify it by the
/// derivative there.
pub fn classify_fixed_point(
    f: &TangentMap<Complex64>,
    p0: (Complex64, Complex64),
    tol: f64,
) -> Result<FixedPointReport, MapError> {
    let (f1, f2) = f.eval_map(p0.0, p0.1);
    let residual = ((f1 - p0.0).norm_sqr() + (f2 - p0.1).norm_sqr()).sqrt();
    if !residual.is_finite() || residual > tol {
        return Err(MapError::NotFixed { residual, tol });
    }
    let d = f.derivative_at(p0.0, p0.1);
    let det = d[0][0] * d[1][1] - d[0][1] * d[1][0];
    let eigenvalues = eigenvalues_2x2(d);
    let one = Complex64::new(1.0, 0.0);
    let dev = (d[0][0] - one)
        .norm()
        .max(d[0][1].norm())
        .max(d[1][0].norm())
        .max((d[1][1] - one).norm());
    let (mu1, mu2) = eigenvalues;
    let class = if dev <= tol {
        FixedPointClass::TangentToIdentity
    } else if mu1.norm() < 1.0 && mu2.norm() < 1.0 {
        FixedPointClass::Attracting
    } else if (mu1 - one).norm() <= tol || (mu2 - one).norm() <= tol {
        // `other` is the eigenvalue farther from 1.
        let other = if (mu1 - one).norm() <= (mu2 - one).norm() {
            mu2
        } else {
            mu1
        };
        if (other - one).norm() <= tol {
            FixedPointClass::Other
        } else if other.norm() < 1.0 {
            FixedPointClass::SemiAttracting
        } else if other.norm() > 1.0 {
            FixedPointClass::SemiRepelling
        } else {
            FixedPointClass::Other
        }
    } else {
        FixedPointClass::Other
    };
    Ok(FixedPointReport {
        point: p0,
        residual,
        derivative: d,
        det,
        eigenvalues,
        class,
    })
}

/// Re-expand the polynomial map around a fixed point p0 where dF = Id, so
/// the recentered germ is again tangent to the identity. The stored
/// coefficients are treated as the entire polynomial. Constant and linear
/// terms of the shifted components must vanish within `tol`; they are
/// removed exactly, anything larger is an error.
pub fn recenter(
    f: &TangentMap<Complex64>,
    p0: (Complex64, Complex64),
    tol: f64,
) -> Result<TangentMap<Complex64>, MapError> {
    let ps = shift_polynomial(f.p(), p0.0, p0.1);
    let qs = shift_polynomial(f.q(), p0.0, p0.1);
    let residual = (ps.coeff(0, 0).norm_sqr() + qs.coeff(0, 0).norm_sqr()).sqrt();
    if !residual.is_finite() || residual > tol {
        return Err(MapError::NotFixed { residual, tol });
    }
    let deviation = [&ps, &qs]
        .iter()
        .flat_map(|s| [s.coeff(1, 0).norm(), s.coeff(0, 1).norm()])
        .fold(0.0, f64::max);
    if !deviation.is_finite() || deviation > tol {
        return Err(MapError::DerivativeNotIdentity {
            deviation,
            tol,
        });
    }
    let strip = |s: &Series<Complex64>| -> Series<Complex64> {
        Series::from_monomials(
            s.trunc(),
            s.monomials().filter(|m| m.alpha + m.beta >= 2),
        )
        .expect("degrees unchanged")
    };
    TangentMap::new(strip(&ps), strip(&qs))
}

/// Taylor shift: s(z0 + x, w0 + y) expanded in (x, y) by binomials.
fn shift_polynomial(
    s: &Series<Complex64>,
    z0: Complex64,
    w0: Complex64,
) -> Series<Complex64> {
    let t = s.trunc();
    let mut out = Series::zero(t);
    for m in s.monomials() {
        let (a, b) = (m.alpha as usize, m.beta as usize);
        let zp = powers(z0, a);
        let wp = powers(w0, b);
        for i in 0..=a {
            let ca = binomial(a, i) * zp[a - i];
            for j in 0..=b {
                let coeff = m.coeff * ca * binomial(b, j) * wp[b - j];
                let term = Series::monomial(t, i as u32, j as u32, coeff)
                    .expect("shift does not raise total degree");
                out = out.add(&term).expect("same truncation");
            }
        }
    }
    out
}

fn powers(x: Complex64, n: usize) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(n + 1);
    v.push(Complex64::new(1.0, 0.0));
    for i in 0..n {
        let last = v[i];
        v.push(last * x);
    }
    v
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}
