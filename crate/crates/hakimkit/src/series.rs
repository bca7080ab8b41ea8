//! Sparse truncated power series in two variables z and w.
//!
//! A [`Series`] stores the jet of a holomorphic germ up to a total degree
//! bound `trunc`: every monomial z^a w^b with a + b <= trunc is tracked, all
//! higher ones are unknown. Operations propagate that knowledge honestly:
//! products keep the common bound, differentiation lowers it by one, and
//! multiplying by a variable raises it by one (an unknown tail of degree
//! trunc + 1 can only produce unknown terms of degree trunc + 2).
//!
//! Canonical form: no stored coefficient is exactly zero, so `==` on equal
//! truncation bounds is jet equality. Exact (Gaussian-rational) and float
//! coefficients never mix inside one series; mixing is rejected at the typed
//! boundary (see `mapspec`).

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::coeff::{Coeff, GaussianRational};

/// One of the two series variables.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    Z,
    W,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z => write!(f, "z"),
            Var::W => write!(f, "w"),
        }
    }
}

/// A single term coeff * z^alpha * w^beta.
#[derive(Clone, PartialEq, Debug)]
pub struct Monomial<C> {
    pub alpha: u32,
    pub beta: u32,
    pub coeff: C,
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SeriesError {
    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: u32, right: u32 },
    #[error("{op} requires a zero constant term")]
    NonzeroConstantTerm { op: &'static str },
    #[error("term z^{alpha} w^{beta} is not divisible by {var}")]
    NotDivisible { var: Var, alpha: u32, beta: u32 },
    #[error("monomial z^{alpha} w^{beta} exceeds truncation order {trunc}")]
    DegreeExceedsTruncation { alpha: u32, beta: u32, trunc: u32 },
}

/// Sparse truncated bivariate power series over a coefficient field `C`.
#[derive(Clone, PartialEq, Debug)]
pub struct Series<C: Coeff> {
    coeffs: BTreeMap<(u32, u32), C>,
    trunc: u32,
}

impl<C: Coeff> Series<C> {
    pub fn zero(trunc: u32) -> Self {
        Series {
            coeffs: BTreeMap::new(),
            trunc,
        }
    }

    pub fn constant(c: C, trunc: u32) -> Self {
        let mut s = Series::zero(trunc);
        if !c.is_zero() {
            s.coeffs.insert((0, 0), c);
        }
        s
    }

    pub fn one(trunc: u32) -> Self {
        Series::constant(C::one(), trunc)
    }

    /// The monomial `c * z^alpha * w^beta`; fails if it exceeds `trunc`.
    pub fn monomial(trunc: u32, alpha: u32, beta: u32, c: C) -> Result<Self, SeriesError> {
        let mut s = Series::zero(trunc);
        s.insert(alpha, beta, c)?;
        Ok(s)
    }

    /// The variable `var` as a series (requires trunc >= 1).
    pub fn variable(var: Var, trunc: u32) -> Result<Self, SeriesError> {
        match var {
            Var::Z => Series::monomial(trunc, 1, 0, C::one()),
            Var::W => Series::monomial(trunc, 0, 1, C::one()),
        }
    }

    /// Build from a term list; repeated exponents accumulate.
    pub fn from_monomials<I>(trunc: u32, terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = Monomial<C>>,
    {
        let mut s = Series::zero(trunc);
        for t in terms {
            s.insert(t.alpha, t.beta, t.coeff)?;
        }
        Ok(s)
    }

    fn insert(&mut self, alpha: u32, beta: u32, c: C) -> Result<(), SeriesError> {
        if alpha.saturating_add(beta) > self.trunc {
            return Err(SeriesError::DegreeExceedsTruncation {
                alpha,
                beta,
                trunc: self.trunc,
            });
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.coeffs.entry((alpha, beta)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
        Ok(())
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of z^alpha w^beta (zero when absent).
    pub fn coeff(&self, alpha: u32, beta: u32) -> C {
        self.coeffs
            .get(&(alpha, beta))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Terms in lexicographic (alpha, beta) order.
    pub fn monomials(&self) -> impl Iterator<Item = Monomial<C>> + '_ {
        self.coeffs.iter().map(|(&(alpha, beta), c)| Monomial {
            alpha,
            beta,
            coeff: c.clone(),
        })
    }

    /// Smallest total degree with a nonzero term; `None` for the zero series.
    pub fn lowest_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(a, b)| a + b).min()
    }

    /// Largest total degree with a nonzero term; `None` for the zero series.
    pub fn highest_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(a, b)| a + b).max()
    }

    /// Drop all terms of total degree > t and lower the bound to t.
    /// Raising the bound would claim unknown coefficients, so t <= trunc.
    pub fn truncated(&self, t: u32) -> Self {
        assert!(
            t <= self.trunc,
            "cannot raise truncation {} to {}",
            self.trunc,
            t
        );
        Series {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&(a, b), _)| a + b <= t)
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
            trunc: t,
        }
    }

    /// The homogeneous part of total degree `deg`, as a series truncated at `deg`.
    pub fn homogeneous_slice(&self, deg: u32) -> Self {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&(a, b), _)| a + b == deg)
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
            trunc: deg,
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_trunc(rhs)?;
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.coeffs {
            out.insert(a, b, c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, c.neg())).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Series::zero(self.trunc);
        }
        let mut coeffs = BTreeMap::new();
        for (&k, v) in &self.coeffs {
            let prod = v.mul(c);
            if !prod.is_zero() {
                coeffs.insert(k, prod);
            }
        }
        Series {
            coeffs,
            trunc: self.trunc,
        }
    }

    /// Cauchy product, discarding terms above the common truncation order.
    pub fn mul(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_trunc(rhs)?;
        let mut out = Series::zero(self.trunc);
        for (&(a1, b1), c1) in &self.coeffs {
            if a1 + b1 > self.trunc {
                continue;
            }
            for (&(a2, b2), c2) in &rhs.coeffs {
                let (a, b) = (a1 + a2, b1 + b2);
                if a + b > self.trunc {
                    continue;
                }
                out.insert(a, b, c1.mul(c2))?;
            }
        }
        Ok(out)
    }

    /// Partial derivative; the result is trusted one degree lower (floor 0).
    pub fn diff(&self, var: Var) -> Self {
        let trunc = self.trunc.saturating_sub(1);
        let mut out = Series::zero(trunc);
        for (&(a, b), c) in &self.coeffs {
            let (k, e) = match var {
                Var::Z => ((a.wrapping_sub(1), b), a),
                Var::W => ((a, b.wrapping_sub(1)), b),
            };
            if e == 0 || k.0 + k.1 > trunc {
                continue;
            }
            out.insert(k.0, k.1, c.mul_int(e as i64))
                .expect("degree shrinks under differentiation");
        }
        out
    }

    /// Multiply by the variable `var`; knowledge extends one degree higher.
    pub fn mul_var(&self, var: Var) -> Self {
        let trunc = self.trunc + 1;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&(a, b), c)| {
                let k = match var {
                    Var::Z => (a + 1, b),
                    Var::W => (a, b + 1),
                };
                (k, c.clone())
            })
            .collect();
        Series { coeffs, trunc }
    }

    /// Exact division by `var`; every term must contain it. The quotient is
    /// trusted one degree lower.
    pub fn divide_monomial(&self, var: Var) -> Result<Self, SeriesError> {
        let trunc = self.trunc.saturating_sub(1);
        let mut coeffs = BTreeMap::new();
        for (&(a, b), c) in &self.coeffs {
            let k = match var {
                Var::Z if a == 0 => {
                    return Err(SeriesError::NotDivisible {
                        var,
                        alpha: a,
                        beta: b,
                    })
                }
                Var::W if b == 0 => {
                    return Err(SeriesError::NotDivisible {
                        var,
                        alpha: a,
                        beta: b,
                    })
                }
                Var::Z => (a - 1, b),
                Var::W => (a, b - 1),
            };
            coeffs.insert(k, c.clone());
        }
        Ok(Series { coeffs, trunc })
    }

    /// exp(a) for a series with zero constant term; the constant of the
    /// result is exactly one.
    pub fn exp_series(&self) -> Result<Self, SeriesError> {
        if !self.coeff(0, 0).is_zero() {
            return Err(SeriesError::NonzeroConstantTerm { op: "exp_series" });
        }
        let mut acc = Series::one(self.trunc);
        let mut term = Series::one(self.trunc);
        for j in 1..=self.trunc as i64 {
            term = term.mul(self)?;
            if term.is_empty() {
                break;
            }
            term = term.map_coeffs(|c| c.div_int(j));
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// log(1 + a) for a series with zero constant term.
    pub fn log1p_series(&self) -> Result<Self, SeriesError> {
        if !self.coeff(0, 0).is_zero() {
            return Err(SeriesError::NonzeroConstantTerm {
                op: "log1p_series",
            });
        }
        let mut acc = Series::zero(self.trunc);
        let mut pow = Series::one(self.trunc);
        for j in 1..=self.trunc as i64 {
            pow = pow.mul(self)?;
            if pow.is_empty() {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&pow.map_coeffs(|c| c.div_int(sign * j)))?;
        }
        Ok(acc)
    }

    fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut coeffs = BTreeMap::new();
        for (&k, c) in &self.coeffs {
            let v = f(c);
            if !v.is_zero() {
                coeffs.insert(k, v);
            }
        }
        Series {
            coeffs,
            trunc: self.trunc,
        }
    }

    /// Numeric evaluation at (z, w). Exact coefficients are converted on the
    /// fly. Groups share a Horner pass in w; groups are summed in ascending
    /// alpha, so the summation order is the lexicographic term order.
    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut zpow = Complex64::new(1.0, 0.0);
        let mut zexp = 0u32;
        let mut entries = self.coeffs.iter().peekable();
        while let Some((&(alpha, _), _)) = entries.peek() {
            let group: Vec<(u32, Complex64)> = {
                let mut g = Vec::new();
                while let Some((&(a, b), c)) = entries.peek() {
                    if a != alpha {
                        break;
                    }
                    g.push((b, c.to_c64()));
                    entries.next();
                }
                g
            };
            // Horner in w over the group, highest beta first.
            let mut inner = Complex64::new(0.0, 0.0);
            let mut prev_beta: Option<u32> = None;
            for &(beta, c) in group.iter().rev() {
                if let Some(pb) = prev_beta {
                    inner *= w.powu(pb - beta);
                }
                inner += c;
                prev_beta = Some(beta);
            }
            if let Some(pb) = prev_beta {
                inner *= w.powu(pb);
            }
            while zexp < alpha {
                zpow *= z;
                zexp += 1;
            }
            acc += zpow * inner;
        }
        acc
    }

    /// Evaluation inside the coefficient domain (used for exact indices).
    pub fn eval_in_domain(&self, z: &C, w: &C) -> C {
        let mut acc = C::zero();
        for (&(a, b), c) in &self.coeffs {
            let mut term = c.clone();
            for _ in 0..a {
                term = term.mul(z);
            }
            for _ in 0..b {
                term = term.mul(w);
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Exchange the roles of z and w (exponent transpose).
    pub fn swap_vars(&self) -> Self {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&(a, b), c)| ((b, a), c.clone()))
                .collect(),
            trunc: self.trunc,
        }
    }

    /// Largest coefficient modulus (0 for the zero series).
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.to_c64().norm())
            .fold(0.0, f64::max)
    }

    fn check_trunc(&self, rhs: &Self) -> Result<(), SeriesError> {
        if self.trunc != rhs.trunc {
            return Err(SeriesError::TruncationMismatch {
                left: self.trunc,
                right: rhs.trunc,
            });
        }
        Ok(())
    }
}

impl Series<GaussianRational> {
    /// Lossy conversion into the float domain (same truncation order).
    pub fn to_float(&self) -> Series<Complex64> {
        let mut out = Series::zero(self.trunc);
        for (&(a, b), c) in &self.coeffs {
            out.insert(a, b, c.to_c64())
                .expect("degrees preserved by conversion");
        }
        out
    }
}

impl<C: Coeff> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<(u32, u32)> = self.coeffs.keys().cloned().collect();
        keys.sort_by_key(|&(a, b)| (a + b, a));
        for (i, &(a, b)) in keys.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let c = &self.coeffs[&(a, b)];
            write!(f, "({c})")?;
            if a == 1 {
                write!(f, "*z")?;
            } else if a > 1 {
                write!(f, "*z^{a}")?;
            }
            if b == 1 {
                write!(f, "*w")?;
            } else if b > 1 {
                write!(f, "*w^{b}")?;
            }
        }
        Ok(())
    }
}
