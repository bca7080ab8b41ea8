//! Complex polynomial root finding.
//!
//! The floating path runs a simultaneous (Aberth) iteration: all roots are
//! refined together, which converges fast and does not need deflation in
//! floating arithmetic. The exact path factors a Gaussian-rational
//! polynomial by reconstructing rational candidates from the floating roots
//! and verifying them with exact division; it reports `None` when the
//! polynomial does not split over the Gaussian rationals, and the caller
//! decides how to fall back.
//!
//! Polynomials are coefficient slices indexed by ascending power.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::coeff::{Coeff, GaussianRational};

/// Accepted relative backward error of a reported root: |p(u)| measured
/// against sum_i |a_i| |u|^i.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Converged roots closer than this are merged into one root with summed
/// multiplicity.
pub const CLUSTER_THRESHOLD: f64 = 1e-7;

/// Iteration sweeps before the solver gives up.
const MAX_SWEEPS: usize = 500;

/// Internal stopping tolerance, tighter than the promised residual so the
/// polishing step has headroom.
const SWEEP_TOL: f64 = 1e-13;

/// Largest denominator the rational reconstruction will propose.
const MAX_RECONSTRUCTED_DEN: u64 = 1_000_000;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum RootError {
    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("root iteration did not converge within {sweeps} sweeps; the polynomial is ill-conditioned at this precision")]
    NonConvergence { sweeps: usize },
}

/// Bitwise zero test; distinct from the Coeff trait method to avoid
/// colliding with num_traits::Zero on Complex64.
fn czero(z: Complex64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

/// All complex roots of the polynomial with multiplicities.
///
/// Exact zero coefficients at the low end are stripped first, so a root at
/// u = 0 is reported exactly. The remaining roots come from the Aberth
/// iteration followed by a Newton polish; roots within [`CLUSTER_THRESHOLD`]
/// of each other are merged with summed multiplicity and their mean as the
/// representative. Every representative satisfies the [`RESIDUAL_TOL`]
/// backward-error bound against the input polynomial.
pub fn complex_roots(coeffs: &[Complex64]) -> Result<Vec<(Complex64, u32)>, RootError> {
    let top = match coeffs.iter().rposition(|c| !czero(*c)) {
        Some(i) => i,
        None => return Err(RootError::ZeroPolynomial),
    };
    let trimmed = &coeffs[..=top];
    let low = trimmed.iter().position(|c| !czero(*c)).expect("nonzero");
    let stripped = &trimmed[low..];

    let mut clusters: Vec<(Complex64, u32)> = Vec::new();
    if low > 0 {
        clusters.push((Complex64::new(0.0, 0.0), low as u32));
    }
    let degree = stripped.len() - 1;
    let raw = if degree == 0 {
        Vec::new()
    } else if degree == 1 {
        vec![-stripped[0] / stripped[1]]
    } else {
        aberth(stripped)?
    };
    let mut polished: Vec<Complex64> = raw
        .into_iter()
        .map(|root| newton_polish(stripped, root))
        .collect();
    refine_stalled_groups(stripped, &mut polished);
    for root in polished {
        merge_into_clusters(&mut clusters, root);
    }
    let result: Vec<(Complex64, u32)> = clusters
        .into_iter()
        .map(|(sum, count)| {
            // The exact zero root is kept verbatim; averaging would smear it.
            if czero(sum) {
                (sum, count)
            } else {
                (sum / count as f64, count)
            }
        })
        .collect();
    for (root, _) in &result {
        if relative_residual(coeffs, *root) > RESIDUAL_TOL {
            return Err(RootError::NonConvergence { sweeps: MAX_SWEEPS });
        }
    }
    Ok(result)
}

fn merge_into_clusters(clusters: &mut Vec<(Complex64, u32)>, root: Complex64) {
    for (sum, count) in clusters.iter_mut() {
        let rep = if czero(*sum) {
            *sum
        } else {
            *sum / *count as f64
        };
        if (rep - root).norm() <= CLUSTER_THRESHOLD {
            // A root merged into the exact-zero cluster keeps the exact
            // representative.
            if !czero(*sum) {
                *sum += root;
            }
            *count += 1;
            return;
        }
    }
    clusters.push((root, 1));
}

fn aberth(coeffs: &[Complex64]) -> Result<Vec<Complex64>, RootError> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max);
    // The irrational angular offset breaks any symmetry the root set shares
    // with the starting circle.
    let offset = 0.618;
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            Complex64::from_polar(
                radius,
                offset + std::f64::consts::TAU * j as f64 / n as f64,
            )
        })
        .collect();
    for _ in 0..MAX_SWEEPS {
        let mut all_converged = true;
        for j in 0..n {
            let (p, dp) = eval_with_derivative(coeffs, z[j]);
            if p.norm() <= SWEEP_TOL * backward_scale(coeffs, z[j]) {
                continue;
            }
            all_converged = false;
            if czero(dp) {
                // A critical point; step off it and retry next sweep.
                z[j] += Complex64::new(1e-6 * radius, 1e-6 * radius);
                continue;
            }
            let newton = p / dp;
            let mut repulsion = Complex64::new(0.0, 0.0);
            let mut coincident = false;
            for k in 0..n {
                if k == j {
                    continue;
                }
                let d = z[j] - z[k];
                if czero(d) {
                    coincident = true;
                } else {
                    repulsion += d.inv();
                }
            }
            if coincident {
                z[j] += Complex64::new(1e-6 * radius, -1e-6 * radius);
                continue;
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if czero(denom) { newton } else { newton / denom };
            z[j] -= step;
        }
        if all_converged {
            return Ok(z);
        }
    }
    Err(RootError::NonConvergence { sweeps: MAX_SWEEPS })
}

/// A few Newton steps, keeping the iterate with the smallest relative
/// residual. Near a double root Newton contracts only linearly, but that is
/// what pulls the two cluster members inside the clustering threshold.
fn newton_polish(coeffs: &[Complex64], start: Complex64) -> Complex64 {
    let mut best = start;
    let mut best_res = relative_residual(coeffs, start);
    let mut z = start;
    for _ in 0..8 {
        let (p, dp) = eval_with_derivative(coeffs, z);
        if czero(dp) {
            break;
        }
        z -= p / dp;
        let res = relative_residual(coeffs, z);
        if res <= best_res {
            best = z;
            best_res = res;
        }
    }
    best
}

/// Coarse radius, relative to the root magnitude, at which a group of
/// converged iterates is suspected of sharing one multiple root.
const GROUP_DETECTION_RADIUS: f64 = 1e-2;

/// A group refinement is always accepted when the refined point's relative
/// backward error is at most this: such a point is a root of a polynomial
/// this close to the input, far inside the final certification tolerance.
const GROUP_ACCEPT_REL: f64 = 1e-12;

/// Members of a root cluster of multiplicity m stall at a forward error of
/// roughly the m-th root of the working precision, which can exceed the
/// clustering radius. Detect suspicious groups at a coarse radius and
/// re-solve each on the (m-1)-th derivative, where an m-fold root is simple
/// and Newton reaches machine accuracy; accepted members collapse onto the
/// refined point. The refinement is accepted when its backward error is
/// certifiably small or at least no worse than the group's best member, so
/// genuinely distinct nearby roots, whose critical point in between has a
/// much larger residual, are left alone.
fn refine_stalled_groups(coeffs: &[Complex64], roots: &mut [Complex64]) {
    let n = roots.len();
    let mut assigned = vec![false; n];
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let mut group = vec![i];
        for j in (i + 1)..n {
            if !assigned[j] && close_coarse(roots[i], roots[j]) {
                group.push(j);
            }
        }
        if group.len() < 2 {
            continue;
        }
        for &k in &group {
            assigned[k] = true;
        }
        let m = group.len();
        let mean = group.iter().map(|&k| roots[k]).sum::<Complex64>() / m as f64;
        let mut derived = coeffs.to_vec();
        for _ in 1..m {
            derived = derivative_coeffs(&derived);
        }
        if derived.len() < 2 {
            continue;
        }
        let mut z = mean;
        for _ in 0..12 {
            let (p, dp) = eval_with_derivative(&derived, z);
            if czero(dp) {
                break;
            }
            let step = p / dp;
            z -= step;
            if step.norm() <= 1e-16 * z.norm().max(1.0) {
                break;
            }
        }
        let best_member = group
            .iter()
            .map(|&k| relative_residual(coeffs, roots[k]))
            .fold(f64::INFINITY, f64::min);
        let wandered = (z - mean).norm() > 0.1 * mean.norm().max(1.0);
        let accept = (100.0 * best_member.max(1e-18)).max(GROUP_ACCEPT_REL);
        if !wandered && relative_residual(coeffs, z) <= accept {
            for &k in &group {
                roots[k] = z;
            }
        }
    }
}

fn close_coarse(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= GROUP_DETECTION_RADIUS * a.norm().max(b.norm()).max(1.0)
}

fn derivative_coeffs(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect()
}

/// Horner evaluation of p and p' in one pass.
fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// sum_i |a_i| |z|^i, the natural scale for a backward-error test.
fn backward_scale(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

fn relative_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let (p, _) = eval_with_derivative(coeffs, z);
    let scale = backward_scale(coeffs, z);
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// Factor a Gaussian-rational polynomial into linear factors, if it splits
/// over the Gaussian rationals.
///
/// Floating roots seed rational candidates (continued-fraction convergents
/// of the real and imaginary parts); each candidate is verified by exact
/// division and deflated to its full multiplicity. When the polynomial is
/// reduced to a constant the factorization is complete; `Ok(None)` means
/// some factor resisted reconstruction and the caller should fall back to
/// floating arithmetic.
pub fn exact_roots(
    coeffs: &[GaussianRational],
) -> Result<Option<Vec<(GaussianRational, u32)>>, RootError> {
    let top = match coeffs.iter().rposition(|c| !c.is_zero()) {
        Some(i) => i,
        None => return Err(RootError::ZeroPolynomial),
    };
    let trimmed = &coeffs[..=top];
    let low = trimmed.iter().position(|c| !c.is_zero()).expect("nonzero");

    let mut found: Vec<(GaussianRational, u32)> = Vec::new();
    if low > 0 {
        found.push((GaussianRational::from_i64(0, 0), low as u32));
    }
    let mut work: Vec<GaussianRational> = trimmed[low..].to_vec();
    loop {
        if work.len() == 1 {
            return Ok(Some(found));
        }
        if work.len() == 2 {
            let root = work[0].div(&work[1]).neg();
            push_root(&mut found, root, 1);
            return Ok(Some(found));
        }
        let float_image: Vec<Complex64> = work.iter().map(Coeff::to_c64).collect();
        let numeric = complex_roots(&float_image)?;
        let mut progress = false;
        for (rep, _) in numeric {
            for candidate in gaussian_candidates(rep) {
                let mut multiplicity = 0u32;
                while work.len() > 1 {
                    match deflate_exact(&work, &candidate) {
                        Some(quotient) => {
                            work = quotient;
                            multiplicity += 1;
                        }
                        None => break,
                    }
                }
                if multiplicity > 0 {
                    push_root(&mut found, candidate, multiplicity);
                    progress = true;
                    break;
                }
            }
            if work.len() == 1 {
                return Ok(Some(found));
            }
        }
        if !progress {
            return Ok(None);
        }
    }
}

fn push_root(found: &mut Vec<(GaussianRational, u32)>, root: GaussianRational, mult: u32) {
    for (existing, m) in found.iter_mut() {
        if *existing == root {
            *m += mult;
            return;
        }
    }
    found.push((root, mult));
}

/// Divide by (u - root), returning the quotient when the remainder is
/// exactly zero.
fn deflate_exact(
    coeffs: &[GaussianRational],
    root: &GaussianRational,
) -> Option<Vec<GaussianRational>> {
    let n = coeffs.len() - 1;
    debug_assert!(n >= 1);
    let mut quotient = vec![GaussianRational::from_i64(0, 0); n];
    quotient[n - 1] = coeffs[n].clone();
    for i in (1..n).rev() {
        quotient[i - 1] = coeffs[i].add(&root.mul(&quotient[i]));
    }
    let remainder = coeffs[0].add(&root.mul(&quotient[0]));
    if remainder.is_zero() {
        Some(quotient)
    } else {
        None
    }
}

/// Rational candidates for both parts of a floating root, smallest
/// denominators first. A root of multiplicity m is only accurate to roughly
/// the m-th root of the working precision, so rather than trusting one
/// reconstruction we enumerate continued-fraction convergents and let the
/// exact division decide.
fn gaussian_candidates(z: Complex64) -> Vec<GaussianRational> {
    let res = convergents(z.re);
    let ims = convergents(z.im);
    let mut out = Vec::with_capacity(res.len() * ims.len());
    for re in &res {
        for im in &ims {
            out.push(GaussianRational::new(re.clone(), im.clone()));
        }
    }
    out
}

/// Continued-fraction convergents of `x` with denominators up to
/// [`MAX_RECONSTRUCTED_DEN`], deduplicated, closest first.
fn convergents(x: f64) -> Vec<BigRational> {
    if !x.is_finite() {
        return Vec::new();
    }
    if x == 0.0 {
        return vec![BigRational::zero()];
    }
    let max_den = BigInt::from(MAX_RECONSTRUCTED_DEN);
    let mut out: Vec<BigRational> = Vec::new();
    let mut p_prev = BigInt::zero();
    let mut q_prev = BigInt::one();
    let mut p_curr = BigInt::one();
    let mut q_curr = BigInt::zero();
    let mut frac = x;
    for _ in 0..32 {
        let floor = frac.floor();
        if floor.abs() > 9.0e15 {
            break;
        }
        let a = BigInt::from(floor as i64);
        let p = &a * &p_curr + &p_prev;
        let q = &a * &q_curr + &q_prev;
        if q.abs() > max_den {
            break;
        }
        out.push(BigRational::new(p.clone(), q.clone()));
        let rem = frac - floor;
        if rem.abs() < 1e-15 {
            break;
        }
        frac = 1.0 / rem;
        p_prev = p_curr;
        q_prev = q_curr;
        p_curr = p;
        q_curr = q;
    }
    // Later convergents approximate better; try them first.
    out.reverse();
    out.dedup();
    out
}
