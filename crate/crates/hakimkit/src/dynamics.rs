//! Floating-point orbit iteration and basin rasterization.
//!
//! Everything here iterates the *polynomial model*: a truncated jet is not
//! the automorphism it approximates, so all dynamical statements are about
//! the truncated map itself. Callers presenting results should state the
//! truncation order alongside any raster or orbit.
//!
//! Convergence to the origin of a tangent-to-identity map is algebraic
//! (norms decay like a power of 1/n), not geometric, so the
//! converged-to-origin test is a three-part heuristic rather than a plain
//! threshold: the norm must sit below the convergence radius for a full
//! confirmation window, must not have grown across that window, and
//! n·‖x_n‖ must stay within an adaptive bound fixed when the orbit first
//! enters the ball (exact for second-order maps, conservative for higher
//! orders). The test assumes the origin is the only attractor inside the
//! convergence radius; pick `r_conv` below the distance to any other
//! attractor.

use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::hakim::ProjectiveDirection;
use crate::maps::TangentMap;

/// Steps the orbit must spend inside the convergence ball, and the lookback
/// used for the norm-trend and stall tests.
const CONFIRMATION_WINDOW: usize = 100;

/// Number of trailing projective positions averaged into the tangent
/// estimate.
const TANGENT_WINDOW: usize = 10;

/// Relative step size below which an orbit away from the origin counts as
/// stalled at some other limit point.
const STALL_TOL: f64 = 1e-13;

/// Chordal distance threshold for matching a tangent estimate to a
/// characteristic direction.
pub const TANGENT_MATCH_THRESHOLD: f64 = 0.05;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("convergence radius {r_conv} must be smaller than escape radius {r_escape}")]
    InvalidRadii { r_conv: f64, r_escape: f64 },
    #[error("window has zero area (half extents {0} x {1})")]
    EmptyWindow(f64, f64),
    #[error("resolution {0}x{1} has no pixels")]
    ZeroResolution(u32, u32),
}

/// How an orbit ended.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrbitOutcome {
    ConvergedToOrigin,
    ConvergedElsewhere,
    Escaped,
    Undecided,
}

impl OrbitOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            OrbitOutcome::ConvergedToOrigin => "converged-to-origin",
            OrbitOutcome::ConvergedElsewhere => "converged-elsewhere",
            OrbitOutcome::Escaped => "escaped",
            OrbitOutcome::Undecided => "undecided",
        }
    }
}

/// Iteration limits and radii. `r_conv` bounds the ball in which origin
/// convergence is confirmed; crossing `r_escape` (or any non-finite
/// arithmetic) counts as escape.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct OrbitParams {
    pub max_iter: u32,
    pub r_conv: f64,
    pub r_escape: f64,
}

impl Default for OrbitParams {
    fn default() -> Self {
        OrbitParams {
            max_iter: 100_000,
            r_conv: 1e-3,
            r_escape: 1e6,
        }
    }
}

impl OrbitParams {
    fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.r_conv < self.r_escape) {
            return Err(DynamicsError::InvalidRadii {
                r_conv: self.r_conv,
                r_escape: self.r_escape,
            });
        }
        Ok(())
    }
}

/// One iterated orbit.
#[derive(Clone, PartialEq, Debug)]
pub struct OrbitRecord {
    /// Trajectory including the start point; empty when the orbit was
    /// iterated without recording (rasters).
    pub points: Vec<(Complex64, Complex64)>,
    pub outcome: OrbitOutcome,
    /// Unit tangent vector at the origin with canonical phase (largest
    /// component real positive), averaged over the last
    /// [`TANGENT_WINDOW`] projective positions. Present exactly when the
    /// outcome is [`OrbitOutcome::ConvergedToOrigin`].
    pub tangent_estimate: Option<(Complex64, Complex64)>,
    /// Map applications performed before the outcome was decided.
    pub iterations_used: u32,
}

impl OrbitRecord {
    /// The tangent estimate as a projective point, when present.
    pub fn tangent_direction(&self) -> Option<ProjectiveDirection<Complex64>> {
        self.tangent_estimate.map(|(v1, v2)| {
            // The first coordinate only vanishes when the orbit hugs the
            // w-axis, in which case the direction is (0, 1).
            if v1.norm() <= 1e-8 {
                ProjectiveDirection::Infinity
            } else {
                ProjectiveDirection::Finite(v2 / v1)
            }
        })
    }
}

fn norm2(p: (Complex64, Complex64)) -> f64 {
    (p.0.norm_sqr() + p.1.norm_sqr()).sqrt()
}

fn canonical_unit(p: (Complex64, Complex64)) -> Option<(Complex64, Complex64)> {
    let n = norm2(p);
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    let (v1, v2) = (p.0 / n, p.1 / n);
    let lead = if v1.norm() >= v2.norm() { v1 } else { v2 };
    let phase = lead / lead.norm();
    Some((v1 * phase.conj(), v2 * phase.conj()))
}

/// Chordal (Fubini-Study) distance between two directions given by
/// homogeneous coordinates: sqrt(1 - |<u, v>|^2) after normalization.
pub fn chordal_distance(a: (Complex64, Complex64), b: (Complex64, Complex64)) -> f64 {
    let (na, nb) = (norm2(a), norm2(b));
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    let inner = (a.0 * b.0.conj() + a.1 * b.1.conj()).norm() / (na * nb);
    (1.0 - (inner * inner).min(1.0)).max(0.0).sqrt()
}

/// Iterate one orbit, recording the full trajectory.
pub fn iterate_orbit(
    f: &TangentMap<Complex64>,
    start: (Complex64, Complex64),
    params: &OrbitParams,
) -> Result<OrbitRecord, DynamicsError> {
    iterate(f, start, params, true)
}

/// Iterate one orbit without storing the trajectory: only the outcome,
/// iteration count, and tangent estimate. Suitable for statistics over
/// large batches of starting points, where keeping every point would
/// dominate memory.
pub fn iterate_orbit_summary(
    f: &TangentMap<Complex64>,
    start: (Complex64, Complex64),
    params: &OrbitParams,
) -> Result<OrbitRecord, DynamicsError> {
    iterate(f, start, params, false)
}

fn iterate(
    f: &TangentMap<Complex64>,
    start: (Complex64, Complex64),
    params: &OrbitParams,
    record_points: bool,
) -> Result<OrbitRecord, DynamicsError> {
    params.validate()?;
    let mut points = Vec::new();
    if record_points {
        points.reserve(params.max_iter as usize + 1);
        points.push(start);
    }

    // Ring buffers over the confirmation window: norms (for the trend
    // test) and step sizes (for the stall test), plus recent projective
    // positions for the tangent estimate.
    let window = CONFIRMATION_WINDOW;
    let mut norms = vec![f64::NAN; window + 1];
    let mut steps = vec![f64::NAN; window];
    let mut tangents: Vec<(Complex64, Complex64)> = Vec::with_capacity(TANGENT_WINDOW);
    let mut tangent_next = 0usize;

    let mut x = start;
    norms[0] = norm2(x);
    let mut inside_streak = 0usize;
    let mut entry_bound = f64::INFINITY;
    let mut outcome = OrbitOutcome::Undecided;
    let mut used = params.max_iter;

    for n in 1..=params.max_iter {
        let next = f.eval_map(x.0, x.1);
        let step = norm2((next.0 - x.0, next.1 - x.1));
        x = next;
        if record_points {
            points.push(x);
        }
        let norm = norm2(x);
        let ni = n as usize;
        norms[ni % (window + 1)] = norm;
        steps[(ni - 1) % window] = step;

        if !norm.is_finite() || norm > params.r_escape {
            outcome = OrbitOutcome::Escaped;
            used = n;
            break;
        }

        if let Some(unit) = canonical_unit(x) {
            if tangents.len() < TANGENT_WINDOW {
                tangents.push(unit);
            } else {
                tangents[tangent_next] = unit;
            }
            tangent_next = (tangent_next + 1) % TANGENT_WINDOW;
        }

        if norm < params.r_conv {
            inside_streak += 1;
            if inside_streak == 1 {
                entry_bound = 10.0 * (n as f64 * norm).max(1.0);
            }
            if inside_streak >= window {
                let past = norms[(ni - window) % (window + 1)];
                if norm <= past && (n as f64) * norm <= entry_bound {
                    outcome = OrbitOutcome::ConvergedToOrigin;
                    used = n;
                    break;
                }
            }
        } else {
            inside_streak = 0;
            entry_bound = f64::INFINITY;
            if ni >= window {
                let max_step = steps.iter().fold(0.0f64, |m, &s| m.max(s));
                let moved = norm2((x.0 - start.0, x.1 - start.1))
                    > STALL_TOL * (1.0 + norm2(start));
                if max_step <= STALL_TOL * (1.0 + norm) && moved {
                    outcome = OrbitOutcome::ConvergedElsewhere;
                    used = n;
                    break;
                }
            }
        }
    }

    let tangent_estimate = if outcome == OrbitOutcome::ConvergedToOrigin {
        let mut sum = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for &(v1, v2) in &tangents {
            sum.0 += v1;
            sum.1 += v2;
        }
        canonical_unit(sum)
    } else {
        None
    };

    Ok(OrbitRecord {
        points,
        outcome,
        tangent_estimate,
        iterations_used: used,
    })
}

/// Which complex line of C² a raster samples. The raster parameter runs
/// over a rectangle in one complex coordinate; the slice maps it to a
/// start point.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum SliceSpec {
    /// w = u·z; the parameter is z.
    Direction(Complex64),
    /// w fixed; the parameter is z.
    FixedW(Complex64),
    /// z fixed; the parameter is w.
    FixedZ(Complex64),
}

impl SliceSpec {
    pub fn start_point(&self, s: Complex64) -> (Complex64, Complex64) {
        match *self {
            SliceSpec::Direction(u) => (s, u * s),
            SliceSpec::FixedW(w0) => (s, w0),
            SliceSpec::FixedZ(z0) => (z0, s),
        }
    }
}

/// Closed rectangle in one complex coordinate: center and half-extents.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Window {
    pub center: Complex64,
    pub half_extent: (f64, f64),
}

impl Window {
    pub fn square(center: Complex64, half: f64) -> Self {
        Window {
            center,
            half_extent: (half, half),
        }
    }
}

/// Outcome and iteration count for one raster pixel.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct PixelOutcome {
    pub outcome: OrbitOutcome,
    pub iterations: u32,
}

/// A rendered basin slice. Pixels are row-major; row 0 is the top of the
/// window (largest imaginary part), and each pixel samples its center.
#[derive(Clone, PartialEq, Debug)]
pub struct BasinRaster {
    pub width: u32,
    pub height: u32,
    pub window: Window,
    pub slice: SliceSpec,
    pub params: OrbitParams,
    pub pixels: Vec<PixelOutcome>,
}

impl BasinRaster {
    /// Fraction of pixels with the given outcome.
    pub fn fraction(&self, outcome: OrbitOutcome) -> f64 {
        if self.pixels.is_empty() {
            return 0.0;
        }
        let hits = self.pixels.iter().filter(|p| p.outcome == outcome).count();
        hits as f64 / self.pixels.len() as f64
    }

    /// Center of the pixel at column i, row j, in the raster parameter.
    pub fn pixel_center(&self, i: u32, j: u32) -> Complex64 {
        let (hx, hy) = self.window.half_extent;
        let re = self.window.center.re - hx + (2.0 * hx) * ((i as f64 + 0.5) / self.width as f64);
        let im = self.window.center.im + hy - (2.0 * hy) * ((j as f64 + 0.5) / self.height as f64);
        Complex64::new(re, im)
    }
}

/// Classify every pixel of a window on a slice by iterating its center.
///
/// Rows are computed in parallel on the ambient rayon pool; each pixel is
/// a pure function of its start point, so the result is identical for any
/// thread count.
pub fn render_basin(
    f: &TangentMap<Complex64>,
    slice: SliceSpec,
    window: Window,
    resolution: (u32, u32),
    params: &OrbitParams,
) -> Result<BasinRaster, DynamicsError> {
    params.validate()?;
    let (width, height) = resolution;
    if width == 0 || height == 0 {
        return Err(DynamicsError::ZeroResolution(width, height));
    }
    let (hx, hy) = window.half_extent;
    if !(hx > 0.0 && hy > 0.0) {
        return Err(DynamicsError::EmptyWindow(hx, hy));
    }

    let mut raster = BasinRaster {
        width,
        height,
        window,
        slice,
        params: *params,
        pixels: Vec::new(),
    };

    let rows: Vec<Vec<PixelOutcome>> = (0..height)
        .into_par_iter()
        .map(|j| {
            (0..width)
                .map(|i| {
                    let s = raster.pixel_center(i, j);
                    let rec = iterate(f, slice.start_point(s), params, false)
                        .expect("params validated before dispatch");
                    PixelOutcome {
                        outcome: rec.outcome,
                        iterations: rec.iterations_used,
                    }
                })
                .collect()
        })
        .collect();

    raster.pixels = rows.into_iter().flatten().collect();
    Ok(raster)
}

/// Tangent-direction histogram over the converged orbits of a batch.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TangentHistogram {
    /// Matches per supplied direction, in the same order.
    pub per_direction: Vec<usize>,
    /// Converged orbits whose tangent was farther than
    /// [`TANGENT_MATCH_THRESHOLD`] from every supplied direction.
    pub unmatched: usize,
    /// Number of converged-to-origin records seen.
    pub total_converged: usize,
}

/// Cluster the tangent estimates of converged orbits against a set of
/// directions by nearest chordal distance.
pub fn tangent_statistics(
    records: &[OrbitRecord],
    directions: &[ProjectiveDirection<Complex64>],
) -> TangentHistogram {
    let targets: Vec<(Complex64, Complex64)> =
        directions.iter().map(|d| d.coordinates()).collect();
    let mut per_direction = vec![0usize; targets.len()];
    let mut unmatched = 0usize;
    let mut total_converged = 0usize;
    for rec in records {
        let Some(estimate) = rec.tangent_estimate else {
            continue;
        };
        total_converged += 1;
        let mut best: Option<(usize, f64)> = None;
        for (idx, &t) in targets.iter().enumerate() {
            let d = chordal_distance(estimate, t);
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((idx, d));
            }
        }
        match best {
            Some((idx, d)) if d <= TANGENT_MATCH_THRESHOLD => per_direction[idx] += 1,
            _ => unmatched += 1,
        }
    }
    TangentHistogram {
        per_direction,
        unmatched,
        total_converged,
    }
}

/// Write a raster as binary PPM (P6).
///
/// Palette: converged-to-origin pixels ramp from white (instant) to blue
/// (needed every iteration) by iteration count; escaped pixels are black;
/// undecided gray; converged-elsewhere red.
pub fn write_ppm<W: Write>(raster: &BasinRaster, out: &mut W) -> io::Result<()> {
    write!(out, "P6\n{} {}\n255\n", raster.width, raster.height)?;
    let max_iter = raster.params.max_iter.max(1) as f64;
    let mut bytes = Vec::with_capacity(raster.pixels.len() * 3);
    for p in &raster.pixels {
        let rgb: [u8; 3] = match p.outcome {
            OrbitOutcome::ConvergedToOrigin => {
                let t = (p.iterations as f64 / max_iter).clamp(0.0, 1.0);
                let fade = (255.0 * (1.0 - t)).round() as u8;
                [fade, fade, 255]
            }
            OrbitOutcome::Escaped => [0, 0, 0],
            OrbitOutcome::Undecided => [128, 128, 128],
            OrbitOutcome::ConvergedElsewhere => [255, 0, 0],
        };
        bytes.extend_from_slice(&rgb);
    }
    out.write_all(&bytes)
}

/// Write orbit trajectories as RFC 4180 CSV with CRLF line endings and
/// columns `iter,re(z),im(z),re(w),im(w)`. Records are concatenated; the
/// `iter` column restarts at 0 on each record boundary.
pub fn write_orbit_csv<W: Write>(records: &[OrbitRecord], out: &mut W) -> io::Result<()> {
    write!(out, "iter,re(z),im(z),re(w),im(w)\r\n")?;
    for rec in records {
        for (i, (z, w)) in rec.points.iter().enumerate() {
            write!(out, "{},{},{},{},{}\r\n", i, z.re, z.im, w.re, w.im)?;
        }
    }
    Ok(())
}
