//! Piecewise paths with tangential endpoint data.
//!
//! A path is a sequence of segments (lines, circular arcs, cubic Béziers)
//! with exact data, parametrized uniformly: segment `i` of `n` covers
//! `t in [i/n, (i+1)/n]`.  The endpoints carry basepoints of a scene; at a
//! puncture-anchored (tangential) end the parametrization's one-jet is part
//! of the contract: `gamma'(0)` must equal the declared tangent exactly, and
//! `gamma'(1)` must equal minus the declared end tangent (end tangents point
//! away from the path).
//!
//! [`validate_path`] certifies, not samples: continuity and tangency are
//! exact checks, and puncture clearance is established through conservative
//! geometric bounds (exact point/segment distances for lines, circle geometry
//! for arcs, bounding boxes under de Casteljau subdivision for Béziers).
//! Near an anchored puncture the first-order bound
//! `|gamma(u) - a| >= |v| u - K u^2 / 2` exempts a provably clean initial
//! piece.  Arc endpoints are exact only at quarter turns; arcs anchored at
//! punctures or joined away from quarter turns are reported as uncertifiable.
//!
//! Composition concatenates segment lists.  Because the merged path is again
//! uniformly parametrized, the one-jets at the outer ends are rescaled by the
//! segment-count ratio; a composite with tangential outer ends is therefore
//! generally *invalid* as declared, and [`validate_path`] will say so.  Use
//! ordinary-anchored pieces (or reparametrized halves) when composing across
//! tangential data.

use crate::exact::{ExactComplex, ExactScalar};
use crate::geom::{Anchor, GeomError, Scene, TangentialBasepoint};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use std::f64::consts::TAU;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PathError {
    #[error("path has no segments")]
    Empty,
    #[error("arc radius must be positive")]
    BadRadius,
    #[error("arc has zero angular extent")]
    EmptyArc,
    #[error("degenerate segment {0} (zero length)")]
    DegenerateSegment(usize),
    #[error("scene error: {0}")]
    Geom(#[from] GeomError),
    #[error("paths cannot be composed: {0}")]
    Composition(String),
}

/// One path segment with exact data.  Arc angles are in turns (1 = full
/// counterclockwise circle); `to_turns < from_turns` traverses clockwise.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Segment {
    Line {
        from: ExactComplex,
        to: ExactComplex,
    },
    Arc {
        center: ExactComplex,
        radius: ExactScalar,
        from_turns: ExactScalar,
        to_turns: ExactScalar,
    },
    Bezier {
        p0: ExactComplex,
        p1: ExactComplex,
        p2: ExactComplex,
        p3: ExactComplex,
    },
}

impl Segment {
    /// Exact start point, when expressible (arcs only at quarter turns).
    pub fn start_exact(&self) -> Option<ExactComplex> {
        match self {
            Segment::Line { from, .. } => Some(from.clone()),
            Segment::Bezier { p0, .. } => Some(p0.clone()),
            Segment::Arc {
                center,
                radius,
                from_turns,
                ..
            } => arc_point_exact(center, radius, from_turns),
        }
    }

    pub fn end_exact(&self) -> Option<ExactComplex> {
        match self {
            Segment::Line { to, .. } => Some(to.clone()),
            Segment::Bezier { p3, .. } => Some(p3.clone()),
            Segment::Arc {
                center,
                radius,
                to_turns,
                ..
            } => arc_point_exact(center, radius, to_turns),
        }
    }

    /// Exact local derivative at the start (lines and Béziers only).
    pub fn start_deriv_exact(&self) -> Option<ExactComplex> {
        match self {
            Segment::Line { from, to } => Some(to - from),
            Segment::Bezier { p0, p1, .. } => {
                let three = ExactComplex::from_int(3, 0);
                Some(&three * &(p1 - p0))
            }
            Segment::Arc { .. } => None,
        }
    }

    pub fn end_deriv_exact(&self) -> Option<ExactComplex> {
        match self {
            Segment::Line { from, to } => Some(to - from),
            Segment::Bezier { p2, p3, .. } => {
                let three = ExactComplex::from_int(3, 0);
                Some(&three * &(p3 - p2))
            }
            Segment::Arc { .. } => None,
        }
    }

    /// Position and local derivative at local parameter `u in [0,1]`.
    pub fn eval(&self, u: f64) -> (Complex64, Complex64) {
        match self {
            Segment::Line { from, to } => {
                let a = from.to_c64();
                let b = to.to_c64();
                (a + (b - a) * u, b - a)
            }
            Segment::Bezier { p0, p1, p2, p3 } => {
                let (a, b, c, d) = (p0.to_c64(), p1.to_c64(), p2.to_c64(), p3.to_c64());
                let v = 1.0 - u;
                let z = a * v * v * v
                    + b * 3.0 * v * v * u
                    + c * 3.0 * v * u * u
                    + d * u * u * u;
                let dz = (b - a) * 3.0 * v * v
                    + (c - b) * 6.0 * v * u
                    + (d - c) * 3.0 * u * u;
                (z, dz)
            }
            Segment::Arc {
                center,
                radius,
                from_turns,
                to_turns,
            } => {
                let c = center.to_c64();
                let r = radius.to_f64();
                let t0 = from_turns.to_f64();
                let t1 = to_turns.to_f64();
                let th = TAU * (t0 + (t1 - t0) * u);
                let e = Complex64::new(th.cos(), th.sin());
                let z = c + e * r;
                let dz = Complex64::new(0.0, TAU * (t1 - t0) * r) * e;
                (z, dz)
            }
        }
    }

    pub fn reversed(&self) -> Segment {
        match self {
            Segment::Line { from, to } => Segment::Line {
                from: to.clone(),
                to: from.clone(),
            },
            Segment::Bezier { p0, p1, p2, p3 } => Segment::Bezier {
                p0: p3.clone(),
                p1: p2.clone(),
                p2: p1.clone(),
                p3: p0.clone(),
            },
            Segment::Arc {
                center,
                radius,
                from_turns,
                to_turns,
            } => Segment::Arc {
                center: center.clone(),
                radius: radius.clone(),
                from_turns: to_turns.clone(),
                to_turns: from_turns.clone(),
            },
        }
    }
}

/// Exact point on a circle at a rational number of turns, when the turn
/// count is a multiple of 1/4.
fn arc_point_exact(
    center: &ExactComplex,
    radius: &ExactScalar,
    turns: &ExactScalar,
) -> Option<ExactComplex> {
    let four = ExactScalar::from_int(4);
    let q = &four * turns;
    if !q.0.denom().is_one() {
        return None;
    }
    let rem = (&q.0.to_integer() % 4i64 + 4i64) % 4i64;
    let (c, s) = match rem.to_i64().unwrap() {
        0 => (1i64, 0i64),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    };
    let dir = ExactComplex::new(
        &ExactScalar::from_int(c) * radius,
        &ExactScalar::from_int(s) * radius,
    );
    Some(center + &dir)
}

/// A piecewise path with tangential endpoint data.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Path {
    pub segments: Vec<Segment>,
    pub start: TangentialBasepoint,
    pub end: TangentialBasepoint,
}

impl Path {
    pub fn n_segments(&self) -> usize {
        self.segments.len()
    }
}

/// Position and global derivative of the uniformly parametrized path.
pub fn eval_path(path: &Path, t: f64) -> (Complex64, Complex64) {
    let n = path.segments.len();
    assert!(n > 0, "empty path");
    let t = t.clamp(0.0, 1.0);
    let scaled = t * n as f64;
    let mut i = scaled.floor() as usize;
    if i >= n {
        i = n - 1;
    }
    let u = scaled - i as f64;
    let (z, dz) = path.segments[i].eval(u);
    (z, dz * n as f64)
}

/// Validation outcome: either structurally broken (hard error) or a list of
/// certified violations (empty list = the path is valid).
#[derive(Clone, Debug, Default)]
pub struct PathReport {
    pub violations: Vec<String>,
}

impl PathReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Validate a path against a scene.
///
/// Exact checks: segment continuity, endpoint anchoring, and the tangential
/// jet conditions.  Certified numeric checks: clearance of every puncture by
/// at least `tol_clearance` away from anchor-exempt zones.
pub fn validate_path(
    path: &Path,
    scene: &Scene,
    tol_clearance: f64,
) -> Result<PathReport, PathError> {
    if path.segments.is_empty() {
        return Err(PathError::Empty);
    }
    scene.validate()?;
    let mut report = PathReport::default();
    path.start.validate(scene).err().into_iter().for_each(|e| {
        report.violations.push(format!("start basepoint: {e}"));
    });
    path.end.validate(scene).err().into_iter().for_each(|e| {
        report.violations.push(format!("end basepoint: {e}"));
    });
    for (i, s) in path.segments.iter().enumerate() {
        if let Segment::Arc {
            radius,
            from_turns,
            to_turns,
            ..
        } = s
        {
            if !radius.is_positive() {
                return Err(PathError::BadRadius);
            }
            if from_turns == to_turns {
                return Err(PathError::EmptyArc);
            }
        }
        if let (Some(a), Some(b)) = (s.start_exact(), s.end_exact()) {
            if a == b {
                if !matches!(s, Segment::Arc { .. }) {
                    return Err(PathError::DegenerateSegment(i));
                }
            }
        }
    }

    // Continuity at the segment junctions, exactly.
    for i in 0..path.segments.len() - 1 {
        match (
            path.segments[i].end_exact(),
            path.segments[i + 1].start_exact(),
        ) {
            (Some(a), Some(b)) => {
                if a != b {
                    report
                        .violations
                        .push(format!("segments {i} and {} do not join", i + 1));
                }
            }
            _ => report.violations.push(format!(
                "continuity at junction {i}/{} cannot be certified \
                 (arc endpoint away from a quarter turn)",
                i + 1
            )),
        }
    }

    // Endpoints sit at the basepoint anchors, exactly.
    let n = path.segments.len() as i64;
    let nn = ExactComplex::from_int(n, 0);
    let start_loc = path.start.location(scene).clone();
    let end_loc = path.end.location(scene).clone();
    match path.segments[0].start_exact() {
        Some(p) => {
            if p != start_loc {
                report
                    .violations
                    .push("path does not start at its start basepoint".into());
            }
        }
        None => report
            .violations
            .push("start point cannot be certified (arc endpoint)".into()),
    }
    match path.segments.last().unwrap().end_exact() {
        Some(p) => {
            if p != end_loc {
                report
                    .violations
                    .push("path does not end at its end basepoint".into());
            }
        }
        None => report
            .violations
            .push("end point cannot be certified (arc endpoint)".into()),
    }

    // Jet conditions at tangential ends: gamma'(0) = v, gamma'(1) = -w.
    if path.start.is_tangential() {
        match path.segments[0].start_deriv_exact() {
            Some(d) => {
                if &nn * &d != path.start.tangent {
                    report
                        .violations
                        .push("start jet does not match the declared tangent".into());
                }
            }
            None => report
                .violations
                .push("start jet cannot be certified (arc segment)".into()),
        }
    }
    if path.end.is_tangential() {
        match path.segments.last().unwrap().end_deriv_exact() {
            Some(d) => {
                if &nn * &d != -&path.end.tangent {
                    report
                        .violations
                        .push("end jet does not match the declared tangent".into());
                }
            }
            None => report
                .violations
                .push("end jet cannot be certified (arc segment)".into()),
        }
    }

    // Clearance.
    let last = path.segments.len() - 1;
    for (si, seg) in path.segments.iter().enumerate() {
        for (pi, punct) in scene.punctures.iter().enumerate() {
            let p = punct.to_c64();
            let anchored_start = si == 0
                && matches!(path.start.anchor, Anchor::Puncture(a) if a == pi);
            let anchored_end =
                si == last && matches!(path.end.anchor, Anchor::Puncture(a) if a == pi);
            match clearance_check(seg, p, tol_clearance, anchored_start, anchored_end) {
                Ok(()) => {}
                Err(msg) => report
                    .violations
                    .push(format!("segment {si}, puncture {pi}: {msg}")),
            }
        }
    }

    Ok(report)
}

/// Certified clearance of one segment from one puncture.  `anchored_start`
/// and `anchored_end` exempt a provably clean zone around the respective
/// endpoint (which must then lie exactly at the puncture).
fn clearance_check(
    seg: &Segment,
    p: Complex64,
    tol: f64,
    anchored_start: bool,
    anchored_end: bool,
) -> Result<(), String> {
    match seg {
        Segment::Line { from, to } => {
            if anchored_start || anchored_end {
                // The distance from the anchor grows linearly along the line;
                // nothing to certify against the anchor itself.
                return Ok(());
            }
            let a = from.to_c64();
            let b = to.to_c64();
            let d = point_segment_distance(p, a, b);
            if d * (1.0 - 1e-9) >= tol {
                Ok(())
            } else {
                Err(format!("clearance {d:.3e} below tolerance {tol:.3e}"))
            }
        }
        Segment::Arc {
            center,
            radius,
            from_turns,
            to_turns,
        } => {
            if anchored_start || anchored_end {
                return Err("arc anchored at a puncture cannot be certified".into());
            }
            let d = point_arc_distance(
                p,
                center.to_c64(),
                radius.to_f64(),
                from_turns.to_f64(),
                to_turns.to_f64(),
            );
            if d * (1.0 - 1e-9) >= tol {
                Ok(())
            } else {
                Err(format!("clearance {d:.3e} below tolerance {tol:.3e}"))
            }
        }
        Segment::Bezier { p0, p1, p2, p3 } => {
            let mut ctrl = [p0.to_c64(), p1.to_c64(), p2.to_c64(), p3.to_c64()];
            let mut lo = 0.0f64;
            let mut hi = 1.0f64;
            // Second-derivative bound K = 6 max |gamma''| over the segment.
            let k = 6.0
                * (ctrl[2] - ctrl[1] * 2.0 + ctrl[0])
                    .norm()
                    .max((ctrl[3] - ctrl[2] * 2.0 + ctrl[1]).norm());
            if anchored_start {
                let v = ((ctrl[1] - ctrl[0]) * 3.0).norm();
                if v == 0.0 {
                    return Err("zero jet at anchored start".into());
                }
                let u0 = if k == 0.0 { 1.0 } else { (v / k).min(1.0) } * 0.9;
                lo = u0;
            }
            if anchored_end {
                let v = ((ctrl[3] - ctrl[2]) * 3.0).norm();
                if v == 0.0 {
                    return Err("zero jet at anchored end".into());
                }
                let u0 = if k == 0.0 { 1.0 } else { (v / k).min(1.0) } * 0.9;
                hi = 1.0 - u0;
            }
            if lo >= hi {
                return Ok(()); // exempt zones cover the whole segment
            }
            // Restrict to [lo, hi] by two de Casteljau splits.
            if lo > 0.0 {
                ctrl = bezier_split(&ctrl, lo).1;
            }
            if lo > 0.0 || hi < 1.0 {
                let local_hi = (hi - lo) / (1.0 - lo);
                if hi < 1.0 {
                    ctrl = bezier_split(&ctrl, local_hi).0;
                }
            }
            bezier_clearance(&ctrl, p, tol, 48)
        }
    }
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn point_arc_distance(p: Complex64, c: Complex64, r: f64, t0: f64, t1: f64) -> f64 {
    let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
    let dc = (p - c).norm();
    if hi - lo >= 1.0 {
        return (dc - r).abs();
    }
    let ang = (p - c).arg() / TAU; // in (-1/2, 1/2]
    // Is some integer shift of ang inside [lo, hi]?
    let k = (lo - ang).ceil();
    if ang + k <= hi {
        return (dc - r).abs();
    }
    let ep = |t: f64| c + Complex64::new(0.0, TAU * t).exp() * r;
    (p - ep(t0)).norm().min((p - ep(t1)).norm())
}

/// Split a cubic Bézier at local parameter u (de Casteljau).
fn bezier_split(c: &[Complex64; 4], u: f64) -> ([Complex64; 4], [Complex64; 4]) {
    let l = |a: Complex64, b: Complex64| a + (b - a) * u;
    let q0 = l(c[0], c[1]);
    let q1 = l(c[1], c[2]);
    let q2 = l(c[2], c[3]);
    let r0 = l(q0, q1);
    let r1 = l(q1, q2);
    let s = l(r0, r1);
    ([c[0], q0, r0, s], [s, r1, q2, c[3]])
}

/// Distance from a point to the control bounding box (a lower bound for the
/// distance to the curve, by the convex-hull property).
fn point_box_distance(p: Complex64, c: &[Complex64; 4]) -> f64 {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for z in c {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(z.im);
        y1 = y1.max(z.im);
    }
    let dx = (x0 - p.re).max(p.re - x1).max(0.0);
    let dy = (y0 - p.im).max(p.im - y1).max(0.0);
    (dx * dx + dy * dy).sqrt()
}

fn bezier_clearance(c: &[Complex64; 4], p: Complex64, tol: f64, depth: u32) -> Result<(), String> {
    if point_box_distance(p, c) * (1.0 - 1e-9) >= tol {
        return Ok(());
    }
    // The box is too close; check a witness point before subdividing.
    let (a, b) = bezier_split(c, 0.5);
    let mid = a[3];
    if (mid - p).norm() < tol * (1.0 - 1e-9) {
        return Err(format!(
            "curve point at distance {:.3e} below tolerance {tol:.3e}",
            (mid - p).norm()
        ));
    }
    if depth == 0 {
        return Err("clearance cannot be certified at maximal subdivision depth".into());
    }
    bezier_clearance(&a, p, tol, depth - 1)?;
    bezier_clearance(&b, p, tol, depth - 1)
}

/// Reverse a path: segments reversed in order and orientation; the
/// basepoints swap (their stored tangents still point away from the path,
/// so no sign change is needed).
pub fn reverse_path(path: &Path) -> Path {
    Path {
        segments: path.segments.iter().rev().map(Segment::reversed).collect(),
        start: path.end.clone(),
        end: path.start.clone(),
    }
}

/// Concatenate two paths whose junction anchors agree exactly.  The junction
/// basepoints are dropped; the outer basepoints are kept as declared.  See
/// the module notes on jet rescaling for tangential outer ends.
pub fn compose_paths(first: &Path, second: &Path, scene: &Scene) -> Result<Path, PathError> {
    let a = first.end.location(scene);
    let b = second.start.location(scene);
    if a != b {
        return Err(PathError::Composition(format!(
            "end of the first path ({a}) differs from start of the second ({b})"
        )));
    }
    if first.end.is_tangential() || second.start.is_tangential() {
        return Err(PathError::Composition(
            "cannot compose across a tangential (puncture-anchored) junction".into(),
        ));
    }
    let mut segments = first.segments.clone();
    segments.extend(second.segments.iter().cloned());
    Ok(Path {
        segments,
        start: first.start.clone(),
        end: second.end.clone(),
    })
}

// ---------------------------------------------------------------------------
// Standard paths.

/// The straight path from 0 to 1 with unit tangential jets ("droit chemin").
/// The scene must contain punctures at 0 and 1.
pub fn standard_dch(scene: &Scene) -> Result<Path, PathError> {
    let zero = ExactComplex::zero();
    let one = ExactComplex::one();
    let i0 = scene
        .puncture_index(&zero)
        .ok_or_else(|| PathError::Composition("scene has no puncture at 0".into()))?;
    let i1 = scene
        .puncture_index(&one)
        .ok_or_else(|| PathError::Composition("scene has no puncture at 1".into()))?;
    Ok(Path {
        segments: vec![Segment::Line {
            from: zero,
            to: one.clone(),
        }],
        start: TangentialBasepoint::at_puncture(i0, ExactComplex::one()),
        end: TangentialBasepoint::at_puncture(i1, -&one),
    })
}

/// A full counterclockwise loop of the given radius around a puncture, based
/// at the ordinary point `a + r`.
pub fn standard_loop(scene: &Scene, puncture: usize, radius: ExactScalar) -> Result<Path, PathError> {
    if puncture >= scene.punctures.len() {
        return Err(GeomError::PunctureOutOfRange(puncture, scene.punctures.len()).into());
    }
    if !radius.is_positive() {
        return Err(PathError::BadRadius);
    }
    let center = scene.punctures[puncture].clone();
    let base = &center + &ExactComplex::new(radius.clone(), ExactScalar::zero());
    let bp = TangentialBasepoint::ordinary(base);
    Ok(Path {
        segments: vec![Segment::Arc {
            center,
            radius,
            from_turns: ExactScalar::zero(),
            to_turns: ExactScalar::one(),
        }],
        start: bp.clone(),
        end: bp,
    })
}

/// The path `gamma(t) = lambda t + (1 - lambda) t^2` from the puncture at 0
/// (tangent `lambda`) to the ordinary point 1, as a cubic Bézier.  The scene
/// must contain 0 and must not contain 1 (`gamma'(1) = 2 - lambda` may
/// vanish, so the end stays ordinary).
pub fn standard_jet(scene: &Scene, lambda: &ExactScalar) -> Result<Path, PathError> {
    if lambda.is_zero() {
        return Err(PathError::Composition("jet parameter must be nonzero".into()));
    }
    let i0 = scene
        .puncture_index(&ExactComplex::zero())
        .ok_or_else(|| PathError::Composition("scene has no puncture at 0".into()))?;
    if scene.puncture_index(&ExactComplex::one()).is_some() {
        return Err(PathError::Composition(
            "jet path ends at 1, which must be an ordinary point".into(),
        ));
    }
    let third = ExactScalar::from_frac(1, 3);
    let b1 = ExactComplex::real(&third * lambda);
    let b2 = ExactComplex::real(&third * &(lambda + &ExactScalar::one()));
    Ok(Path {
        segments: vec![Segment::Bezier {
            p0: ExactComplex::zero(),
            p1: b1,
            p2: b2,
            p3: ExactComplex::one(),
        }],
        start: TangentialBasepoint::at_puncture(i0, ExactComplex::real(lambda.clone())),
        end: TangentialBasepoint::ordinary(ExactComplex::one()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: i64, im: i64) -> ExactComplex {
        ExactComplex::from_int(re, im)
    }

    fn frac(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_frac(n, d)
    }

    #[test]
    fn dch_is_valid() {
        let scene = Scene::zero_one();
        let dch = standard_dch(&scene).unwrap();
        let report = validate_path(&dch, &scene, 1e-6).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        let (z, dz) = eval_path(&dch, 0.25);
        assert!((z - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        assert!((dz - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn wrong_jet_is_caught() {
        let scene = Scene::zero_one();
        let mut dch = standard_dch(&scene).unwrap();
        dch.start.tangent = c(2, 0);
        let report = validate_path(&dch, &scene, 1e-6).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("start jet")));
    }

    #[test]
    fn discontinuity_is_caught() {
        let scene = Scene::zero_one();
        let path = Path {
            segments: vec![
                Segment::Line {
                    from: c(0, 0),
                    to: ExactComplex::new(frac(1, 2), frac(1, 4)),
                },
                Segment::Line {
                    from: ExactComplex::new(frac(1, 2), frac(1, 3)),
                    to: c(1, 0),
                },
            ],
            start: TangentialBasepoint::at_puncture(0, ExactComplex::new(frac(1, 1), frac(1, 2))),
            end: TangentialBasepoint::at_puncture(1, ExactComplex::new(frac(-1, 1), frac(1, 2))),
        };
        let report = validate_path(&path, &scene, 1e-6).unwrap();
        assert!(report.violations.iter().any(|v| v.contains("join")));
    }

    #[test]
    fn loop_is_valid_and_winds() {
        let scene = Scene::zero_one();
        let lp = standard_loop(&scene, 0, frac(1, 2)).unwrap();
        let report = validate_path(&lp, &scene, 1e-6).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        let (z, dz) = eval_path(&lp, 0.25);
        assert!((z - Complex64::new(0.0, 0.5)).norm() < 1e-14);
        assert!((dz - Complex64::new(-std::f64::consts::TAU * 0.5, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn path_through_puncture_is_rejected() {
        // A straight line between ordinary points passing through puncture 1.
        let scene = Scene::zero_one();
        let path = Path {
            segments: vec![Segment::Line {
                from: ExactComplex::new(frac(1, 2), ExactScalar::zero()),
                to: ExactComplex::new(frac(3, 2), ExactScalar::zero()),
            }],
            start: TangentialBasepoint::ordinary(ExactComplex::new(
                frac(1, 2),
                ExactScalar::zero(),
            )),
            end: TangentialBasepoint::ordinary(ExactComplex::new(
                frac(3, 2),
                ExactScalar::zero(),
            )),
        };
        let report = validate_path(&path, &scene, 1e-6).unwrap();
        assert!(report.violations.iter().any(|v| v.contains("clearance")));
    }

    #[test]
    fn bezier_near_miss_certification() {
        // A Bézier arcing over the puncture at 1 with clearance about 0.3.
        let scene = Scene::zero_one();
        let path = Path {
            segments: vec![Segment::Bezier {
                p0: c(0, 0),
                p1: ExactComplex::new(frac(1, 3), frac(2, 5)),
                p2: ExactComplex::new(frac(2, 3), frac(2, 5)),
                p3: c(2, 0),
            }],
            start: TangentialBasepoint::at_puncture(0, ExactComplex::new(frac(1, 1), frac(6, 5))),
            end: TangentialBasepoint::ordinary(c(2, 0)),
        };
        let report = validate_path(&path, &scene, 1e-3).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn reverse_roundtrip_and_eval() {
        let scene = Scene::zero_one();
        let dch = standard_dch(&scene).unwrap();
        let rev = reverse_path(&dch);
        let report = validate_path(&rev, &scene, 1e-6).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(reverse_path(&rev), dch);
        let (z, dz) = eval_path(&rev, 0.25);
        assert!((z - Complex64::new(0.75, 0.0)).norm() < 1e-15);
        assert!((dz - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn compose_requires_matching_ordinary_junction() {
        let scene = Scene::zero_one();
        let half = ExactComplex::new(frac(1, 2), ExactScalar::zero());
        let mk = |from: ExactComplex, to: ExactComplex| Path {
            segments: vec![Segment::Line {
                from: from.clone(),
                to: to.clone(),
            }],
            start: TangentialBasepoint::ordinary(from),
            end: TangentialBasepoint::ordinary(to),
        };
        let q1 = ExactComplex::new(frac(1, 4), frac(1, 4));
        let q2 = ExactComplex::new(frac(3, 4), frac(1, 4));
        let p = mk(q1.clone(), half.clone());
        let q = mk(half.clone(), q2.clone());
        let comp = compose_paths(&p, &q, &scene).unwrap();
        assert_eq!(comp.segments.len(), 2);
        assert_eq!(comp.start.location(&scene), &q1);
        assert_eq!(comp.end.location(&scene), &q2);
        assert!(compose_paths(&q, &p, &scene).is_err());
        // Tangential junctions are refused.
        let dch = standard_dch(&scene).unwrap();
        assert!(compose_paths(&dch, &reverse_path(&dch), &scene).is_err());
    }

    #[test]
    fn jet_path_shape() {
        let scene = Scene::new(vec![c(0, 0)]).unwrap();
        let lam = ExactScalar::from_int(3);
        let p = standard_jet(&scene, &lam).unwrap();
        let report = validate_path(&p, &scene, 1e-6).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        // gamma(t) = 3t - 2t^2.
        for t in [0.2, 0.5, 0.9] {
            let (z, dz) = eval_path(&p, t);
            assert!((z - Complex64::new(3.0 * t - 2.0 * t * t, 0.0)).norm() < 1e-14);
            assert!((dz - Complex64::new(3.0 - 4.0 * t, 0.0)).norm() < 1e-14);
        }
    }
}
