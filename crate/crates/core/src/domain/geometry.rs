use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::curve::BoundaryCurve;
use crate::error::{Error, Result};

/// Closed polyline with an x-slab index over its edges.
///
/// Every edge is filed under each slab its x-range (widened by `band`)
/// touches, so a query at x only visits edges that can cross the vertical
/// line through x or lie within `band` of the query point.
#[derive(Debug, Clone)]
pub(crate) struct Polygon {
    pts: Vec<(f64, f64)>,
    band: f64,
    x0: f64,
    slab_width: f64,
    slabs: Vec<Vec<u32>>,
}

impl Polygon {
    pub(crate) fn new(pts: Vec<(f64, f64)>, band: f64) -> Self {
        let n = pts.len();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in &pts {
            lo = lo.min(p.0);
            hi = hi.max(p.0);
        }
        let count = (n / 2).clamp(1, 4096);
        let x0 = lo - band;
        let slab_width = ((hi + band - x0) / count as f64).max(f64::MIN_POSITIVE);
        let mut slabs = alloc::vec![Vec::new(); count];
        for i in 0..n {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            let s0 = Self::slab_of(x0, slab_width, count, a.0.min(b.0) - band);
            let s1 = Self::slab_of(x0, slab_width, count, a.0.max(b.0) + band);
            for s in &mut slabs[s0..=s1] {
                s.push(i as u32);
            }
        }
        Self { pts, band, x0, slab_width, slabs }
    }

    fn slab_of(x0: f64, w: f64, count: usize, x: f64) -> usize {
        let k = ((x - x0) / w).floor();
        if k <= 0.0 {
            0
        } else {
            (k as usize).min(count - 1)
        }
    }

    fn slab(&self, x: f64) -> usize {
        Self::slab_of(self.x0, self.slab_width, self.slabs.len(), x)
    }

    fn edge(&self, i: u32) -> ((f64, f64), (f64, f64)) {
        let i = i as usize;
        (self.pts[i], self.pts[(i + 1) % self.pts.len()])
    }

    pub(crate) fn band(&self) -> f64 {
        self.band
    }

    pub(crate) fn len(&self) -> usize {
        self.pts.len()
    }

    fn x_out_of_range(&self, x: f64) -> bool {
        x < self.x0 || x > self.x0 + self.slab_width * self.slabs.len() as f64
    }

    /// Even–odd test; points within `band` of an edge count as outside.
    pub(crate) fn contains(&self, x: f64, y: f64) -> bool {
        if self.x_out_of_range(x) {
            return false;
        }
        let b2 = self.band * self.band;
        let mut inside = false;
        for &e in &self.slabs[self.slab(x)] {
            let (a, b) = self.edge(e);
            if b2 > 0.0 && segment_dist2((x, y), a, b) < b2 {
                return false;
            }
            if crosses_up(x, y, a, b) {
                inside = !inside;
            }
        }
        inside
    }

    /// Even–odd test without the boundary band.
    pub(crate) fn contains_strict(&self, x: f64, y: f64) -> bool {
        if self.x_out_of_range(x) {
            return false;
        }
        let mut inside = false;
        for &e in &self.slabs[self.slab(x)] {
            let (a, b) = self.edge(e);
            if crosses_up(x, y, a, b) {
                inside = !inside;
            }
        }
        inside
    }

    /// First point where the segment p → q meets an edge, if any.
    pub(crate) fn first_crossing(&self, p: (f64, f64), q: (f64, f64)) -> Option<(f64, f64)> {
        let s0 = self.slab(p.0.min(q.0));
        let s1 = self.slab(p.0.max(q.0));
        let mut best: Option<f64> = None;
        for slab in &self.slabs[s0..=s1] {
            for &e in slab {
                let (a, b) = self.edge(e);
                if let Some(t) = segment_param(p, q, a, b) {
                    if best.map_or(true, |s| t < s) {
                        best = Some(t);
                    }
                }
            }
        }
        best.map(|t| (p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)))
    }

    /// Closest point of the polyline to p among edges filed near p.x.
    pub(crate) fn nearest_point(&self, p: (f64, f64)) -> (f64, f64) {
        let mut best = (f64::INFINITY, p);
        let candidates: &[u32] = if self.x_out_of_range(p.0) { &[] } else { &self.slabs[self.slab(p.0)] };
        let all: Vec<u32>;
        let list = if candidates.is_empty() {
            all = (0..self.pts.len() as u32).collect();
            &all[..]
        } else {
            candidates
        };
        for &e in list {
            let (a, b) = self.edge(e);
            let c = closest_on_segment(p, a, b);
            let d = (c.0 - p.0).powi(2) + (c.1 - p.1).powi(2);
            if d < best.0 {
                best = (d, c);
            }
        }
        best.1
    }
}

/// Does the edge a–b cross the upward ray from (x, y)? Half-open in x so a
/// vertex on the ray is counted once.
fn crosses_up(x: f64, y: f64, a: (f64, f64), b: (f64, f64)) -> bool {
    if (a.0 > x) == (b.0 > x) {
        return false;
    }
    let yc = a.1 + (x - a.0) * (b.1 - a.1) / (b.0 - a.0);
    yc > y
}

fn closest_on_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return a;
    }
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0);
    (a.0 + t * dx, a.1 + t * dy)
}

fn segment_dist2(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let c = closest_on_segment(p, a, b);
    (c.0 - p.0).powi(2) + (c.1 - p.1).powi(2)
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Parameter t ∈ [0, 1] along p → q where it meets segment a–b.
fn segment_param(p: (f64, f64), q: (f64, f64), a: (f64, f64), b: (f64, f64)) -> Option<f64> {
    let r = (q.0 - p.0, q.1 - p.1);
    let s = (b.0 - a.0, b.1 - a.1);
    let den = r.0 * s.1 - r.1 * s.0;
    if den == 0.0 {
        return None;
    }
    let w = (a.0 - p.0, a.1 - p.1);
    let t = (w.0 * s.1 - w.1 * s.0) / den;
    let u = (w.0 * r.1 - w.1 * r.0) / den;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then_some(t)
}

fn on_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

/// Closed segments a–b and c–d share a point.
fn segments_touch(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(a, c, d))
        || (d2 == 0.0 && on_segment(b, c, d))
        || (d3 == 0.0 && on_segment(c, a, b))
        || (d4 == 0.0 && on_segment(d, a, b))
}

/// True when the closed polyline through `pts` has no self-intersection.
///
/// Edges are swept in order of their left end. Neighbouring edges share a
/// vertex by construction and only fail if they fold back onto each other.
pub(crate) fn is_simple(pts: &[(f64, f64)]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    let edge = |i: usize| (pts[i], pts[(i + 1) % n]);
    let mut order: Vec<usize> = (0..n).filter(|&i| pts[i] != pts[(i + 1) % n]).collect();
    if order.len() < 3 {
        return false;
    }
    order.sort_by(|&i, &j| {
        let (a, b) = edge(i);
        let (c, d) = edge(j);
        a.0.min(b.0).total_cmp(&c.0.min(d.0))
    });
    for (k, &i) in order.iter().enumerate() {
        let (a, b) = edge(i);
        let right = a.0.max(b.0);
        for &j in &order[k + 1..] {
            let (c, d) = edge(j);
            if c.0.min(d.0) > right {
                break;
            }
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            if adjacent {
                // shared vertex; reject a fold-back along the same line
                let (shared, p, q) = if (i + 1) % n == j { (b, a, d) } else { (a, b, c) };
                let dirs_opposite = (p.0 - shared.0) * (q.0 - shared.0) + (p.1 - shared.1) * (q.1 - shared.1) > 0.0;
                if cross(shared, p, q) == 0.0 && dirs_opposite {
                    return false;
                }
                continue;
            }
            if segments_touch(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Discrete necessary condition for univalence: the closed boundary
/// polyline does not cross itself.
pub fn discrete_univalence_check(curve: &BoundaryCurve) -> Result<bool> {
    if curve.has_unbounded_flags() {
        return Err(Error::NotApplicable("boundary curve has unbounded flags"));
    }
    if curve.len() < 4 {
        return Err(Error::NotApplicable("boundary curve needs at least four points"));
    }
    Ok(is_simple(&curve.xy()))
}

/// Is p inside the domain? Points within the boundary band are outside.
pub fn point_in_domain(curve: &BoundaryCurve, p: Complex64) -> Result<bool> {
    let poly = curve.polygon()?;
    Ok(poly.contains(p.re, p.im))
}
