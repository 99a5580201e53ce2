//! Gauss–Legendre rules, composite panels and geometric grading.
//!
//! Every integral in the crate goes through these panels. Breakpoints of the
//! integrand (kinks, density zeros, jumps) are placed on panel edges so each
//! panel sees a smooth function, and panels next to a singular breakpoint are
//! graded geometrically with ratio 1/2.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let (p, pm1) = if n == 0 { (1.0, 0.0) } else { (p1, p0) };
    let d = n as f64 * (x * p - pm1) / (x * x - 1.0);
    (p, d)
}

/// A breakpoint of a piecewise-smooth integrand. `graded` requests geometric
/// panel refinement on both sides of the point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knot {
    pub at: f64,
    pub graded: bool,
}

impl Knot {
    pub fn plain(at: f64) -> Self {
        Self { at, graded: false }
    }

    pub fn graded(at: f64) -> Self {
        Self { at, graded: true }
    }
}

/// Panel edges covering the span of `knots`.
///
/// Between consecutive knots the interval is cut into equal panels no wider
/// than `max_width`; next to a graded knot the outermost panel is replaced by
/// a geometric sequence halving down to `min_width`. Knots are sorted and
/// merged (a knot is graded if any copy is).
pub fn panel_edges(knots: &[Knot], max_width: f64, min_width: f64) -> Vec<f64> {
    let mut ks: Vec<Knot> = knots.iter().copied().filter(|k| k.at.is_finite()).collect();
    ks.sort_by(|a, b| a.at.total_cmp(&b.at));
    let mut merged: Vec<Knot> = Vec::with_capacity(ks.len());
    for k in ks {
        match merged.last_mut() {
            Some(last) if (k.at - last.at).abs() <= 1e-15 * (1.0 + k.at.abs()) => {
                last.graded |= k.graded;
            }
            _ => merged.push(k),
        }
    }
    let mut edges = Vec::new();
    if merged.is_empty() {
        return edges;
    }
    edges.push(merged[0].at);
    for pair in merged.windows(2) {
        let (l, r) = (pair[0], pair[1]);
        let span = r.at - l.at;
        let pieces = (span / max_width).ceil().max(1.0) as usize;
        let h = span / pieces as f64;
        let mut inner: Vec<f64> = (1..pieces).map(|i| l.at + h * i as f64).collect();
        let first = h.min(0.5 * span);
        for (knot, dir) in [(l, 1.0), (r, -1.0)] {
            if !knot.graded {
                continue;
            }
            inner.push(knot.at + dir * first);
            let mut w = first;
            while w > min_width {
                w *= 0.5;
                inner.push(knot.at + dir * w);
            }
        }
        inner.retain(|&x| x > l.at && x < r.at);
        inner.sort_by(f64::total_cmp);
        inner.dedup();
        edges.extend(inner);
        edges.push(r.at);
    }
    edges
}

/// Composite rule over consecutive `edges`.
pub fn integrate_edges<F: FnMut(f64) -> f64>(rule: &GaussLegendre, edges: &[f64], mut f: F) -> f64 {
    edges
        .windows(2)
        .map(|p| rule.integrate(p[0], p[1], &mut f))
        .sum()
}

/// Adaptive bisection: a panel is accepted when the rule on the whole panel
/// agrees with the sum over its halves to `tol` (absolute, scaled by the
/// panel's share of the interval). Returns (value, error estimate).
pub fn adaptive<F: FnMut(f64) -> f64>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    tol: f64,
    mut f: F,
) -> (f64, f64) {
    let total = b - a;
    let mut stack: Vec<(f64, f64, f64, u32)> = Vec::new();
    let whole = rule.integrate(a, b, &mut f);
    stack.push((a, b, whole, 0));
    let mut value = 0.0;
    let mut err = 0.0;
    while let Some((l, r, coarse, depth)) = stack.pop() {
        let m = 0.5 * (l + r);
        let left = rule.integrate(l, m, &mut f);
        let right = rule.integrate(m, r, &mut f);
        let fine = left + right;
        let diff = (fine - coarse).abs();
        let budget = tol * (r - l) / total;
        if diff <= budget || depth >= 48 || (r - l) <= f64::EPSILON * (l.abs() + r.abs()) {
            value += fine;
            err += diff;
        } else {
            stack.push((l, m, left, depth + 1));
            stack.push((m, r, right, depth + 1));
        }
    }
    (value, err)
}
