//! The CPTP region of `φ(x, y, z)` and Euclidean projection onto it.
//!
//! With `u = y + z` and `v = y − z` the region is
//! `(3(x² + v²) − 1)/2 ≤ u ≤ 1`: a paraboloid body cut by a plane. In the
//! orthonormal coordinates `(x, w, s) = (x, v/√2, u/√2)` the body is
//! `s ≥ a(x² + 2w²) − b` and the plane is `s ≤ 1/√2`; they meet on the
//! ellipse `x² + 2w² = 1`.

use super::PoolParams;
use crate::error::{EqnnError, Result};

/// Slack allowed by [`feasible_contains`].
pub const FEASIBLE_TOL: f64 = 1e-12;

const A: f64 = 3.0 / (2.0 * std::f64::consts::SQRT_2);
const B: f64 = 1.0 / (2.0 * std::f64::consts::SQRT_2);
const S_MAX: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Rot {
    x: f64,
    w: f64,
    s: f64,
}

impl Rot {
    fn from_params(p: PoolParams) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            x: p.x,
            w: (p.y - p.z) * h,
            s: (p.y + p.z) * h,
        }
    }

    fn to_params(self) -> PoolParams {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PoolParams::new(self.x, (self.s + self.w) * h, (self.s - self.w) * h)
    }

    fn dist(self, o: Rot) -> f64 {
        ((self.x - o.x).powi(2) + (self.w - o.w).powi(2) + (self.s - o.s).powi(2)).sqrt()
    }
}

fn body_gap(q: Rot) -> f64 {
    A * (q.x * q.x + 2.0 * q.w * q.w) - B - q.s
}

fn in_body(q: Rot, tol: f64) -> bool {
    body_gap(q) <= tol
}

fn in_halfspace(q: Rot, tol: f64) -> bool {
    q.s <= S_MAX + tol
}

/// Closed-form membership test for the CPTP region.
pub fn feasible_contains(p: PoolParams) -> bool {
    let u = p.y + p.z;
    let v = p.y - p.z;
    u <= 1.0 + FEASIBLE_TOL && 3.0 * (p.x * p.x + v * v) - 1.0 <= 2.0 * u + 2.0 * FEASIBLE_TOL
}

/// Nearest point of the paraboloid body to `p` (which must lie outside it).
fn project_body(p: Rot) -> Result<Rot> {
    let at = |lam: f64| Rot {
        x: p.x / (1.0 + 2.0 * A * lam),
        w: p.w / (1.0 + 4.0 * A * lam),
        s: p.s + lam,
    };
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut grow = 0;
    while body_gap(at(hi)) > 0.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(EqnnError::NoConvergence("paraboloid projection multiplier diverged".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if body_gap(at(mid)) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi.max(1.0) {
            break;
        }
    }
    Ok(at(hi))
}

fn rim(t: f64) -> Rot {
    Rot {
        x: t.cos(),
        w: t.sin() * std::f64::consts::FRAC_1_SQRT_2,
        s: S_MAX,
    }
}

/// Nearest point of the rim ellipse to `p`.
fn project_rim(p: Rot) -> Rot {
    let f = |t: f64| rim(t).dist(p);
    let n = 720;
    let step = std::f64::consts::TAU / n as f64;
    let best = (0..n)
        .map(|k| k as f64 * step)
        .min_by(|&a, &b| f(a).total_cmp(&f(b)))
        .unwrap_or(0.0);
    // golden-section refinement on the bracketing interval
    let (mut a, mut b) = (best - step, best + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c1 = b - g * (b - a);
    let mut c2 = a + g * (b - a);
    for _ in 0..200 {
        if f(c1) < f(c2) {
            b = c2;
        } else {
            a = c1;
        }
        c1 = b - g * (b - a);
        c2 = a + g * (b - a);
        if b - a < 1e-15 {
            break;
        }
    }
    rim(0.5 * (a + b))
}

/// Euclidean projection onto the CPTP region.
///
/// The projection onto each convex piece is computed in closed form (the
/// paraboloid via its one-dimensional KKT multiplier); when neither lands in
/// the other piece the optimum lies on their common rim.
pub fn project_to_feasible(p: PoolParams) -> Result<PoolParams> {
    if ![p.x, p.y, p.z].iter().all(|v| v.is_finite()) {
        return Err(EqnnError::Invalid("pooling parameters must be finite".into()));
    }
    if feasible_contains(p) {
        return Ok(p);
    }
    let q = Rot::from_params(p);
    if !in_halfspace(q, 0.0) {
        let h = Rot { s: S_MAX, ..q };
        if in_body(h, 0.0) {
            return Ok(h.to_params());
        }
    }
    if !in_body(q, 0.0) {
        let b = project_body(q)?;
        if in_halfspace(b, 0.0) {
            return Ok(b.to_params());
        }
    }
    Ok(project_rim(q).to_params())
}

/// Distance from an interior point to the paraboloid surface.
fn surface_distance(p: Rot) -> f64 {
    let d2 = |x: f64, w: f64| {
        let h = A * (x * x + 2.0 * w * w) - B - p.s;
        (x - p.x).powi(2) + (w - p.w).powi(2) + h * h
    };
    let mut best = (p.x, p.w, d2(p.x, p.w));
    let n = 48;
    for i in 0..=n {
        for j in 0..=n {
            let x = -1.5 + 3.0 * i as f64 / n as f64;
            let w = -1.1 + 2.2 * j as f64 / n as f64;
            let v = d2(x, w);
            if v < best.2 {
                best = (x, w, v);
            }
        }
    }
    let (mut x, mut w, mut val) = best;
    for _ in 0..100 {
        let h = A * (x * x + 2.0 * w * w) - B - p.s;
        let hx = 2.0 * A * x;
        let hw = 4.0 * A * w;
        let gx = 2.0 * (x - p.x) + 2.0 * h * hx;
        let gw = 2.0 * (w - p.w) + 2.0 * h * hw;
        let hxx = 2.0 + 2.0 * hx * hx + 4.0 * A * h;
        let hww = 2.0 + 2.0 * hw * hw + 8.0 * A * h;
        let hxw = 2.0 * hx * hw;
        let det = hxx * hww - hxw * hxw;
        let (mut dx, mut dw) = if det > 1e-14 && hxx > 0.0 {
            ((hww * gx - hxw * gw) / det, (hxx * gw - hxw * gx) / det)
        } else {
            (0.1 * gx, 0.1 * gw)
        };
        let mut accepted = false;
        for _ in 0..40 {
            let v = d2(x - dx, w - dw);
            if v <= val {
                x -= dx;
                w -= dw;
                val = v;
                accepted = true;
                break;
            }
            dx *= 0.5;
            dw *= 0.5;
        }
        if !accepted || gx.abs() + gw.abs() < 1e-15 {
            break;
        }
    }
    val.sqrt()
}

/// Signed distance to the region boundary: positive inside, negative outside.
pub fn feasible_boundary_distance(p: PoolParams) -> Result<f64> {
    if feasible_contains(p) {
        let q = Rot::from_params(p);
        let plane = (S_MAX - q.s).max(0.0);
        Ok(plane.min(surface_distance(q)))
    } else {
        let proj = project_to_feasible(p)?;
        Ok(-p.distance(proj))
    }
}
