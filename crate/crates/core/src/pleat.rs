//! Cross-sections of the bend-and-smooth construction in a normal 2-plane.
//!
//! Two geodesic rays leave the origin of `H^2` at angle `θ`. Working in
//! geodesic normal coordinates at the vertex, the corner is replaced inside
//! the coordinate disk of radius `r` by the arc of the Euclidean circle that
//! is tangent to both rays at distance `r`; its radius is `R = r·tan(θ/2)`.
//! Curvatures are measured in the hyperbolic metric by lifting the coordinate
//! curve to the hyperboloid and finite-differencing.
//!
//! The module also checks the supporting-geodesic property of the
//! ε-neighborhood of a wedge and the width of the hull of a wedge.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperboloid::sinhc;
use crate::trig;

/// Calibrated constant `C` in `sup κ_g ≤ C / R` over `θ ∈ [2, π)`, `r ∈ (0, 0.5]`.
pub const CURVATURE_CONSTANT: f64 = 2.0;
/// Fewest arc samples accepted by [`curvature_profile`].
pub const MIN_SAMPLES: usize = 16;
/// Default number of samples along the arc.
pub const DEFAULT_SAMPLES: usize = 1001;
/// Sampling step along a supporting geodesic.
pub const SUPPORT_RESOLUTION: f64 = 1e-4;
/// Intersections closer than this to the contact point are ignored.
pub const CONTACT_WINDOW: f64 = 1e-6;

type P2 = [f64; 2];
type P3 = [f64; 3];

#[inline]
fn ldot(a: &P3, b: &P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
}

/// Smoothed wedge: incoming ray, tangent circular arc, outgoing ray.
///
/// The bisector of the wedge is the positive `y` axis; the rays point along
/// `(∓sin(θ/2), cos(θ/2))` and are traversed inward then outward.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothedProfile {
    pub theta: f64,
    pub r: f64,
    /// Euclidean arc radius in normal coordinates; infinite when degenerate.
    pub radius: f64,
    /// Coordinate length of each ray piece beyond the junction.
    pub ray_extent: f64,
    pub samples: usize,
    /// `θ = π`: the rays already form a geodesic and no arc is inserted.
    pub degenerate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceKind {
    IncomingRay,
    Arc,
    OutgoingRay,
}

impl SmoothedProfile {
    fn ray_dirs(&self) -> (P2, P2) {
        let (s, c) = (self.theta / 2.0).sin_cos();
        ([-s, c], [s, c])
    }

    /// Closest approach of the arc to the vertex, `r(1 − sin(θ/2))/cos(θ/2)`.
    pub fn arc_depth(&self) -> f64 {
        if self.degenerate {
            return 0.0;
        }
        let (s, c) = (self.theta / 2.0).sin_cos();
        self.r * c / (1.0 + s)
    }

    /// Coordinate length of the middle piece.
    pub fn arc_coord_length(&self) -> f64 {
        if self.degenerate {
            2.0 * self.r
        } else {
            self.radius * (PI - self.theta)
        }
    }

    /// Center of the smoothing circle on the bisector.
    pub fn center(&self) -> P2 {
        [0.0, self.r / (self.theta / 2.0).cos()]
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_ray_extent(mut self, extent: f64) -> Self {
        self.ray_extent = extent;
        self
    }

    /// Position and unit coordinate velocity at coordinate arclength `u` from
    /// the start of a piece. Parameters outside the piece extend it smoothly
    /// (the ray as a line, the arc along its circle).
    pub fn eval(&self, kind: PieceKind, u: f64) -> (P2, P2) {
        let (d1, d2) = self.ray_dirs();
        match kind {
            PieceKind::IncomingRay => {
                let t = self.r + self.ray_extent - u;
                ([t * d1[0], t * d1[1]], [-d1[0], -d1[1]])
            }
            PieceKind::OutgoingRay => {
                let t = self.r + u;
                ([t * d2[0], t * d2[1]], d2)
            }
            PieceKind::Arc if self.degenerate => ([u - self.r, 0.0], [1.0, 0.0]),
            PieceKind::Arc => {
                // offsets from the lowest point of the circle, free of cancellation
                let big = self.radius;
                let s = u - 0.5 * self.arc_coord_length();
                let phi = s / big;
                let half = (0.5 * phi).sin();
                (
                    [big * phi.sin(), self.arc_depth() + 2.0 * big * half * half],
                    [phi.cos(), phi.sin()],
                )
            }
        }
    }

    pub fn piece_length(&self, kind: PieceKind) -> f64 {
        match kind {
            PieceKind::Arc => self.arc_coord_length(),
            _ => self.ray_extent,
        }
    }

    /// Largest mismatch of positions and of unit tangents at the two junctions.
    pub fn junction_errors(&self) -> (f64, f64) {
        let gap = |a: P2, b: P2| (a[0] - b[0]).abs().max((a[1] - b[1]).abs());
        let (p1, v1) = self.eval(PieceKind::IncomingRay, self.ray_extent);
        let (q1, w1) = self.eval(PieceKind::Arc, 0.0);
        let (p2, v2) = self.eval(PieceKind::Arc, self.arc_coord_length());
        let (q2, w2) = self.eval(PieceKind::OutgoingRay, 0.0);
        (gap(p1, q1).max(gap(p2, q2)), gap(v1, w1).max(gap(v2, w2)))
    }
}

/// Builds the ray–arc–ray profile for wedge angle `theta` and junction distance `r`.
pub fn build_profile(theta: f64, r: f64) -> Result<SmoothedProfile> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("r must be positive, got {r}")));
    }
    if !(theta > 0.0 && theta <= PI) {
        return Err(Error::Domain(format!("angle {theta} outside (0, π]")));
    }
    if theta == PI {
        return Ok(SmoothedProfile {
            theta,
            r,
            radius: f64::INFINITY,
            ray_extent: r,
            samples: DEFAULT_SAMPLES,
            degenerate: true,
        });
    }
    let radius = trig::smoothing_radius(r, theta)?;
    Ok(SmoothedProfile {
        theta,
        r,
        radius,
        ray_extent: r,
        samples: DEFAULT_SAMPLES,
        degenerate: false,
    })
}

/// Lift of normal coordinates with the time coordinate shifted by `−1`, which
/// keeps finite differences of nearly constant `cosh ρ` precise.
#[inline]
fn lift_shifted(p: P2) -> P3 {
    let rho = (p[0] * p[0] + p[1] * p[1]).sqrt();
    let f = sinhc(rho);
    let h = (0.5 * rho).sinh();
    [p[0] * f, p[1] * f, 2.0 * h * h]
}

#[inline]
fn lift(p: P2) -> P3 {
    let mut x = lift_shifted(p);
    x[2] += 1.0;
    x
}

/// Five-point first and second derivatives of `f` at `u` with step `h`.
fn stencil<const N: usize>(f: impl Fn(f64) -> [f64; N], u: f64, h: f64) -> ([f64; N], [f64; N]) {
    let (m2, m1, z, p1, p2) = (f(u - 2.0 * h), f(u - h), f(u), f(u + h), f(u + 2.0 * h));
    let mut d1 = [0.0; N];
    let mut d2 = [0.0; N];
    for i in 0..N {
        d1[i] = (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h);
        d2[i] = (-m2[i] + 16.0 * m1[i] - 30.0 * z[i] + 16.0 * p1[i] - p2[i]) / (12.0 * h * h);
    }
    (d1, d2)
}

fn fd_step(p: &SmoothedProfile) -> f64 {
    let scale = if p.degenerate { p.r } else { p.radius.min(p.r) };
    1e-3 * scale.clamp(1e-6, 1.0)
}

/// Signed hyperbolic geodesic curvature of a piece at coordinate arclength `u`.
fn hyperbolic_curvature(p: &SmoothedProfile, kind: PieceKind, u: f64) -> f64 {
    let h = fd_step(p);
    let (x1, x2) = stencil(|v| lift_shifted(p.eval(kind, v).0), u, h);
    let x = lift(p.eval(kind, u).0);
    // normal J(X × X'), then κ = ⟨X'', J(X × X')⟩ / Q(X')^{3/2}
    let n = [
        x[1] * x1[2] - x[2] * x1[1],
        x[2] * x1[0] - x[0] * x1[2],
        -(x[0] * x1[1] - x[1] * x1[0]),
    ];
    let speed2 = ldot(&x1, &x1);
    ldot(&x2, &n) / speed2.powf(1.5)
}

/// Signed Euclidean curvature of a piece in normal coordinates, from the same
/// finite-difference stencil.
pub fn flat_curvature(p: &SmoothedProfile, kind: PieceKind, u: f64) -> f64 {
    let h = fd_step(p);
    let (c1, c2) = stencil(|v| p.eval(kind, v).0, u, h);
    (c1[0] * c2[1] - c1[1] * c2[0]) / (c1[0] * c1[0] + c1[1] * c1[1]).powf(1.5)
}

/// Hyperbolic speed of a coordinate curve with position `q` and unit coordinate velocity `v`.
#[inline]
fn hyperbolic_speed(q: P2, v: P2) -> f64 {
    let rho = (q[0] * q[0] + q[1] * q[1]).sqrt();
    if rho < 1e-300 {
        return (v[0] * v[0] + v[1] * v[1]).sqrt();
    }
    let radial = (q[0] * v[0] + q[1] * v[1]) / rho;
    let angular = (q[0] * v[1] - q[1] * v[0]) / rho;
    (radial * radial + (sinhc(rho) * angular).powi(2)).sqrt()
}

const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Hyperbolic length of a piece between coordinate parameters `a` and `b`.
fn hyperbolic_length(p: &SmoothedProfile, kind: PieceKind, a: f64, b: f64) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    GL5.iter()
        .map(|(x, w)| {
            let (q, v) = p.eval(kind, mid + half * x);
            w * hyperbolic_speed(q, v)
        })
        .sum::<f64>()
        * half
}

/// Hyperbolic length of the smoothing arc.
pub fn arc_hyperbolic_length(p: &SmoothedProfile) -> f64 {
    let total = p.arc_coord_length();
    let panels = 256;
    (0..panels)
        .map(|i| {
            let a = total * i as f64 / panels as f64;
            let b = total * (i + 1) as f64 / panels as f64;
            hyperbolic_length(p, PieceKind::Arc, a, b)
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureSample {
    /// Hyperbolic arclength from the start of the profile.
    pub s: f64,
    pub kappa: f64,
    pub piece: PieceKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub samples: Vec<CurvatureSample>,
    /// `max |κ_g|` over all samples.
    pub sup_curvature: f64,
    pub arc_length: f64,
}

/// Samples the hyperbolic geodesic curvature along the whole profile.
pub fn curvature_profile(p: &SmoothedProfile) -> Result<CurvatureReport> {
    if p.samples < MIN_SAMPLES {
        return Err(Error::Config(format!(
            "at least {MIN_SAMPLES} arc samples are needed, got {}",
            p.samples
        )));
    }
    let ray_samples = (p.samples / 4).max(MIN_SAMPLES);
    let mut samples = Vec::with_capacity(p.samples + 2 * ray_samples);
    let mut offset = 0.0;
    for (kind, count) in [
        (PieceKind::IncomingRay, ray_samples),
        (PieceKind::Arc, p.samples),
        (PieceKind::OutgoingRay, ray_samples),
    ] {
        let len = p.piece_length(kind);
        let mut s = offset;
        let mut prev = 0.0;
        for i in 0..count {
            let u = len * i as f64 / (count - 1) as f64;
            if i > 0 {
                s += hyperbolic_length(p, kind, prev, u);
            }
            prev = u;
            samples.push(CurvatureSample {
                s,
                kappa: hyperbolic_curvature(p, kind, u),
                piece: kind,
            });
        }
        offset = s;
    }
    let sup_curvature = samples.iter().map(|c| c.kappa.abs()).fold(0.0, f64::max);
    Ok(CurvatureReport {
        samples,
        sup_curvature,
        arc_length: arc_hyperbolic_length(p),
    })
}

/// `sup κ_g` of the smoothed profile at each angle of an increasing grid.
pub fn decay_sweep(r: f64, thetas: &[f64]) -> Result<Vec<(f64, f64)>> {
    if thetas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput("angle grid must be strictly increasing".into()));
    }
    thetas
        .par_iter()
        .map(|&theta| {
            if !(theta > 0.0 && theta < PI) {
                return Err(Error::Domain(format!("angle {theta} outside (0, π)")));
            }
            let report = curvature_profile(&build_profile(theta, r)?)?;
            Ok((theta, report.sup_curvature))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LengthReport {
    pub arc_len: f64,
    /// Length `2r` of the corner path through the vertex.
    pub corner_len: f64,
    pub ratio: f64,
    pub strict: bool,
}

/// Compares the arc with the corner path it replaces.
pub fn length_decrease(p: &SmoothedProfile) -> Result<LengthReport> {
    if p.degenerate {
        return Err(Error::InvalidInput(
            "a straight profile has no corner to shorten".into(),
        ));
    }
    let arc_len = arc_hyperbolic_length(p);
    let corner_len = 2.0 * p.r;
    Ok(LengthReport {
        arc_len,
        corner_len,
        ratio: arc_len / corner_len,
        strict: arc_len < corner_len,
    })
}

/// Which boundary component of the ε-neighborhood of the first ray holds the point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WedgeSide {
    /// Inside the sector of angle `θ` between the rays.
    Convex,
    /// On the far side of the first ray.
    Reflex,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportQuery {
    pub theta: f64,
    pub eps: f64,
    /// Arclength along the equidistant boundary, from the end nearest the vertex.
    pub s: f64,
    pub side: WedgeSide,
    /// Drop the second ray to test a single ray's neighborhood.
    pub second_ray: bool,
}

impl SupportQuery {
    pub fn new(theta: f64, eps: f64, s: f64) -> Self {
        Self {
            theta,
            eps,
            s,
            side: WedgeSide::Convex,
            second_ray: true,
        }
    }

    pub fn side(mut self, side: WedgeSide) -> Self {
        self.side = side;
        self
    }

    pub fn single_ray(mut self) -> Self {
        self.second_ray = false;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SupportVerdict {
    Pass,
    Fail {
        /// Hyperboloid coordinates of a point of the supporting geodesic inside the neighborhood.
        witness: [f64; 3],
        /// Signed arclength from the contact point along the supporting geodesic.
        t: f64,
        /// Ray (1 or 2) whose neighborhood contains the witness.
        ray: u8,
        depth: f64,
    },
}

impl SupportVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, SupportVerdict::Pass)
    }
}

/// Distance from the vertex of the point at arclength `s` on the ε-equidistant
/// boundary of a ray: `cosh d = cosh ε · cosh(s / cosh ε)`.
pub fn vertex_distance(eps: f64, s: f64) -> f64 {
    (eps.cosh() * (s / eps.cosh()).cosh()).acosh()
}

/// Inverse of [`vertex_distance`].
pub fn arclength_for_vertex_distance(eps: f64, d: f64) -> Result<f64> {
    if !(d >= eps) {
        return Err(Error::Domain(format!(
            "points of the equidistant boundary are at distance ≥ ε = {eps} from the vertex, got {d}"
        )));
    }
    Ok((d.cosh() / eps.cosh()).max(1.0).acosh() * eps.cosh())
}

/// Geometry of the wedge in the hyperboloid: vertex at the origin, first ray
/// along `(1, 0, 0)`, second at angle `θ` counterclockwise.
struct Wedge {
    origin: P3,
    dirs: [P3; 2],
    normals: [P3; 2],
    eps: f64,
}

impl Wedge {
    fn new(theta: f64, eps: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Wedge {
            origin: [0.0, 0.0, 1.0],
            dirs: [[1.0, 0.0, 0.0], [c, s, 0.0]],
            normals: [[0.0, 1.0, 0.0], [-s, c, 0.0]],
            eps,
        }
    }

    /// Distance from `x` to ray `i`.
    fn ray_distance(&self, x: &P3, i: usize) -> f64 {
        if ldot(x, &self.dirs[i]) >= 0.0 {
            ldot(x, &self.normals[i]).asinh().abs()
        } else {
            (-ldot(x, &self.origin)).max(1.0).acosh()
        }
    }
}

fn geodesic_at(p: &P3, e: &P3, t: f64) -> P3 {
    let (c, s) = (t.cosh(), t.sinh());
    [c * p[0] + s * e[0], c * p[1] + s * e[1], c * p[2] + s * e[2]]
}

/// Whether the supporting geodesic at the boundary point `p` of the
/// ε-neighborhood of the first ray meets the neighborhood of the whole wedge
/// only at `p`. The point sits on the convex side at arclength `s`.
pub fn supporting_geodesic_check(theta: f64, eps: f64, s: f64) -> Result<SupportVerdict> {
    supporting_geodesic_check_with(&SupportQuery::new(theta, eps, s))
}

pub fn supporting_geodesic_check_with(q: &SupportQuery) -> Result<SupportVerdict> {
    if !(q.theta > 0.0 && q.theta < PI) {
        return Err(Error::Domain(format!("angle {} outside (0, π)", q.theta)));
    }
    if !(q.eps > 0.0) || !(q.s >= 0.0) {
        return Err(Error::Domain(format!(
            "need ε > 0 and s ≥ 0, got ε = {}, s = {}",
            q.eps, q.s
        )));
    }
    let wedge = Wedge::new(q.theta, q.eps);
    let sigma = match q.side {
        WedgeSide::Convex => q.eps,
        WedgeSide::Reflex => -q.eps,
    };
    let tau = q.s / q.eps.cosh();
    let foot = geodesic_at(&wedge.origin, &wedge.dirs[0], tau);
    // unit tangent of the first ray's geodesic at the foot: sinh τ·o + cosh τ·d
    let tangent = [
        tau.sinh() * wedge.origin[0] + tau.cosh() * wedge.dirs[0][0],
        tau.sinh() * wedge.origin[1] + tau.cosh() * wedge.dirs[0][1],
        tau.sinh() * wedge.origin[2] + tau.cosh() * wedge.dirs[0][2],
    ];
    let u = wedge.normals[0];
    let p = [
        sigma.cosh() * foot[0] + sigma.sinh() * u[0],
        sigma.cosh() * foot[1] + sigma.sinh() * u[1],
        sigma.cosh() * foot[2] + sigma.sinh() * u[2],
    ];

    let rays: &[usize] = if q.second_ray { &[0, 1] } else { &[0] };
    let margin = |t: f64, i: usize| wedge.ray_distance(&geodesic_at(&p, &tangent, t), i) - wedge.eps;
    const HIT: f64 = -1e-12;

    let reach = (-ldot(&p, &wedge.origin)).acosh() + 8.0;
    let steps = (reach / SUPPORT_RESOLUTION).ceil() as i64;
    let mut best: Option<(f64, usize, f64)> = None;
    for k in -steps..=steps {
        let t = k as f64 * SUPPORT_RESOLUTION;
        if t.abs() <= CONTACT_WINDOW {
            continue;
        }
        for &i in rays {
            let m = margin(t, i);
            if best.is_none_or(|(_, _, bm)| m < bm) {
                best = Some((t, i, m));
            }
        }
    }
    let Some((mut t, ray, mut m)) = best else {
        return Ok(SupportVerdict::Pass);
    };
    if m >= HIT {
        // refine the closest approach between grid points
        let (mut lo, mut hi) = (t - SUPPORT_RESOLUTION, t + SUPPORT_RESOLUTION);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let a = hi - g * (hi - lo);
            let b = lo + g * (hi - lo);
            if margin(a, ray) < margin(b, ray) {
                hi = b;
            } else {
                lo = a;
            }
        }
        let tr = 0.5 * (lo + hi);
        let mr = margin(tr, ray);
        if mr < m && tr.abs() > CONTACT_WINDOW {
            t = tr;
            m = mr;
        }
    }
    if m < HIT {
        return Ok(SupportVerdict::Fail {
            witness: geodesic_at(&p, &tangent, t),
            t,
            ray: ray as u8 + 1,
            depth: -m,
        });
    }
    Ok(SupportVerdict::Pass)
}

/// Distance from the wedge vertex to the geodesic joining the ideal endpoints of the two rays.
pub fn wedge_width_numeric(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::Domain(format!("angle {theta} outside (0, π)")));
    }
    let b1 = [1.0, 0.0, 1.0];
    let b2 = [theta.cos(), theta.sin(), 1.0];
    // normal of the plane spanned by the two null rays: J(b1 × b2)
    let n = [
        b1[1] * b2[2] - b1[2] * b2[1],
        b1[2] * b2[0] - b1[0] * b2[2],
        -(b1[0] * b2[1] - b1[1] * b2[0]),
    ];
    let q = ldot(&n, &n);
    let pairing = ldot(&[0.0, 0.0, 1.0], &n) / q.sqrt();
    Ok(pairing.abs().asinh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn calibrated_constant_holds_on_grid() {
        for i in 0..=20 {
            let theta = 2.0 + (PI - 1e-3 - 2.0) * i as f64 / 20.0;
            for r in [1e-3, 0.01, 0.1, 0.25, 0.5] {
                let p = build_profile(theta, r).unwrap();
                let kr = curvature_profile(&p).unwrap().sup_curvature * p.radius;
                assert!(kr <= CURVATURE_CONSTANT, "θ = {theta}, r = {r}: {kr}");
            }
        }
    }

    #[test]
    fn flat_limit() {
        let p = build_profile(2.0, 0.01).unwrap();
        let kr = curvature_profile(&p).unwrap().sup_curvature * p.radius;
        assert!((kr - 1.0).abs() < 0.05, "{kr}");
    }

    #[test]
    fn right_angle_geometry() {
        let p = build_profile(FRAC_PI_2, 1.0).unwrap();
        assert_abs_diff_eq!(p.radius, 1.0, epsilon = 1e-15);
        let c = p.center();
        assert_abs_diff_eq!(c[1], 2f64.sqrt(), epsilon = 1e-15);
        // the lowest arc point is at distance |c| − R from the vertex
        assert_abs_diff_eq!(p.arc_depth(), 2f64.sqrt() - 1.0, epsilon = 1e-15);
    }

    #[test]
    fn junctions_are_c1() {
        for theta in [1.0, 2.0, 3.0, PI - 1e-3] {
            let p = build_profile(theta, 0.5).unwrap();
            let (c0, c1) = p.junction_errors();
            assert!(c0 < 1e-12, "θ = {theta}: C0 gap {c0:e}");
            assert!(c1 < 1e-10, "θ = {theta}: C1 gap {c1:e}");
        }
    }

    #[test]
    fn arc_stays_inside_the_disk() {
        for theta in [0.5, 1.5, 2.5, 3.1] {
            let p = build_profile(theta, 0.5).unwrap();
            let len = p.arc_coord_length();
            for i in 1..100 {
                let (q, _) = p.eval(PieceKind::Arc, len * i as f64 / 100.0);
                assert!((q[0] * q[0] + q[1] * q[1]).sqrt() < 0.5);
            }
            // and matches the circle about the center
            let c = p.center();
            let (q, _) = p.eval(PieceKind::Arc, 0.3 * len);
            let rr = ((q[0] - c[0]).powi(2) + (q[1] - c[1]).powi(2)).sqrt();
            assert_abs_diff_eq!(rr, p.radius, epsilon = 1e-12 * p.radius.max(1.0));
        }
    }

    #[test]
    fn straight_limit() {
        let p = build_profile(PI, 0.5).unwrap();
        assert!(p.degenerate);
        assert!(p.radius.is_infinite());
        let (q, _) = p.eval(PieceKind::Arc, 0.5);
        assert_eq!(q, [0.0, 0.0]);
        let near = build_profile(PI - 1e-6, 0.5).unwrap();
        let len = near.arc_coord_length();
        let worst = (0..=20)
            .map(|i| near.eval(PieceKind::Arc, len * i as f64 / 20.0).0[1].abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-6);
        assert!(length_decrease(&p).is_err());
    }

    #[test]
    fn rays_have_zero_curvature() {
        let p = build_profile(2.0, 0.5).unwrap();
        let rep = curvature_profile(&p).unwrap();
        for c in rep.samples.iter().filter(|c| c.piece != PieceKind::Arc) {
            assert!(c.kappa.abs() < 1e-8, "{c:?}");
        }
    }

    #[test]
    fn flat_curvature_is_inverse_radius() {
        for (theta, r) in [(FRAC_PI_2, 1.0), (2.0, 0.5), (2.8, 0.3)] {
            let p = build_profile(theta, r).unwrap();
            let len = p.arc_coord_length();
            for i in 0..=10 {
                let k = flat_curvature(&p, PieceKind::Arc, len * i as f64 / 10.0);
                assert!((k - 1.0 / p.radius).abs() <= 1e-9 / p.radius, "θ={theta} k={k}");
            }
        }
    }

    #[test]
    fn near_straight_bound() {
        let theta = PI - 1e-3;
        let p = build_profile(theta, 0.5).unwrap();
        let rep = curvature_profile(&p).unwrap();
        assert!(rep.sup_curvature < 2.0 / p.radius);
        assert!(rep.sup_curvature > 0.0);
    }

    #[test]
    fn coarse_sampling_rejected() {
        let p = build_profile(2.0, 0.5).unwrap().with_samples(4);
        assert!(matches!(curvature_profile(&p), Err(Error::Config(_))));
    }

    #[test]
    fn sweep_decreases() {
        let sweep = decay_sweep(0.5, &[2.6, 2.8, 3.0, 3.1]).unwrap();
        for w in sweep.windows(2) {
            assert!(w[1].1 < w[0].1, "{sweep:?}");
        }
        let bound = 2.0 / (0.5 * 1.55f64.tan());
        assert!(sweep[3].1 < bound);
        assert_abs_diff_eq!(bound, 0.0832, epsilon = 1e-4);
        assert!(decay_sweep(0.5, &[2.0, 1.0]).is_err());
    }

    #[test]
    fn sweep_reaches_small_curvature() {
        let sweep = decay_sweep(0.5, &[3.0, 3.1, 3.13, PI - 1e-3]).unwrap();
        assert!(sweep.last().unwrap().1 < 0.01);
    }

    #[test]
    fn length_examples() {
        let p = build_profile(FRAC_PI_2, 0.5).unwrap();
        assert_abs_diff_eq!(p.arc_coord_length(), 0.25 * PI, epsilon = 1e-15);
        let rep = length_decrease(&p).unwrap();
        assert!(rep.strict);
        assert!(rep.arc_len < 1.0);
        // hyperbolic length exceeds the Euclidean one: the metric is sinh-stretched
        assert!(rep.arc_len > 0.25 * PI);
        let rep = length_decrease(&build_profile(3.1, 0.5).unwrap()).unwrap();
        assert!(rep.ratio > 0.99 && rep.ratio < 1.0, "{rep:?}");
    }

    #[test]
    fn vertex_distance_round_trip() {
        for (eps, d) in [(0.1, 0.3), (0.05, 2.0), (0.3, 4.0)] {
            let s = arclength_for_vertex_distance(eps, d).unwrap();
            assert_abs_diff_eq!(vertex_distance(eps, s), d, epsilon = 1e-12);
        }
        assert!(arclength_for_vertex_distance(0.1, 0.05).is_err());
    }

    #[test]
    fn single_ray_always_supported() {
        for s in [0.0, 0.01, 0.5, 2.0, 5.0] {
            for side in [WedgeSide::Convex, WedgeSide::Reflex] {
                let q = SupportQuery::new(2.0, 0.1, s).side(side).single_ray();
                assert!(supporting_geodesic_check_with(&q).unwrap().is_pass());
            }
        }
    }

    #[test]
    fn supported_beyond_tangency_radius() {
        let (theta, eps) = (2.0, 0.1);
        let r = trig::tangency_radius(theta, eps).unwrap();
        let s = arclength_for_vertex_distance(eps, r + 0.05).unwrap();
        assert!(supporting_geodesic_check(theta, eps, s).unwrap().is_pass());
    }

    #[test]
    fn fails_well_inside_tangency_radius() {
        let (theta, eps) = (2.0, 0.1);
        let r = trig::tangency_radius(theta, eps).unwrap();
        let s = arclength_for_vertex_distance(eps, 0.3 * r).unwrap();
        match supporting_geodesic_check(theta, eps, s).unwrap() {
            SupportVerdict::Fail { ray, witness, .. } => {
                assert_eq!(ray, 2);
                assert!((ldot(&witness, &witness) + 1.0).abs() < 1e-9);
            }
            SupportVerdict::Pass => panic!("expected a witness"),
        }
    }

    #[test]
    fn wedge_width_examples() {
        assert_abs_diff_eq!(
            wedge_width_numeric(FRAC_PI_2).unwrap(),
            (1.0 + 2f64.sqrt()).ln(),
            epsilon = 1e-12
        );
        let w = wedge_width_numeric(2.0 * PI / 3.0).unwrap();
        assert_abs_diff_eq!(w, (2.0 / 3f64.sqrt()).acosh(), epsilon = 1e-12);
        assert!(wedge_width_numeric(PI - 1e-6).unwrap() < 1e-6);
    }
}
