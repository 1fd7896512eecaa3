//! Closed-form hyperbolic trigonometry used by the bend-and-smooth construction:
//! the inversion `r(x) = log coth(x/2)`, ball volumes, the tube-width function,
//! the tangency radius of a bent wedge, the convex-hull width and the
//! smoothing-circle radius.
//!
//! All angles are radians.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest dimension supported by [`ball_volume`] and [`tube_width`].
pub const MAX_BALL_DIM: usize = 8;

/// Relative bisection stopping tolerance for [`tube_width`].
pub const TUBE_REL_TOL: f64 = 1e-12;

/// Area of the unit sphere `S^{n-1}` bounding the unit ball of `R^n`.
fn sphere_area(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        4 => 2.0 * PI * PI,
        5 => 8.0 * PI * PI / 3.0,
        6 => PI.powi(3),
        7 => 16.0 * PI.powi(3) / 15.0,
        8 => PI.powi(4) / 3.0,
        _ => unreachable!("dimension checked by caller"),
    }
}

/// `r(x) = log coth(x/2)`, a decreasing involution of `(0, ∞)`.
pub fn inversion_r(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("inversion_r needs x > 0, got {x}")));
    }
    // log((1 + e^{-x}) / (1 - e^{-x})) without cancellation at either end
    let e = (-x).exp();
    Ok(e.ln_1p() - (-(-x).exp_m1()).ln())
}

/// `∫_0^ρ sinh^k t dt` by the reduction formula.
fn sinh_power_integral(k: usize, rho: f64) -> f64 {
    match k {
        0 => rho,
        // cosh ρ − 1 written without cancellation
        1 => 2.0 * (rho / 2.0).sinh().powi(2),
        _ => {
            let kf = k as f64;
            rho.sinh().powi(k as i32 - 1) * rho.cosh() / kf
                - (kf - 1.0) / kf * sinh_power_integral(k - 2, rho)
        }
    }
}

/// Volume of the hyperbolic `n`-ball of radius `rho`:
/// `|S^{n−1}| · ∫_0^ρ sinh^{n−1} t dt`.
pub fn ball_volume(n: usize, rho: f64) -> Result<f64> {
    if !(1..=MAX_BALL_DIM).contains(&n) {
        return Err(Error::Config(format!(
            "ball volume supported for 1 ≤ n ≤ {MAX_BALL_DIM}, got {n}"
        )));
    }
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!("radius must be ≥ 0, got {rho}")));
    }
    Ok(sphere_area(n) * sinh_power_integral(n - 1, rho))
}

/// Dimension and volume for the tube-width function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TubeQuery {
    pub n: usize,
    pub area: f64,
}

impl TubeQuery {
    pub fn new(n: usize, area: f64) -> Result<Self> {
        if !(2..=MAX_BALL_DIM).contains(&n) {
            return Err(Error::Config(format!(
                "tube width supported for 2 ≤ n ≤ {MAX_BALL_DIM}, got {n}"
            )));
        }
        if !(area > 0.0) || !area.is_finite() {
            return Err(Error::Domain(format!("area must be positive, got {area}")));
        }
        Ok(Self { n, area })
    }
}

/// `c(A) = ½ (V_n ∘ r)^{-1}(A)`, found by bisection on the decreasing map
/// `x ↦ V_n(r(x))` with an automatically expanded bracket.
pub fn tube_width(q: TubeQuery) -> Result<f64> {
    let TubeQuery { n, area } = TubeQuery::new(q.n, q.area)?;
    let g = |x: f64| -> Result<f64> { ball_volume(n, inversion_r(x)?) };

    let mut lo = 1.0;
    let mut hi = 1.0;
    let mut steps = 0;
    while g(lo)? <= area {
        lo /= 2.0;
        steps += 1;
        if steps > 1100 || lo == 0.0 {
            return Err(Error::NumericBracket(format!(
                "V_{n}(r(x)) stays below A = {area} as x → 0 (last x = {lo:e})"
            )));
        }
    }
    steps = 0;
    while g(hi)? >= area {
        hi *= 2.0;
        steps += 1;
        if steps > 60 || !hi.is_finite() {
            return Err(Error::NumericBracket(format!(
                "V_{n}(r(x)) stays above A = {area} for large x (last x = {hi:e})"
            )));
        }
    }
    while hi - lo > TUBE_REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? > area {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.25 * (lo + hi))
}

fn check_angle(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::Domain(format!("angle must lie in (0, π), got {theta}")));
    }
    Ok(())
}

/// Distance from the bending locus beyond which the supporting hyperplane of
/// an ε-neighborhood of a bent wedge with dihedral angle `theta` touches it
/// only at one point:
/// `arccosh(cosh ε · √(1 + cot²(θ/2)·coth²ε))`.
pub fn tangency_radius(theta: f64, eps: f64) -> Result<f64> {
    check_angle(theta)?;
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("ε must be positive, got {eps}")));
    }
    let cot = 1.0 / (theta / 2.0).tan();
    let coth = 1.0 / eps.tanh();
    let x = cot * coth;
    Ok((eps.cosh() * (1.0 + x * x).sqrt()).acosh())
}

/// The same radius through the Lambert quadrilateral: the leg `|oq|` solves
/// `cot(θ/2) = sinh|oq| · tanh ε`, and the diagonal satisfies
/// `cosh r = cosh ε · cosh|oq|`.
pub fn tangency_radius_lambert(theta: f64, eps: f64) -> Result<f64> {
    check_angle(theta)?;
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("ε must be positive, got {eps}")));
    }
    let leg = (1.0 / ((theta / 2.0).tan() * eps.tanh())).asinh();
    Ok((eps.cosh() * leg.cosh()).acosh())
}

/// Width of the convex hull of two half-planes bent at angle `theta`,
/// thickened by `eps`: `arccosh(cosh ε / sin(θ/2))`.
pub fn hull_width(theta: f64, eps: f64) -> Result<f64> {
    check_angle(theta)?;
    if !(eps >= 0.0) {
        return Err(Error::Domain(format!("ε must be ≥ 0, got {eps}")));
    }
    let arg = eps.cosh() / (theta / 2.0).sin();
    if arg < 1.0 {
        return Err(Error::Domain(format!("arccosh argument {arg} < 1")));
    }
    Ok(arg.acosh())
}

/// Euclidean radius `r·tan(θ/2)` of the circle tangent to both wedge rays at
/// distance `r` from the vertex.
pub fn smoothing_radius(r: f64, theta: f64) -> Result<f64> {
    check_angle(theta)?;
    if !(r > 0.0) {
        return Err(Error::Domain(format!("r must be positive, got {r}")));
    }
    Ok(r * (theta / 2.0).tan())
}
