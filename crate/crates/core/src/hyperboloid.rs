//! Hyperboloid-model primitives for `H^m` inside Minkowski space `R^{m,1}`.
//!
//! The bilinear form has signature `(+, …, +, −)` with the time coordinate
//! last: `⟨x, y⟩ = Σ_{i<m} x_i y_i − x_m y_m`. Points of `H^m` are the vectors
//! with `⟨x, x⟩ = −1` and positive last coordinate.
//!
//! Constructors accept inputs within [`NORMALIZE_TOL`] of their constraint set
//! and renormalize them; anything further away is rejected.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Inputs farther than this from their constraint set are rejected.
pub const NORMALIZE_TOL: f64 = 1e-6;
/// Tolerance for constraints that must already hold (unit tangents, sheets).
pub const CONSTRAINT_TOL: f64 = 1e-9;
/// Window around `|⟨u1, u2⟩| = 1` reported as tangency.
pub const TANGENCY_WINDOW: f64 = 1e-12;
/// Pairings of boundary points with a normal closer to zero than this are on the limit set.
pub const LIMIT_WINDOW: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct LorentzVector {
    coords: Vec<f64>,
}

impl LorentzVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "a Lorentz vector needs at least 3 coordinates, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        Ok(Self { coords })
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Dimension `m` of the hyperbolic space this vector lives over.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Quadratic form `Q(x) = ⟨x, x⟩`.
    pub fn form(&self) -> f64 {
        dot(&self.coords, &self.coords)
    }

    pub fn time(&self) -> f64 {
        self.coords[self.coords.len() - 1]
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_vec_unchecked(self.coords.iter().map(|c| c * s).collect())
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self::from_vec_unchecked(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(1.0, other, -1.0)
    }

    /// Euclidean max-norm distance in coordinates, used for coincidence tests.
    pub fn coord_distance(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// Applies a linear map (e.g. an isometry) given as a square matrix.
    pub fn apply(&self, g: &DMatrix<f64>) -> Result<Self> {
        if g.nrows() != self.len() || g.ncols() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: g.nrows(),
            });
        }
        let out = (0..self.len())
            .map(|i| (0..self.len()).map(|j| g[(i, j)] * self.coords[j]).sum())
            .collect();
        Ok(Self::from_vec_unchecked(out))
    }
}

#[inline]
pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    let m = x.len() - 1;
    let space: f64 = x[..m].iter().zip(&y[..m]).map(|(a, b)| a * b).sum();
    space - x[m] * y[m]
}

pub fn lorentz_inner(x: &LorentzVector, y: &LorentzVector) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(dot(&x.coords, &y.coords))
}

/// A point of `H^m` on the upper sheet.
#[derive(Clone, Debug, PartialEq)]
pub struct HPoint {
    v: LorentzVector,
}

impl HPoint {
    pub fn new(v: LorentzVector) -> Result<Self> {
        let q = v.form();
        if (q + 1.0).abs() > NORMALIZE_TOL || v.time() <= 0.0 {
            return Err(Error::InvalidPoint(format!(
                "Q = {q}, time coordinate = {}",
                v.time()
            )));
        }
        Ok(Self::renormalized(v))
    }

    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        Self::new(LorentzVector::new(coords)?)
    }

    /// The basepoint `(0, …, 0, 1)` of `H^m`.
    pub fn origin(m: usize) -> Self {
        let mut c = vec![0.0; m + 1];
        c[m] = 1.0;
        Self {
            v: LorentzVector::from_vec_unchecked(c),
        }
    }

    /// Lifts a point given in geodesic polar form about the origin: the point
    /// at distance `|x|` in direction `x / |x|` (normal coordinates).
    pub fn from_normal_coords(x: &[f64]) -> Self {
        let rho = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        let factor = sinhc(rho);
        let mut c: Vec<f64> = x.iter().map(|xi| xi * factor).collect();
        c.push(rho.cosh());
        Self {
            v: LorentzVector::from_vec_unchecked(c),
        }
    }

    pub(crate) fn renormalized(v: LorentzVector) -> Self {
        let q = v.form();
        let s = 1.0 / (-q).sqrt();
        Self { v: v.scale(s) }
    }

    pub fn vector(&self) -> &LorentzVector {
        &self.v
    }

    pub fn coords(&self) -> &[f64] {
        self.v.coords()
    }

    pub fn dim(&self) -> usize {
        self.v.dim()
    }

    /// Image under a matrix preserving the form, renormalized.
    pub fn apply(&self, g: &DMatrix<f64>) -> Result<Self> {
        Self::new(self.v.apply(g)?)
    }
}

/// `sinh(ρ)/ρ`, with the removable singularity filled in.
pub(crate) fn sinhc(rho: f64) -> f64 {
    if rho.abs() < 1e-4 {
        1.0 + rho * rho / 6.0
    } else {
        rho.sinh() / rho
    }
}

/// A tangent vector at a point of `H^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    base: HPoint,
    dir: LorentzVector,
}

impl TangentVector {
    /// Builds a tangent vector, projecting away a small normal component.
    pub fn new(base: HPoint, dir: LorentzVector) -> Result<Self> {
        if dir.len() != base.v.len() {
            return Err(Error::DimensionMismatch {
                expected: base.v.len(),
                got: dir.len(),
            });
        }
        let ip = dot(base.coords(), dir.coords());
        if ip.abs() > NORMALIZE_TOL {
            return Err(Error::InvalidInput(format!(
                "direction is not orthogonal to its base point: ⟨p, v⟩ = {ip}"
            )));
        }
        let dir = dir.combine(1.0, &base.v, ip);
        Ok(Self { base, dir })
    }

    /// Builds a unit tangent vector from a direction within tolerance of unit length.
    pub fn unit(base: HPoint, dir: LorentzVector) -> Result<Self> {
        let t = Self::new(base, dir)?;
        let q = t.dir.form();
        if (q - 1.0).abs() > NORMALIZE_TOL {
            return Err(Error::InvalidInput(format!(
                "tangent direction is not unit: Q = {q}"
            )));
        }
        Ok(t.normalized())
    }

    pub(crate) fn from_parts_unchecked(base: HPoint, dir: LorentzVector) -> Self {
        Self { base, dir }
    }

    /// Rescales to unit length. Zero vectors are returned unchanged.
    pub fn normalized(&self) -> Self {
        let q = self.dir.form();
        if q <= 0.0 {
            return self.clone();
        }
        Self {
            base: self.base.clone(),
            dir: self.dir.scale(1.0 / q.sqrt()),
        }
    }

    pub fn base(&self) -> &HPoint {
        &self.base
    }

    pub fn dir(&self) -> &LorentzVector {
        &self.dir
    }

    pub fn norm(&self) -> f64 {
        self.dir.form().max(0.0).sqrt()
    }

    pub fn is_unit(&self) -> bool {
        (self.dir.form() - 1.0).abs() <= CONSTRAINT_TOL
    }
}

/// Totally geodesic hyperplane `{x : ⟨x, u⟩ = 0}` with unit spacelike normal `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    normal: LorentzVector,
}

impl Hyperplane {
    pub fn new(normal: LorentzVector) -> Result<Self> {
        let q = normal.form();
        if (q - 1.0).abs() > NORMALIZE_TOL {
            return Err(Error::InvalidInput(format!(
                "hyperplane normal is not unit spacelike: Q = {q}"
            )));
        }
        Ok(Self {
            normal: normal.scale(1.0 / q.sqrt()),
        })
    }

    /// Normalizes any spacelike vector into a hyperplane normal.
    pub fn from_spacelike(v: LorentzVector) -> Result<Self> {
        let q = v.form();
        if q <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "normal must be spacelike, got Q = {q}"
            )));
        }
        Ok(Self {
            normal: v.scale(1.0 / q.sqrt()),
        })
    }

    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        Self::new(LorentzVector::new(coords)?)
    }

    pub fn normal(&self) -> &LorentzVector {
        &self.normal
    }

    pub fn contains(&self, p: &HPoint, tol: f64) -> bool {
        dot(p.coords(), self.normal.coords()).abs() <= tol
    }
}

/// Point on the sphere at infinity, stored as a lightlike ray with time coordinate 1.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPoint {
    ray: LorentzVector,
}

impl BoundaryPoint {
    pub fn new(ray: LorentzVector) -> Result<Self> {
        let t = ray.time();
        if t <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "boundary ray must be future pointing, time = {t}"
            )));
        }
        let scaled = ray.scale(1.0 / t);
        if scaled.form().abs() > NORMALIZE_TOL {
            return Err(Error::InvalidInput(format!(
                "boundary ray is not lightlike: Q = {}",
                scaled.form()
            )));
        }
        // put the spatial part exactly on the unit sphere
        let m = scaled.dim();
        let norm = scaled.coords()[..m]
            .iter()
            .map(|c| c * c)
            .sum::<f64>()
            .sqrt();
        let mut c: Vec<f64> = scaled.coords()[..m].iter().map(|x| x / norm).collect();
        c.push(1.0);
        Ok(Self {
            ray: LorentzVector::from_vec_unchecked(c),
        })
    }

    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        Self::new(LorentzVector::new(coords)?)
    }

    /// Boundary point of `H^2` at the given ideal angle.
    pub fn from_angle(angle: f64) -> Self {
        Self {
            ray: LorentzVector::from_vec_unchecked(vec![angle.cos(), angle.sin(), 1.0]),
        }
    }

    pub fn ray(&self) -> &LorentzVector {
        &self.ray
    }

    /// Applies a Lorentz matrix and renormalizes the image ray.
    pub fn apply(&self, g: &DMatrix<f64>) -> Result<Self> {
        Self::new(self.ray.apply(g)?)
    }
}

/// Hyperbolic distance. Uses `2·asinh(√Q(p−q)/2)` for nearby points where
/// `acosh` loses precision.
pub fn dist(p: &HPoint, q: &HPoint) -> Result<f64> {
    if p.coords().len() != q.coords().len() {
        return Err(Error::DimensionMismatch {
            expected: p.coords().len(),
            got: q.coords().len(),
        });
    }
    let c = -dot(p.coords(), q.coords());
    if c < 1.0 - CONSTRAINT_TOL {
        return Err(Error::InvalidPoint(format!("−⟨p, q⟩ = {c} < 1")));
    }
    Ok(dist_unchecked(p.coords(), q.coords()))
}

pub(crate) fn dist_unchecked(p: &[f64], q: &[f64]) -> f64 {
    let c = -dot(p, q);
    if c < 2.0 {
        let diff: Vec<f64> = p.iter().zip(q).map(|(a, b)| a - b).collect();
        let w = dot(&diff, &diff).max(0.0);
        2.0 * (w.sqrt() / 2.0).asinh()
    } else {
        c.acosh()
    }
}

/// Point at signed arclength `t` along the geodesic with unit initial velocity `v`.
pub fn geodesic_point(v: &TangentVector, t: f64) -> Result<HPoint> {
    check_unit(v)?;
    Ok(HPoint::renormalized(
        v.base.v.combine(t.cosh(), &v.dir, t.sinh()),
    ))
}

/// Velocity of the same geodesic at time `t` (parallel transport of `v` along itself).
pub fn geodesic_velocity(v: &TangentVector, t: f64) -> Result<TangentVector> {
    let base = geodesic_point(v, t)?;
    let dir = v.base.v.combine(t.sinh(), &v.dir, t.cosh());
    Ok(TangentVector::new(base, dir)?.normalized())
}

fn check_unit(v: &TangentVector) -> Result<()> {
    let q = v.dir.form();
    if (q - 1.0).abs() > CONSTRAINT_TOL {
        return Err(Error::InvalidInput(format!(
            "geodesic needs a unit tangent, Q = {q}"
        )));
    }
    let ip = dot(v.base.coords(), v.dir.coords());
    if ip.abs() > CONSTRAINT_TOL {
        return Err(Error::InvalidInput(format!(
            "tangent is not orthogonal to its base point: {ip}"
        )));
    }
    Ok(())
}

/// Relative position of two totally geodesic hyperplanes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HyperplaneAngle {
    /// Transverse intersection; angle in `(0, π/2]`.
    Intersecting(f64),
    /// `|⟨u1, u2⟩| = 1` within [`TANGENCY_WINDOW`]: asymptotic at one ideal point.
    Tangent,
    /// Ultraparallel, with the given separation.
    Disjoint(f64),
    /// The same hyperplane (normals equal up to sign).
    Coincident,
}

pub fn hyperplane_angle(u1: &Hyperplane, u2: &Hyperplane) -> Result<HyperplaneAngle> {
    for u in [u1, u2] {
        let q = u.normal.form();
        if (q - 1.0).abs() > NORMALIZE_TOL {
            return Err(Error::InvalidInput(format!("non-unit normal, Q = {q}")));
        }
    }
    let c = lorentz_inner(&u1.normal, &u2.normal)?;
    let a = c.abs();
    if (a - 1.0).abs() <= TANGENCY_WINDOW {
        let same = u1.normal.coord_distance(&u2.normal) <= TANGENCY_WINDOW.sqrt()
            || u1.normal.coord_distance(&u2.normal.scale(-1.0)) <= TANGENCY_WINDOW.sqrt();
        return Ok(if same {
            HyperplaneAngle::Coincident
        } else {
            HyperplaneAngle::Tangent
        });
    }
    if a < 1.0 {
        Ok(HyperplaneAngle::Intersecting(a.acos()))
    } else {
        Ok(HyperplaneAngle::Disjoint(a.acosh()))
    }
}

/// Nearest-point projection onto a hyperplane, with the signed distance
/// `d` satisfying `sinh d = ⟨x, u⟩`.
pub fn project_to_hyperplane(x: &HPoint, u: &Hyperplane) -> Result<(HPoint, f64)> {
    let s = lorentz_inner(x.vector(), &u.normal)?;
    let d = s.asinh();
    let foot = x.v.combine(1.0, &u.normal, -s).scale(1.0 / d.cosh());
    Ok((HPoint::renormalized(foot), d))
}

/// Pushes a point of the hyperplane a signed distance `t` along the normal.
pub fn push_off(p: &HPoint, u: &Hyperplane, t: f64) -> Result<HPoint> {
    let s = lorentz_inner(p.vector(), &u.normal)?;
    if s.abs() > NORMALIZE_TOL {
        return Err(Error::InvalidInput(format!(
            "point is not on the hyperplane: ⟨p, u⟩ = {s}"
        )));
    }
    let on_plane = p.v.combine(1.0, &u.normal, -s);
    Ok(HPoint::renormalized(
        on_plane.combine(t.cosh(), &u.normal, t.sinh()),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Separation {
    Separated,
    SameSide,
    OnLimit,
}

/// Whether the hyperplane's complement puts the two boundary points in different components.
pub fn separates(u: &Hyperplane, b1: &BoundaryPoint, b2: &BoundaryPoint) -> Result<Separation> {
    let s1 = lorentz_inner(b1.ray(), &u.normal)?;
    let s2 = lorentz_inner(b2.ray(), &u.normal)?;
    if s1.abs() <= LIMIT_WINDOW || s2.abs() <= LIMIT_WINDOW {
        return Ok(Separation::OnLimit);
    }
    Ok(if s1.signum() * s2.signum() < 0.0 {
        Separation::Separated
    } else {
        Separation::SameSide
    })
}

/// The Gram matrix `J = diag(1, …, 1, −1)` of the form on `R^{m,1}`.
pub fn minkowski_gram(m: usize) -> DMatrix<f64> {
    let mut j = DMatrix::identity(m + 1, m + 1);
    j[(m, m)] = -1.0;
    j
}

/// `max |GᵀJG − J|` entrywise.
pub fn lorentz_defect(g: &DMatrix<f64>) -> f64 {
    let n = g.nrows();
    let j = minkowski_gram(n - 1);
    let d = g.transpose() * &j * g - j;
    d.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Checks `GᵀJG = J` to the given tolerance.
pub fn is_lorentz(g: &DMatrix<f64>, tol: f64) -> bool {
    g.is_square() && g.nrows() >= 3 && lorentz_defect(g) <= tol
}

/// Boost of rapidity `phi` mixing spatial axis `axis` with time.
pub fn boost(m: usize, axis: usize, phi: f64) -> DMatrix<f64> {
    let mut g = DMatrix::identity(m + 1, m + 1);
    g[(axis, axis)] = phi.cosh();
    g[(m, m)] = phi.cosh();
    g[(axis, m)] = phi.sinh();
    g[(m, axis)] = phi.sinh();
    g
}

/// Rotation by `angle` in the spatial coordinate plane `(i, j)`.
pub fn rotation(m: usize, i: usize, j: usize, angle: f64) -> DMatrix<f64> {
    let mut g = DMatrix::identity(m + 1, m + 1);
    let (s, c) = angle.sin_cos();
    g[(i, i)] = c;
    g[(j, j)] = c;
    g[(i, j)] = -s;
    g[(j, i)] = s;
    g
}
