//! Unit-speed curves of prescribed geodesic curvature on `H^2` and the
//! comparison bound `d(a(t), b(t)) ≤ k(cosh t − 1)` between a geodesic `a` and
//! a curve `b` with the same initial data and curvature at most `k`.
//!
//! Curves are integrated in the hyperboloid embedding, where the curvature
//! equation reads `b̈ = b + κ(t)·n(t)` with `n` the rotation of `ḃ` by `+π/2`
//! inside `T_b H^2`. Each step is a classical fourth-order Runge–Kutta step
//! followed by orthogonal projection back onto the constraint set
//! `{⟨b, b⟩ = −1, ⟨ḃ, ḃ⟩ = 1, ⟨b, ḃ⟩ = 0}`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hyperboloid::{self, dist_unchecked, HPoint, LorentzVector, TangentVector};

/// Order of the integration scheme.
pub const METHOD_ORDER: usize = 4;
/// Largest accepted step.
pub const MAX_STEP: f64 = 0.01;
/// Constraint drift that aborts integration.
pub const DRIFT_LIMIT: f64 = 1e-6;
/// Relative slack on the comparison bound.
pub const BOUND_REL_TOL: f64 = 1e-5;
/// Absolute slack on the comparison bound.
pub const BOUND_ABS_TOL: f64 = 1e-9;

type Kappa = dyn Fn(f64) -> f64 + Send + Sync;

/// Signed geodesic curvature as a function of arclength, with a bound `k ≥ sup|κ|`.
#[derive(Clone)]
pub struct CurvatureProfile {
    kappa: Arc<Kappa>,
    bound: f64,
}

impl fmt::Debug for CurvatureProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurvatureProfile")
            .field("bound", &self.bound)
            .finish_non_exhaustive()
    }
}

impl CurvatureProfile {
    pub fn new<F>(kappa: F, bound: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(bound >= 0.0) || !bound.is_finite() {
            return Err(Error::InvalidInput(format!(
                "curvature bound must be finite and ≥ 0, got {bound}"
            )));
        }
        Ok(Self {
            kappa: Arc::new(kappa),
            bound,
        })
    }

    pub fn geodesic() -> Self {
        Self::constant(0.0)
    }

    pub fn constant(k: f64) -> Self {
        Self {
            kappa: Arc::new(move |_| k),
            bound: k.abs(),
        }
    }

    /// `κ(t) = k·sin(t)`.
    pub fn sinusoid(k: f64) -> Self {
        Self {
            kappa: Arc::new(move |t: f64| k * t.sin()),
            bound: k.abs(),
        }
    }

    /// `+k` and `−k` alternating on consecutive arclength blocks.
    pub fn alternating(k: f64, block: f64) -> Self {
        Self {
            kappa: Arc::new(move |t: f64| {
                if ((t / block).floor() as i64) % 2 == 0 {
                    k
                } else {
                    -k
                }
            }),
            bound: k.abs(),
        }
    }

    /// Profile that retraces a curve of length `horizon` backwards, starting
    /// from its endpoint with reversed velocity: `s ↦ −κ(horizon − s)`.
    pub fn reversed(&self, horizon: f64) -> Self {
        let inner = Arc::clone(&self.kappa);
        Self {
            kappa: Arc::new(move |s| -inner(horizon - s)),
            bound: self.bound,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.kappa)(t)
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    step: f64,
    project: bool,
}

impl IntegratorConfig {
    pub fn new(step: f64) -> Result<Self> {
        if !(step > 0.0 && step <= MAX_STEP) {
            return Err(Error::Config(format!(
                "step must lie in (0, {MAX_STEP}], got {step}"
            )));
        }
        Ok(Self {
            step,
            project: true,
        })
    }

    pub fn without_projection(mut self) -> Self {
        self.project = false;
        self
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn projects(&self) -> bool {
        self.project
    }

    pub fn order(&self) -> usize {
        METHOD_ORDER
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveSample {
    pub t: f64,
    pub point: HPoint,
    pub tangent: TangentVector,
}

/// Samples of a unit-speed curve at `t = 0, h, 2h, …, T`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve {
    step: f64,
    samples: Vec<CurveSample>,
}

impl SampledCurve {
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn samples(&self) -> &[CurveSample] {
        &self.samples
    }

    pub fn first(&self) -> &CurveSample {
        &self.samples[0]
    }

    pub fn last(&self) -> &CurveSample {
        self.samples.last().expect("a sampled curve is never empty")
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

type State = [[f64; 3]; 2];

#[inline]
fn ldot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
}

/// In-plane normal `J(b × v)`: the tangent `v` rotated by `+π/2` at `b`.
#[inline]
fn rotated_normal(b: &[f64; 3], v: &[f64; 3]) -> [f64; 3] {
    [
        b[1] * v[2] - b[2] * v[1],
        b[2] * v[0] - b[0] * v[2],
        -(b[0] * v[1] - b[1] * v[0]),
    ]
}

#[inline]
fn field(kappa: f64, y: &State) -> State {
    let [b, v] = y;
    let n = rotated_normal(b, v);
    [
        *v,
        [
            b[0] + kappa * n[0],
            b[1] + kappa * n[1],
            b[2] + kappa * n[2],
        ],
    ]
}

#[inline]
fn axpy(y: &State, a: f64, k: &State) -> State {
    let mut out = *y;
    for (row, krow) in out.iter_mut().zip(k) {
        for (x, dx) in row.iter_mut().zip(krow) {
            *x += a * dx;
        }
    }
    out
}

fn rk4_step(profile: &CurvatureProfile, t: f64, h: f64, y: &State) -> State {
    let k1 = field(profile.eval(t), y);
    let k2 = field(profile.eval(t + 0.5 * h), &axpy(y, 0.5 * h, &k1));
    let k3 = field(profile.eval(t + 0.5 * h), &axpy(y, 0.5 * h, &k2));
    let k4 = field(profile.eval(t + h), &axpy(y, h, &k3));
    let mut out = *y;
    for r in 0..2 {
        for c in 0..3 {
            out[r][c] += h / 6.0 * (k1[r][c] + 2.0 * k2[r][c] + 2.0 * k3[r][c] + k4[r][c]);
        }
    }
    out
}

fn drift(y: &State) -> f64 {
    let [b, v] = y;
    (ldot(b, b) + 1.0)
        .abs()
        .max((ldot(v, v) - 1.0).abs())
        .max(ldot(b, v).abs())
}

fn project(y: &State) -> State {
    let [b, v] = y;
    let s = 1.0 / (-ldot(b, b)).sqrt();
    let b = [b[0] * s, b[1] * s, b[2] * s];
    let ip = ldot(&b, v);
    let v = [v[0] + ip * b[0], v[1] + ip * b[1], v[2] + ip * b[2]];
    let s = 1.0 / ldot(&v, &v).sqrt();
    [b, [v[0] * s, v[1] * s, v[2] * s]]
}

fn sample(t: f64, y: &State) -> CurveSample {
    let point = HPoint::renormalized(LorentzVector::from_vec_unchecked(y[0].to_vec()));
    let tangent =
        TangentVector::from_parts_unchecked(point.clone(), LorentzVector::from_vec_unchecked(y[1].to_vec()));
    CurveSample { t, point, tangent }
}

/// Integrates the unit-speed curve with curvature `profile` starting at the
/// base of `start` with velocity `start` for arclength `horizon`.
///
/// The step is shrunk slightly when needed so that samples land exactly on `horizon`.
pub fn integrate_curve(
    start: &TangentVector,
    profile: &CurvatureProfile,
    horizon: f64,
    cfg: &IntegratorConfig,
) -> Result<SampledCurve> {
    if start.base().coords().len() != 3 {
        return Err(Error::InvalidInput(format!(
            "curve integration works on H^2, got H^{}",
            start.base().dim()
        )));
    }
    if !start.is_unit() {
        return Err(Error::InvalidInput("initial velocity must be unit".into()));
    }
    if !(horizon >= 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidInput(format!("horizon must be ≥ 0, got {horizon}")));
    }
    let steps = ((horizon / cfg.step) - 1e-9).ceil().max(0.0) as usize;
    let h = if steps == 0 { cfg.step } else { horizon / steps as f64 };

    let b = start.base().coords();
    let v = start.dir().coords();
    let mut y: State = [[b[0], b[1], b[2]], [v[0], v[1], v[2]]];
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(sample(0.0, &y));
    let slack = profile.bound() * (1.0 + 1e-12) + 1e-300;
    for i in 0..steps {
        let t = i as f64 * h;
        let kappa = profile.eval(t);
        if kappa.abs() > slack || !kappa.is_finite() {
            return Err(Error::InvalidInput(format!(
                "curvature {kappa} at t = {t} exceeds the declared bound {}",
                profile.bound()
            )));
        }
        y = rk4_step(profile, t, h, &y);
        let d = drift(&y);
        if !(d <= DRIFT_LIMIT) {
            return Err(Error::Integration(format!(
                "constraint drift {d:e} at t = {} exceeds {DRIFT_LIMIT:e}",
                t + h
            )));
        }
        if cfg.project {
            y = project(&y);
        }
        samples.push(sample((i + 1) as f64 * h, &y));
    }
    Ok(SampledCurve { step: h, samples })
}

/// `k(cosh t − 1)`, evaluated as `2k·sinh²(t/2)` to keep precision at small `t`.
pub fn deviation_bound(k: f64, t: f64) -> f64 {
    2.0 * k * (t / 2.0).sinh().powi(2)
}

#[inline]
fn within_bound(d: f64, bound: f64) -> bool {
    d <= bound * (1.0 + BOUND_REL_TOL) + BOUND_ABS_TOL
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComparisonReport {
    pub k: f64,
    pub horizon: f64,
    pub step: f64,
    /// `sup d(a(t), b(t)) / (k(cosh t − 1))` over `t ∈ [h, T]`.
    pub max_ratio: f64,
    /// Arclength at which `max_ratio` is attained.
    pub worst_t: f64,
    pub pass: bool,
}

/// Integrates a geodesic `a` and the constant-curvature curve `b` (`κ ≡ k`)
/// with the same initial data and checks the comparison bound at every sample.
pub fn verify_comparison(k: f64, horizon: f64, cfg: &IntegratorConfig) -> Result<ComparisonReport> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::InvalidInput(format!("k must lie in (0, 1), got {k}")));
    }
    verify_comparison_with(&CurvatureProfile::constant(k), horizon, cfg)
}

/// As [`verify_comparison`] for an arbitrary profile; the bound uses `profile.bound()`.
pub fn verify_comparison_with(
    profile: &CurvatureProfile,
    horizon: f64,
    cfg: &IntegratorConfig,
) -> Result<ComparisonReport> {
    if !(horizon > 0.0 && horizon <= 6.0) {
        return Err(Error::InvalidInput(format!(
            "horizon must lie in (0, 6], got {horizon}"
        )));
    }
    let start = standard_start();
    let a = integrate_curve(&start, &CurvatureProfile::geodesic(), horizon, cfg)?;
    let b = integrate_curve(&start, profile, horizon, cfg)?;
    let k = profile.bound();
    let mut max_ratio = 0.0f64;
    let mut worst_t = 0.0;
    let mut pass = true;
    for (sa, sb) in a.samples.iter().zip(&b.samples).skip(1) {
        let d = dist_unchecked(sa.point.coords(), sb.point.coords());
        let bound = deviation_bound(k, sa.t);
        pass &= within_bound(d, bound);
        let ratio = if bound > 0.0 {
            d / bound
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        if ratio > max_ratio {
            max_ratio = ratio;
            worst_t = sa.t;
        }
    }
    Ok(ComparisonReport {
        k,
        horizon,
        step: a.step,
        max_ratio,
        worst_t,
        pass,
    })
}

/// Unit tangent `(1, 0, 0)` at the origin of `H^2`.
pub fn standard_start() -> TangentVector {
    TangentVector::from_parts_unchecked(
        HPoint::origin(2),
        LorentzVector::from_vec_unchecked(vec![1.0, 0.0, 0.0]),
    )
}

/// Whether every sample of the curve stays within the comparison bound of the
/// geodesic with the curve's initial data, i.e. inside the `k`-cone about it.
pub fn cone_trap_check(curve: &SampledCurve, k: f64) -> bool {
    let start = &curve.first().tangent;
    curve.samples.iter().all(|s| {
        let axis = match hyperboloid::geodesic_point(start, s.t) {
            Ok(p) => p,
            Err(_) => return false,
        };
        let d = dist_unchecked(axis.coords(), s.point.coords());
        within_bound(d, deviation_bound(k, s.t))
    })
}
