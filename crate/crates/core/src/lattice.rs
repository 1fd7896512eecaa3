//! Exact arithmetic in real quadratic fields `ℚ(√d)` and integral orthogonal
//! groups of quadratic forms over their rings of integers.
//!
//! Field elements are `a + b√d` with rational `a, b`. The distinguished real
//! embedding sends `√d ↦ +√d`; the Galois conjugate `σ` sends it to `−√d`.
//! Heights and serialized matrices use coordinates in the integral basis of
//! the ring of integers.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperboloid::{Hyperplane, LorentzVector};

type Q = Ratio<i128>;

/// Largest supported matrix size for enumeration.
pub const MAX_ENUM_DIM: usize = 3;
/// Largest supported height for enumeration.
pub const MAX_HEIGHT: i64 = 4;
/// Cap on the number of normals scanned by [`angle_search`].
pub const MAX_ANGLE_VECTORS: usize = 20_000;
/// Bins of the angle histogram over `(0, π)`.
pub const HISTOGRAM_BINS: usize = 36;

fn is_squarefree(d: i64) -> bool {
    let mut k = 2i64;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Integral basis `{1, ω}` of the ring of integers of `ℚ(√d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "basis", rename_all = "snake_case")]
pub enum RingBasis {
    /// `ω = √d`, when `d ≢ 1 (mod 4)`.
    Sqrt { d: i64 },
    /// `ω = (1 + √d)/2`, when `d ≡ 1 (mod 4)`.
    HalfSqrt { d: i64 },
}

impl RingBasis {
    pub fn d(&self) -> i64 {
        match *self {
            RingBasis::Sqrt { d } | RingBasis::HalfSqrt { d } => d,
        }
    }

    /// The element `ω`.
    pub fn omega(&self) -> QuadElem {
        let d = self.d();
        match self {
            RingBasis::Sqrt { .. } => QuadElem::sqrt_d(d),
            RingBasis::HalfSqrt { .. } => {
                QuadElem::new(d, Q::new(1, 2), Q::new(1, 2))
            }
        }
    }
}

impl fmt::Display for RingBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingBasis::Sqrt { d } => write!(f, "{{1, √{d}}}"),
            RingBasis::HalfSqrt { d } => write!(f, "{{1, (1+√{d})/2}}"),
        }
    }
}

pub fn ring_basis(d: i64) -> Result<RingBasis> {
    if d <= 1 || !is_squarefree(d) {
        return Err(Error::InvalidInput(format!(
            "d must be a squarefree integer > 1, got {d}"
        )));
    }
    Ok(if d.rem_euclid(4) == 1 {
        RingBasis::HalfSqrt { d }
    } else {
        RingBasis::Sqrt { d }
    })
}

/// Element `a + b√d` of `ℚ(√d)`.
///
/// Arithmetic between elements of different fields panics.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadElem {
    a: Q,
    b: Q,
    d: i64,
}

impl QuadElem {
    pub fn new(d: i64, a: Q, b: Q) -> Self {
        QuadElem { a, b, d }
    }

    pub fn from_int(d: i64, n: i64) -> Self {
        Self::new(d, Q::from(n as i128), Q::zero())
    }

    pub fn zero(d: i64) -> Self {
        Self::from_int(d, 0)
    }

    pub fn one(d: i64) -> Self {
        Self::from_int(d, 1)
    }

    pub fn sqrt_d(d: i64) -> Self {
        Self::new(d, Q::zero(), Q::one())
    }

    /// `x + y·ω` in the integral basis.
    pub fn from_basis(d: i64, x: i64, y: i64) -> Self {
        let (x, y) = (x as i128, y as i128);
        if d.rem_euclid(4) == 1 {
            Self::new(d, Q::new(2 * x + y, 2), Q::new(y, 2))
        } else {
            Self::new(d, Q::from(x), Q::from(y))
        }
    }

    /// Integral-basis coordinates, or `None` if the element is not an algebraic integer.
    pub fn to_basis(&self) -> Option<(i64, i64)> {
        let two = Q::from(2);
        let (p, q) = (self.a * two, self.b * two);
        if !p.is_integer() || !q.is_integer() {
            return None;
        }
        let (p, q) = (p.to_integer(), q.to_integer());
        if self.d.rem_euclid(4) == 1 {
            if (p - q).rem_euclid(2) != 0 {
                return None;
            }
            Some((((p - q) / 2) as i64, q as i64))
        } else {
            if p % 2 != 0 || q % 2 != 0 {
                return None;
            }
            Some(((p / 2) as i64, (q / 2) as i64))
        }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn rational_part(&self) -> Q {
        self.a
    }

    pub fn sqrt_part(&self) -> Q {
        self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Galois conjugate `σ`.
    pub fn conj(&self) -> Self {
        Self::new(self.d, self.a, -self.b)
    }

    /// Field norm `a² − d b²`.
    pub fn norm(&self) -> Q {
        self.a * self.a - Q::from(self.d as i128) * self.b * self.b
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("division by zero in ℚ(√d)".into()));
        }
        let n = self.norm();
        Ok(Self::new(self.d, self.a / n, -self.b / n))
    }

    /// Exact sign in the distinguished embedding.
    pub fn signum(&self) -> i32 {
        let sa = sign_q(&self.a);
        let sb = sign_q(&self.b);
        if sa == 0 || sb == 0 || sa == sb {
            return if sa != 0 { sa } else { sb };
        }
        // opposite signs: the larger of a² and d b² wins
        let cmp = sign_q(&self.norm());
        if sa > 0 {
            cmp
        } else {
            -cmp
        }
    }

    /// Exact sign in the conjugate embedding.
    pub fn signum_conj(&self) -> i32 {
        self.conj().signum()
    }

    pub fn to_f64(&self) -> f64 {
        q_to_f64(&self.a) + q_to_f64(&self.b) * (self.d as f64).sqrt()
    }

    pub fn to_f64_conj(&self) -> f64 {
        self.conj().to_f64()
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.d, other.d, "mixing elements of different quadratic fields");
    }
}

fn sign_q(q: &Q) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

fn q_to_f64(q: &Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√{}", self.b, self.d),
            _ => write!(f, "{} + {}√{}", self.a, self.b, self.d),
        }
    }
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, o: &QuadElem) -> QuadElem {
        self.check(o);
        QuadElem::new(self.d, self.a + o.a, self.b + o.b)
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, o: &QuadElem) -> QuadElem {
        self.check(o);
        QuadElem::new(self.d, self.a - o.a, self.b - o.b)
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, o: &QuadElem) -> QuadElem {
        self.check(o);
        let d = Q::from(self.d as i128);
        QuadElem::new(
            self.d,
            self.a * o.a + d * self.b * o.b,
            self.a * o.b + self.b * o.a,
        )
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem::new(self.d, -self.a, -self.b)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadElem {
            type Output = QuadElem;
            fn $m(self, o: QuadElem) -> QuadElem {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Square matrix over `ℚ(√d)`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadMatrix {
    n: usize,
    d: i64,
    entries: Vec<QuadElem>,
}

impl QuadMatrix {
    pub fn new(d: i64, n: usize, entries: Vec<QuadElem>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        if let Some(e) = entries.iter().find(|e| e.d != d) {
            return Err(Error::InvalidInput(format!(
                "entry {e} lives in ℚ(√{}), not ℚ(√{d})",
                e.d
            )));
        }
        Ok(QuadMatrix { n, d, entries })
    }

    pub fn identity(d: i64, n: usize) -> Self {
        Self::diagonal(d, &vec![QuadElem::one(d); n])
    }

    pub fn diagonal(d: i64, diag: &[QuadElem]) -> Self {
        let n = diag.len();
        let mut entries = vec![QuadElem::zero(d); n * n];
        for (i, x) in diag.iter().enumerate() {
            entries[i * n + i] = x.clone();
        }
        QuadMatrix { n, d, entries }
    }

    /// Matrix from integral-basis coordinates `(x, y)` of each entry.
    pub fn from_basis(d: i64, rows: &[Vec<(i64, i64)>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            entries.extend(row.iter().map(|&(x, y)| QuadElem::from_basis(d, x, y)));
        }
        Self::new(d, n, entries)
    }

    /// Integral-basis coordinates of every entry, if all are algebraic integers.
    pub fn to_basis(&self) -> Option<Vec<Vec<(i64, i64)>>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_basis()).collect())
            .collect()
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadElem {
        &self.entries[i * self.n + j]
    }

    pub fn transpose(&self) -> Self {
        let entries = (0..self.n * self.n)
            .map(|k| self.get(k % self.n, k / self.n).clone())
            .collect();
        QuadMatrix { n: self.n, d: self.d, entries }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: o.n,
            });
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = QuadElem::zero(self.d);
                for k in 0..n {
                    acc = &acc + &(self.get(i, k) * o.get(k, j));
                }
                entries.push(acc);
            }
        }
        Self::new(self.d, n, entries)
    }

    pub fn apply(&self, v: &[QuadElem]) -> Vec<QuadElem> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(QuadElem::zero(self.d), |acc, k| {
                    &acc + &(self.get(i, k) * &v[k])
                })
            })
            .collect()
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j).to_f64())
    }

    fn height(&self) -> Option<i64> {
        let coords = self.to_basis()?;
        Some(
            coords
                .iter()
                .flatten()
                .map(|&(x, y)| x.abs().max(y.abs()))
                .max()
                .unwrap_or(0),
        )
    }
}

/// Symmetric matrix over `ℚ(√d)` viewed as a quadratic form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadForm {
    m: QuadMatrix,
}

impl QuadForm {
    pub fn new(m: QuadMatrix) -> Result<Self> {
        if m != m.transpose() {
            return Err(Error::InvalidInput("form matrix is not symmetric".into()));
        }
        Ok(QuadForm { m })
    }

    pub fn diagonal(d: i64, diag: &[QuadElem]) -> Self {
        QuadForm {
            m: QuadMatrix::diagonal(d, diag),
        }
    }

    /// `x₀² + … + x_{n−1}² − √d·x_n²`.
    pub fn standard(d: i64, size: usize) -> Self {
        let mut diag = vec![QuadElem::one(d); size];
        diag[size - 1] = -&QuadElem::sqrt_d(d);
        Self::diagonal(d, &diag)
    }

    pub fn matrix(&self) -> &QuadMatrix {
        &self.m
    }

    pub fn size(&self) -> usize {
        self.m.n
    }

    pub fn d(&self) -> i64 {
        self.m.d
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| i == j || self.m.get(i, j).is_zero()))
    }

    pub fn bilinear(&self, u: &[QuadElem], v: &[QuadElem]) -> QuadElem {
        let fv = self.m.apply(v);
        u.iter()
            .zip(&fv)
            .fold(QuadElem::zero(self.d()), |acc, (a, b)| &acc + &(a * b))
    }

    pub fn eval(&self, v: &[QuadElem]) -> QuadElem {
        self.bilinear(v, v)
    }

    /// Entrywise Galois conjugate `f^σ`.
    pub fn conj(&self) -> Self {
        let entries = self.m.entries.iter().map(QuadElem::conj).collect();
        QuadForm {
            m: QuadMatrix { entries, ..self.m.clone() },
        }
    }
}

/// Numbers of positive and negative squares of a form under both real embeddings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signatures {
    pub real: (usize, usize),
    pub conjugate: (usize, usize),
}

/// Diagonalizes by symmetric pivoting over `ℚ(√d)` and counts pivot signs.
pub fn signatures(f: &QuadForm) -> Result<Signatures> {
    let n = f.size();
    let d = f.d();
    let mut a: Vec<Vec<QuadElem>> = (0..n)
        .map(|i| (0..n).map(|j| f.m.get(i, j).clone()).collect())
        .collect();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                a.swap(k, i);
                for row in a.iter_mut() {
                    row.swap(k, i);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // e_k ← e_k + e_j makes the pivot 2·a_kj
                for c in 0..n {
                    a[k][c] = &a[k][c] + &a[j][c];
                }
                for r in 0..n {
                    a[r][k] = &a[r][k] + &a[r][j];
                }
            } else {
                return Err(Error::DegenerateForm);
            }
        }
        let inv = a[k][k].inverse()?;
        for i in k + 1..n {
            let factor = &a[i][k] * &inv;
            if factor.is_zero() {
                continue;
            }
            for j in k..n {
                let t = &factor * &a[k][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
        for j in k + 1..n {
            a[k][j] = QuadElem::zero(d);
        }
        for i in k + 1..n {
            a[i][k] = QuadElem::zero(d);
        }
        pivots.push(a[k][k].clone());
    }
    let count = |s: fn(&QuadElem) -> i32| {
        let pos = pivots.iter().filter(|p| s(p) > 0).count();
        (pos, pivots.len() - pos)
    };
    Ok(Signatures {
        real: count(QuadElem::signum),
        conjugate: count(QuadElem::signum_conj),
    })
}

/// Negative index 1 under the distinguished embedding and positive definite
/// under the conjugate one.
pub fn is_admissible(f: &QuadForm) -> Result<bool> {
    let s = signatures(f)?;
    Ok(s.real.1 == 1 && s.conjugate.1 == 0)
}

/// Exact test of `TᵀFT = F`.
pub fn preserves_form(t: &QuadMatrix, f: &QuadForm) -> Result<bool> {
    if t.n != f.size() {
        return Err(Error::DimensionMismatch {
            expected: f.size(),
            got: t.n,
        });
    }
    Ok(t.transpose().mul(&f.m)?.mul(t)? == f.m)
}

fn timelike_test_vector(f: &QuadForm) -> Result<Vec<QuadElem>> {
    let n = f.size();
    let d = f.d();
    let unit = |i: usize| {
        let mut v = vec![QuadElem::zero(d); n];
        v[i] = QuadElem::one(d);
        v
    };
    for i in 0..n {
        let v = unit(i);
        if f.eval(&v).signum() < 0 {
            return Ok(v);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for s in [1, -1] {
                let mut v = unit(i);
                v[j] = QuadElem::from_int(d, s);
                if f.eval(&v).signum() < 0 {
                    return Ok(v);
                }
            }
        }
    }
    Err(Error::Inconclusive("no simple timelike test vector for this form".into()))
}

/// Whether `T` maps each component of the timelike cone `{f < 0}` to itself.
///
/// Timelike `x, y` lie in the same component iff `B_f(x, y) < 0`; the sign is
/// decided exactly.
pub fn preserves_cone_components(t: &QuadMatrix, f: &QuadForm) -> Result<bool> {
    if t.n != f.size() {
        return Err(Error::DimensionMismatch {
            expected: f.size(),
            got: t.n,
        });
    }
    let x = timelike_test_vector(f)?;
    let y = t.apply(&x);
    if f.eval(&y).signum() >= 0 {
        return Err(Error::Inconclusive(
            "image of the test vector is not timelike; does T preserve the form?".into(),
        ));
    }
    Ok(f.bilinear(&x, &y).signum() < 0)
}

/// Ring integer `(p + q√d)/2`, used on the hot enumeration path.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
struct Half {
    p: i64,
    q: i64,
}

impl Half {
    fn from_basis(d: i64, x: i64, y: i64) -> Self {
        if d.rem_euclid(4) == 1 {
            Half { p: 2 * x + y, q: y }
        } else {
            Half { p: 2 * x, q: 2 * y }
        }
    }

    fn of(e: &QuadElem) -> Option<Self> {
        let (x, y) = e.to_basis()?;
        Some(Self::from_basis(e.d, x, y))
    }

    #[inline]
    fn add(self, o: Self) -> Self {
        Half { p: self.p + o.p, q: self.q + o.q }
    }

    #[inline]
    fn mul(self, o: Self, d: i64) -> Self {
        Half {
            p: (self.p * o.p + d * self.q * o.q) / 2,
            q: (self.p * o.q + self.q * o.p) / 2,
        }
    }

    fn to_elem(self, d: i64) -> QuadElem {
        QuadElem::new(d, Q::new(self.p as i128, 2), Q::new(self.q as i128, 2))
    }
}

/// Closure of an enumerated set under the group operations that stay within the height bound.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub inverses_checked: usize,
    pub inverses_missing: usize,
    pub products_checked: usize,
    pub products_missing: usize,
}

impl ClosureReport {
    pub fn is_closed(&self) -> bool {
        self.inverses_missing == 0 && self.products_missing == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Enumeration {
    pub height: i64,
    /// Sorted by integral-basis coordinates.
    pub elements: Vec<QuadMatrix>,
    pub closure: ClosureReport,
}

/// All `T` with integral-basis coordinates in `[−H, H]`, `TᵀFT = F` and both
/// cone components preserved, for a diagonal form of size at most 3.
pub fn enumerate_elements(f: &QuadForm, height: i64) -> Result<Enumeration> {
    let n = f.size();
    let d = f.d();
    if !(2..=MAX_ENUM_DIM).contains(&n) {
        return Err(Error::Config(format!(
            "enumeration supports forms of size 2..={MAX_ENUM_DIM}, got {n}"
        )));
    }
    if !(1..=MAX_HEIGHT).contains(&height) {
        return Err(Error::Config(format!(
            "height must lie in 1..={MAX_HEIGHT}, got {height}"
        )));
    }
    if !f.is_diagonal() {
        return Err(Error::Config("enumeration needs a diagonal form".into()));
    }
    if !is_admissible(f)? {
        return Err(Error::InvalidInput("form is not admissible".into()));
    }
    let diag: Vec<Half> = (0..n)
        .map(|i| {
            Half::of(f.m.get(i, i))
                .ok_or_else(|| Error::Config("form entries must be algebraic integers".into()))
        })
        .collect::<Result<_>>()?;

    let scalars: Vec<Half> = (-height..=height)
        .flat_map(|x| (-height..=height).map(move |y| Half::from_basis(d, x, y)))
        .collect();
    let mut vectors: Vec<Vec<Half>> = vec![vec![]];
    for _ in 0..n {
        vectors = vectors
            .into_iter()
            .flat_map(|v| {
                scalars.iter().map(move |&s| {
                    let mut w = v.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    let form = |u: &[Half], v: &[Half]| {
        u.iter()
            .zip(v)
            .zip(&diag)
            .fold(Half { p: 0, q: 0 }, |acc, ((&a, &b), &c)| acc.add(c.mul(a.mul(b, d), d)))
    };
    let zero = Half { p: 0, q: 0 };
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|j| {
            (0..vectors.len())
                .filter(|&k| form(&vectors[k], &vectors[k]) == diag[j])
                .collect()
        })
        .collect();

    let extend = |cols: Vec<usize>| -> Vec<Vec<usize>> {
        let j = cols.len();
        candidates[j]
            .iter()
            .filter(|&&k| cols.iter().all(|&c| form(&vectors[c], &vectors[k]) == zero))
            .map(|&k| {
                let mut next = cols.clone();
                next.push(k);
                next
            })
            .collect()
    };
    let complete: Vec<Vec<usize>> = candidates[0]
        .par_iter()
        .flat_map_iter(|&v0| {
            let mut partial = vec![vec![v0]];
            for _ in 1..n {
                partial = partial.into_iter().flat_map(&extend).collect();
            }
            partial
        })
        .collect();

    let mut elements = Vec::new();
    for cols in complete {
        let entries = (0..n * n)
            .map(|k| vectors[cols[k % n]][k / n].to_elem(d))
            .collect();
        let t = QuadMatrix::new(d, n, entries)?;
        if !preserves_form(&t, f)? {
            return Err(Error::Consistency("pruned search produced a non-isometry".into()));
        }
        if preserves_cone_components(&t, f)? {
            elements.push(t);
        }
    }
    elements.sort_by_cached_key(|t| t.to_basis());
    let closure = closure_report(f, &elements, height)?;
    Ok(Enumeration {
        height,
        elements,
        closure,
    })
}

/// `T⁻¹ = F⁻¹ Tᵀ F` for an isometry of `F`.
pub fn isometry_inverse(t: &QuadMatrix, f: &QuadForm) -> Result<QuadMatrix> {
    let d = f.d();
    if !f.is_diagonal() {
        return Err(Error::Config("inverse formula implemented for diagonal forms".into()));
    }
    let inv: Vec<QuadElem> = (0..f.size())
        .map(|i| f.m.get(i, i).inverse())
        .collect::<Result<_>>()?;
    QuadMatrix::diagonal(d, &inv).mul(&t.transpose())?.mul(&f.m)
}

fn closure_report(f: &QuadForm, elements: &[QuadMatrix], height: i64) -> Result<ClosureReport> {
    let set: BTreeSet<Vec<Vec<(i64, i64)>>> =
        elements.iter().filter_map(QuadMatrix::to_basis).collect();
    let within = |m: &QuadMatrix| m.height().is_some_and(|h| h <= height);
    let contains = |m: &QuadMatrix| m.to_basis().is_some_and(|b| set.contains(&b));
    let mut report = ClosureReport::default();
    for t in elements {
        let inv = isometry_inverse(t, f)?;
        if within(&inv) {
            report.inverses_checked += 1;
            if !contains(&inv) {
                report.inverses_missing += 1;
            }
        }
    }
    let products: Vec<(usize, usize)> = elements
        .par_iter()
        .map(|a| -> Result<(usize, usize)> {
            let mut acc = (0, 0);
            for b in elements {
                let ab = a.mul(b)?;
                if within(&ab) {
                    acc.0 += 1;
                    if !contains(&ab) {
                        acc.1 += 1;
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    for (c, m) in products {
        report.products_checked += c;
        report.products_missing += m;
    }
    Ok(report)
}

/// Diagonal `M` with `MFM = J`, for a diagonal form whose only negative entry is last.
fn lorentz_scaling(f: &QuadForm) -> Result<Vec<f64>> {
    let n = f.size();
    if !f.is_diagonal() {
        return Err(Error::Config("conjugation implemented for diagonal forms".into()));
    }
    (0..n)
        .map(|i| {
            let e = f.m.get(i, i);
            let s = e.signum();
            if s == 0 || (s < 0) != (i == n - 1) {
                return Err(Error::Config(
                    "form must be diagonal with its single negative entry last".into(),
                ));
            }
            Ok(1.0 / e.to_f64().abs().sqrt())
        })
        .collect()
}

/// `G = M⁻¹ T M`, a matrix preserving the standard Lorentz form.
///
/// For `F = diag(1, …, 1, −√d)` the scaling is `M = diag(1, …, 1, d^{−1/4})`.
pub fn conjugate_to_lorentz(t: &QuadMatrix, f: &QuadForm) -> Result<DMatrix<f64>> {
    if t.n != f.size() {
        return Err(Error::DimensionMismatch {
            expected: f.size(),
            got: t.n,
        });
    }
    let m = lorentz_scaling(f)?;
    let tf = t.to_f64();
    Ok(DMatrix::from_fn(t.n, t.n, |i, j| tf[(i, j)] * m[j] / m[i]))
}

/// Hyperplane `{B_f(x, e) = 0}` transported to the standard model; its
/// normal is `M⁻¹e` rescaled to unit length.
pub fn rational_hyperplane(e: &[QuadElem], f: &QuadForm) -> Result<Hyperplane> {
    if e.len() != f.size() {
        return Err(Error::DimensionMismatch {
            expected: f.size(),
            got: e.len(),
        });
    }
    if f.eval(e).signum() <= 0 {
        return Err(Error::InvalidInput("normal vector must have f(e) > 0".into()));
    }
    let m = lorentz_scaling(f)?;
    let v: Vec<f64> = e.iter().zip(&m).map(|(x, s)| x.to_f64() / s).collect();
    Hyperplane::from_spacelike(LorentzVector::new(v)?)
}

/// Angle in `(0, π)` between the hyperplanes with normals `e1, e2`, from
/// `cos θ = B(e1, e2)/√(f(e1) f(e2))`; `None` unless `B² < f(e1) f(e2)` exactly.
pub fn exact_angle(f: &QuadForm, e1: &[QuadElem], e2: &[QuadElem]) -> Option<f64> {
    let b = f.bilinear(e1, e2);
    let f1 = f.eval(e1);
    let f2 = f.eval(e2);
    if f1.signum() <= 0 || f2.signum() <= 0 {
        return None;
    }
    if (&(&f1 * &f2) - &(&b * &b)).signum() <= 0 {
        return None;
    }
    let c = b.to_f64() / (f1.to_f64() * f2.to_f64()).sqrt();
    Some(c.clamp(-1.0, 1.0).acos())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnglePair {
    pub e1: Vec<(i64, i64)>,
    pub e2: Vec<(i64, i64)>,
    pub angle: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngleSearch {
    /// Pairs with angle inside the target interval, sorted by angle.
    pub pairs: Vec<AnglePair>,
    /// Counts of all intersecting pairs in equal bins over `(0, π)`.
    pub histogram: Vec<usize>,
    pub vectors: usize,
}

/// Searches pairs of bounded-height spacelike normals whose hyperplanes meet
/// at an angle in the open interval `(lo, hi)`.
///
/// Normals are taken up to sign: the first nonzero coordinate is positive.
pub fn angle_search(f: &QuadForm, height: i64, lo: f64, hi: f64) -> Result<AngleSearch> {
    if !(0.0 <= lo && lo < hi && hi <= std::f64::consts::PI) {
        return Err(Error::InvalidInput(format!(
            "target interval ({lo}, {hi}) must be a nonempty subinterval of (0, π)"
        )));
    }
    if height < 1 {
        return Err(Error::Config("height must be at least 1".into()));
    }
    let n = f.size();
    let d = f.d();
    let side = (2 * height + 1) as usize;
    let total = side.pow(2 * n as u32);
    if total > 2 * MAX_ANGLE_VECTORS {
        return Err(Error::Config(format!(
            "height {height} gives {total} candidate normals; at most {} are scanned",
            2 * MAX_ANGLE_VECTORS
        )));
    }
    let coords: Vec<(i64, i64)> = (-height..=height)
        .flat_map(|x| (-height..=height).map(move |y| (x, y)))
        .collect();
    let mut normals = Vec::new();
    for mut idx in 0..total {
        let mut e = Vec::with_capacity(n);
        for _ in 0..n {
            e.push(coords[idx % coords.len()]);
            idx /= coords.len();
        }
        let elems: Vec<QuadElem> = e.iter().map(|&(x, y)| QuadElem::from_basis(d, x, y)).collect();
        let lead = elems.iter().find(|x| !x.is_zero());
        if lead.is_some_and(|x| x.signum() > 0) && f.eval(&elems).signum() > 0 {
            normals.push((e, elems));
        }
    }
    let bin_width = std::f64::consts::PI / HISTOGRAM_BINS as f64;
    let per_row: Vec<(Vec<AnglePair>, Vec<usize>)> = (0..normals.len())
        .into_par_iter()
        .map(|i| {
            let mut pairs = Vec::new();
            let mut hist = vec![0usize; HISTOGRAM_BINS];
            for j in i + 1..normals.len() {
                if let Some(angle) = exact_angle(f, &normals[i].1, &normals[j].1) {
                    hist[((angle / bin_width) as usize).min(HISTOGRAM_BINS - 1)] += 1;
                    if angle > lo && angle < hi {
                        pairs.push(AnglePair {
                            e1: normals[i].0.clone(),
                            e2: normals[j].0.clone(),
                            angle,
                        });
                    }
                }
            }
            (pairs, hist)
        })
        .collect();
    let mut pairs = Vec::new();
    let mut histogram = vec![0usize; HISTOGRAM_BINS];
    for (p, h) in per_row {
        pairs.extend(p);
        for (acc, c) in histogram.iter_mut().zip(h) {
            *acc += c;
        }
    }
    pairs.sort_by(|a, b| {
        a.angle
            .total_cmp(&b.angle)
            .then_with(|| a.e1.cmp(&b.e1))
            .then_with(|| a.e2.cmp(&b.e2))
    });
    Ok(AngleSearch {
        pairs,
        histogram,
        vectors: normals.len(),
    })
}

/// The hyperbolic element `[[3+2√2, 4+2√2], [2+2√2, 3+2√2]]` on `(x₁, x₂)`,
/// fixing `x₀`, in the group of `x₀² + x₁² − √2·x₂²`.
pub fn pell_element() -> QuadMatrix {
    QuadMatrix::from_basis(
        2,
        &[
            vec![(1, 0), (0, 0), (0, 0)],
            vec![(0, 0), (3, 2), (4, 2)],
            vec![(0, 0), (2, 2), (3, 2)],
        ],
    )
    .expect("3×3 literal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperboloid::{hyperplane_angle, lorentz_defect, HyperplaneAngle};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn e(d: i64, a: i128, b: i128) -> QuadElem {
        QuadElem::new(d, Q::from(a), Q::from(b))
    }

    fn diag_ints(d: i64, v: &[(i64, i64)]) -> QuadMatrix {
        QuadMatrix::diagonal(d, &v.iter().map(|&(x, y)| QuadElem::from_basis(d, x, y)).collect::<Vec<_>>())
    }

    #[test]
    fn ring_bases() {
        assert_eq!(ring_basis(2).unwrap(), RingBasis::Sqrt { d: 2 });
        assert_eq!(ring_basis(3).unwrap(), RingBasis::Sqrt { d: 3 });
        assert_eq!(ring_basis(5).unwrap(), RingBasis::HalfSqrt { d: 5 });
        assert_eq!(ring_basis(5).unwrap().to_string(), "{1, (1+√5)/2}");
        for bad in [1, 0, -3, 4, 12, 18] {
            assert!(ring_basis(bad).is_err(), "{bad}");
        }
        // the golden ratio satisfies ω² = ω + 1
        let w = ring_basis(5).unwrap().omega();
        assert_eq!(&w * &w, &w + &QuadElem::one(5));
    }

    #[test]
    fn basis_coordinates_round_trip() {
        for d in [2, 3, 5, 13] {
            for x in -3..=3 {
                for y in -3..=3 {
                    assert_eq!(QuadElem::from_basis(d, x, y).to_basis(), Some((x, y)));
                }
            }
        }
        assert_eq!(QuadElem::new(2, Q::new(1, 2), Q::zero()).to_basis(), None);
        // (1 + √5)/2 is integral, √5/2 is not
        assert_eq!(QuadElem::new(5, Q::new(1, 2), Q::new(1, 2)).to_basis(), Some((0, 1)));
        assert_eq!(QuadElem::new(5, Q::zero(), Q::new(1, 2)).to_basis(), None);
    }

    #[test]
    fn exact_signs() {
        assert_eq!(e(2, 3, -2).signum(), 1); // 3 − 2√2 ≈ 0.17
        assert_eq!(e(2, -3, 2).signum(), -1);
        assert_eq!(e(2, 1, -1).signum(), -1);
        assert_eq!(e(2, 1, -1).signum_conj(), 1);
        assert_eq!(e(2, 0, 0).signum(), 0);
        // unit of norm 1
        assert_eq!(e(2, 3, 2).norm(), Q::one());
    }

    #[test]
    fn admissibility_examples() {
        let f = QuadForm::standard(2, 3);
        assert!(is_admissible(&f).unwrap());
        let s2 = QuadElem::sqrt_d(2);
        let one = QuadElem::one(2);
        let pos = QuadForm::diagonal(2, &[one.clone(), one.clone(), s2.clone()]);
        assert!(!is_admissible(&pos).unwrap());
        let two_neg = QuadForm::diagonal(2, &[one.clone(), -&one, -&s2]);
        assert_eq!(signatures(&two_neg).unwrap().real, (1, 2));
        assert!(!is_admissible(&two_neg).unwrap());
        let degenerate = QuadForm::diagonal(2, &[one.clone(), QuadElem::zero(2), -&s2]);
        assert_eq!(is_admissible(&degenerate), Err(Error::DegenerateForm));
    }

    #[test]
    fn zero_diagonal_pivot() {
        // hyperbolic plane [[0, 1], [1, 0]] ⊕ (1): signature (2, 1) in both embeddings
        let z = QuadElem::zero(2);
        let o = QuadElem::one(2);
        let m = QuadMatrix::new(
            2,
            3,
            vec![z.clone(), o.clone(), z.clone(), o.clone(), z.clone(), z.clone(), z.clone(), z.clone(), o.clone()],
        )
        .unwrap();
        let f = QuadForm::new(m).unwrap();
        let s = signatures(&f).unwrap();
        assert_eq!(s.real, (2, 1));
        assert_eq!(s.conjugate, (2, 1));
        assert!(!is_admissible(&f).unwrap());
    }

    #[test]
    fn form_preservation_examples() {
        let f = QuadForm::standard(2, 3);
        assert!(preserves_form(&QuadMatrix::identity(2, 3), &f).unwrap());
        let flip = diag_ints(2, &[(-1, 0), (1, 0), (1, 0)]);
        assert!(preserves_form(&flip, &f).unwrap());
        assert!(preserves_form(&pell_element(), &f).unwrap());
        let bad = diag_ints(2, &[(2, 0), (1, 0), (1, 0)]);
        assert!(!preserves_form(&bad, &f).unwrap());
    }

    #[test]
    fn cone_components() {
        let f = QuadForm::standard(2, 3);
        assert!(preserves_cone_components(&QuadMatrix::identity(2, 3), &f).unwrap());
        let swap = diag_ints(2, &[(1, 0), (1, 0), (-1, 0)]);
        assert!(!preserves_cone_components(&swap, &f).unwrap());
        assert!(preserves_cone_components(&pell_element(), &f).unwrap());
        let not_isometry = diag_ints(2, &[(1, 0), (1, 0), (0, 0)]);
        assert!(matches!(
            preserves_cone_components(&not_isometry, &f),
            Err(Error::Inconclusive(_))
        ));
    }

    #[test]
    fn pell_element_conjugates_to_lorentz() {
        let f = QuadForm::standard(2, 3);
        let g = conjugate_to_lorentz(&pell_element(), &f).unwrap();
        assert!(lorentz_defect(&g) < 1e-12, "{}", lorentz_defect(&g));
        let id = conjugate_to_lorentz(&QuadMatrix::identity(2, 3), &f).unwrap();
        assert_eq!(id, DMatrix::identity(3, 3));
        let flip = diag_ints(2, &[(-1, 0), (1, 0), (1, 0)]);
        assert_eq!(conjugate_to_lorentz(&flip, &f).unwrap(), flip.to_f64());
    }

    #[test]
    fn scaling_matches_fourth_root() {
        let m = lorentz_scaling(&QuadForm::standard(2, 3)).unwrap();
        assert_eq!(&m[..2], &[1.0, 1.0]);
        assert!((m[2] - 2f64.powf(-0.25)).abs() < 1e-15);
    }

    #[test]
    fn enumeration_height_one() {
        let f = QuadForm::standard(2, 3);
        let en = enumerate_elements(&f, 1).unwrap();
        assert!(en.elements.contains(&QuadMatrix::identity(2, 3)));
        for sx in [-1, 1] {
            for sy in [-1, 1] {
                let diag = diag_ints(2, &[(sx, 0), (sy, 0), (1, 0)]);
                assert!(en.elements.contains(&diag));
                let swap = QuadMatrix::from_basis(
                    2,
                    &[vec![(0, 0), (sx, 0), (0, 0)], vec![(sy, 0), (0, 0), (0, 0)], vec![(0, 0), (0, 0), (1, 0)]],
                )
                .unwrap();
                assert!(en.elements.contains(&swap));
            }
        }
        assert_eq!(en.elements.len(), 8);
        assert!(en.closure.is_closed());
        assert_eq!(en.closure.inverses_checked, 8);
        assert_eq!(en.closure.products_checked, 64);
    }

    #[test]
    fn enumeration_finds_pell_element() {
        let f = QuadForm::standard(2, 3);
        let en = enumerate_elements(&f, 4).unwrap();
        assert!(en.elements.contains(&pell_element()));
        for t in &en.elements {
            assert!(preserves_form(t, &f).unwrap());
            assert!(preserves_cone_components(t, &f).unwrap());
            let g = conjugate_to_lorentz(t, &f).unwrap();
            assert!(lorentz_defect(&g) < 1e-12);
            let col = g.column(2);
            let q = col[0] * col[0] + col[1] * col[1] - col[2] * col[2];
            assert!((q + 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn enumeration_rejects_unsupported() {
        let f = QuadForm::standard(2, 3);
        assert!(matches!(enumerate_elements(&f, 5), Err(Error::Config(_))));
        assert!(matches!(enumerate_elements(&QuadForm::standard(2, 4), 1), Err(Error::Config(_))));
    }

    #[test]
    fn golden_field_enumeration() {
        let f = QuadForm::standard(5, 2);
        assert!(is_admissible(&f).unwrap());
        let en = enumerate_elements(&f, 2).unwrap();
        assert!(en.elements.contains(&QuadMatrix::identity(5, 2)));
        for t in &en.elements {
            assert!(preserves_form(t, &f).unwrap());
        }
    }

    #[test]
    fn rational_hyperplanes() {
        let f = QuadForm::standard(2, 3);
        let v = |c: [i64; 3]| c.iter().map(|&x| QuadElem::from_int(2, x)).collect::<Vec<_>>();
        let h1 = rational_hyperplane(&v([1, 0, 0]), &f).unwrap();
        assert_eq!(h1.normal().coords(), &[1.0, 0.0, 0.0]);
        let h2 = rational_hyperplane(&v([0, 1, 0]), &f).unwrap();
        assert_eq!(h2.normal().coords(), &[0.0, 1.0, 0.0]);
        let h3 = rational_hyperplane(&v([1, 1, 0]), &f).unwrap();
        match hyperplane_angle(&h1, &h3).unwrap() {
            HyperplaneAngle::Intersecting(a) => assert!((a - PI / 4.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert!(rational_hyperplane(&v([0, 0, 1]), &f).is_err());
    }

    #[test]
    fn angle_search_examples() {
        let f = QuadForm::standard(2, 3);
        let right = angle_search(&f, 1, PI / 2.0 - 0.01, PI / 2.0 + 0.01).unwrap();
        let x = vec![(1, 0), (0, 0), (0, 0)];
        let y = vec![(0, 0), (1, 0), (0, 0)];
        let xy = vec![(1, 0), (1, 0), (0, 0)];
        let has = |s: &AngleSearch, a: &Vec<(i64, i64)>, b: &Vec<(i64, i64)>| {
            s.pairs.iter().any(|p| (&p.e1 == a && &p.e2 == b) || (&p.e1 == b && &p.e2 == a))
        };
        assert!(has(&right, &x, &y));
        let quarter = angle_search(&f, 1, PI / 4.0 - 0.01, PI / 4.0 + 0.01).unwrap();
        assert!(has(&quarter, &x, &xy));
        assert!(quarter.pairs.windows(2).all(|w| w[0].angle <= w[1].angle));
        let tiny = angle_search(&f, 1, 0.001, 0.002).unwrap();
        assert!(tiny.pairs.is_empty());
        assert!(tiny.histogram.iter().sum::<usize>() > 0);
        assert!(angle_search(&f, 1, 1.0, 1.0).is_err());
        assert!(matches!(angle_search(&f, 4, 0.1, 0.2), Err(Error::Config(_))));
    }

    fn arb_elem(d: i64) -> impl Strategy<Value = QuadElem> {
        (-50i128..50, 1i128..6, -50i128..50, 1i128..6)
            .prop_map(move |(a, da, b, db)| QuadElem::new(d, Q::new(a, da), Q::new(b, db)))
    }

    proptest! {
        #[test]
        fn galois_is_an_involutive_ring_map(x in arb_elem(3), y in arb_elem(3)) {
            prop_assert_eq!(x.conj().conj(), x.clone());
            prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        }

        #[test]
        fn exact_sign_matches_float(x in arb_elem(7)) {
            let v = x.to_f64();
            if v.abs() > 1e-9 {
                prop_assert_eq!(x.signum(), if v > 0.0 { 1 } else { -1 });
            }
            let w = x.to_f64_conj();
            if w.abs() > 1e-9 {
                prop_assert_eq!(x.signum_conj(), if w > 0.0 { 1 } else { -1 });
            }
        }

        #[test]
        fn inverse_is_exact(x in arb_elem(2)) {
            prop_assume!(!x.is_zero());
            prop_assert_eq!(&x * &x.inverse().unwrap(), QuadElem::one(2));
        }

        #[test]
        fn exact_angle_matches_hyperplane_angle(
            a in proptest::collection::vec((-3i64..=3, -3i64..=3), 3),
            b in proptest::collection::vec((-3i64..=3, -3i64..=3), 3),
        ) {
            let f = QuadForm::standard(2, 3);
            let ea: Vec<_> = a.iter().map(|&(x, y)| QuadElem::from_basis(2, x, y)).collect();
            let eb: Vec<_> = b.iter().map(|&(x, y)| QuadElem::from_basis(2, x, y)).collect();
            if let Some(theta) = exact_angle(&f, &ea, &eb) {
                let ha = rational_hyperplane(&ea, &f).unwrap();
                let hb = rational_hyperplane(&eb, &f).unwrap();
                let HyperplaneAngle::Intersecting(phi) = hyperplane_angle(&ha, &hb).unwrap() else {
                    return Err(TestCaseError::fail("expected intersecting hyperplanes"));
                };
                // the geometric angle is unsigned; the exact one carries the normal orientation
                prop_assert!((phi - theta.min(PI - theta)).abs() < 1e-10, "{} vs {}", phi, theta);
            }
        }
    }
}
