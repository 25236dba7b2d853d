//! Quaternion scalars, slice planes `C_ι` and the 2-spheres `S_q`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for deciding that a quaternion is an imaginary unit.
pub const TOL_UNIT: f64 = 1e-10;
/// Default tolerance for sphere membership.
pub const TOL_SPHERE: f64 = 1e-9;

/// A quaternion `w + x·i + y·j + z·k`.
///
/// Serialized as the 4-array `[w, x, y, z]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Quaternion::real(r)
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(r: f64) -> Self {
        Quaternion::new(r, 0.0, 0.0, 0.0)
    }

    pub fn re(&self) -> f64 {
        self.w
    }

    pub fn im(&self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    pub fn conj(&self) -> Quaternion {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product of the coefficient vectors, `Re(conj(a)·b)`.
    pub fn dot(&self, other: &Quaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn inverse(&self) -> Result<Quaternion> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj() * (1.0 / n2))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.im().norm() <= tol
    }

    /// `Re(q) = 0` and `|q| = 1` within `tol`.
    pub fn is_imaginary_unit(&self, tol: f64) -> bool {
        self.w.abs() <= tol && (self.norm() - 1.0).abs() <= tol
    }

    pub fn max_abs(&self) -> f64 {
        self.w.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs())
    }

    pub fn to_array(self) -> [f64; 4] {
        self.into()
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision().unwrap_or(6);
        write!(f, "{:.*}", p, self.w)?;
        for (c, s) in [(self.x, "i"), (self.y, "j"), (self.z, "k")] {
            let sign = if c.is_sign_negative() { '-' } else { '+' };
            write!(f, " {} {:.*}{}", sign, p, c.abs(), s)?;
        }
        Ok(())
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, r: f64) -> Quaternion {
        Quaternion::new(self.w * r, self.x * r, self.y * r, self.z * r)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, r: f64) -> Quaternion {
        self * (1.0 / r)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl MulAssign<f64> for Quaternion {
    fn mul_assign(&mut self, r: f64) {
        *self = *self * r;
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Quaternion {
        iter.fold(Quaternion::ZERO, |a, b| a + b)
    }
}

/// An imaginary unit `ι` together with a companion unit `ȷ` anti-commuting
/// with it. `{1, ι, ȷ, ιȷ}` is an orthonormal real basis of `H`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceFrame {
    pub unit: Quaternion,
    pub aux: Quaternion,
}

impl SliceFrame {
    pub fn new(unit: Quaternion) -> Result<Self> {
        if !unit.is_imaginary_unit(TOL_UNIT) {
            return Err(Error::NotImaginaryUnit(unit));
        }
        let unit = unit / unit.norm();
        Ok(SliceFrame { unit, aux: default_aux_unit(&unit) })
    }

    pub fn with_aux(unit: Quaternion, aux: Quaternion) -> Result<Self> {
        let frame = SliceFrame::new(unit)?;
        if !aux.is_imaginary_unit(TOL_UNIT) || frame.unit.dot(&aux).abs() > TOL_UNIT {
            return Err(Error::BadAuxiliaryUnit(aux));
        }
        Ok(SliceFrame { unit: frame.unit, aux })
    }

    /// `ιȷ`.
    pub fn third(&self) -> Quaternion {
        self.unit * self.aux
    }

    /// `α + ιβ ↦ α + iβ`, reading off the `C_ι` part of `q`.
    pub fn to_complex(&self, q: &Quaternion) -> Complex<f64> {
        Complex::new(q.w, q.im().dot(&self.unit))
    }

    pub fn from_complex(&self, c: Complex<f64>) -> Quaternion {
        Quaternion::real(c.re) + self.unit * c.im
    }

    /// Splits `q = a + b·ȷ` with `a, b ∈ C_ι`.
    pub fn split(&self, q: &Quaternion) -> (Complex<f64>, Complex<f64>) {
        let a = self.to_complex(q);
        let rest = *q - self.from_complex(a);
        // rest = b ȷ  =>  b = -rest ȷ
        let b = self.to_complex(&(-(rest * self.aux)));
        (a, b)
    }
}

impl Default for SliceFrame {
    fn default() -> Self {
        SliceFrame { unit: Quaternion::I, aux: Quaternion::J }
    }
}

/// Canonical unit orthogonal to `unit`: `j` for `i`, `k` for `j`, `j` for `k`.
pub fn default_aux_unit(unit: &Quaternion) -> Quaternion {
    for axis in [Quaternion::J, Quaternion::K, Quaternion::I] {
        let c = unit.dot(&axis);
        if c.abs() < 0.9 {
            let v = axis - *unit * c;
            return v / v.norm();
        }
    }
    unreachable!("a unit vector cannot be aligned with three orthogonal axes")
}

/// A point `α + ιβ` of the closed upper half-plane `C_ι^+`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlicePoint {
    pub alpha: f64,
    pub beta: f64,
    pub unit: Quaternion,
}

impl SlicePoint {
    pub fn new(alpha: f64, beta: f64, unit: Quaternion) -> Self {
        debug_assert!(beta >= 0.0, "slice points live in the closed upper half-plane");
        SlicePoint { alpha, beta, unit }
    }

    pub fn to_quaternion(&self) -> Quaternion {
        Quaternion::real(self.alpha) + self.unit * self.beta
    }

    pub fn to_complex(&self) -> Complex<f64> {
        Complex::new(self.alpha, self.beta)
    }

    /// Distance in the plane `C_ι`.
    pub fn distance(&self, other: &SlicePoint) -> f64 {
        (self.alpha - other.alpha).hypot(self.beta - other.beta)
    }
}

/// Writes `q = α + ȷβ` with `β = |Im q| ≥ 0`; real inputs use `default_unit`.
pub fn slice_form(q: &Quaternion, default_unit: &Quaternion) -> SlicePoint {
    let im = q.im();
    let beta = im.norm();
    let unit = if beta > 0.0 { im / beta } else { *default_unit };
    SlicePoint { alpha: q.w, beta, unit }
}

/// The representative of `S_q` in `C_ι^+`.
pub fn sphere_representative(q: &Quaternion, unit: &Quaternion) -> SlicePoint {
    SlicePoint { alpha: q.w, beta: q.im().norm(), unit: *unit }
}

/// Whether `p` lies on the 2-sphere `S_q`.
pub fn sphere_equivalent(p: &Quaternion, q: &Quaternion, tol: f64) -> bool {
    (p.re() - q.re()).abs() <= tol && (p.norm() - q.norm()).abs() <= tol
}

/// The circularization `{α + κβ : κ ∈ 𝕊}` of a set of slice points, kept
/// as the list of `(α, β)` pairs describing its spheres.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CircularSet {
    pub spheres: Vec<[f64; 2]>,
}

impl CircularSet {
    pub fn is_empty(&self) -> bool {
        self.spheres.is_empty()
    }

    pub fn contains(&self, q: &Quaternion, tol: f64) -> bool {
        self.spheres.iter().any(|&[alpha, beta]| {
            let rep = Quaternion::new(alpha, beta, 0.0, 0.0);
            sphere_equivalent(q, &rep, tol)
        })
    }

    /// A finite set of quaternions is circular exactly when it equals its own
    /// circularization, which forces every element to be real.
    pub fn is_circular(points: &[Quaternion], tol: f64) -> bool {
        points.iter().all(|q| q.is_real(tol))
    }
}

pub fn circularize(points: &[SlicePoint]) -> CircularSet {
    CircularSet { spheres: points.iter().map(|p| [p.alpha, p.beta]).collect() }
}
