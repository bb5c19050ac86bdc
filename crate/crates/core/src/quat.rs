//! Quaternion arithmetic.
//!
//! Scalar-first convention `w + x𝐢 + y𝐣 + z𝐤` with the Hamilton relations
//! `𝐢𝐣 = 𝐤`, `𝐣𝐤 = 𝐢`, `𝐤𝐢 = 𝐣`. Values are immutable; every operation is a
//! pure function, so the type is safe to share across threads.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A quaternion with double-precision coordinates.
///
/// Serialized everywhere as the 4-array `[w, x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 4]", from = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// Embeds a real number.
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    pub fn zero() -> Self {
        ZERO
    }

    pub fn one() -> Self {
        ONE
    }

    /// Real (scalar) part.
    pub fn re(&self) -> f64 {
        self.w
    }

    /// Imaginary part as a quaternion with zero scalar part.
    pub fn im(&self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Norm of the imaginary part.
    pub fn im_norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Multiplicative inverse `conj(q)/|q|²`.
    ///
    /// Fails on a numerically zero divisor.
    pub fn inv(&self) -> Result<Self, Error> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::NonInvertibleQuaternion);
        }
        Ok(self.conj() / n2)
    }

    /// `|self − other| ≤ tol`.
    pub fn approx_eq(&self, other: Quaternion, tol: f64) -> bool {
        (*self - other).norm() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Self::from_array(a)
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::real(w)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w + rhs.w, self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, rhs: Quaternion) {
        *self = *self + rhs;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w - rhs.w, self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, rhs: Quaternion) {
        *self = *self - rhs;
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
    /// Hamilton product.
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
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
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

/// Same norm and same real part, at a relative tolerance.
///
/// Two quaternions are similar exactly when they are conjugate under the
/// unit-quaternion action, which for numeric purposes reduces to these two
/// scalar comparisons.
pub fn similar(p: Quaternion, q: Quaternion, tol: f64) -> bool {
    let scale = 1.0 + p.norm() + q.norm();
    (p.norm() - q.norm()).abs() <= tol * scale && (p.re() - q.re()).abs() <= tol * scale
}

/// ASCII rendering like `1-i+2j-2k`; `0` for the zero quaternion.
fn format_components(q: &Quaternion, symbols: [&str; 3], minus: &str, out: &mut String) {
    let mut first = true;
    let push = |coef: f64, sym: &str, out: &mut String, first: &mut bool| {
        if coef == 0.0 {
            return;
        }
        let neg = coef < 0.0;
        let mag = coef.abs();
        if *first {
            if neg {
                out.push_str(minus);
            }
        } else if neg {
            out.push_str(minus);
        } else {
            out.push('+');
        }
        if sym.is_empty() || mag != 1.0 {
            out.push_str(&format!("{mag}"));
        }
        out.push_str(sym);
        *first = false;
    };
    push(q.w, "", out, &mut first);
    push(q.x, symbols[0], out, &mut first);
    push(q.y, symbols[1], out, &mut first);
    push(q.z, symbols[2], out, &mut first);
    if first {
        out.push('0');
    }
}

impl Quaternion {
    /// Render with mathematical bold basis symbols and a true minus sign.
    pub fn to_pretty_string(&self) -> String {
        let mut s = String::new();
        format_components(self, ["𝐢", "𝐣", "𝐤"], "\u{2212}", &mut s);
        s
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        format_components(self, ["i", "j", "k"], "-", &mut s);
        f.write_str(&s)
    }
}
