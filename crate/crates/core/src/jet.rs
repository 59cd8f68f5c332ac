//! Truncated multivariate Taylor arithmetic ("jets").
//!
//! A [`Jet`] holds the Taylor coefficients of a function of the space-time
//! offsets `(dx, dy, dt)` around an expansion point, truncated per variable:
//! the coefficient of `dx^i dy^j dt^k` is kept for `i <= shape.x`,
//! `j <= shape.y`, `k <= shape.t`. Box truncation is closed under
//! multiplication, so pushing seeded input jets through any composition of
//! the [`Smooth`] operations yields exact partial derivatives up to those
//! orders in a single forward pass:
//!
//! ```text
//! d^(i+j+k) f / dx^i dy^j dt^k = i! j! k! * coeff[i, j, k]
//! ```
//!
//! Univariate functions are applied by composing their own Taylor series
//! with the nilpotent part of the argument (`h^(x+y+t+1) = 0`).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::{Scalar, Smooth};

/// Maximum number of stored coefficients; fits shape (3, 3, 2).
pub const MAX_JET_COEFFS: usize = 48;

/// Per-variable truncation orders of a jet.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JetShape {
    pub x: u8,
    pub y: u8,
    pub t: u8,
}

impl JetShape {
    pub const SCALAR: JetShape = JetShape { x: 0, y: 0, t: 0 };

    /// Panics when the coefficient box does not fit [`MAX_JET_COEFFS`].
    pub fn new(x: u8, y: u8, t: u8) -> Self {
        let shape = JetShape { x, y, t };
        assert!(
            shape.len() <= MAX_JET_COEFFS,
            "jet shape ({x}, {y}, {t}) exceeds {MAX_JET_COEFFS} coefficients"
        );
        shape
    }

    #[inline]
    pub fn len(&self) -> usize {
        (self.x as usize + 1) * (self.y as usize + 1) * (self.t as usize + 1)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * (self.y as usize + 1) + j) * (self.t as usize + 1) + k
    }

    /// Highest power of the nilpotent part that can be nonzero.
    #[inline]
    fn nilpotency(&self) -> usize {
        self.x as usize + self.y as usize + self.t as usize
    }

    /// Componentwise maximum.
    pub fn union(self, other: JetShape) -> JetShape {
        JetShape::new(self.x.max(other.x), self.y.max(other.y), self.t.max(other.t))
    }
}

/// Input axis a jet variable is seeded along.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    T,
}

/// Truncated Taylor polynomial in `(dx, dy, dt)`.
#[derive(Clone, Copy)]
pub struct Jet<T> {
    shape: JetShape,
    coeffs: [T; MAX_JET_COEFFS],
}

impl<T: Scalar> Jet<T> {
    pub fn constant(shape: JetShape, value: T) -> Self {
        let mut coeffs = [T::zero(); MAX_JET_COEFFS];
        coeffs[0] = value;
        Jet { shape, coeffs }
    }

    /// Independent variable `value + d(axis)`. The linear coefficient is
    /// dropped when the shape truncates that axis at order zero.
    pub fn variable(shape: JetShape, axis: Axis, value: T) -> Self {
        let mut jet = Self::constant(shape, value);
        let (i, j, k) = match axis {
            Axis::X => (1, 0, 0),
            Axis::Y => (0, 1, 0),
            Axis::T => (0, 0, 1),
        };
        if i <= shape.x as usize && j <= shape.y as usize && k <= shape.t as usize {
            jet.coeffs[shape.index(i, j, k)] = T::one();
        }
        jet
    }

    #[inline]
    pub fn shape(&self) -> JetShape {
        self.shape
    }

    #[inline]
    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    /// Raw Taylor coefficient of `dx^i dy^j dt^k`, zero outside the shape.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> T {
        if i > self.shape.x as usize || j > self.shape.y as usize || k > self.shape.t as usize {
            return T::zero();
        }
        self.coeffs[self.shape.index(i, j, k)]
    }

    /// Partial derivative `d^(i+j+k) / dx^i dy^j dt^k`, or `None` when the
    /// order exceeds the shape.
    pub fn derivative(&self, i: usize, j: usize, k: usize) -> Option<T> {
        if i > self.shape.x as usize || j > self.shape.y as usize || k > self.shape.t as usize {
            return None;
        }
        let scale = factorial::<T>(i) * factorial::<T>(j) * factorial::<T>(k);
        Some(self.coeffs[self.shape.index(i, j, k)] * scale)
    }

    #[inline]
    fn active(&self) -> &[T] {
        &self.coeffs[..self.shape.len()]
    }

    /// `self += a * other`, in place.
    #[inline]
    pub fn axpy(&mut self, a: T, other: &Jet<T>) {
        debug_assert_eq!(self.shape, other.shape);
        let n = self.shape.len();
        for (dst, src) in self.coeffs[..n].iter_mut().zip(&other.coeffs[..n]) {
            *dst += a * *src;
        }
    }

    fn map(mut self, f: impl Fn(T) -> T) -> Self {
        let n = self.shape.len();
        for c in &mut self.coeffs[..n] {
            *c = f(*c);
        }
        self
    }

    fn zip(mut self, other: &Jet<T>, f: impl Fn(T, T) -> T) -> Self {
        let shape = self.broadcast_shape(other);
        if other.shape == self.shape {
            let n = shape.len();
            for (a, b) in self.coeffs[..n].iter_mut().zip(&other.coeffs[..n]) {
                *a = f(*a, *b);
            }
            self
        } else if other.shape == JetShape::SCALAR {
            // only the constant term of `other` is nonzero
            let b0 = other.coeffs[0];
            let n = self.shape.len();
            self.coeffs[0] = f(self.coeffs[0], b0);
            for c in &mut self.coeffs[1..n] {
                *c = f(*c, T::zero());
            }
            self
        } else {
            let mut out = Jet::constant(other.shape, T::zero());
            out.coeffs[0] = f(self.coeffs[0], other.coeffs[0]);
            for idx in 1..other.shape.len() {
                out.coeffs[idx] = f(T::zero(), other.coeffs[idx]);
            }
            out
        }
    }

    fn broadcast_shape(&self, other: &Jet<T>) -> JetShape {
        if self.shape == other.shape || other.shape == JetShape::SCALAR {
            self.shape
        } else if self.shape == JetShape::SCALAR {
            other.shape
        } else {
            panic!(
                "mixing jets of shapes {:?} and {:?}",
                self.shape, other.shape
            );
        }
    }

    fn mul_jet(&self, other: &Jet<T>) -> Jet<T> {
        if other.shape == JetShape::SCALAR {
            return self.map(|c| c * other.coeffs[0]);
        }
        if self.shape == JetShape::SCALAR {
            return other.map(|c| c * self.coeffs[0]);
        }
        let shape = self.broadcast_shape(other);
        let (nx, ny, nt) = (shape.x as usize, shape.y as usize, shape.t as usize);
        let mut out = Jet::constant(shape, T::zero());
        for i1 in 0..=nx {
            for j1 in 0..=ny {
                for k1 in 0..=nt {
                    let a = self.coeffs[shape.index(i1, j1, k1)];
                    if a == T::zero() {
                        continue;
                    }
                    for i2 in 0..=nx - i1 {
                        for j2 in 0..=ny - j1 {
                            let base_out = shape.index(i1 + i2, j1 + j2, k1);
                            let base_b = shape.index(i2, j2, 0);
                            for k2 in 0..=nt - k1 {
                                out.coeffs[base_out + k2] += a * other.coeffs[base_b + k2];
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Applies a univariate function given its Taylor coefficients
    /// `f^(n)(a0) / n!` at the value of `self`.
    pub fn compose(&self, series: &[T]) -> Jet<T> {
        let degree = self.shape.nilpotency();
        debug_assert!(series.len() > degree);
        let mut h = *self;
        h.coeffs[0] = T::zero();
        let mut acc = Jet::constant(self.shape, series[degree]);
        for n in (0..degree).rev() {
            acc = acc.mul_jet(&h);
            acc.coeffs[0] += series[n];
        }
        acc
    }

    fn series_len(&self) -> usize {
        self.shape.nilpotency() + 1
    }
}

fn factorial<T: Scalar>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::lit(k as f64))
}

/// Taylor coefficients of `tanh` at `a`, from `y' = 1 - y^2`.
pub fn tanh_series<T: Scalar>(a: T, len: usize) -> Vec<T> {
    let mut c = vec![T::zero(); len];
    c[0] = a.tanh();
    for n in 0..len.saturating_sub(1) {
        let mut conv = T::zero();
        for j in 0..=n {
            conv += c[j] * c[n - j];
        }
        let rhs = if n == 0 { T::one() - conv } else { -conv };
        c[n + 1] = rhs / T::lit((n + 1) as f64);
    }
    c
}

impl<T: Scalar> Smooth<T> for Jet<T> {
    #[inline]
    fn value(&self) -> T {
        self.coeffs[0]
    }

    fn constant_like(&self, c: T) -> Self {
        Jet::constant(self.shape, c)
    }

    fn exp(&self) -> Self {
        let e = self.coeffs[0].exp();
        let mut series = Vec::with_capacity(self.series_len());
        let mut fact = T::one();
        for n in 0..self.series_len() {
            if n > 0 {
                fact *= T::lit(n as f64);
            }
            series.push(e / fact);
        }
        self.compose(&series)
    }

    fn ln(&self) -> Self {
        let a = self.coeffs[0];
        let mut series = vec![a.ln()];
        let mut pow = T::one();
        for n in 1..self.series_len() {
            pow *= a;
            let sign = if n % 2 == 1 { T::one() } else { -T::one() };
            series.push(sign / (T::lit(n as f64) * pow));
        }
        self.compose(&series)
    }

    fn sin(&self) -> Self {
        let (s, c) = self.coeffs[0].sin_cos();
        let cycle = [s, c, -s, -c];
        let mut fact = T::one();
        let series: Vec<T> = (0..self.series_len())
            .map(|n| {
                if n > 0 {
                    fact *= T::lit(n as f64);
                }
                cycle[n % 4] / fact
            })
            .collect();
        self.compose(&series)
    }

    fn cos(&self) -> Self {
        let (s, c) = self.coeffs[0].sin_cos();
        let cycle = [c, -s, -c, s];
        let mut fact = T::one();
        let series: Vec<T> = (0..self.series_len())
            .map(|n| {
                if n > 0 {
                    fact *= T::lit(n as f64);
                }
                cycle[n % 4] / fact
            })
            .collect();
        self.compose(&series)
    }

    fn tanh(&self) -> Self {
        self.compose(&tanh_series(self.coeffs[0], self.series_len()))
    }

    fn sqrt(&self) -> Self {
        // (a + h)^(1/2) = sqrt(a) * sum binom(1/2, n) (h / a)^n
        let a = self.coeffs[0];
        let root = a.sqrt();
        let half = T::lit(0.5);
        let mut binom = T::one();
        let mut pow = T::one();
        let mut series = Vec::with_capacity(self.series_len());
        for n in 0..self.series_len() {
            if n > 0 {
                binom = binom * (half - T::lit((n - 1) as f64)) / T::lit(n as f64);
                pow *= a;
            }
            series.push(root * binom / pow);
        }
        self.compose(&series)
    }

    fn recip(&self) -> Self {
        let a = self.coeffs[0];
        let inv = a.recip();
        let mut term = inv;
        let mut series = Vec::with_capacity(self.series_len());
        for _ in 0..self.series_len() {
            series.push(term);
            term = -term * inv;
        }
        self.compose(&series)
    }
}

impl<T: Scalar> Add for Jet<T> {
    type Output = Jet<T>;
    fn add(self, rhs: Jet<T>) -> Jet<T> {
        self.zip(&rhs, |a, b| a + b)
    }
}

impl<T: Scalar> Sub for Jet<T> {
    type Output = Jet<T>;
    fn sub(self, rhs: Jet<T>) -> Jet<T> {
        self.zip(&rhs, |a, b| a - b)
    }
}

impl<T: Scalar> Mul for Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: Jet<T>) -> Jet<T> {
        self.mul_jet(&rhs)
    }
}

impl<T: Scalar> Div for Jet<T> {
    type Output = Jet<T>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet<T>) -> Jet<T> {
        self.mul_jet(&rhs.recip())
    }
}

impl<T: Scalar> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.map(|c| -c)
    }
}

impl<T: Scalar> Add<T> for Jet<T> {
    type Output = Jet<T>;
    fn add(mut self, rhs: T) -> Jet<T> {
        self.coeffs[0] += rhs;
        self
    }
}

impl<T: Scalar> Sub<T> for Jet<T> {
    type Output = Jet<T>;
    fn sub(mut self, rhs: T) -> Jet<T> {
        self.coeffs[0] -= rhs;
        self
    }
}

impl<T: Scalar> Mul<T> for Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: T) -> Jet<T> {
        self.map(|c| c * rhs)
    }
}

impl<T: Scalar> Div<T> for Jet<T> {
    type Output = Jet<T>;
    fn div(self, rhs: T) -> Jet<T> {
        self.map(|c| c / rhs)
    }
}

impl<T: Scalar> fmt::Debug for Jet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("shape", &self.shape)
            .field("coeffs", &self.active())
            .finish()
    }
}

impl<T: Scalar> PartialEq for Jet<T> {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.active() == other.active()
    }
}
