//! Coefficient rings for group-algebra functions.
//!
//! Convolution, norms and the decomposition identities are written once,
//! generic over [`Coefficient`]. The exact lane instantiates with
//! `Ratio<BigInt>` (or complex rationals), the numerical lane with `f64`.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{Num, ToPrimitive, Zero};
use std::fmt::{Debug, Display};
use std::ops::Neg;

/// Minimal ring interface shared by every scalar we compute with.
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + PartialEq + Debug + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Num + Neg<Output = T> + Clone + PartialEq + Debug + Send + Sync + 'static
{
}

/// Ordered scalers that can report themselves as `f64`; the target of
/// squared-norm computations.
pub trait RealScalar: Scalar + PartialOrd + ToPrimitive + Display {
    fn from_u64(n: u64) -> Self;
    /// Exact absolute value.
    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl RealScalar for f64 {
    fn from_u64(n: u64) -> Self {
        n as f64
    }
}

impl RealScalar for f32 {
    fn from_u64(n: u64) -> Self {
        n as f32
    }
}

impl RealScalar for Ratio<BigInt> {
    fn from_u64(n: u64) -> Self {
        Ratio::from_integer(BigInt::from(n))
    }
}

/// Entry type of a sparse group function: a scalar with a distinguished
/// real part structure so that `|f(g)|^2` lands in an ordered ring.
pub trait Coefficient: Scalar {
    type Real: RealScalar;

    /// `|z|^2`, exact in the underlying ring.
    fn abs_sq(&self) -> Self::Real;
    fn from_real(r: Self::Real) -> Self;
    /// Lossy view for reporting and numerical estimation.
    fn to_f64_lossy(&self) -> f64;
}

impl Coefficient for f64 {
    type Real = f64;

    fn abs_sq(&self) -> f64 {
        self * self
    }
    fn from_real(r: f64) -> f64 {
        r
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Coefficient for f32 {
    type Real = f32;

    fn abs_sq(&self) -> f32 {
        self * self
    }
    fn from_real(r: f32) -> f32 {
        r
    }
    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }
}

impl Coefficient for Ratio<BigInt> {
    type Real = Ratio<BigInt>;

    fn abs_sq(&self) -> Self::Real {
        self * self
    }
    fn from_real(r: Self::Real) -> Self {
        r
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Coefficient for Complex<T>
where
    T: RealScalar + Num + Neg<Output = T> + Send + Sync + 'static,
    Complex<T>: Num,
{
    type Real = T;

    fn abs_sq(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }
    fn from_real(r: T) -> Self {
        Complex::new(r, T::zero())
    }
    fn to_f64_lossy(&self) -> f64 {
        // modulus; fine for reporting
        self.abs_sq().to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

/// Splits a scalar into the four nonnegative parts `f1 - f2 + i(f3 - f4)`
/// with disjoint supports pairwise in `(f1,f2)` and `(f3,f4)`.
pub trait FourParts: Coefficient {
    /// Returns `[re+, re-, im+, im-]`.
    fn four_parts(&self) -> [Self::Real; 4];
    fn assemble(parts: [Self::Real; 4]) -> Self;
}

fn pos_neg<R: RealScalar>(x: R) -> (R, R) {
    if x >= R::zero() {
        (x, R::zero())
    } else {
        (R::zero(), -x)
    }
}

impl FourParts for f64 {
    fn four_parts(&self) -> [f64; 4] {
        let (p, n) = pos_neg(*self);
        [p, n, 0.0, 0.0]
    }
    fn assemble(parts: [f64; 4]) -> f64 {
        parts[0] - parts[1]
    }
}

impl FourParts for Ratio<BigInt> {
    fn four_parts(&self) -> [Ratio<BigInt>; 4] {
        let (p, n) = pos_neg(self.clone());
        [p, n, Ratio::zero(), Ratio::zero()]
    }
    fn assemble(parts: [Ratio<BigInt>; 4]) -> Self {
        parts[0].clone() - parts[1].clone()
    }
}

impl<T> FourParts for Complex<T>
where
    T: RealScalar + Num + Neg<Output = T> + Send + Sync + 'static,
    Complex<T>: Num,
{
    fn four_parts(&self) -> [T; 4] {
        let (rp, rn) = pos_neg(self.re.clone());
        let (ip, im) = pos_neg(self.im.clone());
        [rp, rn, ip, im]
    }
    fn assemble(parts: [T; 4]) -> Self {
        let [rp, rn, ip, im] = parts;
        Complex::new(rp - rn, ip - im)
    }
}
