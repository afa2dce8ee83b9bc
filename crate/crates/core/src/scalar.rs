//! Scalar abstraction for the numeric kernels.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the numeric kernels are generic over: `f32` or `f64`.
///
/// All conversion helpers panic on failure; the integers fed through them are
/// small (degrees, dimensions, set sizes) and always representable.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum<Self> + Debug + Display + Send + Sync + 'static
{
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 not representable in scalar type")
    }

    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize not representable in scalar type")
    }

    fn of_i64(n: i64) -> Self {
        Self::from_i64(n).expect("i64 not representable in scalar type")
    }

    fn of_u64(n: u64) -> Self {
        Self::from_u64(n).expect("u64 not representable in scalar type")
    }

    fn of_u32(n: u32) -> Self {
        Self::from_u32(n).expect("u32 not representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar not representable as f64")
    }
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Sum<T>
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Compensated (Kahan) accumulator; keeps double-sum residuals near zero
/// honest instead of drowning them in rounding noise.
#[derive(Clone, Copy, Debug)]
pub struct KahanSum<T> {
    sum: T,
    carry: T,
}

impl<T: Scalar> Default for KahanSum<T> {
    fn default() -> Self {
        Self { sum: T::zero(), carry: T::zero() }
    }
}

impl<T: Scalar> KahanSum<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: T) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum
    }
}
