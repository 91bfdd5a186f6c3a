//! Scalar abstractions shared by the exact and floating layers.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Coefficient ring for [`crate::Poly`]. Division is only used where the
/// coefficients form a field (rationals, Gaussian rationals, floats).
pub trait Coeff: Clone + PartialEq + Debug + Num + Neg<Output = Self> {}

impl<T> Coeff for T where T: Clone + PartialEq + Debug + Num + Neg<Output = T> {}

/// Floating-point scalar for the numerical layer.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("representable constant")
    }
}

impl Real for f32 {}
impl Real for f64 {}
