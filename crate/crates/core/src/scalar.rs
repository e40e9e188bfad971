use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type the scoring code is generic over: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + serde::Serialize
    + 'static
{
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal fits the scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
