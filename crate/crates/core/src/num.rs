//! Scalar abstraction over the floating-point type.
//!
//! All numeric kernels are generic over [`Float`] so the same code runs in
//! `f32` or `f64`; the concrete aliases at the crate root fix `f64`, which is
//! what the generator, the harness and the CLI use.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{FromPrimitive, NumAssign};
use rand::distr::uniform::SampleUniform;
use rand::distr::weighted::Weight;

/// Floating-point scalar usable throughout the library.
pub trait Float:
    num_traits::Float
    + FromPrimitive
    + NumAssign
    + SampleUniform
    + Weight
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, for configuration values.
    fn from_config(v: f64) -> Self {
        Self::from_f64(v).expect("finite config value")
    }

    /// Conversion from a count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count fits in float")
    }
}

impl Float for f32 {}
impl Float for f64 {}
