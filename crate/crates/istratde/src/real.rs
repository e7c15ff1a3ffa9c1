//! Scalar abstraction for the optimizer core.
//!
//! Everything numeric in this crate is generic over [`Real`], so the same
//! operators and drivers run in `f32` or `f64`. Concrete `f64` aliases for
//! the main types live at the crate root.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use rand::Rng;

/// Floating-point scalar usable by the optimizer: `f32` or `f64`.
pub trait Real:
    Float + NumAssign + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Draws a value uniformly from `[0, 1)`.
    fn sample_unit<G: Rng + ?Sized>(rng: &mut G) -> Self;
}

impl Real for f64 {
    #[inline]
    fn sample_unit<G: Rng + ?Sized>(rng: &mut G) -> Self {
        rng.gen::<f64>()
    }
}

impl Real for f32 {
    #[inline]
    fn sample_unit<G: Rng + ?Sized>(rng: &mut G) -> Self {
        rng.gen::<f32>()
    }
}

/// Converts an `f64` constant into the working scalar type.
///
/// Panics if the value is not representable, which cannot happen for the
/// finite literals this crate uses.
#[inline]
pub fn cast<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("finite constant must convert to the scalar type")
}
