use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::Num;

/// A number type the density bounds can be evaluated in. Exact rationals are
/// the default everywhere a pass/fail decision is made; floats are available
/// for plotting and quick estimates.
pub trait Scalar: Num + Copy + PartialOrd + Debug + Display {
    fn from_int(v: i64) -> Self;
}

impl Scalar for f32 {
    fn from_int(v: i64) -> Self {
        v as f32
    }
}

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for Ratio<i64> {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v)
    }
}

impl Scalar for Ratio<i128> {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
}
