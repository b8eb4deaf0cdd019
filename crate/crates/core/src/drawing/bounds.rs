//! Girth-parameterized density bounds for IC-plane graphs and the class
//! thresholds derived from them.

use thiserror::Error;

use crate::graph::Girth;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum BoundError {
    #[error("girth parameter must be at least 3, got {0}")]
    GirthTooSmall(usize),
}

fn check_girth(g: usize) -> Result<(), BoundError> {
    if g < 3 {
        Err(BoundError::GirthTooSmall(g))
    } else {
        Ok(())
    }
}

/// Upper bound on the edge count of an IC-plane graph of order `n` and girth
/// at least `g`: `(5g-2)/(4g-8) * n - 2g/(g-2)`.
///
/// It is the Euler bound `g/(g-2) * (n-2)` for the planar skeleton plus one
/// edge per crossing, of which there are at most `n/4`.
pub fn edge_bound<T: Scalar>(n: usize, g: usize) -> Result<T, BoundError> {
    check_girth(g)?;
    let g = g as i64;
    let slope = T::from_int(5 * g - 2) / T::from_int(4 * g - 8);
    let offset = T::from_int(2 * g) / T::from_int(g - 2);
    Ok(slope * T::from_int(n as i64) - offset)
}

/// Largest integer edge count allowed by [`edge_bound`], or `None` when the
/// bound is negative.
pub fn edge_cap(n: usize, g: usize) -> Result<Option<usize>, BoundError> {
    let bound: crate::ExactBound = edge_bound(n, g)?;
    let floor = bound.floor().to_integer();
    Ok((floor >= 0).then_some(floor as usize))
}

/// Minimum-degree ceiling for IC-plane graphs of girth at least `g`.
pub fn min_degree_bound(g: usize) -> Result<usize, BoundError> {
    check_girth(g)?;
    Ok(match g {
        3 => 6,
        4 => 4,
        _ => 3,
    })
}

/// Smallest class count `m` from which equitable tree-`m`-colorings are
/// guaranteed for IC-plane graphs of girth at least `g`.
///
/// The guarantee is only established at girths 3, 4, 5, 6 and 26; in between
/// the value for the largest established girth not exceeding `g` is used,
/// which is sound because the girth classes are nested.
pub fn threshold_f(g: usize) -> Result<usize, BoundError> {
    check_girth(g)?;
    Ok(match g {
        3 => 8,
        4 => 6,
        5 => 5,
        6..=25 => 4,
        _ => 3,
    })
}

/// [`min_degree_bound`] for a measured girth; forests fall in the `g >= 5` case.
pub fn min_degree_bound_for(girth: Girth) -> usize {
    min_degree_bound(girth.finite().unwrap_or(usize::MAX)).expect("girth is at least 3")
}

/// [`threshold_f`] for a measured girth; forests fall in the `g >= 26` case.
pub fn threshold_for(girth: Girth) -> usize {
    threshold_f(girth.finite().unwrap_or(usize::MAX)).expect("girth is at least 3")
}
