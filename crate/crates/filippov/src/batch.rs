//! Batch runs over many starting points or sample positions.
//!
//! The default build fans these out with rayon. Disabling the `parallel`
//! feature swaps in sequential loops with identical signatures and
//! results; the `_seq` variants are always available so the bench suite
//! can compare the two on the same build.

use crate::envelope::{envelope, Envelope};
use crate::field::Field;
use crate::flow::{solve_filippov, FlowError, Trajectory};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// One solve per starting point. Order of results matches `x0s`.
#[cfg(feature = "parallel")]
pub fn solve_many(
    field: &Field,
    x0s: &[f64],
    t_end: f64,
    grid: &[f64],
    force: bool,
) -> Vec<Result<Trajectory, FlowError>> {
    x0s.par_iter().map(|&x0| solve_filippov(field, x0, t_end, grid, force)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn solve_many(
    field: &Field,
    x0s: &[f64],
    t_end: f64,
    grid: &[f64],
    force: bool,
) -> Vec<Result<Trajectory, FlowError>> {
    solve_many_seq(field, x0s, t_end, grid, force)
}

pub fn solve_many_seq(
    field: &Field,
    x0s: &[f64],
    t_end: f64,
    grid: &[f64],
    force: bool,
) -> Vec<Result<Trajectory, FlowError>> {
    x0s.iter().map(|&x0| solve_filippov(field, x0, t_end, grid, force)).collect()
}

/// Envelope at each position; `None` outside the window.
#[cfg(feature = "parallel")]
pub fn envelope_profile(field: &Field, xs: &[f64]) -> Vec<Option<Envelope>> {
    xs.par_iter().map(|&x| envelope(field, x)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn envelope_profile(field: &Field, xs: &[f64]) -> Vec<Option<Envelope>> {
    envelope_profile_seq(field, xs)
}

pub fn envelope_profile_seq(field: &Field, xs: &[f64]) -> Vec<Option<Envelope>> {
    xs.iter().map(|&x| envelope(field, x)).collect()
}
