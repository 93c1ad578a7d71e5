//! Analysis toolkit for scalar autonomous ODEs `dX/dt = b(X)` whose velocity
//! field `b` may be discontinuous, defined piecewise, overridden on single
//! points, or only known up to a dense measurable split.
//!
//! The crate provides:
//!
//! * a small expression DSL for describing such fields ([`dsl`]),
//! * the set-valued envelope `K[b](x) = [m(x), M(x)]` built from essential
//!   one-sided bounds, which is blind to modifications of `b` on null sets
//!   ([`envelope`]),
//! * a uniqueness analysis that decides whether the inclusion
//!   `dX/dt ∈ K[b](X)` has exactly one solution per initial value, by
//!   checking where the envelope straddles zero and classifying the
//!   divergence of one-sided reciprocal integrals there ([`uniqueness`]),
//! * an event-driven exact solver that integrates time of flight
//!   `t = ∫ dy/b(y)` and inverts it, with sticking at envelope zeros, plus
//!   witness families demonstrating non-uniqueness ([`flow`]),
//! * an independent brute-force interval funnel that over-approximates every
//!   solution of the inclusion, used to cross-check the solver ([`oracle`]).
//!
//! All numeric work is `f64`. Analyses run on a caller-supplied compact
//! window. With the `parallel` feature (default) batch entry points in
//! [`batch`] fan out over rayon; without it they degrade to sequential loops
//! with identical results.

pub mod batch;
pub mod dsl;
pub mod envelope;
pub mod field;
pub mod flow;
pub mod interval;
pub mod oracle;
mod roots;
pub mod uniqueness;

pub use batch::{envelope_profile, envelope_profile_seq, solve_many, solve_many_seq};
pub use dsl::{parse_field, render, Expr, FieldSpec, LocalForm, PointOverride, Side};
pub use envelope::{zero_set, Envelope, ZeroRegion};
pub use field::{build_field, Field, MeasureOracle, Window};
pub use flow::{
    classical_select, solve_classical, solve_filippov, time_of_flight, witnesses_condition_a,
    witnesses_condition_a_many, witnesses_condition_b, Event, EventKind, FlowError, MethodTag,
    SelectedField, TimeOfFlight, Trajectory,
};
pub use oracle::{
    euler_selection, reachable_funnel, validate_trajectory, Funnel, OracleError, SelectionRule,
    ValidationReport,
};
pub use uniqueness::{uniqueness_verdict, OsgoodVerdict, UniquenessVerdict};
