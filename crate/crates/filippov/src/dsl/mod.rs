//! Field description language: expression trees, the piecewise field
//! grammar, and local asymptotic classification of expressions near a point.

mod expr;
mod local_form;
pub(crate) mod parse;

pub use expr::{CriticalArg, CriticalKind, EvalError, Expr};
pub use local_form::{
    local_form, local_form_with_radius, numeric_local_form, signed_form, LocalForm, SignedForm,
};
pub(crate) use local_form::{one_sided_limit_form, LimitOutcome};
pub use parse::{parse_field, render, DenseSegment, FieldSpec, OracleName, ParseError, Piece, PointOverride, RawInterval};

/// Side from which a one-sided quantity is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// Unit step into the side: `+1` for right, `-1` for left.
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}
