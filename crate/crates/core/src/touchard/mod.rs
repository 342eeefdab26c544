//! Touchard polynomials of order `m`: exact forms for integer `m`, the
//! recurrence and Spivey relations, and real-argument Dobiński evaluation.

mod numeric;
mod spivey;
mod symbolic;

pub use numeric::{dobinski, touchard_numeric};
pub use spivey::{
    spivey_lhs, spivey_m1, spivey_m1_kind, spivey_rhs, spivey_sides, ExactValue, SpiveyForm,
    SpiveyMode, SpiveyParams, SpiveyReport, SpiveySides, Verdict,
};
pub use symbolic::{
    top_coefficient, touchard_by_series, touchard_recurrence_residual, touchard_symbolic,
    RecurrenceForm, TouchardPoly,
};
