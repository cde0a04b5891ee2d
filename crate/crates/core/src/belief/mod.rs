//! Frames, mass functions, their belief/plausibility/commonality forms, and
//! the combination and conditioning rules.

mod combine;
mod frame;
mod mass;
mod set_function;

pub use combine::{condition, dempster_combine, walley_combine};
pub use frame::{Frame, Subset, DENSE_LIMIT, MAX_OUTCOMES};
pub use mass::{MassFunction, MASS_TOLERANCE};
pub use set_function::{
    from_belief, from_commonality, to_belief, to_commonality, to_plausibility, SetFunction,
    SetFunctionKind,
};
