//! Inverse semigroups built from one-dimensional point sets, model sets and
//! tilings, and finite presentations of their universal groups. All
//! arithmetic is exact over ℚ(√d).

pub mod exactnum;
pub mod sequences;
pub mod presentation;
pub mod pointset;
pub mod psgamma;
pub mod modelset;
pub mod universal;
pub mod cases;
pub mod verify;
