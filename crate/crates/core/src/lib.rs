//! Orientable Wicks forms over involutive alphabets: validation, gluing and
//! genus, isomorphism-free enumeration, non-cancelling representations, the
//! colouring/labelling construction of words with many maximal-form
//! representations (and its square-free variant), and certified evaluation
//! of the counting bounds.

pub mod words;
pub mod surface;
pub mod construct;
pub mod enumerate;
pub mod represent;
pub mod bounds;
pub mod cli;
