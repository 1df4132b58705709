//! Numerical building blocks shared by the statistics modules.

pub mod interp;
pub mod minimize;
pub mod quad;
pub mod special;
