//! Numerical toolkit for the coupled Kähler–Yang–Mills equations.

pub mod coupled;
pub mod dual;
pub mod error;
pub mod forms;
pub mod gauge;
pub mod grid;
pub mod kahler;
pub mod quaternion;
pub mod reduce;
pub mod stability;
pub mod stencil;
pub mod weighted;

pub use error::{Error, Result};
pub use quaternion::Quaternion;
