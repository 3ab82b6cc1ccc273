#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anisotropic;
pub mod constants;
pub mod error;
pub mod lifshitz;
pub mod response;
pub mod special_math;
pub mod sweep;
pub mod validity;

pub use error::{Error, Result};
