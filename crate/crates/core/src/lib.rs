//! Recognition of Goursat bundles and construction of contact coordinates.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is exact: scalars are
//! canonical symbolic expressions and ranks are decided by elimination over
//! the field of such expressions.

#![no_std]

extern crate alloc;

pub mod classify;
pub mod contact;
pub mod control;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod linalg;
pub mod normal_form;
pub mod sampler;
pub mod singular;
pub mod verify;

pub use error::{Error, Result};
