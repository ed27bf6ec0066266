//! Niho bent functions from hyperovals in PG(2, q), q = 2^m.

pub mod bent;
pub mod equiv;
pub mod error;
pub mod geometry;
pub mod gfun;
pub mod gf2m;
pub mod opoly;
pub mod reproduce;

pub use error::{Error, Result};
pub use gf2m::{Ext, Fe, FieldParams, Gf2m, Ke, UnitCircle};
