pub mod chardata;
pub mod cli;
pub mod document;
pub mod embed;
pub mod error;
pub mod exactlin;
pub mod models;
pub mod momentangle;
pub mod polytope;
pub mod toric;
pub mod verify;

pub use error::{Error, Result};
