pub mod checks;
pub mod error;
pub mod infinitesimal;
pub mod lattice;
pub mod models;
pub mod okounkov;
pub mod scalars;
pub mod seshadri;
pub mod zariski;

mod cone;

pub use error::{Error, Result};
