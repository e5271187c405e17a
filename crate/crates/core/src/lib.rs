pub mod algebra;
pub mod cli;
pub mod closedform;
pub mod cm;
pub mod error;
pub mod families;
pub mod hasse;
pub mod oracle;
pub mod value;

pub use error::{Error, Result};
pub use value::{Method, Part, SumValue};
