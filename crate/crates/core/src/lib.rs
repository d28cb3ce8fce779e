pub mod config;
pub mod error;
pub mod lp;
pub mod body;
pub mod numerics;
pub mod measure;

pub mod functional;

pub use config::{Config, Exec, McConfig, Tolerances};
pub use error::{Error, Result};
