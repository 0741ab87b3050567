pub mod census;
pub mod cover;
pub mod data;
pub mod error;
pub mod fan;
pub mod io;
pub mod klyachko;
pub mod linalg;
pub mod monodromy;
pub mod pl;
pub mod reproduce;
pub mod sweep;

pub use error::{Error, Result};
pub use fan::{Cone, ConeId, Fan, FanData};
