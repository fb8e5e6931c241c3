pub mod assembly;
pub mod error;
pub mod gadget;
pub mod jones;
pub mod knotio;
pub mod montecarlo;
pub mod permanent;
pub mod ring;
pub mod skein;
pub mod vertex;

pub use error::{Error, Result};
