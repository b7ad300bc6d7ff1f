//! Level planarity with constraint trees and cluster hierarchies.

pub mod crosscheck;
pub mod drawing;
pub mod error;
pub mod gen;
pub mod io;
pub mod model;
pub mod oracles;
pub mod reductions;

pub use error::{Error, Result};
