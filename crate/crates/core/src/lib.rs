//! Ball polytopes in 3-space: face structure of finite intersections of
//! unit balls, diameter-graph extremality, canonical self-duality and
//! generators of extremal configurations.

pub mod ball_hull;
pub mod complex;
pub mod config;
pub mod duality;
pub mod error;
pub mod faces;
pub mod generators;
pub mod geom;
pub mod io;
pub mod vazsonyi;
pub mod verify;

pub use config::Configuration;
pub use error::{Error, Result};
pub use geom::{Point3, Tolerance};
