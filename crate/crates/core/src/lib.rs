//! Hyperbolic surfaces with cone points in edge-length coordinates: developing
//! maps and holonomy, Delaunay flips and an explicit Poisson bivector together
//! with numerical certificates for its properties.

pub mod cli;
pub mod corpus;
pub mod delaunay;
pub mod error;
pub mod holonomy;
pub mod identities;
pub mod oracle;
pub mod poisson;
pub mod se2;
pub mod sl2;
pub mod surface;

pub use error::{Error, Result};
