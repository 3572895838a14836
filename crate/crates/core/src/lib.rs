//! Popularity and fractional popularity of matchings in roommates instances.
//!
//! Every verdict carries a certificate that can be checked independently: a
//! dual witness when the matching is popular, and a blocking structure with a
//! more popular matching (or a half-integral fractional matching) otherwise.

pub mod aux_graph;
pub mod bench;
pub mod cli;
pub mod engine;
pub mod error;
pub mod fractional;
pub mod gen;
pub mod io;
pub mod model;
pub mod oracle;
pub mod popularity;
