//! Bedford-McMullen carpets: classification, level-k connectivity,
//! gap sequences and the exponents that separate them.

pub mod carpet;
pub mod cli;
pub mod connectivity;
pub mod corpus;
pub mod gaps;
pub mod grid;
pub mod oracle;
pub mod theory;
