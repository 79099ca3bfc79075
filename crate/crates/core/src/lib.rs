// Negated float comparisons are deliberate: `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clustering;
pub mod concentration;
pub mod csv;
pub mod eigen;
pub mod error;
pub mod graphs;
pub mod harness;
pub mod matrix;
pub mod par;
pub mod rng;
pub mod spectra;
