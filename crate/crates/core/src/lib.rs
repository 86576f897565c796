//! Convolution algebras on ramified flag varieties over finite fields.

pub mod cli;
pub mod convalg;
pub mod exactnum;
pub mod flagvar;
pub mod geometry;
pub mod gfq;
pub mod reptheory;
pub mod subspaces;
