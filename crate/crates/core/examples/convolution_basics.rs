//! Builds a few generators of the convolution algebra and multiplies them.
//!
//!     cargo run --example convolution_basics

use qschur::convalg::{ConvAlgebra, Generator};
use qschur::flagvar::{enumerate_x, QuiverShape, DEFAULT_MAX_FLAGS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alg = ConvAlgebra::new(enumerate_x(QuiverShape::new(1)?, 1, 2, DEFAULT_MAX_FLAGS)?);
    let kind = alg.kind();
    let e = alg.generator(&Generator::E(0))?;
    let f = alg.generator(&Generator::F(0))?;
    println!("{} has {} nonzero entries", Generator::E(0).label(kind), e.nnz());
    println!("E_i as (row, col, value) triples: {}", e.to_json(alg.field()));

    let ef = alg.compose(&e, &f)?;
    let fe = alg.compose(&f, &e)?;
    let bracket = alg.sub(&ef, &fe)?;
    for (r, c, v) in bracket.entries() {
        println!("  [E_i, F_i]({r}, {c}) = {v}");
    }
    let k = alg.generator(&Generator::K(0))?;
    let k_inv = alg.generator(&Generator::KInv(0))?;
    println!("K_i K_i^-1 is the unit: {}", alg.compose(&k, &k_inv)? == alg.unit());
    Ok(())
}
