//! The same convolution engine on chains of subspaces reproduces the
//! q-Schur algebra S_q(n, d), whose dimension counts n x n matrices over N
//! with entry sum d.
//!
//!     cargo run --example type_a_baseline -- 3 2 3

use qschur::convalg::{check_relations, closure_dimension, ConvAlgebra, GeneratorSet, DEFAULT_MAX_BASIS};
use qschur::flagvar::{enumerate_flags_type_a, DEFAULT_MAX_FLAGS};
use qschur::reptheory::nat_matrices_with_sum;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (n, d, q) = match args[..] {
        [n, d, q] => (n, d, q as u64),
        _ => (2, 2, 2),
    };
    let alg = ConvAlgebra::new(enumerate_flags_type_a(n - 1, d, q, DEFAULT_MAX_FLAGS)?);
    println!("{} chains, relations clean: {}", alg.size(), check_relations(&alg)?.is_clean());
    let gens = GeneratorSet::build(&alg)?;
    let dim = closure_dimension(&alg, &gens.all(), DEFAULT_MAX_BASIS)?;
    println!("dim S_q({n},{d}) = {dim}; matrix count {}", nat_matrices_with_sum(n, d as u64));
    Ok(())
}
