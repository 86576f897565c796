//! Compares the dimension of the algebra generated by E_a, F_a, K_a with
//! the sum of squared Weyl dimensions over the saturated set.
//!
//!     cargo run --release --example dim_check -- 2 2 2

use qschur::convalg::{closure_dimension, closure_dimension_weighted, ConvAlgebra, GeneratorSet, DEFAULT_MAX_BASIS};
use qschur::flagvar::{enumerate_x, QuiverShape, DEFAULT_MAX_FLAGS};
use qschur::reptheory::{pi_set, schur_dimension, top_dvec, weyl_dim, CartanData};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (m, d, q) = match args[..] {
        [m, d, q] => (m, d, q as u64),
        _ => (2, 1, 2),
    };
    let alg = ConvAlgebra::new(enumerate_x(QuiverShape::new(m)?, d, q, DEFAULT_MAX_FLAGS)?);
    let graded = closure_dimension_weighted(&alg, DEFAULT_MAX_BASIS)?;
    println!("graded closure: {} ({} nonzero blocks)", graded.dimension, graded.blocks.len());
    if d <= 1 {
        let gens = GeneratorSet::build(&alg)?;
        println!("two-sided closure: {}", closure_dimension(&alg, &gens.all(), DEFAULT_MAX_BASIS)?);
    }

    let cartan = CartanData::type_d(m);
    let pi = pi_set(&cartan, &top_dvec(cartan.rank(), m + 1, d as i64))?;
    for el in &pi {
        println!("  L{}: dim {}", el.lambda, weyl_dim(&cartan, &el.lambda)?);
    }
    println!("sum of squares: {}", schur_dimension(&cartan, &pi)?);
    Ok(())
}
