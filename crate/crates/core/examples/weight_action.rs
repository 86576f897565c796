//! Checks that K_a acts on functions over X_nu by its weight and that E_a,
//! F_a shift nu by one simple root.
//!
//!     cargo run --example weight_action -- 2 2 3

use qschur::convalg::{weight_action_check, ConvAlgebra};
use qschur::flagvar::{enumerate_x, QuiverShape, DEFAULT_MAX_FLAGS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (m, d, q) = match args[..] {
        [m, d, q] => (m, d, q as u64),
        _ => (1, 1, 2),
    };
    let alg = ConvAlgebra::new(enumerate_x(QuiverShape::new(m)?, d, q, DEFAULT_MAX_FLAGS)?);
    for nu in alg.flags().realized_nus() {
        let weights: Vec<i64> = (0..alg.node_count()).map(|a| alg.weight_exponent(a, &nu)).collect();
        println!("  X_{nu}: K exponents {weights:?}");
    }
    let violations = weight_action_check(&alg)?;
    println!("violations: {}", violations.len());
    Ok(())
}
