//! Enumerates the ramified flags of type D_{m+2} in F_q^d and compares the
//! size of every X_nu with the Gaussian-binomial count.
//!
//!     cargo run --example enumerate_flags -- 2 1 3

use qschur::flagvar::{count_x, enumerate_x, strata_for_nu, stratum_count, QuiverShape, DEFAULT_MAX_FLAGS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (m, d, q) = match args[..] {
        [m, d, q] => (m, d, q as u64),
        _ => (1, 2, 2),
    };
    let flags = enumerate_x(QuiverShape::new(m)?, d, q, DEFAULT_MAX_FLAGS)?;
    println!("D{} flags in F_{q}^{d}: {} (closed form {})", m + 2, flags.len(), count_x(m, d, q));
    for (nu, range) in flags.by_nu() {
        let closed: num_bigint::BigUint = strata_for_nu(nu, m, d).iter().map(|s| stratum_count(s, d, q)).sum();
        println!("  X_{nu}: {:>4} flags, closed form {closed}", range.len());
    }
    if let Some(f) = flags.ramified_flag(flags.len() - 1) {
        println!("last flag has dimension vector {}", f.dim_vector());
    }
    Ok(())
}
