//! Recovers every idempotent 1_nu as a combination of powers of one
//! K-monomial and prints the certificate.
//!
//!     cargo run --example idempotents -- 1 1 3

use qschur::convalg::{extract_idempotents, ConvAlgebra};
use qschur::flagvar::{enumerate_x, QuiverShape, DEFAULT_MAX_FLAGS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (m, d, q) = match args[..] {
        [m, d, q] => (m, d, q as u64),
        _ => (1, 1, 2),
    };
    let alg = ConvAlgebra::new(enumerate_x(QuiverShape::new(m)?, d, q, DEFAULT_MAX_FLAGS)?);
    let ext = extract_idempotents(&alg)?;
    let cert = &ext.certificate;
    println!("separating vector n = {:?}", cert.n_vector);
    for ((nu, s), coefs) in cert.nus.iter().zip(&cert.separating_exponents).zip(&cert.coefficients) {
        let shown: Vec<String> = coefs.iter().map(|c| c.to_string()).collect();
        println!("  1_{nu}: exponent {s:>3}, coefficients [{}]", shown.join(", "));
    }
    println!("mismatches: {}", ext.mismatches.len());
    println!("certificate re-evaluates: {}", cert.evaluate(&alg)? == ext.reconstructed);
    Ok(())
}
