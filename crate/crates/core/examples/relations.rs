//! Checks every defining relation of the quantum group on the convolution
//! generators, then shows that a single corrupted entry is caught.
//!
//!     cargo run --release --example relations -- 2 2 2

use qschur::convalg::{check_relations_with, ConvAlgebra, Generator, GeneratorSet};
use qschur::flagvar::{enumerate_x, QuiverShape, DEFAULT_MAX_FLAGS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (m, d, q) = match args[..] {
        [m, d, q] => (m, d, q as u64),
        _ => (2, 1, 2),
    };
    let alg = ConvAlgebra::new(enumerate_x(QuiverShape::new(m)?, d, q, DEFAULT_MAX_FLAGS)?);
    let mut gens = GeneratorSet::build(&alg)?;
    let report = check_relations_with(&alg, &gens)?;
    println!("{} relation instances on {} flags", report.instances_checked, alg.size());
    for (family, n) in &report.per_family {
        println!("  {family:>14}: {n}");
    }
    println!("violations: {}", report.violations.len());

    let target = Generator::E(2);
    let op = gens.get_mut(&target).expect("E_j1 exists");
    let first = op.entries().next().map(|(r, c, v)| (r, c, v.scale_int(2)));
    if let Some((r, c, v)) = first {
        *op = op.with_entry(r, c, v);
        let broken = check_relations_with(&alg, &gens)?;
        println!("after doubling one entry of {}: {} violations", target.label(alg.kind()), broken.violations.len());
        if let Some(first) = broken.violations.first() {
            println!("  first: {}", serde_json::to_string(first)?);
        }
    }
    Ok(())
}
