//! Prints the stratum table: dimensions, fiber dimensions and the point
//! count polynomial interpolated from enumeration over several primes.
//!
//!     cargo run --release --example strata_table -- 2 2

use qschur::flagvar::DEFAULT_MAX_FLAGS;
use qschur::geometry::{degree_matches, stratum_csv, stratum_table};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (m, d) = match args[..] {
        [m, d] => (m, d),
        _ => (1, 2),
    };
    let rows = stratum_table(m, d, &[2, 3, 5, 7, 11], DEFAULT_MAX_FLAGS)?;
    print!("{}", stratum_csv(&rows)?);
    let bad = rows.iter().filter(|r| !degree_matches(r)).count();
    eprintln!("{} strata, {bad} with degree != dim_X", rows.len());
    Ok(())
}
