//! Saturated sets, Weyl dimensions and orbits for type D_{m+2}.
//!
//!     cargo run --example pi_sets -- 2 2

use qschur::reptheory::{
    check_saturation, feasibility_inequality, necessary_but_not_in_pi, pi_set, top_dvec, weyl_dim, weyl_orbit, CartanData,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (m, d) = match args[..] {
        [m, d] => (m, d as i64),
        _ => (2, 2),
    };
    let c = CartanData::type_d(m);
    println!("D{}: nodes {:?}, {} positive roots", m + 2, c.names(), c.positive_roots().len());
    let dvec = top_dvec(c.rank(), m + 1, d);
    let pi = pi_set(&c, &dvec)?;
    for el in &pi {
        let orbit = weyl_orbit(&c, &el.lambda)?;
        let feasible = feasibility_inequality(&dvec, &el.nu, &c);
        println!(
            "  lambda {} nu {:?}: dim {}, orbit {}, feasible {feasible}",
            el.lambda,
            el.nu,
            weyl_dim(&c, &el.lambda)?,
            orbit.len()
        );
    }
    println!("saturated: {}", check_saturation(&c, &pi));
    let extra = necessary_but_not_in_pi(m, d);
    println!("{} vectors satisfy the necessary condition without lying in pi, e.g. {:?}", extra.len(), extra.first());
    Ok(())
}
