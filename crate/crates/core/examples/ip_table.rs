//! Prints I(p) and the direct-search subspace constant for p = 1..=8.

use std::time::Instant;

use subdfo::formulas::{expected_decrease_ds, integral_i, P_MAX};
use subdfo::specfun::gamma_half_ratio;

fn main() {
    for p in 1..=P_MAX {
        let t = Instant::now();
        let ip = integral_i(p, 1e-12).expect("quadrature");
        let e = expected_decrease_ds(p, 1000).unwrap().value / gamma_half_ratio(1000).unwrap().value;
        println!("p={p} I={:.15} err={:.1e} E/ratio={:.6} ({:?})", ip.value, ip.abs_error, e, t.elapsed());
    }
}
