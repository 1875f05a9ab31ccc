//! Free-algebra identities: the braided Jacobi identity and the power recursions of two letters.

use nichols::braiding::BraidedSpace;
use nichols::cli::jacobi_check;
use nichols::liealg::{flat_power_identities, nilpotency_sweep, pair_space, power_bracket_identities};
use nichols::CycScalar;
use std::sync::Arc;

fn main() {
    let space = Arc::new(BraidedSpace::parse(6, &[vec!["z^2", "-z^2"], vec!["1", "-1"]]).unwrap());
    println!("{}", jacobi_check(&space, 7, 200).detail);
    let z = |e| CycScalar::zeta_pow(6, e);
    let aux = pair_space(6, &z(1), &z(2), &z(3), &z(3));
    for k in 1..=3 {
        println!("recursion and determinant, k = {k}: {:?}", power_bracket_identities(&aux, k));
    }
    let flat = pair_space(6, &CycScalar::one(6), &z(1), &z(5), &z(3));
    println!("p_uu = 1, p_uv p_vu = 1, k = 4: {:?}", flat_power_identities(&flat, 4));
    println!("{}", nilpotency_sweep(6, 3).unwrap().detail);
}
