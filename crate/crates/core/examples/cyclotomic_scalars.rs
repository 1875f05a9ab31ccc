//! Exact arithmetic in cyclotomic fields.

use nichols::scalar::{q_factorial, CycScalar};

fn main() {
    let z = CycScalar::parse(12, "z").unwrap();
    let w = CycScalar::parse(12, "z^4 - 1/2").unwrap();
    println!("z = {z}, ord {:?}", z.mult_order().unwrap());
    println!("w = {w}");
    println!("w / z = {}", w.checked_div(&z).unwrap());
    println!("z^6 = {}", z.pow(6));
    let q = CycScalar::zeta_pow(4, 1);
    for k in 1..=4 {
        println!("({k})!_i = {}", q_factorial(k, &q));
    }
    // ζ₃ viewed inside the larger field
    let cube_root = CycScalar::zeta_pow(3, 1);
    println!("ζ₃ in Q(ζ₁₂): {}", cube_root.embed(12));
}
