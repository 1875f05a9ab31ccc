//! Certifying dim L(V) = ∞ from a pair of letters with p_uu = 1 and p_uv p_vu ≠ 1.

use std::sync::Arc;

use nichols::braiding::BraidedSpace;
use nichols::freealg::Flavor;
use nichols::liealg::{b_infinite_certificate, l_infinite_certificate, pair_growth, LieSpan};
use nichols::nichols::{NicholsBasis, SuperLetters};

fn main() {
    let space = Arc::new(BraidedSpace::parse(2, &[vec!["1", "-1"], vec!["1", "-1"]]).unwrap());
    let basis = NicholsBasis::build(&space, 10).unwrap();
    let letters = SuperLetters::compute(&basis).unwrap();
    println!("B(V): {:?}", b_infinite_certificate(&basis, &letters));
    println!("L(V): {:?}", l_infinite_certificate(&basis, &letters));
    let span = LieSpan::closure(&basis, Flavor::Std).unwrap();
    if let Some((cert, check)) = pair_growth(&basis, &letters, &span).unwrap() {
        println!("pair ({}, {}) counters {:?}", cert.u, cert.v, cert.counters);
        println!("{} {}", check.status, check.detail);
    }
}
