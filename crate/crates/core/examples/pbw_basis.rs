//! Hard super-letters, heights and the PBW monomial count of a B₂-type space at ζ₃.

use std::sync::Arc;

use nichols::braiding::BraidedSpace;
use nichols::nichols::{NicholsBasis, SuperLetters};
use nichols::words::format_word;

fn main() {
    let space = Arc::new(BraidedSpace::parse(3, &[vec!["z", "z"], vec!["1", "z^2"]]).unwrap());
    let basis = NicholsBasis::build(&space, 15).unwrap();
    let letters = SuperLetters::compute(&basis).unwrap();
    for r in &letters.records {
        println!(
            "[{}] degree {:?} p_uu = {} height {:?}",
            format_word(&r.word),
            r.degree,
            r.p_uu,
            r.height
        );
    }
    let census = letters.pbw_census(2, basis.top_degree().unwrap());
    let total: u64 = census.values().sum();
    println!("PBW monomials {total}, dim B(V) {:?}", basis.dimension());
}
