//! The three bracket closures of V inside B(V), and the splitting B(V) = F ⊕ L(V).

use std::sync::Arc;

use nichols::braiding::BraidedSpace;
use nichols::freealg::Flavor;
use nichols::liealg::{direct_sum, LieSpan};
use nichols::nichols::NicholsBasis;

fn main() {
    let space = Arc::new(BraidedSpace::parse(5, &[vec!["z", "z^4"], vec!["1", "z"]]).unwrap());
    let basis = NicholsBasis::build(&space, 17).unwrap();
    println!("dim B(V) = {:?}", basis.dimension());
    for flavor in [Flavor::Std, Flavor::Minus, Flavor::C] {
        let span = LieSpan::closure(&basis, flavor).unwrap();
        println!("{:>5}: dim {} per degree {:?}", flavor.name(), span.dim_label(), span.hilbert());
    }
    let span = LieSpan::closure(&basis, Flavor::Std).unwrap();
    let (ds, check) = direct_sum(&basis, &span).unwrap();
    println!("direct sum {:?}: {}", ds.holds, check.detail);
}
