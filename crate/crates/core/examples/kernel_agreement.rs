//! The symmetrizer kernel, the pairing radical and the skew-derivation kernel agree degree by degree.

use std::sync::Arc;

use nichols::braiding::BraidedSpace;
use nichols::cli::kernel_check;
use nichols::freealg::{symmetrizer_kernel, PairingRadical};
use nichols::nichols::NicholsBasis;

fn main() {
    let space = Arc::new(BraidedSpace::parse(3, &[vec!["z", "z^2"], vec!["1", "z"]]).unwrap());
    let basis = NicholsBasis::build(&space, 8).unwrap();
    let mut radical = PairingRadical::new(&space);
    for d in [vec![2, 0], vec![2, 1], vec![3, 0], vec![2, 2]] {
        let s = symmetrizer_kernel(&space, &d);
        println!(
            "degree {d:?}: {} words, kernel dim {}, radical equal: {}",
            s.words.len(),
            s.kernel.len(),
            s == radical.radical(&d)
        );
    }
    println!("{}", kernel_check(&space, &basis, 8).unwrap().detail);
}
