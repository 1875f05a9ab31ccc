//! Cartan data, root vectors and the Serre/power presentation of an A₂ space at ζ₅.

use std::sync::Arc;

use nichols::braiding::BraidedSpace;
use nichols::cartan::{self, CartanDatum};
use nichols::nichols::{NicholsBasis, SuperLetters};

fn main() {
    let space = Arc::new(BraidedSpace::parse(5, &[vec!["z", "z^4"], vec!["1", "z"]]).unwrap());
    let datum = CartanDatum::of(&space).expect("Cartan type");
    println!("cartan matrix {:?}, type {}", datum.matrix, datum.type_label());
    println!("positive roots {:?}", datum.roots);
    let basis = NicholsBasis::build(&space, 17).unwrap();
    let letters = SuperLetters::compute(&basis).unwrap();
    let pres = cartan::presentation(&space, &datum, &letters);
    print!("{}", pres.export_text(&space));
    for r in pres.verify(&basis, &letters).unwrap() {
        println!("{} {}: {}", r.status, r.name, r.detail);
    }
    println!("{}", cartan::root_labels_check(&space, &datum, &letters).detail);
}
