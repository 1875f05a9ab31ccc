//! Lyndon factorization, Shirshov splits and the bracketing of words.

use std::sync::Arc;

use nichols::braiding::BraidedSpace;
use nichols::freealg::Flavor;
use nichols::words::{bracketing, enumerate_lyndon, format_word, lyndon_factorization, parse_word, shirshov_decomposition};

fn main() {
    let w = parse_word("2121121122").unwrap();
    let parts: Vec<String> = lyndon_factorization(&w).iter().map(|p| format_word(p)).collect();
    println!("{} = {}", format_word(&w), parts.join(" · "));
    for u in enumerate_lyndon(2, 5) {
        if let Ok((v, t)) = shirshov_decomposition(&u) {
            println!("{:>6} = ({}, {})", format_word(&u), format_word(&v), format_word(&t));
        }
    }
    let space = Arc::new(BraidedSpace::parse(3, &[vec!["z", "z^2"], vec!["1", "z"]]).unwrap());
    let u = parse_word("112").unwrap();
    println!("[112]  = {}", bracketing(&space, &u, Flavor::Std).format());
    println!("[112]⁻ = {}", bracketing(&space, &u, Flavor::Minus).format());
}
