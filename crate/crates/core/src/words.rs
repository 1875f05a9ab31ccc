//! Words over the alphabet `{1, …, n}` and Lyndon combinatorics.
//!
//! Words compare lexicographically with `1 < 2 < … < n` and a proper prefix
//! smaller than its extensions, which is exactly the slice order on `[u8]`.

use thiserror::Error;

use crate::braiding::{BraidedSpace, Degree};
use crate::freealg::{Flavor, FreeElement};

/// Letters are stored as their values `1..=n`.
pub type Word = Vec<u8>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("word {0} is not a Lyndon word")]
    NotLyndon(String),
    #[error("a single letter has no Shirshov decomposition")]
    SingleLetter,
    #[error("empty word")]
    Empty,
    #[error("bad word syntax: {0}")]
    Syntax(String),
}

pub fn lex_less(u: &[u8], v: &[u8]) -> bool {
    u < v
}

pub fn degree(u: &[u8], n: usize) -> Degree {
    let mut d = vec![0u32; n];
    for &a in u {
        d[a as usize - 1] += 1;
    }
    d
}

pub fn is_lyndon(u: &[u8]) -> bool {
    if u.is_empty() {
        return false;
    }
    // u < u2 u1 for every proper split
    (1..u.len()).all(|k| {
        let (u1, u2) = u.split_at(k);
        let rot: Vec<u8> = u2.iter().chain(u1).copied().collect();
        u < rot.as_slice()
    })
}

/// Duval's algorithm: the unique nonincreasing factorization into Lyndon words.
pub fn lyndon_factorization(u: &[u8]) -> Vec<Word> {
    let mut out = Vec::new();
    let n = u.len();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        let mut k = i;
        while j < n && u[k] <= u[j] {
            if u[k] < u[j] {
                k = i;
            } else {
                k += 1;
            }
            j += 1;
        }
        while i <= k {
            out.push(u[i..i + j - k].to_vec());
            i += j - k;
        }
    }
    out
}

/// `u = vw` with `v`, `w` Lyndon and `v` shortest.
pub fn shirshov_decomposition(u: &[u8]) -> Result<(Word, Word), WordError> {
    if u.is_empty() {
        return Err(WordError::Empty);
    }
    if u.len() == 1 {
        return Err(WordError::SingleLetter);
    }
    if !is_lyndon(u) {
        return Err(WordError::NotLyndon(format_word(u)));
    }
    for k in 1..u.len() {
        let (v, w) = u.split_at(k);
        if is_lyndon(v) && is_lyndon(w) {
            return Ok((v.to_vec(), w.to_vec()));
        }
    }
    unreachable!("every Lyndon word of length ≥ 2 has a Shirshov split")
}

/// All Lyndon words over `{1..n}` of length at most `max_len`, in lex order.
pub fn enumerate_lyndon(n: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if n == 0 || max_len == 0 {
        return out;
    }
    let top = n as u8;
    let mut w: Word = vec![1];
    loop {
        out.push(w.clone());
        // Duval successor: repeat w up to max_len, strip trailing maximal letters, bump last.
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(x) => *x += 1,
        }
    }
    out
}

/// Lyndon words of a fixed degree, in lex order.
pub fn lyndon_of_degree(d: &[u32]) -> Vec<Word> {
    let len: u32 = d.iter().sum();
    enumerate_lyndon(d.len(), len as usize)
        .into_iter()
        .filter(|w| w.len() == len as usize && degree(w, d.len()) == d)
        .collect()
}

/// Digit string for alphabets up to 9 letters, comma-joined integers otherwise.
pub fn format_word_n(u: &[u8], n: usize) -> String {
    if n <= 9 {
        u.iter().map(|a| char::from(b'0' + a)).collect()
    } else {
        u.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
    }
}

pub fn format_word(u: &[u8]) -> String {
    let n = u.iter().copied().max().unwrap_or(0) as usize;
    format_word_n(u, n)
}

pub fn parse_word(s: &str) -> Result<Word, WordError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(WordError::Empty);
    }
    let parts: Vec<&str> = if s.contains(',') {
        s.split(',').map(str::trim).collect()
    } else {
        s.split("").filter(|p| !p.is_empty()).collect()
    };
    parts
        .into_iter()
        .map(|p| match p.parse::<u8>() {
            Ok(a) if a >= 1 => Ok(a),
            _ => Err(WordError::Syntax(s.to_string())),
        })
        .collect()
}

/// The bracketed value of a word: `[u]` (standard) or `[u]⁻`.
///
/// Lyndon words recurse along the Shirshov split; other words bracket their
/// Lyndon factors left-nested.
pub fn bracketing(space: &std::sync::Arc<BraidedSpace>, u: &[u8], flavor: Flavor) -> FreeElement {
    assert!(!u.is_empty(), "bracketing of the empty word");
    let factors = lyndon_factorization(u);
    let mut iter = factors.iter();
    let first = iter.next().expect("nonempty");
    let mut acc = lyndon_bracketing(space, first, flavor);
    for l in iter {
        let next = lyndon_bracketing(space, l, flavor);
        acc = FreeElement::bracket(&acc, &next, flavor);
    }
    acc
}

fn lyndon_bracketing(space: &std::sync::Arc<BraidedSpace>, u: &[u8], flavor: Flavor) -> FreeElement {
    if u.len() == 1 {
        return FreeElement::letter(space, u[0]);
    }
    let (v, w) = shirshov_decomposition(u).expect("Lyndon input");
    let bv = lyndon_bracketing(space, &v, flavor);
    let bw = lyndon_bracketing(space, &w, flavor);
    match flavor {
        // [w][v] - p_wv [v][w]
        Flavor::Std => FreeElement::bracket(&bv, &bw, Flavor::Std),
        // [w]⁻[v]⁻ - [v]⁻[w]⁻
        Flavor::Minus => FreeElement::bracket(&bw, &bv, Flavor::Minus),
        Flavor::C => FreeElement::bracket(&bv, &bw, Flavor::C),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all_words(n: u8, len: usize) -> Vec<Word> {
        let mut out: Vec<Word> = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (1..=n).map(move |a| {
                        let mut x = w.clone();
                        x.push(a);
                        x
                    })
                })
                .collect();
        }
        out
    }

    fn rotation_lyndon(u: &[u8]) -> bool {
        (1..u.len()).all(|k| {
            let rot: Vec<u8> = u[k..].iter().chain(&u[..k]).copied().collect();
            u < rot.as_slice()
        })
    }

    #[test]
    fn lex_examples() {
        assert!(lex_less(&[1, 2], &[2, 1]));
        assert!(lex_less(&[1], &[1, 2]));
        assert!(lex_less(&[1, 1, 2], &[1, 2]));
    }

    #[test]
    fn lyndon_examples() {
        assert!(is_lyndon(&[1]));
        assert!(is_lyndon(&[1, 1, 2]));
        assert!(!is_lyndon(&[2, 1]));
        assert!(!is_lyndon(&[1, 1]));
    }

    #[test]
    fn factorization_examples() {
        assert_eq!(lyndon_factorization(&[2, 1, 1, 2]), vec![vec![2], vec![1, 1, 2]]);
        assert_eq!(lyndon_factorization(&[1, 1, 2]), vec![vec![1, 1, 2]]);
        assert_eq!(lyndon_factorization(&[2, 2, 1]), vec![vec![2], vec![2], vec![1]]);
    }

    #[test]
    fn shirshov_examples() {
        assert_eq!(shirshov_decomposition(&[1, 2]).unwrap(), (vec![1], vec![2]));
        assert_eq!(shirshov_decomposition(&[1, 1, 2]).unwrap(), (vec![1], vec![1, 2]));
        assert_eq!(shirshov_decomposition(&[1, 1, 2, 1, 2]).unwrap(), (vec![1, 1, 2], vec![1, 2]));
        assert_eq!(shirshov_decomposition(&[1]), Err(WordError::SingleLetter));
        assert!(shirshov_decomposition(&[2, 1]).is_err());
    }

    #[test]
    fn shirshov_matches_brute_force_shortest_split() {
        for len in 2..=8 {
            for w in all_words(3, len).into_iter().filter(|w| rotation_lyndon(w)) {
                let (v, u) = shirshov_decomposition(&w).unwrap();
                let brute = (1..w.len())
                    .find(|&k| rotation_lyndon(&w[..k]) && rotation_lyndon(&w[k..]))
                    .unwrap();
                assert_eq!(v.len(), brute);
                assert!(v.as_slice() < w.as_slice() && w.as_slice() < u.as_slice());
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_lyndon(2, 2), vec![vec![1], vec![1, 2], vec![2]]);
        let l3 = enumerate_lyndon(2, 3);
        assert_eq!(l3, vec![vec![1], vec![1, 1, 2], vec![1, 2], vec![1, 2, 2], vec![2]]);
        assert_eq!(enumerate_lyndon(2, 4).iter().filter(|w| w.len() == 4).count(), 3);
    }

    #[test]
    fn is_lyndon_matches_rotations() {
        for len in 1..=8 {
            for w in all_words(3, len) {
                assert_eq!(is_lyndon(&w), rotation_lyndon(&w), "{w:?}");
            }
        }
    }

    #[test]
    fn enumeration_matches_filter() {
        for n in 1..=3u8 {
            let mut brute: Vec<Word> = (1..=6).flat_map(|l| all_words(n, l)).filter(|w| is_lyndon(w)).collect();
            brute.sort();
            assert_eq!(enumerate_lyndon(n as usize, 6), brute);
        }
    }

    #[test]
    fn word_syntax() {
        assert_eq!(format_word_n(&[1, 1, 2], 2), "112");
        assert_eq!(format_word_n(&[1, 10], 10), "1,10");
        assert_eq!(parse_word("112").unwrap(), vec![1, 1, 2]);
        assert_eq!(parse_word("1,10").unwrap(), vec![1, 10]);
        assert!(parse_word("10x").is_err());
    }

    #[test]
    fn factorization_brute_force_small() {
        // the unique nonincreasing Lyndon factorization, found by exhaustive splitting
        fn brute(u: &[u8]) -> Vec<Vec<Word>> {
            if u.is_empty() {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for k in 1..=u.len() {
                if is_lyndon(&u[..k]) {
                    for mut rest in brute(&u[k..]) {
                        if rest.first().is_none_or(|f| f.as_slice() <= &u[..k]) {
                            rest.insert(0, u[..k].to_vec());
                            out.push(rest);
                        }
                    }
                }
            }
            out
        }
        for len in 1..=7 {
            for w in all_words(3, len) {
                let b = brute(&w);
                assert_eq!(b.len(), 1);
                assert_eq!(b[0], lyndon_factorization(&w));
            }
        }
    }

    proptest! {
        #[test]
        fn factorization_properties(w in proptest::collection::vec(1u8..=3, 1..12)) {
            let f = lyndon_factorization(&w);
            let cat: Word = f.concat();
            prop_assert_eq!(&cat, &w);
            for l in &f {
                prop_assert!(is_lyndon(l));
            }
            for p in f.windows(2) {
                prop_assert!(p[0] >= p[1]);
            }
        }
    }
}
