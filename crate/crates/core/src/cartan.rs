//! Finite Cartan type: root systems, quantum Serre presentations and the
//! arithmetic checks attached to them.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::braiding::{total_degree, BraidedSpace, Degree};
use crate::freealg::{Flavor, FreeElement};
use crate::liealg::{CheckResult, LieSpan};
use crate::nichols::{NicholsBasis, NicholsError, SuperLetters};
use crate::scalar::CycScalar;
use crate::words::{format_word_n, Word};

/// A connected finite type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub family: Family,
    pub rank: usize,
    /// Vertex indices of the component in the full matrix.
    pub vertices: Vec<usize>,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

/// Finite type of a (possibly disconnected) Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanType {
    pub components: Vec<Component>,
}

impl CartanType {
    pub fn is_simply_laced_or_g2(&self) -> bool {
        self.components
            .iter()
            .all(|c| matches!(c.family, Family::A | Family::D | Family::E | Family::G))
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

const ROOT_LIMIT: usize = 400;

/// Positive roots via simple reflections `s_i(β) = β - (Σ_j a_ij β_j) e_i`.
///
/// Returns `None` when the orbit grows past the size of any finite root system
/// of that rank, i.e. the matrix is not of finite type.
pub fn positive_roots(a: &[Vec<i32>]) -> Option<Vec<Vec<i64>>> {
    let n = a.len();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(b) = queue.pop_front() {
        for i in 0..n {
            let pair: i64 = (0..n).map(|j| a[i][j] as i64 * b[j]).sum();
            if pair == 0 {
                continue;
            }
            let mut r = b.clone();
            r[i] -= pair;
            if r.iter().any(|&x| x < 0) {
                continue;
            }
            if seen.insert(r.clone()) {
                if seen.len() > ROOT_LIMIT {
                    return None;
                }
                queue.push_back(r);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    roots.sort_by(|x, y| {
        let hx: i64 = x.iter().sum();
        let hy: i64 = y.iter().sum();
        hx.cmp(&hy).then_with(|| y.cmp(x))
    });
    Some(roots)
}

fn components_of(a: &[Vec<i32>]) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut stack = vec![s];
        let mut members = Vec::new();
        while let Some(v) = stack.pop() {
            members.push(v);
            for w in 0..n {
                if comp[w] == usize::MAX && (a[v][w] != 0 || a[w][v] != 0) {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// The finite type of `a`, or `None` when `a` is not a Cartan matrix of finite type.
pub fn classify(a: &[Vec<i32>]) -> Option<CartanType> {
    let n = a.len();
    for i in 0..n {
        if a[i].len() != n || a[i][i] != 2 {
            return None;
        }
        for j in 0..n {
            if i != j && (a[i][j] > 0 || (a[i][j] == 0) != (a[j][i] == 0)) {
                return None;
            }
        }
    }
    let mut components = Vec::new();
    for verts in components_of(a) {
        let sub: Vec<Vec<i32>> = verts.iter().map(|&i| verts.iter().map(|&j| a[i][j]).collect()).collect();
        let count = positive_roots(&sub)?.len();
        let r = verts.len();
        let has = |v: i32| sub.iter().flatten().any(|&x| x == v);
        let family = if has(-3) {
            (r == 2 && count == 6).then_some(Family::G)?
        } else if has(-2) {
            if r == 4 && count == 24 {
                Family::F
            } else if count == r * r {
                // the row carrying -2 belongs to a short simple root
                let row = (0..r).find(|&i| sub[i].contains(&-2)).expect("has -2");
                let degree = (0..r).filter(|&j| j != row && sub[row][j] != 0).count();
                if r == 2 || degree == 1 {
                    Family::B
                } else {
                    Family::C
                }
            } else {
                return None;
            }
        } else if count == r * (r + 1) / 2 {
            Family::A
        } else if r >= 4 && count == r * (r - 1) {
            Family::D
        } else if (r == 6 && count == 36) || (r == 7 && count == 63) || (r == 8 && count == 120) {
            Family::E
        } else {
            return None;
        };
        components.push(Component {
            family,
            rank: r,
            vertices: verts,
        });
    }
    Some(CartanType { components })
}

/// Integers `d_i > 0` with `d_i a_ij = d_j a_ji`, smallest per component.
pub fn symmetrizer(a: &[Vec<i32>]) -> Vec<i64> {
    let n = a.len();
    let mut d = vec![0i64; n];
    for verts in components_of(a) {
        // length ratios in a finite type are 1, 2 or 3, so 6 keeps every value integral
        d[verts[0]] = 6;
        let mut stack = vec![verts[0]];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i != j && a[i][j] != 0 && d[j] == 0 {
                    d[j] = d[i] * a[i][j] as i64 / a[j][i] as i64;
                    stack.push(j);
                }
            }
        }
        let g = verts.iter().fold(0i64, |g, &v| gcd(g, d[v]));
        for &v in &verts {
            d[v] /= g;
        }
    }
    d
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `(α, β) = Σ d_i a_ij α_i β_j`.
pub fn root_pairing(a: &[Vec<i32>], d: &[i64], x: &[i64], y: &[i64]) -> i64 {
    let n = a.len();
    let mut s = 0;
    for i in 0..n {
        for j in 0..n {
            s += d[i] * a[i][j] as i64 * x[i] * y[j];
        }
    }
    s
}

/// Cartan matrix, its finite type and positive roots, and `N = ord(q_11)`.
#[derive(Clone, Debug)]
pub struct CartanDatum {
    pub matrix: Vec<Vec<i32>>,
    /// `None`: not of finite type.
    pub cartan_type: Option<CartanType>,
    pub roots: Vec<Vec<i64>>,
    pub n_order: Option<u32>,
}

impl CartanDatum {
    /// `None` when the braiding is not of Cartan type at all.
    pub fn of(space: &BraidedSpace) -> Option<CartanDatum> {
        let matrix = space.cartan_exponents()?;
        let cartan_type = classify(&matrix);
        let roots = if cartan_type.is_some() {
            positive_roots(&matrix).unwrap_or_default()
        } else {
            Vec::new()
        };
        let n_order = space.q(0, 0).mult_order().ok().flatten();
        Some(CartanDatum {
            matrix,
            cartan_type,
            roots,
            n_order,
        })
    }

    pub fn type_label(&self) -> String {
        self.cartan_type.as_ref().map_or("not finite type".to_string(), |t| t.to_string())
    }

    fn root_degrees(&self) -> Vec<Degree> {
        self.roots.iter().map(|r| r.iter().map(|&x| x as u32).collect()).collect()
    }
}

fn word_label(space: &BraidedSpace, u: &[u8]) -> String {
    format_word_n(u, space.rank())
}

fn fmt_degree(d: &[u32]) -> String {
    format!("({})", d.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
}

/// Hypotheses shared by the presentation theorems: odd `ord(q_ii)`, `ord(q_ii)`
/// prime to 3 when `q_ij q_ji ∈ {q_ii³, q_jj³}`, and `ord(q_ij) < ∞`.
pub fn presentation_hypotheses(space: &BraidedSpace) -> Vec<CheckResult> {
    let n = space.rank();
    let ord = |x: &CycScalar| x.mult_order().ok().flatten();
    let mut odd = Ok(());
    let mut three = Ok(());
    let mut finite = Ok(());
    for i in 0..n {
        match ord(space.q(i, i)) {
            Some(o) if o % 2 == 1 && o > 1 => {}
            o => {
                odd = odd.and(Err(format!("ord(q_{}{}) = {:?}", i + 1, i + 1, o)));
            }
        }
        for j in 0..n {
            if ord(space.q(i, j)).is_none() {
                finite = finite.and(Err(format!("ord(q_{}{}) infinite", i + 1, j + 1)));
            }
            if i == j {
                continue;
            }
            let pp = space.q(i, j) * space.q(j, i);
            if (pp == space.q(i, i).pow(3) || pp == space.q(j, j).pow(3)) && ord(space.q(i, i)).is_some_and(|o| o % 3 == 0) {
                three = three.and(Err(format!("ord(q_{}{}) divisible by 3", i + 1, i + 1)));
            }
        }
    }
    [("odd orders above 1", odd), ("prime to 3", three), ("finite orders", finite)]
        .into_iter()
        .map(|(name, r)| match r {
            Ok(()) => CheckResult::pass(format!("hypothesis {name}"), "holds"),
            Err(e) => CheckResult::fail(format!("hypothesis {name}"), e.clone(), e),
        })
        .collect()
}

/// `p_αα` of every hard letter equals the label of a simple root of the same
/// length, and `ord(p_αα) = N` when all orders are odd.
pub fn root_labels_check(space: &BraidedSpace, datum: &CartanDatum, letters: &SuperLetters) -> CheckResult {
    let name = "root labels";
    let Some(ty) = &datum.cartan_type else {
        return CheckResult::skipped(name, "not of finite Cartan type");
    };
    let a = &datum.matrix;
    let d = symmetrizer(a);
    let odd = presentation_hypotheses(space).iter().take(2).all(CheckResult::passed);
    let mut count = 0;
    for r in &letters.records {
        let alpha: Vec<i64> = r.degree.iter().map(|&x| x as i64).collect();
        let norm = root_pairing(a, &d, &alpha, &alpha);
        let comp = ty
            .components
            .iter()
            .find(|c| c.vertices.iter().any(|&v| alpha[v] != 0))
            .expect("nonzero degree");
        let Some(&s) = comp.vertices.iter().find(|&&v| 2 * d[v] == norm) else {
            return CheckResult::fail(name, "degree of a hard letter is not a root", fmt_degree(&r.degree));
        };
        if &r.p_uu != space.q(s, s) {
            return CheckResult::fail(
                name,
                format!("p_αα = {} but the simple root of that length has label {}", r.p_uu, space.q(s, s)),
                word_label(space, &r.word),
            );
        }
        if odd && ty.components.len() == 1 && r.ord != datum.n_order {
            return CheckResult::fail(name, format!("ord(p_αα) = {:?} ≠ N", r.ord), word_label(space, &r.word));
        }
        count += 1;
    }
    let ords = if odd { ", ord(p_αα) = N" } else { "" };
    CheckResult::pass(name, format!("{count} letters match their length class{ords}"))
}

/// Every root within the cutoff carries exactly one hard letter, and no hard letter
/// has a non-root degree.
pub fn uniqueness_check(datum: &CartanDatum, letters: &SuperLetters, cutoff: u32) -> CheckResult {
    let name = "root vectors";
    if datum.cartan_type.is_none() {
        return CheckResult::skipped(name, "not of finite Cartan type");
    }
    let mut count: BTreeMap<Degree, usize> = BTreeMap::new();
    for r in &letters.records {
        *count.entry(r.degree.clone()).or_insert(0) += 1;
    }
    let roots: BTreeSet<Degree> = datum.root_degrees().into_iter().collect();
    for (d, c) in &count {
        if !roots.contains(d) {
            return CheckResult::fail(name, "hard letter of non-root degree", fmt_degree(d));
        }
        if *c != 1 {
            return CheckResult::fail(name, format!("{c} hard letters of one degree"), fmt_degree(d));
        }
    }
    let within: Vec<&Degree> = roots.iter().filter(|d| total_degree(d) <= cutoff).collect();
    if let Some(d) = within.iter().find(|d| !count.contains_key(**d)) {
        return CheckResult::fail(name, "root without a hard letter", fmt_degree(d));
    }
    CheckResult::pass(
        name,
        format!("{} of {} roots within cutoff, one letter each", within.len(), roots.len()),
    )
}

/// Quantum Serre relations and root-vector powers.
#[derive(Clone, Debug)]
pub struct Presentation {
    /// `(i, j, ad_c x_i^{1-a_ij} x_j)`, zero-based indices.
    pub serre: Vec<(usize, usize, FreeElement)>,
    /// `(x_α word, α, N)` for the relation `x_α^N`.
    pub powers: Vec<(Word, Degree, u32)>,
    pub hypotheses: Vec<CheckResult>,
    pub type_label: String,
}

pub fn presentation(space: &Arc<BraidedSpace>, datum: &CartanDatum, letters: &SuperLetters) -> Presentation {
    let n = space.rank();
    let mut serre = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let xi = FreeElement::letter(space, i as u8 + 1);
            let mut x = FreeElement::letter(space, j as u8 + 1);
            for _ in 0..(1 - datum.matrix[i][j]) {
                x = FreeElement::bracket(&xi, &x, Flavor::C);
            }
            serre.push((i, j, x));
        }
    }
    let n_ord = datum.n_order.unwrap_or(0);
    let mut powers = Vec::new();
    for alpha in datum.root_degrees() {
        if let Some(r) = letters.records.iter().find(|r| r.degree == alpha) {
            powers.push((r.word.clone(), alpha, n_ord));
        }
    }
    Presentation {
        serre,
        powers,
        hypotheses: presentation_hypotheses(space),
        type_label: datum.type_label(),
    }
}

impl Presentation {
    /// Reduce every relation in `B(V)`.
    pub fn verify(&self, basis: &NicholsBasis, letters: &SuperLetters) -> Result<Vec<CheckResult>, NicholsError> {
        let space = basis.space();
        let mut out = Vec::new();
        if let Some(h) = self.hypotheses.iter().find(|h| !h.passed()) {
            out.push(CheckResult::skipped("presentation", format!("{}: {}", h.name, h.detail)));
            return Ok(out);
        }
        for (i, j, rel) in &self.serre {
            let name = format!("serre {},{}", i + 1, j + 1);
            let len = rel.max_len() as u32;
            if !basis.covers(len) {
                out.push(CheckResult::skipped(name, "beyond cutoff"));
                continue;
            }
            if basis.nf(rel)?.is_zero() {
                out.push(CheckResult::pass(name, "reduces to 0"));
            } else {
                out.push(CheckResult::fail(name, "nonzero in B(V)", format!("{}{}", i + 1, j + 1)));
            }
        }
        for (w, alpha, n) in &self.powers {
            let name = format!("power {}^{n}", word_label(space, w));
            if *n == 0 {
                out.push(CheckResult::skipped(name, "N infinite"));
                continue;
            }
            if !basis.covers(total_degree(alpha) * n) {
                out.push(CheckResult::skipped(name, "unverified: beyond cutoff"));
                continue;
            }
            let r = letters.get(w).expect("listed letter");
            if basis.pow(&r.value, *n)?.is_zero() {
                out.push(CheckResult::pass(name, "reduces to 0"));
            } else {
                out.push(CheckResult::fail(name, "nonzero in B(V)", word_label(space, w)));
            }
        }
        Ok(out)
    }

    /// Text listing of the relations.
    pub fn export_text(&self, space: &BraidedSpace) -> String {
        let n = space.rank();
        let mut s = String::new();
        s.push_str(&format!("type {}\n", self.type_label));
        for h in &self.hypotheses {
            s.push_str(&format!("{} {}\n", h.name, h.status));
        }
        for (i, j, rel) in &self.serre {
            s.push_str(&format!("serre {} {}: {}\n", i + 1, j + 1, rel.format()));
        }
        for (w, alpha, nn) in &self.powers {
            s.push_str(&format!("power [{}]^{} degree {}\n", format_word_n(w, n), nn, fmt_degree(alpha)));
        }
        s
    }
}

/// Additive triples `α + β = γ` in `Δ⁺` with `p_αβ p_βα = 1`, with `α < β`.
pub fn orthogonal_pairs(space: &BraidedSpace, letters: &SuperLetters) -> Vec<(Degree, Degree, Degree)> {
    let roots = letters.positive_roots();
    let set: BTreeSet<&Degree> = roots.iter().collect();
    let mut out = Vec::new();
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            let g: Degree = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if set.contains(&g) && (space.bicharacter(a, b) * space.bicharacter(b, a)).is_one() {
                out.push((a.clone(), b.clone(), g));
            }
        }
    }
    out
}

/// Vertices of a path-shaped component, starting at the given end.
fn walk_path(a: &[Vec<i32>], verts: &[usize], start: usize) -> Vec<usize> {
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = verts.iter().copied().find(|&v| v != cur && v != prev && a[cur][v] != 0);
        match next {
            Some(v) => {
                prev = cur;
                cur = v;
                order.push(v);
            }
            None => return order,
        }
    }
}

/// Simple roots of a B/C/F₄ component in doubled orthonormal coordinates, keyed by vertex.
fn epsilon_embedding(a: &[Vec<i32>], comp: &Component) -> Option<BTreeMap<usize, Vec<i64>>> {
    let verts = &comp.vertices;
    let r = comp.rank;
    let d = symmetrizer(a);
    let leaves: Vec<usize> = verts
        .iter()
        .copied()
        .filter(|&v| verts.iter().filter(|&&w| w != v && a[v][w] != 0).count() <= 1)
        .collect();
    let dmax = verts.iter().map(|&v| d[v]).max()?;
    let eps = |i: usize| -> Vec<i64> {
        let mut e = vec![0i64; r];
        e[i] = 2;
        e
    };
    let diff = |x: Vec<i64>, y: Vec<i64>| -> Vec<i64> { x.iter().zip(&y).map(|(p, q)| p - q).collect() };
    let mut out = BTreeMap::new();
    match comp.family {
        Family::B | Family::C => {
            // B: the last simple root is short; C: it is long
            let want_long_last = comp.family == Family::C;
            let last = *leaves.iter().find(|&&v| (d[v] == dmax) == want_long_last)?;
            let first = *leaves.iter().find(|&&v| v != last)?;
            let path = walk_path(a, verts, first);
            for (k, &v) in path.iter().enumerate() {
                let root = if k + 1 < r {
                    diff(eps(k), eps(k + 1))
                } else if comp.family == Family::B {
                    eps(k)
                } else {
                    eps(k).iter().map(|x| x * 2).collect()
                };
                out.insert(v, root);
            }
        }
        Family::F => {
            let first = *leaves.iter().find(|&&v| d[v] == dmax)?;
            let path = walk_path(a, verts, first);
            let roots = [diff(eps(1), eps(2)), diff(eps(2), eps(3)), eps(3), vec![1, -1, -1, -1]];
            for (&v, root) in path.iter().zip(roots) {
                out.insert(v, root);
            }
        }
        _ => return None,
    }
    Some(out)
}

fn in_x_set(family: Family, a: &[i64], b: &[i64], root_set: &BTreeSet<Vec<i64>>) -> bool {
    let support = |x: &[i64]| x.iter().filter(|&&c| c != 0).count();
    let unit = |x: &[i64]| support(x) == 1 && x.contains(&2);
    match family {
        Family::B => unit(a) && unit(b) && a != b,
        Family::C => {
            let check = |x: &[i64], y: &[i64]| {
                // x = ε_i − ε_j, y = ε_i + ε_j with i < j
                let (Some(i), Some(j)) = (x.iter().position(|&c| c == 2), x.iter().position(|&c| c == -2)) else {
                    return false;
                };
                support(x) == 2 && i < j && support(y) == 2 && y[i] == 2 && y[j] == 2
            };
            check(a, b) || check(b, a)
        }
        Family::F => {
            if unit(a) && unit(b) && a != b {
                return true;
            }
            let half = |x: &[i64]| x.iter().all(|&c| c.abs() == 1) && x[0] == 1;
            let sum: Vec<i64> = a.iter().zip(b).map(|(p, q)| p + q).collect();
            half(a) && half(b) && root_set.contains(&sum)
        }
        _ => false,
    }
}

/// The orthogonal triples against the expectation: none on A/D/E/G₂, the X-sets on B/C/F₄ of rank ≤ 4.
pub fn orthogonal_check(space: &BraidedSpace, datum: &CartanDatum, letters: &SuperLetters) -> CheckResult {
    let name = "orthogonal pairs";
    let found = orthogonal_pairs(space, letters);
    let Some(ty) = &datum.cartan_type else {
        return CheckResult::pass(name, format!("{} triples (no Cartan expectation)", found.len()));
    };
    if ty.components.len() != 1 {
        return CheckResult::skipped(name, "disconnected Cartan type");
    }
    let comp = &ty.components[0];
    if ty.is_simply_laced_or_g2() {
        return match found.first() {
            None => CheckResult::pass(name, format!("none on {ty}")),
            Some((a, b, _)) => CheckResult::fail(
                name,
                format!("orthogonal pair on {ty}"),
                format!("{} {}", fmt_degree(a), fmt_degree(b)),
            ),
        };
    }
    if comp.rank > 4 {
        return CheckResult::skipped(name, "X-set comparison only for rank ≤ 4");
    }
    let Some(emb) = epsilon_embedding(&datum.matrix, comp) else {
        return CheckResult::skipped(name, "no orthonormal embedding");
    };
    let to_eps = |d: &[i64]| -> Vec<i64> {
        let mut out = vec![0i64; comp.rank];
        for (&v, root) in &emb {
            for (o, x) in out.iter_mut().zip(root) {
                *o += d[v] * x;
            }
        }
        out
    };
    let all_roots = &datum.roots;
    let eps_roots: BTreeSet<Vec<i64>> = all_roots.iter().map(|r| to_eps(r)).collect();
    let mut expected = BTreeSet::new();
    let root_set: BTreeSet<&Vec<i64>> = all_roots.iter().collect();
    for (i, a) in all_roots.iter().enumerate() {
        for b in &all_roots[i + 1..] {
            let g: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if root_set.contains(&g) && in_x_set(comp.family, &to_eps(a), &to_eps(b), &eps_roots) {
                let (x, y) = if a < b { (a, b) } else { (b, a) };
                expected.insert((x.clone(), y.clone()));
            }
        }
    }
    let got: BTreeSet<(Vec<i64>, Vec<i64>)> = found
        .iter()
        .map(|(a, b, _)| (a.iter().map(|&x| x as i64).collect(), b.iter().map(|&x| x as i64).collect()))
        .collect();
    if got == expected {
        CheckResult::pass(name, format!("{} triples match the X-set of {ty}", got.len()))
    } else {
        let diff: Vec<_> = got.symmetric_difference(&expected).take(1).collect();
        CheckResult::fail(
            name,
            format!("found {} triples, X-set has {}", got.len(), expected.len()),
            format!("{diff:?}"),
        )
    }
}

/// The exceptional label pairs under which `p_vw p_wv = 1` is allowed.
pub fn orthogonal_exception(p_vv: &CycScalar, p_ww: &CycScalar) -> bool {
    let order = p_vv.order().max(p_ww.order());
    let minus = |x: &CycScalar| -x;
    let prim = |x: &CycScalar, m: u32| x.mult_order().ok().flatten() == Some(m);
    let pm1 = |x: &CycScalar| x.is_one() || minus(x).is_one();
    let _ = order;
    (p_ww == p_vv && !pm1(p_vv))
        || (p_ww == &minus(&p_vv.pow(-1)) && !pm1(p_vv))
        || (p_vv == &minus(&p_ww.pow(2)) && prim(p_ww, 18))
        || (p_vv == &minus(&p_ww.pow(-4)) && (prim(p_ww, 18) || prim(p_ww, 10)))
        || (p_ww == &minus(&p_vv.pow(2)) && prim(p_vv, 18))
        || (p_ww == &minus(&p_vv.pow(-4)) && (prim(p_vv, 18) || prim(p_vv, 10)))
}

/// Triples `u, v, w ∈ D` with `deg u = deg v + deg w` and `p_vw p_wv = 1` outside the exceptional cases.
pub fn orthogonal_exception_scan(basis: &NicholsBasis, letters: &SuperLetters) -> CheckResult {
    let name = "orthogonal exceptions";
    let space = basis.space();
    if !basis.is_finite() {
        return CheckResult::skipped(name, "root system not known to be finite");
    }
    if space.connected_components().len() != 1 {
        return CheckResult::skipped(name, "not connected");
    }
    let recs = &letters.records;
    let mut triples = 0;
    for u in recs {
        for (i, v) in recs.iter().enumerate() {
            for w in &recs[i + 1..] {
                let sum: Degree = v.degree.iter().zip(&w.degree).map(|(a, b)| a + b).collect();
                if sum != u.degree {
                    continue;
                }
                triples += 1;
                let pp = space.bicharacter(&v.degree, &w.degree) * space.bicharacter(&w.degree, &v.degree);
                if pp.is_one() && !orthogonal_exception(&v.p_uu, &w.p_uu) && !orthogonal_exception(&w.p_uu, &v.p_uu) {
                    return CheckResult::fail(
                        name,
                        "p_vw p_wv = 1 outside the exceptional cases",
                        format!(
                            "{} = {} + {}",
                            word_label(space, &u.word),
                            word_label(space, &v.word),
                            word_label(space, &w.word)
                        ),
                    );
                }
            }
        }
    }
    CheckResult::pass(name, format!("{triples} additive triples"))
}

/// `(N−1)^{|Φ⁺|} + (⌊N/2⌋ − 1)·|Φ⁺|(|Φ⁺|−1)/2`.
pub fn cartan_bound_value(n: u32, roots: usize) -> i64 {
    let r = roots as i64;
    (n as i64 - 1).pow(roots as u32) + (n as i64 / 2 - 1) * r * (r - 1) / 2
}

#[derive(Clone, Debug, Serialize)]
pub struct CartanBound {
    pub bound: i64,
    pub dim_l: usize,
    pub dim_exact: bool,
    pub part_i: bool,
}

/// Lower bound for `dim L(V)` on A/D/E/G₂ inputs, with the nondegeneracy of part (i).
pub fn cartan_bound(
    space: &BraidedSpace,
    datum: &CartanDatum,
    letters: &SuperLetters,
    span: &LieSpan,
) -> (Option<CartanBound>, CheckResult) {
    let name = "cartan bound";
    let Some(ty) = &datum.cartan_type else {
        return (None, CheckResult::skipped(name, "not of finite Cartan type"));
    };
    if ty.components.len() != 1 || !ty.is_simply_laced_or_g2() {
        return (None, CheckResult::skipped(name, format!("type {ty} is not connected A/D/E/G2")));
    }
    if let Some(h) = presentation_hypotheses(space).into_iter().find(|h| !h.passed()) {
        return (None, CheckResult::skipped(name, format!("{}: {}", h.name, h.detail)));
    }
    if !letters.all_heights_finite() {
        return (None, CheckResult::skipped(name, "heights not all known"));
    }
    let Some(n) = datum.n_order else {
        return (None, CheckResult::skipped(name, "N infinite"));
    };
    let top = 2 * (n as i64 / 2 - 1) - 2;
    let mut part_i = true;
    let mut witness = None;
    for u in &letters.records {
        for v in &letters.records {
            if u.word == v.word {
                continue;
            }
            let uv: Degree = u.degree.iter().zip(&v.degree).map(|(a, b)| a + b).collect();
            let base = space.bicharacter(&u.degree, &uv) * space.bicharacter(&uv, &u.degree);
            for i in 1..=top {
                if (u.p_uu.pow(i) * &base).is_one() {
                    part_i = false;
                    witness.get_or_insert_with(|| format!("{} {} i={i}", word_label(space, &u.word), word_label(space, &v.word)));
                }
            }
        }
    }
    let bound = cartan_bound_value(n, datum.roots.len());
    let report = CartanBound {
        bound,
        dim_l: span.dim(),
        dim_exact: span.stabilized,
        part_i,
    };
    let detail = format!("dim L {} ≥ {bound}", span.dim_label());
    let check = if !part_i {
        CheckResult::fail(name, "p_uu^i p_{u,uv} p_{uv,u} = 1", witness.unwrap_or_default())
    } else if span.dim() as i64 >= bound {
        CheckResult::pass(name, detail)
    } else if !span.stabilized {
        CheckResult::inconclusive(name, format!("{detail} (closure truncated)"))
    } else {
        CheckResult::fail(name, detail, format!("N={n}"))
    };
    (Some(report), check)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_n(n: usize) -> Vec<Vec<i32>> {
        let mut a = vec![vec![0; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            if i + 1 < n {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        }
        a
    }

    #[test]
    fn root_counts() {
        assert_eq!(positive_roots(&a_n(2)).unwrap().len(), 3);
        assert_eq!(positive_roots(&a_n(4)).unwrap().len(), 10);
        let g2 = vec![vec![2, -3], vec![-1, 2]];
        let roots: BTreeSet<Vec<i64>> = positive_roots(&g2).unwrap().into_iter().collect();
        let expect: BTreeSet<Vec<i64>> = [[1, 0], [1, 1], [2, 1], [3, 1], [3, 2], [0, 1]]
            .iter()
            .map(|r| r.to_vec())
            .collect();
        assert_eq!(roots, expect);
        // affine A1 is infinite
        assert!(positive_roots(&[vec![2, -2], vec![-2, 2]]).is_none());
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&a_n(3)).unwrap().to_string(), "A3");
        assert_eq!(classify(&[vec![2, -3], vec![-1, 2]]).unwrap().to_string(), "G2");
        assert_eq!(classify(&[vec![2, -2], vec![-1, 2]]).unwrap().to_string(), "B2");
        let mut b3 = a_n(3);
        b3[2][1] = -2;
        assert_eq!(classify(&b3).unwrap().to_string(), "B3");
        let mut c3 = a_n(3);
        c3[1][2] = -2;
        assert_eq!(classify(&c3).unwrap().to_string(), "C3");
        let mut d4 = a_n(4);
        d4[2][3] = 0;
        d4[3][2] = 0;
        d4[1][3] = -1;
        d4[3][1] = -1;
        assert_eq!(classify(&d4).unwrap().to_string(), "D4");
        let diag = vec![vec![2, 0], vec![0, 2]];
        assert_eq!(classify(&diag).unwrap().to_string(), "A1+A1");
        assert!(classify(&[vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]).is_none());
    }

    #[test]
    fn cartan_bound_hand_values() {
        assert_eq!(cartan_bound_value(5, 3), 67);
        assert_eq!(cartan_bound_value(3, 3), 8);
        assert_eq!(cartan_bound_value(7, 1), 6);
        assert_eq!(cartan_bound_value(5, 6), 4096 + 15);
    }

    #[test]
    fn symmetrizers() {
        assert_eq!(symmetrizer(&a_n(3)), vec![1, 1, 1]);
        assert_eq!(symmetrizer(&[vec![2, -2], vec![-1, 2]]), vec![1, 2]);
        assert_eq!(symmetrizer(&[vec![2, -3], vec![-1, 2]]), vec![1, 3]);
    }

    #[test]
    fn b2_x_set() {
        // B2 with short vertex 1: X = {(ε1, ε2)} = {(e1 + e2, e1)}
        let a = vec![vec![2, -2], vec![-1, 2]];
        let ty = classify(&a).unwrap();
        let emb = epsilon_embedding(&a, &ty.components[0]).unwrap();
        assert_eq!(emb[&1], vec![2, -2]);
        assert_eq!(emb[&0], vec![0, 2]);
    }
}
