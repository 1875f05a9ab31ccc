//! Braided Lie algebras generated by `V` inside `B(V)`, and executable checks of
//! the dimension bounds and bracket identities attached to them.
//!
//! A closure is exact degree by degree through the cutoff: an element of degree
//! `d` can only come from brackets of elements in degrees below `d`. Truncation
//! therefore only hides degrees past the cutoff, and dimensions of unstabilized
//! closures are reported as lower bounds.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::braiding::{total_degree, BraidedSpace, Degree};
use crate::freealg::{Flavor, FreeElement};
use crate::linalg::{determinant, is_zero_vector, Echelon, Vector};
use crate::nichols::{add_degrees, BElement, Height, InfiniteKind, NicholsBasis, NicholsError, SuperLetterRecord, SuperLetters};
use crate::scalar::{q_factorial, CycScalar};
use crate::words::{format_word_n, shirshov_decomposition, Word};

/// How a closure basis vector was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    Letter(u8),
    /// Bracket of two earlier basis vectors, by index.
    Bracket(usize, usize),
}

#[derive(Clone, Debug)]
pub struct LieVector {
    pub degree: Degree,
    pub vector: Vector,
    pub origin: Origin,
}

/// The closure of `V` under one bracket, inside a computed `B(V)`.
#[derive(Clone, Debug)]
pub struct LieSpan {
    pub flavor: Flavor,
    pub cutoff: u32,
    /// Independent vectors in generation order.
    pub elements: Vec<LieVector>,
    /// `true` when every bracket of basis vectors was computed (none fell past the cutoff).
    pub stabilized: bool,
    spans: BTreeMap<Degree, Echelon>,
}

fn bracket_hom(
    basis: &NicholsBasis,
    dx: &[u32],
    x: &[CycScalar],
    dy: &[u32],
    y: &[CycScalar],
    flavor: Flavor,
) -> Result<Option<Vector>, NicholsError> {
    let space = basis.space();
    let Some((_, xy)) = basis.mul_hom(dx, x, dy, y)? else {
        return Ok(None);
    };
    let (_, yx) = basis.mul_hom(dy, y, dx, x)?.expect("same target block");
    let (a, b, c) = match flavor {
        // yx - p_yx xy
        Flavor::Std => (yx, xy, space.bicharacter(dy, dx)),
        Flavor::Minus => (xy, yx, CycScalar::one(space.order())),
        Flavor::C => (xy, yx, space.bicharacter(dx, dy)),
    };
    Ok(Some(a.iter().zip(&b).map(|(p, q)| p - &(&c * q)).collect()))
}

impl LieSpan {
    /// Semi-naive closure: every new vector is bracketed (both orders) with all
    /// vectors found so far.
    pub fn closure(basis: &NicholsBasis, flavor: Flavor) -> Result<LieSpan, NicholsError> {
        let space = basis.space();
        let order = space.order();
        let n = space.rank();
        let mut span = LieSpan {
            flavor,
            cutoff: basis.cutoff(),
            elements: Vec::new(),
            stabilized: true,
            spans: BTreeMap::new(),
        };
        for a in 1..=n as u8 {
            let d = space.unit_vector(a as usize - 1);
            let v = basis.nf_word(&[a])?.comps[&d].clone();
            span.push(basis, d, v, Origin::Letter(a), order);
        }
        let mut i = 0;
        while i < span.elements.len() {
            for j in 0..=i {
                let pairs: &[(usize, usize)] = if i == j { &[(i, i)] } else { &[(i, j), (j, i)] };
                for &(a, b) in pairs {
                    let target = add_degrees(&span.elements[a].degree, &span.elements[b].degree);
                    if !basis.covers(total_degree(&target)) {
                        span.stabilized = false;
                        continue;
                    }
                    let dim = basis.block_dim(&target);
                    if dim == 0 || span.spans.get(&target).map_or(0, Echelon::rank) == dim {
                        continue;
                    }
                    let (ea, eb) = (&span.elements[a], &span.elements[b]);
                    if let Some(v) = bracket_hom(basis, &ea.degree, &ea.vector, &eb.degree, &eb.vector, flavor)? {
                        span.push(basis, target, v, Origin::Bracket(a, b), order);
                    }
                }
            }
            i += 1;
        }
        Ok(span)
    }

    fn push(&mut self, basis: &NicholsBasis, d: Degree, v: Vector, origin: Origin, order: u32) -> bool {
        if is_zero_vector(&v) {
            return false;
        }
        let e = self
            .spans
            .entry(d.clone())
            .or_insert_with(|| Echelon::new(order, basis.block_dim(&d)));
        if e.insert(&v) {
            self.elements.push(LieVector {
                degree: d,
                vector: v,
                origin,
            });
            true
        } else {
            false
        }
    }

    /// Dimension found (exact when stabilized, a lower bound otherwise).
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn dims(&self) -> BTreeMap<Degree, usize> {
        self.spans.iter().map(|(d, e)| (d.clone(), e.rank())).collect()
    }

    /// Dimensions per total degree, indices `0..=cutoff`.
    pub fn hilbert(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.cutoff as usize + 1];
        for (d, e) in &self.spans {
            let t = total_degree(d) as usize;
            if t >= h.len() {
                h.resize(t + 1, 0);
            }
            h[t] += e.rank();
        }
        h
    }

    pub fn dim_at(&self, d: &[u32]) -> usize {
        self.spans.get(d).map_or(0, Echelon::rank)
    }

    pub fn contains_hom(&self, d: &[u32], v: &[CycScalar]) -> bool {
        if is_zero_vector(v) {
            return true;
        }
        self.spans.get(d).is_some_and(|e| e.contains(v))
    }

    /// Membership, component by component (the closure is graded).
    pub fn contains(&self, x: &BElement) -> bool {
        x.comps.iter().all(|(d, v)| self.contains_hom(d, v))
    }

    /// `"35"` when stabilized, `"≥ 12 at cutoff 10"` otherwise.
    pub fn dim_label(&self) -> String {
        if self.stabilized {
            self.dim().to_string()
        } else {
            format!("≥ {} at cutoff {}", self.dim(), self.cutoff)
        }
    }
}

/// The minus-bracketed super-letter `[u]⁻` evaluated in `B(V)`.
pub fn minus_letter(basis: &NicholsBasis, u: &[u8]) -> Result<BElement, NicholsError> {
    if u.len() == 1 {
        return basis.nf_word(u);
    }
    let (v, w) = shirshov_decomposition(u).expect("Lyndon word");
    let bv = minus_letter(basis, &v)?;
    let bw = minus_letter(basis, &w)?;
    basis.bracket(&bw, &bv, Flavor::Minus)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub detail: String,
    /// Word or degree reproducing a failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> CheckResult {
        CheckResult {
            name: name.into(),
            status,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> CheckResult {
        CheckResult::new(name, Status::Pass, detail)
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>, witness: impl Into<String>) -> CheckResult {
        let mut r = CheckResult::new(name, Status::Fail, detail);
        r.witness = Some(witness.into());
        r
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> CheckResult {
        CheckResult::new(name, Status::Skipped, reason)
    }

    pub fn inconclusive(name: impl Into<String>, reason: impl Into<String>) -> CheckResult {
        CheckResult::new(name, Status::Inconclusive, reason)
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> CheckResult {
        self.witness = Some(w.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn fmt_degree(d: &[u32]) -> String {
    format!("({})", d.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
}

fn word_label(basis: &NicholsBasis, u: &[u8]) -> String {
    format_word_n(u, basis.space().rank())
}

/// `[u]^t ∈ L(V)` for `1 ≤ t ≤ ord(p_uu)`, as far as the cutoff allows.
pub fn check_powers_in_l(basis: &NicholsBasis, span: &LieSpan, record: &SuperLetterRecord) -> Result<CheckResult, NicholsError> {
    let name = format!("powers-in-L {}", word_label(basis, &record.word));
    let len = total_degree(&record.degree);
    let top = record.ord.unwrap_or(u32::MAX);
    let mut t = 1;
    let mut x = record.value.clone();
    while t <= top && basis.covers(len * t) && len * t <= span.cutoff {
        if !span.contains(&x) {
            return Ok(CheckResult::fail(
                name,
                format!("[u]^{t} is not in the closure"),
                format!("{}^{t}", word_label(basis, &record.word)),
            ));
        }
        t += 1;
        if t <= top && basis.covers(len * t) && len * t <= span.cutoff {
            x = basis.mul(&x, &record.value)?;
        }
    }
    let checked = t - 1;
    let ord = record.ord.map_or("∞".to_string(), |o| o.to_string());
    if checked < top && record.ord.is_some() {
        Ok(CheckResult::pass(name, format!("t ≤ {checked} of ord {ord} (cutoff)")))
    } else {
        Ok(CheckResult::pass(name, format!("t ≤ {checked}, ord {ord}")))
    }
}

/// A chain of inequalities `lhs ≥ b_1 ≥ b_2 ≥ …`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: usize,
    /// `false` when `lhs` is a lower bound from an unstabilized closure.
    pub lhs_exact: bool,
    pub bounds: Vec<(String, i64)>,
    pub holds: bool,
}

impl BoundReport {
    fn new(name: &str, span: &LieSpan, bounds: Vec<(String, i64)>) -> BoundReport {
        let lhs = span.dim();
        let mut prev = lhs as i64;
        let mut holds = true;
        for (_, b) in &bounds {
            holds &= prev >= *b;
            prev = *b;
        }
        BoundReport {
            name: name.to_string(),
            lhs,
            lhs_exact: span.stabilized,
            bounds,
            holds,
        }
    }

    pub fn to_check(&self) -> CheckResult {
        let chain: Vec<String> = std::iter::once(if self.lhs_exact {
            self.lhs.to_string()
        } else {
            format!("≥{}", self.lhs)
        })
        .chain(self.bounds.iter().map(|(l, v)| format!("{v} ({l})")))
        .collect();
        let detail = chain.join(" ≥ ");
        if self.holds {
            CheckResult::pass(&self.name, detail)
        } else if !self.lhs_exact && self.bounds.first().is_some_and(|(_, b)| (self.lhs as i64) < *b) {
            // the closure is only a lower bound: the comparison may still hold past the cutoff
            let later_chain_ok = self.bounds.windows(2).all(|w| w[0].1 >= w[1].1);
            if later_chain_ok {
                CheckResult::inconclusive(&self.name, format!("{detail} (closure truncated)"))
            } else {
                CheckResult::fail(&self.name, detail, "bound chain")
            }
        } else {
            CheckResult::fail(&self.name, detail, "bound chain")
        }
    }
}

/// `deg(D⁻)`: degrees of the `[u]⁻`, with the zero element marked by the zero degree.
pub fn minus_degrees(basis: &NicholsBasis, letters: &SuperLetters) -> Result<BTreeSet<Degree>, NicholsError> {
    let n = basis.space().rank();
    let mut out = BTreeSet::new();
    for r in &letters.records {
        let m = minus_letter(basis, &r.word)?;
        if m.is_zero() {
            out.insert(vec![0; n]);
        } else {
            out.insert(r.degree.clone());
        }
    }
    Ok(out)
}

/// `dim L⁻(V) ≥ |deg D⁻| − 1 ≥ n + E_e − 1`.
pub fn bound_lminus(basis: &NicholsBasis, letters: &SuperLetters, span_minus: &LieSpan) -> Result<BoundReport, NicholsError> {
    let degs = minus_degrees(basis, letters)?;
    let space = basis.space();
    let ee = space.dynkin().edge_count() as i64;
    let n = space.rank() as i64;
    Ok(BoundReport::new(
        "bound L⁻",
        span_minus,
        vec![("|deg D⁻|-1".into(), degs.len() as i64 - 1), ("n+E_e-1".into(), n + ee - 1)],
    ))
}

/// `dim L(V) ≥ Σ (h_u − 1) + E_e'`; `None` when some height is not finite.
pub fn bound_l(basis: &NicholsBasis, letters: &SuperLetters, span: &LieSpan) -> Option<BoundReport> {
    let mut sum = 0i64;
    for r in &letters.records {
        sum += r.height.finite()? as i64 - 1;
    }
    let ee = letters.e_e_prime(basis.space()) as i64;
    Some(BoundReport::new("bound L", span, vec![("Σ(h-1)+E_e'".into(), sum + ee)]))
}

/// Why `B(V)` and `L(V)` are known to be infinite-dimensional, if they are.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InfiniteCertificate {
    /// A hard letter with infinite height.
    Height { word: String, certificate: InfiniteKind },
    /// A pair `[u], [v] ∈ D` with `p_uu = 1` and `p_uv p_vu ≠ 1`.
    GrowthPair { u: String, v: String },
    /// A hard letter braiding trivially with every other hard letter of a connected
    /// space, found among the letters within the cutoff.
    OrthogonalAtCutoff { word: String, cutoff: u32 },
}

pub fn b_infinite_certificate(basis: &NicholsBasis, letters: &SuperLetters) -> Option<InfiniteCertificate> {
    letters.records.iter().find_map(|r| match r.height {
        Height::Infinite { certificate } => Some(InfiniteCertificate::Height {
            word: word_label(basis, &r.word),
            certificate,
        }),
        _ => None,
    })
}

/// A pair in `D` with `p_uu = 1` and `p_uv p_vu ≠ 1`, of least total degree.
pub fn growth_pair<'a>(space: &BraidedSpace, letters: &'a SuperLetters) -> Option<(&'a SuperLetterRecord, &'a SuperLetterRecord)> {
    let mut best: Option<(u32, (&SuperLetterRecord, &SuperLetterRecord))> = None;
    for u in &letters.records {
        if !u.p_uu.is_one() {
            continue;
        }
        for v in &letters.records {
            if u.word == v.word {
                continue;
            }
            let pp = space.bicharacter(&u.degree, &v.degree) * space.bicharacter(&v.degree, &u.degree);
            let size = total_degree(&u.degree) + total_degree(&v.degree);
            if !pp.is_one() && best.is_none_or(|(s, _)| size < s) {
                best = Some((size, (u, v)));
            }
        }
    }
    best.map(|(_, p)| p)
}

/// Hard letters `u` with `p_uv p_vu = 1` for every other hard `v`.
pub fn orthogonal_letters<'a>(space: &BraidedSpace, letters: &'a SuperLetters) -> Vec<&'a SuperLetterRecord> {
    letters
        .records
        .iter()
        .filter(|u| {
            letters
                .records
                .iter()
                .all(|v| v.word == u.word || (space.bicharacter(&u.degree, &v.degree) * space.bicharacter(&v.degree, &u.degree)).is_one())
        })
        .collect()
}

/// Certificate that `L(V)` is infinite-dimensional.
pub fn l_infinite_certificate(basis: &NicholsBasis, letters: &SuperLetters) -> Option<InfiniteCertificate> {
    let space = basis.space();
    if let Some((u, v)) = growth_pair(space, letters) {
        return Some(InfiniteCertificate::GrowthPair {
            u: word_label(basis, &u.word),
            v: word_label(basis, &v.word),
        });
    }
    // p_uu not a root of unity: all powers lie in L(V) and are nonzero
    if let Some(r) = letters.records.iter().find(|r| r.ord.is_none()) {
        return Some(InfiniteCertificate::Height {
            word: word_label(basis, &r.word),
            certificate: InfiniteKind::OrderInfinite,
        });
    }
    if space.rank() > 1 && space.connected_components().len() == 1 && !basis.is_finite() {
        if let Some(u) = orthogonal_letters(space, letters).first() {
            return Some(InfiniteCertificate::OrthogonalAtCutoff {
                word: word_label(basis, &u.word),
                cutoff: basis.cutoff(),
            });
        }
    }
    None
}

fn ord_hypotheses(letters: &SuperLetters) -> Result<(), String> {
    if let Some(r) = letters.m_infinity().first() {
        return Err(format!("m-infinity letter of degree {}", fmt_degree(&r.degree)));
    }
    for r in &letters.records {
        match r.ord {
            Some(o) if o > 1 => {}
            _ => return Err(format!("ord(p_uu) not in (1,∞) at degree {}", fmt_degree(&r.degree))),
        }
    }
    Ok(())
}

/// `B(V)` finite ⟺ `L(V)` finite, under the ord hypotheses (or both certified infinite).
pub fn finiteness_check(basis: &NicholsBasis, letters: &SuperLetters, span: &LieSpan) -> CheckResult {
    finiteness_equivalence("finiteness", basis, letters, span, ord_hypotheses(letters))
}

/// The same equivalence for connected spaces of rank > 1 without m-infinity letters.
pub fn connected_finiteness_check(basis: &NicholsBasis, letters: &SuperLetters, span: &LieSpan) -> CheckResult {
    let space = basis.space();
    let hyp = if space.rank() < 2 {
        Err("dim V = 1".to_string())
    } else if space.connected_components().len() != 1 {
        Err("not connected".to_string())
    } else if let Some(r) = letters.m_infinity().first() {
        Err(format!("m-infinity letter of degree {}", fmt_degree(&r.degree)))
    } else {
        Ok(())
    };
    finiteness_equivalence("connected finiteness", basis, letters, span, hyp)
}

fn finiteness_equivalence(
    name: &str,
    basis: &NicholsBasis,
    letters: &SuperLetters,
    span: &LieSpan,
    hyp: Result<(), String>,
) -> CheckResult {
    if basis.is_finite() {
        if let Err(e) = hyp {
            return CheckResult::skipped(name, format!("hypotheses fail: {e}"));
        }
        if !span.stabilized {
            return CheckResult::fail(name, "B(V) finite but closure not stabilized", "closure");
        }
        let d = letters.records.len();
        if d > span.dim() {
            return CheckResult::fail(name, format!("|D| = {d} > dim L = {}", span.dim()), "D");
        }
        return CheckResult::pass(
            name,
            format!(
                "dim B = {}, dim L = {}, |D| = {d} ≤ dim L",
                basis.dimension().unwrap_or(0),
                span.dim()
            ),
        );
    }
    match (b_infinite_certificate(basis, letters), l_infinite_certificate(basis, letters)) {
        (Some(b), Some(l)) => {
            let note = match &hyp {
                Ok(()) => String::new(),
                Err(e) => format!(" (hypotheses fail: {e})"),
            };
            CheckResult::pass(name, format!("both infinite: B by {b:?}, L by {l:?}{note}"))
        }
        _ => CheckResult::inconclusive(name, format!("B(V) not finite through cutoff {}", basis.cutoff())),
    }
}

/// Infinite-dimension certificate from a hard letter orthogonal to all others,
/// or consistency of its absence on finite inputs.
pub fn orthogonal_letter_check(basis: &NicholsBasis, letters: &SuperLetters) -> CheckResult {
    let space = basis.space();
    if space.rank() < 2 || space.connected_components().len() != 1 {
        return CheckResult::skipped("orthogonal letter", "needs a connected space with dim V > 1");
    }
    let orth = orthogonal_letters(space, letters);
    match (basis.is_finite(), orth.first()) {
        (true, None) => CheckResult::pass("orthogonal letter", "no orthogonal hard letter in a finite B(V)"),
        (true, Some(u)) => CheckResult::fail(
            "orthogonal letter",
            "finite B(V) with an orthogonal hard letter",
            word_label(basis, &u.word),
        ),
        (false, Some(u)) => CheckResult::pass(
            "orthogonal letter",
            format!(
                "orthogonal letter {} at cutoff {}: infinite certificate",
                word_label(basis, &u.word),
                basis.cutoff()
            ),
        ),
        (false, None) => CheckResult::skipped("orthogonal letter", "no orthogonal hard letter within cutoff"),
    }
}

/// Result of comparing `dim L(V)` with `dim B(V) − 1`.
#[derive(Clone, Debug, Serialize)]
pub struct DirectSum {
    /// `None` when neither finiteness nor an obstruction decides it.
    pub holds: Option<bool>,
    pub witness: Option<Word>,
}

/// `B(V) = F ⊕ L(V)`, with the `x_i x_j` obstruction for `q_ij q_ji = 1`.
pub fn direct_sum(basis: &NicholsBasis, span: &LieSpan) -> Result<(DirectSum, CheckResult), NicholsError> {
    let space = basis.space();
    let n = space.rank();
    for i in 0..n {
        for j in i + 1..n {
            if !(space.q(i, j) * space.q(j, i)).is_one() || basis.cutoff() < 2 {
                continue;
            }
            let w = vec![i as u8 + 1, j as u8 + 1];
            let x = basis.nf_word(&w)?;
            let label = word_label(basis, &w);
            let ds = DirectSum {
                holds: Some(false),
                witness: Some(w),
            };
            let check = if !x.is_zero() && !span.contains(&x) {
                CheckResult::pass("direct-sum", format!("fails: x{label} ∉ L(V)")).with_witness(label)
            } else {
                CheckResult::fail("direct-sum", "obstruction word lies in L(V)", label)
            };
            return Ok((ds, check));
        }
    }
    if !basis.is_finite() {
        let ds = DirectSum {
            holds: None,
            witness: None,
        };
        return Ok((ds, CheckResult::skipped("direct-sum", "B(V) not finite through cutoff")));
    }
    let dim_b = basis.dimension().expect("finite");
    let holds = span.dim() + 1 == dim_b;
    let detail = format!(
        "{}: dim L = {}, dim B = {dim_b}",
        if holds { "holds" } else { "does not hold" },
        span.dim()
    );
    Ok((
        DirectSum {
            holds: Some(holds),
            witness: None,
        },
        CheckResult::pass("direct-sum", detail),
    ))
}

/// `[[v],[w]]⁻ ≠ 0` for every hard `u = vw` (Shirshov split).
pub fn minus_split_check(basis: &NicholsBasis, letters: &SuperLetters) -> Result<CheckResult, NicholsError> {
    let mut count = 0;
    for r in &letters.records {
        if r.word.len() < 2 {
            continue;
        }
        let (v, w) = shirshov_decomposition(&r.word).expect("Lyndon");
        let x = basis.bracket(&basis.super_letter(&v)?, &basis.super_letter(&w)?, Flavor::Minus)?;
        if x.is_zero() {
            return Ok(CheckResult::fail("minus splits", "[[v],[w]]⁻ = 0", word_label(basis, &r.word)));
        }
        count += 1;
    }
    Ok(CheckResult::pass("minus splits", format!("{count} hard letters of length ≥ 2")))
}

fn split_pairs(u: &[u8], out: &mut Vec<(Word, Word)>) {
    if u.len() < 2 {
        return;
    }
    let (v, w) = shirshov_decomposition(u).expect("Lyndon");
    split_pairs(&v, out);
    split_pairs(&w, out);
    out.push((v, w));
}

/// `[u]⁻ ∈ L(V)`: for every `u` whose Shirshov tree has no orthogonal split (i),
/// and for all `u` on A/D/E/G₂ Cartan inputs (ii).
pub fn split_membership_check(basis: &NicholsBasis, letters: &SuperLetters, span: &LieSpan) -> Result<Vec<CheckResult>, NicholsError> {
    let space = basis.space();
    let n = space.rank();
    let mut part_i = 0;
    for r in &letters.records {
        let mut splits = Vec::new();
        split_pairs(&r.word, &mut splits);
        let ok = splits.iter().all(|(v, w)| {
            let (dv, dw) = (crate::words::degree(v, n), crate::words::degree(w, n));
            !(space.bicharacter(&dv, &dw) * space.bicharacter(&dw, &dv)).is_one()
        });
        if !ok {
            continue;
        }
        let m = minus_letter(basis, &r.word)?;
        if !span.contains(&m) {
            return Ok(vec![CheckResult::fail(
                "split membership (i)",
                "[u]⁻ ∉ L(V)",
                word_label(basis, &r.word),
            )]);
        }
        part_i += 1;
    }
    let mut out = vec![CheckResult::pass(
        "split membership (i)",
        format!("{part_i} letters with nondegenerate splits"),
    )];
    let ty = space.cartan_detect().and_then(|a| crate::cartan::classify(&a));
    match ty {
        Some(t) if t.is_simply_laced_or_g2() => {
            for r in &letters.records {
                let m = minus_letter(basis, &r.word)?;
                if !span.contains(&m) {
                    out.push(CheckResult::fail(
                        "split membership (ii)",
                        "[u]⁻ ∉ L(V)",
                        word_label(basis, &r.word),
                    ));
                    return Ok(out);
                }
            }
            out.push(CheckResult::pass(
                "split membership (ii)",
                format!("type {t}: all {} letters", letters.records.len()),
            ));
        }
        Some(t) => out.push(CheckResult::skipped("split membership (ii)", format!("type {t} is not A/D/E/G2"))),
        None => out.push(CheckResult::skipped("split membership (ii)", "not of finite Cartan type")),
    }
    Ok(out)
}

/// For homogeneous closure vectors `a, b` with `p_ab p_ba ≠ 1`: `ab, ba ∈ L(V)`.
pub fn product_membership_check(basis: &NicholsBasis, span: &LieSpan) -> Result<CheckResult, NicholsError> {
    let space = basis.space();
    let mut pairs = 0usize;
    for (i, a) in span.elements.iter().enumerate() {
        for b in &span.elements[i..] {
            let d = add_degrees(&a.degree, &b.degree);
            if total_degree(&d) > span.cutoff || !basis.covers(total_degree(&d)) {
                continue;
            }
            let pp = space.bicharacter(&a.degree, &b.degree) * space.bicharacter(&b.degree, &a.degree);
            if pp.is_one() {
                continue;
            }
            for (x, y) in [(a, b), (b, a)] {
                if let Some((dd, v)) = basis.mul_hom(&x.degree, &x.vector, &y.degree, &y.vector)? {
                    if !span.contains_hom(&dd, &v) {
                        return Ok(CheckResult::fail("product membership", "product not in L(V)", fmt_degree(&dd)));
                    }
                }
            }
            pairs += 1;
        }
    }
    Ok(CheckResult::pass("product membership", format!("{pairs} pairs")))
}

/// Growth certificate for a pair with `p_uu = 1`, `p_uv p_vu ≠ 1`: the nonzero
/// vectors `[u]^k [v]` lie in `L(V)` in distinct degrees for every `k` within cutoff.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthCertificate {
    pub u: String,
    pub v: String,
    /// `dim L(V)` restricted to total degree `≤ k|u| + |v|`, per `k = 1, 2, …`.
    pub counters: Vec<usize>,
    pub monotone: bool,
}

pub fn pair_growth(
    basis: &NicholsBasis,
    letters: &SuperLetters,
    span: &LieSpan,
) -> Result<Option<(GrowthCertificate, CheckResult)>, NicholsError> {
    let space = basis.space();
    let Some((u, v)) = growth_pair(space, letters) else {
        return Ok(None);
    };
    let (lu, lv) = (total_degree(&u.degree), total_degree(&v.degree));
    let h = span.hilbert();
    let mut counters = Vec::new();
    let mut x = v.value.clone();
    let mut k = 1;
    let mut status = None;
    while k * lu + lv <= span.cutoff && basis.covers(k * lu + lv) {
        x = basis.mul(&u.value, &x)?;
        if x.is_zero() || !span.contains(&x) {
            status = Some(CheckResult::fail(
                "pair growth",
                format!("[u]^{k}[v] is zero or outside L(V)"),
                word_label(basis, &u.word),
            ));
            break;
        }
        let upto = (k * lu + lv) as usize;
        counters.push(h[..=upto].iter().sum());
        k += 1;
    }
    let monotone = counters.windows(2).all(|w| w[0] < w[1]);
    let cert = GrowthCertificate {
        u: word_label(basis, &u.word),
        v: word_label(basis, &v.word),
        counters: counters.clone(),
        monotone,
    };
    let check = status.unwrap_or_else(|| {
        if monotone && !counters.is_empty() {
            CheckResult::pass("pair growth", format!("pair ({}, {}): growth {:?}", cert.u, cert.v, counters))
        } else if counters.is_empty() {
            CheckResult::skipped("pair growth", "cutoff too small for [u][v]")
        } else {
            CheckResult::fail("pair growth", format!("growth {counters:?} not increasing"), cert.u.clone())
        }
    });
    Ok(Some((cert, check)))
}

/// The rank-2 braided space `U, V` carrying the bicharacter values of two hard letters.
pub fn pair_space(order: u32, p_uu: &CycScalar, p_uv: &CycScalar, p_vu: &CycScalar, p_vv: &CycScalar) -> Arc<BraidedSpace> {
    Arc::new(
        BraidedSpace::new(order, vec![vec![p_uu.clone(), p_uv.clone()], vec![p_vu.clone(), p_vv.clone()]])
            .expect("nonzero bicharacter values"),
    )
}

fn ad_l(u: &FreeElement, x: &FreeElement) -> FreeElement {
    FreeElement::bracket(u, x, Flavor::Std)
}

fn ad_r(u: &FreeElement, x: &FreeElement) -> FreeElement {
    FreeElement::bracket(x, u, Flavor::Std)
}

fn iterate(f: impl Fn(&FreeElement) -> FreeElement, x: &FreeElement, k: u32) -> FreeElement {
    let mut y = x.clone();
    for _ in 0..k {
        y = f(&y);
    }
    y
}

/// Precondition `p_uu^i p_uv p_vu ≠ 1` for `0 ≤ i ≤ 2k−2`.
pub fn power_bracket_precondition(space: &BraidedSpace, k: u32) -> bool {
    let p_uu = space.q(0, 0);
    let pp = space.q(0, 1) * space.q(1, 0);
    (0..=(2 * k).saturating_sub(2)).all(|i| !(p_uu.pow(i as i64) * &pp).is_one())
}

/// The recursion identity behind `[v][u]^k, …, [u]^k[v] ∈ L(V)` and the
/// determinant of its coefficient matrix, in the free algebra on `U, V`.
pub fn power_bracket_identities(space: &Arc<BraidedSpace>, k: u32) -> Result<(), String> {
    let order = space.order();
    let u = FreeElement::letter(space, 1);
    let v = FreeElement::letter(space, 2);
    let p_uu = space.q(0, 0).clone();
    let (p_uv, p_vu) = (space.q(0, 1).clone(), space.q(1, 0).clone());
    let pp = &p_uv * &p_vu;
    let l = |x: &FreeElement| ad_l(&u, x);
    let r = |x: &FreeElement| ad_r(&u, x);
    for t in 1..=k {
        for i in 0..t {
            let ui = u.pow(i);
            let a = iterate(r, &ui.mul(&iterate(l, &v, k - t + 1)), t - i - 1).scale(&(p_uu.pow((k - t + i) as i64) * &p_uv));
            let b = iterate(r, &ui.mul(&iterate(l, &v, k - t)), t - i);
            let coef = CycScalar::one(order) - p_uu.pow((2 * (k - t) + i) as i64) * &pp;
            let c = iterate(r, &u.pow(i + 1).mul(&iterate(l, &v, k - t)), t - i - 1).scale(&coef);
            if !a.add(&b).sub(&c).is_zero() {
                return Err(format!("recursion fails at k={k}, t={t}, i={i}"));
            }
        }
    }
    // rows r^s l^{k-s} V against the words U^a V U^{k-a}
    let cols: Vec<Word> = (0..=k)
        .map(|a| {
            let mut w = vec![1u8; a as usize];
            w.push(2);
            w.extend(std::iter::repeat_n(1u8, (k - a) as usize));
            w
        })
        .collect();
    let mut rows = Vec::new();
    for s in 0..=k {
        let x = iterate(r, &iterate(l, &v, k - s), s);
        if x.terms().keys().any(|w| !cols.contains(w)) {
            return Err(format!("row {s} leaves the span of U^a V U^(k-a)"));
        }
        rows.push(cols.iter().map(|w| x.coeff(w)).collect::<Vector>());
    }
    let det = determinant(order, &rows);
    let mut expect = CycScalar::one(order);
    for i in 0..k {
        for t in i + 1..=k {
            expect *= &(CycScalar::one(order) - p_uu.pow((2 * (k - t) + i) as i64) * &pp);
        }
    }
    if det != expect {
        return Err(format!("determinant {det} differs from the product {expect} at k={k}"));
    }
    Ok(())
}

/// `[v][u]^k, [u][v][u]^{k−1}, …, [u]^k[v] ∈ L(V)` for hard `u ≠ v`, plus the free-algebra identities.
pub fn power_brackets_check(
    basis: &NicholsBasis,
    span: &LieSpan,
    u: &SuperLetterRecord,
    v: &SuperLetterRecord,
    k: u32,
) -> Result<CheckResult, NicholsError> {
    let space = basis.space();
    let name = format!("power brackets {},{} k={k}", word_label(basis, &u.word), word_label(basis, &v.word));
    let aux = pair_space(
        space.order(),
        &u.p_uu,
        &space.bicharacter(&u.degree, &v.degree),
        &space.bicharacter(&v.degree, &u.degree),
        &v.p_uu,
    );
    if !power_bracket_precondition(&aux, k) {
        return Ok(CheckResult::skipped(name, "p_uu^i p_uv p_vu = 1 for some i ≤ 2k-2"));
    }
    if let Err(e) = power_bracket_identities(&aux, k) {
        return Ok(CheckResult::fail(name, e, format!("k={k}")));
    }
    let total = k * total_degree(&u.degree) + total_degree(&v.degree);
    if total > span.cutoff || !basis.covers(total) {
        return Ok(CheckResult::pass(name, "identities hold; membership beyond cutoff"));
    }
    for a in 0..=k {
        let left = basis.pow(&u.value, a)?;
        let right = basis.pow(&u.value, k - a)?;
        let x = basis.mul(&basis.mul(&left, &v.value)?, &right)?;
        if !span.contains(&x) {
            return Ok(CheckResult::fail(name, format!("[u]^{a}[v][u]^{} ∉ L(V)", k - a), format!("a={a}")));
        }
    }
    Ok(CheckResult::pass(name, "identities and membership hold"))
}

/// With `p_uu = 1`: the recursion `p_uv r^s l^{k−s} V + r^{s+1} l^{k−s−1} V =
/// (1 − p_uv p_vu) U r^s l^{k−s−1} V`, and, when `p_uv p_vu = 1`, every
/// `d_1 ⋯ d_k V` with `d_i ∈ {l, r}` lies in `F · l^k V`.
pub fn flat_power_identities(space: &Arc<BraidedSpace>, k: u32) -> Result<(), String> {
    let order = space.order();
    let u = FreeElement::letter(space, 1);
    let v = FreeElement::letter(space, 2);
    let (p_uv, p_vu) = (space.q(0, 1).clone(), space.q(1, 0).clone());
    let pp = &p_uv * &p_vu;
    let l = |x: &FreeElement| ad_l(&u, x);
    let r = |x: &FreeElement| ad_r(&u, x);
    for s in 0..k {
        let a = iterate(r, &iterate(l, &v, k - s), s).scale(&p_uv);
        let b = iterate(r, &iterate(l, &v, k - s - 1), s + 1);
        let c = u
            .mul(&iterate(r, &iterate(l, &v, k - s - 1), s))
            .scale(&(CycScalar::one(order) - &pp));
        if !a.add(&b).sub(&c).is_zero() {
            return Err(format!("recursion fails at k={k}, s={s}"));
        }
    }
    if !pp.is_one() {
        return Ok(());
    }
    let lk = iterate(l, &v, k);
    for mask in 0..(1u32 << k) {
        let mut x = v.clone();
        for bit in 0..k {
            x = if mask >> bit & 1 == 1 { r(&x) } else { l(&x) };
        }
        if !proportional(&x, &lk) {
            return Err(format!("d-sequence {mask:b} is not a multiple of l^{k} V"));
        }
    }
    Ok(())
}

fn proportional(x: &FreeElement, y: &FreeElement) -> bool {
    if x.is_zero() {
        return true;
    }
    let Some((w, c)) = y.terms().iter().next() else {
        return false;
    };
    let f = &x.coeff(w) * &c.inv().expect("nonzero coefficient");
    x.sub(&y.scale(&f)).is_zero()
}

/// `l_i^k[j] = 0 ⟺ r_i^k[j] = 0 ⟺ (k)!_{p_ii} ∏_{t<k} (p_ii^t p_ij p_ji − 1) = 0`, in `B(V)`.
pub fn nilpotency_check(basis: &NicholsBasis, i: usize, j: usize, k: u32) -> Result<Result<bool, String>, NicholsError> {
    let space = basis.space();
    let order = space.order();
    let xi = basis.nf_word(&[i as u8 + 1])?;
    let xj = basis.nf_word(&[j as u8 + 1])?;
    let mut l = xj.clone();
    let mut r = xj;
    for _ in 0..k {
        l = basis.bracket(&xi, &l, Flavor::Std)?;
        r = basis.bracket(&r, &xi, Flavor::Std)?;
    }
    let p_ii = space.q(i, i);
    let pp = space.q(i, j) * space.q(j, i);
    let mut f = q_factorial(k, p_ii);
    for t in 0..k {
        f *= &(p_ii.pow(t as i64) * &pp - CycScalar::one(order));
    }
    let (a, b, c) = (l.is_zero(), r.is_zero(), f.is_zero());
    if a == b && b == c {
        Ok(Ok(a))
    } else {
        Ok(Err(format!("l=0: {a}, r=0: {b}, scalar=0: {c}")))
    }
}

/// The nilpotency criterion over every `p_ii = ζ_M^a`, `p_ij p_ji = ζ_M^b` with `M ≤ max_m`, `k ≤ max_k`.
pub fn nilpotency_sweep(max_m: u32, max_k: u32) -> Result<CheckResult, NicholsError> {
    let mut cases = 0;
    for m in 1..=max_m {
        for a in 0..m {
            for b in 0..m {
                let q = vec![
                    vec![CycScalar::zeta_pow(m, a as i64), CycScalar::zeta_pow(m, b as i64)],
                    vec![CycScalar::one(m), CycScalar::from_int(m, -1)],
                ];
                let space = Arc::new(BraidedSpace::new(m, q).expect("valid"));
                let basis = NicholsBasis::build(&space, max_k + 1)?;
                for k in 1..=max_k {
                    if let Err(e) = nilpotency_check(&basis, 0, 1, k)? {
                        return Ok(CheckResult::fail("nilpotency sweep", e, format!("M={m} a={a} b={b} k={k}")));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(CheckResult::pass(
        "nilpotency sweep",
        format!("{cases} cases, M ≤ {max_m}, k ≤ {max_k}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(m: u32, q: &[&[&str]], cutoff: u32) -> NicholsBasis {
        let rows: Vec<Vec<&str>> = q.iter().map(|r| r.to_vec()).collect();
        let space = Arc::new(BraidedSpace::parse(m, &rows).unwrap());
        NicholsBasis::build(&space, cutoff).unwrap()
    }

    #[test]
    fn rank_one_closure() {
        for n in 2..=7u32 {
            let b = build(n, &[&["z"]], n + 1);
            let l = LieSpan::closure(&b, Flavor::Std).unwrap();
            assert!(l.stabilized);
            assert_eq!(l.dim(), n as usize - 1);
        }
    }

    #[test]
    fn mixed36_closures() {
        let b = build(6, &[&["z^2", "-z^2"], &["1", "-1"]], 12);
        let std = LieSpan::closure(&b, Flavor::Std).unwrap();
        let c = LieSpan::closure(&b, Flavor::C).unwrap();
        assert_eq!(std.dim(), 35);
        assert_eq!(std.dims(), c.dims());
        let (ds, _) = direct_sum(&b, &std).unwrap();
        assert_eq!(ds.holds, Some(true));
        let letters = SuperLetters::compute(&b).unwrap();
        assert!(minus_split_check(&b, &letters).unwrap().passed());
        assert!(finiteness_check(&b, &letters, &std).passed());
        let minus = LieSpan::closure(&b, Flavor::Minus).unwrap();
        assert!(bound_lminus(&b, &letters, &minus).unwrap().holds);
        assert!(bound_l(&b, &letters, &std).unwrap().holds);
        assert!(product_membership_check(&b, &std).unwrap().passed());
    }

    #[test]
    fn power_bracket_sweep() {
        let m = 12;
        for a in 0..m as i64 {
            for b in [1, 5, 7] {
                for c in [0, 3] {
                    let aux = pair_space(
                        m,
                        &CycScalar::zeta_pow(m, a),
                        &CycScalar::zeta_pow(m, b),
                        &CycScalar::zeta_pow(m, c),
                        &CycScalar::from_int(m, -1),
                    );
                    for k in 1..=3 {
                        power_bracket_identities(&aux, k).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn flat_power_sweep() {
        let m = 12;
        for b in 0..m as i64 {
            for vv in [0, 6, 4] {
                let aux = pair_space(
                    m,
                    &CycScalar::one(m),
                    &CycScalar::zeta_pow(m, b),
                    &CycScalar::zeta_pow(m, -b),
                    &CycScalar::zeta_pow(m, vv),
                );
                for k in 1..=4 {
                    flat_power_identities(&aux, k).unwrap();
                }
            }
        }
    }

    #[test]
    fn nilpotency_small() {
        assert!(nilpotency_sweep(4, 3).unwrap().passed());
    }

    #[test]
    fn pair_growth_certificate() {
        let b = build(2, &[&["1", "-1"], &["1", "-1"]], 10);
        let letters = SuperLetters::compute(&b).unwrap();
        let l = LieSpan::closure(&b, Flavor::Std).unwrap();
        let (cert, check) = pair_growth(&b, &letters, &l).unwrap().unwrap();
        assert!(check.passed(), "{check:?}");
        assert!(cert.monotone);
        assert!(finiteness_check(&b, &letters, &l).passed());
    }
}
