//! The Nichols algebra `B(V)` degree by degree.
//!
//! Each `Z^n`-degree block `B_d` is built from the blocks below it. A word
//! `a·b` with `b` a basis word of `B_{d-e_a}` is sent to its tuple of skew
//! derivatives `(<y_i, a·b>)_i ∈ ⊕_i B_{d-e_i}`; an element of positive degree
//! vanishes in `B(V)` exactly when all its derivatives do, so this map is
//! injective on `B_d`. Words are scanned in lex order and kept when their image
//! is independent of the earlier ones, which makes the basis of every block the
//! lex-smallest set of words spanning it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braiding::{total_degree, BraidedSpace, Degree};
use crate::freealg::FreeElement;
use crate::linalg::{axpy, is_zero_vector, zero_vector, ColMatrix, Echelon, Vector};
use crate::scalar::CycScalar;
use crate::words::{degree, format_word_n, is_lyndon, lyndon_of_degree, shirshov_decomposition, Word};

/// Largest dimension allowed for a single degree block.
pub const MAX_BLOCK_DIM: usize = 4000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NicholsError {
    #[error("degree {0} lies beyond the computed cutoff")]
    BeyondCutoff(u32),
    #[error("resource limit exceeded at degree {degree:?}: block dimension {dim} > {limit}")]
    ResourceLimit { degree: Degree, dim: usize, limit: usize },
    #[error("cutoff must be at least 1")]
    BadCutoff,
    #[error("snapshot does not match the braided space: {0}")]
    Snapshot(String),
}

/// One homogeneous block `B_d`.
#[derive(Clone, Debug)]
pub struct Block {
    pub degree: Degree,
    /// Lex-sorted words whose classes form a basis.
    pub basis: Vec<Word>,
    /// `left[a]`: left multiplication by `x_{a+1}` from `B_{d-e_a}` into `B_d`.
    pub left: Vec<Option<ColMatrix>>,
    /// `deriv[i]`: `<y_{i+1}, ->` from `B_d` into `B_{d-e_i}`.
    pub deriv: Vec<Option<ColMatrix>>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// An element of `B(V)` as coordinates per nonzero block.
#[derive(Clone, Debug, PartialEq)]
pub struct BElement {
    pub comps: BTreeMap<Degree, Vector>,
}

impl BElement {
    pub fn zero() -> BElement {
        BElement { comps: BTreeMap::new() }
    }

    pub fn homogeneous(d: Degree, v: Vector) -> BElement {
        let mut e = BElement::zero();
        if !is_zero_vector(&v) {
            e.comps.insert(d, v);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add(&self, other: &BElement) -> BElement {
        let mut out = self.clone();
        for (d, v) in &other.comps {
            match out.comps.get_mut(d) {
                Some(acc) => {
                    for (a, x) in acc.iter_mut().zip(v) {
                        *a += x;
                    }
                    if is_zero_vector(acc) {
                        out.comps.remove(d);
                    }
                }
                None => {
                    out.comps.insert(d.clone(), v.clone());
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &CycScalar) -> BElement {
        if c.is_zero() {
            return BElement::zero();
        }
        BElement {
            comps: self
                .comps
                .iter()
                .map(|(d, v)| (d.clone(), v.iter().map(|x| x * c).collect()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &BElement) -> BElement {
        let neg = other.scale(&-CycScalar::one(self.order_hint(other)));
        self.add(&neg)
    }

    fn order_hint(&self, other: &BElement) -> u32 {
        self.comps
            .values()
            .chain(other.comps.values())
            .flat_map(|v| v.first())
            .map(CycScalar::order)
            .next()
            .unwrap_or(1)
    }

    pub fn homogeneous_degree(&self) -> Option<&Degree> {
        if self.comps.len() == 1 {
            self.comps.keys().next()
        } else {
            None
        }
    }

    pub fn component(&self, d: &[u32]) -> Option<&Vector> {
        self.comps.get(d)
    }
}

/// The computed model of `B(V)` through a cutoff total degree.
pub struct NicholsBasis {
    space: Arc<BraidedSpace>,
    cutoff: u32,
    blocks: BTreeMap<Degree, Block>,
    /// Highest nonzero total degree when `B(V)` was found to vanish at or below the cutoff.
    top_degree: Option<u32>,
    letter_cache: Mutex<HashMap<Word, BElement>>,
}

impl NicholsBasis {
    pub fn build(space: &Arc<BraidedSpace>, cutoff: u32) -> Result<NicholsBasis, NicholsError> {
        if cutoff == 0 {
            return Err(NicholsError::BadCutoff);
        }
        let n = space.rank();
        let zero: Degree = vec![0; n];
        let mut nb = NicholsBasis {
            space: space.clone(),
            cutoff,
            blocks: BTreeMap::new(),
            top_degree: None,
            letter_cache: Mutex::new(HashMap::new()),
        };
        nb.blocks.insert(
            zero.clone(),
            Block {
                degree: zero.clone(),
                basis: vec![Vec::new()],
                left: vec![None; n],
                deriv: vec![None; n],
            },
        );
        let mut frontier = vec![zero];
        for t in 1..=cutoff {
            let mut degs: BTreeSet<Degree> = BTreeSet::new();
            for d in &frontier {
                for a in 0..n {
                    let mut e = d.clone();
                    e[a] += 1;
                    degs.insert(e);
                }
            }
            let mut next = Vec::new();
            for d in degs {
                if let Some(block) = nb.build_block(&d)? {
                    nb.blocks.insert(d.clone(), block);
                    next.push(d);
                }
            }
            if next.is_empty() {
                nb.top_degree = Some(t - 1);
                break;
            }
            frontier = next;
        }
        Ok(nb)
    }

    fn build_block(&self, d: &[u32]) -> Result<Option<Block>, NicholsError> {
        let n = self.space.rank();
        let order = self.space.order();
        // (i, offset, dim of B_{d-e_i})
        let mut parts = Vec::new();
        let mut width = 0;
        for i in 0..n {
            if d[i] == 0 {
                continue;
            }
            if let Some(b) = self.blocks.get(&sub_unit(d, i)) {
                parts.push((i, width, b.dim()));
                width += b.dim();
            }
        }
        if width == 0 {
            return Ok(None);
        }
        let mut candidates: Vec<(Word, usize, usize)> = Vec::new();
        for a in 0..n {
            if d[a] == 0 {
                continue;
            }
            if let Some(b) = self.blocks.get(&sub_unit(d, a)) {
                for (k, w) in b.basis.iter().enumerate() {
                    let mut word = vec![a as u8 + 1];
                    word.extend_from_slice(w);
                    candidates.push((word, a, k));
                }
            }
        }
        candidates.sort();
        let mut ech = Echelon::tracked(order, width);
        let mut basis = Vec::new();
        let mut phis: Vec<Vector> = Vec::new();
        let mut nfs: Vec<(usize, usize, Vector)> = Vec::new();
        for (word, a, k) in candidates {
            let phi = self.derivative_image(d, a, k, &parts, width);
            if ech.insert(&phi) {
                let idx = basis.len();
                if idx >= MAX_BLOCK_DIM {
                    return Err(NicholsError::ResourceLimit {
                        degree: d.to_vec(),
                        dim: idx + 1,
                        limit: MAX_BLOCK_DIM,
                    });
                }
                basis.push(word);
                phis.push(phi);
                let mut e = zero_vector(order, idx + 1);
                e[idx] = CycScalar::one(order);
                nfs.push((a, k, e));
            } else {
                let c = ech.coordinates(&phi).expect("dependent vector has coordinates");
                nfs.push((a, k, c));
            }
        }
        let dim = basis.len();
        if dim == 0 {
            return Ok(None);
        }
        let mut left: Vec<Option<ColMatrix>> = vec![None; n];
        for (a, k, mut v) in nfs {
            v.resize(dim, CycScalar::zero(order));
            let m = left[a].get_or_insert_with(|| ColMatrix::new(dim));
            debug_assert_eq!(m.cols.len(), k);
            m.cols.push(v);
        }
        let mut deriv: Vec<Option<ColMatrix>> = vec![None; n];
        for &(i, off, di) in &parts {
            let mut m = ColMatrix::new(di);
            for phi in &phis {
                m.cols.push(phi[off..off + di].to_vec());
            }
            deriv[i] = Some(m);
        }
        Ok(Some(Block {
            degree: d.to_vec(),
            basis,
            left,
            deriv,
        }))
    }

    /// `(<y_i, x_a · b_k>)_i` for the `k`-th basis word `b_k` of `B_{d-e_a}`.
    fn derivative_image(&self, d: &[u32], a: usize, k: usize, parts: &[(usize, usize, usize)], width: usize) -> Vector {
        let order = self.space.order();
        let mut phi = zero_vector(order, width);
        let da = sub_unit(d, a);
        let lower = &self.blocks[&da];
        let ea = self.space.unit_vector(a);
        for &(i, off, _) in parts {
            if i == a {
                phi[off + k] += &CycScalar::one(order);
            }
            // χ(e_i, e_a)^{-1} x_a <y_i, b_k>
            let Some(der) = lower.deriv[i].as_ref() else { continue };
            let dib = &der.cols[k];
            if is_zero_vector(dib) {
                continue;
            }
            let target = &self.blocks[&sub_unit(d, i)];
            let Some(lm) = target.left[a].as_ref() else { continue };
            let ei = self.space.unit_vector(i);
            let f = self.space.bicharacter(&ei, &ea).inv().expect("nonzero");
            let img = lm.apply(order, dib);
            axpy(&mut phi[off..off + lm.rows], &f, &img);
        }
        phi
    }

    pub fn space(&self) -> &Arc<BraidedSpace> {
        &self.space
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// `Some(T)` when `B(V)` is known to vanish above total degree `T`.
    pub fn top_degree(&self) -> Option<u32> {
        self.top_degree
    }

    pub fn is_finite(&self) -> bool {
        self.top_degree.is_some()
    }

    pub fn blocks(&self) -> &BTreeMap<Degree, Block> {
        &self.blocks
    }

    pub fn block(&self, d: &[u32]) -> Option<&Block> {
        self.blocks.get(d)
    }

    pub fn block_dim(&self, d: &[u32]) -> usize {
        self.blocks.get(d).map_or(0, Block::dim)
    }

    /// Total degrees for which the block data is complete.
    pub fn known_through(&self) -> u32 {
        self.cutoff
    }

    /// Whether blocks of this total degree are determined (computed, or zero past the top).
    pub fn covers(&self, total: u32) -> bool {
        total <= self.cutoff || self.top_degree.is_some()
    }

    fn check_total(&self, total: u32) -> Result<(), NicholsError> {
        if self.covers(total) {
            Ok(())
        } else {
            Err(NicholsError::BeyondCutoff(total))
        }
    }

    /// Hilbert coefficients `dim B_m` for `m = 0..=cutoff` (or through the top degree).
    pub fn hilbert(&self) -> Vec<usize> {
        let last = self.top_degree.unwrap_or(self.cutoff);
        let mut h = vec![0usize; last as usize + 1];
        for (d, b) in &self.blocks {
            h[total_degree(d) as usize] += b.dim();
        }
        h
    }

    /// `dim B(V)` when finite.
    pub fn dimension(&self) -> Option<usize> {
        self.top_degree.map(|_| self.blocks.values().map(Block::dim).sum())
    }

    /// Normal form of a single word.
    pub fn nf_word(&self, w: &[u8]) -> Result<BElement, NicholsError> {
        let order = self.space.order();
        self.check_total(w.len() as u32)?;
        let n = self.space.rank();
        let mut cur: Degree = vec![0; n];
        let mut v = vec![CycScalar::one(order)];
        for &a in w.iter().rev() {
            let ai = a as usize - 1;
            cur[ai] += 1;
            let Some(b) = self.blocks.get(&cur) else {
                return Ok(BElement::zero());
            };
            let lm = b.left[ai].as_ref().expect("left multiplication into a nonzero block");
            v = lm.apply(order, &v);
            if is_zero_vector(&v) {
                return Ok(BElement::zero());
            }
        }
        Ok(BElement::homogeneous(cur, v))
    }

    /// Normal form of a free-algebra element.
    pub fn nf(&self, x: &FreeElement) -> Result<BElement, NicholsError> {
        let order = self.space.order();
        let mut out = BElement::zero();
        for (d, comp) in x.components() {
            let total = total_degree(&d);
            self.check_total(total)?;
            if total == 0 {
                let c = comp.coeff(&[]);
                out = out.add(&BElement::homogeneous(d, vec![c]));
                continue;
            }
            if !self.blocks.contains_key(&d) {
                continue;
            }
            let terms: Vec<(&[u8], &CycScalar)> = comp.terms().iter().map(|(w, c)| (w.as_slice(), c)).collect();
            if let Some(v) = self.nf_terms(&terms, 0, &d)? {
                out = out.add(&BElement::homogeneous(d, v));
            }
            let _ = order;
        }
        Ok(out)
    }

    /// Normal form of `Σ c · w[depth..]` where every word has degree `d` from `depth` on.
    fn nf_terms(&self, terms: &[(&[u8], &CycScalar)], depth: usize, d: &[u32]) -> Result<Option<Vector>, NicholsError> {
        let order = self.space.order();
        let Some(block) = self.blocks.get(d) else {
            return Ok(None);
        };
        if total_degree(d) == 0 {
            let mut acc = CycScalar::zero(order);
            for (_, c) in terms {
                acc += c;
            }
            return Ok(Some(vec![acc]));
        }
        let mut out = zero_vector(order, block.dim());
        let mut start = 0;
        while start < terms.len() {
            let a = terms[start].0[depth];
            let mut end = start;
            while end < terms.len() && terms[end].0[depth] == a {
                end += 1;
            }
            let ai = a as usize - 1;
            let lower = sub_unit(d, ai);
            if let Some(v) = self.nf_terms(&terms[start..end], depth + 1, &lower)? {
                let lm = block.left[ai].as_ref().expect("nonzero lower block");
                let img = lm.apply(order, &v);
                for (o, x) in out.iter_mut().zip(img) {
                    *o += &x;
                }
            }
            start = end;
        }
        Ok(Some(out))
    }

    /// Lift coordinates back to the free algebra over the basis words.
    pub fn to_free(&self, x: &BElement) -> FreeElement {
        let mut out = FreeElement::zero(&self.space);
        for (d, v) in &x.comps {
            let b = &self.blocks[d];
            for (w, c) in b.basis.iter().zip(v) {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    /// Product of a homogeneous coordinate vector pair.
    pub fn mul_hom(&self, dx: &[u32], x: &[CycScalar], dy: &[u32], y: &[CycScalar]) -> Result<Option<(Degree, Vector)>, NicholsError> {
        let order = self.space.order();
        let d: Degree = dx.iter().zip(dy).map(|(a, b)| a + b).collect();
        self.check_total(total_degree(&d))?;
        let Some(target) = self.blocks.get(&d) else {
            return Ok(None);
        };
        let bx = &self.blocks[dx];
        let mut out = zero_vector(order, target.dim());
        for (w, c) in bx.basis.iter().zip(x) {
            if c.is_zero() {
                continue;
            }
            let mut cur = dy.to_vec();
            let mut v = y.to_vec();
            let mut alive = true;
            for &a in w.iter().rev() {
                let ai = a as usize - 1;
                cur[ai] += 1;
                match self.blocks.get(&cur) {
                    Some(b) => v = b.left[ai].as_ref().expect("nonzero").apply(order, &v),
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
            if alive {
                axpy(&mut out, c, &v);
            }
        }
        Ok(Some((d, out)))
    }

    pub fn mul(&self, x: &BElement, y: &BElement) -> Result<BElement, NicholsError> {
        let mut out = BElement::zero();
        for (dx, vx) in &x.comps {
            for (dy, vy) in &y.comps {
                if let Some((d, v)) = self.mul_hom(dx, vx, dy, vy)? {
                    out = out.add(&BElement::homogeneous(d, v));
                }
            }
        }
        Ok(out)
    }

    pub fn one(&self) -> BElement {
        let n = self.space.rank();
        BElement::homogeneous(vec![0; n], vec![CycScalar::one(self.space.order())])
    }

    pub fn pow(&self, x: &BElement, k: u32) -> Result<BElement, NicholsError> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// Bracket of two elements inside `B(V)`, per homogeneous pair.
    pub fn bracket(&self, x: &BElement, y: &BElement, flavor: crate::freealg::Flavor) -> Result<BElement, NicholsError> {
        use crate::freealg::Flavor;
        let mut out = BElement::zero();
        for (dx, vx) in &x.comps {
            for (dy, vy) in &y.comps {
                let xe = BElement::homogeneous(dx.clone(), vx.clone());
                let ye = BElement::homogeneous(dy.clone(), vy.clone());
                let xy = self.mul(&xe, &ye)?;
                let yx = self.mul(&ye, &xe)?;
                let term = match flavor {
                    Flavor::Std => yx.sub(&xy.scale(&self.space.bicharacter(dy, dx))),
                    Flavor::Minus => xy.sub(&yx),
                    Flavor::C => xy.sub(&yx.scale(&self.space.bicharacter(dx, dy))),
                };
                out = out.add(&term);
            }
        }
        Ok(out)
    }

    /// The super-letter value `[u]` in `B(V)` for a Lyndon word `u`.
    pub fn super_letter(&self, u: &[u8]) -> Result<BElement, NicholsError> {
        if let Some(v) = self.letter_cache.lock().expect("cache").get(u) {
            return Ok(v.clone());
        }
        let value = if u.len() == 1 {
            self.nf_word(u)?
        } else {
            self.check_total(u.len() as u32)?;
            let (v, w) = shirshov_decomposition(u).expect("Lyndon word");
            let bv = self.super_letter(&v)?;
            let bw = self.super_letter(&w)?;
            self.bracket(&bv, &bw, crate::freealg::Flavor::Std)?
        };
        self.letter_cache.lock().expect("cache").insert(u.to_vec(), value.clone());
        Ok(value)
    }

    /// Basis of the span, inside `B_target`, of all products of the given homogeneous generators.
    pub fn product_span(&self, gens: &[(Degree, Vector)], target: &[u32]) -> Result<Echelon, NicholsError> {
        let order = self.space.order();
        self.check_total(total_degree(target))?;
        let mut memo: BTreeMap<Degree, Vec<Vector>> = BTreeMap::new();
        let zero = vec![0u32; target.len()];
        memo.insert(zero, vec![vec![CycScalar::one(order)]]);
        let basis = self.product_span_rec(gens, target, &mut memo)?;
        let mut e = Echelon::new(order, self.block_dim(target));
        for v in &basis {
            e.insert(v);
        }
        Ok(e)
    }

    fn product_span_rec(
        &self,
        gens: &[(Degree, Vector)],
        d: &[u32],
        memo: &mut BTreeMap<Degree, Vec<Vector>>,
    ) -> Result<Vec<Vector>, NicholsError> {
        if let Some(v) = memo.get(d) {
            return Ok(v.clone());
        }
        let order = self.space.order();
        let dim = self.block_dim(d);
        let mut e = Echelon::new(order, dim);
        if dim > 0 {
            for (dg, g) in gens {
                if dg.iter().zip(d).any(|(a, b)| a > b) {
                    continue;
                }
                let rest: Degree = d.iter().zip(dg).map(|(a, b)| a - b).collect();
                let tails = self.product_span_rec(gens, &rest, memo)?;
                for t in &tails {
                    if e.rank() == dim {
                        break;
                    }
                    if let Some((_, v)) = self.mul_hom(dg, g, &rest, t)? {
                        e.insert(&v);
                    }
                }
                if e.rank() == dim {
                    break;
                }
            }
        }
        let rows = e.rows().to_vec();
        memo.insert(d.to_vec(), rows.clone());
        Ok(rows)
    }

    /// Canonical kernel data of the projection `T(V)_d → B_d`, for comparison with a
    /// symmetrizer kernel.
    pub fn kernel_echelon(&self, d: &[u32]) -> Result<crate::freealg::KernelEchelon, NicholsError> {
        let order = self.space.order();
        self.check_total(total_degree(d))?;
        let words = crate::freealg::words_of_degree(d);
        let basis: &[Word] = self.blocks.get(d).map_or(&[], |b| &b.basis);
        let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let standard: Vec<usize> = basis.iter().map(|w| index[w]).collect();
        let mut kernel = Vec::new();
        for (f, w) in words.iter().enumerate() {
            if standard.contains(&f) {
                continue;
            }
            let nf = self.nf_word(w)?;
            let mut v = zero_vector(order, words.len());
            v[f] = CycScalar::one(order);
            if let Some(c) = nf.component(d) {
                for (k, x) in c.iter().enumerate() {
                    if !x.is_zero() {
                        v[standard[k]] = -x;
                    }
                }
            }
            kernel.push((f, v));
        }
        Ok(crate::freealg::KernelEchelon {
            degree: d.to_vec(),
            words,
            standard,
            kernel,
        })
    }

    /// Word-level description of a block for reports.
    pub fn format_block(&self, d: &[u32]) -> Vec<String> {
        let n = self.space.rank();
        self.blocks
            .get(d)
            .map(|b| b.basis.iter().map(|w| format_word_n(w, n)).collect())
            .unwrap_or_default()
    }
}

fn sub_unit(d: &[u32], i: usize) -> Degree {
    let mut e = d.to_vec();
    e[i] -= 1;
    e
}

pub fn add_degrees(a: &[u32], b: &[u32]) -> Degree {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct MatrixSnapshot {
    rows: usize,
    cols: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct BlockSnapshot {
    degree: Degree,
    basis: Vec<Word>,
    left: Vec<Option<MatrixSnapshot>>,
    deriv: Vec<Option<MatrixSnapshot>>,
}

/// Serializable form of a computed basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    order: u32,
    q: Vec<Vec<Vec<String>>>,
    cutoff: u32,
    top_degree: Option<u32>,
    blocks: Vec<BlockSnapshot>,
}

fn snap_matrix(m: &ColMatrix) -> MatrixSnapshot {
    MatrixSnapshot {
        rows: m.rows,
        cols: m.cols.iter().map(|c| c.iter().map(CycScalar::to_coord_strings).collect()).collect(),
    }
}

fn unsnap_matrix(order: u32, m: &MatrixSnapshot) -> Result<ColMatrix, NicholsError> {
    let mut out = ColMatrix::new(m.rows);
    for c in &m.cols {
        let col: Result<Vector, _> = c.iter().map(|x| CycScalar::from_coord_strings(order, x)).collect();
        let col = col.map_err(|e| NicholsError::Snapshot(e.to_string()))?;
        if col.len() != m.rows {
            return Err(NicholsError::Snapshot("column length".into()));
        }
        out.cols.push(col);
    }
    Ok(out)
}

impl NicholsBasis {
    pub fn to_snapshot(&self) -> Snapshot {
        Snapshot {
            order: self.space.order(),
            q: self
                .space
                .matrix()
                .iter()
                .map(|r| r.iter().map(CycScalar::to_coord_strings).collect())
                .collect(),
            cutoff: self.cutoff,
            top_degree: self.top_degree,
            blocks: self
                .blocks
                .values()
                .map(|b| BlockSnapshot {
                    degree: b.degree.clone(),
                    basis: b.basis.clone(),
                    left: b.left.iter().map(|m| m.as_ref().map(snap_matrix)).collect(),
                    deriv: b.deriv.iter().map(|m| m.as_ref().map(snap_matrix)).collect(),
                })
                .collect(),
        }
    }

    /// Rebuild from a snapshot taken for the same space.
    pub fn from_snapshot(space: &Arc<BraidedSpace>, snap: &Snapshot) -> Result<NicholsBasis, NicholsError> {
        let order = space.order();
        let bad = |m: &str| NicholsError::Snapshot(m.to_string());
        if snap.order != order || snap.q.len() != space.rank() {
            return Err(bad("order or rank"));
        }
        for (i, row) in snap.q.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let v = CycScalar::from_coord_strings(order, x).map_err(|e| bad(&e.to_string()))?;
                if &v != space.q(i, j) {
                    return Err(bad("braiding matrix"));
                }
            }
        }
        let n = space.rank();
        let mut blocks = BTreeMap::new();
        for b in &snap.blocks {
            if b.degree.len() != n || b.left.len() != n || b.deriv.len() != n {
                return Err(bad("block shape"));
            }
            let conv = |ms: &[Option<MatrixSnapshot>]| -> Result<Vec<Option<ColMatrix>>, NicholsError> {
                ms.iter().map(|m| m.as_ref().map(|m| unsnap_matrix(order, m)).transpose()).collect()
            };
            let block = Block {
                degree: b.degree.clone(),
                basis: b.basis.clone(),
                left: conv(&b.left)?,
                deriv: conv(&b.deriv)?,
            };
            blocks.insert(b.degree.clone(), block);
        }
        if !blocks.contains_key(&vec![0; n]) {
            return Err(bad("missing degree 0"));
        }
        Ok(NicholsBasis {
            space: space.clone(),
            cutoff: snap.cutoff,
            blocks,
            top_degree: snap.top_degree,
            letter_cache: Mutex::new(HashMap::new()),
        })
    }
}

/// Height of a hard super-letter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Height {
    Finite {
        value: u32,
    },
    /// Certified infinite, with the certificate kind.
    Infinite {
        certificate: InfiniteKind,
    },
    /// `ord(p_uu)·deg(u)` lies beyond the cutoff.
    UnknownAtCutoff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfiniteKind {
    /// `p_uu` is not a root of unity.
    OrderInfinite,
    /// `p_uu = 1`: no admissible finite height exists.
    OrderOne,
    /// `ord(p_uu) = m > 1` but `[u]^m` is not a combination of greater super-words.
    MInfinity,
}

impl Height {
    pub fn finite(&self) -> Option<u32> {
        match self {
            Height::Finite { value } => Some(*value),
            _ => None,
        }
    }
}

/// A hard super-letter with its PBW data.
#[derive(Clone, Debug)]
pub struct SuperLetterRecord {
    pub word: Word,
    pub degree: Degree,
    pub value: BElement,
    pub p_uu: CycScalar,
    /// `None` when `p_uu` is not a root of unity.
    pub ord: Option<u32>,
    pub height: Height,
    /// Set for `p_uu = 1`, whose height convention is ambiguous.
    pub flagged: bool,
}

/// The hard super-letters `D` (through the cutoff), sorted by word.
pub struct SuperLetters {
    pub records: Vec<SuperLetterRecord>,
}

impl SuperLetters {
    /// Hard super-letters, found degree by degree.
    ///
    /// Candidates of degree `d` are `u = vw` with `v < w` hard and `(v, w)` the
    /// Shirshov split of `u`; any other Lyndon word has a non-hard Shirshov part
    /// and cannot be hard. Within a degree, candidates are tested from the
    /// largest word down, so every super-letter greater than `u` of the same
    /// degree has already been classified.
    pub fn compute(basis: &NicholsBasis) -> Result<SuperLetters, NicholsError> {
        let space = basis.space().clone();
        let n = space.rank();
        let last = basis.top_degree().unwrap_or(basis.cutoff());
        let mut hard: Vec<(Word, Degree, BElement)> = Vec::new();
        for t in 1..=last {
            let mut cands: BTreeSet<Word> = BTreeSet::new();
            if t == 1 {
                for a in 1..=n as u8 {
                    cands.insert(vec![a]);
                }
            } else {
                for (v, _, _) in &hard {
                    for (w, _, _) in &hard {
                        if v.len() + w.len() != t as usize || v >= w {
                            continue;
                        }
                        let mut u = v.clone();
                        u.extend_from_slice(w);
                        if is_lyndon(&u) && shirshov_decomposition(&u).ok() == Some((v.clone(), w.clone())) {
                            cands.insert(u);
                        }
                    }
                }
            }
            for u in cands.into_iter().rev() {
                let d = degree(&u, n);
                let value = basis.super_letter(&u)?;
                if value.is_zero() {
                    continue;
                }
                let gens: Vec<(Degree, Vector)> = hard
                    .iter()
                    .filter(|(w, dw, _)| w.as_slice() > u.as_slice() && dw.iter().zip(&d).all(|(a, b)| a <= b))
                    .map(|(_, dw, val)| (dw.clone(), val.comps[dw].clone()))
                    .collect();
                let span = basis.product_span(&gens, &d)?;
                if !span.contains(&value.comps[&d]) {
                    hard.push((u, d, value));
                }
            }
        }
        hard.sort_by(|a, b| a.0.cmp(&b.0));
        let mut records = Vec::new();
        for (u, d, value) in &hard {
            let p_uu = space.bicharacter(d, d);
            let ord = p_uu.mult_order().expect("nonzero");
            let (height, flagged) = height_of(basis, &hard, u, d, value, ord)?;
            records.push(SuperLetterRecord {
                word: u.clone(),
                degree: d.clone(),
                value: value.clone(),
                p_uu,
                ord,
                height,
                flagged,
            });
        }
        Ok(SuperLetters { records })
    }

    pub fn words(&self) -> Vec<Word> {
        self.records.iter().map(|r| r.word.clone()).collect()
    }

    pub fn get(&self, u: &[u8]) -> Option<&SuperLetterRecord> {
        self.records.iter().find(|r| r.word == u)
    }

    /// `Δ⁺`: degrees of the hard super-letters.
    pub fn positive_roots(&self) -> Vec<Degree> {
        let set: BTreeSet<Degree> = self.records.iter().map(|r| r.degree.clone()).collect();
        set.into_iter().collect()
    }

    /// Unordered pairs of distinct hard letters with `p_uv p_vu ≠ 1`.
    pub fn e_e_prime(&self, space: &BraidedSpace) -> usize {
        let mut count = 0;
        for (i, a) in self.records.iter().enumerate() {
            for b in &self.records[i + 1..] {
                let p = space.bicharacter(&a.degree, &b.degree) * space.bicharacter(&b.degree, &a.degree);
                if !p.is_one() {
                    count += 1;
                }
            }
        }
        count
    }

    /// Hard letters whose order test fails.
    pub fn m_infinity(&self) -> Vec<&SuperLetterRecord> {
        self.records
            .iter()
            .filter(|r| {
                matches!(
                    r.height,
                    Height::Infinite {
                        certificate: InfiniteKind::MInfinity
                    }
                )
            })
            .collect()
    }

    /// Counts of restricted PBW monomials per `Z^n`-degree with total degree `≤ max_total`.
    ///
    /// Exponents range over `0 ≤ k < h_u`; a height that is unknown at the cutoff
    /// only matters beyond it, so the counts are exact through `max_total`.
    pub fn pbw_census(&self, n: usize, max_total: u32) -> BTreeMap<Degree, u64> {
        let mut series: BTreeMap<Degree, u64> = BTreeMap::new();
        series.insert(vec![0; n], 1);
        for r in &self.records {
            let len = total_degree(&r.degree);
            let cap = match r.height {
                Height::Finite { value } => value - 1,
                _ => u32::MAX,
            };
            let mut next: BTreeMap<Degree, u64> = BTreeMap::new();
            for (d, c) in &series {
                let mut cur = d.clone();
                let mut k = 0u32;
                loop {
                    *next.entry(cur.clone()).or_insert(0) += c;
                    if k == cap || total_degree(&cur) + len > max_total {
                        break;
                    }
                    k += 1;
                    cur = add_degrees(&cur, &r.degree);
                }
            }
            series = next;
        }
        series
    }

    pub fn all_heights_finite(&self) -> bool {
        self.records.iter().all(|r| r.height.finite().is_some())
    }
}

fn height_of(
    basis: &NicholsBasis,
    hard: &[(Word, Degree, BElement)],
    u: &[u8],
    d: &[u32],
    value: &BElement,
    ord: Option<u32>,
) -> Result<(Height, bool), NicholsError> {
    let len = total_degree(d);
    // [u]^h lies in the span of products of hard letters greater than u
    let test = |h: u32| -> Result<bool, NicholsError> {
        let target: Degree = d.iter().map(|x| x * h).collect();
        if !basis.covers(len * h) {
            return Err(NicholsError::BeyondCutoff(len * h));
        }
        let power = basis.pow(value, h)?;
        let Some(v) = power.comps.get(&target) else {
            return Ok(true);
        };
        let gens: Vec<(Degree, Vector)> = hard
            .iter()
            .filter(|(w, dw, _)| w.as_slice() > u && dw.iter().zip(&target).all(|(a, b)| a <= b))
            .map(|(_, dw, val)| (dw.clone(), val.comps[dw].clone()))
            .collect();
        Ok(basis.product_span(&gens, &target)?.contains(v))
    };
    match ord {
        None => Ok((
            Height::Infinite {
                certificate: InfiniteKind::OrderInfinite,
            },
            false,
        )),
        Some(1) => {
            let mut h = 2;
            while len * h <= basis.cutoff() {
                if test(h)? {
                    return Ok((Height::Finite { value: h }, true));
                }
                h += 1;
            }
            Ok((
                Height::Infinite {
                    certificate: InfiniteKind::OrderOne,
                },
                true,
            ))
        }
        Some(t) => {
            if !basis.covers(len * t) {
                return Ok((Height::UnknownAtCutoff, false));
            }
            if test(t)? {
                Ok((Height::Finite { value: t }, false))
            } else {
                Ok((
                    Height::Infinite {
                        certificate: InfiniteKind::MInfinity,
                    },
                    false,
                ))
            }
        }
    }
}

/// Brute-force hardness: `[u]` against products of all Lyndon super-letters greater than `u`.
pub fn is_hard(basis: &NicholsBasis, u: &[u8]) -> Result<bool, NicholsError> {
    let n = basis.space().rank();
    let d = degree(u, n);
    let value = basis.super_letter(u)?;
    let Some(v) = value.comps.get(&d) else {
        return Ok(false);
    };
    let mut gens = Vec::new();
    for sub in sub_degrees(&d) {
        for l in lyndon_of_degree(&sub) {
            if l.as_slice() > u {
                let val = basis.super_letter(&l)?;
                if let Some(x) = val.comps.get(&sub) {
                    gens.push((sub.clone(), x.clone()));
                }
            }
        }
    }
    Ok(!basis.product_span(&gens, &d)?.contains(v))
}

/// Nonzero degrees `δ ≤ d` componentwise.
pub fn sub_degrees(d: &[u32]) -> Vec<Degree> {
    let mut out: Vec<Degree> = vec![vec![]];
    for &x in d {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=x).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out.retain(|p| p.iter().any(|&x| x > 0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{symmetrizer_kernel, Flavor};
    use crate::words::bracketing;

    fn space(order: u32, q: &[&[&str]]) -> Arc<BraidedSpace> {
        let rows: Vec<Vec<&str>> = q.iter().map(|r| r.to_vec()).collect();
        Arc::new(BraidedSpace::parse(order, &rows).unwrap())
    }

    fn mixed36() -> Arc<BraidedSpace> {
        space(6, &[&["z^2", "-z^2"], &["1", "-1"]])
    }

    #[test]
    fn rank_one_truncated_polynomial() {
        for m in 2..=7u32 {
            let s = space(m, &[&["z"]]);
            let b = NicholsBasis::build(&s, 12).unwrap();
            assert_eq!(b.hilbert(), vec![1; m as usize]);
            assert_eq!(b.dimension(), Some(m as usize));
        }
    }

    #[test]
    fn rank_one_q_minus_one_kills_square() {
        let s = space(2, &[&["-1"]]);
        let b = NicholsBasis::build(&s, 4).unwrap();
        assert!(b.nf_word(&[1, 1]).unwrap().is_zero());
    }

    #[test]
    fn mixed36_dimension_and_letters() {
        let s = mixed36();
        let b = NicholsBasis::build(&s, 12).unwrap();
        assert_eq!(b.dimension(), Some(36));
        let d = SuperLetters::compute(&b).unwrap();
        assert_eq!(d.words(), vec![vec![1], vec![1, 1, 2], vec![1, 2], vec![2]]);
        let heights: Vec<u32> = d.records.iter().map(|r| r.height.finite().unwrap()).collect();
        assert_eq!(heights, vec![3, 2, 3, 2]);
        let v = b.nf(&bracketing(&s, &[1, 1, 2], Flavor::Std)).unwrap();
        assert!(!v.is_zero());
        assert!(b.nf(&bracketing(&s, &[1, 2, 2], Flavor::Std)).unwrap().is_zero());
        assert_eq!(d.e_e_prime(&s), 6);
    }

    #[test]
    fn super_letter_matches_free_bracketing() {
        let s = mixed36();
        let b = NicholsBasis::build(&s, 8).unwrap();
        for u in crate::words::enumerate_lyndon(2, 6) {
            let direct = b.nf(&bracketing(&s, &u, Flavor::Std)).unwrap();
            assert_eq!(b.super_letter(&u).unwrap(), direct, "{u:?}");
        }
    }

    #[test]
    fn fast_hardness_matches_brute_force() {
        let s = mixed36();
        let b = NicholsBasis::build(&s, 12).unwrap();
        let d = SuperLetters::compute(&b).unwrap();
        let brute: Vec<Word> = crate::words::enumerate_lyndon(2, 10)
            .into_iter()
            .filter(|u| is_hard(&b, u).unwrap())
            .collect();
        assert_eq!(d.words(), brute);
    }

    #[test]
    fn kernel_matches_symmetrizer() {
        let s = mixed36();
        let b = NicholsBasis::build(&s, 6).unwrap();
        for d in [[1u32, 1], [2, 1], [2, 2], [3, 1], [3, 2], [2, 3]] {
            assert_eq!(b.kernel_echelon(&d).unwrap(), symmetrizer_kernel(&s, &d), "{d:?}");
        }
    }

    #[test]
    fn pbw_census_matches_hilbert() {
        let s = mixed36();
        let b = NicholsBasis::build(&s, 12).unwrap();
        let d = SuperLetters::compute(&b).unwrap();
        let census = d.pbw_census(2, 12);
        for (deg, c) in census {
            assert_eq!(c as usize, b.block_dim(&deg), "{deg:?}");
        }
    }
}
