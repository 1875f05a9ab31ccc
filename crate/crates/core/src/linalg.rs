//! Dense exact linear algebra over `Q(ζ_M)`.

use crate::scalar::CycScalar;

pub type Vector = Vec<CycScalar>;

pub fn zero_vector(order: u32, len: usize) -> Vector {
    vec![CycScalar::zero(order); len]
}

pub fn is_zero_vector(v: &[CycScalar]) -> bool {
    v.iter().all(CycScalar::is_zero)
}

/// `acc += c · v`.
pub fn axpy(acc: &mut [CycScalar], c: &CycScalar, v: &[CycScalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(c * x);
        }
    }
}

pub fn scale(v: &[CycScalar], c: &CycScalar) -> Vector {
    v.iter().map(|x| c * x).collect()
}

/// A linear map stored by columns: `cols[j]` is the image of the `j`-th input basis vector.
#[derive(Clone, Debug)]
pub struct ColMatrix {
    pub rows: usize,
    pub cols: Vec<Vector>,
}

impl ColMatrix {
    pub fn new(rows: usize) -> ColMatrix {
        ColMatrix { rows, cols: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn apply(&self, order: u32, x: &[CycScalar]) -> Vector {
        debug_assert_eq!(x.len(), self.cols.len());
        let mut out = zero_vector(order, self.rows);
        for (c, col) in x.iter().zip(&self.cols) {
            axpy(&mut out, c, col);
        }
        out
    }
}

/// Row space in fully reduced echelon form, built one vector at a time.
///
/// Every stored row has a leading 1 at its pivot and zeros at the pivots of all
/// other rows. When tracking is on, each row also remembers how it was formed
/// from the independent vectors inserted so far.
#[derive(Clone, Debug)]
pub struct Echelon {
    order: u32,
    width: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
    combos: Option<Vec<Vector>>,
    inserted: usize,
}

impl Echelon {
    pub fn new(order: u32, width: usize) -> Echelon {
        Echelon {
            order,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: None,
            inserted: 0,
        }
    }

    pub fn tracked(order: u32, width: usize) -> Echelon {
        let mut e = Echelon::new(order, width);
        e.combos = Some(Vec::new());
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    /// Subtract the row-space component; returns the residual and the row coefficients used.
    fn residual(&self, v: &[CycScalar]) -> (Vector, Vec<CycScalar>) {
        let mut r = v.to_vec();
        let coeffs: Vec<CycScalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if !c.is_zero() {
                axpy(&mut r, &(-c), row);
            }
        }
        (r, coeffs)
    }

    pub fn contains(&self, v: &[CycScalar]) -> bool {
        is_zero_vector(&self.residual(v).0)
    }

    /// Coordinates of `v` against the inserted independent vectors, if `v` is in the span.
    pub fn coordinates(&self, v: &[CycScalar]) -> Option<Vector> {
        let combos = self.combos.as_ref().expect("coordinates need a tracked echelon");
        let (r, coeffs) = self.residual(v);
        if !is_zero_vector(&r) {
            return None;
        }
        let mut out = zero_vector(self.order, self.inserted);
        for (c, combo) in coeffs.iter().zip(combos) {
            axpy(&mut out, c, combo);
        }
        Some(out)
    }

    /// Insert `v`; returns `true` when it enlarged the span.
    pub fn insert(&mut self, v: &[CycScalar]) -> bool {
        assert_eq!(v.len(), self.width);
        let (mut r, coeffs) = self.residual(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero pivot");
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let mut combo = None;
        if let Some(combos) = self.combos.as_mut() {
            let k = self.inserted;
            for c in combos.iter_mut() {
                c.push(CycScalar::zero(self.order));
            }
            let mut nc = zero_vector(self.order, k + 1);
            nc[k] = CycScalar::one(self.order);
            for (c, old) in coeffs.iter().zip(combos.iter()) {
                axpy(&mut nc, &(-c), old);
            }
            combo = Some(scale(&nc, &inv));
        }
        self.inserted += 1;
        // clear the new pivot column in existing rows
        for (i, row) in self.rows.iter_mut().enumerate() {
            let f = row[p].clone();
            if !f.is_zero() {
                axpy(row, &(-&f), &r);
                if let (Some(combos), Some(nc)) = (self.combos.as_mut(), combo.as_ref()) {
                    axpy(&mut combos[i], &(-&f), nc);
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        if let (Some(combos), Some(nc)) = (self.combos.as_mut(), combo) {
            combos.push(nc);
        }
        true
    }

    /// Rows sorted by pivot column.
    pub fn rref(&self) -> (Vec<usize>, Vec<Vector>) {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&i| self.pivots[i]);
        (
            idx.iter().map(|&i| self.pivots[i]).collect(),
            idx.iter().map(|&i| self.rows[i].clone()).collect(),
        )
    }

    /// Basis of `{x : row · x = 0 for every row}`: one vector per non-pivot column `f`,
    /// equal to `e_f - Σ_p R[p, f] e_p`.
    pub fn annihilator(&self) -> Vec<(usize, Vector)> {
        let (pivots, rows) = self.rref();
        let mut is_pivot = vec![false; self.width];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for f in 0..self.width {
            if is_pivot[f] {
                continue;
            }
            let mut v = zero_vector(self.order, self.width);
            v[f] = CycScalar::one(self.order);
            for (p, row) in pivots.iter().zip(&rows) {
                if !row[f].is_zero() {
                    v[*p] = -&row[f];
                }
            }
            out.push((f, v));
        }
        out
    }
}

/// Determinant of a square matrix given by rows, by Gaussian elimination.
pub fn determinant(order: u32, rows: &[Vector]) -> CycScalar {
    let n = rows.len();
    let mut m: Vec<Vector> = rows.to_vec();
    let mut det = CycScalar::one(order);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return CycScalar::zero(order);
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det = &det * &m[c][c];
        let inv = m[c][c].inv().expect("nonzero pivot");
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = -(&m[r][c] * &inv);
            let pivot_row = m[c].clone();
            axpy(&mut m[r], &f, &pivot_row);
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> CycScalar {
        CycScalar::from_int(3, v)
    }

    #[test]
    fn echelon_rank_and_coordinates() {
        let mut e = Echelon::tracked(3, 3);
        assert!(e.insert(&[s(1), s(2), s(3)]));
        assert!(e.insert(&[s(0), s(1), s(1)]));
        assert!(!e.insert(&[s(1), s(3), s(4)]));
        assert_eq!(e.rank(), 2);
        let c = e.coordinates(&[s(2), s(5), s(7)]).unwrap();
        assert_eq!(c, vec![s(2), s(1)]);
        assert!(e.coordinates(&[s(0), s(0), s(1)]).is_none());
    }

    #[test]
    fn annihilator_is_orthogonal() {
        let z = CycScalar::zeta_pow(3, 1);
        let mut e = Echelon::new(3, 4);
        e.insert(&[s(1), z.clone(), s(0), s(2)]);
        e.insert(&[s(0), s(1), -&z, s(1)]);
        let ker = e.annihilator();
        assert_eq!(ker.len(), 2);
        for (_, k) in &ker {
            for row in e.rows() {
                let mut acc = s(0);
                for (a, b) in row.iter().zip(k) {
                    acc += &(a * b);
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn determinant_small() {
        let m = vec![vec![s(2), s(1)], vec![s(4), s(3)]];
        assert_eq!(determinant(3, &m), s(2));
        let singular = vec![vec![s(1), s(2)], vec![s(2), s(4)]];
        assert!(determinant(3, &singular).is_zero());
        let swap = vec![vec![s(0), s(1)], vec![s(1), s(0)]];
        assert_eq!(determinant(3, &swap), s(-1));
    }
}
