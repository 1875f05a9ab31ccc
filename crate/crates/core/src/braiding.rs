//! Braided vector spaces of diagonal type.

use std::fmt;

use thiserror::Error;

use crate::scalar::{sqrt_root_of_unity, CycScalar, ParseError, ScalarError};

/// A degree in `N^n`; entry `i` counts occurrences of the letter `i + 1`.
pub type Degree = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidingError {
    #[error("braiding matrix must be square and nonempty")]
    Shape,
    #[error("braiding entry q[{0}][{1}] is zero")]
    ZeroEntry(usize, usize),
    #[error("braiding entry q[{row}][{col}]: {err}")]
    Parse { row: usize, col: usize, err: ParseError },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// `C(x_i ⊗ x_j) = q_ij x_j ⊗ x_i` on `V = span{x_1, …, x_n}`.
#[derive(Clone)]
pub struct BraidedSpace {
    order: u32,
    q: Vec<Vec<CycScalar>>,
    /// `q_ij = ζ_L^{exps[i][j]}` with `L = lcm(2, M)` when every entry is a root of unity.
    exps: Option<Vec<Vec<u32>>>,
}

impl BraidedSpace {
    pub fn new(order: u32, q: Vec<Vec<CycScalar>>) -> Result<BraidedSpace, BraidingError> {
        let n = q.len();
        if n == 0 || q.iter().any(|r| r.len() != n) {
            return Err(BraidingError::Shape);
        }
        let q: Vec<Vec<CycScalar>> = q
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| if x.order() == order { x } else { x.embed(order) })
                    .collect()
            })
            .collect();
        for (i, row) in q.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if x.is_zero() {
                    return Err(BraidingError::ZeroEntry(i, j));
                }
            }
        }
        let exps = q
            .iter()
            .map(|row| row.iter().map(CycScalar::unit_exponent).collect::<Option<Vec<u32>>>())
            .collect::<Option<Vec<_>>>();
        Ok(BraidedSpace { order, q, exps })
    }

    /// Parse a matrix of `z`-polynomials.
    pub fn parse<S: AsRef<str>>(order: u32, rows: &[Vec<S>]) -> Result<BraidedSpace, BraidingError> {
        let mut q = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (j, s) in row.iter().enumerate() {
                r.push(CycScalar::parse(order, s.as_ref()).map_err(|err| BraidingError::Parse { row: i, col: j, err })?);
            }
            q.push(r);
        }
        BraidedSpace::new(order, q)
    }

    pub fn rank(&self) -> usize {
        self.q.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `q_ij` with 0-based indices.
    pub fn q(&self, i: usize, j: usize) -> &CycScalar {
        &self.q[i][j]
    }

    pub fn matrix(&self) -> &[Vec<CycScalar>] {
        &self.q
    }

    pub fn is_root_of_unity_type(&self) -> bool {
        self.exps.is_some()
    }

    /// `χ(α, β) = Π q_ij^{α_i β_j}`.
    pub fn bicharacter(&self, a: &[u32], b: &[u32]) -> CycScalar {
        if let Some(e) = self.bicharacter_exp(a, b) {
            return CycScalar::unit(self.order, e as i64);
        }
        let mut acc = CycScalar::one(self.order);
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                let k = ai as i64 * bj as i64;
                if k != 0 {
                    acc = &acc * &self.q[i][j].pow(k);
                }
            }
        }
        acc
    }

    /// `χ(α, β) = ζ_L^e`; available when all entries are roots of unity.
    pub fn bicharacter_exp(&self, a: &[u32], b: &[u32]) -> Option<u32> {
        let exps = self.exps.as_ref()?;
        let l = self.unit_order() as u64;
        let mut e = 0u64;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                e += ai as u64 * bj as u64 * exps[i][j] as u64;
            }
        }
        Some((e % l) as u32)
    }

    /// Signed bicharacter for possibly negative degrees.
    pub fn bicharacter_signed(&self, a: &[i64], b: &[i64]) -> CycScalar {
        let mut acc = CycScalar::one(self.order);
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                let k = ai * bj;
                if k != 0 {
                    acc = &acc * &self.q[i][j].pow(k);
                }
            }
        }
        acc
    }

    /// `lcm(2, M)`.
    pub fn unit_order(&self) -> u32 {
        if self.order.is_multiple_of(2) {
            self.order
        } else {
            2 * self.order
        }
    }

    /// Exponent matrix over `Z/lcm(2,M)`, if every entry is a root of unity.
    pub fn exponents(&self) -> Option<&[Vec<u32>]> {
        self.exps.as_deref()
    }

    pub fn unit_vector(&self, i: usize) -> Degree {
        let mut d = vec![0; self.rank()];
        d[i] = 1;
        d
    }

    pub fn dynkin(&self) -> DynkinData {
        let n = self.rank();
        let vertex_labels = (0..n).map(|i| self.q[i][i].clone()).collect();
        let mut edge_labels = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let p = &self.q[i][j] * &self.q[j][i];
                if !p.is_one() {
                    edge_labels.push(((i, j), p));
                }
            }
        }
        DynkinData {
            vertex_labels,
            edge_labels,
        }
    }

    /// Components of the Dynkin graph, each sorted, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for w in 0..n {
                    if comp[w] == usize::MAX && w != v && !(&self.q[v][w] * &self.q[w][v]).is_one() {
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

    /// The braided subspace spanned by the given basis vectors.
    pub fn subspace(&self, indices: &[usize]) -> BraidedSpace {
        let q = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.q[i][j].clone()).collect())
            .collect();
        BraidedSpace::new(self.order, q).expect("subspace of a valid space")
    }

    /// The symmetric twist-equivalent space `q'_ij = sqrt(q_ij q_ji)`, `q'_ii = q_ii`.
    pub fn twist_symmetrize(&self) -> Result<BraidedSpace, BraidingError> {
        let n = self.rank();
        let mut roots = vec![vec![None; n]; n];
        let mut order = self.order;
        for i in 0..n {
            for j in i + 1..n {
                let r = sqrt_root_of_unity(&(&self.q[i][j] * &self.q[j][i]))?;
                order = crate::scalar::lcm_u32(order, r.order());
                roots[i][j] = Some(r);
            }
        }
        for i in 0..n {
            if !self.q[i][i].is_root_of_unity() {
                return Err(ScalarError::NotRootOfUnity(self.q[i][i].to_string()).into());
            }
        }
        let mut q = vec![Vec::with_capacity(n); n];
        for i in 0..n {
            for j in 0..n {
                let x = if i == j {
                    self.q[i][i].clone()
                } else {
                    let (a, b) = if i < j { (i, j) } else { (j, i) };
                    roots[a][b].clone().expect("filled above")
                };
                q[i].push(x.embed(order));
            }
        }
        BraidedSpace::new(order, q)
    }

    /// Cartan matrix with `q_ij q_ji = q_ii^{a_ij}`, if one exists and is of finite type.
    pub fn cartan_detect(&self) -> Option<Vec<Vec<i32>>> {
        let a = self.cartan_exponents()?;
        crate::cartan::classify(&a)?;
        Some(a)
    }

    /// The exponent matrix without the finite-type test.
    pub fn cartan_exponents(&self) -> Option<Vec<Vec<i32>>> {
        let n = self.rank();
        let mut a = vec![vec![0i32; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let p = &self.q[i][j] * &self.q[j][i];
                if p.is_one() {
                    continue;
                }
                let qi = &self.q[i][i];
                a[i][j] = (1..=3).find(|&k| qi.pow(-(k as i64)) == p).map(|k| -k)?;
            }
        }
        Some(a)
    }
}

impl fmt::Debug for BraidedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BraidedSpace(M={}, q=[", self.order)?;
        for (i, row) in self.q.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", cells.join(", "))?;
        }
        write!(f, "])")
    }
}

impl PartialEq for BraidedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

/// Generalized Dynkin diagram.
#[derive(Clone, Debug)]
pub struct DynkinData {
    pub vertex_labels: Vec<CycScalar>,
    /// `((i, j), q_ij q_ji)` for `i < j` with a nontrivial product.
    pub edge_labels: Vec<((usize, usize), CycScalar)>,
}

impl DynkinData {
    pub fn edge_count(&self) -> usize {
        self.edge_labels.len()
    }
}

pub fn total_degree(d: &[u32]) -> u32 {
    d.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixed36() -> BraidedSpace {
        BraidedSpace::parse(6, &[vec!["z^2", "-z^2"], vec!["1", "-1"]]).unwrap()
    }

    #[test]
    fn bicharacter_defining_cases() {
        let s = mixed36();
        assert_eq!(s.bicharacter(&[1, 0], &[0, 1]), *s.q(0, 1));
        assert_eq!(s.bicharacter(&[1, 1], &[1, 0]), s.q(0, 0) * s.q(1, 0));
        // χ(e1+e2, e1+e2) = ζ² for ζ = ζ_3 (here z^2 in Q(ζ_6))
        assert_eq!(s.bicharacter(&[1, 1], &[1, 1]), CycScalar::zeta_pow(3, 2));
    }

    #[test]
    fn bicharacter_slow_path_agrees() {
        let q = vec![
            vec![CycScalar::from_int(3, 2), CycScalar::zeta_pow(3, 1)],
            vec![CycScalar::one(3), CycScalar::from_int(3, -1)],
        ];
        let s = BraidedSpace::new(3, q).unwrap();
        assert!(!s.is_root_of_unity_type());
        let v = s.bicharacter(&[2, 1], &[1, 3]);
        let expect = CycScalar::from_int(3, 4) * CycScalar::zeta_pow(3, 6) * CycScalar::from_int(3, -1);
        assert_eq!(v, expect);
    }

    #[test]
    fn dynkin_of_mixed36() {
        let d = mixed36().dynkin();
        assert_eq!(d.vertex_labels[0], CycScalar::zeta_pow(3, 1));
        assert_eq!(d.vertex_labels[1], CycScalar::from_int(2, -1));
        assert_eq!(d.edge_count(), 1);
        assert_eq!(d.edge_labels[0].1, -CycScalar::zeta_pow(3, 1));
        assert_eq!(mixed36().connected_components(), vec![vec![0, 1]]);
    }

    #[test]
    fn components_split() {
        let s = BraidedSpace::parse(6, &[vec!["z^2", "-z^2", "1"], vec!["1", "-1", "1"], vec!["1", "1", "-1"]]).unwrap();
        assert_eq!(s.connected_components(), vec![vec![0, 1], vec![2]]);
        let d = BraidedSpace::parse(2, &[vec!["-1", "1"], vec!["1", "-1"]]).unwrap();
        assert_eq!(d.dynkin().edge_count(), 0);
        assert_eq!(d.connected_components(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn twist_symmetrize_example() {
        let s = BraidedSpace::parse(3, &[vec!["z", "z"], vec!["1", "z"]]).unwrap();
        let t = s.twist_symmetrize().unwrap();
        assert_eq!(t.order(), 6);
        assert_eq!(*t.q(0, 1), CycScalar::zeta_pow(6, 1));
        assert_eq!(t.q(0, 1), t.q(1, 0));
        assert_eq!(t.q(0, 1) * t.q(1, 0), s.q(0, 1) * s.q(1, 0));
        let tt = t.twist_symmetrize().unwrap();
        assert_eq!(tt.q(0, 1) * tt.q(1, 0), t.q(0, 1) * t.q(1, 0));
    }

    #[test]
    fn cartan_detection() {
        // A2 at q = ζ_5: q_12 q_21 = q^{-1}
        let a2 = BraidedSpace::parse(5, &[vec!["z", "z^4"], vec!["1", "z"]]).unwrap();
        assert_eq!(a2.cartan_detect(), Some(vec![vec![2, -1], vec![-1, 2]]));
        // G2: q11 = q, q22 = q^3, edge q^{-3}
        let g2 = BraidedSpace::parse(7, &[vec!["z", "z^4"], vec!["1", "z^3"]]).unwrap();
        assert_eq!(g2.cartan_detect(), Some(vec![vec![2, -3], vec![-1, 2]]));
        assert_eq!(mixed36().cartan_detect(), None);
    }
}
