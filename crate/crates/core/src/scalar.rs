//! Exact arithmetic in cyclotomic fields `Q(ζ_M)`.
//!
//! An element is stored in the power basis `1, ζ, …, ζ^{φ(M)-1}` modulo the
//! `M`-th cyclotomic polynomial. Coordinates share one positive denominator and
//! are kept in lowest terms, so equality of scalars of the same order is
//! coordinate-wise equality.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use malachite_base::num::arithmetic::traits::{DivExact, Gcd, Lcm, UnsignedAbs};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;
use malachite_q::Rational;
use thiserror::Error;

/// Largest cyclotomic order the field registry will construct.
pub const MAX_ORDER: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("the zero scalar has no multiplicative order")]
    ZeroOrder,
    #[error("{0} is not a root of unity")]
    NotRootOfUnity(String),
    #[error("cyclotomic order {0} is out of range (1..={MAX_ORDER})")]
    BadOrder(u32),
    #[error("bad coordinate list: {0}")]
    Coordinates(String),
}

/// Parse failure for the textual `z`-polynomial syntax. `column` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

/// Static data for one cyclotomic field.
#[derive(Debug)]
pub struct CyclotomicField {
    order: u32,
    degree: usize,
    /// Φ_M, low degree first, monic.
    modulus: Vec<i64>,
    /// `x^k mod Φ_M` for `k < max(order, 2·degree)`.
    powers: Vec<Vec<i64>>,
    /// `lcm(2, M)`: every root of unity in the field is a power of `ζ_{unit_order}`.
    unit_order: u32,
}

impl CyclotomicField {
    pub fn get(order: u32) -> Result<&'static CyclotomicField, ScalarError> {
        if order == 0 || order > MAX_ORDER {
            return Err(ScalarError::BadOrder(order));
        }
        static REGISTRY: OnceLock<Mutex<HashMap<u32, &'static CyclotomicField>>> = OnceLock::new();
        let registry = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = registry.lock().expect("field registry poisoned");
        Ok(*guard
            .entry(order)
            .or_insert_with(|| Box::leak(Box::new(CyclotomicField::build(order)))))
    }

    fn build(order: u32) -> CyclotomicField {
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let count = (order as usize).max(2 * degree);
        let mut powers = Vec::with_capacity(count);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        if degree == 0 {
            unreachable!("cyclotomic polynomials have positive degree");
        }
        for _ in 0..count {
            powers.push(cur.clone());
            // multiply by x and reduce by the monic modulus
            let top = cur[degree - 1];
            for j in (1..degree).rev() {
                cur[j] = cur[j - 1] - top * modulus[j];
            }
            cur[0] = -top * modulus[0];
        }
        let unit_order = if order.is_multiple_of(2) { order } else { 2 * order };
        CyclotomicField {
            order,
            degree,
            modulus,
            powers,
            unit_order,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// φ(M), the dimension over Q.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    /// `lcm(2, M)`.
    pub fn unit_order(&self) -> u32 {
        self.unit_order
    }

    fn power_coords(&self, k: u64) -> Vec<i64> {
        self.powers[(k % self.order as u64) as usize].clone()
    }

    /// Coordinates of `ζ_{lcm(2,M)}^e`.
    fn unit_coords(&self, e: i64) -> Vec<i64> {
        let l = self.unit_order as i64;
        let e = e.rem_euclid(l);
        if self.order.is_multiple_of(2) {
            self.power_coords(e as u64)
        } else {
            // ζ_{2M} = -ζ_M^{(M+1)/2}
            let m = self.order as i64;
            let k = (e * ((m + 1) / 2)).rem_euclid(m);
            let mut c = self.power_coords(k as u64);
            if e % 2 == 1 {
                for x in &mut c {
                    *x = -*x;
                }
            }
            c
        }
    }
}

/// Integer coefficients of Φ_n, low degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &div);
        }
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = num.len() - 1 - dn;
    let mut quot = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn] / den[dn];
        quot[k] = c;
        for j in 0..=dn {
            rem[k + j] -= c * den[j];
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    quot
}

pub fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a / gcd_u32(a, b) * b
}

/// An element of `Q(ζ_M)`.
#[derive(Clone)]
pub struct CycScalar {
    field: &'static CyclotomicField,
    num: Vec<Integer>,
    den: Integer,
}

impl CycScalar {
    pub fn zero(order: u32) -> CycScalar {
        let field = CyclotomicField::get(order).expect("valid cyclotomic order");
        CycScalar {
            field,
            num: vec![Integer::ZERO; field.degree],
            den: Integer::ONE,
        }
    }

    pub fn one(order: u32) -> CycScalar {
        CycScalar::from_int(order, 1)
    }

    pub fn from_int(order: u32, value: i64) -> CycScalar {
        let mut s = CycScalar::zero(order);
        s.num[0] = Integer::from(value);
        s
    }

    pub fn from_rational(order: u32, value: &Rational) -> CycScalar {
        let mut s = CycScalar::zero(order);
        s.num[0] = Integer::from(value.numerator_ref().clone());
        if *value < 0 {
            s.num[0] = -s.num[0].clone();
        }
        s.den = Integer::from(value.denominator_ref().clone());
        s
    }

    /// `ζ_M^k` for any integer `k`.
    pub fn zeta_pow(order: u32, k: i64) -> CycScalar {
        let field = CyclotomicField::get(order).expect("valid cyclotomic order");
        let k = k.rem_euclid(order as i64) as u64;
        CycScalar::from_small(field, &field.power_coords(k))
    }

    /// `ζ_{lcm(2,M)}^e` expressed in `Q(ζ_M)`.
    pub fn unit(order: u32, e: i64) -> CycScalar {
        let field = CyclotomicField::get(order).expect("valid cyclotomic order");
        CycScalar::from_small(field, &field.unit_coords(e))
    }

    /// Build from integer power-basis coordinates (any length; reduced mod Φ_M).
    pub fn from_coeffs(order: u32, coeffs: &[i64]) -> CycScalar {
        let field = CyclotomicField::get(order).expect("valid cyclotomic order");
        let mut acc = vec![Integer::ZERO; field.degree];
        for (k, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = field.power_coords(k as u64);
            for j in 0..field.degree {
                if p[j] != 0 {
                    acc[j] += Integer::from(c * p[j]);
                }
            }
        }
        CycScalar {
            field,
            num: acc,
            den: Integer::ONE,
        }
    }

    /// Build from group-ring coordinates: `Σ_e counts[e] · ζ_{lcm(2,M)}^e`.
    pub fn from_unit_counts(order: u32, counts: &[i64]) -> CycScalar {
        let field = CyclotomicField::get(order).expect("valid cyclotomic order");
        let mut acc = vec![0i64; field.degree];
        for (e, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = field.unit_coords(e as i64);
            for j in 0..field.degree {
                acc[j] += c * p[j];
            }
        }
        CycScalar::from_small(field, &acc)
    }

    fn from_small(field: &'static CyclotomicField, coords: &[i64]) -> CycScalar {
        CycScalar {
            field,
            num: coords.iter().map(|&c| Integer::from(c)).collect(),
            den: Integer::ONE,
        }
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.field
    }

    /// Rational power-basis coordinates.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::from_integers(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| *c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.den == 1 && self.num[0] == 1 && self.num[1..].iter().all(|c| *c == 0)
    }

    /// The value as a rational number, if it lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(|c| *c == 0) {
            Some(Rational::from_integers(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.is_zero() {
            self.den = Integer::ONE;
            return;
        }
        if self.den < 0 {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        if self.den == 1 {
            return;
        }
        let mut g: Natural = (&self.den).unsigned_abs();
        for c in &self.num {
            if g == 1 {
                return;
            }
            if *c != 0 {
                g = g.gcd(c.unsigned_abs());
            }
        }
        if g != 1 {
            let g = Integer::from(g);
            self.den = (&self.den).div_exact(&g);
            for c in &mut self.num {
                *c = (&*c).div_exact(&g);
            }
        }
    }

    /// Embed into `Q(ζ_target)`; `target` must be a multiple of the order.
    pub fn embed(&self, target: u32) -> CycScalar {
        assert!(
            target.is_multiple_of(self.field.order),
            "cannot embed order {} into order {}",
            self.field.order,
            target
        );
        if target == self.field.order {
            return self.clone();
        }
        let field = CyclotomicField::get(target).expect("valid cyclotomic order");
        let step = (target / self.field.order) as u64;
        let mut acc = vec![Integer::ZERO; field.degree];
        for (j, c) in self.num.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let p = field.power_coords(j as u64 * step);
            for t in 0..field.degree {
                if p[t] != 0 {
                    acc[t] += c * Integer::from(p[t]);
                }
            }
        }
        let mut out = CycScalar {
            field,
            num: acc,
            den: self.den.clone(),
        };
        out.normalize();
        out
    }

    fn aligned<'a>(a: &'a CycScalar, b: &'a CycScalar) -> (std::borrow::Cow<'a, CycScalar>, std::borrow::Cow<'a, CycScalar>) {
        use std::borrow::Cow;
        if a.field.order == b.field.order {
            (Cow::Borrowed(a), Cow::Borrowed(b))
        } else {
            let l = lcm_u32(a.field.order, b.field.order);
            (Cow::Owned(a.embed(l)), Cow::Owned(b.embed(l)))
        }
    }

    fn add_impl(a: &CycScalar, b: &CycScalar, negate_b: bool) -> CycScalar {
        let (a, b) = CycScalar::aligned(a, b);
        let (a, b) = (a.as_ref(), b.as_ref());
        if b.is_zero() {
            return a.clone();
        }
        if a.is_zero() {
            return if negate_b { -b } else { b.clone() };
        }
        let mut out = if a.den == b.den {
            let num = a
                .num
                .iter()
                .zip(&b.num)
                .map(|(x, y)| if negate_b { x - y } else { x + y })
                .collect();
            CycScalar {
                field: a.field,
                num,
                den: a.den.clone(),
            }
        } else {
            let l = Integer::from((&a.den).unsigned_abs().lcm((&b.den).unsigned_abs()));
            let fa = (&l).div_exact(&a.den);
            let fb = (&l).div_exact(&b.den);
            let num = a
                .num
                .iter()
                .zip(&b.num)
                .map(|(x, y)| {
                    let ya = y * &fb;
                    let xa = x * &fa;
                    if negate_b {
                        xa - ya
                    } else {
                        xa + ya
                    }
                })
                .collect();
            CycScalar {
                field: a.field,
                num,
                den: l,
            }
        };
        out.normalize();
        out
    }

    fn mul_impl(a: &CycScalar, b: &CycScalar) -> CycScalar {
        let (a, b) = CycScalar::aligned(a, b);
        let (a, b) = (a.as_ref(), b.as_ref());
        let field = a.field;
        if a.is_zero() || b.is_zero() {
            return CycScalar::zero(field.order);
        }
        let num = mul_coords(field, &a.num, &b.num);
        let mut out = CycScalar {
            field,
            num,
            den: &a.den * &b.den,
        };
        out.normalize();
        out
    }

    pub fn inv(&self) -> Result<CycScalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let field = self.field;
        let d = field.degree;
        if self.num[1..].iter().all(|c| *c == 0) {
            let mut out = CycScalar::zero(field.order);
            out.num[0] = self.den.clone();
            out.den = self.num[0].clone();
            out.normalize();
            return Ok(out);
        }
        // Solve (num · y) = 1 for y; columns of the system are num·x^j.
        let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::ZERO; d + 1]; d];
        for j in 0..d {
            let mut xj = vec![Integer::ZERO; d];
            xj[j] = Integer::ONE;
            let col = mul_coords(field, &self.num, &xj);
            for (i, c) in col.into_iter().enumerate() {
                rows[i][j] = Rational::from(c);
            }
        }
        rows[0][d] = Rational::ONE;
        let sol = solve_square(rows).ok_or(ScalarError::DivisionByZero)?;
        // y = num^{-1}; self^{-1} = den · y
        let den_r = Rational::from(self.den.clone());
        let coords: Vec<Rational> = sol.into_iter().map(|y| y * &den_r).collect();
        Ok(CycScalar::from_rational_coords(field.order, &coords))
    }

    pub fn from_rational_coords(order: u32, coords: &[Rational]) -> CycScalar {
        let field = CyclotomicField::get(order).expect("valid cyclotomic order");
        assert_eq!(coords.len(), field.degree);
        let mut l = Natural::ONE;
        for c in coords {
            l = l.lcm(c.denominator_ref());
        }
        let li = Integer::from(l.clone());
        let num = coords
            .iter()
            .map(|c| {
                let scale = Integer::from((&l).div_exact(c.denominator_ref()));
                let n = Integer::from(c.numerator_ref().clone()) * scale;
                if *c < 0 {
                    -n
                } else {
                    n
                }
            })
            .collect();
        let mut out = CycScalar { field, num, den: li };
        out.normalize();
        out
    }

    /// Power-basis coordinates as rational strings; empty for zero.
    pub fn to_coord_strings(&self) -> Vec<String> {
        if self.is_zero() {
            return Vec::new();
        }
        self.coeffs().iter().map(|c| c.to_string()).collect()
    }

    pub fn from_coord_strings(order: u32, coords: &[String]) -> Result<CycScalar, ScalarError> {
        let field = CyclotomicField::get(order)?;
        if coords.is_empty() {
            return Ok(CycScalar::zero(order));
        }
        if coords.len() != field.degree {
            return Err(ScalarError::Coordinates(format!(
                "{} entries for degree {}",
                coords.len(),
                field.degree
            )));
        }
        let parsed: Result<Vec<Rational>, _> = coords
            .iter()
            .map(|c| c.parse::<Rational>().map_err(|_| ScalarError::Coordinates(c.clone())))
            .collect();
        Ok(CycScalar::from_rational_coords(order, &parsed?))
    }

    pub fn checked_div(&self, other: &CycScalar) -> Result<CycScalar, ScalarError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, exp: i64) -> CycScalar {
        if exp < 0 {
            return self.inv().expect("negative power of zero").pow(-exp);
        }
        let mut base = self.clone();
        let mut acc = CycScalar::one(self.field.order);
        let mut e = exp as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Least `k ≥ 1` with `self^k = 1`, or `None` when `self` is not a root of unity.
    pub fn mult_order(&self) -> Result<Option<u32>, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::ZeroOrder);
        }
        let bound = self.field.unit_order;
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_one() {
                return Ok(Some(k));
            }
            acc = &acc * self;
        }
        Ok(None)
    }

    /// `Some(e)` with `self = ζ_{lcm(2,M)}^e`, `0 ≤ e < lcm(2,M)`.
    pub fn unit_exponent(&self) -> Option<u32> {
        if self.den != 1 {
            return None;
        }
        let field = self.field;
        (0..field.unit_order).find(|&e| {
            let c = field.unit_coords(e as i64);
            c.iter().zip(&self.num).all(|(x, y)| *y == *x)
        })
    }

    pub fn is_root_of_unity(&self) -> bool {
        self.unit_exponent().is_some()
    }

    /// `self · t` for a small integer `t`.
    pub fn mul_int(&self, t: i64) -> CycScalar {
        let t = Integer::from(t);
        let mut out = CycScalar {
            field: self.field,
            num: self.num.iter().map(|c| c * &t).collect(),
            den: self.den.clone(),
        };
        out.normalize();
        out
    }

    /// Parse a `z`-polynomial, `z` standing for `ζ_order`.
    pub fn parse(order: u32, text: &str) -> Result<CycScalar, ParseError> {
        CyclotomicField::get(order).map_err(|e| ParseError {
            column: 1,
            message: e.to_string(),
        })?;
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            order,
        };
        p.skip_ws();
        if p.pos == p.src.len() {
            return Err(p.error("empty expression"));
        }
        let value = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(value)
    }
}

fn mul_coords(field: &CyclotomicField, a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let d = field.degree;
    let mut prod = vec![Integer::ZERO; 2 * d - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if *y == 0 {
                continue;
            }
            prod[i + j] += x * y;
        }
    }
    let mut out: Vec<Integer> = prod.drain(..d).collect();
    for (k, c) in prod.into_iter().enumerate() {
        if c == 0 {
            continue;
        }
        let p = &field.powers[k + d];
        for j in 0..d {
            if p[j] != 0 {
                out[j] += &c * Integer::from(p[j]);
            }
        }
    }
    out
}

/// Gaussian elimination on an augmented `d × (d+1)` system.
fn solve_square(mut rows: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let d = rows.len();
    for col in 0..d {
        let piv = (col..d).find(|&r| rows[r][col] != 0)?;
        rows.swap(col, piv);
        let inv = Rational::ONE / &rows[col][col];
        for x in rows[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..d {
            if r != col && rows[r][col] != 0 {
                let f = rows[r][col].clone();
                for c in col..=d {
                    let t = &f * &rows[col][c];
                    rows[r][c] -= t;
                }
            }
        }
    }
    Some(rows.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.field.order == other.field.order {
            self.den == other.den && self.num == other.num
        } else {
            let (a, b) = CycScalar::aligned(self, other);
            a.den == b.den && a.num == b.num
        }
    }
}

impl Eq for CycScalar {}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (ζ_{})", self, self.field.order)
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.num.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let r = Rational::from_integers(c.clone(), self.den.clone());
            let neg = r < 0;
            let mag = if neg { -r } else { r };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = mag == 1;
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &CycScalar) -> CycScalar {
                $body(self, rhs)
            }
        }
        impl $trait<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: CycScalar) -> CycScalar {
                $body(&self, &rhs)
            }
        }
        impl $trait<&CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &CycScalar) -> CycScalar {
                $body(&self, rhs)
            }
        }
        impl $trait<CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: CycScalar) -> CycScalar {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| CycScalar::add_impl(a, b, false));
binop!(Sub, sub, |a, b| CycScalar::add_impl(a, b, true));
binop!(Mul, mul, CycScalar::mul_impl);
binop!(Div, div, |a: &CycScalar, b: &CycScalar| a.checked_div(b).expect("division by zero"));

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            field: self.field,
            num: self.num.iter().map(|c| -c.clone()).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(mut self) -> CycScalar {
        for c in &mut self.num {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        *self = CycScalar::add_impl(self, rhs, false);
    }
}

impl SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, rhs: &CycScalar) {
        *self = CycScalar::add_impl(self, rhs, true);
    }
}

impl MulAssign<&CycScalar> for CycScalar {
    fn mul_assign(&mut self, rhs: &CycScalar) {
        *self = CycScalar::mul_impl(self, rhs);
    }
}

/// `(k)_q = 1 + q + … + q^{k-1}`.
pub fn q_int(k: u32, q: &CycScalar) -> CycScalar {
    let mut acc = CycScalar::zero(q.order());
    let mut p = CycScalar::one(q.order());
    for _ in 0..k {
        acc += &p;
        p = &p * q;
    }
    acc
}

/// `(k)_q! = (1)_q (2)_q ⋯ (k)_q`, with `(0)_q! = 1`.
pub fn q_factorial(k: u32, q: &CycScalar) -> CycScalar {
    let mut acc = CycScalar::one(q.order());
    for t in 1..=k {
        acc = &acc * &q_int(t, q);
    }
    acc
}

/// The canonical square root of a root of unity: `ζ_M^k ↦ ζ_{2M}^k`.
///
/// For odd `M` the field also contains `-ζ_M^k = ζ_{2M}^j` with odd `j`; those
/// map to `ζ_{4M}^j`.
pub fn sqrt_root_of_unity(a: &CycScalar) -> Result<CycScalar, ScalarError> {
    let m = a.order();
    if let Some(k) = (0..m).find(|&k| *a == CycScalar::zeta_pow(m, k as i64)) {
        return Ok(CycScalar::zeta_pow(2 * m, k as i64));
    }
    if m % 2 == 1 {
        let wide = a.embed(2 * m);
        if let Some(j) = (0..2 * m).find(|&j| wide == CycScalar::zeta_pow(2 * m, j as i64)) {
            return Ok(CycScalar::zeta_pow(4 * m, j as i64));
        }
    }
    Err(ScalarError::NotRootOfUnity(a.to_string()))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    order: u32,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError {
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<CycScalar, ParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<CycScalar, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc * self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.power()?;
                    acc = acc.checked_div(&d).map_err(|_| ParseError {
                        column: at + 1,
                        message: "division by zero".into(),
                    })?;
                }
                // implicit product such as `2z` or `3(z+1)`
                Some(b'z') | Some(b'(') => acc = acc * self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<CycScalar, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let neg = if self.src.get(self.pos) == Some(&b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let at = self.pos;
            let e = self.integer()?;
            let e = i64::try_from(&e).map_err(|_| ParseError {
                column: at + 1,
                message: "exponent too large".into(),
            })?;
            if neg && base.is_zero() {
                return Err(ParseError {
                    column: at + 1,
                    message: "negative power of zero".into(),
                });
            }
            return Ok(base.pow(if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<CycScalar, ParseError> {
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                Ok(CycScalar::zeta_pow(self.order, 1))
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                let mut s = CycScalar::zero(self.order);
                s.num[0] = v;
                Ok(s)
            }
            Some(_) => Err(self.error("expected a number, 'z' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<Integer, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        s.parse::<Integer>().map_err(|_| ParseError {
            column: start + 1,
            message: "bad integer".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u32) -> CycScalar {
        CycScalar::zeta_pow(m, 1)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(30).len() - 1, 8);
    }

    #[test]
    fn minimal_polynomial_of_zeta3_vanishes() {
        let s = CycScalar::one(3) + z(3) + z(3).pow(2);
        assert!(s.is_zero());
    }

    #[test]
    fn zeta12_cubed_squared_is_minus_one() {
        let a = z(12).pow(3);
        assert_eq!(&a * &a, CycScalar::from_int(12, -1));
    }

    #[test]
    fn minus_zeta3_has_order_six() {
        let a = -z(3);
        assert!((&a * &a.pow(5)).is_one());
        // brute force: no smaller power is 1
        for k in 1..6 {
            assert!(!a.pow(k).is_one());
        }
        assert_eq!(a.mult_order().unwrap(), Some(6));
    }

    #[test]
    fn mult_order_examples() {
        assert_eq!(CycScalar::from_int(7, -1).mult_order().unwrap(), Some(2));
        assert_eq!(z(3).mult_order().unwrap(), Some(3));
        assert_eq!(CycScalar::from_int(3, 2).mult_order().unwrap(), None);
        assert_eq!(CycScalar::zero(3).mult_order(), Err(ScalarError::ZeroOrder));
    }

    #[test]
    fn q_factorial_examples() {
        let m1 = CycScalar::from_int(4, -1);
        assert!(q_factorial(2, &m1).is_zero());
        assert!(q_int(3, &z(3)).is_zero());
        // (1)(1+i)(1+i+i^2) = (1+i)·i = i - 1 ... expand directly
        let i = z(4);
        let expect = (CycScalar::one(4) + &i) * (CycScalar::one(4) + &i + i.pow(2));
        assert_eq!(q_factorial(3, &i), expect);
        // (1+i)·i = i - 1
        assert_eq!(q_factorial(3, &i), &i - &CycScalar::one(4));
        assert_eq!(q_factorial(0, &i), CycScalar::one(4));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(sqrt_root_of_unity(&CycScalar::one(5)).unwrap(), CycScalar::one(10));
        let r = sqrt_root_of_unity(&z(3).pow(2)).unwrap();
        assert_eq!(r.order(), 6);
        assert_eq!(r, z(6).pow(2));
        let r = sqrt_root_of_unity(&CycScalar::from_int(2, -1)).unwrap();
        assert_eq!(r, z(4));
        assert!(sqrt_root_of_unity(&CycScalar::from_int(4, 2)).is_err());
        // -1 in an odd-order field
        let r = sqrt_root_of_unity(&CycScalar::from_int(3, -1)).unwrap();
        assert_eq!(&r * &r, CycScalar::from_int(3, -1));
    }

    #[test]
    fn division_and_inverse() {
        let a = CycScalar::parse(12, "z^3 + 2z - 1/3").unwrap();
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert_eq!(CycScalar::zero(5).inv(), Err(ScalarError::DivisionByZero));
        let q = CycScalar::from_int(1, 3);
        assert_eq!(q.inv().unwrap().to_string(), "1/3");
    }

    #[test]
    fn cross_order_arithmetic_embeds() {
        let a = z(3);
        let b = z(4);
        let c = &a * &b;
        assert_eq!(c.order(), 12);
        assert_eq!(c, z(12).pow(7));
        assert_eq!(z(3), z(6).pow(2));
        assert_ne!(z(3), z(6));
    }

    #[test]
    fn parse_and_display() {
        let s = CycScalar::parse(6, "-z^2").unwrap();
        assert_eq!(s, -z(6).pow(2));
        assert_eq!(s.to_string(), "-z + 1");
        let t = CycScalar::parse(12, "z^4 + z").unwrap();
        assert_eq!(t.to_string(), "z^2 + z - 1");
        let back = CycScalar::parse(12, &t.to_string()).unwrap();
        assert_eq!(back, t);
        assert_eq!(CycScalar::parse(5, "1").unwrap().to_string(), "1");
        assert_eq!(CycScalar::parse(5, "z^-1").unwrap(), z(5).pow(4));
        assert_eq!(CycScalar::parse(7, "1/2*z^3 - 3/4").unwrap().to_string(), "1/2*z^3 - 3/4");
    }

    #[test]
    fn parse_errors_carry_columns() {
        let e = CycScalar::parse(6, "z^").unwrap_err();
        assert_eq!(e.column, 3);
        assert!(CycScalar::parse(6, "").is_err());
        assert!(CycScalar::parse(6, "z +").is_err());
        assert_eq!(CycScalar::parse(6, "1 $").unwrap_err().column, 3);
        assert!(CycScalar::parse(6, "(z").is_err());
        assert!(CycScalar::parse(6, "1/0").is_err());
    }

    #[test]
    fn unit_exponent_in_odd_field() {
        let m1 = CycScalar::from_int(3, -1);
        assert_eq!(m1.unit_exponent(), Some(3));
        assert_eq!(CycScalar::unit(3, 3), m1);
        assert_eq!(CycScalar::unit(3, 2), z(3));
        assert_eq!(CycScalar::unit(5, 7).pow(10), CycScalar::one(5));
    }
}
