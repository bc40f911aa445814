//! Exact scalars (prime fields, rationals) and dense linear algebra over them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Rational scalars are arbitrary-precision and always kept in lowest terms
/// with a positive denominator.
pub type RationalScalar = BigRational;

/// Largest accepted prime modulus (exclusive).
pub const MAX_MODULUS: u32 = 1 << 16;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Operations of an exact field. Elements are plain values; the field object
/// carries whatever context (the modulus) the arithmetic needs.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Parses an integer or (over Q) a fraction `s/t`.
    fn parse_elem(&self, s: &str) -> Option<Self::Elem>;
    /// 0 for the rationals.
    fn characteristic(&self) -> u32;

    /// Human-facing rendering; prime fields use balanced residues.
    fn display_elem(&self, a: &Self::Elem) -> String {
        a.to_string()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// The prime field F_p with elements stored as residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::Precondition(format!(
                "modulus {p} exceeds the supported bound {MAX_MODULUS}"
            )));
        }
        if !is_prime(p) {
            return Err(Error::Precondition(format!("modulus {p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn reduce(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// Balanced representative in `(-p/2, p/2]`.
    pub fn signed(&self, a: u32) -> i64 {
        if a as u64 * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.p as u64 - *b as u64) % self.p as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        Some(self.pow(a, self.p as u64 - 2))
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn from_i64(&self, n: i64) -> u32 {
        self.reduce(n)
    }
    fn parse_elem(&self, s: &str) -> Option<u32> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = self.reduce(n.trim().parse::<i64>().ok()?);
            let d = self.reduce(d.trim().parse::<i64>().ok()?);
            return self.div(&n, &d);
        }
        s.parse::<i64>().ok().map(|n| self.reduce(n))
    }
    fn characteristic(&self) -> u32 {
        self.p
    }
    fn display_elem(&self, a: &u32) -> String {
        self.signed(*a).to_string()
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn parse_elem(&self, s: &str) -> Option<BigRational> {
        parse_rational(s)
    }
    fn characteristic(&self) -> u32 {
        0
    }
}

/// Parses `n` or `s/t` into a reduced rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Greatest integer not exceeding `q`.
pub fn floor_rational(q: &BigRational) -> BigInt {
    q.floor().to_integer()
}

pub fn rational_is_negative(q: &BigRational) -> bool {
    q.is_negative()
}

/// A self-describing element of F_p: carries its modulus so that mixing
/// elements of different fields is caught at runtime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeFieldScalar {
    value: u32,
    modulus: u32,
}

impl PrimeFieldScalar {
    pub fn new(value: i64, modulus: u32) -> Result<Self> {
        let field = PrimeField::new(modulus)?;
        Ok(PrimeFieldScalar {
            value: field.reduce(value),
            modulus,
        })
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    fn field(&self) -> PrimeField {
        PrimeField { p: self.modulus }
    }

    fn check(&self, other: &Self) -> Result<PrimeField> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(self.field())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let f = self.check(other)?;
        Ok(PrimeFieldScalar {
            value: f.add(&self.value, &other.value),
            modulus: self.modulus,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let f = self.check(other)?;
        Ok(PrimeFieldScalar {
            value: f.sub(&self.value, &other.value),
            modulus: self.modulus,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let f = self.check(other)?;
        Ok(PrimeFieldScalar {
            value: f.mul(&self.value, &other.value),
            modulus: self.modulus,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        let value = self.field().inv(&self.value).ok_or(Error::ZeroInverse)?;
        Ok(PrimeFieldScalar {
            value,
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for PrimeFieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Precondition(format!(
                    "matrix row {i} has length {} but expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<E>], zero: E) -> Self {
        let mut m = Matrix::filled(rows, columns.len(), zero);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Matrix times column vector.
pub fn mat_vec<F: Field>(field: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(m.cols(), v.len());
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v)
                .fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
        })
        .collect()
}

/// Brings `m` to reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(field: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| !field.is_zero(m.get(i, c))) else {
            continue;
        };
        m.swap_rows(r, pr);
        let inv = field.inv(m.get(r, c)).expect("pivot is nonzero");
        for j in c..m.cols {
            let v = field.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r || field.is_zero(m.get(i, c)) {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in c..m.cols {
                let v = field.sub(m.get(i, j), &field.mul(&factor, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    let mut work = m.clone();
    rref(field, &mut work).len()
}

/// Basis of the right null space `{k : M k = 0}`. Each vector is scaled so
/// that its first nonzero entry is 1.
pub fn kernel_basis<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut work = m.clone();
    let pivots = rref(field, &mut work);
    let mut is_pivot = vec![None; m.cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| is_pivot[c].is_none()) {
        let mut v = vec![field.zero(); m.cols];
        v[free] = field.one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = field.neg(work.get(r, free));
        }
        normalize_leading(field, &mut v);
        basis.push(v);
    }
    basis
}

/// Scales `v` so its first nonzero entry is 1; leaves the zero vector alone.
pub fn normalize_leading<F: Field>(field: &F, v: &mut [F::Elem]) {
    if let Some(lead) = v.iter().find(|x| !field.is_zero(x)).cloned() {
        let inv = field.inv(&lead).expect("nonzero");
        for x in v.iter_mut() {
            *x = field.mul(x, &inv);
        }
    }
}

/// Incremental span over a field: keeps an echelon basis and reports whether
/// new vectors enlarge it.
#[derive(Clone, Debug)]
pub struct SpanBuilder<F: Field> {
    field: F,
    len: usize,
    // (pivot column, row normalized so pivot = 1)
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> SpanBuilder<F> {
    pub fn new(field: F, len: usize) -> Self {
        SpanBuilder {
            field,
            len,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (pc, row) in &self.rows {
            if f.is_zero(&v[*pc]) {
                continue;
            }
            let factor = v[*pc].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x = f.sub(x, &f.mul(&factor, r));
            }
        }
        v
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.len);
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v`; returns true when it was independent of the current span.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.len);
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|x| !self.field.is_zero(x)) else {
            return false;
        };
        normalize_leading(&self.field, &mut r);
        let f = &self.field;
        for (_, row) in self.rows.iter_mut() {
            if f.is_zero(&row[pc]) {
                continue;
            }
            let factor = row[pc].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                *x = f.sub(x, &f.mul(&factor, y));
            }
        }
        self.rows.push((pc, r));
        true
    }
}

/// All exponent vectors `e` with `sum e_i w_i = degree`, in lexicographic order
/// (largest first exponent first).
pub fn weighted_monomials(weights: &[u32], degree: i64) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if degree < 0 || weights.contains(&0) {
        return out;
    }
    let mut current = vec![0u32; weights.len()];
    fill_monomials(weights, 0, degree as u64, &mut current, &mut out);
    out
}

fn fill_monomials(
    weights: &[u32],
    idx: usize,
    remaining: u64,
    current: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if idx == weights.len() {
        if remaining == 0 {
            out.push(current.clone());
        }
        return;
    }
    let w = weights[idx] as u64;
    let max = remaining / w;
    for e in (0..=max).rev() {
        current[idx] = e as u32;
        fill_monomials(weights, idx + 1, remaining - e * w, current, out);
    }
    current[idx] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_mod_seven() {
        let three = PrimeFieldScalar::new(3, 7).unwrap();
        assert_eq!(three.inverse().unwrap().value(), 5);
    }

    #[test]
    fn one_plus_one_in_char_two() {
        let one = PrimeFieldScalar::new(1, 2).unwrap();
        assert_eq!(one.add(&one).unwrap().value(), 0);
    }

    #[test]
    fn zero_has_no_inverse() {
        let zero = PrimeFieldScalar::new(0, 5).unwrap();
        assert!(matches!(zero.inverse(), Err(Error::ZeroInverse)));
    }

    #[test]
    fn mismatched_moduli() {
        let a = PrimeFieldScalar::new(1, 5).unwrap();
        let b = PrimeFieldScalar::new(1, 7).unwrap();
        assert!(matches!(a.add(&b), Err(Error::ModulusMismatch(5, 7))));
    }

    #[test]
    fn rejects_composite_and_large_moduli() {
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(65537).is_err());
        assert!(PrimeField::new(65521).is_ok());
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_rows(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(kernel_basis(&f, &m).is_empty());
    }

    #[test]
    fn kernel_of_ones_over_f2() {
        let f = PrimeField::new(2).unwrap();
        let m = Matrix::from_rows(2, vec![vec![1, 1]]).unwrap();
        assert_eq!(kernel_basis(&f, &m), vec![vec![1, 1]]);
    }

    #[test]
    fn rational_kernel_multiplies_back_to_zero() {
        let q = RationalField;
        let r = |n: i64| q.from_i64(n);
        let m = Matrix::from_rows(3, vec![vec![r(1), r(2), r(3)], vec![r(4), r(5), r(6)]]).unwrap();
        let k = kernel_basis(&q, &m);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&q, &m, &k[0]).iter().all(|x| x.is_zero()));
        assert!(q.is_one(&k[0][0]));
    }

    #[test]
    fn weighted_monomial_examples() {
        assert_eq!(
            weighted_monomials(&[21, 14, 6], 42),
            vec![vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 7]]
        );
        assert!(weighted_monomials(&[5, 4, 4], 7).is_empty());
        assert_eq!(
            weighted_monomials(&[1, 1], 2),
            vec![vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        assert_eq!(weighted_monomials(&[3, 2], 0), vec![vec![0, 0]]);
        assert!(weighted_monomials(&[3, 2], -1).is_empty());
    }

    #[test]
    fn span_builder_tracks_rank() {
        let f = PrimeField::new(3).unwrap();
        let mut s = SpanBuilder::new(f, 3);
        assert!(s.insert(&[1, 2, 0]));
        assert!(!s.insert(&[2, 1, 0]));
        assert!(s.insert(&[0, 0, 1]));
        assert!(s.contains(&[1, 2, 2]));
        assert!(!s.contains(&[0, 1, 0]));
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn parse_and_floor_rationals() {
        let q = parse_rational("-6/7").unwrap();
        assert_eq!(floor_rational(&q), BigInt::from(-1));
        assert_eq!(format_rational(&parse_rational("4/2").unwrap()), "2");
        assert!(parse_rational("1/0").is_none());
    }
}
