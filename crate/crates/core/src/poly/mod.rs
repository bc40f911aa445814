//! Weighted multivariate polynomials over prime fields, Gröbner bases and
//! ideal operations.
//!
//! Terms are ordered by weighted degree first and then reverse
//! lexicographically (the monomial with the smaller exponent in the last
//! differing variable is larger). Elimination rings used internally for
//! intersections put one tag variable in a leading block.

mod groebner;
mod ideal;
mod parse;

pub use parse::scan_variables;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::arith::{Field, PrimeField};
use crate::error::{Error, Result};

pub use groebner::{groebner_basis, reduce};
pub use ideal::{
    bracket_power, frobenius_power, groebner, ideal_colon, ideal_member, normal_form, Ideal,
};

/// Variables, weights and characteristic shared by a family of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: PrimeField,
    names: Vec<String>,
    weights: Vec<u32>,
    elim: Option<usize>,
}

pub type RingRef = Arc<PolyRing>;

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PolyRing {
    pub fn new(p: u32, names: Vec<String>, weights: Vec<u32>) -> Result<RingRef> {
        let field = PrimeField::new(p)?;
        if names.len() != weights.len() {
            return Err(Error::Precondition(format!(
                "{} variable names but {} weights",
                names.len(),
                weights.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if !valid_name(name) {
                return Err(Error::Parse(format!("invalid variable name '{name}'")));
            }
            if names[..i].contains(name) {
                return Err(Error::Parse(format!("duplicate variable name '{name}'")));
            }
        }
        if let Some(i) = weights.iter().position(|&w| w == 0) {
            return Err(Error::Precondition(format!(
                "variable '{}' has weight 0; weights must be positive",
                names[i]
            )));
        }
        Ok(Arc::new(PolyRing {
            field,
            names,
            weights,
            elim: None,
        }))
    }

    /// Convenience constructor with all weights equal to 1.
    pub fn standard(p: u32, names: &[&str]) -> Result<RingRef> {
        PolyRing::new(
            p,
            names.iter().map(|s| s.to_string()).collect(),
            vec![1; names.len()],
        )
    }

    /// This ring with one more variable of weight 0 placed in an elimination
    /// block above everything else.
    pub(crate) fn with_tag(&self) -> RingRef {
        let mut names = self.names.clone();
        names.push("__tag".to_string());
        let mut weights = self.weights.clone();
        weights.push(0);
        Arc::new(PolyRing {
            field: self.field,
            names,
            weights,
            elim: Some(self.names.len()),
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn characteristic(&self) -> u32 {
        self.field.modulus()
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn monomial(&self, exps: Vec<u32>) -> Monomial {
        assert_eq!(exps.len(), self.nvars(), "exponent vector length");
        let degree = exps
            .iter()
            .zip(&self.weights)
            .map(|(&e, &w)| e as u64 * w as u64)
            .sum();
        let block = self.elim.map_or(0, |i| exps[i]);
        Monomial {
            block,
            degree,
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn one_monomial(&self) -> Monomial {
        self.monomial(vec![0; self.nvars()])
    }

    pub fn lcm(&self, a: &Monomial, b: &Monomial) -> Monomial {
        self.monomial(
            a.exps
                .iter()
                .zip(b.exps.iter())
                .map(|(x, y)| *x.max(y))
                .collect(),
        )
    }

    pub fn var(self: &Arc<Self>, i: usize) -> Polynomial {
        let mut exps = vec![0; self.nvars()];
        exps[i] = 1;
        Polynomial::from_monomial(self, self.monomial(exps), 1)
    }

    pub fn var_by_name(self: &Arc<Self>, name: &str) -> Result<Polynomial> {
        let i = self
            .var_index(name)
            .ok_or_else(|| Error::Parse(format!("unknown variable '{name}'")))?;
        Ok(self.var(i))
    }

    pub fn constant(self: &Arc<Self>, c: i64) -> Polynomial {
        let c = self.field.reduce(c);
        Polynomial::from_monomial(self, self.one_monomial(), c)
    }

    pub fn parse(self: &Arc<Self>, text: &str) -> Result<Polynomial> {
        parse::parse_polynomial(self, text)
    }

    /// Monomials `x^e` with `e` of the given weighted degree.
    pub fn monomials_of_degree(&self, degree: i64) -> Vec<Monomial> {
        crate::arith::weighted_monomials(&self.weights, degree)
            .into_iter()
            .map(|e| self.monomial(e))
            .collect()
    }
}

/// Exponent vector with its weighted degree cached.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    block: u32,
    degree: u64,
    exps: Box<[u32]>,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.block
            .cmp(&other.block)
            .then(self.degree.cmp(&other.degree))
            .then_with(|| {
                for (a, b) in self.exps.iter().zip(other.exps.iter()).rev() {
                    if a != b {
                        return b.cmp(a);
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            block: self.block + other.block,
            degree: self.degree + other.degree,
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial {
            block: self.block - other.block,
            degree: self.degree - other.degree,
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn pow(&self, n: u32) -> Monomial {
        Monomial {
            block: self.block * n,
            degree: self.degree * n as u64,
            exps: self.exps.iter().map(|e| e * n).collect(),
        }
    }

    pub fn display(&self, ring: &PolyRing) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    ring.names[i].clone()
                } else {
                    format!("{}^{}", ring.names[i], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Polynomial with coefficients in F_p; terms are stored in strictly
/// decreasing monomial order with nonzero coefficients.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: RingRef,
    terms: Vec<(Monomial, u32)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn from_monomial(ring: &RingRef, m: Monomial, c: u32) -> Self {
        let c = c % ring.characteristic();
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Collects arbitrary terms, combining repeats and dropping zeros.
    pub fn from_terms<I>(ring: &RingRef, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, u32)>,
    {
        let field = ring.field();
        let mut acc: HashMap<Monomial, u32> = HashMap::new();
        for (m, c) in terms {
            let e = acc.entry(m).or_insert(0);
            *e = field.add(e, &(c % field.modulus()));
        }
        let mut terms: Vec<(Monomial, u32)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub(crate) fn from_sorted_terms(ring: &RingRef, terms: Vec<(Monomial, u32)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading(&self) -> Option<&(Monomial, u32)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    /// Largest weighted degree among the terms; `None` for zero.
    pub fn degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(n, _)| n.degree == m.degree),
        }
    }

    /// Coefficient of `m` (0 when absent).
    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms
            .binary_search_by(|(n, _)| m.cmp(n))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    pub fn same_ring(&self, other: &Polynomial) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring
    }

    fn assert_same(&self, other: &Polynomial) {
        assert!(self.same_ring(other), "polynomials from different rings");
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.assert_same(other);
        let field = self.ring.field();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.0.cmp(&b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = field.add(&a.1, &b.1);
                    if c != 0 {
                        out.push((a.0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial::from_sorted_terms(&self.ring, out)
    }

    pub fn neg(&self) -> Polynomial {
        let field = self.ring.field();
        Polynomial::from_sorted_terms(
            &self.ring,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), field.neg(c)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let field = self.ring.field();
        let c = c % field.modulus();
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        Polynomial::from_sorted_terms(
            &self.ring,
            self.terms
                .iter()
                .map(|(m, a)| (m.clone(), field.mul(a, &c)))
                .collect(),
        )
    }

    pub fn mul_term(&self, m: &Monomial, c: u32) -> Polynomial {
        let field = self.ring.field();
        let c = c % field.modulus();
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        Polynomial::from_sorted_terms(
            &self.ring,
            self.terms
                .iter()
                .map(|(n, a)| (n.mul(m), field.mul(a, &c)))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.assert_same(other);
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let field = self.ring.field();
        let mut acc: HashMap<Monomial, u32> = HashMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = acc.entry(a.mul(b)).or_insert(0);
                *e = field.add(e, &field.mul(ca, cb));
            }
        }
        let mut terms: Vec<(Monomial, u32)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    pub fn pow(&self, mut n: u64) -> Polynomial {
        let mut base = self.clone();
        let mut acc = self.ring.constant(1);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `f^(p^e)` via the term map `c x^a -> c^(p^e) x^(p^e a)`.
    pub fn frobenius(&self, e: u32) -> Polynomial {
        let field = self.ring.field();
        let q = (self.ring.characteristic() as u64).pow(e);
        Polynomial::from_sorted_terms(
            &self.ring,
            self.terms
                .iter()
                .map(|(m, c)| (m.pow(q as u32), field.pow(c, q)))
                .collect(),
        )
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.ring.field().inv(c).expect("nonzero leading coefficient");
                self.scale(inv)
            }
        }
    }

    /// Exact quotient `self / h`, or `None` when `h` does not divide `self`.
    pub fn div_exact(&self, h: &Polynomial) -> Option<Polynomial> {
        self.assert_same(h);
        let (hm, hc) = h.leading()?.clone();
        let field = self.ring.field();
        let hinv = field.inv(&hc).expect("nonzero");
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.leading().cloned() {
            let q = m.div(&hm)?;
            let qc = field.mul(&c, &hinv);
            rem = rem.sub(&h.mul_term(&q, qc));
            quotient.push((q, qc));
        }
        Some(Polynomial::from_terms(&self.ring, quotient))
    }

    /// Re-expresses this polynomial in `target`, sending variable `i` to
    /// variable `var_map[i]`.
    pub fn embed(&self, target: &RingRef, var_map: &[usize]) -> Polynomial {
        assert_eq!(var_map.len(), self.ring.nvars());
        Polynomial::from_terms(
            target,
            self.terms.iter().map(|(m, c)| {
                let mut exps = vec![0; target.nvars()];
                for (i, &e) in m.exps.iter().enumerate() {
                    exps[var_map[i]] += e;
                }
                (target.monomial(exps), *c)
            }),
        )
    }

    /// Substitutes polynomials (all from one ring) for the variables.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.nvars());
        let target = images[0].ring().clone();
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = target.constant(*c as i64);
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e as u64));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.ring.field();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let s = field.signed(*c);
            let (neg, mag) = if s < 0 { (true, -s) } else { (false, s) };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{}", m.display(&self.ring))?;
            } else {
                write!(f, "{mag}*{}", m.display(&self.ring))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring3(p: u32) -> RingRef {
        PolyRing::standard(p, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn order_is_weighted_revlex() {
        let r = PolyRing::new(2, vec!["x".into(), "y".into(), "z".into()], vec![3, 2, 2]).unwrap();
        let x2 = r.monomial(vec![2, 0, 0]);
        let y3 = r.monomial(vec![0, 3, 0]);
        let z3 = r.monomial(vec![0, 0, 3]);
        assert!(x2 > y3 && y3 > z3);
        let y = r.monomial(vec![0, 1, 0]);
        let z = r.monomial(vec![0, 0, 1]);
        let x = r.monomial(vec![1, 0, 0]);
        assert!(x > y && y > z);
    }

    #[test]
    fn freshman_dream_in_char_two() {
        let r = ring3(2);
        let f = r.parse("x+y").unwrap();
        assert_eq!(f.frobenius(1), r.parse("x^2+y^2").unwrap());
        assert_eq!(f.pow(2), f.frobenius(1));
        assert_eq!(f.frobenius(0), f);
    }

    #[test]
    fn freshman_dream_char_seven() {
        let r = PolyRing::new(7, vec!["x".into(), "y".into(), "z".into()], vec![21, 14, 6]).unwrap();
        let f = r.parse("x^2+y^3+z^7").unwrap();
        assert_eq!(f.frobenius(1), r.parse("x^14+y^21+z^49").unwrap());
        assert_eq!(f.pow(7), f.frobenius(1));
    }

    #[test]
    fn exact_division() {
        let r = PolyRing::standard(3, &["a", "b", "c", "d"]).unwrap();
        let h = r.parse("a*d-b*c").unwrap();
        let h2 = h.mul(&h);
        assert_eq!(h2.div_exact(&h), Some(h.clone()));
        assert_eq!(h.div_exact(&r.parse("a").unwrap()), None);
    }

    #[test]
    fn display_uses_balanced_coefficients() {
        let r = ring3(7);
        let f = r.parse("z^7 - x^2 - 3*y^3 + 2").unwrap();
        assert_eq!(f.to_string(), "z^7-3*y^3-x^2+2");
    }
}
