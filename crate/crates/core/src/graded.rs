//! Graded ring presentations and their Hilbert functions.
//!
//! Hilbert series of complete intersections are kept in closed rational form
//! `prod (1 - t^{deg f_j}) / prod (1 - t^{w_i})` and expanded only on
//! explicit windows. Rings without the complete-intersection flag answer
//! dimension queries by counting Gröbner standard monomials.

use std::collections::HashMap;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::arith::{kernel_basis, weighted_monomials, Matrix, PrimeField, SpanBuilder};
use crate::error::{Error, Result};
use crate::poly::{Ideal, Monomial, PolyRing, Polynomial, RingRef};

/// On-disk form of a ring presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingFile {
    #[serde(rename = "char")]
    pub characteristic: u32,
    pub vars: Vec<VarDecl>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete_intersection: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarDecl {
    pub name: String,
    pub deg: u32,
}

/// A graded quotient `F_p[x_1..x_n] / (relations)` with positive weights.
#[derive(Clone, Debug)]
pub struct RingSpec {
    ring: RingRef,
    relations: Vec<Polynomial>,
    complete_intersection: bool,
    ideal: Ideal,
}

impl RingSpec {
    pub fn new(ring: RingRef, relations: Vec<Polynomial>, complete_intersection: bool) -> Result<Self> {
        for (i, f) in relations.iter().enumerate() {
            if **f.ring() != *ring {
                return Err(Error::ContextMismatch);
            }
            if f.is_zero() {
                return Err(Error::Precondition(format!("relation {i} is zero")));
            }
            if !f.is_homogeneous() {
                return Err(Error::Precondition(format!(
                    "relation {i} ({f}) is not homogeneous for the weights {:?}",
                    ring.weights()
                )));
            }
        }
        let ideal = Ideal::new(&ring, relations.clone())?;
        Ok(RingSpec {
            ring,
            relations,
            complete_intersection,
            ideal,
        })
    }

    /// Polynomial ring with the given names and weights.
    pub fn polynomial(p: u32, vars: &[(&str, u32)]) -> Result<Self> {
        let ring = PolyRing::new(
            p,
            vars.iter().map(|(n, _)| n.to_string()).collect(),
            vars.iter().map(|(_, w)| *w).collect(),
        )?;
        RingSpec::new(ring, Vec::new(), true)
    }

    /// Hypersurface or complete intersection given by relation strings.
    pub fn with_relations(p: u32, vars: &[(&str, u32)], relations: &[&str]) -> Result<Self> {
        let base = RingSpec::polynomial(p, vars)?;
        let rels = relations
            .iter()
            .map(|s| base.ring.parse(s))
            .collect::<Result<Vec<_>>>()?;
        RingSpec::new(base.ring, rels, true)
    }

    pub fn from_file(file: &RingFile) -> Result<Self> {
        let ring = PolyRing::new(
            file.characteristic,
            file.vars.iter().map(|v| v.name.clone()).collect(),
            file.vars.iter().map(|v| v.deg).collect(),
        )?;
        let relations = file
            .relations
            .iter()
            .enumerate()
            .map(|(i, s)| {
                ring.parse(s)
                    .map_err(|e| Error::Parse(format!("relations[{i}]: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        RingSpec::new(ring, relations, file.complete_intersection.unwrap_or(true))
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let file: RingFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("ring file: {e}")))?;
        RingSpec::from_file(&file)
    }

    pub fn to_file(&self) -> RingFile {
        RingFile {
            characteristic: self.characteristic(),
            vars: self
                .ring
                .names()
                .iter()
                .zip(self.ring.weights())
                .map(|(n, &w)| VarDecl {
                    name: n.clone(),
                    deg: w,
                })
                .collect(),
            relations: self.relations.iter().map(|f| f.to_string()).collect(),
            complete_intersection: if self.complete_intersection {
                None
            } else {
                Some(false)
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable") + "\n"
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn characteristic(&self) -> u32 {
        self.ring.characteristic()
    }

    pub fn field(&self) -> PrimeField {
        self.ring.field()
    }

    pub fn weights(&self) -> &[u32] {
        self.ring.weights()
    }

    pub fn is_complete_intersection(&self) -> bool {
        self.complete_intersection
    }

    pub fn set_complete_intersection(&mut self, flag: bool) {
        self.complete_intersection = flag;
    }

    fn require_ci(&self) -> Result<()> {
        if self.complete_intersection {
            Ok(())
        } else {
            Err(Error::NotCompleteIntersection)
        }
    }

    pub fn relation_degrees(&self) -> Vec<u32> {
        self.relations
            .iter()
            .map(|f| f.degree().unwrap_or(0) as u32)
            .collect()
    }

    /// Krull dimension `#vars - #relations` of a complete intersection.
    pub fn dimension(&self) -> Result<usize> {
        self.require_ci()?;
        Ok(self.ring.nvars().saturating_sub(self.relations.len()))
    }

    pub fn hilbert_series(&self) -> Result<HilbertSeries> {
        hilbert_series(self)
    }

    /// `dim R_n` by counting standard monomials.
    pub fn dimension_by_enumeration(&self, n: i64) -> u64 {
        self.ideal.standard_monomials(n).len() as u64
    }

    /// Standard monomials of degree `n`: a basis of `R_n`.
    pub fn basis(&self, n: i64) -> Vec<Monomial> {
        self.ideal.standard_monomials(n)
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.ideal.normal_form(f)
    }

    /// `dim R_n` for `n` in `[0, n_max]`, from the closed form when the ring
    /// is a complete intersection and by enumeration otherwise.
    pub fn hilbert_function(&self, n_max: i64) -> Result<Vec<u64>> {
        if n_max < 0 {
            return Ok(Vec::new());
        }
        if self.complete_intersection {
            let coeffs = self.hilbert_series()?.coefficients(n_max as usize);
            coeffs
                .into_iter()
                .enumerate()
                .map(|(n, c)| {
                    u64::try_from(c).map_err(|_| {
                        Error::Precondition(format!(
                            "negative Hilbert series coefficient {c} at degree {n}: relations are not a regular sequence"
                        ))
                    })
                })
                .collect()
        } else {
            Ok((0..=n_max).map(|n| self.dimension_by_enumeration(n)).collect())
        }
    }

    /// Confirms the complete-intersection flag by comparing the closed form
    /// with standard-monomial counts on `[0, n_max]`.
    pub fn verify_complete_intersection(&self, n_max: i64) -> Result<bool> {
        let closed = self.hilbert_series()?.coefficients(n_max as usize);
        Ok(closed
            .iter()
            .enumerate()
            .all(|(n, &c)| c == self.dimension_by_enumeration(n as i64) as i64))
    }

    /// `R ⊗_F S` with the variables of `other` appended (renamed on clashes).
    pub fn tensor(&self, other: &RingSpec) -> Result<RingSpec> {
        if self.characteristic() != other.characteristic() {
            return Err(Error::ModulusMismatch(self.characteristic(), other.characteristic()));
        }
        let mut names: Vec<String> = self.ring.names().to_vec();
        for n in other.ring.names() {
            let mut candidate = n.clone();
            while names.contains(&candidate) {
                candidate.push_str("_2");
            }
            names.push(candidate);
        }
        let mut weights = self.ring.weights().to_vec();
        weights.extend_from_slice(other.ring.weights());
        let ring = PolyRing::new(self.characteristic(), names, weights)?;
        let n1 = self.ring.nvars();
        let left: Vec<usize> = (0..n1).collect();
        let right: Vec<usize> = (n1..n1 + other.ring.nvars()).collect();
        let mut relations: Vec<Polynomial> = self.relations.iter().map(|f| f.embed(&ring, &left)).collect();
        relations.extend(other.relations.iter().map(|f| f.embed(&ring, &right)));
        RingSpec::new(ring, relations, self.complete_intersection && other.complete_intersection)
    }
}

impl PartialEq for RingSpec {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.relations == other.relations
            && self.complete_intersection == other.complete_intersection
    }
}

/// `numerator(t) / prod_d (1 - t^d)` with integer numerator coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    numerator: Vec<i64>,
    denominator: Vec<u32>,
}

impl HilbertSeries {
    pub fn new(numerator: Vec<i64>, mut denominator: Vec<u32>) -> Result<Self> {
        if denominator.contains(&0) {
            return Err(Error::Precondition("denominator factor 1 - t^0".into()));
        }
        denominator.sort_unstable();
        let mut numerator = numerator;
        while numerator.len() > 1 && *numerator.last().unwrap() == 0 {
            numerator.pop();
        }
        Ok(HilbertSeries {
            numerator,
            denominator,
        })
    }

    /// Series of the zero-dimensional ring `F`.
    pub fn point() -> Self {
        HilbertSeries {
            numerator: vec![1],
            denominator: Vec::new(),
        }
    }

    /// `prod_j (1 - t^{e_j}) / prod_i (1 - t^{w_i})`.
    pub fn complete_intersection(weights: &[u32], relation_degrees: &[u32]) -> Result<Self> {
        let mut num = vec![1i64];
        for &e in relation_degrees {
            let e = e as usize;
            let mut next = vec![0i64; num.len() + e];
            for (i, &c) in num.iter().enumerate() {
                next[i] += c;
                next[i + e] -= c;
            }
            num = next;
        }
        HilbertSeries::new(num, weights.to_vec())
    }

    pub fn numerator(&self) -> &[i64] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[u32] {
        &self.denominator
    }

    /// Coefficients of `t^0 .. t^n_max`.
    pub fn coefficients(&self, n_max: usize) -> Vec<i64> {
        let mut c = vec![0i64; n_max + 1];
        for (i, &a) in self.numerator.iter().enumerate().take(n_max + 1) {
            c[i] = a;
        }
        for &d in &self.denominator {
            let d = d as usize;
            for n in d..=n_max {
                c[n] += c[n - d];
            }
        }
        c
    }

    /// Coefficient of `t^n`; zero for negative `n`.
    pub fn coefficient(&self, n: i64) -> i64 {
        if n < 0 {
            0
        } else {
            self.coefficients(n as usize)[n as usize]
        }
    }

    /// Series of the tensor product.
    pub fn product(&self, other: &HilbertSeries) -> HilbertSeries {
        let mut num = vec![0i64; self.numerator.len() + other.numerator.len() - 1];
        for (i, a) in self.numerator.iter().enumerate() {
            for (j, b) in other.numerator.iter().enumerate() {
                num[i + j] += a * b;
            }
        }
        let mut den = self.denominator.clone();
        den.extend_from_slice(&other.denominator);
        HilbertSeries::new(num, den).expect("positive factors")
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.numerator.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{i}"),
            };
            let body = match (c.abs(), mono.is_empty()) {
                (a, true) => a.to_string(),
                (1, false) => mono,
                (a, false) => format!("{a}*{mono}"),
            };
            if terms.is_empty() {
                terms.push(if c < 0 { format!("-{body}") } else { body });
            } else {
                terms.push(format!("{}{body}", if c < 0 { "-" } else { "+" }));
            }
        }
        let num = if terms.is_empty() { "0".to_string() } else { terms.concat() };
        if self.denominator.is_empty() {
            return write!(f, "{num}");
        }
        let den: Vec<String> = self
            .denominator
            .iter()
            .map(|&d| if d == 1 { "(1-t)".to_string() } else { format!("(1-t^{d})") })
            .collect();
        write!(f, "({num})/({})", den.join("*"))
    }
}

pub fn hilbert_series(ring: &RingSpec) -> Result<HilbertSeries> {
    ring.require_ci()?;
    HilbertSeries::complete_intersection(ring.weights(), &ring.relation_degrees())
}

pub fn series_coefficients(hs: &HilbertSeries, n_max: usize) -> Vec<i64> {
    hs.coefficients(n_max)
}

/// Degreewise product of coefficients: the Hilbert function of a Segre product.
pub fn hadamard(a: &HilbertSeries, b: &HilbertSeries, n_max: usize) -> Vec<i64> {
    a.coefficients(n_max)
        .into_iter()
        .zip(b.coefficients(n_max))
        .map(|(x, y)| x * y)
        .collect()
}

/// Hilbert function of the `r`-th Veronese subring on `[0, m_max]`.
pub fn veronese(hs: &HilbertSeries, r: usize, m_max: usize) -> Result<Vec<i64>> {
    if r == 0 {
        return Err(Error::Precondition("Veronese index must be positive".into()));
    }
    let c = hs.coefficients(r * m_max);
    Ok((0..=m_max).map(|m| c[r * m]).collect())
}

/// `sum deg f_j - sum w_i` for a graded complete intersection.
pub fn a_invariant_ci(ring: &RingSpec) -> Result<i64> {
    ring.require_ci()?;
    let rel: i64 = ring.relation_degrees().iter().map(|&d| d as i64).sum();
    let w: i64 = ring.weights().iter().map(|&d| d as i64).sum();
    Ok(rel - w)
}

/// Graded dimensions of `R^{1/q}`, which lives in degrees `n/q`:
/// `dim (R^{1/q})_{n/q} = dim R_n` for `n` in `[0, n_max]`.
pub fn frobenius_pushforward_series(
    ring: &RingSpec,
    q: u64,
    n_max: i64,
) -> Result<Vec<(Rational64, u64)>> {
    crate::poly::bracket_power(ring.ideal(), q)?;
    let dims = ring.hilbert_function(n_max)?;
    Ok(dims
        .into_iter()
        .enumerate()
        .map(|(n, d)| (Rational64::new(n as i64, q as i64), d))
        .collect())
}

/// One minimal generator of a Segre product, as an element of `R ⊗ S`.
#[derive(Clone, Debug)]
pub struct SegreGenerator {
    pub degree: i64,
    pub element: Polynomial,
}

#[derive(Clone, Debug)]
pub struct SegrePresentation {
    /// `R ⊗ S`; generators are bihomogeneous elements of equal bidegree.
    pub tensor: RingSpec,
    pub generators: Vec<SegreGenerator>,
    /// Polynomial ring `F_p[g_1, ..]` with `g_i` of weight `degree_i`.
    pub generator_ring: RingRef,
    /// Minimal relations among the generators, up to the degree bound.
    pub relations: Vec<Polynomial>,
    /// Generation and relations are certified only up to this degree.
    pub certified_up_to: i64,
}

impl SegrePresentation {
    pub fn generator_degrees(&self) -> Vec<i64> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    /// The presented ring `F_p[g] / (relations)`.
    pub fn presentation_ring(&self) -> Result<RingSpec> {
        let ci = self.relations.len() <= self.generators.len();
        RingSpec::new(self.generator_ring.clone(), self.relations.clone(), ci)
    }

    pub fn relation_ideal(&self) -> Result<Ideal> {
        Ideal::new(&self.generator_ring, self.relations.clone())
    }
}

/// Coordinates of bihomogeneous elements of `(R#S)_n` in the basis of
/// products of standard monomials.
struct SegrePiece {
    index: HashMap<Monomial, usize>,
}

impl SegrePiece {
    fn new(a: &RingSpec, b: &RingSpec, tensor: &RingRef, n: i64) -> Self {
        let n1 = a.ring().nvars();
        let mut index = HashMap::new();
        for ma in a.basis(n) {
            for mb in b.basis(n) {
                let mut exps = ma.exps().to_vec();
                exps.extend_from_slice(mb.exps());
                debug_assert_eq!(exps.len(), n1 + b.ring().nvars());
                let len = index.len();
                index.insert(tensor.monomial(exps), len);
            }
        }
        SegrePiece { index }
    }

    fn dim(&self) -> usize {
        self.index.len()
    }

    fn coordinates(&self, f: &Polynomial) -> Vec<u32> {
        let mut v = vec![0u32; self.dim()];
        for (m, c) in f.terms() {
            let i = *self
                .index
                .get(m)
                .expect("normal form lies in the standard-monomial basis");
            v[i] = *c;
        }
        v
    }

    /// Basis elements ordered by index.
    fn basis_elements(&self, tensor: &RingRef) -> Vec<Polynomial> {
        let mut pairs: Vec<(&Monomial, &usize)> = self.index.iter().collect();
        pairs.sort_by_key(|(_, &i)| i);
        pairs
            .into_iter()
            .map(|(m, _)| Polynomial::from_monomial(tensor, m.clone(), 1))
            .collect()
    }
}

fn evaluate_monomial(
    tensor: &RingSpec,
    generators: &[SegreGenerator],
    exps: &[u32],
) -> Result<Polynomial> {
    let mut acc = tensor.ring().constant(1);
    for (g, &e) in generators.iter().zip(exps) {
        for _ in 0..e {
            acc = tensor.normal_form(&acc.mul(&g.element))?;
        }
    }
    Ok(acc)
}

/// Minimal generators and relations of `R # S` up to degree `degree_bound`,
/// discovered by graded linear algebra.
pub fn segre_presentation(a: &RingSpec, b: &RingSpec, degree_bound: i64) -> Result<SegrePresentation> {
    a.require_ci()?;
    b.require_ci()?;
    let tensor = a.tensor(b)?;
    let field = tensor.field();
    let tring = tensor.ring().clone();

    let mut generators: Vec<SegreGenerator> = Vec::new();
    for n in 1..=degree_bound {
        let piece = SegrePiece::new(a, b, &tring, n);
        if piece.dim() == 0 {
            continue;
        }
        let mut span = SpanBuilder::new(field, piece.dim());
        let degrees: Vec<u32> = generators.iter().map(|g| g.degree as u32).collect();
        for exps in weighted_monomials(&degrees, n) {
            let value = evaluate_monomial(&tensor, &generators, &exps)?;
            span.insert(&piece.coordinates(&value));
            if span.rank() == piece.dim() {
                break;
            }
        }
        for element in piece.basis_elements(&tring) {
            if span.rank() == piece.dim() {
                break;
            }
            if span.insert(&piece.coordinates(&element)) {
                generators.push(SegreGenerator { degree: n, element });
            }
        }
    }

    let max_degree = generators.iter().map(|g| g.degree).max().unwrap_or(0);
    if degree_bound < 2 * max_degree {
        return Err(Error::DegreeBoundTooSmall {
            bound: degree_bound,
            needed: 2 * max_degree,
        });
    }

    let names: Vec<String> = (1..=generators.len()).map(|i| format!("g{i}")).collect();
    let weights: Vec<u32> = generators.iter().map(|g| g.degree as u32).collect();
    let generator_ring = if generators.is_empty() {
        PolyRing::new(tensor.characteristic(), vec!["g0".into()], vec![1])?
    } else {
        PolyRing::new(tensor.characteristic(), names, weights.clone())?
    };
    let relations = minimal_relations(degree_bound, &generator_ring, &weights, field, |n, monomials| {
        let piece = SegrePiece::new(a, b, &tring, n);
        monomials
            .iter()
            .map(|e| Ok(piece.coordinates(&evaluate_monomial(&tensor, &generators, e)?)))
            .collect::<Result<Vec<_>>>()
            .map(|cols| (piece.dim(), cols))
    })?;

    Ok(SegrePresentation {
        tensor,
        generators,
        generator_ring,
        relations,
        certified_up_to: degree_bound,
    })
}

/// Minimal homogeneous relations among generators of the given weights, up to
/// `degree_bound`. `evaluate(n, monomials)` returns the target dimension and
/// one coordinate column per monomial.
pub(crate) fn minimal_relations<F>(
    degree_bound: i64,
    generator_ring: &RingRef,
    weights: &[u32],
    field: PrimeField,
    mut evaluate: F,
) -> Result<Vec<Polynomial>>
where
    F: FnMut(i64, &[Vec<u32>]) -> Result<(usize, Vec<Vec<u32>>)>,
{
    let mut relations: Vec<Polynomial> = Vec::new();
    if weights.is_empty() {
        return Ok(relations);
    }
    for n in 1..=degree_bound {
        let monomials = weighted_monomials(weights, n);
        if monomials.len() < 2 {
            continue;
        }
        let (rows, columns) = evaluate(n, &monomials)?;
        let matrix = Matrix::from_columns(rows, &columns, 0u32);
        let kernel = kernel_basis(&field, &matrix);
        if kernel.is_empty() {
            continue;
        }
        let index: HashMap<Vec<u32>, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let to_vec = |f: &Polynomial| {
            let mut v = vec![0u32; monomials.len()];
            for (m, c) in f.terms() {
                v[index[m.exps()]] = *c;
            }
            v
        };
        let mut span = SpanBuilder::new(field, monomials.len());
        for r in &relations {
            let d = r.degree().unwrap() as i64;
            for e in weighted_monomials(weights, n - d) {
                let shifted = r.mul_term(&generator_ring.monomial(e), 1);
                span.insert(&to_vec(&shifted));
            }
        }
        for k in kernel {
            if span.insert(&k) {
                let rel = Polynomial::from_terms(
                    generator_ring,
                    monomials
                        .iter()
                        .zip(&k)
                        .filter(|(_, &c)| c != 0)
                        .map(|(e, &c)| (generator_ring.monomial(e.clone()), c)),
                );
                relations.push(rel.monic());
            }
        }
    }
    Ok(relations)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cusp() -> RingSpec {
        RingSpec::with_relations(2, &[("x", 3), ("y", 2), ("z", 2)], &["x^2+y^3+z^3"]).unwrap()
    }

    fn even_plane() -> RingSpec {
        RingSpec::polynomial(2, &[("u", 2), ("v", 2)]).unwrap()
    }

    #[test]
    fn closed_forms() {
        let r = RingSpec::with_relations(7, &[("x", 21), ("y", 14), ("z", 6)], &["x^2+y^3+z^7"]).unwrap();
        let hs = r.hilbert_series().unwrap();
        assert_eq!(hs.denominator(), &[6, 14, 21]);
        assert_eq!(hs.numerator()[0], 1);
        assert_eq!(hs.numerator()[42], -1);
        assert_eq!(hs.numerator().len(), 43);
        let plane = RingSpec::polynomial(5, &[("u", 1), ("v", 1)]).unwrap();
        assert_eq!(plane.hilbert_series().unwrap(), HilbertSeries::new(vec![1], vec![1, 1]).unwrap());
        assert_eq!(even_plane().hilbert_series().unwrap(), HilbertSeries::new(vec![1], vec![2, 2]).unwrap());
    }

    #[test]
    fn coefficient_examples() {
        let det = HilbertSeries::complete_intersection(&[2, 2, 2, 2], &[4]).unwrap();
        assert_eq!(det.coefficient(4), 9);
        let plane = HilbertSeries::new(vec![1], vec![1, 1]).unwrap();
        assert_eq!(plane.coefficient(5), 6);
        let s = HilbertSeries::complete_intersection(&[5, 4, 4], &[20]).unwrap();
        assert_eq!(s.coefficient(7), 0);
        assert_eq!(plane.coefficient(-1), 0);
    }

    #[test]
    fn hadamard_with_point_and_planes() {
        let plane = HilbertSeries::new(vec![1], vec![1, 1]).unwrap();
        let h = hadamard(&plane, &HilbertSeries::point(), 5);
        assert_eq!(h, vec![1, 0, 0, 0, 0, 0]);
        let h = hadamard(&plane, &plane, 6);
        assert_eq!(h, (0..=6).map(|n| (n + 1) * (n + 1)).collect::<Vec<i64>>());
    }

    #[test]
    fn veronese_examples() {
        let hs = HilbertSeries::new(vec![1], vec![2, 2]).unwrap();
        assert_eq!(veronese(&hs, 2, 5).unwrap(), vec![1, 2, 3, 4, 5, 6]);
        let c = cusp().hilbert_series().unwrap();
        assert_eq!(veronese(&c, 1, 12).unwrap(), c.coefficients(12));
        assert!(veronese(&c, 0, 3).is_err());
    }

    #[test]
    fn a_invariants() {
        let r = RingSpec::with_relations(7, &[("x", 21), ("y", 14), ("z", 6)], &["x^2+y^3+z^7"]).unwrap();
        assert_eq!(a_invariant_ci(&r).unwrap(), 1);
        let s = RingSpec::with_relations(7, &[("u", 5), ("v", 4), ("w", 4)], &["u^4+v^5+w^5"]).unwrap();
        assert_eq!(a_invariant_ci(&s).unwrap(), 7);
        let plane = RingSpec::polynomial(7, &[("u", 1), ("v", 1)]).unwrap();
        assert_eq!(a_invariant_ci(&plane).unwrap(), -2);
        let mut flagless = r.clone();
        flagless.set_complete_intersection(false);
        assert!(matches!(a_invariant_ci(&flagless), Err(Error::NotCompleteIntersection)));
        assert!(matches!(hilbert_series(&flagless), Err(Error::NotCompleteIntersection)));
    }

    #[test]
    fn closed_form_matches_enumeration_for_cusp() {
        assert!(cusp().verify_complete_intersection(30).unwrap());
    }

    #[test]
    fn rejects_inhomogeneous_relation() {
        let err = RingSpec::with_relations(2, &[("x", 3), ("y", 2)], &["x^2+y^2"]).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn pushforward_identity_at_q_one() {
        let c = cusp();
        let push = frobenius_pushforward_series(&c, 1, 10).unwrap();
        let coeffs = c.hilbert_series().unwrap().coefficients(10);
        for (n, (deg, d)) in push.iter().enumerate() {
            assert_eq!(*deg, Rational64::from_integer(n as i64));
            assert_eq!(*d as i64, coeffs[n]);
        }
        assert!(frobenius_pushforward_series(&c, 3, 10).is_err());
    }

    #[test]
    fn segre_of_lines() {
        let a = RingSpec::polynomial(3, &[("x", 1)]).unwrap();
        let b = RingSpec::polynomial(3, &[("u", 1)]).unwrap();
        let p = segre_presentation(&a, &b, 4).unwrap();
        assert_eq!(p.generator_degrees(), vec![1]);
        assert!(p.relations.is_empty());
    }

    #[test]
    fn segre_of_planes_is_determinantal() {
        let a = RingSpec::polynomial(3, &[("x", 1), ("y", 1)]).unwrap();
        let b = RingSpec::polynomial(3, &[("u", 1), ("v", 1)]).unwrap();
        let p = segre_presentation(&a, &b, 4).unwrap();
        assert_eq!(p.generator_degrees(), vec![1, 1, 1, 1]);
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.relations[0].degree(), Some(2));
        let pres = p.presentation_ring().unwrap();
        let expected = HilbertSeries::complete_intersection(&[1, 1, 1, 1], &[2]).unwrap();
        assert_eq!(pres.hilbert_series().unwrap(), expected);
    }

    #[test]
    fn segre_bound_too_small() {
        let a = RingSpec::polynomial(3, &[("x", 1), ("y", 1)]).unwrap();
        let b = RingSpec::polynomial(3, &[("u", 1), ("v", 1)]).unwrap();
        assert!(matches!(
            segre_presentation(&a, &b, 1),
            Err(Error::DegreeBoundTooSmall { bound: 1, needed: 2 })
        ));
    }

    #[test]
    fn ring_file_round_trip() {
        let c = cusp();
        let text = c.to_json();
        let again = RingSpec::parse_json(&text).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.to_json(), text);
    }

    #[test]
    fn ring_file_errors_name_the_field() {
        let bad = r#"{"char": 2, "vars": [{"name": "x", "deg": 1}], "relations": ["x+"]}"#;
        let err = RingSpec::parse_json(bad).unwrap_err().to_string();
        assert!(err.contains("relations[0]"), "{err}");
        let bad = r#"{"char": 4, "vars": [], "relations": []}"#;
        assert!(RingSpec::parse_json(bad).is_err());
    }
}
