//! Frobenius-based singularity tests.
//!
//! Fedder's criterion decides F-purity of `P/I` for a polynomial ring `P`;
//! the remaining tests act on explicit classes of the top local cohomology
//! `H^2_m(R)` of a 2-dimensional graded complete intersection, written as
//! Čech fractions `[r / (g1^a g2^b)]` over a homogeneous system of
//! parameters `(g1, g2)` chosen among the variables.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::Rng;

use crate::arith::{kernel_basis, Field, Matrix};
use crate::error::{Error, Result};
use crate::graded::{a_invariant_ci, RingSpec};
use crate::poly::{Ideal, Monomial, Polynomial};

/// Largest Čech exponent tried when building spanning sets of `[H^2]_n`.
pub const SPANNING_EXPONENT_CAP: u32 = 16;

/// Outcome of a bounded search over Frobenius exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrobeniusVerdict {
    /// The property holds, witnessed at exponent `e`.
    Confirmed { e: u32 },
    /// Vanishing at exponent `e` forces vanishing for all larger exponents.
    Refuted { e: u32, reason: String },
    /// Nothing decided for exponents `0..=e_max`.
    Inconclusive { e_max: u32 },
}

impl FrobeniusVerdict {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, FrobeniusVerdict::Confirmed { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            FrobeniusVerdict::Confirmed { .. } => "confirmed",
            FrobeniusVerdict::Refuted { .. } => "refuted",
            FrobeniusVerdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

impl fmt::Display for FrobeniusVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrobeniusVerdict::Confirmed { e } => write!(f, "confirmed_at_{e}"),
            FrobeniusVerdict::Refuted { e, reason } => write!(f, "refuted_at_{e} ({reason})"),
            FrobeniusVerdict::Inconclusive { e_max } => write!(f, "inconclusive_up_to_{e_max}"),
        }
    }
}

fn frobenius_ideal(ring: &crate::poly::RingRef) -> Result<Ideal> {
    let p = ring.characteristic() as u64;
    Ideal::new(ring, (0..ring.nvars()).map(|i| ring.var(i).pow(p)).collect())
}

/// Fedder's criterion for a hypersurface: `f^{p-1}` outside `m^[p]`.
pub fn fedder_principal(f: &Polynomial) -> Result<bool> {
    let ring = f.ring();
    let p = ring.characteristic() as u64;
    let m_p = frobenius_ideal(ring)?;
    Ok(!m_p.contains(&f.pow(p - 1))?)
}

/// Fedder's criterion `(I^[p] : I) ⊄ m^[p]` for a homogeneous ideal.
pub fn fedder_general(ideal: &Ideal) -> Result<bool> {
    let ring = ideal.ring();
    let p = ring.characteristic() as u64;
    if ideal.generators().is_empty() {
        return Ok(true);
    }
    let colon = ideal.bracket_power(p)?.colon(ideal)?;
    let m_p = frobenius_ideal(ring)?;
    for g in colon.generators() {
        if !m_p.contains(g)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Least `e <= e_max` with `g^{p^e} ∈ I^[p^e] + relations`.
pub fn frobenius_closure_member(
    ring: &RingSpec,
    ideal: &Ideal,
    g: &Polynomial,
    e_max: u32,
) -> Result<FrobeniusVerdict> {
    if **ideal.ring() != **ring.ring() || **g.ring() != **ring.ring() {
        return Err(Error::ContextMismatch);
    }
    let p = ring.characteristic() as u64;
    let mut q = 1u64;
    for e in 0..=e_max {
        let target = ideal
            .bracket_power(q)?
            .with_generators(ring.relations())?;
        if target.contains(&g.frobenius(e))? {
            return Ok(FrobeniusVerdict::Confirmed { e });
        }
        q *= p;
    }
    Ok(FrobeniusVerdict::Inconclusive { e_max })
}

/// A class `[numerator / (g1^a g2^b)]` in `H^2_m(R)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechClass {
    numerator: Polynomial,
    exponents: (u32, u32),
    degree: i64,
}

impl CechClass {
    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn exponents(&self) -> (u32, u32) {
        self.exponents
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }
}

/// Ring, system of parameters and cached membership ideals for Čech classes.
#[derive(Debug)]
pub struct CechContext {
    ring: RingSpec,
    sop: (usize, usize),
    truncations: Mutex<HashMap<(u32, u32), Arc<Ideal>>>,
}

impl CechContext {
    /// Checks that the ring is a 2-dimensional complete intersection and
    /// that `R / (x_i, x_j)` is finite-dimensional.
    pub fn new(ring: RingSpec, sop: (usize, usize)) -> Result<Self> {
        if ring.dimension()? != 2 {
            return Err(Error::Precondition(
                "Čech classes need a 2-dimensional complete intersection".into(),
            ));
        }
        let n = ring.ring().nvars();
        if sop.0 >= n || sop.1 >= n || sop.0 == sop.1 {
            return Err(Error::NotSystemOfParameters(format!("bad variable indices {sop:?}")));
        }
        if !is_parameter_pair(&ring, sop)? {
            let names = ring.ring().names();
            return Err(Error::NotSystemOfParameters(format!(
                "R/({}, {}) is not finite-dimensional",
                names[sop.0], names[sop.1]
            )));
        }
        Ok(CechContext {
            ring,
            sop,
            truncations: Mutex::new(HashMap::new()),
        })
    }

    /// Uses the lexicographically last pair of variable names that forms a
    /// system of parameters.
    pub fn with_default_sop(ring: RingSpec) -> Result<Self> {
        let sop = default_sop(&ring)?;
        CechContext::new(ring, sop)
    }

    /// Resolves variable names into a context.
    pub fn with_named_sop(ring: RingSpec, g1: &str, g2: &str) -> Result<Self> {
        let lookup = |name: &str| {
            ring.ring()
                .var_index(name)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name}")))
        };
        let sop = (lookup(g1)?, lookup(g2)?);
        CechContext::new(ring, sop)
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn sop(&self) -> (usize, usize) {
        self.sop
    }

    pub fn sop_names(&self) -> (&str, &str) {
        let names = self.ring.ring().names();
        (&names[self.sop.0], &names[self.sop.1])
    }

    fn sop_degrees(&self) -> (i64, i64) {
        let w = self.ring.weights();
        (w[self.sop.0] as i64, w[self.sop.1] as i64)
    }

    /// `(relations, g1^a, g2^b)`, cached.
    fn truncation(&self, a: u32, b: u32) -> Result<Arc<Ideal>> {
        let mut cache = self.truncations.lock().expect("cache poisoned");
        if let Some(ideal) = cache.get(&(a, b)) {
            return Ok(ideal.clone());
        }
        let r = self.ring.ring();
        let ideal = Arc::new(self.ring.ideal().with_generators(&[
            r.var(self.sop.0).pow(a as u64),
            r.var(self.sop.1).pow(b as u64),
        ])?);
        // build the basis before publishing so concurrent readers share it
        ideal.groebner();
        cache.insert((a, b), ideal.clone());
        Ok(ideal)
    }

    pub fn make(&self, numerator: &Polynomial, a: u32, b: u32) -> Result<CechClass> {
        if **numerator.ring() != **self.ring.ring() {
            return Err(Error::ContextMismatch);
        }
        if a == 0 || b == 0 {
            return Err(Error::Precondition("Čech exponents must be positive".into()));
        }
        let numerator = self.ring.normal_form(numerator)?;
        let (d1, d2) = self.sop_degrees();
        let degree = match numerator.degree() {
            None => -(a as i64) * d1 - (b as i64) * d2,
            Some(_) if !numerator.is_homogeneous() => {
                return Err(Error::DegreeMismatch("Čech numerator must be homogeneous".into()))
            }
            Some(d) => d as i64 - a as i64 * d1 - b as i64 * d2,
        };
        Ok(CechClass {
            numerator,
            exponents: (a, b),
            degree,
        })
    }

    /// Parses the numerator.
    pub fn make_parsed(&self, numerator: &str, a: u32, b: u32) -> Result<CechClass> {
        let r = self.ring.ring().parse(numerator)?;
        self.make(&r, a, b)
    }

    pub fn is_zero(&self, class: &CechClass) -> Result<bool> {
        let (a, b) = class.exponents;
        self.truncation(a, b)?.contains(&class.numerator)
    }

    /// `F^e [r/(g1^a g2^b)] = [r^q/(g1^{qa} g2^{qb})]`.
    pub fn frobenius(&self, class: &CechClass, e: u32) -> Result<CechClass> {
        let q = (self.ring.characteristic() as u64).pow(e) as u32;
        let (a, b) = class.exponents;
        self.make(&class.numerator.frobenius(e), a * q, b * q)
    }

    pub fn scale(&self, c: &Polynomial, class: &CechClass) -> Result<CechClass> {
        let (a, b) = class.exponents;
        self.make(&c.mul(&class.numerator), a, b)
    }

    /// Rewrites a class over the larger denominator `g1^a g2^b`.
    fn lift(&self, class: &CechClass, a: u32, b: u32) -> Polynomial {
        let r = self.ring.ring();
        let (ca, cb) = class.exponents;
        class
            .numerator
            .mul(&r.var(self.sop.0).pow((a - ca) as u64))
            .mul(&r.var(self.sop.1).pow((b - cb) as u64))
    }

    pub fn sub(&self, x: &CechClass, y: &CechClass) -> Result<CechClass> {
        if x.degree != y.degree && !x.numerator.is_zero() && !y.numerator.is_zero() {
            return Err(Error::DegreeMismatch(format!(
                "classes of degrees {} and {}",
                x.degree, y.degree
            )));
        }
        let a = x.exponents.0.max(y.exponents.0);
        let b = x.exponents.1.max(y.exponents.1);
        self.make(&self.lift(x, a, b).sub(&self.lift(y, a, b)), a, b)
    }

    pub fn equal(&self, x: &CechClass, y: &CechClass) -> Result<bool> {
        self.is_zero(&self.sub(x, y)?)
    }

    /// `[r/(g1^a*g2^b)]` with variable names.
    pub fn format(&self, class: &CechClass) -> String {
        let (g1, g2) = self.sop_names();
        let (a, b) = class.exponents;
        let power = |g: &str, e: u32| if e == 1 { g.to_string() } else { format!("{g}^{e}") };
        let num = class.numerator.to_string();
        let num = if class.numerator.terms().len() > 1 { format!("({num})") } else { num };
        format!("[{num}/({}*{})]", power(g1, a), power(g2, b))
    }

    /// Expected `dim [H^2]_n = dim R_{a-n}` from graded duality.
    pub fn expected_dimension(&self, n: i64) -> Result<u64> {
        let a = a_invariant_ci(&self.ring)?;
        Ok(self.ring.hilbert_series()?.coefficient(a - n).max(0) as u64)
    }

    /// A basis of `[H^2]_n` made of monomial classes over a common
    /// denominator `(g1 g2)^t`, with `t` the least exponent whose classes
    /// reach the dimension predicted by duality.
    pub fn spanning_classes(&self, n: i64) -> Result<Vec<CechClass>> {
        let expected = self.expected_dimension(n)?;
        if expected == 0 {
            return Ok(Vec::new());
        }
        let (d1, d2) = self.sop_degrees();
        for t in 1..=SPANNING_EXPONENT_CAP {
            let degree = n + t as i64 * (d1 + d2);
            if degree < 0 {
                continue;
            }
            let monomials = self.truncation(t, t)?.standard_monomials(degree);
            if monomials.len() as u64 == expected {
                let r = self.ring.ring();
                return monomials
                    .into_iter()
                    .map(|m| self.make(&Polynomial::from_monomial(r, m, 1), t, t))
                    .collect();
            }
        }
        Err(Error::Precondition(format!(
            "no spanning set for [H^2]_{n} with exponents up to {SPANNING_EXPONENT_CAP}"
        )))
    }

    /// Classes in `[H^2]_n` killed by `F^e`, as a basis of the kernel.
    pub fn frobenius_kernel(&self, n: i64, e: u32) -> Result<Vec<CechClass>> {
        let basis = self.spanning_classes(n)?;
        if basis.is_empty() {
            return Ok(Vec::new());
        }
        let images = basis
            .iter()
            .map(|c| self.frobenius(c, e))
            .collect::<Result<Vec<_>>>()?;
        let (a, b) = images[0].exponents;
        let truncation = self.truncation(a, b)?;
        let reduced = images
            .iter()
            .map(|c| truncation.normal_form(&c.numerator))
            .collect::<Result<Vec<_>>>()?;
        let mut index: HashMap<Monomial, usize> = HashMap::new();
        for f in &reduced {
            for (m, _) in f.terms() {
                let next = index.len();
                index.entry(m.clone()).or_insert(next);
            }
        }
        let columns: Vec<Vec<u32>> = reduced
            .iter()
            .map(|f| {
                let mut v = vec![0u32; index.len()];
                for (m, c) in f.terms() {
                    v[index[m]] = *c;
                }
                v
            })
            .collect();
        let field = self.ring.field();
        let kernel = kernel_basis(&field, &Matrix::from_columns(index.len(), &columns, 0));
        let r = self.ring.ring();
        let (t1, t2) = basis[0].exponents;
        kernel
            .into_iter()
            .map(|v| {
                let mut numerator = Polynomial::zero(r);
                for (c, class) in v.iter().zip(&basis) {
                    if !field.is_zero(c) {
                        numerator = numerator.add(&class.numerator.scale(*c));
                    }
                }
                self.make(&numerator, t1, t2)
            })
            .collect()
    }
}

fn is_parameter_pair(ring: &RingSpec, sop: (usize, usize)) -> Result<bool> {
    let r = ring.ring();
    let quotient = ring
        .ideal()
        .with_generators(&[r.var(sop.0), r.var(sop.1)])?;
    Ok(quotient.finite_standard_monomials().is_some())
}

/// Lexicographically last pair of variable names cutting out a finite quotient.
pub fn default_sop(ring: &RingSpec) -> Result<(usize, usize)> {
    let names = ring.ring().names();
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&i, &j| names[j].cmp(&names[i]));
    let mut pairs = Vec::new();
    for (k, &hi) in order.iter().enumerate() {
        for &lo in &order[k + 1..] {
            pairs.push((lo, hi));
        }
    }
    pairs.sort_by(|x, y| {
        (&names[y.1], &names[y.0]).cmp(&(&names[x.1], &names[x.0]))
    });
    for pair in pairs {
        if is_parameter_pair(ring, pair)? {
            return Ok(pair);
        }
    }
    Err(Error::NotSystemOfParameters(
        "no pair of variables is a system of parameters".into(),
    ))
}

/// Report of a windowed injectivity test.
#[derive(Clone, Debug)]
pub struct InjectivityReport {
    pub injective: bool,
    /// Kernel basis elements, grouped by degree in increasing order.
    pub witnesses: Vec<CechClass>,
    pub checked: Vec<(i64, u64)>,
}

/// Whether `F^e` is injective on `[H^2]_n` for every `n` in the window.
pub fn frobenius_injective_window(
    ctx: &CechContext,
    degrees: impl IntoIterator<Item = i64>,
    e: u32,
) -> Result<InjectivityReport> {
    let mut witnesses = Vec::new();
    let mut checked = Vec::new();
    for n in degrees {
        checked.push((n, ctx.expected_dimension(n)?));
        witnesses.extend(ctx.frobenius_kernel(n, e)?);
    }
    Ok(InjectivityReport {
        injective: witnesses.is_empty(),
        witnesses,
        checked,
    })
}

/// One factor of a decomposable probe: a class and a multiplier.
pub struct ProbeFactor<'a> {
    pub context: &'a CechContext,
    pub class: &'a CechClass,
    pub multiplier: &'a Polynomial,
}

/// Searches `e <= e_max` with `c1 F^e(η1) ≠ 0` and `c2 F^e(η2) ≠ 0`, i.e. a
/// nonzero image of `η1 ⊗ η2` under `(c1 ⊗ c2) F^e` in the top local
/// cohomology of the Segre product.
pub fn segre_frational_probe(
    first: ProbeFactor<'_>,
    second: ProbeFactor<'_>,
    e_max: u32,
) -> Result<FrobeniusVerdict> {
    if first.class.degree != second.class.degree {
        return Err(Error::DegreeMismatch(format!(
            "class degrees {} and {} differ",
            first.class.degree, second.class.degree
        )));
    }
    let multiplier_degree = |c: &Polynomial| -> Result<i64> {
        if !c.is_homogeneous() || c.is_zero() {
            return Err(Error::DegreeMismatch("multipliers must be nonzero and homogeneous".into()));
        }
        Ok(c.degree().unwrap_or(0) as i64)
    };
    if multiplier_degree(first.multiplier)? != multiplier_degree(second.multiplier)? {
        return Err(Error::DegreeMismatch("multiplier degrees differ".into()));
    }
    for factor in [&first, &second] {
        if factor.context.is_zero(factor.class)? {
            return Err(Error::Precondition("probe classes must be nonzero".into()));
        }
    }
    for e in 1..=e_max {
        let mut nonzero = true;
        for (k, factor) in [&first, &second].into_iter().enumerate() {
            let image = factor.context.frobenius(factor.class, e)?;
            if factor.context.is_zero(&image)? {
                return Ok(FrobeniusVerdict::Refuted {
                    e,
                    reason: format!("F^{e} kills the class in factor {}", k + 1),
                });
            }
            let scaled = factor.context.scale(factor.multiplier, &image)?;
            if factor.context.is_zero(&scaled)? {
                nonzero = false;
            }
        }
        if nonzero {
            return Ok(FrobeniusVerdict::Confirmed { e });
        }
    }
    Ok(FrobeniusVerdict::Inconclusive { e_max })
}

/// A random standard-graded plane curve `f(x, y, z)` of degree 2..=4 over
/// F_p; the `x^d` coefficient is kept nonzero so `(y, z)` is a system of
/// parameters.
pub fn random_hypersurface<R: Rng>(rng: &mut R, p: u32) -> Result<RingSpec> {
    let ring = crate::poly::PolyRing::standard(p, &["x", "y", "z"])?;
    let d = rng.gen_range(2..=4);
    let mut terms = Vec::new();
    for m in ring.monomials_of_degree(d) {
        let pure_x = m.exps()[0] as i64 == d;
        let c = if pure_x {
            rng.gen_range(1..p)
        } else if rng.gen_bool(0.6) {
            rng.gen_range(0..p)
        } else {
            0
        };
        terms.push((m, c));
    }
    let f = Polynomial::from_terms(&ring, terms);
    RingSpec::new(ring, vec![f], true)
}

/// Fedder's criterion and injectivity of Frobenius on the socle degree of
/// `H^2`; both decide F-purity of a 2-dimensional hypersurface.
pub fn fedder_cech_agreement(ring: &RingSpec) -> Result<(bool, bool)> {
    let [f] = ring.relations() else {
        return Err(Error::Precondition("expected a single relation".into()));
    };
    let fedder = fedder_principal(f)?;
    let a = a_invariant_ci(ring)?;
    let ctx = CechContext::with_default_sop(ring.clone())?;
    let injective = frobenius_injective_window(&ctx, [a], 1)?.injective;
    Ok((fedder, injective))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;

    fn cusp2() -> RingSpec {
        RingSpec::with_relations(2, &[("x", 3), ("y", 2), ("z", 2)], &["x^2+y^3+z^3"]).unwrap()
    }

    fn r7() -> RingSpec {
        RingSpec::with_relations(7, &[("x", 21), ("y", 14), ("z", 6)], &["x^2+y^3+z^7"]).unwrap()
    }

    fn s7() -> RingSpec {
        RingSpec::with_relations(7, &[("u", 5), ("v", 4), ("w", 4)], &["u^4+v^5+w^5"]).unwrap()
    }

    #[test]
    fn fedder_hypersurfaces() {
        let r = PolyRing::standard(2, &["x", "y", "z"]).unwrap();
        assert!(!fedder_principal(&r.parse("x^2+y^3+z^3").unwrap()).unwrap());
        assert!(fedder_principal(&r.parse("x*y").unwrap()).unwrap());
        let r = PolyRing::standard(7, &["x", "y", "z"]).unwrap();
        assert!(!fedder_principal(&r.parse("x^2+y^3+z^7").unwrap()).unwrap());
    }

    #[test]
    fn fedder_ideals() {
        let r = PolyRing::standard(2, &["a", "b", "c", "d"]).unwrap();
        assert!(fedder_general(&Ideal::parse(&r, "a*d-b*c").unwrap()).unwrap());
        let r = PolyRing::standard(2, &["x", "y", "z"]).unwrap();
        assert!(!fedder_general(&Ideal::parse(&r, "x^2+y^3+z^3").unwrap()).unwrap());
        let r = PolyRing::standard(3, &["x", "y"]).unwrap();
        assert!(fedder_general(&Ideal::parse(&r, "x").unwrap()).unwrap());
    }

    #[test]
    fn frobenius_closure() {
        let ring = cusp2();
        let i = Ideal::parse(ring.ring(), "y, z").unwrap();
        let x = ring.ring().parse("x").unwrap();
        assert_eq!(
            frobenius_closure_member(&ring, &i, &x, 3).unwrap(),
            FrobeniusVerdict::Confirmed { e: 1 }
        );
        let ring = r7();
        let i = Ideal::parse(ring.ring(), "y, z").unwrap();
        let x = ring.ring().parse("x").unwrap();
        assert_eq!(
            frobenius_closure_member(&ring, &i, &x, 2).unwrap(),
            FrobeniusVerdict::Confirmed { e: 1 }
        );
        let ring = RingSpec::polynomial(3, &[("y", 1), ("z", 1)]).unwrap();
        let i = Ideal::parse(ring.ring(), "z").unwrap();
        let y = ring.ring().parse("y").unwrap();
        assert_eq!(
            frobenius_closure_member(&ring, &i, &y, 3).unwrap(),
            FrobeniusVerdict::Inconclusive { e_max: 3 }
        );
        let z = ring.ring().parse("z^2").unwrap();
        assert_eq!(
            frobenius_closure_member(&ring, &i, &z, 3).unwrap(),
            FrobeniusVerdict::Confirmed { e: 0 }
        );
    }

    #[test]
    fn default_parameters() {
        let ctx = CechContext::with_default_sop(r7()).unwrap();
        assert_eq!(ctx.sop_names(), ("y", "z"));
        let ctx = CechContext::with_default_sop(s7()).unwrap();
        assert_eq!(ctx.sop_names(), ("v", "w"));
        // (y, z) leaves F[x] behind: fall back to (x, z)
        let ring = RingSpec::with_relations(3, &[("x", 1), ("y", 1), ("z", 1)], &["x*z+y^2"]).unwrap();
        assert!(CechContext::new(ring.clone(), (1, 2)).is_err());
        let ctx = CechContext::with_default_sop(ring).unwrap();
        assert_eq!(ctx.sop_names(), ("x", "z"));
    }

    #[test]
    fn cech_calculus() {
        let ctx = CechContext::with_default_sop(cusp2()).unwrap();
        let eta = ctx.make_parsed("x", 1, 1).unwrap();
        assert_eq!(eta.degree(), -1);
        assert!(!ctx.is_zero(&eta).unwrap());
        let f = ctx.frobenius(&eta, 1).unwrap();
        assert_eq!(f.exponents(), (2, 2));
        assert_eq!(f.degree(), -2);
        assert!(ctx.is_zero(&f).unwrap());
        assert!(ctx.is_zero(&ctx.make_parsed("y^3", 2, 2).unwrap()).unwrap());

        let ctx = CechContext::with_default_sop(r7()).unwrap();
        let one = ctx.make_parsed("1", 1, 1).unwrap();
        assert_eq!(one.degree(), -20);
        let f = ctx.frobenius(&one, 1).unwrap();
        assert_eq!(f.degree(), -140);
        assert!(!ctx.is_zero(&f).unwrap());
        let z = ctx.ring().ring().parse("z").unwrap();
        let scaled = ctx.scale(&z, &one).unwrap();
        assert_eq!(scaled.degree(), -14);
        // [r/(y z)] = [r*y/(y^2 z)]
        let lifted = ctx.make_parsed("y", 2, 1).unwrap();
        assert!(ctx.equal(&one, &lifted).unwrap());
        assert!(!ctx.equal(&one, &ctx.make_parsed("2", 1, 1).unwrap()).unwrap());
    }

    #[test]
    fn injectivity_windows() {
        let ctx = CechContext::with_default_sop(cusp2()).unwrap();
        let report = frobenius_injective_window(&ctx, [-1], 1).unwrap();
        assert!(!report.injective);
        assert_eq!(report.witnesses.len(), 1);
        assert_eq!(report.witnesses[0].degree(), -1);
        assert!(frobenius_injective_window(&ctx, [], 1).unwrap().injective);

        let ctx = CechContext::with_default_sop(r7()).unwrap();
        let report = frobenius_injective_window(&ctx, -25..=-5, 1).unwrap();
        assert!(report.injective);
        assert!(report.checked.iter().any(|&(_, d)| d > 0));
    }

    #[test]
    fn spanning_sets_match_duality() {
        let ctx = CechContext::with_default_sop(s7()).unwrap();
        for n in [-25, -12, -5, 0, 2, 3, 7] {
            let classes = ctx.spanning_classes(n).unwrap();
            assert_eq!(classes.len() as u64, ctx.expected_dimension(n).unwrap(), "n = {n}");
            for c in &classes {
                assert_eq!(c.degree(), n);
            }
        }
    }

    #[test]
    fn probe_on_segre_factors() {
        let cr = CechContext::with_default_sop(r7()).unwrap();
        let cs = CechContext::with_default_sop(s7()).unwrap();
        let eta1 = cr.make_parsed("x", 1, 2).unwrap();
        let eta2 = cs.make_parsed("u^3", 2, 3).unwrap();
        assert_eq!((eta1.degree(), eta2.degree()), (-5, -5));
        let c1 = cr.ring().ring().parse("z^2").unwrap();
        let c2 = cs.ring().ring().parse("v^3").unwrap();
        let verdict = segre_frational_probe(
            ProbeFactor { context: &cr, class: &eta1, multiplier: &c1 },
            ProbeFactor { context: &cs, class: &eta2, multiplier: &c2 },
            3,
        )
        .unwrap();
        assert!(verdict.is_confirmed(), "{verdict}");

        let one_r = cr.ring().ring().constant(1);
        let verdict = segre_frational_probe(
            ProbeFactor { context: &cr, class: &eta1, multiplier: &one_r },
            ProbeFactor { context: &cs, class: &eta2, multiplier: &c2 },
            3,
        );
        assert!(matches!(verdict, Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn class_formatting() {
        let ctx = CechContext::with_default_sop(cusp2()).unwrap();
        let eta = ctx.make_parsed("x", 1, 2).unwrap();
        assert_eq!(ctx.format(&eta), "[x/(y*z^2)]");
    }

    #[test]
    fn random_hypersurfaces_agree() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for p in [2, 3, 5] {
            let ring = random_hypersurface(&mut rng, p).unwrap();
            let (fedder, cech) = fedder_cech_agreement(&ring).unwrap();
            assert_eq!(fedder, cech, "{}", ring.relations()[0]);
        }
    }

    #[test]
    fn probe_refutes_when_frobenius_kills() {
        let cusp = CechContext::with_default_sop(cusp2()).unwrap();
        let eta = cusp.make_parsed("x", 1, 1).unwrap();
        let one = cusp.ring().ring().constant(1);
        let factor = || ProbeFactor { context: &cusp, class: &eta, multiplier: &one };
        let verdict = segre_frational_probe(factor(), factor(), 2).unwrap();
        assert!(matches!(verdict, FrobeniusVerdict::Refuted { e: 1, .. }));
        let zero = cusp.make_parsed("y", 1, 1).unwrap();
        let zero_factor = ProbeFactor { context: &cusp, class: &zero, multiplier: &one };
        assert!(segre_frational_probe(factor(), zero_factor, 2).is_err());
    }
}
