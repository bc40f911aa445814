use std::sync::OnceLock;

use super::groebner::{groebner_basis, reduce};
use super::{Monomial, Polynomial, RingRef};
use crate::error::{Error, Result};

/// An ideal given by generators, with its reduced Gröbner basis computed on
/// first use and then cached.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: RingRef,
    generators: Vec<Polynomial>,
    basis: OnceLock<Vec<Polynomial>>,
}

impl Ideal {
    pub fn new(ring: &RingRef, generators: Vec<Polynomial>) -> Result<Ideal> {
        for g in &generators {
            if **g.ring() != **ring {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            basis: OnceLock::new(),
        })
    }

    /// Parses comma-separated generators.
    pub fn parse(ring: &RingRef, text: &str) -> Result<Ideal> {
        let gens = text
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| ring.parse(s))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, gens)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn groebner(&self) -> &[Polynomial] {
        self.basis.get_or_init(|| groebner_basis(&self.generators))
    }

    fn check(&self, f: &Polynomial) -> Result<()> {
        if **f.ring() == *self.ring {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.check(f)?;
        Ok(reduce(f, self.groebner()))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn is_whole_ring(&self) -> bool {
        self.groebner().iter().any(|g| g.is_constant())
    }

    /// Ideal generated by both generator lists.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn with_generators(&self, extra: &[Polynomial]) -> Result<Ideal> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    /// `I^[q]`: every generator raised to the `q`-th power.
    pub fn bracket_power(&self, q: u64) -> Result<Ideal> {
        let e = log_base(q, self.ring.characteristic())?;
        Ideal::new(
            &self.ring,
            self.generators.iter().map(|g| g.frobenius(e)).collect(),
        )
    }

    /// `I ∩ J` by eliminating a tag variable from `t I + (1 - t) J`.
    pub fn intersection(&self, other: &Ideal) -> Result<Ideal> {
        if self.ring != other.ring {
            return Err(Error::ContextMismatch);
        }
        if self.generators.is_empty() || other.generators.is_empty() {
            return Ideal::new(&self.ring, Vec::new());
        }
        let n = self.ring.nvars();
        let tagged = self.ring.with_tag();
        let map: Vec<usize> = (0..n).collect();
        let t = tagged.var(n);
        let one_minus_t = tagged.constant(1).sub(&t);
        let mut gens = Vec::new();
        for g in &self.generators {
            gens.push(g.embed(&tagged, &map).mul(&t));
        }
        for g in &other.generators {
            gens.push(g.embed(&tagged, &map).mul(&one_minus_t));
        }
        let gb = groebner_basis(&gens);
        let back: Vec<Polynomial> = gb
            .into_iter()
            .filter(|g| g.terms().iter().all(|(m, _)| m.exps()[n] == 0))
            .map(|g| {
                Polynomial::from_terms(
                    &self.ring,
                    g.terms()
                        .iter()
                        .map(|(m, c)| (self.ring.monomial(m.exps()[..n].to_vec()), *c)),
                )
            })
            .collect();
        Ideal::new(&self.ring, back)
    }

    /// `I : J = { g : g J ⊆ I }`, as the intersection of the colons by the
    /// individual generators of `J`.
    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        if self.ring != other.ring {
            return Err(Error::ContextMismatch);
        }
        let mut result: Option<Ideal> = None;
        for h in &other.generators {
            let principal = Ideal::new(&self.ring, vec![h.clone()])?;
            let meet = self.intersection(&principal)?;
            let quotients = meet
                .groebner()
                .iter()
                .map(|g| {
                    g.div_exact(h).ok_or_else(|| {
                        Error::Precondition("intersection element not divisible by h".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let single = Ideal::new(&self.ring, quotients)?;
            result = Some(match result {
                None => single,
                Some(acc) => acc.intersection(&single)?,
            });
        }
        let colon = result.unwrap_or_else(|| Ideal {
            ring: self.ring.clone(),
            generators: vec![self.ring.constant(1)],
            basis: OnceLock::new(),
        });
        let gb = colon.groebner().to_vec();
        Ideal::new(&self.ring, gb)
    }

    /// Monomials of the given weighted degree not divisible by any leading
    /// monomial of the Gröbner basis; they form a basis of `(P/I)_degree`.
    pub fn standard_monomials(&self, degree: i64) -> Vec<Monomial> {
        let heads: Vec<&Monomial> = self
            .groebner()
            .iter()
            .filter_map(|g| g.leading_monomial())
            .collect();
        let mut out: Vec<Monomial> = self
            .ring
            .monomials_of_degree(degree)
            .into_iter()
            .filter(|m| !heads.iter().any(|h| h.divides(m)))
            .collect();
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    /// All standard monomials when the quotient is finite-dimensional.
    pub fn finite_standard_monomials(&self) -> Option<Vec<Monomial>> {
        let n = self.ring.nvars();
        let heads: Vec<&Monomial> = self
            .groebner()
            .iter()
            .filter_map(|g| g.leading_monomial())
            .collect();
        let mut bounds = vec![0u32; n];
        for (i, bound) in bounds.iter_mut().enumerate() {
            *bound = heads
                .iter()
                .filter(|h| h.exps().iter().enumerate().all(|(j, &e)| j == i || e == 0))
                .map(|h| h.exps()[i])
                .min()?;
        }
        let mut out = Vec::new();
        let mut exps = vec![0u32; n];
        loop {
            let m = self.ring.monomial(exps.clone());
            if !heads.iter().any(|h| h.divides(&m)) {
                out.push(m);
            }
            let mut i = 0;
            loop {
                if i == n {
                    out.sort_by(|a, b| b.cmp(a));
                    return Some(out);
                }
                exps[i] += 1;
                if exps[i] < bounds[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }
}

/// `e` with `q = p^e`.
pub(crate) fn log_base(q: u64, p: u32) -> Result<u32> {
    if q == 0 {
        return Err(Error::NotPowerOfCharacteristic(q, p));
    }
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p as u64) {
        r /= p as u64;
        e += 1;
    }
    if r != 1 {
        return Err(Error::NotPowerOfCharacteristic(q, p));
    }
    Ok(e)
}

pub fn groebner(ideal: &Ideal) -> Vec<Polynomial> {
    ideal.groebner().to_vec()
}

pub fn normal_form(f: &Polynomial, ideal: &Ideal) -> Result<Polynomial> {
    ideal.normal_form(f)
}

pub fn ideal_member(f: &Polynomial, ideal: &Ideal) -> Result<bool> {
    ideal.contains(f)
}

pub fn bracket_power(ideal: &Ideal, q: u64) -> Result<Ideal> {
    ideal.bracket_power(q)
}

pub fn ideal_colon(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    i.colon(j)
}

pub fn frobenius_power(f: &Polynomial, e: u32) -> Polynomial {
    f.frobenius(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;

    fn cusp_ring() -> RingRef {
        PolyRing::new(2, vec!["x".into(), "y".into(), "z".into()], vec![3, 2, 2]).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let r = cusp_ring();
        let i = Ideal::parse(&r, "x^2+y^3+z^3, y^2, z^2").unwrap();
        assert!(normal_form(&r.parse("x^2").unwrap(), &i).unwrap().is_zero());
        let yz = Ideal::parse(&r, "y, z").unwrap();
        let x = r.parse("x").unwrap();
        assert_eq!(normal_form(&x, &yz).unwrap(), x);
        let y2 = Ideal::parse(&r, "y^2").unwrap();
        assert!(normal_form(&r.parse("y^5").unwrap(), &y2).unwrap().is_zero());
    }

    #[test]
    fn membership_examples() {
        let r = cusp_ring();
        let quotient = Ideal::parse(&r, "x^2+y^3+z^3, y, z").unwrap();
        assert!(!ideal_member(&r.parse("x").unwrap(), &quotient).unwrap());
        let i = Ideal::parse(&r, "x^2+y^3+z^3, y^2, z^2").unwrap();
        assert!(ideal_member(&r.parse("x^2").unwrap(), &i).unwrap());
        let yz = Ideal::parse(&r, "y, z").unwrap();
        assert!(!ideal_member(&r.constant(1), &yz).unwrap());
    }

    #[test]
    fn bracket_powers() {
        let r = cusp_ring();
        let yz = Ideal::parse(&r, "y, z").unwrap();
        let b = bracket_power(&yz, 2).unwrap();
        assert_eq!(b.generators(), &[r.parse("y^2").unwrap(), r.parse("z^2").unwrap()]);
        assert!(matches!(
            bracket_power(&yz, 6),
            Err(Error::NotPowerOfCharacteristic(6, 2))
        ));
        assert_eq!(bracket_power(&yz, 1).unwrap().generators(), yz.generators());

        let r7 = PolyRing::standard(7, &["y", "z"]).unwrap();
        let yz7 = Ideal::parse(&r7, "y, z").unwrap();
        let b = bracket_power(&yz7, 49).unwrap();
        assert_eq!(b.generators(), &[r7.parse("y^49").unwrap(), r7.parse("z^49").unwrap()]);
    }

    #[test]
    fn colon_examples() {
        let r = PolyRing::standard(3, &["x", "y"]).unwrap();
        let c = ideal_colon(&Ideal::parse(&r, "x^3").unwrap(), &Ideal::parse(&r, "x").unwrap()).unwrap();
        assert_eq!(c.generators(), &[r.parse("x^2").unwrap()]);
        let c = ideal_colon(&Ideal::parse(&r, "x^2*y").unwrap(), &Ideal::parse(&r, "y").unwrap()).unwrap();
        assert_eq!(c.generators(), &[r.parse("x^2").unwrap()]);

        let r = PolyRing::standard(2, &["a", "b", "c", "d"]).unwrap();
        let h = r.parse("a*d-b*c").unwrap();
        let i = Ideal::new(&r, vec![h.pow(2)]).unwrap();
        let c = ideal_colon(&i, &Ideal::new(&r, vec![h.clone()]).unwrap()).unwrap();
        let hi = Ideal::new(&r, vec![h.clone()]).unwrap();
        for g in c.generators() {
            assert!(hi.contains(g).unwrap());
        }
        assert!(c.contains(&h).unwrap());
    }

    #[test]
    fn multi_generator_colon() {
        let r = PolyRing::standard(5, &["x", "y"]).unwrap();
        // (x^2, x*y, y^2) : (x, y) = (x, y)
        let i = Ideal::parse(&r, "x^2, x*y, y^2").unwrap();
        let m = Ideal::parse(&r, "x, y").unwrap();
        let c = i.colon(&m).unwrap();
        assert!(c.contains(&r.parse("x").unwrap()).unwrap());
        assert!(c.contains(&r.parse("y").unwrap()).unwrap());
        assert!(!c.contains(&r.constant(1)).unwrap());
        for g in c.generators() {
            for j in m.generators() {
                assert!(i.contains(&g.mul(j)).unwrap());
            }
        }
    }

    #[test]
    fn intersection_of_coordinate_ideals() {
        let r = PolyRing::standard(3, &["x", "y"]).unwrap();
        let a = Ideal::parse(&r, "x").unwrap();
        let b = Ideal::parse(&r, "y").unwrap();
        let meet = a.intersection(&b).unwrap();
        assert_eq!(meet.groebner(), &[r.parse("x*y").unwrap()]);
    }

    #[test]
    fn finite_quotient_monomials() {
        let r = cusp_ring();
        let i = Ideal::parse(&r, "x^2+y^3+z^3, y, z").unwrap();
        let sm = i.finite_standard_monomials().unwrap();
        assert_eq!(sm.len(), 2);
        let open = Ideal::parse(&r, "y, z").unwrap();
        assert!(open.finite_standard_monomials().is_none());
    }

    #[test]
    fn context_mismatch_is_reported() {
        let r = cusp_ring();
        let other = PolyRing::standard(3, &["x"]).unwrap();
        assert!(matches!(
            Ideal::new(&r, vec![other.parse("x").unwrap()]),
            Err(Error::ContextMismatch)
        ));
    }
}
