//! Buchberger's algorithm with the product and chain criteria.

use std::collections::{BTreeMap, HashSet};

use super::{Monomial, Polynomial, RingRef};
use crate::arith::Field;

/// Full reduction of `f` by `basis`: the result has no term divisible by a
/// leading monomial of the basis.
pub fn reduce(f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let ring = f.ring().clone();
    let field = ring.field();
    let heads: Vec<(&Monomial, u32, &Polynomial)> = basis
        .iter()
        .filter_map(|g| g.leading().map(|(m, c)| (m, field.inv(c).expect("nonzero"), g)))
        .collect();
    let mut work: BTreeMap<Monomial, u32> = f.terms().iter().cloned().collect();
    let mut remainder = Vec::new();
    while let Some((m, c)) = work.pop_last() {
        match heads.iter().find(|(lm, _, _)| lm.divides(&m)) {
            Some((lm, inv, g)) => {
                let q = m.div(lm).expect("divisible");
                let factor = field.mul(&c, inv);
                for (gm, gc) in &g.terms()[1..] {
                    let key = gm.mul(&q);
                    let delta = field.mul(&factor, gc);
                    let updated = field.sub(work.get(&key).unwrap_or(&0), &delta);
                    if updated == 0 {
                        work.remove(&key);
                    } else {
                        work.insert(key, updated);
                    }
                }
            }
            None => remainder.push((m, c)),
        }
    }
    Polynomial::from_sorted_terms(&ring, remainder)
}

fn s_polynomial(ring: &RingRef, f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (fm, fc) = f.leading().expect("nonzero");
    let (gm, gc) = g.leading().expect("nonzero");
    let lcm = ring.lcm(fm, gm);
    let field = ring.field();
    let a = f.mul_term(&lcm.div(fm).unwrap(), field.inv(fc).unwrap());
    let b = g.mul_term(&lcm.div(gm).unwrap(), field.inv(gc).unwrap());
    a.sub(&b)
}

fn key(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

/// Reduced Gröbner basis of the ideal generated by `generators`: monic,
/// no leading monomial divides another, tails fully reduced, sorted by
/// increasing leading monomial.
pub fn groebner_basis(generators: &[Polynomial]) -> Vec<Polynomial> {
    let Some(first) = generators.iter().find(|g| !g.is_zero()) else {
        return Vec::new();
    };
    let ring = first.ring().clone();
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let push = |basis: &mut Vec<Polynomial>, pending: &mut HashSet<(usize, usize)>, g: Polynomial| {
        let idx = basis.len();
        for i in 0..idx {
            pending.insert((i, idx));
        }
        basis.push(g.monic());
    };

    for g in generators {
        let r = reduce(g, &basis);
        if !r.is_zero() {
            push(&mut basis, &mut pending, r);
        }
    }

    while !pending.is_empty() {
        // normal selection strategy: smallest lcm first
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = ring.lcm(basis[a.0].leading_monomial().unwrap(), basis[a.1].leading_monomial().unwrap());
                let lb = ring.lcm(basis[b.0].leading_monomial().unwrap(), basis[b.1].leading_monomial().unwrap());
                la.cmp(&lb).then(a.cmp(b))
            })
            .unwrap();
        pending.remove(&(i, j));
        let mi = basis[i].leading_monomial().unwrap().clone();
        let mj = basis[j].leading_monomial().unwrap().clone();
        if mi.is_coprime(&mj) {
            continue;
        }
        let lcm = ring.lcm(&mi, &mj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().unwrap().divides(&lcm)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&ring, &basis[i], &basis[j]);
        let r = reduce(&s, &basis);
        if !r.is_zero() {
            push(&mut basis, &mut pending, r);
        }
    }

    interreduce(basis)
}

fn interreduce(mut basis: Vec<Polynomial>) -> Vec<Polynomial> {
    basis.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in basis {
        let lm = g.leading_monomial().unwrap();
        if !minimal
            .iter()
            .any(|h| h.leading_monomial().unwrap().divides(lm))
        {
            minimal.push(g);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        reduced.push(reduce(&minimal[i], &others).monic());
    }
    reduced
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let r = PolyRing::standard(2, &["x", "y"]).unwrap();
        let gens = vec![r.parse("x^2").unwrap(), r.parse("y^2").unwrap()];
        let gb = groebner_basis(&gens);
        assert_eq!(gb.len(), 2);
        assert!(gb.contains(&gens[0]) && gb.contains(&gens[1]));
    }

    #[test]
    fn eliminates_to_x_minus_y() {
        let r = PolyRing::standard(3, &["x", "y"]).unwrap();
        let gens = vec![r.parse("x*y-1").unwrap(), r.parse("y^2-1").unwrap()];
        let gb = groebner_basis(&gens);
        assert!(gb.contains(&r.parse("x-y").unwrap()), "{gb:?}");
    }

    #[test]
    fn reduction_kills_x_squared_in_char_two() {
        let r = PolyRing::new(2, vec!["x".into(), "y".into(), "z".into()], vec![3, 2, 2]).unwrap();
        let gens = vec![
            r.parse("x^2+y^3+z^3").unwrap(),
            r.parse("y^2").unwrap(),
            r.parse("z^2").unwrap(),
        ];
        let gb = groebner_basis(&gens);
        assert!(reduce(&r.parse("x^2").unwrap(), &gb).is_zero());
    }

    #[test]
    fn idempotent_on_cyclic_example() {
        let r = PolyRing::standard(7, &["a", "b", "c"]).unwrap();
        let gens = vec![
            r.parse("a+b+c").unwrap(),
            r.parse("a*b+b*c+c*a").unwrap(),
            r.parse("a*b*c-1").unwrap(),
        ];
        let gb = groebner_basis(&gens);
        assert_eq!(groebner_basis(&gb), gb);
        for g in &gens {
            assert!(reduce(g, &gb).is_zero());
        }
    }
}
