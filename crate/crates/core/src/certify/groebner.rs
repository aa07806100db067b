//! Reduced Groebner bases by Buchberger's algorithm (normal selection
//! strategy, coprime criterion), sized for systems of a dozen variables.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use super::poly::{Monomial, Poly};

pub const MAX_BASIS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("Groebner basis grew past {cap} polynomials")]
    BasisCap { cap: usize },
}

/// Normal form of `p` modulo `basis` (full reduction).
pub fn normal_form(p: &Poly, basis: &[Poly]) -> Poly {
    let mut rem = Poly::zero();
    let mut p = p.clone();
    while let Some((m, c)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
        let divisor = basis.iter().find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(&m)));
        match divisor {
            Some(g) => {
                let (lm, lc) = g.leading().unwrap();
                let q = lm.quotient_of(&m);
                p = &p - &g.mul_term(&q, &(&c / lc));
            }
            None => {
                let t = Poly::term(m, c);
                p = &p - &t;
                rem = &rem + &t;
            }
        }
    }
    rem
}

fn s_polynomial(f: &Poly, g: &Poly) -> Poly {
    let (mf, cf) = f.leading().unwrap();
    let (mg, cg) = g.leading().unwrap();
    let l = mf.lcm(mg);
    &f.mul_term(&mf.quotient_of(&l), &cf.recip()) - &g.mul_term(&mg.quotient_of(&l), &cg.recip())
}

/// The reduced, monic Groebner basis of the ideal generated by `polys`,
/// sorted by leading monomial.
pub fn groebner_basis(polys: &[Poly], cap: usize) -> Result<Vec<Poly>, GroebnerError> {
    let mut basis: Vec<Poly> = Vec::new();
    for p in polys {
        let r = normal_form(p, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
        }
    }
    if basis.iter().any(Poly::is_constant) {
        return Ok(vec![Poly::one()]);
    }
    if basis.len() > cap {
        return Err(GroebnerError::BasisCap { cap });
    }
    // pending pairs keyed by lcm so the smallest is taken first
    let mut pairs: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            push_pair(&basis, &mut pairs, i, j);
        }
    }
    while let Some(pair) = pairs.pop_first() {
        let (_, i, j) = pair;
        let r = normal_form(&s_polynomial(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![Poly::one()]);
        }
        basis.push(r.monic());
        if basis.len() > cap {
            return Err(GroebnerError::BasisCap { cap });
        }
        let k = basis.len() - 1;
        for i in 0..k {
            push_pair(&basis, &mut pairs, i, k);
        }
    }
    Ok(reduce_basis(basis))
}

fn push_pair(basis: &[Poly], pairs: &mut BTreeSet<(Monomial, usize, usize)>, i: usize, j: usize) {
    let a = basis[i].leading_monomial().unwrap();
    let b = basis[j].leading_monomial().unwrap();
    if !a.coprime(b) {
        pairs.insert((a.lcm(b), i, j));
    }
}

fn reduce_basis(basis: Vec<Poly>) -> Vec<Poly> {
    // drop elements whose leading monomial is divisible by another's
    let mut minimal: Vec<Poly> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let lm = g.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(l, h)| {
            let hm = h.leading_monomial().unwrap();
            l != k && hm.divides(lm) && (hm != lm || l < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced: Vec<Poly> = (0..minimal.len())
        .map(|k| {
            let others: Vec<Poly> =
                minimal.iter().enumerate().filter(|&(l, _)| l != k).map(|(_, h)| h.clone()).collect();
            normal_form(&minimal[k], &others).monic()
        })
        .collect();
    reduced.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    reduced
}

/// Ideal membership through the normal form against a Groebner basis.
pub fn in_ideal(p: &Poly, basis: &[Poly]) -> bool {
    normal_form(p, basis).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::int;

    fn v(i: usize) -> Poly {
        Poly::var(i)
    }

    fn c(n: i64) -> Poly {
        Poly::constant(int(n))
    }

    #[test]
    fn inconsistent_system() {
        let gb = groebner_basis(&[&(&v(0) * &v(1)) - &c(1), v(0)], MAX_BASIS).unwrap();
        assert_eq!(gb, vec![c(1)]);
    }

    #[test]
    fn twisted_cubic() {
        // <y - x^2, z - x^3> in degrevlex x > y > z
        let (x, y, z) = (v(0), v(1), v(2));
        let f = &y - &(&x * &x);
        let g = &z - &(&(&x * &x) * &x);
        let gb = groebner_basis(&[f.clone(), g.clone()], MAX_BASIS).unwrap();
        assert!(gb.iter().all(|p| in_ideal(p, &gb)));
        assert!(in_ideal(&f, &gb) && in_ideal(&g, &gb));
        // y^2 - x z is in the ideal
        assert!(in_ideal(&(&(&y * &y) - &(&x * &z)), &gb));
        assert!(!in_ideal(&x, &gb));
        assert_eq!(gb.len(), 3);
    }

    #[test]
    fn reduced_basis_is_unique_under_permutation() {
        let (x, y, z) = (v(0), v(1), v(2));
        let polys = vec![
            &(&x * &y) - &z,
            &(&y * &z) - &x,
            &(&(&z * &x) - &y) + &c(1),
        ];
        let a = groebner_basis(&polys, MAX_BASIS).unwrap();
        let mut rev = polys.clone();
        rev.reverse();
        let b = groebner_basis(&rev, MAX_BASIS).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cap_is_enforced() {
        let (x, y) = (v(0), v(1));
        let polys = vec![&(&(&x * &x) * &y) - &(&y * &y), &(&(&y * &y) * &x) - &(&x * &x)];
        assert!(matches!(groebner_basis(&polys, 1), Err(GroebnerError::BasisCap { cap: 1 })));
    }
}
