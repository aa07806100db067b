//! Concrete realizations of products of `A`-type algebras by vector fields
//! whose Cartan subalgebra has the ambient dimension.
//!
//! Every realization comes as one `sl2` triple per simple root, normalised as
//! `[H, X] = X`, `[H, Y] = -Y`, `[X, Y] = H`.

use num_traits::Zero;
use serde::Serialize;

use crate::coeffring::{rat, ExpPoly, GaussianRational as Gq};
use crate::liestruct::{LieError, Subalgebra};
use crate::roots::SimpleType;
use crate::vfield::{FieldError, VectorField};

#[derive(Clone, Debug, PartialEq)]
pub struct Triple {
    pub x: VectorField,
    pub y: VectorField,
    pub h: VectorField,
}

impl Triple {
    fn map(&self, f: impl Fn(&VectorField) -> Result<VectorField, FieldError>) -> Result<Triple, FieldError> {
        Ok(Triple { x: f(&self.x)?, y: f(&self.y)?, h: f(&self.h)? })
    }

    /// `[H, X] = X`, `[H, Y] = -Y`, `[X, Y] = H`.
    pub fn satisfies_relations(&self) -> Result<bool, FieldError> {
        Ok(self.h.bracket(&self.x)? == self.x
            && self.h.bracket(&self.y)? == self.y.neg()
            && self.x.bracket(&self.y)? == self.h)
    }

    /// The rescaled triple `(2H, X, 2Y)` in the usual normalisation
    /// `[H, X] = 2X`, `[H, Y] = -2Y`, `[X, Y] = H`.
    pub fn satisfies_standard_relations(&self) -> Result<bool, FieldError> {
        let two = Gq::from_integer(2);
        let (h, y) = (self.h.scale(&two), self.y.scale(&two));
        Ok(h.bracket(&self.x)? == self.x.scale(&two)
            && h.bracket(&y)? == y.scale(&two).neg()
            && self.x.bracket(&y)? == h)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    ambient_dim: usize,
    declared_type: Vec<SimpleType>,
    triples: Vec<Triple>,
}

fn coord(n: usize, j: usize) -> VectorField {
    VectorField::coordinate(n, j)
}

fn monomial_field(n: usize, factors: &[usize], slot: usize, c: Gq) -> VectorField {
    let f = factors.iter().fold(ExpPoly::constant(n, c), |acc, &i| &acc * &ExpPoly::var(n, i));
    let mut coeffs = vec![ExpPoly::zero(n); n];
    coeffs[slot] = f;
    VectorField::new(coeffs).expect("n >= 1")
}

fn euler(n: usize) -> VectorField {
    (0..n).fold(VectorField::zero(n), |acc, j| {
        acc.try_add(&monomial_field(n, &[j], j, Gq::from_integer(1))).expect("same dimension")
    })
}

impl Realization {
    /// `A1^N` in canonical form: `X_i = exp(x_i) d_i`,
    /// `Y_i = -1/2 exp(-x_i) d_i`, `H_i = d_i`.
    pub fn a1_power(n: usize) -> Self {
        assert!(n >= 1, "a1_power needs N >= 1");
        let triples = (0..n)
            .map(|i| {
                let mut freq = vec![rat(0, 1); n];
                freq[i] = rat(1, 1);
                let plus = ExpPoly::exp_linear(freq.clone());
                freq[i] = rat(-1, 1);
                let minus = ExpPoly::exp_linear(freq).scale(&Gq::from_ratio(-1, 2));
                let mut x = vec![ExpPoly::zero(n); n];
                let mut y = vec![ExpPoly::zero(n); n];
                x[i] = plus;
                y[i] = minus;
                Triple { x: VectorField::new(x).unwrap(), y: VectorField::new(y).unwrap(), h: coord(n, i) }
            })
            .collect();
        Self { ambient_dim: n, declared_type: vec![SimpleType::a(1); n], triples }
    }

    /// `A_k` on `C^k` through the infinitesimal projective action
    /// `d_i`, `x_i d_j`, `x_i E` with `E = sum_j x_j d_j`.
    pub fn a_type(k: usize) -> Self {
        assert!(k >= 1, "a_type needs k >= 1");
        let half = Gq::from_ratio(1, 2);
        let mut triples: Vec<Triple> = (0..k - 1)
            .map(|i| {
                let hi = monomial_field(k, &[i], i, half.clone());
                let lo = monomial_field(k, &[i + 1], i + 1, half.clone());
                Triple {
                    x: monomial_field(k, &[i], i + 1, Gq::from_integer(1)),
                    y: monomial_field(k, &[i + 1], i, half.clone()),
                    h: hi.try_sub(&lo).unwrap(),
                }
            })
            .collect();
        let last = k - 1;
        let e = euler(k);
        triples.push(Triple {
            x: e.mul_function(&ExpPoly::var(k, last)).unwrap(),
            y: coord(k, last).scale(&Gq::from_ratio(-1, 2)),
            h: e.try_add(&monomial_field(k, &[last], last, Gq::from_integer(1))).unwrap().scale(&half),
        });
        Self { ambient_dim: k, declared_type: vec![SimpleType::a(k)], triples }
    }

    /// `A_{l_1} x ... x A_{l_d}` on consecutive coordinate blocks of `C^N`,
    /// `N = sum l_i`.
    pub fn product(ranks: &[usize]) -> Self {
        assert!(!ranks.is_empty() && ranks.iter().all(|&l| l >= 1), "product needs ranks >= 1");
        let n: usize = ranks.iter().sum();
        let mut offset = 0;
        let mut triples = Vec::new();
        for &l in ranks {
            for t in Realization::a_type(l).triples {
                triples.push(t.map(|v| Ok(v.embed(offset, n))).unwrap());
            }
            offset += l;
        }
        let declared_type = ranks.iter().map(|&l| SimpleType::a(l)).collect();
        Self { ambient_dim: n, declared_type, triples }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn declared_type(&self) -> &[SimpleType] {
        &self.declared_type
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn cartan(&self) -> Vec<VectorField> {
        self.triples.iter().map(|t| t.h.clone()).collect()
    }

    /// Named generators `H1..HN, X1..XN, Y1..YN`, in the order used for
    /// the bracket closure (so the Cartan elements are basis `0..N`).
    pub fn generators(&self) -> Vec<(String, VectorField)> {
        let pick: [(&str, fn(&Triple) -> &VectorField); 3] = [("H", |t| &t.h), ("X", |t| &t.x), ("Y", |t| &t.y)];
        pick.iter()
            .flat_map(|(name, f)| {
                self.triples.iter().enumerate().map(move |(i, t)| (format!("{}{}", name, i + 1), f(t).clone()))
            })
            .collect()
    }

    pub fn closure(&self, max_dim: usize) -> Result<Subalgebra, LieError> {
        let gens: Vec<VectorField> = self.generators().into_iter().map(|(_, v)| v).collect();
        Subalgebra::span_closure(&gens, max_dim)
    }

    pub fn expected_dim(&self) -> usize {
        self.declared_type.iter().map(|t| t.rank() * (t.rank() + 2)).sum()
    }

    /// Torus chart `x_i = exp(u_i)` on every coordinate, turning a Cartan of
    /// Euler-type fields into `span{d_u}` and root vectors into
    /// `exp(<k, u>)` times constant fields. Realizations whose Cartan
    /// already has constant coefficients are returned unchanged.
    pub fn straighten(&self) -> Result<Self, FieldError> {
        if self.triples.iter().all(|t| t.h.is_constant()) {
            return Ok(self.clone());
        }
        let all: Vec<usize> = (0..self.ambient_dim).collect();
        let triples = self.triples.iter().map(|t| t.map(|v| v.substitute_exp(&all))).collect::<Result<_, _>>()?;
        Ok(Self { ambient_dim: self.ambient_dim, declared_type: self.declared_type.clone(), triples })
    }

    pub fn audit(&self, max_dim: usize, seed: u64) -> Result<Audit, LieError> {
        let mut triple_relations = true;
        let mut standard_relations = true;
        for t in &self.triples {
            triple_relations &= t.satisfies_relations()?;
            standard_relations &= t.satisfies_standard_relations()?;
        }
        let closure = self.closure(max_dim)?;
        let killing_determinant = closure.killing_determinant();
        let cartan: Vec<usize> = (0..self.triples.len()).collect();
        let identified = closure.root_decomposition(&cartan).and_then(|cd| cd.identify_type());
        let generic_rank = closure.generic_rank(seed);
        Ok(Audit {
            declared_type: self.declared_type.clone(),
            triple_relations,
            standard_relations,
            closure_dim: closure.dim(),
            expected_dim: self.expected_dim(),
            semisimple: !killing_determinant.is_zero(),
            killing_determinant: killing_determinant.to_string(),
            identified_type: identified.as_ref().ok().cloned(),
            identification_error: identified.err().map(|e| e.to_string()),
            generic_rank,
            ambient_dim: self.ambient_dim,
        })
    }
}

/// Outcome of [`Realization::audit`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Audit {
    pub declared_type: Vec<SimpleType>,
    pub triple_relations: bool,
    pub standard_relations: bool,
    pub closure_dim: usize,
    pub expected_dim: usize,
    pub semisimple: bool,
    pub killing_determinant: String,
    pub identified_type: Option<Vec<SimpleType>>,
    pub identification_error: Option<String>,
    pub generic_rank: usize,
    pub ambient_dim: usize,
}

impl Audit {
    pub fn passed(&self) -> bool {
        self.triple_relations
            && self.standard_relations
            && self.closure_dim == self.expected_dim
            && self.semisimple
            && self.identified_type.as_deref() == Some(self.declared_type.as_slice())
            && self.generic_rank == self.ambient_dim
    }

    /// Names of the checks that failed.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.triple_relations {
            out.push("triple relations");
        }
        if !self.standard_relations {
            out.push("standard triple relations");
        }
        if self.closure_dim != self.expected_dim {
            out.push("closure dimension");
        }
        if !self.semisimple {
            out.push("semisimplicity");
        }
        if self.identified_type.as_deref() != Some(self.declared_type.as_slice()) {
            out.push("type identification");
        }
        if self.generic_rank != self.ambient_dim {
            out.push("generic rank");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liestruct::{DEFAULT_MAX_DIM, DEFAULT_SEED};

    #[test]
    fn a1_power_triples() {
        let r = Realization::a1_power(1);
        let t = &r.triples()[0];
        assert_eq!(t.x.bracket(&t.y).unwrap(), coord(1, 0));
        assert_eq!(t.h.bracket(&t.x).unwrap(), t.x);
        let r2 = Realization::a1_power(2);
        let (a, b) = (&r2.triples()[0], &r2.triples()[1]);
        assert!(a.x.bracket(&b.x).unwrap().is_zero());
        assert!(a.y.bracket(&b.y).unwrap().is_zero());
    }

    #[test]
    fn audits_pass() {
        for r in [
            Realization::a1_power(1),
            Realization::a1_power(3),
            Realization::a_type(1),
            Realization::a_type(2),
            Realization::a_type(3),
            Realization::product(&[2, 1]),
        ] {
            let audit = r.audit(DEFAULT_MAX_DIM, DEFAULT_SEED).unwrap();
            assert!(audit.passed(), "{:?}", audit);
        }
    }

    #[test]
    fn straighten_a1() {
        let s = Realization::a_type(1).straighten().unwrap();
        let t = &s.triples()[0];
        assert_eq!(t.h.to_string(), "d1");
        assert_eq!(t.x.to_string(), "exp(x1)*d1");
        assert_eq!(t.y.to_string(), "-1/2*exp(-x1)*d1");
    }

    #[test]
    fn straightened_root_vectors_have_constant_coefficients() {
        let s = Realization::a_type(3).straighten().unwrap();
        let closure = s.closure(DEFAULT_MAX_DIM).unwrap();
        assert_eq!(closure.dim(), 15);
        for v in closure.basis() {
            assert!(v.terms().all(|(_, m, _)| m.pow().iter().all(|&p| p == 0)));
        }
        assert!(s.cartan().iter().all(VectorField::is_constant));
    }
}
