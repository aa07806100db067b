//! Vector fields with exponential-polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::coeffring::{
    int, monomial_factors, signed_bodies, write_signed_terms, Coeff, CoeffError, ExpMonomial,
    ExpPoly, GaussianRational, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("field has no coefficient slots")]
    Empty,
    #[error("cannot project: coefficient of d{slot} depends on dropped variable x{variable}")]
    ProjectionDependence { slot: usize, variable: usize },
    #[error("projection target {k} exceeds dimension {dim}")]
    ProjectionTarget { k: usize, dim: usize },
    #[error("coefficient of d{slot} has polynomial dependence on x{variable}; not an eigenfield sum")]
    PolynomialDependence { slot: usize, variable: usize },
    #[error("substitution x{variable} = exp(u{variable}) leaves the exp-polynomial class at term `{term}` of d{slot}")]
    Substitution { slot: usize, variable: usize, term: String },
}

/// `sum_j coeffs[j] * d/dx_j` on `C^dim`.
#[derive(Clone, PartialEq, Debug)]
pub struct VectorField<C: Coeff = GaussianRational> {
    dim: usize,
    coeffs: Vec<ExpPoly<C>>,
}

impl<C: Coeff + Eq> Eq for VectorField<C> {}

impl<C: Coeff> VectorField<C> {
    pub fn new(coeffs: Vec<ExpPoly<C>>) -> Result<Self, FieldError> {
        let dim = coeffs.len();
        if dim == 0 {
            return Err(FieldError::Empty);
        }
        if let Some(bad) = coeffs.iter().find(|c| c.dim() != dim) {
            return Err(CoeffError::DimensionMismatch { left: dim, right: bad.dim() }.into());
        }
        Ok(Self { dim, coeffs })
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, coeffs: vec![ExpPoly::zero(dim); dim] }
    }

    /// The coordinate field `d/dx_j` (0-based).
    pub fn coordinate(dim: usize, j: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coeffs[j] = ExpPoly::one(dim);
        v
    }

    /// `f * d/dx_j`.
    pub fn single(j: usize, f: ExpPoly<C>) -> Self {
        let mut v = Self::zero(f.dim());
        v.coeffs[j] = f;
        v
    }

    /// `exp(<freq, x>) * sum_j consts[j] d/dx_j`.
    pub fn exp_scaled(freq: Vec<Rational>, consts: Vec<C>) -> Self {
        let dim = freq.len();
        let e = ExpPoly::exp_linear(freq);
        Self { dim, coeffs: consts.iter().map(|c| e.scale(c)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[ExpPoly<C>] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &ExpPoly<C> {
        &self.coeffs[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ExpPoly::is_zero)
    }

    /// All `(slot, monomial, coefficient)` triples, slot-major.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &ExpMonomial, &C)> {
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(j, p)| p.terms().map(move |(m, c)| (j, m, c)))
    }

    fn check_dim(&self, other: &Self) -> Result<(), FieldError> {
        if self.dim != other.dim {
            return Err(CoeffError::DimensionMismatch { left: self.dim, right: other.dim }.into());
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_dim(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { dim: self.dim, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_dim(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { dim: self.dim, coeffs })
    }

    pub fn neg(&self) -> Self {
        Self { dim: self.dim, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self { dim: self.dim, coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    /// `h * self` for a scalar function `h`.
    pub fn mul_function(&self, h: &ExpPoly<C>) -> Result<Self, FieldError> {
        let coeffs = self.coeffs.iter().map(|p| h.try_mul(p)).collect::<Result<_, _>>()?;
        Ok(Self { dim: self.dim, coeffs })
    }

    /// The directional derivative `X(h) = sum_i X_i * dh/dx_i`.
    pub fn apply(&self, h: &ExpPoly<C>) -> Result<ExpPoly<C>, FieldError> {
        if h.dim() != self.dim {
            return Err(CoeffError::DimensionMismatch { left: self.dim, right: h.dim() }.into());
        }
        let mut acc = ExpPoly::zero(self.dim);
        for (i, xi) in self.coeffs.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let d = h.partial(i)?;
            acc.add_product(xi, &d);
        }
        Ok(acc)
    }

    /// Lie bracket `[X, Y]_j = sum_i (X_i dY_j/dx_i - Y_i dX_j/dx_i)`.
    pub fn bracket(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_dim(other)?;
        let coeffs = (0..self.dim)
            .map(|j| {
                let a = self.apply(&other.coeffs[j])?;
                let b = other.apply(&self.coeffs[j])?;
                Ok(&a - &b)
            })
            .collect::<Result<_, FieldError>>()?;
        Ok(Self { dim: self.dim, coeffs })
    }

    /// Truncation to the first `k` slots and variables. Requires every
    /// coefficient to be independent of `x_{k+1}, ..., x_N`.
    pub fn project(&self, k: usize) -> Result<Self, FieldError> {
        if k == 0 || k > self.dim {
            return Err(FieldError::ProjectionTarget { k, dim: self.dim });
        }
        for (slot, p) in self.coeffs.iter().enumerate() {
            if let Some(v) = (k..self.dim).find(|&v| p.depends_on(v)) {
                return Err(FieldError::ProjectionDependence { slot: slot + 1, variable: v + 1 });
            }
        }
        let coeffs = self.coeffs[..k]
            .iter()
            .map(|p| p.map_monomials(k, |m| m.truncated(k)))
            .collect();
        Ok(Self { dim: k, coeffs })
    }

    /// Splits `self` into eigenfields of `ad(d/dx_i)`, eigenvalues in
    /// decreasing order. Only pure exponential dependence on `x_i` is allowed.
    pub fn eigenfield_decompose(&self, i: usize) -> Result<Vec<(Rational, Self)>, FieldError> {
        if i >= self.dim {
            return Err(CoeffError::IndexOutOfRange { index: i, dim: self.dim }.into());
        }
        let mut groups: BTreeMap<Rational, Vec<(usize, ExpMonomial, C)>> = BTreeMap::new();
        for (slot, m, c) in self.terms() {
            if m.pow()[i] != 0 {
                return Err(FieldError::PolynomialDependence { slot: slot + 1, variable: i + 1 });
            }
            groups.entry(m.freq()[i].clone()).or_default().push((slot, m.clone(), c.clone()));
        }
        Ok(groups
            .into_iter()
            .rev()
            .map(|(lambda, terms)| {
                let mut v = Self::zero(self.dim);
                for (slot, m, c) in terms {
                    v.coeffs[slot].add_term(m, c);
                }
                (lambda, v)
            })
            .collect())
    }

    /// Push-forward under the torus chart `x_i = exp(u_i)` for `i` in
    /// `subset` (0-based). Fails if a term carries `exp(q x_i)` with `q != 0`
    /// for a substituted variable, since `exp(q exp(u_i))` is not an
    /// exponential-polynomial.
    pub fn substitute_exp(&self, subset: &[usize]) -> Result<Self, FieldError> {
        let mut mask = vec![false; self.dim];
        for &i in subset {
            if i >= self.dim {
                return Err(CoeffError::IndexOutOfRange { index: i, dim: self.dim }.into());
            }
            mask[i] = true;
        }
        let mut out = Self::zero(self.dim);
        for (slot, m, c) in self.terms() {
            let mut freq = m.freq().to_vec();
            let mut pow = m.pow().to_vec();
            for i in (0..self.dim).filter(|&i| mask[i]) {
                if !freq[i].is_zero() {
                    return Err(FieldError::Substitution {
                        slot: slot + 1,
                        variable: i + 1,
                        term: {
                            let fs = monomial_factors(m);
                            if fs.is_empty() { "1".to_string() } else { fs.join("*") }
                        },
                    });
                }
                freq[i] = int(pow[i] as i64);
                pow[i] = 0;
            }
            if mask[slot] {
                freq[slot] = &freq[slot] - Rational::one();
            }
            out.coeffs[slot].add_term(ExpMonomial::with_parts(freq, pow), c.clone());
        }
        Ok(out)
    }

    /// Relabels coordinates: coordinate `i` becomes coordinate `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim, "permutation length must equal dimension");
        let mut out = Self::zero(self.dim);
        for (slot, m, c) in self.terms() {
            out.coeffs[perm[slot]].add_term(m.permuted(perm), c.clone());
        }
        out
    }

    /// Places `self` on coordinates `offset..offset+dim` of `C^total`.
    pub fn embed(&self, offset: usize, total: usize) -> Self {
        assert!(offset + self.dim <= total, "embedding out of range");
        let mut out = Self::zero(total);
        for (slot, m, c) in self.terms() {
            out.coeffs[offset + slot].add_term(m.embedded(offset, total), c.clone());
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> VectorField<D> {
        VectorField { dim: self.dim, coeffs: self.coeffs.iter().map(|p| p.map_coeffs(&f)).collect() }
    }

    /// True when every coefficient is a constant.
    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|p| p.as_constant().is_some())
    }
}

impl VectorField<GaussianRational> {
    /// Value of the field at a point, one complex entry per slot.
    pub fn eval_numeric(&self, point: &[f64]) -> Result<Vec<Complex64>, FieldError> {
        Ok(self.coeffs.iter().map(|p| p.eval_numeric(point)).collect::<Result<_, _>>()?)
    }

    /// `d/dx_j` scaled by a rational.
    pub fn scaled_coordinate(dim: usize, j: usize, c: Rational) -> Self {
        Self::coordinate(dim, j).scale(&GaussianRational::real(c))
    }
}

impl fmt::Display for VectorField<GaussianRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bodies = self.terms().flat_map(|(slot, m, c)| {
            let mut factors = monomial_factors(m);
            factors.push(format!("d{}", slot + 1));
            signed_bodies(c, &factors)
        });
        write_signed_terms(f, bodies)
    }
}

/// Sum of fields, all of dimension `dim`.
pub fn sum_fields<'a, C: Coeff + 'a>(
    dim: usize,
    fields: impl IntoIterator<Item = &'a VectorField<C>>,
) -> Result<VectorField<C>, FieldError> {
    fields.into_iter().try_fold(VectorField::zero(dim), |acc, f| acc.try_add(f))
}

/// Linear combination `sum_k coeffs[k] * fields[k]`.
pub fn combine<C: Coeff>(dim: usize, coeffs: &[C], fields: &[VectorField<C>]) -> Result<VectorField<C>, FieldError> {
    let mut acc = VectorField::zero(dim);
    for (c, f) in coeffs.iter().zip(fields) {
        if !c.is_zero() {
            acc = acc.try_add(&f.scale(c))?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rat;
    use proptest::prelude::*;

    type F = VectorField<GaussianRational>;
    type P = ExpPoly<GaussianRational>;

    fn d(dim: usize, j: usize) -> F {
        F::coordinate(dim, j)
    }

    fn e(freq: &[i64]) -> P {
        P::exp_linear(freq.iter().map(|&q| int(q)).collect())
    }

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    #[test]
    fn coordinate_field_acts_on_eigenfield() {
        let ex = F::single(0, e(&[1]));
        assert_eq!(d(1, 0).bracket(&ex).unwrap(), ex);
    }

    #[test]
    fn sl2_bracket_value() {
        let a = F::single(0, e(&[1]));
        let b = F::single(0, e(&[-1]));
        assert_eq!(a.bracket(&b).unwrap(), d(1, 0).scale(&g(-2)));
    }

    #[test]
    fn coordinate_fields_commute() {
        assert!(d(2, 0).bracket(&d(2, 1)).unwrap().is_zero());
    }

    #[test]
    fn projection_truncates() {
        // exp(x1)(d1 + d3) -> exp(x1) d1 on C^2
        let x = F::single(0, e(&[1, 0, 0])).try_add(&F::single(2, e(&[1, 0, 0]))).unwrap();
        let p = x.project(2).unwrap();
        assert_eq!(p, F::single(0, e(&[1, 0])));
        assert_eq!(x.project(3).unwrap(), x);
        let bad = F::single(0, e(&[0, 0, 1]));
        assert_eq!(bad.project(2), Err(FieldError::ProjectionDependence { slot: 1, variable: 3 }));
    }

    #[test]
    fn eigenfield_decomposition() {
        let x = F::single(1, e(&[1, 0])).try_add(&d(2, 0)).unwrap();
        let parts = x.eigenfield_decompose(0).unwrap();
        assert_eq!(parts, vec![(int(1), F::single(1, e(&[1, 0]))), (int(0), d(2, 0))]);
        assert_eq!(d(2, 0).eigenfield_decompose(0).unwrap(), vec![(int(0), d(2, 0))]);
        let poly = F::single(1, P::var(2, 0));
        assert_eq!(
            poly.eigenfield_decompose(0),
            Err(FieldError::PolynomialDependence { slot: 2, variable: 1 })
        );
    }

    #[test]
    fn torus_substitution() {
        let x1 = P::var(1, 0);
        assert_eq!(F::single(0, x1).substitute_exp(&[0]).unwrap(), d(1, 0));

        // x1 d2 -> exp(u1 - u2) d2
        let f = F::single(1, P::var(2, 0));
        assert_eq!(f.substitute_exp(&[0, 1]).unwrap(), F::single(1, e(&[1, -1])));

        // x1 * sum_j x_j d_j -> exp(u1) sum_j d_j
        let n = 3;
        let euler = (0..n)
            .map(|j| F::single(j, &P::var(n, 0) * &P::var(n, j)))
            .fold(F::zero(n), |a, b| a.try_add(&b).unwrap());
        let expected = (0..n)
            .map(|j| F::single(j, e(&[1, 0, 0])))
            .fold(F::zero(n), |a, b| a.try_add(&b).unwrap());
        assert_eq!(euler.substitute_exp(&[0, 1, 2]).unwrap(), expected);

        assert!(matches!(
            F::single(0, e(&[1])).substitute_exp(&[0]),
            Err(FieldError::Substitution { variable: 1, .. })
        ));
    }

    #[test]
    fn display_uses_grammar() {
        let f = F::single(0, e(&[1, 0])).scale(&g(2)).try_sub(&F::single(1, e(&[1, 0]))).unwrap();
        assert_eq!(f.to_string(), "2*exp(x1)*d1 - exp(x1)*d2");
        let h = F::single(0, P::constant(1, GaussianRational::new(rat(-1, 2), int(1))));
        assert_eq!(h.to_string(), "-1/2*d1 + i*d1");
        assert_eq!(F::zero(2).to_string(), "0");
    }

    fn small_field(dim: usize) -> impl Strategy<Value = F> {
        let term = (
            0..dim,
            proptest::collection::vec(0u32..=2, dim),
            proptest::collection::vec(-2i64..=2, dim),
            -3i64..=3,
            -2i64..=2,
        )
            .prop_map(move |(slot, pow, freq, re, im)| {
                let m = ExpMonomial::new(pow, freq.into_iter().map(int).collect());
                F::single(slot, P::monomial(m, GaussianRational::new(int(re), int(im))))
            });
        proptest::collection::vec(term, 0..=4)
            .prop_map(move |ts| sum_fields(dim, &ts).unwrap())
    }

    proptest! {
        #[test]
        fn antisymmetry(x in small_field(2), y in small_field(2)) {
            prop_assert_eq!(x.bracket(&y).unwrap(), y.bracket(&x).unwrap().neg());
        }

        #[test]
        fn jacobi(x in small_field(2), y in small_field(2), z in small_field(2)) {
            let a = x.bracket(&y.bracket(&z).unwrap()).unwrap();
            let b = y.bracket(&z.bracket(&x).unwrap()).unwrap();
            let c = z.bracket(&x.bracket(&y).unwrap()).unwrap();
            prop_assert!(sum_fields(2, [&a, &b, &c]).unwrap().is_zero());
        }

        #[test]
        fn substitution_is_equivariant(x in small_field(2), y in small_field(2)) {
            // only fields without exponential dependence on substituted variables qualify
            let strip = |f: &F| F::new(f.coeffs().iter().map(|p| P::from_terms(2, p.terms()
                .filter(|(m, _)| m.freq()[0].is_zero())
                .map(|(m, c)| (m.clone(), c.clone())))).collect()).unwrap();
            let (x, y) = (strip(&x), strip(&y));
            let lhs = x.bracket(&y).unwrap().substitute_exp(&[0]).unwrap();
            let rhs = x.substitute_exp(&[0]).unwrap().bracket(&y.substitute_exp(&[0]).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn eigen_decomposition_reconstructs(x in small_field(2)) {
            let x = F::new(x.coeffs().iter().map(|p| P::from_terms(2, p.terms()
                .filter(|(m, _)| m.pow()[1] == 0)
                .map(|(m, c)| (m.clone(), c.clone())))).collect()).unwrap();
            let parts = x.eigenfield_decompose(1).unwrap();
            let total = sum_fields(2, parts.iter().map(|(_, v)| v)).unwrap();
            prop_assert_eq!(total, x);
            for (lambda, v) in &parts {
                let image = d(2, 1).bracket(v).unwrap();
                prop_assert_eq!(image, v.scale(&GaussianRational::real(lambda.clone())));
            }
        }
    }
}
