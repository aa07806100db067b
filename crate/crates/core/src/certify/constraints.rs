//! Polynomial constraints on the constants of the root-vector ansatz
//! `X_i = exp(x_i) sum_j l_ij d_j`, `Y_i = exp(-x_i) sum_j m_ij d_j`,
//! and their exact solution by Groebner bases.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::groebner::{groebner_basis, in_ideal, MAX_BASIS};
use super::poly::Poly;
use super::CertifyError;
use crate::coeffring::{int, monomial_factors, ExpPoly, Rational};
use crate::vfield::VectorField;

/// Variable cap for [`solve_small`], counting the inverse variables added
/// for nonzero constraints.
pub const MAX_VARIABLES: usize = 12;

type SymField = VectorField<Poly>;

/// A bracket relation imposed on the ansatz; indices are 0-based positions
/// in the ansatz family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "indices", rename_all = "snake_case")]
pub enum Relation {
    /// `[X_i, Y_i] = d_i`: the Cartan element is the coordinate field.
    CartanCoordinate(usize),
    /// `[H_i, X_i] = X_i` and `[H_i, Y_i] = -Y_i` with `H_i = [X_i, Y_i]`.
    Eigen(usize),
    /// `[X_i, X_j] = [Y_i, Y_j] = [X_i, Y_j] = [X_j, Y_i] = 0`.
    Commute(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    /// The vanishing expression, e.g. `[X1,Y1] - d1`.
    pub expression: String,
    /// 1-based direction slot.
    pub slot: usize,
    /// The exponential-polynomial term whose coefficient vanishes.
    pub term: String,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coefficient of {}*d{} in {}", self.term, self.slot, self.expression)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub poly: Poly,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolyConstraintSystem {
    variables: Vec<String>,
    equations: Vec<Equation>,
}

impl PolyConstraintSystem {
    pub fn new(variables: Vec<String>) -> Self {
        Self { variables, equations: Vec::new() }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn variable(&self, name: &str) -> Result<usize, CertifyError> {
        self.variables.iter().position(|v| v == name).ok_or_else(|| CertifyError::UnknownVariable(name.into()))
    }

    pub fn push(&mut self, eq: Equation) -> Result<(), CertifyError> {
        if let Some(&v) = eq.poly.variables().iter().find(|&&v| v >= self.variables.len()) {
            return Err(CertifyError::UnknownVariable(format!("v{}", v)));
        }
        self.equations.push(eq);
        Ok(())
    }

    /// Adds the assumption `name = 0`.
    pub fn assume_zero(&mut self, name: &str) -> Result<(), CertifyError> {
        let v = self.variable(name)?;
        self.push(Equation {
            poly: Poly::var(v),
            provenance: Provenance { expression: format!("assumption {} = 0", name), slot: 0, term: "1".into() },
        })
    }

    pub fn equation_strings(&self) -> Vec<String> {
        self.equations.iter().map(|e| format!("{} = 0", e.poly.display_with(&self.variables))).collect()
    }

    /// Same equations listed in another order.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self { variables: self.variables.clone(), equations: order.iter().map(|&k| self.equations[k].clone()).collect() }
    }
}

/// Symbolic root vectors for `n` simple-root indices on `C^dim`.
#[derive(Clone, Debug)]
pub struct Ansatz {
    variables: Vec<String>,
    /// Global 0-based index of each family member, for naming.
    labels: Vec<usize>,
    x: Vec<SymField>,
    y: Vec<SymField>,
}

pub fn lambda_name(i: usize, j: usize) -> String {
    format!("l{}_{}", i + 1, j + 1)
}

pub fn mu_name(i: usize, j: usize) -> String {
    format!("m{}_{}", i + 1, j + 1)
}

impl Ansatz {
    pub fn new(n: usize) -> Self {
        let mut variables: Vec<String> = Vec::with_capacity(2 * n * n);
        for i in 0..n {
            variables.extend((0..n).map(|j| lambda_name(i, j)));
        }
        for i in 0..n {
            variables.extend((0..n).map(|j| mu_name(i, j)));
        }
        let field = |i: usize, sign: i64, offset: usize| {
            let mut freq = vec![Rational::zero(); n];
            freq[i] = int(sign);
            let e = ExpPoly::<Poly>::exp_linear(freq);
            let coeffs = (0..n).map(|j| e.scale(&Poly::var(offset + i * n + j))).collect();
            VectorField::new(coeffs).expect("n >= 1")
        };
        let x = (0..n).map(|i| field(i, 1, 0)).collect();
        let y = (0..n).map(|i| field(i, -1, n * n)).collect();
        Self { variables, labels: (0..n).collect(), x, y }
    }

    pub fn dim(&self) -> usize {
        self.x.first().map_or(0, |f| f.dim())
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn x(&self, i: usize) -> &SymField {
        &self.x[i]
    }

    pub fn y(&self, i: usize) -> &SymField {
        &self.y[i]
    }

    /// The members `i, j` only, moved to coordinates 1, 2 and projected to
    /// `C^2`. The projection is legal because their coefficients depend on
    /// `x_i, x_j` alone.
    pub fn restrict_to_pair(&self, i: usize, j: usize) -> Result<Self, CertifyError> {
        let n = self.dim();
        let mut perm = vec![usize::MAX; n];
        perm[i] = 0;
        perm[j] = 1;
        let mut next = 2;
        for p in perm.iter_mut().filter(|p| **p == usize::MAX) {
            *p = next;
            next += 1;
        }
        let reduce = |f: &SymField| f.permute(&perm).project(2);
        Ok(Self {
            variables: self.variables.clone(),
            labels: vec![self.labels[i], self.labels[j]],
            x: vec![reduce(&self.x[i])?, reduce(&self.x[j])?],
            y: vec![reduce(&self.y[i])?, reduce(&self.y[j])?],
        })
    }

    fn check_index(&self, i: usize) -> Result<(), CertifyError> {
        if i >= self.len() {
            return Err(CertifyError::UndefinedIndex { index: i + 1, n: self.len() });
        }
        Ok(())
    }

    fn name(&self, kind: char, i: usize) -> String {
        format!("{}{}", kind, self.labels[i] + 1)
    }

    fn vanishing(&self, f: &SymField, expression: String) -> Vec<Equation> {
        f.terms()
            .map(|(slot, m, c)| {
                let factors = monomial_factors(m);
                let term = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
                Equation { poly: c.clone(), provenance: Provenance { expression: expression.clone(), slot: slot + 1, term } }
            })
            .collect()
    }

    pub fn relation_equations(&self, rel: Relation) -> Result<Vec<Equation>, CertifyError> {
        let mut out = Vec::new();
        match rel {
            Relation::CartanCoordinate(i) => {
                self.check_index(i)?;
                let h = self.x[i].bracket(&self.y[i])?;
                let target = VectorField::coordinate(self.dim(), i);
                let expr = format!("[{},{}] - d{}", self.name('X', i), self.name('Y', i), i + 1);
                out.extend(self.vanishing(&h.try_sub(&target)?, expr));
            }
            Relation::Eigen(i) => {
                self.check_index(i)?;
                let h = self.x[i].bracket(&self.y[i])?;
                let (xn, yn, hn) = (self.name('X', i), self.name('Y', i), self.name('H', i));
                let hx = h.bracket(&self.x[i])?.try_sub(&self.x[i])?;
                out.extend(self.vanishing(&hx, format!("[{},{}] - {}", hn, xn, xn)));
                let hy = h.bracket(&self.y[i])?.try_add(&self.y[i])?;
                out.extend(self.vanishing(&hy, format!("[{},{}] + {}", hn, yn, yn)));
            }
            Relation::Commute(i, j) => {
                self.check_index(i)?;
                self.check_index(j)?;
                let pairs = [
                    (&self.x[i], &self.x[j], ('X', i), ('X', j)),
                    (&self.y[i], &self.y[j], ('Y', i), ('Y', j)),
                    (&self.x[i], &self.y[j], ('X', i), ('Y', j)),
                    (&self.x[j], &self.y[i], ('X', j), ('Y', i)),
                ];
                for (a, b, (ka, ia), (kb, ib)) in pairs {
                    let expr = format!("[{},{}]", self.name(ka, ia), self.name(kb, ib));
                    out.extend(self.vanishing(&a.bracket(b)?, expr));
                }
            }
        }
        Ok(out)
    }

    pub fn constraints(&self, relations: &[Relation]) -> Result<PolyConstraintSystem, CertifyError> {
        let mut sys = PolyConstraintSystem::new(self.variables.clone());
        for &rel in relations {
            for eq in self.relation_equations(rel)? {
                sys.push(eq)?;
            }
        }
        Ok(sys)
    }
}

/// The constraint system of the ansatz with `n` indices under `relations`.
pub fn ansatz_constraints(n: usize, relations: &[Relation]) -> Result<PolyConstraintSystem, CertifyError> {
    if n == 0 {
        return Err(CertifyError::Precondition("the ansatz needs at least one index".into()));
    }
    Ansatz::new(n).constraints(relations)
}

/// Relations of `A1^n` with the Cartan in coordinate form.
pub fn a1_power_relations(n: usize) -> Vec<Relation> {
    let mut rels: Vec<Relation> = (0..n).map(Relation::CartanCoordinate).collect();
    for j in 0..n {
        for i in 0..j {
            rels.push(Relation::Commute(i, j));
        }
    }
    rels
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "variables", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    /// The ideal is the whole ring: no solution.
    Inconsistent,
    /// These variables vanish on every solution.
    Forces(Vec<String>),
    /// Consistent, and no variable is forced to vanish.
    Open,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    /// Variables of the saturated ring, inverse variables last.
    pub variables: Vec<String>,
    /// Reduced degrevlex Groebner basis of the saturated ideal.
    pub basis: Vec<Poly>,
    pub classification: Classification,
}

impl Solution {
    pub fn basis_strings(&self) -> Vec<String> {
        self.basis.iter().map(|p| p.display_with(&self.variables).to_string()).collect()
    }
}

/// Decides the solution set of `sys` with the variables in `nonzero`
/// (indices into `sys.variables()`) required to be nonzero; each gets an
/// inverse `w` with `v*w - 1` added to the ideal.
pub fn solve_small(sys: &PolyConstraintSystem, nonzero: &[usize]) -> Result<Solution, CertifyError> {
    let mut used: Vec<usize> = sys.equations.iter().flat_map(|e| e.poly.variables()).collect();
    used.extend_from_slice(nonzero);
    used.sort();
    used.dedup();
    if let Some(&bad) = used.iter().find(|&&v| v >= sys.variables.len()) {
        return Err(CertifyError::UnknownVariable(format!("v{}", bad)));
    }
    let count = used.len() + nonzero.len();
    if count > MAX_VARIABLES {
        return Err(CertifyError::VariableCap { count, cap: MAX_VARIABLES });
    }
    let mut map = vec![usize::MAX; sys.variables.len()];
    for (k, &v) in used.iter().enumerate() {
        map[v] = k;
    }
    let mut names: Vec<String> = used.iter().map(|&v| sys.variables[v].clone()).collect();
    let rename_map: Vec<usize> = map.iter().map(|&m| if m == usize::MAX { 0 } else { m }).collect();
    let mut polys: Vec<Poly> = sys.equations.iter().map(|e| e.poly.rename(&rename_map)).collect();
    for (k, &v) in nonzero.iter().enumerate() {
        let w = used.len() + k;
        names.push(format!("inv_{}", sys.variables[v]));
        polys.push(&(&Poly::var(map[v]) * &Poly::var(w)) - &Poly::one());
    }
    let basis = groebner_basis(&polys, MAX_BASIS)?;
    let classification = if basis.len() == 1 && basis[0].is_one() {
        Classification::Inconsistent
    } else {
        let forced: Vec<String> = used
            .iter()
            .filter(|&&v| in_ideal(&Poly::var(map[v]), &basis))
            .map(|&v| sys.variables[v].clone())
            .collect();
        if forced.is_empty() {
            Classification::Open
        } else {
            Classification::Forces(forced)
        }
    };
    Ok(Solution { variables: names, basis, classification })
}

/// The single-index system that shows `l1_1 != 0`: consistent when `l1_1`
/// is declared nonzero, inconsistent once `l1_1 = 0` is imposed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingleIndexCheck {
    pub equations: Vec<String>,
    pub with_nonzero: Classification,
    pub with_zero: Classification,
}

impl SingleIndexCheck {
    pub fn holds(&self) -> bool {
        self.with_nonzero != Classification::Inconsistent && self.with_zero == Classification::Inconsistent
    }
}

pub fn single_index_check() -> Result<SingleIndexCheck, CertifyError> {
    let sys = ansatz_constraints(1, &[Relation::CartanCoordinate(0), Relation::Eigen(0)])?;
    let l11 = sys.variable(&lambda_name(0, 0))?;
    let with_nonzero = solve_small(&sys, &[l11])?.classification;
    let mut zero = sys.clone();
    zero.assume_zero(&lambda_name(0, 0))?;
    let with_zero = solve_small(&zero, &[])?.classification;
    Ok(SingleIndexCheck { equations: sys.equation_strings(), with_nonzero, with_zero })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairResult {
    /// 1-based indices.
    pub pair: (usize, usize),
    pub equations: Vec<String>,
    pub nonzero: Vec<String>,
    pub classification: Classification,
    pub expected_zero: Vec<String>,
    pub groebner_basis: Vec<String>,
}

impl PairResult {
    pub fn forces_expected(&self) -> bool {
        match &self.classification {
            Classification::Forces(vars) => self.expected_zero.iter().all(|v| vars.contains(v)),
            _ => false,
        }
    }
}

/// Reduction of `A1^n` to its index pairs: every pair system, projected to
/// the two coordinates of the pair, must force the off-diagonal constants
/// to vanish.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairwiseFragment {
    pub n: usize,
    pub single_index: Option<SingleIndexCheck>,
    pub pairs: Vec<PairResult>,
}

impl PairwiseFragment {
    pub fn holds(&self) -> bool {
        self.single_index.as_ref().is_none_or(SingleIndexCheck::holds)
            && self.pairs.iter().all(PairResult::forces_expected)
    }

    /// All constants proved to vanish.
    pub fn forced_zero(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .pairs
            .iter()
            .filter(|p| p.forces_expected())
            .flat_map(|p| p.expected_zero.iter().cloned())
            .collect();
        out.sort();
        out
    }
}

/// Pair system for indices `i < j` of an `n`-index ansatz.
pub fn pair_system(n: usize, i: usize, j: usize) -> Result<(PolyConstraintSystem, Vec<usize>, Vec<String>), CertifyError> {
    let pair = Ansatz::new(n).restrict_to_pair(i, j)?;
    let sys = pair.constraints(&a1_power_relations(2))?;
    let nonzero = [lambda_name(i, i), mu_name(i, i), lambda_name(j, j), mu_name(j, j)]
        .iter()
        .map(|v| sys.variable(v))
        .collect::<Result<Vec<_>, _>>()?;
    let expected = vec![lambda_name(i, j), mu_name(i, j), lambda_name(j, i), mu_name(j, i)];
    Ok((sys, nonzero, expected))
}

pub fn solve_pair(n: usize, i: usize, j: usize) -> Result<PairResult, CertifyError> {
    let (sys, nonzero, expected_zero) = pair_system(n, i, j)?;
    let sol = solve_small(&sys, &nonzero)?;
    Ok(PairResult {
        pair: (i + 1, j + 1),
        equations: sys.equation_strings(),
        nonzero: nonzero.iter().map(|&v| sys.variables()[v].clone()).collect(),
        classification: sol.classification.clone(),
        expected_zero,
        groebner_basis: sol.basis_strings(),
    })
}

pub fn pairwise_reduce(n: usize) -> Result<PairwiseFragment, CertifyError> {
    if n == 0 {
        return Err(CertifyError::Precondition("pairwise reduction needs n >= 1".into()));
    }
    let single_index = Some(single_index_check()?);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push(solve_pair(n, i, j)?);
        }
    }
    Ok(PairwiseFragment { n, single_index, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rat;

    #[test]
    fn empty_relation_set() {
        assert!(ansatz_constraints(2, &[]).unwrap().equations().is_empty());
    }

    #[test]
    fn undefined_index() {
        assert_eq!(
            ansatz_constraints(1, &[Relation::Commute(0, 1)]).unwrap_err(),
            CertifyError::UndefinedIndex { index: 2, n: 1 }
        );
    }

    #[test]
    fn single_index_normalisation() {
        // with l != 0 the relation forces l*m = -1/2
        let sys = ansatz_constraints(1, &[Relation::Eigen(0)]).unwrap();
        let sol = solve_small(&sys, &[0]).unwrap();
        let lm = &(&Poly::var(0) * &Poly::var(1)) + &Poly::constant(rat(1, 2));
        assert!(in_ideal(&lm, &sol.basis));
        assert!(single_index_check().unwrap().holds());
    }

    #[test]
    fn trivial_inconsistency() {
        let mut sys = PolyConstraintSystem::new(vec!["v".into()]);
        sys.assume_zero("v").unwrap();
        assert_eq!(solve_small(&sys, &[0]).unwrap().classification, Classification::Inconsistent);
    }

    #[test]
    fn mixed_identities_clash() {
        // l - l t = 0, t - l = 0, l t + t = 0 with t != 0
        let (l, t) = (Poly::var(0), Poly::var(1));
        let mut sys = PolyConstraintSystem::new(vec!["l".into(), "t".into()]);
        for p in [&l - &(&l * &t), &t - &l, &(&l * &t) + &t] {
            sys.push(Equation { poly: p, provenance: Provenance { expression: "test".into(), slot: 0, term: "1".into() } })
                .unwrap();
        }
        assert_eq!(solve_small(&sys, &[1]).unwrap().classification, Classification::Inconsistent);
    }

    #[test]
    fn pair_forces_off_diagonal() {
        let frag = pairwise_reduce(2).unwrap();
        assert!(frag.holds(), "{:?}", frag);
        assert_eq!(frag.forced_zero(), vec!["l1_2", "l2_1", "m1_2", "m2_1"]);
    }

    #[test]
    fn variable_cap() {
        let sys = ansatz_constraints(3, &a1_power_relations(3)).unwrap();
        assert!(matches!(solve_small(&sys, &[]), Err(CertifyError::VariableCap { .. })));
    }
}
