//! Exact linear algebra over the Gaussian rationals.
//!
//! Dense matrices cover the structure-constant side (ad matrices, Killing
//! forms, eigenspaces). [`SparseEchelon`] handles spans of vector fields,
//! whose natural coordinates are sparse `(monomial, slot)` keys.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coeffring::{GaussianRational as Gq, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Gq>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Gq::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Gq::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Gq>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<Gq>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
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

    pub fn row(&self, i: usize) -> &[Gq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Gq> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Gq]) -> Vec<Gq> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Gq::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn trace(&self) -> Gq {
        (0..self.rows.min(self.cols)).fold(Gq::zero(), |acc, i| &acc + &self[(i, i)])
    }

    /// `self - lambda * I`.
    pub fn shifted(&self, lambda: &Gq) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = &m[(i, i)] - lambda;
        }
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inv().expect("nonzero pivot");
            for j in c..self.cols {
                if !self[(r, j)].is_zero() {
                    self[(r, j)] = &self[(r, j)] * &inv;
                }
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    if !self[(r, j)].is_zero() {
                        let t = &f * &self[(r, j)];
                        self[(i, j)] = &self[(i, j)] - &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Gq>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Gq::zero(); self.cols];
                v[f] = Gq::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Gq {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Gq::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Gq::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    if !m[(c, j)].is_zero() {
                        let t = &f * &m[(c, j)];
                        m[(i, j)] = &m[(i, j)] - &t;
                    }
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(t I - self)`, coefficients from the
    /// constant term up, via Faddeev-LeVerrier.
    pub fn charpoly(&self) -> Vec<Gq> {
        assert_eq!(self.rows, self.cols, "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut coeffs = vec![Gq::zero(); n + 1];
        coeffs[n] = Gq::one();
        let mut m = Matrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            m = self.mul(&m);
            for i in 0..n {
                m[(i, i)] = &m[(i, i)] + &coeffs[n - k + 1];
            }
            let t = self.mul(&m).trace();
            let kq = Gq::from_integer(k as i64);
            coeffs[n - k] = -(t / kq);
        }
        coeffs
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Gq;
    fn index(&self, (i, j): (usize, usize)) -> &Gq {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Gq {
        &mut self.data[i * self.cols + j]
    }
}

/// Rational roots of a polynomial with Gaussian-rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSplit {
    /// Distinct rational roots with multiplicities, ascending.
    pub roots: Vec<(Rational, usize)>,
    /// Degree of the factor left after removing all rational roots.
    pub residual_degree: usize,
}

fn eval_poly(p: &[Gq], x: &Rational) -> Gq {
    let x = Gq::real(x.clone());
    p.iter().rev().fold(Gq::zero(), |acc, c| &(&acc * &x) + c)
}

/// Divides by `(t - r)`; the caller guarantees `r` is a root.
fn deflate(p: &[Gq], r: &Rational) -> Vec<Gq> {
    let r = Gq::real(r.clone());
    let n = p.len() - 1;
    let mut q = vec![Gq::zero(); n];
    let mut carry = Gq::zero();
    for i in (1..=n).rev() {
        carry = &p[i] + &(&carry * &r);
        q[i - 1] = carry.clone();
    }
    q
}

fn trim(mut p: Vec<Gq>) -> Vec<Gq> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Positive divisors `d <= limit` of `n` (`n > 0`) by trial division.
fn divisors_up_to(n: &BigInt, limit: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut t = BigInt::one();
    while &t * &t <= *n && t <= *limit {
        if (n % &t).is_zero() {
            out.push(t.clone());
            let co = n / &t;
            if co != t && co <= *limit {
                out.push(co);
            }
        }
        t += 1;
    }
    out.sort();
    out
}

/// Candidate rational roots of a nonzero rational polynomial with nonzero
/// constant term (rational root theorem, pruned by the Cauchy bound).
fn candidates(p: &[Rational]) -> Vec<Rational> {
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let lead = ints.last().unwrap().abs();
    let constant = ints[0].abs();
    let bound = ints[..ints.len() - 1]
        .iter()
        .map(|a| BigRational::new(a.abs(), lead.clone()))
        .max()
        .unwrap_or_else(BigRational::zero)
        + BigRational::one();
    let bound = bound.ceil().to_integer();
    let mut out = Vec::new();
    for q in divisors_up_to(&lead, &lead) {
        let limit = &bound * &q;
        for num in divisors_up_to(&constant, &limit) {
            if num.gcd(&q).is_one() {
                let r = BigRational::new(num, q.clone());
                out.push(r.clone());
                out.push(-r);
            }
        }
    }
    out.sort();
    out
}

/// Finds every rational root of `p` (coefficients from the constant term up).
pub fn rational_roots(p: &[Gq]) -> RootSplit {
    let mut p = trim(p.to_vec());
    let mut roots: BTreeMap<Rational, usize> = BTreeMap::new();
    if p.iter().all(Zero::is_zero) {
        return RootSplit { roots: Vec::new(), residual_degree: 0 };
    }
    let zeros = p.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        roots.insert(Rational::zero(), zeros);
        p.drain(..zeros);
    }
    while p.len() > 1 {
        // rational roots must be common roots of the real and imaginary parts
        let re: Vec<Rational> = p.iter().map(|c| c.re().clone()).collect();
        let im: Vec<Rational> = p.iter().map(|c| c.im().clone()).collect();
        let part = if re.iter().any(|c| !c.is_zero()) { re } else { im };
        let part = trim_rational(part);
        if part.len() <= 1 {
            break;
        }
        let found = candidates(&part).into_iter().find(|r| eval_poly(&p, r).is_zero());
        let Some(r) = found else { break };
        while p.len() > 1 && eval_poly(&p, &r).is_zero() {
            p = deflate(&p, &r);
            *roots.entry(r.clone()).or_insert(0) += 1;
        }
    }
    RootSplit { roots: roots.into_iter().collect(), residual_degree: p.len() - 1 }
}

fn trim_rational(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    let z = p.iter().take_while(|c| c.is_zero()).count();
    p.drain(..z.min(p.len().saturating_sub(1)));
    p
}

pub type SparseVec<K> = BTreeMap<K, Gq>;

pub fn sparse_axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &Gq, x: &SparseVec<K>) {
    use std::collections::btree_map::Entry;
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        let t = a * v;
        match y.entry(k.clone()) {
            Entry::Vacant(e) => {
                e.insert(t);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &t;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
struct EchelonRow<K> {
    vec: SparseVec<K>,
    /// `vec = sum_tag comb[tag] * inserted[tag]`
    comb: SparseVec<usize>,
}

/// Incremental semi-echelon basis of sparse vectors. Each stored row has a
/// distinct pivot (its smallest key) with coefficient one, and remembers
/// how it was built from the tagged vectors that were inserted.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Ord + Clone> {
    rows: BTreeMap<K, EchelonRow<K>>,
}

impl<K: Ord + Clone> Default for SparseEchelon<K> {
    fn default() -> Self {
        Self { rows: BTreeMap::new() }
    }
}

/// Outcome of [`SparseEchelon::insert`].
#[derive(Clone, Debug, PartialEq)]
pub enum Insertion {
    Independent,
    /// The inserted vector equals `sum coords[tag] * inserted[tag]`.
    Dependent(SparseVec<usize>),
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Returns the residual of `v` and the combination of inserted vectors
    /// that was subtracted.
    pub fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut w = v.clone();
        let mut coords = SparseVec::new();
        for (pivot, row) in &self.rows {
            let Some(c) = w.get(pivot).cloned() else { continue };
            sparse_axpy(&mut w, &(-c.clone()), &row.vec);
            sparse_axpy(&mut coords, &c, &row.comb);
        }
        (w, coords)
    }

    /// Coordinates of `v` in terms of the inserted independent vectors, or
    /// `None` when `v` is outside the span.
    pub fn coordinates(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let (residual, coords) = self.reduce(v);
        residual.is_empty().then_some(coords)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).0.is_empty()
    }

    pub fn insert(&mut self, v: &SparseVec<K>, tag: usize) -> Insertion {
        let (residual, coords) = self.reduce(v);
        let Some((pivot, lead)) = residual.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return Insertion::Dependent(coords);
        };
        let inv = lead.inv().expect("nonzero lead");
        let vec = residual.into_iter().map(|(k, c)| (k, &c * &inv)).collect();
        let mut comb = SparseVec::new();
        comb.insert(tag, inv.clone());
        sparse_axpy(&mut comb, &(-inv), &coords);
        self.rows.insert(pivot, EchelonRow { vec, comb });
        Insertion::Independent
    }
}

/// Converts a real double to a nearby small rational; used only for sample
/// points.
pub fn rational_from_quarters(n: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(4))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{int, rat};

    fn g(n: i64) -> Gq {
        Gq::from_integer(n)
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| g(v)).collect()).collect())
    }

    #[test]
    fn determinant_and_rank() {
        assert_eq!(m(&[&[1, 2], &[3, 4]]).determinant(), g(-2));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant(), g(0));
        assert_eq!(m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]).rank(), 2);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), g(-1));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn charpoly_of_diagonal() {
        // diag(2, -1, 0): t^3 - t^2 - 2t
        let a = m(&[&[2, 0, 0], &[0, -1, 0], &[0, 0, 0]]);
        assert_eq!(a.charpoly(), vec![g(0), g(-2), g(-1), g(1)]);
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (t - 1/2)^2 (t + 3) t = t^4 + 2 t^3 - 11/4 t^2 + 3/4 t
        let p = vec![Gq::zero(), Gq::real(rat(3, 4)), Gq::real(rat(-11, 4)), g(2), g(1)];
        let split = rational_roots(&p);
        assert_eq!(split.roots, vec![(int(-3), 1), (int(0), 1), (rat(1, 2), 2)]);
        assert_eq!(split.residual_degree, 0);
    }

    #[test]
    fn irrational_roots_are_left_over() {
        // (t^2 - 2)(t - 1)
        let p = vec![g(2), g(-2), g(-1), g(1)];
        let split = rational_roots(&p);
        assert_eq!(split.roots, vec![(int(1), 1)]);
        assert_eq!(split.residual_degree, 2);
        // t^2 + 1 has roots +-i, not rational
        assert_eq!(rational_roots(&[g(1), g(0), g(1)]).residual_degree, 2);
    }

    #[test]
    fn gaussian_coefficients() {
        // (t - 2)(t - i) = t^2 - (2 + i) t + 2i
        let p = vec![Gq::new(int(0), int(2)), Gq::new(int(-2), int(-1)), g(1)];
        let split = rational_roots(&p);
        assert_eq!(split.roots, vec![(int(2), 1)]);
        assert_eq!(split.residual_degree, 1);
    }

    #[test]
    fn echelon_tracks_coordinates() {
        let v = |pairs: &[(u8, i64)]| -> SparseVec<u8> { pairs.iter().map(|&(k, c)| (k, g(c))).collect() };
        let mut e = SparseEchelon::new();
        assert_eq!(e.insert(&v(&[(1, 1), (2, 1)]), 0), Insertion::Independent);
        assert_eq!(e.insert(&v(&[(2, 1), (3, 1)]), 1), Insertion::Independent);
        let Insertion::Dependent(c) = e.insert(&v(&[(1, 2), (2, 4), (3, 2)]), 2) else {
            panic!("expected dependence")
        };
        assert_eq!(c, [(0, g(2)), (1, g(2))].into_iter().collect());
        assert!(e.coordinates(&v(&[(3, 1)])).is_none());
        assert_eq!(e.rank(), 2);
    }
}
