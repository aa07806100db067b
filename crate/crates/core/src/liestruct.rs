//! Finite-dimensional Lie algebras spanned by vector fields: bracket
//! closure, structure constants, Killing form, rank, root decomposition and
//! type identification.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coeffring::{ExpMonomial, GaussianRational as Gq, Rational};
use crate::linalg::{rational_from_quarters, rational_roots, to_f64, Insertion, Matrix, SparseEchelon, SparseVec};
use crate::roots::{classify_cartan_matrix, RootError, SimpleType};
use crate::vfield::{combine, FieldError, VectorField};

pub const DEFAULT_MAX_DIM: usize = 120;
pub const DEFAULT_SEED: u64 = 0x5eed_1ef1;

/// Number of random sample points used by [`Subalgebra::generic_rank`], in
/// addition to the origin.
pub const RANK_SAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("no generators given")]
    NoGenerators,
    #[error("generators live on different spaces (C^{expected} and C^{found})")]
    AmbientMismatch { expected: usize, found: usize },
    #[error("bracket closure exceeded the dimension limit {max_dim}")]
    DimensionExceeded { max_dim: usize },
    #[error("cartan element e{} out of range for an algebra of dimension {dim}", index + 1)]
    CartanIndex { index: usize, dim: usize },
    #[error("cartan elements e{} and e{} do not commute", a + 1, b + 1)]
    CartanNotCommuting { a: usize, b: usize },
    #[error("ad(e{}) has eigenvalues outside the rationals (residual degree {residual_degree})", index + 1)]
    NonRationalEigenvalue { index: usize, residual_degree: usize },
    #[error("ad(e{}) is not diagonalizable on the algebra", index + 1)]
    NotDiagonalizable { index: usize },
    #[error("zero-root space has dimension {zero_dim}, but the cartan family has {cartan_dim} elements")]
    NotSelfCentralizing { zero_dim: usize, cartan_dim: usize },
    #[error("root set matches no Dynkin diagram: {0}")]
    UnknownRootSystem(String),
    #[error(transparent)]
    Root(#[from] RootError),
}

pub(crate) type FieldKey = (ExpMonomial, usize);

pub(crate) fn field_vector(v: &VectorField) -> SparseVec<FieldKey> {
    v.terms().map(|(slot, m, c)| ((m.clone(), slot), c.clone())).collect()
}

fn dense(coords: &SparseVec<usize>, dim: usize) -> Vec<Gq> {
    let mut out = vec![Gq::zero(); dim];
    for (&k, c) in coords {
        out[k] = c.clone();
    }
    out
}

/// A bracket-closed span of vector fields. Basis elements keep the order in
/// which closure discovered them: independent generators first, then new
/// brackets `[e_i, e_j]` (`i < j`) in order of `j`, then `i`.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    ambient_dim: usize,
    basis: Vec<VectorField>,
    /// `structure[a][b][c]` is the `e_c` coordinate of `[e_a, e_b]`.
    structure: Vec<Vec<Vec<Gq>>>,
    echelon: SparseEchelon<FieldKey>,
}

impl Subalgebra {
    pub fn span_closure(generators: &[VectorField], max_dim: usize) -> Result<Self, LieError> {
        let first = generators.first().ok_or(LieError::NoGenerators)?;
        let ambient_dim = first.dim();
        let mut basis: Vec<VectorField> = Vec::new();
        let mut echelon = SparseEchelon::new();
        let push = |v: VectorField, basis: &mut Vec<VectorField>, echelon: &mut SparseEchelon<FieldKey>| {
            match echelon.insert(&field_vector(&v), basis.len()) {
                Insertion::Independent => {
                    let mut coords = SparseVec::new();
                    coords.insert(basis.len(), Gq::one());
                    basis.push(v);
                    if basis.len() > max_dim {
                        return Err(LieError::DimensionExceeded { max_dim });
                    }
                    Ok(coords)
                }
                Insertion::Dependent(coords) => Ok(coords),
            }
        };
        for g in generators {
            if g.dim() != ambient_dim {
                return Err(LieError::AmbientMismatch { expected: ambient_dim, found: g.dim() });
            }
            push(g.clone(), &mut basis, &mut echelon)?;
        }
        let mut brackets: BTreeMap<(usize, usize), SparseVec<usize>> = BTreeMap::new();
        let mut j = 0;
        while j < basis.len() {
            for i in 0..j {
                let br = basis[i].bracket(&basis[j])?;
                let coords = push(br, &mut basis, &mut echelon)?;
                brackets.insert((i, j), coords);
            }
            j += 1;
        }
        let n = basis.len();
        let mut structure = vec![vec![vec![Gq::zero(); n]; n]; n];
        for ((i, j), coords) in &brackets {
            for (&k, c) in coords {
                structure[*i][*j][k] = c.clone();
                structure[*j][*i][k] = -c.clone();
            }
        }
        Ok(Self { ambient_dim, basis, structure, echelon })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[VectorField] {
        &self.basis
    }

    /// Coordinates of `[e_a, e_b]`.
    pub fn structure_constants(&self, a: usize, b: usize) -> &[Gq] {
        &self.structure[a][b]
    }

    /// Nonzero `c_{ab}^c` with `a < b`.
    pub fn structure_triplets(&self) -> Vec<(usize, usize, usize, Gq)> {
        let n = self.dim();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for (c, v) in self.structure[a][b].iter().enumerate() {
                    if !v.is_zero() {
                        out.push((a, b, c, v.clone()));
                    }
                }
            }
        }
        out
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &VectorField) -> Option<Vec<Gq>> {
        if v.dim() != self.ambient_dim {
            return None;
        }
        self.echelon.coordinates(&field_vector(v)).map(|c| dense(&c, self.dim()))
    }

    pub fn contains(&self, v: &VectorField) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn element(&self, coords: &[Gq]) -> VectorField {
        combine(self.ambient_dim, coords, &self.basis).expect("basis fields share the ambient dimension")
    }

    /// Bracket computed from the structure constants.
    pub fn bracket_coords(&self, x: &[Gq], y: &[Gq]) -> Vec<Gq> {
        let n = self.dim();
        let mut out = vec![Gq::zero(); n];
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if y[b].is_zero() {
                    continue;
                }
                let s = &x[a] * &y[b];
                for (c, v) in self.structure[a][b].iter().enumerate() {
                    if !v.is_zero() {
                        out[c] = &out[c] + &(&s * v);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad(x)` in the basis; column `c` holds `[x, e_c]`.
    pub fn ad_matrix(&self, x: &[Gq]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vec<Gq>> = (0..n)
            .map(|c| {
                let mut e = vec![Gq::zero(); n];
                e[c] = Gq::one();
                self.bracket_coords(x, &e)
            })
            .collect();
        Matrix::from_columns(n, &cols)
    }

    fn ad_basis(&self, a: usize) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for c in 0..n {
            for (r, v) in self.structure[a][c].iter().enumerate() {
                m[(r, c)] = v.clone();
            }
        }
        m
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().flatten().flatten().all(Zero::is_zero)
    }

    /// `kappa_ab = sum_{c,d} c_{ac}^d c_{bd}^c`.
    pub fn killing_form(&self) -> Matrix {
        let n = self.dim();
        let mut k = Matrix::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let mut acc = Gq::zero();
                for c in 0..n {
                    for d in 0..n {
                        let x = &self.structure[a][c][d];
                        if x.is_zero() {
                            continue;
                        }
                        let y = &self.structure[b][d][c];
                        if !y.is_zero() {
                            acc = &acc + &(x * y);
                        }
                    }
                }
                k[(a, b)] = acc.clone();
                k[(b, a)] = acc;
            }
        }
        k
    }

    pub fn killing_determinant(&self) -> Gq {
        self.killing_form().determinant()
    }

    pub fn is_semisimple(&self) -> bool {
        self.dim() > 0 && !self.killing_determinant().is_zero()
    }

    /// Checks antisymmetry and the Jacobi identity of the stored constants.
    pub fn check_jacobi(&self) -> bool {
        let n = self.dim();
        let unit = |i: usize| {
            let mut e = vec![Gq::zero(); n];
            e[i] = Gq::one();
            e
        };
        for a in 0..n {
            for b in 0..n {
                let ab: Vec<Gq> = self.structure[a][b].clone();
                let ba: Vec<Gq> = self.structure[b][a].iter().map(|c| -c.clone()).collect();
                if ab != ba {
                    return false;
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let (ea, eb, ec) = (unit(a), unit(b), unit(c));
                    let t1 = self.bracket_coords(&ea, &self.structure[b][c]);
                    let t2 = self.bracket_coords(&eb, &self.structure[c][a]);
                    let t3 = self.bracket_coords(&ec, &self.structure[a][b]);
                    if t1.iter().zip(&t2).zip(&t3).any(|((x, y), z)| !(&(x + y) + z).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Numerical rank of the evaluation map at the origin and at
    /// [`RANK_SAMPLES`] seeded random points with coordinates in `[-3, 3]`
    /// (multiples of 1/4); the maximum is reported.
    pub fn generic_rank(&self, seed: u64) -> usize {
        let n = self.ambient_dim;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = vec![vec![0.0; n]];
        for _ in 0..RANK_SAMPLES {
            points.push((0..n).map(|_| to_f64(&rational_from_quarters(rng.random_range(-12..=12)))).collect());
        }
        points.iter().filter_map(|p| self.rank_at(p)).max().unwrap_or(0)
    }

    /// Numerical rank of `span{X(p)}`, or `None` if evaluation overflows.
    pub fn rank_at(&self, point: &[f64]) -> Option<usize> {
        if self.basis.is_empty() {
            return Some(0);
        }
        let rows: Vec<Vec<Complex64>> =
            self.basis.iter().map(|b| b.eval_numeric(point)).collect::<Result<_, _>>().ok()?;
        let m = DMatrix::from_fn(rows.len(), self.ambient_dim, |i, j| rows[i][j]);
        let sv = m.singular_values();
        let top = sv.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            return Some(0);
        }
        Some(sv.iter().filter(|&&s| s > 1e-8 * top).count())
    }

    /// Simultaneous eigenspace decomposition under `ad` of the given
    /// commuting basis elements.
    pub fn root_decomposition(&self, cartan: &[usize]) -> Result<CartanData, LieError> {
        let n = self.dim();
        for &h in cartan {
            if h >= n {
                return Err(LieError::CartanIndex { index: h, dim: n });
            }
        }
        for (x, &a) in cartan.iter().enumerate() {
            for &b in &cartan[x + 1..] {
                if self.structure[a][b].iter().any(|c| !c.is_zero()) {
                    return Err(LieError::CartanNotCommuting { a, b });
                }
            }
        }
        let identity: Vec<Vec<Gq>> = (0..n)
            .map(|i| {
                let mut e = vec![Gq::zero(); n];
                e[i] = Gq::one();
                e
            })
            .collect();
        let mut spaces: Vec<(Vec<Rational>, Vec<Vec<Gq>>)> = vec![(Vec::new(), identity)];
        for &h in cartan {
            let ad = self.ad_basis(h);
            let split = rational_roots(&ad.charpoly());
            if split.residual_degree > 0 {
                return Err(LieError::NonRationalEigenvalue { index: h, residual_degree: split.residual_degree });
            }
            let mut refined = Vec::new();
            for (label, vecs) in spaces {
                let b = Matrix::from_columns(n, &vecs);
                let mut found = 0;
                for (lambda, _) in &split.roots {
                    let shifted = ad.shifted(&Gq::real(lambda.clone())).mul(&b);
                    let kernel = shifted.kernel();
                    if kernel.is_empty() {
                        continue;
                    }
                    found += kernel.len();
                    let mut label = label.clone();
                    label.push(lambda.clone());
                    refined.push((label, kernel.iter().map(|c| b.mul_vec(c)).collect()));
                }
                if found != vecs.len() {
                    return Err(LieError::NotDiagonalizable { index: h });
                }
            }
            spaces = refined;
        }
        let mut zero_space = Vec::new();
        let mut root_spaces = BTreeMap::new();
        for (label, vecs) in spaces {
            if label.iter().all(Zero::is_zero) {
                zero_space = vecs;
            } else {
                root_spaces.insert(label, vecs);
            }
        }
        if zero_space.len() != cartan.len() {
            return Err(LieError::NotSelfCentralizing { zero_dim: zero_space.len(), cartan_dim: cartan.len() });
        }
        Ok(CartanData { cartan: cartan.to_vec(), root_spaces, zero_space })
    }
}

/// Root-space decomposition relative to a commuting family of basis
/// elements.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanData {
    cartan: Vec<usize>,
    /// Nonzero roots (eigenvalue on each cartan element) and eigenvectors as
    /// coordinate vectors in the subalgebra basis.
    root_spaces: BTreeMap<Vec<Rational>, Vec<Vec<Gq>>>,
    zero_space: Vec<Vec<Gq>>,
}

fn leading_positive(v: &[Rational]) -> bool {
    v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive())
}

fn leading_index(v: &[Rational]) -> usize {
    v.iter().position(|x| !x.is_zero()).unwrap_or(v.len())
}

fn add(u: &[Rational], v: &[Rational], k: i64) -> Vec<Rational> {
    let k = Rational::from_integer(k.into());
    u.iter().zip(v).map(|(a, b)| a + &k * b).collect()
}

impl CartanData {
    pub fn cartan(&self) -> &[usize] {
        &self.cartan
    }

    pub fn roots(&self) -> Vec<&Vec<Rational>> {
        self.root_spaces.keys().collect()
    }

    pub fn root_spaces(&self) -> &BTreeMap<Vec<Rational>, Vec<Vec<Gq>>> {
        &self.root_spaces
    }

    pub fn root_space(&self, root: &[Rational]) -> Option<&[Vec<Gq>]> {
        self.root_spaces.get(root).map(Vec::as_slice)
    }

    pub fn zero_space(&self) -> &[Vec<Gq>] {
        &self.zero_space
    }

    /// Positive roots under lexicographic positivity.
    pub fn positive_roots(&self) -> Vec<&Vec<Rational>> {
        self.root_spaces.keys().filter(|r| leading_positive(r)).collect()
    }

    /// Positive roots that are not the sum of two positive roots.
    pub fn simple_roots(&self) -> Vec<Vec<Rational>> {
        let pos = self.positive_roots();
        let sums: BTreeSet<Vec<Rational>> = pos
            .iter()
            .enumerate()
            .flat_map(|(i, a)| pos[i..].iter().map(move |b| add(a, b, 1)))
            .collect();
        pos.into_iter().filter(|r| !sums.contains(*r)).cloned().collect()
    }

    /// Cartan matrix of the simple roots from root strings:
    /// `a_ij = p - q` where the `a_i`-string through `a_j` is
    /// `a_j - p a_i, ..., a_j + q a_i`.
    pub fn cartan_matrix(&self, simple: &[Vec<Rational>]) -> Vec<Vec<i64>> {
        let is_root = |v: &Vec<Rational>| self.root_spaces.contains_key(v);
        let n = simple.len();
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    a[i][j] = 2;
                    continue;
                }
                let p = (1..).take_while(|&k| is_root(&add(&simple[j], &simple[i], -k))).count() as i64;
                let q = (1..).take_while(|&k| is_root(&add(&simple[j], &simple[i], k))).count() as i64;
                a[i][j] = p - q;
            }
        }
        a
    }

    /// Names the simple factors. Factors are ordered by the smallest cartan
    /// coordinate on which one of their simple roots is nonzero.
    pub fn identify_type(&self) -> Result<Vec<SimpleType>, LieError> {
        for (root, space) in &self.root_spaces {
            if space.len() != 1 {
                return Err(LieError::UnknownRootSystem(format!("root space of dimension {}", space.len())));
            }
            let neg: Vec<Rational> = root.iter().map(|x| -x).collect();
            if !self.root_spaces.contains_key(&neg) {
                return Err(LieError::UnknownRootSystem("root set is not symmetric".into()));
            }
        }
        let simple = self.simple_roots();
        if simple.len() != self.cartan.len() {
            return Err(LieError::UnknownRootSystem(format!(
                "{} simple roots for a cartan family of size {}",
                simple.len(),
                self.cartan.len()
            )));
        }
        let a = self.cartan_matrix(&simple);
        let mut parts = classify_cartan_matrix(&a).map_err(|e| LieError::UnknownRootSystem(e.to_string()))?;
        parts.sort_by_key(|(_, nodes)| nodes.iter().map(|&i| leading_index(&simple[i])).min());
        Ok(parts.into_iter().map(|(t, _)| t).collect())
    }
}
