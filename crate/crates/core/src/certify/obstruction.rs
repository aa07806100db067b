//! The highest-weight obstruction: an `A1^n` subalgebra in canonical form
//! leaves no room for a highest weight vector outside itself.

use std::collections::BTreeSet;

use num_traits::One;
use serde::Serialize;

use super::CertifyError;
use crate::coeffring::{ExpMonomial, GaussianRational as Gq, Rational};
use crate::linalg::{Insertion, Matrix, SparseEchelon};
use crate::liestruct::{field_vector, FieldKey, Subalgebra, DEFAULT_MAX_DIM, DEFAULT_SEED};
use crate::realize::{Audit, Realization};
use crate::roots::{Family, RootSystem, SimpleType};
use crate::vfield::{combine, VectorField};

fn independent(fields: &[VectorField]) -> (Vec<VectorField>, SparseEchelon<FieldKey>) {
    let mut echelon = SparseEchelon::new();
    let mut basis = Vec::new();
    for f in fields {
        if echelon.insert(&field_vector(f), basis.len()) == Insertion::Independent {
            basis.push(f.clone());
        }
    }
    (basis, echelon)
}

/// Basis of `{v in span(space) : [D, v] = 0 for every D}`. Fails if some
/// `[D, v]` leaves the span.
pub fn joint_kernel(derivations: &[VectorField], space: &[VectorField]) -> Result<Vec<VectorField>, CertifyError> {
    let (basis, echelon) = independent(space);
    let m = basis.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let dim = basis[0].dim();
    let mut a = Matrix::zeros(derivations.len() * m, m);
    for (d, der) in derivations.iter().enumerate() {
        for (k, b) in basis.iter().enumerate() {
            let br = der.bracket(b)?;
            let coords = echelon.coordinates(&field_vector(&br)).ok_or_else(|| CertifyError::SpaceNotStable {
                derivation: der.to_string(),
                element: b.to_string(),
            })?;
            for (r, c) in coords {
                a[(d * m + r, k)] = c;
            }
        }
    }
    a.kernel().iter().map(|c| Ok(combine(dim, c, &basis)?)).collect()
}

/// All fields `x^p exp(<q, x>) d_j` with `q` among the frequencies of the
/// inputs and `p` bounded componentwise by their largest exponents. The
/// span is stable under every `d_i`.
pub fn box_space(fields: &[VectorField]) -> Vec<VectorField> {
    let Some(first) = fields.first() else { return Vec::new() };
    let n = first.dim();
    let mut max_pow = vec![0u32; n];
    let mut freqs: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for f in fields {
        for (_, m, _) in f.terms() {
            for (i, &p) in m.pow().iter().enumerate() {
                max_pow[i] = max_pow[i].max(p);
            }
            freqs.insert(m.freq().to_vec());
        }
    }
    let mut pows: Vec<Vec<u32>> = vec![Vec::new()];
    for &bound in &max_pow {
        pows = pows.into_iter().flat_map(|p| (0..=bound).map(move |e| [p.clone(), vec![e]].concat())).collect();
    }
    let mut out = Vec::new();
    for q in &freqs {
        for p in &pows {
            for j in 0..n {
                let mono = ExpMonomial::new(p.clone(), q.clone());
                let mut coeffs = vec![crate::ExpPoly::zero(n); n];
                coeffs[j] = crate::ExpPoly::monomial(mono, Gq::one());
                out.push(VectorField::new(coeffs).expect("n >= 1"));
            }
        }
    }
    out
}

fn same_span(a: &[VectorField], b: &[VectorField]) -> bool {
    let (ba, ea) = independent(a);
    let (bb, eb) = independent(b);
    ba.len() == bb.len()
        && ba.iter().all(|v| eb.contains(&field_vector(v)))
        && bb.iter().all(|v| ea.contains(&field_vector(v)))
}

/// Evidence that a simple algebra of type `target` has no faithful
/// realization of maximal rank on `C^n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HighestWeightFragment {
    pub target: SimpleType,
    pub n: usize,
    pub target_dim: usize,
    /// Pairwise strongly orthogonal positive roots spanning `A1^n`.
    pub orthogonal_roots: Vec<Vec<i64>>,
    pub strongly_orthogonal: bool,
    /// Audit of the canonical `A1^n` the subalgebra must be equivalent to.
    pub canonical_audit: Audit,
    /// Generators of the polynomial chart of `A1^n`.
    pub chart: Vec<(String, String)>,
    /// The chart becomes the canonical form under `x_i = exp(u_i)`.
    pub chart_straightens_to_canonical: bool,
    pub subalgebra_dim: usize,
    /// Derived Borel subalgebra in the chart: the coordinate fields.
    pub borel: Vec<String>,
    pub borel_commutes: bool,
    pub borel_rank: usize,
    pub borel_in_subalgebra: bool,
    pub space_dim: usize,
    pub kernel: Vec<String>,
    pub kernel_is_coordinate_span: bool,
    pub kernel_in_subalgebra: bool,
}

impl HighestWeightFragment {
    /// Every step of the chain holds, and the target is strictly bigger
    /// than `A1^n`, so an invariant complement exists and would contain a
    /// highest weight vector outside the kernel.
    pub fn verified(&self) -> bool {
        self.strongly_orthogonal
            && self.orthogonal_roots.len() == self.n
            && self.canonical_audit.passed()
            && self.chart_straightens_to_canonical
            && self.borel_commutes
            && self.borel_rank == self.n
            && self.borel_in_subalgebra
            && self.kernel_is_coordinate_span
            && self.kernel_in_subalgebra
            && self.target_dim > self.subalgebra_dim
    }
}

pub fn highest_weight_obstruction(target: SimpleType, n: usize) -> Result<HighestWeightFragment, CertifyError> {
    let legal = matches!((target.family(), target.rank(), n), (Family::B | Family::G, 2, 2) | (Family::D, 4, 4));
    if !legal {
        return Err(CertifyError::Precondition(format!(
            "highest-weight obstruction applies to B2 or G2 on C^2 and D4 on C^4, not {} on C^{}",
            target, n
        )));
    }
    let rs = RootSystem::build(target);
    let target_dim = rs.rank() + 2 * rs.positive_roots().len();
    let orthogonal_roots = rs
        .orthogonal_a1_subset(n)
        .ok_or_else(|| CertifyError::Precondition(format!("{} has no {} orthogonal roots", target, n)))?;
    let strongly_orthogonal = orthogonal_roots
        .iter()
        .enumerate()
        .all(|(k, a)| orthogonal_roots[k + 1..].iter().all(|b| rs.strongly_orthogonal(a, b)));

    let canonical = Realization::a1_power(n);
    let canonical_audit = canonical.audit(DEFAULT_MAX_DIM, DEFAULT_SEED)?;
    let canonical_span = canonical.closure(DEFAULT_MAX_DIM)?;

    let chart = Realization::product(&vec![1; n]);
    let chart_closure = chart.closure(DEFAULT_MAX_DIM)?;
    let straightened = chart.straighten()?.closure(DEFAULT_MAX_DIM)?;
    let chart_straightens_to_canonical = same_span(straightened.basis(), canonical_span.basis());

    let borel: Vec<VectorField> = (0..n).map(|i| VectorField::coordinate(n, i)).collect();
    let borel_commutes = borel.iter().all(|a| borel.iter().all(|b| a.bracket(b).is_ok_and(|c| c.is_zero())));
    let borel_rank = Subalgebra::span_closure(&borel, DEFAULT_MAX_DIM)?.generic_rank(DEFAULT_SEED);
    let borel_in_subalgebra = borel.iter().all(|b| chart_closure.contains(b));

    let space = box_space(chart_closure.basis());
    let kernel = joint_kernel(&borel, &space)?;
    let kernel_is_coordinate_span = same_span(&kernel, &borel);
    let kernel_in_subalgebra = kernel.iter().all(|v| chart_closure.contains(v));

    Ok(HighestWeightFragment {
        target,
        n,
        target_dim,
        orthogonal_roots,
        strongly_orthogonal,
        canonical_audit,
        chart: chart.generators().into_iter().map(|(name, f)| (name, f.to_string())).collect(),
        chart_straightens_to_canonical,
        subalgebra_dim: chart_closure.dim(),
        borel: borel.iter().map(ToString::to_string).collect(),
        borel_commutes,
        borel_rank,
        borel_in_subalgebra,
        space_dim: space.len(),
        kernel: kernel.iter().map(ToString::to_string).collect(),
        kernel_is_coordinate_span,
        kernel_in_subalgebra,
    })
}
