//! Classification of semisimple algebras of maximal rank on `C^N`, with
//! certificates that can be re-checked independently.

use serde::Serialize;

use super::constraints::{lambda_name, mu_name, pairwise_reduce, Ansatz, PairwiseFragment};
use super::obstruction::{highest_weight_obstruction, HighestWeightFragment};
use super::CertifyError;
use crate::liestruct::{DEFAULT_MAX_DIM, DEFAULT_SEED};
use crate::realize::{Audit, Realization};
use crate::roots::{obstruction_witness, Obstruction, ObstructionWitness, SimpleType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Realizable,
    NotRealizable,
    /// The total rank is below `N`; the classification does not apply.
    OutOfScope,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Realizable => "REALIZABLE",
            Verdict::NotRealizable => "NOT_REALIZABLE",
            Verdict::OutOfScope => "OUT_OF_SCOPE",
        })
    }
}

/// Projection of the root vectors of the witness nodes onto their own
/// coordinates: the brackets among them commute with the projection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionStep {
    /// 1-based simple-root indices of the witness within `C^N`.
    pub indices: Vec<usize>,
    pub ambient_dim: usize,
    pub projected_dim: usize,
    pub pairs_checked: usize,
    pub homomorphism: bool,
    /// The projected Cartan is `span{d_1, ..., d_k}`, of full rank `k`.
    pub maximal_rank: bool,
}

impl ProjectionStep {
    pub fn holds(&self) -> bool {
        self.homomorphism && self.maximal_rank && self.projected_dim == self.indices.len()
    }
}

/// Checks `project(bracket) = bracket(project)` on the ansatz root vectors
/// `X_j, Y_j` for `j` in `indices` (0-based).
pub fn projection_step(ambient_dim: usize, indices: &[usize]) -> Result<ProjectionStep, CertifyError> {
    let ansatz = Ansatz::new(ambient_dim);
    let k = indices.len();
    let mut perm = vec![usize::MAX; ambient_dim];
    for (pos, &j) in indices.iter().enumerate() {
        perm[j] = pos;
    }
    let mut next = k;
    for p in perm.iter_mut().filter(|p| **p == usize::MAX) {
        *p = next;
        next += 1;
    }
    let fields: Vec<_> = indices
        .iter()
        .flat_map(|&j| [ansatz.x(j).permute(&perm), ansatz.y(j).permute(&perm)])
        .collect();
    let projected = fields.iter().map(|f| f.project(k)).collect::<Result<Vec<_>, _>>()?;
    let mut pairs_checked = 0;
    let mut homomorphism = true;
    for a in 0..fields.len() {
        for b in a + 1..fields.len() {
            let lhs = fields[a].bracket(&fields[b])?.project(k)?;
            let rhs = projected[a].bracket(&projected[b])?;
            homomorphism &= lhs == rhs;
            pairs_checked += 1;
        }
    }
    // the Cartan elements d_j map to the coordinate fields of C^k
    let maximal_rank = indices.iter().enumerate().all(|(pos, &j)| perm[j] == pos);
    Ok(ProjectionStep {
        indices: indices.iter().map(|j| j + 1).collect(),
        ambient_dim,
        projected_dim: k,
        pairs_checked,
        homomorphism,
        maximal_rank,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// An explicit realization and its audit.
    Realization { ranks: Vec<usize>, generators: Vec<(String, String)>, audit: Audit },
    /// The Cartan subalgebra would exceed the ambient dimension.
    RankBound { cartan_dim: usize, ambient_dim: usize },
    /// The Cartan subalgebra is smaller than the ambient dimension.
    NonMaximalRank { cartan_dim: usize, ambient_dim: usize },
    /// A factor contains `B2`, `G2` or `D4`, which cannot be realized with
    /// maximal rank.
    Obstruction {
        factor: SimpleType,
        /// 0-based position of the factor in the input list.
        factor_index: usize,
        witness: ObstructionWitness,
        projection: ProjectionStep,
        highest_weight: HighestWeightFragment,
        pairwise: PairwiseFragment,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub factors: Vec<SimpleType>,
    pub ambient_dim: usize,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub checks: Vec<Check>,
}

impl Transcript {
    fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check { name: name.into(), passed });
    }

    pub fn ok(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }
}

fn total_rank(factors: &[SimpleType]) -> usize {
    factors.iter().map(SimpleType::rank).sum()
}

/// Classifies the semisimple algebra with simple factors `factors` as a
/// maximal-rank algebra of vector fields on `C^n`.
pub fn classify(factors: &[SimpleType], n: usize) -> Result<Certificate, CertifyError> {
    if factors.is_empty() || n == 0 {
        return Err(CertifyError::Precondition("need at least one factor and N >= 1".into()));
    }
    let cartan_dim = total_rank(factors);
    let certificate = |verdict, evidence| Certificate { factors: factors.to_vec(), ambient_dim: n, verdict, evidence };
    if cartan_dim > n {
        return Ok(certificate(Verdict::NotRealizable, Evidence::RankBound { cartan_dim, ambient_dim: n }));
    }
    if cartan_dim < n {
        return Ok(certificate(Verdict::OutOfScope, Evidence::NonMaximalRank { cartan_dim, ambient_dim: n }));
    }
    let mut offset = 0;
    for (factor_index, &factor) in factors.iter().enumerate() {
        if let Obstruction::Witness(witness) = obstruction_witness(factor) {
            let indices: Vec<usize> = witness.nodes.iter().map(|&v| offset + v).collect();
            let projection = projection_step(n, &indices)?;
            let k = witness.target.rank();
            let highest_weight = highest_weight_obstruction(witness.target, k)?;
            let pairwise = pairwise_reduce(k)?;
            let evidence = Evidence::Obstruction { factor, factor_index, witness, projection, highest_weight, pairwise };
            return Ok(certificate(Verdict::NotRealizable, evidence));
        }
        offset += factor.rank();
    }
    let ranks: Vec<usize> = factors.iter().map(SimpleType::rank).collect();
    let realization = Realization::product(&ranks);
    let audit = realization.audit(DEFAULT_MAX_DIM, DEFAULT_SEED)?;
    let generators = realization.generators().into_iter().map(|(name, f)| (name, f.to_string())).collect();
    Ok(certificate(Verdict::Realizable, Evidence::Realization { ranks, generators, audit }))
}

impl Certificate {
    /// Recomputes every piece of evidence from scratch and compares.
    pub fn reverify(&self) -> Result<Transcript, CertifyError> {
        let mut t = Transcript { checks: Vec::new() };
        let cartan_dim = total_rank(&self.factors);
        match &self.evidence {
            Evidence::Realization { ranks, audit, .. } => {
                t.check("verdict is REALIZABLE", self.verdict == Verdict::Realizable);
                t.check("factors are all of type A", self.factors.iter().all(SimpleType::is_a));
                t.check("total rank equals N", cartan_dim == self.ambient_dim);
                let fresh = Realization::product(ranks).audit(DEFAULT_MAX_DIM, DEFAULT_SEED)?;
                t.check("realization re-audits", fresh.passed());
                t.check("audit matches the recorded one", &fresh == audit);
            }
            Evidence::RankBound { cartan_dim: c, ambient_dim } => {
                t.check("verdict is NOT_REALIZABLE", self.verdict == Verdict::NotRealizable);
                t.check("recorded Cartan dimension", *c == cartan_dim && *ambient_dim == self.ambient_dim);
                t.check("Cartan dimension exceeds N", cartan_dim > self.ambient_dim);
            }
            Evidence::NonMaximalRank { cartan_dim: c, ambient_dim } => {
                t.check("verdict is OUT_OF_SCOPE", self.verdict == Verdict::OutOfScope);
                t.check("recorded Cartan dimension", *c == cartan_dim && *ambient_dim == self.ambient_dim);
                t.check("Cartan dimension below N", cartan_dim < self.ambient_dim);
            }
            Evidence::Obstruction { factor, factor_index, witness, projection, highest_weight, pairwise } => {
                t.check("verdict is NOT_REALIZABLE", self.verdict == Verdict::NotRealizable);
                t.check("total rank equals N", cartan_dim == self.ambient_dim);
                t.check("factor is listed", self.factors.get(*factor_index) == Some(factor));
                let fresh_witness = obstruction_witness(*factor);
                t.check("witness recomputes", fresh_witness == Obstruction::Witness(witness.clone()));
                t.check(format!("witness sub-root-system identifies as {}", witness.target), witness.verify());
                let offset: usize = self.factors[..*factor_index].iter().map(SimpleType::rank).sum();
                let indices: Vec<usize> = witness.nodes.iter().map(|&v| offset + v).collect();
                let fresh_projection = projection_step(self.ambient_dim, &indices)?;
                t.check("projection is a homomorphism of maximal rank", fresh_projection.holds());
                t.check("projection matches the recorded one", &fresh_projection == projection);
                let k = witness.target.rank();
                let fresh_hw = highest_weight_obstruction(witness.target, k)?;
                t.check("orthogonal roots are strongly orthogonal", fresh_hw.strongly_orthogonal);
                t.check("canonical A1^k re-audits", fresh_hw.canonical_audit.passed());
                t.check("chart straightens to the canonical form", fresh_hw.chart_straightens_to_canonical);
                t.check("derived Borel is abelian of rank k", fresh_hw.borel_commutes && fresh_hw.borel_rank == k);
                t.check("joint kernel equals the coordinate span", fresh_hw.kernel_is_coordinate_span);
                t.check("joint kernel lies in A1^k", fresh_hw.kernel_in_subalgebra);
                t.check("target is larger than A1^k", fresh_hw.target_dim > fresh_hw.subalgebra_dim);
                t.check("highest-weight fragment matches the recorded one", &fresh_hw == highest_weight);
                let fresh_pairs = pairwise_reduce(k)?;
                if let Some(single) = &fresh_pairs.single_index {
                    t.check(format!("{} != 0 is forced", lambda_name(0, 0)), single.holds());
                }
                for p in &fresh_pairs.pairs {
                    let (i, j) = (p.pair.0 - 1, p.pair.1 - 1);
                    t.check(
                        format!(
                            "pair ({},{}) forces {}, {}, {}, {} to vanish",
                            p.pair.0,
                            p.pair.1,
                            lambda_name(i, j),
                            mu_name(i, j),
                            lambda_name(j, i),
                            mu_name(j, i)
                        ),
                        p.forces_expected(),
                    );
                }
                t.check("pairwise fragment matches the recorded one", &fresh_pairs == pairwise);
            }
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusEntry {
    pub factors: Vec<SimpleType>,
    pub ambient_dim: usize,
    pub verdict: Verdict,
}

fn multisets(types: &[SimpleType], total: usize, start: usize, prefix: &mut Vec<SimpleType>, out: &mut Vec<Vec<SimpleType>>) {
    if total == 0 {
        out.push(prefix.clone());
        return;
    }
    for (k, t) in types.iter().enumerate().skip(start) {
        if t.rank() <= total {
            prefix.push(*t);
            multisets(types, total - t.rank(), k, prefix, out);
            prefix.pop();
        }
    }
}

/// Every semisimple type of total rank `n` (`C2` is listed as `B2`).
pub fn semisimple_types_of_rank(n: usize) -> Vec<Vec<SimpleType>> {
    let types: Vec<SimpleType> = SimpleType::all_up_to(n)
        .into_iter()
        .filter(|t| t.to_string() != "C2")
        .collect();
    let mut out = Vec::new();
    multisets(&types, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Classifies every semisimple type of total rank `n` on `C^n`, for
/// `n = 1..=max_n`.
pub fn census(max_n: usize) -> Result<Vec<CensusEntry>, CertifyError> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for factors in semisimple_types_of_rank(n) {
            let verdict = classify(&factors, n)?.verdict;
            out.push(CensusEntry { factors, ambient_dim: n, verdict });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn types(s: &str) -> Vec<SimpleType> {
        s.split(',').map(|t| t.parse().unwrap()).collect()
    }

    #[test]
    fn realizable_product() {
        let c = classify(&types("A2,A1"), 3).unwrap();
        assert_eq!(c.verdict, Verdict::Realizable);
        assert!(c.reverify().unwrap().ok());
    }

    #[test]
    fn b2_on_the_plane() {
        let c = classify(&types("B2"), 2).unwrap();
        assert_eq!(c.verdict, Verdict::NotRealizable);
        let t = c.reverify().unwrap();
        assert!(t.ok(), "{:?}", t);
    }

    #[test]
    fn rank_mismatch() {
        assert_eq!(classify(&types("A2"), 3).unwrap().verdict, Verdict::OutOfScope);
        assert_eq!(classify(&types("A2,A2"), 3).unwrap().verdict, Verdict::NotRealizable);
    }

    #[test]
    fn projection_of_a_witness() {
        let step = projection_step(5, &[2, 3]).unwrap();
        assert!(step.holds());
        assert_eq!(step.pairs_checked, 6);
    }

    #[test]
    fn rank_two_census() {
        let census = census(2).unwrap();
        let listed: Vec<(String, Verdict)> = census
            .iter()
            .map(|e| (e.factors.iter().map(ToString::to_string).collect::<Vec<_>>().join("x"), e.verdict))
            .collect();
        let expected = vec![
            ("A1".to_string(), Verdict::Realizable),
            ("A1xA1".to_string(), Verdict::Realizable),
            ("A2".to_string(), Verdict::Realizable),
            ("B2".to_string(), Verdict::NotRealizable),
            ("G2".to_string(), Verdict::NotRealizable),
        ];
        assert_eq!(listed, expected);
    }
}
