//! Abstract root systems of the simple types and their Dynkin diagrams.
//!
//! Roots are integer coefficient vectors over the simple roots. Node
//! numbering follows Bourbaki, except that `G2` lists the long simple root
//! first (as `B2` does), so its positive roots read
//! `a, b, a+b, a+2b, a+3b, 2a+3b`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("no simple Lie algebra of type {0}")]
    IllegalType(String),
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("Cartan matrix matches no Dynkin diagram: {0}")]
    Unclassified(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// A simple type label such as `A2` or `E6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleType {
    family: Family,
    rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootError> {
        let legal = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !legal {
            return Err(RootError::IllegalType(format!("{}{}", family.letter(), rank)));
        }
        Ok(Self { family, rank })
    }

    pub fn a(rank: usize) -> Self {
        Self::new(Family::A, rank).expect("A_l is legal for l >= 1")
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_a(&self) -> bool {
        self.family == Family::A
    }

    /// Every legal simple type of rank at most `max_rank`.
    pub fn all_up_to(max_rank: usize) -> Vec<SimpleType> {
        let families = [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G];
        families
            .iter()
            .flat_map(|&f| (1..=max_rank).filter_map(move |r| SimpleType::new(f, r).ok()))
            .collect()
    }

    /// Cartan matrix with `a[i][j] = 2 (a_i, a_j) / (a_i, a_i)`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => (0..n - 1).for_each(|i| link(i, i + 1)),
            Family::D => {
                (0..n - 2).for_each(|i| link(i, i + 1));
                link(n - 3, n - 1);
            }
            Family::E => {
                link(0, 2);
                link(1, 3);
                (2..n - 1).for_each(|i| link(i, i + 1));
            }
            Family::F => (0..3).for_each(|i| link(i, i + 1)),
            Family::G => link(0, 1),
        }
        match self.family {
            Family::B => a[n - 1][n - 2] = -2,
            Family::C => a[n - 2][n - 1] = -2,
            Family::F => a[2][1] = -2,
            Family::G => a[1][0] = -3,
            _ => {}
        }
        a
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, RootError> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(RootError::IllegalType(s.to_string())),
        };
        let rank = chars
            .as_str()
            .parse::<usize>()
            .map_err(|_| RootError::IllegalType(s.to_string()))?;
        SimpleType::new(family, rank)
    }
}

impl Serialize for SimpleType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn validate_cartan(a: &[Vec<i64>]) -> Result<(), RootError> {
    let n = a.len();
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(RootError::InvalidCartan("matrix is not square".into()));
        }
        if row[i] != 2 {
            return Err(RootError::InvalidCartan(format!("diagonal entry {} is {}", i + 1, row[i])));
        }
        for (j, &v) in row.iter().enumerate() {
            if i == j {
                continue;
            }
            if !(-3..=0).contains(&v) {
                return Err(RootError::InvalidCartan(format!("entry ({}, {}) is {}", i + 1, j + 1, v)));
            }
            if (v == 0) != (a[j][i] == 0) {
                return Err(RootError::InvalidCartan(format!("zero pattern not symmetric at ({}, {})", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

fn components(a: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(i) = queue.pop_front() {
            comp.push(i);
            for j in 0..n {
                if !seen[j] && a[i][j] != 0 {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

fn neighbours(a: &[Vec<i64>], i: usize) -> Vec<usize> {
    (0..a.len()).filter(|&j| j != i && a[i][j] != 0).collect()
}

/// Identifies a connected Cartan matrix.
fn classify_connected(a: &[Vec<i64>]) -> Result<SimpleType, RootError> {
    let n = a.len();
    let unclassified = || RootError::Unclassified(format!("{:?}", a));
    if n == 1 {
        return Ok(SimpleType::a(1));
    }
    let edges: Vec<(usize, usize, i64)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| a[i][j] != 0)
        .map(|(i, j)| (i, j, a[i][j] * a[j][i]))
        .collect();
    if edges.len() != n - 1 || edges.iter().any(|e| !(1..=3).contains(&e.2)) {
        return Err(unclassified());
    }
    let degree: Vec<usize> = (0..n).map(|i| neighbours(a, i).len()).collect();
    let multiple: Vec<&(usize, usize, i64)> = edges.iter().filter(|e| e.2 > 1).collect();
    let is_path = degree.iter().all(|&d| d <= 2);
    match multiple.as_slice() {
        [] => {}
        [&(_, _, 3)] if n == 2 => return SimpleType::new(Family::G, 2),
        [&(i, j, 2)] if is_path => {
            if n == 2 {
                return SimpleType::new(Family::B, 2);
            }
            let (leaf, inner) = match (degree[i], degree[j]) {
                (1, _) => (i, j),
                (_, 1) => (j, i),
                _ if n == 4 => return SimpleType::new(Family::F, 4),
                _ => return Err(unclassified()),
            };
            // a[short][long] = -2
            return if a[leaf][inner] == -2 {
                SimpleType::new(Family::B, n)
            } else {
                SimpleType::new(Family::C, n)
            };
        }
        _ => return Err(unclassified()),
    }
    if is_path {
        return Ok(SimpleType::a(n));
    }
    let branch: Vec<usize> = (0..n).filter(|&i| degree[i] == 3).collect();
    if branch.len() != 1 || degree.iter().any(|&d| d > 3) {
        return Err(unclassified());
    }
    let mut arms: Vec<usize> = arms_from(a, branch[0]).iter().map(Vec::len).collect();
    arms.sort();
    match arms.as_slice() {
        [1, 1, c] => SimpleType::new(Family::D, c + 3),
        [1, 2, 2] => SimpleType::new(Family::E, 6),
        [1, 2, 3] => SimpleType::new(Family::E, 7),
        [1, 2, 4] => SimpleType::new(Family::E, 8),
        _ => Err(unclassified()),
    }
}

/// The paths leaving a branch node, each listed outward from the branch.
fn arms_from(a: &[Vec<i64>], branch: usize) -> Vec<Vec<usize>> {
    neighbours(a, branch)
        .into_iter()
        .map(|start| {
            let mut arm = vec![start];
            let mut prev = branch;
            let mut cur = start;
            loop {
                let next: Vec<usize> = neighbours(a, cur).into_iter().filter(|&j| j != prev).collect();
                match next.as_slice() {
                    [j] => {
                        arm.push(*j);
                        prev = cur;
                        cur = *j;
                    }
                    _ => break,
                }
            }
            arm
        })
        .collect()
}

/// Splits a Cartan matrix into connected components and names each one.
/// Component node lists are 0-based and ascending; components are ordered by
/// their smallest node.
pub fn classify_cartan_matrix(a: &[Vec<i64>]) -> Result<Vec<(SimpleType, Vec<usize>)>, RootError> {
    validate_cartan(a)?;
    components(a)
        .into_iter()
        .map(|comp| {
            let sub: Vec<Vec<i64>> = comp.iter().map(|&i| comp.iter().map(|&j| a[i][j]).collect()).collect();
            classify_connected(&sub).map(|t| (t, comp))
        })
        .collect()
}

fn submatrix(a: &[Vec<i64>], nodes: &[usize]) -> Vec<Vec<i64>> {
    nodes.iter().map(|&i| nodes.iter().map(|&j| a[i][j]).collect()).collect()
}

/// Positive roots, simple-root Cartan data and the invariant form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootSystem {
    cartan: Vec<Vec<i64>>,
    /// `(a_i, a_j)`, normalised so the shortest roots of each component have
    /// squared length 2.
    bilinear: Vec<Vec<i64>>,
    /// Sorted by height, then by coefficient vector in decreasing order.
    positive_roots: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn build(t: SimpleType) -> Self {
        Self::from_cartan_matrix(t.cartan_matrix()).expect("classification tables are valid")
    }

    pub fn from_cartan_matrix(cartan: Vec<Vec<i64>>) -> Result<Self, RootError> {
        validate_cartan(&cartan)?;
        let bilinear = symmetrize(&cartan)?;
        let positive_roots = generate_positive_roots(&cartan);
        Ok(Self { cartan, bilinear, positive_roots })
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn bilinear(&self) -> &[Vec<i64>] {
        &self.bilinear
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        v
    }

    pub fn form(&self, u: &[i64], v: &[i64]) -> i64 {
        let n = self.rank();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| u[i] * self.bilinear[i][j] * v[j])
            .sum()
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        self.positive_roots.iter().any(|r| r == v || *r == neg)
    }

    /// `a` and `b` are orthogonal and neither `a + b` nor `a - b` is a root,
    /// so their `sl2` copies commute.
    pub fn strongly_orthogonal(&self, a: &[i64], b: &[i64]) -> bool {
        let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.form(a, b) == 0 && !self.is_root(&sum) && !self.is_root(&diff)
    }

    /// The positive root dominating every other positive root, if unique.
    pub fn highest_root(&self) -> Option<Vec<i64>> {
        self.positive_roots
            .iter()
            .find(|r| self.positive_roots.iter().all(|s| r.iter().zip(s).all(|(a, b)| a >= b)))
            .cloned()
    }

    /// Lexicographically first set of `r` pairwise-orthogonal positive
    /// roots, found by exhaustive search.
    pub fn orthogonal_a1_subset(&self, r: usize) -> Option<Vec<Vec<i64>>> {
        fn search(rs: &RootSystem, start: usize, r: usize, chosen: &mut Vec<usize>) -> bool {
            if chosen.len() == r {
                return true;
            }
            for k in start..rs.positive_roots.len() {
                let cand = &rs.positive_roots[k];
                if chosen.iter().all(|&c| rs.form(&rs.positive_roots[c], cand) == 0) {
                    chosen.push(k);
                    if search(rs, k + 1, r, chosen) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
        if r == 0 {
            return Some(Vec::new());
        }
        let mut chosen = Vec::new();
        search(self, 0, r, &mut chosen)
            .then(|| chosen.iter().map(|&k| self.positive_roots[k].clone()).collect())
    }

    pub fn sub_system(&self, nodes: &[usize]) -> Result<RootSystem, RootError> {
        RootSystem::from_cartan_matrix(submatrix(&self.cartan, nodes))
    }

    pub fn identify(&self) -> Result<Vec<SimpleType>, RootError> {
        Ok(classify_cartan_matrix(&self.cartan)?.into_iter().map(|(t, _)| t).collect())
    }

    pub fn diagram(&self) -> DynkinDiagram {
        DynkinDiagram::from_cartan_matrix(&self.cartan)
    }
}

fn symmetrize(a: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, RootError> {
    let n = a.len();
    let mut len: Vec<Option<Ratio<i64>>> = vec![None; n];
    for comp in components(a) {
        len[comp[0]] = Some(Ratio::from_integer(1));
        let mut queue = VecDeque::from([comp[0]]);
        while let Some(i) = queue.pop_front() {
            let li = len[i].unwrap();
            for j in neighbours(a, i) {
                // a_ij |a_i|^2 = a_ji |a_j|^2
                let lj = li * Ratio::new(a[i][j], a[j][i]);
                match len[j] {
                    None => {
                        len[j] = Some(lj);
                        queue.push_back(j);
                    }
                    Some(existing) if existing != lj => {
                        return Err(RootError::InvalidCartan("matrix is not symmetrizable".into()));
                    }
                    _ => {}
                }
            }
        }
        let shortest = comp.iter().map(|&i| len[i].unwrap()).min().unwrap();
        for &i in &comp {
            len[i] = Some(len[i].unwrap() / shortest * 2);
        }
    }
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = Ratio::from_integer(a[i][j]) * len[i].unwrap() / 2;
            if !v.is_integer() {
                return Err(RootError::InvalidCartan("form is not integral".into()));
            }
            b[i][j] = v.to_integer();
        }
    }
    Ok(b)
}

/// Layer-by-layer root-string closure: `b + a_i` is a root iff
/// `p - <b, a_i^vee> > 0`, where `p` is the length of the `a_i`-string
/// below `b`.
fn generate_positive_roots(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut all: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut layer: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    all.extend(layer.iter().cloned());
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for beta in &layer {
            for i in 0..n {
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if all.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = (0..n).map(|j| beta[j] * a[i][j]).sum();
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !all.contains(&up) {
                        next.insert(up);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next.into_iter().collect();
    }
    let mut roots: Vec<Vec<i64>> = all.into_iter().collect();
    roots.sort_by(|u, v| {
        let hu: i64 = u.iter().sum();
        let hv: i64 = v.iter().sum();
        hu.cmp(&hv).then_with(|| v.cmp(u))
    });
    roots
}

/// Result of the reduction of a simple type to a small forbidden subtype.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// The type is `A_l`; no forbidden subdiagram exists.
    AType,
    Witness(ObstructionWitness),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionWitness {
    pub parent: SimpleType,
    /// `B2`, `G2` or `D4`.
    pub target: SimpleType,
    /// 0-based nodes of the parent diagram spanning the witness.
    pub nodes: Vec<usize>,
    /// For `E` types: the `E6` subdiagram and the two row ends removed from
    /// it to leave `D4`.
    pub e6_nodes: Option<Vec<usize>>,
    pub removed_row_ends: Option<Vec<usize>>,
}

impl ObstructionWitness {
    /// Rebuilds the sub-root-system on the witness nodes and checks that it
    /// is the claimed target (and, for `E` types, that the intermediate
    /// subdiagram is `E6`).
    pub fn verify(&self) -> bool {
        let parent = RootSystem::build(self.parent);
        let identifies_as = |nodes: &[usize], t: SimpleType| {
            parent
                .sub_system(nodes)
                .and_then(|rs| rs.identify())
                .is_ok_and(|types| types == vec![t])
        };
        if !identifies_as(&self.nodes, self.target) {
            return false;
        }
        match (&self.e6_nodes, &self.removed_row_ends) {
            (None, None) => true,
            (Some(e6), Some(removed)) => {
                let rest: Vec<usize> = e6.iter().copied().filter(|n| !removed.contains(n)).collect();
                identifies_as(e6, SimpleType::new(Family::E, 6).unwrap()) && rest == self.nodes
            }
            _ => false,
        }
    }
}

pub fn obstruction_witness(t: SimpleType) -> Obstruction {
    let a = t.cartan_matrix();
    let witness = |target: SimpleType, mut nodes: Vec<usize>| {
        nodes.sort();
        Obstruction::Witness(ObstructionWitness { parent: t, target, nodes, e6_nodes: None, removed_row_ends: None })
    };
    match t.family() {
        Family::A => Obstruction::AType,
        Family::G => witness(t, vec![0, 1]),
        Family::B | Family::C | Family::F => {
            let n = a.len();
            let (i, j) = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| a[i][j] * a[j][i] == 2)
                .expect("B, C and F diagrams have a double bond");
            witness(SimpleType::new(Family::B, 2).unwrap(), vec![i, j])
        }
        Family::D | Family::E => {
            let d4 = SimpleType::new(Family::D, 4).unwrap();
            let branch = (0..a.len()).find(|&i| neighbours(&a, i).len() == 3).expect("branch node");
            let mut arms = arms_from(&a, branch);
            arms.sort_by_key(Vec::len);
            let core: Vec<usize> = std::iter::once(branch).chain(arms.iter().map(|arm| arm[0])).collect();
            if t.family() == Family::D {
                return witness(d4, core);
            }
            // E6 = branch, the short arm, and two nodes of each longer arm;
            // its row runs through the two longer arms.
            let mut e6: Vec<usize> = core.clone();
            e6.push(arms[1][1]);
            e6.push(arms[2][1]);
            e6.sort();
            let mut removed = vec![arms[1][1], arms[2][1]];
            removed.sort();
            let mut nodes = core;
            nodes.sort();
            Obstruction::Witness(ObstructionWitness {
                parent: t,
                target: d4,
                nodes,
                e6_nodes: Some(e6),
                removed_row_ends: Some(removed),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynkinEdge {
    pub a: usize,
    pub b: usize,
    pub multiplicity: u8,
    /// The short end of a multiple bond; arrows point at it.
    pub short: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynkinDiagram {
    pub types: Vec<SimpleType>,
    pub nodes: usize,
    pub edges: Vec<DynkinEdge>,
}

impl DynkinDiagram {
    pub fn from_cartan_matrix(a: &[Vec<i64>]) -> Self {
        let n = a.len();
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .map(|(i, j)| {
                let m = (a[i][j] * a[j][i]) as u8;
                let short = match m {
                    1 => None,
                    _ if a[i][j] < -1 => Some(i),
                    _ => Some(j),
                };
                DynkinEdge { a: i, b: j, multiplicity: m, short }
            })
            .collect();
        let types = classify_cartan_matrix(a)
            .map(|cs| cs.into_iter().map(|(t, _)| t).collect())
            .unwrap_or_default();
        Self { types, nodes: n, edges }
    }

    fn edge(&self, i: usize, j: usize) -> Option<&DynkinEdge> {
        self.edges.iter().find(|e| (e.a, e.b) == (i.min(j), i.max(j)))
    }

    fn adjacent(&self, i: usize) -> Vec<usize> {
        (0..self.nodes).filter(|&j| j != i && self.edge(i, j).is_some()).collect()
    }

    fn farthest(&self, from: usize, allowed: &[usize]) -> (usize, Vec<usize>) {
        let mut parent = vec![usize::MAX; self.nodes];
        let mut dist = vec![usize::MAX; self.nodes];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        let mut last = from;
        while let Some(i) = queue.pop_front() {
            if dist[i] > dist[last] || (dist[i] == dist[last] && i < last) {
                last = i;
            }
            for j in self.adjacent(i) {
                if allowed.contains(&j) && dist[j] == usize::MAX {
                    dist[j] = dist[i] + 1;
                    parent[j] = i;
                    queue.push_back(j);
                }
            }
        }
        let mut path = vec![last];
        while *path.last().unwrap() != from {
            path.push(parent[*path.last().unwrap()]);
        }
        (last, path)
    }

    /// ASCII rendering: the longest chain of each component as a row, with
    /// any remaining node hung below its neighbour. `---` is a single bond;
    /// `==>`/`<==` and `##>`/`<##` are double and triple bonds pointing at
    /// the short root. Nodes are numbered from 1.
    pub fn ascii(&self) -> String {
        let adjacency: Vec<Vec<i64>> = (0..self.nodes)
            .map(|i| (0..self.nodes).map(|j| if i == j || self.edge(i, j).is_some() { 1 } else { 0 }).collect())
            .collect();
        let mut blocks = Vec::new();
        for comp in components(&adjacency) {
            let (end, _) = self.farthest(comp[0], &comp);
            let (_, row) = self.farthest(end, &comp);
            let mut line = String::new();
            let mut columns = vec![0usize; self.nodes];
            for (k, &node) in row.iter().enumerate() {
                if k > 0 {
                    let prev = row[k - 1];
                    let e = self.edge(prev, node).unwrap();
                    let bond = match (e.multiplicity, e.short) {
                        (1, _) => "---",
                        (2, Some(s)) if s == node => "==>",
                        (2, _) => "<==",
                        (_, Some(s)) if s == node => "##>",
                        _ => "<##",
                    };
                    line.push_str(bond);
                }
                columns[node] = line.len();
                line.push_str(&(node + 1).to_string());
            }
            let mut block = vec![line];
            for &node in comp.iter().filter(|n| !row.contains(n)) {
                let anchor = self.adjacent(node).into_iter().find(|a| row.contains(a)).unwrap_or(row[0]);
                let pad = " ".repeat(columns[anchor]);
                block.push(format!("{}|", pad));
                block.push(format!("{}{}", pad, node + 1));
            }
            blocks.push(block.join("\n"));
        }
        blocks.join("\n\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> SimpleType {
        s.parse().unwrap()
    }

    #[test]
    fn legality() {
        assert!("G5".parse::<SimpleType>().is_err());
        assert!("D3".parse::<SimpleType>().is_err());
        assert!("E9".parse::<SimpleType>().is_err());
        assert!("A0".parse::<SimpleType>().is_err());
        assert_eq!(t("e6").to_string(), "E6");
    }

    #[test]
    fn b2_positive_roots_match_the_explicit_list() {
        let rs = RootSystem::build(t("B2"));
        assert_eq!(rs.positive_roots(), &[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]);
    }

    #[test]
    fn g2_positive_roots() {
        let rs = RootSystem::build(t("G2"));
        let expected = vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2], vec![1, 3], vec![2, 3]];
        assert_eq!(rs.positive_roots(), expected.as_slice());
    }

    #[test]
    fn d4_highest_root() {
        let rs = RootSystem::build(t("D4"));
        let top = rs.highest_root().unwrap();
        assert_eq!(top, vec![1, 2, 1, 1]);
        for outer in [0, 2, 3] {
            assert_eq!(rs.form(&top, &rs.simple_root(outer)), 0);
        }
        assert_eq!(RootSystem::build(t("A1")).highest_root().unwrap(), vec![1]);
        assert_eq!(RootSystem::build(t("B2")).highest_root().unwrap(), vec![1, 2]);
    }

    #[test]
    fn invariant_form_lengths() {
        let b2 = RootSystem::build(t("B2"));
        assert_eq!(b2.bilinear(), &[vec![4, -2], vec![-2, 2]]);
        let g2 = RootSystem::build(t("G2"));
        assert_eq!(g2.bilinear(), &[vec![6, -3], vec![-3, 2]]);
        let e8 = RootSystem::build(t("E8"));
        assert!((0..8).all(|i| e8.bilinear()[i][i] == 2));
    }

    #[test]
    fn orthogonal_subsets() {
        let b2 = RootSystem::build(t("B2"));
        assert_eq!(b2.orthogonal_a1_subset(2).unwrap(), vec![vec![1, 0], vec![1, 2]]);
        let d4 = RootSystem::build(t("D4"));
        assert_eq!(
            d4.orthogonal_a1_subset(4).unwrap(),
            vec![vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 2, 1, 1]]
        );
        assert_eq!(RootSystem::build(t("A2")).orthogonal_a1_subset(2), None);
        let g2 = RootSystem::build(t("G2"));
        let pair = g2.orthogonal_a1_subset(2).unwrap();
        assert_eq!(pair, vec![vec![1, 0], vec![1, 2]]);
        assert!(g2.strongly_orthogonal(&pair[0], &pair[1]));
    }

    #[test]
    fn classification_round_trip() {
        for ty in SimpleType::all_up_to(8) {
            let rs = RootSystem::build(ty);
            let expected = if ty == t("C2") { t("B2") } else { ty };
            assert_eq!(rs.identify().unwrap(), vec![expected], "type {}", ty);
        }
    }

    #[test]
    fn disconnected_matrices_split() {
        let a = vec![vec![2, -1, 0], vec![-1, 2, 0], vec![0, 0, 2]];
        let parts = classify_cartan_matrix(&a).unwrap();
        assert_eq!(parts, vec![(t("A2"), vec![0, 1]), (t("A1"), vec![2])]);
    }

    #[test]
    fn invalid_cartan_rejected() {
        assert!(RootSystem::from_cartan_matrix(vec![vec![2, -1], vec![0, 2]]).is_err());
        assert!(RootSystem::from_cartan_matrix(vec![vec![1]]).is_err());
        // affine A1
        assert!(classify_cartan_matrix(&[vec![2, -2], vec![-2, 2]]).is_err());
    }

    #[test]
    fn witnesses() {
        assert_eq!(obstruction_witness(t("A7")), Obstruction::AType);
        let Obstruction::Witness(w) = obstruction_witness(t("E6")) else { panic!() };
        assert_eq!(w.target, t("D4"));
        assert_eq!(w.e6_nodes.as_deref(), Some(&[0, 1, 2, 3, 4, 5][..]));
        // Bourbaki row 1-3-4-5-6: the ends are nodes 1 and 6
        assert_eq!(w.removed_row_ends.as_deref(), Some(&[0, 5][..]));
        assert_eq!(w.nodes, vec![1, 2, 3, 4]);
        assert!(w.verify());
        let Obstruction::Witness(w) = obstruction_witness(t("B5")) else { panic!() };
        assert_eq!((w.target, w.nodes.clone()), (t("B2"), vec![3, 4]));
        assert!(w.verify());
    }

    #[test]
    fn ascii_art() {
        assert_eq!(RootSystem::build(t("A3")).diagram().ascii(), "1---2---3");
        assert_eq!(RootSystem::build(t("B3")).diagram().ascii(), "1---2==>3");
        assert_eq!(RootSystem::build(t("C3")).diagram().ascii(), "1---2<==3");
        assert_eq!(RootSystem::build(t("G2")).diagram().ascii(), "1##>2");
        assert_eq!(RootSystem::build(t("D4")).diagram().ascii(), "1---2---3\n    |\n    4");
        let e6 = RootSystem::build(t("E6")).diagram().ascii();
        assert_eq!(e6, "1---3---4---5---6\n        |\n        2");
    }
}
