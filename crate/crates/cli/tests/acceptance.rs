//! Acceptance run: one line per criterion, `PASS` or `FAIL`, with timing.
//! Exits non-zero if any criterion fails.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use liefield_cli::{parse_field, run};
use liefield_core::certify::constraints::{single_index_check, solve_pair};
use liefield_core::certify::{classify, pairwise_reduce, Verdict};
use liefield_core::coeffring::{int, rat};
use liefield_core::liestruct::DEFAULT_SEED;
use liefield_core::linalg::Matrix;
use liefield_core::realize::Realization;
use liefield_core::roots::{obstruction_witness, Family, Obstruction, RootSystem, SimpleType};
use liefield_core::vfield::sum_fields;
use liefield_core::{ExpMonomial, ExpPoly, GaussianRational as Gq, Rational, VectorField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Duration, limit: f64) -> Result<(), String> {
    ensure(t.as_secs_f64() < limit, || format!("took {:.2}s, limit {}s", t.as_secs_f64(), limit))
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.random_range(-5..=5), rng.random_range(1..=4))
}

fn coeff(rng: &mut ChaCha8Rng) -> Gq {
    let im = if rng.random_bool(0.25) { int(rng.random_range(-3..=3)) } else { int(0) };
    Gq::new(small_rational(rng), im)
}

/// Up to three terms; each variable in `vars` gets a power and a frequency.
fn random_poly(rng: &mut ChaCha8Rng, n: usize, vars: usize) -> ExpPoly {
    let terms = (0..rng.random_range(0..=3))
        .map(|_| {
            let pow = (0..n).map(|i| if i < vars { rng.random_range(0..=2) } else { 0 }).collect();
            let freq = (0..n)
                .map(|i| if i < vars { rat(rng.random_range(-2..=2), rng.random_range(1..=2)) } else { int(0) })
                .collect();
            (ExpMonomial::new(pow, freq), coeff(rng))
        })
        .collect::<Vec<_>>();
    ExpPoly::from_terms(n, terms)
}

fn random_field(rng: &mut ChaCha8Rng, n: usize, vars: usize) -> VectorField {
    VectorField::new((0..n).map(|_| random_poly(rng, n, vars)).collect()).unwrap()
}

fn bracket_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let cases = 500;
    for case in 0..cases {
        let n = rng.random_range(1..=4);
        let (x, y, z) = (random_field(&mut rng, n, n), random_field(&mut rng, n, n), random_field(&mut rng, n, n));
        let h = random_poly(&mut rng, n, n);
        let br = |a: &VectorField, b: &VectorField| a.bracket(b).map_err(|e| e.to_string());
        ensure(br(&x, &y)? == br(&y, &x)?.neg(), || format!("antisymmetry fails on case {}", case))?;
        let jacobi = [br(&x, &br(&y, &z)?)?, br(&y, &br(&z, &x)?)?, br(&z, &br(&x, &y)?)?];
        ensure(sum_fields(n, &jacobi).unwrap().is_zero(), || format!("Jacobi fails on case {}", case))?;
        let lhs = br(&x, &y.mul_function(&h).unwrap())?;
        let rhs = br(&x, &y)?.mul_function(&h).unwrap().try_add(&y.mul_function(&x.apply(&h).unwrap()).unwrap()).unwrap();
        ensure(lhs == rhs, || format!("Leibniz fails on case {}", case))?;
    }
    within(start.elapsed(), 10.0)?;
    Ok(format!("{} random triples", cases))
}

fn exp_scaled_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let start = Instant::now();
    let cases = 200;
    for case in 0..cases {
        let n = rng.random_range(1..=4);
        let chi: Vec<Rational> = (0..n).map(|_| small_rational(&mut rng)).collect();
        let psi: Vec<Rational> = (0..n).map(|_| small_rational(&mut rng)).collect();
        let u: Vec<Gq> = (0..n).map(|_| coeff(&mut rng)).collect();
        let v: Vec<Gq> = (0..n).map(|_| coeff(&mut rng)).collect();
        let x = VectorField::exp_scaled(chi.clone(), u.clone());
        let y = VectorField::exp_scaled(psi.clone(), v.clone());
        // U(psi) and V(chi) for the constant fields U, V
        let pair = |a: &[Gq], b: &[Rational]| {
            a.iter().zip(b).fold(Gq::from_integer(0), |acc, (c, r)| &acc + &(c * &Gq::real(r.clone())))
        };
        let (u_psi, v_chi) = (pair(&u, &psi), pair(&v, &chi));
        let sum: Vec<Rational> = chi.iter().zip(&psi).map(|(a, b)| a + b).collect();
        let coeffs: Vec<Gq> = (0..n).map(|i| &(&u_psi * &v[i]) - &(&v_chi * &u[i])).collect();
        // [U, V] vanishes for constant fields
        let expected = VectorField::exp_scaled(sum, coeffs);
        ensure(x.bracket(&y).unwrap() == expected, || format!("case {} differs", case))?;
    }
    within(start.elapsed(), 5.0)?;
    Ok(format!("{} exp-scaled pairs", cases))
}

fn pair_pipeline() -> Outcome {
    ensure(single_index_check().map_err(|e| e.to_string())?.holds(), || "single-index check fails".into())?;
    let mut pairs = 0;
    let mut slowest = Duration::ZERO;
    for n in 2..=5 {
        for i in 0..n {
            for j in i + 1..n {
                let start = Instant::now();
                let r = solve_pair(n, i, j).map_err(|e| e.to_string())?;
                let t = start.elapsed();
                slowest = slowest.max(t);
                ensure(r.forces_expected(), || format!("pair ({},{}) on N={} does not force", i + 1, j + 1, n))?;
                within(t, 1.0)?;
                pairs += 1;
            }
        }
        let frag = pairwise_reduce(n).map_err(|e| e.to_string())?;
        ensure(frag.holds() && frag.forced_zero().len() == 2 * n * (n - 1), || format!("N={} reduction incomplete", n))?;
    }
    Ok(format!("{} pair systems, slowest {:.3}s", pairs, slowest.as_secs_f64()))
}

fn audits() -> Outcome {
    let start = Instant::now();
    let a = |k| SimpleType::a(k);
    let mut cases: Vec<(Realization, usize, Vec<SimpleType>, usize)> = Vec::new();
    for n in 1..=6 {
        cases.push((Realization::a1_power(n), 3 * n, vec![a(1); n], n));
    }
    for k in 1..=4 {
        cases.push((Realization::a_type(k), k * k + 2 * k, vec![a(k)], k));
    }
    cases.push((Realization::product(&[2, 1]), 11, vec![a(2), a(1)], 3));
    let count = cases.len();
    for (r, dim, types, rank) in cases {
        let audit = r.audit(64, DEFAULT_SEED).map_err(|e| e.to_string())?;
        let mut found = audit.identified_type.clone().unwrap_or_default();
        let mut want = types.clone();
        found.sort();
        want.sort();
        ensure(
            audit.passed() && audit.closure_dim == dim && audit.semisimple && found == want && audit.generic_rank == rank,
            || format!("audit of {:?} on C^{}: {:?}", types, r.ambient_dim(), audit.failures()),
        )?;
    }
    within(start.elapsed(), 30.0)?;
    Ok(format!("{} realizations", count))
}

fn straightening() -> Outcome {
    for k in 1..=3 {
        let r = Realization::a_type(k);
        let s = r.straighten().map_err(|e| e.to_string())?;
        // the Cartan must be span{d_u}: constant fields of full rank
        let cartan = s.cartan();
        ensure(cartan.iter().all(VectorField::is_constant), || format!("A{}: Cartan is not constant", k))?;
        let rows: Vec<Vec<Gq>> = cartan
            .iter()
            .map(|h| h.coeffs().iter().map(|c| c.as_constant().unwrap_or_else(|| Gq::from_integer(0))).collect())
            .collect();
        let det = Matrix::from_rows(rows).determinant();
        ensure(det != Gq::from_integer(0), || format!("A{}: Cartan has rank below {}", k, k))?;
        let (before, after) = (r.closure(64).map_err(|e| e.to_string())?, s.closure(64).map_err(|e| e.to_string())?);
        for f in after.basis() {
            ensure(f.terms().all(|(_, m, _)| m.pow().iter().all(|&p| p == 0)), || format!("A{}: {} is not exp-scaled", k, f))?;
        }
        ensure(before.dim() == after.dim(), || format!("A{}: dimension changes", k))?;
        for i in 0..before.dim() {
            for j in 0..before.dim() {
                ensure(before.structure_constants(i, j) == after.structure_constants(i, j), || {
                    format!("A{}: constants of [e{}, e{}] change", k, i + 1, j + 1)
                })?;
            }
        }
    }
    Ok("A1, A2, A3".into())
}

fn root_tables() -> Outcome {
    for l in 1..=6 {
        let n = RootSystem::build(SimpleType::a(l)).positive_roots().len();
        ensure(n == l * (l + 1) / 2, || format!("A{} has {} positive roots", l, n))?;
    }
    let rs = |s: &str| RootSystem::build(s.parse().unwrap());
    let b2: Vec<Vec<i64>> = vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]];
    let g2: Vec<Vec<i64>> = vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2], vec![1, 3], vec![2, 3]];
    let sorted = |mut v: Vec<Vec<i64>>| {
        v.sort();
        v
    };
    ensure(sorted(rs("B2").positive_roots().to_vec()) == sorted(b2), || "B2 roots differ".into())?;
    ensure(sorted(rs("G2").positive_roots().to_vec()) == sorted(g2), || "G2 roots differ".into())?;
    // alpha and alpha + 2 beta span A1 x A1 in both
    for t in ["B2", "G2"] {
        ensure(rs(t).strongly_orthogonal(&[1, 0], &[1, 2]), || format!("{}: alpha, alpha+2beta not orthogonal", t))?;
    }
    let d4 = rs("D4");
    ensure(d4.positive_roots().len() == 12, || "D4 count".into())?;
    let top = d4.highest_root().ok_or("no highest root")?;
    ensure(top == vec![1, 2, 1, 1], || format!("D4 highest root {:?}", top))?;
    for node in [0, 2, 3] {
        ensure(d4.form(&top, &d4.simple_root(node)) == 0, || format!("highest root meets node {}", node + 1))?;
    }
    Ok("A1..A6, B2, G2, D4".into())
}

fn witnesses() -> Outcome {
    let types = SimpleType::all_up_to(8);
    for &t in &types {
        match obstruction_witness(t) {
            Obstruction::AType => ensure(t.is_a(), || format!("{} reported as A-type", t))?,
            Obstruction::Witness(w) => {
                let sub = RootSystem::build(t).sub_system(&w.nodes).map_err(|e| e.to_string())?;
                let found = sub.identify().map_err(|e| e.to_string())?;
                ensure(w.verify() && found == vec![w.target], || format!("{}: witness {:?}", t, found))?;
                ensure(["B2", "G2", "D4"].contains(&w.target.to_string().as_str()), || format!("{}: target {}", t, w.target))?;
                if t.family() == Family::E {
                    ensure(w.target.to_string() == "D4" && w.removed_row_ends.as_ref().is_some_and(|r| r.len() == 2), || {
                        format!("{}: no row-end reduction", t)
                    })?;
                }
            }
        }
    }
    Ok(format!("{} simple types", types.len()))
}

fn end_to_end() -> Outcome {
    let start = Instant::now();
    let parse = |s: &str| s.parse::<SimpleType>().unwrap();
    for (t, n) in [("B2", 2), ("G2", 2), ("D4", 4)] {
        let cert = classify(&[parse(t)], n).map_err(|e| e.to_string())?;
        ensure(cert.verdict == Verdict::NotRealizable, || format!("{}: {}", t, cert.verdict))?;
        ensure(cert.reverify().map_err(|e| e.to_string())?.ok(), || format!("{}: certificate does not reverify", t))?;
    }
    let mut multisets = 0;
    for n in 1..=4 {
        for ranks in partitions(n, n) {
            let factors: Vec<SimpleType> = ranks.iter().map(|&k| SimpleType::a(k)).collect();
            let cert = classify(&factors, n).map_err(|e| e.to_string())?;
            ensure(cert.verdict == Verdict::Realizable && cert.reverify().map_err(|e| e.to_string())?.ok(), || {
                format!("{:?} on C^{}: {}", ranks, n, cert.verdict)
            })?;
            multisets += 1;
        }
    }
    let cert = classify(&[SimpleType::a(2)], 3).map_err(|e| e.to_string())?;
    ensure(cert.verdict == Verdict::OutOfScope, || format!("A2 on C^3: {}", cert.verdict))?;
    for (factors, want) in [
        (vec!["A1"], Verdict::Realizable),
        (vec!["A1", "A1"], Verdict::Realizable),
        (vec!["A2"], Verdict::Realizable),
        (vec!["B2"], Verdict::NotRealizable),
        (vec!["G2"], Verdict::NotRealizable),
    ] {
        let f: Vec<SimpleType> = factors.iter().map(|s| parse(s)).collect();
        let n = f.iter().map(SimpleType::rank).sum::<usize>().max(2);
        let got = classify(&f, n).map_err(|e| e.to_string())?.verdict;
        let got = if factors == ["A1"] { classify(&f, 1).map_err(|e| e.to_string())?.verdict } else { got };
        ensure(got == want, || format!("{:?}: {}", factors, got))?;
    }
    within(start.elapsed(), 60.0)?;
    Ok(format!("3 obstructions, {} A-type multisets", multisets))
}

/// Partitions of `n` into parts of size at most `max`, non-increasing.
fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn projection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cases = 200;
    for case in 0..cases {
        let n = rng.random_range(2..=4);
        let k = rng.random_range(1..n);
        let (x, y) = (random_field(&mut rng, n, k), random_field(&mut rng, n, k));
        let lhs = x.bracket(&y).unwrap().project(k).map_err(|e| e.to_string())?;
        let rhs = x.project(k).unwrap().bracket(&y.project(k).unwrap()).unwrap();
        ensure(lhs == rhs, || format!("case {} differs", case))?;
    }
    Ok(format!("{} pairs", cases))
}

fn cli() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut paths: Vec<_> = fs::read_dir(dir.join("cases"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "args"))
        .collect();
    paths.sort();
    let mut codes = std::collections::BTreeSet::new();
    for path in &paths {
        let text = fs::read_to_string(path).unwrap();
        let mut lines = text.lines();
        let code: i32 = lines.next().and_then(|l| l.strip_prefix("exit=")).unwrap().parse().unwrap();
        let argv: Vec<String> = std::iter::once("liefield".to_string()).chain(lines.map(str::to_string)).collect();
        let (a, b) = (run(argv.clone()), run(argv));
        let name = path.file_stem().unwrap().to_string_lossy();
        ensure(a == b, || format!("{}: reports differ between runs", name))?;
        ensure(a.code == code, || format!("{}: exit {}", name, a.code))?;
        let expected = fs::read_to_string(path.with_extension("stdout")).unwrap_or_default();
        ensure(a.stdout == expected, || format!("{}: stdout differs from golden", name))?;
        codes.insert(code);
    }
    let corpus = fs::read_to_string(dir.join("fields.txt")).unwrap();
    let mut fields = 0;
    for line in corpus.lines().filter(|l| !l.trim().is_empty()) {
        let (n, text) = line.split_once('\t').ok_or("bad corpus line")?;
        let f = parse_field(text, n.parse().unwrap()).map_err(|e| format!("{}: {}", text, e))?;
        ensure(f.to_string() == text, || format!("{} prints as {}", text, f))?;
        fields += 1;
    }
    for (args, want) in [
        (&["bracket", "exp(x1)*d1", "exp(-1*x1)*d1", "--dim", "1"][..], 0),
        (&["analyze", "--cartan", "1", "d1", "x1*d1"], 1),
        (&["closure", "1.5*d1"], 2),
        (&["closure", "x1^2*d1", "x1^3*d1"], 3),
    ] {
        let out = Command::new(env!("CARGO_BIN_EXE_liefield")).args(args).output().map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(want), || format!("{:?} exits {:?}", args, out.status.code()))?;
        codes.insert(want);
    }
    ensure(codes.len() == 4, || format!("exit codes covered: {:?}", codes))?;
    Ok(format!("{} golden reports, {} corpus fields, exit codes 0-3", paths.len(), fields))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("bracket laws", bracket_laws),
        ("exp-scaled bracket formula", exp_scaled_formula),
        ("pairwise reduction", pair_pipeline),
        ("realization audits", audits),
        ("straightening", straightening),
        ("root tables", root_tables),
        ("obstruction witnesses", witnesses),
        ("classification", end_to_end),
        ("projection homomorphism", projection),
        ("cli determinism and round trip", cli),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let t = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {} ({}; {:.2}s)", k + 1, name, detail, t),
            Err(why) => {
                println!("criterion {:>2} FAIL  {} ({}; {:.2}s)", k + 1, name, why, t);
                failed += 1;
            }
        }
    }
    if failed > 0 {
        println!("{} of {} criteria failed", failed, criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
