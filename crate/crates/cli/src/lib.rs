//! The `liefield` command-line tool.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! parse errors, 3 when a resource limit is hit.

pub mod parse;

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use liefield_core::certify::{self, CertifyError, Certificate, Evidence, Transcript};
use liefield_core::liestruct::{LieError, Subalgebra, DEFAULT_MAX_DIM, DEFAULT_SEED};
use liefield_core::realize::Realization;
use liefield_core::roots::{classify_cartan_matrix, obstruction_witness, Obstruction, RootSystem, SimpleType};
use liefield_core::wire::{RealizationReport, SubalgebraReport, WireField};
use liefield_core::{GaussianRational, VectorField};
use num_traits::Zero;
use serde::Serialize;

pub use parse::{parse_field, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "liefield", version, about = "Exact Lie algebras of exponential-polynomial vector fields")]
pub struct Cli {
    /// Ambient dimension N. Inferred from the input when omitted.
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for the numeric rank test.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Largest subalgebra dimension a closure may reach.
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lie bracket of two fields.
    Bracket {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Span closure of a set of fields under the bracket.
    Closure(FieldsArgs),
    /// Closure plus Killing form, rank and, given a Cartan, roots and type.
    Analyze {
        #[command(flatten)]
        fields: FieldsArgs,
        /// 1-based basis index of a Cartan element; repeat for each.
        #[arg(long = "cartan")]
        cartan: Vec<usize>,
    },
    /// Canonical realization of a product of A-type algebras.
    Realize {
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<SimpleType>,
        /// Check relations, dimension, semisimplicity, type and rank.
        #[arg(long)]
        audit: bool,
    },
    /// Substitute `x_i = exp(u_i)`, either in a realization or in fields.
    Straighten {
        #[arg(long, value_delimiter = ',', conflicts_with = "fields")]
        factors: Vec<SimpleType>,
        /// 1-based coordinates to substitute; all when omitted.
        #[arg(long, value_delimiter = ',')]
        coords: Vec<usize>,
        fields: Vec<String>,
    },
    /// Classify a semisimple type as a maximal-rank algebra on C^N and
    /// re-verify the certificate.
    Certify {
        #[arg(long, value_delimiter = ',', required_unless_present = "census")]
        factors: Vec<SimpleType>,
        /// Classify every semisimple type of rank 1..=n instead.
        #[arg(long, conflicts_with = "factors")]
        census: Option<usize>,
    },
    /// Root systems, Dynkin diagrams and obstruction witnesses.
    Roots {
        #[arg(long = "type", conflicts_with = "matrix", required_unless_present = "matrix")]
        ty: Option<SimpleType>,
        /// Cartan matrix with rows separated by `;`, e.g. `2,-1;-1,2`.
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<String>,
        /// List the positive roots.
        #[arg(long)]
        positive: bool,
    },
}

#[derive(Args, Debug)]
pub struct FieldsArgs {
    /// Fields; put them after `--` when one starts with `-`.
    #[arg(required = true)]
    pub fields: Vec<String>,
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Resource(String),
    Failed(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Resource(_) => EXIT_RESOURCE,
            Failure::Failed(_) => EXIT_FAILED,
        }
    }
}

impl From<LieError> for Failure {
    fn from(e: LieError) -> Self {
        match e {
            LieError::DimensionExceeded { .. } => Failure::Resource(e.to_string()),
            LieError::AmbientMismatch { .. } | LieError::NoGenerators | LieError::CartanIndex { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Failed(e.to_string()),
        }
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        match e {
            e if e.is_resource_exhaustion() => Failure::Resource(e.to_string()),
            CertifyError::Precondition(_) | CertifyError::Root(_) => Failure::Usage(e.to_string()),
            e => Failure::Failed(e.to_string()),
        }
    }
}

impl From<liefield_core::vfield::FieldError> for Failure {
    fn from(e: liefield_core::vfield::FieldError) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Report body plus a verification flag; `ok = false` maps to exit 1.
struct Report {
    text: String,
    json: String,
    ok: bool,
}

impl Report {
    fn new(text: String, json: impl Serialize) -> Self {
        Self { text, json: serde_json::to_string_pretty(&json).expect("report serializes"), ok: true }
    }
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: rendered }
            } else {
                Outcome { code: EXIT_OK, stdout: rendered, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let mut stdout = if cli.json {
                report.json
            } else {
                report.text
            };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            let (code, stderr) =
                if report.ok { (EXIT_OK, String::new()) } else { (EXIT_FAILED, "error: verification failed\n".into()) };
            Outcome { code, stdout, stderr }
        }
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) | Failure::Resource(m) | Failure::Failed(m) => m,
            };
            Outcome { code: f.code(), stdout: String::new(), stderr: format!("error: {}\n", msg) }
        }
    }
}

fn infer_dim(cli: &Cli, texts: &[String]) -> Result<usize, Failure> {
    if let Some(n) = cli.dim {
        return Ok(n);
    }
    let mut n = 1;
    for t in texts {
        n = n.max(parse::max_index(t).map_err(|e| Failure::Usage(e.to_string()))?);
    }
    Ok(n)
}

fn parse_all(cli: &Cli, texts: &[String]) -> Result<Vec<VectorField>, Failure> {
    let n = infer_dim(cli, texts)?;
    texts
        .iter()
        .enumerate()
        .map(|(k, t)| parse_field(t, n).map_err(|e| Failure::Usage(format!("field {}: {}", k + 1, e))))
        .collect()
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let max_dim = cli.max_dim.unwrap_or(DEFAULT_MAX_DIM);
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    match &cli.command {
        Command::Bracket { a, b } => {
            let fs = parse_all(cli, &[a.clone(), b.clone()])?;
            let c = fs[0].bracket(&fs[1])?;
            Ok(Report::new(c.to_string(), WireField::from(&c)))
        }
        Command::Closure(args) => {
            let fs = parse_all(cli, &args.fields)?;
            let s = Subalgebra::span_closure(&fs, max_dim)?;
            let mut text = String::new();
            write_closure(&mut text, &s);
            Ok(Report::new(text, closure_json(&s)))
        }
        Command::Analyze { fields, cartan } => {
            let fs = parse_all(cli, &fields.fields)?;
            let s = Subalgebra::span_closure(&fs, max_dim)?;
            analyze(&s, cartan, seed)
        }
        Command::Realize { factors, audit } => {
            let r = realization(cli, factors)?;
            let audit = if *audit { Some(r.audit(max_dim, seed)?) } else { None };
            let mut text = String::new();
            write_realization(&mut text, &r);
            let mut ok = true;
            if let Some(a) = &audit {
                writeln!(text, "closure dimension: {} (expected {})", a.closure_dim, a.expected_dim).unwrap();
                writeln!(text, "killing determinant: {}", a.killing_determinant).unwrap();
                let identified = match (&a.identified_type, &a.identification_error) {
                    (Some(t), _) => type_list(t),
                    (None, Some(e)) => format!("unidentified ({})", e),
                    (None, None) => "unidentified".into(),
                };
                writeln!(text, "identified type: {}", identified).unwrap();
                writeln!(text, "generic rank: {} on C^{}", a.generic_rank, a.ambient_dim).unwrap();
                ok = a.passed();
                if ok {
                    writeln!(text, "audit: PASS").unwrap();
                } else {
                    writeln!(text, "audit: FAIL ({})", a.failures().join(", ")).unwrap();
                }
            }
            let mut report = Report::new(text, RealizationReport::new(&r, audit));
            report.ok = ok;
            Ok(report)
        }
        Command::Straighten { factors, coords, fields } => {
            if !factors.is_empty() {
                if !coords.is_empty() {
                    return Err(Failure::Usage("--coords applies to fields, not to --factors".into()));
                }
                let r = realization(cli, factors)?.straighten()?;
                let mut text = String::new();
                write_realization(&mut text, &r);
                return Ok(Report::new(text, RealizationReport::new(&r, None)));
            }
            if fields.is_empty() {
                return Err(Failure::Usage("give --factors or at least one field".into()));
            }
            let fs = parse_all(cli, fields)?;
            let n = fs[0].dim();
            let subset: Vec<usize> = if coords.is_empty() {
                (0..n).collect()
            } else {
                coords
                    .iter()
                    .map(|&c| {
                        if c == 0 || c > n {
                            Err(Failure::Usage(format!("coordinate {} out of range for dimension {}", c, n)))
                        } else {
                            Ok(c - 1)
                        }
                    })
                    .collect::<Result<_, _>>()?
            };
            let out = fs.iter().map(|f| f.substitute_exp(&subset)).collect::<Result<Vec<_>, _>>()?;
            let text = out.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
            Ok(Report::new(text, out.iter().map(WireField::from).collect::<Vec<_>>()))
        }
        Command::Certify { factors, census } => match census {
            Some(max_n) => {
                let entries = certify::census(*max_n)?;
                let mut text = String::new();
                for e in &entries {
                    writeln!(text, "N={} {}: {}", e.ambient_dim, type_list(&e.factors), e.verdict).unwrap();
                }
                Ok(Report::new(text, entries))
            }
            None => {
                let n = cli.dim.unwrap_or_else(|| factors.iter().map(SimpleType::rank).sum());
                let cert = certify::classify(factors, n)?;
                let transcript = cert.reverify()?;
                let mut text = String::new();
                write_certificate(&mut text, &cert, &transcript);
                #[derive(Serialize)]
                struct Out<'a> {
                    certificate: &'a Certificate,
                    transcript: &'a Transcript,
                }
                let mut report = Report::new(text, Out { certificate: &cert, transcript: &transcript });
                report.ok = transcript.ok();
                Ok(report)
            }
        },
        Command::Roots { ty, matrix, positive } => roots(ty.as_ref(), matrix.as_deref(), *positive),
    }
}

fn realization(cli: &Cli, factors: &[SimpleType]) -> Result<Realization, Failure> {
    if let Some(t) = factors.iter().find(|t| !t.is_a()) {
        return Err(Failure::Usage(format!(
            "{} has no canonical realization; only A-type factors are realizable (see `certify`)",
            t
        )));
    }
    let ranks: Vec<usize> = factors.iter().map(SimpleType::rank).collect();
    let total: usize = ranks.iter().sum();
    if let Some(n) = cli.dim {
        if n != total {
            return Err(Failure::Usage(format!("factors have total rank {} but --dim is {}", total, n)));
        }
    }
    Ok(Realization::product(&ranks))
}

fn type_list(ts: &[SimpleType]) -> String {
    ts.iter().map(ToString::to_string).collect::<Vec<_>>().join(" x ")
}

fn coefficient_text(c: &GaussianRational) -> String {
    if !c.re().is_zero() && !c.im().is_zero() {
        format!("({})", c)
    } else {
        c.to_string()
    }
}

/// `c1*e1 + c2*e2 - ...` with 1-based basis names.
fn combination_text(coords: &[GaussianRational]) -> String {
    let mut s = String::new();
    for (k, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let negative = c.im().is_zero() && c.re() < &num_traits::zero();
        let mag = if negative { -c.clone() } else { c.clone() };
        if s.is_empty() {
            if negative {
                s.push('-');
            }
        } else {
            s.push_str(if negative { " - " } else { " + " });
        }
        if mag != GaussianRational::from_integer(1) {
            write!(s, "{}*", coefficient_text(&mag)).unwrap();
        }
        write!(s, "e{}", k + 1).unwrap();
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn write_closure(out: &mut String, s: &Subalgebra) {
    writeln!(out, "dimension: {}", s.dim()).unwrap();
    writeln!(out, "basis:").unwrap();
    for (k, b) in s.basis().iter().enumerate() {
        writeln!(out, "  e{} = {}", k + 1, b).unwrap();
    }
    writeln!(out, "brackets:").unwrap();
    let mut any = false;
    for a in 0..s.dim() {
        for b in a + 1..s.dim() {
            let c = s.structure_constants(a, b);
            if c.iter().all(Zero::is_zero) {
                continue;
            }
            any = true;
            writeln!(out, "  [e{}, e{}] = {}", a + 1, b + 1, combination_text(c)).unwrap();
        }
    }
    if !any {
        writeln!(out, "  (abelian)").unwrap();
    }
}

#[derive(Serialize)]
struct ClosureJson {
    ambient_dim: usize,
    dim: usize,
    basis: Vec<WireField>,
    basis_text: Vec<String>,
    structure_constants: Vec<liefield_core::wire::WireStructureConstant>,
}

fn closure_json(s: &Subalgebra) -> ClosureJson {
    let r = SubalgebraReport::new(s, None, None);
    ClosureJson {
        ambient_dim: r.ambient_dim,
        dim: r.dim,
        basis: r.basis,
        basis_text: r.basis_text,
        structure_constants: r.structure_constants,
    }
}

fn analyze(s: &Subalgebra, cartan: &[usize], seed: u64) -> Result<Report, Failure> {
    let idx = cartan
        .iter()
        .map(|&c| {
            if c == 0 || c > s.dim() {
                Err(Failure::Usage(format!("--cartan {} is not a basis index (1..={})", c, s.dim())))
            } else {
                Ok(c - 1)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let decomposition = if idx.is_empty() { None } else { Some(s.root_decomposition(&idx)) };
    if let Some(Err(e @ LieError::CartanIndex { .. })) = &decomposition {
        return Err(Failure::Usage(e.to_string()));
    }
    let cd = decomposition.as_ref().map(|d| (idx.as_slice(), d.as_ref().map_err(ToString::to_string)));
    let report = SubalgebraReport::new(s, cd, Some(seed));

    let mut text = String::new();
    write_closure(&mut text, s);
    writeln!(text, "killing determinant: {}", report.killing_determinant).unwrap();
    writeln!(text, "semisimple: {}", if report.semisimple { "yes" } else { "no" }).unwrap();
    writeln!(text, "generic rank: {} on C^{}", report.generic_rank, report.ambient_dim).unwrap();
    let mut ok = true;
    if let Some(c) = &report.cartan {
        let names: Vec<String> = c.iter().map(|k| format!("e{}", k + 1)).collect();
        writeln!(text, "cartan: {}", names.join(", ")).unwrap();
    }
    if let Some(Ok(cd)) = &decomposition {
        writeln!(text, "roots:").unwrap();
        for (root, vs) in cd.root_spaces() {
            let r: Vec<String> = root.iter().map(|q| q.to_string()).collect();
            let span: Vec<String> = vs.iter().map(|v| combination_text(v)).collect();
            writeln!(text, "  ({}): {}", r.join(", "), span.join("; ")).unwrap();
        }
    }
    match (&report.types, &report.type_error) {
        (Some(t), _) => writeln!(text, "type: {}", type_list(t)).unwrap(),
        (None, Some(e)) => {
            ok = false;
            writeln!(text, "type: not identified ({})", e).unwrap()
        }
        (None, None) => {}
    }
    let mut out = Report::new(text, &report);
    out.ok = ok;
    Ok(out)
}

fn write_realization(out: &mut String, r: &Realization) {
    writeln!(out, "type: {} on C^{}", type_list(r.declared_type()), r.ambient_dim()).unwrap();
    for (name, f) in r.generators() {
        writeln!(out, "{} = {}", name, f).unwrap();
    }
}

fn write_certificate(out: &mut String, cert: &Certificate, t: &Transcript) {
    writeln!(out, "factors: {}", type_list(&cert.factors)).unwrap();
    writeln!(out, "N: {}", cert.ambient_dim).unwrap();
    writeln!(out, "verdict: {}", cert.verdict).unwrap();
    match &cert.evidence {
        Evidence::Realization { generators, audit, .. } => {
            writeln!(out, "evidence: explicit realization").unwrap();
            for (name, f) in generators {
                writeln!(out, "  {} = {}", name, f).unwrap();
            }
            writeln!(out, "  audit: {}", if audit.passed() { "PASS" } else { "FAIL" }).unwrap();
        }
        Evidence::RankBound { cartan_dim, ambient_dim } => {
            writeln!(out, "evidence: Cartan dimension {} exceeds N = {}", cartan_dim, ambient_dim).unwrap();
        }
        Evidence::NonMaximalRank { cartan_dim, ambient_dim } => {
            writeln!(out, "evidence: Cartan dimension {} is below N = {}; not of maximal rank", cartan_dim, ambient_dim)
                .unwrap();
        }
        Evidence::Obstruction { factor, witness, projection, highest_weight, pairwise, .. } => {
            let nodes: Vec<String> = witness.nodes.iter().map(|v| (v + 1).to_string()).collect();
            writeln!(out, "evidence: {} contains {} on nodes {}", factor, witness.target, nodes.join(",")).unwrap();
            if let (Some(e6), Some(ends)) = (&witness.e6_nodes, &witness.removed_row_ends) {
                let e6: Vec<String> = e6.iter().map(|v| (v + 1).to_string()).collect();
                let ends: Vec<String> = ends.iter().map(|v| (v + 1).to_string()).collect();
                writeln!(out, "  via E6 on nodes {} minus row ends {}", e6.join(","), ends.join(",")).unwrap();
            }
            writeln!(
                out,
                "  projection to C^{}: {} bracket pairs checked",
                projection.projected_dim, projection.pairs_checked
            )
            .unwrap();
            let roots: Vec<String> = highest_weight
                .orthogonal_roots
                .iter()
                .map(|r| format!("({})", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
                .collect();
            writeln!(out, "  orthogonal roots: {}", roots.join(" ")).unwrap();
            writeln!(
                out,
                "  joint kernel of the derived Borel: {} (in a space of dimension {})",
                highest_weight.kernel.join(", "),
                highest_weight.space_dim
            )
            .unwrap();
            writeln!(
                out,
                "  dim {} = {} > {} = dim A1^{}",
                witness.target, highest_weight.target_dim, highest_weight.subalgebra_dim, highest_weight.n
            )
            .unwrap();
            writeln!(out, "  pair systems solved: {}", pairwise.pairs.len()).unwrap();
        }
    }
    writeln!(out, "transcript:").unwrap();
    for c in &t.checks {
        writeln!(out, "  [{}] {}", if c.passed { "ok" } else { "FAIL" }, c.name).unwrap();
    }
    writeln!(out, "reverify: {}", if t.ok() { "PASS" } else { "FAIL" }).unwrap();
}

#[derive(Serialize)]
struct RootsJson {
    types: Vec<SimpleType>,
    cartan_matrix: Vec<Vec<i64>>,
    diagram: liefield_core::roots::DynkinDiagram,
    ascii: String,
    positive_root_count: usize,
    positive_roots: Option<Vec<Vec<i64>>>,
    highest_root: Option<Vec<i64>>,
    obstructions: Vec<Obstruction>,
}

fn parse_matrix(text: &str) -> Result<Vec<Vec<i64>>, Failure> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|e| e.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("bad matrix entry `{}`", e.trim()))))
                .collect()
        })
        .collect()
}

fn roots(ty: Option<&SimpleType>, matrix: Option<&str>, positive: bool) -> Result<Report, Failure> {
    let rs = match (ty, matrix) {
        (Some(t), _) => RootSystem::build(*t),
        (None, Some(m)) => {
            RootSystem::from_cartan_matrix(parse_matrix(m)?).map_err(|e| Failure::Usage(e.to_string()))?
        }
        (None, None) => return Err(Failure::Usage("give --type or --matrix".into())),
    };
    let components = classify_cartan_matrix(rs.cartan_matrix()).map_err(|e| Failure::Usage(e.to_string()))?;
    let types: Vec<SimpleType> = components.iter().map(|(t, _)| *t).collect();
    let diagram = rs.diagram();
    let ascii = diagram.ascii();
    let obstructions: Vec<Obstruction> = types.iter().map(|t| obstruction_witness(*t)).collect();
    let vec_text = |r: &[i64]| format!("({})", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));

    let mut text = String::new();
    writeln!(text, "type: {}", type_list(&types)).unwrap();
    writeln!(text, "cartan matrix:").unwrap();
    for row in rs.cartan_matrix() {
        let cells: Vec<String> = row.iter().map(|v| format!("{:>2}", v)).collect();
        writeln!(text, "  [{}]", cells.join(" ")).unwrap();
    }
    writeln!(text, "diagram:").unwrap();
    for line in ascii.lines() {
        writeln!(text, "  {}", line).unwrap();
    }
    writeln!(text, "positive roots: {}", rs.positive_roots().len()).unwrap();
    if positive {
        for r in rs.positive_roots() {
            writeln!(text, "  {}", vec_text(r)).unwrap();
        }
    }
    let highest = if types.len() == 1 { rs.highest_root() } else { None };
    if let Some(h) = &highest {
        writeln!(text, "highest root: {}", vec_text(h)).unwrap();
    }
    for ((t, nodes), o) in components.iter().zip(&obstructions) {
        match o {
            Obstruction::AType => writeln!(text, "obstruction for {}: none (type A)", t).unwrap(),
            Obstruction::Witness(w) => {
                let ns: Vec<String> = w.nodes.iter().map(|&v| (nodes[v] + 1).to_string()).collect();
                writeln!(
                    text,
                    "obstruction for {}: {} on nodes {} ({})",
                    t,
                    w.target,
                    ns.join(","),
                    if w.verify() { "verified" } else { "NOT verified" }
                )
                .unwrap()
            }
        }
    }
    let ok = obstructions.iter().all(|o| match o {
        Obstruction::AType => true,
        Obstruction::Witness(w) => w.verify(),
    });
    let json = RootsJson {
        types,
        cartan_matrix: rs.cartan_matrix().to_vec(),
        diagram,
        ascii,
        positive_root_count: rs.positive_roots().len(),
        positive_roots: positive.then(|| rs.positive_roots().to_vec()),
        highest_root: highest,
        obstructions,
    };
    let mut report = Report::new(text, json);
    report.ok = ok;
    Ok(report)
}
