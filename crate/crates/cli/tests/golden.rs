//! Golden reports. Each `cases/NAME.args` holds `exit=<code>` followed by
//! one argument per line; `NAME.stdout` and `NAME.stderr` hold the
//! expected output. Run with `LIEFIELD_BLESS=1` to rewrite them.

use std::fs;
use std::path::{Path, PathBuf};

use liefield_cli::{parse_field, run};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn cases() -> Vec<(String, i32, Vec<String>)> {
    let mut out = Vec::new();
    let mut entries: Vec<_> = fs::read_dir(golden_dir().join("cases"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "args"))
        .collect();
    entries.sort();
    for path in entries {
        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        let code = lines.next().and_then(|l| l.strip_prefix("exit=")).expect("exit line").parse().unwrap();
        let args = lines.map(str::to_string).collect();
        out.push((path.file_stem().unwrap().to_string_lossy().into_owned(), code, args));
    }
    out
}

#[test]
fn reports_match_golden_files() {
    let bless = std::env::var_os("LIEFIELD_BLESS").is_some();
    let dir = golden_dir().join("cases");
    let cases = cases();
    assert!(cases.len() >= 30);
    let mut failures = Vec::new();
    for (name, code, args) in cases {
        let argv = std::iter::once("liefield".to_string()).chain(args);
        let out = run(argv);
        let (so, se) = (dir.join(format!("{}.stdout", name)), dir.join(format!("{}.stderr", name)));
        if bless {
            fs::write(&so, &out.stdout).unwrap();
            fs::write(&se, &out.stderr).unwrap();
        }
        if out.code != code {
            failures.push(format!("{}: exit {} (expected {})\n{}", name, out.code, code, out.stderr));
            continue;
        }
        if fs::read_to_string(&so).unwrap_or_default() != out.stdout {
            failures.push(format!("{}: stdout differs\n{}", name, out.stdout));
        }
        if fs::read_to_string(&se).unwrap_or_default() != out.stderr {
            failures.push(format!("{}: stderr differs\n{}", name, out.stderr));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n---\n"));
}

#[test]
fn field_corpus_round_trips() {
    let text = fs::read_to_string(golden_dir().join("fields.txt")).unwrap();
    let mut count = 0;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (n, field) = line.split_once('\t').expect("dim<TAB>field");
        let f = parse_field(field, n.parse().unwrap()).unwrap_or_else(|e| panic!("{}: {}", field, e));
        assert_eq!(f.to_string(), field);
        count += 1;
    }
    assert!(count >= 80);
}

#[test]
fn reports_are_deterministic() {
    for (_, _, args) in cases() {
        let argv: Vec<String> = std::iter::once("liefield".to_string()).chain(args).collect();
        assert_eq!(run(argv.clone()), run(argv));
    }
}
