use std::path::PathBuf;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn data(name: &str) -> String {
    format!("{}/examples/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("conjsep").chain(args.iter().copied());
    let code = conjsep::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn field<'a>(text: &'a str, key: &str) -> Vec<&'a str> {
    text.lines()
        .filter_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(':')))
        .map(str::trim)
        .collect()
}

struct Rips {
    _dir: tempfile::TempDir,
    g: String,
    sidecar: String,
}

fn rips_z3() -> Rips {
    let dir = tempfile::tempdir().unwrap();
    let path = |f: &str| -> String { dir.path().join(f).to_string_lossy().into_owned() };
    let (g, sidecar) = (path("g.txt"), path("sidecar.txt"));
    let (code, out, _) = run(&["rips", &data("z3.txt"), &g, &sidecar]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "generators"), ["3"]);
    assert_eq!(field(&out, "relators"), ["5"]);
    Rips { _dir: dir, g, sidecar }
}

#[test]
fn rips_on_z3_writes_both_files() {
    let r = rips_z3();
    let g = conjsep::Presentation::parse(&std::fs::read_to_string(&r.g).unwrap()).unwrap();
    assert_eq!(g.rank(), 3);
    assert_eq!(g.relators().len(), 5);
    let side = std::fs::read_to_string(&r.sidecar).unwrap();
    assert!(side.starts_with("ngens: a1 a2\npsi: delete\n"));
}

#[test]
fn wp_on_the_surface_relator() {
    let (code, out, _) = run(&["wp", &data("surface.txt"), "a b a^-1 b^-1 c d c^-1 d^-1"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "trivial"), ["true"]);
}

#[test]
fn conj_a_and_its_inverse_in_the_free_group() {
    let (code, out, _) = run(&["conj", &data("free2.txt"), "a", "a^-1"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "verdict"), ["non-conjugate"]);
    assert_eq!(field(&out, "witness_kind"), ["conjugacy"]);
    assert!(!field(&out, "witness_image").is_empty());
}

#[test]
fn unknown_command_prints_usage() {
    let (code, out, err) = run(&["frobnicate"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("Usage"));
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(run(&["wp", &data("surface.txt"), "q"]).0, 1);
    assert_eq!(run(&["wp", "/nonexistent/p.txt", "a"]).0, 1);
    assert_eq!(run(&["--max-length", "0", "conj", &data("surface.txt"), "a", "b"]).0, 1);
    assert_eq!(run(&["--lambda", "two", "verify-sc", &data("surface.txt")]).0, 1);
    assert_eq!(run(&["separate", "element", &data("free2.txt"), "a"]).0, 1);
}

#[test]
fn structured_output_carries_the_same_fields() {
    let args = ["conj", &data("free2.txt"), "a", "a^-1"];
    let (_, text, _) = run(&args);
    let mut structured_args = vec!["--emit", "structured"];
    structured_args.extend_from_slice(&args);
    let (code, json, _) = run(&structured_args);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let obj = v.as_object().unwrap();
    let text_keys: Vec<&str> = text.lines().map(|l| l.split(':').next().unwrap()).collect();
    for key in &text_keys {
        assert!(obj.contains_key(*key), "{key}");
    }
    for line in text.lines() {
        let (k, val) = line.split_once(':').unwrap();
        let val = val.trim();
        match &obj[k] {
            serde_json::Value::String(s) => assert_eq!(s, val),
            serde_json::Value::Array(items) => assert!(items.iter().any(|i| i == val)),
            other => panic!("{other}"),
        }
    }
}

#[test]
fn membership_routes_agree() {
    let r = rips_z3();
    for (w, expected) in [
        ("x a1 x^-1", "true"),
        ("x", "false"),
        ("a1 x^3 a2", "true"),
        ("x^2 a1", "false"),
    ] {
        for method in ["quotient", "conj"] {
            let (code, out, err) = run(&["member", &data("z3.txt"), &r.g, &r.sidecar, w, "--method", method]);
            assert_eq!(code, 0, "{err}");
            assert_eq!(field(&out, "member"), [expected], "{w} via {method}");
        }
    }
}

#[test]
fn fibre_commands() {
    let r = rips_z3();
    let (code, out, _) = run(&["fibre-gens", &data("z3.txt"), &r.g, &r.sidecar]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "count"), ["5"]);
    let (code, out, _) = run(&["fibre-gens", &data("z3.txt"), &r.g, &r.sidecar, "--f", "x"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "count"), ["6"]);
    let (code, out, _) = run(&[
        "fibre-conj",
        &data("z3.txt"),
        &r.g,
        &r.sidecar,
        "(a1 | a2)",
        "(x^-1 a1 x | x^-1 a2 x)",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "verdict"), ["conjugate"]);
    assert_eq!(field(&out, "conjugator"), ["(x | x)"]);
}

#[test]
fn fibre_index_on_z6() {
    for (f, expected) in [(None, "1"), (Some("x^3"), "2"), (Some("x^2"), "3"), (Some("x"), "6")] {
        let mut args = vec!["fibre-index", &data("z6.txt")]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>();
        if let Some(f) = f {
            args.extend(["--f".to_string(), f.to_string()]);
        }
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, out, _) = run(&argv);
        assert_eq!(code, 0);
        assert_eq!(field(&out, "lhs"), [expected]);
        assert_eq!(field(&out, "equal"), ["true"]);
    }
}

#[test]
fn fibre_index_from_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let table: PathBuf = dir.path().join("z3.table");
    std::fs::write(&table, "order: 3\ngen: x 1\nrow: 0 1 2\nrow: 1 2 0\nrow: 2 0 1\n").unwrap();
    let (code, out, err) = run(&[
        "fibre-index",
        &data("z3.txt"),
        "--f",
        "x",
        "--table",
        table.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(field(&out, "lhs"), ["3"]);
}

#[test]
fn tc_and_quotients() {
    let (code, out, _) = run(&["tc", &data("s3.txt"), "s"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "index"), ["3"]);
    assert_eq!(field(&out, "csv").len(), 4);
    let (code, out, _) = run(&["--max-cosets", "5", "tc", &data("s3.txt")]);
    assert_eq!(code, 2);
    assert_eq!(field(&out, "status"), ["overflow"]);
    let (code, out, _) = run(&["--max-degree", "3", "quotients", &data("s3.txt")]);
    assert_eq!(code, 0);
    // homomorphisms S3 -> S3: the trivial one, s = t mapped to one of 3
    // transpositions, and the 6 automorphisms
    assert_eq!(field(&out, "count"), ["10"]);
}

#[test]
fn undecided_exits_two() {
    let (code, out, _) = run(&[
        "--max-length",
        "1",
        "--max-degree",
        "1",
        "conj",
        &data("free2.txt"),
        "a",
        "a^-1",
    ]);
    assert_eq!(code, 2);
    assert_eq!(field(&out, "verdict"), ["undecided"]);
    assert!(!field(&out, "stall_frontier").is_empty());
}

/// Random jobs: a definite verdict never comes with exit code 2.
#[test]
fn definite_verdicts_never_exit_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let letters = ["a", "b", "a^-1", "b^-1"];
    let word = |rng: &mut ChaCha8Rng| -> String {
        let n = rng.gen_range(1..=4);
        (0..n)
            .map(|_| letters[rng.gen_range(0..4)])
            .collect::<Vec<_>>()
            .join(" ")
    };
    for _ in 0..30 {
        let (x, y) = (word(&mut rng), word(&mut rng));
        let degree = rng.gen_range(1..=4).to_string();
        let length = rng.gen_range(1..=4).to_string();
        for cmd in ["conj", "separate"] {
            let mut args = vec!["--max-degree", &degree, "--max-length", &length];
            if cmd == "separate" {
                args.extend(["separate", "element"]);
            } else {
                args.push("conj");
            }
            let p = data("free2.txt");
            args.extend([p.as_str(), x.as_str(), y.as_str()]);
            let (code, out, err) = run(&args);
            assert_ne!(code, 1, "{err}");
            let definite = field(&out, "verdict").iter().any(|v| *v != "undecided") || field(&out, "found") == ["true"];
            assert_eq!(definite, code == 0, "{args:?}\n{out}");
        }
    }
}

#[test]
fn binary_matches_library_entry_point() {
    let out = Command::new(env!("CARGO_BIN_EXE_conjsep"))
        .args(["wp", &data("surface.txt"), "a b a^-1 b^-1 c d c^-1 d^-1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let (_, lib_out, _) = run(&["wp", &data("surface.txt"), "a b a^-1 b^-1 c d c^-1 d^-1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib_out);
}
