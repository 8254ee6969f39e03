use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

use svlie::biderivations::{realize, BiderivationForm, OmegaSet};
use svlie::derivations::{builtin_derivation, inner_derivation, OuterDerivation};
use svlie::linalg::rat;
use svlie::text::{format_operator, format_tensor};
use svlie::{AlgebraConfig, Element, GeneratorId, Window};

fn svlie(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_svlie")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let (code, stdout, stderr) = svlie(&full);
    let v = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout} {stderr}"));
    (code, v)
}

fn keys(v: &Value) -> Vec<&str> {
    v.as_object().unwrap().keys().map(|k| k.as_str()).collect()
}

fn assert_schema(v: &Value, command: &str, details: &[&str]) {
    assert_eq!(keys(v), ["command", "epsilon", "window", "verdict", "details"]);
    assert_eq!(v["command"], command);
    assert_eq!(keys(&v["details"]), details, "{command}");
}

struct Fixtures {
    _dir: TempDir,
    d1: PathBuf,
    broken: PathBuf,
    form: PathBuf,
    garbage: PathBuf,
}

fn fixtures() -> Fixtures {
    let dir = TempDir::new().unwrap();
    let cfg = AlgebraConfig::TWISTED;
    let w = Window::new(4);
    let write = |name: &str, text: String| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let d1 = write(
        "d1.op",
        format_operator(&builtin_derivation(OuterDerivation::D1, w, &cfg)),
    );
    let mut op = inner_derivation(&Element::generator(GeneratorId::l(1)), w, &cfg).unwrap();
    op.set(GeneratorId::l(0), Element::generator(GeneratorId::y(0)));
    let broken = write("broken.op", format_operator(&op));
    let form = BiderivationForm::new(rat(0), OmegaSet::spike(1, rat(5)));
    let form = write(
        "form.tensor",
        format!("# chi with mu[1] = 5\n{}", format_tensor(&realize(&form, w, &cfg))),
    );
    let garbage = write("garbage.op", "L[1] -> 2*Q[1]\n".into());
    Fixtures {
        _dir: dir,
        d1,
        broken,
        form,
        garbage,
    }
}

#[test]
fn bracket_golden() {
    let (code, out, _) = svlie(&["bracket", "L[2]", "L[3]"]);
    assert_eq!((code, out.as_str()), (0, "-1*L[5]\n"));
    let (code, out, _) = svlie(&["bracket", "L[2]", "L[3]", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(out, include_str!("golden/bracket.json"));
}

#[test]
fn postlie_witness_golden() {
    let (code, out, _) = svlie(&["postlie", "--lambda", "0", "--mu", "3=2017", "-N", "10", "--json"]);
    assert_eq!(code, 1);
    assert_eq!(out, include_str!("golden/postlie_witness.json"));
}

#[test]
fn jacobi_reports_counts() {
    let (code, v) = json(&["jacobi", "-N", "6"]);
    assert_eq!(code, 0);
    assert_schema(&v, "jacobi", &["generators", "pairs", "triples", "defects"]);
    assert_eq!(v["verdict"], "holds");
    assert_eq!(v["details"]["triples"], 9139);
    let (code, out, _) = svlie(&["jacobi", "-N", "6"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("holds"));
}

#[test]
fn derivation_commands() {
    let f = fixtures();
    let d1 = f.d1.to_str().unwrap();
    let (code, v) = json(&["check-derivation", d1, "-N", "4"]);
    assert_eq!(code, 0);
    assert_schema(&v, "check-derivation", &["checked", "violations", "reported"]);
    assert_eq!(v["verdict"], "derivation");

    let (code, v) = json(&["check-derivation", f.broken.to_str().unwrap(), "-N", "4"]);
    assert_eq!(code, 1);
    assert_schema(&v, "check-derivation", &["checked", "violations", "reported"]);
    assert_eq!(v["verdict"], "defects");
    assert_eq!(keys(&v["details"]["reported"][0]), ["identity", "inputs", "defect"]);

    let (code, v) = json(&["decompose-derivation", d1, "-N", "4"]);
    assert_eq!(code, 0);
    assert_schema(&v, "decompose-derivation", &["inner_part", "a", "b", "c"]);
    assert_eq!(v["details"]["a"], "1");
    assert_eq!(v["details"]["inner_part"], "0");

    let (code, v) = json(&["decompose-derivation", f.broken.to_str().unwrap(), "-N", "4"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "not-a-derivation");

    let (code, v) = json(&["solve-derivations", "-N", "4"]);
    assert_eq!(code, 0);
    assert_schema(
        &v,
        "solve-derivations",
        &[
            "unknowns",
            "rows",
            "kernel_dim",
            "interior_kernel_dim",
            "interior_predicted_dim",
            "predicted_in_kernel",
            "interior_kernel_in_predicted",
            "interior_predicted_in_kernel",
        ],
    );
    assert_eq!(v["details"]["kernel_dim"], 101);
}

#[test]
fn biderivation_commands() {
    let f = fixtures();
    let form = f.form.to_str().unwrap();
    let (code, v) = json(&["check-biderivation", form, "-N", "4"]);
    assert_eq!(code, 0);
    assert_schema(
        &v,
        "check-biderivation",
        &["checked", "violations", "reported", "symmetric", "skewsymmetric"],
    );
    assert_eq!(v["details"]["symmetric"], true);

    let (code, v) = json(&["match-form", form, "-N", "4"]);
    assert_eq!(code, 0);
    assert_schema(
        &v,
        "match-form",
        &["lambda", "omega", "inner", "symmetric", "skewsymmetric"],
    );
    assert_eq!(v["details"]["omega"]["1"], "5");
    assert_eq!(v["details"]["inner"], false);

    let (code, v) = json(&["match-form", f.d1.to_str().unwrap(), "-N", "4"]);
    assert_eq!(code, 2, "an operator file is not a tensor file");
    assert_schema(&v, "match-form", &["message"]);

    let (code, v) = json(&["solve-biderivations", "-N", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["kernel_dim"], 192);
    assert_eq!(v["details"]["interior_kernel_dim"], 8);
}

#[test]
fn props_schema() {
    let (code, v) = json(&["props", "-N", "4"]);
    assert_eq!(code, 0);
    assert_schema(&v, "props", &["systems"]);
    let systems = v["details"]["systems"].as_array().unwrap();
    assert_eq!(systems.len(), 4);
    assert_eq!(
        keys(&systems[0]),
        [
            "system",
            "window",
            "holds",
            "unknowns",
            "rows",
            "kernel_dim",
            "interior_kernel_dim",
            "interior_predicted_dim",
            "predicted_in_kernel",
            "interior_kernel_in_predicted",
            "interior_predicted_in_kernel",
            "free_directions",
            "counterexample",
        ]
    );
    let dims: Vec<u64> = systems
        .iter()
        .map(|s| s["interior_kernel_dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, [1, 0, 19, 5]);
}

#[test]
fn postlie_modes() {
    let (code, v) = json(&["postlie"]);
    assert_eq!(code, 0);
    assert_schema(&v, "postlie", &["form", "trivial"]);
    assert_eq!(v["details"]["trivial"], true);

    let (code, v) = json(&["postlie", "--lambda", "-1/2", "--mu", "-2=1"]);
    assert_eq!(code, 1);
    assert_eq!(v["details"]["witness"]["axiom"], "commutativity");
    assert_eq!(v["details"]["witness"]["residual"], "1*L[3]");

    let (code, v) = json(&["postlie", "--sweep"]);
    assert_eq!(code, 0);
    assert_schema(&v, "postlie", &["window", "epsilon", "passed", "cases"]);

    let (code, v) = json(&["postlie", "--solve", "-N", "3", "--epsilon", "1/2"]);
    assert_eq!(code, 0);
    assert_schema(
        &v,
        "postlie",
        &[
            "window",
            "unknowns",
            "linear_dim",
            "rounds",
            "final_dim",
            "interior_dim",
            "quadratic_rows",
            "verdict",
        ],
    );
    assert_eq!(v["verdict"], "interior-trivial");

    let (code, _) = json(&["postlie", "--sweep", "-N", "4"]);
    assert_eq!(code, 2);
}

#[test]
fn random_forms_are_reproducible() {
    let a = json(&["random-forms", "--count", "5", "-N", "3", "--seed", "11"]);
    let b = json(&["random-forms", "--count", "5", "-N", "3", "--seed", "11"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
    assert_schema(&a.1, "random-forms", &["seed", "forms", "failures"]);
}

#[test]
fn usage_errors_exit_two() {
    let f = fixtures();
    for args in [
        vec!["bracket", "L[2]"],
        vec!["bracket", "L[2]", "Q[1]"],
        vec!["bracket", "Y[1/2]", "L[1]"],
        vec!["--epsilon", "1/3", "jacobi"],
        vec!["jacobi", "-N", "0"],
        vec!["solve-derivations", "-N", "2"],
        vec!["check-derivation", "/nonexistent/file.op"],
        vec!["check-derivation", f.garbage.to_str().unwrap()],
        vec!["postlie", "--mu", "3"],
        vec!["postlie", "--mu", "-3=x"],
        vec!["no-such-command"],
    ] {
        let (code, _, stderr) = svlie(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!stderr.is_empty(), "{args:?}");
    }
    let (code, v) = json(&["bracket", "L[1", "L[2]"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "error");
}

#[test]
fn half_integer_indices() {
    let (code, out, _) = svlie(&["--epsilon", "1/2", "bracket", "L[1]", "Y[-1/2]"]);
    assert_eq!((code, out.as_str()), (0, "1*Y[1/2]\n"));
}
