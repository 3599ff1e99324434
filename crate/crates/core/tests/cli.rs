use std::path::PathBuf;
use std::process::Command;

use qtrace::document::EndoDocument;
use qtrace::endo::{EndoContext, GradedEndo};

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qtrace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn qtrace(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qtrace")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const E22_N1: &str = r#"{
  "format": "qtrace-endo",
  "version": 1,
  "context": { "builtin": "sl-exterior", "n": 1, "max_grade": 2 },
  "basis": "wedge",
  "grades": [
    { "grade": 1, "entries": [ { "rows": [2], "cols": [2], "value": "1" } ] }
  ]
}
"#;

#[test]
fn trace_both_reports_the_ratio() {
    let path = scratch("e22.json", E22_N1);
    let (code, out, err) = qtrace(&["trace", path.to_str().unwrap(), "--kind", "both"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("Tr_q = q^-2\n"), "{out}");
    assert!(out.contains("tr_q = q^-1\n"), "{out}");
    assert!(out.contains("ratio = q^-1\n"), "{out}");
    assert!(out.contains("grade 1: Tr_q = q^-2, tr_q = q^-1, ratio = q^-1, predicted = q^-1"), "{out}");
}

#[test]
fn trace_of_grade_one_identity() {
    let ctx = EndoContext::sl_exterior(2).unwrap();
    let doc = EndoDocument::from_graded(&GradedEndo::grade_identity(&ctx, 1));
    let path = scratch("id1.json", &doc.to_json());
    let (code, out, _) = qtrace(&["trace", path.to_str().unwrap(), "--kind", "q"]);
    assert_eq!(code, 0);
    assert_eq!(out, "Tr_q = 1 + q^-2 + q^-4\n");
    let (code, out, _) = qtrace(&["trace", path.to_str().unwrap(), "--kind", "q", "--q0", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("(at q = 1: 3)"), "{out}");
}

#[test]
fn malformed_document_is_an_input_error() {
    let path = scratch("broken.json", "{ \"format\": \"qtrace-endo\", ");
    let (code, _, err) = qtrace(&["trace", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"), "{err}");
    let path = scratch("extra.json", &E22_N1.replace("\"version\": 1", "\"version\": 1, \"extra\": 0"));
    assert_eq!(qtrace(&["trace", path.to_str().unwrap()]).0, 2);
}

#[test]
fn third_product_with_the_unit_is_the_identity_map() {
    let ctx = EndoContext::sl_exterior(2).unwrap();
    let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(7);
    let a = EndoDocument::from_graded(&GradedEndo::random(&ctx, &mut rng, &Default::default()));
    let unit = EndoDocument::from_graded(&GradedEndo::unit(&ctx));
    let pa = scratch("a.json", &a.to_json());
    let pu = scratch("unit.json", &unit.to_json());
    let (code, left, _) = qtrace(&["product", pu.to_str().unwrap(), pa.to_str().unwrap(), "--which", "third"]);
    assert_eq!(code, 0);
    let (_, right, _) = qtrace(&["product", pa.to_str().unwrap(), pu.to_str().unwrap(), "--which", "third"]);
    assert_eq!(left, a.to_json());
    assert_eq!(right, a.to_json());
}

#[test]
fn convolution_of_grade_one_identities() {
    let ctx = EndoContext::sl_exterior(2).unwrap();
    let i1 = EndoDocument::from_graded(&GradedEndo::grade_identity(&ctx, 1));
    let p = scratch("i1.json", &i1.to_json());
    let (code, out, _) = qtrace(&["product", p.to_str().unwrap(), p.to_str().unwrap(), "--which", "convolve"]);
    assert_eq!(code, 0);
    let expect = GradedEndo::grade_identity(&ctx, 2).scale(&"1 + q^-2".parse().unwrap());
    assert_eq!(EndoDocument::parse(&out).unwrap(), EndoDocument::from_graded(&expect));
}

#[test]
fn mismatched_contexts_are_rejected() {
    let a = EndoDocument::from_graded(&GradedEndo::identity(&EndoContext::sl_exterior(1).unwrap()));
    let b = EndoDocument::from_graded(&GradedEndo::identity(&EndoContext::sl_exterior(2).unwrap()));
    let pa = scratch("n1.json", &a.to_json());
    let pb = scratch("n2.json", &b.to_json());
    let (code, _, err) = qtrace(&["product", pa.to_str().unwrap(), pb.to_str().unwrap(), "--which", "compose"]);
    assert_eq!(code, 2);
    assert!(err.contains("context mismatch"), "{err}");
}

#[test]
fn verify_single_suite() {
    let (code, out, _) = qtrace(&["verify", "--suite", "quantum-trace", "--N", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("PASS quantum-trace (N=2)"), "{out}");
    assert!(out.ends_with("result: pass\n"));
}

#[test]
fn verify_reports_the_sign_convention() {
    let (code, out, _) = qtrace(&["verify", "--suite", "third-product-closed", "--N", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("(-1)^s"), "{out}");
}

#[test]
fn unknown_suite_is_an_input_error() {
    assert_eq!(qtrace(&["verify", "--suite", "no-such-suite"]).0, 2);
}

#[test]
fn profile_and_basis() {
    let (code, out, _) = qtrace(&["profile", "--N", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "dims: 1 3 3 1 0\ntop: 3\n");
    let (code, out, _) = qtrace(&["profile", "--braiding", "flip", "--N", "1", "--max-p", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out, "dims: 1 2 3 4 5\ntop: none within the bound\n");
    let (code, out, _) = qtrace(&["--format", "json", "basis", "--N", "1", "--grade", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.is_object() || v.is_array());
}
