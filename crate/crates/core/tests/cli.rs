use std::process::Command;

fn carpet(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_carpet")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn corpus(name: &str) -> String {
    format!("{}/corpus/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn result(text: &str) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    v["result"].clone()
}

#[test]
fn classify_d1() {
    let (code, out) = carpet(&["classify", "--digitset", &corpus("d1")]);
    assert_eq!(code, 0);
    let r = result(&out);
    assert_eq!(r["classification"]["digit_count"], 8);
    assert_eq!(r["classification"]["row_counts"], serde_json::json!([3, 1, 4]));
    assert_eq!(r["classification"]["has_full_rows"], true);
}

#[test]
fn full_square_is_one_component() {
    let (code, out) = carpet(&["components", "--digitset", &corpus("full_square"), "--k", "3"]);
    assert_eq!(code, 0);
    assert_eq!(result(&out)["component_count"], 1);
}

#[test]
fn compare_reports_non_equivalence() {
    let (code, out) = carpet(&["compare", "--a", &corpus("d1"), "--b", "corpus:d2", "--kmax", "3"]);
    assert_eq!(code, 0);
    let r = result(&out);
    assert_eq!(r["comparability"]["verdict"], "not_comparable");
    assert!(r["conclusion"].as_str().unwrap().contains("not Lipschitz equivalent"));
}

#[test]
fn output_is_byte_identical() {
    for args in [
        vec!["gaps", "--digitset", "corpus:cantor_product", "--k", "5"],
        vec!["exponent", "--digitset", "corpus:strong_separation", "--base", "9", "--level-scale", "2"],
        vec!["csc", "--digitset", "corpus:d1", "--kmax", "3"],
        vec!["render", "--digitset", "corpus:d1", "--k", "2"],
        vec!["reproduce", "--criterion", "4"],
    ] {
        assert_eq!(carpet(&args), carpet(&args), "{args:?}");
    }
}

#[test]
fn exact_numbers_are_rational_strings() {
    let (_, out) = carpet(&["hbracket", "--digitset", "corpus:cantor_product", "--level", "5", "--delta", "2/4"]);
    let r = result(&out);
    assert_eq!(r["delta"], "1/2");
    assert_eq!((r["h_low"].as_u64(), r["h_high"].as_u64()), (Some(1), Some(1)));
    let (_, csv) = carpet(&["exponent", "--digitset", "corpus:d1", "--kmax", "2", "--format", "csv"]);
    assert!(csv.starts_with("delta_num,delta_den,h_low,h_high,L\n1,9,"));
}

#[test]
fn exit_codes() {
    assert_eq!(carpet(&["components", "--digitset", "corpus:d1"]).0, 2);
    assert_eq!(carpet(&["components", "--digitset", "corpus:nothing", "--k", "1"]).0, 2);
    assert_eq!(carpet(&["classify", "--digitset", "/nonexistent/d.json"]).0, 4);
    assert_eq!(carpet(&["components", "--digitset", "corpus:d2", "--k", "2", "--max-cells", "100"]).0, 3);
    assert_eq!(carpet(&["gaps", "--digitset", "corpus:d2", "--k", "3", "--max-components", "10"]).0, 3);
    assert_eq!(carpet(&["components", "--digitset", "corpus:d2", "--k", "1", "--max-cells", "0"]).0, 2);
}

#[test]
fn writes_output_file() {
    let dir = std::env::temp_dir().join(format!("carpet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d1.svg");
    let (code, stdout) = carpet(&["render", "--digitset", "corpus:d1", "--k", "1", "-o", path.to_str().unwrap()]);
    assert_eq!((code, stdout.as_str()), (0, ""));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches("<rect").count(), 8);
    std::fs::remove_dir_all(dir).unwrap();
}
