use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use embcanon::canon::canonicalize;
use embcanon::embeddings::{load_word2vec_text, save_word2vec_text};
use embcanon::linalg::{gram, random_orthogonal};
use embcanon::synth::{gaussian_model, numbered_vocabulary, rotate_model, spectral_model};
use embcanon::{Matrix, Model, Vocabulary};
use tempfile::TempDir;

fn embcanon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_embcanon"))
        .args(args)
        .output()
        .expect("failed to spawn embcanon")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, model: &Model) -> PathBuf {
    let path = dir.path().join(name);
    save_word2vec_text(model, &path, true).unwrap();
    path
}

fn write_text(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Parses TSV output into rows, checking the header.
fn tsv(text: &str, header: &[&str]) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap().split('\t').collect::<Vec<_>>(), header);
    lines.map(|l| l.split('\t').map(String::from).collect()).collect()
}

fn model(rows: &[&[f64]]) -> Model {
    Model::new(numbered_vocabulary(rows.len()), Matrix::from_rows(rows).unwrap()).unwrap()
}

#[test]
fn rotate_minimal_model_diagonalizes_gram() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.txt", &model(&[&[0.6, 0.8], &[1.0, 0.0]]));
    let output = dir.path().join("out.txt");
    stdout(&embcanon(&["rotate", s(&input), "-o", s(&output)]));
    let back: Model = load_word2vec_text(&output, None, true).unwrap();
    assert_eq!(back.vocab().tokens(), &["w0", "w1"]);
    let g = gram(back.matrix()).unwrap();
    assert!(g.get(0, 1).abs() <= 1e-6, "off-diagonal {}", g.get(0, 1));
}

#[test]
fn rotating_twice_is_a_fixed_point() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.txt", &spectral_model(300, 8, 0.3, 11));
    let once = dir.path().join("once.txt");
    stdout(&embcanon(&["rotate", s(&input), "-o", s(&once)]));
    let reloaded: Model = load_word2vec_text(&once, None, true).unwrap();
    let c = canonicalize(&reloaded.normalize_rows().unwrap()).unwrap();
    let err = c.v().max_abs_diff(&Matrix::identity(8)).unwrap();
    assert!(err <= 1e-6, "second V differs from I by {err}");
}

#[test]
fn headerless_files() {
    let dir = TempDir::new().unwrap();
    let input = write_text(&dir, "in.txt", "a 1 0\nb 0 2\n");
    let output = dir.path().join("out.txt");
    stdout(&embcanon(&["rotate", s(&input), "-o", s(&output), "--no-header"]));
    let text = std::fs::read_to_string(&output).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("a "));
}

#[test]
fn malformed_input_exits_2_with_line_number() {
    let dir = TempDir::new().unwrap();
    for (text, line) in [("", "line 1"), ("2 2\na 1 0\nb 1\n", "line 3"), ("1 2\na 1 zz\n", "line 2")] {
        let input = write_text(&dir, "bad.txt", text);
        let out = embcanon(&["spectrum", s(&input)]);
        assert_eq!(out.status.code(), Some(2), "input {text:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(line), "{err}");
    }
}

#[test]
fn usage_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.txt", &model(&[&[1.0, 0.0], &[0.0, 1.0]]));
    let missing = dir.path().join("missing.txt");
    let cases: Vec<Vec<&str>> = vec![
        vec!["spectrum", s(&missing)],
        vec!["spectrum", s(&input), "--format", "markdown"],
        vec!["spectrum", s(&input), "--format", "yaml"],
        vec!["spectrum", s(&input), "--limit", "0"],
        vec!["components", s(&input), "--threshold", "1.5"],
        vec!["interp", s(&input), "--top-t", "0"],
        vec!["frobnicate"],
        vec![],
    ];
    for args in cases {
        assert_eq!(embcanon(&args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(embcanon(&["--help"]).status.code(), Some(0));
    assert_eq!(embcanon(&["--version"]).status.code(), Some(0));
}

#[test]
fn zero_vector_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let input = write_text(&dir, "in.txt", "2 2\na 1 0\nb 0 0\n");
    let out = embcanon(&["spectrum", s(&input)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains('b'));
}

#[test]
fn spectrum_of_identity() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i3.txt", &model(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]));
    let rows = tsv(&stdout(&embcanon(&["spectrum", s(&input)])), &["component", "sigma"]);
    assert_eq!(rows, vec![vec!["0", "1"], vec!["1", "1"], vec!["2", "1"]]);
}

#[test]
fn spectrum_is_sorted_and_json_matches_tsv() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "m.txt", &gaussian_model::<f64>(200, 50, 3));
    let rows = tsv(&stdout(&embcanon(&["spectrum", s(&input)])), &["component", "sigma"]);
    let sigma: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(sigma.len(), 50);
    assert!(sigma.windows(2).all(|w| w[0] >= w[1]));

    let json: serde_json::Value =
        serde_json::from_str(&stdout(&embcanon(&["spectrum", s(&input), "--format", "json"]))).unwrap();
    let from_json: Vec<f64> = json
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["sigma"].as_f64().unwrap())
        .collect();
    assert_eq!(from_json, sigma);
}

fn interp_column(text: &str, space: &str) -> Vec<f64> {
    tsv(text, &["space", "component", "interp", "normalized_full", "normalized_restricted"])
        .into_iter()
        .filter(|r| r[0] == space)
        .map(|r| r[2].parse().unwrap())
        .collect()
}

#[test]
fn interp_fixtures() {
    let dir = TempDir::new().unwrap();
    let i3 = write(&dir, "i3.txt", &model(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]));
    let out = stdout(&embcanon(&["interp", s(&i3)]));
    assert_eq!(interp_column(&out, "source"), vec![1.0, 1.0, 1.0]);

    // canonical σ = [√2, 1], so interp = σ⁴ = [4, 1]
    let e = write(&dir, "e.txt", &model(&[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]));
    let out = stdout(&embcanon(&["interp", s(&e)]));
    let canonical = interp_column(&out, "canonical");
    assert!((canonical[0] - 4.0).abs() <= 1e-8 && (canonical[1] - 1.0).abs() <= 1e-8);
}

#[test]
fn interp_totals_match_across_coordinates() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "m.txt", &gaussian_model::<f64>(150, 12, 8));
    let out = embcanon(&["interp", s(&input), "--random-rotations", "5", "--seed", "7"]);
    let text = stdout(&out);
    let source: f64 = interp_column(&text, "source").iter().sum();
    let canonical: f64 = interp_column(&text, "canonical").iter().sum();
    assert!((source - canonical).abs() <= 1e-9 * source);
    assert!(String::from_utf8_lossy(&out.stderr).contains("trace check: 5 random rotations"));
}

fn grouped_words() -> Model {
    let tokens = ["a1", "b1", "a2", "b2", "a3", "b3"].map(String::from).to_vec();
    let m = Matrix::from_rows(&[
        [1.0, 0.1],
        [0.1, 1.0],
        [1.0, -0.1],
        [-0.1, 1.0],
        [0.95, 0.2],
        [0.2, 0.95],
    ])
    .unwrap();
    Model::new(Vocabulary::new(tokens).unwrap(), m).unwrap()
}

#[test]
fn components_table_clusters_two_groups() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", &grouped_words());
    // t above the vocabulary size lists every word on both sides
    let out = stdout(&embcanon(&["components", s(&input), "--table-t", "50", "--component", "1"]));
    let rows: Vec<&str> = out.lines().skip(2).collect();
    assert_eq!(rows.len(), 2);
    for (row, side) in rows.iter().zip(["negative", "positive"]) {
        let cells: Vec<&str> = row.trim_matches('|').split(" | ").map(str::trim).collect();
        assert_eq!(cells[0], "1");
        assert_eq!(cells[4], side);
        assert_eq!(cells[5], "2");
        assert_eq!(cells[6], "a1, a2, a3; b1, b2, b3");
    }

    let json: serde_json::Value = serde_json::from_str(&stdout(&embcanon(&[
        "components", s(&input), "--table-t", "50", "--component", "1", "--format", "json",
    ])))
    .unwrap();
    assert_eq!(json[0]["positive"]["cluster_count"], 2);
}

#[test]
fn components_out_of_range_exits_1() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", &grouped_words());
    let out = embcanon(&["components", s(&input), "--component", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
}

fn align_rows(text: &str, space: &str) -> Vec<(usize, usize, usize, i64)> {
    tsv(text, &["space", "i", "j", "overlap", "shift"])
        .into_iter()
        .filter(|r| r[0] == space)
        .map(|r| (r[1].parse().unwrap(), r[2].parse().unwrap(), r[3].parse().unwrap(), r[4].parse().unwrap()))
        .collect()
}

#[test]
fn align_with_itself() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "m.txt", &spectral_model(300, 6, 0.3, 2));
    let out = stdout(&embcanon(&["align", s(&input), s(&input), "--top-t", "10"]));
    for space in ["source", "canonical"] {
        let rows = align_rows(&out, space);
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|&(_, _, overlap, shift)| shift == 0 && overlap == 20));
    }
}

#[test]
fn align_column_swapped_copy() {
    let dir = TempDir::new().unwrap();
    let m = spectral_model(300, 6, 0.3, 4);
    let swapped = Model::new(m.vocab().clone(), m.matrix().select_columns(&[1, 0, 2, 3, 4, 5]).unwrap()).unwrap();
    let a = write(&dir, "a.txt", &m);
    let b = write(&dir, "b.txt", &swapped);
    let out = stdout(&embcanon(&["align", s(&a), s(&b), "--top-t", "10"]));
    let shifts: Vec<i64> = align_rows(&out, "source").iter().map(|r| r.3).collect();
    assert_eq!(shifts, vec![-1, 1, 0, 0, 0, 0]);
    // a column permutation is orthogonal, so canonical coordinates coincide
    assert!(align_rows(&out, "canonical").iter().all(|r| r.3 == 0));
}

#[test]
fn align_disjoint_vocabularies_warns() {
    let dir = TempDir::new().unwrap();
    let a = write_text(&dir, "a.txt", "3 2\nx 1 0\ny 0 1\nz 1 1\n");
    let b = write_text(&dir, "b.txt", "3 2\np 1 0\nq 0 1\nr 1 1\n");
    let out = embcanon(&["align", s(&a), s(&b), "--top-t", "1"]);
    let text = stdout(&out);
    assert!(align_rows(&text, "canonical").iter().all(|r| r.2 == 0));
    assert!(align_rows(&text, "source").iter().all(|r| r.2 == 0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("share only 0"));
}

fn retrain(a: &Path, b: &Path) -> (f64, f64) {
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&embcanon(&["retrain-check", s(a), s(b)]))).unwrap();
    (
        json["orthogonality"].as_f64().unwrap(),
        json["relative_residual"].as_f64().unwrap(),
    )
}

#[test]
fn retrain_check_cases() {
    let dir = TempDir::new().unwrap();
    let m = spectral_model(400, 10, 0.2, 5);
    let a = write(&dir, "a.txt", &m);
    let (orth, res) = retrain(&a, &a);
    assert!(orth <= 1e-8 && res <= 1e-8, "{orth} {res}");

    let rotated = rotate_model(&m, &random_orthogonal(10, 99)).unwrap();
    let b = write(&dir, "b.txt", &rotated);
    let (orth, res) = retrain(&a, &b);
    assert!(orth <= 1e-8 && res <= 1e-6, "{orth} {res}");

    let other = write(&dir, "c.txt", &gaussian_model::<f64>(400, 10, 77));
    let (_, res) = retrain(&a, &other);
    assert!(res > 0.5 && res < 1.5, "unrelated models gave {res}");
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "m.txt", &gaussian_model::<f64>(500, 16, 21));
    for args in [
        vec!["spectrum", s(&input)],
        vec!["interp", s(&input)],
        vec!["components", s(&input), "--components", "3"],
    ] {
        assert_eq!(stdout(&embcanon(&args)), stdout(&embcanon(&args)), "{args:?}");
    }
}

#[test]
fn limit_truncates_before_normalizing() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "m.txt", &gaussian_model::<f64>(50, 4, 6));
    let out = dir.path().join("out.txt");
    stdout(&embcanon(&["rotate", s(&input), "-o", s(&out), "--limit", "10"]));
    let back: Model = load_word2vec_text(&out, None, true).unwrap();
    assert_eq!(back.len(), 10);
    assert!(back.max_norm_deviation() <= 1e-8);
}
