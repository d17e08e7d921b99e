use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ophash_bench::data::{load_corpus, CorpusFormat};
use ophash_bench::BenchError;

fn ophash(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ophash"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(ophash(&["mse", "--nope"]).status.code(), Some(1));
    assert_eq!(ophash(&["retrieve", "--K", "0", "--L", "1", "--n-train", "20", "--n-query", "2", "--plant", "1:0.5"]).status.code(), Some(1));
    assert_eq!(ophash(&["mse", "--pairs", "NOT-A-PAIR", "--k", "8"]).status.code(), Some(1));
    assert_eq!(ophash(&["index", "--train", "x", "--K", "1", "--L", "1", "--scheme", "both", "--out", "y"]).status.code(), Some(3));
    assert_eq!(ophash(&["mse", "--custom", "1,2"]).status.code(), Some(1));
    assert_eq!(ophash(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_files_exit_3() {
    let o = ophash(&["query", "--index", "/nonexistent/idx", "--queries", "/nonexistent/q"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_is_reproducible_and_detects_a_wrong_offset() {
    let a = ophash(&["verify", "--seed", "5", "--trials", "20000"]);
    let b = ophash(&["verify", "--seed", "5", "--trials", "20000"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("# seed 5\n"));
    let bad = ophash(&["verify", "--seed", "5", "--trials", "20000", "--force-offset", "0"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stdout(&bad).lines().any(|l| l.starts_with("FAIL collision")));
}

#[test]
fn mse_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mse.csv");
    let o = ophash(&["mse", "--pairs", "TOGO-GREENLAND,A-THE", "--k", "64,100", "--trials", "500", "--seed", "9", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# TOGO-GREENLAND k=100: D padded from 65536 to 65600"));
    assert_eq!(lines.next(), Some("# A-THE k=100: D padded from 65536 to 65600"));
    assert_eq!(
        lines.next(),
        Some("pair_id,f1,f2,a,D,k,scheme,empirical_mse,std_error,theoretical_var,theoretical_var_exact,trials,seed")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 8);
    for r in &rows {
        assert_eq!(r[12], "9");
        assert!(r[6] == "rotation" || r[6] == "bidirectional");
    }
    for pair in rows.chunks(2) {
        let old: f64 = pair[0][9].parse().unwrap();
        let new: f64 = pair[1][9].parse().unwrap();
        assert!(new <= old);
    }
    let again = dir.path().join("again.csv");
    ophash(&["mse", "--pairs", "TOGO-GREENLAND,A-THE", "--k", "64,100", "--trials", "500", "--seed", "9", "--out", p(&again)]);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn mse_custom_pair() {
    let o = ophash(&["mse", "--custom", "20,20,10", "--D", "10000", "--k", "128", "--trials", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# custom k=128: D padded from 10000 to 10112\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("custom,20,20,10,10112,128,")).count(), 2);
}

#[test]
fn corpus_index_query_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let o = ophash(&[
        "gen-corpus", "--out", p(&data), "--n-train", "600", "--n-query", "40", "--nnz", "40", "--D", "8000", "--seed", "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (train, queries) = (data.join("train.txt"), data.join("query.txt"));
    let idx = dir.path().join("index.bin");
    let o = ophash(&["index", "--train", p(&train), "--D", "8000", "--K", "3", "--L", "20", "--out", p(&idx)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = dir.path().join("q.csv");
    let o = ophash(&["query", "--index", p(&idx), "--queries", p(&queries), "--train", p(&train), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let recall: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# mean recall "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(recall > 0.8, "{recall}");
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 41);

    let svm = dir.path().join("svm");
    ophash(&["gen-corpus", "--out", p(&svm), "--n-train", "600", "--n-query", "40", "--nnz", "40", "--D", "8000", "--seed", "3", "--format", "svmlight"]);
    let a = load_corpus(&train, CorpusFormat::Indices, Some(8000)).unwrap();
    let b = load_corpus(&svm.join("train.txt"), CorpusFormat::SvmLight, Some(8000)).unwrap();
    assert_eq!(a.sets, b.sets);

    let csv = dir.path().join("r.csv");
    let o = ophash(&[
        "retrieve", "--train", p(&train), "--queries", p(&queries), "--K", "3", "--L", "5,20", "--runs", "2",
        "--gold-cache", p(&dir.path().join("cache")), "--out", p(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.lines().any(|l| l.starts_with("# D inferred from the data as ")));
    assert_eq!(text.lines().filter(|l| l.starts_with(p(&train))).count(), 8);
    assert_eq!(fs::read_dir(dir.path().join("cache")).unwrap().count(), 1);
}

#[test]
fn corpus_file_errors() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.txt");

    fs::write(&f, "3 7 9\n").unwrap();
    let c = load_corpus(&f, CorpusFormat::Indices, Some(12)).unwrap();
    assert_eq!(c.sets[0].indices(), &[3, 7, 9]);
    assert!(!c.inferred);

    fs::write(&f, "").unwrap();
    let e = load_corpus(&f, CorpusFormat::Indices, None).unwrap_err();
    assert!(matches!(e, BenchError::EmptyCorpus { .. }));
    assert!(e.to_string().ends_with("empty corpus"));

    fs::write(&f, "1 2\n3 x 4\n").unwrap();
    match load_corpus(&f, CorpusFormat::Indices, None).unwrap_err() {
        BenchError::Parse { line, .. } => assert_eq!(line, 2),
        e => panic!("{e}"),
    }

    fs::write(&f, "1 2\n# note\n\n5 12\n").unwrap();
    match load_corpus(&f, CorpusFormat::Indices, Some(12)).unwrap_err() {
        BenchError::Parse { line, msg, .. } => {
            assert_eq!(line, 4);
            assert!(msg.contains("out of range"));
        }
        e => panic!("{e}"),
    }
    let c = load_corpus(&f, CorpusFormat::Indices, None).unwrap();
    assert_eq!(c.universe, 13);
    assert!(c.inferred);
    assert_eq!(c.sets.len(), 3);
    assert!(c.sets[1].is_empty());

    fs::write(&f, "1 5:1 9:1\n").unwrap();
    let c = load_corpus(&f, CorpusFormat::SvmLight, None).unwrap();
    assert_eq!(c.sets[0].indices(), &[5, 9]);
}
