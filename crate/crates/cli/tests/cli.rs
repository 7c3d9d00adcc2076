use std::path::PathBuf;

use pkalign_cli::run;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn exec(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pkalign").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_file(name: &str, content: &str) -> String {
    let dir = std::env::temp_dir().join(format!("pkalign-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn align_identical_files() {
    let f = data("htype.fold");
    let (code, out, err) = exec(&["align", &f, &f]);
    assert_eq!((code, out.as_str(), err.as_str()), (0, "score: 0\n", ""));
}

#[test]
fn align_hairpins_with_traceback() {
    let (code, out, _) = exec(&[
        "align",
        &data("hairpin_short.fold"),
        &data("hairpin_long.fold"),
        "--traceback",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "score: 2\n\n(..)\nG--C\n|  |\nGAAC\n");
}

#[test]
fn align_is_deterministic() {
    let args = [
        "align",
        &data("cross4.fold"),
        &data("nest4.fold"),
        "--traceback",
    ];
    let first = exec(&args);
    assert_eq!(first.0, 0);
    assert!(first.1.starts_with("score: 5\n"));
    for _ in 0..3 {
        assert_eq!(exec(&args), first);
    }
}

#[test]
fn align_matches_oracle_on_fixtures() {
    let files = ["hairpin_short.fold", "hairpin_long.fold", "cross4.fold", "nest4.fold"];
    for a in files {
        for b in files {
            let (_, aligned, _) = exec(&["align", &data(a), &data(b)]);
            let (code, exact, _) = exec(&["oracle", &data(a), &data(b)]);
            assert_eq!(code, 0);
            assert_eq!(aligned, exact, "{a} vs {b}");
        }
    }
}

#[test]
fn warns_when_neither_input_is_decomposable() {
    let f = data("knot10.fold");
    let (code, out, err) = exec(&["align", &f, &f]);
    assert_eq!(code, 0);
    assert!(out.starts_with("score: "));
    assert!(err.contains("neither input is decomposable"));
    assert!(err.contains("at most 4 times"));
}

#[test]
fn strict_proper_flag() {
    let (code, out, _) = exec(&[
        "align",
        &data("hairpin_short.fold"),
        &data("hairpin_long.fold"),
        "--strict-proper",
    ]);
    assert_eq!(code, 0);
    assert_ne!(out, "score: 2\n");
}

#[test]
fn custom_scores_and_generators() {
    let scores = temp_file("scores.txt", "preset unit\nbase_indel * 3\n");
    let (code, out, _) = exec(&[
        "align",
        &data("hairpin_short.fold"),
        &data("hairpin_long.fold"),
        "--scores",
        &scores,
    ]);
    assert_eq!((code, out.as_str()), (0, "score: 6\n"));

    let gens = temp_file("gens.txt", "# loops and concatenation only\nconcat 2 -\nloop 2 - 1:2\n");
    let (code, out, _) = exec(&["decomp", &data("hairpin_short.fold"), "--generators", &gens]);
    assert_eq!((code, out.as_str()), (0, "decomposable\nwitness: loop(id1)\n"));
    let (_, out, _) = exec(&["decomp", &data("cross4.fold"), "--generators", &gens]);
    assert_eq!(out, "not decomposable\n");
}

#[test]
fn decomp_verdicts() {
    let (code, out, _) = exec(&["decomp", &data("knot10.fold")]);
    assert_eq!((code, out.as_str()), (0, "not decomposable\n"));
    let (code, out, _) = exec(&["decomp", &data("cross4.fold")]);
    assert_eq!((code, out.as_str()), (0, "decomposable\nwitness: loop(rwrap(id1, id1))\n"));
    for f in ["htype.fold", "kissing.fold", "loop_hairpin.fold", "bulged.fold", "tandem.fold"] {
        let (code, out, _) = exec(&["decomp", &data(f)]);
        assert_eq!(code, 0);
        assert!(out.starts_with("decomposable\n"), "{f}");
    }
}

#[test]
fn oracle_hairpins() {
    let (code, out, _) = exec(&["oracle", &data("hairpin_short.fold"), &data("hairpin_long.fold")]);
    assert_eq!((code, out.as_str()), (0, "score: 2\n"));
}

#[test]
fn oracle_size_limit_exits_2() {
    let f = data("htype.fold");
    let (code, _, err) = exec(&["oracle", &f, &f]);
    assert_eq!(code, 2);
    assert!(err.contains("size limit 16"));
    let (code, _, _) = exec(&["oracle", &f, &f, "--max-size", "8"]);
    assert_eq!(code, 2);
}

#[test]
fn parse_errors_exit_1_with_position() {
    let bad = temp_file("bad.fold", "> bad\nGACU\n(.))\n");
    let (code, out, err) = exec(&["decomp", &bad]);
    assert_eq!((code, out.as_str()), (1, ""));
    assert!(err.contains("line 3, column 4: unbalanced ')'"), "{err}");

    let bad = temp_file("short.fold", "GAC\n(.))\n");
    let (code, _, err) = exec(&["align", &bad, &bad]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2"));

    let scores = temp_file("bad_scores.txt", "base_sub A\n");
    let h = data("hairpin_short.fold");
    let (code, _, err) = exec(&["align", &h, &h, "--scores", &scores]);
    assert_eq!(code, 1);
    assert!(err.contains("line 1"), "{err}");

    let (code, _, _) = exec(&["align", &h, "missing.fold"]);
    assert_eq!(code, 1);
}

#[test]
fn rejects_gapped_input_and_unknown_letters() {
    let gapped = temp_file("gapped.fold", "GC&GC\n((&))\n");
    let h = data("hairpin_short.fold");
    let (code, _, err) = exec(&["align", &gapped, &h]);
    assert_eq!(code, 1);
    assert!(err.contains("type-0"));
    let (code, out, _) = exec(&["decomp", &gapped]);
    assert_eq!(code, 0);
    assert!(out.starts_with("decomposable"));

    let odd = temp_file("odd.fold", "GX\n()\n");
    let (code, _, err) = exec(&["align", &odd, &h]);
    assert_eq!(code, 1);
    assert!(err.contains("'X'"));
}

#[test]
fn usage_errors_and_help() {
    let (code, _, err) = exec(&["frobnicate"]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
    let (code, out, _) = exec(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("align"));
}

#[test]
fn bench_reports_memo_statistics() {
    let args = ["bench", "--sizes", "3,4", "--samples", "2", "--seed", "9", "--no-time"];
    let (code, out, _) = exec(&args);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n1\tn2\tS0\tS1\tsplittings");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("3\t3\t"));
    assert_eq!(exec(&args).1, out);
}
