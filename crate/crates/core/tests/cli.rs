use std::path::PathBuf;
use std::process::{Command, Output};

use morphic::certificate::flatten;
use morphic::text::parse_morphism;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morphic"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix(": "))
}

#[test]
fn derive_prints_return_words_and_derived_prefix() {
    let o = run(&[
        "derive",
        "--morphism",
        &data("fib.txt"),
        "--seed",
        "0",
        "--prefix-letter-count",
        "1",
        "--length",
        "15",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(field(&out, "levels[0].return_words[0]"), Some("\"01\""));
    assert_eq!(field(&out, "levels[0].return_words[1]"), Some("\"0\""));
    assert_eq!(
        field(&out, "levels[0].derived"),
        Some("\"010010100100101\"")
    );
}

#[test]
fn periodicity_of_abab_is_ab() {
    let o = run(&[
        "periodicity",
        "--morphism",
        &data("abab.txt"),
        "--seed",
        "a",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(field(&out, "verdict"), Some("\"periodic\""));
    assert_eq!(field(&out, "witness.period"), Some("\"ab\""));
}

#[test]
fn a_sequence_equals_itself() {
    let f = data("fib.txt");
    let o = run(&[
        "d0l-eq",
        "--left",
        &f,
        "--left-seed",
        "0",
        "--right",
        &f,
        "--right-seed",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "verdict"), Some("\"equal\""));
}

#[test]
fn parse_errors_name_line_and_column() {
    let o = run(&["bounds", "--morphism", &data("broken.txt")]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("line 3") && err.contains("column"), "{err}");
}

#[test]
fn alphabet_mismatches_name_the_letters() {
    let o = run(&[
        "periodicity",
        "--morphism",
        &data("fib.txt"),
        "--seed",
        "0",
        "--coding",
        &data("xy.txt"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(
        err.contains("offending letters") && err.contains('x') && err.contains('0'),
        "{err}"
    );
}

#[test]
fn domain_and_budget_errors_have_distinct_codes() {
    let o = run(&["derive", "--morphism", &data("fib.txt"), "--seed", "7"]);
    assert_eq!(o.status.code(), Some(1));
    let s = data("seebold.txt");
    let o = run(&[
        "d0l-eq",
        "--left",
        &format!("{s}#sigma"),
        "--left-seed",
        "a",
        "--right",
        &format!("{s}#tau"),
        "--right-seed",
        "a",
        "--budget",
        "16",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn several_morphisms_need_a_name() {
    let o = run(&["bounds", "--morphism", &data("tm.txt")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("tm, collapse, drop"));
}

#[test]
fn json_mirrors_text() {
    let args = [
        "normalize",
        "--morphism",
        &format!("{}#tm", data("tm.txt")),
        "--seed",
        "0",
        "--coding",
    ];
    let coding = format!("{}#drop", data("tm.txt"));
    let mut text_args = args.to_vec();
    text_args.push(&coding);
    let text = stdout(&run(&text_args));
    let mut json_args = text_args.clone();
    json_args.extend(["--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&run(&json_args))).unwrap();
    assert_eq!(flatten(&json), text);
}

#[test]
fn emitted_morphisms_reparse() {
    let tm = format!("{}#tm", data("tm.txt"));
    let drop = format!("{}#drop", data("tm.txt"));
    let collapse = format!("{}#collapse", data("tm.txt"));
    let outputs = [
        run(&[
            "derive",
            "--morphism",
            &tm,
            "--seed",
            "0",
            "--depth",
            "3",
            "--format",
            "json",
        ]),
        run(&[
            "normalize",
            "--morphism",
            &tm,
            "--seed",
            "0",
            "--coding",
            &drop,
            "--format",
            "json",
        ]),
        run(&[
            "lambda",
            "--morphism",
            &tm,
            "--seed",
            "0",
            "--coding",
            &collapse,
            "--prefix",
            "011",
            "--format",
            "json",
        ]),
    ];
    let mut count = 0;
    for o in outputs {
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        for line in flatten(&v).lines() {
            let (_, lit) = line.split_once(": ").unwrap();
            if let Ok(serde_json::Value::String(s)) = serde_json::from_str::<serde_json::Value>(lit)
            {
                if s.starts_with("morphism ") {
                    let m = parse_morphism(&s).unwrap();
                    assert_eq!(morphic::text::format_morphism(&m.name, &m.morphism), s);
                    count += 1;
                }
            }
        }
    }
    assert_eq!(count, 11);
}

#[test]
fn certificates_replay_in_both_forms() {
    let dir = std::env::temp_dir().join(format!("morphic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let s = data("seebold.txt");
    for format in ["json", "text"] {
        let o = run(&[
            "d0l-eq",
            "--left",
            &format!("{s}#sigma"),
            "--left-seed",
            "a",
            "--right",
            &format!("{s}#tau"),
            "--right-seed",
            "a",
            "--format",
            format,
        ]);
        let path = dir.join(format!("cert.{format}"));
        std::fs::write(&path, &o.stdout).unwrap();
        let r = run(&["--replay", path.to_str().unwrap()]);
        assert_eq!(r.status.code(), Some(0), "{}", stderr(&r));
        assert_eq!(field(&stdout(&r), "replay"), Some("\"ok\""));

        // a tampered witness is rejected
        let bad = String::from_utf8(o.stdout.clone())
            .unwrap()
            .replacen("\"abba\"", "\"abab\"", 1);
        std::fs::write(&path, bad).unwrap();
        let r = run(&["--replay", path.to_str().unwrap()]);
        assert_eq!(r.status.code(), Some(1));
    }
    std::fs::remove_dir_all(&dir).unwrap();
}
