use std::process::{Command, Output};

use equipop::dectree::{compose, decompose};
use equipop::popularity::enumerate_separable;
use equipop::{DecompositionTree, Permutation};

fn equipop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equipop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = equipop(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout)
        .unwrap()
        .trim_end()
        .to_string()
}

fn code(args: &[&str]) -> i32 {
    equipop(args).status.code().unwrap()
}

#[test]
fn enumerate() {
    assert_eq!(stdout(&["enumerate", "3", "--format", "count"]), "6");
    assert_eq!(stdout(&["enumerate", "4", "--format", "count"]), "22");
    assert_eq!(stdout(&["enumerate", "1"]), "1");
    let lines = stdout(&["enumerate", "4"]);
    assert_eq!(lines.lines().count(), 22);
    assert!(!lines.lines().any(|l| l == "2413" || l == "3142"));
    let json: Vec<String> =
        serde_json::from_str(&stdout(&["enumerate", "3", "--format", "json"])).unwrap();
    assert_eq!(json, ["123", "132", "213", "231", "312", "321"]);
    assert_eq!(code(&["enumerate"]), 2);
    assert_eq!(code(&["enumerate", "0"]), 2);
}

#[test]
fn tree_tools() {
    assert_eq!(
        stdout(&["tree", "215643798"]),
        "+(-(.,.),-(+(.,.),.,.),.,-(.,.))"
    );
    assert_eq!(stdout(&["signature", "215643798"]), "3,2,1,1,1");
    assert_eq!(stdout(&["wedge", "1,1"]), "132");
    assert_eq!(stdout(&["wedge", "2,1"]), "1243");
    assert_eq!(code(&["tree", "2413"]), 1);
    assert_eq!(code(&["signature", "3142"]), 1);
    assert_eq!(code(&["tree", "2x"]), 2);
    assert_eq!(code(&["wedge", "1,x"]), 2);
}

#[test]
fn tree_output_round_trips() {
    for n in 1..=6 {
        for pi in enumerate_separable(n) {
            let text = stdout(&["tree", &pi.to_short_string()]);
            let tree: DecompositionTree = text.parse().unwrap();
            assert_eq!(compose(&tree).unwrap(), pi);
        }
    }
}

#[test]
fn popularity() {
    assert_eq!(stdout(&["popularity", "21", "--max-length", "4"]), "1,9,66");
    assert_eq!(stdout(&["popularity", "1", "--max-length", "3"]), "1,4,18");
    assert_eq!(stdout(&["popularity", "123", "--max-length", "4"]), "1,16");
    assert_eq!(
        stdout(&["popularity", "21", "--max-length", "4", "--format", "csv"]),
        "pattern,n=2,n=3,n=4\n21,1,9,66"
    );
    let plus = stdout(&[
        "popularity",
        "12",
        "--max-length",
        "6",
        "--filter",
        "sum-decomposable",
    ]);
    let minus = stdout(&[
        "popularity",
        "12",
        "--max-length",
        "6",
        "--filter",
        "skew-decomposable",
    ]);
    let all = stdout(&["popularity", "12", "--max-length", "6"]);
    let parse = |s: &str| {
        s.split(',')
            .map(|x| x.parse::<u64>().unwrap())
            .collect::<Vec<_>>()
    };
    let sum: Vec<u64> = parse(&plus)
        .iter()
        .zip(parse(&minus))
        .map(|(a, b)| a + b)
        .collect();
    assert_eq!(sum, parse(&all));
    assert_eq!(code(&["popularity", "2413", "--max-length", "6"]), 1);
    assert_eq!(
        code(&["popularity", "21", "--max-length", "12", "--budget", "1000"]),
        1
    );
    assert_eq!(code(&["popularity", "123", "--max-length", "2"]), 2);
}

#[test]
fn thread_count_does_not_change_output() {
    let one = stdout(&["--threads", "1", "popularity", "1324", "--max-length", "9"]);
    let four = stdout(&["--threads", "4", "popularity", "1324", "--max-length", "9"]);
    assert_eq!(one, four);
}

#[test]
fn classes() {
    for (k, n, count) in [("3", "7", 2), ("4", "8", 3), ("5", "9", 5)] {
        let out = equipop(&["classes", "--pattern-length", k, "--max-length", n]);
        assert_eq!(out.status.code(), Some(0));
        let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(json["classes"].as_array().unwrap().len(), count, "k = {k}");
        assert_eq!(json["pass"], true);
    }
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "classes",
        "--pattern-length",
        "3",
        "--max-length",
        "7",
    ]))
    .unwrap();
    let mut sets: Vec<Vec<String>> = json["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            let mut v: Vec<String> = c["patterns"]
                .as_array()
                .unwrap()
                .iter()
                .map(|p| p.as_str().unwrap().to_string())
                .collect();
            v.sort();
            v
        })
        .collect();
    sets.sort();
    assert_eq!(sets, [vec!["123", "321"], vec!["132", "213", "231", "312"]]);
    assert_eq!(
        code(&["classes", "--pattern-length", "5", "--max-length", "4"]),
        2
    );
}

#[test]
fn verify_suites() {
    let out = stdout(&["verify", "--suite", "qgegenbauer"]);
    assert!(out
        .lines()
        .any(|l| l.starts_with("PASS") && l.contains("fails at n = 2")));
    assert!(out
        .lines()
        .any(|l| l.starts_with("PASS") && l.contains("1 <= n <= 30")));
    assert!(!out.contains("FAIL"));
    assert_eq!(code(&["verify", "--suite", "schroder", "--order", "10"]), 0);
    let all = equipop(&["verify", "--suite", "all", "--order", "8"]);
    let text = String::from_utf8(all.stdout).unwrap();
    assert_eq!(all.status.code(), Some(0), "{text}");
    assert!(!text.contains("FAIL"));
    assert_eq!(code(&["verify", "--suite", "nope"]), 2);
}

#[test]
fn signature_matches_library() {
    let pi: Permutation = "2143".parse().unwrap();
    let lib = equipop::dectree::signature(&decompose(&pi).unwrap()).to_string();
    assert_eq!(stdout(&["signature", "2143"]), lib.replace(' ', ""));
}
