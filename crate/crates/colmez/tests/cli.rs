use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("colmez").chain(args.iter().copied());
    let code = colmez::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn census_row_q7() {
    let (code, out, _) = run(&["census", "--q", "7"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "1,1,1,3,1,1,1"), "{out}");
}

#[test]
fn census_csv_layout() {
    let (code, out, _) = run(&["census", "--max-q", "13", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "q,1,2,3,4,5,6,7");
    assert_eq!(lines[1], "7,1,1,1,3,1,1,1");
    assert_eq!(lines[4], "13,1,1,2,4,5,7,10");
}

#[test]
fn census_json_has_schema_and_middle() {
    let (_, out, _) = run(&["census", "--q", "9", "--epsilon", "10", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], 1);
    let row = &v["rows"][0];
    assert_eq!(row["counts"].as_array().unwrap().len(), 10);
    assert_eq!(row["counts"][4], 4);
    assert_eq!(row["middle_epsilon"], 5);
    assert_eq!(row["middle_with_rho"], 2);
}

#[test]
fn verify_theorem61_q7() {
    let (code, out, _) = run(&["verify", "--q", "7", "--suite", "theorem61"]);
    assert_eq!(code, 0);
    assert!(out.contains("256/256 CM types pass"), "{out}");
}

#[test]
fn verify_all_small() {
    let (code, out, _) = run(&["verify", "--max-q", "9", "--suite", "all", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);
    let suites: std::collections::BTreeSet<&str> =
        v["items"].as_array().unwrap().iter().map(|i| i["suite"].as_str().unwrap()).collect();
    assert_eq!(suites.len(), 5);
}

#[test]
fn sampled_verification_is_reproducible() {
    let args = ["verify", "--q", "13", "--suite", "theorem61", "--samples", "200", "--seed", "5"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.contains("200/200"));
}

#[test]
fn height_json() {
    let (code, out, _) = run(&["height", "--q", "7", "--epsilon", "2", "--disc", "-4", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["coefficients"]["ZetaQ"], "-1/4");
    assert_eq!(v["coefficients"]["ChiK"], "-1/28");
    assert_eq!(v["coefficients"]["ChiEF"], "-3/112");
    assert!(v["numeric_part"].as_f64().is_some());
    assert_eq!(v["discriminant"], -4);
}

#[test]
fn height_without_disc_is_symbolic() {
    let (code, out, _) = run(&["height", "--q", "7", "--epsilon", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("h = -(1/4)*Z(0,zeta_Q) - (1/4)*Z(0,chi_k)"), "{out}");
    assert!(!out.contains("numeric part"));
}

#[test]
fn aphi_and_stabilizer() {
    let (code, out, _) = run(&["aphi", "--q", "5", "--cm-type", "101000", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["matches_closed_form"], true);
    assert_eq!(v["slots"][0], "inf");
    assert_eq!(v["values"][0]["value"], "1/2");
    let (code, out, _) = run(&["stabilizer", "--q", "13", "--cm-type", "11100000000000", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["order"], 6);
    assert_eq!(v["orbit_size"], 182);
}

#[test]
fn table_csv() {
    let (code, out, _) = run(&["table", "--q", "7", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1 + 1 + 6);
    assert!(out.lines().nth(2).unwrap().starts_with("chi_0,1,1,1"));
}

#[test]
fn invalid_inputs_exit_two() {
    for args in [
        &["census", "--q", "8"][..],
        &["census", "--q", "2"],
        &["table", "--q", "3"],
        &["aphi", "--q", "7", "--cm-type", "101"],
        &["aphi", "--q", "7", "--cm-type", "1010000x"],
        &["height", "--q", "7", "--epsilon", "9"],
        &["height", "--q", "7", "--epsilon", "2", "--disc", "-12"],
        &["verify"],
        &["frobnicate"],
        &["census", "--q", "seven"],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty());
    }
    let (_, _, err) = run(&["census", "--q", "8"]);
    assert!(err.contains("usage: colmez"));
}

#[test]
fn binary_is_deterministic() {
    let bin = env!("CARGO_BIN_EXE_colmez");
    let go = || {
        Command::new(bin)
            .args(["verify", "--q", "9", "--suite", "all", "--format", "json"])
            .env("COLMEZ_THREADS", "3")
            .output()
            .unwrap()
    };
    let (a, b) = (go(), go());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let single = Command::new(bin)
        .args(["verify", "--q", "9", "--suite", "all", "--format", "json"])
        .env("COLMEZ_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, single.stdout);
}
