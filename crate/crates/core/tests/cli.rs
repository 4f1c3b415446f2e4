//! Exit codes and output formats of the command-line front end, driven
//! through `cli::run` so no process is spawned.

use primnormal::cli::{self, Outcome};

fn run(args: &str) -> Outcome {
    cli::run(std::iter::once("primnormal").chain(args.split_whitespace()))
}

fn json(out: &Outcome) -> serde_json::Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", out.stdout))
}

#[test]
fn search_found_and_not_found() {
    let out = run("search -p 2 -n 3 --format json");
    assert_eq!(out.code, cli::EXIT_OK, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["found"], true);
    assert_eq!(v["status"], "found");

    let out = run("search -p 3 -n 2 --format json");
    assert_eq!(out.code, cli::EXIT_NEGATIVE);
    assert_eq!(json(&out)["found"], false);
}

#[test]
fn search_budget() {
    let out = run("search -p 65521 -n 2 --budget-secs 0.01");
    assert_eq!(out.code, cli::EXIT_BUDGET, "{}", out.stdout);
}

#[test]
fn search_trace_lift_requires_p_squared() {
    assert_eq!(
        run("search -p 2 -n 4 --method trace-lift").code,
        cli::EXIT_OK
    );
    assert_eq!(
        run("search -p 2 -n 6 --method trace-lift").code,
        cli::EXIT_HYPOTHESIS
    );
}

#[test]
fn count_csv() {
    let out = run("count -p 2 -n 4 --format csv");
    assert_eq!(out.code, cli::EXIT_OK);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "q,n,k,count");
    assert_eq!(
        &lines[1..],
        ["2,4,0,8", "2,4,1,4", "2,4,2,2", "2,4,3,1", "2,4,4,1"]
    );
}

#[test]
fn classify_histogram_matches_formula() {
    let out = run("classify -p 3 -n 3 --all --format json");
    assert_eq!(out.code, cli::EXIT_OK);
    for row in json(&out).as_array().unwrap() {
        assert_eq!(
            row["enumerated"].to_string(),
            row["formula"].as_str().unwrap()
        );
    }
}

#[test]
fn sieve_verdict_exit_codes() {
    assert_eq!(run("sieve -p 2 -n 11").code, cli::EXIT_OK);
    assert_eq!(run("sieve -p 2 -e 2 -n 15").code, cli::EXIT_NEGATIVE);
    let out = run("sieve -p 2 -n 11 --format csv");
    assert!(out
        .stdout
        .starts_with("check,q,n,p,s,W_T,W_int,lhs,rhs,holds,verdict"));
    // n = ps needs p not dividing s
    assert_eq!(
        run("sieve -p 2 -n 12 --kind ps -s 6").code,
        cli::EXIT_HYPOTHESIS
    );
}

#[test]
fn estimate_exit_codes() {
    let out = run("estimate mersenne-w-bound -n 7 --format json");
    assert_eq!(out.code, cli::EXIT_OK);
    assert_eq!(json(&out)["estimate"]["id"], "mersenne-w-bound");
    assert_eq!(run("estimate wt-bound-f2 -n 4").code, cli::EXIT_HYPOTHESIS);
    assert_eq!(run("estimate no-such-estimate -n 3").code, cli::EXIT_USAGE);
}

#[test]
fn verify_identity() {
    assert_eq!(
        run("verify-identity -p 3 -n 4 -m 1 -f (x+1)(x^2+1)").code,
        cli::EXIT_OK
    );
    assert_eq!(
        run("verify-identity -p 3 -n 3 -m 1 --beta 2").code,
        cli::EXIT_OK
    );
    assert_eq!(
        run("verify-identity -p 2 -n 4 -m 2 -f x+1").code,
        cli::EXIT_HYPOTHESIS
    );
    assert_eq!(
        run("verify-identity -p 3 -n 4 -m 2").code,
        cli::EXIT_HYPOTHESIS
    );
}

#[test]
fn tables_match_golden() {
    assert_eq!(run("tables c-ps").code, cli::EXIT_OK);
    let out = run("tables cohen-pairs --format csv");
    assert_eq!(out.code, cli::EXIT_OK);
    assert_eq!(out.stdout.lines().count(), 35);
}

#[test]
fn scan_n4_small() {
    let out = run("scan n4 --limit 100 --format json");
    assert_eq!(out.code, cli::EXIT_OK);
    assert_eq!(json(&out)["count"], 15);
}

#[test]
fn usage_errors() {
    assert_eq!(run("").code, cli::EXIT_USAGE);
    assert_eq!(run("frobnicate").code, cli::EXIT_USAGE);
    assert_eq!(run("search -p 4 -n 3").code, cli::EXIT_USAGE);
    assert_eq!(run("search -p 2").code, cli::EXIT_USAGE);
    assert_eq!(run("--help").code, cli::EXIT_OK);
    assert!(!run("--help").stdout.is_empty());
}

#[test]
fn jobs_flag_runs_in_a_pool() {
    let a = run("search -p 2 -n 12 --jobs 1 --format json");
    let b = run("search -p 2 -n 12 --jobs 4 --format json");
    assert_eq!(json(&a)["exponent"], json(&b)["exponent"]);
}
