use serde_json::Value;
use supertorsion_cli::{run, EXIT_COMPUTATION, EXIT_HYPOTHESIS, EXIT_OK, EXIT_USAGE};

fn sv(args: &str) -> supertorsion_cli::Outcome {
    let mut argv = vec!["supertorsion".to_string()];
    argv.extend(shell_split(args));
    run(argv)
}

fn shell_split(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    for ch in s.chars() {
        match ch {
            '"' => quoted = !quoted,
            ' ' if !quoted => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn json(args: &str) -> (i32, Value) {
    let out = sv(&format!("--json {args}"));
    (out.code, serde_json::from_str(&out.stdout).expect("json output"))
}

#[test]
fn documented_examples() {
    let out = sv("eps --ell 11 --r 8");
    assert_eq!((out.code, out.stdout.trim()), (EXIT_OK, "-1"));
    assert_eq!(sv("h-minus --ell 23").stdout.trim(), "3");
    assert_eq!(sv("frobnicate").code, EXIT_USAGE);
}

#[test]
fn usage_errors() {
    assert_eq!(sv("eps --ell 11").code, EXIT_USAGE);
    assert_eq!(sv("eps --ell 11 --r 8 --bogus").code, EXIT_USAGE);
    assert_eq!(sv("eps --ell eleven --r 8").code, EXIT_USAGE);
    assert_eq!(sv("eps --ell 11 --r 22").code, EXIT_USAGE);
    assert_eq!(sv("--help").code, EXIT_OK);
    let (code, v) = json("frobnicate");
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(v["error"], "usage");
    let (code, v) = json("check-curve --ell 11 --poly \"x^8 +\"");
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(v["error"], "parse");
    let (_, v) = json("check-curve --ell 11 --poly \"2*x^8 + 1\"");
    assert_eq!(v["error"], "non_monic");
}

#[test]
fn computation_errors() {
    let (code, v) = json("check-curve --ell 11 --poly \"x^4 + 2*x^2 + 1\"");
    assert_eq!(code, EXIT_COMPUTATION);
    assert_eq!(v["error"], "not_squarefree");
}

#[test]
fn hypothesis_failures() {
    let (code, v) = json("division-degree --ell 11 --poly \"x^8 + x + 1\"");
    assert_eq!(code, EXIT_HYPOTHESIS);
    assert_eq!(v["error"], "hypothesis");
    let (code, v) = json("check-curve --ell 11 --poly \"x^8 + x + 1\"");
    assert_eq!(code, EXIT_HYPOTHESIS);
    assert_eq!(v["galois"]["verdict"], "reducible");
    assert_eq!(v["simple_prime"]["prime"], "14731");
}

#[test]
fn division_degree_with_override() {
    let (code, v) = json("division-degree --ell 11 --poly \"x^8 + x + 1\" --override");
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["degree"]["su_exponent"], 219);
    assert_eq!(v["degree"]["alternating_order"], "20160");
    assert_eq!(v["degree"]["total"]["b"], 224);
    assert_eq!(v["reference"]["total"]["b"], 260);
    assert_eq!(v["discrepancy"]["agrees"], false);
    assert_eq!(v["hypotheses_verified"], false);
}

#[test]
fn certified_curve() {
    let (code, v) = json("division-degree --ell 11 --poly \"x^8 - x - 1\"");
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["hypotheses_verified"], true);
    assert!(v["reference"].is_null());
}

#[test]
fn numeric_subcommands() {
    assert_eq!(json("kappa --ell 11 --r 8").1["t"], 0);
    assert_eq!(json("c-lr --ell 11 --r 8").1["c"], "32769");
    assert_eq!(json("demjanenko --ell 11 --r 8").1["det"], "2979/2");
    assert_eq!(json("su-order --ell 11 --d 7 --n 10").1["exponent"], 219);
    assert_eq!(sv("su-order --ell 3 --d 2 --n 3").stdout.trim(), "3^3");
    assert_eq!(json("lattice-index --ell 11 --r 8").1["t_prime"], 0);
    let (code, v) = json("verify-commutator --n 5 --ell 3 --d 2 --trials 5 --seed 9");
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["holds"], true);
    assert_eq!(v["numeric"]["passed"], true);
    assert_eq!(json("lift-check --ell 3 --d 2 --n 4 --trials 3").0, EXIT_OK);
}

#[test]
fn seeded_output_is_stable() {
    let a = sv("--json selftest --seed 17");
    let b = sv("--json selftest --seed 17");
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
    let a = sv("--json verify-commutator --n 4 --ell 5 --d 3 --seed 1");
    assert_eq!(a, sv("--json verify-commutator --n 4 --ell 5 --d 3 --seed 1"));
}
