//! Command-line front end for `supertorsion`.

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use supertorsion::checks;
use supertorsion::class_invariants::{c_lr, demjanenko_det, h_minus, kappa_and_t};
use supertorsion::commutator::verify_commutator_identity;
use supertorsion::curve::{check_curve, division_degree_report, CurveOptions};
use supertorsion::hermitian::{epsilon, filtration_order_exponent, GroupVariant};
use supertorsion::poly::parse_poly;
use supertorsion::unit_lattices::lattice_index_check;
use supertorsion::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "supertorsion", version, about = "Unitary filtrations, class-number invariants and division-field degrees")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct EllR {
    #[arg(long)]
    ell: u32,
    #[arg(long)]
    r: usize,
}

#[derive(Args, Debug)]
struct Curve {
    #[arg(long)]
    ell: u32,
    /// Monic integer polynomial, e.g. "x^8 + x + 1".
    #[arg(long)]
    poly: String,
    /// Primes sampled for the Galois certificate.
    #[arg(long, default_value_t = 500)]
    budget: usize,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// ε = (r/ℓ).
    Eps(EllR),
    /// The constant c_{ℓ,r} and ord_ℓ(r^ℓ − r).
    CLr(EllR),
    /// Relative class number of Q(ζ_ℓ).
    HMinus {
        #[arg(long)]
        ell: u32,
    },
    /// det[n′(i·j⁻¹)] and its factorization.
    Demjanenko(EllR),
    /// The κ bound and t.
    Kappa(EllR),
    /// Exponent of |SU(V/λ^n)_k| or |U(V/λ^n)_k|.
    SuOrder {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Count the unitary group instead of the special unitary group.
        #[arg(long)]
        unitary: bool,
    },
    /// Symbolic commutator identity, plus random matrix instances when
    /// --ell and --d are given.
    VerifyCommutator {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lifts random members of SU(V/λ^{n−1})_1 and verifies the lifts.
    LiftCheck {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Index of T″ log U′ in log U′, compared with ord_ℓ det.
    LatticeIndex {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        r: usize,
        /// Starting precision.
        #[arg(long)]
        precision: Option<usize>,
    },
    /// Checks the hypotheses on y^ℓ = f(x).
    CheckCurve(Curve),
    /// Degree of the ℓ-division field of y^ℓ = f(x) over Q(ζ_ℓ).
    DivisionDegree {
        #[command(flatten)]
        curve: Curve,
        /// Assemble the degree even if a hypothesis is not verified.
        #[arg(long = "override")]
        override_hypotheses: bool,
    },
    /// Runs the property grid.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    json: Value,
    text: String,
    code: i32,
}

impl Report {
    fn ok(value: impl Serialize, text: String) -> Self {
        Report { json: serde_json::to_value(value).expect("serializable"), text, code: EXIT_OK }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::Parse { .. } | Error::NonMonic => EXIT_USAGE,
        Error::Hypothesis(_) => EXIT_HYPOTHESIS,
        _ => EXIT_COMPUTATION,
    }
}

fn usage_message(rendered: &str) -> String {
    let body = rendered.split("\nUsage:").next().unwrap_or(rendered);
    let body = body.trim().trim_start_matches("error:").trim();
    body.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn error_object(kind: &str, message: &str) -> String {
    json!({ "error": kind, "message": message }).to_string()
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let json_mode = argv.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: EXIT_OK, stdout: rendered, stderr: String::new() };
            }
            let (stdout, stderr) = if json_mode {
                (error_object("usage", &usage_message(&e.to_string())) + "\n", rendered)
            } else {
                (String::new(), rendered)
            };
            return Outcome { code: EXIT_USAGE, stdout, stderr };
        }
    };
    match dispatch(cli.cmd) {
        Ok(rep) => {
            let stdout = if cli.json {
                serde_json::to_string_pretty(&rep.json).expect("json") + "\n"
            } else {
                rep.text
            };
            Outcome { code: rep.code, stdout, stderr: String::new() }
        }
        Err(e) => {
            let obj = error_object(e.kind(), &e.to_string());
            let (stdout, stderr) =
                if cli.json { (obj + "\n", String::new()) } else { (String::new(), format!("error: {e}\n")) };
            Outcome { code: exit_code(&e), stdout, stderr }
        }
    }
}

fn curve_opts(c: &Curve, override_hypotheses: bool) -> CurveOptions {
    CurveOptions { galois_budget: c.budget, override_hypotheses, ..CurveOptions::default() }
}

fn dispatch(cmd: Cmd) -> supertorsion::Result<Report> {
    Ok(match cmd {
        Cmd::Eps(EllR { ell, r }) => {
            let e = epsilon(ell, r)?;
            Report::ok(json!({ "ell": ell, "r": r, "epsilon": e }), format!("{e}\n"))
        }
        Cmd::CLr(EllR { ell, r }) => {
            let (r_ell, c) = c_lr(ell, r)?;
            Report::ok(
                json!({ "ell": ell, "r": r, "r_ell": r_ell, "c": c.to_string() }),
                format!("{c}\n"),
            )
        }
        Cmd::HMinus { ell } => {
            let h = h_minus(ell)?;
            Report::ok(json!({ "ell": ell, "h_minus": h.to_string() }), format!("{h}\n"))
        }
        Cmd::Demjanenko(EllR { ell, r }) => {
            let rep = demjanenko_det(ell, r, None)?;
            let text = format!(
                "det = {} (sign {}, predicted {})\nh⁻ = {}\nc = {}\nκ bound = {}\nt = {}\n",
                rep.det, rep.det_sign, rep.formula_sign, rep.h_minus, rep.c_lr, rep.kappa_bound, rep.t
            );
            Report::ok(rep, text)
        }
        Cmd::Kappa(EllR { ell, r }) => {
            let (k, t) = kappa_and_t(ell, r)?;
            Report::ok(
                json!({ "ell": ell, "r": r, "kappa_bound": k, "t": t }),
                format!("κ bound = {k}\nt = {t}\n"),
            )
        }
        Cmd::SuOrder { ell, d, n, k, unitary } => {
            let variant = if unitary { GroupVariant::U } else { GroupVariant::Su };
            let e = filtration_order_exponent(ell, d, n, k, variant)?;
            let order = BigInt::from(ell).pow(e as u32);
            Report::ok(
                json!({ "ell": ell, "d": d, "n": n, "k": k, "variant": variant, "exponent": e, "order": order.to_string() }),
                format!("{ell}^{e}\n"),
            )
        }
        Cmd::VerifyCommutator { n, ell, d, trials, seed } => {
            let rep = verify_commutator_identity(n)?;
            let mut value = serde_json::to_value(&rep).expect("json");
            let mut text = format!("identity holds for n = {n}: {}\n", rep.holds);
            let mut ok = rep.holds;
            if let (Some(ell), Some(d)) = (ell, d) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let numeric = checks::commutator_instances(ell, d, n, trials, &mut rng);
                let passed = numeric.is_ok();
                ok &= passed;
                value["numeric"] = json!({ "ell": ell, "d": d, "trials": trials, "seed": seed, "passed": passed });
                text += &format!("{trials} random instances (ℓ = {ell}, d = {d}): {}\n", if passed { "pass" } else { "FAIL" });
            }
            Report { json: value, text, code: if ok { EXIT_OK } else { EXIT_COMPUTATION } }
        }
        Cmd::LiftCheck { ell, d, n, trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            checks::lift_instances(ell, d, n, trials, &mut rng)?;
            Report::ok(
                json!({ "ell": ell, "d": d, "n": n, "trials": trials, "seed": seed, "passed": true }),
                format!("{trials} lifts to SU(V/λ^{n}) verified\n"),
            )
        }
        Cmd::LatticeIndex { ell, r, precision } => {
            let li = lattice_index_check(ell, r, precision.unwrap_or(ell as usize + 1))?;
            let text = format!("t′ = {}\nt = {}\nprecision = {}\n", li.t_prime, li.t_expected, li.precision);
            Report::ok(li, text)
        }
        Cmd::CheckCurve(c) => {
            let f = parse_poly(&c.poly)?;
            let rep = check_curve(c.ell, &f, &curve_opts(&c, false))?;
            let mut text = format!(
                "f = {}\ndisc = {}\nsimple prime = {}\nGalois: {:?}\nε = {}\n",
                rep.poly,
                rep.disc,
                rep.simple_prime.prime().map_or("none".to_string(), |p| p.to_string()),
                rep.galois.verdict,
                rep.epsilon
            );
            for f in &rep.failures {
                text += &format!("unverified: {f}\n");
            }
            let code = if rep.verified() { EXIT_OK } else { EXIT_HYPOTHESIS };
            Report { json: serde_json::to_value(&rep).expect("json"), text, code }
        }
        Cmd::DivisionDegree { curve, override_hypotheses } => {
            let f = parse_poly(&curve.poly)?;
            let rep = division_degree_report(curve.ell, &f, &curve_opts(&curve, override_hypotheses))?;
            let mut text = format!(
                "r!/2 = {}\n|SU(V/λ^{})_1| = {}^{}\n|U_red| = {}\ndegree = {}\n",
                rep.degree.alternating_order,
                rep.ell - 1,
                rep.ell,
                rep.degree.su_exponent,
                rep.degree.units.order,
                rep.degree.total
            );
            if !rep.hypotheses_verified {
                text += "hypotheses not verified; assembled under --override\n";
            }
            if let (Some(rf), Some(d)) = (&rep.reference, &rep.discrepancy) {
                text += &format!("reference = {}\nagrees = {}\n{}\n", rf.total, d.agrees, d.note);
            }
            Report::ok(rep, text)
        }
        Cmd::Selftest { seed } => {
            let rep = checks::selftest(seed);
            let mut text = String::new();
            for c in &rep.checks {
                text += &format!("{} {} ({} cases){}\n", if c.passed { "ok  " } else { "FAIL" }, c.name, c.cases,
                    if c.detail.is_empty() { String::new() } else { format!(": {}", c.detail) });
            }
            let code = if rep.passed { EXIT_OK } else { EXIT_COMPUTATION };
            Report { json: serde_json::to_value(&rep).expect("json"), text, code }
        }
    })
}
