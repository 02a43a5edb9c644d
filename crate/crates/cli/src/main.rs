use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use idele_cli::{parse_divisor, parse_json_arg, parse_target, run_scenario, Config, CurveSpec, RunReport};
use idele_core::approx::{strong_approx_solve, strong_approx_verify, ApproxProblem};
use idele_core::curve::Curve;
use idele_core::funcfield::parse_function;
use idele_core::idele::Idele;
use idele_core::ortho::{factor_orthogonal_p1, orthogonality_certificate, radical_witness};
use idele_core::picard::{characters_enum, lambda_phi, pi_map, pic0_class};
use idele_core::symbol::weil_check;
use idele_core::verdict::{Check, CheckStatus};
use idele_core::Result;

#[derive(Parser)]
#[command(name = "idele", version, about = "Exact idele, symbol and Picard checks over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveKind {
    P1,
    Ell,
}

#[derive(Args, Clone)]
struct CurveArgs {
    #[arg(long, value_enum)]
    curve: CurveKind,
    /// Field size, a prime power.
    #[arg(long)]
    q: u32,
    /// Coefficient `a` of `y^2 = x^3 + a x + b`.
    #[arg(long, default_value = "0")]
    a: String,
    #[arg(long, default_value = "0")]
    b: String,
}

impl CurveArgs {
    fn spec(&self) -> CurveSpec {
        match self.curve {
            CurveKind::P1 => CurveSpec::P1 { q: self.q },
            CurveKind::Ell => CurveSpec::Elliptic { q: self.q, a: self.a.clone(), b: self.b.clone() },
        }
    }
}

#[derive(Args, Clone)]
struct RunArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Largest place degree covered by the checks.
    #[arg(long, visible_alias = "window", default_value_t = 2)]
    bound: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
}

impl RunArgs {
    fn config(&self) -> Config {
        Config::new(self.curve.spec(), self.bound, self.seed, self.trials)
    }
}

#[derive(Args, Clone)]
struct QueryArgs {
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long, visible_alias = "window", default_value_t = 2)]
    bound: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Local symbols of two functions at every place and their product.
    Symbol {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Weil reciprocity on seeded pairs of functions.
    Reciprocity(RunArgs),
    /// The symbol identities on seeded idele triples.
    Axioms(RunArgs),
    /// Exhaustive antisymmetry and unit invariance of the local symbol.
    LocalSymbol(RunArgs),
    /// Radical witnesses: one idele given as JSON, or the seeded suite.
    Radical {
        #[command(flatten)]
        run: RunArgs,
        /// Idele JSON, inline or `@file`.
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Orthogonality certificates and the factorization on `P^1`.
    #[command(subcommand)]
    Ortho(OrthoCommand),
    /// Divisor classes, characters and the exact sequence.
    #[command(subcommand)]
    Picard(PicardCommand),
    /// Strong approximation: one problem from `--at`, or the seeded suite.
    Approx {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = "inf")]
        x0: String,
        /// `place:function:order`, repeatable.
        #[arg(long)]
        at: Vec<String>,
        /// Run the seeded suite instead of a single problem.
        #[arg(long)]
        suite: bool,
    },
    /// The exact sequence checks to the given bound.
    VerifySeq(RunArgs),
    /// Every scenario at small sizes.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

#[derive(Subcommand)]
enum OrthoCommand {
    /// Certify an idele orthogonal to the function field up to the bound.
    Certify {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long)]
        alpha: String,
    },
    /// Write a certified orthogonal idele on `P^1` as `c · f · ν`.
    FactorP1 {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long)]
        alpha: String,
    },
    /// Factor seeded orthogonal ideles on `P^1`.
    Suite(RunArgs),
}

#[derive(Subcommand)]
enum PicardCommand {
    /// The class of a degree-0 divisor.
    Class {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long)]
        divisor: String,
    },
    /// All characters of the point group into `k^*`.
    Chars {
        #[command(flatten)]
        query: QueryArgs,
    },
    /// `λ(D)` for an idele with trivial divisor.
    Pi {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        divisor: String,
    },
    /// The idele realizing the character with the given index.
    LambdaPhi {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// The exact sequence checks.
    VerifySeq(RunArgs),
    /// Point counts, norm-one orders and character counts.
    Counts(RunArgs),
}

fn query_report(name: &str, q: &QueryArgs) -> Result<(Curve, RunReport)> {
    let curve = q.curve.spec().build()?;
    let report = RunReport::new(name, &curve, q.bound, q.seed);
    Ok((curve, report))
}

fn status_check(name: &str, ok: bool, witness: serde_json::Value) -> Check {
    Check::new(name, CheckStatus::from_bool(ok), witness)
}

fn run(command: Command) -> Result<RunReport> {
    match command {
        Command::Symbol { curve, f, g } => {
            let c = curve.spec().build()?;
            let (f, g) = (parse_function(&c, &f)?, parse_function(&c, &g)?);
            let table = weil_check(&f, &g)?;
            let mut r = RunReport::new("symbol", &c, table.window, 0);
            r.checks.push(status_check("weil_reciprocity", table.is_one(), json!(null)));
            r.data = json!({"f": f.to_string(), "g": g.to_string(), "table": table.to_json()});
            Ok(r)
        }
        Command::Reciprocity(a) => run_scenario("reciprocity", &a.config()),
        Command::Axioms(a) => run_scenario("axioms", &a.config()),
        Command::LocalSymbol(a) => run_scenario("local-symbol", &a.config()),
        Command::Radical { run, alpha: None } => run_scenario("radical", &run.config()),
        Command::Radical { run, alpha: Some(alpha) } => {
            let c = run.curve.spec().build()?;
            let alpha = Idele::from_json(&c, &parse_json_arg(&alpha)?)?;
            let v = radical_witness(&alpha, run.bound)?;
            let mut r = RunReport::new("radical", &c, run.bound, run.seed);
            r.data = v.to_json(&c);
            r.checks.push(Check::new(
                "witness_search",
                CheckStatus::Pass,
                json!({"witness_found": v.is_witness()}),
            ));
            Ok(r)
        }
        Command::Ortho(OrthoCommand::Certify { query, alpha }) => {
            let (c, mut r) = query_report("ortho certify", &query)?;
            let alpha = Idele::from_json(&c, &parse_json_arg(&alpha)?)?;
            let cert = orthogonality_certificate(&alpha, query.bound, query.seed)?;
            r.checks.push(status_check("orthogonal_to_bound", cert.is_certified(), json!(null)));
            r.data = cert.to_json(&c);
            Ok(r)
        }
        Command::Ortho(OrthoCommand::FactorP1 { query, alpha }) => {
            let (c, mut r) = query_report("ortho factor-p1", &query)?;
            let alpha = Idele::from_json(&c, &parse_json_arg(&alpha)?)?;
            let cert = orthogonality_certificate(&alpha, query.bound, query.seed)?;
            r.checks.push(status_check("orthogonal_to_bound", cert.is_certified(), json!(null)));
            if cert.is_certified() {
                let fac = factor_orthogonal_p1(&alpha, &cert)?;
                r.checks.push(status_check("factorization", fac.succeeded(), json!(null)));
                r.data = json!({"certificate": cert.to_json(&c), "factorization": fac.to_json(&c)});
            } else {
                r.data = json!({"certificate": cert.to_json(&c)});
            }
            Ok(r)
        }
        Command::Ortho(OrthoCommand::Suite(a)) => run_scenario("ortho-p1", &a.config()),
        Command::Picard(PicardCommand::Class { query, divisor }) => {
            let (c, mut r) = query_report("picard class", &query)?;
            let d = parse_divisor(&c, &divisor)?;
            let class = pic0_class(&c, &d, query.bound)?;
            r.data = json!({"divisor": d.to_string(), "class": class.format(&c)});
            Ok(r)
        }
        Command::Picard(PicardCommand::Chars { query }) => {
            let (c, mut r) = query_report("picard chars", &query)?;
            let chars = characters_enum(&c)?;
            r.data = json!({
                "count": chars.len(),
                "characters": chars.iter().map(|x| x.to_json(&c)).collect::<Vec<_>>(),
            });
            Ok(r)
        }
        Command::Picard(PicardCommand::Pi { query, lambda, divisor }) => {
            let (c, mut r) = query_report("picard pi", &query)?;
            let lam = Idele::from_json(&c, &parse_json_arg(&lambda)?)?;
            let d = parse_divisor(&c, &divisor)?;
            let v = pi_map(&lam, &d)?;
            r.data = json!({"divisor": d.to_string(), "value": c.field().format(v)});
            Ok(r)
        }
        Command::Picard(PicardCommand::LambdaPhi { query, index }) => {
            let (c, mut r) = query_report("picard lambda-phi", &query)?;
            let chars = characters_enum(&c)?;
            let phi = chars.get(index).ok_or_else(|| {
                idele_core::Error::Precondition(format!("character index {index} out of {}", chars.len()))
            })?;
            let lam = lambda_phi(&c, phi, query.bound)?;
            let cert = orthogonality_certificate(&lam, query.bound, query.seed)?;
            r.checks.push(status_check("certified_orthogonal", cert.is_certified(), json!(null)));
            r.data = json!({"character": phi.to_json(&c), "lambda_phi": lam.to_json(), "certificate": cert.to_json(&c)});
            Ok(r)
        }
        Command::Picard(PicardCommand::VerifySeq(a)) | Command::VerifySeq(a) => {
            run_scenario("verify-seq", &a.config())
        }
        Command::Picard(PicardCommand::Counts(a)) => run_scenario("picard", &a.config()),
        Command::Approx { run, suite: true, .. } => run_scenario("approx", &run.config()),
        Command::Approx { run, x0, at, suite: false } => {
            let c = run.curve.spec().build()?;
            let targets = at.iter().map(|s| parse_target(&c, s)).collect::<Result<Vec<_>>>()?;
            let prob = ApproxProblem::new(&c, &c.parse_place(&x0)?, targets)?;
            let f = strong_approx_solve(&prob)?;
            let v = strong_approx_verify(&f, &prob)?;
            let mut r = RunReport::new("approx", &c, run.bound, run.seed);
            r.checks.extend(v.checks.iter().cloned());
            r.data = json!({"problem": prob.to_json(), "solution": f.to_string()});
            Ok(r)
        }
        Command::Selftest { seed, trials } => selftest(seed, trials),
    }
}

fn selftest(seed: u64, trials: usize) -> Result<RunReport> {
    let p = |q| CurveSpec::P1 { q };
    let e = |b: &str| CurveSpec::Elliptic { q: 5, a: "1".into(), b: b.into() };
    let plan = [
        ("reciprocity", p(9), 2),
        ("reciprocity", e("1"), 2),
        ("axioms", p(5), 2),
        ("axioms", e("0"), 2),
        ("local-symbol", p(2), 1),
        ("radical", p(3), 2),
        ("ortho-p1", p(5), 2),
        ("verify-seq", e("0"), 2),
        ("approx", p(3), 2),
        ("picard", e("1"), 2),
    ];
    let curve = Curve::p1(&idele_cli::field_of_order(2)?);
    let mut report = RunReport::new("selftest", &curve, 2, seed);
    report.curve = "various".into();
    report.q = 0;
    for (name, spec, window) in plan {
        let sub = run_scenario(name, &Config::new(spec, window, seed, trials))?;
        for mut c in sub.checks {
            c.name = format!("{name}/{}/{}", sub.curve, c.name);
            report.checks.push(c);
        }
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli.command) {
        Ok(mut report) => {
            if report.wall_time == 0.0 {
                report.wall_time = start.elapsed().as_secs_f64();
            }
            println!("{}", report.canonical());
            eprint!("{}", report.summary());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
