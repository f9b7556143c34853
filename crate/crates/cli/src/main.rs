use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use conjcheck_core::models::{ConjugationModel, ModelSpec};
use conjcheck_core::polyring::{parse_ring_spec, GradedPolynomial};
use conjcheck_core::replay::{decompose_sq_sigma, verify_lemma, LemmaReplay};
use conjcheck_core::steenrod::{adem_normalize, injectivity_report, SteenrodElement};
use conjcheck_core::suite::verify_all;
use conjcheck_core::verify::{counterexample_report, verify_corollary, verify_theorem1, verify_theorem2};
use conjcheck_core::VerificationReport;
use serde_json::json;

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const FORMAT_ENV: &str = "CONJCHECK_FORMAT";

/// Exact mod-2 checks of the conjugation-space identities.
#[derive(Debug, Parser)]
#[command(name = "conjcheck", version)]
struct Cli {
    /// Output format; the CONJCHECK_FORMAT environment variable takes precedence.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Truncation degree of the polynomial rings (default: 2*(max-degree + n)).
    #[arg(long, global = true)]
    truncation: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the identities on a model.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Re-derive the coefficient recursions.
    #[command(subcommand)]
    Replay(ReplayCmd),
    /// Exhaust every additive section of a sphere product.
    Counterexample {
        /// Sphere factors as `d,f;d,f` (dimension, fixed dimension).
        #[arg(long, default_value = "2,2;4,1")]
        spec: String,
    },
    /// Steenrod algebra arithmetic.
    #[command(subcommand)]
    Sq(SqCmd),
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    /// The full fixed battery.
    All,
    /// r_G(sigma(x)) = sum Sq^i(kappa x) u^(n-i).
    Thm1(ModelArgs),
    /// kappa(Sq x) = Sq(kappa x); odd squares vanish.
    Thm2(ModelArgs),
    /// r(x) = kappa(x)^2.
    Corollary(ModelArgs),
    /// Evaluation on t1*...*tn separates the admissible basis.
    Injectivity {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Debug, clap::Args)]
struct ModelArgs {
    /// A JSON model file, or one of `projective:N[:D]`, `tau`, `tau-tilde`, `spheres:d,f;d,f`.
    #[arg(long)]
    model: String,
    #[arg(long)]
    max_degree: u32,
}

#[derive(Debug, Subcommand)]
enum ReplayCmd {
    /// Derive a_0..a_n and b_0..b_n and check them.
    Lemma {
        #[arg(long)]
        n: u32,
    },
    /// Solve Sq^{2k} sigma(x) = sum sigma(x~_l) u^{2(k-l)} on (CP^inf)^n.
    Decompose {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        class: String,
    },
}

#[derive(Debug, Subcommand)]
enum SqCmd {
    /// Adem normal form.
    Normalize { element: String },
    /// Apply an element to a polynomial.
    Apply {
        element: String,
        poly: String,
        /// Generators as `name:degree[:nilpotency]`, comma separated.
        #[arg(long)]
        ring: String,
    },
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

struct Output {
    text: String,
    json: serde_json::Value,
    passed: bool,
}

impl Output {
    fn report(r: VerificationReport) -> Self {
        Self {
            text: r.to_text(),
            passed: r.passed(),
            json: serde_json::to_value(&r).expect("report serializes"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match std::env::var(FORMAT_ENV) {
        Ok(v) => match Format::from_str(&v, true) {
            Ok(f) => f,
            Err(_) => {
                eprintln!("error: {FORMAT_ENV} must be `text` or `json`, got `{v}`");
                return ExitCode::from(EXIT_USAGE);
            }
        },
        Err(_) => cli.format,
    };
    match run(&cli.command, cli.truncation) {
        Ok(out) => {
            match format {
                Format::Text => print!("{}", ensure_newline(out.text)),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn no_truncation(truncation: Option<u32>, what: &str) -> Result<(), Usage> {
    match truncation {
        Some(_) => Err(Usage(format!("--truncation does not apply to `{what}`"))),
        None => Ok(()),
    }
}

fn run(command: &Command, truncation: Option<u32>) -> Result<Output, Usage> {
    match command {
        Command::Verify(VerifyCmd::All) => {
            no_truncation(truncation, "verify all")?;
            let result = verify_all()?;
            Ok(Output {
                text: result.to_text(),
                passed: result.passed(),
                json: serde_json::to_value(&result).expect("suite serializes"),
            })
        }
        Command::Verify(VerifyCmd::Thm1(args)) => theorem(args, truncation, args.max_degree, verify_theorem1),
        Command::Verify(VerifyCmd::Corollary(args)) => theorem(args, truncation, args.max_degree, verify_corollary),
        // Sq^d of a degree-d class lands in degree 2d.
        Command::Verify(VerifyCmd::Thm2(args)) => theorem(args, truncation, 2 * args.max_degree, verify_theorem2),
        Command::Verify(VerifyCmd::Injectivity { n }) => {
            no_truncation(truncation, "verify injectivity")?;
            Ok(Output::report(injectivity_report(*n, *n)?))
        }
        Command::Replay(ReplayCmd::Lemma { n }) => {
            no_truncation(truncation, "replay lemma")?;
            Ok(lemma_output(verify_lemma(*n)?))
        }
        Command::Replay(ReplayCmd::Decompose { n, k, class }) => decompose(*n, *k, class, truncation),
        Command::Counterexample { spec } => {
            no_truncation(truncation, "counterexample")?;
            let model = ConjugationModel::from_spec(&ModelSpec::parse_sphere_factors(spec)?)?;
            Ok(Output::report(counterexample_report(&model)?))
        }
        Command::Sq(SqCmd::Normalize { element }) => {
            no_truncation(truncation, "sq normalize")?;
            let e = SteenrodElement::parse(element)?;
            let normal = adem_normalize(&e);
            Ok(Output {
                text: normal.to_string(),
                json: json!({ "input": e.to_string(), "normal_form": normal.to_string() }),
                passed: true,
            })
        }
        Command::Sq(SqCmd::Apply { element, poly, ring }) => sq_apply(element, poly, ring, truncation),
    }
}

fn load_model(name: &str) -> Result<ModelSpec, Usage> {
    if let Some(spec) = ModelSpec::builtin(name) {
        return Ok(spec?);
    }
    let path = Path::new(name);
    let text = std::fs::read_to_string(path)
        .map_err(|e| Usage(format!("`{name}` is neither a builtin model nor a readable file: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn theorem(
    args: &ModelArgs,
    truncation: Option<u32>,
    touched: u32,
    check: fn(&ConjugationModel, u32) -> conjcheck_core::Result<VerificationReport>,
) -> Result<Output, Usage> {
    let spec = match load_model(&args.model)? {
        ModelSpec::Projective { n, truncation: own } => {
            let d = truncation
                .or((own > 0).then_some(own))
                .unwrap_or(2 * (args.max_degree + n));
            if d < touched {
                return Err(Usage(format!(
                    "truncation {d} is below degree {touched}, which this check reaches"
                )));
            }
            ModelSpec::Projective { n, truncation: d }
        }
        spheres @ ModelSpec::Spheres { .. } => {
            no_truncation(truncation, "sphere models")?;
            spheres
        }
    };
    let model = ConjugationModel::from_spec(&spec)?;
    Ok(Output::report(check(&model, args.max_degree)?))
}

fn lemma_output(replay: LemmaReplay) -> Output {
    let mut text = String::new();
    for (name, entries) in [("a", &replay.ledger.a), ("b", &replay.ledger.b)] {
        for e in entries {
            let k = e.k_used.map_or_else(|| "-".to_string(), |k| k.to_string());
            text.push_str(&format!(
                "{name}_{} (k={k}) = {} -> {}  [{}]\n",
                e.index,
                e.instance,
                e.normal,
                if e.verified { "ok" } else { "FAIL" }
            ));
        }
    }
    text.push_str(&replay.report.to_text());
    Output {
        passed: replay.report.passed(),
        json: replay.to_json(),
        text,
    }
}

fn decompose(n: u32, k: u32, class: &str, truncation: Option<u32>) -> Result<Output, Usage> {
    // Parse against a generous ring first to learn the class degree.
    let probe = ConjugationModel::projective(n, u32::from(u16::MAX))?;
    let degree = GradedPolynomial::parse(probe.xring(), class)?
        .degree()
        .ok_or_else(|| Usage(format!("`{class}` is not a nonzero homogeneous class")))?;
    let touched = degree + 2 * k;
    let d = truncation.unwrap_or(touched + 2 * n);
    if d < touched {
        return Err(Usage(format!("truncation {d} is below degree {touched}, which this decomposition reaches")));
    }
    let model = ConjugationModel::projective(n, d)?;
    let x = model.parse_class(class)?;
    let dec = decompose_sq_sigma(&model, &x, k)?;
    let ok = dec.lower_terms_vanish() && dec.top_matches_sq();
    let mut text = format!("Sq^{} sigma({x}) on {}\n", 2 * k, model.label());
    for (l, p) in &dec.components {
        text.push_str(&format!("  x~_{l} = {p}\n"));
    }
    text.push_str(&format!("  Sq^{}({x}) = {}\n", 2 * k, dec.sq_of_x));
    text.push_str(if ok { "[PASS] structure holds\n" } else { "[FAIL] structure violated\n" });
    let components: Vec<_> = dec
        .components
        .iter()
        .map(|(l, p)| json!({ "l": l, "class": p.to_string() }))
        .collect();
    Ok(Output {
        text,
        json: json!({
            "class": x.to_string(),
            "k": k,
            "model": model.label(),
            "components": components,
            "sq_of_x": dec.sq_of_x.to_string(),
            "verdict": if ok { "pass" } else { "fail" },
        }),
        passed: ok,
    })
}

fn sq_apply(element: &str, poly: &str, ring: &str, truncation: Option<u32>) -> Result<Output, Usage> {
    let e = SteenrodElement::parse(element)?;
    let probe = parse_ring_spec(ring, u32::from(u16::MAX))?;
    let p = GradedPolynomial::parse(&probe, poly)?;
    let touched = p.top_degree().unwrap_or(0) + e.terms().map(|m| m.degree()).max().unwrap_or(0);
    let d = truncation.unwrap_or(touched.max(1));
    if d < touched {
        return Err(Usage(format!("truncation {d} is below degree {touched}, which the result reaches")));
    }
    let ring = parse_ring_spec(ring, d)?;
    let p = GradedPolynomial::parse(&ring, poly)?;
    let mut image = GradedPolynomial::zero(&ring);
    for deg in (0..=p.top_degree().unwrap_or(0)).filter(|&deg| !p.component(deg).is_zero()) {
        image.add_assign(&e.act(&p.component(deg))?)?;
    }
    Ok(Output {
        text: image.to_string(),
        json: json!({ "element": e.to_string(), "input": p.to_string(), "result": image.to_string() }),
        passed: true,
    })
}
