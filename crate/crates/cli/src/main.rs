use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hurwitzkit::characters::character_table;
use hurwitzkit::genfun::{
    f_series, parse_layout_name, proposition_series, verify_hirota_elementary, ContentFunction, FForm, FSeriesSpec,
    HyperParam, IntegralLayout, ParamValue,
};
use hurwitzkit::hurwitz::{hurwitz, Cutoff, HurwitzQuery};
use hurwitzkit::mc::{mc_lemma1, mc_proposition, LemmaQuery, PropositionQuery, Relation};
use hurwitzkit::oracle::{oracle_hurwitz, SurfacePresentation};
use hurwitzkit::selftest::{self, Scale};
use hurwitzkit::symfunc::{schur_poly, PowerAlphabet};
use hurwitzkit::{format_rational, parse_rational, Error, Partition, Rational};

#[derive(Parser)]
#[command(name = "hurwitzkit", version, about = "Exact Hurwitz numbers, Schur series and matrix-integral checks")]
struct Cli {
    /// Worker threads for the parallel engines.
    #[arg(long, global = true, env = "HURWITZKIT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hurwitz number from the character formula.
    Hurwitz {
        #[arg(long, allow_hyphen_values = true)]
        euler: i64,
        #[arg(long)]
        degree: usize,
        /// Branch profile, e.g. 2,1; repeat for several branch points.
        #[arg(long)]
        profile: Vec<Partition>,
        /// Keep only λ with at most this many rows.
        #[arg(long)]
        cutoff: Option<usize>,
    },
    /// Brute-force count of homomorphisms into S_d.
    Oracle {
        /// sphere, torus, rp2, klein, genus:g or crosscaps:q
        #[arg(long)]
        surface: SurfacePresentation,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        profile: Vec<Partition>,
    },
    /// Character table of S_d as CSV.
    Characters {
        #[arg(long)]
        d: usize,
    },
    /// Schur polynomial in power sums, optionally evaluated.
    Schur {
        #[arg(long)]
        lambda: Partition,
        /// Values p_1,p_2,... ; missing ones are 0.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
    },
    /// Truncated series of an integral layout, or of F^{E,k;p} directly.
    Genfun(GenfunArgs),
    /// Truncated BKP bilinear equations for a content function.
    Hirota {
        /// one, x, linear:a, rational:a1,a2;b1, pow:e:<form>, table:0=1,1=2, or products with `*`
        #[arg(long, default_value = "one")]
        content: ContentFunction,
        #[arg(long = "N")]
        n_size: i64,
        #[arg(long)]
        dmax: usize,
    },
    /// Monte Carlo check of an averaging relation or an integral layout.
    Mc(McArgs),
    /// Run the built-in check batteries.
    Selftest {
        /// Exact identities only, at reduced ranges.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 9000)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
}

#[derive(Args)]
struct GenfunArgs {
    /// prop1, prop2, prop1-odd, prop2-odd or chekhov-strahov, with -u for unitary.
    #[arg(long)]
    layout: Option<String>,
    /// Number of matrices.
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    t: usize,
    /// Matrix size.
    #[arg(long = "N", default_value_t = 2)]
    n_size: usize,
    #[arg(long)]
    dmax: usize,
    #[arg(long, allow_hyphen_values = true)]
    euler: Option<i64>,
    #[arg(long, default_value_t = 1)]
    alphabets: usize,
    /// `a:power`, with `a` a rational or `sym`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    param: Vec<String>,
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long)]
    pochhammer: bool,
}

#[derive(Args)]
struct McArgs {
    #[arg(long)]
    relation: Option<Relation>,
    #[arg(long)]
    layout: Option<String>,
    #[arg(long)]
    lambda: Option<Partition>,
    #[arg(long)]
    mu: Option<Partition>,
    #[arg(long = "N")]
    n_size: usize,
    /// Matrix rows separated by `;`, entries by `,`; identity if omitted.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// External matrix of a layout; repeat once per matrix.
    #[arg(long, allow_hyphen_values = true)]
    c: Vec<String>,
    /// Chain matrices of the chekhov-strahov layout.
    #[arg(long, allow_hyphen_values = true)]
    chain: Vec<String>,
    /// Power sums of one free alphabet; repeat per free slot.
    #[arg(long, allow_hyphen_values = true)]
    p: Vec<String>,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    t: usize,
    #[arg(long, default_value_t = 2)]
    dmax: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

enum Failure {
    Engine(Error),
    Usage(String),
    /// Well-formed run whose check came out false; carries the exit code.
    Check(Value, u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type Outcome = Result<Output, Failure>;

enum Output {
    Json(Value),
    Text(String),
}

fn rationals(s: &str) -> Result<Vec<Rational>, Error> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| parse_rational(t.trim())).collect()
}

fn matrix(s: Option<&str>, n: usize) -> Result<Vec<Vec<Rational>>, Failure> {
    let Some(s) = s else {
        return Ok((0..n)
            .map(|i| (0..n).map(|j| Rational::from_integer(i64::from(i == j).into())).collect())
            .collect());
    };
    let rows: Vec<Vec<Rational>> = s.split(';').map(rationals).collect::<Result<_, _>>()?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Failure::Usage(format!("matrix {s:?} is not {n}×{n}")));
    }
    Ok(rows)
}

fn cutoff(c: Option<usize>) -> Cutoff {
    c.map_or(Cutoff::Unbounded, Cutoff::AtMost)
}

fn run_genfun(g: &GenfunArgs) -> Outcome {
    if let Some(name) = &g.layout {
        let (ensemble, integrand) = parse_layout_name(name)?;
        let layout = IntegralLayout::new(ensemble, integrand, g.n, g.t)?;
        let prop = proposition_series(&layout, g.n_size, g.dmax)?;
        return Ok(Output::Json(serde_json::to_value(&prop.series).expect("series serializes")));
    }
    let euler = g.euler.ok_or_else(|| Failure::Usage("genfun needs --layout or --euler".into()))?;
    let mut params = Vec::new();
    for spec in &g.param {
        let (a, power) = spec
            .rsplit_once(':')
            .ok_or_else(|| Failure::Usage(format!("param {spec:?} must be a:power")))?;
        let power: i64 = power.parse().map_err(|_| Failure::Usage(format!("bad power in {spec:?}")))?;
        let a = if a == "sym" { ParamValue::Symbolic } else { ParamValue::Value(parse_rational(a)?) };
        params.push(HyperParam { a, power });
    }
    let spec = FSeriesSpec {
        euler,
        alphabets: g.alphabets,
        params,
        cutoff: cutoff(g.cutoff),
        d_max: g.dmax,
    };
    let form = if g.pochhammer { FForm::Pochhammer } else { FForm::SchurRatio };
    Ok(Output::Json(serde_json::to_value(f_series(&spec, form)?).expect("series serializes")))
}

fn run_mc(m: &McArgs) -> Outcome {
    match (&m.relation, &m.layout) {
        (Some(relation), None) => {
            let lambda = m.lambda.clone().ok_or_else(|| Failure::Usage("mc --relation needs --lambda".into()))?;
            let q = LemmaQuery {
                relation: *relation,
                lambda,
                mu: m.mu.clone(),
                a: matrix(m.a.as_deref(), m.n_size)?,
                b: matrix(m.b.as_deref(), m.n_size)?,
                samples: m.samples,
                seed: m.seed,
            };
            let report = mc_lemma1(&q)?;
            let v = serde_json::to_value(&report).expect("report serializes");
            if report.pass {
                Ok(Output::Json(v))
            } else {
                Err(Failure::Check(v, 4))
            }
        }
        (None, Some(name)) => {
            let (ensemble, integrand) = parse_layout_name(name)?;
            let layout = IntegralLayout::new(ensemble, integrand, m.n, m.t)?;
            let c = if m.c.is_empty() {
                (0..m.n).map(|_| matrix(None, m.n_size)).collect::<Result<_, _>>()?
            } else {
                m.c.iter().map(|s| matrix(Some(s), m.n_size)).collect::<Result<_, _>>()?
            };
            let q = PropositionQuery {
                layout,
                matrix_size: m.n_size,
                c,
                chain: m.chain.iter().map(|s| matrix(Some(s), m.n_size)).collect::<Result<_, _>>()?,
                free: m.p.iter().map(|s| rationals(s)).collect::<Result<_, _>>()?,
                d_max: m.dmax,
                samples: m.samples,
                seed: m.seed,
            };
            let report = mc_proposition(&q)?;
            let v = serde_json::to_value(&report).expect("report serializes");
            if report.pass {
                Ok(Output::Json(v))
            } else {
                Err(Failure::Check(v, 4))
            }
        }
        _ => Err(Failure::Usage("mc needs exactly one of --relation and --layout".into())),
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Hurwitz { euler, degree, profile, cutoff: c } => {
            let r = hurwitz(&HurwitzQuery::new(*euler, *degree, profile.clone(), cutoff(*c))?)?;
            Ok(Output::Json(json!({
                "value": format_rational(&r.value),
                "true_hurwitz": r.is_true_hurwitz,
                "euler_cover": r.euler_cover,
            })))
        }
        Command::Oracle { surface, degree, profile } => {
            let r = oracle_hurwitz(surface, *degree, profile)?;
            Ok(Output::Json(json!({
                "surface": surface.to_string(),
                "euler": surface.euler(),
                "count": r.count.to_string(),
                "value": format_rational(&r.value),
            })))
        }
        Command::Characters { d } => {
            if *d > 12 {
                return Err(Error::Guard(format!("character table limited to d <= 12, got {d}")).into());
            }
            let table = character_table(*d);
            let mut w = csv::Writer::from_writer(Vec::new());
            let header: Vec<String> = std::iter::once("lambda".to_string())
                .chain(table.partitions().iter().map(|p| p.to_string()))
                .collect();
            let csv_err = |e: csv::Error| Failure::Usage(e.to_string());
            w.write_record(&header).map_err(csv_err)?;
            for (lambda, row) in table.partitions().iter().zip(table.rows()) {
                let record: Vec<String> = std::iter::once(lambda.to_string())
                    .chain(row.iter().map(|x| x.to_string()))
                    .collect();
                w.write_record(&record).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(Output::Text(String::from_utf8(bytes).expect("csv is utf-8")))
        }
        Command::Schur { lambda, p } => {
            let poly = schur_poly(lambda);
            let mut out = json!({ "lambda": lambda, "poly": serde_json::to_value(&*poly).expect("poly serializes") });
            if let Some(p) = p {
                let mut values = rationals(p)?;
                values.resize(values.len().max(lambda.weight()), Rational::from_integer(0.into()));
                let v = poly.eval(&PowerAlphabet::explicit(values))?;
                out["value"] = json!(format_rational(&v));
            }
            Ok(Output::Json(out))
        }
        Command::Genfun(g) => run_genfun(g),
        Command::Hirota { content, n_size, dmax } => {
            let report = verify_hirota_elementary(content, *n_size, *dmax)?;
            let v = json!({
                "content": content.to_string(),
                "passed": report.passed(),
                "report": serde_json::to_value(&report).expect("report serializes"),
            });
            if report.passed() {
                Ok(Output::Json(v))
            } else {
                Err(Failure::Check(v, 1))
            }
        }
        Command::Mc(m) => run_mc(m),
        Command::Selftest { quick, seed, samples } => {
            let exact = selftest::exact_suite(Scale { quick: *quick })?;
            let mc = if *quick { vec![] } else { selftest::monte_carlo(*samples, *seed)? };
            let exact_ok = exact.iter().all(|c| c.pass);
            let mc_ok = mc.iter().all(|c| c.pass);
            let v = json!({ "exact": exact, "monte_carlo": mc, "pass": exact_ok && mc_ok });
            match (exact_ok, mc_ok) {
                (true, true) => Ok(Output::Json(v)),
                (false, _) => Err(Failure::Check(v, 1)),
                (true, false) => Err(Failure::Check(v, 4)),
            }
        }
    }
}

fn print_json(v: &Value) {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).expect("stdout");
    writeln!(out).expect("stdout");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(Output::Json(v)) => {
            print_json(&v);
            ExitCode::SUCCESS
        }
        Ok(Output::Text(s)) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(v, code)) => {
            print_json(&v);
            ExitCode::from(code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_guard() { 3 } else { 2 })
        }
    }
}
