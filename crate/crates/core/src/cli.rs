//! Command-line front end. Every subcommand reads JSON files, writes one JSON
//! document to standard output and exits with 0 on success, 1 on a domain
//! error and 2 on malformed input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::amice::{self, Distribution};
use crate::coefficients::{CoefficientModel, RingMorphism};
use crate::hopf::{self, AxiomStatus};
use crate::io::{self, SchemaError};
use crate::mahler;
use crate::series::{Basis, TruncatedSeries};
use crate::weights::{self, MemberReport, RowVerdict, Space, Verdict, Weight};

pub const MAX_ORDER_VAR: &str = "AMICE_KIT_MAX_ORDER";
pub const DEFAULT_MAX_ORDER: usize = 256;

#[derive(Debug, Parser)]
#[command(
    name = "amice-kit",
    version,
    about = "Exact computations with power series, Mahler series and their duality"
)]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpaceArg {
    Lambda,
    Kappa,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Nuclearity of a weight matrix.
    Nuclearity {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Membership of a sequence in the echelon or co-echelon space.
    Membership {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "lambda")]
        space: SpaceArg,
        /// Test boundedness instead of summability on each row.
        #[arg(long)]
        sup: bool,
    },
    /// Mahler coefficients of a function table.
    MahlerExpand {
        #[arg(long)]
        table: PathBuf,
    },
    /// Value of a Mahler series at a point.
    ///
    /// Natural points are evaluated exactly and negative integers through the
    /// reflection. With --precision the point is read as a p-adic integer.
    Evaluate {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long)]
        precision: Option<i64>,
    },
    /// Pairing of a monomial series with a Mahler series.
    Pairing {
        #[arg(long)]
        xi: PathBuf,
        #[arg(long)]
        f: PathBuf,
    },
    /// Exact check of the Hopf algebra axioms.
    HopfVerify {
        #[arg(long)]
        model: String,
        #[arg(long)]
        order: usize,
    },
    /// Amice transform of a list of moments, optionally integrating a Mahler series.
    Amice {
        #[arg(long)]
        moments: PathBuf,
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Power moments `∫ x^k dμ` for `k ≤ n`.
    Moments {
        #[arg(long, conflicts_with = "kubota_leopoldt")]
        moments: Option<PathBuf>,
        /// Use the Kubota-Leopoldt distribution over --model.
        #[arg(long)]
        kubota_leopoldt: bool,
        #[arg(long, default_value = "Q-arch")]
        model: String,
        #[arg(long)]
        n: usize,
    },
    /// The Bernoulli number B_n.
    Bernoulli {
        #[arg(long)]
        n: usize,
    },
    /// Coefficientwise base change along the canonical morphism.
    BaseChange {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        to: String,
    },
    /// Weighted norm of a series, or the norm of a single element.
    Norm {
        #[arg(long, required_unless_present = "element")]
        series: Option<PathBuf>,
        #[arg(long, default_value = "1")]
        rho: String,
        #[arg(long, requires = "model", allow_hyphen_values = true)]
        element: Option<String>,
        #[arg(long)]
        model: Option<String>,
    },
}

#[derive(Debug)]
enum Failure {
    Schema(SchemaError),
    Domain(crate::Error),
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        Failure::Schema(e)
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn read_json(path: &Path) -> std::result::Result<Value, SchemaError> {
    let label = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| SchemaError::new(&label, e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| SchemaError::new(&label, format!("invalid JSON: {e}")))
}

fn max_order() -> std::result::Result<usize, SchemaError> {
    match std::env::var(MAX_ORDER_VAR) {
        Err(_) => Ok(DEFAULT_MAX_ORDER),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| SchemaError::new(MAX_ORDER_VAR, format!("expected a natural number, got {v:?}"))),
    }
}

fn check_order(n: usize, cap: usize) -> std::result::Result<(), Failure> {
    if n > cap {
        return Err(Failure::Domain(crate::Error::Domain(format!(
            "order {n} exceeds {MAX_ORDER_VAR}={cap}"
        ))));
    }
    Ok(())
}

fn load_series(path: &Path, cap: usize) -> std::result::Result<TruncatedSeries, Failure> {
    let s = io::series_from_json(&read_json(path)?, "$")?;
    check_order(s.order(), cap)?;
    Ok(s)
}

fn parse_model(s: &str, flag: &str) -> std::result::Result<CoefficientModel, SchemaError> {
    s.parse()
        .map_err(|e: crate::Error| SchemaError::new(flag, e.to_string()))
}

fn parse_rational_arg(s: &str, flag: &str) -> std::result::Result<BigRational, SchemaError> {
    io::parse_rational(s).ok_or_else(|| SchemaError::new(flag, format!("invalid rational {s:?}")))
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Member => "member",
        Verdict::NonMember => "non-member",
        Verdict::Undecidable => "undecidable",
    }
}

fn member_report_json(r: &MemberReport) -> Value {
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| match row {
            RowVerdict::Certified(b) => json!({"status": "certified", "bound": io::norm_to_json(b)}),
            RowVerdict::Divergent => json!({"status": "divergent"}),
            RowVerdict::Unsettled => json!({"status": "unsettled"}),
        })
        .collect();
    json!({"verdict": verdict_name(r.verdict), "witness": r.witness, "rows": rows})
}

fn status_json(s: &AxiomStatus) -> Value {
    Value::String(s.label().into())
}

fn execute(command: Command) -> Outcome {
    let cap = max_order()?;
    match command {
        Command::Nuclearity { matrix } => {
            let w = io::matrix_from_json(&read_json(&matrix)?, "$")?;
            Ok(json!({"nuclear": weights::is_nuclear_matrix(&w), "rows": w.rows().len()}))
        }
        Command::Membership {
            series,
            matrix,
            space,
            sup,
        } => {
            let s = load_series(&series, cap)?;
            let w = io::matrix_from_json(&read_json(&matrix)?, "$")?;
            let space = match space {
                SpaceArg::Lambda => Space::Lambda,
                SpaceArg::Kappa => Space::Kappa,
            };
            let test = if sup {
                weights::membership_sup
            } else {
                weights::membership
            };
            let r = test(s.model(), s.coeffs(), s.tail(), &w, space)?;
            Ok(member_report_json(&r))
        }
        Command::MahlerExpand { table } => {
            let t = io::table_from_json(&read_json(&table)?, "$")?;
            check_order(t.len(), cap)?;
            Ok(io::series_to_json(&mahler::mahler_expand(&t)))
        }
        Command::Evaluate { series, at, precision } => {
            let f = load_series(&series, cap)?;
            let m = *f.model();
            let value = if let Some(t) = precision {
                let a = io::element_from_json(&m, &Value::String(at), "--at")?;
                mahler::padic_evaluate(&f, &a, t)?
            } else {
                let n: i64 = at
                    .trim()
                    .parse()
                    .map_err(|_| SchemaError::new("--at", format!("expected an integer, got {at:?}")))?;
                if n >= 0 {
                    mahler::evaluate(&f, n as usize)?
                } else {
                    hopf::mahler_antipode(&f, &[n.unsigned_abs()])?.remove(0)
                }
            };
            Ok(json!({"value": io::element_to_json(&m, &value)}))
        }
        Command::Pairing { xi, f } => {
            let xi = load_series(&xi, cap)?;
            let f = load_series(&f, cap)?;
            let p = amice::pairing_with_bound(&xi, &f)?;
            Ok(json!({
                "value": io::element_to_json(xi.model(), &p.value),
                "error_bound": io::norm_to_json(&p.error_bound),
            }))
        }
        Command::HopfVerify { model, order } => {
            let m = parse_model(&model, "--model")?;
            check_order(order, cap)?;
            let r = hopf::verify_hopf_axioms(&m, order)?;
            let mut out = json!({
                "coassoc": status_json(&r.coassoc),
                "counit": status_json(&r.counit),
                "antipode": status_json(&r.antipode),
            });
            let details: serde_json::Map<String, Value> = [
                ("coassoc", &r.coassoc),
                ("counit", &r.counit),
                ("antipode", &r.antipode),
            ]
            .into_iter()
            .filter_map(|(k, s)| match s {
                AxiomStatus::Fail(d) => Some((k.to_string(), Value::String(d.clone()))),
                AxiomStatus::Pass => None,
            })
            .collect();
            if !details.is_empty() {
                out["failures"] = Value::Object(details);
            }
            Ok(out)
        }
        Command::Amice { moments, against } => {
            let (model, moments, tail) = io::moments_from_json(&read_json(&moments)?, "$")?;
            check_order(moments.len(), cap)?;
            let mu = amice::amice_transform_with_tail(&model, moments, tail)?;
            let mut out = json!({"transform": io::series_to_json(mu.series())});
            if let Some(path) = against {
                let f = load_series(&path, cap)?;
                out["integral"] = io::element_to_json(&model, &mu.integrate(&f)?);
            }
            Ok(out)
        }
        Command::Moments {
            moments,
            kubota_leopoldt,
            model,
            n,
        } => {
            check_order(n + 1, cap)?;
            let mu: Distribution = match moments {
                Some(path) => {
                    let (model, moments, tail) = io::moments_from_json(&read_json(&path)?, "$")?;
                    check_order(moments.len(), cap)?;
                    amice::amice_transform_with_tail(&model, moments, tail)?
                }
                None if kubota_leopoldt => amice::kubota_leopoldt(&parse_model(&model, "--model")?, n + 1)?,
                None => {
                    return Err(Failure::Schema(SchemaError::new(
                        "--moments",
                        "give a moments file or --kubota-leopoldt",
                    )))
                }
            };
            let stirling = amice::StirlingCache::new(n);
            let m = *mu.series().model();
            let values = (0..=n)
                .map(|k| amice::power_moment_with(&mu, k, &stirling).map(|v| io::element_to_json(&m, &v)))
                .collect::<crate::Result<Vec<_>>>()?;
            Ok(json!({"power_moments": values}))
        }
        Command::Bernoulli { n } => {
            check_order(n + 1, cap)?;
            Ok(json!({"B": io::rational_to_string(&amice::bernoulli(n)?)}))
        }
        Command::BaseChange { series, to } => {
            let f = load_series(&series, cap)?;
            let target = parse_model(&to, "--to")?;
            let m = RingMorphism::between(*f.model(), target)?;
            Ok(io::series_to_json(&amice::base_change_series(&f, &m)?))
        }
        Command::Norm {
            series,
            rho,
            element,
            model,
        } => {
            if let (Some(e), Some(model)) = (element, model) {
                let m = parse_model(&model, "--model")?;
                let x = io::element_from_json(&m, &Value::String(e), "--element")?;
                return Ok(json!({"norm": io::norm_to_json(&m.norm(&x)?)}));
            }
            let path = series.expect("clap enforces --series or --element");
            let f = load_series(&path, cap)?;
            let rho = parse_rational_arg(&rho, "--rho")?;
            let norm = match f.basis() {
                Basis::Monomial => f.ps_norm(&rho)?,
                Basis::Mahler => f.bs_norm(&rho)?,
                _ => weights::weighted_l1_norm(f.model(), f.coeffs(), f.tail(), &Weight::geometric(rho)?)?,
            };
            Ok(json!({"norm": io::norm_to_json(&norm)}))
        }
    }
}

fn render(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("serializable")
    } else {
        v.to_string()
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let pretty = cli.pretty;
    let (value, code) = match execute(cli.command) {
        Ok(v) => (v, 0),
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            (json!({"error": {"kind": "domain", "message": e.to_string()}}), 1)
        }
        Err(Failure::Schema(e)) => {
            let _ = writeln!(err, "error: {e}");
            (
                json!({"error": {"kind": "schema", "path": e.path, "message": e.message}}),
                2,
            )
        }
    };
    let _ = writeln!(out, "{}", render(&value, pretty));
    code
}
