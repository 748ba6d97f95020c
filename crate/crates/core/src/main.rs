use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use shimura_genus1::arith::{format_rational, parse_rational};
use shimura_genus1::catalog::{self, Scope};
use shimura_genus1::classfield::QuadOrder;
use shimura_genus1::fields::{self, FieldSpec};
use shimura_genus1::models::{self, CurvePoint, EllipticCurve, GenusOneModel};
use shimura_genus1::shimura::{self, Level};
use shimura_genus1::{QPoly, Rational};

#[derive(Parser)]
#[command(name = "shimura", version, about = "Exact models and CM data for genus-one Shimura curves")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Genus of X_0(D, N).
    Genus {
        #[arg(long = "D")]
        d: u64,
        #[arg(long = "N")]
        n: u64,
    },
    /// Levels of genus one with DN up to a bound.
    Scan {
        #[arg(long)]
        max_dn: u64,
    },
    /// CM points by an order of the given discriminant.
    Cm {
        #[arg(long = "D")]
        d: u64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        /// Only the number of points.
        #[arg(long, conflicts_with = "field")]
        count: bool,
        /// Fields of definition of the points.
        #[arg(long)]
        field: bool,
    },
    /// Fixed points of an Atkin-Lehner involution and the fields they generate.
    FixedPoints {
        #[arg(long = "D")]
        d: u64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        m: u64,
        /// Work on the quotient by this involution.
        #[arg(long)]
        quotient: Option<u64>,
    },
    /// Quartic model attached to a point of the twist E_d.
    Descent {
        #[arg(long = "A", allow_hyphen_values = true)]
        a: String,
        #[arg(long = "B", allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        /// Point `x,y` on the twist, or `inf`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Select the descent class whose splitting field is the target field.
    Method1 {
        #[arg(long = "A", allow_hyphen_values = true)]
        a: String,
        #[arg(long = "B", allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        /// JSON list of representatives of E_d / 2E_d, each `["x","y"]` or `"inf"`.
        #[arg(long)]
        points: PathBuf,
        /// Field spec as JSON, e.g. `{"type":"biquadratic","m":[-14,10]}`.
        #[arg(long)]
        target_field: String,
    },
    /// Quartic models from the rational 2-torsion of E'.
    Method2 {
        #[arg(long = "Aprime", allow_hyphen_values = true)]
        a: String,
        #[arg(long = "Bprime", allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        /// `A,B` of the curve the model's Jacobian must be isomorphic to.
        #[arg(long, allow_hyphen_values = true)]
        target_jacobian: Option<String>,
    },
    /// Galois closure data of a quartic's splitting field or of a field spec.
    Fingerprint {
        /// Coefficients `a0,a1,a2,a3,a4`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "field", required_unless_present = "field")]
        quartic: Option<String>,
        #[arg(long)]
        field: Option<String>,
    },
    /// Re-derive the embedded datasets.
    Verify {
        #[arg(long, default_value = "all")]
        scope: Scope,
    },
}

fn rational(s: &str) -> Result<Rational> {
    parse_rational(s.trim()).with_context(|| format!("not a rational: {s}"))
}

fn rationals(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(rational).collect()
}

fn point(s: &str) -> Result<CurvePoint> {
    if s.trim() == "inf" {
        return Ok(CurvePoint::Infinity);
    }
    match rationals(s)?.as_slice() {
        [x, y] => Ok(CurvePoint::affine(x.clone(), y.clone())),
        _ => bail!("a point is `x,y` or `inf`"),
    }
}

fn curve(a: &str, b: &str) -> Result<EllipticCurve> {
    Ok(EllipticCurve::new(rational(a)?, rational(b)?)?)
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Text => println!("{}", text()),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let f = cli.format;
    match cli.command {
        Command::Genus { d, n } => {
            let g = shimura::genus(&Level::new(d, n)?)?;
            emit(f, &g, || g.to_string())?;
        }
        Command::Scan { max_dn } => {
            let levels = shimura::scan_genus_one(max_dn);
            emit(f, &levels, || levels.iter().map(|l| format!("({},{})", l.d, l.n)).collect::<Vec<_>>().join("\n"))?;
        }
        Command::Cm { d, n, disc, count, field } => {
            let level = Level::new(d, n)?;
            let r = QuadOrder::new(disc)?;
            if field {
                let fods = shimura::cm_field_of_definition(&level, &r)?;
                emit(f, &fods, || {
                    fods.iter()
                        .map(|x| format!("degree {} closure {}", x.degree_over_q, x.fingerprint))
                        .collect::<Vec<_>>()
                        .join("\n")
                })?;
            } else {
                let locus = shimura::cm_locus(&level, &r)?;
                if count {
                    emit(f, &locus.count, || locus.count.to_string())?;
                } else {
                    emit(f, &locus, || {
                        format!("disc {} h {} nonempty {} count {}", locus.disc, locus.h, locus.nonempty, locus.count)
                    })?;
                }
            }
        }
        Command::FixedPoints { d, n, m, quotient } => {
            let level = Level::new(d, n)?;
            let rep = match quotient {
                Some(q) => shimura::quotient_fixed_points(&level, q, m)?,
                None => shimura::fixed_points(&level, m)?,
            };
            emit(f, &rep, || {
                let mut lines = vec![format!("count {}", rep.count)];
                for l in rep.loci.iter().filter(|l| l.locus.nonempty) {
                    lines.push(format!(
                        "w{} disc {} h {} points {}",
                        l.involution, l.locus.disc, l.locus.h, l.locus.count
                    ));
                }
                lines.extend(rep.candidates.iter().map(|c| format!("field {c}")));
                lines.join("\n")
            })?;
        }
        Command::Descent { a, b, d, point: p } => {
            let e = curve(&a, &b)?;
            let d = rational(&d)?;
            let twist = e.twist(&d);
            let q = models::descent_quartic(&twist, &point(&p)?)?;
            let model = GenusOneModel::new(d, q)?;
            emit(f, &model, || model.to_string())?;
        }
        Command::Method1 { a, b, d, points, target_field } => {
            let e = curve(&a, &b)?;
            let text = std::fs::read_to_string(&points).with_context(|| format!("reading {}", points.display()))?;
            let reps: Vec<CurvePoint> = serde_json::from_str(&text)?;
            let target: FieldSpec = serde_json::from_str(&target_field)?;
            let sel = catalog::select_descent_model(&e, &rational(&d)?, &reps, &target)?;
            emit(f, &sel, || {
                sel.candidates
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let tag = if Some(i) == sel.selected { "selected" } else { "rejected" };
                        format!("{tag} P = {}: {} [{}]", c.point, c.model, c.fingerprint)
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            })?;
        }
        Command::Method2 { a, b, d, target_jacobian } => {
            let target = match target_jacobian {
                Some(s) => match rationals(&s)?.as_slice() {
                    [ta, tb] => Some(EllipticCurve::new(ta.clone(), tb.clone())?),
                    _ => bail!("--target-jacobian takes `A,B`"),
                },
                None => None,
            };
            let cands = models::criterion_candidates(&rational(&a)?, &rational(&b)?, &rational(&d)?, target.as_ref())?;
            let wire: Vec<_> = cands
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "u0": format_rational(&c.u0),
                        "model": c.model.as_ref().ok(),
                        "error": c.model.as_ref().err().map(|e| e.to_string()),
                        "matches_target": c.matches_target,
                    })
                })
                .collect();
            emit(f, &wire, || {
                cands
                    .iter()
                    .map(|c| match &c.model {
                        Ok(m) => format!("u0 = {}: {} target {:?}", c.u0, m, c.matches_target),
                        Err(e) => format!("u0 = {}: {e}", c.u0),
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            })?;
        }
        Command::Fingerprint { quartic, field } => {
            let fp = match (quartic, field) {
                (Some(q), _) => fields::splitting_fingerprint(&QPoly::new(rationals(&q)?))?,
                (None, Some(s)) => fields::fingerprint_of_spec(&serde_json::from_str(&s)?)?,
                (None, None) => bail!("give --quartic or --field"),
            };
            emit(f, &fp, || fp.to_string())?;
        }
        Command::Verify { scope } => {
            let report = catalog::verify_all(scope)?;
            emit(f, &report, || {
                let mut lines: Vec<String> = report
                    .checks
                    .iter()
                    .map(|c| {
                        let status = if c.passed { "PASS" } else { "FAIL" };
                        let note = c.erratum.as_ref().map(|e| format!(" [erratum {e}]")).unwrap_or_default();
                        format!("{status} {:<11} {}{note}", c.scope.to_string(), c.name)
                    })
                    .collect();
                lines.push(format!("{} passed, {} failed", report.passed, report.failed));
                lines.join("\n")
            })?;
            return Ok(report.all_passed);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
