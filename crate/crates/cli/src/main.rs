use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use trop_core::cycle::{
    intersection_number_of_hypersurfaces_seeded, stable_intersection_number, stable_product_seeded,
    tropical_hypersurface, IntersectionResult, TropicalCycle,
};
use trop_core::fan::fan_covers_support;
use trop_core::io::{self, format_rational};
use trop_core::kp::{class_of_polytope, ring_of_fan, simplicial_chamber, top_pairing, volume_polynomial};
use trop_core::lattice::RationalVector;
use trop_core::polytope::{minkowski_sum, mixed_volume, Polytope};
use trop_core::{BigInt, BigRational, Error, Result};

#[derive(Parser, Debug)]
#[command(name = "trop", version, about = "Exact tropical intersection theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Seed for the generic displacement vector.
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,

    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the balancing condition of a cycle.
    Balance { cycle: PathBuf },
    /// Sum of two cycles of equal dimension.
    Sum { a: PathBuf, b: PathBuf },
    /// Intersection number of complementary cycles, or their stable product.
    Intersect { a: PathBuf, b: PathBuf },
    /// Tropical degree, n!·MV and (with --fan) the top pairing of n polytopes.
    Degree {
        #[arg(required = true)]
        polytopes: Vec<PathBuf>,
        /// Fan file with an "h0" entry, or "auto" for a fan refining all normal fans.
        #[arg(long)]
        fan: Option<String>,
    },
    /// Tropical hypersurface of a lattice polytope.
    Hypersurface { polytope: PathBuf },
    /// Mixed volume of n polytopes in R^n.
    MixedVolume {
        #[arg(required = true)]
        polytopes: Vec<PathBuf>,
    },
    /// Graded ring of a complete simplicial fan with an "h0" entry.
    KpRing { fan: PathBuf },
    /// Top pairing of the classes of n polytopes on a fan.
    TopPairing {
        fan: PathBuf,
        #[arg(required = true)]
        polytopes: Vec<PathBuf>,
    },
    /// Whether the support of a cycle lies in the support of a fan.
    Covers { fan: PathBuf, cycle: PathBuf },
    /// Whether two cycles are equivalent.
    Equivalent { a: PathBuf, b: PathBuf },
}

/// Failures, split by exit code.
enum Failure {
    /// Exit 1: unreadable or malformed input.
    Input(String),
    /// Exit 2: well-formed input the mathematics rejects.
    Domain(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Input(m),
            e => Failure::Domain(json!({"kind": e.kind(), "message": e.to_string()})),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_polytope(path: &Path) -> CliResult<Polytope> {
    Ok(io::polytope_from_json(&read(path)?).map_err(|e| with_path(e, path))?)
}

fn load_polytopes(paths: &[PathBuf]) -> CliResult<Vec<Polytope>> {
    paths.iter().map(|p| load_polytope(p)).collect()
}

fn load_cycle(path: &Path, checked: bool) -> CliResult<TropicalCycle> {
    Ok(io::cycle_from_json(&read(path)?, checked).map_err(|e| with_path(e, path))?)
}

fn load_fan(path: &Path) -> CliResult<(trop_core::fan::Fan, Option<RationalVector>)> {
    Ok(io::fan_from_json(&read(path)?).map_err(|e| with_path(e, path))?)
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        e => e,
    }
}

fn q(x: &BigRational) -> Value {
    Value::String(format_rational(x))
}

fn qvec(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("documents serialize")
}

fn factorial(n: usize) -> BigRational {
    (1..=n).fold(BigRational::from_integer(BigInt::from(1)), |a, k| a * BigRational::from_integer(BigInt::from(k)))
}

fn intersection_json(r: &IntersectionResult) -> Value {
    let pairs: Vec<Value> = r
        .contributing_pairs
        .iter()
        .map(|p| {
            json!({
                "left": p.left,
                "right": p.right,
                "lattice_index": p.lattice_index.to_string(),
                "product": q(&p.product),
            })
        })
        .collect();
    json!({
        "value": q(&r.value),
        "pairs": pairs,
        "seed": r.seed,
        "displacement": qvec(&r.displacement),
    })
}

fn run(cli: &Cli) -> CliResult<Value> {
    match &cli.command {
        Command::Balance { cycle } => {
            let c = load_cycle(cycle, false)?;
            match c.balance_violation() {
                None => Ok(json!({"balanced": true})),
                Some(v) => Err(Failure::Domain(json!({
                    "kind": "unbalanced",
                    "message": format!("cycle is not balanced at cone {v}"),
                    "ridge": to_value(&io::ConeDoc {
                        rays: v.ridge.rays().iter().map(|r| io::int_nums(r)).collect(),
                        lineality: v.ridge.lineality().iter().map(|r| io::int_nums(r)).collect(),
                    }),
                    "residual": qvec(&v.residual),
                }))),
            }
        }
        Command::Sum { a, b } => {
            let s = load_cycle(a, true)?.add(&load_cycle(b, true)?)?;
            Ok(to_value(&io::cycle_to_doc(&s)))
        }
        Command::Intersect { a, b } => {
            let (a, b) = (load_cycle(a, true)?, load_cycle(b, true)?);
            if a.dim() + b.dim() == a.ambient_dim() && a.ambient_dim() == b.ambient_dim() {
                Ok(intersection_json(&stable_intersection_number(&a, &b, cli.seed)?))
            } else {
                let p = stable_product_seeded(&a, &b, cli.seed)?;
                Ok(json!({"product": to_value(&io::cycle_to_doc(&p))}))
            }
        }
        Command::Degree { polytopes, fan } => degree(cli, polytopes, fan.as_deref()),
        Command::Hypersurface { polytope } => {
            let h = tropical_hypersurface(&load_polytope(polytope)?)?;
            Ok(to_value(&io::cycle_to_doc(&h)))
        }
        Command::MixedVolume { polytopes } => {
            let ps = load_polytopes(polytopes)?;
            let mv = mixed_volume(&ps)?;
            let bkk = &mv * factorial(ps.len());
            Ok(json!({"mixed_volume": q(&mv), "bkk": q(&bkk)}))
        }
        Command::KpRing { fan } => {
            let (fan, h0) = load_fan(fan)?;
            let h0 = h0.ok_or_else(|| Failure::Input("kp-ring needs an \"h0\" entry in the fan file".into()))?;
            let (v, ring) = ring_of_fan(&fan, &h0)?;
            let mut pairing = Map::new();
            for (k, m) in ring.pairings.iter().enumerate() {
                pairing.insert(k.to_string(), Value::Array(m.iter().map(|r| qvec(r)).collect()));
            }
            let bases: Vec<Value> = ring.bases.iter().map(|b| json!(b)).collect();
            Ok(json!({
                "dims": ring.dims(),
                "pairing": pairing,
                "pairing_normalization": "n!V",
                "smooth_fan": ring.smooth_fan,
                "bases": bases,
                "rays": v.rays.iter().map(|r| to_value(&io::int_nums(r))).collect::<Vec<_>>(),
                "volume_polynomial": v.polynomial.to_string(),
            }))
        }
        Command::TopPairing { fan, polytopes } => {
            let (fan, h0) = load_fan(fan)?;
            let h0 = h0.ok_or_else(|| Failure::Input("top-pairing needs an \"h0\" entry in the fan file".into()))?;
            let ps = load_polytopes(polytopes)?;
            let v = volume_polynomial(&fan, &h0)?;
            let classes: Vec<RationalVector> = ps.iter().map(|p| class_of_polytope(&fan, p)).collect::<Result<_>>()?;
            let value = top_pairing(&v, &classes)?;
            Ok(json!({
                "top_pairing": q(&value),
                "classes": classes.iter().map(|c| qvec(c)).collect::<Vec<_>>(),
            }))
        }
        Command::Covers { fan, cycle } => {
            let (fan, _) = load_fan(fan)?;
            let c = load_cycle(cycle, false)?;
            if fan.ambient_dim() != c.ambient_dim() {
                return Err(Error::DimensionMismatch { expected: fan.ambient_dim(), found: c.ambient_dim() }.into());
            }
            Ok(json!({"covers": fan_covers_support(&fan, &c.support())}))
        }
        Command::Equivalent { a, b } => {
            let (a, b) = (load_cycle(a, false)?, load_cycle(b, false)?);
            Ok(json!({"equivalent": a.equivalent(&b)}))
        }
    }
}

fn degree(cli: &Cli, paths: &[PathBuf], fan: Option<&str>) -> CliResult<Value> {
    let ps = load_polytopes(paths)?;
    let mv = mixed_volume(&ps)?;
    let bkk = &mv * factorial(ps.len());
    let (tropical, audit) = intersection_number_of_hypersurfaces_seeded(&ps, cli.seed)?;
    let mut out = json!({
        "tropical": q(&tropical),
        "mixed_volume": q(&mv),
        "bkk": q(&bkk),
        "seed": audit.seed,
    });
    let mut agree = tropical == bkk;
    if let Some(fan_arg) = fan {
        let (fan, h0) = if fan_arg == "auto" {
            let sum = ps[1..].iter().try_fold(ps[0].clone(), |acc, p| minkowski_sum(&acc, p))?;
            simplicial_chamber(&sum)?
        } else {
            let (fan, h0) = load_fan(Path::new(fan_arg))?;
            let h0 = h0.ok_or_else(|| Failure::Input(format!("{fan_arg}: fan needs an \"h0\" entry")))?;
            (fan, h0)
        };
        let v = volume_polynomial(&fan, &h0)?;
        let classes: Vec<RationalVector> = ps.iter().map(|p| class_of_polytope(&fan, p)).collect::<Result<_>>()?;
        let tp = top_pairing(&v, &classes)?;
        agree &= tp == bkk;
        out["top_pairing"] = q(&tp);
    }
    if !agree {
        return Err(Failure::Domain(json!({
            "kind": "disagreement",
            "message": "tropical degree, n!·MV and top pairing differ",
            "values": out,
        })));
    }
    Ok(out)
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for i in items {
                            out.push_str(&format!("{pad}  -\n"));
                            render_text(i, indent + 2, out);
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar_text(x))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(scalar_text).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("serializable") + "\n",
        Format::Text => {
            let mut s = String::new();
            render_text(v, 0, &mut s);
            s
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => {
            let text = render(&v, cli.format);
            match &cli.output {
                Some(path) => {
                    if let Err(e) = fs::write(path, text) {
                        eprintln!("{}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            print!("{}", render(&json!({"error": {"kind": "input", "message": msg}}), cli.format));
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(obj)) => {
            print!("{}", render(&json!({"error": obj}), cli.format));
            ExitCode::from(2)
        }
    }
}
