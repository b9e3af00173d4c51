//! `exclie`: command-line access to the root-system, character and screening library.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use exclie_core::absfilt::{max_factor_dim, q_level_factors, verify_abs_shapes};
use exclie_core::catalogue::{verify_catalogue, ClaimOutcome};
use exclie_core::charcalc::{decompose_into_weyl, exterior_power_character, freudenthal_character, tensor_character, weyl_dim, Character};
use exclie_core::h1data::{default_h1_table, h1_status, H1Status};
use exclie_core::modp::{default_oracle, jantzen_sum, steinberg_decompose};
use exclie_core::rootcore::{build_root_system, RootSystemId, System, Weight};
use exclie_core::screen::{regenerate_corollary2, screen, Status};
use exclie_core::subgroups::{find_subsystem, levi_subgroups, special_isogeny_subsystems, subsystems_by_descent, ParabolicDatum, WeightMap};
use exclie_core::Error;

#[derive(Parser)]
#[command(name = "exclie", version, about = "Root systems, characters and complete-reducibility screening for exceptional groups")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Directory whose table files replace the bundled ones.
    #[arg(long, env = "EXCLIE_DATA_DIR", global = true)]
    data_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Positive roots, highest root and dimension of a simple type.
    Roots { ty: String },
    /// Dimension of the Weyl module V(weight).
    WeylDim { ty: String, weight: String },
    /// Dominant weight multiplicities of V(weight) (p = 0) or L(weight) (p > 0).
    Char {
        ty: String,
        weight: String,
        #[arg(long, default_value_t = 0)]
        p: u64,
    },
    /// Tensor product of two modules.
    Tensor {
        ty: String,
        left: String,
        right: String,
        #[arg(long, default_value_t = 0)]
        p: u64,
    },
    /// Exterior power of a module.
    Wedge {
        ty: String,
        #[arg(long)]
        module: String,
        #[arg(long)]
        power: usize,
        #[arg(long, default_value_t = 0)]
        p: u64,
        /// Decompose into Weyl characters (p = 0) or composition factors (p > 0).
        #[arg(long)]
        decompose: bool,
    },
    /// Restrict V(weight) to a subsystem given by label or by Levi nodes.
    Restrict {
        ty: String,
        weight: String,
        /// Subsystem label, e.g. A7 or A2A5.
        #[arg(long, conflicts_with = "levi")]
        to: Option<String>,
        /// One-based Levi nodes, e.g. 1,3,4.
        #[arg(long)]
        levi: Option<String>,
        /// Characteristic, used to find subsystems that exist only in characteristic p.
        #[arg(long, default_value_t = 0)]
        p: u64,
    },
    /// Steinberg tensor factorization of a weight.
    Steinberg {
        weight: String,
        #[arg(long)]
        p: u64,
    },
    /// Jantzen sum of V(weight) and its composition factors when known.
    Jantzen {
        ty: String,
        weight: String,
        #[arg(long)]
        p: u64,
    },
    /// Dimension of the simple module L(weight) in characteristic p.
    SimpleDim {
        ty: String,
        weight: String,
        #[arg(long)]
        p: u64,
    },
    /// Subsystems reached by Borel-de Siebenthal steps.
    Subsystems {
        ty: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Also list subsystems from the special isogeny in characteristic p.
        #[arg(long, default_value_t = 0)]
        p: u64,
    },
    /// Levi subgroups of the standard parabolics.
    Levis { ty: String },
    /// Levels of the unipotent radical of a parabolic as Levi modules.
    AbsLevels {
        ty: String,
        /// One-based Levi nodes.
        #[arg(long)]
        levi: String,
    },
    /// Check every level factor of every Levi against the allowed shapes.
    AbsVerify { ty: String },
    /// First cohomology of a simple module.
    H1 {
        ty: String,
        weight: String,
        #[arg(long)]
        p: u64,
    },
    /// Screen a triple (X, G, p).
    Screen { x: String, g: String, p: u64 },
    /// Screen every simple type in G at p and compare with the prime table.
    Corollary2 { g: String, p: u64 },
    /// Re-verify the numeric claims of the catalogue of examples.
    Catalogue,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Roots { .. } => "roots",
            Command::WeylDim { .. } => "weyl-dim",
            Command::Char { .. } => "char",
            Command::Tensor { .. } => "tensor",
            Command::Wedge { .. } => "wedge",
            Command::Restrict { .. } => "restrict",
            Command::Steinberg { .. } => "steinberg",
            Command::Jantzen { .. } => "jantzen",
            Command::SimpleDim { .. } => "simple-dim",
            Command::Subsystems { .. } => "subsystems",
            Command::Levis { .. } => "levis",
            Command::AbsLevels { .. } => "abs-levels",
            Command::AbsVerify { .. } => "abs-verify",
            Command::H1 { .. } => "h1",
            Command::Screen { .. } => "screen",
            Command::Corollary2 { .. } => "corollary2",
            Command::Catalogue => "catalogue",
        }
    }
}

/// Exit status classes.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    Ok,
    Domain,
    Gap,
}

impl Class {
    fn code(self) -> u8 {
        match self {
            Class::Ok => 0,
            Class::Domain => 1,
            Class::Gap => 2,
        }
    }
}

struct Report {
    class: Class,
    value: Value,
    text: String,
}

fn ok(value: Value, text: String) -> Report {
    Report { class: Class::Ok, value, text }
}

type Res = Result<Report, Error>;

fn ty(s: &str) -> Result<RootSystemId, Error> {
    s.parse()
}

fn weight_for(sys: &System, s: &str) -> Result<Weight, Error> {
    let w = Weight::parse_csv(s)?;
    if w.rank() != sys.rank() {
        return Err(Error::Mismatch(format!("weight {w} has {} coordinates, {} has rank {}", w.rank(), sys.label(), sys.rank())));
    }
    Ok(w)
}

fn nodes(s: &str, rank: usize) -> Result<Vec<usize>, Error> {
    let mut v = Vec::new();
    for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let n: usize = t.parse().map_err(|_| Error::Parse(format!("bad node {t:?}")))?;
        if n == 0 || n > rank {
            return Err(Error::Parse(format!("node {n} out of range 1..{rank}")));
        }
        v.push(n - 1);
    }
    v.sort();
    v.dedup();
    Ok(v)
}

fn dominant_json(c: &Character) -> Value {
    Value::Array(c.dominant_part().into_iter().rev().map(|(w, m)| json!({"weight": w.0, "mult": m})).collect())
}

fn dominant_text(c: &Character) -> String {
    c.dominant_part().into_iter().rev().map(|(w, m)| format!("{w}: {m}")).collect::<Vec<_>>().join("\n")
}

fn factors_json(f: &[(Weight, u32)]) -> Value {
    Value::Array(f.iter().map(|(w, m)| json!({"weight": w.0, "mult": m})).collect())
}

fn factors_text(f: &[(Weight, u32)]) -> String {
    f.iter().map(|(w, m)| if *m > 1 { format!("L{w} x{m}") } else { format!("L{w}") }).collect::<Vec<_>>().join(" + ")
}

fn weyl_terms_json(terms: &BTreeMap<Weight, i64>) -> Value {
    Value::Array(terms.iter().rev().map(|(w, k)| json!({"weight": w.0, "coeff": k})).collect())
}

/// Character of the module named by `weight`: V(weight) at p = 0, L(weight) otherwise.
fn module_character(sys: &System, w: &Weight, p: u64) -> Result<Character, Error> {
    if p == 0 {
        freudenthal_character(sys, w)
    } else {
        Ok(default_oracle().simple_character(sys, w, p)?.as_ref().clone())
    }
}

/// Weyl decomposition (p = 0) or composition factors (p > 0) of a character.
fn decompose(c: &Character, p: u64) -> Result<(Value, String), Error> {
    if p == 0 {
        let d = decompose_into_weyl(c)?;
        let maximal: Vec<Value> = c.dominant_maximal().into_iter().map(|w| json!(w.0)).collect();
        let max_text: Vec<String> = c.dominant_maximal().iter().map(|w| w.to_string()).collect();
        Ok((
            json!({"weyl": weyl_terms_json(&d.terms), "dominance_maximal": maximal}),
            format!("{d}\ndominance-maximal: {}", max_text.join(" ")),
        ))
    } else {
        let f = default_oracle().composition_factors_of_character(c, p)?;
        Ok((json!({"factors": factors_json(&f)}), factors_text(&f)))
    }
}

fn run(cmd: &Command) -> Res {
    match cmd {
        Command::Roots { ty: t } => {
            let id = ty(t)?;
            let sys = build_root_system(id);
            let roots: Vec<Value> = sys.positive_roots().iter().map(|r| json!({"coeffs": r.coeffs, "height": r.height, "length": r.length})).collect();
            let high = sys.highest_root().map(|r| r.coeffs.clone()).unwrap_or_default();
            let mut text = format!(
                "{id}: rank {}, {} positive roots, dimension {}, Weyl group order {}\nhighest root {:?}\n",
                id.rank,
                roots.len(),
                sys.dimension(),
                sys.weyl_order(),
                high
            );
            for r in sys.positive_roots() {
                let _ = writeln!(text, "{:?} height {} length {}", r.coeffs, r.height, r.length);
            }
            Ok(ok(
                json!({"type": id, "rank": id.rank, "positive_roots": roots.len(), "dimension": sys.dimension(), "weyl_order": sys.weyl_order().to_string(), "highest_root": high, "cartan": sys.cartan(), "roots": roots}),
                text.trim_end().to_string(),
            ))
        }
        Command::WeylDim { ty: t, weight } => {
            let sys = build_root_system(ty(t)?);
            let w = weight_for(&sys, weight)?;
            let d = weyl_dim(&sys, &w)?;
            Ok(ok(json!({"type": ty(t)?, "weight": w.0, "dim": d.to_string()}), d.to_string()))
        }
        Command::Char { ty: t, weight, p } => {
            let sys = build_root_system(ty(t)?);
            let w = weight_for(&sys, weight)?;
            let c = module_character(&sys, &w, *p)?;
            Ok(ok(
                json!({"type": ty(t)?, "weight": w.0, "p": p, "dim": c.dim(), "dominant": dominant_json(&c)}),
                format!("dim {}\n{}", c.dim(), dominant_text(&c)),
            ))
        }
        Command::Tensor { ty: t, left, right, p } => {
            let sys = build_root_system(ty(t)?);
            let (a, b) = (weight_for(&sys, left)?, weight_for(&sys, right)?);
            let c = tensor_character(&module_character(&sys, &a, *p)?, &module_character(&sys, &b, *p)?)?;
            let (v, text) = decompose(&c, *p)?;
            Ok(ok(json!({"type": ty(t)?, "left": a.0, "right": b.0, "p": p, "dim": c.dim(), "decomposition": v}), format!("dim {}\n{text}", c.dim())))
        }
        Command::Wedge { ty: t, module, power, p, decompose: dec } => {
            let sys = build_root_system(ty(t)?);
            let w = weight_for(&sys, module)?;
            let c = exterior_power_character(&module_character(&sys, &w, *p)?, *power)?;
            let mut value = json!({"type": ty(t)?, "module": w.0, "power": power, "p": p, "dim": c.dim(), "dominant": dominant_json(&c)});
            let mut text = format!("dim {}\n{}", c.dim(), dominant_text(&c));
            if *dec {
                let (v, d) = decompose(&c, *p)?;
                value["decomposition"] = v;
                text = format!("dim {}\n{d}", c.dim());
            }
            Ok(ok(value, text))
        }
        Command::Restrict { ty: t, weight, to, levi, p } => {
            let id = ty(t)?;
            let sys = build_root_system(id);
            let w = weight_for(&sys, weight)?;
            let (label, map): (String, WeightMap) = match (to, levi) {
                (Some(l), _) => {
                    let s = find_subsystem(id, l, *p).ok_or_else(|| Error::Unsupported(format!("no subsystem {l} in {id}")))?;
                    (s.label(), s.weight_map())
                }
                (None, Some(n)) => {
                    let pd = ParabolicDatum::new(id, &nodes(n, id.rank)?);
                    (format!("{} {}", pd.levi_type(), pd.node_label()), pd.levi.weight_map())
                }
                (None, None) => return Err(Error::Parse("give --to LABEL or --levi NODES".into())),
            };
            let c = map.restrict(&freudenthal_character(&sys, &w)?)?;
            let d = decompose_into_weyl(&c)?;
            Ok(ok(json!({"type": id, "weight": w.0, "subsystem": label, "dim": c.dim(), "weyl": weyl_terms_json(&d.terms)}), format!("{id} V{w} on {label}: {d}")))
        }
        Command::Steinberg { weight, p } => {
            let w = Weight::parse_csv(weight)?;
            let st = steinberg_decompose(&w, *p)?;
            let f: Vec<Value> = st.factors.iter().map(|(w, t)| json!({"weight": w.0, "twist": t})).collect();
            Ok(ok(json!({"weight": w.0, "p": p, "factors": f}), st.to_string()))
        }
        Command::Jantzen { ty: t, weight, p } => {
            let sys = build_root_system(ty(t)?);
            let w = weight_for(&sys, weight)?;
            let js = jantzen_sum(&sys, &w, *p)?;
            let mut value = json!({"type": ty(t)?, "weight": w.0, "p": p, "jantzen_sum": weyl_terms_json(&js.terms)});
            let mut text = format!("Jantzen sum: {js}");
            match default_oracle().composition_factors(&sys, &w, *p) {
                Ok(f) => {
                    value["factors"] = factors_json(&f);
                    let _ = write!(text, "\ncomposition factors: {}", factors_text(&f));
                }
                Err(e) if e.is_gap() => {
                    value["factors"] = Value::Null;
                    let _ = write!(text, "\ncomposition factors: {e}");
                }
                Err(e) => return Err(e),
            }
            Ok(ok(value, text))
        }
        Command::SimpleDim { ty: t, weight, p } => {
            let sys = build_root_system(ty(t)?);
            let w = weight_for(&sys, weight)?;
            let d = default_oracle().simple_dim(&sys, &w, *p)?;
            Ok(ok(json!({"type": ty(t)?, "weight": w.0, "p": p, "dim": d.to_string()}), d.to_string()))
        }
        Command::Subsystems { ty: t, depth, p } => {
            let id = ty(t)?;
            let mut subs = subsystems_by_descent(id, *depth);
            if *p != 0 {
                subs.extend(special_isogeny_subsystems(id, *p));
            }
            let rows: Vec<Value> = subs.iter().map(|s| json!({"label": s.label(), "closed": s.is_closed()})).collect();
            let text = subs.iter().map(|s| if s.is_closed() { s.label() } else { format!("{} (non-closed)", s.label()) }).collect::<Vec<_>>().join("\n");
            Ok(ok(json!({"type": id, "depth": depth, "p": p, "subsystems": rows}), text))
        }
        Command::Levis { ty: t } => {
            let id = ty(t)?;
            let pds = levi_subgroups(id);
            let rows: Vec<Value> = pds.iter().map(|pd| json!({"levi": pd.levi_type(), "nodes": pd.node_label(), "q_dim": pd.q_roots.len()})).collect();
            let text = pds.iter().map(|pd| format!("{} {} dim Q = {}", pd.levi_type(), pd.node_label(), pd.q_roots.len())).collect::<Vec<_>>().join("\n");
            Ok(ok(json!({"type": id, "levis": rows}), text))
        }
        Command::AbsLevels { ty: t, levi } => {
            let id = ty(t)?;
            let pd = ParabolicDatum::new(id, &nodes(levi, id.rank)?);
            let levels = q_level_factors(&pd)?;
            let mut text = format!("{} {} in {id}", pd.levi_type(), pd.node_label());
            for l in &levels {
                for f in &l.factors {
                    let _ = write!(text, "\nlevel {} shape {:?}: V{} dim {}", l.level_index, f.shape, f.weight, f.dim);
                }
            }
            let rows: Vec<Value> = levels
                .iter()
                .map(|l| {
                    let fs: Vec<Value> = l.factors.iter().map(|f| json!({"shape": f.shape, "weight": f.weight.0, "dim": f.dim.to_string()})).collect();
                    json!({"level": l.level_index, "factors": fs})
                })
                .collect();
            Ok(ok(json!({"type": id, "levi": pd.levi_type(), "nodes": pd.node_label(), "levels": rows}), text))
        }
        Command::AbsVerify { ty: t } => {
            let id = ty(t)?;
            let r = verify_abs_shapes(id)?;
            let (d, w) = max_factor_dim(id, true)?;
            let text = format!(
                "{id}: {} Levis, {} factors, {} violations; largest factor without A1 components: {d} at {}",
                r.levis_checked,
                r.factors_checked,
                r.violations.len(),
                w.levi_type()
            );
            let class = if r.passed() { Class::Ok } else { Class::Domain };
            Ok(Report {
                class,
                value: json!({"type": id, "levis_checked": r.levis_checked, "factors_checked": r.factors_checked, "violations": r.violations, "max_factor_dim": d.to_string(), "max_witness": w.levi_type()}),
                text,
            })
        }
        Command::H1 { ty: t, weight, p } => {
            let sys = build_root_system(ty(t)?);
            let w = weight_for(&sys, weight)?;
            let st = h1_status(default_oracle(), default_h1_table(), &sys, *p, &w);
            let (class, word) = match &st {
                H1Status::NonZero { .. } => (Class::Ok, "non-zero"),
                H1Status::Zero { .. } => (Class::Ok, "zero"),
                H1Status::Unknown { .. } => (Class::Gap, "unknown"),
            };
            Ok(Report {
                class,
                value: json!({"type": ty(t)?, "weight": w.0, "p": p, "h1": st}),
                text: format!("H^1({}, L{w}) at p={p}: {word} ({})", sys.label(), st.reason()),
            })
        }
        Command::Screen { x, g, p } => {
            let v = screen(ty(x)?, ty(g)?, *p);
            let mut text = format!("({},{},{}): {}  [{} Levis considered]", v.x, v.g, v.p, v.status, v.levis_considered);
            for t in &v.trail {
                let _ = write!(text, "\n  {:?} | {} | {} | {} | {}", t.outcome, t.levi, t.embedding, t.factor, t.reason);
            }
            let class = match v.status {
                Status::RuledOut | Status::CandidateFound => Class::Ok,
                Status::NeedsManual | Status::NotCovered => Class::Gap,
            };
            Ok(Report { class, value: serde_json::to_value(&v).expect("verdict serializes"), text })
        }
        Command::Corollary2 { g, p } => {
            let r = regenerate_corollary2(default_oracle(), default_h1_table(), ty(g)?, *p);
            let mut text = format!(
                "{} p={}: flagged {:?}\nexpected {:?}\nmissing {:?}\nextra {:?}",
                r.g, r.p, r.flagged, r.expected, r.missing, r.extra
            );
            for (x, s) in &r.verdicts {
                let _ = write!(text, "\n  {x}: {s}");
            }
            Ok(ok(serde_json::to_value(&r).expect("report serializes"), text))
        }
        Command::Catalogue => {
            let r = verify_catalogue()?;
            let mut text = format!("{} rows: {} passed, {} failed, {} structural skipped", r.rows, r.passed, r.failed, r.skipped);
            for c in &r.results {
                let tag = match c.outcome {
                    ClaimOutcome::Passed => "pass",
                    ClaimOutcome::Failed => "FAIL",
                    ClaimOutcome::Skipped => "skip",
                };
                let _ = write!(text, "\n  {tag} {} {}", c.row, c.claim);
                if c.outcome == ClaimOutcome::Failed {
                    let _ = write!(text, ": {}", c.detail);
                }
            }
            let class = if r.failed == 0 { Class::Ok } else { Class::Domain };
            Ok(Report { class, value: serde_json::to_value(&r).expect("report serializes"), text })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(dir) = &cli.data_dir {
        // Table loaders read this variable on first use.
        std::env::set_var("EXCLIE_DATA_DIR", dir);
    }
    let name = cli.command.name();
    let (class, value, text) = match exclie_core::check_data_overrides().and_then(|_| run(&cli.command)) {
        Ok(r) => (r.class, json!({"command": name, "exit": r.class.code(), "result": r.value}), r.text),
        Err(e) => {
            let class = if e.is_gap() { Class::Gap } else { Class::Domain };
            let kind = if e.is_gap() { "unknown" } else { "error" };
            (class, json!({"command": name, "exit": class.code(), "error": {"kind": kind, "message": e.to_string()}}), format!("{kind}: {e}"))
        }
    };
    match cli.format {
        // A closed pipe downstream is not an error of ours.
        Format::Json => {
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&value).expect("json output"));
        }
        Format::Text if class == Class::Ok => {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
        Format::Text => {
            let _ = writeln!(std::io::stderr().lock(), "{text}");
        }
    }
    ExitCode::from(class.code())
}
