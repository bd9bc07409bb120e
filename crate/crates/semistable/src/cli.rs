//! Subcommands and their text or JSON output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use semistable_core::census::{census, SingularityCensus};
use semistable_core::contractions::{build_contraction, enumerate_contractions, ContractionRecord};
use semistable_core::cover::{cover_data, verify_cover};
use semistable_core::exactmath::WeightVector;
use semistable_core::germs::{validate_germ, FibreSingularity, GermSpec};
use semistable_core::resolution::{duval_graph, hj_expansion, resolve_cyclic, DualGraph};

use crate::json::{
    isolatedness_name, parse_weights, ClassificationJson, CoverJson, EnumerationJson, FibreJson, GermJson, GraphJson,
    RecordJson, RejectionJson, ResolveJson,
};

#[derive(Debug, Parser)]
#[command(name = "semistable", version, about = "Divisorial contractions to semistable terminal germs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Germ description (JSON).
    pub spec: PathBuf,
    #[arg(long)]
    pub json: bool,
    /// Keep only `t·g` terms of `t`-degree at most this order in the isolatedness probe.
    #[arg(long)]
    pub trunc_order: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a germ and describe its special fibre.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Run the isolatedness probe.
        #[arg(long)]
        probe: bool,
    },
    /// List the weighted blowups within a bound.
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        bound: u64,
    },
    /// Build one weighted blowup.
    Blowup {
        #[command(flatten)]
        common: Common,
        /// Weights `a1,a2,a3/d`; defaults to the `weights` field of the germ file.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Singularities along the exceptional divisor.
    Census {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        weights: Option<String>,
    },
    /// Index-one cover data.
    Cover {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        weights: Option<String>,
    },
    /// Hirzebruch-Jung string of `1/r(1,q)`.
    Resolve {
        r: u64,
        q: u64,
        #[arg(long)]
        json: bool,
    },
}

/// Exit status 2: the input is well formed but mathematically rejected.
/// Exit status 3: the input could not be read or parsed.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Rejected(String),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Rejected(_) => 2,
            CliError::Input(_) => 3,
        }
    }
}

fn rejected(e: impl std::fmt::Display) -> CliError {
    CliError::Rejected(e.to_string())
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

pub fn read_spec(path: &Path) -> Result<GermJson, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load(common: &Common) -> Result<(GermJson, GermSpec), CliError> {
    let spec = read_spec(&common.spec)?;
    let raw = spec.to_raw().map_err(input)?;
    let germ = validate_germ(&raw).map_err(rejected)?;
    Ok((spec, germ))
}

fn weights_for(spec: &GermJson, flag: &Option<String>) -> Result<WeightVector, CliError> {
    let text = flag
        .as_deref()
        .or(spec.weights.as_deref())
        .ok_or_else(|| input("no weights: pass --weights a1,a2,a3/d or set \"weights\" in the spec"))?;
    parse_weights(text).map_err(input)
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn fibre_graph(fibre: &FibreSingularity) -> Option<DualGraph> {
    match fibre {
        FibreSingularity::CyclicQuotient(d) if d.r > 1 => Some(resolve_cyclic(d.r, d.q).expect("valid fibre quotient")),
        FibreSingularity::DuVal(t) => Some(duval_graph(*t).expect("valid Du Val type")),
        _ => None,
    }
}

fn describe_fibre(fibre: &FibreSingularity) -> String {
    match fibre {
        FibreSingularity::CyclicQuotient(d) if d.r == 1 => "smooth".into(),
        FibreSingularity::CyclicQuotient(d) => {
            let hj = hj_expansion(d.r, d.q).expect("valid fibre quotient");
            let mut s = format!("cyclic quotient 1/{}(1,{}), x = u^{kn}, y = v^{kn}, z = uv", d.r, d.q, kn = d.dictionary.kn);
            if let Some(t) = d.duval() {
                write!(s, " (Du Val {t})").unwrap();
            }
            write!(s, "; resolution {hj:?}").unwrap();
            s
        }
        FibreSingularity::DuVal(t) => format!("Du Val {t} fibre"),
        FibreSingularity::NonNormal => "not normal (xy = 0)".into(),
    }
}

fn germ_line(germ: &GermSpec) -> String {
    format!(
        "{} = 0 in 1/{}(1,-1,{},0), case {}",
        germ.total(),
        germ.n(),
        germ.a(),
        germ.case()
    )
}

pub fn classify(common: &Common, probe: bool) -> Result<String, CliError> {
    let (_, mut germ) = load(common)?;
    if probe {
        germ = germ.with_isolatedness_probe(common.trunc_order);
    }
    let fibre = germ.fibre_singularity();
    if common.json {
        return Ok(to_json(&ClassificationJson {
            germ: GermJson::from_germ(&germ),
            case: germ.case().to_string(),
            fibre: FibreJson::new(&fibre),
            resolution: fibre_graph(&fibre).as_ref().map(GraphJson::from),
            isolatedness: isolatedness_name(germ.isolatedness()).into(),
        }));
    }
    let mut out = String::new();
    writeln!(out, "germ: {}", germ_line(&germ)).unwrap();
    writeln!(out, "fibre: {}", describe_fibre(&fibre)).unwrap();
    writeln!(out, "isolated: {}", isolatedness_name(germ.isolatedness())).unwrap();
    Ok(out)
}

struct Derived {
    cover: Option<CoverJson>,
    census: Result<SingularityCensus, String>,
}

fn derive(record: &ContractionRecord) -> Derived {
    Derived {
        cover: cover_data(record).ok().map(|c| CoverJson::new(&c, verify_cover(record))),
        census: census(record).map_err(|e| e.to_string()),
    }
}

fn record_json(record: &ContractionRecord) -> RecordJson {
    let d = derive(record);
    RecordJson::new(record, d.cover, d.census.as_ref().map_err(Clone::clone))
}

fn write_record(out: &mut String, record: &ContractionRecord) {
    let d = derive(record);
    let [a1, a2, a3, dd] = record.ambient;
    writeln!(
        out,
        "w0 = {}  lambda = {}  a = {}  {}",
        record.w0,
        record.lambda,
        record.discrepancy,
        crate::json::status_name(record.contraction_status)
    )
    .unwrap();
    writeln!(out, "  E: {} = 0 in P({a1},{a2},{a3},{dd})", record.e_equation.display_with(crate::json::CAPITALS)).unwrap();
    if let Some(c) = &d.cover {
        let [l1, l2, l3, l4] = c.lifted_weights;
        writeln!(
            out,
            "  cover: d = {}, e = {}, weights ({l1},{l2},{l3},{l4}), discrepancy {}{}",
            c.d,
            c.e,
            c.covered_discrepancy,
            if c.verified { "" } else { " (MISMATCH)" }
        )
        .unwrap();
    }
    match &d.census {
        Ok(c) => write_census(out, c),
        Err(e) => writeln!(out, "  census: {e}").unwrap(),
    }
}

fn write_census(out: &mut String, c: &SingularityCensus) {
    writeln!(out, "  h(z) = {}", c.h.display_with(["x", "y", "z", "t"])).unwrap();
    if c.interior.is_empty() {
        writeln!(out, "  interior: none").unwrap();
    }
    for p in &c.interior {
        writeln!(out, "  interior: {} x {}", p.count, p.kind()).unwrap();
    }
    if let Some(o) = &c.origin {
        writeln!(out, "  origin: {o}").unwrap();
    }
    if c.reduced.divergent() {
        let series = c.reduced.l_series.map_or("none".to_string(), |l| l.to_string());
        writeln!(out, "  note: l = {series} from the series, {} from the fibre", c.reduced.l_fibre).unwrap();
    }
    for corner in &c.corners {
        let point = match corner.point {
            semistable_core::census::CornerPoint::X => "(1:0:0:0)",
            semistable_core::census::CornerPoint::Y => "(0:1:0:0)",
        };
        writeln!(out, "  corner {point}: {corner}").unwrap();
    }
}

pub fn enumerate(common: &Common, bound: u64) -> Result<String, CliError> {
    let (_, germ) = load(common)?;
    let found = enumerate_contractions(&germ, bound).map_err(rejected)?;
    if common.json {
        return Ok(to_json(&EnumerationJson {
            germ: GermJson::from_germ(&germ),
            bound,
            records: found.records.iter().map(record_json).collect(),
            rejected: found.rejected.iter().map(RejectionJson::from).collect(),
        }));
    }
    let mut out = String::new();
    writeln!(out, "germ: {}", germ_line(&germ)).unwrap();
    writeln!(out, "bound {bound}: {} contractions, {} rejected", found.records.len(), found.rejected.len()).unwrap();
    for record in &found.records {
        write_record(&mut out, record);
    }
    for r in &found.rejected {
        writeln!(out, "rejected {}: {}", r.w0, r.reason).unwrap();
    }
    Ok(out)
}

fn single(common: &Common, weights: &Option<String>) -> Result<ContractionRecord, CliError> {
    let (spec, germ) = load(common)?;
    let w0 = weights_for(&spec, weights)?;
    build_contraction(&germ, &w0).map_err(rejected)
}

pub fn blowup(common: &Common, weights: &Option<String>) -> Result<String, CliError> {
    let record = single(common, weights)?;
    if common.json {
        return Ok(to_json(&record_json(&record)));
    }
    let mut out = String::new();
    writeln!(out, "germ: {}", germ_line(&record.germ)).unwrap();
    write_record(&mut out, &record);
    Ok(out)
}

pub fn census_cmd(common: &Common, weights: &Option<String>) -> Result<String, CliError> {
    let record = single(common, weights)?;
    let c = census(&record).map_err(rejected)?;
    if common.json {
        return Ok(to_json(&crate::json::CensusJson::from(&c)));
    }
    let mut out = String::new();
    writeln!(out, "w0 = {}", record.w0).unwrap();
    write_census(&mut out, &c);
    Ok(out)
}

pub fn cover_cmd(common: &Common, weights: &Option<String>) -> Result<String, CliError> {
    let record = single(common, weights)?;
    let c = cover_data(&record).map_err(rejected)?;
    let json = CoverJson::new(&c, verify_cover(&record));
    if common.json {
        return Ok(to_json(&json));
    }
    let [l1, l2, l3, l4] = c.lifted_weights;
    Ok(format!(
        "w0 = {}  a = {}\nd = {}, e = {}, lifted weights ({l1},{l2},{l3},{l4}), covered discrepancy {}, verified {}\n",
        record.w0, record.discrepancy, c.d, c.e, c.covered_discrepancy, json.verified
    ))
}

pub fn resolve(r: u64, q: u64, json: bool) -> Result<String, CliError> {
    let hj = hj_expansion(r, q).map_err(rejected)?;
    if json {
        let graph = resolve_cyclic(r, q).map_err(rejected)?;
        return Ok(to_json(&ResolveJson { r, q, hj, graph: GraphJson::from(&graph) }));
    }
    let items: Vec<String> = hj.iter().map(u64::to_string).collect();
    Ok(format!("[{}]\n", items.join(",")))
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Classify { common, probe } => classify(common, *probe),
        Command::Enumerate { common, bound } => enumerate(common, *bound),
        Command::Blowup { common, weights } => blowup(common, weights),
        Command::Census { common, weights } => census_cmd(common, weights),
        Command::Cover { common, weights } => cover_cmd(common, weights),
        Command::Resolve { r, q, json } => resolve(*r, *q, *json),
    }
}
