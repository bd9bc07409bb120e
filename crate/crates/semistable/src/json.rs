//! JSON forms of germs, contraction records and their derived data.
//!
//! Rationals are always strings `"p/q"` (or `"p"`); polynomials are lists of
//! `{"coeff": ..., "exp": [i, j, k, l]}` in the variables `x, y, z, t`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use semistable_core::census::{Corner, CornerPoint, SingularityCensus};
use semistable_core::contractions::{ContractionRecord, ContractionStatus, Rejection};
use semistable_core::cover::CoverData;
use semistable_core::exactmath::{Rational, WeightVector};
use semistable_core::germs::{CaseTag, FibreSingularity, GermSpec, Isolatedness, RawGerm};
use semistable_core::polyweights::SparsePoly;
use semistable_core::resolution::DualGraph;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("bad rational {0:?}")]
    Rational(String),
    #[error("bad weight vector {0:?}: {1}")]
    Weights(String, String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// A coefficient as written in input: a JSON integer or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Int(i64),
    Text(String),
}

impl CoeffJson {
    pub fn to_rational(&self) -> Result<Rational, FormatError> {
        match self {
            CoeffJson::Int(i) => Ok(Rational::from_integer((*i).into())),
            CoeffJson::Text(s) => Rational::from_str(s.trim()).map_err(|_| FormatError::Rational(s.clone())),
        }
    }
}

pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: CoeffJson,
    pub exp: [u32; 4],
}

pub fn poly_to_json(p: &SparsePoly) -> Vec<TermJson> {
    p.terms().map(|(e, c)| TermJson { coeff: CoeffJson::Text(rational_string(c)), exp: *e }).collect()
}

pub fn poly_from_json(terms: &[TermJson]) -> Result<SparsePoly, FormatError> {
    let mut out = SparsePoly::zero();
    for t in terms {
        out.add_term(t.exp, t.coeff.to_rational()?);
    }
    Ok(out)
}

pub fn parse_weights(s: &str) -> Result<WeightVector, FormatError> {
    s.parse().map_err(|e| FormatError::Weights(s.to_string(), format!("{e}")))
}

/// Input germ description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermJson {
    pub n: u64,
    pub a: i64,
    /// `"T"`, `"D"`, `"E6"`, `"E7"`, `"E8"`, or `"N"` for the non-normal `xy` form.
    pub case: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    /// Optional explicit `f`, checked against the normal form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<TermJson>>,
    #[serde(default)]
    pub g: Vec<TermJson>,
    #[serde(default)]
    pub rho_one: bool,
    /// Optional default weights `"a1,a2,a3/d"` for `blowup`, `census`, `cover`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<String>,
}

pub fn case_tag(s: &str) -> Option<CaseTag> {
    Some(match s {
        "T" => CaseTag::T,
        "D" => CaseTag::D,
        "E6" => CaseTag::E6,
        "E7" => CaseTag::E7,
        "E8" => CaseTag::E8,
        "N" => CaseTag::NonNormal,
        _ => return None,
    })
}

pub fn case_name(tag: CaseTag) -> &'static str {
    match tag {
        CaseTag::T => "T",
        CaseTag::D => "D",
        CaseTag::E6 => "E6",
        CaseTag::E7 => "E7",
        CaseTag::E8 => "E8",
        CaseTag::NonNormal => "N",
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GermInputError {
    #[error("unknown case {0:?}")]
    UnknownCase(String),
    #[error(transparent)]
    Format(#[from] FormatError),
}

impl GermJson {
    pub fn to_raw(&self) -> Result<RawGerm, GermInputError> {
        let case = case_tag(&self.case).ok_or_else(|| GermInputError::UnknownCase(self.case.clone()))?;
        Ok(RawGerm {
            n: self.n,
            a: self.a,
            case,
            k: self.k,
            m: self.m,
            f: self.f.as_deref().map(poly_from_json).transpose()?,
            g: poly_from_json(&self.g)?,
            rho_one: self.rho_one,
        })
    }

    pub fn from_germ(germ: &GermSpec) -> Self {
        let raw = germ.to_raw();
        GermJson {
            n: raw.n,
            a: raw.a,
            case: case_name(raw.case).to_string(),
            k: raw.k,
            m: raw.m,
            f: raw.f.as_ref().map(poly_to_json),
            g: poly_to_json(&raw.g),
            rho_one: raw.rho_one,
            weights: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub self_intersection: i64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
    pub fork: Option<usize>,
}

impl From<&DualGraph> for GraphJson {
    fn from(g: &DualGraph) -> Self {
        GraphJson {
            vertices: g
                .vertices
                .iter()
                .map(|v| VertexJson { self_intersection: v.self_intersection, label: v.label.clone() })
                .collect(),
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
            fork: g.fork,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FibreJson {
    CyclicQuotient { r: u64, q: u64, kn: u64, hj: Vec<u64> },
    DuVal { label: String },
    NonNormal,
}

impl FibreJson {
    pub fn new(fibre: &FibreSingularity) -> Self {
        match fibre {
            FibreSingularity::CyclicQuotient(data) => FibreJson::CyclicQuotient {
                r: data.r,
                q: data.q,
                kn: data.dictionary.kn,
                hj: if data.r > 1 {
                    semistable_core::resolution::hj_expansion(data.r, data.q).expect("valid fibre quotient")
                } else {
                    Vec::new()
                },
            },
            FibreSingularity::DuVal(t) => FibreJson::DuVal { label: t.to_string() },
            FibreSingularity::NonNormal => FibreJson::NonNormal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub germ: GermJson,
    pub case: String,
    pub fibre: FibreJson,
    pub resolution: Option<GraphJson>,
    pub isolatedness: String,
}

pub fn isolatedness_name(i: Isolatedness) -> &'static str {
    match i {
        Isolatedness::Asserted => "asserted",
        Isolatedness::Verified => "verified",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightJson {
    pub d: u64,
    pub entries: [u64; 3],
}

impl From<&WeightVector> for WeightJson {
    fn from(w: &WeightVector) -> Self {
        WeightJson { d: w.d(), entries: w.entries() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverJson {
    pub d: u64,
    pub e: u64,
    pub lifted_weights: [u64; 4],
    pub covered_discrepancy: String,
    pub verified: bool,
}

impl CoverJson {
    pub fn new(c: &CoverData, verified: bool) -> Self {
        CoverJson {
            d: c.d,
            e: c.e,
            lifted_weights: c.lifted_weights,
            covered_discrepancy: rational_string(&c.covered_discrepancy),
            verified,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteriorJson {
    #[serde(rename = "type")]
    pub kind: String,
    pub count: u64,
    pub l: u32,
    pub factor_degree: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OriginJson {
    pub germ: String,
    pub k: u64,
    pub n: u64,
    pub a: u64,
    pub fibre_r: u64,
    pub fibre_q: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerJson {
    pub point: String,
    pub r: u64,
    pub c: u64,
    pub smooth: bool,
}

impl From<&Corner> for CornerJson {
    fn from(c: &Corner) -> Self {
        let point = match c.point {
            CornerPoint::X => "(1:0:0:0)",
            CornerPoint::Y => "(0:1:0:0)",
        };
        CornerJson { point: point.into(), r: c.r, c: c.c, smooth: c.is_smooth() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusJson {
    pub c: Vec<String>,
    pub l_series: Option<u32>,
    pub l_fibre: u32,
    pub l_divergent: bool,
    pub h: Vec<TermJson>,
    pub interior: Vec<InteriorJson>,
    pub origin: Option<OriginJson>,
    pub corners: Vec<CornerJson>,
}

impl From<&SingularityCensus> for CensusJson {
    fn from(c: &SingularityCensus) -> Self {
        CensusJson {
            c: c.reduced.c.iter().map(rational_string).collect(),
            l_series: c.reduced.l_series,
            l_fibre: c.reduced.l_fibre,
            l_divergent: c.reduced.divergent(),
            h: poly_to_json(&c.h),
            interior: c
                .interior
                .iter()
                .map(|p| InteriorJson { kind: p.kind().to_string(), count: p.count, l: p.l, factor_degree: p.factor_degree })
                .collect(),
            origin: c.origin.as_ref().map(|o| {
                let (fibre_r, fibre_q) = o.fibre_quotient();
                OriginJson { germ: o.to_string(), k: o.k, n: o.n, a: o.a, fibre_r, fibre_q }
            }),
            corners: c.corners.iter().map(CornerJson::from).collect(),
        }
    }
}

pub fn status_name(s: ContractionStatus) -> &'static str {
    match s {
        ContractionStatus::DivisorialContraction => "divisorial-contraction",
        ContractionStatus::PendingRho => "pending-rho",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordJson {
    pub w0: WeightJson,
    pub w0_text: String,
    pub lambda: String,
    pub discrepancy: String,
    pub ambient: [u64; 4],
    pub e_equation: Vec<TermJson>,
    pub e_equation_text: String,
    pub semistable_ok: bool,
    pub contraction_status: String,
    pub cover: Option<CoverJson>,
    pub census: Option<CensusJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub census_note: Option<String>,
}

pub const CAPITALS: [&str; 4] = ["X", "Y", "Z", "T"];

impl RecordJson {
    pub fn new(
        r: &ContractionRecord,
        cover: Option<CoverJson>,
        census: Result<&SingularityCensus, String>,
    ) -> Self {
        let (census, census_note) = match census {
            Ok(c) => (Some(CensusJson::from(c)), None),
            Err(e) => (None, Some(e)),
        };
        RecordJson {
            w0: WeightJson::from(&r.w0),
            w0_text: r.w0.to_string(),
            lambda: rational_string(&r.lambda),
            discrepancy: rational_string(&r.discrepancy),
            ambient: r.ambient,
            e_equation: poly_to_json(&r.e_equation),
            e_equation_text: r.e_equation.display_with(CAPITALS).to_string(),
            semistable_ok: r.semistable_ok,
            contraction_status: status_name(r.contraction_status).into(),
            cover,
            census,
            census_note,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectionJson {
    pub w0: String,
    pub reason: String,
}

impl From<&Rejection> for RejectionJson {
    fn from(r: &Rejection) -> Self {
        RejectionJson { w0: r.w0.to_string(), reason: r.reason.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationJson {
    pub germ: GermJson,
    pub bound: u64,
    pub records: Vec<RecordJson>,
    pub rejected: Vec<RejectionJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolveJson {
    pub r: u64,
    pub q: u64,
    pub hj: Vec<u64>,
    pub graph: GraphJson,
}

#[cfg(test)]
mod tests {
    use super::*;
    use semistable_core::exactmath::rat;

    #[test]
    fn coefficients_parse_both_ways() {
        assert_eq!(CoeffJson::Int(-3).to_rational().unwrap(), rat(-3, 1));
        assert_eq!(CoeffJson::Text("6/4".into()).to_rational().unwrap(), rat(3, 2));
        assert!(CoeffJson::Text("1/0".into()).to_rational().is_err());
        assert!(CoeffJson::Text("x".into()).to_rational().is_err());
        assert_eq!(rational_string(&rat(3, 2)), "3/2");
        assert_eq!(rational_string(&rat(4, 2)), "2");
    }

    #[test]
    fn polynomial_round_trip() {
        let p = SparsePoly::from_terms([([1, 1, 0, 0], rat(1, 1)), ([0, 0, 0, 3], rat(-5, 7))]);
        let json = serde_json::to_string(&poly_to_json(&p)).unwrap();
        assert_eq!(json, r#"[{"coeff":"-5/7","exp":[0,0,0,3]},{"coeff":"1","exp":[1,1,0,0]}]"#);
        let back: Vec<TermJson> = serde_json::from_str(&json).unwrap();
        assert_eq!(poly_from_json(&back).unwrap(), p);
    }
}
