//! Output records for the CLI: machine format is line-delimited JSON with
//! stable key order (struct declaration order), human format is rendered
//! from the same records.

use serde::Serialize;

use peisert_core::classify::CensusRow;
use peisert_core::cliques::{Clique, CliqueKind};
use peisert_core::descriptor::{render_element, AnyDescriptor};
use peisert_core::graph::{PeisertGraph, SrgParams};

#[derive(Serialize)]
pub struct CheckOut {
    pub name: String,
    pub detail: String,
}

#[derive(Serialize)]
pub struct CliqueOut {
    pub vertices: Vec<u32>,
    pub kind: String,
    pub directions_determined: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nexus: Option<u32>,
}

pub fn kind_name(k: CliqueKind) -> &'static str {
    match k {
        CliqueKind::Canonical => "canonical",
        CliqueKind::NoncanonicalMaximum => "noncanonical_maximum",
        CliqueKind::MaximalSubmaximum => "maximal_submaximum",
    }
}

pub fn clique_out(g: &PeisertGraph, c: &Clique, nexus: Option<u32>) -> CliqueOut {
    CliqueOut {
        vertices: c.vertices.iter().map(|v| v.index()).collect(),
        kind: kind_name(c.kind).to_string(),
        directions_determined: c
            .directions
            .iter()
            .map(|&d| {
                let (a, b) = d.coords();
                format!("{}:{}", render_element(a), render_element(b))
            })
            .collect(),
        nexus: {
            let _ = g;
            nexus
        },
    }
}

#[derive(Serialize)]
pub struct ConstructOutput {
    pub descriptor: AnyDescriptor,
    pub checks: Vec<CheckOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CliqueOut>,
}

#[derive(Serialize)]
pub struct SrgOut {
    pub v: u32,
    pub k: u32,
    pub lambda: u32,
    pub mu: u32,
    pub r1: i64,
    pub r2: i64,
    pub mult1: u32,
    pub mult2: u32,
    pub primitive: bool,
}

impl From<SrgParams> for SrgOut {
    fn from(p: SrgParams) -> SrgOut {
        SrgOut {
            v: p.v,
            k: p.k,
            lambda: p.lambda,
            mu: p.mu,
            r1: p.r1,
            r2: p.r2,
            mult1: p.mult1,
            mult2: p.mult2,
            primitive: p.primitive,
        }
    }
}

#[derive(Serialize)]
pub struct CliqueSummary {
    pub n_canonical: u32,
    pub n_noncanonical: u32,
    pub n_maximal_submaximum: u32,
}

#[derive(Serialize)]
pub struct CliqueReport {
    pub summary: CliqueSummary,
    pub cliques: Vec<CliqueOut>,
}

#[derive(Serialize)]
pub struct EkrOut {
    pub strict_ekr: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CliqueOut>,
}

#[derive(Serialize)]
pub struct EigenfunctionOut {
    pub eigenvalue: i64,
    pub support_size: u32,
    pub bound: u32,
    pub tight: bool,
    pub witness_kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<i8>>,
}

#[derive(Serialize)]
pub struct BaerOut {
    pub noncanonical_checked: u32,
    pub all_subarrays: bool,
    pub intersection_size: u32,
}

#[derive(Serialize)]
pub struct AnalyzeOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub srg: Option<SrgOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cliques: Option<CliqueReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ekr: Option<EkrOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximal: Option<CliqueReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenfunctions: Option<Vec<EigenfunctionOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baer: Option<BaerOut>,
}

#[derive(Serialize)]
pub struct CensusRowOut {
    pub q: u32,
    pub m: u32,
    pub graphs: u32,
    pub strict_ekr: u32,
    pub without: u32,
    pub complete: bool,
}

impl From<&CensusRow> for CensusRowOut {
    fn from(r: &CensusRow) -> CensusRowOut {
        CensusRowOut {
            q: r.q,
            m: r.m,
            graphs: r.graphs,
            strict_ekr: r.strict_ekr,
            without: r.without,
            complete: r.complete(),
        }
    }
}

#[derive(Serialize)]
pub struct IsoOutput {
    pub isomorphic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<u32>>,
}

#[derive(Serialize)]
pub struct ExtremalValuesOut {
    pub q: u32,
    pub e_q: u32,
    pub cap_e_q: u32,
}

/// The census table in the appendix layout: one column per m, zero cells
/// rendered as "-", incomplete cells as ">=N".
pub fn render_census_table(q: u32, rows: &[CensusRow]) -> String {
    let label_w = 11usize;
    let cell_w = rows
        .iter()
        .flat_map(|r| {
            [
                r.m.to_string().len(),
                r.graphs.to_string().len(),
                cell(r.strict_ekr, r.complete()).len(),
                cell(r.without, r.complete()).len(),
            ]
        })
        .max()
        .unwrap_or(1)
        .max(2)
        + 2;
    let mut out = format!("q = {q}\n\n");
    let line = |label: &str, f: &dyn Fn(&CensusRow) -> String| {
        let mut s = format!("{label:<label_w$}");
        for r in rows {
            let c = f(r);
            s.push_str(&format!("{c:>cell_w$}"));
        }
        s.push('\n');
        s
    };
    out.push_str(&line("m", &|r| r.m.to_string()));
    out.push_str(&line("#Graphs", &|r| r.graphs.to_string()));
    out.push_str(&line("strict-EKR", &|r| cell(r.strict_ekr, r.complete())));
    out.push_str(&line("without", &|r| cell(r.without, r.complete())));
    out
}

fn cell(v: u32, complete: bool) -> String {
    if !complete {
        format!(">={v}")
    } else if v == 0 {
        "-".to_string()
    } else {
        v.to_string()
    }
}
