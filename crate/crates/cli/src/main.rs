//! Batch CLI for Peisert-type graphs: constructors, analyses, the
//! isomorphism census and extremal values, with reproducible machine
//! output. Exit codes: 0 ok, 1 failed verification, 2 bad input, 3 budget
//! exceeded.

mod report;

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use peisert_core::classify::{self, CensusRow};
use peisert_core::cliques::{self, CliqueKind};
use peisert_core::constructions::{self, Built};
use peisert_core::descriptor::{
    build_form_from_descriptor, build_from_descriptor, form_descriptor, graph_descriptor,
    AnyDescriptor,
};
use peisert_core::error::Error as CoreError;
use peisert_core::fields::make_tower;
use peisert_core::graph::PeisertGraph;
use peisert_core::plane::TowerBasis;
use peisert_core::spectral;

use report::*;

#[derive(Parser)]
#[command(name = "peisert", version, about = "Peisert-type graphs over F_{q^2}: construction, clique classification, strict-EKR census")]
struct Cli {
    /// Worker threads (0 = one per core); output is identical for any value
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named graph and print its descriptor plus verification report
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Run analyses on a graph descriptor
    Analyze {
        /// Path to a descriptor produced by `construct`
        #[arg(long)]
        descriptor: PathBuf,
        /// Comma-separated subset of srg,cliques,ekr,maximal,eigenfunctions,baer
        #[arg(long, default_value = "srg,cliques,ekr")]
        analyses: String,
        /// Cap on enumerated maximum cliques
        #[arg(long, default_value_t = 200_000)]
        max_cliques: u64,
        /// Node budget for maximal-clique search
        #[arg(long, default_value_t = 50_000_000)]
        bk_budget: u64,
        /// Include the full eigenfunction value dump
        #[arg(long)]
        dump_values: bool,
        /// Also export the edge list (one "u v" line per edge, u < v)
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// The census of type-(m, q) graphs up to isomorphism
    Census {
        #[arg(long)]
        q: u32,
        /// First m (defaults to the table layout for q)
        #[arg(long)]
        m_min: Option<u32>,
        /// Last m (defaults to the table layout for q)
        #[arg(long)]
        m_max: Option<u32>,
        /// Allow the expensive censuses (q >= 16)
        #[arg(long)]
        deep: bool,
        /// Node budget per strict-EKR decision (0 = unlimited)
        #[arg(long, default_value_t = 0)]
        clique_budget: u64,
    },
    /// Decide isomorphism of two described graphs
    Iso {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Derive and verify an explicit vertex map when isomorphic
        #[arg(long)]
        explicit_map: bool,
    },
    /// e_q and E_q: least m without strict-EKR, largest m with it
    ExtremalValues {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        deep: bool,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Extremal graph of type (p^(n-k)+1, q) for q = p^n, n > 1
    Extremal {
        #[arg(long)]
        q: u32,
    },
    /// Prime-case graph of type ((p+3)/2, p)
    Ls {
        #[arg(long)]
        p: u32,
    },
    /// Hyperplane-induced graph of type (r^(n-1)+1, q)
    #[command(name = "y-qn", alias = "y_qn")]
    YQn {
        #[arg(long)]
        q: u32,
        /// Subfield order r with q = r^n (default: smallest-prime split)
        #[arg(long)]
        r: Option<u32>,
        /// Shift the default hyperplane by the s-th power of the generator
        #[arg(long)]
        shift: Option<u32>,
    },
    /// Oval graph X_q of type (sqrt(q)+1, q) for square q
    Xq {
        #[arg(long)]
        q: u32,
    },
    /// Affine polar graph VO+(2e, r)
    #[command(name = "vo-plus", alias = "vo_plus")]
    VoPlus {
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 2)]
        e: u32,
    },
    /// The two non-isomorphic type-(17, 32) graphs over the t^5+t^2+1 tower
    #[command(name = "example-q32", alias = "example_q32")]
    ExampleQ32,
}

fn main() {
    let cli = Cli::parse();
    if cli.workers > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global();
    }
    let format = cli.format;
    let out_path = cli.out.clone();
    match run(cli) {
        Ok(text) => {
            let _ = format;
            match out_path {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, text) {
                        fail(2, "io", &format!("cannot write {}: {e}", p.display()));
                    }
                }
                None => print!("{text}"),
            }
        }
        Err(e) => {
            let (code, name) = classify_error(&e);
            fail(code, name, &e.to_string());
        }
    }
}

fn fail(code: i32, name: &str, msg: &str) -> ! {
    let line = serde_json::json!({"error": {"code": name, "message": msg}});
    eprintln!("{line}");
    std::process::exit(code);
}

fn classify_error(e: &CoreError) -> (i32, &'static str) {
    match e {
        CoreError::Internal(_) | CoreError::NotDelsarte(_) => (1, "verification"),
        CoreError::BudgetExceeded { .. } => (3, "budget"),
        _ => (2, "input"),
    }
}

/// Factor a prime power q = p^n.
fn split_prime_power(q: u32) -> Result<(u32, u32), CoreError> {
    if q < 2 {
        return Err(CoreError::BadParameter(format!("{q} is not a prime power")));
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    let mut n = 0;
    let mut pow = 1u32;
    while pow < q {
        pow = pow.checked_mul(p).ok_or_else(|| {
            CoreError::BadParameter(format!("{q} is not a prime power"))
        })?;
        n += 1;
    }
    if pow != q {
        return Err(CoreError::BadParameter(format!("{q} is not a prime power")));
    }
    Ok((p, n))
}

fn std_basis(q: u32) -> Result<Arc<TowerBasis>, CoreError> {
    let (p, n) = split_prime_power(q)?;
    TowerBasis::new(Arc::new(make_tower(p, n, None)?))
}

fn run(cli: Cli) -> Result<String, CoreError> {
    match cli.command {
        Command::Construct { kind } => cmd_construct(kind, cli.format),
        Command::Analyze {
            descriptor,
            analyses,
            max_cliques,
            bk_budget,
            dump_values,
            edges,
        } => cmd_analyze(
            &descriptor,
            &analyses,
            max_cliques,
            bk_budget,
            dump_values,
            edges.as_deref(),
            cli.format,
        ),
        Command::Census {
            q,
            m_min,
            m_max,
            deep,
            clique_budget,
        } => cmd_census(q, m_min, m_max, deep, clique_budget, cli.format),
        Command::Iso { a, b, explicit_map } => cmd_iso(&a, &b, explicit_map, cli.format),
        Command::ExtremalValues { q, deep } => cmd_extremal_values(q, deep, cli.format),
    }
}

fn built_output(built: &Built) -> ConstructOutput {
    let witness = built.witness.as_ref().map(|w| {
        let nexus = cliques::nexus_check(&built.graph, w).ok();
        clique_out(&built.graph, w, nexus)
    });
    ConstructOutput {
        descriptor: AnyDescriptor::Peisert(graph_descriptor(&built.graph)),
        checks: built
            .checks
            .iter()
            .map(|c| CheckOut {
                name: c.name.to_string(),
                detail: c.detail.clone(),
            })
            .collect(),
        witness,
    }
}

fn render_construct(outputs: &[ConstructOutput], format: Format) -> Result<String, CoreError> {
    match format {
        Format::Machine => {
            let mut s = String::new();
            for o in outputs {
                s.push_str(&serde_json::to_string(o)?);
                s.push('\n');
            }
            Ok(s)
        }
        Format::Human => {
            let mut s = String::new();
            for o in outputs {
                s.push_str(&serde_json::to_string_pretty(&o.descriptor)?);
                s.push('\n');
                for c in &o.checks {
                    s.push_str(&format!("check {}: {}\n", c.name, c.detail));
                }
                if let Some(w) = &o.witness {
                    s.push_str(&format!(
                        "witness: {} clique of size {}\n",
                        w.kind,
                        w.vertices.len()
                    ));
                }
            }
            Ok(s)
        }
    }
}

fn cmd_construct(kind: ConstructKind, format: Format) -> Result<String, CoreError> {
    let outputs: Vec<ConstructOutput> = match kind {
        ConstructKind::Extremal { q } => {
            let basis = std_basis(q)?;
            vec![built_output(&constructions::extremal_construction(&basis)?)]
        }
        ConstructKind::Ls { p } => {
            let basis = std_basis(p)?;
            if basis.tower().n() != 1 {
                return Err(CoreError::BadParameter(format!("{p} is not prime")));
            }
            vec![built_output(&constructions::ls_graph(&basis)?)]
        }
        ConstructKind::YQn { q, r, shift } => {
            let basis = std_basis(q)?;
            let t = basis.tower().clone();
            let r = match r {
                Some(r) => r,
                None => {
                    // default split q = r^n with n the smallest prime divisor
                    let (p, n) = split_prime_power(q)?;
                    let spd = (2..=n).find(|d| n % d == 0).ok_or_else(|| {
                        CoreError::BadParameter(format!(
                            "q = {q} is prime; y-qn needs a proper subfield"
                        ))
                    })?;
                    p.pow(n / spd)
                }
            };
            let mut u = constructions::default_hyperplane(&t, r)?;
            if let Some(s) = shift {
                let delta = t.pow(t.generator(), s as u64);
                if !t.in_subfield(delta, q)? {
                    return Err(CoreError::BadParameter(
                        "shift must land in F_q; pick a multiple of (q^2-1)/(q-1)".into(),
                    ));
                }
                u = u.iter().map(|&x| t.add(x, delta)).collect();
            }
            vec![built_output(&constructions::y_qn(&basis, r, &u)?)]
        }
        ConstructKind::Xq { q } => {
            let basis = std_basis(q)?;
            vec![built_output(&constructions::oval_graph_xq(&basis)?)]
        }
        ConstructKind::VoPlus { r, e } => {
            let g = constructions::vo_plus(e, r)?;
            let maximal = g.maximal_cliques_through_zero(50_000_000)?;
            let all_max = maximal.iter().all(|c| c.len() == maximal[0].len());
            vec![ConstructOutput {
                descriptor: AnyDescriptor::Form(form_descriptor(&g)),
                checks: vec![
                    CheckOut {
                        name: "vertices".into(),
                        detail: g.vertex_count().to_string(),
                    },
                    CheckOut {
                        name: "maximal cliques through 0".into(),
                        detail: format!("{} (all maximum: {all_max})", maximal.len()),
                    },
                ],
                witness: None,
            }]
        }
        ConstructKind::ExampleQ32 => {
            let (x1, x2) = constructions::example_q32()?;
            vec![built_output(&x1), built_output(&x2)]
        }
    };
    render_construct(&outputs, format)
}

enum LoadedGraph {
    Peisert(PeisertGraph),
    Form(peisert_core::constructions::FormGraph),
}

fn load_descriptor(path: &std::path::Path) -> Result<LoadedGraph, CoreError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CoreError::BadDescriptor(format!("{}: {e}", path.display())))?;
    let any: AnyDescriptor = serde_json::from_str(&text)
        .map_err(|e| CoreError::BadDescriptor(format!("{}: {e}", path.display())))?;
    Ok(match any {
        AnyDescriptor::Peisert(d) => LoadedGraph::Peisert(build_from_descriptor(&d)?),
        AnyDescriptor::Form(d) => LoadedGraph::Form(build_form_from_descriptor(&d)?),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_analyze(
    descriptor: &std::path::Path,
    analyses: &str,
    max_cliques: u64,
    bk_budget: u64,
    dump_values: bool,
    edges: Option<&std::path::Path>,
    format: Format,
) -> Result<String, CoreError> {
    let wanted: Vec<&str> = analyses.split(',').map(str::trim).collect();
    for w in &wanted {
        if !["srg", "cliques", "ekr", "maximal", "eigenfunctions", "baer"].contains(w) {
            return Err(CoreError::BadParameter(format!("unknown analysis {w:?}")));
        }
    }
    let loaded = load_descriptor(descriptor)?;
    let g = match &loaded {
        LoadedGraph::Peisert(g) => g,
        LoadedGraph::Form(fg) => {
            return analyze_form(fg, &wanted, bk_budget, format);
        }
    };
    if let Some(path) = edges {
        let mut buf = String::new();
        for (u, v) in g.edge_list() {
            buf.push_str(&format!("{u} {v}\n"));
        }
        std::fs::write(path, buf)
            .map_err(|e| CoreError::BadParameter(format!("cannot write edges: {e}")))?;
    }

    let mut out = AnalyzeOutput {
        srg: None,
        cliques: None,
        ekr: None,
        maximal: None,
        eigenfunctions: None,
        baer: None,
    };
    let mut max_list = None;
    if wanted.contains(&"srg") {
        out.srg = Some(g.srg_verify()?.into());
    }
    if wanted.contains(&"cliques") || wanted.contains(&"baer") {
        max_list = Some(cliques::max_cliques_through_zero(g, Some(max_cliques))?);
    }
    if let Some(list) = &max_list {
        if wanted.contains(&"cliques") {
            let n_canon = list.iter().filter(|c| c.kind == CliqueKind::Canonical).count() as u32;
            out.cliques = Some(CliqueReport {
                summary: CliqueSummary {
                    n_canonical: n_canon,
                    n_noncanonical: list.len() as u32 - n_canon,
                    n_maximal_submaximum: 0,
                },
                cliques: list
                    .iter()
                    .map(|c| {
                        let nexus = cliques::nexus_check(g, c).ok();
                        clique_out(g, c, nexus)
                    })
                    .collect(),
            });
        }
    }
    if wanted.contains(&"ekr") {
        let (flag, witness) = cliques::strict_ekr(g)?;
        out.ekr = Some(EkrOut {
            strict_ekr: flag,
            witness: witness.map(|w| clique_out(g, &w, None)),
        });
    }
    if wanted.contains(&"maximal") {
        let list = cliques::maximal_cliques_through_zero(g, bk_budget)?;
        let n_canon = list.iter().filter(|c| c.kind == CliqueKind::Canonical).count() as u32;
        let n_noncanon = list
            .iter()
            .filter(|c| c.kind == CliqueKind::NoncanonicalMaximum)
            .count() as u32;
        out.maximal = Some(CliqueReport {
            summary: CliqueSummary {
                n_canonical: n_canon,
                n_noncanonical: n_noncanon,
                n_maximal_submaximum: list.len() as u32 - n_canon - n_noncanon,
            },
            cliques: list.iter().map(|c| clique_out(g, c, None)).collect(),
        });
    }
    if wanted.contains(&"eigenfunctions") {
        let (pos_bound, neg_bound) = spectral::wdb_bounds(g.m(), g.q())?;
        let canon = cliques::max_cliques_through_zero(g, Some(max_cliques))?
            .into_iter()
            .find(|c| c.kind == CliqueKind::Canonical)
            .ok_or_else(|| CoreError::Internal("no canonical clique".into()))?;
        let f1 = spectral::build_f1(g, &canon, 0)?;
        let f2 = spectral::build_f2(g)?;
        out.eigenfunctions = Some(vec![
            EigenfunctionOut {
                eigenvalue: f1.eigenvalue,
                support_size: f1.support_size() as u32,
                bound: pos_bound,
                tight: f1.support_size() as u32 == pos_bound,
                witness_kind: "isolated_clique_pair".into(),
                values: dump_values.then(|| f1.values.clone()),
            },
            EigenfunctionOut {
                eigenvalue: f2.eigenvalue,
                support_size: f2.support_size() as u32,
                bound: neg_bound,
                tight: f2.support_size() as u32 == neg_bound,
                witness_kind: "complete_bipartite".into(),
                values: dump_values.then(|| f2.values.clone()),
            },
        ]);
    }
    if wanted.contains(&"baer") {
        let list = max_list.as_ref().unwrap();
        let canon: Vec<_> = list.iter().filter(|c| c.kind == CliqueKind::Canonical).collect();
        let noncanon: Vec<_> = list
            .iter()
            .filter(|c| c.kind == CliqueKind::NoncanonicalMaximum)
            .collect();
        let mut all = true;
        for c in &noncanon {
            if !cliques::baer_subarray_check(g, c)? {
                all = false;
            }
        }
        let mut isize = 0;
        for c1 in &canon {
            for c2 in &noncanon {
                let s = cliques::intersection_profile(g, c1, c2)?;
                if s > 0 {
                    isize = s;
                }
            }
        }
        out.baer = Some(BaerOut {
            noncanonical_checked: noncanon.len() as u32,
            all_subarrays: all,
            intersection_size: isize,
        });
    }
    render_analyze(&out, format)
}

fn analyze_form(
    g: &peisert_core::constructions::FormGraph,
    wanted: &[&str],
    bk_budget: u64,
    format: Format,
) -> Result<String, CoreError> {
    for w in wanted {
        if !["srg", "maximal"].contains(w) {
            return Err(CoreError::BadParameter(format!(
                "analysis {w:?} applies only to Peisert-type descriptors"
            )));
        }
    }
    let mut out = AnalyzeOutput {
        srg: None,
        cliques: None,
        ekr: None,
        maximal: None,
        eigenfunctions: None,
        baer: None,
    };
    if wanted.contains(&"srg") {
        let bg = g.bitgraph();
        let n = g.vertex_count();
        let k = g.degree();
        let mut lambda = None;
        let mut mu = None;
        for u in 0..n as usize {
            if bg.degree(u) != k as usize {
                return Err(CoreError::Internal("graph is not regular".into()));
            }
        }
        for v in 1..n as usize {
            let cn = bg.common_neighbors(0, v) as u32;
            let slot = if bg.has_edge(0, v) { &mut lambda } else { &mut mu };
            match slot {
                None => *slot = Some(cn),
                Some(x) if *x != cn => {
                    return Err(CoreError::Internal("graph is not strongly regular".into()))
                }
                _ => {}
            }
        }
        out.srg = Some(SrgOut {
            v: n,
            k,
            lambda: lambda.unwrap_or(0),
            mu: mu.unwrap_or(0),
            r1: 0,
            r2: 0,
            mult1: 0,
            mult2: 0,
            primitive: bg.is_connected(),
        });
    }
    if wanted.contains(&"maximal") {
        let list = g.maximal_cliques_through_zero(bk_budget)?;
        let biggest = list.iter().map(|c| c.len()).max().unwrap_or(0);
        let n_max = list.iter().filter(|c| c.len() == biggest).count() as u32;
        out.maximal = Some(CliqueReport {
            summary: CliqueSummary {
                n_canonical: 0,
                n_noncanonical: n_max,
                n_maximal_submaximum: list.len() as u32 - n_max,
            },
            cliques: list
                .iter()
                .map(|c| CliqueOut {
                    vertices: c.clone(),
                    kind: if c.len() == biggest {
                        "maximum".into()
                    } else {
                        "maximal_submaximum".into()
                    },
                    directions_determined: Vec::new(),
                    nexus: None,
                })
                .collect(),
        });
    }
    render_analyze(&out, format)
}

fn render_analyze(out: &AnalyzeOutput, format: Format) -> Result<String, CoreError> {
    match format {
        Format::Machine => Ok(format!("{}\n", serde_json::to_string(out)?)),
        Format::Human => {
            let mut s = String::new();
            if let Some(p) = &out.srg {
                s.push_str(&format!(
                    "srg: ({}, {}, {}, {})  eigenvalues {} (x{}), {} (x{})  primitive: {}\n",
                    p.v, p.k, p.lambda, p.mu, p.r1, p.mult1, p.r2, p.mult2, p.primitive
                ));
            }
            if let Some(c) = &out.cliques {
                s.push_str(&format!(
                    "cliques through 0: {} canonical + {} non-canonical\n",
                    c.summary.n_canonical, c.summary.n_noncanonical
                ));
            }
            if let Some(e) = &out.ekr {
                s.push_str(&format!("strict-EKR: {}\n", e.strict_ekr));
                if let Some(w) = &e.witness {
                    s.push_str(&format!(
                        "witness: non-canonical clique of size {} determining {} directions\n",
                        w.vertices.len(),
                        w.directions_determined.len()
                    ));
                }
            }
            if let Some(m) = &out.maximal {
                let sizes: Vec<usize> = m.cliques.iter().map(|c| c.vertices.len()).collect();
                s.push_str(&format!(
                    "maximal cliques through 0: {} (sizes {:?})\n",
                    m.cliques.len(),
                    sizes
                ));
            }
            if let Some(eigs) = &out.eigenfunctions {
                for e in eigs {
                    s.push_str(&format!(
                        "eigenfunction ({}): eigenvalue {}, support {}, bound {}, tight: {}\n",
                        e.witness_kind, e.eigenvalue, e.support_size, e.bound, e.tight
                    ));
                }
            }
            if let Some(b) = &out.baer {
                s.push_str(&format!(
                    "baer: {} non-canonical cliques, all subarrays: {}, intersection size {}\n",
                    b.noncanonical_checked, b.all_subarrays, b.intersection_size
                ));
            }
            Ok(s)
        }
    }
}

/// m-columns of the census table for each q, matching the published layout.
fn table_m_range(q: u32) -> std::ops::RangeInclusive<u32> {
    match q {
        4 => 3..=4,
        5 => 3..=5,
        7 => 3..=6,
        _ => 3..=q - 2,
    }
}

fn cmd_census(
    q: u32,
    m_min: Option<u32>,
    m_max: Option<u32>,
    deep: bool,
    clique_budget: u64,
    format: Format,
) -> Result<String, CoreError> {
    if q < 4 {
        return Err(CoreError::BadParameter("census needs q >= 4".into()));
    }
    if q > 13 && !deep {
        return Err(CoreError::BadParameter(format!(
            "census for q = {q} needs --deep"
        )));
    }
    if q > 32 {
        return Err(CoreError::BadParameter("census is capped at q = 32".into()));
    }
    let basis = std_basis(q)?;
    let default = table_m_range(q);
    let lo = m_min.unwrap_or(*default.start()).max(1);
    let hi = m_max.unwrap_or(*default.end()).min(q);
    if lo > hi {
        return Err(CoreError::BadParameter("empty m range".into()));
    }
    // very large fields get a default per-class budget so rows degrade to
    // explicit ">= N" cells instead of running unbounded
    let budget = match clique_budget {
        0 if q >= 19 => Some(500_000_000),
        0 => None,
        b => Some(b),
    };
    let rows = classify::census(&basis, lo..=hi, budget)?;
    render_census(q, &rows, format)
}

fn render_census(q: u32, rows: &[CensusRow], format: Format) -> Result<String, CoreError> {
    match format {
        Format::Machine => {
            let mut s = String::new();
            for r in rows {
                s.push_str(&serde_json::to_string(&CensusRowOut::from(r))?);
                s.push('\n');
            }
            Ok(s)
        }
        Format::Human => Ok(render_census_table(q, rows)),
    }
}

fn cmd_iso(
    a: &std::path::Path,
    b: &std::path::Path,
    explicit_map: bool,
    format: Format,
) -> Result<String, CoreError> {
    let ga = load_descriptor(a)?;
    let gb = load_descriptor(b)?;
    let result = match (&ga, &gb) {
        (LoadedGraph::Peisert(x), LoadedGraph::Peisert(y)) => {
            if explicit_map {
                // force the certificate path so a map is produced
                let (ca, la) = classify::certificate_with_labeling(x)?;
                let (cb, lb) = classify::certificate_with_labeling(y)?;
                if ca == cb {
                    let map = peisert_core::canon::isomorphism_from_labelings(&la, &lb);
                    verify_cross_map(
                        x.vertex_count(),
                        |u, v| x.adjacent(peisert_core::fields::Element(u), peisert_core::fields::Element(v)),
                        |u, v| y.adjacent(peisert_core::fields::Element(u), peisert_core::fields::Element(v)),
                        &map,
                    )?;
                    IsoOutput {
                        isomorphic: true,
                        map: Some(map),
                    }
                } else {
                    IsoOutput {
                        isomorphic: false,
                        map: None,
                    }
                }
            } else {
                let r = classify::isomorphic(x, y)?;
                IsoOutput {
                    isomorphic: r.isomorphic,
                    map: r.map,
                }
            }
        }
        (LoadedGraph::Form(x), LoadedGraph::Form(y)) => iso_via_certs(
            constructions::form_certificate_with_labeling(x)?,
            constructions::form_certificate_with_labeling(y)?,
            x.vertex_count(),
            y.vertex_count(),
            |u, v| x.adjacent(u, v),
            |u, v| y.adjacent(u, v),
            explicit_map,
        )?,
        (LoadedGraph::Peisert(x), LoadedGraph::Form(y)) => iso_via_certs(
            classify::certificate_with_labeling(x)?,
            constructions::form_certificate_with_labeling(y)?,
            x.vertex_count(),
            y.vertex_count(),
            |u, v| x.adjacent(peisert_core::fields::Element(u), peisert_core::fields::Element(v)),
            |u, v| y.adjacent(u, v),
            explicit_map,
        )?,
        (LoadedGraph::Form(x), LoadedGraph::Peisert(y)) => iso_via_certs(
            constructions::form_certificate_with_labeling(x)?,
            classify::certificate_with_labeling(y)?,
            x.vertex_count(),
            y.vertex_count(),
            |u, v| x.adjacent(u, v),
            |u, v| y.adjacent(peisert_core::fields::Element(u), peisert_core::fields::Element(v)),
            explicit_map,
        )?,
    };
    match format {
        Format::Machine => Ok(format!("{}\n", serde_json::to_string(&result)?)),
        Format::Human => {
            let mut s = format!("isomorphic: {}\n", result.isomorphic);
            if let Some(map) = &result.map {
                s.push_str(&format!("map: {map:?}\n"));
            }
            Ok(s)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn iso_via_certs(
    a: (classify::Certificate, Vec<u32>),
    b: (classify::Certificate, Vec<u32>),
    na: u32,
    nb: u32,
    adj_a: impl Fn(u32, u32) -> bool,
    adj_b: impl Fn(u32, u32) -> bool,
    explicit_map: bool,
) -> Result<IsoOutput, CoreError> {
    if na != nb || a.0 != b.0 {
        return Ok(IsoOutput {
            isomorphic: false,
            map: None,
        });
    }
    let map = if explicit_map {
        let map = peisert_core::canon::isomorphism_from_labelings(&a.1, &b.1);
        verify_cross_map(na, adj_a, adj_b, &map)?;
        Some(map)
    } else {
        None
    };
    Ok(IsoOutput {
        isomorphic: true,
        map,
    })
}

fn verify_cross_map(
    n: u32,
    adj_a: impl Fn(u32, u32) -> bool,
    adj_b: impl Fn(u32, u32) -> bool,
    map: &[u32],
) -> Result<(), CoreError> {
    for u in 0..n {
        for v in u + 1..n {
            if adj_a(u, v) != adj_b(map[u as usize], map[v as usize]) {
                return Err(CoreError::Internal(
                    "derived map is not an isomorphism".into(),
                ));
            }
        }
    }
    Ok(())
}

fn cmd_extremal_values(q: u32, deep: bool, format: Format) -> Result<String, CoreError> {
    if q > 13 && !deep {
        return Err(CoreError::BadParameter(format!(
            "extremal values for q = {q} need --deep"
        )));
    }
    let basis = std_basis(q)?;
    let (e, ee) = classify::extremal_values(&basis)?;
    match format {
        Format::Machine => Ok(format!(
            "{}\n",
            serde_json::to_string(&ExtremalValuesOut {
                q,
                e_q: e,
                cap_e_q: ee
            })?
        )),
        Format::Human => Ok(format!("e_q = {e}\nE_q = {ee}\n")),
    }
}
