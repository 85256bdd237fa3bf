//! Output formatting: machine-readable JSON with a fixed field order,
//! aligned plain-text tables, and the textual class-spec syntax used by
//! the command line and the C bindings.

use num_bigint::BigUint;
use serde::Serialize;

use crate::balanced_degrees::{BalancedStatus, BalancedViolation, ModelInventory};
use crate::curve_graph::DualGraph;
use crate::limit_root_strata::{ClassSpec, FactoredCount, FiberReport};
use crate::picard_fiber::{ChiReport, Dimension, RiassOutcome, ShatReport};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Class-spec syntax
// ---------------------------------------------------------------------------

/// Parses the textual class syntax:
///
/// * `zero` — the trivial class;
/// * `spin:l=<int>` — the class of ω^l, optionally followed by
///   `,markings` (add the marking degrees stored on the curve) and any
///   number of `,m=<vertex>:<degree>` entries;
/// * a comma-separated residue list, one entry per vertex.
pub fn parse_class_spec(spec: &str) -> Result<ClassSpec> {
    let bad = |reason: &str| Error::ClassSpec {
        spec: spec.to_string(),
        reason: reason.to_string(),
    };
    let s = spec.trim();
    if s.is_empty() {
        return Err(bad("empty class spec"));
    }
    if s == "zero" {
        return Ok(ClassSpec::Zero);
    }
    if let Some(rest) = s.strip_prefix("spin:") {
        let mut parts = rest.split(',');
        let head = parts.next().unwrap_or("");
        let l = head
            .strip_prefix("l=")
            .and_then(|v| v.parse::<i64>().ok())
            .ok_or_else(|| bad("spin class needs l=<integer> first"))?;
        let mut use_curve_markings = false;
        let mut extra_markings = Vec::new();
        for part in parts {
            if part == "markings" {
                use_curve_markings = true;
            } else if let Some(entry) = part.strip_prefix("m=") {
                let (v, c) = entry
                    .split_once(':')
                    .ok_or_else(|| bad("marking entries look like m=<vertex>:<degree>"))?;
                let vertex = v
                    .parse::<usize>()
                    .map_err(|_| bad("marking vertex must be a non-negative integer"))?;
                let degree = c
                    .parse::<i64>()
                    .map_err(|_| bad("marking degree must be an integer"))?;
                extra_markings.push((vertex, degree));
            } else {
                return Err(bad("unknown spin option"));
            }
        }
        return Ok(ClassSpec::Spin {
            l,
            use_curve_markings,
            extra_markings,
        });
    }
    let values: std::result::Result<Vec<i64>, _> =
        s.split(',').map(|p| p.trim().parse::<i64>()).collect();
    match values {
        Ok(v) => Ok(ClassSpec::Explicit(v)),
        Err(_) => Err(bad(
            "expected `zero`, `spin:l=<int>[,...]`, or a comma-separated integer list",
        )),
    }
}

// ---------------------------------------------------------------------------
// Shared JSON pieces
// ---------------------------------------------------------------------------

/// JSON shape of a factored count: `value = coeff * r^(2*nu_genus +
/// exp_offset)`.  Values are decimal strings so they survive arbitrary
/// magnitudes and non-JSON consumers.
#[derive(Serialize)]
struct CountJson {
    coeff: String,
    exp_offset: u64,
    value: String,
}

fn count_json(c: &FactoredCount, nu_genus: u64) -> CountJson {
    CountJson {
        coeff: c.coeff.to_string(),
        exp_offset: c.exp_offset,
        value: c.value(nu_genus).to_string(),
    }
}

fn status_label(status: &BalancedStatus) -> &'static str {
    match status {
        BalancedStatus::StablyBalanced => "stably-balanced",
        BalancedStatus::Balanced { .. } => "balanced",
        BalancedStatus::NotBalanced { .. } => "not-balanced",
    }
}

#[derive(Serialize)]
#[serde(rename_all = "kebab-case")]
enum ViolationJson {
    ExceptionalDegree {
        vertex: usize,
        degree: i64,
    },
    Subcurve {
        vertices: Vec<usize>,
        d_z: i64,
        w_z: i64,
        k_z: usize,
        deviation: i64,
        bound: i64,
    },
}

fn violation_json(v: &BalancedViolation) -> ViolationJson {
    match v {
        BalancedViolation::ExceptionalDegree { vertex, degree } => {
            ViolationJson::ExceptionalDegree {
                vertex: *vertex,
                degree: *degree,
            }
        }
        BalancedViolation::Subcurve {
            z,
            d_z,
            w_z,
            k_z,
            deviation,
            bound,
        } => ViolationJson::Subcurve {
            vertices: z.to_vec(),
            d_z: *d_z,
            w_z: *w_z,
            k_z: *k_z,
            deviation: *deviation,
            bound: *bound,
        },
    }
}

#[derive(Serialize)]
struct StatusJson {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<ViolationJson>,
}

fn status_json(status: &BalancedStatus) -> StatusJson {
    StatusJson {
        status: status_label(status),
        violation: match status {
            BalancedStatus::NotBalanced { witness } => Some(violation_json(witness)),
            _ => None,
        },
    }
}

fn finish(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Limit-root fiber report
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct WeightJson {
    edge: usize,
    head: u64,
    tail: u64,
}

#[derive(Serialize)]
struct LimitRootStratumJson {
    delta: Vec<usize>,
    weights: Vec<WeightJson>,
    gamma: usize,
    b1_tilde: usize,
    b1_sigma: usize,
    root_count: CountJson,
    multiplicity: u128,
    aut_order: u128,
    smooth: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    multidegree: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    balanced: Option<StatusJson>,
}

#[derive(Serialize)]
struct LimitRootsJson {
    report: &'static str,
    r: u64,
    class: Vec<u64>,
    genus: u64,
    nu_genus: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    spin_l: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target_degrees: Option<Vec<i64>>,
    stratum_count: usize,
    smooth_count: usize,
    total_length: CountJson,
    strata: Vec<LimitRootStratumJson>,
}

pub fn limit_roots_json(report: &FiberReport) -> String {
    let strata: Vec<LimitRootStratumJson> = report
        .strata
        .iter()
        .map(|rec| LimitRootStratumJson {
            delta: rec.stratum.delta.clone(),
            weights: rec
                .stratum
                .weighting
                .weight_pairs()
                .into_iter()
                .map(|(edge, head, tail)| WeightJson { edge, head, tail })
                .collect(),
            gamma: rec.stratum.gamma,
            b1_tilde: rec.stratum.b1_tilde,
            b1_sigma: rec.stratum.b1_sigma,
            root_count: count_json(&rec.stratum.root_count, report.nu_genus),
            multiplicity: rec.stratum.multiplicity,
            aut_order: rec.stratum.aut_order,
            smooth: rec.stratum.smooth,
            multidegree: rec.multidegree.as_ref().map(|d| d.values().to_vec()),
            balanced: rec.balanced.as_ref().map(status_json),
        })
        .collect();
    finish(&LimitRootsJson {
        report: "limit-roots",
        r: report.r,
        class: report.class.clone(),
        genus: report.genus,
        nu_genus: report.nu_genus,
        spin_l: report.spin_l,
        target_degrees: report.target_degrees.clone(),
        stratum_count: report.strata.len(),
        smooth_count: report.strata.iter().filter(|s| s.stratum.smooth).count(),
        total_length: count_json(&report.total_length, report.nu_genus),
        strata,
    })
}

// ---------------------------------------------------------------------------
// Balanced inventory report
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct BalancedEntryJson {
    multidegree: Vec<i64>,
    #[serde(flatten)]
    status: StatusJson,
}

#[derive(Serialize)]
struct BalancedModelJson {
    delta: Vec<usize>,
    entries: Vec<BalancedEntryJson>,
}

#[derive(Serialize)]
struct BalancedJson {
    report: &'static str,
    genus: u64,
    total_degree: i64,
    stably_only: bool,
    models_scanned: usize,
    models_with_entries: usize,
    entry_count: usize,
    models: Vec<BalancedModelJson>,
}

pub fn balanced_json(
    g: &DualGraph,
    total_degree: i64,
    stably_only: bool,
    models: &[ModelInventory],
) -> String {
    let rendered: Vec<BalancedModelJson> = models
        .iter()
        .map(|m| BalancedModelJson {
            delta: m.delta.clone(),
            entries: m
                .entries
                .iter()
                .map(|(d, status)| BalancedEntryJson {
                    multidegree: d.values().to_vec(),
                    status: status_json(status),
                })
                .collect(),
        })
        .collect();
    finish(&BalancedJson {
        report: "balanced",
        genus: g.genus(),
        total_degree,
        stably_only,
        models_scanned: 1usize << g.edge_count(),
        models_with_entries: models.len(),
        entry_count: models.iter().map(|m| m.entries.len()).sum(),
        models: rendered,
    })
}

// ---------------------------------------------------------------------------
// Compactified fiber report
// ---------------------------------------------------------------------------

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum DimensionJson {
    Exact(u64),
    Bound(u64),
}

fn dimension_json(d: Dimension) -> DimensionJson {
    match d {
        Dimension::Exact(v) => DimensionJson::Exact(v),
        Dimension::Bound(v) => DimensionJson::Bound(v),
    }
}

#[derive(Serialize)]
struct ShatStratumJson {
    delta: Vec<usize>,
    twister: Vec<i64>,
    multidegree: Vec<i64>,
    #[serde(flatten)]
    status: StatusJson,
    root_classes: u64,
    point_count: CountJson,
    dimension: DimensionJson,
}

#[derive(Serialize)]
struct ShatJson {
    report: &'static str,
    r: u64,
    l: i64,
    genus: u64,
    nu_genus: u64,
    total_degree: i64,
    stratum_count: usize,
    zero_dim_nu_coeff: String,
    positive_dim_exact: usize,
    bounded_dim: usize,
    strata: Vec<ShatStratumJson>,
}

pub fn shat_json(report: &ShatReport) -> String {
    let strata: Vec<ShatStratumJson> = report
        .strata
        .iter()
        .map(|s| ShatStratumJson {
            delta: s.delta.clone(),
            twister: s.twister.clone(),
            multidegree: s.multidegree.values().to_vec(),
            status: status_json(&s.status),
            root_classes: s.root_class_count,
            point_count: count_json(&s.point_count, report.nu_genus),
            dimension: dimension_json(s.dimension),
        })
        .collect();
    finish(&ShatJson {
        report: "shat-fiber",
        r: report.r,
        l: report.l,
        genus: report.genus,
        nu_genus: report.nu_genus,
        total_degree: report.total_degree,
        stratum_count: report.strata.len(),
        zero_dim_nu_coeff: report.zero_dim_nu_coeff.to_string(),
        positive_dim_exact: report.positive_dim_exact,
        bounded_dim: report.bounded_dim,
        strata,
    })
}

// ---------------------------------------------------------------------------
// Two-component dimension report
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct WitnessJson {
    s: i64,
    j: i64,
}

#[derive(Serialize)]
struct RiassJson {
    report: &'static str,
    k: u64,
    r: u64,
    residues: [u64; 2],
    dimension: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exception: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessJson>,
}

pub fn riass_json(outcome: &RiassOutcome) -> String {
    finish(&RiassJson {
        report: "riass",
        k: outcome.k,
        r: outcome.r,
        residues: [outcome.residues.0, outcome.residues.1],
        dimension: outcome.dimension,
        exception: outcome.exception,
        witness: outcome.witness.map(|w| WitnessJson { s: w.s, j: w.j }),
    })
}

// ---------------------------------------------------------------------------
// Chi diagnostics report
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct UnbalancedJson {
    delta: Vec<usize>,
    weights: Vec<WeightJson>,
}

#[derive(Serialize)]
struct ChiJson {
    report: &'static str,
    r: u64,
    l: i64,
    genus: u64,
    regular: bool,
    strata_total: usize,
    unbalanced: Vec<UnbalancedJson>,
    shat_stratum_count: usize,
    shat_zero_dim_nu_coeff: String,
    shat_positive_dim_exact: usize,
    shat_bounded_dim: usize,
}

pub fn chi_json(report: &ChiReport) -> String {
    let unbalanced: Vec<UnbalancedJson> = report
        .unbalanced
        .iter()
        .map(|u| UnbalancedJson {
            delta: u.delta.clone(),
            weights: u
                .delta
                .iter()
                .map(|&e| WeightJson {
                    edge: e,
                    head: u.weights[e],
                    tail: report.r - u.weights[e],
                })
                .collect(),
        })
        .collect();
    finish(&ChiJson {
        report: "chi",
        r: report.r,
        l: report.l,
        genus: report.shat.genus,
        regular: report.regular,
        strata_total: report.strata_total,
        unbalanced,
        shat_stratum_count: report.shat.strata.len(),
        shat_zero_dim_nu_coeff: report.shat.zero_dim_nu_coeff.to_string(),
        shat_positive_dim_exact: report.shat_positive_exact,
        shat_bounded_dim: report.shat_bounded,
    })
}

// ---------------------------------------------------------------------------
// Plain-text tables
// ---------------------------------------------------------------------------

fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let emit = |out: &mut String, cells: &[String]| {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if i + 1 < cells.len() {
                for _ in cell.len()..widths[i] {
                    line.push(' ');
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    };
    emit(
        &mut out,
        &headers.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
    );
    let dashes: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    emit(&mut out, &dashes);
    for row in rows {
        emit(&mut out, row);
    }
    out
}

fn fmt_delta(delta: &[usize]) -> String {
    if delta.is_empty() {
        "-".to_string()
    } else {
        delta
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn fmt_weight_pairs(pairs: &[(usize, u64, u64)]) -> String {
    if pairs.is_empty() {
        return "-".to_string();
    }
    pairs
        .iter()
        .map(|(e, u, v)| format!("e{e}:{u}/{v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn fmt_vec_i64(values: &[i64]) -> String {
    format!(
        "({})",
        values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

/// `coeff*r^(2gn+off) = value`, collapsing the trivial cases.
fn fmt_count(c: &FactoredCount, nu_genus: u64) -> String {
    if c.is_zero() {
        return "0".to_string();
    }
    let sym = if c.exp_offset == 0 {
        "r^(2gn)".to_string()
    } else {
        format!("r^(2gn+{})", c.exp_offset)
    };
    let coeff = if c.coeff == BigUint::from(1u32) {
        String::new()
    } else {
        format!("{}*", c.coeff)
    };
    format!("{coeff}{sym} = {}", c.value(nu_genus))
}

fn fmt_status(status: &BalancedStatus) -> String {
    status_label(status).replace('-', " ")
}

pub fn limit_roots_table(report: &FiberReport) -> String {
    let mut out = format!(
        "limit r-th roots: r={}  class=({})  genus={}  nu-genus={}\n",
        report.r,
        report
            .class
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(","),
        report.genus,
        report.nu_genus,
    );
    if let Some(l) = report.spin_l {
        out.push_str(&format!("spin class of omega^{l}"));
        if let Some(n) = &report.target_degrees {
            out.push_str(&format!("  target degrees={}", fmt_vec_i64(n)));
        }
        out.push('\n');
    }
    let smooth = report.strata.iter().filter(|s| s.stratum.smooth).count();
    out.push_str(&format!(
        "strata: {}  smooth: {}  total length: {}\n\n",
        report.strata.len(),
        smooth,
        fmt_count(&report.total_length, report.nu_genus),
    ));
    let with_degrees = report.strata.iter().any(|s| s.multidegree.is_some());
    let mut headers = vec!["delta", "weights", "roots", "mult", "aut", "smooth"];
    if with_degrees {
        headers.push("multidegree");
        headers.push("balanced");
    }
    let rows: Vec<Vec<String>> = report
        .strata
        .iter()
        .map(|rec| {
            let mut row = vec![
                fmt_delta(&rec.stratum.delta),
                fmt_weight_pairs(&rec.stratum.weighting.weight_pairs()),
                fmt_count(&rec.stratum.root_count, report.nu_genus),
                rec.stratum.multiplicity.to_string(),
                rec.stratum.aut_order.to_string(),
                if rec.stratum.smooth { "yes" } else { "no" }.to_string(),
            ];
            if with_degrees {
                row.push(
                    rec.multidegree
                        .as_ref()
                        .map(|d| fmt_vec_i64(d.values()))
                        .unwrap_or_else(|| "-".to_string()),
                );
                row.push(
                    rec.balanced
                        .as_ref()
                        .map(fmt_status)
                        .unwrap_or_else(|| "-".to_string()),
                );
            }
            row
        })
        .collect();
    out.push_str(&render_table(&headers, &rows));
    out
}

pub fn balanced_table(
    g: &DualGraph,
    total_degree: i64,
    stably_only: bool,
    models: &[ModelInventory],
) -> String {
    let entry_count: usize = models.iter().map(|m| m.entries.len()).sum();
    let mut out = format!(
        "balanced multidegrees: genus={}  total={}  stably-only={}\n",
        g.genus(),
        total_degree,
        if stably_only { "yes" } else { "no" },
    );
    out.push_str(&format!(
        "models: {} scanned, {} with entries, {} multidegrees\n\n",
        1usize << g.edge_count(),
        models.len(),
        entry_count,
    ));
    let rows: Vec<Vec<String>> = models
        .iter()
        .flat_map(|m| {
            m.entries.iter().map(|(d, status)| {
                vec![
                    fmt_delta(&m.delta),
                    fmt_vec_i64(d.values()),
                    fmt_status(status),
                ]
            })
        })
        .collect();
    out.push_str(&render_table(&["delta", "multidegree", "status"], &rows));
    out
}

fn fmt_dimension(d: Dimension) -> String {
    match d {
        Dimension::Exact(v) => v.to_string(),
        Dimension::Bound(v) => format!("<={v}"),
    }
}

pub fn shat_table(report: &ShatReport) -> String {
    let mut out = format!(
        "compactified Picard fiber: r={}  l={}  genus={}  nu-genus={}  total-degree={}\n",
        report.r, report.l, report.genus, report.nu_genus, report.total_degree,
    );
    out.push_str(&format!(
        "strata: {}  zero-dim coefficient: {}  positive-dim exact: {}  bounded: {}\n\n",
        report.strata.len(),
        report.zero_dim_nu_coeff,
        report.positive_dim_exact,
        report.bounded_dim,
    ));
    let rows: Vec<Vec<String>> = report
        .strata
        .iter()
        .map(|s| {
            vec![
                fmt_delta(&s.delta),
                fmt_vec_i64(&s.twister),
                fmt_vec_i64(s.multidegree.values()),
                fmt_status(&s.status),
                s.root_class_count.to_string(),
                fmt_count(&s.point_count, report.nu_genus),
                fmt_dimension(s.dimension),
            ]
        })
        .collect();
    out.push_str(&render_table(
        &[
            "delta",
            "twister",
            "multidegree",
            "balanced",
            "classes",
            "points",
            "dim",
        ],
        &rows,
    ));
    out
}

pub fn riass_table(outcome: &RiassOutcome) -> String {
    let mut out = format!(
        "two-component root fiber: k={}  r={}  l*w residues=({},{})\n",
        outcome.k, outcome.r, outcome.residues.0, outcome.residues.1,
    );
    out.push_str(&format!("dimension: {}\n", outcome.dimension));
    if let Some(label) = outcome.exception {
        out.push_str(&format!("exception: {label}\n"));
    }
    if let Some(w) = outcome.witness {
        out.push_str(&format!("witness: s={} (j={})\n", w.s, w.j));
    }
    out
}

/// Dimension grid over k in [2,6] and r in [2,7] for a fixed residue of
/// l·w on the first component (reduced mod r per column).  Exceptional
/// cells are marked with `!`.
pub fn riass_grid(res1: u64) -> Result<String> {
    let mut headers = vec!["k\\r".to_string()];
    for r in 2..=7u64 {
        headers.push(format!("r={r}"));
    }
    let mut rows = Vec::new();
    for k in 2..=6u64 {
        let mut row = vec![k.to_string()];
        for r in 2..=7u64 {
            let a = res1 % r;
            let b = (r - a) % r;
            let out = crate::picard_fiber::riass_dimension(k, r, a, b)?;
            let mark = if out.exception.is_some() { "!" } else { "" };
            row.push(format!("{}{}", out.dimension, mark));
        }
        rows.push(row);
    }
    let header_refs: Vec<&str> = headers.iter().map(|s| s.as_str()).collect();
    let mut out = format!("riass dimension grid, l*w residue {res1} on the first component\n");
    out.push_str("(! marks the finite exceptional cases)\n\n");
    out.push_str(&render_table(&header_refs, &rows));
    Ok(out)
}

pub fn chi_table(report: &ChiReport) -> String {
    let mut out = format!(
        "chi regularity: r={}  l={}  genus={}\n",
        report.r, report.l, report.shat.genus,
    );
    out.push_str(&format!(
        "limit-root strata: {}  unbalanced: {}\n",
        report.strata_total,
        report.unbalanced.len(),
    ));
    if report.regular {
        out.push_str("comparison map regular: yes\n");
    } else {
        out.push_str("comparison map regular: no - unbalanced strata present\n");
        for u in &report.unbalanced {
            let pairs: Vec<(usize, u64, u64)> = u
                .delta
                .iter()
                .map(|&e| (e, u.weights[e], report.r - u.weights[e]))
                .collect();
            out.push_str(&format!(
                "  delta={}  weights={}\n",
                fmt_delta(&u.delta),
                fmt_weight_pairs(&pairs),
            ));
        }
    }
    out.push_str(&format!(
        "compactified fiber: {} strata, zero-dim coefficient {}, positive-dim exact {}, bounded {}\n",
        report.shat.strata.len(),
        report.shat.zero_dim_nu_coeff,
        report.shat_positive_exact,
        report.shat_bounded,
    ));
    out
}
