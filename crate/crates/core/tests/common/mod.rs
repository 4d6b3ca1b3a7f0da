#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use chordlens::ingest::{apply_schema, parse_arff, parse_csv_with_schema, parse_schema};
use chordlens::relate::{dissimilarity_matrix, neighborhoods, spearman_matrix, NeighborPolicy};
use chordlens::{ColumnKind, ColumnSchema, ProjectTable, RelationMatrix};

pub const RATING_COLUMNS: [&str; 15] = [
    "RELY", "DATA", "CPLX", "TIME", "STOR", "VIRT", "TURN", "ACAP", "AEXP", "PCAP", "VEXP", "LEXP",
    "MODP", "TOOL", "SCED",
];

/// Canonical rank of a cost-driver rating, or `None` for anything else.
pub fn rating_rank(level: &str) -> Option<usize> {
    let l = level.to_ascii_lowercase().replace(['-', ' '], "_");
    Some(match l.as_str() {
        "vl" | "very_low" => 0,
        "l" | "low" => 1,
        "n" | "nominal" => 2,
        "h" | "high" => 3,
        "vh" | "very_high" => 4,
        "xh" | "extra_high" | "extra_high_" => 5,
        _ => return None,
    })
}

/// Nominal columns whose levels are all cost-driver ratings become ordinal,
/// ordered by rating rank.
pub fn retype_ratings(table: &ProjectTable) -> chordlens::Result<ProjectTable> {
    let mut overrides = Vec::new();
    for c in table.columns() {
        if let ColumnKind::Nominal(levels) = &c.kind {
            if !levels.is_empty() && levels.iter().all(|l| rating_rank(l).is_some()) {
                let mut ordered = levels.clone();
                ordered.sort_by_key(|l| rating_rank(l));
                overrides.push(ColumnSchema::new(
                    c.name.clone(),
                    ColumnKind::Ordinal(ordered),
                    c.role,
                ));
            }
        }
    }
    apply_schema(table, &overrides)
}

/// Column lookup that tolerates the naming differences between variants.
pub fn find_column(table: &ProjectTable, name: &str) -> Option<usize> {
    let aliases: &[&str] = match name {
        "ACT_EFFORT" => &["act_effort", "actual", "effort", "actual_effort"],
        "LOC" => &["loc", "kloc", "equivphyskloc"],
        other => return find_exact(table, &[other.to_ascii_lowercase().as_str()]),
    };
    find_exact(table, aliases)
}

fn find_exact(table: &ProjectTable, names: &[&str]) -> Option<usize> {
    table
        .columns()
        .iter()
        .position(|c| names.iter().any(|n| c.name.eq_ignore_ascii_case(n)))
}

/// Locates the COCOMO NASA file: `CHORDLENS_COCOMO`, else a few names under `data/`.
pub fn cocomo_path() -> Option<PathBuf> {
    if let Ok(p) = std::env::var("CHORDLENS_COCOMO") {
        return Some(PathBuf::from(p));
    }
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    [
        "cocomonasa_v1.arff",
        "cocomonasa.arff",
        "cocomo_nasa.arff",
        "cocomonasa.csv",
    ]
    .iter()
    .map(|n| data.join(n))
    .find(|p| p.exists())
}

pub fn load_cocomo(path: &Path) -> Result<ProjectTable, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let is_arff = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("arff"));
    let table = if is_arff {
        parse_arff(&text).map_err(|e| e.to_string())?
    } else {
        let schema_path = std::env::var("CHORDLENS_COCOMO_SCHEMA")
            .map(PathBuf::from)
            .unwrap_or_else(|_| {
                Path::new(env!("CARGO_MANIFEST_DIR")).join("data/cocomonasa.schema")
            });
        let schema = std::fs::read_to_string(&schema_path)
            .map_err(|e| format!("{}: {e}", schema_path.display()))?;
        parse_csv_with_schema(&text, &schema).map_err(|e| e.to_string())?
    };
    let mut table = retype_ratings(&table).map_err(|e| e.to_string())?;
    let has_target = table
        .columns()
        .iter()
        .any(|c| c.role == chordlens::Role::Target);
    if let (false, Some(e)) = (has_target, find_column(&table, "ACT_EFFORT")) {
        let c = &table.columns()[e];
        let target = ColumnSchema::new(c.name.clone(), c.kind.clone(), chordlens::Role::Target);
        table = apply_schema(&table, &[target]).map_err(|e| e.to_string())?;
    }
    if let Ok(schema_path) = std::env::var("CHORDLENS_COCOMO_SCHEMA") {
        if is_arff {
            let schema =
                std::fs::read_to_string(&schema_path).map_err(|e| format!("{schema_path}: {e}"))?;
            let decls = parse_schema(&schema).map_err(|e| e.to_string())?;
            table = apply_schema(&table, &decls).map_err(|e| e.to_string())?;
        }
    }
    Ok(table)
}

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

/// Off-diagonal pairs at distance <= 1e-12.
pub fn zero_pairs(table: &ProjectTable) -> Result<Vec<(String, String)>, String> {
    let d = dissimilarity_matrix(table).map_err(|e| e.to_string())?;
    let mut pairs = Vec::new();
    for i in 0..d.len() {
        for j in (i + 1)..d.len() {
            if d.get(i, j).is_some_and(|v| v.abs() <= 1e-12) {
                pairs.push((d.labels()[i].clone(), d.labels()[j].clone()));
            }
        }
    }
    Ok(pairs)
}

pub fn is_reference_pair(pairs: &[(String, String)]) -> bool {
    pairs
        .iter()
        .any(|(a, b)| (a == "7" && b == "33") || (a == "33" && b == "7"))
}

pub fn check_zero_pair(table: &ProjectTable) -> Outcome {
    match zero_pairs(table) {
        Ok(pairs) => Outcome {
            pass: !pairs.is_empty(),
            detail: format!(
                "zero pairs {:?}; strict (7,33) {}",
                pairs,
                if is_reference_pair(&pairs) {
                    "holds"
                } else {
                    "does not hold"
                }
            ),
        },
        Err(e) => fail(e),
    }
}

fn effort_correlations(table: &ProjectTable) -> Result<(RelationMatrix, usize), String> {
    let effort_col = find_column(table, "ACT_EFFORT").ok_or("no effort column")?;
    let name = &table.columns()[effort_col].name;
    // the effort column is usually the target; correlate it like any attribute
    let mut cols = table.columns().to_vec();
    for c in &mut cols {
        if c.role == chordlens::Role::Target {
            c.role = chordlens::Role::Feature;
        }
    }
    let t = ProjectTable::new(cols, table.rows().to_vec()).map_err(|e| e.to_string())?;
    let rho = spearman_matrix(&t).map_err(|e| e.to_string())?;
    let idx = rho.index_of(name).ok_or("effort column not correlated")?;
    Ok((rho, idx))
}

fn rho_index(rho: &RelationMatrix, table: &ProjectTable, name: &str) -> Option<usize> {
    let c = find_column(table, name)?;
    rho.index_of(&table.columns()[c].name)
}

pub fn check_effort_signs(table: &ProjectTable) -> Outcome {
    let (rho, e) = match effort_correlations(table) {
        Ok(x) => x,
        Err(msg) => return fail(msg),
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, positive) in [
        ("LOC", true),
        ("DATA", true),
        ("TURN", true),
        ("ACAP", true),
        ("SCED", true),
        ("CPLX", false),
        ("LEXP", false),
    ] {
        let v = rho_index(&rho, table, name).and_then(|i| rho.get(e, i));
        let good = v.is_some_and(|v| if positive { v > 0.0 } else { v < 0.0 });
        ok &= good;
        parts.push(format!(
            "{name}={}",
            v.map_or("undefined".into(), |v| format!("{v:+.3}"))
        ));
    }
    Outcome {
        pass: ok,
        detail: parts.join(" "),
    }
}

pub fn check_strong_pairs(table: &ProjectTable) -> Outcome {
    let rho = match spearman_matrix(table) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let predictor: Vec<bool> = rho
        .labels()
        .iter()
        .map(|l| {
            table
                .column_index(l)
                .is_some_and(|c| table.columns()[c].role == chordlens::Role::Feature)
        })
        .collect();
    let mut all: Vec<f64> = Vec::new();
    for i in 0..rho.len() {
        for j in (i + 1)..rho.len() {
            if !(predictor[i] && predictor[j]) {
                continue;
            }
            if let Some(v) = rho.get(i, j) {
                all.push(v.abs());
            }
        }
    }
    if all.is_empty() {
        return fail("no defined predictor pairs".into());
    }
    all.sort_by(f64::total_cmp);
    let q3 = upper_quartile(&all);
    let mut ok = true;
    let mut parts = vec![format!("Q3={q3:.3}")];
    for (a, b) in [("ACAP", "AEXP"), ("STOR", "TIME"), ("TIME", "DATA")] {
        let v = match (rho_index(&rho, table, a), rho_index(&rho, table, b)) {
            (Some(i), Some(j)) => rho.get(i, j).map(f64::abs),
            _ => None,
        };
        ok &= v.is_some_and(|v| v >= q3);
        parts.push(format!(
            "|{a},{b}|={}",
            v.map_or("undefined".into(), |v| format!("{v:.3}"))
        ));
    }
    Outcome {
        pass: ok,
        detail: parts.join(" "),
    }
}

/// Linear-interpolation 75th percentile of sorted values.
pub fn upper_quartile(sorted: &[f64]) -> f64 {
    let pos = 0.75 * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Cutoffs tried are the distinct similarities of `label`'s row.
pub fn neighbor_sets(sim: &RelationMatrix, label: &str) -> Vec<BTreeSet<String>> {
    let Some(i) = sim.index_of(label) else {
        return Vec::new();
    };
    let mut cutoffs: Vec<f64> = (0..sim.len())
        .filter(|&j| j != i)
        .filter_map(|j| sim.get(i, j))
        .collect();
    cutoffs.sort_by(f64::total_cmp);
    cutoffs.dedup();
    cutoffs
        .into_iter()
        .filter_map(|c| {
            let report = neighborhoods(sim, NeighborPolicy::MinSimilarity(c)).ok()?;
            Some(
                report
                    .neighbors_of(label)?
                    .iter()
                    .map(|(l, _)| l.clone())
                    .collect(),
            )
        })
        .collect()
}

pub fn check_neighborhood(table: &ProjectTable, strict_order: bool) -> Outcome {
    let sim = match dissimilarity_matrix(table).and_then(|d| d.to_similarity()) {
        Ok(s) => s,
        Err(e) => return fail(e.to_string()),
    };
    let want: BTreeSet<String> = ["29", "30", "31", "32"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let strict = neighbor_sets(&sim, "28").contains(&want);
    if strict {
        return Outcome {
            pass: true,
            detail: "strict: 28 -> {29,30,31,32} at some cutoff".into(),
        };
    }
    if strict_order {
        return Outcome {
            pass: false,
            detail: "strict form fails and row order matches the reference numbering".into(),
        };
    }
    // row order differs: look for any project with an exactly four-member neighbourhood
    for label in sim.labels() {
        if let Some(s) = neighbor_sets(&sim, label)
            .into_iter()
            .find(|s| s.len() == 4)
        {
            return Outcome {
                pass: true,
                detail: format!("order-insensitive: {label} -> {s:?}"),
            };
        }
    }
    fail("no project has a four-member neighbourhood at any cutoff".into())
}

fn fail(detail: String) -> Outcome {
    Outcome {
        pass: false,
        detail,
    }
}
