//! Linear-scan reference for the query filter language, run against
//! randomly generated sheets.
#![allow(dead_code)]

use std::collections::BTreeMap;

use cutscene_core::assets::workbook::parse_sheet;
use cutscene_core::assets::{AssetRegistry, IncludeGenerated};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

const SHEET: &str = "Prop";
const WORDS: [&str; 10] = [
    "guard", "Warrior", "merchant", "Old_Sage", "captain", "GUARD_ELITE", "child", "scout 2", "Guardian", "sage",
];
const STR_FIELDS: [&str; 3] = ["name", "role", "mood"];
const FLOAT_FIELDS: [&str; 2] = ["duration", "scale"];
const INT_FIELDS: [&str; 1] = ["frames"];

#[derive(Clone)]
enum Cell {
    Missing,
    Text(String),
    Float(f64),
    Int(i64),
}

impl Cell {
    fn tsv(&self) -> String {
        match self {
            Cell::Missing => String::new(),
            Cell::Text(s) => s.clone(),
            Cell::Float(f) => f.to_string(),
            Cell::Int(i) => i.to_string(),
        }
    }

    fn json(&self) -> Option<Value> {
        match self {
            Cell::Missing => None,
            Cell::Text(s) => Some(json!(s)),
            Cell::Float(f) => Some(json!(f)),
            Cell::Int(i) => Some(json!(i)),
        }
    }
}

struct Row {
    id: String,
    public: Vec<(&'static str, Cell)>,
    secret: String,
}

#[derive(Debug, Clone)]
enum Filter {
    Exact(String),
    Contains(String),
    Prefix(String),
    Suffix(String),
    Either(String, String),
    Cmp(&'static str, f64),
}

impl Filter {
    fn raw(&self) -> String {
        match self {
            Filter::Exact(s) => s.clone(),
            Filter::Contains(s) => format!("/{s}/"),
            Filter::Prefix(s) => format!("/^{s}/"),
            Filter::Suffix(s) => format!("/{s}$/"),
            Filter::Either(a, b) => format!("/{a}|{b}/"),
            Filter::Cmp(op, v) => format!("{op}{v}"),
        }
    }

    fn accepts(&self, cell: &Cell) -> bool {
        let text = cell.tsv().to_lowercase();
        match self {
            Filter::Exact(s) => text == s.to_lowercase(),
            Filter::Contains(s) => text.contains(&s.to_lowercase()),
            Filter::Prefix(s) => text.starts_with(&s.to_lowercase()),
            Filter::Suffix(s) => text.ends_with(&s.to_lowercase()),
            Filter::Either(a, b) => text.contains(&a.to_lowercase()) || text.contains(&b.to_lowercase()),
            Filter::Cmp(op, rhs) => {
                let lhs = match cell {
                    Cell::Float(f) => *f,
                    Cell::Int(i) => *i as f64,
                    _ => unreachable!("numeric filters only target numeric fields"),
                };
                match *op {
                    ">" => lhs > *rhs,
                    ">=" => lhs >= *rhs,
                    "<" => lhs < *rhs,
                    "<=" => lhs <= *rhs,
                    _ => lhs == *rhs,
                }
            }
        }
    }
}

fn random_case(rng: &mut ChaCha8Rng, s: &str) -> String {
    s.chars()
        .map(|c| if rng.gen_bool(0.5) { c.to_ascii_uppercase() } else { c.to_ascii_lowercase() })
        .collect()
}

fn random_rows(rng: &mut ChaCha8Rng, count: usize, sheet: usize) -> Vec<Row> {
    (0..count)
        .map(|i| {
            let mut public = Vec::new();
            for f in STR_FIELDS {
                let cell = if rng.gen_bool(0.1) {
                    Cell::Missing
                } else {
                    Cell::Text(WORDS.choose(rng).unwrap().to_string())
                };
                public.push((f, cell));
            }
            for f in FLOAT_FIELDS {
                // Odd eighths: exact in binary and never printed as an integer.
                public.push((f, Cell::Float((2 * rng.gen_range(-400..400) + 1) as f64 / 8.0)));
            }
            for f in INT_FIELDS {
                public.push((f, Cell::Int(rng.gen_range(0..300))));
            }
            Row {
                id: format!("prop_{sheet}_{i:03}"),
                public,
                secret: format!("/Game/Private/Path_{i}"),
            }
        })
        .collect()
}

fn sheet_text(rows: &[Row]) -> String {
    let mut fields: Vec<(&str, &str, &str)> = vec![("identifier", "asset_id", "str"), ("loader", "loader_type", "str")];
    fields.extend(STR_FIELDS.iter().map(|f| ("public data", *f, "str")));
    fields.extend(FLOAT_FIELDS.iter().map(|f| ("public data", *f, "float")));
    fields.extend(INT_FIELDS.iter().map(|f| ("public data", *f, "int")));
    fields.push(("private data", "asset_path", "str"));
    let mut lines = vec![
        fields.iter().map(|f| f.0).collect::<Vec<_>>().join("\t"),
        fields.iter().map(|f| f.1).collect::<Vec<_>>().join("\t"),
        fields.iter().map(|f| f.2).collect::<Vec<_>>().join("\t"),
        fields.iter().map(|f| format!("{} column", f.1)).collect::<Vec<_>>().join("\t"),
    ];
    for row in rows {
        let mut cells = vec![row.id.clone(), "static_prop".to_string()];
        cells.extend(row.public.iter().map(|(_, c)| c.tsv()));
        cells.push(row.secret.clone());
        lines.push(cells.join("\t"));
    }
    lines.join("\n") + "\n"
}

fn random_filter(rng: &mut ChaCha8Rng, rows: &[Row], field: &'static str) -> Filter {
    let numeric = !STR_FIELDS.contains(&field);
    // Draw most operands from real cells so filters actually hit.
    let sample = rows
        .choose(rng)
        .and_then(|r| r.public.iter().find(|(f, _)| *f == field))
        .map(|(_, c)| c.tsv())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| WORDS.choose(rng).unwrap().to_string());
    let piece = |rng: &mut ChaCha8Rng, s: &str| -> String {
        let chars: Vec<char> = s.chars().collect();
        let a = rng.gen_range(0..chars.len());
        let b = rng.gen_range(a + 1..=chars.len().min(a + 4));
        let p: String = chars[a..b].iter().collect();
        // Keep regex operands literal.
        p.replace(['.', '-'], "")
    };
    let kind = if numeric { rng.gen_range(0..7) } else { rng.gen_range(0..5) };
    match kind {
        0 => Filter::Exact(random_case(rng, &sample)),
        1 => {
            let p = piece(rng, &sample);
            Filter::Contains(random_case(rng, &p))
        }
        2 => {
            let cut = rng.gen_range(1..=sample.len());
            Filter::Prefix(random_case(rng, &sample[..cut].replace(['.', '-'], "")))
        }
        3 => {
            let cut = rng.gen_range(0..sample.len());
            Filter::Suffix(random_case(rng, &sample[cut..].replace(['.', '-'], "")))
        }
        4 => {
            let other = WORDS.choose(rng).unwrap();
            Filter::Either(piece(rng, &sample), piece(rng, other))
        }
        _ => {
            let op = *[">", ">=", "<", "<=", "="].choose(rng).unwrap();
            let rhs: f64 = match sample.parse() {
                Ok(v) if rng.gen_bool(0.5) => v,
                _ => rng.gen_range(-60.0..300.0f64).round(),
            };
            Filter::Cmp(op, rhs)
        }
    }
}

fn expected(rows: &[Row], filters: &[(&'static str, Filter)]) -> Vec<Value> {
    rows.iter()
        .filter(|row| {
            filters.iter().all(|(field, f)| {
                let cell = &row.public.iter().find(|(n, _)| n == field).unwrap().1;
                !matches!(cell, Cell::Missing) && f.accepts(cell)
            })
        })
        .map(|row| {
            let mut m = Map::new();
            m.insert("identifier".into(), json!(row.id));
            for (f, c) in &row.public {
                if let Some(v) = c.json() {
                    m.insert(f.to_string(), v);
                }
            }
            Value::Object(m)
        })
        .collect()
}

/// Public view rule: only the identifier and public fields ever appear.
fn sanitized(results: &[Value], rows: &[Row]) -> Result<(), String> {
    let mut allowed = vec!["identifier"];
    allowed.extend(STR_FIELDS.iter().chain(&FLOAT_FIELDS).chain(&INT_FIELDS));
    for r in results {
        let obj = r.as_object().ok_or("result is not an object")?;
        if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(format!("result exposes '{k}'"));
        }
        let text = r.to_string();
        if text.contains("asset_path") || text.contains("/Game/Private") || text.contains("static_prop") {
            return Err(format!("private data leaked: {text}"));
        }
        if !obj.contains_key("identifier") || !rows.iter().any(|row| obj["identifier"] == row.id.as_str()) {
            return Err(format!("bad identifier in {text}"));
        }
    }
    Ok(())
}

/// `sheets` random sheets of up to `max_rows` rows, `per_sheet` random
/// filter sets each.
pub fn check_queries(seed: u64, sheets: usize, per_sheet: usize, max_rows: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all_fields: Vec<&'static str> = STR_FIELDS.iter().chain(&FLOAT_FIELDS).chain(&INT_FIELDS).copied().collect();
    for s in 0..sheets {
        let count = rng.gen_range(0..=max_rows);
        let rows = random_rows(&mut rng, count, s);
        let sheet = parse_sheet(SHEET, &sheet_text(&rows)).map_err(|e| e.to_string())?;
        let registry = AssetRegistry::empty(vec![sheet]).map_err(|e| e.to_string())?;

        let private = BTreeMap::from([("asset_path".to_string(), json!("/Game"))]);
        if registry.query(SHEET, &private, IncludeGenerated::Auto).is_ok() {
            return Err("a private field was accepted as a filter".into());
        }

        for q in 0..per_sheet {
            let n = rng.gen_range(0..=3);
            let fields: Vec<&'static str> = all_fields.choose_multiple(&mut rng, n).copied().collect();
            let filters: Vec<(&'static str, Filter)> =
                fields.iter().map(|f| (*f, random_filter(&mut rng, &rows, f))).collect();
            let map: BTreeMap<String, Value> = filters.iter().map(|(f, x)| (f.to_string(), json!(x.raw()))).collect();
            let got = registry
                .query(SHEET, &map, IncludeGenerated::Auto)
                .map_err(|e| format!("sheet {s} query {q} {map:?}: {e}"))?;
            let want = expected(&rows, &filters);
            if got != want {
                return Err(format!(
                    "sheet {s} query {q} {map:?}: {} results, oracle {}",
                    got.len(),
                    want.len()
                ));
            }
            sanitized(&got, &rows).map_err(|e| format!("sheet {s} query {q}: {e}"))?;
        }
    }
    Ok(())
}
