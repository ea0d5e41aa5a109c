//! Static asset sheets stored as tab-separated files.
//!
//! Each `<AssetType>.tsv` starts with four header rows: column category
//! (`identifier`, `loader`, `public data`, `private data`), field name, data
//! type (`str`, `float`, `int`, `bool`) and a free-text description. Every
//! following row is one asset. Empty cells leave the field unset.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;

use serde_json::{Number, Value};

use super::{AssetError, AssetRecord, AssetSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Identifier,
    Loader,
    Public,
    Private,
}

impl Category {
    fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "identifier" => Some(Category::Identifier),
            "loader" => Some(Category::Loader),
            "public data" | "public" => Some(Category::Public),
            "private data" | "private" => Some(Category::Private),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldType {
    Str,
    Float,
    Int,
    Bool,
}

impl FieldType {
    fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "str" => Some(FieldType::Str),
            "float" => Some(FieldType::Float),
            "int" => Some(FieldType::Int),
            "bool" => Some(FieldType::Bool),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldType::Str => "str",
            FieldType::Float => "float",
            FieldType::Int => "int",
            FieldType::Bool => "bool",
        }
    }

    /// Convert one cell. `None` means the text is not a valid value.
    pub fn convert(self, cell: &str) -> Option<Value> {
        let t = cell.trim();
        match self {
            FieldType::Str => Some(Value::String(cell.to_string())),
            FieldType::Float => t.parse::<f64>().ok().and_then(Number::from_f64).map(Value::Number),
            FieldType::Int => t.parse::<i64>().ok().map(Value::from),
            FieldType::Bool => match t.to_ascii_lowercase().as_str() {
                "true" | "1" | "yes" => Some(Value::Bool(true)),
                "false" | "0" | "no" => Some(Value::Bool(false)),
                _ => None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub category: Category,
    pub field: String,
    pub dtype: FieldType,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssetSheet {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<AssetRecord>,
}

impl AssetSheet {
    pub fn public_columns(&self) -> impl Iterator<Item = &Column> {
        self.columns.iter().filter(|c| c.category == Category::Public)
    }
}

fn header_err(sheet: &str, reason: impl Into<String>) -> AssetError {
    AssetError::MalformedHeader {
        sheet: sheet.to_string(),
        reason: reason.into(),
    }
}

fn read_rows(text: &str) -> Result<Vec<Vec<String>>, csv::Error> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(false)
        .flexible(true)
        .quoting(false)
        .from_reader(text.as_bytes());
    reader
        .records()
        .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect()
}

/// Parse one sheet from its TSV text.
pub fn parse_sheet(name: &str, text: &str) -> Result<AssetSheet, AssetError> {
    let rows = read_rows(text).map_err(|e| header_err(name, e.to_string()))?;
    if rows.len() < 4 {
        return Err(header_err(name, "expected 4 header rows"));
    }
    let width = rows[0].len();
    if rows[1].len() != width || rows[2].len() != width {
        return Err(header_err(name, "header rows 1-3 must have the same number of columns"));
    }
    let mut columns = Vec::with_capacity(width);
    for i in 0..width {
        let category = Category::parse(&rows[0][i])
            .ok_or_else(|| header_err(name, format!("column {} has unknown category '{}'", i + 1, rows[0][i])))?;
        let field = rows[1][i].trim().to_string();
        if field.is_empty() {
            return Err(header_err(name, format!("column {} has no field name", i + 1)));
        }
        let dtype = FieldType::parse(&rows[2][i])
            .ok_or_else(|| header_err(name, format!("column '{field}' has unknown data type '{}'", rows[2][i])))?;
        let description = rows[3].get(i).map(|s| s.trim().to_string()).unwrap_or_default();
        columns.push(Column {
            category,
            field,
            dtype,
            description,
        });
    }
    let count = |c: Category| columns.iter().filter(|col| col.category == c).count();
    if count(Category::Identifier) != 1 {
        return Err(header_err(name, "exactly one identifier column is required"));
    }
    if count(Category::Loader) != 1 {
        return Err(header_err(name, "exactly one loader column is required"));
    }
    let mut seen = HashSet::new();
    for col in &columns {
        if !seen.insert(col.field.as_str()) {
            return Err(header_err(name, format!("duplicate field '{}'", col.field)));
        }
        if col.category == Category::Public && col.field == "identifier" {
            return Err(header_err(name, "a public field may not be called 'identifier'"));
        }
    }

    let mut records = Vec::new();
    let mut ids = HashSet::new();
    for (r, row) in rows.iter().enumerate().skip(4) {
        if row.iter().all(|c| c.trim().is_empty()) {
            continue;
        }
        if row.len() > width {
            return Err(header_err(name, format!("row {} has more cells than the header", r + 1)));
        }
        let mut identifier = String::new();
        let mut loader_type = String::new();
        let mut public_data = BTreeMap::new();
        let mut private_data = BTreeMap::new();
        for (col, cell) in columns.iter().zip(row.iter().map(String::as_str).chain(std::iter::repeat(""))) {
            if cell.trim().is_empty() {
                continue;
            }
            let value = col.dtype.convert(cell).ok_or_else(|| AssetError::TypeConversion {
                sheet: name.to_string(),
                row: r + 1,
                column: col.field.clone(),
                value: cell.to_string(),
                dtype: col.dtype.name(),
            })?;
            match col.category {
                Category::Identifier => identifier = cell.trim().to_string(),
                Category::Loader => loader_type = cell.trim().to_string(),
                Category::Public => {
                    public_data.insert(col.field.clone(), value);
                }
                Category::Private => {
                    private_data.insert(col.field.clone(), value);
                }
            }
        }
        if identifier.is_empty() {
            return Err(header_err(name, format!("row {} has no identifier", r + 1)));
        }
        if loader_type.is_empty() {
            return Err(header_err(name, format!("row {} has no loader type", r + 1)));
        }
        if !ids.insert(identifier.clone()) {
            return Err(AssetError::DuplicateIdentifier(identifier));
        }
        records.push(AssetRecord {
            identifier,
            loader_type,
            asset_kind: name.to_string(),
            source: AssetSource::Static,
            public_data,
            private_data,
        });
    }
    Ok(AssetSheet {
        name: name.to_string(),
        columns,
        rows: records,
    })
}

/// Load every `*.tsv` file in `dir`, sorted by sheet name.
pub fn load_static_tables(dir: &Path) -> Result<Vec<AssetSheet>, AssetError> {
    let entries = fs::read_dir(dir).map_err(|e| AssetError::Io(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "tsv"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(AssetError::EmptyWorkbook(dir.display().to_string()));
    }
    let mut sheets = Vec::with_capacity(paths.len());
    let mut ids = HashSet::new();
    for path in paths {
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        let text = fs::read_to_string(&path).map_err(|e| AssetError::Io(format!("{}: {e}", path.display())))?;
        let sheet = parse_sheet(&name, &text)?;
        for rec in &sheet.rows {
            if !ids.insert(rec.identifier.clone()) {
                return Err(AssetError::DuplicateIdentifier(rec.identifier.clone()));
            }
        }
        sheets.push(sheet);
    }
    Ok(sheets)
}

/// Render a sheet back to TSV text; used by tests and fixture generators.
pub fn render_sheet(columns: &[Column], rows: &[Vec<String>]) -> String {
    let category = |c: Category| match c {
        Category::Identifier => "identifier",
        Category::Loader => "loader",
        Category::Public => "public data",
        Category::Private => "private data",
    };
    let mut out = String::new();
    let mut line = |cells: Vec<String>| {
        out.push_str(&cells.join("\t"));
        out.push('\n');
    };
    line(columns.iter().map(|c| category(c.category).to_string()).collect());
    line(columns.iter().map(|c| c.field.clone()).collect());
    line(columns.iter().map(|c| c.dtype.name().to_string()).collect());
    line(columns.iter().map(|c| c.description.clone()).collect());
    for row in rows {
        line(row.clone());
    }
    out
}
