//! Asset registry: static workbook sheets plus runtime-imported assets,
//! queried through one interface that only ever exposes public fields.

mod dynamic;
pub mod filter;
pub mod wav;
pub mod workbook;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

pub use dynamic::{sanitize_hint, ImportContext, ImportRequest, ReceiverResult, SourceType};
pub use filter::{parse_filter, FilterExpr};
pub use workbook::{load_static_tables, parse_sheet, AssetSheet, Category, Column, FieldType};

pub const DYNAMIC_REGISTRY_FILE: &str = "dynamic_registry.json";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssetError {
    #[error("sheet '{sheet}': malformed header: {reason}")]
    MalformedHeader { sheet: String, reason: String },
    #[error("sheet '{sheet}' row {row} column '{column}': cannot convert '{value}' to {dtype}")]
    TypeConversion {
        sheet: String,
        row: usize,
        column: String,
        value: String,
        dtype: &'static str,
    },
    #[error("duplicate asset identifier '{0}'")]
    DuplicateIdentifier(String),
    #[error("no .tsv sheets found in {0}")]
    EmptyWorkbook(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("unknown asset type '{name}'; queryable types: {available}")]
    UnknownAssetType { name: String, available: String },
    #[error("unknown filter field '{field}' for {asset_type}; filterable fields: {available}")]
    UnknownFilterField {
        asset_type: String,
        field: String,
        available: String,
    },
    #[error("invalid regex '{pattern}': {reason}")]
    InvalidRegex { pattern: String, reason: String },
    #[error("cannot parse a number in filter '{0}'")]
    UnparseableNumber(String),
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("field '{field}' value '{value}' is not numeric")]
    NonNumericField { field: String, value: String },
    #[error("invalid include_generated '{0}'; use auto, only or never")]
    InvalidIncludeMode(String),
    #[error("unknown data type '{name}'; importable types: {available}")]
    UnknownDataType { name: String, available: String },
    #[error("invalid source_type '{0}'; use base64, file_path or url")]
    InvalidSourceType(String),
    #[error("could not decode data source: {0}")]
    Decode(String),
    #[error("could not fetch url: {0}")]
    Fetch(String),
    #[error("receiver failed: {0}")]
    ReceiverFailed(String),
    #[error("'{0}' is already registered")]
    DuplicateRegistration(String),
    #[error("no loader registered for loader type '{0}'")]
    UnknownLoader(String),
    #[error("loader '{loader}' failed for '{identifier}': {reason}")]
    LoaderFailed {
        loader: String,
        identifier: String,
        reason: String,
    },
    #[error("unknown asset '{0}'")]
    UnknownAsset(String),
    #[error("invalid import metadata: {0}")]
    InvalidMetadata(String),
    #[error("dynamic registry file is invalid: {0}")]
    Persistence(String),
}

pub type Result<T, E = AssetError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssetSource {
    Static,
    Dynamic,
}

/// Full asset record. Only the identifier and `public_data` are ever shown
/// to agents; loaders get the whole record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssetRecord {
    pub identifier: String,
    pub loader_type: String,
    pub asset_kind: String,
    pub source: AssetSource,
    pub public_data: BTreeMap<String, Value>,
    pub private_data: BTreeMap<String, Value>,
}

impl AssetRecord {
    /// Agent-facing view: identifier plus public fields, flattened.
    pub fn sanitized(&self) -> Value {
        let mut map = Map::new();
        map.insert("identifier".into(), Value::String(self.identifier.clone()));
        for (k, v) in &self.public_data {
            map.insert(k.clone(), v.clone());
        }
        Value::Object(map)
    }

    pub fn number(&self, field: &str) -> Option<f64> {
        match self.public_data.get(field)? {
            Value::Number(n) => n.as_f64(),
            Value::String(s) => s.trim().parse().ok(),
            _ => None,
        }
    }

    pub fn text(&self, field: &str) -> Option<&str> {
        self.public_data.get(field).and_then(Value::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IncludeGenerated {
    #[default]
    Auto,
    Only,
    Never,
}

impl IncludeGenerated {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "auto" | "" => Ok(Self::Auto),
            "only" => Ok(Self::Only),
            "never" => Ok(Self::Never),
            other => Err(AssetError::InvalidIncludeMode(other.to_string())),
        }
    }
}

/// `(asset_id, full record, tool arguments) -> loader output`.
pub type LoaderFn = Arc<dyn Fn(&str, &AssetRecord, Option<&Value>) -> Result<Value, String> + Send + Sync>;

/// Post-processing for one importable type.
pub type ReceiverFn = Arc<dyn Fn(&ImportContext) -> ReceiverResult + Send + Sync>;

#[derive(Clone)]
pub struct ReceiverSpec {
    pub importable_type: String,
    pub loader_type: String,
    pub asset_kind: String,
    pub description: String,
    pub extensions: Vec<String>,
    /// Public fields the receiver always fills, with descriptions.
    pub provided_fields: Vec<(String, String)>,
    /// Metadata the caller is encouraged to supply, with descriptions.
    pub recommended_metadata: Vec<(String, String)>,
    pub func: ReceiverFn,
}

impl fmt::Debug for ReceiverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReceiverSpec")
            .field("importable_type", &self.importable_type)
            .field("loader_type", &self.loader_type)
            .field("asset_kind", &self.asset_kind)
            .finish_non_exhaustive()
    }
}

pub struct AssetRegistry {
    sheets: BTreeMap<String, AssetSheet>,
    dynamic: BTreeMap<String, AssetRecord>,
    loaders: BTreeMap<String, LoaderFn>,
    receivers: BTreeMap<String, ReceiverSpec>,
    dynamic_dir: Option<PathBuf>,
}

impl fmt::Debug for AssetRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AssetRegistry")
            .field("sheets", &self.sheets.keys().collect::<Vec<_>>())
            .field("dynamic", &self.dynamic.len())
            .field("loaders", &self.loaders.keys().collect::<Vec<_>>())
            .field("receivers", &self.receivers.keys().collect::<Vec<_>>())
            .finish()
    }
}

fn join<'a>(items: impl IntoIterator<Item = &'a str>) -> String {
    items.into_iter().collect::<Vec<_>>().join(", ")
}

impl AssetRegistry {
    /// Registry over the given sheets with no loaders or receivers.
    pub fn empty(sheets: Vec<AssetSheet>) -> Result<Self> {
        let mut registry = Self {
            sheets: BTreeMap::new(),
            dynamic: BTreeMap::new(),
            loaders: BTreeMap::new(),
            receivers: BTreeMap::new(),
            dynamic_dir: None,
        };
        for sheet in sheets {
            for rec in &sheet.rows {
                if registry.get(&rec.identifier).is_some() {
                    return Err(AssetError::DuplicateIdentifier(rec.identifier.clone()));
                }
            }
            if registry.sheets.contains_key(&sheet.name) {
                return Err(AssetError::DuplicateRegistration(sheet.name.clone()));
            }
            registry.sheets.insert(sheet.name.clone(), sheet);
        }
        Ok(registry)
    }

    /// Registry over the sheets with the default loaders and receivers.
    pub fn with_defaults(sheets: Vec<AssetSheet>) -> Result<Self> {
        let mut registry = Self::empty(sheets)?;
        dynamic::register_defaults(&mut registry)?;
        Ok(registry)
    }

    pub fn from_workbook(dir: &Path) -> Result<Self> {
        Self::with_defaults(load_static_tables(dir)?)
    }

    /// Persist dynamic assets under `dir` and load any registry already there.
    pub fn set_dynamic_dir(&mut self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| AssetError::Io(format!("{}: {e}", dir.display())))?;
        let file = dir.join(DYNAMIC_REGISTRY_FILE);
        if file.exists() {
            let text = std::fs::read_to_string(&file).map_err(|e| AssetError::Io(e.to_string()))?;
            for rec in dynamic::parse_registry(&text)? {
                if self.static_record(&rec.identifier).is_some() {
                    return Err(AssetError::DuplicateIdentifier(rec.identifier));
                }
                self.dynamic.insert(rec.identifier.clone(), rec);
            }
        }
        self.dynamic_dir = Some(dir.to_path_buf());
        Ok(())
    }

    pub fn dynamic_dir(&self) -> Option<&Path> {
        self.dynamic_dir.as_deref()
    }

    pub fn register_loader(&mut self, loader_type: &str, func: LoaderFn) -> Result<()> {
        if self.loaders.contains_key(loader_type) {
            return Err(AssetError::DuplicateRegistration(loader_type.to_string()));
        }
        self.loaders.insert(loader_type.to_string(), func);
        Ok(())
    }

    pub fn register_receiver(&mut self, spec: ReceiverSpec) -> Result<()> {
        if self.receivers.contains_key(&spec.importable_type) {
            return Err(AssetError::DuplicateRegistration(spec.importable_type));
        }
        self.receivers.insert(spec.importable_type.clone(), spec);
        Ok(())
    }

    pub fn loader_types(&self) -> impl Iterator<Item = &str> {
        self.loaders.keys().map(String::as_str)
    }

    pub fn receivers(&self) -> impl Iterator<Item = &ReceiverSpec> {
        self.receivers.values()
    }

    pub fn receiver(&self, importable_type: &str) -> Result<&ReceiverSpec> {
        self.receivers.get(importable_type).ok_or_else(|| AssetError::UnknownDataType {
            name: importable_type.to_string(),
            available: join(self.receivers.keys().map(String::as_str)),
        })
    }

    pub fn sheet(&self, name: &str) -> Option<&AssetSheet> {
        self.sheets.get(name)
    }

    pub fn sheets(&self) -> impl Iterator<Item = &AssetSheet> {
        self.sheets.values()
    }

    fn static_record(&self, identifier: &str) -> Option<&AssetRecord> {
        self.sheets.values().flat_map(|s| s.rows.iter()).find(|r| r.identifier == identifier)
    }

    pub fn get(&self, identifier: &str) -> Option<&AssetRecord> {
        self.static_record(identifier).or_else(|| self.dynamic.get(identifier))
    }

    pub fn dynamic_records(&self) -> impl Iterator<Item = &AssetRecord> {
        self.dynamic.values()
    }

    /// All identifiers of a kind (static sheet name or dynamic asset kind).
    pub fn identifiers_of_kind(&self, kind: &str) -> Vec<&str> {
        let static_ids = self.sheets.get(kind).into_iter().flat_map(|s| s.rows.iter());
        let dynamic_ids = self.dynamic.values().filter(|r| r.asset_kind == kind);
        static_ids.chain(dynamic_ids).map(|r| r.identifier.as_str()).collect()
    }

    /// Identifiers closest to `wanted` (shared prefix, then edit distance).
    pub fn suggest(&self, wanted: &str, kind_prefix: &str, limit: usize) -> Vec<String> {
        let mut candidates: Vec<(usize, &str)> = self
            .sheets
            .values()
            .flat_map(|s| s.rows.iter())
            .chain(self.dynamic.values())
            .filter(|r| r.asset_kind.starts_with(kind_prefix))
            .map(|r| (edit_distance(&wanted.to_lowercase(), &r.identifier.to_lowercase()), r.identifier.as_str()))
            .collect();
        candidates.sort();
        candidates.into_iter().take(limit).map(|(_, id)| id.to_string()).collect()
    }

    /// Static sheet names plus every dynamic asset kind.
    pub fn queryable_types(&self) -> Vec<String> {
        let mut types: BTreeSet<String> = self.sheets.keys().cloned().collect();
        types.extend(self.receivers.values().map(|r| r.asset_kind.clone()));
        types.extend(self.dynamic.values().map(|r| r.asset_kind.clone()));
        types.into_iter().collect()
    }

    fn unknown_type(&self, name: &str) -> AssetError {
        AssetError::UnknownAssetType {
            name: name.to_string(),
            available: self.queryable_types().join(", "),
        }
    }

    /// Filterable public fields of a type with their type name and
    /// description.
    pub fn public_fields(&self, asset_type: &str) -> Result<Vec<(String, String, String)>> {
        let mut fields: BTreeMap<String, (String, String)> = BTreeMap::new();
        let mut known = false;
        if let Some(sheet) = self.sheets.get(asset_type) {
            known = true;
            for col in sheet.public_columns() {
                fields.insert(col.field.clone(), (col.dtype.name().to_string(), col.description.clone()));
            }
        }
        for spec in self.receivers.values().filter(|r| r.asset_kind == asset_type) {
            known = true;
            for (name, desc) in spec.provided_fields.iter().chain(&spec.recommended_metadata) {
                fields.entry(name.clone()).or_insert_with(|| ("any".to_string(), desc.clone()));
            }
        }
        for rec in self.dynamic.values().filter(|r| r.asset_kind == asset_type) {
            known = true;
            for key in rec.public_data.keys() {
                fields.entry(key.clone()).or_insert_with(|| ("any".to_string(), String::new()));
            }
        }
        if !known {
            return Err(self.unknown_type(asset_type));
        }
        Ok(fields.into_iter().map(|(k, (t, d))| (k, t, d)).collect())
    }

    /// Human-readable schema and syntax guide for one type.
    pub fn query_instruction(&self, asset_type: &str) -> Result<String> {
        let fields = self.public_fields(asset_type)?;
        let mut out = format!("Asset type: {asset_type}\nFilterable fields:\n");
        for (name, ty, desc) in &fields {
            if desc.is_empty() {
                out.push_str(&format!("  - {name} ({ty})\n"));
            } else {
                out.push_str(&format!("  - {name} ({ty}): {desc}\n"));
            }
        }
        out.push_str(filter::SYNTAX_GUIDE);
        out.push_str(&format!(
            "\nExample: query_assets(asset_type=\"{asset_type}\", filters={{\"<field>\": \"<expression>\"}})"
        ));
        Ok(out)
    }

    /// Records of a type matching all filters, sanitized.
    pub fn query(
        &self,
        asset_type: &str,
        filters: &BTreeMap<String, Value>,
        include: IncludeGenerated,
    ) -> Result<Vec<Value>> {
        Ok(self
            .query_records(asset_type, filters, include)?
            .into_iter()
            .map(AssetRecord::sanitized)
            .collect())
    }

    pub fn query_records(
        &self,
        asset_type: &str,
        filters: &BTreeMap<String, Value>,
        include: IncludeGenerated,
    ) -> Result<Vec<&AssetRecord>> {
        let fields = self.public_fields(asset_type)?;
        let mut parsed = Vec::with_capacity(filters.len());
        for (field, raw) in filters {
            if !fields.iter().any(|(name, _, _)| name == field) {
                return Err(AssetError::UnknownFilterField {
                    asset_type: asset_type.to_string(),
                    field: field.clone(),
                    available: join(fields.iter().map(|(n, _, _)| n.as_str())),
                });
            }
            parsed.push((field.as_str(), filter::parse_filter_value(raw)?));
        }
        let static_rows = self.sheets.get(asset_type).into_iter().flat_map(|s| s.rows.iter());
        let dynamic_rows = self.dynamic.values().filter(|r| r.asset_kind == asset_type);
        let candidates: Vec<&AssetRecord> = match include {
            IncludeGenerated::Auto => static_rows.chain(dynamic_rows).collect(),
            IncludeGenerated::Only => dynamic_rows.collect(),
            IncludeGenerated::Never => static_rows.collect(),
        };
        let mut out = Vec::new();
        'records: for rec in candidates {
            for (field, expr) in &parsed {
                match rec.public_data.get(*field) {
                    None => continue 'records,
                    Some(value) => {
                        if !expr.matches(field, value)? {
                            continue 'records;
                        }
                    }
                }
            }
            out.push(rec);
        }
        Ok(out)
    }

    /// Dispatch to the loader registered for the record's loader type.
    pub fn invoke_loader(&self, identifier: &str, tool_args: Option<&Value>) -> Result<Value> {
        let rec = self.get(identifier).ok_or_else(|| AssetError::UnknownAsset(identifier.to_string()))?;
        let loader = self
            .loaders
            .get(&rec.loader_type)
            .ok_or_else(|| AssetError::UnknownLoader(rec.loader_type.clone()))?;
        loader(identifier, rec, tool_args).map_err(|reason| AssetError::LoaderFailed {
            loader: rec.loader_type.clone(),
            identifier: identifier.to_string(),
            reason,
        })
    }

    /// Import a payload; the identifier is derived from content and hint.
    pub fn import_dynamic_asset(&mut self, req: &ImportRequest) -> Result<AssetRecord> {
        dynamic::import(self, req, None)
    }

    /// Import a payload under a caller-chosen identifier.
    pub fn import_with_identifier(&mut self, req: &ImportRequest, identifier: &str) -> Result<AssetRecord> {
        dynamic::import(self, req, Some(identifier))
    }

    /// Canonical text of the dynamic registry file.
    pub fn dynamic_registry_text(&self) -> String {
        dynamic::render_registry(self.dynamic.values())
    }

    fn insert_dynamic(&mut self, rec: AssetRecord) -> Result<()> {
        if let Some(dir) = self.dynamic_dir.clone() {
            let mut next = self.dynamic.clone();
            next.insert(rec.identifier.clone(), rec.clone());
            let text = dynamic::render_registry(next.values());
            let tmp = dir.join(format!("{DYNAMIC_REGISTRY_FILE}.tmp"));
            std::fs::write(&tmp, text)
                .and_then(|_| std::fs::rename(&tmp, dir.join(DYNAMIC_REGISTRY_FILE)))
                .map_err(|e| AssetError::Io(e.to_string()))?;
        }
        self.dynamic.insert(rec.identifier.clone(), rec);
        Ok(())
    }
}

fn edit_distance(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.chars().enumerate() {
        let mut cur = vec![i + 1; b.len() + 1];
        for (j, cb) in b.iter().enumerate() {
            let cost = usize::from(ca != *cb);
            cur[j + 1] = (prev[j] + cost).min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}
