//! Runtime asset import: resolve the payload, hand it to the receiver for
//! its importable type, then register and persist the resulting record.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::sync::Arc;

use base64::Engine;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{wav, AssetError, AssetRecord, AssetRegistry, AssetSource, ReceiverSpec, Result};

/// Upper bound for URL downloads.
const MAX_DOWNLOAD_BYTES: u64 = 64 * 1024 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceType {
    Base64,
    FilePath,
    Url,
}

impl SourceType {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "base64" => Ok(SourceType::Base64),
            "file_path" => Ok(SourceType::FilePath),
            "url" => Ok(SourceType::Url),
            other => Err(AssetError::InvalidSourceType(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SourceType::Base64 => "base64",
            SourceType::FilePath => "file_path",
            SourceType::Url => "url",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImportRequest {
    pub data_type: String,
    pub data_source: String,
    pub source_type: SourceType,
    pub file_extension: String,
    pub identifier_hint: String,
    pub metadata: BTreeMap<String, Value>,
}

/// Everything a receiver gets to see about one import.
#[derive(Debug)]
pub struct ImportContext<'a> {
    pub identifier: &'a str,
    pub importable_type: &'a str,
    pub loader_type: &'a str,
    pub asset_kind: &'a str,
    pub raw: &'a [u8],
    pub raw_file_abs: Option<PathBuf>,
    pub source_type: SourceType,
    pub metadata: &'a BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReceiverResult {
    pub success: bool,
    pub asset_path: String,
    pub message: String,
    /// Public fields derived from the payload (e.g. `duration`).
    pub extracted: BTreeMap<String, Value>,
}

impl ReceiverResult {
    pub fn failed(message: impl Into<String>) -> Self {
        Self {
            success: false,
            message: message.into(),
            ..Self::default()
        }
    }
}

/// Lowercase, keep `[a-z0-9_]`, collapse runs of other characters into `_`.
pub fn sanitize_hint(hint: &str) -> String {
    let mut out = String::new();
    for c in hint.chars().flat_map(char::to_lowercase) {
        if c.is_ascii_lowercase() || c.is_ascii_digit() {
            out.push(c);
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

fn content_hash(bytes: &[u8], hint: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher.update(hint.as_bytes());
    hex::encode(hasher.finalize())
}

fn resolve_bytes(req: &ImportRequest) -> Result<Vec<u8>> {
    match req.source_type {
        SourceType::Base64 => {
            let compact: String = req.data_source.chars().filter(|c| !c.is_whitespace()).collect();
            base64::engine::general_purpose::STANDARD
                .decode(compact.as_bytes())
                .map_err(|e| AssetError::Decode(e.to_string()))
        }
        SourceType::FilePath => {
            std::fs::read(&req.data_source).map_err(|e| AssetError::Decode(format!("{}: {e}", req.data_source)))
        }
        SourceType::Url => {
            let response = ureq::get(&req.data_source).call().map_err(|e| AssetError::Fetch(e.to_string()))?;
            let mut bytes = Vec::new();
            response
                .into_body()
                .into_reader()
                .take(MAX_DOWNLOAD_BYTES)
                .read_to_end(&mut bytes)
                .map_err(|e| AssetError::Fetch(e.to_string()))?;
            Ok(bytes)
        }
    }
}

fn clean_extension(ext: &str) -> String {
    ext.trim_start_matches('.').chars().filter(char::is_ascii_alphanumeric).collect::<String>().to_lowercase()
}

pub(super) fn import(reg: &mut AssetRegistry, req: &ImportRequest, fixed_id: Option<&str>) -> Result<AssetRecord> {
    let spec = reg.receiver(&req.data_type)?.clone();
    if req.metadata.contains_key("identifier") {
        return Err(AssetError::InvalidMetadata("metadata may not contain 'identifier'".into()));
    }
    let bytes = resolve_bytes(req)?;
    let hint = sanitize_hint(&req.identifier_hint);
    let hash = content_hash(&bytes, &hint);
    let identifier = match fixed_id {
        Some(id) if id.trim().is_empty() => return Err(AssetError::InvalidMetadata("identifier must not be empty".into())),
        Some(id) => id.to_string(),
        None => format!(
            "{}_{}_{}",
            spec.importable_type,
            if hint.is_empty() { "asset" } else { &hint },
            &hash[..6]
        ),
    };
    if let Some(existing) = reg.dynamic.get(&identifier) {
        let same = existing.private_data.get("content_hash") == Some(&Value::String(hash.clone()))
            && existing.private_data.get("importable_type") == Some(&Value::String(spec.importable_type.clone()));
        return if same {
            Ok(existing.clone())
        } else {
            Err(AssetError::DuplicateIdentifier(identifier))
        };
    }
    if reg.get(&identifier).is_some() {
        return Err(AssetError::DuplicateIdentifier(identifier));
    }

    let ext = clean_extension(&req.file_extension);
    let raw_file = match reg.dynamic_dir() {
        Some(dir) => {
            let raw_dir = dir.join("raw");
            std::fs::create_dir_all(&raw_dir).map_err(|e| AssetError::Io(e.to_string()))?;
            let name = if ext.is_empty() { identifier.clone() } else { format!("{identifier}.{ext}") };
            let path = raw_dir.join(name);
            std::fs::write(&path, &bytes).map_err(|e| AssetError::Io(e.to_string()))?;
            Some(path)
        }
        None => None,
    };
    let remove_raw = |raw: &Option<PathBuf>| {
        if let Some(p) = raw {
            let _ = std::fs::remove_file(p);
        }
    };

    let ctx = ImportContext {
        identifier: &identifier,
        importable_type: &spec.importable_type,
        loader_type: &spec.loader_type,
        asset_kind: &spec.asset_kind,
        raw: &bytes,
        raw_file_abs: raw_file.clone(),
        source_type: req.source_type,
        metadata: &req.metadata,
    };
    let result = (spec.func)(&ctx);
    if !result.success {
        remove_raw(&raw_file);
        return Err(AssetError::ReceiverFailed(result.message));
    }

    let mut public_data = req.metadata.clone();
    public_data.extend(result.extracted);
    let mut private_data = BTreeMap::new();
    private_data.insert("importable_type".into(), json!(spec.importable_type));
    private_data.insert("asset_path".into(), json!(result.asset_path));
    private_data.insert("content_hash".into(), json!(hash));
    private_data.insert("source_type".into(), json!(req.source_type.name()));
    if let Some(p) = &raw_file {
        private_data.insert("raw_path".into(), json!(p.display().to_string()));
    }
    let record = AssetRecord {
        identifier,
        loader_type: spec.loader_type.clone(),
        asset_kind: spec.asset_kind.clone(),
        source: AssetSource::Dynamic,
        public_data,
        private_data,
    };
    if let Err(e) = reg.insert_dynamic(record.clone()) {
        remove_raw(&raw_file);
        return Err(e);
    }
    Ok(record)
}

pub(super) fn render_registry<'a>(records: impl Iterator<Item = &'a AssetRecord>) -> String {
    let list: Vec<Value> = records.map(|r| serde_json::to_value(r).expect("record serializes")).collect();
    crate::canonical::to_pretty(&Value::Array(list))
}

pub(super) fn parse_registry(text: &str) -> Result<Vec<AssetRecord>> {
    let records: Vec<AssetRecord> = serde_json::from_str(text).map_err(|e| AssetError::Persistence(e.to_string()))?;
    let mut seen = std::collections::HashSet::new();
    for r in &records {
        if r.source != AssetSource::Dynamic {
            return Err(AssetError::Persistence(format!("'{}' is not a dynamic record", r.identifier)));
        }
        if !seen.insert(r.identifier.as_str()) {
            return Err(AssetError::DuplicateIdentifier(r.identifier.clone()));
        }
    }
    Ok(records)
}

fn echo_loader(kind: &'static str) -> super::LoaderFn {
    Arc::new(move |id: &str, rec: &AssetRecord, args: Option<&Value>| {
        Ok(json!({
            "loaded": id,
            "as": kind,
            "asset_path": rec.private_data.get("asset_path")
                .or_else(|| rec.private_data.get("blueprint_path"))
                .or_else(|| rec.private_data.get("anim_path"))
                .cloned()
                .unwrap_or(Value::Null),
            "args": args.cloned().unwrap_or(Value::Null),
        }))
    })
}

fn positive_duration(v: Option<&Value>) -> Option<f64> {
    v.and_then(Value::as_f64).filter(|d| d.is_finite() && *d > 0.0)
}

/// Built-in loaders for the shipped loader types and receivers for WAV
/// audio and facial curves.
pub(super) fn register_defaults(reg: &mut AssetRegistry) -> Result<()> {
    reg.register_loader("metahuman_character", echo_loader("character"))?;
    reg.register_loader("skeletal_animation", echo_loader("animation"))?;
    reg.register_loader("audio", echo_loader("audio"))?;
    reg.register_loader("facial_animation", echo_loader("facial_animation"))?;

    reg.register_receiver(ReceiverSpec {
        importable_type: "audio_wav".into(),
        loader_type: "audio".into(),
        asset_kind: "Audio".into(),
        description: "PCM WAV speech or sound clip; becomes an Audio asset".into(),
        extensions: vec!["wav".into()],
        provided_fields: vec![("duration".into(), "Clip length in seconds, read from the WAV header".into())],
        recommended_metadata: vec![
            ("speech_text".into(), "Spoken line, if any".into()),
            ("character".into(), "Character who speaks the line".into()),
        ],
        func: Arc::new(|ctx: &ImportContext| match wav::wav_duration(ctx.raw) {
            Ok(d) if d > 0.0 => ReceiverResult {
                success: true,
                asset_path: format!("/Game/Dynamic/Audio/{}", ctx.identifier),
                message: format!("imported {:.3}s of audio", d),
                extracted: BTreeMap::from([("duration".to_string(), json!(d))]),
            },
            Ok(_) => ReceiverResult::failed("audio clip is empty"),
            Err(e) => ReceiverResult::failed(e),
        }),
    })?;

    reg.register_receiver(ReceiverSpec {
        importable_type: "facial_curve".into(),
        loader_type: "facial_animation".into(),
        asset_kind: "FacialAnimation".into(),
        description: "Facial animation curves (e.g. NPZ from an audio-to-face service); becomes a FacialAnimation asset"
            .into(),
        extensions: vec!["npz".into(), "json".into()],
        provided_fields: vec![("duration".into(), "Curve length in seconds".into())],
        recommended_metadata: vec![
            ("duration".into(), "Required: curve length in seconds".into()),
            ("source_audio".into(), "Identifier of the audio the curves were derived from".into()),
            ("emotion".into(), "Emotion used when generating the curves".into()),
        ],
        func: Arc::new(|ctx: &ImportContext| match positive_duration(ctx.metadata.get("duration")) {
            Some(d) if !ctx.raw.is_empty() => ReceiverResult {
                success: true,
                asset_path: format!("/Game/Dynamic/Facial/{}", ctx.identifier),
                message: format!("imported {:.3}s of facial curves", d),
                extracted: BTreeMap::from([("duration".to_string(), json!(d))]),
            },
            Some(_) => ReceiverResult::failed("facial curve payload is empty"),
            None => ReceiverResult::failed("metadata.duration must be a positive number"),
        }),
    })?;
    Ok(())
}
