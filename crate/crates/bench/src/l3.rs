//! Judge prompt construction and parsing of the judge's JSON verdict.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

pub const MAX_SCORE: i64 = 25;

/// (JSON key, display name, focus, five rubric bands).
pub const DIMENSIONS: [(&str, &str, &str, [&str; 5]); 4] = [
    (
        "script_fidelity",
        "Script Fidelity (SF)",
        "Whether dialogue content and character actions specified in the storyboard are accurately reproduced.",
        [
            "No recognizable connection to the script; characters or dialogue entirely wrong.",
            "Major dialogue lines missing or assigned to wrong characters; key actions absent.",
            "Most dialogue present but with notable omissions; some actions missing.",
            "All dialogue present and correctly assigned; minor action inaccuracies.",
            "Dialogue and actions faithfully and completely match the script.",
        ],
    ),
    (
        "character_consistency",
        "Character Consistency (ChC)",
        "Whether characters maintain stable identities, spatial positions, and coherent behavior throughout.",
        [
            "Characters constantly glitch, teleport, or are unrecognizable.",
            "Significant issues: characters swap positions, face wrong directions frequently.",
            "Generally stable but with noticeable position jumps or animation stiffness.",
            "Consistent presentation with only minor issues (slight clipping, brief stiffness).",
            "Fully consistent; characters behave naturally throughout.",
        ],
    ),
    (
        "cinematographic_quality",
        "Cinematographic Quality (CQ)",
        "Whether camera shot types, framing, and cutting patterns serve the narrative effectively.",
        [
            "Camera is broken, static, or completely fails to frame the action.",
            "Poor shot selection; characters frequently out of frame or awkwardly framed.",
            "Adequate framing but shot types don't match the script; some jarring cuts.",
            "Good shot selection matching the script; characters well-framed with minor issues.",
            "Professional-quality cinematography; shots and cuts enhance the narrative.",
        ],
    ),
    (
        "temporal_coherence",
        "Temporal Coherence (TmpCoh)",
        "Whether timing and synchronization create a natural viewing experience.",
        [
            "Completely broken timing; audio and animation fully desynchronized.",
            "Significant issues: dialogue stutters/repeats, long dead air, animations freeze.",
            "Noticeable timing problems but generally followable; some sync drift.",
            "Smooth pacing with minor timing imperfections.",
            "Seamless flow; all elements perfectly synchronized and naturally paced.",
        ],
    ),
];

const BANDS: [&str; 5] = ["0-5", "6-10", "11-15", "16-20", "21-25"];

/// The full judge prompt for one storyboard. The rendered video is sent
/// alongside it by the caller.
pub fn build_l3_prompt(storyboard: &str) -> String {
    let mut out = String::new();
    out.push_str(
        "You will be given a rendered cutscene video from a video game, along with the original storyboard \
script that was used as input to an AI agent that generated this cutscene.\n\n\
Your task is to evaluate the quality of the generated cutscene across four independent dimensions, \
each scored from 0 to 25 (total 100 points).\n\n\
Disregard environmental fidelity: the test map, set geometry and lighting are not controlled by the agent \
and may differ from the described location. Judge only character performance, dialogue delivery, \
animation selection and camera work.\n\n",
    );
    out.push_str("STORYBOARD\n");
    out.push_str(storyboard.trim());
    out.push_str("\n\nEVALUATION DIMENSIONS AND RUBRICS\n");
    for (i, (_, name, focus, bands)) in DIMENSIONS.iter().enumerate() {
        out.push_str(&format!("\n{}. {name}\nFocus: {focus}\n", i + 1));
        for (range, text) in BANDS.iter().zip(bands) {
            out.push_str(&format!("  {range}: {text}\n"));
        }
    }
    out.push_str(
        "\nEVALUATION STEPS\n\
For each dimension independently:\n\
  Step 1: Watch the video carefully, focusing ONLY on aspects relevant to that dimension.\n\
  Step 2: Compare observations against the storyboard and the rubric above.\n\
  Step 3: Write chain-of-thought reasoning (2-4 sentences).\n\
  Step 4: Assign an integer score from 0 to 25.\n\n\
OUTPUT FORMAT: Respond with ONLY a valid JSON object:\n",
    );
    out.push_str(
        "{\"script_fidelity\": {\"reasoning\": \"...\", \"score\": 20},\n \
\"character_consistency\": {\"reasoning\": \"...\", \"score\": 22},\n \
\"cinematographic_quality\": {\"reasoning\": \"...\", \"score\": 18},\n \
\"temporal_coherence\": {\"reasoning\": \"...\", \"score\": 15}}\n",
    );
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionScore {
    pub reasoning: String,
    pub score: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct L3Report {
    pub script_fidelity: DimensionScore,
    pub character_consistency: DimensionScore,
    pub cinematographic_quality: DimensionScore,
    pub temporal_coherence: DimensionScore,
    pub total: u8,
}

impl L3Report {
    pub fn scores(&self) -> [(&'static str, u8); 4] {
        [
            ("sf", self.script_fidelity.score),
            ("chc", self.character_consistency.score),
            ("cq", self.cinematographic_quality.score),
            ("tmpcoh", self.temporal_coherence.score),
        ]
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum L3Error {
    #[error("no JSON object in judge response")]
    Unparseable,
    #[error("judge response lacks dimension '{0}'")]
    MissingDimension(String),
    #[error("score for '{dimension}' is not an integer: {value}")]
    NotInteger { dimension: String, value: String },
    #[error("score for '{dimension}' is {value}, outside 0..=25")]
    OutOfRange { dimension: String, value: i64 },
    #[error("judge request failed: {0}")]
    Request(String),
}

/// The first balanced `{...}` in `raw` that parses as JSON. Braces inside
/// string literals are skipped.
pub fn first_json_object(raw: &str) -> Option<Value> {
    let bytes = raw.as_bytes();
    let mut start = 0;
    while let Some(offset) = raw[start..].find('{') {
        let open = start + offset;
        let mut depth = 0usize;
        let mut in_string = false;
        let mut escaped = false;
        let mut close = None;
        for (i, &b) in bytes.iter().enumerate().skip(open) {
            if in_string {
                match b {
                    _ if escaped => escaped = false,
                    b'\\' => escaped = true,
                    b'"' => in_string = false,
                    _ => {}
                }
                continue;
            }
            match b {
                b'"' => in_string = true,
                b'{' => depth += 1,
                b'}' => {
                    depth -= 1;
                    if depth == 0 {
                        close = Some(i);
                        break;
                    }
                }
                _ => {}
            }
        }
        if let Some(close) = close {
            if let Ok(v @ Value::Object(_)) = serde_json::from_str::<Value>(&raw[open..=close]) {
                return Some(v);
            }
        }
        start = open + 1;
    }
    None
}

fn dimension(obj: &Value, key: &str) -> Result<DimensionScore, L3Error> {
    let entry = obj.get(key).ok_or_else(|| L3Error::MissingDimension(key.to_string()))?;
    let score = entry.get("score").ok_or_else(|| L3Error::MissingDimension(key.to_string()))?;
    let value = match score {
        Value::Number(n) => match (n.as_i64(), n.as_f64()) {
            (Some(i), _) => i,
            (None, Some(f)) if f.fract() == 0.0 && f.abs() < 1e9 => f as i64,
            _ => {
                return Err(L3Error::NotInteger {
                    dimension: key.to_string(),
                    value: n.to_string(),
                })
            }
        },
        other => {
            return Err(L3Error::NotInteger {
                dimension: key.to_string(),
                value: other.to_string(),
            })
        }
    };
    if !(0..=MAX_SCORE).contains(&value) {
        return Err(L3Error::OutOfRange {
            dimension: key.to_string(),
            value,
        });
    }
    let reasoning = entry.get("reasoning").and_then(Value::as_str).unwrap_or_default().to_string();
    Ok(DimensionScore {
        reasoning,
        score: value as u8,
    })
}

pub fn parse_l3_response(raw: &str) -> Result<L3Report, L3Error> {
    let obj = first_json_object(raw).ok_or(L3Error::Unparseable)?;
    let sf = dimension(&obj, "script_fidelity")?;
    let chc = dimension(&obj, "character_consistency")?;
    let cq = dimension(&obj, "cinematographic_quality")?;
    let tc = dimension(&obj, "temporal_coherence")?;
    let total = sf.score + chc.score + cq.score + tc.score;
    Ok(L3Report {
        script_fidelity: sf,
        character_consistency: chc,
        cinematographic_quality: cq,
        temporal_coherence: tc,
        total,
    })
}

/// Chat-completions judge with temperature pinned to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JudgeConfig {
    pub endpoint: String,
    pub model: String,
    #[serde(default = "default_key_env")]
    pub api_key_env: String,
}

fn default_key_env() -> String {
    "CUTSCENE_JUDGE_KEY".into()
}

/// Ask the judge about one cutscene. `video_url` points at the rendered
/// video; it is passed as an attachment the endpoint must understand.
pub fn judge(config: &JudgeConfig, storyboard: &str, video_url: &str) -> Result<L3Report, L3Error> {
    let key = std::env::var(&config.api_key_env).map_err(|_| L3Error::Request(format!("{} is not set", config.api_key_env)))?;
    let body = json!({
        "model": config.model,
        "temperature": 0,
        "messages": [{"role": "user", "content": [
            {"type": "text", "text": build_l3_prompt(storyboard)},
            {"type": "video_url", "video_url": {"url": video_url}},
        ]}],
    });
    let agent = ureq::Agent::config_builder()
        .timeout_global(Some(Duration::from_secs(600)))
        .build()
        .new_agent();
    let mut response = agent
        .post(&config.endpoint)
        .header("authorization", &format!("Bearer {key}"))
        .send_json(&body)
        .map_err(|e| L3Error::Request(e.to_string()))?;
    let value: Value = response.body_mut().read_json().map_err(|e| L3Error::Request(e.to_string()))?;
    let text = value
        .pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .ok_or(L3Error::Unparseable)?;
    parse_l3_response(text)
}
