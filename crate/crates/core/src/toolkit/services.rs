//! Deterministic stand-ins for the off-engine services (speech synthesis,
//! audio-driven facial animation, video analysis).

use serde::{Deserialize, Serialize};

/// Seconds of synthesized speech per UTF-8 byte of text.
pub const TTS_SECONDS_PER_BYTE: f64 = 0.0055;
/// Fixed lead-in plus tail added to every synthesized line.
pub const TTS_PADDING_SECONDS: f64 = 0.3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tone {
    pub name: String,
    pub gender: String,
    pub description: String,
}

fn tone(name: &str, gender: &str, description: &str) -> Tone {
    Tone {
        name: name.to_string(),
        gender: gender.to_string(),
        description: description.to_string(),
    }
}

pub fn default_tones() -> Vec<Tone> {
    vec![
        tone("male_normal_1.mp3", "male", "Even, mid-range adult male voice"),
        tone("male_normal_2.mp3", "male", "Brighter, younger adult male voice"),
        tone("male_deep_1.mp3", "male", "Low, gravelly male voice"),
        tone("female_normal_1.mp3", "female", "Even, mid-range adult female voice"),
        tone("female_normal_2.mp3", "female", "Brighter, younger adult female voice"),
        tone("female_soft_1.mp3", "female", "Quiet, breathy female voice"),
    ]
}

/// Length of the placeholder clip for `text`.
pub fn tts_duration(text: &str) -> f64 {
    TTS_SECONDS_PER_BYTE * text.len() as f64 + TTS_PADDING_SECONDS
}
