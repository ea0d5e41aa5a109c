//! Structural metrics over a final sequence: track completeness, camera
//! coverage and temporal consistency.

use std::collections::BTreeMap;

use cutscene_core::sequence::{merge_intervals, LevelSequence, SectionKind, SequenceError, TimeRange};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const DEFAULT_DELTA: f64 = 0.1;

/// Overlap tolerance: one frame.
pub fn default_epsilon(frame_rate: u32) -> f64 {
    1.0 / frame_rate.max(1) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissingTrack {
    pub character: String,
    pub track: SectionKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalViolation {
    pub character: String,
    pub track: SectionKind,
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L2Report {
    pub tc: f64,
    pub camc: f64,
    pub tempc: f64,
    pub duration: f64,
    pub covered: f64,
    pub missing_tracks: Vec<MissingTrack>,
    pub temporal_checks: usize,
    pub temporal_violations: Vec<TemporalViolation>,
}

/// Fraction of expected (character, track) pairs that exist and are
/// non-empty.
pub fn track_completeness(seq: &LevelSequence, expected: &BTreeMap<String, Vec<SectionKind>>) -> (f64, Vec<MissingTrack>) {
    let mut total = 0;
    let mut missing = Vec::new();
    for (character, kinds) in expected {
        for &kind in kinds {
            total += 1;
            let present = seq
                .binding(character)
                .is_some_and(|b| !b.track(kind).is_empty());
            if !present {
                missing.push(MissingTrack {
                    character: character.clone(),
                    track: kind,
                });
            }
        }
    }
    let tc = if total == 0 {
        1.0
    } else {
        (total - missing.len()) as f64 / total as f64
    };
    (tc, missing)
}

/// Covered fraction of `[0, D]` by camera cuts, with D the sequence's
/// effective duration. An empty sequence counts as covered.
pub fn camera_coverage(seq: &LevelSequence) -> (f64, f64, f64) {
    let duration = seq.effective_duration();
    if duration <= 0.0 {
        return (1.0, 0.0, 0.0);
    }
    let cuts: Vec<TimeRange> = seq.camera_cuts.iter().map(|c| c.range).collect();
    let clip = TimeRange::new(0.0, duration).expect("positive duration");
    let (_, covered) = merge_intervals(&cuts, clip);
    ((covered / duration).min(1.0), duration, covered)
}

/// Overlap checks on consecutive animation and audio sections of each
/// character, plus one audio-to-facial alignment check per audio section.
pub fn temporal_consistency(seq: &LevelSequence, epsilon: f64, delta: f64) -> (f64, usize, Vec<TemporalViolation>) {
    let mut checks = 0;
    let mut violations = Vec::new();
    for binding in seq.characters() {
        for kind in [SectionKind::Animation, SectionKind::Audio] {
            let mut ranges: Vec<TimeRange> = binding.track(kind).iter().map(|s| s.range).collect();
            ranges.sort_by(|a, b| a.start().total_cmp(&b.start()).then(a.end().total_cmp(&b.end())));
            for pair in ranges.windows(2) {
                checks += 1;
                if pair[0].end() > pair[1].start() + epsilon {
                    violations.push(TemporalViolation {
                        character: binding.name.clone(),
                        track: kind,
                        kind: "overlap".into(),
                        detail: format!("{} overlaps {}", pair[0], pair[1]),
                    });
                }
            }
        }
        let facial = binding.track(SectionKind::Facial);
        for audio in binding.track(SectionKind::Audio) {
            checks += 1;
            let aligned = facial.iter().any(|f| {
                (f.range.start() - audio.range.start()).abs() <= delta && (f.range.end() - audio.range.end()).abs() <= delta
            });
            if !aligned {
                violations.push(TemporalViolation {
                    character: binding.name.clone(),
                    track: SectionKind::Audio,
                    kind: "unaligned_facial".into(),
                    detail: format!("no facial section within {delta}s of audio {} {}", audio.asset_id, audio.range),
                });
            }
        }
    }
    let tempc = if checks == 0 {
        1.0
    } else {
        (checks - violations.len()) as f64 / checks as f64
    };
    (tempc, checks, violations)
}

pub fn eval_l2_sequence(
    seq: &LevelSequence,
    expected: &BTreeMap<String, Vec<SectionKind>>,
    epsilon: f64,
    delta: f64,
) -> L2Report {
    let (tc, missing_tracks) = track_completeness(seq, expected);
    let (camc, duration, covered) = camera_coverage(seq);
    let (tempc, temporal_checks, temporal_violations) = temporal_consistency(seq, epsilon, delta);
    L2Report {
        tc,
        camc,
        tempc,
        duration,
        covered,
        missing_tracks,
        temporal_checks,
        temporal_violations,
    }
}

/// Score a sequence document. `epsilon` defaults to one frame of the
/// document's frame rate.
pub fn eval_l2(
    doc: &Value,
    expected: &BTreeMap<String, Vec<SectionKind>>,
    epsilon: Option<f64>,
    delta: f64,
) -> Result<L2Report, SequenceError> {
    let seq = LevelSequence::from_document(doc)?;
    let epsilon = epsilon.unwrap_or_else(|| default_epsilon(seq.frame_rate));
    Ok(eval_l2_sequence(&seq, expected, epsilon, delta))
}
