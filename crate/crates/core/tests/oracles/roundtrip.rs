//! Random sequences built through the public API, pushed through the
//! document and snapshot forms and back.
#![allow(dead_code)]

use cutscene_core::camera::{Interp, MovementKeyframe};
use cutscene_core::math::{Rotator, Vec3};
use cutscene_core::sequence::{BindingKind, LevelSequence, MetadataBlock, SectionKind, TimeRange};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TEXTS: [&str; 6] = [
    "Go ahead.",
    "\"Quoted\" and back\\slashed",
    "line one\nline two",
    "tab\there",
    "naïve café, 東京",
    "",
];

/// Values on a 1e-3 grid survive six-decimal snapshots exactly.
fn grid(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> f64 {
    rng.gen_range(lo * 1000..hi * 1000) as f64 / 1000.0
}

fn coord(rng: &mut ChaCha8Rng, raw: bool, lo: f64, hi: f64) -> f64 {
    if raw {
        rng.gen_range(lo..hi)
    } else {
        grid(rng, lo as i64, hi as i64)
    }
}

fn vec3(rng: &mut ChaCha8Rng, raw: bool) -> Vec3 {
    Vec3::new(
        coord(rng, raw, -2000.0, 2000.0),
        coord(rng, raw, -2000.0, 2000.0),
        coord(rng, raw, -200.0, 400.0),
    )
}

fn rotator(rng: &mut ChaCha8Rng, raw: bool) -> Rotator {
    Rotator::new(
        coord(rng, raw, -89.0, 89.0),
        coord(rng, raw, -179.0, 180.0),
        coord(rng, raw, -10.0, 10.0),
    )
}

fn range(rng: &mut ChaCha8Rng) -> TimeRange {
    let start = rng.gen_range(0..40_000);
    let end = start + rng.gen_range(1..8_000);
    TimeRange::new(start as f64 / 1000.0, end as f64 / 1000.0).unwrap()
}

/// A random sequence. With `raw`, transforms carry full-precision floats.
pub fn random_sequence(rng: &mut ChaCha8Rng, raw: bool) -> LevelSequence {
    let mut seq = LevelSequence::new(*[24u32, 30, 60].choose(rng).unwrap());
    seq.current_time = grid(rng, 0, 30);
    let characters: Vec<String> = (0..rng.gen_range(0..4)).map(|i| format!("CHAR_{i}")).collect();
    let cameras: Vec<String> = (0..rng.gen_range(0..4)).map(|i| format!("Cam_{i}")).collect();
    let mut names: Vec<(&str, BindingKind)> = characters
        .iter()
        .map(|n| (n.as_str(), BindingKind::Character))
        .chain(cameras.iter().map(|n| (n.as_str(), BindingKind::Camera)))
        .collect();
    names.shuffle(rng);
    for (i, (name, kind)) in names.iter().enumerate() {
        seq.add_binding(name, *kind, &format!("asset_{i:03}"), vec3(rng, raw)).unwrap();
        let rot = rotator(rng, raw);
        let keyframes: Vec<MovementKeyframe> = if *kind == BindingKind::Camera {
            (0..rng.gen_range(0..5))
                .map(|k| MovementKeyframe {
                    time: k as f64 * 0.5,
                    position: vec3(rng, raw),
                    rotation: rotator(rng, raw),
                    interp: if rng.gen_bool(0.5) { Interp::Linear } else { Interp::Constant },
                })
                .collect()
        } else {
            Vec::new()
        };
        let b = seq.binding_mut(name).unwrap();
        b.rotation = rot;
        b.keyframes = keyframes;
    }
    for name in &characters {
        for _ in 0..rng.gen_range(0..8) {
            let kind = *[SectionKind::Animation, SectionKind::Audio, SectionKind::Facial].choose(rng).unwrap();
            let speech = (kind == SectionKind::Audio && rng.gen_bool(0.7)).then(|| TEXTS.choose(rng).unwrap().to_string());
            let r = range(rng);
            seq.add_section(name, kind, &format!("{}_{}", kind.as_str(), rng.gen_range(0..50)), r, speech)
                .unwrap();
        }
    }
    for _ in 0..rng.gen_range(0..6) {
        if let Some(cam) = cameras.choose(rng) {
            let r = range(rng);
            seq.add_camera_cut(cam, r).unwrap();
        }
    }
    for _ in 0..rng.gen_range(0..4) {
        let binding_name = names.choose(rng).map_or("", |n| n.0).to_string();
        seq.update_metadata(MetadataBlock {
            binding_name,
            track: ["Camera", "animation", "audio"].choose(rng).unwrap().to_string(),
            range: range(rng),
            description: TEXTS.choose(rng).unwrap().to_string(),
        });
    }
    seq
}

fn first_difference(a: &LevelSequence, b: &LevelSequence) -> String {
    let (a, b) = (format!("{a:#?}"), format!("{b:#?}"));
    a.lines()
        .zip(b.lines())
        .find(|(x, y)| x != y)
        .map_or_else(|| "no line differs".to_string(), |(x, y)| format!("{} vs {}", x.trim(), y.trim()))
}

/// Document identity on every case; snapshot text stable under a reload;
/// exact struct identity through text for grid-valued cases.
pub fn check_roundtrip(seed: u64, cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let raw = case % 2 == 1;
        let seq = random_sequence(&mut rng, raw);
        let doc = seq.to_document();
        let back = LevelSequence::from_document(&doc).map_err(|e| format!("case {case}: {e}"))?;
        if back != seq {
            return Err(format!("case {case}: document round trip changed the sequence"));
        }
        let text = seq.serialize_state();
        let reloaded = LevelSequence::deserialize_state(&text).map_err(|e| format!("case {case}: {e}"))?;
        if reloaded.serialize_state() != text {
            return Err(format!("case {case}: snapshot text changed after a reload"));
        }
        if !raw && reloaded != seq {
            return Err(format!("case {case}: snapshot round trip changed the sequence: {}", first_difference(&seq, &reloaded)));
        }
        if seq.serialize_state() != text {
            return Err(format!("case {case}: serializing twice gave different bytes"));
        }
    }
    Ok(())
}
