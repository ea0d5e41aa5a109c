//! Judge prompt contents and randomized verdicts for the response parser.
#![allow(dead_code)]

use cutscene_bench::l3::{build_l3_prompt, parse_l3_response, L3Error, DIMENSIONS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SAMPLE_VERDICT: &str = r#"{"script_fidelity": {"reasoning": "...", "score": 20},
 "character_consistency": {"reasoning": "...", "score": 22},
 "cinematographic_quality": {"reasoning": "...", "score": 18},
 "temporal_coherence": {"reasoning": "...", "score": 15}}"#;

pub fn check_prompt_and_sample() -> Result<(), String> {
    let prompt = build_l3_prompt("INT. ARCHIVE - NIGHT\nMIRA: Go ahead.");
    let keys = ["script_fidelity", "character_consistency", "cinematographic_quality", "temporal_coherence"];
    for key in keys {
        if !prompt.contains(&format!("\"{key}\"")) {
            return Err(format!("prompt lacks output key {key}"));
        }
    }
    for (_, name, _, _) in DIMENSIONS {
        if !prompt.contains(name) {
            return Err(format!("prompt lacks rubric dimension {name}"));
        }
    }
    for field in ["\"reasoning\"", "\"score\"", "0 to 25", "MIRA: Go ahead."] {
        if !prompt.contains(field) {
            return Err(format!("prompt lacks {field}"));
        }
    }
    let report = parse_l3_response(SAMPLE_VERDICT).map_err(|e| e.to_string())?;
    let scores: Vec<u8> = report.scores().iter().map(|s| s.1).collect();
    if report.total != 75 || scores != [20, 22, 18, 15] {
        return Err(format!("sample verdict parsed as {scores:?} total {}", report.total));
    }
    Ok(())
}

/// Verdicts with omitted, fractional, string-typed and out-of-range scores,
/// bare or wrapped in prose. Each must parse to the right total or fail
/// with the matching error.
pub fn check_fuzz(seed: u64, cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let mut fields = Vec::new();
        let mut expect: Result<u32, &str> = Ok(0);
        for (key, _, _, _) in DIMENSIONS {
            let (text, outcome): (Option<String>, Result<u32, &str>) = match rng.gen_range(0..20) {
                0 => (None, Err("missing")),
                1 => (Some(format!("{}.5", rng.gen_range(0..25))), Err("not_integer")),
                2 => (Some("\"12\"".into()), Err("not_integer")),
                3 => (Some(rng.gen_range(26..200).to_string()), Err("range")),
                4 => (Some(format!("-{}", rng.gen_range(1..50))), Err("range")),
                _ => {
                    let s = rng.gen_range(0..=25u32);
                    (Some(s.to_string()), Ok(s))
                }
            };
            if let Some(text) = text {
                fields.push(format!("\"{key}\": {{\"reasoning\": \"r{{}}\", \"score\": {text}}}"));
            }
            if let Ok(sum) = expect {
                expect = outcome.map(|s| sum + s);
            }
        }
        let body = format!("{{{}}}", fields.join(", "));
        let wrapped = match case % 3 {
            0 => body,
            1 => format!("Verdict {{not json}} follows:\n```json\n{body}\n```"),
            _ => format!("{body}\n\nAny further questions?"),
        };
        let parsed = std::panic::catch_unwind(|| parse_l3_response(&wrapped))
            .map_err(|_| format!("case {case}: parser panicked on {wrapped}"))?;
        match (parsed, expect) {
            (Ok(r), Ok(total)) if r.total as u32 == total => {}
            (Err(L3Error::MissingDimension(_)), Err("missing")) => {}
            (Err(L3Error::NotInteger { .. }), Err("not_integer")) => {}
            (Err(L3Error::OutOfRange { .. }), Err("range")) => {}
            (got, want) => return Err(format!("case {case}: got {got:?}, wanted {want:?}\n{wrapped}")),
        }
    }
    Ok(())
}
