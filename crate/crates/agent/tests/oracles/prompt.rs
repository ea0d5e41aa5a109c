//! Reference selection for prompt assembly and an enumerating check of
//! history compression.
#![allow(dead_code)]

use cutscene_agent::context::{compress_history, Detail, HistoryEntry};
use cutscene_agent::prompt::{assemble, ApproxTokenizer, PromptElement, Tokenizer};
use cutscene_core::toolkit::Status;
use cutscene_core::trajectory::ToolCallRecord;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const LETTERS: &[u8] = b"abcdefghij \n<>";

fn random_text(rng: &mut ChaCha8Rng, max: usize) -> String {
    let len = rng.gen_range(0..=max);
    (0..len).map(|_| *LETTERS.choose(rng).unwrap() as char).collect()
}

pub fn random_elements(rng: &mut ChaCha8Rng) -> Vec<PromptElement> {
    (0..rng.gen_range(0..14))
        .map(|_| {
            let priority = rng.gen_range(-2..6) * 100;
            let body = random_text(rng, 120);
            match rng.gen_range(0..3) {
                0 => PromptElement::instruction(priority, body),
                1 => PromptElement::block(priority, ["context", "state", "notes"].choose(rng).unwrap().to_string(), body),
                _ => PromptElement::text(priority, body),
            }
        })
        .collect()
}

/// Greedy skip-continue by descending priority, ties in insertion order,
/// with one two-newline separator between picks.
fn reference_selection(elements: &[PromptElement], budget: usize) -> Vec<usize> {
    let mut ranked: Vec<(i64, usize)> = elements.iter().enumerate().map(|(i, e)| (-e.priority, i)).collect();
    ranked.sort();
    let mut used = 0;
    let mut picked = Vec::new();
    for (_, i) in ranked {
        let sep = if picked.is_empty() { 0 } else { 1 };
        let cost = elements[i].render().len().div_ceil(4) + sep;
        if used + cost <= budget {
            used += cost;
            picked.push(i);
        }
    }
    picked
}

/// Joining can cost more than the parts: "a\n" straddling a separator.
struct Lumpy;

impl Tokenizer for Lumpy {
    fn count(&self, text: &str) -> usize {
        text.len() / 5 + 7 * text.matches("a\n").count()
    }
}

pub fn check_budget(seed: u64, cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let elements = random_elements(&mut rng);
        let budget = rng.gen_range(0..250);
        let out = assemble(&elements, budget, &ApproxTokenizer);
        if ApproxTokenizer.count(&out.prompt) > budget {
            return Err(format!("case {case}: prompt over budget {budget}"));
        }
        let want = reference_selection(&elements, budget);
        if out.included != want {
            return Err(format!("case {case}: picked {:?}, reference {want:?}", out.included));
        }
        let lumpy = assemble(&elements, budget, &Lumpy);
        if Lumpy.count(&lumpy.prompt) > budget {
            return Err(format!("case {case}: non-additive tokenizer pushed the prompt over {budget}"));
        }
    }
    Ok(())
}

const TOOLS: [&str; 8] = [
    "add_character",
    "add_camera",
    "query_assets",
    "get_available_animations",
    "apply_camera_template",
    "get_available_tone",
    "get_sequence_content",
    "set_active_camera",
];

pub fn random_history(rng: &mut ChaCha8Rng) -> Vec<HistoryEntry> {
    (0..rng.gen_range(0..40))
        .map(|i| {
            let tool = *TOOLS.choose(rng).unwrap();
            let record = ToolCallRecord::new(i, tool, &json!({"n": i, "pick": rng.gen_range(0..5)}), Status::Ok);
            HistoryEntry::new(record, json!({"status": "ok", "data": i}))
        })
        .collect()
}

/// Entry `i` stays full iff it is among the last `n`, or it is a query and
/// no later entry calls the same tool.
fn reference_full(h: &[HistoryEntry], n: usize, i: usize) -> bool {
    let recent = i + n >= h.len();
    let latest_query = !h[i].mutation && h[i + 1..].iter().all(|e| e.record.tool != h[i].record.tool);
    recent || latest_query
}

pub fn check_compression(seed: u64, cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let h = random_history(&mut rng);
        let n = rng.gen_range(0..8);
        let once = compress_history(&h, n);
        if compress_history(&once, n) != once {
            return Err(format!("case {case}: compression is not idempotent"));
        }
        if once.len() != h.len() {
            return Err(format!("case {case}: compression changed the length"));
        }
        for (i, (before, after)) in h.iter().zip(&once).enumerate() {
            if after.record.tool != before.record.tool || after.record.index != before.record.index {
                return Err(format!("case {case}: entry {i} lost its identity"));
            }
            if reference_full(&h, n, i) {
                if after != before {
                    return Err(format!("case {case}: entry {i} ({}) should stay whole", before.record.tool));
                }
            } else if after.detail != Detail::Summarized || after.record.args != json!({}) || after.result != Value::Null {
                return Err(format!("case {case}: entry {i} ({}) should be summarized", before.record.tool));
            }
        }
    }
    Ok(())
}
