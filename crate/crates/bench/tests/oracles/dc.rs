//! Quadratic reference for dependency compliance and a trajectory
//! generator over a DAG's tools.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cutscene_bench::l1::dependency_compliance;
use cutscene_bench::scenario::values_at;
use cutscene_bench::{Edge, EdgeKind};
use cutscene_core::toolkit::Status;
use cutscene_core::trajectory::ToolCallRecord;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

/// For every call, look back over the whole prefix.
pub fn brute_force_dc(t: &[ToolCallRecord], dag: &[Edge]) -> (usize, usize) {
    let mut checks = 0;
    let mut violations = 0;
    for (j, call) in t.iter().enumerate() {
        for edge in dag.iter().filter(|e| e.to_tool == call.tool) {
            match (edge.kind, &edge.bind_on) {
                (EdgeKind::Instance, Some(bind)) => {
                    for v in values_at(&call.args, bind.to_path()) {
                        checks += 1;
                        let produced = t[..j]
                            .iter()
                            .any(|p| p.tool == edge.from_tool && values_at(&p.args, bind.from_path()).contains(&v));
                        if !produced {
                            violations += 1;
                        }
                    }
                }
                _ => {
                    if t[..j].iter().all(|p| p.tool != call.tool) {
                        checks += 1;
                        if t[..j].iter().all(|p| p.tool != edge.from_tool) {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    (checks, violations)
}

/// Six tools, three names, both edge kinds and an array-valued binding.
pub fn test_dag() -> Vec<Edge> {
    serde_json::from_value(json!([
        {"from_tool": "get_available_characters", "to_tool": "add_character", "kind": "precedence"},
        {"from_tool": "add_character", "to_tool": "add_character_audio", "kind": "instance",
         "bind_on": {"from": "name", "to": "character_name"}},
        {"from_tool": "add_character", "to_tool": "orient_character_to_center", "kind": "instance",
         "bind_on": {"from": "name", "to": "names"}},
        {"from_tool": "add_camera", "to_tool": "set_active_camera", "kind": "instance", "bind_on": "camera_name"},
        {"from_tool": "add_camera", "to_tool": "set_active_camera", "kind": "precedence"},
        {"from_tool": "add_character", "to_tool": "add_camera", "kind": "precedence"}
    ]))
    .unwrap()
}

const NAMES: [&str; 3] = ["A", "B", "C"];

/// Up to `max_len` calls over the DAG's tools; every bind path gets a
/// name or a list of names.
pub fn random_trajectory(rng: &mut ChaCha8Rng, dag: &[Edge], max_len: usize) -> Vec<ToolCallRecord> {
    let tools: BTreeSet<&str> = dag.iter().flat_map(|e| [e.from_tool.as_str(), e.to_tool.as_str()]).collect();
    let tools: Vec<&str> = tools.into_iter().collect();
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|i| {
            let tool = *tools.choose(rng).unwrap();
            let mut args = Map::new();
            for e in dag {
                let Some(bind) = &e.bind_on else { continue };
                for (owner, path) in [(&e.from_tool, bind.from_path()), (&e.to_tool, bind.to_path())] {
                    if owner == tool && !args.contains_key(path) {
                        let value = if rng.gen_bool(0.25) {
                            let n = rng.gen_range(0..3);
                            json!(NAMES.choose_multiple(rng, n).collect::<Vec<_>>())
                        } else {
                            json!(NAMES.choose(rng).unwrap())
                        };
                        args.insert(path.to_string(), value);
                    }
                }
            }
            ToolCallRecord::new(i as u64, tool, &Value::Object(args), Status::Ok)
        })
        .collect()
}

pub fn check_dc(seed: u64, cases: usize, dag: &[Edge]) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let t = random_trajectory(&mut rng, dag, 12);
        let (checks, violations) = dependency_compliance(&t, dag);
        let want = brute_force_dc(&t, dag);
        if (checks, violations.len()) != want {
            return Err(format!("case {case}: ({checks}, {}) vs brute force {want:?}", violations.len()));
        }
    }
    Ok(())
}
