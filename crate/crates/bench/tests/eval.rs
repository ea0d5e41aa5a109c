mod oracles;

use std::path::PathBuf;

use cutscene_bench::l1::dependency_compliance;
use cutscene_bench::{eval_l1, eval_l2, ScenarioBundle};
use cutscene_core::assets::AssetRegistry;
use cutscene_core::toolkit::{Status, Toolkit, ToolkitConfig};
use cutscene_core::trajectory::ToolCallRecord;
use oracles::dc::{brute_force_dc, test_dag};
use oracles::{dc, judge};
use proptest::prelude::*;
use serde_json::{json, Value};

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn toolkit() -> Toolkit {
    Toolkit::new(AssetRegistry::from_workbook(&data().join("workbook")).unwrap(), ToolkitConfig::default())
}

fn bundle() -> ScenarioBundle {
    ScenarioBundle::load_by_id(&data().join("scenarios"), "S2_001").unwrap()
}

fn final_state(trajectory: &[ToolCallRecord]) -> Value {
    let mut tk = toolkit();
    for c in trajectory {
        tk.call(&c.tool, &c.args);
    }
    tk.sequence().to_document()
}

#[test]
fn ground_truth_scores_perfectly() {
    let b = bundle();
    let l1 = eval_l1(&b.gt_trajectory, &b, toolkit());
    assert_eq!(l1.total_calls, 62);
    assert_eq!((l1.tsa, l1.pv, l1.cc, l1.ce, l1.dc), (1.0, 1.0, 1.0, 1.0, 1.0), "{l1:#?}");
    let mut tk = toolkit();
    for c in &b.gt_trajectory {
        tk.call(&c.tool, &c.args);
    }
    let frozen = std::fs::read_to_string(data().join("scenarios/S2_001/gt_snapshot.json")).unwrap();
    assert_eq!(tk.sequence().serialize_state().trim_end(), frozen.trim_end(), "replay drifted from the frozen snapshot");
    let doc = tk.sequence().to_document();
    let l2 = eval_l2(&doc, &b.expected_tracks, None, 0.1).unwrap();
    assert_eq!((l2.tc, l2.camc, l2.tempc), (1.0, 1.0, 1.0), "{l2:#?}");
    assert_eq!(l2.duration, 30.0);
}

#[test]
fn deleting_mira_breaks_dependent_calls() {
    let b = bundle();
    let mut t = b.gt_trajectory.clone();
    let pos = t
        .iter()
        .position(|c| c.tool == "add_character" && c.args["name"] == "MIRA")
        .unwrap();
    t.remove(pos);
    let l1 = eval_l1(&t, &b, toolkit());

    // Oracle: exactly the calls naming MIRA fail.
    let expected_invalid: Vec<usize> = t
        .iter()
        .enumerate()
        .filter(|(_, c)| c.args.to_string().contains("\"MIRA\""))
        .map(|(i, _)| i)
        .collect();
    let invalid: Vec<usize> = l1.invalid_calls.iter().map(|c| c.index).collect();
    assert_eq!(invalid, expected_invalid);
    assert!(!invalid.is_empty());
    assert!((l1.pv - (t.len() - invalid.len()) as f64 / t.len() as f64).abs() < 1e-12);
    assert!(l1.dc < 1.0);
    assert!(l1.dependency_violations.iter().all(|v| v.value.as_deref() == Some("MIRA")));
    assert!(l1.cc < 1.0);
    assert_eq!(l1.tsa, 1.0);

    let l2 = eval_l2(&final_state(&t), &b.expected_tracks, None, 0.1).unwrap();
    assert_eq!(l2.tc, 0.5);
}

#[test]
fn removing_a_cut_lowers_camera_coverage() {
    let b = bundle();
    let t: Vec<ToolCallRecord> = b
        .gt_trajectory
        .iter()
        .filter(|c| !(c.tool == "set_active_camera" && c.args["camera_name"] == "Cam_OTS_Mira"))
        .cloned()
        .collect();
    let l2 = eval_l2(&final_state(&t), &b.expected_tracks, None, 0.1).unwrap();
    assert!((l2.camc - 0.8).abs() < 1e-9, "{}", l2.camc);
    assert_eq!(l2.covered, 24.0);
}

#[test]
fn shifted_facial_section_is_unaligned() {
    let b = bundle();
    let mut doc = b.gt_snapshot.clone();
    let rex = doc["bindings"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|b| b["name"] == "REX")
        .unwrap();
    let face = &mut rex["tracks"]["facial"][1];
    let start = face["start"].as_f64().unwrap() + 0.5;
    let end = face["end"].as_f64().unwrap() + 0.5;
    face["start"] = json!(start);
    face["end"] = json!(end);
    let l2 = eval_l2(&doc, &b.expected_tracks, None, 0.1).unwrap();
    assert_eq!(l2.temporal_violations.len(), 1);
    assert_eq!(l2.temporal_violations[0].kind, "unaligned_facial");
    // 7 + 6 animation pairs, 2 + 2 audio pairs, 6 alignment checks.
    assert_eq!(l2.temporal_checks, 23);
    assert!((l2.tempc - 22.0 / 23.0).abs() < 1e-12);
}

fn arb_call() -> impl Strategy<Value = ToolCallRecord> {
    let tools = prop::sample::select(vec![
        "add_character",
        "add_character_audio",
        "orient_character_to_center",
        "get_available_characters",
        "add_camera",
        "set_active_camera",
    ]);
    let name = prop::sample::select(vec!["A", "B", "C"]);
    (tools, name.clone(), prop::collection::vec(name, 0..3)).prop_map(|(tool, n, names)| {
        let args = match tool {
            "add_character" => json!({"name": n}),
            "add_character_audio" => json!({"character_name": n}),
            "orient_character_to_center" => json!({"names": names}),
            "add_camera" | "set_active_camera" => json!({"camera_name": n}),
            _ => json!({}),
        };
        ToolCallRecord::new(0, tool, &args, Status::Ok)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn single_pass_dc_matches_brute_force(t in prop::collection::vec(arb_call(), 0..=12)) {
        let dag = test_dag();
        let (checks, violations) = dependency_compliance(&t, &dag);
        prop_assert_eq!((checks, violations.len()), brute_force_dc(&t, &dag));
    }
}

#[test]
fn dc_matches_brute_force_on_the_scenario_dag() {
    dc::check_dc(3, 10_000, &bundle().dag).unwrap();
}

#[test]
fn judge_prompt_and_sample_verdict() {
    judge::check_prompt_and_sample().unwrap();
}

#[test]
fn fuzzed_judge_responses() {
    judge::check_fuzz(7, 100).unwrap();
}
