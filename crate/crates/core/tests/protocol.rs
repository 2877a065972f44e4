use std::collections::BTreeSet;

use blind_tmbqc::math::Angle8;
use blind_tmbqc::protocol::{
    run_direct_mbqc, run_protocol_trials, seeded_session, EntanglementPlan, MeasurementPattern, OutcomeHistogram,
    Transcript,
};

fn pattern() -> MeasurementPattern {
    MeasurementPattern::linear_chain(&[Angle8::PI_4, Angle8::new(3), Angle8::PI_2, Angle8::ZERO, Angle8::new(5)])
}

#[test]
fn transcript_carries_only_wire_fields() {
    let p = pattern();
    let plan = EntanglementPlan::from_graph(&p.graph);
    let rec = seeded_session(&p, &plan, 9, 0).unwrap();
    let jsonl = rec.transcript.to_jsonl();
    let allowed: BTreeSet<&str> = ["type", "j", "delta_k", "s", "count", "handles"].into();
    for line in jsonl.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in v.as_object().unwrap().keys() {
            assert!(allowed.contains(key.as_str()), "unexpected field {key} in {line}");
        }
    }
    for secret in ["phi", "theta", "\"r\"", "order", "dep_"] {
        assert!(!jsonl.contains(secret), "transcript leaks {secret}");
    }
    let back = Transcript::read_messages(jsonl.as_bytes()).unwrap();
    assert_eq!(back, rec.transcript.messages);
}

#[test]
fn blind_outcomes_match_direct_mbqc() {
    let p = pattern();
    let plan = EntanglementPlan::from_graph(&p.graph);
    let transcripts = run_protocol_trials(&p, &plan, 20_000, 4).unwrap();
    let hist = OutcomeHistogram::from_transcripts(&p.output_qubits(), &transcripts);
    let exact = run_direct_mbqc(&p).unwrap();
    // 32 outcomes, 2e4 samples: expected TV about 0.02
    assert!(hist.tv_distance(&exact) < 0.04, "tv {}", hist.tv_distance(&exact));
}

#[test]
fn pattern_files_round_trip() {
    let p = pattern().with_outputs(vec![4]).unwrap();
    let text = serde_json::to_string(&p).unwrap();
    let back: MeasurementPattern = serde_json::from_str(&text).unwrap();
    assert_eq!(back, p);
}
