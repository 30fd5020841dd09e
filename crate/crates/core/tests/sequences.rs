//! Atomization, ordering constraints, and agreement between the subset-DP
//! minimizer and the brute-force ordering walk.

use approx::assert_abs_diff_eq;
use complexity_drop::scenario::from_json;
use complexity_drop::sequence::build_dependencies;
use complexity_drop::{
    canonical_observation_sequence, chain_cost, enumerate_sequences, min_cost,
    min_cost_by_enumeration, scenario_atoms, Error, MachineKind, Scenario,
};

fn fixture(name: &str) -> Scenario {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    let text =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()));
    from_json(&text).unwrap_or_else(|e| panic!("parsing {name}: {e}"))
}

fn scenario(text: &str) -> Scenario {
    from_json(text).expect("test scenario parses")
}

fn labels(s: &Scenario) -> Vec<String> {
    scenario_atoms(s)
        .unwrap()
        .iter()
        .map(|a| a.label.clone())
        .collect()
}

#[test]
fn atoms_follow_declaration_order_within_and_across_events() {
    assert_eq!(
        labels(&fixture("double_suicide.json")),
        [
            "designate:victim_a",
            "feature:e1.method",
            "locate:e1",
            "time:e1",
            "designate:victim_b",
            "feature:e2.method",
            "locate:e2",
            "time:e2",
        ]
    );
}

#[test]
fn hypotheses_are_atomized_after_all_events() {
    let atoms = labels(&fixture("suicide_common_decision.json"));
    assert_eq!(atoms.len(), 9);
    assert_eq!(atoms[8], "hypothesis:common_decision");
    assert!(atoms[..8].iter().all(|l| !l.starts_with("hypothesis:")));
}

#[test]
fn an_entity_is_designated_once_at_first_mention() {
    let s = scenario(
        r#"{ "world": { "area_s_km2": 1e6, "time_window_h": 8760, "population_density_per_km2": 100,
                        "entities": { "p": {} } },
        "events": [
          { "id": "e1", "participants": ["p"], "location": { "x_km": 1, "y_km": 0, "resolution_a_km": 1 } },
          { "id": "e2", "participants": ["p"], "location": { "x_km": 2, "y_km": 0, "resolution_a_km": 1 } }
        ],
        "observer": { "identity": "ego", "home": { "x_km": 0, "y_km": 0, "resolution_a_km": 1 } } }"#,
    );
    assert_eq!(labels(&s), ["designate:p", "locate:e1", "locate:e2"]);
}

#[test]
fn placements_replace_the_plain_localization() {
    let s = scenario(
        r#"{ "world": { "area_s_km2": 1e6, "time_window_h": 8760, "population_density_per_km2": 100,
                        "entities": { "p": {} } },
        "events": [
          { "id": "e", "participants": ["p"],
            "location": { "x_km": 1, "y_km": 0, "resolution_a_km": 1 },
            "placements": ["p"] }
        ],
        "observer": { "identity": "ego", "home": { "x_km": 0, "y_km": 0, "resolution_a_km": 1 } } }"#,
    );
    // With a placement the event's site enters through the placement atom.
    assert_eq!(labels(&s), ["designate:p", "place:p@e"]);
}

#[test]
fn placement_needs_designation_and_any_same_site_localization_first() {
    let s = scenario(
        r#"{ "world": { "area_s_km2": 1e6, "time_window_h": 8760, "population_density_per_km2": 100,
                        "entities": { "p": {} },
                        "locations": { "square": { "x_km": 5, "y_km": 5, "resolution_a_km": 1 } } },
        "events": [
          { "id": "e1", "location": "square" },
          { "id": "e2", "participants": ["p"], "location": "square", "placements": ["p"] }
        ],
        "observer": { "identity": "ego", "home": { "x_km": 0, "y_km": 0, "resolution_a_km": 1 } } }"#,
    );
    assert_eq!(labels(&s), ["locate:e1", "designate:p", "place:p@square"]);
    let seqs = enumerate_sequences(&s, 8).unwrap();
    // The placement must come last; the other two commute.
    assert_eq!(
        seqs.iter().map(|q| q.0.clone()).collect::<Vec<_>>(),
        [vec![0, 1, 2], vec![1, 0, 2]]
    );
}

#[test]
fn independent_atoms_admit_every_permutation() {
    let s = scenario(
        r#"{ "world": { "area_s_km2": 1e6, "time_window_h": 8760, "population_density_per_km2": 100,
                        "entities": { "a": {}, "b": {}, "c": {}, "d": {} } },
        "events": [{ "id": "e", "participants": ["a", "b", "c", "d"] }],
        "observer": { "identity": "ego", "home": { "x_km": 0, "y_km": 0, "resolution_a_km": 1 } } }"#,
    );
    let seqs = enumerate_sequences(&s, 8).unwrap();
    assert_eq!(seqs.len(), 24);
    // Emitted in lexicographic order, without repeats.
    let mut sorted = seqs.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(seqs, sorted);
}

#[test]
fn a_single_atom_has_a_single_ordering() {
    let seqs = enumerate_sequences(&fixture("odometer.json"), 8).unwrap();
    assert_eq!(seqs.iter().map(|q| q.0.clone()).collect::<Vec<_>>(), [vec![0]]);
}

#[test]
fn oversized_scenarios_are_refused_not_truncated() {
    let participants: Vec<String> = (0..33).map(|i| format!("\"p{i}\"")).collect();
    let entities: Vec<String> = (0..33).map(|i| format!("\"p{i}\": {{}}")).collect();
    let s = scenario(&format!(
        r#"{{ "world": {{ "area_s_km2": 1e6, "time_window_h": 8760, "population_density_per_km2": 100,
                        "entities": {{ {} }} }},
        "events": [{{ "id": "e", "participants": [{}] }}],
        "observer": {{ "identity": "ego", "home": {{ "x_km": 0, "y_km": 0, "resolution_a_km": 1 }} }} }}"#,
        entities.join(", "),
        participants.join(", ")
    ));
    assert!(matches!(
        scenario_atoms(&s),
        Err(Error::TooManyAtoms { atoms: 33, bound: 32 })
    ));
}

#[test]
fn enumeration_respects_its_own_budget() {
    assert!(matches!(
        enumerate_sequences(&fixture("double_suicide.json"), 4),
        Err(Error::TooManyAtoms { atoms: 8, bound: 4 })
    ));
}

#[test]
fn exact_search_refuses_more_than_its_bit_width() {
    let participants: Vec<String> = (0..21).map(|i| format!("\"p{i}\"")).collect();
    let entities: Vec<String> = (0..21).map(|i| format!("\"p{i}\": {{}}")).collect();
    let s = scenario(&format!(
        r#"{{ "world": {{ "area_s_km2": 1e6, "time_window_h": 8760, "population_density_per_km2": 100,
                        "entities": {{ {} }} }},
        "events": [{{ "id": "e", "participants": [{}] }}],
        "observer": {{ "identity": "ego", "home": {{ "x_km": 0, "y_km": 0, "resolution_a_km": 1 }} }} }}"#,
        entities.join(", "),
        participants.join(", ")
    ));
    assert!(matches!(
        min_cost(&s, MachineKind::O),
        Err(Error::TooManyAtoms { atoms: 21, bound: 20 })
    ));
}

/// The subset DP must agree with the plain walk over every ordering, on
/// both machines, for every bundled scenario small enough to walk.
#[test]
fn subset_dp_matches_exhaustive_ordering_walk() {
    let small = [
        "odometer.json",
        "odometer_any.json",
        "double_suicide.json",
        "double_suicide_third_party.json",
        "suicide_common_decision.json",
        "suicide_telepathy.json",
        "two_event_base.json",
        "sweep_pair.json",
        "sweep_times.json",
        "encounter_guatemala.json",
        "encounter_landmark_near.json",
        "encounter_landmark_far.json",
        "celebrity_at_home.json",
        "famous_designation.json",
        "eiffel_blaze.json",
    ];
    for name in small {
        let s = fixture(name);
        for machine in [MachineKind::W, MachineKind::O] {
            let dp = min_cost(&s, machine).unwrap();
            let walked = min_cost_by_enumeration(&s, machine, 9).unwrap();
            // Totals must agree exactly (up to float noise); equally cheap
            // orderings may differ, so the sequences themselves need not.
            assert_abs_diff_eq!(dp.total_bits, walked.total_bits, epsilon = 1e-9);
            assert_eq!(
                dp.hypotheses_used, walked.hypotheses_used,
                "hypothesis adoption disagreement on {name} {machine}"
            );
            // Each reported sequence really prices to its reported total.
            for r in [&dp, &walked] {
                let replay = chain_cost(&s, &r.sequence, machine).unwrap();
                let total: f64 = replay.per_atom.iter().map(|e| e.cost_bits).sum();
                assert_abs_diff_eq!(total, r.total_bits, epsilon = 1e-9);
            }
        }
    }
}

/// No single ordering may ever beat the reported minimum.
#[test]
fn no_ordering_undercuts_the_minimum() {
    for name in ["double_suicide.json", "two_event_base.json", "encounter_guatemala.json"] {
        let s = fixture(name);
        let best = min_cost(&s, MachineKind::O).unwrap();
        for seq in enumerate_sequences(&s, 8).unwrap() {
            let chain = chain_cost(&s, &seq, MachineKind::O).unwrap();
            let total: f64 = chain.per_atom.iter().map(|e| e.cost_bits).sum();
            assert!(
                total >= best.total_bits - 1e-9,
                "{name}: ordering {seq} costs {total} < minimum {}",
                best.total_bits
            );
        }
    }
}

#[test]
fn canonical_sequence_is_declaration_order_without_hypotheses() {
    let s = fixture("suicide_common_decision.json");
    let seq = canonical_observation_sequence(&s).unwrap();
    assert_eq!(seq.0, (0..8).collect::<Vec<_>>());
    // And it is always executable as written.
    let chain = chain_cost(&s, &seq, MachineKind::O).unwrap();
    assert_eq!(chain.per_atom.len(), 8);
}

#[test]
fn chain_pricing_rejects_malformed_sequences() {
    use complexity_drop::ComputationSequence;
    let s = fixture("double_suicide.json");
    let dup = ComputationSequence(vec![0, 0, 1]);
    assert!(chain_cost(&s, &dup, MachineKind::O).is_err());
    let oob = ComputationSequence(vec![0, 99]);
    assert!(chain_cost(&s, &oob, MachineKind::O).is_err());

    let h = fixture("suicide_common_decision.json");
    let with_hyp = ComputationSequence((0..9).collect());
    assert!(chain_cost(&h, &with_hyp, MachineKind::O).is_err());
    // The world machine is allowed to execute the hypothesis.
    assert!(chain_cost(&h, &with_hyp, MachineKind::W).is_ok());
}

#[test]
fn declared_order_satisfies_dependencies_everywhere() {
    for name in [
        "encounter_guatemala.json",
        "encounter_landmark_near.json",
        "celebrity_at_home.json",
    ] {
        let s = fixture(name);
        let atoms = scenario_atoms(&s).unwrap();
        let deps = build_dependencies(&s, &atoms).unwrap();
        let mut ctx = 0u32;
        for a in &atoms {
            assert!(
                deps.satisfied(a.index, ctx),
                "{name}: declaration order stalls at {}",
                a.label
            );
            ctx |= 1 << a.index;
        }
    }
}
