//! Seeded random scenario generator shared by the integration tests.
//!
//! Generates two-event scenarios with disjoint participants and no
//! hypotheses, valid by construction, so tests can compare the joint score
//! against the single-event scores.

use std::collections::BTreeMap;

use complexity_drop::codec::InstructionCostModel;
use complexity_drop::scenario::{
    Entity, EntityKind, EventDescription, FeatureScalar, FeatureValue, Location, LocationRef,
    Observer, ObserverIdentity, Scenario, TimePoint, WorldModel,
};
use complexity_drop::validate_scenario;
use rand::Rng;

const AREA_KM2: f64 = 1e6;
const WINDOW_H: f64 = 8760.0;

fn random_location(rng: &mut impl Rng) -> Location {
    let res = [0.5, 1.0, 2.0][rng.gen_range(0..3)];
    Location {
        x_km: rng.gen_range(-400.0..400.0),
        y_km: rng.gen_range(-400.0..400.0),
        resolution_a_km: res,
        prominence_rank: None,
        reachability_penalty_bits: 0.0,
    }
}

fn random_features(rng: &mut impl Rng) -> Vec<FeatureValue> {
    let names = ["color", "method", "reading", "count"];
    let tokens = ["red", "rope", "river", "poison"];
    let n = rng.gen_range(0..=2usize);
    (0..n)
        .map(|i| {
            let value = match rng.gen_range(0..3) {
                0 => FeatureScalar::Token(tokens[rng.gen_range(0..tokens.len())].to_string()),
                1 => FeatureScalar::Integer(rng.gen_range(1..10_000)),
                _ => {
                    let len = rng.gen_range(1..=6);
                    FeatureScalar::Digits(
                        (0..len).map(|_| char::from(b'0' + rng.gen_range(0..10))).collect(),
                    )
                }
            };
            let is_token = matches!(value, FeatureScalar::Token(_));
            FeatureValue {
                name: names[i].to_string(),
                value,
                domain_size: is_token.then(|| 1 << rng.gen_range(2..10)),
                likely_set_size: None,
            }
        })
        .collect()
}

fn random_event(rng: &mut impl Rng, id: &str, participant: &str, kinded: bool) -> EventDescription {
    let location = rng.gen_bool(0.8).then(|| LocationRef::Inline(random_location(rng)));
    let placements = if location.is_some() && rng.gen_bool(0.5) {
        vec![participant.to_string()]
    } else {
        Vec::new()
    };
    EventDescription {
        id: id.to_string(),
        participants: vec![participant.to_string()],
        features: random_features(rng),
        location,
        time: rng.gen_bool(0.7).then(|| TimePoint {
            t_h: rng.gen_range(0.0..WINDOW_H),
            resolution_tau_h: [0.5, 1.0][rng.gen_range(0..2)],
        }),
        kind: kinded.then(|| "incident".to_string()),
        occurrence_density_per_km2: None,
        placements,
    }
}

fn random_person(rng: &mut impl Rng) -> Entity {
    Entity {
        kind: EntityKind::Person,
        prominence_rank: None,
        home: rng.gen_bool(0.7).then(|| LocationRef::Inline(random_location(rng))),
        known_to_world: true,
    }
}

/// A valid two-event scenario with disjoint participants and no hypotheses.
pub fn random_pair_scenario(rng: &mut impl Rng) -> Scenario {
    let mut entities = BTreeMap::new();
    entities.insert("p1".to_string(), random_person(rng));
    entities.insert("p2".to_string(), random_person(rng));

    let identity = if rng.gen_bool(0.25) {
        entities.insert(
            "q".to_string(),
            Entity {
                kind: EntityKind::Person,
                prominence_rank: Some((1 << rng.gen_range(1..8)) - 1),
                home: Some(LocationRef::Inline(random_location(rng))),
                known_to_world: true,
            },
        );
        ObserverIdentity::ThirdParty("q".to_string())
    } else {
        ObserverIdentity::Ego
    };

    let mut event_densities = BTreeMap::new();
    let kinded = rng.gen_bool(0.5);
    if kinded {
        event_densities.insert("incident".to_string(), 10f64.powi(-rng.gen_range(4..8)));
    }

    let s = Scenario {
        world: WorldModel {
            area_s_km2: AREA_KM2,
            time_window_h: WINDOW_H,
            population_density_per_km2: 100.0,
            event_densities,
            celebrity_lists: BTreeMap::new(),
            cost_model: InstructionCostModel::default(),
            entities,
            locations: BTreeMap::new(),
        },
        events: vec![
            random_event(rng, "e1", "p1", kinded),
            random_event(rng, "e2", "p2", kinded),
        ],
        observer: Observer {
            identity,
            home: LocationRef::Inline(random_location(rng)),
        },
        hypotheses: Vec::new(),
    };
    let violations = validate_scenario(&s);
    assert!(violations.is_empty(), "generator produced invalid scenario: {violations:?}");
    s
}

/// The same scenario with only one of its events kept.
pub fn keep_event(s: &Scenario, id: &str) -> Scenario {
    let mut single = s.clone();
    single.events.retain(|ev| ev.id == id);
    assert_eq!(single.events.len(), 1, "no event {id}");
    single
}
