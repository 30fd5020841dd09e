//! Scenario input model: the world, its entities and places, the described
//! events, the observer, and optional causal hypotheses.
//!
//! Scenario files are JSON with the top-level keys `world`, `events`,
//! `observer`, `hypotheses`. Entities and named locations live under
//! `world`; events may also carry locations inline. [`validate_scenario`]
//! reports shape problems as data instead of failing fast, so a caller can
//! show all of them at once.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::codec::{parse_digits, InstructionCostModel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Location {
    pub x_km: f64,
    pub y_km: f64,
    /// Side of the localization cell; fixes the resolution of every cost
    /// that mentions this place.
    pub resolution_a_km: f64,
    /// Position on the world's landmark familiarity list, 1 = best known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prominence_rank: Option<u64>,
    /// Extra bits when the spot is materially hard to get to.
    #[serde(default)]
    pub reachability_penalty_bits: f64,
}

impl Location {
    pub fn distance_km(&self, other: &Location) -> f64 {
        (self.x_km - other.x_km).hypot(self.y_km - other.y_km)
    }

    /// Same map cell at this location's resolution.
    pub fn same_cell(&self, other: &Location) -> bool {
        self.distance_km(other) < self.resolution_a_km
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimePoint {
    pub t_h: f64,
    pub resolution_tau_h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    #[default]
    Person,
    Monument,
    Object,
    Role,
}

/// A location either named in `world.locations` or written inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LocationRef {
    Named(String),
    Inline(Location),
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entity {
    #[serde(default)]
    pub kind: EntityKind,
    /// Position on a familiarity list (celebrities, acquaintances), 1 = most
    /// prominent. Derived from `world.celebrity_lists` when absent there.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prominence_rank: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub home: Option<LocationRef>,
    /// Whether the world model already accounts for this entity existing.
    #[serde(default = "default_true")]
    pub known_to_world: bool,
}

/// One scalar feature value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureScalar {
    Integer(u64),
    Digits(String),
    Token(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureValue {
    pub name: String,
    pub value: FeatureScalar,
    /// Number of alternatives a categorical value is drawn from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_size: Option<u64>,
    /// Smaller subset the world model would realistically draw from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub likely_set_size: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventDescription {
    pub id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub participants: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub features: Vec<FeatureValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<LocationRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimePoint>,
    /// Occurrence kind looked up in `world.event_densities`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    /// Direct occurrence density; overrides the kind lookup.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub occurrence_density_per_km2: Option<f64>,
    /// Participants whose presence at `location` is part of the description.
    /// When non-empty the event contributes one placement per entry instead
    /// of a plain localization.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub placements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObserverIdentity {
    /// The narrator themselves.
    Ego,
    /// A designated third party the story happened to.
    ThirdParty(String),
}

impl Serialize for ObserverIdentity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ObserverIdentity::Ego => s.serialize_str("ego"),
            ObserverIdentity::ThirdParty(id) => {
                let mut map = BTreeMap::new();
                map.insert("third_party", id);
                map.serialize(s)
            }
        }
    }
}

impl<'de> Deserialize<'de> for ObserverIdentity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Tag(String),
            Map { third_party: String },
        }
        match Raw::deserialize(d)? {
            Raw::Tag(s) if s == "ego" => Ok(ObserverIdentity::Ego),
            Raw::Tag(s) => Err(serde::de::Error::custom(format!(
                "observer identity must be \"ego\" or {{\"third_party\": id}}, got {s:?}"
            ))),
            Raw::Map { third_party } => Ok(ObserverIdentity::ThirdParty(third_party)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Observer {
    pub identity: ObserverIdentity,
    /// The narrator's home: the vantage distances are measured from.
    pub home: LocationRef,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CausalHypothesis {
    pub id: String,
    /// Bits the world model pays to entertain the hypothesis at all.
    pub credibility_cost_bits: f64,
    /// Events the hypothesis accounts for.
    pub explains: Vec<String>,
    /// Leftover generation cost per explained event; absent means fully
    /// explained (zero).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub residual_costs: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldModel {
    pub area_s_km2: f64,
    pub time_window_h: f64,
    pub population_density_per_km2: f64,
    /// Occurrence densities per event kind, in occurrences per km^2.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub event_densities: BTreeMap<String, f64>,
    /// Familiarity-ordered entity lists; position derives prominence ranks.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub celebrity_lists: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub cost_model: InstructionCostModel,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub entities: BTreeMap<String, Entity>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub locations: BTreeMap<String, Location>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub world: WorldModel,
    pub events: Vec<EventDescription>,
    pub observer: Observer,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypotheses: Vec<CausalHypothesis>,
}

/// Reserved participant id for the narrator.
pub const EGO_ID: &str = "ego";

/// A resolved view of one entity, with the narrator synthesized on demand.
#[derive(Debug, Clone)]
pub struct EntityView<'a> {
    pub id: &'a str,
    pub kind: EntityKind,
    pub prominence_rank: Option<u64>,
    pub home: Option<&'a Location>,
    pub known_to_world: bool,
}

impl Scenario {
    pub fn resolve_location<'a>(&'a self, r: &'a LocationRef) -> Result<&'a Location> {
        match r {
            LocationRef::Inline(loc) => Ok(loc),
            LocationRef::Named(name) => {
                self.world
                    .locations
                    .get(name)
                    .ok_or_else(|| Error::UnresolvedReference {
                        what: "location",
                        id: name.clone(),
                    })
            }
        }
    }

    /// Rank derived from the first celebrity list containing the entity.
    fn list_rank(&self, id: &str) -> Option<u64> {
        self.world
            .celebrity_lists
            .values()
            .find_map(|list| list.iter().position(|e| e == id))
            .map(|pos| pos as u64 + 1)
    }

    pub fn entity_view<'a>(&'a self, id: &'a str) -> Result<EntityView<'a>> {
        if id == EGO_ID {
            return Ok(EntityView {
                id,
                kind: EntityKind::Person,
                prominence_rank: None,
                home: Some(self.vantage_home()?),
                known_to_world: true,
            });
        }
        let entity = self
            .world
            .entities
            .get(id)
            .ok_or_else(|| Error::UnresolvedReference {
                what: "entity",
                id: id.to_string(),
            })?;
        Ok(EntityView {
            id,
            kind: entity.kind,
            prominence_rank: entity.prominence_rank.or_else(|| self.list_rank(id)),
            home: match &entity.home {
                Some(r) => Some(self.resolve_location(r)?),
                None => None,
            },
            known_to_world: entity.known_to_world,
        })
    }

    /// The narrator's home.
    pub fn vantage_home(&self) -> Result<&Location> {
        self.resolve_location(&self.observer.home)
    }

    /// Where relative spatial coding starts: the narrator's home for an ego
    /// story, the protagonist's home for a third-party story.
    pub fn relative_origin(&self) -> Result<Option<&Location>> {
        match &self.observer.identity {
            ObserverIdentity::Ego => Ok(Some(self.vantage_home()?)),
            ObserverIdentity::ThirdParty(id) => {
                let e = self
                    .world
                    .entities
                    .get(id)
                    .ok_or_else(|| Error::UnresolvedReference {
                        what: "entity",
                        id: id.clone(),
                    })?;
                match &e.home {
                    Some(r) => Ok(Some(self.resolve_location(r)?)),
                    None => Ok(None),
                }
            }
        }
    }

    /// Occurrence density for an event, from the direct field or the kind
    /// table.
    pub fn effective_density(&self, ev: &EventDescription) -> Option<f64> {
        ev.occurrence_density_per_km2.or_else(|| {
            ev.kind
                .as_ref()
                .and_then(|k| self.world.event_densities.get(k).copied())
        })
    }

    pub fn event(&self, id: &str) -> Result<&EventDescription> {
        self.events
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnresolvedReference {
                what: "event",
                id: id.to_string(),
            })
    }
}

/// One scenario-shape problem, pointing at the offending field.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn positive_finite(v: &mut Vec<Violation>, field: &str, x: f64) {
    if !(x.is_finite() && x > 0.0) {
        v.push(Violation {
            field: field.to_string(),
            message: format!("must be a positive finite number, got {x}"),
        });
    }
}

fn nonnegative_finite(v: &mut Vec<Violation>, field: &str, x: f64) {
    if !(x.is_finite() && x >= 0.0) {
        v.push(Violation {
            field: field.to_string(),
            message: format!("must be a non-negative finite number, got {x}"),
        });
    }
}

fn check_location(v: &mut Vec<Violation>, field: &str, loc: &Location) {
    if !loc.x_km.is_finite() || !loc.y_km.is_finite() {
        v.push(Violation {
            field: format!("{field}.x_km"),
            message: "coordinates must be finite".to_string(),
        });
    }
    positive_finite(v, &format!("{field}.resolution_a_km"), loc.resolution_a_km);
    if loc.prominence_rank == Some(0) {
        v.push(Violation {
            field: format!("{field}.prominence_rank"),
            message: "ranks start at 1".to_string(),
        });
    }
    nonnegative_finite(
        v,
        &format!("{field}.reachability_penalty_bits"),
        loc.reachability_penalty_bits,
    );
}

fn check_location_ref(v: &mut Vec<Violation>, s: &Scenario, field: &str, r: &LocationRef) {
    match r {
        LocationRef::Named(name) => {
            if !s.world.locations.contains_key(name) {
                v.push(Violation {
                    field: field.to_string(),
                    message: format!("unknown location {name:?}"),
                });
            }
        }
        LocationRef::Inline(loc) => check_location(v, field, loc),
    }
}

fn entity_exists(s: &Scenario, id: &str) -> bool {
    id == EGO_ID || s.world.entities.contains_key(id)
}

/// Check every structural invariant of a scenario and report all problems.
///
/// Pure and order-independent over the event list: permuting events permutes
/// field indices in the report but never changes what is flagged.
pub fn validate_scenario(s: &Scenario) -> Vec<Violation> {
    let mut v = Vec::new();
    let w = &s.world;

    positive_finite(&mut v, "world.area_s_km2", w.area_s_km2);
    positive_finite(&mut v, "world.time_window_h", w.time_window_h);
    positive_finite(
        &mut v,
        "world.population_density_per_km2",
        w.population_density_per_km2,
    );
    nonnegative_finite(
        &mut v,
        "world.cost_model.opcode_cost_bits",
        w.cost_model.opcode_cost_bits,
    );
    if w.cost_model.repeat_count_max == 0 {
        v.push(Violation {
            field: "world.cost_model.repeat_count_max".to_string(),
            message: "must be at least 1".to_string(),
        });
    }
    if w.cost_model.pow10_exponent_max == 0 {
        v.push(Violation {
            field: "world.cost_model.pow10_exponent_max".to_string(),
            message: "must be at least 1".to_string(),
        });
    }
    for (kind, d) in &w.event_densities {
        positive_finite(&mut v, &format!("world.event_densities.{kind}"), *d);
    }
    for (name, loc) in &w.locations {
        check_location(&mut v, &format!("world.locations.{name}"), loc);
    }
    if w.entities.contains_key(EGO_ID) {
        v.push(Violation {
            field: format!("world.entities.{EGO_ID}"),
            message: "the id \"ego\" is reserved for the narrator".to_string(),
        });
    }
    for (id, e) in &w.entities {
        let field = format!("world.entities.{id}");
        if e.prominence_rank == Some(0) {
            v.push(Violation {
                field: format!("{field}.prominence_rank"),
                message: "ranks start at 1".to_string(),
            });
        }
        if let Some(home) = &e.home {
            check_location_ref(&mut v, s, &format!("{field}.home"), home);
        }
    }
    for (list, members) in &w.celebrity_lists {
        let mut seen = BTreeSet::new();
        for (i, id) in members.iter().enumerate() {
            let field = format!("world.celebrity_lists.{list}[{i}]");
            if !w.entities.contains_key(id) {
                v.push(Violation {
                    field: field.clone(),
                    message: format!("unknown entity {id:?}"),
                });
            }
            if !seen.insert(id) {
                v.push(Violation {
                    field,
                    message: format!("duplicate list entry {id:?}"),
                });
            }
        }
    }

    if s.events.is_empty() {
        v.push(Violation {
            field: "events".to_string(),
            message: "at least one event is required".to_string(),
        });
    }
    let mut event_ids = BTreeSet::new();
    for (i, ev) in s.events.iter().enumerate() {
        let field = format!("events[{i}]");
        if ev.id.is_empty() {
            v.push(Violation {
                field: format!("{field}.id"),
                message: "event id must be non-empty".to_string(),
            });
        }
        if !event_ids.insert(ev.id.clone()) {
            v.push(Violation {
                field: format!("{field}.id"),
                message: format!("duplicate event id {:?}", ev.id),
            });
        }
        let mut participants = BTreeSet::new();
        for (j, p) in ev.participants.iter().enumerate() {
            let pfield = format!("{field}.participants[{j}]");
            if !entity_exists(s, p) {
                v.push(Violation {
                    field: pfield.clone(),
                    message: format!("unknown entity {p:?}"),
                });
            }
            if !participants.insert(p) {
                v.push(Violation {
                    field: pfield,
                    message: format!("duplicate participant {p:?}"),
                });
            }
        }
        let mut names = BTreeSet::new();
        for (j, f) in ev.features.iter().enumerate() {
            let ffield = format!("{field}.features[{j}]");
            if !names.insert(f.name.clone()) {
                v.push(Violation {
                    field: format!("{ffield}.name"),
                    message: format!("duplicate feature name {:?}", f.name),
                });
            }
            match &f.value {
                FeatureScalar::Token(_) => {
                    match f.domain_size {
                        None => v.push(Violation {
                            field: format!("{ffield}.domain_size"),
                            message: "categorical values need a domain_size".to_string(),
                        }),
                        Some(0) => v.push(Violation {
                            field: format!("{ffield}.domain_size"),
                            message: "must be at least 1".to_string(),
                        }),
                        Some(_) => {}
                    }
                    if let (Some(likely), Some(domain)) = (f.likely_set_size, f.domain_size) {
                        if likely < 1 || likely > domain {
                            v.push(Violation {
                                field: format!("{ffield}.likely_set_size"),
                                message: format!("must be within 1..={domain}"),
                            });
                        }
                    }
                }
                FeatureScalar::Digits(d) => {
                    if let Err(e) = parse_digits(d) {
                        v.push(Violation {
                            field: format!("{ffield}.value"),
                            message: e.to_string(),
                        });
                    }
                }
                FeatureScalar::Integer(n) => {
                    if *n < 1 || *n > crate::codec::MAX_INTEGER {
                        v.push(Violation {
                            field: format!("{ffield}.value"),
                            message: "integers must be between 1 and 10^16".to_string(),
                        });
                    }
                }
            }
        }
        if let Some(loc) = &ev.location {
            check_location_ref(&mut v, s, &format!("{field}.location"), loc);
        }
        if let Some(t) = &ev.time {
            if !t.t_h.is_finite() {
                v.push(Violation {
                    field: format!("{field}.time.t_h"),
                    message: "must be finite".to_string(),
                });
            }
            positive_finite(&mut v, &format!("{field}.time.resolution_tau_h"), t.resolution_tau_h);
        }
        if let Some(d) = ev.occurrence_density_per_km2 {
            positive_finite(&mut v, &format!("{field}.occurrence_density_per_km2"), d);
        }
        if !ev.placements.is_empty() && ev.location.is_none() {
            v.push(Violation {
                field: format!("{field}.placements"),
                message: "placements need an event location".to_string(),
            });
        }
        let mut placed = BTreeSet::new();
        for (j, p) in ev.placements.iter().enumerate() {
            let pfield = format!("{field}.placements[{j}]");
            if !ev.participants.iter().any(|x| x == p) {
                v.push(Violation {
                    field: pfield.clone(),
                    message: format!("{p:?} is not a participant of this event"),
                });
            }
            if !placed.insert(p) {
                v.push(Violation {
                    field: pfield,
                    message: format!("duplicate placement {p:?}"),
                });
            }
        }
    }

    check_location_ref(&mut v, s, "observer.home", &s.observer.home);
    if let ObserverIdentity::ThirdParty(id) = &s.observer.identity {
        match s.world.entities.get(id) {
            None => v.push(Violation {
                field: "observer.identity.third_party".to_string(),
                message: format!("unknown entity {id:?}"),
            }),
            Some(e) => {
                if e.prominence_rank.is_none() && s.list_rank(id).is_none() && e.home.is_none() {
                    v.push(Violation {
                        field: "observer.identity.third_party".to_string(),
                        message: format!(
                            "entity {id:?} needs a prominence_rank or a home so its designation cost is computable"
                        ),
                    });
                }
            }
        }
    }

    let mut hyp_ids = BTreeSet::new();
    for (i, h) in s.hypotheses.iter().enumerate() {
        let field = format!("hypotheses[{i}]");
        if !hyp_ids.insert(h.id.clone()) {
            v.push(Violation {
                field: format!("{field}.id"),
                message: format!("duplicate hypothesis id {:?}", h.id),
            });
        }
        nonnegative_finite(&mut v, &format!("{field}.credibility_cost_bits"), h.credibility_cost_bits);
        if h.explains.is_empty() {
            v.push(Violation {
                field: format!("{field}.explains"),
                message: "a hypothesis must explain at least one event".to_string(),
            });
        }
        let mut explained = BTreeSet::new();
        for (j, id) in h.explains.iter().enumerate() {
            let efield = format!("{field}.explains[{j}]");
            if !s.events.iter().any(|e| &e.id == id) {
                v.push(Violation {
                    field: efield.clone(),
                    message: format!("unknown event {id:?}"),
                });
            }
            if !explained.insert(id.clone()) {
                v.push(Violation {
                    field: efield,
                    message: format!("duplicate explained event {id:?}"),
                });
            }
        }
        for (id, r) in &h.residual_costs {
            let rfield = format!("{field}.residual_costs.{id}");
            if !explained.contains(id) {
                v.push(Violation {
                    field: rfield.clone(),
                    message: format!("residual for event {id:?} the hypothesis does not explain"),
                });
            }
            nonnegative_finite(&mut v, &rfield, *r);
        }
    }

    v
}

/// Parse a scenario from JSON text.
pub fn from_json(text: &str) -> std::result::Result<Scenario, serde_json::Error> {
    serde_json::from_str(text)
}
