//! The two scoring machines and the search for their cheapest computation
//! sequences.
//!
//! Both machines replay the same atom list and charge bits per atom, but
//! under different regimes. The world machine (`W`) prices each atom as an
//! independent draw from the world model: entities it already knows are
//! free, occurrences land where their density says, digit strings are drawn
//! digit by digit, and only a causal hypothesis can tie two events
//! together. The observation machine (`O`) prices the cheapest faithful
//! description: it may reuse anything already said, code places and times
//! relative to what the listener already knows, and name prominent things
//! by their familiarity rank. The gap between the two minima is the
//! unexpectedness of the scenario.
//!
//! Atom costs depend only on the *set* of atoms already executed, never on
//! their order, which makes the minimum over all valid orderings solvable
//! exactly by dynamic programming over subsets ([`min_cost`]).
//! [`min_cost_by_enumeration`] walks every ordering instead and exists to
//! cross-check the DP and to feed the benchmarks.

use serde::{Serialize, Serializer};

use crate::codec::{
    person_by_distance_rank, rank_complexity, spatial_absolute, spatial_relative,
    temporal_absolute, temporal_relative, InstructionCostModel,
};
use crate::codec::{area_localization, density_localization, feature_instantiation};
use crate::error::{Error, Result};
use crate::scenario::{Location, ObserverIdentity, Scenario, TimePoint};
use crate::sequence::{
    build_dependencies, orderings_of, scenario_atoms, Atom, AtomPayload, ComputationSequence,
    Dependencies,
};

/// Largest atom set [`min_cost`] will solve; the table has `2^n` states.
pub const MIN_COST_ATOM_BOUND: usize = 20;

/// Cost differences below this resolution count as ties and are broken
/// lexicographically, so parallel and sequential searches agree bit for bit.
pub(crate) const COST_TIE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MachineKind {
    /// Generation under the world model.
    #[serde(rename = "world")]
    W,
    /// Cheapest faithful description for the listener.
    #[serde(rename = "observation")]
    O,
}

impl std::fmt::Display for MachineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MachineKind::W => "world",
            MachineKind::O => "observation",
        })
    }
}

/// Round a bit count to 4 decimals for reports; searches keep full precision.
pub(crate) fn round4<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64((v * 1e4).round() / 1e4)
}

/// One priced step of a computation sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostEntry {
    pub atom: String,
    #[serde(serialize_with = "round4")]
    pub cost_bits: f64,
    /// Name of the pricing rule that won for this atom.
    pub rule: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostBreakdown {
    pub machine: MachineKind,
    pub per_atom: Vec<CostEntry>,
    #[serde(serialize_with = "round4")]
    pub total_bits: f64,
}

/// Result of minimizing one machine over orderings (and, for the world
/// machine, over which hypotheses to entertain).
#[derive(Debug, Clone)]
pub struct MinCost {
    /// Full-precision total; the breakdown carries the rounded view.
    pub total_bits: f64,
    pub sequence: ComputationSequence,
    pub breakdown: CostBreakdown,
    /// Hypotheses the world machine chose to invoke; empty when none pay off.
    pub hypotheses_used: Vec<String>,
}

/// A description route that becomes available once one of `requires` has
/// been executed.
struct RelRoute {
    requires: u32,
    cost_bits: f64,
    rule: &'static str,
}

/// Everything needed to price one atom under any context, precomputed.
struct AtomFacts {
    is_hypothesis: bool,
    w_static_bits: f64,
    w_rule: &'static str,
    /// Hypothesis atoms that, once executed, generate this atom for free.
    w_zero_by: u32,
    o_static_bits: f64,
    o_static_rule: &'static str,
    o_routes: Vec<RelRoute>,
}

fn w_cost(facts: &[AtomFacts], i: usize, ctx: u32) -> (f64, &'static str) {
    let f = &facts[i];
    if f.w_zero_by & ctx != 0 {
        (0.0, "explained")
    } else {
        (f.w_static_bits, f.w_rule)
    }
}

fn o_cost(facts: &[AtomFacts], i: usize, ctx: u32) -> (f64, &'static str) {
    let f = &facts[i];
    let mut best = (f.o_static_bits, f.o_static_rule);
    for r in &f.o_routes {
        if r.requires & ctx != 0 && r.cost_bits < best.0 {
            best = (r.cost_bits, r.rule);
        }
    }
    best
}

fn atom_cost(facts: &[AtomFacts], i: usize, ctx: u32, machine: MachineKind) -> (f64, &'static str) {
    match machine {
        MachineKind::W => w_cost(facts, i, ctx),
        MachineKind::O => o_cost(facts, i, ctx),
    }
}

/// Candidate list -> (winning cost, winning rule); first strict minimum
/// wins, so candidate order is the tie-break.
fn pick(candidates: &[(&'static str, f64)]) -> (f64, &'static str) {
    let mut best = (f64::INFINITY, "unpriced");
    for &(rule, cost) in candidates {
        if cost < best.0 {
            best = (cost, rule);
        }
    }
    (best.0, best.1)
}

fn atom_facts(s: &Scenario, atoms: &[Atom]) -> Result<Vec<AtomFacts>> {
    let w = &s.world;
    let m: &InstructionCostModel = &w.cost_model;
    let origin = s.relative_origin()?;
    let mut seeds: Vec<&str> = vec![crate::scenario::EGO_ID];
    if let ObserverIdentity::ThirdParty(id) = &s.observer.identity {
        seeds.push(id);
    }

    // Sites and instants carried by other atoms, for relative routes.
    let mut sited: Vec<(usize, &Location)> = Vec::new();
    let mut timed: Vec<(usize, &TimePoint)> = Vec::new();
    for a in atoms {
        match &a.payload {
            AtomPayload::Locate { event } | AtomPayload::PlaceAt { event, .. } => {
                let ev = s.event(event)?;
                let r = ev.location.as_ref().ok_or_else(|| {
                    Error::InvalidScenario(format!("event {event:?} has site atoms but no location"))
                })?;
                sited.push((a.index, s.resolve_location(r)?));
            }
            AtomPayload::Timestamp { event } => {
                let ev = s.event(event)?;
                let t = ev.time.as_ref().ok_or_else(|| {
                    Error::InvalidScenario(format!("event {event:?} has a time atom but no time"))
                })?;
                timed.push((a.index, t));
            }
            _ => {}
        }
    }

    let mut out = Vec::with_capacity(atoms.len());
    for atom in atoms {
        let facts = match &atom.payload {
            AtomPayload::Designate { entity } => {
                let view = s.entity_view(entity)?;
                let (w_bits, w_rule) = if view.known_to_world {
                    (0.0, "known")
                } else if let Some(rank) = view.prominence_rank {
                    (rank_complexity(rank), "prominence")
                } else {
                    (0.0, "implicit")
                };
                let (o_bits, o_rule) = if seeds.contains(&entity.as_str()) {
                    (0.0, "implicit")
                } else if let Some(rank) = view.prominence_rank {
                    (rank_complexity(rank), "prominence")
                } else {
                    (0.0, "implicit")
                };
                AtomFacts {
                    is_hypothesis: false,
                    w_static_bits: w_bits,
                    w_rule,
                    w_zero_by: 0,
                    o_static_bits: o_bits,
                    o_static_rule: o_rule,
                    o_routes: Vec::new(),
                }
            }
            AtomPayload::Instantiate {
                event,
                feature_index,
            } => {
                let ev = s.event(event)?;
                let f = &ev.features[*feature_index];
                let w_bits = feature_instantiation(f, MachineKind::W, m)?;
                let w_rule = match &f.value {
                    crate::scenario::FeatureScalar::Token(_) => {
                        if f.likely_set_size.is_some() {
                            "likely_set"
                        } else {
                            "uniform_domain"
                        }
                    }
                    _ => "independent_draws",
                };
                let mut o_bits = feature_instantiation(f, MachineKind::O, m)?;
                let mut o_rule = match &f.value {
                    crate::scenario::FeatureScalar::Token(_) => "uniform_domain",
                    _ => "minimal_program",
                };
                let mut o_routes = Vec::new();
                // Saying the same thing again is free.
                let twins: u32 = atoms
                    .iter()
                    .filter(|b| {
                        b.index != atom.index
                            && matches!(&b.payload, AtomPayload::Instantiate { event: e2, feature_index: j }
                                if {
                                    let g = &s.event(e2).expect("resolved above").features[*j];
                                    g.name == f.name && g.value == f.value
                                })
                    })
                    .map(|b| 1u32 << b.index)
                    .sum();
                if twins != 0 {
                    o_routes.push(RelRoute {
                        requires: twins,
                        cost_bits: 0.0,
                        rule: "reuse",
                    });
                }
                // A token naming an already-designated entity is free: the
                // association does the work.
                if let crate::scenario::FeatureScalar::Token(t) = &f.value {
                    if seeds.contains(&t.as_str()) {
                        o_bits = 0.0;
                        o_rule = "association";
                    }
                    let named: u32 = atoms
                        .iter()
                        .filter(|b| {
                            matches!(&b.payload, AtomPayload::Designate { entity } if entity == t)
                        })
                        .map(|b| 1u32 << b.index)
                        .sum();
                    if named != 0 {
                        o_routes.push(RelRoute {
                            requires: named,
                            cost_bits: 0.0,
                            rule: "association",
                        });
                    }
                }
                AtomFacts {
                    is_hypothesis: false,
                    w_static_bits: w_bits,
                    w_rule,
                    w_zero_by: 0,
                    o_static_bits: o_bits,
                    o_static_rule: o_rule,
                    o_routes,
                }
            }
            AtomPayload::Locate { event } => {
                let ev = s.event(event)?;
                let loc = s.resolve_location(ev.location.as_ref().expect("atomized"))?;
                let penalty = loc.reachability_penalty_bits;
                let (w_bits, w_rule) = match s.effective_density(ev) {
                    Some(d) => (
                        density_localization(d, loc.resolution_a_km)?,
                        "occurrence_density",
                    ),
                    None => (
                        area_localization(w.area_s_km2, loc.resolution_a_km)? + penalty,
                        "uniform_cell",
                    ),
                };
                let mut candidates = vec![(
                    if loc.prominence_rank.is_some() {
                        "prominence"
                    } else {
                        "uniform_cell"
                    },
                    spatial_absolute(loc, w)?,
                )];
                if let Some(org) = origin {
                    candidates.push(("relative_to_origin", spatial_relative(loc, org) + penalty));
                }
                let (o_bits, o_rule) = pick(&candidates);
                let o_routes = sited
                    .iter()
                    .filter(|(i, _)| *i != atom.index)
                    .map(|(i, there)| RelRoute {
                        requires: 1u32 << i,
                        cost_bits: spatial_relative(loc, there) + penalty,
                        rule: "relative_to_context",
                    })
                    .collect();
                AtomFacts {
                    is_hypothesis: false,
                    w_static_bits: w_bits,
                    w_rule,
                    w_zero_by: 0,
                    o_static_bits: o_bits,
                    o_static_rule: o_rule,
                    o_routes,
                }
            }
            AtomPayload::Timestamp { event } => {
                let ev = s.event(event)?;
                let t = ev.time.as_ref().expect("atomized");
                let abs = temporal_absolute(t, w)?;
                let o_routes = timed
                    .iter()
                    .filter(|(i, _)| *i != atom.index)
                    .map(|(i, then)| RelRoute {
                        requires: 1u32 << i,
                        cost_bits: temporal_relative(t, then),
                        rule: "relative_to_context",
                    })
                    .collect();
                AtomFacts {
                    is_hypothesis: false,
                    w_static_bits: abs,
                    w_rule: "uniform_window",
                    w_zero_by: 0,
                    o_static_bits: abs,
                    o_static_rule: "uniform_window",
                    o_routes,
                }
            }
            AtomPayload::PlaceAt { entity, event } => {
                let ev = s.event(event)?;
                let loc = s.resolve_location(ev.location.as_ref().expect("validated"))?;
                let here = crate::sequence::site_key(loc);
                let penalty = loc.reachability_penalty_bits;
                let view = s.entity_view(entity)?;

                let mut candidates = vec![(
                    if loc.prominence_rank.is_some() {
                        "prominence"
                    } else {
                        "uniform_cell"
                    },
                    spatial_absolute(loc, w)?,
                )];
                if let Some(home) = view.home {
                    candidates.push(("relative_to_home", spatial_relative(loc, home) + penalty));
                }
                // World machine: either spell out where the entity ended up,
                // or pick them as "someone who lives this close".
                let mut w_candidates = candidates.clone();
                if let Some(home) = view.home {
                    w_candidates.push((
                        "person_by_distance",
                        person_by_distance_rank(home, loc, w) + penalty,
                    ));
                }
                let (w_bits, w_rule) = pick(&w_candidates);

                if let Some(org) = origin {
                    candidates.push(("relative_to_origin", spatial_relative(loc, org) + penalty));
                }
                let (o_bits, o_rule) = pick(&candidates);
                let mut o_routes = Vec::new();
                // Someone is already described as being right there.
                let co: u32 = atoms
                    .iter()
                    .filter(|b| {
                        b.index != atom.index
                            && matches!(&b.payload, AtomPayload::PlaceAt { event: e2, .. }
                                if {
                                    let other = s.event(e2).expect("resolved above");
                                    let r = other.location.as_ref().expect("validated");
                                    s.resolve_location(r).map(|l| crate::sequence::site_key(l) == here).unwrap_or(false)
                                })
                    })
                    .map(|b| 1u32 << b.index)
                    .sum();
                if co != 0 {
                    o_routes.push(RelRoute {
                        requires: co,
                        cost_bits: 0.0,
                        rule: "co_presence",
                    });
                }
                for (i, there) in sited.iter().filter(|(i, _)| *i != atom.index) {
                    o_routes.push(RelRoute {
                        requires: 1u32 << i,
                        cost_bits: spatial_relative(loc, there) + penalty,
                        rule: "relative_to_context",
                    });
                }
                AtomFacts {
                    is_hypothesis: false,
                    w_static_bits: w_bits,
                    w_rule,
                    w_zero_by: 0,
                    o_static_bits: o_bits,
                    o_static_rule: o_rule,
                    o_routes,
                }
            }
            AtomPayload::Hypothesis { id } => {
                let h = s
                    .hypotheses
                    .iter()
                    .find(|h| &h.id == id)
                    .ok_or_else(|| Error::UnresolvedReference {
                        what: "hypothesis",
                        id: id.clone(),
                    })?;
                let residual: f64 = h.residual_costs.values().sum();
                AtomFacts {
                    is_hypothesis: true,
                    w_static_bits: h.credibility_cost_bits + residual,
                    w_rule: "credibility",
                    w_zero_by: 0,
                    o_static_bits: f64::INFINITY,
                    o_static_rule: "excluded",
                    o_routes: Vec::new(),
                }
            }
        };
        out.push(facts);
    }

    // An invoked hypothesis generates its explained events for free.
    for atom in atoms {
        if let AtomPayload::Hypothesis { id } = &atom.payload {
            let h = s.hypotheses.iter().find(|h| &h.id == id).expect("resolved");
            for b in atoms {
                let event = match &b.payload {
                    AtomPayload::Instantiate { event, .. }
                    | AtomPayload::Locate { event }
                    | AtomPayload::Timestamp { event }
                    | AtomPayload::PlaceAt { event, .. } => event,
                    _ => continue,
                };
                if h.explains.contains(event) {
                    out[b.index].w_zero_by |= 1u32 << atom.index;
                }
            }
        }
    }
    Ok(out)
}

/// The bits the observation machine spends before the first atom: naming
/// the protagonist of a third-party story to the listener. Familiarity rank
/// when the protagonist has one, otherwise "the person who lives this close".
fn observer_preamble(s: &Scenario) -> Result<Option<CostEntry>> {
    let id = match &s.observer.identity {
        ObserverIdentity::Ego => return Ok(None),
        ObserverIdentity::ThirdParty(id) => id,
    };
    let view = s.entity_view(id)?;
    let (cost_bits, rule) = if let Some(rank) = view.prominence_rank {
        (rank_complexity(rank), "prominence")
    } else if let Some(home) = view.home {
        (
            person_by_distance_rank(home, s.vantage_home()?, &s.world),
            "home_distance",
        )
    } else {
        return Err(Error::MissingObserverData(id.clone()));
    };
    Ok(Some(CostEntry {
        atom: format!("observer:{id}"),
        cost_bits,
        rule,
    }))
}

/// Exact minimum over dependency-respecting orderings of the atoms selected
/// by `members`, by dynamic programming over subsets. Returns the total and
/// the lexicographically first ordering that achieves it.
fn solve(
    facts: &[AtomFacts],
    deps: &Dependencies,
    members: u32,
    machine: MachineKind,
) -> Result<(f64, Vec<usize>)> {
    if members == 0 {
        return Ok((0.0, Vec::new()));
    }
    let n = facts.len();
    let mut h = vec![f64::INFINITY; 1usize << n];
    h[members as usize] = 0.0;
    // Proper submasks of `members` in decreasing numeric order; every state
    // this loop reads is a strictly larger submask, already finished.
    let mut sub = (members - 1) & members;
    loop {
        let mut best = f64::INFINITY;
        let mut rest = members & !sub;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if !deps.satisfied(a, sub) {
                continue;
            }
            let c = atom_cost(facts, a, sub, machine).0 + h[(sub | 1 << a) as usize];
            if c < best {
                best = c;
            }
        }
        h[sub as usize] = best;
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & members;
    }
    if !h[0].is_finite() {
        return Err(Error::InvalidScenario(
            "atom dependencies cannot be satisfied by any ordering".to_string(),
        ));
    }

    // Walk forward, always taking the smallest atom index that still
    // achieves the optimum; the table value is exactly one candidate's sum,
    // so the float comparison is exact.
    let mut order = Vec::with_capacity(members.count_ones() as usize);
    let mut sub = 0u32;
    while sub != members {
        let mut chosen = None;
        let mut rest = members & !sub;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if !deps.satisfied(a, sub) {
                continue;
            }
            let c = atom_cost(facts, a, sub, machine).0 + h[(sub | 1 << a) as usize];
            if c == h[sub as usize] {
                chosen = Some(a);
                break;
            }
        }
        let a = chosen.ok_or_else(|| {
            Error::InvalidScenario("minimum-cost sequence reconstruction failed".to_string())
        })?;
        order.push(a);
        sub |= 1 << a;
    }
    Ok((h[0], order))
}

fn event_atom_mask(facts: &[AtomFacts]) -> u32 {
    facts
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.is_hypothesis)
        .map(|(i, _)| 1u32 << i)
        .sum()
}

fn hypothesis_indices(facts: &[AtomFacts]) -> Vec<usize> {
    facts
        .iter()
        .enumerate()
        .filter(|(_, f)| f.is_hypothesis)
        .map(|(i, _)| i)
        .collect()
}

fn assemble(
    s: &Scenario,
    atoms: &[Atom],
    facts: &[AtomFacts],
    order: Vec<usize>,
    machine: MachineKind,
) -> Result<MinCost> {
    let mut per_atom = Vec::with_capacity(order.len() + 1);
    let mut total = 0.0;
    if machine == MachineKind::O {
        if let Some(entry) = observer_preamble(s)? {
            total += entry.cost_bits;
            per_atom.push(entry);
        }
    }
    let mut ctx = 0u32;
    let mut hypotheses_used = Vec::new();
    for &a in &order {
        let (cost_bits, rule) = atom_cost(facts, a, ctx, machine);
        total += cost_bits;
        per_atom.push(CostEntry {
            atom: atoms[a].label.clone(),
            cost_bits,
            rule,
        });
        if let AtomPayload::Hypothesis { id } = &atoms[a].payload {
            hypotheses_used.push(id.clone());
        }
        ctx |= 1 << a;
    }
    Ok(MinCost {
        total_bits: total,
        sequence: ComputationSequence(order),
        breakdown: CostBreakdown {
            machine,
            per_atom,
            total_bits: total,
        },
        hypotheses_used,
    })
}

fn check_bound(n: usize) -> Result<()> {
    if n > MIN_COST_ATOM_BOUND {
        return Err(Error::TooManyAtoms {
            atoms: n,
            bound: MIN_COST_ATOM_BOUND,
        });
    }
    Ok(())
}

/// Cheapest execution of a scenario on one machine.
///
/// The observation machine minimizes over orderings of the event atoms. The
/// world machine additionally minimizes over which hypotheses to entertain;
/// a hypothesis is invoked only when it strictly beats doing without, so
/// far-fetched explanations drop out rather than tie.
pub fn min_cost(s: &Scenario, machine: MachineKind) -> Result<MinCost> {
    let atoms = scenario_atoms(s)?;
    check_bound(atoms.len())?;
    let facts = atom_facts(s, &atoms)?;
    let deps = build_dependencies(s, &atoms)?;
    let events = event_atom_mask(&facts);

    let best_members = match machine {
        MachineKind::O => events,
        MachineKind::W => {
            let hyps = hypothesis_indices(&facts);
            let mut best: Option<(f64, u32)> = None;
            for pickset in 0u64..(1u64 << hyps.len()) {
                let members = events
                    | hyps
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| pickset >> j & 1 == 1)
                        .map(|(_, &i)| 1u32 << i)
                        .sum::<u32>();
                let (total, _) = solve(&facts, &deps, members, machine)?;
                match best {
                    Some((t, _)) if total >= t - COST_TIE_EPS => {}
                    _ => best = Some((total, members)),
                }
            }
            best.expect("at least the empty hypothesis set").1
        }
    };
    let (_, order) = solve(&facts, &deps, best_members, machine)?;
    assemble(s, &atoms, &facts, order, machine)
}

fn quantized(bits: f64) -> i64 {
    (bits / COST_TIE_EPS).round() as i64
}

fn order_total(facts: &[AtomFacts], order: &[usize], machine: MachineKind) -> f64 {
    let mut ctx = 0u32;
    let mut total = 0.0;
    for &a in order {
        total += atom_cost(facts, a, ctx, machine).0;
        ctx |= 1 << a;
    }
    total
}

/// Reference implementation of [`min_cost`] that walks every valid ordering.
///
/// Exponentially slower than the subset DP but nothing about it is clever,
/// which is the point. Refuses atom sets larger than `max_atoms`. With the
/// `parallel` feature the orderings are scored over a rayon pool; ties are
/// broken by quantized cost then sequence order, so the winner does not
/// depend on thread scheduling.
pub fn min_cost_by_enumeration(
    s: &Scenario,
    machine: MachineKind,
    max_atoms: usize,
) -> Result<MinCost> {
    let atoms = scenario_atoms(s)?;
    let facts = atom_facts(s, &atoms)?;
    let deps = build_dependencies(s, &atoms)?;
    let events = event_atom_mask(&facts);

    let member_sets: Vec<u32> = match machine {
        MachineKind::O => vec![events],
        MachineKind::W => {
            let hyps = hypothesis_indices(&facts);
            (0u64..(1u64 << hyps.len()))
                .map(|pickset| {
                    events
                        | hyps
                            .iter()
                            .enumerate()
                            .filter(|(j, _)| pickset >> j & 1 == 1)
                            .map(|(_, &i)| 1u32 << i)
                            .sum::<u32>()
                })
                .collect()
        }
    };

    let mut best: Option<(i64, ComputationSequence)> = None;
    for members in member_sets {
        let seqs = orderings_of(&deps, members, max_atoms)?;
        let local = score_orderings(&facts, machine, seqs);
        if let Some((q, seq)) = local {
            match &best {
                Some((bq, _)) if q >= *bq => {}
                _ => best = Some((q, seq)),
            }
        }
    }
    let (_, seq) = best.ok_or_else(|| {
        Error::InvalidScenario("atom dependencies admit no ordering".to_string())
    })?;
    assemble(s, &atoms, &facts, seq.0, machine)
}

#[cfg(feature = "parallel")]
fn score_orderings(
    facts: &[AtomFacts],
    machine: MachineKind,
    seqs: Vec<ComputationSequence>,
) -> Option<(i64, ComputationSequence)> {
    use rayon::prelude::*;
    seqs.into_par_iter()
        .map(|seq| (quantized(order_total(facts, &seq.0, machine)), seq))
        .min_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)))
}

#[cfg(not(feature = "parallel"))]
fn score_orderings(
    facts: &[AtomFacts],
    machine: MachineKind,
    seqs: Vec<ComputationSequence>,
) -> Option<(i64, ComputationSequence)> {
    seqs.into_iter()
        .map(|seq| (quantized(order_total(facts, &seq.0, machine)), seq))
        .min_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)))
}

/// The canonical observation sequence: every event atom in declaration
/// order, hypotheses excluded. Always dependency-valid because atoms are
/// declared after everything they depend on.
pub fn canonical_observation_sequence(s: &Scenario) -> Result<ComputationSequence> {
    let atoms = scenario_atoms(s)?;
    Ok(ComputationSequence(
        atoms
            .iter()
            .filter(|a| !matches!(a.payload, AtomPayload::Hypothesis { .. }))
            .map(|a| a.index)
            .collect(),
    ))
}

/// Price a caller-chosen sequence instead of searching for the cheapest one.
///
/// The sequence must be dependency-valid and duplicate-free; the observation
/// machine additionally rejects hypothesis atoms, which it never executes.
pub fn chain_cost(
    s: &Scenario,
    seq: &ComputationSequence,
    machine: MachineKind,
) -> Result<CostBreakdown> {
    let atoms = scenario_atoms(s)?;
    let facts = atom_facts(s, &atoms)?;
    let mut seen = 0u32;
    for &a in &seq.0 {
        if a >= atoms.len() {
            return Err(Error::InvalidScenario(format!(
                "sequence refers to atom {a} but the scenario has {}",
                atoms.len()
            )));
        }
        if seen >> a & 1 == 1 {
            return Err(Error::InvalidScenario(format!(
                "sequence executes atom {a} twice"
            )));
        }
        seen |= 1 << a;
        if machine == MachineKind::O && facts[a].is_hypothesis {
            return Err(Error::InvalidScenario(
                "the observation machine does not execute hypothesis atoms".to_string(),
            ));
        }
    }
    Ok(assemble(s, &atoms, &facts, seq.0.clone(), machine)?.breakdown)
}
