//! Descriptions broken into computation atoms, and the orderings a scoring
//! machine may execute them in.
//!
//! An atom is one irreducible step of reproducing the description: naming an
//! entity, fixing a feature value, localizing or timestamping an event,
//! asserting that an entity was at a place, or invoking a causal hypothesis.
//! Costs are order-sensitive, so scoring minimizes over the orderings that
//! respect atom dependencies.

use std::fmt;

use crate::error::{Error, Result};
use crate::scenario::{Location, LocationRef, Scenario};

/// Largest atom set [`enumerate_sequences`] will expand; the count of valid
/// orderings can reach n!.
pub const DEFAULT_ENUMERATION_BOUND: usize = 8;

/// Hard cap on atoms per scenario, set by the width of the dependency masks.
pub const MAX_ATOMS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomPayload {
    /// Bring an entity into the description.
    Designate { entity: String },
    /// Fix one feature value of an event.
    Instantiate { event: String, feature_index: usize },
    /// Localize an event that places nobody in particular.
    Locate { event: String },
    /// Timestamp an event.
    Timestamp { event: String },
    /// Assert that an entity was at the event's place.
    PlaceAt { entity: String, event: String },
    /// Invoke a causal hypothesis.
    Hypothesis { id: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    /// Position in the canonical atom list; sequences refer to atoms by it.
    pub index: usize,
    pub payload: AtomPayload,
    /// Stable human-readable name, e.g. `feature:e1.interval_years`.
    pub label: String,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Identity of a place by exact value: same coordinates at the same
/// resolution mean the same site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SiteKey(u64, u64, u64);

pub fn site_key(loc: &Location) -> SiteKey {
    SiteKey(
        loc.x_km.to_bits(),
        loc.y_km.to_bits(),
        loc.resolution_a_km.to_bits(),
    )
}

fn site_label(r: &LocationRef, event_id: &str) -> String {
    match r {
        LocationRef::Named(name) => name.replace(' ', "_"),
        LocationRef::Inline(_) => event_id.to_string(),
    }
}

/// Break a scenario into its canonical atom list.
///
/// Per event, in event order: first designations of participants not yet
/// designated, then features in declared order, then the localization (only
/// when the event has a location and no placements), then the timestamp,
/// then placements in declared order. Hypothesis atoms follow after all
/// events.
pub fn scenario_atoms(s: &Scenario) -> Result<Vec<Atom>> {
    let mut atoms = Vec::new();
    let mut designated: Vec<&str> = Vec::new();
    let push = |payload: AtomPayload, label: String, atoms: &mut Vec<Atom>| {
        let index = atoms.len();
        atoms.push(Atom {
            index,
            payload,
            label,
        });
    };

    for ev in &s.events {
        for p in &ev.participants {
            if designated.iter().any(|d| d == p) {
                continue;
            }
            designated.push(p);
            push(
                AtomPayload::Designate { entity: p.clone() },
                format!("designate:{p}"),
                &mut atoms,
            );
        }
        for (i, f) in ev.features.iter().enumerate() {
            push(
                AtomPayload::Instantiate {
                    event: ev.id.clone(),
                    feature_index: i,
                },
                format!("feature:{}.{}", ev.id, f.name),
                &mut atoms,
            );
        }
        if ev.location.is_some() && ev.placements.is_empty() {
            push(
                AtomPayload::Locate {
                    event: ev.id.clone(),
                },
                format!("locate:{}", ev.id),
                &mut atoms,
            );
        }
        if ev.time.is_some() {
            push(
                AtomPayload::Timestamp {
                    event: ev.id.clone(),
                },
                format!("time:{}", ev.id),
                &mut atoms,
            );
        }
        if !ev.placements.is_empty() {
            let site = site_label(ev.location.as_ref().expect("validated"), &ev.id);
            for p in &ev.placements {
                push(
                    AtomPayload::PlaceAt {
                        entity: p.clone(),
                        event: ev.id.clone(),
                    },
                    format!("place:{p}@{site}"),
                    &mut atoms,
                );
            }
        }
    }
    for h in &s.hypotheses {
        push(
            AtomPayload::Hypothesis { id: h.id.clone() },
            format!("hypothesis:{}", h.id),
            &mut atoms,
        );
    }
    if atoms.len() > MAX_ATOMS {
        return Err(Error::TooManyAtoms {
            atoms: atoms.len(),
            bound: MAX_ATOMS,
        });
    }
    Ok(atoms)
}

/// Ordering constraints between atoms: for each atom, a list of groups, and
/// a valid sequence has at least one member of every group earlier.
#[derive(Debug, Clone, Default)]
pub struct Dependencies {
    pub any_of: Vec<Vec<u32>>,
}

impl Dependencies {
    pub fn satisfied(&self, atom: usize, preceding: u32) -> bool {
        self.any_of[atom].iter().all(|mask| preceding & mask != 0)
    }
}

/// Compute the dependency groups of an atom list.
///
/// Placements require the placed entity to be designated first and, when
/// any localization atom targets the same site, one of those localizations
/// to come first. Everything else may be reordered freely.
pub fn build_dependencies(s: &Scenario, atoms: &[Atom]) -> Result<Dependencies> {
    if atoms.len() > MAX_ATOMS {
        return Err(Error::TooManyAtoms {
            atoms: atoms.len(),
            bound: MAX_ATOMS,
        });
    }
    let locate_sites: Vec<(usize, SiteKey)> = atoms
        .iter()
        .filter_map(|a| match &a.payload {
            AtomPayload::Locate { event } => {
                let ev = s.event(event).ok()?;
                let loc = s.resolve_location(ev.location.as_ref()?).ok()?;
                Some((a.index, site_key(loc)))
            }
            _ => None,
        })
        .collect();

    let mut any_of = vec![Vec::new(); atoms.len()];
    for atom in atoms {
        if let AtomPayload::PlaceAt { entity, event } = &atom.payload {
            // Only atoms declared before the placement can be prerequisites;
            // this keeps declaration order itself a valid sequence.
            let designate: u32 = atoms
                .iter()
                .filter(|a| {
                    a.index < atom.index
                        && matches!(&a.payload, AtomPayload::Designate { entity: e } if e == entity)
                })
                .map(|a| 1u32 << a.index)
                .sum();
            if designate != 0 {
                any_of[atom.index].push(designate);
            }
            let ev = s.event(event)?;
            let loc = s.resolve_location(ev.location.as_ref().ok_or_else(|| {
                Error::InvalidScenario(format!("event {event:?} places entities without a location"))
            })?)?;
            let here = site_key(loc);
            let locates: u32 = locate_sites
                .iter()
                .filter(|(i, k)| *i < atom.index && *k == here)
                .map(|(i, _)| 1u32 << i)
                .sum();
            if locates != 0 {
                any_of[atom.index].push(locates);
            }
        }
    }
    Ok(Dependencies { any_of })
}

/// One ordering of a subset of the atom list, as atom indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComputationSequence(pub Vec<usize>);

impl ComputationSequence {
    pub fn labels<'a>(&self, atoms: &'a [Atom]) -> Vec<&'a str> {
        self.0.iter().map(|&i| atoms[i].label.as_str()).collect()
    }
}

impl fmt::Display for ComputationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" -> ")?;
            }
            write!(f, "{idx}")?;
        }
        Ok(())
    }
}

/// All dependency-respecting orderings of the atoms selected by `members`,
/// in lexicographic order of atom indices.
pub(crate) fn orderings_of(
    deps: &Dependencies,
    members: u32,
    bound: usize,
) -> Result<Vec<ComputationSequence>> {
    let count = members.count_ones() as usize;
    if count > bound {
        return Err(Error::TooManyAtoms {
            atoms: count,
            bound,
        });
    }
    let ids: Vec<usize> = (0..deps.any_of.len()).filter(|&i| members >> i & 1 == 1).collect();
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(count);
    extend(deps, &ids, 0u32, &mut prefix, &mut out);
    Ok(out)
}

fn extend(
    deps: &Dependencies,
    ids: &[usize],
    placed: u32,
    prefix: &mut Vec<usize>,
    out: &mut Vec<ComputationSequence>,
) {
    if prefix.len() == ids.len() {
        out.push(ComputationSequence(prefix.clone()));
        return;
    }
    for &i in ids {
        if placed >> i & 1 == 1 || !deps.satisfied(i, placed) {
            continue;
        }
        prefix.push(i);
        extend(deps, ids, placed | 1 << i, prefix, out);
        prefix.pop();
    }
}

/// Enumerate every valid ordering of a scenario's full atom list.
///
/// Refuses atom sets larger than `max_atoms` (pass
/// [`DEFAULT_ENUMERATION_BOUND`] unless profiling says otherwise): the
/// result can hold n! sequences.
pub fn enumerate_sequences(s: &Scenario, max_atoms: usize) -> Result<Vec<ComputationSequence>> {
    let atoms = scenario_atoms(s)?;
    if atoms.len() > max_atoms {
        return Err(Error::TooManyAtoms {
            atoms: atoms.len(),
            bound: max_atoms,
        });
    }
    let deps = build_dependencies(s, &atoms)?;
    let members = if atoms.is_empty() {
        0
    } else {
        (1u32 << atoms.len()) - 1
    };
    orderings_of(&deps, members, max_atoms)
}
