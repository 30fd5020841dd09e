//! Scenario-level scoring: unexpectedness in bits, the cognitive
//! probability it implies, and comparison baselines.
//!
//! The headline number is `U = C_w - C`: the world machine's cheapest
//! generation cost minus the observation machine's cheapest description
//! cost. Positive `U` means the scenario is easier to tell than the world
//! finds it to produce, i.e. unexpected; `2^-U` is the probability a
//! listener intuitively assigns to it. Negative `U` means nothing
//! remarkable happened and no probability is implied.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::machine::{
    canonical_observation_sequence, chain_cost, min_cost, round4, CostBreakdown, MachineKind,
    MinCost,
};
use crate::scenario::{validate_scenario, ObserverIdentity, Scenario};
use crate::sequence::site_key;

/// Slack accepted when checking that a distribution sums to one.
pub(crate) const NORMALIZATION_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreReport {
    /// Unexpectedness: world cost minus observation cost.
    #[serde(serialize_with = "round4")]
    pub u_bits: f64,
    /// Cheapest world-machine generation cost.
    #[serde(serialize_with = "round4")]
    pub cw_bits: f64,
    /// Cheapest observation-machine description cost.
    #[serde(serialize_with = "round4")]
    pub c_bits: f64,
    /// `2^-u_bits`; absent when `u_bits` is negative.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cognitive_probability: Option<f64>,
    /// Hypotheses the world machine invoked to cheapen generation.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub hypotheses_used: Vec<String>,
}

/// A score together with both priced sequences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Explanation {
    #[serde(flatten)]
    pub report: ScoreReport,
    pub w_breakdown: CostBreakdown,
    pub o_breakdown: CostBreakdown,
}

/// Two-event score plus the shared-sequence lower bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoincidenceScore {
    #[serde(flatten)]
    pub report: ScoreReport,
    /// World minimum minus the cost of describing the events in declaration
    /// order without reordering; never exceeds `u_bits`.
    #[serde(serialize_with = "round4")]
    pub same_sequence_bound_bits: f64,
}

/// What invoking the scenario's hypotheses buys.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CausalFilterReport {
    /// Hypotheses worth invoking; empty when none are credible enough.
    pub adopted: Vec<String>,
    #[serde(serialize_with = "round4")]
    pub u_with_hypotheses_bits: f64,
    #[serde(serialize_with = "round4")]
    pub u_without_hypotheses_bits: f64,
    /// How many bits of surprise the adopted hypotheses absorb.
    #[serde(serialize_with = "round4")]
    pub explained_away_bits: f64,
}

fn ensure_valid(s: &Scenario) -> Result<()> {
    let violations = validate_scenario(s);
    if violations.is_empty() {
        return Ok(());
    }
    let list = violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ");
    Err(Error::InvalidScenario(list))
}

fn report_from(w: &MinCost, o: &MinCost) -> ScoreReport {
    let u = w.total_bits - o.total_bits;
    ScoreReport {
        u_bits: u,
        cw_bits: w.total_bits,
        c_bits: o.total_bits,
        cognitive_probability: (u >= 0.0).then(|| (-u).exp2()),
        hypotheses_used: w.hypotheses_used.clone(),
    }
}

/// Score a scenario: validate, run both machines, take the gap.
pub fn unexpectedness(s: &Scenario) -> Result<ScoreReport> {
    ensure_valid(s)?;
    let w = min_cost(s, MachineKind::W)?;
    let o = min_cost(s, MachineKind::O)?;
    Ok(report_from(&w, &o))
}

/// Like [`unexpectedness`], returning both priced sequences as well.
pub fn explain(s: &Scenario) -> Result<Explanation> {
    ensure_valid(s)?;
    let w = min_cost(s, MachineKind::W)?;
    let o = min_cost(s, MachineKind::O)?;
    Ok(Explanation {
        report: report_from(&w, &o),
        w_breakdown: w.breakdown,
        o_breakdown: o.breakdown,
    })
}

/// Score a two-event scenario and attach the shared-sequence bound: the
/// world minimum minus the declaration-order description cost. Reordering
/// can only cheapen the description, so the bound never exceeds the score.
pub fn coincidence_score(s: &Scenario) -> Result<CoincidenceScore> {
    if s.events.len() != 2 {
        return Err(Error::NotTwoEvents(s.events.len()));
    }
    ensure_valid(s)?;
    let w = min_cost(s, MachineKind::W)?;
    let o = min_cost(s, MachineKind::O)?;
    let pinned = chain_cost(s, &canonical_observation_sequence(s)?, MachineKind::O)?;
    Ok(CoincidenceScore {
        report: report_from(&w, &o),
        same_sequence_bound_bits: w.total_bits - pinned.total_bits,
    })
}

/// Score a scenario that must describe at least two entities at one site.
pub fn encounter_score(s: &Scenario) -> Result<ScoreReport> {
    ensure_valid(s)?;
    let mut per_site = std::collections::BTreeMap::new();
    for ev in &s.events {
        if ev.placements.is_empty() {
            continue;
        }
        let loc = s.resolve_location(ev.location.as_ref().expect("validated"))?;
        *per_site.entry(site_key(loc)).or_insert(0usize) += ev.placements.len();
    }
    if per_site.values().all(|&n| n < 2) {
        return Err(Error::NotAnEncounter);
    }
    unexpectedness(s)
}

/// Score the same events as experienced by a different narrator. Switching
/// to a third party adds the bits the listener needs to identify them and
/// moves the origin of relative descriptions to their home.
pub fn observer_adjusted(s: &Scenario, identity: ObserverIdentity) -> Result<ScoreReport> {
    let mut adjusted = s.clone();
    adjusted.observer.identity = identity;
    unexpectedness(&adjusted)
}

/// Compare the scenario with and without its causal hypotheses.
pub fn causal_filter(s: &Scenario) -> Result<CausalFilterReport> {
    let with = unexpectedness(s)?;
    let mut bare = s.clone();
    bare.hypotheses.clear();
    let without = unexpectedness(&bare)?;
    Ok(CausalFilterReport {
        adopted: with.hypotheses_used,
        u_with_hypotheses_bits: with.u_bits,
        u_without_hypotheses_bits: without.u_bits,
        explained_away_bits: without.u_bits - with.u_bits,
    })
}

/// The probability a listener implicitly assigns to a scenario of
/// unexpectedness `u_bits`: `2^-u_bits`. Defined only for `u_bits >= 0`.
pub fn cognitive_probability(u_bits: f64) -> Result<f64> {
    if !(u_bits >= 0.0) {
        return Err(Error::UndefinedForNegativeU(u_bits));
    }
    Ok((-u_bits).exp2())
}

/// Self-information of an outcome of probability `p`: `log2(1/p)`.
pub fn shannon_baseline(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(-p.log2())
}

/// Surprise of outcome `index` as the ratio between the distribution's
/// expected probability and the outcome's own: `sum(p_j^2) / p_i`. Equals 1
/// for every outcome of a uniform distribution; large for rare outcomes of
/// skewed ones.
pub fn weaver_baseline(distribution: &[f64], index: usize) -> Result<f64> {
    if index >= distribution.len() {
        return Err(Error::OutcomeIndexOutOfRange {
            index,
            len: distribution.len(),
        });
    }
    for &p in distribution {
        if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
    }
    let sum: f64 = distribution.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_EPS {
        return Err(Error::NotNormalized(sum));
    }
    let target = distribution[index];
    if target == 0.0 {
        return Err(Error::ZeroProbabilityOutcome(index));
    }
    Ok(distribution.iter().map(|p| p * p).sum::<f64>() / target)
}
