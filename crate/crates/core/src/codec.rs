//! Closed-form bit-cost estimators.
//!
//! Everything here prices a single elementary choice: picking one digit
//! string, one cell of the map, one instant of the time window, one entry of
//! a prominence list. Costs are plain `f64` bit counts. The digit-string
//! codec shares its four-opcode language and price list with the exhaustive
//! search in [`crate::oracle`], which exists to cross-check it.

use serde::{Deserialize, Serialize};
use std::f64::consts::{LOG2_10, PI};

use crate::error::{Error, Result};
use crate::machine::MachineKind;
use crate::oracle::{Instruction, Program};
use crate::scenario::{FeatureScalar, FeatureValue, Location, TimePoint, WorldModel};

/// Longest digit string the codec accepts.
pub const MAX_DIGITS: usize = 16;

/// Price list for the digit-program language {EMIT_DIGIT, COPY, REPEAT, POW10}.
///
/// A digit operand always costs log2(10) bits. REPEAT and POW10 carry a small
/// count operand priced as log2 of its configured maximum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InstructionCostModel {
    /// Bits to name one opcode out of the four-opcode alphabet.
    pub opcode_cost_bits: f64,
    /// Largest count a single REPEAT may carry.
    pub repeat_count_max: u8,
    /// Largest exponent a single POW10 may carry.
    pub pow10_exponent_max: u8,
}

impl Default for InstructionCostModel {
    fn default() -> Self {
        InstructionCostModel {
            opcode_cost_bits: 2.0,
            repeat_count_max: 16,
            pow10_exponent_max: 8,
        }
    }
}

impl InstructionCostModel {
    /// Bits to instantiate one decimal digit. Fixed by the alphabet size.
    pub const DIGIT_COST_BITS: f64 = LOG2_10;

    pub fn digit_cost(&self) -> f64 {
        Self::DIGIT_COST_BITS
    }

    /// Cost of an EMIT_DIGIT instruction: opcode plus one instantiated digit.
    pub fn emit_cost(&self) -> f64 {
        self.opcode_cost_bits + Self::DIGIT_COST_BITS
    }

    /// Cost of the count operand of REPEAT (log2 of the count range).
    pub fn repeat_count_cost(&self) -> f64 {
        f64::from(self.repeat_count_max).log2()
    }

    /// Cost of the exponent operand of POW10 (log2 of the exponent range).
    pub fn pow10_exponent_cost(&self) -> f64 {
        f64::from(self.pow10_exponent_max).log2()
    }
}

/// A minimal-cost digit program together with its cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub cost_bits: f64,
    pub program: Program,
}

impl Plan {
    /// Number of digits the program instantiates explicitly (EMIT_DIGIT count).
    pub fn emitted_digits(&self) -> usize {
        self.program
            .instructions
            .iter()
            .filter(|i| matches!(i, Instruction::EmitDigit(_)))
            .count()
    }
}

pub(crate) fn parse_digits(s: &str) -> Result<Vec<u8>> {
    parse_digits_capped(s, MAX_DIGITS)
}

fn parse_digits_capped(s: &str, cap: usize) -> Result<Vec<u8>> {
    if s.is_empty() {
        return Err(Error::EmptyDigitString);
    }
    if s.len() > cap {
        return Err(Error::TooLong { max: cap });
    }
    s.chars()
        .map(|c| c.to_digit(10).map(|d| d as u8).ok_or(Error::InvalidDigit(c)))
        .collect()
}

/// Cheapest program producing `s`, by dynamic programming over prefixes.
///
/// Transitions mirror the opcode semantics exactly: EMIT_DIGIT appends one
/// chosen digit, COPY repeats the last output digit once, REPEAT(k) repeats
/// it k times, POW10(e) appends e zeros. The first instruction must emit.
/// Ties keep the earliest transition in that trial order, so the result is
/// deterministic.
pub fn digit_string_plan(s: &str, m: &InstructionCostModel) -> Result<Plan> {
    plan_of(&parse_digits(s)?, m)
}

fn plan_of(ds: &[u8], m: &InstructionCostModel) -> Result<Plan> {
    let n = ds.len();
    let mut cost = vec![f64::INFINITY; n + 1];
    let mut step: Vec<Option<Instruction>> = vec![None; n + 1];
    cost[0] = 0.0;
    for i in 1..=n {
        let consider = |slot_cost: &mut f64, slot_step: &mut Option<Instruction>, c: f64, ins: Instruction| {
            if c < *slot_cost {
                *slot_cost = c;
                *slot_step = Some(ins);
            }
        };
        let (head, tail) = cost.split_at_mut(i);
        let slot_cost = &mut tail[0];
        let slot_step = &mut step[i];
        consider(slot_cost, slot_step, head[i - 1] + m.emit_cost(), Instruction::EmitDigit(ds[i - 1]));
        if i >= 2 && ds[i - 1] == ds[i - 2] {
            consider(slot_cost, slot_step, head[i - 1] + m.opcode_cost_bits, Instruction::Copy);
        }
        for k in 1..=usize::from(m.repeat_count_max).min(i - 1) {
            if ds[i - k..i].iter().all(|&d| d == ds[i - k - 1]) {
                consider(
                    slot_cost,
                    slot_step,
                    head[i - k] + m.opcode_cost_bits + m.repeat_count_cost(),
                    Instruction::Repeat(k as u8),
                );
            }
        }
        for e in 1..=usize::from(m.pow10_exponent_max).min(i - 1) {
            if ds[i - e..i].iter().all(|&d| d == 0) {
                consider(
                    slot_cost,
                    slot_step,
                    head[i - e] + m.opcode_cost_bits + m.pow10_exponent_cost(),
                    Instruction::Pow10(e as u8),
                );
            }
        }
    }
    let mut instructions = Vec::new();
    let mut i = n;
    while i > 0 {
        let ins = step[i].expect("every prefix is reachable by emitting");
        i -= match ins {
            Instruction::EmitDigit(_) => 1,
            Instruction::Copy => 1,
            Instruction::Repeat(k) => usize::from(k),
            Instruction::Pow10(e) => usize::from(e),
        };
        instructions.push(ins);
    }
    instructions.reverse();
    Ok(Plan {
        cost_bits: cost[n],
        program: Program { instructions },
    })
}

/// Observational cost of a digit string: the cost of its cheapest program.
pub fn digit_string_complexity(s: &str, m: &InstructionCostModel) -> Result<f64> {
    Ok(digit_string_plan(s, m)?.cost_bits)
}

/// Generative cost of a digit string under a world model that draws every
/// digit independently.
///
/// The description keeps the structure of the cheapest program (the copy or
/// power-of-ten template), but each digit the program outputs must be
/// instantiated on its own: copies are not free because nothing in the world
/// ties the draws together. Equivalently, the program cost plus one digit
/// charge for every output position the structure would have reproduced.
/// For pattern-free strings every digit is emitted anyway and the two
/// machine costs coincide.
pub fn digit_string_world_complexity(s: &str, m: &InstructionCostModel) -> Result<f64> {
    world_cost_of(&parse_digits(s)?, m)
}

fn world_cost_of(ds: &[u8], m: &InstructionCostModel) -> Result<f64> {
    let plan = plan_of(ds, m)?;
    let free_copies = ds.len() - plan.emitted_digits();
    Ok(plan.cost_bits + free_copies as f64 * m.digit_cost())
}

/// Largest integer the codec accepts. Its decimal form runs one digit past
/// `MAX_DIGITS`, so the integer paths parse with a widened cap.
pub const MAX_INTEGER: u64 = 10_000_000_000_000_000;

pub(crate) fn integer_digits(n: u64) -> Result<Vec<u8>> {
    if n < 1 || n > MAX_INTEGER {
        return Err(Error::IntegerOutOfRange(n));
    }
    parse_digits_capped(&n.to_string(), MAX_DIGITS + 1)
}

/// Cost of a positive integer written in decimal.
pub fn integer_complexity(n: u64, m: &InstructionCostModel) -> Result<f64> {
    Ok(plan_of(&integer_digits(n)?, m)?.cost_bits)
}

/// Bits to pick the item of prominence `rank` from a familiarity-ordered
/// list: log2(rank + 1). Rank 1 is the most prominent entry.
pub fn rank_complexity(rank: u64) -> f64 {
    (rank as f64 + 1.0).log2()
}

/// Bits to pin one cell of side `cell_side_km` inside `area_km2`.
pub fn area_localization(area_km2: f64, cell_side_km: f64) -> Result<f64> {
    let cell = cell_side_km * cell_side_km;
    if cell > area_km2 {
        return Err(Error::ResolutionExceedsArea {
            cell_km2: cell,
            area_km2,
        });
    }
    Ok((area_km2 / cell).log2())
}

/// Context-free cost of naming a location: the prominence shortcut when the
/// place is on the world's celebrity list, otherwise a uniform cell within
/// the world area. Reachability surcharges always apply.
pub fn spatial_absolute(loc: &Location, w: &WorldModel) -> Result<f64> {
    let base = match loc.prominence_rank {
        Some(rank) => {
            // Still reject cells larger than the world.
            area_localization(w.area_s_km2, loc.resolution_a_km)?;
            rank_complexity(rank)
        }
        None => area_localization(w.area_s_km2, loc.resolution_a_km)?,
    };
    Ok(base + loc.reachability_penalty_bits)
}

/// Cost of naming `target` when `origin` is already known: a uniform cell in
/// the disc of radius `d` around the origin, log2(pi d^2 / a^2). Zero within
/// the same cell. Grows by 2 bits per doubling of the distance.
pub fn spatial_relative(target: &Location, origin: &Location) -> f64 {
    let d = target.distance_km(origin);
    if d < target.resolution_a_km {
        return 0.0;
    }
    (PI * d * d / (target.resolution_a_km * target.resolution_a_km)).log2()
}

/// Cost of pinning one instant of resolution tau inside the world window.
pub fn temporal_absolute(t: &TimePoint, w: &WorldModel) -> Result<f64> {
    if t.resolution_tau_h > w.time_window_h {
        return Err(Error::ResolutionExceedsWindow {
            resolution_h: t.resolution_tau_h,
            window_h: w.time_window_h,
        });
    }
    Ok((w.time_window_h / t.resolution_tau_h).log2())
}

/// Cost of naming `t2` when `t1` is already known: a two-sided interval of
/// half-width |t2 - t1|, log2(2 t / tau). Zero within one resolution step.
/// Grows by 1 bit per doubling of the gap.
pub fn temporal_relative(t2: &TimePoint, t1: &TimePoint) -> f64 {
    let gap = (t2.t_h - t1.t_h).abs();
    if gap < t2.resolution_tau_h {
        return 0.0;
    }
    (2.0 * gap / t2.resolution_tau_h).log2()
}

/// Generative cost of an occurrence landing in one particular cell when such
/// occurrences happen at `density_per_km2`: log2(1 / (a^2 D)).
pub fn density_localization(density_per_km2: f64, cell_side_km: f64) -> Result<f64> {
    let cell = cell_side_km * cell_side_km;
    if cell * density_per_km2 > 1.0 {
        return Err(Error::DensityTooHigh {
            density_per_km2,
            cell_km2: cell,
        });
    }
    Ok((1.0 / (cell * density_per_km2)).log2())
}

/// Bits to pick one person out of everyone living closer to `place` than
/// they do, at population density rho: log2(max(1, rho pi d^2)).
pub fn person_by_distance_rank(home: &Location, place: &Location, w: &WorldModel) -> f64 {
    let d = home.distance_km(place);
    let candidates = w.population_density_per_km2 * PI * d * d;
    candidates.max(1.0).log2()
}

/// Instantiation cost of one feature value on the given machine.
///
/// Numeric values go through the digit codec; the observation machine pays
/// the cheapest program, the world machine pays the same structure with all
/// digits drawn independently. Categorical values are a uniform choice: the
/// world machine may restrict itself to a likely subset when one is
/// declared, the observation machine always codes against the full domain.
pub fn feature_instantiation(
    f: &FeatureValue,
    machine: MachineKind,
    m: &InstructionCostModel,
) -> Result<f64> {
    match &f.value {
        FeatureScalar::Integer(n) => {
            let ds = integer_digits(*n)?;
            match machine {
                MachineKind::W => world_cost_of(&ds, m),
                MachineKind::O => Ok(plan_of(&ds, m)?.cost_bits),
            }
        }
        FeatureScalar::Digits(s) => match machine {
            MachineKind::W => digit_string_world_complexity(s, m),
            MachineKind::O => digit_string_complexity(s, m),
        },
        FeatureScalar::Token(_) => {
            let domain = f.domain_size.unwrap_or(1);
            let set = match machine {
                MachineKind::W => f.likely_set_size.unwrap_or(domain),
                MachineKind::O => domain,
            };
            Ok((set as f64).log2())
        }
    }
}
