//! Exhaustive minimal-program search over the digit language.
//!
//! This is the reference route for digit costs: a brute-force enumeration of
//! every program whose output matches the target, independent of the
//! closed-form recurrence in [`crate::codec`]. The two must agree bit for
//! bit; [`equivalence_sweep`] checks that over the full space of short
//! digit strings.

use std::fmt;

use crate::codec::{parse_digits, InstructionCostModel};
use crate::error::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// One instruction of the digit language. The derived order (emit, copy,
/// repeat, pow10, operands ascending) is the tie-break order everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Instruction {
    /// Append one chosen digit.
    EmitDigit(u8),
    /// Append the last output digit again.
    Copy,
    /// Append the last output digit `k` more times.
    Repeat(u8),
    /// Append `e` zeros.
    Pow10(u8),
}

impl Instruction {
    pub fn cost(&self, m: &InstructionCostModel) -> f64 {
        match self {
            Instruction::EmitDigit(_) => m.emit_cost(),
            Instruction::Copy => m.opcode_cost_bits,
            Instruction::Repeat(_) => m.opcode_cost_bits + m.repeat_count_cost(),
            Instruction::Pow10(_) => m.opcode_cost_bits + m.pow10_exponent_cost(),
        }
    }

    /// Digits this instruction appends to the output.
    pub fn output_len(&self) -> usize {
        match self {
            Instruction::EmitDigit(_) | Instruction::Copy => 1,
            Instruction::Repeat(k) => usize::from(*k),
            Instruction::Pow10(e) => usize::from(*e),
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::EmitDigit(d) => write!(f, "E{d}"),
            Instruction::Copy => write!(f, "C"),
            Instruction::Repeat(k) => write!(f, "R{k}"),
            Instruction::Pow10(e) => write!(f, "P{e}"),
        }
    }
}

/// A straight-line digit program.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Program {
    pub instructions: Vec<Instruction>,
}

impl Program {
    pub fn cost(&self, m: &InstructionCostModel) -> f64 {
        self.instructions.iter().map(|i| i.cost(m)).sum()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for ins in &self.instructions {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{ins}")?;
            first = false;
        }
        Ok(())
    }
}

/// Run a program and return its output digits.
///
/// The copy family (COPY, REPEAT, POW10) needs an already-emitted digit to
/// anchor the output, so none of them may come first.
pub fn execute(p: &Program) -> Result<String> {
    let mut out = String::new();
    for ins in &p.instructions {
        match ins {
            Instruction::EmitDigit(d) => {
                debug_assert!(*d < 10);
                out.push(char::from(b'0' + d));
            }
            Instruction::Copy => {
                let last = out.chars().last().ok_or(Error::CopyWithoutContext)?;
                out.push(last);
            }
            Instruction::Repeat(k) => {
                let last = out.chars().last().ok_or(Error::CopyWithoutContext)?;
                for _ in 0..*k {
                    out.push(last);
                }
            }
            Instruction::Pow10(e) => {
                if out.is_empty() {
                    return Err(Error::CopyWithoutContext);
                }
                for _ in 0..*e {
                    out.push('0');
                }
            }
        }
    }
    Ok(out)
}

/// Cheapest program reproducing `target`, found by depth-first enumeration
/// with cost pruning.
///
/// Every instruction appends output, so only programs whose partial output
/// is a prefix of the target are explored. Branches are tried in the
/// instruction order, which makes the first program found at the minimal
/// cost the lexicographically smallest one. Fails with `NotFound` when no
/// program fits inside `budget_bits`.
pub fn min_program(target: &str, m: &InstructionCostModel, budget_bits: f64) -> Result<(f64, Program)> {
    let ds = parse_digits(target)?;
    let mut best: Option<(f64, Program)> = None;
    let mut stack = Vec::new();
    search(&ds, 0, 0.0, m, budget_bits, &mut stack, &mut best);
    best.ok_or_else(|| Error::NotFound {
        target: target.to_string(),
        budget_bits,
    })
}

fn search(
    ds: &[u8],
    pos: usize,
    cost: f64,
    m: &InstructionCostModel,
    budget: f64,
    prog: &mut Vec<Instruction>,
    best: &mut Option<(f64, Program)>,
) {
    if cost > budget {
        return;
    }
    if let Some((c, _)) = best {
        if cost >= *c {
            return;
        }
    }
    if pos == ds.len() {
        *best = Some((
            cost,
            Program {
                instructions: prog.clone(),
            },
        ));
        return;
    }
    let try_ins = |ins: Instruction, prog: &mut Vec<Instruction>, best: &mut Option<(f64, Program)>| {
        prog.push(ins);
        search(ds, pos + ins.output_len(), cost + ins.cost(m), m, budget, prog, best);
        prog.pop();
    };
    try_ins(Instruction::EmitDigit(ds[pos]), prog, best);
    if pos >= 1 {
        let last = ds[pos - 1];
        if ds[pos] == last {
            try_ins(Instruction::Copy, prog, best);
        }
        for k in 1..=usize::from(m.repeat_count_max) {
            if pos + k > ds.len() || ds[pos..pos + k].iter().any(|&d| d != last) {
                break;
            }
            try_ins(Instruction::Repeat(k as u8), prog, best);
        }
        for e in 1..=usize::from(m.pow10_exponent_max) {
            if pos + e > ds.len() || ds[pos..pos + e].iter().any(|&d| d != 0) {
                break;
            }
            try_ins(Instruction::Pow10(e as u8), prog, best);
        }
    }
}

/// A digit string on which the closed-form codec and the search disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub digits: String,
    pub codec_bits: f64,
    pub oracle_bits: f64,
}

const SWEEP_BUDGET_BITS: f64 = 128.0;

/// Compare the closed-form codec against the exhaustive search on every
/// digit string of length 1..=`max_len`. Returns the disagreements, which
/// must be empty for a correct codec.
pub fn equivalence_sweep(max_len: usize, m: &InstructionCostModel) -> Vec<Mismatch> {
    let mut targets = Vec::new();
    for len in 1..=max_len {
        let count = 10u64.pow(len as u32);
        for v in 0..count {
            targets.push(format!("{v:0len$}"));
        }
    }
    let check = |s: &String| -> Option<Mismatch> {
        let codec_bits = crate::codec::digit_string_complexity(s, m).expect("valid digits");
        let (oracle_bits, _) = min_program(s, m, SWEEP_BUDGET_BITS).expect("budget covers verbatim");
        if (codec_bits - oracle_bits).abs() > 1e-9 {
            Some(Mismatch {
                digits: s.clone(),
                codec_bits,
                oracle_bits,
            })
        } else {
            None
        }
    };
    #[cfg(feature = "parallel")]
    {
        targets.par_iter().filter_map(check).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        targets.iter().filter_map(check).collect()
    }
}

/// Number of digit strings [`equivalence_sweep`] covers for a given length.
pub fn sweep_case_count(max_len: usize) -> u64 {
    (1..=max_len).map(|l| 10u64.pow(l as u32)).sum()
}
