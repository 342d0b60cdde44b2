//! A self-delimiting binary program language and its step-bounded machine.
//!
//! Every instruction starts with a 3-bit opcode:
//!
//! | bits  | op    | effect                                  |
//! |-------|-------|-----------------------------------------|
//! | `000` | HALT  | output the accumulator, end of program  |
//! | `001` | INC   | `A <- A + 1`                            |
//! | `010` | ADD   | `A <- A + R`                            |
//! | `011` | STORE | `R <- A`                                |
//! | `100` | DBL   | `A <- 2A`                               |
//! | `101` | LOADW | `A <- input`                            |
//! | `110` | JNZ o | if `A != 0` jump back `o` instructions  |
//! | `111` | DEC   | `A <- A - 1`, saturating at 0           |
//!
//! JNZ is followed by the Elias-gamma code of its offset `o >= 1`; a jump
//! before the first instruction lands on instruction 0. A program is any
//! sequence of non-HALT instructions closed by HALT, which makes the code
//! prefix-free and complete.

mod code;
mod complexity;
mod enumerate;
mod interp;
mod sample;

pub use code::{concat_sd, elias_gamma, read_elias_gamma, split_sd, SdKind, SdWord};
pub use complexity::{
    complexity_estimate, compress_proxy_bits, ComplexityEstimate, Estimator, EstimatorBackend,
    ExactTinyTable, COMPRESS_PROXY_VERSION, DEFAULT_EXACT_CAP,
};
pub use enumerate::{bb_bounded, enumerate_programs, for_each_program, kraft_sum, program_counts, MAX_ENUMERATION_BITS};
pub use interp::{run_bounded, run_instructions, ExecOutcome};
pub use sample::{sample_program, RngBits, SAMPLE_BIT_CAP};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MachineError {
    #[error("bit stream ended after {consumed} bits in the middle of a program")]
    Incomplete { consumed: usize },
    #[error("invalid program literal: {0}")]
    InvalidLiteral(String),
    #[error("enumeration up to {requested} bits exceeds the limit of {limit}")]
    ResourceLimit { requested: u32, limit: u32 },
    #[error("no program of at most {cap} bits outputs {value} within the budget")]
    EstimateUnavailable { value: String, cap: u32 },
    #[error("program sampling exceeded {cap} bits")]
    Sampling { cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instruction {
    Halt,
    Inc,
    Add,
    Store,
    Dbl,
    LoadW,
    /// Backward jump offset, at least 1. Offsets whose gamma code does not
    /// fit in 64 bits saturate at `u64::MAX`, which clamps the same way.
    Jnz(u64),
    Dec,
}

impl Instruction {
    pub const PLAIN: [Instruction; 6] = [
        Instruction::Inc,
        Instruction::Add,
        Instruction::Store,
        Instruction::Dbl,
        Instruction::LoadW,
        Instruction::Dec,
    ];

    fn opcode(self) -> u8 {
        match self {
            Instruction::Halt => 0b000,
            Instruction::Inc => 0b001,
            Instruction::Add => 0b010,
            Instruction::Store => 0b011,
            Instruction::Dbl => 0b100,
            Instruction::LoadW => 0b101,
            Instruction::Jnz(_) => 0b110,
            Instruction::Dec => 0b111,
        }
    }

    pub fn bit_len(self) -> usize {
        match self {
            Instruction::Jnz(o) => 3 + code::gamma_len_u64(o),
            _ => 3,
        }
    }

    pub fn push_bits(self, out: &mut Vec<bool>) {
        let op = self.opcode();
        out.extend([op & 0b100 != 0, op & 0b010 != 0, op & 0b001 != 0]);
        if let Instruction::Jnz(o) = self {
            code::push_gamma_u64(o, out);
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Halt => f.write_str("HALT"),
            Instruction::Inc => f.write_str("INC"),
            Instruction::Add => f.write_str("ADD"),
            Instruction::Store => f.write_str("STORE"),
            Instruction::Dbl => f.write_str("DBL"),
            Instruction::LoadW => f.write_str("LOADW"),
            Instruction::Jnz(o) => write!(f, "JNZ {o}"),
            Instruction::Dec => f.write_str("DEC"),
        }
    }
}

/// A decoded program: the exact bits consumed plus the instruction list,
/// whose last element is always HALT.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Program {
    bits: Vec<bool>,
    instructions: Vec<InstrKey>,
}

// Instruction wrapped for Ord so programs can live in sorted containers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct InstrKey(u8, u64);

impl From<Instruction> for InstrKey {
    fn from(i: Instruction) -> Self {
        match i {
            Instruction::Jnz(o) => InstrKey(i.opcode(), o),
            _ => InstrKey(i.opcode(), 0),
        }
    }
}

impl From<InstrKey> for Instruction {
    fn from(k: InstrKey) -> Self {
        match k.0 {
            0b000 => Instruction::Halt,
            0b001 => Instruction::Inc,
            0b010 => Instruction::Add,
            0b011 => Instruction::Store,
            0b100 => Instruction::Dbl,
            0b101 => Instruction::LoadW,
            0b110 => Instruction::Jnz(k.1),
            _ => Instruction::Dec,
        }
    }
}

impl Program {
    /// Encodes a body of non-HALT instructions followed by HALT.
    pub fn from_body(body: &[Instruction]) -> Result<Program, MachineError> {
        let mut bits = Vec::new();
        let mut instructions = Vec::with_capacity(body.len() + 1);
        for &ins in body {
            match ins {
                Instruction::Halt => {
                    return Err(MachineError::InvalidArgument("HALT inside a program body".into()))
                }
                Instruction::Jnz(0) => {
                    return Err(MachineError::InvalidArgument("JNZ offset must be at least 1".into()))
                }
                _ => {}
            }
            ins.push_bits(&mut bits);
            instructions.push(ins.into());
        }
        Instruction::Halt.push_bits(&mut bits);
        instructions.push(Instruction::Halt.into());
        Ok(Program { bits, instructions })
    }

    /// The HALT-only program `000`.
    pub fn halt() -> Program {
        Program::from_body(&[]).expect("empty body is valid")
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn instructions(&self) -> Vec<Instruction> {
        self.instructions.iter().map(|&k| k.into()).collect()
    }

    pub fn instruction_count(&self) -> usize {
        self.instructions.len()
    }

    pub(crate) fn instruction_at(&self, idx: usize) -> Instruction {
        self.instructions[idx].into()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Program {
    type Err = MachineError;

    /// Parses an ASCII bit literal such as `001001000`; whitespace is
    /// ignored and the literal must be exactly one program.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::new();
        for c in s.chars().filter(|c| !c.is_whitespace()) {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(MachineError::InvalidLiteral(format!("unexpected `{other}`"))),
            }
        }
        let total = bits.len();
        let mut it = bits.into_iter();
        let p = decode(&mut it)?;
        if p.len() != total {
            return Err(MachineError::InvalidLiteral(format!(
                "{} trailing bits after a complete program",
                total - p.len()
            )));
        }
        Ok(p)
    }
}

/// Consumes the minimal prefix of `stream` that forms a program.
pub fn decode<I: Iterator<Item = bool>>(stream: &mut I) -> Result<Program, MachineError> {
    let mut bits = Vec::new();
    let mut instructions = Vec::new();
    let mut next = |bits: &mut Vec<bool>| -> Result<bool, MachineError> {
        let b = stream.next().ok_or(MachineError::Incomplete { consumed: bits.len() })?;
        bits.push(b);
        Ok(b)
    };
    loop {
        let mut op = 0u8;
        for _ in 0..3 {
            op = (op << 1) | u8::from(next(&mut bits)?);
        }
        let ins = match op {
            0b000 => Instruction::Halt,
            0b001 => Instruction::Inc,
            0b010 => Instruction::Add,
            0b011 => Instruction::Store,
            0b100 => Instruction::Dbl,
            0b101 => Instruction::LoadW,
            0b110 => {
                let mut zeros = 0usize;
                while !next(&mut bits)? {
                    zeros += 1;
                }
                let mut offset: u64 = 1;
                for _ in 0..zeros {
                    let b = next(&mut bits)?;
                    offset = offset.checked_mul(2).map_or(u64::MAX, |o| o | u64::from(b));
                }
                Instruction::Jnz(offset)
            }
            _ => Instruction::Dec,
        };
        instructions.push(ins.into());
        if ins == Instruction::Halt {
            return Ok(Program { bits, instructions });
        }
    }
}
