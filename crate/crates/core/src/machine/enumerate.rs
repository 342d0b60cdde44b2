use rayon::prelude::*;

use super::{run_instructions, Instruction, MachineError, Program};
use crate::{Fraction, Natural};

pub const MAX_ENUMERATION_BITS: u32 = 30;

fn check_len(max_len: u32) -> Result<(), MachineError> {
    if max_len > MAX_ENUMERATION_BITS {
        Err(MachineError::ResourceLimit {
            requested: max_len,
            limit: MAX_ENUMERATION_BITS,
        })
    } else {
        Ok(())
    }
}

/// Non-HALT instructions that fit in `room` bits.
fn choices(room: usize) -> Vec<Instruction> {
    let mut out = Vec::new();
    if room >= 3 {
        out.extend(Instruction::PLAIN);
    }
    // JNZ with a (2j + 1)-bit gamma offset covers offsets 2^j .. 2^(j+1)
    let mut j = 0;
    while 4 + 2 * j <= room && j < 63 {
        for o in 1u64 << j..1u64 << (j + 1) {
            out.push(Instruction::Jnz(o));
        }
        j += 1;
    }
    out
}

fn walk<F: FnMut(&[Instruction], usize)>(code: &mut Vec<Instruction>, used: usize, max_len: usize, f: &mut F) {
    code.push(Instruction::Halt);
    f(code, used + 3);
    code.pop();
    for ins in choices(max_len - used - 3) {
        code.push(ins);
        walk(code, used + ins.bit_len(), max_len, f);
        code.pop();
    }
}

/// Visits every program of at most `max_len` bits as an instruction slice
/// (ending in HALT) together with its bit length.
pub fn for_each_program<F: FnMut(&[Instruction], usize)>(max_len: u32, mut f: F) -> Result<(), MachineError> {
    check_len(max_len)?;
    let max_len = max_len as usize;
    if max_len < 3 {
        return Ok(());
    }
    walk(&mut Vec::new(), 0, max_len, &mut f);
    Ok(())
}

/// Parallel fold over all programs, split on the first instruction.
pub(crate) fn par_fold_programs<T, I, F, R>(max_len: u32, init: I, fold: F, reduce: R) -> Result<T, MachineError>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &[Instruction], usize) + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    check_len(max_len)?;
    let max_len = max_len as usize;
    let mut acc = init();
    if max_len < 3 {
        return Ok(acc);
    }
    fold(&mut acc, &[Instruction::Halt], 3);
    let rest = choices(max_len - 3)
        .into_par_iter()
        .map(|first| {
            let mut local = init();
            let mut code = vec![first];
            walk(&mut code, first.bit_len(), max_len, &mut |c: &[Instruction], len| {
                fold(&mut local, c, len)
            });
            local
        })
        .reduce(&init, &reduce);
    Ok(reduce(acc, rest))
}

/// All programs of at most `max_len` bits, shortest first.
pub fn enumerate_programs(max_len: u32) -> Result<Vec<Program>, MachineError> {
    let mut out = Vec::new();
    for_each_program(max_len, |code, _| {
        out.push(Program::from_body(&code[..code.len() - 1]).expect("enumerated bodies are valid"));
    })?;
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.bits().cmp(b.bits())));
    Ok(out)
}

/// Number of programs of each exact length `0..=max_len`, counted by
/// dynamic programming over instruction lengths.
pub fn program_counts(max_len: u32) -> Result<Vec<u64>, MachineError> {
    check_len(max_len)?;
    let n = max_len as usize;
    // bodies[s]: non-HALT instruction sequences of exactly s bits
    let mut bodies = vec![0u64; n + 1];
    bodies[0] = 1;
    for s in 1..=n {
        let mut c = 0;
        if s >= 3 {
            c += 6 * bodies[s - 3];
        }
        // JNZ with gamma length 2j + 1: 2^j offsets, 4 + 2j bits in total
        let mut j = 0;
        while 4 + 2 * j <= s {
            c += (1u64 << j) * bodies[s - 4 - 2 * j];
            j += 1;
        }
        bodies[s] = c;
    }
    Ok((0..=n).map(|len| if len >= 3 { bodies[len - 3] } else { 0 }).collect())
}

/// Kraft sum of all programs with at most `max_len` bits.
pub fn kraft_sum(max_len: u32) -> Result<Fraction, MachineError> {
    let counts = program_counts(max_len)?;
    let denom = 1u64 << max_len;
    let numer: u64 = counts
        .iter()
        .enumerate()
        .map(|(len, &c)| c << (max_len as usize - len))
        .sum();
    Ok(Fraction::new(numer, denom))
}

/// Largest output on input 0 within `budget` steps among programs of at
/// most `k` bits; 0 when none halts.
pub fn bb_bounded(k: u32, budget: u64) -> Result<Natural, MachineError> {
    let zero = Natural::default();
    par_fold_programs(
        k,
        Natural::default,
        |best, code, _| {
            if let Some(v) = run_instructions(code, &zero, budget).value() {
                if v > best {
                    *best = v.clone();
                }
            }
        },
        |a, b| a.max(b),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_matches_counts() {
        let progs = enumerate_programs(15).unwrap();
        let counts = program_counts(15).unwrap();
        for (len, &c) in counts.iter().enumerate() {
            assert_eq!(progs.iter().filter(|p| p.len() == len).count() as u64, c, "len {len}");
        }
    }

    #[test]
    fn kraft_examples() {
        assert_eq!(kraft_sum(3).unwrap(), Fraction::new(1, 8));
        assert_eq!(kraft_sum(6).unwrap(), Fraction::new(1, 8) + Fraction::new(6, 64));
        assert!(kraft_sum(9).unwrap() >= kraft_sum(6).unwrap());
        assert!(matches!(kraft_sum(31), Err(MachineError::ResourceLimit { .. })));
    }

    #[test]
    fn par_fold_sees_every_program() {
        let count = par_fold_programs(14, || 0u64, |c, _, _| *c += 1, |a, b| a + b).unwrap();
        assert_eq!(count, program_counts(14).unwrap().iter().sum::<u64>());
    }

    #[test]
    fn bb_examples() {
        assert_eq!(bb_bounded(3, 10).unwrap(), Natural::from(0u8));
        assert!(bb_bounded(9, 10).unwrap() >= Natural::from(2u8));
        let mut prev = Natural::default();
        for k in [3, 6, 9, 12, 15] {
            let v = bb_bounded(k, 50).unwrap();
            assert!(v >= prev);
            prev = v;
        }
        assert!(bb_bounded(15, 5).unwrap() <= bb_bounded(15, 50).unwrap());
    }
}
