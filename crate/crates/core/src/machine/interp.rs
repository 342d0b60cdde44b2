use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{Instruction, Program};
use crate::Natural;

/// Result of a step-bounded run. Callers treat `BudgetExceeded` as the
/// non-halting label and map it to output 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExecOutcome {
    Halted { value: Natural, steps: u64 },
    BudgetExceeded,
}

impl ExecOutcome {
    pub fn halted(&self) -> bool {
        matches!(self, ExecOutcome::Halted { .. })
    }

    pub fn value(&self) -> Option<&Natural> {
        match self {
            ExecOutcome::Halted { value, .. } => Some(value),
            ExecOutcome::BudgetExceeded => None,
        }
    }

    /// The output under the non-halting-is-zero convention.
    pub fn value_or_zero(&self) -> Natural {
        self.value().cloned().unwrap_or_default()
    }
}

// Registers stay in u64 until they overflow.
#[derive(Debug, Clone)]
enum Reg {
    Small(u64),
    Big(BigUint),
}

impl Reg {
    fn from_natural(n: &Natural) -> Reg {
        match n.to_u64() {
            Some(x) => Reg::Small(x),
            None => Reg::Big(n.clone()),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Reg::Small(x) => *x == 0,
            Reg::Big(b) => b.is_zero(),
        }
    }

    fn to_big(&self) -> BigUint {
        match self {
            Reg::Small(x) => BigUint::from(*x),
            Reg::Big(b) => b.clone(),
        }
    }

    fn add(&self, other: &Reg) -> Reg {
        if let (Reg::Small(a), Reg::Small(b)) = (self, other) {
            if let Some(s) = a.checked_add(*b) {
                return Reg::Small(s);
            }
        }
        Reg::Big(self.to_big() + other.to_big())
    }

    fn inc(&mut self) {
        match self {
            Reg::Small(x) if *x < u64::MAX => *x += 1,
            _ => *self = Reg::Big(self.to_big() + 1u8),
        }
    }

    fn dbl(&mut self) {
        match self {
            Reg::Small(x) if *x <= u64::MAX / 2 => *x *= 2,
            Reg::Big(b) => *b <<= 1u8,
            Reg::Small(x) => *self = Reg::Big(BigUint::from(*x) << 1u8),
        }
    }

    fn dec(&mut self) {
        match self {
            Reg::Small(x) => *x = x.saturating_sub(1),
            Reg::Big(b) => {
                *b -= 1u8;
                if let Some(x) = b.to_u64() {
                    *self = Reg::Small(x);
                }
            }
        }
    }
}

/// Runs `p` on `input` for at most `budget` steps, where every executed
/// instruction (HALT included) costs one step.
pub fn run_bounded(p: &Program, input: &Natural, budget: u64) -> ExecOutcome {
    let n = p.instruction_count();
    execute(|i| p.instruction_at(i), n, input, budget)
}

/// Same machine over a plain instruction slice that ends with HALT.
pub fn run_instructions(code: &[Instruction], input: &Natural, budget: u64) -> ExecOutcome {
    execute(|i| code[i], code.len(), input, budget)
}

fn execute<F: Fn(usize) -> Instruction>(fetch: F, len: usize, input: &Natural, budget: u64) -> ExecOutcome {
    let mut acc = Reg::Small(0);
    let mut reg = Reg::Small(0);
    let mut pc = 0usize;
    let mut steps = 0u64;
    while pc < len {
        if steps == budget {
            return ExecOutcome::BudgetExceeded;
        }
        steps += 1;
        match fetch(pc) {
            Instruction::Halt => {
                return ExecOutcome::Halted {
                    value: acc.to_big(),
                    steps,
                }
            }
            Instruction::Inc => acc.inc(),
            Instruction::Add => acc = acc.add(&reg),
            Instruction::Store => reg = acc.clone(),
            Instruction::Dbl => acc.dbl(),
            Instruction::LoadW => acc = Reg::from_natural(input),
            Instruction::Dec => acc.dec(),
            Instruction::Jnz(offset) => {
                if !acc.is_zero() {
                    pc = pc.saturating_sub(usize::try_from(offset).unwrap_or(usize::MAX));
                    continue;
                }
            }
        }
        pc += 1;
    }
    // well-formed programs end with HALT; a slice without one never halts
    ExecOutcome::BudgetExceeded
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::Instruction::*;

    fn prog(body: &[Instruction]) -> Program {
        Program::from_body(body).unwrap()
    }

    fn nat(n: u64) -> Natural {
        Natural::from(n)
    }

    #[test]
    fn inc_inc_halt() {
        for w in [0, 9] {
            assert_eq!(
                run_bounded(&prog(&[Inc, Inc]), &nat(w), 10),
                ExecOutcome::Halted { value: nat(2), steps: 3 }
            );
        }
    }

    #[test]
    fn inc_loop_never_halts() {
        for budget in [1, 10, 1000, 100_000] {
            assert_eq!(run_bounded(&prog(&[Inc, Jnz(1)]), &nat(0), budget), ExecOutcome::BudgetExceeded);
        }
    }

    #[test]
    fn loadw() {
        assert_eq!(run_bounded(&prog(&[LoadW]), &nat(5), 2).value(), Some(&nat(5)));
    }

    #[test]
    fn halt_step_counts_against_budget() {
        assert_eq!(run_bounded(&prog(&[Inc, Inc]), &nat(0), 2), ExecOutcome::BudgetExceeded);
        assert!(run_bounded(&prog(&[Inc, Inc]), &nat(0), 3).halted());
    }

    #[test]
    fn store_add_dbl_dec() {
        // 1, R=1, 2, 3, 6, 5
        let p = prog(&[Inc, Store, Add, Add, Dbl, Dec]);
        assert_eq!(run_bounded(&p, &nat(0), 100).value(), Some(&nat(5)));
        assert_eq!(run_bounded(&prog(&[Dec, Dec]), &nat(0), 100).value(), Some(&nat(0)));
    }

    #[test]
    fn countdown_loop_halts() {
        // A = 3; loop DEC until zero; then ADD R (=3)
        let p = prog(&[Inc, Inc, Inc, Store, Dec, Jnz(1), Add]);
        assert_eq!(
            run_bounded(&p, &nat(0), 100),
            ExecOutcome::Halted { value: nat(3), steps: 4 + 3 * 2 + 1 + 1 }
        );
    }

    #[test]
    fn jump_clamps_to_start() {
        // DEC, LOADW, JNZ 100 jumps to 0; with input 0 the loop exits
        let p = prog(&[Inc, Dec, LoadW, Jnz(100)]);
        assert!(run_bounded(&p, &nat(0), 50).halted());
        assert_eq!(run_bounded(&p, &nat(1), 1000), ExecOutcome::BudgetExceeded);
    }

    #[test]
    fn values_grow_past_u64() {
        let mut body = vec![Inc];
        body.extend(std::iter::repeat_n(Dbl, 70));
        body.push(Dec);
        let out = run_bounded(&prog(&body), &nat(0), 1000);
        let expected = (BigUint::from(1u8) << 70u8) - 1u8;
        assert_eq!(out.value(), Some(&expected));
        // and back down across the boundary
        let big_input = BigUint::from(u64::MAX) + 1u8;
        let out = run_bounded(&prog(&[LoadW, Dec, Inc, Inc]), &big_input, 10);
        assert_eq!(out.value(), Some(&(BigUint::from(u64::MAX) + 2u8)));
    }

    #[test]
    fn budget_monotone() {
        let p = prog(&[Inc, Inc, Inc, Dec, Jnz(1)]);
        let mut first = None;
        for b in 1..30 {
            let out = run_bounded(&p, &nat(0), b);
            if let Some(v) = out.value() {
                first.get_or_insert_with(|| v.clone());
                assert_eq!(Some(v), first.as_ref());
            } else {
                assert!(first.is_none());
            }
        }
        assert!(first.is_some());
    }
}
