use rand::RngCore;

use super::{decode, MachineError, Program};

/// Hard cap on the bits drawn for one program.
pub const SAMPLE_BIT_CAP: usize = 1 << 20;

/// Fair random bits from a generator, least significant bit first within
/// each 64-bit word, ending after `cap` bits.
pub struct RngBits<'a, R: RngCore> {
    rng: &'a mut R,
    word: u64,
    left: u32,
    drawn: usize,
    cap: usize,
}

impl<'a, R: RngCore> RngBits<'a, R> {
    pub fn new(rng: &'a mut R, cap: usize) -> Self {
        RngBits {
            rng,
            word: 0,
            left: 0,
            drawn: 0,
            cap,
        }
    }
}

impl<R: RngCore> Iterator for RngBits<'_, R> {
    type Item = bool;

    fn next(&mut self) -> Option<bool> {
        if self.drawn == self.cap {
            return None;
        }
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = 64;
        }
        let b = self.word & 1 == 1;
        self.word >>= 1;
        self.left -= 1;
        self.drawn += 1;
        Some(b)
    }
}

/// Draws fair bits until a program is complete, so each program `p` comes
/// out with probability `2^-|p|`.
pub fn sample_program<R: RngCore>(rng: &mut R) -> Result<Program, MachineError> {
    decode(&mut RngBits::new(rng, SAMPLE_BIT_CAP)).map_err(|e| match e {
        MachineError::Incomplete { .. } => MachineError::Sampling { cap: SAMPLE_BIT_CAP },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    #[test]
    fn same_seed_same_programs() {
        let mut a = rng_from_seed(11);
        let mut b = rng_from_seed(11);
        for _ in 0..100 {
            assert_eq!(sample_program(&mut a).unwrap(), sample_program(&mut b).unwrap());
        }
    }

    #[test]
    fn halt_frequency_within_three_sigma() {
        let mut rng = rng_from_seed(2024);
        let n = 100_000u32;
        let halts = (0..n)
            .filter(|_| sample_program(&mut rng).unwrap() == Program::halt())
            .count() as f64;
        let p = 1.0 / 8.0;
        let sigma = (f64::from(n) * p * (1.0 - p)).sqrt();
        assert!((halts - f64::from(n) * p).abs() <= 3.0 * sigma, "{halts}");
    }

    #[test]
    fn cap_turns_into_sampling_error() {
        let mut rng = rng_from_seed(1);
        // a 3-bit cap only admits `000`
        let mut failures = 0;
        for _ in 0..64 {
            if decode(&mut RngBits::new(&mut rng, 3)).is_err() {
                failures += 1;
            }
        }
        assert!(failures > 0);
    }
}
