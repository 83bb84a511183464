//! Weight-ordered syndrome guessing, adapted to CSS codes.
//!
//! Candidate error patterns are generated in nondecreasing Hamming weight —
//! the likelihood order of a memoryless symmetric channel — and within one
//! weight class in lexicographic order of support tuples, so the first match
//! is a minimum-weight syndrome explanation and runs are reproducible.
//! Candidates are produced by a combinatorial successor walk rather than a
//! precomputed list; the enumeration order is identical.

use super::{DecodeCounters, DecodeOutcome, DecoderConfig, DecoderError};
use crate::gf2::{BitMatrix, BitVector};

/// Reusable guess decoder for one parity-check matrix.
#[derive(Clone)]
pub struct QgrandDecoder {
    columns: Vec<BitVector>,
    rows: usize,
    cols: usize,
    max_query: u64,
}

impl QgrandDecoder {
    pub fn new(h: &BitMatrix, cfg: &DecoderConfig) -> Self {
        Self {
            columns: (0..h.cols()).map(|c| h.column(c)).collect(),
            rows: h.rows(),
            cols: h.cols(),
            max_query: cfg.max_query,
        }
    }

    pub fn decode(&self, s: &BitVector) -> Result<DecodeOutcome, DecoderError> {
        if s.len() != self.rows {
            return Err(DecoderError::DimensionMismatch {
                expected: self.rows,
                got: s.len(),
            });
        }
        let n = self.cols;
        let mut guesses: u64 = 0;

        let mut support = Vec::new();
        // Running syndromes of the support prefixes; prefix[t] covers
        // support[0..=t], so advancing one index costs one column XOR.
        let mut prefix: Vec<BitVector> = Vec::new();

        for weight in 0..=n {
            if weight == 0 {
                guesses += 1;
                if s.is_zero() {
                    return Ok(self.hit(BitVector::zeros(n), guesses));
                }
                if guesses >= self.max_query {
                    return Ok(self.abstain(guesses));
                }
                continue;
            }
            // First combination (0, 1, ..., weight-1).
            support.clear();
            prefix.clear();
            for i in 0..weight {
                support.push(i);
                let mut syn = if i == 0 {
                    BitVector::zeros(self.rows)
                } else {
                    prefix[i - 1].clone()
                };
                syn.xor_assign(&self.columns[i]);
                prefix.push(syn);
            }
            loop {
                guesses += 1;
                if prefix[weight - 1] == *s {
                    let mut e = BitVector::zeros(n);
                    for &i in &support {
                        e.set(i, true);
                    }
                    return Ok(self.hit(e, guesses));
                }
                if guesses >= self.max_query {
                    return Ok(self.abstain(guesses));
                }
                // Lexicographic successor: bump the rightmost index below its
                // ceiling n - weight + t, then repack the tail tightly.
                let Some(t) = (0..weight).rev().find(|&t| support[t] < n - weight + t) else {
                    break; // weight class exhausted
                };
                support[t] += 1;
                for u in t + 1..weight {
                    support[u] = support[t] + (u - t);
                }
                for u in t..weight {
                    let mut syn = if u == 0 {
                        BitVector::zeros(self.rows)
                    } else {
                        prefix[u - 1].clone()
                    };
                    syn.xor_assign(&self.columns[support[u]]);
                    prefix[u] = syn;
                }
            }
        }
        // Every pattern tried without a match: the syndrome is inconsistent.
        Ok(self.abstain(guesses))
    }

    fn hit(&self, correction: BitVector, guesses: u64) -> DecodeOutcome {
        DecodeOutcome {
            correction,
            converged: true,
            logical_failure: false,
            counters: DecodeCounters {
                guesses,
                ..DecodeCounters::default()
            },
        }
    }

    fn abstain(&self, guesses: u64) -> DecodeOutcome {
        DecodeOutcome {
            correction: BitVector::zeros(self.cols),
            converged: false,
            logical_failure: false,
            counters: DecodeCounters {
                guesses,
                ..DecodeCounters::default()
            },
        }
    }
}

/// One-shot weight-ordered guess decode.
pub fn qgrand(
    h: &BitMatrix,
    s: &BitVector,
    cfg: &DecoderConfig,
) -> Result<DecodeOutcome, DecoderError> {
    QgrandDecoder::new(h, cfg).decode(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::SplitMix64;
    use crate::ilp::all_types_matrix;

    #[test]
    fn zero_syndrome_costs_one_guess() {
        let h = all_types_matrix(4);
        let out = qgrand(&h, &BitVector::zeros(4), &DecoderConfig::default()).unwrap();
        assert!(out.converged);
        assert!(out.correction.is_zero());
        assert_eq!(out.counters.guesses, 1);
    }

    #[test]
    fn single_errors_recovered_within_sixteen_guesses() {
        let h = all_types_matrix(4);
        let cfg = DecoderConfig::default();
        for j in 0..15 {
            let s = h.column(j);
            let out = qgrand(&h, &s, &cfg).unwrap();
            assert!(out.converged);
            assert_eq!(out.correction.support(), vec![j]);
            assert!(out.counters.guesses <= 16, "position {j}");
        }
    }

    #[test]
    fn budget_one_abstains_on_nonzero_syndrome() {
        let h = all_types_matrix(4);
        let cfg = DecoderConfig {
            max_query: 1,
            ..DecoderConfig::default()
        };
        let out = qgrand(&h, &h.column(3), &cfg).unwrap();
        assert!(!out.converged);
        assert_eq!(out.counters.guesses, 1);
    }

    /// Brute-force minimum weight of any syndrome explanation.
    fn min_weight_solution(h: &BitMatrix, s: &BitVector) -> Option<usize> {
        let n = h.cols();
        let mut best = None;
        for bits in 0u64..(1 << n) {
            let mut e = BitVector::zeros(n);
            for i in 0..n {
                if (bits >> i) & 1 == 1 {
                    e.set(i, true);
                }
            }
            if h.matvec(&e).unwrap() == *s {
                let w = e.weight();
                best = Some(best.map_or(w, |b: usize| b.min(w)));
            }
        }
        best
    }

    #[test]
    fn returns_minimum_weight_explanation() {
        let mut rng = SplitMix64::new(0x6A55);
        for _ in 0..60 {
            let rows = 1 + (rng.next_u64() % 4) as usize;
            let cols = 2 + (rng.next_u64() % 8) as usize;
            let mut h = BitMatrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    h.set(r, c, rng.next_u64() & 1 == 1);
                }
            }
            let mut s = BitVector::zeros(rows);
            for r in 0..rows {
                s.set(r, rng.next_u64() & 1 == 1);
            }
            let out = qgrand(&h, &s, &DecoderConfig::default()).unwrap();
            match min_weight_solution(&h, &s) {
                Some(w) => {
                    assert!(out.converged);
                    assert_eq!(out.correction.weight(), w);
                    assert_eq!(h.matvec(&out.correction).unwrap(), s);
                }
                None => assert!(!out.converged),
            }
        }
    }
}
