//! Syndrome-based min-sum belief propagation with a flooding schedule.

use super::{DecoderConfig, DecoderError};
use crate::gf2::{BitMatrix, BitVector};

/// Soft and hard outputs of one BP run.
#[derive(Clone, Debug)]
pub struct BpOutput {
    pub hard_decision: BitVector,
    /// Posterior log-likelihood ratios, one per variable (positive = healthy).
    pub posteriors: Vec<f64>,
    pub converged: bool,
    pub iterations: u32,
}

/// Reusable decoder state for one parity-check matrix.
#[derive(Clone)]
pub struct BpDecoder {
    h: BitMatrix,
    cfg: DecoderConfig,
    /// Variables adjacent to each check.
    check_vars: Vec<Vec<usize>>,
    /// (check, edge-position-in-check) pairs adjacent to each variable.
    var_checks: Vec<Vec<(usize, usize)>>,
    prior: f64,
}

impl BpDecoder {
    pub fn new(h: &BitMatrix, cfg: DecoderConfig) -> Self {
        let m = h.rows();
        let n = h.cols();
        let mut check_vars: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut var_checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for c in 0..m {
            for v in h.row(c).iter_ones() {
                var_checks[v].push((c, check_vars[c].len()));
                check_vars[c].push(v);
            }
        }
        // Uniform prior LLR ln((1-p)/p), clamped; p floored to dodge
        // infinities as p -> 0.
        let p = cfg.p.max(1e-12);
        let prior = ((1.0 - p) / p).ln().clamp(-cfg.llr_clamp, cfg.llr_clamp);
        Self {
            h: h.clone(),
            cfg,
            check_vars,
            var_checks,
            prior,
        }
    }

    /// Runs flooding min-sum against a syndrome.
    ///
    /// Check-to-variable messages carry sign (-1)^{s_c} times the product of
    /// the other incoming signs, and magnitude alpha times the minimum of the
    /// other incoming magnitudes. The loop exits as soon as the tentative
    /// hard decision reproduces the syndrome; the pre-iteration decision
    /// (all-zero, since the prior is positive) handles s = 0 at iteration 0.
    pub fn decode(&self, s: &BitVector) -> Result<BpOutput, DecoderError> {
        if s.len() != self.h.rows() {
            return Err(DecoderError::DimensionMismatch {
                expected: self.h.rows(),
                got: s.len(),
            });
        }
        let n = self.h.cols();
        let m = self.h.rows();

        let mut hard = BitVector::zeros(n);
        let mut posteriors = vec![self.prior; n];
        if self.h.matvec(&hard).expect("shape fixed") == *s {
            return Ok(BpOutput {
                hard_decision: hard,
                posteriors,
                converged: true,
                iterations: 0,
            });
        }

        // var_to_check[c][e]: message from the e-th neighbor of check c.
        let mut var_to_check: Vec<Vec<f64>> = self
            .check_vars
            .iter()
            .map(|vars| vec![self.prior; vars.len()])
            .collect();
        let mut check_to_var: Vec<Vec<f64>> = self
            .check_vars
            .iter()
            .map(|vars| vec![0.0; vars.len()])
            .collect();

        for it in 1..=self.cfg.n_iter {
            for c in 0..m {
                let msgs = &var_to_check[c];
                let mut sign = if s.get(c) { -1.0f64 } else { 1.0 };
                let mut min1 = f64::INFINITY;
                let mut min2 = f64::INFINITY;
                let mut min_at = 0usize;
                for (e, &msg) in msgs.iter().enumerate() {
                    if msg < 0.0 {
                        sign = -sign;
                    }
                    let mag = msg.abs();
                    if mag < min1 {
                        min2 = min1;
                        min1 = mag;
                        min_at = e;
                    } else if mag < min2 {
                        min2 = mag;
                    }
                }
                for (e, &msg) in msgs.iter().enumerate() {
                    let extrinsic_min = if e == min_at { min2 } else { min1 };
                    let own_sign = if msg < 0.0 { -1.0 } else { 1.0 };
                    let mag = (self.cfg.alpha * extrinsic_min).min(self.cfg.llr_clamp);
                    check_to_var[c][e] = sign * own_sign * mag;
                }
            }

            for v in 0..n {
                let total: f64 = self.var_checks[v]
                    .iter()
                    .map(|&(c, e)| check_to_var[c][e])
                    .sum();
                let post = (self.prior + total).clamp(-self.cfg.llr_clamp, self.cfg.llr_clamp);
                posteriors[v] = post;
                hard.set(v, post < 0.0);
                for &(c, e) in &self.var_checks[v] {
                    let extrinsic = self.prior + total - check_to_var[c][e];
                    var_to_check[c][e] =
                        extrinsic.clamp(-self.cfg.llr_clamp, self.cfg.llr_clamp);
                }
            }

            if self.h.matvec(&hard).expect("shape fixed") == *s {
                return Ok(BpOutput {
                    hard_decision: hard,
                    posteriors,
                    converged: true,
                    iterations: it,
                });
            }
        }

        Ok(BpOutput {
            hard_decision: hard,
            posteriors,
            converged: false,
            iterations: self.cfg.n_iter,
        })
    }
}

/// One-shot convenience wrapper around [`BpDecoder`].
pub fn bp_minsum(
    h: &BitMatrix,
    s: &BitVector,
    cfg: &DecoderConfig,
) -> Result<BpOutput, DecoderError> {
    BpDecoder::new(h, *cfg).decode(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::all_types_matrix;

    #[test]
    fn zero_syndrome_converges_immediately() {
        let h = all_types_matrix(4);
        let out = bp_minsum(&h, &BitVector::zeros(4), &DecoderConfig::default()).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 0);
        assert!(out.hard_decision.is_zero());
    }

    #[test]
    fn two_check_chain_finds_weight_one_error() {
        // Checks {v0,v1} and {v1,v2}; syndrome (1,0) is uniquely explained at
        // weight 1 by v0 (checked exhaustively over the 8 patterns).
        let h = BitMatrix::from_bit_strs(&["110", "011"]);
        let s = BitVector::from_bit_str("10").unwrap();
        let mut unique = None;
        for bits in 0u8..8 {
            let e = BitVector::from_bools(&[(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0]);
            if h.matvec(&e).unwrap() == s && e.weight() == 1 {
                unique = Some(e);
            }
        }
        assert_eq!(unique.unwrap().support(), vec![0]);

        let cfg = DecoderConfig {
            p: 0.1,
            alpha: 1.0,
            ..DecoderConfig::default()
        };
        let out = bp_minsum(&h, &s, &cfg).unwrap();
        assert!(out.converged, "min-sum should settle on the coset leader");
        assert_eq!(out.hard_decision.support(), vec![0]);
    }

    #[test]
    fn terminates_with_well_formed_output() {
        let h = all_types_matrix(4);
        let cfg = DecoderConfig {
            p: 0.01,
            ..DecoderConfig::default()
        };
        for j in 0..15 {
            let mut e = BitVector::zeros(15);
            e.set(j, true);
            let s = h.matvec(&e).unwrap();
            let out = bp_minsum(&h, &s, &cfg).unwrap();
            assert!(out.iterations <= 100);
            assert_eq!(out.posteriors.len(), 15);
            assert!(out.posteriors.iter().all(|p| p.is_finite()));
            if out.converged {
                assert_eq!(h.matvec(&out.hard_decision).unwrap(), s);
            }
        }
    }

    #[test]
    fn syndrome_length_checked() {
        let h = all_types_matrix(4);
        let bad = BitVector::zeros(5);
        assert!(matches!(
            bp_minsum(&h, &bad, &DecoderConfig::default()),
            Err(DecoderError::DimensionMismatch { .. })
        ));
    }
}
