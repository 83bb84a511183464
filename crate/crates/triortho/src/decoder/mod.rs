//! Syndrome decoders for the dephasing channel, decoding up to stabilizers.
//!
//! Three strategies are provided: an analytic bounded-distance logical error
//! rate, min-sum belief propagation with ordered-statistics post-processing,
//! and a guess-based decoder that tests error patterns in order of
//! nondecreasing weight. Success is judged degenerately: a residual error
//! that lies in the Z-stabilizer group acts trivially and is not a failure.

mod bp;
mod grand;
mod osd;

pub use bp::{bp_minsum, BpDecoder, BpOutput};
pub use grand::{qgrand, QgrandDecoder};
pub use osd::{osd_postprocess, OsdPostprocessor};

use crate::analysis::{binomial, CssCode};
use crate::gf2::BitVector;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecoderError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("residual check called with mismatched syndromes")]
    SyndromeMismatch,
}

/// Shared decoder knobs.
#[derive(Clone, Copy, Debug)]
pub struct DecoderConfig {
    /// Channel prior (dephasing probability).
    pub p: f64,
    /// BP iteration cap.
    pub n_iter: u32,
    /// Min-sum scaling factor.
    pub alpha: f64,
    /// OSD combination-sweep depth (0 disables the sweep).
    pub lambda: usize,
    /// Guess budget for the weight-ordered decoder.
    pub max_query: u64,
    /// Symmetric clamp on log-likelihood ratios.
    pub llr_clamp: f64,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            p: 0.01,
            n_iter: 100,
            alpha: 0.05,
            lambda: 0,
            max_query: 1_000_000,
            llr_clamp: 50.0,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<(), DecoderError> {
        if !(0.0..0.5).contains(&self.p) {
            return Err(DecoderError::OutOfRange(format!("p = {} outside [0, 0.5)", self.p)));
        }
        if self.n_iter < 1 {
            return Err(DecoderError::OutOfRange("n_iter must be >= 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(DecoderError::OutOfRange(format!(
                "alpha = {} outside (0, 1]",
                self.alpha
            )));
        }
        if self.max_query < 1 {
            return Err(DecoderError::OutOfRange("max_query must be >= 1".into()));
        }
        Ok(())
    }
}

/// Per-frame decode counters feeding the cost model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecodeCounters {
    pub bp_iterations: u32,
    pub osd_invoked: bool,
    /// Syndrome guesses spent (weight-ordered decoder only).
    pub guesses: u64,
}

/// Result of one frame decode.
///
/// `logical_failure` is meaningful only once the harness has compared the
/// correction against the true error; decoders themselves leave it false.
#[derive(Clone, Debug)]
pub struct DecodeOutcome {
    pub correction: BitVector,
    pub converged: bool,
    pub logical_failure: bool,
    pub counters: DecodeCounters,
}

/// Exact bounded-distance logical error rate
/// 1 - sum_{w<=t_x} C(n,w) p^w (1-p)^{n-w}.
///
/// Evaluated as the complementary tail sum (w > t_x), smallest terms first,
/// to avoid cancellation at small p.
pub fn bdd_ler(n: usize, t_x: usize, p: f64) -> Result<f64, DecoderError> {
    if !(0.0..0.5).contains(&p) {
        return Err(DecoderError::OutOfRange(format!("p = {p} outside [0, 0.5)")));
    }
    if t_x > n {
        return Err(DecoderError::OutOfRange(format!("t_x = {t_x} exceeds n = {n}")));
    }
    let q = 1.0 - p;
    let mut sum = 0.0f64;
    for w in ((t_x + 1)..=n).rev() {
        let term = binomial(n, w) as f64 * p.powi(w as i32) * q.powi((n - w) as i32);
        sum += term;
    }
    Ok(sum)
}

/// Degenerate success test: the residual e + e_hat is a logical failure iff
/// it is outside the Z-stabilizer group, i.e. G_1 (e + e_hat) != 0.
///
/// Both inputs must produce the same syndrome (the residual lies in C_X);
/// anything else indicates a harness bug and is rejected.
pub fn residual_is_logical(
    code: &CssCode,
    e: &BitVector,
    e_hat: &BitVector,
) -> Result<bool, DecoderError> {
    if e.len() != code.n || e_hat.len() != code.n {
        return Err(DecoderError::DimensionMismatch {
            expected: code.n,
            got: if e.len() != code.n { e.len() } else { e_hat.len() },
        });
    }
    let s_e = code.h_x.matvec(e).expect("length checked");
    let s_hat = code.h_x.matvec(e_hat).expect("length checked");
    if s_e != s_hat {
        return Err(DecoderError::SyndromeMismatch);
    }
    let residual = e.xor(e_hat);
    Ok(!code.g_1.matvec(&residual).expect("length checked").is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::assemble_css;
    use crate::ilp::all_types_matrix;

    #[test]
    fn bdd_matches_published_values() {
        let cases = [
            (0.001, 1.77996747449355e-05),
            (0.01, 1.30840049662083e-02),
        ];
        for (p, expected) in cases {
            let got = bdd_ler(49, 2, p).unwrap();
            assert!(
                ((got - expected) / expected).abs() < 1e-12,
                "p={p}: got {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn bdd_edge_cases() {
        assert_eq!(bdd_ler(49, 49, 0.3).unwrap(), 0.0);
        assert_eq!(bdd_ler(49, 2, 0.0).unwrap(), 0.0);
        assert!(bdd_ler(10, 11, 0.1).is_err());
        assert!(bdd_ler(10, 1, 0.5).is_err());
    }

    #[test]
    fn bdd_monotone_in_p_and_t() {
        let mut last = 0.0;
        for i in 1..50 {
            let p = 0.01 * i as f64;
            if p >= 0.5 {
                break;
            }
            let v = bdd_ler(31, 2, p).unwrap();
            assert!(v >= last && (0.0..=1.0).contains(&v));
            last = v;
        }
        assert!(bdd_ler(31, 3, 0.05).unwrap() <= bdd_ler(31, 2, 0.05).unwrap());
    }

    #[test]
    fn residual_zero_is_not_logical() {
        let code = assemble_css(&all_types_matrix(4)).unwrap();
        let e = BitVector::from_bit_str("101000000000000").unwrap();
        assert!(!residual_is_logical(&code, &e, &e).unwrap());
    }

    #[test]
    fn residual_parity_decides_for_all_ones_logical() {
        let code = assemble_css(&all_types_matrix(4)).unwrap();
        // Any stabilizer row: residual even weight in C_X, acts trivially.
        let stab = code.h_z.row(0).clone();
        let zero = BitVector::zeros(15);
        assert!(!residual_is_logical(&code, &stab, &zero).unwrap());
        // A logical representative: all-ones (odd weight) differs from zero
        // by a nontrivial logical operator... but their syndromes must match.
        let logical = BitVector::ones(15);
        assert!(code.h_x.matvec(&logical).unwrap().is_zero());
        assert!(residual_is_logical(&code, &logical, &zero).unwrap());
    }

    #[test]
    fn residual_rejects_mismatched_syndromes() {
        let code = assemble_css(&all_types_matrix(4)).unwrap();
        let mut e = BitVector::zeros(15);
        e.set(0, true);
        let zero = BitVector::zeros(15);
        assert_eq!(
            residual_is_logical(&code, &e, &zero),
            Err(DecoderError::SyndromeMismatch)
        );
    }
}
