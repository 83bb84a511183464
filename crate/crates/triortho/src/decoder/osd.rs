//! Ordered-statistics post-processing over BP soft decisions.

use crate::gf2::{BitMatrix, BitVector};

/// Ordered-statistics stage bound to one parity-check matrix.
///
/// Columns are ranked by descending probability of error (stable on the
/// original index), the first r independent columns become the pivot system,
/// and candidate remainders are swept: the zero remainder, every weight-one
/// remainder, and all weight-two remainders supported on the first `lambda`
/// reliability-ordered remainder positions. The minimum-total-weight
/// completion wins, ties resolved by enumeration order. With `lambda = 0`
/// only the zero remainder is used (order-0 decoding).
#[derive(Clone)]
pub struct OsdPostprocessor {
    h: BitMatrix,
    /// Row selection making the system full-rank, ascending.
    basis_rows: Vec<usize>,
    rank: usize,
}

impl OsdPostprocessor {
    pub fn new(h: &BitMatrix) -> Self {
        let rank = h.rank();
        assert!(rank >= 1, "parity-check matrix must have rank >= 1");
        // Work on a full-row-rank subsystem; for assembled codes this keeps
        // every row.
        let basis_rows = if rank == h.rows() {
            (0..h.rows()).collect()
        } else {
            let (rows, _) = h.transpose().first_independent_columns();
            rows
        };
        Self {
            h: h.clone(),
            basis_rows,
            rank,
        }
    }

    pub fn decode(&self, s: &BitVector, posteriors: &[f64], lambda: usize) -> BitVector {
        let n = self.h.cols();
        let r = self.rank;
        assert_eq!(posteriors.len(), n);
        assert_eq!(s.len(), self.h.rows());

        // Probability of error per position from the posterior LLR; sort
        // descending, stable on the original index.
        let mut order: Vec<usize> = (0..n).collect();
        let prob: Vec<f64> = posteriors.iter().map(|&l| 1.0 / (1.0 + l.exp())).collect();
        order.sort_by(|&a, &b| {
            prob[b]
                .partial_cmp(&prob[a])
                .expect("posteriors are finite")
                .then(a.cmp(&b))
        });

        let h_rows = self.h.select_rows(&self.basis_rows);
        let s_rows = {
            let mut v = BitVector::zeros(r);
            for (i, &row) in self.basis_rows.iter().enumerate() {
                if s.get(row) {
                    v.set(i, true);
                }
            }
            v
        };
        let sorted = h_rows.select_columns(&order);
        let (pivot_pos, basis) = sorted.first_independent_columns();
        debug_assert_eq!(pivot_pos.len(), r);
        let inv = basis.invert().expect("pivot columns are independent");

        // Remainder columns, in sorted (descending error probability) order.
        let mut is_pivot = vec![false; n];
        for &p in &pivot_pos {
            is_pivot[p] = true;
        }
        let rem_pos: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let k_rem = rem_pos.len();

        // e_s candidates complete as inv*s + inv*H_rem*e_rem; precompute the
        // per-remainder-column images inv*h_col.
        let base = inv.matvec(&s_rows).expect("square system");
        let rem_images: Vec<BitVector> = rem_pos
            .iter()
            .map(|&c| inv.matvec(&sorted.column(c)).expect("square system"))
            .collect();

        let mut best = (base.weight(), base.clone(), Vec::new());
        if lambda > 0 {
            for j in 0..k_rem {
                let cand = base.xor(&rem_images[j]);
                let weight = cand.weight() + 1;
                if weight < best.0 {
                    best = (weight, cand, vec![j]);
                }
            }
            let sweep = lambda.min(k_rem);
            for i in 0..sweep {
                for j in i + 1..sweep {
                    let cand = base.xor(&rem_images[i]).xor(&rem_images[j]);
                    let weight = cand.weight() + 2;
                    if weight < best.0 {
                        best = (weight, cand, vec![i, j]);
                    }
                }
            }
        }

        // Scatter pivot and remainder parts back to original columns.
        let (_, e_s, e_rem_support) = best;
        let mut correction = BitVector::zeros(n);
        for (i, &p) in pivot_pos.iter().enumerate() {
            if e_s.get(i) {
                correction.set(order[p], true);
            }
        }
        for &j in &e_rem_support {
            correction.set(order[rem_pos[j]], true);
        }
        correction
    }
}

/// One-shot ordered-statistics decode.
pub fn osd_postprocess(
    h: &BitMatrix,
    s: &BitVector,
    posteriors: &[f64],
    lambda: usize,
) -> BitVector {
    OsdPostprocessor::new(h).decode(s, posteriors, lambda)
}
