//! Classical and quantum code analytics.
//!
//! Weight enumerators are computed exactly by Gray-code enumeration of the
//! row space, dual enumerators by the MacWilliams transform with Krawtchouk
//! kernels, and quantum distances of assembled CSS codes from the difference
//! of subcode enumerators. Everything is exact integer arithmetic; results
//! beyond the enumeration guard are reported as unknown rather than guessed.

use crate::gf2::{BitMatrix, BitVector};
use num_bigint::BigInt;
use thiserror::Error;

/// Largest code dimension enumerated exhaustively (2^28 codewords).
pub const ENUMERATION_GUARD: usize = 28;
/// Largest length for which Krawtchouk values are guaranteed exact in i128.
pub const MAX_KRAWTCHOUK_N: usize = 100;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("generator rows are dependent (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },
    #[error("dimension {dim} exceeds the enumeration guard {max}")]
    TooLarge { dim: usize, max: usize },
    #[error("inconsistent weight distribution: B_{ell} is {detail}")]
    InconsistentDistribution { ell: usize, detail: String },
    #[error("length must be odd, got {0}")]
    EvenLength(usize),
    #[error("row {0} has odd weight")]
    OddWeightRow(usize),
    #[error("matrix is not triorthogonal: {0}")]
    NotTriorthogonal(TriViolation),
}

/// First triorthogonality violation in row-index lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriViolation {
    Pair { b: usize, c: usize, overlap: usize },
    Triple { b: usize, c: usize, d: usize, overlap: usize },
}

impl std::fmt::Display for TriViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TriViolation::Pair { b, c, overlap } => {
                write!(f, "rows ({b},{c}) overlap in {overlap} positions")
            }
            TriViolation::Triple { b, c, d, overlap } => {
                write!(f, "rows ({b},{c},{d}) overlap in {overlap} positions")
            }
        }
    }
}

/// Exact binomial coefficient; valid well past n = 100 in u128.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 1..=k {
        result = result * (n - k + i) as u128 / i as u128;
    }
    result
}

/// Binary Krawtchouk polynomial K_ell(j; n) = sum_s (-1)^s C(j,s) C(n-j, ell-s).
pub fn krawtchouk(ell: usize, j: usize, n: usize) -> Result<i128, AnalysisError> {
    if n > MAX_KRAWTCHOUK_N {
        return Err(AnalysisError::OutOfRange(format!(
            "n = {n} exceeds the exactness bound {MAX_KRAWTCHOUK_N}"
        )));
    }
    if ell > n || j > n {
        return Err(AnalysisError::OutOfRange(format!(
            "krawtchouk(ell={ell}, j={j}, n={n}) requires ell, j <= n"
        )));
    }
    let mut sum: i128 = 0;
    for s in 0..=ell {
        let term = binomial(j, s) as i128 * binomial(n - j, ell - s) as i128;
        if s % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum)
}

/// Weight enumerator coefficients A_0..A_n of a code (or B_0..B_n of a dual).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    n: usize,
    coeffs: Vec<u128>,
}

impl WeightDistribution {
    pub fn new(n: usize, coeffs: Vec<u128>) -> Self {
        assert_eq!(coeffs.len(), n + 1);
        Self { n, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[u128] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> u128 {
        self.coeffs[j]
    }

    /// Total number of codewords, sum of all coefficients.
    pub fn total(&self) -> u128 {
        self.coeffs.iter().sum()
    }

    /// Smallest nonzero-codeword weight, if any.
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        (1..=self.n).find(|&j| self.coeffs[j] > 0)
    }
}

fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

/// Weight histogram over one Gray-code slice [start, end) of the row span.
fn weight_histogram_chunk(rows: &[Vec<u64>], words: usize, n: usize, start: u64, end: u64) -> Vec<u64> {
    let mut hist = vec![0u64; n + 1];
    let mut state = vec![0u64; words];
    for (b, row) in rows.iter().enumerate() {
        if (gray(start) >> b) & 1 == 1 {
            for (s, w) in state.iter_mut().zip(row) {
                *s ^= w;
            }
        }
    }
    let weight = |st: &[u64]| st.iter().map(|w| w.count_ones() as usize).sum::<usize>();
    hist[weight(&state)] += 1;
    for i in start + 1..end {
        let b = i.trailing_zeros() as usize;
        for (s, w) in state.iter_mut().zip(&rows[b]) {
            *s ^= w;
        }
        hist[weight(&state)] += 1;
    }
    hist
}

fn weight_distribution_impl(gen: &BitMatrix, parallel: bool) -> Result<WeightDistribution, AnalysisError> {
    let k = gen.rows();
    if k > ENUMERATION_GUARD {
        return Err(AnalysisError::TooLarge {
            dim: k,
            max: ENUMERATION_GUARD,
        });
    }
    let rank = gen.rank();
    if rank != k {
        return Err(AnalysisError::RankDeficient { rank, rows: k });
    }
    let n = gen.cols();
    let words = n.div_ceil(64).max(1);
    let rows: Vec<Vec<u64>> = (0..k)
        .map(|r| {
            let mut w = gen.row(r).words().to_vec();
            w.resize(words, 0);
            w
        })
        .collect();
    let total: u64 = 1u64 << k;

    let hist = if parallel && k >= 16 {
        run_chunked_histogram(&rows, words, n, total)
    } else {
        weight_histogram_chunk(&rows, words, n, 0, total)
    };
    Ok(WeightDistribution::new(
        n,
        hist.into_iter().map(u128::from).collect(),
    ))
}

#[cfg(feature = "parallel")]
fn run_chunked_histogram(rows: &[Vec<u64>], words: usize, n: usize, total: u64) -> Vec<u64> {
    use rayon::prelude::*;
    let chunks = 256u64;
    let step = total.div_ceil(chunks);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * step;
            let end = ((c + 1) * step).min(total);
            if start >= end {
                vec![0u64; n + 1]
            } else {
                weight_histogram_chunk(rows, words, n, start, end)
            }
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

#[cfg(not(feature = "parallel"))]
fn run_chunked_histogram(rows: &[Vec<u64>], words: usize, n: usize, total: u64) -> Vec<u64> {
    weight_histogram_chunk(rows, words, n, 0, total)
}

/// Exact weight distribution of the code spanned by the generator rows.
///
/// Requires independent rows and at most 2^28 codewords.
pub fn weight_distribution(gen: &BitMatrix) -> Result<WeightDistribution, AnalysisError> {
    weight_distribution_impl(gen, cfg!(feature = "parallel"))
}

/// Sequential variant of [`weight_distribution`]; same results, one thread.
pub fn weight_distribution_sequential(gen: &BitMatrix) -> Result<WeightDistribution, AnalysisError> {
    weight_distribution_impl(gen, false)
}

/// MacWilliams transform: dual coefficients B_ell from primal A_j with
/// |C| = 2^k.
///
/// Accumulation runs in arbitrary precision; a negative or fractional B_ell
/// means the input was not the distribution of a linear code and is rejected.
pub fn macwilliams(a: &WeightDistribution, k: usize) -> Result<WeightDistribution, AnalysisError> {
    let n = a.n();
    let expected = if k < 128 { 1u128 << k } else { u128::MAX };
    if k >= 128 || a.total() != expected {
        return Err(AnalysisError::OutOfRange(format!(
            "distribution sums to {} but |C| = 2^{k} was claimed",
            a.total()
        )));
    }
    let size = BigInt::from(1u8) << k;
    let mut coeffs = Vec::with_capacity(n + 1);
    for ell in 0..=n {
        let mut acc = BigInt::from(0u8);
        for j in 0..=n {
            if a.coeff(j) == 0 {
                continue;
            }
            acc += BigInt::from(a.coeff(j)) * BigInt::from(krawtchouk(ell, j, n)?);
        }
        if acc.sign() == num_bigint::Sign::Minus {
            return Err(AnalysisError::InconsistentDistribution {
                ell,
                detail: format!("negative ({acc})"),
            });
        }
        let (q, r) = (acc.clone() / &size, acc % &size);
        if r != BigInt::from(0u8) {
            return Err(AnalysisError::InconsistentDistribution {
                ell,
                detail: "not divisible by |C|".into(),
            });
        }
        let (_, digits) = q.to_u64_digits();
        let value = match digits.len() {
            0 => 0u128,
            1 => u128::from(digits[0]),
            2 => u128::from(digits[0]) | (u128::from(digits[1]) << 64),
            _ => {
                return Err(AnalysisError::InconsistentDistribution {
                    ell,
                    detail: "exceeds u128".into(),
                })
            }
        };
        coeffs.push(value);
    }
    Ok(WeightDistribution::new(n, coeffs))
}

/// Minimum weight of a nonzero dual codeword, via MacWilliams.
///
/// Returns `n + 1` when the dual code is trivial (no nonzero word).
pub fn dual_distance(gen: &BitMatrix) -> Result<usize, AnalysisError> {
    let a = weight_distribution(gen)?;
    let b = macwilliams(&a, gen.rows())?;
    Ok(b.min_nonzero_weight().unwrap_or(gen.cols() + 1))
}

/// First violating pair or triple if the matrix is not triorthogonal.
///
/// Pairs are scanned before triples, each in row-index lexicographic order.
/// Overlaps are integer support intersections, not mod-2 sums.
pub fn triorthogonality_violation(m: &BitMatrix) -> Option<TriViolation> {
    let r = m.rows();
    for b in 0..r {
        for c in b + 1..r {
            let overlap = m.row(b).overlap(m.row(c));
            if overlap % 2 != 0 {
                return Some(TriViolation::Pair { b, c, overlap });
            }
        }
    }
    for b in 0..r {
        for c in b + 1..r {
            for d in c + 1..r {
                let overlap = m.row(b).overlap3(m.row(c), m.row(d));
                if overlap % 2 != 0 {
                    return Some(TriViolation::Triple { b, c, d, overlap });
                }
            }
        }
    }
    None
}

pub fn is_triorthogonal(m: &BitMatrix) -> bool {
    triorthogonality_violation(m).is_none()
}

/// True iff every codeword weight of the spanned code is divisible by 8.
pub fn is_triply_even(gen: &BitMatrix) -> Result<bool, AnalysisError> {
    let a = weight_distribution(gen)?;
    Ok((0..=a.n()).all(|j| j % 8 == 0 || a.coeff(j) == 0))
}

/// An assembled triorthogonal CSS code.
///
/// `g_z` stacks the odd-weight logical rows `g_1` on the even-weight
/// stabilizer block `h_x`; `h_z` is a basis of ker(g_z). The quantum distance
/// fields stay `None` until [`CssCode::quantum_distances`] fills them in (or
/// reports them unknown).
#[derive(Clone, Debug)]
pub struct CssCode {
    pub h_x: BitMatrix,
    pub g_1: BitMatrix,
    pub g_z: BitMatrix,
    pub h_z: BitMatrix,
    pub n: usize,
    pub k: usize,
    pub k_0: usize,
    pub d_0: Option<usize>,
    pub d_1: Option<usize>,
    pub d_x: Option<usize>,
    pub d_z: Option<usize>,
    pub degenerate_x: Option<bool>,
    pub degenerate_z: Option<bool>,
}

/// Distances and degeneracy verdicts of a CSS code; `None` marks values
/// beyond the enumeration guard.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QuantumDistances {
    pub d_0: Option<usize>,
    pub d_1: Option<usize>,
    pub d_x: Option<usize>,
    pub d_z: Option<usize>,
    pub degenerate_x: Option<bool>,
    pub degenerate_z: Option<bool>,
}

/// Builds the CSS code of an even-weight triorthogonal block by appending the
/// all-ones logical row.
///
/// Requires odd length, even-weight full-rank rows, and triorthogonality of
/// the stacked generator; each failed precondition is reported specifically.
pub fn assemble_css(h_x: &BitMatrix) -> Result<CssCode, AnalysisError> {
    let n = h_x.cols();
    if n % 2 == 0 {
        return Err(AnalysisError::EvenLength(n));
    }
    for r in 0..h_x.rows() {
        if h_x.row(r).weight() % 2 != 0 {
            return Err(AnalysisError::OddWeightRow(r));
        }
    }
    let g_1 = BitMatrix::from_rows(vec![BitVector::ones(n)]);
    let g_z = BitMatrix::stack(&g_1, h_x);
    if let Some(v) = triorthogonality_violation(&g_z) {
        return Err(AnalysisError::NotTriorthogonal(v));
    }
    let k_0 = h_x.rows();
    let rank = h_x.rank();
    if rank != k_0 {
        return Err(AnalysisError::RankDeficient { rank, rows: k_0 });
    }
    // With n odd the all-ones row is odd-weight, hence independent of the
    // even-weight block; rank(g_z) = 1 + k_0 follows.
    debug_assert_eq!(g_z.rank(), k_0 + 1);
    let h_z = g_z.nullspace_basis();
    Ok(CssCode {
        h_x: h_x.clone(),
        g_1,
        g_z,
        h_z,
        n,
        k: 1,
        k_0,
        d_0: None,
        d_1: None,
        d_x: None,
        d_z: None,
        degenerate_x: None,
        degenerate_z: None,
    })
}

impl CssCode {
    /// Exact quantum distances.
    ///
    /// C_X = ker(h_x) and C_Z^perp = ker(g_z) are far too large to enumerate
    /// for interesting codes, but their enumerators follow exactly from the
    /// MacWilliams transform of the small sides rowspace(h_x) and
    /// rowspace(g_z), both of dimension at most k + k_0. The distances are
    /// then the first weights where the subcode enumerators differ:
    ///
    /// - d_0 = min nonzero weight of C_X,
    /// - d_1 = min nonzero weight of C_Z,
    /// - d_x = min weight in C_X \ C_Z^perp,
    /// - d_z = min weight in C_Z \ C_X^perp.
    ///
    /// Beyond the guard (k + k_0 > 28) every field is `None`.
    pub fn quantum_distances(&self) -> Result<QuantumDistances, AnalysisError> {
        if self.k + self.k_0 > ENUMERATION_GUARD {
            return Ok(QuantumDistances::default());
        }
        let wd_cx_perp = weight_distribution(&self.h_x)?; // rowspace(h_x) = C_X^perp
        let wd_cz = weight_distribution(&self.g_z)?; // rowspace(g_z) = C_Z
        let wd_cx = macwilliams(&wd_cx_perp, self.k_0)?; // C_X = ker(h_x)
        let wd_cz_perp = macwilliams(&wd_cz, self.k + self.k_0)?; // ker(g_z)

        let d_0 = wd_cx.min_nonzero_weight();
        let d_1 = wd_cz.min_nonzero_weight();
        // C_Z^perp is a subcode of C_X and C_X^perp a subcode of C_Z, so the
        // coefficient differences count exactly the coset words.
        let d_x = (1..=self.n).find(|&j| wd_cx.coeff(j) > wd_cz_perp.coeff(j));
        let d_z = (1..=self.n).find(|&j| wd_cz.coeff(j) > wd_cx_perp.coeff(j));
        Ok(QuantumDistances {
            d_0,
            d_1,
            d_x,
            d_z,
            degenerate_x: match (d_x, d_0) {
                (Some(x), Some(z)) => Some(x > z),
                _ => None,
            },
            degenerate_z: match (d_z, d_1) {
                (Some(z), Some(o)) => Some(z > o),
                _ => None,
            },
        })
    }

    /// Computes and stores the distance fields.
    pub fn compute_distances(&mut self) -> Result<(), AnalysisError> {
        let d = self.quantum_distances()?;
        self.d_0 = d.d_0;
        self.d_1 = d.d_1;
        self.d_x = d.d_x;
        self.d_z = d.d_z;
        self.degenerate_x = d.degenerate_x;
        self.degenerate_z = d.degenerate_z;
        Ok(())
    }

    /// Z-error correction radius floor((d_x - 1)/2), when d_x is known.
    pub fn t_x(&self) -> Option<usize> {
        self.d_x.map(|d| (d - 1) / 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::SplitMix64;
    use crate::ilp::all_types_matrix;

    #[test]
    fn krawtchouk_degenerate_cases() {
        for j in 0..=15 {
            assert_eq!(krawtchouk(0, j, 15).unwrap(), 1);
        }
        assert_eq!(krawtchouk(3, 0, 15).unwrap(), 455); // C(15,3)
        assert_eq!(krawtchouk(3, 8, 15).unwrap(), 7);
        assert_eq!(krawtchouk(1, 8, 15).unwrap(), -1); // K_1 = n - 2j
        assert!(krawtchouk(16, 0, 15).is_err());
    }

    #[test]
    fn weight_distribution_all_types() {
        let a = weight_distribution(&all_types_matrix(4)).unwrap();
        assert_eq!(a.coeff(0), 1);
        assert_eq!(a.coeff(8), 15);
        assert_eq!(a.total(), 16);
    }

    #[test]
    fn weight_distribution_repetition() {
        let a = weight_distribution(&BitMatrix::from_bit_strs(&["111"])).unwrap();
        assert_eq!(a.coeffs(), &[1, 0, 0, 1]);
    }

    #[test]
    fn weight_distribution_two_blocks() {
        let gen = BitMatrix::from_bit_strs(&["1100", "0011"]);
        let a = weight_distribution(&gen).unwrap();
        assert_eq!(a.coeffs(), &[1, 0, 2, 0, 1]);
    }

    #[test]
    fn weight_distribution_rejects_dependent_rows() {
        let gen = BitMatrix::from_bit_strs(&["110", "110"]);
        assert!(matches!(
            weight_distribution(&gen),
            Err(AnalysisError::RankDeficient { .. })
        ));
    }

    #[test]
    fn weight_distribution_guard() {
        let gen = BitMatrix::identity(29);
        assert!(matches!(
            weight_distribution(&gen),
            Err(AnalysisError::TooLarge { .. })
        ));
    }

    #[test]
    fn macwilliams_repetition_code() {
        let a = WeightDistribution::new(3, vec![1, 0, 0, 1]);
        let b = macwilliams(&a, 1).unwrap();
        assert_eq!(b.coeffs(), &[1, 0, 3, 0]);
    }

    #[test]
    fn macwilliams_full_space() {
        let n = 5;
        let coeffs: Vec<u128> = (0..=n).map(|j| binomial(n, j)).collect();
        let a = WeightDistribution::new(n, coeffs);
        let b = macwilliams(&a, n).unwrap();
        assert_eq!(b.coeff(0), 1);
        assert!((1..=n).all(|j| b.coeff(j) == 0));
    }

    /// Independent oracle: enumerate the dual code directly through the
    /// nullspace basis and count weights.
    fn dual_distribution_by_enumeration(gen: &BitMatrix) -> WeightDistribution {
        let ns = gen.nullspace_basis();
        weight_distribution(&ns).unwrap()
    }

    #[test]
    fn macwilliams_matches_dual_enumeration_all_types() {
        let m = all_types_matrix(4);
        let a = weight_distribution(&m).unwrap();
        let b = macwilliams(&a, 4).unwrap();
        let oracle = dual_distribution_by_enumeration(&m);
        assert_eq!(b, oracle);
        assert_eq!(b.coeff(0), 1);
        assert_eq!(b.coeff(1), 0);
        assert_eq!(b.coeff(2), 0);
        assert_eq!(b.coeff(3), 35);
    }

    #[test]
    fn macwilliams_involution_random_codes() {
        let mut rng = SplitMix64::new(0x1234);
        let mut done = 0;
        while done < 40 {
            let rows = 1 + (rng.next_u64() % 5) as usize;
            let cols = rows + (rng.next_u64() % 8) as usize;
            let mut gen = BitMatrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    if rng.next_u64() & 1 == 1 {
                        gen.set(r, c, true);
                    }
                }
            }
            if gen.rank() != rows {
                continue;
            }
            let a = weight_distribution(&gen).unwrap();
            let b = macwilliams(&a, rows).unwrap();
            assert_eq!(b.total(), 1u128 << (cols - rows));
            let back = macwilliams(&b, cols - rows).unwrap();
            assert_eq!(back, a);
            done += 1;
        }
    }

    #[test]
    fn dual_distance_examples() {
        assert_eq!(dual_distance(&all_types_matrix(4)).unwrap(), 3);
        assert_eq!(dual_distance(&BitMatrix::identity(4)).unwrap(), 5); // sentinel n+1
        assert_eq!(dual_distance(&BitMatrix::from_bit_strs(&["111"])).unwrap(), 2);
    }

    #[test]
    fn triorthogonality_examples() {
        assert!(is_triorthogonal(&all_types_matrix(4)));
        assert!(is_triorthogonal(&BitMatrix::identity(2)));
        let bad = BitMatrix::from_bit_strs(&["110", "011", "101"]);
        assert_eq!(
            triorthogonality_violation(&bad),
            Some(TriViolation::Pair { b: 0, c: 1, overlap: 1 })
        );
    }

    #[test]
    fn triorthogonality_column_permutation_invariant() {
        let m = all_types_matrix(4);
        let perm: Vec<usize> = (0..15).rev().collect();
        assert!(is_triorthogonal(&m.select_columns(&perm)));
    }

    #[test]
    fn triply_even_examples() {
        assert!(is_triply_even(&all_types_matrix(4)).unwrap());
        assert!(!is_triply_even(&BitMatrix::from_bit_strs(&["111"])).unwrap());
        let empty = BitMatrix::zeros(0, 5);
        assert!(is_triply_even(&empty).unwrap());
    }

    #[test]
    fn assemble_all_types() {
        let code = assemble_css(&all_types_matrix(4)).unwrap();
        assert_eq!((code.n, code.k, code.k_0), (15, 1, 4));
        assert_eq!(code.g_z.rank(), 5);
        assert_eq!(code.h_z.rows(), 10);
        for r in 0..code.h_z.rows() {
            assert!(code.h_x.matvec(code.h_z.row(r)).unwrap().is_zero());
        }
    }

    #[test]
    fn assemble_empty_block() {
        let code = assemble_css(&BitMatrix::zeros(0, 3)).unwrap();
        assert_eq!((code.n, code.k, code.k_0), (3, 1, 0));
        assert_eq!(code.g_z.rows(), 1);
        assert_eq!(code.g_z.row(0).weight(), 3);
    }

    #[test]
    fn assemble_rejects_odd_weight_row() {
        let h = BitMatrix::from_bit_strs(&["11100"]);
        assert!(matches!(
            assemble_css(&h),
            Err(AnalysisError::OddWeightRow(0))
        ));
    }

    #[test]
    fn assemble_rejects_even_length() {
        let h = BitMatrix::from_bit_strs(&["1111"]);
        assert!(matches!(assemble_css(&h), Err(AnalysisError::EvenLength(4))));
    }

    #[test]
    fn distances_15_1_3() {
        let mut code = assemble_css(&all_types_matrix(4)).unwrap();
        code.compute_distances().unwrap();
        assert_eq!(code.d_x, Some(3));
        assert_eq!(code.d_z.min(code.d_x), Some(3));
        assert_eq!(code.d_0, Some(3));
        assert_eq!(code.degenerate_x, Some(false));
    }

    #[test]
    fn distances_tiny_code() {
        let code = assemble_css(&BitMatrix::zeros(0, 3)).unwrap();
        let d = code.quantum_distances().unwrap();
        assert_eq!(d.d_1, Some(3));
        assert_eq!(d.d_z, Some(3));
        assert_eq!(d.d_0, Some(1));
        assert_eq!(d.d_x, Some(1));
    }

    /// Distance oracle by direct coset enumeration, small codes only.
    fn distances_by_enumeration(code: &CssCode) -> (usize, usize) {
        let n = code.n;
        let mut d_x = usize::MAX;
        let mut d_z = usize::MAX;
        for bits in 1u64..(1 << n) {
            let mut v = BitVector::zeros(n);
            for i in 0..n {
                if (bits >> i) & 1 == 1 {
                    v.set(i, true);
                }
            }
            let w = v.weight();
            let in_cx = code.h_x.matvec(&v).unwrap().is_zero();
            let in_cz_perp = code.g_z.matvec(&v).unwrap().is_zero();
            if in_cx && !in_cz_perp {
                d_x = d_x.min(w);
            }
            // v in C_Z iff it solves against rowspace(g_z): test by rank.
            let stacked = BitMatrix::stack(&code.g_z, &BitMatrix::from_rows(vec![v.clone()]));
            let in_cz = stacked.rank() == code.g_z.rank();
            let in_cx_perp = {
                let st = BitMatrix::stack(&code.h_x, &BitMatrix::from_rows(vec![v.clone()]));
                st.rank() == code.h_x.rank()
            };
            if in_cz && !in_cx_perp {
                d_z = d_z.min(w);
            }
        }
        (d_x, d_z)
    }

    #[test]
    fn distances_match_enumeration_15_1_3() {
        let code = assemble_css(&all_types_matrix(4)).unwrap();
        let d = code.quantum_distances().unwrap();
        let (d_x, d_z) = distances_by_enumeration(&code);
        assert_eq!(d.d_x, Some(d_x));
        assert_eq!(d.d_z, Some(d_z));
    }

    #[test]
    fn lemma_invariants_assembled() {
        let code = assemble_css(&all_types_matrix(4)).unwrap();
        assert_eq!(code.g_1.rank(), code.k);
        assert_eq!(code.g_z.rank(), code.k + code.k_0);
        // C_X^perp = C_Z intersect C_Z^perp on n = 15 by enumeration: every
        // vector in rowspace(h_x) lies in both, and dimensions match
        // (k_0 vs (k + k_0) + (n - k - k_0) - n + k_0).
        let wd_hx = weight_distribution(&code.h_x).unwrap();
        let inter_dim = code.g_z.rank() + code.h_z.rank()
            - BitMatrix::stack(&code.g_z, &code.h_z).rank();
        assert_eq!(1u128 << inter_dim, wd_hx.total());
    }

    #[test]
    fn parallel_weight_distribution_matches_sequential() {
        let mut rng = SplitMix64::new(42);
        let mut gen = BitMatrix::zeros(18, 40);
        loop {
            for r in 0..18 {
                for c in 0..40 {
                    gen.set(r, c, rng.next_u64() & 1 == 1);
                }
            }
            if gen.rank() == 18 {
                break;
            }
        }
        let a = weight_distribution(&gen).unwrap();
        let b = weight_distribution_sequential(&gen).unwrap();
        assert_eq!(a, b);
    }
}
