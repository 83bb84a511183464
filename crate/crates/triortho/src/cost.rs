//! Binary-operation cost estimates for the decoders.
//!
//! BP message updates are costed against a q-bit quantized implementation;
//! the ordered-statistics terms count sort, Gaussian elimination, inversion,
//! and product work; the guess decoder is costed per syndrome test. Measured
//! run counters (frames, post-processing invocations, guesses) plug straight
//! into the per-frame averages, which the simulation harness reports
//! verbatim.

/// Code parameters and run counters the formulas draw from.
///
/// Here `r` is the rank of the parity-check matrix and `k0 = n - r` the
/// classical code dimension (unlike the stabilizer-block row count carried by
/// `CssCode::k_0`); `n_e` counts the ones of the parity-check matrix.
#[derive(Clone, Copy, Debug, Default)]
pub struct CostParams {
    pub n: u64,
    pub r: u64,
    pub k0: u64,
    pub n_e: u64,
    /// Quantization bits for reliability arithmetic.
    pub q: u64,
    pub n_iter: u64,
    pub lambda: u64,
    /// Frames simulated at one channel probability.
    pub n_mc: u64,
    /// Post-processing invocations (BP failures).
    pub n_osd: u64,
    /// Total syndrome guesses.
    pub n_g: u64,
}

pub const DEFAULT_QUANTIZATION_BITS: u64 = 8;

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

impl CostParams {
    /// BP stage: n_iter (4 q n_e + n_e + n).
    pub fn bp(&self) -> f64 {
        (self.n_iter * (4 * self.q * self.n_e + self.n_e + self.n)) as f64
    }

    /// Soft-vector sort and column reorder: q n log2(n) + n.
    pub fn sort_osd(&self) -> f64 {
        let n = self.n as f64;
        (self.q as f64) * n * n.log2() + n
    }

    /// Gaussian elimination locating the pivot columns: r(r-1)(3n-r+2)/6.
    pub fn gaussian_elimination(&self) -> f64 {
        (self.r * self.r.saturating_sub(1) * (3 * self.n - self.r + 2) / 6) as f64
    }

    /// Pivot-system inversion: r(r-1)(3r+1)/2.
    pub fn inversion(&self) -> f64 {
        (self.r * self.r.saturating_sub(1) * (3 * self.r + 1) / 2) as f64
    }

    /// Syndrome product through the inverse: r(2r-1).
    pub fn prod_osd(&self) -> f64 {
        (self.r * (2 * self.r).saturating_sub(1)) as f64
    }

    /// Order-0 post-processing total.
    pub fn osd0(&self) -> f64 {
        self.sort_osd() + self.gaussian_elimination() + self.inversion() + self.prod_osd()
    }

    /// Configurations swept: all weight-one remainders plus weight-two pairs
    /// on the first lambda positions.
    pub fn n_conf(&self) -> u64 {
        self.k0 + choose2(self.lambda)
    }

    pub fn sorting_cs(&self) -> f64 {
        self.k0 as f64
    }

    /// One-off product of the inverse with the remainder block: r k0 (2r-1).
    pub fn precomp_cs(&self) -> f64 {
        (self.r * self.k0 * (2 * self.r).saturating_sub(1)) as f64
    }

    /// Per-configuration completions on top of the precomputation.
    pub fn operations_cs(&self) -> f64 {
        let per_conf = self.r * self.k0 + self.r * self.k0.saturating_sub(1) + self.r;
        self.precomp_cs() + (self.n_conf() * per_conf) as f64
    }

    /// Weight evaluations and the running minimum comparison.
    pub fn comparisons_cs(&self) -> f64 {
        (self.n_conf() * self.n.saturating_sub(1) + self.n_conf().saturating_sub(1)) as f64
    }

    /// Combination-sweep post-processing total.
    pub fn cs_lambda(&self) -> f64 {
        self.sorting_cs() + self.operations_cs() + self.comparisons_cs()
    }

    /// Average per-frame cost of BP with order-0 + combination-sweep
    /// post-processing: (n_MC C(BP) + n_OSD [C(OSD-0) + C(CS-lambda)]) / n_MC.
    pub fn bp_osd_avg(&self) -> f64 {
        assert!(self.n_mc >= 1, "n_mc must be >= 1");
        (self.n_mc as f64 * self.bp() + self.n_osd as f64 * (self.osd0() + self.cs_lambda()))
            / self.n_mc as f64
    }

    /// One syndrome test: rn + r(n-1) + r = 2rn.
    pub fn syndrome_cost(&self) -> f64 {
        (self.r * self.n + self.r * (self.n - 1) + self.r) as f64
    }

    /// Average per-frame guess-decoder cost: (n_g / n_MC) 2rn.
    pub fn qgrand_avg(&self) -> f64 {
        assert!(self.n_mc >= 1, "n_mc must be >= 1");
        self.n_g as f64 / self.n_mc as f64 * (2 * self.r * self.n) as f64
    }
}
