//! Monte Carlo logical-error-rate estimation and an exhaustive exact-LER
//! oracle for small codes.
//!
//! Every frame outcome is a pure function of `(seed, frame_index)` and the
//! plan, so frames parallelize freely: chunks are evaluated out of order and
//! reduced by an in-order scan that stops at the target error count, making
//! parallel and sequential runs bit-identical.

use crate::analysis::CssCode;
use crate::channel::{sample_error, ChannelConfig};
use crate::cost::{CostParams, DEFAULT_QUANTIZATION_BITS};
use crate::decoder::{
    residual_is_logical, BpDecoder, DecoderConfig, DecoderError, OsdPostprocessor, QgrandDecoder,
};
use crate::gf2::BitVector;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("plan is invalid: {0}")]
    BadPlan(String),
    #[error("decoder incompatible with code: {0}")]
    IncompatibleDecoder(String),
    #[error("length {n} exceeds the exact-enumeration limit {max}")]
    TooLarge { n: usize, max: usize },
    #[error(transparent)]
    Decoder(#[from] DecoderError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    QGrand,
    BpOsd,
    BddAnalytic,
}

impl DecoderKind {
    pub fn name(&self) -> &'static str {
        match self {
            DecoderKind::QGrand => "qgrand",
            DecoderKind::BpOsd => "bp-osd",
            DecoderKind::BddAnalytic => "bdd",
        }
    }
}

/// One Monte Carlo campaign over a probability grid.
#[derive(Clone, Debug)]
pub struct SimPlan {
    pub code: CssCode,
    pub decoder: DecoderKind,
    pub cfg: DecoderConfig,
    pub p_grid: Vec<f64>,
    /// Logical errors collected per point before stopping.
    pub target_errors: u64,
    pub max_frames: u64,
    pub seed: u64,
    /// Count decoder abstention (guess budget exhausted) as a logical error.
    pub count_abstain_as_error: bool,
}

impl SimPlan {
    pub fn new(code: CssCode, decoder: DecoderKind, cfg: DecoderConfig) -> Self {
        Self {
            code,
            decoder,
            cfg,
            p_grid: Vec::new(),
            target_errors: 100,
            max_frames: 1_000_000,
            seed: 0,
            count_abstain_as_error: true,
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        if self.target_errors < 1 {
            return Err(SimError::BadPlan("target_errors must be >= 1".into()));
        }
        for &p in &self.p_grid {
            if !(p > 0.0 && p < 0.5) {
                return Err(SimError::BadPlan(format!("p = {p} outside (0, 1/2)")));
            }
        }
        if self.decoder == DecoderKind::BddAnalytic && self.code.d_x.is_none() {
            return Err(SimError::IncompatibleDecoder(
                "analytic bounded-distance LER needs a known d_x".into(),
            ));
        }
        Ok(())
    }
}

/// Per-probability record of a finished campaign.
#[derive(Clone, Debug, PartialEq)]
pub struct PPointResult {
    pub p: f64,
    pub frames: u64,
    pub logical_errors: u64,
    pub ler: f64,
    pub avg_cost: f64,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    pub points: Vec<PPointResult>,
}

#[derive(Clone, Copy, Default)]
struct FrameStats {
    failed: bool,
    osd_invoked: bool,
    guesses: u64,
}

enum FrameDecoder {
    QGrand(QgrandDecoder),
    BpOsd(BpDecoder, OsdPostprocessor, usize),
}

impl FrameDecoder {
    fn build(plan: &SimPlan) -> FrameDecoder {
        match plan.decoder {
            DecoderKind::QGrand => {
                FrameDecoder::QGrand(QgrandDecoder::new(&plan.code.h_x, &plan.cfg))
            }
            DecoderKind::BpOsd | DecoderKind::BddAnalytic => FrameDecoder::BpOsd(
                BpDecoder::new(&plan.code.h_x, plan.cfg),
                OsdPostprocessor::new(&plan.code.h_x),
                plan.cfg.lambda,
            ),
        }
    }

    /// Decodes one syndrome; returns (correction, converged, osd_invoked,
    /// guesses).
    fn run(&self, s: &BitVector) -> (BitVector, bool, bool, u64) {
        match self {
            FrameDecoder::QGrand(dec) => {
                let out = dec.decode(s).expect("shapes fixed by construction");
                (out.correction, out.converged, false, out.counters.guesses)
            }
            FrameDecoder::BpOsd(bp, osd, lambda) => {
                let out = bp.decode(s).expect("shapes fixed by construction");
                if out.converged {
                    (out.hard_decision, true, false, 0)
                } else {
                    let correction = osd.decode(s, &out.posteriors, *lambda);
                    (correction, true, true, 0)
                }
            }
        }
    }
}

fn eval_frame(plan: &SimPlan, decoder: &FrameDecoder, p: f64, frame_index: u64) -> FrameStats {
    let cfg = ChannelConfig::new(p, plan.seed, frame_index);
    let e = sample_error(&cfg, plan.code.n);
    let s = plan.code.h_x.matvec(&e).expect("length fixed");
    let (correction, converged, osd_invoked, guesses) = decoder.run(&s);
    let failed = if converged {
        residual_is_logical(&plan.code, &e, &correction).expect("syndromes match by construction")
    } else {
        plan.count_abstain_as_error
    };
    FrameStats {
        failed,
        osd_invoked,
        guesses,
    }
}

const FRAME_CHUNK: u64 = 2048;

fn eval_chunk(plan: &SimPlan, p: f64, start: u64, end: u64, parallel: bool) -> Vec<FrameStats> {
    if parallel {
        eval_chunk_parallel(plan, p, start, end)
    } else {
        let decoder = FrameDecoder::build(plan);
        (start..end)
            .map(|idx| eval_frame(plan, &decoder, p, idx))
            .collect()
    }
}

#[cfg(feature = "parallel")]
fn eval_chunk_parallel(plan: &SimPlan, p: f64, start: u64, end: u64) -> Vec<FrameStats> {
    use rayon::prelude::*;
    (start..end)
        .into_par_iter()
        .map_init(
            || FrameDecoder::build(plan),
            |decoder, idx| eval_frame(plan, decoder, p, idx),
        )
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn eval_chunk_parallel(plan: &SimPlan, p: f64, start: u64, end: u64) -> Vec<FrameStats> {
    eval_chunk(plan, p, start, end, false)
}

fn montecarlo_point(plan: &SimPlan, p: f64, parallel: bool) -> PPointResult {
    let start_time = Instant::now();
    let mut frames: u64 = 0;
    let mut errors: u64 = 0;
    let mut n_osd: u64 = 0;
    let mut n_g: u64 = 0;
    let mut done: u64 = 0;
    'outer: while done < plan.max_frames && errors < plan.target_errors {
        let end = (done + FRAME_CHUNK).min(plan.max_frames);
        let stats = eval_chunk(plan, p, done, end, parallel);
        for (offset, st) in stats.iter().enumerate() {
            frames = done + offset as u64 + 1;
            n_osd += u64::from(st.osd_invoked);
            n_g += st.guesses;
            if st.failed {
                errors += 1;
                if errors == plan.target_errors {
                    break 'outer;
                }
            }
        }
        done = end;
    }

    let avg_cost = if frames == 0 {
        0.0
    } else {
        point_cost(plan, frames, n_osd, n_g)
    };
    PPointResult {
        p,
        frames,
        logical_errors: errors,
        ler: if frames == 0 {
            0.0
        } else {
            errors as f64 / frames as f64
        },
        avg_cost,
        wall_seconds: start_time.elapsed().as_secs_f64(),
    }
}

/// Cost-model parameters of a code under a decoder config, with the measured
/// counters filled in.
pub fn cost_params_for(code: &CssCode, cfg: &DecoderConfig, n_mc: u64, n_osd: u64, n_g: u64) -> CostParams {
    let r = code.h_x.rank() as u64;
    CostParams {
        n: code.n as u64,
        r,
        k0: code.n as u64 - r,
        n_e: code.h_x.count_ones() as u64,
        q: DEFAULT_QUANTIZATION_BITS,
        n_iter: u64::from(cfg.n_iter),
        lambda: cfg.lambda as u64,
        n_mc,
        n_osd,
        n_g,
    }
}

fn point_cost(plan: &SimPlan, frames: u64, n_osd: u64, n_g: u64) -> f64 {
    let params = cost_params_for(&plan.code, &plan.cfg, frames, n_osd, n_g);
    match plan.decoder {
        DecoderKind::QGrand => params.qgrand_avg(),
        DecoderKind::BpOsd => params.bp_osd_avg(),
        DecoderKind::BddAnalytic => 0.0,
    }
}

fn run_montecarlo_impl(plan: &SimPlan, parallel: bool) -> Result<SimResult, SimError> {
    plan.validate()?;
    let mut points = Vec::with_capacity(plan.p_grid.len());
    for &p in &plan.p_grid {
        let point = match plan.decoder {
            DecoderKind::BddAnalytic => {
                // Analytic: no frames are drawn; the LER is exact.
                let t_x = plan.code.t_x().expect("validated");
                let ler = crate::decoder::bdd_ler(plan.code.n, t_x, p)?;
                PPointResult {
                    p,
                    frames: 0,
                    logical_errors: 0,
                    ler,
                    avg_cost: 0.0,
                    wall_seconds: 0.0,
                }
            }
            _ => montecarlo_point(plan, p, parallel),
        };
        points.push(point);
    }
    Ok(SimResult { points })
}

/// Runs the Monte Carlo campaign; parallel over frames when the `parallel`
/// feature is enabled.
pub fn run_montecarlo(plan: &SimPlan) -> Result<SimResult, SimError> {
    run_montecarlo_impl(plan, cfg!(feature = "parallel"))
}

/// Single-threaded variant; bit-identical results to [`run_montecarlo`]
/// except for wall-clock timings.
pub fn run_montecarlo_sequential(plan: &SimPlan) -> Result<SimResult, SimError> {
    run_montecarlo_impl(plan, false)
}

/// Largest code length accepted by the exact oracle (2^n error patterns).
pub const EXACT_LER_MAX_N: usize = 20;

fn exact_ler_impl(
    code: &CssCode,
    decoder: DecoderKind,
    cfg: &DecoderConfig,
    p: f64,
    parallel: bool,
) -> Result<f64, SimError> {
    if code.n > EXACT_LER_MAX_N {
        return Err(SimError::TooLarge {
            n: code.n,
            max: EXACT_LER_MAX_N,
        });
    }
    if decoder == DecoderKind::BddAnalytic {
        return Err(SimError::IncompatibleDecoder(
            "the exact oracle enumerates syndrome decoders".into(),
        ));
    }
    if !(0.0..0.5).contains(&p) {
        return Err(SimError::BadPlan(format!("p = {p} outside [0, 1/2)")));
    }
    let n = code.n;
    let total: u64 = 1 << n;
    let plan = SimPlan {
        code: code.clone(),
        decoder,
        cfg: *cfg,
        p_grid: vec![],
        target_errors: 1,
        max_frames: 0,
        seed: 0,
        count_abstain_as_error: true,
    };

    let fail_by_weight = if parallel {
        exact_chunks_parallel(&plan, total)
    } else {
        exact_chunk(&plan, 0, total)
    };

    // Tail-first accumulation: the w-heavy terms are the smallest for
    // p < 1/2, so adding them first limits cancellation.
    let q = 1.0 - p;
    let mut ler = 0.0f64;
    for w in (0..=n).rev() {
        if fail_by_weight[w] > 0 {
            ler += fail_by_weight[w] as f64 * p.powi(w as i32) * q.powi((n - w) as i32);
        }
    }
    Ok(ler)
}

/// Failure counts per error weight over one index range, with a per-chunk
/// syndrome->decode cache (corrections depend only on the syndrome).
fn exact_chunk(plan: &SimPlan, start: u64, end: u64) -> Vec<u64> {
    use std::collections::HashMap;
    let n = plan.code.n;
    let decoder = FrameDecoder::build(plan);
    let mut cache: HashMap<Vec<u64>, (BitVector, bool)> = HashMap::new();
    let mut fail_by_weight = vec![0u64; n + 1];
    let mut e = BitVector::zeros(n);
    for bits in start..end {
        for i in 0..n {
            e.set(i, (bits >> i) & 1 == 1);
        }
        let s = plan.code.h_x.matvec(&e).expect("length fixed");
        let key = s.words().to_vec();
        let (correction, converged) = cache
            .entry(key)
            .or_insert_with(|| {
                let (c, conv, _, _) = decoder.run(&s);
                (c, conv)
            })
            .clone();
        let failed = if converged {
            residual_is_logical(&plan.code, &e, &correction).expect("syndromes match")
        } else {
            true
        };
        if failed {
            fail_by_weight[e.weight()] += 1;
        }
    }
    fail_by_weight
}

#[cfg(feature = "parallel")]
fn exact_chunks_parallel(plan: &SimPlan, total: u64) -> Vec<u64> {
    use rayon::prelude::*;
    let n = plan.code.n;
    let chunks: u64 = 64;
    let step = total.div_ceil(chunks);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * step;
            let end = ((c + 1) * step).min(total);
            if start >= end {
                vec![0u64; n + 1]
            } else {
                exact_chunk(plan, start, end)
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
fn exact_chunks_parallel(plan: &SimPlan, total: u64) -> Vec<u64> {
    exact_chunk(plan, 0, total)
}

/// Exact logical error rate of a deterministic decoder by enumerating all
/// 2^n error patterns: sum over failing e of p^wt(e) (1-p)^(n-wt(e)).
pub fn exact_ler(
    code: &CssCode,
    decoder: DecoderKind,
    cfg: &DecoderConfig,
    p: f64,
) -> Result<f64, SimError> {
    exact_ler_impl(code, decoder, cfg, p, cfg!(feature = "parallel"))
}

/// Single-threaded variant of [`exact_ler`]; identical results.
pub fn exact_ler_sequential(
    code: &CssCode,
    decoder: DecoderKind,
    cfg: &DecoderConfig,
    p: f64,
) -> Result<f64, SimError> {
    exact_ler_impl(code, decoder, cfg, p, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::assemble_css;
    use crate::ilp::all_types_matrix;

    fn code_15() -> CssCode {
        let mut code = assemble_css(&all_types_matrix(4)).unwrap();
        code.compute_distances().unwrap();
        code
    }

    #[test]
    fn negligible_probability_no_errors() {
        let mut plan = SimPlan::new(code_15(), DecoderKind::QGrand, DecoderConfig::default());
        plan.p_grid = vec![1e-12];
        plan.max_frames = 10_000;
        let result = run_montecarlo(&plan).unwrap();
        assert_eq!(result.points[0].logical_errors, 0);
        assert_eq!(result.points[0].frames, 10_000);
    }

    #[test]
    fn same_seed_same_result() {
        let mut plan = SimPlan::new(code_15(), DecoderKind::QGrand, DecoderConfig::default());
        plan.p_grid = vec![0.02, 0.05];
        plan.max_frames = 5_000;
        plan.target_errors = 10;
        plan.seed = 7;
        let a = run_montecarlo(&plan).unwrap();
        let b = run_montecarlo(&plan).unwrap();
        for (x, y) in a.points.iter().zip(&b.points) {
            assert_eq!(x.frames, y.frames);
            assert_eq!(x.logical_errors, y.logical_errors);
            assert_eq!(x.ler, y.ler);
            assert_eq!(x.avg_cost, y.avg_cost);
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let mut plan = SimPlan::new(code_15(), DecoderKind::BpOsd, DecoderConfig {
            p: 0.03,
            lambda: 10,
            ..DecoderConfig::default()
        });
        plan.p_grid = vec![0.03];
        plan.max_frames = 3_000;
        plan.target_errors = 5;
        plan.seed = 11;
        let par = run_montecarlo(&plan).unwrap();
        let seq = run_montecarlo_sequential(&plan).unwrap();
        assert_eq!(par.points[0].frames, seq.points[0].frames);
        assert_eq!(par.points[0].logical_errors, seq.points[0].logical_errors);
        assert_eq!(par.points[0].avg_cost, seq.points[0].avg_cost);
    }

    #[test]
    fn exact_ler_zero_probability() {
        let code = code_15();
        let v = exact_ler(&code, DecoderKind::QGrand, &DecoderConfig::default(), 0.0).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn exact_ler_bounded_and_matches_sequential() {
        let code = code_15();
        let cfg = DecoderConfig {
            p: 0.01,
            max_query: 1 << 15,
            ..DecoderConfig::default()
        };
        let a = exact_ler(&code, DecoderKind::QGrand, &cfg, 0.01).unwrap();
        let b = exact_ler_sequential(&code, DecoderKind::QGrand, &cfg, 0.01).unwrap();
        assert_eq!(a, b);
        assert!((0.0..=1.0).contains(&a));
        assert!(a > 0.0);
    }

    #[test]
    fn exact_ler_guard() {
        let code = {
            let mut c = code_15();
            c.n = 21; // force past the guard
            c
        };
        assert!(matches!(
            exact_ler(&code, DecoderKind::QGrand, &DecoderConfig::default(), 0.01),
            Err(SimError::TooLarge { .. })
        ));
    }

    #[test]
    fn bdd_analytic_point() {
        let mut code = code_15();
        code.compute_distances().unwrap();
        let mut plan = SimPlan::new(code, DecoderKind::BddAnalytic, DecoderConfig::default());
        plan.p_grid = vec![0.01];
        let result = run_montecarlo(&plan).unwrap();
        let expected = crate::decoder::bdd_ler(15, 1, 0.01).unwrap();
        assert_eq!(result.points[0].ler, expected);
        assert_eq!(result.points[0].frames, 0);
    }

    #[test]
    fn weight_le_t_never_fails_for_qgrand() {
        // Minimum-weight decoding plus d_x = 3 means weight <= 1 errors give
        // residual weight <= 2 < d_x inside C_X, hence stabilizers.
        let code = code_15();
        let cfg = DecoderConfig {
            max_query: 1 << 15,
            ..DecoderConfig::default()
        };
        let dec = QgrandDecoder::new(&code.h_x, &cfg);
        let zero = BitVector::zeros(15);
        let out = dec.decode(&code.h_x.matvec(&zero).unwrap()).unwrap();
        assert!(!residual_is_logical(&code, &zero, &out.correction).unwrap());
        for j in 0..15 {
            let mut e = BitVector::zeros(15);
            e.set(j, true);
            let s = code.h_x.matvec(&e).unwrap();
            let out = dec.decode(&s).unwrap();
            assert!(out.converged);
            assert!(!residual_is_logical(&code, &e, &out.correction).unwrap());
        }
    }
}
