//! Feasibility search for even-weight triorthogonal matrices with a
//! prescribed dual minimum distance.
//!
//! A candidate generator matrix is described by a multiplicity vector `x`
//! counting how often each nonzero column type of `F_2^{k0}` appears. The
//! constraint system couples:
//!
//! - `L1`: the multiplicities sum to the length n,
//! - `O1`: every row weight and pairwise row overlap is even,
//! - `O2`: every triple row overlap is even,
//! - `W1`/`W2`: one-hot weight indicators delta consistent with the
//!   orthogonality-count matrix M (and no zero-weight row combination,
//!   i.e. full rank),
//! - `D=`/`D>=`: Krawtchouk sums forcing the dual weight distribution to
//!   vanish below the target distance and stay nonnegative above it.
//!
//! Because `W1`/`W2` make delta a deterministic function of `x`, the search
//! never touches a generic MILP engine: a depth-first scan over multiplicity
//! vectors derives and checks the rest at each leaf. An optional column-type
//! symmetry (a cyclic group generated by one invertible matrix) collapses the
//! variables to one per orbit.

use crate::analysis::{binomial, krawtchouk, AnalysisError};
use crate::gf2::{BitMatrix, BitVector};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IlpError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("orbit generator is singular")]
    SingularGenerator,
    #[error("witness failed verification")]
    UnverifiedWitness,
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Why a multiplicity vector admits no witness.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DeriveFailure {
    #[error("multiplicities are invalid: {0}")]
    BadInput(String),
    #[error("odd pair overlap at row ({a},{b}): {value}")]
    OddPairOverlap { a: usize, b: usize, value: u64 },
    #[error("odd triple overlap at row ({a},{b},{c}): {value}")]
    OddTripleOverlap { a: usize, b: usize, c: usize, value: u64 },
    #[error("row combination {combo} has weight zero (rank-deficient)")]
    ZeroWeightCombination { combo: usize },
    #[error("dual-distance constraint fails at ell = {ell}")]
    DualDistance { ell: usize },
}

/// The nonzero column types of F_2^{k0}, in increasing binary value.
///
/// Type index `i` (0-based) corresponds to the integer `i + 1` read with
/// coordinate 1 as the most significant bit.
#[derive(Clone, Debug)]
pub struct ColumnTypeSet {
    k0: usize,
    types: Vec<BitVector>,
}

impl ColumnTypeSet {
    pub fn new(k0: usize) -> Self {
        let n_types = (1usize << k0) - 1;
        let types = (1..=n_types).map(|t| type_vector(t, k0)).collect();
        Self { k0, types }
    }

    pub fn k0(&self) -> usize {
        self.k0
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn type_at(&self, index: usize) -> &BitVector {
        &self.types[index]
    }

    /// 0-based index of a nonzero type vector.
    pub fn index_of(&self, v: &BitVector) -> Option<usize> {
        let mut value = 0usize;
        for a in 0..self.k0 {
            value = (value << 1) | usize::from(v.get(a));
        }
        value.checked_sub(1)
    }
}

fn type_vector(value: usize, k0: usize) -> BitVector {
    let mut v = BitVector::zeros(k0);
    for a in 0..k0 {
        if (value >> (k0 - 1 - a)) & 1 == 1 {
            v.set(a, true);
        }
    }
    v
}

/// The k0 x (2^k0 - 1) matrix whose columns are all nonzero types, ascending.
pub fn all_types_matrix(k0: usize) -> BitMatrix {
    let n = (1usize << k0) - 1;
    let mut m = BitMatrix::zeros(k0, n);
    for (i, t) in (1..=n).enumerate() {
        for a in 0..k0 {
            if (t >> (k0 - 1 - a)) & 1 == 1 {
                m.set(a, i, true);
            }
        }
    }
    m
}

/// Constraint system for one (k0, n, d_perp) target.
#[derive(Clone, Debug)]
pub struct IlpInstance {
    k0: usize,
    n: usize,
    d_perp: usize,
    types: ColumnTypeSet,
    /// Incidence rows: bit j of row i set iff <v_i, v_j> = 0.
    m_rows: Vec<BitVector>,
    /// Pair rows, indexed by `pair_labels`.
    p_rows: Vec<BitVector>,
    pair_labels: Vec<(usize, usize)>,
    /// Triple rows, indexed by `triple_labels`.
    t_rows: Vec<BitVector>,
    triple_labels: Vec<(usize, usize, usize)>,
    /// kraw[ell][j] = K_ell(j; n), exact.
    kraw: Vec<Vec<i128>>,
}

/// A feasible assignment for an [`IlpInstance`].
///
/// `delta` has one row per column type combination and one column per weight
/// j in 1..=n (column j-1 holds the indicator for weight j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub x: Vec<u32>,
    pub z_p: Vec<u32>,
    pub z_t: Vec<u32>,
    pub delta: BitMatrix,
}

/// Per-constraint-family verification verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstraintReport {
    pub l1: bool,
    pub o1: bool,
    pub o2: bool,
    pub w1: bool,
    pub w2: bool,
    pub d_eq: bool,
    pub d_ge: bool,
}

impl ConstraintReport {
    pub fn all_pass(&self) -> bool {
        self.l1 && self.o1 && self.o2 && self.w1 && self.w2 && self.d_eq && self.d_ge
    }
}

impl std::fmt::Display for ConstraintReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = |b: bool| if b { "pass" } else { "FAIL" };
        write!(
            f,
            "L1:{} O1:{} O2:{} W1:{} W2:{} D=:{} D>=:{}",
            mark(self.l1),
            mark(self.o1),
            mark(self.o2),
            mark(self.w1),
            mark(self.w2),
            mark(self.d_eq),
            mark(self.d_ge)
        )
    }
}

/// Builds the constraint matrices and Krawtchouk table for (k0, n, d_perp).
pub fn build_instance(k0: usize, n: usize, d_perp: usize) -> Result<IlpInstance, IlpError> {
    if !(1..=12).contains(&k0) {
        return Err(IlpError::BadParameters(format!("k0 = {k0} outside 1..=12")));
    }
    if !(1..=81).contains(&n) {
        return Err(IlpError::BadParameters(format!("n = {n} outside 1..=81")));
    }
    if !(1..=n).contains(&d_perp) {
        return Err(IlpError::BadParameters(format!("d_perp = {d_perp} outside 1..={n}")));
    }
    let types = ColumnTypeSet::new(k0);
    let n_types = types.len();

    let mut m_rows = vec![BitVector::zeros(n_types); n_types];
    for i in 0..n_types {
        for j in 0..n_types {
            if ((i + 1) & (j + 1)).count_ones() % 2 == 0 {
                m_rows[i].set(j, true);
            }
        }
    }

    let coord = |t: usize, a: usize| (t >> (k0 - a)) & 1 == 1; // a is 1-based
    let mut pair_labels = Vec::new();
    let mut p_rows = Vec::new();
    for a in 1..=k0 {
        for b in a..=k0 {
            let mut row = BitVector::zeros(n_types);
            for i in 0..n_types {
                if coord(i + 1, a) && coord(i + 1, b) {
                    row.set(i, true);
                }
            }
            pair_labels.push((a, b));
            p_rows.push(row);
        }
    }

    let mut triple_labels = Vec::new();
    let mut t_rows = Vec::new();
    for a in 1..=k0 {
        for b in a + 1..=k0 {
            for c in b + 1..=k0 {
                let mut row = BitVector::zeros(n_types);
                for i in 0..n_types {
                    if coord(i + 1, a) && coord(i + 1, b) && coord(i + 1, c) {
                        row.set(i, true);
                    }
                }
                triple_labels.push((a, b, c));
                t_rows.push(row);
            }
        }
    }

    let mut kraw = Vec::with_capacity(n + 1);
    for ell in 0..=n {
        let mut row = Vec::with_capacity(n + 1);
        for j in 0..=n {
            row.push(krawtchouk(ell, j, n)?);
        }
        kraw.push(row);
    }

    Ok(IlpInstance {
        k0,
        n,
        d_perp,
        types,
        m_rows,
        p_rows,
        pair_labels,
        t_rows,
        triple_labels,
        kraw,
    })
}

impl IlpInstance {
    pub fn k0(&self) -> usize {
        self.k0
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_perp(&self) -> usize {
        self.d_perp
    }

    pub fn num_types(&self) -> usize {
        self.types.len()
    }

    pub fn types(&self) -> &ColumnTypeSet {
        &self.types
    }

    pub fn pair_labels(&self) -> &[(usize, usize)] {
        &self.pair_labels
    }

    pub fn triple_labels(&self) -> &[(usize, usize, usize)] {
        &self.triple_labels
    }

    /// Integer product of a 0/1 constraint row with the multiplicity vector.
    fn row_dot(row: &BitVector, x: &[u32]) -> u64 {
        row.iter_ones().map(|j| u64::from(x[j])).sum()
    }

    pub fn p_times(&self, x: &[u32]) -> Vec<u64> {
        self.p_rows.iter().map(|r| Self::row_dot(r, x)).collect()
    }

    pub fn t_times(&self, x: &[u32]) -> Vec<u64> {
        self.t_rows.iter().map(|r| Self::row_dot(r, x)).collect()
    }

    pub fn m_times(&self, x: &[u32]) -> Vec<u64> {
        // Bit-plane decomposition: x_j = sum_b 2^b bit_b(x_j) turns each
        // integer dot into a handful of AND+popcount passes.
        let n_types = self.types.len();
        let max = x.iter().copied().max().unwrap_or(0);
        let bits = 64 - u64::from(max).leading_zeros() as usize;
        let mut planes = Vec::with_capacity(bits);
        for b in 0..bits {
            let mut plane = BitVector::zeros(n_types);
            for (j, &v) in x.iter().enumerate() {
                if (v >> b) & 1 == 1 {
                    plane.set(j, true);
                }
            }
            planes.push(plane);
        }
        self.m_rows
            .iter()
            .map(|row| {
                planes
                    .iter()
                    .enumerate()
                    .map(|(b, plane)| (row.overlap(plane) as u64) << b)
                    .sum()
            })
            .collect()
    }
}

/// Completes a multiplicity vector into a full witness, or explains why the
/// vector admits none.
///
/// `z_P` and `z_T` are the halved overlap counts (failing on odd parity);
/// delta is the one-hot indicator of each row-combination weight
/// n - [Mx]_i, failing if any weight is zero; the Krawtchouk conditions are
/// then evaluated directly.
pub fn derive_witness(inst: &IlpInstance, x: &[u32]) -> Result<Witness, DeriveFailure> {
    let n_types = inst.types.len();
    if x.len() != n_types {
        return Err(DeriveFailure::BadInput(format!(
            "expected {n_types} multiplicities, got {}",
            x.len()
        )));
    }
    let total: u64 = x.iter().map(|&v| u64::from(v)).sum();
    if total != inst.n as u64 {
        return Err(DeriveFailure::BadInput(format!(
            "multiplicities sum to {total}, need {}",
            inst.n
        )));
    }

    let mut z_p = Vec::with_capacity(inst.p_rows.len());
    for (row, &(a, b)) in inst.p_rows.iter().zip(&inst.pair_labels) {
        let value = IlpInstance::row_dot(row, x);
        if value % 2 != 0 {
            return Err(DeriveFailure::OddPairOverlap { a, b, value });
        }
        z_p.push((value / 2) as u32);
    }

    let mut z_t = Vec::with_capacity(inst.t_rows.len());
    for (row, &(a, b, c)) in inst.t_rows.iter().zip(&inst.triple_labels) {
        let value = IlpInstance::row_dot(row, x);
        if value % 2 != 0 {
            return Err(DeriveFailure::OddTripleOverlap { a, b, c, value });
        }
        z_t.push((value / 2) as u32);
    }

    let mx = inst.m_times(x);
    let mut weights = Vec::with_capacity(n_types);
    for (i, &m) in mx.iter().enumerate() {
        let w = inst.n as u64 - m;
        if w == 0 {
            return Err(DeriveFailure::ZeroWeightCombination { combo: i });
        }
        weights.push(w as usize);
    }

    // Weight histogram of the nonzero row combinations.
    let mut counts = vec![0i128; inst.n + 1];
    for &w in &weights {
        counts[w] += 1;
    }
    for ell in 1..=inst.n {
        let sum: i128 = (1..=inst.n)
            .filter(|&j| counts[j] != 0)
            .map(|j| counts[j] * inst.kraw[ell][j])
            .sum();
        let bound = -(binomial(inst.n, ell) as i128);
        let ok = if ell < inst.d_perp {
            sum == bound
        } else {
            sum >= bound
        };
        if !ok {
            return Err(DeriveFailure::DualDistance { ell });
        }
    }

    let mut delta = BitMatrix::zeros(n_types, inst.n);
    for (i, &w) in weights.iter().enumerate() {
        delta.set(i, w - 1, true);
    }
    Ok(Witness { x: x.to_vec(), z_p, z_t, delta })
}

/// Checks every constraint family of a witness against an instance.
pub fn verify_witness(inst: &IlpInstance, w: &Witness) -> Result<ConstraintReport, IlpError> {
    let n_types = inst.types.len();
    if w.x.len() != n_types
        || w.z_p.len() != inst.p_rows.len()
        || w.z_t.len() != inst.t_rows.len()
        || w.delta.rows() != n_types
        || w.delta.cols() != inst.n
    {
        return Err(IlpError::ShapeMismatch(format!(
            "witness shapes do not match a (k0={}, n={}) instance",
            inst.k0, inst.n
        )));
    }

    let l1 = w.x.iter().map(|&v| u64::from(v)).sum::<u64>() == inst.n as u64;
    let o1 = inst
        .p_times(&w.x)
        .iter()
        .zip(&w.z_p)
        .all(|(&px, &z)| px == 2 * u64::from(z));
    let o2 = inst
        .t_times(&w.x)
        .iter()
        .zip(&w.z_t)
        .all(|(&tx, &z)| tx == 2 * u64::from(z));
    let w1 = (0..n_types).all(|i| w.delta.row(i).weight() == 1);
    let mx = inst.m_times(&w.x);
    let w2 = (0..n_types).all(|i| {
        let j_sum: u64 = w.delta.row(i).iter_ones().map(|c| (c + 1) as u64).sum();
        j_sum + mx[i] == inst.n as u64
    });

    let mut d_eq = true;
    let mut d_ge = true;
    for ell in 1..=inst.n {
        let mut sum: i128 = 0;
        for i in 0..n_types {
            for c in w.delta.row(i).iter_ones() {
                sum += inst.kraw[ell][c + 1];
            }
        }
        let bound = -(binomial(inst.n, ell) as i128);
        if ell < inst.d_perp {
            d_eq &= sum == bound;
        } else {
            d_ge &= sum >= bound;
        }
    }

    Ok(ConstraintReport { l1, o1, o2, w1, w2, d_eq, d_ge })
}

/// Builds the generator matrix of a verified witness: column type i repeated
/// x_i times, ordered by increasing type index.
pub fn extract_matrix(inst: &IlpInstance, w: &Witness) -> Result<BitMatrix, IlpError> {
    if !verify_witness(inst, w)?.all_pass() {
        return Err(IlpError::UnverifiedWitness);
    }
    let mut cols = Vec::with_capacity(inst.n);
    for (i, &count) in w.x.iter().enumerate() {
        for _ in 0..count {
            cols.push(i);
        }
    }
    let mut m = BitMatrix::zeros(inst.k0, inst.n);
    for (col, &type_idx) in cols.iter().enumerate() {
        let t = inst.types.type_at(type_idx);
        for a in 0..inst.k0 {
            if t.get(a) {
                m.set(a, col, true);
            }
        }
    }
    Ok(m)
}

/// Orbits of the column types under the cyclic group generated by one
/// invertible matrix.
#[derive(Clone, Debug)]
pub struct OrbitSpec {
    pub generator: BitMatrix,
    /// Type-index orbits, each sorted ascending, ordered by smallest member.
    pub orbits: Vec<Vec<usize>>,
}

/// Generator of the cyclic coordinate shift on F_2^{k0}.
pub fn cyclic_shift_generator(k0: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(k0, k0);
    for a in 0..k0 {
        m.set(a, (a + k0 - 1) % k0, true);
    }
    m
}

/// Partitions the nonzero types into cycles of v -> generator * v.
pub fn orbit_partition(k0: usize, generator: &BitMatrix) -> Result<OrbitSpec, IlpError> {
    if generator.rows() != k0 || generator.cols() != k0 {
        return Err(IlpError::ShapeMismatch(format!(
            "generator must be {k0}x{k0}, got {}x{}",
            generator.rows(),
            generator.cols()
        )));
    }
    if generator.rank() != k0 {
        return Err(IlpError::SingularGenerator);
    }
    let types = ColumnTypeSet::new(k0);
    let n_types = types.len();
    let mut image = vec![0usize; n_types];
    for i in 0..n_types {
        let mapped = generator
            .matvec(types.type_at(i))
            .expect("square generator");
        image[i] = types
            .index_of(&mapped)
            .expect("invertible map keeps types nonzero");
    }
    let mut seen = vec![false; n_types];
    let mut orbits = Vec::new();
    for start in 0..n_types {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            orbit.push(cur);
            cur = image[cur];
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    Ok(OrbitSpec {
        generator: generator.clone(),
        orbits,
    })
}

/// Node and wall-clock limits for the search.
#[derive(Clone, Copy, Debug, Default)]
pub struct SolveBudget {
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolverOptions {
    /// Per-variable multiplicity cap; defaults to n.
    pub cap: Option<u32>,
    pub budget: SolveBudget,
}

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Feasible(Witness),
    Infeasible,
    BudgetExhausted,
}

impl SolveOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SolveOutcome::Feasible(w) => Some(w),
            _ => None,
        }
    }
}

struct SearchCtx<'a> {
    inst: &'a IlpInstance,
    /// (orbit member lists, orbit size) in branch order.
    vars: Vec<(&'a [usize], u64)>,
    cap: u32,
    /// suffix_capacity[v] = max mass assignable to variables v..
    suffix_capacity: Vec<u64>,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    started: Instant,
    budget_hit: bool,
    x: Vec<u32>,
}

impl SearchCtx<'_> {
    fn out_of_budget(&mut self) -> bool {
        if self.budget_hit {
            return true;
        }
        if self.nodes > self.max_nodes {
            self.budget_hit = true;
            return true;
        }
        if let Some(deadline) = self.deadline {
            if self.nodes % 4096 == 0 && Instant::now() >= deadline {
                self.budget_hit = true;
                return true;
            }
        }
        false
    }

    fn dfs(&mut self, var: usize, assigned: u64) -> Option<Witness> {
        if var == self.vars.len() {
            debug_assert_eq!(assigned, self.inst.n as u64);
            return derive_witness(self.inst, &self.x).ok();
        }
        let (members, size) = self.vars[var];
        let remaining_after = self.suffix_capacity[var + 1];
        let need = self.inst.n as u64 - assigned;
        // Values outside [lo, hi] either overshoot n or leave the suffix
        // unable to reach it.
        let lo = need.saturating_sub(remaining_after).div_ceil(size);
        let hi = (u64::from(self.cap)).min(need / size);
        if lo > hi {
            return None;
        }
        for value in lo..=hi {
            self.nodes += 1;
            if self.out_of_budget() {
                return None;
            }
            for &m in members {
                self.x[m] = value as u32;
            }
            if let Some(w) = self.dfs(var + 1, assigned + value * size) {
                return Some(w);
            }
        }
        for &m in members {
            self.x[m] = 0;
        }
        None
    }
}

/// Depth-first feasibility search over multiplicity vectors.
///
/// With an orbit spec, one variable drives each orbit (x constant on the
/// orbit); without, every type is its own variable. Branching is
/// deterministic: orbits descending by size (ties by smallest member),
/// values ascending, so identical inputs and budgets always reproduce the
/// same outcome. Exhausting the tree yields `Infeasible`; hitting the node
/// or time budget yields `BudgetExhausted`, never conflated.
pub fn solve(
    inst: &IlpInstance,
    orbit: Option<&OrbitSpec>,
    opts: &SolverOptions,
) -> SolveOutcome {
    let singleton_orbits: Vec<Vec<usize>>;
    let orbit_lists: &[Vec<usize>] = match orbit {
        Some(spec) => &spec.orbits,
        None => {
            singleton_orbits = (0..inst.types.len()).map(|i| vec![i]).collect();
            &singleton_orbits
        }
    };
    let mut vars: Vec<(&[usize], u64)> = orbit_lists
        .iter()
        .map(|o| (o.as_slice(), o.len() as u64))
        .collect();
    // Large orbits first: they constrain the length sum fastest.
    vars.sort_by(|a, b| b.1.cmp(&a.1).then(a.0[0].cmp(&b.0[0])));

    let mut cap = opts.cap.unwrap_or(inst.n as u32).min(inst.n as u32);
    if inst.d_perp >= 3 {
        // A duplicated column type yields a weight-2 dual codeword: the dual
        // distribution satisfies B_2 = sum_i C(x_i, 2), which `D=` forces to
        // zero whenever d_perp >= 3. Capping at 1 prunes only infeasible
        // branches.
        cap = cap.min(1);
    }

    let mut suffix_capacity = vec![0u64; vars.len() + 1];
    for v in (0..vars.len()).rev() {
        suffix_capacity[v] = suffix_capacity[v + 1] + vars[v].1 * u64::from(cap);
    }

    let mut ctx = SearchCtx {
        inst,
        vars,
        cap,
        suffix_capacity,
        nodes: 0,
        max_nodes: opts.budget.max_nodes.unwrap_or(u64::MAX),
        deadline: opts
            .budget
            .max_seconds
            .map(|s| Instant::now() + std::time::Duration::from_secs_f64(s)),
        started: Instant::now(),
        budget_hit: false,
        x: vec![0; inst.types.len()],
    };
    let _ = ctx.started;

    match ctx.dfs(0, 0) {
        Some(w) => SolveOutcome::Feasible(w),
        None if ctx.budget_hit => SolveOutcome::BudgetExhausted,
        None => SolveOutcome::Infeasible,
    }
}
