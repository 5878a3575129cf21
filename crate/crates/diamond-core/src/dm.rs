//! Brute-force finite-alphabet evaluation of the joint and separate
//! transmission rate expressions.
//!
//! This module is the ground-truth oracle for the closed forms elsewhere in
//! the crate: rates are computed directly from probability-mass-function
//! tensors, with the input distributions searched on a grid. It is built for
//! validation at tiny alphabet sizes, not production sweeps.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fp;
use crate::info::Bits;
use crate::opt::{maximize_min, GridConfig, MaxMinProblem, OptResult};
use crate::FEAS_TOL;

/// Largest alphabet the brute-force optimizers accept per variable.
pub const MAX_ORACLE_ALPHABET: usize = 4;
/// Largest number of free policy coordinates the brute-force optimizers grid.
pub const MAX_ORACLE_DIM: usize = 10;

const PMF_SUM_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Probability containers
// ---------------------------------------------------------------------------

/// A probability mass function over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePmf {
    probs: Vec<f64>,
}

impl FinitePmf {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Domain(alloc::format!("empty pmf")));
        }
        let mut sum = 0.0;
        for &p in &probs {
            if !(p >= 0.0) {
                return Err(Error::Domain(alloc::format!("negative pmf entry {p}")));
            }
            sum += p;
        }
        if fp::abs(sum - 1.0) > PMF_SUM_TOL {
            return Err(Error::Domain(alloc::format!("pmf sums to {sum}, not 1")));
        }
        Ok(FinitePmf { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A conditional pmf: one row (a [`FinitePmf`] over `out_size` outcomes) per
/// conditioning tuple, stored dense and row-major over the conditioning
/// dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct CondPmf {
    cond_dims: Vec<usize>,
    out_size: usize,
    rows: Vec<f64>,
}

impl CondPmf {
    pub fn new(cond_dims: Vec<usize>, out_size: usize, rows: Vec<f64>) -> Result<Self> {
        if out_size == 0 || cond_dims.iter().any(|&d| d == 0) {
            return Err(Error::Domain(alloc::format!("zero-sized alphabet")));
        }
        let num_rows: usize = cond_dims.iter().product();
        if rows.len() != num_rows * out_size {
            return Err(Error::Domain(alloc::format!(
                "expected {} row entries, got {}",
                num_rows * out_size,
                rows.len()
            )));
        }
        for r in 0..num_rows {
            let row = &rows[r * out_size..(r + 1) * out_size];
            let mut sum = 0.0;
            for &p in row {
                if !(p >= 0.0) {
                    return Err(Error::Domain(alloc::format!(
                        "negative entry {p} in row {r}"
                    )));
                }
                sum += p;
            }
            if fp::abs(sum - 1.0) > PMF_SUM_TOL {
                return Err(Error::Domain(alloc::format!(
                    "row {r} sums to {sum}, not 1"
                )));
            }
        }
        Ok(CondPmf {
            cond_dims,
            out_size,
            rows,
        })
    }

    pub fn cond_dims(&self) -> &[usize] {
        &self.cond_dims
    }

    pub fn out_size(&self) -> usize {
        self.out_size
    }

    /// Row for a conditioning tuple, indexed in the order of `cond_dims`.
    pub fn row(&self, cond: &[usize]) -> &[f64] {
        debug_assert_eq!(cond.len(), self.cond_dims.len());
        let mut idx = 0;
        for (c, d) in cond.iter().zip(&self.cond_dims) {
            debug_assert!(c < d);
            idx = idx * d + c;
        }
        &self.rows[idx * self.out_size..(idx + 1) * self.out_size]
    }

    pub(crate) fn flat_rows(&self) -> &[f64] {
        &self.rows
    }
}

/// A joint pmf over several finite variables, stored as a dense row-major
/// tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    dims: Vec<usize>,
    probs: Vec<f64>,
}

impl JointPmf {
    pub fn new(dims: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(Error::Domain(alloc::format!("invalid tensor dims")));
        }
        let cells: usize = dims.iter().product();
        if probs.len() != cells {
            return Err(Error::Domain(alloc::format!(
                "expected {cells} cells, got {}",
                probs.len()
            )));
        }
        Ok(JointPmf { dims, probs })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

// ---------------------------------------------------------------------------
// Conditional mutual information from a joint pmf
// ---------------------------------------------------------------------------

/// Conditional mutual information I(A; B | C) in bits from a joint pmf.
///
/// `group_a`, `group_b`, and `cond` are disjoint axis lists of the tensor;
/// axes in none of the groups are marginalized out. Uses 0·log 0 = 0. The
/// joint must be normalized within 1e-9.
pub fn mutual_information(
    joint: &JointPmf,
    group_a: &[usize],
    group_b: &[usize],
    cond: &[usize],
) -> Result<Bits> {
    let dims = &joint.dims;
    let n_axes = dims.len();
    if group_a.is_empty() || group_b.is_empty() {
        return Err(Error::Domain(alloc::format!("empty variable group")));
    }
    let mut seen = vec![false; n_axes];
    for &ax in group_a.iter().chain(group_b).chain(cond) {
        if ax >= n_axes {
            return Err(Error::Domain(alloc::format!("axis {ax} out of range")));
        }
        if seen[ax] {
            return Err(Error::Domain(alloc::format!("axis {ax} listed twice")));
        }
        seen[ax] = true;
    }

    // packed strides: each axis contributes to at most one of the A/B/C
    // marginal indices
    let packed = |axes: &[usize]| -> (usize, Vec<usize>) {
        let mut strides = vec![0usize; n_axes];
        let mut size = 1usize;
        for &ax in axes.iter().rev() {
            strides[ax] = size;
            size *= dims[ax];
        }
        (size, strides)
    };
    let (na, sa) = packed(group_a);
    let (nb, sb) = packed(group_b);
    let (nc, sc) = packed(cond);

    let mut p_abc = vec![0.0; na * nb * nc];
    let mut p_ac = vec![0.0; na * nc];
    let mut p_bc = vec![0.0; nb * nc];
    let mut p_c = vec![0.0; nc];

    let mut digits = vec![0usize; n_axes];
    let (mut ia, mut ib, mut ic) = (0usize, 0usize, 0usize);
    let mut total = 0.0;
    for &p in &joint.probs {
        if !(p >= 0.0) {
            return Err(Error::Domain(alloc::format!("negative joint entry {p}")));
        }
        total += p;
        p_abc[(ia * nb + ib) * nc + ic] += p;
        p_ac[ia * nc + ic] += p;
        p_bc[ib * nc + ic] += p;
        p_c[ic] += p;
        // advance odometer, last axis fastest
        for ax in (0..n_axes).rev() {
            digits[ax] += 1;
            if digits[ax] < dims[ax] {
                ia += sa[ax];
                ib += sb[ax];
                ic += sc[ax];
                break;
            }
            digits[ax] = 0;
            ia -= sa[ax] * (dims[ax] - 1);
            ib -= sb[ax] * (dims[ax] - 1);
            ic -= sc[ax] * (dims[ax] - 1);
        }
    }
    if fp::abs(total - 1.0) > PMF_SUM_TOL {
        return Err(Error::Domain(alloc::format!(
            "joint pmf sums to {total}, not 1"
        )));
    }

    let mut mi = 0.0;
    for a in 0..na {
        for b in 0..nb {
            for c in 0..nc {
                let p = p_abc[(a * nb + b) * nc + c];
                if p > 0.0 {
                    let ratio = (p * p_c[c]) / (p_ac[a * nc + c] * p_bc[b * nc + c]);
                    mi += p * fp::log2(ratio);
                }
            }
        }
    }
    Ok(Bits::clamped(mi))
}

// ---------------------------------------------------------------------------
// Channel description
// ---------------------------------------------------------------------------

/// An expected-cost constraint on the relay-2 input: Σ p(x₂)·cost(x₂) ≤ budget.
#[derive(Debug, Clone, PartialEq)]
pub struct CostConstraint {
    /// Cost of each X₂ letter.
    pub values: Vec<f64>,
    pub budget: f64,
}

/// Finite-alphabet description of the two-relay channel: state distribution
/// p(s), transition rows p(y | x₁, x₂, s), digital link capacities, and an
/// optional input cost constraint.
#[derive(Debug, Clone)]
pub struct DmChannelSpec {
    ns: usize,
    nx1: usize,
    nx2: usize,
    ny: usize,
    state_pmf: FinitePmf,
    channel: CondPmf,
    c1: Bits,
    c2: Bits,
    cost: Option<CostConstraint>,
}

impl DmChannelSpec {
    /// `channel` rows are conditioned on (x₁, x₂, s) in that order.
    pub fn new(
        state_pmf: FinitePmf,
        nx1: usize,
        nx2: usize,
        channel: CondPmf,
        c1: Bits,
        c2: Bits,
        cost: Option<CostConstraint>,
    ) -> Result<Self> {
        let ns = state_pmf.len();
        if nx1 == 0 || nx2 == 0 {
            return Err(Error::Domain(alloc::format!("zero-sized input alphabet")));
        }
        if channel.cond_dims() != [nx1, nx2, ns] {
            return Err(Error::Domain(alloc::format!(
                "channel rows must be conditioned on (x1, x2, s) = ({nx1}, {nx2}, {ns})"
            )));
        }
        if let Some(c) = &cost {
            if c.values.len() != nx2 {
                return Err(Error::Domain(alloc::format!(
                    "cost table has {} entries, expected {nx2}",
                    c.values.len()
                )));
            }
        }
        let ny = channel.out_size();
        Ok(DmChannelSpec {
            ns,
            nx1,
            nx2,
            ny,
            state_pmf,
            channel,
            c1,
            c2,
            cost,
        })
    }

    pub fn ns(&self) -> usize {
        self.ns
    }
    pub fn nx1(&self) -> usize {
        self.nx1
    }
    pub fn nx2(&self) -> usize {
        self.nx2
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn state_pmf(&self) -> &FinitePmf {
        &self.state_pmf
    }
    pub fn channel(&self) -> &CondPmf {
        &self.channel
    }
    pub fn c1(&self) -> Bits {
        self.c1
    }
    pub fn c2(&self) -> Bits {
        self.c2
    }
    pub fn cost(&self) -> Option<&CostConstraint> {
        self.cost.as_ref()
    }

    fn check_oracle_limits(&self) -> Result<()> {
        for (name, size) in [
            ("S", self.ns),
            ("X1", self.nx1),
            ("X2", self.nx2),
            ("Y", self.ny),
        ] {
            if size > MAX_ORACLE_ALPHABET {
                return Err(Error::Config(alloc::format!(
                    "alphabet {name} has {size} letters, oracle limit is {MAX_ORACLE_ALPHABET}"
                )));
            }
        }
        Ok(())
    }
}

/// Bound values and feasibility flags for one input policy.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyEval {
    /// The three bracketed bound values, in the order they appear in the
    /// rate expression.
    pub bounds: [f64; 3],
    /// Common-link constraint C₁ ≥ I(·; S).
    pub link1_ok: bool,
    /// Sum-link constraint C₁ + C₂ ≥ I(·; S).
    pub link_sum_ok: bool,
    /// Expected-cost constraint (true when no cost is configured).
    pub cost_ok: bool,
}

impl PolicyEval {
    pub fn feasible(&self) -> bool {
        self.link1_ok && self.link_sum_ok && self.cost_ok
    }

    pub fn min_bound(&self) -> f64 {
        self.bounds[0].min(self.bounds[1]).min(self.bounds[2])
    }
}

// ---------------------------------------------------------------------------
// Joint transmission (the capacity expression)
// ---------------------------------------------------------------------------

fn theorem1_core(spec: &DmChannelSpec, policy_rows: &[f64]) -> Result<PolicyEval> {
    let (ns, nx1, nx2, ny) = (spec.ns, spec.nx1, spec.nx2, spec.ny);
    let k = nx1 * nx2;
    debug_assert_eq!(policy_rows.len(), ns * k);

    // joint over (S, X1, X2, Y)
    let mut probs = vec![0.0; ns * k * ny];
    let mut cost_mean = 0.0;
    let cost_values = spec.cost.as_ref().map(|c| c.values.as_slice());
    for s in 0..ns {
        let ps = spec.state_pmf.probs()[s];
        for x1 in 0..nx1 {
            for x2 in 0..nx2 {
                let p_in = ps * policy_rows[s * k + x1 * nx2 + x2];
                if let Some(cv) = cost_values {
                    cost_mean += p_in * cv[x2];
                }
                if p_in > 0.0 {
                    let w = spec.channel.row(&[x1, x2, s]);
                    let base = ((s * nx1 + x1) * nx2 + x2) * ny;
                    for y in 0..ny {
                        probs[base + y] = p_in * w[y];
                    }
                }
            }
        }
    }
    let joint = JointPmf::new(vec![ns, nx1, nx2, ny], probs)?;

    let i_x1x2_s = mutual_information(&joint, &[1, 2], &[0], &[])?.value();
    let i_x1_s = mutual_information(&joint, &[1], &[0], &[])?.value();
    let i_x2_y = mutual_information(&joint, &[2], &[3], &[1, 0])?.value();
    let i_x1x2_y = mutual_information(&joint, &[1, 2], &[3], &[0])?.value();

    let c1 = spec.c1.value();
    let c2 = spec.c2.value();
    Ok(PolicyEval {
        bounds: [
            c1 + c2 - i_x1x2_s,
            c1 - i_x1_s + i_x2_y,
            i_x1x2_y,
        ],
        link1_ok: i_x1_s <= c1 + FEAS_TOL,
        link_sum_ok: i_x1x2_s <= c1 + c2 + FEAS_TOL,
        cost_ok: spec
            .cost
            .as_ref()
            .map_or(true, |c| cost_mean <= c.budget + FEAS_TOL),
    })
}

/// Evaluate the three capacity bounds and the link/cost feasibility flags for
/// a joint input policy p(x₁, x₂ | s).
///
/// Policy rows are conditioned on s and ordered x₁-major over (x₁, x₂).
pub fn eval_theorem1(spec: &DmChannelSpec, policy: &CondPmf) -> Result<PolicyEval> {
    if policy.cond_dims() != [spec.ns] || policy.out_size() != spec.nx1 * spec.nx2 {
        return Err(Error::Domain(alloc::format!(
            "policy must map s -> pmf over (x1, x2)"
        )));
    }
    theorem1_core(spec, policy.flat_rows())
}

/// Decode free simplex coordinates (the first K−1 probabilities of each row;
/// the last is one minus their sum) into dense rows. Returns `false` when a
/// derived last coordinate would be negative.
fn decode_simplex_rows(coords: &[f64], rows: usize, out_size: usize, dst: &mut [f64]) -> bool {
    let free = out_size - 1;
    for r in 0..rows {
        let mut sum = 0.0;
        for j in 0..free {
            let p = coords[r * free + j];
            dst[r * out_size + j] = p;
            sum += p;
        }
        let last = 1.0 - sum;
        if last < -1e-12 {
            return false;
        }
        dst[r * out_size + free] = last.max(0.0);
    }
    true
}

/// Brute-force the capacity expression over all joint policies p(x₁, x₂ | s)
/// on a multi-resolution grid. The returned value is clamped at zero (a zero
/// rate is trivially achievable).
pub fn brute_force_capacity(spec: &DmChannelSpec, cfg: &GridConfig) -> Result<OptResult> {
    spec.check_oracle_limits()?;
    let k = spec.nx1 * spec.nx2;
    let dim = spec.ns * (k - 1);
    if dim == 0 {
        // both inputs are singletons: exactly one policy
        let rows = vec![1.0; spec.ns];
        let eval = theorem1_core(spec, &rows)?;
        if !eval.feasible() {
            return Err(Error::Infeasible);
        }
        return Ok(OptResult {
            value: eval.min_bound().max(0.0),
            argmax: Vec::new(),
            active_bound: argmin3(&eval.bounds),
            evaluations: 1,
        });
    }
    if dim > MAX_ORACLE_DIM {
        return Err(Error::Config(alloc::format!(
            "policy has {dim} free coordinates, oracle limit is {MAX_ORACLE_DIM}"
        )));
    }

    let problem = MaxMinProblem::new(vec![(0.0, 1.0); dim], 3, move |x, out| {
        let mut rows = vec![0.0; spec.ns * k];
        if !decode_simplex_rows(x, spec.ns, k, &mut rows) {
            return false;
        }
        match theorem1_core(spec, &rows) {
            Ok(eval) if eval.feasible() => {
                out.copy_from_slice(&eval.bounds);
                true
            }
            _ => false,
        }
    })?;

    let mut result = maximize_min(&problem, cfg)?;
    result.value = result.value.max(0.0);
    Ok(result)
}

fn argmin3(bounds: &[f64; 3]) -> usize {
    let mut idx = 0;
    for i in 1..3 {
        if bounds[i] < bounds[idx] {
            idx = i;
        }
    }
    idx
}

// ---------------------------------------------------------------------------
// Separate message and state description transmission
// ---------------------------------------------------------------------------

/// Factors of a separate-transmission policy: a successive-refinement test
/// channel p(s₁, s₂ | s) plus input maps p(x₁ | s₁) and p(x₂ | x₁, s₁, s₂).
#[derive(Debug, Clone)]
pub struct SeparatePolicy {
    /// Rows conditioned on s, ordered s₁-major over (s₁, s₂).
    pub state_desc: CondPmf,
    /// Rows conditioned on s₁.
    pub x1_given_s1: CondPmf,
    /// Rows conditioned on (x₁, s₁, s₂) in that order.
    pub x2_given: CondPmf,
}

struct SeparateDims {
    ns1: usize,
    ns2: usize,
}

fn separate_core(
    spec: &DmChannelSpec,
    dims: &SeparateDims,
    desc_rows: &[f64],
    x1_rows: &[f64],
    x2_rows: &[f64],
) -> Result<PolicyEval> {
    let (ns, nx1, nx2, ny) = (spec.ns, spec.nx1, spec.nx2, spec.ny);
    let (ns1, ns2) = (dims.ns1, dims.ns2);

    // joint over (S, S1, S2, X1, X2, Y)
    let mut probs = vec![0.0; ns * ns1 * ns2 * nx1 * nx2 * ny];
    let mut cost_mean = 0.0;
    let cost_values = spec.cost.as_ref().map(|c| c.values.as_slice());
    for s in 0..ns {
        let ps = spec.state_pmf.probs()[s];
        for s1 in 0..ns1 {
            for s2 in 0..ns2 {
                let p_desc = ps * desc_rows[s * ns1 * ns2 + s1 * ns2 + s2];
                if p_desc == 0.0 {
                    continue;
                }
                for x1 in 0..nx1 {
                    let p_x1 = p_desc * x1_rows[s1 * nx1 + x1];
                    if p_x1 == 0.0 {
                        continue;
                    }
                    for x2 in 0..nx2 {
                        let p_in = p_x1 * x2_rows[((x1 * ns1 + s1) * ns2 + s2) * nx2 + x2];
                        if let Some(cv) = cost_values {
                            cost_mean += p_in * cv[x2];
                        }
                        if p_in > 0.0 {
                            let w = spec.channel.row(&[x1, x2, s]);
                            let base =
                                ((((s * ns1 + s1) * ns2 + s2) * nx1 + x1) * nx2 + x2) * ny;
                            for y in 0..ny {
                                probs[base + y] = p_in * w[y];
                            }
                        }
                    }
                }
            }
        }
    }
    let joint = JointPmf::new(vec![ns, ns1, ns2, nx1, nx2, ny], probs)?;

    let i_s1s2_s = mutual_information(&joint, &[1, 2], &[0], &[])?.value();
    let i_s1_s = mutual_information(&joint, &[1], &[0], &[])?.value();
    let i_x2_y = mutual_information(&joint, &[4], &[5], &[3, 0, 1, 2])?.value();
    let i_x1x2_y = mutual_information(&joint, &[3, 4], &[5], &[0, 1, 2])?.value();

    let c1 = spec.c1.value();
    let c2 = spec.c2.value();
    Ok(PolicyEval {
        bounds: [
            c1 + c2 - i_s1s2_s,
            c1 - i_s1_s + i_x2_y,
            i_x1x2_y,
        ],
        link1_ok: i_s1_s <= c1 + FEAS_TOL,
        link_sum_ok: i_s1s2_s <= c1 + c2 + FEAS_TOL,
        cost_ok: spec
            .cost
            .as_ref()
            .map_or(true, |c| cost_mean <= c.budget + FEAS_TOL),
    })
}

fn check_separate_cardinalities(spec: &DmChannelSpec, ns1: usize, ns2: usize) -> Result<()> {
    let ns = spec.ns;
    if ns1 == 0 || ns2 == 0 {
        return Err(Error::Config(alloc::format!(
            "description alphabets must be nonempty"
        )));
    }
    if ns1 > ns + 3 {
        return Err(Error::Config(alloc::format!(
            "|S1| = {ns1} exceeds the cardinality limit |S| + 3 = {}",
            ns + 3
        )));
    }
    if ns2 > ns * (ns + 3) + 2 {
        return Err(Error::Config(alloc::format!(
            "|S2| = {ns2} exceeds the cardinality limit |S|(|S| + 3) + 2 = {}",
            ns * (ns + 3) + 2
        )));
    }
    Ok(())
}

/// Evaluate the three separate-scheme bounds and the successive-refinement
/// feasibility flags for one factored policy.
pub fn eval_separate(spec: &DmChannelSpec, policy: &SeparatePolicy) -> Result<PolicyEval> {
    let desc = &policy.state_desc;
    if desc.cond_dims() != [spec.ns] {
        return Err(Error::Domain(alloc::format!(
            "state description must be conditioned on s"
        )));
    }
    let x1 = &policy.x1_given_s1;
    if x1.cond_dims().len() != 1 || x1.out_size() != spec.nx1 {
        return Err(Error::Domain(alloc::format!(
            "x1 map must be s1 -> pmf over X1"
        )));
    }
    let ns1 = x1.cond_dims()[0];
    if desc.out_size() % ns1 != 0 {
        return Err(Error::Domain(alloc::format!(
            "description alphabet {} is not divisible by |S1| = {ns1}",
            desc.out_size()
        )));
    }
    let ns2 = desc.out_size() / ns1;
    check_separate_cardinalities(spec, ns1, ns2)?;
    if policy.x2_given.cond_dims() != [spec.nx1, ns1, ns2]
        || policy.x2_given.out_size() != spec.nx2
    {
        return Err(Error::Domain(alloc::format!(
            "x2 map must be (x1, s1, s2) -> pmf over X2"
        )));
    }
    separate_core(
        spec,
        &SeparateDims { ns1, ns2 },
        desc.flat_rows(),
        x1.flat_rows(),
        policy.x2_given.flat_rows(),
    )
}

/// Brute-force the separate-scheme rate over all factored policies with
/// description alphabets of size `ns1` and `ns2`. Value clamped at zero.
pub fn brute_force_separate(
    spec: &DmChannelSpec,
    ns1: usize,
    ns2: usize,
    cfg: &GridConfig,
) -> Result<OptResult> {
    spec.check_oracle_limits()?;
    check_separate_cardinalities(spec, ns1, ns2)?;
    let (ns, nx1, nx2) = (spec.ns, spec.nx1, spec.nx2);

    let desc_free = ns1 * ns2 - 1;
    let x1_free = nx1 - 1;
    let x2_free = nx2 - 1;
    let n_desc = ns * desc_free;
    let n_x1 = ns1 * x1_free;
    let n_x2 = nx1 * ns1 * ns2 * x2_free;
    let dim = n_desc + n_x1 + n_x2;
    if dim == 0 {
        let eval = separate_core(
            spec,
            &SeparateDims { ns1, ns2 },
            &vec![1.0; ns],
            &vec![1.0; ns1],
            &vec![1.0; nx1 * ns1 * ns2],
        )?;
        if !eval.feasible() {
            return Err(Error::Infeasible);
        }
        return Ok(OptResult {
            value: eval.min_bound().max(0.0),
            argmax: Vec::new(),
            active_bound: argmin3(&eval.bounds),
            evaluations: 1,
        });
    }
    if dim > MAX_ORACLE_DIM {
        return Err(Error::Config(alloc::format!(
            "separate policy has {dim} free coordinates, oracle limit is {MAX_ORACLE_DIM}"
        )));
    }

    let sdims = SeparateDims { ns1, ns2 };
    let problem = MaxMinProblem::new(vec![(0.0, 1.0); dim], 3, move |x, out| {
        let mut desc_rows = vec![0.0; ns * ns1 * ns2];
        let mut x1_rows = vec![0.0; ns1 * nx1];
        let mut x2_rows = vec![0.0; nx1 * ns1 * ns2 * nx2];
        let ok = decode_simplex_rows(&x[..n_desc], ns, ns1 * ns2, &mut desc_rows)
            && decode_simplex_rows(&x[n_desc..n_desc + n_x1], ns1, nx1, &mut x1_rows)
            && decode_simplex_rows(&x[n_desc + n_x1..], nx1 * ns1 * ns2, nx2, &mut x2_rows);
        if !ok {
            return false;
        }
        match separate_core(spec, &sdims, &desc_rows, &x1_rows, &x2_rows) {
            Ok(eval) if eval.feasible() => {
                out.copy_from_slice(&eval.bounds);
                true
            }
            _ => false,
        }
    })?;

    let mut result = maximize_min(&problem, cfg)?;
    result.value = result.value.max(0.0);
    Ok(result)
}
