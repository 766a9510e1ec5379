//! Parameter verdicts: depth budgets, recurrence bounds, growth and
//! transversality, aggregated into density sweeps around a base parameter.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::family::MapFamily;
use crate::orbit::{
    ce_exponent, critical_orbit, dist_to_set, nv_from_orbit, recurrence_profile, OrbitData,
};
use crate::returns::{analyze_returns, essential_depth_sum, return_sequence, EpsGeometry, ReturnRecord};

/// Analysis constants shared by all verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictConfig {
    pub c: f64,
    pub tau: f64,
    pub beta: f64,
    pub lambda_ce: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub theta0: f64,
    /// Truncation length of the transversality sum.
    pub nv_terms: usize,
    /// Samples for the per-window expansion estimate; 0 disables it.
    pub lambda_samples: usize,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig {
            c: 20.0,
            tau: 2.0,
            beta: 2.0,
            lambda_ce: 0.05,
            n_min: 50,
            n_max: 10_000,
            theta0: 0.1,
            nv_terms: 200,
            lambda_samples: 32,
        }
    }
}

/// How far a nested sequence of conditions holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extent {
    /// Not even the weakest condition holds.
    Empty,
    /// Holds for indices up to and including `n`, fails at `n + 1`.
    UpTo(usize),
    /// No failure within the computed horizon.
    Unbounded,
}

impl Extent {
    pub fn covers(self, n: usize) -> bool {
        match self {
            Extent::Empty => false,
            Extent::UpTo(k) => n <= k,
            Extent::Unbounded => true,
        }
    }
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extent::Empty => f.write_str("none"),
            Extent::UpTo(k) => write!(f, "{k}"),
            Extent::Unbounded => f.write_str("inf"),
        }
    }
}

impl Serialize for Extent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Extent::UpTo(k) => s.serialize_u64(*k as u64),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XMembership {
    pub pass: bool,
    /// Smallest violating `k` and the critical index it belongs to.
    pub fail_k: Option<(usize, usize)>,
    /// Per critical point, `Σ_{j<=k} d_j` for `k = 1, 2, ...`.
    pub depth_prefix_sums: Vec<Vec<f64>>,
}

/// First `k` with `Σ_{j<=k} d_j > C k`, and the prefix sums.
pub fn depth_budget(records: &[ReturnRecord], c: f64) -> (Option<usize>, Vec<f64>) {
    let mut acc = 0.0;
    let mut sums = Vec::with_capacity(records.len());
    let mut fail = None;
    for (i, r) in records.iter().enumerate() {
        acc += r.d.as_f64();
        sums.push(acc);
        if fail.is_none() && acc > c * (i + 1) as f64 {
            fail = Some(i + 1);
        }
    }
    (fail, sums)
}

fn orbits(family: &MapFamily, t: f64, len: usize) -> Result<Vec<OrbitData>> {
    (0..family.critical_points(t).len())
        .map(|i| critical_orbit(family, t, i, len))
        .collect()
}

/// `t ∈ X_{n,ε}(C)`: for every critical point and every `k < n`, the first
/// `k` return depths sum to at most `C k`.
pub fn x_membership(family: &MapFamily, t: f64, eps: f64, c: f64, n: usize, orbit_len: usize) -> Result<XMembership> {
    if !(c > 0.0) {
        return Err(Error::InvalidArgument(format!("C must be positive, got {c}")));
    }
    let geom = EpsGeometry::new(eps, &family.critical_points(t))?;
    let mut fail_k: Option<(usize, usize)> = None;
    let mut depth_prefix_sums = Vec::new();
    for orbit in orbits(family, t, orbit_len)? {
        let records = return_sequence(&orbit, &geom, n.saturating_sub(1))?;
        let (fail, sums) = depth_budget(&records, c);
        if let Some(k) = fail {
            if fail_k.is_none_or(|(best, _)| k < best) {
                fail_k = Some((k, orbit.critical_index));
            }
        }
        depth_prefix_sums.push(sums);
    }
    Ok(XMembership {
        pass: fail_k.is_none(),
        fail_k,
        depth_prefix_sums,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YMembership {
    pub pass: bool,
    /// Smallest `k` where a recurrence bound fails.
    pub fail_m: Option<usize>,
    pub in_x: bool,
}

/// First `k < limit` with `|f^{k+1}(c) - c'| < ε^{1/ℓ(c')} (k+1)^{-τ}` over
/// all source orbits and targets `c'`.
fn recurrence_fail(orbits: &[OrbitData], geom: &EpsGeometry, tau: f64, limit: usize) -> Option<usize> {
    let mut first: Option<usize> = None;
    for o in orbits {
        let end = limit.min(o.points.len()).min(first.unwrap_or(usize::MAX));
        for k in 0..end {
            let scale = ((k + 1) as f64).powf(-tau);
            let x = o.points[k];
            let hit = geom
                .positions
                .iter()
                .zip(&geom.radii)
                .any(|(&c, &r)| (x - c).abs() < r * scale);
            if hit {
                first = Some(k);
                break;
            }
        }
    }
    first
}

/// `t ∈ Y^m_ε(C, τ)`: `t` lies in `X_ε(C)` over the computed orbit and the
/// critical orbits respect the recurrence bound for `0 <= k < m`.
pub fn y_membership(
    family: &MapFamily,
    t: f64,
    eps: f64,
    c: f64,
    tau: f64,
    m: usize,
    orbit_len: usize,
) -> Result<YMembership> {
    if orbit_len + 1 < m {
        return Err(Error::OrbitTooShort {
            needed: m,
            available: orbit_len + 1,
        });
    }
    let geom = EpsGeometry::new(eps, &family.critical_points(t))?;
    let orbits = orbits(family, t, orbit_len)?;
    let mut in_x = true;
    for o in &orbits {
        if o.escaped.is_some() {
            return Err(Error::OrbitTooShort {
                needed: orbit_len,
                available: o.length(),
            });
        }
        let n = crate::returns::return_times(o, &geom, usize::MAX).len();
        let records = return_sequence(o, &geom, n)?;
        in_x &= depth_budget(&records, c).0.is_none();
    }
    if !in_x {
        return Ok(YMembership {
            pass: false,
            fail_m: None,
            in_x,
        });
    }
    let fail_m = recurrence_fail(&orbits, &geom, tau, m);
    Ok(YMembership {
        pass: fail_m.is_none(),
        fail_m,
        in_x,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CeVerdict {
    pub rate: f64,
    pub verdict: bool,
    pub flag: Option<String>,
}

pub fn ce_verdict(family: &MapFamily, t: f64, crit: usize, config: &VerdictConfig) -> Result<CeVerdict> {
    let orbit = critical_orbit(family, t, crit, config.n_max)?;
    Ok(ce_from_orbit(&orbit, config))
}

fn ce_from_orbit(orbit: &OrbitData, config: &VerdictConfig) -> CeVerdict {
    match ce_exponent(orbit, config.n_min) {
        Ok(ce) => CeVerdict {
            rate: ce.inf_rate,
            verdict: ce.inf_rate >= config.lambda_ce,
            flag: None,
        },
        Err(e) => CeVerdict {
            rate: f64::NEG_INFINITY,
            verdict: false,
            flag: Some(e.to_string()),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictRow {
    pub t: f64,
    pub x_pass_n: Extent,
    pub x_fail_k: Option<usize>,
    pub y_pass_m: Extent,
    pub ce_rate: f64,
    pub ce_verdict: bool,
    pub pr_best_c: f64,
    pub nv_nonzero: bool,
    pub undetermined: bool,
    pub flags: Vec<String>,
}

impl VerdictRow {
    /// In `X_ε(C) ∩ Y_ε(C, τ)` over the horizon, with CE and NV verdicts.
    pub fn passes(&self) -> bool {
        !self.undetermined
            && self.x_pass_n == Extent::Unbounded
            && self.y_pass_m == Extent::Unbounded
            && self.ce_verdict
            && self.nv_nonzero
    }
}

/// Per-critical-point data behind a verdict row.
#[derive(Debug, Clone)]
pub struct CriticalAnalysis {
    pub orbit: OrbitData,
    pub records: Vec<ReturnRecord>,
}

/// Truncated transversality verdict, stepping the truncation back while the
/// trailing derivatives fail to contract.
fn nv_verdict(family: &MapFamily, orbit: &OrbitData, terms: usize) -> std::result::Result<bool, String> {
    let top = terms.min(orbit.length());
    let mut last_err = String::from("orbit too short for transversality sum");
    for n in (top.div_ceil(2).max(1)..=top).rev() {
        match nv_from_orbit(family, orbit, n) {
            Ok(nv) => return Ok(nv.nonzero),
            Err(e @ Error::TailNotContracting { .. }) => last_err = e.to_string(),
            Err(e) => return Err(e.to_string()),
        }
    }
    Err(last_err)
}

/// Evaluates every verdict at one parameter. Failures are folded into the
/// row as flags.
pub fn evaluate_row(family: &MapFamily, t: f64, eps: f64, config: &VerdictConfig) -> VerdictRow {
    evaluate_row_detailed(family, t, eps, config).0
}

pub fn evaluate_row_detailed(
    family: &MapFamily,
    t: f64,
    eps: f64,
    config: &VerdictConfig,
) -> (VerdictRow, Vec<CriticalAnalysis>) {
    let mut row = VerdictRow {
        t,
        x_pass_n: Extent::Unbounded,
        x_fail_k: None,
        y_pass_m: Extent::Unbounded,
        ce_rate: f64::INFINITY,
        ce_verdict: true,
        pr_best_c: f64::INFINITY,
        nv_nonzero: true,
        undetermined: false,
        flags: Vec::new(),
    };
    let mut analyses = Vec::new();
    let crits = family.critical_points(t);
    let geom = match EpsGeometry::new(eps, &crits) {
        Ok(g) => g,
        Err(e) => {
            row.undetermined = true;
            row.flags.push(e.to_string());
            return (row, analyses);
        }
    };
    for i in 0..crits.len() {
        let orbit = match critical_orbit(family, t, i, config.n_max) {
            Ok(o) => o,
            Err(e) => {
                row.undetermined = true;
                row.flags.push(format!("c{i}: {e}"));
                continue;
            }
        };
        if let Some(step) = orbit.escaped {
            row.undetermined = true;
            row.flags.push(format!("c{i}: orbit escaped at {step}"));
        }
        match analyze_returns(family, &orbit, eps, config.theta0) {
            Ok((_, records)) => {
                if let (Some(k), _) = depth_budget(&records, config.c) {
                    if row.x_fail_k.is_none_or(|best| k < best) {
                        row.x_fail_k = Some(k);
                        row.x_pass_n = Extent::UpTo(k);
                    }
                }
                analyses.push(CriticalAnalysis {
                    orbit: orbit.clone(),
                    records,
                });
            }
            Err(e) => {
                row.undetermined = true;
                row.flags.push(format!("c{i}: {e}"));
            }
        }
        let ce = ce_from_orbit(&orbit, config);
        row.ce_rate = row.ce_rate.min(ce.rate);
        row.ce_verdict &= ce.verdict;
        if let Some(f) = ce.flag {
            row.flags.push(format!("c{i}: {f}"));
        }
        row.pr_best_c = row.pr_best_c.min(recurrence_profile(&orbit, config.beta).best_c);
        match nv_verdict(family, &orbit, config.nv_terms) {
            Ok(nz) => row.nv_nonzero &= nz,
            Err(f) => {
                row.nv_nonzero = false;
                row.flags.push(format!("c{i}: {f}"));
            }
        }
    }
    if row.x_pass_n != Extent::Unbounded {
        row.y_pass_m = Extent::Empty;
    } else {
        let orbits: Vec<OrbitData> = analyses.iter().map(|a| a.orbit.clone()).collect();
        if let Some(m) = recurrence_fail(&orbits, &geom, config.tau, usize::MAX) {
            row.y_pass_m = Extent::UpTo(m);
        }
    }
    (row, analyses)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepWindow {
    pub eps: f64,
    pub lo: f64,
    pub hi: f64,
    pub one_sided: bool,
    pub rows: Vec<VerdictRow>,
    pub fraction_pass: f64,
    pub fraction_undetermined: f64,
    /// Number of rows in `X_n \ X_{n+1}`, by `n`.
    pub exit_counts: BTreeMap<usize, usize>,
    pub lambda_hat: Option<f64>,
    /// Whether the estimated expansion reaches `e^{ℓ_max C}`.
    pub lambda_condition: Option<bool>,
}

impl SweepWindow {
    /// Empirical measure of `X_n \ X_{n+1}` within the window.
    pub fn exit_measure(&self, n: usize) -> f64 {
        let count = self.exit_counts.get(&n).copied().unwrap_or(0);
        count as f64 / self.rows.len() as f64 * (self.hi - self.lo)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub center: f64,
    pub grid: usize,
    pub seed: u64,
    pub windows: Vec<SweepWindow>,
}

/// Clips `[center - eps, center + eps]` to the parameter domain.
pub fn sweep_window(family: &MapFamily, center: f64, eps: f64) -> Result<(f64, f64, bool)> {
    let (dlo, dhi) = family.parameter_domain();
    let lo = (center - eps).max(dlo);
    let hi = (center + eps).min(dhi);
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    if !(lo < hi) {
        return Err(Error::ParameterOutOfDomain { t: center, lo: dlo, hi: dhi });
    }
    Ok((lo, hi, lo > center - eps || hi < center + eps))
}

/// Stratified sample of the window: one jittered point per grid cell.
pub fn sweep_grid(lo: f64, hi: f64, grid: usize, seed: u64, stream: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let h = (hi - lo) / grid as f64;
    (0..grid)
        .map(|i| {
            let u: f64 = rng.gen();
            (lo + (i as f64 + u) * h).min(hi)
        })
        .collect()
}

/// Verdict rows over each window `[center - ε, center + ε]`, with pass and
/// exit statistics. Rows are evaluated in parallel and kept in parameter
/// order.
pub fn density_sweep(
    family: &MapFamily,
    center: f64,
    eps_list: &[f64],
    grid: usize,
    seed: u64,
    config: &VerdictConfig,
) -> Result<SweepResult> {
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("grid must be >= 2, got {grid}")));
    }
    let windows: Vec<(f64, f64, bool)> = eps_list
        .iter()
        .map(|&eps| sweep_window(family, center, eps))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(eps_list.len());
    for (idx, (&eps, &(lo, hi, one_sided))) in eps_list.iter().zip(&windows).enumerate() {
        let ts = sweep_grid(lo, hi, grid, seed, idx as u64);
        let rows: Vec<VerdictRow> = ts.par_iter().map(|&t| evaluate_row(family, t, eps, config)).collect();
        let n = rows.len() as f64;
        let mut exit_counts = BTreeMap::new();
        for r in rows.iter().filter(|r| !r.undetermined) {
            if let Extent::UpTo(k) = r.x_pass_n {
                *exit_counts.entry(k).or_insert(0) += 1;
            }
        }
        let (lambda_hat, lambda_condition) = if config.lambda_samples > 0 {
            match estimate_expansion_constants(family, (lo, hi), eps, config.lambda_samples, seed, config) {
                Ok(est) => {
                    let ell = family.ell_max().unwrap_or(2.0);
                    (Some(est.lambda_hat), Some(est.log_lambda_hat >= ell * config.c))
                }
                Err(_) => (None, None),
            }
        } else {
            (None, None)
        };
        out.push(SweepWindow {
            eps,
            lo,
            hi,
            one_sided,
            fraction_pass: rows.iter().filter(|r| r.passes()).count() as f64 / n,
            fraction_undetermined: rows.iter().filter(|r| r.undetermined).count() as f64 / n,
            rows,
            exit_counts,
            lambda_hat,
            lambda_condition,
        });
    }
    Ok(SweepResult {
        center,
        grid,
        seed,
        windows: out,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub t: f64,
    pub x: f64,
    pub steps: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionEstimate {
    pub lambda_hat: f64,
    pub log_lambda_hat: f64,
    pub l_star_hat: f64,
    pub lambda_witness: Witness,
    pub l_star_witness: Witness,
    pub samples: usize,
    pub lambda_segments: usize,
}

struct SampleOutcome {
    t: f64,
    x: f64,
    /// Smallest `log(|Df^s(x)| D_c(ε))` over qualifying segment ends.
    lambda: Option<(f64, usize)>,
    l_sum: f64,
    l_steps: usize,
    segments: usize,
}

fn expansion_sample(family: &MapFamily, t: f64, x0: f64, geom: &EpsGeometry, geom2: &EpsGeometry, n_max: usize) -> Result<SampleOutcome> {
    let map = family.map_at(t)?;
    let crits = &geom.positions;
    let mut out = SampleOutcome {
        t,
        x: x0,
        lambda: None,
        l_sum: 0.0,
        l_steps: 0,
        segments: 0,
    };
    let mut x = x0;
    let mut logd = 0.0_f64;
    for j in 0..=n_max {
        out.l_sum += (-logd).exp();
        out.l_steps = j;
        if j >= 1 {
            if let (k, Some(ci)) = geom2.q_eps(x) {
                if k > crate::depth::Depth::ZERO {
                    let v = logd + geom.scale_factor(ci).ln();
                    out.segments += 1;
                    if out.lambda.is_none_or(|(best, _)| v < best) {
                        out.lambda = Some((v, j));
                    }
                }
            }
        }
        if geom.contains(x) || j == n_max {
            break;
        }
        let jet = map(x);
        if dist_to_set(x, crits) == 0.0 || jet.dfx == 0.0 {
            break;
        }
        logd += jet.dfx.abs().ln();
        x = jet.f.clamp(0.0, 1.0);
    }
    Ok(out)
}

/// Sampled expansion constants near the critical values.
///
/// Starting points are drawn within `4ε` of a critical value, parameters
/// uniformly from `t_range`. `Λ̂` is the smallest `|Df^s(x)| D_c(ε)` over
/// orbit segments that avoid `B̃(ε)` before time `s >= 1` and land in
/// `B̃(c; 2ε)` at time `s`; `L̂*` is the largest `Σ_{j<=n} |Df^j(x)|^{-1}`
/// over segments that avoid `B̃(ε)` before time `n`.
pub fn estimate_expansion_constants(
    family: &MapFamily,
    t_range: (f64, f64),
    eps: f64,
    sample_count: usize,
    seed: u64,
    config: &VerdictConfig,
) -> Result<ExpansionEstimate> {
    if sample_count == 0 {
        return Err(Error::InvalidArgument("sample_count must be >= 1".into()));
    }
    let (tlo, thi) = t_range;
    family.check_parameter(tlo)?;
    family.check_parameter(thi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(f64, f64, f64)> = (0..sample_count)
        .map(|_| (rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()))
        .collect();
    let outcomes: Vec<Result<SampleOutcome>> = draws
        .par_iter()
        .map(|&(ut, uc, ux)| {
            let t = tlo + (thi - tlo) * ut;
            let crits = family.critical_points(t);
            if crits.is_empty() {
                return Err(Error::NoSegmentsFound);
            }
            let geom = EpsGeometry::new(eps, &crits)?;
            let geom2 = EpsGeometry::new(2.0 * eps, &crits)?;
            let ci = ((uc * crits.len() as f64) as usize).min(crits.len() - 1);
            let v = family.jet(t, crits[ci].position)?.f;
            let lo = (v - 4.0 * eps).max(0.0);
            let hi = (v + 4.0 * eps).min(1.0);
            expansion_sample(family, t, lo + (hi - lo) * ux, &geom, &geom2, config.n_max)
        })
        .collect();
    let mut lambda: Option<(f64, Witness)> = None;
    let mut lstar: Option<Witness> = None;
    let mut segments = 0;
    for o in outcomes {
        let o = o?;
        segments += o.segments;
        if let Some((v, s)) = o.lambda {
            if lambda.is_none_or(|(best, _)| v < best) {
                lambda = Some((
                    v,
                    Witness {
                        t: o.t,
                        x: o.x,
                        steps: s,
                        value: v.exp(),
                    },
                ));
            }
        }
        if lstar.is_none_or(|w| o.l_sum > w.value) {
            lstar = Some(Witness {
                t: o.t,
                x: o.x,
                steps: o.l_steps,
                value: o.l_sum,
            });
        }
    }
    let (log_lambda_hat, lambda_witness) = lambda.ok_or(Error::NoSegmentsFound)?;
    let l_star_witness = lstar.ok_or(Error::NoSegmentsFound)?;
    Ok(ExpansionEstimate {
        lambda_hat: log_lambda_hat.exp(),
        log_lambda_hat,
        l_star_hat: l_star_witness.value,
        lambda_witness,
        l_star_witness,
        samples: sample_count,
        lambda_segments: segments,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthBudgetReport {
    pub n: usize,
    /// Essential depth sum per critical point.
    pub lhs: Vec<f64>,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceReport {
    pub m: usize,
    /// Critical index, return ordinal and `p_n` of the return at time `m`.
    pub witness: Option<(usize, usize, f64)>,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TotalDepthReport {
    pub t: f64,
    pub depth_budget: Option<DepthBudgetReport>,
    pub recurrence: Option<RecurrenceReport>,
}

/// Compares the essential depth sum with `(γC - C₀) n` for parameters that
/// leave `X` at step `n`.
pub fn depth_budget_report(records: &[Vec<ReturnRecord>], c: f64, c0: f64, gamma: f64, n: usize) -> DepthBudgetReport {
    let lhs: Vec<f64> = records.iter().map(|r| essential_depth_sum(r, c0, n)).collect();
    let rhs = (gamma * c - c0) * n as f64;
    DepthBudgetReport {
        n,
        pass: lhs.iter().any(|&v| v >= rhs),
        lhs,
        rhs,
    }
}

/// Diagnostic comparison of the total essential depth against its expected
/// lower bounds. The bounds are asymptotic in `ε`, so failures are
/// reported, not raised.
///
/// With `n = None` the exit step from `X` is taken from the orbit.
#[allow(clippy::too_many_arguments)]
pub fn totaldepth_diagnostic(
    family: &MapFamily,
    t: f64,
    eps: f64,
    c0: f64,
    gamma: f64,
    n: Option<usize>,
    config: &VerdictConfig,
) -> Result<TotalDepthReport> {
    family.check_parameter(t)?;
    let (row, analyses) = evaluate_row_detailed(family, t, eps, config);
    if row.undetermined {
        return Err(Error::NotInBoundaryClass { t });
    }
    let records: Vec<Vec<ReturnRecord>> = analyses.iter().map(|a| a.records.clone()).collect();
    let mut report = TotalDepthReport {
        t,
        depth_budget: None,
        recurrence: None,
    };
    if let Extent::UpTo(k) = row.x_pass_n {
        if n.is_none_or(|n| n == k) {
            report.depth_budget = Some(depth_budget_report(&records, config.c, c0, gamma, k));
        }
    }
    if let Extent::UpTo(m) = row.y_pass_m {
        let rhs = gamma * config.tau * ((m + 1) as f64).ln();
        let witness = analyses.iter().find_map(|a| {
            a.records
                .iter()
                .find(|r| r.s == Some(m) && r.essential && r.p_tilde > c0)
                .map(|r| (a.orbit.critical_index, r.j, r.p))
        });
        report.recurrence = Some(RecurrenceReport {
            m,
            pass: witness.is_some_and(|(_, _, p)| p >= rhs),
            witness,
            rhs,
        });
    }
    if report.depth_budget.is_none() && report.recurrence.is_none() {
        return Err(Error::NotInBoundaryClass { t });
    }
    Ok(report)
}
