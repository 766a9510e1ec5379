//! Parameter boxes around pre-critical parameters: the curves
//! `ξ_m(t) = f_t^{m+1}(c)`, location of parameters where `ξ_m` hits the
//! critical set, box radii from the distortion sum, and sampled checks of
//! bounded distortion.

use rayon::prelude::*;
use serde::Serialize;

use crate::balls::{Ball, BallFamily, Specialness};
use crate::error::{Error, Result};
use crate::family::{MapFamily, BOUNDARY_TOL};
use crate::orbit::{critical_orbit, distortion_sum, dist_to_set, nv_check, transversality_sum};
use crate::poly::{bisect, ROOT_TOL};
use crate::returns::EpsGeometry;

/// Orbit points closer than this to the critical set disqualify a root.
pub const AVOIDANCE_TOL: f64 = 1e-10;

/// Radius used for order-0 boxes, whose distortion sum is empty.
pub const DEFAULT_MAX_RADIUS: f64 = 0.05;

const RADIUS_BISECTION_STEPS: usize = 40;
const RADIUS_HALVINGS: usize = 30;
const MEMBERSHIP_SAMPLES: usize = 8;

/// `ξ_m(t) = f_t^{m+1}(c(t))`.
pub fn xi(family: &MapFamily, t: f64, crit: usize, m: usize) -> Result<f64> {
    let map = family.map_at(t)?;
    let crits = family.critical_points(t);
    let c = crits
        .get(crit)
        .ok_or(Error::NoSuchCritical {
            index: crit,
            count: crits.len(),
        })?
        .position;
    let mut x = c;
    for _ in 0..=m {
        let y = map(x).f;
        if !(-BOUNDARY_TOL..=1.0 + BOUNDARY_TOL).contains(&y) {
            return Err(Error::EvaluationEscaped { t, x, value: y });
        }
        x = y.clamp(0.0, 1.0);
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Precritical {
    pub t: f64,
    pub order: usize,
    pub source: usize,
    pub target: usize,
}

/// Whether `f_t^j(c)` stays `AVOIDANCE_TOL` away from the critical set for
/// `1 <= j <= m`.
fn avoids_critical_set(family: &MapFamily, t: f64, crit: usize, m: usize) -> bool {
    match critical_orbit(family, t, crit, m.saturating_sub(1)) {
        Ok(o) if m == 0 => o.escaped.is_none(),
        Ok(o) => o.escaped.is_none() && o.crit_dist[..m].iter().all(|&d| d >= AVOIDANCE_TOL),
        Err(_) => false,
    }
}

/// Parameters in `[t_lo, t_hi]` where `ξ_m` meets a critical point while
/// the earlier orbit avoids the critical set.
///
/// Each target critical point is handled by sign-change bisection of
/// `ξ_m(t) - c_target(t)` over `grid` cells; roots without a sign change
/// are not detected.
pub fn find_precritical(
    family: &MapFamily,
    t_lo: f64,
    t_hi: f64,
    crit_source: usize,
    m: usize,
    grid: usize,
) -> Result<Vec<Precritical>> {
    if !(t_lo < t_hi) {
        return Err(Error::InvalidArgument(format!("empty range [{t_lo}, {t_hi}]")));
    }
    family.check_parameter(t_lo)?;
    family.check_parameter(t_hi)?;
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be >= 1".into()));
    }
    let n_targets = family.critical_points(t_lo).len();
    if crit_source >= n_targets {
        return Err(Error::NoSuchCritical {
            index: crit_source,
            count: n_targets,
        });
    }
    let ts: Vec<f64> = (0..=grid)
        .map(|i| if i == grid { t_hi } else { t_lo + (t_hi - t_lo) * i as f64 / grid as f64 })
        .collect();
    let mut out = Vec::new();
    for target in 0..n_targets {
        let g = |t: f64| -> f64 {
            let c = family.critical_points(t).get(target).map(|c| c.position);
            match (xi(family, t, crit_source, m), c) {
                (Ok(v), Some(c)) => v - c,
                _ => f64::NAN,
            }
        };
        let vals: Vec<f64> = ts.par_iter().map(|&t| g(t)).collect();
        let mut roots: Vec<f64> = Vec::new();
        for i in 0..grid {
            let (a, b) = (ts[i], ts[i + 1]);
            let (fa, fb) = (vals[i], vals[i + 1]);
            if fa == 0.0 {
                roots.push(a);
            } else if fa.is_finite() && fb.is_finite() && fb != 0.0 && fa.signum() != fb.signum() {
                roots.push(bisect(g, a, b, fa));
            }
        }
        if vals[grid] == 0.0 {
            roots.push(t_hi);
        }
        roots.dedup_by(|a, b| (*a - *b).abs() <= ROOT_TOL);
        for t in roots {
            if avoids_critical_set(family, t, crit_source, m) {
                out.push(Precritical {
                    t,
                    order: m,
                    source: crit_source,
                    target,
                });
            }
        }
    }
    out.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxRadius {
    pub radius: f64,
    /// Order 0: the configured maximum replaces the empty-sum formula.
    pub capped: bool,
    /// The box sticks out of the parameter domain.
    pub clipped: bool,
}

/// `r = θ / 𝒜(f_{t0}(c), t0, m)`, or `max_radius` when `m = 0`.
pub fn box_radius(family: &MapFamily, t0: f64, crit: usize, m: usize, theta: f64, max_radius: f64) -> Result<BoxRadius> {
    if !(theta > 0.0) {
        return Err(Error::InvalidTheta(theta));
    }
    let (radius, capped) = if m == 0 {
        (max_radius, true)
    } else {
        let crits = family.critical_points(t0);
        let c = crits
            .get(crit)
            .ok_or(Error::NoSuchCritical {
                index: crit,
                count: crits.len(),
            })?
            .position;
        let v = family.jet(t0, c)?.f;
        let a = distortion_sum(family, t0, v, m)?;
        if a == f64::INFINITY {
            return Err(Error::InfiniteDistortion { time: m });
        }
        (theta / a, false)
    };
    let (lo, hi) = family.parameter_domain();
    Ok(BoxRadius {
        radius,
        capped,
        clipped: t0 - radius < lo || t0 + radius > hi,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxReport {
    pub samples: usize,
    pub monotone: bool,
    pub worst_xi_ratio: f64,
    pub m_range: (f64, f64),
    pub worst_deriv_ratio: f64,
    pub pass: bool,
    /// Zero radius: a single sample was checked.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterBox {
    pub center: f64,
    pub radius: f64,
    pub order: usize,
    pub crit: usize,
    pub target: usize,
    pub lambda: f64,
    pub clipped: bool,
    pub verified: Option<BoxReport>,
}

impl ParameterBox {
    pub fn as_ball(&self) -> Ball {
        Ball {
            center: self.center,
            radius: self.radius,
        }
    }
}

fn box_samples(family: &MapFamily, center: f64, radius: f64, samples: usize) -> Vec<f64> {
    let (lo, hi) = family.parameter_domain();
    (0..samples)
        .map(|i| (center - radius + 2.0 * radius * i as f64 / (samples - 1) as f64).clamp(lo, hi))
        .collect()
}

/// Sampled check that `ξ_m` is a diffeomorphism with distortion at most
/// `λ` on the box, that `|M_m|` stays within `[λ^{-1}, λ] |a_c|`, and that
/// derivatives along the critical orbit vary by at most `λ` for `k <= m`.
pub fn verify_box(family: &MapFamily, b: &ParameterBox, a_c_base: f64, samples: usize) -> Result<BoxReport> {
    if samples < 3 {
        return Err(Error::InvalidArgument(format!("samples must be >= 3, got {samples}")));
    }
    let m = b.order;
    let lambda = b.lambda;
    let (ts, degenerate) = if b.radius > 0.0 {
        (box_samples(family, b.center, b.radius, samples), false)
    } else {
        (vec![b.center], true)
    };
    let h = b.radius / samples as f64 / 10.0;
    let (dlo, dhi) = family.parameter_domain();

    let mut xs = Vec::with_capacity(ts.len());
    let mut dxi = Vec::with_capacity(ts.len());
    let mut ms = Vec::with_capacity(ts.len());
    let mut log_d_min = vec![f64::INFINITY; m + 1];
    let mut log_d_max = vec![f64::NEG_INFINITY; m + 1];
    for &t in &ts {
        xs.push(xi(family, t, b.crit, m)?);
        if h > 0.0 {
            let (tp, tm) = ((t + h).min(dhi), (t - h).max(dlo));
            dxi.push(((xi(family, tp, b.crit, m)? - xi(family, tm, b.crit, m)?) / (tp - tm)).abs());
        }
        let o = critical_orbit(family, t, b.crit, m)?;
        for k in 0..=m.min(o.length()) {
            let l = o.cum_deriv[k].logmag;
            log_d_min[k] = log_d_min[k].min(l);
            log_d_max[k] = log_d_max[k].max(l);
        }
        ms.push(match transversality_sum(family, t, b.crit, m) {
            Ok(tr) => tr.m_n.abs(),
            Err(_) => f64::NAN,
        });
    }

    let monotone = xs.windows(2).all(|w| w[1] > w[0]) || xs.windows(2).all(|w| w[1] < w[0]);
    let worst_xi_ratio = if dxi.is_empty() {
        1.0
    } else {
        let lo = dxi.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = dxi.iter().copied().fold(0.0, f64::max);
        if lo > 0.0 {
            hi / lo
        } else {
            f64::INFINITY
        }
    };
    let m_lo = ms.iter().copied().fold(f64::INFINITY, f64::min);
    let m_hi = ms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = log_d_min
        .iter()
        .zip(&log_d_max)
        .map(|(lo, hi)| if lo.is_finite() { hi - lo } else { f64::INFINITY })
        .fold(0.0, f64::max);
    let worst_deriv_ratio = spread.exp();
    let a = a_c_base.abs();
    let m_ok = ms.iter().all(|v| v.is_finite()) && m_lo >= a / lambda && m_hi <= a * lambda;
    let pass = (degenerate || monotone) && worst_xi_ratio <= lambda && m_ok && worst_deriv_ratio <= lambda;
    Ok(BoxReport {
        samples: ts.len(),
        monotone: degenerate || monotone,
        worst_xi_ratio,
        m_range: (m_lo, m_hi),
        worst_deriv_ratio,
        pass,
        degenerate,
    })
}

/// Settings for [`box_family`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxSearch {
    pub m_max: usize,
    pub n_cap: usize,
    pub eps: f64,
    pub lambda: f64,
    pub theta: f64,
    pub grid: usize,
    pub samples: usize,
    pub max_radius: f64,
    pub nv_terms: usize,
}

impl Default for BoxSearch {
    fn default() -> Self {
        BoxSearch {
            m_max: 4,
            n_cap: 4,
            eps: 0.01,
            lambda: 2.0,
            theta: 0.01,
            grid: 4000,
            samples: 16,
            max_radius: DEFAULT_MAX_RADIUS,
            nv_terms: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxFamilyResult {
    pub boxes: Vec<ParameterBox>,
    /// Pre-critical parameters for which no admissible radius was found.
    pub rejected: Vec<Precritical>,
    pub a_c_base: f64,
    pub special: Option<Specialness>,
    pub height: Option<usize>,
    pub height_within_cap: Option<bool>,
}

/// Sampled `#{0 <= j <= m : f_t^{j+1}(c) ∈ B̃(ε)}`.
fn return_count(family: &MapFamily, t: f64, crit: usize, m: usize, eps: f64) -> Option<usize> {
    let o = critical_orbit(family, t, crit, m).ok()?;
    let geom = EpsGeometry::new(eps, &family.critical_points(t)).ok()?;
    (o.escaped.is_none()).then(|| o.points.iter().filter(|&&x| geom.contains(x)).count())
}

/// Whether the box is λ-bounded and `ξ_m` maps it into `B̃(c_target; ε)`.
fn admissible(family: &MapFamily, b: &ParameterBox, a_c: f64, cfg: &BoxSearch) -> Option<BoxReport> {
    let report = verify_box(family, b, a_c, cfg.samples).ok()?;
    if !report.pass {
        return None;
    }
    let crits = family.critical_points(b.center);
    let c = crits.get(b.target)?;
    let radius = cfg.eps.powf(1.0 / c.order);
    let inside = box_samples(family, b.center, b.radius, cfg.samples)
        .iter()
        .all(|&t| xi(family, t, b.crit, b.order).is_ok_and(|v| (v - c.position).abs() < radius));
    inside.then_some(report)
}

fn largest_box(family: &MapFamily, p: &Precritical, a_c: f64, cfg: &BoxSearch) -> Option<ParameterBox> {
    let make = |r: f64| ParameterBox {
        center: p.t,
        radius: r,
        order: p.order,
        crit: p.source,
        target: p.target,
        lambda: cfg.lambda,
        clipped: false,
        verified: None,
    };
    let check = |r: f64| admissible(family, &make(r), a_c, cfg);

    let (mut good, mut report, bad) = match check(cfg.eps) {
        Some(rep) => (cfg.eps, rep, None),
        None => {
            let start = box_radius(family, p.t, p.source, p.order, cfg.theta, cfg.max_radius)
                .map(|b| b.radius.min(cfg.eps))
                .unwrap_or(cfg.eps);
            let mut r = start;
            let mut found = None;
            for _ in 0..RADIUS_HALVINGS {
                if let Some(rep) = check(r) {
                    found = Some((r, rep));
                    break;
                }
                r *= 0.5;
            }
            let (r, rep) = found?;
            let upper = if r == start { cfg.eps } else { 2.0 * r };
            (r, rep, Some(upper))
        }
    };
    if let Some(mut hi) = bad {
        for _ in 0..RADIUS_BISECTION_STEPS {
            let mid = 0.5 * (good + hi);
            match check(mid) {
                Some(rep) => {
                    good = mid;
                    report = rep;
                }
                None => hi = mid,
            }
        }
    }
    let (lo, hi) = family.parameter_domain();
    let mut b = make(good);
    b.clipped = p.t - good < lo || p.t + good > hi;
    b.verified = Some(report);
    Some(b)
}

/// Boxes `B(t*, r_λ(t*, ε))` around pre-critical parameters of order
/// `m <= m_max` in `[t_lo, t_hi]`, keeping those with a sampled parameter
/// whose first `m + 1` orbit points enter `B̃(ε)` at most `n_cap` times.
///
/// The radius is the largest `r <= ε` found by bisection for which the box
/// passes [`verify_box`] and `ξ_m` maps it into `B̃(c; ε)`. The unclipped
/// boxes are then checked for specialness and height as a ball family.
pub fn box_family(family: &MapFamily, t_lo: f64, t_hi: f64, crit: usize, cfg: &BoxSearch) -> Result<BoxFamilyResult> {
    if !(cfg.lambda > 1.0) {
        return Err(Error::InvalidArgument(format!("lambda must exceed 1, got {}", cfg.lambda)));
    }
    if !(cfg.theta > 0.0) {
        return Err(Error::InvalidTheta(cfg.theta));
    }
    let base = family.base_parameter();
    let a_c_base = match nv_check(family, base, crit, cfg.nv_terms) {
        Ok(nv) => nv.a_c,
        Err(_) => transversality_sum(family, base, crit, cfg.nv_terms)?.m_n,
    };
    let mut pre = Vec::new();
    for m in 0..=cfg.m_max {
        pre.extend(find_precritical(family, t_lo, t_hi, crit, m, cfg.grid)?);
    }
    pre.sort_by(|a, b| (a.order, a.t).partial_cmp(&(b.order, b.t)).unwrap());

    let built: Vec<(Precritical, Option<ParameterBox>)> = pre
        .par_iter()
        .map(|p| (*p, largest_box(family, p, a_c_base, cfg)))
        .collect();
    let mut boxes = Vec::new();
    let mut rejected = Vec::new();
    for (p, b) in built {
        match b {
            Some(b) if membership_ok(family, &b, cfg) => boxes.push(b),
            _ => rejected.push(p),
        }
    }

    let unclipped: Vec<Ball> = boxes.iter().filter(|b| !b.clipped).map(ParameterBox::as_ball).collect();
    let fam = BallFamily { balls: unclipped };
    let (special, height) = match fam.is_special() {
        Ok(s) => {
            let h = if s.special { fam.height().ok() } else { None };
            (Some(s), h)
        }
        Err(_) => (None, None),
    };
    Ok(BoxFamilyResult {
        boxes,
        rejected,
        a_c_base,
        special,
        height_within_cap: height.map(|h| h <= cfg.n_cap),
        height,
    })
}

/// The existential return-count condition, checked at the center and at
/// interior samples.
fn membership_ok(family: &MapFamily, b: &ParameterBox, cfg: &BoxSearch) -> bool {
    let mut ts = vec![b.center];
    ts.extend((1..=MEMBERSHIP_SAMPLES).map(|i| {
        let u = i as f64 / (MEMBERSHIP_SAMPLES + 1) as f64;
        b.center - b.radius + 2.0 * b.radius * u
    }));
    ts.iter()
        .filter(|&&t| family.contains(t))
        .any(|&t| return_count(family, t, b.crit, b.order, cfg.eps).is_some_and(|n| n <= cfg.n_cap))
}

/// Distance from `ξ_m(t)` to the critical set, for diagnostics.
pub fn xi_critical_distance(family: &MapFamily, t: f64, crit: usize, m: usize) -> Result<f64> {
    let x = xi(family, t, crit, m)?;
    let crits: Vec<f64> = family.critical_points(t).iter().map(|c| c.position).collect();
    Ok(dist_to_set(x, &crits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balls::depth;
    use crate::family::make_logistic;

    fn golden() -> f64 {
        1.0 + 5f64.sqrt()
    }

    #[test]
    fn xi_examples() {
        let fam = make_logistic();
        assert_eq!(xi(&fam, 4.0, 0, 0).unwrap(), 1.0);
        assert_eq!(xi(&fam, 2.0, 0, 1).unwrap(), 0.5);
        assert_eq!(xi(&fam, 3.3, 0, 0).unwrap(), fam.jet(3.3, 0.5).unwrap().f);
    }

    #[test]
    fn precritical_examples() {
        let fam = make_logistic();
        let r = find_precritical(&fam, 1.0, 3.0, 0, 0, 1000).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].t - 2.0).abs() < 1e-13);
        let r = find_precritical(&fam, 3.0, 4.0, 0, 1, 1000).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].t - golden()).abs() < 1e-12);
        assert!(xi_critical_distance(&fam, r[0].t, 0, 1).unwrap() < 1e-10);
        assert!(find_precritical(&fam, 3.0, 3.2, 0, 0, 100).unwrap().is_empty());
        // a = 2 solves the order-1 equation too but hits c at order 0
        assert!(find_precritical(&fam, 1.5, 2.5, 0, 1, 1000).unwrap().is_empty());
    }

    #[test]
    fn box_radius_examples() {
        let fam = make_logistic();
        let b = box_radius(&fam, 4.0, 0, 2, 0.01, DEFAULT_MAX_RADIUS).unwrap();
        assert!((b.radius - 0.001).abs() < 1e-15);
        assert!(b.clipped && !b.capped);
        let b = box_radius(&fam, 3.0, 0, 0, 0.01, DEFAULT_MAX_RADIUS).unwrap();
        assert_eq!(b.radius, 0.05);
        assert!(b.capped);
        assert_eq!(box_radius(&fam, 4.0, 0, 2, 0.0, 0.05), Err(Error::InvalidTheta(0.0)));
        let r1 = box_radius(&fam, 3.7, 0, 5, 0.01, 0.05).unwrap().radius;
        let r2 = box_radius(&fam, 3.7, 0, 5, 0.02, 0.05).unwrap().radius;
        assert_eq!(r2, 2.0 * r1);
    }

    fn pbox(center: f64, radius: f64, order: usize, lambda: f64) -> ParameterBox {
        ParameterBox {
            center,
            radius,
            order,
            crit: 0,
            target: 0,
            lambda,
            clipped: false,
            verified: None,
        }
    }

    #[test]
    fn verify_box_examples() {
        let fam = make_logistic();
        let rep = verify_box(&fam, &pbox(2.0, 0.05, 0, 1.5), 0.25, 9).unwrap();
        assert!((rep.worst_xi_ratio - 1.0).abs() < 1e-6);
        assert!(rep.pass);
        let rep = verify_box(&fam, &pbox(2.0, 0.0, 0, 1.5), 0.25, 9).unwrap();
        assert!(rep.degenerate && rep.pass && rep.samples == 1);
        let rep = verify_box(&fam, &pbox(golden(), 1e-4, 1, 1.0), 0.25, 9).unwrap();
        assert!(!rep.pass);
    }

    #[test]
    fn verify_box_monotone_in_lambda() {
        let fam = make_logistic();
        for r in [1e-5, 1e-4, 1e-3] {
            let mut passed = false;
            for lambda in [1.01, 1.1, 1.5, 2.0, 4.0, 16.0] {
                let ok = verify_box(&fam, &pbox(golden(), r, 1, lambda), 0.25, 9).unwrap().pass;
                assert!(ok || !passed, "r={r} lambda={lambda}");
                passed |= ok;
            }
        }
    }

    #[test]
    fn single_box_near_golden_parameter() {
        let fam = make_logistic();
        let cfg = BoxSearch {
            m_max: 1,
            grid: 1000,
            ..BoxSearch::default()
        };
        let res = box_family(&fam, 3.0, 4.0, 0, &cfg).unwrap();
        assert_eq!(res.boxes.len(), 1, "{res:?}");
        let b = &res.boxes[0];
        assert!((b.center - golden()).abs() < 1e-12);
        assert_eq!(b.order, 1);
        assert!(b.radius > 0.0 && b.radius <= cfg.eps);
        assert_eq!(res.special.as_ref().map(|s| s.special), Some(true));
        // ball depth is positive only deep inside the box
        let ball = b.as_ball();
        for i in 0..200 {
            let t = b.center - b.radius + 2.0 * b.radius * i as f64 / 199.0;
            if depth(t, &ball).value() != Some(0) {
                assert!((t - b.center).abs() < (-2f64).exp() * b.radius);
            }
        }
    }

    #[test]
    fn empty_range_gives_no_boxes() {
        let fam = make_logistic();
        let cfg = BoxSearch {
            m_max: 0,
            grid: 100,
            ..BoxSearch::default()
        };
        let res = box_family(&fam, 3.0, 3.2, 0, &cfg).unwrap();
        assert!(res.boxes.is_empty());
    }
}
