//! Critical orbits and the quantities read off them: derivative products,
//! summability sums, transversality sums, distortion sums, growth rates and
//! recurrence.
//!
//! Indexing: `points[j] = f_t^{j+1}(c)` and `cum_deriv[j] = Df_t^j(f_t(c))`,
//! so a statement about `f^n(c)` for `n >= 1` reads `points[n - 1]`.

use std::fmt;
use std::ops::Mul;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{MapFamily, BOUNDARY_TOL};

/// Largest log-magnitude converted back to a linear float.
const LINEAR_LOG_LIMIT: f64 = 700.0;

/// Number of trailing steps used to estimate the tail decay rate.
pub const TAIL_WINDOW: usize = 10;

/// A real number stored as a sign and the logarithm of its magnitude.
#[derive(Clone, Copy, PartialEq, Serialize)]
pub struct SignedLogReal {
    pub sign: i8,
    pub logmag: f64,
}

impl SignedLogReal {
    pub const ONE: SignedLogReal = SignedLogReal { sign: 1, logmag: 0.0 };
    pub const ZERO: SignedLogReal = SignedLogReal {
        sign: 0,
        logmag: f64::NEG_INFINITY,
    };

    pub fn from_f64(v: f64) -> SignedLogReal {
        if v == 0.0 {
            SignedLogReal::ZERO
        } else {
            SignedLogReal {
                sign: if v > 0.0 { 1 } else { -1 },
                logmag: v.abs().ln(),
            }
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    /// Linear value, saturating to a signed infinity past the overflow limit.
    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s if self.logmag > LINEAR_LOG_LIMIT => f64::INFINITY * s as f64,
            s => s as f64 * self.logmag.exp(),
        }
    }

    pub fn abs(self) -> SignedLogReal {
        SignedLogReal {
            sign: self.sign.abs(),
            logmag: self.logmag,
        }
    }
}

impl Mul for SignedLogReal {
    type Output = SignedLogReal;

    fn mul(self, rhs: SignedLogReal) -> SignedLogReal {
        let sign = self.sign * rhs.sign;
        if sign == 0 {
            return SignedLogReal::ZERO;
        }
        SignedLogReal {
            sign,
            logmag: self.logmag + rhs.logmag,
        }
    }
}

impl fmt::Debug for SignedLogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => f.write_str("0"),
            1 => write!(f, "+e^{}", self.logmag),
            _ => write!(f, "-e^{}", self.logmag),
        }
    }
}

/// Streaming `log Σ e^{x_i}`, factored by the running maximum.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    max: f64,
    scaled: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        LogSum {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }
}

impl LogSum {
    pub fn add(&mut self, log_term: f64) {
        if log_term == f64::NEG_INFINITY {
            return;
        }
        if log_term == f64::INFINITY {
            self.max = f64::INFINITY;
            self.scaled = 1.0;
        } else if self.max == f64::INFINITY {
        } else if log_term > self.max {
            self.scaled = self.scaled * (self.max - log_term).exp() + 1.0;
            self.max = log_term;
        } else {
            self.scaled += (log_term - self.max).exp();
        }
    }

    /// `log` of the sum; `-inf` when empty.
    pub fn log(&self) -> f64 {
        if self.max == f64::NEG_INFINITY || self.max == f64::INFINITY {
            self.max
        } else {
            self.max + self.scaled.ln()
        }
    }

    pub fn value(&self) -> f64 {
        self.log().exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitData {
    pub parameter: f64,
    pub critical_index: usize,
    pub critical_position: f64,
    /// Positions of all critical points of `f_t`.
    pub critical_set: Vec<f64>,
    pub points: Vec<f64>,
    pub cum_deriv: Vec<SignedLogReal>,
    pub crit_dist: Vec<f64>,
    /// First index whose point could not be computed inside `[0, 1]`.
    pub escaped: Option<usize>,
}

impl OrbitData {
    /// Largest valid index into `points`.
    pub fn length(&self) -> usize {
        self.points.len() - 1
    }

    /// Builds orbit data from precomputed points and derivative factors
    /// `Df_t(points[j])`, for tests and external trajectories.
    pub fn from_points(
        critical_set: Vec<f64>,
        critical_index: usize,
        points: Vec<f64>,
        derivs: &[f64],
    ) -> OrbitData {
        let mut cum = vec![SignedLogReal::ONE];
        for &d in derivs.iter().take(points.len().saturating_sub(1)) {
            let last = *cum.last().unwrap();
            cum.push(last * SignedLogReal::from_f64(d));
        }
        let crit_dist = points.iter().map(|&x| dist_to_set(x, &critical_set)).collect();
        OrbitData {
            parameter: f64::NAN,
            critical_index,
            critical_position: critical_set.get(critical_index).copied().unwrap_or(f64::NAN),
            critical_set,
            points,
            cum_deriv: cum,
            crit_dist,
            escaped: None,
        }
    }

    /// Index of the first vanishing derivative product in `0..=n`.
    pub fn first_zero_derivative(&self, n: usize) -> Option<usize> {
        self.cum_deriv.iter().take(n + 1).position(|d| d.is_zero())
    }

    fn require(&self, n: usize) -> Result<()> {
        if n > self.length() {
            return Err(Error::OrbitTooShort {
                needed: n,
                available: self.length(),
            });
        }
        match self.first_zero_derivative(n) {
            Some(index) => Err(Error::ZeroDerivativeOnOrbit { index }),
            None => Ok(()),
        }
    }
}

pub(crate) fn dist_to_set(x: f64, set: &[f64]) -> f64 {
    set.iter().map(|c| (x - c).abs()).fold(f64::INFINITY, f64::min)
}

/// Iterates the critical value `f_t(c)` for `n_max` steps.
///
/// Leaving `[0, 1]` beyond the boundary tolerance truncates the orbit and is
/// recorded in `escaped` rather than reported as an error.
pub fn critical_orbit(family: &MapFamily, t: f64, crit: usize, n_max: usize) -> Result<OrbitData> {
    let map = family.map_at(t)?;
    let crits = family.critical_points(t);
    let c = crits
        .get(crit)
        .ok_or(Error::NoSuchCritical {
            index: crit,
            count: crits.len(),
        })?
        .position;
    let critical_set: Vec<f64> = crits.iter().map(|ci| ci.position).collect();

    let mut points = Vec::with_capacity(n_max + 1);
    let mut cum_deriv = Vec::with_capacity(n_max + 1);
    let mut crit_dist = Vec::with_capacity(n_max + 1);
    let mut escaped = None;

    let v = map(c).f;
    if !in_unit(v) {
        return Err(Error::EvaluationEscaped { t, x: c, value: v });
    }
    let mut x = v.clamp(0.0, 1.0);
    let mut d = SignedLogReal::ONE;
    points.push(x);
    cum_deriv.push(d);
    crit_dist.push(dist_to_set(x, &critical_set));
    for j in 0..n_max {
        let jet = map(x);
        if !in_unit(jet.f) {
            escaped = Some(j + 1);
            break;
        }
        d = d * SignedLogReal::from_f64(jet.dfx);
        x = jet.f.clamp(0.0, 1.0);
        points.push(x);
        cum_deriv.push(d);
        crit_dist.push(dist_to_set(x, &critical_set));
    }
    Ok(OrbitData {
        parameter: t,
        critical_index: crit,
        critical_position: c,
        critical_set,
        points,
        cum_deriv,
        crit_dist,
        escaped,
    })
}

#[inline]
fn in_unit(v: f64) -> bool {
    (-BOUNDARY_TOL..=1.0 + BOUNDARY_TOL).contains(&v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summability {
    pub partial: f64,
    pub tail_ratio: f64,
}

/// `Σ_{n=0}^{N} |D_n|^{-1}`.
pub fn summability_partial(orbit: &OrbitData, n: usize) -> Result<Summability> {
    orbit.require(n)?;
    let partial: f64 = orbit.cum_deriv[..=n].iter().map(|d| (-d.logmag).exp()).sum();
    Ok(Summability {
        partial,
        tail_ratio: (-orbit.cum_deriv[n].logmag).exp() / partial,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transversality {
    pub m_n: f64,
    pub terms: Vec<f64>,
}

/// `M_n = Σ_{j=0}^{n} ∂_t F(f_t^j(c), t) / D_j`.
pub fn transversality_sum(family: &MapFamily, t: f64, crit: usize, n: usize) -> Result<Transversality> {
    let orbit = critical_orbit(family, t, crit, n)?;
    transversality_from_orbit(family, &orbit, n)
}

pub fn transversality_from_orbit(family: &MapFamily, orbit: &OrbitData, n: usize) -> Result<Transversality> {
    orbit.require(n)?;
    let map = family.map_at(orbit.parameter)?;
    let terms: Vec<f64> = (0..=n)
        .map(|j| {
            let x = if j == 0 { orbit.critical_position } else { orbit.points[j - 1] };
            let num = SignedLogReal::from_f64(map(x).dft);
            let den = orbit.cum_deriv[j];
            if num.is_zero() {
                0.0
            } else {
                (num.sign * den.sign) as f64 * (num.logmag - den.logmag).exp()
            }
        })
        .collect();
    Ok(Transversality {
        m_n: terms.iter().sum(),
        terms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NvCheck {
    pub a_c: f64,
    pub tail_bound: f64,
    pub nonzero: bool,
    /// Geometric-mean contraction of `|D_j|^{-1}` over the trailing window.
    pub ratio: f64,
}

/// Truncated transversality sum with a geometric tail bound.
pub fn nv_check(family: &MapFamily, t: f64, crit: usize, n: usize) -> Result<NvCheck> {
    let orbit = critical_orbit(family, t, crit, n)?;
    nv_from_orbit(family, &orbit, n)
}

pub fn nv_from_orbit(family: &MapFamily, orbit: &OrbitData, n: usize) -> Result<NvCheck> {
    if n == 0 {
        return Err(Error::OrbitTooShort { needed: 1, available: 0 });
    }
    let m = transversality_from_orbit(family, orbit, n)?;
    let window = TAIL_WINDOW.min(n);
    let growth = orbit.cum_deriv[n].logmag - orbit.cum_deriv[n - window].logmag;
    let ratio = (-growth / window as f64).exp();
    if !(ratio < 1.0) {
        return Err(Error::TailNotContracting { window, ratio });
    }
    let tail_bound = 2.0 * family.dt_sup() * (-orbit.cum_deriv[n].logmag).exp() * ratio / (1.0 - ratio);
    Ok(NvCheck {
        a_c: m.m_n,
        tail_bound,
        nonzero: m.m_n.abs() > tail_bound,
        ratio,
    })
}

/// `log 𝒜(x, t, n)` where `𝒜 = Σ_{j<n} |Df_t^j(x)| / dist(f_t^j(x), 𝒞)`;
/// `+inf` when the orbit meets a critical point, `-inf` when `n = 0`.
pub fn distortion_log_sum(family: &MapFamily, t: f64, x: f64, n: usize) -> Result<f64> {
    let map = family.map_at(t)?;
    let crits: Vec<f64> = family.critical_points(t).iter().map(|c| c.position).collect();
    let mut acc = LogSum::default();
    let mut y = x;
    let mut logd = 0.0;
    for j in 0..n {
        let dist = dist_to_set(y, &crits);
        if dist == 0.0 {
            return Ok(f64::INFINITY);
        }
        acc.add(logd - dist.ln());
        if j + 1 == n {
            break;
        }
        let jet = map(y);
        if !in_unit(jet.f) {
            return Err(Error::EvaluationEscaped { t, x: y, value: jet.f });
        }
        logd += jet.dfx.abs().ln();
        y = jet.f.clamp(0.0, 1.0);
    }
    Ok(acc.log())
}

/// `𝒜(x, t, n)`; `+inf` is an in-band sentinel for orbits through `𝒞`.
pub fn distortion_sum(family: &MapFamily, t: f64, x: f64, n: usize) -> Result<f64> {
    Ok(distortion_log_sum(family, t, x, n)?.exp())
}

/// Running `log 𝒜(f_t(c), t, n)` for `n = 0..=length`, read off the orbit.
pub fn distortion_prefix(orbit: &OrbitData) -> Vec<f64> {
    let mut acc = LogSum::default();
    let mut out = Vec::with_capacity(orbit.points.len());
    out.push(acc.log());
    for j in 0..orbit.length() {
        let dist = orbit.crit_dist[j];
        acc.add(if dist == 0.0 {
            f64::INFINITY
        } else {
            orbit.cum_deriv[j].logmag - dist.ln()
        });
        out.push(acc.log());
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CeExponent {
    pub inf_rate: f64,
    pub at_n: usize,
}

/// `min_{n_min <= n <= length} log|D_n| / n`.
pub fn ce_exponent(orbit: &OrbitData, n_min: usize) -> Result<CeExponent> {
    if n_min == 0 {
        return Err(Error::InvalidArgument("n_min must be >= 1".into()));
    }
    let len = orbit.length();
    orbit.require(len)?;
    if n_min > len {
        return Err(Error::OrbitTooShort {
            needed: n_min,
            available: len,
        });
    }
    let mut best = CeExponent {
        inf_rate: f64::INFINITY,
        at_n: n_min,
    };
    for n in n_min..=len {
        let rate = orbit.cum_deriv[n].logmag / n as f64;
        if rate < best.inf_rate {
            best = CeExponent { inf_rate: rate, at_n: n };
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Recurrence {
    pub best_c: f64,
    pub worst_n: usize,
}

/// `min_{n >= 1} dist(f^n(c), 𝒞) n^β` over the computed orbit.
pub fn recurrence_profile(orbit: &OrbitData, beta: f64) -> Recurrence {
    let mut best = Recurrence {
        best_c: f64::INFINITY,
        worst_n: 1,
    };
    for (i, &d) in orbit.crit_dist.iter().enumerate() {
        let n = (i + 1) as f64;
        let v = d * n.powf(beta);
        if v < best.best_c {
            best = Recurrence {
                best_c: v,
                worst_n: i + 1,
            };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::make_logistic;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn chebyshev_orbit() {
        let fam = make_logistic();
        let o = critical_orbit(&fam, 4.0, 0, 3).unwrap();
        assert_eq!(o.points, vec![1.0, 0.0, 0.0, 0.0]);
        let mags: Vec<f64> = o.cum_deriv.iter().map(|d| d.to_f64().abs()).collect();
        for (m, e) in mags.iter().zip([1.0, 4.0, 16.0, 64.0]) {
            assert!(close(*m, e, 1e-12 * e));
        }
        let signs: Vec<i8> = o.cum_deriv.iter().map(|d| d.sign).collect();
        assert_eq!(signs, vec![1, -1, -1, -1]);
    }

    #[test]
    fn superstable_and_empty_orbits() {
        let fam = make_logistic();
        let o = critical_orbit(&fam, 2.0, 0, 5).unwrap();
        assert!(o.points.iter().all(|&x| x == 0.5));
        assert!(o.cum_deriv[1..].iter().all(|d| d.is_zero()));
        let o = critical_orbit(&fam, 3.3, 0, 0).unwrap();
        assert_eq!(o.points, vec![3.3 / 4.0]);
        assert_eq!(o.cum_deriv, vec![SignedLogReal::ONE]);
        assert!(matches!(critical_orbit(&fam, 3.3, 1, 4), Err(Error::NoSuchCritical { .. })));
    }

    #[test]
    fn summability_examples() {
        let fam = make_logistic();
        let o = critical_orbit(&fam, 4.0, 0, 30).unwrap();
        assert!(close(summability_partial(&o, 30).unwrap().partial, 4.0 / 3.0, 1e-10));
        assert_eq!(summability_partial(&o, 0).unwrap().partial, 1.0);
        let o = critical_orbit(&fam, 2.0, 0, 3).unwrap();
        assert_eq!(
            summability_partial(&o, 1),
            Err(Error::ZeroDerivativeOnOrbit { index: 1 })
        );
    }

    #[test]
    fn transversality_examples() {
        let fam = make_logistic();
        for n in [0, 1, 2, 7] {
            assert_eq!(transversality_sum(&fam, 4.0, 0, n).unwrap().m_n, 0.25);
        }
        let t = transversality_sum(&fam, 3.7, 0, 0).unwrap();
        assert_eq!(t.m_n, 0.25);
    }

    #[test]
    fn transversality_matches_finite_difference_at_3_9() {
        let fam = make_logistic();
        let n = 10;
        let xi = |a: f64| critical_orbit(&fam, a, 0, n).unwrap().points[n];
        let h = 1e-7;
        let fd = (xi(3.9 + h) - xi(3.9 - h)) / (2.0 * h);
        let o = critical_orbit(&fam, 3.9, 0, n).unwrap();
        let m = transversality_sum(&fam, 3.9, 0, n).unwrap().m_n;
        let pred = m * o.cum_deriv[n].to_f64();
        assert!(close(fd, pred, 1e-5 * pred.abs()), "{fd} vs {pred}");
    }

    #[test]
    fn nv_examples() {
        let fam = make_logistic();
        let nv = nv_check(&fam, 4.0, 0, 30).unwrap();
        assert_eq!(nv.a_c, 0.25);
        assert!(nv.tail_bound < 1e-15);
        assert!(nv.nonzero);
        let frozen = fam.frozen(4.0).unwrap();
        let nv = nv_check(&frozen, 4.0, 0, 30).unwrap();
        assert_eq!(nv.a_c, 0.0);
        assert!(!nv.nonzero);
        assert!(matches!(nv_check(&fam, 2.0, 0, 30), Err(Error::ZeroDerivativeOnOrbit { .. })));
        // attracting cycle: inverse derivatives grow
        assert!(matches!(nv_check(&fam, 3.5, 0, 300), Err(Error::TailNotContracting { .. })));
    }

    #[test]
    fn distortion_examples() {
        let fam = make_logistic();
        assert!(close(distortion_sum(&fam, 4.0, 1.0, 2).unwrap(), 10.0, 1e-13));
        assert_eq!(distortion_sum(&fam, 4.0, 1.0, 0).unwrap(), 0.0);
        assert_eq!(distortion_sum(&fam, 2.0, 0.5, 1).unwrap(), f64::INFINITY);
    }

    #[test]
    fn distortion_prefix_agrees_with_direct_sum() {
        let fam = make_logistic();
        let o = critical_orbit(&fam, 3.87, 0, 40).unwrap();
        let pre = distortion_prefix(&o);
        for n in [1, 5, 17, 40] {
            let direct = distortion_log_sum(&fam, 3.87, o.points[0], n).unwrap();
            assert!(close(pre[n], direct, 1e-12 * direct.abs().max(1.0)));
        }
    }

    #[test]
    fn ce_examples() {
        let fam = make_logistic();
        let o = critical_orbit(&fam, 4.0, 0, 100).unwrap();
        let ce = ce_exponent(&o, 1).unwrap();
        assert!(close(ce.inf_rate, 4f64.ln(), 1e-12));
        let neutral = OrbitData::from_points(vec![0.5], 0, vec![0.9; 20], &[1.0; 19]);
        assert_eq!(ce_exponent(&neutral, 1).unwrap().inf_rate, 0.0);
        let o = critical_orbit(&fam, 3.5, 0, 300).unwrap();
        assert!(ce_exponent(&o, 50).unwrap().inf_rate < 0.0);
    }

    #[test]
    fn attracting_cycle_multiplier_is_below_one() {
        // oracle: product of derivatives over the limiting 4-cycle
        let a = 3.5;
        let mut x = 0.5;
        for _ in 0..5000 {
            x = a * x * (1.0 - x);
        }
        let mut mult = 1.0_f64;
        for _ in 0..4 {
            mult *= a * (1.0 - 2.0 * x);
            x = a * x * (1.0 - x);
        }
        assert!(mult.abs() < 1.0);
    }

    #[test]
    fn recurrence_examples() {
        let fam = make_logistic();
        let o = critical_orbit(&fam, 4.0, 0, 100).unwrap();
        let r = recurrence_profile(&o, 2.0);
        assert_eq!((r.best_c, r.worst_n), (0.5, 1));
        let o = critical_orbit(&fam, 2.0, 0, 10).unwrap();
        assert_eq!(recurrence_profile(&o, 2.0).best_c, 0.0);
    }

    #[test]
    fn log_sum_handles_extremes() {
        let mut s = LogSum::default();
        assert_eq!(s.log(), f64::NEG_INFINITY);
        s.add(1000.0);
        s.add(1000.0);
        assert!(close(s.log(), 1000.0 + 2f64.ln(), 1e-12));
        s.add(f64::INFINITY);
        s.add(3.0);
        assert_eq!(s.log(), f64::INFINITY);
    }

    proptest! {
        #[test]
        fn cum_deriv_recomputes(a in 3.6f64..4.0, n in 1usize..200) {
            let fam = make_logistic();
            let o = critical_orbit(&fam, a, 0, n).unwrap();
            for j in 0..n {
                let step = SignedLogReal::from_f64(a * (1.0 - 2.0 * o.points[j]));
                prop_assert_eq!(o.cum_deriv[j + 1], o.cum_deriv[j] * step);
            }
        }

        #[test]
        fn summability_monotone(a in 3.6f64..4.0, n in 1usize..60) {
            let fam = make_logistic();
            let o = critical_orbit(&fam, a, 0, n).unwrap();
            if o.first_zero_derivative(n).is_none() {
                let lo = summability_partial(&o, n - 1).unwrap().partial;
                let hi = summability_partial(&o, n).unwrap().partial;
                prop_assert!(hi >= lo);
            }
        }

        #[test]
        fn ce_monotone_in_n_min(a in 3.6f64..4.0, k in 1usize..100) {
            let fam = make_logistic();
            let o = critical_orbit(&fam, a, 0, 200).unwrap();
            let lo = ce_exponent(&o, k).unwrap().inf_rate;
            let hi = ce_exponent(&o, k + 1).unwrap().inf_rate;
            prop_assert!(hi >= lo);
        }

        #[test]
        fn distortion_matches_linear_sum(a in 3.6f64..4.0, x in 0.01f64..0.99, n in 0usize..30) {
            let fam = make_logistic();
            let got = distortion_sum(&fam, a, x, n).unwrap();
            let (mut y, mut d, mut lin) = (x, 1.0f64, 0.0);
            for _ in 0..n {
                lin += d / (y - 0.5).abs();
                d *= (a * (1.0 - 2.0 * y)).abs();
                y = a * y * (1.0 - y);
            }
            prop_assert!((got - lin).abs() <= 1e-12 * lin);
            if n > 0 {
                prop_assert!(distortion_sum(&fam, a, x, n - 1).unwrap() <= got);
            }
        }

        #[test]
        fn recurrence_monotone_in_beta(a in 3.6f64..4.0, b in 1.01f64..3.0) {
            let fam = make_logistic();
            let o = critical_orbit(&fam, a, 0, 100).unwrap();
            prop_assert!(recurrence_profile(&o, b).best_c <= recurrence_profile(&o, b + 0.5).best_c);
        }
    }
}
