//! One-parameter families of interval maps `F(x, t) = f_t(x)` on `[0, 1]`.
//!
//! A [`MapFamily`] bundles a jet evaluator with the metadata the rest of the
//! crate relies on: the parameter domain, a base parameter, the critical
//! points of each `f_t`, and an upper bound for `|∂_t F|`.
//!
//! Two concrete constructors are provided: the logistic family
//! `a x (1 - x)` on `[0, 4]`, and the fixed-endpoint polynomial family
//! `P_a(x) = Σ a_i x^i + (1 - Σ a_i) x^{n+1}` moved along a direction in
//! coefficient space. Custom models can be plugged in through [`MapModel`].

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Values within this distance of `[0, 1]` are clamped instead of rejected.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// `|P''|` below this at a root of `P'` marks a degenerate critical point.
pub const MULTIPLICITY_TOL: f64 = 1e-9;

const DT_SUP_PROBES: usize = 10_000;
const DT_SUP_SAFETY: f64 = 1.01;
const INVARIANCE_PROBES: usize = 10_000;
const DEGENERACY_PARAM_SAMPLES: usize = 17;
const DEFAULT_POLY_HALF_WIDTH: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPointInfo {
    pub position: f64,
    /// Local order `ℓ(c) > 1`.
    pub order: f64,
    pub index: usize,
}

/// Values and first derivatives of `F` at a point `(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jet {
    pub f: f64,
    pub dfx: f64,
    pub d2fx: f64,
    pub dft: f64,
}

/// Raw map model. Implementations need not check domains; [`MapFamily`]
/// does that.
pub trait MapModel: Send + Sync + fmt::Debug {
    fn jet(&self, t: f64, x: f64) -> Jet;

    /// Critical points of `f_t` in `(0, 1)`, sorted by position.
    fn critical_points(&self, t: f64) -> Vec<CriticalPointInfo>;

    /// Jet evaluator with the parameter fixed, for iterating a single map.
    fn at(&self, t: f64) -> Box<dyn Fn(f64) -> Jet + '_> {
        Box::new(move |x| self.jet(t, x))
    }
}

#[derive(Debug)]
struct Logistic;

impl MapModel for Logistic {
    fn jet(&self, a: f64, x: f64) -> Jet {
        Jet {
            f: a * x * (1.0 - x),
            dfx: a * (1.0 - 2.0 * x),
            d2fx: -2.0 * a,
            dft: x * (1.0 - x),
        }
    }

    fn critical_points(&self, _a: f64) -> Vec<CriticalPointInfo> {
        vec![CriticalPointInfo {
            position: 0.5,
            order: 2.0,
            index: 0,
        }]
    }
}

/// `P_{a(t)}` with `a(t) = coeffs + (t - base) * direction`.
#[derive(Debug, Clone)]
struct FixedEndpointPoly {
    coeffs: Vec<f64>,
    direction: Vec<f64>,
    base: f64,
    /// `∂_t P`, independent of `t` since `P` is affine in the coefficients.
    dt_poly: Poly,
}

impl FixedEndpointPoly {
    fn new(coeffs: Vec<f64>, direction: Vec<f64>, base: f64) -> Self {
        let dt_poly = Poly::new(endpoint_coefficients(&direction, 0.0));
        FixedEndpointPoly {
            coeffs,
            direction,
            base,
            dt_poly,
        }
    }

    fn poly_at(&self, t: f64) -> Poly {
        let s = t - self.base;
        let a: Vec<f64> = self
            .coeffs
            .iter()
            .zip(&self.direction)
            .map(|(c, u)| c + s * u)
            .collect();
        Poly::new(endpoint_coefficients(&a, 1.0))
    }

    /// Critical points with multiplicities; returns the first degenerate
    /// position if one is found.
    fn critical_scan(&self, t: f64) -> (Vec<CriticalPointInfo>, Option<f64>) {
        let p = self.poly_at(t);
        let dp = p.derivative();
        let d2p = dp.derivative();
        let d3p = d2p.derivative();
        let mut degenerate = None;
        let mut crits = Vec::new();
        if dp.is_zero() {
            return (crits, None);
        }
        for r in dp.real_roots_in(0.0, 1.0) {
            if r <= 0.0 || r >= 1.0 {
                continue;
            }
            let mut mult = 1.0;
            if d2p.eval(r).abs() < MULTIPLICITY_TOL {
                mult = if d3p.eval(r).abs() < MULTIPLICITY_TOL { 3.0 } else { 2.0 };
                degenerate.get_or_insert(r);
            }
            crits.push(CriticalPointInfo {
                position: r,
                order: mult + 1.0,
                index: crits.len(),
            });
        }
        // double roots of P' that do not change sign sit at turning points of P'
        for r in d2p.real_roots_in(0.0, 1.0) {
            if r > 0.0 && r < 1.0 && dp.eval(r).abs() < MULTIPLICITY_TOL {
                degenerate.get_or_insert(r);
            }
        }
        (crits, degenerate)
    }
}

impl MapModel for FixedEndpointPoly {
    fn jet(&self, t: f64, x: f64) -> Jet {
        let p = self.poly_at(t);
        let dp = p.derivative();
        let d2p = dp.derivative();
        Jet {
            f: p.eval(x),
            dfx: dp.eval(x),
            d2fx: d2p.eval(x),
            dft: self.dt_poly.eval(x),
        }
    }

    fn critical_points(&self, t: f64) -> Vec<CriticalPointInfo> {
        self.critical_scan(t).0
    }

    fn at(&self, t: f64) -> Box<dyn Fn(f64) -> Jet + '_> {
        let p = self.poly_at(t);
        let dp = p.derivative();
        let d2p = dp.derivative();
        Box::new(move |x| Jet {
            f: p.eval(x),
            dfx: dp.eval(x),
            d2fx: d2p.eval(x),
            dft: self.dt_poly.eval(x),
        })
    }
}

/// Ascending coefficients of `Σ a_i x^i + (top - Σ a_i) x^{n+1}`.
fn endpoint_coefficients(a: &[f64], top: f64) -> Vec<f64> {
    let mut c = Vec::with_capacity(a.len() + 2);
    c.push(0.0);
    c.extend_from_slice(a);
    c.push(top - a.iter().sum::<f64>());
    c
}

#[derive(Debug)]
struct Rescaled {
    inner: Arc<dyn MapModel>,
    pivot: f64,
    kappa: f64,
}

impl Rescaled {
    fn inner_param(&self, t: f64) -> f64 {
        self.pivot + self.kappa * (t - self.pivot)
    }
}

impl MapModel for Rescaled {
    fn jet(&self, t: f64, x: f64) -> Jet {
        let mut j = self.inner.jet(self.inner_param(t), x);
        j.dft *= self.kappa;
        j
    }

    fn critical_points(&self, t: f64) -> Vec<CriticalPointInfo> {
        self.inner.critical_points(self.inner_param(t))
    }
}

#[derive(Debug)]
struct Frozen {
    inner: Arc<dyn MapModel>,
    at: f64,
}

impl MapModel for Frozen {
    fn jet(&self, _t: f64, x: f64) -> Jet {
        Jet {
            dft: 0.0,
            ..self.inner.jet(self.at, x)
        }
    }

    fn critical_points(&self, _t: f64) -> Vec<CriticalPointInfo> {
        self.inner.critical_points(self.at)
    }
}

/// An immutable one-parameter family of interval maps.
#[derive(Clone)]
pub struct MapFamily {
    model: Arc<dyn MapModel>,
    domain: (f64, f64),
    base: f64,
    dt_sup: f64,
    label: String,
}

impl fmt::Debug for MapFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MapFamily")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("base", &self.base)
            .field("dt_sup", &self.dt_sup)
            .finish()
    }
}

impl MapFamily {
    /// Wraps a custom model. `dt_sup` must bound `|∂_t F|` over the domain.
    pub fn from_model(
        model: Arc<dyn MapModel>,
        domain: (f64, f64),
        base: f64,
        dt_sup: f64,
        label: impl Into<String>,
    ) -> Result<MapFamily> {
        let (lo, hi) = domain;
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!("bad domain [{lo}, {hi}]")));
        }
        if !(lo..=hi).contains(&base) {
            return Err(Error::ParameterOutOfDomain { t: base, lo, hi });
        }
        if !(dt_sup >= 0.0) {
            return Err(Error::InvalidArgument(format!("dt_sup must be >= 0, got {dt_sup}")));
        }
        Ok(MapFamily {
            model,
            domain,
            base,
            dt_sup,
            label: label.into(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn parameter_domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn base_parameter(&self) -> f64 {
        self.base
    }

    pub fn dt_sup(&self) -> f64 {
        self.dt_sup
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.domain.0 && t <= self.domain.1
    }

    pub fn check_parameter(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::ParameterOutOfDomain {
                t,
                lo: self.domain.0,
                hi: self.domain.1,
            })
        }
    }

    /// Evaluates `F(x,t)`, `Df_t(x)`, `D²f_t(x)` and `∂_t F(x,t)`.
    ///
    /// Values within [`BOUNDARY_TOL`] of `[0, 1]` are clamped; anything
    /// further out is reported as [`Error::EvaluationEscaped`].
    pub fn jet(&self, t: f64, x: f64) -> Result<Jet> {
        self.check_parameter(t)?;
        if !(-BOUNDARY_TOL..=1.0 + BOUNDARY_TOL).contains(&x) {
            return Err(Error::InvalidArgument(format!("x = {x} outside [0, 1]")));
        }
        let mut j = self.model.jet(t, x.clamp(0.0, 1.0));
        if !(j.f >= -BOUNDARY_TOL && j.f <= 1.0 + BOUNDARY_TOL)
            || !j.dfx.is_finite()
            || !j.d2fx.is_finite()
            || !j.dft.is_finite()
        {
            return Err(Error::EvaluationEscaped { t, x, value: j.f });
        }
        j.f = j.f.clamp(0.0, 1.0);
        Ok(j)
    }

    /// Evaluator for the single map `f_t`, without domain or escape checks.
    pub fn map_at(&self, t: f64) -> Result<Box<dyn Fn(f64) -> Jet + '_>> {
        self.check_parameter(t)?;
        Ok(self.model.at(t))
    }

    pub fn critical_points(&self, t: f64) -> Vec<CriticalPointInfo> {
        self.model.critical_points(t)
    }

    pub fn critical_count(&self) -> usize {
        self.critical_points(self.base).len()
    }

    /// Largest critical order at the base parameter.
    pub fn ell_max(&self) -> Option<f64> {
        self.critical_points(self.base)
            .iter()
            .map(|c| c.order)
            .reduce(f64::max)
    }

    pub fn ell_min(&self) -> Option<f64> {
        self.critical_points(self.base)
            .iter()
            .map(|c| c.order)
            .reduce(f64::min)
    }

    /// `G(x, t) = F(x, t0 + κ (t - t0))` with `t0` the base parameter.
    pub fn rescale_parameter(&self, kappa: f64) -> Result<MapFamily> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::InvalidArgument(format!("kappa must be positive, got {kappa}")));
        }
        let t0 = self.base;
        let domain = (
            t0 + (self.domain.0 - t0) / kappa,
            t0 + (self.domain.1 - t0) / kappa,
        );
        MapFamily::from_model(
            Arc::new(Rescaled {
                inner: Arc::clone(&self.model),
                pivot: t0,
                kappa,
            }),
            domain,
            t0,
            self.dt_sup * kappa,
            format!("{}|rescaled({kappa})", self.label),
        )
    }

    /// The constant-in-`t` family `G(x, t) = F(x, at)`, with `∂_t G = 0`.
    pub fn frozen(&self, at: f64) -> Result<MapFamily> {
        self.check_parameter(at)?;
        MapFamily::from_model(
            Arc::new(Frozen {
                inner: Arc::clone(&self.model),
                at,
            }),
            self.domain,
            self.base,
            0.0,
            format!("{}|frozen({at})", self.label),
        )
    }

    /// Largest `|∂_t F|` over a uniform `(x, t)` grid; used to validate
    /// the stored `dt_sup` bound.
    pub fn sampled_dt_max(&self, x_probes: usize, t_probes: usize) -> f64 {
        let (lo, hi) = self.domain;
        let mut best = 0.0_f64;
        for it in 0..t_probes.max(1) {
            let t = if t_probes <= 1 {
                self.base
            } else {
                lo + (hi - lo) * it as f64 / (t_probes - 1) as f64
            };
            for ix in 0..x_probes.max(2) {
                let x = ix as f64 / (x_probes.max(2) - 1) as f64;
                best = best.max(self.model.jet(t, x).dft.abs());
            }
        }
        best
    }

    /// Whether the critical count is the same at `samples` evenly spaced
    /// parameters.
    pub fn critical_count_constant(&self, samples: usize) -> bool {
        let (lo, hi) = self.domain;
        let n0 = self.critical_count();
        (0..samples.max(2)).all(|i| {
            let t = lo + (hi - lo) * i as f64 / (samples.max(2) - 1) as f64;
            self.critical_points(t).len() == n0
        })
    }

    pub fn from_spec(spec: &FamilySpec) -> Result<MapFamily> {
        match spec.kind {
            FamilyKind::Logistic => {
                let fam = make_logistic();
                match spec.base {
                    Some(b) => {
                        fam.check_parameter(b)?;
                        Ok(MapFamily { base: b, ..fam })
                    }
                    None => Ok(fam),
                }
            }
            FamilyKind::Poly => make_poly_family_with(
                &spec.coeffs,
                spec.direction.as_deref(),
                spec.base.unwrap_or(0.0),
                spec.domain.map(|[a, b]| (a, b)),
            ),
        }
    }

    /// Resolves a CLI family argument: the builtin name `logistic` or a
    /// path to a JSON family specification.
    pub fn resolve(arg: &str) -> Result<MapFamily> {
        if arg == "logistic" {
            return Ok(make_logistic());
        }
        let text = std::fs::read_to_string(Path::new(arg))?;
        let spec: FamilySpec = serde_json::from_str(&text)?;
        MapFamily::from_spec(&spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Logistic,
    Poly,
}

/// JSON family description:
/// `{"kind": "logistic" | "poly", "coeffs": [...], "direction": [...], "base": t0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    #[serde(default)]
    pub coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 2]>,
}

/// The logistic family `a x (1 - x)`, `a ∈ [0, 4]`, based at `a = 4`.
pub fn make_logistic() -> MapFamily {
    MapFamily {
        model: Arc::new(Logistic),
        domain: (0.0, 4.0),
        base: 4.0,
        dt_sup: 0.25,
        label: "logistic".into(),
    }
}

/// Fixed-endpoint polynomial family along the first coordinate axis,
/// based at `t = 0`.
pub fn make_poly_family(coeffs: &[f64]) -> Result<MapFamily> {
    make_poly_family_with(coeffs, None, 0.0, None)
}

/// Fixed-endpoint polynomial family `t ↦ P_{coeffs + (t - base) u}`.
///
/// The map at the base parameter must send `[0, 1]` into itself, and no
/// sampled parameter may carry a degenerate critical point in `(0, 1)`.
pub fn make_poly_family_with(
    coeffs: &[f64],
    direction: Option<&[f64]>,
    base: f64,
    domain: Option<(f64, f64)>,
) -> Result<MapFamily> {
    let n = coeffs.len();
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one coefficient".into()));
    }
    let direction = match direction {
        Some(u) if u.len() != n => {
            return Err(Error::InvalidArgument(format!(
                "direction has {} entries, expected {n}",
                u.len()
            )))
        }
        Some(u) => u.to_vec(),
        None => {
            let mut u = vec![0.0; n];
            u[0] = 1.0;
            u
        }
    };
    if coeffs.iter().chain(&direction).any(|v| !v.is_finite()) || !base.is_finite() {
        return Err(Error::InvalidArgument("non-finite coefficient".into()));
    }
    let domain = domain.unwrap_or((base - DEFAULT_POLY_HALF_WIDTH, base + DEFAULT_POLY_HALF_WIDTH));
    let model = FixedEndpointPoly::new(coeffs.to_vec(), direction, base);

    let p = model.poly_at(base);
    for i in 0..=INVARIANCE_PROBES {
        let x = i as f64 / INVARIANCE_PROBES as f64;
        let v = p.eval(x);
        if !(-BOUNDARY_TOL..=1.0 + BOUNDARY_TOL).contains(&v) {
            return Err(Error::NotIntervalMap { x, value: v });
        }
    }

    let (lo, hi) = domain;
    let mut params = vec![base];
    params.extend((0..DEGENERACY_PARAM_SAMPLES).map(|i| {
        lo + (hi - lo) * i as f64 / (DEGENERACY_PARAM_SAMPLES - 1) as f64
    }));
    for t in params {
        if let (_, Some(x)) = model.critical_scan(t) {
            return Err(Error::DegenerateCritical { t, x });
        }
    }

    let dt_max = (0..=DT_SUP_PROBES)
        .map(|i| model.dt_poly.eval(i as f64 / DT_SUP_PROBES as f64).abs())
        .fold(0.0, f64::max);

    MapFamily::from_model(
        Arc::new(model),
        domain,
        base,
        dt_max * DT_SUP_SAFETY,
        format!("poly{coeffs:?}"),
    )
}

/// Witness for [`is_nondegenerate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Nondegeneracy {
    pub nondegenerate: bool,
    pub discriminant: f64,
}

/// Whether all critical points of `P_a` are simple, decided by the
/// discriminant of `P_a'`.
pub fn is_nondegenerate(coeffs: &[f64]) -> Nondegeneracy {
    let dp = Poly::new(endpoint_coefficients(coeffs, 1.0)).derivative();
    let d = dp.degree();
    let disc = dp.discriminant();
    if d <= 1 {
        return Nondegeneracy {
            nondegenerate: true,
            discriminant: disc,
        };
    }
    let scale = dp.max_abs_coeff().powi(2 * d as i32 - 2);
    Nondegeneracy {
        nondegenerate: disc.abs() > 1e-10 * scale,
        discriminant: disc,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn logistic_jets() {
        let fam = make_logistic();
        let j = fam.jet(4.0, 0.5).unwrap();
        assert_eq!(
            j,
            Jet {
                f: 1.0,
                dfx: 0.0,
                d2fx: -8.0,
                dft: 0.25
            }
        );
        let j = fam.jet(4.0, 1.0).unwrap();
        assert_eq!((j.f, j.dfx, j.d2fx, j.dft), (0.0, -4.0, -8.0, 0.0));
        let j = fam.jet(2.0, 0.5).unwrap();
        assert_eq!((j.f, j.dfx), (0.5, 0.0));
        assert_eq!(fam.jet(3.5, 0.5).unwrap().f, 0.875);
        assert_eq!(fam.parameter_domain(), (0.0, 4.0));
        assert_eq!(fam.critical_points(4.0)[0].position, 0.5);
        assert_eq!(fam.critical_points(4.0)[0].order, 2.0);
        assert_eq!(fam.dt_sup(), 0.25);
    }

    #[test]
    fn logistic_jet_matches_central_differences() {
        let fam = make_logistic();
        let h = 1e-6;
        let (a, x) = (3.7, 0.3);
        let j = fam.jet(a, x).unwrap();
        let fdx = (fam.jet(a, x + h).unwrap().f - fam.jet(a, x - h).unwrap().f) / (2.0 * h);
        let fdt = (fam.jet(a + h, x).unwrap().f - fam.jet(a - h, x).unwrap().f) / (2.0 * h);
        assert!(close(fdx, j.dfx, 1e-6 * j.dfx.abs()));
        assert!(close(fdt, j.dft, 1e-6 * j.dft.abs()));
    }

    #[test]
    fn domain_and_escape_errors() {
        let fam = make_logistic();
        assert!(matches!(fam.jet(4.1, 0.5), Err(Error::ParameterOutOfDomain { .. })));
        let wide = MapFamily::from_model(Arc::new(Logistic), (0.0, 5.0), 4.0, 0.25, "wide").unwrap();
        assert!(matches!(wide.jet(5.0, 0.5), Err(Error::EvaluationEscaped { .. })));
        // clamped inside tolerance
        let j = wide.jet(4.0 + 1e-13, 0.5).unwrap();
        assert_eq!(j.f, 1.0);
    }

    #[test]
    fn poly_examples_without_interior_critical_points() {
        let fam = make_poly_family(&[0.0]).unwrap();
        assert!(fam.critical_points(0.0).is_empty());
        let fam = make_poly_family(&[2.0]).unwrap();
        assert!(fam.critical_points(0.0).is_empty());
        let fam = make_poly_family(&[0.0, 2.0]).unwrap();
        assert!(fam.critical_points(0.0).is_empty());
        assert!(close(fam.jet(0.0, 0.5).unwrap().f, 2.0 * 0.25 - 0.125, 1e-15));
    }

    #[test]
    fn poly_fixes_endpoints() {
        let fam = make_poly_family_with(&[4.0, -9.0], Some(&[0.3, -0.4]), 0.0, None).unwrap();
        for t in [-0.05, 0.0, 0.05] {
            assert!(close(fam.jet(t, 0.0).unwrap().f, 0.0, 1e-15));
            assert!(close(fam.jet(t, 1.0).unwrap().f, 1.0, 1e-12));
        }
    }

    #[test]
    fn bimodal_cubic_critical_points() {
        // P = 4x - 9x^2 + 6x^3, P' = 18x^2 - 18x + 4 = 18 (x - 1/3)(x - 2/3)
        let fam = make_poly_family(&[4.0, -9.0]).unwrap();
        let crits = fam.critical_points(0.0);
        assert_eq!(crits.len(), 2);
        assert!(close(crits[0].position, 1.0 / 3.0, 1e-13));
        assert!(close(crits[1].position, 2.0 / 3.0, 1e-13));
        assert!(crits.iter().all(|c| c.order == 2.0));
        assert!(close(fam.jet(0.0, 1.0 / 3.0).unwrap().f, 5.0 / 9.0, 1e-14));
        assert!(close(fam.jet(0.0, 2.0 / 3.0).unwrap().f, 4.0 / 9.0, 1e-14));
        assert_eq!(fam.ell_max(), Some(2.0));
        assert!(fam.critical_count_constant(9));
    }

    #[test]
    fn poly_rejects_non_invariant() {
        assert!(matches!(make_poly_family(&[5.0]), Err(Error::NotIntervalMap { .. })));
        assert!(matches!(make_poly_family(&[-1.0]), Err(Error::NotIntervalMap { .. })));
    }

    #[test]
    fn poly_rejects_degenerate() {
        // P' = 12 (x - 1/2)^2: an inflection with zero slope at 1/2
        let err = make_poly_family(&[3.0, -6.0]).unwrap_err();
        assert!(matches!(err, Error::DegenerateCritical { .. }), "{err:?}");
    }

    #[test]
    fn nondegeneracy_witness() {
        // P' = 2 - 2x is linear
        assert!(is_nondegenerate(&[2.0]).nondegenerate);
        let w = is_nondegenerate(&[3.0, -6.0]);
        assert!(!w.nondegenerate);
        assert!(w.discriminant.abs() < 1e-9);
        assert!(is_nondegenerate(&[4.0, -9.0]).nondegenerate);
    }

    #[test]
    fn cubic_derivative_with_three_roots() {
        // P' = k (x - r1)(x - r2)(x - r3) with ∫_0^1 P' = 1
        let roots = [0.1, 0.4, 0.7];
        let cubic = |x: f64| roots.iter().map(|r| x - r).product::<f64>();
        // monic expansion of (x-r1)(x-r2)(x-r3)
        let e1: f64 = roots.iter().sum();
        let e2 = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2];
        let e3: f64 = roots.iter().product();
        let monic = [-e3, e2, -e1, 1.0];
        let integral: f64 = monic.iter().enumerate().map(|(i, c)| c / (i + 1) as f64).sum();
        let k = 1.0 / integral;
        let q: Vec<f64> = monic.iter().map(|c| c * k).collect();
        let a: Vec<f64> = (0..3).map(|i| q[i] / (i + 1) as f64).collect();
        assert!(close(4.0 * (1.0 - a.iter().sum::<f64>()), q[3], 1e-12 * q[3].abs()));
        let w = is_nondegenerate(&a);
        assert!(w.nondegenerate);
        let mut prod = 1.0;
        for i in 0..3 {
            for j in i + 1..3 {
                prod *= (roots[i] - roots[j]).powi(2);
            }
        }
        assert!(close(w.discriminant, k.powi(4) * prod, 1e-9 * (k.powi(4) * prod).abs()));
        // the isolated roots of P' are simple and match
        let p = Poly::new(endpoint_coefficients(&a, 1.0)).derivative();
        let found = p.real_roots_in(0.0, 1.0);
        assert_eq!(found.len(), 3);
        for (f, r) in found.iter().zip(roots) {
            assert!(close(*f, r, 1e-12));
            assert!(cubic(*f).abs() < 1e-12);
        }
    }

    #[test]
    fn rescale_identity_and_half() {
        let fam = make_logistic();
        let same = fam.rescale_parameter(1.0).unwrap();
        for (t, x) in [(3.9, 0.2), (3.5, 0.7), (4.0, 0.5)] {
            assert_eq!(fam.jet(t, x).unwrap(), same.jet(t, x).unwrap());
        }
        let half = fam.rescale_parameter(0.5).unwrap();
        assert_eq!(half.jet(4.0, 0.5).unwrap().dft, 0.125);
        assert_eq!(half.base_parameter(), 4.0);
        assert_eq!(half.dt_sup(), 0.125);
        assert_eq!(half.parameter_domain(), (-4.0, 4.0));
        let norm = fam.rescale_parameter(1.0 / fam.dt_sup()).unwrap();
        assert!(norm.dt_sup() <= 1.0);
    }

    #[test]
    fn frozen_family_has_zero_dt() {
        let fam = make_logistic().frozen(4.0).unwrap();
        assert_eq!(fam.dt_sup(), 0.0);
        let j = fam.jet(3.0, 0.5).unwrap();
        assert_eq!((j.f, j.dft), (1.0, 0.0));
    }

    #[test]
    fn spec_roundtrip() {
        let spec: FamilySpec =
            serde_json::from_str(r#"{"kind":"poly","coeffs":[4,-9],"direction":[0,1],"base":0}"#).unwrap();
        let fam = MapFamily::from_spec(&spec).unwrap();
        assert_eq!(fam.critical_count(), 2);
        let spec: FamilySpec = serde_json::from_str(r#"{"kind":"logistic","base":3.9}"#).unwrap();
        assert_eq!(MapFamily::from_spec(&spec).unwrap().base_parameter(), 3.9);
    }
}
