//! Finite families of balls on the line, their depth functions, special
//! families, height stratification and the measure of deep sets.
//!
//! Balls are open intervals `B(a, r)`, and `B^{(k)} = B(a, e^{-k} r)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::depth::{annulus_index, level, Depth};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: f64,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: f64, radius: f64) -> Result<Ball> {
        if !(radius > 0.0) || !radius.is_finite() || !center.is_finite() {
            return Err(Error::InvalidArgument(format!("bad ball B({center}, {radius})")));
        }
        Ok(Ball { center, radius })
    }

    /// Radius of `B^{(k)}`.
    pub fn level(&self, k: i64) -> f64 {
        level(self.radius, k)
    }

    pub fn shrunk(&self, k: i64) -> Ball {
        Ball {
            center: self.center,
            radius: self.level(k),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.center).abs() < self.radius
    }

    pub fn contains_ball(&self, other: &Ball) -> bool {
        (other.center - self.center).abs() + other.radius <= self.radius
    }

    pub fn disjoint(&self, other: &Ball) -> bool {
        (other.center - self.center).abs() >= self.radius + other.radius
    }

    pub fn measure(&self) -> f64 {
        2.0 * self.radius
    }
}

/// `dep(x | B)`: zero outside `B^{(2)}`, otherwise the smallest `k` with
/// `|x - a| >= e^{-k} r`. Takes values in `{0} ∪ {3, 4, ...}`.
pub fn depth(x: f64, b: &Ball) -> Depth {
    let dist = (x - b.center).abs();
    if dist < b.level(2) {
        annulus_index(dist, b.radius)
    } else {
        Depth::ZERO
    }
}

/// `min(dep(x | B), cap)` without the logarithm, for hot loops.
#[inline]
fn capped_depth(x: f64, b: &Ball, cap: u32) -> u32 {
    let dist = (x - b.center).abs();
    if dist >= b.level(2) {
        return 0;
    }
    let mut k = 3;
    while k < cap && dist < b.level(k as i64) {
        k += 1;
    }
    k.min(cap)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Specialness {
    pub special: bool,
    pub violation: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Strata {
    pub strata: Vec<Vec<usize>>,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BallFamily {
    pub balls: Vec<Ball>,
}

impl BallFamily {
    pub fn new(balls: Vec<Ball>) -> Result<BallFamily> {
        for b in &balls {
            Ball::new(b.center, b.radius)?;
        }
        Ok(BallFamily { balls })
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn from_json(text: &str) -> Result<BallFamily> {
        let balls: Vec<Ball> = serde_json::from_str(text)?;
        BallFamily::new(balls)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.balls)?)
    }

    fn check_centers(&self) -> Result<()> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.balls[a].center.total_cmp(&self.balls[b].center));
        for w in idx.windows(2) {
            if self.balls[w[0]].center == self.balls[w[1]].center {
                return Err(Error::DuplicateCenters {
                    i: w[0].min(w[1]),
                    j: w[0].max(w[1]),
                });
            }
        }
        Ok(())
    }

    /// Checks that every `B_i` whose center lies in `B_j^{(1)}` sits in
    /// some annulus `B_j^{(k-1)} \ B_j^{(k+1)}`, `k >= 1`.
    pub fn is_special(&self) -> Result<Specialness> {
        self.check_centers()?;
        for (i, bi) in self.balls.iter().enumerate() {
            for (j, bj) in self.balls.iter().enumerate() {
                if i == j || !bj.shrunk(1).contains(bi.center) {
                    continue;
                }
                if !pair_is_nested(bi, bj) {
                    return Ok(Specialness {
                        special: false,
                        violation: Some((i, j)),
                    });
                }
            }
        }
        Ok(Specialness {
            special: true,
            violation: None,
        })
    }

    /// Peels off `ℐ_0, ℐ_1, ...`: each stratum holds the remaining balls
    /// whose centers avoid `B_j^{(1)}` for every other remaining `j`.
    pub fn strata(&self) -> Result<Strata> {
        if let Specialness {
            special: false,
            violation: Some((i, j)),
        } = self.is_special()?
        {
            return Err(Error::NotSpecial { i, j });
        }
        let mut remaining: Vec<usize> = (0..self.len()).collect();
        let mut strata = Vec::new();
        while !remaining.is_empty() {
            let layer: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| {
                    remaining
                        .iter()
                        .all(|&j| j == i || !self.balls[j].shrunk(1).contains(self.balls[i].center))
                })
                .collect();
            if layer.is_empty() {
                // cannot happen for special families: the largest ball is always free
                return Err(Error::NotSpecial {
                    i: remaining[0],
                    j: remaining[0],
                });
            }
            remaining.retain(|i| !layer.contains(i));
            strata.push(layer);
        }
        let height = strata.len();
        Ok(Strata { strata, height })
    }

    pub fn height(&self) -> Result<usize> {
        Ok(self.strata()?.height)
    }

    pub fn subfamily(&self, idx: &[usize]) -> BallFamily {
        BallFamily {
            balls: idx.iter().map(|&i| self.balls[i]).collect(),
        }
    }

    /// `supp(𝓜)`: the union of the balls.
    pub fn support(&self) -> IntervalSet {
        IntervalSet::union(self.balls.iter().map(|b| (b.center - b.radius, b.center + b.radius)))
    }

    /// `Σ_i dep(x | B_i)`.
    pub fn total_depth(&self, x: f64) -> Depth {
        let mut sum: u64 = 0;
        for b in &self.balls {
            let d = depth(x, b);
            if d.is_infinite() {
                return Depth::INFINITE;
            }
            sum += d.value().unwrap() as u64;
        }
        Depth::finite(sum.min(u32::MAX as u64 - 1) as u32)
    }

    /// Whether `Σ_i dep(x | B_i) >= n`, stopping early.
    pub fn depth_at_least(&self, x: f64, n: u32) -> bool {
        let mut sum = 0;
        for b in &self.balls {
            sum += capped_depth(x, b, n);
            if sum >= n {
                return true;
            }
        }
        sum >= n
    }
}

fn pair_is_nested(bi: &Ball, bj: &Ball) -> bool {
    let k_max = (bj.radius / bi.radius).ln().ceil().max(0.0) as i64 + 3;
    (1..=k_max).any(|k| bj.shrunk(k - 1).contains_ball(bi) && bj.shrunk(k + 1).disjoint(bi))
}

/// A finite union of disjoint open intervals, sorted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalSet {
    pub intervals: Vec<(f64, f64)>,
    pub total_measure: f64,
    /// Set when a ball center coincides with a breakpoint of the sweep.
    pub touches_center: bool,
}

impl IntervalSet {
    pub fn empty() -> IntervalSet {
        IntervalSet {
            intervals: Vec::new(),
            total_measure: 0.0,
            touches_center: false,
        }
    }

    /// Union of arbitrary open intervals; overlapping or touching pieces
    /// are merged.
    pub fn union(pieces: impl IntoIterator<Item = (f64, f64)>) -> IntervalSet {
        let mut v: Vec<(f64, f64)> = pieces.into_iter().filter(|(a, b)| a < b).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        let total_measure = out.iter().map(|(a, b)| b - a).sum();
        IntervalSet {
            intervals: out,
            total_measure,
            touches_center: false,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.intervals.partition_point(|&(a, _)| a < x);
        i > 0 && x < self.intervals[i - 1].1
    }
}

/// `X_𝓜(N) = {x ∈ supp(𝓜) : Σ_i dep(x | B_i) >= N}`, computed exactly by
/// sweeping the breakpoints `a_i ± e^{-k} r_i` of the capped depth profiles.
pub fn deep_set(fam: &BallFamily, n: u32) -> IntervalSet {
    if n == 0 {
        return fam.support();
    }
    let mut points: Vec<f64> = Vec::new();
    for b in &fam.balls {
        points.push(b.center - b.radius);
        points.push(b.center + b.radius);
        for k in 2..n.max(3) as i64 {
            let r = b.level(k);
            points.push(b.center - r);
            points.push(b.center + r);
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let touches_center = fam.balls.iter().any(|b| points.binary_search_by(|p| p.total_cmp(&b.center)).is_ok());
    let keep = points.windows(2).filter_map(|w| {
        let mid = 0.5 * (w[0] + w[1]);
        let inside = fam.balls.iter().any(|b| b.contains(mid));
        (inside && fam.depth_at_least(mid, n)).then_some((w[0], w[1]))
    });
    let mut set = IntervalSet::union(keep);
    set.touches_center = touches_center;
    set
}

/// `K(κ) = e^5 / (1 - e^{-κ})`.
pub fn lemma_constant(kappa: f64) -> f64 {
    5f64.exp() / (1.0 - (-kappa).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub measure: f64,
    pub bound: f64,
    pub support: f64,
    pub height: usize,
    pub k: f64,
    pub pass: bool,
}

/// `|X_𝓜(N)| <= K^n e^{-(1-κ)N} |supp(𝓜)|` with `n` the height.
pub fn lemma_bound_check(fam: &BallFamily, n: u32, kappa: f64) -> Result<LemmaCheck> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::InvalidArgument(format!("kappa must lie in (0, 1), got {kappa}")));
    }
    let height = fam.height()?;
    let k = lemma_constant(kappa);
    let measure = deep_set(fam, n).total_measure;
    let support = fam.support().total_measure;
    let bound = k.powi(height as i32) * (-(1.0 - kappa) * n as f64).exp() * support;
    Ok(LemmaCheck {
        measure,
        bound,
        support,
        height,
        k,
        pass: measure <= bound * (1.0 + 1e-12),
    })
}

const PLACEMENT_ATTEMPTS: usize = 2000;
const TOP_LEVEL_PROBABILITY: f64 = 0.3;

/// Deterministic random special family of `count` balls inside `[0, scale]`
/// with height at most `height_cap`.
///
/// Top-level balls are pairwise disjoint. Every other ball is placed inside
/// an annulus `B^{(k-1)} \ B^{(k+1)}`, `k ∈ {2, 3, 4}`, of a parent, and is
/// disjoint from every ball that is not one of its ancestors, so specialness
/// holds by construction and the height equals the deepest generation.
pub fn random_special_family(seed: u64, count: usize, height_cap: usize, scale: f64) -> Result<BallFamily> {
    if count == 0 || height_cap == 0 || !(scale > 0.0) {
        return Err(Error::InvalidArgument("need count >= 1, height_cap >= 1, scale > 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut balls: Vec<Ball> = Vec::with_capacity(count);
    let mut parent: Vec<Option<usize>> = Vec::with_capacity(count);
    let mut generation: Vec<usize> = Vec::with_capacity(count);

    let is_ancestor = |parent: &[Option<usize>], mut node: Option<usize>, target: usize| {
        while let Some(p) = node {
            if p == target {
                return true;
            }
            node = parent[p];
        }
        false
    };

    while balls.len() < count {
        let mut placed = false;
        for _ in 0..PLACEMENT_ATTEMPTS {
            let eligible: Vec<usize> = (0..balls.len()).filter(|&i| generation[i] + 1 < height_cap).collect();
            let top = balls.is_empty() || eligible.is_empty() || rng.gen::<f64>() < TOP_LEVEL_PROBABILITY;
            let (cand, par) = if top {
                let r = scale * rng.gen_range(0.2..1.0) / (4.0 * count as f64);
                let a = rng.gen_range(r..scale - r);
                (Ball { center: a, radius: r }, None)
            } else {
                let p = eligible[rng.gen_range(0..eligible.len())];
                let pb = balls[p];
                let k = rng.gen_range(2..=4) as i64;
                let inner = pb.level(k + 1);
                let outer = pb.level(k - 1);
                let dist = rng.gen_range(inner..outer);
                let margin = (dist - inner).min(outer - dist);
                let r = margin * rng.gen_range(0.1..0.9);
                let side = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                (
                    Ball {
                        center: pb.center + side * dist,
                        radius: r,
                    },
                    Some(p),
                )
            };
            if !(cand.radius > 0.0) {
                continue;
            }
            let clash = balls
                .iter()
                .enumerate()
                .any(|(j, b)| !is_ancestor(&parent, par, j) && !b.disjoint(&cand));
            if clash || balls.iter().any(|b| b.center == cand.center) {
                continue;
            }
            generation.push(par.map_or(0, |p| generation[p] + 1));
            parent.push(par);
            balls.push(cand);
            placed = true;
            break;
        }
        if !placed {
            return Err(Error::GenerationFailed(format!(
                "placed {} of {count} balls",
                balls.len()
            )));
        }
    }
    let fam = BallFamily { balls };
    match fam.is_special()? {
        Specialness { special: true, .. } => {}
        Specialness { violation, .. } => {
            return Err(Error::GenerationFailed(format!("specialness violated at {violation:?}")));
        }
    }
    Ok(fam)
}

/// `Σ_{i ∈ ℐ_0} |B_i^{(k)}|`.
pub fn top_stratum_level_measure(fam: &BallFamily, k: i64) -> Result<f64> {
    let strata = fam.strata()?;
    Ok(strata
        .strata
        .first()
        .map_or(0.0, |s| s.iter().map(|&i| fam.balls[i].shrunk(k).measure()).sum()))
}
