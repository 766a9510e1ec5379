//! Integer depth of a point inside a nested family of shrinking balls.
//!
//! Both the return depth `q_eps` and the ball depth `dep(x|B)` are of the
//! form "smallest `k` with `|x - a| >= e^{-k} r`". They share the level
//! computation here so that breakpoints and point evaluations agree bit for
//! bit.

use std::fmt;

use serde::{Serialize, Serializer};

/// A natural number or the infinite sentinel (point exactly at a center).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Depth(u32);

impl Depth {
    pub const ZERO: Depth = Depth(0);
    pub const INFINITE: Depth = Depth(u32::MAX);

    pub fn finite(k: u32) -> Depth {
        assert!(k != u32::MAX, "depth overflow");
        Depth(k)
    }

    pub fn is_infinite(self) -> bool {
        self.0 == u32::MAX
    }

    pub fn value(self) -> Option<u32> {
        (!self.is_infinite()).then_some(self.0)
    }

    pub fn as_f64(self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            self.0 as f64
        }
    }
}

impl fmt::Debug for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(k) => write!(f, "{k}"),
            None => f.write_str("inf"),
        }
    }
}

impl Serialize for Depth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.value() {
            Some(k) => s.serialize_u32(k),
            None => s.serialize_str("inf"),
        }
    }
}

/// Radius `e^{-k} r` of the `k`-th shrunken ball.
#[inline]
pub fn level(radius: f64, k: i64) -> f64 {
    radius * (-(k as f64)).exp()
}

/// Smallest `k >= 0` with `dist >= e^{-k} radius`; infinite when `dist == 0`.
pub fn annulus_index(dist: f64, radius: f64) -> Depth {
    debug_assert!(dist >= 0.0 && radius > 0.0);
    if dist >= radius {
        return Depth::ZERO;
    }
    if dist == 0.0 {
        return Depth::INFINITE;
    }
    let guess = (radius / dist).ln().ceil().max(1.0);
    if !guess.is_finite() || guess >= (u32::MAX - 2) as f64 {
        return Depth::INFINITE;
    }
    let mut k = guess as i64;
    // closed form can be off by one near level boundaries
    while k > 0 && dist >= level(radius, k - 1) {
        k -= 1;
    }
    while dist < level(radius, k) {
        k += 1;
    }
    Depth::finite(k as u32)
}
