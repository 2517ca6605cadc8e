//! Triangular fuzzy numbers and the credibility machinery built on them.
//!
//! Credibility is the mean of possibility and necessity:
//! `Cr{A} = (Pos{A} + 1 - Pos{not A}) / 2`. Evaluating it through the
//! possibility suprema (rather than the closed-form legs directly) gives the
//! right limits on degenerate legs such as `(8, 9, 9)` or crisp `(v, v, v)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Fuzzy quantity `(r, s, u)` with `r <= s <= u`: support `[r, u]`, peak `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangularFuzzyNumber {
    r: f64,
    s: f64,
    u: f64,
}

impl TriangularFuzzyNumber {
    pub fn new(r: f64, s: f64, u: f64) -> Result<Self> {
        if !(r.is_finite() && s.is_finite() && u.is_finite()) {
            return Err(Error::Domain(format!("fuzzy number ({r}, {s}, {u}) has a non-finite entry")));
        }
        if !(r <= s && s <= u) {
            return Err(Error::Domain(format!("fuzzy number ({r}, {s}, {u}) is not ordered r <= s <= u")));
        }
        Ok(TriangularFuzzyNumber { r, s, u })
    }

    /// The degenerate triplet `(v, v, v)`.
    pub fn crisp(v: f64) -> Self {
        TriangularFuzzyNumber { r: v, s: v, u: v }
    }

    pub fn lower(&self) -> f64 {
        self.r
    }

    pub fn peak(&self) -> f64 {
        self.s
    }

    pub fn upper(&self) -> f64 {
        self.u
    }

    pub fn is_crisp(&self) -> bool {
        self.r == self.u
    }

    pub fn membership(&self, x: f64) -> f64 {
        membership(self, x)
    }

    pub fn cut(&self, beta: f64) -> Result<CutBounds> {
        cut_bounds(self, beta)
    }

    /// `sup { mu(x) : x <= b }`
    fn pos_at_most(&self, b: f64) -> f64 {
        if b >= self.s {
            1.0
        } else if b >= self.r {
            (b - self.r) / (self.s - self.r)
        } else {
            0.0
        }
    }

    /// `sup { mu(x) : x > b }`
    fn pos_above(&self, b: f64) -> f64 {
        if b < self.s {
            1.0
        } else if b < self.u {
            (self.u - b) / (self.u - self.s)
        } else {
            0.0
        }
    }

    /// `sup { mu(x) : x >= b }`
    fn pos_at_least(&self, b: f64) -> f64 {
        if b <= self.s {
            1.0
        } else if b <= self.u {
            (self.u - b) / (self.u - self.s)
        } else {
            0.0
        }
    }

    /// `sup { mu(x) : x < b }`
    fn pos_below(&self, b: f64) -> f64 {
        if b > self.s {
            1.0
        } else if b > self.r {
            (b - self.r) / (self.s - self.r)
        } else {
            0.0
        }
    }
}

impl fmt::Display for TriangularFuzzyNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.s, self.u)
    }
}

/// Closed interval produced by cutting a fuzzy number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutBounds {
    pub lower: f64,
    pub upper: f64,
}

impl CutBounds {
    pub fn point(v: f64) -> Self {
        CutBounds { lower: v, upper: v }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

pub fn membership(f: &TriangularFuzzyNumber, x: f64) -> f64 {
    if x == f.s {
        1.0
    } else if f.r <= x && x < f.s {
        (x - f.r) / (f.s - f.r)
    } else if f.s < x && x <= f.u {
        (f.u - x) / (f.u - f.s)
    } else {
        0.0
    }
}

/// `Cr{M <= b}`.
pub fn credibility_leq(f: &TriangularFuzzyNumber, b: f64) -> f64 {
    0.5 * (f.pos_at_most(b) + 1.0 - f.pos_above(b))
}

/// `Cr{M >= b}`.
pub fn credibility_geq(f: &TriangularFuzzyNumber, b: f64) -> f64 {
    0.5 * (f.pos_at_least(b) + 1.0 - f.pos_below(b))
}

/// Bounds of the cut at membership level `beta`.
///
/// A chance constraint `Cr{M <= b} >= alpha` (alpha >= 0.5) holds exactly when
/// the upper bound at `beta = 2(1 - alpha)` is at most `b`, i.e.
/// `(2 - 2a) s + (2a - 1) u <= b`; the `>=` case uses the lower bound.
pub fn cut_bounds(f: &TriangularFuzzyNumber, beta: f64) -> Result<CutBounds> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Domain(format!("cut level {beta} outside [0, 1]")));
    }
    Ok(CutBounds {
        lower: f.r + beta * (f.s - f.r),
        upper: f.u - beta * (f.u - f.s),
    })
}

/// Cut level matching credibility confidence `alpha` in `[0.5, 1]`.
pub fn credibility_cut_level(alpha: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("credibility level {alpha} outside [0.5, 1]")));
    }
    Ok(2.0 * (1.0 - alpha))
}

/// Cut bounds of `k * M` given the cut bounds of `M`.
pub fn scale_cut(k: f64, cb: CutBounds) -> CutBounds {
    if k >= 0.0 {
        CutBounds {
            lower: k * cb.lower,
            upper: k * cb.upper,
        }
    } else {
        CutBounds {
            lower: k * cb.upper,
            upper: k * cb.lower,
        }
    }
}
