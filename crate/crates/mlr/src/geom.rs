//! Grid geometry, dominance semantics, and query ranges.
//!
//! Everything downstream of ingestion works in the canonical MAX-X/MIN-Y
//! orientation: a point is better the larger its x and the smaller its y.
//! The other three orientations are reduced to it by coordinate reflection
//! at ingestion and undone at reporting.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Side length of the square grid; all coordinates live in `[1, m]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridParams {
    pub m: u32,
}

impl GridParams {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Config("grid side length must be >= 1".into()));
        }
        Ok(GridParams { m })
    }

    pub fn contains(&self, p: Point) -> bool {
        (1..=self.m).contains(&p.x) && (1..=self.m).contains(&p.y)
    }

    pub fn check_point(&self, p: Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OffGrid {
                x: p.x,
                y: p.y,
                m: self.m,
            })
        }
    }

    pub fn check_coord(&self, c: u32) -> Result<()> {
        if (1..=self.m).contains(&c) {
            Ok(())
        } else {
            Err(Error::OffGridCoord { value: c, m: self.m })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: u32,
    pub y: u32,
}

impl Point {
    pub fn new(x: u32, y: u32) -> Self {
        Point { x, y }
    }
}

/// Preference orientation of the two axes.
///
/// `MaxXMinY` is the canonical form; the others are reflections of it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Semantics {
    #[default]
    MaxXMinY,
    MinXMinY,
    MaxXMaxY,
    MinXMaxY,
}

impl Semantics {
    pub fn variants() -> [Semantics; 4] {
        [
            Semantics::MaxXMinY,
            Semantics::MinXMinY,
            Semantics::MaxXMaxY,
            Semantics::MinXMaxY,
        ]
    }

    fn reflect_x(self) -> bool {
        matches!(self, Semantics::MinXMinY | Semantics::MinXMaxY)
    }

    fn reflect_y(self) -> bool {
        matches!(self, Semantics::MaxXMaxY | Semantics::MinXMaxY)
    }

    pub fn token(self) -> &'static str {
        match self {
            Semantics::MaxXMinY => "max-min",
            Semantics::MinXMinY => "min-min",
            Semantics::MaxXMaxY => "max-max",
            Semantics::MinXMaxY => "min-max",
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        match token {
            "max-min" => Ok(Semantics::MaxXMinY),
            "min-min" => Ok(Semantics::MinXMinY),
            "max-max" => Ok(Semantics::MaxXMaxY),
            "min-max" => Ok(Semantics::MinXMaxY),
            other => Err(Error::Config(format!(
                "unknown semantics '{other}' (expected max-min, min-min, max-max or min-max)"
            ))),
        }
    }
}

/// Map a point from orientation `s` to the canonical MAX-X/MIN-Y grid.
///
/// The map is its own inverse, and dominance under `s` on the original
/// points coincides with canonical dominance on the images.
pub fn normalize(p: Point, s: Semantics, g: GridParams) -> Point {
    let x = if s.reflect_x() { g.m + 1 - p.x } else { p.x };
    let y = if s.reflect_y() { g.m + 1 - p.y } else { p.y };
    Point { x, y }
}

/// Canonical dominance: `p` is at least as large in x, at least as small
/// in y, and strictly better in one of the two.
pub fn dominates(p: Point, q: Point) -> bool {
    p.x >= q.x && p.y <= q.y && (p.x > q.x || p.y < q.y)
}

/// The range `[a,b] x (-inf,d]`: x between `a` and `b` inclusive, y at
/// least as good as `d` under the active orientation (canonically y <= d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeSidedQuery {
    pub a: u32,
    pub b: u32,
    pub d: u32,
}

impl ThreeSidedQuery {
    pub fn new(a: u32, b: u32, d: u32) -> Self {
        ThreeSidedQuery { a, b, d }
    }

    pub fn validate(&self, g: GridParams) -> Result<()> {
        let err = |reason| Error::InvalidQuery {
            a: self.a,
            b: self.b,
            d: self.d,
            m: g.m,
            reason,
        };
        if self.a > self.b {
            return Err(err("a > b"));
        }
        if self.a < 1 || self.b > g.m || self.d < 1 || self.d > g.m {
            return Err(err("bound off the grid"));
        }
        Ok(())
    }

    /// Rewrite the query into canonical coordinates. The x-window reflects
    /// (and swaps ends) when x is minimized; the y-bound reflects when y is
    /// maximized, staying an upper bound on the canonical grid.
    pub fn normalize(&self, s: Semantics, g: GridParams) -> ThreeSidedQuery {
        let (a, b) = if s.reflect_x() {
            (g.m + 1 - self.b, g.m + 1 - self.a)
        } else {
            (self.a, self.b)
        };
        let d = if s.reflect_y() { g.m + 1 - self.d } else { self.d };
        ThreeSidedQuery { a, b, d }
    }
}

/// Membership in a canonical query range.
pub fn in_range(p: Point, q: ThreeSidedQuery) -> bool {
    q.a <= p.x && p.x <= q.b && p.y <= q.d
}

/// Per-query instrumentation. Counters are local to one query execution;
/// leaf location through the locator array is not a predecessor query and
/// is not tallied here.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCounters {
    pub predecessor_queries: u64,
    pub rmq_queries: u64,
    pub loop_iterations: u64,
}

/// Skyline points in best-x-first order (strictly decreasing canonical x,
/// hence also strictly increasing canonical y), plus the counters of the
/// query that produced them. Points are reported in original coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkylineAnswer {
    pub points: Vec<Point>,
    pub counters: QueryCounters,
}
