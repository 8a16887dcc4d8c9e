//! Finite subsets of the order: the universe of the weak monadic structure,
//! with union, intersection, `min`, `max`, relative complement and `ips`.

use std::fmt;
use std::str::FromStr;

use crate::error::{precondition, Error, Result};
use crate::order::Point;

/// A finite set of points, stored as a strictly increasing sequence.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinSet(Vec<Point>);

impl FinSet {
    pub fn empty() -> Self {
        FinSet(Vec::new())
    }

    /// The constant `cz`, i.e. `{0}`.
    pub fn zero() -> Self {
        FinSet(vec![Point::zero()])
    }

    pub fn singleton(p: Point) -> Self {
        FinSet(vec![p])
    }

    /// Builds a set from arbitrary points, sorting and removing duplicates.
    pub fn from_points<I: IntoIterator<Item = Point>>(points: I) -> Self {
        let mut v: Vec<Point> = points.into_iter().collect();
        v.sort();
        v.dedup();
        FinSet(v)
    }

    /// Builds a set from a sequence that must already be strictly increasing.
    pub fn from_sorted(points: Vec<Point>) -> Result<Self> {
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(precondition(
                "FinSet::from_sorted",
                "points are not strictly increasing",
            ));
        }
        Ok(FinSet(points))
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.0.binary_search(p).is_ok()
    }

    pub fn is_subset(&self, other: &FinSet) -> bool {
        self.0.iter().all(|p| other.contains(p))
    }

    pub fn min_point(&self) -> Option<&Point> {
        self.0.first()
    }

    pub fn max_point(&self) -> Option<&Point> {
        self.0.last()
    }

    pub fn union(&self, other: &FinSet) -> FinSet {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        FinSet(out)
    }

    pub fn intersect(&self, other: &FinSet) -> FinSet {
        FinSet(
            self.0
                .iter()
                .filter(|p| other.contains(p))
                .cloned()
                .collect(),
        )
    }

    /// `self \ other`.
    pub fn rel_complement(&self, other: &FinSet) -> FinSet {
        FinSet(
            self.0
                .iter()
                .filter(|p| !other.contains(p))
                .cloned()
                .collect(),
        )
    }

    /// `{min A}`, or `∅` when `A` is empty.
    pub fn min_s(&self) -> FinSet {
        FinSet(self.0.first().cloned().into_iter().collect())
    }

    /// `{max A}`, or `∅` when `A` is empty.
    pub fn max_s(&self) -> FinSet {
        FinSet(self.0.last().cloned().into_iter().collect())
    }

    /// The least element of `self` strictly above `i`. `i` must belong to the set;
    /// the maximum has no successor.
    pub fn successor_in(&self, i: &Point) -> Result<Option<Point>> {
        match self.0.binary_search(i) {
            Ok(idx) => Ok(self.0.get(idx + 1).cloned()),
            Err(_) => Err(precondition(
                "successor_in",
                format!("{i} is not an element of {self}"),
            )),
        }
    }

    /// `ips(A, B) = {i ∈ A : suc_A(i) ∈ B}`.
    pub fn ips(&self, b: &FinSet) -> FinSet {
        FinSet(
            self.0
                .windows(2)
                .filter(|w| b.contains(&w[1]))
                .map(|w| w[0].clone())
                .collect(),
        )
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FinSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: String| Error::InvalidValue {
            kind: "finite set",
            text: s.to_string(),
            reason,
        };
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| bad("expected `{...}`".into()))?;
        if inner.trim().is_empty() {
            return Ok(FinSet::empty());
        }
        let points = inner
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<Point>>>()
            .map_err(|e| bad(e.to_string()))?;
        FinSet::from_sorted(points).map_err(|_| bad("points must be strictly increasing".into()))
    }
}

impl FromIterator<Point> for FinSet {
    fn from_iter<T: IntoIterator<Item = Point>>(iter: T) -> Self {
        FinSet::from_points(iter)
    }
}
