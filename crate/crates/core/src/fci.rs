//! Finite unions of closed intervals of `ℚ≥0`: the universe of the interval
//! lattice structure.
//!
//! Every value is kept in a unique normal form: a strictly separated sequence
//! of closed segments followed by at most one closed ray. A segment `[p,p]` is
//! a singleton. Because `0` is the least point, `(-∞, j]` is just `[0, j]`, so
//! two component shapes suffice. Structural equality is therefore equality of
//! the denoted point sets.

use std::fmt;
use std::str::FromStr;

use crate::error::{precondition, Error, Result};
use crate::finset::FinSet;
use crate::order::Point;

/// A closed segment `[lo, hi]` with `lo ≤ hi`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Segment {
    lo: Point,
    hi: Point,
}

impl Segment {
    pub fn new(lo: Point, hi: Point) -> Result<Self> {
        if lo > hi {
            return Err(precondition("Segment::new", format!("[{lo},{hi}] is reversed")));
        }
        Ok(Segment { lo, hi })
    }

    pub fn point(p: Point) -> Self {
        Segment {
            lo: p.clone(),
            hi: p,
        }
    }

    pub fn lo(&self) -> &Point {
        &self.lo
    }

    pub fn hi(&self) -> &Point {
        &self.hi
    }
}

/// One raw component handed to [`FciSet::normalize`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Piece {
    Segment(Segment),
    Ray(Point),
}

/// A normalized finite union of closed intervals.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FciSet {
    segments: Vec<Segment>,
    ray: Option<Point>,
}

/// Which of the two clauses of the `ips` characterization a witness satisfies.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IpsClause {
    /// `min(A) ⊆ B` and `l(D) = (B \ min B) ∪ {0}`.
    MinInB,
    /// `min(A) ⊄ B` and `l(D) = B ∪ {0}`.
    MinNotInB,
}

// A component as (lo, hi) with `None` standing for +∞.
type Span = (Point, Option<Point>);

impl FciSet {
    pub fn empty() -> Self {
        FciSet::default()
    }

    /// Assembles already-normalized parts.
    pub(crate) fn from_parts(segments: Vec<Segment>, ray: Option<Point>) -> Self {
        debug_assert!(segments.windows(2).all(|w| w[0].hi < w[1].lo));
        debug_assert!(match (segments.last(), &ray) {
            (Some(s), Some(r)) => s.hi < *r,
            _ => true,
        });
        FciSet { segments, ray }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn ray(&self) -> Option<&Point> {
        self.ray.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty() && self.ray.is_none()
    }

    /// Number of bounded components (singletons included, the ray excluded).
    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    fn spans(&self) -> impl Iterator<Item = Span> + '_ {
        self.segments
            .iter()
            .map(|s| (s.lo.clone(), Some(s.hi.clone())))
            .chain(self.ray.iter().map(|r| (r.clone(), None)))
    }

    fn from_spans(mut spans: Vec<Span>) -> FciSet {
        spans.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<Span> = Vec::with_capacity(spans.len());
        for (lo, hi) in spans {
            if let Some(last) = merged.last_mut() {
                let touches = match &last.1 {
                    None => true,
                    Some(h) => lo <= *h,
                };
                if touches {
                    last.1 = match (last.1.take(), hi) {
                        (Some(a), Some(b)) => Some(a.max(b)),
                        _ => None,
                    };
                    continue;
                }
            }
            merged.push((lo, hi));
        }
        let mut out = FciSet::empty();
        for (lo, hi) in merged {
            match hi {
                Some(hi) => out.segments.push(Segment { lo, hi }),
                None => out.ray = Some(lo),
            }
        }
        out
    }

    /// The normal form of the union of `raw`.
    pub fn normalize<I: IntoIterator<Item = Piece>>(raw: I) -> FciSet {
        FciSet::from_spans(
            raw.into_iter()
                .map(|piece| match piece {
                    Piece::Segment(s) => (s.lo, Some(s.hi)),
                    Piece::Ray(p) => (p, None),
                })
                .collect(),
        )
    }

    pub fn union_f(&self, other: &FciSet) -> FciSet {
        FciSet::from_spans(self.spans().chain(other.spans()).collect())
    }

    pub fn intersect_f(&self, other: &FciSet) -> FciSet {
        let mut out = Vec::new();
        for (alo, ahi) in self.spans() {
            for (blo, bhi) in other.spans() {
                let lo = alo.clone().max(blo);
                let hi = match (&ahi, bhi) {
                    (Some(a), Some(b)) => Some(a.clone().min(b)),
                    (Some(a), None) => Some(a.clone()),
                    (None, b) => b,
                };
                if hi.as_ref().is_none_or(|h| lo <= *h) {
                    out.push((lo, hi));
                }
            }
        }
        FciSet::from_spans(out)
    }

    pub fn min_point(&self) -> Option<&Point> {
        self.segments.first().map(|s| &s.lo).or(self.ray.as_ref())
    }

    /// The greatest point, if the set is nonempty and bounded.
    pub fn max_point(&self) -> Option<&Point> {
        if self.ray.is_some() {
            return None;
        }
        self.segments.last().map(|s| &s.hi)
    }

    /// `{min A}`, or `∅` for the empty set.
    pub fn min_f(&self) -> FciSet {
        FciSet::point_set(self.min_point().cloned())
    }

    /// `{max A}`, or `∅` when `A` is empty or unbounded.
    pub fn max_f(&self) -> FciSet {
        FciSet::point_set(self.max_point().cloned())
    }

    fn point_set(p: Option<Point>) -> FciSet {
        FciSet {
            segments: p.into_iter().map(Segment::point).collect(),
            ray: None,
        }
    }

    /// Left endpoints: every segment's `lo` and the ray's start.
    pub fn left_pts(&self) -> FinSet {
        FinSet::from_points(
            self.segments
                .iter()
                .map(|s| s.lo.clone())
                .chain(self.ray.iter().cloned()),
        )
    }

    /// Right endpoints: every segment's `hi`. A ray has none.
    pub fn right_pts(&self) -> FinSet {
        FinSet::from_points(self.segments.iter().map(|s| s.hi.clone()))
    }

    /// All endpoints, `A_l ∪ A_r`.
    pub fn boundary(&self) -> FinSet {
        self.left_pts().union(&self.right_pts())
    }

    pub fn is_bounded(&self) -> bool {
        self.ray.is_none()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.spans()
            .any(|(lo, hi)| lo <= *p && hi.is_none_or(|h| *p <= h))
    }

    /// `A ⊆ B`. Each component of `A` is convex, and the components of `B`
    /// are separated by nonempty gaps, so it must sit inside a single one.
    pub fn subseteq_f(&self, other: &FciSet) -> bool {
        self.spans().all(|(lo, hi)| {
            other.spans().any(|(olo, ohi)| {
                olo <= lo
                    && match (&hi, ohi) {
                        (_, None) => true,
                        (None, Some(_)) => false,
                        (Some(h), Some(oh)) => *h <= oh,
                    }
            })
        })
    }

    /// True when every component is a singleton, i.e. `A_l = A_r`.
    pub fn is_finite_set(&self) -> bool {
        self.ray.is_none() && self.segments.iter().all(|s| s.lo == s.hi)
    }

    pub fn embed_finset(s: &FinSet) -> FciSet {
        FciSet {
            segments: s.iter().cloned().map(Segment::point).collect(),
            ray: None,
        }
    }

    pub fn as_finset(&self) -> Result<FinSet> {
        if !self.is_finite_set() {
            return Err(precondition("as_finset", format!("{self} is not a finite set")));
        }
        Ok(self.left_pts())
    }

    /// The witness `D = I \ E` for `ips(A, B) = C`, where `E` is the union of
    /// the open intervals `(i, suc_A(i))` over `i ∈ C`.
    ///
    /// Requires `∅ ⊊ B ⊆ A` and `ips(A, B) = C`.
    pub fn witness_d(a: &FinSet, b: &FinSet, c: &FinSet) -> Result<FciSet> {
        if b.is_empty() {
            return Err(precondition("witness_D", "B is empty"));
        }
        if !b.is_subset(a) {
            return Err(precondition("witness_D", format!("{b} is not a subset of {a}")));
        }
        if a.ips(b) != *c {
            return Err(precondition("witness_D", format!("ips({a}, {b}) is not {c}")));
        }
        // Consecutive pairs of A give disjoint, increasing open gaps.
        let mut segments = Vec::new();
        let mut start = Point::zero();
        for w in a.points().windows(2) {
            if c.contains(&w[0]) {
                segments.push(Segment {
                    lo: start,
                    hi: w[0].clone(),
                });
                start = w[1].clone();
            }
        }
        Ok(FciSet {
            segments,
            ray: Some(start),
        })
    }

    /// Builds the unique set with left endpoints `B` and right endpoints `C`.
    ///
    /// The points of `B ∪ C` are scanned in order. Points of `B ∩ C` outside
    /// an open segment are singletons, a proper left endpoint opens a segment
    /// that the next proper right endpoint closes, and a left endpoint still
    /// open at the end becomes the ray. `(∅, ∅)` yields the empty set.
    pub fn build_from_endpoints(b: &FinSet, c: &FinSet) -> Result<FciSet> {
        let fail = |reason: String| precondition("build_from_endpoints", reason);
        let mut out = FciSet::empty();
        let mut open: Option<Point> = None;
        for p in b.union(c).iter() {
            let (is_left, is_right) = (b.contains(p), c.contains(p));
            match (open.take(), is_left, is_right) {
                (None, true, true) => out.segments.push(Segment::point(p.clone())),
                (None, true, false) => open = Some(p.clone()),
                (None, false, true) => {
                    return Err(fail(format!("right endpoint {p} has no left endpoint")))
                }
                (Some(lo), false, true) => out.segments.push(Segment { lo, hi: p.clone() }),
                (Some(lo), true, _) => {
                    return Err(fail(format!(
                        "left endpoint {p} inside the interval opened at {lo}"
                    )))
                }
                (_, false, false) => unreachable!("point of B ∪ C in neither"),
            }
        }
        out.ray = open;
        Ok(out)
    }

    /// Checks the clauses characterizing `ips(A, B) = C` against a candidate
    /// `D`, returning the clause that holds. `D` must be unbounded: a bounded
    /// `D` lets `max(A)` be a right endpoint without a successor in `B`, as in
    /// `A = {1,2}`, `B = {2}`, `C = {1,2}`, `D = [0,1]+{2}`.
    pub fn ips_clause(a: &FinSet, b: &FinSet, c: &FinSet, d: &FciSet) -> Option<IpsClause> {
        d.ray.as_ref()?;
        Self::ips_clause_unrestricted(a, b, c, d)
    }

    /// The clauses of [`FciSet::ips_clause`] without the unboundedness condition.
    pub fn ips_clause_unrestricted(
        a: &FinSet,
        b: &FinSet,
        c: &FinSet,
        d: &FciSet,
    ) -> Option<IpsClause> {
        if !c.is_subset(a) || !a.iter().all(|p| d.contains(p)) || d.right_pts() != *c {
            return None;
        }
        let zero = FinSet::zero();
        let left = d.left_pts();
        if a.min_s().is_subset(b) {
            let rest = b.rel_complement(&b.min_s()).union(&zero);
            (left == rest).then_some(IpsClause::MinInB)
        } else {
            (left == b.union(&zero)).then_some(IpsClause::MinNotInB)
        }
    }
}

/// Clause (2) of the endpoint-pairing characterization, evaluated directly on
/// finite sets: `B ≠ ∅`, `min(B ∪ C) ⊆ B`, and either
/// (a) `max(B ∪ C) ⊆ C` and `ips(B ∪ C, C \ B) = B \ C`, or
/// (b) `max(B ∪ C) ⊆ B \ C` and `ips(B ∪ C, C \ B) ∪ max(B ∪ C) = B \ C`.
pub fn endpoint_pairing_holds(b: &FinSet, c: &FinSet) -> bool {
    let all = b.union(c);
    let proper_left = b.rel_complement(c);
    let proper_right = c.rel_complement(b);
    let paired = all.ips(&proper_right);
    let top = all.max_s();
    !b.is_empty()
        && all.min_s().is_subset(b)
        && ((top.is_subset(c) && paired == proper_left)
            || (top.is_subset(&proper_left) && paired.union(&top) == proper_left))
}

impl fmt::Display for FciSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("empty");
        }
        let mut first = true;
        for s in &self.segments {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            if s.lo == s.hi {
                write!(f, "{{{}}}", s.lo)?;
            } else {
                write!(f, "[{},{}]", s.lo, s.hi)?;
            }
        }
        if let Some(r) = &self.ray {
            if !first {
                f.write_str("+")?;
            }
            write!(f, "[{r},*)")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FciSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FciSet {
    type Err = Error;

    /// Accepts `empty` or `+`-joined components `[a,b]`, `{p}`, `[a,*)`.
    /// Overlapping or touching components are merged.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: String| Error::InvalidValue {
            kind: "interval union",
            text: s.to_string(),
            reason,
        };
        let text = s.trim();
        if text == "empty" {
            return Ok(FciSet::empty());
        }
        let mut pieces = Vec::new();
        for part in text.split('+') {
            let part = part.trim();
            if let Some(inner) = part.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
                let p: Point = inner.parse().map_err(|e: Error| bad(e.to_string()))?;
                pieces.push(Piece::Segment(Segment::point(p)));
            } else if let Some(inner) = part.strip_prefix('[').and_then(|t| t.strip_suffix(",*)")) {
                let p: Point = inner.parse().map_err(|e: Error| bad(e.to_string()))?;
                pieces.push(Piece::Ray(p));
            } else if let Some(inner) = part.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                let (lo, hi) = inner
                    .split_once(',')
                    .ok_or_else(|| bad(format!("component `{part}` needs two endpoints")))?;
                let lo: Point = lo.parse().map_err(|e: Error| bad(e.to_string()))?;
                let hi: Point = hi.parse().map_err(|e: Error| bad(e.to_string()))?;
                let seg = Segment::new(lo, hi).map_err(|e| bad(e.to_string()))?;
                pieces.push(Piece::Segment(seg));
            } else {
                return Err(bad(format!("unrecognized component `{part}`")));
            }
        }
        Ok(FciSet::normalize(pieces))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(t: &str) -> FciSet {
        t.parse().unwrap()
    }

    fn s(t: &str) -> FinSet {
        t.parse().unwrap()
    }

    fn p(t: &str) -> Point {
        t.parse().unwrap()
    }

    fn seg(a: &str, b: &str) -> Piece {
        Piece::Segment(Segment::new(p(a), p(b)).unwrap())
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(FciSet::normalize([seg("1", "2"), seg("2", "3")]), f("[1,3]"));
        assert_eq!(FciSet::normalize([seg("0", "1"), seg("1/2", "3")]), f("[0,3]"));
        let got = FciSet::normalize([Piece::Ray(p("5")), seg("3", "4"), seg("6", "7")]);
        assert_eq!(got.to_string(), "[3,4]+[5,*)");
        // Pointwise check of the last example at endpoints and midpoints.
        for (x, inside) in [
            ("3", true),
            ("7/2", true),
            ("9/2", false),
            ("5", true),
            ("11/2", true),
            ("13/2", true),
            ("100", true),
            ("2", false),
        ] {
            assert_eq!(got.contains(&p(x)), inside, "{x}");
        }
    }

    #[test]
    fn union_intersect_examples() {
        assert_eq!(f("[0,2]+[3,*)").intersect_f(&f("[1,4]")), f("[1,2]+[3,4]"));
        assert_eq!(f("empty").union_f(&f("[1,2]")), f("[1,2]"));
        assert_eq!(f("[0,1]").intersect_f(&f("[2,3]")), f("empty"));
        assert_eq!(f("[0,1]").intersect_f(&f("[1,3]")), f("{1}"));
        assert_eq!(f("[0,1]+[4,*)").union_f(&f("[1,4]")), f("[0,*)"));
    }

    #[test]
    fn min_max_examples() {
        assert_eq!(f("[1,*)").max_f(), f("empty"));
        assert_eq!(f("[1/2,2]+[3,4]").min_f(), f("{1/2}"));
        assert_eq!(f("empty").max_f(), f("empty"));
        assert_eq!(f("empty").min_f(), f("empty"));
        assert_eq!(f("[1,*)").min_f(), f("{1}"));
        assert_eq!(f("[1,2]+{7}").max_f(), f("{7}"));
    }

    #[test]
    fn endpoints_examples() {
        let a = f("[0,1]+[2,*)");
        assert_eq!(a.left_pts(), s("{0,2}"));
        assert_eq!(a.right_pts(), s("{1}"));
        assert_eq!(f("{3}").left_pts(), s("{3}"));
        assert_eq!(f("{3}").right_pts(), s("{3}"));
        assert_eq!(f("empty").boundary(), s("{}"));
        assert_eq!(a.boundary(), s("{0,1,2}"));
    }

    #[test]
    fn bounded_examples() {
        assert!(f("empty").is_bounded());
        assert!(f("[0,5]").is_bounded());
        assert!(!f("[0,1]+[2,*)").is_bounded());
    }

    #[test]
    fn membership_examples() {
        let a = f("[1,2]+[4,*)");
        assert!(!a.contains(&p("3")));
        assert!(a.contains(&p("100")));
        assert!(a.contains(&p("4")));
        assert!(f("[1,2]").subseteq_f(&f("[0,3]")));
        assert!(!f("[0,3]").subseteq_f(&f("[1,2]")));
        assert!(!f("[1,*)").subseteq_f(&f("[0,9]")));
        assert!(f("[1,*)").subseteq_f(&f("[0,*)")));
        assert!(!f("[0,2]").subseteq_f(&f("[0,1]+[3/2,2]")));
    }

    #[test]
    fn finite_examples() {
        assert!(f("{1}+{2}").is_finite_set());
        assert!(!f("[1,2]").is_finite_set());
        assert!(!f("[1,*)").is_finite_set());
        assert!(f("empty").is_finite_set());
        assert_eq!(FciSet::embed_finset(&s("{0,3}")).to_string(), "{0}+{3}");
        assert_eq!(FciSet::embed_finset(&s("{0,3}")).as_finset().unwrap(), s("{0,3}"));
        assert!(f("[1,2]").as_finset().is_err());
    }

    #[test]
    fn witness_d_examples() {
        let d = FciSet::witness_d(&s("{1,2,5}"), &s("{2,5}"), &s("{1,2}")).unwrap();
        assert_eq!(d, f("[0,1]+{2}+[5,*)"));
        assert_eq!(d.left_pts(), s("{0,2,5}"));
        assert_eq!(d.right_pts(), s("{1,2}"));
        assert_eq!(
            FciSet::ips_clause(&s("{1,2,5}"), &s("{2,5}"), &s("{1,2}"), &d),
            Some(IpsClause::MinNotInB)
        );

        let d = FciSet::witness_d(&s("{0,1}"), &s("{0,1}"), &s("{0}")).unwrap();
        assert_eq!(d, f("{0}+[1,*)"));
        assert_eq!(
            FciSet::ips_clause(&s("{0,1}"), &s("{0,1}"), &s("{0}"), &d),
            Some(IpsClause::MinInB)
        );

        let d = FciSet::witness_d(&s("{2}"), &s("{2}"), &s("{}")).unwrap();
        assert_eq!(d, f("[0,*)"));
    }

    #[test]
    fn bounded_candidates_break_the_converse() {
        let (a, b, c) = (s("{1,2}"), s("{2}"), s("{1,2}"));
        let d = f("[0,1]+{2}");
        assert_ne!(a.ips(&b), c);
        assert_eq!(
            FciSet::ips_clause_unrestricted(&a, &b, &c, &d),
            Some(IpsClause::MinNotInB)
        );
        assert_eq!(FciSet::ips_clause(&a, &b, &c, &d), None);
        let d = f("[0,1]");
        assert_eq!(
            FciSet::ips_clause_unrestricted(&s("{1}"), &s("{1}"), &s("{1}"), &d),
            Some(IpsClause::MinInB)
        );
    }

    #[test]
    fn witness_d_preconditions() {
        assert!(FciSet::witness_d(&s("{1,2}"), &s("{}"), &s("{}")).is_err());
        assert!(FciSet::witness_d(&s("{1,2}"), &s("{3}"), &s("{}")).is_err());
        assert!(FciSet::witness_d(&s("{1,2}"), &s("{2}"), &s("{}")).is_err());
    }

    #[test]
    fn build_from_endpoints_examples() {
        assert_eq!(
            FciSet::build_from_endpoints(&s("{0,3}"), &s("{1}")).unwrap(),
            f("[0,1]+[3,*)")
        );
        assert_eq!(FciSet::build_from_endpoints(&s("{1}"), &s("{1}")).unwrap(), f("{1}"));
        assert_eq!(
            FciSet::build_from_endpoints(&s("{2,5}"), &s("{3,6}")).unwrap(),
            f("[2,3]+[5,6]")
        );
        assert_eq!(FciSet::build_from_endpoints(&s("{}"), &s("{}")).unwrap(), f("empty"));
        assert!(FciSet::build_from_endpoints(&s("{}"), &s("{1}")).is_err());
        assert!(FciSet::build_from_endpoints(&s("{1,2}"), &s("{3}")).is_err());
        assert!(FciSet::build_from_endpoints(&s("{2}"), &s("{1,3}")).is_err());
        assert!(endpoint_pairing_holds(&s("{0,3}"), &s("{1}")));
        assert!(endpoint_pairing_holds(&s("{2,5}"), &s("{3,6}")));
        assert!(!endpoint_pairing_holds(&s("{}"), &s("{1}")));
    }

    #[test]
    fn text_form() {
        for t in ["empty", "[0,1]+{2}+[5,*)", "{1/2}", "[0,*)", "[1/3,2/3]+{1}"] {
            assert_eq!(f(t).to_string(), t);
        }
        assert_eq!(f("[1,2] + [2,3]").to_string(), "[1,3]");
        assert_eq!(f("[2,2]").to_string(), "{2}");
        assert!("[3,1]".parse::<FciSet>().is_err());
        assert!("[1,2".parse::<FciSet>().is_err());
        assert!("".parse::<FciSet>().is_err());
        assert!("[-1,2]".parse::<FciSet>().is_err());
    }
}
