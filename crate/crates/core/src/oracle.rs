//! Exhaustive enumerators, seeded random generators and the brute-force
//! equivalence checker behind the property checks.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fci::{FciSet, Segment};
use crate::finset::FinSet;
use crate::order::Point;
use crate::semantics::{default_pool, eval_bounded, Assignment, Structure, WitnessPool};
use crate::syntax::Formula;

pub const FINSET_POINT_CAP: usize = 12;
pub const FCI_POINT_CAP: usize = 8;

/// All subsets of `points`, ordered by bitmask over the points.
pub(crate) fn subsets(points: &[Point]) -> Vec<FinSet> {
    (0..1usize << points.len())
        .map(|mask| {
            points
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect()
}

/// All normalized interval unions with endpoints in `points` (sorted), at most
/// `max_segments` bounded components and, if `allow_ray`, an optional ray.
pub(crate) fn fcis(points: &[Point], max_segments: usize, allow_ray: bool) -> Vec<FciSet> {
    let mut out = Vec::new();
    let mut segs = Vec::new();
    fcis_from(points, 0, max_segments, allow_ray, &mut segs, &mut out);
    out
}

fn fcis_from(
    points: &[Point],
    start: usize,
    budget: usize,
    allow_ray: bool,
    segs: &mut Vec<Segment>,
    out: &mut Vec<FciSet>,
) {
    out.push(FciSet::from_parts(segs.clone(), None));
    if allow_ray {
        for lo in &points[start..] {
            out.push(FciSet::from_parts(segs.clone(), Some(lo.clone())));
        }
    }
    if budget == 0 {
        return;
    }
    for i in start..points.len() {
        for j in i..points.len() {
            segs.push(Segment::new(points[i].clone(), points[j].clone()).expect("i <= j"));
            fcis_from(points, j + 1, budget - 1, allow_ray, segs, out);
            segs.pop();
        }
    }
}

/// Every subset of `pool`; at most 12 points.
pub fn enum_finsets(pool: &FinSet) -> Result<Vec<FinSet>> {
    if pool.len() > FINSET_POINT_CAP {
        return Err(Error::PoolTooLarge {
            size: pool.len(),
            cap: FINSET_POINT_CAP,
        });
    }
    Ok(subsets(pool.points()))
}

/// Every interval union over `pool`; at most 8 points.
pub fn enum_fcis(pool: &FinSet, max_segments: usize, allow_ray: bool) -> Result<Vec<FciSet>> {
    if pool.len() > FCI_POINT_CAP {
        return Err(Error::PoolTooLarge {
            size: pool.len(),
            cap: FCI_POINT_CAP,
        });
    }
    Ok(fcis(pool.points(), max_segments, allow_ray))
}

/// Number of interval unions [`enum_fcis`] yields, by a closed form: `m`
/// bounded segments over `n` points can be placed in `C(n+m, 2m)` ways, and a
/// ray at the `k`-th point leaves the first `k` points for the segments.
pub fn count_fcis(n: usize, max_segments: usize, allow_ray: bool) -> u64 {
    let segments_only = |n: usize| -> u64 {
        (0..=max_segments)
            .map(|m| binomial((n + m) as u64, (2 * m) as u64))
            .sum()
    };
    let mut total = segments_only(n);
    if allow_ray {
        total += (0..n).map(segments_only).sum::<u64>();
    }
    total
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` distinct rationals `p/q` with `q ≤ 4`, `0` always among them.
pub fn random_points(rng: &mut impl Rng, n: usize) -> FinSet {
    let mut pts = vec![Point::zero()];
    while pts.len() < n.max(1) {
        let p = Point::new(rng.gen_range(1..=40), rng.gen_range(1..=4)).expect("nonzero");
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    FinSet::from_points(pts)
}

pub fn random_finset(rng: &mut impl Rng, pool: &FinSet) -> FinSet {
    pool.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
}

/// A uniformly chosen interval union with endpoints in `pool`.
pub fn random_fci(
    rng: &mut impl Rng,
    pool: &FinSet,
    max_segments: usize,
    allow_ray: bool,
) -> FciSet {
    let all = fcis(pool.points(), max_segments, allow_ray);
    all.choose(rng).cloned().unwrap_or_default()
}

/// Assignments binding each of `vars` to every value of `values`.
pub fn product_assignments<E: Clone>(vars: &[&str], values: &[E]) -> Vec<Assignment<E>> {
    let mut out = vec![Assignment::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|a| {
                values.iter().map(move |e| {
                    let mut b = a.clone();
                    b.insert(v.to_string(), e.clone());
                    b
                })
            })
            .collect();
    }
    out
}

/// How quantifiers of the checked formula are bounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PoolPolicy {
    /// [`default_pool`] of each assignment.
    PerAssignment,
    Fixed(WitnessPool),
}

impl fmt::Display for PoolPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoolPolicy::PerAssignment => f.write_str("default pool per assignment"),
            PoolPolicy::Fixed(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub assignment: String,
    pub lhs: bool,
    pub rhs: bool,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: expected {}, formula gave {}", self.assignment, self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug)]
pub struct EquivReport {
    pub checked: usize,
    pub failures: Vec<Failure>,
    pub pool_used: PoolPolicy,
    pub seed: Option<u64>,
}

impl EquivReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn show_assignment<E: fmt::Display>(a: &Assignment<E>) -> String {
    let parts: Vec<String> = a.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Evaluates `rhs` and the predicate `lhs` on every assignment and collects
/// disagreements. Chunks run in parallel; the report is in input order.
pub fn check_equiv<S, P>(
    lhs: P,
    rhs: &Formula,
    assignments: Vec<Assignment<S::Elem>>,
    policy: PoolPolicy,
) -> Result<EquivReport>
where
    S: Structure,
    P: Fn(&Assignment<S::Elem>) -> bool + Sync,
{
    let results: Vec<Result<Option<Failure>>> = assignments
        .par_iter()
        .map(|a| {
            let pool = match &policy {
                PoolPolicy::PerAssignment => default_pool::<S>(a),
                PoolPolicy::Fixed(p) => p.clone(),
            };
            let want = lhs(a);
            let got = eval_bounded::<S>(rhs, a, &pool)
                .map_err(|e| Error::Eval(format!("at {}: {e}", show_assignment(a))))?;
            Ok((want != got).then(|| Failure {
                assignment: show_assignment(a),
                lhs: want,
                rhs: got,
            }))
        })
        .collect();
    let mut failures = Vec::new();
    for r in results {
        failures.extend(r?);
    }
    Ok(EquivReport {
        checked: assignments.len(),
        failures,
        pool_used: policy,
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::WStruct;
    use crate::syntax::{parse, Signature};
    use std::collections::HashSet;

    fn s(t: &str) -> FinSet {
        t.parse().unwrap()
    }

    #[test]
    fn finset_enumeration() {
        let got: Vec<String> = enum_finsets(&s("{0,1}"))
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(got, ["{}", "{0}", "{1}", "{0, 1}"]);
        assert_eq!(enum_finsets(&s("{}")).unwrap(), vec![FinSet::empty()]);
        let big: FinSet = (0..13).map(Point::from_integer).collect();
        assert!(matches!(enum_finsets(&big), Err(Error::PoolTooLarge { size: 13, cap: 12 })));
    }

    #[test]
    fn fci_enumeration_examples() {
        let got: Vec<String> = enum_fcis(&s("{0,1}"), 1, false)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(got, ["empty", "{0}", "[0,1]", "{1}"]);
        let with_ray: Vec<String> = enum_fcis(&s("{0}"), 1, true)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(with_ray, ["empty", "[0,*)", "{0}"]);
        let big: FinSet = (0..9).map(Point::from_integer).collect();
        assert!(enum_fcis(&big, 1, false).is_err());
    }

    // Counts by direct recursion over the points, independent of the closed form.
    fn count_by_recursion(n: usize, budget: usize, ray: bool) -> u64 {
        fn go(i: usize, n: usize, budget: usize, ray: bool) -> u64 {
            if i >= n {
                return 1;
            }
            let mut total = go(i + 1, n, budget, ray);
            if ray {
                total += 1;
            }
            if budget > 0 {
                for j in i..n {
                    total += go(j + 1, n, budget - 1, ray);
                }
            }
            total
        }
        go(0, n, budget, ray)
    }

    #[test]
    fn fci_counts() {
        let pool = s("{0,1,2}");
        let all = enum_fcis(&pool, 2, true).unwrap();
        assert_eq!(all.len(), 20);
        assert_eq!(count_fcis(3, 2, true), 20);
        assert_eq!(count_by_recursion(3, 2, true), 20);
        for n in 0..=6 {
            for m in 0..=3 {
                for ray in [false, true] {
                    let pts: FinSet = (0..n as u64).map(Point::from_integer).collect();
                    let all = fcis(pts.points(), m, ray);
                    let distinct: HashSet<_> = all.iter().collect();
                    assert_eq!(distinct.len(), all.len(), "duplicates n={n} m={m}");
                    assert_eq!(all.len() as u64, count_fcis(n, m, ray));
                    assert_eq!(all.len() as u64, count_by_recursion(n, m, ray));
                }
            }
        }
    }

    #[test]
    fn generators_respect_invariants() {
        let mut r = rng(7);
        for _ in 0..200 {
            let pts = random_points(&mut r, 6);
            assert_eq!(pts.len(), 6);
            assert!(pts.contains(&Point::zero()));
            let a = random_fci(&mut r, &pts, 3, true);
            assert!(a.segment_count() <= 3);
            assert!(a.boundary().is_subset(&pts));
            assert_eq!(a.to_string().parse::<FciSet>().unwrap(), a);
            assert!(random_finset(&mut r, &pts).is_subset(&pts));
        }
        let first: Vec<FinSet> = (0..5).map(|_| random_points(&mut rng(3), 4)).collect();
        assert!(first.windows(2).all(|w| w[0] == w[1]));
    }

    fn notbot_rhs(text: &str) -> Formula {
        parse(text, Signature::W).unwrap()
    }

    #[test]
    fn harness_catches_mutants() {
        let pool = s("{0, 1, 2, 5/2, 4}");
        let assignments = product_assignments(&["A"], &enum_finsets(&pool).unwrap());
        let good = notbot_rhs("A = cz | cz sub ips(cup(A,cz),A)");
        let r = check_equiv::<WStruct, _>(
            |a| !a["A"].is_empty(),
            &good,
            assignments.clone(),
            PoolPolicy::PerAssignment,
        )
        .unwrap();
        assert_eq!((r.checked, r.failures.len()), (32, 0));
        let mutant = notbot_rhs("cz sub ips(cup(A,cz),A)");
        let r = check_equiv::<WStruct, _>(
            |a| !a["A"].is_empty(),
            &mutant,
            assignments,
            PoolPolicy::PerAssignment,
        )
        .unwrap();
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].assignment, "[A={0}]");
        let empty = check_equiv::<WStruct, _>(|_| true, &good, vec![], PoolPolicy::PerAssignment)
            .unwrap();
        assert_eq!((empty.checked, empty.failures.len()), (0, 0));
    }

    #[test]
    fn errors_carry_the_assignment() {
        let f = notbot_rhs("B = A");
        let r = check_equiv::<WStruct, _>(
            |_| true,
            &f,
            product_assignments(&["A"], &[s("{1}")]),
            PoolPolicy::PerAssignment,
        );
        match r {
            Err(Error::Eval(m)) => assert!(m.contains("A={1}"), "{m}"),
            other => panic!("{other:?}"),
        }
    }
}
