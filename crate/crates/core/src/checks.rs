//! Formula corpora and the property suites run by `fcimc check` and the
//! acceptance target.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fci::{endpoint_pairing_holds, FciSet, Piece, Segment};
use crate::finset::FinSet;
use crate::oracle::{self, fcis, product_assignments, show_assignment, subsets};
use crate::order::Point;
use crate::semantics::{eval_default, eval_qf, Assignment, LStruct, WStruct, WitnessPool};
use crate::syntax::{classify, parse, Class, Formula, Op, Signature, Term};
use crate::transforms::{
    delta_domain, phi_in, phi_ips, phi_subseteq, pipeline, to_positive_existential,
    translate_l_to_w, translate_w_to_l,
};

/// Quantifier-free `W`-formulas with negations.
pub const W_QF_CORPUS: &[&str] = &[
    "!(X = bot)",
    "!(X = Y)",
    "!(min(X) = max(X))",
    "X = cz | !(cap(X,Y) = bot)",
    "!(ips(X,Y) = bot) & cup(X,Y) = Y",
    "!(cup(X,cz) = X) -> min(Y) = cz",
    "!(X = Y & Y = cz)",
    "!(max(cup(X,Y)) sub X)",
    "!(ips(cup(X,Y),X) = cap(X,Y)) | X = bot",
    "min(X) = cz & !(max(Y) = min(Y))",
    "!(cap(min(X),max(Y)) = bot) -> !(X = Y)",
    "!!(ips(X,X) = min(X))",
];

/// `W`-formulas for the translation into `L`. Those that are not positive
/// existential go through negation elimination first.
pub const W_CORPUS: &[&str] = &[
    "cz sub ips(cup(X,cz),X)",
    "ips(X,Y) = X",
    "ips(X,X) = bot",
    "min(X) = max(X)",
    "cup(X,Y) = cap(X,Y)",
    "cz sub X | X = bot",
    "E Y. cup(Y,cz) = X & ips(X,Y) = cz",
    "max(ips(X,Y)) = min(Y)",
    "!(X = bot)",
    "ips(cup(X,Y),Y) = cap(min(X),X)",
    "E Z. Z sub X & ips(X,Z) = Z & !(Z = bot)",
    "!(ips(X,Y) = cap(X,Y)) & max(X) sub Y",
];

/// `L`-formulas for the translation into `W`.
pub const L_CORPUS: &[&str] = &[
    "l(X) = r(X)",
    "X sub Y",
    "cup(X,Y) = X",
    "min(X) = max(X)",
    "max(X) = bot",
    "l(X) = cz",
    "cap(X,Y) = bot",
    "cup(X,Y) = Y | r(X) = bot",
    "E Y. l(X) = Y & !(Y = bot)",
    "min(r(X)) = max(l(X))",
    "X = cz | X = bot",
    "cap(l(X),r(X)) = l(X)",
    "E Y. r(X) = Y & cup(Y,cz) = l(X)",
    "!(X = Y) & l(X) = l(Y)",
];

/// `L`-formulas inside the executable fragment of the pipeline.
pub const PIPELINE_CORPUS: &[&str] = &[
    "l(X) = r(X)",
    "X = bot",
    "!(X = bot)",
    "max(X) = bot",
    "min(X) = cz",
    "l(X) = cz & !(r(X) = bot)",
    "!(min(X) = max(X))",
    "E Y. l(X) = Y & !(Y = bot)",
    "cup(l(X),r(X)) = l(X)",
    "min(X) sub r(X)",
    "max(X) sub l(X) | X = cz",
    "!(X = cz) & cap(l(X),r(X)) = bot",
];

/// Inputs the pipeline must reject with a fragment error.
pub const PIPELINE_REJECTED: &[&str] = &[
    "A Y. Y sub X -> Y = X",
    "X sub Y",
    "cap(X,Y) = bot",
];

const STANDARD_POINTS: &[(u64, u64)] = &[
    (0, 1),
    (1, 1),
    (2, 1),
    (5, 2),
    (4, 1),
    (11, 2),
    (6, 1),
    (15, 2),
];

/// The first `n` points of `0, 1, 2, 5/2, 4, 11/2, 6, 15/2`.
pub fn standard_pool(n: usize) -> Result<FinSet> {
    if n > STANDARD_POINTS.len() {
        return Err(Error::PoolTooLarge {
            size: n,
            cap: STANDARD_POINTS.len(),
        });
    }
    STANDARD_POINTS[..n]
        .iter()
        .map(|&(p, q)| Point::new(p, q))
        .collect::<Result<Vec<_>>>()
        .map(FinSet::from_points)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Notbot,
    Posex,
    Ipschar,
    Endpoints,
    Member,
    Subset,
    W2l,
    L2w,
    Pipeline,
    Kernel,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Notbot,
        Suite::Posex,
        Suite::Ipschar,
        Suite::Endpoints,
        Suite::Member,
        Suite::Subset,
        Suite::W2l,
        Suite::L2w,
        Suite::Pipeline,
        Suite::Kernel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Notbot => "notbot",
            Suite::Posex => "posex",
            Suite::Ipschar => "ipschar",
            Suite::Endpoints => "endpoints",
            Suite::Member => "member",
            Suite::Subset => "subset",
            Suite::W2l => "w2l",
            Suite::L2w => "l2w",
            Suite::Pipeline => "pipeline",
            Suite::Kernel => "kernel",
        }
    }

    /// Pool size used when none is given.
    pub fn default_pool_size(self) -> usize {
        match self {
            Suite::Notbot | Suite::Endpoints => 5,
            Suite::Pipeline => 6,
            _ => 4,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidValue {
                kind: "suite",
                text: s.to_string(),
                reason: format!(
                    "expected one of {}",
                    Suite::ALL.map(Suite::name).join(", ")
                ),
            })
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    /// Overrides [`Suite::default_pool_size`]. For `pipeline` this is the
    /// number of random endpoints per sample.
    pub pool_size: Option<usize>,
    pub seed: u64,
    /// Random samples per formula for `pipeline`.
    pub samples: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            pool_size: None,
            seed: 0,
            samples: 200,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub checked: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl Report {
    fn new(suite: Suite) -> Self {
        Report {
            suite,
            checked: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn absorb(&mut self, (checked, failures): (usize, Vec<String>)) {
        self.checked += checked;
        self.failures.extend(failures);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "checked={} failures={}", self.checked, self.failures.len())
    }
}

pub fn run(suite: Suite, opts: &Options) -> Result<Report> {
    let n = opts.pool_size.unwrap_or(suite.default_pool_size());
    let mut report = Report::new(suite);
    match suite {
        Suite::Notbot => notbot(&standard_pool(n)?, &mut report)?,
        Suite::Posex => posex(&standard_pool(n)?, &mut report)?,
        Suite::Ipschar => ipschar(&standard_pool(n)?, &mut report)?,
        Suite::Endpoints => endpoints(&standard_pool(n)?, &mut report)?,
        Suite::Member => member(&standard_pool(n)?, &mut report)?,
        Suite::Subset => subset(&standard_pool(n)?, &mut report)?,
        Suite::W2l => w2l(&standard_pool(n)?, &mut report)?,
        Suite::L2w => l2w(&standard_pool(n)?, &mut report)?,
        Suite::Pipeline => pipeline_suite(n, opts, &mut report)?,
        Suite::Kernel => kernel(opts.seed, &mut report)?,
    }
    Ok(report)
}

/// Runs `check` on every item in parallel, returning the count and the
/// failure messages in input order.
fn each<T: Sync>(
    items: &[T],
    check: impl Fn(&T) -> Result<Option<String>> + Send + Sync,
) -> Result<(usize, Vec<String>)> {
    let results: Vec<Result<Option<String>>> = items.par_iter().map(check).collect();
    let mut failures = Vec::new();
    for r in results {
        failures.extend(r?);
    }
    Ok((items.len(), failures))
}

/// All triples of elements of `xs`.
fn cube<T>(xs: &[T]) -> Vec<[&T; 3]> {
    let mut out = Vec::with_capacity(xs.len().pow(3));
    for a in xs {
        for b in xs {
            for c in xs {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn expect(ok: bool, msg: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(msg)
}

fn parse_all(texts: &[&str], sig: Signature) -> Result<Vec<Formula>> {
    texts.iter().map(|t| parse(t, sig)).collect()
}

fn free_list(f: &Formula) -> Vec<String> {
    f.free_vars().into_iter().collect()
}

fn assignments_over<E: Clone>(f: &Formula, values: &[E]) -> Vec<Assignment<E>> {
    let vars = free_list(f);
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    product_assignments(&refs, values)
}

fn embed(a: &Assignment<FinSet>) -> Assignment<FciSet> {
    a.iter()
        .map(|(k, v)| (k.clone(), FciSet::embed_finset(v)))
        .collect()
}

/// `X ≠ ⊥ ⟺ X = cz ∨ cz ⊆ ips(X ∪ cz, X)` for every subset of the pool.
fn notbot(pool: &FinSet, report: &mut Report) -> Result<()> {
    let f = parse("X = cz | cz sub ips(cup(X,cz),X)", Signature::W)?;
    let sets = subsets(pool.points());
    report.absorb(each(&sets, |a| {
        let asg: Assignment<FinSet> = [("X".to_string(), a.clone())].into();
        let got = eval_qf::<WStruct>(&f, &asg)?;
        Ok(expect(got == !a.is_empty(), || {
            format!("X={a}: right side gave {got}")
        }))
    })?);
    Ok(())
}

fn posex(pool: &FinSet, report: &mut Report) -> Result<()> {
    let sets = subsets(pool.points());
    for f in parse_all(W_QF_CORPUS, Signature::W)? {
        let g = to_positive_existential(&f)?;
        report.checked += 1;
        if classify(&g) != Class::PositiveExistential {
            report
                .failures
                .push(format!("`{f}`: output is {}", classify(&g).name()));
        }
        report.absorb(each(&assignments_over(&f, &sets), |a| {
            let (want, got) = (eval_qf::<WStruct>(&f, a)?, eval_default::<WStruct>(&g, a)?);
            Ok(expect(want == got, || {
                format!("`{f}` at {}: input {want}, output {got}", show_assignment(a))
            }))
        })?);
    }
    Ok(())
}

/// Both directions of the `ips` characterization, and `φ_ips` against `ips`.
fn ipschar(pool: &FinSet, report: &mut Report) -> Result<()> {
    let sets = subsets(pool.points());
    let pairs: Vec<(FinSet, FinSet)> = sets
        .iter()
        .flat_map(|a| {
            sets.iter()
                .filter(|b| !b.is_empty() && b.is_subset(a))
                .map(move |b| (a.clone(), b.clone()))
        })
        .collect();

    report.absorb(each(&pairs, |(a, b)| {
        let c = a.ips(b);
        let d = FciSet::witness_d(a, b, &c)?;
        Ok(expect(FciSet::ips_clause(a, b, &c, &d).is_some(), || {
            format!("A={a} B={b}: witness {d} satisfies neither clause")
        }))
    })?);

    let candidates = fcis(WitnessPool::around(pool).points().points(), 3, true);
    let triples: Vec<(FinSet, FinSet, FinSet)> = pairs
        .iter()
        .flat_map(|(a, b)| sets.iter().map(move |c| (a.clone(), b.clone(), c.clone())))
        .collect();
    let per_triple: Vec<(Option<String>, Option<String>)> = triples
        .par_iter()
        .map(|(a, b, c)| {
            let truth = a.ips(b) == *c;
            let strict = candidates
                .iter()
                .find(|d| FciSet::ips_clause(a, b, c, d).is_some());
            let loose = candidates
                .iter()
                .find(|d| FciSet::ips_clause_unrestricted(a, b, c, d).is_some());
            let show = |d: &FciSet| format!("A={a} B={b} C={c} D={d}");
            (
                strict.filter(|_| !truth).map(|d| format!("{}: clause holds but ips(A,B)={}", show(d), a.ips(b))),
                loose.filter(|_| !truth).map(show),
            )
        })
        .collect();
    report.checked += triples.len() * candidates.len();
    report
        .failures
        .extend(per_triple.iter().filter_map(|(s, _)| s.clone()));
    let literal: Vec<&String> = per_triple.iter().filter_map(|(_, l)| l.as_ref()).collect();
    if let Some(first) = literal.first() {
        report.notes.push(format!(
            "without the unboundedness condition {} of {} triples admit a clause witness although ips(A,B) != C, e.g. {first}",
            literal.len(),
            triples.len()
        ));
    }

    let phi = phi_ips();
    report.absorb(each(&cube(&sets), |&[a, b, c]| {
        let asg: Assignment<FciSet> = [("X", a), ("Y", b), ("Z", c)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), FciSet::embed_finset(v)))
            .collect();
        let got = eval_default::<LStruct>(&phi, &asg)?;
        let want = a.ips(b) == *c;
        Ok(expect(got == want, || {
            format!("phi_ips at A={a} B={b} C={c}: gave {got}, ips(A,B)={}", a.ips(b))
        }))
    })?);
    Ok(())
}

fn endpoint_assignment(l: &FinSet, r: &FinSet) -> Assignment<FinSet> {
    [("X_l".to_string(), l.clone()), ("X_r".to_string(), r.clone())].into()
}

/// The endpoint lemma: pairs of endpoint sets are exactly those satisfying
/// `δ`, and they determine the set.
fn endpoints(pool: &FinSet, report: &mut Report) -> Result<()> {
    let delta = delta_domain();
    let sets = fcis(pool.points(), 3, true);
    report.absorb(each(&sets, |a| {
        if a.is_empty() {
            return Ok(None);
        }
        let (l, r) = (a.left_pts(), a.right_pts());
        let by_formula = eval_default::<WStruct>(&delta, &endpoint_assignment(&l, &r))?;
        let rebuilt = FciSet::build_from_endpoints(&l, &r).ok();
        Ok(expect(
            by_formula && endpoint_pairing_holds(&l, &r) && rebuilt.as_ref() == Some(a),
            || format!("A={a}: delta={by_formula}, rebuilt={rebuilt:?}"),
        ))
    })?);

    let finsets = subsets(pool.points());
    let pairs: Vec<(FinSet, FinSet)> = finsets
        .iter()
        .flat_map(|b| finsets.iter().map(move |c| (b.clone(), c.clone())))
        .collect();
    report.absorb(each(&pairs, |(b, c)| {
        let direct = endpoint_pairing_holds(b, c);
        let by_formula = eval_default::<WStruct>(&delta, &endpoint_assignment(b, c))?;
        let rebuilt = FciSet::build_from_endpoints(b, c)
            .ok()
            .filter(|d| !d.is_empty() && d.left_pts() == *b && d.right_pts() == *c);
        Ok(expect(
            direct == by_formula && direct == rebuilt.is_some(),
            || format!("B={b} C={c}: condition {direct}, delta {by_formula}, rebuilt {rebuilt:?}"),
        ))
    })?);
    Ok(())
}

/// Singletons at pool points, midpoints and one point above.
fn probe_points(pool: &FinSet) -> Vec<Point> {
    WitnessPool::around(pool).points().points().to_vec()
}

fn member(pool: &FinSet, report: &mut Report) -> Result<()> {
    let phi = phi_in();
    let cases: Vec<(FciSet, Point)> = fcis(pool.points(), 3, true)
        .into_iter()
        .flat_map(|a| probe_points(pool).into_iter().map(move |p| (a.clone(), p)))
        .collect();
    report.absorb(each(&cases, |(a, p)| {
        let mut asg = endpoint_assignment(&a.left_pts(), &a.right_pts());
        asg.insert("Z".into(), FinSet::singleton(p.clone()));
        let got = eval_qf::<WStruct>(&phi, &asg)?;
        Ok(expect(got == a.contains(p), || {
            format!("A={a} z={p}: phi_in gave {got}")
        }))
    })?);
    Ok(())
}

fn subset(pool: &FinSet, report: &mut Report) -> Result<()> {
    let phi = phi_subseteq();
    let sets = fcis(pool.points(), 3, true);
    let pairs: Vec<(FciSet, FciSet)> = sets
        .iter()
        .flat_map(|a| sets.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    report.absorb(each(&pairs, |(a, b)| {
        let asg: Assignment<FinSet> = [
            ("X_l", a.left_pts()),
            ("X_r", a.right_pts()),
            ("Y_l", b.left_pts()),
            ("Y_r", b.right_pts()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        let got = eval_default::<WStruct>(&phi, &asg)?;
        Ok(expect(got == a.subseteq_f(b), || {
            format!("A={a} B={b}: phi_subseteq gave {got}")
        }))
    })?);
    Ok(())
}

fn w2l(pool: &FinSet, report: &mut Report) -> Result<()> {
    let sets = subsets(pool.points());
    for f in parse_all(W_CORPUS, Signature::W)? {
        let pe = if classify(&f) == Class::PositiveExistential {
            f.clone()
        } else {
            to_positive_existential(&f)?
        };
        let g = translate_w_to_l(&pe)?;
        report.checked += 1;
        if !classify(&g).is_existential() || g.check_signature(Signature::L).is_err() {
            report.failures.push(format!("`{f}`: translation is not existential in L"));
        }
        report.absorb(each(&assignments_over(&f, &sets), |a| {
            let want = eval_default::<WStruct>(&f, a)?;
            let got = eval_default::<LStruct>(&g, &embed(a))?;
            Ok(expect(want == got, || {
                format!("`{f}` at {}: W gave {want}, L gave {got}", show_assignment(a))
            }))
        })?);
    }
    Ok(())
}

fn l2w(pool: &FinSet, report: &mut Report) -> Result<()> {
    let sets = fcis(pool.points(), 2, true);
    for f in parse_all(L_CORPUS, Signature::L)? {
        let t = translate_l_to_w(&f)?;
        report.checked += 1;
        if t.formula.check_signature(Signature::W).is_err() {
            report.failures.push(format!("`{f}`: translation is not a W-formula"));
        }
        report.absorb(each(&assignments_over(&f, &sets), |a| {
            let mut coords = Assignment::new();
            for (x, p) in &t.coords {
                coords.insert(p.left.clone(), a[x].left_pts());
                coords.insert(p.right.clone(), a[x].right_pts());
            }
            let want = eval_default::<LStruct>(&f, a)?;
            let got = eval_default::<WStruct>(&t.formula, &coords)?;
            Ok(expect(want == got, || {
                format!("`{f}` at {}: L gave {want}, W gave {got}", show_assignment(a))
            }))
        })?);
    }
    Ok(())
}

fn pipeline_suite(points: usize, opts: &Options, report: &mut Report) -> Result<()> {
    let mut rng = oracle::rng(opts.seed);
    for f in parse_all(PIPELINE_CORPUS, Signature::L)? {
        let g = pipeline(&f)?;
        report.checked += 1;
        if !classify(&g).is_existential() || g.check_signature(Signature::L).is_err() {
            report.failures.push(format!("`{f}`: result `{g}` is not existential in L"));
        }
        let vars = free_list(&f);
        let samples: Vec<Assignment<FciSet>> = (0..opts.samples)
            .map(|_| {
                let pts = oracle::random_points(&mut rng, points);
                vars.iter()
                    .map(|v| (v.clone(), oracle::random_fci(&mut rng, &pts, 3, true)))
                    .collect()
            })
            .collect();
        report.absorb(each(&samples, |a| {
            let want = eval_default::<LStruct>(&f, a)?;
            let got = eval_default::<LStruct>(&g, a)?;
            Ok(expect(want == got, || {
                format!("`{f}` at {}: input {want}, result {got}", show_assignment(a))
            }))
        })?);
    }
    for f in parse_all(PIPELINE_REJECTED, Signature::L)? {
        report.checked += 1;
        match pipeline(&f) {
            Err(Error::Fragment(_)) => {}
            Err(e) => report.failures.push(format!("`{f}`: wrong error: {e}")),
            Ok(g) => report.failures.push(format!("`{f}`: accepted as `{g}`")),
        }
    }
    Ok(())
}

fn kernel(seed: u64, report: &mut Report) -> Result<()> {
    report.absorb(finset_laws(&standard_pool(4)?)?);
    report.absorb(fci_laws(&standard_pool(3)?)?);
    report.absorb(normal_forms(seed, 1000)?);
    report.absorb(round_trips(seed, 1000)?);
    Ok(())
}

fn finset_laws(pool: &FinSet) -> Result<(usize, Vec<String>)> {
    let sets = subsets(pool.points());
    each(&cube(&sets), |&[a, b, c]| {
        let laws = [
            ("union commutes", a.union(b) == b.union(a)),
            ("intersection commutes", a.intersect(b) == b.intersect(a)),
            ("union associates", a.union(&b.union(c)) == a.union(b).union(c)),
            (
                "intersection associates",
                a.intersect(&b.intersect(c)) == a.intersect(b).intersect(c),
            ),
            ("absorption", a.union(&a.intersect(b)) == *a),
            (
                "distributivity",
                a.intersect(&b.union(c)) == a.intersect(b).union(&a.intersect(c)),
            ),
            ("ips ignores B outside A", a.ips(b) == a.ips(&b.intersect(a))),
            ("ips inside A", a.ips(b).is_subset(a)),
            ("min inside", a.min_s().is_subset(a) && a.min_s().len() <= 1),
            (
                "max of union",
                a.union(b).max_s() == a.max_s().union(&b.max_s()).max_s(),
            ),
        ];
        Ok(laws
            .iter()
            .find(|(_, ok)| !ok)
            .map(|(name, _)| format!("{name} fails at A={a} B={b} C={c}")))
    })
}

fn fci_laws(pool: &FinSet) -> Result<(usize, Vec<String>)> {
    let sets = fcis(pool.points(), 2, true);
    each(&cube(&sets), |&[a, b, c]| {
        let laws = [
            ("union commutes", a.union_f(b) == b.union_f(a)),
            ("intersection commutes", a.intersect_f(b) == b.intersect_f(a)),
            (
                "union associates",
                a.union_f(&b.union_f(c)) == a.union_f(b).union_f(c),
            ),
            (
                "intersection associates",
                a.intersect_f(&b.intersect_f(c)) == a.intersect_f(b).intersect_f(c),
            ),
            ("absorption", a.union_f(&a.intersect_f(b)) == *a),
            (
                "distributivity",
                a.intersect_f(&b.union_f(c)) == a.intersect_f(b).union_f(&a.intersect_f(c)),
            ),
            (
                "subset is meet",
                a.subseteq_f(b) == (a.intersect_f(b) == *a),
            ),
            (
                "bounded iff max exists",
                a.is_bounded() == (a.is_empty() || !a.max_f().is_empty()),
            ),
        ];
        Ok(laws
            .iter()
            .find(|(_, ok)| !ok)
            .map(|(name, _)| format!("{name} fails at A={a} B={b} C={c}")))
    })
}

fn random_piece(rng: &mut impl Rng, pts: &[Point]) -> Piece {
    let i = rng.gen_range(0..pts.len());
    if rng.gen_bool(0.2) {
        return Piece::Ray(pts[i].clone());
    }
    let j = rng.gen_range(i..pts.len());
    Piece::Segment(Segment::new(pts[i].clone(), pts[j].clone()).expect("ordered endpoints"))
}

fn piece_contains(piece: &Piece, p: &Point) -> bool {
    match piece {
        Piece::Segment(s) => s.lo() <= p && p <= s.hi(),
        Piece::Ray(lo) => lo <= p,
    }
}

/// `normalize` preserves membership, is idempotent, and distinct normal forms
/// denote distinct sets.
fn normal_forms(seed: u64, cases: usize) -> Result<(usize, Vec<String>)> {
    let mut rng = oracle::rng(seed);
    let raws: Vec<(FinSet, Vec<Piece>)> = (0..cases)
        .map(|_| {
            let pts = oracle::random_points(&mut rng, 6);
            let k = rng.gen_range(0..=4);
            let pieces = (0..k).map(|_| random_piece(&mut rng, pts.points())).collect();
            (pts, pieces)
        })
        .collect();
    let mut out = each(&raws, |(pts, pieces)| {
        let n = FciSet::normalize(pieces.iter().cloned());
        let probes = probe_points(pts);
        let same = probes
            .iter()
            .all(|p| n.contains(p) == pieces.iter().any(|q| piece_contains(q, p)));
        let again = FciSet::normalize(
            n.segments()
                .iter()
                .cloned()
                .map(Piece::Segment)
                .chain(n.ray().cloned().map(Piece::Ray)),
        );
        Ok(expect(same && again == n, || {
            format!("normalize({pieces:?}) = {n} over {pts}")
        }))
    })?;

    let pool = standard_pool(4)?;
    let probes = probe_points(&pool);
    let mut seen = std::collections::HashMap::new();
    for a in fcis(pool.points(), 3, true) {
        out.0 += 1;
        let sig: Vec<bool> = probes.iter().map(|p| a.contains(p)).collect();
        if let Some(prev) = seen.insert(sig, a.clone()) {
            out.1.push(format!("{prev} and {a} contain the same probe points"));
        }
    }
    Ok(out)
}

fn random_term(rng: &mut impl Rng, sig: Signature, vars: &[String], depth: usize) -> Term {
    let unary: &[Op] = match sig {
        Signature::W => &[Op::Min, Op::Max],
        Signature::L => &[Op::Min, Op::Max, Op::Left, Op::Right],
    };
    let binary: &[Op] = match sig {
        Signature::W => &[Op::Cup, Op::Cap, Op::Ips],
        Signature::L => &[Op::Cup, Op::Cap],
    };
    if depth == 0 || rng.gen_bool(0.35) {
        return match rng.gen_range(0..6) {
            0 => Term::bot(),
            1 => Term::cz(),
            _ => Term::var(vars[rng.gen_range(0..vars.len())].clone()),
        };
    }
    if rng.gen_bool(0.5) {
        let op = unary[rng.gen_range(0..unary.len())];
        Term::App(op, vec![random_term(rng, sig, vars, depth - 1)])
    } else {
        let op = binary[rng.gen_range(0..binary.len())];
        Term::App(
            op,
            vec![
                random_term(rng, sig, vars, depth - 1),
                random_term(rng, sig, vars, depth - 1),
            ],
        )
    }
}

/// A random formula over `X, Y, Z` whose binders `V1, V2, …` are distinct.
pub fn random_formula(
    rng: &mut impl Rng,
    sig: Signature,
    vars: &mut Vec<String>,
    binders: &mut usize,
    depth: usize,
) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..12) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::eq(random_term(rng, sig, vars, 2), random_term(rng, sig, vars, 2)),
        };
    }
    let sub = |rng: &mut _, vars: &mut Vec<String>, binders: &mut usize| {
        random_formula(rng, sig, vars, binders, depth - 1)
    };
    match rng.gen_range(0..6) {
        0 => Formula::not(sub(rng, vars, binders)),
        1 => Formula::and(sub(rng, vars, binders), sub(rng, vars, binders)),
        2 => Formula::or(sub(rng, vars, binders), sub(rng, vars, binders)),
        3 => Formula::implies(sub(rng, vars, binders), sub(rng, vars, binders)),
        k => {
            *binders += 1;
            let v = format!("V{binders}");
            vars.push(v.clone());
            let body = sub(rng, vars, binders);
            vars.pop();
            if k == 4 {
                Formula::exists(v, body)
            } else {
                Formula::forall(v, body)
            }
        }
    }
}

fn round_trips(seed: u64, cases: usize) -> Result<(usize, Vec<String>)> {
    let mut rng = oracle::rng(seed);
    let mut formulas = Vec::with_capacity(2 * cases);
    for sig in [Signature::W, Signature::L] {
        for _ in 0..cases {
            let mut vars = vec!["X".to_string(), "Y".to_string(), "Z".to_string()];
            let f = random_formula(&mut rng, sig, &mut vars, &mut 0, 4);
            formulas.push((sig, f));
        }
    }
    each(&formulas, |(sig, f)| {
        let text = f.to_string();
        let back = parse(&text, *sig);
        Ok(match back {
            Ok(g) if g == *f && g.to_string() == text => None,
            Ok(g) => Some(format!("`{text}` reparsed as `{g}`")),
            Err(e) => Some(format!("`{text}` failed to parse: {e}")),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpora_parse_and_cover_the_signatures() {
        let ops = |texts: &[&str], sig| {
            parse_all(texts, sig)
                .unwrap()
                .iter()
                .flat_map(|f| f.ops())
                .collect::<std::collections::BTreeSet<Op>>()
        };
        let w = [Op::Cup, Op::Cap, Op::Bot, Op::Cz, Op::Min, Op::Max, Op::Ips];
        let l = [Op::Cup, Op::Cap, Op::Bot, Op::Cz, Op::Min, Op::Max, Op::Left, Op::Right];
        assert!(w.iter().all(|o| ops(W_CORPUS, Signature::W).contains(o)));
        assert!(w.iter().all(|o| ops(W_QF_CORPUS, Signature::W).contains(o)));
        assert!(l.iter().all(|o| ops(L_CORPUS, Signature::L).contains(o)));
        assert!(W_QF_CORPUS.len() >= 10 && W_CORPUS.len() >= 10 && L_CORPUS.len() >= 10);
        for f in parse_all(W_QF_CORPUS, Signature::W).unwrap() {
            assert!(!f.has_quantifier(), "{f}");
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn standard_pool_prefixes() {
        assert_eq!(standard_pool(5).unwrap().to_string(), "{0, 1, 2, 5/2, 4}");
        assert!(standard_pool(9).is_err());
    }

    #[test]
    fn notbot_counts_subsets() {
        let r = run(Suite::Notbot, &Options::default()).unwrap();
        assert_eq!((r.checked, r.failures.len()), (32, 0));
    }

    #[test]
    fn member_suite_small() {
        let opts = Options {
            pool_size: Some(2),
            ..Options::default()
        };
        let r = run(Suite::Member, &opts).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
    }

    #[test]
    fn kernel_round_trips_seeded() {
        let (n, failures) = round_trips(3, 200).unwrap();
        assert_eq!(n, 400);
        assert!(failures.is_empty(), "{failures:?}");
    }
}
