//! Satisfaction in `W(I)` and `L(I)`.
//!
//! Quantifier-free formulas are evaluated exactly. Quantifiers range over a
//! [`WitnessPool`]: all finite subsets of the pool points in `W(I)`, all
//! interval unions with endpoints among them in `L(I)`. Before enumerating a
//! quantifier's range the evaluator looks for atoms that pin the variable down
//! (`V = t`, `cup(V,W) = t`, `cap(V,t) = V`, `l(V) = s ∧ r(V) = t`, ...) and
//! only tries the values they allow. Candidates are still filtered by the pool,
//! so the result is exactly the pool-relativized truth value.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{precondition, Error, Result};
use crate::fci::FciSet;
use crate::finset::FinSet;
use crate::order::Point;
use crate::syntax::{Formula, Op, Signature, Term};

/// Largest pool a quantifier may enumerate.
pub const EVAL_POINT_CAP: usize = 12;

pub type Assignment<E> = BTreeMap<String, E>;

/// Bounds the range of quantified variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPool {
    points: FinSet,
    max_segments: usize,
    allow_ray: bool,
}

impl WitnessPool {
    /// Fails unless `points` contains `0`.
    pub fn new(points: FinSet, max_segments: usize, allow_ray: bool) -> Result<Self> {
        if !points.contains(&Point::zero()) {
            return Err(precondition("WitnessPool::new", "pool points must contain 0"));
        }
        Ok(WitnessPool {
            points,
            max_segments,
            allow_ray,
        })
    }

    /// `points ∪ {0}`, closed under midpoints of consecutive points, plus one
    /// point above the maximum. Segments are limited only by the point count.
    pub fn around(points: &FinSet) -> Self {
        let base = points.union(&FinSet::zero());
        let mut all: Vec<Point> = base.points().to_vec();
        for w in base.points().windows(2) {
            all.push(Point::midpoint(&w[0], &w[1]).expect("pool points are increasing"));
        }
        all.push(base.max_point().expect("pool contains 0").above());
        let points = FinSet::from_points(all);
        WitnessPool {
            max_segments: points.len(),
            points,
            allow_ray: true,
        }
    }

    pub fn points(&self) -> &FinSet {
        &self.points
    }

    pub fn max_segments(&self) -> usize {
        self.max_segments
    }

    pub fn allow_ray(&self) -> bool {
        self.allow_ray
    }
}

impl fmt::Display for WitnessPool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "points={} max_segments={} allow_ray={}",
            self.points, self.max_segments, self.allow_ray
        )
    }
}

/// One of the two set structures.
pub trait Structure: Send + Sync + 'static {
    type Elem: Clone
        + Eq
        + Ord
        + Hash
        + fmt::Debug
        + fmt::Display
        + FromStr<Err = Error>
        + Send
        + Sync;

    const SIGNATURE: Signature;

    fn apply(op: Op, args: &[Self::Elem]) -> Result<Self::Elem>;

    /// Points a value is built from; they seed [`default_pool`].
    fn boundary(e: &Self::Elem) -> FinSet;

    fn in_domain(e: &Self::Elem, pool: &WitnessPool) -> bool;

    /// The whole quantifier range of `pool`.
    fn domain(pool: &WitnessPool) -> Result<Vec<Self::Elem>>;

    /// Range elements contained in `bound`, when that is cheap to list.
    fn subsets_within(bound: &Self::Elem, pool: &WitnessPool) -> Result<Option<Vec<Self::Elem>>>;

    /// `⊥` and the singletons of the pool.
    fn atoms(pool: &WitnessPool) -> Vec<Self::Elem>;

    /// Range elements that are finite sets.
    fn finite_elems(pool: &WitnessPool) -> Result<Vec<Self::Elem>>;

    /// The element with the given left and right endpoint sets, if any.
    fn from_endpoints(_l: &Self::Elem, _r: &Self::Elem) -> Option<Option<Self::Elem>> {
        None
    }
}

/// `W(I)`: finite sets.
#[derive(Clone, Copy, Debug)]
pub struct WStruct;

/// `L(I)`: finite unions of closed intervals.
#[derive(Clone, Copy, Debug)]
pub struct LStruct;

fn subsets_of(points: &[Point]) -> Result<Vec<FinSet>> {
    if points.len() > EVAL_POINT_CAP {
        return Err(Error::PoolTooLarge {
            size: points.len(),
            cap: EVAL_POINT_CAP,
        });
    }
    Ok(crate::oracle::subsets(points))
}

fn signature_error(op: Op, sig: Signature) -> Error {
    Error::Signature(format!("`{}` is not in signature {sig}", op.name()))
}

impl Structure for WStruct {
    type Elem = FinSet;
    const SIGNATURE: Signature = Signature::W;

    fn apply(op: Op, args: &[FinSet]) -> Result<FinSet> {
        Ok(match (op, args) {
            (Op::Cup, [a, b]) => a.union(b),
            (Op::Cap, [a, b]) => a.intersect(b),
            (Op::Bot, []) => FinSet::empty(),
            (Op::Cz, []) => FinSet::zero(),
            (Op::Min, [a]) => a.min_s(),
            (Op::Max, [a]) => a.max_s(),
            (Op::Ips, [a, b]) => a.ips(b),
            (Op::Diff, [a, b]) => a.rel_complement(b),
            (Op::Left | Op::Right, _) => return Err(signature_error(op, Signature::W)),
            _ => return Err(Error::Eval(format!("bad arity for `{}`", op.name()))),
        })
    }

    fn boundary(e: &FinSet) -> FinSet {
        e.clone()
    }

    fn in_domain(e: &FinSet, pool: &WitnessPool) -> bool {
        e.is_subset(&pool.points)
    }

    fn domain(pool: &WitnessPool) -> Result<Vec<FinSet>> {
        subsets_of(pool.points.points())
    }

    fn subsets_within(bound: &FinSet, pool: &WitnessPool) -> Result<Option<Vec<FinSet>>> {
        subsets_of(bound.intersect(&pool.points).points()).map(Some)
    }

    fn atoms(pool: &WitnessPool) -> Vec<FinSet> {
        std::iter::once(FinSet::empty())
            .chain(pool.points.iter().cloned().map(FinSet::singleton))
            .collect()
    }

    fn finite_elems(pool: &WitnessPool) -> Result<Vec<FinSet>> {
        Self::domain(pool)
    }
}

impl Structure for LStruct {
    type Elem = FciSet;
    const SIGNATURE: Signature = Signature::L;

    fn apply(op: Op, args: &[FciSet]) -> Result<FciSet> {
        Ok(match (op, args) {
            (Op::Cup, [a, b]) => a.union_f(b),
            (Op::Cap, [a, b]) => a.intersect_f(b),
            (Op::Bot, []) => FciSet::empty(),
            (Op::Cz, []) => FciSet::embed_finset(&FinSet::zero()),
            (Op::Min, [a]) => a.min_f(),
            (Op::Max, [a]) => a.max_f(),
            (Op::Left, [a]) => FciSet::embed_finset(&a.left_pts()),
            (Op::Right, [a]) => FciSet::embed_finset(&a.right_pts()),
            (Op::Ips | Op::Diff, _) => return Err(signature_error(op, Signature::L)),
            _ => return Err(Error::Eval(format!("bad arity for `{}`", op.name()))),
        })
    }

    fn boundary(e: &FciSet) -> FinSet {
        e.boundary()
    }

    fn in_domain(e: &FciSet, pool: &WitnessPool) -> bool {
        e.segment_count() <= pool.max_segments
            && (pool.allow_ray || e.ray().is_none())
            && e.boundary().is_subset(&pool.points)
    }

    fn domain(pool: &WitnessPool) -> Result<Vec<FciSet>> {
        let n = pool.points.len();
        if n > EVAL_POINT_CAP {
            return Err(Error::PoolTooLarge {
                size: n,
                cap: EVAL_POINT_CAP,
            });
        }
        Ok(crate::oracle::fcis(
            pool.points.points(),
            pool.max_segments,
            pool.allow_ray,
        ))
    }

    fn subsets_within(bound: &FciSet, pool: &WitnessPool) -> Result<Option<Vec<FciSet>>> {
        if !bound.is_finite_set() {
            return Ok(None);
        }
        let pts = bound.left_pts().intersect(&pool.points);
        Ok(Some(
            subsets_of(pts.points())?
                .iter()
                .map(FciSet::embed_finset)
                .collect(),
        ))
    }

    fn atoms(pool: &WitnessPool) -> Vec<FciSet> {
        WStruct::atoms(pool)
            .iter()
            .map(FciSet::embed_finset)
            .collect()
    }

    fn finite_elems(pool: &WitnessPool) -> Result<Vec<FciSet>> {
        Ok(WStruct::domain(pool)?
            .iter()
            .map(FciSet::embed_finset)
            .collect())
    }

    fn from_endpoints(l: &FciSet, r: &FciSet) -> Option<Option<FciSet>> {
        let (Ok(b), Ok(c)) = (l.as_finset(), r.as_finset()) else {
            return Some(None);
        };
        Some(FciSet::build_from_endpoints(&b, &c).ok())
    }
}

/// The value of `t` under `a`.
pub fn eval_term<S: Structure>(t: &Term, a: &Assignment<S::Elem>) -> Result<S::Elem> {
    let pool = WitnessPool::around(&FinSet::empty());
    Evaluator::<S>::new(a, &pool).term(t)
}

/// Truth of a quantifier-free formula.
pub fn eval_qf<S: Structure>(f: &Formula, a: &Assignment<S::Elem>) -> Result<bool> {
    if f.has_quantifier() {
        return Err(precondition("eval_qf", "formula has a quantifier"));
    }
    let pool = WitnessPool::around(&FinSet::empty());
    Evaluator::<S>::new(a, &pool).sat(f)
}

/// `WitnessPool::around` the boundary points of every assigned value.
pub fn default_pool<S: Structure>(a: &Assignment<S::Elem>) -> WitnessPool {
    let pts = a
        .values()
        .fold(FinSet::empty(), |acc, e| acc.union(&S::boundary(e)));
    WitnessPool::around(&pts)
}

/// Truth of `f` under `a` with quantifiers ranging over `pool`.
pub fn eval_bounded<S: Structure>(
    f: &Formula,
    a: &Assignment<S::Elem>,
    pool: &WitnessPool,
) -> Result<bool> {
    Evaluator::<S>::new(a, pool).sat(f)
}

/// [`eval_bounded`] over [`default_pool`].
pub fn eval_default<S: Structure>(f: &Formula, a: &Assignment<S::Elem>) -> Result<bool> {
    eval_bounded::<S>(f, a, &default_pool::<S>(a))
}

/// What inference learned about a quantified variable.
enum Cands<E> {
    /// Every useful value is among these.
    Exact(Vec<E>),
    /// Only `⊥` and singletons are useful.
    Atoms,
    /// Only finite sets are useful.
    Finite,
    Any,
}

impl<E> Cands<E> {
    fn rank(&self) -> (u8, usize) {
        match self {
            Cands::Exact(v) => (0, v.len()),
            Cands::Atoms => (1, 0),
            Cands::Finite => (2, 0),
            Cands::Any => (3, 0),
        }
    }

    fn tighter(self, other: Self) -> Self {
        if other.rank() < self.rank() {
            other
        } else {
            self
        }
    }
}

struct Evaluator<'p, S: Structure> {
    pool: &'p WitnessPool,
    domain: Option<Arc<Vec<S::Elem>>>,
    env: Vec<(String, S::Elem)>,
}

impl<'p, S: Structure> Evaluator<'p, S> {
    fn new(a: &Assignment<S::Elem>, pool: &'p WitnessPool) -> Self {
        Evaluator {
            pool,
            domain: None,
            env: a.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    fn lookup(&self, v: &str) -> Option<&S::Elem> {
        self.env.iter().rev().find(|(k, _)| k == v).map(|(_, e)| e)
    }

    fn term(&self, t: &Term) -> Result<S::Elem> {
        match t {
            Term::Var(v) => self
                .lookup(v)
                .cloned()
                .ok_or_else(|| Error::UnboundVariable(v.clone())),
            Term::App(op, args) => {
                let vals = args
                    .iter()
                    .map(|a| self.term(a))
                    .collect::<Result<Vec<_>>>()?;
                S::apply(*op, &vals)
            }
        }
    }

    fn sat(&mut self, f: &Formula) -> Result<bool> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Eq(a, b) => self.term(a)? == self.term(b)?,
            Formula::Not(g) => !self.sat(g)?,
            Formula::And(a, b) => self.sat(a)? && self.sat(b)?,
            Formula::Or(a, b) => self.sat(a)? || self.sat(b)?,
            Formula::Implies(a, b) => !self.sat(a)? || self.sat(b)?,
            Formula::Exists(v, body) => self.search(v, body, true)?,
            Formula::Forall(v, body) => !self.search(v, body, false)?,
        })
    }

    fn domain(&mut self) -> Result<Arc<Vec<S::Elem>>> {
        if self.domain.is_none() {
            self.domain = Some(Arc::new(S::domain(self.pool)?));
        }
        Ok(self.domain.clone().expect("just set"))
    }

    fn materialize(&mut self, c: Cands<S::Elem>) -> Result<Arc<Vec<S::Elem>>> {
        let list = match c {
            Cands::Exact(v) => v,
            Cands::Atoms => S::atoms(self.pool),
            Cands::Finite => S::finite_elems(self.pool)?,
            Cands::Any => return self.domain(),
        };
        Ok(Arc::new(self.in_range(list)))
    }

    fn in_range(&self, mut cands: Vec<S::Elem>) -> Vec<S::Elem> {
        cands.retain(|c| S::in_domain(c, self.pool));
        cands.sort();
        cands.dedup();
        cands
    }

    /// Whether some value of `v` in range gives `body` the truth value `want`.
    fn search(&mut self, v: &str, body: &Formula, want: bool) -> Result<bool> {
        let hint = self.infer(v, body, want, &mut Vec::new())?;
        let cands = self.materialize(hint)?;
        for c in cands.iter() {
            self.env.push((v.to_string(), c.clone()));
            let r = self.sat(body);
            self.env.pop();
            if r? == want {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn known(&self, x: &str, v: &str, unknown: &[String]) -> bool {
        x != v && !unknown.iter().any(|u| u == x) && self.lookup(x).is_some()
    }

    fn evaluable(&self, t: &Term, v: &str, unknown: &[String]) -> bool {
        let mut vars = Default::default();
        t.vars_into(&mut vars);
        vars.iter().all(|x| self.known(x, v, unknown))
    }

    fn closed(&self, f: &Formula, v: &str, unknown: &[String]) -> bool {
        f.free_vars().iter().all(|x| self.known(x, v, unknown))
    }

    /// Which values of `v` can give `f` the truth value `pos`.
    fn infer(
        &mut self,
        v: &str,
        f: &Formula,
        pos: bool,
        unknown: &mut Vec<String>,
    ) -> Result<Cands<S::Elem>> {
        match (f, pos) {
            (Formula::True, false) | (Formula::False, true) => Ok(Cands::Exact(Vec::new())),
            (Formula::True | Formula::False, _) => Ok(Cands::Any),
            (Formula::Not(g), _) => self.infer(v, g, !pos, unknown),
            (Formula::And(..), true) | (Formula::Or(..), false) | (Formula::Implies(..), false) => {
                let mut parts = Vec::new();
                conjuncts(f, pos, &mut parts);
                self.infer_conj(v, &parts, unknown)
            }
            (Formula::Or(a, b), true) | (Formula::And(a, b), false) => {
                self.infer_disj(v, (a, pos), (b, pos), unknown)
            }
            (Formula::Implies(a, b), true) => self.infer_disj(v, (a, false), (b, true), unknown),
            (Formula::Eq(a, b), true) => self.infer_atom(v, a, b, unknown),
            (Formula::Eq(..), false) => Ok(Cands::Any),
            (Formula::Exists(w, body), true) | (Formula::Forall(w, body), false) => {
                if w == v || !body.mentions_free(v) {
                    return Ok(Cands::Any);
                }
                unknown.push(w.clone());
                let direct = self.infer(v, body, pos, unknown);
                unknown.pop();
                let direct = direct?;
                if !matches!(direct, Cands::Any) {
                    return Ok(direct);
                }
                unknown.push(v.to_string());
                let ws = self.infer(w, body, pos, unknown);
                unknown.pop();
                let Cands::Exact(ws) = ws? else {
                    return Ok(Cands::Any);
                };
                let mut out = Cands::Exact(Vec::new());
                for wv in self.in_range(ws) {
                    self.env.push((w.clone(), wv));
                    let vs = self.infer(v, body, pos, unknown);
                    self.env.pop();
                    out = self.union(out, vs?)?;
                    if matches!(out, Cands::Any) {
                        break;
                    }
                }
                Ok(out)
            }
            (Formula::Exists(..) | Formula::Forall(..), _) => Ok(Cands::Any),
        }
    }

    fn union(&mut self, a: Cands<S::Elem>, b: Cands<S::Elem>) -> Result<Cands<S::Elem>> {
        Ok(match (a, b) {
            (Cands::Any, _) | (_, Cands::Any) => Cands::Any,
            (Cands::Exact(mut x), Cands::Exact(y)) => {
                x.extend(y);
                Cands::Exact(x)
            }
            (Cands::Atoms, Cands::Atoms) => Cands::Atoms,
            (Cands::Finite, Cands::Finite | Cands::Atoms)
            | (Cands::Atoms, Cands::Finite) => Cands::Finite,
            (hint, Cands::Exact(mut x)) | (Cands::Exact(mut x), hint) => {
                x.extend(self.materialize(hint)?.iter().cloned());
                Cands::Exact(x)
            }
        })
    }

    fn infer_disj(
        &mut self,
        v: &str,
        (a, pa): (&Formula, bool),
        (b, pb): (&Formula, bool),
        unknown: &mut Vec<String>,
    ) -> Result<Cands<S::Elem>> {
        let x = self.infer(v, a, pa, unknown)?;
        if matches!(x, Cands::Any) {
            return Ok(Cands::Any);
        }
        let y = self.infer(v, b, pb, unknown)?;
        self.union(x, y)
    }

    fn infer_conj(
        &mut self,
        v: &str,
        parts: &[(&Formula, bool)],
        unknown: &mut Vec<String>,
    ) -> Result<Cands<S::Elem>> {
        for (g, p) in parts {
            if !g.has_quantifier() && self.closed(g, v, unknown) && self.sat(g)? != *p {
                return Ok(Cands::Exact(Vec::new()));
            }
        }
        let mut best = self.endpoint_pair(v, parts, unknown)?;
        for (g, p) in parts {
            if g.mentions_free(v) {
                let c = self.infer(v, g, *p, unknown)?;
                best = best.tighter(c);
            }
        }
        Ok(best)
    }

    /// `l(v) = s ∧ r(v) = t` determines `v`.
    fn endpoint_pair(
        &self,
        v: &str,
        parts: &[(&Formula, bool)],
        unknown: &[String],
    ) -> Result<Cands<S::Elem>> {
        let mut left = None;
        let mut right = None;
        for (g, p) in parts {
            let (Formula::Eq(a, b), true) = (g, p) else {
                continue;
            };
            for (x, y) in [(a, b), (b, a)] {
                if let Term::App(op @ (Op::Left | Op::Right), args) = x {
                    if args[0].as_var() == Some(v) && self.evaluable(y, v, unknown) {
                        let slot = if *op == Op::Left { &mut left } else { &mut right };
                        slot.get_or_insert(y);
                    }
                }
            }
        }
        let (Some(l), Some(r)) = (left, right) else {
            return Ok(Cands::Any);
        };
        let (l, r) = (self.term(l)?, self.term(r)?);
        Ok(match S::from_endpoints(&l, &r) {
            Some(d) => Cands::Exact(d.into_iter().collect()),
            None => Cands::Any,
        })
    }

    fn infer_atom(
        &mut self,
        v: &str,
        a: &Term,
        b: &Term,
        unknown: &[String],
    ) -> Result<Cands<S::Elem>> {
        let is_v = |t: &Term| t.as_var() == Some(v);
        for (x, y) in [(a, b), (b, a)] {
            if is_v(x) && self.evaluable(y, v, unknown) {
                return Ok(Cands::Exact(vec![self.term(y)?]));
            }
        }
        let within = |this: &Self, bound: &Term| -> Result<Cands<S::Elem>> {
            Ok(match S::subsets_within(&this.term(bound)?, this.pool)? {
                Some(c) => Cands::Exact(c),
                None => Cands::Any,
            })
        };
        for (x, y) in [(a, b), (b, a)] {
            if cup_operand(x, v) && self.evaluable(y, v, unknown) {
                return within(self, y);
            }
            if let Term::App(Op::Cap, args) = x {
                if is_v(y) {
                    for (p, q) in [(&args[0], &args[1]), (&args[1], &args[0])] {
                        if is_v(p) && self.evaluable(q, v, unknown) {
                            return within(self, q);
                        }
                    }
                }
            }
            if let Term::App(Op::Min | Op::Max, args) = x {
                if is_v(&args[0]) && is_v(y) {
                    return Ok(Cands::Atoms);
                }
            }
            if let (Term::App(Op::Left, p), Term::App(Op::Right, q)) = (x, y) {
                if is_v(&p[0]) && is_v(&q[0]) {
                    return Ok(Cands::Finite);
                }
            }
        }
        Ok(Cands::Any)
    }
}

fn cup_operand(t: &Term, v: &str) -> bool {
    match t {
        Term::Var(x) => x == v,
        Term::App(Op::Cup, args) => args.iter().any(|a| cup_operand(a, v)),
        Term::App(..) => false,
    }
}

fn conjuncts<'f>(f: &'f Formula, pos: bool, out: &mut Vec<(&'f Formula, bool)>) {
    match (f, pos) {
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
            conjuncts(a, pos, out);
            conjuncts(b, pos, out);
        }
        (Formula::Implies(a, b), false) => {
            conjuncts(a, true, out);
            conjuncts(b, false, out);
        }
        (Formula::Not(g), _) => conjuncts(g, !pos, out),
        _ => out.push((f, pos)),
    }
}
