//! Terms and first-order formulas over the two set signatures.
//!
//! Both signatures share `∪, ∩, ⊥, cz, min, max`; the weak monadic one adds the
//! binary `ips`, the interval one adds the unary `l` and `r`. The only relation
//! symbol is equality; `X sub Y` is parser sugar for `cap(X,Y) = X`.

mod parser;
mod printer;
mod rewrite;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use parser::parse;
pub use rewrite::{classify, nnf, unnest, Class, Fresh};
pub(crate) use rewrite::{is_unnested, unnest_with};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Signature {
    /// `{∪, ∩, ⊥, cz, min, max, ips}` over finite sets.
    W,
    /// `{∪, ∩, ⊥, cz, min, max, l, r}` over finite unions of closed intervals.
    L,
}

impl Signature {
    pub fn name(self) -> &'static str {
        match self {
            Signature::W => "w",
            Signature::L => "l",
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Function symbols. `Diff` (relative complement) belongs to neither
/// signature; it only appears in intermediate terms while eliminating
/// negations over finite sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Cup,
    Cap,
    Bot,
    Cz,
    Min,
    Max,
    Ips,
    Left,
    Right,
    Diff,
}

impl Op {
    pub const ALL: [Op; 10] = [
        Op::Cup,
        Op::Cap,
        Op::Bot,
        Op::Cz,
        Op::Min,
        Op::Max,
        Op::Ips,
        Op::Left,
        Op::Right,
        Op::Diff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Op::Cup => "cup",
            Op::Cap => "cap",
            Op::Bot => "bot",
            Op::Cz => "cz",
            Op::Min => "min",
            Op::Max => "max",
            Op::Ips => "ips",
            Op::Left => "l",
            Op::Right => "r",
            Op::Diff => "diff",
        }
    }

    pub fn from_name(name: &str) -> Option<Op> {
        Op::ALL.into_iter().find(|op| op.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            Op::Bot | Op::Cz => 0,
            Op::Min | Op::Max | Op::Left | Op::Right => 1,
            Op::Cup | Op::Cap | Op::Ips | Op::Diff => 2,
        }
    }

    /// Whether the symbol is in the shared reduct `{∪, ∩, ⊥, cz, min, max}`.
    pub fn is_shared(self) -> bool {
        matches!(self, Op::Cup | Op::Cap | Op::Bot | Op::Cz | Op::Min | Op::Max)
    }

    pub fn in_signature(self, sig: Signature) -> bool {
        self.is_shared()
            || match sig {
                Signature::W => self == Op::Ips,
                Signature::L => matches!(self, Op::Left | Op::Right),
            }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(Op, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn bot() -> Term {
        Term::App(Op::Bot, vec![])
    }

    pub fn cz() -> Term {
        Term::App(Op::Cz, vec![])
    }

    pub fn cup(a: Term, b: Term) -> Term {
        Term::App(Op::Cup, vec![a, b])
    }

    pub fn cap(a: Term, b: Term) -> Term {
        Term::App(Op::Cap, vec![a, b])
    }

    pub fn min(a: Term) -> Term {
        Term::App(Op::Min, vec![a])
    }

    pub fn max(a: Term) -> Term {
        Term::App(Op::Max, vec![a])
    }

    pub fn ips(a: Term, b: Term) -> Term {
        Term::App(Op::Ips, vec![a, b])
    }

    pub fn left(a: Term) -> Term {
        Term::App(Op::Left, vec![a])
    }

    pub fn right(a: Term) -> Term {
        Term::App(Op::Right, vec![a])
    }

    pub fn diff(a: Term, b: Term) -> Term {
        Term::App(Op::Diff, vec![a, b])
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::App(_, args) => args.iter().any(|a| a.mentions(name)),
        }
    }

    pub fn vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.vars_into(out)),
        }
    }

    pub fn contains_op(&self, op: Op) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(o, args) => *o == op || args.iter().any(|a| a.contains_op(op)),
        }
    }

    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(op, args) => Term::App(*op, args.iter().map(|a| a.substitute(map)).collect()),
        }
    }

    fn ops_into(&self, out: &mut BTreeSet<Op>) {
        if let Term::App(op, args) = self {
            out.insert(*op);
            args.iter().for_each(|a| a.ops_into(out));
        }
    }
}

/// A first-order formula whose atoms are equations between terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    /// `a ⊆ b`, written as the equation `cap(a, b) = a`.
    pub fn subset(a: Term, b: Term) -> Formula {
        Formula::Eq(Term::cap(a.clone(), b), a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn neq(a: Term, b: Term) -> Formula {
        Formula::not(Formula::Eq(a, b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(body))
    }

    /// `∃v1 ∃v2 … body`, outermost first.
    pub fn exists_all<I: IntoIterator<Item = String>>(vars: I, body: Formula) -> Formula {
        let vars: Vec<String> = vars.into_iter().collect();
        vars.into_iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v, acc))
    }

    /// Left-nested conjunction; `True` for an empty list.
    pub fn and_all<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `False` for an empty list.
    pub fn or_all<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) => {
                let mut vs = BTreeSet::new();
                a.vars_into(&mut vs);
                b.vars_into(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(g) => g.free_vars_into(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                bound.push(v.clone());
                body.free_vars_into(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, free or bound.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Eq(a, b) => {
                a.vars_into(&mut out);
                b.vars_into(&mut out);
            }
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Whether `name` occurs free.
    pub fn mentions_free(&self, name: &str) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::Eq(a, b) => a.mentions(name) || b.mentions(name),
            Formula::Not(g) => g.mentions_free(name),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.mentions_free(name) || b.mentions_free(name)
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                v != name && body.mentions_free(name)
            }
        }
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Applies `f` to every term of every atom.
    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Eq(a, b) => Formula::Eq(f(a), f(b)),
            Formula::Not(g) => Formula::not(g.map_terms(f)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_terms(f), b.map_terms(f)),
            Formula::Exists(v, body) => Formula::exists(v.clone(), body.map_terms(f)),
            Formula::Forall(v, body) => Formula::forall(v.clone(), body.map_terms(f)),
        }
    }

    pub fn ops(&self) -> BTreeSet<Op> {
        let mut out = BTreeSet::new();
        self.visit(&mut |g| {
            if let Formula::Eq(a, b) = g {
                a.ops_into(&mut out);
                b.ops_into(&mut out);
            }
        });
        out
    }

    pub fn has_quantifier(&self) -> bool {
        let mut found = false;
        self.visit(&mut |g| {
            found |= matches!(g, Formula::Exists(..) | Formula::Forall(..));
        });
        found
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Eq(..))
    }

    /// Fails unless every symbol belongs to `sig` with the right arity.
    pub fn check_signature(&self, sig: Signature) -> Result<()> {
        let mut err = None;
        self.visit(&mut |g| {
            if let Formula::Eq(a, b) = g {
                for t in [a, b] {
                    if err.is_none() {
                        err = check_term(t, sig).err();
                    }
                }
            }
        });
        err.map_or(Ok(()), Err)
    }

    /// Capture-avoiding simultaneous substitution of terms for free variables.
    /// Binders that would capture a variable of a substituted term are renamed
    /// with names drawn from `fresh`.
    pub fn substitute(&self, map: &BTreeMap<String, Term>, fresh: &mut Fresh) -> Formula {
        let mut incoming = BTreeSet::new();
        for t in map.values() {
            t.vars_into(&mut incoming);
        }
        self.subst_inner(map, &incoming, fresh)
    }

    fn subst_inner(
        &self,
        map: &BTreeMap<String, Term>,
        incoming: &BTreeSet<String>,
        fresh: &mut Fresh,
    ) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Eq(a, b) => Formula::Eq(a.substitute(map), b.substitute(map)),
            Formula::Not(g) => Formula::not(g.subst_inner(map, incoming, fresh)),
            Formula::And(a, b) => Formula::and(
                a.subst_inner(map, incoming, fresh),
                b.subst_inner(map, incoming, fresh),
            ),
            Formula::Or(a, b) => Formula::or(
                a.subst_inner(map, incoming, fresh),
                b.subst_inner(map, incoming, fresh),
            ),
            Formula::Implies(a, b) => Formula::implies(
                a.subst_inner(map, incoming, fresh),
                b.subst_inner(map, incoming, fresh),
            ),
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let is_exists = matches!(self, Formula::Exists(..));
                let mut inner = map.clone();
                inner.remove(v);
                let (name, inner) = if incoming.contains(v) {
                    let renamed = fresh.next(base_name(v));
                    inner.insert(v.clone(), Term::var(renamed.clone()));
                    (renamed, inner)
                } else {
                    (v.clone(), inner)
                };
                let mut incoming = incoming.clone();
                if name != *v {
                    incoming.insert(name.clone());
                }
                let body = body.subst_inner(&inner, &incoming, fresh);
                if is_exists {
                    Formula::exists(name, body)
                } else {
                    Formula::forall(name, body)
                }
            }
        }
    }

    /// Renames every bound variable to a fresh name drawn from `fresh`.
    pub fn freshen_bound(&self, fresh: &mut Fresh) -> Formula {
        self.freshen_inner(&BTreeMap::new(), fresh)
    }

    fn freshen_inner(&self, map: &BTreeMap<String, Term>, fresh: &mut Fresh) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Eq(a, b) => Formula::Eq(a.substitute(map), b.substitute(map)),
            Formula::Not(g) => Formula::not(g.freshen_inner(map, fresh)),
            Formula::And(a, b) => {
                Formula::and(a.freshen_inner(map, fresh), b.freshen_inner(map, fresh))
            }
            Formula::Or(a, b) => {
                Formula::or(a.freshen_inner(map, fresh), b.freshen_inner(map, fresh))
            }
            Formula::Implies(a, b) => {
                Formula::implies(a.freshen_inner(map, fresh), b.freshen_inner(map, fresh))
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let name = fresh.next(base_name(v));
                let mut inner = map.clone();
                inner.insert(v.clone(), Term::var(name.clone()));
                let body = body.freshen_inner(&inner, fresh);
                if matches!(self, Formula::Exists(..)) {
                    Formula::exists(name, body)
                } else {
                    Formula::forall(name, body)
                }
            }
        }
    }

    /// Instantiates a template: its bound variables are renamed fresh, then
    /// its free variables are replaced by `args`.
    pub fn instantiate(&self, args: &[(&str, Term)], fresh: &mut Fresh) -> Formula {
        let renamed = self.freshen_bound(fresh);
        let map: BTreeMap<String, Term> = args
            .iter()
            .map(|(k, t)| (k.to_string(), t.clone()))
            .collect();
        renamed.substitute(&map, fresh)
    }
}

/// The name with any trailing digits removed, used as the stem for fresh names.
pub(crate) fn base_name(v: &str) -> &str {
    let stem = v.trim_end_matches(|c: char| c.is_ascii_digit());
    if stem.is_empty() {
        "V"
    } else {
        stem
    }
}

fn check_term(t: &Term, sig: Signature) -> Result<()> {
    match t {
        Term::Var(_) => Ok(()),
        Term::App(op, args) => {
            if !op.in_signature(sig) {
                return Err(Error::Signature(format!(
                    "`{}` is not in signature {sig}",
                    op.name()
                )));
            }
            if args.len() != op.arity() {
                return Err(Error::Signature(format!(
                    "`{}` expects {} argument(s), got {}",
                    op.name(),
                    op.arity(),
                    args.len()
                )));
            }
            args.iter().try_for_each(|a| check_term(a, sig))
        }
    }
}
