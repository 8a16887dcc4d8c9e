use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::{Formula, Term};

/// Deterministic fresh-name supply: `base` followed by a counter, skipping
/// names already in use.
#[derive(Clone, Debug, Default)]
pub struct Fresh {
    used: BTreeSet<String>,
    counter: usize,
}

impl Fresh {
    pub fn new(used: BTreeSet<String>) -> Self {
        Fresh { used, counter: 0 }
    }

    /// A supply avoiding every name that occurs in `f`.
    pub fn for_formula(f: &Formula) -> Self {
        Fresh::new(f.all_names())
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    pub fn reserve_all(&mut self, f: &Formula) {
        self.used.extend(f.all_names());
    }

    pub fn next(&mut self, base: &str) -> String {
        loop {
            self.counter += 1;
            let name = format!("{base}{}", self.counter);
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }

    /// `preferred` itself when unused, otherwise a numbered variant.
    pub fn named(&mut self, preferred: &str) -> String {
        if self.used.insert(preferred.to_string()) {
            preferred.to_string()
        } else {
            self.next(preferred)
        }
    }
}

/// Negation normal form: `->` eliminated, `!` only in front of atoms.
pub fn nnf(f: &Formula) -> Formula {
    nnf_pol(f, true)
}

fn nnf_pol(f: &Formula, pos: bool) -> Formula {
    match f {
        Formula::True => {
            if pos {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::False => {
            if pos {
                Formula::False
            } else {
                Formula::True
            }
        }
        Formula::Eq(..) => {
            if pos {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Not(g) => nnf_pol(g, !pos),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let conj = matches!(f, Formula::And(..)) == pos;
            let (a, b) = (nnf_pol(a, pos), nnf_pol(b, pos));
            if conj {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        }
        Formula::Implies(a, b) => {
            let (a, b) = (nnf_pol(a, !pos), nnf_pol(b, pos));
            if pos {
                Formula::or(a, b)
            } else {
                Formula::and(a, b)
            }
        }
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let body = nnf_pol(body, pos);
            if matches!(f, Formula::Exists(..)) == pos {
                Formula::exists(v.clone(), body)
            } else {
                Formula::forall(v.clone(), body)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    QuantifierFree,
    Existential,
    PositiveExistential,
    Other,
}

impl Class {
    pub fn name(self) -> &'static str {
        match self {
            Class::QuantifierFree => "quantifier_free",
            Class::Existential => "existential",
            Class::PositiveExistential => "positive_existential",
            Class::Other => "other",
        }
    }

    /// Existential in the broad sense, including the narrower classes.
    pub fn is_existential(self) -> bool {
        self != Class::Other
    }
}

/// The syntactic class of `f` after `nnf`. Negation-free quantifier-free
/// formulas count as positive existential.
pub fn classify(f: &Formula) -> Class {
    let g = nnf(f);
    let (mut has_not, mut has_exists, mut has_forall) = (false, false, false);
    g.visit(&mut |h| match h {
        Formula::Not(_) => has_not = true,
        Formula::Exists(..) => has_exists = true,
        Formula::Forall(..) => has_forall = true,
        _ => {}
    });
    if has_forall {
        Class::Other
    } else if !has_not {
        Class::PositiveExistential
    } else if !has_exists {
        Class::QuantifierFree
    } else {
        Class::Existential
    }
}

/// Whether `a = b` already has one of the shapes `v = w`, `c = v`, `g(v̄) = w`.
pub(crate) fn is_unnested(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Var(_), Term::Var(_)) => true,
        (Term::App(_, args), Term::Var(_)) => args.iter().all(Term::is_var),
        _ => false,
    }
}

/// Removes nested terms. Each non-unnested literal `L` is replaced by
/// `∃Ū(defs ∧ L')` in positive position and `∀Ū(defs → L')` in negative
/// position, where the definitional atoms `g(v̄) = U` sit outside any
/// negation. Equations `v = g(v̄)` and `v = c` are reoriented.
pub fn unnest(f: &Formula) -> Formula {
    let mut fresh = Fresh::for_formula(f);
    unnest_with(f, &mut fresh)
}

pub(crate) fn unnest_with(f: &Formula, fresh: &mut Fresh) -> Formula {
    unnest_pol(f, true, fresh)
}

fn unnest_pol(f: &Formula, pos: bool, fresh: &mut Fresh) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Eq(a, b) => unnest_literal(a, b, false, pos, fresh),
        Formula::Not(g) => match &**g {
            Formula::Eq(a, b) => unnest_literal(a, b, true, pos, fresh),
            _ => Formula::not(unnest_pol(g, !pos, fresh)),
        },
        Formula::And(a, b) => Formula::and(unnest_pol(a, pos, fresh), unnest_pol(b, pos, fresh)),
        Formula::Or(a, b) => Formula::or(unnest_pol(a, pos, fresh), unnest_pol(b, pos, fresh)),
        Formula::Implies(a, b) => {
            Formula::implies(unnest_pol(a, !pos, fresh), unnest_pol(b, pos, fresh))
        }
        Formula::Exists(v, body) => Formula::exists(v.clone(), unnest_pol(body, pos, fresh)),
        Formula::Forall(v, body) => Formula::forall(v.clone(), unnest_pol(body, pos, fresh)),
    }
}

fn unnest_literal(a: &Term, b: &Term, negated: bool, pos: bool, fresh: &mut Fresh) -> Formula {
    let wrap = |core: Formula| if negated { Formula::not(core) } else { core };
    if is_unnested(a, b) {
        return wrap(Formula::eq(a.clone(), b.clone()));
    }
    if is_unnested(b, a) {
        return wrap(Formula::eq(b.clone(), a.clone()));
    }
    let mut fl = Flattener {
        defs: Vec::new(),
        memo: HashMap::new(),
        fresh,
    };
    let core = match (a, b) {
        (Term::Var(_), _) => Formula::eq(fl.shallow(b), a.clone()),
        (_, Term::Var(_)) => Formula::eq(fl.shallow(a), b.clone()),
        _ => {
            let w = fl.name(b);
            Formula::eq(fl.shallow(a), w)
        }
    };
    let defs = fl.defs;
    let core = wrap(core);
    defs.into_iter().rev().fold(core, |acc, (u, t)| {
        let def = Formula::eq(t, Term::var(u.clone()));
        if pos {
            Formula::exists(u, Formula::and(def, acc))
        } else {
            Formula::forall(u, Formula::implies(def, acc))
        }
    })
}

struct Flattener<'a> {
    defs: Vec<(String, Term)>,
    memo: HashMap<Term, String>,
    fresh: &'a mut Fresh,
}

impl Flattener<'_> {
    /// A variable naming `t`, introducing definitions for nested subterms.
    fn name(&mut self, t: &Term) -> Term {
        if t.is_var() {
            return t.clone();
        }
        let shallow = self.shallow(t);
        if let Some(u) = self.memo.get(&shallow) {
            return Term::var(u.clone());
        }
        let u = self.fresh.next("U");
        self.memo.insert(shallow.clone(), u.clone());
        self.defs.push((u.clone(), shallow));
        Term::var(u)
    }

    /// `t` with every argument replaced by a variable.
    fn shallow(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::App(op, args) => Term::App(*op, args.iter().map(|x| self.name(x)).collect()),
        }
    }
}
