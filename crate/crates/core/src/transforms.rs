//! Formula transformations between the two structures.
//!
//! * [`to_positive_existential`] removes negated atoms over finite sets.
//! * [`translate_w_to_l`] interprets finite sets inside `L(I)` as the sets
//!   with `l(X) = r(X)`, replacing `ips` by the existential [`phi_ips`].
//! * [`translate_l_to_w`] interprets an interval union `A` by its endpoint
//!   pair `(A_l, A_r)`.
//! * [`pipeline`] composes the three and substitutes `l(X)`, `r(X)` back.

use std::collections::BTreeMap;
use std::sync::LazyLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::syntax::{is_unnested, unnest_with};
use crate::syntax::{classify, nnf, parse, Class, Formula, Fresh, Op, Signature, Term};

fn template(text: &str, sig: Signature) -> Formula {
    parse(text, sig).unwrap_or_else(|e| panic!("template `{text}`: {e}"))
}

fn v(name: &str) -> Term {
    Term::var(name)
}

/// `(q1 \ q2) ∪ (q2 \ q1)`.
pub fn delta_term(q1: &Term, q2: &Term) -> Term {
    Term::cup(
        Term::diff(q1.clone(), q2.clone()),
        Term::diff(q2.clone(), q1.clone()),
    )
}

/// `Y ≠ ⊥` without negation: `Y = cz ∨ cz ⊆ ips(Y ∪ cz, Y)`.
pub fn nonempty_w(y: Term) -> Formula {
    Formula::or(
        Formula::eq(y.clone(), Term::cz()),
        Formula::subset(Term::cz(), Term::ips(Term::cup(y.clone(), Term::cz()), y)),
    )
}

fn first_forall(f: &Formula) -> Option<String> {
    let mut found = None;
    f.visit(&mut |g| {
        if let (Formula::Forall(v, _), None) = (g, &found) {
            found = Some(v.clone());
        }
    });
    found
}

/// A positive existential formula equivalent over `W(I)` to `f`.
///
/// `f` may contain `∃` only where `nnf` keeps it existential. Each negated
/// atom `q1 ≠ q2` becomes
/// `∃C1 ∃C2 (C1 = q1 \ q2 ∧ C2 = q2 \ q1 ∧ ∃Y (Y ≠ ⊥ ∧ Y ⊆ C1 ∪ C2))`
/// with `C = A \ B` written `(A ∩ B) ∪ C = A ∧ B ∩ C = ⊥` and `Y ≠ ⊥` as in
/// [`nonempty_w`].
pub fn to_positive_existential(f: &Formula) -> Result<Formula> {
    f.check_signature(Signature::W)?;
    let g = nnf(f);
    if let Some(v) = first_forall(&g) {
        return Err(Error::Fragment(format!(
            "universal quantifier over `{v}` cannot be made positive existential"
        )));
    }
    let mut fresh = Fresh::for_formula(f);
    Ok(posex(&g, &mut fresh))
}

fn posex(f: &Formula, fresh: &mut Fresh) -> Formula {
    match f {
        Formula::Not(g) => match &**g {
            Formula::Eq(a, b) => neq_positive(a, b, fresh),
            _ => unreachable!("negation normal form"),
        },
        Formula::And(a, b) => Formula::and(posex(a, fresh), posex(b, fresh)),
        Formula::Or(a, b) => Formula::or(posex(a, fresh), posex(b, fresh)),
        Formula::Exists(x, body) => Formula::exists(x.clone(), posex(body, fresh)),
        _ => f.clone(),
    }
}

fn neq_positive(q1: &Term, q2: &Term, fresh: &mut Fresh) -> Formula {
    let y = fresh.next("Y");
    let mut defs = Vec::new();
    let bound = eliminate_diff(&delta_term(q1, q2), fresh, &mut defs);
    let names: Vec<String> = defs.iter().map(|(c, _, _)| c.clone()).collect();
    let def_atoms = defs.into_iter().flat_map(|(c, a, b)| {
        [
            Formula::eq(Term::cup(Term::cap(a.clone(), b.clone()), v(&c)), a),
            Formula::eq(Term::cap(b, v(&c)), Term::bot()),
        ]
    });
    let witness = Formula::exists(
        y.clone(),
        Formula::and(nonempty_w(v(&y)), Formula::subset(v(&y), bound)),
    );
    Formula::exists_all(names, Formula::and(Formula::and_all(def_atoms), witness))
}

/// Replaces each `diff(a, b)` (innermost first) by a fresh variable `C` and
/// records `(C, a, b)`.
fn eliminate_diff(t: &Term, fresh: &mut Fresh, defs: &mut Vec<(String, Term, Term)>) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(Op::Diff, args) => {
            let a = eliminate_diff(&args[0], fresh, defs);
            let b = eliminate_diff(&args[1], fresh, defs);
            let c = fresh.next("C");
            defs.push((c.clone(), a, b));
            v(&c)
        }
        Term::App(op, args) => Term::App(
            *op,
            args.iter().map(|a| eliminate_diff(a, fresh, defs)).collect(),
        ),
    }
}

// With B = Y ∩ X: ips(X,Y) = Z iff B = ⊥ = Z, or B ≠ ⊥ and some unbounded D
// has r(D) = Z ⊆ X ⊆ D and l(D) = (B \ min B) ∪ cz when min X ∈ B,
// l(D) = B ∪ cz otherwise.
static PHI_IPS: LazyLock<Formula> = LazyLock::new(|| {
    let b = "cap(Y,X)";
    let tail = "r(D) = Z & max(D) = bot & Z sub X & X sub D";
    template(
        &format!(
            "{b} = bot & Z = bot | !({b} = bot) & (\
             min(X) sub {b} & (E Q. cup(cap({b},min({b})),Q) = {b} & cap(min({b}),Q) = bot \
             & (E D. l(D) = cup(Q,cz) & {tail})) \
             | !(min(X) sub {b}) & (E D. l(D) = cup({b},cz) & {tail}))"
        ),
        Signature::L,
    )
});

/// Existential `L`-formula in `X, Y, Z` that holds of finite `A, B, C` exactly
/// when `ips(A, B) = C`.
pub fn phi_ips() -> Formula {
    PHI_IPS.clone()
}

const BDRY: &str = "cup(X_l,X_r)";

fn s_term() -> String {
    format!("cup({BDRY},Z)")
}

static PHI_BDD: LazyLock<Formula> = LazyLock::new(|| {
    let s = s_term();
    template(
        &format!(
            "ips({s},Z) sub X_l & cap(ips({s},Z),X_r) = bot \
             & !(cap(ips({s},X_r),Z) = bot) & cap(ips({s},X_l),Z) = bot"
        ),
        Signature::W,
    )
});

static BOUNDED: LazyLock<Formula> = LazyLock::new(|| {
    template(&format!("max({BDRY}) sub X_r"), Signature::W)
});

/// For a singleton `Z` outside `∂X`: its neighbours in `∂X ∪ Z` are a proper
/// left endpoint below and a proper right endpoint above.
pub fn phi_bdd_member() -> Formula {
    PHI_BDD.clone()
}

/// [`phi_bdd_member`], or `Z` lies above every endpoint (inside the ray).
pub fn phi_nbdd_member() -> Formula {
    Formula::or(
        PHI_BDD.clone(),
        template(&format!("Z = max({})", s_term()), Signature::W),
    )
}

/// `X` bounded, in endpoint coordinates: `max(∂X)` is a right endpoint.
pub fn bounded_w() -> Formula {
    BOUNDED.clone()
}

static PHI_IN: LazyLock<Formula> = LazyLock::new(|| {
    Formula::and(
        template(&format!("!({BDRY} = bot)"), Signature::W),
        Formula::or_all([
            template(&format!("Z sub {BDRY}"), Signature::W),
            Formula::and(bounded_w(), phi_bdd_member()),
            Formula::and(Formula::not(bounded_w()), phi_nbdd_member()),
        ]),
    )
});

/// Quantifier-free `W`-formula in `X_l, X_r, Z`: for a singleton `Z` and an
/// interval union `A` with endpoints `(A_l, A_r)`, the point of `Z` lies in `A`.
pub fn phi_in() -> Formula {
    PHI_IN.clone()
}

/// `Z` is a singleton.
pub fn at() -> Formula {
    template("!(Z = bot) & Z = min(Z)", Signature::W)
}

fn phi_in_at(xl: &Term, xr: &Term, z: &Term) -> Formula {
    let map = BTreeMap::from([
        ("X_l".to_string(), xl.clone()),
        ("X_r".to_string(), xr.clone()),
        ("Z".to_string(), z.clone()),
    ]);
    // The template has no bound variables, so plain substitution is safe.
    PHI_IN.map_terms(&mut |t| t.substitute(&map))
}

/// `X ⊆ Y` in endpoint coordinates `X_l, X_r, Y_l, Y_r`: every singleton in
/// `X` is in `Y`.
pub fn phi_subseteq() -> Formula {
    let z = v("Z");
    Formula::forall(
        "Z",
        Formula::implies(
            at(),
            Formula::implies(
                phi_in_at(&v("X_l"), &v("X_r"), &z),
                phi_in_at(&v("Y_l"), &v("Y_r"), &z),
            ),
        ),
    )
}

// B = X_l, C = X_r, P = C \ B, Q = B \ C.
static DELTA: LazyLock<Formula> = LazyLock::new(|| {
    let u = "cup(X_l,X_r)";
    template(
        &format!(
            "!(X_l = bot) & min({u}) sub X_l & (E P. E Q. \
             cup(cap(X_r,X_l),P) = X_r & cap(X_l,P) = bot \
             & cup(cap(X_l,X_r),Q) = X_l & cap(X_r,Q) = bot \
             & (max({u}) sub X_r & ips({u},P) = Q \
             | max({u}) sub X_l & cap(max({u}),X_r) = bot & cup(ips({u},P),max({u})) = Q))"
        ),
        Signature::W,
    )
});

/// `(X_l, X_r)` is the endpoint pair of a nonempty interval union.
pub fn delta_domain() -> Formula {
    DELTA.clone()
}

/// A positive existential `W`-formula as an existential `L`-formula that
/// agrees with it on finite sets.
pub fn translate_w_to_l(f: &Formula) -> Result<Formula> {
    f.check_signature(Signature::W)?;
    if classify(f) != Class::PositiveExistential {
        return Err(Error::Fragment(
            "the W to L translation needs a positive existential formula".into(),
        ));
    }
    let mut fresh = Fresh::for_formula(f);
    let g = unnest_with(&nnf(f), &mut fresh);
    Ok(w2l(&g, &mut fresh))
}

fn w2l(f: &Formula, fresh: &mut Fresh) -> Formula {
    match f {
        Formula::Eq(Term::App(Op::Ips, args), w) => PHI_IPS.instantiate(
            &[("X", args[0].clone()), ("Y", args[1].clone()), ("Z", w.clone())],
            fresh,
        ),
        Formula::And(a, b) => Formula::and(w2l(a, fresh), w2l(b, fresh)),
        Formula::Or(a, b) => Formula::or(w2l(a, fresh), w2l(b, fresh)),
        Formula::Exists(y, body) => Formula::exists(
            y.clone(),
            Formula::and(
                Formula::eq(Term::left(v(y)), Term::right(v(y))),
                w2l(body, fresh),
            ),
        ),
        _ => f.clone(),
    }
}

/// The `W`-side names standing for an `L`-variable `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordinatePair {
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug)]
pub struct LToW {
    pub formula: Formula,
    /// Coordinates of each free variable of the source.
    pub coords: BTreeMap<String, CoordinatePair>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    General,
    Finite,
    AtomOrBot,
}

impl Kind {
    fn finite(self) -> bool {
        self != Kind::General
    }
}

struct L2W {
    fresh: Fresh,
    coords: BTreeMap<String, (Term, Term)>,
    kinds: BTreeMap<String, Kind>,
}

/// An `L`-formula as a `W`-formula about endpoint pairs: `L(I) ⊨ f(A)` iff
/// `W(I) ⊨ ψ(A_l, A_r)`.
pub fn translate_l_to_w(f: &Formula) -> Result<LToW> {
    f.check_signature(Signature::L)?;
    let mut fresh = Fresh::for_formula(f);
    let g = unnest_with(&nnf(f), &mut fresh);
    let mut tr = L2W {
        fresh,
        coords: BTreeMap::new(),
        kinds: BTreeMap::new(),
    };
    let mut coords = BTreeMap::new();
    for x in f.free_vars() {
        let (l, r) = tr.general_pair(&x);
        coords.insert(
            x,
            CoordinatePair {
                left: l,
                right: r,
            },
        );
    }
    let formula = tr.formula(&g)?;
    Ok(LToW { formula, coords })
}

fn def_kind(op: Op, args: &[Kind]) -> Kind {
    match op {
        Op::Bot | Op::Cz | Op::Min | Op::Max => Kind::AtomOrBot,
        Op::Left | Op::Right => Kind::Finite,
        Op::Cup if args.iter().all(|k| k.finite()) => Kind::Finite,
        Op::Cap if args.iter().any(|k| k.finite()) => Kind::Finite,
        _ => Kind::General,
    }
}

impl L2W {
    fn general_pair(&mut self, x: &str) -> (String, String) {
        let l = self.fresh.named(&format!("{x}_l"));
        let r = self.fresh.named(&format!("{x}_r"));
        self.coords.insert(x.to_string(), (v(&l), v(&r)));
        self.kinds.insert(x.to_string(), Kind::General);
        (l, r)
    }

    fn kind(&self, x: &Term) -> Kind {
        x.as_var()
            .and_then(|n| self.kinds.get(n).copied())
            .unwrap_or(Kind::General)
    }

    fn pair(&self, x: &Term) -> Result<(Term, Term)> {
        let name = x
            .as_var()
            .ok_or_else(|| Error::Eval(format!("expected a variable, found `{x}`")))?;
        self.coords
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnboundVariable(name.to_string()))
    }

    /// The kind forced on `x` by a defining conjunct `g(v̄) = x` of `body`.
    fn defined_kind(&self, x: &str, body: &Formula) -> Kind {
        let mut parts = Vec::new();
        conjuncts(body, &mut parts);
        parts
            .into_iter()
            .filter_map(|g| match g {
                Formula::Eq(Term::App(op, args), Term::Var(w))
                    if w == x && args.iter().all(|a| a.is_var() && !a.mentions(x)) =>
                {
                    let ks: Vec<Kind> = args.iter().map(|a| self.kind(a)).collect();
                    Some(def_kind(*op, &ks))
                }
                _ => None,
            })
            .find(|k| k.finite())
            .unwrap_or(Kind::General)
    }

    fn domain(&mut self, l: &str, r: &str) -> Formula {
        let dom = DELTA.instantiate(&[("X_l", v(l)), ("X_r", v(r))], &mut self.fresh);
        Formula::or(
            dom,
            Formula::and(
                Formula::eq(v(l), Term::bot()),
                Formula::eq(v(r), Term::bot()),
            ),
        )
    }

    fn formula(&mut self, f: &Formula) -> Result<Formula> {
        Ok(match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Eq(a, b) => self.atom(a, b)?,
            Formula::Not(g) => Formula::not(self.formula(g)?),
            Formula::And(a, b) => Formula::and(self.formula(a)?, self.formula(b)?),
            Formula::Or(a, b) => Formula::or(self.formula(a)?, self.formula(b)?),
            Formula::Implies(a, b) => Formula::implies(self.formula(a)?, self.formula(b)?),
            Formula::Exists(x, body) => {
                let kind = self.defined_kind(x, body);
                if kind.finite() {
                    self.coords.insert(x.clone(), (v(x), v(x)));
                    self.kinds.insert(x.clone(), kind);
                    Formula::exists(x.clone(), self.formula(body)?)
                } else {
                    let (l, r) = self.general_pair(x);
                    let dom = self.domain(&l, &r);
                    let body = self.formula(body)?;
                    Formula::exists(l, Formula::exists(r, Formula::and(dom, body)))
                }
            }
            Formula::Forall(x, body) => {
                let (l, r) = self.general_pair(x);
                let dom = self.domain(&l, &r);
                let body = self.formula(body)?;
                Formula::forall(l, Formula::forall(r, Formula::implies(dom, body)))
            }
        })
    }

    fn coord_eq(&self, (l, r): (Term, Term), value_l: Term, value_r: Term) -> Formula {
        if l == r && value_l == value_r {
            Formula::eq(l, value_l)
        } else {
            Formula::and(Formula::eq(l, value_l), Formula::eq(r, value_r))
        }
    }

    fn atom(&mut self, a: &Term, b: &Term) -> Result<Formula> {
        if !is_unnested(a, b) {
            return Err(Error::Eval(format!("atom `{a} = {b}` is not unnested")));
        }
        let w = self.pair(b)?;
        Ok(match a {
            Term::Var(_) => {
                let (xl, xr) = self.pair(a)?;
                self.coord_eq(w, xl, xr)
            }
            Term::App(op, args) => match (op, args.as_slice()) {
                (Op::Bot, []) => self.coord_eq(w, Term::bot(), Term::bot()),
                (Op::Cz, []) => self.coord_eq(w, Term::cz(), Term::cz()),
                (Op::Left, [x]) => {
                    let (xl, _) = self.pair(x)?;
                    self.coord_eq(w, xl.clone(), xl)
                }
                (Op::Right, [x]) => {
                    let (_, xr) = self.pair(x)?;
                    self.coord_eq(w, xr.clone(), xr)
                }
                (Op::Min, [x]) => {
                    let (xl, _) = self.pair(x)?;
                    let m = Term::min(xl);
                    self.coord_eq(w, m.clone(), m)
                }
                (Op::Max, [x]) => {
                    let (xl, xr) = self.pair(x)?;
                    let bounded = bounded_at(&xl, &xr);
                    let m = Term::max(xr);
                    Formula::or(
                        Formula::and(bounded.clone(), self.coord_eq(w.clone(), m.clone(), m)),
                        Formula::and(
                            Formula::not(bounded),
                            self.coord_eq(w, Term::bot(), Term::bot()),
                        ),
                    )
                }
                (Op::Cup | Op::Cap, [x, y]) => self.lattice_atom(*op, x, y, b)?,
                _ => return Err(Error::Signature(format!("`{a}` is not an L term"))),
            },
        })
    }

    fn lattice_atom(&mut self, op: Op, x: &Term, y: &Term, z: &Term) -> Result<Formula> {
        // cap(x,y) = x and cup(x,y) = y both say x ⊆ y.
        let subset = match op {
            Op::Cap if z == x => Some((x, y)),
            Op::Cap if z == y => Some((y, x)),
            Op::Cup if z == y => Some((x, y)),
            Op::Cup if z == x => Some((y, x)),
            _ => None,
        };
        if let Some((small, big)) = subset {
            return self.subset(small, big);
        }
        let (kx, ky) = (self.kind(x), self.kind(y));
        let (xl, _) = self.pair(x)?;
        let (yl, _) = self.pair(y)?;
        let w = self.pair(z)?;
        if kx.finite() && ky.finite() {
            let t = Term::App(op, vec![xl, yl]);
            return Ok(self.coord_eq(w, t.clone(), t));
        }
        let p = self.fresh.next("Z");
        let pt = v(&p);
        let member = |this: &Self, t: &Term| -> Result<Formula> {
            let (l, r) = this.pair(t)?;
            Ok(phi_in_at(&l, &r, &pt))
        };
        let (in_x, in_y, in_z) = (member(self, x)?, member(self, y)?, member(self, z)?);
        let combined = if op == Op::Cup {
            Formula::or(in_x, in_y)
        } else {
            Formula::and(in_x, in_y)
        };
        let at_p = at().map_terms(&mut |t| t.substitute(&BTreeMap::from([("Z".into(), pt.clone())])));
        Ok(Formula::forall(
            p.clone(),
            Formula::implies(at_p, Formula::iff(in_z, combined)),
        ))
    }

    fn subset(&mut self, small: &Term, big: &Term) -> Result<Formula> {
        if small == big {
            return Ok(Formula::True);
        }
        let (sl, sr) = self.pair(small)?;
        let (bl, br) = self.pair(big)?;
        let (ks, kb) = (self.kind(small), self.kind(big));
        Ok(if ks == Kind::AtomOrBot {
            Formula::or(Formula::eq(sl.clone(), Term::bot()), phi_in_at(&bl, &br, &sl))
        } else if ks.finite() && kb.finite() {
            Formula::subset(sl, bl)
        } else if kb.finite() {
            Formula::and(Formula::eq(sl.clone(), sr), Formula::subset(sl, bl))
        } else {
            PHI_SUBSETEQ.instantiate(
                &[("X_l", sl), ("X_r", sr), ("Y_l", bl), ("Y_r", br)],
                &mut self.fresh,
            )
        })
    }
}

static PHI_SUBSETEQ: LazyLock<Formula> = LazyLock::new(phi_subseteq);

fn bounded_at(xl: &Term, xr: &Term) -> Formula {
    let map = BTreeMap::from([
        ("X_l".to_string(), xl.clone()),
        ("X_r".to_string(), xr.clone()),
    ]);
    BOUNDED.map_terms(&mut |t| t.substitute(&map))
}

fn conjuncts<'f>(f: &'f Formula, out: &mut Vec<&'f Formula>) {
    match f {
        Formula::And(a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        _ => out.push(f),
    }
}

fn simplify_term(t: &Term) -> Term {
    let Term::App(op, args) = t else {
        return t.clone();
    };
    let args: Vec<Term> = args.iter().map(simplify_term).collect();
    let is = |t: &Term, c: Op| matches!(t, Term::App(o, a) if *o == c && a.is_empty());
    let bot = Term::bot;
    match (op, args.as_slice()) {
        (Op::Cup, [a, b]) if is(a, Op::Bot) => b.clone(),
        (Op::Cup, [a, b]) if is(b, Op::Bot) || a == b => a.clone(),
        (Op::Cap, [a, b]) if is(a, Op::Bot) || is(b, Op::Bot) => bot(),
        (Op::Cap, [a, b]) if a == b => a.clone(),
        (Op::Min | Op::Max | Op::Left | Op::Right, [a]) if is(a, Op::Bot) || is(a, Op::Cz) => {
            a.clone()
        }
        (Op::Min | Op::Max, [Term::App(Op::Min | Op::Max, _)]) => args[0].clone(),
        (Op::Left | Op::Right, [Term::App(Op::Left | Op::Right, _)]) => args[0].clone(),
        (Op::Ips, [a, b]) if is(a, Op::Bot) || is(b, Op::Bot) => bot(),
        (Op::Diff, [a, b]) if is(b, Op::Bot) => a.clone(),
        (Op::Diff, [a, b]) if is(a, Op::Bot) || a == b => bot(),
        _ => Term::App(*op, args),
    }
}

/// Equivalence-preserving cleanup valid in both structures: constant folding
/// over `⊥` and `cz`, trivial atoms and connectives, vacuous quantifiers, and
/// `∃V (… ∧ V = t ∧ …)` resolved by substituting `t` for `V`.
pub fn simplify(f: &Formula) -> Formula {
    let mut fresh = Fresh::for_formula(f);
    let mut cur = f.clone();
    for _ in 0..16 {
        let next = simp(&cur, &mut fresh);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

fn simp(f: &Formula, fresh: &mut Fresh) -> Formula {
    use Formula::{False, True};
    match f {
        True | False => f.clone(),
        Formula::Eq(a, b) => {
            let (a, b) = (simplify_term(a), simplify_term(b));
            let constant = |t: &Term| matches!(t, Term::App(Op::Bot | Op::Cz, _));
            if a == b {
                True
            } else if constant(&a) && constant(&b) {
                False
            } else {
                Formula::eq(a, b)
            }
        }
        Formula::Not(g) => match simp(g, fresh) {
            True => False,
            False => True,
            Formula::Not(h) => *h,
            h => Formula::not(h),
        },
        Formula::And(a, b) => match (simp(a, fresh), simp(b, fresh)) {
            (False, _) | (_, False) => False,
            (True, x) | (x, True) => x,
            (x, y) if x == y => x,
            (x, y) => Formula::and(x, y),
        },
        Formula::Or(a, b) => match (simp(a, fresh), simp(b, fresh)) {
            (True, _) | (_, True) => True,
            (False, x) | (x, False) => x,
            (x, y) if x == y => x,
            (x, y) => Formula::or(x, y),
        },
        Formula::Implies(a, b) => match (simp(a, fresh), simp(b, fresh)) {
            (False, _) | (_, True) => True,
            (True, y) => y,
            (x, False) => simp(&Formula::not(x), fresh),
            (x, y) => Formula::implies(x, y),
        },
        Formula::Exists(x, body) => {
            let body = simp(body, fresh);
            if !body.mentions_free(x) {
                return body;
            }
            if let Some(t) = find_def(x, &body, &mut Vec::new()) {
                let map = BTreeMap::from([(x.clone(), t)]);
                return simp(&body.substitute(&map, fresh), fresh);
            }
            Formula::exists(x.clone(), body)
        }
        Formula::Forall(x, body) => {
            let body = simp(body, fresh);
            if !body.mentions_free(x) {
                return body;
            }
            Formula::forall(x.clone(), body)
        }
    }
}

/// A term `t` with a conjunct `x = t` reachable through `∧` and `∃`, where `t`
/// mentions neither `x` nor the variables bound on the way.
fn find_def(x: &str, f: &Formula, bound: &mut Vec<String>) -> Option<Term> {
    match f {
        Formula::Eq(a, b) => [(a, b), (b, a)].into_iter().find_map(|(p, q)| {
            let ok = p.as_var() == Some(x)
                && !q.mentions(x)
                && bound.iter().all(|w| !q.mentions(w));
            ok.then(|| q.clone())
        }),
        Formula::And(a, b) => find_def(x, a, bound).or_else(|| find_def(x, b, bound)),
        Formula::Exists(w, body) if w != x => {
            bound.push(w.clone());
            let r = find_def(x, body, bound);
            bound.pop();
            r
        }
        _ => None,
    }
}

/// Intermediate results of [`pipeline`].
#[derive(Clone, Debug)]
pub struct PipelineTrace {
    pub to_w: Formula,
    pub positive: Formula,
    pub back_in_l: Formula,
    pub result: Formula,
}

/// An existential `L`-formula equivalent to `f`, for `f` whose translation
/// into `W` needs no universal quantifier.
pub fn pipeline(f: &Formula) -> Result<Formula> {
    pipeline_trace(f).map(|t| t.result)
}

pub fn pipeline_trace(f: &Formula) -> Result<PipelineTrace> {
    let LToW { formula, coords } = translate_l_to_w(f)?;
    let to_w = simplify(&formula);
    if let Some(v) = first_forall(&nnf(&to_w)) {
        return Err(Error::Fragment(format!(
            "the W translation keeps a universal quantifier over `{v}`; \
             positive model-completeness of W(I) would be needed to remove it"
        )));
    }
    let positive = simplify(&to_positive_existential(&to_w)?);
    let back_in_l = translate_w_to_l(&positive)?;
    let mut map = BTreeMap::new();
    for (x, pair) in &coords {
        map.insert(pair.left.clone(), Term::left(v(x)));
        map.insert(pair.right.clone(), Term::right(v(x)));
    }
    let mut fresh = Fresh::for_formula(&back_in_l);
    for x in coords.keys() {
        fresh.reserve(x);
    }
    let result = simplify(&back_in_l.substitute(&map, &mut fresh));
    Ok(PipelineTrace {
        to_w,
        positive,
        back_in_l,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fci::FciSet;
    use crate::finset::FinSet;
    use crate::semantics::{eval_default, Assignment, LStruct, WStruct};

    fn wf(t: &str) -> Formula {
        parse(t, Signature::W).unwrap()
    }

    fn lf(t: &str) -> Formula {
        parse(t, Signature::L).unwrap()
    }

    fn wa(pairs: &[(&str, &str)]) -> Assignment<FinSet> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.parse().unwrap()))
            .collect()
    }

    fn la(pairs: &[(&str, &str)]) -> Assignment<FciSet> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.parse().unwrap()))
            .collect()
    }

    #[test]
    fn templates_are_well_formed() {
        assert_eq!(classify(&phi_ips()), Class::Existential);
        assert_eq!(
            phi_ips().free_vars().into_iter().collect::<Vec<_>>(),
            ["X", "Y", "Z"]
        );
        assert_eq!(classify(&phi_in()), Class::QuantifierFree);
        assert_eq!(classify(&phi_subseteq()), Class::Other);
        assert_eq!(classify(&delta_domain()), Class::Existential);
        assert_eq!(
            delta_domain().free_vars().into_iter().collect::<Vec<_>>(),
            ["X_l", "X_r"]
        );
    }

    #[test]
    fn delta_term_semantics() {
        let t = delta_term(&v("X"), &v("Y"));
        let val = |x: &str, y: &str| {
            crate::semantics::eval_term::<WStruct>(&t, &wa(&[("X", x), ("Y", y)])).unwrap()
        };
        assert_eq!(val("{1, 2}", "{2, 3}").to_string(), "{1, 3}");
        assert!(val("{1, 2}", "{1, 2}").is_empty());
        assert_eq!(
            crate::semantics::eval_term::<WStruct>(
                &delta_term(&v("X"), &Term::bot()),
                &wa(&[("X", "{4}")])
            )
            .unwrap()
            .to_string(),
            "{4}"
        );
    }

    #[test]
    fn posex_examples() {
        let f = wf("!(X = bot)");
        let g = to_positive_existential(&f).unwrap();
        assert_eq!(classify(&g), Class::PositiveExistential);
        assert!(eval_default::<WStruct>(&g, &wa(&[("X", "{1}")])).unwrap());
        assert!(!eval_default::<WStruct>(&g, &wa(&[("X", "{}")])).unwrap());
        assert_eq!(to_positive_existential(&wf("X = cz")).unwrap(), wf("X = cz"));
        assert!(matches!(
            to_positive_existential(&wf("A Y. Y = X")),
            Err(Error::Fragment(_))
        ));
        assert!(to_positive_existential(&wf("!(E Y. Y = X)")).is_err());
    }

    #[test]
    fn phi_ips_examples() {
        let f = phi_ips();
        let at = |a: &str, b: &str, c: &str| {
            let asg = la(&[("X", a), ("Y", b), ("Z", c)]);
            eval_default::<LStruct>(&f, &asg).unwrap()
        };
        assert!(at("{1}+{2}+{5}", "{2}+{5}", "{1}+{2}"));
        assert!(at("empty", "{1}", "empty"));
        assert!(!at("{1}+{2}+{5}", "{2}+{5}", "{1}"));
        assert!(at("{0}+{1}", "{0}+{1}", "{0}"));
    }

    #[test]
    fn phi_in_examples() {
        let f = phi_in();
        let at = |z: &str| {
            eval_default::<WStruct>(&f, &wa(&[("X_l", "{1, 3}"), ("X_r", "{2}"), ("Z", z)]))
                .unwrap()
        };
        assert!(!at("{5/2}"));
        assert!(at("{7/2}"));
        assert!(at("{3/2}"));
        assert!(at("{1}"));
        assert!(!at("{1/2}"));
    }

    #[test]
    fn delta_examples() {
        let d = delta_domain();
        let at = |b: &str, c: &str| {
            eval_default::<WStruct>(&d, &wa(&[("X_l", b), ("X_r", c)])).unwrap()
        };
        assert!(at("{0, 3}", "{1}"));
        assert!(!at("{}", "{1}"));
        assert!(at("{2, 5}", "{3, 6}"));
        assert!(at("{1}", "{1}"));
        assert!(!at("{1}", "{0}"));
        assert!(!at("{0, 1}", "{2}"));
    }

    #[test]
    fn w_to_l_examples() {
        let f = wf("cz sub ips(cup(X,cz),X)");
        let g = translate_w_to_l(&f).unwrap();
        assert!(g.check_signature(Signature::L).is_ok());
        assert!(classify(&g).is_existential());
        for (x, want) in [("{2}", true), ("{}", false), ("{0}", false), ("{0, 1}", true)] {
            let fx = FciSet::embed_finset(&x.parse().unwrap());
            let asg: Assignment<FciSet> = [("X".to_string(), fx)].into();
            assert_eq!(eval_default::<LStruct>(&g, &asg).unwrap(), want, "{x}");
        }
        assert_eq!(translate_w_to_l(&wf("X = bot")).unwrap(), wf("bot = X"));
        assert!(translate_w_to_l(&wf("A Y. Y = X")).is_err());
        assert!(translate_w_to_l(&wf("!(X = bot)")).is_err());
    }

    fn coord_assignment(t: &LToW, a: &Assignment<FciSet>) -> Assignment<FinSet> {
        let mut out = Assignment::new();
        for (x, p) in &t.coords {
            out.insert(p.left.clone(), a[x].left_pts());
            out.insert(p.right.clone(), a[x].right_pts());
        }
        out
    }

    #[test]
    fn l_to_w_examples() {
        let t = translate_l_to_w(&lf("l(X) = r(X)")).unwrap();
        for (x, want) in [("[1,2]", false), ("{3}+{5}", true), ("empty", true), ("[0,*)", false)] {
            let a = la(&[("X", x)]);
            let got = eval_default::<WStruct>(&t.formula, &coord_assignment(&t, &a)).unwrap();
            assert_eq!(got, want, "{x}");
        }
        let t = translate_l_to_w(&lf("X sub Y")).unwrap();
        let a = la(&[("X", "[1,2]"), ("Y", "[0,3]")]);
        assert!(eval_default::<WStruct>(&t.formula, &coord_assignment(&t, &a)).unwrap());
        let a = la(&[("X", "[1,4]"), ("Y", "[0,3]")]);
        assert!(!eval_default::<WStruct>(&t.formula, &coord_assignment(&t, &a)).unwrap());
    }

    #[test]
    fn simplifier_examples() {
        assert_eq!(simplify(&wf("cup(X,bot) = X")), Formula::True);
        assert_eq!(simplify(&wf("cap(X,bot) = cz")), Formula::False);
        assert_eq!(simplify(&wf("E C. C = X & cap(C,Y) = C")), wf("cap(X,Y) = X"));
        assert_eq!(
            simplify(&wf("E C. E D. D = cz & C = cup(X,D) & D sub C")),
            wf("cap(cz,cup(X,cz)) = cz")
        );
        assert_eq!(simplify(&wf("E C. C = cup(C,X)")), wf("E C. C = cup(C,X)"));
    }

    #[test]
    fn pipeline_examples() {
        let f = lf("X = bot");
        let g = pipeline(&f).unwrap();
        assert!(classify(&g).is_existential());
        assert!(eval_default::<LStruct>(&g, &la(&[("X", "empty")])).unwrap());
        assert!(!eval_default::<LStruct>(&g, &la(&[("X", "[0,1]")])).unwrap());
        let err = pipeline(&lf("A Y. (Y sub X -> Y = X)")).unwrap_err();
        assert!(matches!(err, Error::Fragment(_)), "{err}");
    }
}
