use std::fmt::{self, Write};

use super::{Formula, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(op, args) if args.is_empty() => f.write_str(op.name()),
            Term::App(op, args) => {
                write!(f, "{}(", op.name())?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_char(',')?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_char(')')
            }
        }
    }
}

// Binding strength: `->` 1, `|` 2, `&` 3, unary 4.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

fn ends_open(f: &Formula) -> bool {
    match f {
        Formula::Exists(..) | Formula::Forall(..) => true,
        Formula::Not(g) => ends_open(g),
        _ => false,
    }
}

/// `ctx` is the least binding strength the position accepts unparenthesized;
/// `tail` says nothing follows in the enclosing text, so a quantifier body may
/// run to the end.
fn write_formula(out: &mut String, f: &Formula, ctx: u8, tail: bool) {
    let paren = prec(f) < ctx || (!tail && ends_open(f));
    if paren {
        out.push('(');
    }
    let tail = tail || paren;
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Eq(a, b) => {
            let _ = write!(out, "{a} = {b}");
        }
        Formula::Not(g) => {
            out.push('!');
            if g.is_atomic() {
                let _ = write!(out, "({g})");
            } else {
                write_formula(out, g, 4, tail);
            }
        }
        Formula::And(a, b) => {
            write_formula(out, a, 3, false);
            out.push_str(" & ");
            write_formula(out, b, 4, tail);
        }
        Formula::Or(a, b) => {
            write_formula(out, a, 2, false);
            out.push_str(" | ");
            write_formula(out, b, 3, tail);
        }
        Formula::Implies(a, b) => {
            write_formula(out, a, 2, false);
            out.push_str(" -> ");
            write_formula(out, b, 1, tail);
        }
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let q = if matches!(f, Formula::Exists(..)) { 'E' } else { 'A' };
            let _ = write!(out, "{q} {v}. ");
            write_formula(out, body, 1, true);
        }
    }
    if paren {
        out.push(')');
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_formula(&mut out, self, 1, true);
        f.write_str(&out)
    }
}
