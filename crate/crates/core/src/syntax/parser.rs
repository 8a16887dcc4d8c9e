use std::collections::BTreeSet;

use super::{base_name, Formula, Fresh, Op, Signature, Term};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    And,
    Or,
    Not,
    Arrow,
}

struct Lexed {
    tok: Tok,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '=' => Some(Tok::Eq),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '!' => Some(Tok::Not),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Lexed { tok, column });
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Lexed {
                tok: Tok::Arrow,
                column,
            });
            i += 2;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Lexed {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                column,
            });
        } else {
            return Err(Error::Syntax {
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

fn is_variable(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_uppercase())
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    sig: Signature,
    end_column: usize,
    _text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|l| &l.tok)
    }

    fn column(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or(self.end_column, |l| l.column)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            column: self.column(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut acc = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn is_quantifier(&self) -> bool {
        matches!(
            (self.peek(), self.peek_at(1), self.peek_at(2)),
            (Some(Tok::Ident(q)), Some(Tok::Ident(v)), Some(Tok::Dot))
                if (q == "E" || q == "A") && is_variable(v)
        )
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.peek() == Some(&Tok::Not) {
            self.pos += 1;
            return Ok(Formula::not(self.unary()?));
        }
        if self.is_quantifier() {
            let Some(Tok::Ident(q)) = self.peek().cloned() else {
                unreachable!()
            };
            let Some(Tok::Ident(v)) = self.peek_at(1).cloned() else {
                unreachable!()
            };
            self.pos += 3;
            let body = self.formula()?;
            return Ok(if q == "E" {
                Formula::exists(v, body)
            } else {
                Formula::forall(v, body)
            });
        }
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(k)) if k == "true" => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Tok::Ident(k)) if k == "false" => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(_) => self.atom(),
            None => self.error("unexpected end of input, expected a formula"),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        let lhs = self.term()?;
        match self.peek() {
            Some(Tok::Eq) => {
                self.pos += 1;
                let rhs = self.term()?;
                Ok(Formula::eq(lhs, rhs))
            }
            Some(Tok::Ident(k)) if k == "sub" => {
                self.pos += 1;
                let rhs = self.term()?;
                Ok(Formula::subset(lhs, rhs))
            }
            _ => self.error("expected `=` or `sub`"),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let column = self.column();
        let Some(Tok::Ident(name)) = self.peek().cloned() else {
            return self.error("expected a term");
        };
        self.pos += 1;
        if is_variable(&name) {
            return Ok(Term::Var(name));
        }
        let op = match Op::from_name(&name) {
            Some(op) if op != Op::Diff => op,
            _ => {
                return Err(Error::Syntax {
                    column,
                    message: format!("unknown function symbol `{name}`"),
                })
            }
        };
        if !op.in_signature(self.sig) {
            return Err(Error::Signature(format!(
                "`{name}` at column {column} is not in signature {}",
                self.sig
            )));
        }
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            loop {
                args.push(self.term()?);
                match self.peek() {
                    Some(Tok::Comma) => self.pos += 1,
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.error("expected `,` or `)`"),
                }
            }
        }
        if args.len() != op.arity() {
            return Err(Error::Signature(format!(
                "`{name}` at column {column} expects {} argument(s), got {}",
                op.arity(),
                args.len()
            )));
        }
        Ok(Term::App(op, args))
    }
}

/// Parses a formula over `sig`.
///
/// A binder that reuses the name of a free variable or of an earlier binder
/// is renamed, so bound names are unique and distinct from free names.
pub fn parse(text: &str, sig: Signature) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        sig,
        end_column: text.chars().count() + 1,
        _text: text,
    };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return p.error("unexpected trailing input");
    }
    Ok(uniquify_bound(f))
}

fn uniquify_bound(f: Formula) -> Formula {
    let free = f.free_vars();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut clash = false;
    f.visit(&mut |g| {
        if let Formula::Exists(v, _) | Formula::Forall(v, _) = g {
            clash |= free.contains(v) || !seen.insert(v.clone());
        }
    });
    if !clash {
        return f;
    }
    let mut fresh = Fresh::for_formula(&f);
    let mut taken = free;
    rename_clashes(&f, &mut taken, &mut fresh)
}

fn rename_clashes(f: &Formula, taken: &mut BTreeSet<String>, fresh: &mut Fresh) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Eq(..) => f.clone(),
        Formula::Not(g) => Formula::not(rename_clashes(g, taken, fresh)),
        Formula::And(a, b) => {
            let a = rename_clashes(a, taken, fresh);
            Formula::and(a, rename_clashes(b, taken, fresh))
        }
        Formula::Or(a, b) => {
            let a = rename_clashes(a, taken, fresh);
            Formula::or(a, rename_clashes(b, taken, fresh))
        }
        Formula::Implies(a, b) => {
            let a = rename_clashes(a, taken, fresh);
            Formula::implies(a, rename_clashes(b, taken, fresh))
        }
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let (name, body) = if taken.insert(v.clone()) {
                (v.clone(), (**body).clone())
            } else {
                let name = fresh.next(base_name(v));
                taken.insert(name.clone());
                let map = [(v.clone(), Term::var(name.clone()))].into_iter().collect();
                (name, body.substitute(&map, fresh))
            };
            let body = rename_clashes(&body, taken, fresh);
            if matches!(f, Formula::Exists(..)) {
                Formula::exists(name, body)
            } else {
                Formula::forall(name, body)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(t: &str) -> Formula {
        parse(t, Signature::W).unwrap()
    }

    #[test]
    fn subset_sugar() {
        let f = w("X sub Y");
        assert_eq!(
            f,
            Formula::eq(Term::cap(Term::var("X"), Term::var("Y")), Term::var("X"))
        );
        assert_eq!(w("cap(X,Y) = X"), f);
    }

    #[test]
    fn quantifier_scope_is_maximal() {
        let f = w("E Y. ips(cup(Y,cz),Y) = cz");
        let Formula::Exists(v, body) = &f else {
            panic!("{f:?}")
        };
        assert_eq!(v, "Y");
        assert!(body.is_atomic());
        let g = w("X = cz & E Y. Y = X | Y = cz");
        let Formula::And(_, rhs) = &g else {
            panic!("{g:?}")
        };
        assert!(matches!(**rhs, Formula::Exists(_, ref b) if matches!(**b, Formula::Or(..))));
    }

    #[test]
    fn precedence() {
        let f = w("X = Y & Y = Z | X = Z -> Z = X");
        let Formula::Implies(lhs, _) = &f else {
            panic!()
        };
        let Formula::Or(conj, _) = &**lhs else {
            panic!()
        };
        assert!(matches!(**conj, Formula::And(..)));
        let g = w("X = Y -> Y = Z -> Z = X");
        let Formula::Implies(_, rhs) = &g else {
            panic!()
        };
        assert!(matches!(**rhs, Formula::Implies(..)));
    }

    #[test]
    fn quantifier_letters_as_variables() {
        let f = w("A = E");
        assert_eq!(f, Formula::eq(Term::var("A"), Term::var("E")));
        let g = w("A X. E E. X = E");
        assert!(matches!(g, Formula::Forall(ref v, _) if v == "X"));
    }

    #[test]
    fn signature_errors() {
        let err = parse("l(X) = ips(X,X)", Signature::L).unwrap_err();
        assert!(matches!(err, Error::Signature(_)), "{err}");
        assert!(matches!(parse("l(X) = X", Signature::W), Err(Error::Signature(_))));
        assert!(matches!(parse("min(X,Y) = X", Signature::W), Err(Error::Signature(_))));
        assert!(matches!(parse("bot(X) = X", Signature::W), Err(Error::Signature(_))));
        assert!(matches!(parse("diff(X,Y) = X", Signature::W), Err(Error::Syntax { .. })));
    }

    #[test]
    fn syntax_errors_carry_columns() {
        match parse("X = ", Signature::W) {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        match parse("X = Y )", Signature::W) {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 7),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("X ? Y", Signature::W), Err(Error::Syntax { column: 3, .. })));
        assert!(parse("foo(X) = X", Signature::W).is_err());
        assert!(parse("x = X", Signature::W).is_err());
        assert!(parse("(X = Y", Signature::W).is_err());
    }

    #[test]
    fn clashing_binders_are_renamed() {
        let f = w("X = cz & E X. X = bot");
        assert_eq!(f.to_string(), "X = cz & E X1. X1 = bot");
        let g = w("(E Y. Y = X) & E Y. Y = cz");
        assert_eq!(g.to_string(), "(E Y. Y = X) & E Y1. Y1 = cz");
        let h = w("E Y. E Y. Y = cz");
        assert_eq!(h.to_string(), "E Y. E Y1. Y1 = cz");
    }
}
