//! Concrete syntax for strategies.
//!
//! ```text
//! strategy := seq ('|' strategy)?
//! seq      := prefix (';' seq)?
//! prefix   := '~' prefix | 'mu' ident '.' strategy | ident ':' strategy | primary
//! primary  := 'succeed' | 'fail' | '(' strategy ')' | name
//! name     := ident | ident '(' [A-Za-z0-9_$]+ ')'
//! ```
//!
//! `;` and `|` associate to the right and `;` binds tighter. The bodies of
//! `mu` and of labels extend as far right as possible. An identifier bound
//! by an enclosing `mu` is a variable; any other name is a rule.

use super::{check, choice, fail, label, rec, rule_id, seq, succeed, var};
use super::{LabelId, Node, RuleId, Strategy, VarId};
use crate::error::ParseError;

const KEYWORDS: [&str; 3] = ["mu", "succeed", "fail"];

/// Deepest nesting the parser accepts; every operand of `;` and `|` counts
/// as one level, as does every prefix operator and parenthesis.
pub const MAX_NESTING: usize = 512;

pub fn parse(text: &str) -> Result<Strategy, ParseError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        bound: Vec::new(),
        depth: 0,
    };
    let s = p.strategy()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(s)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    bound: Vec<VarId>,
    depth: usize,
}

impl Parser<'_> {
    /// Runs `f` one nesting level deeper.
    fn nested<R>(&mut self, f: impl FnOnce(&mut Self) -> Result<R, ParseError>) -> Result<R, ParseError> {
        if self.depth >= MAX_NESTING {
            return Err(self.error("strategy nested too deeply"));
        }
        self.depth += 1;
        let r = f(self);
        self.depth -= 1;
        r
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError::new(self.pos, message)
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: char) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{token}`")))
        }
    }

    fn peek_ident(&mut self) -> Option<&str> {
        self.skip_ws();
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars
            .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        Some(&rest[..end])
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek_ident() {
            Some(id) => {
                let id = id.to_string();
                self.pos += id.len();
                Ok(id)
            }
            None => Err(self.error("expected identifier")),
        }
    }

    fn strategy(&mut self) -> Result<Strategy, ParseError> {
        self.nested(|p| {
            let left = p.sequence()?;
            if p.eat('|') {
                Ok(choice(left, p.strategy()?))
            } else {
                Ok(left)
            }
        })
    }

    fn sequence(&mut self) -> Result<Strategy, ParseError> {
        self.nested(|p| {
            let left = p.prefix()?;
            if p.eat(';') {
                Ok(seq(left, p.sequence()?))
            } else {
                Ok(left)
            }
        })
    }

    fn prefix(&mut self) -> Result<Strategy, ParseError> {
        if self.eat('~') {
            return self.nested(|p| Ok(check(p.prefix()?)));
        }
        let Some(word) = self.peek_ident().map(str::to_string) else {
            return self.primary();
        };
        if word == "mu" {
            self.pos += 2;
            let at = self.pos;
            let name = self.ident()?;
            if KEYWORDS.contains(&name.as_str()) {
                return Err(ParseError::new(at, format!("`{name}` is reserved")));
            }
            let v = VarId::new(&name).map_err(|e| ParseError::new(at, e.to_string()))?;
            self.expect('.')?;
            self.bound.push(v.clone());
            let body = self.strategy();
            self.bound.pop();
            return Ok(rec(&v, body?));
        }
        // `ident :` starts a label.
        let save = self.pos;
        self.pos += word.len();
        if !KEYWORDS.contains(&word.as_str()) && self.eat(':') {
            let l = LabelId::named(&word);
            return Ok(label(&l, self.strategy()?));
        }
        self.pos = save;
        self.primary()
    }

    fn primary(&mut self) -> Result<Strategy, ParseError> {
        if self.eat('(') {
            let s = self.strategy()?;
            self.expect(')')?;
            return Ok(s);
        }
        let at = {
            self.skip_ws();
            self.pos
        };
        let word = self
            .ident()
            .map_err(|_| ParseError::new(at, "expected a strategy"))?;
        match word.as_str() {
            "succeed" => return Ok(succeed()),
            "fail" => return Ok(fail()),
            "mu" => return Err(ParseError::new(at, "`mu` is reserved")),
            _ => {}
        }
        // An argument must follow the name immediately.
        if self.rest().starts_with('(') {
            let close = self.rest().find(')').ok_or_else(|| self.error("unclosed rule argument"))?;
            let name = format!("{word}{}", &self.rest()[..=close]);
            let id = RuleId::new(&name).map_err(|e| ParseError::new(at, e.to_string()))?;
            self.pos += close + 1;
            return Ok(rule_id(id));
        }
        if let Some(v) = self.bound.iter().rev().find(|v| v.as_str() == word) {
            return Ok(var(&v.clone()));
        }
        let id = RuleId::new(&word).map_err(|e| ParseError::new(at, e.to_string()))?;
        Ok(rule_id(id))
    }
}

/// Renders a strategy in the concrete syntax, with the minimal parentheses
/// needed for [`parse`] to read it back.
pub fn print(s: &Strategy) -> String {
    let mut out = String::new();
    write(s, Prec::Choice, &mut out);
    out
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Choice,
    Seq,
    Prefix,
}

fn write(s: &Strategy, ctx: Prec, out: &mut String) {
    match s.node() {
        Node::Rule(r) => out.push_str(r.as_str()),
        Node::Var(v) => out.push_str(v.as_str()),
        Node::Succeed => out.push_str("succeed"),
        Node::Fail => out.push_str("fail"),
        Node::Check(a) => {
            out.push('~');
            write(a, Prec::Prefix, out);
        }
        Node::Choice(a, b) => parens(ctx > Prec::Choice, out, |out| {
            write(a, Prec::Seq, out);
            out.push_str(" | ");
            write(b, Prec::Choice, out);
        }),
        Node::Seq(a, b) => parens(ctx > Prec::Seq, out, |out| {
            write(a, Prec::Prefix, out);
            out.push_str("; ");
            write(b, Prec::Seq, out);
        }),
        // Binders extend to the right, so they are only bare at the top.
        Node::Rec(v, body) => parens(ctx > Prec::Choice, out, |out| {
            out.push_str("mu ");
            out.push_str(v.as_str());
            out.push_str(" . ");
            write(body, Prec::Choice, out);
        }),
        Node::Label(l, body) => parens(ctx > Prec::Choice, out, |out| {
            out.push_str(l.as_str());
            out.push_str(": ");
            write(body, Prec::Choice, out);
        }),
    }
}

fn parens(needed: bool, out: &mut String, f: impl FnOnce(&mut String)) {
    if needed {
        out.push('(');
    }
    f(out);
    if needed {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::*;

    #[test]
    fn left_recursion_example() {
        let x = VarId::named("x");
        assert_eq!(
            parse("mu x . x ; AddExp").unwrap(),
            rec(&x, seq(var(&x), rule("AddExp")))
        );
    }

    #[test]
    fn labels_and_choice() {
        let s = parse("(l1: AddExp ; MulExp) | (l2: AddExp ; DistExp)").unwrap();
        let expected = choice(
            label(&LabelId::named("l1"), seq(rule("AddExp"), rule("MulExp"))),
            label(&LabelId::named("l2"), seq(rule("AddExp"), rule("DistExp"))),
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn precedence_and_associativity() {
        let (a, b, c) = (rule("A"), rule("B"), rule("C"));
        assert_eq!(
            parse("A ; B | C").unwrap(),
            choice(seq(a.clone(), b.clone()), c.clone())
        );
        assert_eq!(
            parse("A ; B ; C").unwrap(),
            seq(a.clone(), seq(b.clone(), c.clone()))
        );
        assert_eq!(parse("~A ; B").unwrap(), seq(check(a.clone()), b.clone()));
        assert_eq!(parse("~(A ; B)").unwrap(), check(seq(a, b)));
    }

    #[test]
    fn rule_arguments() {
        assert_eq!(parse("Down(1)").unwrap(), rule("Down(1)"));
        assert_eq!(parse("Enter(l) ; Leave(l)").unwrap().to_string(), "Enter(l); Leave(l)");
    }

    #[test]
    fn variables_are_scoped() {
        let x = VarId::named("x");
        let s = parse("(mu x . A ; x) ; x").unwrap();
        assert_eq!(
            s,
            seq(rec(&x, seq(rule("A"), var(&x))), rule("x"))
        );
    }

    #[test]
    fn deep_nesting_is_an_error() {
        let deep = format!("{}A{}", "(".repeat(100_000), ")".repeat(100_000));
        assert!(parse(&deep).unwrap_err().message.contains("deeply"));
        let long = vec!["A"; 100_000].join(";");
        assert!(parse(&long).is_err());
        assert!(parse(&"~".repeat(100_000)).is_err());
        assert!(parse(&vec!["A"; 100].join(" ; ")).is_ok());
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse("A ;").unwrap_err().offset, 3);
        assert_eq!(parse("A B").unwrap_err().offset, 2);
        assert!(parse("(A").is_err());
        assert!(parse("mu succeed . A").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn printing_round_trips() {
        let l = LabelId::named("l");
        let s = label(&l, repeat(choice(rule("A"), seq(check(rule("B")), succeed()))));
        let text = print(&s);
        assert_eq!(text, "l: mu x . (A | ~B; succeed); x | ~((A | ~B; succeed); x); succeed");
        assert_eq!(parse(&text).unwrap(), s);
        let nested = seq(choice(rule("A"), rule("B")), label(&l, rule("C")));
        assert_eq!(print(&nested), "(A | B); (l: C)");
        assert_eq!(parse(&print(&nested)).unwrap(), nested);
    }
}
