//! Canonical text form of power expressions.
//!
//! ```text
//! expr   := term ('*' term)*        left-associative
//! term   := '1/' term | factor ('^' int)?
//! factor := ident | '(' expr ')'
//! int    := '-'? digit+
//! ident  := [a-z][a-z0-9]*
//! ```
//!
//! `1/` takes a whole term, so `1/a^-2` is the reciprocal of `a^-2`.
//! Whitespace is not allowed.

use num_bigint::BigInt;

use super::expr::{mul, pow, recip, Expr};
use crate::error::ParseError;

/// Deepest nesting the parser accepts, counting parentheses, reciprocals
/// and the operands of a product chain.
pub const MAX_NESTING: usize = 512;

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    if p.pos < p.src.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError::new(self.pos, message)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn starts_with(&self, s: &[u8]) -> bool {
        self.src[self.pos..].starts_with(s)
    }

    fn deeper(&mut self, levels: usize) -> Result<(), ParseError> {
        if self.depth + levels > MAX_NESTING {
            return Err(self.error("expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.term()?;
        let mut operands = 1;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            operands += 1;
            self.deeper(operands)?;
            e = mul(e, self.term()?);
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        if self.starts_with(b"1/") {
            self.pos += 2;
            self.deeper(1)?;
            self.depth += 1;
            let r = self.term();
            self.depth -= 1;
            return Ok(recip(r?));
        }
        let base = self.factor()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.int()?;
            return Ok(pow(base, n));
        }
        Ok(base)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.deeper(1)?;
                self.depth += 1;
                let e = self.expr();
                self.depth -= 1;
                let e = e?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_lowercase() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_lowercase() || c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(super::expr::var(name))
            }
            None => Err(self.error("unexpected end of input")),
            _ => Err(self.error("expected a variable, `(` or `1/`")),
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(self.error("expected an integer exponent"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse()
            .map_err(|_| ParseError::new(start, "invalid integer"))
    }
}

/// Minimal-parenthesis rendering; `parse(&print(e)) == e`.
pub fn print(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(e, &mut out);
    out
}

fn write_expr(e: &Expr, out: &mut String) {
    match e {
        Expr::Mul(l, r) => {
            write_expr(l, out);
            out.push('*');
            write_term(r, out);
        }
        _ => write_term(e, out),
    }
}

fn write_term(e: &Expr, out: &mut String) {
    match e {
        Expr::Recip(a) => {
            out.push_str("1/");
            write_term(a, out);
        }
        Expr::Power(b, n) => {
            write_factor(b, out);
            out.push('^');
            out.push_str(&n.to_string());
        }
        _ => write_factor(e, out),
    }
}

fn write_factor(e: &Expr, out: &mut String) {
    match e {
        Expr::Var(v) => out.push_str(v),
        _ => {
            out.push('(');
            write_expr(e, out);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powers::expr::var;

    #[test]
    fn running_example() {
        let a = var("a");
        assert_eq!(
            parse("(a^3*a^4)^2").unwrap(),
            pow(mul(pow(a.clone(), 3), pow(a, 4)), 2)
        );
    }

    #[test]
    fn reciprocal_takes_a_term() {
        assert_eq!(parse("1/a^-2").unwrap(), recip(pow(var("a"), -2)));
        assert_eq!(parse("(1/a)^2").unwrap(), pow(recip(var("a")), 2));
        assert_eq!(
            parse("1/a*b").unwrap(),
            mul(recip(var("a")), var("b"))
        );
        assert_eq!(parse("1/1/a").unwrap(), recip(recip(var("a"))));
    }

    #[test]
    fn products_associate_left() {
        let (a, b, c) = (var("a"), var("b"), var("c"));
        assert_eq!(parse("a*b*c").unwrap(), mul(mul(a.clone(), b.clone()), c.clone()));
        assert_eq!(print(&mul(a.clone(), mul(b.clone(), c.clone()))), "a*(b*c)");
        assert_eq!(print(&mul(mul(a, b), c)), "a*b*c");
    }

    #[test]
    fn printing_is_minimal() {
        assert_eq!(print(&var("a")), "a");
        assert_eq!(print(&pow(pow(var("a"), 7), 2)), "(a^7)^2");
        assert_eq!(print(&recip(mul(var("a"), var("b")))), "1/(a*b)");
        assert_eq!(print(&mul(var("a"), recip(pow(var("b"), 2)))), "a*1/b^2");
        assert_eq!(print(&pow(var("x1"), -12)), "x1^-12");
    }

    #[test]
    fn deep_nesting_is_an_error() {
        let deep = format!("{}a{}", "(".repeat(100_000), ")".repeat(100_000));
        assert!(parse(&deep).unwrap_err().message.contains("deeply"));
        assert!(parse(&"1/".repeat(100_000)).is_err());
        assert!(parse(&vec!["a"; 100_000].join("*")).is_err());
        assert!(parse(&vec!["a^2"; 100].join("*")).is_ok());
    }

    #[test]
    fn syntax_errors_have_positions() {
        assert_eq!(parse("").unwrap_err().offset, 0);
        assert_eq!(parse("a^").unwrap_err().offset, 2);
        assert_eq!(parse("(a*b").unwrap_err().offset, 4);
        assert_eq!(parse("a b").unwrap_err().offset, 1);
        assert_eq!(parse("A").unwrap_err().offset, 0);
        assert_eq!(parse("a^-").unwrap_err().offset, 3);
        assert!(parse("2/a").is_err());
    }

    #[test]
    fn large_exponents() {
        let e = parse("a^123456789012345678901234567890").unwrap();
        assert_eq!(print(&e), "a^123456789012345678901234567890");
    }
}
