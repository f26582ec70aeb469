use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::nav::Navigable;

/// Power expressions: `e ::= v | e^n | e*e | 1/e`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Var(Arc<str>),
    Power(Arc<Expr>, BigInt),
    Mul(Arc<Expr>, Arc<Expr>),
    Recip(Arc<Expr>),
}

/// Whether `name` is a valid variable: `[a-z][a-z0-9]*`.
pub fn is_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
}

/// A variable. Panics when `name` is not a valid variable name.
pub fn var(name: &str) -> Expr {
    assert!(is_var_name(name), "invalid variable name {name:?}");
    Expr::Var(Arc::from(name))
}

pub fn pow(base: Expr, exponent: impl Into<BigInt>) -> Expr {
    Expr::Power(Arc::new(base), exponent.into())
}

pub fn mul(left: Expr, right: Expr) -> Expr {
    Expr::Mul(Arc::new(left), Arc::new(right))
}

pub fn recip(arg: Expr) -> Expr {
    Expr::Recip(Arc::new(arg))
}

impl Expr {
    /// Constructor levels: a variable has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Expr::Var(_) => 1,
            Expr::Power(b, _) | Expr::Recip(b) => 1 + b.depth(),
            Expr::Mul(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Expr::Var(_) => 1,
            Expr::Power(b, _) | Expr::Recip(b) => 1 + b.size(),
            Expr::Mul(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Distinct variable names, sorted.
    pub fn vars(&self) -> Vec<&str> {
        fn go<'a>(e: &'a Expr, out: &mut Vec<&'a str>) {
            match e {
                Expr::Var(v) => out.push(v),
                Expr::Power(b, _) | Expr::Recip(b) => go(b, out),
                Expr::Mul(l, r) => {
                    go(l, out);
                    go(r, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Paths of every subterm, in pre-order.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        crate::nav::positions(self)
    }
}

impl Navigable for Expr {
    fn children(&self) -> Vec<Self> {
        match self {
            Expr::Var(_) => Vec::new(),
            Expr::Power(b, _) | Expr::Recip(b) => vec![(**b).clone()],
            Expr::Mul(l, r) => vec![(**l).clone(), (**r).clone()],
        }
    }

    fn rebuild(&self, index: usize, child: Self) -> Self {
        match (self, index) {
            (Expr::Power(_, n), 0) => Expr::Power(Arc::new(child), n.clone()),
            (Expr::Recip(_), 0) => Expr::Recip(Arc::new(child)),
            (Expr::Mul(_, r), 0) => Expr::Mul(Arc::new(child), r.clone()),
            (Expr::Mul(l, _), 1) => Expr::Mul(l.clone(), Arc::new(child)),
            _ => panic!("child index {index} out of range for {self}"),
        }
    }

    fn arity(&self) -> usize {
        match self {
            Expr::Var(_) => 0,
            Expr::Power(..) | Expr::Recip(_) => 1,
            Expr::Mul(..) => 2,
        }
    }

    fn child(&self, index: usize) -> Option<Self> {
        match (self, index) {
            (Expr::Power(b, _), 0) | (Expr::Recip(b), 0) => Some((**b).clone()),
            (Expr::Mul(l, _), 0) => Some((**l).clone()),
            (Expr::Mul(_, r), 1) => Some((**r).clone()),
            _ => None,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::print(self))
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}
