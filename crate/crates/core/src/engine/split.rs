use crate::error::Error;
use crate::strategy::language::nullable;
use crate::strategy::{rule_id, seq, succeed, Atom, Node, RuleId, Strategy};

/// Every way to split `s` into a first atom and the remaining strategy.
///
/// A rest of the form `succeed <*> t` is returned as `t`; the two have the
/// same language and this keeps equal states syntactically equal.
///
/// Fails with [`Error::LeftRecursion`] when a recursion binder is reached
/// again while looking for the first atom.
pub fn split(s: &Strategy) -> Result<Vec<(Atom, Strategy)>, Error> {
    let mut out = Vec::new();
    split_into(s, &mut Vec::new(), &mut out)?;
    Ok(out)
}

fn split_into(
    s: &Strategy,
    open: &mut Vec<Strategy>,
    out: &mut Vec<(Atom, Strategy)>,
) -> Result<(), Error> {
    match s.node() {
        Node::Rule(r) => out.push((Atom::Rule(r.clone()), succeed())),
        Node::Check(c) => out.push((Atom::Check(c.clone()), succeed())),
        Node::Succeed | Node::Fail => {}
        Node::Seq(a, b) => {
            let mut heads = Vec::new();
            split_into(a, open, &mut heads)?;
            out.extend(heads.into_iter().map(|(x, rest)| (x, then(rest, b))));
            if nullable(a) {
                split_into(b, open, out)?;
            }
        }
        Node::Choice(a, b) => {
            split_into(a, open, out)?;
            split_into(b, open, out)?;
        }
        Node::Label(l, body) => out.push((
            Atom::Rule(RuleId::enter(l)),
            seq(body.clone(), rule_id(RuleId::leave(l))),
        )),
        Node::Rec(..) => {
            if open.contains(s) {
                return Err(Error::LeftRecursion(s.to_string()));
            }
            open.push(s.clone());
            let r = split_into(&s.unroll(), open, out);
            open.pop();
            r?;
        }
        Node::Var(v) => return Err(Error::UnboundVariable(v.clone())),
    }
    Ok(())
}

fn then(rest: Strategy, next: &Strategy) -> Strategy {
    if rest.is_succeed() {
        next.clone()
    } else {
        seq(rest, next.clone())
    }
}
