//! Printing in the concrete ASCII grammar.
//!
//! Output is fully parenthesised so it re-parses to the same tree: operands
//! of a binary connective are bracketed unless they are atoms, operands of a
//! unary connective are bracketed when they are binary.

use std::fmt;

use super::Formula;

fn is_atom(f: &Formula) -> bool {
    matches!(f, Formula::Var(_) | Formula::Bot)
}

fn is_binary(f: &Formula) -> bool {
    f.children().len() == 2
}

fn binary_operand(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if is_atom(f) {
        write!(out, "{f}")
    } else {
        write!(out, "({f})")
    }
}

fn unary_operand(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if is_binary(f) {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (prefix, op) = match self {
            Formula::Var(v) => return f.write_str(v),
            Formula::Bot => return f.write_str("bot"),
            Formula::SNeg(a) => return f.write_str("~").and_then(|_| unary_operand(a, f)),
            Formula::Neg(a) => return f.write_str("!").and_then(|_| unary_operand(a, f)),
            Formula::Box(a) => return f.write_str("[]").and_then(|_| unary_operand(a, f)),
            Formula::Dia(a) => return f.write_str("<>").and_then(|_| unary_operand(a, f)),
            Formula::And(a, b) => ((a, b), "&"),
            Formula::Or(a, b) => ((a, b), "|"),
            Formula::Imp(a, b) => ((a, b), "->"),
            Formula::Iff(a, b) => ((a, b), "<->"),
            Formula::SIff(a, b) => ((a, b), "<=>"),
        };
        binary_operand(prefix.0, f)?;
        write!(f, " {op} ")?;
        binary_operand(prefix.1, f)
    }
}

#[cfg(test)]
mod tests {
    use crate::formula::parse;

    #[test]
    fn printing_examples() {
        let f = parse("(p & ~p) -> (q | ~q)").unwrap();
        assert_eq!(f.to_string(), "(p & (~p)) -> (q | (~q))");
        let g = parse("[]~p & <>!(p -> q)").unwrap();
        assert_eq!(g.to_string(), "([]~p) & (<>!(p -> q))");
        assert_eq!(parse("~~bot").unwrap().to_string(), "~~bot");
    }
}
