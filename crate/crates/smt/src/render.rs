// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;

use crate::doc::SmtDocument;
use crate::term::{Node, Op, Term};

/// SMT-LIB 2 text for `doc`. Output is a pure function of the document.
pub fn render(doc: &SmtDocument) -> String {
    let mut out = String::new();
    writeln!(out, "(set-logic {})", doc.logic()).unwrap();
    for d in doc.declarations() {
        writeln!(out, "(declare-fun {} () {})", d.name, d.sort).unwrap();
    }
    for a in doc.assertions() {
        out.push_str("(assert (! ");
        write_term(&mut out, &a.term);
        writeln!(out, " :named {}))", a.name).unwrap();
    }
    out.push_str("(check-sat)\n");
    out
}

pub(crate) fn write_term(out: &mut String, term: &Term) {
    match term.node() {
        Node::BvConst { value, width } => write!(out, "(_ bv{value} {width})").unwrap(),
        Node::BoolConst(b) => write!(out, "{b}").unwrap(),
        Node::Var { name, .. } => out.push_str(name),
        Node::App { op, args, .. } => {
            match op {
                Op::Extract { hi, lo } => write!(out, "((_ extract {hi} {lo})").unwrap(),
                other => write!(out, "({}", other.symbol()).unwrap(),
            }
            for a in args {
                out.push(' ');
                write_term(out, a);
            }
            out.push(')');
        }
    }
}
