// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::sync::Arc;

use crate::error::TermError;

/// Widest bitvector the evaluator handles.
pub const MAX_WIDTH: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Bool,
    BitVec(u32),
}

impl Sort {
    pub fn width(self) -> Option<u32> {
        match self {
            Sort::Bool => None,
            Sort::BitVec(w) => Some(w),
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bool => f.write_str("Bool"),
            Sort::BitVec(w) => write!(f, "(_ BitVec {w})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Concat,
    Extract { hi: u32, lo: u32 },
    BvAdd,
    BvSub,
    BvShl,
    BvLshr,
    BvAnd,
    BvOr,
    BvNot,
    BvUle,
    BvUlt,
    Eq,
    Ite,
    And,
    Or,
    Not,
    Implies,
}

impl Op {
    /// SMT-LIB name of the operator; `extract` is indexed and rendered
    /// separately.
    pub fn symbol(self) -> &'static str {
        match self {
            Op::Concat => "concat",
            Op::Extract { .. } => "extract",
            Op::BvAdd => "bvadd",
            Op::BvSub => "bvsub",
            Op::BvShl => "bvshl",
            Op::BvLshr => "bvlshr",
            Op::BvAnd => "bvand",
            Op::BvOr => "bvor",
            Op::BvNot => "bvnot",
            Op::BvUle => "bvule",
            Op::BvUlt => "bvult",
            Op::Eq => "=",
            Op::Ite => "ite",
            Op::And => "and",
            Op::Or => "or",
            Op::Not => "not",
            Op::Implies => "=>",
        }
    }

    /// Non-indexed operator by SMT-LIB name.
    pub fn from_symbol(s: &str) -> Option<Op> {
        Some(match s {
            "concat" => Op::Concat,
            "bvadd" => Op::BvAdd,
            "bvsub" => Op::BvSub,
            "bvshl" => Op::BvShl,
            "bvlshr" => Op::BvLshr,
            "bvand" => Op::BvAnd,
            "bvor" => Op::BvOr,
            "bvnot" => Op::BvNot,
            "bvule" => Op::BvUle,
            "bvult" => Op::BvUlt,
            "=" => Op::Eq,
            "ite" => Op::Ite,
            "and" => Op::And,
            "or" => Op::Or,
            "not" => Op::Not,
            "=>" => Op::Implies,
            _ => return None,
        })
    }

    /// `(min, max)` argument count; `None` means unbounded.
    pub fn arity(self) -> (usize, Option<usize>) {
        match self {
            Op::Extract { .. } | Op::BvNot | Op::Not => (1, Some(1)),
            Op::Ite => (3, Some(3)),
            Op::And | Op::Or => (2, None),
            _ => (2, Some(2)),
        }
    }

    pub fn arity_text(self) -> String {
        match self.arity() {
            (lo, Some(hi)) if lo == hi => lo.to_string(),
            (lo, _) => format!("at least {lo}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    BvConst { value: u64, width: u32 },
    BoolConst(bool),
    Var { name: String, sort: Sort },
    App { op: Op, args: Vec<Term>, sort: Sort },
}

/// Immutable, sort-checked expression tree. The only way to build one is
/// through the checked constructors below, so every node satisfies its
/// operator's width rules.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term(Arc<Node>);

fn width_mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

pub(crate) fn is_symbol(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
        && !matches!(name, "true" | "false" | "_")
        && Op::from_symbol(name).is_none()
}

fn check_width(width: u32) -> Result<(), TermError> {
    if width == 0 || width > MAX_WIDTH {
        return Err(TermError::Width(format!("bitvector width {width} outside 1..={MAX_WIDTH}")));
    }
    Ok(())
}

impl Term {
    pub fn bv(value: u64, width: u32) -> Result<Term, TermError> {
        check_width(width)?;
        if value & !width_mask(width) != 0 {
            return Err(TermError::Width(format!("constant {value} does not fit in {width} bits")));
        }
        Ok(Term(Arc::new(Node::BvConst { value, width })))
    }

    pub fn bool(value: bool) -> Term {
        Term(Arc::new(Node::BoolConst(value)))
    }

    pub fn var(name: &str, sort: Sort) -> Result<Term, TermError> {
        if !is_symbol(name) {
            return Err(TermError::Symbol(name.to_string()));
        }
        if let Sort::BitVec(w) = sort {
            check_width(w)?;
        }
        Ok(Term(Arc::new(Node::Var { name: name.to_string(), sort })))
    }

    pub fn app(op: Op, args: Vec<Term>) -> Result<Term, TermError> {
        let sort = app_sort(op, &args)?;
        Ok(Term(Arc::new(Node::App { op, args, sort })))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn sort(&self) -> Sort {
        match self.node() {
            Node::BvConst { width, .. } => Sort::BitVec(*width),
            Node::BoolConst(_) => Sort::Bool,
            Node::Var { sort, .. } | Node::App { sort, .. } => *sort,
        }
    }

    /// Free variables with their sorts, in first-occurrence order.
    pub fn free_vars(&self) -> Vec<(String, Sort)> {
        let mut out: Vec<(String, Sort)> = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<(String, Sort)>) {
        match self.node() {
            Node::Var { name, sort } => {
                if !out.iter().any(|(n, s)| n == name && s == sort) {
                    out.push((name.clone(), *sort));
                }
            }
            Node::App { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
            _ => {}
        }
    }

    /// Number of nodes counted as a tree (shared subterms counted each time).
    pub fn size(&self) -> usize {
        match self.node() {
            Node::App { args, .. } => 1 + args.iter().map(Term::size).sum::<usize>(),
            _ => 1,
        }
    }
}

fn app_sort(op: Op, args: &[Term]) -> Result<Sort, TermError> {
    let (min, max) = op.arity();
    if args.len() < min || max.is_some_and(|m| args.len() > m) {
        return Err(TermError::Arity { op: op.symbol().to_string(), expected: op.arity_text(), found: args.len() });
    }
    let sort_err = |detail: String| TermError::Sort { op: op.symbol().to_string(), detail };
    let bv_width =
        |t: &Term| t.sort().width().ok_or_else(|| sort_err("expected a bitvector operand, found Bool".to_string()));
    let same_width = || -> Result<u32, TermError> {
        let w = bv_width(&args[0])?;
        for a in &args[1..] {
            let v = bv_width(a)?;
            if v != w {
                return Err(sort_err(format!("operand widths {w} and {v} differ")));
            }
        }
        Ok(w)
    };
    let all_bool = || -> Result<Sort, TermError> {
        if args.iter().all(|a| a.sort() == Sort::Bool) {
            Ok(Sort::Bool)
        } else {
            Err(sort_err("expected Bool operands".to_string()))
        }
    };
    match op {
        Op::Concat => {
            let w = bv_width(&args[0])? + bv_width(&args[1])?;
            if w > MAX_WIDTH {
                return Err(TermError::Width(format!("concat result width {w} exceeds {MAX_WIDTH}")));
            }
            Ok(Sort::BitVec(w))
        }
        Op::Extract { hi, lo } => {
            let w = bv_width(&args[0])?;
            if hi < lo || hi >= w {
                return Err(TermError::Width(format!("extract [{hi}:{lo}] out of bounds for width {w}")));
            }
            Ok(Sort::BitVec(hi - lo + 1))
        }
        Op::BvAdd | Op::BvSub | Op::BvShl | Op::BvLshr | Op::BvAnd | Op::BvOr | Op::BvNot => {
            Ok(Sort::BitVec(same_width()?))
        }
        Op::BvUle | Op::BvUlt => {
            same_width()?;
            Ok(Sort::Bool)
        }
        Op::Eq => {
            if args[0].sort() != args[1].sort() {
                return Err(sort_err(format!("operands have sorts {} and {}", args[0].sort(), args[1].sort())));
            }
            Ok(Sort::Bool)
        }
        Op::Ite => {
            if args[0].sort() != Sort::Bool {
                return Err(sort_err("condition must be Bool".to_string()));
            }
            if args[1].sort() != args[2].sort() {
                return Err(sort_err(format!("branches have sorts {} and {}", args[1].sort(), args[2].sort())));
            }
            Ok(args[1].sort())
        }
        Op::And | Op::Or | Op::Not | Op::Implies => all_bool(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x8() -> Term {
        Term::var("x", Sort::BitVec(8)).unwrap()
    }

    #[test]
    fn constants_checked() {
        assert!(Term::bv(0xFF, 8).is_ok());
        assert!(Term::bv(0x100, 8).is_err());
        assert!(Term::bv(0, 0).is_err());
        assert!(Term::bv(u64::MAX, 64).is_ok());
        assert!(Term::bv(0, 65).is_err());
    }

    #[test]
    fn symbols_checked() {
        assert!(Term::var("addr_reg_3", Sort::BitVec(30)).is_ok());
        for bad in ["", "3x", "and", "true", "a b", "x|y"] {
            assert!(Term::var(bad, Sort::Bool).is_err(), "{bad}");
        }
    }

    #[test]
    fn arity_and_sorts() {
        assert!(matches!(Term::app(Op::BvAdd, vec![x8()]), Err(TermError::Arity { .. })));
        assert!(matches!(Term::app(Op::And, vec![Term::bool(true)]), Err(TermError::Arity { .. })));
        let y4 = Term::var("y", Sort::BitVec(4)).unwrap();
        assert!(matches!(Term::app(Op::BvAdd, vec![x8(), y4.clone()]), Err(TermError::Sort { .. })));
        assert_eq!(Term::app(Op::Concat, vec![x8(), y4]).unwrap().sort(), Sort::BitVec(12));
        assert_eq!(Term::app(Op::BvUlt, vec![x8(), x8()]).unwrap().sort(), Sort::Bool);
        assert!(Term::app(Op::Not, vec![x8()]).is_err());
        assert!(Term::app(Op::Ite, vec![x8(), x8(), x8()]).is_err());
        let wide = Term::var("w", Sort::BitVec(60)).unwrap();
        assert!(matches!(Term::app(Op::Concat, vec![wide, x8()]), Err(TermError::Width(_))));
    }

    #[test]
    fn extract_bounds() {
        assert_eq!(Term::app(Op::Extract { hi: 7, lo: 4 }, vec![x8()]).unwrap().sort(), Sort::BitVec(4));
        assert!(matches!(Term::app(Op::Extract { hi: 8, lo: 0 }, vec![x8()]), Err(TermError::Width(_))));
        assert!(matches!(Term::app(Op::Extract { hi: 2, lo: 3 }, vec![x8()]), Err(TermError::Width(_))));
    }

    #[test]
    fn free_vars_deduplicated() {
        let t = Term::app(Op::BvAdd, vec![x8(), x8()]).unwrap();
        assert_eq!(t.free_vars(), vec![("x".to_string(), Sort::BitVec(8))]);
        assert_eq!(t.size(), 3);
    }
}
