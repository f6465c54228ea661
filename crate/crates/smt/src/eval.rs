// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::EvalError;
use crate::term::{Node, Op, Sort, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Value {
    Bool(bool),
    Bv { value: u64, width: u32 },
}

impl Value {
    pub fn sort(self) -> Sort {
        match self {
            Value::Bool(_) => Sort::Bool,
            Value::Bv { width, .. } => Sort::BitVec(width),
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            Value::Bv { .. } => None,
        }
    }

    pub fn as_bv(self) -> Option<u64> {
        match self {
            Value::Bv { value, .. } => Some(value),
            Value::Bool(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Bv { value, width } => write!(f, "(_ bv{value} {width})"),
        }
    }
}

/// Values for free variables, keyed by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<String, Value>);

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn set(&mut self, name: &str, value: Value) -> &mut Self {
        self.0.insert(name.to_string(), value);
        self
    }

    pub fn set_bv(&mut self, name: &str, value: u64, width: u32) -> &mut Self {
        self.set(name, Value::Bv { value: value & mask(width), width })
    }

    pub fn get(&self, name: &str) -> Option<Value> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Value)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

fn mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// QF_BV semantics over the supported operators.
pub fn eval_term(term: &Term, assignment: &Assignment) -> Result<Value, EvalError> {
    CompiledTerm::new(term).eval(assignment)
}

#[derive(Debug, Clone)]
enum Step {
    Const(Value),
    Var(usize),
    App { op: Op, args: Vec<usize>, sort: Sort },
}

/// A term flattened into evaluation order, with every shared subterm
/// evaluated once. Build it once to evaluate a term under many assignments.
#[derive(Debug, Clone)]
pub struct CompiledTerm {
    steps: Vec<Step>,
    vars: Vec<(String, Sort)>,
}

impl CompiledTerm {
    pub fn new(term: &Term) -> Self {
        let mut compiled = CompiledTerm { steps: Vec::new(), vars: Vec::new() };
        compiled.push(term, &mut HashMap::new());
        compiled
    }

    fn push(&mut self, term: &Term, seen: &mut HashMap<*const Node, usize>) -> usize {
        let key = term.node() as *const Node;
        if let Some(&slot) = seen.get(&key) {
            return slot;
        }
        let step = match term.node() {
            Node::BvConst { value, width } => Step::Const(Value::Bv { value: *value, width: *width }),
            Node::BoolConst(b) => Step::Const(Value::Bool(*b)),
            Node::Var { name, sort } => {
                let index = match self.vars.iter().position(|(n, s)| n == name && s == sort) {
                    Some(index) => index,
                    None => {
                        self.vars.push((name.clone(), *sort));
                        self.vars.len() - 1
                    }
                };
                Step::Var(index)
            }
            Node::App { op, args, sort } => {
                let args = args.iter().map(|a| self.push(a, seen)).collect();
                Step::App { op: *op, args, sort: *sort }
            }
        };
        self.steps.push(step);
        let slot = self.steps.len() - 1;
        seen.insert(key, slot);
        slot
    }

    /// Free variables in slot order, as expected by [`CompiledTerm::eval_slots`].
    pub fn vars(&self) -> &[(String, Sort)] {
        &self.vars
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<Value, EvalError> {
        let values = self
            .vars
            .iter()
            .map(|(name, sort)| {
                let v = assignment.get(name).ok_or_else(|| EvalError::MissingVariable(name.clone()))?;
                if v.sort() != *sort {
                    return Err(EvalError::SortMismatch(name.clone()));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.eval_slots(&values))
    }

    /// Evaluates with `values[i]` bound to `vars()[i]`. The caller guarantees
    /// the sorts match.
    pub fn eval_slots(&self, values: &[Value]) -> Value {
        let mut results: Vec<Value> = Vec::with_capacity(self.steps.len());
        let mut scratch: Vec<Value> = Vec::new();
        for step in &self.steps {
            let v = match step {
                Step::Const(v) => *v,
                Step::Var(i) => values[*i],
                Step::App { op, args, sort } => {
                    scratch.clear();
                    scratch.extend(args.iter().map(|&a| results[a]));
                    apply(*op, &scratch, *sort)
                }
            };
            results.push(v);
        }
        *results.last().expect("a term has at least one step")
    }
}

fn apply(op: Op, vals: &[Value], sort: Sort) -> Value {
    let bv = |i: usize| vals[i].as_bv().expect("sort-checked bitvector operand");
    let bool_at = |i: usize| vals[i].as_bool().expect("sort-checked boolean operand");
    let out = |value: u64| match sort {
        Sort::BitVec(width) => Value::Bv { value: value & mask(width), width },
        Sort::Bool => unreachable!("bitvector result for boolean sort"),
    };
    let width = vals[0].sort().width().unwrap_or(0);
    match op {
        Op::Concat => {
            let low = vals[1].sort().width().expect("bitvector");
            out(bv(0) << low | bv(1))
        }
        Op::Extract { lo, .. } => out(bv(0) >> lo),
        Op::BvAdd => out(bv(0).wrapping_add(bv(1))),
        Op::BvSub => out(bv(0).wrapping_sub(bv(1))),
        Op::BvShl => out(if bv(1) >= u64::from(width) { 0 } else { bv(0) << bv(1) }),
        Op::BvLshr => out(if bv(1) >= u64::from(width) { 0 } else { bv(0) >> bv(1) }),
        Op::BvAnd => out(bv(0) & bv(1)),
        Op::BvOr => out(bv(0) | bv(1)),
        Op::BvNot => out(!bv(0)),
        Op::BvUle => Value::Bool(bv(0) <= bv(1)),
        Op::BvUlt => Value::Bool(bv(0) < bv(1)),
        Op::Eq => Value::Bool(vals[0] == vals[1]),
        Op::Ite => {
            if bool_at(0) {
                vals[1]
            } else {
                vals[2]
            }
        }
        Op::And => Value::Bool((0..vals.len()).all(bool_at)),
        Op::Or => Value::Bool((0..vals.len()).any(bool_at)),
        Op::Not => Value::Bool(!bool_at(0)),
        Op::Implies => Value::Bool(!bool_at(0) || bool_at(1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(value: u64, width: u32) -> Term {
        Term::bv(value, width).unwrap()
    }

    fn app(op: Op, args: Vec<Term>) -> Term {
        Term::app(op, args).unwrap()
    }

    fn eval(t: &Term) -> Value {
        eval_term(t, &Assignment::new()).unwrap()
    }

    #[test]
    fn add_wraps() {
        assert_eq!(eval(&app(Op::BvAdd, vec![bv(0xFF, 8), bv(1, 8)])), Value::Bv { value: 0, width: 8 });
        assert_eq!(eval(&app(Op::BvSub, vec![bv(0, 8), bv(1, 8)])), Value::Bv { value: 0xFF, width: 8 });
        assert_eq!(eval(&app(Op::BvAdd, vec![bv(u64::MAX, 64), bv(2, 64)])), Value::Bv { value: 1, width: 64 });
    }

    #[test]
    fn ite_selects() {
        let x = Term::var("x", Sort::BitVec(4)).unwrap();
        let y = Term::var("y", Sort::BitVec(4)).unwrap();
        let mut a = Assignment::new();
        a.set_bv("x", 3, 4).set_bv("y", 9, 4);
        let t = app(Op::Ite, vec![Term::bool(true), x, y.clone()]);
        assert_eq!(eval_term(&t, &a).unwrap(), Value::Bv { value: 3, width: 4 });
        let t = app(Op::Ite, vec![Term::bool(false), bv(0, 4), y]);
        assert_eq!(eval_term(&t, &a).unwrap(), Value::Bv { value: 9, width: 4 });
    }

    #[test]
    fn shifts_saturate() {
        assert_eq!(eval(&app(Op::BvShl, vec![bv(1, 4), bv(3, 4)])).as_bv(), Some(8));
        assert_eq!(eval(&app(Op::BvShl, vec![bv(1, 4), bv(4, 4)])).as_bv(), Some(0));
        assert_eq!(eval(&app(Op::BvLshr, vec![bv(8, 4), bv(9, 4)])).as_bv(), Some(0));
        assert_eq!(eval(&app(Op::BvLshr, vec![bv(8, 4), bv(3, 4)])).as_bv(), Some(1));
    }

    #[test]
    fn bit_ops() {
        assert_eq!(eval(&app(Op::Concat, vec![bv(0b10, 2), bv(0b011, 3)])), Value::Bv { value: 0b10011, width: 5 });
        assert_eq!(eval(&app(Op::Extract { hi: 4, lo: 3 }, vec![bv(0x9F, 8)])).as_bv(), Some(0b11));
        assert_eq!(eval(&app(Op::BvNot, vec![bv(0b1010, 4)])).as_bv(), Some(0b0101));
        assert_eq!(eval(&app(Op::BvUle, vec![bv(3, 4), bv(3, 4)])), Value::Bool(true));
        assert_eq!(eval(&app(Op::BvUlt, vec![bv(3, 4), bv(3, 4)])), Value::Bool(false));
        assert_eq!(eval(&app(Op::Implies, vec![Term::bool(false), Term::bool(false)])), Value::Bool(true));
    }

    #[test]
    fn missing_and_mismatched_variables() {
        let x = Term::var("x", Sort::BitVec(4)).unwrap();
        assert_eq!(eval_term(&x, &Assignment::new()), Err(EvalError::MissingVariable("x".into())));
        let mut a = Assignment::new();
        a.set_bv("x", 1, 5);
        assert_eq!(eval_term(&x, &a), Err(EvalError::SortMismatch("x".into())));
    }
}
