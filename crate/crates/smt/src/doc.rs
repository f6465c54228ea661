// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};

use crate::error::DocError;
use crate::eval::{eval_term, Assignment};
use crate::term::{is_symbol, Sort, Term};

pub const QF_BV: &str = "QF_BV";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Declaration {
    pub name: String,
    pub sort: Sort,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedAssertion {
    pub name: String,
    pub term: Term,
}

/// An SMT-LIB script in the emitted fragment: logic, declarations sorted by
/// name, named boolean assertions and a trailing `(check-sat)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmtDocument {
    logic: String,
    declarations: Vec<Declaration>,
    assertions: Vec<NamedAssertion>,
}

impl SmtDocument {
    pub fn new(mut declarations: Vec<Declaration>, assertions: Vec<NamedAssertion>) -> Result<Self, DocError> {
        declarations.sort_by(|a, b| a.name.cmp(&b.name));
        let mut sorts: BTreeMap<&str, Sort> = BTreeMap::new();
        for d in &declarations {
            if sorts.insert(d.name.as_str(), d.sort).is_some() {
                return Err(DocError::DuplicateDeclaration(d.name.clone()));
            }
        }
        let mut names = BTreeSet::new();
        for a in &assertions {
            if !is_symbol(&a.name) || !names.insert(a.name.as_str()) {
                return Err(DocError::DuplicateAssertion(a.name.clone()));
            }
            if a.term.sort() != Sort::Bool {
                return Err(DocError::NotBoolean(a.name.clone()));
            }
            for (var, sort) in a.term.free_vars() {
                match sorts.get(var.as_str()) {
                    None => return Err(DocError::Undeclared(var)),
                    Some(s) if *s != sort => return Err(DocError::SortConflict(var)),
                    Some(_) => {}
                }
            }
        }
        Ok(SmtDocument { logic: QF_BV.to_string(), declarations, assertions })
    }

    pub fn logic(&self) -> &str {
        &self.logic
    }

    pub fn declarations(&self) -> &[Declaration] {
        &self.declarations
    }

    pub fn assertions(&self) -> &[NamedAssertion] {
        &self.assertions
    }

    pub fn assertion(&self, name: &str) -> Option<&NamedAssertion> {
        self.assertions.iter().find(|a| a.name == name)
    }

    /// Whether every assertion is true under `assignment`. `None` when the
    /// assignment does not cover the declarations.
    pub fn satisfied_by(&self, assignment: &Assignment) -> Option<bool> {
        for a in &self.assertions {
            if !eval_term(&a.term, assignment).ok()?.as_bool()? {
                return Some(false);
            }
        }
        Some(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Op;

    fn decl(name: &str, width: u32) -> Declaration {
        Declaration { name: name.to_string(), sort: Sort::BitVec(width) }
    }

    fn x_is_zero() -> Term {
        let x = Term::var("x", Sort::BitVec(4)).unwrap();
        Term::app(Op::Eq, vec![x, Term::bv(0, 4).unwrap()]).unwrap()
    }

    #[test]
    fn declarations_sorted() {
        let doc = SmtDocument::new(vec![decl("z", 1), decl("a", 2)], vec![]).unwrap();
        let names: Vec<_> = doc.declarations().iter().map(|d| d.name.as_str()).collect();
        assert_eq!(names, ["a", "z"]);
        assert_eq!(doc.logic(), "QF_BV");
    }

    #[test]
    fn rejects_bad_documents() {
        let a = |name: &str| NamedAssertion { name: name.to_string(), term: x_is_zero() };
        assert_eq!(
            SmtDocument::new(vec![decl("x", 4), decl("x", 4)], vec![]),
            Err(DocError::DuplicateDeclaration("x".into()))
        );
        assert_eq!(SmtDocument::new(vec![], vec![a("p")]), Err(DocError::Undeclared("x".into())));
        assert_eq!(SmtDocument::new(vec![decl("x", 5)], vec![a("p")]), Err(DocError::SortConflict("x".into())));
        assert_eq!(
            SmtDocument::new(vec![decl("x", 4)], vec![a("p"), a("p")]),
            Err(DocError::DuplicateAssertion("p".into()))
        );
        let not_bool = NamedAssertion { name: "q".into(), term: Term::bv(1, 1).unwrap() };
        assert_eq!(SmtDocument::new(vec![], vec![not_bool]), Err(DocError::NotBoolean("q".into())));
    }

    #[test]
    fn satisfaction() {
        let doc =
            SmtDocument::new(vec![decl("x", 4)], vec![NamedAssertion { name: "p".into(), term: x_is_zero() }]).unwrap();
        let mut a = Assignment::new();
        assert_eq!(doc.satisfied_by(&a), None);
        a.set_bv("x", 0, 4);
        assert_eq!(doc.satisfied_by(&a), Some(true));
        a.set_bv("x", 1, 4);
        assert_eq!(doc.satisfied_by(&a), Some(false));
    }
}
