// SPDX-License-Identifier: Apache-2.0

use crate::doc::SmtDocument;
use crate::error::SearchError;
use crate::eval::{Assignment, CompiledTerm, Value};
use crate::term::Sort;

/// Searches every assignment of the declared variables for one satisfying
/// all assertions. Only practical for tiny documents: the search is refused
/// when the declarations total more than `max_bits` bits.
///
/// `Ok(None)` is a proof of unsatisfiability for the document.
pub fn find_model(doc: &SmtDocument, max_bits: u32) -> Result<Option<Assignment>, SearchError> {
    let decls = doc.declarations();
    let widths: Vec<u32> = decls.iter().map(|d| d.sort.width().unwrap_or(1)).collect();
    let total: u32 = widths.iter().sum();
    if total > max_bits || total >= 64 {
        return Err(SearchError { bits: total, max_bits });
    }
    // Each assertion with the declaration index of each of its variables.
    let checks: Vec<(CompiledTerm, Vec<usize>)> = doc
        .assertions()
        .iter()
        .map(|a| {
            let compiled = CompiledTerm::new(&a.term);
            let slots = compiled
                .vars()
                .iter()
                .map(|(name, _)| decls.iter().position(|d| &d.name == name).expect("document checks declarations"))
                .collect();
            (compiled, slots)
        })
        .collect();
    let mut values = vec![Value::Bool(false); decls.len()];
    let mut args = Vec::new();
    for packed in 0..(1u64 << total) {
        let mut rest = packed;
        for ((d, &w), slot) in decls.iter().zip(&widths).zip(values.iter_mut()) {
            let value = rest & ((1u64 << w) - 1);
            rest >>= w;
            *slot = match d.sort {
                Sort::Bool => Value::Bool(value == 1),
                Sort::BitVec(_) => Value::Bv { value, width: w },
            };
        }
        let satisfied = checks.iter().all(|(term, slots)| {
            args.clear();
            args.extend(slots.iter().map(|&i| values[i]));
            term.eval_slots(&args) == Value::Bool(true)
        });
        if satisfied {
            let mut model = Assignment::new();
            for (d, v) in decls.iter().zip(&values) {
                model.set(&d.name, *v);
            }
            return Ok(Some(model));
        }
    }
    Ok(None)
}
