// SPDX-License-Identifier: Apache-2.0

//! Bitvector encoding of the checker and of each property.
//!
//! Variables: `addr` (P bits), `size` (2 bits, log2 of the access width),
//! `prv` (2 bits, the privilege encoding), `cfg_i` (8 bits), `addr_reg_i`
//! (P-2 bits) and `out` (3 bits, r in bit 0, w in bit 1, x in bit 2).
//!
//! Address arithmetic is done in P+1 bits so the last byte of an access can
//! never wrap. The reference checker is a mask-comparator circuit; property
//! guards are built separately from explicit region bounds, so a property
//! document compares two independent encodings.

use pmp_core::{AccessRequest, Permissions, PmpState, MAX_ENTRIES, MAX_PADDR_BITS, MIN_PADDR_BITS};
use pmp_props::{CheckerImpl, PropertyId};

use crate::doc::{Declaration, NamedAssertion, SmtDocument};
use crate::error::CompileError;
use crate::eval::Assignment;
use crate::term::{Op, Sort, Term};

pub const VAR_ADDR: &str = "addr";
pub const VAR_SIZE: &str = "size";
pub const VAR_PRV: &str = "prv";
pub const OUT: &str = "out";
/// Assertion excluding the reserved privilege encoding 2.
pub const PRV_VALID: &str = "prv_valid";
/// Assertion binding `out` to the checker term.
pub const CHECKER_DEF: &str = "checker_def";

const M_ENCODING: u64 = 3;

pub fn var_cfg(index: usize) -> String {
    format!("cfg_{index}")
}

pub fn var_addr_reg(index: usize) -> String {
    format!("addr_reg_{index}")
}

pub fn negated_assertion_name(property: PropertyId) -> String {
    format!("negated_{}", property.slug())
}

/// `pmp_<property>_<P>b_<n>e.smt2`, with a `_<mutant>` suffix for mutants.
pub fn file_name(property: PropertyId, checker: CheckerImpl, paddr_bits: u32, n_entries: usize) -> String {
    let suffix = if checker.is_mutant() { format!("_{}", checker.name()) } else { String::new() };
    format!("pmp_{}_{paddr_bits}b_{n_entries}e{suffix}.smt2", property.slug())
}

// Every term below is well-sorted by construction; a failure here is a bug
// in this module.
fn app(op: Op, args: Vec<Term>) -> Term {
    Term::app(op, args).expect("compiler builds well-sorted terms")
}

fn bv(value: u64, width: u32) -> Term {
    Term::bv(value, width).expect("constant fits its width")
}

fn var(name: &str, sort: Sort) -> Term {
    Term::var(name, sort).expect("valid variable name")
}

fn eq(a: Term, b: Term) -> Term {
    app(Op::Eq, vec![a, b])
}

fn not(a: Term) -> Term {
    app(Op::Not, vec![a])
}

fn and(mut terms: Vec<Term>) -> Term {
    match terms.len() {
        0 => Term::bool(true),
        1 => terms.pop().expect("one term"),
        _ => app(Op::And, terms),
    }
}

fn or(mut terms: Vec<Term>) -> Term {
    match terms.len() {
        0 => Term::bool(false),
        1 => terms.pop().expect("one term"),
        _ => app(Op::Or, terms),
    }
}

fn implies(a: Term, b: Term) -> Term {
    app(Op::Implies, vec![a, b])
}

fn ite(c: Term, t: Term, e: Term) -> Term {
    app(Op::Ite, vec![c, t, e])
}

fn ult(a: Term, b: Term) -> Term {
    app(Op::BvUlt, vec![a, b])
}

fn ule(a: Term, b: Term) -> Term {
    app(Op::BvUle, vec![a, b])
}

fn add(a: Term, b: Term) -> Term {
    app(Op::BvAdd, vec![a, b])
}

fn sub(a: Term, b: Term) -> Term {
    app(Op::BvSub, vec![a, b])
}

fn bvand(a: Term, b: Term) -> Term {
    app(Op::BvAnd, vec![a, b])
}

fn bvor(a: Term, b: Term) -> Term {
    app(Op::BvOr, vec![a, b])
}

fn bvnot(a: Term) -> Term {
    app(Op::BvNot, vec![a])
}

fn concat(a: Term, b: Term) -> Term {
    app(Op::Concat, vec![a, b])
}

fn extract(t: Term, hi: u32, lo: u32) -> Term {
    app(Op::Extract { hi, lo }, vec![t])
}

fn bit_set(t: Term, bit: u32) -> Term {
    eq(extract(t, bit, bit), bv(1, 1))
}

/// 3-bit all-ones when `c` holds, zero otherwise.
fn spread(c: Term) -> Term {
    ite(c, bv(0b111, 3), bv(0, 3))
}

/// Symbolic inputs and the derived quantities shared by every encoding.
/// Per-entry subterms are built once so the resulting DAG shares them.
struct Encoder {
    paddr_bits: u32,
    n_entries: usize,
    /// `addr` zero-extended to P+1 bits.
    addr: Term,
    /// Last byte of the access, P+1 bits.
    end: Term,
    high: Term,
    entries: Vec<EntryTerms>,
}

struct EntryTerms {
    rwx: Term,
    locked: Term,
    /// Comparator results from the mask formulation.
    mask_match: Term,
    mask_aligned: Term,
    /// Region membership and coverage from the explicit-bounds formulation.
    in_region: Term,
    covers: Term,
    hi: Term,
}

/// Building blocks for one entry.
struct EntryInputs {
    cfg: Term,
    reg: Term,
    reg_bits: u32,
    /// `addr_reg << 2`, P+1 bits.
    comparand: Term,
    /// TOR lower bound: the previous entry's comparand, or zero.
    bottom: Term,
    mode: [Term; 4],
}

impl Encoder {
    fn new(paddr_bits: u32, n_entries: usize) -> Result<Self, CompileError> {
        if n_entries > MAX_ENTRIES {
            return Err(CompileError::Entries(n_entries));
        }
        if !(MIN_PADDR_BITS..=MAX_PADDR_BITS).contains(&paddr_bits) {
            return Err(CompileError::PaddrBits(paddr_bits));
        }
        let w = paddr_bits + 1;
        let addr = concat(bv(0, 1), var(VAR_ADDR, Sort::BitVec(paddr_bits)));
        let size = concat(bv(0, w - 2), var(VAR_SIZE, Sort::BitVec(2)));
        let last_offset = sub(app(Op::BvShl, vec![bv(1, w), size]), bv(1, w));
        let end = add(addr.clone(), last_offset);
        let high = eq(var(VAR_PRV, Sort::BitVec(2)), bv(M_ENCODING, 2));
        let mut enc = Encoder { paddr_bits, n_entries, addr, end, high, entries: Vec::new() };
        let reg_bits = paddr_bits - 2;
        let mut bottom = bv(0, w);
        for i in 0..n_entries {
            let cfg = var(&var_cfg(i), Sort::BitVec(8));
            let reg = var(&var_addr_reg(i), Sort::BitVec(reg_bits));
            let comparand = concat(bv(0, 1), concat(reg.clone(), bv(0, 2)));
            let mode_field = extract(cfg.clone(), 4, 3);
            let mode = [0, 1, 2, 3].map(|m| eq(mode_field.clone(), bv(m, 2)));
            let inputs = EntryInputs { cfg, reg, reg_bits, comparand: comparand.clone(), bottom, mode };
            let terms = enc.entry_terms(&inputs);
            enc.entries.push(terms);
            bottom = comparand;
        }
        Ok(enc)
    }

    fn width(&self) -> u32 {
        self.paddr_bits + 1
    }

    fn declarations(&self) -> Vec<Declaration> {
        let mut decls = vec![
            Declaration { name: VAR_ADDR.into(), sort: Sort::BitVec(self.paddr_bits) },
            Declaration { name: VAR_SIZE.into(), sort: Sort::BitVec(2) },
            Declaration { name: VAR_PRV.into(), sort: Sort::BitVec(2) },
            Declaration { name: OUT.into(), sort: Sort::BitVec(3) },
        ];
        for i in 0..self.n_entries {
            decls.push(Declaration { name: var_cfg(i), sort: Sort::BitVec(8) });
            decls.push(Declaration { name: var_addr_reg(i), sort: Sort::BitVec(self.paddr_bits - 2) });
        }
        decls
    }

    fn entry_terms(&self, e: &EntryInputs) -> EntryTerms {
        let (lo, hi, nonempty) = self.bounds(e);
        let in_region =
            and(vec![nonempty.clone(), ule(lo.clone(), self.addr.clone()), ule(self.addr.clone(), hi.clone())]);
        let covers = and(vec![nonempty, ule(lo, self.addr.clone()), ule(self.end.clone(), hi.clone())]);
        EntryTerms {
            rwx: extract(e.cfg.clone(), 2, 0),
            locked: bit_set(e.cfg.clone(), 7),
            mask_match: self.mask_match(e),
            mask_aligned: self.mask_aligned(e),
            in_region,
            covers,
            hi,
        }
    }

    // ---- mask formulation -------------------------------------------------

    /// Complement of the NA4/NAPOT comparator mask: ones at the address bits
    /// the comparator checks.
    fn napot_keep(&self, e: &EntryInputs) -> Term {
        let t = concat(e.reg.clone(), extract(e.cfg.clone(), 3, 3));
        let low_ones = bvand(t.clone(), bvnot(add(t, bv(1, e.reg_bits + 1))));
        bvnot(concat(low_ones, bv(0b11, 2)))
    }

    fn mask_match(&self, e: &EntryInputs) -> Term {
        let keep = self.napot_keep(e);
        let target = bvand(e.comparand.clone(), keep.clone());
        let napot = eq(bvand(self.addr.clone(), keep), target);
        let tor = and(vec![not(ult(self.addr.clone(), e.bottom.clone())), ult(self.addr.clone(), e.comparand.clone())]);
        ite(e.mode[0].clone(), Term::bool(false), ite(e.mode[1].clone(), tor, napot))
    }

    fn mask_aligned(&self, e: &EntryInputs) -> Term {
        let p = self.paddr_bits;
        let keep = self.napot_keep(e);
        let target = bvand(e.comparand.clone(), keep.clone());
        let no_carry = eq(extract(self.end.clone(), p, p), bv(0, 1));
        let tor = and(vec![not(ult(self.addr.clone(), e.bottom.clone())), ult(self.end.clone(), e.comparand.clone())]);
        let napot = and(vec![
            no_carry,
            eq(bvand(self.addr.clone(), keep.clone()), target.clone()),
            eq(bvand(self.end.clone(), keep), target),
        ]);
        ite(e.mode[0].clone(), Term::bool(false), ite(e.mode[1].clone(), tor, napot))
    }

    // ---- bounds formulation -----------------------------------------------

    fn napot_bounds(&self, e: &EntryInputs) -> (Term, Term) {
        let r = e.reg_bits;
        let w = self.width();
        let max = bv((1u64 << self.paddr_bits) - 1, w);
        // Whole address space when every bit of the register is one.
        let mut lo = bv(0, w);
        let mut hi = max.clone();
        for k in (0..r).rev() {
            // Exactly k trailing ones: bits [k:0] equal 0..01..1.
            let cond = eq(extract(e.reg.clone(), k, 0), bv((1u64 << k) - 1, k + 1));
            let base = bvand(e.reg.clone(), bv(!((1u64 << (k + 1)) - 1) & ((1u64 << r) - 1), r));
            let lo_k = concat(bv(0, 1), concat(base, bv(0, 2)));
            let hi_k = add(lo_k.clone(), bv((1u64 << (k + 3)) - 1, w));
            let hi_k = ite(ult(max.clone(), hi_k.clone()), max.clone(), hi_k);
            lo = ite(cond.clone(), lo_k, lo);
            hi = ite(cond, hi_k, hi);
        }
        (lo, hi)
    }

    /// `(lo, hi, nonempty)` of the entry's region, P+1 bits.
    fn bounds(&self, e: &EntryInputs) -> (Term, Term, Term) {
        let w = self.width();
        let (napot_lo, napot_hi) = self.napot_bounds(e);
        let nonempty = ite(
            e.mode[0].clone(),
            Term::bool(false),
            ite(e.mode[1].clone(), ult(e.bottom.clone(), e.comparand.clone()), Term::bool(true)),
        );
        let lo = ite(e.mode[1].clone(), e.bottom.clone(), ite(e.mode[2].clone(), e.comparand.clone(), napot_lo));
        let hi = ite(
            e.mode[1].clone(),
            sub(e.comparand.clone(), bv(1, w)),
            ite(e.mode[2].clone(), add(e.comparand.clone(), bv(3, w)), napot_hi),
        );
        (lo, hi, nonempty)
    }

    // ---- checkers ---------------------------------------------------------

    fn entry_perms(&self, e: &EntryTerms, aligned: Term, honor_lock: bool) -> Term {
        let unlocked = if honor_lock { not(e.locked.clone()) } else { Term::bool(true) };
        let override_bits = spread(and(vec![self.high.clone(), unlocked]));
        bvand(bvor(e.rwx.clone(), override_bits), spread(aligned))
    }

    fn checker(&self, checker: CheckerImpl) -> Term {
        let default = spread(self.high.clone());
        let order: Vec<usize> = match checker {
            // Folding forward leaves the highest index outermost, so it wins.
            CheckerImpl::PriorityReversed => (0..self.n_entries).collect(),
            _ => (0..self.n_entries).rev().collect(),
        };
        order.into_iter().fold(default, |lower, i| {
            let e = &self.entries[i];
            let (hit, perms) = match checker {
                CheckerImpl::Spec => (e.in_region.clone(), self.entry_perms(e, e.covers.clone(), true)),
                CheckerImpl::Mask | CheckerImpl::PriorityReversed => {
                    (e.mask_match.clone(), self.entry_perms(e, e.mask_aligned.clone(), true))
                }
                CheckerImpl::LockIgnored => (e.mask_match.clone(), self.entry_perms(e, e.mask_aligned.clone(), false)),
                CheckerImpl::AlignmentIgnored => (e.mask_match.clone(), self.entry_perms(e, Term::bool(true), true)),
            };
            ite(hit, perms, lower)
        })
    }

    // ---- properties -------------------------------------------------------

    fn property(&self, property: PropertyId) -> Term {
        let out = var(OUT, Sort::BitVec(3));
        let es = &self.entries;
        // Entry i is the first region containing addr.
        let first = |i: usize| {
            let mut parts: Vec<Term> = es[..i].iter().map(|e| not(e.in_region.clone())).collect();
            parts.push(es[i].in_region.clone());
            and(parts)
        };
        // Conjunction over entries of `first(i) => out = expected(i)`.
        let decides = |expected: &dyn Fn(&EntryTerms) -> Term| {
            and(es.iter().enumerate().map(|(i, e)| implies(first(i), eq(out.clone(), expected(e)))).collect())
        };
        match property {
            PropertyId::RegionBoundsEq1 => {
                and(es.iter().map(|e| eq(e.in_region.clone(), e.mask_match.clone())).collect())
            }
            PropertyId::AlignImplEq2 => and(es
                .iter()
                .map(|e| {
                    let guard = and(vec![e.in_region.clone(), or(vec![e.covers.clone(), e.mask_aligned.clone()])]);
                    implies(guard, ule(self.end.clone(), e.hi.clone()))
                })
                .collect()),
            PropertyId::MainLowEq3 => {
                implies(not(self.high.clone()), decides(&|e| bvand(e.rwx.clone(), spread(e.covers.clone()))))
            }
            PropertyId::HighPrivEq5 => implies(
                self.high.clone(),
                decides(&|e| bvand(bvor(e.rwx.clone(), spread(not(e.locked.clone()))), spread(e.covers.clone()))),
            ),
            PropertyId::NoMatchEq4 => {
                implies(and(es.iter().map(|e| not(e.in_region.clone())).collect()), eq(out, spread(self.high.clone())))
            }
        }
    }
}

/// The reference (mask-comparator) checker as a 3-bit term.
pub fn compile_checker(paddr_bits: u32, n_entries: usize) -> Result<Term, CompileError> {
    compile_checker_for(CheckerImpl::Mask, paddr_bits, n_entries)
}

/// Checker term for any implementation. `Spec` uses the explicit-bounds
/// formulation; the mutants are derived from the mask circuit.
pub fn compile_checker_for(checker: CheckerImpl, paddr_bits: u32, n_entries: usize) -> Result<Term, CompileError> {
    Ok(Encoder::new(paddr_bits, n_entries)?.checker(checker))
}

/// Document asserting that the reference checker violates `property`.
/// `unsat` means the property holds for all inputs.
pub fn compile_property_negation(
    property: PropertyId,
    paddr_bits: u32,
    n_entries: usize,
) -> Result<SmtDocument, CompileError> {
    compile_property_negation_for(property, CheckerImpl::Mask, paddr_bits, n_entries)
}

pub fn compile_property_negation_for(
    property: PropertyId,
    checker: CheckerImpl,
    paddr_bits: u32,
    n_entries: usize,
) -> Result<SmtDocument, CompileError> {
    let enc = Encoder::new(paddr_bits, n_entries)?;
    let prv_valid = not(eq(var(VAR_PRV, Sort::BitVec(2)), bv(2, 2)));
    let checker_def = eq(var(OUT, Sort::BitVec(3)), enc.checker(checker));
    let assertions = vec![
        NamedAssertion { name: PRV_VALID.into(), term: prv_valid },
        NamedAssertion { name: CHECKER_DEF.into(), term: checker_def },
        NamedAssertion { name: negated_assertion_name(property), term: not(enc.property(property)) },
    ];
    Ok(SmtDocument::new(enc.declarations(), assertions).expect("compiled document is well formed"))
}

/// Input variables for a concrete case. `out` is left unassigned.
pub fn assignment_for(state: &PmpState, req: &AccessRequest) -> Assignment {
    let p = state.paddr_bits();
    let mut a = Assignment::new();
    a.set_bv(VAR_ADDR, req.addr, p).set_bv(VAR_SIZE, u64::from(req.size_exp), 2).set_bv(
        VAR_PRV,
        u64::from(req.prv.encoding()),
        2,
    );
    for (i, entry) in state.entries().iter().enumerate() {
        a.set_bv(&var_cfg(i), u64::from(entry.cfg.encode()), 8);
        a.set_bv(&var_addr_reg(i), entry.addr_reg, state.addr_reg_bits());
    }
    a
}

/// Permissions from a 3-bit `out` value.
pub fn decode_output(value: u64) -> Permissions {
    Permissions::from_bits((value & 0b111) as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_limits() {
        assert_eq!(compile_checker(2, 1), Err(CompileError::PaddrBits(2)));
        assert_eq!(compile_checker(57, 1), Err(CompileError::PaddrBits(57)));
        assert_eq!(compile_checker(32, 17), Err(CompileError::Entries(17)));
        assert!(compile_checker(56, 16).is_ok());
        assert_eq!(compile_checker(8, 0).unwrap().sort(), Sort::BitVec(3));
    }

    #[test]
    fn names() {
        assert_eq!(file_name(PropertyId::MainLowEq3, CheckerImpl::Mask, 32, 8), "pmp_main_low_eq3_32b_8e.smt2");
        assert_eq!(
            file_name(PropertyId::HighPrivEq5, CheckerImpl::LockIgnored, 6, 1),
            "pmp_high_priv_eq5_6b_1e_lock-ignored.smt2"
        );
        assert_eq!(negated_assertion_name(PropertyId::NoMatchEq4), "negated_no_match_eq4");
    }

    #[test]
    fn document_layout() {
        let doc = compile_property_negation(PropertyId::MainLowEq3, 8, 2).unwrap();
        let names: Vec<_> = doc.assertions().iter().map(|a| a.name.as_str()).collect();
        assert_eq!(names, [PRV_VALID, CHECKER_DEF, "negated_main_low_eq3"]);
        let decls: Vec<_> = doc.declarations().iter().map(|d| d.name.as_str()).collect();
        assert_eq!(decls, ["addr", "addr_reg_0", "addr_reg_1", "cfg_0", "cfg_1", "out", "prv", "size"]);
    }
}
