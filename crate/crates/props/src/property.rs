// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use pmp_core::mask::{entry_aligned, entry_matches};
use pmp_core::{AccessRequest, Permissions, PmpState};

/// The five checker properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PropertyId {
    /// `r(addr, i) <=> r_lo(i) <= addr <= r_hi(i)`, checked against the mask comparator.
    RegionBoundsEq1,
    /// `r(addr, i) && a(addr, i) => addr + 2^size - 1 <= r_hi(i)`.
    AlignImplEq2,
    /// Low privilege, first matching entry decides: `O_p = cfg.p && a`.
    MainLowEq3,
    /// No entry matches: every bit equals `prv != low`.
    NoMatchEq4,
    /// High privilege, first matching entry decides: `O_p = (!cfg.l || cfg.p) && a`.
    HighPrivEq5,
}

impl PropertyId {
    pub const ALL: [PropertyId; 5] = [
        PropertyId::RegionBoundsEq1,
        PropertyId::AlignImplEq2,
        PropertyId::MainLowEq3,
        PropertyId::NoMatchEq4,
        PropertyId::HighPrivEq5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyId::RegionBoundsEq1 => "RegionBoundsEq1",
            PropertyId::AlignImplEq2 => "AlignImplEq2",
            PropertyId::MainLowEq3 => "MainLowEq3",
            PropertyId::NoMatchEq4 => "NoMatchEq4",
            PropertyId::HighPrivEq5 => "HighPrivEq5",
        }
    }

    /// Lower-case identifier used in file and assertion names.
    pub fn slug(self) -> &'static str {
        match self {
            PropertyId::RegionBoundsEq1 => "region_bounds_eq1",
            PropertyId::AlignImplEq2 => "align_impl_eq2",
            PropertyId::MainLowEq3 => "main_low_eq3",
            PropertyId::NoMatchEq4 => "no_match_eq4",
            PropertyId::HighPrivEq5 => "high_priv_eq5",
        }
    }

    fn short(self) -> &'static str {
        match self {
            PropertyId::RegionBoundsEq1 => "eq1",
            PropertyId::AlignImplEq2 => "eq2",
            PropertyId::MainLowEq3 => "eq3",
            PropertyId::NoMatchEq4 => "eq4",
            PropertyId::HighPrivEq5 => "eq5",
        }
    }

    pub const fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Accepts `MainLowEq3`, `main_low_eq3` or `Eq3`, case-insensitively.
impl FromStr for PropertyId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase();
        PropertyId::ALL
            .into_iter()
            .find(|p| key == p.short() || key == p.slug() || key == p.name().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown property `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Held,
    /// The property's guard was false on this case.
    Vacuous,
    Violated,
}

impl Outcome {
    pub fn passed(self) -> bool {
        self != Outcome::Violated
    }

    fn check(ok: bool) -> Self {
        if ok {
            Outcome::Held
        } else {
            Outcome::Violated
        }
    }
}

/// Evaluates property `p` on one concrete case, where `out` is what the
/// checker under test returned for `(state, req)`.
pub fn evaluate(p: PropertyId, state: &PmpState, req: &AccessRequest, out: Permissions) -> Outcome {
    let n = state.n_entries();
    let high = req.prv.is_high();
    let region = |i: usize| state.region_bounds(i).expect("index in range");
    match p {
        PropertyId::RegionBoundsEq1 => {
            if n == 0 {
                return Outcome::Vacuous;
            }
            Outcome::check((0..n).all(|i| region(i).contains(req.addr) == entry_matches(state, i, req.addr)))
        }
        PropertyId::AlignImplEq2 => {
            let mut guarded = false;
            for i in 0..n {
                let bounds = region(i);
                if !bounds.contains(req.addr) {
                    continue;
                }
                let spec_aligned = bounds.covers(req.addr, req.last_byte());
                let mask_aligned = entry_aligned(state, i, req.addr, req.size_exp);
                if spec_aligned || mask_aligned {
                    guarded = true;
                    if req.last_byte() > bounds.hi().expect("non-empty") {
                        return Outcome::Violated;
                    }
                }
            }
            if guarded {
                Outcome::Held
            } else {
                Outcome::Vacuous
            }
        }
        PropertyId::MainLowEq3 | PropertyId::HighPrivEq5 => {
            if high != (p == PropertyId::HighPrivEq5) {
                return Outcome::Vacuous;
            }
            let Some(i) = (0..n).find(|&i| region(i).contains(req.addr)) else {
                return Outcome::Vacuous;
            };
            let cfg = state.entries()[i].cfg;
            let a = region(i).covers(req.addr, req.last_byte());
            let bit = |p: bool| if high { (!cfg.l || p) && a } else { p && a };
            let expected = Permissions { r: bit(cfg.r), w: bit(cfg.w), x: bit(cfg.x) };
            Outcome::check(out == expected)
        }
        PropertyId::NoMatchEq4 => {
            if (0..n).any(|i| region(i).contains(req.addr)) {
                return Outcome::Vacuous;
            }
            Outcome::check(out == Permissions::uniform(high))
        }
    }
}

/// `true` when the property is satisfied, vacuously or not.
pub fn eval_property(p: PropertyId, state: &PmpState, req: &AccessRequest, out: Permissions) -> bool {
    evaluate(p, state, req, out).passed()
}
