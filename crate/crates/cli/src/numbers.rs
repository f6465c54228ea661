// SPDX-License-Identifier: Apache-2.0

use anyhow::{anyhow, bail, Result};

use pmp_core::{PmpEntry, PmpState};

/// Decimal, `0x` hex or `0b` binary; `_` separators allowed.
pub fn parse_u64(s: &str) -> Result<u64, String> {
    let clean = s.trim().replace('_', "");
    let lower = clean.to_ascii_lowercase();
    let parsed = if let Some(hex) = lower.strip_prefix("0x") {
        u64::from_str_radix(hex, 16)
    } else if let Some(bin) = lower.strip_prefix("0b") {
        u64::from_str_radix(bin, 2)
    } else {
        lower.parse()
    };
    parsed.map_err(|_| format!("malformed integer `{s}`"))
}

/// Register file from parallel lists of cfg bytes and pmpaddr values.
pub fn build_state(paddr_bits: u32, cfgs: &[u64], addrs: &[u64]) -> Result<PmpState> {
    if cfgs.len() != addrs.len() {
        bail!("{} --cfg value(s) but {} --addr value(s); give one pmpaddr per pmpcfg", cfgs.len(), addrs.len());
    }
    let entries = cfgs
        .iter()
        .zip(addrs)
        .map(|(&cfg, &addr)| {
            let cfg = u8::try_from(cfg).map_err(|_| anyhow!("cfg value {cfg:#x} does not fit in a byte"))?;
            Ok(PmpEntry::from_raw(cfg, addr))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PmpState::new(paddr_bits, entries)?)
}
