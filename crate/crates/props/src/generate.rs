// SPDX-License-Identifier: Apache-2.0

use rand::Rng;

use pmp_core::{PmpEntry, PmpState, RegionBounds};

/// Share of sampled addresses placed within 8 bytes of a region boundary.
pub const BOUNDARY_BIAS_PERCENT: u32 = 25;

const BOUNDARY_SPREAD: i64 = 8;

/// Random register file. pmpaddr values are drawn from three shapes:
/// uniform, NAPOT-shaped with a random size, and derived from an earlier
/// entry so that regions nest or abut.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, paddr_bits: u32, n_entries: usize) -> PmpState {
    let reg_bits = paddr_bits - 2;
    let reg_mask = (1u64 << reg_bits) - 1;
    let mut regs: Vec<u64> = Vec::with_capacity(n_entries);
    for _ in 0..n_entries {
        let reg = match rng.gen_range(0..4) {
            0 => rng.gen_range(0..=reg_mask),
            1 => napot_shaped(rng.gen_range(0..=reg_mask), rng.gen_range(0..=reg_bits)),
            _ if regs.is_empty() => rng.gen_range(0..=reg_mask),
            2 => {
                let base = regs[rng.gen_range(0..regs.len())];
                napot_shaped(base, rng.gen_range(0..=reg_bits))
            }
            _ => {
                let base = regs[rng.gen_range(0..regs.len())] as i64;
                base.saturating_add(rng.gen_range(-4..=4)).clamp(0, reg_mask as i64) as u64
            }
        } & reg_mask;
        regs.push(reg);
    }
    let entries = regs.into_iter().map(|reg| PmpEntry::from_raw(rng.gen::<u8>() & !0x60, reg));
    PmpState::new(paddr_bits, entries).expect("generated entries are in range")
}

/// pmpaddr for the NAPOT region of size `2^(k+3)` containing `reg << 2`.
fn napot_shaped(reg: u64, k: u32) -> u64 {
    let low = (1u64 << k) - 1;
    (reg & !((low << 1) | 1)) | low
}

/// Uniform address, except that `BOUNDARY_BIAS_PERCENT` of draws land
/// within 8 bytes of the start or end of some non-empty region.
pub fn boundary_biased_addr<R: Rng + ?Sized>(rng: &mut R, state: &PmpState) -> u64 {
    let max = state.max_addr();
    if rng.gen_range(0..100) < BOUNDARY_BIAS_PERCENT {
        let ranges: Vec<(u64, u64)> = (0..state.n_entries())
            .filter_map(|i| match state.region_bounds(i) {
                Ok(RegionBounds::Range { lo, hi }) => Some((lo, hi)),
                _ => None,
            })
            .collect();
        if !ranges.is_empty() {
            let (lo, hi) = ranges[rng.gen_range(0..ranges.len())];
            let edge = if rng.gen() { lo } else { hi.saturating_add(1) };
            let offset = rng.gen_range(-BOUNDARY_SPREAD..=BOUNDARY_SPREAD);
            return (edge as i64).saturating_add(offset).clamp(0, max as i64) as u64;
        }
    }
    rng.gen_range(0..=max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn napot_shape() {
        assert_eq!(napot_shaped(0b1010_1010, 0), 0b1010_1010);
        assert_eq!(napot_shaped(0b1010_1010, 3), 0b1010_0111);
    }

    #[test]
    fn generated_values_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let s = random_state(&mut rng, 12, 8);
            assert_eq!(s.n_entries(), 8);
            for e in s.entries() {
                assert!(e.addr_reg <= s.addr_reg_mask());
                assert_eq!(e.cfg.encode() & 0x60, 0);
            }
            assert!(boundary_biased_addr(&mut rng, &s) <= s.max_addr());
        }
    }

    #[test]
    fn bias_hits_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_state(&mut rng, 32, 8);
        let near = (0..10_000)
            .filter(|_| {
                let a = boundary_biased_addr(&mut rng, &s);
                (0..s.n_entries()).any(|i| match s.region_bounds(i).unwrap() {
                    RegionBounds::Range { lo, hi } => a.abs_diff(lo) <= 8 || a.abs_diff(hi + 1) <= 8,
                    RegionBounds::Empty => false,
                })
            })
            .count();
        assert!(near >= 2000, "{near}");
    }
}
