// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::state::Permissions;

const CFG_R: u8 = 1 << 0;
const CFG_W: u8 = 1 << 1;
const CFG_X: u8 = 1 << 2;
const CFG_A_SHIFT: u8 = 3;
const CFG_A_MASK: u8 = 0b11;
const CFG_L: u8 = 1 << 7;

/// Address-matching mode, pmpcfg bits [4:3].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum AddrMode {
    Off = 0,
    Tor = 1,
    Na4 = 2,
    Napot = 3,
}

impl AddrMode {
    pub const ALL: [AddrMode; 4] = [AddrMode::Off, AddrMode::Tor, AddrMode::Na4, AddrMode::Napot];

    pub const fn from_bits(bits: u8) -> Self {
        match bits & CFG_A_MASK {
            0 => AddrMode::Off,
            1 => AddrMode::Tor,
            2 => AddrMode::Na4,
            _ => AddrMode::Napot,
        }
    }

    pub const fn bits(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for AddrMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AddrMode::Off => "OFF",
            AddrMode::Tor => "TOR",
            AddrMode::Na4 => "NA4",
            AddrMode::Napot => "NAPOT",
        })
    }
}

impl FromStr for AddrMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "OFF" => Ok(AddrMode::Off),
            "TOR" => Ok(AddrMode::Tor),
            "NA4" => Ok(AddrMode::Na4),
            "NAPOT" => Ok(AddrMode::Napot),
            _ => Err(format!("unknown addressing mode `{s}`")),
        }
    }
}

/// Decoded pmpcfg byte.
///
/// Layout: bit 7 = L, bits [4:3] = A, bit 2 = X, bit 1 = W, bit 0 = R.
/// Bits 5 and 6 are reserved; they are dropped on decode and written as zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PmpCfg {
    pub l: bool,
    pub mode: AddrMode,
    pub x: bool,
    pub w: bool,
    pub r: bool,
}

impl PmpCfg {
    pub const OFF: PmpCfg = PmpCfg::new(AddrMode::Off, Permissions::NONE, false);

    pub const fn new(mode: AddrMode, perms: Permissions, locked: bool) -> Self {
        PmpCfg { l: locked, mode, x: perms.x, w: perms.w, r: perms.r }
    }

    pub const fn decode(raw: u8) -> Self {
        PmpCfg {
            l: raw & CFG_L != 0,
            mode: AddrMode::from_bits(raw >> CFG_A_SHIFT),
            x: raw & CFG_X != 0,
            w: raw & CFG_W != 0,
            r: raw & CFG_R != 0,
        }
    }

    pub const fn encode(self) -> u8 {
        (if self.l { CFG_L } else { 0 })
            | (self.mode.bits() << CFG_A_SHIFT)
            | (if self.x { CFG_X } else { 0 })
            | (if self.w { CFG_W } else { 0 })
            | (if self.r { CFG_R } else { 0 })
    }

    pub const fn permissions(self) -> Permissions {
        Permissions { r: self.r, w: self.w, x: self.x }
    }

    pub const fn with_permissions(self, perms: Permissions) -> Self {
        PmpCfg { r: perms.r, w: perms.w, x: perms.x, ..self }
    }

    pub const fn with_mode(self, mode: AddrMode) -> Self {
        PmpCfg { mode, ..self }
    }
}

impl Default for PmpCfg {
    fn default() -> Self {
        PmpCfg::OFF
    }
}

impl From<u8> for PmpCfg {
    fn from(raw: u8) -> Self {
        PmpCfg::decode(raw)
    }
}

impl From<PmpCfg> for u8 {
    fn from(cfg: PmpCfg) -> Self {
        cfg.encode()
    }
}

pub fn decode_cfg(raw: u8) -> PmpCfg {
    PmpCfg::decode(raw)
}

pub fn encode_cfg(cfg: PmpCfg) -> u8 {
    cfg.encode()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bit positions written out as a table and sliced independently of the
    /// decoder's constants.
    fn slice(raw: u8) -> (bool, u8, bool, bool, bool) {
        let bit = |n: u32| (raw >> n) & 1 == 1;
        let mode = ((raw >> 4) & 1) << 1 | ((raw >> 3) & 1);
        (bit(7), mode, bit(2), bit(1), bit(0))
    }

    #[test]
    fn decode_matches_bit_slicing() {
        for raw in 0..=u8::MAX {
            let (l, mode, x, w, r) = slice(raw);
            let cfg = decode_cfg(raw);
            assert_eq!((cfg.l, cfg.mode.bits(), cfg.x, cfg.w, cfg.r), (l, mode, x, w, r));
        }
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_cfg(0x00), PmpCfg { l: false, mode: AddrMode::Off, x: false, w: false, r: false });
        assert_eq!(decode_cfg(0x9F), PmpCfg { l: true, mode: AddrMode::Napot, x: true, w: true, r: true });
        assert_eq!(decode_cfg(0x0B), PmpCfg { l: false, mode: AddrMode::Tor, x: false, w: true, r: true });
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode_cfg(PmpCfg::OFF), 0x00);
        let all = PmpCfg { l: true, mode: AddrMode::Napot, x: true, w: true, r: true };
        assert_eq!(encode_cfg(all), 0x9F);
    }

    #[test]
    fn round_trip_clears_reserved_bits() {
        for raw in 0..=u8::MAX {
            assert_eq!(encode_cfg(decode_cfg(raw)), raw & !0x60);
            let cfg = decode_cfg(raw);
            assert_eq!(decode_cfg(encode_cfg(cfg)), cfg);
        }
    }

    #[test]
    fn mode_parse() {
        for mode in AddrMode::ALL {
            assert_eq!(mode.to_string().parse::<AddrMode>(), Ok(mode));
        }
        assert!("napot4".parse::<AddrMode>().is_err());
    }
}
