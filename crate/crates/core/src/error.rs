// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PmpError {
    #[error("entry index {index} out of range for {n_entries} entries")]
    IndexOutOfRange { index: usize, n_entries: usize },
    #[error("{0} PMP entries requested, at most 16 are supported")]
    TooManyEntries(usize),
    #[error("physical address width {0} outside supported range 3..=56")]
    AddrWidth(u32),
    #[error("pmpaddr value {value:#x} does not fit in {width} bits")]
    AddrRegTooWide { value: u64, width: u32 },
    #[error("address {addr:#x} does not fit in {paddr_bits} bits")]
    AddrTooWide { addr: u64, paddr_bits: u32 },
    #[error("access size exponent {0} outside 0..=3")]
    SizeExp(u8),
    #[error("unknown privilege `{0}`")]
    Privilege(String),
}
