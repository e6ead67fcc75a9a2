//! Fixed-magnetization configuration basis.
//!
//! States are bit masks (bit `s` set means spin up at site `s`) listed in
//! ascending integer order. Lookup splits a mask into a high and a low half:
//! the index is the offset of the high half plus the rank of the low half
//! among masks of the same popcount, so `index_of` costs two table reads.

use crate::{Error, Result};

/// Largest supported system.
pub const MAX_SITES: usize = 32;

/// Bit-encoded spin configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SpinConfig(pub u64);

impl SpinConfig {
    #[inline]
    pub fn is_up(self, site: usize) -> bool {
        (self.0 >> site) & 1 == 1
    }

    #[inline]
    pub fn up_count(self) -> u32 {
        self.0.count_ones()
    }

    /// Swap the spins at `i` and `j`.
    #[inline]
    pub fn exchanged(self, i: usize, j: usize) -> SpinConfig {
        let differ = ((self.0 >> i) ^ (self.0 >> j)) & 1;
        SpinConfig(self.0 ^ ((differ << i) | (differ << j)))
    }
}

#[derive(Debug, Clone)]
pub struct SectorBasis {
    sites: usize,
    two_sz: i32,
    states: Vec<SpinConfig>,
    lo_bits: u32,
    lo_rank: Vec<u32>,
    hi_offset: Vec<u64>,
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

impl SectorBasis {
    /// All configurations of `sites` spins with total `Sz = two_sz / 2`.
    pub fn build(sites: usize, two_sz: i32) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidSector { sites, two_sz, reason: reason.into() };
        if sites == 0 || sites > MAX_SITES {
            return Err(bad("site count must be in 1..=32"));
        }
        if !sites.is_multiple_of(2) {
            return Err(bad("site count must be even"));
        }
        if two_sz.unsigned_abs() as usize > sites || (sites as i32 + two_sz) % 2 != 0 {
            return Err(bad("infeasible magnetization"));
        }
        let ups = ((sites as i32 + two_sz) / 2) as u32;
        let dim = binomial(sites as u64, ups as u64) as usize;

        let mut states = Vec::with_capacity(dim);
        if ups == 0 {
            states.push(SpinConfig(0));
        } else {
            // Gosper's hack: next larger integer with the same popcount.
            let limit = 1u64 << sites;
            let mut x = (1u64 << ups) - 1;
            while x < limit {
                states.push(SpinConfig(x));
                let c = x & x.wrapping_neg();
                let r = x + c;
                x = (((r ^ x) >> 2) / c) | r;
            }
        }
        debug_assert_eq!(states.len(), dim);

        let lo_bits = (sites / 2) as u32;
        let hi_bits = sites as u32 - lo_bits;
        let mut per_count = vec![0u32; lo_bits as usize + 1];
        let lo_rank = (0..1u64 << lo_bits)
            .map(|lo| {
                let pc = lo.count_ones() as usize;
                let r = per_count[pc];
                per_count[pc] += 1;
                r
            })
            .collect();

        let mut offset = 0u64;
        let hi_offset = (0..1u64 << hi_bits)
            .map(|hi| {
                let here = offset;
                let pc = hi.count_ones();
                if pc <= ups && ups - pc <= lo_bits {
                    offset += binomial(lo_bits as u64, (ups - pc) as u64);
                }
                here
            })
            .collect();

        Ok(SectorBasis { sites, two_sz, states, lo_bits, lo_rank, hi_offset })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn two_sz(&self) -> i32 {
        self.two_sz
    }

    pub fn up_count(&self) -> u32 {
        ((self.sites as i32 + self.two_sz) / 2) as u32
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[SpinConfig] {
        &self.states
    }

    #[inline]
    pub fn state(&self, k: usize) -> SpinConfig {
        self.states[k]
    }

    /// Ordinal of `config`, or [`Error::NotInSector`].
    pub fn index_of(&self, config: SpinConfig) -> Result<usize> {
        if config.up_count() != self.up_count() || config.0 >> self.sites != 0 {
            return Err(Error::NotInSector(config.0));
        }
        Ok(self.index_unchecked(config))
    }

    /// Lookup without the sector check. Only valid for masks with the
    /// sector's popcount inside the first `sites` bits.
    #[inline]
    pub fn index_unchecked(&self, config: SpinConfig) -> usize {
        let lo = config.0 & ((1u64 << self.lo_bits) - 1);
        let hi = config.0 >> self.lo_bits;
        self.hi_offset[hi as usize] as usize + self.lo_rank[lo as usize] as usize
    }
}

/// Free-function form of [`SectorBasis::build`].
pub fn build_sector(sites: usize, two_sz: i32) -> Result<SectorBasis> {
    SectorBasis::build(sites, two_sz)
}
