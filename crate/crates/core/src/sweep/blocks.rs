use std::fmt;
use std::str::FromStr;

use crate::lattice::LadderSpec;
use crate::{Error, Result};

/// Ways of growing a block on the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockFamily {
    /// A: both legs of the contiguous rungs `1..=l/2`.
    Single,
    /// B: both legs of every other rung, `1, 3, …, l−1`.
    Stripe,
    /// C: a staircase, leg 1 on odd rungs and leg 2 on even rungs `1..=l`.
    Zigzag,
    /// D: leg 1 of rungs `1..=l`.
    OneLeg,
}

impl BlockFamily {
    pub fn letter(self) -> char {
        match self {
            BlockFamily::Single => 'A',
            BlockFamily::Stripe => 'B',
            BlockFamily::Zigzag => 'C',
            BlockFamily::OneLeg => 'D',
        }
    }

    pub fn all() -> [BlockFamily; 4] {
        [BlockFamily::Single, BlockFamily::Stripe, BlockFamily::Zigzag, BlockFamily::OneLeg]
    }
}

impl FromStr for BlockFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" | "SINGLE" => Ok(BlockFamily::Single),
            "B" | "STRIPE" => Ok(BlockFamily::Stripe),
            "C" | "ZIGZAG" => Ok(BlockFamily::Zigzag),
            "D" | "ONELEG" | "ONE-LEG" => Ok(BlockFamily::OneLeg),
            other => Err(Error::InvalidBlock(format!("unknown block family `{other}`"))),
        }
    }
}

/// A block family together with a size in sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockSpec {
    pub family: BlockFamily,
    pub size: usize,
}

impl BlockSpec {
    pub fn new(family: BlockFamily, size: usize) -> Self {
        BlockSpec { family, size }
    }

    pub fn sites(&self, spec: &LadderSpec) -> Result<Vec<usize>> {
        block_sites(self.family, self.size, spec)
    }

    /// Parse a comma-separated list such as `A:4,B:2,D:3`.
    pub fn parse_list(s: &str) -> Result<Vec<BlockSpec>> {
        s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
    }
}

impl fmt::Display for BlockSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family.letter(), self.size)
    }
}

impl FromStr for BlockSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (fam, size) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidBlock(format!("expected FAMILY:SIZE, got `{s}`")))?;
        let size = size
            .trim()
            .parse()
            .map_err(|_| Error::InvalidBlock(format!("bad block size in `{s}`")))?;
        Ok(BlockSpec { family: fam.parse()?, size })
    }
}

pub fn block_sites(family: BlockFamily, l: usize, spec: &LadderSpec) -> Result<Vec<usize>> {
    let rungs = spec.rungs();
    let n = spec.sites();
    let reject = |why: &str| Err(Error::InvalidBlock(format!("{}:{l} on {rungs} rungs: {why}", family.letter())));
    match family {
        BlockFamily::Single => {
            if !l.is_multiple_of(2) || l < 2 || l > n / 2 {
                return reject("needs even size in 2..=N/2");
            }
            Ok((1..=l / 2).flat_map(|i| [spec.site(1, i), spec.site(2, i)]).collect())
        }
        BlockFamily::Stripe => {
            if !l.is_multiple_of(2) || l < 2 || l / 2 > rungs.div_ceil(2) {
                return reject("needs even size with l/2 <= ceil(L/2)");
            }
            Ok((0..l / 2).map(|m| 2 * m + 1).flat_map(|i| [spec.site(1, i), spec.site(2, i)]).collect())
        }
        BlockFamily::Zigzag => {
            if l < 1 || l > rungs {
                return reject("needs size in 1..=L");
            }
            Ok((1..=l).map(|i| spec.site(if i % 2 == 1 { 1 } else { 2 }, i)).collect())
        }
        BlockFamily::OneLeg => {
            if l < 1 || l > rungs {
                return reject("needs size in 1..=L");
            }
            Ok((1..=l).map(|i| spec.site(1, i)).collect())
        }
    }
}

/// Bonds with exactly one end inside a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingBonds {
    pub rung: usize,
    pub leg: usize,
}

pub fn crossing_bonds(sites: &[usize], spec: &LadderSpec) -> CrossingBonds {
    let inside = |s: usize| sites.contains(&s);
    let crosses = |&(i, j): &(usize, usize)| inside(i) != inside(j);
    CrossingBonds {
        rung: spec.rung_bonds().iter().filter(|b| crosses(b)).count(),
        leg: spec.leg_bonds().iter().filter(|b| crosses(b)).count(),
    }
}
