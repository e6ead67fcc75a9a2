//! Ladder geometry: site numbering, couplings and the bond/plaquette lists.
//!
//! Sites are numbered rung-major with the leg as the low bit, so the two spins
//! of rung `i` sit at ids `2(i-1)` (leg 1) and `2(i-1)+1` (leg 2). Legs and
//! rungs are 1-based in the public API, matching the usual `S_{leg,rung}`
//! labels.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "periodic" | "pbc" => Ok(Boundary::Periodic),
            "open" | "obc" => Ok(Boundary::Open),
            other => Err(Error::InvalidLadder(format!("unknown boundary condition `{other}`"))),
        }
    }
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        })
    }
}

/// A two-leg ladder of `rungs` rungs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LadderSpec {
    rungs: usize,
    boundary: Boundary,
}

impl LadderSpec {
    /// Periodic rings need at least three rungs, otherwise the wrap-around
    /// leg bond duplicates the direct one. Open ladders may have a single rung.
    pub fn new(rungs: usize, boundary: Boundary) -> Result<Self> {
        match boundary {
            Boundary::Periodic if rungs < 3 => Err(Error::InvalidLadder(format!(
                "periodic ladder needs at least 3 rungs, got {rungs}"
            ))),
            Boundary::Open if rungs < 1 => Err(Error::InvalidLadder("ladder needs at least one rung".into())),
            _ if 2 * rungs > 64 => Err(Error::InvalidLadder(format!("{rungs} rungs exceed 64 sites"))),
            _ => Ok(LadderSpec { rungs, boundary }),
        }
    }

    pub fn periodic(rungs: usize) -> Result<Self> {
        Self::new(rungs, Boundary::Periodic)
    }

    pub fn open(rungs: usize) -> Result<Self> {
        Self::new(rungs, Boundary::Open)
    }

    pub fn rungs(&self) -> usize {
        self.rungs
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Total number of spins, `N = 2L`.
    pub fn sites(&self) -> usize {
        2 * self.rungs
    }

    /// Site id of `(leg, rung)`, both 1-based. Rungs wrap around modulo `L`.
    pub fn site(&self, leg: usize, rung: usize) -> usize {
        debug_assert!(leg == 1 || leg == 2, "leg must be 1 or 2");
        debug_assert!(rung >= 1, "rungs are 1-based");
        2 * ((rung - 1) % self.rungs) + (leg - 1)
    }

    /// Inverse of [`LadderSpec::site`]: `(leg, rung)`, 1-based.
    pub fn leg_rung(&self, site: usize) -> (usize, usize) {
        (site % 2 + 1, site / 2 + 1)
    }

    /// Number of plaquettes (and of leg bonds per leg).
    fn links(&self) -> usize {
        match self.boundary {
            Boundary::Periodic => self.rungs,
            Boundary::Open => self.rungs - 1,
        }
    }

    pub fn rung_bonds(&self) -> Vec<(usize, usize)> {
        (1..=self.rungs).map(|i| (self.site(1, i), self.site(2, i))).collect()
    }

    pub fn leg_bonds(&self) -> Vec<(usize, usize)> {
        let mut bonds = Vec::with_capacity(2 * self.links());
        for leg in 1..=2 {
            for i in 1..=self.links() {
                bonds.push((self.site(leg, i), self.site(leg, i + 1)));
            }
        }
        bonds
    }

    pub fn plaquettes(&self) -> Vec<Plaquette> {
        (1..=self.links())
            .map(|i| Plaquette {
                a: self.site(1, i),
                b: self.site(1, i + 1),
                c: self.site(2, i + 1),
                d: self.site(2, i),
            })
            .collect()
    }

    pub fn terms(&self) -> LadderTerms {
        LadderTerms {
            rung_bonds: self.rung_bonds(),
            leg_bonds: self.leg_bonds(),
            plaquettes: self.plaquettes(),
        }
    }
}

/// The index sets of the three sums in the Hamiltonian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderTerms {
    pub rung_bonds: Vec<(usize, usize)>,
    pub leg_bonds: Vec<(usize, usize)>,
    pub plaquettes: Vec<Plaquette>,
}

/// Rung, leg and plaquette lists for `spec`.
pub fn enumerate_terms(spec: &LadderSpec) -> LadderTerms {
    spec.terms()
}

/// Four sites of plaquette `i`, ordered upper-left, upper-right, lower-right,
/// lower-left: `a = (1,i)`, `b = (1,i+1)`, `c = (2,i+1)`, `d = (2,i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Plaquette {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl Plaquette {
    pub fn sites(&self) -> [usize; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Perimeter edges a-b, b-c, c-d, d-a.
    pub fn edges(&self) -> [(usize, usize); 4] {
        [(self.a, self.b), (self.b, self.c), (self.c, self.d), (self.d, self.a)]
    }
}

/// Leg exchange `jl`, rung exchange `jr` and ring exchange `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub jl: f64,
    pub jr: f64,
    pub k: f64,
}

impl Couplings {
    pub fn new(jl: f64, jr: f64, k: f64) -> Result<Self> {
        if jl.is_finite() && jr.is_finite() && k.is_finite() {
            Ok(Couplings { jl, jr, k })
        } else {
            Err(Error::OutOfRange(format!("non-finite couplings ({jl}, {jr}, {k})")))
        }
    }

    /// `jl = jr = cos(theta)`, `k = sin(theta)`.
    pub fn from_theta(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Couplings { jl: c, jr: c, k: s }
    }
}

pub fn couplings_from_theta(theta: f64) -> Couplings {
    Couplings::from_theta(theta)
}
