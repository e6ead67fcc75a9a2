use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use super::analysis::central_difference;
use super::blocks::BlockSpec;
use super::record::SweepRecord;
use crate::basis::SectorBasis;
use crate::eigensolver::{lowest_eigenpairs, EigenResult, SolverConfig};
use crate::entanglement::{expectation_t, pair_concurrence, reduced_density_matrix, von_neumann_entropy};
use crate::hamiltonian::{LadderHamiltonian, StateVector};
use crate::lattice::{Couplings, LadderSpec};
use crate::{Error, Result};

/// θ/π range with a non-degenerate finite-size ground state.
pub const UNIQUENESS_WINDOW: (f64, f64) = (-0.40, 0.95);

const GRID_EPS: f64 = 1e-9;

pub fn in_uniqueness_window(theta_over_pi: f64) -> bool {
    theta_over_pi >= UNIQUENESS_WINDOW.0 - GRID_EPS && theta_over_pi <= UNIQUENESS_WINDOW.1 + GRID_EPS
}

/// Which pair concurrences to record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairSelection {
    pub rung: bool,
    pub leg: bool,
    pub diag: bool,
}

impl Default for PairSelection {
    fn default() -> Self {
        PairSelection { rung: true, leg: true, diag: true }
    }
}

impl std::str::FromStr for PairSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut sel = PairSelection { rung: false, leg: false, diag: false };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.to_ascii_lowercase().as_str() {
                "rung" => sel.rung = true,
                "leg" => sel.leg = true,
                "diag" | "diagonal" => sel.diag = true,
                other => return Err(Error::OutOfRange(format!("unknown pair kind `{other}`"))),
            }
        }
        Ok(sel)
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub spec: LadderSpec,
    /// Grid bounds and step, in units of π.
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_step: f64,
    pub blocks: Vec<BlockSpec>,
    pub pairs: PairSelection,
    pub two_sz: i32,
    pub solver: SolverConfig,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    pub allow_degenerate: bool,
}

impl SweepConfig {
    pub fn new(spec: LadderSpec) -> Self {
        SweepConfig {
            spec,
            theta_min: UNIQUENESS_WINDOW.0,
            theta_max: UNIQUENESS_WINDOW.1,
            theta_step: 0.005,
            blocks: Vec::new(),
            pairs: PairSelection::default(),
            two_sz: 0,
            solver: SolverConfig::default(),
            workers: None,
            allow_degenerate: false,
        }
    }
}

/// `min, min + step, …` up to `max` inclusive (within rounding).
pub fn theta_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !min.is_finite() || !max.is_finite() || max < min {
        return Err(Error::OutOfRange(format!("bad grid [{min}, {max}] step {step}")));
    }
    let count = ((max - min) / step + GRID_EPS).floor() as usize + 1;
    Ok((0..count).map(|i| min + i as f64 * step).collect())
}

/// Ground state and observables at one angle.
#[derive(Debug, Clone)]
pub struct PointSolution {
    pub record: SweepRecord,
    pub eigen: EigenResult,
    pub ground_state: StateVector,
}

fn solve_with_basis(config: &SweepConfig, basis: &Arc<SectorBasis>, theta_over_pi: f64) -> Result<PointSolution> {
    let spec = &config.spec;
    let ham = LadderHamiltonian::new(*spec, Couplings::from_theta(theta_over_pi * PI), basis.clone())?;
    let solver = SolverConfig { k: config.solver.k.min(basis.dim()).max(1), ..config.solver.clone() };
    let eigen = lowest_eigenpairs(&ham, &solver)
        .map_err(|e| Error::SweepPoint { theta_over_pi, source: Box::new(e) })?;
    let psi = StateVector::new(basis.clone(), eigen.vectors[0].clone())?;

    let site = |leg, rung| spec.site(leg, rung);
    let pair = |on: bool, i: usize, j: usize| -> Result<Option<f64>> {
        if on {
            pair_concurrence(&psi, i, j).map(Some)
        } else {
            Ok(None)
        }
    };
    let c_rung = pair(config.pairs.rung, site(1, 1), site(2, 1))?;
    let c_leg = pair(config.pairs.leg, site(1, 1), site(1, 2))?;
    let c_diag = pair(config.pairs.diag, site(1, 1), site(2, 2))?;
    let e_rung = von_neumann_entropy(&reduced_density_matrix(&psi, &[site(1, 1), site(2, 1)])?);
    let block_entropies = config
        .blocks
        .iter()
        .map(|b| Ok(von_neumann_entropy(&reduced_density_matrix(&psi, &b.sites(spec)?)?)))
        .collect::<Result<Vec<f64>>>()?;
    let t_expect = expectation_t(&psi, spec);

    let record = SweepRecord {
        theta_over_pi,
        e0: eigen.energies[0],
        gap: eigen.gap(),
        c_rung,
        c_leg,
        c_diag,
        e_rung,
        der_dtheta: None,
        block_entropies,
        t_expect,
        degenerate: eigen.degenerate || !in_uniqueness_window(theta_over_pi),
    };
    Ok(PointSolution { record, eigen, ground_state: psi })
}

/// Solve a single angle `theta_over_pi · π`.
pub fn solve_point(config: &SweepConfig, theta_over_pi: f64) -> Result<PointSolution> {
    let basis = Arc::new(SectorBasis::build(config.spec.sites(), config.two_sz)?);
    solve_with_basis(config, &basis, theta_over_pi)
}

/// Evaluate every grid point and attach central-difference rung-entropy
/// derivatives at interior points. Output order follows the grid.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    let grid = theta_grid(config.theta_min, config.theta_max, config.theta_step)?;
    if !config.allow_degenerate {
        if let Some(&t) = grid.iter().find(|&&t| !in_uniqueness_window(t)) {
            return Err(Error::OutOfRange(format!(
                "theta/pi = {t} lies outside [{}, {}]; pass allow_degenerate to include it",
                UNIQUENESS_WINDOW.0, UNIQUENESS_WINDOW.1
            )));
        }
    }
    for b in &config.blocks {
        b.sites(&config.spec)?;
    }
    let basis = Arc::new(SectorBasis::build(config.spec.sites(), config.two_sz)?);
    let solve_all = || -> Result<Vec<SweepRecord>> {
        grid.par_iter().map(|&t| solve_with_basis(config, &basis, t).map(|p| p.record)).collect()
    };
    let mut records = match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::OutOfRange(format!("worker pool: {e}")))?
            .install(solve_all)?,
        None => solve_all()?,
    };
    let e_rung: Vec<f64> = records.iter().map(|r| r.e_rung).collect();
    for (r, d) in records.iter_mut().zip(central_difference(&e_rung, config.theta_step * PI)) {
        r.der_dtheta = d;
    }
    Ok(records)
}
