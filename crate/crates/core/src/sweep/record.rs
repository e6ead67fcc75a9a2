use std::io::Write;

use super::blocks::BlockSpec;
use crate::Result;

/// Observables at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub theta_over_pi: f64,
    pub e0: f64,
    /// `E1 − E0`; absent when the sector has a single state.
    pub gap: Option<f64>,
    pub c_rung: Option<f64>,
    pub c_leg: Option<f64>,
    pub c_diag: Option<f64>,
    /// Entropy of one rung, in bits.
    pub e_rung: f64,
    /// `dE_rung/dθ` (θ in radians), interior grid points only.
    pub der_dtheta: Option<f64>,
    /// One entropy per configured block, in configuration order.
    pub block_entropies: Vec<f64>,
    pub t_expect: f64,
    pub degenerate: bool,
}

/// Column names, with one `Ev_<family><size>` column per block.
pub fn csv_header(blocks: &[BlockSpec]) -> Vec<String> {
    let mut cols: Vec<String> =
        ["thetaOverPi", "E0", "gap", "C_rung", "C_leg", "C_diag", "E_rung2site", "dEr_dtheta"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    cols.extend(blocks.iter().map(|b| format!("Ev_{}{}", b.family.letter(), b.size)));
    cols.push("T_expect".into());
    cols.push("degenerate".into());
    cols
}

/// Twelve significant digits.
fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl SweepRecord {
    pub fn csv_fields(&self) -> Vec<String> {
        let mut f = vec![
            num(self.theta_over_pi),
            num(self.e0),
            opt(self.gap),
            opt(self.c_rung),
            opt(self.c_leg),
            opt(self.c_diag),
            num(self.e_rung),
            opt(self.der_dtheta),
        ];
        f.extend(self.block_entropies.iter().copied().map(num));
        f.push(num(self.t_expect));
        f.push(self.degenerate.to_string());
        f
    }
}

pub fn write_csv<W: Write>(mut out: W, blocks: &[BlockSpec], records: &[SweepRecord]) -> Result<()> {
    writeln!(out, "{}", csv_header(blocks).join(","))?;
    for r in records {
        writeln!(out, "{}", r.csv_fields().join(","))?;
    }
    out.flush()?;
    Ok(())
}
