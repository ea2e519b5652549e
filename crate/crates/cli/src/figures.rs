//! CSV series for the extensibility and measure comparison plots.
//!
//! All columns use `h(ρ) = √(2(1 − tr ρ²))` and the half-sum genuine
//! measure; `E(AB)` is the two-qubit concurrence.

use anyhow::{bail, Result};
use pwent::extensibility::{canonical_purification, e_ext};
use pwent::measures::{bipartite_mixed_e, gpwem_gem_pure, pwem_bipartition, pwem_gem_pure, BipartitionVariant, MeasureConfig};
use pwent::states::{fig1_state, fig2a_state, fig2b_state};
use pwent::{linear_entropy, DensityMatrix};

use crate::report::fmt_sig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    Fig1,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
}

pub const MIN_POINTS: usize = 11;

pub fn grid(points: usize) -> Vec<f64> {
    (0..points).map(|i| i as f64 / (points - 1) as f64).collect()
}

fn row(values: &[f64]) -> String {
    values.iter().map(|&v| fmt_sig(v)).collect::<Vec<_>>().join(",")
}

fn family(id: FigureId, p: f64) -> Result<DensityMatrix> {
    Ok(match id {
        FigureId::Fig2a | FigureId::Fig3a => fig2a_state(p)?,
        _ => fig2b_state(p)?,
    })
}

/// The configuration string printed alongside every series.
pub fn provenance(id: FigureId) -> String {
    format!("{id:?}: {}; E(AB)=concurrence", MeasureConfig::figure().describe()).to_lowercase()
}

pub fn csv(id: FigureId, points: usize) -> Result<String> {
    if points < MIN_POINTS {
        bail!("resolution must be at least {MIN_POINTS} points per axis, got {points}");
    }
    let cfg = MeasureConfig::figure();
    let mut lines = Vec::new();
    match id {
        FigureId::Fig1 => {
            lines.push("p,t,S_L(AB),E(AB),E_ext".to_string());
            for p in grid(points) {
                for t in grid(points) {
                    let rho = fig1_state(p, t)?;
                    let e = bipartite_mixed_e(&rho, &cfg)?;
                    lines.push(row(&[p, t, linear_entropy(&rho), e, e_ext(&rho, &cfg)]));
                }
            }
        }
        FigureId::Fig2a | FigureId::Fig2b => {
            lines.push("p,S_L(AB),E(AB),E_ext".to_string());
            for p in grid(points) {
                let rho = family(id, p)?;
                let e = bipartite_mixed_e(&rho, &cfg)?;
                lines.push(row(&[p, linear_entropy(&rho), e, e_ext(&rho, &cfg)]));
            }
        }
        FigureId::Fig3a | FigureId::Fig3b => {
            lines.push("p,E^AB,E_g^AB,E_min^AB,E(AB),E_ext".to_string());
            let ab = [0, 1];
            for p in grid(points) {
                let rho = family(id, p)?;
                let psi = canonical_purification(&rho).state;
                lines.push(row(&[
                    p,
                    pwem_gem_pure(&psi, &ab, &cfg)?,
                    gpwem_gem_pure(&psi, &ab, &cfg)?,
                    pwem_bipartition(&psi, &ab, cfg.h, BipartitionVariant::Min)?,
                    bipartite_mixed_e(&rho, &cfg)?,
                    e_ext(&rho, &cfg),
                ]));
            }
        }
    }
    let mut out = lines.join("\n");
    out.push('\n');
    Ok(out)
}
