//! `measure` subcommand: dispatch from measure ids to the library.

use anyhow::{bail, Result};
use pwent::extensibility::e_ext;
use pwent::measures::{
    geometric_pwem, gpwem_gem_pure, pwem_bipartition, pwem_gem_pure, pwem_negativity, relative_entropy_pwem_upper,
    roof_upper_bound, BipartitionVariant, GenuineForm, MeasureConfig, ReducedFunction, SeeSawBudget,
};
use pwent::state::subset_label;
use pwent::PureState;

use crate::report::ReportRow;
use crate::statefile::StateFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MeasureId {
    PwemGem,
    GpwemGem,
    PwMin,
    PwSum,
    PwGeo,
    NegMin,
    NegSum,
    NegGeo,
    GeoDistance,
    RelEntropyUb,
    EExt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum HArg {
    LinSq,
    LinSqrt,
    Vn,
}

impl From<HArg> for ReducedFunction {
    fn from(h: HArg) -> Self {
        match h {
            HArg::LinSq => ReducedFunction::LinSq,
            HArg::LinSqrt => ReducedFunction::LinSqrt,
            HArg::Vn => ReducedFunction::VonNeumann,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EgArg {
    Min,
    HalfSum,
}

impl From<EgArg> for GenuineForm {
    fn from(g: EgArg) -> Self {
        match g {
            EgArg::Min => GenuineForm::MinParties,
            EgArg::HalfSum => GenuineForm::HalfSum,
        }
    }
}

impl MeasureId {
    pub fn name(self) -> &'static str {
        match self {
            MeasureId::PwemGem => "pwem-gem",
            MeasureId::GpwemGem => "gpwem-gem",
            MeasureId::PwMin => "pw-min",
            MeasureId::PwSum => "pw-sum",
            MeasureId::PwGeo => "pw-geo",
            MeasureId::NegMin => "neg-min",
            MeasureId::NegSum => "neg-sum",
            MeasureId::NegGeo => "neg-geo",
            MeasureId::GeoDistance => "geo-distance",
            MeasureId::RelEntropyUb => "rel-entropy-ub",
            MeasureId::EExt => "e-ext",
        }
    }

    /// Configuration used when `--h` / `--eg` are not given: the table
    /// configuration for the pure-state measures, the figure configuration
    /// for the extensibility and the genuine half-sum measure.
    pub fn default_config(self) -> (ReducedFunction, GenuineForm) {
        match self {
            MeasureId::EExt => (ReducedFunction::LinSqrt, GenuineForm::HalfSum),
            MeasureId::GpwemGem => (ReducedFunction::LinSq, GenuineForm::HalfSum),
            _ => (ReducedFunction::LinSq, GenuineForm::MinParties),
        }
    }
}

pub struct MeasureRequest {
    pub id: MeasureId,
    pub designated: Vec<usize>,
    pub h: Option<ReducedFunction>,
    pub eg: Option<GenuineForm>,
    pub seed: u64,
}

fn variant(id: MeasureId) -> BipartitionVariant {
    match id {
        MeasureId::PwMin | MeasureId::NegMin => BipartitionVariant::Min,
        MeasureId::PwSum | MeasureId::NegSum => BipartitionVariant::Sum,
        _ => BipartitionVariant::Geo,
    }
}

pub fn run(state: &StateFile, req: &MeasureRequest) -> Result<ReportRow> {
    let (h0, g0) = req.id.default_config();
    let mut cfg = MeasureConfig::new(req.h.unwrap_or(h0), req.eg.unwrap_or(g0)).with_seed(req.seed);
    cfg.roof_budget.restarts = 1;
    let designated = &req.designated;
    let label = format!("{}[{}]", req.id.name(), subset_label(designated));
    let config = format!("{} seed={}", cfg.describe(), req.seed);

    // Pure-state measures extend to mixed inputs through the convex roof.
    let pure_or_roof = |f: &dyn Fn(&PureState) -> f64| -> Result<ReportRow> {
        Ok(match state {
            StateFile::Pure(psi) => ReportRow::new(&label, &config, f(psi)),
            StateFile::Mixed(rho) if rho.rank() == 1 => {
                let res = roof_upper_bound(rho, f, &cfg)?;
                ReportRow::new(&label, &config, res.value)
            }
            StateFile::Mixed(rho) => {
                let res = roof_upper_bound(rho, f, &cfg)?;
                ReportRow::new(&label, &config, res.value).note("upper bound")
            }
        })
    };

    match req.id {
        MeasureId::PwemGem => pure_or_roof(&|psi| pwem_gem_pure(psi, designated, &cfg).expect("validated designated set")),
        MeasureId::GpwemGem => pure_or_roof(&|psi| gpwem_gem_pure(psi, designated, &cfg).expect("validated designated set")),
        MeasureId::PwMin | MeasureId::PwSum | MeasureId::PwGeo => {
            let (h, v) = (cfg.h, variant(req.id));
            pure_or_roof(&|psi| pwem_bipartition(psi, designated, h, v).expect("validated designated set"))
        }
        MeasureId::NegMin | MeasureId::NegSum | MeasureId::NegGeo => {
            let value = pwem_negativity(&state.density(), designated, variant(req.id))?;
            Ok(ReportRow::new(&label, "negativity", value))
        }
        MeasureId::GeoDistance => {
            let Some(psi) = state.pure() else {
                bail!("geo-distance is defined for pure states only");
            };
            let budget = SeeSawBudget { seed: req.seed, ..SeeSawBudget::default() };
            let res = geometric_pwem(psi, designated, &budget)?;
            let note = format!("see-saw upper bound, best partition {}", res.partition.label());
            Ok(ReportRow::new(&label, format!("restarts={} seed={}", budget.restarts, req.seed), res.value).note(note))
        }
        MeasureId::RelEntropyUb => {
            let res = relative_entropy_pwem_upper(&state.density(), designated, &[])?;
            let best = res.best.unwrap_or_else(|| "none".into());
            let note = format!("upper bound over {} candidates, best: {best}", res.candidates_tried);
            Ok(ReportRow::new(&label, "log2", res.value).note(note))
        }
        MeasureId::EExt => {
            let value = e_ext(&state.density(), &cfg);
            Ok(ReportRow::new(req.id.name(), cfg.describe(), value))
        }
    }
}

/// Rejects designated sets that do not fit the measure.
pub fn check_designated(state: &StateFile, req: &MeasureRequest) -> Result<()> {
    if req.id == MeasureId::EExt {
        return Ok(());
    }
    pwent::states::check_designated_query(state.shape(), &req.designated)
        .map_err(|e| anyhow::anyhow!("incompatible designated set {}: {e}", subset_label(&req.designated)))
}
