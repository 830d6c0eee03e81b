//! Lamb shift and hyperfine splitting in MHz, and comparison against
//! reference values.

use std::fmt;
use std::str::FromStr;

use crate::constants::PhysicalConstants;
use crate::coupling::{lambda_lamb, CouplingModel};
use crate::data::{BetheLogTable, Quantity, ReferenceRecord};
use crate::eigensolver::{solve_effective, EnergyLevel, Term};
use crate::error::{Error, Result};
use crate::states::QuantumState;

/// Order of the Lamb couplings: plain, or with the (1 + Z alpha) binding
/// factor that brings in alpha (Z alpha)^5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LambOrder {
    ZAlpha4,
    ZAlpha5,
}

impl LambOrder {
    pub fn label(self) -> &'static str {
        match self {
            LambOrder::ZAlpha4 => "alpha(Zalpha)^4",
            LambOrder::ZAlpha5 => "alpha(Zalpha)^5",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            LambOrder::ZAlpha4 => "zalpha4",
            LambOrder::ZAlpha5 => "zalpha5",
        }
    }
}

impl fmt::Display for LambOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for LambOrder {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "zalpha4" => Ok(LambOrder::ZAlpha4),
            "zalpha5" => Ok(LambOrder::ZAlpha5),
            other => Err(format!(
                "unknown order `{other}` (expected zalpha4 or zalpha5)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplittingKind {
    Lamb,
    Hyperfine,
}

impl SplittingKind {
    pub fn quantity(self) -> Quantity {
        match self {
            SplittingKind::Lamb => Quantity::LambShift,
            SplittingKind::Hyperfine => Quantity::HyperfineSplitting,
        }
    }
}

/// Energy difference between two levels, upper label minus lower label.
#[derive(Debug, Clone, PartialEq)]
pub struct SplittingResult {
    pub z: u32,
    pub n: u32,
    pub kind: SplittingKind,
    pub order_label: String,
    pub value_mhz: f64,
    pub components: [EnergyLevel; 2],
    /// Hyperfine values for Z > 1 extend the hydrogen model.
    pub extrapolated: bool,
}

impl SplittingResult {
    fn from_levels(
        z: u32,
        n: u32,
        kind: SplittingKind,
        order_label: &str,
        upper: EnergyLevel,
        lower: EnergyLevel,
        constants: &PhysicalConstants,
    ) -> Self {
        // eps_1 - eps_2 formed from deficits, which carry all the digits
        let value_mhz = to_mhz(lower.deficit - upper.deficit, constants);
        Self {
            z,
            n,
            kind,
            order_label: order_label.to_string(),
            value_mhz,
            components: [upper, lower],
            extrapolated: kind == SplittingKind::Hyperfine && z != 1,
        }
    }
}

/// Converts a difference in eps = E/mc^2 to MHz.
pub fn to_mhz(delta_epsilon: f64, constants: &PhysicalConstants) -> f64 {
    delta_epsilon * constants.mc2_ev * constants.ev_to_mhz
}

fn z_alpha(z: u32, constants: &PhysicalConstants) -> Result<f64> {
    if z == 0 {
        return Err(Error::Domain("Z must be at least 1".into()));
    }
    Ok(f64::from(z) * constants.alpha)
}

fn solve_model(
    state: &QuantumState,
    za: f64,
    model: CouplingModel,
    constants: &PhysicalConstants,
    bethe: &BetheLogTable,
) -> Result<EnergyLevel> {
    let g = model.coupling(state, za, constants, bethe)?;
    solve_effective(state, za, &g).map(|(level, _)| level)
}

/// E(ns_{1/2}) - E(np_{1/2}) with Lamb couplings.
pub fn lamb_shift(
    z: u32,
    n: u32,
    order: LambOrder,
    constants: &PhysicalConstants,
    bethe: &BetheLogTable,
) -> Result<SplittingResult> {
    if n < 2 {
        return Err(Error::Domain(format!("Lamb shift needs n >= 2, got {n}")));
    }
    let za = z_alpha(z, constants)?;
    let model = CouplingModel::Lamb {
        binding: order == LambOrder::ZAlpha5,
    };
    let s = solve_model(&QuantumState::s_half(n)?, za, model, constants, bethe)?;
    let p = solve_model(&QuantumState::p_half(n)?, za, model, constants, bethe)?;
    Ok(SplittingResult::from_levels(
        z,
        n,
        SplittingKind::Lamb,
        order.label(),
        s,
        p,
        constants,
    ))
}

/// E(ns_{1/2}, S=1) - E(ns_{1/2}, S=0) with hyperfine couplings.
pub fn hyperfine_splitting(
    z: u32,
    n: u32,
    constants: &PhysicalConstants,
    with_corrections: bool,
    user_delta: f64,
) -> Result<SplittingResult> {
    let za = z_alpha(z, constants)?;
    let model = CouplingModel::Hyperfine {
        corrections: with_corrections,
        user_delta,
    };
    // hyperfine couplings never read the Bethe table
    let bethe = BetheLogTable::default();
    let base = QuantumState::s_half(n)?;
    let triplet = solve_model(&base.with_spin(Some(1))?, za, model, constants, &bethe)?;
    let singlet = solve_model(&base.with_spin(Some(0))?, za, model, constants, &bethe)?;
    let label = if with_corrections {
        "alpha4+breit"
    } else {
        "alpha4"
    };
    Ok(SplittingResult::from_levels(
        z,
        n,
        SplittingKind::Hyperfine,
        label,
        triplet,
        singlet,
        constants,
    ))
}

/// Level with the summed Lamb and hyperfine couplings. The breakdown holds
/// the Dirac level, the Lamb-only and hyperfine-only shifts, and the cross
/// term left over.
pub fn combined_level(
    z: u32,
    state: &QuantumState,
    constants: &PhysicalConstants,
    bethe: &BetheLogTable,
) -> Result<EnergyLevel> {
    let za = z_alpha(z, constants)?;
    let lamb_model = CouplingModel::Lamb { binding: false };
    let hyp_model = CouplingModel::Hyperfine {
        corrections: false,
        user_delta: 0.0,
    };
    let combined_model = CouplingModel::Combined {
        binding: false,
        hyperfine_corrections: false,
        user_delta: 0.0,
    };
    let dirac = solve_model(state, za, CouplingModel::Dirac, constants, bethe)?;
    let lamb = solve_model(state, za, lamb_model, constants, bethe)?;
    let hyp = solve_model(state, za, hyp_model, constants, bethe)?;
    let mut level = solve_model(state, za, combined_model, constants, bethe)?;

    let lamb_shift = dirac.deficit - lamb.deficit;
    let hyp_shift = dirac.deficit - hyp.deficit;
    let cross = (dirac.deficit - level.deficit) - lamb_shift - hyp_shift;
    level.breakdown = vec![
        Term::new("dirac", -dirac.deficit),
        Term::new("lamb", lamb_shift),
        Term::new("hyperfine", hyp_shift),
        Term::new("cross", cross),
    ];
    if z != 1 {
        level.notes.push(format!(
            "hyperfine coupling at Z = {z} extrapolates the hydrogen model"
        ));
    }
    Ok(level)
}

/// One sample of the effective radiative potential: the Coulomb potential
/// per unit charge Z/q and its radiative part |lambda| Z/q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSample {
    pub n: u32,
    pub q: f64,
    pub coulomb: f64,
    pub radiative: f64,
}

/// |lambda_{n, kappa=-1, l_a=0}| Z/q on the given radii for each n.
pub fn radiative_potential_profile(
    z: u32,
    ns: &[u32],
    radii: &[f64],
    constants: &PhysicalConstants,
    bethe: &BetheLogTable,
) -> Result<Vec<PotentialSample>> {
    let za = z_alpha(z, constants)?;
    let mut out = Vec::with_capacity(ns.len() * radii.len());
    for &n in ns {
        let lam = lambda_lamb(n, -1, 0, constants.alpha, za, bethe)?
            .value
            .abs();
        for &q in radii {
            if !(q > 0.0) {
                return Err(Error::Domain(format!("radius must be positive, got {q}")));
            }
            let coulomb = f64::from(z) / q;
            out.push(PotentialSample {
                n,
                q,
                coulomb,
                radiative: lam * coulomb,
            });
        }
    }
    Ok(out)
}

/// `count` points spaced logarithmically on [lo, hi].
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi / lo).ln() / (count - 1) as f64;
            (0..count).map(|i| lo * (step * i as f64).exp()).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub result: SplittingResult,
    pub reference: Option<ReferenceRecord>,
    pub discrepancy_percent: Option<f64>,
}

pub fn discrepancy_percent(value: f64, reference: f64) -> f64 {
    100.0 * (value - reference).abs() / reference.abs()
}

/// Joins results with references on (Z, n, quantity). A result matching
/// several references yields one row per reference, in reference order;
/// one matching none yields a single row without a reference.
pub fn compare(results: &[SplittingResult], references: &[ReferenceRecord]) -> Vec<ComparisonRow> {
    let mut rows = Vec::new();
    for result in results {
        let quantity = result.kind.quantity();
        let mut matched = false;
        for reference in references
            .iter()
            .filter(|r| r.z == result.z && r.n == result.n && r.quantity == quantity)
        {
            matched = true;
            rows.push(ComparisonRow {
                result: result.clone(),
                reference: Some(reference.clone()),
                discrepancy_percent: Some(discrepancy_percent(
                    result.value_mhz,
                    reference.value_mhz,
                )),
            });
        }
        if !matched {
            rows.push(ComparisonRow {
                result: result.clone(),
                reference: None,
                discrepancy_percent: None,
            });
        }
    }
    rows
}
