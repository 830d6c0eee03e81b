//! Effective coupling factors g_a, g_b multiplying Z alpha in the radial
//! equations, built from a strength factor lambda and the nonlinear factor
//! f = 1 - eps_Dirac^n.

use std::f64::consts::PI;

use crate::constants::PhysicalConstants;
use crate::data::BetheLogTable;
use crate::dirac::nonlinear_factor;
use crate::error::{Error, Result};
use crate::states::QuantumState;

/// Diagonal coupling matrix: `g_a` scales Z alpha in the upper-component
/// equation, `g_b` in the lower one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingFactors {
    pub g_a: f64,
    pub g_b: f64,
}

impl CouplingFactors {
    /// Pure Coulomb coupling.
    pub const IDENTITY: Self = Self { g_a: 1.0, g_b: 1.0 };

    pub fn new(g_a: f64, g_b: f64) -> Result<Self> {
        if !(g_a.is_finite() && g_b.is_finite()) {
            return Err(Error::Domain(format!("non-finite coupling ({g_a}, {g_b})")));
        }
        Ok(Self { g_a, g_b })
    }

    pub fn product(&self) -> f64 {
        self.g_a * self.g_b
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

impl Default for CouplingFactors {
    fn default() -> Self {
        Self::IDENTITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaKind {
    Lamb,
    Hyperfine,
}

impl LambdaKind {
    fn name(self) -> &'static str {
        match self {
            LambdaKind::Lamb => "lamb",
            LambdaKind::Hyperfine => "hyperfine",
        }
    }
}

/// Which multiplicative corrections have been folded into a lambda factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AppliedCorrections {
    /// (1 + Z alpha) second-order binding factor.
    pub binding: bool,
    /// (1 + 3/2 (Z alpha)^2) relativistic hyperfine factor.
    pub breit: bool,
    pub user_delta: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaFactor {
    pub value: f64,
    pub kind: LambdaKind,
    pub corrections: AppliedCorrections,
}

impl LambdaFactor {
    fn plain(value: f64, kind: LambdaKind) -> Self {
        Self {
            value,
            kind,
            corrections: AppliedCorrections::default(),
        }
    }
}

/// Radiative strength for the Lamb interaction of one spinor component
/// with orbital number `l`.
///
/// s components (l = 0) use the Bethe logarithm L(n, 0) and the
/// `19/30 - 2 ln(Z alpha)` vertex term; all other components get the
/// anomalous-moment term `3/8 / (kappa (2|kappa| - 1))`.
pub fn lambda_lamb(
    n: u32,
    kappa: i32,
    l: u32,
    alpha: f64,
    z_alpha: f64,
    bethe: &BetheLogTable,
) -> Result<LambdaFactor> {
    let prefactor = 8.0 / (3.0 * PI) * alpha;
    let bracket = if l == 0 {
        if !(z_alpha > 0.0) {
            return Err(Error::Domain(format!(
                "s-state Lamb factor needs Z alpha > 0, got {z_alpha}"
            )));
        }
        bethe.lookup(n, 0)? + 19.0 / 30.0 - 2.0 * z_alpha.ln()
    } else {
        let k = f64::from(kappa);
        let two_abs_minus_one = f64::from(2 * kappa.unsigned_abs() - 1);
        3.0 / 8.0 / (k * two_abs_minus_one)
    };
    Ok(LambdaFactor::plain(prefactor * bracket, LambdaKind::Lamb))
}

/// Hyperfine strength `(2/3) g_p (m/M_p) (delta_{S,1} - 3 delta_{S,0}) delta_{l,0}`.
pub fn lambda_hyperfine(
    l: u32,
    total_spin: u8,
    constants: &PhysicalConstants,
) -> Result<LambdaFactor> {
    let spin_factor = match total_spin {
        1 => 1.0,
        0 => -3.0,
        s => return Err(Error::State(format!("total spin S = {s} is not 0 or 1"))),
    };
    let value = if l == 0 {
        2.0 / 3.0 * constants.g_p * constants.mass_ratio * spin_factor
    } else {
        0.0
    };
    Ok(LambdaFactor::plain(value, LambdaKind::Hyperfine))
}

/// `lambda -> (1 + Z alpha) lambda` for Lamb factors.
pub fn apply_binding_correction(lam: LambdaFactor, z_alpha: f64) -> Result<LambdaFactor> {
    if lam.kind != LambdaKind::Lamb {
        return Err(Error::WrongKind {
            correction: "binding",
            kind: lam.kind.name(),
        });
    }
    if lam.corrections.binding {
        return Err(Error::AlreadyApplied("binding"));
    }
    let mut out = lam;
    out.value *= 1.0 + z_alpha;
    out.corrections.binding = true;
    Ok(out)
}

/// `lambda -> (1 + 3/2 (Z alpha)^2 + user_delta) lambda` for hyperfine factors.
pub fn apply_hyperfine_corrections(
    lam: LambdaFactor,
    z_alpha: f64,
    user_delta: f64,
) -> Result<LambdaFactor> {
    if lam.kind != LambdaKind::Hyperfine {
        return Err(Error::WrongKind {
            correction: "breit",
            kind: lam.kind.name(),
        });
    }
    if lam.corrections.breit {
        return Err(Error::AlreadyApplied("breit"));
    }
    let mut out = lam;
    out.value *= 1.0 + 1.5 * z_alpha * z_alpha + user_delta;
    out.corrections.breit = true;
    out.corrections.user_delta = user_delta != 0.0;
    Ok(out)
}

/// `g = 1 - lambda f` for each component.
pub fn build_coupling(
    lam_a: &LambdaFactor,
    lam_b: &LambdaFactor,
    f: f64,
) -> Result<CouplingFactors> {
    if !(0.0..1.0).contains(&f) {
        return Err(Error::Domain(format!(
            "nonlinear factor {f} outside [0, 1)"
        )));
    }
    CouplingFactors::new(1.0 - lam_a.value * f, 1.0 - lam_b.value * f)
}

/// `g = g_lamb + g_hyp - I`, evaluated as `(g_lamb - 1) + g_hyp` so that an
/// identity on either side returns the other operand bit for bit.
pub fn combine_couplings(lamb: CouplingFactors, hyp: CouplingFactors) -> CouplingFactors {
    CouplingFactors {
        g_a: (lamb.g_a - 1.0) + hyp.g_a,
        g_b: (lamb.g_b - 1.0) + hyp.g_b,
    }
}

/// The interactions a level can be computed with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingModel {
    /// Plain Dirac-Coulomb, g = I.
    Dirac,
    Lamb {
        binding: bool,
    },
    Hyperfine {
        corrections: bool,
        user_delta: f64,
    },
    Combined {
        binding: bool,
        hyperfine_corrections: bool,
        user_delta: f64,
    },
}

impl CouplingModel {
    /// Coupling for `state` at `z_alpha`, with the nonlinear factor taken
    /// from the unperturbed Dirac level.
    pub fn coupling(
        &self,
        state: &QuantumState,
        z_alpha: f64,
        constants: &PhysicalConstants,
        bethe: &BetheLogTable,
    ) -> Result<CouplingFactors> {
        let f = nonlinear_factor(state, z_alpha)?;
        self.coupling_with_factor(state, z_alpha, f, constants, bethe)
    }

    /// Same as [`coupling`](Self::coupling) with an explicit nonlinear factor.
    pub fn coupling_with_factor(
        &self,
        state: &QuantumState,
        z_alpha: f64,
        f: f64,
        constants: &PhysicalConstants,
        bethe: &BetheLogTable,
    ) -> Result<CouplingFactors> {
        match *self {
            CouplingModel::Dirac => Ok(CouplingFactors::IDENTITY),
            CouplingModel::Lamb { binding } => {
                lamb_coupling(state, z_alpha, f, binding, constants, bethe)
            }
            CouplingModel::Hyperfine {
                corrections,
                user_delta,
            } => hyperfine_coupling(state, z_alpha, f, corrections, user_delta, constants),
            CouplingModel::Combined {
                binding,
                hyperfine_corrections,
                user_delta,
            } => {
                let lamb = lamb_coupling(state, z_alpha, f, binding, constants, bethe)?;
                let hyp = hyperfine_coupling(
                    state,
                    z_alpha,
                    f,
                    hyperfine_corrections,
                    user_delta,
                    constants,
                )?;
                Ok(combine_couplings(lamb, hyp))
            }
        }
    }
}

fn lamb_coupling(
    state: &QuantumState,
    z_alpha: f64,
    f: f64,
    binding: bool,
    constants: &PhysicalConstants,
    bethe: &BetheLogTable,
) -> Result<CouplingFactors> {
    let lam = |l| {
        let plain = lambda_lamb(state.n(), state.kappa(), l, constants.alpha, z_alpha, bethe)?;
        if binding {
            apply_binding_correction(plain, z_alpha)
        } else {
            Ok(plain)
        }
    };
    build_coupling(&lam(state.l_a())?, &lam(state.l_b())?, f)
}

fn hyperfine_coupling(
    state: &QuantumState,
    z_alpha: f64,
    f: f64,
    corrections: bool,
    user_delta: f64,
    constants: &PhysicalConstants,
) -> Result<CouplingFactors> {
    let spin = state.total_spin().ok_or_else(|| {
        Error::State(format!(
            "hyperfine coupling for {state} needs a total spin S"
        ))
    })?;
    let lam = |l| {
        let plain = lambda_hyperfine(l, spin, constants)?;
        if corrections {
            apply_hyperfine_corrections(plain, z_alpha, user_delta)
        } else {
            Ok(plain)
        }
    };
    build_coupling(&lam(state.l_a())?, &lam(state.l_b())?, f)
}
