//! Quantization condition of the effective problem and its expansions.
//!
//! With A = 2(s + n'), P = Za (g_a - g_b) and Q = Za (g_a + g_b) the
//! condition reads
//!
//! ```text
//! A sqrt(1 - eps^2) = P + Q eps,      P + Q eps > 0.
//! ```
//!
//! Writing eps = 1 - d and squaring gives
//! (A^2 + Q^2) d^2 - 2 (A^2 + Q^2 + PQ) d + 4 (Za g_a)^2 = 0,
//! which is solved for the deficit d directly so that no digits are lost
//! near eps = 1. A Brent search on the unsquared form serves as a check.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::constants::PhysicalConstants;
use crate::coupling::{CouplingFactors, CouplingModel};
use crate::data::BetheLogTable;
use crate::dirac::{factor_from_deficit, indicial_exponent, sommerfeld_deficit};
use crate::error::{Error, Result};
use crate::roots::brent;
use crate::states::QuantumState;

/// Closed-form and bracketed roots must agree to this.
pub const ROOT_AGREEMENT: f64 = 1e-12;
/// Largest relative mismatch of the unsquared condition accepted for a root.
pub const UNSQUARED_TOLERANCE: f64 = 1e-12;
/// Quadratic roots closer than this are flagged in the report.
pub const NEAR_DEGENERATE: f64 = 1e-6;

/// One labeled contribution to eps - 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub label: String,
    pub value: f64,
}

impl Term {
    pub fn new(label: impl Into<String>, value: f64) -> Self {
        Self {
            label: label.into(),
            value,
        }
    }
}

pub fn breakdown_sum(terms: &[Term]) -> f64 {
    terms.iter().map(|t| t.value).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLevel {
    pub epsilon: f64,
    /// 1 - epsilon, computed without cancellation.
    pub deficit: f64,
    pub state: QuantumState,
    pub z_alpha: f64,
    pub coupling: CouplingFactors,
    /// Contributions whose sum is epsilon - 1.
    pub breakdown: Vec<Term>,
    pub notes: Vec<String>,
}

impl EnergyLevel {
    pub fn term(&self, label: &str) -> Option<f64> {
        self.breakdown
            .iter()
            .find(|t| t.label == label)
            .map(|t| t.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub epsilon_closed_form: f64,
    pub epsilon_root_found: f64,
    /// Relative mismatch of the two sides of the unsquared condition.
    pub residual: f64,
    pub iterations: usize,
    /// Both quadratic roots lie within [`NEAR_DEGENERATE`] of each other,
    /// so the continuity rule picking between them is fragile.
    pub near_degenerate: bool,
}

struct Condition {
    a: f64,
    p: f64,
    q: f64,
    za_ga: f64,
}

impl Condition {
    fn new(state: &QuantumState, z_alpha: f64, g: &CouplingFactors) -> Result<Self> {
        let s = indicial_exponent(state.kappa(), z_alpha, g)?;
        Ok(Self {
            a: 2.0 * (s + f64::from(state.radial_order())),
            p: z_alpha * (g.g_a - g.g_b),
            q: z_alpha * (g.g_a + g.g_b),
            za_ga: z_alpha * g.g_a,
        })
    }

    /// Both sides of the unsquared condition at deficit `d`.
    fn sides(&self, d: f64) -> (f64, f64) {
        let lhs = self.a * (d * (2.0 - d)).sqrt();
        let rhs = 2.0 * self.za_ga - self.q * d;
        (lhs, rhs)
    }

    /// Roots of the squared condition in d, smaller first.
    fn quadratic_roots(&self) -> Option<(f64, f64)> {
        let aa = self.a * self.a + self.q * self.q;
        let bb = aa + self.p * self.q;
        let cc = 4.0 * self.za_ga * self.za_ga;
        let disc = bb * bb - aa * cc;
        if disc < 0.0 || aa == 0.0 {
            return None;
        }
        let root = disc.sqrt();
        let big = bb + root;
        if big == 0.0 {
            return Some((0.0, 0.0));
        }
        Some((cc / big, big / aa))
    }
}

/// Solves for the level of `state` with coupling `g`.
pub fn solve_effective(
    state: &QuantumState,
    z_alpha: f64,
    g: &CouplingFactors,
) -> Result<(EnergyLevel, SolveReport)> {
    if !(z_alpha > 0.0) {
        return Err(Error::Domain(format!(
            "Z alpha must be positive, got {z_alpha}"
        )));
    }
    let cond = Condition::new(state, z_alpha, g)?;
    let dirac_deficit = sommerfeld_deficit(state, z_alpha)?;
    let (d_small, d_large) = cond.quadratic_roots().ok_or(Error::NoPhysicalRoot)?;

    // the root continuous in g around g = I
    let deficit = if (d_small - dirac_deficit).abs() <= (d_large - dirac_deficit).abs() {
        d_small
    } else {
        d_large
    };
    let (lhs, rhs) = cond.sides(deficit);
    if !(rhs > 0.0 && lhs > 0.0) {
        return Err(Error::NoPhysicalRoot);
    }
    let residual = (lhs - rhs).abs() / rhs;
    if residual > UNSQUARED_TOLERANCE {
        return Err(Error::NoPhysicalRoot);
    }

    let bracket = brent(
        |d| {
            let (l, r) = cond.sides(d);
            l - r
        },
        0.0,
        1.0,
        1e-17 + 1e-15 * deficit,
        200,
    )?;
    let epsilon = 1.0 - deficit;
    let epsilon_root = 1.0 - bracket.x;
    let diff = (epsilon - epsilon_root).abs();
    if diff > ROOT_AGREEMENT {
        return Err(Error::RootDisagreement {
            closed_form: epsilon,
            bracketed: epsilon_root,
            diff,
        });
    }

    let report = SolveReport {
        epsilon_closed_form: epsilon,
        epsilon_root_found: epsilon_root,
        residual,
        iterations: bracket.iterations,
        near_degenerate: (d_large - d_small).abs() < NEAR_DEGENERATE,
    };
    let level = EnergyLevel {
        epsilon,
        deficit,
        state: *state,
        z_alpha,
        coupling: *g,
        breakdown: solved_breakdown(state, z_alpha, dirac_deficit, deficit),
        notes: Vec::new(),
    };
    Ok((level, report))
}

/// Leading Dirac orders, the rest of the Dirac level, and the coupling shift.
fn solved_breakdown(
    state: &QuantumState,
    z_alpha: f64,
    dirac_deficit: f64,
    deficit: f64,
) -> Vec<Term> {
    let [alpha2, alpha4] = dirac_terms(state, z_alpha);
    vec![
        Term::new("alpha2", alpha2),
        Term::new("alpha4_dirac", alpha4),
        Term::new("dirac_higher", -dirac_deficit - alpha2 - alpha4),
        Term::new("coupling_shift", dirac_deficit - deficit),
    ]
}

fn dirac_terms(state: &QuantumState, z_alpha: f64) -> [f64; 2] {
    let n = f64::from(state.n());
    let k = f64::from(state.abs_kappa());
    let z2 = z_alpha * z_alpha;
    [
        -z2 / (2.0 * n * n),
        (3.0 / (8.0 * n.powi(4)) - 1.0 / (2.0 * n.powi(3) * k)) * z2 * z2,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionKind {
    Dirac,
    Lamb,
    Hyperfine,
    Combined,
}

/// Term-by-term evaluation of the order expansion of eps - 1:
///
/// * `alpha2` = -(Za)^2 / 2n^2
/// * `alpha4_dirac` = (3/8n^4 - 1/2n^3|kappa|) (Za)^4
/// * `alpha4_hyperfine` = (1/3n^3) g_p (m/M_p) (d_{S,1} - 3 d_{S,0}) d_{kappa,-1} (Za)^4
/// * `alpha5_radiative` = (4/3 pi n^3) [(L + 19/30 - 2 ln Za) d_{kappa,-1}
///   + 3/8 (1 - d_{kappa,-1}) / (kappa (2|kappa| - 1))] alpha (Za)^4
///
/// At Z = 1 the last two are the alpha^4 and alpha^5 terms.
pub fn analytic_expansion(
    state: &QuantumState,
    z: u32,
    constants: &PhysicalConstants,
    which: ExpansionKind,
    bethe: &BetheLogTable,
) -> Result<Vec<Term>> {
    let alpha = constants.alpha;
    let z_alpha = f64::from(z) * alpha;
    let n = f64::from(state.n());
    let z4 = z_alpha.powi(4);
    let [alpha2, alpha4] = dirac_terms(state, z_alpha);
    let mut terms = vec![
        Term::new("alpha2", alpha2),
        Term::new("alpha4_dirac", alpha4),
    ];

    let with_hyperfine = matches!(which, ExpansionKind::Hyperfine | ExpansionKind::Combined);
    let with_lamb = matches!(which, ExpansionKind::Lamb | ExpansionKind::Combined);

    if with_hyperfine {
        let spin = state.total_spin().ok_or_else(|| {
            Error::State(format!(
                "hyperfine expansion for {state} needs a total spin S"
            ))
        })?;
        let spin_factor = if spin == 1 { 1.0 } else { -3.0 };
        let value = if state.kappa() == -1 {
            constants.g_p * constants.mass_ratio * spin_factor * z4 / (3.0 * n.powi(3))
        } else {
            0.0
        };
        terms.push(Term::new("alpha4_hyperfine", value));
    }
    if with_lamb {
        let bracket = if state.kappa() == -1 {
            if z == 0 {
                return Err(Error::Domain("Lamb expansion needs Z > 0".into()));
            }
            bethe.lookup(state.n(), 0)? + 19.0 / 30.0 - 2.0 * z_alpha.ln()
        } else {
            let k = f64::from(state.kappa());
            3.0 / 8.0 / (k * f64::from(2 * state.abs_kappa() - 1))
        };
        let value = 4.0 / (3.0 * PI * n.powi(3)) * bracket * alpha * z4;
        terms.push(Term::new("alpha5_radiative", value));
    }
    Ok(terms)
}

/// Samples per fitted coefficient beyond the minimum.
const EXTRA_SAMPLES: usize = 4;
/// Higher orders fitted but not reported, to absorb truncation error.
const GUARD_ORDERS: usize = 2;
const FIT_WINDOW: (f64, f64) = (1e-3, 1e-2);
const MAX_CONDITION: f64 = 1e12;

/// Fits eps(Za) - 1 on Za in [1e-3, 1e-2] to a polynomial in (Za)^2 and
/// returns the coefficients for the requested (even) exponents.
///
/// `g_builder` gives the coupling at each sample point; it must be smooth
/// there (no ln Za), so Lamb couplings are unsuitable.
pub fn numeric_order_extraction<F>(
    state: &QuantumState,
    g_builder: F,
    orders: &[u32],
) -> Result<Vec<(u32, f64)>>
where
    F: Fn(f64) -> Result<CouplingFactors>,
{
    if orders.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(bad) = orders.iter().find(|&&o| o < 2 || o % 2 == 1) {
        return Err(Error::Domain(format!(
            "order {bad} is not an even exponent >= 2"
        )));
    }
    let max_power = *orders.iter().max().unwrap() as usize / 2;
    let n_coeffs = max_power + GUARD_ORDERS;
    let n_samples = n_coeffs + EXTRA_SAMPLES;
    let (lo, hi) = FIT_WINDOW;
    let t_max = hi * hi;

    // Chebyshev nodes in Za; fit y = -(1 - eps)/(Za)^2 = c1 + c2 t + ...
    // with t = (Za)^2 / t_max
    let mut design = DMatrix::<f64>::zeros(n_samples, n_coeffs);
    let mut rhs = DVector::<f64>::zeros(n_samples);
    for i in 0..n_samples {
        let theta = PI * (i as f64 + 0.5) / n_samples as f64;
        let za = 0.5 * (lo + hi) + 0.5 * (hi - lo) * theta.cos();
        let g = g_builder(za)?;
        let (level, _) = solve_effective(state, za, &g)?;
        let t = za * za / t_max;
        rhs[i] = -level.deficit / (za * za);
        let mut power = 1.0;
        for j in 0..n_coeffs {
            design[(i, j)] = power;
            power *= t;
        }
    }

    let svd = design.svd(true, true);
    let (smax, smin) = svd
        .singular_values
        .iter()
        .fold((0.0f64, f64::INFINITY), |(mx, mn), &s| {
            (mx.max(s), mn.min(s))
        });
    let condition = smax / smin;
    if !(condition < MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    let scaled = svd
        .solve(&rhs, smax * f64::EPSILON)
        .map_err(|e| Error::Domain(e.to_string()))?;

    Ok(orders
        .iter()
        .map(|&o| {
            let j = o as usize / 2 - 1;
            (o, scaled[j] / t_max.powi(j as i32))
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub enum IterationStatus {
    Converged,
    MaxIterations,
    Diverged(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationOutcome {
    /// Last successfully solved level.
    pub level: Option<EnergyLevel>,
    /// eps after each completed iteration.
    pub trace: Vec<f64>,
    pub status: IterationStatus,
}

/// Experimental fixed-point scheme: the solved eps replaces the Dirac level
/// inside the nonlinear factor, f_k = 1 - eps_{k-1}^n, starting from the
/// Dirac level. Stops when successive eps differ by less than `tol`.
pub fn self_consistent_iterate(
    state: &QuantumState,
    z_alpha: f64,
    model: &CouplingModel,
    constants: &PhysicalConstants,
    bethe: &BetheLogTable,
    max_iter: usize,
    tol: f64,
) -> Result<IterationOutcome> {
    if max_iter == 0 {
        return Err(Error::Domain("max_iter must be at least 1".into()));
    }
    let mut deficit = sommerfeld_deficit(state, z_alpha)?;
    let mut trace = Vec::with_capacity(max_iter);
    let mut level = None;
    let mut status = IterationStatus::MaxIterations;

    for _ in 0..max_iter {
        let f = factor_from_deficit(state.n(), deficit);
        let step = model
            .coupling_with_factor(state, z_alpha, f, constants, bethe)
            .and_then(|g| solve_effective(state, z_alpha, &g));
        let next = match step {
            Ok((next, _)) if next.epsilon > 0.0 && next.epsilon < 1.0 => next,
            Ok((next, _)) => {
                status = IterationStatus::Diverged(format!("eps = {} left (0, 1)", next.epsilon));
                break;
            }
            Err(e) => {
                status = IterationStatus::Diverged(e.to_string());
                break;
            }
        };
        let change = (next.deficit - deficit).abs();
        deficit = next.deficit;
        trace.push(next.epsilon);
        level = Some(next);
        if change < tol {
            status = IterationStatus::Converged;
            break;
        }
    }
    Ok(IterationOutcome {
        level,
        trace,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::sommerfeld_energy;

    const ALPHA: f64 = 1.0 / 137.036;

    fn st(n: u32, kappa: i32) -> QuantumState {
        QuantumState::new(n, kappa, None).unwrap()
    }

    #[test]
    fn identity_reduces_to_sommerfeld() {
        for (n, k, za) in [(1, -1, ALPHA), (2, 1, 0.3), (3, -2, 0.8), (5, 4, 0.05)] {
            let state = st(n, k);
            let (level, report) = solve_effective(&state, za, &CouplingFactors::IDENTITY).unwrap();
            let exact = sommerfeld_energy(&state, za).unwrap();
            assert!((level.epsilon - exact).abs() < 1e-14);
            assert!(report.residual < 1e-12);
            assert!((report.epsilon_root_found - exact).abs() < 1e-12);
            assert!((1.0 + breakdown_sum(&level.breakdown) - level.epsilon).abs() < 1e-15);
            assert!(level.term("coupling_shift").unwrap().abs() < 1e-16);
        }
    }

    #[test]
    fn weaker_upper_coupling_raises_s_level() {
        let state = st(2, -1);
        let g = CouplingFactors {
            g_a: 1.0 - 1e-6,
            g_b: 1.0,
        };
        let (level, _) = solve_effective(&state, ALPHA, &g).unwrap();
        let dirac = sommerfeld_deficit(&state, ALPHA).unwrap();
        assert!(level.deficit < dirac);
    }

    #[test]
    fn supercritical_coupling() {
        let g = CouplingFactors { g_a: 1.2, g_b: 1.2 };
        assert!(matches!(
            solve_effective(&st(1, -1), 0.9, &g),
            Err(Error::Supercritical { .. })
        ));
        let z138 = 138.0 * ALPHA;
        assert!(matches!(
            solve_effective(&st(1, -1), z138, &CouplingFactors::IDENTITY),
            Err(Error::Supercritical { .. })
        ));
    }

    #[test]
    fn expansion_dirac_terms() {
        let c = PhysicalConstants::default();
        let bethe = BetheLogTable::shipped();
        let t = analytic_expansion(&st(1, -1), 1, &c, ExpansionKind::Dirac, &bethe).unwrap();
        assert_eq!(t[0].label, "alpha2");
        assert!((t[0].value + 2.66257e-5).abs() < 1e-10);
        let t = analytic_expansion(&st(2, -1), 1, &c, ExpansionKind::Dirac, &bethe).unwrap();
        assert!((t[1].value - (-5.0 / 128.0) * c.alpha.powi(4)).abs() < 1e-24);
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn expansion_hyperfine_spin_difference() {
        let c = PhysicalConstants::default();
        let bethe = BetheLogTable::shipped();
        let term = |s| {
            let state = st(1, -1).with_spin(Some(s)).unwrap();
            let t = analytic_expansion(&state, 1, &c, ExpansionKind::Hyperfine, &bethe).unwrap();
            t.iter()
                .find(|t| t.label == "alpha4_hyperfine")
                .unwrap()
                .value
        };
        let expected = 4.0 / 3.0 * c.g_p * c.mass_ratio * c.alpha.powi(4);
        assert!(((term(1) - term(0)) - expected).abs() < 1e-12 * expected);
        assert!(analytic_expansion(&st(1, -1), 1, &c, ExpansionKind::Hyperfine, &bethe).is_err());
    }

    #[test]
    fn expansion_lamb_needs_bethe_for_s_only() {
        let c = PhysicalConstants::default();
        let empty = crate::data::load_bethe_table("").unwrap();
        assert_eq!(
            analytic_expansion(&st(2, -1), 1, &c, ExpansionKind::Lamb, &empty),
            Err(Error::MissingBethe { n: 2, l: 0 })
        );
        let p = analytic_expansion(&st(2, 1), 1, &c, ExpansionKind::Lamb, &empty).unwrap();
        let expected = 4.0 / (3.0 * PI * 8.0) * 0.375 * c.alpha.powi(5);
        assert!((p[2].value - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn order_extraction_dirac() {
        let id = |_: f64| Ok(CouplingFactors::IDENTITY);
        let c = numeric_order_extraction(&st(1, -1), id, &[2, 4]).unwrap();
        assert!((c[0].1 + 0.5).abs() < 1e-8, "{c:?}");
        assert!((c[1].1 + 0.125).abs() < 1e-6 * 0.125, "{c:?}");
        let c = numeric_order_extraction(&st(2, -1), id, &[4]).unwrap();
        assert!((c[0].1 + 5.0 / 128.0).abs() < 1e-6 * 5.0 / 128.0, "{c:?}");
        assert!(numeric_order_extraction(&st(2, -1), id, &[3]).is_err());
        assert!(numeric_order_extraction(&st(2, -1), id, &[])
            .unwrap()
            .is_empty());
    }

    #[test]
    fn order_extraction_hyperfine() {
        let c = PhysicalConstants::default();
        let bethe = BetheLogTable::shipped();
        let state = st(1, -1).with_spin(Some(1)).unwrap();
        let model = CouplingModel::Hyperfine {
            corrections: false,
            user_delta: 0.0,
        };
        let fit =
            numeric_order_extraction(&state, |za| model.coupling(&state, za, &c, &bethe), &[2, 4])
                .unwrap();
        let excess = fit[1].1 - (-0.125);
        let expected = c.g_p * c.mass_ratio / 3.0;
        assert!(
            (excess - expected).abs() < 1e-6 * expected,
            "{excess} vs {expected}"
        );
    }

    #[test]
    fn iteration_contracts() {
        let c = PhysicalConstants::default();
        let bethe = BetheLogTable::shipped();
        let state = st(2, -1);
        let out = self_consistent_iterate(
            &state,
            c.alpha,
            &CouplingModel::Dirac,
            &c,
            &bethe,
            10,
            1e-15,
        )
        .unwrap();
        assert_eq!(out.status, IterationStatus::Converged);
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0], sommerfeld_energy(&state, c.alpha).unwrap());

        let lamb = CouplingModel::Lamb { binding: false };
        let out = self_consistent_iterate(&state, c.alpha, &lamb, &c, &bethe, 3, 0.0).unwrap();
        assert_eq!(out.trace.len(), 3);
        assert_eq!(out.status, IterationStatus::MaxIterations);
        assert!((out.trace[0] - out.trace[1]).abs() < 1e-12);

        assert!(self_consistent_iterate(&state, c.alpha, &lamb, &c, &bethe, 0, 0.0).is_err());
    }

    #[test]
    fn iteration_reports_divergence() {
        let c = PhysicalConstants::default();
        let bethe = BetheLogTable::shipped();
        // a huge hyperfine strength drives the coupling supercritical
        let wild = PhysicalConstants {
            g_p: 2.0e6,
            kappa_p: 1.0e6 - 1.0,
            ..c
        };
        let state = st(1, -1).with_spin(Some(0)).unwrap();
        let model = CouplingModel::Hyperfine {
            corrections: false,
            user_delta: 0.0,
        };
        let out = self_consistent_iterate(&state, 0.5, &model, &wild, &bethe, 5, 0.0).unwrap();
        assert!(
            matches!(out.status, IterationStatus::Diverged(_)),
            "{:?}",
            out.status
        );
    }
}
