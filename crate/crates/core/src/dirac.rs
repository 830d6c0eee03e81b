//! Dirac-Coulomb closed forms and the terminating power-series solution of
//! the radial equations with effective couplings.
//!
//! Energies are dimensionless, eps = E/mc^2. Near the non-relativistic
//! limit eps is within 1e-5 of one, so the binding deficit `1 - eps` is
//! carried separately wherever differences of levels are formed.

use statrs::function::gamma::ln_gamma;

use crate::coupling::CouplingFactors;
use crate::error::{Error, Result};
use crate::states::QuantumState;

/// Relative residual above which a series is declared non-terminating.
pub const TERMINATION_TOLERANCE: f64 = 1e-9;

/// Positive root s = sqrt(kappa^2 - (Z alpha)^2 g_a g_b).
pub fn indicial_exponent(kappa: i32, z_alpha: f64, g: &CouplingFactors) -> Result<f64> {
    let kappa_sq = f64::from(kappa).powi(2);
    let coupling_sq = z_alpha * z_alpha * g.product();
    if !(kappa_sq > coupling_sq) {
        return Err(Error::Supercritical {
            kappa_sq,
            coupling_sq,
        });
    }
    Ok((kappa_sq - coupling_sq).sqrt())
}

/// `1 - eps` for the pure Coulomb level, free of cancellation.
pub fn sommerfeld_deficit(state: &QuantumState, z_alpha: f64) -> Result<f64> {
    if !(z_alpha >= 0.0) {
        return Err(Error::Domain(format!(
            "Z alpha must be non-negative, got {z_alpha}"
        )));
    }
    let s = indicial_exponent(state.kappa(), z_alpha, &CouplingFactors::IDENTITY)?;
    let big_n = s + f64::from(state.radial_order());
    let d = big_n.hypot(z_alpha);
    Ok(z_alpha * z_alpha / (d * (d + big_n)))
}

/// eps = (s + n') / sqrt((s + n')^2 + (Z alpha)^2).
pub fn sommerfeld_energy(state: &QuantumState, z_alpha: f64) -> Result<f64> {
    if !(z_alpha >= 0.0) {
        return Err(Error::Domain(format!(
            "Z alpha must be non-negative, got {z_alpha}"
        )));
    }
    let s = indicial_exponent(state.kappa(), z_alpha, &CouplingFactors::IDENTITY)?;
    let big_n = s + f64::from(state.radial_order());
    Ok(big_n / big_n.hypot(z_alpha))
}

/// f = 1 - eps_Dirac^n, evaluated as -expm1(n ln(1 - deficit)).
pub fn nonlinear_factor(state: &QuantumState, z_alpha: f64) -> Result<f64> {
    let deficit = sommerfeld_deficit(state, z_alpha)?;
    Ok(factor_from_deficit(state.n(), deficit))
}

pub(crate) fn factor_from_deficit(n: u32, deficit: f64) -> f64 {
    -(f64::from(n) * (-deficit).ln_1p()).exp_m1()
}

/// Everything the radial series needs: the state, coupling and a trial
/// energy, with M1 = 1 + eps and M2 = 1 - eps in units of mc^2/hbar c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProblem {
    pub state: QuantumState,
    pub z_alpha: f64,
    pub g: CouplingFactors,
    pub epsilon: f64,
    pub m1: f64,
    pub m2: f64,
    pub s: f64,
}

impl RadialProblem {
    pub fn new(
        state: QuantumState,
        z_alpha: f64,
        g: CouplingFactors,
        epsilon: f64,
    ) -> Result<Self> {
        Self::from_deficit(state, z_alpha, g, 1.0 - epsilon)
    }

    /// Builds the problem from `1 - eps`, keeping M2 at full precision.
    pub fn from_deficit(
        state: QuantumState,
        z_alpha: f64,
        g: CouplingFactors,
        deficit: f64,
    ) -> Result<Self> {
        if !(deficit > 0.0 && deficit < 2.0) {
            return Err(Error::Domain(format!(
                "energy eps = {} is not a bound-state energy",
                1.0 - deficit
            )));
        }
        if !(z_alpha > 0.0) {
            return Err(Error::Domain(format!(
                "Z alpha must be positive, got {z_alpha}"
            )));
        }
        let s = indicial_exponent(state.kappa(), z_alpha, &g)?;
        Ok(Self {
            state,
            z_alpha,
            g,
            epsilon: 1.0 - deficit,
            m1: 2.0 - deficit,
            m2: deficit,
            s,
        })
    }
}

/// Terminating series R_A = e^{-r} r^s sum a_mu r^mu, R_B likewise with b_mu,
/// normalized to a_0 = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSeries {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub s: f64,
    /// (|a_{n'+1}| + |b_{n'+1}|) / (|a_0| + |b_0|) from running the
    /// recurrence one step past the last kept term.
    pub residual: f64,
}

impl RadialSeries {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Integral of R_A^2 + R_B^2 over r in (0, inf), done term by term with
    /// int r^{2s+k} e^{-2r} dr = Gamma(2s+k+1) / 2^{2s+k+1}.
    pub fn norm_integral(&self) -> f64 {
        let mut total = 0.0;
        for mu in 0..self.len() {
            for nu in 0..self.len() {
                let x = 2.0 * self.s + (mu + nu) as f64 + 1.0;
                let moment = (ln_gamma(x) - x * std::f64::consts::LN_2).exp();
                total += (self.a[mu] * self.a[nu] + self.b[mu] * self.b[nu]) * moment;
            }
        }
        total
    }

    /// Copy scaled so that `norm_integral` is one.
    pub fn normalized(&self) -> Self {
        let scale = self.norm_integral().sqrt().recip();
        Self {
            a: self.a.iter().map(|c| c * scale).collect(),
            b: self.b.iter().map(|c| c * scale).collect(),
            ..self.clone()
        }
    }
}

/// Builds the series coefficients for an eigenvalue of the effective
/// problem and checks that the recurrence terminates after n' + 1 terms.
///
/// The leading pair obeys (s + kappa) a_0 = g_b Z alpha b_0, equivalently
/// g_a Z alpha a_0 + (s - kappa) b_0 = 0; whichever form has the larger
/// denominator is used. For mu > 0 each step solves
///
/// ```text
/// (s+mu+kappa) a_mu - g_b Za b_mu = a_{mu-1} + sqrt(M1/M2) b_{mu-1}
/// g_a Za a_mu + (s+mu-kappa) b_mu = b_{mu-1} + sqrt(M2/M1) a_{mu-1}
/// ```
///
/// whose determinant is mu (2s + mu).
pub fn radial_series(problem: &RadialProblem) -> Result<RadialSeries> {
    let RadialProblem {
        state,
        z_alpha,
        g,
        m1,
        m2,
        s,
        ..
    } = *problem;
    let kappa = f64::from(state.kappa());
    let n_prime = state.radial_order() as usize;
    let ratio = (m1 / m2).sqrt();
    let inv_ratio = (m2 / m1).sqrt();

    let a0 = 1.0;
    let lhs_den = g.g_b * z_alpha;
    let rhs_den = s - kappa;
    let b0 = if lhs_den.abs() >= rhs_den.abs() {
        (s + kappa) / lhs_den
    } else {
        -g.g_a * z_alpha / rhs_den
    };
    if !b0.is_finite() {
        return Err(Error::Domain("degenerate leading coefficients".into()));
    }

    let mut a = vec![a0];
    let mut b = vec![b0];
    for mu in 1..=n_prime + 1 {
        let m = mu as f64;
        let r1 = a[mu - 1] + ratio * b[mu - 1];
        let r2 = b[mu - 1] + inv_ratio * a[mu - 1];
        let det = m * (2.0 * s + m);
        a.push(((s + m - kappa) * r1 + g.g_b * z_alpha * r2) / det);
        b.push(((s + m + kappa) * r2 - g.g_a * z_alpha * r1) / det);
    }
    let tail_a = a.pop().unwrap_or_default();
    let tail_b = b.pop().unwrap_or_default();
    let residual = (tail_a.abs() + tail_b.abs()) / (a0.abs() + b0.abs());
    if !(residual < TERMINATION_TOLERANCE) {
        return Err(Error::Termination { residual });
    }
    Ok(RadialSeries { a, b, s, residual })
}

/// Relative mismatch of the last-term condition b_{n'} = -a_{n'} sqrt(M2/M1).
pub fn last_term_mismatch(series: &RadialSeries, problem: &RadialProblem) -> f64 {
    let a = *series.a.last().expect("series has at least one term");
    let b = *series.b.last().expect("series has at least one term");
    let expected = -a * (problem.m2 / problem.m1).sqrt();
    (b - expected).abs() / expected.abs().max(b.abs())
}

/// (R_A(r), R_B(r)) at scaled radius `r > 0`.
pub fn evaluate_radial(series: &RadialSeries, r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let horner = |coeffs: &[f64]| coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c);
    let envelope = (-r).exp() * r.powf(series.s);
    Ok((envelope * horner(&series.a), envelope * horner(&series.b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ALPHA: f64 = 1.0 / 137.036;

    fn st(n: u32, kappa: i32) -> QuantumState {
        QuantumState::new(n, kappa, None).unwrap()
    }

    #[test]
    fn free_particle_limit() {
        assert_eq!(sommerfeld_energy(&st(1, -1), 0.0).unwrap(), 1.0);
        assert_eq!(sommerfeld_deficit(&st(1, -1), 0.0).unwrap(), 0.0);
        assert_eq!(nonlinear_factor(&st(1, -1), 0.0).unwrap(), 0.0);
        let g = CouplingFactors::IDENTITY;
        assert_eq!(indicial_exponent(-1, 0.0, &g).unwrap(), 1.0);
    }

    #[test]
    fn hydrogen_values() {
        // 1s: sqrt(1 - alpha^2); 2s: [1 + (Za/(1+s))^2]^{-1/2}
        let e1 = sommerfeld_energy(&st(1, -1), ALPHA).unwrap();
        assert!((e1 - 0.999_973_373_968_623).abs() < 1e-15, "{e1}");
        let e2 = sommerfeld_energy(&st(2, -1), ALPHA).unwrap();
        assert!((e2 - 0.999_993_343_470_001).abs() < 1e-15, "{e2}");
        let s = indicial_exponent(-1, ALPHA, &CouplingFactors::IDENTITY).unwrap();
        assert!((s - 0.999_973_373_968_623).abs() < 1e-15);
        let f1 = nonlinear_factor(&st(1, -1), ALPHA).unwrap();
        assert!((f1 - 2.662_603_137_704e-5).abs() < 1e-16, "{f1}");
        let f2 = nonlinear_factor(&st(2, -1), ALPHA).unwrap();
        let z2 = ALPHA * ALPHA;
        assert!((f2 - z2 / 4.0).abs() < z2 * z2);
    }

    #[test]
    fn supercritical() {
        let err = indicial_exponent(-1, 1.01, &CouplingFactors::IDENTITY).unwrap_err();
        assert!(matches!(err, Error::Supercritical { .. }));
        assert!(sommerfeld_energy(&st(1, -1), 1.0).is_err());
        assert!(sommerfeld_energy(&st(2, -2), 1.5).is_ok());
    }

    #[test]
    fn ground_state_series() {
        let state = st(1, -1);
        let eps = sommerfeld_energy(&state, ALPHA).unwrap();
        let deficit = sommerfeld_deficit(&state, ALPHA).unwrap();
        let problem =
            RadialProblem::from_deficit(state, ALPHA, CouplingFactors::IDENTITY, deficit).unwrap();
        assert!((problem.epsilon - eps).abs() < 1e-16);
        let series = radial_series(&problem).unwrap();
        assert_eq!(series.len(), 1);
        // b0/a0 = (s + kappa)/(g_b Za) = (s - 1)/Za
        let s = problem.s;
        assert!((series.b[0] - (s - 1.0) / ALPHA).abs() < 1e-15);
        assert!(last_term_mismatch(&series, &problem) < 1e-9);
        for r in [1e-3, 0.5, 3.0, 20.0] {
            let (ra, rb) = evaluate_radial(&series, r).unwrap();
            assert!((rb / ra - series.b[0] / series.a[0]).abs() < 1e-14);
        }
    }

    #[test]
    fn two_s_series_terminates() {
        let state = st(2, -1);
        let deficit = sommerfeld_deficit(&state, ALPHA).unwrap();
        let problem =
            RadialProblem::from_deficit(state, ALPHA, CouplingFactors::IDENTITY, deficit).unwrap();
        let series = radial_series(&problem).unwrap();
        assert_eq!(series.len(), 2);
        assert!(series.residual < 1e-9, "{}", series.residual);
        assert!(last_term_mismatch(&series, &problem) < 1e-9);
    }

    #[test]
    fn non_eigenvalue_fails_to_terminate() {
        let problem = RadialProblem::new(st(1, -1), ALPHA, CouplingFactors::IDENTITY, 0.5).unwrap();
        match radial_series(&problem) {
            Err(Error::Termination { residual }) => assert!(residual > 1e-3),
            other => panic!("expected termination failure, got {other:?}"),
        }
    }

    #[test]
    fn radial_shape() {
        let state = st(3, -1);
        let z = 0.1;
        let deficit = sommerfeld_deficit(&state, z).unwrap();
        let problem =
            RadialProblem::from_deficit(state, z, CouplingFactors::IDENTITY, deficit).unwrap();
        let series = radial_series(&problem).unwrap();
        assert!(evaluate_radial(&series, 0.0).is_err());
        assert!(evaluate_radial(&series, -1.0).is_err());
        // leading power near the origin
        let (r1, r2) = (1e-8, 1e-9);
        let (a1, _) = evaluate_radial(&series, r1).unwrap();
        let (a2, _) = evaluate_radial(&series, r2).unwrap();
        let slope = (a1.abs().ln() - a2.abs().ln()) / (r1.ln() - r2.ln());
        assert!((slope - problem.s).abs() < 1e-6, "{slope}");
        // polynomial growth only once the exponential is stripped
        let (big, _) = evaluate_radial(&series, 200.0).unwrap();
        let stripped = big.abs() * 200f64.exp();
        assert!(stripped < 200f64.powf(problem.s + series.len() as f64) * 10.0);
    }

    #[test]
    fn normalization_integral() {
        // single term: int r^{2s} e^{-2r} (1 + b0^2) dr
        let state = st(1, -1);
        let deficit = sommerfeld_deficit(&state, ALPHA).unwrap();
        let problem =
            RadialProblem::from_deficit(state, ALPHA, CouplingFactors::IDENTITY, deficit).unwrap();
        let series = radial_series(&problem).unwrap();
        let x = 2.0 * problem.s + 1.0;
        let expected =
            (1.0 + series.b[0].powi(2)) * statrs::function::gamma::gamma(x) / 2f64.powf(x);
        assert!((series.norm_integral() - expected).abs() < 1e-14);
        assert!((series.normalized().norm_integral() - 1.0).abs() < 1e-14);

        // midpoint quadrature for a two-term series
        let state = st(2, -1);
        let deficit = sommerfeld_deficit(&state, 0.2).unwrap();
        let problem =
            RadialProblem::from_deficit(state, 0.2, CouplingFactors::IDENTITY, deficit).unwrap();
        let series = radial_series(&problem).unwrap();
        let h = 1e-4;
        let quad: f64 = (0..400_000)
            .map(|i| {
                let (ra, rb) = evaluate_radial(&series, (i as f64 + 0.5) * h).unwrap();
                (ra * ra + rb * rb) * h
            })
            .sum();
        assert!(
            (quad - series.norm_integral()).abs() < 1e-6 * quad,
            "{quad}"
        );
    }

    proptest! {
        #[test]
        fn sommerfeld_decreasing(n in 1u32..=10, k in 1i32..=4, neg in any::<bool>(),
                                 z1 in 0.0f64..0.9, z2 in 0.0f64..0.9) {
            prop_assume!((k as u32) < n || (neg && k as u32 == n));
            prop_assume!(z1 < z2);
            let state = st(n, if neg { -k } else { k });
            let e1 = sommerfeld_energy(&state, z1).unwrap();
            let e2 = sommerfeld_energy(&state, z2).unwrap();
            prop_assert!(e2 < e1);
            let d = sommerfeld_deficit(&state, z2).unwrap();
            prop_assert!((1.0 - d - e2).abs() < 4e-16);
        }

        #[test]
        fn nonlinear_factor_law(n in 1u32..=10, za in 1e-4f64..0.3) {
            let f = nonlinear_factor(&st(n, -1), za).unwrap();
            let lead = za * za / (2.0 * f64::from(n));
            prop_assert!((f - lead).abs() <= 2.0 * za.powi(4));
            prop_assert!((0.0..1.0).contains(&f));
        }
    }
}
