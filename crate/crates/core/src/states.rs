//! Dirac-Coulomb quantum numbers.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const LETTERS: [char; 7] = ['s', 'p', 'd', 'f', 'g', 'h', 'i'];

/// A bound state (n, kappa) with the derived j, l_a, l_b and, for hyperfine
/// sublevels, the total spin S.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumState {
    n: u32,
    kappa: i32,
    two_j: u32,
    l_a: u32,
    l_b: u32,
    total_spin: Option<u8>,
}

impl QuantumState {
    pub fn new(n: u32, kappa: i32, total_spin: Option<u8>) -> Result<Self> {
        if n == 0 {
            return Err(Error::State("n must be at least 1".into()));
        }
        if kappa == 0 {
            return Err(Error::State("kappa must be nonzero".into()));
        }
        let k = kappa.unsigned_abs();
        if k > n {
            return Err(Error::State(format!("|kappa| = {k} exceeds n = {n}")));
        }
        if kappa > 0 && k == n {
            return Err(Error::State(format!(
                "kappa = {kappa} needs l = {k} < n = {n}"
            )));
        }
        if let Some(s) = total_spin {
            if s > 1 {
                return Err(Error::State(format!("total spin S = {s} is not 0 or 1")));
            }
        }
        let (l_a, l_b) = if kappa > 0 { (k, k - 1) } else { (k - 1, k) };
        Ok(Self {
            n,
            kappa,
            two_j: 2 * k - 1,
            l_a,
            l_b,
            total_spin,
        })
    }

    /// ns_{1/2}, the kappa = -1 state.
    pub fn s_half(n: u32) -> Result<Self> {
        Self::new(n, -1, None)
    }

    /// np_{1/2}, the kappa = +1 state.
    pub fn p_half(n: u32) -> Result<Self> {
        Self::new(n, 1, None)
    }

    pub fn with_spin(self, total_spin: Option<u8>) -> Result<Self> {
        Self::new(self.n, self.kappa, total_spin)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kappa(&self) -> i32 {
        self.kappa
    }

    pub fn abs_kappa(&self) -> u32 {
        self.kappa.unsigned_abs()
    }

    /// Twice the total angular momentum, always odd.
    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn j(&self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    /// Orbital quantum number of the upper component.
    pub fn l_a(&self) -> u32 {
        self.l_a
    }

    /// Orbital quantum number of the lower component.
    pub fn l_b(&self) -> u32 {
        self.l_b
    }

    pub fn total_spin(&self) -> Option<u8> {
        self.total_spin
    }

    /// Number of radial nodes n' = n - |kappa|.
    pub fn radial_order(&self) -> u32 {
        self.n - self.abs_kappa()
    }

    /// `2s_{1/2}`-style label, if l_a has a spectroscopic letter (s through i).
    pub fn label(&self) -> Option<String> {
        let letter = LETTERS.get(self.l_a as usize)?;
        Some(format!("{}{}_{{{}/2}}", self.n, letter, self.two_j))
    }
}

impl fmt::Display for QuantumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label() {
            Some(label) => f.write_str(&label)?,
            None => write!(f, "(n={}, kappa={})", self.n, self.kappa)?,
        }
        if let Some(s) = self.total_spin {
            write!(f, " S={s}")?;
        }
        Ok(())
    }
}

/// Parses `<n><s|p|d|f>_{<2j>/2}`.
pub fn parse_label(text: &str) -> Result<QuantumState> {
    let fail = |reason: &str| Error::Label {
        label: text.to_string(),
        reason: reason.to_string(),
    };
    let digits = text.bytes().take_while(u8::is_ascii_digit).count();
    let n: u32 = text[..digits]
        .parse()
        .map_err(|_| fail("missing principal quantum number"))?;
    let rest = &text[digits..];
    let mut chars = rest.chars();
    let letter = chars.next().ok_or_else(|| fail("missing orbital letter"))?;
    let l = LETTERS
        .iter()
        .position(|&c| c == letter)
        .ok_or_else(|| fail("orbital letter must be one of s, p, d, f"))? as u32;
    let two_j: u32 = chars
        .as_str()
        .strip_prefix("_{")
        .and_then(|s| s.strip_suffix("/2}"))
        .ok_or_else(|| fail("expected `_{<2j>/2}` after the letter"))?
        .parse()
        .map_err(|_| fail("2j is not an integer"))?;
    let kappa = if two_j == 2 * l + 1 {
        -(l as i32 + 1)
    } else if l > 0 && two_j == 2 * l - 1 {
        l as i32
    } else {
        return Err(fail("j is not l +/- 1/2"));
    };
    QuantumState::new(n, kappa, None).map_err(|e| fail(&e.to_string()))
}

impl FromStr for QuantumState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_label(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_s_and_two_p() {
        let s = QuantumState::new(2, -1, None).unwrap();
        assert_eq!((s.j(), s.l_a(), s.l_b()), (0.5, 0, 1));
        assert_eq!(s.label().unwrap(), "2s_{1/2}");
        let p = QuantumState::new(2, 1, None).unwrap();
        assert_eq!((p.j(), p.l_a(), p.l_b()), (0.5, 1, 0));
        assert_eq!(p.label().unwrap(), "2p_{1/2}");
        assert_eq!(p.radial_order(), 1);
    }

    #[test]
    fn invalid_states() {
        assert!(QuantumState::new(1, -2, None).is_err());
        assert!(QuantumState::new(0, -1, None).is_err());
        assert!(QuantumState::new(3, 0, None).is_err());
        assert!(QuantumState::new(1, -1, Some(2)).is_err());
        assert!(QuantumState::new(1, -1, Some(0)).is_ok());
    }

    #[test]
    fn labels() {
        assert_eq!(
            parse_label("2s_{1/2}").unwrap(),
            QuantumState::new(2, -1, None).unwrap()
        );
        assert_eq!(
            parse_label("2p_{1/2}").unwrap(),
            QuantumState::new(2, 1, None).unwrap()
        );
        assert_eq!(parse_label("3d_{5/2}").unwrap().kappa(), -3);
        assert_eq!(parse_label("4f_{5/2}").unwrap().kappa(), 3);
        for bad in [
            "2x_{1/2}", "s_{1/2}", "2s_{3/2}", "2s", "2s_{1/2", "1p_{1/2}", "2p_{a/2}",
        ] {
            assert!(parse_label(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn display_carries_spin() {
        let s = QuantumState::new(1, -1, Some(1)).unwrap();
        assert_eq!(s.to_string(), "1s_{1/2} S=1");
    }

    fn valid_state() -> impl Strategy<Value = QuantumState> {
        (1u32..=10, 1i32..=4, any::<bool>())
            .prop_map(|(n, k, neg)| (n, if neg { -k } else { k }))
            .prop_filter("l < n", |(n, k)| {
                k.unsigned_abs() < *n || (*k < 0 && k.unsigned_abs() == *n)
            })
            .prop_map(|(n, k)| QuantumState::new(n, k, None).unwrap())
    }

    proptest! {
        #[test]
        fn kappa_j_l_relations(state in valid_state()) {
            let j_half = (state.two_j() + 1) as i32 / 2;
            prop_assert!(state.kappa() == j_half || state.kappa() == -j_half);
            prop_assert_eq!(state.l_a() + state.l_b(), state.two_j());
        }

        #[test]
        fn label_roundtrip(state in valid_state()) {
            let label = state.label().unwrap();
            prop_assert_eq!(parse_label(&label).unwrap(), state);
        }
    }
}
