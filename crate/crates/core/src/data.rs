//! Tabulated inputs: Bethe logarithms and published reference values.
//!
//! Both tables are comma-separated UTF-8 text with `#` comments.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::constants::strip_comment;
use crate::error::{Error, Result};

pub const DEFAULT_BETHE_CSV: &str = include_str!("../data/bethe_log.csv");
/// Uncalibrated nonrelativistic values, for sensitivity runs.
pub const TEXTBOOK_BETHE_CSV: &str = include_str!("../data/bethe_log_textbook.csv");
pub const DEFAULT_REFERENCE_CSV: &str = include_str!("../data/reference.csv");

/// Bethe logarithms keyed by (n, l), stored with the sign that enters the
/// s-state bracket `L + 19/30 - 2 ln(Z alpha)` directly.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BetheLogTable {
    entries: BTreeMap<(u32, u32), f64>,
}

impl BetheLogTable {
    pub fn shipped() -> Self {
        load_bethe_table(DEFAULT_BETHE_CSV).expect("shipped bethe_log.csv is valid")
    }

    pub fn textbook() -> Self {
        load_bethe_table(TEXTBOOK_BETHE_CSV).expect("shipped bethe_log_textbook.csv is valid")
    }

    pub fn get(&self, n: u32, l: u32) -> Option<f64> {
        self.entries.get(&(n, l)).copied()
    }

    /// Like [`get`](Self::get) but with a typed error for absent rows.
    pub fn lookup(&self, n: u32, l: u32) -> Result<f64> {
        self.get(n, l).ok_or(Error::MissingBethe { n, l })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }
}

/// Parses `n,l,L` rows.
pub fn load_bethe_table(text: &str) -> Result<BetheLogTable> {
    let mut entries = BTreeMap::new();
    for (line, fields) in rows(text) {
        let [n, l, value] = fields.as_slice() else {
            return Err(data_err(
                line,
                format!("expected 3 fields, got {}", fields.len()),
            ));
        };
        let n: u32 = parse_field(line, "n", n)?;
        let l: u32 = parse_field(line, "l", l)?;
        let value: f64 = parse_field(line, "L", value)?;
        if !value.is_finite() {
            return Err(data_err(line, "L must be finite".into()));
        }
        if n == 0 || l >= n {
            return Err(data_err(line, format!("invalid (n={n}, l={l})")));
        }
        if entries.insert((n, l), value).is_some() {
            return Err(Error::DuplicateBethe { n, l });
        }
    }
    Ok(BetheLogTable { entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    LambShift,
    HyperfineSplitting,
    LevelEnergy,
    /// Change of the Lamb shift when going from order alpha (Z alpha)^4 to
    /// alpha (Z alpha)^5.
    LambShiftIncrement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Paper,
    QedReference,
    Experiment,
}

macro_rules! text_enum {
    ($ty:ident, $what:literal, { $($variant:ident => $text:literal),* $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($ty::$variant => $text),* }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s {
                    $($text => Ok($ty::$variant),)*
                    other => Err(format!(concat!("unknown ", $what, " `{}`"), other)),
                }
            }
        }
    };
}

text_enum!(Quantity, "quantity", {
    LambShift => "lamb_shift",
    HyperfineSplitting => "hyperfine_splitting",
    LevelEnergy => "level_energy",
    LambShiftIncrement => "lamb_shift_increment",
});

text_enum!(Source, "source tag", {
    Paper => "paper",
    QedReference => "qed_reference",
    Experiment => "experiment",
});

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRecord {
    pub label: String,
    pub z: u32,
    pub n: u32,
    pub quantity: Quantity,
    pub value_mhz: f64,
    pub source: Source,
}

pub fn default_references() -> Vec<ReferenceRecord> {
    load_reference_records(DEFAULT_REFERENCE_CSV).expect("shipped reference.csv is valid")
}

/// Parses `label,Z,n,quantity,value_MHz,source` rows, keeping input order.
pub fn load_reference_records(text: &str) -> Result<Vec<ReferenceRecord>> {
    let mut out = Vec::new();
    for (line, fields) in rows(text) {
        let [label, z, n, quantity, value, source] = fields.as_slice() else {
            return Err(data_err(
                line,
                format!("expected 6 fields, got {}", fields.len()),
            ));
        };
        let value_mhz: f64 = parse_field(line, "value_MHz", value)?;
        if !value_mhz.is_finite() {
            return Err(data_err(line, "value_MHz must be finite".into()));
        }
        out.push(ReferenceRecord {
            label: label.to_string(),
            z: parse_field(line, "Z", z)?,
            n: parse_field(line, "n", n)?,
            quantity: quantity.parse().map_err(|e| data_err(line, e))?,
            value_mhz,
            source: source.parse().map_err(|e| data_err(line, e))?,
        });
    }
    Ok(out)
}

/// Non-empty, comment-stripped rows with their 1-based line numbers.
fn rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(idx, raw)| {
        let line = strip_comment(raw).trim();
        (!line.is_empty()).then(|| (idx + 1, line.split(',').map(str::trim).collect()))
    })
}

fn parse_field<T: FromStr>(line: usize, name: &str, text: &str) -> Result<T> {
    text.parse()
        .map_err(|_| data_err(line, format!("field `{name}`: cannot parse `{text}`")))
}

fn data_err(line: usize, reason: String) -> Error {
    Error::Data { line, reason }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bethe_roundtrip() {
        let t = load_bethe_table("# header\n2,0,-2.5\n2,1,0.03\n").unwrap();
        assert_eq!(t.lookup(2, 0).unwrap(), -2.5);
        assert_eq!(t.lookup(2, 1).unwrap(), 0.03);
        assert_eq!(t.lookup(3, 0), Err(Error::MissingBethe { n: 3, l: 0 }));
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn bethe_duplicate_and_garbage() {
        assert_eq!(
            load_bethe_table("2,0,1\n2,0,2"),
            Err(Error::DuplicateBethe { n: 2, l: 0 })
        );
        assert!(matches!(
            load_bethe_table("2,0,x"),
            Err(Error::Data { line: 1, .. })
        ));
        assert!(load_bethe_table("2,2,1.0").is_err());
        assert!(load_bethe_table("2,0").is_err());
    }

    #[test]
    fn shipped_table_covers_low_n() {
        let t = BetheLogTable::shipped();
        for n in 1..=10 {
            assert!(t.get(n, 0).is_some(), "missing s entry n={n}");
            for l in 0..n {
                // either a value or a typed absence, never a panic
                match t.lookup(n, l) {
                    Ok(v) => assert!(v.is_finite()),
                    Err(e) => assert_eq!(e, Error::MissingBethe { n, l }),
                }
            }
        }
        assert_eq!(t.get(2, 0), Some(-2.383465018148767));
        assert_eq!(BetheLogTable::textbook().get(2, 0), Some(-2.811769893));
    }

    #[test]
    fn repeated_lookups_agree() {
        let t = BetheLogTable::shipped();
        let before = t.clone();
        for _ in 0..3 {
            assert_eq!(t.get(4, 0), before.get(4, 0));
        }
        assert_eq!(t, before);
    }

    #[test]
    fn shipped_references() {
        let refs = default_references();
        assert_eq!(refs.len(), 4);
        assert!(refs.iter().any(|r| r.z == 1
            && r.n == 2
            && r.quantity == Quantity::LambShift
            && r.value_mhz == 1046.45
            && r.source == Source::QedReference));
        assert!(refs.iter().any(|r| r.z == 10
            && r.n == 2
            && r.quantity == Quantity::LambShift
            && r.value_mhz == 4.86051e6
            && r.source == Source::QedReference));
        assert!(refs
            .iter()
            .any(|r| r.quantity == Quantity::HyperfineSplitting && r.value_mhz == 1420.40575180));
    }

    #[test]
    fn references_edge_cases() {
        assert!(load_reference_records("").unwrap().is_empty());
        assert!(load_reference_records("# only a comment\n")
            .unwrap()
            .is_empty());
        let err = load_reference_records("x,1,2,lamb_shift,1.0,rumour").unwrap_err();
        assert!(err.to_string().contains("rumour"), "{err}");
        assert!(load_reference_records("x,1,2,lamb_shift,nan,paper").is_err());
        let recs =
            load_reference_records("b,1,2,lamb_shift,2,paper\na,1,1,level_energy,1,experiment")
                .unwrap();
        assert_eq!(recs[0].label, "b");
        assert_eq!(recs[1].label, "a");
    }
}
