use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use effcoul_core::LambOrder;

use crate::table::Format;

#[derive(Debug, Parser)]
#[command(
    name = "effcoul",
    version,
    about = "Hydrogenic levels, Lamb shifts and hyperfine splittings from effective Coulomb couplings"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// key = value file overriding the shipped constants and options
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Bethe-logarithm table (n,l,L) replacing the shipped one
    #[arg(long, global = true, value_name = "PATH")]
    pub bethe: Option<PathBuf>,
    /// Reference values (label,Z,n,quantity,value_MHz,source) replacing the shipped ones
    #[arg(
        long,
        global = true,
        value_name = "PATH",
        conflicts_with = "no_references"
    )]
    pub references: Option<PathBuf>,
    /// Do not attach reference values to scan output
    #[arg(long, global = true)]
    pub no_references: bool,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Human,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Human => Format::Human,
        }
    }
}

/// Inclusive range of nuclear charges, written `A..B` or `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZRange {
    pub lo: u32,
    pub hi: u32,
}

impl ZRange {
    pub fn iter(self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }
}

pub fn parse_z_range(text: &str) -> Result<ZRange, String> {
    let parse = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| format!("`{s}` is not a nuclear charge"))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let z = parse(text)?;
            (z, z)
        }
    };
    if lo == 0 {
        return Err("Z must be at least 1".into());
    }
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok(ZRange { lo, hi })
}

fn parse_order(text: &str) -> Result<LambOrder, String> {
    text.parse()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Dirac,
    Lamb,
    Hyperfine,
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantityArg {
    Lamb,
    Hfs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solved levels eps = E/mc^2 for every kappa of shell n
    Spectrum {
        #[arg(long, value_parser = parse_z_range, default_value = "1")]
        z: ZRange,
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Restrict to one kappa
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<i32>,
        /// Total spin for hyperfine models; both 0 and 1 when omitted
        #[arg(long)]
        spin: Option<u8>,
        #[arg(long, value_enum, default_value_t = ModelArg::Dirac)]
        model: ModelArg,
        #[command(flatten)]
        lamb: LambOpts,
        #[command(flatten)]
        hfs: HfsOpts,
    },
    /// E(ns_1/2) - E(np_1/2)
    Lamb {
        #[arg(long, value_parser = parse_z_range, default_value = "1")]
        z: ZRange,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[command(flatten)]
        lamb: LambOpts,
    },
    /// E(ns_1/2, S=1) - E(ns_1/2, S=0)
    Hfs {
        #[arg(long, value_parser = parse_z_range, default_value = "1")]
        z: ZRange,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[command(flatten)]
        hfs: HfsOpts,
    },
    /// One row per (Z, order) with reference and discrepancy columns
    Scan {
        #[arg(long, value_enum, default_value_t = QuantityArg::Lamb)]
        quantity: QuantityArg,
        #[arg(long, value_parser = parse_z_range, default_value = "1..40")]
        z: ZRange,
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Comma-separated Lamb orders
        #[arg(long, value_delimiter = ',', value_parser = parse_order,
              default_value = "zalpha4,zalpha5")]
        orders: Vec<LambOrder>,
        #[command(flatten)]
        hfs: HfsOpts,
    },
    /// Term-by-term order expansion of eps - 1
    Expand {
        #[arg(long, default_value_t = 1)]
        z: u32,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        kappa: i32,
        #[arg(long)]
        spin: Option<u8>,
        #[arg(long, value_enum, default_value_t = ModelArg::Lamb)]
        kind: ModelArg,
    },
    /// Coulomb potential and its radiative part versus radius
    Figure1 {
        #[arg(long, default_value_t = 1)]
        z: u32,
        #[arg(long, value_delimiter = ',', default_value = "4,8,12")]
        ns: Vec<u32>,
        #[arg(long, default_value_t = 0.1)]
        q_min: f64,
        #[arg(long, default_value_t = 50.0)]
        q_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Recompute every reference value and report discrepancies
    Compare {
        #[command(flatten)]
        hfs: HfsOpts,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct LambOpts {
    /// zalpha4, or zalpha5 for the (1 + Z alpha) binding factor; the
    /// config option enable_binding_correction picks the default
    #[arg(long, value_parser = parse_order)]
    pub order: Option<LambOrder>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct HfsOpts {
    /// Apply the Breit factor and the configured user delta
    #[arg(long)]
    pub corrections: bool,
    /// Override user_delta_hyperfine from the config
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_ranges() {
        assert_eq!(parse_z_range("1..40").unwrap(), ZRange { lo: 1, hi: 40 });
        assert_eq!(parse_z_range("7").unwrap(), ZRange { lo: 7, hi: 7 });
        assert!(parse_z_range("0..3").is_err());
        assert!(parse_z_range("5..2").is_err());
        assert!(parse_z_range("a..2").is_err());
        assert!(parse_z_range("-1").is_err());
    }

    #[test]
    fn grammar_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
