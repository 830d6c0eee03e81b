use thiserror::Error;

/// Everything that can go wrong while loading data or computing a level.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("config key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("line {line}: {reason}")]
    Data { line: usize, reason: String },

    #[error("duplicate Bethe-logarithm entry for (n={n}, l={l})")]
    DuplicateBethe { n: u32, l: u32 },

    #[error("no Bethe-logarithm entry for (n={n}, l={l})")]
    MissingBethe { n: u32, l: u32 },

    #[error("invalid quantum numbers: {0}")]
    State(String),

    #[error("cannot parse spectroscopic label `{label}`: {reason}")]
    Label { label: String, reason: String },

    #[error("{0}")]
    Domain(String),

    #[error(
        "supercritical coupling: kappa^2 = {kappa_sq} <= (Z alpha)^2 g_a g_b = {coupling_sq}; \
         bound solutions only up to Z ~ 1/alpha"
    )]
    Supercritical { kappa_sq: f64, coupling_sq: f64 },

    #[error("series does not terminate: relative residual {residual:e}")]
    Termination { residual: f64 },

    #[error("no root of the quantization condition with a positive right-hand side")]
    NoPhysicalRoot,

    #[error("closed-form root {closed_form} and bracketed root {bracketed} disagree by {diff:e}")]
    RootDisagreement {
        closed_form: f64,
        bracketed: f64,
        diff: f64,
    },

    #[error("root bracket [{lo}, {hi}] does not straddle a sign change")]
    NoBracket { lo: f64, hi: f64 },

    #[error("order fit is ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("correction `{0}` already applied")]
    AlreadyApplied(&'static str),

    #[error("correction `{correction}` does not apply to a {kind} factor")]
    WrongKind {
        correction: &'static str,
        kind: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
