//! Each subcommand computes a complete [`Table`] before anything is written,
//! so a failure part-way through a scan leaves the output stream empty.

use std::fmt::Display;

use effcoul_core::data::load_reference_records;
use effcoul_core::eigensolver::{analytic_expansion, breakdown_sum, solve_effective};
use effcoul_core::observables::{
    compare, hyperfine_splitting, lamb_shift, log_grid, radiative_potential_profile, to_mhz,
};
use effcoul_core::{
    BetheLogTable, Config, CouplingModel, ExpansionKind, LambOrder, Quantity, QuantumState,
    ReferenceRecord, SplittingResult,
};

use crate::args::{Command, HfsOpts, LambOpts, ModelArg, QuantityArg, ZRange};
use crate::table::{Cell, Table};

pub struct Context {
    pub config: Config,
    pub bethe: BetheLogTable,
    /// `None` when references are switched off.
    pub references: Option<Vec<ReferenceRecord>>,
}

/// A computation failure, already worded for the user.
#[derive(Debug)]
pub struct Failure(pub String);

type Outcome<T> = Result<T, Failure>;

fn at<E: Display>(z: u32, what: impl Display) -> impl FnOnce(E) -> Failure {
    move |e| Failure(format!("Z={z}, {what}: {e}"))
}

impl Context {
    fn lamb_order(&self, opts: LambOpts) -> LambOrder {
        opts.order
            .unwrap_or(if self.config.options.enable_binding_correction {
                LambOrder::ZAlpha5
            } else {
                LambOrder::ZAlpha4
            })
    }

    fn user_delta(&self, opts: HfsOpts) -> f64 {
        opts.delta
            .unwrap_or(self.config.options.user_delta_hyperfine)
    }

    fn lamb(&self, z: u32, n: u32, order: LambOrder) -> Outcome<SplittingResult> {
        lamb_shift(z, n, order, &self.config.constants, &self.bethe)
            .map_err(at(z, format!("{n}s_{{1/2}}-{n}p_{{1/2}}")))
    }

    fn hfs(&self, z: u32, n: u32, opts: HfsOpts) -> Outcome<SplittingResult> {
        hyperfine_splitting(
            z,
            n,
            &self.config.constants,
            opts.corrections,
            self.user_delta(opts),
        )
        .map_err(at(z, format!("{n}s_{{1/2}} S=1/S=0")))
    }
}

pub fn execute(ctx: &Context, command: &Command) -> Outcome<Table> {
    match command {
        Command::Spectrum {
            z,
            n,
            kappa,
            spin,
            model,
            lamb,
            hfs,
        } => spectrum(ctx, *z, *n, *kappa, *spin, *model, *lamb, *hfs),
        Command::Lamb { z, n, lamb } => {
            let order = ctx.lamb_order(*lamb);
            let results = z
                .iter()
                .map(|z| ctx.lamb(z, *n, order))
                .collect::<Outcome<Vec<_>>>()?;
            Ok(splitting_table(&results))
        }
        Command::Hfs { z, n, hfs } => {
            let results = z
                .iter()
                .map(|z| ctx.hfs(z, *n, *hfs))
                .collect::<Outcome<Vec<_>>>()?;
            Ok(splitting_table(&results))
        }
        Command::Scan {
            quantity,
            z,
            n,
            orders,
            hfs,
        } => scan(ctx, *quantity, *z, *n, orders, *hfs),
        Command::Expand {
            z,
            n,
            kappa,
            spin,
            kind,
        } => expand(ctx, *z, *n, *kappa, *spin, *kind),
        Command::Figure1 {
            z,
            ns,
            q_min,
            q_max,
            points,
        } => {
            if !(*q_min > 0.0 && q_max > q_min) {
                return Err(Failure(format!(
                    "need 0 < q-min < q-max, got {q_min}..{q_max}"
                )));
            }
            let radii = log_grid(*q_min, *q_max, *points);
            let samples =
                radiative_potential_profile(*z, ns, &radii, &ctx.config.constants, &ctx.bethe)
                    .map_err(at(*z, "ns_{1/2} radiative potential"))?;
            let mut table = Table::new(&["n", "q", "coulomb", "radiative"]);
            for s in samples {
                table.push(vec![
                    s.n.into(),
                    s.q.into(),
                    s.coulomb.into(),
                    s.radiative.into(),
                ]);
            }
            Ok(table)
        }
        Command::Compare { hfs } => compare_all(ctx, *hfs),
    }
}

/// kappa values of shell n ordered -1, 1, -2, 2, ...
fn kappas(n: u32) -> Vec<i32> {
    let n = n as i32;
    (1..=n).flat_map(|k| [-k, k]).filter(|&k| k < n).collect()
}

#[allow(clippy::too_many_arguments)]
fn spectrum(
    ctx: &Context,
    zs: ZRange,
    n: u32,
    kappa: Option<i32>,
    spin: Option<u8>,
    model: ModelArg,
    lamb: LambOpts,
    hfs: HfsOpts,
) -> Outcome<Table> {
    let binding = ctx.lamb_order(lamb) == LambOrder::ZAlpha5;
    let user_delta = ctx.user_delta(hfs);
    let coupling = match model {
        ModelArg::Dirac => CouplingModel::Dirac,
        ModelArg::Lamb => CouplingModel::Lamb { binding },
        ModelArg::Hyperfine => CouplingModel::Hyperfine {
            corrections: hfs.corrections,
            user_delta,
        },
        ModelArg::Combined => CouplingModel::Combined {
            binding,
            hyperfine_corrections: hfs.corrections,
            user_delta,
        },
    };
    let spins: Vec<Option<u8>> = match (spin, model) {
        (Some(s), _) => vec![Some(s)],
        (None, ModelArg::Hyperfine | ModelArg::Combined) => vec![Some(1), Some(0)],
        (None, _) => vec![None],
    };
    let kappa_list = kappa.map_or_else(|| kappas(n), |k| vec![k]);
    let model_name = format!("{model:?}").to_lowercase();
    let c = &ctx.config.constants;

    let mut table = Table::new(&[
        "Z",
        "n",
        "kappa",
        "state",
        "S",
        "model",
        "epsilon",
        "deficit",
        "binding_MHz",
        "extrapolated",
    ]);
    for z in zs.iter() {
        let za = f64::from(z) * c.alpha;
        for &k in &kappa_list {
            for &s in &spins {
                let state =
                    QuantumState::new(n, k, s).map_err(at(z, format!("(n={n}, kappa={k})")))?;
                let g = coupling
                    .coupling(&state, za, c, &ctx.bethe)
                    .map_err(at(z, state))?;
                let (level, _) = solve_effective(&state, za, &g).map_err(at(z, state))?;
                table.push(vec![
                    z.into(),
                    n.into(),
                    k.into(),
                    state.label().map_or(Cell::Empty, Cell::from),
                    s.map(u32::from).into(),
                    model_name.as_str().into(),
                    level.epsilon.into(),
                    level.deficit.into(),
                    to_mhz(level.deficit, c).into(),
                    (z != 1 && matches!(model, ModelArg::Hyperfine | ModelArg::Combined)).into(),
                ]);
            }
        }
    }
    Ok(table)
}

fn splitting_table(results: &[SplittingResult]) -> Table {
    let mut table = Table::new(&[
        "Z",
        "n",
        "quantity",
        "order",
        "value_MHz",
        "epsilon_upper",
        "epsilon_lower",
        "extrapolated",
    ]);
    for r in results {
        table.push(vec![
            r.z.into(),
            r.n.into(),
            r.kind.quantity().as_str().into(),
            r.order_label.as_str().into(),
            r.value_mhz.into(),
            r.components[0].epsilon.into(),
            r.components[1].epsilon.into(),
            r.extrapolated.into(),
        ]);
    }
    table
}

fn scan(
    ctx: &Context,
    quantity: QuantityArg,
    zs: ZRange,
    n: u32,
    orders: &[LambOrder],
    hfs: HfsOpts,
) -> Outcome<Table> {
    let mut results = Vec::new();
    for z in zs.iter() {
        match quantity {
            QuantityArg::Lamb => {
                for &order in orders {
                    results.push(ctx.lamb(z, n, order)?);
                }
            }
            QuantityArg::Hfs => results.push(ctx.hfs(z, n, hfs)?),
        }
    }

    let Some(references) = &ctx.references else {
        let mut table = Table::new(&["Z", "n", "quantity", "order", "value_MHz"]);
        for r in &results {
            table.push(vec![
                r.z.into(),
                r.n.into(),
                r.kind.quantity().as_str().into(),
                r.order_label.as_str().into(),
                r.value_mhz.into(),
            ]);
        }
        return Ok(table);
    };
    let mut table = Table::new(&[
        "Z",
        "n",
        "quantity",
        "order",
        "value_MHz",
        "reference_MHz",
        "source",
        "discrepancy_percent",
    ]);
    for row in compare(&results, references) {
        let r = &row.result;
        table.push(vec![
            r.z.into(),
            r.n.into(),
            r.kind.quantity().as_str().into(),
            r.order_label.as_str().into(),
            r.value_mhz.into(),
            row.reference.as_ref().map(|x| x.value_mhz).into(),
            row.reference.as_ref().map(|x| x.source.as_str()).into(),
            row.discrepancy_percent.into(),
        ]);
    }
    Ok(table)
}

fn expand(
    ctx: &Context,
    z: u32,
    n: u32,
    kappa: i32,
    spin: Option<u8>,
    kind: ModelArg,
) -> Outcome<Table> {
    let state =
        QuantumState::new(n, kappa, spin).map_err(at(z, format!("(n={n}, kappa={kappa})")))?;
    let which = match kind {
        ModelArg::Dirac => ExpansionKind::Dirac,
        ModelArg::Lamb => ExpansionKind::Lamb,
        ModelArg::Hyperfine => ExpansionKind::Hyperfine,
        ModelArg::Combined => ExpansionKind::Combined,
    };
    let c = &ctx.config.constants;
    let terms = analytic_expansion(&state, z, c, which, &ctx.bethe).map_err(at(z, state))?;
    let mut table = Table::new(&["term", "value", "value_MHz"]);
    for t in &terms {
        table.push(vec![
            t.label.as_str().into(),
            t.value.into(),
            to_mhz(t.value, c).into(),
        ]);
    }
    let total = breakdown_sum(&terms);
    table.push(vec!["total".into(), total.into(), to_mhz(total, c).into()]);
    Ok(table)
}

/// Recomputes the quantity behind every reference record.
fn compare_all(ctx: &Context, hfs: HfsOpts) -> Outcome<Table> {
    let mut table = Table::new(&[
        "label",
        "Z",
        "n",
        "quantity",
        "order",
        "value_MHz",
        "reference_MHz",
        "source",
        "discrepancy_percent",
    ]);
    let references = ctx.references.as_deref().unwrap_or_default();
    for rec in references {
        let computed: Vec<(String, Option<f64>)> = match rec.quantity {
            Quantity::LambShift => [LambOrder::ZAlpha4, LambOrder::ZAlpha5]
                .into_iter()
                .map(|o| {
                    Ok((
                        o.label().to_string(),
                        Some(ctx.lamb(rec.z, rec.n, o)?.value_mhz),
                    ))
                })
                .collect::<Outcome<_>>()?,
            Quantity::LambShiftIncrement => {
                let lo = ctx.lamb(rec.z, rec.n, LambOrder::ZAlpha4)?.value_mhz;
                let hi = ctx.lamb(rec.z, rec.n, LambOrder::ZAlpha5)?.value_mhz;
                vec![("zalpha5-zalpha4".to_string(), Some(hi - lo))]
            }
            Quantity::HyperfineSplitting => {
                let r = ctx.hfs(rec.z, rec.n, hfs)?;
                vec![(r.order_label, Some(r.value_mhz))]
            }
            // a bare (Z, n) does not pin down which level is meant
            Quantity::LevelEnergy => vec![(String::new(), None)],
        };
        for (order, value) in computed {
            let discrepancy =
                value.map(|v| effcoul_core::observables::discrepancy_percent(v, rec.value_mhz));
            table.push(vec![
                rec.label.as_str().into(),
                rec.z.into(),
                rec.n.into(),
                rec.quantity.as_str().into(),
                (!order.is_empty()).then_some(order).into(),
                value.into(),
                rec.value_mhz.into(),
                rec.source.as_str().into(),
                discrepancy.into(),
            ]);
        }
    }
    Ok(table)
}

pub fn read_references(text: &str) -> Result<Vec<ReferenceRecord>, String> {
    load_reference_records(text).map_err(|e| e.to_string())
}
