use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use twistab_core::chamber::{chambers, ChamberError};
use twistab_core::curve::{validate, CurveError, CurveGraph, Violation, WeightVector};
use twistab_core::json::{InputError, MonodromyDoc};
use twistab_core::monoid::{count_abelian_torsors, torsion_pic, AdmissibleMonoid, MonoidError};
use twistab_core::stability::is_stable;
use twistab_core::stabilization::{
    reduce_weights, same_chamber, stabilize_with, ContractionOrder, StabilizationError, StableMapRecord, TraceStep,
};

use crate::input::{parse_group, parse_monoid, parse_orders, parse_weights, read_json, CurveArgs};
use crate::oracle::OracleCommand;

/// What a command produced: a JSON value and whether its predicate held.
pub struct Report {
    pub value: Value,
    pub holds: bool,
}

impl Report {
    pub fn ok(value: Value) -> Self {
        Report { value, holds: true }
    }

    pub fn predicate(value: Value, holds: bool) -> Self {
        Report { value, holds }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a curve, its weights and monodromy for structural errors.
    Validate(CurveArgs),
    /// Stability report; exits 1 when the map is not stable.
    Stability(CurveArgs),
    /// Stabilize a prestable map and print the record with its trace.
    Stabilize(StabilizeArgs),
    /// Re-stabilize a record for smaller weights.
    Reduce(ReduceArgs),
    /// Enumerate the chambers of (0,1]^n.
    Chambers {
        #[arg(short = 'n', long)]
        n: usize,
    },
    /// Exit 0 if two weight vectors lie in the same chamber, 1 otherwise.
    SameChamber {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Invariant factors of X_m for a monoid given by its generators.
    Xm(XmArgs),
    /// Invariant factors of the torsion Picard group of P¹ with root orders and m.
    Picard(OrdersArgs),
    /// Number of torsors with abelian contraction, up to conjugation.
    Torsors {
        #[command(flatten)]
        orders: OrdersArgs,
        #[arg(long)]
        group: String,
    },
    /// Run a brute-force oracle.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args, Debug)]
pub struct StabilizeArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// ascending, descending, or shuffled:SEED
    #[arg(long, default_value = "ascending")]
    pub order: String,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    /// A record printed by `stabilize` or `reduce`.
    #[arg(long, value_name = "FILE")]
    pub record: PathBuf,
    /// The new, smaller weights.
    #[arg(long, allow_hyphen_values = true)]
    pub weights: String,
    /// Group of the record's monodromy.
    #[arg(long, default_value = "trivial")]
    pub group: String,
}

#[derive(Args, Debug)]
pub struct XmArgs {
    /// Generators as a JSON array of fraction-string arrays, e.g. '[["1/6"]]'.
    #[arg(long)]
    pub monoid: String,
    #[arg(long)]
    pub m: u64,
    /// Ambient dimension, needed only when the generator list is empty.
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Args, Debug)]
pub struct OrdersArgs {
    /// Comma-separated root orders of the stacky points.
    #[arg(long, default_value = "")]
    pub orders: String,
    #[arg(long)]
    pub m: u64,
}

#[derive(Deserialize)]
struct RecordDoc {
    curve: CurveGraph,
    monodromy: MonodromyDoc,
    #[serde(default)]
    trace: Vec<TraceStep>,
    weights: WeightVector,
}

fn violation_error(v: &[Violation]) -> InputError {
    match v.first() {
        Some(first) => InputError::new("invalid_curve", first.message.clone(), first.location.clone()),
        None => InputError::new("invalid_curve", "invalid curve", "curve"),
    }
}

pub fn curve_error(e: CurveError) -> InputError {
    match e {
        CurveError::Invalid(v) => violation_error(&v),
        CurveError::LengthMismatch { .. } => InputError::new("length_mismatch", e.to_string(), "weights"),
        CurveError::InvalidWeights(_) => InputError::new("bad_weights", e.to_string(), "weights"),
        other => InputError::new("invalid_curve", other.to_string(), "curve"),
    }
}

fn stabilization_error(e: StabilizationError) -> InputError {
    match e {
        StabilizationError::NothingLeft => InputError::new("no_stable_model", e.to_string(), "curve"),
        StabilizationError::InvalidInput(v) => violation_error(&v),
        StabilizationError::NotPrestable => InputError::new("not_prestable", e.to_string(), "weights"),
        StabilizationError::NotDominated(i) => {
            InputError::new("not_dominated", e.to_string(), format!("weights[{}]", i - 1))
        }
        StabilizationError::LengthMismatch { .. } => InputError::new("length_mismatch", e.to_string(), "weights"),
        StabilizationError::Curve(c) => curve_error(c),
    }
}

fn monoid_error(e: MonoidError) -> InputError {
    let code = match e {
        MonoidError::ZeroM => "bad_m",
        _ => "bad_monoid",
    };
    InputError::new(code, e.to_string(), if code == "bad_m" { "m" } else { "monoid" })
}

fn parse_order(s: &str) -> Result<ContractionOrder, InputError> {
    let bad = || InputError::new("bad_order", format!("unknown contraction order {s:?}"), "order");
    match s {
        "ascending" => Ok(ContractionOrder::Ascending),
        "descending" => Ok(ContractionOrder::Descending),
        _ => {
            let seed = s.strip_prefix("shuffled:").ok_or_else(bad)?;
            seed.parse().map(ContractionOrder::Shuffled).map_err(|_| bad())
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

pub fn run(cmd: &Command) -> Result<Report, InputError> {
    match cmd {
        Command::Validate(args) => {
            let l = args.load()?;
            let v = validate(&l.graph, l.weights.as_ref(), Some(&l.mono));
            if !v.is_empty() {
                return Err(violation_error(&v));
            }
            Ok(Report::ok(json!({ "valid": true })))
        }
        Command::Stability(args) => {
            let l = args.load()?;
            let report = is_stable(&l.graph, l.require_weights()?, &l.mono).map_err(curve_error)?;
            Ok(Report::predicate(to_value(&report), report.stable))
        }
        Command::Stabilize(args) => {
            let l = args.curve.load()?;
            let order = parse_order(&args.order)?;
            let rec = stabilize_with(&l.graph, l.require_weights()?, &l.mono, order).map_err(stabilization_error)?;
            Ok(Report::ok(to_value(&rec)))
        }
        Command::Reduce(args) => {
            let doc: RecordDoc = read_json(&args.record, "record")?;
            let group = Arc::new(parse_group(&args.group)?);
            let mono = doc.monodromy.to_assignment(&doc.curve, group)?;
            let rec = StableMapRecord { graph: doc.curve, weights: doc.weights, mono, trace: doc.trace };
            let a = parse_weights(&args.weights)?;
            let out = reduce_weights(&rec, &a).map_err(stabilization_error)?;
            Ok(Report::ok(to_value(&out)))
        }
        Command::Chambers { n } => {
            let cs = chambers(*n).map_err(|e: ChamberError| InputError::new("bad_dimension", e.to_string(), "n"))?;
            Ok(Report::ok(json!({ "n": n, "count": cs.len(), "chambers": to_value(&cs) })))
        }
        Command::SameChamber { a, b } => {
            let (a, b) = (parse_weights(a)?, parse_weights(b)?);
            let same = same_chamber(&a, &b).map_err(stabilization_error)?;
            Ok(Report::predicate(json!({ "same_chamber": same }), same))
        }
        Command::Xm(args) => {
            if args.m == 0 {
                return Err(monoid_error(MonoidError::ZeroM));
            }
            let (n, gens) = parse_monoid(&args.monoid, args.dim)?;
            let monoid = AdmissibleMonoid::new(n, gens).map_err(monoid_error)?;
            let xm = monoid.x_group().x_m(args.m).map_err(monoid_error)?;
            Ok(Report::ok(json!({ "invariant_factors": to_value(xm.invariant_factors()) })))
        }
        Command::Picard(args) => {
            let r = parse_orders(&args.orders)?;
            let pic = torsion_pic(&r, args.m).map_err(monoid_error)?;
            Ok(Report::ok(json!({ "invariant_factors": to_value(&pic) })))
        }
        Command::Torsors { orders, group } => {
            let r = parse_orders(&orders.orders)?;
            let g = parse_group(group)?;
            let count = count_abelian_torsors(&r, orders.m, &g).map_err(monoid_error)?;
            Ok(Report::ok(json!({ "count": count })))
        }
        Command::Oracle(o) => crate::oracle::run(o),
    }
}
