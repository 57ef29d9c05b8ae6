//! `twistab oracle …`: the brute-force checks behind the acceptance suite.

use clap::Subcommand;
use serde_json::{json, Value};

use twistab_core::json::InputError;
use twistab_core::monoid::AdmissibleMonoid;
use twistab_oracle::algebra::{orbifold_abelianization_by_minors, torsor_count_brute, xm_count_brute};
use twistab_oracle::hassett::{dm_stable, stabilize_greedy, Shape};
use twistab_oracle::{fuzz, gen, grid};

use crate::commands::{OrdersArgs, Report, XmArgs};
use crate::input::{parse_group, parse_monoid, parse_orders, CurveArgs};

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Abelianized orbifold fundamental group by determinantal divisors.
    Abelianization(OrdersArgs),
    /// Torsor count by enumerating commuting tuples.
    Torsors {
        #[command(flatten)]
        orders: OrdersArgs,
        #[arg(long)]
        group: String,
    },
    /// |X| and |X_m| by closing generator classes.
    Xm(XmArgs),
    /// Classical weighted stabilization of the coarse curve.
    Stabilize(CurveArgs),
    /// Deligne–Mumford stability of the coarse curve.
    DmStable(CurveArgs),
    /// Sign patterns met by the grid {1/N..N/N}^n.
    Grid {
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(long, default_value_t = 24)]
        denom: u64,
    },
    /// Random cross-checks seeded by TWISTAB_SEED; exits 1 on any failure.
    Fuzz {
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

fn shape_json(s: &Shape) -> Value {
    let vertices: serde_json::Map<String, Value> = s
        .vertices
        .iter()
        .map(|(id, (g, d, clusters))| (id.clone(), json!({ "genus": g, "degree": d, "clusters": clusters })))
        .collect();
    json!({ "vertices": vertices, "edges": s.edges })
}

pub fn run(cmd: &OracleCommand) -> Result<Report, InputError> {
    match cmd {
        OracleCommand::Abelianization(args) => {
            let r = parse_orders(&args.orders)?;
            if args.m == 0 {
                return Err(InputError::new("bad_m", "m must be a positive integer", "m"));
            }
            Ok(Report::ok(json!({ "invariant_factors": orbifold_abelianization_by_minors(&r, args.m) })))
        }
        OracleCommand::Torsors { orders, group } => {
            let r = parse_orders(&orders.orders)?;
            let g = parse_group(group)?;
            Ok(Report::ok(json!({ "count": torsor_count_brute(&r, orders.m, &g) })))
        }
        OracleCommand::Xm(args) => {
            let (n, gens) = parse_monoid(&args.monoid, args.dim)?;
            let monoid =
                AdmissibleMonoid::new(n, gens).map_err(|e| InputError::new("bad_monoid", e.to_string(), "monoid"))?;
            let (x, xm) = xm_count_brute(&monoid, args.m);
            Ok(Report::ok(json!({ "x_order": x, "xm_order": xm })))
        }
        OracleCommand::Stabilize(args) => {
            let l = args.load()?;
            let w = l.require_weights()?;
            if w.len() != l.graph.n {
                return Err(InputError::new("length_mismatch", format!("expected {} weights", l.graph.n), "weights"));
            }
            let out = stabilize_greedy(&l.graph, w.entries());
            Ok(Report::ok(json!({ "stable_model": out.as_ref().map(shape_json) })))
        }
        OracleCommand::DmStable(args) => {
            let l = args.load()?;
            let stable = dm_stable(&l.graph);
            Ok(Report::predicate(json!({ "stable": stable }), stable))
        }
        OracleCommand::Grid { n, denom } => {
            if *n == 0 || *n > 6 || *denom == 0 {
                return Err(InputError::new("bad_dimension", "need 1 ≤ n ≤ 6 and a positive denominator", "n"));
            }
            let patterns = grid::grid_chambers(*n, *denom);
            Ok(Report::ok(json!({ "n": n, "denom": denom, "count": patterns.len(), "families": patterns })))
        }
        OracleCommand::Fuzz { cases } => {
            let report = fuzz::run(gen::seed_from_env(0), *cases);
            let ok = report.failures.is_empty();
            Ok(Report::predicate(
                json!({ "seed": report.seed, "cases": report.cases, "failures": report.failures }),
                ok,
            ))
        }
    }
}
