use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use super::record::{parse_pairing, NamedVerdict, RunRecord};
use super::report::{agreement_text, table_text, write_table};
use super::spec::GraphSpec;
use super::store::ResultStore;
use crate::error::{Error, Result};
use crate::graph::io::{labels_to_json, to_dimacs, to_graph6};
use crate::graph::{circulant, AccordionParams, Graph};
use crate::hamiltonicity::{
    extend_query, is_ph, is_pmh, pmh_table, Budget, CellStore, DeciderOptions, Status,
};
use crate::isomorphism::{are_isomorphic, circulant_form, is_circulant_quartic, IsoMap};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "accordion",
    version,
    about = "PMH / PH checks for accordion graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a graph and print a JSON summary.
    Construct {
        #[arg(long)]
        graph: GraphSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide PMH or PH, or answer a single extension query.
    Check(CheckArgs),
    /// Shorthand for `check extend`.
    Extend(CheckArgs),
    /// Isomorphism queries.
    Iso(IsoArgs),
    /// Decide PMH over a grid of accordions and compare with the reference.
    Table(TableArgs),
    /// Write a graph as graph6 or DIMACS.
    Export {
        #[arg(long)]
        graph: GraphSpec,
        #[arg(long, value_enum, default_value = "graph6")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        labels_out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    Pmh,
    Ph,
    Extend,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Graph6,
    Dimacs,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    /// Total search nodes for the run.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Total wall-clock seconds for the run.
    #[arg(long)]
    budget_secs: Option<f64>,
    #[arg(long)]
    budget_nodes_per_matching: Option<u64>,
    #[arg(long)]
    budget_secs_per_matching: Option<f64>,
    #[arg(long, env = "ACCORDION_WORKERS")]
    workers: Option<usize>,
}

impl BudgetArgs {
    fn options(&self) -> DeciderOptions {
        let mut opts = DeciderOptions {
            budget: Budget {
                max_nodes: self.budget_nodes,
                max_seconds: self.budget_secs,
                max_nodes_per_matching: self.budget_nodes_per_matching,
                max_seconds_per_matching: self.budget_secs_per_matching,
            },
            ..DeciderOptions::default()
        };
        if let Some(w) = self.workers {
            opts.workers = w.max(1);
        }
        opts
    }
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(value_enum)]
    property: Option<Property>,
    /// Same as the positional property.
    #[arg(long = "check", value_enum)]
    check_flag: Option<Property>,
    #[arg(long)]
    graph: GraphSpec,
    /// Pairing for `extend`: JSON name pairs, a witness file, or `u1-v5 u2-v2 ...`.
    #[arg(long)]
    pairing: Option<PathBuf>,
    #[arg(long)]
    witness_out: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Content-addressed result cache for pmh / ph.
    #[arg(long)]
    store: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args, Debug)]
struct IsoArgs {
    /// `from:SPEC` (the prefix is optional).
    from_pos: Option<String>,
    /// `to:SPEC` (the prefix is optional).
    to_pos: Option<String>,
    #[arg(long)]
    from: Option<GraphSpec>,
    #[arg(long)]
    to: Option<GraphSpec>,
    /// Explicit circulant form of A[n,k], as `n,k`.
    #[arg(long, value_name = "N,K")]
    circulant_form: Option<String>,
    /// Search all quartic circulants of the same order for one isomorphic to SPEC.
    #[arg(long, value_name = "SPEC")]
    circulant_sweep: Option<GraphSpec>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// `nmin:nmax,kmin:kmax`.
    #[arg(long, default_value = "3:13,1:10")]
    table: String,
    #[arg(long, default_value = "table-out")]
    out_dir: PathBuf,
    /// Recompute every cell instead of loading cached results.
    #[arg(long)]
    no_cache: bool,
    #[command(flatten)]
    budget: BudgetArgs,
}

struct Io<'a> {
    argv: Vec<String>,
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn emit(&mut self, path: Option<&PathBuf>, text: &str) -> Result<()> {
        match path {
            Some(p) => std::fs::write(p, format!("{text}\n"))?,
            None => writeln!(self.out, "{text}")?,
        }
        Ok(())
    }

    fn record(&mut self, path: Option<&PathBuf>, rec: &RunRecord) -> Result<()> {
        let text = serde_json::to_string_pretty(rec)?;
        self.emit(path, &text)
    }
}

fn exit_for(status: Status) -> i32 {
    match status {
        Status::Holds => EXIT_OK,
        Status::Fails => EXIT_FAILS,
        Status::BudgetExceeded => EXIT_BUDGET,
    }
}

fn parse_range(token: &str) -> Result<RangeInclusive<usize>> {
    let bad = || Error::Parse(format!("bad range `{token}`: expected MIN:MAX"));
    let (a, b) = token.split_once(':').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

/// `nmin:nmax,kmin:kmax`.
pub fn parse_table_scope(s: &str) -> Result<(RangeInclusive<usize>, RangeInclusive<usize>)> {
    let (n, k) = s.split_once(',').ok_or_else(|| {
        Error::Parse(format!(
            "bad table scope `{s}`: expected nmin:nmax,kmin:kmax"
        ))
    })?;
    Ok((parse_range(n)?, parse_range(k)?))
}

fn name_map(map: &IsoMap, g: &Graph, h: &Graph) -> Value {
    Value::Object(
        map.to_names(g, h)
            .into_iter()
            .map(|(a, b)| (a, Value::String(b)))
            .collect::<Map<_, _>>(),
    )
}

fn construct(io: &mut Io, spec: &GraphSpec, out: Option<&PathBuf>) -> Result<i32> {
    let g = spec.build()?;
    let edges: Vec<[String; 2]> = g
        .edges()
        .into_iter()
        .map(|(a, b)| [g.vertex_name(a), g.vertex_name(b)])
        .collect();
    let summary = json!({
        "graph": spec.to_string(),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "regular_degree": g.regular_degree(),
        "bipartite": g.is_bipartite(),
        "components": g.connected_components().len(),
        "edge_list": edges,
    });
    io.emit(out, &serde_json::to_string_pretty(&summary)?)?;
    Ok(EXIT_OK)
}

fn check(io: &mut Io, args: &CheckArgs, forced: Option<Property>) -> Result<i32> {
    let property = match (forced, args.property, args.check_flag) {
        (Some(p), None, None) => p,
        (Some(p), Some(q), _) | (Some(p), _, Some(q)) if p == q => p,
        (None, Some(p), None) | (None, None, Some(p)) => p,
        (None, Some(p), Some(q)) if p == q => p,
        (None, None, None) => {
            return Err(Error::Parse("missing property: pmh, ph or extend".into()));
        }
        _ => return Err(Error::Parse("conflicting properties given".into())),
    };
    let g = args.graph.build()?;
    let graph = args.graph.to_string();
    let opts = args.budget.options();
    let check_name = match property {
        Property::Pmh => "pmh",
        Property::Ph => "ph",
        Property::Extend => "extend",
    };
    let verdict = match property {
        Property::Extend => {
            let path = args
                .pairing
                .as_ref()
                .ok_or_else(|| Error::Parse("`extend` needs --pairing FILE".into()))?;
            let m = parse_pairing(&g, &std::fs::read_to_string(path)?)?;
            extend_query(&g, &m, &opts.budget)?
        }
        Property::Pmh | Property::Ph => {
            let store = args.store.as_ref().map(ResultStore::open).transpose()?;
            match store.as_ref().and_then(|s| s.get(&graph, check_name)) {
                Some(v) => v,
                None => {
                    let v = if property == Property::Pmh {
                        is_pmh(&g, &opts)?
                    } else {
                        is_ph(&g, &opts)?
                    };
                    if let Some(s) = &store {
                        if v.status != Status::BudgetExceeded {
                            s.put(&graph, check_name, &v)?;
                        }
                    }
                    v
                }
            }
        }
    };
    let named = NamedVerdict::new(&g, &verdict);
    if let Some(p) = &args.witness_out {
        std::fs::write(p, serde_json::to_vec_pretty(&named)?)?;
    }
    let rec = RunRecord::new(
        io.argv.clone(),
        graph,
        check_name,
        serde_json::to_value(&named)?,
        Some(verdict.stats.clone()),
    );
    io.record(args.out.as_ref(), &rec)?;
    Ok(exit_for(verdict.status))
}

fn strip_prefix(s: &str, prefix: &str) -> Result<GraphSpec> {
    s.strip_prefix(prefix).unwrap_or(s).parse()
}

fn iso(io: &mut Io, args: &IsoArgs) -> Result<i32> {
    if let Some(nk) = &args.circulant_form {
        let bad = || Error::Parse(format!("bad --circulant-form `{nk}`: expected N,K"));
        let (n, k) = nk.split_once(',').ok_or_else(bad)?;
        let params = AccordionParams::new(
            n.trim().parse().map_err(|_| bad())?,
            k.trim().parse().map_err(|_| bad())?,
        )?;
        let g = crate::graph::accordion(params)?;
        return match circulant_form(params)? {
            Some(form) => {
                let h = circulant(form.params);
                let (a, b) = form.params.lengths();
                let v = json!({
                    "params": [form.params.order(), a, b],
                    "provenance": form.map.provenance(),
                    "map": name_map(&form.map, &g, &h),
                });
                io.emit(args.out.as_ref(), &serde_json::to_string_pretty(&v)?)?;
                Ok(EXIT_OK)
            }
            None => {
                io.emit(args.out.as_ref(), "no explicit circulant form")?;
                Ok(EXIT_FAILS)
            }
        };
    }
    if let Some(spec) = &args.circulant_sweep {
        let g = spec.build()?;
        return match is_circulant_quartic(&g)? {
            Some((p, map)) => {
                let (a, b) = p.lengths();
                let v = json!({
                    "params": [p.order(), a, b],
                    "map": name_map(&map, &g, &circulant(p)),
                });
                io.emit(args.out.as_ref(), &serde_json::to_string_pretty(&v)?)?;
                Ok(EXIT_OK)
            }
            None => {
                io.emit(args.out.as_ref(), "non-circulant")?;
                Ok(EXIT_FAILS)
            }
        };
    }
    let from = match (&args.from, &args.from_pos) {
        (Some(s), None) => s.clone(),
        (None, Some(s)) => strip_prefix(s, "from:")?,
        _ => {
            return Err(Error::Parse(
                "give exactly one of --from / from:SPEC".into(),
            ))
        }
    };
    let to = match (&args.to, &args.to_pos) {
        (Some(s), None) => s.clone(),
        (None, Some(s)) => strip_prefix(s, "to:")?,
        _ => return Err(Error::Parse("give exactly one of --to / to:SPEC".into())),
    };
    let (g, h) = (from.build()?, to.build()?);
    match are_isomorphic(&g, &h) {
        Some(map) => {
            let v = json!({
                "from": from.to_string(),
                "to": to.to_string(),
                "map": name_map(&map, &g, &h),
            });
            io.emit(args.out.as_ref(), &serde_json::to_string_pretty(&v)?)?;
            Ok(EXIT_OK)
        }
        None => {
            io.emit(args.out.as_ref(), "non-isomorphic")?;
            Ok(EXIT_FAILS)
        }
    }
}

fn table(io: &mut Io, args: &TableArgs) -> Result<i32> {
    let (ns, ks) = parse_table_scope(&args.table)?;
    let opts = args.budget.options();
    std::fs::create_dir_all(&args.out_dir)?;
    let store = if args.no_cache {
        None
    } else {
        Some(ResultStore::open(args.out_dir.join("cache"))?)
    };
    let t = pmh_table(ns, ks, &opts, store.as_ref().map(|s| s as &dyn CellStore))?;
    let files = write_table(&t, &args.out_dir)?;
    let agreement = t.agreement();
    write!(io.out, "{}\n{}", table_text(&t), agreement_text(&agreement))?;
    let rec = RunRecord::new(
        io.argv.clone(),
        args.table.clone(),
        "table",
        json!({ "files": files, "agreement": agreement }),
        None,
    );
    std::fs::write(
        args.out_dir.join("run.json"),
        serde_json::to_vec_pretty(&rec)?,
    )?;
    Ok(if !agreement.mismatches.is_empty() {
        EXIT_FAILS
    } else if !agreement.undecided.is_empty() {
        EXIT_BUDGET
    } else {
        EXIT_OK
    })
}

fn export(
    io: &mut Io,
    spec: &GraphSpec,
    format: Format,
    out: Option<&PathBuf>,
    labels_out: Option<&PathBuf>,
) -> Result<i32> {
    let g = spec.build()?;
    let text = match format {
        Format::Graph6 => to_graph6(&g),
        Format::Dimacs => to_dimacs(&g),
    };
    io.emit(out, text.trim_end())?;
    if let Some(p) = labels_out {
        let json = labels_to_json(&g)
            .ok_or_else(|| Error::Precondition(format!("`{spec}` has no vertex labels")))?;
        std::fs::write(p, json)?;
    }
    Ok(EXIT_OK)
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run(argv: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut io = Io { argv, out };
    let result = match &cli.command {
        Command::Construct { graph, out } => construct(&mut io, graph, out.as_ref()),
        Command::Check(a) => check(&mut io, a, None),
        Command::Extend(a) => check(&mut io, a, Some(Property::Extend)),
        Command::Iso(a) => iso(&mut io, a),
        Command::Table(a) => table(&mut io, a),
        Command::Export {
            graph,
            format,
            out,
            labels_out,
        } => export(&mut io, graph, *format, out.as_ref(), labels_out.as_ref()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
