//! Command dispatch for the `graphk` binary. `run` never prints; it returns the
//! rendered text and the exit code so the whole interface is testable.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use graphk::afcore::bratteli;
use graphk::checks::{run_all, Graphs};
use graphk::graph::{parse_chain, parse_graph, Graph, RelativeGraph};
use graphk::ktheory::{direct_limit, kgroups, smith, FgAbelianGroup};
use graphk::matrix::IntMatrix;

/// Exit code 0 on success, 1 for a negative verdict, 2 for bad input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub code: i32,
    pub text: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "graphk",
    about = "K-theory of graph C*-algebras from finite graph data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-vertex classification table.
    Classify { graph: PathBuf },
    /// K0 and K1 of a graph with a chosen relative set.
    K {
        graph: PathBuf,
        /// Use the empty relative set.
        #[arg(long, conflicts_with = "relative")]
        toeplitz: bool,
        /// Comma-separated relative vertices (default: every regular vertex).
        #[arg(long, value_delimiter = ',')]
        relative: Option<Vec<String>>,
    },
    /// Direct-limit approximation along a chain file.
    Limit {
        chain: PathBuf,
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
    /// Bratteli diagram of the approximants up to level k.
    Bratteli {
        graph: PathBuf,
        #[arg(short = 'k')]
        kmax: usize,
        #[arg(long, value_delimiter = ',')]
        relative: Option<Vec<String>>,
        /// Also write Graphviz DOT to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Smith normal form of an integer matrix file.
    Snf { matrix: PathBuf },
    /// Seeded randomized checks of the module identities on a graph.
    CheckLemmas {
        graph: PathBuf,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return CommandResult {
                code,
                text: e.render().to_string(),
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, text)) => CommandResult { code, text },
        Err(e) => CommandResult {
            code: 2,
            text: format!("error: {e:#}\n"),
        },
    }
}

fn dispatch(cmd: Command) -> Result<(i32, String)> {
    match cmd {
        Command::Classify { graph } => classify(&read_graph(&graph)?),
        Command::K {
            graph,
            toeplitz,
            relative,
        } => {
            let g = read_graph(&graph)?;
            let f = if toeplitz {
                RelativeGraph::toeplitz(g)
            } else {
                relative_graph(g, relative)?
            };
            k_groups(&f)
        }
        Command::Limit { chain, window } => limit(&chain, window),
        Command::Bratteli {
            graph,
            kmax,
            relative,
            dot,
        } => {
            let f = relative_graph(read_graph(&graph)?, relative)?;
            bratteli_cmd(&f, kmax, dot.as_deref())
        }
        Command::Snf { matrix } => snf(&read_matrix(&matrix)?),
        Command::CheckLemmas { graph, cases, seed } => {
            let f = RelativeGraph::standalone(read_graph(&graph)?);
            check_lemmas(&f, cases, seed)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn relative_graph(g: Graph, relative: Option<Vec<String>>) -> Result<RelativeGraph> {
    Ok(match relative {
        None => RelativeGraph::standalone(g),
        Some(ids) => {
            let ids = ids.into_iter().filter(|s| !s.is_empty());
            RelativeGraph::new(g, ids).context("invalid --relative")?
        }
    })
}

/// First line `rows cols`, then the entries row by row.
fn read_matrix(path: &Path) -> Result<IntMatrix> {
    let text = read(path)?;
    let mut tokens = text.split_whitespace();
    let mut dim = |what: &str| -> Result<usize> {
        let t = tokens.next().with_context(|| format!("missing {what}"))?;
        t.parse().with_context(|| format!("bad {what} `{t}`"))
    };
    let (rows, cols) = (dim("row count")?, dim("column count")?);
    let entries = tokens
        .map(|t| {
            t.parse::<BigInt>()
                .with_context(|| format!("bad entry `{t}`"))
        })
        .collect::<Result<Vec<_>>>()?;
    if entries.len() != rows * cols {
        bail!("expected {} entries, found {}", rows * cols, entries.len());
    }
    let data: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| entries[i * cols..(i + 1) * cols].to_vec())
        .collect();
    Ok(IntMatrix::from_rows(cols, data))
}

fn classify(g: &Graph) -> Result<(i32, String)> {
    let width = g
        .vertex_ids()
        .iter()
        .map(|s| s.chars().count())
        .max()
        .unwrap_or(0)
        .max(6);
    let mut out = format!("{:<width$}  {:<16}  source\n", "vertex", "kind");
    for (v, id) in g.vertex_ids().iter().enumerate() {
        let c = g.classify(v);
        let kind = c.kind.to_string();
        let _ = writeln!(
            out,
            "{id:<width$}  {kind:<16}  {}",
            if c.source { "yes" } else { "no" }
        );
    }
    Ok((0, out))
}

fn render_group(out: &mut String, name: &str, g: &FgAbelianGroup) {
    let _ = writeln!(out, "{name} = {}", g.canonical());
    for (i, v) in g.generators().iter().enumerate() {
        match g.generator_order(i) {
            Some(d) => {
                let _ = writeln!(out, "  generator: {} (order {d})", g.render_vector(v));
            }
            None => {
                let _ = writeln!(out, "  generator: {}", g.render_vector(v));
            }
        }
    }
}

fn k_groups(f: &RelativeGraph) -> Result<(i32, String)> {
    let k = kgroups(f);
    let ids: Vec<&str> = f.relative_ids().into_iter().collect();
    let mut out = format!("relative set: {{{}}}\n", ids.join(", "));
    render_group(&mut out, "K0", &k.k0);
    render_group(&mut out, "K1", &k.k1);
    Ok((0, out))
}

fn limit(path: &Path, window: usize) -> Result<(i32, String)> {
    let chain = parse_chain(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    let r = direct_limit(&chain, window)?;
    let mut out = format!("stages: {}\n", chain.len());
    let _ = writeln!(out, "K0 images: {}", r.k0_images.join(", "));
    let _ = writeln!(out, "K1 images: {}", r.k1_images.join(", "));
    render_group(&mut out, "K0", &r.k0);
    render_group(&mut out, "K1", &r.k1);
    let verdict = if r.stabilized { "yes" } else { "no" };
    let _ = writeln!(
        out,
        "stabilized: {verdict} (last {window} images agree: heuristic, not a proof)"
    );
    Ok((if r.stabilized { 0 } else { 1 }, out))
}

fn bratteli_cmd(f: &RelativeGraph, kmax: usize, dot: Option<&Path>) -> Result<(i32, String)> {
    let d = bratteli(f, kmax)?;
    let mut out = d.to_table();
    let consistent = d.sizes_consistent();
    let _ = writeln!(
        out,
        "sizes consistent: {}",
        if consistent { "yes" } else { "no" }
    );
    if let Some(path) = dot {
        fs::write(path, d.to_dot()).with_context(|| format!("cannot write {}", path.display()))?;
        let _ = writeln!(out, "dot written to {}", path.display());
    }
    Ok((if consistent { 0 } else { 1 }, out))
}

fn snf(a: &IntMatrix) -> Result<(i32, String)> {
    let s = smith(a);
    let verified = s.u.mul(a).mul(&s.vt) == s.d;
    let factors: Vec<String> = s
        .invariant_factors()
        .iter()
        .map(BigInt::to_string)
        .collect();
    let mut out = format!("D =\n{}", s.d);
    let _ = writeln!(out, "invariant factors: {}", factors.join(", "));
    let _ = writeln!(out, "rank: {}", s.rank);
    let _ = writeln!(
        out,
        "U·A·Vt = D: {}",
        if verified { "verified" } else { "FAILED" }
    );
    Ok((if verified { 0 } else { 1 }, out))
}

fn check_lemmas(f: &RelativeGraph, cases: usize, seed: u64) -> Result<(i32, String)> {
    let reports = run_all(Graphs::Fixed(f), cases, seed);
    let mut out = format!("seed: {seed}\ncases per suite: {cases}\n");
    for r in &reports {
        let _ = writeln!(out, "{r}");
        for s in &r.samples {
            let _ = writeln!(out, "  {s}");
        }
    }
    let ok = reports.iter().all(|r| r.passed());
    Ok((if ok { 0 } else { 1 }, out))
}
