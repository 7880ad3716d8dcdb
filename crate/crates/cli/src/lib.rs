//! `uptail` command dispatcher. [`run`] parses an argument vector, executes
//! one verb and returns the exit code together with what should be written to
//! stdout and stderr, so the whole CLI is testable in-process.

mod commands;
pub mod parse;

use clap::{Args, Parser, Subcommand};
use uptail_core::Error;

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "uptail", version, about = "Upper-tail rates, exact engines and checks for subgraph and progression counts")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Closed-form rate functions.
    #[command(subcommand)]
    Rate(RateCmd),
    /// Solve or bound the variational problem on a small model.
    #[command(subcommand)]
    Phi(PhiCmd),
    /// Exact distributions.
    #[command(subcommand)]
    Dist(DistCmd),
    /// Factorial moments, Markov bounds and cluster censuses.
    Moments(MomentsArgs),
    /// Core enumeration and extraction.
    #[command(subcommand)]
    Cores(CoresCmd),
    /// Seeded Monte Carlo and structural event detection.
    #[command(subcommand)]
    Mc(McCmd),
    /// Exhaustive and exact checks.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Emit the clique/hub phase diagram as CSV.
    PhaseDiagram(PhaseArgs),
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// triangles, clique:R, cycle:L, path:V, star:S, kbip:A,B, g6:CODE,
    /// induced:<pattern> or ap.
    #[arg(long)]
    model: String,
    /// Vertices (graph models) or universe size N (ap).
    #[arg(long)]
    n: usize,
    /// Edge or element probability, exact (`1/3`) or decimal.
    #[arg(long)]
    p: String,
    /// Progression length for `--model ap`.
    #[arg(long, default_value_t = 3)]
    k: usize,
}

#[derive(Subcommand, Debug)]
enum RateCmd {
    /// phi_r(delta, c) for cliques.
    Clique {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        delta: String,
        /// Limit of n p^{r-1}; `inf` allowed.
        #[arg(long)]
        c: String,
    },
    /// Rate for a connected regular pattern.
    Regular {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        c: String,
    },
    /// Normalised rate for k-term progressions.
    Ap {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta: String,
        /// Optional universe size for the unnormalised prediction.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum PhiCmd {
    /// Exact minimum over subsets.
    Brute(PhiArgs),
    /// Exact minimum over subcubes.
    Subcube(PhiArgs),
    /// Planted clique, hub or interval.
    Construct {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        delta: String,
        /// clique, hub or interval.
        #[arg(long)]
        kind: String,
    },
}

#[derive(Args, Debug)]
struct PhiArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    delta: String,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    /// Also report the upper-tail bound from Phi(delta + eps).
    #[arg(long)]
    eps: Option<String>,
}

#[derive(Subcommand, Debug)]
enum DistCmd {
    /// Law of X by enumeration of the cube.
    Exact {
        #[command(flatten)]
        model: ModelArgs,
        /// Also report Pr(X >= (1+delta)E[X]).
        #[arg(long)]
        delta: Option<String>,
    },
}

#[derive(Args, Debug)]
struct MomentsArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 3)]
    t_max: usize,
    /// Compare factorial-moment Markov bounds with the exact tail at delta.
    #[arg(long)]
    delta: Option<String>,
    /// Emit the dependency-cluster census as CSV instead.
    #[arg(long)]
    census: bool,
    #[arg(long, default_value_t = 3)]
    s_max: usize,
    #[arg(long, default_value_t = 50_000_000)]
    budget: u64,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand, Debug)]
enum CoresCmd {
    /// All cores of a given size.
    Enumerate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        eps: String,
        /// Size cap factor K in |I| <= K phi+.
        #[arg(long)]
        k_factor: String,
        #[arg(long)]
        phi_plus: String,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Peel a seed down to a core.
    Extract {
        #[command(flatten)]
        model: ModelArgs,
        /// Edges `0-1,1-2` or integers `1,2,3`.
        #[arg(long)]
        set: String,
        #[arg(long)]
        s: String,
    },
}

#[derive(Subcommand, Debug)]
enum McCmd {
    /// Estimate Pr(X >= (1+delta)E[X]).
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        delta: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Coordinates forced present: edges `0-1,1-2` or integers `1,2,3`.
        #[arg(long)]
        plant: Option<String>,
    },
    /// Look for a clique or hub structure in a graph.
    Detect {
        /// clique or hub.
        #[arg(long)]
        event: String,
        /// Graph as graph6 or a named pattern.
        #[arg(long)]
        graph: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CheckCmd {
    /// Initial intervals maximise progression counts.
    ExtremalAp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// One embedding-count bound.
    Bounds {
        /// cycle, jor, edge_regular, edge_bipartite, bad_edges or stars.
        #[arg(long)]
        kind: String,
        /// Pattern J.
        #[arg(long)]
        j: String,
        /// Host graph G.
        #[arg(long)]
        g: String,
        /// Edge `u-v` of J (edge kinds).
        #[arg(long)]
        edge: Option<String>,
        /// Subgraph of G spanned by its bad edges (bad_edges).
        #[arg(long)]
        sub: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        s: Option<usize>,
        /// Vertex set U for stars.
        #[arg(long)]
        u: Option<String>,
    },
    /// Fractional independence number and its certificate.
    Alpha {
        #[arg(long)]
        graph: String,
        /// Regular host H: also list its family and test the inequality.
        #[arg(long)]
        host: Option<String>,
    },
    /// Moment covering inequality.
    Stability {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        ell: usize,
    },
    /// Hypergeometric Janson-type inequality.
    Janson {
        /// Sets separated by `;`, elements by `,`: `0,1;1,2`.
        #[arg(long)]
        family: String,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        eps: String,
    },
}

#[derive(Args, Debug)]
struct PhaseArgs {
    #[arg(long, default_value_t = 3)]
    r: u32,
    /// Grid `start:stop:step` or a comma list.
    #[arg(long)]
    delta: String,
    #[arg(long)]
    c: String,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<String>,
}

/// Parses `argv` (program name first) and runs the verb.
pub fn run(argv: &[String]) -> Outcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = match thread_pool() {
        Ok(Some(pool)) => pool.install(|| commands::dispatch(cli.verb)),
        Ok(None) => commands::dispatch(cli.verb),
        Err(msg) => return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: msg },
    };
    match result {
        Ok(stdout) => Outcome { code: EXIT_OK, stdout, stderr: String::new() },
        Err(e) => failure(e),
    }
}

/// `UPTAIL_THREADS` caps the worker count for this invocation.
fn thread_pool() -> std::result::Result<Option<rayon::ThreadPool>, String> {
    let Ok(text) = std::env::var("UPTAIL_THREADS") else { return Ok(None) };
    let n: usize = text.trim().parse().map_err(|_| format!("UPTAIL_THREADS must be a positive integer, got `{text}`\n"))?;
    if n == 0 {
        return Err("UPTAIL_THREADS must be positive\n".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build().map(Some).map_err(|e| format!("{e}\n"))
}

fn failure(e: Error) -> Outcome {
    let stderr = format!("error: {e}\n");
    match e {
        Error::Budget { partial, .. } => Outcome {
            code: EXIT_BUDGET,
            stdout: partial.map(|v| format!("{}\n", serde_json::to_string_pretty(&v).unwrap())).unwrap_or_default(),
            stderr,
        },
        Error::Parse { .. } | Error::Domain(_) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr },
        _ => Outcome { code: EXIT_FAILURE, stdout: String::new(), stderr },
    }
}
