//! Command-line front end.
//!
//! Every command renders its whole output into a string before printing, so
//! parallel work never interleaves and repeated runs are byte-identical.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cohomology::GrassRing;
use crate::error::{Error, Result};
use crate::foameval::{theta112_closed, theta123_closed, verify_relation, RELATION_IDS};
use crate::linkpoly::{
    euler_characteristic, skein_check, skein_triples, state_sum, verify_reidemeister, LinkDiagram,
    REIDEMEISTER_PAIRS,
};
use crate::symmetric::Partition;
use crate::webcalc::{moy_eval_with, EvalOptions, Web};

#[derive(Parser, Debug)]
#[command(name = "slnfoam", version, about = "Exact sl(N) web and foam calculus")]
pub struct Cli {
    /// Rank N of sl(N).
    #[arg(long = "n", global = true, env = "SLNFOAM_N", default_value_t = 3)]
    pub n: u32,
    /// Worker threads for parallel sums (0 = all cores).
    #[arg(long, global = true, env = "SLNFOAM_JOBS", default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// sl(N) polynomial of a link diagram given as a PD code.
    Link {
        #[arg(long, env = "SLNFOAM_PD", conflicts_with = "file")]
        pd: Option<String>,
        /// File holding a PD code.
        #[arg(long, env = "SLNFOAM_FILE")]
        file: Option<String>,
        /// Report the graded Euler characteristic of the shifted cube instead.
        #[arg(long)]
        euler: bool,
    },
    /// MOY evaluation of a web given as JSON.
    Web {
        #[arg(long, env = "SLNFOAM_FILE")]
        file: String,
        #[arg(long, env = "SLNFOAM_BUDGET", default_value_t = 200_000)]
        budget: usize,
        /// Seed for a random move order.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Closed theta foam values: `112 i j a b` or `123 p q r j k i`; with no
    /// indices, every nonzero entry.
    Theta {
        kind: ThetaKind,
        indices: Vec<u32>,
    },
    /// Schubert basis, duals and traces of the Grassmannian cohomology ring.
    Ring {
        #[arg(long)]
        k: usize,
    },
    /// Run a verification suite: all, relations, links, a relation id or a
    /// Reidemeister pair id.
    Verify {
        #[arg(long, env = "SLNFOAM_SUITE", default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ThetaKind {
    #[value(name = "112")]
    T112,
    #[value(name = "123")]
    T123,
}

/// Output text and process exit code.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: 0 }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidWeb(_) | Error::Domain(_) => 2,
        _ => 1,
    }
}

/// Parse arguments and run; clap usage errors map to exit code 2.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => return Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 2 },
    };
    match pool.install(|| dispatch(cli)) {
        Ok(o) => o,
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: exit_code(&e) },
    }
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let n = cli.n;
    if n < 2 {
        return Err(Error::Domain("N must be at least 2".into()));
    }
    match &cli.command {
        Command::Link { pd, file, euler } => {
            let text = match (pd, file) {
                (Some(p), _) => p.clone(),
                (None, Some(f)) => read(f)?,
                (None, None) => return Err(Error::Parse("give --pd or --file".into())),
            };
            let d = LinkDiagram::parse(&text)?;
            let p = if *euler { euler_characteristic(&d, n)? } else { state_sum(&d, n)? };
            Ok(Outcome::ok(format!("{p}\n")))
        }
        Command::Web { file, budget, seed } => {
            let w = Web::from_json(&read(file)?)?;
            let p = moy_eval_with(&w, n, &EvalOptions { budget: *budget, seed: *seed })?;
            Ok(Outcome::ok(format!("{p}\n")))
        }
        Command::Theta { kind, indices } => theta(*kind, n, indices).map(Outcome::ok),
        Command::Ring { k } => Ok(Outcome::ok(GrassRing::new(n, *k)?.table())),
        Command::Verify { suite } => verify(suite, n),
    }
}

fn part(p: &[u32]) -> Result<Partition> {
    Partition::new(p)
}

fn theta(kind: ThetaKind, n: u32, idx: &[u32]) -> Result<String> {
    let want = match kind {
        ThetaKind::T112 => 4,
        ThetaKind::T123 => 6,
    };
    if !idx.is_empty() && idx.len() != want {
        return Err(Error::Parse(format!("expected {want} indices, got {}", idx.len())));
    }
    let eval = |v: &[u32]| -> Result<String> {
        Ok(match kind {
            ThetaKind::T112 => theta112_closed(n, v[0], v[1], &part(&[v[2], v[3]])?)?.to_string(),
            ThetaKind::T123 => theta123_closed(n, &part(&v[..3])?, &part(&v[3..5])?, v[5])?.to_string(),
        })
    };
    if !idx.is_empty() {
        return Ok(format!("{}\n", eval(idx)?));
    }
    if matches!(kind, ThetaKind::T123) && n < 4 {
        return Err(Error::Domain("the (1,2,3) theta needs N >= 4".into()));
    }
    // Full table over decorations inside the boxes.
    let mut out = String::new();
    let top = n;
    let rows: Vec<Vec<u32>> = match kind {
        ThetaKind::T112 => iproduct(&[top, top, top, top])
            .into_iter()
            .filter(|v| v[2] >= v[3] && v[2] <= n - 2)
            .collect(),
        ThetaKind::T123 => iproduct(&[top, top, top, top, top, top])
            .into_iter()
            .filter(|v| v[0] >= v[1] && v[1] >= v[2] && v[0] <= n - 3 && v[3] >= v[4] && v[3] <= n - 2)
            .collect(),
    };
    for v in rows {
        let value = eval(&v)?;
        if value != "0" {
            let cols: Vec<String> = v.iter().map(u32::to_string).collect();
            writeln!(out, "{} {value}", cols.join(" ")).expect("string write");
        }
    }
    Ok(out)
}

/// All vectors with `v[i] < bounds[i]`, in lexicographic order.
fn iproduct(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in bounds {
        out = out.into_iter().flat_map(|v| (0..b).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn verify(suite: &str, n: u32) -> Result<Outcome> {
    let mut lines = Vec::new();
    let mut failures = 0;
    let mut record = |line: String, pass: bool| {
        if !pass {
            failures += 1;
        }
        lines.push(line);
    };
    let relations: Vec<&str> = match suite {
        "all" | "relations" => RELATION_IDS.to_vec(),
        id if RELATION_IDS.contains(&id) => vec![id],
        _ => vec![],
    };
    for id in &relations {
        match verify_relation(id, n) {
            Ok(r) => record(r.to_string(), r.pass),
            Err(Error::Domain(m)) if relations.len() > 1 => record(format!("{id} N={n}: SKIP ({m})"), true),
            Err(e) => return Err(e),
        }
    }
    let pairs: Vec<&str> = match suite {
        "all" | "links" => REIDEMEISTER_PAIRS.to_vec(),
        id if REIDEMEISTER_PAIRS.contains(&id) => vec![id],
        _ => vec![],
    };
    for id in &pairs {
        let r = verify_reidemeister(id, n)?;
        record(r.to_string(), r.pass);
    }
    if matches!(suite, "all" | "links") {
        for (name, [p, m, z]) in skein_triples() {
            let r = skein_check(&p, &m, &z, n)?;
            let verdict = if r.pass { "PASS" } else { "FAIL" };
            record(format!("skein {name} N={n}: {verdict}"), r.pass);
        }
    }
    if relations.is_empty() && pairs.is_empty() {
        return Err(Error::Parse(format!("unknown suite {suite:?}")));
    }
    let total = lines.len();
    let mut out = lines.join("\n");
    let summary = if failures == 0 { "PASS".to_string() } else { format!("FAIL ({failures} of {total})") };
    write!(out, "\nsummary: {summary}\n").expect("string write");
    Ok(Outcome { stdout: out, stderr: String::new(), code: if failures == 0 { 0 } else { 1 } })
}
