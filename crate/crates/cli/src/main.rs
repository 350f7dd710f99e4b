use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bloch_sectors::bloch_oracle::{bloch_expand, sectors_from_bloch};
use bloch_sectors::closed_forms::{
    comparison_json, exact_json, render_comparison, render_table1, table1, table1_json, table2, table3,
};
use bloch_sectors::explorer::{boundary, monotonicity_violations, search_max_nsector, sweep, write_sweep_csv, SearchConfig};
use bloch_sectors::identities::{verify, verify_all, Relation};
use bloch_sectors::sector_engine::sectors_from_purities;
use bloch_sectors::{Error, PureState, StateSpec};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

/// Environment variable holding the worker thread count.
const THREADS_ENV: &str = "SECTORS_THREADS";

#[derive(Parser)]
#[command(name = "bloch-sectors", version, about = "Sector lengths of pure multipartite qudit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sector-length distribution of a state
    Sectors {
        /// State spec: inline JSON or a path to a JSON file
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value_t = Method::Purity)]
        method: Method,
    },
    /// Check the linear relations between sector lengths
    Verify {
        #[arg(long)]
        state: String,
        /// `all` or a comma-separated list of: pq, kpurity, trr, even, balance, smalln, schmidt
        #[arg(long, default_value = "all")]
        relations: String,
    },
    /// Print a maximal N-sector table
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        table: u8,
    },
    /// GHZ versus Bell-family N-sector over a (d, N) grid, as CSV
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        d_max: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        n_max: u64,
        /// CSV destination; standard output if omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also print the asymptotic boundary as a JSON line
        #[arg(long)]
        boundary: bool,
    },
    /// Random search for large N-sector values
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra starting state (inline JSON or file)
        #[arg(long)]
        init: Option<String>,
    },
    /// Nonzero Bloch coefficients, one JSON object per line
    DumpBloch {
        #[arg(long)]
        state: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Purity,
    Bloch,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn load_state(arg: &str) -> Result<PureState, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Input(format!("cannot read state file '{arg}': {e}")))?
    };
    Ok(StateSpec::from_json(&text)?.build()?)
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Input(format!("cannot create '{}': {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn sectors(state: &str, method: Method) -> Result<bool, Failure> {
    let st = load_state(state)?;
    let (s, name) = match method {
        Method::Purity => (sectors_from_purities(&st)?, "purity"),
        Method::Bloch => (sectors_from_bloch(&bloch_expand(&st)?), "bloch"),
    };
    let total = s.pure_total();
    let sum_ok = (s.sum() - total).abs() <= 1e-9 * total;
    let s0_ok = (s.get(0) - 1.0).abs() <= 1e-9;
    print_json(&json!({
        "n": st.n_parties(),
        "d": st.local_dim(),
        "method": name,
        "S": s.lengths(),
        "sum": s.sum(),
        "checks": {
            "sum_equals_d_pow_n": sum_ok,
            "s0_equals_1": s0_ok,
        },
    }));
    Ok(sum_ok && s0_ok)
}

fn parse_relations(text: &str) -> Result<Option<Vec<Relation>>, Failure> {
    if text.trim() == "all" {
        return Ok(None);
    }
    let rels = text
        .split(',')
        .map(|t| t.trim().parse::<Relation>())
        .collect::<Result<Vec<_>, _>>()?;
    if rels.is_empty() {
        return Err(Failure::Input("no relations given".into()));
    }
    Ok(Some(rels))
}

fn verify_cmd(state: &str, relations: &str) -> Result<bool, Failure> {
    let rels = parse_relations(relations)?;
    let st = load_state(state)?;
    let reports = match rels {
        None => verify_all(&st)?,
        Some(r) => verify(&st, &r)?,
    };
    let all_pass = reports.iter().all(|r| r.pass);
    print_json(&serde_json::to_value(&reports).expect("reports serialize"));
    Ok(all_pass)
}

fn tables(table: u8) -> Result<bool, Failure> {
    let (text, value, ok) = match table {
        1 => {
            let rows = table1(2..=10)?;
            let ok = rows.iter().all(|r| r.matches());
            (render_table1(&rows), table1_json(&rows), ok)
        }
        2 => {
            let rows = table2(3..=7)?;
            let ok = rows.iter().all(|r| r.formulas_agree());
            (render_comparison(5, &rows), comparison_json(5, &rows), ok)
        }
        _ => {
            let rows = table3(2..=4)?;
            let ok = rows.iter().all(|r| r.formulas_agree());
            (render_comparison(6, &rows), comparison_json(6, &rows), ok)
        }
    };
    print!("{text}");
    println!();
    print_json(&value);
    Ok(ok)
}

fn sweep_cmd(d_max: u64, n_max: u64, out: Option<&Path>, with_boundary: bool) -> Result<bool, Failure> {
    let records = sweep(d_max, n_max as usize)?;
    {
        let mut w = open_out(out)?;
        write_sweep_csv(&records, &mut w)?;
        w.flush()?;
    }
    for i in monotonicity_violations(&records) {
        eprintln!("note: dominance switches more than once along N = {}", records[i].n);
    }
    if with_boundary {
        let b = boundary();
        println!("{}", json!({"gamma": b.gamma, "slope": b.slope, "residual": b.residual}));
    }
    Ok(true)
}

fn search_cmd(n: usize, d: usize, samples: usize, steps: usize, seed: u64, init: Option<&str>) -> Result<bool, Failure> {
    let mut cfg = SearchConfig::new(n, d, samples, steps, seed);
    if let Some(text) = init {
        cfg = cfg.with_initial(load_state(text)?);
    }
    let res = search_max_nsector(&cfg)?;
    let reference = res.reference().clone();
    print_json(&json!({
        "n": res.n,
        "d": res.d,
        "samples": res.samples_evaluated,
        "hillclimb_steps": res.hillclimb_steps,
        "accepted_steps": res.accepted_steps,
        "seed": seed,
        "origin": res.origin,
        "start_n_sector": res.start_n_sector,
        "best_n_sector": res.best_n_sector,
        "reference_ghz": exact_json(&res.reference_ghz),
        "reference_bell": exact_json(&res.reference_bell),
        "best_minus_reference": res.best_n_sector - reference.to_f64().unwrap_or(f64::INFINITY),
        "best_state": StateSpec::from_state(&res.best_state),
    }));
    Ok(true)
}

fn dump_bloch(state: &str, out: Option<&Path>) -> Result<bool, Failure> {
    let st = load_state(state)?;
    let coeffs = bloch_expand(&st)?;
    let mut w = open_out(out)?;
    w.write_all(coeffs.to_json_lines().as_bytes())?;
    w.flush()?;
    Ok(true)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Input(format!("{THREADS_ENV} must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Sectors { state, method } => sectors(&state, method),
        Command::Verify { state, relations } => verify_cmd(&state, &relations),
        Command::Tables { table } => tables(table),
        Command::Sweep {
            d_max,
            n_max,
            out,
            boundary,
        } => sweep_cmd(d_max, n_max, out.as_deref(), boundary),
        Command::Search {
            n,
            d,
            samples,
            steps,
            seed,
            init,
        } => search_cmd(n, d, samples, steps, seed, init.as_deref()),
        Command::DumpBloch { state, out } => dump_bloch(&state, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
