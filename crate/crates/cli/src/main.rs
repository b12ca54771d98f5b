use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::builder::PossibleValuesParser;
use clap::Parser;
use hecke_core::scenario::{cache_key, error_record, Cache, Entry, RunOptions, Scenario, COMMANDS};
use hecke_core::Error;

/// Run one command on a scenario file.
#[derive(Parser, Debug)]
#[command(name = "hecke", version, about)]
struct Cli {
    #[arg(value_parser = PossibleValuesParser::new(COMMANDS))]
    command: String,
    scenario: PathBuf,
    /// Always recompute and do not store the result.
    #[arg(long)]
    no_cache: bool,
    /// Prime-sequence truncation for `galois`, cutoff for `index-sets`.
    #[arg(long, value_name = "N")]
    truncation: Option<u64>,
    /// Also write the structured JSON report to FILE.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn cache_dir() -> PathBuf {
    std::env::var_os("HECKE_CACHE_DIR").map_or_else(|| PathBuf::from(".hecke-cache"), PathBuf::from)
}

fn compute(cli: &Cli) -> Result<(Entry, &'static str), Error> {
    let text = std::fs::read_to_string(&cli.scenario).map_err(|e| Error::Io(format!("{}: {e}", cli.scenario.display())))?;
    let scenario = Scenario::parse(&text)?;
    let opts = RunOptions { truncation: cli.truncation };
    let key = cache_key(&scenario.serialize(), &cli.command, cli.truncation);
    let cache = Cache::new(cache_dir());
    if !cli.no_cache {
        match cache.lookup(&key) {
            Ok(Some(entry)) => return Ok((entry, "hit")),
            Ok(None) => {}
            Err(e) => eprintln!("warning: {e}; recomputing"),
        }
    }
    let report = scenario.run(&cli.command, &opts)?;
    let entry = Entry { text: report.text(), json: report.json() };
    if cli.no_cache {
        return Ok((entry, "off"));
    }
    if let Err(e) = cache.store(&key, &entry) {
        eprintln!("warning: could not write cache entry: {e}");
    }
    Ok((entry, "miss"))
}

fn write_out(path: &Path, body: &str) -> Result<(), Error> {
    std::fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = compute(&cli).and_then(|(entry, cache)| {
        if let Some(p) = &cli.out {
            write_out(p, &entry.json)?;
        }
        Ok((entry, cache))
    });
    let code = match result {
        Ok((entry, cache)) => {
            print!("{}", entry.text);
            eprintln!("wall time: {:.3} s (cache {cache})", start.elapsed().as_secs_f64());
            0
        }
        Err(e) => {
            let (text, json) = error_record(&cli.command, &e);
            eprint!("{text}");
            if let Some(p) = &cli.out {
                if let Err(w) = write_out(p, &json) {
                    eprintln!("warning: {w}");
                }
            }
            eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
