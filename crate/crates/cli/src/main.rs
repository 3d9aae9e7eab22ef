use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use k1hecke::cache::{resolve_dir, Cache};
use k1hecke::config::{ConfigError, GroupKind, RunConfig};
use k1hecke::suites::{self, Ctx};
use k1hecke::tables;

#[derive(Parser)]
#[command(name = "k1hecke", version, about = "Exact verification of Hecke algebra and bundle computations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites and write a report.
    Run(Common),
    /// Stratum counts next to their closed forms and raw oracles.
    Census(Common),
    /// Cuspidal characters and η values against their predictions.
    CharacterTable(Common),
    /// Inspect or empty the raw census cache.
    Cache {
        #[command(subcommand)]
        op: CacheOp,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CacheOp {
    List,
    Clear,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<u32>,
    /// GL or PGL.
    #[arg(long)]
    kind: Option<GroupKind>,
    /// Window generator, e.g. `2,0`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    window: Option<Vec<i64>>,
    /// Suite name; repeatable.
    #[arg(long = "suite")]
    suites: Vec<String>,
    #[arg(long)]
    z: Option<u32>,
    #[arg(long)]
    precision: Option<usize>,
    /// Divisor degrees, e.g. `1,2,4`.
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// JSON output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Markdown output path (stdout if absent).
    #[arg(long)]
    markdown: Option<PathBuf>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl Common {
    fn config(self) -> Result<RunConfig, ConfigError> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| ConfigError::Invalid(format!("{}: {e}", p.display())))?;
                RunConfig::from_json(&text)?
            }
            None => RunConfig::new(self.n.unwrap_or(2), self.q.unwrap_or(2), self.kind.unwrap_or(GroupKind::GL)),
        };
        if let Some(n) = self.n {
            cfg.group.n = n;
        }
        if let Some(q) = self.q {
            cfg.group.q = q;
        }
        if let Some(k) = self.kind {
            cfg.group.kind = k;
        }
        if self.window.is_some() {
            cfg.window = self.window;
        }
        if !self.suites.is_empty() {
            cfg.suites = self.suites;
        }
        if let Some(z) = self.z {
            cfg.z = z;
        }
        if self.precision.is_some() {
            cfg.precision = self.precision;
        }
        if self.degrees.is_some() {
            cfg.degrees = self.degrees;
        }
        if self.trials.is_some() {
            cfg.trials = self.trials;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        if self.markdown.is_some() {
            cfg.markdown = self.markdown;
        }
        if self.cache_dir.is_some() {
            cfg.cache_dir = self.cache_dir;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(markdown: &str, json: &str, cfg: &RunConfig) -> std::io::Result<()> {
    if let Some(p) = &cfg.out {
        std::fs::write(p, json)?;
    }
    match &cfg.markdown {
        Some(p) => std::fs::write(p, markdown),
        None => {
            print!("{markdown}");
            Ok(())
        }
    }
}

fn cache_for(cfg: &RunConfig) -> Option<Cache> {
    resolve_dir(None, cfg.cache_dir.as_deref()).map(Cache::new)
}

fn config_error(e: ConfigError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(3)
}

fn table_command(c: Common, f: fn(&Ctx) -> k1hecke_core::error::Result<tables::Table>) -> ExitCode {
    let cfg = match c.config() {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    let ctx = Ctx { cache: cache_for(&cfg), cfg: &cfg };
    match f(&ctx) {
        Ok(t) => match emit(&t.to_markdown(), &t.to_json(), &cfg) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(3)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn cache_command(op: CacheOp, dir: Option<&Path>) -> ExitCode {
    let Some(dir) = resolve_dir(dir, None) else {
        eprintln!("error: no cache directory (use --cache-dir or {})", k1hecke::cache::CACHE_ENV);
        return ExitCode::from(3);
    };
    let cache = Cache::new(dir);
    let res = match op {
        CacheOp::List => cache.list().map(|entries| {
            for (k, v) in entries {
                println!("{k}\t{v}");
            }
        }),
        CacheOp::Clear => cache.clear().map(|k| println!("removed {k} entries from {}", cache.dir().display())),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run(c) => {
            let cfg = match c.config() {
                Ok(c) => c,
                Err(e) => return config_error(e),
            };
            let report = match suites::run(&cfg, cache_for(&cfg), |s, t| eprintln!("{s}: {:.2?}", t)) {
                Ok(r) => r,
                Err(e) => return config_error(e),
            };
            if let Err(e) = emit(&report.to_markdown(), &report.to_json(), &cfg) {
                eprintln!("error: {e}");
                return ExitCode::from(3);
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Cmd::Census(c) => table_command(c, tables::census_table),
        Cmd::CharacterTable(c) => table_command(c, tables::character_table),
        Cmd::Cache { op, cache_dir } => cache_command(op, cache_dir.as_deref()),
    }
}
