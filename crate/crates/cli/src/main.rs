//! `railgrid` command-line tool.
//!
//! Exit status: 0 on success, 2 on usage errors, 3 when a sweep exceeds the
//! budget (`RAILGRID_BUDGET`), 1 otherwise. Every file is written atomically.

mod options;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufReader, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use railgrid::circuit::Circuit;
use railgrid::enumerator::{brio_compare, count_range, partitioned_sweep, CountTable, Stage, SweepSpec};
use railgrid::fit::{estimates_csv, fit, params_csv, plot_data};
use railgrid::geometry::{PairCatalogue, PieceMode};
use railgrid::random::{build_random, RandomParams};
use railgrid::record::{read_records, write_atomic, write_catalogue, write_records};
use railgrid::render::{to_polygon_view, to_svg, RenderConfig};
use railgrid::Error;

use options::{budget, parse_range, InventoryArgs, WidthArgs};

#[derive(Parser, Debug)]
#[command(name = "railgrid", version, about = "Enumerate, count, fit and draw closed track circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the circuits kept at one filter stage.
    Enumerate {
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[command(flatten)]
        inventory: InventoryArgs,
        #[command(flatten)]
        width: WidthArgs,
        #[arg(long, default_value = "constructible", value_parser = parse_stage)]
        stage: Stage,
        #[arg(long, default_value_t = default_shards())]
        shards: usize,
        #[arg(long, value_enum, default_value_t = CircuitFormat::Jsonl)]
        format: CircuitFormat,
        /// Output file (jsonl) or directory (svg); stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count table over a range of N.
    Count {
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[command(flatten)]
        inventory: InventoryArgs,
        #[command(flatten)]
        width: WidthArgs,
        #[arg(long, default_value_t = default_shards())]
        shards: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Straight-and-arc circuits against lattice polygon counts.
    Brio {
        #[arg(long, value_parser = parse_range, default_value = "4..10")]
        n: RangeInclusive<usize>,
        #[arg(long, default_value_t = default_shards())]
        shards: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit q(N) ≈ A·μ^N·N^(γ−1) to a count column.
    Fit {
        /// Count table CSV as written by `count`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "constructible")]
        column: String,
        /// Range of N to extrapolate to.
        #[arg(long, value_parser = parse_range)]
        extrapolate: Option<RangeInclusive<usize>>,
        /// Directory for fit_params.csv, fit_estimates.csv and fit_plot.dat.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized search for long circuits.
    Random {
        /// Pieces in each random prefix.
        #[arg(long)]
        r: usize,
        /// Pieces in each completion.
        #[arg(long)]
        s: usize,
        /// Number of prefixes drawn.
        #[arg(long)]
        q: usize,
        /// Half-width of the box the prefix must end in.
        #[arg(long)]
        radius: i32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        inventory: InventoryArgs,
        #[command(flatten)]
        width: WidthArgs,
        #[arg(long, default_value_t = default_shards())]
        shards: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw circuit records as SVG.
    Render {
        /// JSON-lines circuit records.
        #[arg(long)]
        input: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Draw the polygon through the square centers instead of the track.
        #[arg(long)]
        polygon: bool,
        /// Draw circuits that fail the constructibility check.
        #[arg(long)]
        force: bool,
        #[arg(long, default_value_t = 60.0)]
        scale: f64,
        #[arg(long)]
        grid: bool,
        /// Caption with the physical scale.
        #[arg(long)]
        annotate: bool,
        #[command(flatten)]
        width: WidthArgs,
    },
    /// Write every constructible class over a range of N to `catalogue.jsonl`.
    Catalogue {
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[command(flatten)]
        inventory: InventoryArgs,
        #[command(flatten)]
        width: WidthArgs,
        #[arg(long, default_value_t = default_shards())]
        shards: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Same-square clearance catalogue.
    Clearance {
        #[arg(long)]
        extended: bool,
        /// `text` prints a summary, `csv` every pair.
        #[arg(long, value_enum, default_value_t = ClearanceFormat::Text)]
        format: ClearanceFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CircuitFormat {
    Jsonl,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ClearanceFormat {
    Text,
    Csv,
}

fn parse_stage(s: &str) -> Result<Stage, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn default_shards() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Budget(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::InvalidParams(_) | Error::TooShort(_) => Failure::Usage(e.to_string()),
            other => Failure::Other(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (2, m),
                Failure::Budget(m) => (3, format!("{m}; set RAILGRID_BUDGET to raise the limit")),
                Failure::Other(m) => (1, m),
            };
            eprintln!("railgrid: {msg}");
            ExitCode::from(code)
        }
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(p) => Ok(write_atomic(p, bytes)?),
        None => {
            io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn sweep_spec(inventory: &InventoryArgs, width: &WidthArgs) -> Result<SweepSpec, Failure> {
    inventory.validate()?;
    Ok(SweepSpec::new(1, inventory.inventory())
        .mode(inventory.mode())
        .width(width.config()?)
        .budget(budget()?))
}

fn check_shards(shards: usize) -> Result<(), Failure> {
    if shards == 0 {
        return Err(Failure::Usage("--shards must be positive".into()));
    }
    Ok(())
}

/// Checks the guard for the whole range before any work starts.
fn check_budget(range: &RangeInclusive<usize>, spec: &SweepSpec) -> Result<(), Failure> {
    let total = railgrid::enumerator::possible(*range.end(), spec.mode);
    match spec.budget {
        Some(b) if total > b => Err(Error::BudgetExceeded { estimated: total, budget: b }.into()),
        _ => Ok(()),
    }
}

fn records(circuits: &[Circuit]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_records(&mut buf, circuits).expect("writing to memory");
    buf
}

fn table_bytes(table: &CountTable, format: TableFormat) -> Vec<u8> {
    match format {
        TableFormat::Csv => table.to_csv_string().into_bytes(),
        TableFormat::Json => {
            let mut s = serde_json::to_string_pretty(&table.rows).expect("rows serialize");
            s.push('\n');
            s.into_bytes()
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Enumerate {
            n,
            inventory,
            width,
            stage,
            shards,
            format,
            out,
        } => {
            check_shards(shards)?;
            let template = sweep_spec(&inventory, &width)?;
            check_budget(&n, &template)?;
            if format == CircuitFormat::Svg && out.is_none() {
                return Err(Failure::Usage("--format svg needs --out DIR".into()));
            }
            let mut circuits = Vec::new();
            for size in n {
                let spec = SweepSpec {
                    n: size,
                    keep_looping: stage == Stage::Looping,
                    ..template.clone()
                };
                circuits.extend(partitioned_sweep(&spec, shards)?.stage(stage).iter().cloned());
            }
            match format {
                CircuitFormat::Jsonl => emit(out.as_deref(), &records(&circuits)),
                CircuitFormat::Svg => {
                    let dir = out.expect("checked above");
                    let cfg = RenderConfig {
                        width: template.width,
                        force: stage != Stage::Constructible,
                        ..RenderConfig::default()
                    };
                    write_svgs(&circuits, &dir, &cfg, false)
                }
            }
        }
        Command::Count {
            n,
            inventory,
            width,
            shards,
            format,
            out,
        } => {
            check_shards(shards)?;
            let template = sweep_spec(&inventory, &width)?;
            check_budget(&n, &template)?;
            let table = count_range(n, &template, shards)?;
            emit(out.as_deref(), &table_bytes(&table, format))
        }
        Command::Brio { n, shards, format, out } => {
            check_shards(shards)?;
            let template = SweepSpec::new(1, railgrid::Inventory::brio()).budget(budget()?);
            check_budget(&n, &template)?;
            let rows: Vec<_> = n
                .filter(|x| x % 2 == 0)
                .map(|x| brio_compare(x, shards))
                .collect::<Result<_, _>>()?;
            let bytes = match format {
                TableFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
                    s.push('\n');
                    s.into_bytes()
                }
                TableFormat::Csv => {
                    let mut s = String::from("n,brio,sap_expansion,orbit_sizes\n");
                    for r in &rows {
                        let sizes: Vec<String> = r.orbit_sizes.iter().map(u32::to_string).collect();
                        writeln!(s, "{},{},{},{}", r.n, r.brio, r.sap_expansion, sizes.join(" ")).unwrap();
                    }
                    s.into_bytes()
                }
            };
            emit(out.as_deref(), &bytes)
        }
        Command::Fit {
            input,
            column,
            extrapolate,
            out,
        } => {
            let file = fs::File::open(&input).map_err(|e| Failure::Other(format!("{}: {e}", input.display())))?;
            let table = CountTable::read_csv(file)?;
            let series = table
                .series(&column)
                .ok_or_else(|| Failure::Usage(format!("unknown column {column:?}")))?;
            let report = fit(&series)?;
            let p = report.params;
            let last = table.rows.iter().map(|r| r.n).max().unwrap_or(0);
            let range = 1..=extrapolate.as_ref().map_or(last, |e| *e.end().max(&last)).max(1);
            let mut summary = format!(
                "A = {:.5}\nmu = {:.5}\ngamma_minus_1 = {:.5}\nresidual_rms = {:.3e}\n",
                p.amplitude, p.mu, p.gamma_minus_1, report.residual_rms
            );
            if let Some(ext) = &extrapolate {
                let exact: u64 = series.iter().filter(|s| s.0 < *ext.start()).map(|s| s.1).sum();
                for n in ext.clone() {
                    writeln!(summary, "estimate({n}) = {}", p.estimate_rounded(n)?).unwrap();
                }
                writeln!(summary, "cumulative = {}", p.cumulative_estimate(exact, ext.clone())?).unwrap();
            }
            print!("{summary}");
            if let Some(dir) = out {
                write_atomic(&dir.join("fit_params.csv"), params_csv(&report).as_bytes())?;
                write_atomic(&dir.join("fit_estimates.csv"), estimates_csv(&report, range.clone())?.as_bytes())?;
                write_atomic(&dir.join("fit_plot.dat"), plot_data(&report, range).as_bytes())?;
            }
            Ok(())
        }
        Command::Random {
            r,
            s,
            q,
            radius,
            seed,
            inventory,
            width,
            shards,
            out,
        } => {
            check_shards(shards)?;
            inventory.validate()?;
            let params = RandomParams { r, s, q, radius, seed };
            let outcome = build_random(&params, &inventory.inventory(), inventory.mode(), &width.config()?, shards)?;
            eprintln!(
                "{} of {q} prefixes in the box, {} completions, {} circuits kept",
                outcome.prefixes_in_box,
                outcome.completions,
                outcome.circuits.len()
            );
            emit(out.as_deref(), &records(&outcome.circuits))
        }
        Command::Render {
            input,
            out,
            polygon,
            force,
            scale,
            grid,
            annotate,
            width,
        } => {
            let file = fs::File::open(&input).map_err(|e| Failure::Other(format!("{}: {e}", input.display())))?;
            let circuits = read_records(BufReader::new(file))?;
            let cfg = RenderConfig {
                scale,
                width: width.config()?,
                grid,
                annotate,
                force,
                ..RenderConfig::default()
            };
            cfg.validate()?;
            write_svgs(&circuits, &out, &cfg, polygon)
        }
        Command::Catalogue {
            n,
            inventory,
            width,
            shards,
            out,
        } => {
            check_shards(shards)?;
            let template = sweep_spec(&inventory, &width)?;
            check_budget(&n, &template)?;
            let mut circuits = Vec::new();
            let mut table = CountTable::default();
            for size in n {
                let result = partitioned_sweep(&SweepSpec { n: size, ..template.clone() }, shards)?;
                table.rows.push(result.row);
                circuits.extend(result.constructible);
            }
            let path = write_catalogue(&circuits, &out)?;
            write_atomic(&out.join("counts.csv"), table.to_csv_string().as_bytes())?;
            println!("{} circuits written to {}", circuits.len(), path.display());
            Ok(())
        }
        Command::Clearance { extended, format, out } => {
            let mode = if extended { PieceMode::Extended } else { PieceMode::Standard };
            let cat = PairCatalogue::for_mode(mode);
            let text = match format {
                ClearanceFormat::Text => {
                    let min = cat.min_disjoint();
                    format!(
                        "{} pairs\ndelta_min = {:.5} between {}->{} and {}->{}\n",
                        cat.len(),
                        min.clearance,
                        min.first.entry.kappa(),
                        min.first.exit.kappa(),
                        min.second.entry.kappa(),
                        min.second.exit.kappa()
                    )
                }
                ClearanceFormat::Csv => {
                    let mut s = String::from("entry1,exit1,entry2,exit2,relation,clearance\n");
                    for e in cat.entries() {
                        writeln!(
                            s,
                            "{},{},{},{},{:?},{:.8}",
                            e.first.entry.kappa(),
                            e.first.exit.kappa(),
                            e.second.entry.kappa(),
                            e.second.exit.kappa(),
                            e.relation,
                            e.clearance
                        )
                        .unwrap();
                    }
                    s
                }
            };
            emit(out.as_deref(), text.as_bytes())
        }
    }
}

fn write_svgs(circuits: &[Circuit], dir: &Path, cfg: &RenderConfig, polygon: bool) -> Result<(), Failure> {
    for (i, c) in circuits.iter().enumerate() {
        let svg = if polygon { to_polygon_view(c, cfg)? } else { to_svg(c, cfg)? };
        write_atomic(&dir.join(format!("circuit_{:02}_{:05}.svg", c.n(), i)), svg.as_bytes())?;
    }
    Ok(())
}
