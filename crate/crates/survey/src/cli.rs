use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use plumbing::brieskorn;

use crate::cache::{self, Cache};
use crate::report::{analyze, AnalyzeOptions, SeifertSummary, Verdict};
use crate::survey::{self, Mode, SurveyConfig, MAX_BOUND};
use crate::{parse_graph_file, write_report, write_rows, Format, SurveyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_SKIPPED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "plumb-hf",
    version,
    about = "Count good initial associations of plumbing graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Stop once this many good initial associations are found.
    #[arg(long)]
    pub early_stop: Option<usize>,
    /// Include one good sequence per good initial association.
    #[arg(long)]
    pub emit_sequences: bool,
    /// Refuse graphs with more initial associations than this.
    #[arg(long)]
    pub max_initials: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurveyMode {
    Brieskorn,
    AllMinusTwo,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze a graph file.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        count: CountArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build, blow down and analyze the Brieskorn sphere with the given multiplicities.
    Brieskorn {
        #[arg(required = true, num_args = 2..)]
        a: Vec<i64>,
        #[command(flatten)]
        count: CountArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Enumerate a family and report one row per member.
    Survey {
        #[arg(long, value_enum)]
        mode: SurveyMode,
        /// Largest Brieskorn multiplicity.
        #[arg(long, default_value_t = 30)]
        max_a: i64,
        /// Number of rays (brieskorn) or largest number of rays (all-minus-two).
        #[arg(long)]
        rays: Option<usize>,
        /// Largest ray length for all-minus-two.
        #[arg(long, default_value_t = 12)]
        max_p: i64,
        #[arg(long, default_value_t = 2, conflicts_with = "full")]
        early_stop: usize,
        /// Count every good initial association instead of stopping early.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        max_initials: Option<u64>,
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Recompute this many cached rows and compare.
        #[arg(long, default_value_t = 100)]
        reverify_sample: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the sphere-quadruple properties up to a bound.
    S3 {
        #[arg(long, default_value_t = 20)]
        bound: i64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn open_output<'w>(
    path: &Option<PathBuf>,
    stdout: &'w mut dyn Write,
) -> Result<Box<dyn Write + 'w>, SurveyError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn analyze_opts(c: &CountArgs) -> AnalyzeOptions {
    AnalyzeOptions {
        early_stop: c.early_stop,
        emit_sequences: c.emit_sequences,
        max_initials: c.max_initials,
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, SurveyError> {
    match cli.command {
        Command::Analyze {
            file,
            count,
            output,
        } => {
            let g = parse_graph_file(&file)?;
            let report = analyze(&g, &analyze_opts(&count))?;
            write_report(
                &report,
                output.format,
                &mut *open_output(&output.output, stdout)?,
            )?;
            Ok(EXIT_OK)
        }
        Command::Brieskorn { a, count, output } => {
            let inv = brieskorn(&a)?;
            let g = inv.star_graph().blow_down()?;
            let mut report = analyze(&g, &analyze_opts(&count))?;
            report.seifert = Some(SeifertSummary::from(&inv));
            write_report(
                &report,
                output.format,
                &mut *open_output(&output.output, stdout)?,
            )?;
            Ok(EXIT_OK)
        }
        Command::Survey {
            mode,
            max_a,
            rays,
            max_p,
            early_stop,
            full,
            max_initials,
            cache,
            reverify_sample,
            seed,
            output,
        } => {
            let base = match mode {
                SurveyMode::Brieskorn => SurveyConfig::brieskorn(),
                SurveyMode::AllMinusTwo => SurveyConfig::all_minus_two(),
            };
            let cfg = SurveyConfig {
                mode: match mode {
                    SurveyMode::Brieskorn => Mode::Brieskorn,
                    SurveyMode::AllMinusTwo => Mode::AllMinusTwo,
                },
                max_a,
                rays: rays.unwrap_or(base.rays),
                max_p,
                early_stop: (!full).then_some(early_stop),
                max_initials: max_initials.or(base.max_initials),
                reverify_sample,
                seed,
            };
            cfg.validate()?;
            let path = cache::resolve_path(cache.as_deref());
            let mut cache = Cache::open(&path)?;
            let outcome = survey::run_survey(&cfg, &mut cache)?;
            info!(
                "{} rows: {} computed, {} cached, {} re-verified, {} mismatched",
                outcome.rows.len(),
                outcome.computed,
                outcome.cache_hits,
                outcome.reverified,
                outcome.mismatches.len()
            );
            for key in &outcome.mismatches {
                writeln!(
                    stderr,
                    "warning: cached row {key} did not match a fresh computation; replaced"
                )?;
            }
            write_rows(
                &outcome.rows,
                output.format,
                &mut *open_output(&output.output, stdout)?,
            )?;
            Ok(if outcome.skipped() > 0 {
                EXIT_SKIPPED
            } else {
                EXIT_OK
            })
        }
        Command::S3 { bound, output } => {
            if !(5..=MAX_BOUND).contains(&bound) {
                return Err(SurveyError::InvalidBounds(format!(
                    "--bound must be in 5..={MAX_BOUND}"
                )));
            }
            let rows = survey::s3_rows(bound);
            write_rows(
                &rows,
                output.format,
                &mut *open_output(&output.output, stdout)?,
            )?;
            let failed = rows
                .iter()
                .filter(|r| r.verdict == Verdict::Skipped || !r.properties_hold())
                .count();
            if failed > 0 {
                writeln!(stderr, "{failed} quadruple(s) failed a property check")?;
                return Ok(EXIT_SKIPPED);
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_ERROR;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}
