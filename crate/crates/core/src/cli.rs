//! The `chordlens` command line.
//!
//! Exit codes: 0 success, 1 data or usage error, 2 internal error. Error
//! lines start with `error:`; set `CHORDLENS_NO_COLOR` to suppress colour.

use std::ffi::OsString;
use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::chord::{
    build_layout, default_similarity_filter, BinMode, BinSpec, ChordLayout, EdgeFilter,
    LayoutOptions, RibbonColoring,
};
use crate::error::{Error, Result};
use crate::ingest::{self, ProjectTable};
use crate::relate::{self, MatrixKind, NeighborPolicy, RelationMatrix};
use crate::render::{render_svg, SvgDocument};
use crate::style::{apply_rules, Actions, CmpOp, Color, Condition, NumVar, Rule, StyleSheet};

#[derive(Debug, Parser)]
#[command(
    name = "chordlens",
    version,
    about = "Project similarity and attribute correlation chord diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pairwise project dissimilarity (and similarity) matrices.
    Similarity {
        #[command(flatten)]
        input: InputArgs,
        /// Dissimilarity matrix output.
        #[arg(long)]
        out: PathBuf,
        /// Similarity matrix output [default: <out stem>.similarity.csv].
        #[arg(long)]
        similarity_out: Option<PathBuf>,
    },
    /// Spearman correlation matrix of numeric and ordinal attributes.
    Correlate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Chord diagram SVG from a matrix CSV.
    Chord {
        matrix: PathBuf,
        /// Stylesheet file.
        #[arg(long)]
        style: Option<PathBuf>,
        /// min-value=T, min-magnitude=T, top-fraction=F or top-k-per-node=K.
        #[arg(long, value_parser = parse_filter)]
        filter: Option<EdgeFilter>,
        /// Number of colour bins (overrides the stylesheet).
        #[arg(long)]
        bins: Option<usize>,
        #[arg(long, value_enum, default_value_t = BinModeArg::EqualWidth)]
        bin_mode: BinModeArg,
        /// Gap between segments in degrees (overrides the stylesheet).
        #[arg(long)]
        gap: Option<f64>,
        /// Figure style [default: from the matrix kind].
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        #[arg(long)]
        out: PathBuf,
        /// Also write the plain-text layout dump.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Per-project neighbour lists from a similarity matrix.
    Neighbors {
        matrix: PathBuf,
        #[arg(long, conflicts_with = "min_similarity")]
        top_k: Option<usize>,
        #[arg(long)]
        min_similarity: Option<f64>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// ARFF file, or CSV with --schema.
    input: PathBuf,
    /// Schema sidecar (required for CSV; retypes columns of ARFF input).
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Input format [default: from the file extension].
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Arff,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BinModeArg {
    Quantile,
    EqualWidth,
}

/// Figure styles: bin-coloured similarity rings, or source-coloured
/// correlation rings with negative correlations in black.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Similarity,
    Correlation,
}

/// Options of the `chord` command; `None` means "use the preset or stylesheet default".
#[derive(Debug, Clone, PartialEq)]
pub struct ChordRequest {
    pub filter: Option<EdgeFilter>,
    pub bins: Option<usize>,
    pub bin_mode: BinMode,
    pub gap: Option<f64>,
    pub preset: Option<Preset>,
}

impl Default for ChordRequest {
    fn default() -> Self {
        Self {
            filter: None,
            bins: None,
            bin_mode: BinMode::EqualWidth,
            gap: None,
            preset: None,
        }
    }
}

/// Matrix to styled layout and SVG, as the `chord` command does it.
///
/// Dissimilarity matrices are drawn as similarities. The preset defaults to
/// the matrix kind; the correlation preset puts [`negative_black_rule`] ahead
/// of the sheet's own rules.
pub fn chord_diagram(
    matrix: &RelationMatrix,
    mut sheet: StyleSheet,
    request: &ChordRequest,
) -> Result<(ChordLayout, SvgDocument)> {
    let converted;
    let m = if matrix.kind() == MatrixKind::Dissimilarity {
        converted = matrix.to_similarity()?;
        &converted
    } else {
        matrix
    };
    if let Some(n) = request.bins {
        sheet.globals.bin_count = n;
    }
    if let Some(g) = request.gap {
        sheet.globals.gap_degrees = g;
    }
    let preset = request.preset.unwrap_or(match m.kind() {
        MatrixKind::Correlation => Preset::Correlation,
        _ => Preset::Similarity,
    });
    let (default_filter, coloring) = match preset {
        Preset::Similarity => (default_similarity_filter(m), RibbonColoring::Bin),
        Preset::Correlation => {
            sheet.rules.insert(0, negative_black_rule());
            (
                EdgeFilter::TopFraction(CORRELATION_TOP_FRACTION),
                RibbonColoring::Source,
            )
        }
    };
    let options = LayoutOptions {
        filter: request.filter.clone().unwrap_or(default_filter),
        bins: BinSpec {
            count: sheet.globals.bin_count,
            mode: request.bin_mode,
        },
        gap_degrees: sheet.globals.gap_degrees,
        coloring,
    };
    let layout = build_layout(m, &options, &sheet.globals.palette)?;
    let styled = apply_rules(&layout, &sheet);
    let doc = render_svg(&styled, &sheet);
    Ok((styled, doc))
}

fn parse_filter(s: &str) -> std::result::Result<EdgeFilter, String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let num = || {
        value
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("bad number {value:?}"))
    };
    match name.trim() {
        "min-value" => Ok(EdgeFilter::MinValue(num()?)),
        "min-magnitude" => Ok(EdgeFilter::MinMagnitude(num()?)),
        "top-fraction" => Ok(EdgeFilter::TopFraction(num()?)),
        "top-k-per-node" => value
            .trim()
            .parse()
            .map(EdgeFilter::TopKPerNode)
            .map_err(|_| format!("bad integer {value:?}")),
        other => Err(format!(
            "unknown filter {other:?} (min-value, min-magnitude, top-fraction, top-k-per-node)"
        )),
    }
}

/// Default edge filter for correlation diagrams: the strongest quarter of pairs.
pub const CORRELATION_TOP_FRACTION: f64 = 0.25;

/// The rule the correlation preset puts ahead of user rules.
pub fn negative_black_rule() -> Rule {
    Rule::new(
        Condition::Num(NumVar::Value, CmpOp::Lt, 0.0),
        Actions {
            color: Some("black".parse::<Color>().expect("black is a CSS colour")),
            ..Actions::default()
        },
    )
}

fn use_color() -> bool {
    std::env::var_os("CHORDLENS_NO_COLOR").is_none() && io::stderr().is_terminal()
}

fn report_error(message: &str) {
    let prefix = if use_color() {
        "\x1b[31merror:\x1b[0m"
    } else {
        "error:"
    };
    eprintln!("{prefix} {message}");
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cmd = <Cli as clap::CommandFactory>::command().color(if use_color() {
        clap::ColorChoice::Auto
    } else {
        clap::ColorChoice::Never
    });
    let cli = match cmd.try_get_matches_from(args) {
        Ok(matches) => match <Cli as clap::FromArgMatches>::from_arg_matches(&matches) {
            Ok(cli) => cli,
            Err(e) => {
                report_error(&e.to_string());
                return 1;
            }
        },
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    0
                }
                _ => {
                    // clap's rendering already starts with "error:"
                    let _ = e.print();
                    1
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            report_error(&e.to_string());
            1
        }
    }
}

fn load_table(input: &InputArgs) -> Result<ProjectTable> {
    let format = input.format.unwrap_or_else(|| {
        let is_arff = input
            .input
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("arff"));
        if is_arff {
            Format::Arff
        } else {
            Format::Csv
        }
    });
    let data = read(&input.input)?;
    let schema = input.schema.as_deref().map(read).transpose()?;
    let table = match (format, schema) {
        (Format::Arff, None) => ingest::parse_arff(&data)?,
        (Format::Arff, Some(schema)) => {
            let table = ingest::parse_arff(&data)?;
            ingest::apply_schema(&table, &ingest::parse_schema(&schema)?)?
        }
        (Format::Csv, Some(schema)) => ingest::parse_csv_with_schema(&data, &schema)?,
        (Format::Csv, None) => {
            return Err(Error::data(format!(
                "{}: CSV input needs --schema",
                input.input.display()
            )))
        }
    };
    Ok(table)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::data(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents)
        .map_err(|e| Error::data(format!("cannot write {}: {e}", path.display())))
}

fn default_similarity_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map_or_else(|| "matrix".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.similarity.csv"))
}

fn load_matrix(path: &Path) -> Result<RelationMatrix> {
    RelationMatrix::from_csv(&read(path)?).map_err(|e| match e {
        Error::Parse { line, message } => {
            Error::data(format!("{}:{line}: {message}", path.display()))
        }
        other => other,
    })
}

fn execute(command: Command) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Similarity {
            input,
            out: out_path,
            similarity_out,
        } => {
            let table = load_table(&input)?;
            let report = ingest::validate(&table);
            write!(out, "{report}")?;
            let d = relate::dissimilarity_matrix(&table)?;
            let s = d.to_similarity()?;
            write(&out_path, &d.to_csv(&[]))?;
            let sim_path = similarity_out.unwrap_or_else(|| default_similarity_path(&out_path));
            write(&sim_path, &s.to_csv(&[]))?;
            writeln!(
                out,
                "wrote {}x{} dissimilarity to {} and similarity to {}",
                d.len(),
                d.len(),
                out_path.display(),
                sim_path.display()
            )?;
        }
        Command::Correlate {
            input,
            out: out_path,
        } => {
            let table = load_table(&input)?;
            let report = ingest::validate(&table);
            write!(out, "{report}")?;
            let m = relate::spearman_matrix(&table)?;
            write(
                &out_path,
                &m.to_csv(&["spearman rank correlation; missing data: pairwise-complete deletion"]),
            )?;
            writeln!(
                out,
                "wrote {}x{} correlation to {}",
                m.len(),
                m.len(),
                out_path.display()
            )?;
        }
        Command::Chord {
            matrix,
            style,
            filter,
            bins,
            bin_mode,
            gap,
            preset,
            out: out_path,
            dump,
        } => {
            let m = load_matrix(&matrix)?;
            let sheet = match style {
                Some(p) => StyleSheet::parse(&read(&p)?)?,
                None => StyleSheet::default(),
            };
            let request = ChordRequest {
                filter,
                bins,
                bin_mode: match bin_mode {
                    BinModeArg::Quantile => BinMode::Quantile,
                    BinModeArg::EqualWidth => BinMode::EqualWidth,
                },
                gap,
                preset,
            };
            let (styled, doc) = chord_diagram(&m, sheet, &request)?;
            for w in &doc.warnings {
                eprintln!("warning: {w}");
            }
            write(&out_path, &doc.text)?;
            if let Some(p) = dump {
                write(&p, &styled.debug_dump())?;
            }
            writeln!(
                out,
                "wrote {} segments, {} ribbons to {}",
                styled.segments.len(),
                styled.ribbons.iter().filter(|r| r.style.visible).count(),
                out_path.display()
            )?;
        }
        Command::Neighbors {
            matrix,
            top_k,
            min_similarity,
            out: out_path,
        } => {
            let mut m = load_matrix(&matrix)?;
            if m.kind() == MatrixKind::Dissimilarity {
                m = m.to_similarity()?;
            }
            let policy = match (top_k, min_similarity) {
                (Some(0), _) => return Err(Error::data("--top-k must be at least 1")),
                (Some(k), _) => NeighborPolicy::TopK(k),
                (None, Some(s)) => NeighborPolicy::MinSimilarity(s),
                (None, None) => NeighborPolicy::TopK(5),
            };
            let report = relate::neighborhoods(&m, policy)?.to_string();
            match out_path {
                Some(p) => write(&p, &report)?,
                None => out.write_all(report.as_bytes())?,
            }
        }
    }
    Ok(())
}
