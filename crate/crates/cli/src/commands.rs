use std::io::Write;
use std::path::{Path, PathBuf};

use cart_elc_core::complexity::{format_sci3, table1, TABLE1_N, TABLE1_R};
use cart_elc_core::evaluation::{cohens_d, grid_search, welch_t_test, CvConfig};
use cart_elc_core::induction::fit;
use cart_elc_core::{Algorithm, CriterionKind, Error as CoreError, InductionConfig, Tree};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, Result};
use crate::json::{tree_from_slice, tree_to_bytes};
use crate::manifest::RunManifest;
use crate::preset::Preset;
use crate::report::ReportDoc;
use crate::table::{Table, MISSING_TOKENS};

/// Output directory used when neither `--out-dir` nor the environment sets one.
pub const DEFAULT_OUT_DIR: &str = "cart-elc-out";
/// Environment variable overriding the default output directory.
pub const OUT_DIR_ENV: &str = "CART_ELC_OUT_DIR";

/// Oblique decision trees by exhaustive hyperplane search.
#[derive(Debug, Parser)]
#[command(name = "cart-elc", version)]
pub struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Directory for outputs without an explicit path.
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = DEFAULT_OUT_DIR)]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one tree and write it as JSON.
    Train(TrainArgs),
    /// Predict class names for every row of a CSV file.
    Predict(PredictArgs),
    /// Repeated k-fold cross-validation over an (r, depth) grid.
    Cv(CvArgs),
    /// Welch's t-test and Cohen's d for two accuracy summaries.
    Compare(CompareArgs),
    /// Operation counts of one split search.
    Opcount(OpcountArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Preprocessing preset: none, iris, cancer or housing.
    #[arg(long, default_value = "none")]
    pub preset: Preset,
    /// Label column name, or "last".
    #[arg(long)]
    pub label_column: Option<String>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// cart-elc, cart-axis, hhcart-d or hhcart-a.
    #[arg(long, default_value = "cart-elc")]
    pub algorithm: Algorithm,
    /// twoing, gini or igain.
    #[arg(long, default_value = "gini")]
    pub criterion: CriterionKind,
    /// Hyperplane order (cart-elc only).
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long, default_value_t = 5)]
    pub max_depth: usize,
    /// Tree JSON path; defaults to `<out-dir>/tree.json`.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Tree JSON written by `train`.
    #[arg(long)]
    pub tree: PathBuf,
    /// Feature CSV; extra label column allowed with `--label-column` or `--preset`.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value = "none")]
    pub preset: Preset,
    #[arg(long)]
    pub label_column: Option<String>,
    /// Algorithm the tree came from; picks the preset's missing-value handling.
    #[arg(long, default_value = "cart-elc")]
    pub algorithm: Algorithm,
    /// Predictions CSV path; defaults to `<out-dir>/predictions.csv`.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value = "cart-elc")]
    pub algorithm: Algorithm,
    #[arg(long, default_value = "gini")]
    pub criterion: CriterionKind,
    /// Largest r of the grid.
    #[arg(long, default_value_t = 1)]
    pub grid_r: usize,
    /// Largest max depth of the grid.
    #[arg(long, default_value_t = 5)]
    pub grid_depth: usize,
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report JSON path; the CSV grid goes next to it. Defaults to `<out-dir>/report.json`.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// First summary as `mean,std,n`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "report_a")]
    pub a: Option<String>,
    /// Second summary as `mean,std,n`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "report_b")]
    pub b: Option<String>,
    /// First summary from a `cv` report's selected cell.
    #[arg(long)]
    pub report_a: Option<PathBuf>,
    /// Second summary from a `cv` report's selected cell.
    #[arg(long)]
    pub report_b: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridFormat {
    Table,
    Csv,
}

#[derive(Debug, Args)]
pub struct OpcountArgs {
    /// Sample counts, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = TABLE1_N)]
    pub n_list: Vec<u64>,
    /// Hyperplane orders (and feature counts), comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = TABLE1_R)]
    pub r_list: Vec<u64>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: GridFormat,
}

/// Parses `argv` (program name first) and runs the command, printing to `out`.
pub fn run(argv: &[String], out: &mut dyn Write) -> Result<()> {
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    let args = argv.get(1..).unwrap_or_default();
    execute(&cli, args, out)
}

/// Runs a parsed command on a pool of `--workers` threads.
pub fn execute(cli: &Cli, args: &[String], out: &mut dyn Write) -> Result<()> {
    let mut buffer = Vec::new();
    match cli.workers {
        Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Pool(e.to_string()))?;
            pool.install(|| dispatch(cli, args, &mut buffer))?
        }
        None => dispatch(cli, args, &mut buffer)?,
    }
    out.write_all(&buffer).map_err(stdout_error)
}

fn dispatch(cli: &Cli, args: &[String], out: &mut Vec<u8>) -> Result<()> {
    match &cli.command {
        Command::Train(a) => train(a, &cli.out_dir, args, out),
        Command::Predict(a) => predict(a, &cli.out_dir, args, out),
        Command::Cv(a) => cv(a, &cli.out_dir, args, out),
        Command::Compare(a) => compare(a, out),
        Command::Opcount(a) => opcount(a, out),
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn stdout_error(source: std::io::Error) -> CliError {
    CliError::Output {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

fn train(a: &TrainArgs, out_dir: &Path, args: &[String], out: &mut dyn Write) -> Result<()> {
    let bytes = read_input(&a.data.data)?;
    let table = Table::from_bytes(&a.data.data, &bytes)?;
    let dataset = a
        .data
        .preset
        .prepare(&table, a.data.label_column.as_deref(), a.algorithm)?;
    let config = InductionConfig {
        criterion: a.criterion,
        r: a.r,
        max_depth: a.max_depth,
        algorithm: a.algorithm,
    };
    let tree = fit(&config, &dataset)?;
    let path = a.output.clone().unwrap_or_else(|| out_dir.join("tree.json"));
    let mut manifest = RunManifest::new("train", args, None);
    manifest.add_input(&a.data.data, &bytes);
    manifest.write_with(&[(path, tree_to_bytes(&tree))])?;
    writeln!(
        out,
        "accuracy {:.6}\nsize {}\ndepth {}",
        tree.accuracy(&dataset),
        tree.size(),
        tree.depth()
    )
    .map_err(stdout_error)
}

fn load_tree(path: &Path) -> Result<(Tree, Vec<u8>)> {
    let bytes = read_input(path)?;
    let tree = tree_from_slice(&bytes).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok((tree, bytes))
}

fn predict(a: &PredictArgs, out_dir: &Path, args: &[String], out: &mut dyn Write) -> Result<()> {
    let (tree, tree_bytes) = load_tree(&a.tree)?;
    let bytes = read_input(&a.data)?;
    let table = Table::from_bytes(&a.data, &bytes)?;
    let labelled = a.preset != Preset::None || a.label_column.is_some();

    // (feature rows, true class names when labels are present)
    let (rows, truth): (Vec<Vec<f64>>, Option<Vec<String>>) = if labelled {
        let dataset = a.preset.prepare(&table, a.label_column.as_deref(), a.algorithm)?;
        let rows = (0..dataset.n()).map(|i| dataset.row(i).to_vec()).collect();
        let names = dataset
            .labels()
            .iter()
            .map(|&c| dataset.class_names()[c].clone())
            .collect();
        (rows, Some(names))
    } else {
        let (_, cells) = table.features(None)?;
        let rows = cells
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect())
            .collect();
        (rows, None)
    };
    let m = rows.first().map_or(0, Vec::len);
    if m != tree.m {
        return Err(CliError::Usage(format!(
            "{} has {m} feature columns but the tree expects {}",
            a.data.display(),
            tree.m
        )));
    }

    let predictions: Vec<&str> = rows.iter().map(|r| tree.predict_name(r)).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["prediction"]).expect("in-memory write");
    for p in &predictions {
        let field = if MISSING_TOKENS.contains(p) {
            format!("\"{p}\"")
        } else {
            (*p).to_string()
        };
        w.write_record([field]).expect("in-memory write");
    }
    let csv_bytes = w.into_inner().expect("in-memory flush");

    let path = a.output.clone().unwrap_or_else(|| out_dir.join("predictions.csv"));
    let mut manifest = RunManifest::new("predict", args, None);
    manifest.add_input(&a.tree, &tree_bytes);
    manifest.add_input(&a.data, &bytes);
    manifest.write_with(&[(path, csv_bytes)])?;

    writeln!(out, "rows {}", predictions.len()).map_err(stdout_error)?;
    if let Some(truth) = truth {
        let correct = predictions.iter().zip(&truth).filter(|(p, t)| **p == t.as_str()).count();
        writeln!(out, "accuracy {:.6}", correct as f64 / truth.len() as f64).map_err(stdout_error)?;
    }
    Ok(())
}

fn cv(a: &CvArgs, out_dir: &Path, args: &[String], out: &mut dyn Write) -> Result<()> {
    let bytes = read_input(&a.data.data)?;
    let table = Table::from_bytes(&a.data.data, &bytes)?;
    let dataset = a
        .data
        .preset
        .prepare(&table, a.data.label_column.as_deref(), a.algorithm)?;
    let config = CvConfig {
        folds: a.folds,
        repeats: a.repeats,
        seed: a.seed,
        grid_r_max: a.grid_r,
        grid_depth_max: a.grid_depth,
    };
    let report = ReportDoc::from_report(&grid_search(&dataset, &config, a.criterion, a.algorithm)?);
    let json_path = a.output.clone().unwrap_or_else(|| out_dir.join("report.json"));
    let csv_path = json_path.with_extension("csv");
    let mut manifest = RunManifest::new("cv", args, Some(a.seed));
    manifest.add_input(&a.data.data, &bytes);
    manifest.write_with(&[(json_path, report.to_json()), (csv_path, report.to_csv())])?;

    let best = report.selected_cell().expect("selected cell is part of the grid");
    writeln!(
        out,
        "selected r {} depth {}\naccuracy {:.6} +- {:.6}\nsize {:.6} +- {:.6}",
        best.r, best.depth, best.mean_accuracy, best.std_accuracy, best.mean_size, best.std_size
    )
    .map_err(stdout_error)
}

/// Parses `mean,std,n`.
pub fn parse_summary(s: &str) -> Result<(f64, f64, usize)> {
    let bad = || CliError::Usage(format!("expected mean,std,n but got {s:?}"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [mean, std, n] = parts.as_slice() else {
        return Err(bad());
    };
    let mean: f64 = mean.parse().map_err(|_| bad())?;
    let std: f64 = std.parse().map_err(|_| bad())?;
    let n: usize = n.parse().map_err(|_| bad())?;
    if !mean.is_finite() || !std.is_finite() || std < 0.0 {
        return Err(bad());
    }
    Ok((mean, std, n))
}

fn report_summary(path: &Path) -> Result<(f64, f64, usize)> {
    let bytes = read_input(path)?;
    let doc: ReportDoc = serde_json::from_slice(&bytes).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let cell = doc.selected_cell().ok_or_else(|| CliError::Parse {
        path: path.to_path_buf(),
        message: "selected cell is not part of the grid".into(),
    })?;
    Ok((cell.mean_accuracy, cell.std_accuracy, doc.repeats))
}

fn side(triple: &Option<String>, report: &Option<PathBuf>, name: &str) -> Result<(f64, f64, usize)> {
    match (triple, report) {
        (Some(t), None) => parse_summary(t),
        (None, Some(p)) => report_summary(p),
        _ => Err(CliError::Usage(format!("give exactly one of --{name} and --report-{name}"))),
    }
}

/// Three decimals without a negative zero.
pub fn fixed3(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn compare(a: &CompareArgs, out: &mut dyn Write) -> Result<()> {
    let (ma, sa, na) = side(&a.a, &a.report_a, "a")?;
    let (mb, sb, nb) = side(&a.b, &a.report_b, "b")?;
    let p = welch_t_test(ma, sa, na, mb, sb, nb)?;
    let d = match cohens_d(ma, sa, mb, sb) {
        Ok(d) => fixed3(d),
        Err(CoreError::UndefinedEffect) => "undefined".into(),
        Err(e) => return Err(e.into()),
    };
    writeln!(out, "p = {}\nd = {d}", fixed3(p)).map_err(stdout_error)
}

fn opcount(a: &OpcountArgs, out: &mut dyn Write) -> Result<()> {
    if a.n_list.is_empty() || a.r_list.is_empty() {
        return Err(CliError::Usage("--n-list and --r-list need at least one value".into()));
    }
    let grid = table1(&a.n_list, &a.r_list);
    let cell_text = |count: &cart_elc_core::Result<_>| match count {
        Ok(v) => format_sci3(v),
        Err(_) => "r > n".to_string(),
    };
    let text = match a.format {
        GridFormat::Csv => {
            let mut s = String::from("r");
            for n in &a.n_list {
                s.push_str(&format!(",{n}"));
            }
            s.push('\n');
            for row in &grid {
                s.push_str(&row[0].r.to_string());
                for cell in row {
                    s.push(',');
                    s.push_str(&cell_text(&cell.count));
                }
                s.push('\n');
            }
            s
        }
        GridFormat::Table => {
            let width = 9;
            let mut s = format!("{:>4}", "r\\n");
            for n in &a.n_list {
                s.push_str(&format!(" {:>width$}", n));
            }
            s.push('\n');
            for row in &grid {
                s.push_str(&format!("{:>4}", row[0].r));
                for cell in row {
                    s.push_str(&format!(" {:>width$}", cell_text(&cell.count)));
                }
                s.push('\n');
            }
            s
        }
    };
    out.write_all(text.as_bytes()).map_err(stdout_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summaries() {
        assert_eq!(parse_summary("98.9, 0.2,10").unwrap(), (98.9, 0.2, 10));
        for bad in ["98.9,0.2", "a,b,c", "1,-1,10", "1,2,3,4", "1,2,x"] {
            assert_eq!(parse_summary(bad).unwrap_err().exit_code(), 2, "{bad}");
        }
        assert_eq!(fixed3(-0.0001), "0.000");
        assert_eq!(fixed3(1.5764), "1.576");
    }
}
