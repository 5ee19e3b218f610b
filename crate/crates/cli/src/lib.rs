//! Command-line front end for `symstrata`.
//!
//! [`run`] takes the arguments after the program name, writes the result to
//! `out` and diagnostics to `err`, and returns the exit code: 0 on success,
//! 1 on a failed verification or an engine discrepancy, 2 on a usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use symstrata::gerstenhaber::stratum_betti_table;
use symstrata::models::moller_raussen;
use symstrata::presentation::verify_ring_presentation;
use symstrata::strata::{
    first_disagreement, formula_corrected, formula_vw, parse_partition, stable_betti_with,
    DiscrepancyKind, Engines,
};
use symstrata::verify::{self, projective_presentation, Verification};
use symstrata::Rational;

#[derive(Parser, Debug)]
#[command(
    name = "symstrata",
    version,
    about = "Rational Betti tables of strata of symmetric products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a Betti table.
    Betti {
        #[command(subcommand)]
        target: BettiTarget,
    },
    /// Side-by-side table of the predicted and corrected stable formulas for w_{1^j 2}.
    CompareFormulas(CompareArgs),
    /// Run a named verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(Subcommand, Debug)]
enum BettiTarget {
    /// Cohomology of Map_1(CP^m, S^{2m}) from its Sullivan model.
    Mapspace(MapspaceArgs),
    /// Homology of the stratum w_lambda(C^d).
    Stratum(StratumArgs),
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, default_value_t = 30)]
    max_degree: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct MapspaceArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    /// Also verify the ring presentation (m = 2 or 3).
    #[arg(long)]
    ring: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct StratumArgs {
    /// Partition such as "1^3 2": tokens `a` or `a^m`, separated by spaces (quote the whole value).
    #[arg(long)]
    lambda: String,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    d: u32,
    /// Stable table, colimit over the number of ones.
    #[arg(long, conflicts_with = "j")]
    stable: bool,
    /// Replace the number of parts equal to 1 by J.
    #[arg(long)]
    j: Option<u32>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    d: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Suite {
    ConjectureG,
    ConjectureH,
    Cp3,
    #[value(name = "formula-150")]
    Formula150,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Serialize, Debug, Default)]
struct OutputTable {
    title: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<u32>,
    rows: Vec<Row>,
    discrepancies: Vec<DiscrepancyOut>,
    notes: Vec<String>,
    #[serde(skip)]
    engine_names: Vec<String>,
    #[serde(skip)]
    reference_name: Option<String>,
}

#[derive(Serialize, Debug)]
struct Row {
    degree: u32,
    dim: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    engines: Option<BTreeMap<String, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<BTreeMap<String, u64>>,
}

#[derive(Serialize, Debug)]
struct DiscrepancyOut {
    degree: u32,
    kind: &'static str,
    values: BTreeMap<String, u64>,
}

impl OutputTable {
    fn plain(title: String, d: Option<u32>, table: &[(u32, u64)]) -> Self {
        Self {
            title,
            d,
            rows: table
                .iter()
                .map(|&(degree, dim)| Row {
                    degree,
                    dim,
                    engines: None,
                    reference: None,
                })
                .collect(),
            ..Self::default()
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn extra_columns(&self) -> Vec<String> {
        self.engine_names
            .iter()
            .cloned()
            .chain(self.reference_name.clone())
            .collect()
    }

    fn cells(&self, row: &Row) -> Vec<String> {
        let mut cells = vec![row.degree.to_string(), row.dim.to_string()];
        for name in &self.engine_names {
            let v = row
                .engines
                .as_ref()
                .and_then(|e| e.get(name))
                .copied()
                .unwrap_or(0);
            cells.push(v.to_string());
        }
        if self.reference_name.is_some() {
            let v = row.reference.as_ref().and_then(|r| r.values().next());
            cells.push(v.map_or(String::new(), u64::to_string));
        }
        cells
    }

    fn render_csv(&self) -> String {
        let mut header = vec!["degree".to_string(), "dim".to_string()];
        header.extend(self.extra_columns());
        let mut out = header.join(",") + "\n";
        for row in &self.rows {
            out += &(self.cells(row).join(",") + "\n");
        }
        out
    }

    fn render_text(&self) -> String {
        let mut out = format!("{}\n", self.title);
        for note in &self.notes {
            out += &format!("# {note}\n");
        }
        let mut header = vec!["degree".to_string(), "dim".to_string()];
        header.extend(self.extra_columns());
        let body: Vec<Vec<String>> = self.rows.iter().map(|r| self.cells(r)).collect();
        let widths: Vec<usize> = (0..header.len())
            .map(|c| {
                body.iter()
                    .map(|r| r[c].len())
                    .chain([header[c].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            padded.join("  ")
        };
        out += &(line(&header) + "\n");
        for (row, cells) in self.rows.iter().zip(&body) {
            let mut text = line(cells);
            for x in self.discrepancies.iter().filter(|x| x.degree == row.degree) {
                text += &format!("  ! {}", x.kind);
            }
            out += &(text + "\n");
        }
        for x in &self.discrepancies {
            let vals: Vec<String> = x.values.iter().map(|(n, v)| format!("{n}={v}")).collect();
            out += &format!(
                "discrepancy at degree {} ({}): {}\n",
                x.degree,
                x.kind,
                vals.join(" ")
            );
        }
        out
    }
}

struct Outcome {
    text: String,
    code: i32,
}

struct UsageError(String);

/// Runs the command line `symstrata ARGS…`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_engines(args, &Engines::default(), out, err)
}

/// Like [`run`] with replaceable series engines.
pub fn run_with_engines<I, T>(
    args: I,
    engines: &Engines,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("symstrata")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(cli, engines) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.text.as_bytes());
            outcome.code
        }
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(cli: Cli, engines: &Engines) -> Result<Outcome, UsageError> {
    match cli.command {
        Command::Betti {
            target: BettiTarget::Mapspace(args),
        } => mapspace(args),
        Command::Betti {
            target: BettiTarget::Stratum(args),
        } => stratum(args, engines),
        Command::CompareFormulas(args) => Ok(compare(args)),
        Command::Verify { suite } => Ok(run_verify(suite, engines)),
    }
}

fn mapspace(args: MapspaceArgs) -> Result<Outcome, UsageError> {
    let m = args.m;
    if args.ring && !(2..=3).contains(&m) {
        return Err(UsageError(format!(
            "--ring: presentations are known only for m = 2, 3 (got --m {m})"
        )));
    }
    let model = moller_raussen::<Rational>(m).map_err(|e| UsageError(format!("--m: {e}")))?;
    let max = args.common.max_degree;
    let mut table = OutputTable::plain(
        format!("H^*(Map_1(CP^{m}, S^{}); Q)", 2 * m),
        None,
        &model.betti_table(max),
    );
    let mut code = 0;
    if args.ring {
        let checked = projective_presentation(&model, m)
            .and_then(|p| verify_ring_presentation(&model, &p, max));
        match checked {
            Ok(report) => {
                for (name, rep) in &report.representatives {
                    table.notes.push(format!("{name} = {rep}"));
                }
                for rel in &report.relations {
                    let status = if rel.is_coboundary() {
                        "verified"
                    } else {
                        "FAILED"
                    };
                    table
                        .notes
                        .push(format!("relation {} = 0: {status}", rel.relation));
                }
                for line in &report.adjustments {
                    table.notes.push(format!("adjusted {line}"));
                }
                let verdict = |ok: bool| if ok { "ok" } else { "FAILED" };
                table.notes.push(format!(
                    "surjectivity: {}",
                    verdict(report.surjectivity_holds())
                ));
                table
                    .notes
                    .push(format!("relations: {}", verdict(report.relations_hold())));
                table.notes.push(format!(
                    "dimensions: {}",
                    verdict(report.dimensions_match())
                ));
                if !report.passed() {
                    code = 1;
                }
            }
            Err(e) => {
                table.notes.push(format!("ring presentation: {e}"));
                code = 1;
            }
        }
    }
    Ok(Outcome {
        text: table.render(args.common.format),
        code,
    })
}

fn stratum(args: StratumArgs, engines: &Engines) -> Result<Outcome, UsageError> {
    let lambda = parse_partition(&args.lambda).map_err(|e| UsageError(format!("--lambda: {e}")))?;
    let max = args.common.max_degree;
    let d = args.d;
    if args.stable {
        let report =
            stable_betti_with(engines, &lambda, d, max).map_err(|e| UsageError(e.to_string()))?;
        let mut table = OutputTable {
            title: format!("stable H_*(w_{{1^j {}}}(C^{d}); Q)", report.tail),
            d: Some(d),
            engine_names: report.engines.clone(),
            reference_name: report
                .rows
                .first()
                .and_then(|r| r.reference.as_ref())
                .map(|(n, _)| n.clone()),
            ..OutputTable::default()
        };
        table
            .notes
            .push(format!("j = {} (stable through degree {max})", report.ones));
        table.notes.push(report.provenance());
        for row in &report.rows {
            table.rows.push(Row {
                degree: row.degree,
                dim: row.dim(),
                engines: Some(row.values.iter().cloned().collect()),
                reference: row.reference.clone().map(|r| [r].into()),
            });
        }
        for x in &report.discrepancies {
            table.discrepancies.push(DiscrepancyOut {
                degree: x.degree,
                kind: match x.kind {
                    DiscrepancyKind::Engines => "engines",
                    DiscrepancyKind::Reference => "reference",
                },
                values: x.values.iter().cloned().collect(),
            });
        }
        let code = i32::from(!report.engines_agree());
        return Ok(Outcome {
            text: table.render(args.common.format),
            code,
        });
    }
    let lambda = match args.j {
        Some(j) => lambda.with_ones(j),
        None => lambda,
    };
    let t =
        stratum_betti_table(&lambda, d, max).map_err(|e| UsageError(format!("--lambda: {e}")))?;
    let mut table = OutputTable::plain(format!("H_*(w_{{{lambda}}}(C^{d}); Q)"), Some(d), &t);
    table.notes.push(format!("j = {}", lambda.multiplicity(1)));
    Ok(Outcome {
        text: table.render(args.common.format),
        code: 0,
    })
}

fn compare(args: CompareArgs) -> Outcome {
    let d = args.d;
    let mut table = OutputTable {
        title: format!("stable H_*(w_{{1^j 2}}(C^{d}); Q): predicted vs corrected"),
        d: Some(d),
        engine_names: vec!["predicted".into(), "corrected".into()],
        ..OutputTable::default()
    };
    for i in 0..=args.common.max_degree {
        let (p, c) = (formula_vw(d, i), formula_corrected(d, i));
        table.rows.push(Row {
            degree: i,
            dim: c,
            engines: Some([("predicted".to_string(), p), ("corrected".to_string(), c)].into()),
            reference: None,
        });
    }
    let first = first_disagreement(d);
    if first <= args.common.max_degree {
        table
            .notes
            .push(format!("first disagreement at degree {first}"));
    } else {
        table.notes.push(format!(
            "no disagreement up to degree {} (first at {first})",
            args.common.max_degree
        ));
    }
    Outcome {
        text: table.render(args.common.format),
        code: 0,
    }
}

fn run_verify(suite: Suite, engines: &Engines) -> Outcome {
    let results: Vec<Verification> = match suite {
        Suite::ConjectureG => vec![verify::conjecture_g()],
        Suite::ConjectureH => vec![verify::conjecture_h(engines)],
        Suite::Cp3 => vec![verify::cp3()],
        Suite::Formula150 => vec![verify::formula_150(engines)],
        Suite::All => verify::all(engines),
    };
    let mut text = String::new();
    for v in &results {
        text += &format!("== {} ==\n", v.name);
        for line in &v.lines {
            text += &format!("{line}\n");
        }
        text += &format!("{}: {}\n", v.name, if v.passed { "PASS" } else { "FAIL" });
    }
    let passed = results.iter().all(|v| v.passed);
    if results.len() > 1 {
        text += if passed { "PASS\n" } else { "FAIL\n" };
    }
    Outcome {
        text,
        code: i32::from(!passed),
    }
}
