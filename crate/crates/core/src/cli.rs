//! Command-line front end: `qdual analyze | decompose | ellipsoid | convert`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::capacity::{self, ChiConfig, ChiResult};
use crate::channel::Channel;
use crate::channel_file::{channel_json, matrix_json, parse_channel, write_channel, ChannelEncoding};
use crate::error::{Error, Result};
use crate::extremal;
use crate::qubit::{self, SloccKind};

#[derive(Debug, Parser)]
#[command(name = "qdual", version, about = "Quantum channels through their dual states")]
pub struct Cli {
    /// Seed for every randomised search.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Independence threshold for the extremality test.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report properties of a channel.
    Analyze(AnalyzeArgs),
    /// Split a channel into extremal channels.
    Decompose {
        path: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_terms: usize,
    },
    /// Bloch-ellipsoid parameters of a qubit channel as CSV.
    Ellipsoid {
        path: PathBuf,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rewrite a channel file in Kraus or Choi form.
    Convert {
        path: PathBuf,
        #[arg(long, value_enum)]
        to: ChannelEncoding,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Selected analyses; none selected means all.
#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub path: PathBuf,
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub choi: bool,
    #[arg(long)]
    pub rank: bool,
    #[arg(long)]
    pub extremality: bool,
    /// Entanglement breaking and distribution.
    #[arg(long)]
    pub eb: bool,
    #[arg(long)]
    pub normal_forms: bool,
    #[arg(long)]
    pub fidelity: bool,
    #[arg(long)]
    pub capacities: bool,
}

impl AnalyzeArgs {
    fn wants(&self, flag: bool) -> bool {
        let none = !(self.choi
            || self.rank
            || self.extremality
            || self.eb
            || self.normal_forms
            || self.fidelity
            || self.capacities);
        self.all || none || flag
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    NotApplicable,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChannelSummary {
    pub dim: usize,
    pub rank: usize,
    pub trace_preserving: bool,
    pub unital: bool,
    pub completely_positive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub tol: f64,
    pub version: &'static str,
}

/// Everything a command reports; the structured format serialises it as is.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub command: String,
    pub channel: ChannelSummary,
    pub results: Vec<Entry>,
    pub provenance: Provenance,
}

impl AnalysisReport {
    fn new(command: &str, ch: &Channel, cli: &Cli) -> Result<Self> {
        Ok(AnalysisReport {
            command: command.into(),
            channel: ChannelSummary {
                dim: ch.dim(),
                rank: ch.rank(),
                trace_preserving: ch.is_tp()?,
                unital: ch.is_unital()?,
                // channels are only built from valid Kraus or Choi data
                completely_positive: true,
            },
            results: Vec::new(),
            provenance: Provenance { seed: cli.seed, tol: cli.tol, version: env!("CARGO_PKG_VERSION") },
        })
    }

    fn push(&mut self, name: &str, method: Option<&str>, outcome: Result<Value>) {
        let (status, value, message) = match outcome {
            Ok(v) => (Status::Ok, v, None),
            Err(e @ (Error::Hypothesis(_) | Error::NotExtremal | Error::AlreadyExtremal)) => {
                (Status::NotApplicable, Value::Null, Some(e.to_string()))
            }
            Err(e) => (Status::Failed, Value::Null, Some(e.to_string())),
        };
        self.results.push(Entry { name: name.into(), status, method: method.map(String::from), value, message });
    }

    pub fn all_completed(&self) -> bool {
        self.results.iter().all(|e| e.status != Status::Failed)
    }

    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.results.iter().find(|e| e.name == name)
    }

    fn render_text(&self) -> String {
        let c = &self.channel;
        let mut s = format!(
            "{}: dim {}, rank {}, trace preserving {}, unital {}, completely positive {}\n",
            self.command, c.dim, c.rank, c.trace_preserving, c.unital, c.completely_positive
        );
        for e in &self.results {
            let method = e.method.as_deref().map(|m| format!(" [{m}]")).unwrap_or_default();
            let body = match e.status {
                Status::Ok => e.value.to_string(),
                Status::NotApplicable => format!("not applicable ({})", e.message.as_deref().unwrap_or("")),
                Status::Failed => format!("FAILED ({})", e.message.as_deref().unwrap_or("")),
            };
            s.push_str(&format!("  {}{method}: {body}\n", e.name));
        }
        s.push_str(&format!("  seed {}, tol {:e}\n", self.provenance.seed, self.provenance.tol));
        s
    }
}

fn qubit_only(ch: &Channel) -> Result<()> {
    if ch.dim() == 2 {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!("qubit channel required, got dimension {}", ch.dim())))
    }
}

fn chi_value(r: &ChiResult) -> Value {
    json!({
        "chi": r.chi,
        "ensemble": r.ensemble.items.iter().map(|(p, rho)| json!({"weight": p, "state": matrix_json(rho)})).collect::<Vec<_>>(),
    })
}

fn analyze(args: &AnalyzeArgs, ch: &Channel, cli: &Cli) -> Result<AnalysisReport> {
    let mut rep = AnalysisReport::new("analyze", ch, cli)?;
    if args.wants(args.choi) {
        rep.push("choi", None, Ok(matrix_json(&ch.choi().choi)));
    }
    if args.wants(args.rank) {
        rep.push("rank", None, Ok(json!(ch.rank())));
    }
    if args.wants(args.extremality) {
        rep.push("extremal", None, extremal::is_extremal_tp(ch, cli.tol).map(|b| json!(b)));
    }
    if args.wants(args.eb) {
        rep.push(
            "entanglement_breaking",
            Some("concurrence+ppt"),
            qubit_only(ch).and_then(|_| qubit::is_entanglement_breaking(ch)).map(|b| json!(b)),
        );
        rep.push(
            "distributes_entanglement",
            None,
            qubit_only(ch).and_then(|_| qubit::can_distribute_entanglement(ch)).map(|b| json!(b)),
        );
    }
    if args.wants(args.normal_forms) {
        rep.push(
            "lu_normal_form",
            None,
            qubit_only(ch)
                .and_then(|_| qubit::lu_normal_form(ch))
                .map(|f| json!({"lambdas": f.lambdas, "shift": f.shift})),
        );
        rep.push(
            "slocc_normal_form",
            None,
            qubit_only(ch).and_then(|_| qubit::slocc_normal_form(ch)).map(|f| {
                let params = match f.kind {
                    SloccKind::Generic { s } => json!({"s": s}),
                    SloccKind::NonGeneric { x } => json!({"x": x}),
                    SloccKind::Point => json!({}),
                };
                json!({"kind": f.kind.name(), "params": params, "scale": f.scale})
            }),
        );
        rep.push(
            "extremal_form",
            None,
            qubit_only(ch)
                .and_then(|_| qubit::extremal_form_of(ch))
                .map(|f| json!({"alpha": f.alpha, "beta": f.beta, "s0": f.s0, "s1": f.s1})),
        );
    }
    if args.wants(args.fidelity) {
        rep.push(
            "max_entanglement_fidelity",
            Some("dual-state top eigenvector"),
            qubit::max_entanglement_fidelity(ch).map(
                |(f, chi)| json!({"f_max": f, "input": chi.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>()}),
            ),
        );
    }
    if args.wants(args.capacities) {
        let cfg = ChiConfig { seed: cli.seed, ..Default::default() };
        rep.push(
            "quantum_capacity",
            Some("rank-2 unital formula"),
            capacity::quantum_capacity_rank2_unital(ch).map(|q| json!(q)),
        );
        rep.push(
            "holevo_chi",
            Some(capacity::ChiMethod::Multistart.name()),
            qubit_only(ch).and_then(|_| capacity::holevo_chi(ch, &cfg)).map(|r| chi_value(&r)),
        );
        rep.push(
            "holevo_chi_exact",
            Some(capacity::ChiMethod::ConcurrenceExact.name()),
            qubit_only(ch).and_then(|_| capacity::holevo_chi_extremal(ch, &cfg)).map(|r| chi_value(&r)),
        );
    }
    Ok(rep)
}

fn decompose(ch: &Channel, max_terms: usize, cli: &Cli) -> Result<AnalysisReport> {
    let mut rep = AnalysisReport::new("decompose", ch, cli)?;
    let outcome = extremal::decompose_into_extremals(ch, max_terms).and_then(|parts| {
        let rebuilt = Channel::mixture(&parts)?;
        Ok(json!({
            "components": parts
                .iter()
                .map(|(w, c)| json!({"weight": w, "rank": c.rank(), "channel": channel_json(c, ChannelEncoding::Kraus)}))
                .collect::<Vec<_>>(),
            "reconstruction_error": rebuilt.action_distance(ch),
        }))
    });
    rep.push("decomposition", Some("perturbation split"), outcome);
    Ok(rep)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn emit(rep: &AnalysisReport, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Text => out.write_all(rep.render_text().as_bytes())?,
        Format::Structured => {
            serde_json::to_writer_pretty(&mut *out, rep).map_err(|e| Error::Io(e.into()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    match &cli.command {
        Command::Analyze(args) => {
            let ch = parse_channel(&read(&args.path)?)?;
            let rep = analyze(args, &ch, cli)?;
            emit(&rep, cli.format, out)?;
            Ok(rep.all_completed())
        }
        Command::Decompose { path, max_terms } => {
            let ch = parse_channel(&read(path)?)?;
            let rep = decompose(&ch, *max_terms, cli)?;
            emit(&rep, cli.format, out)?;
            Ok(rep.all_completed())
        }
        Command::Ellipsoid { path, out: target } => {
            let ch = parse_channel(&read(path)?)?;
            let e = qubit::ellipsoid(&ch)?;
            let csv = format!("{}\n{}\n", qubit::Ellipsoid::CSV_HEADER, e.csv_row());
            match target {
                Some(p) => {
                    std::fs::write(p, csv)?;
                    writeln!(out, "wrote {}", p.display())?;
                }
                None => out.write_all(csv.as_bytes())?,
            }
            Ok(true)
        }
        Command::Convert { path, to, out: target } => {
            let ch = parse_channel(&read(path)?)?;
            let text = write_channel(&ch, *to) + "\n";
            match target {
                Some(p) => std::fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(true)
        }
    }
}

/// Runs the command line and returns the process exit code: 0 when every
/// requested analysis completed, 1 when one failed, 2 on bad input.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "qdual: {e}");
            match e {
                Error::Parse(_) | Error::Io(_) => 2,
                _ => 1,
            }
        }
    }
}
