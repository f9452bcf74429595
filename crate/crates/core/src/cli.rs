//! Command-line front end: game files, table rendering and subcommands.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::equilibrium::{component_outcome, solve_components, Mix, MixedEquilibrium, OutcomeReport};
use crate::error::{Error, Result};
use crate::game::{Payoff, SignalingGame};
use crate::index::{index_sum_for, IndexMethod, IndexResult, PerturbationConfig};
use crate::normalform::{
    build_normal_form, build_reduced_sgcm, build_sgcm_normal_form, reduce_normal_form, BimatrixGame,
};
use crate::outcome::{describe, describe_monitored, InducedOutcome};
use crate::rational::{self, Rational};
use crate::sweep::{
    base_components, cost_sweep, resolve_component, survival_threshold, verify_theorem_bound, Grid, SweepConfig,
    SweepRecord,
};

const SECTIONS: [&str; 4] = ["types", "messages", "actions", "payoffs"];

/// Parses the line-oriented game format:
///
/// ```text
/// types: S:9/10 W:1/10
/// messages: B Q
/// actions: F N
/// payoffs:
/// S B F 1 0
/// ...
/// ```
///
/// Each payoff line is `type message action sender receiver`. `#` starts a
/// comment.
pub fn parse_game_file(text: &str) -> Result<SignalingGame> {
    let syntax = |line: usize, message: String| Error::Syntax { line, message };
    let mut types: Option<Vec<(String, Rational)>> = None;
    let mut messages: Option<Vec<String>> = None;
    let mut actions: Option<Vec<String>> = None;
    let mut in_payoffs = false;
    let mut payoffs = BTreeMap::new();

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, rest)) = line.split_once(':').filter(|(key, _)| SECTIONS.contains(&key.trim())) {
            let key = key.trim();
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            let seen = match key {
                "types" => types.is_some(),
                "messages" => messages.is_some(),
                "actions" => actions.is_some(),
                _ => in_payoffs,
            };
            if seen {
                return Err(syntax(line_no, format!("duplicate `{key}` section")));
            }
            match key {
                "types" => {
                    let mut parsed = Vec::with_capacity(tokens.len());
                    for tok in tokens {
                        let (label, p) = tok
                            .split_once(':')
                            .ok_or_else(|| syntax(line_no, format!("expected `label:probability`, got `{tok}`")))?;
                        let p = rational::parse(p)
                            .ok_or_else(|| syntax(line_no, format!("`{p}` is not a rational number")))?;
                        parsed.push((label.to_string(), p));
                    }
                    types = Some(parsed);
                }
                "messages" => messages = Some(tokens.iter().map(|t| t.to_string()).collect()),
                "actions" => actions = Some(tokens.iter().map(|t| t.to_string()).collect()),
                _ => {
                    if !tokens.is_empty() {
                        return Err(syntax(line_no, "payoff entries start on the line after `payoffs:`".into()));
                    }
                    in_payoffs = true;
                }
            }
            continue;
        }
        if !in_payoffs {
            return Err(syntax(line_no, format!("expected a section header, got `{line}`")));
        }
        let (Some(ts), Some(ms), Some(acts)) = (&types, &messages, &actions) else {
            return Err(syntax(line_no, "payoffs must follow the types, messages and actions sections".into()));
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(syntax(
                line_no,
                format!("expected `type message action sender receiver`, got {} fields", fields.len()),
            ));
        }
        let lookup = |labels: Vec<&String>, what: &str, label: &str| {
            labels.iter().position(|l| *l == label).ok_or_else(|| syntax(line_no, format!("unknown {what} `{label}`")))
        };
        let t = lookup(ts.iter().map(|(l, _)| l).collect(), "type", fields[0])?;
        let m = lookup(ms.iter().collect(), "message", fields[1])?;
        let a = lookup(acts.iter().collect(), "action", fields[2])?;
        let value =
            |s: &str| rational::parse(s).ok_or_else(|| syntax(line_no, format!("`{s}` is not a rational number")));
        let payoff = Payoff::new(value(fields[3])?, value(fields[4])?);
        if payoffs.insert((t, m, a), payoff).is_some() {
            return Err(syntax(line_no, format!("duplicate payoff for ({},{},{})", fields[0], fields[1], fields[2])));
        }
    }

    let mut missing = Vec::new();
    for (name, present) in [
        ("types", types.is_some()),
        ("messages", messages.is_some()),
        ("actions", actions.is_some()),
        ("payoffs", in_payoffs),
    ] {
        if !present {
            missing.push(format!("missing `{name}:` section"));
        }
    }
    if !missing.is_empty() {
        return Err(Error::InvalidGame(missing));
    }
    let (labels, prior) = types.unwrap_or_default().into_iter().unzip();
    SignalingGame::new(labels, messages.unwrap_or_default(), actions.unwrap_or_default(), prior, payoffs)
}

/// Canonical text of a game; `parse_game_file` inverts it exactly.
pub fn serialize_game(game: &SignalingGame) -> String {
    let mut out = String::new();
    let types: Vec<String> =
        game.types.iter().zip(&game.prior).map(|(t, p)| format!("{t}:{}", rational::show(p))).collect();
    out.push_str(&format!("types: {}\n", types.join(" ")));
    out.push_str(&format!("messages: {}\n", game.messages.join(" ")));
    out.push_str(&format!("actions: {}\n", game.actions.join(" ")));
    out.push_str("payoffs:\n");
    for (&(t, m, a), p) in &game.payoffs {
        out.push_str(&format!(
            "{} {} {} {} {}\n",
            game.types[t],
            game.messages[m],
            game.actions[a],
            rational::show(&p.sender),
            rational::show(&p.receiver)
        ));
    }
    out
}

pub fn load_game(path: &Path) -> Result<SignalingGame> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_game_file(&text)
}

/// Receiver label in the printed-table convention: monitor flag as `C`/`0`,
/// then the unmonitored action, then actions per message in reverse message
/// order. `1NF|F` becomes `CFFN`, `0**|N` becomes `0N**` and a plain `NF`
/// becomes `FN`. Labels built from multi-character names are left alone.
pub fn classic_label(label: &str) -> String {
    if label.contains(',') {
        return label.to_string();
    }
    match label.split_once('|') {
        Some((head, default)) => {
            let mut chars = head.chars();
            let flag = if chars.next() == Some('1') { "C" } else { "0" };
            let acts: String = chars.rev().collect();
            format!("{flag}{default}{acts}")
        }
        None => label.chars().rev().collect(),
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Style {
    pub classic_labels: bool,
    /// Show monitoring rows' receiver payoffs as `a-c`.
    pub symbolic: bool,
}

impl Style {
    fn row_label(&self, label: &str) -> String {
        if self.classic_labels {
            classic_label(label)
        } else {
            label.to_string()
        }
    }

    fn row_labels(&self, gamma: &BimatrixGame) -> Vec<String> {
        gamma.row_labels.iter().map(|l| self.row_label(l)).collect()
    }
}

fn receiver_cell(gamma: &BimatrixGame, i: usize, value: &Rational, style: Style) -> String {
    match &gamma.cost {
        Some(meta) if style.symbolic && meta.monitors[i] => {
            let base = value + &meta.cost;
            if base.is_zero() {
                "-c".into()
            } else {
                format!("{}-c", rational::show(&base))
            }
        }
        _ => rational::show(value),
    }
}

fn align(header: Vec<String>, rows: Vec<Vec<String>>) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in &rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for r in std::iter::once(&header).chain(&rows) {
        let cells: Vec<String> =
            r.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Rows are the receiver's strategies, columns the sender's; each cell is
/// `(sender, receiver)`.
pub fn render_bimatrix(gamma: &BimatrixGame, style: Style) -> String {
    let mut header = vec![String::new()];
    header.extend(gamma.col_labels.iter().cloned());
    let rows =
        style
            .row_labels(gamma)
            .into_iter()
            .enumerate()
            .map(|(i, label)| {
                let mut r = vec![label];
                r.extend(gamma.payoffs[i].iter().map(|p| {
                    format!("({}, {})", rational::show(&p.sender), receiver_cell(gamma, i, &p.receiver, style))
                }));
                r
            })
            .collect();
    align(header, rows)
}

fn bimatrix_json(gamma: &BimatrixGame, style: Style) -> Value {
    let cells: Vec<Vec<Value>> = gamma
        .payoffs
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .map(|p| json!([rational::show(&p.sender), receiver_cell(gamma, i, &p.receiver, style)]))
                .collect()
        })
        .collect();
    json!({
        "rows": style.row_labels(gamma),
        "cols": gamma.col_labels,
        "payoffs": cells,
        "cost": gamma.cost.as_ref().map(|m| rational::show(&m.cost)),
    })
}

fn show_mix(labels: &[String], mix: &[Rational]) -> String {
    let terms: Vec<String> = labels
        .iter()
        .zip(mix)
        .filter(|(_, w)| !w.is_zero())
        .map(|(l, w)| if *w == rational::one() { l.clone() } else { format!("{}·{l}", rational::show(w)) })
        .collect();
    terms.join(" + ")
}

fn mix_json(labels: &[String], mix: &Mix) -> Value {
    let entries: serde_json::Map<String, Value> = labels
        .iter()
        .zip(mix)
        .filter(|(_, w)| !w.is_zero())
        .map(|(l, w)| (l.clone(), Value::String(rational::show(w))))
        .collect();
    Value::Object(entries)
}

fn pair(p: &(Rational, Rational)) -> String {
    format!("({}, {})", rational::show(&p.0), rational::show(&p.1))
}

fn signed(v: i64) -> String {
    if v > 0 {
        format!("+{v}")
    } else {
        v.to_string()
    }
}

/// Support of a mix as `label:weight` pairs joined by `;`.
fn support_field(entries: &[(String, Rational)]) -> String {
    entries.iter().map(|(l, w)| format!("{l}:{}", rational::show(w))).collect::<Vec<_>>().join(";")
}

pub const SWEEP_HEADER: [&str; 9] = [
    "c",
    "found",
    "monitor_prob",
    "squared_distance",
    "distance_decimal",
    "u1",
    "u2",
    "sender_support",
    "receiver_support",
];

/// Writes one CSV row per record. Rationals are exact `p/q` strings.
pub fn write_sweep_csv(records: &[SweepRecord], path: &Path) -> Result<CommandResult> {
    let file = File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(SWEEP_HEADER)?;
    for r in records {
        w.write_record([
            rational::show(&r.c),
            if r.found { "1" } else { "0" }.to_string(),
            rational::show(&r.monitor_probability),
            rational::show(&r.squared_distance),
            r.distance.clone(),
            rational::show(&r.payoffs.0),
            rational::show(&r.payoffs.1),
            support_field(&r.sender_support),
            support_field(&r.receiver_support),
        ])?;
    }
    w.flush().map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    Ok(CommandResult {
        status: 0,
        stdout: format!("wrote {} rows to {}\n", records.len(), path.display()),
        stderr: String::new(),
        summary: json!({ "rows": records.len(), "path": path.display().to_string() }),
        csv_path: Some(path.to_path_buf()),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    /// 0 on success, 1 when a computation fails, 2 on a usage error.
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
    pub summary: Value,
    pub csv_path: Option<PathBuf>,
}

impl CommandResult {
    fn ok(stdout: String, summary: Value) -> Self {
        CommandResult { status: 0, stdout, stderr: String::new(), summary, csv_path: None }
    }

    fn failed(status: i32, message: String) -> Self {
        CommandResult {
            status,
            stdout: String::new(),
            summary: json!({ "error": message }),
            stderr: format!("error: {message}\n"),
            csv_path: None,
        }
    }
}

#[derive(Clone, Debug)]
enum CostArg {
    Value(Rational),
    /// `c`: keep the cost as a symbol.
    Symbol,
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    rational::parse(s).ok_or_else(|| format!("`{s}` is not a rational number (use p/q or an integer)"))
}

fn parse_cost(s: &str) -> std::result::Result<CostArg, String> {
    if s == "c" {
        return Ok(CostArg::Symbol);
    }
    let c = parse_rational(s)?;
    if c.is_negative() {
        return Err(format!("monitoring cost must be non-negative, got {s}"));
    }
    Ok(CostArg::Value(c))
}

#[derive(Parser, Debug)]
#[command(name = "sgcm", version, about = "Signaling games with costly monitoring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Receiver labels as in the printed tables (`CFFN`, `0N**`).
    #[arg(long, global = true)]
    classic_labels: bool,
    /// Print the machine-readable summary as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    replications: Option<usize>,
    /// Perturbation magnitude for index computation.
    #[arg(long, global = true, value_parser = parse_rational)]
    eta: Option<Rational>,
    /// Neighbourhood radius used when assigning perturbed equilibria.
    #[arg(long, global = true, value_parser = parse_rational)]
    delta: Option<Rational>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a game file.
    Validate { file: PathBuf },
    /// Normal form of the signaling game.
    Nf {
        file: PathBuf,
        /// Merge payoff-equivalent strategies.
        #[arg(long)]
        reduce: bool,
    },
    /// Normal form with costly monitoring.
    Sgcm {
        file: PathBuf,
        /// A rational, or `c` to print costs symbolically.
        #[arg(long, value_parser = parse_cost)]
        cost: CostArg,
        /// Merge strategies that differ only at unreached information sets.
        #[arg(long)]
        reduce: bool,
        /// Show monitoring payoffs as `a-c`.
        #[arg(long)]
        symbolic: bool,
    },
    /// Enumerate equilibria, optionally with components and indices.
    Solve {
        file: PathBuf,
        /// Solve the reduced monitored game at this cost.
        #[arg(long, value_parser = parse_rational)]
        cost: Option<Rational>,
        #[arg(long)]
        components: bool,
        #[arg(long)]
        index: bool,
    },
    /// Sweep the monitoring cost and write a CSV.
    Sweep {
        file: PathBuf,
        #[arg(long)]
        component: String,
        #[arg(long, value_parser = parse_rational, default_value = "0")]
        cmin: Rational,
        #[arg(long, value_parser = parse_rational)]
        cmax: Rational,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        /// Evenly spaced costs instead of halving from cmax.
        #[arg(long)]
        linear: bool,
    },
    /// Bracket the largest cost at which a component survives.
    Threshold {
        file: PathBuf,
        #[arg(long)]
        component: String,
        #[arg(long, value_parser = parse_rational, default_value = "1/1000")]
        tolerance: Rational,
    },
    /// Largest sampled cost keeping the outcome within epsilon.
    Theorem {
        file: PathBuf,
        #[arg(long)]
        component: String,
        #[arg(long, value_parser = parse_rational)]
        epsilon: Rational,
        #[arg(long, value_parser = parse_rational, default_value = "1")]
        cmax: Rational,
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
}

fn status_of(err: &Error) -> i32 {
    match err {
        Error::UnknownComponent(_) | Error::Config(_) | Error::NegativeCost(_) => 2,
        _ => 1,
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandResult::ok(text, Value::Null),
                _ => CommandResult {
                    status: 2,
                    stdout: String::new(),
                    stderr: text,
                    summary: json!({ "error": "usage" }),
                    csv_path: None,
                },
            };
        }
    };
    let json_out = cli.json;
    let mut result = match execute(&cli) {
        Ok(r) => r,
        Err(e) => CommandResult::failed(status_of(&e), e.to_string()),
    };
    if json_out {
        result.stdout = format!("{}\n", serde_json::to_string_pretty(&result.summary).unwrap_or_default());
    }
    result
}

fn index_config(cli: &Cli) -> Result<PerturbationConfig> {
    let d = PerturbationConfig::default();
    let cfg = PerturbationConfig {
        eta: cli.eta.clone().unwrap_or(d.eta),
        delta: cli.delta.clone().unwrap_or(d.delta),
        replications: cli.replications.unwrap_or(d.replications),
        seed: cli.seed.unwrap_or(d.seed),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn find_component(game: &SignalingGame, id: &str) -> Result<usize> {
    let (gamma, comps) = base_components(game)?;
    resolve_component(&gamma, &comps, id.strip_prefix("C_").unwrap_or(id))
}

fn execute(cli: &Cli) -> Result<CommandResult> {
    let style = Style { classic_labels: cli.classic_labels, symbolic: false };
    match &cli.command {
        Command::Validate { file } => {
            let game = load_game(file)?;
            let text = format!(
                "valid: {} types, {} messages, {} actions, {} payoff entries\n",
                game.types.len(),
                game.messages.len(),
                game.actions.len(),
                game.payoffs.len()
            );
            Ok(CommandResult::ok(text, json!({ "valid": true, "canonical": serialize_game(&game) })))
        }
        Command::Nf { file, reduce } => {
            let game = load_game(file)?;
            let mut gamma = build_normal_form(&game);
            if *reduce {
                gamma = reduce_normal_form(&gamma).game;
            }
            let text = format!(
                "{} receiver strategies (rows) x {} sender strategies (columns); cells are (sender, receiver)\n{}",
                gamma.rows(),
                gamma.cols(),
                render_bimatrix(&gamma, style)
            );
            Ok(CommandResult::ok(text, bimatrix_json(&gamma, style)))
        }
        Command::Sgcm { file, cost, reduce, symbolic } => {
            let game = load_game(file)?;
            let (c, symbolic) = match cost {
                // payoffs are affine in c, so any positive value recovers the symbolic form
                CostArg::Symbol => (rational::one(), true),
                CostArg::Value(c) => (c.clone(), *symbolic),
            };
            let style = Style { symbolic, ..style };
            let gamma = if *reduce { build_reduced_sgcm(&game, &c)?.game } else { build_sgcm_normal_form(&game, &c)? };
            let mut text = format!(
                "{} receiver strategies (rows) x {} sender strategies (columns) at cost {}\n{}",
                gamma.rows(),
                gamma.cols(),
                if symbolic { "c".to_string() } else { rational::show(&c) },
                render_bimatrix(&gamma, style)
            );
            let distinct = reduce_normal_form(&gamma).game.rows();
            if distinct < gamma.rows() {
                text.push_str(&format!("payoff-distinct receiver strategies: {distinct}\n"));
            }
            let mut summary = bimatrix_json(&gamma, style);
            summary["payoff_distinct_rows"] = json!(distinct);
            Ok(CommandResult::ok(text, summary))
        }
        Command::Solve { file, cost, components, index } => solve(cli, style, file, cost.as_ref(), *components, *index),
        Command::Sweep { file, component, cmin, cmax, steps, out, linear } => {
            let game = load_game(file)?;
            let id = find_component(&game, component)?;
            let cfg = SweepConfig {
                grid: if *linear { Grid::Linear } else { Grid::Geometric },
                delta: index_config(cli)?.delta,
                ..SweepConfig::new(id, cmin.clone(), cmax.clone(), *steps)
            };
            let records = cost_sweep(&game, &cfg)?;
            let mut result = write_sweep_csv(&records, out)?;
            result.summary["component"] = json!(format!("C{id}"));
            Ok(result)
        }
        Command::Threshold { file, component, tolerance } => {
            let game = load_game(file)?;
            let id = find_component(&game, component)?;
            let t = survival_threshold(&game, id, tolerance)?;
            let text = match &t.first_failing {
                Some(hi) => format!(
                    "C{id} survives at c = {} and fails at c = {} (bracket width {})\n",
                    rational::show(&t.last_surviving),
                    rational::show(hi),
                    rational::show(t.width.as_ref().unwrap_or(&Rational::zero()))
                ),
                None => format!(
                    "C{id} survives at every cost up to {}, beyond which monitoring is dominated\n",
                    rational::show(&t.last_surviving)
                ),
            };
            let summary = json!({
                "component": format!("C{id}"),
                "last_surviving": rational::show(&t.last_surviving),
                "first_failing": t.first_failing.as_ref().map(rational::show),
                "width": t.width.as_ref().map(rational::show),
                "evaluations": t.evaluations.len(),
            });
            Ok(CommandResult::ok(text, summary))
        }
        Command::Theorem { file, component, epsilon, cmax, steps } => {
            let game = load_game(file)?;
            let id = find_component(&game, component)?;
            let grid = SweepConfig::new(id, rational::zero(), cmax.clone(), *steps);
            let report = verify_theorem_bound(&game, id, epsilon, Some(grid), &index_config(cli)?)?;
            let eps = rational::show(epsilon);
            let mut text = format!("C{id}, epsilon = {eps}, index {}\n", signed(report.index.value));
            let rows = report
                .evidence
                .iter()
                .map(|r| {
                    let within = r.squared_distance < epsilon * epsilon;
                    vec![rational::show(&r.c), r.distance.clone(), if within { "yes" } else { "no" }.to_string()]
                })
                .collect();
            text.push_str(&align(vec!["c".into(), "distance".into(), format!("< {eps}")], rows));
            if let Some(w) = &report.warning {
                text.push_str(&format!("warning: {w}\n"));
            }
            let status = match &report.c_epsilon {
                Some(c) => {
                    text.push_str(&format!("c_eps = {}: every sampled c < c_eps is within {eps}\n", rational::show(c)));
                    0
                }
                None => {
                    text.push_str(&format!("FAIL: the smallest sampled cost is already {eps} or more away\n"));
                    1
                }
            };
            let summary = json!({
                "component": format!("C{id}"),
                "epsilon": eps,
                "c_epsilon": report.c_epsilon.as_ref().map(rational::show),
                "index": report.index.value,
                "warning": report.warning,
                "samples": report.evidence.iter().map(|r| json!({
                    "c": rational::show(&r.c),
                    "squared_distance": rational::show(&r.squared_distance),
                })).collect::<Vec<_>>(),
            });
            Ok(CommandResult { status, stdout: text, stderr: String::new(), summary, csv_path: None })
        }
    }
}

fn method_name(r: &IndexResult) -> String {
    match r.method {
        IndexMethod::Determinant => "determinant".into(),
        IndexMethod::Perturbation => format!(
            "perturbation, agreement {} over {} replications{}",
            rational::show(&r.agreement),
            r.replications,
            if r.indeterminate { ", indeterminate" } else { "" }
        ),
    }
}

fn solve(
    cli: &Cli,
    style: Style,
    file: &Path,
    cost: Option<&Rational>,
    with_components: bool,
    with_index: bool,
) -> Result<CommandResult> {
    let game = load_game(file)?;
    let gamma = match cost {
        Some(c) => build_reduced_sgcm(&game, c)?.game,
        None => build_normal_form(&game),
    };
    let rows = style.row_labels(&gamma);
    let comps = solve_components(&gamma);
    let describe_eq = |e: &MixedEquilibrium| {
        format!(
            "receiver {} | sender {} | payoffs {}",
            show_mix(&rows, &e.row_mix),
            show_mix(&gamma.col_labels, &e.col_mix),
            pair(&e.payoffs)
        )
    };
    let eq_json = |e: &MixedEquilibrium| {
        json!({
            "receiver": mix_json(&rows, &e.row_mix),
            "sender": mix_json(&gamma.col_labels, &e.col_mix),
            "payoffs": [rational::show(&e.payoffs.0), rational::show(&e.payoffs.1)],
        })
    };

    let mut text = String::new();
    let mut summary = json!({ "cost": cost.map(rational::show) });
    if !with_components && !with_index {
        let mut all: Vec<&MixedEquilibrium> = comps.iter().flat_map(|c| &c.extremes).collect();
        all.sort();
        text.push_str(&format!("{} extreme equilibria\n", all.len()));
        for (k, e) in all.iter().enumerate() {
            text.push_str(&format!("E{k}: {}\n", describe_eq(e)));
        }
        summary["extremes"] = all.iter().map(|e| eq_json(e)).collect();
        return Ok(CommandResult::ok(text, summary));
    }

    let indices = if with_index { Some(index_sum_for(&gamma, &comps, &index_config(cli)?)?) } else { None };
    text.push_str(&format!("{} components\n", comps.len()));
    let mut listed = Vec::new();
    for (k, comp) in comps.iter().enumerate() {
        text.push_str(&format!(
            "C{k}: {} extreme equilibria in {} maximal Nash subsets\n",
            comp.extremes.len(),
            comp.subsets.len()
        ));
        for e in &comp.extremes {
            text.push_str(&format!("  {}\n", describe_eq(e)));
        }
        let mut entry =
            json!({ "id": format!("C{k}"), "extremes": comp.extremes.iter().map(eq_json).collect::<Vec<_>>() });
        match component_outcome(&game, &gamma, comp, false)? {
            OutcomeReport::Constant { outcome, payoffs } => {
                let (shown, projected) = match &outcome {
                    InducedOutcome::Plain(mu) => (describe(&game, mu), None),
                    InducedOutcome::Monitored(mu) => {
                        (describe_monitored(&game, mu), Some(describe(&game, &outcome.projected())))
                    }
                };
                text.push_str(&format!("  outcome: {shown}\n"));
                if let Some(p) = &projected {
                    text.push_str(&format!("  projected outcome: {p}\n"));
                }
                entry["outcome"] = json!(shown);
                entry["projected_outcome"] = json!(projected);
                if let Some(p) = &payoffs {
                    text.push_str(&format!("  payoffs: {}\n", pair(p)));
                    entry["payoffs"] = json!([rational::show(&p.0), rational::show(&p.1)]);
                }
            }
            OutcomeReport::NonConstant { .. } => {
                text.push_str("  outcome: not constant on this component\n");
                entry["outcome"] = Value::Null;
            }
        }
        if let Some(report) = &indices {
            let r = &report.indices[k];
            text.push_str(&format!("  index: {} ({})\n", signed(r.value), method_name(r)));
            entry["index"] = json!(r.value);
            entry["index_agreement"] = json!(rational::show(&r.agreement));
            entry["index_indeterminate"] = json!(r.indeterminate);
        }
        listed.push(entry);
    }
    summary["components"] = Value::Array(listed);
    if let Some(report) = &indices {
        text.push_str(&format!("index sum: {}\n", signed(report.sum)));
        summary["index_sum"] = json!(report.sum);
    }
    Ok(CommandResult::ok(text, summary))
}

/// Binary entry point: prints the result and returns the exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = run_command(argv);
    print!("{}", result.stdout);
    eprint!("{}", result.stderr);
    let _ = std::io::stdout().flush();
    result.status
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::tests::beer_quiche;

    const FIXTURE: &str = include_str!("../fixtures/beerquiche.sg");

    #[test]
    fn fixture_parses() {
        let game = parse_game_file(FIXTURE).unwrap();
        assert_eq!(game, beer_quiche());
        assert_eq!(game.prior[0], rational::ratio(9, 10));
        assert_eq!(parse_game_file(&serialize_game(&game)).unwrap(), game);
    }

    #[test]
    fn semantic_errors() {
        let missing = FIXTURE.replace("W Q N 3 0\n", "");
        let err = parse_game_file(&missing).unwrap_err().to_string();
        assert!(err.contains("(W,Q,N)"), "{err}");
        let prior = FIXTURE.replace("types: S:9/10 W:1/10", "types: S:1/2 W:1/2 X:1/2");
        let err = parse_game_file(&prior).unwrap_err().to_string();
        assert!(err.contains("prior sums to 3/2"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let bad = FIXTURE.replace("S B N 3 1", "S B N 3");
        match parse_game_file(&bad) {
            Err(Error::Syntax { line, .. }) => assert_eq!(line, 7),
            other => panic!("{other:?}"),
        }
        let bad = FIXTURE.replace("S B N 3 1", "S B X 3 1");
        assert!(parse_game_file(&bad).unwrap_err().to_string().contains("unknown action `X`"));
        let bad = FIXTURE.replace("S:9/10", "S:9/x");
        assert!(matches!(parse_game_file(&bad), Err(Error::Syntax { line: 2, .. })));
    }

    #[test]
    fn classic_labels() {
        assert_eq!(classic_label("1NF|F"), "CFFN");
        assert_eq!(classic_label("1NF|*"), "C*FN");
        assert_eq!(classic_label("0**|N"), "0N**");
        assert_eq!(classic_label("NF"), "FN");
        assert_eq!(classic_label("x,y"), "x,y");
    }
}
