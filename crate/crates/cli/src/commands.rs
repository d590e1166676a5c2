use std::fmt::Write as _;

use cbr_core::chain::csv::{matrix_csv, resistance_csv, stationary_csv, trajectory_csv};
use cbr_core::chain::{
    build_perturbed, build_unperturbed, resistance_analysis, simulate, simulate_replicas, stationary,
    stochastically_stable_set, DeviationTable, DynamicsConfig, EpsilonSweep, SimulationOptions, SolverOptions,
    StabilityReport, StationaryDistribution,
};
use cbr_core::deviation::ImprovementMode;
use cbr_core::equilibrium::{
    build_deviation_graph, find_equilibria_scan, recurrent_structure, to_dot, ClassKind, DeviationGraph,
    RecurrentStructure, ScanOptions,
};
use cbr_core::rational::{fmt_decimal, fmt_rational, Rational};
use cbr_core::CoalitionalModel;
use num_traits::Zero;

use crate::args::{ChainArgs, Common, Format, NetformArgs, SimulateArgs, StableArgs};
use crate::error::CliError;
use crate::input::Document;

/// A loaded document together with the improvement notion in force.
pub struct Context {
    pub doc: Document,
    pub mode: ImprovementMode,
}

impl Context {
    pub fn new(doc: Document, mode: Option<ImprovementMode>) -> Self {
        match doc {
            Document::Game(g) => Context { doc: Document::Game(g), mode: mode.unwrap_or(ImprovementMode::Strict) },
            Document::Network(g) => {
                let mode = mode.unwrap_or(g.mode());
                Context { doc: Document::Network(g.with_mode(mode)), mode }
            }
        }
    }

    fn model(&self) -> &dyn CoalitionalModel {
        self.doc.model()
    }

    fn label(&self, s: usize) -> String {
        self.model().state_label(s)
    }

    fn labels(&self, states: &[usize]) -> String {
        states.iter().map(|&s| self.label(s)).collect::<Vec<_>>().join(" ")
    }

    fn nouns(&self, k: usize) -> String {
        format!("{k} {}{}", self.doc.noun(), if k == 1 { "" } else { "s" })
    }

    fn config(&self) -> Result<DynamicsConfig, CliError> {
        Ok(DynamicsConfig::uniform(self.model().num_players(), self.mode)?)
    }

    fn equilibrium_title(&self) -> &'static str {
        match (&self.doc, self.mode) {
            (Document::Network(_), _) => "strongly stable networks",
            (_, ImprovementMode::Strict) => "strong Nash equilibria (SNE)",
            (_, ImprovementMode::Weak) => "strict strong Nash equilibria (SSNE)",
        }
    }

    fn header(&self) -> String {
        let mut out = String::new();
        match &self.doc {
            Document::Game(g) => {
                let counts: Vec<String> = g.action_counts().iter().map(ToString::to_string).collect();
                let _ = writeln!(
                    out,
                    "game: {} players, {} actions, {}",
                    g.num_players(),
                    counts.join(" x "),
                    self.nouns(g.num_profiles())
                );
            }
            Document::Network(g) => {
                let _ = writeln!(out, "network game: {} nodes, {}", g.nodes(), self.nouns(g.num_networks()));
            }
        }
        let meaning = match self.mode {
            ImprovementMode::Strict => "every member of the deviating coalition strictly gains",
            ImprovementMode::Weak => "no member of the deviating coalition loses and at least one strictly gains",
        };
        let _ = writeln!(out, "mode: {} ({meaning})", self.mode);
        out
    }
}

fn reject_format(common: &Common, allowed: &[Format], command: &str) -> Result<(), CliError> {
    if allowed.contains(&common.format) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("`{command}` does not support --format {:?}", common.format).to_lowercase()))
    }
}

fn edge_line(ctx: &Context, graph: &DeviationGraph, v: usize, w: usize) -> String {
    let by: Vec<String> = graph.labels(v, w).unwrap_or(&[]).iter().map(ToString::to_string).collect();
    format!("{} -> {} by {}", ctx.label(v), ctx.label(w), by.join(" "))
}

fn write_structure(out: &mut String, ctx: &Context, graph: &DeviationGraph, rs: &RecurrentStructure) {
    let _ = writeln!(out, "recurrent classes: {}", rs.classes.len());
    for (k, class) in rs.classes.iter().enumerate() {
        match class.kind {
            ClassKind::Equilibrium => {
                let _ = writeln!(out, "  class {}: equilibrium {}", k + 1, ctx.label(class.states[0]));
            }
            ClassKind::ClosedCycle => {
                let _ = writeln!(out, "  class {}: closed cycle of {}", k + 1, ctx.nouns(class.states.len()));
                for &v in &class.states {
                    for &w in &class.states {
                        if graph.has_edge(v, w) {
                            let _ = writeln!(out, "    {}", edge_line(ctx, graph, v, w));
                        }
                    }
                }
            }
        }
    }
    let _ = writeln!(out, "transient {}s: {}", ctx.doc.noun(), rs.transient.len());
    if !rs.transient.is_empty() {
        let _ = writeln!(out, "  {}", ctx.labels(&rs.transient));
    }
}

fn scan(ctx: &Context) -> Result<Vec<usize>, CliError> {
    Ok(find_equilibria_scan(ctx.model(), ctx.mode, ScanOptions::default())?)
}

/// The deviation graph and its recurrent structure, or `None` with a note when
/// the graph is too large to build. Equilibria never need the graph.
fn optional_structure(ctx: &Context) -> Result<Result<(DeviationGraph, RecurrentStructure), String>, CliError> {
    match build_deviation_graph(ctx.model(), ctx.mode) {
        Ok(graph) => {
            let rs = recurrent_structure(&graph);
            Ok(Ok((graph, rs)))
        }
        Err(e @ cbr_core::Error::CapExceeded { .. }) => Ok(Err(format!("recurrent classes: not computed ({e})"))),
        Err(e) => Err(e.into()),
    }
}

fn write_optional_structure(out: &mut String, ctx: &Context) -> Result<(), CliError> {
    match optional_structure(ctx)? {
        Ok((graph, rs)) => write_structure(out, ctx, &graph, &rs),
        Err(note) => {
            let _ = writeln!(out, "{note}");
        }
    }
    Ok(())
}

fn write_equilibria(out: &mut String, ctx: &Context, eq: Vec<usize>) {
    let _ = writeln!(out, "{}: {}", ctx.equilibrium_title(), eq.len());
    for s in eq {
        let _ = writeln!(out, "  {}", ctx.label(s));
    }
}

pub fn equilibria(ctx: &Context, common: &Common) -> Result<String, CliError> {
    reject_format(common, &[Format::Report], "equilibria")?;
    let mut out = ctx.header();
    out.push('\n');
    write_equilibria(&mut out, ctx, scan(ctx)?);
    out.push('\n');
    write_optional_structure(&mut out, ctx)?;
    Ok(out)
}

pub fn graph(ctx: &Context, common: &Common) -> Result<String, CliError> {
    reject_format(common, &[Format::Report, Format::Dot], "graph")?;
    let graph = build_deviation_graph(ctx.model(), ctx.mode)?;
    if common.format == Format::Dot {
        return Ok(to_dot(&graph, ctx.model()));
    }
    let mut out = ctx.header();
    let _ = writeln!(out, "\nimproving deviations: {} edges", graph.edge_count());
    for v in 0..graph.num_nodes() {
        for w in 0..graph.num_nodes() {
            if graph.has_edge(v, w) {
                let _ = writeln!(out, "  {}", edge_line(ctx, &graph, v, w));
            }
        }
    }
    Ok(out)
}

fn dynamics_line(config: &DynamicsConfig) -> String {
    format!(
        "dynamics: coalitions uniform over {}, uniform choice among improving and among erroneous moves, f = 1",
        config.coalition_weights.len()
    )
}

pub fn chain(ctx: &Context, args: &ChainArgs) -> Result<String, CliError> {
    reject_format(&args.common, &[Format::Report, Format::Csv], "chain")?;
    let config = ctx.config()?;
    let matrix = if args.eps.is_zero() {
        build_unperturbed(ctx.model(), &config)?
    } else {
        build_perturbed(ctx.model(), &config, &args.eps)?
    };
    if args.common.format == Format::Csv {
        return Ok(matrix_csv(ctx.model(), &matrix.rows));
    }
    let bound = DeviationTable::build(ctx.model(), &config)?.epsilon_bound();
    let mut out = ctx.header();
    let _ = writeln!(out, "{}", dynamics_line(&config));
    if args.eps.is_zero() {
        let _ = writeln!(out, "epsilon: 0 (unperturbed chain; admissible rates are (0, {}))", fmt_rational(&bound));
    } else {
        let _ = writeln!(out, "epsilon: {} (admissible range (0, {}))", fmt_rational(&args.eps), fmt_rational(&bound));
    }
    let bad = matrix.non_stochastic_rows();
    let _ = writeln!(
        out,
        "\ntransition matrix: {} states, {}",
        matrix.num_states(),
        if bad.is_empty() { "every row sums to exactly 1".to_string() } else { format!("rows {bad:?} do not sum to 1") }
    );
    for (a, row) in matrix.rows.iter().enumerate() {
        let entries: Vec<String> = row
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(b, p)| format!("{} {}", ctx.label(b), fmt_rational(p)))
            .collect();
        let _ = writeln!(out, "  {}: {}", ctx.label(a), entries.join(", "));
    }
    Ok(out)
}

fn class_summary(ctx: &Context, rs: &RecurrentStructure) -> String {
    let eq = rs.classes.iter().filter(|c| c.kind == ClassKind::Equilibrium).count();
    let cyc = rs.classes.len() - eq;
    let eq_word = match ctx.doc {
        Document::Game(_) => ("equilibrium", "equilibria"),
        Document::Network(_) => ("strongly stable network", "strongly stable networks"),
    };
    match (eq, cyc) {
        (1, 0) => eq_word.0.to_string(),
        (0, 1) => "closed cycle".to_string(),
        _ => {
            let mut parts = Vec::new();
            if eq > 0 {
                parts.push(format!("{eq} {}", if eq == 1 { eq_word.0 } else { eq_word.1 }));
            }
            if cyc > 0 {
                parts.push(format!("{cyc} closed cycle{}", if cyc == 1 { "" } else { "s" }));
            }
            parts.join(", ")
        }
    }
}

fn decimal(d: &StationaryDistribution, s: usize) -> String {
    match &d.exact {
        Some(e) => fmt_decimal(&e[s], 12),
        None => format!("{:.12}", d.approx[s]),
    }
}

fn write_stability(out: &mut String, ctx: &Context, report: &StabilityReport) {
    let n = ctx.model().num_states();
    let width = (0..n).map(|s| ctx.label(s).chars().count()).max().unwrap_or(0).max(ctx.doc.noun().len());
    let _ = writeln!(out, "stationary distributions (decimals rounded to 12 digits for display only)");
    let mut head = format!("  {:<width$}", ctx.doc.noun());
    for d in &report.distributions {
        let _ = write!(head, "  {:<14}", format!("eps={}", fmt_rational(&d.epsilon)));
    }
    let _ = writeln!(out, "{}", head.trim_end());
    for s in 0..n {
        let mut line = format!("  {:<width$}", ctx.label(s));
        for d in &report.distributions {
            let _ = write!(line, "  {:<14}", decimal(d, s));
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    if let Some(last) = report.distributions.last() {
        match &last.exact {
            Some(exact) => {
                let _ = writeln!(out, "exact stationary distribution at eps={}:", fmt_rational(&last.epsilon));
                for (s, m) in exact.iter().enumerate() {
                    let _ = writeln!(out, "  {} {}", ctx.label(s), fmt_rational(m));
                }
            }
            None => {
                let _ = writeln!(out, "stationary distributions solved in floating point (max residual {:.1e})", last.residual);
            }
        }
    }
    let transient: Vec<String> = report
        .distributions
        .iter()
        .zip(report.transient_mass())
        .map(|(d, m)| format!("eps={}: {m:.3e}", fmt_rational(&d.epsilon)))
        .collect();
    let _ = writeln!(out, "mass outside the recurrent classes: {}", transient.join(", "));
    let none = |v: &[usize]| if v.is_empty() { "none".to_string() } else { ctx.labels(v) };
    let _ = writeln!(out, "sweep certificate (mass persists as eps shrinks): {}", none(&report.numeric));
    let _ = writeln!(out, "structural certificate (recurrent classes of the unperturbed chain): {}", none(&report.structural));
    let transient_states: Vec<usize> = (0..n).filter(|s| report.structural.binary_search(s).is_err()).collect();
    let _ = writeln!(out, "transient {}s: {}", ctx.doc.noun(), none(&transient_states));
}

fn stability(ctx: &Context, rates: &[Rational]) -> Result<StabilityReport, CliError> {
    let sweep = EpsilonSweep::new(rates.to_vec());
    Ok(stochastically_stable_set(ctx.model(), &ctx.config()?, &sweep, &SolverOptions::default())?)
}

fn stable_line(ctx: &Context, report: &StabilityReport) -> Result<String, CliError> {
    let set = report
        .certified()
        .map_err(|e| CliError::Validation(format!("{e}; refusing to certify a stable set")))?;
    Ok(format!("STABLE SET: {} ({})", ctx.nouns(set.len()), class_summary(ctx, &report.classes)))
}

pub fn stable(ctx: &Context, args: &StableArgs) -> Result<String, CliError> {
    reject_format(&args.common, &[Format::Report, Format::Csv], "stable")?;
    let config = ctx.config()?;
    if args.common.format == Format::Csv {
        if args.resistance {
            return Ok(resistance_csv(ctx.model(), &resistance_analysis(ctx.model(), &config)?));
        }
        let report = stability(ctx, &args.eps.0)?;
        report.certified()?;
        return Ok(stationary_csv(ctx.model(), &report.distributions));
    }
    let report = stability(ctx, &args.eps.0)?;
    let mut out = ctx.header();
    let _ = writeln!(out, "{}", dynamics_line(&config));
    let rates: Vec<String> = args.eps.0.iter().map(fmt_rational).collect();
    let _ = writeln!(out, "epsilon sweep: {}\n", rates.join(" "));
    write_stability(&mut out, ctx, &report);
    if args.resistance {
        out.push('\n');
        write_resistance(&mut out, ctx, &config)?;
    }
    let _ = writeln!(out, "\n{}", stable_line(ctx, &report)?);
    Ok(out)
}

fn write_resistance(out: &mut String, ctx: &Context, config: &DynamicsConfig) -> Result<(), CliError> {
    let analysis = resistance_analysis(ctx.model(), config)?;
    let j = analysis.num_classes();
    let _ = writeln!(out, "recurrent classes J = {j}; resistance between classes (minimum mutations):");
    for (a, row) in analysis.class_resistance.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|r| r.map_or("-".into(), |r| r.to_string())).collect();
        let _ = writeln!(out, "  class {}: {}", a + 1, cells.join(" "));
    }
    for (k, (class, p)) in analysis.classes.classes.iter().zip(&analysis.stochastic_potential).enumerate() {
        let p = p.map_or("n/a".into(), |p| p.to_string());
        let _ = writeln!(out, "  stochastic potential of class {} {{{}}}: {p}", k + 1, ctx.labels(&class.states));
    }
    if analysis.discrepancies.is_empty() {
        let _ = writeln!(out, "every class has potential J-1 = {}", j.saturating_sub(1));
    } else {
        for d in &analysis.discrepancies {
            let _ = writeln!(out, "  discrepancy: {d}");
        }
    }
    Ok(())
}

fn resolve_start(ctx: &Context, start: Option<&str>) -> Result<usize, CliError> {
    let Some(text) = start else { return Ok(0) };
    let n = ctx.model().num_states();
    if let Ok(k) = text.parse::<usize>() {
        return if k < n { Ok(k) } else { Err(CliError::Usage(format!("start state {k} out of range (0..{n})"))) };
    }
    let wanted: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    (0..n)
        .find(|&s| ctx.label(s) == wanted)
        .ok_or_else(|| CliError::Usage(format!("unknown start state `{text}`")))
}

pub fn simulate_cmd(ctx: &Context, args: &SimulateArgs) -> Result<String, CliError> {
    reject_format(&args.common, &[Format::Report, Format::Csv], "simulate")?;
    if args.eps.is_zero() {
        return Err(CliError::Usage("simulate needs a positive --eps".into()));
    }
    let config = ctx.config()?;
    let start = resolve_start(ctx, args.start.as_deref())?;
    let csv = args.common.format == Format::Csv;
    if csv && args.replicas != 1 {
        return Err(CliError::Usage("CSV trajectories need --replicas 1".into()));
    }
    let options = SimulationOptions {
        epsilon: args.eps.clone(),
        horizon: args.horizon,
        seed: args.seed,
        start,
        record_log: csv,
    };
    let run = if args.replicas == 1 {
        simulate(ctx.model(), &config, &options)?
    } else {
        simulate_replicas(ctx.model(), &config, &options, args.replicas)?
    };
    if csv {
        return Ok(trajectory_csv(ctx.model(), &run));
    }
    let mut out = ctx.header();
    let _ = writeln!(out, "{}", dynamics_line(&config));
    let _ = writeln!(
        out,
        "epsilon: {}, horizon: {}, seed: {}, start: {}, replicas: {}\n",
        fmt_rational(&args.eps),
        args.horizon,
        args.seed,
        ctx.label(start),
        args.replicas
    );
    let exact = build_perturbed(ctx.model(), &config, &args.eps).and_then(|p| stationary(&p, &SolverOptions::default()));
    let freq = run.frequencies();
    let _ = writeln!(out, "occupation frequency over {} steps vs stationary distribution", run.steps);
    for s in 0..ctx.model().num_states() {
        let mu = exact.as_ref().map_or("n/a".into(), |d| decimal(d, s));
        let _ = writeln!(out, "  {} visits {} frequency {:.6} stationary {mu}", ctx.label(s), run.visits[s], freq[s]);
    }
    match &exact {
        Ok(d) => {
            let _ = writeln!(out, "total variation distance: {:.6}", run.total_variation(&d.approx));
        }
        Err(e) => {
            let _ = writeln!(out, "stationary distribution unavailable: {e}");
        }
    }
    Ok(out)
}

pub fn netform(ctx: &Context, args: &NetformArgs) -> Result<String, CliError> {
    let Document::Network(game) = &ctx.doc else {
        return Err(CliError::Usage("`netform` needs a network file (header key `nodes`)".into()));
    };
    reject_format(&args.common, &[Format::Report, Format::Dot], "netform")?;
    if args.common.format == Format::Dot {
        return Ok(to_dot(&build_deviation_graph(game, ctx.mode)?, game));
    }
    let mut out = ctx.header();
    out.push('\n');
    let eq = scan(ctx)?;
    let _ = writeln!(out, "{}: {}", ctx.equilibrium_title(), eq.len());
    for s in eq {
        let net = game.network(s);
        let _ = writeln!(out, "  {net}");
        let edges: Vec<String> = net.edge_list().lines().map(str::to_string).collect();
        let _ = writeln!(out, "    edge list: {}", if edges.is_empty() { "(none)".into() } else { edges.join("; ") });
        let _ = writeln!(out, "    adjacency matrix:");
        for row in net.adjacency_matrix().lines() {
            let _ = writeln!(out, "      {row}");
        }
    }
    out.push('\n');
    write_optional_structure(&mut out, ctx)?;
    if let Some(rates) = &args.eps {
        let rates = &rates.0;
        let report = stability(ctx, rates)?;
        let _ = writeln!(out, "\n{}", dynamics_line(&ctx.config()?));
        let shown: Vec<String> = rates.iter().map(fmt_rational).collect();
        let _ = writeln!(out, "epsilon sweep: {}\n", shown.join(" "));
        write_stability(&mut out, ctx, &report);
        let _ = writeln!(out, "\n{}", stable_line(ctx, &report)?);
    }
    Ok(out)
}
