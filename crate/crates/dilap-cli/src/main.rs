//! Command-line surface for the dilap library: parse graph and network
//! files, dispatch the analyses, and emit deterministic JSON or CSV reports
//! with exit codes suitable for scripted verification.
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical non-convergence,
//! 4 verification mismatch. Reports go to standard output, diagnostics to
//! standard error, and two runs on the same input are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use dilap::flows::{circulation_space, cut_capacity, flow_space, flow_value, is_feasible, parse_flow_values, CapacityNetwork};
use dilap::generate::{derived_seed, random_dag, random_digraph, rng_for, DigraphConfig};
use dilap::numerics::{self, exact, multiset_match_distance};
use dilap::structure::{
    acyclic_labeling, classify, maximal_chains, spectrum_decomposition_check,
    verify_source_sink_theorem, DecompositionReport, Labeling,
};
use dilap::{assemble, Complex64, OperatorKind, Orientation, VertexSubset, WeightedDigraph};

#[derive(Parser)]
#[command(name = "dilap", version, about = "In/out Laplacians of weighted multidigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Override the default tolerance of the selected check.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Use exact rational arithmetic where the command supports it.
    #[arg(long, global = true)]
    exact: bool,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for randomized verification.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble an operator matrix in the orthonormal basis.
    Matrices {
        /// One of B+, B-, B, D+, D-, D, A+, A-, A, L+, L-, L.
        #[arg(long, value_parser = parse_operator)]
        operator: OperatorKind,
        file: PathBuf,
    },
    /// Eigenvalues and zero multiplicities of a vertex-indexed operator.
    Spectrum {
        #[arg(long, value_parser = parse_operator)]
        operator: OperatorKind,
        file: PathBuf,
    },
    /// Strongly connected components, their classes, and maximal chains.
    Structure {
        /// Stop enumerating maximal chains beyond this many.
        #[arg(long, default_value_t = 10_000)]
        chain_limit: usize,
        file: PathBuf,
    },
    /// Check a structural statement on a file or a seeded random corpus.
    Verify {
        #[command(subcommand)]
        check: VerifyCheck,
    },
    /// Orthonormal basis of the circulation space (kernel of the divergence).
    Circulations { file: PathBuf },
    /// Orthonormal basis of the flow space of a capacity network.
    Flows {
        #[arg(long)]
        network: PathBuf,
    },
    /// Cut capacity of a vertex set, by arc summation and by quadratic form.
    Cut {
        /// Comma-separated vertex ids forming the cut set.
        #[arg(long)]
        members: String,
        network: PathBuf,
    },
    /// Value of a flow at a designated source, by two routes.
    Value {
        /// Flow assignment file ({"values": [{"id": ..., "value": ...}]}).
        #[arg(long)]
        flow: PathBuf,
        /// Designated source vertex the value is measured at.
        #[arg(long = "at")]
        at: String,
        network: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCheck {
    /// Zero multiplicities of the one-sided Laplacians count terminal components.
    Theorem {
        file: Option<PathBuf>,
        /// Check this many seeded random digraphs instead of a file.
        #[arg(long, conflicts_with = "file")]
        random: Option<u64>,
    },
    /// Spectra decompose over compressed terminal blocks.
    Decomposition {
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        random: Option<u64>,
    },
    /// Acyclic spectra equal the relative weight multisets.
    Acyclic {
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        random: Option<u64>,
    },
}

fn parse_operator(s: &str) -> Result<OperatorKind, String> {
    s.parse().map_err(|e: dilap::Error| e.to_string())
}

/// Terminal outcome of a command that produced a report.
struct Output {
    report: Report,
    exit: u8,
    diagnostic: Option<String>,
}

impl Output {
    fn ok(report: Report) -> Self {
        Output { report, exit: 0, diagnostic: None }
    }

    fn mismatch(report: Report, diagnostic: String) -> Self {
        Output { report, exit: 4, diagnostic: Some(diagnostic) }
    }
}

/// Failure before a report could be produced.
struct Failure {
    exit: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure { exit: 2, message: message.into() }
    }
}

impl From<dilap::Error> for Failure {
    fn from(e: dilap::Error) -> Self {
        let exit = match e {
            dilap::Error::NonConvergence { .. } => 3,
            _ => 2,
        };
        Failure { exit, message: e.to_string() }
    }
}

#[derive(Serialize)]
struct Report {
    command: String,
    input_digest: String,
    payload: Value,
    tolerances: Value,
    warnings: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(output) => {
            print!("{}", render(&output.report, cli.format));
            if let Some(diagnostic) = &output.diagnostic {
                eprintln!("{diagnostic}");
            }
            ExitCode::from(output.exit)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.exit)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Matrices { operator, file } => cmd_matrices(cli, *operator, file),
        Command::Spectrum { operator, file } => cmd_spectrum(cli, *operator, file),
        Command::Structure { chain_limit, file } => cmd_structure(cli, *chain_limit, file),
        Command::Verify { check } => match check {
            VerifyCheck::Theorem { file, random } => cmd_verify_theorem(cli, file, *random),
            VerifyCheck::Decomposition { file, random } => {
                cmd_verify_decomposition(cli, file, *random)
            }
            VerifyCheck::Acyclic { file, random } => cmd_verify_acyclic(cli, file, *random),
        },
        Command::Circulations { file } => cmd_circulations(cli, file),
        Command::Flows { network } => cmd_flows(cli, network),
        Command::Cut { members, network } => cmd_cut(cli, members, network),
        Command::Value { flow, at, network } => cmd_value(cli, flow, at, network),
    }
}

fn read_input(path: &Path) -> Result<(String, String), Failure> {
    let bytes = fs::read(path)
        .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))?;
    let digest = hex_digest(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure::validation(format!("{} is not UTF-8", path.display())))?;
    Ok((text, digest))
}

fn load_graph(path: &Path) -> Result<(WeightedDigraph, String), Failure> {
    let (text, digest) = read_input(path)?;
    Ok((WeightedDigraph::parse(&text)?, digest))
}

fn load_network(path: &Path) -> Result<(CapacityNetwork, String), Failure> {
    let (text, digest) = read_input(path)?;
    Ok((CapacityNetwork::parse(&text)?, digest))
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(64);
    for byte in Sha256::digest(bytes) {
        write!(out, "{byte:02x}").expect("hex digits format");
    }
    out
}

fn reject_exact(cli: &Cli, command: &str) -> Result<(), Failure> {
    if cli.exact {
        return Err(Failure::validation(format!("--exact is not available for {command}")));
    }
    Ok(())
}

// Reports print floats on a 1e-12 grid with negative zero normalized, so
// eigenvalue noise below the solver's own accuracy never churns goldens.
fn round_display(x: f64) -> f64 {
    let rounded = if x.abs() < 1e4 { (x / 1e-12).round() * 1e-12 } else { x };
    if rounded == 0.0 { 0.0 } else { rounded }
}

fn pairs(values: &[Complex64]) -> Vec<[f64; 2]> {
    let mut sorted = values.to_vec();
    numerics::sort_eigenvalues(&mut sorted);
    sorted.iter().map(|z| [round_display(z.re), round_display(z.im)]).collect()
}

fn vector_pairs(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [round_display(z.re), round_display(z.im)]).collect()
}

fn cmd_matrices(cli: &Cli, operator: OperatorKind, file: &Path) -> Result<Output, Failure> {
    reject_exact(cli, "matrices")?;
    let (g, digest) = load_graph(file)?;
    let m = assemble(&g, operator);
    Ok(Output::ok(Report {
        command: "matrices".into(),
        input_digest: digest,
        payload: m.export_json(),
        tolerances: json!({}),
        warnings: Vec::new(),
    }))
}

fn cmd_spectrum(cli: &Cli, operator: OperatorKind, file: &Path) -> Result<Output, Failure> {
    let (g, digest) = load_graph(file)?;
    if operator.is_first_order() {
        return Err(Failure::validation(format!(
            "{operator} is arc-by-vertex; spectra need a vertex-indexed operator"
        )));
    }
    let m = assemble(&g, operator);
    let spectral = numerics::spectral_report(m.entries(), cli.tol)?;
    let mut payload = json!({
        "operator": operator.as_str(),
        "order": g.order(),
        "eigenvalues": pairs(&spectral.eigenvalues),
        "zero_multiplicity_algebraic": spectral.zero_multiplicity_algebraic,
        "zero_multiplicity_geometric": spectral.zero_multiplicity_geometric,
        "tolerance_sensitive": spectral.tolerance_sensitive,
    });
    if cli.exact {
        let exact_mult = exact::zero_multiplicity(&g, operator)?;
        payload["exact_zero_multiplicity"] = json!(exact_mult);
    }
    Ok(Output::ok(Report {
        command: "spectrum".into(),
        input_digest: digest,
        payload,
        tolerances: json!({ "zero_threshold": spectral.threshold }),
        warnings: Vec::new(),
    }))
}

fn cmd_structure(cli: &Cli, chain_limit: usize, file: &Path) -> Result<Output, Failure> {
    reject_exact(cli, "structure")?;
    let (g, digest) = load_graph(file)?;
    let s = classify(&g);
    let chains = maximal_chains(&g, chain_limit);
    let payload = json!({
        "scc_count": s.components.len(),
        "components": s.components,
        "classes": s.classes.iter().map(|c| c.as_str()).collect::<Vec<_>>(),
        "condensation_edges": s.condensation_edges,
        "source_count": s.source_count,
        "sink_count": s.sink_count,
        "stream": s.stream_vertices,
        "strongly_connected": s.strongly_connected,
        "d_connected": s.d_connected,
        "acyclic": s.acyclic,
        "chains": chains.chains,
        "chains_truncated": chains.truncated,
        "chain_limit": chains.limit,
    });
    Ok(Output::ok(Report {
        command: "structure".into(),
        input_digest: digest,
        payload,
        tolerances: json!({}),
        warnings: Vec::new(),
    }))
}

fn random_corpus_digest(check: &str, seed: u64, count: u64) -> String {
    hex_digest(format!("random-{check}:{seed}:{count}").as_bytes())
}

fn theorem_payload(g: &WeightedDigraph, cli: &Cli) -> Result<(Value, bool), Failure> {
    let t = verify_source_sink_theorem(g, cli.tol)?;
    let mut payload = json!({
        "sources": t.sources,
        "sinks": t.sinks,
        "mult0_Lplus": t.mult0_in_algebraic,
        "mult0_Lminus": t.mult0_out_algebraic,
        "mult0_Lplus_geometric": t.mult0_in_geometric,
        "mult0_Lminus_geometric": t.mult0_out_geometric,
        "agree": t.agree,
        "one_directed_component": t.one_directed_component,
        "zero_simple_in_both": t.zero_simple_in_both,
        "corollary_agrees": t.corollary_agrees,
    });
    let mut ok = t.agree && t.corollary_agrees;
    if cli.exact {
        let exact_in = exact::zero_multiplicity(g, OperatorKind::LPlus)?;
        let exact_out = exact::zero_multiplicity(g, OperatorKind::LMinus)?;
        payload["exact_mult0_Lplus"] = json!(exact_in);
        payload["exact_mult0_Lminus"] = json!(exact_out);
        ok = ok && exact_in == t.sources && exact_out == t.sinks;
    }
    Ok((payload, ok))
}

fn cmd_verify_theorem(
    cli: &Cli,
    file: &Option<PathBuf>,
    random: Option<u64>,
) -> Result<Output, Failure> {
    match (file, random) {
        (Some(path), None) => {
            let (g, digest) = load_graph(path)?;
            let (payload, ok) = theorem_payload(&g, cli)?;
            let report = Report {
                command: "verify theorem".into(),
                input_digest: digest,
                payload,
                tolerances: tol_object(cli),
                warnings: Vec::new(),
            };
            Ok(if ok {
                Output::ok(report)
            } else {
                Output::mismatch(report, "theorem check failed".into())
            })
        }
        (None, Some(count)) => {
            let config = DigraphConfig::default();
            let mut failures = Vec::new();
            for i in 0..count {
                let g = random_digraph(&mut rng_for(derived_seed(cli.seed, i)), &config);
                let (_, ok) = theorem_payload(&g, cli)?;
                if !ok {
                    failures.push(i);
                }
            }
            random_verdict(cli, "theorem", count, failures)
        }
        _ => Err(Failure::validation("verify theorem needs a file or --random N")),
    }
}

fn random_verdict(
    cli: &Cli,
    check: &str,
    count: u64,
    failures: Vec<u64>,
) -> Result<Output, Failure> {
    let ok = failures.is_empty();
    let report = Report {
        command: format!("verify {check}"),
        input_digest: random_corpus_digest(check, cli.seed, count),
        payload: json!({
            "graphs": count,
            "seed": cli.seed,
            "failures": failures,
            "agree": ok,
        }),
        tolerances: tol_object(cli),
        warnings: Vec::new(),
    };
    Ok(if ok {
        Output::ok(report)
    } else {
        Output::mismatch(report, format!("{check} check failed on seeded graphs"))
    })
}

fn tol_object(cli: &Cli) -> Value {
    match cli.tol {
        Some(t) => json!({ "tolerance": t }),
        None => json!({ "tolerance": "default" }),
    }
}

fn decomposition_value(r: &DecompositionReport) -> Value {
    json!({
        "operator": r.operator.as_str(),
        "matches": r.matches,
        "distance": r.distance,
        "tolerance": r.tolerance,
        "full_spectrum": pairs(&r.full_spectrum),
        "union_spectrum": pairs(&r.union_spectrum),
        "blocks": r.blocks.iter().map(|b| json!({
            "members": b.members,
            "terminal": b.terminal,
            "spectrum": pairs(&b.spectrum),
        })).collect::<Vec<_>>(),
    })
}

fn cmd_verify_decomposition(
    cli: &Cli,
    file: &Option<PathBuf>,
    random: Option<u64>,
) -> Result<Output, Failure> {
    reject_exact(cli, "verify decomposition")?;
    match (file, random) {
        (Some(path), None) => {
            let (g, digest) = load_graph(path)?;
            let r_in = spectrum_decomposition_check(&g, Orientation::In)?;
            let r_out = spectrum_decomposition_check(&g, Orientation::Out)?;
            let ok = r_in.matches && r_out.matches;
            let report = Report {
                command: "verify decomposition".into(),
                input_digest: digest,
                payload: json!({
                    "in": decomposition_value(&r_in),
                    "out": decomposition_value(&r_out),
                    "agree": ok,
                }),
                tolerances: json!({ "in": r_in.tolerance, "out": r_out.tolerance }),
                warnings: Vec::new(),
            };
            Ok(if ok {
                Output::ok(report)
            } else {
                Output::mismatch(report, "decomposition check failed".into())
            })
        }
        (None, Some(count)) => {
            let config = DigraphConfig::default();
            let mut failures = Vec::new();
            for i in 0..count {
                let g = random_digraph(&mut rng_for(derived_seed(cli.seed, i)), &config);
                let r_in = spectrum_decomposition_check(&g, Orientation::In)?;
                let r_out = spectrum_decomposition_check(&g, Orientation::Out)?;
                if !(r_in.matches && r_out.matches) {
                    failures.push(i);
                }
            }
            random_verdict(cli, "decomposition", count, failures)
        }
        _ => Err(Failure::validation("verify decomposition needs a file or --random N")),
    }
}

/// Sorted relative weights, the acyclic spectrum according to the labeling
/// proposition, as floats and display values.
fn relative_weights(g: &WeightedDigraph, orientation: Orientation) -> Vec<f64> {
    let mut weights: Vec<f64> = g
        .vertices()
        .iter()
        .map(|v| g.relative_weight(&v.id, orientation).expect("vertex exists"))
        .collect();
    weights.sort_by(f64::total_cmp);
    weights
}

fn acyclic_side(
    g: &WeightedDigraph,
    orientation: Orientation,
    exact_mode: bool,
) -> Result<(Value, f64), Failure> {
    let kind = match orientation {
        Orientation::In => OperatorKind::LPlus,
        _ => OperatorKind::LMinus,
    };
    let spectrum = numerics::eigenvalues(assemble(g, kind).entries())?;
    let golden = relative_weights(g, orientation);
    let golden_c: Vec<Complex64> = golden.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let distance = multiset_match_distance(&spectrum, &golden_c);
    let mut side = json!({
        "operator": kind.as_str(),
        "spectrum": pairs(&spectrum),
        "relative_weights": golden.iter().map(|&x| round_display(x)).collect::<Vec<_>>(),
        "distance": distance,
    });
    if exact_mode {
        let mut exact_spectrum = exact::acyclic_spectrum(g, orientation)?;
        exact_spectrum.sort();
        side["exact_spectrum"] =
            json!(exact_spectrum.iter().map(|r| r.to_string()).collect::<Vec<_>>());
    }
    Ok((side, distance))
}

fn cmd_verify_acyclic(
    cli: &Cli,
    file: &Option<PathBuf>,
    random: Option<u64>,
) -> Result<Output, Failure> {
    let tol = cli.tol.unwrap_or(1e-9);
    match (file, random) {
        (Some(path), None) => {
            let (g, digest) = load_graph(path)?;
            match acyclic_labeling(&g) {
                Labeling::Cycle(cycle) => {
                    let report = Report {
                        command: "verify acyclic".into(),
                        input_digest: digest,
                        payload: json!({ "acyclic": false, "cycle": cycle.clone() }),
                        tolerances: json!({ "spectrum": tol }),
                        warnings: Vec::new(),
                    };
                    Ok(Output {
                        report,
                        exit: 2,
                        diagnostic: Some(format!(
                            "graph is not acyclic: cycle through {}",
                            cycle.join(" -> ")
                        )),
                    })
                }
                Labeling::Monotone(order) => {
                    let (side_in, d_in) = acyclic_side(&g, Orientation::In, cli.exact)?;
                    let (side_out, d_out) = acyclic_side(&g, Orientation::Out, cli.exact)?;
                    let ok = d_in <= tol && d_out <= tol;
                    let report = Report {
                        command: "verify acyclic".into(),
                        input_digest: digest,
                        payload: json!({
                            "acyclic": true,
                            "labeling": order,
                            "in": side_in,
                            "out": side_out,
                            "matches": ok,
                        }),
                        tolerances: json!({ "spectrum": tol }),
                        warnings: Vec::new(),
                    };
                    Ok(if ok {
                        Output::ok(report)
                    } else {
                        Output::mismatch(report, "acyclic spectrum check failed".into())
                    })
                }
            }
        }
        (None, Some(count)) => {
            let mut failures = Vec::new();
            for i in 0..count {
                let g = random_dag(&mut rng_for(derived_seed(cli.seed, i)), 10);
                let (_, d_in) = acyclic_side(&g, Orientation::In, cli.exact)?;
                let (_, d_out) = acyclic_side(&g, Orientation::Out, cli.exact)?;
                if d_in > tol || d_out > tol {
                    failures.push(i);
                }
            }
            random_verdict(cli, "acyclic", count, failures)
        }
        _ => Err(Failure::validation("verify acyclic needs a file or --random N")),
    }
}

fn basis_payload(arc_ids: Vec<String>, basis: &[dilap::ArcFunction]) -> Value {
    json!({
        "arcs": arc_ids,
        "dimension": basis.len(),
        "basis": basis.iter().map(|eta| vector_pairs(eta.values())).collect::<Vec<_>>(),
    })
}

fn cmd_circulations(cli: &Cli, file: &Path) -> Result<Output, Failure> {
    reject_exact(cli, "circulations")?;
    let (g, digest) = load_graph(file)?;
    let basis = circulation_space(&g)?;
    Ok(Output::ok(Report {
        command: "circulations".into(),
        input_digest: digest,
        payload: basis_payload(g.arc_ids(), &basis),
        tolerances: json!({}),
        warnings: Vec::new(),
    }))
}

fn cmd_flows(cli: &Cli, network: &Path) -> Result<Output, Failure> {
    reject_exact(cli, "flows")?;
    let (net, digest) = load_network(network)?;
    let g = net.graph();
    let basis = flow_space(&net)?;
    let boundary = net.boundary()?;
    let mut payload = basis_payload(g.arc_ids(), &basis);
    payload["boundary"] = json!(boundary.ids(g)?);
    payload["interior"] = json!(boundary.complement(g)?.ids(g)?);
    Ok(Output::ok(Report {
        command: "flows".into(),
        input_digest: digest,
        payload,
        tolerances: json!({}),
        warnings: net.warnings().to_vec(),
    }))
}

fn cmd_cut(cli: &Cli, members: &str, network: &Path) -> Result<Output, Failure> {
    reject_exact(cli, "cut")?;
    let (net, digest) = load_network(network)?;
    let g = net.graph();
    let ids: Vec<&str> = members.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if ids.is_empty() {
        return Err(Failure::validation("--members lists no vertex ids"));
    }
    let x = VertexSubset::from_ids(g, ids)?;
    let cut = cut_capacity(&net, &x)?;
    let report = Report {
        command: "cut".into(),
        input_digest: digest,
        payload: json!({
            "members": x.ids(g)?,
            "cut_arcs": cut.cut_arcs,
            "value": round_display(cut.value),
            "by_sum": round_display(cut.by_sum),
            "by_quadratic_form": round_display(cut.by_quadratic_form),
            "agrees": cut.agrees,
        }),
        tolerances: json!({ "agreement": cut.tolerance }),
        warnings: net.warnings().to_vec(),
    };
    Ok(if cut.agrees {
        Output::ok(report)
    } else {
        Output::mismatch(report, "cut capacity routes disagree".into())
    })
}

fn cmd_value(cli: &Cli, flow: &Path, at: &str, network: &Path) -> Result<Output, Failure> {
    reject_exact(cli, "value")?;
    let (net, digest) = load_network(network)?;
    let (flow_text, _) = read_input(flow)?;
    let eta = parse_flow_values(&net, &flow_text, cli.tol)?;
    let value = flow_value(&net, &eta, at)?;
    let report = Report {
        command: "value".into(),
        input_digest: digest,
        payload: json!({
            "source": value.source,
            "value": round_display(value.value),
            "by_sum": round_display(value.by_sum),
            "by_inner_product": round_display(value.by_inner_product),
            "agrees": value.agrees,
            "feasible": is_feasible(&net, &eta),
        }),
        tolerances: json!({ "agreement": value.tolerance }),
        warnings: net.warnings().to_vec(),
    };
    Ok(if value.agrees {
        Output::ok(report)
    } else {
        Output::mismatch(report, "flow value routes disagree".into())
    })
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut text =
                serde_json::to_string_pretty(report).expect("report serializes to JSON");
            text.push('\n');
            text
        }
        Format::Csv => render_csv(report),
    }
}

fn render_csv(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "command,{}", csv_field(&report.command));
    let _ = writeln!(out, "input_digest,{}", report.input_digest);
    render_csv_value(&mut out, "payload", &report.payload);
    render_csv_value(&mut out, "tolerances", &report.tolerances);
    for warning in &report.warnings {
        let _ = writeln!(out, "warning,{}", csv_field(warning));
    }
    out
}

/// Key-per-line rendering: scalars verbatim, matrices and eigenvalue pair
/// lists expanded row by row, anything else as one quoted JSON field.
fn render_csv_value(out: &mut String, prefix: &str, value: &Value) {
    match value {
        Value::Object(map) => {
            for (key, inner) in map {
                render_csv_value(out, &format!("{prefix}.{key}"), inner);
            }
        }
        Value::Array(items) if items.is_empty() => {
            let _ = writeln!(out, "{prefix},");
        }
        Value::Array(items) if items.iter().all(is_number_row) => {
            for (i, row) in items.iter().enumerate() {
                let cells: Vec<String> = row
                    .as_array()
                    .expect("checked above")
                    .iter()
                    .map(|x| x.to_string())
                    .collect();
                let _ = writeln!(out, "{prefix}[{i}],{}", cells.join(","));
            }
        }
        Value::Null => {
            let _ = writeln!(out, "{prefix},");
        }
        Value::Bool(b) => {
            let _ = writeln!(out, "{prefix},{b}");
        }
        Value::Number(n) => {
            let _ = writeln!(out, "{prefix},{n}");
        }
        Value::String(s) => {
            let _ = writeln!(out, "{prefix},{}", csv_field(s));
        }
        other => {
            let _ = writeln!(out, "{prefix},{}", csv_field(&other.to_string()));
        }
    }
}

fn is_number_row(value: &Value) -> bool {
    value.as_array().is_some_and(|row| !row.is_empty() && row.iter().all(Value::is_number))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
