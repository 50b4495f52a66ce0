//! `pcube`: recognition, analysis, completion, generation, and DOT export
//! for two-dimensional partial cubes.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use pcube::cells;
use pcube::completion;
use pcube::doc::{self, GraphDocument};
use pcube::graph::{recognize, CubeGraph, GraphError, Label};
use pcube::hyperplane;
use pcube::minors::{self, SetFamily};

const EXIT_NOT_PARTIAL_CUBE: u8 = 2;
const EXIT_DIMENSION: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "pcube", version, about = "Structure tool for two-dimensional partial cubes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recognize an edge-list graph as a partial cube and label it
    Recognize {
        /// Edge-list file: one `u v` pair per line, 0-based ids
        input: PathBuf,
        /// Write the labeled document here instead of stdout
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Report Θ-classes, VC-dimension, membership flags, cells, and disks
    Analyze {
        /// Graph document (JSON) or edge-list file
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Complete a two-dimensional graph to a COM or an ample partial cube
    Complete {
        /// Graph document (JSON) or edge-list file
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long)]
        json: bool,
        /// Write the completed document here instead of stdout
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Generate a named family as a graph document
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Export a graph as DOT with edges colored by Θ-class
    ExportDot {
        /// Graph document (JSON) or edge-list file
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Com,
    Ample,
}

#[derive(Subcommand)]
enum GenerateKind {
    /// The hypercube Q_m
    Qm {
        #[arg(long)]
        m: usize,
    },
    /// The even cycle C_len
    Cycle {
        #[arg(long)]
        len: usize,
    },
    /// The full subdivision SK_n of K_n
    Skn {
        #[arg(long)]
        n: usize,
    },
    /// SK_n plus the hub vertex
    SknStar {
        #[arg(long)]
        n: usize,
    },
    /// Q_m minus two antipodal vertices
    Qmm {
        #[arg(long)]
        m: usize,
    },
    /// The excluded-minor family member X_m^i
    Xfamily {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        i: usize,
    },
    /// The region graph of a wiring-diagram file
    Wiring {
        #[arg(long)]
        file: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError { code, message }) => {
            eprintln!("pcube: {message}");
            ExitCode::from(code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> CliError {
        CliError { code, message: message.into() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::new(1, e.to_string())
    }
}

impl From<doc::DocError> for CliError {
    fn from(e: doc::DocError) -> CliError {
        CliError::new(1, e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Recognize { input, output } => {
            let text = std::fs::read_to_string(&input)?;
            let abstract_graph = doc::parse_edge_list(&text)?;
            let rec = recognize(&abstract_graph).map_err(recognition_error)?;
            let mut document = GraphDocument::from_graph(&rec.graph);
            document.names = Some((0..abstract_graph.n()).map(|v| v.to_string()).collect());
            document.vertices =
                rec.vertex_labels.iter().map(|l| l.bitstring(rec.graph.m())).collect();
            emit(output.as_deref(), &document.to_json())?;
            Ok(())
        }
        Command::Analyze { input, json } => {
            let g = load_graph(&input)?;
            let report = analyze(&g);
            if json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("serializes"));
            } else {
                print!("{}", report.text);
            }
            Ok(())
        }
        Command::Complete { input, to, json, output } => {
            let g = load_graph(&input)?;
            let report = match to {
                Target::Com => completion::com_completion(&g),
                Target::Ample => completion::ample_completion(&g),
            }
            .map_err(|e| match e {
                completion::CompletionError::HostNotTwoDimensional => CliError::new(
                    EXIT_DIMENSION,
                    "input has VC-dimension greater than 2; completion is undefined",
                ),
                other => CliError::new(1, other.to_string()),
            })?;
            if !report.verified(matches!(to, Target::Ample)) {
                return Err(CliError::new(1, "completion verification failed"));
            }
            let document = GraphDocument::from_graph(&report.output);
            emit(output.as_deref(), &document.to_json())?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json()).expect("serializes")
                );
            } else {
                print!("{}", completion_text(&report));
            }
            Ok(())
        }
        Command::Generate { kind } => {
            let g = generate(kind)?;
            print!("{}", GraphDocument::from_graph(&g).to_json());
            Ok(())
        }
        Command::ExportDot { input } => {
            let g = load_graph(&input)?;
            print!("{}", doc::export_dot(&g));
            Ok(())
        }
    }
}

fn recognition_error(e: GraphError) -> CliError {
    match &e {
        GraphError::NotBipartite => {
            CliError::new(EXIT_NOT_PARTIAL_CUBE, "not a partial cube: graph is not bipartite")
        }
        GraphError::HalfspaceNotConvex { edge_u, edge_v, x, y, path } => CliError::new(
            EXIT_NOT_PARTIAL_CUBE,
            format!(
                "not a partial cube: the halfspace of edge ({edge_u}, {edge_v}) is not convex; \
                 the shortest path {path:?} between {x} and {y} leaves it"
            ),
        ),
        _ => CliError::new(1, e.to_string()),
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_graph(input: &Path) -> Result<CubeGraph, CliError> {
    let text = std::fs::read_to_string(input)?;
    if text.trim_start().starts_with('{') {
        let document = GraphDocument::parse(&text)?;
        let (g, _) = document.to_graph()?;
        Ok(g)
    } else {
        let abstract_graph = doc::parse_edge_list(&text)?;
        let rec = recognize(&abstract_graph).map_err(recognition_error)?;
        Ok(rec.graph)
    }
}

struct AnalysisReport {
    text: String,
    json: serde_json::Value,
}

fn analyze(g: &CubeGraph) -> AnalysisReport {
    let family = SetFamily::from_graph(g);
    let vc = family.vc_dimension();
    let flags = minors::membership(g);
    let ample = minors::is_ample(&family);
    let class_sizes: Vec<usize> =
        (0..g.m()).map(|i| g.theta_class(i).expect("coordinate exists").edges.len()).collect();
    let cycles = cells::convex_cycles(g);
    let mut cycles_by_len = std::collections::BTreeMap::new();
    for c in &cycles {
        *cycles_by_len.entry(c.len()).or_insert(0usize) += 1;
    }
    let subdivisions = cells::full_subdivisions(g, 4);
    let disk = cells::is_disk(g);
    let hyperplane_vc: Vec<usize> = (0..g.m())
        .map(|i| hyperplane::hyperplane(g, i).expect("coordinate exists").family.vc_dimension())
        .collect();
    let hyperplanes_are_trees = hyperplane_vc.iter().all(|&d| d <= 1);

    let mut text = String::new();
    text.push_str(&format!("vertices: {}\n", g.n()));
    text.push_str(&format!("edges: {}\n", g.edge_count()));
    text.push_str(&format!("isometric dimension: {}\n", g.m()));
    let sizes: Vec<String> = class_sizes.iter().map(usize::to_string).collect();
    text.push_str(&format!("theta class edge counts: {}\n", sizes.join(" ")));
    text.push_str(&format!("vc dimension: {vc}\n"));
    text.push_str(&format!(
        "membership: F(Q3)={} COM2=F(Q3,SK4)={} ample2=F(Q3,C6)={}\n",
        flags.two_dimensional, flags.com2, flags.ample2
    ));
    text.push_str(&format!(
        "ample: family={} shattered={} strongly_shattered={} ample={}\n",
        ample.family_size, ample.shattered, ample.strongly_shattered, ample.ample
    ));
    let cycle_text: Vec<String> =
        cycles_by_len.iter().map(|(len, count)| format!("C_{len}x{count}")).collect();
    text.push_str(&format!(
        "convex cycles: {}{}\n",
        cycles.len(),
        if cycle_text.is_empty() { String::new() } else { format!(" ({})", cycle_text.join(" ")) }
    ));
    if subdivisions.is_empty() {
        text.push_str("full subdivisions: none\n");
    } else {
        for h in &subdivisions {
            let originals: Vec<String> =
                h.originals.iter().map(|l| l.bitstring(g.m())).collect();
            text.push_str(&format!(
                "full subdivision SK_{}: originals={} convex={} gated={} extends_to_star={}\n",
                h.n,
                originals.join(","),
                h.convex,
                h.gated,
                h.extends_to_star
            ));
        }
    }
    match &disk {
        Some(d) => text.push_str(&format!("disk: boundary length {}\n", d.boundary.len())),
        None => text.push_str("disk: no\n"),
    }
    let profile: Vec<String> = hyperplane_vc.iter().map(usize::to_string).collect();
    text.push_str(&format!(
        "hyperplane vc profile: [{}] all virtual isometric trees: {}\n",
        profile.join(" "),
        hyperplanes_are_trees
    ));

    let json = json!({
        "vertices": g.n(),
        "edges": g.edge_count(),
        "isometric_dimension": g.m(),
        "theta_class_edge_counts": class_sizes,
        "vc_dimension": vc,
        "membership": {
            "two_dimensional": flags.two_dimensional,
            "com2": flags.com2,
            "ample2": flags.ample2,
        },
        "ample": {
            "family": ample.family_size,
            "shattered": ample.shattered,
            "strongly_shattered": ample.strongly_shattered,
            "ample": ample.ample,
        },
        "convex_cycles": cycles_by_len.iter().map(|(len, count)| json!({"length": len, "count": count})).collect::<Vec<_>>(),
        "full_subdivisions": subdivisions.iter().map(|h| json!({
            "n": h.n,
            "originals": h.originals.iter().map(|l| l.bitstring(g.m())).collect::<Vec<_>>(),
            "convex": h.convex,
            "gated": h.gated,
            "extends_to_star": h.extends_to_star,
        })).collect::<Vec<_>>(),
        "disk": disk.as_ref().map(|d| json!({
            "boundary_length": d.boundary.len(),
            "boundary": d.boundary.iter().map(|l| l.bitstring(g.m())).collect::<Vec<_>>(),
        })),
        "hyperplane_vc_profile": hyperplane_vc,
        "hyperplanes_are_virtual_isometric_trees": hyperplanes_are_trees,
    });
    AnalysisReport { text, json }
}

fn completion_text(report: &completion::CompletionReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "completion: {} -> {} vertices ({} one-extensions, {} cycle fills)\n",
        report.input.n(),
        report.output.n(),
        report.one_extensions,
        report.cycle_fills
    ));
    out.push_str(&format!(
        "verified: input_isometric={} two_dimensional={} com2={} ample={} ample2={}\n",
        report.input_isometric, report.two_dimensional, report.com2, report.ample, report.ample2
    ));
    out
}

fn generate(kind: GenerateKind) -> Result<CubeGraph, CliError> {
    let bad = |msg: &str| CliError::new(1, format!("bad parameters: {msg}"));
    let build = |m: usize, labels: Vec<Label>| -> Result<CubeGraph, CliError> {
        CubeGraph::from_labels(m, labels)
            .map(|(g, _)| g)
            .map_err(|e| CliError::new(1, e.to_string()))
    };
    match kind {
        GenerateKind::Qm { m } => {
            if m > 16 {
                return Err(bad("qm needs m ≤ 16"));
            }
            build(m, (0..1u64 << m).map(Label).collect())
        }
        GenerateKind::Cycle { len } => {
            if len < 4 || len % 2 != 0 {
                return Err(bad("cycle needs an even length ≥ 4"));
            }
            let k = len / 2;
            let mut labels: Vec<Label> = (0..=k).map(Label::full).collect();
            for j in 1..k {
                labels.push(Label::full(k).xor(Label::full(j)));
            }
            build(k, labels)
        }
        GenerateKind::Skn { n } => {
            if n < 3 {
                return Err(bad("skn needs n ≥ 3"));
            }
            build(n, sk_labels(n))
        }
        GenerateKind::SknStar { n } => {
            if n < 3 {
                return Err(bad("skn-star needs n ≥ 3"));
            }
            let mut labels = sk_labels(n);
            labels.push(Label::EMPTY);
            build(n, labels)
        }
        GenerateKind::Qmm { m } => {
            if !(3..=16).contains(&m) {
                return Err(bad("qmm needs 3 ≤ m ≤ 16"));
            }
            build(m, (1..(1u64 << m) - 1).map(Label).collect())
        }
        GenerateKind::Xfamily { m, i } => {
            if m < 4 || i == 0 || i > m + 1 {
                return Err(bad("xfamily needs m ≥ 4 and 1 ≤ i ≤ m+1"));
            }
            // X_m^{m+1} drops the all-zeroes vertex and the all-ones-but-last
            // vertex; X_m^m also drops the last singleton, and each further
            // step drops one pair {j, m−1}.
            let mut removed = vec![Label::EMPTY, Label::full(m).without(m - 1)];
            if i <= m {
                removed.push(Label::singleton(m - 1));
                for j in 1..=(m - i) {
                    removed.push(Label::singleton(j - 1).with(m - 1));
                }
            }
            let labels: Vec<Label> =
                (0..1u64 << m).map(Label).filter(|l| !removed.contains(l)).collect();
            build(m, labels)
        }
        GenerateKind::Wiring { file } => {
            let text = std::fs::read_to_string(&file)?;
            let diagram =
                cells::parse_wiring(&text).map_err(|e| CliError::new(1, e.to_string()))?;
            let out = cells::disk_from_wiring(&diagram).map_err(|e| match e {
                cells::CellsError::BudgetExceeded(b) => {
                    CliError::new(EXIT_BUDGET, format!("budget exceeded ({b})"))
                }
                other => CliError::new(1, other.to_string()),
            })?;
            Ok(out.disk.graph)
        }
    }
}

fn sk_labels(n: usize) -> Vec<Label> {
    let mut labels: Vec<Label> = (0..n).map(Label::singleton).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            labels.push(Label::singleton(i).with(j));
        }
    }
    labels
}
