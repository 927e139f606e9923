use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use flagwedge::certificate::{verify_certificate, wedge_summary, Certificate};
use flagwedge::classify::{batch_classify, classify_digraph, HomotopyDescriptor};
use flagwedge::collapse::{pop_everything_recorded, seq_collapse};
use flagwedge::digraph::is_klein_four;
use flagwedge::flag::{
    directed_flag_complex, flag_tournaplex, graph_with_three_cycles, undirected_flag_complex, FiltrationWeight,
    MaxFaceDirectionality, TransitiveIndicator, Tournaplex,
};
use flagwedge::homology::{chain_betti, chain_homology};
use flagwedge::io::{self as fio, Side};
use flagwedge::tournament;
use flagwedge::wedge::{cone_and_collapse_with, pop_everything_certificate, ConeOptions, CycleSearch};
use flagwedge::{Complex, Digraph};

/// Directed flag complexes, integral homology and certified wedge decompositions.
///
/// Inputs default to stdin when no path (or `-`) is given. Graphs are read
/// as connectome CSV when the file name ends in `.csv`, otherwise as edge lists.
#[derive(Parser)]
#[command(name = "flagwedge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct GraphArgs {
    /// Graph file.
    input: Option<PathBuf>,
    /// Read a CSV connectome as is instead of running the standard
    /// preprocessing (first-occurrence numbering, reversed edges).
    #[arg(long)]
    raw: bool,
    /// Which chemical-synapse rows a raw CSV read uses.
    #[arg(long, value_enum, default_value_t = SideArg::Send)]
    side: SideArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Send,
    Receive,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    /// Directed flag complex.
    Dfl,
    /// Flag tournaplex.
    Tflag,
    /// Undirected flag complex.
    Uflag,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weight {
    Transitive,
    MaxFaceDirectionality,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    All,
    Regular,
    DoublyRegular,
}

#[derive(Subcommand)]
enum Command {
    /// Build a complex from a graph and print it.
    Build {
        #[arg(value_enum)]
        kind: BuildKind,
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integral homology of a complex or tournaplex file.
    Homology {
        input: Option<PathBuf>,
        /// Ranks only, skipping torsion.
        #[arg(long)]
        betti_only: bool,
    },
    /// Collapse a complex greedily and print the maximal faces left.
    Collapse {
        input: Option<PathBuf>,
        /// Print the collapse steps to stderr.
        #[arg(long)]
        log: bool,
    },
    /// Collapse, pop one cell per homology generator, and check the rest collapses.
    PopEverything {
        input: Option<PathBuf>,
        /// Certificate path, written on success.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Alternate cone-offs and collapses, emitting a certificate.
    ConeAndCollapse {
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        max_rounds: usize,
        /// Skip the rational sphere test in the cycle search.
        #[arg(long)]
        no_prefilter: bool,
    },
    /// Replay a certificate.
    Verify { cert: PathBuf },
    /// Classify a graph, or every tournament of a collection.
    Classify {
        #[command(flatten)]
        graph: GraphArgs,
        /// Tournament bit-string file, one per line.
        #[arg(long, conflicts_with = "input")]
        collection: Option<PathBuf>,
        /// Certificate path for a single graph.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Homology of a stage of the flag tournaplex filtration.
    Filtration {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum)]
        weight: Weight,
        #[arg(long)]
        d: u64,
        /// Also compare the stage with the graph plus its cyclic triangles.
        #[arg(long)]
        structure_check: bool,
    },
    /// Degree-signature partition and automorphism group.
    Autgroup {
        #[command(flatten)]
        graph: GraphArgs,
        /// Maximum number of candidate permutations to test.
        #[arg(long, default_value_t = 10_000_000)]
        limit: u64,
    },
    /// Random digraph as an edge list.
    GenRandom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tournament collections as bit-strings.
    GenTournaments {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
    },
}

/// A verification failure, reported with exit code 1.
struct Rejected(String);

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_graph(args: &GraphArgs) -> Result<Digraph> {
    let text = read_input(args.input.as_deref())?;
    let csv = args.input.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")));
    if !csv {
        return Ok(fio::parse_edge_list(&text)?);
    }
    let records = fio::parse_connectome(&text)?;
    if args.raw {
        let side = match args.side {
            SideArg::Send => Side::Send,
            SideArg::Receive => Side::Receive,
        };
        Ok(fio::connectome_graph(&records, side)?)
    } else {
        Ok(fio::preprocess_celegans(&records)?)
    }
}

enum Cells {
    Simplicial(Complex),
    Tournaments(Tournaplex),
}

fn load_cells(path: Option<&Path>) -> Result<Cells> {
    let text = read_input(path)?;
    let first = text.lines().map(|l| l.split('#').next().unwrap_or("")).find(|l| !l.trim().is_empty());
    if first.is_some_and(|l| l.contains(':')) {
        Ok(Cells::Tournaments(fio::parse_tournaplex(&text)?))
    } else {
        Ok(Cells::Simplicial(fio::parse_complex(&text)?))
    }
}

fn load_complex(path: Option<&Path>) -> Result<Complex> {
    match load_cells(path)? {
        Cells::Simplicial(c) => Ok(c),
        Cells::Tournaments(_) => bail!("expected a simplex list, found a tournaplex"),
    }
}

fn load_certificate(path: &Path) -> Result<Certificate> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Certificate::parse(&text)?)
}

fn betti_line(b: &[usize]) -> String {
    let parts: Vec<String> = b.iter().map(|x| x.to_string()).collect();
    format!("betti: [{}]\n", parts.join(", "))
}

fn run(cmd: Command) -> Result<std::result::Result<(), Rejected>> {
    match cmd {
        Command::Build { kind, graph, out } => {
            let g = load_graph(&graph)?;
            let text = match kind {
                BuildKind::Dfl => fio::write_complex(&directed_flag_complex(&g)),
                BuildKind::Uflag => fio::write_complex(&undirected_flag_complex(&g)),
                BuildKind::Tflag => fio::write_tournaplex(&flag_tournaplex(&g)?),
            };
            emit(out.as_deref(), &text)?;
        }
        Command::Homology { input, betti_only } => {
            let text = match (load_cells(input.as_deref())?, betti_only) {
                (Cells::Simplicial(c), false) => chain_homology(&c)?.to_lines(),
                (Cells::Simplicial(c), true) => betti_line(&chain_betti(&c)?),
                (Cells::Tournaments(t), false) => chain_homology(&t)?.to_lines(),
                (Cells::Tournaments(t), true) => betti_line(&chain_betti(&t)?),
            };
            emit(None, &text)?;
        }
        Command::Collapse { input, log } => {
            let c = load_complex(input.as_deref())?;
            let (terminal, steps) = seq_collapse(&c);
            if log {
                for s in &steps {
                    eprintln!("{} < {}", s.tau, s.sigma);
                }
            }
            eprintln!("{} collapses, {} maximal simplices left", steps.len(), terminal.len());
            emit(None, &fio::write_complex(&terminal))?;
        }
        Command::PopEverything { input, out } => {
            let c = load_complex(input.as_deref())?;
            let rec = pop_everything_recorded(&c);
            if rec.success() {
                let desc = HomotopyDescriptor::spheres(&rec.sphere_dims());
                println!("success: {desc}");
                if let Some(p) = out {
                    let cert = pop_everything_certificate(&c).ok_or_else(|| anyhow!("certificate construction failed"))?;
                    emit(Some(&p), &cert.to_text())?;
                }
            } else {
                println!("failed");
            }
        }
        Command::ConeAndCollapse { input, out, max_rounds, no_prefilter } => {
            let c = load_complex(input.as_deref())?;
            let opts = ConeOptions { cycles: CycleSearch { prefilter: !no_prefilter }, max_rounds };
            let run = cone_and_collapse_with(&c, opts);
            eprintln!("rounds: {}", run.rounds.len());
            if run.reached_vertex() {
                eprintln!("terminal: single vertex");
                eprintln!("wedge: {}", HomotopyDescriptor::spheres(&run.spheres()));
            } else {
                eprintln!(
                    "terminal: {} maximal simplices{}",
                    run.terminal.len(),
                    if run.truncated { " (round limit reached)" } else { "" }
                );
            }
            emit(out.as_deref(), &run.certificate.to_text())?;
        }
        Command::Verify { cert } => {
            let cert = load_certificate(&cert)?;
            let v = verify_certificate(&cert);
            if let Some((i, m)) = v.failure {
                return Ok(Err(Rejected(format!("FAIL at operation {i}: {m}"))));
            }
            println!("OK");
            if let Ok(dims) = wedge_summary(&cert) {
                println!("wedge: {}", HomotopyDescriptor::spheres(&dims));
            }
        }
        Command::Classify { graph, collection, out } => {
            if let Some(path) = collection {
                let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                let items = fio::parse_tournaments_auto(&text)?;
                emit(None, &batch_classify(&items).table())?;
            } else {
                let g = load_graph(&graph)?;
                let c = classify_digraph(&g)?;
                println!("{c}");
                if let (Some(p), Some(cert)) = (out, &c.certificate) {
                    emit(Some(&p), &cert.to_text())?;
                }
            }
        }
        Command::Filtration { graph, weight, d, structure_check } => {
            let g = load_graph(&graph)?;
            let t = flag_tournaplex(&g)?;
            let w: &dyn FiltrationWeight = match weight {
                Weight::Transitive => &TransitiveIndicator,
                Weight::MaxFaceDirectionality => &MaxFaceDirectionality,
            };
            let stage = t.filtration_stage(w, d)?;
            eprintln!("stage f-vector: {:?}", stage.f_vector().counts());
            if structure_check {
                let same = stage == graph_with_three_cycles(&t);
                println!("structure: {}", if same { "graph plus cyclic triangles" } else { "other" });
            }
            emit(None, &chain_homology(&stage)?.to_lines())?;
        }
        Command::Autgroup { graph, limit } => {
            let g = load_graph(&graph)?;
            let classes = g.degree_signature_partition();
            let name = |v: u32| g.names().map_or(v.to_string(), |n| n[v as usize].clone());
            let singles = classes.iter().filter(|c| c.len() == 1).count();
            println!("classes: {} singletons, {} larger", singles, classes.len() - singles);
            for c in classes.iter().filter(|c| c.len() > 1) {
                let names: Vec<String> = c.iter().map(|&v| name(v)).collect();
                println!("class: {}", names.join(" "));
            }
            let group = g.automorphisms_within(&classes, limit)?;
            println!("order: {}", group.len());
            println!("klein four: {}", if is_klein_four(&group) { "yes" } else { "no" });
            for p in &group {
                let moved: Vec<String> = p
                    .iter()
                    .enumerate()
                    .filter(|&(i, &j)| i as u32 != j)
                    .map(|(i, &j)| format!("{}->{}", name(i as u32), name(j)))
                    .collect();
                if !moved.is_empty() {
                    println!("automorphism: {}", moved.join(" "));
                }
            }
        }
        Command::GenRandom { n, p, seed } => {
            emit(None, &fio::write_edge_list(&Digraph::random(n, p, seed)?))?;
        }
        Command::GenTournaments { family, n } => {
            let ts = match family {
                Family::All => tournament::all_tournaments(n),
                Family::Regular => tournament::regular_tournaments(n)?,
                Family::DoublyRegular => vec![tournament::doubly_regular(n)?],
            };
            let mut text = String::new();
            for t in &ts {
                text.push_str(&fio::tournament_bits(t)?);
                text.push('\n');
            }
            emit(None, &text)?;
        }
    }
    Ok(Ok(()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Rejected(m))) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
