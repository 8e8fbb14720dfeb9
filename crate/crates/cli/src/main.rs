use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use chordlink::cache::load_or_build;
use chordlink::relations::{RelationBasis, RelationSet, Ring};
use chordlink::verify::{self, ClassFilter, ShareScope, VerifyReport};
use chordlink::{
    check_realizable, enumerate_diagrams, orbit, reconstruct, ChordDiagram, IntersectionGraph, Limits,
    LinearCombination, MarkedTree,
};

type CliResult<T> = std::result::Result<T, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(name = "chordlink", version, about = "Exact computations with chord diagrams on string links")]
struct Cli {
    /// Relation families, e.g. `1t,4t` or `4t,as`.
    #[arg(long, global = true, default_value = "1t,4t")]
    relations: RelationSet,
    /// Coefficient ring: `q` (rationals) or `z` (integers).
    #[arg(long, global = true, default_value = "q")]
    ring: Ring,
    /// Largest number of diagrams any single enumeration may produce.
    #[arg(long, global = true, default_value_t = 100_000)]
    cap: u128,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Directory for cached relation bases.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List all diagrams of degree N on K strands.
    Enumerate { n: usize, k: usize },
    /// Intersection graph of a diagram.
    Graph {
        diagram: ChordDiagram,
        #[arg(long, value_enum, default_value = "dot")]
        format: GraphFormat,
    },
    /// Whether two combinations agree modulo the relations.
    Equal { x: LinearCombination, y: LinearCombination },
    /// Quotient dimension of the diagram space.
    Dim { n: usize, k: usize },
    /// Dimension of the span of tree diagrams in the quotient.
    DimTrees {
        n: usize,
        #[arg(default_value_t = 2)]
        k: usize,
        /// Include every tree, not only trimmed ones.
        #[arg(long)]
        all_trees: bool,
    },
    /// Invariant factors and torsion pairs among tree classes.
    Torsion {
        n: usize,
        k: usize,
        /// Required for degree 5 and above.
        #[arg(long)]
        large: bool,
    },
    /// Realizability of a tree file.
    Realizable {
        treefile: PathBuf,
        #[arg(short = 'n', long)]
        colors: Option<usize>,
    },
    /// Diagram realizing a tree file.
    Reconstruct {
        treefile: PathBuf,
        #[arg(short = 'n', long)]
        colors: Option<usize>,
        /// Check the intersection graph of the result.
        #[arg(long)]
        verify: bool,
    },
    /// Closure under elementary transformations.
    Orbit {
        diagram: ChordDiagram,
        #[arg(long)]
        trace: bool,
    },
    /// Desk-scale theorem checks; exit code 0 iff the check passes.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Strand count for thm-ncomp, colours for realizability checks.
        #[arg(long, default_value_t = 3)]
        strands: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    #[value(name = "thm-2comp")]
    Thm2comp,
    #[value(name = "thm-ncomp")]
    ThmNcomp,
    LemmaShare,
    PropOrbit,
    Centrality,
    Gen4t,
    Moves,
    Hopf,
    ConnectSum,
    Realizability,
    RoundTrip,
    Stacking,
}

fn basis(cli: &Cli, n: usize, k: usize, limits: &Limits) -> CliResult<RelationBasis> {
    Ok(match &cli.cache_dir {
        Some(dir) => load_or_build(dir, n, k, cli.relations, cli.ring, limits)?.0,
        None => RelationBasis::build(n, k, cli.relations, cli.ring, limits)?,
    })
}

fn read_tree(path: &PathBuf, colors: Option<usize>) -> CliResult<MarkedTree> {
    Ok(MarkedTree::parse(&fs::read_to_string(path)?, colors)?)
}

fn print_json(v: &impl serde::Serialize) -> CliResult<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run_verify(check: Check, max_degree: usize, strands: usize, limits: &Limits) -> CliResult<VerifyReport> {
    Ok(match check {
        Check::Thm2comp => verify::thm_2comp(max_degree, limits)?,
        Check::ThmNcomp => verify::thm_ncomp(max_degree, strands, limits)?,
        Check::LemmaShare => verify::lemma_share(max_degree, ShareScope::AllVertices, limits)?,
        Check::PropOrbit => verify::prop_orbit(max_degree, limits)?,
        Check::Centrality => verify::centrality(2, 2, max_degree, limits)?,
        Check::Gen4t => verify::gen4t(max_degree, limits)?,
        Check::Moves => verify::moves(max_degree, limits)?,
        Check::Hopf => verify::hopf(max_degree.min(2), 2, limits)?,
        Check::ConnectSum => verify::connect_sum_well_defined(max_degree.saturating_sub(1).max(1), limits)?,
        Check::Realizability => verify::realizability_agreement(max_degree, strands, limits)?,
        Check::RoundTrip => verify::round_trip(max_degree + 1, strands, limits)?,
        Check::Stacking => verify::stacking(max_degree, strands, limits)?,
    })
}

fn run(cli: &Cli) -> CliResult<ExitCode> {
    let limits = Limits::new(cli.cap);
    match &cli.command {
        Command::Enumerate { n, k } => {
            let all = enumerate_diagrams(*n, *k, &limits)?;
            if cli.json {
                print_json(&all)?;
            } else {
                for d in all {
                    println!("{d}");
                }
            }
        }
        Command::Graph { diagram, format } => {
            let g = IntersectionGraph::of(diagram);
            match (cli.json, format) {
                (true, _) | (_, GraphFormat::Json) => println!("{}", serde_json::to_string_pretty(&g.to_json())?),
                _ => print!("{}", g.to_dot()),
            }
        }
        Command::Equal { x, y } => {
            let (n, k) = x.shape().or(y.shape()).ok_or("both sides are zero")?;
            let b = basis(cli, n, k, &limits)?;
            let equal = b.equal_mod(x, y)?;
            let residue = b.reduce(&x.sub(y)?)?;
            if cli.json {
                print_json(&json!({ "equal": equal, "residue": residue.to_string(), "relations": cli.relations.to_string(), "ring": cli.ring.to_string() }))?;
            } else {
                println!("{}", if equal { "equal" } else { "not equal" });
                println!("residue: {residue}");
            }
        }
        Command::Dim { n, k } => {
            let b = basis(cli, *n, *k, &limits)?;
            let (count, rank, dim) = (b.index().len(), b.rank(), b.dimension());
            if cli.json {
                print_json(&json!({ "degree": n, "strands": k, "relations": cli.relations.to_string(), "ring": cli.ring.to_string(), "diagrams": count, "generators": b.generator_count(), "rank": rank, "dimension": dim }))?;
            } else {
                println!("diagrams {count}\nrank {rank}\ndimension {dim}");
            }
        }
        Command::DimTrees { n, k, all_trees } => {
            let filter = if *all_trees { ClassFilter::Tree } else { ClassFilter::TrimmedTree };
            let classes = verify::tree_classes(*n, *k, filter, &limits)?;
            let diagrams: Vec<ChordDiagram> = classes.values().flatten().cloned().collect();
            let b = basis(cli, *n, *k, &limits)?;
            let s = b.subspace_dimension(&diagrams)?;
            if cli.json {
                print_json(&json!({ "degree": n, "strands": k, "classes": classes.len(), "diagrams": diagrams.len(), "dimension": s.dimension, "basis": s.basis }))?;
            } else {
                println!("classes {}\ndiagrams {}\ndimension {}", classes.len(), diagrams.len(), s.dimension);
                for d in s.basis {
                    println!("{d}");
                }
            }
        }
        Command::Torsion { n, k, large } => {
            if *n >= 5 && !large {
                return Err("degree 5 and above needs --large".into());
            }
            let p = verify::torsion_probe(*n, *k, &limits)?;
            if cli.json {
                print_json(&p)?;
            } else {
                let r = &p.report;
                println!("diagrams {}\nrank {}\ninvariant factors {:?}", r.diagrams, r.rank, r.invariant_factors);
                println!("tree classes {}", p.classes);
                for x in &p.pairs {
                    println!("torsion pair (order {}): {} | {}", x.order, x.first, x.second);
                }
                for x in &p.rational_failures {
                    println!("rationally distinct pair: {} | {}", x.first, x.second);
                }
            }
        }
        Command::Realizable { treefile, colors } => {
            let t = read_tree(treefile, *colors)?;
            let r = check_realizable(&t, &limits)?;
            if cli.json {
                print_json(&r)?;
            } else {
                println!("{}", if r.accepted { "accepted" } else { "rejected" });
                if let Some(p) = &r.relabeling {
                    println!("relabeling {p:?}");
                }
                for v in &r.violations {
                    println!("condition {}: {}", v.condition, v.witnesses.join(" "));
                }
                if let Some(w) = &r.witness {
                    println!("witness {w}");
                }
            }
        }
        Command::Reconstruct { treefile, colors, verify } => {
            let t = read_tree(treefile, *colors)?;
            let d = reconstruct(&t, &limits)?;
            let ok = IntersectionGraph::of(&d).is_isomorphic(t.graph());
            if cli.json {
                let mut v = json!({ "diagram": d });
                if *verify {
                    v["round_trip"] = json!(ok);
                }
                print_json(&v)?;
            } else {
                println!("{d}");
                if *verify {
                    println!("round trip: {}", if ok { "ok" } else { "FAILED" });
                }
            }
            if *verify && !ok {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Orbit { diagram, trace } => {
            let o = orbit(diagram, chordlink::transform::DEFAULT_ORBIT_CAP.min(cli.cap as usize))?;
            if cli.json {
                print_json(&o)?;
            } else {
                for d in &o.diagrams {
                    println!("{d}");
                }
                if *trace {
                    for m in &o.trace {
                        println!("# {} -> {}: {}", m.from, m.to, m.description);
                    }
                }
            }
        }
        Command::Verify { check, max_degree, strands } => {
            let r = run_verify(*check, *max_degree, *strands, &limits)?;
            if cli.json {
                print_json(&r)?;
            } else {
                print!("{r}");
            }
            return Ok(if r.passed { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
