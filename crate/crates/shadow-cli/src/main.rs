//! Command-line surface for the shadow calculus.
//!
//! Exit codes: 0 success, 1 domain error (invalid shadow, undecidable
//! input, failed check), 2 usage or syntax error.

use clap::{Parser, Subcommand, ValueEnum};
use shadow_core::boundary::{boundary_h1, is_candidate_shadow, CandidateResult};
use shadow_core::cw::{homology, pi1_presentation, Coefficients};
use shadow_core::decomp::Decomposition;
use shadow_core::graph::{regions, DecoratedGraph};
use shadow_core::moves::{double_with_bubbles, fuzz_block};
use shadow_core::normalize::{euler_conserved, normalize};
use shadow_core::plumbing::{exhaustive_lemma_check, plumbing_det, plumbing_pattern_witness};
use shadow_core::presentations::{ac_classify, classify_s, enumerate_thickenings, AcResult, Family};
use shadow_core::textio::{emit_dot, emit_json, emit_text, parse, parse_presentation_spec, PresentationInput};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "shadow", about = "Exact calculus for decorated shadow graphs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coeff {
    Z,
    Z2,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a graph file and run the well-formedness checks
    Validate { file: PathBuf },
    /// List the regions of a graph with their gleams and parities
    Regions { file: PathBuf },
    /// Homology of the polyhedron in a given degree
    Homology {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "z")]
        coeff: Coeff,
        #[arg(long, default_value_t = 1)]
        deg: usize,
    },
    /// First homology of the boundary 3-manifold
    Boundary { file: PathBuf },
    /// Decide whether the graph is a candidate shadow of a closed 4-manifold
    Check { file: PathBuf },
    /// Run the normalizer; accepts a file or a directory of .shadow files
    Normalize {
        path: PathBuf,
        #[arg(long, conflicts_with = "dot")]
        json: bool,
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        trace: bool,
    },
    /// Linear plumbing computations
    Plumb {
        #[command(subcommand)]
        cmd: PlumbCommand,
    },
    /// Classify a gleam-free graph with finite fundamental group
    ClassifyAc { file: PathBuf },
    /// List the boundary 4-manifolds of a presentation's thickenings
    ClassifySp { spec: String },
    /// Emit the double of a closed gleam-free graph
    Double { file: PathBuf },
    /// Generate a random block composition
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 15)]
        size: usize,
        /// Normalize the output and verify the conservation invariants
        #[arg(long)]
        check: bool,
    },
}

#[derive(Subcommand)]
enum PlumbCommand {
    /// Determinant of the linear plumbing with the given framings
    Det { framings: String },
    /// Search for a reduction-pattern witness for the framing sequence
    Witness { framings: String },
    /// Exhaustively check the witness property over all short sequences
    Exhaust {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

enum AppError {
    Domain(String),
    Usage(String),
}

fn load(path: &Path) -> Result<DecoratedGraph, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))
}

fn parse_framings(s: &str) -> Result<Vec<i64>, AppError> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| AppError::Usage(format!("bad framing list `{s}`")))
}

fn run(cmd: Command) -> Result<(), AppError> {
    match cmd {
        Command::Validate { file } => {
            let g = load(&file)?;
            g.validate().map_err(|e| AppError::Domain(format!("{e}")))?;
            println!(
                "ok: {} pieces, {} edges, chi = {}",
                g.vertices.len(),
                g.edges.len(),
                g.euler_char()
            );
            Ok(())
        }
        Command::Regions { file } => {
            let g = load(&file)?;
            g.validate().map_err(|e| AppError::Domain(format!("{e}")))?;
            for (i, r) in regions(&g).iter().enumerate() {
                let gleam = match r.gleam {
                    Some(x) => format!("{x}"),
                    None => "?".into(),
                };
                println!(
                    "region {i}: edges {:?}, surface pieces {:?}, gleam {}, parity {:?}",
                    r.edges, r.surface_vertices, gleam, r.parity
                );
            }
            Ok(())
        }
        Command::Homology { file, coeff, deg } => {
            if deg > 2 {
                return Err(AppError::Usage("degree must be 0, 1, or 2".into()));
            }
            let g = load(&file)?;
            g.validate().map_err(|e| AppError::Domain(format!("{e}")))?;
            let c = match coeff {
                Coeff::Z => Coefficients::Integers,
                Coeff::Z2 => Coefficients::Mod2,
            };
            println!("{}", homology(&g, c)[deg]);
            Ok(())
        }
        Command::Boundary { file } => {
            let g = load(&file)?;
            g.validate().map_err(|e| AppError::Domain(format!("{e}")))?;
            println!("{}", boundary_h1(&g));
            Ok(())
        }
        Command::Check { file } => {
            let g = load(&file)?;
            g.validate().map_err(|e| AppError::Domain(format!("{e}")))?;
            match is_candidate_shadow(&g) {
                CandidateResult::Yes { h } => {
                    println!("candidate: boundary H1 free of rank {h}");
                    Ok(())
                }
                other => Err(AppError::Domain(format!("not a candidate: {other:?}"))),
            }
        }
        Command::Normalize { path, json, dot, trace } => {
            let files = if path.is_dir() {
                let mut fs: Vec<PathBuf> = std::fs::read_dir(&path)
                    .map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))?
                    .filter_map(|e| e.ok())
                    .map(|e| e.path())
                    .filter(|p| p.extension().is_some_and(|x| x == "shadow"))
                    .collect();
                fs.sort();
                fs
            } else {
                vec![path.clone()]
            };
            let many = files.len() > 1;
            let mut failed = false;
            for f in files {
                if many {
                    println!("== {}", f.display());
                }
                match normalize_one(&f, json, dot, trace) {
                    Ok(()) => {}
                    Err(AppError::Domain(m)) if many => {
                        eprintln!("error: {m}");
                        failed = true;
                    }
                    Err(e) => return Err(e),
                }
            }
            if failed {
                Err(AppError::Domain("some inputs failed to normalize".into()))
            } else {
                Ok(())
            }
        }
        Command::Plumb { cmd } => match cmd {
            PlumbCommand::Det { framings } => {
                println!("{}", plumbing_det(&parse_framings(&framings)?));
                Ok(())
            }
            PlumbCommand::Witness { framings } => {
                match plumbing_pattern_witness(&parse_framings(&framings)?) {
                    Some(w) => {
                        println!("{w:?}");
                        Ok(())
                    }
                    None => Err(AppError::Domain("no pattern witness".into())),
                }
            }
            PlumbCommand::Exhaust { n, max } => {
                let mut bad = Vec::new();
                for len in 1..=n {
                    bad.extend(exhaustive_lemma_check(len, max));
                }
                println!("{} counterexamples", bad.len());
                for seq in &bad {
                    println!("  {seq:?}");
                }
                if bad.is_empty() {
                    Ok(())
                } else {
                    Err(AppError::Domain("witness property violated".into()))
                }
            }
        },
        Command::ClassifyAc { file } => {
            let g = load(&file)?;
            match ac_classify(&g).map_err(|e| AppError::Domain(format!("{e}")))? {
                AcResult::Classified { family, spheres } => {
                    let name = match family {
                        Family::C(n) => format!("C({n})"),
                        Family::D(m) => format!("D({m})"),
                    };
                    println!("{name} + {spheres} S^2");
                }
                AcResult::InfiniteDetected => println!("infinite fundamental group"),
            }
            Ok(())
        }
        Command::ClassifySp { spec } => {
            let input = parse_presentation_spec(&spec).map_err(AppError::Usage)?;
            let labels = match &input {
                PresentationInput::Family(f) => {
                    classify_s(*f).map_err(AppError::Domain)?
                }
                PresentationInput::Explicit(p) => {
                    println!("# raw labels (no symmetry quotient)");
                    enumerate_thickenings(p)
                }
            };
            for l in labels {
                let covers = match l.spin_cover_count {
                    Some(c) => format!(", {c} spin covers"),
                    None => String::new(),
                };
                println!(
                    "{}: {}, {}{}",
                    l.name,
                    if l.spin { "spin" } else { "non-spin" },
                    if l.even { "even" } else { "odd" },
                    covers
                );
            }
            Ok(())
        }
        Command::Double { file } => {
            let g = load(&file)?;
            g.validate().map_err(|e| AppError::Domain(format!("{e}")))?;
            let d = double_with_bubbles(&g).map_err(|e| AppError::Domain(format!("{e}")))?;
            print!("{}", emit_text(&d));
            Ok(())
        }
        Command::Fuzz { seed, size, check } => {
            let (g, expected) = fuzz_block(seed, size);
            if !check {
                print!("{}", emit_text(&g));
                return Ok(());
            }
            let d = normalize(&g).map_err(|e| AppError::Domain(format!("{e}")))?;
            let mut problems = Vec::new();
            if g.is_closed() && !euler_conserved(&g, &d) {
                problems.push("Euler characteristic not conserved".to_string());
            }
            if d.signature_key() != expected.signature_key() {
                problems.push(format!(
                    "decomposition mismatch:\n  got      {}\n  expected {}",
                    d.signature_key(),
                    expected.signature_key()
                ));
            }
            if g.is_closed() {
                let h1 = pi1_presentation(&g).abelianized();
                if format!("{}", d.h1()) != format!("{h1}") {
                    problems.push(format!("H1 mismatch: {} vs {h1}", d.h1()));
                }
            }
            if problems.is_empty() {
                println!("seed {seed}: ok ({})", d.signature_key());
                Ok(())
            } else {
                Err(AppError::Domain(problems.join("; ")))
            }
        }
    }
}

fn normalize_one(file: &Path, json: bool, dot: bool, trace: bool) -> Result<(), AppError> {
    let g = load(file)?;
    g.validate().map_err(|e| AppError::Domain(format!("{e}")))?;
    if dot {
        print!("{}", emit_dot(&g));
        return Ok(());
    }
    let d: Decomposition = normalize(&g).map_err(|e| AppError::Domain(format!("{e}")))?;
    if json {
        println!("{}", emit_json(&d));
        return Ok(());
    }
    println!("decomposition: {}", d.signature_key());
    println!("chi = {}, sigma = {}, H1 = {}, form = {}", d.euler(), d.sigma(), d.h1(), d.form_type());
    match d.spin {
        Some(true) => println!("spin"),
        Some(false) => println!("non-spin"),
        None => {}
    }
    if trace {
        for t in &d.trace {
            println!("  {t}");
        }
    }
    Ok(())
}
