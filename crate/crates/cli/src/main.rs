use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_dissect::dissect::{recursive_decompose, DissectOptions};
use spectral_dissect::eigen::{dense_spectrum, fiedler, EigenOptions, SEED_ENV};
use spectral_dissect::generators::{grid_graph, random_banded_graph, GridSpec};
use spectral_dissect::io::{read_graph, read_permutation, write_graph, write_permutation};
use spectral_dissect::partition::{report, spectral_partition, CoverMode, PartitionOptions, DEFAULT_PRINT_TOL};
use spectral_dissect::solve::{ldlt_three_stage_solve, relative_residual, schur_solve, BlockSystem};
use spectral_dissect::{Error, ErrorClass, Laplacian, SparseSymMatrix};

#[derive(Parser)]
#[command(name = "spdissect", version, about = "Spectral partitioning and nested dissection of sparse graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the 5-point grid graph with M rows and N columns
    GenGrid {
        m: usize,
        n: usize,
        /// Output file [default: grid_MxN.spg]
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a random graph on N vertices with average degree P and bandwidth Q
    GenRandom {
        n: usize,
        p: f64,
        q: usize,
        seed: u64,
        /// Output file [default: random_N_Q_SEED.spg]
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Split a graph into A, B and a vertex separator S
    Partition {
        file: PathBuf,
        #[arg(long)]
        exact_cover: bool,
        /// Print sets smaller than this in full
        #[arg(long, default_value_t = DEFAULT_PRINT_TOL)]
        print_tol: usize,
    },
    /// Recursively dissect a graph into a separator tree
    Dissect {
        file: PathBuf,
        /// Banks of at most this many vertices become leaves
        #[arg(long, default_value_t = 3)]
        atom: usize,
        #[arg(long)]
        exact_cover: bool,
        /// Write the elimination order as a PERM1 file
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the separator tree
        #[arg(long)]
        tree: bool,
        /// Stop after the first split
        #[arg(long)]
        once: bool,
    },
    /// Solve a system on the graph with a one-level block solver
    Solve {
        file: PathBuf,
        /// ones | random:SEED | file:PATH
        #[arg(long, default_value = "ones")]
        rhs: String,
        #[arg(long, value_enum, default_value_t = Method::Schur)]
        method: Method,
        /// Reorder the graph by this PERM1 file first
        #[arg(long)]
        perm: Option<PathBuf>,
        #[arg(long)]
        exact_cover: bool,
    },
    /// Print Laplacian eigenvalues as CSV (Ritz values, or the full spectrum)
    Spectrum {
        file: PathBuf,
        /// Full dense spectrum (n <= 512)
        #[arg(long)]
        dense: bool,
    },
    /// Print the Fiedler vector as CSV
    Fiedler { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Schur,
    Ldlt,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self { code: e.class().exit_code() as u8, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::Io(e).into()
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: ErrorClass::Usage.exit_code() as u8, message: message.into() }
}

fn with_path(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    }
}

fn load_graph(path: &Path) -> Result<SparseSymMatrix, Failure> {
    let file = File::open(path).map_err(|e| with_path(path)(e.into()))?;
    read_graph(BufReader::new(file)).map_err(with_path(path))
}

fn load_laplacian(path: &Path) -> Result<Laplacian, Failure> {
    Laplacian::from_adjacency(&load_graph(path)?).map_err(with_path(path))
}

fn eigen_options() -> Result<EigenOptions, Failure> {
    let mut opts = EigenOptions::default();
    if let Ok(raw) = std::env::var(SEED_ENV) {
        opts.seed = raw.trim().parse().map_err(|_| usage(format!("{SEED_ENV} must be an integer, got {raw:?}")))?;
    }
    Ok(opts)
}

fn cover_mode(exact: bool) -> CoverMode {
    if exact {
        CoverMode::Exact
    } else {
        CoverMode::Greedy
    }
}

fn write_graph_file(m: &SparseSymMatrix, path: &Path) -> Result<(), Failure> {
    let mut w = BufWriter::new(File::create(path).map_err(|e| with_path(path)(e.into()))?);
    write_graph(m, &mut w).map_err(with_path(path))?;
    w.flush()?;
    Ok(())
}

/// `4I - M` when every degree is at most 4, otherwise `L + I`.
fn system_matrix(l: &Laplacian) -> SparseSymMatrix {
    if l.max_degree() <= 4 {
        let mut t: Vec<(usize, usize, f64)> = (0..l.n()).map(|i| (i, i, 4.0)).collect();
        t.extend(l.edges().flat_map(|(i, j)| [(i, j, -1.0), (j, i, -1.0)]));
        SparseSymMatrix::from_triplets(l.n(), &t).expect("valid pattern")
    } else {
        l.matrix().shifted(1.0)
    }
}

fn right_hand_side(spec: &str, n: usize) -> Result<Vec<f64>, Failure> {
    if spec == "ones" {
        return Ok(vec![1.0; n]);
    }
    if let Some(seed) = spec.strip_prefix("random:") {
        let seed: u64 = seed.parse().map_err(|_| usage(format!("bad seed in --rhs {spec}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok((0..n).map(|_| rng.random_range(-1.0..1.0)).collect());
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).map_err(|e| with_path(Path::new(path))(e.into()))?;
        let values = text
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| usage(format!("{path}: right-hand side must be whitespace-separated numbers")))?;
        if values.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: values.len() }.into());
        }
        return Ok(values);
    }
    Err(usage(format!("--rhs must be ones, random:SEED or file:PATH, got {spec:?}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::GenGrid { m, n, output } => {
            let g = grid_graph(GridSpec::new(m, n))?;
            let path = output.unwrap_or_else(|| PathBuf::from(format!("grid_{m}x{n}.spg")));
            write_graph_file(&g, &path)?;
            writeln!(out, "{}: {} vertices, {} edges", path.display(), g.n(), g.edges().count())?;
        }
        Command::GenRandom { n, p, q, seed, output } => {
            let g = random_banded_graph(n, p, q, seed)?;
            let path = output.unwrap_or_else(|| PathBuf::from(format!("random_{n}_{q}_{seed}.spg")));
            write_graph_file(&g, &path)?;
            writeln!(out, "{}: {} vertices, {} edges", path.display(), g.n(), g.edges().count())?;
        }
        Command::Partition { file, exact_cover, print_tol } => {
            let l = load_laplacian(&file)?;
            let p = spectral_partition(&l, &eigen_options()?, cover_mode(exact_cover))?;
            write!(out, "{}", report(&p, print_tol))?;
        }
        Command::Dissect { file, atom, exact_cover, output, tree, once } => {
            let l = load_laplacian(&file)?;
            let opts = DissectOptions {
                atom_size: atom,
                eigen: eigen_options()?,
                partition: PartitionOptions::with_cover(cover_mode(exact_cover)),
                max_depth: once.then_some(1),
            };
            let (t, perm) = recursive_decompose(&l, &opts)?;
            writeln!(out, "vertices: {}", l.n())?;
            writeln!(out, "depth: {}", t.depth())?;
            writeln!(out, "largest leaf: {}", t.max_leaf())?;
            if tree {
                write!(out, "{}", t.render())?;
            }
            if let Some(path) = output {
                let mut w = BufWriter::new(File::create(&path).map_err(|e| with_path(&path)(e.into()))?);
                write_permutation(perm.as_slice(), &mut w)?;
                w.flush()?;
            }
        }
        Command::Solve { file, rhs, method, perm, exact_cover } => {
            let adj = load_graph(&file)?;
            let f_orig = right_hand_side(&rhs, adj.n())?;
            let (adj, f) = match perm {
                Some(path) => {
                    let order = read_permutation(BufReader::new(
                        File::open(&path).map_err(|e| with_path(&path)(e.into()))?,
                    ))
                    .map_err(with_path(&path))?;
                    if order.len() != adj.n() {
                        return Err(Error::DimensionMismatch { expected: adj.n(), found: order.len() }.into());
                    }
                    let f: Vec<f64> = order.iter().map(|&v| f_orig[v]).collect();
                    (adj.permuted(&order)?, f)
                }
                None => (adj, f_orig),
            };
            let l = Laplacian::from_adjacency(&adj)?;
            let c = system_matrix(&l);
            let start = Instant::now();
            let p = spectral_partition(&l, &eigen_options()?, cover_mode(exact_cover))?;
            let sys = BlockSystem::from_partition(&c, &p, &f)?;
            let partitioned = start.elapsed();
            let x = match method {
                Method::Schur => schur_solve(&sys)?,
                Method::Ldlt => ldlt_three_stage_solve(&sys)?,
            };
            let solved = start.elapsed();
            writeln!(out, "unknowns: {}", c.n())?;
            writeln!(out, "blocks A B S: {} {} {}", p.a.len(), p.b.len(), p.s.len())?;
            writeln!(out, "relative residual: {:.3e}", relative_residual(&c, &x, &f))?;
            eprintln!("partition {:.3?}, solve {:.3?}", partitioned, solved - partitioned);
        }
        Command::Spectrum { file, dense } => {
            let l = load_laplacian(&file)?;
            let values = if dense { dense_spectrum(l.matrix())? } else { fiedler(&l, &eigen_options()?)?.ritz_values };
            writeln!(out, "index,eigenvalue")?;
            for (k, v) in values.iter().enumerate() {
                writeln!(out, "{k},{v}")?;
            }
        }
        Command::Fiedler { file } => {
            let l = load_laplacian(&file)?;
            let f = fiedler(&l, &eigen_options()?)?;
            writeln!(out, "vertex,y_value")?;
            for (v, y) in f.y.iter().enumerate() {
                writeln!(out, "{v},{y}")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
