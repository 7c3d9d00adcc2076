use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use pkalign::align::{align, brute_force_min_alignment, AlignOptions, DEFAULT_SIZE_LIMIT};
use pkalign::generators::SplitMode;
use pkalign::scoring::approximation_constant;
use pkalign::{decompose, is_decomposable, AlignError, Alphabet, FoldedSequence, GeneratorSet, ScoreScheme};
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::dotbracket::{parse_dotbracket, serialize_alignment};
use crate::sample::random_folded;

#[derive(Parser, Debug)]
#[command(name = "pkalign", version, about = "Structural alignment of pseudoknotted RNA")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimum alignment score of two folded sequences.
    Align {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        scores: ScoresArg,
        /// Print an optimal alignment.
        #[arg(long)]
        traceback: bool,
        /// Only admit splittings with non-empty intervals.
        #[arg(long)]
        strict_proper: bool,
        #[command(flatten)]
        generators: GeneratorsArg,
    },
    /// Whether a structure is decomposable, with a witness tree.
    Decomp {
        a: PathBuf,
        #[command(flatten)]
        generators: GeneratorsArg,
    },
    /// Exact minimum score by exhaustive search.
    Oracle {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        scores: ScoresArg,
        /// Largest admitted total number of bases.
        #[arg(long, default_value_t = DEFAULT_SIZE_LIMIT)]
        max_size: usize,
    },
    /// Memo statistics on random decomposable inputs.
    Bench {
        /// Sizes of the first input.
        #[arg(long, value_delimiter = ',', default_values_t = [4, 6, 8])]
        sizes: Vec<usize>,
        /// Size of the second input; defaults to the first.
        #[arg(long)]
        other: Option<usize>,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Omit wall-clock times, making the output reproducible.
        #[arg(long)]
        no_time: bool,
    },
}

#[derive(Args, Debug)]
struct ScoresArg {
    /// Score-scheme file; the unit scheme when omitted.
    #[arg(long, value_name = "FILE")]
    scores: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GeneratorsArg {
    /// Generator definition file replacing the built-in set.
    #[arg(long, value_name = "FILE")]
    generators: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(message: String) -> Failure {
    Failure { code: 1, message }
}

impl From<AlignError> for Failure {
    fn from(e: AlignError) -> Self {
        let code = if matches!(e, AlignError::TooLarge { .. }) { 2 } else { 1 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_sequence(path: &Path) -> Result<FoldedSequence, Failure> {
    parse_dotbracket(&read(path)?).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_scheme(arg: &ScoresArg) -> Result<ScoreScheme, Failure> {
    match &arg.scores {
        None => Ok(ScoreScheme::unit(Alphabet::rna())),
        Some(p) => ScoreScheme::parse(&read(p)?).map_err(|e| fail(format!("{}: {e}", p.display()))),
    }
}

fn load_generators(arg: &GeneratorsArg) -> Result<GeneratorSet, Failure> {
    match &arg.generators {
        None => Ok(GeneratorSet::builtin()),
        Some(p) => GeneratorSet::parse_definitions(&read(p)?)
            .and_then(GeneratorSet::new)
            .map_err(|e| fail(format!("{}: {e}", p.display()))),
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let io = |e: std::io::Error| fail(e.to_string());
    match command {
        Command::Align {
            a,
            b,
            scores,
            traceback,
            strict_proper,
            generators,
        } => {
            let fs1 = load_sequence(&a)?;
            let fs2 = load_sequence(&b)?;
            let scheme = load_scheme(&scores)?;
            let gens = load_generators(&generators)?;
            if !is_decomposable(fs1.structure(), &gens) && !is_decomposable(fs2.structure(), &gens) {
                let c = approximation_constant(&scheme).map_err(|e| fail(e.to_string()))?;
                writeln!(
                    err,
                    "warning: neither input is decomposable; the score is at most {c} times the minimum"
                )
                .map_err(io)?;
            }
            let options = AlignOptions {
                mode: if strict_proper {
                    SplitMode::StrictProper
                } else {
                    SplitMode::Relaxed
                },
                traceback,
                ..Default::default()
            };
            let r = align(&fs1, &fs2, &scheme, &gens, options)?;
            writeln!(out, "score: {}", r.score).map_err(io)?;
            if let Some(al) = &r.alignment {
                let text = serialize_alignment(al).map_err(|e| fail(e.to_string()))?;
                write!(out, "\n{text}").map_err(io)?;
            }
        }
        Command::Decomp { a, generators } => {
            let fs = load_sequence(&a)?;
            let gens = load_generators(&generators)?;
            match decompose(fs.structure(), &gens) {
                Some(tree) => writeln!(out, "decomposable\nwitness: {tree}").map_err(io)?,
                None => writeln!(out, "not decomposable").map_err(io)?,
            }
        }
        Command::Oracle {
            a,
            b,
            scores,
            max_size,
        } => {
            let fs1 = load_sequence(&a)?;
            let fs2 = load_sequence(&b)?;
            let scheme = load_scheme(&scores)?;
            let (score, _) = brute_force_min_alignment(&fs1, &fs2, &scheme, max_size)?;
            writeln!(out, "score: {score}").map_err(io)?;
        }
        Command::Bench {
            sizes,
            other,
            samples,
            seed,
            no_time,
        } => {
            let gens = GeneratorSet::builtin();
            let scheme = ScoreScheme::unit(Alphabet::rna());
            let mut rng = StdRng::seed_from_u64(seed);
            write!(out, "n1\tn2\tS0\tS1\tsplittings").map_err(io)?;
            if !no_time {
                write!(out, "\tms").map_err(io)?;
            }
            writeln!(out).map_err(io)?;
            for &n1 in &sizes {
                let n2 = other.unwrap_or(n1);
                for _ in 0..samples {
                    let fs1 = random_folded(&mut rng, n1, &gens);
                    let fs2 = random_folded(&mut rng, n2, &gens);
                    let t = Instant::now();
                    let r = align(&fs1, &fs2, &scheme, &gens, AlignOptions::default())?;
                    let ms = t.elapsed().as_secs_f64() * 1e3;
                    let s = r.stats;
                    write!(
                        out,
                        "{n1}\t{n2}\t{}\t{}\t{}",
                        s.s0_entries, s.s1_entries, s.splittings
                    )
                    .map_err(io)?;
                    if !no_time {
                        write!(out, "\t{ms:.1}").map_err(io)?;
                    }
                    writeln!(out).map_err(io)?;
                }
            }
        }
    }
    Ok(())
}
