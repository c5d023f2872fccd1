use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use rotkit::eight::{kneading_prefix, orbit_trace, EightPoint};
use rotkit::infimax::{
    abelianization, build_goober, deviation_profile, estimate_nu, infimax_rational, pf_eigen,
    subst_fixed_prefix, substitution_checkpoints, Substitution,
};
use rotkit::io;
use rotkit::pipeline::{rotation_set, scan};
use rotkit::rational::{parse_rational, Rational};
use rotkit::word::{is_maximal, Maximality};
use rotkit::{DigitWord, FreqVector};

#[derive(Parser)]
#[command(
    name = "rotkit",
    version,
    about = "Certified rotation sets of the figure-eight family"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Svg,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Certified inner/outer rotation set at one parameter.
    Rotset {
        #[arg(long, value_parser = rational)]
        t: Rational,
        /// Order of the finite β-shift model.
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Longest period tried for inner witnesses (defaults to the depth).
        #[arg(long)]
        max_period: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Plateaus of the outer rotation set over a parameter grid.
    Scan {
        #[arg(long, value_parser = rational)]
        from: Rational,
        #[arg(long, value_parser = rational)]
        to: Rational,
        #[arg(long, default_value_t = 256)]
        steps: usize,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long)]
        max_period: Option<usize>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Kneading word at a parameter.
    Knead {
        #[arg(long, value_parser = rational)]
        t: Rational,
        #[arg(long, default_value_t = 64)]
        len: usize,
    },
    /// Rational infimax word for a frequency vector such as 1/2,0,1/2.
    Infimax {
        #[arg(long)]
        alpha: FreqVector,
    },
    /// Deviation growth along a substitution fixed point.
    Deviation {
        #[arg(long, default_value = "0>1;1>200;2>20")]
        subst: Substitution,
        #[arg(long, default_value_t = 2)]
        seed: u8,
        #[arg(long, default_value_t = 100_000)]
        len: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Deviation of a substituted Sturmian word from its drift.
    Goober {
        #[arg(long, default_value = "20")]
        w0: DigitWord,
        #[arg(long, default_value = "21")]
        w1: DigitWord,
        #[arg(long, default_value_t = 1)]
        k0: usize,
        #[arg(long, default_value_t = 1)]
        k1: usize,
        /// Sturmian slope; defaults to (√5−1)/2.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        len: usize,
        /// Distance between reported checkpoints.
        #[arg(long, default_value_t = 1000)]
        every: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Orbit of a point under f_t as CSV.
    Orbit {
        #[arg(long, value_parser = rational)]
        t: Rational,
        /// Starting point, e.g. S1:149/40.
        #[arg(long)]
        x: EightPoint,
        #[arg(long, default_value_t = 100)]
        steps: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

fn rational(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn block(w: &DigitWord) -> Result<Vec<u8>> {
    w.observable_len()
        .map(|n| w.prefix(n))
        .context("goober blocks must be finite words")
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Rotset {
            t,
            depth,
            max_period,
            format,
            out,
        } => {
            let report = rotation_set(&t, depth, max_period.unwrap_or(depth))?;
            let text = match format {
                Format::Json => io::report_json(&report)?,
                Format::Svg => io::report_svg(&report)?,
                Format::Csv => io::report_csv(&report),
            };
            emit(out.as_ref(), &text)
        }
        Command::Scan {
            from,
            to,
            steps,
            depth,
            max_period,
            out,
        } => {
            let list = scan(&from, &to, steps, depth, max_period.unwrap_or(depth))?;
            emit(out.as_ref(), &io::scan_csv(&list))
        }
        Command::Knead { t, len } => {
            let k = kneading_prefix(&t, len)?;
            let prefix: String = k.prefix().iter().map(|d| char::from(b'0' + d)).collect();
            let verdict = match is_maximal(&k.kneading) {
                Maximality::Yes => "maximal".to_string(),
                Maximality::Undecided(d) => format!("maximal to depth {d}"),
                Maximality::No(r) => {
                    anyhow::bail!(rotkit::Error::Internal(format!("not maximal at shift {r}")))
                }
            };
            println!(
                "kneading {}\ntheta {}\nprefix {prefix}\ncertified {verdict}",
                k.kneading, k.theta.word
            );
            Ok(())
        }
        Command::Infimax { alpha } => {
            println!("{}", infimax_rational(&alpha)?);
            Ok(())
        }
        Command::Deviation {
            subst,
            seed,
            len,
            out,
        } => {
            let a = abelianization(&subst);
            let pf = pf_eigen(&a)?;
            let word = subst_fixed_prefix(&subst, seed, len)?;
            let cps = substitution_checkpoints(&a, seed, len);
            let profile = deviation_profile(word.preperiod(), pf.alpha, &cps)?;
            if let Ok(slope) = estimate_nu(&profile) {
                eprintln!("fitted exponent {slope:.6}, predicted {:.6}", pf.nu());
            }
            emit(out.as_ref(), &io::deviation_csv(&profile))
        }
        Command::Goober {
            w0,
            w1,
            k0,
            k1,
            lambda,
            len,
            every,
            out,
        } => {
            let lambda = lambda.unwrap_or((5f64.sqrt() - 1.0) / 2.0);
            let g = build_goober(&block(&w0)?, &block(&w1)?, k0, k1, lambda, len)?;
            let digits = g.word.prefix(len);
            let cps: Vec<usize> = (1..=len / every.max(1)).map(|i| i * every.max(1)).collect();
            let profile = deviation_profile(&digits, g.target, &cps)?;
            eprintln!("block length q = {}, bound 2q = {}", g.q, 2 * g.q);
            emit(out.as_ref(), &io::deviation_csv(&profile))
        }
        Command::Orbit { t, x, steps, out } => {
            emit(out.as_ref(), &io::orbit_csv(&orbit_trace(&t, &x, steps)?))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = matches!(
                e.downcast_ref::<rotkit::Error>(),
                Some(rotkit::Error::Internal(_))
            );
            let io_failure = e.downcast_ref::<std::io::Error>().is_some();
            ExitCode::from(if internal || io_failure { 1 } else { 2 })
        }
    }
}
