//! Command-line entry point. Exit codes: 0 = pass, 1 = fail, 2 = input
//! error, 3 = incomplete (undecided or capped).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use covercert::arrangement::{a2_equivalence_check, CheckMode, LinearVerdict, QuadricVerdict};
use covercert::certify::{CertifyOptions, EvidenceParams, Verdict};
use covercert::differentials::{
    baselocus_evidence, generate_sigma, sampled_chart_cross_check, verify_bw_factorization,
    verify_chart_compatibility, verify_cramer_annihilation, TwistedSection,
};
use covercert::error::Error;
use covercert::fermat::{standard_lines_exist, FermatCover};
use covercert::io;

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INCOMPLETE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "covercert",
    about = "Exact checks for hyperplane arrangements, Fermat covers, explicit symmetric \
             differentials, and hyperbolicity-threshold certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// General-position checks for an arrangement file.
    Check {
        /// Arrangement file (JSON: n, covectors, optional multiplicities)
        #[arg(long)]
        input: PathBuf,
        /// Also run the quadric general-position check
        #[arg(long)]
        quadrics: bool,
        /// Exhaustive subset check (default)
        #[arg(long, conflicts_with = "randomized")]
        exhaustive: bool,
        /// Randomized subset check; reports undecided unless a witness is found
        #[arg(long, requires = "seed")]
        randomized: bool,
        /// RNG seed for randomized mode
        #[arg(long)]
        seed: Option<u64>,
        /// Trials for randomized mode
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Normalize an arrangement: move a pivot to the coordinate hyperplanes.
    Normalize {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated pivot indices (default: first independent subset)
        #[arg(long)]
        pivot: Option<String>,
        /// Output file (default: print to stdout)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build the Fermat cover of an arrangement.
    Cover {
        #[arg(long)]
        input: PathBuf,
        /// Ramification order m >= 2
        #[arg(long)]
        m: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// Generate a chart expression of the determinantal symmetric differential.
    Differential {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: usize,
        /// Comma-separated relation rows, e.g. 3,4 (default n+1..=2n)
        #[arg(long)]
        rows: Option<String>,
        #[arg(long, default_value_t = 0)]
        chart: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// Verify the differential identities exactly or by finite-field sampling.
    VerifyIdentities {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        rows: Option<String>,
        /// Exact mode: reduce every identity modulo the cover ideal (default)
        #[arg(long, conflicts_with = "sampled")]
        exact: bool,
        /// Sampled mode: cross-check chart expressions at random cover points
        #[arg(long, requires = "seed")]
        sampled: bool,
        /// Sampling prime (default: smallest prime >= 2^20 with p = 1 mod m)
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sampled evidence for the base-locus rank bound on a Fermat cover.
    BaselocusSample {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Existence of standard lines on generic Fermat complete intersections.
    StandardLines {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Degree and multiplicity thresholds of the positivity theorems.
    Thresholds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: Option<u64>,
    },
    /// Certify the stratified hyperbolicity hypotheses of an arrangement.
    Certify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Attach base-locus sampling evidence per stratum
        #[arg(long, requires = "seed")]
        with_evidence: bool,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Cap on the number of strata examined
        #[arg(long, default_value_t = 10_000)]
        strata_cap: u64,
    },
}

fn parse_index_list(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("invalid index {t:?}")))
        })
        .collect()
}

fn build_cover_from_arrangement(path: &PathBuf, m: usize) -> Result<FermatCover, Error> {
    let arr = io::load_arrangement(path)?;
    let na = arr.normalize(None)?;
    FermatCover::build(&na, m)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Check {
            input,
            quadrics,
            exhaustive: _,
            randomized,
            seed,
            trials,
        } => {
            let arr = io::load_arrangement(&input)?;
            let mode = if randomized {
                let seed = seed.expect("clap enforces --seed with --randomized");
                println!("mode: randomized (seed={seed}, trials={trials})");
                CheckMode::Randomized { seed, trials }
            } else {
                CheckMode::Exhaustive
            };
            let lin = arr.check_linear_general_position(mode);
            let mut code = EXIT_PASS;
            match &lin {
                LinearVerdict::Pass => println!("linear general position: pass"),
                LinearVerdict::Fail { witness } => {
                    println!("linear general position: fail (dependent subset {witness:?})");
                    code = EXIT_FAIL;
                }
                LinearVerdict::Undecided => {
                    println!("linear general position: undecided (randomized mode certifies only failures)");
                    code = EXIT_INCOMPLETE;
                }
                LinearVerdict::Insufficient => {
                    println!("linear general position: insufficient (d < n+1)");
                    code = EXIT_INPUT;
                }
            }
            if quadrics && matches!(lin, LinearVerdict::Pass | LinearVerdict::Undecided) {
                match arr.check_quadric_general_position() {
                    QuadricVerdict::Pass => println!("quadric general position: pass"),
                    QuadricVerdict::OnQuadric { rank } => {
                        println!("quadric general position: fail (Veronese rank {rank})");
                        code = EXIT_FAIL;
                    }
                    QuadricVerdict::TooFew { required } => {
                        println!(
                            "quadric general position: fail (too few hyperplanes, need {required})"
                        );
                        code = EXIT_FAIL;
                    }
                }
                // report the square-case determinant test when it applies
                if arr.d() == required_square(arr.n()) {
                    if let Ok(na) = arr.normalize(Some((0..=arr.n()).collect())) {
                        if let Ok(v) = a2_equivalence_check(&na) {
                            println!("pair-product determinant test: {}", verdict_word(v));
                        }
                    }
                }
            }
            Ok(code)
        }

        Command::Normalize {
            input,
            pivot,
            output,
        } => {
            let arr = io::load_arrangement(&input)?;
            let pivot = pivot.as_deref().map(parse_index_list).transpose()?;
            let na = arr.normalize(pivot)?;
            let text = io::canonical_json(&io::normalized_to_file(&na));
            match output {
                Some(path) => {
                    io::write_text_file(&path, &text)?;
                    println!("normalized arrangement written to {}", path.display());
                }
                None => print!("{text}"),
            }
            Ok(EXIT_PASS)
        }

        Command::Cover { input, m, output } => {
            let cov = build_cover_from_arrangement(&input, m)?;
            io::write_text_file(&output, &io::canonical_json(&io::cover_to_file(&cov)))?;
            println!(
                "Fermat cover (n={}, k={}, m={}) written to {}",
                cov.n(),
                cov.k(),
                cov.m(),
                output.display()
            );
            Ok(EXIT_PASS)
        }

        Command::Differential {
            input,
            m,
            rows,
            chart,
            output,
        } => {
            let cov = build_cover_from_arrangement(&input, m)?;
            let rows = match rows {
                Some(s) => parse_index_list(&s)?,
                None => TwistedSection::default_rows(&cov),
            };
            let section = generate_sigma(&cov, &rows, chart)?;
            let twist = (2 * cov.n() + 1) as i64 - m as i64;
            let file = io::DifferentialFile {
                cover: io::cover_to_file(&cov),
                rows: rows.clone(),
                chart,
                twist_exponent: twist,
                symmetric_degree: cov.n(),
                section: io::poly_to_repr(&section),
                pretty: section.to_string(),
            };
            io::write_text_file(&output, &io::canonical_json(&file))?;
            println!(
                "chart-{chart} expression for rows {rows:?} (twist Z^{twist}) written to {}",
                output.display()
            );
            Ok(EXIT_PASS)
        }

        Command::VerifyIdentities {
            input,
            m,
            rows,
            exact: _,
            sampled,
            prime,
            samples,
            seed,
        } => {
            let cov = build_cover_from_arrangement(&input, m)?;
            let rows = match rows {
                Some(s) => parse_index_list(&s)?,
                None => TwistedSection::default_rows(&cov),
            };
            let mut all_ok = true;
            if sampled {
                let seed = seed.expect("clap enforces --seed with --sampled");
                let prime = prime.unwrap_or_else(|| cov.default_prime());
                println!("mode: sampled (prime={prime}, samples={samples}, seed={seed})");
                let sec = TwistedSection::build(&cov, &rows)?;
                let mismatches = sampled_chart_cross_check(&sec, prime, samples, seed)?;
                println!(
                    "chart cross-check at {samples} sampled points: {}",
                    if mismatches == 0 {
                        "pass".to_string()
                    } else {
                        all_ok = false;
                        format!("fail ({mismatches} mismatches)")
                    }
                );
            } else {
                let cramer = verify_cramer_annihilation(&cov, &rows)?;
                println!(
                    "cramer annihilation (rows {rows:?}): {}",
                    verdict_word(cramer)
                );
                all_ok &= cramer;
                let sec = TwistedSection::build(&cov, &rows)?;
                for c in 1..=cov.big_n() {
                    let ok = verify_chart_compatibility(&sec, 0, c)?;
                    println!("chart compatibility (0,{c}): {}", verdict_word(ok));
                    all_ok &= ok;
                }
                let bw = verify_bw_factorization(&cov)?;
                println!(
                    "bw factorization ({} pairs): {}",
                    cov.k() * (cov.n() + 1),
                    verdict_word(bw)
                );
                all_ok &= bw;
            }
            Ok(if all_ok { EXIT_PASS } else { EXIT_FAIL })
        }

        Command::BaselocusSample {
            input,
            m,
            prime,
            samples,
            seed,
        } => {
            let cov = build_cover_from_arrangement(&input, m)?;
            let prime = prime.unwrap_or_else(|| cov.default_prime());
            let report = baselocus_evidence(&cov, prime, samples, seed)?;
            println!("prime={} seed={} samples={}", report.prime, report.seed, report.samples);
            println!(
                "exact bw factorization: {}",
                verdict_word(report.bw_exact)
            );
            println!(
                "rank W >= n certified at every sample, rank B = rank W = n: {}",
                verdict_word(report.rank_failures == 0)
            );
            println!("note: {}", report.note);
            Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
        }

        Command::StandardLines { n, k } => {
            let (exists, witness) = standard_lines_exist(n, k)?;
            if exists {
                let parts = witness.expect("witness accompanies existence");
                let rendered = parts
                    .iter()
                    .map(|p| {
                        format!(
                            "{{{}}}",
                            p.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("|");
                println!("standard lines exist (k <= n-1); witness partition {rendered}");
            } else {
                println!("none exist (k >= n)");
            }
            Ok(EXIT_PASS)
        }

        Command::Thresholds { n, m } => {
            let t = covercert::certify::thresholds(n, m)?;
            print!(
                "d_quadric={} m_min={} component_floor={}",
                t.d_quadric, t.m_min, t.component_floor
            );
            if let Some(d_big) = t.d_big {
                print!(" d_big={d_big}");
            }
            println!();
            Ok(EXIT_PASS)
        }

        Command::Certify {
            input,
            output,
            with_evidence,
            prime,
            samples,
            seed,
            strata_cap,
        } => {
            let arr = io::load_arrangement(&input)?;
            let opts = CertifyOptions {
                evidence: if with_evidence {
                    Some(EvidenceParams {
                        prime,
                        samples,
                        seed: seed.expect("clap enforces --seed with --with-evidence"),
                    })
                } else {
                    None
                },
                strata_cap,
            };
            let cert = covercert::certify::certify_hyperbolicity(&arr, &opts)?;
            io::write_text_file(&output, &io::canonical_json(&cert))?;
            println!(
                "certificate ({} strata) written to {}: {:?}",
                cert.children.len(),
                output.display(),
                cert.verdict
            );
            Ok(match cert.verdict {
                Verdict::Pass => EXIT_PASS,
                Verdict::Fail => EXIT_FAIL,
                Verdict::Incomplete | Verdict::EvidenceOnly => EXIT_INCOMPLETE,
            })
        }
    }
}

fn verdict_word(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn required_square(n: usize) -> usize {
    (n + 2) * (n + 1) / 2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::SamplingBudget { .. } => EXIT_INCOMPLETE,
                Error::SoundnessAlarm(_) => EXIT_FAIL,
                _ => EXIT_INPUT,
            };
            ExitCode::from(code)
        }
    }
}
