//! `tremble` — command-line surface over the exact equilibrium-refinement
//! toolkit. Every command reads and writes canonical JSON documents and
//! communicates its verdict through the exit code:
//!
//! * 0 — yes / success
//! * 1 — no / refuted
//! * 2 — input error (parse, shape, or precondition failure)
//! * 3 — ambiguous (minmax classification only)

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use tremble_core::corpus;
use tremble_core::document::{
    certify_failure_doc, minmax_report_doc, nash_report_doc, oracle_report_doc,
    perfect2p_report_doc, reduced_game_document, theorem_report_doc, CertificateDocument,
    GameDocument, GameMetadata, ProfileDocument,
};
use tremble_core::game::{check_nash, NashVerdict, PureProfile};
use tremble_core::minmax::{minmax_bounds, normalize_instance, PromiseInstance, PromiseVerdict};
use tremble_core::rational::{parse_rational, Rational};
use tremble_core::reduction::{build_gprime, verify_theorem, TheoremConfig};
use tremble_core::refinement::{
    build_witness_sequence, certify_witness, check_perfect_two_player, epsilon_perfection_oracle,
    verify_certificate, CertifyOutcome, OracleConclusion, TwoPlayerPerfection, DEFAULT_K0_BOUND,
};

#[derive(Parser)]
#[command(
    name = "tremble",
    version,
    about = "Exact certificates for trembling-hand perfection, dominance, and minmax bounds",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check whether a profile is a Nash equilibrium (exit 0 yes, 1 no).
    CheckNash {
        /// Game document.
        game: PathBuf,
        /// Profile document (pure or mixed).
        profile: PathBuf,
    },
    /// Build the ⊥-extension gadget G′ from a 3-player source game.
    Reduce {
        /// Source game document (3 players).
        game: PathBuf,
        /// Threshold r as a rational literal, e.g. "3/2" or "-1/3".
        #[arg(allow_hyphen_values = true)]
        r: String,
        /// Scale payoffs by the denominator of r first, making r integral.
        #[arg(long)]
        normalize: bool,
        /// Write the G′ document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the all-⊥ equilibrium of a G′ document via the σ(t) family
    /// (exit 0 with a certificate document, 1 with the violating action).
    Certify {
        /// G′ document with ⊥ indices recorded in metadata.
        gprime: PathBuf,
        /// Mixed-profile document for the tremble direction τ.
        tau: PathBuf,
        /// Cap for the k0 search.
        #[arg(long, default_value_t = DEFAULT_K0_BOUND)]
        k0_bound: u64,
        /// Write the certificate document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-validate a certificate document against a game document without
    /// rerunning any search (exit 0 valid, 1 invalid).
    VerifyCert {
        /// Game document the certificate refers to.
        game: PathBuf,
        /// Certificate document.
        certificate: PathBuf,
    },
    /// Certified bounds on Player 1's minmax value; with --r, classify the
    /// promise instance (exit 0 yes, 1 no, 3 ambiguous).
    Minmax {
        /// Game document (3 players).
        game: PathBuf,
        /// Grid denominator for the upper-bound search.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        grid: u32,
        /// Threshold to classify against.
        #[arg(long, allow_hyphen_values = true)]
        r: Option<String>,
    },
    /// Two-player perfection test for a Nash equilibrium (exit 0 perfect,
    /// 1 not perfect).
    Perfect2p {
        /// Game document (2 players).
        game: PathBuf,
        /// Equilibrium profile document.
        profile: PathBuf,
    },
    /// Brute-force ε-perfection oracle (exit 0 supported, 1 refuted).
    Oracle {
        /// Game document.
        game: PathBuf,
        /// Equilibrium profile document.
        profile: PathBuf,
        /// Number of levels j = 1..=J with ε_j = 2^(−j).
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=32))]
        levels: u32,
        /// Denominator cap for grid candidates.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
        grid: u32,
    },
    /// Full pipeline: classify the minmax promise, then verify the
    /// matching perfection direction in G′ (exit 0 consistent,
    /// 1 inconsistent, 3 ambiguous).
    VerifyTheorem {
        /// Source game document (3 players).
        game: PathBuf,
        /// Threshold r as a rational literal.
        #[arg(allow_hyphen_values = true)]
        r: String,
        /// Grid denominator for the minmax classifier.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        grid: u32,
        /// Normalize the instance (integral r) before running.
        #[arg(long)]
        normalize: bool,
        /// Size of the fully mixed family on the negative branch.
        #[arg(long, default_value_t = 50)]
        family: usize,
        /// Write the report document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a deterministic game document.
    Gen {
        /// RNG seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Kind: random | constant | dummy.
        #[arg(long, default_value = "random")]
        kind: String,
        /// Action counts, comma-separated (e.g. "2,3,2").
        #[arg(long, default_value = "2,2,2")]
        shape: String,
        /// Smallest integer payoff (random/dummy kinds).
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        lo: i64,
        /// Largest integer payoff (random/dummy kinds).
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        hi: i64,
        /// Player 1 payoff for the constant kind, as a rational literal.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        value: String,
        /// Write the game document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli.cmd) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code);
}

fn read_file(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_game(path: &PathBuf) -> Result<GameDocument, String> {
    GameDocument::parse(&read_file(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_profile(path: &PathBuf) -> Result<ProfileDocument, String> {
    ProfileDocument::parse(&read_file(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_r(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

/// Write the document to `out` when given, otherwise print it.
fn deliver(out: &Option<PathBuf>, doc: String) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, doc).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{doc}");
            Ok(())
        }
    }
}

fn run(cmd: Cmd) -> Result<i32, String> {
    match cmd {
        Cmd::CheckNash { game, profile } => {
            let doc = load_game(&game)?;
            let prof = load_profile(&profile)?.resolve(&doc.game).map_err(|e| e.to_string())?;
            let verdict = check_nash(&doc.game, &prof).map_err(|e| e.to_string())?;
            print!("{}", nash_report_doc(&verdict));
            Ok(match verdict {
                NashVerdict::Yes => 0,
                NashVerdict::No(_) => 1,
            })
        }
        Cmd::Reduce { game, r, normalize, out } => {
            let doc = load_game(&game)?;
            let mut source = doc.game;
            let mut threshold = parse_r(&r)?;
            if normalize {
                let (g, rr) = normalize_instance(&source, &threshold).map_err(|e| e.to_string())?;
                source = g;
                threshold = rr;
            }
            let rg = build_gprime(&source, &threshold).map_err(|e| e.to_string())?;
            let name = doc.metadata.and_then(|m| m.name);
            deliver(&out, reduced_game_document(&rg, name).to_canonical_string())?;
            Ok(0)
        }
        Cmd::Certify { gprime, tau, k0_bound, out } => {
            let doc = load_game(&gprime)?;
            let bots = doc
                .metadata
                .as_ref()
                .and_then(|m| m.bot_index.clone())
                .ok_or_else(|| tremble_core::Error::MissingBotMetadata.to_string())?;
            let mu = PureProfile::new(bots);
            let tau = load_profile(&tau)?.resolve(&doc.game).map_err(|e| e.to_string())?;
            let sigma = build_witness_sequence(&doc.game, &mu, &tau).map_err(|e| e.to_string())?;
            match certify_witness(&doc.game, &mu, &sigma, k0_bound).map_err(|e| e.to_string())? {
                CertifyOutcome::Certified(cert) => {
                    deliver(
                        &out,
                        CertificateDocument::from_certificate(&cert).to_canonical_string(),
                    )?;
                    Ok(0)
                }
                CertifyOutcome::Failed(failure) => {
                    print!("{}", certify_failure_doc(&failure));
                    Ok(1)
                }
            }
        }
        Cmd::VerifyCert { game, certificate } => {
            let doc = load_game(&game)?;
            let cert = CertificateDocument::parse(&read_file(&certificate)?)
                .map_err(|e| format!("{}: {e}", certificate.display()))?
                .to_certificate()
                .map_err(|e| format!("{}: {e}", certificate.display()))?;
            match verify_certificate(&doc.game, &cert) {
                Ok(()) => {
                    println!("{{\"verdict\":\"valid\"}}");
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    println!("{{\"verdict\":\"invalid\"}}");
                    Ok(1)
                }
            }
        }
        Cmd::Minmax { game, grid, r } => {
            let doc = load_game(&game)?;
            let bounds = minmax_bounds(&doc.game, grid).map_err(|e| e.to_string())?;
            match r {
                None => {
                    print!("{}", minmax_report_doc(&bounds, None));
                    Ok(0)
                }
                Some(text) => {
                    let r = parse_r(&text)?;
                    let verdict = if bounds.upper < r {
                        PromiseVerdict::Yes
                    } else if bounds.lower > r {
                        PromiseVerdict::No
                    } else {
                        PromiseVerdict::Ambiguous
                    };
                    print!("{}", minmax_report_doc(&bounds, Some((&r, verdict))));
                    Ok(match verdict {
                        PromiseVerdict::Yes => 0,
                        PromiseVerdict::No => 1,
                        PromiseVerdict::Ambiguous => 3,
                    })
                }
            }
        }
        Cmd::Perfect2p { game, profile } => {
            let doc = load_game(&game)?;
            let prof = load_profile(&profile)?.resolve(&doc.game).map_err(|e| e.to_string())?;
            let outcome = check_perfect_two_player(&doc.game, &prof).map_err(|e| e.to_string())?;
            print!("{}", perfect2p_report_doc(&outcome));
            Ok(match outcome {
                TwoPlayerPerfection::Perfect => 0,
                TwoPlayerPerfection::NotPerfect(_) => 1,
            })
        }
        Cmd::Oracle { game, profile, levels, grid } => {
            let doc = load_game(&game)?;
            let prof = load_profile(&profile)?.resolve(&doc.game).map_err(|e| e.to_string())?;
            let verdict = epsilon_perfection_oracle(&doc.game, &prof, levels, grid)
                .map_err(|e| e.to_string())?;
            print!("{}", oracle_report_doc(&verdict));
            Ok(match verdict.conclusion {
                OracleConclusion::Supported => 0,
                OracleConclusion::RefutedAtLevel(_) => 1,
            })
        }
        Cmd::VerifyTheorem { game, r, grid, normalize, family, out } => {
            let doc = load_game(&game)?;
            let mut source = doc.game;
            let mut threshold = parse_r(&r)?;
            if normalize {
                let (g, rr) = normalize_instance(&source, &threshold).map_err(|e| e.to_string())?;
                source = g;
                threshold = rr;
            }
            let instance = PromiseInstance::new(source, threshold).map_err(|e| e.to_string())?;
            let config = TheoremConfig {
                grid_denominator: grid,
                family_size: family,
                ..TheoremConfig::default()
            };
            let report = verify_theorem(&instance, &config).map_err(|e| e.to_string())?;
            deliver(&out, theorem_report_doc(&report))?;
            Ok(if !report.consistent {
                1
            } else if report.verdict_minmax == PromiseVerdict::Ambiguous {
                3
            } else {
                0
            })
        }
        Cmd::Gen { seed, kind, shape, lo, hi, value, out } => {
            let counts = parse_shape(&shape)?;
            if lo > hi {
                return Err(format!("payoff range {lo}..={hi} is empty"));
            }
            let mut rng = corpus::rng(seed);
            let game = match kind.as_str() {
                "random" => corpus::random_game(&mut rng, &counts, lo, hi),
                "constant" => {
                    let c = parse_r(&value)?;
                    let shape3: [usize; 3] = counts.clone().try_into().map_err(|_| {
                        format!("constant kind needs 3 players, shape gave {}", counts.len())
                    })?;
                    corpus::constant_source(&c, &shape3)
                }
                "dummy" => {
                    if counts.len() != 3 || counts[2] != 1 {
                        return Err(
                            "dummy kind needs shape N,M,1 (third player is the dummy)".to_string()
                        );
                    }
                    corpus::dummy_p3_source(&mut rng, counts[0], counts[1], lo, hi)
                }
                other => return Err(format!("unknown kind {other:?}")),
            };
            let metadata = GameMetadata {
                name: Some(format!("gen-{kind}-{seed}")),
                provenance: Some("gen".to_string()),
                bot_index: None,
                r: None,
            };
            deliver(&out, GameDocument::new(game, Some(metadata)).to_canonical_string())?;
            Ok(0)
        }
    }
}

fn parse_shape(text: &str) -> Result<Vec<usize>, String> {
    let counts: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|e| format!("bad shape {text:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if counts.len() < 2 || counts.contains(&0) {
        return Err(format!("bad shape {text:?}: need at least 2 players, all counts positive"));
    }
    Ok(counts)
}
