use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use conjlab::arith::{self, IntSet};
use conjlab::corpus::{self, GroupSpec, ScanConfig};
use conjlab::invariants::{self, classify_rp};
use conjlab::perm::{Group, DEFAULT_ELEMENT_CAP, DEFAULT_NORMAL_BUDGET};
use conjlab::theorem::{verify_main_theorem, LemmaConfig, LemmaStatus, Verdict, VerifyConfig};

const EXIT_COUNTEREXAMPLE: u8 = 3;
const EXIT_FAILURE: u8 = 2;

/// Conjugacy-class-size analysis of finite permutation groups.
#[derive(Parser)]
#[command(name = "conjlab", version)]
struct Cli {
    /// Largest group the enumerator will build.
    #[arg(long, global = true, env = "CONJLAB_CAP", default_value_t = DEFAULT_ELEMENT_CAP,
          value_parser = positive)]
    cap: usize,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print class-size invariants of a group.
    Analyze {
        /// Group spec such as `frobenius:5,4`, or a path to a .grp file.
        group: String,
    },
    /// Run the decomposition verifier and lemma suite on one group.
    Verify {
        group: String,
        #[command(flatten)]
        run: RunArgs,
        /// Report every decomposition found, not just the first.
        #[arg(long)]
        all: bool,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify every group of a corpus and write JSONL records.
    Scan {
        /// `builtin`, or a directory of .grp files.
        #[arg(long, default_value = "builtin")]
        corpus: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = positive)]
        jobs: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Build the divisibility digraph of a set of integers.
    Gamma {
        /// Comma-separated positive integers.
        #[arg(long)]
        set: String,
        /// Write the digraph in DOT format here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Node budget for normal-subgroup enumeration.
    #[arg(long, default_value_t = DEFAULT_NORMAL_BUDGET, value_parser = positive_u64)]
    budget: u64,
    /// Tuples checked per lemma before switching to sampling.
    #[arg(long, default_value_t = 10_000, value_parser = positive)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep phase timings (and scan timestamps) in the output.
    #[arg(long)]
    timings: bool,
}

impl RunArgs {
    fn verify_config(&self, all: bool) -> VerifyConfig {
        VerifyConfig {
            normal_budget: self.budget,
            all_decompositions: all,
            lemmas: Some(LemmaConfig {
                seed: self.seed,
                sample_budget: self.samples,
                normal_budget: self.budget,
                ..LemmaConfig::default()
            }),
        }
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".to_string()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    positive(s).map(|n| n as u64)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Analyze { group } => analyze(cli, group),
        Command::Verify {
            group,
            run,
            all,
            out,
        } => verify(cli, group, run, *all, out.as_deref()),
        Command::Scan {
            corpus,
            out,
            jobs,
            run,
        } => scan(cli, corpus, out, *jobs, run),
        Command::Gamma { set, dot } => gamma(cli, set, dot.as_deref()),
    }
}

/// A spec string, or failing that an existing file path.
fn resolve(group: &str) -> Result<GroupSpec> {
    group.parse::<GroupSpec>().or_else(|e| {
        if Path::new(group).is_file() {
            Ok(GroupSpec::File(PathBuf::from(group)))
        } else {
            Err(e.into())
        }
    })
}

fn build(cli: &Cli, group: &str) -> Result<(GroupSpec, Group)> {
    let spec = resolve(group)?;
    let g = spec.build(cli.cap)?;
    Ok((spec, g))
}

fn analyze(cli: &Cli, group: &str) -> Result<u8> {
    let (spec, g) = build(cli, group)?;
    let n = invariants::class_size_set(&g);
    let nontrivial = n.sizes.without(1);
    let primes = arith::prime_divisors(g.order() as u64)?;
    let (maximal, minimal, separated) = if nontrivial.is_empty() {
        (None, None, None)
    } else {
        (
            Some(arith::max_elements(&nontrivial)?),
            Some(arith::min_elements(&nontrivial)?),
            Some(arith::is_separated(&nontrivial)?),
        )
    };
    let components = arith::weak_components(&nontrivial);
    let mut per_prime = Vec::new();
    for &p in &primes {
        per_prime.push((p, invariants::g_double_norm_p(&g, p)?, classify_rp(&g, p)?));
    }
    let factorizations = arith::find_hypothesis_factorizations(&n.sizes)?;

    if cli.json {
        let value = json!({
            "group": spec.to_string(),
            "order": g.order(),
            "degree": g.degree(),
            "class_sizes": n,
            "max_elements": maximal,
            "min_elements": minimal,
            "separated": separated,
            "gamma_components": components,
            "primes": per_prime.iter().map(|(p, norm, c)| json!({
                "p": p,
                "largest_p_part": norm,
                "rp": c,
            })).collect::<Vec<_>>(),
            "factorizations": factorizations,
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
        return Ok(0);
    }

    let optional = |s: &Option<IntSet>| s.as_ref().map_or("-".to_string(), ToString::to_string);
    println!("group: {spec}");
    println!("order: {}", g.order());
    println!("degree: {}", g.degree());
    println!("class sizes: {}", n.sizes);
    let counts: Vec<String> = n
        .multiplicities
        .iter()
        .map(|(size, count)| format!("{size}x{count}"))
        .collect();
    println!("classes per size: {}", counts.join(" "));
    println!("maximal under divisibility: {}", optional(&maximal));
    println!("minimal under divisibility: {}", optional(&minimal));
    println!(
        "separated: {}",
        separated.map_or("-".to_string(), |s| s.to_string())
    );
    let parts: Vec<String> = components
        .iter()
        .map(|c| format!("{{{}}}", join(c)))
        .collect();
    println!("gamma components: {} {}", components.len(), parts.join(" "));
    for (p, norm, c) in &per_prime {
        let alpha = c.alpha.map_or(String::new(), |a| format!(" alpha={a}"));
        println!("p={p}: largest p-part {norm}, {:?}{alpha}", c.status);
    }
    if factorizations.is_empty() {
        println!("factorization candidates: none");
    }
    for f in &factorizations {
        println!("factorization candidate: omega={} n={}", f.omega, f.n);
    }
    Ok(0)
}

fn verify(cli: &Cli, group: &str, run: &RunArgs, all: bool, out: Option<&Path>) -> Result<u8> {
    let (spec, g) = build(cli, group)?;
    let mut report = verify_main_theorem(&g, &spec.to_string(), &run.verify_config(all))?;
    if !run.timings {
        report.timings.clear();
    }
    let text = serde_json::to_string_pretty(&report)?;
    if let Some(path) = out {
        fs::write(path, format!("{text}\n"))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if cli.json {
        println!("{text}");
    } else {
        println!("group: {spec} (order {})", report.group_order);
        println!("class sizes: {}", report.n_of_g.sizes);
        println!("verdict: {:?}", report.verdict);
        for d in &report.decompositions {
            println!(
                "decomposition: |A|={} N(A)={} |B|={} N(B)={{1,{}}} n prime power: {}",
                d.a.order, d.a.class_sizes, d.b.order, d.n, d.n_is_prime_power
            );
        }
        for (name, outcome) in &report.lemma_results {
            let note = outcome
                .note
                .as_deref()
                .map_or(String::new(), |n| format!(" ({n})"));
            println!(
                "lemma {name}: {:?}, {} checked{}{note}",
                outcome.status,
                outcome.checked,
                if outcome.exhaustive || outcome.status == LemmaStatus::Skipped {
                    ""
                } else {
                    ", sampled"
                }
            );
        }
    }
    Ok(match report.verdict {
        Verdict::Counterexample => EXIT_COUNTEREXAMPLE,
        _ => 0,
    })
}

fn corpus_specs(corpus: &str) -> Result<Vec<GroupSpec>> {
    if corpus == "builtin" {
        return Ok(corpus::builtin_corpus());
    }
    let dir = Path::new(corpus);
    if !dir.is_dir() {
        bail!("corpus `{corpus}` is neither `builtin` nor a directory");
    }
    let mut specs = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {corpus}"))? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "grp") {
            specs.push(GroupSpec::File(path));
        }
    }
    specs.sort();
    Ok(specs)
}

fn scan(cli: &Cli, corpus_name: &str, out: &Path, jobs: usize, run: &RunArgs) -> Result<u8> {
    let specs = corpus_specs(corpus_name)?;
    // Fail on an unwritable path before spending time on the scan.
    fs::write(out, "").with_context(|| format!("writing {}", out.display()))?;
    let config = ScanConfig {
        cap: cli.cap,
        verify: run.verify_config(false),
        timings: run.timings,
    };
    let records = corpus::scan(&specs, &config, jobs);
    corpus::write_records(out, &records)?;

    let count = |v: Verdict| {
        records
            .iter()
            .filter(|r| r.report.as_ref().is_some_and(|rep| rep.verdict == v))
            .count()
    };
    let errors = records.iter().filter(|r| r.error.is_some()).count();
    let counterexamples = count(Verdict::Counterexample);
    let summary = json!({
        "records": records.len(),
        "verified": count(Verdict::VerifiedDecomposition),
        "hypothesis_not_met": count(Verdict::HypothesisNotMet),
        "counterexamples": counterexamples,
        "errors": errors,
    });
    if cli.json {
        println!("{summary}");
    } else {
        println!(
            "{} records: {} verified, {} hypothesis not met, {} counterexamples, {} errors",
            records.len(),
            summary["verified"],
            summary["hypothesis_not_met"],
            counterexamples,
            errors
        );
        for r in records.iter().filter(|r| r.error.is_some()) {
            println!(
                "error in {}: {}",
                r.spec,
                r.error.as_deref().unwrap_or_default()
            );
        }
    }
    Ok(if counterexamples > 0 {
        EXIT_COUNTEREXAMPLE
    } else {
        0
    })
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn gamma(cli: &Cli, set: &str, dot: Option<&Path>) -> Result<u8> {
    let values = set
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .with_context(|| format!("`{}` is not a positive integer", s.trim()))
        })
        .collect::<Result<Vec<_>>>()?;
    let set = IntSet::from_values(values)?;
    let graph = arith::divisibility_digraph(&set)?;
    let components = graph.weak_components();
    if let Some(path) = dot {
        fs::write(path, graph.to_dot()).with_context(|| format!("writing {}", path.display()))?;
    }
    if cli.json {
        let value = json!({
            "vertices": graph.vertices,
            "edges": graph.edges,
            "components": components,
        });
        println!("{value}");
    } else {
        let parts: Vec<String> = components
            .iter()
            .map(|c| format!("{{{}}}", join(c)))
            .collect();
        println!("components: {} {}", components.len(), parts.join(" "));
    }
    Ok(0)
}
