//! `dposet` command-line front end.
//!
//! Exit codes: 0 success, 1 an identity check failed, 2 usage or input
//! error, 3 budget exhausted.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{ArgGroup, Args, Parser, Subcommand};
use dposet::enumerate::{read_certs, SearchOutcome};
use dposet::format::{read_dpo, write_dpo, write_hg};
use dposet::hypergraph::{
    dimension_sum, enumerate_linear_spaces_with_limit, is_projective_plane, p2_of,
    poset_from_hypergraph, DEFAULT_LINEAR_SPACE_LIMIT,
};
use dposet::numerics::{self, Sequence};
use dposet::walks::{self, applicable_checks, CHECKS};
use dposet::{
    enumerate_posets, search_rank_function, validate_differential, EnumerationOptions, RankFunction,
};

#[derive(Parser, Debug)]
#[command(name = "dposet", version, about = "Differential poset toolkit")]
struct Cli {
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Add ranks with Wagner's construction.
    Extend {
        file: PathBuf,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long)]
        no_validate: bool,
        /// Write elements in canonical order.
        #[arg(long)]
        canonical: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check the differential axioms below the top rank.
    Validate {
        file: PathBuf,
        /// Defaults to the r recorded in the file.
        #[arg(long)]
        r: Option<u32>,
    },
    /// List linear spaces on r points, one per isomorphism class.
    EnumLinspaces {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        spectrum: bool,
        #[arg(long, default_value_t = DEFAULT_LINEAR_SPACE_LIMIT)]
        limit: u32,
    },
    /// Desarguesian projective plane of order q.
    Plane {
        #[arg(long)]
        q: u32,
        /// Print the plane as an .hg file instead of a summary.
        #[arg(long)]
        hg: bool,
    },
    /// Count differential posets rank by rank up to isomorphism.
    EnumPosets {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        ranks: usize,
        /// Only counts are reported (the default unless --certs is given).
        #[arg(long, conflicts_with = "certs")]
        count_only: bool,
        /// Write `rank,cert` lines (hex) to this file.
        #[arg(long)]
        certs: Option<PathBuf>,
        /// Keep each rank's sorted certificates on disk in this directory.
        #[arg(long)]
        spill: Option<PathBuf>,
        #[arg(long)]
        budget_secs: Option<u64>,
    },
    /// Search for a poset with a prescribed rank function.
    Search {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        target: String,
        #[arg(long)]
        budget_secs: Option<u64>,
        /// Write the witness as .dpo.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Walk statistics and identity checks at rank n.
    Walks {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "all")]
        check: String,
    },
    /// Exact sequences and asymptotic probes.
    Numerics(NumericsArgs),
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args([
    "partitions", "yr", "zr", "hr_ratio", "meinardus", "lemma33", "delta", "interval_demo",
])))]
struct NumericsArgs {
    #[arg(long, value_name = "N")]
    partitions: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["R", "N"])]
    yr: Option<Vec<usize>>,
    #[arg(long, num_args = 2, value_names = ["R", "N"])]
    zr: Option<Vec<usize>>,
    #[arg(long, value_name = "N")]
    hr_ratio: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["R", "N"])]
    meinardus: Option<Vec<usize>>,
    #[arg(long, num_args = 2, value_names = ["R", "N"])]
    lemma33: Option<Vec<usize>>,
    #[arg(long, value_name = "T", requires = "seq")]
    delta: Option<usize>,
    /// File of comma- or whitespace-separated integers.
    #[arg(long)]
    seq: Option<PathBuf>,
    #[arg(long)]
    interval_demo: bool,
    #[arg(long)]
    budget_secs: Option<u64>,
}

enum Failure {
    Check(String),
    Usage(String),
    Budget(String),
}

impl From<dposet::Error> for Failure {
    fn from(e: dposet::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, (String, Failure)>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = pool.install(|| run(cli.command));
    let mut stdout = std::io::stdout().lock();
    match result {
        Ok(out) => {
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err((out, failure)) => {
            let _ = stdout.write_all(out.as_bytes());
            let (code, msg) = match failure {
                Failure::Check(m) => (1, m),
                Failure::Usage(m) => (2, m),
                Failure::Budget(m) => (3, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn fail(f: Failure) -> (String, Failure) {
    (String::new(), f)
}

fn usage(msg: impl Into<String>) -> (String, Failure) {
    fail(Failure::Usage(msg.into()))
}

fn read_poset(path: &PathBuf) -> Result<dposet::RankedPoset, (String, Failure)> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    read_dpo(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn budget(secs: Option<u64>) -> Option<Duration> {
    secs.map(Duration::from_secs)
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Extend {
            file,
            r,
            steps,
            no_validate,
            canonical,
            out,
        } => {
            let mut p = read_poset(&file)?.with_r(r);
            for _ in 0..steps {
                p = if no_validate {
                    dposet::wagner::wagner_extend_unchecked(&p, r)
                } else {
                    dposet::wagner_extend(&p, r).map_err(|e| usage(e.to_string()))?
                };
            }
            let text = write_dpo(&p, canonical);
            match out {
                Some(path) => {
                    fs::write(&path, text)
                        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    Ok(format!("rank,size\n{}", rank_rows(&p.rank_function())))
                }
                None => Ok(text),
            }
        }
        Command::Validate { file, r } => {
            let p = read_poset(&file)?;
            let r = r.unwrap_or(p.r());
            let report = validate_differential(&p, r);
            let mut s = String::from("rank,elements,axiom,message\n");
            for v in &report.violations {
                let elems: Vec<String> = v.elements.iter().map(|e| e.to_string()).collect();
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    v.rank,
                    elems.join(" "),
                    v.axiom,
                    v.message.replace(',', ";")
                );
            }
            if report.ok {
                Ok(s)
            } else {
                Err((
                    s,
                    Failure::Check(format!("{} axiom violations", report.violations.len())),
                ))
            }
        }
        Command::EnumLinspaces { r, spectrum, limit } => {
            let classes =
                enumerate_linear_spaces_with_limit(r, limit).map_err(|e| usage(e.to_string()))?;
            let mut s = String::from(if spectrum {
                "class,hyperedges,t1,p2\n"
            } else {
                "class,hyperedges\n"
            });
            for (i, h) in classes.iter().enumerate() {
                let edges: Vec<String> = h
                    .edges()
                    .iter()
                    .map(|e| {
                        e.iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                let _ = write!(s, "{i},{}", edges.join(";"));
                if spectrum {
                    let _ = write!(s, ",{},{}", dimension_sum(h), p2_of(h));
                }
                s.push('\n');
            }
            Ok(s)
        }
        Command::Plane { q, hg } => {
            let h = dposet::hypergraph::desarguesian_plane(q).map_err(|e| usage(e.to_string()))?;
            if hg {
                return Ok(write_hg(&h));
            }
            let order = is_projective_plane(&h);
            let p = poset_from_hypergraph(&h, h.r()).map_err(|e| usage(e.to_string()))?;
            let s = format!(
                "q,points,lines,projective_order,p2\n{q},{},{},{},{}\n",
                h.r(),
                h.edges().len(),
                order.map_or("none".to_string(), |o| o.to_string()),
                p.level_size(2)
            );
            if order == Some(q) {
                Ok(s)
            } else {
                Err((
                    s,
                    Failure::Check(format!(
                        "plane of order {q} failed the projective-plane check"
                    )),
                ))
            }
        }
        Command::EnumPosets {
            r,
            ranks,
            count_only: _,
            certs,
            spill,
            budget_secs,
        } => {
            if r == 0 {
                return Err(usage("--r must be positive"));
            }
            let opts = EnumerationOptions {
                keep_certs: certs.is_some() && spill.is_none(),
                budget: budget(budget_secs),
                spill_dir: spill.clone(),
            };
            let res = enumerate_posets(r, ranks, &opts).map_err(|e| usage(e.to_string()))?;
            let mut s = String::from("rank,count\n");
            for (j, c) in res.counts.iter().enumerate() {
                let _ = writeln!(s, "{j},{c}");
            }
            if let Some(path) = certs {
                let mut dump = String::new();
                let per_rank = match (&res.certs, &spill) {
                    (Some(all), _) => all.clone(),
                    (None, Some(dir)) => (0..res.counts.len())
                        .map(|j| read_certs(&dir.join(format!("rank-{j}.certs"))))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| usage(e.to_string()))?,
                    (None, None) => Vec::new(),
                };
                for (j, list) in per_rank.iter().enumerate() {
                    for c in list {
                        let _ = writeln!(dump, "{j},{}", c.to_hex());
                    }
                }
                fs::write(&path, dump).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            }
            if res.complete {
                Ok(s)
            } else {
                Err((
                    s,
                    Failure::Budget(format!(
                        "budget exhausted after rank {}",
                        res.counts.len() - 1
                    )),
                ))
            }
        }
        Command::Search {
            r,
            target,
            budget_secs,
            out,
        } => {
            let t = RankFunction::parse(&target).map_err(|e| usage(e.to_string()))?;
            let outcome = search_rank_function(r, &t, budget(budget_secs))
                .map_err(|e| usage(e.to_string()))?;
            let s = format!("target,verdict\n\"{t}\",{}\n", outcome.label());
            match outcome {
                SearchOutcome::Found(p) => {
                    if let Some(path) = out {
                        fs::write(&path, write_dpo(&p, true))
                            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    }
                    Ok(s)
                }
                SearchOutcome::DefinitelyNone => Ok(s),
                SearchOutcome::BudgetExceeded => {
                    Err((s, Failure::Budget("search budget exhausted".into())))
                }
            }
        }
        Command::Walks { file, n, check } => {
            let p = read_poset(&file)?;
            if n > p.top_rank() {
                return Err(usage(format!(
                    "--n {n} exceeds the top rank {}",
                    p.top_rank()
                )));
            }
            let names: Vec<&str> = if check == "all" {
                applicable_checks(&p, n)
            } else if let Some(&c) = CHECKS.iter().find(|&&c| c == check) {
                if !applicable_checks(&p, n).contains(&c) {
                    return Err(usage(format!(
                        "check `{c}` needs rank {} to be present",
                        n + 1
                    )));
                }
                vec![c]
            } else {
                return Err(usage(format!(
                    "unknown check `{check}` (expected all or one of {})",
                    CHECKS.join(", ")
                )));
            };
            let mut s = String::from("name,value\n");
            let _ = writeln!(s, "n,{n}");
            if n < p.top_rank() {
                let w = walks::walk_stats(&p, n).map_err(|e| usage(e.to_string()))?;
                for (k, v) in [
                    ("alpha_up", &w.alpha_up),
                    ("alpha_up_down", &w.alpha_up_down),
                    ("kappa4", &w.kappa4),
                    ("sum_c_sq", &w.sum_c_sq),
                    ("sum_e_sq", &w.sum_e_sq),
                    ("alpha_0n", &w.alpha_0n),
                ] {
                    let _ = writeln!(s, "{k},{v}");
                }
            } else {
                let e = walks::chain_counts(&p, n).map_err(|e| usage(e.to_string()))?;
                let sq: num_bigint::BigUint = e[n].iter().map(|x| x * x).sum();
                let total: num_bigint::BigUint = e[n].iter().sum();
                let _ = writeln!(s, "sum_e_sq,{sq}");
                let _ = writeln!(s, "alpha_0n,{total}");
            }
            let mut failed = Vec::new();
            for name in names {
                let ok = walks::run_check(&p, n, name).map_err(|e| usage(e.to_string()))?;
                let _ = writeln!(s, "check_{name},{}", if ok { "pass" } else { "fail" });
                if !ok {
                    failed.push(name);
                }
            }
            if failed.is_empty() {
                Ok(s)
            } else {
                Err((
                    s,
                    Failure::Check(format!("failed checks: {}", failed.join(", "))),
                ))
            }
        }
        Command::Numerics(args) => run_numerics(args),
    }
}

fn rank_rows(rf: &RankFunction) -> String {
    let mut s = String::new();
    for (j, v) in rf.values().iter().enumerate() {
        let _ = writeln!(s, "{j},{v}");
    }
    s
}

fn sequence_rows(seq: &Sequence) -> String {
    let mut s = String::from("n,value\n");
    for (i, v) in seq.values.iter().enumerate() {
        let _ = writeln!(s, "{},{v}", i + seq.offset);
    }
    s
}

fn pair(v: &[usize], flag: &str) -> Result<(u32, usize), (String, Failure)> {
    let r = u32::try_from(v[0]).map_err(|_| usage(format!("{flag}: r too large")))?;
    if r == 0 {
        return Err(usage(format!("{flag}: r must be positive")));
    }
    Ok((r, v[1]))
}

fn run_numerics(a: NumericsArgs) -> Outcome {
    if let Some(n) = a.partitions {
        let seq = numerics::partition_numbers(n).map_err(|e| usage(e.to_string()))?;
        return Ok(sequence_rows(&seq));
    }
    if let Some(v) = &a.yr {
        let (r, n) = pair(v, "--yr")?;
        return Ok(sequence_rows(&numerics::yr_rank_function(r, n)));
    }
    if let Some(v) = &a.zr {
        let (r, n) = pair(v, "--zr")?;
        return Ok(sequence_rows(&numerics::zr_rank_function(r, n)));
    }
    if let Some(n) = a.hr_ratio {
        let est = numerics::hr_log_estimate(n).map_err(|e| usage(e.to_string()))?;
        let p = numerics::partition_numbers(n).map_err(|e| usage(e.to_string()))?;
        let lp = numerics::ln_big(&p.values[n]);
        return Ok(format!(
            "n,log_p,log_estimate,ratio\n{n},{lp:.9},{est:.9},{:.9}\n",
            (lp - est).exp()
        ));
    }
    if let Some(v) = &a.meinardus {
        let (r, n) = pair(v, "--meinardus")?;
        let target = numerics::meinardus_target(r);
        let mut s = String::from("n,log_p_over_sqrt_n,target\n");
        for (m, val) in numerics::meinardus_exponent_check(r, n) {
            let _ = writeln!(s, "{m},{val:.9},{target:.9}");
        }
        return Ok(s);
    }
    if let Some(v) = &a.lemma33 {
        let (r, n) = pair(v, "--lemma33")?;
        return Ok(format!(
            "r,n,log_ratio,log_ratio_saddle\n{r},{n},{:.9},{:.9}\n",
            numerics::lemma33_ratio(r, n),
            numerics::lemma33_ratio_saddle(r, n)
        ));
    }
    if let Some(t) = a.delta {
        let path = a.seq.as_ref().expect("clap enforces --seq");
        let text =
            fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let seq = Sequence::parse(&text).map_err(|e| usage(e.to_string()))?;
        let d = numerics::delta(&seq, t).map_err(|e| usage(e.to_string()))?;
        return Ok(sequence_rows(&d));
    }
    let rep = numerics::interval_demo(budget(a.budget_secs)).map_err(|e| usage(e.to_string()))?;
    let spectrum: Vec<String> = rep.spectrum4.iter().map(|v| v.to_string()).collect();
    let mut s = String::from("claim,verdict,detail\n");
    let _ = writeln!(
        s,
        "p_prime,{},\"{}\"",
        if rep.p_prime_ok { "realized" } else { "fail" },
        rep.p_prime
    );
    let _ = writeln!(
        s,
        "p_triple_prime,{},\"spectrum {} / search {}\"",
        if rep.p_triple_prime_refuted {
            "refuted"
        } else {
            "fail"
        },
        spectrum.join(" "),
        rep.p_triple_prime_search.label()
    );
    let detail = match &rep.p_double_prime {
        SearchOutcome::Found(w) => format!("witness {}", w.rank_function()),
        other => other.label().to_string(),
    };
    let _ = writeln!(
        s,
        "p_double_prime,{},\"{detail}\"",
        if rep.p_double_prime_valid {
            "realized"
        } else {
            rep.p_double_prime.label()
        }
    );
    if rep.all_ok() {
        Ok(s)
    } else if matches!(rep.p_double_prime, SearchOutcome::BudgetExceeded) {
        Err((
            s,
            Failure::Budget("interval demo search budget exhausted".into()),
        ))
    } else {
        Err((s, Failure::Check("interval demo claim failed".into())))
    }
}
