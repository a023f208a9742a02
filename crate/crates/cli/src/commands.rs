use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::Serialize;
use serde_json::json;

use sqfree_core::cover::{run_greedy, run_mcf, validate_cover, CappedGreedy};
use sqfree_core::lemma::{
    self, is_informational, k_threshold, sigma_constants, sweep_main, verify_degree_error,
    verify_estimate_c, verify_estimate_c_closed_form, verify_estimates_ab, verify_estimates_de,
    verify_estimates_de_closed_form, verify_main_b_margin, verify_sigma, verify_sigma_display,
    verify_tail_grid, EllSample, SlotCounts,
};
use sqfree_core::oracle::{
    count_maximum_witness_families, empirical_f_cdf, max_independent_set_exact, parse_grid,
    write_cdf_csv,
};
use sqfree_core::report::write_summary_csv;
use sqfree_core::sieve::count_even_squarefree;
use sqfree_core::{EpsilonSet, Error, StrategyKind, VerificationReport};

use crate::args::{Cli, Command, EpsOverride, Format, Strategy, Subject};
use crate::{EXIT_FAIL, EXIT_OK, EXIT_REFUSED, EXIT_USAGE};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(Error::Json(e))
    }
}

pub fn exit_code_for(e: &CliError) -> u8 {
    match e {
        CliError::Usage(_) => EXIT_USAGE,
        CliError::Core(Error::ResourceLimit(_) | Error::RangeTooLarge { .. } | Error::Overflow) => {
            EXIT_REFUSED
        }
        CliError::Core(_) => EXIT_USAGE,
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Main output: the `-o` file, or stdout.
fn sink(cli: &Cli) -> Result<Box<dyn Write>> {
    Ok(match &cli.global.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(mut w: impl Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn json_only(cli: &Cli, command: &str) -> Result<()> {
    if cli.global.format == Some(Format::Csv) {
        return Err(CliError::Usage(format!("{command} only writes json")));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Cover { strategy, cap, n } => cover(cli, *strategy, *cap, *n),
        Command::Verify { .. } => verify(cli),
        Command::Oracle { n, families } => oracle(cli, *n, *families),
        Command::Cdf { n, grid } => cdf(cli, *n, grid),
        Command::Constants => constants(cli),
    }
}

fn cover(cli: &Cli, strategy: Strategy, cap: u32, n: u64) -> Result<u8> {
    if n < 2 {
        return Err(CliError::Usage(format!("cover needs n >= 2, got {n}")));
    }
    let outcome = match strategy {
        Strategy::Greedy => run_greedy(n),
        Strategy::Mcf => run_mcf(n),
        Strategy::CappedGreedy => {
            if cap == 0 {
                return Err(CliError::Usage("--cap must be at least 1".into()));
            }
            CappedGreedy::new(n, Some(cap))
                .segment(cli.global.segment_size)
                .collect()
        }
    };
    let cover = match outcome {
        Ok(c) => c,
        Err(failure) => {
            write_json(io::stdout().lock(), &failure.to_json())?;
            return Ok(EXIT_FAIL);
        }
    };
    let report = validate_cover(&cover)?;
    let csv_to_stdout = cli.global.output.is_none() && cli.global.format == Some(Format::Csv);
    if cli.global.output.is_some() || csv_to_stdout {
        let mut w = sink(cli)?;
        cover.write_csv(&mut w)?;
        w.flush()?;
    }
    let kind = match strategy {
        Strategy::Greedy => StrategyKind::Greedy,
        Strategy::CappedGreedy => StrategyKind::CappedGreedy,
        Strategy::Mcf => StrategyKind::MostConstrainedFirst,
    };
    let mut summary = json!({
        "n": n,
        "strategy": kind,
        "parts": cover.part_count(),
        "valid": report.pass,
    });
    if strategy == Strategy::CappedGreedy {
        summary["cap"] = json!(cap);
    }
    if !report.pass {
        summary["violation"] = json!(report.detail);
    }
    if csv_to_stdout {
        write_json(io::stderr().lock(), &summary)?;
    } else {
        write_json(io::stdout().lock(), &summary)?;
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

fn epsilons(o: &EpsOverride) -> EpsilonSet {
    let d = EpsilonSet::LEMMA;
    EpsilonSet {
        a: o.eps_a.unwrap_or(d.a),
        b: o.eps_b.unwrap_or(d.b),
        c: o.eps_c.unwrap_or(d.c),
        d: o.eps_d.unwrap_or(d.d),
        e: o.eps_e.unwrap_or(d.e),
    }
}

fn verify(cli: &Cli) -> Result<u8> {
    let Command::Verify {
        subject,
        n,
        sweep,
        k,
        exhaustive,
        samples,
        n_max,
        delta,
        eps,
    } = &cli.command
    else {
        unreachable!()
    };
    let eps = epsilons(eps);
    let seed = cli.global.seed;
    let reports: Vec<VerificationReport> = match subject {
        Subject::Main => {
            let n = n.unwrap_or(20_000);
            if n < 1 {
                return Err(CliError::Usage("main needs n >= 1".into()));
            }
            if *sweep {
                if k.is_some() {
                    return Err(CliError::Usage("--k cannot be combined with --sweep".into()));
                }
                main_sweep(n)
            } else {
                let counts = SlotCounts::compute(n);
                let k = k.unwrap_or_else(|| k_threshold(n));
                let (lo, hi) = counts.feasible_thresholds();
                let hi_text = if hi == u64::MAX { "inf".to_string() } else { hi.to_string() };
                let mut feasible = VerificationReport::with_margin(
                    "main-some-k",
                    Some(n),
                    lo as f64,
                    hi as f64,
                    if lo <= hi { 0.0 } else { -1.0 },
                )
                .detail(format!("integer K in [{lo}, {hi_text}] satisfies both halves"));
                if lo > hi {
                    feasible = feasible.fail();
                }
                vec![counts.check_a(k), counts.check_b(k), feasible]
            }
        }
        Subject::EstAb => verify_estimates_ab(n.unwrap_or(lemma::ESTIMATE_THRESHOLD), &eps),
        Subject::EstC => {
            let n = n.unwrap_or(lemma::ESTIMATE_THRESHOLD);
            let sample = if *exhaustive {
                EllSample::Exhaustive
            } else {
                EllSample::Random {
                    count: samples.unwrap_or(1000),
                    seed,
                }
            };
            vec![
                verify_estimate_c(n, &sample, &eps)?,
                verify_estimate_c_closed_form(n, &eps),
            ]
        }
        Subject::EstDe => {
            let n = n.unwrap_or(1_000_000);
            let mut r = verify_estimates_de(n)?;
            r.extend(verify_estimates_de_closed_form(n, &eps));
            r
        }
        Subject::Sigma => {
            let mut r = vec![verify_sigma(n_max.unwrap_or(1_000_000), *delta)?];
            r.extend(verify_sigma_display());
            r
        }
        Subject::DegreeError => vec![verify_degree_error(
            samples.unwrap_or(10_000),
            n_max.unwrap_or(1_000_000),
            seed,
        )?],
        Subject::TailGrid => vec![verify_tail_grid(&eps)?],
        Subject::BMargin => vec![verify_main_b_margin(&eps)],
    };
    let mut w = sink(cli)?;
    match cli.global.format.unwrap_or(Format::Json) {
        Format::Json => write_json(&mut w, &reports)?,
        Format::Csv => {
            write_summary_csv(&mut w, &reports)?;
            w.flush()?;
        }
    }
    let pass = reports.iter().filter(|r| !is_informational(r)).all(|r| r.pass);
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}

fn main_sweep(n: u64) -> Vec<VerificationReport> {
    let s = sweep_main(n);
    let failing = s.failing_n();
    let fixed = VerificationReport::new("main-fixed-k", Some(n), failing.len() as f64, 0.0)
        .witnesses(failing.iter().copied().take(50))
        .detail(format!("{} values of n fail with K = 0.672·2n/π²", failing.len()));
    let some = VerificationReport::new("main-some-k", Some(n), s.infeasible.len() as f64, 0.0)
        .witnesses(s.infeasible.iter().copied().take(50))
        .detail(format!("{} values of n admit no integer K", s.infeasible.len()));
    vec![s.worst_a, s.worst_b, fixed, some]
}

fn oracle(cli: &Cli, n: u64, families: bool) -> Result<u8> {
    json_only(cli, "oracle")?;
    let w = sink(cli)?;
    if families {
        let f = count_maximum_witness_families(n)?;
        write_json(w, &f)?;
        return Ok(if f.evens_maximum { EXIT_OK } else { EXIT_FAIL });
    }
    let set = max_independent_set_exact(n)?;
    let even_count = count_even_squarefree(n);
    let matches = set.size == even_count;
    write_json(
        w,
        &json!({
            "n": n,
            "alpha_independence": set.size,
            "even_count": even_count,
            "match": matches,
            "witness": set.witness,
            "nodes": set.nodes,
        }),
    )?;
    Ok(if matches { EXIT_OK } else { EXIT_FAIL })
}

fn cdf(cli: &Cli, n: u64, grid: &str) -> Result<u8> {
    if n < 3 {
        return Err(CliError::Usage(format!("cdf needs n >= 3, got {n}")));
    }
    let grid = parse_grid(grid)?;
    let points = empirical_f_cdf(n, &grid)?;
    let mut w = sink(cli)?;
    match cli.global.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            write_cdf_csv(&mut w, &points)?;
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<_> = points
                .iter()
                .map(|p| json!({"t": p.t.text, "count": p.count, "total": p.total, "probability": p.probability()}))
                .collect();
            write_json(w, &rows)?;
        }
    }
    Ok(EXIT_OK)
}

fn constants(cli: &Cli) -> Result<u8> {
    json_only(cli, "constants")?;
    let sigma: Vec<_> = [0.0, 0.5, 1.0]
        .into_iter()
        .map(sigma_constants)
        .collect::<std::result::Result<_, _>>()?;
    let displayed: Vec<_> = lemma::displayed_constants()
        .into_iter()
        .map(|c| {
            let pass = c.report().pass;
            json!({"name": c.name, "displayed": c.displayed, "derived": c.derived, "upper": c.upper, "pass": pass})
        })
        .collect();
    let display_checks = verify_sigma_display();
    let pass = display_checks.iter().all(|r| r.pass)
        && displayed.iter().all(|d| d["pass"] == json!(true));
    write_json(
        sink(cli)?,
        &json!({
            "sigma": sigma,
            "sigma_display_checks": display_checks,
            "epsilons": EpsilonSet::LEMMA,
            "zeta3": lemma::ZETA3,
            "displayed": displayed,
        }),
    )?;
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}
