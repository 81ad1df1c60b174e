use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use repmeasure_core::bounds::{check_bounds, eq1_grid, random_grid, sweep, thm2_grid, BoundCheck};
use repmeasure_core::cdawg::{stats, CdawgJson, CdawgStats};
use repmeasure_core::generators::{Family, Sidecar};
use repmeasure_core::text::escape_symbols;
use repmeasure_core::{
    build_cdawg, list_maximal_repeats, measures, FamilySpec, MeasureReport, Oracle, RepeatRecord,
    Symbol, Text,
};
use serde::Serialize;

use crate::{Cli, Command, Format, Input, OracleSource, SweepGrid};

const VIOLATION: u8 = 1;

pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Measure {
            input,
            format,
            list_repeats,
            max_occurrences,
        } => measure(&input, format, list_repeats, max_occurrences),
        Command::Gen {
            family,
            k,
            sigma,
            n,
            seed,
            out,
        } => gen(family, k, sigma, n, seed, &out),
        Command::Verify {
            input,
            format,
            inject_bogus_report,
        } => verify(&input, format, inject_bogus_report),
        Command::CdawgStats {
            input,
            terminator,
            format,
            dump,
        } => cdawg_stats(&input, terminator, format, dump),
        Command::Sweep { grid, format, out } => run_sweep(&grid, format, out.as_deref()),
        Command::OracleCheck {
            source,
            max_n,
            sigmas,
            seed,
        } => oracle_check(&source, Oracle::with_cap(cli.cap), max_n, &sigmas, seed),
    }
}

fn read_text(path: Option<&Path>, inline: Option<&str>) -> Result<Text> {
    match (path, inline) {
        (Some(path), _) => {
            let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
            Text::from_bytes(&bytes).with_context(|| format!("{}: cannot measure", path.display()))
        }
        (None, Some(s)) => Text::from_bytes(s.as_bytes()).context("--text: cannot measure"),
        (None, None) => bail!("no input given"),
    }
}

fn load(input: &Input) -> Result<Text> {
    read_text(input.path.as_deref(), input.text.as_deref())
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn ratio_display(report: &MeasureReport) -> String {
    let approx = *report.ratio.numer() as f64 / *report.ratio.denom() as f64;
    format!("{} ({approx:.4})", report.ratio)
}

#[derive(Serialize)]
struct RepeatJson {
    repeat: String,
    start: usize,
    len: usize,
    occurrence_count: usize,
    occurrences: Vec<usize>,
    left_ext: Vec<String>,
    right_ext: Vec<String>,
}

impl RepeatJson {
    fn new(t: &Text, r: &RepeatRecord, max_occurrences: usize) -> Self {
        let escape_set = |set: &std::collections::BTreeSet<Symbol>| {
            set.iter().map(|&s| escape_symbols(&[s])).collect()
        };
        RepeatJson {
            repeat: escape_symbols(t.slice(r.repeat)),
            start: r.repeat.start,
            len: r.repeat.len,
            occurrence_count: r.occurrences.len(),
            occurrences: r.occurrences.iter().copied().take(max_occurrences).collect(),
            left_ext: escape_set(&r.left_ext),
            right_ext: escape_set(&r.right_ext),
        }
    }
}

#[derive(Serialize)]
struct MeasureWithRepeats {
    report: MeasureReport,
    repeats: Vec<RepeatJson>,
}

fn measure(input: &Input, format: Format, list_repeats: bool, max_occurrences: usize) -> Result<ExitCode> {
    let text = load(input)?;
    let report = measures(&text);
    if list_repeats && format == Format::Csv {
        bail!("--list-repeats needs --format json or human");
    }
    let repeats = if list_repeats {
        list_maximal_repeats(&text)
            .iter()
            .map(|r| RepeatJson::new(&text, r, max_occurrences))
            .collect()
    } else {
        Vec::new()
    };
    match format {
        Format::Json if list_repeats => print_json(&MeasureWithRepeats { report, repeats })?,
        Format::Json => print_json(&report)?,
        Format::Csv => {
            println!("n,sigma,mr,er,el,ratio");
            println!(
                "{},{},{},{},{},{}",
                report.n, report.sigma, report.mr, report.er, report.el, report.ratio
            );
        }
        Format::Human => {
            println!("n      {}", report.n);
            println!("sigma  {}", report.sigma);
            println!("mr     {}", report.mr);
            println!("er     {}", report.er);
            println!("el     {}", report.el);
            println!("el/er  {}", ratio_display(&report));
            for r in &repeats {
                let mut occ = r.occurrences.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
                if r.occurrence_count > r.occurrences.len() {
                    occ.push_str(",...");
                }
                println!(
                    "\"{}\"  occ={} [{occ}]  left={{{}}}  right={{{}}}",
                    r.repeat,
                    r.occurrence_count,
                    r.left_ext.join(","),
                    r.right_ext.join(",")
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Builds a spec from the flags, rejecting flags the family does not take.
fn family_spec(
    family: Family,
    k: Option<usize>,
    sigma: Option<usize>,
    n: Option<usize>,
    seed: Option<u64>,
) -> Result<FamilySpec> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| anyhow!("{} needs --{flag}", family.name()));
    let takes = match family {
        Family::Eq1Tk => ["k"].as_slice(),
        Family::Thm2 => &["k", "sigma"],
        Family::Random => &["n", "sigma", "seed"],
        _ => &["n"],
    };
    for (flag, given) in [
        ("k", k.is_some()),
        ("sigma", sigma.is_some()),
        ("n", n.is_some()),
        ("seed", seed.is_some()),
    ] {
        if given && !takes.contains(&flag) {
            bail!("{} does not take --{flag}", family.name());
        }
    }
    Ok(match family {
        Family::Eq1Tk => FamilySpec::Eq1 { k: need(k, "k")? },
        Family::Thm2 => FamilySpec::Thm2 {
            k: need(k, "k")?,
            sigma: need(sigma, "sigma")?,
        },
        Family::Random => FamilySpec::Random {
            n: need(n, "n")?,
            sigma: need(sigma, "sigma")?,
            seed: seed.unwrap_or(0),
        },
        Family::Unary => FamilySpec::Unary { n: need(n, "n")? },
        Family::AllDistinct => FamilySpec::AllDistinct { n: need(n, "n")? },
        Family::Fibonacci => FamilySpec::Fibonacci { n: need(n, "n")? },
        Family::ThueMorse => FamilySpec::ThueMorse { n: need(n, "n")? },
    })
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

fn gen(
    family: Family,
    k: Option<usize>,
    sigma: Option<usize>,
    n: Option<usize>,
    seed: Option<u64>,
    out: &Path,
) -> Result<ExitCode> {
    let spec = family_spec(family, k, sigma, n, seed)?;
    let text = spec.generate()?;
    let bytes = text
        .to_bytes()
        .ok_or_else(|| anyhow!("{spec} uses {} symbols, more than a byte file can hold", text.sigma()))?;
    let sidecar = Sidecar::for_spec(&spec, &text)?;
    let json = serde_json::to_string_pretty(&sidecar)?;
    fs::write(out, &bytes).with_context(|| format!("cannot write {}", out.display()))?;
    let side = sidecar_path(out);
    fs::write(&side, format!("{json}\n")).with_context(|| format!("cannot write {}", side.display()))?;
    println!("{json}");
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct CheckJson {
    name: &'static str,
    lower: Option<String>,
    value: String,
    bound: String,
    strict: bool,
    holds: bool,
    slack: String,
}

impl From<&BoundCheck> for CheckJson {
    fn from(c: &BoundCheck) -> Self {
        CheckJson {
            name: c.name,
            lower: c.lower.map(|r| r.to_string()),
            value: c.lhs.to_string(),
            bound: c.rhs.to_string(),
            strict: c.strict,
            holds: c.holds,
            slack: c.slack.to_string(),
        }
    }
}

#[derive(Serialize)]
struct VerifyJson {
    report: MeasureReport,
    all_hold: bool,
    checks: Vec<CheckJson>,
}

fn verify(input: &Input, format: Format, inject_bogus_report: bool) -> Result<ExitCode> {
    let text = load(input)?;
    let mut report = measures(&text);
    if inject_bogus_report {
        eprintln!("note: replacing the measured report with el = 2n");
        report = MeasureReport::new(report.n, report.sigma, report.mr, report.er, 2 * report.n);
    }
    let verdict = check_bounds(&report);
    match format {
        Format::Json => print_json(&VerifyJson {
            report,
            all_hold: verdict.all_hold(),
            checks: verdict.checks.iter().map(CheckJson::from).collect(),
        })?,
        Format::Csv => {
            println!("name,lower,value,bound,strict,holds");
            for c in &verdict.checks {
                let lower = c.lower.map(|r| r.to_string()).unwrap_or_default();
                println!("{},{lower},{},{},{},{}", c.name, c.lhs, c.rhs, c.strict, c.holds);
            }
        }
        Format::Human => {
            println!("n={} sigma={} mr={} er={} el={}", report.n, report.sigma, report.mr, report.er, report.el);
            for c in &verdict.checks {
                println!("{c}");
            }
        }
    }
    let violated: Vec<&str> = verdict.violations().map(|c| c.name).collect();
    if violated.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    for name in violated {
        eprintln!("violated: {name}");
    }
    Ok(ExitCode::from(VIOLATION))
}

#[derive(Serialize)]
struct CdawgOutput {
    n: usize,
    terminator: Symbol,
    #[serde(flatten)]
    stats: CdawgStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<CdawgJson>,
}

fn cdawg_stats(input: &Input, terminator: Option<u8>, format: Format, dump: bool) -> Result<ExitCode> {
    let text = load(input)?;
    let text = match terminator {
        Some(b) => text.with_terminator(Some(Symbol::from(b)))?,
        None if text.has_terminator() => text,
        None => text.with_terminator(None)?,
    };
    let cdawg = build_cdawg(&text)?;
    cdawg.validate()?;
    let stats = match stats(&cdawg, &text) {
        Ok(s) => s,
        Err(err) => {
            eprintln!("mismatch: {err}");
            return Ok(ExitCode::from(VIOLATION));
        }
    };
    let output = CdawgOutput {
        n: text.len(),
        terminator: text.symbols()[text.len() - 1],
        stats,
        graph: dump.then(|| cdawg.to_json()),
    };
    match format {
        Format::Json => print_json(&output)?,
        Format::Csv => {
            println!("n,terminator,node_count,edge_count,total_label_length,er,mr");
            println!(
                "{},{},{},{},{},{},{}",
                output.n, output.terminator, stats.node_count, stats.edge_count, stats.total_label_length, stats.er, stats.mr
            );
        }
        Format::Human => {
            println!("text      {} symbols, terminator {}", output.n, escape_symbols(&[output.terminator]));
            println!("nodes     {} (mr + 1 = {})", stats.node_count, stats.mr + 1);
            println!("edges     {} (er = {})", stats.edge_count, stats.er);
            println!("labels    {} symbols in total", stats.total_label_length);
            if dump {
                for e in cdawg.edges() {
                    println!("{} -\"{}\"-> {}", e.from, escape_symbols(cdawg.label(e)), e.to);
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn sweep_specs(grid: &SweepGrid) -> Vec<FamilySpec> {
    let explicit = !grid.eq1_k.is_empty() || !grid.thm2_n.is_empty() || grid.random_n.is_some();
    if !explicit {
        let mut specs = eq1_grid(&[4, 8, 16, 32, 64]);
        specs.extend(thm2_grid(&[4096], &[2, 8, 64, 512]));
        return specs;
    }
    let mut specs = eq1_grid(&grid.eq1_k);
    let thm2_sigmas = if grid.thm2_sigma.is_empty() {
        vec![2, 8, 64, 512]
    } else {
        grid.thm2_sigma.clone()
    };
    specs.extend(thm2_grid(&grid.thm2_n, &thm2_sigmas));
    if let Some(n) = grid.random_n {
        let sigmas = if grid.random_sigma.is_empty() {
            vec![2, 4, 16]
        } else {
            grid.random_sigma.clone()
        };
        for sigma in sigmas {
            specs.extend(random_grid(n, sigma, 0..grid.random_seeds));
        }
    }
    specs
}

fn run_sweep(grid: &SweepGrid, format: Format, out: Option<&Path>) -> Result<ExitCode> {
    let outcome = sweep(&sweep_specs(grid));
    let mut buf = Vec::new();
    match format {
        Format::Csv => outcome.write_csv(&mut buf)?,
        Format::Json => {
            buf = outcome.to_json()?.into_bytes();
            buf.push(b'\n');
        }
        Format::Human => {
            for row in &outcome.rows {
                let r = row.to_record();
                writeln!(
                    buf,
                    "{:<40} n={:<7} sigma={:<5} mr={:<6} er={:<7} el={:<7} ratio={:.4} bound={:.4} tightness={:.4}",
                    row.spec.to_string(),
                    r.n,
                    r.sigma_actual,
                    r.mr,
                    r.er,
                    r.el,
                    r.ratio,
                    r.bound,
                    r.tightness
                )?;
            }
        }
    }
    match out {
        Some(path) => fs::write(path, &buf).with_context(|| format!("cannot write {}", path.display()))?,
        None => io::stdout().write_all(&buf)?,
    }
    if outcome.failures.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    for f in &outcome.failures {
        eprintln!("failed: {}: {}", f.spec, f.error);
    }
    Ok(ExitCode::from(VIOLATION))
}

/// Offset, hex and printable columns, 16 symbols per line. Symbols wider
/// than a byte are printed as 4-digit hex words.
fn hex_dump(t: &Text) -> String {
    let wide = t.to_bytes().is_none();
    let mut out = String::new();
    for (line, chunk) in t.symbols().chunks(16).enumerate() {
        let _ = write!(out, "{:08x} ", line * 16);
        for &s in chunk {
            if wide {
                let _ = write!(out, " {s:04x}");
            } else {
                let _ = write!(out, " {s:02x}");
            }
        }
        if !wide {
            let pad = (16 - chunk.len()) * 3;
            let ascii: String = chunk
                .iter()
                .map(|&s| match u8::try_from(s) {
                    Ok(b) if b.is_ascii_graphic() || b == b' ' => char::from(b),
                    _ => '.',
                })
                .collect();
            let _ = write!(out, "{:pad$}  |{ascii}|", "");
        }
        out.push('\n');
    }
    out
}

/// Compares oracle and engine on one text; the error string describes the
/// first difference.
fn cross_check(oracle: &Oracle, t: &Text) -> Result<Result<(), String>> {
    let expected = oracle.enumerate_maximal_repeats(t)?;
    let report = measures(t);
    if report != expected.report {
        return Ok(Err(format!("oracle {:?}, engine {report:?}", expected.report)));
    }
    let repeats = list_maximal_repeats(t);
    if repeats != expected.repeats {
        let strings = |rs: &[RepeatRecord]| -> Vec<String> {
            rs.iter().map(|r| escape_symbols(t.slice(r.repeat))).collect()
        };
        return Ok(Err(format!(
            "repeat sets differ: oracle {:?}, engine {:?}",
            strings(&expected.repeats),
            strings(&repeats)
        )));
    }
    Ok(Ok(()))
}

fn random_instance(i: u64, base_seed: u64, max_n: usize, sigmas: &[usize]) -> FamilySpec {
    FamilySpec::Random {
        n: 1 + (i as usize % max_n),
        sigma: sigmas[i as usize % sigmas.len()],
        seed: base_seed.wrapping_add(i),
    }
}

fn family_instances(max_n: usize, sigmas: &[usize]) -> Vec<FamilySpec> {
    let mut specs: Vec<FamilySpec> = (1..)
        .map(|k| FamilySpec::Eq1 { k })
        .take_while(|s| s.predict().ok().flatten().is_some_and(|p| p.n as usize <= max_n))
        .collect();
    for &sigma in sigmas {
        let mut k = 1;
        while sigma * (k + 2) <= max_n {
            specs.push(FamilySpec::Thm2 { k, sigma });
            k += 1;
        }
    }
    for n in 1..=max_n {
        specs.push(FamilySpec::Unary { n });
        if n <= 256 {
            specs.push(FamilySpec::AllDistinct { n });
        }
        specs.push(FamilySpec::Fibonacci { n });
        specs.push(FamilySpec::ThueMorse { n });
    }
    specs
}

fn oracle_check(
    source: &OracleSource,
    oracle: Oracle,
    max_n: usize,
    sigmas: &[usize],
    seed: u64,
) -> Result<ExitCode> {
    if max_n == 0 || sigmas.is_empty() {
        bail!("--max-n and --sigmas must be nonempty");
    }
    let start = Instant::now();
    let mut checked = 0u64;
    let mut check = |label: String, t: &Text| -> Result<bool> {
        checked += 1;
        match cross_check(&oracle, t)? {
            Ok(()) => Ok(true),
            Err(diff) => {
                println!("FAIL {label}: {diff}");
                println!("reproducer ({} symbols):", t.len());
                print!("{}", hex_dump(t));
                Ok(false)
            }
        }
    };

    let all_pass = if source.path.is_some() || source.text.is_some() {
        let t = read_text(source.path.as_deref(), source.text.as_deref())?;
        check("input".into(), &t)?
    } else if let Some(count) = source.random {
        let mut ok = true;
        for i in 0..count {
            let spec = random_instance(i, seed, max_n, sigmas);
            if !check(spec.to_string(), &spec.generate()?)? {
                ok = false;
                break;
            }
        }
        ok
    } else if source.families {
        let mut ok = true;
        for spec in family_instances(max_n, sigmas) {
            if !check(spec.to_string(), &spec.generate()?)? {
                ok = false;
                break;
            }
        }
        ok
    } else if let Some(minutes) = source.minutes {
        let budget = Duration::try_from_secs_f64(minutes * 60.0).context("--minutes must be a finite, nonnegative number")?;
        let mut ok = true;
        let mut i = 0;
        while start.elapsed() < budget {
            let spec = random_instance(i, seed, max_n, sigmas);
            if !check(spec.to_string(), &spec.generate()?)? {
                ok = false;
                break;
            }
            i += 1;
        }
        ok
    } else {
        bail!("no oracle-check source given");
    };

    let elapsed = start.elapsed();
    if all_pass {
        println!("pass: {checked} instances in {:.2}s", elapsed.as_secs_f64());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("fail after {checked} instances");
        Ok(ExitCode::from(VIOLATION))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_dump_layout() {
        let t = Text::from_bytes(b"ab\x00").unwrap();
        assert_eq!(hex_dump(&t), format!("00000000  61 62 00{}  |ab.|\n", " ".repeat(39)));
    }

    #[test]
    fn family_flags_are_checked() {
        assert!(family_spec(Family::Eq1Tk, Some(3), None, None, None).is_ok());
        assert!(family_spec(Family::Eq1Tk, Some(3), Some(2), None, None).is_err());
        assert!(family_spec(Family::Thm2, Some(3), None, None, None).is_err());
        assert_eq!(
            family_spec(Family::Random, None, Some(4), Some(10), None).unwrap(),
            FamilySpec::Random { n: 10, sigma: 4, seed: 0 }
        );
    }

    #[test]
    fn family_grid_respects_max_n() {
        let specs = family_instances(30, &[2, 3]);
        assert!(specs.iter().all(|s| s.generate().unwrap().len() <= 30));
        assert!(specs.contains(&FamilySpec::Eq1 { k: 6 }));
        assert!(!specs.contains(&FamilySpec::Eq1 { k: 7 }));
    }
}
