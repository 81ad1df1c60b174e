//! Acceptance gate. Each test prints one `[PASS]` / `[FAIL]` line for its
//! criterion; run with `--nocapture` to see them.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use repmeasure_core::bounds::{check_bounds, eq1_grid, ratio_bound, sweep, thm2_grid};
use repmeasure_core::cdawg::stats;
use repmeasure_core::generators::{gen_eq1, gen_thm2, Regime};
use repmeasure_core::oracle::{build_reference_cdawg, enumerate_maximal_repeats};
use repmeasure_core::{
    build_cdawg, list_maximal_repeats, measures, FamilySpec, MeasureReport, Rational, Symbol, Text,
};

fn verdict_line(id: u32, title: &str, pass: bool, detail: &str) {
    let mark = if pass { "PASS" } else { "FAIL" };
    println!("[{mark}] criterion {id}: {title} -- {detail}");
}

fn gate(id: u32, title: &str, pass: bool, detail: String) {
    verdict_line(id, title, pass, &detail);
    assert!(pass, "criterion {id} failed: {detail}");
}

fn example_text() -> Text {
    // ♦ ♥ ♣ ♠ mapped to 1 2 3 4.
    Text::from_bytes(b"1a2ab3abc4abcd").unwrap()
}

/// Generated instances with n <= 200 over every family; σ ∈ {2, 3, 4, 8}
/// where the family has an alphabet parameter.
fn generated_corpus() -> Vec<FamilySpec> {
    let mut specs = Vec::new();
    for k in 1..=18 {
        specs.push(FamilySpec::Eq1 { k });
    }
    for sigma in [2, 3, 4, 8] {
        for k in 1..=(200 / sigma - 2) {
            specs.push(FamilySpec::Thm2 { k, sigma });
        }
    }
    for n in 1..=200 {
        specs.push(FamilySpec::Unary { n });
        specs.push(FamilySpec::AllDistinct { n });
        specs.push(FamilySpec::Fibonacci { n });
        specs.push(FamilySpec::ThueMorse { n });
    }
    for sigma in [2, 3, 4, 8] {
        for seed in 0..250u64 {
            let n = 1 + (seed as usize * 37) % 200;
            specs.push(FamilySpec::Random { n, sigma, seed });
        }
    }
    specs
}

/// Uniform-random texts independent of the generator module.
fn uniform_random_corpus(count: usize) -> Vec<Text> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_acce);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=200usize);
            let sigma = [2u16, 3, 4, 8][rng.gen_range(0..4usize)];
            let symbols: Vec<Symbol> = (0..n).map(|_| rng.gen_range(0..sigma)).collect();
            Text::from_symbols(symbols).unwrap()
        })
        .collect()
}

fn criterion2_texts() -> Vec<Text> {
    let mut texts: Vec<Text> = generated_corpus()
        .iter()
        .map(|s| s.generate().unwrap())
        .collect();
    texts.extend(uniform_random_corpus(500));
    texts
}

fn reversal_holds(t: &Text) -> bool {
    measures(t).el == measures(&t.reversed()).er
}

#[test]
fn criterion_1_worked_example() {
    let t = example_text();
    let report = measures(&t);
    let repeats = list_maximal_repeats(&t);
    let strings: Vec<&[Symbol]> = repeats.iter().map(|r| t.slice(r.repeat)).collect();
    let expected_strings: Vec<Vec<Symbol>> = ["", "a", "ab", "abc"]
        .iter()
        .map(|s| s.bytes().map(Symbol::from).collect())
        .collect();
    let right: Vec<usize> = repeats.iter().map(|r| r.right_count()).collect();
    let left: Vec<usize> = repeats.iter().map(|r| r.left_count()).collect();

    // Warm up, then take the median of repeated timings.
    let mut times: Vec<Duration> = (0..21)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(measures(std::hint::black_box(&t)));
            start.elapsed()
        })
        .collect();
    times.sort();
    let median = times[times.len() / 2];

    let exact = (report.mr, report.er, report.el) == (4, 14, 17)
        && strings.iter().map(|s| s.to_vec()).collect::<Vec<_>>() == expected_strings
        && right == [8, 2, 2, 2]
        && left == [8, 4, 3, 2];
    let fast = median < Duration::from_millis(1);
    gate(
        1,
        "worked example reproduction",
        exact && fast,
        format!(
            "mr={} er={} el={} right={right:?} left={left:?} median={median:?}",
            report.mr, report.er, report.el
        ),
    );
}

#[test]
fn criterion_2_oracle_equivalence() {
    let start = Instant::now();
    let specs = generated_corpus();
    let generated = specs.len();
    let texts = criterion2_texts();
    let mismatches: Vec<String> = texts
        .par_iter()
        .filter_map(|t| {
            let oracle = enumerate_maximal_repeats(t).unwrap();
            let fast = measures(t);
            let fast_repeats = list_maximal_repeats(t);
            if fast != oracle.report || fast_repeats != oracle.repeats {
                Some(format!("{t:?}"))
            } else {
                None
            }
        })
        .collect();
    let elapsed = start.elapsed();
    let pass = generated >= 2000 && mismatches.is_empty() && elapsed < Duration::from_secs(120);
    gate(
        2,
        "oracle equivalence",
        pass,
        format!(
            "{generated} generated + 500 uniform instances, {} mismatches, {elapsed:?}; first: {:?}",
            mismatches.len(),
            mismatches.first()
        ),
    );
}

#[test]
fn criterion_3_upper_bound_soundness() {
    let mut reports: Vec<MeasureReport> = criterion2_texts().par_iter().map(measures).collect();
    let corpus = reports.len();
    reports.extend((1..=100).map(|k| measures(&gen_eq1(k).unwrap().0)));
    let thm2 = thm2_grid(
        &[100, 1_000, 10_000, 100_000],
        &[2, 3, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 4096, 16384],
    );
    let thm2_reports: Vec<MeasureReport> = thm2
        .par_iter()
        .map(|s| measures(&s.generate().unwrap()))
        .collect();
    let thm2_count = thm2_reports.len();
    reports.extend(thm2_reports);

    let violations: Vec<String> = reports
        .iter()
        .filter_map(|r| {
            let v = check_bounds(r);
            (!v.all_hold()).then(|| format!("{r:?}: {:?}", v.violations().next()))
        })
        .collect();
    gate(
        3,
        "upper-bound inequalities hold everywhere",
        violations.is_empty(),
        format!(
            "{} reports ({corpus} corpus, 100 eq1, {thm2_count} thm2), {} violations {:?}",
            reports.len(),
            violations.len(),
            violations.first()
        ),
    );
}

#[test]
fn criterion_4_eq1_sqrt_growth() {
    let ks = [4usize, 8, 16, 32, 64];
    let ratios: Vec<Rational> = ks
        .iter()
        .map(|&k| measures(&gen_eq1(k).unwrap().0).ratio)
        .collect();
    let mut pass = true;
    let mut detail = Vec::new();
    for (&k, &ratio) in ks.iter().zip(&ratios) {
        let k_r = Rational::from_integer(k as i128);
        let in_band = ratio >= k_r / 8 && ratio <= k_r;
        pass &= in_band;
        detail.push(format!("k={k}: ratio={ratio} in [k/8,k]={in_band}"));
    }
    for (pair, w) in ks.windows(2).zip(ratios.windows(2)) {
        let growth = w[1] / w[0];
        let ok = growth >= Rational::new(3, 2) && growth <= Rational::new(5, 2);
        pass &= ok;
        detail.push(format!(
            "ratio({})/ratio({})={:.4} in [1.5,2.5]={ok}",
            pair[1],
            pair[0],
            *growth.numer() as f64 / *growth.denom() as f64
        ));
    }
    gate(4, "eq1 ratio grows like sqrt(n)", pass, detail.join("; "));
}

#[test]
fn criterion_5_thm2_tightness_across_regimes() {
    let n = 4096;
    let mut pass = true;
    let mut regimes = BTreeSet::new();
    let mut detail = Vec::new();
    for sigma in [2usize, 8, 64, 512] {
        let spec = FamilySpec::thm2_for_length(n, sigma);
        let t = spec.generate().unwrap();
        let r = measures(&t);
        let tightness = r.ratio / ratio_bound(r.n, r.sigma);
        let ok = tightness >= Rational::new(1, 8);
        pass &= ok;
        let regime = if sigma * sigma >= n { Regime::NOverSigma } else { Regime::Sigma };
        regimes.insert(format!("{regime:?}"));
        detail.push(format!(
            "sigma={sigma} (actual {}) n={} tightness={:.4} ok={ok}",
            r.sigma,
            r.n,
            *tightness.numer() as f64 / *tightness.denom() as f64
        ));
    }
    pass &= regimes.len() == 2;
    gate(5, "thm2 tightness >= 1/8 in both regimes", pass, detail.join("; "));
}

#[test]
fn criterion_6_closed_form_fidelity() {
    // The forms as stated: eq1 er = 4k-2, el = 2k + k(k+1)/2 - 1;
    // thm2 er = 2k+2σ-1, el = (k-1)(σ+1)+2σ+2 (σ ≥ 2).
    let eq1 = |k: u64| (4 * k - 2, 2 * k + k * (k + 1) / 2 - 1);
    let thm2 = |k: u64, s: u64| (2 * k + 2 * s - 1, (k - 1) * (s + 1) + 2 * s + 2);

    let mut failures = Vec::new();
    let mut oracle_checked = 0;
    let mut index_checked = 0;

    // Confirm with the oracle first.
    for k in 1..=18u64 {
        let (t, p) = gen_eq1(k as usize).unwrap();
        let r = enumerate_maximal_repeats(&t).unwrap().report;
        oracle_checked += 1;
        if (r.er, r.el) != eq1(k) || !p.matches(&r) {
            failures.push(format!("oracle eq1 k={k}: {r:?}"));
        }
    }
    for sigma in 2..=10u64 {
        for k in 1..=(200 / sigma - 2) {
            let (t, p) = gen_thm2(k as usize, sigma as usize).unwrap();
            let r = enumerate_maximal_repeats(&t).unwrap().report;
            oracle_checked += 1;
            if (r.er, r.el) != thm2(k, sigma) || !p.matches(&r) {
                failures.push(format!("oracle thm2 k={k} sigma={sigma}: {r:?}"));
            }
        }
    }

    // Then every in-cap parameter through the index.
    for k in 1..=127u64 {
        let (t, p) = gen_eq1(k as usize).unwrap();
        let r = measures(&t);
        index_checked += 1;
        if (r.er, r.el) != eq1(k) || !p.matches(&r) {
            failures.push(format!("index eq1 k={k}: {r:?}"));
        }
    }
    for sigma in 2..=666u64 {
        for k in 1.. {
            if sigma * (k + 2) > 2000 {
                break;
            }
            let (t, p) = gen_thm2(k as usize, sigma as usize).unwrap();
            let r = measures(&t);
            index_checked += 1;
            if (r.er, r.el) != thm2(k, sigma) || !p.matches(&r) {
                failures.push(format!("index thm2 k={k} sigma={sigma}: {r:?}"));
            }
        }
    }
    gate(
        6,
        "closed-form predictions match",
        failures.is_empty(),
        format!(
            "{oracle_checked} oracle + {index_checked} index checks, {} failures {:?}",
            failures.len(),
            failures.first()
        ),
    );
}

#[test]
fn criterion_7_cdawg_correspondence() {
    let mut texts: Vec<Text> = generated_corpus()
        .iter()
        .filter_map(|s| s.generate().ok())
        .filter(|t| t.len() < 200)
        .filter_map(|t| t.with_terminator(None).ok())
        .collect();
    texts.retain(|t| t.len() <= 200);
    let instances = texts.len();

    let failures: Vec<String> = texts
        .par_iter()
        .filter_map(|t| {
            let c = build_cdawg(t).ok()?;
            let reference = build_reference_cdawg(t).unwrap();
            let sizes = stats(&c, t).is_ok();
            let iso = c.is_label_isomorphic(&reference) && c.validate().is_ok();
            (!(sizes && iso)).then(|| format!("{t:?} sizes={sizes} iso={iso}"))
        })
        .collect();
    let built = texts.iter().filter(|t| build_cdawg(t).is_ok()).count();

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut pattern_mismatches = 0;
    let patterns = 10_000;
    for i in 0..patterns {
        let t = &texts[i % texts.len()];
        let c = build_cdawg(t).unwrap();
        let s = t.symbols();
        let pattern: Vec<Symbol> = if rng.gen_bool(0.5) {
            let start = rng.gen_range(0..s.len());
            let len = rng.gen_range(0..=(s.len() - start).min(12));
            let mut p = s[start..start + len].to_vec();
            if !p.is_empty() && rng.gen_bool(0.3) {
                let j = rng.gen_range(0..p.len());
                p[j] = s[rng.gen_range(0..s.len())];
            }
            p
        } else {
            let len = rng.gen_range(0..6);
            (0..len).map(|_| s[rng.gen_range(0..s.len())]).collect()
        };
        let naive = pattern.is_empty() || s.windows(pattern.len()).any(|w| w == pattern.as_slice());
        if c.contains(&pattern) != naive {
            pattern_mismatches += 1;
        }
    }

    gate(
        7,
        "cdawg edges = er, nodes = mr + 1, isomorphic to reference",
        instances >= 500 && built == instances && failures.is_empty() && pattern_mismatches == 0,
        format!(
            "{instances} instances, {} failures {:?}, {patterns} patterns with {pattern_mismatches} mismatches",
            failures.len(),
            failures.first()
        ),
    );
}

#[test]
fn criterion_8_reversal_identity() {
    let mut texts = criterion2_texts();
    texts.extend((1..=100).map(|k| gen_eq1(k).unwrap().0));
    texts.extend(
        thm2_grid(&[100, 1_000, 10_000, 100_000], &[2, 3, 4, 8, 16, 64, 256, 1024])
            .iter()
            .map(|s| s.generate().unwrap()),
    );
    texts.extend([4, 8, 16, 32, 64].map(|k| gen_eq1(k).unwrap().0));
    texts.extend([2, 8, 64, 512].map(|s| FamilySpec::thm2_for_length(4096, s).generate().unwrap()));
    let failures = texts.par_iter().filter(|t| !reversal_holds(t)).count();
    gate(
        8,
        "el(T) = er(reverse(T))",
        failures == 0,
        format!("{} texts, {failures} failures", texts.len()),
    );
}

#[test]
fn criterion_9_scale() {
    const TEN_MB: usize = 10 * 1024 * 1024;
    let mut pass = true;
    let mut detail = Vec::new();
    for spec in [
        FamilySpec::Random {
            n: TEN_MB,
            sigma: 16,
            seed: 9,
        },
        FamilySpec::Fibonacci { n: TEN_MB },
    ] {
        let t = spec.generate().unwrap();
        let start = Instant::now();
        let report = measures(&t);
        let holds = check_bounds(&report).all_hold();
        let elapsed = start.elapsed();
        let ok = holds && elapsed < Duration::from_secs(60);
        pass &= ok;
        detail.push(format!(
            "{}: n={} mr={} er={} el={} bounds={holds} in {elapsed:?}",
            spec.family(),
            report.n,
            report.mr,
            report.er,
            report.el
        ));
    }
    gate(9, "10 MB inputs under 60 s", pass, detail.join("; "));
}

#[test]
fn sweep_artifacts_cover_both_families() {
    let mut specs = eq1_grid(&[4, 8, 16, 32, 64]);
    specs.extend(thm2_grid(&[4096], &[2, 8, 64, 512]));
    let outcome = sweep(&specs);
    assert!(outcome.failures.is_empty());
    assert_eq!(outcome.rows.len(), 9);
    for row in &outcome.rows {
        assert!(row.tightness <= Rational::from_integer(1));
        assert!(row.tightness >= Rational::new(1, 8), "{:?}", row.to_record());
    }
}
