use std::time::Instant;

use lsfactor::hecke::CrudeCase;
use lsfactor::localfield::QuadKind;
use lsfactor::suites::{
    abelian_suite, asai_suite, coefficient_suite, crude_suite, hecke_suite, lambda_suite,
    local_fe_suite, oracle_suite, segment_suite, tempered_suite, unramified_suite, variant_count,
    SuiteReport, UNRAMIFIED_VARIANTS,
};
use lsfactor::Result;

const SEED: u64 = 7;

type Criterion = (usize, &'static str, fn() -> Result<Vec<SuiteReport>>);

fn abelian() -> Result<Vec<SuiteReport>> {
    [2u64, 3, 4, 5]
        .into_iter()
        .map(|q| abelian_suite(q, 200, SEED))
        .collect()
}

fn oracle() -> Result<Vec<SuiteReport>> {
    [2u64, 3, 4, 5]
        .into_iter()
        .map(|q| oracle_suite(q, 200, SEED))
        .collect()
}

fn lambda() -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    for q in [3u64, 5] {
        for kind in [QuadKind::Split, QuadKind::Unramified, QuadKind::Ramified] {
            out.push(lambda_suite(q, kind, 50, SEED)?);
        }
    }
    Ok(out)
}

fn coefficients() -> Result<Vec<SuiteReport>> {
    [3u64, 5]
        .into_iter()
        .map(|q| coefficient_suite(q, 6, SEED))
        .collect()
}

fn local_fe() -> Result<Vec<SuiteReport>> {
    (0..variant_count(3)?)
        .map(|v| local_fe_suite(3, v, 100, SEED))
        .collect()
}

fn unramified() -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    for q in [2u64, 3] {
        for v in 0..UNRAMIFIED_VARIANTS {
            out.push(unramified_suite(q, v, 100, SEED)?);
        }
    }
    out.push(asai_suite(3, 40, SEED)?);
    Ok(out)
}

fn tempered() -> Result<Vec<SuiteReport>> {
    Ok(vec![tempered_suite(3, 100, SEED)?])
}

fn global_fe() -> Result<Vec<SuiteReport>> {
    Ok(vec![hecke_suite(2, 4)?, hecke_suite(3, 3)?])
}

fn crude() -> Result<Vec<SuiteReport>> {
    Ok(vec![
        crude_suite(CrudeCase::Sl2, 24)?,
        crude_suite(CrudeCase::So3, 24)?,
        crude_suite(CrudeCase::Gl11, 24)?,
        crude_suite(CrudeCase::UEven, 12)?,
        crude_suite(CrudeCase::UOdd, 12)?,
    ])
}

fn segments() -> Result<Vec<SuiteReport>> {
    Ok(vec![segment_suite(3, 3, SEED)?, segment_suite(5, 3, SEED)?])
}

fn minimum_met(id: usize, parts: &[SuiteReport]) -> bool {
    let at_least = |n: usize| parts.iter().all(|p| p.cases >= n);
    match id {
        1 | 2 => at_least(200),
        3 => at_least(50),
        5 | 6 => parts
            .iter()
            .filter(|p| !p.name.starts_with("asai"))
            .all(|p| p.cases >= 100),
        7 => at_least(100),
        9 => parts[..3].iter().all(|p| p.cases >= 20) && parts[3..].iter().all(|p| p.cases >= 10),
        10 => at_least(9),
        _ => at_least(1),
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "abelian identities", abelian),
        (2, "zeta-integral oracle", oracle),
        (3, "lambda factors", lambda),
        (4, "rank one and multiplicativity", coefficients),
        (5, "local functional equation and twist law", local_fe),
        (6, "unramified identities", unramified),
        (7, "tempered holomorphy", tempered),
        (8, "global functional equation", global_fe),
        (9, "crude functional equation", crude),
        (10, "segment L-factors", segments),
    ];
    let results: Vec<(usize, &str, Result<Vec<SuiteReport>>, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(id, name, run)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let out = run();
                    (id, name, out, start.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion thread panicked"))
            .collect()
    });
    let mut all_pass = true;
    for (id, name, outcome, secs) in results {
        match outcome {
            Ok(parts) => {
                let cases: usize = parts.iter().map(|p| p.cases).sum();
                let failures: Vec<&String> = parts.iter().flat_map(|p| &p.failures).collect();
                let ok = failures.is_empty() && minimum_met(id, &parts);
                all_pass &= ok;
                println!(
                    "criterion {id:>2} {}: {name} ({cases} cases, {} failed, {secs:.1}s)",
                    if ok { "PASS" } else { "FAIL" },
                    failures.len()
                );
                for f in failures.iter().take(5) {
                    println!("    {f}");
                }
            }
            Err(e) => {
                all_pass = false;
                println!("criterion {id:>2} FAIL: {name} (error: {e})");
            }
        }
    }
    if !all_pass {
        std::process::exit(1);
    }
}
