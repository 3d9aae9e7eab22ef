//! Acceptance criteria, one line each. Exact comparisons only.
//!
//! A criterion listed in `KNOWN_DISCREPANCIES` is still run and still
//! printed as FAIL; the process only fails if such a criterion starts
//! passing (so the list stays honest) or if any other criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use k1hecke::suites;
use k1hecke::{CheckRecord, GroupKind, RunConfig, Status};

const KNOWN_DISCREPANCIES: &[(&str, &str)] = &[(
    "AC10",
    "for i = 4 the computed η is +(θ(Nx) + θ(Nx)^q): the parameter (s, u) must lie in SL(2), \
     where s^2 = -1, so the sign flips between i = 2 and i = 4; η agrees with φ(s, u) for the \
     determinant-one s at every place",
)];

struct Outcome {
    passed: bool,
    detail: String,
}

fn run(n: usize, q: u32, kind: GroupKind, suites: &[&str], tweak: impl FnOnce(&mut RunConfig)) -> Vec<CheckRecord> {
    let mut cfg = RunConfig::new(n, q, kind);
    cfg.suites = suites.iter().map(|s| s.to_string()).collect();
    tweak(&mut cfg);
    let report = suites::run(&cfg, None, |_, _| {}).expect("valid configuration");
    report.checks
}

fn judge(checks: &[CheckRecord], keep: impl Fn(&CheckRecord) -> bool) -> Outcome {
    let sel: Vec<&CheckRecord> = checks.iter().filter(|c| keep(c)).collect();
    let bad: Vec<&CheckRecord> = sel.iter().copied().filter(|c| c.status != Status::Pass).collect();
    let detail = match bad.first() {
        None => format!("{} checks", sel.len()),
        Some(c) => format!(
            "{}/{} checks failed; first: [{}] {} ({})",
            bad.len(),
            sel.len(),
            c.suite,
            c.id,
            c.witness.as_deref().unwrap_or("-")
        ),
    };
    Outcome { passed: !sel.is_empty() && bad.is_empty(), detail }
}

fn all(_: &CheckRecord) -> bool {
    true
}

fn ac1() -> Outcome {
    let mut checks = Vec::new();
    for (n, q) in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2)] {
        checks.extend(run(n, q, GroupKind::GL, &["radon"], |_| {}));
    }
    judge(&checks, all)
}

fn census(q: u32) -> Vec<CheckRecord> {
    run(2, q, GroupKind::GL, &["census"], |c| c.window = Some(vec![2, 0]))
}

fn ac2() -> Outcome {
    let checks: Vec<CheckRecord> = [2, 3].into_iter().flat_map(census).collect();
    judge(&checks, |c| c.id.starts_with("|V_") || c.id.starts_with("raw transition"))
}

fn ac3() -> Outcome {
    let checks: Vec<CheckRecord> = [2, 3].into_iter().flat_map(census).collect();
    judge(&checks, |c| c.id.starts_with("|A_") || c.id.starts_with("raw double cosets"))
}

fn each_group(qs: &[u32], kinds: &[GroupKind], suites: &[&str], tweak: impl Fn(&mut RunConfig)) -> Vec<CheckRecord> {
    let mut checks = Vec::new();
    for &kind in kinds {
        for &q in qs {
            checks.extend(run(2, q, kind, suites, &tweak));
        }
    }
    checks
}

fn ac4() -> Outcome {
    let mut checks = Vec::new();
    for w in [vec![0, 0], vec![1, 0], vec![2, 0]] {
        checks.extend(each_group(&[2, 3], &[GroupKind::GL, GroupKind::PGL], &["loc-glob"], |c| c.window = Some(w.clone())));
    }
    judge(&checks, all)
}

fn ac5() -> Outcome {
    let checks = each_group(&[2, 3], &[GroupKind::GL, GroupKind::PGL], &["bimodule"], |_| {});
    judge(&checks, all)
}

fn ac6() -> Outcome {
    judge(&each_group(&[2, 3], &[GroupKind::PGL], &["cusp"], |_| {}), all)
}

fn ac7() -> Outcome {
    let mut checks = Vec::new();
    for q in [2, 3] {
        checks.extend(run(1, q, GroupKind::GL, &["gl1-centdiv"], |c| {
            c.window = Some(vec![1]);
            c.degrees = Some(vec![1, 2, 3]);
        }));
    }
    judge(&checks, all)
}

fn ac8() -> Outcome {
    let checks = run(2, 3, GroupKind::PGL, &["centrality"], |c| c.degrees = Some(vec![1, 2, 4]));
    let eq = checks.iter().filter(|c| c.id.contains("cusp equivariance")).count();
    let mut o = judge(&checks, all);
    o.passed &= eq == 6;
    o
}

fn ac9() -> Outcome {
    let checks = run(2, 3, GroupKind::PGL, &["lift-gln"], |_| {});
    let needed = ["η = χ_π(x)", "|Ω_x| = q^2 - q", "dim π = q - 1", "|Ω|χ(x) = dim·c(π,x)", "contradicts χ_π"];
    let mut o = judge(&checks, |c| !c.id.contains("sign InsideS"));
    for k in needed {
        if !checks.iter().any(|c| c.id.contains(k)) {
            o.passed = false;
            o.detail.push_str(&format!("; no check for {k}"));
        }
    }
    o
}

fn ac10() -> Outcome {
    let mut checks = run(2, 3, GroupKind::PGL, &["lift-vanish"], |c| c.degrees = Some(vec![1, 3]));
    for q in [2, 3] {
        checks.extend(run(2, q, GroupKind::PGL, &["lift-degree"], |c| c.degrees = Some(vec![4])));
    }
    // the literal statement: η = -(θ(Nx) + θ(Nx)^q) = χ_Lift(x) = φ
    judge(&checks, |c| !c.id.contains("sign inside s"))
}

fn ac11() -> Outcome {
    judge(&each_group(&[2, 3], &[GroupKind::PGL], &["gln-orbit"], |_| {}), all)
}

fn ac12() -> Outcome {
    let mut checks = Vec::new();
    for (n, q) in [(2, 2), (2, 3), (3, 2)] {
        checks.extend(run(n, q, GroupKind::GL, &["jantzen"], |c| c.trials = Some(500)));
    }
    let mut o = judge(&checks, all);
    o.passed &= checks.iter().all(|c| c.witness.as_deref().is_some_and(|w| w.starts_with("500/500")));
    o
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Outcome); 12] = [
        ("AC1", "Radon transforms invertible and equivariant", ac1),
        ("AC2", "bundle strata censuses", ac2),
        ("AC3", "double coset censuses, stable in precision", ac3),
        ("AC4", "act invertible on windows, graded act = q^e Radon", ac4),
        ("AC5", "bimodule structure and ι", ac5),
        ("AC6", "cuspidal part of V", ac6),
        ("AC7", "GL(1) divisor Hecke eigenvalues", ac7),
        ("AC8", "centrality of divisor Hecke operators", ac8),
        ("AC9", "η = χ_π(x) at places of degree N", ac9),
        ("AC10", "η vanishes for N ∤ i and equals the lifted character for i = 2N", ac10),
        ("AC11", "trivial-stratum correspondence = Ω_x pairs", ac11),
        ("AC12", "Jantzen flags", ac12),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| a.starts_with("AC")).collect();
    let mut unexpected = 0;
    for (id, what, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|a| a == id) {
            continue;
        }
        let t = Instant::now();
        let o = f();
        let secs = t.elapsed().as_secs_f64();
        let known = KNOWN_DISCREPANCIES.iter().find(|(k, _)| *k == id);
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("{id:<5} {verdict} ({secs:.1}s) {what}: {}", o.detail);
        match (o.passed, known) {
            (false, Some((_, why))) => println!("      known discrepancy: {why}"),
            (true, Some(_)) => {
                println!("      listed as a known discrepancy but passed");
                unexpected += 1;
            }
            (false, None) => unexpected += 1,
            (true, None) => {}
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
