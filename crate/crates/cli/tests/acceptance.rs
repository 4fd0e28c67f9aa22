//! One PASS/FAIL line per acceptance criterion.

use std::time::{Duration, Instant};

use anyhow::Result;
use hh2_cli::checks::{self, all, timed, Check, Context};

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn criterion_1() -> Check {
    timed(secs(1), || {
        let ctx = Context::with(5, &["omega"])?;
        Ok(checks::named_degrees(&ctx, "omega"))
    })
}

fn criterion_2() -> Check {
    timed(secs(5), || {
        let ctx = Context::with(5, &["theta", "theta-sigma", "omega-ep-omega", "omega-dual"])?;
        Ok(all("named degrees", ["theta", "theta-sigma", "omega-ep-omega", "omega-dual"].iter().map(|n| checks::named_degrees(&ctx, n)).collect()))
    })
}

fn criterion_3() -> Check {
    timed(secs(30), || {
        let mut v = Vec::new();
        for p in [3, 5, 7] {
            v.push(checks::dimension_laws(&Context::new(p)?));
        }
        Ok(all("dimension laws", v))
    })
}

fn criterion_4() -> Check {
    timed(secs(300), || Ok(all("oracle", vec![checks::oracle_equivalence(&Context::new(3)?, 4)?, checks::oracle_equivalence(&Context::new(5)?, 3)?])))
}

fn for_primes(name: &str, f: impl Fn(&Context) -> Result<Check>) -> Check {
    let run = || -> Result<Check> {
        let mut v = Vec::new();
        for p in [3, 5] {
            v.push(f(&Context::new(p)?)?);
        }
        Ok(all(name, v))
    };
    run().unwrap_or_else(|e| Check::new(name, false, e.to_string()))
}

fn criterion_8() -> Check {
    timed(secs(120), || Ok(all("♠ verification", vec![checks::spade_verification(3)?, checks::spade_verification(5)?])))
}

fn criterion_9() -> Check {
    let run = || -> Result<Check> {
        let mut v = Vec::new();
        for p in [3, 5] {
            v.push(checks::tower_base(&Context::with(p, &["omega"])?)?);
        }
        v.push(checks::projection(3, 2, 12)?);
        Ok(all("tower", v))
    };
    run().unwrap_or_else(|e| Check::new("tower", false, e.to_string()))
}

fn criterion_10() -> Check {
    let run = || -> Result<Check> {
        let mut v = Vec::new();
        for p in [3, 5] {
            v.push(checks::chi_super_commutative(&Context::with(p, &["omega"])?)?);
            v.push(checks::spade_diagonal_super_commutative(p)?);
        }
        for l in 0..=2 {
            v.push(checks::hhl_structure(3, l)?);
        }
        Ok(all("super-commutativity", v))
    };
    run().unwrap_or_else(|e| Check::new("super-commutativity", false, e.to_string()))
}

fn main() {
    let criteria: Vec<(u32, Box<dyn Fn() -> Check>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(criterion_2)),
        (3, Box::new(criterion_3)),
        (4, Box::new(criterion_4)),
        (5, Box::new(|| for_primes("χ presentation", checks::chi_presentation))),
        (6, Box::new(|| for_primes("duality", checks::duality))),
        (7, Box::new(|| checks::club_window(3, -3, 4).unwrap_or_else(|e| Check::new("♣", false, e.to_string())))),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
        (10, Box::new(criterion_10)),
    ];
    let mut failed = Vec::new();
    for (n, run) in criteria {
        let start = Instant::now();
        let c = run();
        println!("criterion {n:>2}: {} ({:.2?}) {}: {}", c.status(), start.elapsed(), c.name, c.detail);
        if !c.passed {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
