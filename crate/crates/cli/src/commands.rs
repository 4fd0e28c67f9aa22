use anyhow::{bail, Result};
use hh2_core::exactlin::is_odd_prime;
use hh2_core::koszulhh::{cup, Pairing};
use hh2_core::operators::build_hhl;
use hh2_core::spadesuit::{build_spade, check_associativity, verify_first_principles, ProductTable};
use hh2_core::{sparse, Lin};

use crate::checks::{self, coefficient_kind, Check, Context};
use crate::report::{BasisRow, ProductRow, Report, Term};

/// Bad user input, reported with exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub fn require_prime(p: u32) -> Result<()> {
    if !is_odd_prime(p) {
        bail!(UsageError(format!("p must be an odd prime, got {p}")));
    }
    Ok(())
}

fn terms(v: &Lin, name: impl Fn(usize) -> String) -> Vec<Term> {
    v.iter().map(|&(t, c)| Term { name: name(t), coeff: c }).collect()
}

pub fn cmd_hh(p: u32, coefficient: &str) -> Result<Report> {
    require_prime(p)?;
    let Some(kind) = coefficient_kind(coefficient) else {
        bail!(UsageError(format!("unknown coefficient {coefficient}")));
    };
    let names: &[&'static str] = if coefficient == "omega" { &["omega"] } else { &["omega", checks::COEFFICIENTS.iter().find(|&&n| n == coefficient).expect("known")] };
    let ctx = Context::with(p, names)?;
    let x = checks::bimodule(&ctx.co, kind);
    let (chi, hx) = (ctx.hh("omega"), ctx.hh(coefficient));
    let mut r = Report::new("hh", p, format!("HH(Ω,{})", x.name)).param("coefficient", coefficient);
    for c in &hx.classes {
        r.basis.push(BasisRow { name: c.name.clone(), a: None, b: None, i: None, j: c.deg.j, k: c.deg.k, h: c.h, idempotent: c.vertex });
    }
    let pairing = if coefficient == "omega" { Pairing::algebra(&ctx.co.omega) } else { Pairing::left_action(x, ctx.co.omega.dim()) };
    for a in 0..chi.dim() {
        for b in 0..hx.dim() {
            let v = cup(chi, &sparse::unit(a), hx, &sparse::unit(b), &pairing, hx)?;
            if !v.is_empty() {
                r.products.push(ProductRow { left: chi.classes[a].name.clone(), right: hx.classes[b].name.clone(), result: terms(&v, |t| hx.classes[t].name.clone()) });
            }
        }
    }
    let p = p as usize;
    let expect = match coefficient {
        "omega" => 3 * p - 2,
        "theta" | "theta-sigma" => 2 * (p - 1),
        _ => p,
    };
    r.push_check(&Check::new("dimension", hx.dim() == expect, format!("{} of {expect}", hx.dim())));
    Ok(r)
}

pub struct SpadeArgs {
    pub p: u32,
    pub a: (i64, i64),
    pub b: (i64, i64),
    pub check_associativity: bool,
    pub verify_first_principles: bool,
}

pub fn cmd_spadesuit(args: &SpadeArgs) -> Result<Report> {
    require_prime(args.p)?;
    if args.a.0 > args.a.1 || args.b.0 > args.b.1 {
        bail!(UsageError("empty window".into()));
    }
    let alg = build_spade(args.p, args.a, args.b)?;
    let mut r = Report::new("spadesuit", args.p, "♠".into())
        .param("a_min", args.a.0)
        .param("a_max", args.a.1)
        .param("b_min", args.b.0)
        .param("b_max", args.b.1);
    for e in &alg.basis {
        r.basis.push(BasisRow { name: e.name(), a: Some(e.a), b: Some(e.b), i: Some(e.i), j: e.j, k: e.k, h: e.h, idempotent: e.x });
    }
    for m in 0..alg.dim() {
        for n in 0..alg.dim() {
            if let Ok(v) = alg.product(m, n) {
                if !v.is_empty() {
                    r.products.push(ProductRow { left: alg.basis[m].name(), right: alg.basis[n].name(), result: terms(&v, |t| alg.basis[t].name()) });
                }
            }
        }
    }
    if args.check_associativity {
        let report = check_associativity(&alg, &ProductTable::new(&alg));
        let c = Check::new(format!("associativity, triples checked: {}", report.triples_checked), report.failures.is_empty(), report.failures.first().map(|&(a, b, c)| format!("{} {} {}", alg.basis[a].name(), alg.basis[b].name(), alg.basis[c].name())).unwrap_or_default());
        r.push_check(&c);
    }
    if args.verify_first_principles {
        let report = verify_first_principles(args.p, 0)?;
        let c = Check::new(
            format!("first principles, pairs checked: {}, mismatches: {}", report.pairs_checked, report.mismatches.len()),
            report.mismatches.is_empty(),
            report.mismatches.first().cloned().unwrap_or_default(),
        );
        r.push_check(&c);
    }
    Ok(r)
}

pub fn cmd_hhl(p: u32, l: usize, k: (i64, i64), products: bool) -> Result<Report> {
    require_prime(p)?;
    if k.0 > k.1 {
        bail!(UsageError(format!("empty k-window {}..={}", k.0, k.1)));
    }
    let h = build_hhl(p, l, k)?;
    let mut r = Report::new("hhl", p, format!("hh_{l}")).param("l", l).param("k_min", k.0).param("k_max", k.1);
    for x in 0..h.dim() {
        r.basis.push(BasisRow { name: h.name(x), a: None, b: None, i: Some(0), j: 0, k: h.basis[x].k, h: h.h(x), idempotent: None });
    }
    if products {
        for x in 0..h.dim() {
            for y in 0..h.dim() {
                if let Ok(v) = h.product(x, y) {
                    if !v.is_empty() {
                        r.products.push(ProductRow { left: h.name(x), right: h.name(y), result: terms(&v, |t| h.name(t)) });
                    }
                }
            }
        }
    }
    Ok(r)
}

pub fn cmd_verify(p: u32) -> Result<Report> {
    require_prime(p)?;
    let mut r = Report::new("verify", p, "invariants".into());
    for c in checks::suite(p)? {
        r.push_check(&c);
    }
    Ok(r)
}
