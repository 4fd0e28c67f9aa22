//! Invariant checks shared by `hh2 verify` and the acceptance suite.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use anyhow::Result;
use hh2_core::clubsuit::build_club_window;
use hh2_core::koszulhh::{bar_oracle, build_model, cup, duality_form, homology_named, kz_name, z_name, CoefficientKind, HHModule, Pairing};
use hh2_core::operators::{build_hhl, build_hhl_iterated, Based};
use hh2_core::quiver::{BasedBimodule, Coefficients};
use hh2_core::spadesuit::{build_spade, check_associativity, verify_first_principles, ProductRule, ProductTable};
use hh2_core::{sparse, Field, Lin};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    pub fn status(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }

    /// Fails the check when `elapsed` exceeds `limit`.
    pub fn within(mut self, elapsed: Duration, limit: Duration) -> Self {
        self.detail = format!("{}; {:.2?} (limit {:.0?})", self.detail, elapsed, limit);
        self.passed &= elapsed <= limit;
        self
    }
}

/// Folds a list of checks into one.
pub fn all(name: &str, checks: Vec<Check>) -> Check {
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    let detail = if failed.is_empty() { checks.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", ") } else { failed.join("; ") };
    Check::new(name, failed.is_empty(), detail)
}

/// The coefficient bimodules of HH(Ω, X) with their computed cohomology.
pub struct Context {
    pub p: u32,
    pub co: Coefficients,
    pub modules: BTreeMap<&'static str, HHModule>,
}

pub const COEFFICIENTS: [&str; 5] = ["omega", "theta", "theta-sigma", "omega-dual", "omega-ep-omega"];

pub fn coefficient_kind(name: &str) -> Option<CoefficientKind> {
    Some(match name {
        "omega" => CoefficientKind::Omega,
        "theta" => CoefficientKind::Theta,
        "theta-sigma" => CoefficientKind::ThetaSigma,
        "omega-dual" => CoefficientKind::OmegaDual,
        "omega-ep-omega" => CoefficientKind::Epep,
        _ => return None,
    })
}

impl Context {
    pub fn new(p: u32) -> Result<Self> {
        Self::with(p, &COEFFICIENTS)
    }

    pub fn with(p: u32, names: &[&'static str]) -> Result<Self> {
        let co = Coefficients::new(p)?;
        let mut modules = BTreeMap::new();
        for &name in names {
            let kind = coefficient_kind(name).expect("known coefficient");
            let x = bimodule(&co, kind);
            modules.insert(name, homology_named(build_model(&co.c, &co.omega, x, 0)?, kind)?);
        }
        Ok(Context { p, co, modules })
    }

    pub fn hh(&self, name: &str) -> &HHModule {
        &self.modules[name]
    }

    pub fn field(&self) -> Field {
        self.co.c.field()
    }

    /// Cup product table of χ = HH(Ω).
    pub fn chi_table(&self) -> Result<Vec<Vec<Lin>>> {
        let chi = self.hh("omega");
        let alg = Pairing::algebra(&self.co.omega);
        let mut out = Vec::new();
        for a in 0..chi.dim() {
            let mut row = Vec::new();
            for b in 0..chi.dim() {
                row.push(cup(chi, &sparse::unit(a), chi, &sparse::unit(b), &alg, chi)?);
            }
            out.push(row);
        }
        Ok(out)
    }
}

pub fn bimodule(co: &Coefficients, kind: CoefficientKind) -> &BasedBimodule {
    match kind {
        CoefficientKind::Omega => &co.omega_mod,
        CoefficientKind::Theta => &co.theta,
        CoefficientKind::ThetaSigma => &co.theta_sigma,
        CoefficientKind::OmegaDual => &co.omega_dual,
        CoefficientKind::Epep => &co.epep,
    }
}

fn degrees(h: &HHModule) -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> = h.classes.iter().map(|c| (c.deg.j, c.deg.k)).collect();
    v.sort();
    v
}

fn expand(spec: &[((i64, i64), usize)]) -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> = spec.iter().flat_map(|&(d, n)| std::iter::repeat(d).take(n)).collect();
    v.sort();
    v
}

/// Class bidegrees at p = 5 for each coefficient.
pub fn expected_degrees(name: &str) -> Option<Vec<(i64, i64)>> {
    Some(match name {
        "omega" => expand(&[
            ((2, 0), 4),
            ((0, 0), 1),
            ((0, 1), 1),
            ((-2, 2), 1),
            ((-2, 3), 1),
            ((-4, 4), 1),
            ((-4, 5), 1),
            ((-6, 6), 1),
            ((-6, 7), 1),
            ((-8, 8), 1),
        ]),
        "theta" => expand(&[((2, 0), 4), ((0, 0), 1), ((0, 1), 1), ((-2, 2), 1), ((-2, 3), 1)]),
        "theta-sigma" => expand(&[((1, 0), 1), ((1, 1), 1), ((-1, 2), 1), ((-1, 3), 1), ((-3, 3), 4)]),
        "omega-ep-omega" => expand(&[((-4, 4), 1), ((-4, 5), 1), ((-6, 6), 1), ((-6, 7), 1), ((-8, 8), 1)]),
        _ => return None,
    })
}

/// Named bidegrees at p = 5 against the tabulated ones; Ω* only needs one bidegree with k = 0.
pub fn named_degrees(ctx: &Context, name: &str) -> Check {
    let got = degrees(ctx.hh(name));
    let passed = match expected_degrees(name) {
        Some(expect) => got == expect,
        None => got.len() == ctx.p as usize && got.iter().all(|&d| d == got[0] && d.1 == 0),
    };
    Check::new(format!("HH(Ω,{name}) degrees at p={}", ctx.p), passed, format!("{got:?}"))
}

pub fn dimension_laws(ctx: &Context) -> Check {
    let p = ctx.p as usize;
    let expect = [("omega", 3 * p - 2), ("theta", 2 * (p - 1)), ("theta-sigma", 2 * (p - 1)), ("omega-dual", p), ("omega-ep-omega", p)];
    let got: Vec<(&str, usize, usize)> = expect.iter().map(|&(n, e)| (n, ctx.hh(n).dim(), e)).collect();
    Check::new(format!("dimension laws at p={p}"), got.iter().all(|&(_, g, e)| g == e), format!("{got:?}"))
}

/// Relative bar complex dimensions against the model's h-graded dimensions.
pub fn oracle_equivalence(ctx: &Context, h_max: usize) -> Result<Check> {
    let mut bad = Vec::new();
    for name in COEFFICIENTS {
        let kind = coefficient_kind(name).expect("known");
        let bar = bar_oracle(&ctx.co.omega, bimodule(&ctx.co, kind), h_max)?;
        let mut model = vec![0; h_max + 1];
        for c in &ctx.hh(name).classes {
            if c.h <= h_max {
                model[c.h] += 1;
            }
        }
        if bar != model {
            bad.push(format!("{name}: bar {bar:?} model {model:?}"));
        }
    }
    Ok(Check::new(format!("bar oracle h≤{h_max} at p={}", ctx.p), bad.is_empty(), bad.join("; ")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Monomial {
    Z(usize),
    KZ(usize),
    C(usize),
}

/// χ = F[z, κ, c²_s] modulo κ², z^p, z^{p−1}κ, c²z, c²κ, c²c², in normal form.
fn presented_product(p: usize, a: Monomial, b: Monomial) -> Option<Monomial> {
    use Monomial::*;
    match (a, b) {
        (Z(x), Z(y)) => (x + y < p).then_some(Z(x + y)),
        (Z(x), KZ(y)) | (KZ(x), Z(y)) => (x + y + 1 < p).then_some(KZ(x + y)),
        (Z(0), C(s)) | (C(s), Z(0)) => Some(C(s)),
        _ => None,
    }
}

fn monomial_name(m: Monomial) -> String {
    match m {
        Monomial::Z(l) => z_name(l),
        Monomial::KZ(l) => kz_name(l),
        Monomial::C(s) => format!("c²_{s}"),
    }
}

/// The cup table of χ equals the table of the presented algebra on every basis pair.
pub fn chi_presentation(ctx: &Context) -> Result<Check> {
    let p = ctx.p as usize;
    let chi = ctx.hh("omega");
    let mut monos: Vec<Monomial> = (0..p).map(Monomial::Z).collect();
    monos.extend((0..p - 1).map(Monomial::KZ));
    monos.extend((1..p).map(Monomial::C));
    let idx: Vec<Option<usize>> = monos.iter().map(|&m| chi.find(&monomial_name(m))).collect();
    if idx.iter().any(Option::is_none) || monos.len() != chi.dim() {
        return Ok(Check::new(format!("χ presentation at p={p}"), false, "class names differ from monomials"));
    }
    let table = ctx.chi_table()?;
    let mut bad = Vec::new();
    for (x, &a) in monos.iter().enumerate() {
        for (y, &b) in monos.iter().enumerate() {
            let expect = presented_product(p, a, b).map(|m| sparse::unit(chi.find(&monomial_name(m)).expect("named"))).unwrap_or_default();
            if table[idx[x].expect("named")][idx[y].expect("named")] != expect {
                bad.push(format!("{}·{}", monomial_name(a), monomial_name(b)));
            }
        }
    }
    Ok(Check::new(format!("χ presentation at p={p}, {} pairs", monos.len().pow(2)), bad.is_empty(), bad.join(", ")))
}

pub fn chi_super_commutative(ctx: &Context) -> Result<Check> {
    let chi = ctx.hh("omega");
    let f = ctx.field();
    let t = ctx.chi_table()?;
    let mut bad = 0;
    for a in 0..chi.dim() {
        for b in 0..chi.dim() {
            let s = f.sign(chi.classes[a].deg.k * chi.classes[b].deg.k);
            if t[a][b] != sparse::scale(f, &t[b][a], s) {
                bad += 1;
            }
        }
    }
    Ok(Check::new(format!("χ super-commutative at p={}", ctx.p), bad == 0, format!("{bad} failing pairs")))
}

/// |−,−| on HH(Ω,Θ^σ) ⊗ HH(Ω,Θ): full rank and |h, h′h″| = |hh′, h″|.
pub fn duality(ctx: &Context) -> Result<Check> {
    let (ts, th, chi) = (ctx.hh("theta-sigma"), ctx.hh("theta"), ctx.hh("omega"));
    let f = ctx.field();
    let g = duality_form(ts, th);
    let rank = g.rank();
    let th_left = Pairing::left_action(&ctx.co.theta, ctx.co.omega.dim());
    let ts_right = Pairing::right_action(&ctx.co.theta_sigma, ctx.co.omega.dim());
    let form = |u: &Lin, v: &Lin| {
        let mut acc = 0;
        for &(a, c) in u {
            for &(b, d) in v {
                acc = f.add(acc, f.mul(f.mul(c, d), g.get(a, b)));
            }
        }
        acc
    };
    let mut bad = 0;
    let mut triples = 0;
    for h in 0..ts.dim() {
        for h1 in 0..chi.dim() {
            let hh1 = cup(ts, &sparse::unit(h), chi, &sparse::unit(h1), &ts_right, ts)?;
            for h2 in 0..th.dim() {
                let h1h2 = cup(chi, &sparse::unit(h1), th, &sparse::unit(h2), &th_left, th)?;
                triples += 1;
                if form(&sparse::unit(h), &h1h2) != form(&hh1, &sparse::unit(h2)) {
                    bad += 1;
                }
            }
        }
    }
    let full = 2 * (ctx.p as usize - 1);
    Ok(Check::new(
        format!("duality pairing at p={}", ctx.p),
        rank == full && bad == 0,
        format!("rank {rank} of {full}; {bad} of {triples} triples unbalanced"),
    ))
}

/// ♣ on rows `lo..=hi`: associativity, per-component nondegeneracy and associativity of the form.
pub fn club_window(p: u32, lo: i64, hi: i64) -> Result<Check> {
    let w = build_club_window(p, lo, hi)?;
    let f = w.maps.field();
    let inside = |r: i64| (lo..=hi).contains(&r);
    let n = w.dim();
    let rows: Vec<i64> = (0..n).map(|g| w.row_of(g)).collect();
    let mut prods: BTreeMap<(usize, usize), Lin> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            if inside(rows[a] + rows[b]) {
                prods.insert((a, b), w.mul(&sparse::unit(a), &sparse::unit(b)));
            }
        }
    }
    let times = |u: &Lin, c: usize| {
        let mut lb = sparse::LinBuilder::new();
        for &(t, x) in u {
            lb.extend_scaled(f, &prods[&(t, c)], x);
        }
        lb.finish(f)
    };
    let left_times = |a: usize, u: &Lin| {
        let mut lb = sparse::LinBuilder::new();
        for &(t, x) in u {
            lb.extend_scaled(f, &prods[&(a, t)], x);
        }
        lb.finish(f)
    };
    let mut triples = 0u64;
    let mut assoc_bad = 0u64;
    for a in 0..n {
        for b in 0..n {
            if !inside(rows[a] + rows[b]) {
                continue;
            }
            for c in 0..n {
                if !inside(rows[b] + rows[c]) || !inside(rows[a] + rows[b] + rows[c]) {
                    continue;
                }
                triples += 1;
                if times(&prods[&(a, b)], c) != left_times(a, &prods[&(b, c)]) {
                    assoc_bad += 1;
                }
            }
        }
    }
    // The form pairs rows −i and i + 2; its blocks between components must be perfect matchings.
    let mut form_bad = Vec::new();
    let mut blocks = 0;
    for i in 0.. {
        if !inside(-i) || !inside(i + 2) {
            break;
        }
        let comps = |r: i64| (0..w.components.len()).filter(|&c| w.components[c].i == r).collect::<Vec<_>>();
        for c1 in comps(-i) {
            let mut partners = Vec::new();
            for c2 in comps(i + 2) {
                let (d1, d2) = (w.component_dim(c1), w.component_dim(c2));
                let rows: Vec<Vec<u32>> = (0..d1).map(|a| (0..d2).map(|b| w.symmetric_form(w.global(c1, a), w.global(c2, b))).collect()).collect();
                let m = hh2_core::Matrix::from_rows(f, d2, &rows);
                if !m.is_zero() {
                    partners.push((c2, d1, d2, m.rank()));
                }
            }
            blocks += partners.len();
            if partners.len() != 1 || partners[0].1 != partners[0].2 || partners[0].3 != partners[0].1 {
                form_bad.push(format!("{}: {:?}", w.components[c1].label(), partners));
            }
        }
    }
    let mut form_triples = 0;
    let mut form_assoc_bad = 0;
    for (&(a, b), ab) in &prods {
        for c in 0..n {
            if rows[a] + rows[b] + rows[c] != 2 || !inside(rows[b] + rows[c]) {
                continue;
            }
            form_triples += 1;
            let l = ab.iter().fold(0, |acc, &(g, v)| f.add(acc, f.mul(v, w.symmetric_form(g, c))));
            let r = prods[&(b, c)].iter().fold(0, |acc, &(g, v)| f.add(acc, f.mul(v, w.symmetric_form(a, g))));
            if l != r {
                form_assoc_bad += 1;
            }
        }
    }
    Ok(Check::new(
        format!("♣ rows {lo}..{hi} at p={p}"),
        assoc_bad == 0 && form_bad.is_empty() && blocks > 0 && form_assoc_bad == 0 && form_triples > 0,
        format!(
            "associativity {assoc_bad}/{triples} failing; {blocks} form blocks, degenerate: [{}]; form associativity {form_assoc_bad}/{form_triples} failing",
            form_bad.join(", ")
        ),
    ))
}

/// Closed-form ♠ products against the cup recomputation on every pair of the verification window.
pub fn spade_verification(p: u32) -> Result<Check> {
    let report = verify_first_principles(p, 0)?;
    let rules: BTreeSet<ProductRule> = report.cells.values().flat_map(|c| c.rules.iter().copied()).collect();
    let every_rule = [ProductRule::Action, ProductRule::Star, ProductRule::Lozenge, ProductRule::BlackLozenge, ProductRule::Square, ProductRule::Triangle];
    let missing: Vec<_> = every_rule.iter().filter(|r| !rules.contains(r)).collect();
    let alg = build_spade(p, (0, 0), (-1, 0))?;
    let f = alg.field();
    let half = f.half();
    let halves = (0..alg.dim())
        .flat_map(|m| (0..alg.dim()).map(move |n| (m, n)))
        .filter_map(|(m, n)| alg.product(m, n).ok())
        .flatten()
        .filter(|&(_, c)| c == half || c == f.neg(half))
        .count();
    Ok(Check::new(
        format!("♠ closed form vs cup at p={p}"),
        report.mismatches.is_empty() && missing.is_empty() && halves > 0,
        format!(
            "{} pairs, {} mismatches, rules missing {missing:?}, ±½ coefficients {halves}{}",
            report.pairs_checked,
            report.mismatches.len(),
            report.mismatches.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    ))
}

pub fn spade_associativity(p: u32, a: (i64, i64), b: (i64, i64)) -> Result<Check> {
    let alg = build_spade(p, a, b)?;
    let table = ProductTable::new(&alg);
    let report = check_associativity(&alg, &table);
    Ok(Check::new(
        format!("♠ associativity a∈{a:?} b∈{b:?} at p={p}"),
        report.failures.is_empty(),
        format!("triples checked: {}, failures {}", report.triples_checked, report.failures.len()),
    ))
}

/// Super-commutativity on the b = 0 line of ♠.
pub fn spade_diagonal_super_commutative(p: u32) -> Result<Check> {
    let alg = build_spade(p, (-4, 5), (0, 0))?;
    let f = alg.field();
    let (mut pairs, mut bad) = (0, 0);
    for m in 0..alg.dim() {
        for n in 0..alg.dim() {
            let (Ok(mn), Ok(nm)) = (alg.product(m, n), alg.product(n, m)) else { continue };
            pairs += 1;
            if mn != sparse::scale(f, &nm, f.sign(alg.basis[m].k * alg.basis[n].k)) {
                bad += 1;
            }
        }
    }
    Ok(Check::new(format!("♠ diagonal super-commutative at p={p}"), bad == 0 && pairs > 0, format!("{bad}/{pairs} failing")))
}

/// hh₀ = F and hh₁ ≅ χ, comparing hh₁ with the cup table of HH(Ω).
pub fn tower_base(ctx: &Context) -> Result<Check> {
    let p = ctx.p;
    let h0 = build_hhl(p, 0, (i64::MIN / 4, i64::MAX / 4))?;
    let h0_ok = h0.dim() == 1 && h0.product(0, 0)? == vec![(0, 1)];
    let h1 = build_hhl(p, 1, (i64::MIN / 4, i64::MAX / 4))?;
    let chi = ctx.hh("omega");
    let to_chi: Vec<Option<usize>> = h1.basis.iter().map(|m| chi.find(&h1.spade.basis[m.factors[0]].class)).collect();
    let mut bad = Vec::new();
    if h1.dim() != chi.dim() || to_chi.iter().any(Option::is_none) {
        bad.push(format!("dim {} vs {}", h1.dim(), chi.dim()));
    } else {
        let to_chi: Vec<usize> = to_chi.into_iter().map(Option::unwrap).collect();
        let table = ctx.chi_table()?;
        for x in 0..h1.dim() {
            if chi.classes[to_chi[x]].deg.k != h1.basis[x].k {
                bad.push(format!("k of {}", h1.name(x)));
            }
            for y in 0..h1.dim() {
                let mapped: Lin = {
                    let mut v: Lin = h1.product(x, y)?.into_iter().map(|(t, c)| (to_chi[t], c)).collect();
                    v.sort();
                    v
                };
                if mapped != table[to_chi[x]][to_chi[y]] {
                    bad.push(format!("{}·{}", h1.name(x), h1.name(y)));
                }
            }
        }
    }
    Ok(Check::new(
        format!("hh₀ = F and hh₁ ≅ χ at p={p}"),
        h0_ok && bad.is_empty(),
        format!("dim hh₀ {}, dim hh₁ {}{}", h0.dim(), h1.dim(), if bad.is_empty() { String::new() } else { format!("; differs at {}", bad.join(", ")) }),
    ))
}

/// project: hh_l → hh_{l−1} is surjective and multiplicative on `k ∈ [0, k_max]`.
pub fn projection(p: u32, l: usize, k_max: i64) -> Result<Check> {
    let src = build_hhl(p, l, (0, k_max))?;
    let dst = build_hhl(p, l - 1, (0, k_max))?;
    let f = src.field();
    let images: Vec<Lin> = (0..src.dim()).map(|x| src.project(&dst, x)).collect::<Result<_, _>>()?;
    let hit: BTreeSet<usize> = images.iter().flatten().map(|&(t, _)| t).collect();
    let apply = |v: &Lin| {
        let mut lb = sparse::LinBuilder::new();
        for &(t, c) in v {
            lb.extend_scaled(f, &images[t], c);
        }
        lb.finish(f)
    };
    let (mut pairs, mut bad) = (0, 0);
    for x in 0..src.dim() {
        for y in 0..src.dim() {
            let Ok(xy) = src.product(x, y) else { continue };
            pairs += 1;
            let mut rhs = sparse::LinBuilder::new();
            for &(u, c) in &images[x] {
                for &(v, d) in &images[y] {
                    rhs.extend_scaled(f, &dst.product(u, v)?, f.mul(c, d));
                }
            }
            if apply(&xy) != rhs.finish(f) {
                bad += 1;
            }
        }
    }
    Ok(Check::new(
        format!("project hh_{l} → hh_{} on k≤{k_max} at p={p}", l - 1),
        hit.len() == dst.dim() && bad == 0,
        format!("image {}/{}; {bad}/{pairs} in-window pairs not multiplicative", hit.len(), dst.dim()),
    ))
}

/// Super-commutativity, associativity and agreement with the iterated construction for hh_l.
pub fn hhl_structure(p: u32, l: usize) -> Result<Check> {
    let window = (i64::MIN / 4, i64::MAX / 4);
    let h = build_hhl(p, l, window)?;
    let f = h.field();
    let n = h.dim();
    let prods: Vec<Vec<Option<Lin>>> = (0..n).map(|x| (0..n).map(|y| h.product(x, y).ok()).collect()).collect();
    let (mut comm_bad, mut assoc_bad, mut triples) = (0, 0, 0u64);
    for x in 0..n {
        for y in 0..n {
            if let (Some(a), Some(b)) = (&prods[x][y], &prods[y][x]) {
                if *a != sparse::scale(f, b, f.sign(h.basis[x].k * h.basis[y].k)) {
                    comm_bad += 1;
                }
            }
        }
    }
    let mul = |u: &Lin, z: usize, right: bool| -> Option<Lin> {
        let mut lb = sparse::LinBuilder::new();
        for &(t, c) in u {
            let v = if right { prods[t][z].as_ref()? } else { prods[z][t].as_ref()? };
            lb.extend_scaled(f, v, c);
        }
        Some(lb.finish(f))
    };
    for x in 0..n {
        for y in 0..n {
            let Some(xy) = &prods[x][y] else { continue };
            for z in 0..n {
                let Some(yz) = &prods[y][z] else { continue };
                if let (Some(l), Some(r)) = (mul(xy, z, true), mul(yz, x, false)) {
                    triples += 1;
                    if l != r {
                        assoc_bad += 1;
                    }
                }
            }
        }
    }
    let it = build_hhl_iterated(p, l, window)?;
    let direct: BTreeSet<Vec<String>> = (0..n).map(|x| h.word(x)).collect();
    let iterated: BTreeSet<Vec<String>> = (0..it.dim()).map(|x| it.word(x)).collect();
    Ok(Check::new(
        format!("hh_{l} structure at p={p}"),
        comm_bad == 0 && assoc_bad == 0 && direct == iterated,
        format!(
            "dim {n}; super-commutativity {comm_bad} failing; associativity {assoc_bad}/{triples} failing; iterated basis {}",
            if direct == iterated { "agrees" } else { "differs" }
        ),
    ))
}

/// Every invariant at one prime, in a fixed order.
pub fn suite(p: u32) -> Result<Vec<Check>> {
    let ctx = Context::new(p)?;
    let mut out = Vec::new();
    if p == 5 {
        for name in COEFFICIENTS {
            out.push(named_degrees(&ctx, name));
        }
    }
    out.push(dimension_laws(&ctx));
    out.push(oracle_equivalence(&ctx, if p == 3 { 4 } else { 3 })?);
    out.push(chi_presentation(&ctx)?);
    out.push(chi_super_commutative(&ctx)?);
    out.push(duality(&ctx)?);
    out.push(club_window(p, -3, 4)?);
    out.push(spade_verification(p)?);
    out.push(spade_associativity(p, (-3, 4), (-3, 3))?);
    out.push(spade_diagonal_super_commutative(p)?);
    out.push(tower_base(&ctx)?);
    out.push(projection(p, 1, 12)?);
    out.push(projection(p, 2, 12)?);
    for l in 0..=2 {
        out.push(hhl_structure(p, l)?);
    }
    Ok(out)
}

/// Times `f` and applies a limit.
pub fn timed(limit: Duration, f: impl FnOnce() -> Result<Check>) -> Check {
    let start = Instant::now();
    match f() {
        Ok(c) => c.within(start.elapsed(), limit),
        Err(e) => Check::new("error", false, e.to_string()),
    }
}
