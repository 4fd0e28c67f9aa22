//! The bigraded algebra ♣: rows of shifted `Ω`-bimodules indexed by powers of
//! `t^!`, multiplied through a small set of natural bimodule homomorphisms.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::exactlin::Field;
use crate::quiver::{tensor_over_with_pairs, BasedBimodule, BimoduleMap, Coefficients, Degree, QuiverError, X, Y};
use crate::sparse::{self, Lin, LinBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClubError {
    #[error("window must contain rows 0 and 1")]
    WindowTooSmall,
    #[error("construction check failed: {0}")]
    ConstructionFailure(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// Elements of `Ω`, `Ω*`, `Θ` are addressed by their basis index; elements of
/// `Ωe_pΩ` by their index in that sub-bimodule.
pub struct NaturalMaps {
    pub co: Coefficients,
    field: Field,
    p: usize,
    epep_of_omega: HashMap<usize, usize>,
    /// `σ` on basis indices of `Θ`.
    theta_sigma: Vec<usize>,
    /// Indices in `Θ` of the socle elements `e_s x^{p-s-1} y^{s-1} e_{p-s}`.
    socle: Vec<usize>,
}

impl NaturalMaps {
    pub fn new(p: u32) -> Result<Self, ClubError> {
        let co = Coefficients::new(p)?;
        let p = co.p();
        let epep_of_omega = co.epep_embedding.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let th = &co.theta_algebra;
        let mut theta_sigma = Vec::new();
        for b in th.basis() {
            let counts = vec![b.counts[Y], b.counts[X]];
            let target = if b.length == 0 { th.idempotent(p - b.left) } else { th.find(p - b.left, p - b.right, &counts) };
            theta_sigma.push(target.ok_or_else(|| ClubError::ConstructionFailure(format!("σ({})", b.name)))?);
        }
        let mut socle = Vec::new();
        for s in 1..p {
            let counts = [p - s - 1, s - 1];
            socle.push(th.find(s, p - s, &counts).ok_or_else(|| ClubError::ConstructionFailure(format!("socle at {s}")))?);
        }
        let field = co.c.field();
        Ok(NaturalMaps { co, field, p, epep_of_omega, theta_sigma, socle })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn p(&self) -> usize {
        self.p
    }

    fn omega_sig(&self, w: usize) -> (usize, usize, usize, usize) {
        let e = self.co.omega.element(w);
        (e.left, e.right, e.counts[X], e.counts[Y])
    }

    fn omega_find(&self, l: usize, r: usize, d: usize, e: usize) -> Option<usize> {
        if d + e == 0 {
            return if l == r { self.co.omega.idempotent(l) } else { None };
        }
        self.co.omega.find(l, r, &[d, e])
    }

    /// The `β`-partner: the unique `v` with `β(u, v) = 1`, both in `Ωe_pΩ`.
    pub fn beta_partner(&self, u: usize) -> Option<usize> {
        let (s, t, d, e) = self.omega_sig(self.co.epep_embedding[u]);
        let p = self.p;
        if d > p - 1 || e > p - 1 {
            return None;
        }
        let v = self.omega_find(t, s, p - 1 - d, p - 1 - e)?;
        self.epep_of_omega.get(&v).copied()
    }

    /// `β(u, v)` on basis elements of `Ωe_pΩ`.
    pub fn beta(&self, u: usize, v: usize) -> u32 {
        u32::from(self.beta_partner(u) == Some(v))
    }

    /// `α: Ωe_pΩ → Ω`.
    pub fn alpha(&self, u: usize) -> Lin {
        sparse::unit(self.co.epep_embedding[u])
    }

    /// `γ = β^{-1} ∘ α*: Ω* → Ωe_pΩ` on the dual basis element `w*`.
    pub fn gamma(&self, w: usize) -> Lin {
        match self.epep_of_omega.get(&w) {
            None => Vec::new(),
            Some(&v) => {
                // β(u, v) = 1 for the partner u of v; the form is symmetric.
                match self.beta_partner(v) {
                    Some(u) => sparse::unit(u),
                    None => Vec::new(),
                }
            }
        }
    }

    pub fn gamma_lin(&self, f: &[(usize, u32)]) -> Lin {
        let mut lb = LinBuilder::new();
        for &(w, c) in f {
            lb.extend_scaled(self.field, &self.gamma(w), c);
        }
        lb.finish(self.field)
    }

    fn alpha_lin(&self, u: &[(usize, u32)]) -> Lin {
        u.iter().map(|&(i, c)| (self.co.epep_embedding[i], c)).collect::<Vec<_>>().into_iter().collect::<BTreeMap<_, _>>().into_iter().collect()
    }

    fn omega_on_dual_left(&self, u: &[(usize, u32)], f: usize) -> Lin {
        let mut lb = LinBuilder::new();
        for &(a, c) in u {
            lb.extend_scaled(self.field, self.co.omega_dual.act_left(a, f), c);
        }
        lb.finish(self.field)
    }

    fn omega_on_dual_right(&self, f: usize, u: &[(usize, u32)]) -> Lin {
        let mut lb = LinBuilder::new();
        for &(a, c) in u {
            lb.extend_scaled(self.field, self.co.omega_dual.act_right(f, a), c);
        }
        lb.finish(self.field)
    }

    /// `ε(f ⊗ g) = f · α(γ(g))`.
    pub fn epsilon(&self, f: usize, g: usize) -> Lin {
        self.omega_on_dual_right(f, &self.alpha_lin(&self.gamma(g)))
    }

    /// `ζ_l(u ⊗ f) = α(u) · f`.
    pub fn zeta_l(&self, u: usize, f: usize) -> Lin {
        self.omega_on_dual_left(&self.alpha(u), f)
    }

    /// `ζ_r(f ⊗ u) = f · α(u)`.
    pub fn zeta_r(&self, f: usize, u: usize) -> Lin {
        self.omega_on_dual_right(f, &self.alpha(u))
    }

    /// `η(u ⊗ v)(w) = β(u, v w)`.
    pub fn eta(&self, u: usize, v: usize) -> Lin {
        let om = &self.co.omega;
        let vo = self.co.epep_embedding[v];
        let mut lb = LinBuilder::new();
        let Some(partner) = self.beta_partner(u) else { return Vec::new() };
        let target = self.co.epep_embedding[partner];
        for w in 0..om.dim() {
            let c = sparse::coeff(om.mul(vo, w), target);
            lb.push(w, c);
        }
        lb.finish(self.field)
    }

    /// `θ_l(u ⊗ f) = γ(u · f)`.
    pub fn theta_l(&self, u: usize, f: usize) -> Lin {
        self.gamma_lin(self.co.omega_dual.act_left(u, f))
    }

    /// `θ_r(f ⊗ u) = γ(f · u)`.
    pub fn theta_r(&self, f: usize, u: usize) -> Lin {
        self.gamma_lin(self.co.omega_dual.act_right(f, u))
    }

    pub fn iota_l(&self, u: usize, f: usize) -> Lin {
        self.alpha_lin(&self.theta_l(u, f))
    }

    pub fn iota_r(&self, f: usize, u: usize) -> Lin {
        self.alpha_lin(&self.theta_r(f, u))
    }

    /// `κ: Ω → Θ`.
    pub fn kappa(&self, w: usize) -> &Lin {
        &self.co.kappa[w]
    }

    /// `σ` on a basis element of `Θ`.
    pub fn sigma(&self, b: usize) -> usize {
        self.theta_sigma[b]
    }

    fn sigma_pow(&self, b: usize, n: usize) -> usize {
        if n % 2 == 1 {
            self.sigma(b)
        } else {
            b
        }
    }

    /// `a · σ^n(b)` in `Θ`, realizing `Θ^{σ^n} ⊗_Ω Θ^{σ^m} → Θ^{σ^{n+m}}`.
    pub fn theta_product(&self, a: usize, n: usize, b: usize) -> Lin {
        self.co.theta_algebra.mul(a, self.sigma_pow(b, n)).clone()
    }

    /// Sum of socle coefficients.
    pub fn tau(&self, u: &[(usize, u32)]) -> u32 {
        self.socle.iter().fold(0, |acc, &s| self.field.add(acc, sparse::coeff(u, s)))
    }

    /// `⟨a, b⟩ = τ(a σ(b))` on `Θ`.
    pub fn theta_form(&self, a: usize, b: usize) -> u32 {
        self.tau(&self.theta_product(a, 1, b))
    }

    /// `μ: Θ^σ → Ω*`, `μ(t)(w) = τ(κ(w) t)`.
    pub fn mu(&self, t: usize) -> Lin {
        let th = &self.co.theta_algebra;
        let mut lb = LinBuilder::new();
        for w in 0..self.co.omega.dim() {
            let kw = &self.co.kappa[w];
            if kw.is_empty() {
                continue;
            }
            lb.push(w, self.tau(&th.mul_lin(kw, &sparse::unit(t))));
        }
        lb.finish(self.field)
    }

    pub fn mu_lin(&self, t: &[(usize, u32)]) -> Lin {
        let mut lb = LinBuilder::new();
        for &(i, c) in t {
            lb.extend_scaled(self.field, &self.mu(i), c);
        }
        lb.finish(self.field)
    }

    /// `ν_l(a ⊗ t) = μ(a t)` for `a ∈ Θ`, `t ∈ Θ^σ`.
    pub fn nu_l(&self, a: usize, t: usize) -> Lin {
        self.mu_lin(&self.theta_product(a, 0, t))
    }

    /// `ν_r(t ⊗ a) = μ(t σ(a))` for `t ∈ Θ^σ`, `a ∈ Θ`.
    pub fn nu_r(&self, t: usize, a: usize) -> Lin {
        self.mu_lin(&self.theta_product(t, 1, a))
    }

    /// `λ: Θ → (Θ*)^σ`, `a ↦ Σ_b ⟨b, σ(a)⟩ b* = Σ_b τ(b a) b*`.
    pub fn lambda(&self, a: usize) -> Lin {
        let mut lb = LinBuilder::new();
        for b in 0..self.co.theta_algebra.dim() {
            lb.push(b, self.theta_form(b, self.sigma(a)));
        }
        lb.finish(self.field)
    }
}

/// A named map together with its source and target, for structural checks.
pub struct CheckedMap {
    pub map: BimoduleMap,
    pub source: BasedBimodule,
    pub target: BasedBimodule,
}

impl CheckedMap {
    pub fn rank(&self, f: Field) -> usize {
        self.map.rank(f, self.target.dim())
    }
}

/// Builds a map out of `M ⊗_Ω N` from a bilinear function, checking that it is
/// balanced over `Ω`.
fn from_pairing(
    nm: &NaturalMaps,
    name: &str,
    m: &BasedBimodule,
    n: &BasedBimodule,
    target: &BasedBimodule,
    shift: Degree,
    f: impl Fn(usize, usize) -> Lin,
) -> Result<CheckedMap, ClubError> {
    let om = &nm.co.omega;
    let fld = nm.field;
    let apply = |x: &Lin, y: &Lin| -> Lin {
        let mut lb = LinBuilder::new();
        for &(i, a) in x {
            for &(j, b) in y {
                lb.extend_scaled(fld, &f(i, j), fld.mul(a, b));
            }
        }
        lb.finish(fld)
    };
    for g in om.generators() {
        for i in 0..m.dim() {
            for j in 0..n.dim() {
                if apply(m.act_right(i, g), &sparse::unit(j)) != apply(&sparse::unit(i), n.act_left(g, j)) {
                    return Err(ClubError::ConstructionFailure(format!("{name} is not balanced")));
                }
            }
        }
    }
    let (t, pairs) = tensor_over_with_pairs(m, n, om)?;
    let images = pairs.iter().map(|&(i, j)| f(i, j)).collect();
    let map = BimoduleMap { name: name.to_string(), shift, images };
    map.check(om, &t, target).map_err(|e| ClubError::ConstructionFailure(e.to_string()))?;
    Ok(CheckedMap { map, source: t, target: target.clone() })
}

fn from_fn(nm: &NaturalMaps, name: &str, source: &BasedBimodule, target: &BasedBimodule, shift: Degree, f: impl Fn(usize) -> Lin) -> Result<CheckedMap, ClubError> {
    let images = (0..source.dim()).map(f).collect();
    let map = BimoduleMap { name: name.to_string(), shift, images };
    map.check(&nm.co.omega, source, target).map_err(|e| ClubError::ConstructionFailure(e.to_string()))?;
    Ok(CheckedMap { map, source: source.clone(), target: target.clone() })
}

/// Degree shift of `γ`, `θ` and `ι`.
pub fn gamma_shift(p: usize) -> Degree {
    let p = p as i64;
    Degree::new(2 - 2 * p, 2 * p - 2)
}

/// The sixteen natural maps, each checked to intertwine the actions, with the
/// stated injectivity, surjectivity and bijectivity verified by rank.
pub fn build_natural_maps(nm: &NaturalMaps) -> Result<BTreeMap<&'static str, CheckedMap>, ClubError> {
    let co = &nm.co;
    let f = nm.field;
    let p = nm.p as i64;
    let g = gamma_shift(nm.p);
    let epep_dual = co.epep.dual("(Ωe_pΩ)*");
    let theta_dual_sigma = crate::quiver::twist_sigma(&co.omega, &co.theta, &co.theta.dual("Θ*"));
    let mut out = BTreeMap::new();
    let beta_shift = Degree::new(2 * p - 2, 2 - 2 * p);
    out.insert("β", from_fn(nm, "β", &co.epep, &epep_dual, beta_shift, |u| nm.beta_partner(u).map(sparse::unit).unwrap_or_default())?);
    out.insert("α", from_fn(nm, "α", &co.epep, &co.omega_mod, Degree::ZERO, |u| nm.alpha(u))?);
    out.insert("γ", from_fn(nm, "γ", &co.omega_dual, &co.epep, g, |w| nm.gamma(w))?);
    out.insert("ε", from_pairing(nm, "ε", &co.omega_dual, &co.omega_dual, &co.omega_dual, g, |a, b| nm.epsilon(a, b))?);
    out.insert("ζ_l", from_pairing(nm, "ζ_l", &co.epep, &co.omega_dual, &co.omega_dual, Degree::ZERO, |a, b| nm.zeta_l(a, b))?);
    out.insert("ζ_r", from_pairing(nm, "ζ_r", &co.omega_dual, &co.epep, &co.omega_dual, Degree::ZERO, |a, b| nm.zeta_r(a, b))?);
    out.insert("η", from_pairing(nm, "η", &co.epep, &co.epep, &co.omega_dual, -g, |a, b| nm.eta(a, b))?);
    out.insert("θ_l", from_pairing(nm, "θ_l", &co.omega_mod, &co.omega_dual, &co.epep, g, |a, b| nm.theta_l(a, b))?);
    out.insert("θ_r", from_pairing(nm, "θ_r", &co.omega_dual, &co.omega_mod, &co.epep, g, |a, b| nm.theta_r(a, b))?);
    out.insert("ι_l", from_pairing(nm, "ι_l", &co.omega_mod, &co.omega_dual, &co.omega_mod, g, |a, b| nm.iota_l(a, b))?);
    out.insert("ι_r", from_pairing(nm, "ι_r", &co.omega_dual, &co.omega_mod, &co.omega_mod, g, |a, b| nm.iota_r(a, b))?);
    let lam_shift = Degree::new(p - 2, 2 - p);
    out.insert("λ", from_fn(nm, "λ", &co.theta, &theta_dual_sigma, lam_shift, |a| nm.lambda(a))?);
    out.insert("κ", from_fn(nm, "κ", &co.omega_mod, &co.theta, Degree::ZERO, |w| nm.kappa(w).clone())?);
    out.insert("μ", from_fn(nm, "μ", &co.theta_sigma, &co.omega_dual, lam_shift, |t| nm.mu(t))?);
    out.insert("ν_l", from_pairing(nm, "ν_l", &co.theta, &co.theta_sigma, &co.omega_dual, lam_shift, |a, b| nm.nu_l(a, b))?);
    out.insert("ν_r", from_pairing(nm, "ν_r", &co.theta_sigma, &co.theta, &co.omega_dual, lam_shift, |a, b| nm.nu_r(a, b))?);

    let need = |name: &str, ok: bool| -> Result<(), ClubError> {
        if ok {
            Ok(())
        } else {
            Err(ClubError::ConstructionFailure(format!("rank check for {name}")))
        }
    };
    for name in ["β", "λ", "ε", "ζ_l", "ζ_r", "η"] {
        let m = &out[name];
        need(name, m.source.dim() == m.target.dim() && m.rank(f) == m.target.dim())?;
    }
    need("α", out["α"].rank(f) == co.epep.dim())?;
    need("μ", out["μ"].rank(f) == co.theta_sigma.dim())?;
    for name in ["γ", "κ"] {
        need(name, out[name].rank(f) == out[name].target.dim())?;
    }
    Ok(out)
}

/// Which bimodule realizes a grid component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleKind {
    Omega,
    ThetaSigma,
    Theta,
    OmegaDual,
    OmegaEpOmega,
    Omega0,
}

/// Position of a component in the five-part decomposition of ♣.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    /// `Ω⟨−np⟩[n(p−1)]` in row `−n`.
    OmegaMinus { n: i64 },
    /// `Θ^{σ^m}⟨−np⟩[n(p−1)]` in row `−(n+m)`, `m ≥ 1`.
    ThetaMinus { n: i64, m: i64 },
    /// `Ωe_pΩ⟨p⟩[1−p]` in row 1.
    Epep,
    /// `Θ^{σ^{d−1}}` in row `i`, `d` columns from the `Ω*` column; dual to
    /// `ThetaMinus { n: i − 2 − d, m: d }`.
    ThetaPlus { i: i64, d: i64 },
    /// `Ω*⟨2+(i−2)p⟩[(i−2)(1−p)]` in row `i ≥ 2`.
    OmegaDualPlus { i: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridComponent {
    pub i: i64,
    pub slot: i64,
    pub kind: ModuleKind,
    pub jshift: i64,
    pub kshift: i64,
    pub part: Part,
}

impl GridComponent {
    pub fn new(part: Part, p: usize) -> Self {
        let p = p as i64;
        let (i, slot, kind, jshift, kshift) = match part {
            Part::OmegaMinus { n } => (-n, 0, ModuleKind::Omega, -n * p, n * (p - 1)),
            Part::ThetaMinus { n, m } => (-(n + m), m, theta_kind(m), -n * p, n * (p - 1)),
            Part::Epep => (1, 0, ModuleKind::OmegaEpOmega, p, 1 - p),
            Part::ThetaPlus { i, d } => (i, d, theta_kind(d - 1), (i - 1 - d) * p, (i - 1 - d) * (1 - p) + 1),
            Part::OmegaDualPlus { i } => (i, 0, ModuleKind::OmegaDual, 2 + (i - 2) * p, (i - 2) * (1 - p)),
        };
        GridComponent { i, slot, kind, jshift, kshift, part }
    }

    pub fn shift(&self) -> Degree {
        Degree::new(self.jshift, self.kshift)
    }

    pub fn label(&self) -> String {
        match self.part {
            Part::OmegaMinus { n } => format!("Ω[-{n}]"),
            Part::ThetaMinus { n, m } => format!("Θσ^{m}[-{n}]"),
            Part::Epep => "Ωe_pΩ".into(),
            Part::ThetaPlus { i, d } => format!("Θσ^{}[{i},{d}]", d - 1),
            Part::OmegaDualPlus { i } => format!("Ω*[{i}]"),
        }
    }
}

fn theta_kind(m: i64) -> ModuleKind {
    if m % 2 == 0 {
        ModuleKind::Theta
    } else {
        ModuleKind::ThetaSigma
    }
}

/// Components of row `i`.
pub fn row_components(i: i64, p: usize) -> Vec<GridComponent> {
    let mut out = Vec::new();
    if i <= 0 {
        out.push(GridComponent::new(Part::OmegaMinus { n: -i }, p));
        for m in 1..=-i {
            out.push(GridComponent::new(Part::ThetaMinus { n: -i - m, m }, p));
        }
    } else if i == 1 {
        out.push(GridComponent::new(Part::Epep, p));
    } else {
        out.push(GridComponent::new(Part::OmegaDualPlus { i }, p));
        for d in 1..=i - 2 {
            out.push(GridComponent::new(Part::ThetaPlus { i, d }, p));
        }
    }
    out
}

/// A finite range of rows of ♣ with a global basis.
pub struct ClubWindow {
    pub maps: NaturalMaps,
    pub i_min: i64,
    pub i_max: i64,
    pub components: Vec<GridComponent>,
    offsets: Vec<usize>,
    index: HashMap<Part, usize>,
}

impl ClubWindow {
    pub fn p(&self) -> usize {
        self.maps.p
    }

    pub fn module(&self, kind: ModuleKind) -> &BasedBimodule {
        let co = &self.maps.co;
        match kind {
            ModuleKind::Omega | ModuleKind::Omega0 => &co.omega_mod,
            ModuleKind::Theta => &co.theta,
            ModuleKind::ThetaSigma => &co.theta_sigma,
            ModuleKind::OmegaDual => &co.omega_dual,
            ModuleKind::OmegaEpOmega => &co.epep,
        }
    }

    pub fn component_dim(&self, c: usize) -> usize {
        self.module(self.components[c].kind).dim()
    }

    pub fn dim(&self) -> usize {
        self.offsets.last().copied().unwrap_or(0)
    }

    pub fn find(&self, part: Part) -> Option<usize> {
        self.index.get(&part).copied()
    }

    /// Global index of basis element `b` of component `c`.
    pub fn global(&self, c: usize, b: usize) -> usize {
        self.offsets[c] + b
    }

    /// Component and local index of a global basis element.
    pub fn locate(&self, g: usize) -> (usize, usize) {
        let c = self.offsets.partition_point(|&o| o <= g) - 1;
        (c, g - self.offsets[c])
    }

    /// Degree of a global basis element, shifts included.
    pub fn degree(&self, g: usize) -> Degree {
        let (c, b) = self.locate(g);
        self.module(self.components[c].kind).element(b).deg + self.components[c].shift()
    }

    pub fn name(&self, g: usize) -> String {
        let (c, b) = self.locate(g);
        format!("{}:{}", self.components[c].label(), self.module(self.components[c].kind).element(b).name)
    }

    /// Product of basis elements `a ∈ c1`, `b ∈ c2`: target component and value.
    pub fn mul_basis(&self, c1: usize, a: usize, c2: usize, b: usize) -> Option<(Part, Lin)> {
        let nm = &self.maps;
        let co = &nm.co;
        let (p1, p2) = (self.components[c1].part, self.components[c2].part);
        use Part::*;
        let r = match (p1, p2) {
            (OmegaMinus { n: n1 }, OmegaMinus { n: n2 }) => (OmegaMinus { n: n1 + n2 }, co.omega.mul(a, b).clone()),
            (OmegaMinus { n: n1 }, ThetaMinus { n: n2, m }) => (ThetaMinus { n: n1 + n2, m }, co.theta.act_left(a, b).clone()),
            (ThetaMinus { n: n1, m }, OmegaMinus { n: n2 }) => {
                let tw = if m % 2 == 1 { &co.theta_sigma } else { &co.theta };
                (ThetaMinus { n: n1 + n2, m }, tw.act_right(a, b).clone())
            }
            (ThetaMinus { n: n1, m: m1 }, ThetaMinus { n: n2, m: m2 }) => (ThetaMinus { n: n1 + n2, m: m1 + m2 }, nm.theta_product(a, m1 as usize, b)),
            (OmegaMinus { n }, Epep) if n == 0 => (Epep, co.epep.act_left(a, b).clone()),
            (Epep, OmegaMinus { n }) if n == 0 => (Epep, co.epep.act_right(a, b).clone()),
            (OmegaMinus { n }, Epep) => (OmegaMinus { n: n - 1 }, co.omega.mul_lin(&sparse::unit(a), &nm.alpha(b))),
            (Epep, OmegaMinus { n }) => (OmegaMinus { n: n - 1 }, co.omega.mul_lin(&nm.alpha(a), &sparse::unit(b))),
            (OmegaMinus { n }, OmegaDualPlus { i }) => match i - n {
                t if t >= 2 => (OmegaDualPlus { i: t }, co.omega_dual.act_left(a, b).clone()),
                1 => (Epep, nm.theta_l(a, b)),
                t => (OmegaMinus { n: -t }, nm.iota_l(a, b)),
            },
            (OmegaDualPlus { i }, OmegaMinus { n }) => match i - n {
                t if t >= 2 => (OmegaDualPlus { i: t }, co.omega_dual.act_right(a, b).clone()),
                1 => (Epep, nm.theta_r(a, b)),
                t => (OmegaMinus { n: -t }, nm.iota_r(a, b)),
            },
            (Epep, Epep) => (OmegaDualPlus { i: 2 }, nm.eta(a, b)),
            (Epep, OmegaDualPlus { i }) => (OmegaDualPlus { i: i + 1 }, nm.zeta_l(a, b)),
            (OmegaDualPlus { i }, Epep) => (OmegaDualPlus { i: i + 1 }, nm.zeta_r(a, b)),
            (OmegaDualPlus { i: i1 }, OmegaDualPlus { i: i2 }) => (OmegaDualPlus { i: i1 + i2 }, nm.epsilon(a, b)),
            (OmegaMinus { n }, ThetaPlus { i, d }) => {
                if i - n - 2 - d < 0 {
                    return None;
                }
                (ThetaPlus { i: i - n, d }, co.theta.act_left(a, b).clone())
            }
            (ThetaPlus { i, d }, OmegaMinus { n }) => {
                if i - n - 2 - d < 0 {
                    return None;
                }
                let tw = if (d - 1) % 2 == 1 { &co.theta_sigma } else { &co.theta };
                (ThetaPlus { i: i - n, d }, tw.act_right(a, b).clone())
            }
            (ThetaMinus { n: n1, m: m1 }, ThetaPlus { i, d }) => {
                let (n2, m2) = (i - 2 - d, d);
                if n2 < n1 || m2 < m1 {
                    return None;
                }
                let prod = nm.theta_product(a, m1 as usize, b);
                if m2 > m1 {
                    (ThetaPlus { i: i - n1 - m1, d: m2 - m1 }, prod)
                } else {
                    (OmegaDualPlus { i: i - n1 - m1 }, nm.mu_lin(&prod))
                }
            }
            (ThetaPlus { i, d }, ThetaMinus { n: n1, m: m1 }) => {
                let (n2, m2) = (i - 2 - d, d);
                if n2 < n1 || m2 < m1 {
                    return None;
                }
                let prod = nm.theta_product(a, (d - 1) as usize, b);
                if m2 > m1 {
                    (ThetaPlus { i: i - n1 - m1, d: m2 - m1 }, prod)
                } else {
                    (OmegaDualPlus { i: i - n1 - m1 }, nm.mu_lin(&prod))
                }
            }
            _ => return None,
        };
        Some(r)
    }

    /// Product of two global vectors; terms landing outside the window are dropped.
    pub fn mul(&self, x: &[(usize, u32)], y: &[(usize, u32)]) -> Lin {
        let f = self.maps.field;
        let mut lb = LinBuilder::new();
        for &(g1, a1) in x {
            let (c1, b1) = self.locate(g1);
            for &(g2, a2) in y {
                let (c2, b2) = self.locate(g2);
                if let Some((part, v)) = self.mul_basis(c1, b1, c2, b2) {
                    if let Some(c3) = self.find(part) {
                        for &(t, ct) in &v {
                            lb.push(self.global(c3, t), f.mul(f.mul(a1, a2), ct));
                        }
                    }
                }
            }
        }
        lb.finish(f)
    }

    /// `|a, b| = (ab)(1)` for `a` in row `−i` and `b` in row `i + 2`.
    pub fn symmetric_form(&self, a: usize, b: usize) -> u32 {
        let f = self.maps.field;
        let Some(c) = self.find(Part::OmegaDualPlus { i: 2 }) else { return 0 };
        let prod = self.mul(&sparse::unit(a), &sparse::unit(b));
        let mut total = 0;
        for &(g, v) in &prod {
            let (cc, local) = self.locate(g);
            if cc == c && self.maps.co.omega.element(local).length == 0 {
                total = f.add(total, v);
            }
        }
        total
    }

    pub fn row_of(&self, g: usize) -> i64 {
        self.components[self.locate(g).0].i
    }
}

/// Rows `i_min..=i_max` of ♣ with realized components.
pub fn build_club_window(p: u32, i_min: i64, i_max: i64) -> Result<ClubWindow, ClubError> {
    if i_min > 0 || i_max < 1 {
        return Err(ClubError::WindowTooSmall);
    }
    let maps = NaturalMaps::new(p)?;
    let mut components = Vec::new();
    for i in i_min..=i_max {
        components.extend(row_components(i, maps.p));
    }
    let mut w = ClubWindow { maps, i_min, i_max, components, offsets: Vec::new(), index: HashMap::new() };
    let mut off = 0;
    for (c, comp) in w.components.iter().enumerate() {
        w.offsets.push(off);
        w.index.insert(comp.part, c);
        off += w.module(comp.kind).dim();
    }
    w.offsets.push(off);
    Ok(w)
}

/// Gram matrix of `|−,−|` between rows `−i` and `i + 2`, widening the window
/// when needed; returns `(rows, cols, rank)`.
pub fn symmetry_form(p: u32, i: i64) -> Result<(usize, usize, usize), ClubError> {
    let w = build_club_window(p, (-i).min(0), (i + 2).max(2))?;
    let f = w.maps.field;
    let left: Vec<usize> = (0..w.dim()).filter(|&g| w.row_of(g) == -i).collect();
    let right: Vec<usize> = (0..w.dim()).filter(|&g| w.row_of(g) == i + 2).collect();
    let rows: Vec<Vec<u32>> = left.iter().map(|&a| right.iter().map(|&b| w.symmetric_form(a, b)).collect()).collect();
    let m = crate::exactlin::Matrix::from_rows(f, right.len(), &rows);
    Ok((left.len(), right.len(), m.rank()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_maps_pass_checks() {
        for p in [3u32, 5] {
            let nm = NaturalMaps::new(p).unwrap();
            let maps = build_natural_maps(&nm).unwrap();
            assert_eq!(maps.len(), 16);
        }
    }
}

#[cfg(test)]
mod window_tests {
    use super::*;

    fn window() -> ClubWindow {
        build_club_window(3, -3, 4).unwrap()
    }

    #[test]
    fn window_requires_rows_zero_and_one() {
        assert!(matches!(build_club_window(3, 1, 3), Err(ClubError::WindowTooSmall)));
    }

    #[test]
    fn products_are_degree_additive_and_row_additive() {
        let w = window();
        for a in 0..w.dim() {
            for b in 0..w.dim() {
                for &(c, _) in &w.mul(&sparse::unit(a), &sparse::unit(b)) {
                    assert_eq!(w.degree(c), w.degree(a) + w.degree(b), "{} * {} -> {}", w.name(a), w.name(b), w.name(c));
                    assert_eq!(w.row_of(c), w.row_of(a) + w.row_of(b));
                }
            }
        }
    }

    #[test]
    fn row_zero_unit() {
        let w = window();
        let c0 = w.find(Part::OmegaMinus { n: 0 }).unwrap();
        let one: Lin = (0..w.component_dim(c0)).filter(|&b| w.maps.co.omega.element(b).length == 0).map(|b| (w.global(c0, b), 1)).collect();
        for g in 0..w.dim() {
            let u = sparse::unit(g);
            assert_eq!(w.mul(&one, &u), u, "{}", w.name(g));
            assert_eq!(w.mul(&u, &one), u, "{}", w.name(g));
        }
    }
}

#[cfg(test)]
mod structure_tests {
    use super::*;
    use crate::quiver::tensor_over;

    #[test]
    fn associative_on_window() {
        let w = build_club_window(3, -3, 4).unwrap();
        let in_window = |r: i64| (-3..=4).contains(&r);
        for a in 0..w.dim() {
            for b in 0..w.dim() {
                if !in_window(w.row_of(a) + w.row_of(b)) {
                    continue;
                }
                let ab = w.mul(&sparse::unit(a), &sparse::unit(b));
                for c in 0..w.dim() {
                    if !in_window(w.row_of(b) + w.row_of(c)) || !in_window(w.row_of(a) + w.row_of(b) + w.row_of(c)) {
                        continue;
                    }
                    let l = w.mul(&ab, &sparse::unit(c));
                    let r = w.mul(&sparse::unit(a), &w.mul(&sparse::unit(b), &sparse::unit(c)));
                    assert_eq!(l, r, "{} {} {}", w.name(a), w.name(b), w.name(c));
                }
            }
        }
    }

    #[test]
    fn symmetric_form_nondegenerate_and_symmetric() {
        for i in 0..=2 {
            let (r, c, rank) = symmetry_form(3, i).unwrap();
            assert_eq!((r, c), (rank, rank), "rows -{i} and {}", i + 2);
        }
        let w = build_club_window(3, -2, 4).unwrap();
        for a in (0..w.dim()).filter(|&g| w.row_of(g) == -1) {
            for b in (0..w.dim()).filter(|&g| w.row_of(g) == 3) {
                assert_eq!(w.symmetric_form(a, b), w.symmetric_form(b, a), "{} {}", w.name(a), w.name(b));
            }
        }
    }

    #[test]
    fn theta_sigma_against_theta_pairing_nondegenerate() {
        let w = build_club_window(3, -1, 3).unwrap();
        let ts = w.find(Part::ThetaMinus { n: 0, m: 1 }).unwrap();
        let th = w.find(Part::ThetaPlus { i: 3, d: 1 }).unwrap();
        let rows: Vec<Vec<u32>> = (0..w.component_dim(ts))
            .map(|a| (0..w.component_dim(th)).map(|b| w.symmetric_form(w.global(ts, a), w.global(th, b))).collect())
            .collect();
        let m = crate::exactlin::Matrix::from_rows(w.maps.field(), w.component_dim(th), &rows);
        assert_eq!(m.rank(), 4);
    }

    #[test]
    fn form_is_associative_with_middle_factor() {
        let w = build_club_window(3, -2, 4).unwrap();
        let f = w.maps.field();
        let wr = &w;
        let pick = |row: i64| (0..wr.dim()).filter(move |&g| wr.row_of(g) == row).collect::<Vec<_>>();
        for a in pick(-1) {
            for b in pick(1).into_iter().chain(pick(0)) {
                let rb = w.row_of(b);
                for c in pick(3 - rb) {
                    let ab = w.mul(&sparse::unit(a), &sparse::unit(b));
                    let bc = w.mul(&sparse::unit(b), &sparse::unit(c));
                    let l = ab.iter().fold(0, |acc, &(g, v)| f.add(acc, f.mul(v, w.symmetric_form(g, c))));
                    let r = bc.iter().fold(0, |acc, &(g, v)| f.add(acc, f.mul(v, w.symmetric_form(a, g))));
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn stated_zero_products_vanish_as_tensors() {
        let nm = NaturalMaps::new(3).unwrap();
        let co = &nm.co;
        for t in [&co.theta, &co.theta_sigma] {
            assert_eq!(tensor_over(t, &co.epep, &co.omega).unwrap().dim(), 0);
            assert_eq!(tensor_over(&co.epep, t, &co.omega).unwrap().dim(), 0);
            assert_eq!(tensor_over(t, &co.omega_dual, &co.omega).unwrap().dim(), 0);
            assert_eq!(tensor_over(&co.omega_dual, t, &co.omega).unwrap().dim(), 0);
        }
    }

    #[test]
    fn epep_squared_is_dual_via_eta() {
        let nm = NaturalMaps::new(3).unwrap();
        let maps = build_natural_maps(&nm).unwrap();
        assert_eq!(maps["η"].source.dim(), nm.co.omega.dim());
        assert_eq!(maps["η"].rank(nm.field()), nm.co.omega.dim());
        let w = build_club_window(3, 0, 2).unwrap();
        let e = w.find(Part::Epep).unwrap();
        let d2 = w.find(Part::OmegaDualPlus { i: 2 }).unwrap();
        let (ca, _) = w.locate(w.mul(&sparse::unit(w.global(e, 0)), &sparse::unit(w.global(e, nm.beta_partner(0).unwrap())))[0].0);
        assert_eq!(ca, d2);
    }

    #[test]
    fn beta_pairs_complementary_monomials_at_p3() {
        let nm = NaturalMaps::new(3).unwrap();
        let co = &nm.co;
        for u in 0..co.epep.dim() {
            let eu = co.epep.element(u);
            let v = nm.beta_partner(u).unwrap();
            let ev = co.epep.element(v);
            assert_eq!((ev.left, ev.right), (eu.right, eu.left));
            assert_eq!(ev.counts, vec![2 - eu.counts[X], 2 - eu.counts[Y]]);
            assert_eq!(nm.beta(v, u), 1);
        }
    }

    #[test]
    fn theta_form_nakayama() {
        for p in [3u32, 5] {
            let nm = NaturalMaps::new(p).unwrap();
            let n = nm.co.theta_algebra.dim();
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(nm.theta_form(a, b), nm.theta_form(b, nm.sigma(a)));
                }
            }
            let rows: Vec<Vec<u32>> = (0..n).map(|a| (0..n).map(|b| nm.theta_form(a, b)).collect()).collect();
            assert_eq!(crate::exactlin::Matrix::from_rows(nm.field(), n, &rows).rank(), n);
        }
    }

    #[test]
    fn gamma_kills_non_ideal_duals() {
        let nm = NaturalMaps::new(5).unwrap();
        let co = &nm.co;
        for w in 0..co.omega.dim() {
            let in_ideal = co.epep_embedding.contains(&w);
            assert_eq!(nm.gamma(w).is_empty(), !in_ideal);
        }
    }
}
