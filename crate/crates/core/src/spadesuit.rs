//! The algebra ♠ = HH(Ω, ♣), component by component, with its basis on the
//! `(a, b)` grid and a closed-form product.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::clubsuit::{build_club_window, ClubError, ClubWindow, GridComponent, ModuleKind, Part};
use crate::exactlin::Field;
use crate::koszulhh::{build_model, cup, homology_named, kz_name, z_name, CoefficientKind, HHError, HHModule, Pairing};
use crate::quiver::Degree;
use crate::sparse::{self, Lin, LinBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpadeError {
    #[error("p = {0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("the window contains no basis element")]
    WindowEmpty,
    #[error("product lands at (a, b) = ({0}, {1}), outside the window")]
    OutOfWindow(i64, i64),
    #[error("no basis element {0}")]
    UnknownElement(String),
    #[error(transparent)]
    Club(#[from] ClubError),
    #[error(transparent)]
    HH(#[from] HHError),
}

/// The seven kinds of component of ♠.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpadeKind {
    ChiMinus,
    ChiBarMinus,
    ChiBarStarMinus,
    ChiUnder,
    ChiBarPlus,
    ChiBarStarPlus,
    Omega0Plus,
}

/// The χ-bimodule a component is isomorphic to, forgetting shifts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Chi,
    ChiBar,
    ChiBarStar,
    ChiUnder,
    Omega0,
}

impl SpadeKind {
    pub const ALL: [SpadeKind; 7] = [
        SpadeKind::ChiMinus,
        SpadeKind::ChiBarMinus,
        SpadeKind::ChiBarStarMinus,
        SpadeKind::ChiUnder,
        SpadeKind::ChiBarPlus,
        SpadeKind::ChiBarStarPlus,
        SpadeKind::Omega0Plus,
    ];

    /// Kind of the component at grid position `(a, b)`, if any.
    pub fn at(a: i64, b: i64) -> Option<SpadeKind> {
        use SpadeKind::*;
        match (a, b) {
            (a, 0) if a <= 0 => Some(ChiMinus),
            (a, b) if a <= 0 && b <= -1 => Some(if b % 2 == 0 { ChiBarMinus } else { ChiBarStarMinus }),
            (1, 0) => Some(ChiUnder),
            (a, 0) if a >= 2 => Some(Omega0Plus),
            (a, b) if a >= 2 && b >= 1 => Some(if b % 2 == 1 { ChiBarPlus } else { ChiBarStarPlus }),
            _ => None,
        }
    }

    pub fn family(self) -> Family {
        use SpadeKind::*;
        match self {
            ChiMinus => Family::Chi,
            ChiBarMinus | ChiBarPlus => Family::ChiBar,
            ChiBarStarMinus | ChiBarStarPlus => Family::ChiBarStar,
            ChiUnder => Family::ChiUnder,
            Omega0Plus => Family::Omega0,
        }
    }

    pub fn is_plus(self) -> bool {
        matches!(self, SpadeKind::ChiUnder | SpadeKind::ChiBarPlus | SpadeKind::ChiBarStarPlus | SpadeKind::Omega0Plus)
    }

    pub fn label(self) -> &'static str {
        use SpadeKind::*;
        match self {
            ChiMinus => "chi_minus",
            ChiBarMinus => "chibar_minus",
            ChiBarStarMinus => "chibar_star_minus",
            ChiUnder => "chi_under",
            ChiBarPlus => "chibar_plus",
            ChiBarStarPlus => "chibar_star_plus",
            Omega0Plus => "omega0_plus",
        }
    }

    /// `(j, k)` added to the family degree of a class at `(a, b)`.
    pub fn offset(self, a: i64, p: i64) -> Degree {
        use SpadeKind::*;
        let (j, k) = match self {
            ChiMinus | ChiBarMinus => (a * p, a * (1 - p)),
            ChiBarStarMinus => (4 - p + a * p, p - 2 + a * (1 - p)),
            ChiUnder => (p, 1 - p),
            ChiBarPlus => (p + (a - 2) * p, 2 - p + (a - 2) * (1 - p)),
            ChiBarStarPlus => (4 + (a - 2) * p, (a - 2) * (1 - p)),
            Omega0Plus => (2 + (a - 2) * p, (a - 2) * (1 - p)),
        };
        Degree::new(j, k)
    }
}

impl Family {
    pub fn coefficient_kind(self) -> CoefficientKind {
        match self {
            Family::Chi => CoefficientKind::Omega,
            Family::ChiBar => CoefficientKind::Theta,
            Family::ChiBarStar => CoefficientKind::ThetaSigma,
            Family::ChiUnder => CoefficientKind::Epep,
            Family::Omega0 => CoefficientKind::OmegaDual,
        }
    }
}

/// One class of a family: name, family degree, idempotent label, Hochschild degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyClass {
    pub name: String,
    pub deg: Degree,
    pub x: Option<usize>,
    pub h: usize,
}

/// Canonical basis of a family with its `(j, k)` degrees.
pub fn family_basis(family: Family, p: usize) -> Vec<FamilyClass> {
    let half = (p - 1) / 2;
    let cls = |name: String, j: i64, k: i64, x: Option<usize>, h: usize| FamilyClass { name, deg: Degree::new(j, k), x, h };
    let mut out = Vec::new();
    let powers = |out: &mut Vec<FamilyClass>, lo: usize, hi: usize, kappa_hi: usize| {
        for l in lo..=hi {
            let li = l as i64;
            out.push(cls(z_name(l), -2 * li, 2 * li, None, 0));
            if l <= kappa_hi {
                out.push(cls(kz_name(l), -2 * li, 2 * li + 1, None, 1));
            }
        }
    };
    match family {
        Family::Chi | Family::ChiBar | Family::ChiUnder => {
            match family {
                Family::Chi => powers(&mut out, 0, p - 1, p - 2),
                Family::ChiBar => powers(&mut out, 0, half - 1, half - 1),
                _ => powers(&mut out, half, p - 1, p - 2),
            }
            if family != Family::ChiUnder {
                for s in 1..p {
                    out.push(cls(format!("c²_{s}"), 2, 0, Some(s), 2));
                }
            }
        }
        Family::ChiBarStar => {
            for s in 1..p {
                out.push(cls(format!("ω_{s}"), -2, 0, Some(s), 0));
            }
            for l in 1..=half as i64 {
                out.push(cls(format!("μ_{l}"), 2 * l - 2, 1 - 2 * l, None, 1));
                out.push(cls(format!("ν_{l}"), 2 * l - 2, 2 - 2 * l, None, 2));
            }
        }
        Family::Omega0 => {
            for s in 1..=p {
                out.push(cls(format!("e_{s}"), 0, 0, Some(s), 0));
            }
        }
    }
    out
}

/// Basis element `m_{a,b,i,j,k,x}` of ♠.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpadeElement {
    pub a: i64,
    pub b: i64,
    pub i: i64,
    pub j: i64,
    pub k: i64,
    /// Idempotent label; `None` stands for `1`.
    pub x: Option<usize>,
    pub kind: SpadeKind,
    /// Name of the underlying class in its family.
    pub class: String,
    /// Hochschild degree of the underlying class.
    pub h: usize,
}

impl SpadeElement {
    pub fn deg(&self) -> Degree {
        Degree::new(self.j, self.k)
    }

    pub fn name(&self) -> String {
        format!("{}@({},{})", self.class, self.a, self.b)
    }
}

/// The ♣ component whose Hochschild cohomology sits at `(a, b)`.
pub fn part_at(a: i64, b: i64) -> Option<Part> {
    use SpadeKind::*;
    Some(match SpadeKind::at(a, b)? {
        ChiMinus => Part::OmegaMinus { n: -a },
        ChiBarMinus | ChiBarStarMinus => Part::ThetaMinus { n: -a, m: -b },
        ChiUnder => Part::Epep,
        ChiBarPlus | ChiBarStarPlus => Part::ThetaPlus { i: a + b, d: b },
        Omega0Plus => Part::OmegaDualPlus { i: a },
    })
}

/// Grid position of a ♣ component.
pub fn position_of(part: Part) -> (i64, i64) {
    match part {
        Part::OmegaMinus { n } => (-n, 0),
        Part::ThetaMinus { n, m } => (-n, -m),
        Part::Epep => (1, 0),
        Part::ThetaPlus { i, d } => (i - d, d),
        Part::OmegaDualPlus { i } => (i, 0),
    }
}

/// ♠ restricted to a rectangle of the `(a, b)` grid.
#[derive(Clone, Debug)]
pub struct SpadeAlgebra {
    field: Field,
    pub p: usize,
    pub a_range: (i64, i64),
    pub b_range: (i64, i64),
    pub basis: Vec<SpadeElement>,
    index: HashMap<(i64, i64), (usize, Vec<String>)>,
    ids: Vec<ClassId>,
    by_id: HashMap<(i64, i64, ClassId), usize>,
}

pub fn build_spade(p: u32, a_range: (i64, i64), b_range: (i64, i64)) -> Result<SpadeAlgebra, SpadeError> {
    if p < 3 || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
        return Err(SpadeError::NotOddPrime(p));
    }
    let field = Field::new(p).map_err(|_| SpadeError::NotOddPrime(p))?;
    let pu = p as usize;
    let mut basis = Vec::new();
    let mut index = HashMap::new();
    for a in a_range.0..=a_range.1 {
        for b in b_range.0..=b_range.1 {
            let Some(kind) = SpadeKind::at(a, b) else { continue };
            let off = kind.offset(a, p as i64);
            let fam = family_basis(kind.family(), pu);
            index.insert((a, b), (basis.len(), fam.iter().map(|c| c.name.clone()).collect()));
            for c in fam {
                let d = c.deg + off;
                basis.push(SpadeElement { a, b, i: a + b, j: d.j, k: d.k, x: c.x, kind, class: c.name, h: c.h });
            }
        }
    }
    if basis.is_empty() {
        return Err(SpadeError::WindowEmpty);
    }
    let ids: Vec<ClassId> = basis.iter().map(|e| ClassId::parse(&e.class).expect("family class names parse")).collect();
    let by_id = basis.iter().zip(&ids).enumerate().map(|(q, (e, &c))| ((e.a, e.b, c), q)).collect();
    Ok(SpadeAlgebra { field, p: pu, a_range, b_range, basis, index, ids, by_id })
}

impl SpadeAlgebra {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn in_window(&self, a: i64, b: i64) -> bool {
        (self.a_range.0..=self.a_range.1).contains(&a) && (self.b_range.0..=self.b_range.1).contains(&b)
    }

    /// Index of the class `name` at `(a, b)`.
    pub fn find(&self, a: i64, b: i64, name: &str) -> Option<usize> {
        let (start, names) = self.index.get(&(a, b))?;
        names.iter().position(|n| n == name).map(|q| start + q)
    }

    /// Basis indices of the component at `(a, b)`.
    pub fn component(&self, a: i64, b: i64) -> std::ops::Range<usize> {
        match self.index.get(&(a, b)) {
            Some((start, names)) => *start..start + names.len(),
            None => 0..0,
        }
    }

    /// Positions of the window that carry a component.
    pub fn positions(&self) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = self.index.keys().copied().collect();
        v.sort();
        v
    }

    pub fn unit(&self) -> Option<usize> {
        self.find(0, 0, "1")
    }
}

/// 1 on the unit `m_{0,0,0,0,0,1}`, 0 on every other basis element.
pub fn augmentation(m: &SpadeElement) -> u32 {
    u32::from(m.kind == SpadeKind::ChiMinus && m.a == 0 && m.class == "1")
}

/// Hochschild cohomology of the ♣ components, multiplied by cup products
/// against the ♣ multiplication.
pub struct CupOracle {
    pub club: ClubWindow,
    modules: HashMap<(ModuleKind, bool), HHModule>,
    pairings: HashMap<(Part, Part), Option<(Part, Pairing)>>,
}

fn coefficient_kind(kind: ModuleKind) -> CoefficientKind {
    match kind {
        ModuleKind::Omega | ModuleKind::Omega0 => CoefficientKind::Omega,
        ModuleKind::Theta => CoefficientKind::Theta,
        ModuleKind::ThetaSigma => CoefficientKind::ThetaSigma,
        ModuleKind::OmegaDual => CoefficientKind::OmegaDual,
        ModuleKind::OmegaEpOmega => CoefficientKind::Epep,
    }
}

impl CupOracle {
    /// Covers all products of components in rows `i_min..=i_max`.
    pub fn new(p: u32, i_min: i64, i_max: i64) -> Result<Self, SpadeError> {
        let club = build_club_window(p, (2 * i_min).min(0), (2 * i_max).max(1))?;
        let co = &club.maps.co;
        let mut modules = HashMap::new();
        for kind in [ModuleKind::Omega, ModuleKind::Theta, ModuleKind::ThetaSigma, ModuleKind::OmegaDual, ModuleKind::OmegaEpOmega] {
            for odd in [false, true] {
                let model = build_model(&co.c, &co.omega, club.module(kind), i64::from(odd))?;
                modules.insert((kind, odd), homology_named(model, coefficient_kind(kind))?);
            }
        }
        Ok(CupOracle { club, modules, pairings: HashMap::new() })
    }

    /// Cohomology of a component, with its shift's parity.
    pub fn hh(&self, part: Part) -> &HHModule {
        let c = self.club.find(part).expect("part in window");
        let comp = &self.club.components[c];
        &self.modules[&(comp.kind, comp.kshift % 2 != 0)]
    }

    fn pairing(&mut self, p1: Part, p2: Part) -> Option<(Part, Pairing)> {
        if let Some(v) = self.pairings.get(&(p1, p2)) {
            return v.clone();
        }
        let w = &self.club;
        let (c1, c2) = (w.find(p1).expect("part in window"), w.find(p2).expect("part in window"));
        let (d1, d2) = (w.component_dim(c1), w.component_dim(c2));
        let mut target = None;
        let mut table = vec![Vec::new(); d1 * d2];
        for a in 0..d1 {
            for b in 0..d2 {
                if let Some((t, v)) = w.mul_basis(c1, a, c2, b) {
                    target = Some(t);
                    table[a * d2 + b] = v;
                }
            }
        }
        let out = target.filter(|t| w.find(*t).is_some()).map(|t| (t, Pairing::from_fn("♣", d1, d2, Degree::ZERO, |a, b| table[a * d2 + b].clone())));
        self.pairings.insert((p1, p2), out.clone());
        out
    }

    /// Cup product of class `u` of `p1` with class `v` of `p2`: target part and
    /// coordinates in its classes, `None` when the ♣ components multiply to zero.
    pub fn product(&mut self, p1: Part, u: usize, p2: Part, v: usize) -> Result<Option<(Part, Lin)>, SpadeError> {
        let Some((t, pairing)) = self.pairing(p1, p2) else { return Ok(None) };
        let r = cup(self.hh(p1), &sparse::unit(u), self.hh(p2), &sparse::unit(v), &pairing, self.hh(t))?;
        Ok(Some((t, r)))
    }

    /// Same as [`CupOracle::product`] on ♠ basis elements, in ♠ coordinates.
    pub fn spade_product(&mut self, alg: &SpadeAlgebra, m: usize, n: usize) -> Result<BTreeMap<(i64, i64, String), u32>, SpadeError> {
        let (em, en) = (&alg.basis[m], &alg.basis[n]);
        let (p1, p2) = (part_at(em.a, em.b).expect("grid"), part_at(en.a, en.b).expect("grid"));
        let u = self.hh(p1).find(&em.class).ok_or_else(|| SpadeError::UnknownElement(em.class.clone()))?;
        let v = self.hh(p2).find(&en.class).ok_or_else(|| SpadeError::UnknownElement(en.class.clone()))?;
        let mut out = BTreeMap::new();
        if let Some((t, r)) = self.product(p1, u, p2, v)? {
            let (a, b) = position_of(t);
            let hz = self.hh(t);
            for (q, c) in r {
                out.insert((a, b, hz.classes[q].name.clone()), c);
            }
        }
        Ok(out)
    }
}

/// A class of one of the families, parsed from its name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassId {
    Z(usize),
    KappaZ(usize),
    CSquared(usize),
    Socle(usize),
    Mu(usize),
    Nu(usize),
    Idem(usize),
}

impl ClassId {
    pub fn parse(name: &str) -> Option<ClassId> {
        let num = |t: &str| t.parse::<usize>().ok();
        Some(match name {
            "1" => ClassId::Z(0),
            "z" => ClassId::Z(1),
            "κ" => ClassId::KappaZ(0),
            "κz" => ClassId::KappaZ(1),
            _ => {
                if let Some(t) = name.strip_prefix("κz^") {
                    ClassId::KappaZ(num(t)?)
                } else if let Some(t) = name.strip_prefix("z^") {
                    ClassId::Z(num(t)?)
                } else if let Some(t) = name.strip_prefix("c²_") {
                    ClassId::CSquared(num(t)?)
                } else if let Some(t) = name.strip_prefix("ω_") {
                    ClassId::Socle(num(t)?)
                } else if let Some(t) = name.strip_prefix("μ_") {
                    ClassId::Mu(num(t)?)
                } else if let Some(t) = name.strip_prefix("ν_") {
                    ClassId::Nu(num(t)?)
                } else if let Some(t) = name.strip_prefix("e_") {
                    ClassId::Idem(num(t)?)
                } else {
                    return None;
                }
            }
        })
    }

    pub fn name(self) -> String {
        match self {
            ClassId::Z(l) => z_name(l),
            ClassId::KappaZ(l) => kz_name(l),
            ClassId::CSquared(s) => format!("c²_{s}"),
            ClassId::Socle(s) => format!("ω_{s}"),
            ClassId::Mu(l) => format!("μ_{l}"),
            ClassId::Nu(l) => format!("ν_{l}"),
            ClassId::Idem(s) => format!("e_{s}"),
        }
    }

    /// `k`-degree of the unshifted class.
    fn k(self, p: usize) -> i64 {
        let p = p as i64;
        match self {
            ClassId::Z(l) => 2 * l as i64,
            ClassId::KappaZ(l) => 2 * l as i64 + 1,
            ClassId::CSquared(_) | ClassId::Idem(_) => 0,
            ClassId::Socle(_) => p - 2,
            ClassId::Mu(l) => p - 2 * l as i64 - 1,
            ClassId::Nu(l) => p - 2 * l as i64,
        }
    }

    pub fn in_family(self, family: Family, p: usize) -> bool {
        use ClassId::*;
        let half = (p - 1) / 2;
        match (family, self) {
            (Family::Chi, Z(l)) => l < p,
            (Family::Chi, KappaZ(l)) => l + 1 < p,
            (Family::Chi | Family::ChiBar, CSquared(s)) => (1..p).contains(&s),
            (Family::ChiBar, Z(l) | KappaZ(l)) => l < half,
            (Family::ChiUnder, Z(l)) => (half..p).contains(&l),
            (Family::ChiUnder, KappaZ(l)) => (half..p - 1).contains(&l),
            (Family::ChiBarStar, Socle(s)) => (1..p).contains(&s),
            (Family::ChiBarStar, Mu(l) | Nu(l)) => (1..=half).contains(&l),
            (Family::Omega0, Idem(s)) => (1..=p).contains(&s),
            _ => false,
        }
    }

    fn h(self) -> usize {
        match self {
            ClassId::Z(_) | ClassId::Socle(_) | ClassId::Idem(_) => 0,
            ClassId::KappaZ(_) | ClassId::Mu(_) => 1,
            ClassId::CSquared(_) | ClassId::Nu(_) => 2,
        }
    }
}

/// How the product of two components is realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProductRule {
    /// Multiplication in `χ` or its action on a component.
    Action,
    /// `χ̄* ⊗ χ̄* → χ̄`.
    Star,
    /// `χ ⊗ Ω⁰ → χ̲` and `Ω⁰ ⊗ χ → χ̲`.
    Lozenge,
    /// `χ ⊗ Ω⁰ → χ` and `Ω⁰ ⊗ χ → χ`.
    BlackLozenge,
    /// `χ̄ ⊗ χ̄* → Ω⁰` and `χ̄* ⊗ χ̄ → Ω⁰`.
    Square,
    /// `χ̲ ⊗ χ̲ → Ω⁰`.
    Triangle,
}

/// Rule for a product of kinds landing in `target`, or `None` when the
/// components multiply to zero.
pub fn product_rule(k1: SpadeKind, k2: SpadeKind, target: SpadeKind) -> Option<ProductRule> {
    use ProductRule::*;
    use SpadeKind::*;
    let (f1, f2) = (k1.family(), k2.family());
    match (k1, k2) {
        (ChiMinus, Omega0Plus) | (Omega0Plus, ChiMinus) => match target {
            Omega0Plus => Some(Action),
            ChiUnder => Some(Lozenge),
            ChiMinus => Some(BlackLozenge),
            _ => None,
        },
        (ChiMinus, _) | (_, ChiMinus) => Some(Action),
        (ChiUnder, ChiUnder) => (target == Omega0Plus).then_some(Triangle),
        (ChiUnder, _) | (_, ChiUnder) | (Omega0Plus, _) | (_, Omega0Plus) => None,
        _ if k1.is_plus() && k2.is_plus() => None,
        _ if target == Omega0Plus => (f1 != f2).then_some(Square),
        _ if target.is_plus() != (k1.is_plus() || k2.is_plus()) => None,
        _ if f1 == Family::ChiBarStar && f2 == Family::ChiBarStar => Some(Star),
        _ => Some(Action),
    }
}

/// Shift of the `k`-degree of the ♣ component at `(a, b)`.
pub fn club_kshift(a: i64, b: i64, p: usize) -> Option<i64> {
    part_at(a, b).map(|part| GridComponent::new(part, p).kshift)
}

/// Product of two unshifted family classes under `rule`, as classes of the target family.
pub fn family_product(f: Field, p: usize, rule: ProductRule, u: ClassId, v: ClassId, target: Family) -> Vec<(ClassId, u32)> {
    use ClassId::*;
    let half = (p - 1) / 2;
    let sgn = |e: i64| f.sign(e);
    let in_family = |c: ClassId| c.in_family(target, p);
    let keep = |v: Vec<(ClassId, u32)>| v.into_iter().filter(|&(c, x)| x != 0 && in_family(c)).collect::<Vec<_>>();
    match rule {
        ProductRule::Action => {
            let chi_side = |a: ClassId| matches!(a, Z(_) | KappaZ(_) | CSquared(_));
            if chi_side(u) && chi_side(v) {
                let r = match (u, v) {
                    (Z(l), Z(m)) => Some(Z(l + m)),
                    (Z(l), KappaZ(m)) | (KappaZ(m), Z(l)) => Some(KappaZ(l + m)),
                    (Z(0), CSquared(s)) | (CSquared(s), Z(0)) => Some(CSquared(s)),
                    _ => None,
                };
                return keep(r.into_iter().map(|c| (c, 1)).collect());
            }
            if let (Idem(s), Z(0)) | (Z(0), Idem(s)) = (u, v) {
                return keep(vec![(Idem(s), 1)]);
            }
            // Left action on χ̄*; the right action differs by (−1)^{kk'}.
            let (a, m, sign) = if chi_side(u) { (u, v, 1) } else { (v, u, sgn(u.k(p) * v.k(p))) };
            let r = match (a, m) {
                (Z(l), Mu(n)) if n > l => vec![(Mu(n - l), 1)],
                (Z(l), Nu(n)) if n > l => vec![(Nu(n - l), 1)],
                (Z(0), Socle(s)) => vec![(Socle(s), 1)],
                (KappaZ(l), Mu(n)) if n > l => vec![(Nu(n - l), f.half())],
                (CSquared(s), Socle(t)) if s == t => vec![(Nu(1), f.mul(f.half(), sgn(half as i64 - s as i64)))],
                _ => vec![],
            };
            keep(r.into_iter().map(|(c, x)| (c, f.mul(x, sign))).collect())
        }
        ProductRule::Star => {
            let r = match (u, v) {
                (Mu(l), Mu(n)) if l == half && n == half => vec![(CSquared(half), 1), (CSquared(half + 1), f.neg(1))],
                (Socle(s), Mu(l)) | (Mu(l), Socle(s)) if l == half && (s == half || s == half + 1) => vec![(KappaZ(half - 1), 1)],
                _ => vec![],
            };
            keep(r)
        }
        ProductRule::Lozenge | ProductRule::BlackLozenge => match (u, v) {
            (Z(0), Idem(s)) | (Idem(s), Z(0)) if s == p => keep(vec![(Z(p - 1), 1)]),
            _ => vec![],
        },
        ProductRule::Square => match (u, v) {
            (Z(0), Socle(s)) | (Socle(s), Z(0)) => keep(vec![(Idem(s), sgn(s as i64))]),
            _ => vec![],
        },
        ProductRule::Triangle => match (u, v) {
            (Z(l), Z(m)) if l == half && m == half => keep((half + 1..=p).map(|s| (Idem(s), 1)).collect()),
            _ => vec![],
        },
    }
}

impl SpadeAlgebra {
    /// Closed-form product of basis elements `m` and `n`, in basis coordinates.
    pub fn product(&self, m: usize, n: usize) -> Result<Lin, SpadeError> {
        let f = self.field;
        let (em, en) = (&self.basis[m], &self.basis[n]);
        let (a, b) = (em.a + en.a, em.b + en.b);
        let Some(target) = SpadeKind::at(a, b) else { return Ok(Vec::new()) };
        let Some(rule) = product_rule(em.kind, en.kind, target) else { return Ok(Vec::new()) };
        let (u, v) = (self.ids[m], self.ids[n]);
        let r = family_product(f, self.p, rule, u, v, target.family());
        if r.is_empty() {
            return Ok(Vec::new());
        }
        if !self.in_window(a, b) {
            return Err(SpadeError::OutOfWindow(a, b));
        }
        let k1 = club_kshift(em.a, em.b, self.p).expect("grid");
        let sign = f.sign(k1 * v.h() as i64);
        let mut lb = LinBuilder::new();
        for (c, x) in r {
            let idx = self.by_id[&(a, b, c)];
            lb.push(idx, f.mul(sign, x));
        }
        Ok(lb.finish(f))
    }

    /// Product of two vectors; fails if any term leaves the window.
    pub fn mul(&self, x: &[(usize, u32)], y: &[(usize, u32)]) -> Result<Lin, SpadeError> {
        let f = self.field;
        let mut lb = LinBuilder::new();
        for &(m, cm) in x {
            for &(n, cn) in y {
                lb.extend_scaled(f, &self.product(m, n)?, f.mul(cm, cn));
            }
        }
        Ok(lb.finish(f))
    }
}

/// Free-function form of [`SpadeAlgebra::product`].
pub fn spade_product(alg: &SpadeAlgebra, m: usize, n: usize) -> Result<Lin, SpadeError> {
    alg.product(m, n)
}

/// Why a product of basis elements vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ZeroReason {
    /// No basis element of ♠ lives at the product's degree and position.
    Degree,
    /// Basis elements exist there, but the cup product vanishes.
    Tensor,
}

/// Tallies for one pair of component kinds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellSummary {
    pub checked: usize,
    pub nonzero: usize,
    pub zero_degree: usize,
    pub zero_tensor: usize,
    pub rules: std::collections::BTreeSet<ProductRule>,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub p: usize,
    pub pairs_checked: usize,
    pub cells: BTreeMap<(SpadeKind, SpadeKind), CellSummary>,
    pub mismatches: Vec<String>,
}

/// Default window for first-principles checks.
pub const VERIFY_A: (i64, i64) = (-2, 4);
pub const VERIFY_B: (i64, i64) = (-3, 3);

/// Reason a zero product `m · n` vanishes.
pub fn zero_reason(alg: &SpadeAlgebra, m: usize, n: usize) -> ZeroReason {
    let (em, en) = (&alg.basis[m], &alg.basis[n]);
    let (a, b) = (em.a + en.a, em.b + en.b);
    let deg = em.deg() + en.deg();
    let Some(kind) = SpadeKind::at(a, b) else { return ZeroReason::Degree };
    let off = kind.offset(a, alg.p as i64);
    if family_basis(kind.family(), alg.p).iter().any(|c| c.deg + off == deg) {
        ZeroReason::Tensor
    } else {
        ZeroReason::Degree
    }
}

/// Compares [`spade_product`] with cup products on every pair of basis
/// elements of the default window whose product stays in it; `sample_size`
/// of 0 checks all pairs, otherwise an evenly spaced subset of that size.
pub fn verify_first_principles(p: u32, sample_size: usize) -> Result<VerifyReport, SpadeError> {
    let alg = build_spade(p, VERIFY_A, VERIFY_B)?;
    let f = alg.field();
    let i_lo = VERIFY_A.0 + VERIFY_B.0;
    let i_hi = VERIFY_A.1 + VERIFY_B.1;
    let mut oracle = CupOracle::new(p, i_lo, i_hi)?;
    let mut pairs = Vec::new();
    for m in 0..alg.dim() {
        for n in 0..alg.dim() {
            let (em, en) = (&alg.basis[m], &alg.basis[n]);
            if alg.in_window(em.a + en.a, em.b + en.b) {
                pairs.push((m, n));
            }
        }
    }
    if sample_size > 0 && sample_size < pairs.len() {
        let step = pairs.len() as f64 / sample_size as f64;
        pairs = (0..sample_size).map(|q| pairs[(q as f64 * step) as usize]).collect();
    }
    let mut report = VerifyReport { p: alg.p, ..Default::default() };
    for (m, n) in pairs {
        let (em, en) = (&alg.basis[m], &alg.basis[n]);
        let closed: BTreeMap<(i64, i64, String), u32> =
            alg.product(m, n)?.into_iter().map(|(t, c)| { let e = &alg.basis[t]; ((e.a, e.b, e.class.clone()), c) }).collect();
        let cupped = oracle.spade_product(&alg, m, n)?;
        let cell = report.cells.entry((em.kind, en.kind)).or_default();
        cell.checked += 1;
        report.pairs_checked += 1;
        if closed.is_empty() {
            match zero_reason(&alg, m, n) {
                ZeroReason::Degree => cell.zero_degree += 1,
                ZeroReason::Tensor => cell.zero_tensor += 1,
            }
        } else {
            cell.nonzero += 1;
            let target = SpadeKind::at(em.a + en.a, em.b + en.b).expect("nonzero product has a target");
            cell.rules.insert(product_rule(em.kind, en.kind, target).expect("nonzero product has a rule"));
        }
        if closed != cupped {
            let show = |v: &BTreeMap<(i64, i64, String), u32>| {
                v.iter().map(|((a, b, c), x)| format!("{} {c}@({a},{b})", f.centered(*x))).collect::<Vec<_>>().join(" + ")
            };
            report.mismatches.push(format!("{} * {}: closed form [{}], cup [{}]", em.name(), en.name(), show(&closed), show(&cupped)));
        }
    }
    Ok(report)
}

/// All pairwise products of a window; `None` marks a product leaving it.
pub struct ProductTable {
    n: usize,
    entries: Vec<Option<Lin>>,
}

impl ProductTable {
    pub fn new(alg: &SpadeAlgebra) -> Self {
        let n = alg.dim();
        let mut entries = Vec::with_capacity(n * n);
        for m in 0..n {
            for q in 0..n {
                entries.push(alg.product(m, q).ok());
            }
        }
        ProductTable { n, entries }
    }

    pub fn get(&self, m: usize, q: usize) -> Option<&Lin> {
        self.entries[m * self.n + q].as_ref()
    }

    /// `v · w` for a vector `v`; `None` if any term leaves the window.
    fn left_mul(&self, f: Field, v: &[(usize, u32)], w: usize) -> Option<Lin> {
        let mut lb = LinBuilder::new();
        for &(t, c) in v {
            lb.extend_scaled(f, self.get(t, w)?, c);
        }
        Some(lb.finish(f))
    }

    fn right_mul(&self, f: Field, u: usize, v: &[(usize, u32)]) -> Option<Lin> {
        let mut lb = LinBuilder::new();
        for &(t, c) in v {
            lb.extend_scaled(f, self.get(u, t)?, c);
        }
        Some(lb.finish(f))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AssociativityReport {
    /// Triples whose double products stay in the window.
    pub triples_checked: u64,
    pub failures: Vec<(usize, usize, usize)>,
}

/// Checks `(xy)z = x(yz)` on every basis triple whose products stay in the window.
pub fn check_associativity(alg: &SpadeAlgebra, table: &ProductTable) -> AssociativityReport {
    let f = alg.field();
    let n = alg.dim();
    let mut report = AssociativityReport::default();
    let mut skipped = 0u64;
    for x in 0..n {
        for y in 0..n {
            let xy = table.get(x, y);
            for z in 0..n {
                let yz = table.get(y, z);
                let (Some(xy), Some(yz)) = (xy, yz) else {
                    skipped += 1;
                    continue;
                };
                if xy.is_empty() && yz.is_empty() {
                    continue;
                }
                match (table.left_mul(f, xy, z), table.right_mul(f, x, yz)) {
                    (Some(l), Some(r)) => {
                        if l != r {
                            report.failures.push((x, y, z));
                        }
                    }
                    _ => skipped += 1,
                }
            }
        }
    }
    report.triples_checked = (n as u64).pow(3) - skipped;
    report
}

/// Pairs of kinds whose products the table lists as zero throughout.
pub const TABLE_ZERO_CELLS: &[(SpadeKind, SpadeKind)] = {
    use SpadeKind::*;
    &[
        (ChiBarMinus, ChiUnder),
        (ChiBarMinus, Omega0Plus),
        (ChiBarStarMinus, ChiUnder),
        (ChiBarStarMinus, ChiBarStarPlus),
        (ChiBarStarMinus, Omega0Plus),
        (ChiUnder, ChiBarMinus),
        (ChiUnder, ChiBarStarMinus),
        (ChiUnder, ChiBarPlus),
        (ChiUnder, ChiBarStarPlus),
        (ChiUnder, Omega0Plus),
        (ChiBarPlus, ChiUnder),
        (ChiBarPlus, ChiBarPlus),
        (ChiBarPlus, ChiBarStarPlus),
        (ChiBarPlus, Omega0Plus),
        (ChiBarStarPlus, ChiBarStarMinus),
        (ChiBarStarPlus, ChiUnder),
        (ChiBarStarPlus, ChiBarPlus),
        (ChiBarStarPlus, ChiBarStarPlus),
        (ChiBarStarPlus, Omega0Plus),
        (Omega0Plus, ChiBarMinus),
        (Omega0Plus, ChiBarStarMinus),
        (Omega0Plus, ChiUnder),
        (Omega0Plus, ChiBarPlus),
        (Omega0Plus, ChiBarStarPlus),
        (Omega0Plus, Omega0Plus),
    ]
};

/// Zero cells where the ★ map is nonzero.
pub const STAR_CELLS_LISTED_ZERO: &[(SpadeKind, SpadeKind)] =
    &[(SpadeKind::ChiBarStarMinus, SpadeKind::ChiBarStarPlus), (SpadeKind::ChiBarStarPlus, SpadeKind::ChiBarStarMinus)];
