//! Hochschild cohomology `HH(Ω, X)` through the small cochain model
//! `D = ⊕ e_s c e_t ⊗ e_t X e_s`, plus a relative bar complex oracle.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::exactlin::{homology, sparse_rank, Field, Homology, LinError, Matrix};
use crate::quiver::{BasedAlgebra, BasedBimodule, Degree, QuiverError, ETA, XI};
use crate::sparse::{self, Lin, LinBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HHError {
    #[error("algebras and module are defined for different primes")]
    MismatchedP,
    #[error("module is not over the Koszul dual of the given algebra")]
    NonMatchingIdempotents,
    #[error("could not assign canonical names: {0}")]
    UnrecognizedSignature(String),
    #[error("input is not a cocycle")]
    NotACocycle,
    #[error("pairing has the wrong degree")]
    PairingDegreeMismatch,
    #[error("cochain space of dimension {0} exceeds the cap {1}")]
    TooLarge(usize, usize),
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// Basis element `α ⊗ m` of the model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub alpha: usize,
    pub m: usize,
    pub deg: Degree,
    /// Length of `α` in `c`.
    pub h: usize,
}

/// The cochain model with coefficients in an `Ω`-bimodule.
#[derive(Clone, Debug)]
pub struct CochainModel {
    field: Field,
    pub c: BasedAlgebra,
    pub module: BasedBimodule,
    /// Parity-relevant shift of the module's `k`-degree.
    pub k_shift: i64,
    pub cells: Vec<Cell>,
    index: HashMap<(usize, usize), usize>,
    d: Vec<Lin>,
}

/// Dual arrow in `Ω` of each arrow of `c`: `ξ ↦ y`, `η ↦ x`.
fn dual_arrows(c: &BasedAlgebra, omega: &BasedAlgebra) -> Result<Vec<(usize, usize)>, HHError> {
    let mut out = Vec::new();
    for rho in c.generators() {
        let e = c.element(rho);
        let counts = if e.counts[XI] == 1 { [0, 1] } else { [1, 0] };
        debug_assert!(e.counts[XI] + e.counts[ETA] == 1);
        let star = omega.find(e.right, e.left, &counts).ok_or(HHError::NonMatchingIdempotents)?;
        out.push((rho, star));
    }
    Ok(out)
}

impl CochainModel {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_index(&self, alpha: usize, m: usize) -> Option<usize> {
        self.index.get(&(alpha, m)).copied()
    }

    pub fn differential(&self, v: &[(usize, u32)]) -> Lin {
        let mut lb = LinBuilder::new();
        for &(i, c) in v {
            lb.extend_scaled(self.field, &self.d[i], c);
        }
        lb.finish(self.field)
    }

    pub fn is_cocycle(&self, v: &[(usize, u32)]) -> bool {
        self.differential(v).is_empty()
    }

    /// Degree `(j, k)` of a homogeneous cochain.
    pub fn degree(&self, v: &[(usize, u32)]) -> Option<(Degree, usize)> {
        let first = &self.cells[v.first()?.0];
        Some((first.deg, first.h))
    }

    /// Cochain `α ⊗ m` looked up by names, with coefficient one.
    /// Sign relating the model to the unshifted one at cell `i`.
    pub fn parity_sign(&self, i: usize) -> u32 {
        if self.k_shift % 2 == 0 {
            return 1;
        }
        self.field.sign(self.c.element(self.cells[i].alpha).left as i64)
    }

    pub fn named_cell(&self, alpha: &str, m: &str) -> Option<usize> {
        let a = self.c.find_name(alpha)?;
        let x = self.module.find_name(m)?;
        self.cell_index(a, x)
    }
}

/// Builds `D` for `X` over `Ω`. The differential is
/// `α ⊗ m ↦ Σ_ρ αρ ⊗ ρ* m − (−1)^{|m|} ρα ⊗ m ρ*`, with `|m|` the `k`-degree
/// of `m` plus `k_shift`.
pub fn build_model(c: &BasedAlgebra, omega: &BasedAlgebra, x: &BasedBimodule, k_shift: i64) -> Result<CochainModel, HHError> {
    if c.p() != omega.p() || x.field().p() != c.p() {
        return Err(HHError::MismatchedP);
    }
    if x.over() != omega.name || c.vertices() != omega.vertices() {
        return Err(HHError::NonMatchingIdempotents);
    }
    let f = c.field();
    let mut cells = Vec::new();
    let mut index = HashMap::new();
    for a in 0..c.dim() {
        let ea = c.element(a);
        for m in 0..x.dim() {
            let em = x.element(m);
            if em.left == ea.right && em.right == ea.left {
                index.insert((a, m), cells.len());
                cells.push(Cell { alpha: a, m, deg: ea.deg + em.deg, h: ea.length });
            }
        }
    }
    let arrows = dual_arrows(c, omega)?;
    let mut d = Vec::with_capacity(cells.len());
    for cell in &cells {
        let mdeg = x.element(cell.m).deg.k + k_shift;
        let right_sign = f.neg(f.sign(mdeg));
        let mut lb = LinBuilder::new();
        for &(rho, star) in &arrows {
            for &(a2, ca) in c.mul(cell.alpha, rho) {
                for &(m2, cm) in x.act_left(star, cell.m) {
                    lb.push(index[&(a2, m2)], f.mul(ca, cm));
                }
            }
            for &(a2, ca) in c.mul(rho, cell.alpha) {
                for &(m2, cm) in x.act_right(cell.m, star) {
                    lb.push(index[&(a2, m2)], f.mul(right_sign, f.mul(ca, cm)));
                }
            }
        }
        d.push(lb.finish(f));
    }
    let model = CochainModel { field: f, c: c.clone(), module: x.clone(), k_shift, cells, index, d };
    for i in 0..model.dim() {
        if !model.differential(&model.d[i]).is_empty() {
            return Err(HHError::Lin(LinError::CompositionNotZero));
        }
    }
    Ok(model)
}

/// One homology class with its representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HHClass {
    pub name: String,
    pub deg: Degree,
    pub h: usize,
    /// Vertex carrying the class when it is supported at one idempotent.
    pub vertex: Option<usize>,
    pub rep: Lin,
}

#[derive(Clone, Debug)]
struct Slot {
    cells: Vec<usize>,
    hom: Homology,
    classes: Vec<usize>,
}

/// Computed homology with a basis of named classes.
#[derive(Clone, Debug)]
pub struct HHModule {
    pub model: CochainModel,
    pub classes: Vec<HHClass>,
    /// Keyed by `(j, k − h, h)`; the differential preserves `j` and `k − h`.
    slots: BTreeMap<(i64, i64, usize), Slot>,
}

fn slot_key(c: &Cell) -> (i64, i64, usize) {
    (c.deg.j, c.deg.k - c.h as i64, c.h)
}

impl HHModule {
    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    pub fn class(&self, name: &str) -> &HHClass {
        &self.classes[self.find(name).unwrap_or_else(|| panic!("no class {name}"))]
    }

    /// Dimensions by Hochschild degree `h`.
    pub fn dims_by_h(&self) -> Vec<usize> {
        let top = self.classes.iter().map(|c| c.h).max().map_or(0, |h| h + 1);
        let mut out = vec![0; top.max(3)];
        for c in &self.classes {
            out[c.h] += 1;
        }
        out
    }

    /// Coordinates in the class basis of a cocycle.
    pub fn project(&self, v: &[(usize, u32)]) -> Result<Lin, HHError> {
        if !self.model.is_cocycle(v) {
            return Err(HHError::NotACocycle);
        }
        let f = self.model.field;
        let mut parts: BTreeMap<(i64, i64, usize), Vec<(usize, u32)>> = BTreeMap::new();
        for &(i, c) in v {
            parts.entry(slot_key(&self.model.cells[i])).or_default().push((i, c));
        }
        let mut lb = LinBuilder::new();
        for (key, part) in parts {
            let Some(slot) = self.slots.get(&key) else { continue };
            let local: HashMap<usize, usize> = slot.cells.iter().enumerate().map(|(a, &b)| (b, a)).collect();
            let mut dense = vec![0; slot.cells.len()];
            for (i, c) in part {
                dense[local[&i]] = c;
            }
            for (q, &c) in slot.hom.project(&dense).iter().enumerate() {
                lb.push(slot.classes[q], c);
            }
        }
        Ok(lb.finish(f))
    }

    /// Puts classes in the order of `names`.
    fn reorder(&mut self, names: &[String]) {
        let new_pos: Vec<usize> = self.classes.iter().map(|c| names.iter().position(|n| *n == c.name).unwrap()).collect();
        let mut classes = self.classes.clone();
        for (old, &new) in new_pos.iter().enumerate() {
            classes[new] = self.classes[old].clone();
        }
        self.classes = classes;
        for slot in self.slots.values_mut() {
            for c in slot.classes.iter_mut() {
                *c = new_pos[*c];
            }
        }
    }

    /// Replaces representatives in one slot by named cocycles.
    fn rename_slot(&mut self, key: (i64, i64, usize), named: Vec<(String, Option<usize>, Lin)>) -> Result<(), HHError> {
        let slot = self.slots.get_mut(&key).ok_or_else(|| HHError::UnrecognizedSignature(format!("no homology at {key:?}")))?;
        if named.len() != slot.classes.len() {
            return Err(HHError::UnrecognizedSignature(format!("{} names for {} classes at {key:?}", named.len(), slot.classes.len())));
        }
        let local: HashMap<usize, usize> = slot.cells.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let mut dense_reps = Vec::new();
        for (name, _, rep) in &named {
            let mut d = vec![0; slot.cells.len()];
            for &(i, c) in rep {
                let l = local.get(&i).ok_or_else(|| HHError::UnrecognizedSignature(format!("{name} leaves its slot")))?;
                d[*l] = c;
            }
            if !self.model.is_cocycle(rep) {
                return Err(HHError::UnrecognizedSignature(format!("{name} is not a cocycle")));
            }
            dense_reps.push(d);
        }
        slot.hom.rebase(dense_reps).map_err(|_| HHError::UnrecognizedSignature(format!("names at {key:?} are not a basis")))?;
        for (q, (name, vertex, rep)) in named.into_iter().enumerate() {
            let cls = &mut self.classes[slot.classes[q]];
            cls.name = name;
            cls.vertex = vertex;
            cls.rep = rep;
        }
        Ok(())
    }
}

/// Homology with automatically generated names `h<h>(<j>,<k>)#<n>`.
pub fn homology_raw(model: CochainModel) -> Result<HHModule, HHError> {
    let f = model.field;
    let mut groups: BTreeMap<(i64, i64, usize), Vec<usize>> = BTreeMap::new();
    for (i, c) in model.cells.iter().enumerate() {
        groups.entry(slot_key(c)).or_default().push(i);
    }
    let mut classes = Vec::new();
    let mut slots = BTreeMap::new();
    for (key, cells) in &groups {
        let (j, kh, h) = *key;
        let empty = Vec::new();
        let prev = if h == 0 { &empty } else { groups.get(&(j, kh, h - 1)).unwrap_or(&empty) };
        let next = groups.get(&(j, kh, h + 1)).unwrap_or(&empty);
        let local: HashMap<usize, usize> = cells.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let next_local: HashMap<usize, usize> = next.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let mut d_in = Matrix::zeros(f, cells.len(), prev.len());
        for (col, &i) in prev.iter().enumerate() {
            for &(t, c) in &model.d[i] {
                d_in.set(local[&t], col, c);
            }
        }
        let mut d_out = Matrix::zeros(f, next.len(), cells.len());
        for (col, &i) in cells.iter().enumerate() {
            for &(t, c) in &model.d[i] {
                d_out.set(next_local[&t], col, c);
            }
        }
        let hom = homology(&d_in, &d_out)?;
        if hom.dimension == 0 {
            continue;
        }
        let mut ids = Vec::new();
        for (n, r) in hom.representatives.iter().enumerate() {
            let rep: Lin = r.iter().enumerate().filter(|t| *t.1 != 0).map(|(q, &c)| (cells[q], c)).collect();
            let cell = &model.cells[rep[0].0];
            ids.push(classes.len());
            classes.push(HHClass { name: format!("h{h}({},{})#{n}", cell.deg.j, cell.deg.k), deg: cell.deg, h, vertex: None, rep });
        }
        slots.insert(*key, Slot { cells: cells.clone(), hom, classes: ids });
    }
    Ok(HHModule { model, classes, slots })
}

/// The coefficient bimodules with canonical class names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientKind {
    Omega,
    Theta,
    ThetaSigma,
    OmegaDual,
    Epep,
}

pub fn z_name(l: usize) -> String {
    match l {
        0 => "1".into(),
        1 => "z".into(),
        _ => format!("z^{l}"),
    }
}

pub fn kz_name(l: usize) -> String {
    match l {
        0 => "κ".into(),
        1 => "κz".into(),
        _ => format!("κz^{l}"),
    }
}

struct Namer<'a> {
    model: &'a CochainModel,
    f: Field,
}

impl Namer<'_> {
    /// Cell `α ⊗ m` from signatures `(left, right, [#ξ, #η])` and `(left, [#x, #y])`.
    fn cell(&self, a: (usize, usize, [usize; 2]), m: (usize, [usize; 2])) -> Result<usize, HHError> {
        let c = &self.model.c;
        let x = &self.model.module;
        let miss = || HHError::UnrecognizedSignature(format!("no cell {a:?} ⊗ {m:?}"));
        let ai = if a.2 == [0, 0] { c.idempotent(a.0) } else { c.find(a.0, a.1, &a.2) }.ok_or_else(miss)?;
        let mi = (0..x.dim())
            .find(|&i| {
                let e = x.element(i);
                e.left == m.0 && e.right == a.0 && e.counts == m.1
            })
            .ok_or_else(miss)?;
        self.model.cell_index(ai, mi).ok_or_else(miss)
    }

    /// With an odd `k_shift` each cell carries the sign `(−1)^{left(α)}`.
    fn combo(&self, terms: &[(usize, i64)]) -> Lin {
        let mut lb = LinBuilder::new();
        for &(i, c) in terms {
            lb.push(i, self.f.mul(self.model.parity_sign(i), self.f.from_i64(c)));
        }
        lb.finish(self.f)
    }

    /// `Σ_s e_s ⊗ z^l e_s` over vertices where the term exists.
    fn z_power(&self, l: usize) -> Result<Lin, HHError> {
        let p = self.model.c.vertices();
        let terms: Vec<(usize, i64)> = (1..=p).filter_map(|s| self.cell((s, s, [0, 0]), (s, [l, l])).ok()).map(|i| (i, 1)).collect();
        if terms.is_empty() {
            return Err(HHError::UnrecognizedSignature(z_name(l)));
        }
        Ok(self.combo(&terms))
    }

    /// `Σ_s e_s ξ e_{s+1} ⊗ e_{s+1} y z^l e_s`.
    fn kappa_z(&self, l: usize) -> Result<Lin, HHError> {
        let p = self.model.c.vertices();
        let terms: Vec<(usize, i64)> = (1..p).filter_map(|s| self.cell((s, s + 1, [1, 0]), (s + 1, [l, l + 1])).ok()).map(|i| (i, 1)).collect();
        if terms.is_empty() {
            return Err(HHError::UnrecognizedSignature(kz_name(l)));
        }
        Ok(self.combo(&terms))
    }

    /// Loop `ξη` at `s` tensored with `e_s`.
    fn c_squared(&self, s: usize) -> Result<Lin, HHError> {
        Ok(self.combo(&[(self.cell((s, s, [1, 1]), (s, [0, 0]))?, 1)]))
    }

    /// First candidate that is a cocycle.
    fn first_cocycle(&self, name: &str, candidates: Vec<Lin>) -> Result<Lin, HHError> {
        candidates
            .into_iter()
            .find(|v| !v.is_empty() && self.model.is_cocycle(v))
            .ok_or_else(|| HHError::UnrecognizedSignature(format!("{name} has no cocycle representative")))
    }
}

/// Canonical named representatives for one of the coefficient cases.
pub fn canonical_classes(model: &CochainModel, kind: CoefficientKind) -> Result<Vec<(String, Option<usize>, Lin)>, HHError> {
    let n = Namer { model, f: model.field };
    let p = model.c.vertices();
    let half = (p - 1) / 2;
    let mut out = Vec::new();
    match kind {
        CoefficientKind::Omega | CoefficientKind::Theta | CoefficientKind::Epep => {
            let (lo, hi) = match kind {
                CoefficientKind::Omega => (0, p - 1),
                CoefficientKind::Theta => (0, half - 1),
                _ => (half, p - 1),
            };
            for l in lo..=hi {
                out.push((z_name(l), None, n.z_power(l)?));
                if l + 1 < p && (kind != CoefficientKind::Theta || l < half) {
                    out.push((kz_name(l), None, n.kappa_z(l)?));
                }
            }
            if kind != CoefficientKind::Epep {
                for s in 1..p {
                    out.push((format!("c²_{s}"), Some(s), n.c_squared(s)?));
                }
            }
        }
        CoefficientKind::OmegaDual => {
            for s in 1..=p {
                let cell = n.cell((s, s, [0, 0]), (s, [0, 0]))?;
                out.push((format!("e_{s}"), Some(s), n.combo(&[(cell, 1)])));
            }
        }
        CoefficientKind::ThetaSigma => {
            for s in 1..p {
                let cell = n.cell((s, s, [0, 0]), (s, [p - s - 1, s - 1]))?;
                out.push((format!("ω_{s}"), Some(s), n.combo(&[(cell, 1)])));
            }
            let m = half;
            for l in 1..=half {
                // f = e_m ξ e_{m+1} ⊗ x^{p-m-l-1} y^{m-l},  g = e_{m+1} η e_m ⊗ x^{p-m-l-1} y^{m-l}
                let f = n.cell((m, m + 1, [1, 0]), (m + 1, [p - m - l - 1, m - l]))?;
                let g = n.cell((m + 1, m, [0, 1]), (m, [p - m - l - 1, m - l]))?;
                let mu = n.first_cocycle(&format!("μ_{l}"), vec![n.combo(&[(f, 1), (g, 1)]), n.combo(&[(f, 1), (g, -1)])])?;
                out.push((format!("μ_{l}"), None, mu));
                // v_s = e_s ξη e_s ⊗ x^{p-s-l} y^{s-l}
                let v1 = n.cell((m, m, [1, 1]), (m, [p - m - l, m - l]))?;
                let v2 = n.cell((m + 1, m + 1, [1, 1]), (m + 1, [p - m - 1 - l, m + 1 - l]))?;
                out.push((format!("ν_{l}"), None, n.combo(&[(v1, 1), (v2, -1)])));
            }
        }
    }
    Ok(out)
}

/// Homology with canonical names for the coefficient cases.
pub fn homology_named(model: CochainModel, kind: CoefficientKind) -> Result<HHModule, HHError> {
    let named = canonical_classes(&model, kind)?;
    let mut hh = homology_raw(model)?;
    if named.len() != hh.classes.len() {
        return Err(HHError::UnrecognizedSignature(format!("{} canonical classes but homology has dimension {}", named.len(), hh.classes.len())));
    }
    let order: Vec<String> = named.iter().map(|t| t.0.clone()).collect();
    let mut by_slot: BTreeMap<(i64, i64, usize), Vec<(String, Option<usize>, Lin)>> = BTreeMap::new();
    for (name, v, rep) in named {
        let key = slot_key(&hh.model.cells[rep[0].0]);
        by_slot.entry(key).or_default().push((name, v, rep));
    }
    for (key, named) in by_slot {
        hh.rename_slot(key, named)?;
    }
    hh.reorder(&order);
    Ok(hh)
}

/// Bilinear pairing `X ⊗ Y → Z` on basis elements.
#[derive(Clone, Debug)]
pub struct Pairing {
    pub name: String,
    pub shift: Degree,
    dim_y: usize,
    table: Vec<Lin>,
}

impl Pairing {
    pub fn from_fn(name: &str, dim_x: usize, dim_y: usize, shift: Degree, f: impl Fn(usize, usize) -> Lin) -> Self {
        let mut table = Vec::with_capacity(dim_x * dim_y);
        for a in 0..dim_x {
            for b in 0..dim_y {
                table.push(f(a, b));
            }
        }
        Pairing { name: name.to_string(), shift, dim_y, table }
    }

    pub fn get(&self, a: usize, b: usize) -> &Lin {
        &self.table[a * self.dim_y + b]
    }

    /// Left action of the regular module `Ω` on `M`.
    pub fn left_action(m: &BasedBimodule, omega_dim: usize) -> Self {
        Pairing::from_fn(&format!("Ω⊗{}", m.name), omega_dim, m.dim(), Degree::ZERO, |a, x| m.act_left(a, x).clone())
    }

    /// Right action of the regular module `Ω` on `M`.
    pub fn right_action(m: &BasedBimodule, omega_dim: usize) -> Self {
        Pairing::from_fn(&format!("{}⊗Ω", m.name), m.dim(), omega_dim, Degree::ZERO, |x, a| m.act_right(x, a).clone())
    }

    /// Multiplication of `Ω`.
    pub fn algebra(omega: &BasedAlgebra) -> Self {
        Pairing::from_fn("Ω⊗Ω", omega.dim(), omega.dim(), Degree::ZERO, |a, b| omega.mul(a, b).clone())
    }
}

/// Gram matrix of `|−,−|: HH(Ω, Θ^σ) ⊗ HH(Ω, Θ) → F`, pairing `ν_{l+1}` with `z^l`,
/// `μ_{l+1}` with `½ κz^l` and `ω_s` with `½(−1)^{(p−1)/2−s} c²_s`.
pub fn duality_form(ts: &HHModule, th: &HHModule) -> Matrix {
    let f = ts.model.field;
    let half = (f.p() as i64 - 1) / 2;
    let mut m = Matrix::zeros(f, ts.dim(), th.dim());
    for (a, c) in ts.classes.iter().enumerate() {
        let (partner, v) = if let Some(l) = c.name.strip_prefix("ν_").and_then(|l| l.parse::<usize>().ok()) {
            (z_name(l - 1), 1)
        } else if let Some(l) = c.name.strip_prefix("μ_").and_then(|l| l.parse::<usize>().ok()) {
            (kz_name(l - 1), f.half())
        } else if let Some(s) = c.name.strip_prefix("ω_").and_then(|s| s.parse::<i64>().ok()) {
            (format!("c²_{s}"), f.mul(f.half(), f.sign(half - s)))
        } else {
            continue;
        };
        if let Some(b) = th.find(&partner) {
            m.set(a, b, v);
        }
    }
    m
}

/// Cup product at cochain level: `(α ⊗ x)(β ⊗ y) = βα ⊗ P(x ⊗ y)`.
pub fn cup_cochains(mx: &CochainModel, u: &[(usize, u32)], my: &CochainModel, v: &[(usize, u32)], pairing: &Pairing, mz: &CochainModel) -> Result<Lin, HHError> {
    let f = mx.field;
    let c = &mz.c;
    let mut lb = LinBuilder::new();
    for &(i, cu) in u {
        let a = &mx.cells[i];
        for &(j, cv) in v {
            let b = &my.cells[j];
            let pr = pairing.get(a.m, b.m);
            if pr.is_empty() {
                continue;
            }
            for &(g, cg) in c.mul(b.alpha, a.alpha) {
                for &(t, ct) in pr {
                    let idx = mz.cell_index(g, t).ok_or(HHError::PairingDegreeMismatch)?;
                    lb.push(idx, f.mul(f.mul(cu, cv), f.mul(cg, ct)));
                }
            }
        }
    }
    Ok(lb.finish(f))
}

/// Cup product of classes, returned in the class basis of `hz`.
pub fn cup(hx: &HHModule, u: &[(usize, u32)], hy: &HHModule, v: &[(usize, u32)], pairing: &Pairing, hz: &HHModule) -> Result<Lin, HHError> {
    let f = hx.model.field;
    let lift = |h: &HHModule, w: &[(usize, u32)]| -> Lin {
        let mut lb = LinBuilder::new();
        for &(q, c) in w {
            lb.extend_scaled(f, &h.classes[q].rep, c);
        }
        lb.finish(f)
    };
    let (ru, rv) = (lift(hx, u), lift(hy, v));
    let w = cup_cochains(&hx.model, &ru, &hy.model, &rv, pairing, &hz.model)?;
    hz.project(&w)
}

/// Cup of two named classes.
pub fn cup_named(hx: &HHModule, a: &str, hy: &HHModule, b: &str, pairing: &Pairing, hz: &HHModule) -> Result<Lin, HHError> {
    let ia = hx.find(a).ok_or_else(|| HHError::UnrecognizedSignature(a.into()))?;
    let ib = hy.find(b).ok_or_else(|| HHError::UnrecognizedSignature(b.into()))?;
    cup(hx, &sparse::unit(ia), hy, &sparse::unit(ib), pairing, hz)
}

/// Upper bound on cochain-space size for the bar oracle, from `HH2_MAX_CELLS`.
pub fn max_cells() -> usize {
    std::env::var("HH2_MAX_CELLS").ok().and_then(|s| s.parse().ok()).unwrap_or(4_000_000)
}

/// `dim HH^n(A, X)` for `n ≤ n_max` from the reduced bar complex relative to
/// the vertex subalgebra.
pub fn bar_oracle(a: &BasedAlgebra, x: &BasedBimodule, n_max: usize) -> Result<Vec<usize>, HHError> {
    if x.over() != a.name {
        return Err(HHError::NonMatchingIdempotents);
    }
    let f = a.field();
    let rad: Vec<usize> = (0..a.dim()).filter(|&i| a.element(i).length > 0).collect();
    // Composable tuples of radical basis elements by length.
    let mut tuples: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
    for n in 1..=n_max + 1 {
        let mut next = Vec::new();
        for t in &tuples[n - 1] {
            for &r in &rad {
                if t.last().map_or(true, |&l| a.element(l).right == a.element(r).left) {
                    let mut nt = t.clone();
                    nt.push(r);
                    next.push(nt);
                }
            }
        }
        tuples.push(next);
    }
    let ends = |t: &[usize]| -> Option<(usize, usize)> {
        Some((a.element(*t.first()?).left, a.element(*t.last()?).right))
    };
    // Cochain coordinates: (tuple, x) with labels matching; for n = 0 the tuple
    // is empty and x ranges over e_v X e_v.
    let mut coords: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut cindex: Vec<HashMap<(usize, usize), usize>> = Vec::new();
    let cap = max_cells();
    for (n, ts) in tuples.iter().enumerate() {
        let mut cs = Vec::new();
        let mut ix = HashMap::new();
        for (ti, t) in ts.iter().enumerate() {
            for m in 0..x.dim() {
                let em = x.element(m);
                let ok = match ends(t) {
                    Some((l, r)) => em.left == l && em.right == r,
                    None => em.left == em.right,
                };
                if ok {
                    ix.insert((ti, m), cs.len());
                    cs.push((ti, m));
                }
            }
        }
        if cs.len() > cap {
            return Err(HHError::TooLarge(cs.len(), cap));
        }
        let _ = n;
        coords.push(cs);
        cindex.push(ix);
    }
    let tindex: Vec<HashMap<&Vec<usize>, usize>> = tuples.iter().map(|ts| ts.iter().enumerate().map(|(i, t)| (t, i)).collect()).collect();
    // Internal degree of a coordinate: deg(x) − deg(tuple).
    let tdeg = |t: &[usize]| t.iter().fold(Degree::ZERO, |d, &r| d + a.element(r).deg);
    let internal = |n: usize, q: usize| -> Degree {
        let (ti, m) = coords[n][q];
        x.element(m).deg - tdeg(&tuples[n][ti])
    };
    // Rows of d_n: the image of each coordinate function, expressed as the
    // transpose of the map on coefficients. We build d_n as a matrix with rows
    // indexed by coordinates of C^{n+1} and columns by coordinates of C^n.
    let mut ranks = Vec::new();
    for n in 0..=n_max {
        let mut by_block: BTreeMap<Degree, Vec<Vec<(usize, u32)>>> = BTreeMap::new();
        for (row, &(ti, m)) in coords[n + 1].iter().enumerate() {
            let t = &tuples[n + 1][ti];
            let _ = row;
            let mut lb = LinBuilder::new();
            // (df)(r1..r_{n+1}) coefficient of x-basis m.
            // r1 · f(r2..): contributions from coordinates (t[1..], m') with r1·m' ∋ m.
            let tail = t[1..].to_vec();
            if let Some(&tj) = tindex[n].get(&tail) {
                for mp in 0..x.dim() {
                    if let Some(&q) = cindex[n].get(&(tj, mp)) {
                        let c = sparse::coeff(x.act_left(t[0], mp), m);
                        lb.push(q, c);
                    }
                }
            } else if n == 0 {
                unreachable!();
            }
            for i in 0..n {
                for &(g, cg) in a.mul(t[i], t[i + 1]) {
                    if a.element(g).length == 0 {
                        continue;
                    }
                    let mut nt = t[..i].to_vec();
                    nt.push(g);
                    nt.extend_from_slice(&t[i + 2..]);
                    if let Some(&tj) = tindex[n].get(&nt) {
                        if let Some(&q) = cindex[n].get(&(tj, m)) {
                            let s = if (i + 1) % 2 == 1 { f.neg(cg) } else { cg };
                            lb.push(q, s);
                        }
                    }
                }
            }
            let head = t[..n].to_vec();
            if let Some(&tj) = tindex[n].get(&head) {
                for mp in 0..x.dim() {
                    if let Some(&q) = cindex[n].get(&(tj, mp)) {
                        let c = sparse::coeff(x.act_right(mp, t[n]), m);
                        let s = if (n + 1) % 2 == 1 { f.neg(c) } else { c };
                        lb.push(q, s);
                    }
                }
            }
            let r = lb.finish(f);
            if r.is_empty() {
                continue;
            }
            let key = internal(n, r[0].0);
            by_block.entry(key).or_default().push(r);
        }
        ranks.push(by_block.into_values().map(|rows| sparse_rank(f, rows)).sum::<usize>());
    }
    let mut out = Vec::new();
    for n in 0..=n_max {
        let before = if n == 0 { 0 } else { ranks[n - 1] };
        out.push(coords[n].len() - ranks[n] - before);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Coefficients;

    #[test]
    fn model_total_dimension_and_d_squared() {
        for p in [3u32, 5] {
            let co = Coefficients::new(p).unwrap();
            for x in [&co.omega_mod, &co.theta, &co.theta_sigma, &co.omega_dual, &co.epep] {
                let m = build_model(&co.c, &co.omega, x, 0).unwrap();
                let mut expect = 0;
                for s in 1..=p as usize {
                    for t in 1..=p as usize {
                        let dc = co.c.basis().iter().filter(|e| e.left == s && e.right == t).count();
                        let dx = x.basis().iter().filter(|e| e.left == t && e.right == s).count();
                        expect += dc * dx;
                    }
                }
                assert_eq!(m.dim(), expect);
            }
        }
    }

    #[test]
    fn odd_shift_keeps_named_classes() {
        let co = Coefficients::new(5).unwrap();
        let cases = [
            (&co.omega_mod, CoefficientKind::Omega),
            (&co.theta, CoefficientKind::Theta),
            (&co.theta_sigma, CoefficientKind::ThetaSigma),
            (&co.omega_dual, CoefficientKind::OmegaDual),
            (&co.epep, CoefficientKind::Epep),
        ];
        for (x, kind) in cases {
            let even = homology_named(build_model(&co.c, &co.omega, x, 0).unwrap(), kind).unwrap();
            let odd = homology_named(build_model(&co.c, &co.omega, x, 3).unwrap(), kind).unwrap();
            let names = |h: &HHModule| h.classes.iter().map(|c| (c.name.clone(), c.deg, c.h)).collect::<Vec<_>>();
            assert_eq!(names(&even), names(&odd));
        }
    }

    #[test]
    fn zero_module_gives_empty_model() {
        let co = Coefficients::new(3).unwrap();
        let z = BasedBimodule::zero(&co.omega);
        assert_eq!(build_model(&co.c, &co.omega, &z, 0).unwrap().dim(), 0);
        assert_eq!(bar_oracle(&co.omega, &z, 3).unwrap(), vec![0, 0, 0, 0]);
    }
}
