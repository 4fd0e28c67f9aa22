//! Quiver algebras with relations as explicit based objects.
//!
//! Elements carry a left and right vertex label: `e_l u e_r = u`, and a product
//! `u v` can only be nonzero when `right(u) == left(v)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use thiserror::Error;

use crate::exactlin::{EchelonBasis, Field, LinError, Matrix};
use crate::sparse::{self, Lin, LinBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("modules are over different algebras")]
    IncompatibleAlgebras,
    #[error("relation {0} mixes paths with different endpoints")]
    InhomogeneousRelation(usize),
    #[error("structure check failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Lin(#[from] LinError),
}

/// `(j, k)` bidegree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree {
    pub j: i64,
    pub k: i64,
}

impl Degree {
    pub const ZERO: Degree = Degree { j: 0, k: 0 };
    pub fn new(j: i64, k: i64) -> Self {
        Degree { j, k }
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        Degree { j: self.j + o.j, k: self.k + o.k }
    }
}
impl Sub for Degree {
    type Output = Degree;
    fn sub(self, o: Degree) -> Degree {
        Degree { j: self.j - o.j, k: self.k - o.k }
    }
}
impl Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree { j: -self.j, k: -self.k }
    }
}
impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.j, self.k)
    }
}

/// Full multidegree; optional components are only populated where meaningful.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiDegree {
    pub j: i64,
    pub k: i64,
    pub h: Option<i64>,
    pub a: Option<i64>,
    pub b: Option<i64>,
    pub i: Option<i64>,
}

impl MultiDegree {
    pub fn jk(d: Degree) -> Self {
        MultiDegree { j: d.j, k: d.k, ..Default::default() }
    }

    /// Sum where every component populated on both sides is added; a
    /// component populated on only one side is dropped.
    pub fn combine(self, o: MultiDegree) -> MultiDegree {
        let both = |x: Option<i64>, y: Option<i64>| x.zip(y).map(|(x, y)| x + y);
        MultiDegree {
            j: self.j + o.j,
            k: self.k + o.k,
            h: both(self.h, o.h),
            a: both(self.a, o.a),
            b: both(self.b, o.b),
            i: both(self.i, o.i),
        }
    }
}

/// A basis element of an algebra or bimodule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub name: String,
    pub left: usize,
    pub right: usize,
    pub deg: Degree,
    /// Radical layer (path length); zero for idempotents.
    pub length: usize,
    /// Number of occurrences of each arrow letter.
    pub counts: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Arrow {
    pub letter: usize,
    pub left: usize,
    pub right: usize,
}

/// A quiver with quadratic relations. Paths are read left to right: the path
/// `a b` is nonzero in the path algebra when `a.right == b.left`.
#[derive(Clone, Debug)]
pub struct QuiverPresentation {
    pub field: Field,
    pub vertices: usize,
    pub letters: Vec<(String, Degree)>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Vec<(Vec<usize>, i64)>>,
}

impl QuiverPresentation {
    fn word_ends(&self, w: &[usize]) -> (usize, usize) {
        (self.arrows[w[0]].left, self.arrows[*w.last().unwrap()].right)
    }

    pub fn check_relations(&self) -> Result<(), QuiverError> {
        for (i, rel) in self.relations.iter().enumerate() {
            let ends: Vec<_> = rel.iter().map(|(w, _)| self.word_ends(w)).collect();
            if ends.windows(2).any(|e| e[0] != e[1]) {
                return Err(QuiverError::InhomogeneousRelation(i));
            }
            for (w, _) in rel {
                if w.windows(2).any(|ab| self.arrows[ab[0]].right != self.arrows[ab[1]].left) {
                    return Err(QuiverError::InhomogeneousRelation(i));
                }
            }
        }
        Ok(())
    }

    fn counts(&self, w: &[usize]) -> Vec<usize> {
        let mut c = vec![0; self.letters.len()];
        for &a in w {
            c[self.arrows[a].letter] += 1;
        }
        c
    }

    fn degree_of(&self, w: &[usize]) -> Degree {
        w.iter().fold(Degree::ZERO, |d, &a| d + self.letters[self.arrows[a].letter].1)
    }

    /// Computes normal forms of all paths. `rank[l]` orders letters; among
    /// paths in one homogeneous block, the lexicographically largest letter
    /// sequence is rewritten first, so the surviving (standard) paths are the
    /// lexicographically smallest ones.
    pub fn normal_forms(&self, rank: &[usize]) -> Result<NormalForms, QuiverError> {
        self.check_relations()?;
        let f = self.field;
        let key = |w: &Vec<usize>| -> Vec<usize> { w.iter().map(|&a| rank[self.arrows[a].letter]).collect() };
        let mut layers: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        let mut standard: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        // Path word -> normal form as combination of standard words (indexed globally later).
        let mut nf_words: Vec<HashMap<Vec<usize>, Vec<(Vec<usize>, u32)>>> = vec![HashMap::new()];
        let cap = 8 * self.vertices + 8;
        let mut n = 1;
        loop {
            let prev = &layers[n - 1];
            let mut layer: Vec<Vec<usize>> = Vec::new();
            if n == 1 {
                layer = (0..self.arrows.len()).map(|a| vec![a]).collect();
            } else {
                for w in prev {
                    let r = self.arrows[*w.last().unwrap()].right;
                    for (a, arr) in self.arrows.iter().enumerate() {
                        if arr.left == r {
                            let mut nw = w.clone();
                            nw.push(a);
                            layer.push(nw);
                        }
                    }
                }
            }
            if layer.is_empty() {
                break;
            }
            // Group into homogeneous blocks (left, right, letter counts).
            let mut blocks: BTreeMap<(usize, usize, Vec<usize>), Vec<Vec<usize>>> = BTreeMap::new();
            for w in &layer {
                let (l, r) = self.word_ends(w);
                blocks.entry((l, r, self.counts(w))).or_default().push(w.clone());
            }
            // Ideal generators u * rel * v.
            let mut gens: HashMap<(usize, usize, Vec<usize>), Vec<Vec<(Vec<usize>, u32)>>> = HashMap::new();
            if n >= 2 {
                for rel in &self.relations {
                    let (rl, rr) = self.word_ends(&rel[0].0);
                    for pos in 0..=(n - 2) {
                        let prefixes: Vec<Vec<usize>> = if pos == 0 {
                            vec![Vec::new()]
                        } else {
                            layers[pos].iter().filter(|w| self.arrows[*w.last().unwrap()].right == rl).cloned().collect()
                        };
                        let slen = n - 2 - pos;
                        let suffixes: Vec<Vec<usize>> = if slen == 0 {
                            vec![Vec::new()]
                        } else {
                            layers[slen].iter().filter(|w| self.arrows[w[0]].left == rr).cloned().collect()
                        };
                        for u in &prefixes {
                            for v in &suffixes {
                                let mut g = Vec::new();
                                for (rw, c) in rel {
                                    let mut w = u.clone();
                                    w.extend_from_slice(rw);
                                    w.extend_from_slice(v);
                                    g.push((w, f.from_i64(*c)));
                                }
                                let (l, r) = self.word_ends(&g[0].0);
                                let cnt = self.counts(&g[0].0);
                                gens.entry((l, r, cnt)).or_default().push(g);
                            }
                        }
                    }
                }
            }
            let mut std_n = Vec::new();
            let mut nf_n: HashMap<Vec<usize>, Vec<(Vec<usize>, u32)>> = HashMap::new();
            for (bkey, mut words) in blocks {
                // Column 0 is the largest word.
                words.sort_by_key(|w| std::cmp::Reverse(key(w)));
                let col: HashMap<&Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
                let mut pivots: BTreeMap<usize, Lin> = BTreeMap::new();
                if let Some(gs) = gens.get(&bkey) {
                    for g in gs {
                        let mut lb = LinBuilder::new();
                        for (w, c) in g {
                            lb.push(col[w], *c);
                        }
                        let mut row = lb.finish(f);
                        while let Some(&(lead, lv)) = row.first() {
                            match pivots.get(&lead) {
                                Some(prow) => row = sparse::add(f, &row, &sparse::scale(f, prow, f.neg(lv))),
                                None => {
                                    let inv = f.inv(lv);
                                    pivots.insert(lead, sparse::scale(f, &row, inv));
                                    break;
                                }
                            }
                        }
                    }
                }
                // Back substitution from the smallest words upward.
                let mut nf_cols: HashMap<usize, Lin> = HashMap::new();
                for c in (0..words.len()).rev() {
                    match pivots.get(&c) {
                        None => {
                            nf_cols.insert(c, sparse::unit(c));
                            std_n.push(words[c].clone());
                        }
                        Some(row) => {
                            let mut lb = LinBuilder::new();
                            for &(oc, ov) in &row[1..] {
                                lb.extend_scaled(f, &nf_cols[&oc], f.neg(ov));
                            }
                            nf_cols.insert(c, lb.finish(f));
                        }
                    }
                }
                for (c, w) in words.iter().enumerate() {
                    let v = nf_cols[&c].iter().map(|&(sc, x)| (words[sc].clone(), x)).collect();
                    nf_n.insert(w.clone(), v);
                }
            }
            let empty = std_n.is_empty();
            layers.push(layer);
            standard.push(std_n);
            nf_words.push(nf_n);
            if empty {
                break;
            }
            n += 1;
            if n > cap {
                return Err(QuiverError::CheckFailed("path lengths do not terminate".into()));
            }
        }
        Ok(NormalForms { presentation: self.clone(), rank: rank.to_vec(), standard, nf_words })
    }
}

/// Normal forms of all paths of a presentation under one letter order.
pub struct NormalForms {
    presentation: QuiverPresentation,
    rank: Vec<usize>,
    standard: Vec<Vec<Vec<usize>>>,
    nf_words: Vec<HashMap<Vec<usize>, Vec<(Vec<usize>, u32)>>>,
}

impl NormalForms {
    /// Standard paths of each length, sorted.
    pub fn standard_words(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for layer in &self.standard {
            let mut l = layer.clone();
            let q = &self.presentation;
            let rank = &self.rank;
            l.sort_by_key(|w| (q.arrows[w[0]].left, w.iter().map(|&a| rank[q.arrows[a].letter]).collect::<Vec<_>>()));
            out.extend(l);
        }
        out
    }

    /// Signature `(left, right, counts)` of every basis element, sorted.
    pub fn signature(&self) -> Vec<(usize, usize, Vec<usize>)> {
        let q = &self.presentation;
        let mut s: Vec<_> = (1..=q.vertices).map(|v| (v, v, vec![0; q.letters.len()])).collect();
        for w in self.standard_words() {
            let (l, r) = q.word_ends(&w);
            s.push((l, r, q.counts(&w)));
        }
        s.sort();
        s
    }

    /// Builds the based algebra: idempotents first, then standard paths by length.
    pub fn into_algebra(self, name: &str, namer: &dyn Fn(usize, &[usize], usize, &[usize]) -> String) -> BasedAlgebra {
        let q = &self.presentation;
        let f = q.field;
        let mut basis = Vec::new();
        for v in 1..=q.vertices {
            basis.push(Element {
                name: format!("e{v}"),
                left: v,
                right: v,
                deg: Degree::ZERO,
                length: 0,
                counts: vec![0; q.letters.len()],
            });
        }
        let words = self.standard_words();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        for w in &words {
            let (l, r) = q.word_ends(w);
            let letters: Vec<usize> = w.iter().map(|&a| q.arrows[a].letter).collect();
            let counts = q.counts(w);
            index.insert(w.clone(), basis.len());
            basis.push(Element {
                name: namer(l, &letters, r, &counts),
                left: l,
                right: r,
                deg: q.degree_of(w),
                length: w.len(),
                counts,
            });
        }
        let n = basis.len();
        let nv = q.vertices;
        let mut table = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                if basis[i].right != basis[j].left {
                    continue;
                }
                let prod = if i < nv {
                    sparse::unit(j)
                } else if j < nv {
                    sparse::unit(i)
                } else {
                    let mut w = words[i - nv].clone();
                    w.extend_from_slice(&words[j - nv]);
                    match self.nf_words.get(w.len()).and_then(|m| m.get(&w)) {
                        None => Vec::new(),
                        Some(nf) => {
                            let mut lb = LinBuilder::new();
                            for (sw, c) in nf {
                                lb.push(index[sw], *c);
                            }
                            lb.finish(f)
                        }
                    }
                };
                table[i * n + j] = prod;
            }
        }
        BasedAlgebra { name: name.to_string(), field: f, vertices: nv, basis, table }
    }
}

/// A finite-dimensional algebra with explicit basis and structure constants.
#[derive(Clone, Debug)]
pub struct BasedAlgebra {
    pub name: String,
    field: Field,
    vertices: usize,
    basis: Vec<Element>,
    table: Vec<Lin>,
}

impl BasedAlgebra {
    pub fn field(&self) -> Field {
        self.field
    }
    pub fn p(&self) -> u32 {
        self.field.p()
    }
    pub fn vertices(&self) -> usize {
        self.vertices
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Element] {
        &self.basis
    }
    pub fn element(&self, i: usize) -> &Element {
        &self.basis[i]
    }

    /// Index of the idempotent `e_v`; idempotents come first in every basis
    /// built here, but vertices killed by a quotient are absent.
    pub fn idempotent(&self, v: usize) -> Option<usize> {
        self.basis.iter().position(|e| e.length == 0 && e.left == v)
    }

    pub fn mul(&self, i: usize, j: usize) -> &Lin {
        &self.table[i * self.basis.len() + j]
    }

    pub fn mul_lin(&self, u: &[(usize, u32)], v: &[(usize, u32)]) -> Lin {
        let f = self.field;
        let mut lb = LinBuilder::new();
        for &(i, a) in u {
            for &(j, b) in v {
                lb.extend_scaled(f, self.mul(i, j), f.mul(a, b));
            }
        }
        lb.finish(f)
    }

    pub fn unit(&self) -> Lin {
        (0..self.dim()).filter(|&i| self.basis[i].length == 0).map(|i| (i, 1)).collect()
    }

    /// Finds the basis element with a given signature.
    pub fn find(&self, left: usize, right: usize, counts: &[usize]) -> Option<usize> {
        self.basis.iter().position(|e| e.left == left && e.right == right && e.counts == counts)
    }

    pub fn find_name(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|e| e.name == name)
    }

    /// Arrow-layer basis elements, which generate the radical.
    pub fn generators(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].length == 1).collect()
    }

    pub fn check_associativity(&self) -> Result<(), QuiverError> {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                if ab.is_empty() && self.basis[a].right != self.basis[b].left {
                    continue;
                }
                for c in 0..n {
                    let l = self.mul_lin(ab, &sparse::unit(c));
                    let r = self.mul_lin(&sparse::unit(a), self.mul(b, c));
                    if l != r {
                        return Err(QuiverError::CheckFailed(format!(
                            "({}*{})*{} != {}*({}*{})",
                            self.basis[a].name, self.basis[b].name, self.basis[c].name, self.basis[a].name, self.basis[b].name, self.basis[c].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_unit_and_idempotents(&self) -> Result<(), QuiverError> {
        let one = self.unit();
        for i in 0..self.dim() {
            let u = sparse::unit(i);
            if self.mul_lin(&one, &u) != u || self.mul_lin(&u, &one) != u {
                return Err(QuiverError::CheckFailed(format!("unit fails on {}", self.basis[i].name)));
            }
            let e = &self.basis[i];
            for j in 0..self.dim() {
                let o = &self.basis[j];
                if e.length == 0 && o.length == 0 {
                    let expect = if i == j { sparse::unit(i) } else { Vec::new() };
                    if *self.mul(i, j) != expect {
                        return Err(QuiverError::CheckFailed("idempotents not orthogonal".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Every nonzero structure constant respects labels and adds degrees.
    pub fn check_degrees(&self) -> Result<(), QuiverError> {
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                for &(c, _) in self.mul(a, b) {
                    let (ea, eb, ec) = (&self.basis[a], &self.basis[b], &self.basis[c]);
                    if ea.right != eb.left || ec.left != ea.left || ec.right != eb.right || ec.deg != ea.deg + eb.deg {
                        return Err(QuiverError::CheckFailed(format!("{} * {} -> {}", ea.name, eb.name, ec.name)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Dimension of the centre `{u : u g = g u}` for all generators and idempotents.
    pub fn center_basis(&self) -> Vec<Lin> {
        let f = self.field;
        let n = self.dim();
        let mut tests: Vec<usize> = self.generators();
        tests.extend((0..n).filter(|&i| self.basis[i].length == 0));
        let mut m = Matrix::zeros(f, n * tests.len(), n);
        for (t, &g) in tests.iter().enumerate() {
            for u in 0..n {
                for &(c, v) in self.mul(u, g) {
                    m.add_to(t * n + c, u, v);
                }
                for &(c, v) in self.mul(g, u) {
                    m.add_to(t * n + c, u, f.neg(v));
                }
            }
        }
        let (_, ker) = crate::exactlin::rank_and_kernel(&m);
        ker.iter().map(|v| sparse::from_dense(v)).collect()
    }

    /// Quotient by the two-sided ideal generated by the idempotent `e_v`.
    /// Requires the ideal to be spanned by basis elements, which holds for the
    /// monomial algebras built here; returns the quotient and the projection.
    pub fn quotient_by_vertex(&self, v: usize, name: &str) -> Result<(BasedAlgebra, Vec<Lin>), QuiverError> {
        let ev = self.idempotent(v).ok_or_else(|| QuiverError::CheckFailed(format!("no vertex {v}")))?;
        let n = self.dim();
        let mut in_ideal = vec![false; n];
        let mut span = EchelonBasis::new(self.field, n);
        for u in 0..n {
            let ue = self.mul(u, ev);
            if ue.is_empty() {
                continue;
            }
            for w in 0..n {
                let g = self.mul_lin(ue, &sparse::unit(w));
                if g.is_empty() {
                    continue;
                }
                if g.len() != 1 {
                    return Err(QuiverError::CheckFailed("ideal is not monomial".into()));
                }
                in_ideal[g[0].0] = true;
                span.insert(&sparse::to_dense(&g, n));
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&i| !in_ideal[i]).collect();
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let project = |l: &Lin| -> Lin { l.iter().filter_map(|&(i, c)| pos.get(&i).map(|&q| (q, c))).collect() };
        let m = keep.len();
        let mut table = vec![Vec::new(); m * m];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                table[a * m + b] = project(self.mul(i, j));
            }
        }
        let basis = keep.iter().map(|&i| self.basis[i].clone()).collect();
        let proj: Vec<Lin> = (0..n).map(|i| project(&sparse::unit(i))).collect();
        let q = BasedAlgebra { name: name.to_string(), field: self.field, vertices: self.vertices, basis, table };
        Ok((q, proj))
    }
}

/// A bimodule over a based algebra, with explicit action constants.
#[derive(Clone, Debug)]
pub struct BasedBimodule {
    pub name: String,
    field: Field,
    /// Name of the algebra acting, used for compatibility checks.
    over: String,
    alg_dim: usize,
    basis: Vec<Element>,
    left: Vec<Lin>,
    right: Vec<Lin>,
}

impl BasedBimodule {
    pub fn field(&self) -> Field {
        self.field
    }
    pub fn over(&self) -> &str {
        &self.over
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Element] {
        &self.basis
    }
    pub fn element(&self, i: usize) -> &Element {
        &self.basis[i]
    }

    /// `a . m`
    pub fn act_left(&self, a: usize, m: usize) -> &Lin {
        &self.left[a * self.basis.len() + m]
    }

    /// `m . a`
    pub fn act_right(&self, m: usize, a: usize) -> &Lin {
        &self.right[m * self.alg_dim + a]
    }

    pub fn act_left_lin(&self, a: usize, v: &[(usize, u32)]) -> Lin {
        let mut lb = LinBuilder::new();
        for &(m, c) in v {
            lb.extend_scaled(self.field, self.act_left(a, m), c);
        }
        lb.finish(self.field)
    }

    pub fn act_right_lin(&self, v: &[(usize, u32)], a: usize) -> Lin {
        let mut lb = LinBuilder::new();
        for &(m, c) in v {
            lb.extend_scaled(self.field, self.act_right(m, a), c);
        }
        lb.finish(self.field)
    }

    pub fn find_name(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|e| e.name == name)
    }

    /// The zero bimodule.
    pub fn zero(a: &BasedAlgebra) -> Self {
        BasedBimodule { name: "0".into(), field: a.field, over: a.name.clone(), alg_dim: a.dim(), basis: vec![], left: vec![], right: vec![] }
    }

    /// The regular bimodule `A`.
    pub fn regular(a: &BasedAlgebra) -> Self {
        let n = a.dim();
        let mut left = vec![Vec::new(); n * n];
        let mut right = vec![Vec::new(); n * n];
        for x in 0..n {
            for m in 0..n {
                left[x * n + m] = a.mul(x, m).clone();
                right[m * n + x] = a.mul(m, x).clone();
            }
        }
        BasedBimodule { name: a.name.clone(), field: a.field, over: a.name.clone(), alg_dim: n, basis: a.basis.clone(), left, right }
    }

    /// The algebra `b` viewed as an `a`-bimodule through a homomorphism
    /// `phi: a -> b` given on basis elements.
    pub fn restricted(b: &BasedAlgebra, a: &BasedAlgebra, phi: &[Lin]) -> Self {
        let f = b.field;
        let (na, nb) = (a.dim(), b.dim());
        let mut left = vec![Vec::new(); na * nb];
        let mut right = vec![Vec::new(); nb * na];
        for x in 0..na {
            for m in 0..nb {
                left[x * nb + m] = b.mul_lin(&phi[x], &sparse::unit(m));
                right[m * na + x] = b.mul_lin(&sparse::unit(m), &phi[x]);
            }
        }
        let _ = f;
        BasedBimodule { name: b.name.clone(), field: b.field, over: a.name.clone(), alg_dim: na, basis: b.basis.clone(), left, right }
    }

    /// Twists the right action by an algebra endomorphism `psi` and relabels
    /// right vertices by `vmap`: the new right action is `m . psi(a)`.
    pub fn twist_right(&self, psi: &[Lin], vmap: &dyn Fn(usize) -> usize, name: &str) -> Self {
        let f = self.field;
        let mut out = self.clone();
        out.name = name.to_string();
        for e in out.basis.iter_mut() {
            e.right = vmap(e.right);
        }
        for m in 0..self.dim() {
            for a in 0..self.alg_dim {
                let mut lb = LinBuilder::new();
                for &(b, c) in &psi[a] {
                    lb.extend_scaled(f, self.act_right(m, b), c);
                }
                out.right[m * self.alg_dim + a] = lb.finish(f);
            }
        }
        out
    }

    /// Linear dual: `(a.f)(m) = f(m.a)` and `(f.a)(m) = f(a.m)`; degrees and
    /// labels are reversed.
    pub fn dual(&self, name: &str) -> Self {
        let n = self.dim();
        let na = self.alg_dim;
        let basis: Vec<Element> = self
            .basis
            .iter()
            .map(|e| Element {
                name: format!("{}*", e.name),
                left: e.right,
                right: e.left,
                deg: -e.deg,
                length: e.length,
                counts: e.counts.clone(),
            })
            .collect();
        let mut left: Vec<LinBuilder> = (0..na * n).map(|_| LinBuilder::new()).collect();
        let mut right: Vec<LinBuilder> = (0..n * na).map(|_| LinBuilder::new()).collect();
        for a in 0..na {
            for mp in 0..n {
                // coefficient of m in m'.a gives a.m* += c m'*
                for &(m, c) in self.act_right(mp, a) {
                    left[a * n + m].push(mp, c);
                }
                // coefficient of m in a.m' gives m*.a += c m'*
                for &(m, c) in self.act_left(a, mp) {
                    right[m * na + a].push(mp, c);
                }
            }
        }
        let f = self.field;
        BasedBimodule {
            name: name.to_string(),
            field: f,
            over: self.over.clone(),
            alg_dim: na,
            basis,
            left: left.into_iter().map(|b| b.finish(f)).collect(),
            right: right.into_iter().map(|b| b.finish(f)).collect(),
        }
    }

    /// Sub-bimodule spanned by a set of basis elements; fails if not closed.
    pub fn sub_spanned(&self, keep: &[usize], name: &str) -> Result<(Self, Vec<usize>), QuiverError> {
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let na = self.alg_dim;
        let m = keep.len();
        let map = |l: &Lin| -> Result<Lin, QuiverError> {
            l.iter()
                .map(|&(i, c)| pos.get(&i).map(|&q| (q, c)).ok_or_else(|| QuiverError::CheckFailed("sub-bimodule not closed".into())))
                .collect()
        };
        let mut left = vec![Vec::new(); na * m];
        let mut right = vec![Vec::new(); m * na];
        for (q, &i) in keep.iter().enumerate() {
            for a in 0..na {
                left[a * m + q] = map(self.act_left(a, i))?;
                right[q * na + a] = map(self.act_right(i, a))?;
            }
        }
        let basis = keep.iter().map(|&i| self.basis[i].clone()).collect();
        Ok((
            BasedBimodule { name: name.to_string(), field: self.field, over: self.over.clone(), alg_dim: na, basis, left, right },
            keep.to_vec(),
        ))
    }

    /// Verifies the bimodule axioms on all basis triples.
    pub fn check_axioms(&self, a: &BasedAlgebra) -> Result<(), QuiverError> {
        if a.name != self.over || a.dim() != self.alg_dim {
            return Err(QuiverError::IncompatibleAlgebras);
        }
        let n = self.dim();
        let na = a.dim();
        for m in 0..n {
            let e = &self.basis[m];
            let el = a.idempotent(e.left).map(|i| self.act_left(i, m).clone());
            let er = a.idempotent(e.right).map(|i| self.act_right(m, i).clone());
            if el != Some(sparse::unit(m)) || er != Some(sparse::unit(m)) {
                return Err(QuiverError::CheckFailed(format!("labels of {} in {}", e.name, self.name)));
            }
            for x in 0..na {
                for y in 0..na {
                    // (x m) y = x (m y)
                    let l = self.act_right_lin(self.act_left(x, m), y);
                    let r = self.act_left_lin(x, self.act_right(m, y));
                    if l != r {
                        return Err(QuiverError::CheckFailed(format!("({} {}) {} in {}", a.basis[x].name, e.name, a.basis[y].name, self.name)));
                    }
                    // (x y) m = x (y m)
                    let mut lb = LinBuilder::new();
                    for &(c, v) in a.mul(x, y) {
                        lb.extend_scaled(self.field, self.act_left(c, m), v);
                    }
                    let l = lb.finish(self.field);
                    let r = self.act_left_lin(x, self.act_left(y, m));
                    if l != r {
                        return Err(QuiverError::CheckFailed(format!("left action associativity in {}", self.name)));
                    }
                    let mut lb = LinBuilder::new();
                    for &(c, v) in a.mul(x, y) {
                        lb.extend_scaled(self.field, self.act_right(m, c), v);
                    }
                    let l = lb.finish(self.field);
                    let r = self.act_right_lin(self.act_right(m, x), y);
                    if l != r {
                        return Err(QuiverError::CheckFailed(format!("right action associativity in {}", self.name)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Nonzero actions add degrees.
    pub fn check_degrees(&self, a: &BasedAlgebra) -> Result<(), QuiverError> {
        for x in 0..a.dim() {
            for m in 0..self.dim() {
                for &(c, _) in self.act_left(x, m) {
                    if self.basis[c].deg != a.basis[x].deg + self.basis[m].deg {
                        return Err(QuiverError::CheckFailed(format!("left degree {} {}", a.basis[x].name, self.basis[m].name)));
                    }
                }
                for &(c, _) in self.act_right(m, x) {
                    if self.basis[c].deg != a.basis[x].deg + self.basis[m].deg {
                        return Err(QuiverError::CheckFailed(format!("right degree {} {}", self.basis[m].name, a.basis[x].name)));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Tensor product `M ⊗_A N` as a quotient of `M ⊗_{A^0} N`.
pub fn tensor_over(m: &BasedBimodule, n: &BasedBimodule, a: &BasedAlgebra) -> Result<BasedBimodule, QuiverError> {
    tensor_over_with_pairs(m, n, a).map(|t| t.0)
}

/// As [`tensor_over`], also returning the pair `(m, n)` of basis elements
/// whose class each basis element of the quotient is.
pub fn tensor_over_with_pairs(m: &BasedBimodule, n: &BasedBimodule, a: &BasedAlgebra) -> Result<(BasedBimodule, Vec<(usize, usize)>), QuiverError> {
    if m.over != a.name || n.over != a.name {
        return Err(QuiverError::IncompatibleAlgebras);
    }
    let f = a.field;
    let mut pairs = Vec::new();
    let mut pidx: HashMap<(usize, usize), usize> = HashMap::new();
    for i in 0..m.dim() {
        for j in 0..n.dim() {
            if m.basis[i].right == n.basis[j].left {
                pidx.insert((i, j), pairs.len());
                pairs.push((i, j));
            }
        }
    }
    let np = pairs.len();
    let to_pairs = |lm: &Lin, ln: &Lin| -> Lin {
        let mut lb = LinBuilder::new();
        for &(i, x) in lm {
            for &(j, y) in ln {
                if let Some(&q) = pidx.get(&(i, j)) {
                    lb.push(q, f.mul(x, y));
                }
            }
        }
        lb.finish(f)
    };
    let mut rel = EchelonBasis::new(f, np);
    for i in 0..m.dim() {
        for g in a.generators() {
            for j in 0..n.dim() {
                let l = to_pairs(m.act_right(i, g), &sparse::unit(j));
                let r = to_pairs(&sparse::unit(i), n.act_left(g, j));
                let d = sparse::sub(f, &l, &r);
                if !d.is_empty() {
                    rel.insert(&sparse::to_dense(&d, np));
                }
            }
        }
    }
    // Quotient basis: pairs not reducible to zero-leading; found by reducing unit vectors.
    let mut keep = Vec::new();
    for q in 0..np {
        let mut v = vec![0; np];
        v[q] = 1;
        let before = v.clone();
        rel.reduce(&mut v);
        if v == before {
            keep.push(q);
        }
    }
    let kpos: HashMap<usize, usize> = keep.iter().enumerate().map(|(a, &b)| (b, a)).collect();
    let nf = |v: &Lin| -> Lin {
        let mut d = sparse::to_dense(v, np);
        rel.reduce(&mut d);
        d.iter().enumerate().filter(|t| *t.1 != 0).map(|(q, &c)| (kpos[&q], c)).collect()
    };
    let basis: Vec<Element> = keep
        .iter()
        .map(|&q| {
            let (i, j) = pairs[q];
            let (x, y) = (&m.basis[i], &n.basis[j]);
            Element {
                name: format!("{}⊗{}", x.name, y.name),
                left: x.left,
                right: y.right,
                deg: x.deg + y.deg,
                length: x.length + y.length,
                counts: x.counts.iter().zip(&y.counts).map(|(a, b)| a + b).collect(),
            }
        })
        .collect();
    let nk = keep.len();
    let na = a.dim();
    let mut left = vec![Vec::new(); na * nk];
    let mut right = vec![Vec::new(); nk * na];
    for (k, &q) in keep.iter().enumerate() {
        let (i, j) = pairs[q];
        for x in 0..na {
            left[x * nk + k] = nf(&to_pairs(m.act_left(x, i), &sparse::unit(j)));
            right[k * na + x] = nf(&to_pairs(&sparse::unit(i), n.act_right(j, x)));
        }
    }
    let kept = keep.iter().map(|&q| pairs[q]).collect();
    Ok((BasedBimodule { name: format!("{}⊗{}", m.name, n.name), field: f, over: a.name.clone(), alg_dim: na, basis, left, right }, kept))
}

/// A degree-homogeneous linear map between bimodules over the same algebra.
#[derive(Clone, Debug)]
pub struct BimoduleMap {
    pub name: String,
    pub shift: Degree,
    /// `images[m]` is the image of source basis element `m`.
    pub images: Vec<Lin>,
}

impl BimoduleMap {
    pub fn apply(&self, f: Field, v: &[(usize, u32)]) -> Lin {
        let mut lb = LinBuilder::new();
        for &(m, c) in v {
            lb.extend_scaled(f, &self.images[m], c);
        }
        lb.finish(f)
    }

    pub fn matrix(&self, f: Field, target_dim: usize) -> Matrix {
        let cols: Vec<Vec<u32>> = self.images.iter().map(|l| sparse::to_dense(l, target_dim)).collect();
        Matrix::from_columns(f, target_dim, &cols)
    }

    pub fn rank(&self, f: Field, target_dim: usize) -> usize {
        self.matrix(f, target_dim).rank()
    }

    /// Checks that the map intertwines both actions and has the stated shift.
    pub fn check(&self, a: &BasedAlgebra, src: &BasedBimodule, dst: &BasedBimodule) -> Result<(), QuiverError> {
        let f = a.field;
        for m in 0..src.dim() {
            for &(t, _) in &self.images[m] {
                if dst.basis[t].deg != src.basis[m].deg + self.shift {
                    return Err(QuiverError::CheckFailed(format!("{}: degree of {}", self.name, src.basis[m].name)));
                }
            }
            for x in 0..a.dim() {
                if self.apply(f, src.act_left(x, m)) != dst.act_left_lin(x, &self.images[m]) {
                    return Err(QuiverError::CheckFailed(format!("{}: left action {} {}", self.name, a.basis[x].name, src.basis[m].name)));
                }
                if self.apply(f, src.act_right(m, x)) != dst.act_right_lin(&self.images[m], x) {
                    return Err(QuiverError::CheckFailed(format!("{}: right action {} {}", self.name, src.basis[m].name, a.basis[x].name)));
                }
            }
        }
        Ok(())
    }
}

fn power(letter: &str, e: usize) -> String {
    match e {
        0 => String::new(),
        1 => letter.to_string(),
        _ => format!("{letter}^{e}"),
    }
}

fn check_p(p: u32) -> Result<Field, QuiverError> {
    Field::new(p).map_err(|_| QuiverError::NotOddPrime(p))
}

/// Letter indices of the zigzag algebra.
pub const XI: usize = 0;
pub const ETA: usize = 1;
/// Letter indices of `Ω`.
pub const X: usize = 0;
pub const Y: usize = 1;

/// Presentation of the zigzag algebra `c` on vertices `1..p`:
/// `ξ` runs from `s` to `s+1`, `η` from `s+1` to `s`; length-two paths between
/// distinct vertices vanish, `ξη + ηξ = 0` at inner vertices and the loop at
/// vertex `p` vanishes.
pub fn zigzag_presentation(p: u32) -> Result<QuiverPresentation, QuiverError> {
    let field = check_p(p)?;
    let n = p as usize;
    let mut arrows = Vec::new();
    for s in 1..n {
        arrows.push(Arrow { letter: XI, left: s, right: s + 1 });
    }
    for s in 1..n {
        arrows.push(Arrow { letter: ETA, left: s + 1, right: s });
    }
    let xi = |s: usize| s - 1;
    let eta = |s: usize| n - 1 + s - 1; // eta from s+1 to s
    let mut relations = Vec::new();
    for s in 1..n - 1 {
        relations.push(vec![(vec![xi(s), xi(s + 1)], 1)]);
        relations.push(vec![(vec![eta(s + 1), eta(s)], 1)]);
    }
    for v in 2..n {
        // loop ξη at v plus loop ηξ at v
        relations.push(vec![(vec![xi(v), eta(v)], 1), (vec![eta(v - 1), xi(v - 1)], 1)]);
    }
    relations.push(vec![(vec![eta(n - 1), xi(n - 1)], 1)]);
    Ok(QuiverPresentation {
        field,
        vertices: n,
        letters: vec![("ξ".into(), Degree::new(1, 0)), ("η".into(), Degree::new(1, 0))],
        arrows,
        relations,
    })
}

/// Presentation of `Ω`: `x` runs from `s` to `s+1`, `y` from `s+1` to `s`,
/// with `x y = 0` at vertex 1 and `x y = y x` at vertices `2..p-1`.
pub fn omega_presentation(p: u32) -> Result<QuiverPresentation, QuiverError> {
    let field = check_p(p)?;
    let n = p as usize;
    let mut arrows = Vec::new();
    for s in 1..n {
        arrows.push(Arrow { letter: X, left: s, right: s + 1 });
    }
    for s in 1..n {
        arrows.push(Arrow { letter: Y, left: s + 1, right: s });
    }
    let x = |s: usize| s - 1;
    let y = |s: usize| n - 1 + s - 1; // y from s+1 to s
    let mut relations = vec![vec![(vec![x(1), y(1)], 1)]];
    for v in 2..n {
        relations.push(vec![(vec![x(v), y(v)], 1), (vec![y(v - 1), x(v - 1)], -1)]);
    }
    Ok(QuiverPresentation {
        field,
        vertices: n,
        letters: vec![("x".into(), Degree::new(-1, 1)), ("y".into(), Degree::new(-1, 1))],
        arrows,
        relations,
    })
}

fn zigzag_name(l: usize, letters: &[usize], r: usize, _: &[usize]) -> String {
    let w: String = letters.iter().map(|&c| if c == XI { "ξ" } else { "η" }).collect();
    format!("[{l}]{w}[{r}]")
}

fn omega_name(l: usize, _: &[usize], r: usize, counts: &[usize]) -> String {
    format!("[{l}]{}{}[{r}]", power("x", counts[X]), power("y", counts[Y]))
}

/// The zigzag algebra `c`.
pub fn build_zigzag_c(p: u32) -> Result<BasedAlgebra, QuiverError> {
    let q = zigzag_presentation(p)?;
    Ok(q.normal_forms(&[0, 1])?.into_algebra("c", &zigzag_name))
}

/// The algebra `Ω`, with normal forms preferring `x` before `y`.
pub fn build_omega(p: u32) -> Result<BasedAlgebra, QuiverError> {
    let q = omega_presentation(p)?;
    Ok(q.normal_forms(&[0, 1])?.into_algebra("Ω", &omega_name))
}

/// The preprojective algebra `Θ = Ω / Ω e_p Ω` and the projection from `Ω`.
pub fn build_theta_algebra(omega: &BasedAlgebra) -> Result<(BasedAlgebra, Vec<Lin>), QuiverError> {
    omega.quotient_by_vertex(omega.vertices(), "Θ")
}

/// `Θ` as an `Ω`-bimodule.
pub fn build_theta(omega: &BasedAlgebra) -> Result<BasedBimodule, QuiverError> {
    let (theta, kappa) = build_theta_algebra(omega)?;
    let mut m = BasedBimodule::restricted(&theta, omega, &kappa);
    m.name = "Θ".into();
    Ok(m)
}

/// The vertex involution `s -> p - s` of `Θ`.
pub fn sigma_vertex(p: usize, s: usize) -> usize {
    p - s
}

/// Lift to `Ω` of `σ∘κ`: sends the class with signature `(t, d, e)` to the
/// class `(p - t, e, d)`, and anything through vertex `p` to zero.
pub fn sigma_lift(omega: &BasedAlgebra, theta: &BasedBimodule) -> Vec<Lin> {
    let p = omega.vertices();
    (0..omega.dim())
        .map(|i| {
            let e = omega.element(i);
            let alive = theta.basis().iter().any(|t| t.left == e.left && t.right == e.right && t.counts == e.counts);
            if !alive {
                return Vec::new();
            }
            let counts = vec![e.counts[Y], e.counts[X]];
            match omega.find(p - e.left, p - e.right, &counts) {
                Some(j) => sparse::unit(j),
                None => Vec::new(),
            }
        })
        .collect()
}

/// `M^σ` for a bimodule `M` on which `Ω e_p Ω` acts trivially: the right action
/// is twisted by `σ` and right labels are relabelled `s -> p - s`.
pub fn twist_sigma(omega: &BasedAlgebra, theta: &BasedBimodule, m: &BasedBimodule) -> BasedBimodule {
    let psi = sigma_lift(omega, theta);
    let p = omega.vertices();
    let name = if let Some(base) = m.name.strip_suffix("^σ") { base.to_string() } else { format!("{}^σ", m.name) };
    m.twist_right(&psi, &|s| sigma_vertex(p, s), &name)
}

/// The ideal `Ω e_p Ω` as a sub-bimodule of `Ω`, with the embedding indices.
pub fn sub_ideal_epep(omega: &BasedAlgebra) -> Result<(BasedBimodule, Vec<usize>), QuiverError> {
    let (theta, _) = build_theta_algebra(omega)?;
    let keep: Vec<usize> = (0..omega.dim())
        .filter(|&i| {
            let e = omega.element(i);
            !theta.basis().iter().any(|t| t.left == e.left && t.right == e.right && t.counts == e.counts)
        })
        .collect();
    BasedBimodule::regular(omega).sub_spanned(&keep, "Ωe_pΩ")
}

/// The five coefficient bimodules used throughout, built once per prime.
#[derive(Clone, Debug)]
pub struct Coefficients {
    pub c: BasedAlgebra,
    pub omega: BasedAlgebra,
    pub omega_mod: BasedBimodule,
    pub theta: BasedBimodule,
    pub theta_sigma: BasedBimodule,
    pub omega_dual: BasedBimodule,
    pub epep: BasedBimodule,
    /// Indices in `Ω` of the basis of `Ω e_p Ω`.
    pub epep_embedding: Vec<usize>,
    /// Projection `Ω -> Θ` on basis elements.
    pub kappa: Vec<Lin>,
    pub theta_algebra: BasedAlgebra,
}

impl Coefficients {
    pub fn new(p: u32) -> Result<Self, QuiverError> {
        let c = build_zigzag_c(p)?;
        let omega = build_omega(p)?;
        let (theta_algebra, kappa) = build_theta_algebra(&omega)?;
        let theta = build_theta(&omega)?;
        let theta_sigma = twist_sigma(&omega, &theta, &theta);
        let omega_mod = BasedBimodule::regular(&omega);
        let omega_dual = omega_mod.dual("Ω*");
        let (epep, epep_embedding) = sub_ideal_epep(&omega)?;
        Ok(Coefficients { c, omega, omega_mod, theta, theta_sigma, omega_dual, epep, epep_embedding, kappa, theta_algebra })
    }

    pub fn p(&self) -> usize {
        self.omega.vertices()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zigzag_dimensions() {
        assert_eq!(build_zigzag_c(3).unwrap().dim(), 9);
        assert_eq!(build_zigzag_c(5).unwrap().dim(), 17);
        assert_eq!(build_zigzag_c(7).unwrap().dim(), 25);
    }

    #[test]
    fn zigzag_is_associative_and_graded() {
        for p in [3, 5] {
            let c = build_zigzag_c(p).unwrap();
            c.check_associativity().unwrap();
            c.check_unit_and_idempotents().unwrap();
            c.check_degrees().unwrap();
        }
    }

    #[test]
    fn zigzag_loop_at_last_vertex_vanishes() {
        let c = build_zigzag_c(5).unwrap();
        let eta = c.find(5, 4, &[0, 1]).unwrap();
        let xi = c.find(4, 5, &[1, 0]).unwrap();
        assert!(c.mul(eta, xi).is_empty());
        // the loops that survive are at 1..p-1 and have degree (2,0)
        let loops: Vec<_> = c.basis().iter().filter(|e| e.length == 2).collect();
        assert_eq!(loops.len(), 4);
        assert!(loops.iter().all(|e| e.left == e.right && e.left <= 4 && e.deg == Degree::new(2, 0)));
    }

    #[test]
    fn non_primes_rejected() {
        assert_eq!(build_omega(9).unwrap_err(), QuiverError::NotOddPrime(9));
        assert_eq!(build_zigzag_c(2).unwrap_err(), QuiverError::NotOddPrime(2));
    }

    fn z_power(omega: &BasedAlgebra, s: usize, l: usize) -> Option<usize> {
        if l == 0 {
            omega.idempotent(s)
        } else {
            omega.find(s, s, &[l, l])
        }
    }

    #[test]
    fn omega_diagonal_powers() {
        for p in [3u32, 5, 7] {
            let o = build_omega(p).unwrap();
            let n = p as usize;
            for s in 1..=n {
                for l in 0..n {
                    assert_eq!(z_power(&o, s, l).is_some(), s >= l + 1, "p={p} s={s} l={l}");
                }
            }
        }
    }

    #[test]
    fn omega_relation_x1y1() {
        let o = build_omega(3).unwrap();
        let x1 = o.find(1, 2, &[1, 0]).unwrap();
        let y1 = o.find(2, 1, &[0, 1]).unwrap();
        assert!(o.mul(x1, y1).is_empty());
    }

    #[test]
    fn omega_structure_checks() {
        for p in [3, 5] {
            let o = build_omega(p).unwrap();
            o.check_associativity().unwrap();
            o.check_unit_and_idempotents().unwrap();
            o.check_degrees().unwrap();
        }
    }

    #[test]
    fn omega_center_is_truncated_polynomial() {
        for p in [3u32, 5] {
            let o = build_omega(p).unwrap();
            assert_eq!(o.center_basis().len(), p as usize);
        }
    }

    #[test]
    fn theta_dimensions_and_vertex_p() {
        let o = build_omega(3).unwrap();
        let (t, _) = build_theta_algebra(&o).unwrap();
        assert_eq!(t.dim(), 4);
        let o5 = build_omega(5).unwrap();
        let th = build_theta(&o5).unwrap();
        assert!(th.basis().iter().all(|e| e.left != 5 && e.right != 5));
        th.check_axioms(&o5).unwrap();
    }

    #[test]
    fn theta_kills_middle_power() {
        for p in [3u32, 5, 7] {
            let o = build_omega(p).unwrap();
            let (t, _) = build_theta_algebra(&o).unwrap();
            let n = p as usize;
            let h = (n - 1) / 2;
            for s in 1..n {
                assert!(t.find(s, s, &[h, h]).is_none());
            }
            if h >= 1 {
                assert!(t.find(h, h, &[h - 1, h - 1]).is_some() || h == 1);
            }
        }
    }

    #[test]
    fn twist_is_involution_and_dual_reverses() {
        let co = Coefficients::new(5).unwrap();
        let back = twist_sigma(&co.omega, &co.theta, &co.theta_sigma);
        assert_eq!(back.basis(), co.theta.basis());
        for a in 0..co.omega.dim() {
            for m in 0..back.dim() {
                assert_eq!(back.act_right(m, a), co.theta.act_right(m, a));
            }
        }
        co.theta_sigma.check_axioms(&co.omega).unwrap();
        let dd = co.theta.dual("x").dual("y");
        assert_eq!(dd.dim(), co.theta.dim());
        for (a, b) in dd.basis().iter().zip(co.theta.basis()) {
            assert_eq!((a.deg, a.left, a.right), (b.deg, b.left, b.right));
        }
        co.omega_dual.check_axioms(&co.omega).unwrap();
        co.epep.check_axioms(&co.omega).unwrap();
    }

    #[test]
    fn epep_tensor_square_has_dimension_of_omega() {
        let co = Coefficients::new(3).unwrap();
        let t = tensor_over(&co.epep, &co.epep, &co.omega).unwrap();
        assert_eq!(t.dim(), co.omega.dim());
        t.check_axioms(&co.omega).unwrap();
    }

    #[test]
    fn theta_tensor_epep_vanishes() {
        let co = Coefficients::new(3).unwrap();
        assert_eq!(tensor_over(&co.theta, &co.epep, &co.omega).unwrap().dim(), 0);
        assert_eq!(tensor_over(&co.epep, &co.theta, &co.omega).unwrap().dim(), 0);
        assert_eq!(tensor_over(&co.theta_sigma, &co.omega_dual, &co.omega).unwrap().dim(), 0);
    }

    #[test]
    fn incompatible_tensor_rejected() {
        let co = Coefficients::new(3).unwrap();
        let c_mod = BasedBimodule::regular(&co.c);
        assert_eq!(tensor_over(&c_mod, &co.theta, &co.omega).unwrap_err(), QuiverError::IncompatibleAlgebras);
    }
}
