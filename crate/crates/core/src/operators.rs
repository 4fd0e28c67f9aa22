//! The operator 𝔒_Γ on bigraded based algebras and the tower
//! hh_l = 𝔒_F 𝔒_♠^l(F[z, z⁻¹]).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::exactlin::Field;
use crate::spadesuit::{augmentation, build_spade, SpadeAlgebra, SpadeError};
use crate::sparse::{Lin, LinBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperatorError {
    #[error("product leaves the window")]
    OutOfWindow,
    #[error("empty k-window {0}..={1}")]
    EmptyWindow(i64, i64),
    #[error("projection needs hh_{0} onto hh_{1}")]
    Projection(usize, usize),
    #[error(transparent)]
    Spade(#[from] SpadeError),
}

/// A finite based algebra with a multiplication table given by a function.
pub trait Based: Send + Sync {
    fn field(&self) -> Field;
    fn dim(&self) -> usize;
    /// Factor labels of a basis element, outermost first.
    fn word(&self, x: usize) -> Vec<String>;
    fn product(&self, x: usize, y: usize) -> Result<Lin, OperatorError>;
}

/// `(j, k)`-graded.
pub trait Bigraded: Based {
    fn jk(&self, x: usize) -> (i64, i64);
}

/// `(i, j, k)`-graded.
pub trait Trigraded: Based {
    fn ijk(&self, x: usize) -> (i64, i64, i64);
}

/// The ground field in degree `(0, 0, 0)`.
pub struct Ground(pub Field);

impl Based for Ground {
    fn field(&self) -> Field {
        self.0
    }
    fn dim(&self) -> usize {
        1
    }
    fn word(&self, _: usize) -> Vec<String> {
        Vec::new()
    }
    fn product(&self, _: usize, _: usize) -> Result<Lin, OperatorError> {
        Ok(vec![(0, 1)])
    }
}

impl Trigraded for Ground {
    fn ijk(&self, _: usize) -> (i64, i64, i64) {
        (0, 0, 0)
    }
}

/// Exponents `lo..=hi` of F[z, z⁻¹], with z in bidegree `(1, 0)`.
#[derive(Clone, Copy, Debug)]
pub struct LaurentWindow {
    pub field: Field,
    pub lo: i64,
    pub hi: i64,
}

impl LaurentWindow {
    pub fn new(field: Field, lo: i64, hi: i64) -> Self {
        LaurentWindow { field, lo, hi }
    }

    pub fn exponent(&self, x: usize) -> i64 {
        self.lo + x as i64
    }

    pub fn index(&self, d: i64) -> Option<usize> {
        (self.lo..=self.hi).contains(&d).then(|| (d - self.lo) as usize)
    }
}

impl Based for LaurentWindow {
    fn field(&self) -> Field {
        self.field
    }
    fn dim(&self) -> usize {
        (self.hi - self.lo + 1).max(0) as usize
    }
    fn word(&self, x: usize) -> Vec<String> {
        vec![format!("z^{}", self.exponent(x))]
    }
    fn product(&self, x: usize, y: usize) -> Result<Lin, OperatorError> {
        let d = self.exponent(x) + self.exponent(y);
        self.index(d).map(|t| vec![(t, 1)]).ok_or(OperatorError::OutOfWindow)
    }
}

impl Bigraded for LaurentWindow {
    fn jk(&self, x: usize) -> (i64, i64) {
        (self.exponent(x), 0)
    }
}

impl Based for SpadeAlgebra {
    fn field(&self) -> Field {
        SpadeAlgebra::field(self)
    }
    fn dim(&self) -> usize {
        SpadeAlgebra::dim(self)
    }
    fn word(&self, x: usize) -> Vec<String> {
        vec![self.basis[x].name()]
    }
    fn product(&self, x: usize, y: usize) -> Result<Lin, OperatorError> {
        SpadeAlgebra::product(self, x, y).map_err(|e| match e {
            SpadeError::OutOfWindow(..) => OperatorError::OutOfWindow,
            e => e.into(),
        })
    }
}

impl Trigraded for SpadeAlgebra {
    fn ijk(&self, x: usize) -> (i64, i64, i64) {
        let e = &self.basis[x];
        (e.i, e.j, e.k)
    }
}

impl Bigraded for SpadeAlgebra {
    fn jk(&self, x: usize) -> (i64, i64) {
        let e = &self.basis[x];
        (e.j, e.k)
    }
}

/// 𝔒_Γ(Σ): pairs `g ⊗ s` with `j(g) = j(s)`, graded by `(i(g), k(g) + k(s))`.
pub struct Operated {
    gamma: Arc<dyn Trigraded>,
    sigma: Arc<dyn Bigraded>,
    pairs: Vec<(usize, usize)>,
    degrees: Vec<(i64, i64)>,
    index: HashMap<(usize, usize), usize>,
}

/// Applies 𝔒_Γ to Σ, keeping pairs whose total k lies in `k_window`.
pub fn apply_operator(
    gamma: Arc<dyn Trigraded>,
    sigma: Arc<dyn Bigraded>,
    k_window: Option<(i64, i64)>,
) -> Result<Operated, OperatorError> {
    if let Some((lo, hi)) = k_window {
        if lo > hi {
            return Err(OperatorError::EmptyWindow(lo, hi));
        }
    }
    let mut by_j: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for s in 0..sigma.dim() {
        by_j.entry(sigma.jk(s).0).or_default().push(s);
    }
    let mut pairs = Vec::new();
    let mut degrees = Vec::new();
    for g in 0..gamma.dim() {
        let (i, j, k1) = gamma.ijk(g);
        for &s in by_j.get(&j).map(Vec::as_slice).unwrap_or(&[]) {
            let k = k1 + sigma.jk(s).1;
            if k_window.is_some_and(|(lo, hi)| k < lo || k > hi) {
                continue;
            }
            pairs.push((g, s));
            degrees.push((i, k));
        }
    }
    let index = pairs.iter().enumerate().map(|(t, &q)| (q, t)).collect();
    Ok(Operated { gamma, sigma, pairs, degrees, index })
}

/// The product of two factors where a vanishing factor wins over a window overflow.
fn both(x: Result<Lin, OperatorError>, y: impl FnOnce() -> Result<Lin, OperatorError>) -> Result<Option<(Lin, Lin)>, OperatorError> {
    match x {
        Ok(a) if a.is_empty() => Ok(None),
        Ok(a) => match y()? {
            b if b.is_empty() => Ok(None),
            b => Ok(Some((a, b))),
        },
        Err(e) => match y() {
            Ok(b) if b.is_empty() => Ok(None),
            _ => Err(e),
        },
    }
}

impl Operated {
    pub fn pair(&self, x: usize) -> (usize, usize) {
        self.pairs[x]
    }
}

impl Based for Operated {
    fn field(&self) -> Field {
        self.sigma.field()
    }
    fn dim(&self) -> usize {
        self.pairs.len()
    }
    fn word(&self, x: usize) -> Vec<String> {
        let (g, s) = self.pairs[x];
        let mut w = self.gamma.word(g);
        w.extend(self.sigma.word(s));
        w
    }
    fn product(&self, x: usize, y: usize) -> Result<Lin, OperatorError> {
        let f = self.field();
        let ((g, s), (h, t)) = (self.pairs[x], self.pairs[y]);
        let Some((gh, st)) = both(self.gamma.product(g, h), || self.sigma.product(s, t))? else {
            return Ok(Vec::new());
        };
        let sign = f.sign(self.sigma.jk(s).1 * self.gamma.ijk(h).2);
        let mut out = LinBuilder::new();
        for &(u, c) in &gh {
            for &(v, d) in &st {
                let q = *self.index.get(&(u, v)).ok_or(OperatorError::OutOfWindow)?;
                out.push(q, f.mul(sign, f.mul(c, d)));
            }
        }
        Ok(out.finish(f))
    }
}

impl Bigraded for Operated {
    fn jk(&self, x: usize) -> (i64, i64) {
        self.degrees[x]
    }
}

/// Basis tuple `(m¹, …, m^l, z^α)` of hh_l.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    /// Indices into the ♠ window.
    pub factors: Vec<usize>,
    pub alpha: i64,
    pub k: i64,
}

/// hh_l restricted to a k-window, on weight-zero monomials.
pub struct HHLAlgebra {
    pub p: usize,
    pub l: usize,
    pub k_window: (i64, i64),
    pub spade: Arc<SpadeAlgebra>,
    pub basis: Vec<Monomial>,
    index: HashMap<(Vec<usize>, i64), usize>,
}

/// Grid positions of ♠ with `a + b = i`.
fn row_positions(i: i64) -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> = (i.min(0)..=0).map(|a| (a, i - a)).filter(|&(_, b)| b <= 0).collect();
    if i == 1 {
        v.push((1, 0));
    }
    v.extend((2..=i).map(|a| (a, i - a)));
    v
}

/// Rows reached by the weight chain of hh_l, level by level, and the α values.
fn reachable_rows(p: u32, l: usize) -> Result<(Vec<BTreeSet<i64>>, BTreeSet<i64>), SpadeError> {
    let mut levels = vec![BTreeSet::from([0i64])];
    let mut row_js: HashMap<i64, BTreeSet<i64>> = HashMap::new();
    for _ in 0..l {
        let mut next = BTreeSet::new();
        for &i in levels.last().expect("nonempty") {
            if !row_js.contains_key(&i) {
                let mut js = BTreeSet::new();
                for (a, b) in row_positions(i) {
                    let alg = build_spade(p, (a, a), (b, b))?;
                    js.extend(alg.basis.iter().map(|e| e.j));
                }
                row_js.insert(i, js);
            }
            next.extend(row_js[&i].iter().copied());
        }
        levels.push(next);
    }
    let alphas = levels.pop().expect("nonempty");
    Ok((levels, alphas))
}

/// A ♠ window holding every position of the given rows.
fn spade_for_rows(p: u32, rows: &[BTreeSet<i64>]) -> Result<SpadeAlgebra, SpadeError> {
    let mut all: BTreeSet<i64> = rows.iter().flatten().copied().collect();
    all.insert(0);
    let (lo, hi) = (*all.first().expect("row 0"), *all.last().expect("row 0"));
    build_spade(p, (lo.min(0), hi.max(0)), (lo.min(0), (hi - 2).max(0)))
}

/// hh_l by direct enumeration of weight-zero monomials with total k in `k_window`.
pub fn build_hhl(p: u32, l: usize, k_window: (i64, i64)) -> Result<HHLAlgebra, OperatorError> {
    if k_window.0 > k_window.1 {
        return Err(OperatorError::EmptyWindow(k_window.0, k_window.1));
    }
    let (levels, _) = reachable_rows(p, l)?;
    let spade = spade_for_rows(p, &levels)?;
    let mut rows: HashMap<i64, Vec<usize>> = HashMap::new();
    for (q, e) in spade.basis.iter().enumerate() {
        rows.entry(e.i).or_default().push(q);
    }
    let mut basis = Vec::new();
    let mut stack = vec![(Vec::new(), 0i64, 0i64)];
    while let Some((factors, row, k)) = stack.pop() {
        if factors.len() == l {
            if (k_window.0..=k_window.1).contains(&k) {
                basis.push(Monomial { factors, alpha: row, k });
            }
            continue;
        }
        for &q in rows.get(&row).map(Vec::as_slice).unwrap_or(&[]) {
            let e = &spade.basis[q];
            let mut next = factors.clone();
            next.push(q);
            stack.push((next, e.j, k + e.k));
        }
    }
    basis.sort();
    let index = basis.iter().enumerate().map(|(t, m)| ((m.factors.clone(), m.alpha), t)).collect();
    Ok(HHLAlgebra { p: p as usize, l, k_window, spade: Arc::new(spade), basis, index })
}

/// hh_l by applying 𝔒_♠ l times to F[z, z⁻¹] and then 𝔒_F.
pub fn build_hhl_iterated(p: u32, l: usize, k_window: (i64, i64)) -> Result<Operated, OperatorError> {
    let (levels, alphas) = reachable_rows(p, l)?;
    let spade: Arc<dyn Trigraded> = Arc::new(spade_for_rows(p, &levels)?);
    let field = spade.field();
    let (lo, hi) = (*alphas.first().expect("nonempty"), *alphas.last().expect("nonempty"));
    let mut sigma: Arc<dyn Bigraded> = Arc::new(LaurentWindow::new(field, lo, hi));
    for _ in 0..l {
        sigma = Arc::new(apply_operator(spade.clone(), sigma, None)?);
    }
    apply_operator(Arc::new(Ground(field)), sigma, Some(k_window))
}

impl HHLAlgebra {
    pub fn field(&self) -> Field {
        self.spade.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn find(&self, factors: &[usize], alpha: i64) -> Option<usize> {
        self.index.get(&(factors.to_vec(), alpha)).copied()
    }

    /// Factor names followed by the z-power.
    pub fn word(&self, x: usize) -> Vec<String> {
        let m = &self.basis[x];
        let mut w: Vec<String> = m.factors.iter().map(|&q| self.spade.basis[q].name()).collect();
        w.push(format!("z^{}", m.alpha));
        w
    }

    pub fn name(&self, x: usize) -> String {
        self.word(x).join("⊗")
    }

    /// Index of the monomial `1 ⊗ … ⊗ 1 ⊗ z⁰`.
    pub fn unit(&self) -> Option<usize> {
        let one = self.spade.unit()?;
        self.find(&vec![one; self.l], 0)
    }

    /// Hochschild degree: the sum over factors.
    pub fn h(&self, x: usize) -> usize {
        self.basis[x].factors.iter().map(|&q| self.spade.basis[q].h).sum()
    }

    /// Componentwise ♠ product with super signs; z-powers add.
    pub fn product(&self, x: usize, y: usize) -> Result<Lin, OperatorError> {
        let f = self.field();
        let (u, v) = (&self.basis[x], &self.basis[y]);
        let ks = |m: &Monomial, r: usize| self.spade.basis[m.factors[r]].k;
        let mut sign_exp = 0;
        for r in 0..self.l {
            for s in r + 1..self.l {
                sign_exp += ks(u, s) * ks(v, r);
            }
        }
        let mut terms: Vec<(Vec<usize>, u32)> = vec![(Vec::new(), f.sign(sign_exp))];
        let mut overflow = false;
        for r in 0..self.l {
            match Based::product(&*self.spade, u.factors[r], v.factors[r]) {
                Ok(w) if w.is_empty() => return Ok(Vec::new()),
                Ok(w) => {
                    terms = terms
                        .iter()
                        .flat_map(|(t, c)| w.iter().map(move |&(q, d)| ([t.as_slice(), &[q]].concat(), f.mul(*c, d))))
                        .collect()
                }
                Err(OperatorError::OutOfWindow) => overflow = true,
                Err(e) => return Err(e),
            }
        }
        if overflow {
            return Err(OperatorError::OutOfWindow);
        }
        let alpha = u.alpha + v.alpha;
        let mut out = LinBuilder::new();
        for (t, c) in terms {
            out.push(self.find(&t, alpha).ok_or(OperatorError::OutOfWindow)?, c);
        }
        Ok(out.finish(f))
    }

    /// `(m¹, …, m^l, α) ↦ ε(m¹)·(m², …, m^l, α)` into `target` = hh_{l−1}.
    pub fn project(&self, target: &HHLAlgebra, x: usize) -> Result<Lin, OperatorError> {
        if self.l == 0 || target.l + 1 != self.l || target.p != self.p {
            return Err(OperatorError::Projection(self.l, target.l));
        }
        let m = &self.basis[x];
        let eps = augmentation(&self.spade.basis[m.factors[0]]);
        if eps == 0 {
            return Ok(Vec::new());
        }
        let mut image = Vec::with_capacity(target.l);
        for &q in &m.factors[1..] {
            let e = &self.spade.basis[q];
            image.push(target.spade.find(e.a, e.b, &e.class).ok_or(OperatorError::OutOfWindow)?);
        }
        let t = target.find(&image, m.alpha).ok_or(OperatorError::OutOfWindow)?;
        Ok(vec![(t, eps)])
    }
}

impl Based for HHLAlgebra {
    fn field(&self) -> Field {
        HHLAlgebra::field(self)
    }
    fn dim(&self) -> usize {
        HHLAlgebra::dim(self)
    }
    fn word(&self, x: usize) -> Vec<String> {
        HHLAlgebra::word(self, x)
    }
    fn product(&self, x: usize, y: usize) -> Result<Lin, OperatorError> {
        HHLAlgebra::product(self, x, y)
    }
}

impl Bigraded for HHLAlgebra {
    fn jk(&self, x: usize) -> (i64, i64) {
        (0, self.basis[x].k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    K,
    JK,
}

/// Basis counts per degree; under [`Grading::K`] keys are `[k]`, otherwise `[j, k]`.
pub fn hilbert_series(alg: &dyn Bigraded, grading: Grading) -> BTreeMap<Vec<i64>, usize> {
    let mut out = BTreeMap::new();
    for x in 0..alg.dim() {
        let (j, k) = alg.jk(x);
        let key = match grading {
            Grading::K => vec![k],
            Grading::JK => vec![j, k],
        };
        *out.entry(key).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    const ALL_K: (i64, i64) = (-1000, 1000);

    fn table(alg: &dyn Based) -> BTreeMap<(Vec<String>, Vec<String>), Result<BTreeMap<Vec<String>, u32>, OperatorError>> {
        let mut out = BTreeMap::new();
        for x in 0..alg.dim() {
            for y in 0..alg.dim() {
                let v = alg.product(x, y).map(|v| v.into_iter().map(|(t, c)| (alg.word(t), c)).collect());
                out.insert((alg.word(x), alg.word(y)), v);
            }
        }
        out
    }

    #[test]
    fn ground_picks_degree_zero() {
        let f = Field::new(3).unwrap();
        let laurent: Arc<dyn Bigraded> = Arc::new(LaurentWindow::new(f, -4, 4));
        let o = apply_operator(Arc::new(Ground(f)), laurent, None).unwrap();
        assert_eq!(o.dim(), 1);
        assert_eq!(o.word(0), vec!["z^0".to_string()]);
        assert_eq!(hilbert_series(&o, Grading::JK), BTreeMap::from([(vec![0, 0], 1)]));
    }

    #[test]
    fn spade_on_laurent_matches_j_degrees() {
        let spade = Arc::new(build_spade(3, (-2, 2), (-2, 2)).unwrap());
        let js: Vec<i64> = spade.basis.iter().map(|e| e.j).collect();
        let (lo, hi) = (*js.iter().min().unwrap(), *js.iter().max().unwrap());
        let laurent: Arc<dyn Bigraded> = Arc::new(LaurentWindow::new(spade.field(), lo, hi));
        let o = apply_operator(spade.clone(), laurent, None).unwrap();
        assert_eq!(o.dim(), spade.dim());
        for x in 0..o.dim() {
            let (g, _) = o.pair(x);
            let e = &spade.basis[g];
            assert_eq!(o.word(x), vec![e.name(), format!("z^{}", e.j)]);
            assert_eq!(o.jk(x), (e.i, e.k));
        }
    }

    /// A toy graded-commutative algebra: exterior algebra on one odd generator.
    struct Exterior(Field, i64);

    impl Based for Exterior {
        fn field(&self) -> Field {
            self.0
        }
        fn dim(&self) -> usize {
            2
        }
        fn word(&self, x: usize) -> Vec<String> {
            vec![["1", "e"][x].to_string()]
        }
        fn product(&self, x: usize, y: usize) -> Result<Lin, OperatorError> {
            Ok(if x + y < 2 { vec![(x + y, 1)] } else { Vec::new() })
        }
    }

    impl Trigraded for Exterior {
        fn ijk(&self, x: usize) -> (i64, i64, i64) {
            (0, 0, x as i64 * self.1)
        }
    }

    impl Bigraded for Exterior {
        fn jk(&self, x: usize) -> (i64, i64) {
            (0, x as i64 * self.1)
        }
    }

    #[test]
    fn odd_elements_anticommute_across_factors() {
        let f = Field::new(5).unwrap();
        let o = apply_operator(Arc::new(Exterior(f, 1)), Arc::new(Exterior(f, 3)), None).unwrap();
        let find = |w: [&str; 2]| (0..o.dim()).find(|&x| o.word(x) == w.map(String::from).to_vec()).unwrap();
        let (e1, one_e, both) = (find(["e", "1"]), find(["1", "e"]), find(["e", "e"]));
        assert_eq!(o.product(one_e, e1).unwrap(), vec![(both, f.neg(1))]);
        assert_eq!(o.product(e1, one_e).unwrap(), vec![(both, 1)]);
        assert!(apply_operator(Arc::new(Exterior(f, 1)), Arc::new(Exterior(f, 3)), Some((2, 1))).is_err());
    }

    #[test]
    fn low_levels_of_the_tower() {
        for p in [3u32, 5] {
            let h0 = build_hhl(p, 0, ALL_K).unwrap();
            assert_eq!(h0.dim(), 1);
            assert_eq!(h0.unit(), Some(0));
            assert_eq!(h0.product(0, 0).unwrap(), vec![(0, 1)]);
            assert_eq!(hilbert_series(&h0, Grading::K), BTreeMap::from([(vec![0], 1)]));
            let h1 = build_hhl(p, 1, ALL_K).unwrap();
            assert_eq!(h1.dim(), 3 * p as usize - 2);
            assert!(h1.basis.iter().all(|m| {
                let e = &h1.spade.basis[m.factors[0]];
                (e.a, e.b) == (0, 0) && m.alpha == e.j
            }));
        }
    }

    #[test]
    fn hh1_k_profile_at_p5() {
        let h1 = build_hhl(5, 1, ALL_K).unwrap();
        let mut expect = BTreeMap::from([(vec![0], 5)]);
        expect.extend((1..=8).map(|k| (vec![k], 1)));
        assert_eq!(hilbert_series(&h1, Grading::K), expect);
    }

    #[test]
    fn epep_component_has_p_elements() {
        for p in [3u32, 5, 7] {
            let alg = build_spade(p, (1, 1), (0, 0)).unwrap();
            let total: usize = hilbert_series(&alg, Grading::JK).values().sum();
            assert_eq!(total, p as usize);
        }
    }

    #[test]
    fn iterated_and_direct_constructions_agree() {
        for (p, l) in [(3u32, 0usize), (3, 1), (3, 2), (5, 1), (5, 2)] {
            for k_window in [ALL_K, (0, 8)] {
                let direct = build_hhl(p, l, k_window).unwrap();
                let iterated = build_hhl_iterated(p, l, k_window).unwrap();
                assert_eq!(direct.dim(), Based::dim(&iterated));
                let a: BTreeSet<_> = (0..direct.dim()).map(|x| direct.word(x)).collect();
                let b: BTreeSet<_> = (0..iterated.dim()).map(|x| iterated.word(x)).collect();
                assert_eq!(a, b);
                if p == 3 {
                    assert_eq!(table(&direct), table(&iterated), "p={p} l={l}");
                }
            }
        }
    }

    #[test]
    fn weight_zero_count_matches_brute_force() {
        let spade = build_spade(3, (-10, 10), (-10, 10)).unwrap();
        let mut count = 0;
        for m1 in &spade.basis {
            for m2 in &spade.basis {
                for alpha in -40..=40 {
                    let k = m1.k + m2.k;
                    if m1.i == 0 && m2.i == m1.j && alpha == m2.j && k <= 8 {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(build_hhl(3, 2, (i64::MIN / 2, 8)).unwrap().dim(), count);
    }

    #[test]
    fn projection_is_a_surjective_homomorphism() {
        for l in 1..=2 {
            let src = build_hhl(3, l, (0, 12)).unwrap();
            let dst = build_hhl(3, l - 1, (0, 12)).unwrap();
            let f = src.field();
            let images: Vec<Lin> = (0..src.dim()).map(|x| src.project(&dst, x).unwrap()).collect();
            let hit: BTreeSet<usize> = images.iter().flatten().map(|&(t, _)| t).collect();
            assert_eq!(hit.len(), dst.dim());
            assert_eq!(images[src.unit().unwrap()], vec![(dst.unit().unwrap(), 1)]);
            for x in 0..src.dim() {
                if src.basis[x].factors[0] != src.spade.unit().unwrap() {
                    assert!(images[x].is_empty());
                }
            }
            let apply = |v: &Lin| {
                let mut b = LinBuilder::new();
                for &(t, c) in v {
                    b.extend_scaled(f, &images[t], c);
                }
                b.finish(f)
            };
            for x in 0..src.dim() {
                for y in 0..src.dim() {
                    let Ok(xy) = src.product(x, y) else { continue };
                    let mut rhs = LinBuilder::new();
                    for &(u, c) in &images[x] {
                        for &(v, d) in &images[y] {
                            rhs.extend_scaled(f, &dst.product(u, v).unwrap(), f.mul(c, d));
                        }
                    }
                    assert_eq!(apply(&xy), rhs.finish(f));
                }
            }
        }
        let h = build_hhl(3, 0, ALL_K).unwrap();
        assert_eq!(h.project(&h, 0), Err(OperatorError::Projection(0, 0)));
    }

    #[test]
    fn super_commutative_and_associative() {
        for l in 0..=2 {
            let h = build_hhl(3, l, ALL_K).unwrap();
            let f = h.field();
            let n = h.dim();
            let prods: Vec<Vec<Result<Lin, OperatorError>>> = (0..n).map(|x| (0..n).map(|y| h.product(x, y)).collect()).collect();
            for x in 0..n {
                for y in 0..n {
                    let s = f.sign(h.basis[x].k * h.basis[y].k);
                    match (&prods[x][y], &prods[y][x]) {
                        (Ok(a), Ok(b)) => assert_eq!(*a, crate::sparse::scale(f, b, s), "{} {}", h.name(x), h.name(y)),
                        (a, b) => panic!("{a:?} {b:?}"),
                    }
                }
            }
            for x in 0..n {
                for y in 0..n {
                    let xy = prods[x][y].as_ref().unwrap();
                    for z in 0..n {
                        let mut left = LinBuilder::new();
                        for &(t, c) in xy {
                            left.extend_scaled(f, prods[t][z].as_ref().unwrap(), c);
                        }
                        let mut right = LinBuilder::new();
                        for &(t, c) in prods[y][z].as_ref().unwrap() {
                            right.extend_scaled(f, prods[x][t].as_ref().unwrap(), c);
                        }
                        assert_eq!(left.finish(f), right.finish(f));
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn products_stay_weight_zero(x in 0usize..73, y in 0usize..73) {
            let h = build_hhl(3, 2, ALL_K).unwrap();
            prop_assert_eq!(h.dim(), 73);
            for (t, _) in h.product(x, y).unwrap() {
                prop_assert_eq!(h.basis[t].k, h.basis[x].k + h.basis[y].k);
                prop_assert_eq!(h.basis[t].alpha, h.basis[x].alpha + h.basis[y].alpha);
            }
        }

        #[test]
        fn laurent_exponents_add(a in -5i64..5, b in -5i64..5) {
            let w = LaurentWindow::new(Field::new(7).unwrap(), -5, 5);
            let r = w.product(w.index(a).unwrap(), w.index(b).unwrap());
            match w.index(a + b) {
                Some(t) => prop_assert_eq!(r, Ok(vec![(t, 1)])),
                None => prop_assert_eq!(r, Err(OperatorError::OutOfWindow)),
            }
        }
    }
}
