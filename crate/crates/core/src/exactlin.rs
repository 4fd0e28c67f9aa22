//! Exact linear algebra over a prime field `F_p`.
//!
//! Residues are stored as `u32` in `[0, p)`. Reduction is done in `u64`, so any
//! prime below `2^31` is safe, far beyond anything this crate needs.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("d_out * d_in is not zero")]
    CompositionNotZero,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("candidate representatives are not a basis of homology")]
    NotABasis,
}

pub fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The prime field `F_p` as a context object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    p: u32,
}

impl Field {
    pub fn new(p: u32) -> Result<Self, LinError> {
        if is_odd_prime(p) {
            Ok(Field { p })
        } else {
            Err(LinError::NotOddPrime(p))
        }
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, (self.p - 2) as u64)
    }

    /// Embeds a signed integer.
    pub fn from_i64(self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    /// `(p + 1) / 2`, the inverse of two.
    pub fn half(self) -> u32 {
        (self.p + 1) / 2
    }

    /// `(-1)^e`.
    pub fn sign(self, e: i64) -> u32 {
        if e.rem_euclid(2) == 0 {
            1
        } else {
            self.p - 1
        }
    }

    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn centered(self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

/// A single field element carrying its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    residue: u32,
    field: Field,
}

impl Scalar {
    pub fn new(field: Field, a: i64) -> Self {
        Scalar { residue: field.from_i64(a), field }
    }
    pub fn residue(self) -> u32 {
        self.residue
    }
    pub fn field(self) -> Field {
        self.field
    }
    pub fn is_zero(self) -> bool {
        self.residue == 0
    }
    pub fn inv(self) -> Option<Self> {
        (self.residue != 0).then(|| Scalar { residue: self.field.inv(self.residue), field: self.field })
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.field.p)
    }
}

impl std::ops::Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        Scalar { residue: self.field.add(self.residue, o.residue), field: self.field }
    }
}
impl std::ops::Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        Scalar { residue: self.field.sub(self.residue, o.residue), field: self.field }
    }
}
impl std::ops::Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        Scalar { residue: self.field.mul(self.residue, o.residue), field: self.field }
    }
}
impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { residue: self.field.neg(self.residue), field: self.field }
    }
}

/// Dense row-major matrix over `F_p`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over F_{}", self.rows, self.cols, self.field.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {r} has wrong length");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v % field.p);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, &v) in col.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add_to(&mut self, r: usize, c: usize, v: u32) {
        let i = r * self.cols + c;
        self.data[i] = self.field.add(self.data[i], v);
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinError> {
        if self.cols != other.rows {
            return Err(LinError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b != 0 {
                        out.add_to(r, c, f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                let mut s = 0u64;
                for (c, &x) in v.iter().enumerate() {
                    if x != 0 {
                        s += self.get(r, c) as u64 * x as u64;
                    }
                }
                (s % f.p as u64) as u32
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns pivot columns in order.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.data.swap(pr * self.cols + c, row * self.cols + c);
                }
            }
            let inv = f.inv(self.get(row, col));
            for c in col..self.cols {
                let v = self.get(row, c);
                self.set(row, c, f.mul(v, inv));
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let v = self.get(row, c);
                    if v != 0 {
                        let cur = self.get(r, c);
                        self.set(r, c, f.sub(cur, f.mul(factor, v)));
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Some(inv)
    }
}

/// Rank and a reduced-echelon kernel basis of `m`.
///
/// Kernel vectors are indexed by the free columns in increasing order; the
/// vector for free column `f` has a 1 in position `f` and zeros in every other
/// free position.
pub fn rank_and_kernel(m: &Matrix) -> (usize, Vec<Vec<u32>>) {
    let f = m.field;
    let mut e = m.clone();
    let pivots = e.rref();
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut kernel = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; m.cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(e.get(r, free));
        }
        kernel.push(v);
    }
    (pivots.len(), kernel)
}

/// Incremental echelon basis used to test membership and independence.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Field,
    dim: usize,
    rows: Vec<(usize, Vec<u32>)>,
}

impl EchelonBasis {
    pub fn new(field: Field, dim: usize) -> Self {
        EchelonBasis { field, dim, rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, v: &mut [u32]) {
        let f = self.field;
        for (pc, row) in &self.rows {
            let c = v[*pc];
            if c != 0 {
                for (i, &x) in row.iter().enumerate() {
                    if x != 0 {
                        v[i] = f.sub(v[i], f.mul(c, x));
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` if independent; returns whether it was added.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.dim);
        let f = self.field;
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[pc]);
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                for (i, &x) in w.iter().enumerate() {
                    if x != 0 {
                        row[i] = f.sub(row[i], f.mul(c, x));
                    }
                }
            }
        }
        self.rows.push((pc, w));
        true
    }
}

/// Homology of `C_prev --d_in--> C --d_out--> C_next` at `C`.
#[derive(Clone, Debug)]
pub struct Homology {
    field: Field,
    pub dimension: usize,
    pub representatives: Vec<Vec<u32>>,
    projection: Matrix,
}

impl Homology {
    /// Coordinates in homology of a cocycle `v`.
    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        self.projection.apply(v)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.projection.cols()
    }

    /// Replaces the canonical representatives with `reps`, which must be
    /// cocycles forming a basis of homology; the projection is rebased so that
    /// `reps[i]` projects to the `i`-th standard vector.
    pub fn rebase(&mut self, reps: Vec<Vec<u32>>) -> Result<(), LinError> {
        if reps.len() != self.dimension {
            return Err(LinError::NotABasis);
        }
        let cols: Vec<Vec<u32>> = reps.iter().map(|r| self.project(r)).collect();
        let change = Matrix::from_columns(self.field, self.dimension, &cols);
        let inv = change.inverse().ok_or(LinError::NotABasis)?;
        self.projection = inv.mul(&self.projection)?;
        self.representatives = reps;
        Ok(())
    }
}

/// Computes homology with deterministic representatives.
///
/// `d_in` is `n x m` and `d_out` is `q x n`, acting on column vectors.
/// Representatives are the kernel vectors of `d_out` (in reduced echelon order)
/// that stay independent modulo the image of `d_in`.
pub fn homology(d_in: &Matrix, d_out: &Matrix) -> Result<Homology, LinError> {
    let field = d_in.field;
    let n = d_in.rows;
    if d_out.cols != n {
        return Err(LinError::Shape(format!("d_in has {} rows but d_out has {} columns", n, d_out.cols)));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(LinError::CompositionNotZero);
    }
    let (_, kernel) = rank_and_kernel(d_out);
    let mut span = EchelonBasis::new(field, n);
    let mut basis_cols: Vec<Vec<u32>> = Vec::new();
    for c in 0..d_in.cols {
        let col = d_in.column(c);
        if span.insert(&col) {
            basis_cols.push(col);
        }
    }
    let boundary_rank = basis_cols.len();
    let mut reps = Vec::new();
    for z in &kernel {
        if span.insert(z) {
            basis_cols.push(z.clone());
            reps.push(z.clone());
        }
    }
    let dimension = reps.len();
    for i in 0..n {
        let mut e = vec![0u32; n];
        e[i] = 1;
        if span.insert(&e) {
            basis_cols.push(e);
        }
    }
    let full = Matrix::from_columns(field, n, &basis_cols);
    let inv = full.inverse().expect("completed basis is invertible");
    let mut projection = Matrix::zeros(field, dimension, n);
    for i in 0..dimension {
        for c in 0..n {
            projection.set(i, c, inv.get(boundary_rank + i, c));
        }
    }
    Ok(Homology { field, dimension, representatives: reps, projection })
}

/// Rank of a sparse matrix given as rows of `(column, value)` pairs.
///
/// Rows are consumed; elimination keeps one pivot row per column in a map.
pub fn sparse_rank(field: Field, rows: Vec<Vec<(usize, u32)>>) -> usize {
    use std::collections::HashMap;
    let f = field;
    let mut pivots: HashMap<usize, Vec<(usize, u32)>> = HashMap::new();
    for mut row in rows {
        row.retain(|&(_, v)| v != 0);
        row.sort_unstable_by_key(|&(c, _)| c);
        loop {
            let Some(&(lead, lv)) = row.first() else { break };
            match pivots.get(&lead) {
                None => {
                    let inv = f.inv(lv);
                    for e in row.iter_mut() {
                        e.1 = f.mul(e.1, inv);
                    }
                    pivots.insert(lead, row);
                    break;
                }
                Some(prow) => {
                    row = axpy_sparse(f, &row, prow, f.neg(lv));
                }
            }
        }
    }
    pivots.len()
}

/// `a + c * b` for sorted sparse vectors.
fn axpy_sparse(f: Field, a: &[(usize, u32)], b: &[(usize, u32)], c: u32) -> Vec<(usize, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f.mul(c, b[j].1)));
            j += 1;
        } else {
            let v = f.add(a[i].1, f.mul(c, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> Field {
        Field::new(5).unwrap()
    }

    #[test]
    fn rejects_non_odd_primes() {
        for p in [0, 1, 2, 4, 9, 15] {
            assert_eq!(Field::new(p), Err(LinError::NotOddPrime(p)));
        }
        assert!(Field::new(3).is_ok() && Field::new(7).is_ok());
    }

    #[test]
    fn scalar_arithmetic() {
        let f = Field::new(7).unwrap();
        let a = Scalar::new(f, 3);
        assert!((a + -a).is_zero());
        assert_eq!((a * a.inv().unwrap()).residue(), 1);
        assert_eq!(f.mul(f.half(), 2), 1);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let (r, k) = rank_and_kernel(&Matrix::identity(f5(), 3));
        assert_eq!((r, k.len()), (3, 0));
    }

    #[test]
    fn zero_map_kernel_is_everything() {
        let (r, k) = rank_and_kernel(&Matrix::zeros(Field::new(3).unwrap(), 2, 4));
        assert_eq!((r, k.len()), (0, 4));
    }

    #[test]
    fn homology_trivial_cases() {
        let f = f5();
        let h = homology(&Matrix::zeros(f, 4, 1), &Matrix::zeros(f, 1, 4)).unwrap();
        assert_eq!(h.dimension, 4);
        let h = homology(&Matrix::identity(f, 4), &Matrix::zeros(f, 1, 4)).unwrap();
        assert_eq!(h.dimension, 0);
    }

    #[test]
    fn composition_checked() {
        let f = f5();
        let e = homology(&Matrix::identity(f, 2), &Matrix::identity(f, 2)).unwrap_err();
        assert_eq!(e, LinError::CompositionNotZero);
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let f = f5();
        let m = Matrix::from_rows(f, 3, &[vec![1, 2, 3], vec![2, 4, 1], vec![3, 1, 4]]);
        let rows = (0..3).map(|r| m.row(r).iter().copied().enumerate().collect()).collect();
        assert_eq!(sparse_rank(f, rows), m.rank());
    }

    fn arb_matrix(p: u32) -> impl Strategy<Value = Matrix> {
        (1usize..6, 1usize..6).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..p, r * c).prop_map(move |d| {
                let f = Field::new(p).unwrap();
                let rows: Vec<Vec<u32>> = d.chunks(c).map(|ch| ch.to_vec()).collect();
                Matrix::from_rows(f, c, &rows)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(m in arb_matrix(5)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn kernel_vectors_are_killed(m in arb_matrix(7)) {
            let (r, k) = rank_and_kernel(&m);
            prop_assert_eq!(r + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.apply(v).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn homology_projection_is_identity_on_reps(a in arb_matrix(3), b in arb_matrix(3)) {
            // Build a genuine complex: d_in = K * a' where K spans ker(b).
            let f = Field::new(3).unwrap();
            let n = b.cols();
            let (_, ker) = rank_and_kernel(&b);
            let m = a.cols();
            let mut d_in = Matrix::zeros(f, n, m);
            for (i, kv) in ker.iter().enumerate().take(a.rows()) {
                for c in 0..m {
                    let s = a.get(i, c);
                    for r in 0..n {
                        d_in.add_to(r, c, f.mul(s, kv[r]));
                    }
                }
            }
            let h = homology(&d_in, &b).unwrap();
            prop_assert_eq!(h.dimension, ker.len() - d_in.rank());
            for (i, rep) in h.representatives.iter().enumerate() {
                let mut e = vec![0; h.dimension];
                e[i] = 1;
                prop_assert_eq!(h.project(rep), e);
            }
            for c in 0..m {
                prop_assert!(h.project(&d_in.column(c)).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn homology_dimension_invariant_under_column_shuffle(b in arb_matrix(5), seed in 0u64..1000) {
            let f = Field::new(5).unwrap();
            let n = b.cols();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let mut shuffled = Matrix::zeros(f, b.rows(), n);
            for r in 0..b.rows() {
                for c in 0..n {
                    shuffled.set(r, perm[c], b.get(r, c));
                }
            }
            let zero_in = Matrix::zeros(f, n, 1);
            let h1 = homology(&zero_in, &b).unwrap();
            let h2 = homology(&zero_in, &shuffled).unwrap();
            prop_assert_eq!(h1.dimension, h2.dimension);
        }
    }
}
