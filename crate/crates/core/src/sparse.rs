//! Sparse linear combinations `Σ c_i b_i` over `F_p`, kept sorted by index.

use crate::exactlin::Field;

pub type Lin = Vec<(usize, u32)>;

/// Accumulates terms and produces a sorted combination without zeros.
#[derive(Clone, Debug, Default)]
pub struct LinBuilder {
    terms: Vec<(usize, u32)>,
}

impl LinBuilder {
    pub fn new() -> Self {
        LinBuilder { terms: Vec::new() }
    }

    pub fn push(&mut self, idx: usize, c: u32) {
        if c != 0 {
            self.terms.push((idx, c));
        }
    }

    pub fn extend_scaled(&mut self, f: Field, v: &[(usize, u32)], c: u32) {
        if c == 0 {
            return;
        }
        for &(i, x) in v {
            self.terms.push((i, f.mul(x, c)));
        }
    }

    pub fn finish(mut self, f: Field) -> Lin {
        self.terms.sort_unstable_by_key(|t| t.0);
        let mut out: Lin = Vec::with_capacity(self.terms.len());
        for (i, c) in self.terms {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = f.add(last.1, c),
                _ => out.push((i, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        out
    }
}

pub fn unit(i: usize) -> Lin {
    vec![(i, 1)]
}

pub fn add(f: Field, a: &[(usize, u32)], b: &[(usize, u32)]) -> Lin {
    let mut lb = LinBuilder::new();
    lb.extend_scaled(f, a, 1);
    lb.extend_scaled(f, b, 1);
    lb.finish(f)
}

pub fn scale(f: Field, a: &[(usize, u32)], c: u32) -> Lin {
    if c == 0 {
        return Vec::new();
    }
    a.iter().map(|&(i, x)| (i, f.mul(x, c))).collect()
}

pub fn sub(f: Field, a: &[(usize, u32)], b: &[(usize, u32)]) -> Lin {
    let mut lb = LinBuilder::new();
    lb.extend_scaled(f, a, 1);
    lb.extend_scaled(f, b, f.neg(1));
    lb.finish(f)
}

pub fn to_dense(v: &[(usize, u32)], n: usize) -> Vec<u32> {
    let mut d = vec![0; n];
    for &(i, c) in v {
        d[i] = c;
    }
    d
}

pub fn from_dense(v: &[u32]) -> Lin {
    v.iter().enumerate().filter(|t| *t.1 != 0).map(|(i, &c)| (i, c)).collect()
}

pub fn coeff(v: &[(usize, u32)], i: usize) -> u32 {
    v.binary_search_by_key(&i, |t| t.0).map(|k| v[k].1).unwrap_or(0)
}
