//! Independent reference implementation used as a test oracle.
//!
//! Forms are maps from index bitmasks to rationals. The differential is built
//! directly from the fixture's structure constants, and `δ`, `Λ`, `i_ξ` are
//! transposes, valid only for orthonormal frames.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use lefschetz_lab::fixture::{parse_fixture, FixtureDocument, MetricSpec};
use lefschetz_lab::Form;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;
pub type Oform = BTreeMap<u32, Q>;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn to_oracle(f: &Form) -> Oform {
    f.terms().map(|(m, c)| (m.bits(), c.clone())).collect()
}

fn add_term(out: &mut Oform, mask: u32, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = out.entry(mask).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        out.remove(&mask);
    }
}

/// Sorts a sequence of 1-based indices; `None` on repetition, else mask and sign.
fn normalize(seq: &[usize]) -> Option<(u32, bool)> {
    let mut v = seq.to_vec();
    let mut odd = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    let mask = v.iter().fold(0u32, |m, i| m | 1 << (i - 1));
    Some((mask, odd))
}

pub fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

pub fn wedge(a: &Oform, b: &Oform) -> Oform {
    let mut out = Oform::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut seq = indices(*ma);
            seq.extend(indices(*mb));
            if let Some((m, odd)) = normalize(&seq) {
                let c = ca * cb;
                add_term(&mut out, m, if odd { -c } else { c });
            }
        }
    }
    out
}

pub fn scale(a: &Oform, s: &Q) -> Oform {
    let mut out = Oform::new();
    for (m, c) in a {
        add_term(&mut out, *m, c * s);
    }
    out
}

pub fn sum(a: &Oform, b: &Oform) -> Oform {
    let mut out = a.clone();
    for (m, c) in b {
        add_term(&mut out, *m, c.clone());
    }
    out
}

pub fn degree_of(a: &Oform) -> Option<usize> {
    a.keys().next().map(|m| m.count_ones() as usize)
}

pub struct Oracle {
    pub dim: usize,
    /// `de^k` as 2-forms, index `k − 1`.
    pub de: Vec<Oform>,
    pub eta: Oform,
    pub orthonormal: bool,
    d_cache: HashMap<u32, Oform>,
    phi_cache: HashMap<u32, Oform>,
    eta_cache: HashMap<u32, Oform>,
}

impl Oracle {
    pub fn from_document(doc: &FixtureDocument) -> Oracle {
        let mut de = vec![Oform::new(); doc.dim];
        for (key, terms) in &doc.diff1 {
            let k: usize = key.parse().unwrap();
            for (c, i, j) in terms {
                let (m, odd) = normalize(&[*i, *j]).unwrap();
                let c = c.value().unwrap();
                add_term(&mut de[k - 1], m, if odd { -c } else { c });
            }
        }
        let mut eta = Oform::new();
        for (c, i) in &doc.eta {
            add_term(&mut eta, 1 << (i - 1), c.value().unwrap());
        }
        let orthonormal = matches!(&doc.metric, MetricSpec::Named(_));
        let mut o = Oracle {
            dim: doc.dim,
            de,
            eta,
            orthonormal,
            d_cache: HashMap::new(),
            phi_cache: HashMap::new(),
            eta_cache: HashMap::new(),
        };
        for mask in 0..(1u32 << doc.dim) {
            let v = o.d_monomial(mask);
            o.d_cache.insert(mask, v);
        }
        let phi = o.phi_form();
        for mask in 0..(1u32 << doc.dim) {
            let e = Oform::from([(mask, Q::one())]);
            o.phi_cache.insert(mask, wedge(&phi, &e));
            o.eta_cache.insert(mask, wedge(&o.eta, &e));
        }
        o
    }

    pub fn bundled(name: &str) -> Oracle {
        let doc = parse_fixture(lefschetz_lab::fixture::bundled_text(name).unwrap()).unwrap();
        Oracle::from_document(&doc)
    }

    pub fn n(&self) -> usize {
        (self.dim - 1) / 2
    }

    fn d_monomial(&self, mask: u32) -> Oform {
        let idx = indices(mask);
        let mut out = Oform::new();
        for (pos, &k) in idx.iter().enumerate() {
            for (m2, c) in &self.de[k - 1] {
                let mut seq: Vec<usize> = idx[..pos].to_vec();
                seq.extend(indices(*m2));
                seq.extend(&idx[pos + 1..]);
                if let Some((m, odd)) = normalize(&seq) {
                    let neg = odd ^ (pos % 2 == 1);
                    add_term(&mut out, m, if neg { -c.clone() } else { c.clone() });
                }
            }
        }
        out
    }

    pub fn basis(&self, p: usize) -> Vec<u32> {
        (0..(1u32 << self.dim)).filter(|m| m.count_ones() as usize == p).collect()
    }

    fn apply(a: &Oform, cache: &HashMap<u32, Oform>) -> Oform {
        let mut out = Oform::new();
        for (m, c) in a {
            for (m2, c2) in &cache[m] {
                add_term(&mut out, *m2, c * c2);
            }
        }
        out
    }

    pub fn d(&self, a: &Oform) -> Oform {
        Self::apply(a, &self.d_cache)
    }

    /// Transpose of the map with monomial images `cache`, from degree `lower`, evaluated on `a`.
    fn transpose_apply(&self, a: &Oform, lower: usize, cache: &HashMap<u32, Oform>) -> Oform {
        let mut out = Oform::new();
        for m in self.basis(lower) {
            let c = cache[&m]
                .iter()
                .filter_map(|(k, v)| a.get(k).map(|w| v * w))
                .fold(Q::zero(), |s, x| s + x);
            add_term(&mut out, m, c);
        }
        out
    }

    pub fn delta(&self, a: &Oform, p: usize) -> Oform {
        assert!(self.orthonormal);
        if p == 0 {
            return Oform::new();
        }
        self.transpose_apply(a, p - 1, &self.d_cache)
    }

    pub fn laplacian(&self, a: &Oform, p: usize) -> Oform {
        let dd = self.delta(&self.d(a), p + 1);
        let dl = if p == 0 { Oform::new() } else { self.d(&self.delta(a, p)) };
        sum(&dd, &dl)
    }

    pub fn d_eta(&self) -> Oform {
        self.d(&self.eta)
    }

    /// `Φ = ½ dη`.
    pub fn phi_form(&self) -> Oform {
        scale(&self.d_eta(), &(q(1) / q(2)))
    }

    pub fn lef(&self, a: &Oform) -> Oform {
        Self::apply(a, &self.phi_cache)
    }

    pub fn eps_eta(&self, a: &Oform) -> Oform {
        Self::apply(a, &self.eta_cache)
    }

    pub fn lambda(&self, a: &Oform, p: usize) -> Oform {
        assert!(self.orthonormal);
        self.transpose_apply(a, p - 2, &self.phi_cache)
    }

    /// `i_ξ` for a unit `η` in an orthonormal frame.
    pub fn i_xi(&self, a: &Oform, p: usize) -> Oform {
        assert!(self.orthonormal);
        self.transpose_apply(a, p - 1, &self.eta_cache)
    }

    pub fn d_rank(&self, p: usize) -> usize {
        let rows: Vec<Oform> = self.basis(p).into_iter().map(|m| self.d_cache[&m].clone()).collect();
        rank(rows)
    }

    pub fn betti(&self) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=self.dim).map(|p| self.d_rank(p)).collect();
        (0..=self.dim)
            .map(|p| {
                let size = self.basis(p).len();
                size - ranks[p] - if p == 0 { 0 } else { ranks[p - 1] }
            })
            .collect()
    }
}

/// Rank of a set of sparse vectors by fraction-exact elimination.
pub fn rank(rows: Vec<Oform>) -> usize {
    let mut pivots: BTreeMap<u32, Oform> = BTreeMap::new();
    for mut row in rows {
        loop {
            let Some((&lead, lc)) = row.iter().next() else { break };
            match pivots.get(&lead) {
                Some(prow) => {
                    let f = lc.clone();
                    row = sum(&row, &scale(prow, &-f));
                }
                None => {
                    let inv = Q::one() / lc;
                    pivots.insert(lead, scale(&row, &inv));
                    break;
                }
            }
        }
    }
    pivots.len()
}

pub fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// Admissible `ν` grid: `k(n − b + k + 1)` for `max(0, ⌈(b−n)/2⌉) ≤ k ≤ ⌊b/2⌋`,
/// where `b = p` (closed) or `p + 1` (coclosed).
pub fn grid(n: usize, p: usize, coclosed: bool) -> Vec<i64> {
    let (n, b) = (n as i64, p as i64 + coclosed as i64);
    let lo = ((b - n).max(0) + 1) / 2;
    (lo..=b / 2).map(|k| k * (n - b + k + 1)).collect()
}
