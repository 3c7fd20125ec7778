use std::collections::{HashMap, VecDeque};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matgroup::{PSLElem, SLMat};
use crate::rings::RingSpec;

/// Default refusal threshold for enumeration.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// Full multiplication tables are built only up to this order.
const TABLE_LIMIT: usize = 2000;

/// Keys below this bound are looked up in a dense array.
const DENSE_LIMIT: u64 = 1 << 25;

/// Environment variable naming the class-cache directory.
pub const CACHE_ENV: &str = "PSL_LAB_CACHE";

/// `|PSL_n(F_q)| = q^{n(n−1)/2} ∏_{i=2..n} (q^i − 1) / gcd(n, q − 1)`.
pub fn psl_order(n: usize, q: u64) -> u128 {
    let q = q as u128;
    let mut order = q.pow((n * (n - 1) / 2) as u32);
    for i in 2..=n as u32 {
        order *= q.pow(i) - 1;
    }
    order / (n as u128).gcd(&(q - 1))
}

enum Lookup {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

/// `PSL_n(F_q)` enumerated with canonical representatives.
///
/// Elements are sorted by their key `Σ entry · q^pos` (row-major), except
/// that the identity is moved to index 0.
pub struct FinGroup {
    n: usize,
    q: u64,
    roots: Vec<u64>,
    entries: Vec<u32>,
    lookup: Lookup,
    inverse: Vec<u32>,
    table: Option<Vec<u32>>,
    generators: Vec<u32>,
    classes: OnceLock<Classes>,
    cache: Option<PathBuf>,
    cache_hit: bool,
}

/// Conjugacy classes, each sorted, ordered by least member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classes {
    pub classes: Vec<Vec<u32>>,
    pub class_of: Vec<u32>,
}

impl std::fmt::Debug for FinGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PSL_{}(F_{}) [{} elements]", self.n, self.q, self.order())
    }
}

/// Enumerates `PSL_n(F_q)` for prime `q`, refusing orders above `cap`.
pub fn enumerate_psl(n: usize, q: u64) -> Result<FinGroup> {
    FinGroup::build(n, q, DEFAULT_CAP, cache_dir().as_deref())
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|s| !s.is_empty()).map(PathBuf::from)
}

impl FinGroup {
    pub fn build(n: usize, q: u64, cap: u64, cache: Option<&Path>) -> Result<FinGroup> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
        }
        if !crate::rings::is_prime_u64(q) || q > u16::MAX as u64 {
            return Err(Error::Unsupported(format!("F_{q}: only prime fields below 2^16")));
        }
        let order = psl_order(n, q);
        if order > cap as u128 {
            return Err(Error::CapExceeded { order, cap });
        }
        let key_bound = (q as u128).pow((n * n) as u32);
        if key_bound > u64::MAX as u128 {
            return Err(Error::Unsupported("matrix keys overflow u64".into()));
        }
        let roots: Vec<u64> = (1..q).filter(|&z| pow_mod(z, n as u64, q) == 1).collect();
        let mut g = FinGroup {
            n,
            q,
            roots,
            entries: Vec::new(),
            lookup: Lookup::Sparse(HashMap::new()),
            inverse: Vec::new(),
            table: None,
            generators: Vec::new(),
            classes: OnceLock::new(),
            cache: cache.map(Path::to_path_buf),
            cache_hit: false,
        };
        let cached = cache.and_then(|dir| g.load_cache(dir, order as usize));
        let keys = match &cached {
            Some((keys, _)) => keys.clone(),
            None => g.bfs_keys(order as usize)?,
        };
        g.install(keys, key_bound as u64);
        if let Some((_, classes)) = cached {
            let _ = g.classes.set(classes);
            g.cache_hit = true;
        }
        Ok(g)
    }

    /// Whether elements and classes were read from the cache directory.
    pub fn cache_hit(&self) -> bool {
        self.cache_hit
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn order(&self) -> usize {
        self.inverse.len()
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn ring(&self) -> RingSpec {
        RingSpec::PrimeField(self.q)
    }

    /// Row-major entries of the canonical representative.
    pub fn matrix(&self, i: u32) -> &[u32] {
        let nn = self.n * self.n;
        &self.entries[i as usize * nn..(i as usize + 1) * nn]
    }

    fn canonicalize(&self, m: &mut [u64]) {
        let q = self.q;
        let Some(&first) = m.iter().find(|&&x| x != 0) else { return };
        let zeta = *self.roots.iter().min_by_key(|&&z| z * first % q).expect("1 is a root");
        if zeta != 1 {
            for x in m.iter_mut() {
                *x = *x * zeta % q;
            }
        }
    }

    fn key_of(&self, m: &[u64]) -> u64 {
        m.iter().rev().fold(0u64, |acc, &x| acc * self.q + x)
    }

    fn key_to_matrix(&self, mut key: u64) -> Vec<u64> {
        (0..self.n * self.n)
            .map(|_| {
                let x = key % self.q;
                key /= self.q;
                x
            })
            .collect()
    }

    fn product(&self, a: &[u32], b: &[u32]) -> Vec<u64> {
        let (n, q) = (self.n, self.q);
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k] as u64;
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += x * b[k * n + j] as u64;
                }
            }
        }
        for x in out.iter_mut() {
            *x %= q;
        }
        out
    }

    fn bfs_keys(&self, order: usize) -> Result<Vec<u64>> {
        let (n, q) = (self.n, self.q);
        let gens: Vec<Vec<u32>> = elementary_generators(n)
            .into_iter()
            .map(|(i, j)| {
                let mut m = identity_u32(n);
                m[i * n + j] = 1;
                m
            })
            .collect();
        let id = identity_u32(n);
        let mut seen: HashMap<u64, ()> = HashMap::with_capacity(order);
        let mut queue = VecDeque::new();
        let id_key = self.key_of(&id.iter().map(|&x| x as u64).collect::<Vec<_>>());
        seen.insert(id_key, ());
        queue.push_back(id);
        while let Some(m) = queue.pop_front() {
            for g in &gens {
                let mut p = self.product(&m, g);
                self.canonicalize(&mut p);
                let key = self.key_of(&p);
                if seen.insert(key, ()).is_none() {
                    queue.push_back(p.iter().map(|&x| x as u32).collect());
                }
            }
        }
        if seen.len() != order {
            return Err(Error::Internal(format!("enumerated {} elements of PSL_{n}(F_{q}), expected {order}", seen.len())));
        }
        let mut keys: Vec<u64> = seen.into_keys().collect();
        keys.sort_unstable();
        let pos = keys.iter().position(|&k| k == id_key).expect("identity enumerated");
        keys.remove(pos);
        keys.insert(0, id_key);
        Ok(keys)
    }

    fn install(&mut self, keys: Vec<u64>, key_bound: u64) {
        let nn = self.n * self.n;
        self.entries = Vec::with_capacity(keys.len() * nn);
        for &k in &keys {
            let m = self.key_to_matrix(k);
            self.entries.extend(m.iter().map(|&x| x as u32));
        }
        self.lookup = if key_bound <= DENSE_LIMIT {
            let mut dense = vec![u32::MAX; key_bound as usize];
            for (i, &k) in keys.iter().enumerate() {
                dense[k as usize] = i as u32;
            }
            Lookup::Dense(dense)
        } else {
            Lookup::Sparse(keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect())
        };
        let order = keys.len();
        self.inverse = (0..order as u32)
            .into_par_iter()
            .map(|i| {
                let m: Vec<u64> = self.matrix(i).iter().map(|&x| x as u64).collect();
                let inv = inverse_mod(&m, self.n, self.q).expect("group elements are invertible");
                self.index_of_raw(inv).expect("inverse is in the group")
            })
            .collect();
        if order <= TABLE_LIMIT {
            let table: Vec<u32> = (0..order * order)
                .into_par_iter()
                .map(|ab| self.mul_slow((ab / order) as u32, (ab % order) as u32))
                .collect();
            self.table = Some(table);
        }
        self.generators = elementary_generators(self.n)
            .into_iter()
            .map(|(i, j)| {
                let mut m = identity_u32(self.n).iter().map(|&x| x as u64).collect::<Vec<_>>();
                m[i * self.n + j] = 1;
                self.index_of_raw(m).expect("generator is in the group")
            })
            .collect();
    }

    fn lookup_key(&self, key: u64) -> Option<u32> {
        match &self.lookup {
            Lookup::Dense(v) => v.get(key as usize).copied().filter(|&i| i != u32::MAX),
            Lookup::Sparse(h) => h.get(&key).copied(),
        }
    }

    fn index_of_raw(&self, mut m: Vec<u64>) -> Option<u32> {
        for x in m.iter_mut() {
            *x %= self.q;
        }
        self.canonicalize(&mut m);
        self.lookup_key(self.key_of(&m))
    }

    /// Index of the image of a row-major integer matrix, if it lies in the group.
    pub fn index_of_matrix(&self, m: &[i64]) -> Option<u32> {
        if m.len() != self.n * self.n {
            return None;
        }
        let q = self.q as i64;
        let m: Vec<u64> = m.iter().map(|&x| x.rem_euclid(q) as u64).collect();
        if crate::linalg::modp::det(&to_rows(&m, self.n), self.q) == 0 {
            return None;
        }
        self.index_of_raw(m)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let mut p = self.product(self.matrix(a), self.matrix(b));
        self.canonicalize(&mut p);
        self.lookup_key(self.key_of(&p)).expect("group is closed")
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.order() + b as usize],
            None => self.mul_slow(a, b),
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// `x g x⁻¹`.
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(x, g), self.inv(x))
    }

    /// `[g, h] = g h g⁻¹ h⁻¹`.
    pub fn commutator(&self, g: u32, h: u32) -> u32 {
        self.mul(self.mul(g, h), self.mul(self.inv(g), self.inv(h)))
    }

    /// `e_{i,j}(a)` with one-based indices.
    pub fn elem(&self, i: usize, j: usize, a: u64) -> Result<u32> {
        if i == j || i == 0 || j == 0 || i > self.n || j > self.n {
            return Err(Error::InvalidArgument(format!("elementary matrix needs 1 <= i != j <= {}", self.n)));
        }
        let mut m: Vec<u64> = identity_u32(self.n).iter().map(|&x| x as u64).collect();
        m[(i - 1) * self.n + (j - 1)] = a % self.q;
        self.index_of_raw(m).ok_or_else(|| Error::Internal("elementary matrix missing".into()))
    }

    /// `e_{i,j}(1)` for all `i ≠ j`, lexicographically.
    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn to_psl(&self, i: u32) -> PSLElem {
        let ring = self.ring();
        let entries = self.matrix(i).iter().map(|&x| ring.from_i64(x as i64)).collect();
        PSLElem::new(SLMat::new(ring, self.n, entries).expect("determinant one"))
    }

    pub fn index_of_psl(&self, g: &PSLElem) -> Result<u32> {
        if g.dim() != self.n {
            return Err(Error::DimensionMismatch(g.dim(), self.n));
        }
        let q = self.q;
        let m: Vec<i64> = g
            .lift()
            .entries()
            .iter()
            .map(|e| match (e.ring(), e.to_bigint()) {
                (RingSpec::PrimeField(p) | RingSpec::Modular(p), Some(v)) if p == q => {
                    i64::try_from(v).map_err(|_| Error::Internal("residue overflow".into()))
                }
                _ => Err(Error::RingMismatch(e.ring().to_string(), self.ring().to_string())),
            })
            .collect::<Result<_>>()?;
        self.index_of_matrix(&m).ok_or_else(|| Error::Internal("matrix not in the group".into()))
    }

    pub fn classes(&self) -> &Classes {
        self.classes.get_or_init(|| {
            let c = self.compute_classes();
            if let Some(dir) = &self.cache {
                // the cache is an accelerator; a failed write only costs a recomputation
                let _ = self.write_cache(dir, &c);
            }
            c
        })
    }

    pub fn class_of(&self, g: u32) -> &[u32] {
        let c = self.classes();
        &c.classes[c.class_of[g as usize] as usize]
    }

    fn compute_classes(&self) -> Classes {
        let order = self.order();
        let mut class_of = vec![u32::MAX; order];
        let mut classes = Vec::new();
        for start in 0..order as u32 {
            if class_of[start as usize] != u32::MAX {
                continue;
            }
            let id = classes.len() as u32;
            let mut members = vec![start];
            class_of[start as usize] = id;
            let mut k = 0;
            while k < members.len() {
                let x = members[k];
                for &g in &self.generators {
                    let y = self.conj(g, x);
                    if class_of[y as usize] == u32::MAX {
                        class_of[y as usize] = id;
                        members.push(y);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            classes.push(members);
        }
        Classes { classes, class_of }
    }

    /// Cache file name for this group.
    pub fn cache_file_name(&self) -> String {
        cache_file_name(self.n, self.q)
    }

    /// Writes elements and classes to `dir`.
    pub fn write_cache(&self, dir: &Path, classes: &Classes) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(self.cache_file_name());
        let mut out = String::new();
        out.push_str(&format!("psllab-class-cache n={} q={} order={} version={}\n", self.n, self.q, self.order(), crate::CODE_VERSION));
        out.push_str("elements");
        for i in 0..self.order() as u32 {
            let m: Vec<u64> = self.matrix(i).iter().map(|&x| x as u64).collect();
            out.push_str(&format!(" {}", self.key_of(&m)));
        }
        out.push('\n');
        for c in &classes.classes {
            out.push_str("class");
            for x in c {
                out.push_str(&format!(" {x}"));
            }
            out.push('\n');
        }
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, out)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    fn load_cache(&self, dir: &Path, order: usize) -> Option<(Vec<u64>, Classes)> {
        let text = fs::read_to_string(dir.join(cache_file_name(self.n, self.q))).ok()?;
        let mut lines = text.lines();
        let header = format!("psllab-class-cache n={} q={} order={} version={}", self.n, self.q, order, crate::CODE_VERSION);
        if lines.next()? != header {
            return None;
        }
        let keys: Vec<u64> = lines.next()?.strip_prefix("elements")?.split_whitespace().map(|t| t.parse().ok()).collect::<Option<_>>()?;
        if keys.len() != order {
            return None;
        }
        let mut class_of = vec![u32::MAX; order];
        let mut classes = Vec::new();
        for line in lines {
            let members: Vec<u32> = line.strip_prefix("class")?.split_whitespace().map(|t| t.parse().ok()).collect::<Option<_>>()?;
            for &m in &members {
                let slot = class_of.get_mut(m as usize)?;
                if *slot != u32::MAX {
                    return None;
                }
                *slot = classes.len() as u32;
            }
            classes.push(members);
        }
        if class_of.contains(&u32::MAX) {
            return None;
        }
        Some((keys, Classes { classes, class_of }))
    }
}

pub fn cache_file_name(n: usize, q: u64) -> String {
    format!("psl_n{n}_q{q}_v{}.txt", env!("CARGO_PKG_VERSION"))
}

fn elementary_generators(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

fn identity_u32(n: usize) -> Vec<u32> {
    let mut m = vec![0u32; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

fn to_rows(m: &[u64], n: usize) -> Vec<Vec<u64>> {
    m.chunks(n).map(<[u64]>::to_vec).collect()
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Gauss–Jordan inverse over `F_p`.
pub(crate) fn inverse_mod(m: &[u64], n: usize, p: u64) -> Option<Vec<u64>> {
    let mut aug: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row = m[i * n..(i + 1) * n].iter().map(|x| x % p).collect::<Vec<_>>();
            row.extend((0..n).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    let pivots = crate::linalg::modp::rref(&mut aug, p);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.iter().flat_map(|r| r[n..].to_vec()).collect())
}

/// A subset of a [`FinGroup`] as a bitset over element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementSet {
    bits: FixedBitSet,
}

impl ElementSet {
    pub fn empty(g: &FinGroup) -> Self {
        ElementSet { bits: FixedBitSet::with_capacity(g.order()) }
    }

    pub fn full(g: &FinGroup) -> Self {
        let mut s = Self::empty(g);
        s.bits.insert_range(..);
        s
    }

    pub fn from_indices(g: &FinGroup, xs: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Self::empty(g);
        for x in xs {
            s.insert(x);
        }
        s
    }

    pub fn insert(&mut self, x: u32) {
        self.bits.insert(x as usize);
    }

    pub fn contains(&self, x: u32) -> bool {
        self.bits.contains(x as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.ones().map(|x| x as u32)
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersects(&self, other: &ElementSet) -> bool {
        !self.bits.is_disjoint(&other.bits)
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        ElementSet { bits }
    }
}
