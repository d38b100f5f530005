//! Combinatorial groundwork: exact binomials, k-subsets of [n] ("vertices" of
//! the Kneser graph), the colexicographic ranking, disjointness tests, and
//! Kneser edge enumeration.
//!
//! Conventions used across the crate: graph nodes are 1-based (1..=n), colors
//! are 1-based (1..=m), and vertex ranks are 0-based colex ranks. The colex
//! rank of S = {s_1 < ... < s_k} is sum_i C(s_i - 1, i).

use num::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 0-based colexicographic rank of a k-subset.
pub type Rank = u64;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum CoreError {
    #[error("vertex elements must be distinct, sorted, and at least 1: {0:?}")]
    MalformedVertex(Vec<u32>),
    #[error("rank {rank} out of range: C({n},{k}) = {card}")]
    RankOutOfRange { rank: u64, n: u32, k: u32, card: u64 },
    #[error("need at least {need} elements, got {got}")]
    TooFewElements { need: usize, got: usize },
    #[error("invalid instance parameters n={n}, k={k}, m={m}: {reason}")]
    BadParams { n: u32, k: u32, m: u32, reason: &'static str },
    #[error("value does not fit in 64 bits: C({n},{k})")]
    Overflow { n: u64, k: u64 },
}

/// Exact binomial coefficient C(n, k). Returns 0 when k > n.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// C(n, k) as a u64, or an error if the value overflows.
pub fn binom_u64(n: u64, k: u64) -> Result<u64, CoreError> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(CoreError::Overflow { n, k })?
            / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return Err(CoreError::Overflow { n, k });
        }
    }
    Ok(acc as u64)
}

/// Problem-instance parameters: k-subsets of [n] colored with m colors.
/// The interesting regime is n >= 2k with m = n-2k+1 (the count the theorem
/// rules out) or m = n-2k+2 (the chromatic number); descent steps produce
/// smaller instances, so the type itself only requires n >= k >= 1, m >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InstanceParams {
    pub n: u32,
    pub k: u32,
    pub m: u32,
}

impl InstanceParams {
    pub fn new(n: u32, k: u32, m: u32) -> Result<Self, CoreError> {
        if k == 0 {
            return Err(CoreError::BadParams { n, k, m, reason: "k must be at least 1" });
        }
        if n < k {
            return Err(CoreError::BadParams { n, k, m, reason: "n must be at least k" });
        }
        if m == 0 {
            return Err(CoreError::BadParams { n, k, m, reason: "m must be at least 1" });
        }
        Ok(InstanceParams { n, k, m })
    }

    /// The instance the impossibility theorem speaks about: m = n-2k+1.
    pub fn standard(n: u32, k: u32) -> Result<Self, CoreError> {
        if n < 2 * k {
            return Err(CoreError::BadParams { n, k, m: 0, reason: "standard instance needs n >= 2k" });
        }
        Self::new(n, k, n - 2 * k + 1)
    }

    /// The chromatic instance: m = n-2k+2 colors, which do suffice.
    pub fn chromatic(n: u32, k: u32) -> Result<Self, CoreError> {
        if n < 2 * k {
            return Err(CoreError::BadParams { n, k, m: 0, reason: "chromatic instance needs n >= 2k" });
        }
        Self::new(n, k, n - 2 * k + 2)
    }

    /// Number of vertices, C(n, k).
    pub fn vertex_count(&self) -> u64 {
        binom_u64(self.n as u64, self.k as u64).expect("vertex count fits u64 at supported sizes")
    }
}

/// A vertex of the Kneser graph: a k-subset of [n], stored sorted ascending,
/// with a bitmask accelerator when every element fits in 64 bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    elems: Vec<u32>,
    mask: Option<u64>,
}

fn mask_of(elems: &[u32]) -> Option<u64> {
    let mut m = 0u64;
    for &e in elems {
        if e > 64 {
            return None;
        }
        m |= 1u64 << (e - 1);
    }
    Some(m)
}

impl Vertex {
    pub fn new(elems: Vec<u32>) -> Result<Self, CoreError> {
        if elems.is_empty()
            || elems[0] == 0
            || elems.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(CoreError::MalformedVertex(elems));
        }
        let mask = mask_of(&elems);
        Ok(Vertex { elems, mask })
    }

    pub fn elems(&self) -> &[u32] {
        &self.elems
    }

    pub fn k(&self) -> u32 {
        self.elems.len() as u32
    }

    pub fn max(&self) -> u32 {
        *self.elems.last().unwrap()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn disjoint(&self, other: &Vertex) -> bool {
        match (self.mask, other.mask) {
            (Some(a), Some(b)) => a & b == 0,
            _ => sets_disjoint(&self.elems, &other.elems),
        }
    }

    /// 0-based colex rank: sum over positions i = 1..=k of C(s_i - 1, i).
    pub fn rank(&self) -> Rank {
        let mut r = 0u64;
        for (i, &s) in self.elems.iter().enumerate() {
            r += binom_u64(s as u64 - 1, i as u64 + 1).expect("rank fits u64");
        }
        r
    }

    /// Inverse of `rank` for k-subsets of [n].
    pub fn unrank(rank: Rank, n: u32, k: u32) -> Result<Self, CoreError> {
        let card = binom_u64(n as u64, k as u64)?;
        if rank >= card {
            return Err(CoreError::RankOutOfRange { rank, n, k, card });
        }
        let mut rest = rank;
        let mut elems = vec![0u32; k as usize];
        let mut upper = n as u64;
        for i in (1..=k as u64).rev() {
            // Largest s with C(s-1, i) <= rest; elements above `upper` are
            // impossible because ranks are monotone in each coordinate.
            let mut s = upper;
            while binom_u64(s - 1, i).unwrap() > rest {
                s -= 1;
            }
            rest -= binom_u64(s - 1, i).unwrap();
            elems[i as usize - 1] = s as u32;
            upper = s - 1;
        }
        Vertex::new(elems)
    }

    /// All k-subsets of [n] in colex order (position == rank).
    pub fn enumerate(n: u32, k: u32) -> Vec<Vertex> {
        let mut out = Vec::new();
        let mut cur: Vec<u32> = (1..=k).collect();
        if k > n {
            return out;
        }
        loop {
            out.push(Vertex::new(cur.clone()).unwrap());
            // Next subset in colex order: bump the leftmost element that can
            // grow without colliding with its right neighbor, reset the prefix.
            let k = k as usize;
            let mut i = 0;
            while i < k {
                let limit = if i + 1 < k { cur[i + 1] - 1 } else { n };
                if cur[i] < limit {
                    break;
                }
                i += 1;
            }
            if i == k {
                return out;
            }
            cur[i] += 1;
            for (j, slot) in cur.iter_mut().enumerate().take(i) {
                *slot = j as u32 + 1;
            }
        }
    }

    pub fn bitmask(&self) -> Option<u64> {
        self.mask
    }
}

/// Disjointness of two sorted node sets (merge scan).
pub fn sets_disjoint(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Sorted union of two sorted node sets.
pub fn set_union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

/// The k least elements of a sorted set. The empty set truncates to itself
/// by convention; any other set with fewer than k elements is an error.
pub fn least_k(xs: &[u32], k: usize) -> Result<Vec<u32>, CoreError> {
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    if xs.len() < k {
        return Err(CoreError::TooFewElements { need: k, got: xs.len() });
    }
    Ok(xs[..k].to_vec())
}

/// All Kneser edges (pairs of disjoint vertices) as rank pairs (r, s) with
/// r < s, ordered lexicographically by rank. The vertex list indexed by rank
/// is returned alongside so callers can resolve endpoints.
pub fn kneser_edges(n: u32, k: u32) -> (Vec<Vertex>, Vec<(Rank, Rank)>) {
    let verts = Vertex::enumerate(n, k);
    let mut edges = Vec::new();
    for r in 0..verts.len() {
        for s in r + 1..verts.len() {
            if verts[r].disjoint(&verts[s]) {
                edges.push((r as Rank, s as Rank));
            }
        }
    }
    (verts, edges)
}

/// Number of Kneser edges, C(n,k) * C(n-k,k) / 2, exactly.
pub fn kneser_edge_count(n: u32, k: u32) -> BigUint {
    binom(n as u64, k as u64) * binom((n - k.min(n)) as u64, k as u64) / BigUint::from(2u32)
}
