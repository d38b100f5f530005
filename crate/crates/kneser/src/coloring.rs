//! Colorings of Kneser graphs and their star-shaped structure.
//!
//! A coloring assigns each k-subset of [n] one of m colors; it is proper when
//! no two disjoint subsets share a color. A color class is *star-shaped* when
//! all of its members share a common node (a "central element"). The counting
//! functions here capture why large instances must contain star-shaped
//! classes: a class with no common element has at most k^2 * C(n-2, k-2)
//! members, and m such classes cannot cover all C(n, k) vertices once n is
//! large enough.

use crate::combinat::{binom, CoreError, InstanceParams, Rank, Vertex};
use crate::rng::SplitMix64;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, Integer, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ColoringError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("colors array has {got} entries but C(n,k) = {expected}")]
    WrongLength { expected: u64, got: usize },
    #[error("vertex rank {rank} has color {color}, outside 1..={m}")]
    ColorOutOfRange { rank: u64, color: u32, m: u32 },
    #[error("{what} requires {requirement}, got n={n}, k={k}")]
    Unsupported { what: &'static str, requirement: &'static str, n: u32, k: u32 },
    #[error("lower bound undefined: C(n-1,k-1) must exceed k^2*C(n-2,k-2) (needs n-1 > k^2(k-1))")]
    DegenerateBound,
    #[error("malformed coloring file: {0}")]
    Json(#[from] serde_json::Error),
}

/// A total coloring of the k-subsets of [n], indexed by colex rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    params: InstanceParams,
    colors: Vec<u32>,
}

/// On-disk form: `{"n":..,"k":..,"m":..,"colors":[..]}` with colors listed in
/// colex rank order.
#[derive(Serialize, Deserialize)]
struct ColoringFile {
    n: u32,
    k: u32,
    m: u32,
    colors: Vec<u32>,
}

/// Result of checking properness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Validation {
    Proper,
    Violation { s: Vec<u32>, t: Vec<u32>, color: u32 },
}

impl Validation {
    pub fn is_proper(&self) -> bool {
        matches!(self, Validation::Proper)
    }
}

/// Star-shape analysis of one color class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub color: u32,
    pub size: u64,
    /// Nodes common to every member. An empty class has centrals 1..=n: it
    /// imposes no constraint, and treating it as star-shaped is what lets
    /// descent discard it harmlessly.
    pub centrals: Vec<u32>,
    pub star_shaped: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarReport {
    pub classes: Vec<ClassReport>,
    /// Number of star-shaped classes.
    pub alpha: u32,
    pub max_non_star_size: u64,
}

impl Coloring {
    pub fn new(params: InstanceParams, colors: Vec<u32>) -> Result<Self, ColoringError> {
        let expected = params.vertex_count();
        if colors.len() as u64 != expected {
            return Err(ColoringError::WrongLength { expected, got: colors.len() });
        }
        for (rank, &c) in colors.iter().enumerate() {
            if c == 0 || c > params.m {
                return Err(ColoringError::ColorOutOfRange {
                    rank: rank as u64,
                    color: c,
                    m: params.m,
                });
            }
        }
        Ok(Coloring { params, colors })
    }

    pub fn from_fn(params: InstanceParams, f: impl Fn(&Vertex) -> u32) -> Result<Self, ColoringError> {
        let colors: Vec<u32> = Vertex::enumerate(params.n, params.k).iter().map(f).collect();
        Coloring::new(params, colors)
    }

    pub fn params(&self) -> InstanceParams {
        self.params
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color_of_rank(&self, r: Rank) -> u32 {
        self.colors[r as usize]
    }

    pub fn color_of(&self, v: &Vertex) -> u32 {
        self.colors[v.rank() as usize]
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, ColoringError> {
        let file: ColoringFile = serde_json::from_slice(bytes)?;
        let params = InstanceParams::new(file.n, file.k, file.m)?;
        Coloring::new(params, file.colors)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ColoringFile {
            n: self.params.n,
            k: self.params.k,
            m: self.params.m,
            colors: self.colors.clone(),
        })
        .expect("coloring serialization cannot fail")
    }

    /// Properness check: within each color class, scan pairs for disjointness
    /// (equivalent to scanning all Kneser edges, but m times cheaper). The
    /// witness, if any, is the first hit scanning colors ascending and member
    /// pairs in rank order.
    pub fn validate(&self) -> Validation {
        let verts = Vertex::enumerate(self.params.n, self.params.k);
        let mut classes: Vec<Vec<usize>> = vec![Vec::new(); self.params.m as usize];
        for (r, &c) in self.colors.iter().enumerate() {
            classes[c as usize - 1].push(r);
        }
        for (ci, members) in classes.iter().enumerate() {
            for i in 0..members.len() {
                for j in i + 1..members.len() {
                    let (a, b) = (&verts[members[i]], &verts[members[j]]);
                    if a.disjoint(b) {
                        return Validation::Violation {
                            s: a.elems().to_vec(),
                            t: b.elems().to_vec(),
                            color: ci as u32 + 1,
                        };
                    }
                }
            }
        }
        Validation::Proper
    }

    /// Per-class central elements, star-shape flags, and the star count.
    pub fn star_report(&self) -> StarReport {
        let verts = Vertex::enumerate(self.params.n, self.params.k);
        let n = self.params.n;
        let mut inters: Vec<Option<Vec<u32>>> = vec![None; self.params.m as usize];
        let mut sizes = vec![0u64; self.params.m as usize];
        for (r, &c) in self.colors.iter().enumerate() {
            let idx = c as usize - 1;
            sizes[idx] += 1;
            let elems = verts[r].elems();
            inters[idx] = Some(match inters[idx].take() {
                None => elems.to_vec(),
                Some(cur) => cur.into_iter().filter(|x| elems.contains(x)).collect(),
            });
        }
        let mut classes = Vec::with_capacity(self.params.m as usize);
        let mut alpha = 0;
        let mut max_non_star_size = 0;
        for (idx, inter) in inters.into_iter().enumerate() {
            let centrals = match inter {
                None => (1..=n).collect(),
                Some(c) => c,
            };
            let star_shaped = !centrals.is_empty();
            if star_shaped {
                alpha += 1;
            } else {
                max_non_star_size = max_non_star_size.max(sizes[idx]);
            }
            classes.push(ClassReport {
                color: idx as u32 + 1,
                size: sizes[idx],
                centrals,
                star_shaped,
            });
        }
        StarReport { classes, alpha, max_non_star_size }
    }
}

impl StarReport {
    /// Colors of star-shaped classes, ascending.
    pub fn star_colors(&self) -> Vec<u32> {
        self.classes.iter().filter(|c| c.star_shaped).map(|c| c.color).collect()
    }

    pub fn class(&self, color: u32) -> &ClassReport {
        &self.classes[color as usize - 1]
    }
}

/// The wheel coloring: vertices inside [2k-1] get color 1 (they pairwise
/// intersect), and every other vertex is colored by its maximum element,
/// shifted to max(S) - (2k-2). Uses m = n-2k+2 colors; exactly one class
/// (color 1) is not star-shaped.
pub fn c1(n: u32, k: u32) -> Result<Coloring, ColoringError> {
    let params = InstanceParams::chromatic(n, k)?;
    Coloring::from_fn(params, |v| {
        if v.max() <= 2 * k - 1 {
            1
        } else {
            v.max() - (2 * k - 2)
        }
    })
}

/// The value c1 assigns to a single vertex (used as a safe fallback color).
fn c1_color(v: &Vertex, k: u32) -> u32 {
    if v.max() <= 2 * k - 1 {
        1
    } else {
        v.max() - (2 * k - 2)
    }
}

/// The block-majority coloring: partition [n] into n-3k+3 singletons
/// T_i = {n-i+1} followed by k-1 triples {3j-2, 3j-1, 3j}, and color each
/// vertex by the first block in which it holds a strict majority. Uses
/// m = n-2k+2 colors; the k-1 triple classes are not star-shaped, the
/// n-3k+3 singleton classes are.
pub fn ck1(n: u32, k: u32) -> Result<Coloring, ColoringError> {
    if k < 2 {
        return Err(ColoringError::Unsupported {
            what: "block-majority coloring",
            requirement: "k >= 2",
            n,
            k,
        });
    }
    if n < 3 * k + 3 {
        return Err(ColoringError::Unsupported {
            what: "block-majority coloring",
            requirement: "n >= 3k+3",
            n,
            k,
        });
    }
    let params = InstanceParams::chromatic(n, k)?;
    let singles = n - 3 * k + 3;
    Coloring::from_fn(params, |v| {
        // Singleton blocks come first: T_i = {n-i+1}, so the earliest hit is
        // the largest element of v that lies in a singleton block.
        if v.max() >= 3 * k - 2 {
            return n - v.max() + 1;
        }
        // Otherwise v lives inside [3k-3]; take the first triple with >= 2.
        for j in 1..k {
            let block = [3 * j - 2, 3 * j - 1, 3 * j];
            if block.iter().filter(|&&x| v.contains(x)).count() >= 2 {
                return singles + j;
            }
        }
        unreachable!("a k-subset of [3k-3] must hold a majority in some triple")
    })
}

/// Seeded proper coloring: start from the wheel coloring and run two passes
/// of random safe recoloring over a shuffled vertex order. A vertex keeps its
/// current color whenever the randomly proposed one collides with a disjoint
/// neighbor, so properness is invariant throughout; requiring m >= n-2k+2
/// guarantees the starting point exists.
pub fn greedy_random(params: InstanceParams, seed: u64) -> Result<Coloring, ColoringError> {
    let InstanceParams { n, k, m } = params;
    if n < 2 * k || m < n - 2 * k + 2 {
        return Err(ColoringError::Unsupported {
            what: "seeded greedy coloring",
            requirement: "n >= 2k and m >= n-2k+2",
            n,
            k,
        });
    }
    let verts = Vertex::enumerate(n, k);
    let v_count = verts.len();
    let mut colors: Vec<u32> = verts.iter().map(|v| c1_color(v, k)).collect();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); v_count];
    for i in 0..v_count {
        for j in i + 1..v_count {
            if verts[i].disjoint(&verts[j]) {
                adj[i].push(j as u32);
                adj[j].push(i as u32);
            }
        }
    }
    let mut rng = SplitMix64::new(seed);
    let mut order: Vec<usize> = (0..v_count).collect();
    rng.shuffle(&mut order);
    for _pass in 0..2 {
        for &v in &order {
            let proposal = 1 + rng.below(m as u64) as u32;
            if proposal != colors[v] && adj[v].iter().all(|&w| colors[w as usize] != proposal) {
                colors[v] = proposal;
            }
        }
    }
    Coloring::new(params, colors)
}

/// Size cap for a color class with no common element: k^2 * C(n-2, k-2).
pub fn non_star_bound(n: u32, k: u32) -> Result<BigUint, ColoringError> {
    if k < 2 {
        // For k = 1 every nonempty class is a single node, hence star-shaped;
        // the bound has no content there.
        return Err(ColoringError::Unsupported {
            what: "non-star class bound",
            requirement: "k >= 2",
            n,
            k,
        });
    }
    Ok(BigUint::from(k as u64 * k as u64) * binom(n as u64 - 2, k as u64 - 2))
}

/// Could n-2k+1 classes, all at the non-star size cap, cover every vertex?
/// True when (n-2k+1) * k^2 * C(n-2,k-2) >= C(n,k). Once n >= k^4 this is
/// always false, which forces a star-shaped class to exist in any proper
/// (n-2k+1)-coloring.
pub fn nonstar_cover_possible(n: u32, k: u32) -> Result<bool, ColoringError> {
    if n < 2 * k {
        return Err(ColoringError::Unsupported {
            what: "cover inequality",
            requirement: "n >= 2k",
            n,
            k,
        });
    }
    let lhs = BigUint::from((n - 2 * k + 1) as u64) * non_star_bound(n, k)?;
    Ok(lhs >= binom(n as u64, k as u64))
}

/// Above this n, every proper (n-2k+1)-coloring has a star-shaped class: k^4.
pub fn forced_star_threshold(k: u32) -> u64 {
    let k = k as u64;
    k * k * k * k
}

/// Above this n, at least (n/k) * beta classes of any proper (n-2k+1)-coloring
/// are star-shaped: k^3 * (k - beta) / (1 - beta), exactly.
pub fn many_stars_threshold(k: u32, beta: &BigRational) -> Result<BigRational, ColoringError> {
    if beta <= &BigRational::from(BigInt::from(0)) || beta >= &BigRational::from(BigInt::from(1)) {
        return Err(ColoringError::Unsupported {
            what: "star-count threshold",
            requirement: "0 < beta < 1",
            n: 0,
            k,
        });
    }
    let k3 = BigRational::from(BigInt::from(k as u64 * k as u64 * k as u64));
    let kq = BigRational::from(BigInt::from(k));
    let one = BigRational::from(BigInt::from(1));
    Ok(k3 * (kq - beta) / (one - beta))
}

/// Least alpha with alpha*C(n-1,k-1) + (m-alpha)*k^2*C(n-2,k-2) >= C(n,k),
/// clamped to 0..=m. Any proper m-coloring satisfies the inequality with its
/// actual star count (star classes hold at most C(n-1,k-1) vertices, the rest
/// at most the non-star cap), so its star count is at least this value.
pub fn min_star_lower_bound(n: u32, k: u32, m: u32) -> Result<u64, ColoringError> {
    if k < 2 || n < 2 {
        return Err(ColoringError::Unsupported {
            what: "star lower bound",
            requirement: "k >= 2 and n >= 2",
            n,
            k,
        });
    }
    let a = BigInt::from(binom(n as u64 - 1, k as u64 - 1));
    let b = BigInt::from(non_star_bound(n, k)?);
    if a <= b {
        return Err(ColoringError::DegenerateBound);
    }
    let need = BigInt::from(binom(n as u64, k as u64)) - BigInt::from(m) * &b;
    if !need.is_positive() {
        return Ok(0);
    }
    let alpha = need.div_ceil(&(a - b));
    Ok(alpha.to_u64().expect("alpha <= m fits u64").min(m as u64))
}

/// The wheel coloring's color for vertex v (exposed for descent fallbacks
/// and tests).
pub fn c1_color_of(v: &Vertex, k: u32) -> u32 {
    c1_color(v, k)
}
