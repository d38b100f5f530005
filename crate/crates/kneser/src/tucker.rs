//! The truncated octahedral ball, antipodal maps, and complementary-pair
//! search.
//!
//! B^n_k consists of the pairs (A, B) of disjoint sets with A, B each empty
//! or of size k, not both empty; the full ball B^n admits all disjoint pairs
//! of subsets of [n]. An antipodal map labels elements with signed integers
//! so that swapping the two sides negates the label. The central fact
//! verified here at desk scale: every antipodal map on B^n_k with labels in
//! {±2k, ..., ±n} has a k-complementary pair, i.e. two elements related by
//! the pair order wearing opposite labels.

use crate::coloring::{Coloring, Validation};
use crate::combinat::{binom_u64, least_k, set_union, sets_disjoint, CoreError, Vertex};
use crate::rng::SplitMix64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// Full-ball operations are capped here: |B^12| = 3^12 ≈ 531k.
pub const FULL_BALL_CAP: u32 = 12;
/// Truncated balls are capped by element count instead.
pub const TRUNCATED_BALL_CAP: u64 = 2_000_000;
/// enumerate_all_maps refuses to materialize more maps than this.
pub const MAP_ENUMERATION_CAP: u64 = 1 << 20;

#[derive(Debug, Error)]
pub enum TuckerError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("full ball requires n <= {FULL_BALL_CAP}, got n = {0}")]
    FullCap(u32),
    #[error("truncated ball for (n,k) = ({n},{k}) has {size} elements, cap is {TRUNCATED_BALL_CAP}")]
    TruncatedCap { n: u32, k: u32, size: u64 },
    #[error("operation needs {expected:?} flavor, got {got:?}")]
    FlavorMismatch { expected: Flavor, got: Flavor },
    #[error("malformed signed pair: {0}")]
    BadPair(String),
    #[error("domain mismatch: map is over ({map_n},{map_k}) {flavor:?}, ball is not")]
    DomainMismatch { map_n: u32, map_k: u32, flavor: Flavor },
    #[error("label {label} invalid: magnitude must lie in {min_mag}..={max_mag}")]
    BadLabel { label: i32, min_mag: u32, max_mag: u32 },
    #[error("expected {expected} orbit labels, got {got}")]
    WrongOrbitCount { expected: usize, got: usize },
    #[error("coloring has m = {m} colors; labels only fit m <= {max}")]
    TooManyColors { m: u32, max: u32 },
    #[error("input coloring is not proper: {s:?} and {t:?} share color {color}")]
    ImproperColoring { s: Vec<u32>, t: Vec<u32>, color: u32 },
    #[error("cannot lift a widened map: magnitude {0} collides with the small-side label range")]
    WidenedLift(u32),
    #[error("lifted map does not equal the lift of the base map (first differs at orbit {0})")]
    LiftMismatch(usize),
    #[error("element ({a:?},{b:?}) is not in the ball")]
    NotInBall { a: Vec<u32>, b: Vec<u32> },
    #[error("enumerating these maps would produce {count} maps, cap is {MAP_ENUMERATION_CAP}")]
    EnumTooLarge { count: u64 },
    #[error("malformed map file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("map file invalid: {0}")]
    MapFile(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Truncated,
    Full,
}

/// One ball element: an ordered pair of disjoint node sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedPair {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub flavor: Flavor,
}

fn check_sorted_set(s: &[u32]) -> Result<(), TuckerError> {
    if s.windows(2).any(|w| w[0] >= w[1]) || s.first().is_some_and(|&x| x == 0) {
        return Err(TuckerError::BadPair(format!(
            "{s:?} is not a strictly ascending set of positive nodes"
        )));
    }
    Ok(())
}

impl SignedPair {
    pub fn new(a: Vec<u32>, b: Vec<u32>, flavor: Flavor) -> Result<Self, TuckerError> {
        check_sorted_set(&a)?;
        check_sorted_set(&b)?;
        if !sets_disjoint(&a, &b) {
            return Err(TuckerError::BadPair(format!("{a:?} and {b:?} intersect")));
        }
        if flavor == Flavor::Truncated {
            if a.is_empty() && b.is_empty() {
                return Err(TuckerError::BadPair("(∅,∅) is not a truncated element".into()));
            }
            if !a.is_empty() && !b.is_empty() && a.len() != b.len() {
                return Err(TuckerError::BadPair(format!(
                    "truncated sides must both have size k: {a:?} vs {b:?}"
                )));
            }
        }
        Ok(SignedPair { a, b, flavor })
    }

    pub fn swapped(&self) -> SignedPair {
        SignedPair { a: self.b.clone(), b: self.a.clone(), flavor: self.flavor }
    }

    /// The orbit {(A,B), (B,A)} is represented by its lexicographically
    /// smaller member; only (∅,∅) is its own swap.
    pub fn is_canonical(&self) -> bool {
        self.a <= self.b
    }
}

/// A fully enumerated ball with orbit bookkeeping. Truncated enumeration
/// runs A then B over ∅ followed by the k-subsets in colex order; full
/// enumeration runs both sides over subsets of [n] in ascending bitmask
/// order. Both visit each element exactly once.
#[derive(Debug, Clone)]
pub struct Ball {
    n: u32,
    k: u32,
    flavor: Flavor,
    elements: Vec<SignedPair>,
    index: HashMap<(Vec<u32>, Vec<u32>), u32>,
    /// orbit_id[p] = orbit of the element at position p.
    orbit_id: Vec<u32>,
    /// positions of canonical representatives, in position order.
    rep_positions: Vec<u32>,
}

pub fn enumerate_ball(n: u32, k: u32, flavor: Flavor) -> Result<Ball, TuckerError> {
    let sides: Vec<Vec<u32>> = match flavor {
        Flavor::Truncated => {
            if k == 0 || n < 2 * k {
                return Err(CoreError::BadParams {
                    n,
                    k,
                    m: 0,
                    reason: "truncated ball needs n >= 2k >= 2",
                }
                .into());
            }
            let c = binom_u64(n as u64, k as u64)?;
            let size = 2 * c + c * binom_u64(n as u64 - k as u64, k as u64)?;
            if size > TRUNCATED_BALL_CAP {
                return Err(TuckerError::TruncatedCap { n, k, size });
            }
            std::iter::once(Vec::new())
                .chain(Vertex::enumerate(n, k).into_iter().map(|v| v.elems().to_vec()))
                .collect()
        }
        Flavor::Full => {
            if n > FULL_BALL_CAP {
                return Err(TuckerError::FullCap(n));
            }
            (0u32..1 << n)
                .map(|mask| (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect())
                .collect()
        }
    };
    let mut elements = Vec::new();
    for a in &sides {
        for b in &sides {
            if !sets_disjoint(a, b) {
                continue;
            }
            if flavor == Flavor::Truncated && a.is_empty() && b.is_empty() {
                continue;
            }
            elements.push(SignedPair { a: a.clone(), b: b.clone(), flavor });
        }
    }
    let index: HashMap<(Vec<u32>, Vec<u32>), u32> = elements
        .iter()
        .enumerate()
        .map(|(i, p)| ((p.a.clone(), p.b.clone()), i as u32))
        .collect();
    let mut orbit_id = vec![u32::MAX; elements.len()];
    let mut rep_positions = Vec::new();
    for (pos, p) in elements.iter().enumerate() {
        if p.is_canonical() {
            let orbit = rep_positions.len() as u32;
            rep_positions.push(pos as u32);
            orbit_id[pos] = orbit;
            let partner = index[&(p.b.clone(), p.a.clone())];
            orbit_id[partner as usize] = orbit;
        }
    }
    debug_assert!(orbit_id.iter().all(|&o| o != u32::MAX));
    Ok(Ball { n, k, flavor, elements, index, orbit_id, rep_positions })
}

impl Ball {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn elements(&self) -> &[SignedPair] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn orbit_count(&self) -> usize {
        self.rep_positions.len()
    }

    pub fn position(&self, a: &[u32], b: &[u32]) -> Option<u32> {
        self.index.get(&(a.to_vec(), b.to_vec())).copied()
    }

    pub fn orbit_of_position(&self, pos: u32) -> u32 {
        self.orbit_id[pos as usize]
    }

    pub fn rep(&self, orbit: u32) -> &SignedPair {
        &self.elements[self.rep_positions[orbit as usize] as usize]
    }
}

/// A₁ ⪯ A₂ iff the k least elements of A₁ ∪ A₂ are exactly A₂. Arguments
/// must each be empty or of size k.
pub fn prec(a1: &[u32], a2: &[u32], k: u32) -> Result<bool, TuckerError> {
    for s in [a1, a2] {
        check_sorted_set(s)?;
        if !s.is_empty() && s.len() != k as usize {
            return Err(TuckerError::BadPair(format!("{s:?} is neither empty nor of size {k}")));
        }
    }
    // The union is ∅ or has at least k elements, so truncation cannot fail.
    Ok(least_k(&set_union(a1, a2), k as usize)? == a2)
}

/// (A₁,B₁) ⪯ (A₂,B₂) iff A₁ ⪯ A₂, B₁ ⪯ B₂, and Aᵢ ∩ Bⱼ = ∅ for all i, j.
pub fn pair_prec(p1: &SignedPair, p2: &SignedPair, k: u32) -> Result<bool, TuckerError> {
    for p in [p1, p2] {
        if p.flavor != Flavor::Truncated {
            return Err(TuckerError::FlavorMismatch {
                expected: Flavor::Truncated,
                got: p.flavor,
            });
        }
    }
    Ok(prec(&p1.a, &p2.a, k)?
        && prec(&p1.b, &p2.b, k)?
        && sets_disjoint(&p1.a, &p1.b)
        && sets_disjoint(&p1.a, &p2.b)
        && sets_disjoint(&p2.a, &p1.b)
        && sets_disjoint(&p2.a, &p2.b))
}

/// A total order refining ⪯: truncated flavor lists ∅ first and then the
/// k-subsets in decreasing colex rank (A₁ ⪯ A₂ forces A₂ pointwise below
/// A₁, hence colex(A₂) ≤ colex(A₁)); full flavor sorts all subsets of [n]
/// by cardinality, the size-k band in decreasing colex, other bands in
/// increasing colex.
#[derive(Debug, Clone)]
pub struct TotalOrder {
    n: u32,
    k: u32,
    flavor: Flavor,
    sets: Vec<Vec<u32>>,
    pos: HashMap<Vec<u32>, u32>,
}

pub fn canonical_total_order(n: u32, k: u32, flavor: Flavor) -> Result<TotalOrder, TuckerError> {
    let sets: Vec<Vec<u32>> = match flavor {
        Flavor::Truncated => {
            if k == 0 || n < 2 * k {
                return Err(CoreError::BadParams {
                    n,
                    k,
                    m: 0,
                    reason: "order needs n >= 2k >= 2",
                }
                .into());
            }
            if binom_u64(n as u64, k as u64)? > TRUNCATED_BALL_CAP {
                return Err(TuckerError::TruncatedCap { n, k, size: u64::MAX });
            }
            std::iter::once(Vec::new())
                .chain(Vertex::enumerate(n, k).into_iter().rev().map(|v| v.elems().to_vec()))
                .collect()
        }
        Flavor::Full => {
            if n > FULL_BALL_CAP {
                return Err(TuckerError::FullCap(n));
            }
            let mut sets: Vec<Vec<u32>> = vec![Vec::new()];
            for size in 1..=n {
                let band = Vertex::enumerate(n, size);
                if size == k {
                    sets.extend(band.into_iter().rev().map(|v| v.elems().to_vec()));
                } else {
                    sets.extend(band.into_iter().map(|v| v.elems().to_vec()));
                }
            }
            sets
        }
    };
    let pos = sets.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
    Ok(TotalOrder { n, k, flavor, sets, pos })
}

impl TotalOrder {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    pub fn position(&self, s: &[u32]) -> Result<u32, TuckerError> {
        self.pos.get(s).copied().ok_or_else(|| TuckerError::BadPair(format!(
            "{s:?} is not in the order's domain"
        )))
    }

    /// Strict a > b.
    pub fn gt(&self, a: &[u32], b: &[u32]) -> Result<bool, TuckerError> {
        Ok(self.position(a)? > self.position(b)?)
    }
}

/// An antipodal map, stored as one label per orbit so that
/// λ(B,A) = −λ(A,B) holds by construction. Truncated labels have magnitude
/// in {2k, ..., n}, or {2k−1, ..., n} when widened; full labels have
/// magnitude in {2, ..., n} except λ(∅,∅) = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntipodalMap {
    n: u32,
    k: u32,
    flavor: Flavor,
    widened: bool,
    labels: Vec<i32>,
}

#[derive(Serialize, Deserialize)]
struct MapFileEntry {
    a: Vec<u32>,
    b: Vec<u32>,
    label: i32,
}

#[derive(Serialize, Deserialize)]
struct MapFile {
    n: u32,
    k: u32,
    flavor: Flavor,
    #[serde(default)]
    widened: bool,
    labels: Vec<MapFileEntry>,
}

impl AntipodalMap {
    fn magnitude_range(n: u32, k: u32, flavor: Flavor, widened: bool) -> (u32, u32) {
        match flavor {
            Flavor::Truncated => (2 * k - u32::from(widened), n),
            Flavor::Full => (2, n),
        }
    }

    /// Build from one label per orbit, aligned with the ball's canonical
    /// representatives in enumeration order.
    pub fn from_rep_labels(
        ball: &Ball,
        labels: Vec<i32>,
        widened: bool,
    ) -> Result<Self, TuckerError> {
        if labels.len() != ball.orbit_count() {
            return Err(TuckerError::WrongOrbitCount {
                expected: ball.orbit_count(),
                got: labels.len(),
            });
        }
        let (min_mag, max_mag) = Self::magnitude_range(ball.n, ball.k, ball.flavor, widened);
        for (orbit, &label) in labels.iter().enumerate() {
            let rep = ball.rep(orbit as u32);
            if ball.flavor == Flavor::Full && rep.a.is_empty() && rep.b.is_empty() {
                if label != 1 {
                    return Err(TuckerError::MapFile(format!(
                        "λ(∅,∅) must be 1, got {label}"
                    )));
                }
                continue;
            }
            let mag = label.unsigned_abs();
            if mag < min_mag || mag > max_mag {
                return Err(TuckerError::BadLabel { label, min_mag, max_mag });
            }
        }
        Ok(AntipodalMap {
            n: ball.n,
            k: ball.k,
            flavor: ball.flavor,
            widened,
            labels,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn widened(&self) -> bool {
        self.widened
    }

    pub fn rep_labels(&self) -> &[i32] {
        &self.labels
    }

    fn check_ball(&self, ball: &Ball) -> Result<(), TuckerError> {
        if ball.n != self.n
            || ball.flavor != self.flavor
            || (self.flavor == Flavor::Truncated && ball.k != self.k)
            || ball.orbit_count() != self.labels.len()
        {
            return Err(TuckerError::DomainMismatch {
                map_n: self.n,
                map_k: self.k,
                flavor: self.flavor,
            });
        }
        Ok(())
    }

    /// Label of the element at a ball position.
    pub fn label_at(&self, ball: &Ball, pos: u32) -> i32 {
        let label = self.labels[ball.orbit_id[pos as usize] as usize];
        if ball.elements[pos as usize].is_canonical() {
            label
        } else {
            -label
        }
    }

    pub fn label(&self, ball: &Ball, a: &[u32], b: &[u32]) -> Result<i32, TuckerError> {
        self.check_ball(ball)?;
        let pos = ball
            .position(a, b)
            .ok_or_else(|| TuckerError::NotInBall { a: a.to_vec(), b: b.to_vec() })?;
        Ok(self.label_at(ball, pos))
    }

    /// Seeded uniform map: each orbit gets an independent sign and magnitude.
    pub fn random(ball: &Ball, seed: u64) -> Self {
        let (min_mag, max_mag) = Self::magnitude_range(ball.n, ball.k, ball.flavor, false);
        let mut rng = SplitMix64::new(seed);
        let labels = (0..ball.orbit_count() as u32)
            .map(|orbit| {
                let rep = ball.rep(orbit);
                if ball.flavor == Flavor::Full && rep.a.is_empty() && rep.b.is_empty() {
                    return 1;
                }
                let mag = (min_mag as u64 + rng.below((max_mag - min_mag + 1) as u64)) as i32;
                if rng.below(2) == 0 {
                    mag
                } else {
                    -mag
                }
            })
            .collect();
        AntipodalMap {
            n: ball.n,
            k: ball.k,
            flavor: ball.flavor,
            widened: false,
            labels,
        }
    }

    /// Every antipodal map on the ball (unwidened label range). Refuses to
    /// build more than MAP_ENUMERATION_CAP maps.
    pub fn enumerate_all(ball: &Ball) -> Result<Vec<Self>, TuckerError> {
        let (min_mag, max_mag) = Self::magnitude_range(ball.n, ball.k, ball.flavor, false);
        let choices: Vec<Vec<i32>> = (0..ball.orbit_count() as u32)
            .map(|orbit| {
                let rep = ball.rep(orbit);
                if ball.flavor == Flavor::Full && rep.a.is_empty() && rep.b.is_empty() {
                    vec![1]
                } else {
                    (min_mag..=max_mag).flat_map(|m| [m as i32, -(m as i32)]).collect()
                }
            })
            .collect();
        let mut count: u64 = 1;
        for c in &choices {
            count = count.saturating_mul(c.len() as u64);
            if count > MAP_ENUMERATION_CAP {
                return Err(TuckerError::EnumTooLarge { count });
            }
        }
        let mut maps = Vec::with_capacity(count as usize);
        let mut picks = vec![0usize; choices.len()];
        loop {
            let labels: Vec<i32> = picks.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            maps.push(AntipodalMap {
                n: ball.n,
                k: ball.k,
                flavor: ball.flavor,
                widened: false,
                labels,
            });
            // Odometer over the per-orbit choice lists.
            let mut i = 0;
            loop {
                if i == picks.len() {
                    return Ok(maps);
                }
                picks[i] += 1;
                if picks[i] < choices[i].len() {
                    break;
                }
                picks[i] = 0;
                i += 1;
            }
        }
    }

    pub fn to_json(&self, ball: &Ball) -> Result<String, TuckerError> {
        self.check_ball(ball)?;
        let labels = self
            .labels
            .iter()
            .enumerate()
            .map(|(orbit, &label)| {
                let rep = ball.rep(orbit as u32);
                MapFileEntry { a: rep.a.clone(), b: rep.b.clone(), label }
            })
            .collect();
        Ok(serde_json::to_string(&MapFile {
            n: self.n,
            k: self.k,
            flavor: self.flavor,
            widened: self.widened,
            labels,
        })
        .expect("map serialization cannot fail"))
    }

    /// Parse and fully validate a map file, reconstructing its ball. The
    /// entries must be exactly the canonical orbit representatives in
    /// enumeration order.
    pub fn from_json(bytes: &[u8]) -> Result<(Ball, Self), TuckerError> {
        let file: MapFile = serde_json::from_slice(bytes)?;
        let ball = enumerate_ball(file.n, file.k, file.flavor)?;
        if file.labels.len() != ball.orbit_count() {
            return Err(TuckerError::WrongOrbitCount {
                expected: ball.orbit_count(),
                got: file.labels.len(),
            });
        }
        let mut labels = Vec::with_capacity(file.labels.len());
        for (orbit, entry) in file.labels.iter().enumerate() {
            let rep = ball.rep(orbit as u32);
            if entry.a != rep.a || entry.b != rep.b {
                return Err(TuckerError::MapFile(format!(
                    "entry {orbit} is ({:?},{:?}), expected representative ({:?},{:?})",
                    entry.a, entry.b, rep.a, rep.b
                )));
            }
            labels.push(entry.label);
        }
        let map = AntipodalMap::from_rep_labels(&ball, labels, file.widened)?;
        Ok((ball, map))
    }
}

/// λ from a proper coloring: λ(A,B) = c(A) + offset when A > B in the
/// order, and −(c(B) + offset) otherwise. The offset 2k−1 places colors
/// 1..=n−2k+1 onto labels 2k..=n; an (n−2k+2)-coloring shifts by 2k−2
/// instead, widening the range by the single value 2k−1 (flagged).
pub fn lambda_from_coloring(
    c: &Coloring,
    ball: &Ball,
    order: &TotalOrder,
) -> Result<AntipodalMap, TuckerError> {
    let p = c.params();
    if ball.flavor != Flavor::Truncated {
        return Err(TuckerError::FlavorMismatch { expected: Flavor::Truncated, got: ball.flavor });
    }
    if ball.n != p.n || ball.k != p.k || order.n != p.n || order.k != p.k
        || order.flavor != Flavor::Truncated
    {
        return Err(TuckerError::DomainMismatch { map_n: p.n, map_k: p.k, flavor: Flavor::Truncated });
    }
    if let Validation::Violation { s, t, color } = c.validate() {
        return Err(TuckerError::ImproperColoring { s, t, color });
    }
    let plain_max = p.n - 2 * p.k + 1;
    let (offset, widened) = if p.m <= plain_max {
        (2 * p.k - 1, false)
    } else if p.m == plain_max + 1 {
        (2 * p.k - 2, true)
    } else {
        return Err(TuckerError::TooManyColors { m: p.m, max: plain_max + 1 });
    };
    let color_of = |s: &[u32]| -> Result<i32, TuckerError> {
        let v = Vertex::new(s.to_vec()).map_err(TuckerError::Core)?;
        Ok((c.color_of(&v) + offset) as i32)
    };
    let labels = (0..ball.orbit_count() as u32)
        .map(|orbit| {
            let rep = ball.rep(orbit);
            // Exactly one side is greater; ∅ is the order's least element, so
            // a nonempty side always beats an empty one.
            if order.gt(&rep.a, &rep.b)? {
                color_of(&rep.a)
            } else {
                color_of(&rep.b).map(|l| -l)
            }
        })
        .collect::<Result<Vec<i32>, _>>()?;
    AntipodalMap::from_rep_labels(ball, labels, widened)
}

/// All position pairs (i, j) of a truncated ball with
/// pair_prec(elements[i], elements[j]), in scan order.
pub fn related_pairs(ball: &Ball) -> Result<Vec<(u32, u32)>, TuckerError> {
    if ball.flavor != Flavor::Truncated {
        return Err(TuckerError::FlavorMismatch { expected: Flavor::Truncated, got: ball.flavor });
    }
    let mut pairs = Vec::new();
    for (i, p1) in ball.elements.iter().enumerate() {
        for (j, p2) in ball.elements.iter().enumerate() {
            if pair_prec(p1, p2, ball.k)? {
                pairs.push((i as u32, j as u32));
            }
        }
    }
    Ok(pairs)
}

/// First pair (p1, p2) with p1 ⪯ p2 and λ(p1) = −λ(p2), scanning the
/// precomputed related-pair list in order. Using the same list across many
/// maps amortizes the ⪯ evaluations.
pub fn find_k_complementary_among(
    ball: &Ball,
    map: &AntipodalMap,
    pairs: &[(u32, u32)],
) -> Option<(SignedPair, SignedPair)> {
    for &(i, j) in pairs {
        if map.label_at(ball, i) == -map.label_at(ball, j) {
            return Some((ball.elements[i as usize].clone(), ball.elements[j as usize].clone()));
        }
    }
    None
}

/// Deterministic first k-complementary pair of the map, if any.
pub fn find_k_complementary(
    ball: &Ball,
    map: &AntipodalMap,
) -> Result<Option<(SignedPair, SignedPair)>, TuckerError> {
    map.check_ball(ball)?;
    let pairs = related_pairs(ball)?;
    Ok(find_k_complementary_among(ball, map, &pairs))
}

/// First complementary pair of a full map: componentwise inclusion with
/// opposite labels.
pub fn find_complementary_full(
    ball: &Ball,
    map: &AntipodalMap,
) -> Result<Option<(SignedPair, SignedPair)>, TuckerError> {
    if ball.flavor != Flavor::Full {
        return Err(TuckerError::FlavorMismatch { expected: Flavor::Full, got: ball.flavor });
    }
    map.check_ball(ball)?;
    let masks: Vec<(u64, u64)> = ball
        .elements
        .iter()
        .map(|p| {
            let m = |s: &[u32]| s.iter().fold(0u64, |acc, &x| acc | 1 << (x - 1));
            (m(&p.a), m(&p.b))
        })
        .collect();
    for i in 0..ball.elements.len() {
        for j in 0..ball.elements.len() {
            let included = masks[i].0 & masks[j].0 == masks[i].0
                && masks[i].1 & masks[j].1 == masks[i].1;
            if included && map.label_at(ball, i as u32) == -map.label_at(ball, j as u32) {
                return Ok(Some((ball.elements[i].clone(), ball.elements[j].clone())));
            }
        }
    }
    Ok(None)
}

/// Lift a truncated map to the full ball: pairs with both sides smaller
/// than k get label ±(1 + |A| + |B|) signed by the full order; once a side
/// reaches size k, the pair projects through least_k and inherits the
/// truncated map's label.
pub fn lift_map(
    trunc_ball: &Ball,
    map: &AntipodalMap,
    full_ball: &Ball,
    full_order: &TotalOrder,
) -> Result<AntipodalMap, TuckerError> {
    map.check_ball(trunc_ball)?;
    if map.widened {
        return Err(TuckerError::WidenedLift(2 * map.k - 1));
    }
    if full_ball.flavor != Flavor::Full
        || full_ball.n != map.n
        || full_order.flavor != Flavor::Full
        || full_order.n != map.n
    {
        return Err(TuckerError::DomainMismatch {
            map_n: map.n,
            map_k: map.k,
            flavor: Flavor::Full,
        });
    }
    let labels = (0..full_ball.orbit_count() as u32)
        .map(|orbit| {
            let rep = full_ball.rep(orbit);
            lifted_label(trunc_ball, map, full_order, &rep.a, &rep.b)
        })
        .collect::<Result<Vec<i32>, _>>()?;
    AntipodalMap::from_rep_labels(full_ball, labels, false)
}

fn lifted_label(
    trunc_ball: &Ball,
    map: &AntipodalMap,
    full_order: &TotalOrder,
    a: &[u32],
    b: &[u32],
) -> Result<i32, TuckerError> {
    let k = map.k as usize;
    match (a.len() >= k, b.len() >= k) {
        (false, false) => {
            let mag = (1 + a.len() + b.len()) as i32;
            if a == b || full_order.gt(a, b)? {
                Ok(mag)
            } else {
                Ok(-mag)
            }
        }
        (true, false) => map.label(trunc_ball, &least_k(a, k)?, &[]),
        (false, true) => map.label(trunc_ball, &[], &least_k(b, k)?),
        (true, true) => map.label(trunc_ball, &least_k(a, k)?, &least_k(b, k)?),
    }
}

/// A violation of the lift's case analysis found during the soundness scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LiftViolation {
    /// A complementary pair involving a small-sides element: impossible,
    /// since those magnitudes stay below 2k while projected ones reach 2k.
    CaseOneComplement { first: SignedPair, second: SignedPair },
    /// Both sides project, but the projections are not ⪯-related.
    ProjectionNotRelated { first: SignedPair, second: SignedPair },
    /// Projections are related but their labels are not opposite.
    ProjectionLabelsNotOpposite { first: SignedPair, second: SignedPair },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub elements: u64,
    /// Ordered complementary pairs of the lifted map (inclusion both sides,
    /// opposite labels).
    pub complementary_pairs: u64,
    /// How many of those had both sides of size >= k and were checked for
    /// projection down to a k-complementary pair.
    pub checked_projections: u64,
    pub violations: Vec<LiftViolation>,
}

/// Exhaustively scan the full ball for complementary pairs of the lifted
/// map and verify each one projects to a k-complementary pair of the base
/// map, per the case analysis. The lifted map is re-derived from the base
/// map first; a mismatch is an error.
pub fn check_lift_soundness(
    trunc_ball: &Ball,
    map: &AntipodalMap,
    full_ball: &Ball,
    full_order: &TotalOrder,
    lifted: &AntipodalMap,
) -> Result<LiftReport, TuckerError> {
    let expected = lift_map(trunc_ball, map, full_ball, full_order)?;
    if expected.labels != lifted.labels {
        let at = expected
            .labels
            .iter()
            .zip(&lifted.labels)
            .position(|(x, y)| x != y)
            .unwrap_or(0);
        return Err(TuckerError::LiftMismatch(at));
    }
    let k = map.k as usize;
    let project = |s: &[u32]| -> Vec<u32> {
        if s.len() >= k {
            least_k(s, k).expect("length checked")
        } else {
            Vec::new()
        }
    };
    let masks: Vec<(u64, u64)> = full_ball
        .elements
        .iter()
        .map(|p| {
            let m = |s: &[u32]| s.iter().fold(0u64, |acc, &x| acc | 1 << (x - 1));
            (m(&p.a), m(&p.b))
        })
        .collect();
    let mut report = LiftReport {
        elements: full_ball.len() as u64,
        complementary_pairs: 0,
        checked_projections: 0,
        violations: Vec::new(),
    };
    for i in 0..full_ball.elements.len() {
        for j in 0..full_ball.elements.len() {
            let included = masks[i].0 & masks[j].0 == masks[i].0
                && masks[i].1 & masks[j].1 == masks[i].1;
            if !included
                || lifted.label_at(full_ball, i as u32) != -lifted.label_at(full_ball, j as u32)
            {
                continue;
            }
            report.complementary_pairs += 1;
            let (p1, p2) = (&full_ball.elements[i], &full_ball.elements[j]);
            let small = |p: &SignedPair| p.a.len() < k && p.b.len() < k;
            if small(p1) || small(p2) {
                report.violations.push(LiftViolation::CaseOneComplement {
                    first: p1.clone(),
                    second: p2.clone(),
                });
                continue;
            }
            report.checked_projections += 1;
            let q1 = SignedPair::new(project(&p1.a), project(&p1.b), Flavor::Truncated)?;
            let q2 = SignedPair::new(project(&p2.a), project(&p2.b), Flavor::Truncated)?;
            if !pair_prec(&q1, &q2, map.k)? {
                report.violations.push(LiftViolation::ProjectionNotRelated {
                    first: p1.clone(),
                    second: p2.clone(),
                });
            } else if map.label(trunc_ball, &q1.a, &q1.b)?
                != -map.label(trunc_ball, &q2.a, &q2.b)?
            {
                report.violations.push(LiftViolation::ProjectionLabelsNotOpposite {
                    first: p1.clone(),
                    second: p2.clone(),
                });
            }
        }
    }
    Ok(report)
}
