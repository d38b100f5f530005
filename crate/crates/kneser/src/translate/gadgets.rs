//! The descent-step gadget formulas: Star / DiscardColor / DiscardNode /
//! RenumNode / RenumColor / p', in both flavors — the "first star class"
//! selection (ef) and the counting-based batch selection (frege).
//!
//! A `Round` materializes one descent round's families over a given input
//! instance. Rounds chain: round r reads the p'[r] atoms defined by round
//! r−1 (round 0 reads the base p atoms), and `definitions()` exports the
//! extension table that lets evaluation, substitution, and unwound-size
//! measurement resolve the nesting.

use crate::combinat::{InstanceParams, Vertex};
use crate::descent::batch_discard_count;

use super::formula::{Arena, Atom, Definitions, FormulaId};
use super::threshold::{threshold_formula, ThresholdMode};
use super::{TranslateError, Variant};

/// One descent round's gadget formulas over an input instance.
pub struct Round {
    params: InstanceParams,
    variant: Variant,
    base_round: u32,
    /// Colors (and nodes) the round discards: 1 for ef, ceil(n/2k) for frege.
    d: u32,
    verts_out: Vec<Vertex>,
    star: Vec<Vec<FormulaId>>,
    star_class: Vec<FormulaId>,
    discard_color: Vec<FormulaId>,
    discard_node: Vec<FormulaId>,
    renum_node: Vec<Vec<FormulaId>>,
    renum_color: Vec<Vec<FormulaId>>,
    pprime: Option<Vec<Vec<FormulaId>>>,
    threshold_stats: Vec<(u128, u128)>,
}

impl Round {
    /// Build every family except p' (which can be large; see
    /// `build_pprime`). `base_round` 0 reads the base p atoms; r >= 1 reads
    /// the p'[r] extension atoms of an earlier round.
    pub fn new(
        arena: &mut Arena,
        params: InstanceParams,
        variant: Variant,
        base_round: u32,
    ) -> Result<Round, TranslateError> {
        let (n, k, m) = (params.n, params.k, params.m);
        if n < 2 * k {
            return Err(TranslateError::RoundParams { n, k, m, need: "n >= 2k" });
        }
        let d = match variant {
            Variant::Ef => 1,
            Variant::Frege => batch_discard_count(n, k),
        };
        if m <= d {
            return Err(TranslateError::RoundParams { n, k, m, need: "m > discard count" });
        }
        if n < d + k {
            return Err(TranslateError::RoundParams { n, k, m, need: "n >= discard count + k" });
        }

        let verts_in = Vertex::enumerate(n, k);
        let mut round = Round {
            params,
            variant,
            base_round,
            d,
            verts_out: Vertex::enumerate(n - d, k),
            star: vec![Vec::new(); n as usize],
            star_class: Vec::new(),
            discard_color: Vec::new(),
            discard_node: Vec::new(),
            renum_node: Vec::new(),
            renum_color: Vec::new(),
            pprime: None,
            threshold_stats: Vec::new(),
        };

        // Star(i, l) = conjunction of ¬p[S, l] over vertices S not containing
        // i; Star(l) = disjunction over i.
        for l in 1..=m {
            let not_p: Vec<FormulaId> = verts_in
                .iter()
                .map(|s| {
                    let v = arena.var(round.input_atom(s.rank(), l));
                    arena.not(v)
                })
                .collect();
            for i in 1..=n {
                let children: Vec<FormulaId> = verts_in
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| !s.contains(i))
                    .map(|(idx, _)| not_p[idx])
                    .collect();
                let f = arena.and(children);
                round.star[(i - 1) as usize].push(f);
            }
        }
        for l in 1..=m {
            let per_node: Vec<FormulaId> =
                (1..=n).map(|i| round.star[(i - 1) as usize][(l - 1) as usize]).collect();
            round.star_class.push(arena.or(per_node));
        }

        // DiscardColor: ef picks the first star-shaped class; frege keeps a
        // class iff at most d classes up to and including it are star-shaped.
        for l in 1..=m {
            let sc = round.star_class[(l - 1) as usize];
            let f = match variant {
                Variant::Ef => {
                    let mut children = vec![sc];
                    for lp in 1..l {
                        let prev = round.star_class[(lp - 1) as usize];
                        children.push(arena.not(prev));
                    }
                    arena.and(children)
                }
                Variant::Frege => {
                    let prefix: Vec<FormulaId> =
                        (1..=l).map(|lp| round.star_class[(lp - 1) as usize]).collect();
                    // A prefix shorter than d satisfies the bound trivially;
                    // clamping keeps the same function.
                    let bound = round.record_threshold(
                        arena,
                        &prefix,
                        d.min(l) as u64,
                        ThresholdMode::AtMost,
                    )?;
                    arena.and(vec![sc, bound])
                }
            };
            round.discard_color.push(f);
        }

        // DiscardNode(i) = some discarded class has i as least central.
        for i in 1..=n {
            let mut disjuncts = Vec::with_capacity(m as usize);
            for l in 1..=m {
                let mut children = vec![
                    round.discard_color[(l - 1) as usize],
                    round.star[(i - 1) as usize][(l - 1) as usize],
                ];
                for ip in 1..i {
                    let prev = round.star[(ip - 1) as usize][(l - 1) as usize];
                    children.push(arena.not(prev));
                }
                disjuncts.push(arena.and(children));
            }
            round.discard_node.push(arena.or(disjuncts));
        }

        // RenumNode(v, i): v is the i-th non-discarded node, as a counting
        // condition on the prefix before v. Likewise RenumColor.
        let not_dn: Vec<FormulaId> =
            (0..n as usize).map(|idx| arena.not(round.discard_node[idx])).collect();
        for v in 1..=n {
            let mut per_new = Vec::with_capacity((n - d) as usize);
            for i in 1..=n - d {
                // More kept predecessors than exist before v: the count
                // formula is the constant impossibility.
                let count = if i > v {
                    arena.constant(false)
                } else {
                    round.record_threshold(
                        arena,
                        &not_dn[..(v - 1) as usize],
                        (i - 1) as u64,
                        ThresholdMode::Equal,
                    )?
                };
                let f = arena.and(vec![count, not_dn[(v - 1) as usize]]);
                per_new.push(f);
            }
            round.renum_node.push(per_new);
        }
        let not_dc: Vec<FormulaId> =
            (0..m as usize).map(|idx| arena.not(round.discard_color[idx])).collect();
        for c in 1..=m {
            let mut per_new = Vec::with_capacity((m - d) as usize);
            for j in 1..=m - d {
                let count = if j > c {
                    arena.constant(false)
                } else {
                    round.record_threshold(
                        arena,
                        &not_dc[..(c - 1) as usize],
                        (j - 1) as u64,
                        ThresholdMode::Equal,
                    )?
                };
                let f = arena.and(vec![count, not_dc[(c - 1) as usize]]);
                per_new.push(f);
            }
            round.renum_color.push(per_new);
        }

        Ok(round)
    }

    fn record_threshold(
        &mut self,
        arena: &mut Arena,
        xs: &[FormulaId],
        t: u64,
        mode: ThresholdMode,
    ) -> Result<FormulaId, TranslateError> {
        let sum: u128 = xs.iter().map(|x| arena.size(*x)).sum();
        let f = threshold_formula(arena, xs, t, mode)?;
        self.threshold_stats.push((sum, arena.size(f)));
        Ok(f)
    }

    /// The atom family this round reads.
    pub fn input_atom(&self, rank: u64, color: u32) -> Atom {
        if self.base_round == 0 {
            Atom::P { rank, color }
        } else {
            Atom::PPrime { round: self.base_round, rank, color }
        }
    }

    /// The extension atom this round defines for the next instance.
    pub fn output_atom(&self, rank: u64, color: u32) -> Atom {
        Atom::PPrime { round: self.base_round + 1, rank, color }
    }

    pub fn params(&self) -> InstanceParams {
        self.params
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Colors (and nodes) discarded by this round.
    pub fn discard_count(&self) -> u32 {
        self.d
    }

    /// The instance the round's p' variables describe.
    pub fn new_params(&self) -> InstanceParams {
        InstanceParams::new(self.params.n - self.d, self.params.k, self.params.m - self.d)
            .expect("validated at construction")
    }

    pub fn star(&self, i: u32, l: u32) -> FormulaId {
        self.star[(i - 1) as usize][(l - 1) as usize]
    }

    pub fn star_class(&self, l: u32) -> FormulaId {
        self.star_class[(l - 1) as usize]
    }

    pub fn discard_color(&self, l: u32) -> FormulaId {
        self.discard_color[(l - 1) as usize]
    }

    pub fn discard_node(&self, i: u32) -> FormulaId {
        self.discard_node[(i - 1) as usize]
    }

    /// RenumNode(v, i): old node v is the i-th kept node.
    pub fn renum_node(&self, v: u32, i: u32) -> FormulaId {
        self.renum_node[(v - 1) as usize][(i - 1) as usize]
    }

    /// RenumColor(c, j): old color c is the j-th kept color.
    pub fn renum_color(&self, c: u32, j: u32) -> FormulaId {
        self.renum_color[(c - 1) as usize][(j - 1) as usize]
    }

    /// Sum of input sizes and resulting size for every counting formula the
    /// round built.
    pub fn threshold_stats(&self) -> &[(u128, u128)] {
        &self.threshold_stats
    }

    /// p'[S, j] for one new vertex and color, built on demand.
    pub fn pprime_single(
        &self,
        arena: &mut Arena,
        s: &Vertex,
        j: u32,
    ) -> Result<FormulaId, TranslateError> {
        let out = self.new_params();
        if s.k() != out.k || s.max() > out.n {
            return Err(TranslateError::BadIndex { what: "new vertex", value: s.max(), max: out.n });
        }
        if j < 1 || j > out.m {
            return Err(TranslateError::BadIndex { what: "new color", value: j, max: out.m });
        }
        let (n, m) = (self.params.n, self.params.m);
        match self.variant {
            Variant::Ef => {
                // ∨_{i,l} DiscardNode(i) ∧ DiscardColor(l) ∧ p[S shifted past
                // i, j shifted past l].
                let mut disjuncts = Vec::with_capacity((n * m) as usize);
                for i in 1..=n {
                    let shifted: Vec<u32> =
                        s.elems().iter().map(|&x| if x >= i { x + 1 } else { x }).collect();
                    let old_rank = Vertex::new(shifted).expect("shift keeps a valid vertex").rank();
                    for l in 1..=m {
                        let old_color = if j < l { j } else { j + 1 };
                        let p = arena.var(self.input_atom(old_rank, old_color));
                        let dn = self.discard_node(i);
                        let dc = self.discard_color(l);
                        disjuncts.push(arena.and(vec![dn, dc, p]));
                    }
                }
                Ok(arena.or(disjuncts))
            }
            Variant::Frege => {
                // ∨_{T,j'} (∧_t RenumNode(T_t, S_t)) ∧ RenumColor(j', j) ∧
                // p[T, j'].
                let verts_in = Vertex::enumerate(n, self.params.k);
                let mut disjuncts = Vec::with_capacity(verts_in.len() * m as usize);
                for t_vert in &verts_in {
                    for jp in 1..=m {
                        let mut children: Vec<FormulaId> = t_vert
                            .elems()
                            .iter()
                            .zip(s.elems())
                            .map(|(&tv, &sv)| self.renum_node(tv, sv))
                            .collect();
                        children.push(self.renum_color(jp, j));
                        children.push(arena.var(self.input_atom(t_vert.rank(), jp)));
                        disjuncts.push(arena.and(children));
                    }
                }
                Ok(arena.or(disjuncts))
            }
        }
    }

    /// Materialize the whole p' family (memoized).
    pub fn build_pprime(&mut self, arena: &mut Arena) -> Result<(), TranslateError> {
        if self.pprime.is_some() {
            return Ok(());
        }
        let out = self.new_params();
        let mut all = Vec::with_capacity(self.verts_out.len());
        let verts_out = self.verts_out.clone();
        for s in &verts_out {
            let mut per_color = Vec::with_capacity(out.m as usize);
            for j in 1..=out.m {
                per_color.push(self.pprime_single(arena, s, j)?);
            }
            all.push(per_color);
        }
        self.pprime = Some(all);
        Ok(())
    }

    /// p'[S, j] by new-vertex rank; requires `build_pprime`.
    pub fn pprime(&self, rank: u64, j: u32) -> Option<FormulaId> {
        self.pprime.as_ref().map(|all| all[rank as usize][(j - 1) as usize])
    }

    /// Extension table defining this round's p' atoms; requires
    /// `build_pprime`.
    pub fn definitions(&self) -> Result<Definitions, TranslateError> {
        let all = self.pprime.as_ref().ok_or(TranslateError::PPrimeNotBuilt)?;
        let out = self.new_params();
        let mut defs = Definitions::new();
        for (rank, per_color) in all.iter().enumerate() {
            for j in 1..=out.m {
                defs.define(self.output_atom(rank as u64, j), per_color[(j - 1) as usize]);
            }
        }
        Ok(defs)
    }
}

fn check_color(l: u32, params: InstanceParams) -> Result<(), TranslateError> {
    if l < 1 || l > params.m {
        return Err(TranslateError::BadIndex { what: "color", value: l, max: params.m });
    }
    Ok(())
}

fn check_node(i: u32, params: InstanceParams) -> Result<(), TranslateError> {
    if i < 1 || i > params.n {
        return Err(TranslateError::BadIndex { what: "node", value: i, max: params.n });
    }
    Ok(())
}

/// Star(i, l) over the base p atoms.
pub fn star_formula(
    arena: &mut Arena,
    i: u32,
    l: u32,
    params: InstanceParams,
) -> Result<FormulaId, TranslateError> {
    check_node(i, params)?;
    check_color(l, params)?;
    let children: Vec<FormulaId> = Vertex::enumerate(params.n, params.k)
        .iter()
        .filter(|s| !s.contains(i))
        .map(|s| {
            let v = arena.var(Atom::P { rank: s.rank(), color: l });
            arena.not(v)
        })
        .collect();
    Ok(arena.and(children))
}

/// Star(l) = ∨_i Star(i, l).
pub fn star_class_formula(
    arena: &mut Arena,
    l: u32,
    params: InstanceParams,
) -> Result<FormulaId, TranslateError> {
    check_color(l, params)?;
    let per_node: Vec<FormulaId> = (1..=params.n)
        .map(|i| star_formula(arena, i, l, params))
        .collect::<Result<_, _>>()?;
    Ok(arena.or(per_node))
}

/// DiscardColor(l) in the requested variant.
pub fn discard_color_formula(
    arena: &mut Arena,
    l: u32,
    params: InstanceParams,
    variant: Variant,
) -> Result<FormulaId, TranslateError> {
    check_color(l, params)?;
    let round = Round::new(arena, params, variant, 0)?;
    Ok(round.discard_color(l))
}

/// DiscardNode(i) in the requested variant.
pub fn discard_node_formula(
    arena: &mut Arena,
    i: u32,
    params: InstanceParams,
    variant: Variant,
) -> Result<FormulaId, TranslateError> {
    check_node(i, params)?;
    let round = Round::new(arena, params, variant, 0)?;
    Ok(round.discard_node(i))
}

/// The (RenumNode, RenumColor) families, indexed [old − 1][new − 1].
pub fn renum_formulas(
    arena: &mut Arena,
    params: InstanceParams,
    variant: Variant,
) -> Result<(Vec<Vec<FormulaId>>, Vec<Vec<FormulaId>>), TranslateError> {
    let round = Round::new(arena, params, variant, 0)?;
    Ok((round.renum_node, round.renum_color))
}

/// p'[S, j] for a single new vertex and color.
pub fn pprime_formula(
    arena: &mut Arena,
    s: &Vertex,
    j: u32,
    params: InstanceParams,
    variant: Variant,
) -> Result<FormulaId, TranslateError> {
    let round = Round::new(arena, params, variant, 0)?;
    round.pprime_single(arena, s, j)
}
