//! Hash-consed propositional formula arena with exact symbol-count sizes.
//!
//! Formulas are interned as DAG nodes, but `size` is the symbol count of the
//! written-out formula tree (variable occurrences plus connectives), cached
//! per node so shared subformulas cost O(1) to account. Evaluation,
//! substitution, and unwound-size measurement resolve defined atoms (the
//! extension variables of later descent rounds) through a `Definitions`
//! table.

use std::collections::HashMap;
use std::fmt;

use super::TranslateError;

/// A structured propositional variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// p[rank, color]: the vertex with the given colex rank wears the color.
    P { rank: u64, color: u32 },
    /// p'[round][rank, color]: extension variable introduced by a descent
    /// round; `round` is 1 for the first round's outputs.
    PPrime { round: u32, rank: u64, color: u32 },
    /// t[pos, label]: the ball element at `pos` carries the signed label.
    T { pos: u32, label: i32 },
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::P { rank, color } => write!(f, "p[{rank},{color}]"),
            Atom::PPrime { round, rank, color } => write!(f, "p'{round}[{rank},{color}]"),
            Atom::T { pos, label } => write!(f, "t[{pos},{label}]"),
        }
    }
}

/// Index of an interned formula in its arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormulaId(u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Const(bool),
    Var(Atom),
    Not(FormulaId),
    And(Box<[FormulaId]>),
    Or(Box<[FormulaId]>),
    Implies(FormulaId, FormulaId),
}

/// Interning arena. Structurally identical formulas share one node, so the
/// quasi-polynomially large gadget trees stay materially small while their
/// exact tree sizes are still tracked.
pub struct Arena {
    nodes: Vec<Node>,
    sizes: Vec<u128>,
    interned: HashMap<Node, FormulaId>,
}

impl Default for Arena {
    fn default() -> Self {
        Self::new()
    }
}

impl Arena {
    pub fn new() -> Self {
        Arena { nodes: Vec::new(), sizes: Vec::new(), interned: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn intern(&mut self, node: Node) -> FormulaId {
        if let Some(&id) = self.interned.get(&node) {
            return id;
        }
        let size = self.node_size(&node);
        let id = FormulaId(u32::try_from(self.nodes.len()).expect("arena exceeds u32 indices"));
        self.nodes.push(node.clone());
        self.sizes.push(size);
        self.interned.insert(node, id);
        id
    }

    fn node_size(&self, node: &Node) -> u128 {
        let sum = |ids: &[FormulaId]| -> u128 {
            ids.iter().fold(0u128, |acc, id| {
                acc.checked_add(self.sizes[id.0 as usize]).expect("formula size overflows u128")
            })
        };
        match node {
            Node::Const(_) | Node::Var(_) => 1,
            Node::Not(x) => 1 + self.sizes[x.0 as usize],
            Node::And(cs) | Node::Or(cs) => sum(cs) + (cs.len() as u128 - 1),
            Node::Implies(a, b) => 1 + self.sizes[a.0 as usize] + self.sizes[b.0 as usize],
        }
    }

    pub fn constant(&mut self, value: bool) -> FormulaId {
        self.intern(Node::Const(value))
    }

    pub fn var(&mut self, atom: Atom) -> FormulaId {
        self.intern(Node::Var(atom))
    }

    pub fn not(&mut self, x: FormulaId) -> FormulaId {
        self.intern(Node::Not(x))
    }

    /// Conjunction. Empty lists give the neutral constant and singleton
    /// lists the child itself; no other simplification happens, so sizes
    /// track the displayed constructions exactly.
    pub fn and(&mut self, children: Vec<FormulaId>) -> FormulaId {
        match children.len() {
            0 => self.constant(true),
            1 => children[0],
            _ => self.intern(Node::And(children.into_boxed_slice())),
        }
    }

    /// Disjunction; duals of `and`.
    pub fn or(&mut self, children: Vec<FormulaId>) -> FormulaId {
        match children.len() {
            0 => self.constant(false),
            1 => children[0],
            _ => self.intern(Node::Or(children.into_boxed_slice())),
        }
    }

    pub fn implies(&mut self, a: FormulaId, b: FormulaId) -> FormulaId {
        self.intern(Node::Implies(a, b))
    }

    /// Exact symbol count (variable and constant occurrences plus
    /// connectives) of the formula written out as a tree.
    pub fn size(&self, id: FormulaId) -> u128 {
        self.sizes[id.0 as usize]
    }

    /// The constant's value if the node is a constant.
    pub fn const_value(&self, id: FormulaId) -> Option<bool> {
        match self.nodes[id.0 as usize] {
            Node::Const(b) => Some(b),
            _ => None,
        }
    }

    /// Independent size computation by walking the tree (exponential sharing
    /// handled by memoizing subtree sizes); used to cross-check the cached
    /// accounting.
    pub fn size_by_walk(&self, id: FormulaId) -> u128 {
        fn walk(arena: &Arena, id: FormulaId, memo: &mut HashMap<FormulaId, u128>) -> u128 {
            if let Some(&s) = memo.get(&id) {
                return s;
            }
            let s = match &arena.nodes[id.0 as usize] {
                Node::Const(_) | Node::Var(_) => 1,
                Node::Not(x) => 1 + walk(arena, *x, memo),
                Node::And(cs) | Node::Or(cs) => {
                    let mut acc = cs.len() as u128 - 1;
                    for c in cs.iter() {
                        acc += walk(arena, *c, memo);
                    }
                    acc
                }
                Node::Implies(a, b) => 1 + walk(arena, *a, memo) + walk(arena, *b, memo),
            };
            memo.insert(id, s);
            s
        }
        walk(self, id, &mut HashMap::new())
    }

    /// Evaluate under a total assignment, resolving defined atoms through
    /// `defs`. Errors if an undefined atom is missing from the assignment.
    pub fn eval(
        &self,
        id: FormulaId,
        asg: &Assignment,
        defs: &Definitions,
    ) -> Result<bool, TranslateError> {
        let mut memo: HashMap<FormulaId, bool> = HashMap::new();
        self.eval_memo(id, asg, defs, &mut memo)
    }

    fn eval_memo(
        &self,
        id: FormulaId,
        asg: &Assignment,
        defs: &Definitions,
        memo: &mut HashMap<FormulaId, bool>,
    ) -> Result<bool, TranslateError> {
        if let Some(&v) = memo.get(&id) {
            return Ok(v);
        }
        let v = match &self.nodes[id.0 as usize] {
            Node::Const(b) => *b,
            Node::Var(atom) => match defs.get(*atom) {
                Some(body) => self.eval_memo(body, asg, defs, memo)?,
                None => asg
                    .get(*atom)
                    .ok_or_else(|| TranslateError::UnassignedAtom(atom.to_string()))?,
            },
            Node::Not(x) => !self.eval_memo(*x, asg, defs, memo)?,
            Node::And(cs) => {
                let mut acc = true;
                for c in cs.clone().iter() {
                    acc &= self.eval_memo(*c, asg, defs, memo)?;
                }
                acc
            }
            Node::Or(cs) => {
                let mut acc = false;
                for c in cs.clone().iter() {
                    acc |= self.eval_memo(*c, asg, defs, memo)?;
                }
                acc
            }
            Node::Implies(a, b) => {
                !self.eval_memo(*a, asg, defs, memo)? || self.eval_memo(*b, asg, defs, memo)?
            }
        };
        memo.insert(id, v);
        Ok(v)
    }

    /// Symbol count of the formula after substituting every defined atom by
    /// its body, recursively. Measures the true unwound size of nested
    /// extension definitions without materializing them.
    pub fn unwound_size(&self, id: FormulaId, defs: &Definitions) -> u128 {
        let mut memo: HashMap<FormulaId, u128> = HashMap::new();
        self.unwound_memo(id, defs, &mut memo)
    }

    fn unwound_memo(
        &self,
        id: FormulaId,
        defs: &Definitions,
        memo: &mut HashMap<FormulaId, u128>,
    ) -> u128 {
        if let Some(&s) = memo.get(&id) {
            return s;
        }
        let s = match &self.nodes[id.0 as usize] {
            Node::Const(_) => 1,
            Node::Var(atom) => match defs.get(*atom) {
                Some(body) => self.unwound_memo(body, defs, memo),
                None => 1,
            },
            Node::Not(x) => 1 + self.unwound_memo(*x, defs, memo),
            Node::And(cs) | Node::Or(cs) => {
                let cs = cs.clone();
                let mut acc = cs.len() as u128 - 1;
                for c in cs.iter() {
                    acc = acc
                        .checked_add(self.unwound_memo(*c, defs, memo))
                        .expect("unwound size overflows u128");
                }
                acc
            }
            Node::Implies(a, b) => {
                let (a, b) = (*a, *b);
                1 + self.unwound_memo(a, defs, memo) + self.unwound_memo(b, defs, memo)
            }
        };
        memo.insert(id, s);
        s
    }

    /// Materialize the substitution of defined atoms by their bodies.
    pub fn substitute(&mut self, id: FormulaId, defs: &Definitions) -> FormulaId {
        let mut memo: HashMap<FormulaId, FormulaId> = HashMap::new();
        self.substitute_memo(id, defs, &mut memo)
    }

    fn substitute_memo(
        &mut self,
        id: FormulaId,
        defs: &Definitions,
        memo: &mut HashMap<FormulaId, FormulaId>,
    ) -> FormulaId {
        if let Some(&out) = memo.get(&id) {
            return out;
        }
        let out = match self.nodes[id.0 as usize].clone() {
            Node::Const(_) => id,
            Node::Var(atom) => match defs.get(atom) {
                Some(body) => self.substitute_memo(body, defs, memo),
                None => id,
            },
            Node::Not(x) => {
                let x = self.substitute_memo(x, defs, memo);
                self.not(x)
            }
            Node::And(cs) => {
                let cs = cs.iter().map(|c| self.substitute_memo(*c, defs, memo)).collect();
                self.and(cs)
            }
            Node::Or(cs) => {
                let cs = cs.iter().map(|c| self.substitute_memo(*c, defs, memo)).collect();
                self.or(cs)
            }
            Node::Implies(a, b) => {
                let a = self.substitute_memo(a, defs, memo);
                let b = self.substitute_memo(b, defs, memo);
                self.implies(a, b)
            }
        };
        memo.insert(id, out);
        out
    }

    /// S-expression rendering for debugging; shared nodes print in full.
    pub fn sexpr(&self, id: FormulaId) -> String {
        let mut out = String::new();
        self.sexpr_into(id, &mut out);
        out
    }

    fn sexpr_into(&self, id: FormulaId, out: &mut String) {
        match &self.nodes[id.0 as usize] {
            Node::Const(b) => out.push_str(if *b { "true" } else { "false" }),
            Node::Var(atom) => out.push_str(&atom.to_string()),
            Node::Not(x) => {
                out.push_str("(not ");
                self.sexpr_into(*x, out);
                out.push(')');
            }
            Node::And(cs) => {
                out.push_str("(and");
                for c in cs.iter() {
                    out.push(' ');
                    self.sexpr_into(*c, out);
                }
                out.push(')');
            }
            Node::Or(cs) => {
                out.push_str("(or");
                for c in cs.iter() {
                    out.push(' ');
                    self.sexpr_into(*c, out);
                }
                out.push(')');
            }
            Node::Implies(a, b) => {
                out.push_str("(implies ");
                self.sexpr_into(*a, out);
                out.push(' ');
                self.sexpr_into(*b, out);
                out.push(')');
            }
        }
    }

    /// Atoms occurring in the formula (without resolving definitions),
    /// deduplicated, in first-occurrence order.
    pub fn atoms(&self, id: FormulaId) -> Vec<Atom> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut visited = std::collections::HashSet::new();
        let mut stack = vec![id];
        // Depth-first but order only matters for determinism, not semantics.
        while let Some(cur) = stack.pop() {
            if !visited.insert(cur) {
                continue;
            }
            match &self.nodes[cur.0 as usize] {
                Node::Const(_) => {}
                Node::Var(atom) => {
                    if seen.insert(*atom) {
                        out.push(*atom);
                    }
                }
                Node::Not(x) => stack.push(*x),
                Node::And(cs) | Node::Or(cs) => stack.extend(cs.iter().rev().copied()),
                Node::Implies(a, b) => {
                    stack.push(*b);
                    stack.push(*a);
                }
            }
        }
        out.sort();
        out
    }
}

/// Total truth assignment over structured atoms.
#[derive(Debug, Clone, Default)]
pub struct Assignment {
    map: HashMap<Atom, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, atom: Atom, value: bool) {
        self.map.insert(atom, value);
    }

    pub fn get(&self, atom: Atom) -> Option<bool> {
        self.map.get(&atom).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Extension-variable definition table: atom -> body.
#[derive(Debug, Clone, Default)]
pub struct Definitions {
    map: HashMap<Atom, FormulaId>,
}

impl Definitions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn define(&mut self, atom: Atom, body: FormulaId) {
        self.map.insert(atom, body);
    }

    pub fn get(&self, atom: Atom) -> Option<FormulaId> {
        self.map.get(&atom).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Merge another table into this one (later definitions win on clash).
    pub fn absorb(&mut self, other: &Definitions) {
        for (atom, id) in &other.map {
            self.map.insert(*atom, *id);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(rank: u64, color: u32) -> Atom {
        Atom::P { rank, color }
    }

    #[test]
    fn sizes_count_symbols_exactly() {
        let mut a = Arena::new();
        let x = a.var(p(0, 1));
        let y = a.var(p(1, 1));
        let z = a.var(p(2, 1));
        // x ∧ y ∧ z: three occurrences + two connectives.
        let conj = a.and(vec![x, y, z]);
        assert_eq!(a.size(conj), 5);
        // ¬(x ∧ y ∧ z) adds one symbol.
        let neg = a.not(conj);
        assert_eq!(a.size(neg), 6);
        // (x ∨ y) → ¬conj: 3 + 1 + 6.
        let disj = a.or(vec![x, y]);
        let imp = a.implies(disj, neg);
        assert_eq!(a.size(imp), 10);
        assert_eq!(a.size_by_walk(imp), 10);
    }

    #[test]
    fn empty_and_singleton_lists() {
        let mut a = Arena::new();
        let t = a.and(vec![]);
        assert_eq!(a.const_value(t), Some(true));
        let f = a.or(vec![]);
        assert_eq!(a.const_value(f), Some(false));
        let x = a.var(p(0, 1));
        assert_eq!(a.and(vec![x]), x);
        assert_eq!(a.or(vec![x]), x);
    }

    #[test]
    fn hash_consing_shares_structure() {
        let mut a = Arena::new();
        let x = a.var(p(0, 1));
        let y = a.var(p(1, 2));
        let one = a.and(vec![x, y]);
        let two = a.and(vec![x, y]);
        assert_eq!(one, two);
        let before = a.len();
        let _ = a.and(vec![x, y]);
        assert_eq!(a.len(), before);
    }

    #[test]
    fn shared_subformulas_count_per_occurrence() {
        let mut a = Arena::new();
        let x = a.var(p(0, 1));
        let y = a.var(p(1, 1));
        let inner = a.and(vec![x, y]); // size 3
        // inner ∨ inner: tree writes inner twice.
        let outer = a.or(vec![inner, inner]);
        assert_eq!(a.size(outer), 7);
        assert_eq!(a.size_by_walk(outer), 7);
    }

    #[test]
    fn eval_basic_connectives() {
        let mut a = Arena::new();
        let x = a.var(p(0, 1));
        let y = a.var(p(1, 1));
        let mut asg = Assignment::new();
        asg.set(p(0, 1), true);
        asg.set(p(1, 1), false);
        let defs = Definitions::new();
        let conj = a.and(vec![x, y]);
        let disj = a.or(vec![x, y]);
        let imp = a.implies(x, y);
        let neg = a.not(y);
        let tru = a.constant(true);
        assert!(!a.eval(conj, &asg, &defs).unwrap());
        assert!(a.eval(disj, &asg, &defs).unwrap());
        assert!(!a.eval(imp, &asg, &defs).unwrap());
        assert!(a.eval(neg, &asg, &defs).unwrap());
        assert!(a.eval(tru, &asg, &defs).unwrap());
    }

    #[test]
    fn eval_missing_atom_errors() {
        let mut a = Arena::new();
        let x = a.var(p(9, 9));
        let err = a.eval(x, &Assignment::new(), &Definitions::new()).unwrap_err();
        assert!(matches!(err, TranslateError::UnassignedAtom(_)));
    }

    #[test]
    fn definitions_resolve_through_eval_and_sizes() {
        let mut a = Arena::new();
        let x = a.var(p(0, 1));
        let y = a.var(p(1, 1));
        let body = a.and(vec![x, y]); // size 3
        let ext = Atom::PPrime { round: 1, rank: 0, color: 1 };
        let ext_var = a.var(ext);
        let mut defs = Definitions::new();
        defs.define(ext, body);

        let formula = a.or(vec![ext_var, x]); // shallow size 3
        assert_eq!(a.size(formula), 3);
        assert_eq!(a.unwound_size(formula, &defs), 5); // (x∧y) ∨ x

        let mut asg = Assignment::new();
        asg.set(p(0, 1), true);
        asg.set(p(1, 1), true);
        assert!(a.eval(ext_var, &asg, &defs).unwrap());

        let subst = a.substitute(formula, &defs);
        assert_eq!(a.size(subst), 5);
        assert_eq!(a.size(subst), a.unwound_size(formula, &defs));
        // After substitution no defined atoms remain.
        assert!(a.atoms(subst).iter().all(|at| defs.get(*at).is_none()));
    }

    #[test]
    fn nested_definitions_unwind_recursively() {
        let mut a = Arena::new();
        let x = a.var(p(0, 1));
        let e1 = Atom::PPrime { round: 1, rank: 0, color: 1 };
        let e2 = Atom::PPrime { round: 2, rank: 0, color: 1 };
        let e1v = a.var(e1);
        let body1 = a.and(vec![x, x]); // size 3
        let body2 = a.or(vec![e1v, e1v]); // shallow 3, unwound 7
        let mut defs = Definitions::new();
        defs.define(e1, body1);
        defs.define(e2, body2);
        let e2v = a.var(e2);
        assert_eq!(a.unwound_size(e2v, &defs), 7);
    }

    #[test]
    fn sexpr_renders() {
        let mut a = Arena::new();
        let x = a.var(p(0, 1));
        let y = a.var(Atom::T { pos: 3, label: -4 });
        let nx = a.not(x);
        let f = a.and(vec![nx, y]);
        assert_eq!(a.sexpr(f), "(and (not p[0,1]) t[3,-4])");
    }

    #[test]
    fn atoms_are_collected_sorted_dedup() {
        let mut a = Arena::new();
        let x = a.var(p(2, 1));
        let y = a.var(p(0, 3));
        let f0 = a.and(vec![x, y]);
        let f = a.or(vec![f0, x]);
        assert_eq!(a.atoms(f), vec![p(0, 3), p(2, 1)]);
    }
}
