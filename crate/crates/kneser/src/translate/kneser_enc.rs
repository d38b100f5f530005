//! Propositional translations of the Kneser instance: the implication-form
//! formula, the CNF whose models are proper colorings, model decoding, and
//! the exact closed-form symbol count.

use num::BigUint;

use crate::coloring::Coloring;
use crate::combinat::{binom, kneser_edges, InstanceParams};

use super::cnf::Cnf;
use super::formula::{Arena, Assignment, Atom, FormulaId};
use super::TranslateError;

/// The formula: (every vertex wears some color) implies (some disjoint pair
/// shares a color). With m = n−2k+1 colors this is a tautology.
pub fn kneser_formula(arena: &mut Arena, n: u32, k: u32) -> Result<FormulaId, TranslateError> {
    let params = InstanceParams::standard(n, k)?;
    kneser_formula_with(arena, params)
}

/// Same construction over an arbitrary color count.
pub fn kneser_formula_with(
    arena: &mut Arena,
    params: InstanceParams,
) -> Result<FormulaId, TranslateError> {
    let (vertices, edges) = kneser_edges(params.n, params.k);
    let m = params.m;
    let mut vertex_conjuncts = Vec::with_capacity(vertices.len());
    for v in &vertices {
        let rank = v.rank();
        let per_color: Vec<FormulaId> =
            (1..=m).map(|i| arena.var(Atom::P { rank, color: i })).collect();
        let disj = arena.or(per_color);
        vertex_conjuncts.push(disj);
    }
    let antecedent = arena.and(vertex_conjuncts);
    let mut monochrome = Vec::with_capacity(edges.len() * m as usize);
    for &(r, s) in &edges {
        for i in 1..=m {
            let pa = arena.var(Atom::P { rank: r, color: i });
            let pb = arena.var(Atom::P { rank: s, color: i });
            monochrome.push(arena.and(vec![pa, pb]));
        }
    }
    let consequent = arena.or(monochrome);
    Ok(arena.implies(antecedent, consequent))
}

/// Exact symbol count of `kneser_formula(n, k)`: 2·V·m + 4·E·m − 1 with
/// V = C(n,k), E = C(n,k)·C(n−k,k)/2, m = n−2k+1.
pub fn kneser_formula_size(n: u32, k: u32) -> Result<BigUint, TranslateError> {
    let params = InstanceParams::standard(n, k)?;
    Ok(kneser_formula_size_with(params))
}

/// Closed-form symbol count for an arbitrary color count.
pub fn kneser_formula_size_with(params: InstanceParams) -> BigUint {
    let v = binom(params.n as u64, params.k as u64);
    let e = &v * binom((params.n - params.k) as u64, params.k as u64) / 2u32;
    let m = BigUint::from(params.m);
    let two = BigUint::from(2u32);
    let four = BigUint::from(4u32);
    two * &v * &m + four * &e * &m - BigUint::from(1u32)
}

/// DIMACS id of p[S, i]: rank(S)·m + i (ranks 0-based, colors 1-based), so
/// ids are dense in [1, C(n,k)·m] and files are bit-reproducible.
pub fn kneser_var_id(params: InstanceParams, rank: u64, color: u32) -> i32 {
    i32::try_from(rank * params.m as u64 + color as u64).expect("variable id fits i32")
}

/// CNF whose satisfying assignments are the proper m-colorings: one
/// at-least-one-color clause per vertex, one conflict clause per disjoint
/// pair and color. Unsatisfiable exactly when no proper coloring exists.
pub fn kneser_cnf(n: u32, k: u32) -> Result<Cnf, TranslateError> {
    let params = InstanceParams::standard(n, k)?;
    kneser_cnf_with(params)
}

/// Same clauses over an arbitrary color count.
pub fn kneser_cnf_with(params: InstanceParams) -> Result<Cnf, TranslateError> {
    let (vertices, edges) = kneser_edges(params.n, params.k);
    let m = params.m;
    let num_vars = u32::try_from(vertices.len() as u64 * m as u64)
        .map_err(|_| TranslateError::TooManyVariables)?;
    let mut cnf = Cnf::new(num_vars);
    cnf.comments.push(format!(
        "kneser coloring instance n={} k={} m={}",
        params.n, params.k, m
    ));
    cnf.comments.push("var id of p[rank,color] = rank*m + color".to_string());
    for v in &vertices {
        let rank = v.rank();
        for i in 1..=m {
            cnf.names.push(Atom::P { rank, color: i }.to_string());
        }
        cnf.push((1..=m).map(|i| kneser_var_id(params, rank, i)).collect());
    }
    for &(r, s) in &edges {
        for i in 1..=m {
            cnf.push(vec![-kneser_var_id(params, r, i), -kneser_var_id(params, s, i)]);
        }
    }
    cnf.validate()?;
    Ok(cnf)
}

/// Decode a model of `kneser_cnf_with(params)` into a coloring, picking the
/// least true color per vertex. `model[v]` is the value of variable v+1.
pub fn decode_coloring(
    params: InstanceParams,
    model: &[bool],
) -> Result<Coloring, TranslateError> {
    let vcount = params.vertex_count();
    let expected = vcount * params.m as u64;
    if model.len() as u64 != expected {
        return Err(TranslateError::ModelLength { expected, got: model.len() as u64 });
    }
    let mut colors = Vec::with_capacity(vcount as usize);
    for rank in 0..vcount {
        let chosen = (1..=params.m)
            .find(|&i| model[(rank * params.m as u64 + i as u64 - 1) as usize])
            .ok_or(TranslateError::UncoloredVertex { rank })?;
        colors.push(chosen);
    }
    Ok(Coloring::new(params, colors)?)
}

/// Total assignment of the p[S, i] variables induced by a coloring.
pub fn assignment_from_coloring(c: &Coloring) -> Assignment {
    let params = c.params();
    let mut asg = Assignment::new();
    for (rank, &color) in c.colors().iter().enumerate() {
        for i in 1..=params.m {
            asg.set(Atom::P { rank: rank as u64, color: i }, color == i);
        }
    }
    asg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{c1, Validation};
    use crate::translate::formula::Definitions;

    #[test]
    fn formula_size_small_cases_match_closed_form() {
        // (5,2): V=10, E=15, m=2 gives 2·10·2 + 4·15·2 − 1 = 159.
        let mut a = Arena::new();
        let f = kneser_formula(&mut a, 5, 2).unwrap();
        assert_eq!(a.size(f), 159);
        assert_eq!(kneser_formula_size(5, 2).unwrap(), BigUint::from(159u32));
        assert_eq!(a.size_by_walk(f), 159);
    }

    #[test]
    fn formula_variable_count() {
        // (5,2): 10 vertices × 2 colors.
        let mut a = Arena::new();
        let f = kneser_formula(&mut a, 5, 2).unwrap();
        assert_eq!(a.atoms(f).len(), 20);
    }

    #[test]
    fn antecedent_has_one_conjunct_per_vertex_at_tight_n() {
        // At n = 2k the antecedent conjoins over all C(2k,k) vertices; the
        // formula mentions exactly C(2k,k)·m variables with m = 1.
        let mut a = Arena::new();
        let f = kneser_formula(&mut a, 4, 2).unwrap();
        assert_eq!(a.atoms(f).len(), 6);
        let f6 = kneser_formula(&mut a, 6, 3).unwrap();
        assert_eq!(a.atoms(f6).len(), 20);
    }

    #[test]
    fn tautology_at_4_2_by_exhaustive_sweep() {
        // m = 1, 6 variables: all 64 assignments satisfy the implication.
        let mut a = Arena::new();
        let f = kneser_formula(&mut a, 4, 2).unwrap();
        let atoms = a.atoms(f);
        assert_eq!(atoms.len(), 6);
        let defs = Definitions::new();
        for bits in 0u32..64 {
            let mut asg = Assignment::new();
            for (i, at) in atoms.iter().enumerate() {
                asg.set(*at, bits >> i & 1 == 1);
            }
            assert!(a.eval(f, &asg, &defs).unwrap(), "falsified at bits={bits:b}");
        }
    }

    #[test]
    fn proper_coloring_falsifies_relaxed_instance() {
        // With the chromatic number of colors the implication is falsifiable:
        // a proper coloring makes the antecedent true and the consequent
        // false.
        let mut a = Arena::new();
        let params = InstanceParams::chromatic(5, 2).unwrap();
        let f = kneser_formula_with(&mut a, params).unwrap();
        let coloring = c1(5, 2).unwrap();
        let asg = assignment_from_coloring(&coloring);
        assert!(!a.eval(f, &asg, &Definitions::new()).unwrap());
    }

    #[test]
    fn cnf_counts_and_header() {
        let cnf = kneser_cnf(5, 2).unwrap();
        assert_eq!(cnf.num_vars, 20);
        assert_eq!(cnf.clauses.len(), 40);
        assert!(cnf.to_dimacs().contains("p cnf 20 40"));
        let cnf42 = kneser_cnf(4, 2).unwrap();
        assert_eq!(cnf42.num_vars, 6);
        assert_eq!(cnf42.clauses.len(), 9);
    }

    #[test]
    fn variable_ids_are_rank_major() {
        let params = InstanceParams::standard(5, 2).unwrap();
        assert_eq!(kneser_var_id(params, 0, 1), 1);
        assert_eq!(kneser_var_id(params, 0, 2), 2);
        assert_eq!(kneser_var_id(params, 1, 1), 3);
        assert_eq!(kneser_var_id(params, 9, 2), 20);
        let cnf = kneser_cnf(5, 2).unwrap();
        assert_eq!(cnf.names[0], "p[0,1]");
        assert_eq!(cnf.names[2], "p[1,1]");
    }

    #[test]
    fn coloring_satisfies_cnf_and_decodes_back() {
        // Encode c1 on the chromatic instance, check every clause, decode.
        let params = InstanceParams::chromatic(6, 2).unwrap();
        let coloring = c1(6, 2).unwrap();
        let cnf = kneser_cnf_with(params).unwrap();
        let mut model = vec![false; cnf.num_vars as usize];
        for (rank, &color) in coloring.colors().iter().enumerate() {
            model[(rank as u64 * params.m as u64 + color as u64 - 1) as usize] = true;
        }
        for clause in &cnf.clauses {
            assert!(clause.iter().any(|&lit| {
                let v = model[(lit.unsigned_abs() - 1) as usize];
                if lit > 0 {
                    v
                } else {
                    !v
                }
            }));
        }
        let decoded = decode_coloring(params, &model).unwrap();
        assert_eq!(decoded.colors(), coloring.colors());
        assert_eq!(decoded.validate(), Validation::Proper);
    }

    #[test]
    fn decode_rejects_wrong_length_and_uncolored_vertex() {
        let params = InstanceParams::standard(4, 2).unwrap();
        assert!(matches!(
            decode_coloring(params, &[true; 3]),
            Err(TranslateError::ModelLength { expected: 6, got: 3 })
        ));
        assert!(matches!(
            decode_coloring(params, &[false; 6]),
            Err(TranslateError::UncoloredVertex { rank: 0 })
        ));
    }

    #[test]
    fn closed_form_matches_measurement_for_small_sweep() {
        for (n, k) in [(4, 2), (5, 2), (6, 2), (7, 2), (6, 3), (7, 3)] {
            let mut a = Arena::new();
            let f = kneser_formula(&mut a, n, k).unwrap();
            assert_eq!(
                BigUint::from(a.size(f)),
                kneser_formula_size(n, k).unwrap(),
                "size mismatch at ({n},{k})"
            );
        }
    }
}
