//! Propositional encodings of the truncated antipodal-map statement: a
//! formula expressing "every antipodal labeling has a k-complementary
//! related pair", and a CNF whose unsatisfiability certifies it.
//!
//! Variable scheme (truncated ball, elements in enumeration order, labels
//! `+2k, -2k, +(2k+1), ... , +n, -n`):
//!   t[pos, label]  ->  pos * L + idx(label) + 1
//!   q[orbit, label] -> P + orbit * L + idx(label) + 1
//! with L the label count, P the primary-variable count, and q the Tseitin
//! variable for "the orbit representative gets `label` and its swap the
//! negation".

use crate::tucker::{enumerate_ball, related_pairs, AntipodalMap, Ball, Flavor, TuckerError};

use super::cnf::Cnf;
use super::formula::{Arena, Assignment, Atom, FormulaId};
use super::TranslateError;

/// Admissible labels in index order: magnitudes 2k..=n, positive first.
pub fn label_list(n: u32, k: u32) -> Vec<i32> {
    (2 * k..=n).flat_map(|mag| [mag as i32, -(mag as i32)]).collect()
}

fn label_index(k: u32, label: i32) -> u32 {
    2 * (label.unsigned_abs() - 2 * k) + u32::from(label < 0)
}

/// DIMACS id of the primary variable t[pos, label].
pub fn tucker_var_id(n: u32, k: u32, pos: u32, label: i32) -> i32 {
    let l = 2 * (n - 2 * k + 1);
    (pos * l + label_index(k, label) + 1) as i32
}

fn aux_var_id(n: u32, k: u32, primary_count: u32, orbit: u32, label: i32) -> i32 {
    let l = 2 * (n - 2 * k + 1);
    (primary_count + orbit * l + label_index(k, label) + 1) as i32
}

fn swap_positions(ball: &Ball) -> Vec<u32> {
    ball.elements()
        .iter()
        .map(|e| ball.position(&e.b, &e.a).expect("swap stays in the ball"))
        .collect()
}

/// The statement as one formula: antipodality implies a complementary pair.
pub fn tucker_formula(arena: &mut Arena, n: u32, k: u32) -> Result<FormulaId, TranslateError> {
    let ball = enumerate_ball(n, k, Flavor::Truncated)?;
    let labels = label_list(n, k);
    let swaps = swap_positions(&ball);

    let mut per_element = Vec::with_capacity(ball.len());
    for pos in 0..ball.len() as u32 {
        let disjuncts: Vec<FormulaId> = labels
            .iter()
            .map(|&i| {
                let here = arena.var(Atom::T { pos, label: i });
                let there = arena.var(Atom::T { pos: swaps[pos as usize], label: -i });
                arena.and(vec![here, there])
            })
            .collect();
        per_element.push(arena.or(disjuncts));
    }
    let antipodal = arena.and(per_element);

    let mut complementary = Vec::new();
    for (x, y) in related_pairs(&ball)? {
        for &i in &labels {
            let px = arena.var(Atom::T { pos: x, label: i });
            let py = arena.var(Atom::T { pos: y, label: -i });
            complementary.push(arena.and(vec![px, py]));
        }
    }
    let complementary = arena.or(complementary);
    Ok(arena.implies(antipodal, complementary))
}

/// CNF of "some antipodal labeling avoids every complementary pair";
/// unsatisfiability confirms the statement. Antipodality is clausified with
/// one Tseitin variable per orbit and label.
pub fn tucker_cnf(n: u32, k: u32) -> Result<Cnf, TranslateError> {
    let ball = enumerate_ball(n, k, Flavor::Truncated)?;
    let labels = label_list(n, k);
    let l = labels.len() as u32;
    let primary_count = ball.len() as u32 * l;
    let aux_count = ball.orbit_count() as u32 * l;
    let swaps = swap_positions(&ball);

    let mut cnf = Cnf::new(primary_count + aux_count);
    cnf.comments.push(format!("truncated tucker instance n={n} k={k}"));
    cnf.comments.push(format!(
        "labels in index order: magnitudes {}..={n}, positive before negative",
        2 * k
    ));
    cnf.comments.push(format!("var id of t[pos,label] = pos*{l} + idx(label) + 1"));
    cnf.comments.push(format!(
        "var id of q[orbit,label] = {primary_count} + orbit*{l} + idx(label) + 1"
    ));
    for pos in 0..ball.len() as u32 {
        for &i in &labels {
            cnf.names.push(format!("t[{pos},{i}]"));
        }
    }
    for orbit in 0..ball.orbit_count() as u32 {
        for &i in &labels {
            cnf.names.push(format!("q[{orbit},{i}]"));
        }
    }

    // q[orbit, i] <-> t[rep, i] ∧ t[swap(rep), -i].
    let rep_pos: Vec<u32> = (0..ball.orbit_count() as u32)
        .map(|o| {
            let r = ball.rep(o);
            ball.position(&r.a, &r.b).expect("representative is in the ball")
        })
        .collect();
    for orbit in 0..ball.orbit_count() as u32 {
        let r = rep_pos[orbit as usize];
        for &i in &labels {
            let q = aux_var_id(n, k, primary_count, orbit, i);
            let p1 = tucker_var_id(n, k, r, i);
            let p2 = tucker_var_id(n, k, swaps[r as usize], -i);
            cnf.push(vec![-q, p1]);
            cnf.push(vec![-q, p2]);
            cnf.push(vec![-p1, -p2, q]);
        }
    }

    // Per element: some label is assigned antipodally. The element's
    // conjuncts are exactly its orbit's q variables (negated labels when the
    // element is the non-canonical member).
    for pos in 0..ball.len() as u32 {
        let orbit = ball.orbit_of_position(pos);
        let canonical = rep_pos[orbit as usize] == pos;
        let clause: Vec<i32> = labels
            .iter()
            .map(|&i| aux_var_id(n, k, primary_count, orbit, if canonical { i } else { -i }))
            .collect();
        cnf.push(clause);
    }

    // No related pair may take complementary labels.
    for (x, y) in related_pairs(&ball)? {
        for &i in &labels {
            cnf.push(vec![-tucker_var_id(n, k, x, i), -tucker_var_id(n, k, y, -i)]);
        }
    }

    cnf.validate()?;
    Ok(cnf)
}

/// Truth assignment of the t atoms describing a concrete map.
pub fn assignment_from_map(
    ball: &Ball,
    map: &AntipodalMap,
) -> Result<Assignment, TranslateError> {
    if ball.flavor() != Flavor::Truncated {
        return Err(TuckerError::FlavorMismatch {
            expected: Flavor::Truncated,
            got: ball.flavor(),
        }
        .into());
    }
    let labels = label_list(ball.n(), ball.k());
    let mut asg = Assignment::new();
    for pos in 0..ball.len() as u32 {
        let actual = map.label_at(ball, pos);
        for &i in &labels {
            asg.set(Atom::T { pos, label: i }, i == actual);
        }
    }
    Ok(asg)
}
