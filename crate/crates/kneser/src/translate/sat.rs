//! A small deterministic DPLL search over CNF instances: unit propagation
//! to fixpoint, then branching on the lowest-numbered unassigned variable
//! (false first). Adequate for the instance sizes this crate generates; no
//! learning, no heuristics, byte-stable results.

use super::cnf::Cnf;
use super::TranslateError;

/// Result of the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatOutcome {
    /// A model, indexed by variable (id 1 at index 0). Variables the search
    /// never constrained are false.
    Sat(Vec<bool>),
    Unsat,
}

impl SatOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatOutcome::Sat(_))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ClauseState {
    Satisfied,
    Conflict,
    Unit(i32),
    Open,
}

fn clause_state(clause: &[i32], asg: &[Option<bool>]) -> ClauseState {
    let mut unassigned = None;
    let mut open = 0usize;
    for &lit in clause {
        match asg[(lit.unsigned_abs() - 1) as usize] {
            Some(v) if v == (lit > 0) => return ClauseState::Satisfied,
            Some(_) => {}
            None => {
                open += 1;
                if unassigned.is_none() {
                    unassigned = Some(lit);
                }
            }
        }
    }
    match open {
        0 => ClauseState::Conflict,
        1 => ClauseState::Unit(unassigned.expect("counted one open literal")),
        _ => ClauseState::Open,
    }
}

/// Propagate units until fixpoint. Returns false on conflict; records every
/// assignment it makes in `trail`.
fn propagate(clauses: &[Vec<i32>], asg: &mut [Option<bool>], trail: &mut Vec<u32>) -> bool {
    loop {
        let mut changed = false;
        for clause in clauses {
            match clause_state(clause, asg) {
                ClauseState::Conflict => return false,
                ClauseState::Unit(lit) => {
                    let var = lit.unsigned_abs() - 1;
                    asg[var as usize] = Some(lit > 0);
                    trail.push(var);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search(clauses: &[Vec<i32>], asg: &mut [Option<bool>]) -> bool {
    let mut trail = Vec::new();
    if !propagate(clauses, asg, &mut trail) {
        for var in trail {
            asg[var as usize] = None;
        }
        return false;
    }
    let Some(var) = asg.iter().position(|v| v.is_none()) else {
        return true;
    };
    for value in [false, true] {
        asg[var] = Some(value);
        if search(clauses, asg) {
            return true;
        }
        asg[var] = None;
    }
    for var in trail {
        asg[var as usize] = None;
    }
    false
}

/// Decide the instance. The input is validated first, so ill-formed clauses
/// surface as errors rather than panics.
pub fn solve(cnf: &Cnf) -> Result<SatOutcome, TranslateError> {
    cnf.validate()?;
    let mut asg: Vec<Option<bool>> = vec![None; cnf.num_vars as usize];
    if !search(&cnf.clauses, &mut asg) {
        return Ok(SatOutcome::Unsat);
    }
    let model: Vec<bool> = asg.iter().map(|v| v.unwrap_or(false)).collect();
    debug_assert!(cnf.clauses.iter().all(|c| c.iter().any(|&lit| {
        model[(lit.unsigned_abs() - 1) as usize] == (lit > 0)
    })));
    Ok(SatOutcome::Sat(model))
}
