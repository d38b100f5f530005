//! Exhaustive search for proper m-colorings of small Kneser graphs.
//!
//! The search assigns colors vertex by vertex in colex order, propagating
//! conflicts so each vertex only tries colors no assigned disjoint vertex
//! wears. It is complete: an `Unsatisfiable` outcome means no proper
//! m-coloring exists. Kneser graphs are regular, so the fail-first
//! "highest remaining degree" ordering heuristic degenerates to colex order.

use crate::coloring::Coloring;
use crate::combinat::{kneser_edges, CoreError, InstanceParams};
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BasecaseError {
    #[error("search requires n >= 2k >= 2 and m >= 1, got n={n}, k={k}, m={m}")]
    BadParams { n: u32, k: u32, m: u32 },
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Limits on one search: node visits and wall time, whichever trips first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 100_000_000, max_time: Duration::from_secs(300) }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    pub budget: SearchBudget,
    /// Fix vertex {1..k} to color 1 and admit color c+1 only once c is in
    /// use. Sound because properness is invariant under color permutation.
    pub symmetry_breaking: bool,
}

impl SearchOptions {
    pub fn new() -> Self {
        SearchOptions { budget: SearchBudget::default(), symmetry_breaking: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Unsatisfiable,
    Found(Coloring),
    BudgetExceeded,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub outcome: Outcome,
    /// Color placements attempted.
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

struct Searcher {
    m: u32,
    /// adj_later[v] = disjoint vertices with index > v.
    adj_later: Vec<Vec<u32>>,
    /// forbid[v][c-1] = how many assigned disjoint vertices wear c.
    forbid: Vec<Vec<u32>>,
    assignment: Vec<u32>,
    symmetry: bool,
    nodes: u64,
    budget: SearchBudget,
    started: Instant,
    out_of_budget: bool,
}

impl Searcher {
    fn budget_ok(&mut self) -> bool {
        if self.out_of_budget {
            return false;
        }
        if self.nodes >= self.budget.max_nodes
            || (self.nodes % 8192 == 0 && self.started.elapsed() >= self.budget.max_time)
        {
            self.out_of_budget = true;
            return false;
        }
        true
    }

    /// true = full assignment reached; false = subtree exhausted or budget hit
    /// (distinguished by the out_of_budget flag).
    fn assign_from(&mut self, v: usize, max_used: u32) -> bool {
        if v == self.assignment.len() {
            return true;
        }
        let color_cap = if self.symmetry { self.m.min(max_used + 1) } else { self.m };
        for c in 1..=color_cap {
            if self.forbid[v][c as usize - 1] > 0 {
                continue;
            }
            self.nodes += 1;
            if !self.budget_ok() {
                return false;
            }
            self.assignment[v] = c;
            for &w in &self.adj_later[v] {
                self.forbid[w as usize][c as usize - 1] += 1;
            }
            if self.assign_from(v + 1, max_used.max(c)) {
                return true;
            }
            for &w in &self.adj_later[v] {
                self.forbid[w as usize][c as usize - 1] -= 1;
            }
            if self.out_of_budget {
                return false;
            }
        }
        false
    }
}

/// Complete backtracking search for a proper m-coloring of the (n,k) Kneser
/// graph, with default budget and symmetry breaking on.
pub fn find_coloring(n: u32, k: u32, m: u32) -> Result<SearchResult, BasecaseError> {
    find_coloring_with(n, k, m, &SearchOptions::new())
}

pub fn find_coloring_with(
    n: u32,
    k: u32,
    m: u32,
    options: &SearchOptions,
) -> Result<SearchResult, BasecaseError> {
    if k == 0 || n < 2 * k || m == 0 {
        return Err(BasecaseError::BadParams { n, k, m });
    }
    let params = InstanceParams::new(n, k, m)?;
    let (verts, edges) = kneser_edges(n, k);
    let mut adj_later = vec![Vec::new(); verts.len()];
    for &(r, s) in &edges {
        adj_later[r as usize].push(s as u32);
    }
    let started = Instant::now();
    let mut searcher = Searcher {
        m,
        adj_later,
        forbid: vec![vec![0; m as usize]; verts.len()],
        assignment: vec![0; verts.len()],
        symmetry: options.symmetry_breaking,
        nodes: 0,
        budget: options.budget,
        started,
        out_of_budget: false,
    };
    let found = searcher.assign_from(0, 0);
    let outcome = if found {
        let witness = Coloring::new(params, searcher.assignment.clone())
            .expect("complete assignment within 1..=m");
        debug_assert!(witness.validate().is_proper());
        Outcome::Found(witness)
    } else if searcher.out_of_budget {
        Outcome::BudgetExceeded
    } else {
        Outcome::Unsatisfiable
    };
    Ok(SearchResult { outcome, nodes_explored: searcher.nodes, elapsed: started.elapsed() })
}

/// Verdict for one instance in a base-case report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Unsatisfiable,
    ColoringFound { colors: Vec<u32> },
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub n: u32,
    pub k: u32,
    pub m: u32,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub nodes_explored: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCaseReport {
    pub instances: Vec<InstanceReport>,
}

impl BaseCaseReport {
    pub fn all_unsatisfiable(&self) -> bool {
        self.instances.iter().all(|i| matches!(i.verdict, Verdict::Unsatisfiable))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Run find_coloring(n, k, n-2k+1) for every n from 2k through n_max; these
/// are exactly the instances the chromatic-number theorem says are
/// unsatisfiable.
pub fn verify_base_cases(
    k: u32,
    n_max: u32,
    options: &SearchOptions,
) -> Result<BaseCaseReport, BasecaseError> {
    if k == 0 || n_max < 2 * k {
        return Err(BasecaseError::BadParams { n: n_max, k, m: 0 });
    }
    let mut instances = Vec::new();
    for n in 2 * k..=n_max {
        let m = n - 2 * k + 1;
        let result = find_coloring_with(n, k, m, options)?;
        let verdict = match result.outcome {
            Outcome::Unsatisfiable => Verdict::Unsatisfiable,
            Outcome::Found(c) => Verdict::ColoringFound { colors: c.colors().to_vec() },
            Outcome::BudgetExceeded => Verdict::BudgetExceeded,
        };
        instances.push(InstanceReport {
            n,
            k,
            m,
            verdict,
            nodes_explored: result.nodes_explored,
            elapsed_ms: result.elapsed.as_millis() as u64,
        });
    }
    Ok(BaseCaseReport { instances })
}
