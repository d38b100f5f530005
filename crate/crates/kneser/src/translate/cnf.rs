//! CNF container with a structured-name table and DIMACS export.

use std::fmt::Write as _;

use super::TranslateError;

/// Clause database in DIMACS conventions: variables are 1..=num_vars and a
/// literal is a signed variable id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
    /// Structured name per variable id, in id order (id = index + 1).
    pub names: Vec<String>,
    /// Free-form header comments (emitted before the name table).
    pub comments: Vec<String>,
}

impl Cnf {
    pub fn new(num_vars: u32) -> Self {
        Cnf { num_vars, clauses: Vec::new(), names: Vec::new(), comments: Vec::new() }
    }

    pub fn push(&mut self, clause: Vec<i32>) {
        self.clauses.push(clause);
    }

    /// Structural invariants: no empty clause, no zero literal, ids within
    /// [1, num_vars], and the name table (when present) covers every id.
    pub fn validate(&self) -> Result<(), TranslateError> {
        for (i, clause) in self.clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(TranslateError::EmptyClause { index: i });
            }
            for &lit in clause {
                let var = lit.unsigned_abs();
                if lit == 0 || var > self.num_vars {
                    return Err(TranslateError::LiteralOutOfRange { index: i, lit });
                }
            }
        }
        if !self.names.is_empty() && self.names.len() != self.num_vars as usize {
            return Err(TranslateError::NameTableSize {
                expected: self.num_vars,
                got: self.names.len(),
            });
        }
        Ok(())
    }

    /// Standard DIMACS text: comments, the name table as comments, the
    /// "p cnf V C" header, then 0-terminated clauses one per line.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "c {c}");
        }
        for (i, name) in self.names.iter().enumerate() {
            let _ = writeln!(out, "c var {} = {}", i + 1, name);
        }
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for &lit in clause {
                let _ = write!(out, "{lit} ");
            }
            let _ = writeln!(out, "0");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_layout() {
        let mut cnf = Cnf::new(2);
        cnf.comments.push("demo".to_string());
        cnf.names = vec!["p[0,1]".to_string(), "p[1,1]".to_string()];
        cnf.push(vec![1, -2]);
        cnf.push(vec![2]);
        cnf.validate().unwrap();
        let text = cnf.to_dimacs();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines,
            vec!["c demo", "c var 1 = p[0,1]", "c var 2 = p[1,1]", "p cnf 2 2", "1 -2 0", "2 0"]
        );
    }

    #[test]
    fn validate_rejects_empty_clause_and_bad_literals() {
        let mut cnf = Cnf::new(1);
        cnf.push(vec![]);
        assert!(matches!(cnf.validate(), Err(TranslateError::EmptyClause { index: 0 })));
        cnf.clauses = vec![vec![2]];
        assert!(matches!(
            cnf.validate(),
            Err(TranslateError::LiteralOutOfRange { index: 0, lit: 2 })
        ));
        cnf.clauses = vec![vec![0]];
        assert!(matches!(
            cnf.validate(),
            Err(TranslateError::LiteralOutOfRange { index: 0, lit: 0 })
        ));
    }

    #[test]
    fn validate_checks_name_table_coverage() {
        let mut cnf = Cnf::new(2);
        cnf.push(vec![1, 2]);
        cnf.names = vec!["p[0,1]".to_string()];
        assert!(matches!(
            cnf.validate(),
            Err(TranslateError::NameTableSize { expected: 2, got: 1 })
        ));
    }
}
