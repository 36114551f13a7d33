//! Exact linear programming over the rationals.
//!
//! Problems are stated over named non-negative (or explicitly free)
//! variables and solved by a two-phase tableau simplex with Bland's
//! anti-cycling rule. Every optimal point is re-checked against the original
//! rows by substitution before it is returned.

mod assignment;
mod num;
mod simplex;

use std::fmt::Write as _;

use thiserror::Error;

use crate::ratio::{decimal_half_even, Q};

pub use assignment::{build_bistochastic, AssignmentLp, LinExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug)]
struct Variable {
    name: String,
    free: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub terms: Vec<(VarId, Q)>,
    pub relation: Relation,
    pub rhs: Q,
}

impl Constraint {
    fn holds_at(&self, values: &[Q]) -> bool {
        let lhs: Q = self.terms.iter().map(|(v, c)| c * &values[v.0]).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("variable index {0} is not declared")]
    UnknownVariable(usize),
    #[error("solution failed verification: {0}")]
    VerificationFailed(String),
}

/// A linear program with exact rational data.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Option<(Sense, Vec<(VarId, Q)>)>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a variable bounded below by zero.
    pub fn add_var(&mut self, name: impl Into<String>) -> VarId {
        self.vars.push(Variable { name: name.into(), free: false });
        VarId(self.vars.len() - 1)
    }

    /// Declares a variable with no sign restriction.
    pub fn add_free_var(&mut self, name: impl Into<String>) -> VarId {
        self.vars.push(Variable { name: name.into(), free: true });
        VarId(self.vars.len() - 1)
    }

    pub fn add_constraint(
        &mut self,
        terms: impl IntoIterator<Item = (VarId, Q)>,
        relation: Relation,
        rhs: Q,
    ) -> Result<usize, LpError> {
        let terms: Vec<(VarId, Q)> = terms.into_iter().collect();
        self.check_vars(&terms)?;
        self.constraints.push(Constraint { terms, relation, rhs });
        Ok(self.constraints.len() - 1)
    }

    pub fn set_objective(
        &mut self,
        sense: Sense,
        terms: impl IntoIterator<Item = (VarId, Q)>,
    ) -> Result<(), LpError> {
        let terms: Vec<(VarId, Q)> = terms.into_iter().collect();
        self.check_vars(&terms)?;
        self.objective = Some((sense, terms));
        Ok(())
    }

    fn check_vars(&self, terms: &[(VarId, Q)]) -> Result<(), LpError> {
        match terms.iter().find(|(v, _)| v.0 >= self.vars.len()) {
            Some((v, _)) => Err(LpError::UnknownVariable(v.0)),
            None => Ok(()),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.vars[v.0].name
    }

    pub fn is_free(&self, v: VarId) -> bool {
        self.vars[v.0].free
    }

    pub fn objective(&self) -> Option<(Sense, &[(VarId, Q)])> {
        self.objective.as_ref().map(|(s, t)| (*s, t.as_slice()))
    }

    /// Renders the problem in CPLEX LP text format. Coefficients are
    /// printed as 12-digit decimals; the dump is meant for cross-checking
    /// with external solvers, not for exact round-trips.
    pub fn to_lp_format(&self) -> String {
        let mut out = String::new();
        let fmt_terms = |terms: &[(VarId, Q)]| -> String {
            if terms.is_empty() {
                return "0".to_string();
            }
            terms
                .iter()
                .enumerate()
                .map(|(k, (v, c))| {
                    let sign = if c < &Q::from_integer(0.into()) { "-" } else if k > 0 { "+" } else { "" };
                    let mag = decimal_half_even(&num_traits::Signed::abs(c), 12);
                    let mag = mag.trim_end_matches('0').trim_end_matches('.');
                    format!("{sign} {mag} {}", self.vars[v.0].name)
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let (sense, terms) = match &self.objective {
            Some((s, t)) => (*s, t.clone()),
            None => (Sense::Minimize, Vec::new()),
        };
        let _ = writeln!(
            out,
            "{}",
            if sense == Sense::Minimize { "Minimize" } else { "Maximize" }
        );
        let _ = writeln!(out, " obj: {}", fmt_terms(&terms));
        let _ = writeln!(out, "Subject To");
        for (k, c) in self.constraints.iter().enumerate() {
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Eq => "=",
                Relation::Ge => ">=",
            };
            let _ = writeln!(
                out,
                " c{k}: {} {rel} {}",
                fmt_terms(&c.terms),
                decimal_half_even(&c.rhs, 12)
            );
        }
        let free: Vec<&str> =
            self.vars.iter().filter(|v| v.free).map(|v| v.name.as_str()).collect();
        if !free.is_empty() {
            let _ = writeln!(out, "Bounds");
            for name in free {
                let _ = writeln!(out, " {name} free");
            }
        }
        let _ = writeln!(out, "End");
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Present iff `status` is `Optimal` (zero for pure feasibility problems).
    pub objective: Option<Q>,
    values: Vec<Q>,
    /// Simplex pivots performed, both phases.
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Value of `v` at the returned point.
    ///
    /// # Panics
    /// If the problem was not solved to optimality.
    pub fn value(&self, v: VarId) -> &Q {
        assert!(self.is_optimal(), "no point available: status {:?}", self.status);
        &self.values[v.0]
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }
}

/// Solves `lp` exactly.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    for c in &lp.constraints {
        lp.check_vars(&c.terms)?;
    }
    let outcome = simplex::run(lp);
    log::trace!(
        "lp solved: {} vars, {} rows, {:?} after {} pivots",
        lp.vars.len(),
        lp.constraints.len(),
        outcome.status,
        outcome.pivots
    );
    if outcome.status != LpStatus::Optimal {
        return Ok(LpSolution {
            status: outcome.status,
            objective: None,
            values: Vec::new(),
            pivots: outcome.pivots,
        });
    }
    let values = outcome.values;
    for (k, v) in lp.vars.iter().enumerate() {
        if !v.free && values[k] < Q::from_integer(0.into()) {
            return Err(LpError::VerificationFailed(format!("{} is negative", v.name)));
        }
    }
    if let Some(k) = lp.constraints.iter().position(|c| !c.holds_at(&values)) {
        return Err(LpError::VerificationFailed(format!("row {k} is violated")));
    }
    let objective = match &lp.objective {
        Some((_, terms)) => terms.iter().map(|(v, c)| c * &values[v.0]).sum(),
        None => Q::from_integer(0.into()),
    };
    if objective != outcome.objective {
        return Err(LpError::VerificationFailed(
            "objective does not match the tableau value".into(),
        ));
    }
    Ok(LpSolution { status: LpStatus::Optimal, objective: Some(objective), values, pivots: outcome.pivots })
}
