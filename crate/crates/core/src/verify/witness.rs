//! Counterexample witnesses and their replay.

use serde::{Deserialize, Serialize};

use super::config::Scenario;
use super::report::CheckReport;
use super::checks::words_up_to;
use crate::elementary::{fu_generators, theorem_generators};
use crate::engine::{closure_enumerate, normal_closure, CommExpr, Level};
use crate::error::{Error, Result};
use crate::form_ideal::validate_form_ideal;
use crate::forms::congruence_membership;
use crate::matrix::UMatrix;
use crate::ring::{validate_form_ring, Elem};
use crate::steinberg::{steinberg_relation_check, RelationInstance};

/// The statement a witness refutes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Claim {
    /// The form ring satisfies its laws.
    FormRingValid,
    /// The level satisfies the form-ideal laws.
    FormIdealValid { level: Level },
    /// The matrix lies in `GU(2n, I, Γ)`.
    Congruent { level: Level },
    /// The relation instance holds.
    Relation { instance: RelationInstance },
    /// The matrix lies in the evaluated expression.
    InSubgroup { expr: CommExpr },
    /// The matrix lies in the normal closure of `FU(I, Γ)` in `EU(A, Λ)`.
    InNormalClosure { level: Level },
    /// The matrix lies in the subgroup generated by the commutator
    /// generators of `left` and `right`, normally closed in `EU(A, Λ)` when
    /// no conjugator length is given.
    InTheoremClosure {
        left: Level,
        right: Level,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        conjugator_length: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub claim: Claim,
    /// Rows in position order `1..n, -n..-1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Elem>>>,
}

impl Witness {
    pub fn new(claim: Claim, matrix: Option<&UMatrix>) -> Self {
        Witness { claim, matrix: matrix.map(|m| m.rows()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayOutcome {
    pub reproduced: bool,
    pub detail: String,
}

fn matrix_of(s: &Scenario, w: &Witness) -> Result<UMatrix> {
    let rows = w.matrix.as_ref().ok_or_else(|| Error::Config("witness carries no matrix".into()))?;
    let m = UMatrix::from_rows(&s.fr().ring, rows)?;
    if m.n() != s.instance.n {
        return Err(Error::Dimension(format!("witness has rank {}, scenario has {}", m.n(), s.instance.n)));
    }
    Ok(m)
}

/// Re-evaluates the claim; `reproduced` means it is still refuted.
pub fn replay(s: &Scenario, w: &Witness) -> Result<ReplayOutcome> {
    let fr = s.fr();
    let n = s.instance.n;
    let (reproduced, detail) = match &w.claim {
        Claim::FormRingValid => {
            let report = validate_form_ring(fr);
            let laws: Vec<&str> = report.violations.iter().map(|v| v.law.as_str()).collect();
            (!report.is_valid(), format!("form ring violates {laws:?}"))
        }
        Claim::FormIdealValid { level } => {
            let report = validate_form_ideal(fr, &level.ideal);
            let laws: Vec<&str> = report.violations.iter().map(|v| v.law.as_str()).collect();
            (!report.is_valid(), format!("{} violates {laws:?}", level.name))
        }
        Claim::Congruent { level } => {
            let m = matrix_of(s, w)?;
            (!congruence_membership(fr, &level.ideal, &m), format!("membership in GU({})", level.name))
        }
        Claim::Relation { instance } => {
            (!steinberg_relation_check(fr, n, instance)?, format!("{instance:?}"))
        }
        Claim::InSubgroup { expr } => {
            let m = matrix_of(s, w)?;
            let h = s.instance.evaluate(expr)?;
            let member = h
                .contains(&m)
                .ok_or_else(|| Error::Unavailable(format!("{expr} is not enumerable within the budget")))?;
            (!member, format!("membership in {expr}"))
        }
        Claim::InNormalClosure { level } => {
            let m = matrix_of(s, w)?;
            let ring = &*fr.ring;
            let h = normal_closure(ring, n, &fu_generators(fr, &level.ideal, n), &s.instance.ambient_generators(), s.config.budget)?;
            let member = h
                .contains(&m)
                .ok_or_else(|| Error::Unavailable("normal closure exceeds the budget".into()))?;
            (!member, format!("membership in the normal closure of FU({})", level.name))
        }
        Claim::InTheoremClosure { left, right, conjugator_length } => {
            let m = matrix_of(s, w)?;
            let ring = &*fr.ring;
            let ambient = s.instance.ambient_generators();
            let h = match conjugator_length {
                Some(len) => {
                    let conj = words_up_to(ring, n, &ambient, *len);
                    closure_enumerate(ring, n, &theorem_generators(fr, &left.ideal, &right.ideal, n, &conj)?, s.config.budget)?
                }
                None => normal_closure(ring, n, &theorem_generators(fr, &left.ideal, &right.ideal, n, &[])?, &ambient, s.config.budget)?,
            };
            let member = h.contains(&m).ok_or_else(|| Error::Unavailable("generated subgroup exceeds the budget".into()))?;
            (!member, format!("membership in the subgroup generated for {}, {}", left.name, right.name))
        }
    };
    Ok(ReplayOutcome { reproduced, detail })
}

/// Accepts a single witness, a report, or a list of reports.
pub fn load_witnesses(text: &str) -> Result<Vec<Witness>> {
    if let Ok(w) = serde_json::from_str::<Witness>(text) {
        return Ok(vec![w]);
    }
    if let Ok(r) = serde_json::from_str::<CheckReport>(text) {
        return Ok(r.witness.into_iter().collect());
    }
    let reports: Vec<CheckReport> =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("not a witness or report: {e}")))?;
    Ok(reports.into_iter().filter_map(|r| r.witness).collect())
}
