//! Action cost, blameworthiness and praiseworthiness.
//!
//! Costs are charged through action-cost variables `Oc`: the cost of `a`
//! in a setting is the utility lost when `Oc` takes the values it would
//! have under `a` while everything else stays at the baseline.

use num_traits::{One, Signed, Zero};

use crate::epistemic::EpistemicState;
use crate::error::{Error, Result};
use crate::intention::{intends_outcome, OutcomeVerdict, ReferencePolicy};
use crate::rational::{self, Rational};
use crate::scm::{CausalSetting, Endo, Formula, Intervention};
use crate::search::subsets_by_size;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostAxiom {
    /// `u(w_{M,u}) >= u(w_{M, Oc <- oc_{A<-a}, u})`.
    Costly,
    /// `u(w_{M, Oc <- oc_{A<-a}, u}) <= u(w_{M, O' <- o'_{A<-a}, u})`.
    Monotone,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostViolation {
    pub axiom: CostAxiom,
    pub setting: usize,
    pub action: usize,
    /// `O'`, empty for [`CostAxiom::Costly`].
    pub subset: Vec<Endo>,
    /// Utility with all of `Oc` pinned to its values under the action.
    pub projected: Rational,
    /// Utility it was compared against: the baseline or the `O'` projection.
    pub compared: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostModel {
    pub cost_variables: Vec<Endo>,
    pub violations: Vec<CostViolation>,
}

impl CostModel {
    pub fn validated(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `u(w_{M, vars <- values under a, u})`.
fn projected_utility(e: &EpistemicState, s: &CausalSetting, vars: &[Endo], a: usize) -> Rational {
    let values = s.outcome_under_action(vars, a);
    let iv = Intervention::new(e.signature(), vars.iter().copied().zip(values))
        .expect("distinct variables");
    e.utility().eval(&s.world_under(&iv))
}

/// Checks both cost axioms for every setting, action and subset of `oc`.
pub fn validate_cost_vars(e: &EpistemicState, oc: &[Endo]) -> Result<CostModel> {
    let sig = e.signature();
    let mut vars = oc.to_vec();
    vars.sort_unstable();
    vars.dedup();
    for &v in &vars {
        if v.0 >= sig.endo_count() {
            return Err(Error::UnknownVariable(format!("#{}", v.0)));
        }
        if v == sig.action() {
            return Err(Error::ActionVariableNotAllowed);
        }
    }
    let mut violations = Vec::new();
    for (i, (s, _)) in e.settings().iter().enumerate() {
        let baseline = e.utility().eval(&s.solve());
        for a in 0..e.action_count() {
            let projected = projected_utility(e, s, &vars, a);
            if baseline < projected {
                violations.push(CostViolation {
                    axiom: CostAxiom::Costly,
                    setting: i,
                    action: a,
                    subset: Vec::new(),
                    projected: projected.clone(),
                    compared: baseline.clone(),
                });
            }
            if vars.len() < 2 {
                continue;
            }
            for idx in subsets_by_size(vars.len(), 1, vars.len() - 1) {
                let subset: Vec<Endo> = idx.iter().map(|&k| vars[k]).collect();
                let partial = projected_utility(e, s, &subset, a);
                if projected > partial {
                    violations.push(CostViolation {
                        axiom: CostAxiom::Monotone,
                        setting: i,
                        action: a,
                        subset,
                        projected: projected.clone(),
                        compared: partial,
                    });
                }
            }
        }
    }
    Ok(CostModel {
        cost_variables: vars,
        violations,
    })
}

/// `c(a) = sum Pr(M,u) * (u(w_{M,u}) - u(w_{M, Oc <- oc_{A<-a}, u}))`.
pub fn cost(e: &EpistemicState, a: usize, cm: &CostModel) -> Result<Rational> {
    if !cm.validated() {
        return Err(Error::InvalidCostModel(cm.violations.len()));
    }
    e.expected_utility(a)?;
    Ok(e.weighted(|s| {
        e.utility().eval(&s.solve()) - projected_utility(e, s, &cm.cost_variables, a)
    }))
}

/// Costs of every action, in action order.
pub fn costs(e: &EpistemicState, cm: &CostModel) -> Result<Vec<Rational>> {
    (0..e.action_count()).map(|a| cost(e, a, cm)).collect()
}

fn max_cost(costs: &[Rational]) -> Rational {
    costs.iter().cloned().max().unwrap_or_else(Rational::zero)
}

fn check_n(n: &Rational, costs: &[Rational]) -> Result<()> {
    let m = max_cost(costs);
    if *n <= m {
        return Err(Error::InvalidN {
            n: rational::exact(n),
            max_cost: rational::exact(&m),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlameRow {
    pub alternative: usize,
    pub delta: Rational,
    pub cost_action: Rational,
    pub cost_alternative: Rational,
    /// `(N - max(c(a') - c(a), 0)) / N`.
    pub mitigation: Rational,
    pub blame: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlameReport {
    pub action: usize,
    pub n: Rational,
    pub rows: Vec<BlameRow>,
    pub overall: Rational,
    pub argmax: Vec<usize>,
}

fn row(
    e: &EpistemicState,
    a: usize,
    alt: usize,
    phi: &Formula,
    n: &Rational,
    costs: &[Rational],
) -> Result<BlameRow> {
    let delta = e.delta(a, alt, phi)?;
    let extra = rational::max_zero(&costs[alt] - &costs[a]);
    let mitigation = (n - extra) / n;
    Ok(BlameRow {
        alternative: alt,
        blame: &delta * &mitigation,
        delta,
        cost_action: costs[a].clone(),
        cost_alternative: costs[alt].clone(),
        mitigation,
    })
}

/// `db_N(a, a', phi)`.
pub fn blame_vs(
    e: &EpistemicState,
    a: usize,
    alt: usize,
    phi: &Formula,
    n: &Rational,
    cm: &CostModel,
) -> Result<Rational> {
    let costs = costs(e, cm)?;
    check_n(n, &costs)?;
    e.expected_utility(alt)?;
    Ok(row(e, a, alt, phi, n, &costs)?.blame)
}

/// `db_N(a, phi)`: the maximum over every alternative, including `a`.
pub fn blame(
    e: &EpistemicState,
    a: usize,
    phi: &Formula,
    n: &Rational,
    cm: &CostModel,
) -> Result<BlameReport> {
    let costs = costs(e, cm)?;
    check_n(n, &costs)?;
    e.expected_utility(a)?;
    let rows = (0..e.action_count())
        .map(|alt| row(e, a, alt, phi, n, &costs))
        .collect::<Result<Vec<_>>>()?;
    let overall = rows
        .iter()
        .map(|r| r.blame.clone())
        .max()
        .expect("at least one action");
    let argmax = rows
        .iter()
        .filter(|r| r.blame == overall)
        .map(|r| r.alternative)
        .collect();
    Ok(BlameReport {
        action: a,
        n: n.clone(),
        rows,
        overall,
        argmax,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PraiseReport {
    pub action: usize,
    pub default_action: usize,
    pub m: Rational,
    pub intention: OutcomeVerdict,
    /// `delta_{a,a0,phi}`.
    pub delta: Rational,
    pub cost_default: Rational,
    /// Alternatives `a'` with `delta(a',a0,phi) >= delta(a,a0,phi)`, with
    /// `(M - c(a0) + c(a')) / M`.
    pub candidates: Vec<(usize, Rational)>,
    pub raw: Rational,
    pub clamped: Rational,
}

/// `pw_M(a, phi)` for a conjunction `phi`; zero unless `phi` was intended.
pub fn praise(
    e: &EpistemicState,
    a: usize,
    phi: &Formula,
    m: &Rational,
    policy: &ReferencePolicy,
    max_k: usize,
    cm: &CostModel,
) -> Result<PraiseReport> {
    let outcome = phi.conjuncts()?;
    let costs = costs(e, cm)?;
    let top = max_cost(&costs);
    if *m <= top {
        return Err(Error::InvalidM {
            m: rational::exact(m),
            max_cost: rational::exact(&top),
        });
    }
    let a0 = e.default_action();
    if a == a0 {
        return Err(Error::PreconditionViolated(format!(
            "praise compares against the default action, so `{}` cannot be it",
            e.action_name(a)
        )));
    }
    let intention = intends_outcome(e, a, &outcome, policy, max_k)?;
    let delta = e.delta(a, a0, phi)?;
    let mut candidates = Vec::new();
    for alt in 0..e.action_count() {
        if e.delta(alt, a0, phi)? >= delta {
            candidates.push((alt, (m - &costs[a0] + &costs[alt]) / m));
        }
    }
    let raw = if intention.intends {
        let least = candidates
            .iter()
            .map(|(_, r)| r.clone())
            .min()
            .expect("`a` itself qualifies");
        &delta + rational::max_zero((Rational::one() - &delta) * least)
    } else {
        Rational::zero()
    };
    let clamped = if raw.is_negative() {
        Rational::zero()
    } else if raw > Rational::one() {
        Rational::one()
    } else {
        raw.clone()
    };
    Ok(PraiseReport {
        action: a,
        default_action: a0,
        m: m.clone(),
        intention,
        delta,
        cost_default: costs[a0].clone(),
        candidates,
        raw,
        clamped,
    })
}
