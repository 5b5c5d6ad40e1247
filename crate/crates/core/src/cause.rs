//! Actual causation (the modified three-clause definition) and but-for causation.
//!
//! `X = x` is an actual cause of `phi` in `(M, u)` when
//!
//! * AC1: both `X = x` and `phi` hold in `(M, u)`;
//! * AC2: for some set `W` of other endogenous variables, frozen at their
//!   actual values, and some alternative `x'`, `[X <- x', W <- w] !phi` holds;
//! * AC3: no strict nonempty subset of `X` satisfies AC1 and AC2.
//!
//! Searches run in a canonical order so reported witnesses are stable:
//! `W` by size, then lexicographically by variable name; `x'` by range
//! position with the alphabetically first variable most significant.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scm::{CausalFormula, CausalSetting, Endo, Event, Formula, Intervention, Signature, World};
use crate::search::{product, subsets_by_size};

/// Default cap on endogenous variables for cause queries. The underlying
/// decision problem is hard for the second level of the polynomial
/// hierarchy, so the search is exponential by necessity.
pub const DEFAULT_VARIABLE_CAP: usize = 20;

/// A conjunction of primitive events over distinct endogenous variables,
/// kept sorted by variable name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CauseCandidate {
    conjuncts: Vec<Event>,
}

impl CauseCandidate {
    pub fn new(sig: &Signature, events: impl IntoIterator<Item = Event>) -> Result<Self> {
        let mut conjuncts: Vec<Event> = events.into_iter().collect();
        if conjuncts.is_empty() {
            return Err(Error::EmptyCandidate);
        }
        for e in &conjuncts {
            if e.var.0 >= sig.endo_count() {
                return Err(Error::UnknownVariable(format!("#{}", e.var.0)));
            }
            if e.value >= sig.var(e.var).range().len() {
                return Err(Error::ValueNotInRange {
                    variable: sig.name(e.var).to_string(),
                    value: e.value.to_string(),
                });
            }
        }
        conjuncts.sort_by(|a, b| sig.name(a.var).cmp(sig.name(b.var)));
        if let Some(w) = conjuncts.windows(2).find(|w| w[0].var == w[1].var) {
            return Err(Error::RepeatedAssignment(sig.name(w[0].var).to_string()));
        }
        Ok(CauseCandidate { conjuncts })
    }

    pub fn conjuncts(&self) -> &[Event] {
        &self.conjuncts
    }

    pub fn vars(&self) -> Vec<Endo> {
        self.conjuncts.iter().map(|e| e.var).collect()
    }

    pub fn len(&self) -> usize {
        self.conjuncts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conjuncts.is_empty()
    }

    pub fn display(&self, sig: &Signature) -> String {
        Formula::conjunction(&self.conjuncts).display(sig)
    }

    fn subset(&self, indices: &[usize]) -> CauseCandidate {
        CauseCandidate {
            conjuncts: indices.iter().map(|&i| self.conjuncts[i]).collect(),
        }
    }
}

/// Contingency `W = w` (actual values) and alternative `x'` that together
/// falsify the outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ac2Witness {
    /// `W` with the actual values `w`, sorted by variable name.
    pub contingency: Vec<(Endo, usize)>,
    /// `x'`, aligned with the candidate's conjuncts.
    pub alternative: Vec<(Endo, usize)>,
}

impl Ac2Witness {
    /// `[X <- x', W <- w] !phi`, checkable with [`CausalSetting::holds`].
    pub fn counterfactual(&self, sig: &Signature, phi: &Formula) -> CausalFormula {
        let iv = Intervention::new(
            sig,
            self.alternative.iter().chain(&self.contingency).copied(),
        )
        .expect("witness variables are disjoint");
        CausalFormula::under(iv, Formula::not(phi.clone()))
    }

    /// `W = w` as a plain formula.
    pub fn contingency_formula(&self) -> Formula {
        Formula::all(self.contingency.iter().map(|&(v, x)| Formula::event(v, x)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CauseVerdict {
    pub ac1: bool,
    pub ac2_witness: Option<Ac2Witness>,
    pub ac3: bool,
    /// First strict subset found to satisfy AC1 and AC2, when AC3 fails.
    pub ac3_blocker: Option<CauseCandidate>,
    pub is_cause: bool,
}

/// Definitions of actual causation. Only the modified definition is
/// provided; others can be added behind this interface.
pub trait CausalityDefinition {
    fn check_cause(
        &self,
        setting: &CausalSetting,
        cand: &CauseCandidate,
        phi: &Formula,
    ) -> Result<CauseVerdict>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModifiedAc {
    pub max_endogenous: usize,
}

impl Default for ModifiedAc {
    fn default() -> Self {
        ModifiedAc {
            max_endogenous: DEFAULT_VARIABLE_CAP,
        }
    }
}

impl ModifiedAc {
    fn check_cap(&self, sig: &Signature) -> Result<()> {
        if sig.endo_count() > self.max_endogenous {
            return Err(Error::VariableCap {
                count: sig.endo_count(),
                cap: self.max_endogenous,
            });
        }
        Ok(())
    }

    /// First AC2 witness in canonical order, if any.
    pub fn find_ac2(
        &self,
        setting: &CausalSetting,
        actual: &World,
        cand: &CauseCandidate,
        phi: &Formula,
    ) -> Option<Ac2Witness> {
        let sig = setting.signature();
        let xs = cand.vars();
        let mut others: Vec<Endo> = sig.endo_vars().filter(|v| !xs.contains(v)).collect();
        others.sort_by(|a, b| sig.name(*a).cmp(sig.name(*b)));
        let sizes: Vec<usize> = xs.iter().map(|&v| sig.var(v).range().len()).collect();
        let alternatives: Vec<Vec<usize>> = product(&sizes).collect();

        for w_idx in subsets_by_size(others.len(), 0, others.len()) {
            let contingency: Vec<(Endo, usize)> = w_idx
                .iter()
                .map(|&i| (others[i], actual.get(others[i])))
                .collect();
            for alt in &alternatives {
                let alternative: Vec<(Endo, usize)> =
                    xs.iter().copied().zip(alt.iter().copied()).collect();
                let iv = Intervention::new(sig, alternative.iter().chain(&contingency).copied())
                    .expect("disjoint in-range assignments");
                if !phi.eval(&setting.world_under(&iv)) {
                    return Some(Ac2Witness {
                        contingency,
                        alternative,
                    });
                }
            }
        }
        None
    }
}

impl CausalityDefinition for ModifiedAc {
    fn check_cause(
        &self,
        setting: &CausalSetting,
        cand: &CauseCandidate,
        phi: &Formula,
    ) -> Result<CauseVerdict> {
        let sig = setting.signature();
        self.check_cap(sig)?;
        let actual = setting.solve();
        let holds_actually = |c: &CauseCandidate| c.conjuncts().iter().all(|e| actual.satisfies(e));
        let ac1 = holds_actually(cand) && phi.eval(&actual);
        let ac2_witness = self.find_ac2(setting, &actual, cand, phi);

        let mut ac3_blocker = None;
        let n = cand.len();
        if n > 1 {
            for idx in subsets_by_size(n, 1, n - 1) {
                let sub = cand.subset(&idx);
                let sub_ac1 = holds_actually(&sub) && phi.eval(&actual);
                if sub_ac1 && self.find_ac2(setting, &actual, &sub, phi).is_some() {
                    ac3_blocker = Some(sub);
                    break;
                }
            }
        }
        let ac3 = ac3_blocker.is_none();
        Ok(CauseVerdict {
            ac1,
            is_cause: ac1 && ac2_witness.is_some() && ac3,
            ac2_witness,
            ac3,
            ac3_blocker,
        })
    }
}

/// Checks `cand` against `phi` under the modified definition.
pub fn check_cause(
    setting: &CausalSetting,
    cand: &CauseCandidate,
    phi: &Formula,
) -> Result<CauseVerdict> {
    ModifiedAc::default().check_cause(setting, cand, phi)
}

/// Searches causes containing `X = x` built from events true in the actual
/// world, smallest first, then by variable names. Returns the first one.
pub fn is_part_of_cause(
    setting: &CausalSetting,
    conjunct: Event,
    phi: &Formula,
) -> Result<Option<CauseCandidate>> {
    is_part_of_cause_with(&ModifiedAc::default(), setting, conjunct, phi)
}

pub fn is_part_of_cause_with(
    def: &ModifiedAc,
    setting: &CausalSetting,
    conjunct: Event,
    phi: &Formula,
) -> Result<Option<CauseCandidate>> {
    let sig = setting.signature();
    def.check_cap(sig)?;
    CauseCandidate::new(sig, [conjunct])?;
    let actual = setting.solve();
    if !actual.satisfies(&conjunct) || !phi.eval(&actual) {
        return Ok(None);
    }
    let mut others: Vec<Endo> = sig.endo_vars().filter(|&v| v != conjunct.var).collect();
    others.sort_by(|a, b| sig.name(*a).cmp(sig.name(*b)));

    // Every candidate here is made of actual events and phi holds, so AC1
    // is settled and AC3 only asks which subsets admit an AC2 witness.
    // Those answers are shared between candidates.
    let mut ac2: HashMap<Vec<Endo>, bool> = HashMap::new();
    let mut has_ac2 = |vars: &[Endo]| -> Result<bool> {
        let mut key = vars.to_vec();
        key.sort();
        if let Some(&known) = ac2.get(&key) {
            return Ok(known);
        }
        let events = vars.iter().map(|&v| Event { var: v, value: actual.get(v) });
        let cand = CauseCandidate::new(sig, events)?;
        let found = def.find_ac2(setting, &actual, &cand, phi).is_some();
        ac2.insert(key, found);
        Ok(found)
    };
    for idx in subsets_by_size(others.len(), 0, others.len()) {
        let mut vars: Vec<Endo> = idx.iter().map(|&i| others[i]).collect();
        vars.push(conjunct.var);
        if !has_ac2(&vars)? {
            continue;
        }
        let mut minimal = true;
        for sub in subsets_by_size(vars.len(), 1, vars.len() - 1) {
            let part: Vec<Endo> = sub.iter().map(|&i| vars[i]).collect();
            if has_ac2(&part)? {
                minimal = false;
                break;
            }
        }
        if minimal {
            let events = vars.iter().map(|&v| Event { var: v, value: actual.get(v) });
            return Ok(Some(CauseCandidate::new(sig, events)?));
        }
    }
    Ok(None)
}

/// Whether changing `X` alone can falsify `phi`. Requires `X = x` and
/// `phi` to hold in the actual world.
pub fn but_for(setting: &CausalSetting, conjunct: Event, phi: &Formula) -> Result<bool> {
    let sig = setting.signature();
    CauseCandidate::new(sig, [conjunct])?;
    let actual = setting.solve();
    if !actual.satisfies(&conjunct) || !phi.eval(&actual) {
        return Err(Error::PreconditionViolated(format!(
            "{} and {} must both hold in the actual world",
            Formula::event(conjunct.var, conjunct.value).display(sig),
            phi.display(sig)
        )));
    }
    Ok((0..sig.var(conjunct.var).range().len()).any(|alt| {
        !phi.eval(&setting.world_under(&Intervention::single(conjunct.var, alt)))
    }))
}
