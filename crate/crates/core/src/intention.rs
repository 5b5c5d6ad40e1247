//! Intention: intended actions, intending to affect a set of variables and
//! intending to bring about an outcome.
//!
//! `a` intends to affect `O` when some superset `O'` of `O` is the minimal
//! set whose values under `a`, once fixed, make some reference action at
//! least as good as `a`. Supersets are searched by size and then by sorted
//! variable names, up to a bound `max_k`; a negative answer reached while
//! larger supersets were skipped is flagged inconclusive.

use std::collections::HashMap;

use crate::epistemic::EpistemicState;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scm::{CausalSetting, Endo, Event, Intervention, Signature};
use crate::search::{combinations, subsets_by_size};

pub const DEFAULT_MAX_SUPERSET: usize = 3;

/// How `REF(a)` is chosen.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ReferencePolicy {
    /// `{a0}`, or every other action when `a` is the default.
    #[default]
    DefaultOnly,
    AllOthers,
    Explicit(Vec<String>),
    DefaultPlus(Vec<String>),
}

/// Resolves `REF(a)` as ascending action indices. Never contains `a`.
pub fn resolve_ref(policy: &ReferencePolicy, a: usize, e: &EpistemicState) -> Result<Vec<usize>> {
    let a0 = e.default_action();
    let all_others = || (0..e.action_count()).filter(|&x| x != a).collect::<Vec<_>>();
    let named = |names: &[String]| names.iter().map(|n| e.action(n)).collect::<Result<Vec<_>>>();
    let mut set = match policy {
        ReferencePolicy::DefaultOnly if a != a0 => vec![a0],
        ReferencePolicy::DefaultOnly | ReferencePolicy::AllOthers => all_others(),
        ReferencePolicy::Explicit(names) => named(names)?,
        ReferencePolicy::DefaultPlus(names) => {
            let mut v = named(names)?;
            v.push(a0);
            v
        }
    };
    set.retain(|&x| x != a);
    set.sort_unstable();
    set.dedup();
    if set.is_empty() {
        return Err(Error::EmptyReferenceSet(e.action_name(a).to_string()));
    }
    Ok(set)
}

/// Whether `a` was intended: it is not the only possible action, it was
/// the action taken in `actual` (when given), and it maximizes expected
/// utility.
pub fn action_intended(e: &EpistemicState, a: usize, actual: Option<&CausalSetting>) -> Result<bool> {
    let eu = e.expected_utility(a)?;
    if e.action_count() < 2 {
        return Ok(false);
    }
    if let Some(s) = actual {
        let taken = s.solve().get(e.signature().action());
        if taken != a {
            return Ok(false);
        }
    }
    for alt in 0..e.action_count() {
        if e.expected_utility(alt)? > eu {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Why a candidate superset was accepted or rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    /// Both clauses hold.
    Witness,
    /// Clause (a): pinning the candidate does not make any reference action
    /// at least as good as `a`.
    ExistenceFails,
    /// Clause (b): this strict subset already passes clause (a).
    NotMinimal(Vec<Endo>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    /// Candidate `O'`, sorted by name.
    pub candidate: Vec<Endo>,
    /// `max over REF(a)` of the pinned expected utility.
    pub pinned_max: Rational,
    /// Reference actions attaining `pinned_max`.
    pub best_alternatives: Vec<usize>,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffectWitness {
    /// `O'`, sorted by name.
    pub vars: Vec<Endo>,
    /// Values of `O'` under `a`, one row per setting of `K`.
    pub pinned_values: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntentVerdict {
    pub intends: bool,
    pub expected_utility: Rational,
    pub reference: Vec<usize>,
    pub witness: Option<AffectWitness>,
    pub trace: Vec<TraceEntry>,
    /// Supersets larger than the bound were not examined.
    pub truncated: bool,
    /// Negative verdict reached under truncation.
    pub inconclusive: bool,
}

fn sort_by_name(sig: &Signature, vars: &mut [Endo]) {
    vars.sort_by(|x, y| sig.name(*x).cmp(sig.name(*y)));
}

/// Maximum pinned expected utility over `REF(a)`, memoized by variable set.
struct PinnedMax<'a> {
    e: &'a EpistemicState,
    a: usize,
    reference: &'a [usize],
    memo: HashMap<Vec<Endo>, (Rational, Vec<usize>)>,
}

impl PinnedMax<'_> {
    fn get(&mut self, vars: &[Endo]) -> Result<(Rational, Vec<usize>)> {
        let mut key = vars.to_vec();
        key.sort_unstable();
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let mut best: Option<(Rational, Vec<usize>)> = None;
        for &alt in self.reference {
            let v = self.e.pinned_expected_utility(alt, &key, self.a)?;
            best = match best {
                Some((m, mut who)) if v == m => {
                    who.push(alt);
                    Some((m, who))
                }
                Some((m, who)) if v < m => Some((m, who)),
                _ => Some((v, vec![alt])),
            };
        }
        let best = best.expect("reference set is nonempty");
        self.memo.insert(key, best.clone());
        Ok(best)
    }
}

pub fn intends_to_affect(
    e: &EpistemicState,
    a: usize,
    vars: &[Endo],
    policy: &ReferencePolicy,
    max_k: usize,
) -> Result<IntentVerdict> {
    let sig = e.signature();
    if vars.is_empty() {
        return Err(Error::EmptyVariableSet);
    }
    let action = sig.action();
    let mut base: Vec<Endo> = vars.to_vec();
    base.sort_unstable();
    base.dedup();
    for &v in &base {
        if v.0 >= sig.endo_count() {
            return Err(Error::UnknownVariable(format!("#{}", v.0)));
        }
        if v == action {
            return Err(Error::ActionVariableNotAllowed);
        }
    }
    if max_k < base.len() {
        return Err(Error::SupersetBound {
            max_k,
            size: base.len(),
        });
    }
    let eu = e.expected_utility(a)?;
    let reference = resolve_ref(policy, a, e)?;
    let mut pinned = PinnedMax {
        e,
        a,
        reference: &reference,
        memo: HashMap::new(),
    };

    let mut extra: Vec<Endo> = sig
        .endo_vars()
        .filter(|v| *v != action && !base.contains(v))
        .collect();
    sort_by_name(sig, &mut extra);
    let room = max_k - base.len();
    let truncated = extra.len() > room;

    let mut trace = Vec::new();
    for size in 0..=room.min(extra.len()) {
        // Candidates of one size, ordered by their sorted name lists.
        let mut group: Vec<Vec<Endo>> = combinations(extra.len(), size)
            .map(|idx| {
                let mut c: Vec<Endo> = base.iter().copied().chain(idx.iter().map(|&i| extra[i])).collect();
                sort_by_name(sig, &mut c);
                c
            })
            .collect();
        group.sort_by(|x, y| {
            let nx = x.iter().map(|v| sig.name(*v));
            let ny = y.iter().map(|v| sig.name(*v));
            nx.cmp(ny)
        });
        for candidate in group {
            let (pinned_max, best_alternatives) = pinned.get(&candidate)?;
            let decision = if eu > pinned_max {
                Decision::ExistenceFails
            } else {
                let mut blocker = None;
                for idx in subsets_by_size(candidate.len(), 0, candidate.len() - 1) {
                    let sub: Vec<Endo> = idx.iter().map(|&i| candidate[i]).collect();
                    if eu <= pinned.get(&sub)?.0 {
                        blocker = Some(sub);
                        break;
                    }
                }
                match blocker {
                    Some(sub) => Decision::NotMinimal(sub),
                    None => Decision::Witness,
                }
            };
            let found = decision == Decision::Witness;
            trace.push(TraceEntry {
                candidate: candidate.clone(),
                pinned_max,
                best_alternatives,
                decision,
            });
            if found {
                let pinned_values = e
                    .settings()
                    .iter()
                    .map(|(s, _)| s.outcome_under_action(&candidate, a))
                    .collect();
                return Ok(IntentVerdict {
                    intends: true,
                    expected_utility: eu,
                    reference,
                    witness: Some(AffectWitness {
                        vars: candidate,
                        pinned_values,
                    }),
                    trace,
                    truncated,
                    inconclusive: false,
                });
            }
        }
    }
    Ok(IntentVerdict {
        intends: false,
        expected_utility: eu,
        reference,
        witness: None,
        trace,
        truncated,
        inconclusive: truncated,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachableValue {
    pub values: Vec<usize>,
    /// `sum Pr(M,u) * u(w_{M, O <- values, u})`.
    pub score: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeVerdict {
    pub intends: bool,
    /// The outcome's variables in ascending index order, and their values.
    pub outcome: Vec<Event>,
    /// Clause (a).
    pub affect: IntentVerdict,
    /// Clause (b): the outcome is possible under `a`.
    pub possible: bool,
    /// Clause (c): no reachable value scores higher.
    pub best: bool,
    /// Values reachable under `a`, sorted.
    pub reachable: Vec<ReachableValue>,
}

pub fn intends_outcome(
    e: &EpistemicState,
    a: usize,
    outcome: &[Event],
    policy: &ReferencePolicy,
    max_k: usize,
) -> Result<OutcomeVerdict> {
    let sig = e.signature();
    let mut outcome = outcome.to_vec();
    outcome.sort();
    outcome.dedup();
    if outcome.windows(2).any(|w| w[0].var == w[1].var) {
        return Err(Error::NotAConjunction);
    }
    let vars: Vec<Endo> = outcome.iter().map(|ev| ev.var).collect();
    let target: Vec<usize> = outcome.iter().map(|ev| ev.value).collect();
    let affect = intends_to_affect(e, a, &vars, policy, max_k)?;

    let mut reached: Vec<Vec<usize>> = e
        .settings()
        .iter()
        .map(|(s, _)| s.outcome_under_action(&vars, a))
        .collect();
    reached.sort();
    reached.dedup();
    let score = |values: &[usize]| {
        let iv = Intervention::new(sig, vars.iter().copied().zip(values.iter().copied()))
            .expect("distinct outcome variables");
        e.weighted(|s| e.utility().eval(&s.world_under(&iv)))
    };
    let reachable: Vec<ReachableValue> = reached
        .into_iter()
        .map(|values| ReachableValue {
            score: score(&values),
            values,
        })
        .collect();
    let possible = reachable.iter().any(|r| r.values == target);
    let own = score(&target);
    let best = reachable.iter().all(|r| own >= r.score);
    Ok(OutcomeVerdict {
        intends: affect.intends && possible && best,
        outcome,
        affect,
        possible,
        best,
        reachable,
    })
}
