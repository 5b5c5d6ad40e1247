//! Epistemic states `(Pr, K, u)`: a probability over causal settings and a
//! utility on worlds.
//!
//! By convention each context in `K` produces the default action, so
//! `w_{M,u}` is the no-action baseline; actions are compared only through
//! interventions `[A <- a]`.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::scm::{CausalFormula, CausalSetting, Endo, Formula, Intervention, Signature, World};

/// `u(w)`: the sum of the weights whose conditions `w` satisfies.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct UtilityFunction {
    terms: Vec<(Formula, Rational)>,
}

impl UtilityFunction {
    pub fn new(terms: Vec<(Formula, Rational)>) -> Self {
        UtilityFunction { terms }
    }

    pub fn terms(&self) -> &[(Formula, Rational)] {
        &self.terms
    }

    pub fn eval(&self, world: &World) -> Rational {
        self.terms
            .iter()
            .filter(|(cond, _)| cond.eval(world))
            .fold(Rational::zero(), |acc, (_, w)| acc + w)
    }

    /// Indices of terms whose condition mentions `v`.
    pub fn terms_mentioning(&self, v: Endo) -> Vec<usize> {
        self.terms
            .iter()
            .enumerate()
            .filter(|(_, (cond, _))| cond.vars().contains(&v))
            .map(|(i, _)| i)
            .collect()
    }

    /// Same conditions with every weight multiplied by `k`.
    pub fn scaled(&self, k: &Rational) -> Self {
        UtilityFunction {
            terms: self.terms.iter().map(|(c, w)| (c.clone(), w * k)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpistemicState {
    signature: Arc<Signature>,
    settings: Vec<(CausalSetting, Rational)>,
    utility: UtilityFunction,
    default_action: usize,
}

impl EpistemicState {
    pub fn new(
        settings: Vec<(CausalSetting, Rational)>,
        utility: UtilityFunction,
        default_action: usize,
    ) -> Result<Self> {
        let signature = match settings.first() {
            Some((s, _)) => Arc::clone(s.signature()),
            None => return Err(Error::EmptyEpistemicState),
        };
        for (s, p) in &settings {
            if **s.signature() != *signature {
                return Err(Error::SignatureMismatch);
            }
            if !p.is_positive() {
                return Err(Error::NonPositiveProbability(rational::exact(p)));
            }
        }
        let total = rational::sum(settings.iter().map(|(_, p)| p));
        if !total.is_one() {
            return Err(Error::ProbabilitySum(rational::exact(&total)));
        }
        if default_action >= signature.action_values().len() {
            return Err(Error::UnknownAction(default_action.to_string()));
        }
        Ok(EpistemicState {
            signature,
            settings,
            utility,
            default_action,
        })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn settings(&self) -> &[(CausalSetting, Rational)] {
        &self.settings
    }

    pub fn utility(&self) -> &UtilityFunction {
        &self.utility
    }

    pub fn default_action(&self) -> usize {
        self.default_action
    }

    /// The same state with another utility function.
    pub fn with_utility(&self, utility: UtilityFunction) -> Self {
        EpistemicState {
            utility,
            ..self.clone()
        }
    }

    /// Range index of the action named `name`.
    pub fn action(&self, name: &str) -> Result<usize> {
        self.signature
            .var(self.signature.action())
            .value_index(name)
            .ok_or_else(|| Error::UnknownAction(name.to_string()))
    }

    pub fn action_name(&self, a: usize) -> &str {
        &self.signature.action_values()[a]
    }

    pub fn action_count(&self) -> usize {
        self.signature.action_values().len()
    }

    fn check_action(&self, a: usize) -> Result<()> {
        if a < self.action_count() {
            Ok(())
        } else {
            Err(Error::UnknownAction(a.to_string()))
        }
    }

    fn action_iv(&self, a: usize) -> Intervention {
        Intervention::single(self.signature.action(), a)
    }

    /// `Pr([[K]] phi)`.
    pub fn prob(&self, phi: &CausalFormula) -> Rational {
        self.settings
            .iter()
            .filter(|(s, _)| s.holds(phi))
            .fold(Rational::zero(), |acc, (_, p)| acc + p)
    }

    /// `Pr([[K]] [A <- a] phi)` for intervention-free `phi`.
    pub fn prob_under_action(&self, a: usize, phi: &Formula) -> Result<Rational> {
        self.check_action(a)?;
        Ok(self.prob(&CausalFormula::under(self.action_iv(a), phi.clone())))
    }

    /// `delta_{a,a',phi} = max(0, Pr([A<-a]phi) - Pr([A<-a']phi))`.
    pub fn delta(&self, a: usize, alt: usize, phi: &Formula) -> Result<Rational> {
        let p = self.prob_under_action(a, phi)?;
        let q = self.prob_under_action(alt, phi)?;
        Ok(rational::max_zero(p - q))
    }

    /// `sum Pr(M,u) * u(w_{M,A<-a,u})`.
    pub fn expected_utility(&self, a: usize) -> Result<Rational> {
        self.check_action(a)?;
        let iv = self.action_iv(a);
        Ok(self.weighted(|s| self.utility.eval(&s.world_under(&iv))))
    }

    /// Expected utility of `alt` with `pins` held at the values they take
    /// under `a` in each setting.
    pub fn pinned_expected_utility(&self, alt: usize, pins: &[Endo], a: usize) -> Result<Rational> {
        self.check_action(a)?;
        self.check_action(alt)?;
        let action = self.signature.action();
        if pins.contains(&action) {
            return Err(Error::ActionVariableNotAllowed);
        }
        Ok(self.weighted(|s| {
            let values = s.outcome_under_action(pins, a);
            let iv = Intervention::new(
                &self.signature,
                std::iter::once((action, alt)).chain(pins.iter().copied().zip(values)),
            )
            .expect("pins are distinct and exclude the action");
            self.utility.eval(&s.world_under(&iv))
        }))
    }

    /// Probability-weighted sum of `f` over `K`.
    pub fn weighted(&self, f: impl Fn(&CausalSetting) -> Rational) -> Rational {
        self.settings
            .iter()
            .fold(Rational::zero(), |acc, (s, p)| acc + p * f(s))
    }
}
