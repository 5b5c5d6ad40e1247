//! Brute-force reference implementations used to cross-check the engine.
//!
//! Nothing here calls the engine's solver, formula evaluator, cause search,
//! probability or intention code. Models are plain function tables solved by
//! simultaneous iteration; every quantity is computed straight from its
//! definition by exhaustive enumeration. The only bridge into the engine is
//! [`OracleModel::from_setting`], which borrows the per-variable equation
//! evaluator so that shipped scenarios can be replayed here.

use std::collections::BTreeMap;
use std::sync::Arc;

use moral_core::rational::{self, Rational};
use moral_core::scenario::{
    CaseDoc, CasesDoc, EquationDoc, PolicyDoc, ScenarioDoc, SettingDoc, UtilityTermDoc,
    VariableDoc, VariablesDoc,
};
use moral_core::scm::{CausalSetting, Endo, Formula};
use rand::seq::SliceRandom;
use rand::Rng;

type EquationFn = Arc<dyn Fn(&[usize], &[usize]) -> usize + Send + Sync>;

/// A causal model together with its context. Equations see the exogenous
/// values and the full current endogenous assignment.
#[derive(Clone)]
pub struct OracleModel {
    pub endo_sizes: Vec<usize>,
    pub context: Vec<usize>,
    equations: Vec<EquationFn>,
}

impl OracleModel {
    pub fn new(endo_sizes: Vec<usize>, context: Vec<usize>, equations: Vec<EquationFn>) -> Self {
        assert_eq!(endo_sizes.len(), equations.len());
        OracleModel {
            endo_sizes,
            context,
            equations,
        }
    }

    /// Replays an engine setting through its equations one variable at a time.
    pub fn from_setting(setting: &CausalSetting) -> Self {
        let sig = setting.signature();
        let endo_sizes = sig.endogenous().iter().map(|v| v.range().len()).collect();
        let equations = (0..sig.endo_count())
            .map(|i| {
                let model = Arc::clone(setting.model());
                Arc::new(move |exo: &[usize], endo: &[usize]| model.eval_equation(Endo(i), exo, endo))
                    as EquationFn
            })
            .collect();
        OracleModel::new(endo_sizes, setting.context().values().to_vec(), equations)
    }

    pub fn len(&self) -> usize {
        self.endo_sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.endo_sizes.is_empty()
    }

    /// Jacobi iteration from `start` with `iv` held fixed. `None` if no fixed
    /// point is reached within `len + 2` rounds.
    pub fn fixpoint_from(&self, start: &[usize], iv: &[(usize, usize)]) -> Option<Vec<usize>> {
        let mut w = start.to_vec();
        for &(v, x) in iv {
            w[v] = x;
        }
        for _ in 0..self.len() + 2 {
            let next: Vec<usize> = (0..self.len())
                .map(|i| match iv.iter().find(|(v, _)| *v == i) {
                    Some(&(_, x)) => x,
                    None => (self.equations[i])(&self.context, &w),
                })
                .collect();
            if next == w {
                return Some(w);
            }
            w = next;
        }
        None
    }

    /// The world under `iv`, starting from all zeros.
    pub fn solve(&self, iv: &[(usize, usize)]) -> Vec<usize> {
        self.fixpoint_from(&vec![0; self.len()], iv)
            .expect("acyclic models reach a fixed point")
    }
}

/// Boolean combinations of primitive events over endogenous indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prop {
    True,
    False,
    Is(usize, usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn eval(&self, w: &[usize]) -> bool {
        match self {
            Prop::True => true,
            Prop::False => false,
            Prop::Is(v, x) => w[*v] == *x,
            Prop::Not(p) => !p.eval(w),
            Prop::And(l, r) => l.eval(w) && r.eval(w),
            Prop::Or(l, r) => l.eval(w) || r.eval(w),
        }
    }

    pub fn not(self) -> Prop {
        Prop::Not(Box::new(self))
    }

    /// The same formula in the engine's representation.
    pub fn to_formula(&self) -> Formula {
        match self {
            Prop::True => Formula::True,
            Prop::False => Formula::False,
            Prop::Is(v, x) => Formula::event(Endo(*v), *x),
            Prop::Not(p) => Formula::not(p.to_formula()),
            Prop::And(l, r) => Formula::and(l.to_formula(), r.to_formula()),
            Prop::Or(l, r) => Formula::or(l.to_formula(), r.to_formula()),
        }
    }

    /// Fully parenthesized text using `names` and numeric values.
    pub fn text(&self, names: &[String]) -> String {
        match self {
            Prop::True => "true".into(),
            Prop::False => "false".into(),
            Prop::Is(v, x) => format!("{} = {x}", names[*v]),
            Prop::Not(p) => format!("!({})", p.text(names)),
            Prop::And(l, r) => format!("({}) & ({})", l.text(names), r.text(names)),
            Prop::Or(l, r) => format!("({}) | ({})", l.text(names), r.text(names)),
        }
    }

    /// Random formula over the variables in `vars`.
    pub fn random(rng: &mut impl Rng, vars: &[usize], sizes: &[usize], depth: u32) -> Prop {
        let leaf = depth == 0 || rng.gen_bool(0.35);
        if leaf {
            if rng.gen_bool(0.05) {
                return if rng.gen() { Prop::True } else { Prop::False };
            }
            let v = *vars.choose(rng).expect("at least one variable");
            return Prop::Is(v, rng.gen_range(0..sizes[v]));
        }
        match rng.gen_range(0..3) {
            0 => Prop::random(rng, vars, sizes, depth - 1).not(),
            1 => Prop::And(
                Box::new(Prop::random(rng, vars, sizes, depth - 1)),
                Box::new(Prop::random(rng, vars, sizes, depth - 1)),
            ),
            _ => Prop::Or(
                Box::new(Prop::random(rng, vars, sizes, depth - 1)),
                Box::new(Prop::random(rng, vars, sizes, depth - 1)),
            ),
        }
    }
}

/// All assignments over `sizes`, first position most significant.
fn assignments(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

fn bits(mask: u32, pool: &[usize]) -> Vec<usize> {
    pool.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &v)| v)
        .collect()
}

/// AC1 and AC2 for `x` with no minimality check: `x` and `phi` hold, and
/// some `W` outside `x` frozen at actual values plus some `x'` falsify `phi`.
pub fn ac1_ac2(m: &OracleModel, x: &[(usize, usize)], phi: &Prop) -> bool {
    let actual = m.solve(&[]);
    if !x.iter().all(|&(v, val)| actual[v] == val) || !phi.eval(&actual) {
        return false;
    }
    let xs: Vec<usize> = x.iter().map(|&(v, _)| v).collect();
    let rest: Vec<usize> = (0..m.len()).filter(|v| !xs.contains(v)).collect();
    let sizes: Vec<usize> = xs.iter().map(|&v| m.endo_sizes[v]).collect();
    for mask in 0..1u32 << rest.len() {
        for alt in assignments(&sizes) {
            let mut iv: Vec<(usize, usize)> = xs.iter().copied().zip(alt).collect();
            iv.extend(bits(mask, &rest).into_iter().map(|w| (w, actual[w])));
            if !phi.eval(&m.solve(&iv)) {
                return true;
            }
        }
    }
    false
}

/// Whether `x` is an actual cause of `phi`: AC1, AC2, and no nonempty strict
/// subset satisfying both.
pub fn is_cause(m: &OracleModel, x: &[(usize, usize)], phi: &Prop) -> bool {
    if !ac1_ac2(m, x, phi) {
        return false;
    }
    let full = (1u32 << x.len()) - 1;
    (1..full).all(|mask| {
        let sub: Vec<(usize, usize)> = bits(mask, &(0..x.len()).collect::<Vec<_>>())
            .into_iter()
            .map(|i| x[i])
            .collect();
        !ac1_ac2(m, &sub, phi)
    })
}

/// Whether some cause among conjunctions of actually true events contains
/// `X = x`.
pub fn is_part_of_cause(m: &OracleModel, var: usize, value: usize, phi: &Prop) -> bool {
    let actual = m.solve(&[]);
    let rest: Vec<usize> = (0..m.len()).filter(|&v| v != var).collect();
    (0..1u32 << rest.len()).any(|mask| {
        let mut x = vec![(var, value)];
        x.extend(bits(mask, &rest).into_iter().map(|w| (w, actual[w])));
        x.sort_unstable();
        is_cause(m, &x, phi)
    })
}

pub fn but_for(m: &OracleModel, var: usize, phi: &Prop) -> bool {
    (0..m.endo_sizes[var]).any(|x| !phi.eval(&m.solve(&[(var, x)])))
}

/// An epistemic state over oracle models that share variables.
#[derive(Clone)]
pub struct OracleState {
    pub settings: Vec<(OracleModel, Rational)>,
    pub utility: Vec<(Prop, Rational)>,
    pub action: usize,
    pub default_action: usize,
}

impl OracleState {
    pub fn from_scenario(
        settings: &[(CausalSetting, Rational)],
        utility: Vec<(Prop, Rational)>,
        action: usize,
        default_action: usize,
    ) -> Self {
        OracleState {
            settings: settings
                .iter()
                .map(|(s, p)| (OracleModel::from_setting(s), p.clone()))
                .collect(),
            utility,
            action,
            default_action,
        }
    }

    pub fn action_count(&self) -> usize {
        self.settings[0].0.endo_sizes[self.action]
    }

    pub fn u(&self, w: &[usize]) -> Rational {
        let mut total = rational::int(0);
        for (cond, weight) in &self.utility {
            if cond.eval(w) {
                total += weight;
            }
        }
        total
    }

    fn weighted(&self, f: impl Fn(&OracleModel) -> Rational) -> Rational {
        let mut total = rational::int(0);
        for (m, p) in &self.settings {
            total += p * f(m);
        }
        total
    }

    pub fn prob(&self, iv: &[(usize, usize)], phi: &Prop) -> Rational {
        self.weighted(|m| rational::int(phi.eval(&m.solve(iv)) as i64))
    }

    pub fn delta(&self, a: usize, alt: usize, phi: &Prop) -> Rational {
        let d = self.prob(&[(self.action, a)], phi) - self.prob(&[(self.action, alt)], phi);
        d.max(rational::int(0))
    }

    pub fn expected_utility(&self, a: usize) -> Rational {
        self.weighted(|m| self.u(&m.solve(&[(self.action, a)])))
    }

    pub fn pinned_expected_utility(&self, alt: usize, pins: &[usize], a: usize) -> Rational {
        self.weighted(|m| {
            let under_a = m.solve(&[(self.action, a)]);
            let mut iv = vec![(self.action, alt)];
            iv.extend(pins.iter().map(|&v| (v, under_a[v])));
            self.u(&m.solve(&iv))
        })
    }

    /// `u(w_{M, O <- o_{A<-a}, u})` for one setting.
    fn projected(&self, m: &OracleModel, vars: &[usize], a: usize) -> Rational {
        let under_a = m.solve(&[(self.action, a)]);
        let iv: Vec<(usize, usize)> = vars.iter().map(|&v| (v, under_a[v])).collect();
        self.u(&m.solve(&iv))
    }

    /// Whether both cost axioms hold for `oc` in every setting and action.
    pub fn cost_axioms_hold(&self, oc: &[usize]) -> bool {
        self.settings.iter().all(|(m, _)| {
            (0..self.action_count()).all(|a| {
                let full = self.projected(m, oc, a);
                full <= self.u(&m.solve(&[]))
                    && (1..(1u32 << oc.len()) - 1)
                        .all(|mask| full <= self.projected(m, &bits(mask, oc), a))
            })
        })
    }

    pub fn cost(&self, a: usize, oc: &[usize]) -> Rational {
        self.weighted(|m| self.u(&m.solve(&[])) - self.projected(m, oc, a))
    }

    pub fn blame_vs(&self, a: usize, alt: usize, phi: &Prop, n: &Rational, oc: &[usize]) -> Rational {
        let extra = (self.cost(alt, oc) - self.cost(a, oc)).max(rational::int(0));
        self.delta(a, alt, phi) * (n - extra) / n
    }

    pub fn blame(&self, a: usize, phi: &Prop, n: &Rational, oc: &[usize]) -> Rational {
        (0..self.action_count())
            .map(|alt| self.blame_vs(a, alt, phi, n, oc))
            .max()
            .expect("at least one action")
    }

    fn ref_max(&self, reference: &[usize], pins: &[usize], a: usize) -> Rational {
        reference
            .iter()
            .map(|&alt| self.pinned_expected_utility(alt, pins, a))
            .max()
            .expect("nonempty reference set")
    }

    /// Whether some `O' ⊇ vars` with `|O'| <= max_k`, drawn from the
    /// non-action variables, satisfies both intention clauses.
    pub fn intends_to_affect(&self, a: usize, vars: &[usize], reference: &[usize], max_k: usize) -> bool {
        let eu = self.expected_utility(a);
        let pool: Vec<usize> = (0..self.settings[0].0.len())
            .filter(|&v| v != self.action)
            .collect();
        (0..1u32 << pool.len()).any(|mask| {
            let cand = bits(mask, &pool);
            if cand.len() > max_k || !vars.iter().all(|v| cand.contains(v)) {
                return false;
            }
            if eu > self.ref_max(reference, &cand, a) {
                return false;
            }
            let full = (1u32 << cand.len()) - 1;
            (0..full).all(|sub| eu > self.ref_max(reference, &bits(sub, &cand), a))
        })
    }
}

impl OracleState {
    /// `{a0}`, or every other action when `a` is the default.
    pub fn default_reference(&self, a: usize) -> Vec<usize> {
        if a == self.default_action {
            (0..self.action_count()).filter(|&x| x != a).collect()
        } else {
            vec![self.default_action]
        }
    }

    pub fn conjunction(outcome: &[(usize, usize)]) -> Prop {
        outcome
            .iter()
            .map(|&(v, x)| Prop::Is(v, x))
            .reduce(|l, r| Prop::And(Box::new(l), Box::new(r)))
            .unwrap_or(Prop::True)
    }

    /// Intends to affect the outcome's variables, the outcome is possible
    /// under `a`, and no value reachable under `a` scores higher.
    pub fn intends_outcome(
        &self,
        a: usize,
        outcome: &[(usize, usize)],
        reference: &[usize],
        max_k: usize,
    ) -> bool {
        let vars: Vec<usize> = outcome.iter().map(|&(v, _)| v).collect();
        let target: Vec<usize> = outcome.iter().map(|&(_, x)| x).collect();
        if !self.intends_to_affect(a, &vars, reference, max_k) {
            return false;
        }
        let reachable: Vec<Vec<usize>> = self
            .settings
            .iter()
            .map(|(m, _)| {
                let w = m.solve(&[(self.action, a)]);
                vars.iter().map(|&v| w[v]).collect()
            })
            .collect();
        if !reachable.contains(&target) {
            return false;
        }
        let score = |values: &[usize]| {
            let iv: Vec<(usize, usize)> = vars.iter().copied().zip(values.iter().copied()).collect();
            self.weighted(|m| self.u(&m.solve(&iv)))
        };
        let mine = score(&target);
        reachable.iter().all(|r| score(r) <= mine)
    }

    /// Unclamped praise of `a` for the conjunction `outcome`.
    pub fn praise(
        &self,
        a: usize,
        outcome: &[(usize, usize)],
        m: &Rational,
        oc: &[usize],
        reference: &[usize],
        max_k: usize,
    ) -> Rational {
        if !self.intends_outcome(a, outcome, reference, max_k) {
            return rational::int(0);
        }
        let phi = Self::conjunction(outcome);
        let a0 = self.default_action;
        let d = self.delta(a, a0, &phi);
        let c0 = self.cost(a0, oc);
        let least = (0..self.action_count())
            .filter(|&alt| self.delta(alt, a0, &phi) >= d)
            .map(|alt| (m - &c0 + self.cost(alt, oc)) / m)
            .min()
            .expect("a itself qualifies");
        let one = rational::int(1);
        &d + ((&one - &d) * least).max(rational::int(0))
    }
}

/// Where an equation input comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parent {
    Exo(usize),
    Endo(usize),
}

/// A random acyclic model given by truth tables, with a distribution over
/// contexts and an additive utility.
#[derive(Debug, Clone)]
pub struct RandomModel {
    pub exo_count: usize,
    pub endo_sizes: Vec<usize>,
    pub parents: Vec<Vec<Parent>>,
    /// Output per parent assignment, first parent most significant.
    pub tables: Vec<Vec<usize>>,
    pub action: usize,
    pub default_action: usize,
    pub contexts: Vec<(Vec<usize>, Rational)>,
    pub utility: Vec<(Prop, Rational)>,
    pub cost_variables: Vec<usize>,
}

pub struct Shape {
    pub exo: usize,
    pub endo: usize,
    /// Range size of the action variable; other endogenous variables are binary.
    pub actions: usize,
    pub max_parents: usize,
    pub settings: usize,
    pub utility_terms: usize,
}

impl RandomModel {
    pub fn generate(rng: &mut impl Rng, shape: &Shape) -> Self {
        let mut order: Vec<usize> = (0..shape.endo).collect();
        order.shuffle(rng);
        let action = order[0];
        let endo_sizes: Vec<usize> = (0..shape.endo)
            .map(|v| if v == action { shape.actions } else { 2 })
            .collect();
        let mut parents = vec![Vec::new(); shape.endo];
        let mut tables = vec![Vec::new(); shape.endo];
        for (pos, &v) in order.iter().enumerate() {
            let mut pool: Vec<Parent> = (0..shape.exo).map(Parent::Exo).collect();
            pool.extend(order[..pos].iter().map(|&p| Parent::Endo(p)));
            pool.shuffle(rng);
            let k = rng.gen_range(0..=shape.max_parents.min(pool.len()));
            let chosen: Vec<Parent> = pool.into_iter().take(k).collect();
            let rows: usize = chosen
                .iter()
                .map(|p| match p {
                    Parent::Exo(_) => 2,
                    Parent::Endo(q) => endo_sizes[*q],
                })
                .product();
            tables[v] = (0..rows).map(|_| rng.gen_range(0..endo_sizes[v])).collect();
            parents[v] = chosen;
        }
        let weights: Vec<i64> = (0..shape.settings).map(|_| rng.gen_range(1..=6)).collect();
        let total: i64 = weights.iter().sum();
        let contexts = weights
            .iter()
            .map(|&w| {
                let ctx = (0..shape.exo).map(|_| rng.gen_range(0..2)).collect();
                (ctx, rational::ratio(w, total))
            })
            .collect();
        let others: Vec<usize> = (0..shape.endo).filter(|&v| v != action).collect();
        let utility = (0..shape.utility_terms)
            .map(|_| {
                let cond = Prop::random(rng, &others, &endo_sizes, 2);
                (cond, rational::ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3)))
            })
            .collect();
        let cost_variables = others.iter().copied().filter(|_| rng.gen_bool(0.3)).collect();
        RandomModel {
            exo_count: shape.exo,
            endo_sizes,
            parents,
            tables,
            action,
            default_action: rng.gen_range(0..shape.actions),
            contexts,
            utility,
            cost_variables,
        }
    }

    pub fn exo_names(&self) -> Vec<String> {
        (0..self.exo_count).map(|i| format!("U{i}")).collect()
    }

    pub fn endo_names(&self) -> Vec<String> {
        (0..self.endo_sizes.len())
            .map(|i| if i == self.action { "A".to_string() } else { format!("V{i}") })
            .collect()
    }

    fn equation_fn(&self, v: usize) -> EquationFn {
        let parents = self.parents[v].clone();
        let table = self.tables[v].clone();
        let sizes = self.endo_sizes.clone();
        Arc::new(move |exo: &[usize], endo: &[usize]| {
            let mut row = 0;
            for p in &parents {
                let (x, n) = match *p {
                    Parent::Exo(i) => (exo[i], 2),
                    Parent::Endo(q) => (endo[q], sizes[q]),
                };
                row = row * n + x;
            }
            table[row]
        })
    }

    pub fn oracle_model(&self, context: &[usize]) -> OracleModel {
        OracleModel::new(
            self.endo_sizes.clone(),
            context.to_vec(),
            (0..self.endo_sizes.len()).map(|v| self.equation_fn(v)).collect(),
        )
    }

    pub fn oracle_state(&self) -> OracleState {
        OracleState {
            settings: self
                .contexts
                .iter()
                .map(|(ctx, p)| (self.oracle_model(ctx), p.clone()))
                .collect(),
            utility: self.utility.clone(),
            action: self.action,
            default_action: self.default_action,
        }
    }

    fn equation_doc(&self, v: usize, exo: &[String], endo: &[String]) -> EquationDoc {
        let parents = &self.parents[v];
        let table = &self.tables[v];
        if parents.is_empty() {
            return EquationDoc::Expr(table[0].to_string());
        }
        let sizes: Vec<usize> = parents
            .iter()
            .map(|p| match p {
                Parent::Exo(_) => 2,
                Parent::Endo(q) => self.endo_sizes[*q],
            })
            .collect();
        let cases = assignments(&sizes)
            .into_iter()
            .zip(table)
            .filter(|(_, &out)| out != 0)
            .map(|(row, out)| CaseDoc {
                when: parents
                    .iter()
                    .zip(&row)
                    .map(|(p, x)| match p {
                        Parent::Exo(i) => format!("{} = {x}", exo[*i]),
                        Parent::Endo(q) => format!("{} = {x}", endo[*q]),
                    })
                    .collect::<Vec<_>>()
                    .join(" & "),
                value: out.to_string(),
            })
            .collect();
        EquationDoc::Cases(CasesDoc {
            cases,
            default: "0".into(),
        })
    }

    /// The model as a scenario document, with variables declared in index
    /// order and equations as case lists.
    pub fn to_doc(&self, name: &str) -> ScenarioDoc {
        self.to_doc_named(name, &self.exo_names(), &self.endo_names())
    }

    /// As [`RandomModel::to_doc`] with caller-chosen variable names.
    pub fn to_doc_named(&self, name: &str, exo: &[String], endo: &[String]) -> ScenarioDoc {
        let range = |n: usize| (0..n).map(|x| x.to_string()).collect::<Vec<_>>();
        ScenarioDoc {
            name: name.to_string(),
            description: None,
            action_variable: endo[self.action].clone(),
            default_action: self.default_action.to_string(),
            parameters: BTreeMap::new(),
            variables: VariablesDoc {
                exogenous: exo
                    .iter()
                    .map(|n| VariableDoc {
                        name: n.clone(),
                        range: range(2),
                    })
                    .collect(),
                endogenous: endo
                    .iter()
                    .zip(&self.endo_sizes)
                    .map(|(n, &k)| VariableDoc {
                        name: n.clone(),
                        range: range(k),
                    })
                    .collect(),
            },
            equations: (0..endo.len())
                .map(|v| (endo[v].clone(), self.equation_doc(v, exo, endo)))
                .collect(),
            settings: self
                .contexts
                .iter()
                .map(|(ctx, p)| SettingDoc {
                    label: None,
                    context: exo.iter().cloned().zip(ctx.iter().map(|x| x.to_string())).collect(),
                    probability: rational::exact(p),
                    equations: BTreeMap::new(),
                    ranges: BTreeMap::new(),
                })
                .collect(),
            utility: self
                .utility
                .iter()
                .map(|(cond, w)| UtilityTermDoc {
                    when: cond.text(endo),
                    weight: rational::exact(w),
                })
                .collect(),
            cost_variables: self.cost_variables.iter().map(|&v| endo[v].clone()).collect(),
            reference_policy: PolicyDoc::Default,
            n: None,
            m: None,
            max_superset: None,
            outcomes: Vec::new(),
        }
    }
}

/// `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Blame for collapse in the commons: the agent's fishing matters exactly
/// when `m - 1` of the other `n - 1` fish.
pub fn commons_blame(n: u64, m: u64, q: &Rational) -> Rational {
    let others = n - 1;
    let k = m - 1;
    if k > others {
        return rational::int(0);
    }
    let one = rational::int(1);
    let mut p = rational::int(binomial(others, k) as i64);
    for _ in 0..k {
        p *= q;
    }
    for _ in 0..others - k {
        p *= &one - q;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 1), 4);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 3), 0);
    }

    #[test]
    fn commons_closed_form() {
        let half = rational::ratio(1, 2);
        assert_eq!(commons_blame(3, 2, &half), rational::ratio(1, 2));
        assert_eq!(commons_blame(4, 2, &half), rational::ratio(3, 8));
        assert_eq!(commons_blame(5, 2, &half), rational::ratio(1, 4));
    }

    #[test]
    fn chain_model_solves() {
        // V0 = U0, V1 = !V0, V2 = V0 | V1
        let eqs: Vec<EquationFn> = vec![
            Arc::new(|u: &[usize], _: &[usize]| u[0]),
            Arc::new(|_: &[usize], w: &[usize]| 1 - w[0]),
            Arc::new(|_: &[usize], w: &[usize]| w[0] | w[1]),
        ];
        let m = OracleModel::new(vec![2, 2, 2], vec![1], eqs);
        assert_eq!(m.solve(&[]), vec![1, 0, 1]);
        assert_eq!(m.solve(&[(0, 0), (1, 0)]), vec![0, 0, 0]);
        let phi = Prop::Is(2, 1);
        assert!(is_cause(&m, &[(0, 1)], &phi));
        assert!(!but_for(&m, 0, &phi));
        assert!(!is_cause(&m, &[(0, 1), (1, 0)], &phi));
    }
}
