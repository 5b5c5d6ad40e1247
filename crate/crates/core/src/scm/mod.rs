//! Acyclic structural causal models over finite domains.
//!
//! A [`CausalModel`] pairs a [`Signature`] with one equation per endogenous
//! variable. Models are validated when constructed: the endogenous
//! dependency graph must be acyclic and every equation must land in its
//! target's range for every assignment of the variables it reads. A
//! validated model therefore has a unique solution in every [`Context`],
//! and solving never fails.

pub mod expr;
pub mod formula;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
pub use expr::{BinOp, Expr, Scalar};
pub use formula::{CausalFormula, Event, Formula, NamedEvent, ParsedFormula};

/// Index of an endogenous variable in its signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endo(pub usize);

/// Index of an exogenous variable in its signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exo(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarRef {
    Exo(Exo),
    Endo(Endo),
}

/// A named variable with an ordered, finite range of symbolic values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    name: String,
    range: Vec<String>,
    /// Parsed values when every range entry is a base-10 integer.
    ints: Option<Vec<i64>>,
}

impl Variable {
    pub fn new<S: Into<String>>(name: impl Into<String>, range: impl IntoIterator<Item = S>) -> Self {
        let range: Vec<String> = range.into_iter().map(Into::into).collect();
        let ints = range
            .iter()
            .map(|v| v.parse::<i64>().ok())
            .collect::<Option<Vec<_>>>()
            .filter(|v| !v.is_empty());
        Variable {
            name: name.into(),
            range,
            ints,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn range(&self) -> &[String] {
        &self.range
    }

    pub fn is_integer(&self) -> bool {
        self.ints.is_some()
    }

    pub fn value_index(&self, value: &str) -> Option<usize> {
        self.range.iter().position(|v| v == value)
    }

    pub fn scalar(&self, index: usize) -> Scalar<'_> {
        match &self.ints {
            Some(ints) => Scalar::Int(ints[index]),
            None => Scalar::Sym(&self.range[index]),
        }
    }

    /// Maps an expression result back into this variable's range.
    pub fn index_of_scalar(&self, value: Scalar<'_>) -> Option<usize> {
        match (&self.ints, value) {
            (Some(ints), Scalar::Int(n)) => ints.iter().position(|&x| x == n),
            (Some(ints), Scalar::Bool(b)) => ints.iter().position(|&x| x == b as i64),
            (None, Scalar::Bool(b)) => self.value_index(if b { "true" } else { "false" }),
            (None, Scalar::Int(n)) => self.value_index(&n.to_string()),
            (_, Scalar::Sym(s)) => self.value_index(s),
        }
    }
}

/// Exogenous and endogenous variables, their ranges, and the distinguished
/// action variable.
#[derive(Debug, Clone)]
pub struct Signature {
    exogenous: Vec<Variable>,
    endogenous: Vec<Variable>,
    action: Endo,
    index: HashMap<String, VarRef>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.exogenous == other.exogenous
            && self.endogenous == other.endogenous
            && self.action == other.action
    }
}

impl Eq for Signature {}

impl Signature {
    pub fn new(exogenous: Vec<Variable>, endogenous: Vec<Variable>, action: &str) -> Result<Self> {
        let mut index = HashMap::new();
        let all = exogenous
            .iter()
            .enumerate()
            .map(|(i, v)| (v, VarRef::Exo(Exo(i))))
            .chain(
                endogenous
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v, VarRef::Endo(Endo(i)))),
            );
        for (var, r) in all {
            if index.insert(var.name.clone(), r).is_some() {
                return Err(Error::DuplicateVariable(var.name.clone()));
            }
            if var.range.is_empty() {
                return Err(Error::EmptyRange(var.name.clone()));
            }
            for (i, value) in var.range.iter().enumerate() {
                if var.range[..i].contains(value) {
                    return Err(Error::DuplicateValue {
                        variable: var.name.clone(),
                        value: value.clone(),
                    });
                }
            }
        }
        let action = match index.get(action) {
            Some(VarRef::Endo(e)) => *e,
            Some(VarRef::Exo(_)) => return Err(Error::NotEndogenous(action.to_string())),
            None => return Err(Error::UnknownVariable(action.to_string())),
        };
        Ok(Signature {
            exogenous,
            endogenous,
            action,
            index,
        })
    }

    pub fn exogenous(&self) -> &[Variable] {
        &self.exogenous
    }

    pub fn endogenous(&self) -> &[Variable] {
        &self.endogenous
    }

    pub fn action(&self) -> Endo {
        self.action
    }

    pub fn action_values(&self) -> &[String] {
        self.endogenous[self.action.0].range()
    }

    pub fn endo_count(&self) -> usize {
        self.endogenous.len()
    }

    pub fn endo_vars(&self) -> impl Iterator<Item = Endo> {
        (0..self.endogenous.len()).map(Endo)
    }

    pub fn lookup(&self, name: &str) -> Option<VarRef> {
        self.index.get(name).copied()
    }

    pub fn endo(&self, name: &str) -> Result<Endo> {
        match self.lookup(name) {
            Some(VarRef::Endo(e)) => Ok(e),
            Some(VarRef::Exo(_)) => Err(Error::NotEndogenous(name.to_string())),
            None => Err(Error::UnknownVariable(name.to_string())),
        }
    }

    pub fn var(&self, v: Endo) -> &Variable {
        &self.endogenous[v.0]
    }

    pub fn exo_var(&self, v: Exo) -> &Variable {
        &self.exogenous[v.0]
    }

    pub fn name_of(&self, v: VarRef) -> &str {
        match v {
            VarRef::Exo(e) => self.exogenous[e.0].name(),
            VarRef::Endo(e) => self.endogenous[e.0].name(),
        }
    }

    pub fn name(&self, v: Endo) -> &str {
        self.endogenous[v.0].name()
    }

    /// Index of `value` in the range of endogenous `v`.
    pub fn value(&self, v: Endo, value: &str) -> Result<usize> {
        self.var(v)
            .value_index(value)
            .ok_or_else(|| Error::ValueNotInRange {
                variable: self.name(v).to_string(),
                value: value.to_string(),
            })
    }

    pub fn value_name(&self, v: Endo, index: usize) -> &str {
        &self.var(v).range()[index]
    }

    /// Resolves `var=value` text into an event.
    pub fn event(&self, var: &str, value: &str) -> Result<Event> {
        let v = self.endo(var)?;
        Ok(Event {
            var: v,
            value: self.value(v, value)?,
        })
    }
}

/// A complete assignment to the exogenous variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Context {
    values: Vec<usize>,
}

impl Context {
    pub fn new(sig: &Signature, values: Vec<usize>) -> Result<Self> {
        if values.len() != sig.exogenous.len() {
            let missing = sig
                .exogenous
                .get(values.len())
                .map_or_else(String::new, |v| v.name.clone());
            return Err(Error::IncompleteContext(missing));
        }
        for (var, &value) in sig.exogenous.iter().zip(&values) {
            if value >= var.range.len() {
                return Err(Error::ValueNotInRange {
                    variable: var.name.clone(),
                    value: value.to_string(),
                });
            }
        }
        Ok(Context { values })
    }

    pub fn from_names<'a>(
        sig: &Signature,
        assignments: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut values: Vec<Option<usize>> = vec![None; sig.exogenous.len()];
        for (name, value) in assignments {
            let i = match sig.lookup(name) {
                Some(VarRef::Exo(Exo(i))) => i,
                Some(VarRef::Endo(_)) => return Err(Error::NotExogenous(name.to_string())),
                None => return Err(Error::UnknownVariable(name.to_string())),
            };
            let var = &sig.exogenous[i];
            let index = var.value_index(value).ok_or_else(|| Error::ValueNotInRange {
                variable: name.to_string(),
                value: value.to_string(),
            })?;
            if values[i].replace(index).is_some() {
                return Err(Error::RepeatedAssignment(name.to_string()));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::IncompleteContext(sig.exogenous[i].name.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Context { values })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Copy of this context with some exogenous values replaced.
    pub fn with_overrides<'a>(
        &self,
        sig: &Signature,
        overrides: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut values = self.values.clone();
        for (name, value) in overrides {
            let i = match sig.lookup(name) {
                Some(VarRef::Exo(Exo(i))) => i,
                Some(VarRef::Endo(_)) => return Err(Error::NotExogenous(name.to_string())),
                None => return Err(Error::UnknownVariable(name.to_string())),
            };
            values[i] = sig.exogenous[i]
                .value_index(value)
                .ok_or_else(|| Error::ValueNotInRange {
                    variable: name.to_string(),
                    value: value.to_string(),
                })?;
        }
        Ok(Context { values })
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> String {
        let parts: Vec<String> = sig
            .exogenous
            .iter()
            .zip(&self.values)
            .map(|(v, &i)| format!("{}={}", v.name, v.range[i]))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// A complete assignment to the endogenous variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct World {
    signature: Arc<Signature>,
    values: Vec<usize>,
}

impl World {
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn get(&self, v: Endo) -> usize {
        self.values[v.0]
    }

    pub fn value(&self, v: Endo) -> &str {
        self.signature.value_name(v, self.values[v.0])
    }

    pub fn by_name(&self, name: &str) -> Option<&str> {
        let v = self.signature.endo(name).ok()?;
        Some(self.value(v))
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn satisfies(&self, event: &Event) -> bool {
        self.values[event.var.0] == event.value
    }

    pub fn restrict(&self, vars: &[Endo]) -> Vec<usize> {
        vars.iter().map(|v| self.values[v.0]).collect()
    }

    /// `(name, value)` pairs in declaration order.
    pub fn assignments(&self) -> impl Iterator<Item = (&str, &str)> {
        self.signature
            .endo_vars()
            .map(move |v| (self.signature.name(v), self.value(v)))
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .assignments()
            .map(|(n, v)| format!("{n}={v}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `[Y1 <- y1, ..., Yk <- yk]`: distinct endogenous variables set to values.
/// Kept sorted by variable index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Intervention {
    assignments: Vec<(Endo, usize)>,
}

impl Intervention {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(sig: &Signature, pairs: impl IntoIterator<Item = (Endo, usize)>) -> Result<Self> {
        let mut assignments: Vec<(Endo, usize)> = pairs.into_iter().collect();
        assignments.sort_by_key(|(v, _)| *v);
        for w in assignments.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::RepeatedAssignment(sig.name(w[0].0).to_string()));
            }
        }
        for &(v, value) in &assignments {
            if v.0 >= sig.endo_count() {
                return Err(Error::UnknownVariable(format!("#{}", v.0)));
            }
            if value >= sig.var(v).range().len() {
                return Err(Error::ValueNotInRange {
                    variable: sig.name(v).to_string(),
                    value: value.to_string(),
                });
            }
        }
        Ok(Intervention { assignments })
    }

    pub fn from_names<'a>(
        sig: &Signature,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let pairs = pairs
            .into_iter()
            .map(|(n, v)| sig.event(n, v).map(|e| (e.var, e.value)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sig, pairs)
    }

    /// Single assignment `[v <- value]`; `value` must be in range.
    pub fn single(v: Endo, value: usize) -> Self {
        Intervention {
            assignments: vec![(v, value)],
        }
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Endo, usize)> + '_ {
        self.assignments.iter().copied()
    }

    pub fn get(&self, v: Endo) -> Option<usize> {
        self.assignments
            .binary_search_by_key(&v, |(x, _)| *x)
            .ok()
            .map(|i| self.assignments[i].1)
    }

    pub fn vars(&self) -> Vec<Endo> {
        self.assignments.iter().map(|(v, _)| *v).collect()
    }

    /// Union of two interventions over disjoint variables.
    pub fn merged(&self, other: &Intervention, sig: &Signature) -> Result<Self> {
        Self::new(sig, self.iter().chain(other.iter()))
    }

    pub fn display(&self, sig: &Signature) -> String {
        let parts: Vec<String> = self
            .assignments
            .iter()
            .map(|&(v, i)| format!("{} <- {}", sig.name(v), sig.value_name(v, i)))
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

/// How an endogenous variable gets its value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equation {
    Expr(Expr),
    /// Fixed by an intervention; the payload is a range index.
    Constant(usize),
}

/// Largest parent-assignment product checked eagerly per equation.
pub const EQUATION_DOMAIN_LIMIT: u128 = 1 << 22;

/// A validated acyclic causal model.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalModel {
    signature: Arc<Signature>,
    equations: Vec<Equation>,
    order: Vec<Endo>,
}

impl CausalModel {
    /// Builds and validates a model. Every endogenous variable needs exactly
    /// one equation.
    pub fn new(signature: Arc<Signature>, equations: Vec<(Endo, Expr)>) -> Result<Self> {
        let n = signature.endo_count();
        let mut slots: Vec<Option<Expr>> = vec![None; n];
        for (v, e) in equations {
            if v.0 >= n {
                return Err(Error::UnknownVariable(format!("#{}", v.0)));
            }
            if slots[v.0].replace(e).is_some() {
                return Err(Error::RepeatedAssignment(signature.name(v).to_string()));
            }
        }
        let equations = slots
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                e.map(Equation::Expr)
                    .ok_or_else(|| Error::MissingEquation(signature.name(Endo(i)).to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let order = topological_order(&signature, &equations)?;
        for v in signature.endo_vars() {
            if let Equation::Expr(body) = &equations[v.0] {
                check_equation(&signature, v, body)?;
            }
        }
        Ok(CausalModel {
            signature,
            equations,
            order,
        })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    /// A topological order of the endogenous variables.
    pub fn order(&self) -> &[Endo] {
        &self.order
    }

    pub fn equation(&self, v: Endo) -> &Equation {
        &self.equations[v.0]
    }

    /// Evaluates the equation for `v` at an arbitrary full assignment.
    pub fn eval_equation(&self, v: Endo, exo: &[usize], endo: &[usize]) -> usize {
        match &self.equations[v.0] {
            Equation::Constant(c) => *c,
            Equation::Expr(body) => {
                let value = body
                    .eval(&self.signature, exo, endo)
                    .expect("equations are type-checked at construction");
                self.signature
                    .var(v)
                    .index_of_scalar(value)
                    .expect("equations are range-checked at construction")
            }
        }
    }

    /// `M_{Y <- y}`: equations of intervened variables become constants.
    pub fn intervene(&self, iv: &Intervention) -> CausalModel {
        let mut equations = self.equations.clone();
        for (v, value) in iv.iter() {
            equations[v.0] = Equation::Constant(value);
        }
        CausalModel {
            signature: Arc::clone(&self.signature),
            equations,
            order: self.order.clone(),
        }
    }

    pub fn solve(&self, context: &Context) -> World {
        self.solve_with(context, &Intervention::empty())
    }

    /// Solution of `M_{iv}` in `context` without materialising the
    /// intervened model.
    pub fn solve_with(&self, context: &Context, iv: &Intervention) -> World {
        let n = self.signature.endo_count();
        let mut fixed: Vec<Option<usize>> = vec![None; n];
        for (v, value) in iv.iter() {
            fixed[v.0] = Some(value);
        }
        let mut values = vec![0; n];
        for &v in &self.order {
            values[v.0] = match fixed[v.0] {
                Some(value) => value,
                None => self.eval_equation(v, &context.values, &values),
            };
        }
        World {
            signature: Arc::clone(&self.signature),
            values,
        }
    }

    /// True when re-evaluating every equation at `world` reproduces it.
    pub fn is_fixed_point(&self, context: &Context, world: &World) -> bool {
        self.signature
            .endo_vars()
            .all(|v| self.eval_equation(v, &context.values, &world.values) == world.values[v.0])
    }
}

fn topological_order(sig: &Signature, equations: &[Equation]) -> Result<Vec<Endo>> {
    let n = equations.len();
    let parents: Vec<Vec<usize>> = equations
        .iter()
        .enumerate()
        .map(|(i, eq)| match eq {
            Equation::Constant(_) => Ok(Vec::new()),
            Equation::Expr(body) => {
                let mut ps = Vec::new();
                for r in body.references() {
                    if let VarRef::Endo(Endo(p)) = r {
                        if p == i {
                            return Err(Error::SelfReference(sig.name(Endo(i)).to_string()));
                        }
                        ps.push(p);
                    }
                }
                Ok(ps)
            }
        })
        .collect::<Result<_>>()?;

    // Kahn's algorithm, always taking the lowest-index ready variable.
    let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (child, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(child);
        }
    }
    let mut ready: std::collections::BTreeSet<usize> =
        (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(Endo(v));
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    let stuck: Vec<bool> = (0..n).map(|i| indegree[i] > 0).collect();
    let cycle = find_cycle(&parents, &stuck);
    Err(Error::CyclicModel {
        cycle: cycle.into_iter().map(|i| sig.name(Endo(i)).to_string()).collect(),
    })
}

/// Finds one cycle among the `stuck` vertices, following parent edges and
/// reporting it in dependency order.
fn find_cycle(parents: &[Vec<usize>], stuck: &[bool]) -> Vec<usize> {
    let start = stuck.iter().position(|&s| s).expect("a stuck vertex exists");
    // Every stuck vertex has a stuck parent, so walking parents must revisit.
    let mut seen = vec![None; parents.len()];
    let mut path = Vec::new();
    let mut v = start;
    loop {
        if let Some(pos) = seen[v] {
            let mut cycle: Vec<usize> = path[pos..].to_vec();
            cycle.reverse();
            let min = cycle
                .iter()
                .enumerate()
                .min_by_key(|(_, &x)| x)
                .map(|(i, _)| i)
                .unwrap_or(0);
            cycle.rotate_left(min);
            return cycle;
        }
        seen[v] = Some(path.len());
        path.push(v);
        v = *parents[v]
            .iter()
            .find(|&&p| stuck[p])
            .expect("stuck vertices have a stuck parent");
    }
}

/// Evaluates `body` over every assignment of the variables it reads and
/// checks the result lies in the range of `target`.
fn check_equation(sig: &Signature, target: Endo, body: &Expr) -> Result<()> {
    let refs: Vec<VarRef> = body.references().into_iter().collect();
    let sizes: Vec<usize> = refs
        .iter()
        .map(|r| match r {
            VarRef::Exo(e) => sig.exo_var(*e).range().len(),
            VarRef::Endo(e) => sig.var(*e).range().len(),
        })
        .collect();
    let combinations = sizes
        .iter()
        .try_fold(1u128, |acc, &s| acc.checked_mul(s as u128))
        .unwrap_or(u128::MAX);
    if combinations > EQUATION_DOMAIN_LIMIT {
        return Err(Error::DomainTooLarge {
            variable: sig.name(target).to_string(),
            combinations,
            limit: EQUATION_DOMAIN_LIMIT,
        });
    }

    let mut exo = vec![0; sig.exogenous().len()];
    let mut endo = vec![0; sig.endo_count()];
    let mut digits = vec![0usize; refs.len()];
    let describe = |digits: &[usize]| -> String {
        if refs.is_empty() {
            return "(no parents)".to_string();
        }
        refs.iter()
            .zip(digits)
            .map(|(r, &d)| {
                let var = match r {
                    VarRef::Exo(e) => sig.exo_var(*e),
                    VarRef::Endo(e) => sig.var(*e),
                };
                format!("{}={}", var.name(), var.range()[d])
            })
            .collect::<Vec<_>>()
            .join(", ")
    };
    loop {
        for (r, &d) in refs.iter().zip(&digits) {
            match r {
                VarRef::Exo(e) => exo[e.0] = d,
                VarRef::Endo(e) => endo[e.0] = d,
            }
        }
        let value = body.eval(sig, &exo, &endo).map_err(|message| Error::TypeError {
            variable: sig.name(target).to_string(),
            assignment: describe(&digits),
            message,
        })?;
        if sig.var(target).index_of_scalar(value).is_none() {
            return Err(Error::RangeViolation {
                variable: sig.name(target).to_string(),
                assignment: describe(&digits),
                value: value.to_string(),
            });
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(());
            }
            digits[i] += 1;
            if digits[i] < sizes[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// A causal model paired with a context.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalSetting {
    model: Arc<CausalModel>,
    context: Context,
}

impl CausalSetting {
    pub fn new(model: Arc<CausalModel>, context: Context) -> Result<Self> {
        Context::new(model.signature(), context.values.clone())?;
        Ok(CausalSetting { model, context })
    }

    pub fn model(&self) -> &Arc<CausalModel> {
        &self.model
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn signature(&self) -> &Arc<Signature> {
        self.model.signature()
    }

    /// `w_{M,u}`.
    pub fn solve(&self) -> World {
        self.model.solve(&self.context)
    }

    /// `w_{M, iv, u}`.
    pub fn world_under(&self, iv: &Intervention) -> World {
        self.model.solve_with(&self.context, iv)
    }

    /// Values of `vars` when the action variable is set to `action`.
    pub fn outcome_under_action(&self, vars: &[Endo], action: usize) -> Vec<usize> {
        let a = self.signature().action();
        self.world_under(&Intervention::single(a, action))
            .restrict(vars)
    }

    /// `(M, u) |= phi`.
    pub fn holds(&self, phi: &CausalFormula) -> bool {
        phi.body.eval(&self.world_under(&phi.intervention))
    }

    /// The same model in a different context.
    pub fn with_context(&self, context: Context) -> Result<Self> {
        CausalSetting::new(Arc::clone(&self.model), context)
    }

    /// `(M_{iv}, u)`.
    pub fn intervened(&self, iv: &Intervention) -> CausalSetting {
        CausalSetting {
            model: Arc::new(self.model.intervene(iv)),
            context: self.context.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(sig: &Signature, name: &str) -> Expr {
        Expr::Var(sig.lookup(name).unwrap())
    }

    pub(crate) fn trolley() -> CausalSetting {
        let sig = Arc::new(
            Signature::new(
                vec![Variable::new("U", ["0", "1"])],
                vec![
                    Variable::new("A", ["0", "1"]),
                    Variable::new("O1", ["0", "1"]),
                    Variable::new("O2", ["0", "1"]),
                ],
                "A",
            )
            .unwrap(),
        );
        let eqs = vec![
            (sig.endo("O1").unwrap(), Expr::binary(BinOp::Sub, Expr::Int(1), v(&sig, "A"))),
            (sig.endo("O2").unwrap(), v(&sig, "A")),
            (sig.endo("A").unwrap(), v(&sig, "U")),
        ];
        let model = Arc::new(CausalModel::new(Arc::clone(&sig), eqs).unwrap());
        let ctx = Context::from_names(&sig, [("U", "1")]).unwrap();
        CausalSetting::new(model, ctx).unwrap()
    }

    #[test]
    fn trolley_order_and_solution() {
        let s = trolley();
        let sig = s.signature();
        let order: Vec<&str> = s.model().order().iter().map(|&v| sig.name(v)).collect();
        assert_eq!(order[0], "A");
        let w = s.solve();
        assert_eq!(w.to_string(), "{A=1, O1=0, O2=1}");
        assert!(s.model().is_fixed_point(s.context(), &w));
    }

    #[test]
    fn world_under_action_zero() {
        let s = trolley();
        let sig = s.signature().clone();
        let iv = Intervention::from_names(&sig, [("A", "0")]).unwrap();
        assert_eq!(s.world_under(&iv).to_string(), "{A=0, O1=1, O2=0}");
        assert_eq!(s.world_under(&Intervention::empty()), s.solve());
        let o2 = sig.endo("O2").unwrap();
        assert_eq!(s.outcome_under_action(&[o2], 1), vec![1]);
        assert_eq!(s.outcome_under_action(&[], 1), Vec::<usize>::new());
    }

    #[test]
    fn intervened_model_matches_direct_solve() {
        let s = trolley();
        let sig = s.signature().clone();
        let iv = Intervention::from_names(&sig, [("A", "0"), ("O2", "1")]).unwrap();
        assert_eq!(s.intervened(&iv).solve(), s.world_under(&iv));
    }

    #[test]
    fn two_cycle_is_rejected() {
        let sig = Arc::new(
            Signature::new(
                vec![],
                vec![Variable::new("X", ["0", "1"]), Variable::new("Y", ["0", "1"])],
                "X",
            )
            .unwrap(),
        );
        let eqs = vec![(Endo(0), v(&sig, "Y")), (Endo(1), v(&sig, "X"))];
        let err = CausalModel::new(sig, eqs).unwrap_err();
        assert_eq!(
            err,
            Error::CyclicModel {
                cycle: vec!["X".into(), "Y".into()]
            }
        );
    }

    #[test]
    fn longer_cycle_reports_only_the_cycle() {
        let sig = Arc::new(
            Signature::new(
                vec![],
                vec![
                    Variable::new("A", ["0", "1"]),
                    Variable::new("B", ["0", "1"]),
                    Variable::new("C", ["0", "1"]),
                    Variable::new("D", ["0", "1"]),
                ],
                "A",
            )
            .unwrap(),
        );
        // A = B, B = C, C = D, D = B
        let eqs = vec![
            (Endo(0), v(&sig, "B")),
            (Endo(1), v(&sig, "C")),
            (Endo(2), v(&sig, "D")),
            (Endo(3), v(&sig, "B")),
        ];
        match CausalModel::new(sig, eqs).unwrap_err() {
            Error::CyclicModel { cycle } => assert_eq!(cycle, vec!["B", "D", "C"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn overflowing_equation_is_a_range_violation() {
        let sig = Arc::new(
            Signature::new(
                vec![Variable::new("U", ["0", "1"])],
                vec![Variable::new("A", ["0", "1"]), Variable::new("O", ["0", "1"])],
                "A",
            )
            .unwrap(),
        );
        let eqs = vec![
            (Endo(0), v(&sig, "U")),
            (Endo(1), Expr::binary(BinOp::Add, v(&sig, "A"), Expr::Int(1))),
        ];
        assert_eq!(
            CausalModel::new(sig, eqs).unwrap_err(),
            Error::RangeViolation {
                variable: "O".into(),
                assignment: "A=1".into(),
                value: "2".into()
            }
        );
    }

    #[test]
    fn self_reference_and_missing_equations() {
        let sig = Arc::new(
            Signature::new(
                vec![],
                vec![Variable::new("A", ["0", "1"]), Variable::new("B", ["0", "1"])],
                "A",
            )
            .unwrap(),
        );
        let err = CausalModel::new(Arc::clone(&sig), vec![(Endo(0), Expr::Int(0))]).unwrap_err();
        assert_eq!(err, Error::MissingEquation("B".into()));
        let err = CausalModel::new(
            sig.clone(),
            vec![(Endo(0), Expr::Int(0)), (Endo(1), v(&sig, "B"))],
        )
        .unwrap_err();
        assert_eq!(err, Error::SelfReference("B".into()));
    }

    #[test]
    fn signature_rejects_bad_declarations() {
        let dup = Signature::new(
            vec![Variable::new("X", ["0"])],
            vec![Variable::new("X", ["0"])],
            "X",
        );
        assert_eq!(dup.unwrap_err(), Error::DuplicateVariable("X".into()));
        let empty = Signature::new(vec![], vec![Variable::new("A", Vec::<String>::new())], "A");
        assert_eq!(empty.unwrap_err(), Error::EmptyRange("A".into()));
        let exo_action = Signature::new(
            vec![Variable::new("U", ["0"])],
            vec![Variable::new("A", ["0"])],
            "U",
        );
        assert_eq!(exo_action.unwrap_err(), Error::NotEndogenous("U".into()));
        let repeated = Signature::new(vec![], vec![Variable::new("A", ["x", "x"])], "A");
        assert!(matches!(repeated, Err(Error::DuplicateValue { .. })));
    }

    #[test]
    fn contexts_must_be_total_and_in_range() {
        let s = trolley();
        let sig = s.signature();
        assert_eq!(
            Context::from_names(sig, []).unwrap_err(),
            Error::IncompleteContext("U".into())
        );
        assert!(matches!(
            Context::from_names(sig, [("U", "7")]),
            Err(Error::ValueNotInRange { .. })
        ));
        assert_eq!(
            Context::from_names(sig, [("A", "1")]).unwrap_err(),
            Error::NotExogenous("A".into())
        );
    }

    #[test]
    fn interventions_reject_repeats() {
        let s = trolley();
        let sig = s.signature();
        let err = Intervention::from_names(sig, [("A", "0"), ("A", "1")]).unwrap_err();
        assert_eq!(err, Error::RepeatedAssignment("A".into()));
        assert!(matches!(
            Intervention::from_names(sig, [("U", "0")]),
            Err(Error::NotEndogenous(_))
        ));
    }
}
