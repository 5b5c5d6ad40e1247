//! Scenario documents: a JSON encoding of an epistemic state together with
//! cost variables, a reference policy and default query parameters.
//!
//! ```json
//! {
//!   "name": "six",
//!   "action_variable": "A",
//!   "default_action": "0",
//!   "variables": {
//!     "exogenous": [{"name": "U6", "range": ["0", "1"]}],
//!     "endogenous": [{"name": "A", "range": ["0", "1"]}, ...]
//!   },
//!   "equations": {"A": "0", "O6": "if A == 0 then 1 else U6", ...},
//!   "settings": [
//!     {"context": {"U6": "1"}, "probability": "1/5"},
//!     {"context": {"U6": "0"}, "probability": "4/5"}
//!   ],
//!   "utility": [{"when": "O5 = 1", "weight": "-5"}, ...],
//!   "cost_variables": [],
//!   "reference_policy": "default",
//!   "N": "1"
//! }
//! ```
//!
//! Equations are expression strings or `{"cases": [{"when", "value"}],
//! "default"}` lists; a setting may override equations for itself.
//! Probabilities, weights, `N` and `M` are exact rational expressions
//! that may use the document's `parameters`.

pub mod corpus;
pub mod diagnostic;
pub mod locate;
pub mod syntax;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub use diagnostic::{Diagnostic, Severity};

use crate::epistemic::{EpistemicState, UtilityFunction};
use crate::error::{Error, Result};
use crate::intention::{resolve_ref, ReferencePolicy, DEFAULT_MAX_SUPERSET};
use crate::rational::{self, Rational};
use crate::responsibility::{costs, validate_cost_vars, CostAxiom, CostModel};
use crate::scm::{
    CausalFormula, CausalModel, CausalSetting, Context, Endo, Event, Expr, Formula, Signature,
    VarRef, Variable,
};
use locate::escape;
use syntax::{NamedRef, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub action_variable: String,
    pub default_action: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, String>,
    pub variables: VariablesDoc,
    pub equations: BTreeMap<String, EquationDoc>,
    pub settings: Vec<SettingDoc>,
    #[serde(default)]
    pub utility: Vec<UtilityTermDoc>,
    #[serde(default)]
    pub cost_variables: Vec<String>,
    #[serde(default)]
    pub reference_policy: PolicyDoc,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<String>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_superset: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outcomes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariablesDoc {
    #[serde(default)]
    pub exogenous: Vec<VariableDoc>,
    pub endogenous: Vec<VariableDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableDoc {
    pub name: String,
    pub range: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EquationDoc {
    Expr(String),
    Cases(CasesDoc),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CasesDoc {
    pub cases: Vec<CaseDoc>,
    pub default: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseDoc {
    pub when: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default)]
    pub context: BTreeMap<String, String>,
    pub probability: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub equations: BTreeMap<String, EquationDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ranges: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilityTermDoc {
    pub when: String,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyDoc {
    #[default]
    Default,
    All,
    Explicit(Vec<String>),
    DefaultPlus(Vec<String>),
}

impl PolicyDoc {
    pub fn to_policy(&self) -> ReferencePolicy {
        match self {
            PolicyDoc::Default => ReferencePolicy::DefaultOnly,
            PolicyDoc::All => ReferencePolicy::AllOthers,
            PolicyDoc::Explicit(v) => ReferencePolicy::Explicit(v.clone()),
            PolicyDoc::DefaultPlus(v) => ReferencePolicy::DefaultPlus(v.clone()),
        }
    }
}

/// Parses the JSON text of a scenario without checking its semantics.
pub fn parse_scenario(text: &str) -> std::result::Result<ScenarioDoc, Vec<Diagnostic>> {
    serde_json::from_str(text).map_err(|e| {
        let code = match e.classify() {
            serde_json::error::Category::Data => "E002",
            _ => "E001",
        };
        let mut d = Diagnostic::error(code, "", e.to_string());
        if e.line() > 0 {
            d.line = Some(e.line());
            d.column = Some(e.column());
        }
        vec![d]
    })
}

pub fn to_json(doc: &ScenarioDoc) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

/// One declared setting, including those with probability zero.
#[derive(Debug, Clone)]
pub struct LoadedSetting {
    pub label: Option<String>,
    pub setting: CausalSetting,
    pub probability: Rational,
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub doc: ScenarioDoc,
    pub signature: Arc<Signature>,
    pub settings: Vec<LoadedSetting>,
    /// The epistemic state over settings with positive probability.
    pub state: EpistemicState,
    pub cost_model: CostModel,
    pub policy: ReferencePolicy,
    pub n: Option<Rational>,
    pub m: Option<Rational>,
    pub max_superset: usize,
    pub outcomes: Vec<(String, Formula)>,
    pub warnings: Vec<Diagnostic>,
}

/// Parses, compiles and validates scenario text. Diagnostics carry line
/// and column positions.
pub fn load(text: &str) -> std::result::Result<Scenario, Vec<Diagnostic>> {
    let doc = parse_scenario(text)?;
    match compile(&doc) {
        Ok(mut s) => {
            place(text, &mut s.warnings);
            Ok(s)
        }
        Err(mut diags) => {
            place(text, &mut diags);
            Err(diags)
        }
    }
}

/// Every diagnostic for `text`, errors first within each stage.
pub fn validate(text: &str) -> Vec<Diagnostic> {
    match load(text) {
        Ok(s) => s.warnings,
        Err(d) => d,
    }
}

fn place(text: &str, diags: &mut [Diagnostic]) {
    for d in diags {
        if d.line.is_none() {
            if let Some((l, c)) = locate::locate(text, &d.pointer) {
                d.line = Some(l);
                d.column = Some(c);
            }
        }
    }
}

fn code_for(e: &Error) -> &'static str {
    match e {
        Error::DuplicateVariable(_) => "E010",
        Error::UnknownVariable(_) | Error::NotEndogenous(_) | Error::NotExogenous(_) => "E011",
        Error::ValueNotInRange { .. } => "E012",
        Error::EmptyRange(_) => "E013",
        Error::DuplicateValue { .. } => "E014",
        Error::RepeatedAssignment(_) => "E015",
        Error::IncompleteContext(_) => "E017",
        Error::CyclicModel { .. } => "E030",
        Error::RangeViolation { .. } => "E031",
        Error::TypeError { .. } => "E032",
        Error::MissingEquation(_) => "E033",
        Error::SelfReference(_) => "E030",
        Error::DomainTooLarge { .. } => "E034",
        Error::SignatureMismatch => "E040",
        Error::Syntax(_) => "E001",
        _ => "E002",
    }
}

fn ptr(parts: &[&str]) -> String {
    parts.iter().map(|p| format!("/{}", escape(p))).collect()
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(s, "if" | "then" | "else" | "true" | "false")
}

fn syntax_message(what: &str, text: &str, e: &SyntaxError) -> String {
    format!("{what} `{text}`: {e}")
}

struct Compiler<'d> {
    doc: &'d ScenarioDoc,
    diags: Vec<Diagnostic>,
    params: BTreeMap<String, Rational>,
}

impl Compiler<'_> {
    fn error(&mut self, code: &'static str, pointer: String, message: impl Into<String>) {
        let d = Diagnostic::error(code, pointer, message);
        if !self.diags.contains(&d) {
            self.diags.push(d);
        }
    }

    fn warn(&mut self, code: &'static str, pointer: String, message: impl Into<String>) {
        self.diags.push(Diagnostic::warning(code, pointer, message));
    }

    fn has_errors(&self) -> bool {
        self.diags.iter().any(Diagnostic::is_error)
    }

    fn rational(&mut self, text: &str, pointer: String, what: &str) -> Option<Rational> {
        match syntax::parse_rational(text, &self.params) {
            Ok(r) => Some(r),
            Err(e) => {
                self.error("E020", pointer, syntax_message(what, text, &e));
                None
            }
        }
    }

    fn parameters(&mut self) {
        for (name, text) in &self.doc.parameters {
            let pointer = ptr(&["parameters", name]);
            if !is_name(name) {
                self.error("E057", pointer, format!("parameter name `{name}` is not an identifier"));
                continue;
            }
            match syntax::parse_rational(text, &BTreeMap::new()) {
                Ok(v) => {
                    self.params.insert(name.clone(), v);
                }
                Err(e) => self.error("E057", pointer, syntax_message("parameter", text, &e)),
            }
        }
    }

    fn signature(&mut self) -> Option<Arc<Signature>> {
        let doc = self.doc;
        let mut seen: HashMap<&str, ()> = HashMap::new();
        let groups = [("exogenous", &doc.variables.exogenous), ("endogenous", &doc.variables.endogenous)];
        for (kind, vars) in groups {
            for (i, v) in vars.iter().enumerate() {
                let at = ptr(&["variables", kind, &i.to_string()]);
                if !is_name(&v.name) {
                    self.error("E016", format!("{at}/name"), format!("variable name `{}` is not an identifier", v.name));
                }
                if seen.insert(&v.name, ()).is_some() {
                    self.error("E010", format!("{at}/name"), format!("duplicate variable `{}`", v.name));
                }
                if v.range.is_empty() {
                    self.error("E013", format!("{at}/range"), format!("variable `{}` has an empty range", v.name));
                }
                for (j, value) in v.range.iter().enumerate() {
                    if v.range[..j].contains(value) {
                        self.error(
                            "E014",
                            format!("{at}/range/{j}"),
                            format!("variable `{}` lists value `{value}` more than once", v.name),
                        );
                    }
                }
            }
        }
        if self.has_errors() {
            return None;
        }
        let exo = doc.variables.exogenous.iter().map(|v| Variable::new(&v.name, v.range.clone())).collect();
        let endo = doc.variables.endogenous.iter().map(|v| Variable::new(&v.name, v.range.clone())).collect();
        match Signature::new(exo, endo, &doc.action_variable) {
            Ok(sig) => {
                if sig.var(sig.action()).value_index(&doc.default_action).is_none() {
                    self.error(
                        "E050",
                        "/default_action".into(),
                        format!(
                            "default action `{}` is not in the range of `{}`",
                            doc.default_action, doc.action_variable
                        ),
                    );
                }
                Some(Arc::new(sig))
            }
            Err(e @ (Error::UnknownVariable(_) | Error::NotEndogenous(_))) => {
                self.error("E051", "/action_variable".into(), format!("action variable: {e}"));
                None
            }
            Err(e) => {
                self.error(code_for(&e), "/variables".into(), e.to_string());
                None
            }
        }
    }

    fn expr(&mut self, text: &str, sig: &Signature, pointer: &str) -> Option<Expr> {
        let parsed = match syntax::parse_expr(text) {
            Ok(e) => e,
            Err(e) => {
                self.error("E001", pointer.to_string(), syntax_message("expression", text, &e));
                return None;
            }
        };
        match syntax::bind_expr(&parsed, sig) {
            Ok(e) => Some(e),
            Err(NamedRef { name, .. }) => {
                self.error("E011", pointer.to_string(), format!("unknown variable `{name}` in `{text}`"));
                None
            }
        }
    }

    fn equation(&mut self, doc: &EquationDoc, sig: &Signature, pointer: &str) -> Option<Expr> {
        match doc {
            EquationDoc::Expr(text) => self.expr(text, sig, pointer),
            EquationDoc::Cases(c) => {
                let mut acc = self.expr(&c.default, sig, &format!("{pointer}/default"));
                for (i, case) in c.cases.iter().enumerate().rev() {
                    let when = self.expr(&case.when, sig, &format!("{pointer}/cases/{i}/when"));
                    let value = self.expr(&case.value, sig, &format!("{pointer}/cases/{i}/value"));
                    acc = match (when, value, acc) {
                        (Some(w), Some(v), Some(a)) => Some(Expr::ite(w, v, a)),
                        _ => None,
                    };
                }
                acc
            }
        }
    }

    /// Parses a block of equations keyed by variable name.
    fn equations(
        &mut self,
        block: &BTreeMap<String, EquationDoc>,
        sig: &Signature,
        pointer: &str,
    ) -> BTreeMap<Endo, Expr> {
        let mut out = BTreeMap::new();
        for (name, eq) in block {
            let at = format!("{pointer}/{}", escape(name));
            let target = match sig.lookup(name) {
                Some(VarRef::Endo(v)) => v,
                Some(VarRef::Exo(_)) => {
                    self.error("E011", at, format!("`{name}` is exogenous and cannot have an equation"));
                    continue;
                }
                None => {
                    self.error("E011", at, format!("equation for unknown variable `{name}`"));
                    continue;
                }
            };
            if let Some(e) = self.equation(eq, sig, &at) {
                out.insert(target, e);
            }
        }
        out
    }

    fn formula(&mut self, text: &str, sig: &Signature, pointer: String, what: &str) -> Option<Formula> {
        let parsed = match syntax::parse_formula(text) {
            Ok(f) => f,
            Err(e) => {
                self.error("E001", pointer, syntax_message(what, text, &e));
                return None;
            }
        };
        if !parsed.intervention.is_empty() {
            self.error("E056", pointer, format!("{what} `{text}` cannot contain an intervention"));
            return None;
        }
        match parsed.body.bind(sig) {
            Ok(f) => Some(f),
            Err(e) => {
                self.error(code_for(&e), pointer, format!("{what} `{text}`: {e}"));
                None
            }
        }
    }
}

/// Compiles a parsed document. On failure returns every diagnostic found,
/// warnings included.
pub fn compile(doc: &ScenarioDoc) -> std::result::Result<Scenario, Vec<Diagnostic>> {
    let mut c = Compiler {
        doc,
        diags: Vec::new(),
        params: BTreeMap::new(),
    };
    c.parameters();
    let Some(sig) = c.signature() else {
        return Err(c.diags);
    };
    let action = sig.action();
    let base = c.equations(&doc.equations, &sig, "/equations");

    // Models: settings without overrides share one.
    let mut shared: Option<std::result::Result<Arc<CausalModel>, ()>> = None;
    let mut settings = Vec::new();
    for (j, sdoc) in doc.settings.iter().enumerate() {
        let at = format!("/settings/{j}");
        for (name, range) in &sdoc.ranges {
            let rp = format!("{at}/ranges/{}", escape(name));
            let declared = match sig.lookup(name) {
                Some(VarRef::Endo(v)) => sig.var(v).range(),
                Some(VarRef::Exo(v)) => sig.exo_var(v).range(),
                None => {
                    c.error("E011", rp, format!("range for unknown variable `{name}`"));
                    continue;
                }
            };
            if range.as_slice() != declared {
                c.error(
                    "E040",
                    rp,
                    format!(
                        "settings do not share one signature: setting {j} gives `{name}` the range [{}] but it is declared as [{}]",
                        range.join(", "),
                        declared.join(", ")
                    ),
                );
            }
        }
        let model = if sdoc.equations.is_empty() {
            let cached = shared.get_or_insert_with(|| build_model(&mut c, &sig, base.clone(), "/equations"));
            cached.clone().ok()
        } else {
            let mut eqs = base.clone();
            eqs.extend(c.equations(&sdoc.equations, &sig, &format!("{at}/equations")));
            build_model(&mut c, &sig, eqs, &format!("{at}/equations")).ok()
        };
        let context = Context::from_names(
            &sig,
            sdoc.context.iter().map(|(k, v)| (k.as_str(), v.as_str())),
        );
        let context = match context {
            Ok(ctx) => Some(ctx),
            Err(e) => {
                let pointer = match &e {
                    Error::UnknownVariable(n)
                    | Error::NotExogenous(n)
                    | Error::RepeatedAssignment(n)
                    | Error::ValueNotInRange { variable: n, .. } => {
                        format!("{at}/context/{}", escape(n))
                    }
                    _ => format!("{at}/context"),
                };
                c.error(code_for(&e), pointer, format!("setting {j}: {e}"));
                None
            }
        };
        let probability = c.rational(&sdoc.probability, format!("{at}/probability"), "probability");
        if let Some(p) = &probability {
            if p.is_negative() {
                c.error(
                    "E022",
                    format!("{at}/probability"),
                    format!("probability {} is negative", rational::exact(p)),
                );
            }
        }
        if let (Some(model), Some(context), Some(probability)) = (model, context, probability) {
            let setting = CausalSetting::new(model, context).expect("context checked against signature");
            settings.push(LoadedSetting {
                label: sdoc.label.clone(),
                setting,
                probability,
            });
        }
    }
    if settings.len() == doc.settings.len() {
        let total = rational::sum(settings.iter().map(|s| &s.probability));
        if total != Rational::from_integer(1.into()) {
            c.error(
                "E021",
                "/settings".into(),
                format!("probabilities sum to {}, expected 1", rational::exact(&total)),
            );
        }
    }

    let mut terms = Vec::new();
    for (i, t) in doc.utility.iter().enumerate() {
        let at = format!("/utility/{i}");
        let cond = c.formula(&t.when, &sig, format!("{at}/when"), "utility condition");
        let weight = c.rational(&t.weight, format!("{at}/weight"), "weight");
        if let (Some(cond), Some(weight)) = (cond, weight) {
            if cond.vars().contains(&action) {
                c.warn(
                    "W101",
                    format!("{at}/when"),
                    format!("utility condition `{}` mentions the action variable", t.when),
                );
            }
            terms.push((cond, weight));
        }
    }

    let mut cost_vars = Vec::new();
    for (i, name) in doc.cost_variables.iter().enumerate() {
        let at = format!("/cost_variables/{i}");
        match sig.lookup(name) {
            Some(VarRef::Endo(v)) if v != action => cost_vars.push(v),
            Some(VarRef::Endo(_)) => c.error("E052", at, "the action variable cannot be a cost variable"),
            Some(VarRef::Exo(_)) => c.error("E052", at, format!("cost variable `{name}` is exogenous")),
            None => c.error("E052", at, format!("unknown cost variable `{name}`")),
        }
    }

    let policy = doc.reference_policy.to_policy();
    if let ReferencePolicy::Explicit(names) | ReferencePolicy::DefaultPlus(names) = &policy {
        for (i, name) in names.iter().enumerate() {
            if sig.var(action).value_index(name).is_none() {
                let key = match doc.reference_policy {
                    PolicyDoc::Explicit(_) => "explicit",
                    _ => "default_plus",
                };
                c.error(
                    "E053",
                    format!("/reference_policy/{key}/{i}"),
                    format!("reference action `{name}` is not a value of `{}`", doc.action_variable),
                );
            }
        }
    }

    let positive = |x: &Option<String>, key: &str, c: &mut Compiler| -> Option<Rational> {
        let text = x.as_ref()?;
        let v = c.rational(text, format!("/{key}"), key)?;
        if !v.is_positive() {
            c.error("E055", format!("/{key}"), format!("{key} must be positive"));
        }
        Some(v)
    };
    let n = positive(&doc.n, "N", &mut c);
    let m = positive(&doc.m, "M", &mut c);
    if doc.max_superset == Some(0) {
        c.error("E058", "/max_superset".into(), "max_superset must be at least 1");
    }

    let mut outcomes = Vec::new();
    for (i, text) in doc.outcomes.iter().enumerate() {
        if let Some(f) = c.formula(text, &sig, format!("/outcomes/{i}"), "outcome") {
            outcomes.push((text.clone(), f));
        }
    }

    if c.has_errors() {
        return Err(c.diags);
    }

    let default_action = sig
        .var(action)
        .value_index(&doc.default_action)
        .expect("checked above");
    let state = EpistemicState::new(
        settings
            .iter()
            .filter(|s| s.probability.is_positive())
            .map(|s| (s.setting.clone(), s.probability.clone()))
            .collect(),
        UtilityFunction::new(terms),
        default_action,
    );
    let state = match state {
        Ok(s) => s,
        Err(e) => {
            c.error("E021", "/settings".into(), e.to_string());
            return Err(c.diags);
        }
    };

    let action_count = state.action_count();
    if action_count < 2 {
        c.warn(
            "W104",
            "/variables/endogenous".into(),
            format!("`{}` has a single value, so no action can be intended", doc.action_variable),
        );
    } else {
        for a in 0..action_count {
            if a == default_action {
                continue;
            }
            if let Err(e) = resolve_ref(&policy, a, &state) {
                c.error("E054", "/reference_policy".into(), e.to_string());
            }
        }
    }

    for (j, s) in settings.iter().enumerate() {
        if !s.probability.is_positive() {
            continue;
        }
        let taken = s.setting.solve().get(action);
        if taken != default_action {
            c.warn(
                "W102",
                format!("/settings/{j}/context"),
                format!(
                    "setting {j} produces action `{}`, not the default `{}`; its world is used as the cost baseline",
                    sig.value_name(action, taken),
                    doc.default_action
                ),
            );
        }
    }

    let cost_model = validate_cost_vars(&state, &cost_vars).expect("cost variables checked above");
    for v in &cost_model.violations {
        let what = match v.axiom {
            CostAxiom::Costly => format!(
                "u(w) = {} < {} with the cost variables set as under the action",
                rational::exact(&v.compared),
                rational::exact(&v.projected)
            ),
            CostAxiom::Monotone => format!(
                "setting all cost variables gives {} > {} from setting only {{{}}}",
                rational::exact(&v.projected),
                rational::exact(&v.compared),
                v.subset.iter().map(|x| sig.name(*x)).collect::<Vec<_>>().join(", ")
            ),
        };
        c.warn(
            "W103",
            "/cost_variables".into(),
            format!(
                "cost-axiom violation at action={} in setting {}: {what}",
                state.action_name(v.action),
                v.setting
            ),
        );
    }
    if cost_model.validated() {
        let all = costs(&state, &cost_model).expect("validated");
        let top = all.iter().cloned().max().unwrap_or_else(Rational::zero);
        for (key, value) in [("N", &n), ("M", &m)] {
            if let Some(v) = value {
                if *v <= top {
                    c.error(
                        "E055",
                        format!("/{key}"),
                        format!(
                            "{key} = {} must exceed the maximum action cost {}",
                            rational::exact(v),
                            rational::exact(&top)
                        ),
                    );
                }
            }
        }
    }
    if c.has_errors() {
        return Err(c.diags);
    }

    Ok(Scenario {
        doc: doc.clone(),
        signature: sig,
        settings,
        state,
        cost_model,
        policy,
        n,
        m,
        max_superset: doc.max_superset.unwrap_or(DEFAULT_MAX_SUPERSET),
        outcomes,
        warnings: c.diags,
    })
}

fn build_model(
    c: &mut Compiler,
    sig: &Arc<Signature>,
    eqs: BTreeMap<Endo, Expr>,
    pointer: &str,
) -> std::result::Result<Arc<CausalModel>, ()> {
    let missing: Vec<Endo> = sig.endo_vars().filter(|v| !eqs.contains_key(v)).collect();
    if !missing.is_empty() {
        // Equations that failed to parse were already reported.
        if c.has_errors() {
            return Err(());
        }
        for v in missing {
            c.error("E033", pointer.to_string(), format!("no equation for endogenous variable `{}`", sig.name(v)));
        }
        return Err(());
    }
    CausalModel::new(Arc::clone(sig), eqs.into_iter().collect())
        .map(Arc::new)
        .map_err(|e| {
            let at = match &e {
                Error::RangeViolation { variable, .. }
                | Error::TypeError { variable, .. }
                | Error::DomainTooLarge { variable, .. }
                | Error::SelfReference(variable) => format!("{pointer}/{}", escape(variable)),
                _ => pointer.to_string(),
            };
            c.error(code_for(&e), at, e.to_string());
        })
}

impl Scenario {
    pub fn load(text: &str) -> std::result::Result<Self, Vec<Diagnostic>> {
        load(text)
    }

    pub fn setting(&self, index: usize) -> Result<&CausalSetting> {
        self.settings
            .get(index)
            .map(|s| &s.setting)
            .ok_or(Error::NoSuchSetting {
                index,
                count: self.settings.len(),
            })
    }

    pub fn action(&self, name: &str) -> Result<usize> {
        self.state.action(name)
    }

    /// Parses and binds a query formula.
    pub fn formula(&self, text: &str) -> Result<CausalFormula> {
        syntax::parse_formula(text)
            .map_err(|e| Error::Syntax(e.to_string()))?
            .bind(&self.signature)
    }

    /// Parses a formula that must not carry an intervention.
    pub fn plain_formula(&self, text: &str) -> Result<Formula> {
        let f = self.formula(text)?;
        if !f.intervention.is_empty() {
            return Err(Error::Syntax("an intervention is not allowed here".into()));
        }
        Ok(f.body)
    }

    /// Parses `X=x, Y=y`.
    pub fn events(&self, text: &str) -> Result<Vec<Event>> {
        syntax::parse_assignments(text)
            .map_err(|e| Error::Syntax(e.to_string()))?
            .iter()
            .map(|e| self.signature.event(&e.var, &e.value))
            .collect()
    }

    /// Parses a comma-separated list of endogenous variable names.
    pub fn vars(&self, text: &str) -> Result<Vec<Endo>> {
        let names: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        if names.is_empty() {
            return Err(Error::EmptyVariableSet);
        }
        names.into_iter().map(|n| self.signature.endo(n)).collect()
    }

    pub fn cost_variables(&self) -> &[Endo] {
        &self.cost_model.cost_variables
    }
}
