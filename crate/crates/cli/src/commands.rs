use std::fs;
use std::path::Path;

use moral_core::cause::{but_for, is_part_of_cause_with, CausalityDefinition, CauseCandidate, ModifiedAc};
use moral_core::intention::{
    action_intended, intends_outcome, intends_to_affect, Decision, IntentVerdict, OutcomeVerdict,
    ReferencePolicy,
};
use moral_core::rational::{self, Rational};
use moral_core::responsibility::{blame, praise, BlameReport, PraiseReport};
use moral_core::scenario::{self, syntax, Diagnostic, Scenario, Severity};
use moral_core::scm::{CausalSetting, Endo, Formula};
use moral_core::Error;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::render::{
    pairs_json, pairs_text, rat, rat_json, table, var_names, var_set, world_json,
};
use crate::{Command, IntentArgs, SettingArgs};

pub struct Output {
    pub text: String,
    pub json: Value,
    pub warnings: Vec<Diagnostic>,
    pub code: u8,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub diagnostics: Vec<Diagnostic>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::VariableCap { .. } => 4,
            Error::InvalidCostModel(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
            diagnostics: Vec::new(),
        }
    }
}

fn usage_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
        diagnostics: Vec::new(),
    }
}

type Res<T> = Result<T, Failure>;

fn read(file: &Path) -> Res<String> {
    fs::read_to_string(file).map_err(|e| usage_error(format!("cannot read {}: {e}", file.display())))
}

fn open(file: &Path) -> Res<Scenario> {
    let text = read(file)?;
    scenario::load(&text).map_err(|diagnostics| Failure {
        code: 3,
        message: format!("{} is not a valid scenario", file.display()),
        diagnostics,
    })
}

fn parse_rat(text: &str, flag: &str) -> Res<Rational> {
    rational::parse(text).ok_or_else(|| usage_error(format!("{flag}: `{text}` is not a rational p/q")))
}

fn policy(s: &Scenario, args: &IntentArgs) -> Res<ReferencePolicy> {
    match args.reference.as_deref() {
        None => Ok(s.policy.clone()),
        Some("default") => Ok(ReferencePolicy::DefaultOnly),
        Some("all") => Ok(ReferencePolicy::AllOthers),
        Some(t) => {
            let list = t
                .strip_prefix("list:")
                .ok_or_else(|| usage_error(format!("--ref: expected default, all or list:..., got `{t}`")))?;
            let names: Vec<String> = list
                .split(',')
                .map(str::trim)
                .filter(|n| !n.is_empty())
                .map(String::from)
                .collect();
            if names.is_empty() {
                return Err(usage_error("--ref list: names no actions"));
            }
            Ok(ReferencePolicy::Explicit(names))
        }
    }
}

fn max_k(s: &Scenario, args: &IntentArgs) -> usize {
    args.max_superset.unwrap_or(s.max_superset)
}

fn pick_setting(s: &Scenario, at: &SettingArgs) -> Res<CausalSetting> {
    let base = s.setting(at.setting)?;
    match &at.context {
        None => Ok(base.clone()),
        Some(text) => {
            let pairs = syntax::parse_assignments(text).map_err(|e| usage_error(format!("--context: {e}")))?;
            let ctx = base.context().with_overrides(
                &s.signature,
                pairs.iter().map(|e| (e.var.as_str(), e.value.as_str())),
            )?;
            Ok(base.with_context(ctx)?)
        }
    }
}

fn context_json(s: &Scenario, setting: &CausalSetting) -> Value {
    let mut m = Map::new();
    for (v, &x) in s.signature.exogenous().iter().zip(setting.context().values()) {
        m.insert(v.name().to_string(), Value::String(v.range()[x].clone()));
    }
    Value::Object(m)
}

/// Indices into `s.settings` of the settings in the epistemic state.
fn state_indices(s: &Scenario) -> Vec<usize> {
    s.settings
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.probability.is_zero())
        .map(|(i, _)| i)
        .collect()
}

fn head(name: &str, file: &Path, inputs: Value) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("subcommand".into(), json!(name));
    m.insert("file".into(), json!(file.display().to_string()));
    m.insert("inputs".into(), inputs);
    m
}

fn done(s: &Scenario, text: String, json: Map<String, Value>) -> Output {
    Output {
        text,
        json: Value::Object(json),
        warnings: s.warnings.clone(),
        code: 0,
    }
}

pub fn run(cmd: &Command) -> Res<Output> {
    match cmd {
        Command::Validate { file } => validate(file),
        Command::Eval { file, at, formula } => eval(file, at, formula),
        Command::Cause {
            file,
            at,
            cand,
            outcome,
            max_endogenous,
        } => cause(file, at, cand, outcome, *max_endogenous),
        Command::Blame {
            file,
            action,
            outcome,
            versus,
            n,
        } => blame_cmd(file, action, outcome, versus.as_deref(), n.as_deref()),
        Command::IntendedAction {
            file,
            action,
            setting,
            context,
        } => intended_action(file, action, *setting, context.as_deref()),
        Command::IntendsAffect {
            file,
            action,
            vars,
            intent,
        } => intends_affect(file, action, vars, intent),
        Command::Intends {
            file,
            action,
            outcome,
            intent,
        } => intends(file, action, outcome, intent),
        Command::Praise {
            file,
            action,
            outcome,
            m,
            intent,
        } => praise_cmd(file, action, outcome, m.as_deref(), intent),
        Command::Report { file, action, intent } => report(file, action, intent),
    }
}

fn validate(file: &Path) -> Res<Output> {
    let text = read(file)?;
    let diags = scenario::validate(&text);
    let errors = diags.iter().filter(|d| d.is_error()).count();
    let warnings = diags.len() - errors;
    let valid = errors == 0;
    let summary = format!(
        "{}: {} ({errors} errors, {warnings} warnings)\n",
        file.display(),
        if valid { "valid" } else { "invalid" }
    );
    let mut j = head("validate", file, json!({}));
    j.insert("valid".into(), json!(valid));
    j.insert("errors".into(), json!(errors));
    j.insert("warnings".into(), json!(warnings));
    j.insert("diagnostics".into(), serde_json::to_value(&diags).expect("diagnostics serialize"));
    Ok(Output {
        text: summary,
        json: Value::Object(j),
        warnings: diags,
        code: if valid { 0 } else { 3 },
    })
}

fn eval(file: &Path, at: &SettingArgs, formula: &str) -> Res<Output> {
    let s = open(file)?;
    let setting = pick_setting(&s, at)?;
    let f = s.formula(formula)?;
    let sig = &s.signature;
    let world = setting.solve();
    let holds = setting.holds(&f);
    let mut text = format!("setting {}: {}\n", at.setting, setting.context().display(sig));
    text.push_str(&format!("world: {world}\n"));
    let under = if f.intervention.is_empty() {
        Value::Null
    } else {
        let w = setting.world_under(&f.intervention);
        text.push_str(&format!("world under {}: {w}\n", f.intervention.display(sig)));
        world_json(&w)
    };
    text.push_str(&format!("{}: {holds}\n", f.display(sig)));

    let mut j = head(
        "eval",
        file,
        json!({"setting": at.setting, "context": at.context, "formula": formula}),
    );
    j.insert("context".into(), context_json(&s, &setting));
    j.insert("world".into(), world_json(&world));
    j.insert("world_under".into(), under);
    j.insert("formula".into(), json!(f.display(sig)));
    j.insert("holds".into(), json!(holds));
    Ok(done(&s, text, j))
}

fn cause(file: &Path, at: &SettingArgs, cand: &str, outcome: &str, cap: usize) -> Res<Output> {
    let s = open(file)?;
    let sig = &s.signature;
    let setting = pick_setting(&s, at)?;
    let c = CauseCandidate::new(sig, s.events(cand)?)?;
    let phi = s.plain_formula(outcome)?;
    let def = ModifiedAc { max_endogenous: cap };
    let v = def.check_cause(&setting, &c, &phi)?;

    let single = (c.len() == 1).then(|| c.conjuncts()[0]);
    let bf = match single {
        Some(e) if v.ac1 => Some(but_for(&setting, e, &phi)?),
        _ => None,
    };
    let part = match single {
        Some(e) => is_part_of_cause_with(&def, &setting, e, &phi)?.map(|c| c.display(sig)),
        None => None,
    };

    let verdict = if v.is_cause { "CAUSE" } else { "NOT A CAUSE" };
    let yes = |b: bool| if b { "holds" } else { "fails" };
    let mut text = format!(
        "candidate: {}\noutcome: {}\nsetting {}: {}\n",
        c.display(sig),
        phi.display(sig),
        at.setting,
        setting.context().display(sig)
    );
    text.push_str(&format!("AC1: {}\n", yes(v.ac1)));
    match &v.ac2_witness {
        Some(w) => text.push_str(&format!(
            "AC2: holds, witness W = {{{}}}, x' = ({})\n",
            pairs_text(sig, &w.contingency),
            pairs_text(sig, &w.alternative)
        )),
        None => text.push_str("AC2: fails, no contingency and alternative falsify the outcome\n"),
    }
    match &v.ac3_blocker {
        Some(b) => text.push_str(&format!("AC3: fails, {} already satisfies AC1 and AC2\n", b.display(sig))),
        None => text.push_str("AC3: holds\n"),
    }
    text.push_str(&format!("verdict: {verdict}\n"));
    if let Some(b) = bf {
        text.push_str(&format!("but-for cause: {}\n", if b { "yes" } else { "no" }));
    }
    if single.is_some() {
        match &part {
            Some(p) => text.push_str(&format!("part of a cause: {p}\n")),
            None => text.push_str("part of a cause: no\n"),
        }
    }

    let mut j = head(
        "cause",
        file,
        json!({"setting": at.setting, "context": at.context, "cand": cand, "outcome": outcome, "max_endogenous": cap}),
    );
    j.insert("context".into(), context_json(&s, &setting));
    j.insert("candidate".into(), json!(c.display(sig)));
    j.insert("outcome".into(), json!(phi.display(sig)));
    j.insert("ac1".into(), json!(v.ac1));
    j.insert(
        "ac2_witness".into(),
        match &v.ac2_witness {
            Some(w) => json!({
                "contingency": pairs_json(sig, &w.contingency),
                "alternative": pairs_json(sig, &w.alternative),
            }),
            None => Value::Null,
        },
    );
    j.insert("ac3".into(), json!(v.ac3));
    j.insert("ac3_blocker".into(), json!(v.ac3_blocker.as_ref().map(|b| b.display(sig))));
    j.insert("is_cause".into(), json!(v.is_cause));
    j.insert("verdict".into(), json!(verdict));
    j.insert("but_for".into(), json!(bf));
    j.insert("part_of_cause".into(), json!(part));
    Ok(done(&s, text, j))
}

fn blame_table(s: &Scenario, r: &BlameReport) -> String {
    let e = &s.state;
    let mut rows = vec![vec![
        "alternative".to_string(),
        "delta".into(),
        "c(a)".into(),
        "c(a')".into(),
        "mitigation".into(),
        "db".into(),
    ]];
    for row in &r.rows {
        rows.push(vec![
            e.action_name(row.alternative).to_string(),
            rat(&row.delta),
            rat(&row.cost_action),
            rat(&row.cost_alternative),
            rat(&row.mitigation),
            rat(&row.blame),
        ]);
    }
    table(&rows)
}

fn blame_json(s: &Scenario, r: &BlameReport) -> Value {
    let e = &s.state;
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            json!({
                "alternative": e.action_name(row.alternative),
                "delta": rat_json(&row.delta),
                "cost_action": rat_json(&row.cost_action),
                "cost_alternative": rat_json(&row.cost_alternative),
                "mitigation": rat_json(&row.mitigation),
                "blame": rat_json(&row.blame),
            })
        })
        .collect();
    json!({
        "action": e.action_name(r.action),
        "N": rat_json(&r.n),
        "rows": rows,
        "overall": rat_json(&r.overall),
        "argmax": r.argmax.iter().map(|&a| e.action_name(a)).collect::<Vec<_>>(),
    })
}

fn n_for(s: &Scenario, n: Option<&str>) -> Res<Rational> {
    match n {
        Some(t) => parse_rat(t, "--N"),
        None => s
            .n
            .clone()
            .ok_or_else(|| usage_error("no --N given and the scenario declares no N")),
    }
}

fn blame_cmd(file: &Path, action: &str, outcome: &str, versus: Option<&str>, n: Option<&str>) -> Res<Output> {
    let s = open(file)?;
    let sig = &s.signature;
    let a = s.action(action)?;
    let alt = versus.map(|v| s.action(v)).transpose()?;
    let phi = s.plain_formula(outcome)?;
    let n = n_for(&s, n)?;
    let r = blame(&s.state, a, &phi, &n, &s.cost_model)?;
    let av = sig.name(sig.action());

    let mut text = format!(
        "blame of {av}={action} for {} with N = {}\n",
        phi.display(sig),
        rat(&n)
    );
    text.push_str(&blame_table(&s, &r));
    let mut j = head(
        "blame",
        file,
        json!({"action": action, "outcome": outcome, "versus": versus, "N": rational::exact(&n)}),
    );
    j.insert("outcome".into(), json!(phi.display(sig)));
    j.insert("report".into(), blame_json(&s, &r));
    match alt {
        Some(alt) => {
            let db = &r.rows[alt].blame;
            text.push_str(&format!("versus {}: {}\n", s.state.action_name(alt), rat(db)));
            j.insert("versus".into(), json!(s.state.action_name(alt)));
            j.insert("blame".into(), rat_json(db));
        }
        None => {
            let names: Vec<&str> = r.argmax.iter().map(|&x| s.state.action_name(x)).collect();
            text.push_str(&format!("overall: {}\n", rat(&r.overall)));
            text.push_str(&format!("maximized by: {}\n", names.join(", ")));
            j.insert("blame".into(), rat_json(&r.overall));
        }
    }
    Ok(done(&s, text, j))
}

fn eu_rows(s: &Scenario) -> Res<(String, Value)> {
    let e = &s.state;
    let mut rows = vec![vec!["action".to_string(), "expected utility".into()]];
    let mut js = Vec::new();
    for a in 0..e.action_count() {
        let eu = e.expected_utility(a)?;
        rows.push(vec![e.action_name(a).to_string(), rat(&eu)]);
        js.push(json!({"action": e.action_name(a), "expected_utility": rat_json(&eu)}));
    }
    Ok((table(&rows), Value::Array(js)))
}

fn intended_action(file: &Path, action: &str, setting: Option<usize>, context: Option<&str>) -> Res<Output> {
    let s = open(file)?;
    let e = &s.state;
    let a = s.action(action)?;
    let actual = match (setting, context) {
        (Some(i), context) => Some(pick_setting(
            &s,
            &SettingArgs {
                setting: i,
                context: context.map(String::from),
            },
        )?),
        (None, Some(_)) => return Err(usage_error("--context needs --setting")),
        (None, None) => None,
    };
    let intended = action_intended(e, a, actual.as_ref())?;
    let (mut text, eus) = eu_rows(&s)?;
    let taken = actual
        .as_ref()
        .map(|st| e.action_name(st.solve().get(s.signature.action())).to_string());
    let best = (0..e.action_count())
        .map(|x| e.expected_utility(x))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .max()
        .expect("at least one action");
    let reason = if e.action_count() < 2 {
        "it is the only possible action"
    } else if taken.as_deref().is_some_and(|t| t != action) {
        "a different action was taken"
    } else if intended {
        "it maximizes expected utility"
    } else {
        "another action has higher expected utility"
    };
    if let (Some(i), Some(t)) = (setting, &taken) {
        text.push_str(&format!("action taken in setting {i}: {t}\n"));
    }
    text.push_str(&format!(
        "verdict: {} ({reason})\n",
        if intended { "INTENDED" } else { "NOT INTENDED" }
    ));
    let mut j = head(
        "intended-action",
        file,
        json!({"action": action, "setting": setting, "context": context}),
    );
    j.insert("expected_utilities".into(), eus);
    j.insert("best_expected_utility".into(), rat_json(&best));
    j.insert("taken".into(), json!(taken));
    j.insert("intended".into(), json!(intended));
    j.insert("reason".into(), json!(reason));
    Ok(done(&s, text, j))
}

fn decision_text(s: &Scenario, d: &Decision) -> String {
    match d {
        Decision::Witness => "witness".into(),
        Decision::ExistenceFails => "(a) fails".into(),
        Decision::NotMinimal(sub) => format!("(b) fails: {} suffices", var_set(&s.signature, sub)),
    }
}

fn affect_text(s: &Scenario, a: usize, vars: &[Endo], v: &IntentVerdict) -> String {
    let e = &s.state;
    let sig = &s.signature;
    let refs: Vec<&str> = v.reference.iter().map(|&x| e.action_name(x)).collect();
    let mut text = format!(
        "action: {} (expected utility {})\nreference set: {{{}}}\n",
        e.action_name(a),
        rat(&v.expected_utility),
        refs.join(", ")
    );
    let mut rows = vec![vec![
        "candidate".to_string(),
        "max pinned EU".into(),
        "via".into(),
        "decision".into(),
    ]];
    for t in &v.trace {
        let via: Vec<&str> = t.best_alternatives.iter().map(|&x| e.action_name(x)).collect();
        rows.push(vec![
            var_set(sig, &t.candidate),
            rat(&t.pinned_max),
            via.join(", "),
            decision_text(s, &t.decision),
        ]);
    }
    text.push_str(&table(&rows));
    match &v.witness {
        Some(w) => {
            text.push_str(&format!(
                "intends to affect {}: INTENDED via {}\n",
                var_set(sig, vars),
                var_set(sig, &w.vars)
            ));
            text.push_str(&format!("pinned values under {}:\n", e.action_name(a)));
            for (j, row) in state_indices(s).iter().zip(&w.pinned_values) {
                let pairs: Vec<(Endo, usize)> = w.vars.iter().copied().zip(row.iter().copied()).collect();
                let shown: Vec<String> = pairs
                    .iter()
                    .map(|&(v, x)| format!("{}={}", sig.name(v), sig.value_name(v, x)))
                    .collect();
                text.push_str(&format!("  setting {j}: {}\n", shown.join(", ")));
            }
        }
        None => {
            text.push_str(&format!("intends to affect {}: NOT INTENDED", var_set(sig, vars)));
            if v.inconclusive {
                text.push_str(" (inconclusive: larger supersets were not examined)");
            }
            text.push('\n');
        }
    }
    text
}

fn affect_json(s: &Scenario, v: &IntentVerdict) -> Value {
    let e = &s.state;
    let sig = &s.signature;
    let trace: Vec<Value> = v
        .trace
        .iter()
        .map(|t| {
            let (decision, blocker) = match &t.decision {
                Decision::Witness => ("witness", Value::Null),
                Decision::ExistenceFails => ("existence_fails", Value::Null),
                Decision::NotMinimal(sub) => ("not_minimal", json!(var_names(sig, sub))),
            };
            json!({
                "candidate": var_names(sig, &t.candidate),
                "pinned_max": rat_json(&t.pinned_max),
                "best_alternatives": t.best_alternatives.iter().map(|&x| e.action_name(x)).collect::<Vec<_>>(),
                "decision": decision,
                "blocker": blocker,
            })
        })
        .collect();
    let witness = match &v.witness {
        Some(w) => {
            let rows: Vec<Value> = state_indices(s)
                .iter()
                .zip(&w.pinned_values)
                .map(|(j, row)| {
                    let pairs: Vec<(Endo, usize)> = w.vars.iter().copied().zip(row.iter().copied()).collect();
                    json!({"setting": j, "values": pairs_json(sig, &pairs)})
                })
                .collect();
            json!({"vars": var_names(sig, &w.vars), "pinned_values": rows})
        }
        None => Value::Null,
    };
    json!({
        "intends": v.intends,
        "expected_utility": rat_json(&v.expected_utility),
        "reference": v.reference.iter().map(|&x| e.action_name(x)).collect::<Vec<_>>(),
        "witness": witness,
        "trace": trace,
        "truncated": v.truncated,
        "inconclusive": v.inconclusive,
    })
}

fn intends_affect(file: &Path, action: &str, vars: &str, intent: &IntentArgs) -> Res<Output> {
    let s = open(file)?;
    let a = s.action(action)?;
    let vs = s.vars(vars)?;
    let p = policy(&s, intent)?;
    let k = max_k(&s, intent);
    let v = intends_to_affect(&s.state, a, &vs, &p, k)?;
    let text = affect_text(&s, a, &vs, &v);
    let mut j = head(
        "intends-affect",
        file,
        json!({"action": action, "vars": vars, "ref": intent.reference, "max_superset": k}),
    );
    j.insert("vars".into(), json!(var_names(&s.signature, &vs)));
    j.insert("verdict".into(), affect_json(&s, &v));
    j.insert("intends".into(), json!(v.intends));
    Ok(done(&s, text, j))
}

fn outcome_text(s: &Scenario, a: usize, o: &OutcomeVerdict) -> String {
    let sig = &s.signature;
    let vars: Vec<Endo> = o.outcome.iter().map(|e| e.var).collect();
    let mut text = affect_text(s, a, &vars, &o.affect);
    let yes = |b: bool| if b { "yes" } else { "no" };
    let shown = Formula::conjunction(&o.outcome).display(sig);
    text.push_str(&format!("(a) intends to affect {}: {}\n", var_set(sig, &vars), yes(o.affect.intends)));
    text.push_str(&format!("(b) {shown} possible under {}: {}\n", s.state.action_name(a), yes(o.possible)));
    text.push_str(&format!("(c) {shown} scores highest among reachable values: {}\n", yes(o.best)));
    text.push_str("reachable values:\n");
    for r in &o.reachable {
        let pairs: Vec<(Endo, usize)> = vars.iter().copied().zip(r.values.iter().copied()).collect();
        let cells: Vec<String> = pairs
            .iter()
            .map(|&(v, x)| format!("{}={}", sig.name(v), sig.value_name(v, x)))
            .collect();
        text.push_str(&format!("  {}  score {}\n", cells.join(", "), rat(&r.score)));
    }
    text.push_str(&format!(
        "verdict: {}\n",
        if o.intends { "INTENDED" } else { "NOT INTENDED" }
    ));
    text
}

fn outcome_json(s: &Scenario, o: &OutcomeVerdict) -> Value {
    let sig = &s.signature;
    let vars: Vec<Endo> = o.outcome.iter().map(|e| e.var).collect();
    let reachable: Vec<Value> = o
        .reachable
        .iter()
        .map(|r| {
            let pairs: Vec<(Endo, usize)> = vars.iter().copied().zip(r.values.iter().copied()).collect();
            json!({"values": pairs_json(sig, &pairs), "score": rat_json(&r.score)})
        })
        .collect();
    let pairs: Vec<(Endo, usize)> = o.outcome.iter().map(|e| (e.var, e.value)).collect();
    json!({
        "outcome": pairs_json(sig, &pairs),
        "intends": o.intends,
        "affect": affect_json(s, &o.affect),
        "possible": o.possible,
        "best": o.best,
        "reachable": reachable,
    })
}

fn intends(file: &Path, action: &str, outcome: &str, intent: &IntentArgs) -> Res<Output> {
    let s = open(file)?;
    let a = s.action(action)?;
    let events = s.events(outcome)?;
    let p = policy(&s, intent)?;
    let k = max_k(&s, intent);
    let o = intends_outcome(&s.state, a, &events, &p, k)?;
    let text = outcome_text(&s, a, &o);
    let mut j = head(
        "intends",
        file,
        json!({"action": action, "outcome": outcome, "ref": intent.reference, "max_superset": k}),
    );
    j.insert("verdict".into(), outcome_json(&s, &o));
    j.insert("intends".into(), json!(o.intends));
    Ok(done(&s, text, j))
}

fn m_for(s: &Scenario, m: Option<&str>) -> Res<Rational> {
    match m {
        Some(t) => parse_rat(t, "--M"),
        None => s
            .m
            .clone()
            .ok_or_else(|| usage_error("no --M given and the scenario declares no M")),
    }
}

fn praise_text(s: &Scenario, phi: &Formula, r: &PraiseReport) -> String {
    let e = &s.state;
    let mut text = format!(
        "praise of {} for {} with M = {} (default action {})\n",
        e.action_name(r.action),
        phi.display(&s.signature),
        rat(&r.m),
        e.action_name(r.default_action)
    );
    text.push_str(&format!("intended: {}\n", if r.intention.intends { "yes" } else { "no" }));
    if r.intention.intends {
        text.push_str(&format!("delta versus default: {}\n", rat(&r.delta)));
        text.push_str(&format!("c(default): {}\n", rat(&r.cost_default)));
        let mut rows = vec![vec!["alternative".to_string(), "(M - c(a0) + c(a'))/M".into()]];
        for (alt, f) in &r.candidates {
            rows.push(vec![e.action_name(*alt).to_string(), rat(f)]);
        }
        text.push_str(&table(&rows));
    }
    text.push_str(&format!("raw: {}\n", rat(&r.raw)));
    text.push_str(&format!("praise: {}\n", rat(&r.clamped)));
    text
}

fn praise_json(s: &Scenario, r: &PraiseReport) -> Value {
    let e = &s.state;
    let candidates: Vec<Value> = r
        .candidates
        .iter()
        .map(|(alt, f)| json!({"alternative": e.action_name(*alt), "factor": rat_json(f)}))
        .collect();
    json!({
        "action": e.action_name(r.action),
        "default_action": e.action_name(r.default_action),
        "M": rat_json(&r.m),
        "intention": outcome_json(s, &r.intention),
        "delta": rat_json(&r.delta),
        "cost_default": rat_json(&r.cost_default),
        "candidates": candidates,
        "raw": rat_json(&r.raw),
        "clamped": rat_json(&r.clamped),
    })
}

fn praise_cmd(file: &Path, action: &str, outcome: &str, m: Option<&str>, intent: &IntentArgs) -> Res<Output> {
    let s = open(file)?;
    let a = s.action(action)?;
    let phi = Formula::conjunction(&s.events(outcome)?);
    let m = m_for(&s, m)?;
    let p = policy(&s, intent)?;
    let k = max_k(&s, intent);
    let r = praise(&s.state, a, &phi, &m, &p, k, &s.cost_model)?;
    let text = praise_text(&s, &phi, &r);
    let mut j = head(
        "praise",
        file,
        json!({"action": action, "outcome": outcome, "M": rational::exact(&m), "ref": intent.reference, "max_superset": k}),
    );
    j.insert("report".into(), praise_json(&s, &r));
    j.insert("praise".into(), rat_json(&r.clamped));
    j.insert("raw".into(), rat_json(&r.raw));
    Ok(done(&s, text, j))
}

fn report(file: &Path, action: &str, intent: &IntentArgs) -> Res<Output> {
    let s = open(file)?;
    let e = &s.state;
    let sig = &s.signature;
    let a = s.action(action)?;
    let p = policy(&s, intent)?;
    let k = max_k(&s, intent);

    let (eu_table, eus) = eu_rows(&s)?;
    let intended = action_intended(e, a, None)?;
    let mut text = format!("scenario {} (action {}={action})\n", s.doc.name, sig.name(sig.action()));
    if let Some(d) = &s.doc.description {
        text.push_str(&format!("{d}\n"));
    }
    text.push_str("\nexpected utilities\n");
    text.push_str(&eu_table);
    text.push_str(&format!(
        "{action} intended: {}\n",
        if intended { "yes" } else { "no" }
    ));

    let failed = |err: Error| json!({"error": err.to_string()});
    let mut outcomes = Vec::new();
    for (label, phi) in &s.outcomes {
        text.push_str(&format!("\noutcome {label}\n"));
        let mut entry = Map::new();
        entry.insert("outcome".into(), json!(label));
        entry.insert("formula".into(), json!(phi.display(sig)));

        let blame_v = match &s.n {
            None => {
                text.push_str("blame: no N declared\n");
                Value::Null
            }
            Some(n) => match blame(e, a, phi, n, &s.cost_model) {
                Ok(r) => {
                    text.push_str(&format!("blame with N = {}\n", rat(n)));
                    text.push_str(&blame_table(&s, &r));
                    text.push_str(&format!("overall: {}\n", rat(&r.overall)));
                    blame_json(&s, &r)
                }
                Err(err) => {
                    text.push_str(&format!("blame: {err}\n"));
                    failed(err)
                }
            },
        };
        entry.insert("blame".into(), blame_v);

        let (intent_v, praise_v) = match phi.conjuncts() {
            Err(_) => {
                text.push_str("intention: not a conjunction of events\n");
                (Value::Null, Value::Null)
            }
            Ok(events) => {
                let iv = match intends_outcome(e, a, &events, &p, k) {
                    Ok(o) => {
                        text.push_str(&format!(
                            "intended: {}{}\n",
                            if o.intends { "yes" } else { "no" },
                            match &o.affect.witness {
                                Some(w) => format!(" (affects via {})", var_set(sig, &w.vars)),
                                None => String::new(),
                            }
                        ));
                        outcome_json(&s, &o)
                    }
                    Err(err) => {
                        text.push_str(&format!("intention: {err}\n"));
                        failed(err)
                    }
                };
                let pv = match &s.m {
                    Some(m) if a != e.default_action() => match praise(e, a, phi, m, &p, k, &s.cost_model) {
                        Ok(r) => {
                            text.push_str(&format!(
                                "praise with M = {}: {} (raw {})\n",
                                rat(m),
                                rat(&r.clamped),
                                rat(&r.raw)
                            ));
                            praise_json(&s, &r)
                        }
                        Err(err) => {
                            text.push_str(&format!("praise: {err}\n"));
                            failed(err)
                        }
                    },
                    _ => Value::Null,
                };
                (iv, pv)
            }
        };
        entry.insert("intention".into(), intent_v);
        entry.insert("praise".into(), praise_v);
        outcomes.push(Value::Object(entry));
    }

    let mut j = head(
        "report",
        file,
        json!({"action": action, "ref": intent.reference, "max_superset": k}),
    );
    j.insert("scenario".into(), json!(s.doc.name));
    j.insert("expected_utilities".into(), eus);
    j.insert("intended".into(), json!(intended));
    j.insert("outcomes".into(), Value::Array(outcomes));
    j.insert(
        "warnings".into(),
        json!(s.warnings.iter().filter(|d| d.severity == Severity::Warning).count()),
    );
    Ok(done(&s, text, j))
}
