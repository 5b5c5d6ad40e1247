//! The shipped scenarios and the parametric commons family.

use std::collections::BTreeMap;

use super::{
    compile, parse_scenario, PolicyDoc, Scenario, ScenarioDoc, SettingDoc, UtilityTermDoc,
    VariableDoc, VariablesDoc, EquationDoc,
};
use crate::rational::{self, Rational};

macro_rules! corpus {
    ($($name:literal),* $(,)?) => {
        /// `(name, JSON text)` for every shipped scenario.
        pub const CORPUS: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../../scenarios/", $name, ".scn.json")))),*
        ];
    };
}

corpus!(
    "trolley",
    "six",
    "rocks",
    "frankfurt",
    "louis1",
    "louis2",
    "daniel",
    "loop",
    "loop_merged",
    "study",
    "study_acc",
    "shoes",
    "job_choice",
    "bobtom",
    "rescue",
    "doctor",
);

/// Text of a shipped scenario.
pub fn text(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parsed document of a shipped scenario. Panics on unknown names.
pub fn doc(name: &str) -> ScenarioDoc {
    let text = text(name).unwrap_or_else(|| panic!("no corpus scenario `{name}`"));
    parse_scenario(text).unwrap_or_else(|d| panic!("corpus scenario `{name}`: {d:?}"))
}

/// Compiled shipped scenario. Panics on unknown names or invalid files.
pub fn scenario(name: &str) -> Scenario {
    compile(&doc(name)).unwrap_or_else(|d| panic!("corpus scenario `{name}`: {d:?}"))
}

/// Tragedy of the commons with `n` fishermen. The agent chooses to `fish`
/// or `limit`; each of the other `n - 1` fishes independently with
/// probability `q`. The fishery collapses when at least `m` fish.
pub fn commons(n: usize, m: usize, q: &Rational) -> ScenarioDoc {
    assert!(n >= 2, "the commons needs at least two fishermen");
    let others = n - 1;
    let binary = || vec!["0".to_string(), "1".to_string()];
    let exogenous: Vec<VariableDoc> = (1..=others)
        .map(|i| VariableDoc {
            name: format!("F{i}"),
            range: binary(),
        })
        .collect();
    let mut sum = String::from("(A == 'fish')");
    for v in &exogenous {
        sum.push_str(" + ");
        sum.push_str(&v.name);
    }
    let mut equations = BTreeMap::new();
    equations.insert("A".to_string(), EquationDoc::Expr("'limit'".into()));
    equations.insert("collapse".to_string(), EquationDoc::Expr(format!("{sum} >= {m}")));

    let mut settings = Vec::new();
    for mask in 0u64..(1u64 << others) {
        let mut context = BTreeMap::new();
        let mut factors = Vec::new();
        for i in 0..others {
            let fishes = mask >> i & 1 == 1;
            context.insert(format!("F{}", i + 1), if fishes { "1" } else { "0" }.to_string());
            factors.push(if fishes { "q" } else { "(1 - q)" });
        }
        settings.push(SettingDoc {
            label: None,
            context,
            probability: factors.join(" * "),
            equations: BTreeMap::new(),
            ranges: BTreeMap::new(),
        });
    }
    let mut parameters = BTreeMap::new();
    parameters.insert("q".to_string(), rational::exact(q));

    ScenarioDoc {
        name: format!("commons_{n}_{m}"),
        description: Some(format!(
            "{n} fishermen; the fishery collapses when at least {m} fish; others fish with probability q"
        )),
        action_variable: "A".into(),
        default_action: "limit".into(),
        parameters,
        variables: VariablesDoc {
            exogenous,
            endogenous: vec![
                VariableDoc {
                    name: "A".into(),
                    range: vec!["fish".into(), "limit".into()],
                },
                VariableDoc {
                    name: "collapse".into(),
                    range: binary(),
                },
            ],
        },
        equations,
        settings,
        utility: vec![UtilityTermDoc {
            when: "collapse = 1".into(),
            weight: "-1".into(),
        }],
        cost_variables: Vec::new(),
        reference_policy: PolicyDoc::Default,
        n: Some("1".into()),
        m: None,
        max_superset: None,
        outcomes: vec!["collapse = 1".into()],
    }
}
