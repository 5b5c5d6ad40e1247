mod common;

use moral_core::epistemic::EpistemicState;
use moral_core::intention::{
    action_intended, intends_outcome, intends_to_affect, resolve_ref, Decision, IntentVerdict,
    ReferencePolicy, DEFAULT_MAX_SUPERSET,
};
use moral_core::scenario::{corpus, load, Scenario};
use moral_core::scm::Endo;
use moral_core::Error;
use proptest::prelude::*;
use rand::Rng;

fn names(s: &Scenario, vars: &[Endo]) -> Vec<String> {
    vars.iter().map(|&v| s.signature.name(v).to_string()).collect()
}

fn affect(s: &Scenario, action: &str, vars: &str, policy: &ReferencePolicy) -> IntentVerdict {
    let v = intends_to_affect(
        &s.state,
        s.action(action).unwrap(),
        &s.vars(vars).unwrap(),
        policy,
        DEFAULT_MAX_SUPERSET,
    )
    .unwrap();
    check_verdict(&s.state, s.action(action).unwrap(), &v);
    v
}

fn witness(s: &Scenario, v: &IntentVerdict) -> Vec<String> {
    names(s, &v.witness.as_ref().expect("a witness").vars)
}

fn outcome(s: &Scenario, action: &str, text: &str, policy: &ReferencePolicy) -> bool {
    intends_outcome(
        &s.state,
        s.action(action).unwrap(),
        &s.events(text).unwrap(),
        policy,
        DEFAULT_MAX_SUPERSET,
    )
    .unwrap()
    .intends
}

/// Re-derives both clauses for a witness and checks the trace order.
fn check_verdict(e: &EpistemicState, a: usize, v: &IntentVerdict) {
    let eu = e.expected_utility(a).unwrap();
    let ref_max = |pins: &[Endo]| {
        v.reference
            .iter()
            .map(|&alt| e.pinned_expected_utility(alt, pins, a).unwrap())
            .max()
            .unwrap()
    };
    assert!(!v.reference.contains(&a));
    if let Some(w) = &v.witness {
        assert!(eu <= ref_max(&w.vars));
        for mask in 0..(1u32 << w.vars.len()) - 1 {
            let sub: Vec<Endo> = (0..w.vars.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| w.vars[i])
                .collect();
            assert!(eu > ref_max(&sub));
        }
        let last = v.trace.last().unwrap();
        assert_eq!(last.decision, Decision::Witness);
        assert_eq!(last.candidate, w.vars);
        for entry in &v.trace[..v.trace.len() - 1] {
            assert_ne!(entry.decision, Decision::Witness);
        }
    }
    for entry in &v.trace {
        assert_eq!(entry.pinned_max, ref_max(&entry.candidate));
        match &entry.decision {
            Decision::ExistenceFails => assert!(eu > entry.pinned_max),
            Decision::NotMinimal(sub) => {
                assert!(eu <= entry.pinned_max);
                assert!(sub.len() < entry.candidate.len());
                assert!(eu <= ref_max(sub));
            }
            Decision::Witness => assert!(eu <= entry.pinned_max),
        }
    }
    for pair in v.trace.windows(2) {
        assert!(pair[0].candidate.len() <= pair[1].candidate.len());
    }
    assert_eq!(v.inconclusive, v.truncated && !v.intends);
}

#[test]
fn reference_sets() {
    let s = corpus::scenario("daniel");
    let e = &s.state;
    let p1 = s.action("p1").unwrap();
    let idx = |ns: &[&str]| {
        let mut v: Vec<usize> = ns.iter().map(|n| s.action(n).unwrap()).collect();
        v.sort();
        v
    };
    assert_eq!(resolve_ref(&ReferencePolicy::AllOthers, p1, e).unwrap(), idx(&["p2", "nothing"]));
    assert_eq!(resolve_ref(&ReferencePolicy::DefaultOnly, p1, e).unwrap(), idx(&["nothing"]));
    let nothing = s.action("nothing").unwrap();
    assert_eq!(resolve_ref(&ReferencePolicy::DefaultOnly, nothing, e).unwrap(), idx(&["p1", "p2"]));
    let own = ReferencePolicy::Explicit(vec!["p1".into()]);
    assert!(matches!(resolve_ref(&own, p1, e), Err(Error::EmptyReferenceSet(_))));
    let plus = ReferencePolicy::DefaultPlus(vec!["p1".into(), "p2".into()]);
    assert_eq!(resolve_ref(&plus, p1, e).unwrap(), idx(&["p2", "nothing"]));
}

#[test]
fn intended_actions() {
    let s = corpus::scenario("daniel");
    let (p1, p2) = (s.action("p1").unwrap(), s.action("p2").unwrap());
    assert!(action_intended(&s.state, p1, None).unwrap());
    assert!(!action_intended(&s.state, p2, None).unwrap());
    // The only setting has A = nothing.
    assert!(!action_intended(&s.state, p1, Some(s.setting(0).unwrap())).unwrap());

    let seizure = r#"{"name": "seizure", "action_variable": "A", "default_action": "seize",
        "variables": {"endogenous": [{"name": "A", "range": ["seize"]}, {"name": "H", "range": ["0", "1"]}]},
        "equations": {"A": "'seize'", "H": "1"},
        "settings": [{"probability": "1"}],
        "utility": [{"when": "H = 1", "weight": "-1"}]}"#;
    let s = load(seizure).unwrap();
    assert_eq!(s.warnings[0].code, "W104");
    assert!(!action_intended(&s.state, 0, None).unwrap());
}

#[test]
fn louis_pair() {
    let policy = ReferencePolicy::DefaultOnly;
    let s = corpus::scenario("louis1");
    let v = affect(&s, "bomb", "D_R", &policy);
    assert_eq!(witness(&s, &v), ["D_R"]);
    assert!(!affect(&s, "bomb", "D_S", &policy).intends);
    assert!(!outcome(&s, "bomb", "D_S=1", &policy));

    let s = corpus::scenario("louis2");
    let v = affect(&s, "bomb", "D_S", &policy);
    assert_eq!(witness(&s, &v), ["D_R", "D_S"]);
    assert!(outcome(&s, "bomb", "D_R=1", &policy));
    assert!(outcome(&s, "bomb", "D_S=1", &policy));
    let both = intends_outcome(
        &s.state,
        s.action("bomb").unwrap(),
        &s.events("D_R=1").unwrap(),
        &policy,
        3,
    )
    .unwrap();
    assert_eq!(both.reachable.len(), 1);
    assert!(both.possible && both.best);
}

#[test]
fn daniel_depends_on_the_reference_set() {
    let s = corpus::scenario("daniel");
    let all = affect(&s, "p1", "S", &ReferencePolicy::AllOthers);
    assert_eq!(witness(&s, &all), ["S"]);
    assert!(!affect(&s, "p1", "C", &ReferencePolicy::AllOthers).intends);
    let default = affect(&s, "p1", "S", &ReferencePolicy::DefaultOnly);
    assert_eq!(witness(&s, &default), ["C", "S"]);
    let default = affect(&s, "p1", "C", &ReferencePolicy::DefaultOnly);
    assert_eq!(witness(&s, &default), ["C", "S"]);
}

#[test]
fn loop_pair() {
    let p = ReferencePolicy::DefaultOnly;
    let s = corpus::scenario("loop");
    let th = affect(&s, "1", "TH", &p);
    assert_eq!(witness(&s, &th), ["TH"]);
    let d = affect(&s, "1", "D", &p);
    assert!(!d.intends);
    for pair in [["D", "TS"], ["D", "TH"]] {
        let entry = d.trace.iter().find(|t| names(&s, &t.candidate) == pair).unwrap();
        assert!(matches!(entry.decision, Decision::NotMinimal(_)));
    }
    assert!(outcome(&s, "1", "TH=1", &p));
    assert!(!outcome(&s, "1", "D=1", &p));

    let s = corpus::scenario("loop_merged");
    assert!(outcome(&s, "1", "D=1", &p));
}

#[test]
fn study_pair() {
    let p = ReferencePolicy::DefaultOnly;
    let s = corpus::scenario("study");
    assert!(!affect(&s, "s", "J", &p).intends);
    assert_eq!(witness(&s, &affect(&s, "s", "G", &p)), ["G"]);
    let s = corpus::scenario("study_acc");
    assert_eq!(witness(&s, &affect(&s, "s", "J", &p)), ["Acc", "J"]);
}

#[test]
fn shoes_pair() {
    let s = corpus::scenario("shoes");
    let narrow = ReferencePolicy::DefaultOnly;
    assert_eq!(witness(&s, &affect(&s, "save_G", "G", &narrow)), ["G"]);
    assert!(!affect(&s, "save_G", "Shoes", &narrow).intends);
    assert_eq!(s.policy, ReferencePolicy::DefaultPlus(vec!["save_TJ".into()]));
    assert_eq!(witness(&s, &affect(&s, "save_G", "G", &s.policy)), ["G"]);
    assert_eq!(witness(&s, &affect(&s, "save_G", "Shoes", &s.policy)), ["Shoes"]);
}

#[test]
fn job_choice_pair() {
    let s = corpus::scenario("job_choice");
    let a3 = ReferencePolicy::Explicit(vec!["a3".into()]);
    let a2 = ReferencePolicy::Explicit(vec!["a2".into()]);
    assert_eq!(witness(&s, &affect(&s, "a1", "Money", &a3)), ["GF", "Money"]);
    assert_eq!(witness(&s, &affect(&s, "a1", "GF", &a3)), ["GF", "Money"]);
    assert_eq!(witness(&s, &affect(&s, "a1", "GF", &a2)), ["GF"]);
    assert!(!affect(&s, "a1", "Money", &a2).intends);
}

#[test]
fn doctor_did_not_intend_the_death() {
    let s = corpus::scenario("doctor");
    let p = ReferencePolicy::DefaultOnly;
    let died = intends_outcome(
        &s.state,
        s.action("operate").unwrap(),
        &s.events("O=died").unwrap(),
        &p,
        3,
    )
    .unwrap();
    assert!(died.affect.intends && died.possible && !died.best && !died.intends);
    assert!(outcome(&s, "operate", "O=cured", &p));
}

#[test]
fn argument_errors() {
    let s = corpus::scenario("loop");
    let e = &s.state;
    let p = ReferencePolicy::DefaultOnly;
    assert!(matches!(intends_to_affect(e, 1, &[], &p, 3), Err(Error::EmptyVariableSet)));
    let a = s.signature.action();
    assert!(matches!(intends_to_affect(e, 1, &[a], &p, 3), Err(Error::ActionVariableNotAllowed)));
    let many = s.vars("TH, D").unwrap();
    assert!(matches!(intends_to_affect(e, 1, &many, &p, 1), Err(Error::SupersetBound { .. })));
    let v = intends_to_affect(e, 1, &s.vars("D").unwrap(), &p, 1).unwrap();
    assert!(v.truncated && v.inconclusive);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn verdicts_match_the_oracle(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let shape = common::small_shape(&mut rng);
        let (model, s) = common::random_case(&mut rng, &shape);
        let oracle = model.oracle_state();
        let e = &s.state;
        let others: Vec<usize> = (0..model.endo_sizes.len()).filter(|&v| v != model.action).collect();
        let max_k = rng.gen_range(1..=others.len().max(1));
        for a in 0..e.action_count() {
            let reference = oracle.default_reference(a);
            let v = others[rng.gen_range(0..others.len())];
            let verdict = intends_to_affect(e, a, &[Endo(v)], &ReferencePolicy::DefaultOnly, max_k).unwrap();
            check_verdict(e, a, &verdict);
            prop_assert_eq!(verdict.reference.clone(), reference.clone());
            prop_assert_eq!(verdict.intends, oracle.intends_to_affect(a, &[v], &reference, max_k));

            let x = rng.gen_range(0..model.endo_sizes[v]);
            let o = intends_outcome(
                e,
                a,
                &[moral_core::scm::Event { var: Endo(v), value: x }],
                &ReferencePolicy::DefaultOnly,
                max_k,
            )
            .unwrap();
            prop_assert_eq!(o.intends, oracle.intends_outcome(a, &[(v, x)], &reference, max_k));

            let all = ReferencePolicy::AllOthers;
            let wide = intends_to_affect(e, a, &[Endo(v)], &all, max_k).unwrap();
            let others_ref: Vec<usize> = (0..e.action_count()).filter(|&b| b != a).collect();
            prop_assert_eq!(wide.intends, oracle.intends_to_affect(a, &[v], &others_ref, max_k));
        }
    }
}
