use std::sync::Arc;

use moral_core::intention::{intends_to_affect, ReferencePolicy};
use moral_core::rational::{int, Rational};
use moral_core::responsibility::blame;
use moral_core::scenario::{corpus, Scenario};

/// Expected utilities, blame for each declared outcome and each
/// single-variable intention verdict, in a fixed order.
fn digest(s: &Scenario) -> Vec<String> {
    let e = &s.state;
    let mut out = Vec::new();
    let n = s.n.clone().unwrap_or_else(|| int(1_000_000));
    for a in 0..e.action_count() {
        out.push(e.expected_utility(a).unwrap().to_string());
        for (_, phi) in &s.outcomes {
            let r: Rational = blame(e, a, phi, &n, &s.cost_model).unwrap().overall;
            out.push(r.to_string());
        }
        for v in s.signature.endo_vars().filter(|&v| v != s.signature.action()) {
            match intends_to_affect(e, a, &[v], &ReferencePolicy::AllOthers, 3) {
                Ok(x) => out.push(format!("{} {}", x.intends, x.trace.len())),
                Err(err) => out.push(err.to_string()),
            }
        }
    }
    out
}

#[test]
fn parallel_queries_match_sequential_ones() {
    let scenarios: Vec<Arc<Scenario>> = corpus::CORPUS
        .iter()
        .map(|(name, _)| Arc::new(corpus::scenario(name)))
        .collect();
    let sequential: Vec<Vec<String>> = scenarios.iter().map(|s| digest(s)).collect();
    let parallel: Vec<Vec<Vec<String>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let scenarios = &scenarios;
                scope.spawn(move || scenarios.iter().map(|s| digest(s)).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    for run in parallel {
        assert_eq!(run, sequential);
    }
}

#[test]
fn shared_types_are_thread_safe() {
    fn check<T: Send + Sync>() {}
    check::<Scenario>();
    check::<moral_core::epistemic::EpistemicState>();
    check::<moral_core::scm::CausalSetting>();
}
