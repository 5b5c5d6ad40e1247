//! Acceptance run: one PASS/FAIL line per criterion, each under five seconds.

use std::any::Any;
use std::panic::{self, catch_unwind};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use moral_core::cause::{but_for, check_cause, is_part_of_cause, CauseCandidate};
use moral_core::intention::{intends_outcome, intends_to_affect, IntentVerdict, ReferencePolicy};
use moral_core::rational::{int, ratio, Rational};
use moral_core::responsibility::{blame, blame_vs, cost, praise};
use moral_core::scenario::{compile, corpus, Scenario};
use moral_core::scm::{CausalFormula, CausalSetting, Endo, Event, Formula, Intervention};
use moral_oracle::{binomial, OracleModel, OracleState, Prop, RandomModel, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT: Duration = Duration::from_secs(5);
const PROPERTY_CASES: u64 = 1000;

fn main() {
    let criteria: [(&str, fn()); 14] = [
        ("trolley: pulling is fully blameworthy for O2=1", trolley),
        ("six victims: 4/5 for O6=1, 0 for O5=1", six_victims),
        ("frankfurt: blame 1 - p, still intended at p = 1", frankfurt),
        ("actual causation: witnesses and naive enumerator agreement", actual_causation),
        ("louis pair", louis),
        ("daniel: reference-set sensitivity", daniel),
        ("loop pair", loop_pair),
        ("study pair", study),
        ("shoes pair", shoes),
        ("bob/tom: cost mitigation", bobtom),
        ("commons: blame falls as n grows", commons),
        ("rescue: praise clamping", rescue),
        ("property suites", properties),
        ("determinism of --json output", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(check);
        let took = start.elapsed();
        let verdict = match result {
            Ok(()) if took <= LIMIT => "PASS".to_string(),
            Ok(()) => format!("FAIL (over the {}s limit)", LIMIT.as_secs()),
            Err(payload) => format!("FAIL ({})", message(payload)),
        };
        if verdict != "PASS" {
            failures += 1;
        }
        println!("{verdict} {:>2} {name} [{:.2}s]", i + 1, took.as_secs_f64());
    }
    let _ = panic::take_hook();
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

fn message(payload: Box<dyn Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic".into()
    }
}

fn prop_of(f: &Formula) -> Prop {
    match f {
        Formula::True => Prop::True,
        Formula::False => Prop::False,
        Formula::Event(e) => Prop::Is(e.var.0, e.value),
        Formula::Not(g) => prop_of(g).not(),
        Formula::And(l, r) => Prop::And(Box::new(prop_of(l)), Box::new(prop_of(r))),
        Formula::Or(l, r) => Prop::Or(Box::new(prop_of(l)), Box::new(prop_of(r))),
    }
}

/// The brute-force view of a loaded scenario's epistemic state.
fn oracle_for(s: &Scenario) -> OracleState {
    let utility = s
        .state
        .utility()
        .terms()
        .iter()
        .map(|(f, w)| (prop_of(f), w.clone()))
        .collect();
    OracleState::from_scenario(
        s.state.settings(),
        utility,
        s.signature.action().0,
        s.state.default_action(),
    )
}

fn oc(s: &Scenario) -> Vec<usize> {
    s.cost_variables().iter().map(|v| v.0).collect()
}

fn with_param(name: &str, key: &str, value: &str) -> Scenario {
    let mut doc = corpus::doc(name);
    doc.parameters.insert(key.into(), value.into());
    compile(&doc).unwrap()
}

fn names(s: &Scenario, vars: &[Endo]) -> Vec<String> {
    vars.iter().map(|&v| s.signature.name(v).to_string()).collect()
}

fn affect(s: &Scenario, action: &str, vars: &str, policy: &ReferencePolicy) -> IntentVerdict {
    intends_to_affect(&s.state, s.action(action).unwrap(), &s.vars(vars).unwrap(), policy, 3).unwrap()
}

fn witness(s: &Scenario, v: &IntentVerdict) -> Vec<String> {
    names(s, &v.witness.as_ref().expect("a witness").vars)
}

fn intends(s: &Scenario, action: &str, outcome: &str, policy: &ReferencePolicy) -> bool {
    intends_outcome(&s.state, s.action(action).unwrap(), &s.events(outcome).unwrap(), policy, 3)
        .unwrap()
        .intends
}

fn trolley() {
    let s = corpus::scenario("trolley");
    let pull = s.action("1").unwrap();
    let phi = s.plain_formula("O2 = 1").unwrap();
    assert!(s.cost_variables().is_empty());
    for n in [ratio(1, 100), ratio(1, 2), int(1), int(5), int(1000)] {
        let r = blame(&s.state, pull, &phi, &n, &s.cost_model).unwrap();
        assert_eq!(r.overall, int(1), "N = {n}");
    }
}

fn six_victims() {
    let s = corpus::scenario("six");
    let no_pull = s.action("0").unwrap();
    let o6 = s.plain_formula("O6 = 1").unwrap();
    let o5 = s.plain_formula("O5 = 1").unwrap();
    let r6 = blame(&s.state, no_pull, &o6, &int(1), &s.cost_model).unwrap().overall;
    let r5 = blame(&s.state, no_pull, &o5, &int(1), &s.cost_model).unwrap().overall;
    assert_eq!(r6, ratio(4, 5));
    assert_eq!(r5, int(0));

    let oracle = oracle_for(&s);
    assert_eq!(oracle.settings.len(), 2);
    assert_eq!(oracle.blame(no_pull, &prop_of(&o6), &int(1), &oc(&s)), ratio(4, 5));
    assert_eq!(oracle.blame(no_pull, &prop_of(&o5), &int(1), &oc(&s)), int(0));
}

fn frankfurt() {
    for (p, expected) in [("0", int(1)), ("1/2", ratio(1, 2)), ("1", int(0))] {
        let s = with_param("frankfurt", "p", p);
        let poison = s.action("poison").unwrap();
        let phi = s.plain_formula("SD = 1").unwrap();
        let db = blame(&s.state, poison, &phi, &int(1), &s.cost_model).unwrap().overall;
        assert_eq!(db, expected, "p = {p}");
        assert_eq!(oracle_for(&s).blame(poison, &prop_of(&phi), &int(1), &oc(&s)), expected);
        if p == "1" {
            assert!(intends(&s, "poison", "SD=1", &ReferencePolicy::DefaultOnly));
        }
    }
}

fn cand(s: &Scenario, text: &str) -> CauseCandidate {
    CauseCandidate::new(&s.signature, s.events(text).unwrap()).unwrap()
}

fn pair_names(setting: &CausalSetting, pairs: &[(Endo, usize)]) -> Vec<String> {
    let sig = setting.signature();
    pairs
        .iter()
        .map(|&(v, x)| format!("{}={}", sig.name(v), sig.value_name(v, x)))
        .collect()
}

/// Compares single-event candidates and pairs of actual events with the
/// naive enumerator, along with part-of-cause and but-for.
fn agree_on(setting: &CausalSetting, phi: &Formula, context: &str) {
    let sig = setting.signature();
    let oracle = OracleModel::from_setting(setting);
    let p = prop_of(phi);
    let actual = setting.solve();
    let truths: Vec<Event> = sig
        .endo_vars()
        .map(|v| Event { var: v, value: actual.get(v) })
        .collect();
    let mut cands: Vec<Vec<Event>> = Vec::new();
    for v in sig.endo_vars() {
        for x in 0..sig.var(v).range().len() {
            cands.push(vec![Event { var: v, value: x }]);
        }
    }
    for i in 0..truths.len() {
        for j in i + 1..truths.len() {
            cands.push(vec![truths[i], truths[j]]);
        }
    }
    for events in cands {
        let c = CauseCandidate::new(sig, events.clone()).unwrap();
        let pairs: Vec<(usize, usize)> = events.iter().map(|e| (e.var.0, e.value)).collect();
        let v = check_cause(setting, &c, phi).unwrap();
        assert_eq!(
            v.is_cause,
            moral_oracle::is_cause(&oracle, &pairs, &p),
            "{context}: {} for {}",
            c.display(sig),
            phi.display(sig)
        );
    }
    for e in truths {
        let part = is_part_of_cause(setting, e, phi).unwrap();
        assert_eq!(part.is_some(), moral_oracle::is_part_of_cause(&oracle, e.var.0, e.value, &p), "{context}");
        if phi.eval(&actual) {
            assert_eq!(but_for(setting, e, phi).unwrap(), moral_oracle::but_for(&oracle, e.var.0, &p), "{context}");
        }
    }
}

fn actual_causation() {
    for (name, cause, outcome, contingency) in [
        ("rocks", "ST=1", "BS = 1", "BT=0"),
        ("frankfurt", "JP=1", "SD = 1", "BP=0"),
    ] {
        let s = corpus::scenario(name);
        let setting = s.setting(0).unwrap();
        let phi = s.plain_formula(outcome).unwrap();
        let v = check_cause(setting, &cand(&s, cause), &phi).unwrap();
        assert!(v.is_cause, "{name}");
        let w = v.ac2_witness.unwrap();
        assert_eq!(pair_names(setting, &w.contingency), [contingency], "{name}");
        assert_eq!(pair_names(setting, &w.alternative), [cause.replace("=1", "=0")], "{name}");
        let e = s.events(cause).unwrap()[0];
        assert!(!but_for(setting, e, &phi).unwrap(), "{name}");
    }

    for (name, _) in corpus::CORPUS {
        let s = corpus::scenario(name);
        for (j, ls) in s.settings.iter().enumerate() {
            let actual = ls.setting.solve();
            let mut outcomes: Vec<Formula> = s.outcomes.iter().map(|(_, f)| f.clone()).collect();
            outcomes.extend(s.signature.endo_vars().map(|v| Formula::event(v, actual.get(v))));
            for phi in &outcomes {
                agree_on(&ls.setting, phi, &format!("{name} setting {j}"));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..100 {
        let shape = Shape {
            exo: rng.gen_range(1..=2),
            endo: 4,
            actions: 2,
            max_parents: 3,
            settings: 1,
            utility_terms: 1,
        };
        let model = RandomModel::generate(&mut rng, &shape);
        let s = compile(&model.to_doc("random")).unwrap();
        let setting = &s.settings[0].setting;
        let vars: Vec<usize> = (0..4).collect();
        let sizes = &model.endo_sizes;
        assert!(sizes.iter().all(|&n| n == 2));
        let mut outcomes: Vec<Formula> = (0..3)
            .map(|_| Prop::random(&mut rng, &vars, sizes, 3).to_formula())
            .collect();
        let actual = setting.solve();
        outcomes.extend(s.signature.endo_vars().map(|v| Formula::event(v, actual.get(v))));
        for phi in &outcomes {
            agree_on(setting, phi, &format!("random model {case}"));
        }
    }
}

fn louis() {
    let p = ReferencePolicy::DefaultOnly;
    let s = corpus::scenario("louis1");
    assert_eq!(witness(&s, &affect(&s, "bomb", "D_R", &p)), ["D_R"]);
    assert!(!affect(&s, "bomb", "D_S", &p).intends);
    let s = corpus::scenario("louis2");
    assert!(intends(&s, "bomb", "D_R=1", &p));
    assert!(intends(&s, "bomb", "D_S=1", &p));
    assert_eq!(witness(&s, &affect(&s, "bomb", "D_R", &p)), ["D_R", "D_S"]);
    assert_eq!(witness(&s, &affect(&s, "bomb", "D_S", &p)), ["D_R", "D_S"]);
}

fn daniel() {
    let s = corpus::scenario("daniel");
    let all = ReferencePolicy::AllOthers;
    assert_eq!(witness(&s, &affect(&s, "p1", "S", &all)), ["S"]);
    assert!(!affect(&s, "p1", "C", &all).intends);
    let default = ReferencePolicy::DefaultOnly;
    assert_eq!(witness(&s, &affect(&s, "p1", "S", &default)), ["C", "S"]);
    assert_eq!(witness(&s, &affect(&s, "p1", "C", &default)), ["C", "S"]);
}

fn loop_pair() {
    let p = ReferencePolicy::DefaultOnly;
    let s = corpus::scenario("loop");
    assert!(intends(&s, "1", "TH=1", &p));
    assert!(!intends(&s, "1", "D=1", &p));
    let s = corpus::scenario("loop_merged");
    assert!(intends(&s, "1", "D=1", &p));
}

fn study() {
    let p = ReferencePolicy::DefaultOnly;
    let s = corpus::scenario("study");
    assert!(!affect(&s, "s", "J", &p).intends);
    let s = corpus::scenario("study_acc");
    assert_eq!(witness(&s, &affect(&s, "s", "J", &p)), ["Acc", "J"]);
}

fn shoes() {
    let s = corpus::scenario("shoes");
    let narrow = ReferencePolicy::Explicit(vec!["nothing".into()]);
    assert_eq!(witness(&s, &affect(&s, "save_G", "G", &narrow)), ["G"]);
    assert!(!affect(&s, "save_G", "Shoes", &narrow).intends);
    let wide = ReferencePolicy::Explicit(vec!["nothing".into(), "save_TJ".into()]);
    assert_eq!(witness(&s, &affect(&s, "save_G", "G", &wide)), ["G"]);
    assert_eq!(witness(&s, &affect(&s, "save_G", "Shoes", &wide)), ["Shoes"]);
}

fn bobtom() {
    let s = corpus::scenario("bobtom");
    let (nothing, sacrifice) = (s.action("nothing").unwrap(), s.action("sacrifice").unwrap());
    let cm = &s.cost_model;
    assert_eq!(cost(&s.state, sacrifice, cm).unwrap(), int(100));
    assert_eq!(cost(&s.state, nothing, cm).unwrap(), int(0));
    let phi = s.plain_formula("TA = 0").unwrap();
    assert_eq!(blame_vs(&s.state, nothing, sacrifice, &phi, &int(101), cm).unwrap(), ratio(1, 101));
    let delta = s.state.delta(nothing, sacrifice, &phi).unwrap();
    assert_eq!(delta, int(1));
    let mut last = int(0);
    for n in [101, 200, 1000, 1_000_000] {
        let db = blame(&s.state, nothing, &phi, &int(n), cm).unwrap().overall;
        assert!(db >= last, "N = {n}");
        // the gap to the limit is exactly c(sacrifice)/N
        assert_eq!(&delta - &db, ratio(100, n), "N = {n}");
        last = db;
    }
}

fn commons() {
    let q = ratio(1, 2);
    let expected = [ratio(1, 2), ratio(3, 8), ratio(1, 4)];
    let mut last: Option<Rational> = None;
    for (n, want) in (3..=5u64).zip(expected) {
        let s = compile(&corpus::commons(n as usize, 2, &q)).unwrap();
        let fish = s.action("fish").unwrap();
        let phi = s.plain_formula("collapse = 1").unwrap();
        let db = blame(&s.state, fish, &phi, &int(1), &s.cost_model).unwrap().overall;
        let mut closed = int(binomial(n - 1, 1) as i64) * &q;
        for _ in 0..n - 2 {
            closed *= int(1) - &q;
        }
        assert_eq!(closed, want, "closed form at n = {n}");
        assert_eq!(db, want, "n = {n}");
        if let Some(prev) = &last {
            assert!(db <= *prev);
        }
        last = Some(db);
    }
}

fn rescue() {
    let s = corpus::scenario("rescue");
    let a = s.action("rescue").unwrap();
    let m = s.m.clone().unwrap();
    let saved = s.plain_formula("V = 1").unwrap();
    let r = praise(&s.state, a, &saved, &m, &s.policy, 3, &s.cost_model).unwrap();
    assert!(r.intention.intends);
    assert_eq!((r.raw, r.clamped), (ratio(53, 50), int(1)));
    let lost = s.plain_formula("V = 0").unwrap();
    let r = praise(&s.state, a, &lost, &m, &s.policy, 3, &s.cost_model).unwrap();
    assert!(!r.intention.intends);
    assert_eq!((r.raw, r.clamped), (int(0), int(0)));

    let out = moral(&["praise", &scenario_path("rescue"), "--action", "rescue", "--outcome", "V=1"]);
    assert!(out.contains("raw: 53/50 (1.06)") && out.contains("praise: 1\n"), "{out}");
}

/// A random model with at most five endogenous variables, compiled.
fn random_case(seed: u64) -> (ChaCha8Rng, RandomModel, Scenario) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = Shape {
        exo: rng.gen_range(1..=2),
        endo: rng.gen_range(2..=5),
        actions: rng.gen_range(2..=3),
        max_parents: 3,
        settings: rng.gen_range(1..=3),
        utility_terms: rng.gen_range(1..=3),
    };
    let model = RandomModel::generate(&mut rng, &shape);
    let s = compile(&model.to_doc("random")).unwrap();
    (rng, model, s)
}

fn random_formula(rng: &mut ChaCha8Rng, model: &RandomModel) -> Formula {
    let vars: Vec<usize> = (0..model.endo_sizes.len()).collect();
    Prop::random(rng, &vars, &model.endo_sizes, 3).to_formula()
}

fn random_intervention(rng: &mut ChaCha8Rng, s: &Scenario) -> (Vec<(usize, usize)>, Intervention) {
    let mut pairs = Vec::new();
    for v in s.signature.endo_vars() {
        if rng.gen_bool(0.3) {
            pairs.push((v.0, rng.gen_range(0..s.signature.var(v).range().len())));
        }
    }
    let iv = Intervention::new(&s.signature, pairs.iter().map(|&(v, x)| (Endo(v), x))).unwrap();
    (pairs, iv)
}

fn properties() {
    for seed in 0..PROPERTY_CASES {
        let (mut rng, model, s) = random_case(seed);
        let e = &s.state;
        let phi = random_formula(&mut rng, &model);
        let not_phi = Formula::not(phi.clone());

        // delta in [0, 1], zero against itself
        for a in 0..e.action_count() {
            assert_eq!(e.delta(a, a, &phi).unwrap(), int(0), "seed {seed}");
            for alt in 0..e.action_count() {
                let d = e.delta(a, alt, &phi).unwrap();
                assert!(d >= int(0) && d <= int(1), "seed {seed}");
            }
        }

        // blame never exceeds delta
        if s.cost_model.validated() {
            let top = (0..e.action_count()).map(|a| cost(e, a, &s.cost_model).unwrap()).max().unwrap();
            let n = top + ratio(rng.gen_range(1..10), rng.gen_range(1..4));
            for a in 0..e.action_count() {
                for row in blame(e, a, &phi, &n, &s.cost_model).unwrap().rows {
                    assert!(row.blame <= row.delta, "seed {seed}");
                    assert_eq!(row.delta, e.delta(a, row.alternative, &phi).unwrap());
                }
            }
        }

        // complementary probabilities
        let (_, iv) = random_intervention(&mut rng, &s);
        let p = e.prob(&CausalFormula::under(iv.clone(), phi.clone()));
        let q = e.prob(&CausalFormula::under(iv, not_phi.clone()));
        assert_eq!(p + q, int(1), "seed {seed}");

        for (j, ls) in s.settings.iter().enumerate() {
            let setting = &ls.setting;
            let oracle = OracleModel::from_setting(setting);

            // solve matches fixpoint iteration
            let (pairs, iv) = random_intervention(&mut rng, &s);
            let solved = setting.world_under(&iv);
            assert_eq!(solved.values(), oracle.solve(&pairs), "seed {seed} setting {j}");
            let start: Vec<usize> = model.endo_sizes.iter().map(|&n| rng.gen_range(0..n)).collect();
            assert_eq!(oracle.fixpoint_from(&start, &pairs).as_deref(), Some(solved.values()));

            // but-for implies part of a cause; witnesses re-verify
            let actual = setting.solve();
            let outcome = if phi.eval(&actual) { &phi } else { &not_phi };
            for v in s.signature.endo_vars() {
                let ev = Event { var: v, value: actual.get(v) };
                let part = is_part_of_cause(setting, ev, outcome).unwrap();
                if but_for(setting, ev, outcome).unwrap() {
                    assert!(part.is_some(), "seed {seed}: but-for without part of a cause");
                }
                if let Some(c) = part {
                    assert!(c.conjuncts().contains(&ev));
                    let verdict = check_cause(setting, &c, outcome).unwrap();
                    assert!(verdict.is_cause, "seed {seed}");
                    let w = verdict.ac2_witness.unwrap();
                    assert!(setting.holds(&CausalFormula::plain(w.contingency_formula())));
                    assert!(setting.holds(&w.counterfactual(&s.signature, outcome)), "seed {seed}");
                }
            }
        }
    }
}

fn scenario_path(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../core/scenarios");
    p.push(format!("{name}.scn.json"));
    p.to_string_lossy().into_owned()
}

fn run_moral(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_moral")).args(args).output().unwrap();
    (out.status.code(), out.stdout)
}

fn moral(args: &[&str]) -> String {
    let (code, stdout) = run_moral(args);
    assert_eq!(code, Some(0), "moral {args:?}");
    String::from_utf8(stdout).unwrap()
}

/// Every subcommand over every corpus file.
fn corpus_queries() -> Vec<Vec<String>> {
    let mut queries = Vec::new();
    for (name, _) in corpus::CORPUS {
        let s = corpus::scenario(name);
        let file = scenario_path(name);
        let q = |args: &[&str]| {
            let mut v = vec![args[0].to_string(), file.clone()];
            v.extend(args[1..].iter().map(|a| a.to_string()));
            v
        };
        queries.push(q(&["validate"]));
        let action_var = s.signature.name(s.signature.action()).to_string();
        for a in s.signature.action_values().to_vec() {
            queries.push(q(&["report", "--action", &a]));
            queries.push(q(&["intended-action", "--action", &a, "--setting", "0"]));
        }
        let a = s.signature.action_values().last().unwrap().clone();
        let a_event = format!("{action_var}={a}");
        for (label, f) in &s.outcomes {
            let text = f.display(&s.signature);
            queries.push(q(&["eval", "--formula", &format!("[{action_var} <- {a}] ({text})")]));
            queries.push(q(&["cause", "--cand", &a_event, "--outcome", &text]));
            if s.n.is_some() {
                queries.push(q(&["blame", "--action", &a, "--outcome", &text]));
            }
            if f.conjuncts().is_ok() {
                queries.push(q(&["intends", "--action", &a, "--outcome", label]));
                if s.m.is_some() && s.action(&a).unwrap() != s.state.default_action() {
                    queries.push(q(&["praise", "--action", &a, "--outcome", label]));
                }
            }
            let vars = f.vars().iter().map(|&v| s.signature.name(v).to_string()).collect::<Vec<_>>();
            queries.push(q(&["intends-affect", "--action", &a, "--vars", &vars.join(",")]));
        }
    }
    queries
}

fn determinism() {
    for query in corpus_queries() {
        let mut args: Vec<&str> = vec!["--json"];
        args.extend(query.iter().map(String::as_str));
        let (code, first) = run_moral(&args);
        assert_eq!(code, Some(0), "moral {args:?}");
        serde_json::from_slice::<serde_json::Value>(&first).expect("valid json");
        for _ in 0..2 {
            let (_, again) = run_moral(&args);
            assert!(again == first, "moral {args:?} changed between runs");
        }
    }
}
