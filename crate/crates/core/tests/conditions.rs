use graphfactor::canon::enumerate_graphs;
use graphfactor::conditions::{assess, evaluate_rule, screen, RuleStatus};
use graphfactor::graph::{complete, cycle, generate, path, star, Family};
use graphfactor::search::factor_naive;
use graphfactor::spectral::DEFAULT_TOL;
use graphfactor::Graph;

#[test]
fn screening_is_sound_against_the_naive_oracle() {
    for n in 1..=5 {
        for g in enumerate_graphs(n).unwrap() {
            if screen(&g).is_ruled_out() {
                assert!(factor_naive(&g).unwrap().is_empty(), "{g:?}");
            }
        }
    }
}

#[test]
fn trees_are_ruled_out_by_parity_and_by_the_tree_rule() {
    for n in 2..=7 {
        for g in enumerate_graphs(n).unwrap() {
            if !(g.is_connected() && g.edge_count() == n - 1) {
                continue;
            }
            let r = screen(&g);
            assert!(r.is_ruled_out());
            assert_eq!(r.rule("R3").unwrap().status, RuleStatus::RuledOut);
            let parity = if n % 2 == 0 { "R1" } else { "R2" };
            assert_eq!(r.rule(parity).unwrap().status, RuleStatus::RuledOut, "{g:?}");
        }
    }
}

#[test]
fn rule_examples() {
    assert_eq!(evaluate_rule("R1", &complete(2).unwrap()).unwrap().status, RuleStatus::RuledOut);
    assert_eq!(evaluate_rule("R2", &star(5).unwrap()).unwrap().status, RuleStatus::RuledOut);
    assert_eq!(evaluate_rule("R2", &cycle(5).unwrap()).unwrap().status, RuleStatus::RuledOut);
    assert_eq!(evaluate_rule("R2", &complete(5).unwrap()).unwrap().status, RuleStatus::Pass);
    assert_eq!(evaluate_rule("R3", &path(4).unwrap()).unwrap().status, RuleStatus::RuledOut);
    let forest = generate(&Family::DisjointUnion(Box::new(path(3).unwrap()), Box::new(path(2).unwrap()))).unwrap();
    assert_eq!(evaluate_rule("R4", &forest).unwrap().status, RuleStatus::Pass);
    let three = generate(&Family::Matching(3)).unwrap();
    assert_eq!(evaluate_rule("R4", &three).unwrap().status, RuleStatus::RuledOut);
    assert!(evaluate_rule("R9", &three).is_err());

    let c4 = screen(&cycle(4).unwrap());
    assert!(!c4.is_ruled_out());
    let e = screen(&Graph::empty(3).unwrap());
    assert!(e.trivial && !e.is_ruled_out());
}

#[test]
fn assessment_flags_a_triple_that_is_not_a_product() {
    // K3 = K3 * K3 is false: degrees 2 != 2 * 2
    let k3 = complete(3).unwrap();
    let a = assess(&k3, &k3, &k3, DEFAULT_TOL);
    let v = a.violations();
    assert!(v.items.iter().any(|x| x.assertion_id == "V1"));
    assert!(v.items.iter().all(|x| !x.paper_ref.is_empty()));
}
