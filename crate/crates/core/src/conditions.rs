//! Necessary conditions for factorizability (screening) and the assertion
//! registry every discovered factorization must satisfy (validation).

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_key, CanonicalKey, CANON_MAX_ORDER};
use crate::error::{Error, Result};
use crate::factorization::Factorization;
use crate::graph::{AcyclicKind, Graph};
use crate::spectral::{component_radius_check, lambda_max_product_check};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleStatus {
    Pass,
    RuledOut,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleRecord {
    pub rule_id: String,
    pub status: RuleStatus,
    pub paper_ref: String,
    pub detail: String,
}

/// Screening verdicts for one graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionReport {
    /// Absent above the canonicalization cap.
    pub graph_key: Option<CanonicalKey>,
    pub rules: Vec<RuleRecord>,
    /// `ruled_out` if any rule fires, otherwise `inconclusive`.
    pub verdict: RuleStatus,
    /// Edgeless graph: factorizable as `0 = 0 * 0`.
    pub trivial: bool,
}

impl ConditionReport {
    pub fn is_ruled_out(&self) -> bool {
        self.verdict == RuleStatus::RuledOut
    }

    pub fn rule(&self, id: &str) -> Option<&RuleRecord> {
        self.rules.iter().find(|r| r.rule_id == id)
    }
}

pub const RULE_IDS: [&str; 4] = ["R1", "R2", "R3", "R4"];

fn rule_reference(id: &str) -> &'static str {
    match id {
        "R1" => "cited result: a factorizable graph has an even number of edges",
        "R2" => "C4-free lemma: a factored graph without C4 and without isolated vertices has even order",
        "R3" => "tree theorem: no tree of order at least 2 is factorizable",
        "R4" => {
            "forest theorem: no forest without isolated vertices and with an odd number of components is factorizable"
        }
        _ => unreachable!("rule ids are checked by the caller"),
    }
}

pub fn evaluate_rule(rule_id: &str, g: &Graph) -> Result<RuleRecord> {
    if !RULE_IDS.contains(&rule_id) {
        return Err(Error::Parameter(format!("unknown rule id {rule_id:?}")));
    }
    let n = g.order();
    let (ruled_out, detail) = match rule_id {
        "R1" => {
            let m = g.edge_count();
            (m % 2 == 1, format!("{m} edges"))
        }
        "R2" => {
            let c4 = g.contains_c4();
            let iso = g.has_isolated_vertex();
            (!c4 && !iso && n % 2 == 1, format!("order {n}, contains C4: {c4}, isolated vertex: {iso}"))
        }
        "R3" => {
            let tree = g.classify_acyclic().kind == AcyclicKind::Tree;
            (tree && n >= 2, format!("tree: {tree}, order {n}"))
        }
        "R4" => {
            let acyc = g.classify_acyclic();
            let iso = g.has_isolated_vertex();
            (
                acyc.is_forest() && !iso && acyc.components % 2 == 1,
                format!("forest: {}, components: {}, isolated vertex: {iso}", acyc.is_forest(), acyc.components),
            )
        }
        _ => unreachable!(),
    };
    Ok(RuleRecord {
        rule_id: rule_id.to_string(),
        status: if ruled_out { RuleStatus::RuledOut } else { RuleStatus::Pass },
        paper_ref: rule_reference(rule_id).to_string(),
        detail,
    })
}

/// Runs every screening rule. Surviving graphs are `inconclusive`: the rules
/// are necessary conditions only.
pub fn screen(g: &Graph) -> ConditionReport {
    let rules: Vec<RuleRecord> =
        RULE_IDS.iter().map(|id| evaluate_rule(id, g).expect("registry ids are valid")).collect();
    let verdict = if rules.iter().any(|r| r.status == RuleStatus::RuledOut) {
        RuleStatus::RuledOut
    } else {
        RuleStatus::Inconclusive
    };
    ConditionReport {
        graph_key: if g.order() <= CANON_MAX_ORDER { canonical_key(g).ok() } else { None },
        rules,
        verdict,
        trivial: g.is_edgeless(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Violation {
    pub assertion_id: String,
    pub expected: String,
    pub observed: String,
    pub paper_ref: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViolationList {
    pub items: Vec<Violation>,
}

impl ViolationList {
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Assertion ids in registry order.
pub const ASSERTION_IDS: [&str; 14] =
    ["V1", "V2", "V3", "V4", "V5", "V6", "V7", "V8", "V9", "V10", "V11", "V12", "V13", "V14"];

pub fn assertion_reference(id: &str) -> &'static str {
    match id {
        "V1" => "degree lemma: deg_G(v) = deg_H(v) deg_K(v)",
        "V2" => "component lemma: vertices connected in H have equal K-degree (and symmetrically)",
        "V3" => "edge-count proposition items 1-2: min(|E(H)|,|E(K)|) <= |E(G)| <= min(D(H)|E(K)|, D(K)|E(H)|)",
        "V4" => "edge-count proposition item 3: |E(G)| <= |E(H)||E(K)|/2 for n > 4 (connected factors)",
        "V5" => "regularity theorem: connected regular G has regular factors",
        "V6" => "regularity corollary: regular factors give a regular product",
        "V7" => "bipartite proposition: a bipartite product has at most one connected factor",
        "V8" => "bipartite block theorem: one factor is bipartite across G's parts, the other has no cross edges",
        "V9" => "connectivity theorem (i): connected non-bipartite factor and a factor without isolated vertices give connected G",
        "V10" => "connectivity theorem (ii): connected bipartite factor and disconnected G force a regular bipartite cofactor, even n, two non-bipartite components",
        "V11" => "odd-order corollary: odd n with a connected factor and a cofactor without isolated vertices gives connected G",
        "V12" => "disconnected corollary: disconnected G with a connected factor and a cofactor without isolated vertices has both factors bipartite",
        "V13" => "spectral radius theorem: lambda_max(G) = lambda_max(H) lambda_max(K) for connected G",
        "V14" => "spectral radius refinement: if one of G, H, K is connected, every component has its graph's spectral radius and no graph has isolated vertices",
        _ => "",
    }
}

/// One assertion evaluated on one factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct AssertionOutcome {
    pub id: &'static str,
    /// Whether the hypotheses held, so the conclusion was actually tested.
    pub applicable: bool,
    pub violation: Option<Violation>,
}

/// Observations recorded as evidence only, never asserted.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Exploratory {
    /// `max(|E(H)|, |E(K)|) <= |E(G)|` when neither factor has isolated vertices.
    pub two_sided_edge_bound: Option<bool>,
    /// `2|E(G)| <= |E(H)||E(K)|` for `n > 4` without the connectivity guard.
    pub unguarded_edge_bound: Option<bool>,
    /// In V10 instances: whether the two components of `G` are isomorphic.
    pub component_isomorphism: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assessment {
    pub outcomes: Vec<AssertionOutcome>,
    pub exploratory: Exploratory,
}

impl Assessment {
    pub fn violations(&self) -> ViolationList {
        ViolationList { items: self.outcomes.iter().filter_map(|o| o.violation.clone()).collect() }
    }
}

struct Facts {
    deg: Vec<usize>,
    edges: usize,
    max_deg: usize,
    connected: bool,
    bipartite: bool,
    regular: bool,
    isolated: bool,
    components: Vec<u64>,
}

impl Facts {
    fn of(g: &Graph) -> Self {
        Facts {
            deg: g.degree_sequence(),
            edges: g.edge_count(),
            max_deg: g.max_degree(),
            connected: g.is_connected(),
            bipartite: g.is_bipartite(),
            regular: g.is_regular(),
            isolated: g.has_isolated_vertex(),
            components: g.component_masks(),
        }
    }
}

struct Checker {
    outcomes: Vec<AssertionOutcome>,
}

impl Checker {
    fn record(
        &mut self,
        id: &'static str,
        applicable: bool,
        ok: impl FnOnce() -> std::result::Result<(), (String, String)>,
    ) {
        let violation = if applicable {
            ok().err().map(|(expected, observed)| Violation {
                assertion_id: id.to_string(),
                expected,
                observed,
                paper_ref: assertion_reference(id).to_string(),
            })
        } else {
            None
        };
        self.outcomes.push(AssertionOutcome { id, applicable, violation });
    }
}

fn ensure(
    cond: bool,
    expected: impl Into<String>,
    observed: impl FnOnce() -> String,
) -> std::result::Result<(), (String, String)> {
    if cond {
        Ok(())
    } else {
        Err((expected.into(), observed()))
    }
}

fn has_edge_within(x: &Graph, side: u64) -> bool {
    crate::graph::mask_to_vec(side).into_iter().any(|v| x.row(v) & side != 0)
}

fn has_edge_across(x: &Graph, left: u64, right: u64) -> bool {
    crate::graph::mask_to_vec(left).into_iter().any(|v| x.row(v) & right != 0)
}

/// Evaluates the whole assertion registry on a product-verified triple.
pub fn assess(g: &Graph, h: &Graph, k: &Graph, tol: f64) -> Assessment {
    let n = g.order();
    let (fg, fh, fk) = (Facts::of(g), Facts::of(h), Facts::of(k));
    let mut c = Checker { outcomes: Vec::with_capacity(ASSERTION_IDS.len()) };
    let mut exploratory = Exploratory::default();

    c.record("V1", true, || match (0..n).find(|&v| fg.deg[v] != fh.deg[v] * fk.deg[v]) {
        None => Ok(()),
        Some(v) => Err((
            format!("deg_G({v}) = deg_H({v}) * deg_K({v})"),
            format!("{} vs {} * {}", fg.deg[v], fh.deg[v], fk.deg[v]),
        )),
    });

    c.record("V2", true, || {
        for (factor, other, name) in [(&fh, &fk, "H"), (&fk, &fh, "K")] {
            for &comp in &factor.components {
                let degs: Vec<usize> = crate::graph::mask_to_vec(comp).iter().map(|&v| other.deg[v]).collect();
                if degs.iter().any(|&d| d != degs[0]) {
                    return Err((
                        format!("constant cofactor degree on each {name}-component"),
                        format!("component {:?} has cofactor degrees {degs:?}", crate::graph::mask_to_vec(comp)),
                    ));
                }
            }
        }
        Ok(())
    });

    let no_isolated_factors = !fh.isolated && !fk.isolated;
    c.record("V3", no_isolated_factors, || {
        let lower = fh.edges.min(fk.edges);
        let upper = (fh.max_deg * fk.edges).min(fk.max_deg * fh.edges);
        ensure(lower <= fg.edges && fg.edges <= upper, format!("{lower} <= |E(G)| <= {upper}"), || {
            format!("|E(G)| = {}", fg.edges)
        })
    });
    if no_isolated_factors {
        exploratory.two_sided_edge_bound = Some(fh.edges.max(fk.edges) <= fg.edges);
        if n > 4 {
            exploratory.unguarded_edge_bound = Some(2 * fg.edges <= fh.edges * fk.edges);
        }
    }

    c.record("V4", n > 4 && fh.connected && fk.connected, || {
        ensure(2 * fg.edges <= fh.edges * fk.edges, "2|E(G)| <= |E(H)||E(K)|", || {
            format!("2*{} > {}*{}", fg.edges, fh.edges, fk.edges)
        })
    });

    c.record("V5", fg.connected && fg.regular, || {
        ensure(fh.regular && fk.regular, "H and K regular", || {
            format!("H regular: {}, K regular: {}", fh.regular, fk.regular)
        })
    });

    c.record("V6", fh.regular && fk.regular, || ensure(fg.regular, "G regular", || format!("degrees {:?}", fg.deg)));

    c.record("V7", fg.bipartite && fg.edges > 0, || {
        ensure(!(fh.connected && fk.connected), "at most one connected factor", || "H and K both connected".into())
    });

    c.record("V8", fg.connected && fg.bipartite, || {
        let parts = g.bipartition_of().expect("G is bipartite");
        let (l, r) = (parts.left_mask(), parts.right_mask());
        let inside = |x: &Graph| has_edge_within(x, l) || has_edge_within(x, r);
        let across = |x: &Graph| has_edge_across(x, l, r);
        let ok = (!inside(h) && !across(k)) || (!inside(k) && !across(h));
        ensure(ok, "one factor bipartite across G's parts and the other without cross edges", || {
            format!("H inside/across: {}/{}, K inside/across: {}/{}", inside(h), across(h), inside(k), across(k))
        })
    });

    let orderings = [(&fh, &fk, "H", "K"), (&fk, &fh, "K", "H")];

    let v9_hyp = orderings.iter().any(|(x, y, _, _)| x.connected && !x.bipartite && !y.isolated);
    c.record("V9", v9_hyp, || ensure(fg.connected, "G connected", || "G disconnected".into()));

    let v10 = orderings.iter().find(|(x, y, _, _)| x.connected && x.bipartite && !y.isolated && !fg.connected);
    c.record("V10", v10.is_some(), || {
        let (_, y, _, yname) = v10.expect("applicable");
        let y_bip = y.bipartite;
        let two = fg.components.len() == 2;
        let comps_non_bip = two
            && fg.components.iter().all(|&m| {
                let sub = g.induced(&crate::graph::mask_to_vec(m)).expect("component");
                !sub.is_bipartite() && sub.is_connected()
            });
        ensure(y.regular && y_bip && n % 2 == 0 && comps_non_bip, format!("{yname} regular bipartite, n even, G = two non-bipartite components"), || {
            format!(
                "{yname} regular: {}, bipartite: {y_bip}, n = {n}, components: {}, non-bipartite components: {comps_non_bip}",
                y.regular,
                fg.components.len()
            )
        })
    });
    if v10.is_some() && fg.components.len() == 2 {
        let parts: Vec<Graph> =
            fg.components.iter().map(|&m| g.induced(&crate::graph::mask_to_vec(m)).expect("component")).collect();
        exploratory.component_isomorphism = match (canonical_key(&parts[0]), canonical_key(&parts[1])) {
            (Ok(a), Ok(b)) => Some(a == b),
            _ => None,
        };
    }

    let v11_hyp = n % 2 == 1 && orderings.iter().any(|(x, y, _, _)| x.connected && !y.isolated);
    c.record("V11", v11_hyp, || ensure(fg.connected, "G connected", || "G disconnected".into()));

    let v12 = orderings.iter().any(|(x, y, _, _)| !fg.connected && x.connected && !y.isolated);
    c.record("V12", v12, || {
        ensure(fh.bipartite && fk.bipartite, "H and K bipartite", || {
            format!("H bipartite: {}, K bipartite: {}", fh.bipartite, fk.bipartite)
        })
    });

    c.record("V13", fg.connected, || {
        let chk = lambda_max_product_check(g, h, k, tol);
        ensure(chk.holds, format!("lambda_max(G) = {}", chk.lhs), || {
            format!("lambda_max(H) lambda_max(K) = {}", chk.rhs)
        })
    });

    let radius = component_radius_check(g, h, k, tol);
    c.record("V14", radius.applicable, || {
        ensure(radius.holds, "equal component radii, no isolated vertices", || radius.detail.clone())
    });

    Assessment { outcomes: c.outcomes, exploratory }
}

/// Checks every registered assertion on a verified factorization.
pub fn validate_factorization(f: &Factorization, tol: f64) -> ViolationList {
    assess(f.g(), f.h(), f.k(), tol).violations()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path, star};

    #[test]
    fn screening_examples() {
        let k2 = complete(2).unwrap();
        let r = screen(&k2);
        assert!(r.is_ruled_out());
        assert_eq!(r.rule("R1").unwrap().status, RuleStatus::RuledOut);
        assert_eq!(r.rules.len(), 4);

        let r = screen(&path(7).unwrap());
        assert_eq!(r.rule("R3").unwrap().status, RuleStatus::RuledOut);
        assert_eq!(r.rule("R2").unwrap().status, RuleStatus::RuledOut);

        let r = screen(&cycle(6).unwrap());
        assert_eq!(r.verdict, RuleStatus::Inconclusive);
        assert!(r.rules.iter().all(|x| x.status == RuleStatus::Pass));

        let e = screen(&Graph::empty(3).unwrap());
        assert!(e.trivial);
        assert_eq!(e.verdict, RuleStatus::Inconclusive);
    }

    #[test]
    fn single_rules() {
        let r1 = evaluate_rule("R1", &complete(3).unwrap()).unwrap();
        assert_eq!(r1.status, RuleStatus::RuledOut);
        assert_eq!(r1.detail, "3 edges");
        assert_eq!(evaluate_rule("R3", &cycle(6).unwrap()).unwrap().status, RuleStatus::Pass);
        let s5 = star(5).unwrap();
        assert!(!s5.contains_c4());
        assert_eq!(evaluate_rule("R2", &s5).unwrap().status, RuleStatus::RuledOut);
        assert!(evaluate_rule("R9", &s5).is_err());
        let g = cycle(5).unwrap();
        for id in RULE_IDS {
            assert_eq!(&evaluate_rule(id, &g).unwrap(), screen(&g).rule(id).unwrap());
        }
    }

    #[test]
    fn forest_rule_counts_components() {
        // P2 + P3 + P3: three components, no isolated vertices, 5 edges
        let f = path(2).unwrap().disjoint_union(&path(3).unwrap()).unwrap().disjoint_union(&path(3).unwrap()).unwrap();
        assert_eq!(evaluate_rule("R4", &f).unwrap().status, RuleStatus::RuledOut);
        let two = path(2).unwrap().disjoint_union(&path(2).unwrap()).unwrap();
        assert_eq!(evaluate_rule("R4", &two).unwrap().status, RuleStatus::Pass);
    }

    #[test]
    fn report_json_field_names() {
        let v = serde_json::to_value(screen(&complete(2).unwrap())).unwrap();
        let rule = &v["rules"][0];
        for field in ["rule_id", "status", "paper_ref", "detail"] {
            assert!(rule.get(field).is_some(), "{field}");
        }
        assert_eq!(rule["status"], "ruled_out");
        let back: ConditionReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, screen(&complete(2).unwrap()));
    }
}
