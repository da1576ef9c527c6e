use std::collections::HashMap;

use slnfoam::foameval::duality::{dr1, dr2, sqr1};
use slnfoam::qlaurent::{qbinom, qint, LaurentPoly};
use slnfoam::webcalc::{moy_eval, moy_eval_with, validate, EvalOptions, Violation, Web};
use slnfoam::Error;

/// Count flows: simple edges carry a colour, double edges the union of the
/// two simple colours at each vertex. This is the MOY value at q = 1.
fn colourings(w: &Web, n: u32) -> u64 {
    let idx: HashMap<usize, usize> = w.edges.iter().enumerate().map(|(i, e)| (e.id, i)).collect();
    let simples: Vec<usize> = (0..w.edges.len()).filter(|&i| w.edges[i].label == 1).collect();
    let mut col = vec![0u32; w.edges.len()];
    let mut count = 0;
    let total = (n as u64).pow(simples.len() as u32);
    'outer: for code in 0..total {
        let mut c = code;
        for &s in &simples {
            col[s] = (c % n as u64) as u32;
            c /= n as u64;
        }
        let mut double: HashMap<usize, u32> = HashMap::new();
        for v in &w.vertices {
            let es: Vec<usize> = v.halfedges.iter().map(|e| idx[e]).collect();
            let s: Vec<usize> = es.iter().copied().filter(|&i| w.edges[i].label == 1).collect();
            let d = *es.iter().find(|&&i| w.edges[i].label == 2).unwrap();
            if col[s[0]] == col[s[1]] {
                continue 'outer;
            }
            let mask = (1 << col[s[0]]) | (1 << col[s[1]]);
            if *double.entry(d).or_insert(mask) != mask {
                continue 'outer;
            }
        }
        count += 1;
    }
    let mut circles = 1u64;
    for c in &w.circles {
        circles *= if c.label == 1 { n as u64 } else { (n * (n - 1) / 2) as u64 };
    }
    count * circles
}

fn at_one(p: &LaurentPoly) -> i64 {
    p.eval_at_one().to_string().parse().unwrap()
}

fn digon_webs() -> Vec<(&'static str, Web)> {
    vec![
        ("dr1", Web::from_planar(&dr1(3).unwrap().web).unwrap()),
        ("dr2", Web::from_planar(&dr2(3).unwrap().web).unwrap()),
        ("sqr1", Web::from_planar(&sqr1(3).unwrap().web).unwrap()),
    ]
}

#[test]
fn circles_evaluate_to_quantum_integers() {
    for n in 2..6 {
        assert_eq!(moy_eval(&Web::circle(1), n).unwrap(), qint(n as i64).unwrap());
        assert_eq!(moy_eval(&Web::circle(2), n).unwrap(), qbinom(n as i64, 2).unwrap());
        assert_eq!(moy_eval(&Web::default(), n).unwrap(), LaurentPoly::one());
    }
}

#[test]
fn theta_web_is_n_times_n_minus_one() {
    for n in 2..7 {
        let expect = &qint(n as i64).unwrap() * &qint(n as i64 - 1).unwrap();
        assert_eq!(moy_eval(&Web::theta(), n).unwrap(), expect);
    }
}

#[test]
fn duality_webs_have_the_expected_dimension() {
    for n in 3..6u32 {
        let k = n as i64;
        let want = [2 * k * (k - 1), k * (k - 1) * (k - 1), k * k + 2 * k * (k - 2) + k * k * (k - 2) * (k - 2)];
        for ((name, w), d) in digon_webs().into_iter().zip(want) {
            validate(&w).unwrap();
            let p = moy_eval(&w, n).unwrap();
            assert_eq!(at_one(&p), d, "{name} N={n}");
            assert_eq!(colourings(&w, n) as i64, d, "{name} N={n} colourings");
            assert!(p.has_nonnegative_coefficients());
            assert_eq!(p, p.bar(), "{name} symmetric");
        }
    }
}

#[test]
fn random_move_orders_agree() {
    for (_, w) in digon_webs() {
        for n in 3..6 {
            let base = moy_eval(&w, n).unwrap();
            for seed in 0..8 {
                let opts = EvalOptions { seed: Some(seed), ..Default::default() };
                assert_eq!(moy_eval_with(&w, n, &opts).unwrap(), base);
            }
        }
    }
}

#[test]
fn disjoint_union_is_multiplicative() {
    let ws = digon_webs();
    let u = ws[0].1.disjoint_union(&ws[2].1).disjoint_union(&Web::circle(2));
    for n in 3..5 {
        let prod = &(&moy_eval(&ws[0].1, n).unwrap() * &moy_eval(&ws[2].1, n).unwrap())
            * &qbinom(n as i64, 2).unwrap();
        assert_eq!(moy_eval(&u, n).unwrap(), prod);
    }
}

#[test]
fn json_round_trip() {
    for (_, w) in digon_webs() {
        let back = Web::from_json(&w.to_json()).unwrap();
        assert_eq!(back, w);
    }
    assert!(matches!(Web::from_json("{\"vertices\": 3}"), Err(Error::Parse(_))));
}

#[test]
fn validation_reports_violations() {
    let mut w = Web::theta();
    w.edges[1].from = 1;
    w.edges[1].to = 0;
    let errs = validate(&w).unwrap_err();
    assert!(errs.iter().any(|v| matches!(v, Violation::Orientation { .. })));
    assert!(matches!(moy_eval(&w, 3), Err(Error::InvalidWeb(_))));

    let mut w = Web::theta();
    w.edges[0].label = 1;
    let errs = validate(&w).unwrap_err();
    assert!(errs.iter().any(|v| matches!(v, Violation::VertexType { .. })));

    let mut w = Web::theta();
    w.vertices[0].halfedges = [0, 1, 7];
    assert!(validate(&w).unwrap_err().iter().any(|v| matches!(v, Violation::UnknownEdge { .. })));

    // Swapping the rotation at one vertex of the theta gives a torus embedding.
    let mut w = Web::theta();
    w.vertices[1].halfedges = [0, 1, 2];
    let errs = validate(&w).unwrap_err();
    assert!(errs.iter().any(|v| matches!(v, Violation::NotPlanar { .. })), "{errs:?}");
}

#[test]
fn tiny_budget_is_reported() {
    let w = &digon_webs()[2].1;
    let opts = EvalOptions { budget: 1, seed: None };
    assert!(matches!(moy_eval_with(w, 4, &opts), Err(Error::Irreducible(_))));
}

#[test]
fn flattenings_are_strategy_independent() {
    use slnfoam::linkpoly::{corpus, resolve, ResolutionState};
    for (name, d) in corpus() {
        let c = d.crossing_count();
        for i in 0..1u64 << c {
            let w = resolve(&d, &ResolutionState::from_index(c, i)).unwrap();
            for n in 2..5 {
                let base = moy_eval(&w, n).unwrap();
                assert!(base.has_nonnegative_coefficients(), "{name} state {i}");
                for seed in 0..4 {
                    let opts = EvalOptions { seed: Some(seed), ..Default::default() };
                    assert_eq!(moy_eval_with(&w, n, &opts).unwrap(), base, "{name} state {i} seed {seed}");
                }
            }
        }
    }
}
