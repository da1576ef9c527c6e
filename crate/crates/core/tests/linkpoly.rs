use slnfoam::linkpoly::{
    corpus, euler_characteristic, resolve, skein_check, skein_triples, state_sum, verify_reidemeister, LinkDiagram,
    ResolutionState, REIDEMEISTER_PAIRS,
};
use slnfoam::qlaurent::{qint, LaurentPoly};
use slnfoam::webcalc::validate;
use slnfoam::Error;

fn at_one(p: &LaurentPoly) -> String {
    p.eval_at_one().to_string()
}

#[test]
fn every_flattening_is_a_valid_web() {
    for (name, d) in corpus() {
        let c = d.crossing_count();
        for i in 0..1u64 << c {
            let w = resolve(&d, &ResolutionState::from_index(c, i)).unwrap();
            assert!(validate(&w).is_ok(), "{name} state {i}: {:?}", validate(&w));
        }
    }
}

#[test]
fn corpus_specializes_to_n_to_the_components() {
    for (name, d) in corpus() {
        for n in 2..5u32 {
            let p = state_sum(&d, n).unwrap();
            let want = (n as u64).pow(d.components() as u32);
            assert_eq!(at_one(&p), want.to_string(), "{name} N={n}");
        }
    }
}

#[test]
fn mirror_inverts_q() {
    for (name, d) in corpus() {
        for n in 2..5 {
            assert_eq!(state_sum(&d.mirror(), n).unwrap(), state_sum(&d, n).unwrap().bar(), "{name} N={n}");
        }
    }
}

#[test]
fn euler_characteristic_matches_state_sum() {
    for (name, d) in corpus() {
        for n in 2..5 {
            assert_eq!(euler_characteristic(&d, n).unwrap(), state_sum(&d, n).unwrap(), "{name} N={n}");
        }
    }
}

#[test]
fn skein_triples_pass() {
    for (name, [p, m, z]) in skein_triples() {
        for n in 2..5 {
            let r = skein_check(&p, &m, &z, n).unwrap();
            assert!(r.pass, "{name} N={n}\n{r}");
        }
    }
}

#[test]
fn mismatched_triple_fails() {
    let d = corpus();
    let get = |k: &str| d.iter().find(|(n, _)| *n == k).unwrap().1.clone();
    let r = skein_check(&get("trefoil-right"), &get("unknot"), &get("unknot"), 3).unwrap();
    assert!(!r.pass);
    assert_ne!(r.lhs, r.rhs);
}

#[test]
fn reidemeister_pairs_agree() {
    for id in REIDEMEISTER_PAIRS {
        for n in 2..5 {
            let r = verify_reidemeister(id, n).unwrap();
            assert!(r.pass, "{r}");
        }
    }
    assert!(matches!(verify_reidemeister("R4", 2), Err(Error::Domain(_))));
}

#[test]
fn different_diagrams_of_one_knot_agree() {
    let pd = |s: &str| LinkDiagram::parse(s).unwrap();
    let braid = |k, w: &[i32]| LinkDiagram::from_braid(k, w).unwrap();
    let left = pd("X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]");
    let fig8 = pd("X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]");
    for n in 2..5 {
        assert_eq!(state_sum(&left, n).unwrap(), state_sum(&braid(2, &[-1, -1, -1]), n).unwrap());
        let f = state_sum(&fig8, n).unwrap();
        assert_eq!(f, state_sum(&braid(3, &[1, -2, 1, -2]), n).unwrap());
        assert_eq!(f, f.bar(), "figure-eight is amphichiral");
    }
    let hopf_pd = pd("X[1,3,2,4],X[3,1,4,2]");
    assert_eq!(state_sum(&hopf_pd, 3).unwrap(), state_sum(&braid(2, &[1, 1]), 3).unwrap());
}

#[test]
fn unknot_and_unlink() {
    for n in 2..6 {
        let q = qint(n as i64).unwrap();
        assert_eq!(state_sum(&LinkDiagram::parse("U").unwrap(), n).unwrap(), q);
        assert_eq!(state_sum(&LinkDiagram::parse("U,U").unwrap(), n).unwrap(), &q * &q);
    }
}

#[test]
fn trefoil_is_chiral_for_n_two() {
    let d = LinkDiagram::from_braid(2, &[1, 1, 1]).unwrap();
    let p = state_sum(&d, 2).unwrap();
    assert_ne!(p, p.bar());
}

#[test]
fn diagram_round_trips_through_text() {
    for (_, d) in corpus() {
        assert_eq!(LinkDiagram::parse(&d.to_string()).unwrap(), d);
    }
}
