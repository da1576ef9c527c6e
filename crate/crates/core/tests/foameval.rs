use slnfoam::foameval::{theta112_closed, theta123_closed, verify_relation, RELATION_IDS};
use slnfoam::polyring::rat;
use slnfoam::symmetric::part;
use slnfoam::Error;

#[test]
fn relations_hold_except_three_cylinder() {
    for n in 2..=4 {
        for id in RELATION_IDS {
            match verify_relation(id, n) {
                Ok(r) if id == "3C" => assert!(!r.pass, "{r}"),
                Ok(r) => assert!(r.pass, "{r}"),
                Err(Error::Domain(_)) => {}
                Err(e) => panic!("{id} N={n}: {e}"),
            }
        }
    }
}

#[test]
fn relation_reports_carry_checks() {
    let r = verify_relation("DR1", 3).unwrap();
    assert!(r.checks > 0);
    assert_eq!(r.expected_size, Some(12));
    assert_eq!(r.matrix.map(|m| m.len()), Some(12));
    assert!(matches!(verify_relation("Nope", 3), Err(Error::Domain(_))));
    assert!(matches!(verify_relation("RD2", 3), Err(Error::Domain(_))));
}

#[test]
fn theta_sign_table() {
    for n in 2..=6u32 {
        let z = part(&[0, 0]);
        assert_eq!(theta112_closed(n, n - 2, n - 1, &z).unwrap(), rat(-1));
        assert_eq!(theta112_closed(n, n - 1, n - 2, &z).unwrap(), rat(1));
        assert_eq!(theta112_closed(n, n - 1, n - 1, &z).unwrap(), rat(0));
    }
    assert!(theta123_closed(3, &part(&[0, 0, 0]), &part(&[0, 0]), 0).is_err());
}
