use twistlab::hopf::*;
use twistlab::roots::CarrierEmbedding;
use twistlab::states::*;
use twistlab::twist::*;
use twistlab::{Expr, Rational, TwistError, TwistSequence};

fn fund(n: usize) -> Witness {
    Witness::fundamental(n).unwrap()
}

#[test]
fn counits_are_trivial() {
    let w = fund(6);
    let j = TwistSequence::single(jordanian_factor(6, 1).unwrap());
    assert!(counit_check("jordanian", &j, &w).unwrap().passed);
    assert!(
        counit_check("chain", &chain_twist(6, 1).unwrap(), &w)
            .unwrap()
            .passed
    );
    for kind in [ExternalKind::E0Tilde, ExternalKind::E1Tilde] {
        let f = TwistSequence::single(external_factor(6, kind).unwrap());
        assert!(counit_check("external", &f, &w).unwrap().passed);
    }
}

#[test]
fn external_factors_are_twists_over_two_jordanian() {
    for n in [6, 7] {
        let w = fund(n);
        let base = recipe(n, 3, &[]).unwrap();
        for kind in [ExternalKind::E0Tilde, ExternalKind::E1Tilde] {
            let f = TwistSequence::single(external_factor(n, kind).unwrap());
            let res = cocycle_check("external", &f, &base, &w).unwrap();
            assert!(res.passed, "{res}");
            // without the Jordanian base they are not
            assert!(
                !cocycle_check("external", &f, &TwistSequence::empty(n), &w)
                    .unwrap()
                    .passed
            );
        }
    }
}

#[test]
fn chain_r_matrix_and_coassociativity() {
    let w = fund(6);
    let f = chain_twist(6, 1).unwrap();
    assert!(r_matrix_checks("chain", &f, &w).unwrap().passed);
    let xs: Vec<Expr> = (1..=6)
        .flat_map(|i| (1..=6).map(move |j| Expr::gen(i, j)))
        .collect();
    assert!(coassociativity_check("chain", &f, &xs, &w).unwrap().passed);
}

#[test]
fn coassociativity_fails_for_a_non_twist() {
    let w = fund(3);
    let ext = TwistSequence::single(extension_factor(3, 1, 2, &Rational::new(1, 2)).unwrap());
    let xs = [Expr::gen(1, 2), Expr::gen(2, 3), Expr::gen(1, 1)];
    assert!(
        !coassociativity_check("ext-only", &ext, &xs, &w)
            .unwrap()
            .passed
    );
}

#[test]
fn extended_antipode_on_carrier() {
    let w = fund(3);
    let c = CarrierEmbedding::new(3, 2, Rational::new(1, 2)).unwrap();
    let f = extended_twist_generic(3, 2, &Rational::new(1, 2)).unwrap();
    let res = antipode_checks("extended", &f, &[c.h, c.a, c.b, c.e], &w, 6).unwrap();
    assert!(res.passed, "{res}");
}

#[test]
fn antipode_element_is_trivial_only_for_trivial_twist() {
    let w = fund(3);
    let j = TwistSequence::single(jordanian_factor(3, 1).unwrap());
    let v = antipode_twist_element(&j, &w.base, 6).unwrap();
    assert!(!v.is_identity());
    assert!(antipode_twist_element(&TwistSequence::empty(3), &w.base, 6)
        .unwrap()
        .is_identity());
}

#[test]
fn deep_state_at_seven() {
    let res = verify_state(StateId::E1E0TildeE1, 7, 4, &fund(7)).unwrap();
    assert!(res.passed, "{res}");
    let table = costructure_table(StateId::E1E0TildeE1, 7, 4).unwrap();
    let cells: Vec<String> = table.entries.iter().map(|e| e.cell.to_string()).collect();
    assert_eq!(cells[6], "R2 + S1+");
    assert_eq!(cells[2], "TR2");
}

#[test]
fn asymmetry_commutators() {
    let d = Witness::new(WitnessKind::Doubled, 6).unwrap();
    let mat = |s: Step| {
        d.materialize(&TwistSequence::single(s.factor(6, 3).unwrap()))
            .unwrap()
            .0
    };
    assert!(mat(Step::Ext0).commutator(&mat(Step::Tilde1)).nnz() > 0);
    assert!(mat(Step::Ext1).commutator(&mat(Step::Tilde0)).nnz() > 0);
    assert!(mat(Step::Ext0).commutator(&mat(Step::Tilde0)).is_zero());
    assert!(mat(Step::Ext1).commutator(&mat(Step::Tilde1)).is_zero());
}

#[test]
fn matreshka_outside_block_is_deformed() {
    let w = fund(6);
    let f = chain_twist(6, 0).unwrap();
    let x = Expr::gen(1, 2);
    assert_ne!(
        twisted_coproduct(&f, &x, &w).unwrap(),
        w.coproduct(&x).unwrap()
    );
    let inner = Expr::gen(3, 4);
    assert_eq!(
        twisted_coproduct(&f, &inner, &w).unwrap(),
        w.coproduct(&inner).unwrap()
    );
}

#[test]
fn structural_errors() {
    assert!(matches!(
        verify_dragging(5, &fund(5)),
        Err(TwistError::NotApplicable(_))
    ));
    assert!(matches!(
        external_factor(5, ExternalKind::E0Tilde),
        Err(TwistError::NotApplicable(_))
    ));
    assert!(matches!(
        costructure_table(StateId::J1J0, 6, 5),
        Err(TwistError::IndexOutOfRange(_))
    ));
    let f = chain_twist(6, 1).unwrap();
    assert!(matches!(
        cocycle_check("x", &f, &TwistSequence::empty(6), &fund(5)),
        Err(TwistError::DimensionMismatch { .. })
    ));
}
