use proptest::prelude::*;

use super::*;
use crate::exterior::parse_poly_field;
use crate::jetspace::{prolong, JetSpec};
use crate::symkernel::{Chart, Monomial};

fn v_fields() -> Vec<VectorField<Poly>> {
    let j = JetSpec::kdv(2);
    [
        "x: 1",
        "t: 1",
        "x: t; u: 1; u_t: -u_x; u_tt: -2*u_tx; u_tx: -u_xx",
        "x: x; t: 3*t; u: -2*u; u_t: -5*u_t; u_x: -3*u_x; u_tt: -8*u_tt; u_tx: -6*u_tx; u_xx: -4*u_xx",
    ]
    .iter()
    .map(|s| parse_poly_field(s, j.chart()).unwrap())
    .collect()
}

fn x_fields() -> Vec<VectorField<Poly>> {
    let j = JetSpec::kdv(0);
    ["x: 1", "t: 1", "x: t; u: 1", "x: x; t: 3*t; u: -2*u"].iter().map(|s| parse_poly_field(s, j.chart()).unwrap()).collect()
}

fn kdv_table() -> BracketTable {
    let mut t = BracketTable::zero(4);
    t.set_ints(0, 3, &[1, 0, 0, 0]);
    t.set_ints(1, 2, &[1, 0, 0, 0]);
    t.set_ints(1, 3, &[0, 3, 0, 0]);
    t.set_ints(2, 3, &[0, 0, -2, 0]);
    t
}

fn so3() -> BracketTable {
    let mut t = BracketTable::zero(3);
    t.set_ints(0, 1, &[0, 0, 1]);
    t.set_ints(1, 2, &[1, 0, 0]);
    t.set_ints(2, 0, &[0, 1, 0]);
    t
}

#[test]
fn bracket_examples() {
    let v = v_fields();
    assert_eq!(bracket(&v[1], &v[2]).unwrap(), v[0]);
    assert!(bracket(&v[0], &v[0]).unwrap().is_zero());
    let x = x_fields();
    assert_eq!(bracket(&x[2], &x[3]).unwrap(), x[2].scale(&Poly::constant(x[2].chart(), scalar::int(-2))));
}

#[test]
fn kdv_structure_constants() {
    let t = structure_constants(&v_fields()).unwrap();
    assert_eq!(t, kdv_table());
    assert!(jacobi_check(&t));
    let names: Vec<String> = (1..=4).map(|k| format!("v{k}")).collect();
    let m = t.render_matrix(&names);
    assert_eq!(m[0][3], "v1");
    assert_eq!(m[3][1], "-3*v2");
    assert_eq!(m[2][3], "-2*v3");
}

#[test]
fn small_bases() {
    let v = v_fields();
    assert_eq!(structure_constants(&v[..1]).unwrap(), BracketTable::zero(1));
    let pair = [v[0].clone(), v[3].clone()];
    let t = structure_constants(&pair).unwrap();
    assert_eq!(t.get(0, 1), vec![scalar::int(1), scalar::int(0)]);
}

#[test]
fn non_closed_basis_is_reported() {
    let v = v_fields();
    let pair = [v[1].clone(), v[2].clone()];
    assert!(matches!(structure_constants(&pair), Err(LieError::NotClosed(0, 1))));
    let dup = [v[0].clone(), v[0].clone()];
    assert!(matches!(structure_constants(&dup), Err(LieError::Dependent)));
}

#[test]
fn derived_series_examples() {
    assert_eq!(derived_series(&kdv_table()), vec![4, 3, 1, 0]);
    assert!(is_solvable(&kdv_table()));
    assert_eq!(derived_series(&BracketTable::zero(3)), vec![3, 0]);
    assert_eq!(derived_series(&so3()), vec![3, 3]);
    assert!(!is_solvable(&so3()));
}

#[test]
fn jacobi_examples() {
    assert!(jacobi_check(&kdv_table()));
    assert!(jacobi_check(&BracketTable::zero(4)));
    assert!(jacobi_check(&so3()));
    let mut bad = kdv_table();
    bad.set_ints(1, 3, &[0, -3, 0, 0]);
    assert!(!jacobi_check(&bad));
}

#[test]
fn prolongation_is_a_morphism() {
    let base = JetSpec::kdv(0);
    let x = x_fields();
    let pr: Vec<_> = x.iter().map(|f| prolong(f, 2, &base).unwrap()).collect();
    assert_eq!(structure_constants(&x).unwrap(), structure_constants(&pr).unwrap());
    assert_eq!(pr, v_fields());
}

fn poly_strategy(chart: Chart) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..3, 3), -4i64..5), 0..4)
        .prop_map(move |ts| Poly::from_terms(&chart, ts.into_iter().map(|(e, c)| (Monomial(e), scalar::int(c)))))
}

fn field_strategy() -> impl Strategy<Value = VectorField<Poly>> {
    let chart = JetSpec::kdv(0).chart().clone();
    prop::collection::vec(poly_strategy(chart.clone()), 3)
        .prop_map(move |cs| VectorField::from_components(&chart, cs.into_iter().enumerate()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn field_brackets_satisfy_jacobi(a in field_strategy(), b in field_strategy(), c in field_strategy()) {
        let j = bracket(&bracket(&a, &b).unwrap(), &c).unwrap()
            .add(&bracket(&bracket(&b, &c).unwrap(), &a).unwrap())
            .add(&bracket(&bracket(&c, &a).unwrap(), &b).unwrap());
        prop_assert!(j.is_zero());
    }

    #[test]
    fn field_brackets_are_antisymmetric_and_bilinear(a in field_strategy(), b in field_strategy(), c in field_strategy(), k in -3i64..4) {
        prop_assert_eq!(bracket(&a, &b).unwrap(), bracket(&b, &a).unwrap().scale(&Poly::constant(a.chart(), scalar::int(-1))));
        let kk = Poly::constant(a.chart(), scalar::int(k));
        let lhs = bracket(&a.scale(&kk).add(&c), &b).unwrap();
        let rhs = bracket(&a, &b).unwrap().scale(&kk).add(&bracket(&c, &b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derived_series_is_decreasing(entries in prop::collection::vec(prop::collection::vec(-2i64..3, 3), 3)) {
        let mut t = BracketTable::zero(3);
        for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            t.set_ints(i, j, &entries[k]);
        }
        let d = derived_series(&t);
        prop_assert!(d.windows(2).all(|w| w[1] <= w[0]));
    }
}
