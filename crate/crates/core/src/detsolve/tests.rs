use proptest::prelude::*;

use super::*;
use crate::exterior::{parse_poly_field, VectorField};
use crate::jetspace::{apply_to_equation, on_solution_reduce, prolong, JetSpec, PdeSpec};
use crate::par::Exec;
use crate::symkernel::{scalar, Poly, Scalar};

fn kdv() -> PdeSpec {
    PdeSpec::parse(JetSpec::kdv(3), "u_xxx + u*u_x + u_t", "u_xxx").unwrap()
}

fn ideal() -> ContactIdeal {
    build_ideal(&kdv(), EquationForm::Printed).unwrap()
}

fn fields(chart: &crate::symkernel::Chart, srcs: &[&str]) -> Vec<VectorField<Poly>> {
    srcs.iter().map(|s| parse_poly_field(s, chart).unwrap()).collect()
}

const A_FAMILY: [&str; 4] = [
    "t: t; x: x/3; u: -2*u/3; u_t: -5*u_t/3; u_x: -u_x; u_tt: -8*u_tt/3; u_tx: -2*u_tx; u_xx: -4*u_xx/3",
    "t: 1",
    "x: t; u: 1; u_t: -u_x; u_tt: -2*u_tx; u_tx: -u_xx",
    "x: 1",
];

const V_FIELDS: [&str; 4] = [
    "x: 1",
    "t: 1",
    "x: t; u: 1; u_t: -u_x; u_tt: -2*u_tx; u_tx: -u_xx",
    "x: x; t: 3*t; u: -2*u; u_t: -5*u_t; u_x: -3*u_x; u_tt: -8*u_tt; u_tx: -6*u_tx; u_xx: -4*u_xx",
];

const X_FIELDS: [&str; 4] = ["x: 1", "t: 1", "x: t; u: 1", "x: x; t: 3*t; u: -2*u"];

#[test]
fn ideal_renders_verbatim() {
    let id = ideal();
    let thetas = ["du - u_t dt - u_x dx", "du_t - u_tt dt - u_tx dx", "du_x - u_tx dt - u_xx dx"];
    for (i, e) in thetas.iter().enumerate() {
        assert_eq!(id.render_theta(i + 1), *e);
    }
    let alphas = [
        "(u_x*u_tt - u_t*u_tx) dx^dt + u_tx dx^du - u_x dx^du_t + u_tt dt^du - u_t dt^du_t + du^du_t",
        "(u_x*u_tx - u_t*u_xx) dx^dt + u_xx dx^du - u_x dx^du_x + u_tx dt^du - u_t dt^du_x + du^du_x",
        "(u_tx^2 - u_tt*u_xx) dx^dt + u_xx dx^du_t - u_tx dx^du_x + u_tx dt^du_t - u_tt dt^du_x + du_t^du_x",
        "dx^du_x + dt^du_t",
        "dx^du_tx + dt^du_tt",
        "dx^du_xx + dt^du_tx",
        "u dt^du - dt^du_xx - dx^du",
    ];
    for (i, e) in alphas.iter().enumerate() {
        assert_eq!(id.render_alpha(i + 1), *e, "alpha{}", i + 1);
    }
}

#[test]
fn ideal_generators_are_contact_products_and_differentials() {
    let id = ideal();
    let th = id.thetas();
    assert_eq!(*id.alpha(1), th[0].wedge(&th[1]).unwrap());
    assert_eq!(*id.alpha(3), th[1].wedge(&th[2]).unwrap());
    for k in 0..3 {
        assert_eq!(*id.alpha(4 + k), th[k].d());
    }
}

#[test]
fn equation_two_form_pulls_back_to_the_equation() {
    let id = build_ideal(&kdv(), EquationForm::FromEquation).unwrap();
    assert_eq!(id.render_alpha(7), "(-u_t - u*u_x) dt^dx - dt^du_xx");
    let c = id.chart();
    let a7 = id.alpha(7);
    assert_eq!(a7.component(&[c.require("u_xx").unwrap(), 0]), Poly::one(c));
    assert_eq!(a7.component(&[1, 0]), crate::symkernel::parse_poly("u_t + u*u_x", c).unwrap());
}

#[test]
fn unsupported_shapes_are_rejected() {
    let heat = PdeSpec::parse(JetSpec::kdv(2), "u_t - u_xx", "u_xx").unwrap();
    assert!(matches!(build_ideal(&heat, EquationForm::FromEquation), Err(DetError::UnsupportedShape(_))));
    let other = PdeSpec::parse(JetSpec::kdv(3), "u_xxx + u_t", "u_xxx").unwrap();
    assert!(matches!(build_ideal(&other, EquationForm::Printed), Err(DetError::UnsupportedShape(_))));
    assert!(build_ideal(&other, EquationForm::FromEquation).is_ok());
}

#[test]
fn condition_sets_parse() {
    let c = ConditionSet::parse("1-3,7:module").unwrap();
    let modes: Vec<_> = c.conditions().iter().map(|c| (c.generator, c.mode)).collect();
    assert_eq!(
        modes,
        vec![
            (1, ConditionMode::Proportional),
            (2, ConditionMode::Proportional),
            (3, ConditionMode::Proportional),
            (7, ConditionMode::Module)
        ]
    );
    assert_eq!(ConditionSet::parse("4").unwrap().conditions()[0].mode, ConditionMode::Ideal);
    assert!(ConditionSet::parse("none").unwrap().is_empty());
    assert!(ConditionSet::parse("8").is_err());
    assert!(ConditionSet::parse("1:bogus").is_err());
    assert_eq!(ConditionSet::default().to_string(), "1-7:module");
    for text in ["1-3:proportional,4-7:ideal", "1:module,3:module", "2-3:ideal,7:proportional", "none"] {
        assert_eq!(ConditionSet::parse(text).unwrap().to_string(), text);
    }
    assert_eq!(ConditionSet::parse("1,2,3").unwrap().to_string(), "1-3:proportional");
}

#[test]
fn harrison_default_recovers_the_four_parameter_family() {
    let id = ideal();
    let sys = assemble_harrison(&id, &HarrisonOptions::default()).unwrap();
    let basis = solve_system(&sys);
    assert_eq!(basis.dim(), 4);
    assert!(fields_span_equal(&basis.fields, &fields(id.chart(), &A_FAMILY)));
    assert!(fields_span_equal(&basis.fields, &fields(id.chart(), &V_FIELDS)));
}

#[test]
fn harrison_family_is_stable_under_the_equation_two_form() {
    let id = build_ideal(&kdv(), EquationForm::FromEquation).unwrap();
    let basis = solve_system(&assemble_harrison(&id, &HarrisonOptions::default()).unwrap());
    assert!(fields_span_equal(&basis.fields, &fields(id.chart(), &V_FIELDS)));
}

#[test]
fn literal_proportionality_is_too_weak_and_ideal_mode_too_strong() {
    let id = ideal();
    let literal = HarrisonOptions { conditions: ConditionSet::of(&[1, 2, 3]), ..Default::default() };
    assert_eq!(solve_system(&assemble_harrison(&id, &literal).unwrap()).dim(), 8);
    let escalated = HarrisonOptions { conditions: ConditionSet::of(&[1, 2, 3, 4, 5, 6, 7]), ..Default::default() };
    let b = solve_system(&assemble_harrison(&id, &escalated).unwrap());
    assert_eq!(b.dim(), 3);
    // the Galilean field is the one lost
    let v3 = fields(id.chart(), &V_FIELDS[2..3]);
    let mut with_v3 = b.fields.clone();
    with_v3.extend(v3);
    assert!(!fields_span_equal(&b.fields, &with_v3));
}

#[test]
fn empty_condition_set_leaves_the_full_ansatz() {
    let opts = HarrisonOptions { conditions: ConditionSet::empty(), ..Default::default() };
    let sys = assemble_harrison(&ideal(), &opts).unwrap();
    assert_eq!(sys.matrix.num_rows(), 0);
    assert_eq!(sys.num_unknowns(), 72);
    assert_eq!(solve_system(&sys).dim(), 72);
}

#[test]
fn unknown_cap_is_enforced() {
    let opts = HarrisonOptions { max_unknowns: 100, ..Default::default() };
    assert!(matches!(assemble_harrison(&ideal(), &opts), Err(DetError::TooManyUnknowns(_, 100))));
}

#[test]
fn sequential_and_parallel_assembly_agree() {
    let id = ideal();
    let a = assemble_harrison(&id, &HarrisonOptions { exec: Exec::Sequential, ..Default::default() }).unwrap();
    let b = assemble_harrison(&id, &HarrisonOptions { exec: Exec::Parallel, ..Default::default() }).unwrap();
    assert_eq!(a.matrix, b.matrix);
    assert_eq!(a.rows, b.rows);
}

#[test]
fn verify_translation_passes_with_zero_multipliers() {
    let id = ideal();
    let v1 = parse_poly_field("x: 1", id.chart()).unwrap();
    let report = verify_symmetry(&v1, &id, ConditionSet::default().conditions(), 1).unwrap();
    assert_eq!(report.len(), 7);
    for r in &report {
        assert!(r.passed);
        assert!(r.witnesses.is_empty());
    }
}

#[test]
fn verify_scaling_passes_with_constant_multipliers() {
    let id = ideal();
    let v4 = parse_poly_field(V_FIELDS[3], id.chart()).unwrap();
    let report = verify_symmetry(&v4, &id, ConditionSet::default().conditions(), 1).unwrap();
    assert!(report.iter().all(|r| r.passed));
    // du^du_t has weight -2 - 5
    let p = verify_symmetry(&v4, &id, ConditionSet::of(&[1, 2, 3]).conditions(), 0).unwrap();
    let lambdas: Vec<Poly> = p.iter().map(|r| r.witnesses[&format!("lambda{}", r.generator)].clone()).collect();
    assert_eq!(lambdas, vec![Poly::constant(id.chart(), scalar::int(-7)), Poly::constant(id.chart(), scalar::int(-5)), Poly::constant(id.chart(), scalar::int(-8))]);
}

#[test]
fn verify_rejects_u_translation() {
    let id = ideal();
    let du = parse_poly_field("u: 1", id.chart()).unwrap();
    let report = verify_symmetry(&du, &id, ConditionSet::default().conditions(), 1).unwrap();
    assert!(report.iter().any(|r| !r.passed));
    assert!(!report[6].passed);
}

#[test]
fn every_solved_field_passes_verification() {
    let id = ideal();
    let basis = solve_system(&assemble_harrison(&id, &HarrisonOptions::default()).unwrap());
    for f in &basis.fields {
        assert!(verify_symmetry(f, &id, ConditionSet::default().conditions(), 1).unwrap().iter().all(|r| r.passed));
    }
}

#[test]
fn classical_kdv_recovers_point_symmetries() {
    let pde = kdv();
    let base = pde.jet().with_order(0);
    let deg2 = solve_system(&assemble_classical(&pde, &ClassicalOptions::default()).unwrap());
    assert_eq!(deg2.dim(), 4);
    assert!(fields_span_equal(&deg2.fields, &fields(base.chart(), &X_FIELDS)));
    for f in &deg2.fields {
        let pr = prolong(f, 3, &base).unwrap();
        assert!(on_solution_reduce(&apply_to_equation(&pr, &pde).unwrap(), &pde).unwrap().vanishes());
    }
    let deg1 = solve_system(&assemble_classical(&pde, &ClassicalOptions { degree: 1, ..Default::default() }).unwrap());
    assert!(fields_span_equal(&deg1.fields, &deg2.fields));
    let deg3 = solve_system(&assemble_classical(&pde, &ClassicalOptions { degree: 3, ..Default::default() }).unwrap());
    assert!(fields_span_equal(&deg3.fields, &deg2.fields));
}

#[test]
fn classical_and_harrison_agree() {
    let id = ideal();
    let pde = kdv();
    let base = pde.jet().with_order(0);
    let h = solve_system(&assemble_harrison(&id, &HarrisonOptions::default()).unwrap());
    let c = solve_system(&assemble_classical(&pde, &ClassicalOptions::default()).unwrap());
    let prolonged: Vec<_> = c.fields.iter().map(|f| prolong(f, 2, &base).unwrap()).collect();
    assert!(fields_span_equal(&prolonged, &h.fields));
    let points: Vec<_> = h
        .fields
        .iter()
        .map(|f| {
            let comps = f.components().filter(|(k, _)| *k < 3).map(|(k, p)| (k, p.rechart(base.chart()).unwrap()));
            VectorField::from_components(base.chart(), comps)
        })
        .collect();
    assert!(fields_span_equal(&points, &c.fields));
}

#[test]
fn classical_trivial_equation_has_translations() {
    let pde = PdeSpec::parse(JetSpec::kdv(1), "u_x", "u_x").unwrap();
    let b = solve_system(&assemble_classical(&pde, &ClassicalOptions { degree: 0, ..Default::default() }).unwrap());
    let chart = pde.jet().with_order(0).chart().clone();
    assert!(fields_span_equal(&b.fields, &fields(&chart, &["t: 1", "x: 1", "u: 1"])));
}

#[test]
fn classical_third_order_ode_contains_translation_and_scaling() {
    let pde = PdeSpec::parse(JetSpec::new(&["x"], &["y"], 3).unwrap(), "y_xxx + y*y_x", "y_xxx").unwrap();
    let b = solve_system(&assemble_classical(&pde, &ClassicalOptions { degree: 1, ..Default::default() }).unwrap());
    let chart = pde.jet().with_order(0).chart().clone();
    let mut with = b.fields.clone();
    with.extend(fields(&chart, &["x: 1", "x: x; y: -2*y"]));
    assert!(fields_span_equal(&b.fields, &with));
}

fn residual_coefficient(sys: &DeterminingSystem, id: &ContactIdeal, values: &[Scalar], tag: &RowTag) -> Scalar {
    let g = tag.generator.unwrap();
    let v = sys.field_from(values);
    let mut form = id.alpha(g).lie_derivative(&v).unwrap();
    for (u, val) in sys.unknowns.iter().zip(values) {
        if let Unknown::Multiplier { generator, other, mono } = u {
            if *generator == g {
                let m = Poly::term(id.chart(), mono.clone(), val.clone());
                form = form.sub(&id.alpha(*other).scale(&m)).unwrap();
            }
        }
    }
    form.component(&tag.component).coeff(&tag.monomial)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rows_reproduce_form_coefficients(seed in prop::collection::vec(-4i64..5, 72 + 63 * 2), pick in 0usize..10_000) {
        let id = ideal();
        let opts = HarrisonOptions { conditions: ConditionSet::uniform(&[1, 7], ConditionMode::Module), ..Default::default() };
        let sys = assemble_harrison(&id, &opts).unwrap();
        prop_assert_eq!(sys.num_unknowns(), seed.len());
        let values: Vec<Scalar> = seed.iter().map(|&v| scalar::int(v)).collect();
        let r = pick % sys.rows.len();
        let row = &sys.matrix.rows()[r];
        let lhs = row.iter().fold(scalar::zero(), |acc, (c, a)| acc + a * &values[*c]);
        prop_assert_eq!(lhs, residual_coefficient(&sys, &id, &values, &sys.rows[r]));
    }
}
