use super::*;
use crate::closedform::Expr;
use crate::exterior::{parse_field, parse_form, DiffForm};
use crate::par::Exec;
use crate::symkernel::{parse_ratfunc, scalar, CoordChart, RatFunc};

fn xy() -> crate::symkernel::Chart {
    CoordChart::plain(&["x", "y"]).unwrap()
}

fn xyz() -> crate::symkernel::Chart {
    CoordChart::plain(&["x", "y", "z"]).unwrap()
}

#[test]
fn one_form_in_the_plane_is_integrable() {
    let ch = xy();
    let w = parse_form("dy - (x^2*y + 3*x)*dx", &ch).unwrap();
    let (ok, wedge) = frobenius_1form(&w).unwrap();
    assert!(ok);
    assert!(wedge.is_zero());
}

#[test]
fn contact_form_is_not_integrable() {
    let ch = xyz();
    let w = parse_form("dz - y*dx", &ch).unwrap();
    let (ok, wedge) = frobenius_1form(&w).unwrap();
    assert!(!ok);
    assert_eq!(wedge.render(), "dx^dy^dz");
    let exact = DiffForm::<RatFunc>::differential(&ch, 0).scale(&parse_ratfunc("y", &ch).unwrap()).add(&DiffForm::differential(&ch, 1).scale(&parse_ratfunc("x", &ch).unwrap())).unwrap();
    assert!(frobenius_1form(&exact).unwrap().0);
    assert!(frobenius_1form(&exact.d()).is_err());
}

#[test]
fn involutivity_per_form() {
    let ch = xyz();
    let a = parse_form("dz - y*dx", &ch).unwrap();
    let b = parse_form("dy", &ch).unwrap();
    assert_eq!(involutivity(&[a.clone(), b.clone()]).unwrap(), vec![true, true]);
    assert_eq!(involutivity(&[a.clone(), parse_form("dx", &ch).unwrap()]).unwrap(), vec![true, true]);
    assert_eq!(involutivity(std::slice::from_ref(&a)).unwrap(), vec![false]);
    let ch4 = CoordChart::plain(&["x", "y", "z", "w"]).unwrap();
    let forms = [parse_form("dz - y*dx", &ch4).unwrap(), parse_form("dw", &ch4).unwrap()];
    assert_eq!(involutivity(&forms).unwrap(), vec![false, true]);
    assert!(matches!(involutivity(&[b.clone(), b.scale(&parse_ratfunc("x", &ch).unwrap())]), Err(IntegrableError::Dependent)));
}

#[test]
fn symmetries_of_a_distribution() {
    let ch = xy();
    let d = Distribution::from_forms(&ch, vec![parse_form("dy - y*dx", &ch).unwrap()]).unwrap();
    let dx = parse_field("x: 1", &ch).unwrap();
    let g = sym_of_distribution(&dx, &d).unwrap().unwrap();
    assert!(g[0][0].is_zero());
    let scale = parse_field("y: y", &ch).unwrap();
    assert_eq!(sym_of_distribution(&scale, &d).unwrap().unwrap()[0][0], RatFunc::one(&ch));
    let shear = parse_field("y: x", &ch).unwrap();
    assert!(sym_of_distribution(&shear, &d).unwrap().is_none());
}

#[test]
fn z_matrix_and_barred_forms() {
    let ch = xy();
    let w = parse_form("dy - x*y*dx", &ch).unwrap();
    let d = Distribution::from_forms(&ch, vec![w]).unwrap();
    let rep = z_matrix(&d, &[parse_field("x: 1; y: 1", &ch).unwrap()]).unwrap();
    assert_eq!(rep.z[0][0], parse_ratfunc("1 - x*y", &ch).unwrap());
    assert!(!rep.closed[0]);
    let rep = z_matrix(&d, &[parse_field("y: 1", &ch).unwrap()]).unwrap();
    assert_eq!(rep.z[0][0], RatFunc::one(&ch));
    let rep = z_matrix(&d, &[parse_field("y: y", &ch).unwrap()]).unwrap();
    assert_eq!(rep.z[0][0], parse_ratfunc("y", &ch).unwrap());
    assert_eq!(rep.barred[0], parse_form("1/y*dy - x*dx", &ch).unwrap());
    assert!(rep.closed[0]);
    assert_eq!(z_matrix(&d, &[parse_field("x: 1", &ch).unwrap()]).unwrap().z[0][0], parse_ratfunc("-x*y", &ch).unwrap());
    assert!(matches!(z_matrix(&d, &[]), Err(IntegrableError::NotSquare(1, 0))));
    let flat = Distribution::from_forms(&ch, vec![parse_form("dy", &ch).unwrap()]).unwrap();
    assert!(matches!(z_matrix(&flat, &[parse_field("x: 1", &ch).unwrap()]), Err(IntegrableError::SingularZ)));
}

#[test]
fn identity_z_for_coordinate_distribution() {
    let ch = xyz();
    let d = Distribution::from_forms(&ch, vec![parse_form("dx", &ch).unwrap(), parse_form("dy", &ch).unwrap()]).unwrap();
    let rep = z_matrix(&d, &[parse_field("x: 1", &ch).unwrap(), parse_field("y: 1", &ch).unwrap()]).unwrap();
    assert_eq!(rep.inverse, rep.z);
    assert_eq!(rep.closed, vec![true, true]);
}

#[test]
fn ratfunc_inverse_round_trip() {
    let ch = xy();
    let z = vec![
        vec![parse_ratfunc("x", &ch).unwrap(), parse_ratfunc("1", &ch).unwrap()],
        vec![parse_ratfunc("y", &ch).unwrap(), parse_ratfunc("x + y", &ch).unwrap()],
    ];
    let inv = ratfunc_inverse(&ch, &z).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let s = (0..2).fold(RatFunc::zero(&ch), |acc, k| &acc + &(&z[i][k] * &inv[k][j]));
            assert_eq!(s, if i == j { RatFunc::one(&ch) } else { RatFunc::zero(&ch) });
        }
    }
    let singular = vec![vec![RatFunc::one(&ch), RatFunc::one(&ch)], vec![RatFunc::one(&ch), RatFunc::one(&ch)]];
    assert!(ratfunc_inverse(&ch, &singular).is_none());
}

#[test]
fn first_integral_of_closed_forms() {
    let ch = xy();
    let w = parse_form("y*dx + x*dy", &ch).unwrap();
    let spec = FirstIntegralSpec::new(w, vec![0.0, 0.0], 1e-12).unwrap();
    for &(x, y) in &[(1.0, 2.0), (-0.5, 3.0), (2.5, -1.5)] {
        assert!((first_integral_numeric(&spec, &[x, y]).unwrap() - x * y).abs() < 1e-10);
    }
    let w = parse_form("dx - 1/y*dy", &ch).unwrap();
    let spec = FirstIntegralSpec::new(w, vec![0.0, 1.0], 1e-12).unwrap();
    for x in [0.3f64, 1.0, 2.0] {
        assert!(first_integral_numeric(&spec, &[x, x.exp()]).unwrap().abs() < 1e-9);
    }
    assert!(matches!(FirstIntegralSpec::new(parse_form("y*dx", &ch).unwrap(), vec![0.0, 0.0], 1e-10), Err(IntegrableError::NotClosed)));
}

#[test]
fn first_integral_is_path_independent() {
    let ch = xy();
    let w = parse_form("(2*x*y + 1)*dx + (x^2 - 3*y^2)*dy", &ch).unwrap();
    let spec = FirstIntegralSpec::new(w, vec![0.2, -0.4], 1e-12).unwrap();
    let p = [1.7, 0.9];
    let a = spec.value(&p, &PathPlan::default()).unwrap();
    let b = spec.value(&p, &PathPlan { waypoints: vec![], axis_order: Some(vec![1, 0]) }).unwrap();
    let c = spec.value(&p, &PathPlan { waypoints: vec![vec![-1.0, 2.0], vec![3.0, 0.5]], axis_order: None }).unwrap();
    let exact = |x: f64, y: f64| x * x * y + x - y * y * y;
    let want = exact(p[0], p[1]) - exact(0.2, -0.4);
    for v in [a, b, c] {
        assert!((v - want).abs() < 1e-9);
    }
}

#[test]
fn singular_path_is_reported() {
    let ch = xy();
    let spec = FirstIntegralSpec::new(parse_form("1/y*dy", &ch).unwrap(), vec![0.0, -1.0], 1e-10).unwrap();
    assert!(matches!(spec.value(&[0.0, 1.0], &PathPlan::default()), Err(IntegrableError::SingularOnPath(_))));
}

#[test]
fn simpson_reaches_tolerance() {
    let v = adaptive_simpson(&|x: f64| Some(x.sin()), 0.0, std::f64::consts::PI, 1e-12).unwrap();
    assert!((v - 2.0).abs() < 1e-11);
    assert_eq!(adaptive_simpson(&|_| None, 1.0, 1.0, 1e-10).unwrap(), 0.0);
}

#[test]
fn kdv_reduction_first_integral() {
    let c = scalar::int(4);
    let z = scalar::zero();
    let opts = KdvFirstIntegralOptions { exec: Exec::Sequential, ..Default::default() };
    let r = kdv_first_integral(&c, &z, &z, &opts).unwrap();
    assert!(r.closed);
    assert!(!r.degenerate);
    assert!(r.truncated_at.is_none());
    assert_eq!(r.samples.len(), 21);
    assert!(r.max_drift < 1e-6, "drift {}", r.max_drift);
    assert_eq!(r.spec.as_ref().unwrap().form().component(&[0]), Expr::one());
    assert_eq!(r.z, Expr::func(crate::closedform::Func::Sqrt, radicand(&c, &z, &z)).neg());
    for &(y, v, _) in &r.samples {
        let exact = 12.0 / ((y - 3.0).cosh().powi(2));
        assert!((v - exact).abs() / exact < 1e-4, "y={y} v={v} exact={exact}");
    }
}

#[test]
fn kdv_first_integral_parallel_matches_sequential() {
    let c = scalar::int(1);
    let z = scalar::zero();
    let seq = kdv_first_integral(&c, &z, &z, &KdvFirstIntegralOptions { exec: Exec::Sequential, ..Default::default() }).unwrap();
    let par = kdv_first_integral(&c, &z, &z, &KdvFirstIntegralOptions { exec: Exec::Parallel, ..Default::default() }).unwrap();
    assert_eq!(seq.samples, par.samples);
}

#[test]
fn kdv_first_integral_edge_cases() {
    let c = scalar::int(4);
    let z = scalar::zero();
    let eq = kdv_first_integral(&c, &z, &z, &KdvFirstIntegralOptions { v0: Some(0.0), ..Default::default() }).unwrap();
    assert!(eq.degenerate);
    assert_eq!(eq.max_drift, 0.0);
    assert!(matches!(
        kdv_first_integral(&c, &z, &z, &KdvFirstIntegralOptions { v0: Some(20.0), ..Default::default() }),
        Err(IntegrableError::RadicandNonPositive(_))
    ));
    assert!(matches!(
        kdv_first_integral(&c, &scalar::int(1), &z, &Default::default()),
        Err(IntegrableError::MissingInitialValue)
    ));
    let near_top = kdv_first_integral(&c, &z, &z, &KdvFirstIntegralOptions { eps: -0.5, ..Default::default() }).unwrap();
    assert!(near_top.truncated_at.is_some());
    assert!(near_top.max_drift < 1e-6);
}

#[test]
fn translation_integrating_factor() {
    let ch = xy();
    let d = Distribution::from_forms(&ch, vec![parse_form("dy - y*dx", &ch).unwrap()]).unwrap();
    let rep = z_matrix(&d, &[parse_field("x: 1", &ch).unwrap()]).unwrap();
    assert_eq!(rep.z[0][0], parse_ratfunc("-y", &ch).unwrap());
    assert_eq!(rep.barred[0], parse_form("dx - 1/y*dy", &ch).unwrap());
    assert!(rep.closed[0]);
}

#[test]
fn kdv_first_integral_constant_radicand_term() {
    let z = scalar::zero();
    let opts = KdvFirstIntegralOptions { v0: Some(0.0), y_end: 0.5, ..Default::default() };
    let r = kdv_first_integral(&z, &z, &scalar::frac(1, 2), &opts).unwrap();
    assert!(r.closed);
    assert!(r.spec.unwrap().form().d().is_zero());
    assert!(r.max_drift < 1e-6, "drift {}", r.max_drift);
}
