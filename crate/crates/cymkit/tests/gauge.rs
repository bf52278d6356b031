use cymkit::forms::PointMetric;
use cymkit::gauge::*;
use cymkit::grid::ProductGrid4;
use cymkit::Quaternion;
use proptest::prelude::*;

fn unit(a: [f64; 4]) -> Quaternion {
    let q = Quaternion::from_array(a);
    q.scale(1.0 / q.norm())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn constant_rotation_preserves_density(g in prop::array::uniform4(-1.0f64..1.0), x in prop::array::uniform4(-2.0f64..2.0)) {
        prop_assume!(Quaternion::from_array(g).norm() > 0.1);
        let g = unit(g);
        let x = Quaternion::from_array(x);
        let f = basic_curvature(x);
        let r = f.conjugate_by(g);
        prop_assert!((f.wedge_self().trace() - r.wedge_self().trace()).abs() < 1e-12);
        let m = PointMetric::flat();
        prop_assert!((m.norm_sqr(&f) - m.norm_sqr(&r)).abs() < 1e-12);
    }

    #[test]
    fn basic_density_is_radial(x in prop::array::uniform4(-3.0f64..3.0)) {
        let x = Quaternion::from_array(x);
        let d = basic_curvature(x).wedge_self().trace();
        let want = 48.0 / (1.0 + x.norm_sqr()).powi(4);
        prop_assert!((d - want).abs() < 1e-12 * want.max(1.0));
    }
}

#[test]
fn finite_difference_asd_defect_is_second_order() {
    let defect = |n: usize| {
        let grid = ProductGrid4::cube(-1.5, 1.5, n);
        let a = ConnectionField::on_grid(ConnectionSource::Basic, &grid).unwrap();
        asd_residual(&curvature_fd(&a).unwrap(), &PointMetric::flat()).unwrap().interior_max()
    };
    let (c, f) = (defect(13), defect(25));
    let order = (c / f).log2();
    assert!((order - 2.0).abs() < 0.3, "{c} {f}");
}

#[test]
fn sampled_charge_needs_integrable_decay() {
    let grid = ProductGrid4::cube(-1.0, 1.0, 5);
    let a = ConnectionField::on_grid(ConnectionSource::Basic, &grid).unwrap();
    let p = ConnectionField::perturbed(&a, |_| [Quaternion::new(0.0, 0.0, 0.0, 0.0); 4], None);
    assert!(instanton_number(&p, 1e-3).unwrap_err().is_input());
    let p = ConnectionField::perturbed(&a, |_| [Quaternion::new(0.0, 0.0, 0.0, 0.0); 4], Some(-0.5));
    assert!(instanton_number(&p, 1e-3).unwrap_err().is_input());
}

#[test]
fn charge_is_translation_and_scale_invariant() {
    for (b, l) in [(Quaternion::new(0.5, -0.2, 0.0, 1.0), 1.0), (Quaternion::new(0.0, 0.0, 0.0, 0.0), 2.5)] {
        let s = InstantonSpec::new(vec![b], vec![l]).unwrap();
        let c = charge_quadrature(&s, 1e-3).unwrap();
        assert!((c.value - 1.0).abs() < 1e-3, "{c:?}");
    }
}
