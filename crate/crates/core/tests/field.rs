use std::io::Cursor;

use axiblow::field::*;
use axiblow::profiles::{garabedian_profile, stokes_corner};
use axiblow::Error;
use proptest::prelude::*;

fn round_trip(g: &GridField) -> GridField {
    let mut buf = Vec::new();
    write_axifield(&mut buf, g).unwrap();
    read_axifield(Cursor::new(buf)).unwrap()
}

#[test]
fn file_round_trip_on_disk() {
    let g = GridField::sample(&garabedian_profile().unwrap(), Rect::new(0.0, 1.0, -0.5, 0.5), 33, 17)
        .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.axf");
    g.save(&path).unwrap();
    let back = GridField::load(&path).unwrap();
    assert_eq!(back.values(), g.values());
    assert_eq!((back.nx(), back.ny()), (33, 17));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("AXIFIELD 1\n33 17 "));
}

#[test]
fn malformed_files() {
    let bad = [
        "",
        "AXIFIELD 2\n2 2 0 1 0 1\n0 0\n0 0\n",
        "AXIFIELD 1\n2 2 0 1 0 1\n0 0\n",
        "AXIFIELD 1\n2 2 0 1 0 1\n0 0\n0 x\n",
        "AXIFIELD 1\n2 2 0 1 0 1\n1 0\n0 0\n",
        "AXIFIELD 1\n2 2 1 0 0 1\n0 0\n0 0\n",
    ];
    for text in bad {
        match read_axifield(Cursor::new(text)) {
            Err(Error::Format { .. }) => {}
            other => panic!("{text:?}: {other:?}"),
        }
    }
}

#[test]
fn stokes_free_boundary_condition() {
    let s = stokes_corner(1.0).unwrap();
    // on the boundary rays 60 degrees either side of the upward vertical
    for rho in [0.1, 0.3, 0.5] {
        for theta in [std::f64::consts::FRAC_PI_3, -std::f64::consts::FRAC_PI_3] {
            let p = s.vertex().polar(rho, theta);
            assert!(fb_residual(&s, p).unwrap().abs() < 1e-12, "{p:?}");
        }
    }
    let inside = Point::new(1.0, 0.3);
    assert!(pde_residual(&s, inside).unwrap().value.abs() < 1e-6);
}

#[test]
fn extraction_finds_the_bubble_boundary() {
    let g = garabedian_profile().unwrap();
    let grid = GridField::sample(&g, Rect::new(0.0, 1.0, -0.5, 0.5), 257, 257).unwrap();
    let c = extract_free_boundary(&grid, Point::new(0.2, 0.1)).unwrap();
    let theta_star = axiblow::specfun::find_z0(1e-12).unwrap().theta_star;
    let mut checked = 0;
    for p in &c.vertices {
        let rho = p.x1.hypot(p.x2);
        if rho > 0.05 && rho < 0.4 {
            let theta = p.x1.atan2(p.x2);
            assert!((theta - theta_star).abs() < 5e-3, "{p:?}");
            checked += 1;
        }
    }
    assert!(checked > 10);
}

#[test]
fn positive_field_has_no_boundary() {
    let f = FnField::new(|p: Point| (1.0 + p.x1, [1.0, 0.0]));
    let grid = GridField::sample(&f, Rect::new(0.0, 1.0, 0.0, 1.0), 9, 9).unwrap();
    assert!(matches!(
        extract_free_boundary(&grid, Point::new(0.5, 0.5)),
        Err(Error::EmptyCurve)
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn axifield_round_trip_is_bit_identical(
        nx in 2usize..12,
        ny in 2usize..12,
        seed in proptest::collection::vec(-1e6f64..1e6, 144),
        x2_min in -10.0f64..10.0,
        width in 1e-3f64..50.0,
    ) {
        let mut values: Vec<f64> = seed[..nx * ny].to_vec();
        for j in 0..ny {
            values[j * nx] = 0.0;
        }
        let g = GridField::new(nx, ny, Rect::new(0.0, width, x2_min, x2_min + width), values).unwrap();
        let back = round_trip(&g);
        prop_assert_eq!(back.rect(), g.rect());
        for (a, b) in back.values().iter().zip(g.values()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn velocity_is_rotation_equivariant(
        x1 in 0.05f64..0.9,
        z in -0.4f64..0.4,
        phi in 0.0f64..std::f64::consts::TAU,
        psi in 0.0f64..std::f64::consts::TAU,
    ) {
        let g = garabedian_profile().unwrap();
        let v = velocity_at(&g, x1 * phi.cos(), x1 * phi.sin(), z).unwrap().v;
        let w = velocity_at(&g, x1 * (phi + psi).cos(), x1 * (phi + psi).sin(), z).unwrap().v;
        let (c, s) = (psi.cos(), psi.sin());
        let rotated = [c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]];
        for k in 0..3 {
            prop_assert!((rotated[k] - w[k]).abs() < 1e-12);
        }
    }
}
