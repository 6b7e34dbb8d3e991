use projquad::complex::Colour;
use projquad::construct::*;
use projquad::verify::{check_interior_boundary, check_sphere, check_subcomplex_chain, LinkDepth};

const SHELLS: &[(u32, u32)] = &[(7, 2), (8, 2), (9, 2), (8, 3), (9, 3), (10, 3)];

#[test]
fn schedules_agree() {
    for &(n, k) in SHELLS {
        let a = Builder::new().sphere(n, k).unwrap();
        let b = Builder::with_schedule(Schedule::Interleaved).sphere(n, k).unwrap();
        assert_eq!(labelled_facets(&a), labelled_facets(&b), "Q({n},{k})");
    }
}

#[test]
fn builds_are_deterministic() {
    for &(n, k) in &[(6, 1), (8, 2), (9, 3)] {
        let a = build_sphere(n, k).unwrap();
        let b = build_sphere(n, k).unwrap();
        assert_eq!(a.facets(), b.facets());
        assert_eq!(labelled_facets(&a), labelled_facets(&b));
    }
}

#[test]
fn interior_boundary_matches_smaller_sphere() {
    for &(n, k) in SHELLS {
        for colour in [Colour::Black, Colour::White] {
            let shell = build_shell(n, k, colour).unwrap();
            let target = build_sphere(n - 3, k - 1).unwrap();
            let out = check_interior_boundary(&shell, n, k, colour, &target);
            assert!(out.passed(), "({n},{k},{colour:?}): {out:?}");
        }
    }
}

#[test]
fn balls_have_sphere_boundaries() {
    for &(n, k) in &[(6, 1), (7, 2), (8, 2), (9, 3)] {
        let ball = build_ball(n, k, Colour::Black).unwrap();
        let bd = ball.boundary_complex();
        let prev = build_sphere(n - 1, k).unwrap();
        assert_eq!(labelled_facets(&bd), labelled_facets(&prev), "({n},{k})");
        assert!(check_sphere(&bd, (n - 2 * k - 1) as usize, LinkDepth::Auto).passed());
    }
}

#[test]
fn spheres_form_a_chain() {
    for k in 1..=3u32 {
        for n in (2 * k + 2)..=(2 * k + 4).min(10) {
            let big = build_sphere(n, k).unwrap();
            let small = build_sphere(n - 1, k).unwrap();
            assert!(check_subcomplex_chain(&big, &small).passed(), "Q({},{k}) in Q({n},{k})", n - 1);
        }
    }
}

#[test]
fn onion_holds_when_checked() {
    let mut b = Builder::new();
    b.check_onion = true;
    b.sphere(9, 2).unwrap();
    b.sphere(9, 3).unwrap();
}

#[test]
fn rejects_bad_parameters() {
    assert!(build_sphere(4, 2).is_err());
    assert!(build_sphere(3, 0).is_err());
    assert!(build_shell(5, 2, Colour::Black).is_err());
}
