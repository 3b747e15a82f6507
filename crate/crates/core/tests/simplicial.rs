use linkforge_core::simplicial::{build_path, build_prism_sphere, is_d_large, path_subrange, validate_path, vsphere_upper};
use std::collections::BTreeSet;

#[test]
fn path_counts() {
    for n in 1..=3 {
        for l in 1..=12 {
            let p = build_path(n, l).unwrap();
            assert!(validate_path(&p), "n={n} l={l}");
            let c = p.complex();
            assert_eq!(c.vertex_count(), l + n);
            assert_eq!(c.facet_count(), l);
            assert_eq!(c.boundary_ridges().len(), l * (n - 1) + 2);
            assert!(c.is_disc_like());
        }
    }
}

#[test]
fn subranges_are_discs() {
    let p = build_path(3, 6).unwrap();
    for a in 1..=6 {
        for b in a..=6 {
            let d = path_subrange(&p, a, b).unwrap();
            assert_eq!(d.facet_count(), b - a + 1);
            assert!(d.is_disc_like(), "D_{a}{b}");
        }
    }
}

#[test]
fn prism_spheres_carry_two_disjoint_copies() {
    for n in 1..=3 {
        for l in 1..=8 {
            let p = build_path(n, l).unwrap();
            let disc = p.complex();
            let nt = n * disc.boundary_ridges().len();
            for m in 0..=20 {
                let prism = build_prism_sphere(disc, m).unwrap();
                let sc = prism.sphere.complex();
                assert_eq!(sc.vertex_count() as u64, vsphere_upper(disc, m as u64), "n={n} l={l} m={m}");
                assert!(prism.extra_facets >= m);
                if nt >= m {
                    assert_eq!(prism.extra_facets, nt);
                    assert_eq!(prism.appended_path_length, None);
                }
                assert!(sc.is_pseudomanifold() && sc.is_coherently_oriented() && sc.vertex_links_connected());
                assert_eq!(sc.euler_characteristic(), if n % 2 == 0 { 2 } else { 0 });

                let copies = &prism.copies;
                let a: BTreeSet<_> = copies.preserving.image();
                let b: BTreeSet<_> = copies.reversing.image();
                assert!(a.is_disjoint(&b));
                assert_eq!((copies.preserving.sign, copies.reversing.sign), (1, -1));
                assert_eq!(sc.facet_count(), 2 * l + prism.extra_facets);
                assert!(is_d_large(&prism.sphere, disc).unwrap().is_some(), "n={n} l={l} m={m}");
            }
        }
    }
}

#[test]
fn a_simplex_boundary_is_not_large_for_a_long_path() {
    let p = build_path(2, 4).unwrap();
    let tet = linkforge_core::TriangulatedSphere::simplex_boundary(vec![0, 1, 2, 3]).unwrap();
    assert!(is_d_large(&tet, p.complex()).unwrap().is_none());
}
