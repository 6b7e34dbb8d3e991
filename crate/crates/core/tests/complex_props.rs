use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use projquad::complex::*;
use projquad::setkit::LabelSet;

fn alternating_cycle(len: u32) -> TwoColouredComplex {
    let verts = (1..=len)
        .map(|i| VertexRef::new(i, LabelSet::from([i]), if i % 2 == 1 { Colour::Black } else { Colour::White }))
        .collect();
    TwoColouredComplex::from_facets(verts, (1..=len).map(|i| vec![i, i % len + 1])).unwrap()
}

fn random_complex() -> impl Strategy<Value = TwoColouredComplex> {
    (
        proptest::collection::vec(any::<bool>(), 8),
        proptest::collection::vec(proptest::collection::btree_set(1u32..=8, 1..=4), 1..10),
    )
        .prop_map(|(colours, facets)| {
            let verts = (1..=8u32)
                .map(|i| VertexRef::new(i, LabelSet::from([i]), if colours[i as usize - 1] { Colour::Black } else { Colour::White }))
                .collect();
            TwoColouredComplex::from_facets(verts, facets.into_iter().map(|s| s.into_iter().collect::<Vec<_>>())).unwrap()
        })
}

fn all_faces(k: &TwoColouredComplex) -> BTreeSet<Vec<VertexId>> {
    let mut out = BTreeSet::new();
    for d in 0..=k.dimension().unwrap_or(0) {
        out.extend(k.faces_of_dim(d).into_iter().map(Face::into_vec));
    }
    out
}

fn is_maximal(k: &TwoColouredComplex) -> bool {
    let fs = k.facets();
    fs.iter().enumerate().all(|(i, f)| fs.iter().enumerate().all(|(j, g)| i == j || !f.is_subset_of(g)))
}

proptest! {
    #[test]
    fn facets_stay_maximal(k in random_complex()) {
        prop_assert!(is_maximal(&k));
        for f in k.facets() {
            prop_assert!(k.is_face(f));
        }
    }

    #[test]
    fn mirror_twice_is_identity_up_to_ids(k in random_complex()) {
        let (m, map1) = k.mirror_with_colour_swap();
        let (mm, map2) = m.mirror_with_colour_swap();
        let phi: BTreeMap<VertexId, VertexId> = map1.iter().map(|(a, b)| (*a, map2[b])).collect();
        prop_assert!(check_isomorphism(&k, &mm, &phi));
        for v in k.vertices() {
            prop_assert_eq!(m.colour(map1[&v.id]), v.colour.flip());
        }
    }

    #[test]
    fn canonical_ids_are_dense_and_sorted(k in random_complex()) {
        let (c, map) = k.canonicalized();
        prop_assert!(check_isomorphism(&k, &c, &map));
        let ids: Vec<VertexId> = c.vertex_ids().into_iter().collect();
        prop_assert_eq!(ids, (1..=k.num_vertices() as u32).collect::<Vec<_>>());
        let keys: Vec<(Colour, LabelSet)> = c.vertices().map(|v| (v.colour, v.label.clone())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        prop_assert_eq!(keys, sorted);
    }

    #[test]
    fn contraction_replaces_endpoints(k in random_complex(), pick in any::<proptest::sample::Index>()) {
        let edges: Vec<Face> = k
            .faces_of_dim(1)
            .into_iter()
            .filter(|e| k.colour(e[0]) == k.colour(e[1]))
            .collect();
        prop_assume!(!edges.is_empty());
        let e = pick.get(&edges);
        let (keep, gone) = (e[0], e[1]);
        let mut c = k.clone();
        c.contract_edge(keep, gone, LabelSet::from([99])).unwrap();
        prop_assert!(is_maximal(&c));
        prop_assert!(c.vertex(gone).is_none());
        let want: BTreeSet<Vec<VertexId>> = all_faces(&k)
            .into_iter()
            .map(|f| {
                let mut g: Vec<VertexId> = f.into_iter().map(|v| if v == gone { keep } else { v }).collect();
                g.sort_unstable();
                g.dedup();
                g
            })
            .collect();
        prop_assert_eq!(all_faces(&c), want);
    }

    #[test]
    fn induced_subcomplex_is_faces_inside(k in random_complex(), keep in proptest::collection::btree_set(1u32..=8, 0..8)) {
        let sub = k.induced_subcomplex(&keep);
        let want: BTreeSet<Vec<VertexId>> = all_faces(&k).into_iter().filter(|f| f.iter().all(|v| keep.contains(v))).collect();
        prop_assert_eq!(all_faces(&sub), want);
    }

    #[test]
    fn same_colour_clones_commute(len in 3u32..8, a in 1u32..8, b in 1u32..8) {
        let len = len * 2;
        prop_assume!(a <= len && b <= len && a != b && a % 2 == b % 2);
        let cycle = alternating_cycle(len);
        let run = |first: VertexId, second: VertexId| {
            let mut sh = ShellResult::from_sphere(&cycle).unwrap();
            sh.add_clone(first, LabelSet::from([100 + first]), Tag::Permanent).unwrap();
            sh.add_clone(second, LabelSet::from([100 + second]), Tag::Permanent).unwrap();
            let facets: BTreeSet<Vec<(Colour, LabelSet)>> = sh.complex.facets().iter().map(|f| {
                let mut v: Vec<_> = f.iter().map(|&i| (sh.complex.colour(i), sh.complex.label(i).clone())).collect();
                v.sort();
                v
            }).collect();
            let ib: BTreeSet<LabelSet> = sh.interior_boundary.iter().map(|&i| sh.complex.label(i).clone()).collect();
            let mut recount = sh.clone();
            recount.recompute_interior();
            assert_eq!(recount.interior_boundary, sh.interior_boundary);
            (facets, ib)
        };
        prop_assert_eq!(run(a, b), run(b, a));
    }
}

#[test]
fn clone_never_touches_the_exterior() {
    let cycle = alternating_cycle(10);
    let mut sh = ShellResult::from_sphere(&cycle).unwrap();
    let before = sh.exterior_boundary.clone();
    for v in [1, 3, 5, 7, 9] {
        sh.add_clone(v, LabelSet::from([20 + v]), Tag::Permanent).unwrap();
        assert_eq!(sh.exterior_boundary, before);
    }
    assert_eq!(sh.exterior_facets().len(), 10);
}

#[test]
fn glue_cones_along_hexagon() {
    let hex = alternating_cycle(6);
    let mut top = hex.clone();
    let apex = top.add_vertex(LabelSet::from([7]), Colour::Black, Tag::Permanent);
    top.join_with_vertex(apex, &hex).unwrap();
    let mut other = hex.clone();
    let apex2 = other.add_vertex(LabelSet::from([8]), Colour::White, Tag::Permanent);
    other.join_with_vertex(apex2, &hex).unwrap();
    let ident: BTreeMap<VertexId, VertexId> = (1..=6).map(|i| (i, i)).collect();
    let (sphere, _) = top.union_identify(&other, &ident).unwrap();
    assert_eq!(sphere.num_vertices(), 8);
    assert_eq!(sphere.f_vector(), vec![8, 18, 12]);
    assert_eq!(sphere.euler_characteristic(), 2);
}
