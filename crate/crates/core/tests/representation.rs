use inertia_forge::graph::{find_ktree_embedding, gen, Graph, KTreeEmbedding, Step};
use inertia_forge::linalg::{rat, BilinearForm, Rat, Subspace};
use inertia_forge::repr::{
    build_representation, check_new_vertex, extend_vertex, verify_representation, BuildError,
    CheckTag, Representation, SamplerConfig,
};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn v(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| rat(x)).collect()
}

fn path3() -> (Graph, KTreeEmbedding) {
    let g = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
    let e = KTreeEmbedding {
        k: 1,
        base: vec![1, 2],
        steps: vec![Step { z: 3, q: vec![2] }],
        dummies: vec![],
    };
    (g, e)
}

/// v1 = (1,0,0), v2 = (0,1,1), v3 = (1,1,-1) under the identity form.
fn hand_built_path() -> Representation {
    let (g, e) = path3();
    let mut rep = Representation::new(g, e, BilinearForm::identity(3), 0).unwrap();
    rep.set_vector(1, v(&[1, 0, 0]));
    rep.set_vector(2, v(&[0, 1, 1]));
    rep.set_vector(3, v(&[1, 1, -1]));
    rep
}

#[test]
fn hand_built_path_satisfies_all_conditions() {
    let rep = hand_built_path();
    let f = &rep.form;
    assert_eq!(f.bilinear(rep.vector(1).unwrap(), rep.vector(2).unwrap()).unwrap(), rat(0));
    assert_eq!(f.bilinear(rep.vector(2).unwrap(), rep.vector(3).unwrap()).unwrap(), rat(0));
    assert_eq!(f.bilinear(rep.vector(1).unwrap(), rep.vector(3).unwrap()).unwrap(), rat(1));
    let report = verify_representation(&rep);
    assert!(report.all_pass(), "{report:?}");
}

#[test]
fn built_path_passes_verification() {
    let (g, e) = path3();
    for seed in 0..5 {
        let (rep, trace) =
            build_representation(&g, &e, &BilinearForm::identity(3), &SamplerConfig::with_seed(seed))
                .unwrap();
        assert!(rep.is_complete());
        assert!(verify_representation(&rep).all_pass());
        assert_eq!(trace.records.len(), 3);
        assert_eq!(trace.seed, seed);
    }
}

#[test]
fn check_new_vertex_examples() {
    let (g, e) = path3();
    let mut rep = Representation::new(g, e, BilinearForm::identity(3), 0).unwrap();
    rep.set_vector(1, v(&[1, 0, 0]));
    rep.set_vector(2, v(&[0, 1, 1]));

    assert_eq!(check_new_vertex(&rep, 3, &v(&[1, 1, -1])).unwrap(), vec![]);

    let tags = check_new_vertex(&rep, 3, &v(&[0, 1, -1])).unwrap();
    assert!(tags.contains(&CheckTag::Pattern), "{tags:?}");

    // a multiple of v1 lies in span({1}), a k-clique of H
    let tags = check_new_vertex(&rep, 3, &v(&[2, 0, 0])).unwrap();
    assert!(tags.contains(&CheckTag::OutsideOldCliques), "{tags:?}");
    assert!(!tags.contains(&CheckTag::Orthogonality));
}

#[test]
fn extension_samples_from_neighbour_complement() {
    let (g, e) = path3();
    let mut rep = Representation::new(g, e, BilinearForm::identity(3), 0).unwrap();
    rep.set_vector(1, v(&[1, 0, 0]));
    rep.set_vector(2, v(&[0, 1, 1]));
    let (x, record) = extend_vertex(&rep, 3, &[2], &SamplerConfig::with_seed(11)).unwrap();
    assert_eq!(record.subspace_dim, 2);
    // L = {x : x2 + x3 = 0}
    assert_eq!(&x[1] + &x[2], rat(0));
    assert!(check_new_vertex(&rep, 3, &x).unwrap().is_empty());
}

#[test]
fn isolated_vertex_samples_from_whole_space() {
    // vertex 3 attaches to 2 in H but has no edge in G
    let g = Graph::from_edges(3, &[(1, 2)]).unwrap();
    let (_, e) = path3();
    let (_, trace) =
        build_representation(&g, &e, &BilinearForm::identity(3), &SamplerConfig::default()).unwrap();
    assert_eq!(trace.record(3).unwrap().subspace_dim, 3);
    assert_eq!(trace.record(1).unwrap().subspace_dim, 3);
    assert_eq!(trace.record(2).unwrap().subspace_dim, 2);
}

#[test]
fn single_edge_base() {
    let g = Graph::from_edges(2, &[(1, 2)]).unwrap();
    let e = find_ktree_embedding(&g, 1).unwrap();
    let f = BilinearForm::identity(3);
    let (rep, _) = build_representation(&g, &e, &f, &SamplerConfig::default()).unwrap();
    let (a, b) = (rep.vector(1).unwrap(), rep.vector(2).unwrap());
    assert!(!f.bilinear(a, a).unwrap().is_zero());
    assert!(!f.bilinear(b, b).unwrap().is_zero());
    assert!(f.bilinear(a, b).unwrap().is_zero());
    assert!(f.is_nondegenerate_set(&[a, b]).unwrap());
}

#[test]
fn padded_single_vertex() {
    let g = Graph::empty(1);
    let e = find_ktree_embedding(&g, 1).unwrap();
    assert_eq!(e.dummies, vec![2]);
    let f = BilinearForm::signature(1, 2);
    let (rep, _) = build_representation(&g, &e, &f, &SamplerConfig::default()).unwrap();
    let a = rep.vector(1).unwrap();
    assert!(!f.bilinear(a, a).unwrap().is_zero());
    assert!(verify_representation(&rep).all_pass());
}

#[test]
fn small_bound_forces_recorded_retries() {
    // With coefficients in {-2..2} under an indefinite form, some seed must
    // reject its first candidate; the run still ends in a valid representation.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = gen::random_partial_ktree(7, 2, 0.6, &mut rng);
    let e = find_ktree_embedding(&g, 2).unwrap();
    let f = BilinearForm::signature(2, 2);
    let mut saw_anisotropy = false;
    for seed in 0..200 {
        let cfg = SamplerConfig {
            seed,
            coord_bound: 2,
            ..SamplerConfig::default()
        };
        let (rep, trace) = build_representation(&g, &e, &f, &cfg).unwrap();
        if trace.total_retries() > 0 {
            assert!(verify_representation(&rep).all_pass());
            if trace
                .records
                .iter()
                .flat_map(|r| r.failed.iter().flatten())
                .any(|t| *t == CheckTag::Anisotropy)
            {
                saw_anisotropy = true;
                break;
            }
        }
    }
    assert!(saw_anisotropy, "no seed produced an isotropic first draw");
}

#[test]
fn exhausted_retries_carry_the_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = gen::random_partial_ktree(8, 2, 0.7, &mut rng);
    let e = find_ktree_embedding(&g, 2).unwrap();
    let f = BilinearForm::signature(2, 2);
    let mut hit = false;
    for seed in 0..300 {
        let cfg = SamplerConfig {
            seed,
            coord_bound: 2,
            max_retries: 1,
            grow: false,
        };
        match build_representation(&g, &e, &f, &cfg) {
            Ok(_) => {}
            Err(BuildError::RetriesExhausted { vertex, retries, trace }) => {
                assert_eq!(retries, 1);
                let last = trace.records.last().unwrap();
                assert_eq!(last.vertex, vertex);
                assert_eq!(last.failed.len(), 2);
                assert!(trace.records.iter().all(|r| r.retries <= 1));
                hit = true;
                break;
            }
            Err(other) => panic!("unexpected error {other}"),
        }
    }
    assert!(hit);
}

#[test]
fn tampering_is_detected() {
    let mut rep = hand_built_path();
    rep.set_vector(3, v(&[0, 1, -1]));
    let report = verify_representation(&rep);
    assert!(!report.c1.pass);
    assert!(report.c1.witnesses.iter().any(|w| w.sets == vec![vec![1, 3]]));

    let mut rep = hand_built_path();
    rep.set_vector(3, v(&[1, 0, 0]));
    let report = verify_representation(&rep);
    assert!(report.c1.pass);
    assert!(!report.c4.pass);
    assert!(report.c4.witnesses.iter().any(|w| w.sets == vec![vec![1], vec![3]]));

    let mut rep = hand_built_path();
    rep.set_vector(2, v(&[0, 0, 0]));
    let report = verify_representation(&rep);
    assert!(!report.c2.pass);
    assert!(report.c2.witnesses.iter().any(|w| w.sets == vec![vec![2]]));
}

#[test]
fn refuses_small_dimension() {
    let (g, e) = path3();
    assert!(matches!(
        build_representation(&g, &e, &BilinearForm::identity(2), &SamplerConfig::default()),
        Err(BuildError::DimensionTooSmall { m: 2, k: 1 })
    ));
}

#[test]
fn representation_json_shape() {
    let rep = hand_built_path();
    let s = serde_json::to_string(&rep).unwrap();
    assert_eq!(
        s,
        r#"{"m":3,"k":1,"vectors":{"1":["1","0","0"],"2":["0","1","1"],"3":["1","1","-1"]},"seed":0}"#
    );
}

fn arb_case() -> impl Strategy<Value = (Graph, usize, usize, usize, u64)> {
    (1usize..=3, 0usize..=6, any::<u64>(), 0usize..=3, 0.3f64..1.0).prop_map(
        |(k, extra, gseed, extra_m, keep)| {
            let n = k + 1 + extra;
            let mut rng = ChaCha8Rng::seed_from_u64(gseed);
            let g = gen::random_partial_ktree(n, k, keep, &mut rng);
            let m = k + 2 + extra_m;
            let p = (gseed as usize) % (m + 1);
            (g, k, m, p, gseed)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn builds_verify_and_are_deterministic((g, k, m, p, seed) in arb_case()) {
        let e = find_ktree_embedding(&g, k).unwrap();
        let f = BilinearForm::signature(p, m - p);
        let cfg = SamplerConfig::with_seed(seed);
        let (rep, _) = build_representation(&g, &e, &f, &cfg).unwrap();
        let report = verify_representation(&rep);
        prop_assert!(report.all_pass(), "{:?}", report.failed_conditions());

        let (again, _) = build_representation(&g, &e, &f, &cfg).unwrap();
        prop_assert_eq!(&rep, &again);

        // every prefix of the placement order spans min(m, t) dimensions
        for t in 1..=rep.placed().len() {
            let prefix: Vec<&Vec<Rat>> =
                rep.placed()[..t].iter().map(|v| rep.vector(*v).unwrap()).collect();
            prop_assert_eq!(Subspace::span(m, &prefix).unwrap().dim(), m.min(t));
        }

        // adjacent vertices are exactly orthogonal
        for (a, b) in g.edges() {
            prop_assert!(f.bilinear(rep.vector(a).unwrap(), rep.vector(b).unwrap()).unwrap().is_zero());
        }
    }
}
