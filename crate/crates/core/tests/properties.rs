use std::sync::OnceLock;

use bicat_core::bicat_data::{check_conditions, derive_maps, Alpha2, BicatData};
use bicat_core::extended::{decompose, realize, reconstruct};
use bicat_core::format::{parse_structure, write_structure, CatalogResolver};
use bicat_core::group::catalog::{self, small_groups};
use bicat_core::group::{enumerate_homs, maltsev_p, semidirect_product, FiniteGroup, Group, GroupAction};
use bicat_core::maltsev::{check_p1, check_p1_prime, enumerate_triples, groupoid_from_triple, triple_from_groupoid, GpdTriple};
use bicat_core::path::{lambda0, random_paths, rho0, verify_path_axioms, PathSuiteConfig};
use bicat_core::search::{apply_data_mutation, enumerate_bicat_data, seeded_data_mutations, SearchConfig};
use bicat_core::verify::verify_all;
use proptest::prelude::*;

#[derive(Debug)]
struct Pool {
    x: FiniteGroup,
    b: FiniteGroup,
    structures: Vec<BicatData>,
}

fn pools() -> &'static [Pool] {
    static POOLS: OnceLock<Vec<Pool>> = OnceLock::new();
    POOLS.get_or_init(|| {
        let pairs = [
            (catalog::klein_four(), catalog::cyclic(2)),
            (catalog::cyclic(4), catalog::cyclic(2)),
            (catalog::klein_four(), catalog::klein_four()),
            (catalog::cyclic(3), catalog::cyclic(3)),
        ];
        pairs
            .into_iter()
            .map(|(x, b)| {
                let structures = enumerate_bicat_data(&x, &b, SearchConfig::default())
                    .unwrap()
                    .structures
                    .into_iter()
                    .map(|s| s.data)
                    .collect();
                Pool { x, b, structures }
            })
            .collect()
    })
}

fn instance() -> impl Strategy<Value = (&'static Pool, &'static BicatData)> {
    (0..pools().len(), any::<prop::sample::Index>()).prop_map(|(p, i)| {
        let pool = &pools()[p];
        (pool, i.get(&pool.structures))
    })
}

fn triples() -> &'static [GpdTriple] {
    static TRIPLES: OnceLock<Vec<GpdTriple>> = OnceLock::new();
    TRIPLES.get_or_init(|| small_groups(8).iter().flat_map(enumerate_triples).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derived_maps_fix_the_identity((_, d) in instance()) {
        let m = derive_maps(d);
        prop_assert_eq!(m.u[0], 0);
        prop_assert_eq!(m.v[0], 0);
        prop_assert_eq!(m.alpha1[0], 0);
        prop_assert_eq!(m.alpha3[0], 0);
        for v in Alpha2::ALL {
            prop_assert_eq!(m.alpha2(v)[0], 0);
        }
    }

    #[test]
    fn unitor_condition_is_pointwise_identity((_, d) in instance()) {
        let x = d.x();
        let (s, t) = (d.s(), d.t());
        for f in [d.lambda(), d.rho()] {
            for a in x.elements() {
                prop_assert_eq!(x.op(x.op(f[a], x.inv(f[s[a]])), t[f[s[a]]]), a);
            }
        }
    }

    #[test]
    fn decompose_then_reconstruct_is_isomorphic((_, d) in instance()) {
        let (e, split) = decompose(d).unwrap();
        let r = reconstruct(&e).unwrap();
        prop_assert!(check_conditions(&r).passed());
        let x = d.x();
        let f = &split.forward;
        prop_assert!(x.elements().all(|a| split.backward[f[a]] == a));
        prop_assert!(x.elements().all(|a| f[d.s()[a]] == r.s()[f[a]] && f[d.t()[a]] == r.t()[f[a]]));
        // decompose(reconstruct(e)) gives back e itself
        let (again, _) = decompose(&r).unwrap();
        prop_assert_eq!(again, e);
    }

    #[test]
    fn realizations_satisfy_every_axiom((_, d) in instance()) {
        let (e, _) = decompose(d).unwrap();
        let rb = realize(&e).unwrap();
        let report = verify_all(&rb);
        prop_assert!(report.passed(), "{:?}", report.failures().next());
        for b in 0..rb.objects {
            let one = rb.unit1[b];
            prop_assert_eq!(rb.tensor1(one, one).unwrap(), one);
        }
    }

    #[test]
    fn accepted_mutants_are_enumerated((pool, d) in instance(), seed in any::<u64>()) {
        for m in seeded_data_mutations(d, 5, seed) {
            let mutant = apply_data_mutation(d, &m);
            if check_conditions(&mutant).passed() {
                prop_assert!(pool.structures.binary_search_by_key(&mutant.canonical_key(), |s| s.canonical_key()).is_ok());
            }
        }
    }

    #[test]
    fn structure_files_round_trip((pool, d) in instance()) {
        let xr = format!("catalog:{}", pool.x.name());
        let br = format!("catalog:{}", pool.b.name());
        let text = write_structure("sample", d, &xr, &br);
        let parsed = parse_structure(&text, "sample.struct", &CatalogResolver).unwrap();
        prop_assert_eq!(&parsed.data, d);
    }

    #[test]
    fn p1_agrees_with_its_simplification(i in any::<prop::sample::Index>()) {
        let g = i.get(triples());
        prop_assert_eq!(check_p1(g).holds, check_p1_prime(g));
    }

    #[test]
    fn groupoid_round_trip(i in any::<prop::sample::Index>()) {
        let g = i.get(triples());
        if check_p1_prime(g) {
            let c = groupoid_from_triple(g).unwrap();
            c.validate().unwrap();
            prop_assert_eq!(&triple_from_groupoid(&c).unwrap(), g);
        } else {
            prop_assert!(groupoid_from_triple(g).is_err());
        }
    }

    #[test]
    fn maltsev_identities(i in any::<prop::sample::Index>(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let gs = small_groups(8);
        let g = i.get(&gs);
        let (a, b) = (a.index(g.order()), b.index(g.order()));
        prop_assert_eq!(maltsev_p(g, a, b, b), a);
        prop_assert_eq!(maltsev_p(g, b, b, a), a);
    }

    #[test]
    fn trivial_semidirect_is_componentwise(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let gs = small_groups(6);
        let (x, b) = (i.get(&gs), j.get(&gs));
        let p = semidirect_product(x, b, &GroupAction::trivial(b, x)).unwrap();
        for e in 0..x.order() * b.order() {
            for f in 0..x.order() * b.order() {
                let ((x1, b1), (x2, b2)) = (p.decode(e), p.decode(f));
                prop_assert_eq!(p.decode(p.op(e, f)), (x.op(x1, x2), b.op(b1, b2)));
            }
        }
    }

    #[test]
    fn homs_compose(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let gs = small_groups(6);
        let (a, b, c) = (i.get(&gs), j.get(&gs), k.get(&gs));
        for f in enumerate_homs(a, b) {
            for g in enumerate_homs(b, c) {
                let gf = g.compose(&f).unwrap();
                prop_assert!(a.elements().all(|x| a.elements().all(|y| gf.apply(a.op(x, y)) == c.op(gf.apply(x), gf.apply(y)))));
            }
        }
    }

    #[test]
    fn path_suite_holds_for_any_seed(seed in any::<u64>(), dim in 1usize..4, half in 1usize..20) {
        let config = PathSuiteConfig { dim, grid: 2 * half, paths: 6, seed, tolerance: 1e-12 };
        let r = verify_path_axioms(&config).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn homotopies_are_linear_in_the_path(seed in any::<u64>(), scale in -4.0f64..4.0) {
        let z = &random_paths(2, 16, 1, seed).unwrap()[0];
        let scaled = bicat_core::path::SampledPath::new(2, 16, z.samples().iter().map(|v| v * scale).collect()).unwrap();
        for f in [rho0, lambda0] {
            let (a, b) = (f(z), f(&scaled));
            for (p, q) in a.samples().iter().zip(b.samples()) {
                prop_assert!((p * scale - q).abs() <= 1e-12 * (1.0 + q.abs()));
            }
        }
    }
}
