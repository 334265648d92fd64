use bicat_core::bicat_data::{check_conditions, BicatData};
use bicat_core::group::catalog;
use bicat_core::group::{FiniteGroup, Group};
use bicat_core::search::{enumerate_bicat_data, enumerate_crossed_modules, SearchConfig};

/// Every function `{0..n} -> {0..m}` as a table, in lexicographic order.
fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..m).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

fn brute_homs(dom: &FiniteGroup, cod: &FiniteGroup) -> Vec<Vec<usize>> {
    all_maps(dom.order(), cod.order())
        .into_iter()
        .filter(|f| dom.elements().all(|a| dom.elements().all(|b| f[dom.op(a, b)] == cod.op(f[a], f[b]))))
        .collect()
}

/// Row `b` of the table is the permutation by which `b` acts.
fn brute_actions(b: &FiniteGroup, x: &FiniteGroup) -> Vec<Vec<usize>> {
    let nx = x.order();
    all_maps(b.order() * nx, nx)
        .into_iter()
        .filter(|t| {
            let act = |g: usize, a: usize| t[g * nx + a];
            x.elements().all(|a| act(0, a) == a)
                && b.elements().all(|g| {
                    b.elements().all(|k| x.elements().all(|a| act(b.op(g, k), a) == act(g, act(k, a))))
                        && x.elements().all(|a| x.elements().all(|c| act(g, x.op(a, c)) == x.op(act(g, a), act(g, c))))
                })
        })
        .collect()
}

fn naive_enumeration(x: &FiniteGroup, b: &FiniteGroup) -> Vec<BicatData> {
    let endos = brute_homs(x, x);
    let homs = brute_homs(x, b);
    let actions = brute_actions(b, x);
    let mut out = Vec::new();
    for h in &homs {
        for s in &endos {
            for t in &endos {
                for l in &endos {
                    for r in &endos {
                        for xi in &actions {
                            let d = BicatData::new(x, b, h.clone(), s.clone(), t.clone(), l.clone(), r.clone(), xi.clone())
                                .unwrap();
                            if check_conditions(&d).passed() {
                                out.push(d);
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(|d| d.canonical_key());
    out
}

fn up_to_three() -> Vec<FiniteGroup> {
    vec![catalog::cyclic(1), catalog::cyclic(2), catalog::cyclic(3)]
}

#[test]
fn layered_search_matches_naive_enumeration() {
    for x in up_to_three() {
        for b in up_to_three() {
            let layered: Vec<BicatData> =
                enumerate_bicat_data(&x, &b, SearchConfig::default()).unwrap().structures.into_iter().map(|s| s.data).collect();
            let naive = naive_enumeration(&x, &b);
            assert_eq!(layered, naive, "{}/{}", x.name(), b.name());
        }
    }
}

#[test]
fn crossed_modules_match_naive_filter() {
    for x in up_to_three() {
        for b in up_to_three() {
            let fast: Vec<BicatData> = enumerate_crossed_modules(&x, &b).structures.into_iter().map(|s| s.data).collect();
            let naive: Vec<BicatData> = naive_enumeration(&x, &b).into_iter().filter(|d| d.is_identity_collapse()).collect();
            assert_eq!(fast, naive, "{}/{}", x.name(), b.name());
        }
    }
}

#[test]
fn frozen_counts() {
    let z2 = catalog::cyclic(2);
    let z3 = catalog::cyclic(3);
    let z4 = catalog::cyclic(4);
    let v4 = catalog::klein_four();
    let count = |x: &FiniteGroup, b: &FiniteGroup| enumerate_bicat_data(x, b, SearchConfig::default()).unwrap().count();
    assert_eq!(count(&z2, &z2), 3);
    assert_eq!(count(&z2, &z3), 2);
    assert_eq!(count(&z4, &z2), 5);
    assert_eq!(count(&v4, &z2), 191);
}

#[test]
fn output_is_sorted_and_duplicate_free() {
    let v4 = catalog::klein_four();
    let r = enumerate_bicat_data(&v4, &catalog::cyclic(2), SearchConfig::default()).unwrap();
    let keys: Vec<Vec<usize>> = r.structures.iter().map(|s| s.data.canonical_key()).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn counts_do_not_depend_on_worker_count() {
    let v4 = catalog::klein_four();
    let z4 = catalog::cyclic(4);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| enumerate_bicat_data(&v4, &z4, SearchConfig::default()).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one, four);
}

#[test]
fn every_structure_satisfies_the_source_target_laws() {
    let v4 = catalog::klein_four();
    for s in enumerate_bicat_data(&v4, &v4, SearchConfig::default()).unwrap().structures {
        let d = s.data;
        let (sm, tm) = (d.s(), d.t());
        assert!(v4.elements().all(|a| sm[tm[a]] == tm[a] && tm[sm[a]] == sm[a]));
        assert!(v4.elements().all(|a| d.h()[sm[a]] == d.h()[a] && d.h()[tm[a]] == d.h()[a]));
    }
}
