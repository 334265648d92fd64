use super::{FiniteGroup, Group, GroupAction, GroupHom};

const UNSET: usize = usize::MAX;

/// Extends an assignment of generator images along the right Cayley graph.
/// Returns `None` when two words disagree, which happens exactly when the
/// assignment extends to no homomorphism.
pub(crate) fn extend_from_generators<D: Group, C: Group>(
    dom: &D,
    cod: &C,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let mut map = vec![UNSET; dom.order()];
    map[0] = 0;
    let mut queue = vec![0usize];
    while let Some(w) = queue.pop() {
        for (&g, &img) in gens.iter().zip(images) {
            let wg = dom.op(w, g);
            let m = cod.op(map[w], img);
            if map[wg] == UNSET {
                map[wg] = m;
                queue.push(wg);
            } else if map[wg] != m {
                return None;
            }
        }
    }
    Some(map)
}

/// All homomorphism tables `dom → cod`, sorted lexicographically.
pub fn enumerate_hom_tables<D: Group, C: Group>(dom: &D, cod: &C) -> Vec<Vec<usize>> {
    let gens = dom.generators();
    // an image must have order dividing the generator's order
    let choices: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let og = dom.element_order(g);
            (0..cod.order()).filter(|&y| og % cod.element_order(y) == 0).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut images = vec![0; gens.len()];
    fn rec<D: Group, C: Group>(
        dom: &D,
        cod: &C,
        gens: &[usize],
        choices: &[Vec<usize>],
        images: &mut Vec<usize>,
        i: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == gens.len() {
            if let Some(map) = extend_from_generators(dom, cod, gens, images) {
                out.push(map);
            }
            return;
        }
        for &y in &choices[i] {
            images[i] = y;
            // prune on the prefix: the subgroup generated so far must map consistently
            if extend_from_generators(dom, cod, &gens[..=i], &images[..=i]).is_some() {
                rec(dom, cod, gens, choices, images, i + 1, out);
            }
        }
    }
    rec(dom, cod, &gens, &choices, &mut images, 0, &mut out);
    out.sort();
    out.dedup();
    out
}

pub fn enumerate_homs(dom: &FiniteGroup, cod: &FiniteGroup) -> Vec<GroupHom> {
    enumerate_hom_tables(dom, cod).into_iter().map(|m| GroupHom::from_parts_unchecked(dom, cod, m)).collect()
}

pub fn enumerate_endos(g: &FiniteGroup) -> Vec<GroupHom> {
    enumerate_homs(g, g)
}

pub fn automorphisms(g: &FiniteGroup) -> Vec<GroupHom> {
    enumerate_endos(g)
        .into_iter()
        .filter(|f| {
            let mut seen = vec![false; g.order()];
            f.table().iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
        .collect()
}

/// All actions of `b` on `x` by automorphisms, sorted by their dense table.
pub fn enumerate_actions(b: &FiniteGroup, x: &FiniteGroup) -> Vec<GroupAction> {
    let auts: Vec<Vec<usize>> = automorphisms(x).into_iter().map(GroupHom::into_table).collect();
    let k = auts.len();
    // Aut(x) under composition, with index 0 the identity since it sorts first
    debug_assert!(auts[0].iter().enumerate().all(|(i, &v)| i == v));
    let position = |p: &Vec<usize>| auts.binary_search(p).expect("automorphisms closed under composition");
    let mut table = vec![0; k * k];
    for (i, p) in auts.iter().enumerate() {
        for (j, q) in auts.iter().enumerate() {
            let pq: Vec<usize> = q.iter().map(|&v| p[v]).collect();
            table[i * k + j] = position(&pq);
        }
    }
    let aut_group = FiniteGroup::from_table_unchecked("Aut", k, table);
    let mut out: Vec<GroupAction> = enumerate_hom_tables(b, &aut_group)
        .into_iter()
        .map(|f| {
            let dense = f.iter().flat_map(|&a| auts[a].iter().copied()).collect();
            GroupAction::from_table_unchecked(b, x, dense)
        })
        .collect();
    out.sort_by(|p, q| p.table().cmp(q.table()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, is_hom};

    fn brute_force_homs(g: &FiniteGroup, h: &FiniteGroup) -> Vec<Vec<usize>> {
        let n = g.order();
        let m = h.order();
        let mut out = Vec::new();
        let total = m.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let map: Vec<usize> = (0..n)
                .map(|_| {
                    let d = c % m;
                    c /= m;
                    d
                })
                .collect();
            let ok = (0..n).all(|x| (0..n).all(|y| map[g.op(x, y)] == h.op(map[x], map[y])));
            if ok {
                out.push(map);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn small_counts() {
        let z2 = catalog::cyclic(2);
        let z3 = catalog::cyclic(3);
        assert_eq!(enumerate_homs(&z2, &z2).len(), 2);
        assert_eq!(enumerate_homs(&z2, &z3).len(), 1);
        assert_eq!(enumerate_actions(&z3, &catalog::cyclic(1)).len(), 1);
    }

    #[test]
    fn matches_brute_force_up_to_order_six() {
        let groups: Vec<FiniteGroup> = catalog::small_groups(6);
        for g in &groups {
            for h in &groups {
                // brute force is |H|^|G|; keep it bounded
                if (h.order() as f64).powi(g.order() as i32) > 5e5 {
                    continue;
                }
                let fast = enumerate_hom_tables(g, h);
                assert_eq!(fast, brute_force_homs(g, h), "{} -> {}", g.name(), h.name());
                assert!(fast.iter().all(|m| is_hom(g, h, |x| m[x])));
            }
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&catalog::symmetric(3)).len(), 6);
        assert_eq!(automorphisms(&catalog::klein_four()).len(), 6);
        assert_eq!(automorphisms(&catalog::cyclic(5)).len(), 4);
        assert_eq!(automorphisms(&catalog::quaternion()).len(), 24);
        assert_eq!(automorphisms(&catalog::dihedral(4)).len(), 8);
    }

    #[test]
    fn actions_are_valid_and_sorted() {
        let z2 = catalog::cyclic(2);
        let v4 = catalog::klein_four();
        let acts = enumerate_actions(&z2, &v4);
        // involutions of GL(2,2) ≅ S3 plus the identity
        assert_eq!(acts.len(), 4);
        for a in &acts {
            assert!(GroupAction::new(&z2, &v4, &a.rows()).is_ok());
        }
        assert!(acts.windows(2).all(|w| w[0].table() < w[1].table()));
        assert!(acts[0].is_trivial());
        assert_eq!(enumerate_actions(&catalog::symmetric(3), &catalog::symmetric(3)).len(), 10);
    }
}
