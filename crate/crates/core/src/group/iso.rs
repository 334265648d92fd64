use super::enumerate::extend_from_generators;
use super::{FiniteGroup, Group};

/// An isomorphism `g → h` as a map table, if one exists.
///
/// Exhaustive over images of the generators of `g`, pruned by element order.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<usize>> {
    if g.order() != h.order() {
        return None;
    }
    let mut profile_g: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
    let mut profile_h: Vec<usize> = h.elements().map(|x| h.element_order(x)).collect();
    let orders_h = profile_h.clone();
    profile_g.sort_unstable();
    profile_h.sort_unstable();
    if profile_g != profile_h {
        return None;
    }
    let gens = g.generators();
    let choices: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| {
            let o = g.element_order(x);
            h.elements().filter(|&y| orders_h[y] == o).collect()
        })
        .collect();
    let mut images = vec![0; gens.len()];
    search(g, h, &gens, &choices, &mut images, 0)
}

fn search(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    choices: &[Vec<usize>],
    images: &mut Vec<usize>,
    i: usize,
) -> Option<Vec<usize>> {
    if i == gens.len() {
        let map = extend_from_generators(g, h, gens, images)?;
        let mut seen = vec![false; h.order()];
        for &y in &map {
            if std::mem::replace(&mut seen[y], true) {
                return None;
            }
        }
        return Some(map);
    }
    for &y in &choices[i] {
        images[i] = y;
        if extend_from_generators(g, h, &gens[..=i], &images[..=i]).is_none() {
            continue;
        }
        if let Some(map) = search(g, h, gens, choices, images, i + 1) {
            return Some(map);
        }
    }
    None
}
