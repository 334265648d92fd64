use super::{FiniteGroup, Group, GroupError};

/// Checks that `map` is a homomorphism `dom → cod`.
///
/// On failure returns the lexicographically least pair `(x, y)` with
/// `map(x·y) ≠ map(x)·map(y)`. The fast path only tests left factors drawn
/// from a generating set, which is sufficient: if `f(g·w) = f(g)·f(w)` for
/// every generator `g` and every `w`, induction on word length gives the
/// full identity.
pub fn hom_witness<D: Group, C: Group>(
    dom: &D,
    cod: &C,
    map: impl Fn(usize) -> usize,
) -> Option<(usize, usize)> {
    let n = dom.order();
    let gens = dom.generators();
    let fast_ok = map(0) == 0
        && gens.iter().all(|&g| {
            let fg = map(g);
            (0..n).all(|w| map(dom.op(g, w)) == cod.op(fg, map(w)))
        });
    if fast_ok {
        return None;
    }
    for x in 0..n {
        let fx = map(x);
        for y in 0..n {
            if map(dom.op(x, y)) != cod.op(fx, map(y)) {
                return Some((x, y));
            }
        }
    }
    unreachable!("generator test failed but no witness pair exists")
}

pub fn is_hom<D: Group, C: Group>(dom: &D, cod: &C, map: impl Fn(usize) -> usize) -> bool {
    hom_witness(dom, cod, map).is_none()
}

/// A validated homomorphism between tabulated groups.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    dom: FiniteGroup,
    cod: FiniteGroup,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(dom: &FiniteGroup, cod: &FiniteGroup, map: Vec<usize>) -> Result<Self, GroupError> {
        check_map_shape(dom, cod, &map)?;
        if let Some((x, y)) = hom_witness(dom, cod, |a| map[a]) {
            return Err(GroupError::NotHomomorphism(x, y));
        }
        Ok(GroupHom { dom: dom.clone(), cod: cod.clone(), map })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        GroupHom { dom: g.clone(), cod: g.clone(), map: g.elements().collect() }
    }

    pub fn trivial(dom: &FiniteGroup, cod: &FiniteGroup) -> Self {
        GroupHom { dom: dom.clone(), cod: cod.clone(), map: vec![0; dom.order()] }
    }

    pub(crate) fn from_parts_unchecked(dom: &FiniteGroup, cod: &FiniteGroup, map: Vec<usize>) -> Self {
        GroupHom { dom: dom.clone(), cod: cod.clone(), map }
    }

    pub fn dom(&self) -> &FiniteGroup {
        &self.dom
    }

    pub fn cod(&self) -> &FiniteGroup {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    pub fn into_table(self) -> Vec<usize> {
        self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &GroupHom) -> Result<GroupHom, GroupError> {
        if other.cod != self.dom {
            return Err(GroupError::Mismatch("composition: codomain of inner map is not the domain of outer map"));
        }
        let map = other.map.iter().map(|&x| self.map[x]).collect();
        Ok(GroupHom { dom: other.dom.clone(), cod: self.cod.clone(), map })
    }

    pub fn kernel(&self) -> Subgroup {
        let elements = self.dom.elements().filter(|&x| self.map[x] == 0).collect();
        Subgroup { parent: self.dom.clone(), elements }
    }

    pub fn image(&self) -> Subgroup {
        let mut elements: Vec<usize> = self.map.clone();
        elements.sort_unstable();
        elements.dedup();
        Subgroup { parent: self.cod.clone(), elements }
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn is_trivial(&self) -> bool {
        self.map.iter().all(|&x| x == 0)
    }
}

impl std::fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupHom({} -> {}: {:?})", self.dom.name(), self.cod.name(), self.map)
    }
}

pub(crate) fn check_map_shape(dom: &FiniteGroup, cod: &FiniteGroup, map: &[usize]) -> Result<(), GroupError> {
    if map.len() != dom.order() {
        return Err(GroupError::MapLength { expected: dom.order(), found: map.len() });
    }
    if let Some(i) = map.iter().position(|&v| v >= cod.order()) {
        return Err(GroupError::MapOutOfRange { index: i, value: map[i], order: cod.order() });
    }
    Ok(())
}

/// A subgroup given by its sorted element list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subgroup {
    parent: FiniteGroup,
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn new(parent: &FiniteGroup, mut elements: Vec<usize>) -> Result<Self, GroupError> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(GroupError::NotSubgroup("does not contain the identity"));
        }
        if elements.iter().any(|&x| x >= parent.order()) {
            return Err(GroupError::NotSubgroup("element out of range"));
        }
        let mut member = vec![false; parent.order()];
        for &x in &elements {
            member[x] = true;
        }
        for &a in &elements {
            if !member[parent.inv(a)] {
                return Err(GroupError::NotSubgroup("not closed under inverses"));
            }
            for &b in &elements {
                if !member[parent.op(a, b)] {
                    return Err(GroupError::NotSubgroup("not closed under the operation"));
                }
            }
        }
        Ok(Subgroup { parent: parent.clone(), elements })
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Subgroup { parent: parent.clone(), elements: parent.elements().collect() }
    }

    pub fn trivial(parent: &FiniteGroup) -> Self {
        Subgroup { parent: parent.clone(), elements: vec![0] }
    }

    /// Elements fixed by an endomorphism table.
    pub fn fixed_points(parent: &FiniteGroup, endo: &[usize]) -> Result<Self, GroupError> {
        Subgroup::new(parent, parent.elements().filter(|&x| endo[x] == x).collect())
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Position of a parent element inside the sorted element list.
    pub fn index_of(&self, x: usize) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    /// The subgroup as a group in its own right; element `i` is the parent
    /// element `elements()[i]`, so index 0 is again the identity.
    pub fn to_group(&self, name: impl Into<String>) -> FiniteGroup {
        let n = self.elements.len();
        let mut table = vec![0; n * n];
        for (i, &a) in self.elements.iter().enumerate() {
            for (j, &b) in self.elements.iter().enumerate() {
                table[i * n + j] = self.index_of(self.parent.op(a, b)).expect("subgroup is closed");
            }
        }
        FiniteGroup::from_table_unchecked(name, n, table)
    }

    /// Whether every element of `self` commutes with every element of
    /// `other`. Returns the least non-commuting pair otherwise.
    pub fn commutator_witness(&self, other: &Subgroup) -> Option<(usize, usize)> {
        commuting_witness(&self.parent, &self.elements, &other.elements)
    }

    pub fn centralizes(&self, other: &Subgroup) -> bool {
        self.commutator_witness(other).is_none()
    }
}

/// Least pair `(h, k)` with `h·k ≠ k·h`, over two element sets.
pub fn commuting_witness<G: Group>(g: &G, hs: &[usize], ks: &[usize]) -> Option<(usize, usize)> {
    for &h in hs {
        for &k in ks {
            if g.op(h, k) != g.op(k, h) {
                return Some((h, k));
            }
        }
    }
    None
}

pub fn centralizes(h: &Subgroup, k: &Subgroup) -> Result<bool, GroupError> {
    if h.parent != k.parent {
        return Err(GroupError::Mismatch("subgroups of different groups"));
    }
    Ok(h.centralizes(k))
}
