//! The Mal'tsev operation `p(x, y, z) = x·y⁻¹·z` on groups, reflexive graphs
//! presented as triples `(A, s, t)` with `st = t`, `ts = s`, the internal
//! groupoids they determine, and the calculus of 2-cells between triples.
//!
//! Every "there is a morphism whose underlying map is ..." statement becomes
//! "the pointwise map is a homomorphism", checked by [`hom_witness`] on an
//! explicit subgroup of a power of `A`.

use std::cell::Cell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bicat_data::BicatData;
use crate::group::{
    enumerate_endos, greedy_generators, hom_witness, FiniteGroup, Group, GroupError, GroupHom, SemidirectProduct,
    Subgroup,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MaltsevError {
    #[error("not a triple: {0}")]
    NotTriple(String),
    #[error("(P1) fails: p is not a homomorphism on R(s,t) at {0:?}, {1:?}")]
    P1Fails([usize; 3], [usize; 3]),
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("{what} is not a homomorphism at ({x}, {y})")]
    NotHomomorphism { what: &'static str, x: usize, y: usize },
    #[error("not a morphism of triples: {0}")]
    NotMorphism(String),
    #[error("not a 2-cell: {0}")]
    NotTwoCell(String),
    #[error("groupoid invariant fails: {0}")]
    GroupoidInvariant(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// The tuples of `Aᵏ` satisfying a predicate, indexed lexicographically.
///
/// When the set is closed under the componentwise product it is a group
/// (the identity tuple is always index 0); [`TupleGroup::is_subgroup`]
/// reports this, and the [`Group`] operations must only be used if it holds.
#[derive(Clone, Debug)]
pub struct TupleGroup {
    base: FiniteGroup,
    arity: usize,
    tuples: Vec<usize>,
    index: Vec<usize>,
    gens: Vec<usize>,
    closed: bool,
}

const ABSENT: usize = usize::MAX;

impl TupleGroup {
    pub fn new(base: &FiniteGroup, arity: usize, pred: impl Fn(&[usize]) -> bool) -> Result<Self, GroupError> {
        assert!(arity > 0);
        let n = base.order();
        let space = n
            .checked_pow(arity as u32)
            .filter(|&s| s <= 1 << 24)
            .ok_or(GroupError::Mismatch("tuple space too large"))?;
        let mut tuples = Vec::new();
        let mut index = vec![ABSENT; space];
        let mut cur = vec![0usize; arity];
        for (code, slot) in index.iter_mut().enumerate() {
            let mut c = code;
            for i in (0..arity).rev() {
                cur[i] = c % n;
                c /= n;
            }
            if pred(&cur) {
                *slot = tuples.len() / arity;
                tuples.extend_from_slice(&cur);
            }
        }
        if index[0] != 0 {
            return Err(GroupError::NotSubgroup("identity tuple excluded"));
        }
        let mut g = TupleGroup { base: base.clone(), arity, tuples, index, gens: Vec::new(), closed: false };
        let closed = Cell::new(true);
        let gens = greedy_generators(g.order(), |a, b| match g.product(a, b) {
            Some(c) => c,
            None => {
                closed.set(false);
                0
            }
        });
        g.closed = closed.get();
        g.gens = gens;
        Ok(g)
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_subgroup(&self) -> bool {
        self.closed
    }

    pub fn tuple(&self, i: usize) -> &[usize] {
        &self.tuples[i * self.arity..(i + 1) * self.arity]
    }

    pub fn position(&self, tuple: &[usize]) -> Option<usize> {
        let n = self.base.order();
        let code = tuple.iter().try_fold(0usize, |acc, &a| (a < n).then_some(acc * n + a))?;
        self.index.get(code).copied().filter(|&i| i != ABSENT)
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.tuples.chunks(self.arity)
    }

    fn product(&self, a: usize, b: usize) -> Option<usize> {
        let n = self.base.order();
        let (ta, tb) = (self.tuple(a), self.tuple(b));
        let code = ta.iter().zip(tb).fold(0, |acc, (&x, &y)| acc * n + self.base.op(x, y));
        Some(self.index[code]).filter(|&i| i != ABSENT)
    }
}

impl Group for TupleGroup {
    fn order(&self) -> usize {
        self.tuples.len() / self.arity
    }

    fn op(&self, a: usize, b: usize) -> usize {
        self.product(a, b).expect("tuple set is closed")
    }

    fn inv(&self, a: usize) -> usize {
        let n = self.base.order();
        let code = self.tuple(a).iter().fold(0, |acc, &x| acc * n + self.base.inv(x));
        self.index[code]
    }

    fn generators(&self) -> Vec<usize> {
        self.gens.clone()
    }
}

/// `(A, s, t)` with `s, t` endomorphisms of `A`, `st = t` and `ts = s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpdTriple {
    group: FiniteGroup,
    s: Vec<usize>,
    t: Vec<usize>,
}

impl GpdTriple {
    pub fn new(group: &FiniteGroup, s: Vec<usize>, t: Vec<usize>) -> Result<Self, MaltsevError> {
        let g = GpdTriple::raw(group, s, t)?;
        match g.defect() {
            Some(msg) => Err(MaltsevError::NotTriple(msg)),
            None => Ok(g),
        }
    }

    /// Only the table shapes are checked. Used where the surrounding data is
    /// itself under test and may fail the triple laws.
    pub fn raw(group: &FiniteGroup, s: Vec<usize>, t: Vec<usize>) -> Result<Self, MaltsevError> {
        let n = group.order();
        for m in [&s, &t] {
            if m.len() != n || m.iter().any(|&v| v >= n) {
                return Err(MaltsevError::NotTriple(format!("tables must map 0..{n} into 0..{n}")));
            }
        }
        Ok(GpdTriple { group: group.clone(), s, t })
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        let id: Vec<usize> = group.elements().collect();
        GpdTriple { group: group.clone(), s: id.clone(), t: id }
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        GpdTriple { group: group.clone(), s: vec![0; group.order()], t: vec![0; group.order()] }
    }

    /// The arrow group `X ⋊ B` of a crossed module, with `s(x, b) = (0, b)`
    /// and `t(x, b) = (0, h(x)b)`.
    pub fn action_groupoid(x: &FiniteGroup, b: &FiniteGroup, h: &[usize], xi: &[usize]) -> Result<Self, MaltsevError> {
        let p = SemidirectProduct::new(x.clone(), b.clone(), xi.to_vec()).map_err(GroupError::from)?;
        let a = p.to_finite_group(format!("{}:{}", x.name(), b.name()));
        let s = (0..a.order()).map(|e| p.decode(e).1).collect();
        let t = (0..a.order())
            .map(|e| {
                let (y, g) = p.decode(e);
                b.op(h[y], g)
            })
            .collect();
        GpdTriple::new(&a, s, t)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn s(&self) -> &[usize] {
        &self.s
    }

    pub fn t(&self) -> &[usize] {
        &self.t
    }

    /// First failing triple law, if any.
    pub fn defect(&self) -> Option<String> {
        let g = &self.group;
        for (name, m) in [("s", &self.s), ("t", &self.t)] {
            if let Some((x, y)) = hom_witness(g, g, |a| m[a]) {
                return Some(format!("{name} is not a homomorphism at ({x}, {y})"));
            }
        }
        if let Some(x) = g.elements().find(|&x| self.s[self.t[x]] != self.t[x]) {
            return Some(format!("st ≠ t at {x}"));
        }
        if let Some(x) = g.elements().find(|&x| self.t[self.s[x]] != self.s[x]) {
            return Some(format!("ts ≠ s at {x}"));
        }
        None
    }
}

/// Every triple over `a`, sorted by `(s, t)`.
pub fn enumerate_triples(a: &FiniteGroup) -> Vec<GpdTriple> {
    let idem: Vec<Vec<usize>> = enumerate_endos(a)
        .into_iter()
        .map(GroupHom::into_table)
        .filter(|e| a.elements().all(|x| e[e[x]] == e[x]))
        .collect();
    let mut out = Vec::new();
    for s in &idem {
        for t in &idem {
            if a.elements().all(|x| s[t[x]] == t[x] && t[s[x]] == s[x]) {
                out.push(GpdTriple { group: a.clone(), s: s.clone(), t: t.clone() });
            }
        }
    }
    out.sort_by(|p, q| (&p.s, &p.t).cmp(&(&q.s, &q.t)));
    out
}

/// `R(s,t) = {(a, b, c) : s(a) = s(b), t(b) = t(c)}`.
pub fn relation_group(g: &GpdTriple) -> Result<TupleGroup, GroupError> {
    TupleGroup::new(&g.group, 3, |r| g.s[r[0]] == g.s[r[1]] && g.t[r[1]] == g.t[r[2]])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct P1Report {
    pub holds: bool,
    /// `|R(s,t)|`
    pub relation_order: usize,
    pub relation_closed: bool,
    pub witness: Option<([usize; 3], [usize; 3])>,
}

/// Whether `(a, b, c) ↦ a·b⁻¹·c` is a homomorphism on `R(s,t)`.
pub fn check_p1(g: &GpdTriple) -> P1Report {
    let r = match relation_group(g) {
        Ok(r) => r,
        Err(_) => return P1Report { holds: false, relation_order: 0, relation_closed: false, witness: None },
    };
    if !r.is_subgroup() {
        return P1Report { holds: false, relation_order: r.order(), relation_closed: false, witness: None };
    }
    let a = &g.group;
    let w = hom_witness(&r, a, |i| {
        let t = r.tuple(i);
        a.maltsev(t[0], t[1], t[2])
    });
    let as3 = |i: usize| {
        let t = r.tuple(i);
        [t[0], t[1], t[2]]
    };
    P1Report {
        holds: w.is_none(),
        relation_order: r.order(),
        relation_closed: true,
        witness: w.map(|(i, j)| (as3(i), as3(j))),
    }
}

/// Least pair on which `x ↦ s(x)·x⁻¹·t(x)` fails to be a homomorphism.
pub fn p1_prime_witness(g: &GpdTriple) -> Option<(usize, usize)> {
    let a = &g.group;
    let sigma: Vec<usize> = a.elements().map(|x| a.maltsev(g.s[x], x, g.t[x])).collect();
    hom_witness(a, a, |x| sigma[x])
}

pub fn check_p1_prime(g: &GpdTriple) -> bool {
    p1_prime_witness(g).is_none()
}

/// A groupoid internal to groups: arrows `C1`, objects `C0 ⊆ C1` (`e` is
/// the inclusion), domain and codomain as endomorphisms of `C1` landing in
/// `C0`, composition on `C2 = {(x1, x2) : d(x1) = c(x2)}` with `x2` applied
/// first.
#[derive(Clone, Debug)]
pub struct InternalGroupoidGrp {
    pub c1: FiniteGroup,
    pub c0: Subgroup,
    pub d: GroupHom,
    pub c: GroupHom,
    pub c2: TupleGroup,
    /// `m[k]` composes the pair `c2.tuple(k)`.
    pub m: Vec<usize>,
    pub i: GroupHom,
}

impl InternalGroupoidGrp {
    pub fn new(
        c0: Subgroup,
        d: GroupHom,
        c: GroupHom,
        m: impl Fn(usize, usize) -> usize,
        i: GroupHom,
    ) -> Result<Self, MaltsevError> {
        let c1 = d.dom().clone();
        let (dt, ct) = (d.table().to_vec(), c.table().to_vec());
        let c2 = TupleGroup::new(&c1, 2, |p| dt[p[0]] == ct[p[1]])?;
        let m = c2.iter().map(|p| m(p[0], p[1])).collect();
        let g = InternalGroupoidGrp { c1, c0, d, c, c2, m, i };
        g.validate()?;
        Ok(g)
    }

    /// The action groupoid of a crossed module: an arrow `(x, b)` goes from
    /// `b` to `h(x)b`, and `(x, h(x′)b)∘(x′, b) = (x·x′, b)`.
    pub fn action_groupoid(x: &FiniteGroup, b: &FiniteGroup, h: &[usize], xi: &[usize]) -> Result<Self, MaltsevError> {
        let triple = GpdTriple::action_groupoid(x, b, h, xi)?;
        let c1 = triple.group.clone();
        let nb = b.order();
        let c0 = Subgroup::new(&c1, (0..nb).collect())?;
        let d = GroupHom::new(&c1, &c1, triple.s.clone())?;
        let c = GroupHom::new(&c1, &c1, triple.t.clone())?;
        let i_table = c1.elements().map(|e| (x.inv(e / nb)) * nb + triple.t[e]).collect();
        let i = GroupHom::new(&c1, &c1, i_table).map_err(|_| MaltsevError::GroupoidInvariant("inverse map".into()))?;
        InternalGroupoidGrp::new(c0, d, c, |a1, a2| x.op(a1 / nb, a2 / nb) * nb + a2 % nb, i)
    }

    pub fn compose(&self, x1: usize, x2: usize) -> Option<usize> {
        self.c2.position(&[x1, x2]).map(|k| self.m[k])
    }

    pub fn validate(&self) -> Result<(), MaltsevError> {
        let bad = |msg: String| Err(MaltsevError::GroupoidInvariant(msg));
        let a = &self.c1;
        if self.c0.parent() != a || self.c.dom() != a || self.i.dom() != a || self.d.cod() != a || self.c.cod() != a {
            return bad("maps must be endomorphisms of C1 and C0 a subgroup of C1".into());
        }
        for x in a.elements() {
            if !self.c0.contains(self.d.apply(x)) || !self.c0.contains(self.c.apply(x)) {
                return bad(format!("d or c of {x} is not an object"));
            }
        }
        for &z in self.c0.elements() {
            if self.d.apply(z) != z || self.c.apply(z) != z {
                return bad(format!("de ≠ 1 or ce ≠ 1 at object {z}"));
            }
        }
        if !self.c2.is_subgroup() {
            return bad("C2 is not a subgroup".into());
        }
        if let Some((p, q)) = hom_witness(&self.c2, a, |k| self.m[k]) {
            return bad(format!("m is not a homomorphism at {:?}, {:?}", self.c2.tuple(p), self.c2.tuple(q)));
        }
        for (k, p) in self.c2.iter().enumerate() {
            let v = self.m[k];
            if self.d.apply(v) != self.d.apply(p[1]) || self.c.apply(v) != self.c.apply(p[0]) {
                return bad(format!("m({}, {}) has the wrong domain or codomain", p[0], p[1]));
            }
        }
        let comp = |x1, x2| self.compose(x1, x2);
        for x in a.elements() {
            let (dx, cx, ix) = (self.d.apply(x), self.c.apply(x), self.i.apply(x));
            if comp(x, dx) != Some(x) || comp(cx, x) != Some(x) {
                return bad(format!("identities fail at {x}"));
            }
            if comp(x, ix) != Some(cx) || comp(ix, x) != Some(dx) {
                return bad(format!("i({x}) is not an inverse"));
            }
        }
        for (k, p) in self.c2.iter().enumerate() {
            let (x1, x2) = (p[0], p[1]);
            let x12 = self.m[k];
            for &x3 in a.elements().filter(|&x3| self.c.apply(x3) == self.d.apply(x2)).collect::<Vec<_>>().iter() {
                let lhs = comp(x12, x3);
                let rhs = comp(x2, x3).and_then(|x23| comp(x1, x23));
                if lhs.is_none() || lhs != rhs {
                    return bad(format!("composition is not associative at ({x1}, {x2}, {x3})"));
                }
            }
        }
        Ok(())
    }
}

/// `G(A, s, t)`: objects `Fix s`, `d = s`, `c = t`,
/// `m(x1, x2) = x1·s(x1)⁻¹·x2` and `i(x) = s(x)·x⁻¹·t(x)`.
pub fn groupoid_from_triple(g: &GpdTriple) -> Result<InternalGroupoidGrp, MaltsevError> {
    let report = check_p1(g);
    if !report.holds {
        let (p, q) = report.witness.unwrap_or(([0; 3], [0; 3]));
        return Err(MaltsevError::P1Fails(p, q));
    }
    let a = &g.group;
    let c0 = Subgroup::fixed_points(a, &g.s)?;
    let d = GroupHom::new(a, a, g.s.clone())?;
    let c = GroupHom::new(a, a, g.t.clone())?;
    let i_table = a.elements().map(|x| a.maltsev(g.s[x], x, g.t[x])).collect();
    let i = GroupHom::new(a, a, i_table).map_err(|e| match e {
        GroupError::NotHomomorphism(x, y) => MaltsevError::NotHomomorphism { what: "i", x, y },
        other => other.into(),
    })?;
    InternalGroupoidGrp::new(c0, d, c, |x1, x2| a.maltsev(x1, g.s[x1], x2), i)
}

/// `F(C) = (C1, ed, ec)`.
pub fn triple_from_groupoid(c: &InternalGroupoidGrp) -> Result<GpdTriple, MaltsevError> {
    GpdTriple::new(&c.c1, c.d.table().to_vec(), c.c.table().to_vec())
}

/// Why `f: C1 → C1′` fails to be an isomorphism of internal groupoids.
pub fn groupoid_iso_defect(g: &InternalGroupoidGrp, h: &InternalGroupoidGrp, f: &[usize]) -> Option<String> {
    let (a, b) = (&g.c1, &h.c1);
    if a.order() != b.order() || f.len() != a.order() {
        return Some("orders differ".into());
    }
    let mut seen = vec![false; b.order()];
    for &v in f {
        if v >= b.order() || std::mem::replace(&mut seen[v], true) {
            return Some("map is not a bijection".into());
        }
    }
    if let Some((x, y)) = hom_witness(a, b, |x| f[x]) {
        return Some(format!("map is not a homomorphism at ({x}, {y})"));
    }
    let objs: Vec<usize> = g.c0.elements().iter().map(|&z| f[z]).collect();
    if objs.len() != h.c0.order() || objs.iter().any(|&z| !h.c0.contains(z)) {
        return Some("objects are not matched".into());
    }
    for x in a.elements() {
        if f[g.d.apply(x)] != h.d.apply(f[x]) || f[g.c.apply(x)] != h.c.apply(f[x]) {
            return Some(format!("d or c not preserved at {x}"));
        }
        if f[g.i.apply(x)] != h.i.apply(f[x]) {
            return Some(format!("i not preserved at {x}"));
        }
    }
    for (k, p) in g.c2.iter().enumerate() {
        if h.compose(f[p[0]], f[p[1]]) != Some(f[g.m[k]]) {
            return Some(format!("composition not preserved at ({}, {})", p[0], p[1]));
        }
    }
    None
}

/// A homomorphism `f: A′ → A` with `sf = fs′` and `tf = ft′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleMorphism {
    source: GpdTriple,
    target: GpdTriple,
    map: Vec<usize>,
}

impl TripleMorphism {
    pub fn new(source: &GpdTriple, target: &GpdTriple, map: Vec<usize>) -> Result<Self, MaltsevError> {
        if let Some(msg) = morphism_defect(source, target, &map) {
            return Err(MaltsevError::NotMorphism(msg));
        }
        Ok(TripleMorphism { source: source.clone(), target: target.clone(), map })
    }

    pub fn identity(g: &GpdTriple) -> Self {
        TripleMorphism { source: g.clone(), target: g.clone(), map: g.group.elements().collect() }
    }

    pub fn source(&self) -> &GpdTriple {
        &self.source
    }

    pub fn target(&self) -> &GpdTriple {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }
}

fn morphism_defect(source: &GpdTriple, target: &GpdTriple, map: &[usize]) -> Option<String> {
    let (a1, a) = (&source.group, &target.group);
    if map.len() != a1.order() || map.iter().any(|&v| v >= a.order()) {
        return Some("table shape".into());
    }
    if let Some((x, y)) = hom_witness(a1, a, |x| map[x]) {
        return Some(format!("not a homomorphism at ({x}, {y})"));
    }
    if let Some(x) = a1.elements().find(|&x| target.s[map[x]] != map[source.s[x]]) {
        return Some(format!("sf ≠ fs′ at {x}"));
    }
    if let Some(x) = a1.elements().find(|&x| target.t[map[x]] != map[source.t[x]]) {
        return Some(format!("tf ≠ ft′ at {x}"));
    }
    None
}

/// An element of `H((A′,s′,t′), (A,s,t))`: a homomorphism `τ: A′ → A` with
/// `sτs′ = sτ` and `tτt′ = tτ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCellH {
    source: GpdTriple,
    target: GpdTriple,
    tau: Vec<usize>,
}

impl TwoCellH {
    pub fn new(source: &GpdTriple, target: &GpdTriple, tau: Vec<usize>) -> Result<Self, MaltsevError> {
        let (a1, a) = (&source.group, &target.group);
        if tau.len() != a1.order() || tau.iter().any(|&v| v >= a.order()) {
            return Err(MaltsevError::NotTwoCell("table shape".into()));
        }
        if let Some((x, y)) = hom_witness(a1, a, |x| tau[x]) {
            return Err(MaltsevError::NotHomomorphism { what: "τ", x, y });
        }
        if let Some(x) = h_defect(source, target, &tau) {
            return Err(MaltsevError::NotTwoCell(format!("sτs′ ≠ sτ or tτt′ ≠ tτ at {x}")));
        }
        Ok(TwoCellH { source: source.clone(), target: target.clone(), tau })
    }

    /// `0(f) = f`.
    pub fn zero(f: &TripleMorphism) -> Self {
        TwoCellH { source: f.source.clone(), target: f.target.clone(), tau: f.map.clone() }
    }

    pub fn tau(&self) -> &[usize] {
        &self.tau
    }

    pub fn source(&self) -> &GpdTriple {
        &self.source
    }

    pub fn target(&self) -> &GpdTriple {
        &self.target
    }

    /// `dom(τ) = sτt′·(τt′)⁻¹·τ`.
    pub fn dom(&self) -> Result<TripleMorphism, MaltsevError> {
        self.boundary(raw_dom(&self.source, &self.target, &self.tau), "dom(τ)")
    }

    /// `cod(τ) = τ·(τs′)⁻¹·tτs′`.
    pub fn cod(&self) -> Result<TripleMorphism, MaltsevError> {
        self.boundary(raw_cod(&self.source, &self.target, &self.tau), "cod(τ)")
    }

    fn boundary(&self, map: Vec<usize>, what: &'static str) -> Result<TripleMorphism, MaltsevError> {
        if let Some((x, y)) = hom_witness(&self.source.group, &self.target.group, |x| map[x]) {
            return Err(MaltsevError::NotHomomorphism { what, x, y });
        }
        TripleMorphism::new(&self.source, &self.target, map)
    }

    /// `τ + σ = τ·f⁻¹·σ` where `f = dom τ = cod σ`.
    pub fn add(&self, sigma: &TwoCellH) -> Result<TwoCellH, MaltsevError> {
        if self.source != sigma.source || self.target != sigma.target {
            return Err(MaltsevError::NotComposable("2-cells between different triples".into()));
        }
        let f = self.dom()?;
        let g = sigma.cod()?;
        if f.map != g.map {
            let x = f.map.iter().zip(&g.map).position(|(a, b)| a != b).unwrap_or(0);
            return Err(MaltsevError::NotComposable(format!("dom τ ≠ cod σ at {x}")));
        }
        let a = &self.target.group;
        let tau = (0..self.tau.len()).map(|x| a.maltsev(self.tau[x], f.map[x], sigma.tau[x])).collect();
        TwoCellH::new(&self.source, &self.target, tau)
    }

    /// `−τ = dom τ·τ⁻¹·cod τ`.
    pub fn neg(&self) -> Result<TwoCellH, MaltsevError> {
        let (f, g) = (self.dom()?, self.cod()?);
        let a = &self.target.group;
        let tau = (0..self.tau.len()).map(|x| a.maltsev(f.map[x], self.tau[x], g.map[x])).collect();
        TwoCellH::new(&self.source, &self.target, tau)
    }
}

fn h_defect(source: &GpdTriple, target: &GpdTriple, tau: &[usize]) -> Option<usize> {
    (0..tau.len()).find(|&x| {
        target.s[tau[source.s[x]]] != target.s[tau[x]] || target.t[tau[source.t[x]]] != target.t[tau[x]]
    })
}

fn raw_dom(source: &GpdTriple, target: &GpdTriple, tau: &[usize]) -> Vec<usize> {
    let a = &target.group;
    (0..tau.len())
        .map(|x| {
            let tt = tau[source.t[x]];
            a.maltsev(target.s[tt], tt, tau[x])
        })
        .collect()
}

fn raw_cod(source: &GpdTriple, target: &GpdTriple, tau: &[usize]) -> Vec<usize> {
    let a = &target.group;
    (0..tau.len())
        .map(|x| {
            let ts = tau[source.s[x]];
            a.maltsev(tau[x], ts, target.t[ts])
        })
        .collect()
}

fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    g.iter().map(|&x| f[x]).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssociativityReport {
    /// Constrained 9-tuples in total.
    pub solutions: u128,
    pub checked: u64,
    /// False when the solutions exceeded the cap and a seeded sample was
    /// checked instead.
    pub exhaustive: bool,
    pub failure: Option<[usize; 9]>,
    pub left_checked: u64,
    pub left_failure: Option<[usize; 4]>,
    pub right_checked: u64,
    pub right_failure: Option<[usize; 4]>,
}

impl AssociativityReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none() && self.left_failure.is_none() && self.right_failure.is_none()
    }
}

pub const DEFAULT_TUPLE_CAP: u64 = 1_000_000;

pub fn check_p_associativity(g: &GpdTriple) -> Result<AssociativityReport, MaltsevError> {
    check_p_associativity_with(g, DEFAULT_TUPLE_CAP, 0)
}

struct Fibers {
    by_s: Vec<Vec<usize>>,
    by_t: Vec<Vec<usize>>,
    /// `by_st[s * n + t]`
    by_st: Vec<Vec<usize>>,
}

impl Fibers {
    fn new(g: &GpdTriple) -> Self {
        let n = g.order();
        let mut f = Fibers { by_s: vec![Vec::new(); n], by_t: vec![Vec::new(); n], by_st: vec![Vec::new(); n * n] };
        for x in 0..n {
            f.by_s[g.s[x]].push(x);
            f.by_t[g.t[x]].push(x);
            f.by_st[g.s[x] * n + g.t[x]].push(x);
        }
        f
    }
}

/// Checks the nested identity
/// `p(p(x1,x2,x3), p(y1,y2,y3), p(z1,z2,z3)) = p(p(x1,y1,z1), p(x2,y2,z2), p(x3,y3,z3))`
/// over all tuples with `sx1 = sx2 = sy2 = sy1`, `tx2 = tx3`, `ty1 = tz1`,
/// `sx3 = sy3`, `sz1 = sz2`, `ty3 = tz3 = ty2 = tz2`, together with its two
/// four-variable special cases.
pub fn check_p_associativity_with(g: &GpdTriple, cap: u64, seed: u64) -> Result<AssociativityReport, MaltsevError> {
    let report = check_p1(g);
    if !report.holds {
        let (p, q) = report.witness.unwrap_or(([0; 3], [0; 3]));
        return Err(MaltsevError::P1Fails(p, q));
    }
    let a = &g.group;
    let n = a.order();
    let fib = Fibers::new(g);
    let (s, t) = (&g.s, &g.t);
    let p = |x, y, z| a.maltsev(x, y, z);
    let holds = |v: &[usize; 9]| {
        let [x1, x2, x3, y1, y2, y3, z1, z2, z3] = *v;
        p(p(x1, x2, x3), p(y1, y2, y3), p(z1, z2, z3)) == p(p(x1, y1, z1), p(x2, y2, z2), p(x3, y3, z3))
    };

    let mut solutions: u128 = 0;
    for x2 in 0..n {
        let sf = &fib.by_s[s[x2]];
        for &y1 in sf {
            for &y2 in sf {
                let tf = &fib.by_t[t[y2]];
                for &y3 in tf {
                    for &z2 in tf {
                        let nx3 = fib.by_st[s[y3] * n + t[x2]].len() as u128;
                        let nz1 = fib.by_st[s[z2] * n + t[y1]].len() as u128;
                        solutions += sf.len() as u128 * tf.len() as u128 * nx3 * nz1;
                    }
                }
            }
        }
    }

    let (checked, exhaustive, failure) = if solutions <= cap as u128 {
        let per_x2: Vec<(u64, Option<[usize; 9]>)> = (0..n)
            .into_par_iter()
            .map(|x2| {
                let mut count = 0u64;
                let sf = &fib.by_s[s[x2]];
                for &x1 in sf {
                    for &y1 in sf {
                        for &y2 in sf {
                            let tf = &fib.by_t[t[y2]];
                            for &y3 in tf {
                                for &x3 in &fib.by_st[s[y3] * n + t[x2]] {
                                    for &z2 in tf {
                                        for &z1 in &fib.by_st[s[z2] * n + t[y1]] {
                                            for &z3 in tf {
                                                count += 1;
                                                let v = [x1, x2, x3, y1, y2, y3, z1, z2, z3];
                                                if !holds(&v) {
                                                    return (count, Some(v));
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                (count, None)
            })
            .collect();
        let checked = per_x2.iter().map(|c| c.0).sum();
        (checked, true, per_x2.into_iter().find_map(|c| c.1))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pick = |rng: &mut ChaCha8Rng, v: &[usize]| v[rng.gen_range(0..v.len())];
        let mut checked = 0u64;
        let mut failure = None;
        let mut attempts = 0u64;
        while checked < cap && attempts < cap.saturating_mul(8) {
            attempts += 1;
            let x2 = rng.gen_range(0..n);
            let sf = &fib.by_s[s[x2]];
            let (x1, y1, y2) = (pick(&mut rng, sf), pick(&mut rng, sf), pick(&mut rng, sf));
            let tf = &fib.by_t[t[y2]];
            let (y3, z2, z3) = (pick(&mut rng, tf), pick(&mut rng, tf), pick(&mut rng, tf));
            let fx3 = &fib.by_st[s[y3] * n + t[x2]];
            let fz1 = &fib.by_st[s[z2] * n + t[y1]];
            if fx3.is_empty() || fz1.is_empty() {
                continue;
            }
            let (x3, z1) = (pick(&mut rng, fx3), pick(&mut rng, fz1));
            checked += 1;
            let v = [x1, x2, x3, y1, y2, y3, z1, z2, z3];
            if !holds(&v) {
                failure = Some(v);
                break;
            }
        }
        (checked, false, failure)
    };

    // p(x1, x2, p(x2, y2, z3)) = p(x1, y2, z3) for sx1 = sx2 = sy2, tx2 = ty2 = tz3
    let mut left_checked = 0u64;
    let mut left_failure = None;
    'left: for x2 in 0..n {
        for &x1 in &fib.by_s[s[x2]] {
            for &y2 in &fib.by_st[s[x2] * n + t[x2]] {
                for &z3 in &fib.by_t[t[x2]] {
                    left_checked += 1;
                    if p(x1, x2, p(x2, y2, z3)) != p(x1, y2, z3) {
                        left_failure = Some([x1, x2, y2, z3]);
                        break 'left;
                    }
                }
            }
        }
    }
    // p(p(x1, y2, z2), z2, z3) = p(x1, y2, z3) for sx1 = sy2 = sz2, ty2 = tz2 = tz3
    let mut right_checked = 0u64;
    let mut right_failure = None;
    'right: for z2 in 0..n {
        for &x1 in &fib.by_s[s[z2]] {
            for &y2 in &fib.by_st[s[z2] * n + t[z2]] {
                for &z3 in &fib.by_t[t[z2]] {
                    right_checked += 1;
                    if p(p(x1, y2, z2), z2, z3) != p(x1, y2, z3) {
                        right_failure = Some([x1, y2, z2, z3]);
                        break 'right;
                    }
                }
            }
        }
    }

    Ok(AssociativityReport {
        solutions,
        checked,
        exhaustive,
        failure,
        left_checked,
        left_failure,
        right_checked,
        right_failure,
    })
}

/// The data of a homogeneous pseudocategory in triples: `C1`, `C0`,
/// `d, c: C1 → C0`, `e: C0 → C1` and 2-cells `λ, ρ` on `C1`. Nothing is
/// validated on construction; [`pseudocat_from_data`] reports each law.
#[derive(Clone, Debug)]
pub struct PseudocatInput {
    pub c1: GpdTriple,
    pub c0: GpdTriple,
    pub d: Vec<usize>,
    pub c: Vec<usize>,
    pub e: Vec<usize>,
    pub lambda: Vec<usize>,
    pub rho: Vec<usize>,
}

impl PseudocatInput {
    /// `C1 = X ⋊ B` with `s, t, λ, ρ` acting on the first coordinate,
    /// `C0 = (B, 1, 1)`, `d(x, b) = b`, `c(x, b) = h(x)b`, `e(b) = (0, b)`.
    pub fn from_bicat_data(d: &BicatData) -> Result<Self, MaltsevError> {
        let (x, b) = (d.x(), d.b());
        let p = SemidirectProduct::new(x.clone(), b.clone(), d.xi().to_vec()).map_err(GroupError::from)?;
        let a = p.to_finite_group(format!("{}:{}", x.name(), b.name()));
        let lift = |m: &[usize]| -> Vec<usize> {
            (0..a.order())
                .map(|e| {
                    let (y, g) = p.decode(e);
                    p.encode(m[y], g)
                })
                .collect()
        };
        let c1 = GpdTriple::raw(&a, lift(d.s()), lift(d.t()))?;
        let c0 = GpdTriple::identity(b);
        let dd = (0..a.order()).map(|e| p.decode(e).1).collect();
        let cc = (0..a.order())
            .map(|e| {
                let (y, g) = p.decode(e);
                b.op(d.h()[y], g)
            })
            .collect();
        let ee = b.elements().map(|g| p.encode(0, g)).collect();
        Ok(PseudocatInput { c1, c0, d: dd, c: cc, e: ee, lambda: lift(d.lambda()), rho: lift(d.rho()) })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PseudocatCheck {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<Vec<usize>>,
}

/// Output of [`pseudocat_from_data`]. Maps on `C1` are tables over
/// `C1`; `m` is indexed by `pairs`, `alpha`, `theta` by `triples`.
#[derive(Clone, Debug)]
pub struct Pseudocategory {
    /// `{(a1, a2) : d(a1) = c(a2)}`
    pub pairs: TupleGroup,
    /// `{(a1, a2, a3) : d(a1) = c(a2), d(a2) = c(a3)}`
    pub triples: TupleGroup,
    /// `dom ρ`
    pub u: Vec<usize>,
    /// `dom λ`
    pub v: Vec<usize>,
    pub m: Vec<usize>,
    pub alpha1: Vec<usize>,
    pub alpha2: Vec<usize>,
    pub alpha3: Vec<usize>,
    pub alpha: Vec<usize>,
    /// The associator assembled from the explicit one-object-free formulas
    /// `θ = p(α1′π1, edπ1, μπ23)`, `μ = p(α2′π1, edπ1, α3′π2)` with
    /// `α1′ = p(sρ²t, ρsρt, u)`, `α2′ = p(sρλt, ρsλt, u)`,
    /// `α3′ = p(λsλt, λ²t, λ²)`.
    pub theta: Vec<usize>,
    pub checks: Vec<PseudocatCheck>,
}

impl Pseudocategory {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&PseudocatCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PseudocatCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn m_at(&self, a1: usize, a2: usize) -> Option<usize> {
        self.pairs.position(&[a1, a2]).map(|k| self.m[k])
    }
}

/// Builds `m(x1, x2) = dom(ρ)(x1)·ed(x1)⁻¹·dom(λ)(x2)` and
/// `α = p(α1π1, edπ1, p(α2π2, edπ2, α3π3))` with `α1 = ρ∘dom ρ`,
/// `α2 = −(dom ρ∘λ) + (λ∘dom ρ)`, `α3 = λ∘dom λ`, and checks every
/// hypothesis and conclusion.
pub fn pseudocat_from_data(inp: &PseudocatInput) -> Result<Pseudocategory, MaltsevError> {
    let (c1, c0) = (&inp.c1, &inp.c0);
    let a = &c1.group;
    let n = a.order();
    let n0 = c0.order();
    if inp.d.len() != n || inp.c.len() != n || inp.e.len() != n0 || inp.lambda.len() != n || inp.rho.len() != n {
        return Err(MaltsevError::NotTriple("pseudocategory table shapes".into()));
    }
    if inp.d.iter().chain(&inp.c).any(|&v| v >= n0) || inp.e.iter().chain(&inp.lambda).chain(&inp.rho).any(|&v| v >= n) {
        return Err(MaltsevError::NotTriple("pseudocategory table values out of range".into()));
    }
    let (d, c, e, l, r) = (&inp.d[..], &inp.c[..], &inp.e[..], &inp.lambda[..], &inp.rho[..]);
    let (s, t) = (&c1.s[..], &c1.t[..]);
    let mut checks = Vec::new();
    let mut push = |name: &'static str, witness: Option<Vec<usize>>| {
        checks.push(PseudocatCheck { name, passed: witness.is_none(), witness });
    };
    let first = |range: usize, bad: &dyn Fn(usize) -> bool| (0..range).find(|&x| bad(x)).map(|x| vec![x]);

    push("c1-triple", c1.defect().map(|_| vec![]));
    push("c0-triple", c0.defect().map(|_| vec![]));
    for (name, map) in [("d-morphism", d), ("c-morphism", c)] {
        push(name, morphism_defect(c1, c0, map).map(|_| vec![]));
    }
    push("e-morphism", morphism_defect(c0, c1, e).map(|_| vec![]));
    for (name, tau) in [("lambda-2-cell", l), ("rho-2-cell", r)] {
        let w = hom_witness(a, a, |x| tau[x]).map(|(x, y)| vec![x, y]).or_else(|| h_defect(c1, c1, tau).map(|x| vec![x]));
        push(name, w);
    }
    push("de=1", first(n0, &|z| d[e[z]] != z));
    push("ce=1", first(n0, &|z| c[e[z]] != z));
    push("d-lambda=d", first(n, &|x| d[l[x]] != d[x]));
    push("d-rho=d", first(n, &|x| d[r[x]] != d[x]));
    push("c-lambda=c", first(n, &|x| c[l[x]] != c[x]));
    push("c-rho=c", first(n, &|x| c[r[x]] != c[x]));
    push("lambda-e=e", first(n0, &|z| l[e[z]] != e[z]));
    push("rho-e=e", first(n0, &|z| r[e[z]] != e[z]));
    let cod_l = raw_cod(c1, c1, l);
    let cod_r = raw_cod(c1, c1, r);
    push("cod-lambda=1", first(n, &|x| cod_l[x] != x));
    push("cod-rho=1", first(n, &|x| cod_r[x] != x));
    let p1 = check_p1(c1);
    push("p1", (!p1.holds).then(|| p1.witness.map(|(p, q)| [p, q].concat()).unwrap_or_default()));

    let ed: Vec<usize> = d.iter().map(|&z| e[z]).collect();
    let u = raw_dom(c1, c1, r);
    let v = raw_dom(c1, c1, l);
    let pairs = TupleGroup::new(a, 2, |q| d[q[0]] == c[q[1]])?;
    let triples = TupleGroup::new(a, 3, |q| d[q[0]] == c[q[1]] && d[q[1]] == c[q[2]])?;
    let m: Vec<usize> = pairs.iter().map(|q| a.maltsev(u[q[0]], ed[q[0]], v[q[1]])).collect();

    let alpha1 = compose(r, &u);
    let alpha3 = compose(l, &v);
    let ul = compose(&u, l);
    let lu = compose(l, &u);
    // −(uλ) + λu: the sum needs dom(−(uλ)) = cod(uλ) to equal cod(λu)
    let neg_ul = {
        let (f, g) = (raw_dom(c1, c1, &ul), raw_cod(c1, c1, &ul));
        (0..n).map(|x| a.maltsev(f[x], ul[x], g[x])).collect::<Vec<_>>()
    };
    let f = raw_dom(c1, c1, &neg_ul);
    let g = raw_cod(c1, c1, &lu);
    push("alpha2-composable", first(n, &|x| f[x] != g[x]));
    let alpha2: Vec<usize> = (0..n).map(|x| a.maltsev(neg_ul[x], f[x], lu[x])).collect();
    let assemble = |a1: &[usize], a2: &[usize], a3: &[usize]| -> Vec<usize> {
        triples
            .iter()
            .map(|q| a.maltsev(a1[q[0]], ed[q[0]], a.maltsev(a2[q[1]], ed[q[1]], a3[q[2]])))
            .collect()
    };
    let alpha = assemble(&alpha1, &alpha2, &alpha3);

    let st_of = |m: &[usize]| compose(s, &compose(m, t));
    let rr = compose(r, r);
    let ll = compose(l, l);
    let alpha1f: Vec<usize> = {
        let (x1, x2) = (st_of(&rr), compose(r, &compose(s, &compose(r, t))));
        (0..n).map(|x| a.maltsev(x1[x], x2[x], u[x])).collect()
    };
    let alpha2f: Vec<usize> = {
        let (x1, x2) = (st_of(&compose(r, l)), compose(r, &compose(s, &compose(l, t))));
        (0..n).map(|x| a.maltsev(x1[x], x2[x], u[x])).collect()
    };
    let alpha3f: Vec<usize> = {
        let (x1, x2) = (compose(l, &compose(s, &compose(l, t))), compose(&ll, t));
        (0..n).map(|x| a.maltsev(x1[x], x2[x], ll[x])).collect()
    };
    let theta = assemble(&alpha1f, &alpha2f, &alpha3f);

    let structural = pairs.is_subgroup() && triples.is_subgroup();
    push("pullbacks-are-subgroups", (!structural).then(Vec::new));
    let hom_check = |grp: &TupleGroup, table: &[usize]| -> Option<Vec<usize>> {
        if !grp.is_subgroup() {
            return Some(vec![]);
        }
        hom_witness(grp, a, |k| table[k]).map(|(i, j)| [grp.tuple(i), grp.tuple(j)].concat())
    };
    push("m-hom", hom_check(&pairs, &m));
    // componentwise s and t on the pullbacks
    let along = |grp: &TupleGroup, q: &[usize], map: &[usize]| -> Option<usize> {
        grp.position(&q.iter().map(|&x| map[x]).collect::<Vec<_>>())
    };
    let m_morphism = pairs.iter().enumerate().find_map(|(k, q)| {
        let ok = [s, t].iter().all(|map| along(&pairs, q, map).is_some_and(|j| m[j] == map[m[k]]));
        (!ok).then(|| q.to_vec())
    });
    push("m-triple-morphism", m_morphism);
    let dm = pairs.iter().enumerate().find_map(|(k, q)| (d[m[k]] != d[q[1]]).then(|| q.to_vec()));
    push("dm=d-pi2", dm);
    let cm = pairs.iter().enumerate().find_map(|(k, q)| (c[m[k]] != c[q[0]]).then(|| q.to_vec()));
    push("cm=c-pi1", cm);
    push("alpha-hom", hom_check(&triples, &alpha));
    let alpha_cell = triples.iter().enumerate().find_map(|(k, q)| {
        let ok = [s, t].iter().all(|map| along(&triples, q, map).is_some_and(|j| map[alpha[j]] == map[alpha[k]]));
        (!ok).then(|| q.to_vec())
    });
    push("alpha-2-cell", alpha_cell);

    Ok(Pseudocategory { pairs, triples, u, v, m, alpha1, alpha2, alpha3, alpha, theta, checks })
}

/// First composable pair `((x, h(x′)b), (x′, b))` at which the pseudocategory
/// composition differs from `(u(x)·v(x′), b)`, returned as `(x, x′, b)`.
pub fn composition_mismatch(d: &BicatData, pc: &Pseudocategory) -> Option<[usize; 3]> {
    let (x, b) = (d.x(), d.b());
    let nb = b.order();
    let maps = crate::bicat_data::derive_maps(d);
    for x1 in x.elements() {
        for b1 in b.elements() {
            for x0 in x.elements() {
                let a1 = x0 * nb + b.op(d.h()[x1], b1);
                let a2 = x1 * nb + b1;
                let expected = x.op(maps.u[x0], maps.v[x1]) * nb + b1;
                if pc.m_at(a1, a2) != Some(expected) {
                    return Some([x0, x1, b1]);
                }
            }
        }
    }
    None
}
