//! Brute-force bicategory axiom checks over explicit cell tables.
//!
//! Nothing here knows how the tables were produced. Corrupted tables (wrong
//! boundaries, missing entries) are reported as failures, never panics.

use std::fmt;

use serde::Serialize;

use crate::extended::RealizedBicategory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Globularity,
    VerticalDomain,
    VerticalAssociativity,
    VerticalUnits,
    VerticalInverses,
    TensorDomain,
    TensorBoundaries,
    Interchange,
    TensorUnits,
    UnitorTyping,
    AssociatorTyping,
    LeftUnitorNaturality,
    RightUnitorNaturality,
    AssociatorNaturalityFirst,
    AssociatorNaturalitySecond,
    AssociatorNaturalityThird,
    Pentagon,
    Triangle,
    Homogeneity,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Globularity => "globularity",
            Axiom::VerticalDomain => "vertical-domain",
            Axiom::VerticalAssociativity => "vertical-associativity",
            Axiom::VerticalUnits => "vertical-units",
            Axiom::VerticalInverses => "vertical-inverses",
            Axiom::TensorDomain => "tensor-domain",
            Axiom::TensorBoundaries => "tensor-boundaries",
            Axiom::Interchange => "interchange",
            Axiom::TensorUnits => "tensor-units",
            Axiom::UnitorTyping => "unitor-typing",
            Axiom::AssociatorTyping => "associator-typing",
            Axiom::LeftUnitorNaturality => "left-unitor-naturality",
            Axiom::RightUnitorNaturality => "right-unitor-naturality",
            Axiom::AssociatorNaturalityFirst => "associator-naturality-1",
            Axiom::AssociatorNaturalitySecond => "associator-naturality-2",
            Axiom::AssociatorNaturalityThird => "associator-naturality-3",
            Axiom::Pentagon => "pentagon",
            Axiom::Triangle => "triangle",
            Axiom::Homogeneity => "homogeneity",
        }
    }

    /// Naturality, pentagon and triangle: the laws that pin down the
    /// coherence families.
    pub fn is_coherence_law(self) -> bool {
        matches!(
            self,
            Axiom::LeftUnitorNaturality
                | Axiom::RightUnitorNaturality
                | Axiom::AssociatorNaturalityFirst
                | Axiom::AssociatorNaturalitySecond
                | Axiom::AssociatorNaturalityThird
                | Axiom::Pentagon
                | Axiom::Triangle
        )
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    /// Least failing tuple of cell indices.
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, axiom: Axiom) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn merge(mut self, other: AxiomReport) -> AxiomReport {
        self.checks.extend(other.checks);
        self
    }

    fn push(&mut self, axiom: Axiom, witness: Option<Vec<usize>>) {
        self.checks.push(AxiomCheck { axiom, passed: witness.is_none(), witness });
    }
}

/// Bounds-checked views of the tables.
struct Cells<'a> {
    rb: &'a RealizedBicategory,
    n0: usize,
    n1: usize,
    n2: usize,
}

impl<'a> Cells<'a> {
    fn new(rb: &'a RealizedBicategory) -> Self {
        Cells { rb, n0: rb.objects, n1: rb.one_source.len(), n2: rb.two_source.len() }
    }

    fn src1(&self, f: usize) -> usize {
        self.rb.one_source[f]
    }
    fn tgt1(&self, f: usize) -> usize {
        self.rb.one_target[f]
    }
    fn src2(&self, a: usize) -> usize {
        self.rb.two_source[a]
    }
    fn tgt2(&self, a: usize) -> usize {
        self.rb.two_target[a]
    }
    fn id1(&self, x: usize) -> usize {
        self.rb.unit1[x]
    }
    fn id2(&self, f: usize) -> usize {
        self.rb.unit2[f]
    }

    fn v(&self, b: usize, a: usize) -> Option<usize> {
        self.rb.vcomp.get(b * self.n2 + a).copied().flatten().filter(|&c| c < self.n2)
    }
    fn t1(&self, g: usize, f: usize) -> Option<usize> {
        self.rb.tensor1.get(g * self.n1 + f).copied().flatten().filter(|&c| c < self.n1)
    }
    fn t2(&self, b: usize, a: usize) -> Option<usize> {
        self.rb.tensor2.get(b * self.n2 + a).copied().flatten().filter(|&c| c < self.n2)
    }
    fn assoc(&self, h: usize, g: usize, f: usize) -> Option<usize> {
        let n = self.n1;
        self.rb.associator.get((h * n + g) * n + f).copied().flatten().filter(|&c| c < self.n2)
    }
    fn l(&self, f: usize) -> usize {
        self.rb.left_unitor[f]
    }
    fn r(&self, f: usize) -> usize {
        self.rb.right_unitor[f]
    }
    fn v_opt(&self, b: Option<usize>, a: Option<usize>) -> Option<usize> {
        self.v(b?, a?)
    }
    fn t2_opt(&self, b: Option<usize>, a: Option<usize>) -> Option<usize> {
        self.t2(b?, a?)
    }
    fn t1_opt(&self, g: Option<usize>, f: Option<usize>) -> Option<usize> {
        self.t1(g?, f?)
    }

    /// The 2-cells `f ⇒ f′` for each pair, as lists.
    fn two_cells_from(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n1];
        for a in 0..self.n2 {
            out[self.src2(a)].push(a);
        }
        out
    }

    /// 1-cells `f` with `target(f) = x`, per object.
    fn by_target_object(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n0];
        for f in 0..self.n1 {
            out[self.tgt1(f)].push(f);
        }
        out
    }

    /// 1-cells `f` with `source(f) = x`, per object.
    fn out_of_object(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n0];
        for f in 0..self.n1 {
            out[self.src1(f)].push(f);
        }
        out
    }
}

fn same(a: Option<usize>, b: Option<usize>) -> bool {
    matches!((a, b), (Some(x), Some(y)) if x == y)
}

fn shape_ok(rb: &RealizedBicategory) -> bool {
    let (n0, n1, n2) = (rb.objects, rb.one_source.len(), rb.two_source.len());
    rb.one_target.len() == n1
        && rb.two_target.len() == n2
        && rb.unit1.len() == n0
        && rb.unit2.len() == n1
        && rb.left_unitor.len() == n1
        && rb.right_unitor.len() == n1
        && rb.vcomp.len() == n2 * n2
        && rb.tensor1.len() == n1 * n1
        && rb.tensor2.len() == n2 * n2
        && rb.associator.len() == n1 * n1 * n1
        && rb.one_source.iter().chain(&rb.one_target).all(|&x| x < n0)
        && rb.two_source.iter().chain(&rb.two_target).all(|&f| f < n1)
        && rb.unit1.iter().all(|&f| f < n1)
        && rb.unit2.iter().chain(&rb.left_unitor).chain(&rb.right_unitor).all(|&a| a < n2)
}

fn malformed(axiom: Axiom) -> AxiomReport {
    let mut r = AxiomReport::default();
    r.push(axiom, Some(Vec::new()));
    r
}

/// Vertical composition: a category on each hom-set, with every 2-cell invertible.
pub fn verify_vertical(rb: &RealizedBicategory) -> AxiomReport {
    if !shape_ok(rb) {
        return malformed(Axiom::Globularity);
    }
    let c = Cells::new(rb);
    let mut report = AxiomReport::default();

    let glob = (0..c.n2).find(|&a| {
        c.src1(c.src2(a)) != c.src1(c.tgt2(a)) || c.tgt1(c.src2(a)) != c.tgt1(c.tgt2(a))
    });
    let glob1 = (0..c.n0).find(|&x| c.src1(c.id1(x)) != x || c.tgt1(c.id1(x)) != x);
    let glob2 = (0..c.n1).find(|&f| c.src2(c.id2(f)) != f || c.tgt2(c.id2(f)) != f);
    report.push(
        Axiom::Globularity,
        glob.map(|a| vec![a]).or(glob1.map(|x| vec![x])).or(glob2.map(|f| vec![f])),
    );

    let mut domain = None;
    'dom: for b in 0..c.n2 {
        for a in 0..c.n2 {
            let composable = c.tgt2(a) == c.src2(b);
            let ok = match c.v(b, a) {
                Some(ba) => composable && c.src2(ba) == c.src2(a) && c.tgt2(ba) == c.tgt2(b),
                None => !composable,
            };
            if !ok {
                domain = Some(vec![b, a]);
                break 'dom;
            }
        }
    }
    report.push(Axiom::VerticalDomain, domain);

    let from = c.two_cells_from();
    let mut assoc = None;
    'assoc: for a in 0..c.n2 {
        for &b in &from[c.tgt2(a)] {
            for &g in &from[c.tgt2(b)] {
                if !same(c.v_opt(c.v(g, b), Some(a)), c.v_opt(Some(g), c.v(b, a))) {
                    assoc = Some(vec![g, b, a]);
                    break 'assoc;
                }
            }
        }
    }
    report.push(Axiom::VerticalAssociativity, assoc);

    let units = (0..c.n2).find(|&a| {
        !same(c.v(c.id2(c.tgt2(a)), a), Some(a)) || !same(c.v(a, c.id2(c.src2(a))), Some(a))
    });
    report.push(Axiom::VerticalUnits, units.map(|a| vec![a]));

    let inverses = (0..c.n2).find(|&a| {
        !from[c.tgt2(a)].iter().any(|&b| {
            same(c.v(b, a), Some(c.id2(c.src2(a)))) && same(c.v(a, b), Some(c.id2(c.tgt2(a))))
        })
    });
    report.push(Axiom::VerticalInverses, inverses.map(|a| vec![a]));
    report
}

/// Horizontal composition: domains, boundaries, interchange and tensor of identities.
pub fn verify_interchange(rb: &RealizedBicategory) -> AxiomReport {
    if !shape_ok(rb) {
        return malformed(Axiom::TensorDomain);
    }
    let c = Cells::new(rb);
    let mut report = AxiomReport::default();

    let mut domain = None;
    'd1: for g in 0..c.n1 {
        for f in 0..c.n1 {
            let composable = c.src1(g) == c.tgt1(f);
            let ok = match c.t1(g, f) {
                Some(gf) => composable && c.src1(gf) == c.src1(f) && c.tgt1(gf) == c.tgt1(g),
                None => !composable,
            };
            if !ok {
                domain = Some(vec![g, f]);
                break 'd1;
            }
        }
    }
    if domain.is_none() {
        'd2: for b in 0..c.n2 {
            for a in 0..c.n2 {
                let composable = c.src1(c.src2(b)) == c.tgt1(c.src2(a));
                if c.t2(b, a).is_some() != composable {
                    domain = Some(vec![b, a]);
                    break 'd2;
                }
            }
        }
    }
    report.push(Axiom::TensorDomain, domain);

    let mut bounds = None;
    'b: for b in 0..c.n2 {
        for a in 0..c.n2 {
            if let Some(ba) = c.t2(b, a) {
                let s = c.t1(c.src2(b), c.src2(a));
                let t = c.t1(c.tgt2(b), c.tgt2(a));
                if !same(Some(c.src2(ba)), s) || !same(Some(c.tgt2(ba)), t) {
                    bounds = Some(vec![b, a]);
                    break 'b;
                }
            }
        }
    }
    report.push(Axiom::TensorBoundaries, bounds);

    let from = c.two_cells_from();
    let mut inter = None;
    'i: for b in 0..c.n2 {
        for a in 0..c.n2 {
            if c.t2(b, a).is_none() {
                continue;
            }
            for &b2 in &from[c.tgt2(b)] {
                for &a2 in &from[c.tgt2(a)] {
                    let lhs = c.t2_opt(c.v(b2, b), c.v(a2, a));
                    let rhs = c.v_opt(c.t2(b2, a2), c.t2(b, a));
                    if !same(lhs, rhs) {
                        inter = Some(vec![b2, b, a2, a]);
                        break 'i;
                    }
                }
            }
        }
    }
    report.push(Axiom::Interchange, inter);

    let mut units = None;
    'u: for g in 0..c.n1 {
        for f in 0..c.n1 {
            if let Some(gf) = c.t1(g, f) {
                if !same(c.t2(c.id2(g), c.id2(f)), Some(c.id2(gf))) {
                    units = Some(vec![g, f]);
                    break 'u;
                }
            }
        }
    }
    report.push(Axiom::TensorUnits, units);
    report
}

/// Typing and laws of the unitors and associator, plus `1 ⊗ 1 = 1`.
pub fn verify_coherence(rb: &RealizedBicategory) -> AxiomReport {
    if !shape_ok(rb) {
        return malformed(Axiom::UnitorTyping);
    }
    let c = Cells::new(rb);
    let mut report = AxiomReport::default();
    let into = c.by_target_object();
    let out = c.out_of_object();
    let from = c.two_cells_from();
    // whiskering by 1-cells is tensoring with identity 2-cells
    let w = |f: usize| Some(c.id2(f));

    let unitor = (0..c.n1).find(|&f| {
        let lsrc = c.t1(c.id1(c.tgt1(f)), f);
        let rsrc = c.t1(f, c.id1(c.src1(f)));
        !same(Some(c.src2(c.l(f))), lsrc)
            || c.tgt2(c.l(f)) != f
            || !same(Some(c.src2(c.r(f))), rsrc)
            || c.tgt2(c.r(f)) != f
    });
    report.push(Axiom::UnitorTyping, unitor.map(|f| vec![f]));

    let mut typing = None;
    'ty: for h in 0..c.n1 {
        for g in 0..c.n1 {
            for f in 0..c.n1 {
                let composable = c.src1(h) == c.tgt1(g) && c.src1(g) == c.tgt1(f);
                let ok = match c.assoc(h, g, f) {
                    Some(a) => {
                        composable
                            && same(Some(c.src2(a)), c.t1_opt(Some(h), c.t1(g, f)))
                            && same(Some(c.tgt2(a)), c.t1_opt(c.t1(h, g), Some(f)))
                    }
                    None => !composable,
                };
                if !ok {
                    typing = Some(vec![h, g, f]);
                    break 'ty;
                }
            }
        }
    }
    report.push(Axiom::AssociatorTyping, typing);

    // l_{f′} ∘ (1_id ⊗ α) = α ∘ l_f
    let lnat = (0..c.n2).find(|&a| {
        let (f, f2) = (c.src2(a), c.tgt2(a));
        let id = c.id2(c.id1(c.tgt1(f)));
        !same(c.v_opt(Some(c.l(f2)), c.t2(id, a)), c.v(a, c.l(f)))
    });
    report.push(Axiom::LeftUnitorNaturality, lnat.map(|a| vec![a]));

    // r_{f′} ∘ (α ⊗ 1_id) = α ∘ r_f
    let rnat = (0..c.n2).find(|&a| {
        let (f, f2) = (c.src2(a), c.tgt2(a));
        let id = c.id2(c.id1(c.src1(f)));
        !same(c.v_opt(Some(c.r(f2)), c.t2(a, id)), c.v(a, c.r(f)))
    });
    report.push(Axiom::RightUnitorNaturality, rnat.map(|a| vec![a]));

    // naturality of a in each slot: a(h′,g′,f′) ∘ (γ ⊗ (β ⊗ α)) = ((γ ⊗ β) ⊗ α) ∘ a(h,g,f)
    let nat = |gamma: usize, beta: usize, alpha: usize| -> bool {
        let (h, g, f) = (c.src2(gamma), c.src2(beta), c.src2(alpha));
        let (h2, g2, f2) = (c.tgt2(gamma), c.tgt2(beta), c.tgt2(alpha));
        let lhs = c.v_opt(c.assoc(h2, g2, f2), c.t2_opt(Some(gamma), c.t2(beta, alpha)));
        let rhs = c.v_opt(c.t2_opt(c.t2(gamma, beta), Some(alpha)), c.assoc(h, g, f));
        same(lhs, rhs)
    };
    let mut triples: Vec<(usize, usize, usize)> = Vec::new();
    for f in 0..c.n1 {
        for &g in &out[c.tgt1(f)] {
            for &h in &out[c.tgt1(g)] {
                triples.push((h, g, f));
            }
        }
    }
    triples.sort_unstable();
    let mut n1 = None;
    let mut n2 = None;
    let mut n3 = None;
    for &(h, g, f) in &triples {
        if n1.is_none() {
            if let Some(&gamma) = from[h].iter().find(|&&gamma| !nat(gamma, c.id2(g), c.id2(f))) {
                n1 = Some(vec![gamma, g, f]);
            }
        }
        if n2.is_none() {
            if let Some(&beta) = from[g].iter().find(|&&beta| !nat(c.id2(h), beta, c.id2(f))) {
                n2 = Some(vec![h, beta, f]);
            }
        }
        if n3.is_none() {
            if let Some(&alpha) = from[f].iter().find(|&&alpha| !nat(c.id2(h), c.id2(g), alpha)) {
                n3 = Some(vec![h, g, alpha]);
            }
        }
    }
    report.push(Axiom::AssociatorNaturalityFirst, n1);
    report.push(Axiom::AssociatorNaturalitySecond, n2);
    report.push(Axiom::AssociatorNaturalityThird, n3);

    // (a_{k,h,g} ⊗ 1_f) ∘ a_{k,h⊗g,f} ∘ (1_k ⊗ a_{h,g,f}) = a_{k⊗h,g,f} ∘ a_{k,h,g⊗f}
    let mut pentagon = None;
    'p: for &(h, g, f) in &triples {
        for &k in &out[c.tgt1(h)] {
            let hg = c.t1(h, g);
            let lhs = c.v_opt(
                c.t2_opt(c.assoc(k, h, g), w(f)),
                c.v_opt(hg.and_then(|hg| c.assoc(k, hg, f)), c.t2_opt(w(k), c.assoc(h, g, f))),
            );
            let kh = c.t1(k, h);
            let gf = c.t1(g, f);
            let rhs = c.v_opt(kh.and_then(|kh| c.assoc(kh, g, f)), gf.and_then(|gf| c.assoc(k, h, gf)));
            if !same(lhs, rhs) {
                pentagon = Some(vec![k, h, g, f]);
                break 'p;
            }
        }
    }
    report.push(Axiom::Pentagon, pentagon);

    // (r_g ⊗ 1_f) ∘ a(g, id, f) = 1_g ⊗ l_f
    let mut triangle = None;
    'tr: for g in 0..c.n1 {
        let id = c.id1(c.src1(g));
        for &f in &into[c.src1(g)] {
            let lhs = c.v_opt(c.t2(c.r(g), c.id2(f)), c.assoc(g, id, f));
            let rhs = c.t2(c.id2(g), c.l(f));
            if !same(lhs, rhs) {
                triangle = Some(vec![g, f]);
                break 'tr;
            }
        }
    }
    report.push(Axiom::Triangle, triangle);

    let homog = (0..c.n0).find(|&x| !same(c.t1(c.id1(x), c.id1(x)), Some(c.id1(x))));
    report.push(Axiom::Homogeneity, homog.map(|x| vec![x]));
    report
}

pub fn verify_all(rb: &RealizedBicategory) -> AxiomReport {
    verify_vertical(rb).merge(verify_interchange(rb)).merge(verify_coherence(rb))
}
