//! The group-level data of an internal bicategory: two groups `X`, `B`, a
//! homomorphism `h: X → B`, four endomorphisms `s, t, λ, ρ` of `X` and an
//! action `ξ` of `B` on `X`.

use std::fmt;

use serde::Serialize;

use crate::group::{
    commuting_witness, hom_witness, validate_action_table, ActionError, FiniteGroup, Group, GroupAction, GroupError,
    GroupHom, SemidirectProduct,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BicatError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// The raw tables. Validity is judged separately by [`check_conditions`], so
/// that candidates produced during search or by mutation are representable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BicatData {
    x: FiniteGroup,
    b: FiniteGroup,
    h: Vec<usize>,
    s: Vec<usize>,
    t: Vec<usize>,
    lambda: Vec<usize>,
    rho: Vec<usize>,
    /// `xi[b * |X| + x] = ξ_b(x)`
    xi: Vec<usize>,
}

/// Names one of the tables of a [`BicatData`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    H,
    S,
    T,
    Lambda,
    Rho,
    Xi,
}

impl Table {
    pub const ALL: [Table; 6] = [Table::H, Table::S, Table::T, Table::Lambda, Table::Rho, Table::Xi];

    pub fn name(self) -> &'static str {
        match self {
            Table::H => "h",
            Table::S => "s",
            Table::T => "t",
            Table::Lambda => "lambda",
            Table::Rho => "rho",
            Table::Xi => "xi",
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl BicatData {
    /// Only the shapes of the tables are checked here.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        x: &FiniteGroup,
        b: &FiniteGroup,
        h: Vec<usize>,
        s: Vec<usize>,
        t: Vec<usize>,
        lambda: Vec<usize>,
        rho: Vec<usize>,
        xi: Vec<usize>,
    ) -> Result<Self, GroupError> {
        let (nx, nb) = (x.order(), b.order());
        let shape = |m: &[usize], len: usize, bound: usize| -> Result<(), GroupError> {
            if m.len() != len {
                return Err(GroupError::MapLength { expected: len, found: m.len() });
            }
            match m.iter().position(|&v| v >= bound) {
                Some(i) => Err(GroupError::MapOutOfRange { index: i, value: m[i], order: bound }),
                None => Ok(()),
            }
        };
        shape(&h, nx, nb)?;
        for m in [&s, &t, &lambda, &rho] {
            shape(m, nx, nx)?;
        }
        shape(&xi, nx * nb, nx)?;
        Ok(BicatData { x: x.clone(), b: b.clone(), h, s, t, lambda, rho, xi })
    }

    pub fn from_parts(
        h: &GroupHom,
        s: &GroupHom,
        t: &GroupHom,
        lambda: &GroupHom,
        rho: &GroupHom,
        xi: &GroupAction,
    ) -> Result<Self, GroupError> {
        Self::new(
            h.dom(),
            h.cod(),
            h.table().to_vec(),
            s.table().to_vec(),
            t.table().to_vec(),
            lambda.table().to_vec(),
            rho.table().to_vec(),
            xi.table().to_vec(),
        )
    }

    /// `s = t = λ = ρ = id` with the given `h` and action.
    pub fn crossed_module(x: &FiniteGroup, b: &FiniteGroup, h: Vec<usize>, xi: Vec<usize>) -> Result<Self, GroupError> {
        let id: Vec<usize> = x.elements().collect();
        Self::new(x, b, h, id.clone(), id.clone(), id.clone(), id, xi)
    }

    /// `G` over itself with `h = id` and conjugation.
    pub fn conjugation(g: &FiniteGroup) -> Self {
        let conj = GroupAction::conjugation(g);
        Self::crossed_module(g, g, g.elements().collect(), conj.table().to_vec()).expect("well-shaped")
    }

    pub fn x(&self) -> &FiniteGroup {
        &self.x
    }
    pub fn b(&self) -> &FiniteGroup {
        &self.b
    }
    pub fn h(&self) -> &[usize] {
        &self.h
    }
    pub fn s(&self) -> &[usize] {
        &self.s
    }
    pub fn t(&self) -> &[usize] {
        &self.t
    }
    pub fn lambda(&self) -> &[usize] {
        &self.lambda
    }
    pub fn rho(&self) -> &[usize] {
        &self.rho
    }
    pub fn xi(&self) -> &[usize] {
        &self.xi
    }

    #[inline]
    pub fn act(&self, b: usize, x: usize) -> usize {
        self.xi[b * self.x.order() + x]
    }

    pub fn xi_rows(&self) -> Vec<Vec<usize>> {
        self.xi.chunks(self.x.order()).map(<[usize]>::to_vec).collect()
    }

    pub fn table(&self, which: Table) -> &[usize] {
        match which {
            Table::H => &self.h,
            Table::S => &self.s,
            Table::T => &self.t,
            Table::Lambda => &self.lambda,
            Table::Rho => &self.rho,
            Table::Xi => &self.xi,
        }
    }

    /// Largest value an entry of the table may take, plus one.
    pub fn table_range(&self, which: Table) -> usize {
        match which {
            Table::H => self.b.order(),
            _ => self.x.order(),
        }
    }

    /// Copy with one table entry replaced. Panics on out-of-range input.
    pub fn with_entry(&self, which: Table, index: usize, value: usize) -> Self {
        assert!(value < self.table_range(which));
        let mut d = self.clone();
        let table = match which {
            Table::H => &mut d.h,
            Table::S => &mut d.s,
            Table::T => &mut d.t,
            Table::Lambda => &mut d.lambda,
            Table::Rho => &mut d.rho,
            Table::Xi => &mut d.xi,
        };
        table[index] = value;
        d
    }

    /// Tables concatenated in the order h, s, t, λ, ρ, ξ.
    pub fn canonical_key(&self) -> Vec<usize> {
        Table::ALL.iter().flat_map(|&w| self.table(w).iter().copied()).collect()
    }

    pub fn is_identity_collapse(&self) -> bool {
        let id = |m: &[usize]| m.iter().enumerate().all(|(i, &v)| i == v);
        id(&self.s) && id(&self.t) && id(&self.lambda) && id(&self.rho)
    }
}

/// The conditions a [`BicatData`] must satisfy. `Homs` is the typing check
/// that `h` and the four endomorphisms are homomorphisms at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Condition {
    #[serde(rename = "homs")]
    Homs,
    #[serde(rename = "i")]
    Action,
    #[serde(rename = "ii")]
    Equivariance,
    #[serde(rename = "iii")]
    Idempotents,
    #[serde(rename = "iv")]
    HSourceTarget,
    #[serde(rename = "v")]
    HUnitors,
    #[serde(rename = "vi")]
    UnitorsInvertible,
    #[serde(rename = "vii")]
    KernelsCommute,
    #[serde(rename = "viii")]
    Composition,
}

impl Condition {
    pub const ALL: [Condition; 9] = [
        Condition::Homs,
        Condition::Action,
        Condition::Equivariance,
        Condition::Idempotents,
        Condition::HSourceTarget,
        Condition::HUnitors,
        Condition::UnitorsInvertible,
        Condition::KernelsCommute,
        Condition::Composition,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Condition::Homs => "homs",
            Condition::Action => "(i)",
            Condition::Equivariance => "(ii)",
            Condition::Idempotents => "(iii)",
            Condition::HSourceTarget => "(iv)",
            Condition::HUnitors => "(v)",
            Condition::UnitorsInvertible => "(vi)",
            Condition::KernelsCommute => "(vii)",
            Condition::Composition => "(viii)",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A concrete counterexample: the elements involved and what went wrong.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub elements: Vec<usize>,
    pub detail: String,
}

impl Witness {
    fn new(elements: Vec<usize>, detail: impl Into<String>) -> Self {
        Witness { elements, detail: detail.into() }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:?}", self.detail, self.elements)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionEntry {
    pub condition: Condition,
    pub passed: bool,
    pub witness: Option<Witness>,
}

/// The three readings of the middle associator component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alpha2 {
    /// `sρλ − ρsλt + sρt − ρt + ρ`
    SRhoLambda,
    /// `sρλt − ρsλt + sρt − ρt + ρ`
    SRhoLambdaT,
    /// The 2-cell `−(uλ) + (λu)`, pointwise `suλt − uλt + λu`.
    TwoCell,
}

impl Alpha2 {
    pub const ALL: [Alpha2; 3] = [Alpha2::SRhoLambda, Alpha2::SRhoLambdaT, Alpha2::TwoCell];

    pub fn name(self) -> &'static str {
        match self {
            Alpha2::SRhoLambda => "s-rho-lambda",
            Alpha2::SRhoLambdaT => "s-rho-lambda-t",
            Alpha2::TwoCell => "two-cell",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Alpha2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of the homomorphism checks on the iterated semidirect products.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositionReport {
    /// Failure of `m` to be a homomorphism, if any.
    pub m: Option<Witness>,
    /// Per α₂ reading, failure of `α` to be a homomorphism, if any.
    pub alpha: Vec<(Alpha2, Option<Witness>)>,
}

impl CompositionReport {
    pub fn alpha_passes(&self, which: Alpha2) -> bool {
        self.alpha.iter().any(|(w, f)| *w == which && f.is_none())
    }

    pub fn passing_variants(&self) -> Vec<Alpha2> {
        self.alpha.iter().filter(|(_, f)| f.is_none()).map(|(w, _)| *w).collect()
    }

    pub fn passed(&self) -> bool {
        self.m.is_none() && self.alpha.iter().any(|(_, f)| f.is_none())
    }

    fn summary_witness(&self) -> Option<Witness> {
        if let Some(w) = &self.m {
            return Some(Witness::new(w.elements.clone(), format!("m: {}", w.detail)));
        }
        if self.passed() {
            return None;
        }
        self.alpha.first().and_then(|(v, w)| w.as_ref().map(|w| Witness::new(w.elements.clone(), format!("alpha[{v}]: {}", w.detail))))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub entries: Vec<ConditionEntry>,
    /// Present when the composition check could run.
    pub composition: Option<CompositionReport>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn entry(&self, c: Condition) -> &ConditionEntry {
        self.entries.iter().find(|e| e.condition == c).expect("every condition has an entry")
    }

    pub fn holds(&self, c: Condition) -> bool {
        self.entry(c).passed
    }

    pub fn first_failure(&self) -> Option<&ConditionEntry> {
        self.entries.iter().find(|e| !e.passed)
    }

    /// Everything except the composition condition.
    pub fn basic_passed(&self) -> bool {
        self.entries.iter().filter(|e| e.condition != Condition::Composition).all(|e| e.passed)
    }
}

fn entry(condition: Condition, witness: Option<Witness>) -> ConditionEntry {
    ConditionEntry { condition, passed: witness.is_none(), witness }
}

fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    g.iter().map(|&x| f[x]).collect()
}

fn first_difference(f: &[usize], g: &[usize]) -> Option<usize> {
    f.iter().zip(g).position(|(a, b)| a != b)
}

fn check_homs(d: &BicatData) -> Option<Witness> {
    if let Some((x, y)) = hom_witness(&d.x, &d.b, |a| d.h[a]) {
        return Some(Witness::new(vec![x, y], "h is not a homomorphism"));
    }
    for w in [Table::S, Table::T, Table::Lambda, Table::Rho] {
        let m = d.table(w);
        if let Some((x, y)) = hom_witness(&d.x, &d.x, |a| m[a]) {
            return Some(Witness::new(vec![x, y], format!("{w} is not a homomorphism")));
        }
    }
    None
}

fn check_action(d: &BicatData) -> Option<Witness> {
    validate_action_table(&d.b, &d.x, &d.xi).err().map(|e| {
        let elements = match e {
            ActionError::RowCount { found, .. } => vec![found],
            ActionError::RowLength { row, .. } => vec![row],
            ActionError::OutOfRange { row, index, .. } => vec![row, index],
            ActionError::NotBijective(b) => vec![b],
            ActionError::NotAutomorphism { b, x, y } => vec![b, x, y],
            ActionError::IdentityMoves(x) => vec![0, x],
            ActionError::NotCompatible { b, c, x } => vec![b, c, x],
        };
        Witness::new(elements, e.to_string())
    })
}

fn check_equivariance(d: &BicatData) -> Option<Witness> {
    let (x, b) = (&d.x, &d.b);
    for g in b.elements() {
        for a in x.elements() {
            let lhs = d.h[d.act(g, a)];
            let rhs = b.op(b.op(g, d.h[a]), b.inv(g));
            if lhs != rhs {
                return Some(Witness::new(vec![g, a], "h(b·x) ≠ b h(x) b⁻¹"));
            }
        }
    }
    None
}

fn check_idempotents(d: &BicatData) -> Option<Witness> {
    if let Some(x) = first_difference(&compose(&d.s, &d.t), &d.t) {
        return Some(Witness::new(vec![x], "st ≠ t"));
    }
    first_difference(&compose(&d.t, &d.s), &d.s).map(|x| Witness::new(vec![x], "ts ≠ s"))
}

fn check_h_source_target(d: &BicatData) -> Option<Witness> {
    if let Some(x) = first_difference(&compose(&d.h, &d.s), &d.h) {
        return Some(Witness::new(vec![x], "hs ≠ h"));
    }
    first_difference(&compose(&d.h, &d.t), &d.h).map(|x| Witness::new(vec![x], "ht ≠ h"))
}

fn check_h_unitors(d: &BicatData) -> Option<Witness> {
    if let Some(x) = first_difference(&compose(&d.h, &d.lambda), &d.h) {
        return Some(Witness::new(vec![x], "hλ ≠ h"));
    }
    first_difference(&compose(&d.h, &d.rho), &d.h).map(|x| Witness::new(vec![x], "hρ ≠ h"))
}

/// `x ↦ f(x)·(fs(x))⁻¹·tfs(x)`
pub fn unitor_inverse_defect(d: &BicatData, f: &[usize]) -> Vec<usize> {
    let x = &d.x;
    x.elements()
        .map(|a| {
            let fs = f[d.s[a]];
            x.maltsev(f[a], fs, d.t[fs])
        })
        .collect()
}

fn check_unitors_invertible(d: &BicatData) -> Option<Witness> {
    let id: Vec<usize> = d.x.elements().collect();
    if let Some(a) = first_difference(&unitor_inverse_defect(d, &d.lambda), &id) {
        return Some(Witness::new(vec![a], "λ − λs + tλs ≠ 1"));
    }
    first_difference(&unitor_inverse_defect(d, &d.rho), &id).map(|a| Witness::new(vec![a], "ρ − ρs + tρs ≠ 1"))
}

fn check_kernels_commute(d: &BicatData) -> Option<Witness> {
    let ks: Vec<usize> = d.x.elements().filter(|&a| d.s[a] == 0).collect();
    let kt: Vec<usize> = d.x.elements().filter(|&a| d.t[a] == 0).collect();
    commuting_witness(&d.x, &ks, &kt).map(|(a, b)| Witness::new(vec![a, b], "[ker s, ker t] ≠ 1"))
}

/// Checks every condition. The composition check runs only when all other
/// conditions hold; otherwise its entry fails with an explanatory note.
pub fn check_conditions(d: &BicatData) -> ConditionReport {
    let mut entries = vec![
        entry(Condition::Homs, check_homs(d)),
        entry(Condition::Action, check_action(d)),
        entry(Condition::Equivariance, check_equivariance(d)),
        entry(Condition::Idempotents, check_idempotents(d)),
        entry(Condition::HSourceTarget, check_h_source_target(d)),
        entry(Condition::HUnitors, check_h_unitors(d)),
        entry(Condition::UnitorsInvertible, check_unitors_invertible(d)),
        entry(Condition::KernelsCommute, check_kernels_commute(d)),
    ];
    let composition = if entries.iter().all(|e| e.passed) { Some(composition_report(d)) } else { None };
    let witness = match &composition {
        Some(c) => c.summary_witness(),
        None => Some(Witness::new(vec![], "not checked: an earlier condition fails")),
    };
    entries.push(entry(Condition::Composition, witness));
    ConditionReport { entries, composition }
}

/// The maps `u, v, α₁, α₂, α₃: X → X`, not necessarily homomorphisms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedMaps {
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    pub alpha1: Vec<usize>,
    alpha2: [Vec<usize>; 3],
    pub alpha3: Vec<usize>,
}

impl DerivedMaps {
    pub fn alpha2(&self, which: Alpha2) -> &[usize] {
        &self.alpha2[which.index()]
    }
}

pub fn derive_maps(d: &BicatData) -> DerivedMaps {
    let x = &d.x;
    let (s, t, l, r) = (&d.s[..], &d.t[..], &d.lambda[..], &d.rho[..]);
    let c = |f: &[usize], g: &[usize]| compose(f, g);
    // alternating product a − b + c − … read left to right
    let alt = |terms: &[&[usize]]| -> Vec<usize> {
        x.elements()
            .map(|a| {
                terms.iter().enumerate().fold(0, |acc, (i, m)| {
                    let v = m[a];
                    x.op(acc, if i % 2 == 0 { v } else { x.inv(v) })
                })
            })
            .collect()
    };
    let rt = c(r, t);
    let srt = c(s, &rt);
    let lt = c(l, t);
    let slt = c(s, &lt);
    let u = alt(&[&srt, &rt, r]);
    let v = alt(&[&slt, &lt, l]);
    let rsrt = c(r, &srt);
    let srrt = c(s, &c(r, &rt));
    let alpha1 = alt(&[&srrt, &rsrt, &srt, &rt, r]);
    let rslt = c(r, &slt);
    let srl = c(s, &c(r, l));
    let srlt = c(s, &c(r, &lt));
    let ul = c(&u, l);
    let sult = c(s, &c(&ul, t));
    let ult = c(&ul, t);
    let lu = c(l, &u);
    let alpha2 = [
        alt(&[&srl, &rslt, &srt, &rt, r]),
        alt(&[&srlt, &rslt, &srt, &rt, r]),
        alt(&[&sult, &ult, &lu]),
    ];
    let llt = c(l, &lt);
    let lslt = c(l, &slt);
    let ll = c(l, l);
    let alpha3 = alt(&[&lslt, &llt, &ll]);
    DerivedMaps { u, v, alpha1, alpha2, alpha3 }
}

/// `X ⋊ B`, `X ⋊ (X ⋊ B)` and `X ⋊ (X ⋊ (X ⋊ B))` with the actions induced
/// through `h`.
pub struct IteratedProducts {
    pub p1: SemidirectProduct<FiniteGroup, FiniteGroup>,
    pub p2: SemidirectProduct<FiniteGroup, SemidirectProduct<FiniteGroup, FiniteGroup>>,
    #[allow(clippy::type_complexity)]
    pub p3: SemidirectProduct<
        FiniteGroup,
        SemidirectProduct<FiniteGroup, SemidirectProduct<FiniteGroup, FiniteGroup>>,
    >,
}

impl IteratedProducts {
    pub fn new(d: &BicatData) -> Result<Self, ActionError> {
        let (x, b) = (&d.x, &d.b);
        let nx = x.order();
        let p1 = SemidirectProduct::new(x.clone(), b.clone(), d.xi.clone())?;
        // ξ₁((x′, b), x) = ξ_{h(x′)b}(x)
        let xi1: Vec<usize> = (0..p1.order())
            .flat_map(|e| {
                let (x1, g) = p1.decode(e);
                let k = b.op(d.h[x1], g);
                d.xi[k * nx..(k + 1) * nx].to_vec()
            })
            .collect();
        let p2 = SemidirectProduct::new(x.clone(), p1.clone(), xi1)?;
        // ξ₂((x′, x″, b), x) = ξ_{h(x′x″)b}(x)
        let xi2: Vec<usize> = (0..p2.order())
            .flat_map(|e| {
                let (x1, rest) = p2.decode(e);
                let (x2, g) = p1.decode(rest);
                let k = b.op(d.h[x.op(x1, x2)], g);
                d.xi[k * nx..(k + 1) * nx].to_vec()
            })
            .collect();
        let p3 = SemidirectProduct::new(x.clone(), p2.clone(), xi2)?;
        Ok(IteratedProducts { p1, p2, p3 })
    }

    /// `(x, x′, b)` as an element of `p2`.
    pub fn encode2(&self, x: usize, x1: usize, b: usize) -> usize {
        self.p2.encode(x, self.p1.encode(x1, b))
    }

    pub fn decode2(&self, e: usize) -> (usize, usize, usize) {
        let (x, rest) = self.p2.decode(e);
        let (x1, b) = self.p1.decode(rest);
        (x, x1, b)
    }

    pub fn decode3(&self, e: usize) -> (usize, usize, usize, usize) {
        let (x, rest) = self.p3.decode(e);
        let (x1, x2, b) = self.decode2(rest);
        (x, x1, x2, b)
    }
}

fn composition_report(d: &BicatData) -> CompositionReport {
    let products = IteratedProducts::new(d).expect("action validated before the composition check");
    let maps = derive_maps(d);
    let x = &d.x;
    let p = &products;
    let m_map = |e: usize| {
        let (a, a1, g) = p.decode2(e);
        p.p1.encode(x.op(maps.u[a], maps.v[a1]), g)
    };
    let m = hom_witness(&p.p2, &p.p1, m_map).map(|(e1, e2)| {
        let (a, a1, g) = p.decode2(e1);
        let (c, c1, k) = p.decode2(e2);
        Witness::new(vec![a, a1, g, c, c1, k], "m((x,x′,b)·(y,y′,b′)) ≠ m(x,x′,b)·m(y,y′,b′)")
    });
    let alpha = Alpha2::ALL
        .iter()
        .map(|&which| {
            let a2 = maps.alpha2(which);
            let map = |e: usize| {
                let (a, a1, a2x, g) = p.decode3(e);
                p.p1.encode(x.op(x.op(maps.alpha1[a], a2[a1]), maps.alpha3[a2x]), g)
            };
            let w = hom_witness(&p.p3, &p.p1, map).map(|(e1, e2)| {
                let (a, a1, a2x, g) = p.decode3(e1);
                let (c, c1, c2, k) = p.decode3(e2);
                Witness::new(vec![a, a1, a2x, g, c, c1, c2, k], "α is not a homomorphism")
            });
            (which, w)
        })
        .collect();
    CompositionReport { m, alpha }
}

/// The composition condition alone; requires every other condition.
pub fn check_m_alpha_homs(d: &BicatData) -> Result<CompositionReport, BicatError> {
    let report = check_conditions(d);
    match report.entries.iter().find(|e| e.condition != Condition::Composition && !e.passed) {
        Some(e) => Err(BicatError::PreconditionFailed(format!("condition {} fails", e.condition))),
        None => Ok(report.composition.expect("computed when preconditions hold")),
    }
}

/// Peiffer identity `x x′ x⁻¹ = ξ_{h(x)}(x′)` together with equivariance of `h`.
pub fn is_crossed_module(d: &BicatData) -> Result<bool, BicatError> {
    if !d.is_identity_collapse() {
        return Err(BicatError::PreconditionFailed("s, t, λ, ρ must all be the identity".into()));
    }
    if check_homs(d).is_some() || check_action(d).is_some() {
        return Ok(false);
    }
    Ok(check_equivariance(d).is_none() && peiffer_witness(d).is_none())
}

pub fn peiffer_witness(d: &BicatData) -> Option<(usize, usize)> {
    let x = &d.x;
    for a in x.elements() {
        for a1 in x.elements() {
            if x.op(x.op(a, a1), x.inv(a)) != d.act(d.h[a], a1) {
                return Some((a, a1));
            }
        }
    }
    None
}

/// Whether `s, t, λ, ρ` commute with every `ξ_b`. Not among the conditions;
/// reported for information.
pub fn equivariance_fingerprint(d: &BicatData) -> [bool; 4] {
    let commutes = |m: &[usize]| d.b.elements().all(|g| d.x.elements().all(|a| m[d.act(g, a)] == d.act(g, m[a])));
    [commutes(&d.s), commutes(&d.t), commutes(&d.lambda), commutes(&d.rho)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, enumerate_actions, enumerate_endos, enumerate_homs};

    #[test]
    fn conjugation_crossed_module_passes() {
        let d = BicatData::conjugation(&catalog::symmetric(3));
        let r = check_conditions(&d);
        assert!(r.passed(), "{r:?}");
        let c = r.composition.unwrap();
        assert_eq!(c.passing_variants(), Alpha2::ALL.to_vec());
        assert!(is_crossed_module(&d).unwrap());
    }

    #[test]
    fn zero_source_fails_idempotents() {
        let z2 = catalog::cyclic(2);
        let d = BicatData::new(&z2, &z2, vec![0, 0], vec![0, 0], vec![0, 1], vec![0, 1], vec![0, 1], vec![0, 1, 0, 1])
            .unwrap();
        let r = check_conditions(&d);
        let e = r.entry(Condition::Idempotents);
        assert!(!e.passed);
        assert_eq!(e.witness.as_ref().unwrap().elements, vec![1]);
        assert!(!r.holds(Condition::Composition));
        assert!(check_m_alpha_homs(&d).is_err());
    }

    #[test]
    fn abelian_kernels_commute() {
        let v4 = catalog::klein_four();
        let one = catalog::cyclic(1);
        for s in enumerate_endos(&v4) {
            for t in enumerate_endos(&v4) {
                let d = BicatData::new(
                    &v4,
                    &one,
                    vec![0; 4],
                    s.table().to_vec(),
                    t.table().to_vec(),
                    (0..4).collect(),
                    (0..4).collect(),
                    (0..4).collect(),
                )
                .unwrap();
                assert!(check_conditions(&d).holds(Condition::KernelsCommute));
            }
        }
    }

    #[test]
    fn derived_maps_collapse_on_identities() {
        let d = BicatData::conjugation(&catalog::symmetric(3));
        let m = derive_maps(&d);
        let id: Vec<usize> = (0..6).collect();
        assert_eq!(m.u, id);
        assert_eq!(m.v, id);
        assert_eq!(m.alpha1, id);
        assert_eq!(m.alpha3, id);
        for w in Alpha2::ALL {
            assert_eq!(m.alpha2(w), &id[..]);
        }
    }

    #[test]
    fn u_with_identity_unitors() {
        // λ = ρ = id: u(x) = st(x)·t(x)⁻¹·x
        let z4 = catalog::cyclic(4);
        let one = catalog::cyclic(1);
        let zero = vec![0; 4];
        let id: Vec<usize> = (0..4).collect();
        let d = BicatData::new(&z4, &one, zero.clone(), zero.clone(), zero, id.clone(), id.clone(), id.clone()).unwrap();
        assert_eq!(derive_maps(&d).u, id);
        let v4 = catalog::klein_four();
        for s in enumerate_endos(&v4) {
            let st = compose(s.table(), s.table());
            let d = BicatData::new(&v4, &one, vec![0; 4], s.table().to_vec(), s.table().to_vec(), id.clone(), id.clone(), id.clone())
                .unwrap();
            let u = derive_maps(&d).u;
            for a in 0..4 {
                assert_eq!(u[a], v4.maltsev(st[a], s.apply(a), a));
            }
        }
    }

    #[test]
    fn composition_examples() {
        let z2 = catalog::cyclic(2);
        let id = vec![0, 1];
        let d = BicatData::new(&z2, &z2, vec![0, 0], vec![0, 0], vec![0, 0], id.clone(), id.clone(), vec![0, 1, 0, 1]).unwrap();
        assert!(check_m_alpha_homs(&d).unwrap().passed());
        // abelian X, trivial action, identities, any h
        let z4 = catalog::cyclic(4);
        for h in enumerate_homs(&z4, &z2) {
            let d = BicatData::crossed_module(&z4, &z2, h.table().to_vec(), (0..8).map(|i| i % 4).collect()).unwrap();
            assert!(check_m_alpha_homs(&d).unwrap().passed());
        }
    }

    #[test]
    fn crossed_module_examples() {
        let z2 = catalog::cyclic(2);
        let d = BicatData::crossed_module(&z2, &z2, vec![0, 1], vec![0, 1, 0, 1]).unwrap();
        assert!(is_crossed_module(&d).unwrap());
        let s3 = catalog::symmetric(3);
        let trivial: Vec<usize> = (0..36).map(|i| i % 6).collect();
        let d = BicatData::crossed_module(&s3, &s3, (0..6).collect(), trivial).unwrap();
        assert!(!is_crossed_module(&d).unwrap());
        let (a, b) = peiffer_witness(&d).unwrap();
        assert_ne!(s3.op(a, b), s3.op(b, a));
        let not_collapsed = BicatData::new(&z2, &z2, vec![0, 0], vec![0, 0], vec![0, 0], vec![0, 1], vec![0, 1], vec![0, 1, 0, 1]).unwrap();
        assert!(is_crossed_module(&not_collapsed).is_err());
    }

    #[test]
    fn degenerate_case_agrees_on_s3() {
        let s3 = catalog::symmetric(3);
        for h in enumerate_homs(&s3, &s3) {
            for xi in enumerate_actions(&s3, &s3) {
                let d = BicatData::crossed_module(&s3, &s3, h.table().to_vec(), xi.table().to_vec()).unwrap();
                let full = check_conditions(&d).passed();
                assert_eq!(full, is_crossed_module(&d).unwrap(), "{h:?} {:?}", xi.rows());
            }
        }
    }

    #[test]
    fn report_is_independent_of_check_order() {
        let s3 = catalog::symmetric(3);
        let d = BicatData::conjugation(&s3).with_entry(Table::S, 1, 2);
        let r = check_conditions(&d);
        // each standalone check reproduces its entry
        assert_eq!(r.entry(Condition::Homs).witness, check_homs(&d));
        assert_eq!(r.entry(Condition::Idempotents).witness, check_idempotents(&d));
        assert_eq!(r.entry(Condition::KernelsCommute).witness, check_kernels_commute(&d));
    }
}
