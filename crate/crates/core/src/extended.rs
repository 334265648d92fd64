//! The split presentation `Y → Z → B` of bicategory data, and its
//! realization as explicit finite cell tables.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bicat_data::{derive_maps, Alpha2, BicatData, DerivedMaps};
use crate::group::{
    hom_witness, validate_action_table, FiniteGroup, Group, GroupError, Subgroup,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtendedError {
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `(Y, Z, B, ∂₁, ∂₀, φ, λ₀, ρ₀, ξ_X)`. Elements of `X = Y ⋊_φ Z` are
/// encoded as `y * |Z| + z`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtendedData {
    pub y: FiniteGroup,
    pub z: FiniteGroup,
    pub b: FiniteGroup,
    pub d1: Vec<usize>,
    pub d0: Vec<usize>,
    /// `phi[z * |Y| + y] = φ_z(y)`
    pub phi: Vec<usize>,
    pub lambda0: Vec<usize>,
    pub rho0: Vec<usize>,
    /// `xi_x[b * |X| + x]`
    pub xi_x: Vec<usize>,
}

impl ExtendedData {
    pub fn x_order(&self) -> usize {
        self.y.order() * self.z.order()
    }

    #[inline]
    pub fn encode(&self, y: usize, z: usize) -> usize {
        y * self.z.order() + z
    }

    #[inline]
    pub fn decode(&self, x: usize) -> (usize, usize) {
        (x / self.z.order(), x % self.z.order())
    }

    #[inline]
    pub fn phi(&self, z: usize, y: usize) -> usize {
        self.phi[z * self.y.order() + y]
    }

    /// The product `Y ⋊_φ Z`. `φ` must already be a valid action.
    pub fn x_group(&self) -> FiniteGroup {
        let n = self.x_order();
        let mut table = vec![0; n * n];
        for a in 0..n {
            let (y1, z1) = self.decode(a);
            for c in 0..n {
                let (y2, z2) = self.decode(c);
                table[a * n + c] = self.encode(self.y.op(y1, self.phi(z1, y2)), self.z.op(z1, z2));
            }
        }
        FiniteGroup::from_table_unchecked("X", n, table)
    }

    /// Checks every invariant and returns the first violation.
    pub fn validate(&self) -> Result<(), ExtendedError> {
        let (y, z, b) = (&self.y, &self.z, &self.b);
        let bad = |msg: String| Err(ExtendedError::InvariantViolation(msg));
        validate_action_table(z, y, &self.phi).map_err(|e| ExtendedError::InvariantViolation(format!("φ: {e}")))?;
        for (name, m, dom, cod) in [
            ("∂1", &self.d1, y, z),
            ("∂0", &self.d0, z, b),
            ("λ0", &self.lambda0, z, y),
            ("ρ0", &self.rho0, z, y),
        ] {
            if m.len() != dom.order() || m.iter().any(|&v| v >= cod.order()) {
                return bad(format!("{name} has the wrong shape"));
            }
            if let Some((a, c)) = hom_witness(dom, cod, |i| m[i]) {
                return bad(format!("{name} is not a homomorphism at ({a}, {c})"));
            }
        }
        if let Some(a) = y.elements().find(|&a| self.d0[self.d1[a]] != 0) {
            return bad(format!("∂0∂1 ≠ 0 at {a}"));
        }
        for g in z.elements() {
            for a in y.elements() {
                if self.d1[self.phi(g, a)] != z.op(z.op(g, self.d1[a]), z.inv(g)) {
                    return bad(format!("∂1(φ_z(y)) ≠ z ∂1(y) z⁻¹ at ({g}, {a})"));
                }
            }
        }
        for a in y.elements() {
            for c in y.elements() {
                if self.phi(self.d1[a], c) != y.op(y.op(a, c), y.inv(a)) {
                    return bad(format!("φ_∂1(y)(y′) ≠ y y′ y⁻¹ at ({a}, {c})"));
                }
            }
        }
        let x = self.x_group();
        for (name, m) in [("λ", self.lambda_table()), ("ρ", self.rho_table())] {
            if let Some((a, c)) = hom_witness(&x, &x, |i| m[i]) {
                return bad(format!("induced {name} is not a homomorphism at ({a}, {c})"));
            }
        }
        validate_action_table(b, &x, &self.xi_x).map_err(|e| ExtendedError::InvariantViolation(format!("ξ_X: {e}")))?;
        Ok(())
    }

    fn unitor_table(&self, f0: &[usize]) -> Vec<usize> {
        (0..self.x_order())
            .map(|x| {
                let (a, g) = self.decode(x);
                let l = f0[g];
                self.encode(self.y.op(a, l), self.z.op(self.z.inv(self.d1[l]), g))
            })
            .collect()
    }

    /// `λ(y, z) = (y·λ₀(z), ∂₁λ₀(z)⁻¹·z)`
    pub fn lambda_table(&self) -> Vec<usize> {
        self.unitor_table(&self.lambda0)
    }

    pub fn rho_table(&self) -> Vec<usize> {
        self.unitor_table(&self.rho0)
    }
}

/// `x ↦ (x·s(x)⁻¹, s(x))` as a table into the encoding of `Y ⋊ Z`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Splitting {
    pub forward: Vec<usize>,
    pub backward: Vec<usize>,
}

pub fn decompose(d: &BicatData) -> Result<(ExtendedData, Splitting), ExtendedError> {
    let x = d.x();
    let s = d.s();
    let fail = |m: &str| ExtendedError::DecompositionFailed(m.to_string());
    if x.elements().any(|a| s[s[a]] != s[a]) {
        return Err(fail("s is not idempotent"));
    }
    let ker = Subgroup::new(x, x.elements().filter(|&a| s[a] == 0).collect()).map_err(|_| fail("ker s is not a subgroup"))?;
    let fix = Subgroup::new(x, x.elements().filter(|&a| s[a] == a).collect()).map_err(|_| fail("Fix s is not a subgroup"))?;
    let y = ker.to_group("Y");
    let z = fix.to_group("Z");
    let (ny, nz) = (y.order(), z.order());
    if ny * nz != x.order() {
        return Err(fail("|ker s|·|Fix s| ≠ |X|"));
    }
    let yi = |a: usize| ker.index_of(a).ok_or_else(|| fail("element expected in ker s"));
    let zi = |a: usize| fix.index_of(a).ok_or_else(|| fail("element expected in Fix s"));
    let mut forward = vec![0; x.order()];
    let mut backward = vec![usize::MAX; x.order()];
    for a in x.elements() {
        let sa = s[a];
        let e = yi(x.op(a, x.inv(sa)))? * nz + zi(sa)?;
        if backward[e] != usize::MAX {
            return Err(fail("splitting is not injective"));
        }
        forward[a] = e;
        backward[e] = a;
    }
    let mut phi = vec![0; nz * ny];
    for (gi, &g) in fix.elements().iter().enumerate() {
        for (ai, &a) in ker.elements().iter().enumerate() {
            phi[gi * ny + ai] = yi(x.op(x.op(g, a), x.inv(g)))?;
        }
    }
    let d1 = ker.elements().iter().map(|&a| zi(d.t()[a])).collect::<Result<Vec<_>, _>>()?;
    let d0 = fix.elements().iter().map(|&g| d.h()[g]).collect();
    let part0 = |f: &[usize]| -> Result<Vec<usize>, ExtendedError> {
        fix.elements().iter().map(|&g| yi(x.op(f[g], x.inv(s[f[g]])))).collect()
    };
    let lambda0 = part0(d.lambda())?;
    let rho0 = part0(d.rho())?;
    let nx = x.order();
    let mut xi_x = vec![0; d.b().order() * nx];
    for g in d.b().elements() {
        for a in x.elements() {
            xi_x[g * nx + forward[a]] = forward[d.act(g, a)];
        }
    }
    let e = ExtendedData { y, z, b: d.b().clone(), d1, d0, phi, lambda0, rho0, xi_x };
    Ok((e, Splitting { forward, backward }))
}

pub fn reconstruct(e: &ExtendedData) -> Result<BicatData, ExtendedError> {
    e.validate()?;
    Ok(reconstruct_unchecked(e))
}

pub(crate) fn reconstruct_unchecked(e: &ExtendedData) -> BicatData {
    let x = e.x_group();
    let n = x.order();
    let s = (0..n).map(|a| e.encode(0, e.decode(a).1)).collect();
    let t = (0..n)
        .map(|a| {
            let (y, z) = e.decode(a);
            e.encode(0, e.z.op(e.d1[y], z))
        })
        .collect();
    let h = (0..n).map(|a| e.d0[e.decode(a).1]).collect();
    BicatData::new(&x, &e.b, h, s, t, e.lambda_table(), e.rho_table(), e.xi_x.clone()).expect("shapes follow from ExtendedData")
}

/// Whether `splitting` carries `d` onto `reconstruct(decompose(d))` table by table.
pub fn splitting_transports(d: &BicatData, r: &BicatData, splitting: &Splitting) -> bool {
    let f = &splitting.forward;
    let (x, xr) = (d.x(), r.x());
    let iso = x.elements().all(|a| x.elements().all(|c| f[x.op(a, c)] == xr.op(f[a], f[c])));
    let endo = |m: &[usize], mr: &[usize]| x.elements().all(|a| f[m[a]] == mr[f[a]]);
    iso && x.elements().all(|a| d.h()[a] == r.h()[f[a]])
        && endo(d.s(), r.s())
        && endo(d.t(), r.t())
        && endo(d.lambda(), r.lambda())
        && endo(d.rho(), r.rho())
        && d.b().elements().all(|g| x.elements().all(|a| f[d.act(g, a)] == r.act(g, f[a])))
}

/// Explicit cell tables of a finite bicategory. Cells are indices; partial
/// operations are `None` off their domain of definition.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RealizedBicategory {
    pub objects: usize,
    pub one_source: Vec<usize>,
    pub one_target: Vec<usize>,
    pub two_source: Vec<usize>,
    pub two_target: Vec<usize>,
    /// identity 1-cell per object
    pub unit1: Vec<usize>,
    /// identity 2-cell per 1-cell
    pub unit2: Vec<usize>,
    /// `vcomp[β * n2 + α] = β ∘ α`
    pub vcomp: Vec<Option<usize>>,
    /// `tensor1[g * n1 + f] = g ⊗ f`, defined when `source(g) = target(f)`
    pub tensor1: Vec<Option<usize>>,
    /// `tensor2[β * n2 + α] = β ⊗ α`
    pub tensor2: Vec<Option<usize>>,
    pub left_unitor: Vec<usize>,
    pub right_unitor: Vec<usize>,
    /// `associator[(h * n1 + g) * n1 + f] = a(h, g, f)`
    pub associator: Vec<Option<usize>>,
}

impl RealizedBicategory {
    pub fn one_cells(&self) -> usize {
        self.one_source.len()
    }

    pub fn two_cells(&self) -> usize {
        self.two_source.len()
    }

    pub fn vcomp(&self, beta: usize, alpha: usize) -> Result<usize, ExtendedError> {
        self.vcomp[beta * self.two_cells() + alpha].ok_or_else(|| {
            ExtendedError::NotComposable(format!(
                "target of {alpha} is 1-cell {} but source of {beta} is 1-cell {}",
                self.two_target[alpha], self.two_source[beta]
            ))
        })
    }

    pub fn tensor1(&self, g: usize, f: usize) -> Result<usize, ExtendedError> {
        self.tensor1[g * self.one_cells() + f].ok_or_else(|| {
            ExtendedError::NotComposable(format!(
                "target of {f} is object {} but source of {g} is object {}",
                self.one_target[f], self.one_source[g]
            ))
        })
    }

    pub fn tensor2(&self, beta: usize, alpha: usize) -> Result<usize, ExtendedError> {
        self.tensor2[beta * self.two_cells() + alpha].ok_or_else(|| {
            ExtendedError::NotComposable(format!(
                "2-cells {beta} and {alpha} do not meet at a common object"
            ))
        })
    }

    pub fn associator(&self, h: usize, g: usize, f: usize) -> Result<usize, ExtendedError> {
        let n = self.one_cells();
        self.associator[(h * n + g) * n + f]
            .ok_or_else(|| ExtendedError::NotComposable(format!("1-cells ({h}, {g}, {f}) are not composable")))
    }

    /// A line-based dump with deterministic ordering.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let (n1, n2) = (self.one_cells(), self.two_cells());
        writeln!(out, "objects {}", self.objects).unwrap();
        writeln!(out, "one-cells {n1}").unwrap();
        for f in 0..n1 {
            writeln!(out, "1 {f} {} {}", self.one_source[f], self.one_target[f]).unwrap();
        }
        writeln!(out, "two-cells {n2}").unwrap();
        for a in 0..n2 {
            writeln!(out, "2 {a} {} {}", self.two_source[a], self.two_target[a]).unwrap();
        }
        let partial = |out: &mut String, tag: &str, t: &[Option<usize>], n: usize| {
            for (i, v) in t.iter().enumerate() {
                if let Some(v) = v {
                    writeln!(out, "{tag} {} {} {v}", i / n, i % n).unwrap();
                }
            }
        };
        partial(&mut out, "v", &self.vcomp, n2);
        partial(&mut out, "t1", &self.tensor1, n1);
        partial(&mut out, "t2", &self.tensor2, n2);
        for f in 0..n1 {
            writeln!(out, "l {f} {}", self.left_unitor[f]).unwrap();
            writeln!(out, "r {f} {}", self.right_unitor[f]).unwrap();
        }
        for (i, v) in self.associator.iter().enumerate() {
            if let Some(v) = v {
                writeln!(out, "a {} {} {} {v}", i / (n1 * n1), (i / n1) % n1, i % n1).unwrap();
            }
        }
        out
    }
}

/// Structural facts about a realization that the axioms do not see.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RealizationNotes {
    /// Composable pairs where the 1-cell tensor computed in `X` differs
    /// from the product `z′·∂₁ρ₀(z′)⁻¹·z·∂₁λ₀(z)⁻¹` taken in that order.
    pub ordering_sensitive: usize,
}

/// Coherence 2-cells as elements of `X`, before attaching the object `b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoherenceCells {
    /// per `z`
    pub l: Vec<usize>,
    pub r: Vec<usize>,
    /// per `(z″, z′, z)`, index `(z″ * |Z| + z′) * |Z| + z`
    pub a: Vec<usize>,
}

pub fn coherence_cells(e: &ExtendedData, variant: Alpha2) -> CoherenceCells {
    let d = reconstruct_unchecked(e);
    let maps = derive_maps(&d);
    coherence_from_maps(e, &d, &maps, variant)
}

fn coherence_from_maps(e: &ExtendedData, d: &BicatData, maps: &DerivedMaps, variant: Alpha2) -> CoherenceCells {
    let x = d.x();
    let nz = e.z.order();
    let one = |z: usize| e.encode(0, z);
    let l = (0..nz).map(|z| d.lambda()[one(z)]).collect();
    let r = (0..nz).map(|z| d.rho()[one(z)]).collect();
    let alpha2 = maps.alpha2(variant);
    let mut a = vec![0; nz * nz * nz];
    for z2 in 0..nz {
        for z1 in 0..nz {
            for z0 in 0..nz {
                a[(z2 * nz + z1) * nz + z0] =
                    x.op(x.op(maps.alpha1[one(z2)], alpha2[one(z1)]), maps.alpha3[one(z0)]);
            }
        }
    }
    CoherenceCells { l, r, a }
}

pub fn realize(e: &ExtendedData) -> Result<RealizedBicategory, ExtendedError> {
    realize_with(e, Alpha2::TwoCell).map(|(rb, _)| rb)
}

/// Realization using the chosen reading of the middle associator component.
pub fn realize_with(e: &ExtendedData, variant: Alpha2) -> Result<(RealizedBicategory, RealizationNotes), ExtendedError> {
    e.validate()?;
    let d = reconstruct_unchecked(e);
    let maps = derive_maps(&d);
    let x = d.x();
    let (nz, nb) = (e.z.order(), e.b.order());
    let nx = x.order();
    let n1 = nz * nb;
    let n2 = nx * nb;
    let one_cell = |z: usize, b: usize| z * nb + b;
    let two_cell = |a: usize, b: usize| a * nb + b;
    // 1-cells (z, b): b → ∂₀(z)b
    let one_source: Vec<usize> = (0..n1).map(|f| f % nb).collect();
    let one_target: Vec<usize> = (0..n1).map(|f| e.b.op(e.d0[f / nb], f % nb)).collect();
    // 2-cells (x, b) with x = (y, z): (z, b) ⇒ (∂₁(y)z, b)
    let z_of = |a: usize| e.decode(d.s()[a]).1;
    let two_source: Vec<usize> = (0..n2).map(|c| one_cell(z_of(c / nb), c % nb)).collect();
    let two_target: Vec<usize> = (0..n2).map(|c| one_cell(e.decode(d.t()[c / nb]).1, c % nb)).collect();
    let unit1 = (0..nb).map(|b| one_cell(0, b)).collect();
    let unit2 = (0..n1).map(|f| two_cell(e.encode(0, f / nb), f % nb)).collect();

    let mut vcomp = vec![None; n2 * n2];
    for beta in 0..n2 {
        for alpha in 0..n2 {
            if two_target[alpha] == two_source[beta] {
                let (yb, _) = e.decode(beta / nb);
                let (ya, za) = e.decode(alpha / nb);
                vcomp[beta * n2 + alpha] = Some(two_cell(e.encode(e.y.op(yb, ya), za), alpha % nb));
            }
        }
    }
    let mut tensor1 = vec![None; n1 * n1];
    let mut ordering_sensitive = 0;
    for g in 0..n1 {
        for f in 0..n1 {
            if one_source[g] == one_target[f] {
                let (zg, zf) = (e.encode(0, g / nb), e.encode(0, f / nb));
                let prod = x.op(maps.u[zg], maps.v[zf]);
                let (py, pz) = e.decode(prod);
                debug_assert_eq!(py, 0);
                let z = &e.z;
                let (a, c) = (g / nb, f / nb);
                let literal = z.op(
                    z.op(z.op(a, z.inv(e.d1[e.rho0[a]])), c),
                    z.inv(e.d1[e.lambda0[c]]),
                );
                if literal != pz {
                    ordering_sensitive += 1;
                }
                tensor1[g * n1 + f] = Some(one_cell(pz, f % nb));
            }
        }
    }
    let src_obj = |c: usize| one_source[two_source[c]];
    let tgt_obj = |c: usize| one_target[two_source[c]];
    let mut tensor2 = vec![None; n2 * n2];
    for beta in 0..n2 {
        for alpha in 0..n2 {
            if src_obj(beta) == tgt_obj(alpha) {
                let prod = x.op(maps.u[beta / nb], maps.v[alpha / nb]);
                tensor2[beta * n2 + alpha] = Some(two_cell(prod, alpha % nb));
            }
        }
    }
    let cells = coherence_from_maps(e, &d, &maps, variant);
    let left_unitor = (0..n1).map(|f| two_cell(cells.l[f / nb], f % nb)).collect();
    let right_unitor = (0..n1).map(|f| two_cell(cells.r[f / nb], f % nb)).collect();
    let mut associator = vec![None; n1 * n1 * n1];
    for h in 0..n1 {
        for g in 0..n1 {
            if one_source[h] != one_target[g] {
                continue;
            }
            for f in 0..n1 {
                if one_source[g] == one_target[f] {
                    let a = cells.a[((h / nb) * nz + g / nb) * nz + f / nb];
                    associator[(h * n1 + g) * n1 + f] = Some(two_cell(a, f % nb));
                }
            }
        }
    }
    let rb = RealizedBicategory {
        objects: nb,
        one_source,
        one_target,
        two_source,
        two_target,
        unit1,
        unit2,
        vcomp,
        tensor1,
        tensor2,
        left_unitor,
        right_unitor,
        associator,
    };
    Ok((rb, RealizationNotes { ordering_sensitive }))
}
