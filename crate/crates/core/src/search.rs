//! Exhaustive enumeration of bicategory data over given groups, and a
//! single-entry mutation harness.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bicat_data::{
    check_conditions, equivariance_fingerprint, peiffer_witness, unitor_inverse_defect, Alpha2, BicatData, Table,
};
use crate::extended::RealizedBicategory;
use crate::group::{centralizes, enumerate_actions, enumerate_endos, enumerate_homs, FiniteGroup, Group, GroupHom, Subgroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layer {
    SourceTarget,
    Unitors,
    Bases,
    Actions,
    Composition,
}

impl std::fmt::Display for Layer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Layer::SourceTarget => "source/target pairs",
            Layer::Unitors => "unitors",
            Layer::Bases => "base maps",
            Layer::Actions => "actions",
            Layer::Composition => "composition check",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("search budget of {budget} candidates exceeded at layer: {layer}")]
    SearchBudgetExceeded { layer: Layer, budget: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    /// Maximum number of candidates allowed into any single layer.
    pub budget: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: 50_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    /// α₂ readings under which the composition check passes.
    pub alpha2: Vec<Alpha2>,
    /// Whether `s, t, λ, ρ` commute with the action.
    pub equivariant: [bool; 4],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumerated {
    pub data: BicatData,
    pub fingerprint: Fingerprint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub x: String,
    pub b: String,
    pub structures: Vec<Enumerated>,
    /// Candidates that reached the composition check.
    pub candidates: usize,
}

impl EnumerationResult {
    pub fn count(&self) -> usize {
        self.structures.len()
    }
}

fn table_eq(f: &[usize], g: &[usize]) -> bool {
    f == g
}

fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    g.iter().map(|&x| f[x]).collect()
}

struct Shared {
    x: FiniteGroup,
    b: FiniteGroup,
    endos: Vec<GroupHom>,
    homs: Vec<GroupHom>,
    actions: Vec<Vec<usize>>,
}

/// Every valid structure on `(X, B)`, sorted by the concatenated tables
/// `h, s, t, λ, ρ, ξ`.
pub fn enumerate_bicat_data(x: &FiniteGroup, b: &FiniteGroup, config: SearchConfig) -> Result<EnumerationResult, SearchError> {
    let shared = Shared {
        x: x.clone(),
        b: b.clone(),
        endos: enumerate_endos(x),
        homs: enumerate_homs(x, b),
        actions: enumerate_actions(b, x).into_iter().map(|a| a.table().to_vec()).collect(),
    };
    let e = &shared.endos;
    let over = |layer, n: usize| if n > config.budget { Err(SearchError::SearchBudgetExceeded { layer, budget: config.budget }) } else { Ok(()) };
    over(Layer::SourceTarget, e.len() * e.len())?;
    let pairs: Vec<(usize, usize)> = (0..e.len())
        .flat_map(|i| (0..e.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let (s, t) = (e[i].table(), e[j].table());
            table_eq(&compose(s, t), t) && table_eq(&compose(t, s), s)
        })
        .filter(|&(i, j)| {
            let ks = Subgroup::new(x, e[i].kernel().elements().to_vec()).expect("kernel");
            let kt = Subgroup::new(x, e[j].kernel().elements().to_vec()).expect("kernel");
            centralizes(&ks, &kt).expect("same parent")
        })
        .collect();
    over(Layer::Unitors, pairs.len() * e.len())?;
    let per_pair: Vec<Result<(Vec<Enumerated>, usize), SearchError>> =
        pairs.par_iter().map(|&(i, j)| search_pair(&shared, i, j, config)).collect();
    let mut structures = Vec::new();
    let mut candidates = 0;
    for r in per_pair {
        let (s, c) = r?;
        structures.extend(s);
        candidates += c;
    }
    structures.sort_by_cached_key(|s| s.data.canonical_key());
    structures.dedup_by(|a, b| a.data == b.data);
    Ok(EnumerationResult { x: x.name().to_string(), b: b.name().to_string(), structures, candidates })
}

fn search_pair(sh: &Shared, i: usize, j: usize, config: SearchConfig) -> Result<(Vec<Enumerated>, usize), SearchError> {
    let x = &sh.x;
    let (s, t) = (sh.endos[i].table(), sh.endos[j].table());
    let id: Vec<usize> = x.elements().collect();
    // (vi) depends on s, t and the unitor alone
    let probe = |f: &[usize]| {
        let d = BicatData::new(x, &sh.b, vec![0; x.order()], s.to_vec(), t.to_vec(), f.to_vec(), f.to_vec(), id.repeat(sh.b.order()))
            .expect("shapes");
        unitor_inverse_defect(&d, f) == id
    };
    let unitors: Vec<&[usize]> = sh.endos.iter().map(|f| f.table()).filter(|f| probe(f)).collect();
    let bases: Vec<&[usize]> = sh
        .homs
        .iter()
        .map(|h| h.table())
        .filter(|h| table_eq(&compose(h, s), h) && table_eq(&compose(h, t), h))
        .collect();
    let layered = unitors.len() * unitors.len() * bases.len();
    if layered > config.budget {
        return Err(SearchError::SearchBudgetExceeded { layer: Layer::Bases, budget: config.budget });
    }
    let mut out = Vec::new();
    let mut candidates = 0usize;
    for &l in &unitors {
        for &r in &unitors {
            for &h in &bases {
                if !(table_eq(&compose(h, l), h) && table_eq(&compose(h, r), h)) {
                    continue;
                }
                for xi in &sh.actions {
                    let d = BicatData::new(x, &sh.b, h.to_vec(), s.to_vec(), t.to_vec(), l.to_vec(), r.to_vec(), xi.clone())
                        .expect("shapes");
                    // (ii) is cheap, filter before the full report
                    let nx = x.order();
                    let equivariant = sh.b.elements().all(|g| {
                        x.elements().all(|a| h[xi[g * nx + a]] == sh.b.op(sh.b.op(g, h[a]), sh.b.inv(g)))
                    });
                    if !equivariant {
                        continue;
                    }
                    candidates += 1;
                    if candidates > config.budget {
                        return Err(SearchError::SearchBudgetExceeded { layer: Layer::Composition, budget: config.budget });
                    }
                    let report = check_conditions(&d);
                    if report.passed() {
                        let alpha2 = report.composition.as_ref().map(|c| c.passing_variants()).unwrap_or_default();
                        let equivariant = equivariance_fingerprint(&d);
                        out.push(Enumerated { data: d, fingerprint: Fingerprint { alpha2, equivariant } });
                    }
                }
            }
        }
    }
    Ok((out, candidates))
}

/// All crossed-module structures: `s = t = λ = ρ = id`, any `(h, ξ)` with
/// equivariance and the Peiffer identity.
pub fn enumerate_crossed_modules(x: &FiniteGroup, b: &FiniteGroup) -> EnumerationResult {
    let actions = enumerate_actions(b, x);
    let mut structures = Vec::new();
    let mut candidates = 0;
    for h in enumerate_homs(x, b) {
        for xi in &actions {
            candidates += 1;
            let d = BicatData::crossed_module(x, b, h.table().to_vec(), xi.table().to_vec()).expect("shapes");
            let report = check_conditions(&d);
            let basic = report.basic_passed();
            if basic && peiffer_witness(&d).is_none() {
                let alpha2 = report.composition.as_ref().map(|c| c.passing_variants()).unwrap_or_default();
                let equivariant = equivariance_fingerprint(&d);
                structures.push(Enumerated { data: d, fingerprint: Fingerprint { alpha2, equivariant } });
            }
        }
    }
    structures.sort_by_cached_key(|s| s.data.canonical_key());
    EnumerationResult { x: x.name().to_string(), b: b.name().to_string(), structures, candidates }
}

/// One table cell to overwrite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mutation {
    pub table: String,
    pub index: usize,
    pub value: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutationOutcome {
    pub mutation: Mutation,
    /// Why the verifier rejected the mutant; `None` if it was accepted.
    pub rejection: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct MutationReport {
    pub outcomes: Vec<MutationOutcome>,
}

impl MutationReport {
    pub fn accepted(&self) -> impl Iterator<Item = &MutationOutcome> {
        self.outcomes.iter().filter(|o| o.rejection.is_none())
    }

    pub fn all_rejected(&self) -> bool {
        self.accepted().next().is_none()
    }
}

/// Applies each mutation to a copy of `base` and runs `verify` on it.
/// `verify` returns the rejection reason, or `None` to accept.
pub fn mutate_and_expect_reject<S>(
    base: &S,
    mutations: &[Mutation],
    apply: impl Fn(&S, &Mutation) -> S,
    verify: impl Fn(&S) -> Option<String>,
) -> MutationReport {
    let outcomes = mutations
        .iter()
        .map(|m| MutationOutcome { mutation: m.clone(), rejection: verify(&apply(base, m)) })
        .collect();
    MutationReport { outcomes }
}

pub fn apply_data_mutation(d: &BicatData, m: &Mutation) -> BicatData {
    let table = Table::ALL.into_iter().find(|t| t.name() == m.table).expect("known table");
    d.with_entry(table, m.index, m.value)
}

/// Rejection reason from the full condition report.
pub fn condition_verdict(d: &BicatData) -> Option<String> {
    let r = check_conditions(d);
    r.first_failure().map(|e| match &e.witness {
        Some(w) => format!("{} {}", e.condition, w),
        None => e.condition.to_string(),
    })
}

/// `count` distinct single-entry changes of `d`, each replacing a cell by a
/// different value, chosen by a seeded generator.
pub fn seeded_data_mutations(d: &BicatData, count: usize, seed: u64) -> Vec<Mutation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Mutation> = Vec::new();
    let tables: Vec<Table> = Table::ALL.into_iter().filter(|&t| d.table_range(t) > 1).collect();
    let total: usize = tables.iter().map(|&t| d.table(t).len() * (d.table_range(t) - 1)).sum();
    assert!(count <= total, "not enough distinct mutations");
    while out.len() < count {
        let &t = tables.choose(&mut rng).expect("some table has room");
        let index = rng.gen_range(0..d.table(t).len());
        let old = d.table(t)[index];
        let mut value = rng.gen_range(0..d.table_range(t) - 1);
        if value >= old {
            value += 1;
        }
        let m = Mutation { table: t.name().to_string(), index, value };
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

/// Cell tables of a [`RealizedBicategory`] that can be mutated.
pub fn apply_realized_mutation(rb: &RealizedBicategory, m: &Mutation) -> RealizedBicategory {
    let mut rb = rb.clone();
    match m.table.as_str() {
        "vcomp" => rb.vcomp[m.index] = Some(m.value),
        "tensor1" => rb.tensor1[m.index] = Some(m.value),
        "tensor2" => rb.tensor2[m.index] = Some(m.value),
        "left_unitor" => rb.left_unitor[m.index] = m.value,
        "right_unitor" => rb.right_unitor[m.index] = m.value,
        "associator" => rb.associator[m.index] = Some(m.value),
        "unit2" => rb.unit2[m.index] = m.value,
        other => panic!("unknown table {other}"),
    }
    rb
}

/// One associator component replaced by every other 2-cell with the same
/// source and target.
pub fn associator_component_mutations(rb: &RealizedBicategory, component: usize) -> Vec<Mutation> {
    let current = rb.associator[component].expect("defined component");
    (0..rb.two_source.len())
        .filter(|&c| c != current && rb.two_source[c] == rb.two_source[current] && rb.two_target[c] == rb.two_target[current])
        .map(|value| Mutation { table: "associator".into(), index: component, value })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;

    #[test]
    fn trivial_x_has_one_structure_per_b() {
        let one = catalog::cyclic(1);
        for b in catalog::small_groups(4) {
            let r = enumerate_bicat_data(&one, &b, SearchConfig::default()).unwrap();
            assert_eq!(r.count(), 1, "{}", b.name());
        }
    }

    #[test]
    fn crossed_module_counts() {
        let z2 = catalog::cyclic(2);
        let z3 = catalog::cyclic(3);
        assert_eq!(enumerate_crossed_modules(&z2, &z2).count(), 2);
        assert_eq!(enumerate_crossed_modules(&z2, &z3).count(), 1);
        let s3 = catalog::symmetric(3);
        let conj = BicatData::conjugation(&s3);
        assert!(enumerate_crossed_modules(&s3, &s3).structures.iter().any(|e| e.data == conj));
    }

    #[test]
    fn budget_is_enforced() {
        let v4 = catalog::klein_four();
        let err = enumerate_bicat_data(&v4, &v4, SearchConfig { budget: 10 }).unwrap_err();
        assert!(matches!(err, SearchError::SearchBudgetExceeded { .. }));
    }

    #[test]
    fn identity_mutation_is_accepted() {
        let d = BicatData::conjugation(&catalog::symmetric(3));
        let m = Mutation { table: "h".into(), index: 3, value: d.h()[3] };
        let r = mutate_and_expect_reject(&d, &[m], apply_data_mutation, condition_verdict);
        assert!(!r.all_rejected());
    }

    #[test]
    fn seeded_mutations_are_distinct_and_change_something() {
        let d = BicatData::conjugation(&catalog::symmetric(3));
        let ms = seeded_data_mutations(&d, 20, 1);
        assert_eq!(ms.len(), 20);
        for m in &ms {
            assert_ne!(apply_data_mutation(&d, m), d);
        }
        assert_eq!(ms, seeded_data_mutations(&d, 20, 1));
    }
}
