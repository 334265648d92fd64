use std::fmt;
use std::sync::Arc;

use super::GroupError;

/// Anything that behaves like a finite group whose elements are the indices
/// `0..order()`, with the identity at index 0.
///
/// Implemented both by tabulated groups ([`FiniteGroup`]) and by lazily
/// evaluated constructions such as [`super::SemidirectProduct`], so that
/// homomorphism checks on large iterated products never materialize a table.
pub trait Group {
    fn order(&self) -> usize;
    fn op(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
    /// A generating set. Empty exactly for the trivial group.
    fn generators(&self) -> Vec<usize>;

    fn identity(&self) -> usize {
        0
    }

    /// The group Mal'tsev term `a·b⁻¹·c`.
    fn maltsev(&self, a: usize, b: usize, c: usize) -> usize {
        self.op(self.op(a, self.inv(b)), c)
    }

    fn element_order(&self, a: usize) -> usize {
        let mut n = 1;
        let mut x = a;
        while x != 0 {
            x = self.op(x, a);
            n += 1;
        }
        n
    }
}

impl<G: Group + ?Sized> Group for &G {
    fn order(&self) -> usize {
        (**self).order()
    }
    fn op(&self, a: usize, b: usize) -> usize {
        (**self).op(a, b)
    }
    fn inv(&self, a: usize) -> usize {
        (**self).inv(a)
    }
    fn generators(&self) -> Vec<usize> {
        (**self).generators()
    }
}

struct Inner {
    name: String,
    order: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    gens: Vec<usize>,
}

/// A finite group stored as a validated Cayley table.
///
/// Cloning is cheap (the table is shared).
#[derive(Clone)]
pub struct FiniteGroup(Arc<Inner>);

impl FiniteGroup {
    /// Validates a raw operation table.
    ///
    /// `identity` names the identity element of `rows`; if it is not 0 the
    /// elements 0 and `identity` are swapped so that the result has its
    /// identity at index 0.
    pub fn validate(
        name: impl Into<String>,
        rows: &[Vec<usize>],
        identity: usize,
    ) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotSquare { row: r, len: row.len(), order: n });
            }
        }
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::NotClosed { a: r, b: c, value: v });
                }
            }
        }
        if identity >= n {
            return Err(GroupError::NoIdentity);
        }
        if (0..n).any(|x| rows[identity][x] != x || rows[x][identity] != x) {
            return Err(GroupError::NoIdentity);
        }
        let mut inv = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| rows[x][y] == identity && rows[y][x] == identity) {
                Some(y) => inv[x] = y,
                None => return Err(GroupError::NoInverse(x)),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = rows[a][b];
                for c in 0..n {
                    if rows[ab][c] != rows[a][rows[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        // relabel so that the identity sits at 0
        let swap = |x: usize| {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[swap(a) * n + swap(b)] = swap(rows[a][b]);
            }
        }
        Ok(Self::from_table_unchecked(name, n, table))
    }

    /// Builds a group from a table already known to satisfy the axioms, with
    /// identity at index 0. Used for constructions (products, subgroups)
    /// whose group structure follows from theory.
    pub(crate) fn from_table_unchecked(name: impl Into<String>, order: usize, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let mut inv = vec![0; order];
        for x in 0..order {
            inv[x] = (0..order)
                .find(|&y| table[x * order + y] == 0)
                .expect("constructed table must have inverses");
        }
        let mut g = Inner { name: name.into(), order, table, inv, gens: Vec::new() };
        g.gens = greedy_generators(order, |a, b| g.table[a * order + b]);
        FiniteGroup(Arc::new(g))
    }

    /// Tabulates any [`Group`].
    pub fn tabulate<G: Group>(name: impl Into<String>, g: &G) -> Self {
        let n = g.order();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = g.op(a, b);
            }
        }
        Self::from_table_unchecked(name, n, table)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn with_name(&self, name: impl Into<String>) -> Self {
        FiniteGroup(Arc::new(Inner {
            name: name.into(),
            order: self.0.order,
            table: self.0.table.clone(),
            inv: self.0.inv.clone(),
            gens: self.0.gens.clone(),
        }))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.0.table.chunks(self.0.order).map(|r| r.to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.0.order;
        (0..n).all(|a| (0..n).all(|b| self.op(a, b) == self.op(b, a)))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.0.order
    }
}

impl Group for FiniteGroup {
    #[inline]
    fn order(&self) -> usize {
        self.0.order
    }
    #[inline]
    fn op(&self, a: usize, b: usize) -> usize {
        self.0.table[a * self.0.order + b]
    }
    #[inline]
    fn inv(&self, a: usize) -> usize {
        self.0.inv[a]
    }
    fn generators(&self) -> Vec<usize> {
        self.0.gens.clone()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.table == other.0.table
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.0.name, self.0.order)
    }
}

/// Scans elements in index order and keeps each one not yet generated.
pub(crate) fn greedy_generators(order: usize, op: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut inside = vec![false; order];
    inside[0] = true;
    let mut members = vec![0usize];
    for x in 1..order {
        if inside[x] {
            continue;
        }
        gens.push(x);
        // close under right multiplication by all generators
        let mut frontier: Vec<usize> = members.clone();
        while let Some(w) = frontier.pop() {
            for &g in &gens {
                let wg = op(w, g);
                if !inside[wg] {
                    inside[wg] = true;
                    members.push(wg);
                    frontier.push(wg);
                }
            }
        }
    }
    gens
}
