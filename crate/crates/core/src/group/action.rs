use super::{hom_witness, FiniteGroup, Group};

/// Why a table of permutations fails to be a group action.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error("action table has {found} rows, expected {expected}")]
    RowCount { expected: usize, found: usize },
    #[error("row {row} has length {found}, expected {expected}")]
    RowLength { row: usize, expected: usize, found: usize },
    #[error("row {row} entry {index} = {value} is out of range")]
    OutOfRange { row: usize, index: usize, value: usize },
    #[error("acting element {0} does not act bijectively")]
    NotBijective(usize),
    #[error("acting element {b} is not a homomorphism: witness ({x}, {y})")]
    NotAutomorphism { b: usize, x: usize, y: usize },
    #[error("identity does not act trivially: moves {0}")]
    IdentityMoves(usize),
    #[error("composition law fails: ({b}·{c})·{x} ≠ {b}·({c}·{x})")]
    NotCompatible { b: usize, c: usize, x: usize },
}

/// Validates a dense action table `table[k * |N| + x] = k·x` of an arbitrary
/// acting [`Group`] on a target group.
///
/// The composition law checked is the standard one, `(b·b′)·x = b·(b′·x)`.
pub fn validate_action_table<K: Group, N: Group>(acting: &K, target: &N, table: &[usize]) -> Result<(), ActionError> {
    let n = target.order();
    let k = acting.order();
    if table.len() != n * k {
        return Err(ActionError::RowCount { expected: k, found: table.len() / n.max(1) });
    }
    let row = |b: usize| &table[b * n..(b + 1) * n];
    for b in 0..k {
        let r = row(b);
        if let Some(i) = r.iter().position(|&v| v >= n) {
            return Err(ActionError::OutOfRange { row: b, index: i, value: r[i] });
        }
        let mut seen = vec![false; n];
        for &v in r {
            if seen[v] {
                return Err(ActionError::NotBijective(b));
            }
            seen[v] = true;
        }
        if let Some((x, y)) = hom_witness(target, target, |x| r[x]) {
            return Err(ActionError::NotAutomorphism { b, x, y });
        }
    }
    if let Some(x) = (0..n).find(|&x| row(0)[x] != x) {
        return Err(ActionError::IdentityMoves(x));
    }
    // compatibility, generator fast path first
    let gens = acting.generators();
    let fast = gens.iter().all(|&g| {
        (0..k).all(|c| {
            let gc = acting.op(g, c);
            (0..n).all(|x| row(gc)[x] == row(g)[row(c)[x]])
        })
    });
    if !fast {
        for b in 0..k {
            for c in 0..k {
                let bc = acting.op(b, c);
                for x in 0..n {
                    if row(bc)[x] != row(b)[row(c)[x]] {
                        return Err(ActionError::NotCompatible { b, c, x });
                    }
                }
            }
        }
    }
    Ok(())
}

/// An action of a tabulated group `B` on a tabulated group `X` by
/// automorphisms, stored as one permutation of `X` per element of `B`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupAction {
    acting: FiniteGroup,
    target: FiniteGroup,
    table: Vec<usize>,
}

impl GroupAction {
    pub fn new(acting: &FiniteGroup, target: &FiniteGroup, auts: &[Vec<usize>]) -> Result<Self, ActionError> {
        let n = target.order();
        if auts.len() != acting.order() {
            return Err(ActionError::RowCount { expected: acting.order(), found: auts.len() });
        }
        if let Some((row, r)) = auts.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(ActionError::RowLength { row, expected: n, found: r.len() });
        }
        let table: Vec<usize> = auts.iter().flatten().copied().collect();
        validate_action_table(acting, target, &table)?;
        Ok(GroupAction { acting: acting.clone(), target: target.clone(), table })
    }

    pub fn trivial(acting: &FiniteGroup, target: &FiniteGroup) -> Self {
        let n = target.order();
        let table = (0..acting.order()).flat_map(|_| 0..n).collect();
        GroupAction { acting: acting.clone(), target: target.clone(), table }
    }

    /// `G` acting on itself by conjugation, `g·x = g x g⁻¹`.
    pub fn conjugation(g: &FiniteGroup) -> Self {
        let table =
            g.elements().flat_map(|a| g.elements().map(move |x| (a, x))).map(|(a, x)| g.op(g.op(a, x), g.inv(a))).collect();
        GroupAction { acting: g.clone(), target: g.clone(), table }
    }

    pub(crate) fn from_table_unchecked(acting: &FiniteGroup, target: &FiniteGroup, table: Vec<usize>) -> Self {
        GroupAction { acting: acting.clone(), target: target.clone(), table }
    }

    pub fn acting(&self) -> &FiniteGroup {
        &self.acting
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    #[inline]
    pub fn act(&self, b: usize, x: usize) -> usize {
        self.table[b * self.target.order() + x]
    }

    pub fn permutation(&self, b: usize) -> &[usize] {
        let n = self.target.order();
        &self.table[b * n..(b + 1) * n]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.acting.order()).map(|b| self.permutation(b).to_vec()).collect()
    }

    /// Dense table, row-major by acting element.
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn is_trivial(&self) -> bool {
        let n = self.target.order();
        self.table.chunks(n).all(|r| r.iter().enumerate().all(|(i, &x)| i == x))
    }
}
