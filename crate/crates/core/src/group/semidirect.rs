use super::{validate_action_table, ActionError, FiniteGroup, Group, GroupAction};

/// The semidirect product `N ⋊ K` with multiplication
/// `(n, k)·(n′, k′) = (n·(k·n′), k·k′)`.
///
/// Elements are encoded as `n * |K| + k`, so the encoding is lexicographic
/// in `(n, k)` and the identity `(e, e)` is 0. Multiplication is evaluated on
/// demand; call [`SemidirectProduct::to_finite_group`] for a table.
#[derive(Clone, Debug)]
pub struct SemidirectProduct<N, K> {
    normal: N,
    acting: K,
    /// `action[k * |N| + n] = k·n`
    action: Vec<usize>,
}

impl<N: Group, K: Group> SemidirectProduct<N, K> {
    pub fn new(normal: N, acting: K, action: Vec<usize>) -> Result<Self, ActionError> {
        validate_action_table(&acting, &normal, &action)?;
        Ok(SemidirectProduct { normal, acting, action })
    }

    /// Direct product, i.e. trivial action.
    pub fn direct(normal: N, acting: K) -> Self {
        let n = normal.order();
        let action = (0..acting.order()).flat_map(|_| 0..n).collect();
        SemidirectProduct { normal, acting, action }
    }

    pub fn normal(&self) -> &N {
        &self.normal
    }

    pub fn acting(&self) -> &K {
        &self.acting
    }

    #[inline]
    pub fn act(&self, k: usize, n: usize) -> usize {
        self.action[k * self.normal.order() + n]
    }

    #[inline]
    pub fn encode(&self, n: usize, k: usize) -> usize {
        n * self.acting.order() + k
    }

    #[inline]
    pub fn decode(&self, e: usize) -> (usize, usize) {
        let ko = self.acting.order();
        (e / ko, e % ko)
    }

    pub fn to_finite_group(&self, name: impl Into<String>) -> FiniteGroup {
        FiniteGroup::tabulate(name, self)
    }
}

impl<N: Group, K: Group> Group for SemidirectProduct<N, K> {
    #[inline]
    fn order(&self) -> usize {
        self.normal.order() * self.acting.order()
    }

    #[inline]
    fn op(&self, a: usize, b: usize) -> usize {
        let (n1, k1) = self.decode(a);
        let (n2, k2) = self.decode(b);
        self.encode(self.normal.op(n1, self.act(k1, n2)), self.acting.op(k1, k2))
    }

    #[inline]
    fn inv(&self, a: usize) -> usize {
        let (n, k) = self.decode(a);
        let ki = self.acting.inv(k);
        self.encode(self.act(ki, self.normal.inv(n)), ki)
    }

    fn generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = self.normal.generators().into_iter().map(|n| self.encode(n, 0)).collect();
        gens.extend(self.acting.generators().into_iter().map(|k| self.encode(0, k)));
        gens
    }
}

/// `X ⋊_ξ B` for a validated action.
pub fn semidirect_product(x: &FiniteGroup, b: &FiniteGroup, xi: &GroupAction) -> Result<SemidirectProduct<FiniteGroup, FiniteGroup>, ActionError> {
    if xi.acting() != b || xi.target() != x {
        return Err(ActionError::RowCount { expected: b.order(), found: xi.acting().order() });
    }
    Ok(SemidirectProduct { normal: x.clone(), acting: b.clone(), action: xi.table().to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, find_isomorphism};
    use proptest::prelude::*;

    #[test]
    fn z2_times_z2_is_klein() {
        let z2 = catalog::cyclic(2);
        let p = semidirect_product(&z2, &z2, &GroupAction::trivial(&z2, &z2)).unwrap();
        let g = p.to_finite_group("Z2xZ2");
        assert!(find_isomorphism(&g, &catalog::klein_four()).is_some());
    }

    #[test]
    fn z3_by_z2_inversion_is_s3() {
        let z2 = catalog::cyclic(2);
        let z3 = catalog::cyclic(3);
        let inv = GroupAction::new(&z2, &z3, &[vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        let g = semidirect_product(&z3, &z2, &inv).unwrap().to_finite_group("Z3:Z2");
        assert!(find_isomorphism(&g, &catalog::symmetric(3)).is_some());
        assert!(find_isomorphism(&g, &catalog::cyclic(6)).is_none());
    }

    #[test]
    fn trivial_normal_factor_gives_acting_group() {
        let one = catalog::cyclic(1);
        let s3 = catalog::symmetric(3);
        let g = semidirect_product(&one, &s3, &GroupAction::trivial(&s3, &one)).unwrap().to_finite_group("1:S3");
        assert_eq!(g, s3);
    }

    #[test]
    fn tabulated_product_satisfies_group_axioms() {
        let s3 = catalog::symmetric(3);
        let p = semidirect_product(&s3, &s3, &GroupAction::conjugation(&s3)).unwrap();
        let g = p.to_finite_group("S3:S3");
        assert!(FiniteGroup::validate("check", &g.rows(), 0).is_ok());
    }

    proptest! {
        #[test]
        fn encode_decode_are_inverse(x in 0usize..6, b in 0usize..4) {
            let p = SemidirectProduct::direct(catalog::symmetric(3), catalog::cyclic(4));
            prop_assert_eq!(p.decode(p.encode(x, b)), (x, b));
        }

        #[test]
        fn direct_product_is_componentwise(x in 0usize..6, b in 0usize..4, x2 in 0usize..6, b2 in 0usize..4) {
            let s3 = catalog::symmetric(3);
            let z4 = catalog::cyclic(4);
            let p = SemidirectProduct::direct(s3.clone(), z4.clone());
            let prod = p.op(p.encode(x, b), p.encode(x2, b2));
            prop_assert_eq!(p.decode(prod), (s3.op(x, x2), z4.op(b, b2)));
        }
    }
}
