//! Standard small groups.

use super::{FiniteGroup, Group};

pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n > 0);
    let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    FiniteGroup::from_table_unchecked(format!("Z{n}"), n, table)
}

pub fn klein_four() -> FiniteGroup {
    direct_product(&cyclic(2), &cyclic(2)).with_name("V4")
}

/// Element `(g, h)` is encoded as `g * |h| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let (n, m) = (g.order(), h.order());
    let size = n * m;
    let mut table = vec![0; size * size];
    for a in 0..size {
        for b in 0..size {
            table[a * size + b] = g.op(a / m, b / m) * m + h.op(a % m, b % m);
        }
    }
    FiniteGroup::from_table_unchecked(format!("{}x{}", g.name(), h.name()), size, table)
}

/// Permutations of `n` letters in lexicographic order, composed as
/// `(σ·τ)(i) = σ(τ(i))`.
pub fn symmetric(n: usize) -> FiniteGroup {
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        perms.push(p.clone());
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { break };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    permutation_group(format!("S{n}"), &perms)
}

/// Symmetries of the regular `n`-gon, order `2n`: rotations `r^k` at `k`,
/// reflections `r^k f` at `n + k`.
pub fn dihedral(n: usize) -> FiniteGroup {
    let size = 2 * n;
    let mut table = vec![0; size * size];
    for a in 0..size {
        for b in 0..size {
            let (fa, ka) = (a / n, a % n);
            let (fb, kb) = (b / n, b % n);
            // r^ka f^fa r^kb f^fb = r^(ka ± kb) f^(fa+fb)
            let k = if fa == 0 { (ka + kb) % n } else { (ka + n - kb) % n };
            table[a * size + b] = ((fa + fb) % 2) * n + k;
        }
    }
    FiniteGroup::from_table_unchecked(format!("D{n}"), size, table)
}

/// Quaternion group: `±1, ±i, ±j, ±k` encoded as `sign * 4 + unit`.
pub fn quaternion() -> FiniteGroup {
    // unit products: 1=0, i=1, j=2, k=3; (sign, unit)
    let mul = |a: usize, b: usize| -> (usize, usize) {
        match (a, b) {
            (0, x) | (x, 0) => (0, x),
            (x, y) if x == y => (1, 0),
            (1, 2) => (0, 3),
            (2, 1) => (1, 3),
            (2, 3) => (0, 1),
            (3, 2) => (1, 1),
            (3, 1) => (0, 2),
            (1, 3) => (1, 2),
            _ => unreachable!(),
        }
    };
    let mut table = vec![0; 64];
    for a in 0..8 {
        for b in 0..8 {
            let (s, u) = mul(a % 4, b % 4);
            table[a * 8 + b] = ((a / 4 + b / 4 + s) % 2) * 4 + u;
        }
    }
    FiniteGroup::from_table_unchecked("Q8", 8, table)
}

fn permutation_group(name: String, perms: &[Vec<usize>]) -> FiniteGroup {
    let n = perms.len();
    let mut sorted = perms.to_vec();
    sorted.sort();
    let mut table = vec![0; n * n];
    for (i, s) in sorted.iter().enumerate() {
        for (j, t) in sorted.iter().enumerate() {
            let st: Vec<usize> = t.iter().map(|&x| s[x]).collect();
            table[i * n + j] = sorted.binary_search(&st).expect("closed");
        }
    }
    FiniteGroup::from_table_unchecked(name, n, table)
}

/// One representative of every isomorphism class of order at most `max`
/// (`max ≤ 8`), ordered by order.
pub fn small_groups(max: usize) -> Vec<FiniteGroup> {
    assert!(max <= 8, "catalog only covers orders up to 8");
    let z2 = cyclic(2);
    let mut out = Vec::new();
    for n in 1..=max {
        out.push(cyclic(n));
        match n {
            4 => out.push(klein_four()),
            6 => out.push(symmetric(3)),
            8 => {
                out.push(direct_product(&cyclic(4), &z2));
                out.push(direct_product(&klein_four(), &z2).with_name("Z2^3"));
                out.push(dihedral(4));
                out.push(quaternion());
            }
            _ => {}
        }
    }
    out
}

/// Looks a catalog group up by name, e.g. `Z4`, `V4`, `S3`, `D4`, `Q8`.
pub fn by_name(name: &str) -> Option<FiniteGroup> {
    if let Some(n) = name.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()) {
        return (n > 0).then(|| cyclic(n));
    }
    if let Some(n) = name.strip_prefix('S').and_then(|s| s.parse::<usize>().ok()) {
        return (1..=5).contains(&n).then(|| symmetric(n));
    }
    if let Some(n) = name.strip_prefix('D').and_then(|s| s.parse::<usize>().ok()) {
        return (n >= 2).then(|| dihedral(n));
    }
    match name {
        "V4" => Some(klein_four()),
        "Q8" => Some(quaternion()),
        _ => small_groups(8).into_iter().find(|g| g.name() == name),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(symmetric(3).order(), 6);
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(dihedral(4).order(), 8);
        assert!(!quaternion().is_abelian());
        assert!(!dihedral(4).is_abelian());
        assert!(direct_product(&cyclic(4), &cyclic(2)).is_abelian());
    }

    #[test]
    fn s3_validates_from_its_table() {
        let s3 = symmetric(3);
        assert!(FiniteGroup::validate("S3", &s3.rows(), 0).is_ok());
        assert_eq!((0..6).filter(|&x| s3.element_order(x) == 2).count(), 3);
    }

    #[test]
    fn lookup() {
        assert_eq!(by_name("Z4"), Some(cyclic(4)));
        assert_eq!(by_name("S3"), Some(symmetric(3)));
        assert_eq!(by_name("Z2^3").map(|g| g.order()), Some(8));
        assert!(by_name("W").is_none());
    }
}
