//! Constructors for the small groups used in tests, sweeps, and reporting.
//!
//! Every constructor goes through full table validation, so a typo in a
//! presentation here cannot produce a non-group.

use std::sync::Arc;

use crate::group::{is_isomorphic, FiniteGroup, Subgroup};

/// Z/n as addition mod n; n >= 1.
pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1, "cyclic group needs positive order");
    let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    FiniteGroup::from_table(&table).expect("cyclic table is a group")
}

/// Direct product of cyclic groups of the given orders, in mixed-radix
/// element order (last factor varies fastest). `&[]` is the trivial group.
pub fn abelian(orders: &[usize]) -> FiniteGroup {
    let n: usize = orders.iter().product();
    assert!(orders.iter().all(|&d| d >= 1));
    let decode = |mut idx: usize| -> Vec<usize> {
        let mut t = vec![0usize; orders.len()];
        for k in (0..orders.len()).rev() {
            t[k] = idx % orders[k];
            idx /= orders[k];
        }
        t
    };
    let encode = |t: &[usize]| -> usize {
        t.iter().zip(orders).fold(0usize, |acc, (&v, &d)| acc * d + v)
    };
    let table: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let a = decode(i);
            (0..n)
                .map(|j| {
                    let b = decode(j);
                    let sum: Vec<usize> =
                        a.iter().zip(&b).zip(orders).map(|((&x, &y), &d)| (x + y) % d).collect();
                    encode(&sum)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&table).expect("product of cyclics is a group")
}

pub fn klein_four() -> FiniteGroup {
    abelian(&[2, 2])
}

pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let (na, nb) = (a.order(), b.order());
    let table: Vec<Vec<usize>> = (0..na * nb)
        .map(|i| {
            let (ia, ib) = (i / nb, i % nb);
            (0..na * nb)
                .map(|j| {
                    let (ja, jb) = (j / nb, j % nb);
                    a.mul(ia, ja) * nb + b.mul(ib, jb)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&table).expect("direct product is a group")
}

/// Semidirect product N x| H for an action h |-> automorphism of N given as
/// a plain function. Pairs are indexed h * |N| + n, identity at 0. The action
/// is not validated here; table validation rejects anything inconsistent.
pub fn semidirect(
    n: &FiniteGroup,
    h: &FiniteGroup,
    act: impl Fn(usize, usize) -> usize,
) -> FiniteGroup {
    let (nn, nh) = (n.order(), h.order());
    let table: Vec<Vec<usize>> = (0..nn * nh)
        .map(|i| {
            let (h1, n1) = (i / nn, i % nn);
            (0..nn * nh)
                .map(|j| {
                    let (h2, n2) = (j / nn, j % nn);
                    // (n1, h1) * (n2, h2) = (n1 * act(h1, n2), h1 * h2)
                    h.mul(h1, h2) * nn + n.mul(n1, act(h1, n2))
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&table).expect("semidirect action must be by automorphisms")
}

/// Dihedral group of order 2n: rotations r^i at indices 0..n, reflections
/// s*r^i at indices n..2n.
pub fn dihedral(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let idx = |e: usize, i: usize| e * n + i;
    let table: Vec<Vec<usize>> = (0..2 * n)
        .map(|x| {
            let (e1, i1) = (x / n, x % n);
            (0..2 * n)
                .map(|y| {
                    let (e2, i2) = (y / n, y % n);
                    // s^e1 r^i1 * s^e2 r^i2 = s^(e1+e2) r^(i1*(-1)^e2 + i2)
                    let base = if e2 == 1 { (n - i1) % n + i2 } else { i1 + i2 };
                    idx((e1 + e2) % 2, base % n)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&table).expect("dihedral table is a group")
}

pub fn symmetric_3() -> FiniteGroup {
    dihedral(3)
}

/// Dicyclic group of order 4n: a^(2n)=1, b^2=a^n, b a b^-1 = a^-1.
/// Elements a^i b^e at indices e*2n + i.
pub fn dicyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let m = 2 * n;
    let table: Vec<Vec<usize>> = (0..4 * n)
        .map(|x| {
            let (e1, i1) = (x / m, x % m);
            (0..4 * n)
                .map(|y| {
                    let (e2, i2) = (y / m, y % m);
                    // a^i1 b^e1 * a^i2 b^e2 = a^(i1 + (-1)^e1 i2 + n*[e1&e2]) b^((e1+e2)%2)
                    let j = if e1 == 1 { (m - i2) % m } else { i2 };
                    let carry = if e1 == 1 && e2 == 1 { n } else { 0 };
                    ((e1 + e2) % 2) * m + (i1 + j + carry) % m
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&table).expect("dicyclic table is a group")
}

pub fn quaternion_8() -> FiniteGroup {
    dicyclic(2)
}

/// Alternating group on 4 letters, as composition of even permutations
/// listed in lexicographic order (identity first).
pub fn alternating_4() -> FiniteGroup {
    let mut perms: Vec<[usize; 4]> = Vec::new();
    let mut p = [0usize, 1, 2, 3];
    loop {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            perms.push(p);
        }
        // next lexicographic permutation
        let Some(k) = (0..3).rev().find(|&k| p[k] < p[k + 1]) else {
            break;
        };
        let l = (k + 1..4).rev().find(|&l| p[l] > p[k]).unwrap();
        p.swap(k, l);
        p[k + 1..].reverse();
    }
    let pos = |q: &[usize; 4]| perms.iter().position(|r| r == q).unwrap();
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| {
                    // (a then b) as functions: (a*b)(x) = a(b(x))
                    let c = [a[b[0]], a[b[1]], a[b[2]], a[b[3]]];
                    pos(&c)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&table).expect("A4 table is a group")
}

/// Order-16 two-generator groups a^8 = b^2 = 1, b a b^-1 = a^k.
fn order16_twist(k: usize) -> FiniteGroup {
    let table: Vec<Vec<usize>> = (0..16)
        .map(|x| {
            let (e1, i1) = (x / 8, x % 8);
            (0..16)
                .map(|y| {
                    let (e2, i2) = (y / 8, y % 8);
                    // a^i1 b^e1 * a^i2 b^e2 = a^(i1 + i2*k^e1) b^(e1+e2)
                    let j = if e1 == 1 { (i2 * k) % 8 } else { i2 };
                    ((e1 + e2) % 2) * 8 + (i1 + j) % 8
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&table).expect("order-16 twist table is a group")
}

pub fn dihedral_16() -> FiniteGroup {
    dihedral(8)
}

pub fn semidihedral_16() -> FiniteGroup {
    order16_twist(3)
}

pub fn modular_16() -> FiniteGroup {
    order16_twist(5)
}

pub fn quaternion_16() -> FiniteGroup {
    dicyclic(4)
}

/// a^4 = b^4 = 1, b a b^-1 = a^-1.
pub fn z4_rtimes_z4() -> FiniteGroup {
    let z4 = cyclic(4);
    semidirect(&z4, &z4, |h, n| if h % 2 == 1 { (4 - n) % 4 } else { n })
}

/// (Z/2 x Z/2) x| Z/4 with the generator swapping the two factors.
pub fn v4_rtimes_z4() -> FiniteGroup {
    let v4 = klein_four();
    let z4 = cyclic(4);
    semidirect(&v4, &z4, |h, n| {
        if h % 2 == 1 {
            // swap coordinates of n = 2*x + y
            (n % 2) * 2 + n / 2
        } else {
            n
        }
    })
}

/// Central product D4 * Z4 over the shared center (the Pauli group).
pub fn central_product_d4_z4() -> FiniteGroup {
    let d4 = dihedral(4);
    let prod = Arc::new(direct_product(&d4, &cyclic(4)));
    // central element of D4 is r^2 (rotation index 2); glue (r^2, 2) = index 10.
    let members = prod.closure(&[10]);
    let sub = Subgroup::new(&prod, members).expect("central subgroup");
    let (q, _) = sub.quotient().expect("central subgroup is normal");
    (*q).clone()
}

/// All nonabelian isomorphism types of order <= 16 that this toolkit can
/// name, paired with their tags.
fn nonabelian_catalog() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("S3", symmetric_3()),
        ("D4", dihedral(4)),
        ("Q8", quaternion_8()),
        ("D5", dihedral(5)),
        ("D6", dihedral(6)),
        ("Dic3", dicyclic(3)),
        ("A4", alternating_4()),
        ("D7", dihedral(7)),
        ("D8", dihedral_16()),
        ("SD16", semidihedral_16()),
        ("M16", modular_16()),
        ("Q16", quaternion_16()),
        ("Z4sZ4", z4_rtimes_z4()),
        ("V4sZ4", v4_rtimes_z4()),
        ("D4xZ2", direct_product(&dihedral(4), &cyclic(2))),
        ("Q8xZ2", direct_product(&quaternion_8(), &cyclic(2))),
        ("D4oZ4", central_product_d4_z4()),
    ]
}

/// Human-readable isomorphism-type tag. Abelian groups are named exactly by
/// invariant factors; nonabelian groups of order <= 16 by catalog lookup.
pub fn structure_tag(g: &Arc<FiniteGroup>) -> String {
    if g.order() == 1 {
        return "1".to_string();
    }
    if g.is_abelian() {
        let (fab, _, _) = crate::zlattice::abelian_structure(g).expect("abelian group");
        return fab
            .factors()
            .iter()
            .map(|d| format!("Z{d}"))
            .collect::<Vec<_>>()
            .join("x");
    }
    if g.order() <= 16 {
        for (tag, cand) in nonabelian_catalog() {
            if cand.order() == g.order() && is_isomorphic(g, &Arc::new(cand)) {
                return tag.to_string();
            }
        }
    }
    format!("NA{}", g.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::is_isomorphic;

    #[test]
    fn constructors_have_expected_orders() {
        assert_eq!(cyclic(1).order(), 1);
        assert_eq!(cyclic(7).order(), 7);
        assert_eq!(klein_four().order(), 4);
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(dicyclic(3).order(), 12);
        assert_eq!(alternating_4().order(), 12);
        assert_eq!(z4_rtimes_z4().order(), 16);
        assert_eq!(v4_rtimes_z4().order(), 16);
        assert_eq!(central_product_d4_z4().order(), 16);
    }

    #[test]
    fn nonabelian_catalog_is_pairwise_non_isomorphic() {
        let cat = nonabelian_catalog();
        for (i, (ta, a)) in cat.iter().enumerate() {
            assert!(!a.is_abelian(), "{ta} should be nonabelian");
            for (tb, b) in cat.iter().skip(i + 1) {
                if a.order() != b.order() {
                    continue;
                }
                assert!(
                    !is_isomorphic(&Arc::new(a.clone()), &Arc::new(b.clone())),
                    "{ta} and {tb} should differ"
                );
            }
        }
    }

    #[test]
    fn q8_has_one_involution() {
        let q8 = quaternion_8();
        let count = (0..8).filter(|&x| x != 0 && q8.mul(x, x) == 0).count();
        assert_eq!(count, 1);
    }

    #[test]
    fn dicyclic_relations_hold() {
        // a = index 1, b = index 2n (e=1, i=0)
        for n in 1..=4 {
            let g = dicyclic(n);
            let a = 1;
            let b = 2 * n;
            assert_eq!(g.element_order(a), 2 * n);
            // b^2 = a^n
            assert_eq!(g.mul(b, b), g.pow(a, n as i64));
            // b a b^-1 = a^-1
            assert_eq!(g.conj(b, a), g.inv(a));
        }
    }

    #[test]
    fn structure_tags() {
        assert_eq!(structure_tag(&Arc::new(cyclic(4))), "Z4");
        assert_eq!(structure_tag(&Arc::new(klein_four())), "Z2xZ2");
        assert_eq!(structure_tag(&Arc::new(symmetric_3())), "S3");
        assert_eq!(structure_tag(&Arc::new(quaternion_8())), "Q8");
        assert_eq!(structure_tag(&Arc::new(cyclic(1))), "1");
        assert_eq!(structure_tag(&Arc::new(abelian(&[2, 4]))), "Z2xZ4");
    }

    #[test]
    fn a4_order_histogram() {
        let a4 = alternating_4();
        let hist = Arc::new(a4).order_histogram();
        assert_eq!(hist, vec![(1, 1), (2, 3), (3, 8)]);
    }
}
