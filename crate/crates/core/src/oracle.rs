//! Brute-force reference implementations for tiny instances: cocycle and
//! coboundary enumeration, H^2 by coset counting, exhaustive co-prolongation
//! search, and an extension census by explicit isomorphism search. These
//! certify the lattice-arithmetic path and never share code with it: class
//! membership here is decided by searching for explicit witnesses.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::cohomology::{coboundary, is_cocycle, pullback_into, Cochain, CohomologyError, GModule};
use crate::coprolong::{CoprolongError, System};
use crate::extension::{crossed_product, factor_set, Extension, ExtensionError};
use crate::group::GroupHom;

/// Cap on enumeration size. Every oracle checks its full cardinality against
/// the cap before generating anything; exceeding it is an error, never a
/// silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumGuard {
    pub max_points: u128,
}

impl Default for EnumGuard {
    fn default() -> Self {
        EnumGuard {
            max_points: 1 << 20,
        }
    }
}

impl EnumGuard {
    pub fn new(max_points: u128) -> Self {
        EnumGuard { max_points }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration needs {required} points but the guard allows {allowed}")]
    GuardExceeded { required: BigInt, allowed: u128 },
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error(transparent)]
    Coprolong(#[from] CoprolongError),
}

fn check_guard(moduli: &[BigInt], guard: &EnumGuard) -> Result<(), OracleError> {
    let mut required = BigInt::one();
    for m in moduli {
        required *= m;
    }
    if required > BigInt::from(guard.max_points) {
        return Err(OracleError::GuardExceeded {
            required,
            allowed: guard.max_points,
        });
    }
    Ok(())
}

/// Row-major enumeration of integer vectors below the given moduli: the last
/// coordinate varies fastest, so emission order is lexicographic.
struct Odometer {
    moduli: Vec<i64>,
    current: Option<Vec<i64>>,
}

impl Odometer {
    fn new(moduli: Vec<i64>) -> Self {
        let start = if moduli.iter().all(|&m| m > 0) {
            Some(vec![0; moduli.len()])
        } else {
            None
        };
        Odometer {
            moduli,
            current: start,
        }
    }
}

impl Iterator for Odometer {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().expect("just cloned");
        let mut pos = self.moduli.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < self.moduli[pos] {
                break;
            }
            cur[pos] = 0;
        }
        Some(out)
    }
}

fn enumerate_cochains(
    module: &Arc<GModule>,
    degree: usize,
    guard: &EnumGuard,
) -> Result<impl Iterator<Item = Cochain>, OracleError> {
    let moduli_big = Cochain::flat_moduli(module, degree);
    check_guard(&moduli_big, guard)?;
    let moduli: Vec<i64> = module
        .coeff()
        .factors()
        .iter()
        .cloned()
        .cycle()
        .take(moduli_big.len())
        .collect();
    let module = Arc::clone(module);
    Ok(Odometer::new(moduli).map(move |flat| {
        let flat_big: Vec<BigInt> = flat.iter().map(|&x| BigInt::from(x)).collect();
        Cochain::from_flat(&module, degree, &flat_big)
    }))
}

/// Group and coefficient arithmetic flattened into lookup tables over element
/// indices, so the enumeration loop allocates nothing. Coordinate tuples are
/// indexed with the first coordinate most significant, which makes per-slot
/// index order coincide with lexicographic order on flat coordinates.
struct IndexTables {
    n: usize,
    na: usize,
    add: Vec<usize>,
    neg: Vec<usize>,
    act: Vec<usize>,
}

impl IndexTables {
    fn new(module: &GModule) -> Self {
        let g = module.group();
        let a = module.coeff();
        let n = g.order();
        let na = a.order();
        let mut add = vec![0usize; na * na];
        let mut neg = vec![0usize; na];
        for i in 0..na {
            let ti = a.tuple_of(i);
            neg[i] = a.index_of(&a.neg(&ti));
            for j in 0..na {
                add[i * na + j] = a.index_of(&a.add(&ti, &a.tuple_of(j)));
            }
        }
        let mut act = vec![0usize; n * na];
        for x in 0..n {
            for i in 0..na {
                act[x * na + i] = a.index_of(&module.apply(x, &a.tuple_of(i)));
            }
        }
        IndexTables { n, na, add, neg, act }
    }

    #[inline]
    fn plus(&self, i: usize, j: usize) -> usize {
        self.add[i * self.na + j]
    }

    #[inline]
    fn minus(&self, i: usize, j: usize) -> usize {
        self.add[i * self.na + self.neg[j]]
    }

    #[inline]
    fn action(&self, x: usize, i: usize) -> usize {
        self.act[x * self.na + i]
    }
}

/// Value of a 2-slot index table at (x, y), with implicit zeros on identity.
#[inline]
fn slot2(vals: &[usize], n: usize, x: usize, y: usize) -> usize {
    if x == 0 || y == 0 {
        0
    } else {
        vals[(x - 1) * (n - 1) + (y - 1)]
    }
}

fn satisfies_cocycle_tables(
    vals: &[usize],
    tab: &IndexTables,
    group: &crate::group::FiniteGroup,
) -> bool {
    let n = tab.n;
    for x in 1..n {
        for y in 1..n {
            let xy = group.mul(x, y);
            let fxy = vals[(x - 1) * (n - 1) + (y - 1)];
            for z in 1..n {
                let yz = group.mul(y, z);
                let lhs = tab.plus(
                    tab.action(x, slot2(vals, n, y, z)),
                    slot2(vals, n, x, yz),
                );
                let rhs = tab.plus(slot2(vals, n, xy, z), fxy);
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

fn cochain_from_slot_indices(module: &Arc<GModule>, degree: usize, vals: &[usize]) -> Cochain {
    let a = module.coeff();
    let flat: Vec<BigInt> = vals
        .iter()
        .flat_map(|&idx| a.tuple_of(idx).into_iter().map(BigInt::from))
        .collect();
    Cochain::from_flat(module, degree, &flat)
}

/// All normalized 2-cocycles, in row-major coordinate order.
pub fn enumerate_cocycles(
    module: &Arc<GModule>,
    guard: &EnumGuard,
) -> Result<Vec<Cochain>, OracleError> {
    check_guard(&Cochain::flat_moduli(module, 2), guard)?;
    let tab = IndexTables::new(module);
    let slots = (tab.n - 1) * (tab.n - 1);
    let group = Arc::clone(module.group());
    let mut out = Vec::new();
    for vals in Odometer::new(vec![tab.na as i64; slots]) {
        let vals: Vec<usize> = vals.into_iter().map(|v| v as usize).collect();
        if satisfies_cocycle_tables(&vals, &tab, &group) {
            let f = cochain_from_slot_indices(module, 2, &vals);
            debug_assert!(is_cocycle(&f));
            out.push(f);
        }
    }
    Ok(out)
}

/// All distinct coboundaries of normalized 1-cochains, sorted by flat
/// coordinates.
pub fn enumerate_coboundaries(
    module: &Arc<GModule>,
    guard: &EnumGuard,
) -> Result<Vec<Cochain>, OracleError> {
    check_guard(&Cochain::flat_moduli(module, 1), guard)?;
    let tab = IndexTables::new(module);
    let n = tab.n;
    let group = module.group();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for t in Odometer::new(vec![tab.na as i64; n - 1]) {
        let tval = |u: usize| if u == 0 { 0 } else { t[u - 1] as usize };
        let mut d = vec![0usize; (n - 1) * (n - 1)];
        for x in 1..n {
            for y in 1..n {
                let xy = group.mul(x, y);
                d[(x - 1) * (n - 1) + (y - 1)] =
                    tab.plus(tab.minus(tab.action(x, tval(y)), tval(xy)), tval(x));
            }
        }
        seen.insert(d);
    }
    Ok(seen
        .into_iter()
        .map(|vals| {
            let b = cochain_from_slot_indices(module, 2, &vals);
            debug_assert!(is_cocycle(&b));
            b
        })
        .collect())
}

/// Searches for a normalized 1-cochain t with coboundary exactly `f`.
pub fn coboundary_witness(
    f: &Cochain,
    guard: &EnumGuard,
) -> Result<Option<Cochain>, OracleError> {
    for t in enumerate_cochains(f.module(), 1, guard)? {
        if coboundary(&t)? == *f {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// H^2 order and coset representatives by full enumeration: |Z^2| / |B^2|,
/// one representative per coset, chosen first in row-major order.
pub fn brute_force_h2(
    module: &Arc<GModule>,
    guard: &EnumGuard,
) -> Result<(usize, Vec<Cochain>), OracleError> {
    let cocycles = enumerate_cocycles(module, guard)?;
    let coboundaries = enumerate_coboundaries(module, guard)?;
    debug_assert_eq!(cocycles.len() % coboundaries.len(), 0);
    let mut covered: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut reps = Vec::new();
    for z in &cocycles {
        if covered.contains(&z.to_flat()) {
            continue;
        }
        for b in &coboundaries {
            covered.insert(z.add(b).to_flat());
        }
        reps.push(z.clone());
    }
    debug_assert_eq!(reps.len() * coboundaries.len(), cocycles.len());
    Ok((cocycles.len() / coboundaries.len(), reps))
}

/// Exhaustive co-prolongation search: every 2-cocycle f over G whose pullback
/// differs from f0 by an explicitly found coboundary, thinned to one
/// representative per coboundary class over G. Empty exactly when no
/// co-prolongation exists; otherwise the representatives realize the classes
/// reported by the classification.
pub fn brute_force_coprolongations(
    sys: &System,
    guard: &EnumGuard,
) -> Result<Vec<Cochain>, OracleError> {
    // all three enumerations must clear the guard before any work starts
    check_guard(&Cochain::flat_moduli(sys.module(), 2), guard)?;
    check_guard(&Cochain::flat_moduli(sys.module0(), 1), guard)?;
    check_guard(&Cochain::flat_moduli(sys.module(), 1), guard)?;
    let section = sys.extension().canonical_section();
    let f0 = factor_set(sys.extension(), &section, sys.module0())?;
    let mut reps: Vec<Cochain> = Vec::new();
    for f in enumerate_cocycles(sys.module(), guard)? {
        let pulled = pullback_into(sys.gamma(), &f, sys.module0())?;
        let diff = f0.sub(&pulled);
        if coboundary_witness(&diff, guard)?.is_none() {
            continue;
        }
        let mut fresh = true;
        for r in &reps {
            if coboundary_witness(&f.sub(r), guard)?.is_some() {
                fresh = false;
                break;
            }
        }
        if fresh {
            reps.push(f);
        }
    }
    Ok(reps)
}

/// One equivalence class of extensions of the census: the earliest cocycle
/// realizing it, its crossed product, and how many enumerated cocycles landed
/// in the class.
#[derive(Debug, Clone)]
pub struct CensusClass {
    pub cocycle: Cochain,
    pub extension: Extension,
    pub size: usize,
}

/// Searches for an equivalence between two extensions of the same A by the
/// same G directly: every candidate is determined by a normalized map
/// t: G -> A via i1(a) u1(x) -> i2(a + t(x)) u2(x), and each candidate is
/// tested for multiplicativity. No cohomology is consulted.
pub fn explicit_equivalence(e1: &Extension, e2: &Extension) -> Option<GroupHom> {
    assert_eq!(e1.kernel(), e2.kernel(), "census compares like with like");
    assert_eq!(**e1.base(), **e2.base(), "census compares like with like");
    let a = e1.kernel();
    let g = e1.base();
    let na = a.order();
    let n = g.order();
    let u1 = e1.canonical_section();
    let u2 = e2.canonical_section();
    let b1 = e1.middle();
    let decomp: Vec<(usize, Vec<i64>)> = b1
        .elements()
        .map(|b| {
            let x = e1.projection().apply(b);
            let rest = b1.mul(b, b1.inv(u1.value(x)));
            (x, e1.kernel_tuple(rest).expect("section decomposition"))
        })
        .collect();
    for t in Odometer::new(vec![na as i64; n - 1]) {
        let map: Vec<usize> = decomp
            .iter()
            .map(|(x, a_tuple)| {
                let shift = if *x == 0 {
                    a_tuple.clone()
                } else {
                    a.add(a_tuple, &a.tuple_of(t[x - 1] as usize))
                };
                e2.middle().mul(e2.embed(&shift), u2.value(*x))
            })
            .collect();
        if let Ok(hom) = GroupHom::new(e1.middle(), e2.middle(), map) {
            debug_assert!(hom.is_bijective());
            return Some(hom);
        }
    }
    None
}

/// Census of all extensions of A by G with the given action, up to
/// equivalence, by enumerating every cocycle and partitioning the crossed
/// products with `explicit_equivalence`. Classes appear in the order their
/// first member was enumerated.
pub fn extension_census(
    module: &Arc<GModule>,
    guard: &EnumGuard,
) -> Result<Vec<CensusClass>, OracleError> {
    let size = module.coeff().order() * module.group().order();
    if size > 16 {
        return Err(OracleError::GuardExceeded {
            required: BigInt::from(size),
            allowed: 16,
        });
    }
    let mut classes: Vec<CensusClass> = Vec::new();
    for f in enumerate_cocycles(module, guard)? {
        let (ext, _) = crossed_product(module, &f)?;
        match classes
            .iter_mut()
            .find(|c| explicit_equivalence(&c.extension, &ext).is_some())
        {
            Some(c) => c.size += 1,
            None => classes.push(CensusClass {
                cocycle: f,
                extension: ext,
                size: 1,
            }),
        }
    }
    Ok(classes)
}
