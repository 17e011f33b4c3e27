//! Group extensions 0 -> A -> B -> G -> 1 with abelian kernel: sections,
//! factor sets, the conjugation action on the kernel, crossed products,
//! equivalence, centrality, and crossed modules.

use std::sync::Arc;

use thiserror::Error;

use crate::cohomology::{
    first_cocycle_failure, h2, is_cocycle, same_module, Cochain, CohomologyError, GModule,
};
use crate::group::{FiniteGroup, GroupError, GroupHom, HomError};
use crate::zlattice::FiniteAbelianGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("kernel carrier is not the stated abelian group")]
    KernelMismatch,
    #[error("embedding is not injective")]
    NotInjective,
    #[error("projection is not surjective")]
    NotSurjective,
    #[error("image of the embedding differs from the kernel of the projection")]
    NotExact,
    #[error("middle group order {b} is not |A|*|G| = {expected}")]
    WrongOrder { b: usize, expected: usize },
    #[error("embedding and projection act on different middle groups")]
    MiddleMismatch,
    #[error("section value at {x} projects to {found}, not {x}")]
    NotASection { x: usize, found: usize },
    #[error("section does not send identity to identity")]
    SectionNotNormalized,
    #[error("section difference u(x)u(y)u(xy)^-1 lands outside the kernel at ({x},{y})")]
    ValueOutsideKernel { x: usize, y: usize },
    #[error("cochain is not a cocycle, crossed product table would not associate")]
    NotACocycle,
    #[error("group construction failed: {0}")]
    Group(#[from] GroupError),
    #[error("homomorphism construction failed: {0}")]
    Hom(#[from] HomError),
    #[error("cohomology failure: {0}")]
    Cohomology(#[from] CohomologyError),
}

/// An extension of G by the abelian group A, as validated data: the kernel in
/// invariant-factor coordinates, the middle group B, an injective embedding i
/// of A's carrier, and a surjective projection p with Im i = Ker p.
#[derive(Debug, Clone)]
pub struct Extension {
    kernel: FiniteAbelianGroup,
    /// b_of_a[a-index] = i(a) in B; a-indices are the kernel's mixed-radix order.
    b_of_a: Vec<usize>,
    /// a_of_b[b] = Some(a-index) for b in Im i.
    a_of_b: Vec<Option<usize>>,
    b: Arc<FiniteGroup>,
    g: Arc<FiniteGroup>,
    i: GroupHom,
    p: GroupHom,
}

impl Extension {
    /// Validates exactness data. `i` runs from the Cayley carrier of `kernel`
    /// (mixed-radix element order, as produced by its `cayley` method) into B,
    /// and `p` from B onto G.
    pub fn new(kernel: FiniteAbelianGroup, i: GroupHom, p: GroupHom) -> Result<Self, ExtensionError> {
        if !Arc::ptr_eq(i.target(), p.source()) && **i.target() != **p.source() {
            return Err(ExtensionError::MiddleMismatch);
        }
        if **i.source() != kernel.cayley() {
            return Err(ExtensionError::KernelMismatch);
        }
        if !i.is_injective() {
            return Err(ExtensionError::NotInjective);
        }
        if !p.is_surjective() {
            return Err(ExtensionError::NotSurjective);
        }
        let b = Arc::clone(i.target());
        let g = Arc::clone(p.target());
        let expected = kernel.order() * g.order();
        if b.order() != expected {
            return Err(ExtensionError::WrongOrder {
                b: b.order(),
                expected,
            });
        }
        let image: std::collections::BTreeSet<usize> = b
            .elements()
            .filter(|&x| p.apply(x) == 0)
            .collect();
        let emb: std::collections::BTreeSet<usize> =
            (0..kernel.order()).map(|a| i.apply(a)).collect();
        if image != emb {
            return Err(ExtensionError::NotExact);
        }
        let mut b_of_a = Vec::with_capacity(kernel.order());
        let mut a_of_b = vec![None; b.order()];
        for a in 0..kernel.order() {
            let ba = i.apply(a);
            b_of_a.push(ba);
            a_of_b[ba] = Some(a);
        }
        Ok(Extension {
            kernel,
            b_of_a,
            a_of_b,
            b,
            g,
            i,
            p,
        })
    }

    pub fn kernel(&self) -> &FiniteAbelianGroup {
        &self.kernel
    }

    pub fn middle(&self) -> &Arc<FiniteGroup> {
        &self.b
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.g
    }

    pub fn embedding(&self) -> &GroupHom {
        &self.i
    }

    pub fn projection(&self) -> &GroupHom {
        &self.p
    }

    /// i applied to a kernel tuple.
    pub fn embed(&self, a: &[i64]) -> usize {
        self.b_of_a[self.kernel.index_of(a)]
    }

    /// Partial inverse of i: the kernel tuple of a middle element, when it
    /// lies in the embedded kernel.
    pub fn kernel_tuple(&self, b: usize) -> Option<Vec<i64>> {
        self.a_of_b[b].map(|a| self.kernel.tuple_of(a))
    }

    /// The canonical section: for each x the least B-element mapping to x
    /// (identity for x = identity since p(0) = 0 forces membership).
    pub fn canonical_section(&self) -> Section {
        let mut u = vec![usize::MAX; self.g.order()];
        for b in self.b.elements() {
            let x = self.p.apply(b);
            if u[x] == usize::MAX {
                u[x] = b;
            }
        }
        u[0] = 0;
        Section::new(self, u).expect("least preimages form a section")
    }

    /// Every section of the extension, in lexicographic order of the value
    /// vector. There are |A|^(|G|-1) of them; callers bound the size.
    pub fn all_sections(&self) -> Vec<Section> {
        let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); self.g.order()];
        for b in self.b.elements() {
            fibers[self.p.apply(b)].push(b);
        }
        let mut out = Vec::new();
        let mut current = vec![0usize; self.g.order()];
        self.collect_sections(&fibers, 1, &mut current, &mut out);
        out
    }

    fn collect_sections(
        &self,
        fibers: &[Vec<usize>],
        x: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Section>,
    ) {
        if x == self.g.order() {
            out.push(Section::new(self, current.clone()).expect("fiberwise choice"));
            return;
        }
        for &b in &fibers[x] {
            current[x] = b;
            self.collect_sections(fibers, x + 1, current, out);
        }
    }
}

/// A normalized set-theoretic section u: G -> B with p(u(x)) = x, u(0) = 0.
#[derive(Debug, Clone)]
pub struct Section {
    u: Vec<usize>,
}

impl Section {
    pub fn new(parent: &Extension, u: Vec<usize>) -> Result<Self, ExtensionError> {
        if u.len() != parent.g.order() {
            return Err(ExtensionError::NotASection {
                x: u.len(),
                found: parent.g.order(),
            });
        }
        for (x, &b) in u.iter().enumerate() {
            let found = parent.p.apply(b);
            if found != x {
                return Err(ExtensionError::NotASection { x, found });
            }
        }
        if u[0] != 0 {
            return Err(ExtensionError::SectionNotNormalized);
        }
        Ok(Section { u })
    }

    pub fn value(&self, x: usize) -> usize {
        self.u[x]
    }

    pub fn values(&self) -> &[usize] {
        &self.u
    }
}

/// The conjugation action of G on the kernel: phi_x(a) = u(x) i(a) u(x)^-1,
/// independent of the preimage u(x) because A is abelian.
pub fn induced_action(e: &Extension) -> Result<Arc<GModule>, ExtensionError> {
    let k = e.kernel.rank();
    let u = e.canonical_section();
    let mut action = Vec::with_capacity(e.g.order());
    for x in e.g.elements() {
        let ux = u.value(x);
        let mut m = vec![vec![0i64; k]; k];
        for j in 0..k {
            let mut gen = e.kernel.zero();
            gen[j] = 1;
            let conj = e.b.conj(ux, e.embed(&gen));
            let col = e
                .kernel_tuple(conj)
                .ok_or(ExtensionError::NotExact)?;
            for i in 0..k {
                m[i][j] = col[i];
            }
        }
        action.push(m);
    }
    // Well-definedness across preimages: conjugation by i(a') fixes the
    // embedded kernel pointwise since A is abelian. Checked directly.
    for a in 0..e.kernel.order() {
        let ia = e.b_of_a[a];
        for a2 in 0..e.kernel.order() {
            let ia2 = e.b_of_a[a2];
            debug_assert_eq!(e.b.conj(ia, ia2), ia2, "kernel conjugation must be trivial");
        }
    }
    Ok(GModule::new(&e.g, e.kernel.clone(), action)
        .expect("conjugation through a section satisfies the module axioms"))
}

/// The factor set of a section: f(x,y) = i^-1( u(x) u(y) u(xy)^-1 ), a
/// normalized 2-cocycle over the induced action.
pub fn factor_set(e: &Extension, s: &Section, module: &Arc<GModule>) -> Result<Cochain, ExtensionError> {
    let mut f = Cochain::zero(module, 2);
    let n = e.g.order();
    for x in 1..n {
        for y in 1..n {
            let xy = e.g.mul(x, y);
            let prod = e.b.mul(s.value(x), s.value(y));
            let diff = e.b.mul(prod, e.b.inv(s.value(xy)));
            let a = e
                .kernel_tuple(diff)
                .ok_or(ExtensionError::ValueOutsideKernel { x, y })?;
            f.set_value(&[x, y], &a);
        }
    }
    debug_assert!(is_cocycle(&f), "factor sets are cocycles");
    Ok(f)
}

/// Factor set over the extension's own induced action.
pub fn factor_set_auto(e: &Extension, s: &Section) -> Result<(Arc<GModule>, Cochain), ExtensionError> {
    let m = induced_action(e)?;
    let f = factor_set(e, s, &m)?;
    Ok((m, f))
}

/// The crossed product [A, phi, f, G]: carrier indexed by x*|A| + a with
/// multiplication (a,x)(b,y) = (a + phi_x(b) + f(x,y), xy), the embedding
/// a -> (a,0), the projection (a,x) -> x, and the canonical section
/// x -> (0,x).
pub fn crossed_product(
    module: &Arc<GModule>,
    f: &Cochain,
) -> Result<(Extension, Section), ExtensionError> {
    assert!(same_module(f.module(), module), "cochain module mismatch");
    assert_eq!(f.degree(), 2);
    if first_cocycle_failure(f).is_some() {
        return Err(ExtensionError::NotACocycle);
    }
    let g = module.group();
    let a_grp = module.coeff();
    let na = a_grp.order();
    let ng = g.order();
    let n = na * ng;
    let mut table = vec![vec![0usize; n]; n];
    for x in 0..ng {
        for ai in 0..na {
            let a = a_grp.tuple_of(ai);
            let row = x * na + ai;
            for y in 0..ng {
                for bi in 0..na {
                    let b = a_grp.tuple_of(bi);
                    let col = y * na + bi;
                    let mut val = a_grp.add(&a, &module.apply(x, &b));
                    val = a_grp.add(&val, &f.value_at(&[x, y]));
                    table[row][col] = g.mul(x, y) * na + a_grp.index_of(&val);
                }
            }
        }
    }
    let labels: Vec<String> = (0..n)
        .map(|idx| {
            let x = idx / na;
            let t = a_grp.tuple_of(idx % na);
            let ts: Vec<String> = t.iter().map(|v| v.to_string()).collect();
            format!("({},{})", ts.join(" "), g.label(x))
        })
        .collect();
    let b = Arc::new(FiniteGroup::from_table(&table)?.with_labels(labels)?);
    let carrier = Arc::new(a_grp.cayley());
    let i = GroupHom::new(&carrier, &b, (0..na).collect())?;
    let p = GroupHom::new(&b, g, (0..n).map(|idx| idx / na).collect())?;
    let e = Extension::new(a_grp.clone(), i, p)?;
    let section = Section::new(&e, (0..ng).map(|x| x * na).collect())?;
    Ok((e, section))
}

/// Extension equivalence over identical kernel coordinates, base group, and
/// induced action: the classes of the factor sets agree in H^2. On success
/// returns the witness isomorphism B1 -> B2 commuting with both legs.
pub fn are_equivalent(e1: &Extension, e2: &Extension) -> Result<Option<GroupHom>, ExtensionError> {
    if e1.kernel != e2.kernel || *e1.g != *e2.g {
        return Ok(None);
    }
    let m1 = induced_action(e1)?;
    let m2 = induced_action(e2)?;
    if !same_module(&m1, &m2) {
        return Ok(None);
    }
    let s1 = e1.canonical_section();
    let s2 = e2.canonical_section();
    let f1 = factor_set(e1, &s1, &m1)?;
    let f2 = factor_set(e2, &s2, &m1)?;
    let pres = h2(&m1);
    let diff = f1.sub(&f2);
    let class = pres.class_of(&diff)?;
    if !class.is_zero() {
        return Ok(None);
    }
    // With d1 t = f1 - f2, the map i1(a) u1(x) -> i2(a + t(x)) u2(x) is a
    // homomorphism: both sides multiply to a + phi_x(b) + f1(x,y) + t(xy)
    // over xy.
    let t = class.witness.expect("zero class has a witness");
    let mut map = vec![0usize; e1.b.order()];
    for b1 in e1.b.elements() {
        let x = e1.p.apply(b1);
        let rest = e1.b.mul(b1, e1.b.inv(s1.value(x)));
        let a = e1
            .kernel_tuple(rest)
            .ok_or(ExtensionError::NotExact)?;
        let shifted = e1.kernel.add(&a, &t.value_at(&[x]));
        map[b1] = e2.b.mul(e2.embed(&shifted), s2.value(x));
    }
    let beta = GroupHom::new(&e1.b, &e2.b, map)?;
    debug_assert!(beta.is_bijective());
    for a in 0..e1.kernel.order() {
        debug_assert_eq!(beta.apply(e1.b_of_a[a]), e2.b_of_a[a], "kernel leg must commute");
    }
    for b1 in e1.b.elements() {
        debug_assert_eq!(e2.p.apply(beta.apply(b1)), e1.p.apply(b1), "base leg must commute");
    }
    Ok(Some(beta))
}

/// Whether the embedded kernel is central in the middle group; cross-checked
/// against triviality of the induced action.
pub fn is_central(e: &Extension) -> Result<bool, ExtensionError> {
    let center = e.b.center();
    let by_center = e.b_of_a.iter().all(|ba| center.contains(*ba));
    let by_action = induced_action(e)?.is_trivial_action();
    debug_assert_eq!(by_center, by_action, "centrality criteria must agree");
    Ok(by_center)
}

/// A crossed module (B, D, d, theta): d a homomorphism, theta an action of D
/// on B by automorphisms. Verification checks the two Peiffer axioms.
#[derive(Debug, Clone)]
pub struct CrossedModule {
    pub b: Arc<FiniteGroup>,
    pub d_group: Arc<FiniteGroup>,
    pub d: GroupHom,
    /// theta[x] is the automorphism of B attached to the D-element x,
    /// as a permutation table.
    pub theta: Vec<Vec<usize>>,
}

/// Outcome of crossed-module verification: either all axioms hold or the
/// first failing instance is reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrossedModuleReport {
    Valid,
    /// theta_{d(b)} differs from conjugation by b at the given argument.
    C1Fails { b: usize, arg: usize },
    /// d(theta_x(b)) differs from x d(b) x^-1.
    C2Fails { x: usize, b: usize },
    /// theta[x] is not an automorphism of B.
    NotAutomorphism { x: usize },
    /// theta is not a homomorphism from D into Aut B.
    NotAnAction { x: usize, y: usize },
}

pub fn verify_crossed_module(cm: &CrossedModule) -> CrossedModuleReport {
    let nb = cm.b.order();
    let nd = cm.d_group.order();
    assert_eq!(cm.theta.len(), nd, "one automorphism per D-element");
    for x in 0..nd {
        let t = &cm.theta[x];
        let is_auto = t.len() == nb
            && GroupHom::new(&cm.b, &cm.b, t.clone())
                .map(|h| h.is_bijective())
                .unwrap_or(false);
        if !is_auto {
            return CrossedModuleReport::NotAutomorphism { x };
        }
    }
    for x in 0..nd {
        for y in 0..nd {
            let xy = cm.d_group.mul(x, y);
            for b in 0..nb {
                if cm.theta[xy][b] != cm.theta[x][cm.theta[y][b]] {
                    return CrossedModuleReport::NotAnAction { x, y };
                }
            }
        }
    }
    // C1: theta_{d(b)} = conjugation by b.
    for b in 0..nb {
        let db = cm.d.apply(b);
        for arg in 0..nb {
            if cm.theta[db][arg] != cm.b.conj(b, arg) {
                return CrossedModuleReport::C1Fails { b, arg };
            }
        }
    }
    // C2: d(theta_x(b)) = x d(b) x^-1.
    for x in 0..nd {
        for b in 0..nb {
            if cm.d.apply(cm.theta[x][b]) != cm.d_group.conj(x, cm.d.apply(b)) {
                return CrossedModuleReport::C2Fails { x, b };
            }
        }
    }
    CrossedModuleReport::Valid
}
