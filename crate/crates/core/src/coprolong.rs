//! Co-prolongation of group extensions along a surjection of base groups:
//! systems, kernel splittings, the obstruction class in Coker of the induced
//! H^2 map, witness construction, torsor classification, and the induced
//! crossed module.
//!
//! Given E0: 0 -> A -> B0 -> G0 -> 1 and gamma: G0 ->> G, a co-prolongation
//! is an extension E of A by G together with beta: B0 -> B fixing A pointwise
//! with p beta = gamma p0. Existence is equivalent to the vanishing of the
//! class of f0 in Coker(induced map), and the classes form a torsor under
//! the kernel of the induced map.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::cohomology::{
    h2, induced_map_h2, pullback_into, Cochain, CohomologyError, GModule, H2Map, H2Presentation,
};
use crate::extension::{
    crossed_product, factor_set, induced_action, CrossedModule, CrossedModuleReport, Extension,
    ExtensionError, Section,
};
use crate::group::{FiniteGroup, GroupHom, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoprolongError {
    #[error("gamma not surjective")]
    GammaNotSurjective,
    #[error("gamma's source is not the base group of the extension")]
    BaseMismatch,
    #[error("kernel action does not factor through gamma: element {element} of Ker gamma acts nontrivially")]
    ActionDoesNotFactor { element: usize },
    #[error("the morphism does not restrict to a bijection Ker beta -> Ker gamma")]
    RestrictionNotBijective,
    #[error("subgroup is not normal: conjugate of {element} escapes")]
    NotNormal { element: usize },
    #[error("kernel and splitting image do not decompose the preimage as a direct product (witness {element})")]
    NotDirectProduct { element: usize },
    #[error("v is not a splitting of gamma: gamma(v({x})) = {found}")]
    NotSplit { x: usize, found: usize },
    #[error("witness cocycle does not pull back to the class of f0")]
    WitnessInvalid,
    #[error("precondition failed: {0}")]
    PreconditionFailed(&'static str),
    #[error("theta is ill-defined: preimages {b1} and {b2} of {g} induce different automorphisms")]
    ThetaIllDefined { g: usize, b1: usize, b2: usize },
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// A validated co-prolongation problem: the extension E0 of A by G0, the
/// surjection gamma, the conjugation action phi0 over G0, and the unique
/// action phi over G through which phi0 factors.
#[derive(Debug, Clone)]
pub struct System {
    e0: Extension,
    gamma: GroupHom,
    module: Arc<GModule>,
    module0: Arc<GModule>,
}

/// Checks gamma and derives both actions. The action of G is forced: phi0
/// must be trivial on Ker gamma, and then phi(x) = phi0(x0) for any preimage
/// x0, verified over all of them.
pub fn validate_system(e0: Extension, gamma: GroupHom) -> Result<System, CoprolongError> {
    if !gamma.is_surjective() {
        return Err(CoprolongError::GammaNotSurjective);
    }
    if !Arc::ptr_eq(gamma.source(), e0.base()) && **gamma.source() != **e0.base() {
        return Err(CoprolongError::BaseMismatch);
    }
    let module0 = induced_action(&e0)?;
    let k = e0.kernel().rank();
    let identity: Vec<Vec<i64>> = (0..k)
        .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
        .collect();
    for x0 in gamma.source().elements() {
        if gamma.apply(x0) == 0 && *module0.matrix(x0) != identity {
            return Err(CoprolongError::ActionDoesNotFactor { element: x0 });
        }
    }
    let g = gamma.target();
    let mut action = vec![identity; g.order()];
    for x in g.elements() {
        action[x] = module0.matrix(gamma.canonical_preimage(x)).clone();
    }
    for x0 in gamma.source().elements() {
        if *module0.matrix(x0) != action[gamma.apply(x0)] {
            return Err(CoprolongError::ActionDoesNotFactor { element: x0 });
        }
    }
    let module = GModule::new(g, e0.kernel().clone(), action)
        .expect("an action factoring through a surjection is an action");
    Ok(System {
        e0,
        gamma,
        module,
        module0,
    })
}

impl System {
    pub fn extension(&self) -> &Extension {
        &self.e0
    }

    pub fn gamma(&self) -> &GroupHom {
        &self.gamma
    }

    /// The action of G on A.
    pub fn module(&self) -> &Arc<GModule> {
        &self.module
    }

    /// The conjugation action of G0 on A.
    pub fn module0(&self) -> &Arc<GModule> {
        &self.module0
    }
}

/// Whether beta: B0 -> B is a morphism of extensions over gamma fixing the
/// kernel pointwise, plus its surjectivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismReport {
    pub kernel_fixed: bool,
    pub base_commutes: bool,
    pub surjective: bool,
}

impl MorphismReport {
    pub fn commutes(&self) -> bool {
        self.kernel_fixed && self.base_commutes
    }
}

pub fn check_morphism(
    e0: &Extension,
    e: &Extension,
    beta: &GroupHom,
    gamma: &GroupHom,
) -> MorphismReport {
    let kernel_fixed = e0.kernel() == e.kernel()
        && (0..e0.kernel().order())
            .all(|a| beta.apply(e0.embed(&e0.kernel().tuple_of(a))) == e.embed(&e0.kernel().tuple_of(a)));
    let base_commutes = e0
        .middle()
        .elements()
        .all(|b0| e.projection().apply(beta.apply(b0)) == gamma.apply(e0.projection().apply(b0)));
    MorphismReport {
        kernel_fixed,
        base_commutes,
        surjective: beta.is_surjective(),
    }
}

/// A monomorphism j: Ker gamma -> B0 with p0 j = id, presented on the Cayley
/// carrier of Ker gamma.
#[derive(Debug, Clone)]
pub struct KernelSplitting {
    kernel: Subgroup,
    carrier: Arc<FiniteGroup>,
    inclusion: GroupHom,
    j: GroupHom,
}

impl KernelSplitting {
    /// Builds a splitting from the images of the sorted Ker gamma members.
    pub fn from_images(
        e0: &Extension,
        gamma: &GroupHom,
        images: Vec<usize>,
    ) -> Result<Self, CoprolongError> {
        let kernel = gamma.kernel();
        let (carrier, inclusion) = kernel.carrier();
        let j = GroupHom::new(&carrier, e0.middle(), images)
            .map_err(|_| CoprolongError::PreconditionFailed("j is not a homomorphism"))?;
        for c in carrier.elements() {
            if e0.projection().apply(j.apply(c)) != inclusion.apply(c) {
                return Err(CoprolongError::PreconditionFailed("p0 j != id on Ker gamma"));
            }
        }
        Ok(KernelSplitting {
            kernel,
            carrier,
            inclusion,
            j,
        })
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn carrier(&self) -> &Arc<FiniteGroup> {
        &self.carrier
    }

    /// Carrier element -> G0 element.
    pub fn inclusion(&self) -> &GroupHom {
        &self.inclusion
    }

    /// Carrier element -> B0 element.
    pub fn hom(&self) -> &GroupHom {
        &self.j
    }

    /// j applied to a G0 element of Ker gamma.
    pub fn apply_to_g0(&self, c_in_g0: usize) -> Option<usize> {
        self.carrier
            .elements()
            .find(|&c| self.inclusion.apply(c) == c_in_g0)
            .map(|c| self.j.apply(c))
    }

    pub fn image(&self) -> Vec<usize> {
        self.j.image_elements()
    }
}

/// Recovers the splitting of Prop. 2.3 from a co-prolongation morphism: p0
/// restricts to an isomorphism Ker beta -> Ker gamma, and j is its inverse.
pub fn kernel_splitting(
    e0: &Extension,
    e: &Extension,
    beta: &GroupHom,
    gamma: &GroupHom,
) -> Result<KernelSplitting, CoprolongError> {
    let report = check_morphism(e0, e, beta, gamma);
    if !report.commutes() {
        return Err(CoprolongError::PreconditionFailed(
            "beta is not a morphism of extensions over gamma",
        ));
    }
    let ker_beta: Vec<usize> = e0
        .middle()
        .elements()
        .filter(|&b| beta.apply(b) == 0)
        .collect();
    let kernel = gamma.kernel();
    if ker_beta.len() != kernel.members().len() {
        return Err(CoprolongError::RestrictionNotBijective);
    }
    // p0 restricted to Ker beta must hit each Ker gamma member exactly once.
    let mut image_of: Vec<Option<usize>> = vec![None; gamma.source().order()];
    for &b in &ker_beta {
        let c = e0.projection().apply(b);
        if !kernel.contains(c) || image_of[c].is_some() {
            return Err(CoprolongError::RestrictionNotBijective);
        }
        image_of[c] = Some(b);
    }
    let (carrier, inclusion) = kernel.carrier();
    let images: Vec<usize> = carrier
        .elements()
        .map(|c| image_of[inclusion.apply(c)].expect("restriction is onto"))
        .collect();
    let j = GroupHom::new(&carrier, e0.middle(), images)
        .expect("inverse of a restriction isomorphism is a homomorphism");
    Ok(KernelSplitting {
        kernel,
        carrier,
        inclusion,
        j,
    })
}

/// The decomposition p0^{-1}(Ker gamma) = A x j(Ker gamma) with the maps of
/// the commuting ladder from the direct product: i'(a) = (a,0),
/// p'(a,c) = c, nu the inclusion of Ker gamma, epsilon(a,c) = i0(a) j(c).
#[derive(Debug, Clone)]
pub struct PreimageDecomposition {
    /// Cayley table of A x Ker gamma; index = a_index * |Ker| + c_index.
    pub product: Arc<FiniteGroup>,
    /// product -> B0, lands exactly on p0^{-1}(Ker gamma).
    pub epsilon: GroupHom,
    /// A carrier -> product.
    pub i_prime: GroupHom,
    /// product -> Ker gamma carrier.
    pub p_prime: GroupHom,
    /// Ker gamma carrier -> G0.
    pub nu: GroupHom,
    /// Sorted members of p0^{-1}(Ker gamma) in B0.
    pub preimage: Vec<usize>,
}

pub fn preimage_decomposition(
    sys: &System,
    split: &KernelSplitting,
) -> Result<PreimageDecomposition, CoprolongError> {
    let e0 = &sys.e0;
    let b0 = e0.middle();
    // Lemma hypothesis: Im j normal in B0.
    let jimage: BTreeSet<usize> = split.image().into_iter().collect();
    for &c in &jimage {
        for b in b0.elements() {
            if !jimage.contains(&b0.conj(b, c)) {
                return Err(CoprolongError::NotNormal { element: c });
            }
        }
    }
    // A and j(Ker gamma) intersect trivially.
    for &jc in &jimage {
        if jc != 0 && e0.kernel_tuple(jc).is_some() {
            return Err(CoprolongError::NotDirectProduct { element: jc });
        }
    }
    let preimage: Vec<usize> = b0
        .elements()
        .filter(|&b| split.kernel().contains(e0.projection().apply(b)))
        .collect();
    let na = e0.kernel().order();
    let nk = split.carrier().order();
    let product = Arc::new(crate::catalog::direct_product(
        &e0.kernel().cayley(),
        split.carrier().as_ref(),
    ));
    let eps_map: Vec<usize> = (0..na * nk)
        .map(|idx| {
            let a = idx / nk;
            let c = idx % nk;
            b0.mul(e0.embed(&e0.kernel().tuple_of(a)), split.hom().apply(c))
        })
        .collect();
    // epsilon is a homomorphism because A centralizes j(Ker gamma): their
    // commutator lies in the trivial intersection.
    let epsilon = GroupHom::new(&product, b0, eps_map)
        .map_err(|_| CoprolongError::NotDirectProduct { element: 0 })?;
    if !epsilon.is_injective() {
        return Err(CoprolongError::NotDirectProduct { element: 0 });
    }
    let eps_image: BTreeSet<usize> = product.elements().map(|x| epsilon.apply(x)).collect();
    if let Some(&bad) = preimage.iter().find(|b| !eps_image.contains(b)) {
        return Err(CoprolongError::NotDirectProduct { element: bad });
    }
    let a_carrier = Arc::new(e0.kernel().cayley());
    let i_prime = GroupHom::new(&a_carrier, &product, (0..na).map(|a| a * nk).collect())
        .expect("first-factor inclusion");
    let p_prime = GroupHom::new(&product, split.carrier(), (0..na * nk).map(|i| i % nk).collect())
        .expect("second-factor projection");
    let nu = split.inclusion().clone();
    // Ladder commutativity: epsilon i' = i0 and p0 epsilon = nu p'.
    for a in 0..na {
        debug_assert_eq!(
            epsilon.apply(i_prime.apply(a)),
            e0.embed(&e0.kernel().tuple_of(a))
        );
    }
    for x in product.elements() {
        debug_assert_eq!(
            e0.projection().apply(epsilon.apply(x)),
            nu.apply(p_prime.apply(x))
        );
    }
    Ok(PreimageDecomposition {
        product,
        epsilon,
        i_prime,
        p_prime,
        nu,
        preimage,
    })
}

/// The obstruction of a system: the class of f0 in Coker of the induced map,
/// with a witness cocycle over G when it vanishes.
#[derive(Debug, Clone)]
pub struct ObstructionResult {
    /// The induced map on H^2 (pullback direction), with kernel and cokernel.
    pub h2map: H2Map,
    /// Coordinates of [f0] in H^2(G0, A).
    pub f0_class: Vec<BigInt>,
    /// Coordinates of the obstruction in Coker.
    pub coker_coords: Vec<BigInt>,
    pub vanishes: bool,
    /// A cocycle f over G with [pullback f] = [f0]; present iff vanishing.
    pub witness: Option<Cochain>,
}

impl ObstructionResult {
    pub fn source_h2(&self) -> &Arc<H2Presentation> {
        self.h2map.source()
    }

    pub fn target_h2(&self) -> &Arc<H2Presentation> {
        self.h2map.target()
    }
}

pub fn obstruction(sys: &System) -> Result<ObstructionResult, CoprolongError> {
    let p_src = Arc::new(h2(&sys.module));
    let p_tgt = Arc::new(h2(&sys.module0));
    let h2map = induced_map_h2(&sys.gamma, &p_src, &p_tgt)?;
    obstruction_from_map(sys, h2map)
}

/// Same computation with the induced map supplied, so a sweep over the many
/// extension classes of one (module, module0, gamma) family can share the
/// presentations instead of recomputing them per class.
pub fn obstruction_from_map(
    sys: &System,
    h2map: H2Map,
) -> Result<ObstructionResult, CoprolongError> {
    debug_assert!(
        Arc::ptr_eq(h2map.source().module(), &sys.module)
            || **h2map.source().module() == *sys.module
    );
    debug_assert!(
        Arc::ptr_eq(h2map.target().module(), &sys.module0)
            || **h2map.target().module() == *sys.module0
    );
    let section = sys.e0.canonical_section();
    let f0 = factor_set(&sys.e0, &section, &sys.module0)?;
    let p_src = Arc::clone(h2map.source());
    let p_tgt = Arc::clone(h2map.target());
    let f0_class = p_tgt.class_of(&f0)?.coords;
    let coker_coords = h2map.cokernel_coords(&f0_class);
    let vanishes = coker_coords.iter().all(|c| c.is_zero());
    let witness = if vanishes {
        let coords = h2map
            .preimage(&f0_class)
            .expect("vanishing in Coker means f0_class is in the image");
        let f = p_src.cochain_from_coords(&coords);
        let pulled = pullback_into(&sys.gamma, &f, &sys.module0)?;
        let check = p_tgt.class_of(&pulled)?;
        if check.coords != f0_class {
            return Err(CoprolongError::WitnessInvalid);
        }
        Some(f)
    } else {
        None
    };
    Ok(ObstructionResult {
        h2map,
        f0_class,
        coker_coords,
        vanishes,
        witness,
    })
}

/// Builds the co-prolongation attached to a witness cocycle: the crossed
/// product E = [A, phi, f, G] and the morphism beta sending i0(a) u'(x0) to
/// (a, gamma x0), where u'(x0) = i0(-t(x0)) u(x0) and d1 t = f0 - pullback f.
pub fn construct_coprolongation(
    sys: &System,
    witness: &Cochain,
) -> Result<(Extension, GroupHom), CoprolongError> {
    construct_coprolongation_with(sys, witness, &h2(&sys.module0))
}

/// Variant taking the target presentation, for callers that already hold it.
pub fn construct_coprolongation_with(
    sys: &System,
    witness: &Cochain,
    p_tgt: &H2Presentation,
) -> Result<(Extension, GroupHom), CoprolongError> {
    let section = sys.e0.canonical_section();
    let f0 = factor_set(&sys.e0, &section, &sys.module0)?;
    let pulled = pullback_into(&sys.gamma, witness, &sys.module0)?;
    let diff = f0.sub(&pulled);
    let class = p_tgt.class_of(&diff)?;
    if !class.is_zero() {
        return Err(CoprolongError::WitnessInvalid);
    }
    let t = class.witness.expect("zero class has a coboundary witness");
    let (e, _) = crossed_product(&sys.module, witness)?;
    let b0 = sys.e0.middle();
    let a = sys.e0.kernel();
    let na = a.order();
    let mut map = vec![0usize; b0.order()];
    for b in b0.elements() {
        let x0 = sys.e0.projection().apply(b);
        // u'(x0) = i0(-t(x0)) u(x0); then b = i0(a_part) u'(x0).
        let u_prime = b0.mul(
            sys.e0.embed(&a.neg(&t.value_at(&[x0]))),
            section.value(x0),
        );
        let rest = b0.mul(b, b0.inv(u_prime));
        let tuple = sys
            .e0
            .kernel_tuple(rest)
            .expect("difference against a section preimage lies in the kernel");
        map[b] = sys.gamma.apply(x0) * na + a.index_of(&tuple);
    }
    let beta = GroupHom::new(b0, e.middle(), map)
        .expect("the adjusted-section map is a homomorphism");
    let report = check_morphism(&sys.e0, &e, &beta, &sys.gamma);
    debug_assert!(report.commutes() && report.surjective);
    Ok((e, beta))
}

/// One equivalence class of co-prolongations: its H^2(G,A) coordinates, a
/// representative cocycle, and the crossed-product extension.
#[derive(Debug, Clone)]
pub struct CoprolongationClass {
    pub coords: Vec<BigInt>,
    pub cocycle: Cochain,
    pub extension: Extension,
    pub section: Section,
}

/// The classification of a system: empty with `vanishes: false` when no
/// co-prolongation exists, otherwise exactly |Ker| classes, the orbit of the
/// witness class under the kernel of the induced map, sorted by coordinates.
#[derive(Debug, Clone)]
pub struct CoprolongationClassList {
    pub vanishes: bool,
    pub obstruction: ObstructionResult,
    /// H^2(G,A) coordinates of generators of Ker, paired with their orders.
    pub kernel_generators: Vec<(Vec<BigInt>, BigInt)>,
    pub classes: Vec<CoprolongationClass>,
}

pub fn classify(sys: &System) -> Result<CoprolongationClassList, CoprolongError> {
    classify_from(sys, obstruction(sys)?)
}

/// Classification from an already-computed obstruction.
pub fn classify_from(
    sys: &System,
    obs: ObstructionResult,
) -> Result<CoprolongationClassList, CoprolongError> {
    let kernel_generators: Vec<(Vec<BigInt>, BigInt)> = {
        let k = obs.h2map.kernel();
        let rank = k.factors().len();
        (0..rank)
            .map(|i| {
                let mut unit = vec![BigInt::zero(); rank];
                unit[i] = BigInt::from(1);
                let ambient = k.lift(&unit);
                let coords: Vec<BigInt> = ambient
                    .iter()
                    .zip(obs.source_h2().factors())
                    .map(|(v, f)| num_integer::Integer::mod_floor(v, f))
                    .collect();
                (coords, k.factors()[i].clone())
            })
            .collect()
    };
    if !obs.vanishes {
        return Ok(CoprolongationClassList {
            vanishes: false,
            obstruction: obs,
            kernel_generators,
            classes: Vec::new(),
        });
    }
    let witness = obs.witness.as_ref().expect("vanishing has a witness");
    let p_src = Arc::clone(obs.source_h2());
    let f_coords = p_src.class_of(witness)?.coords;
    let mut coord_set: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for h in obs.h2map.kernel_elements() {
        coord_set.insert(p_src.add_coords(&f_coords, &h));
    }
    let mut classes = Vec::with_capacity(coord_set.len());
    for coords in coord_set {
        let cocycle = p_src.cochain_from_coords(&coords);
        // every class in the orbit pulls back to [f0]
        debug_assert_eq!(obs.h2map.apply(&coords), obs.f0_class);
        let (extension, section) = crossed_product(&sys.module, &cocycle)?;
        classes.push(CoprolongationClass {
            coords,
            cocycle,
            extension,
            section,
        });
    }
    Ok(CoprolongationClassList {
        vanishes: true,
        obstruction: obs,
        kernel_generators,
        classes,
    })
}

/// Corollary witness for split gamma: given a homomorphic splitting v of
/// gamma with normal image and a normal kernel splitting j, the cocycle
/// f(x,y) = f0(v(x), v(y)) certifies vanishing directly.
pub fn split_case_construct(
    sys: &System,
    v: &GroupHom,
    split: &KernelSplitting,
) -> Result<Cochain, CoprolongError> {
    if **v.source() != **sys.gamma.target() || **v.target() != **sys.gamma.source() {
        return Err(CoprolongError::BaseMismatch);
    }
    for x in v.source().elements() {
        let found = sys.gamma.apply(v.apply(x));
        if found != x {
            return Err(CoprolongError::NotSplit { x, found });
        }
    }
    let g0 = sys.gamma.source();
    let vimage: BTreeSet<usize> = v.image_elements().into_iter().collect();
    for &m in &vimage {
        for b in g0.elements() {
            if !vimage.contains(&g0.conj(b, m)) {
                return Err(CoprolongError::NotNormal { element: m });
            }
        }
    }
    let jimage: BTreeSet<usize> = split.image().into_iter().collect();
    for &m in &jimage {
        for b in sys.e0.middle().elements() {
            if !jimage.contains(&sys.e0.middle().conj(b, m)) {
                return Err(CoprolongError::NotNormal { element: m });
            }
        }
    }
    // u_x: least preimage of v(x) under p0 (so u_1 = 0), f = the factor set
    // of these representatives, which lands in A because v is homomorphic.
    let b0 = sys.e0.middle();
    let u_x: Vec<usize> = v
        .source()
        .elements()
        .map(|x| sys.e0.projection().preimages(v.apply(x))[0])
        .collect();
    let g = sys.gamma.target();
    let mut f = Cochain::zero(&sys.module, 2);
    for x in 1..g.order() {
        for y in 1..g.order() {
            let xy = g.mul(x, y);
            let val = b0.mul(b0.mul(u_x[x], u_x[y]), b0.inv(u_x[xy]));
            let tuple = sys
                .e0
                .kernel_tuple(val)
                .ok_or(CoprolongError::PreconditionFailed(
                    "u_x u_y - u_xy escapes the kernel although v is a splitting",
                ))?;
            f.set_value(&[x, y], &tuple);
        }
    }
    // certify: f is a cocycle over phi and pulls back to the class of f0
    let pulled = pullback_into(&sys.gamma, &f, &sys.module0)?;
    let p_tgt = h2(&sys.module0);
    let section = sys.e0.canonical_section();
    let f0 = factor_set(&sys.e0, &section, &sys.module0)?;
    if p_tgt.class_of(&pulled)?.coords != p_tgt.class_of(&f0)?.coords {
        return Err(CoprolongError::WitnessInvalid);
    }
    Ok(f)
}

/// Pointwise verification that the factor set of the representatives
/// u(x0) = j(c) u_x decomposes as
/// f0(x0,y0) = jc + (u_x jd -u_x) + (u_x + u_y - u_xy) - jc0 with
/// c0 = c + (v(x) d -v(x)) + s(x,y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentativesReport {
    pub pairs_checked: usize,
    pub first_failure: Option<(usize, usize)>,
}

impl RepresentativesReport {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// `v` is any set-theoretic section of gamma (v[identity] = identity, not
/// necessarily a homomorphism), with factor set s(x,y) = v(x) v(y) v(xy)^-1
/// in Ker gamma.
pub fn representatives_check(
    sys: &System,
    split: &KernelSplitting,
    v: &[usize],
) -> Result<RepresentativesReport, CoprolongError> {
    let g0 = sys.gamma.source();
    let g = sys.gamma.target();
    if v.len() != g.order() || v[0] != 0 {
        return Err(CoprolongError::PreconditionFailed("v is not a normalized section"));
    }
    for x in g.elements() {
        if sys.gamma.apply(v[x]) != x {
            return Err(CoprolongError::PreconditionFailed("v is not a section of gamma"));
        }
    }
    let b0 = sys.e0.middle();
    // u_x: least p0-preimage of v(x); u_1 = 0 because v[0] = 0.
    let u_x: Vec<usize> = g
        .elements()
        .map(|x| sys.e0.projection().preimages(v[x])[0])
        .collect();
    // decompose x0 = c v(x): c = x0 v(x)^-1 lies in Ker gamma
    let j_of = |c_in_g0: usize| -> usize {
        split
            .apply_to_g0(c_in_g0)
            .expect("decomposition lands in Ker gamma")
    };
    // the section u(x0) = j(c) u_x
    let u_values: Vec<usize> = g0
        .elements()
        .map(|x0| {
            let x = sys.gamma.apply(x0);
            let c = g0.mul(x0, g0.inv(v[x]));
            b0.mul(j_of(c), u_x[x])
        })
        .collect();
    let section = Section::new(&sys.e0, u_values)?;
    let f0 = factor_set(&sys.e0, &section, &sys.module0)?;
    let mut pairs_checked = 0usize;
    let mut first_failure = None;
    'outer: for x0 in g0.elements() {
        for y0 in g0.elements() {
            let x = sys.gamma.apply(x0);
            let y = sys.gamma.apply(y0);
            let c = g0.mul(x0, g0.inv(v[x]));
            let d = g0.mul(y0, g0.inv(v[y]));
            let xy = g.mul(x, y);
            let s = g0.mul(g0.mul(v[x], v[y]), g0.inv(v[xy]));
            let c0 = g0.mul(g0.mul(c, g0.conj(v[x], d)), s);
            // right side of the decomposition, assembled in B0
            let inner = b0.mul(b0.mul(u_x[x], u_x[y]), b0.inv(u_x[xy]));
            let rhs = b0.mul(
                b0.mul(b0.mul(j_of(c), b0.conj(u_x[x], j_of(d))), inner),
                b0.inv(j_of(c0)),
            );
            let lhs = sys.e0.embed(&f0.value_at(&[x0, y0]));
            pairs_checked += 1;
            if lhs != rhs {
                first_failure = Some((x0, y0));
                break 'outer;
            }
        }
    }
    Ok(RepresentativesReport {
        pairs_checked,
        first_failure,
    })
}

/// The crossed module of Prop. 2.6(2): carrier A x Ker gamma, base G0,
/// d = nu p', theta_g = epsilon^-1 (conjugation by a p0-preimage of g)
/// epsilon. Well-definedness across preimages is checked, not assumed.
pub fn induced_crossed_module(
    sys: &System,
    split: &KernelSplitting,
) -> Result<(CrossedModule, CrossedModuleReport), CoprolongError> {
    let dec = preimage_decomposition(sys, split)?;
    let g0 = sys.gamma.source();
    let b0 = sys.e0.middle();
    let n_prod = dec.product.order();
    // epsilon^-1 as a lookup over B0
    let mut eps_inv: Vec<Option<usize>> = vec![None; b0.order()];
    for x in dec.product.elements() {
        eps_inv[dec.epsilon.apply(x)] = Some(x);
    }
    let mut theta: Vec<Vec<usize>> = Vec::with_capacity(g0.order());
    for ge in g0.elements() {
        let preimages = sys.e0.projection().preimages(ge);
        let automorphism_for = |b_pre: usize| -> Result<Vec<usize>, CoprolongError> {
            (0..n_prod)
                .map(|x| {
                    let conj = b0.conj(b_pre, dec.epsilon.apply(x));
                    eps_inv[conj].ok_or(CoprolongError::NotNormal { element: conj })
                })
                .collect()
        };
        let first = automorphism_for(preimages[0])?;
        for &other in &preimages[1..] {
            if automorphism_for(other)? != first {
                return Err(CoprolongError::ThetaIllDefined {
                    g: ge,
                    b1: preimages[0],
                    b2: other,
                });
            }
        }
        theta.push(first);
    }
    let d = dec.p_prime.then(&dec.nu);
    let cm = CrossedModule {
        b: Arc::clone(&dec.product),
        d_group: Arc::clone(g0),
        d,
        theta,
    };
    let report = crate::extension::verify_crossed_module(&cm);
    Ok((cm, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::zlattice::FiniteAbelianGroup;

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(catalog::cyclic(n))
    }

    fn mod4_onto_mod2() -> GroupHom {
        GroupHom::new(&z(4), &z(2), vec![0, 1, 0, 1]).unwrap()
    }

    /// split E0 = A x G0 for A = Z/2, G0 = Z/4.
    fn split_system() -> System {
        let g0 = z(4);
        let m0 = GModule::trivial(&g0, FiniteAbelianGroup::new(vec![2]).unwrap());
        let (e0, _) = crossed_product(&m0, &Cochain::zero(&m0, 2)).unwrap();
        validate_system(e0, mod4_onto_mod2()).unwrap()
    }

    /// E0 = 0 -> Z/2 -> Z/8 -> Z/4 -> 0 (the nonsplit carry class).
    fn z8_system() -> System {
        let g0 = z(4);
        let m0 = GModule::trivial(&g0, FiniteAbelianGroup::new(vec![2]).unwrap());
        let pres = h2(&m0);
        let f0 = pres.generators()[0].clone();
        let (e0, _) = crossed_product(&m0, &f0).unwrap();
        assert_eq!(catalog::structure_tag(e0.middle()), "Z8");
        validate_system(e0, mod4_onto_mod2()).unwrap()
    }

    /// E0 = Z/3 x| Z/4 where Z/4 acts on Z/3 by inversion through gamma.
    fn semidirect_system() -> System {
        let g0 = z(4);
        let action: Vec<Vec<Vec<i64>>> = (0..4)
            .map(|x| if x % 2 == 1 { vec![vec![2]] } else { vec![vec![1]] })
            .collect();
        let m0 = GModule::new(&g0, FiniteAbelianGroup::new(vec![3]).unwrap(), action).unwrap();
        let (e0, _) = crossed_product(&m0, &Cochain::zero(&m0, 2)).unwrap();
        validate_system(e0, mod4_onto_mod2()).unwrap()
    }

    #[test]
    fn validate_system_accepts_and_derives_actions() {
        let sys = split_system();
        assert!(sys.module().is_trivial_action());
        let sys = semidirect_system();
        assert_eq!(sys.module().matrix(1), &vec![vec![2]], "phi(1) is inversion");
        assert_eq!(sys.module0().matrix(2), &vec![vec![1]], "phi0 trivial on Ker gamma");
    }

    #[test]
    fn validate_system_rejects_non_factoring_action() {
        // E0 = 0 -> Z/3 -> S3 -> Z/2 -> 0, gamma: Z/2 ->> 1: the inversion
        // action is nontrivial on Ker gamma = Z/2.
        let g0 = z(2);
        let m0 = GModule::new(
            &g0,
            FiniteAbelianGroup::new(vec![3]).unwrap(),
            vec![vec![vec![1]], vec![vec![2]]],
        )
        .unwrap();
        let (e0, _) = crossed_product(&m0, &Cochain::zero(&m0, 2)).unwrap();
        let gamma = GroupHom::new(&g0, &z(1), vec![0, 0]).unwrap();
        assert!(matches!(
            validate_system(e0, gamma),
            Err(CoprolongError::ActionDoesNotFactor { element: 1 })
        ));
    }

    #[test]
    fn obstruction_vanishes_for_split_system() {
        let sys = split_system();
        let obs = obstruction(&sys).unwrap();
        assert!(obs.vanishes);
        assert!(obs.f0_class.iter().all(|c| c.is_zero()));
        assert_eq!(obs.h2map.cokernel_order(), BigInt::from(2));
        assert_eq!(obs.h2map.kernel_order(), BigInt::from(2));
        let w = obs.witness.unwrap();
        assert!(w.is_zero(), "deterministic witness for the zero class is zero");
    }

    #[test]
    fn obstruction_blocks_z8_over_gamma() {
        let sys = z8_system();
        let obs = obstruction(&sys).unwrap();
        assert!(!obs.vanishes);
        assert!(obs.witness.is_none());
        assert_eq!(obs.coker_coords, vec![BigInt::from(1)]);
        let classes = classify(&sys).unwrap();
        assert!(!classes.vanishes);
        assert!(classes.classes.is_empty());
    }

    #[test]
    fn classify_split_system_yields_two_classes() {
        let sys = split_system();
        let list = classify(&sys).unwrap();
        assert!(list.vanishes);
        assert_eq!(list.classes.len(), 2);
        let tags: Vec<String> = list
            .classes
            .iter()
            .map(|c| catalog::structure_tag(c.extension.middle()))
            .collect();
        assert_eq!(tags, vec!["Z2xZ2", "Z4"]);
        // coordinates are pairwise distinct
        assert_ne!(list.classes[0].coords, list.classes[1].coords);
    }

    #[test]
    fn classify_identity_gamma_yields_one_class() {
        let g0 = z(4);
        let m0 = GModule::trivial(&g0, FiniteAbelianGroup::new(vec![2]).unwrap());
        let pres = h2(&m0);
        let f0 = pres.generators()[0].clone();
        let (e0, _) = crossed_product(&m0, &f0).unwrap();
        let sys = validate_system(e0, GroupHom::identity(&g0)).unwrap();
        let list = classify(&sys).unwrap();
        assert!(list.vanishes);
        assert_eq!(list.classes.len(), 1);
        assert_eq!(catalog::structure_tag(list.classes[0].extension.middle()), "Z8");
    }

    #[test]
    fn construct_coprolongation_passes_morphism_check() {
        let sys = split_system();
        let obs = obstruction(&sys).unwrap();
        let w = obs.witness.unwrap();
        let (e, beta) = construct_coprolongation(&sys, &w).unwrap();
        let report = check_morphism(sys.extension(), &e, &beta, sys.gamma());
        assert!(report.commutes());
        assert!(report.surjective);
        assert_eq!(catalog::structure_tag(e.middle()), "Z2xZ2");
        // round trip of Prop 2.3: the splitting recovered from beta
        let split = kernel_splitting(sys.extension(), &e, &beta, sys.gamma()).unwrap();
        let ker_beta: Vec<usize> = sys
            .extension()
            .middle()
            .elements()
            .filter(|&b| beta.apply(b) == 0)
            .collect();
        assert_eq!(split.image(), ker_beta);
    }

    #[test]
    fn construct_with_nonzero_witness_gives_z4() {
        let sys = split_system();
        let list = classify(&sys).unwrap();
        let nonzero = list
            .classes
            .iter()
            .find(|c| c.coords.iter().any(|v| !v.is_zero()))
            .unwrap();
        let (e, beta) = construct_coprolongation(&sys, &nonzero.cocycle).unwrap();
        assert_eq!(catalog::structure_tag(e.middle()), "Z4");
        assert!(check_morphism(sys.extension(), &e, &beta, sys.gamma()).commutes());
    }

    #[test]
    fn construct_rejects_invalid_witness() {
        let sys = z8_system();
        // any cocycle over G fails: both classes of H^2(Z/2,Z/2) miss [f0]
        let p_src = h2(sys.module());
        for coords in [vec![BigInt::from(0)], vec![BigInt::from(1)]] {
            let f = p_src.cochain_from_coords(&coords);
            assert!(matches!(
                construct_coprolongation(&sys, &f),
                Err(CoprolongError::WitnessInvalid)
            ));
        }
    }

    #[test]
    fn kernel_splitting_of_split_system() {
        let sys = split_system();
        let obs = obstruction(&sys).unwrap();
        let (e, beta) = construct_coprolongation(&sys, &obs.witness.unwrap()).unwrap();
        let split = kernel_splitting(sys.extension(), &e, &beta, sys.gamma()).unwrap();
        // Ker gamma = {0, 2} in Z/4; j(2) = (0, 2) = index 4 in the crossed
        // product indexing x*|A| + a of A x G0
        assert_eq!(split.kernel().members(), &[0, 2]);
        assert_eq!(split.apply_to_g0(2), Some(4));
    }

    #[test]
    fn preimage_decomposition_of_semidirect_system() {
        let sys = semidirect_system();
        let obs = obstruction(&sys).unwrap();
        let (e, beta) = construct_coprolongation(&sys, &obs.witness.unwrap()).unwrap();
        let split = kernel_splitting(sys.extension(), &e, &beta, sys.gamma()).unwrap();
        let dec = preimage_decomposition(&sys, &split).unwrap();
        assert_eq!(dec.preimage.len(), 6);
        // Z/3 x Z/2 is cyclic of order 6
        assert_eq!(catalog::structure_tag(&dec.product), "Z6");
    }

    #[test]
    fn representatives_identity_holds_on_split_and_semidirect() {
        for sys in [split_system(), semidirect_system()] {
            let obs = obstruction(&sys).unwrap();
            let (e, beta) = construct_coprolongation(&sys, &obs.witness.unwrap()).unwrap();
            let split = kernel_splitting(sys.extension(), &e, &beta, sys.gamma()).unwrap();
            // v: set-section 0 -> 0, 1 -> 1 of gamma: Z/4 ->> Z/2
            let report = representatives_check(&sys, &split, &[0, 1]).unwrap();
            assert!(report.holds(), "first failure: {:?}", report.first_failure);
            assert_eq!(report.pairs_checked, 16);
        }
    }

    #[test]
    fn split_case_witness_agrees_with_obstruction() {
        // G0 = Z/2 x Z/2 ->> G = Z/2 first projection, v the second factor;
        // E0 split over G0.
        let g0 = Arc::new(catalog::abelian(&[2, 2]));
        let g = z(2);
        let gamma = GroupHom::new(&g0, &g, vec![0, 0, 1, 1]).unwrap();
        let m0 = GModule::trivial(&g0, FiniteAbelianGroup::new(vec![2]).unwrap());
        let (e0, _) = crossed_product(&m0, &Cochain::zero(&m0, 2)).unwrap();
        let sys = validate_system(e0, gamma).unwrap();
        let v = GroupHom::new(&g, &g0, vec![0, 2]).unwrap();
        let split = KernelSplitting::from_images(
            sys.extension(),
            sys.gamma(),
            vec![0, sys.extension().canonical_section().value(1)],
        )
        .unwrap();
        let f = split_case_construct(&sys, &v, &split).unwrap();
        assert!(f.is_zero());
        let obs = obstruction(&sys).unwrap();
        assert!(obs.vanishes);
    }

    #[test]
    fn induced_crossed_module_of_split_system() {
        let sys = split_system();
        let obs = obstruction(&sys).unwrap();
        let (e, beta) = construct_coprolongation(&sys, &obs.witness.unwrap()).unwrap();
        let split = kernel_splitting(sys.extension(), &e, &beta, sys.gamma()).unwrap();
        let (cm, report) = induced_crossed_module(&sys, &split).unwrap();
        assert_eq!(report, CrossedModuleReport::Valid);
        // d sends (a, c) to c inside G0: image is Ker gamma = {0, 2}
        let mut image: Vec<usize> = cm.b.elements().map(|x| cm.d.apply(x)).collect();
        image.sort_unstable();
        image.dedup();
        assert_eq!(image, vec![0, 2]);
        // abelian everything: theta is trivial
        assert!(cm.theta.iter().all(|t| t.iter().enumerate().all(|(i, &v)| i == v)));
    }

    #[test]
    fn induced_crossed_module_of_semidirect_system() {
        let sys = semidirect_system();
        let obs = obstruction(&sys).unwrap();
        let (e, beta) = construct_coprolongation(&sys, &obs.witness.unwrap()).unwrap();
        let split = kernel_splitting(sys.extension(), &e, &beta, sys.gamma()).unwrap();
        let (cm, report) = induced_crossed_module(&sys, &split).unwrap();
        assert_eq!(report, CrossedModuleReport::Valid);
        // theta of an odd G0 element inverts the Z/3 coordinate
        let t = &cm.theta[1];
        // product index = a_index * 2 + c_index with A = Z/3, K = {0,2}
        assert_eq!(t[2], 4, "(1,0) maps to (2,0) under inversion");
    }

    #[test]
    fn semidirect_system_is_coprolongable_but_not_central() {
        // the Prop 2.6(1) probe: a vanishing obstruction with nontrivial
        // conjugation on the kernel
        let sys = semidirect_system();
        let obs = obstruction(&sys).unwrap();
        assert!(obs.vanishes);
        assert!(!crate::extension::is_central(sys.extension()).unwrap());
    }

    #[test]
    fn witness_independence_across_sections() {
        // obstruction coordinates must not depend on the section used for
        // f0; exercise every section of the Z/8 extension.
        let sys = z8_system();
        let baseline = obstruction(&sys).unwrap();
        let p_tgt = Arc::clone(baseline.target_h2());
        for s in sys.extension().all_sections() {
            let f0 = factor_set(sys.extension(), &s, sys.module0()).unwrap();
            let class = p_tgt.class_of(&f0).unwrap();
            assert_eq!(class.coords, baseline.f0_class);
        }
    }
}
