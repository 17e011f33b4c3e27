//! JSON interchange. A workspace document bundles named groups, homs,
//! modules, extensions, and systems; a bare file holding a single object is
//! also accepted. References between objects are names; every place that
//! takes a reference also accepts an inline object.
//!
//! Loaded groups are re-indexed so the identity sits at index 0; the applied
//! permutation is recorded and every index in the same document (hom maps,
//! action keys) is translated through it. Identical tables within one
//! document share one group instance, so cross-object identity checks hold.
//!
//! All numbers are exact integers; report builders reject anything that
//! cannot be represented in 64 bits.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog;
use crate::cohomology::{Cochain, GModule, H2Presentation};
use crate::coprolong::{validate_system, CoprolongationClassList, ObstructionResult, System};
use crate::extension::{Extension, Section};
use crate::group::{FiniteGroup, GroupHom};
use crate::sweep::SweepReport;
use crate::zlattice::FiniteAbelianGroup;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("json parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{kind} '{name}' is defined more than once")]
    Duplicate { kind: &'static str, name: String },
    #[error("{kind} reference '{name}' does not resolve")]
    Unresolved { kind: &'static str, name: String },
    #[error("{0}")]
    Invalid(String),
}

fn invalid(context: &str, detail: impl std::fmt::Display) -> JsonError {
    JsonError::Invalid(format!("{context}: {detail}"))
}

/// A reference by name into the workspace, or the object written in place.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RefOr<T> {
    Ref(String),
    Inline(T),
}

#[derive(Debug, Clone, Deserialize)]
pub struct GroupDoc {
    #[serde(default)]
    pub name: Option<String>,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct HomDoc {
    #[serde(default)]
    pub name: Option<String>,
    pub source: RefOr<GroupDoc>,
    pub target: RefOr<GroupDoc>,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ModuleDoc {
    #[serde(default)]
    pub name: Option<String>,
    pub group: RefOr<GroupDoc>,
    pub factors: Vec<i64>,
    /// Matrices keyed by group element index; omitted keys act as the
    /// identity, an omitted map is the trivial action.
    #[serde(default)]
    pub action: Option<BTreeMap<String, Vec<Vec<i64>>>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExtensionDoc {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(rename = "B")]
    pub b: RefOr<GroupDoc>,
    /// Invariant factors of the kernel; the source of `i` must be its
    /// standard Cayley table (mixed-radix indexing, first coordinate most
    /// significant).
    pub factors: Vec<i64>,
    pub i: RefOr<HomDoc>,
    pub p: RefOr<HomDoc>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SystemDoc {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(rename = "E0")]
    pub e0: RefOr<ExtensionDoc>,
    pub gamma: RefOr<HomDoc>,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct WorkspaceDoc {
    #[serde(default)]
    pub groups: Vec<GroupDoc>,
    #[serde(default)]
    pub homs: Vec<HomDoc>,
    #[serde(default)]
    pub modules: Vec<ModuleDoc>,
    #[serde(default)]
    pub extensions: Vec<ExtensionDoc>,
    #[serde(default)]
    pub systems: Vec<SystemDoc>,
}

#[derive(Debug, Clone)]
pub struct GroupEntry {
    pub group: Arc<FiniteGroup>,
    /// The involution applied to move the identity to index 0; None when the
    /// table already had it there. reindexed[new] = old.
    pub reindexed: Option<Vec<usize>>,
}

impl GroupEntry {
    /// Translates an element index written against the document's table into
    /// the loaded indexing.
    pub fn translate(&self, old: usize) -> usize {
        match &self.reindexed {
            Some(p) => p[old],
            None => old,
        }
    }
}

#[derive(Debug, Default)]
pub struct Workspace {
    pub groups: Vec<(String, GroupEntry)>,
    pub homs: Vec<(String, GroupHom)>,
    pub modules: Vec<(String, Arc<GModule>)>,
    pub extensions: Vec<(String, Extension)>,
    pub systems: Vec<(String, System)>,
}

/// Parse a document: either a workspace bundle or a bare single object whose
/// kind is inferred from its fields.
pub fn parse_workspace(text: &str) -> Result<Workspace, JsonError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let bundle_keys = ["groups", "homs", "modules", "extensions", "systems"];
    let doc: WorkspaceDoc = match value.as_object() {
        Some(map) if bundle_keys.iter().any(|k| map.contains_key(*k)) => {
            serde_json::from_value(value)?
        }
        Some(map) => {
            let mut doc = WorkspaceDoc::default();
            if map.contains_key("E0") && map.contains_key("gamma") {
                doc.systems.push(serde_json::from_value(value)?);
            } else if map.contains_key("i") && map.contains_key("p") {
                doc.extensions.push(serde_json::from_value(value)?);
            } else if map.contains_key("factors") && map.contains_key("group") {
                doc.modules.push(serde_json::from_value(value)?);
            } else if map.contains_key("map") {
                doc.homs.push(serde_json::from_value(value)?);
            } else if map.contains_key("table") {
                doc.groups.push(serde_json::from_value(value)?);
            } else {
                return Err(JsonError::Invalid(
                    "document is neither a workspace bundle nor a recognizable object".into(),
                ));
            }
            doc
        }
        None => {
            return Err(JsonError::Invalid(
                "top-level JSON value must be an object".into(),
            ))
        }
    };
    resolve(doc)
}

struct Builder {
    /// Interning by normalized table: identical groups in one document share
    /// one instance, so pointer-based identity checks succeed.
    interned: BTreeMap<Vec<Vec<usize>>, GroupEntry>,
}

impl Builder {
    fn build_group(&mut self, doc: &GroupDoc, context: &str) -> Result<GroupEntry, JsonError> {
        let n = doc.table.len();
        if doc.order != n {
            return Err(invalid(
                context,
                format!("declared order {} but the table has {} rows", doc.order, n),
            ));
        }
        for (r, row) in doc.table.iter().enumerate() {
            if row.len() != n {
                return Err(invalid(
                    context,
                    format!("table row {r} has {} entries, expected {n}", row.len()),
                ));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(invalid(
                    context,
                    format!("table entry {v} in row {r} is outside 0..{n}"),
                ));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| doc.table[e][x] == x && doc.table[x][e] == x))
            .ok_or_else(|| invalid(context, "table has no identity element"))?;
        let (table, reindexed) = if identity == 0 {
            (doc.table.clone(), None)
        } else {
            let mut sigma: Vec<usize> = (0..n).collect();
            sigma.swap(0, identity);
            let table: Vec<Vec<usize>> = (0..n)
                .map(|i| (0..n).map(|j| sigma[doc.table[sigma[i]][sigma[j]]]).collect())
                .collect();
            (table, Some(sigma))
        };
        if let Some(entry) = self.interned.get(&table) {
            // keep the first reindex record; the group instance is shared
            let mut shared = entry.clone();
            shared.reindexed = reindexed;
            return Ok(shared);
        }
        let group = Arc::new(
            FiniteGroup::from_table(&table).map_err(|e| invalid(context, e))?,
        );
        let entry = GroupEntry { group, reindexed };
        self.interned.insert(table, entry.clone());
        Ok(entry)
    }

    fn resolve_group(
        &mut self,
        r: &RefOr<GroupDoc>,
        registry: &[(String, GroupEntry)],
        context: &str,
    ) -> Result<GroupEntry, JsonError> {
        match r {
            RefOr::Ref(name) => registry
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, e)| e.clone())
                .ok_or_else(|| JsonError::Unresolved {
                    kind: "group",
                    name: name.clone(),
                }),
            RefOr::Inline(doc) => self.build_group(doc, context),
        }
    }

    fn build_hom(
        &mut self,
        doc: &HomDoc,
        groups: &[(String, GroupEntry)],
        context: &str,
    ) -> Result<GroupHom, JsonError> {
        let src = self.resolve_group(&doc.source, groups, &format!("{context}: source"))?;
        let tgt = self.resolve_group(&doc.target, groups, &format!("{context}: target"))?;
        let n = src.group.order();
        if doc.map.len() != n {
            return Err(invalid(
                context,
                format!("map has {} entries, expected {n}", doc.map.len()),
            ));
        }
        let nt = tgt.group.order();
        if let Some(&v) = doc.map.iter().find(|&&v| v >= nt) {
            return Err(invalid(
                context,
                format!("map value {v} is outside the target 0..{nt}"),
            ));
        }
        // the document's map is written against the original indexing
        let mut map = vec![0usize; n];
        for x_new in 0..n {
            let x_old = src.translate(x_new);
            map[x_new] = tgt.translate(doc.map[x_old]);
        }
        GroupHom::new(&src.group, &tgt.group, map).map_err(|e| invalid(context, e))
    }

    fn resolve_hom(
        &mut self,
        r: &RefOr<HomDoc>,
        groups: &[(String, GroupEntry)],
        homs: &[(String, GroupHom)],
        context: &str,
    ) -> Result<GroupHom, JsonError> {
        match r {
            RefOr::Ref(name) => homs
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, h)| h.clone())
                .ok_or_else(|| JsonError::Unresolved {
                    kind: "hom",
                    name: name.clone(),
                }),
            RefOr::Inline(doc) => self.build_hom(doc, groups, context),
        }
    }

    fn build_module(
        &mut self,
        doc: &ModuleDoc,
        groups: &[(String, GroupEntry)],
        context: &str,
    ) -> Result<Arc<GModule>, JsonError> {
        let entry = self.resolve_group(&doc.group, groups, &format!("{context}: group"))?;
        let coeff =
            FiniteAbelianGroup::new(doc.factors.clone()).map_err(|e| invalid(context, e))?;
        let n = entry.group.order();
        let k = coeff.rank();
        let id: Vec<Vec<i64>> = (0..k)
            .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut action = vec![id; n];
        if let Some(given) = &doc.action {
            for (key, matrix) in given {
                let g_old: usize = key.parse().map_err(|_| {
                    invalid(context, format!("action key '{key}' is not an element index"))
                })?;
                if g_old >= n {
                    return Err(invalid(
                        context,
                        format!("action key {g_old} is outside 0..{n}"),
                    ));
                }
                action[entry.translate(g_old)] = matrix.clone();
            }
        }
        GModule::new(&entry.group, coeff, action).map_err(|e| invalid(context, e))
    }

    fn build_extension(
        &mut self,
        doc: &ExtensionDoc,
        groups: &[(String, GroupEntry)],
        homs: &[(String, GroupHom)],
        context: &str,
    ) -> Result<Extension, JsonError> {
        let b = self.resolve_group(&doc.b, groups, &format!("{context}: B"))?;
        let kernel =
            FiniteAbelianGroup::new(doc.factors.clone()).map_err(|e| invalid(context, e))?;
        let i = self.resolve_hom(&doc.i, groups, homs, &format!("{context}: i"))?;
        let p = self.resolve_hom(&doc.p, groups, homs, &format!("{context}: p"))?;
        if **i.target() != *b.group {
            return Err(invalid(context, "B does not match the target of i"));
        }
        if **p.source() != *b.group {
            return Err(invalid(context, "B does not match the source of p"));
        }
        Extension::new(kernel, i, p).map_err(|e| invalid(context, e))
    }

    fn resolve_extension(
        &mut self,
        r: &RefOr<ExtensionDoc>,
        groups: &[(String, GroupEntry)],
        homs: &[(String, GroupHom)],
        extensions: &[(String, Extension)],
        context: &str,
    ) -> Result<Extension, JsonError> {
        match r {
            RefOr::Ref(name) => extensions
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, e)| e.clone())
                .ok_or_else(|| JsonError::Unresolved {
                    kind: "extension",
                    name: name.clone(),
                }),
            RefOr::Inline(doc) => self.build_extension(doc, groups, homs, context),
        }
    }
}

fn register<T>(
    list: &mut Vec<(String, T)>,
    kind: &'static str,
    index: usize,
    name: &Option<String>,
    value: T,
) -> Result<(), JsonError> {
    let name = name.clone().unwrap_or_else(|| format!("{kind}{index}"));
    if list.iter().any(|(n, _)| *n == name) {
        return Err(JsonError::Duplicate { kind, name });
    }
    list.push((name, value));
    Ok(())
}

fn resolve(doc: WorkspaceDoc) -> Result<Workspace, JsonError> {
    let mut b = Builder {
        interned: BTreeMap::new(),
    };
    let mut ws = Workspace::default();
    for (idx, g) in doc.groups.iter().enumerate() {
        let context = format!("group '{}'", g.name.as_deref().unwrap_or("(unnamed)"));
        let entry = b.build_group(g, &context)?;
        register(&mut ws.groups, "group", idx, &g.name, entry)?;
    }
    for (idx, h) in doc.homs.iter().enumerate() {
        let context = format!("hom '{}'", h.name.as_deref().unwrap_or("(unnamed)"));
        let hom = b.build_hom(h, &ws.groups, &context)?;
        register(&mut ws.homs, "hom", idx, &h.name, hom)?;
    }
    for (idx, m) in doc.modules.iter().enumerate() {
        let context = format!("module '{}'", m.name.as_deref().unwrap_or("(unnamed)"));
        let module = b.build_module(m, &ws.groups, &context)?;
        register(&mut ws.modules, "module", idx, &m.name, module)?;
    }
    for (idx, e) in doc.extensions.iter().enumerate() {
        let context = format!("extension '{}'", e.name.as_deref().unwrap_or("(unnamed)"));
        let ext = b.build_extension(e, &ws.groups, &ws.homs, &context)?;
        register(&mut ws.extensions, "extension", idx, &e.name, ext)?;
    }
    for (idx, s) in doc.systems.iter().enumerate() {
        let context = format!("system '{}'", s.name.as_deref().unwrap_or("(unnamed)"));
        let e0 = b.resolve_extension(&s.e0, &ws.groups, &ws.homs, &ws.extensions, &context)?;
        let gamma = b.resolve_hom(&s.gamma, &ws.groups, &ws.homs, &format!("{context}: gamma"))?;
        let sys = validate_system(e0, gamma).map_err(|e| invalid(&context, e))?;
        register(&mut ws.systems, "system", idx, &s.name, sys)?;
    }
    Ok(ws)
}

impl Workspace {
    pub fn sole_module(&self) -> Result<(&str, &Arc<GModule>), JsonError> {
        match self.modules.as_slice() {
            [(name, m)] => Ok((name, m)),
            other => Err(JsonError::Invalid(format!(
                "document defines {} modules; expected exactly one",
                other.len()
            ))),
        }
    }

    pub fn sole_system(&self) -> Result<(&str, &System), JsonError> {
        match self.systems.as_slice() {
            [(name, s)] => Ok((name, s)),
            other => Err(JsonError::Invalid(format!(
                "document defines {} systems; expected exactly one",
                other.len()
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// report documents

fn to_i64(v: &BigInt, what: &str) -> Result<i64, JsonError> {
    v.to_i64()
        .ok_or_else(|| JsonError::Invalid(format!("{what} does not fit in 64 bits")))
}

fn to_i64_vec(vs: &[BigInt], what: &str) -> Result<Vec<i64>, JsonError> {
    vs.iter().map(|v| to_i64(v, what)).collect()
}

/// Sparse cochain: nonzero values keyed by comma-joined non-identity indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainDoc {
    pub degree: usize,
    pub values: BTreeMap<String, Vec<i64>>,
}

pub fn cochain_doc(f: &Cochain) -> CochainDoc {
    let n = f.module().group().order();
    let degree = f.degree();
    let mut values = BTreeMap::new();
    let mut idx = vec![1usize; degree];
    if n > 1 {
        loop {
            let v = f.value_at(&idx);
            if v.iter().any(|&c| c != 0) {
                let key = idx
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                values.insert(key, v);
            }
            let mut pos = degree;
            loop {
                if pos == 0 {
                    return CochainDoc { degree, values };
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < n {
                    break;
                }
                idx[pos] = 1;
            }
        }
    }
    CochainDoc { degree, values }
}

#[derive(Debug, Clone, Serialize)]
pub struct H2Report {
    pub factors: Vec<i64>,
    pub order: i64,
    pub generators: Vec<CochainDoc>,
}

pub fn h2_report(pres: &H2Presentation) -> Result<H2Report, JsonError> {
    Ok(H2Report {
        factors: to_i64_vec(pres.factors(), "H2 invariant factor")?,
        order: to_i64(&pres.order(), "H2 order")?,
        generators: pres.generators().iter().map(cochain_doc).collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionReport {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub kernel_factors: Vec<i64>,
    pub i: Vec<usize>,
    pub p: Vec<usize>,
    pub canonical_section: Vec<usize>,
    /// Structure tag of the middle group when its order is at most 16.
    pub tag: Option<String>,
}

pub fn extension_report(e: &Extension, section: Option<&Section>) -> ExtensionReport {
    let b = e.middle();
    let n = b.order();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).map(|y| b.mul(x, y)).collect())
        .collect();
    let canonical = e.canonical_section();
    let section = section.map(|s| s.values().to_vec());
    ExtensionReport {
        order: n,
        table,
        kernel_factors: e.kernel().factors().to_vec(),
        i: e.embedding().map().to_vec(),
        p: e.projection().map().to_vec(),
        canonical_section: section.unwrap_or_else(|| canonical.values().to_vec()),
        tag: (n <= 16).then(|| catalog::structure_tag(b)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionReport {
    pub vanishes: bool,
    pub coker_coords: Vec<i64>,
    pub coker_factors: Vec<i64>,
    pub witness: Option<CochainDoc>,
}

pub fn obstruction_report(obs: &ObstructionResult) -> Result<ObstructionReport, JsonError> {
    Ok(ObstructionReport {
        vanishes: obs.vanishes,
        coker_coords: to_i64_vec(&obs.coker_coords, "cokernel coordinate")?,
        coker_factors: to_i64_vec(obs.h2map.cokernel().factors(), "cokernel factor")?,
        witness: obs.witness.as_ref().map(cochain_doc),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub coords: Vec<i64>,
    pub extension: ExtensionReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    #[serde(rename = "E0_central")]
    pub e0_central: bool,
    pub crossed_module_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub vanishes: bool,
    pub coker_coords: Vec<i64>,
    pub witness: Option<CochainDoc>,
    pub classes: Vec<ClassReport>,
    pub diagnostics: Diagnostics,
}

pub fn classify_report(
    list: &CoprolongationClassList,
    diagnostics: Diagnostics,
) -> Result<ClassifyReport, JsonError> {
    let classes = list
        .classes
        .iter()
        .map(|c| {
            Ok(ClassReport {
                coords: to_i64_vec(&c.coords, "class coordinate")?,
                extension: extension_report(&c.extension, Some(&c.section)),
            })
        })
        .collect::<Result<Vec<_>, JsonError>>()?;
    Ok(ClassifyReport {
        vanishes: list.vanishes,
        coker_coords: to_i64_vec(&list.obstruction.coker_coords, "cokernel coordinate")?,
        witness: list.obstruction.witness.as_ref().map(cochain_doc),
        classes,
        diagnostics,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub h2_factors: Vec<i64>,
    pub count: usize,
    pub classes: Vec<ClassReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub max_order: usize,
    pub systems_total: usize,
    pub incompatible_pairs: usize,
    pub existence: CountReport,
    pub torsor: CountReport,
    pub morphism: CountReport,
    pub crossed_module: CountReport,
    pub sections: CountReport,
    pub theta_ill_defined: Vec<String>,
    pub guard_skipped: Vec<String>,
    pub noncentral_coprolongable: Vec<String>,
    pub failures: Vec<String>,
    pub all_pass: bool,
}

pub fn verify_report(max_order: usize, report: &SweepReport) -> VerifyReport {
    let count = |c: crate::sweep::CheckCounts| CountReport {
        passed: c.passed,
        failed: c.failed,
    };
    VerifyReport {
        max_order,
        systems_total: report.systems_total,
        incompatible_pairs: report.incompatible_pairs,
        existence: count(report.existence),
        torsor: count(report.torsor),
        morphism: count(report.morphism),
        crossed_module: count(report.crossed_module),
        sections: count(report.sections),
        theta_ill_defined: report.theta_ill_defined.clone(),
        guard_skipped: report.guard_skipped.clone(),
        noncentral_coprolongable: report.noncentral_coprolongable.clone(),
        failures: report.failures.clone(),
        all_pass: report.all_pass(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupValidation {
    pub name: String,
    pub order: usize,
    pub abelian: bool,
    /// The permutation applied to move the identity to index 0, new -> old.
    pub reindexed: Option<Vec<usize>>,
    pub tag: Option<String>,
}

pub fn group_validation(name: &str, entry: &GroupEntry) -> GroupValidation {
    GroupValidation {
        name: name.to_string(),
        order: entry.group.order(),
        abelian: entry.group.is_abelian(),
        reindexed: entry.reindexed.clone(),
        tag: (entry.group.order() <= 16).then(|| catalog::structure_tag(&entry.group)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HomValidation {
    pub name: String,
    pub source_order: usize,
    pub target_order: usize,
    pub injective: bool,
    pub surjective: bool,
    pub kernel_size: usize,
}

pub fn hom_validation(name: &str, hom: &GroupHom) -> HomValidation {
    HomValidation {
        name: name.to_string(),
        source_order: hom.source().order(),
        target_order: hom.target().order(),
        injective: hom.is_injective(),
        surjective: hom.is_surjective(),
        kernel_size: hom.kernel().members().len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::h2;

    fn z2_module_doc() -> &'static str {
        r#"{
            "group": {"order": 2, "table": [[0,1],[1,0]]},
            "factors": [2]
        }"#
    }

    #[test]
    fn bare_module_document_loads() {
        let ws = parse_workspace(z2_module_doc()).unwrap();
        let (_, module) = ws.sole_module().unwrap();
        assert!(module.is_trivial_action());
        let pres = h2(module);
        assert_eq!(pres.order(), BigInt::from(2));
    }

    #[test]
    fn identity_reindexing_translates_references() {
        // Z2 written with the identity at index 1; the hom map is written
        // against that original indexing
        let text = r#"{
            "groups": [
                {"name": "Z2swapped", "order": 2, "table": [[1,0],[0,1]]},
                {"name": "Z2", "order": 2, "table": [[0,1],[1,0]]}
            ],
            "homs": [
                {"name": "id", "source": "Z2swapped", "target": "Z2", "map": [1, 0]}
            ]
        }"#;
        let ws = parse_workspace(text).unwrap();
        let (_, entry) = &ws.groups[0];
        assert_eq!(entry.reindexed, Some(vec![1, 0]));
        let (_, hom) = &ws.homs[0];
        // in the original indexing element 0 (the non-identity) maps to 1
        // (the non-identity of the plain table); internally both are index 1
        assert_eq!(hom.map(), &[0, 1]);
        assert!(hom.is_surjective());
    }

    #[test]
    fn workspace_system_round_trip() {
        // split extension of Z2 by Z4 with gamma onto Z2
        let text = r#"{
            "groups": [
                {"name": "A", "order": 2, "table": [[0,1],[1,0]]},
                {"name": "Z4", "order": 4, "table": [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]},
                {"name": "Z2", "order": 2, "table": [[0,1],[1,0]]},
                {"name": "B0", "order": 8, "table": [
                    [0,1,2,3,4,5,6,7],[1,0,3,2,5,4,7,6],
                    [2,3,4,5,6,7,0,1],[3,2,5,4,7,6,1,0],
                    [4,5,6,7,0,1,2,3],[5,4,7,6,1,0,3,2],
                    [6,7,0,1,2,3,4,5],[7,6,1,0,3,2,5,4]
                ]}
            ],
            "homs": [
                {"name": "i", "source": "A", "target": "B0", "map": [0,1]},
                {"name": "p", "source": "B0", "target": "Z4", "map": [0,0,1,1,2,2,3,3]},
                {"name": "gamma", "source": "Z4", "target": "Z2", "map": [0,1,0,1]}
            ],
            "extensions": [
                {"name": "E0", "B": "B0", "factors": [2], "i": "i", "p": "p"}
            ],
            "systems": [
                {"name": "S", "E0": "E0", "gamma": "gamma"}
            ]
        }"#;
        let ws = parse_workspace(text).unwrap();
        let (_, sys) = ws.sole_system().unwrap();
        let obs = crate::coprolong::obstruction(sys).unwrap();
        assert!(obs.vanishes);
    }

    #[test]
    fn gamma_not_surjective_is_reported() {
        let text = r#"{
            "groups": [
                {"name": "A", "order": 2, "table": [[0,1],[1,0]]},
                {"name": "Z2", "order": 2, "table": [[0,1],[1,0]]},
                {"name": "B0", "order": 4, "table": [[0,1,2,3],[1,0,3,2],[2,3,0,1],[3,2,1,0]]}
            ],
            "homs": [
                {"name": "i", "source": "A", "target": "B0", "map": [0,1]},
                {"name": "p", "source": "B0", "target": "Z2", "map": [0,0,1,1]},
                {"name": "gamma", "source": "Z2", "target": "Z2", "map": [0,0]}
            ],
            "systems": [
                {"name": "S", "E0": {"B": "B0", "factors": [2], "i": "i", "p": "p"}, "gamma": "gamma"}
            ]
        }"#;
        let err = parse_workspace(text).unwrap_err();
        assert!(
            err.to_string().contains("gamma not surjective"),
            "got: {err}"
        );
    }

    #[test]
    fn malformed_action_names_the_invariant() {
        // sending the order-2 coordinate into the order-4 one is not
        // well-defined on the quotient
        let text = r#"{
            "group": {"order": 2, "table": [[0,1],[1,0]]},
            "factors": [2,4],
            "action": {"1": [[1,0],[1,1]]}
        }"#;
        let err = parse_workspace(text).unwrap_err();
        assert!(
            err.to_string().contains("action[1] does not respect moduli"),
            "got: {err}"
        );
    }

    #[test]
    fn duplicate_names_rejected() {
        let text = r#"{
            "groups": [
                {"name": "G", "order": 1, "table": [[0]]},
                {"name": "G", "order": 2, "table": [[0,1],[1,0]]}
            ]
        }"#;
        assert!(matches!(
            parse_workspace(text).unwrap_err(),
            JsonError::Duplicate { .. }
        ));
    }

    #[test]
    fn unresolved_reference_rejected() {
        let text = r#"{
            "homs": [ {"name": "h", "source": "missing", "target": "missing", "map": []} ]
        }"#;
        assert!(matches!(
            parse_workspace(text).unwrap_err(),
            JsonError::Unresolved { .. }
        ));
    }

    #[test]
    fn cochain_doc_is_sparse_and_ordered() {
        let ws = parse_workspace(z2_module_doc()).unwrap();
        let (_, module) = ws.sole_module().unwrap();
        let pres = h2(module);
        let doc = cochain_doc(&pres.generators()[0]);
        assert_eq!(doc.degree, 2);
        assert_eq!(doc.values.len(), 1);
        assert_eq!(doc.values.get("1,1"), Some(&vec![1]));
        let json = serde_json::to_string(&doc).unwrap();
        assert_eq!(json, r#"{"degree":2,"values":{"1,1":[1]}}"#);
    }
}
