//! Interchange documents: one structured-text (JSON) syntax for all
//! document kinds with a "kind" discriminator. Complex numbers are
//! [re, im] pairs of decimal strings, rationals are "p/q" strings.
//! Canonical serialization is deterministic, so parse-then-serialize is
//! byte-identical on canonicalized documents.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundle::FellBundle;
use crate::groupoid::FiniteGroupoid;
use crate::kgraph::{PGraphPresentation, Path, Skeleton};
use crate::lattice::RationalCocycle;
use crate::linalg::{CMat, C64};
use crate::prim::{CocycleAssignment, CylinderDescriptor};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("document error: {0}")]
    Semantic(String),
    #[error("unresolved groupoid reference {0:?}")]
    UnresolvedRef(String),
    #[error(transparent)]
    Groupoid(#[from] crate::groupoid::GroupoidError),
    #[error(transparent)]
    Bundle(#[from] crate::bundle::BundleError),
    #[error(transparent)]
    KGraph(#[from] crate::kgraph::KGraphError),
    #[error(transparent)]
    Lattice(#[from] crate::lattice::LatticeError),
    #[error("io error: {0}")]
    File(#[from] std::io::Error),
}

fn semantic(msg: impl Into<String>) -> IoError {
    IoError::Semantic(msg.into())
}

/// A complex number as a pair of decimal strings.
pub type ComplexDoc = [String; 2];

pub fn complex_to_doc(z: C64) -> ComplexDoc {
    [format!("{}", z.re), format!("{}", z.im)]
}

pub fn complex_from_doc(d: &ComplexDoc) -> Result<C64, IoError> {
    let re: f64 = d[0]
        .parse()
        .map_err(|_| semantic(format!("bad decimal {:?}", d[0])))?;
    let im: f64 = d[1]
        .parse()
        .map_err(|_| semantic(format!("bad decimal {:?}", d[1])))?;
    Ok(C64::new(re, im))
}

pub fn rational_to_doc(r: Rational64) -> String {
    if *r.denom() == 1 {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_from_doc(s: &str) -> Result<Rational64, IoError> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| {
                IoError::Lattice(crate::lattice::LatticeError::IrrationalPhase(s.to_string()))
            })?;
            let q: i64 = q.trim().parse().map_err(|_| {
                IoError::Lattice(crate::lattice::LatticeError::IrrationalPhase(s.to_string()))
            })?;
            if q == 0 {
                return Err(semantic(format!("zero denominator in {s:?}")));
            }
            Ok(Rational64::new(p, q))
        }
        None => {
            let p: i64 = s.parse().map_err(|_| {
                IoError::Lattice(crate::lattice::LatticeError::IrrationalPhase(s.to_string()))
            })?;
            Ok(Rational64::from_integer(p))
        }
    }
}

// ---------------------------------------------------------------------------
// document kinds
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Groupoid(GroupoidDoc),
    Bundle(BundleDoc),
    Skeleton(SkeletonDoc),
    Cocycle(CocycleDoc),
    Matrix(MatrixDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Groupoid(_) => "groupoid",
            Document::Bundle(_) => "bundle",
            Document::Skeleton(_) => "skeleton",
            Document::Cocycle(_) => "cocycle",
            Document::Matrix(_) => "matrix",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrowDoc {
    pub id: String,
    pub range: String,
    pub source: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupoidDoc {
    pub units: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    pub compose: Vec<[String; 3]>,
    pub inverse: Vec<[String; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupoidRef {
    Name(String),
    Inline(GroupoidDoc),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultTensorDoc {
    pub g: String,
    pub h: String,
    /// Sparse entries [i, j, k, [re, im]].
    pub entries: Vec<(usize, usize, usize, ComplexDoc)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvolDoc {
    pub g: String,
    /// Sparse entries [row, col, [re, im]].
    pub entries: Vec<(usize, usize, ComplexDoc)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleDoc {
    pub groupoid: GroupoidRef,
    pub fiber_dims: BTreeMap<String, usize>,
    pub mult: Vec<MultTensorDoc>,
    pub invol: Vec<InvolDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub range: String,
    pub source: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SkeletonDoc {
    pub k: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<Vec<EdgeDoc>>,
    /// Squares as [f, g, g', f'] by edge id, f g = g' f'.
    pub squares: Vec<[String; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_basis: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub color_degrees: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CylinderDoc {
    Vertex { vertex: String },
    Path { path: Vec<String> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssignmentEntryDoc {
    pub cylinder: CylinderDoc,
    pub theta: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocycleDoc {
    /// Ambient rank of the subgroup.
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_basis: Option<Vec<Vec<i64>>>,
    /// A single exponent matrix (for symmetrizer computations).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<Vec<String>>>,
    /// Per-cylinder exponents (for stratification).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Vec<AssignmentEntryDoc>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub entries: Vec<Vec<i64>>,
}

pub fn parse_document(text: &str) -> Result<Document, IoError> {
    Ok(serde_json::from_str(text)?)
}

/// Canonical serialization: fixed field order, two-space indentation,
/// trailing newline.
pub fn canonical_string(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// groupoid documents
// ---------------------------------------------------------------------------

pub fn build_groupoid(doc: &GroupoidDoc) -> Result<FiniteGroupoid, IoError> {
    let unit_index: BTreeMap<&str, usize> = doc
        .units
        .iter()
        .enumerate()
        .map(|(i, u)| (u.as_str(), i))
        .collect();
    if unit_index.len() != doc.units.len() {
        return Err(semantic("duplicate unit labels"));
    }
    let arrow_index: BTreeMap<&str, usize> = doc
        .arrows
        .iter()
        .enumerate()
        .map(|(i, a)| (a.id.as_str(), i))
        .collect();
    if arrow_index.len() != doc.arrows.len() {
        return Err(semantic("duplicate arrow ids"));
    }
    let unit_of = |s: &str| {
        unit_index
            .get(s)
            .copied()
            .ok_or_else(|| semantic(format!("unknown unit {s:?}")))
    };
    let arrow_of = |s: &str| {
        arrow_index
            .get(s)
            .copied()
            .ok_or_else(|| semantic(format!("unknown arrow {s:?}")))
    };
    let range: Vec<usize> = doc
        .arrows
        .iter()
        .map(|a| unit_of(&a.range))
        .collect::<Result<_, _>>()?;
    let source: Vec<usize> = doc
        .arrows
        .iter()
        .map(|a| unit_of(&a.source))
        .collect::<Result<_, _>>()?;
    let mut compose = Vec::new();
    for [g, h, gh] in &doc.compose {
        compose.push((arrow_of(g)?, arrow_of(h)?, arrow_of(gh)?));
    }
    let mut inverse = vec![usize::MAX; doc.arrows.len()];
    for [g, gi] in &doc.inverse {
        inverse[arrow_of(g)?] = arrow_of(gi)?;
    }
    if inverse.iter().any(|&g| g == usize::MAX) {
        return Err(semantic("inverse table does not cover all arrows"));
    }
    // infer the unit embedding: for each unit the unique arrow that is
    // idempotent and neutral on every declared composition
    let compose_map: BTreeMap<(usize, usize), usize> =
        compose.iter().map(|&(g, h, gh)| ((g, h), gh)).collect();
    let mut unit_arrow = Vec::new();
    for x in 0..doc.units.len() {
        let mut candidates = Vec::new();
        'arrows: for u in 0..doc.arrows.len() {
            if range[u] != x || source[u] != x || compose_map.get(&(u, u)) != Some(&u) {
                continue;
            }
            for g in 0..doc.arrows.len() {
                if source[g] == x && compose_map.get(&(g, u)) != Some(&g) {
                    continue 'arrows;
                }
                if range[g] == x && compose_map.get(&(u, g)) != Some(&g) {
                    continue 'arrows;
                }
            }
            candidates.push(u);
        }
        match candidates.as_slice() {
            [u] => unit_arrow.push(*u),
            [] => {
                return Err(semantic(format!(
                    "no unit arrow found for unit {:?}",
                    doc.units[x]
                )))
            }
            _ => {
                return Err(semantic(format!(
                    "ambiguous unit arrow for unit {:?}",
                    doc.units[x]
                )))
            }
        }
    }
    Ok(FiniteGroupoid::new(
        doc.units.clone(),
        doc.arrows.iter().map(|a| a.id.clone()).collect(),
        range,
        source,
        compose,
        inverse,
        unit_arrow,
    )?)
}

pub fn groupoid_to_doc(g: &FiniteGroupoid) -> GroupoidDoc {
    GroupoidDoc {
        units: g.unit_labels().to_vec(),
        arrows: (0..g.arrow_count())
            .map(|a| ArrowDoc {
                id: g.arrow_label(a).to_string(),
                range: g.unit_label(g.range(a)).to_string(),
                source: g.unit_label(g.source(a)).to_string(),
            })
            .collect(),
        compose: g
            .composable_pairs()
            .iter()
            .map(|&(a, b)| {
                [
                    g.arrow_label(a).to_string(),
                    g.arrow_label(b).to_string(),
                    g.arrow_label(g.compose(a, b).unwrap()).to_string(),
                ]
            })
            .collect(),
        inverse: (0..g.arrow_count())
            .map(|a| {
                [
                    g.arrow_label(a).to_string(),
                    g.arrow_label(g.inverse(a)).to_string(),
                ]
            })
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// bundle documents
// ---------------------------------------------------------------------------

pub fn build_bundle(
    doc: &BundleDoc,
    resolve: &dyn Fn(&str) -> Result<GroupoidDoc, IoError>,
) -> Result<FellBundle, IoError> {
    let gdoc = match &doc.groupoid {
        GroupoidRef::Inline(g) => g.clone(),
        GroupoidRef::Name(n) => resolve(n)?,
    };
    let base = build_groupoid(&gdoc)?;
    let arrow_of = |s: &str| {
        (0..base.arrow_count())
            .find(|&a| base.arrow_label(a) == s)
            .ok_or_else(|| semantic(format!("unknown arrow {s:?}")))
    };
    let mut fiber_dim = vec![0usize; base.arrow_count()];
    for (id, &d) in &doc.fiber_dims {
        fiber_dim[arrow_of(id)?] = d;
    }
    if fiber_dim.iter().any(|&d| d == 0) {
        return Err(semantic(
            "fiber_dims must cover every arrow with a positive dimension",
        ));
    }
    let mut mult = std::collections::HashMap::new();
    for t in &doc.mult {
        let g = arrow_of(&t.g)?;
        let h = arrow_of(&t.h)?;
        let gh = base.compose(g, h).ok_or_else(|| {
            semantic(format!(
                "tensor given for non-composable ({}, {})",
                t.g, t.h
            ))
        })?;
        let mut map = crate::algebra::BilinearMap::new(fiber_dim[g], fiber_dim[h], fiber_dim[gh]);
        for &(i, j, k, ref z) in &t.entries {
            if i >= fiber_dim[g] || j >= fiber_dim[h] || k >= fiber_dim[gh] {
                return Err(semantic(format!(
                    "tensor index out of range at ({}, {})",
                    t.g, t.h
                )));
            }
            map.push(i, j, k, complex_from_doc(z)?);
        }
        mult.insert((g, h), map);
    }
    let mut invol: Vec<Option<CMat>> = vec![None; base.arrow_count()];
    for iv in &doc.invol {
        let g = arrow_of(&iv.g)?;
        let gi = base.inverse(g);
        let mut m = CMat::zeros(fiber_dim[gi], fiber_dim[g]);
        for &(r, c, ref z) in &iv.entries {
            if r >= fiber_dim[gi] || c >= fiber_dim[g] {
                return Err(semantic(format!(
                    "involution index out of range at {}",
                    iv.g
                )));
            }
            m.set(r, c, complex_from_doc(z)?);
        }
        invol[g] = Some(m);
    }
    let invol: Vec<CMat> = invol
        .into_iter()
        .enumerate()
        .map(|(g, m)| m.ok_or_else(|| semantic(format!("missing involution for arrow {g}"))))
        .collect::<Result<_, _>>()?;
    Ok(FellBundle::new(base, fiber_dim, mult, invol)?)
}

pub fn bundle_to_doc(b: &FellBundle) -> BundleDoc {
    let base = b.base();
    let fiber_dims: BTreeMap<String, usize> = (0..base.arrow_count())
        .map(|g| (base.arrow_label(g).to_string(), b.fiber_dim(g)))
        .collect();
    let mult = base
        .composable_pairs()
        .iter()
        .map(|&(g, h)| MultTensorDoc {
            g: base.arrow_label(g).to_string(),
            h: base.arrow_label(h).to_string(),
            entries: b
                .mult_map(g, h)
                .entries()
                .into_iter()
                .map(|(i, j, k, z)| (i, j, k, complex_to_doc(z)))
                .collect(),
        })
        .collect();
    let invol = (0..base.arrow_count())
        .map(|g| {
            let m = b.invol_matrix(g);
            let mut entries = Vec::new();
            for r in 0..m.rows {
                for c in 0..m.cols {
                    let z = m.at(r, c);
                    if z.norm() > 0.0 {
                        entries.push((r, c, complex_to_doc(z)));
                    }
                }
            }
            InvolDoc {
                g: base.arrow_label(g).to_string(),
                entries,
            }
        })
        .collect();
    BundleDoc {
        groupoid: GroupoidRef::Inline(groupoid_to_doc(base)),
        fiber_dims,
        mult,
        invol,
    }
}

// ---------------------------------------------------------------------------
// skeleton documents
// ---------------------------------------------------------------------------

pub fn build_skeleton(doc: &SkeletonDoc) -> Result<Skeleton, IoError> {
    let vmap: BTreeMap<&str, usize> = doc
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    if vmap.len() != doc.vertices.len() {
        return Err(semantic("duplicate vertex labels"));
    }
    if doc.edges.len() != doc.k {
        return Err(semantic(format!(
            "expected {} edge lists, found {}",
            doc.k,
            doc.edges.len()
        )));
    }
    let mut edge_ref: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    let mut edges = Vec::new();
    for (c, list) in doc.edges.iter().enumerate() {
        let mut color = Vec::new();
        for (i, e) in list.iter().enumerate() {
            if edge_ref.insert(e.id.as_str(), (c, i)).is_some() {
                return Err(semantic(format!("duplicate edge id {:?}", e.id)));
            }
            let r = *vmap
                .get(e.range.as_str())
                .ok_or_else(|| semantic(format!("unknown vertex {:?}", e.range)))?;
            let s = *vmap
                .get(e.source.as_str())
                .ok_or_else(|| semantic(format!("unknown vertex {:?}", e.source)))?;
            color.push((e.id.clone(), r, s));
        }
        edges.push(color);
    }
    let mut squares = Vec::new();
    for [f, g, g2, f2] in &doc.squares {
        let look = |s: &str| {
            edge_ref
                .get(s)
                .copied()
                .ok_or_else(|| semantic(format!("unknown edge {s:?}")))
        };
        let (cf, fi) = look(f)?;
        let (cg, gi) = look(g)?;
        let (cg2, g2i) = look(g2)?;
        let (cf2, f2i) = look(f2)?;
        if cf != cf2 || cg != cg2 || cf >= cg {
            return Err(semantic(format!(
                "square [{f}, {g}, {g2}, {f2}] has bad colors"
            )));
        }
        squares.push((cf, cg, fi, gi, g2i, f2i));
    }
    Ok(Skeleton::new(doc.k, doc.vertices.clone(), edges, squares)?)
}

pub fn skeleton_to_doc(s: &Skeleton) -> SkeletonDoc {
    SkeletonDoc {
        k: s.rank(),
        vertices: s.vertex_labels().to_vec(),
        edges: (0..s.rank())
            .map(|c| {
                s.color_edges(c)
                    .iter()
                    .map(|e| EdgeDoc {
                        id: e.id.clone(),
                        range: s.vertex_label(e.range).to_string(),
                        source: s.vertex_label(e.source).to_string(),
                    })
                    .collect()
            })
            .collect(),
        squares: s
            .squares()
            .into_iter()
            .map(|(ci, cj, f, g, g2, f2)| {
                [
                    s.edge((ci, f)).id.clone(),
                    s.edge((cj, g)).id.clone(),
                    s.edge((cj, g2)).id.clone(),
                    s.edge((ci, f2)).id.clone(),
                ]
            })
            .collect(),
        h_basis: None,
        color_degrees: None,
    }
}

/// Build a P-graph presentation from a skeleton document: without h_basis
/// the skeleton is a plain k-graph; with it, color_degrees defaults to the
/// identity labelling when the ranks agree.
pub fn build_presentation(doc: &SkeletonDoc) -> Result<PGraphPresentation, IoError> {
    let skeleton = build_skeleton(doc)?;
    match &doc.h_basis {
        None => Ok(PGraphPresentation::plain_kgraph(skeleton)),
        Some(basis) => {
            let ambient = basis
                .first()
                .map(|v| v.len())
                .ok_or_else(|| semantic("empty h_basis; omit the field for H = 0"))?;
            if basis.iter().any(|v| v.len() != ambient) {
                return Err(semantic("h_basis vectors have mixed lengths"));
            }
            let color_degrees = match &doc.color_degrees {
                Some(d) => d.clone(),
                None if skeleton.rank() == ambient => (0..ambient)
                    .map(|c| (0..ambient).map(|i| i64::from(i == c)).collect())
                    .collect(),
                None => return Err(semantic(
                    "color_degrees required when the skeleton rank differs from the ambient rank",
                )),
            };
            let pres = PGraphPresentation {
                skeleton,
                ambient_rank: ambient,
                h_basis: basis.clone(),
                color_degrees,
            };
            pres.validate()?;
            Ok(pres)
        }
    }
}

// ---------------------------------------------------------------------------
// cocycle documents
// ---------------------------------------------------------------------------

pub fn theta_from_doc(rows: &[Vec<String>]) -> Result<RationalCocycle, IoError> {
    let parsed: Vec<Vec<Rational64>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| rational_from_doc(s))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    Ok(RationalCocycle::new(parsed)?)
}

pub fn theta_to_doc(t: &RationalCocycle) -> Vec<Vec<String>> {
    t.theta
        .iter()
        .map(|row| row.iter().map(|r| rational_to_doc(*r)).collect())
        .collect()
}

/// Build a cocycle assignment against a skeleton: vertex cylinders by
/// label, path cylinders as edge-id sequences.
pub fn build_assignment(
    doc: &CocycleDoc,
    skeleton: &Skeleton,
) -> Result<CocycleAssignment, IoError> {
    let entries_doc = doc
        .assignment
        .as_ref()
        .ok_or_else(|| semantic("cocycle document has no assignment"))?;
    let mut entries = Vec::new();
    for e in entries_doc {
        let theta = theta_from_doc(&e.theta)?;
        let cyl = match &e.cylinder {
            CylinderDoc::Vertex { vertex } => {
                let v = (0..skeleton.vertex_count())
                    .find(|&v| skeleton.vertex_label(v) == vertex)
                    .ok_or_else(|| semantic(format!("unknown vertex {vertex:?}")))?;
                CylinderDescriptor::Vertex(v)
            }
            CylinderDoc::Path { path } => {
                let mut edges = Vec::new();
                for id in path {
                    let mut found = None;
                    for c in 0..skeleton.rank() {
                        if let Some(i) = skeleton.color_edges(c).iter().position(|e| &e.id == id) {
                            found = Some((c, i));
                            break;
                        }
                    }
                    edges.push(found.ok_or_else(|| semantic(format!("unknown edge {id:?}")))?);
                }
                if edges.is_empty() {
                    return Err(semantic("path cylinder must name at least one edge"));
                }
                let range = skeleton.edge(edges[0]).range;
                // verify composability
                let mut cur = range;
                for &e in &edges {
                    if skeleton.edge(e).range != cur {
                        return Err(semantic("path cylinder edges are not composable"));
                    }
                    cur = skeleton.edge(e).source;
                }
                let p = skeleton.normalize(&Path { range, edges })?;
                CylinderDescriptor::Path(p)
            }
        };
        entries.push((cyl, theta));
    }
    Ok(CocycleAssignment { entries })
}

pub fn read_document(path: &std::path::Path) -> Result<Document, IoError> {
    let text = std::fs::read_to_string(path)?;
    parse_document(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn groupoid_roundtrip_is_canonical() {
        let g = zoo::pair_groupoid(2);
        let doc = Document::Groupoid(groupoid_to_doc(&g));
        let text = canonical_string(&doc);
        let parsed = parse_document(&text).unwrap();
        assert_eq!(canonical_string(&parsed), text);
        // rebuilt groupoid validates and has the same shape
        if let Document::Groupoid(gd) = parsed {
            let g2 = build_groupoid(&gd).unwrap();
            assert!(g2.validate().is_valid());
            assert_eq!(g2.arrow_count(), g.arrow_count());
            assert_eq!(g2.unit_arrow(0), g.unit_arrow(0));
        }
    }

    #[test]
    fn bundle_roundtrip_preserves_structure() {
        let b = zoo::klein_twisted_bundle();
        let doc = Document::Bundle(bundle_to_doc(&b));
        let text = canonical_string(&doc);
        let parsed = parse_document(&text).unwrap();
        assert_eq!(canonical_string(&parsed), text);
        if let Document::Bundle(bd) = parsed {
            let b2 = build_bundle(&bd, &|n| Err(IoError::UnresolvedRef(n.to_string()))).unwrap();
            assert!(b2.validate(1e-9).is_valid());
            let s1 = b
                .section_algebra()
                .algebra
                .block_decompose(1e-9)
                .unwrap()
                .sizes();
            let s2 = b2
                .section_algebra()
                .algebra
                .block_decompose(1e-9)
                .unwrap()
                .sizes();
            assert_eq!(s1, s2);
        }
    }

    #[test]
    fn skeleton_roundtrip() {
        let s = zoo::product_loops_skeleton(2, 1);
        let doc = Document::Skeleton(skeleton_to_doc(&s));
        let text = canonical_string(&doc);
        let parsed = parse_document(&text).unwrap();
        assert_eq!(canonical_string(&parsed), text);
        if let Document::Skeleton(sd) = parsed {
            let s2 = build_skeleton(&sd).unwrap();
            assert!(s2.validate().is_valid());
            assert_eq!(
                s2.count_paths(0, &[2, 1]).unwrap(),
                s.count_paths(0, &[2, 1]).unwrap()
            );
        }
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(rational_from_doc("1/3").unwrap(), Rational64::new(1, 3));
        assert_eq!(rational_from_doc("-2/6").unwrap(), Rational64::new(-1, 3));
        assert_eq!(rational_from_doc("4").unwrap(), Rational64::from_integer(4));
        assert!(rational_from_doc("0.5").is_err());
        assert!(rational_from_doc("1/0").is_err());
        assert_eq!(rational_to_doc(Rational64::new(3, 1)), "3");
        assert_eq!(rational_to_doc(Rational64::new(2, 4)), "1/2");
    }

    #[test]
    fn malformed_unit_embedding_is_rejected() {
        // drop the identity compositions so no unit arrow can be inferred
        let g = zoo::cyclic_group_groupoid(2);
        let mut doc = groupoid_to_doc(&g);
        doc.compose.retain(|[a, b, _]| a != "g0" && b != "g0");
        assert!(matches!(build_groupoid(&doc), Err(IoError::Semantic(_))));
    }
}
