//! Abstract 2-coloured simplicial complexes stored by their facets.
//!
//! Only maximal faces are kept; every nonempty subset of a facet is a face.
//! The shell bookkeeping used by the recursive build ([`ShellResult`]) lives
//! here as well, since cloning a vertex is defined relative to the interior
//! boundary of a shell.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::setkit::LabelSet;

pub type VertexId = u32;

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Colour {
    Black,
    White,
}

impl Colour {
    pub fn flip(self) -> Colour {
        match self {
            Colour::Black => Colour::White,
            Colour::White => Colour::Black,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Colour::Black => "black",
            Colour::White => "white",
        }
    }

    pub fn prefix(self) -> char {
        match self {
            Colour::Black => 'b',
            Colour::White => 'w',
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Temporary vertices are the short-lived clones that get contracted away
/// before a shell is finished.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Tag {
    Permanent,
    Temporary,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VertexRef {
    pub id: VertexId,
    pub label: LabelSet,
    pub colour: Colour,
    pub tag: Tag,
}

impl VertexRef {
    pub fn new(id: VertexId, label: LabelSet, colour: Colour) -> Self {
        VertexRef {
            id,
            label,
            colour,
            tag: Tag::Permanent,
        }
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.colour.prefix(), self.label)?;
        if self.tag == Tag::Temporary {
            f.write_str("*")?;
        }
        Ok(())
    }
}

/// A nonempty, strictly increasing list of vertex ids.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Face(Vec<VertexId>);

impl Face {
    pub fn new<I: IntoIterator<Item = VertexId>>(ids: I) -> Self {
        let mut v: Vec<VertexId> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Face(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.0
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// All subfaces with exactly `size` vertices.
    pub fn subsets_of_size(&self, size: usize) -> Vec<Face> {
        let mut out = Vec::new();
        if size == 0 || size > self.0.len() {
            return out;
        }
        let n = self.0.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(Face(idx.iter().map(|&i| self.0[i]).collect()));
            let Some(i) = (0..size).rev().find(|&i| idx[i] < i + n - size) else {
                return out;
            };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

impl Deref for Face {
    type Target = [VertexId];
    fn deref(&self) -> &[VertexId] {
        &self.0
    }
}

fn is_sorted_subset(a: &[VertexId], b: &[VertexId]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Drops duplicates and faces contained in another face; returns the maximal
/// ones sorted.
pub fn maximal_faces(faces: Vec<Face>) -> Vec<Face> {
    let mut faces: Vec<Face> = faces.into_iter().filter(|f| !f.0.is_empty()).collect();
    faces.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.cmp(b)));
    faces.dedup();
    let mut kept: Vec<Face> = Vec::with_capacity(faces.len());
    let mut by_vertex: HashMap<VertexId, Vec<usize>> = HashMap::new();
    for f in faces {
        let absorbed = f
            .0
            .iter()
            .filter_map(|v| by_vertex.get(v))
            .min_by_key(|l| l.len())
            .is_some_and(|list| list.iter().any(|&i| f.is_subset_of(&kept[i])));
        // A vertex that occurs in no kept facet means f cannot be absorbed.
        let absorbed = absorbed && f.0.iter().all(|v| by_vertex.contains_key(v));
        if !absorbed {
            let i = kept.len();
            for &v in &f.0 {
                by_vertex.entry(v).or_default().push(i);
            }
            kept.push(f);
        }
    }
    kept.sort();
    kept
}

#[derive(Clone, Debug, Default)]
pub struct TwoColouredComplex {
    vertices: BTreeMap<VertexId, VertexRef>,
    facets: Vec<Face>,
    antipode: Option<BTreeMap<VertexId, VertexId>>,
    next_id: VertexId,
}

impl TwoColouredComplex {
    pub fn new() -> Self {
        TwoColouredComplex {
            next_id: 1,
            ..Default::default()
        }
    }

    /// Builds a complex from declared vertices and a face list; non-maximal
    /// faces are absorbed.
    pub fn from_facets<I, F>(vertices: Vec<VertexRef>, facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = VertexId>,
    {
        let mut k = TwoColouredComplex::new();
        for v in vertices {
            if k.vertices.contains_key(&v.id) {
                return Err(Error::Structural(format!("duplicate vertex id {}", v.id)));
            }
            k.next_id = k.next_id.max(v.id + 1);
            k.vertices.insert(v.id, v);
        }
        let mut faces = Vec::new();
        for f in facets {
            let face = Face::new(f);
            if face.0.is_empty() {
                return Err(Error::Structural("empty facet".into()));
            }
            if let Some(bad) = face.0.iter().find(|v| !k.vertices.contains_key(v)) {
                return Err(Error::Structural(format!("facet references unknown vertex {bad}")));
            }
            faces.push(face);
        }
        k.facets = maximal_faces(faces);
        Ok(k)
    }

    pub fn add_vertex(&mut self, label: LabelSet, colour: Colour, tag: Tag) -> VertexId {
        let id = self.next_id.max(1);
        self.next_id = id + 1;
        self.vertices.insert(id, VertexRef { id, label, colour, tag });
        id
    }

    pub fn vertex(&self, id: VertexId) -> Option<&VertexRef> {
        self.vertices.get(&id)
    }

    pub(crate) fn vertex_mut(&mut self, id: VertexId) -> Option<&mut VertexRef> {
        self.vertices.get_mut(&id)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexRef> {
        self.vertices.values()
    }

    pub fn vertex_ids(&self) -> BTreeSet<VertexId> {
        self.vertices.keys().copied().collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.facets.iter().map(Face::dim).max()
    }

    pub fn colour(&self, id: VertexId) -> Colour {
        self.vertices[&id].colour
    }

    pub fn label(&self, id: VertexId) -> &LabelSet {
        &self.vertices[&id].label
    }

    /// Looks up the permanent vertex with the given label and colour.
    pub fn find(&self, label: &LabelSet, colour: Colour) -> Option<VertexId> {
        self.vertices
            .values()
            .find(|v| v.tag == Tag::Permanent && v.colour == colour && &v.label == label)
            .map(|v| v.id)
    }

    /// `(colour, label) -> id` over permanent vertices. Fails on a repeated pair.
    pub fn label_index(&self) -> Result<HashMap<(Colour, LabelSet), VertexId>> {
        let mut out = HashMap::new();
        for v in self.vertices.values().filter(|v| v.tag == Tag::Permanent) {
            if out.insert((v.colour, v.label.clone()), v.id).is_some() {
                return Err(Error::Structural(format!("two {} vertices labelled {}", v.colour, v.label)));
            }
        }
        Ok(out)
    }

    pub fn display_vertex(&self, id: VertexId) -> String {
        self.vertices
            .get(&id)
            .map_or_else(|| format!("#{id}"), |v| v.to_string())
    }

    pub fn display_face(&self, face: &[VertexId]) -> String {
        let parts: Vec<String> = face.iter().map(|&v| self.display_vertex(v)).collect();
        format!("[{}]", parts.join(" "))
    }

    /// Every `d`-dimensional face, deduplicated and sorted.
    pub fn faces_of_dim(&self, d: usize) -> Vec<Face> {
        let set: BTreeSet<Face> = self
            .facets
            .iter()
            .flat_map(|f| f.subsets_of_size(d + 1))
            .collect();
        set.into_iter().collect()
    }

    /// Number of faces in each dimension, starting at 0.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = match self.dimension() {
            Some(d) => d,
            None => return Vec::new(),
        };
        (0..=top).map(|d| self.faces_of_dim(d).len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    pub fn is_face(&self, face: &[VertexId]) -> bool {
        let mut f = face.to_vec();
        f.sort_unstable();
        f.dedup();
        !f.is_empty() && self.facets.iter().any(|g| is_sorted_subset(&f, g))
    }

    /// Facets that contain `v`.
    pub fn star_facets(&self, v: VertexId) -> impl Iterator<Item = &Face> {
        self.facets.iter().filter(move |f| f.contains(v))
    }

    /// Vertices adjacent to `v` through an edge.
    pub fn neighbours(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.star_facets(v)
            .flat_map(|f| f.0.iter().copied())
            .filter(|&u| u != v)
            .collect()
    }

    /// Faces of the complex contained in `x`, re-maximalised.
    pub fn induced_subcomplex(&self, x: &BTreeSet<VertexId>) -> TwoColouredComplex {
        let faces = self
            .facets
            .iter()
            .map(|f| Face(f.0.iter().copied().filter(|v| x.contains(v)).collect()))
            .collect();
        let mut out = TwoColouredComplex {
            vertices: self
                .vertices
                .iter()
                .filter(|(id, _)| x.contains(id))
                .map(|(id, v)| (*id, v.clone()))
                .collect(),
            facets: maximal_faces(faces),
            antipode: None,
            next_id: self.next_id,
        };
        if let Some(a) = &self.antipode {
            if x.iter().all(|v| a.get(v).is_some_and(|w| x.contains(w))) {
                out.antipode = Some(a.iter().filter(|(v, _)| x.contains(v)).map(|(v, w)| (*v, *w)).collect());
            }
        }
        out
    }

    /// Removes the given vertices together with every face touching them.
    pub fn without_vertices(&self, y: &BTreeSet<VertexId>) -> TwoColouredComplex {
        let keep: BTreeSet<VertexId> = self.vertices.keys().copied().filter(|v| !y.contains(v)).collect();
        self.induced_subcomplex(&keep)
    }

    pub(crate) fn add_faces<I: IntoIterator<Item = Face>>(&mut self, faces: I) {
        let mut all = std::mem::take(&mut self.facets);
        all.extend(faces);
        self.facets = maximal_faces(all);
    }

    /// Contracts the edge `{keep, remove}`: `remove` is merged into `keep`,
    /// which takes the survivor label. Faces that coincide afterwards are
    /// merged.
    pub fn contract_edge(&mut self, keep: VertexId, remove: VertexId, survivor_label: LabelSet) -> Result<()> {
        let (cu, cv) = match (self.vertices.get(&keep), self.vertices.get(&remove)) {
            (Some(a), Some(b)) => (a.colour, b.colour),
            _ => return Err(Error::Precondition(format!("contraction of unknown vertices {keep},{remove}"))),
        };
        if keep == remove {
            return Err(Error::Precondition("cannot contract a vertex with itself".into()));
        }
        if cu != cv {
            return Err(Error::Precondition(format!(
                "edge {} {} is bichromatic",
                self.display_vertex(keep),
                self.display_vertex(remove)
            )));
        }
        if !self.is_face(&[keep, remove]) {
            return Err(Error::Precondition(format!(
                "{} and {} are not adjacent",
                self.display_vertex(keep),
                self.display_vertex(remove)
            )));
        }
        let faces = std::mem::take(&mut self.facets)
            .into_iter()
            .map(|f| Face::new(f.0.into_iter().map(|v| if v == remove { keep } else { v })))
            .collect();
        self.facets = maximal_faces(faces);
        self.vertices.remove(&remove);
        let w = self.vertices.get_mut(&keep).expect("checked above");
        w.label = survivor_label;
        if let Some(a) = self.antipode.take() {
            // The involution no longer makes sense once a vertex disappears.
            drop(a);
        }
        Ok(())
    }

    /// Adds `σ ∪ {apex}` for every face `σ` of `sub` (and the apex itself).
    pub fn join_with_vertex(&mut self, apex: VertexId, sub: &TwoColouredComplex) -> Result<()> {
        if !self.vertices.contains_key(&apex) {
            return Err(Error::Precondition(format!("apex {apex} is not a vertex")));
        }
        if sub.vertices.contains_key(&apex) {
            return Err(Error::Precondition(format!(
                "apex {} belongs to the joined complex",
                self.display_vertex(apex)
            )));
        }
        if let Some(v) = sub.vertices.keys().find(|v| !self.vertices.contains_key(v)) {
            return Err(Error::Precondition(format!("joined vertex {v} is not in the complex")));
        }
        let mut new_faces: Vec<Face> = sub
            .facets
            .iter()
            .map(|f| Face::new(f.0.iter().copied().chain(std::iter::once(apex))))
            .collect();
        new_faces.push(Face(vec![apex]));
        self.add_faces(new_faces);
        Ok(())
    }

    /// Glues `other` onto `self`, identifying each key of `ident` (a vertex
    /// of `other`) with its value (a vertex of `self`). The identification
    /// must be an isomorphism between the induced subcomplexes on its domain
    /// and image. Returns the glued complex and where each vertex of `other`
    /// ended up.
    pub fn union_identify(
        &self,
        other: &TwoColouredComplex,
        ident: &BTreeMap<VertexId, VertexId>,
    ) -> Result<(TwoColouredComplex, BTreeMap<VertexId, VertexId>)> {
        check_identification(self, other, ident)?;
        let dom: BTreeSet<VertexId> = ident.keys().copied().collect();
        let img: BTreeSet<VertexId> = ident.values().copied().collect();
        let sub_other = other.induced_subcomplex(&dom);
        let sub_self = self.induced_subcomplex(&img);
        if !check_isomorphism(&sub_other, &sub_self, ident) {
            return Err(Error::Structural(
                "identification is not an isomorphism of induced subcomplexes".into(),
            ));
        }
        self.union_along(other, ident, sub_other.facets())
    }

    /// Glues `other` onto `self` along `seam`, a list of faces of `other`
    /// inside the domain of `ident`. Every seam face must map onto a face of
    /// `self`; any other face of `other` spanned by identified vertices must
    /// map onto a non-face, so no two distinct faces are merged.
    pub fn union_along(
        &self,
        other: &TwoColouredComplex,
        ident: &BTreeMap<VertexId, VertexId>,
        seam: &[Face],
    ) -> Result<(TwoColouredComplex, BTreeMap<VertexId, VertexId>)> {
        check_identification(self, other, ident)?;
        let map_face = |f: &Face| Face::new(f.0.iter().map(|v| ident[v]));
        for f in seam {
            if f.0.iter().any(|v| !ident.contains_key(v)) || !other.is_face(f) {
                return Err(Error::Structural(format!("seam face {} is not identified", other.display_face(f))));
            }
            if !self.is_face(&map_face(f)) {
                return Err(Error::Structural(format!(
                    "seam face {} has no counterpart",
                    other.display_face(f)
                )));
            }
        }
        let seam_faces: HashSet<Face> = seam.iter().flat_map(all_subfaces).collect();
        let dom: BTreeSet<VertexId> = ident.keys().copied().collect();
        for f in other.induced_subcomplex(&dom).facets.iter() {
            for sub in all_subfaces(f) {
                if !seam_faces.contains(&sub) && self.is_face(&map_face(&sub)) {
                    return Err(Error::Structural(format!(
                        "face {} would be merged with an existing face",
                        other.display_face(&sub)
                    )));
                }
            }
        }
        let mut out = self.clone();
        out.antipode = None;
        let mut map = ident.clone();
        for v in other.vertices.values() {
            if !ident.contains_key(&v.id) {
                let id = out.add_vertex(v.label.clone(), v.colour, v.tag);
                map.insert(v.id, id);
            }
        }
        let faces: Vec<Face> = other.facets.iter().map(|f| Face::new(f.0.iter().map(|v| map[v]))).collect();
        out.add_faces(faces);
        Ok((out, map))
    }

    /// Colour-inverted copy with fresh ids (labels kept).
    pub fn mirror_with_colour_swap(&self) -> (TwoColouredComplex, BTreeMap<VertexId, VertexId>) {
        let mut out = TwoColouredComplex::new();
        let mut map = BTreeMap::new();
        for v in self.vertices.values() {
            let id = out.add_vertex(v.label.clone(), v.colour.flip(), v.tag);
            map.insert(v.id, id);
        }
        out.facets = maximal_faces(self.facets.iter().map(|f| Face::new(f.0.iter().map(|v| map[v]))).collect());
        if let Some(a) = &self.antipode {
            out.antipode = Some(a.iter().map(|(v, w)| (map[v], map[w])).collect());
        }
        (out, map)
    }

    /// Same complex with ids `1..=N` assigned in `(colour, label)` order.
    pub fn canonicalized(&self) -> (TwoColouredComplex, BTreeMap<VertexId, VertexId>) {
        let mut order: Vec<&VertexRef> = self.vertices.values().collect();
        order.sort_by(|a, b| (a.colour, &a.label, a.id).cmp(&(b.colour, &b.label, b.id)));
        let map: BTreeMap<VertexId, VertexId> = order.iter().enumerate().map(|(i, v)| (v.id, i as VertexId + 1)).collect();
        let mut out = TwoColouredComplex::new();
        for v in order {
            out.vertices.insert(
                map[&v.id],
                VertexRef {
                    id: map[&v.id],
                    ..v.clone()
                },
            );
        }
        out.next_id = out.vertices.len() as VertexId + 1;
        out.facets = maximal_faces(self.facets.iter().map(|f| Face::new(f.0.iter().map(|v| map[v]))).collect());
        if let Some(a) = &self.antipode {
            out.antipode = Some(a.iter().map(|(v, w)| (map[v], map[w])).collect());
        }
        (out, map)
    }

    pub fn antipode(&self) -> Option<&BTreeMap<VertexId, VertexId>> {
        self.antipode.as_ref()
    }

    /// Installs an antipodal map. It must be a fixed-point-free involution on
    /// the whole vertex set that swaps colours.
    pub fn set_antipode(&mut self, map: BTreeMap<VertexId, VertexId>) -> Result<()> {
        for v in self.vertices.keys() {
            let w = *map
                .get(v)
                .ok_or_else(|| Error::Structural(format!("antipode undefined at {}", self.display_vertex(*v))))?;
            if w == *v {
                return Err(Error::Structural(format!("antipode fixes {}", self.display_vertex(*v))));
            }
            if map.get(&w) != Some(v) {
                return Err(Error::Structural(format!("antipode is not an involution at {}", self.display_vertex(*v))));
            }
            if !self.vertices.contains_key(&w) {
                return Err(Error::Structural(format!("antipode leaves the vertex set at {w}")));
            }
            if self.colour(w) == self.colour(*v) {
                return Err(Error::Structural(format!("antipode keeps the colour of {}", self.display_vertex(*v))));
            }
        }
        self.antipode = Some(map);
        Ok(())
    }

    /// Installs the antipode without checking it; used by fixtures that need
    /// a broken involution.
    pub fn set_antipode_unchecked(&mut self, map: BTreeMap<VertexId, VertexId>) {
        self.antipode = Some(map);
    }

    /// Pairs every permanent `(label, colour)` vertex with `(label, flip)`.
    pub fn antipode_by_label(&self) -> Result<BTreeMap<VertexId, VertexId>> {
        let index = self.label_index()?;
        let mut map = BTreeMap::new();
        for v in self.vertices.values() {
            let w = index.get(&(v.colour.flip(), v.label.clone())).ok_or_else(|| {
                Error::Structural(format!("{v} has no partner of the opposite colour"))
            })?;
            map.insert(v.id, *w);
        }
        Ok(map)
    }
}

fn all_subfaces(f: &Face) -> Vec<Face> {
    (1..=f.len()).flat_map(|s| f.subsets_of_size(s)).collect()
}

fn check_identification(
    k1: &TwoColouredComplex,
    k2: &TwoColouredComplex,
    ident: &BTreeMap<VertexId, VertexId>,
) -> Result<()> {
    let mut seen = HashSet::new();
    for (&a, &b) in ident {
        let (va, vb) = match (k2.vertices.get(&a), k1.vertices.get(&b)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::Structural(format!("identification {a}->{b} uses unknown vertices"))),
        };
        if !seen.insert(b) {
            return Err(Error::Structural(format!("identification is not injective at {b}")));
        }
        if va.colour != vb.colour || va.label != vb.label {
            return Err(Error::Structural(format!("identification {va} -> {vb} changes colour or label")));
        }
    }
    Ok(())
}

/// True iff `phi` is a colour-preserving bijection `V(k1) -> V(k2)` mapping
/// the facets of `k1` exactly onto the facets of `k2`.
pub fn check_isomorphism(k1: &TwoColouredComplex, k2: &TwoColouredComplex, phi: &BTreeMap<VertexId, VertexId>) -> bool {
    if k1.vertices.len() != k2.vertices.len() || phi.len() != k1.vertices.len() {
        return false;
    }
    let mut image = HashSet::new();
    for v in k1.vertices.values() {
        let Some(&w) = phi.get(&v.id) else { return false };
        let Some(wv) = k2.vertices.get(&w) else { return false };
        if wv.colour != v.colour || !image.insert(w) {
            return false;
        }
    }
    let mut mapped: Vec<Face> = k1.facets.iter().map(|f| Face::new(f.0.iter().map(|v| phi[v]))).collect();
    mapped.sort();
    mapped == k2.facets
}

/// A complex under construction whose exterior boundary is a fixed copy of a
/// sphere and whose interior boundary moves inwards as clones are added.
///
/// The interior boundary is recovered from the faces: a codimension-one face
/// that lies in exactly one top-dimensional facet and is not on the exterior
/// sphere faces the interior, and so does an exterior face that no
/// top-dimensional facet covers yet.
#[derive(Clone, Debug)]
pub struct ShellResult {
    pub complex: TwoColouredComplex,
    pub interior_boundary: BTreeSet<VertexId>,
    pub exterior_boundary: BTreeSet<VertexId>,
    exterior_faces: HashSet<Face>,
    boundary_dim: usize,
}

impl ShellResult {
    /// A zero-thickness shell: both boundaries are the given sphere.
    pub fn from_sphere(sphere: &TwoColouredComplex) -> Result<Self> {
        let d = sphere
            .dimension()
            .ok_or_else(|| Error::Precondition("cannot thicken an empty complex".into()))?;
        if sphere.facets.iter().any(|f| f.dim() != d) {
            return Err(Error::Precondition("exterior boundary must be pure".into()));
        }
        let mut complex = sphere.clone();
        complex.antipode = None;
        let ids = complex.vertex_ids();
        Ok(ShellResult {
            exterior_faces: sphere.facets.iter().cloned().collect(),
            complex,
            interior_boundary: ids.clone(),
            exterior_boundary: ids,
            boundary_dim: d,
        })
    }

    pub fn boundary_dim(&self) -> usize {
        self.boundary_dim
    }

    /// Facets of the exterior sphere, sorted.
    pub fn exterior_facets(&self) -> Vec<Face> {
        let mut v: Vec<Face> = self.exterior_faces.iter().cloned().collect();
        v.sort();
        v
    }

    /// `IB` as a complex: the subcomplex induced on the interior boundary.
    pub fn interior_complex(&self) -> TwoColouredComplex {
        self.complex.induced_subcomplex(&self.interior_boundary)
    }

    pub fn exterior_complex(&self) -> TwoColouredComplex {
        self.complex.induced_subcomplex(&self.exterior_boundary)
    }

    /// Codimension-one faces on the interior side, computed from incidences.
    pub fn interior_boundary_faces(&self) -> BTreeSet<Face> {
        let d = self.boundary_dim;
        let mut count: HashMap<Face, usize> = HashMap::new();
        let mut thin = Vec::new();
        for f in &self.complex.facets {
            if f.dim() == d + 1 {
                for s in f.subsets_of_size(d + 1) {
                    *count.entry(s).or_default() += 1;
                }
            } else if f.dim() == d {
                thin.push(f.clone());
            }
        }
        let mut out: BTreeSet<Face> = count
            .into_iter()
            .filter(|(f, c)| *c == 1 && !self.exterior_faces.contains(f))
            .map(|(f, _)| f)
            .collect();
        out.extend(thin);
        out
    }

    /// Recomputes the interior boundary vertex set from the faces.
    pub fn recompute_interior(&mut self) {
        self.interior_boundary = self
            .interior_boundary_faces()
            .into_iter()
            .flat_map(Face::into_vec)
            .collect();
    }

    /// Adds a clone `v*` of the interior-boundary vertex `v`: for every face
    /// `σ ∋ v` of the interior boundary the face `σ ∪ {v*}` is added, and `v*`
    /// takes the place of `v` on the interior boundary.
    pub fn add_clone(&mut self, v: VertexId, label: LabelSet, tag: Tag) -> Result<VertexId> {
        if !self.interior_boundary.contains(&v) {
            return Err(Error::Precondition(format!(
                "{} is not on the interior boundary",
                self.complex.display_vertex(v)
            )));
        }
        let colour = self.complex.colour(v);
        let star: Vec<Vec<VertexId>> = self
            .complex
            .star_facets(v)
            .map(|f| f.0.iter().copied().filter(|u| self.interior_boundary.contains(u)).collect())
            .collect();
        let clone = self.complex.add_vertex(label, colour, tag);
        self.complex
            .add_faces(star.into_iter().map(|s| Face::new(s.into_iter().chain(std::iter::once(clone)))));
        self.interior_boundary.remove(&v);
        self.interior_boundary.insert(clone);
        Ok(clone)
    }

    /// Contracts `{keep, remove}` and recomputes the interior boundary.
    /// `remove` must not lie on the exterior boundary.
    pub fn contract_edge(&mut self, keep: VertexId, remove: VertexId, survivor_label: LabelSet) -> Result<()> {
        if self.exterior_boundary.contains(&remove) {
            return Err(Error::Precondition(format!(
                "{} lies on the exterior boundary",
                self.complex.display_vertex(remove)
            )));
        }
        self.complex.contract_edge(keep, remove, survivor_label)?;
        self.recompute_interior();
        Ok(())
    }

    pub fn join_with_vertex(&mut self, apex: VertexId, sub: &TwoColouredComplex) -> Result<()> {
        self.complex.join_with_vertex(apex, sub)?;
        self.recompute_interior();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(id: VertexId, label: &[u32], colour: Colour) -> VertexRef {
        VertexRef::new(id, LabelSet::from(label), colour)
    }

    fn cycle(len: u32) -> TwoColouredComplex {
        let verts = (1..=len)
            .map(|i| v(i, &[i], if i % 2 == 1 { Colour::Black } else { Colour::White }))
            .collect();
        TwoColouredComplex::from_facets(verts, (1..=len).map(|i| vec![i, i % len + 1])).unwrap()
    }

    #[test]
    fn single_edge() {
        let k = TwoColouredComplex::from_facets(
            vec![v(1, &[1], Colour::Black), v(2, &[2], Colour::White)],
            [[1, 2]],
        )
        .unwrap();
        assert_eq!(k.dimension(), Some(1));
        assert_eq!(k.faces_of_dim(1).len(), 1);
    }

    #[test]
    fn hexagon_euler() {
        assert_eq!(cycle(6).euler_characteristic(), 0);
        assert_eq!(cycle(14).faces_of_dim(1).len(), 14);
    }

    #[test]
    fn absorption() {
        let verts = (1..=3).map(|i| v(i, &[i], Colour::Black)).collect();
        let k = TwoColouredComplex::from_facets(verts, vec![vec![1, 2], vec![1, 2, 3]]).unwrap();
        assert_eq!(k.facets(), &[Face::new([1, 2, 3])]);
        assert_eq!(k.faces_of_dim(1).len(), 3);
    }

    #[test]
    fn dangling_vertex_rejected() {
        let err = TwoColouredComplex::from_facets(vec![v(1, &[1], Colour::Black)], [[1, 2]]).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
    }

    #[test]
    fn induced() {
        let verts = (1..=4).map(|i| v(i, &[i], Colour::Black)).collect();
        let k = TwoColouredComplex::from_facets(verts, vec![vec![1, 2, 3], vec![2, 3, 4]]).unwrap();
        let s = k.induced_subcomplex(&[1, 2, 3].into_iter().collect());
        assert_eq!(s.facets(), &[Face::new([1, 2, 3])]);
        assert!(k.induced_subcomplex(&BTreeSet::new()).is_empty());
        let s = k.induced_subcomplex(&[1, 4].into_iter().collect());
        assert_eq!(s.facets(), &[Face::new([1]), Face::new([4])]);
    }

    #[test]
    fn contraction_worked_example() {
        // Maximal faces xu, xv, uvy with u,v black and x,y white.
        let (x, u, vv, y) = (1, 2, 3, 4);
        let mut k = TwoColouredComplex::from_facets(
            vec![
                v(x, &[1], Colour::White),
                v(u, &[2], Colour::Black),
                v(vv, &[3], Colour::Black),
                v(y, &[4], Colour::White),
            ],
            vec![vec![x, u], vec![x, vv], vec![u, vv, y]],
        )
        .unwrap();
        k.contract_edge(u, vv, LabelSet::from([9])).unwrap();
        assert_eq!(k.facets(), &[Face::new([x, u]), Face::new([u, y])]);
        assert_eq!(k.label(u), &LabelSet::from([9]));
        assert!(k.vertex(vv).is_none());
    }

    #[test]
    fn contraction_of_triangle() {
        let mut k = TwoColouredComplex::from_facets(
            vec![v(1, &[1], Colour::Black), v(2, &[2], Colour::Black), v(3, &[3], Colour::White)],
            [[1, 2, 3]],
        )
        .unwrap();
        k.contract_edge(1, 2, LabelSet::from([1])).unwrap();
        assert_eq!(k.facets(), &[Face::new([1, 3])]);
    }

    #[test]
    fn contraction_preconditions() {
        let mut k = cycle(6);
        assert!(matches!(k.contract_edge(1, 2, LabelSet::from([1])), Err(Error::Precondition(_))));
        assert!(matches!(k.contract_edge(1, 3, LabelSet::from([1])), Err(Error::Precondition(_))));
    }

    #[test]
    fn cone_over_hexagon() {
        let mut k = cycle(6);
        let hex = k.clone();
        let apex = k.add_vertex(LabelSet::from([7]), Colour::Black, Tag::Permanent);
        k.join_with_vertex(apex, &hex).unwrap();
        assert_eq!(k.faces_of_dim(2).len(), 6);
        assert_eq!(k.neighbours(apex).len(), 6);
        assert!(k.join_with_vertex(1, &hex).is_err());
    }

    #[test]
    fn join_with_path() {
        let mut k = cycle(6);
        let path = k.induced_subcomplex(&[1, 2, 3].into_iter().collect());
        let apex = k.add_vertex(LabelSet::from([8]), Colour::Black, Tag::Permanent);
        let before: usize = (1..=2).map(|d| k.faces_of_dim(d).len()).sum();
        k.join_with_vertex(apex, &path).unwrap();
        let after: usize = (1..=2).map(|d| k.faces_of_dim(d).len()).sum();
        // apex joined with 3 vertices, 2 edges: 3 new edges and 2 triangles.
        assert_eq!(after - before, 5);
    }

    fn two_cones() -> TwoColouredComplex {
        let mut a = cycle(6);
        let hex = a.clone();
        let top = a.add_vertex(LabelSet::from([7]), Colour::Black, Tag::Permanent);
        a.join_with_vertex(top, &hex).unwrap();
        let mut b = cycle(6);
        let bottom = b.add_vertex(LabelSet::from([7]), Colour::White, Tag::Permanent);
        b.join_with_vertex(bottom, &hex).unwrap();
        let ident = (1..=6).map(|i| (i, i)).collect();
        a.union_identify(&b, &ident).unwrap().0
    }

    #[test]
    fn glued_cones_are_a_sphere_count() {
        let s = two_cones();
        assert_eq!(s.num_vertices(), 8);
        assert_eq!(s.f_vector(), vec![8, 18, 12]);
        assert_eq!(s.euler_characteristic(), 2);
    }

    #[test]
    fn union_along_nothing_is_disjoint() {
        let a = cycle(6);
        let (u, map) = a.union_identify(&a, &BTreeMap::new()).unwrap();
        assert_eq!(u.num_vertices(), 12);
        assert_eq!(u.facets().len(), 12);
        assert_eq!(map.len(), 6);
    }

    #[test]
    fn union_rejects_non_isomorphism() {
        let a = cycle(6);
        // 1 and 3 are not adjacent in a; 1,2 are. Map b's {1,2} edge onto {1,3}.
        let mut b = cycle(6);
        b.vertex_mut(2).unwrap().colour = Colour::Black;
        b.vertex_mut(2).unwrap().label = LabelSet::from([3]);
        let ident = [(1, 1), (2, 3)].into_iter().collect();
        assert!(a.union_identify(&b, &ident).is_err());
    }

    #[test]
    fn isomorphism_checks() {
        let c = cycle(10);
        let id: BTreeMap<_, _> = c.vertex_ids().into_iter().map(|v| (v, v)).collect();
        assert!(check_isomorphism(&c, &c, &id));
        let rot: BTreeMap<_, _> = (1..=10).map(|v| (v, v % 10 + 1)).collect();
        assert!(!check_isomorphism(&c, &c, &rot));
        let rot2: BTreeMap<_, _> = (1..=10).map(|v| (v, (v + 1) % 10 + 1)).collect();
        assert!(check_isomorphism(&c, &c, &rot2));
    }

    #[test]
    fn mirror() {
        let e = TwoColouredComplex::from_facets(
            vec![v(1, &[1], Colour::Black), v(2, &[2], Colour::Black)],
            [[1, 2]],
        )
        .unwrap();
        let (m, _) = e.mirror_with_colour_swap();
        assert!(m.vertices().all(|v| v.colour == Colour::White));
        let c = cycle(6);
        let (m1, f1) = c.mirror_with_colour_swap();
        let (m2, f2) = m1.mirror_with_colour_swap();
        let phi = f1.iter().map(|(a, b)| (*a, f2[b])).collect();
        assert!(check_isomorphism(&c, &m2, &phi));
        assert!(!check_isomorphism(&c, &m1, &f1));
    }

    #[test]
    fn antipode_validation() {
        let mut c = cycle(6);
        let good = (1..=6).map(|v| (v, (v + 2) % 6 + 1)).collect();
        c.set_antipode(good).unwrap();
        let bad = (1..=6).map(|v| (v, v % 6 + 1)).collect();
        assert!(c.set_antipode(bad).is_err());
    }

    #[test]
    fn clone_on_single_edge() {
        let edge = TwoColouredComplex::from_facets(
            vec![v(1, &[1], Colour::White), v(2, &[2], Colour::Black)],
            [[1, 2]],
        )
        .unwrap();
        let mut sh = ShellResult::from_sphere(&edge).unwrap();
        let star = sh.add_clone(2, LabelSet::from([3]), Tag::Permanent).unwrap();
        assert_eq!(sh.complex.facets(), &[Face::new([1, 2, star])]);
        assert_eq!(sh.interior_boundary, [1, star].into_iter().collect());
        assert!(sh.complex.is_face(&[2, star]));
        assert_eq!(sh.exterior_boundary, [1, 2].into_iter().collect());
    }

    #[test]
    fn clone_requires_interior_vertex() {
        let mut sh = ShellResult::from_sphere(&cycle(10)).unwrap();
        sh.add_clone(1, LabelSet::from([1]), Tag::Permanent).unwrap();
        assert!(matches!(
            sh.add_clone(1, LabelSet::from([1]), Tag::Permanent),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn clone_update_matches_recount() {
        // Clone any sequence of interior vertices of a 10-cycle: the rule
        // "v* replaces v" agrees with the incidence recount every time.
        for start in 1..=10u32 {
            let mut sh = ShellResult::from_sphere(&cycle(10)).unwrap();
            let ext = sh.exterior_boundary.clone();
            let mut order: Vec<u32> = (0..10).map(|i| (start + 3 * i - 1) % 10 + 1).collect();
            order.dedup();
            for v in order {
                if !sh.interior_boundary.contains(&v) {
                    continue;
                }
                sh.add_clone(v, LabelSet::from([v + 20]), Tag::Permanent).unwrap();
                let rule = sh.interior_boundary.clone();
                sh.recompute_interior();
                assert_eq!(rule, sh.interior_boundary);
                assert_eq!(sh.exterior_boundary, ext);
                let ib = sh.interior_complex();
                assert_eq!(ib.facets().len(), 10);
                assert!(ib.facets().iter().all(|f| f.dim() == 1));
            }
        }
    }

    #[test]
    fn subsets() {
        let f = Face::new([1, 2, 3, 4]);
        assert_eq!(f.subsets_of_size(2).len(), 6);
        assert_eq!(f.subsets_of_size(4), vec![f.clone()]);
        assert_eq!(f.subsets_of_size(1).len(), 4);
        assert!(f.subsets_of_size(5).is_empty());
    }
}
