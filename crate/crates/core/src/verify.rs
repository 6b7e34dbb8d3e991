//! Checks of the structural claims about `Q(n, k)`: sphere recognition,
//! antisymmetry, the colour and label conditions, properties (P1)-(P3), the
//! antipodal quotient, and the interior boundary of shells.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::complex::{Colour, Face, ShellResult, TwoColouredComplex, VertexId};
use crate::construct::{build_sphere, expected_interior_labels, interior_boundary_isomorphism};
use crate::error::{Error, Result};
use crate::graphs::{quotient_graph, schrijver_graph, is_spanning_subgraph, QuotientGraph};
use crate::setkit::{core, enumerate_vertex_sets, is_singular, level, LabelSet};

/// Offending faces, edges or vertices of a failed check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub ids: Vec<u32>,
    pub note: String,
}

impl Witness {
    pub fn new(ids: impl IntoIterator<Item = u32>, note: impl Into<String>) -> Self {
        Witness {
            ids: ids.into_iter().collect(),
            note: note.into(),
        }
    }

    fn on(k: &TwoColouredComplex, ids: &[VertexId], note: impl fmt::Display) -> Self {
        Witness {
            ids: ids.to_vec(),
            note: format!("{note}: {}", k.display_face(ids)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass(String),
    Fail(Witness),
}

impl Outcome {
    pub fn passed(&self) -> bool {
        matches!(self, Outcome::Pass(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Outcome::Fail(w) => Some(w),
            Outcome::Pass(_) => None,
        }
    }
}

fn fail<T>(w: Witness) -> std::result::Result<T, Outcome> {
    Err(Outcome::Fail(w))
}

fn settle(r: std::result::Result<String, Outcome>) -> Outcome {
    match r {
        Ok(detail) => Outcome::Pass(detail),
        Err(o) => o,
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub outcome: Outcome,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub results: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.outcome.passed())
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.name == name)
    }

    /// One line per check: `PASS name  detail` or `FAIL name  witness`.
    pub fn render_text(&self) -> String {
        self.render_text_with(false)
    }

    /// As [`render_text`](Self::render_text), with per-check wall time if asked.
    pub fn render_text_with(&self, timings: bool) -> String {
        let mut out = String::new();
        for r in &self.results {
            let (tag, text) = match &r.outcome {
                Outcome::Pass(d) => ("PASS", d.as_str()),
                Outcome::Fail(w) => ("FAIL", w.note.as_str()),
            };
            if timings {
                let ms = r.elapsed.as_secs_f64() * 1000.0;
                out.push_str(&format!("{tag} {:<16} {ms:>9.1}ms  {text}\n", r.name));
            } else {
                out.push_str(&format!("{tag} {:<16} {text}\n", r.name));
            }
        }
        out
    }

    /// `name.status=pass|fail`, `name.detail=...`, `name.witness=1,2,3`.
    pub fn render_kv(&self) -> String {
        self.render_kv_with(false)
    }

    pub fn render_kv_with(&self, timings: bool) -> String {
        let mut out = String::new();
        for r in &self.results {
            match &r.outcome {
                Outcome::Pass(d) => {
                    out.push_str(&format!("{}.status=pass\n{}.detail={d}\n", r.name, r.name));
                }
                Outcome::Fail(w) => {
                    let ids: Vec<String> = w.ids.iter().map(u32::to_string).collect();
                    out.push_str(&format!(
                        "{}.status=fail\n{}.detail={}\n{}.witness={}\n",
                        r.name,
                        r.name,
                        w.note,
                        r.name,
                        ids.join(",")
                    ));
                }
            }
            if timings {
                out.push_str(&format!("{}.millis={}\n", r.name, r.elapsed.as_millis()));
            }
        }
        out.push_str(&format!("all.status={}\n", if self.passed() { "pass" } else { "fail" }));
        out
    }
}

/// Rank over GF(2) of the rows, each a bitset of `u64` words. Pivots are
/// lowest set bits, so reducing a row only touches words at or after the pivot.
pub fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let words = rows.first().map_or(0, Vec::len);
    let mut pivot_of: Vec<Option<usize>> = vec![None; words * 64];
    let mut basis: Vec<Vec<u64>> = Vec::new();
    for row in rows.iter_mut() {
        while let Some(w) = row.iter().position(|&x| x != 0) {
            let bit = w * 64 + row[w].trailing_zeros() as usize;
            match pivot_of[bit] {
                Some(b) => {
                    let piv = &basis[b];
                    for i in w..words {
                        row[i] ^= piv[i];
                    }
                }
                None => {
                    pivot_of[bit] = Some(basis.len());
                    basis.push(std::mem::take(row));
                    break;
                }
            }
        }
    }
    basis.len()
}

/// All faces of a complex given by facets, grouped by dimension and sorted.
pub struct FaceLattice {
    faces: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, usize>>,
}

impl FaceLattice {
    pub fn new(facets: &[Vec<u32>]) -> Self {
        let top = facets.iter().map(Vec::len).max().unwrap_or(0);
        let mut sets: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::new(); top];
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            let m = f.len();
            for mask in 1u64..(1u64 << m) {
                let sub: Vec<u32> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                sets[sub.len() - 1].insert(sub);
            }
        }
        let faces: Vec<Vec<Vec<u32>>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = faces
            .iter()
            .map(|fs| fs.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect())
            .collect();
        FaceLattice { faces, index }
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn faces(&self, d: usize) -> &[Vec<u32>] {
        self.faces.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Rows of the boundary map from `d`-faces to `(d-1)`-faces, as bitsets.
    pub fn boundary_rows(&self, d: usize) -> Vec<Vec<u64>> {
        let cols = self.faces(d - 1).len();
        let words = cols.div_ceil(64);
        self.faces(d)
            .iter()
            .map(|f| {
                let mut row = vec![0u64; words];
                for skip in 0..f.len() {
                    let sub: Vec<u32> = f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                    let j = self.index[d - 1][&sub];
                    row[j / 64] |= 1 << (j % 64);
                }
                row
            })
            .collect()
    }

    /// Betti numbers over GF(2), dimensions `0..=top`.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let top = self.faces.len();
        let ranks: Vec<usize> = (0..=top)
            .map(|d| if d == 0 || d >= top { 0 } else { gf2_rank(self.boundary_rows(d)) })
            .collect();
        (0..top).map(|d| self.faces[d].len() - ranks[d] - ranks[d + 1]).collect()
    }
}

pub fn betti_numbers_gf2(facets: &[Vec<u32>]) -> Vec<usize> {
    FaceLattice::new(facets).betti_numbers()
}

/// Whether vertex links are checked recursively by [`check_sphere`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum LinkDepth {
    /// Only for `d <= 3`.
    #[default]
    Auto,
    Always,
    Never,
}

impl LinkDepth {
    fn enabled(self, d: usize) -> bool {
        match self {
            LinkDepth::Auto => d <= 3,
            LinkDepth::Always => true,
            LinkDepth::Never => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereStats {
    pub f_vector: Vec<usize>,
    pub euler: i64,
    pub betti: Vec<usize>,
}

/// Recognises a `d`-sphere from its facets: purity, pseudomanifold,
/// connectivity, Euler characteristic, GF(2) homology and, optionally,
/// vertex links. Errors carry the offending vertex set.
pub fn sphere_facets(
    vertices: &BTreeSet<u32>,
    facets: &[Vec<u32>],
    d: usize,
    links: LinkDepth,
) -> std::result::Result<SphereStats, (Vec<u32>, String)> {
    if let Some(f) = facets.iter().find(|f| f.len() != d + 1) {
        return Err((f.clone(), format!("facet of dimension {} in a {d}-sphere", f.len() as i64 - 1)));
    }
    let used: BTreeSet<u32> = facets.iter().flatten().copied().collect();
    if let Some(v) = vertices.difference(&used).next() {
        return Err((vec![*v], "vertex in no facet".into()));
    }
    if d == 0 {
        if facets.len() != 2 {
            return Err((used.into_iter().collect(), format!("0-sphere with {} points", facets.len())));
        }
        return Ok(SphereStats {
            f_vector: vec![2],
            euler: 2,
            betti: vec![2],
        });
    }
    let mut ridges: HashMap<Vec<u32>, usize> = HashMap::new();
    for f in facets {
        for skip in 0..f.len() {
            let r: Vec<u32> = f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
            *ridges.entry(r).or_default() += 1;
        }
    }
    if let Some((r, c)) = ridges.iter().filter(|(_, &c)| c != 2).min() {
        return Err((r.clone(), format!("ridge in {c} facets")));
    }
    if let Some(v) = disconnected_vertex(&used, facets) {
        return Err((vec![v], "not connected".into()));
    }
    let lattice = FaceLattice::new(facets);
    let euler = lattice.euler_characteristic();
    let want = if d.is_multiple_of(2) { 2 } else { 0 };
    if euler != want {
        return Err((Vec::new(), format!("Euler characteristic {euler}, expected {want}")));
    }
    let betti = lattice.betti_numbers();
    let mut want_betti = vec![0; d + 1];
    want_betti[0] = 1;
    want_betti[d] = 1;
    if betti != want_betti {
        return Err((Vec::new(), format!("Betti numbers {betti:?}")));
    }
    if links.enabled(d) {
        for &v in &used {
            let link: Vec<Vec<u32>> = facets
                .iter()
                .filter(|f| f.contains(&v))
                .map(|f| f.iter().copied().filter(|&u| u != v).collect())
                .collect();
            let lv: BTreeSet<u32> = link.iter().flatten().copied().collect();
            if let Err((_, why)) = sphere_facets(&lv, &link, d - 1, links) {
                return Err((vec![v], format!("link is not a {}-sphere ({why})", d - 1)));
            }
        }
    }
    Ok(SphereStats {
        f_vector: lattice.f_vector(),
        euler,
        betti,
    })
}

fn disconnected_vertex(used: &BTreeSet<u32>, facets: &[Vec<u32>]) -> Option<u32> {
    let mut adj: HashMap<u32, Vec<u32>> = HashMap::new();
    for f in facets {
        for &u in f {
            adj.entry(u).or_default().extend(f.iter().copied().filter(|&w| w != u));
        }
    }
    let start = *used.iter().next()?;
    let mut seen: BTreeSet<u32> = [start].into();
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &w in &adj[&u] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    used.difference(&seen).next().copied()
}

fn facet_lists(k: &TwoColouredComplex) -> Vec<Vec<u32>> {
    k.facets().iter().map(|f| f.ids().to_vec()).collect()
}

pub fn check_sphere(k: &TwoColouredComplex, d: usize, links: LinkDepth) -> Outcome {
    match sphere_facets(&k.vertex_ids(), &facet_lists(k), d, links) {
        Ok(s) => Outcome::Pass(format!(
            "d={d} f={:?} chi={} betti={:?}{}",
            s.f_vector,
            s.euler,
            s.betti,
            if links.enabled(d) { " links ok" } else { "" }
        )),
        Err((ids, why)) => Outcome::Fail(Witness::on(k, &ids, why)),
    }
}

pub fn check_antisymmetry(k: &TwoColouredComplex) -> Outcome {
    settle((|| {
        let Some(a) = k.antipode() else {
            return fail(Witness::new([], "no antipode installed"));
        };
        for v in k.vertices() {
            let Some(&w) = a.get(&v.id) else {
                return fail(Witness::on(k, &[v.id], "antipode undefined"));
            };
            if w == v.id || a.get(&w) != Some(&v.id) {
                return fail(Witness::on(k, &[v.id], "antipode is not a fixed-point-free involution"));
            }
            let Some(wv) = k.vertex(w) else {
                return fail(Witness::on(k, &[v.id], "antipode leaves the vertex set"));
            };
            if wv.colour == v.colour {
                return fail(Witness::on(k, &[v.id, w], "antipode keeps the colour"));
            }
            if wv.label != v.label {
                return fail(Witness::on(k, &[v.id, w], "antipode changes the label"));
            }
        }
        for f in k.facets() {
            if let Some(&v) = f.iter().find(|v| f.contains(a[v])) {
                return fail(Witness::on(k, f, format!("face contains {} and its antipode", k.display_vertex(v))));
            }
        }
        let facets: BTreeSet<&Face> = k.facets().iter().collect();
        for f in k.facets() {
            let image = Face::new(f.iter().map(|v| a[v]));
            if !facets.contains(&image) {
                return fail(Witness::on(k, f, "antipodal image is not a facet"));
            }
        }
        Ok(format!("{} antipodal pairs", k.num_vertices() / 2))
    })())
}

pub fn check_no_monochromatic_facets(k: &TwoColouredComplex) -> Outcome {
    match k
        .facets()
        .iter()
        .find(|f| f.iter().all(|&v| k.colour(v) == k.colour(f[0])))
    {
        Some(f) => Outcome::Fail(Witness::on(k, f, "monochromatic facet")),
        None => Outcome::Pass(format!("{} facets", k.facets().len())),
    }
}

fn bichromatic_edges(k: &TwoColouredComplex) -> Vec<(VertexId, VertexId)> {
    let mut out: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for f in k.facets() {
        for (i, &u) in f.iter().enumerate() {
            for &v in &f[i + 1..] {
                match (k.colour(u), k.colour(v)) {
                    (Colour::Black, Colour::White) => {
                        out.insert((u, v));
                    }
                    (Colour::White, Colour::Black) => {
                        out.insert((v, u));
                    }
                    _ => {}
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Every bichromatic edge `b(A)w(B)` has `A ∩ B = ∅`.
pub fn check_edge_disjointness(k: &TwoColouredComplex) -> Outcome {
    let edges = bichromatic_edges(k);
    match edges.iter().find(|&&(b, w)| !k.label(b).is_disjoint(k.label(w))) {
        Some(&(b, w)) => Outcome::Fail(Witness::on(k, &[b, w], "edge between intersecting sets")),
        None => Outcome::Pass(format!("{} bichromatic edges", edges.len())),
    }
}

/// Each `A ∈ V(n, k)` labels exactly one black and one white vertex.
pub fn check_label_census(k: &TwoColouredComplex, n: u32, kk: u32) -> Outcome {
    settle((|| {
        let want = enumerate_vertex_sets(n, kk).map_err(|e| Outcome::Fail(Witness::new([], e.to_string())))?;
        let mut seen: BTreeMap<(Colour, &LabelSet), VertexId> = BTreeMap::new();
        for v in k.vertices() {
            if let Some(&other) = seen.get(&(v.colour, &v.label)) {
                return fail(Witness::on(k, &[other, v.id], "repeated label"));
            }
            if !v.label.is_member(n) || v.label.len() != kk as usize {
                return fail(Witness::on(k, &[v.id], format!("label outside V({n},{kk})")));
            }
            seen.insert((v.colour, &v.label), v.id);
        }
        for a in &want {
            for c in [Colour::Black, Colour::White] {
                if !seen.contains_key(&(c, a)) {
                    return fail(Witness::new([], format!("no vertex {}{a}", c.prefix())));
                }
            }
        }
        Ok(format!("{} labels, each in both colours", want.len()))
    })())
}

fn level_of(k: &TwoColouredComplex, n: u32, v: VertexId) -> std::result::Result<u32, Outcome> {
    level(n, k.label(v)).map_err(|e| Outcome::Fail(Witness::on(k, &[v], e.to_string())))
}

/// (P1): on every face `b(A)w(B)`, levels differ by at most one and agree
/// only at level zero.
pub fn check_p1(k: &TwoColouredComplex, n: u32) -> Outcome {
    settle((|| {
        let edges = bichromatic_edges(k);
        for &(b, w) in &edges {
            let (la, lb) = (level_of(k, n, b)?, level_of(k, n, w)?);
            if la.abs_diff(lb) > 1 || (la == lb && la != 0) {
                return fail(Witness::on(k, &[b, w], format!("levels {la} and {lb}")));
            }
        }
        Ok(format!("{} bichromatic edges", edges.len()))
    })())
}

fn core_of(k: &TwoColouredComplex, v: VertexId) -> std::result::Result<LabelSet, Outcome> {
    core(k.label(v)).map_err(|e| Outcome::Fail(Witness::on(k, &[v], e.to_string())))
}

/// (P2) for `k >= 2`, read over facets: `A` is nonsingular iff no single core
/// value is carried by a white vertex of every facet containing `b(A)`.
pub fn check_p2(k: &TwoColouredComplex, kk: u32) -> Outcome {
    if kk < 2 {
        return Outcome::Pass("vacuous for k=1".into());
    }
    settle((|| {
        let mut checked = 0;
        for v in k.vertices().filter(|v| v.colour == Colour::Black) {
            let mut common: Option<BTreeSet<LabelSet>> = None;
            for f in k.star_facets(v.id) {
                let mut cores = BTreeSet::new();
                for &u in f.iter().filter(|&&u| k.colour(u) == Colour::White) {
                    cores.insert(core_of(k, u)?);
                }
                common = Some(match common {
                    None => cores,
                    Some(c) => c.intersection(&cores).cloned().collect(),
                });
            }
            let blocked = common.is_some_and(|c| !c.is_empty());
            if blocked != is_singular(&v.label, kk) {
                return fail(Witness::on(
                    k,
                    &[v.id],
                    if blocked {
                        "nonsingular vertex whose facets all meet one core"
                    } else {
                        "singular vertex with facets avoiding every core"
                    },
                ));
            }
            checked += 1;
        }
        Ok(format!("{checked} black vertices"))
    })())
}

/// (P3): a singular `b(A)` and a black neighbour `b(B)` have the same core.
pub fn check_p3(k: &TwoColouredComplex, kk: u32) -> Outcome {
    settle((|| {
        let mut pairs = 0;
        for v in k.vertices().filter(|v| v.colour == Colour::Black && is_singular(&v.label, kk)) {
            for u in k.neighbours(v.id) {
                if k.colour(u) == Colour::Black {
                    pairs += 1;
                    if core_of(k, u)? != core_of(k, v.id)? {
                        return fail(Witness::on(k, &[v.id, u], "cores differ"));
                    }
                }
            }
        }
        Ok(format!("{pairs} singular black adjacencies"))
    })())
}

/// The copy of `small` inside `big`, matched by `(colour, label)`, is a
/// subcomplex closed under the antipode of `big`.
pub fn check_subcomplex_chain(big: &TwoColouredComplex, small: &TwoColouredComplex) -> Outcome {
    settle((|| {
        let index = big
            .label_index()
            .map_err(|e| Outcome::Fail(Witness::new([], e.to_string())))?;
        let mut map = BTreeMap::new();
        for v in small.vertices() {
            match index.get(&(v.colour, v.label.clone())) {
                Some(&w) => {
                    map.insert(v.id, w);
                }
                None => return fail(Witness::on(small, &[v.id], "vertex missing from the larger complex")),
            }
        }
        for f in small.facets() {
            let image: Vec<VertexId> = f.iter().map(|v| map[v]).collect();
            if !big.is_face(&image) {
                return fail(Witness::on(small, f, "face missing from the larger complex"));
            }
        }
        let Some(a) = big.antipode() else {
            return fail(Witness::new([], "no antipode installed"));
        };
        let inside: BTreeSet<VertexId> = map.values().copied().collect();
        if let Some(&v) = inside.iter().find(|v| !inside.contains(&a[v])) {
            return fail(Witness::on(big, &[v], "antipode leaves the subcomplex"));
        }
        Ok(format!("{} vertices, {} facets embedded", small.num_vertices(), small.facets().len()))
    })())
}

/// The antipodal quotient of a complex as a generalised simplicial complex:
/// its cells are the orbits `{σ, -σ}` of faces. Two cells may share a vertex
/// set once vertices are identified with their antipodes.
pub struct QuotientComplex {
    /// Cells by dimension, each stored as its smaller representative face.
    cells: Vec<Vec<Vec<VertexId>>>,
    index: Vec<HashMap<Vec<VertexId>, usize>>,
    facet_cells: Vec<usize>,
    top: usize,
    labels: HashMap<VertexId, LabelSet>,
}

impl QuotientComplex {
    pub fn dim(&self) -> usize {
        self.top
    }

    pub fn num_cells(&self, d: usize) -> usize {
        self.cells.get(d).map_or(0, Vec::len)
    }

    /// Representative faces of the maximal cells.
    pub fn facets(&self) -> Vec<&[VertexId]> {
        self.facet_cells.iter().map(|&i| self.cells[self.top][i].as_slice()).collect()
    }

    /// Cell of dimension `face.len() - 1` containing `face` (either lift).
    pub fn cell_of(&self, face: &[VertexId]) -> Option<usize> {
        self.index.get(face.len().checked_sub(1)?)?.get(face).copied()
    }

    /// Pairs of distinct cells of the same dimension carried by the same set
    /// of labels; zero iff the quotient is an ordinary simplicial complex.
    pub fn label_collisions(&self) -> usize {
        let mut total = 0;
        for cells in &self.cells {
            let mut seen: HashMap<Vec<&LabelSet>, usize> = HashMap::new();
            for c in cells {
                let mut key: Vec<&LabelSet> = c.iter().map(|v| &self.labels[v]).collect();
                key.sort();
                let e = seen.entry(key).or_default();
                total += *e;
                *e += 1;
            }
        }
        total
    }

    /// Cellular Betti numbers over GF(2).
    pub fn betti_numbers(&self) -> Vec<usize> {
        let top = self.cells.len();
        let ranks: Vec<usize> = (0..=top)
            .map(|d| {
                if d == 0 || d >= top {
                    return 0;
                }
                let words = self.cells[d - 1].len().div_ceil(64);
                let rows = self.cells[d]
                    .iter()
                    .map(|f| {
                        let mut row = vec![0u64; words];
                        for skip in 0..f.len() {
                            let sub: Vec<VertexId> =
                                f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                            let j = self.index[d - 1][&sub];
                            row[j / 64] ^= 1 << (j % 64);
                        }
                        row
                    })
                    .collect();
                gf2_rank(rows)
            })
            .collect();
        (0..top).map(|d| self.cells[d].len() - ranks[d] - ranks[d + 1]).collect()
    }
}

/// Builds the orbit complex. Fails if the antipode is missing, fixes a face,
/// or does not act simplicially.
pub fn quotient_complex(k: &TwoColouredComplex) -> std::result::Result<QuotientComplex, Outcome> {
    let Some(a) = k.antipode() else {
        return Err(Outcome::Fail(Witness::new([], "no antipode installed")));
    };
    let top = k.dimension().unwrap_or(0);
    let mut cells = Vec::with_capacity(top + 1);
    let mut index = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let faces = k.faces_of_dim(d);
        let lookup: BTreeSet<&Face> = faces.iter().collect();
        let mut reps: Vec<Vec<VertexId>> = Vec::new();
        let mut idx: HashMap<Vec<VertexId>, usize> = HashMap::new();
        for f in &faces {
            let image = Face::new(f.iter().map(|v| a[v]));
            if image == *f {
                return Err(Outcome::Fail(Witness::on(k, f, "face fixed by the antipode")));
            }
            if !lookup.contains(&image) {
                return Err(Outcome::Fail(Witness::on(k, f, "antipodal image is not a face")));
            }
            if idx.contains_key(f.ids()) {
                continue;
            }
            let i = reps.len();
            reps.push(f.ids().min(image.ids()).to_vec());
            idx.insert(f.to_vec(), i);
            idx.insert(image.into_vec(), i);
        }
        cells.push(reps);
        index.push(idx);
    }
    let mut facet_cells: Vec<usize> = k
        .facets()
        .iter()
        .filter(|f| f.dim() == top)
        .map(|f| index[top][f.ids()])
        .collect();
    facet_cells.sort_unstable();
    facet_cells.dedup();
    let labels = k.vertices().map(|v| (v.id, v.label.clone())).collect();
    Ok(QuotientComplex {
        cells,
        index,
        facet_cells,
        top,
        labels,
    })
}

/// The quotient has the GF(2) Betti numbers of projective `d`-space.
pub fn check_quotient_homology(k: &TwoColouredComplex, d: usize) -> Outcome {
    settle((|| {
        let qk = quotient_complex(k)?;
        let betti = qk.betti_numbers();
        if betti != vec![1; d + 1] {
            return fail(Witness::new([], format!("quotient Betti numbers {betti:?}")));
        }
        Ok(format!(
            "{} maximal cells, betti={betti:?}, {} label collisions",
            qk.facet_cells.len(),
            qk.label_collisions()
        ))
    })())
}

/// `G` is the set of bichromatic edge cells of the quotient; its image under
/// the vertex labelling must be exactly `QG`, and on every maximal cell the
/// edges of `G` must form a complete bipartite graph with an edge.
pub fn check_quadrangulation(k: &TwoColouredComplex, qk: &QuotientComplex, qg: &QuotientGraph) -> Outcome {
    let pos: BTreeMap<&LabelSet, usize> = qg.graph.labels().iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut image: BTreeSet<(usize, usize)> = BTreeSet::new();
    let in_g = |u: VertexId, v: VertexId| k.colour(u) != k.colour(v);
    for e in qk.cells.get(1).map_or(&[][..], Vec::as_slice) {
        if in_g(e[0], e[1]) {
            let (x, y) = (pos[k.label(e[0])], pos[k.label(e[1])]);
            image.insert((x.min(y), x.max(y)));
        }
    }
    let edges: BTreeSet<(usize, usize)> = qg.graph.edges().into_iter().collect();
    if image != edges {
        return Outcome::Fail(Witness::new([], "QG is not the image of the bichromatic edge cells"));
    }
    for f in qk.facets() {
        let black = f.iter().filter(|&&v| k.colour(v) == Colour::Black).count();
        let white = f.len() - black;
        let mut g_edges = 0;
        let mut ok = true;
        for (i, &u) in f.iter().enumerate() {
            for &v in &f[i + 1..] {
                if qk.cell_of(&[u, v]).is_none() {
                    ok = false;
                }
                if in_g(u, v) {
                    g_edges += 1;
                }
            }
        }
        // The two colour classes are the sides; G is bipartite on them by
        // definition, so completeness is an edge count.
        if !ok || g_edges == 0 || g_edges != black * white {
            return Outcome::Fail(Witness::on(k, f, "maximal cell is not complete bipartite in G"));
        }
    }
    Outcome::Pass(format!("{} maximal cells", qk.facet_cells.len()))
}

/// `QG(n, k)` is a spanning subgraph of `SG(n, k)`.
pub fn check_spanning(k: &TwoColouredComplex, n: u32, kk: u32) -> Outcome {
    settle((|| {
        let qg = quotient_graph(k).map_err(|e| Outcome::Fail(Witness::new([], e.to_string())))?;
        let sg = schrijver_graph(n, kk).map_err(|e| Outcome::Fail(Witness::new([], e.to_string())))?;
        if !is_spanning_subgraph(&qg.graph, &sg) {
            return fail(Witness::new([], "QG is not a spanning subgraph of SG"));
        }
        Ok(format!("QG has {} of the {} edges of SG", qg.graph.num_edges(), sg.num_edges()))
    })())
}

/// The interior boundary of a `(n, k)` shell: vertex set as predicted, equal
/// to the induced subcomplex on it, and mapped onto `target` (a copy of
/// `Q(n-3, k-1)`) isomorphically by `A ↦ core A - 1`.
pub fn check_interior_boundary(shell: &ShellResult, n: u32, kk: u32, colour: Colour, target: &TwoColouredComplex) -> Outcome {
    settle((|| {
        let cx = &shell.complex;
        let want = expected_interior_labels(n, kk, colour).map_err(|e| Outcome::Fail(Witness::new([], e.to_string())))?;
        let got: BTreeSet<(Colour, LabelSet)> = shell
            .interior_boundary
            .iter()
            .map(|&v| (cx.colour(v), cx.label(v).clone()))
            .collect();
        if got != want || got.len() != shell.interior_boundary.len() {
            let ids: Vec<VertexId> = shell.interior_boundary.iter().copied().collect();
            return fail(Witness::on(cx, &ids, "interior boundary vertex set differs from the formula"));
        }
        let counted: Vec<Face> = shell.interior_boundary_faces().into_iter().collect();
        let mut counted = crate::complex::maximal_faces(counted);
        counted.sort();
        let induced = shell.interior_complex();
        if counted != induced.facets() {
            let extra = induced.facets().iter().find(|f| !counted.contains(f)).or_else(|| counted.first());
            return fail(Witness::on(cx, extra.map_or(&[][..], |f| f.ids()), "interior boundary is not induced"));
        }
        interior_boundary_isomorphism(shell, target).map_err(|e| Outcome::Fail(Witness::new([], e.to_string())))?;
        Ok(format!("{} vertices, {} facets", got.len(), counted.len()))
    })())
}

/// What a check sees: the complex, its parameters and options.
pub struct CheckInput<'a> {
    pub complex: &'a TwoColouredComplex,
    pub n: u32,
    pub k: u32,
    pub links: LinkDepth,
}

impl CheckInput<'_> {
    pub fn dim(&self) -> usize {
        (self.n - 2 * self.k) as usize
    }
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, input: &CheckInput<'_>) -> Outcome;
}

macro_rules! check {
    ($ty:ident, $name:literal, $desc:literal, |$i:ident| $body:expr) => {
        struct $ty;
        impl Check for $ty {
            fn name(&self) -> &'static str {
                $name
            }
            fn description(&self) -> &'static str {
                $desc
            }
            fn run(&self, $i: &CheckInput<'_>) -> Outcome {
                $body
            }
        }
    };
}

check!(SphereCheck, "sphere", "triangulates the (n-2k)-sphere", |i| check_sphere(i.complex, i.dim(), i.links));
check!(AntisymmetryCheck, "antisymmetry", "antipode is a colour-swapping automorphism", |i| check_antisymmetry(i.complex));
check!(MonochromaticCheck, "monochromatic", "no monochromatic facet", |i| check_no_monochromatic_facets(i.complex));
check!(DisjointnessCheck, "disjointness", "bichromatic edges join disjoint sets", |i| check_edge_disjointness(i.complex));
check!(CensusCheck, "census", "each label once per colour", |i| check_label_census(i.complex, i.n, i.k));
check!(P1Check, "p1", "levels along bichromatic edges", |i| check_p1(i.complex, i.n));
check!(P2Check, "p2", "singular vertices are the blocked ones", |i| check_p2(i.complex, i.k));
check!(P3Check, "p3", "singular vertices share cores with black neighbours", |i| check_p3(i.complex, i.k));
check!(ChainCheck, "chain", "contains Q(n-1,k) antisymmetrically", |i| {
    if i.n == 2 * i.k + 1 {
        Outcome::Pass("base case".into())
    } else {
        match build_sphere(i.n - 1, i.k) {
            Ok(small) => check_subcomplex_chain(i.complex, &small),
            Err(e) => Outcome::Fail(Witness::new([], e.to_string())),
        }
    }
});
check!(QuotientCheck, "quotient", "quotient has the homology of projective space", |i| {
    check_quotient_homology(i.complex, i.dim())
});
check!(QuadrangulationCheck, "quadrangulation", "QG restricted to each maximal quotient cell is complete bipartite", |i| {
    match (quotient_complex(i.complex), quotient_graph(i.complex)) {
        (Ok(qk), Ok(qg)) => check_quadrangulation(i.complex, &qk, &qg),
        (Err(o), _) => o,
        (_, Err(e)) => Outcome::Fail(Witness::new([], e.to_string())),
    }
});
check!(SpanningCheck, "spanning", "QG spans SG(n,k)", |i| check_spanning(i.complex, i.n, i.k));

/// Checks by name, in registration order.
pub struct CheckRegistry {
    checks: Vec<Box<dyn Check>>,
}

impl CheckRegistry {
    pub fn empty() -> Self {
        CheckRegistry { checks: Vec::new() }
    }

    pub fn standard() -> Self {
        let mut r = CheckRegistry::empty();
        r.register(Box::new(SphereCheck));
        r.register(Box::new(AntisymmetryCheck));
        r.register(Box::new(MonochromaticCheck));
        r.register(Box::new(DisjointnessCheck));
        r.register(Box::new(CensusCheck));
        r.register(Box::new(P1Check));
        r.register(Box::new(P2Check));
        r.register(Box::new(P3Check));
        r.register(Box::new(ChainCheck));
        r.register(Box::new(QuotientCheck));
        r.register(Box::new(QuadrangulationCheck));
        r.register(Box::new(SpanningCheck));
        r
    }

    /// Adds a check, replacing any earlier one with the same name.
    pub fn register(&mut self, check: Box<dyn Check>) {
        self.checks.retain(|c| c.name() != check.name());
        self.checks.push(check);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn Check> {
        self.checks.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    /// Runs the named checks (all when `names` is empty) concurrently and
    /// reports them in the requested order.
    pub fn run(&self, names: &[&str], input: &CheckInput<'_>) -> Result<VerificationReport> {
        let mut selected: Vec<&dyn Check> = Vec::new();
        if names.is_empty() {
            selected.extend(self.checks.iter().map(|c| c.as_ref()));
        } else {
            for name in names {
                let c = self
                    .get(name)
                    .ok_or_else(|| Error::Parameter(format!("unknown check '{name}' (known: {})", self.names().join(","))))?;
                if !selected.iter().any(|s| s.name() == c.name()) {
                    selected.push(c);
                }
            }
        }
        let results = selected
            .par_iter()
            .map(|c| {
                let t = Instant::now();
                let outcome = c.run(input);
                CheckResult {
                    name: c.name().to_string(),
                    outcome,
                    elapsed: t.elapsed(),
                }
            })
            .collect();
        Ok(VerificationReport { results })
    }
}

impl Default for CheckRegistry {
    fn default() -> Self {
        CheckRegistry::standard()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::VertexRef;
    use crate::construct::{build_base_cycle, build_shell};

    fn vr(id: u32, l: &[u32], c: Colour) -> VertexRef {
        VertexRef::new(id, LabelSet::from(l), c)
    }

    #[test]
    fn rank_small() {
        assert_eq!(gf2_rank(vec![vec![0b011], vec![0b110], vec![0b101]]), 2);
        assert_eq!(gf2_rank(vec![vec![1, 0], vec![0, 1], vec![1, 1]]), 2);
        assert_eq!(gf2_rank(Vec::new()), 0);
    }

    #[test]
    fn spheres_and_non_spheres() {
        let cycle = build_base_cycle(3).unwrap();
        assert!(check_sphere(&cycle, 1, LinkDepth::Always).passed());
        let q41 = build_sphere(4, 1).unwrap();
        match check_sphere(&q41, 2, LinkDepth::Auto) {
            Outcome::Pass(d) => assert!(d.contains("betti=[1, 0, 1]"), "{d}"),
            o => panic!("{o:?}"),
        }
        let tri = TwoColouredComplex::from_facets(
            vec![vr(1, &[1], Colour::Black), vr(2, &[2], Colour::White), vr(3, &[3], Colour::Black)],
            [vec![1, 2, 3]],
        )
        .unwrap();
        let o = check_sphere(&tri, 2, LinkDepth::Auto);
        assert!(o.witness().unwrap().note.contains("ridge"), "{o:?}");
        assert!(!check_sphere(&cycle, 2, LinkDepth::Auto).passed());
    }

    #[test]
    fn torus_is_not_a_sphere() {
        // 7-vertex torus: pseudomanifold with chi = 0 in dimension 2.
        let mut facets = Vec::new();
        for i in 0..7u32 {
            facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
            facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
        }
        let facets: Vec<Vec<u32>> = facets
            .into_iter()
            .map(|mut f| {
                f.iter_mut().for_each(|v| *v += 1);
                f.sort();
                f
            })
            .collect();
        assert_eq!(betti_numbers_gf2(&facets), vec![1, 2, 1]);
        let vs: BTreeSet<u32> = (1..=7).collect();
        let err = sphere_facets(&vs, &facets, 2, LinkDepth::Never).unwrap_err();
        assert!(err.1.contains("Euler"));
    }

    #[test]
    fn projective_plane_betti() {
        // Six-vertex real projective plane.
        let facets = vec![
            vec![1, 2, 3],
            vec![1, 3, 4],
            vec![1, 4, 5],
            vec![1, 5, 6],
            vec![1, 2, 6],
            vec![2, 3, 5],
            vec![3, 4, 6],
            vec![2, 4, 5],
            vec![3, 5, 6],
            vec![2, 4, 6],
        ];
        assert_eq!(betti_numbers_gf2(&facets), vec![1, 1, 1]);
    }

    #[test]
    fn antisymmetry_fixture() {
        let mut q = build_base_cycle(2).unwrap();
        assert!(check_antisymmetry(&q).passed());
        let a = q.antipode().unwrap().clone();
        let b = q.find(&LabelSet::from([1, 3]), Colour::Black).unwrap();
        let w = a[&b];
        let mut bad = TwoColouredComplex::from_facets(q.vertices().cloned().collect(), q.facets().iter().map(|f| f.to_vec()).chain([vec![b, w]])).unwrap();
        bad.set_antipode(a).unwrap();
        let o = check_antisymmetry(&bad);
        assert_eq!(o.witness().unwrap().ids, vec![b.min(w), b.max(w)]);
        q.set_antipode_unchecked(BTreeMap::new());
        assert!(!check_antisymmetry(&q).passed());
    }

    #[test]
    fn colour_and_label_fixtures() {
        let mono = TwoColouredComplex::from_facets(
            vec![vr(1, &[1], Colour::Black), vr(2, &[3], Colour::Black), vr(3, &[5], Colour::Black)],
            [vec![1, 2, 3]],
        )
        .unwrap();
        assert!(!check_no_monochromatic_facets(&mono).passed());
        let edge = TwoColouredComplex::from_facets(
            vec![vr(1, &[1, 3], Colour::Black), vr(2, &[3, 5], Colour::White)],
            [vec![1, 2]],
        )
        .unwrap();
        assert_eq!(check_edge_disjointness(&edge).witness().unwrap().ids, vec![1, 2]);
        let cycle = build_base_cycle(3).unwrap();
        assert!(check_edge_disjointness(&cycle).passed());
        assert!(check_label_census(&cycle, 7, 3).passed());
        assert!(!check_label_census(&cycle, 8, 3).passed());
    }

    #[test]
    fn p_properties_on_small_spheres() {
        for (n, k) in [(5, 2), (6, 2), (7, 3), (8, 3)] {
            let q = build_sphere(n, k).unwrap();
            assert!(check_p1(&q, n).passed(), "({n},{k})");
            assert!(check_p2(&q, k).passed(), "({n},{k}) {:?}", check_p2(&q, k));
            assert!(check_p3(&q, k).passed(), "({n},{k})");
        }
    }

    #[test]
    fn quotient_and_quadrangulation() {
        let q = build_sphere(5, 2).unwrap();
        let qk = quotient_complex(&q).unwrap();
        assert_eq!(qk.facets().len(), 5);
        assert_eq!(qk.label_collisions(), 0);
        let qg = quotient_graph(&q).unwrap();
        assert!(check_quadrangulation(&q, &qk, &qg).passed());
        assert!(check_quotient_homology(&q, 1).passed());
        let q = build_sphere(6, 2).unwrap();
        let qk = quotient_complex(&q).unwrap();
        assert_eq!(qk.betti_numbers(), vec![1, 1, 1]);
        let mut qg = quotient_graph(&q).unwrap();
        assert!(check_quadrangulation(&q, &qk, &qg).passed());
        let (u, v) = qg.graph.edges()[0];
        qg.graph.remove_edge(u, v);
        assert!(!check_quadrangulation(&q, &qk, &qg).passed());
    }

    #[test]
    fn monochromatic_cell_breaks_quadrangulation() {
        let mut bad = TwoColouredComplex::from_facets(
            vec![
                vr(1, &[1], Colour::Black),
                vr(2, &[2], Colour::Black),
                vr(3, &[1], Colour::White),
                vr(4, &[2], Colour::White),
            ],
            [vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 1]],
        )
        .unwrap();
        bad.set_antipode([(1, 3), (3, 1), (2, 4), (4, 2)].into()).unwrap();
        let qk = quotient_complex(&bad).unwrap();
        let qg = quotient_graph(&bad).unwrap();
        assert_eq!(qk.betti_numbers(), vec![1, 1]);
        let o = check_quadrangulation(&bad, &qk, &qg);
        assert!(!o.passed());
    }

    #[test]
    fn chain_of_small_spheres() {
        let q83 = build_sphere(8, 3).unwrap();
        let q73 = build_sphere(7, 3).unwrap();
        assert!(check_subcomplex_chain(&q83, &q73).passed());
        assert!(!check_subcomplex_chain(&q73, &q83).passed());
    }

    #[test]
    fn interior_boundary_of_8_3() {
        let sh = build_shell(8, 3, Colour::Black).unwrap();
        let q52 = build_sphere(5, 2).unwrap();
        assert!(check_interior_boundary(&sh, 8, 3, Colour::Black, &q52).passed());
        let q62 = build_sphere(6, 2).unwrap();
        assert!(!check_interior_boundary(&sh, 8, 3, Colour::Black, &q62).passed());
    }

    #[test]
    fn registry_runs_by_name() {
        let reg = CheckRegistry::standard();
        let q = build_sphere(6, 2).unwrap();
        let input = CheckInput {
            complex: &q,
            n: 6,
            k: 2,
            links: LinkDepth::Auto,
        };
        let all = reg.run(&[], &input).unwrap();
        assert!(all.passed(), "{}", all.render_text());
        assert_eq!(all.results.len(), reg.names().len());
        let two = reg.run(&["p1", "sphere"], &input).unwrap();
        assert_eq!(two.results[0].name, "p1");
        assert!(reg.run(&["nope"], &input).is_err());
        assert!(two.render_kv().ends_with("all.status=pass\n"));
    }
}
