//! The recursive build of the spheres `Q(n, k)`.
//!
//! * `Q(2k+1, k)` is the alternating cycle on the sets `I_j`.
//! * The shell for `(n, k)` thickens `Q(n-1, k)` by cloning vertices of the
//!   build colour and contracting the temporary clones away.
//! * The ball for `(n, k)` fills the shell's interior boundary with the
//!   opposite-colour ball for `(n-2, k-1)`, relabelled through `g_n`.
//! * `Q(n, k)` glues the ball to its colour-swapped mirror along `Q(n-1, k)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::complex::{check_isomorphism, Colour, Face, ShellResult, Tag, TwoColouredComplex, VertexId, VertexRef};
use crate::error::{Error, Result};
use crate::setkit::{
    base_independent_set, clone_label, enumerate_vertex_sets, f_map, g_map, is_singular, level_zero_sets,
    positive_level_sets, LabelSet,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct BuildParams {
    pub n: u32,
    pub k: u32,
    /// The colour whose vertices get cloned in the shell steps.
    pub colour: Colour,
}

impl BuildParams {
    pub fn new(n: u32, k: u32, colour: Colour) -> Result<Self> {
        if k == 0 || n < 2 * k + 1 {
            return Err(Error::Parameter(format!("need k >= 1 and n >= 2k+1, got n={n}, k={k}")));
        }
        Ok(BuildParams { n, k, colour })
    }
}

/// A triangulated ball together with its boundary sphere. The boundary need
/// not be an induced subcomplex: monochromatic chords between boundary
/// vertices may run through the interior.
#[derive(Clone, Debug)]
pub struct Ball {
    pub complex: TwoColouredComplex,
    pub boundary: BTreeSet<VertexId>,
    pub boundary_facets: Vec<Face>,
}

impl Ball {
    /// The boundary sphere as a complex on the boundary vertices.
    pub fn boundary_complex(&self) -> TwoColouredComplex {
        let vertices = self
            .boundary
            .iter()
            .map(|&v| self.complex.vertex(v).expect("boundary vertex").clone())
            .collect();
        TwoColouredComplex::from_facets(vertices, self.boundary_facets.iter().map(|f| f.ids().to_vec()))
            .expect("boundary facets use boundary vertices")
    }
}

/// How the temporary clones of steps B2/B4 are scheduled against the
/// contractions of B3/B5.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Schedule {
    /// All clones of a step first, then all contractions.
    #[default]
    TwoPass,
    /// Clone and contract one vertex at a time.
    Interleaved,
}

/// The `2(2k+1)` vertices of `Q(2k+1, k)` in cyclic order, starting at `b(I_1)`.
pub fn base_cycle_order(k: u32) -> Result<Vec<(Colour, LabelSet)>> {
    let m = 2 * k + 1;
    let mut out = Vec::with_capacity(2 * m as usize);
    for p in 0..2 * m {
        let j = p % m + 1;
        let black = if p < m { p % 2 == 0 } else { (p - m) % 2 == 1 };
        let colour = if black { Colour::Black } else { Colour::White };
        out.push((colour, base_independent_set(k, j)?));
    }
    Ok(out)
}

/// `Q(2k+1, k)`: the cycle `b(I_1) w(I_2) b(I_3) ... w(I_{2k+1})`, with ids
/// in `(colour, label)` order and the antipode `b(I_j) <-> w(I_j)`.
pub fn build_base_cycle(k: u32) -> Result<TwoColouredComplex> {
    let order = base_cycle_order(k)?;
    let len = order.len() as VertexId;
    let vertices = order
        .iter()
        .enumerate()
        .map(|(i, (c, l))| VertexRef::new(i as VertexId + 1, l.clone(), *c))
        .collect();
    let edges = (1..=len).map(|i| vec![i, i % len + 1]);
    let cycle = TwoColouredComplex::from_facets(vertices, edges)?;
    let (mut cycle, _) = cycle.canonicalized();
    let antipode = cycle.antipode_by_label()?;
    cycle.set_antipode(antipode)?;
    Ok(cycle)
}

/// Memoising builder. Spheres and balls are shared behind `Arc` once built.
#[derive(Default)]
pub struct Builder {
    spheres: HashMap<(u32, u32), Arc<TwoColouredComplex>>,
    balls: HashMap<(u32, u32, Colour), Arc<Ball>>,
    schedule: Schedule,
    /// Also check the onion observation (ball minus the shell's outer
    /// vertices is the inner ball) on every ball built.
    pub check_onion: bool,
}

impl Builder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_schedule(schedule: Schedule) -> Self {
        Builder {
            schedule,
            ..Self::default()
        }
    }

    pub fn sphere(&mut self, n: u32, k: u32) -> Result<Arc<TwoColouredComplex>> {
        BuildParams::new(n, k, Colour::Black)?;
        if let Some(s) = self.spheres.get(&(n, k)) {
            return Ok(Arc::clone(s));
        }
        let sphere = if n == 2 * k + 1 {
            build_base_cycle(k)?
        } else {
            let ball = self.ball(n, k, Colour::Black)?;
            glue_hemispheres(&ball)?
        };
        let sphere = Arc::new(sphere);
        self.spheres.insert((n, k), Arc::clone(&sphere));
        Ok(sphere)
    }

    pub fn ball(&mut self, n: u32, k: u32, colour: Colour) -> Result<Arc<Ball>> {
        if let Some(b) = self.balls.get(&(n, k, colour)) {
            return Ok(Arc::clone(b));
        }
        let shell = self.shell(n, k, colour)?;
        let ball = if k == 1 {
            Ball {
                boundary_facets: shell.exterior_facets(),
                complex: shell.complex,
                boundary: shell.exterior_boundary,
            }
        } else {
            let inner = self.ball(n - 2, k - 1, colour.flip())?;
            fill_shell(n, k, colour, &shell, &inner, self.check_onion)?
        };
        let ball = Arc::new(ball);
        self.balls.insert((n, k, colour), Arc::clone(&ball));
        Ok(ball)
    }

    pub fn shell(&mut self, n: u32, k: u32, colour: Colour) -> Result<ShellResult> {
        if k == 0 || n < 2 * k + 2 {
            return Err(Error::Parameter(format!("shells need n >= 2k+2, got n={n}, k={k}")));
        }
        let sphere = self.sphere(n - 1, k)?;
        let mut shell = ShellResult::from_sphere(&sphere)?;
        let index = sphere.label_index()?;
        let at = |c: Colour, a: &LabelSet| -> Result<VertexId> {
            index
                .get(&(c, a.clone()))
                .copied()
                .ok_or_else(|| Error::construction("shell", format!("{}{a} missing from Q({},{k})", c.prefix(), n - 1)))
        };
        let c = colour;
        let o = colour.flip();

        if k == 1 {
            let apex = shell.complex.add_vertex(LabelSet::new([n]), c, Tag::Permanent);
            shell.complex.join_with_vertex(apex, &sphere)?;
            shell.interior_boundary = [apex].into_iter().collect();
            return Ok(shell);
        }

        if n == 2 * k + 2 {
            let mut clones = BTreeMap::new();
            for j in 3..=2 * k + 1 {
                let ij = base_independent_set(k, j)?;
                let id = shell
                    .add_clone(at(c, &ij)?, clone_label(n, &ij)?, Tag::Permanent)
                    .map_err(|e| Error::construction("shell clone", e.to_string()))?;
                clones.insert(j, id);
            }
            let i = |j| base_independent_set(k, j);
            let first: BTreeSet<VertexId> = [at(o, &i(2 * k + 1)?)?, at(c, &i(1)?)?, at(o, &i(2)?)?].into();
            let second: BTreeSet<VertexId> = [at(o, &i(1)?)?, at(c, &i(2)?)?, at(o, &i(3)?)?].into();
            let first = sphere.induced_subcomplex(&first);
            let second = sphere.induced_subcomplex(&second);
            shell.join_with_vertex(clones[&3], &first)?;
            shell.join_with_vertex(clones[&(2 * k + 1)], &second)?;
        } else {
            self.general_shell_steps(n, k, c, &mut shell, &at)?;
        }

        if let Some(t) = shell.complex.vertices().find(|v| v.tag == Tag::Temporary) {
            return Err(Error::construction("shell", format!("temporary vertex {t} survived")));
        }
        check_interior_vertex_set(n, k, c, &shell)?;
        check_edge_heredity(n, k, &shell)?;
        Ok(shell)
    }

    fn general_shell_steps(
        &self,
        n: u32,
        k: u32,
        c: Colour,
        shell: &mut ShellResult,
        at: &dyn Fn(Colour, &LabelSet) -> Result<VertexId>,
    ) -> Result<()> {
        let o = c.flip();
        let plus = positive_level_sets(n - 1, k)?;
        let zero = level_zero_sets(n - 1, k)?;

        // B1: clone every vertex of positive level.
        let mut b1 = HashMap::new();
        for a in &plus {
            let id = shell
                .add_clone(at(c, a)?, clone_label(n, a)?, Tag::Permanent)
                .map_err(|e| Error::construction("B1", e.to_string()))?;
            b1.insert(a.clone(), id);
        }

        // B2/B3: temporary clones of level-zero vertices, contracted into the
        // B1 clone of their (n-1)-clone.
        let partner = |a: &LabelSet| -> Result<VertexId> {
            let up = clone_label(n - 1, a)?;
            b1.get(&up)
                .copied()
                .ok_or_else(|| Error::construction("B3", format!("no B1 clone for {up}")))
        };
        let contract_b3 = |shell: &mut ShellResult, a: &LabelSet, temp: VertexId| -> Result<()> {
            let keep = partner(a)?;
            shell
                .contract_edge(keep, temp, clone_label(n, a)?)
                .map_err(|e| Error::construction("B3", format!("{}{a}: {e}", c.prefix())))
        };
        let clone_b2 = |shell: &mut ShellResult, a: &LabelSet| -> Result<VertexId> {
            shell
                .add_clone(at(c, a)?, a.clone(), Tag::Temporary)
                .map_err(|e| Error::construction("B2", e.to_string()))
        };
        match self.schedule {
            Schedule::TwoPass => {
                let temps = zero.iter().map(|a| clone_b2(shell, a)).collect::<Result<Vec<_>>>()?;
                for (a, t) in zero.iter().zip(temps) {
                    contract_b3(shell, a, t)?;
                }
            }
            Schedule::Interleaved => {
                for a in &zero {
                    let t = clone_b2(shell, a)?;
                    contract_b3(shell, a, t)?;
                }
            }
        }

        // After B1-B3 no original vertex of the build colour is on the
        // interior boundary, and every nonsingular level-zero vertex of the
        // other colour still is.
        for a in enumerate_vertex_sets(n - 1, k)? {
            if shell.interior_boundary.contains(&at(c, &a)?) {
                return Err(Error::construction("B3", format!("{}{a} is still on the interior boundary", c.prefix())));
            }
        }
        let nonsingular: Vec<&LabelSet> = zero.iter().filter(|b| !is_singular(b, k)).collect();
        for b in &nonsingular {
            if !shell.interior_boundary.contains(&at(o, b)?) {
                return Err(Error::construction("B3", format!("{}{b} left the interior boundary", o.prefix())));
            }
        }

        // B4/B5: temporary clones of nonsingular level-zero vertices of the
        // other colour, contracted into the vertex labelled by their clone.
        let clone_b4 = |shell: &mut ShellResult, b: &LabelSet| -> Result<VertexId> {
            shell
                .add_clone(at(o, b)?, b.clone(), Tag::Temporary)
                .map_err(|e| Error::construction("B4", e.to_string()))
        };
        let contract_b5 = |shell: &mut ShellResult, b: &LabelSet, temp: VertexId| -> Result<()> {
            let up = clone_label(n - 1, b)?;
            shell
                .contract_edge(at(o, &up)?, temp, up)
                .map_err(|e| Error::construction("B5", format!("{}{b}: {e}", o.prefix())))
        };
        match self.schedule {
            Schedule::TwoPass => {
                let temps = nonsingular.iter().map(|b| clone_b4(shell, b)).collect::<Result<Vec<_>>>()?;
                for (b, t) in nonsingular.iter().zip(temps) {
                    contract_b5(shell, b, t)?;
                }
            }
            Schedule::Interleaved => {
                for b in &nonsingular {
                    let t = clone_b4(shell, b)?;
                    contract_b5(shell, b, t)?;
                }
            }
        }
        Ok(())
    }
}

/// Vertices the interior boundary of the `(n, k)` shell must consist of:
/// `{ c(ν_n A), ō(A) : A ∈ V⁺(n-1, k) }` as `(colour, label)` pairs.
pub fn expected_interior_labels(n: u32, k: u32, colour: Colour) -> Result<BTreeSet<(Colour, LabelSet)>> {
    let mut out = BTreeSet::new();
    for a in positive_level_sets(n - 1, k)? {
        out.insert((colour, clone_label(n, &a)?));
        out.insert((colour.flip(), a));
    }
    Ok(out)
}

fn vertex_labels(k: &TwoColouredComplex, ids: &BTreeSet<VertexId>) -> BTreeSet<(Colour, LabelSet)> {
    ids.iter()
        .map(|&v| (k.colour(v), k.label(v).clone()))
        .collect()
}

fn check_interior_vertex_set(n: u32, k: u32, colour: Colour, shell: &ShellResult) -> Result<()> {
    let got = vertex_labels(&shell.complex, &shell.interior_boundary);
    let want = expected_interior_labels(n, k, colour)?;
    if got != want {
        let extra: Vec<String> = got.difference(&want).map(|(c, l)| format!("{}{l}", c.prefix())).collect();
        let missing: Vec<String> = want.difference(&got).map(|(c, l)| format!("{}{l}", c.prefix())).collect();
        return Err(Error::construction(
            "interior boundary",
            format!("shell ({n},{k}) extra {extra:?}, missing {missing:?}"),
        ));
    }
    if shell.interior_boundary.len() != want.len() {
        return Err(Error::construction("interior boundary", "repeated labels on the interior boundary"));
    }
    Ok(())
}

/// Bichromatic shell edges between two labels of `V(n-1, k)` must already be
/// edges of the exterior sphere.
fn check_edge_heredity(n: u32, k: u32, shell: &ShellResult) -> Result<()> {
    let _ = k;
    let cx = &shell.complex;
    for e in cx.faces_of_dim(1) {
        let (u, v) = (e[0], e[1]);
        if cx.colour(u) == cx.colour(v) {
            continue;
        }
        if cx.label(u).is_member(n - 1) && cx.label(v).is_member(n - 1) {
            let on_ext = shell.exterior_boundary.contains(&u) && shell.exterior_boundary.contains(&v);
            if !on_ext || !shell.exterior_complex().is_face(&[u, v]) {
                return Err(Error::construction("edge heredity", format!("new edge {}", cx.display_face(&e))));
            }
        }
    }
    Ok(())
}

/// The colour-preserving map `A ↦ core A - 1` from the shell's interior
/// boundary onto `target` (a copy of `Q(n-3, k-1)`), checked to be an
/// isomorphism.
pub fn interior_boundary_isomorphism(
    shell: &ShellResult,
    target: &TwoColouredComplex,
) -> Result<BTreeMap<VertexId, VertexId>> {
    let index = target.label_index()?;
    let mut phi = BTreeMap::new();
    for &v in &shell.interior_boundary {
        let c = shell.complex.colour(v);
        let image = f_map(shell.complex.label(v))?;
        let w = index.get(&(c, image.clone())).ok_or_else(|| {
            Error::construction("interior boundary", format!("{}{image} not in target", c.prefix()))
        })?;
        phi.insert(v, *w);
    }
    if !check_isomorphism(&shell.interior_complex(), target, &phi) {
        return Err(Error::construction("interior boundary", "f does not induce an isomorphism"));
    }
    Ok(phi)
}

/// Relabels a vertex of the inner ball into `V(n, k)`: the build colour goes
/// through `g_n`; the other colour through `g_n` on positive `(n-2)`-level and
/// through `g_{n-1}` otherwise.
fn relabel_inner(n: u32, colour: Colour, v: &VertexRef) -> Result<LabelSet> {
    if v.colour == colour || !v.label.is_member(n - 3) {
        g_map(n, &v.label)
    } else {
        g_map(n - 1, &v.label)
    }
}

fn fill_shell(n: u32, k: u32, colour: Colour, shell: &ShellResult, inner: &Ball, check_onion: bool) -> Result<Ball> {
    // B6: identify the interior boundary with the inner ball's boundary.
    let phi = interior_boundary_isomorphism(shell, &inner.boundary_complex())
        .map_err(|e| Error::construction("B6", e.to_string()))?;

    // B9: relabel the inner ball.
    let mut relabelled = inner.complex.clone();
    let ids: Vec<VertexId> = relabelled.vertex_ids().into_iter().collect();
    for id in ids {
        let new = relabel_inner(n, colour, relabelled.vertex(id).expect("own id"))?;
        relabelled.vertex_mut(id).expect("own id").label = new;
    }
    let mut ident = BTreeMap::new();
    for (&outer, &inner_id) in &phi {
        let want = shell.complex.label(outer);
        let got = relabelled.label(inner_id);
        if got != want {
            return Err(Error::construction(
                "B9",
                format!("boundary vertex {} relabelled to {got}", shell.complex.display_vertex(outer)),
            ));
        }
        ident.insert(inner_id, outer);
    }

    // B7/B8: glue.
    let (glued, map) = shell
        .complex
        .union_along(&relabelled, &ident, &inner.boundary_facets)
        .map_err(|e| Error::construction("B8", e.to_string()))?;
    let ball = Ball {
        complex: glued,
        boundary: shell.exterior_boundary.clone(),
        boundary_facets: shell.exterior_facets(),
    };
    check_ball_census(n, k, &ball)?;

    if check_onion {
        let outer: BTreeSet<VertexId> = shell
            .complex
            .vertex_ids()
            .into_iter()
            .filter(|v| !shell.interior_boundary.contains(v))
            .collect();
        let rest = ball.complex.without_vertices(&outer);
        if !check_isomorphism(&relabelled, &rest, &map) {
            return Err(Error::construction("B9", "ball minus the outer shell is not the inner ball"));
        }
    }
    Ok(ball)
}

/// Each element of `V(n-1, k)` labels exactly two boundary vertices (one per
/// colour) and each element of `V⁺(n, k)` exactly one interior vertex.
fn check_ball_census(n: u32, k: u32, ball: &Ball) -> Result<()> {
    let cx = &ball.complex;
    let mut boundary: BTreeMap<LabelSet, Vec<Colour>> = BTreeMap::new();
    let mut interior: BTreeMap<LabelSet, usize> = BTreeMap::new();
    for v in cx.vertices() {
        if ball.boundary.contains(&v.id) {
            boundary.entry(v.label.clone()).or_default().push(v.colour);
        } else {
            *interior.entry(v.label.clone()).or_default() += 1;
        }
    }
    let want_boundary = enumerate_vertex_sets(n - 1, k)?;
    let want_interior = positive_level_sets(n, k)?;
    let ok_boundary = boundary.len() == want_boundary.len()
        && want_boundary.iter().all(|a| {
            let mut cs = boundary.get(a).cloned().unwrap_or_default();
            cs.sort();
            cs == [Colour::Black, Colour::White]
        });
    let ok_interior = interior.len() == want_interior.len()
        && want_interior.iter().all(|a| interior.get(a) == Some(&1));
    if !ok_boundary || !ok_interior {
        return Err(Error::construction("B9", format!("label census of the ({n},{k}) ball is off")));
    }
    Ok(())
}

/// K1-K3: the ball and its colour-swapped mirror glued along the boundary.
fn glue_hemispheres(ball: &Ball) -> Result<TwoColouredComplex> {
    let (mirror, mmap) = ball.complex.mirror_with_colour_swap();
    let index = ball.complex.label_index()?;
    let mut ident = BTreeMap::new();
    for &v in &ball.boundary {
        let m = mmap[&v];
        let key = (mirror.colour(m), mirror.label(m).clone());
        let target = index
            .get(&key)
            .copied()
            .filter(|t| ball.boundary.contains(t))
            .ok_or_else(|| Error::construction("K3", format!("no equator partner for {}", mirror.display_vertex(m))))?;
        ident.insert(m, target);
    }
    let seam: Vec<Face> = ball
        .boundary_facets
        .iter()
        .map(|f| Face::new(f.iter().map(|v| mmap[v])))
        .collect();
    let (glued, _) = ball
        .complex
        .union_along(&mirror, &ident, &seam)
        .map_err(|e| Error::construction("K3", e.to_string()))?;
    let (mut sphere, _) = glued.canonicalized();
    let antipode = sphere.antipode_by_label()?;
    sphere.set_antipode(antipode)?;
    Ok(sphere)
}

pub fn build_shell(n: u32, k: u32, colour: Colour) -> Result<ShellResult> {
    Builder::new().shell(n, k, colour)
}

pub fn build_ball(n: u32, k: u32, colour: Colour) -> Result<Ball> {
    Ok((*Builder::new().ball(n, k, colour)?).clone())
}

pub fn build_sphere(n: u32, k: u32) -> Result<TwoColouredComplex> {
    Ok((*Builder::new().sphere(n, k)?).clone())
}

/// Facets of `k` as sets of `(colour, label)` pairs, sorted. Two complexes
/// with unique vertex labels are label-isomorphic iff these agree.
pub fn labelled_facets(k: &TwoColouredComplex) -> Vec<Vec<(Colour, LabelSet)>> {
    let mut out: Vec<Vec<(Colour, LabelSet)>> = k
        .facets()
        .iter()
        .map(|f: &Face| {
            let mut v: Vec<_> = f.iter().map(|&id| (k.colour(id), k.label(id).clone())).collect();
            v.sort();
            v
        })
        .collect();
    out.sort();
    out
}
