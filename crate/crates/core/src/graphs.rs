//! Kneser and Schrijver graphs, the associated graph of a 2-coloured
//! complex, the antipodal quotient `QG(n, k)`, and exact colouring.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::complex::{TwoColouredComplex, VertexId};
use crate::error::{Error, Result};
use crate::setkit::{enumerate_vertex_sets, LabelSet};

/// Undirected simple graph with labelled vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph<L> {
    labels: Vec<L>,
    adj: Vec<Vec<usize>>,
}

impl<L> SimpleGraph<L> {
    pub fn new(labels: Vec<L>) -> Self {
        let adj = vec![Vec::new(); labels.len()];
        SimpleGraph { labels, adj }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(labels: Vec<L>, edges: I) -> Result<Self> {
        let mut g = SimpleGraph::new(labels);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `{u, v}`; returns false if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.labels.len();
        if u >= n || v >= n {
            return Err(Error::Structural(format!("edge ({u},{v}) out of range for {n} vertices")));
        }
        if u == v {
            return Err(Error::Structural(format!("loop at vertex {u}")));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(true)
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        match (self.adj[u].binary_search(&v), self.adj[v].binary_search(&u)) {
            (Ok(i), Ok(j)) => {
                self.adj[u].remove(i);
                self.adj[v].remove(j);
                true
            }
            _ => false,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &L {
        &self.labels[v]
    }

    /// Sorted neighbour lists, indexed by vertex.
    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (u, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Self
    where
        L: Clone,
    {
        let mut g = self.clone();
        g.remove_edge(u, v);
        g
    }

    /// Subgraph induced on `vs`, with vertices renumbered in the given order.
    pub fn induced(&self, vs: &[usize]) -> Self
    where
        L: Clone,
    {
        let pos: HashMap<usize, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = SimpleGraph::new(vs.iter().map(|&v| self.labels[v].clone()).collect());
        for (i, &v) in vs.iter().enumerate() {
            for w in &self.adj[v] {
                if let Some(&j) = pos.get(w) {
                    if i < j {
                        g.add_edge(i, j).expect("in range");
                    }
                }
            }
        }
        g
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_bipartite(&self) -> bool {
        let n = self.num_vertices();
        let mut side = vec![u8::MAX; n];
        for s in 0..n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[v];
                        stack.push(w);
                    } else if side[w] == side[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True iff `colouring` gives adjacent vertices different colours.
    pub fn is_proper_colouring(&self, colouring: &[usize]) -> bool {
        colouring.len() == self.num_vertices() && self.edges().iter().all(|&(u, v)| colouring[u] != colouring[v])
    }
}

impl<L: Ord> SimpleGraph<L> {
    pub fn index_of(&self, label: &L) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// `KG(n, k)`: all `k`-subsets of `[n]`, adjacent when disjoint.
pub fn kneser_graph(n: u32, k: u32) -> Result<SimpleGraph<LabelSet>> {
    if k == 0 || n < 2 * k {
        return Err(Error::Parameter(format!("KG(n,k) needs k >= 1 and n >= 2k, got n={n}, k={k}")));
    }
    let mut sets = Vec::new();
    let mut cur = Vec::with_capacity(k as usize);
    all_subsets(1, n, k as usize, &mut cur, &mut sets);
    Ok(disjointness_graph(sets))
}

fn all_subsets(start: u32, n: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<LabelSet>) {
    if cur.len() == k {
        out.push(LabelSet::new(cur.iter().copied()));
        return;
    }
    for x in start..=n {
        if n - x + 1 < (k - cur.len()) as u32 {
            break;
        }
        cur.push(x);
        all_subsets(x + 1, n, k, cur, out);
        cur.pop();
    }
}

fn disjointness_graph(sets: Vec<LabelSet>) -> SimpleGraph<LabelSet> {
    let mut g = SimpleGraph::new(sets);
    let n = g.num_vertices();
    for u in 0..n {
        for v in u + 1..n {
            if g.labels[u].is_disjoint(&g.labels[v]) {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    g
}

/// `SG(n, k)`: the subgraph of `KG(n, k)` induced on `V(n, k)`.
pub fn schrijver_graph(n: u32, k: u32) -> Result<SimpleGraph<LabelSet>> {
    if k == 0 || n < 2 * k + 1 {
        return Err(Error::Parameter(format!("SG(n,k) needs k >= 1 and n >= 2k+1, got n={n}, k={k}")));
    }
    Ok(disjointness_graph(enumerate_vertex_sets(n, k)?))
}

/// Bichromatic edges of `k`, on all of its vertices (in id order).
pub fn associated_graph(k: &TwoColouredComplex) -> SimpleGraph<VertexId> {
    let ids: Vec<VertexId> = k.vertex_ids().into_iter().collect();
    let pos: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut g = SimpleGraph::new(ids);
    for f in k.facets() {
        for (i, &u) in f.iter().enumerate() {
            for &v in &f[i + 1..] {
                if k.colour(u) != k.colour(v) {
                    g.add_edge(pos[&u], pos[&v]).expect("in range");
                }
            }
        }
    }
    g
}

/// `QG(n, k)` together with the label images of the facets of `Q(n, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGraph {
    pub graph: SimpleGraph<LabelSet>,
    /// Each quotient facet as sorted vertex indices into `graph`.
    pub quotient_facets: Vec<Vec<usize>>,
}

/// Identifies `b(A)` with `w(A)` and forgets colours.
pub fn quotient_graph(k: &TwoColouredComplex) -> Result<QuotientGraph> {
    let antipode = k
        .antipode()
        .ok_or_else(|| Error::Precondition("quotient needs an antipode".into()))?;
    for (&v, &w) in antipode {
        if k.label(v) != k.label(w) {
            return Err(Error::Precondition(format!(
                "antipode pairs {} with {}",
                k.display_vertex(v),
                k.display_vertex(w)
            )));
        }
    }
    let labels: BTreeSet<LabelSet> = k.vertices().map(|v| v.label.clone()).collect();
    let labels: Vec<LabelSet> = labels.into_iter().collect();
    let pos: BTreeMap<&LabelSet, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let index = |id: VertexId| pos[k.label(id)];
    let mut graph = SimpleGraph::new(labels.clone());
    let mut facets = BTreeSet::new();
    for f in k.facets() {
        let mut q: Vec<usize> = f.iter().map(|&v| index(v)).collect();
        q.sort_unstable();
        q.dedup();
        facets.insert(q);
        for (i, &u) in f.iter().enumerate() {
            for &v in &f[i + 1..] {
                if k.colour(u) != k.colour(v) && index(u) != index(v) {
                    graph.add_edge(index(u), index(v))?;
                }
            }
        }
    }
    Ok(QuotientGraph {
        graph,
        quotient_facets: facets.into_iter().collect(),
    })
}

/// True iff both graphs have the same labels and every edge of `sub` is an
/// edge of `sup`.
pub fn is_spanning_subgraph<L: Ord>(sub: &SimpleGraph<L>, sup: &SimpleGraph<L>) -> bool {
    let a: BTreeSet<&L> = sub.labels.iter().collect();
    let b: BTreeSet<&L> = sup.labels.iter().collect();
    if a != b || a.len() != sub.labels.len() || b.len() != sup.labels.len() {
        return false;
    }
    let pos: BTreeMap<&L, usize> = sup.labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    sub.edges()
        .iter()
        .all(|&(u, v)| sup.has_edge(pos[&sub.labels[u]], pos[&sub.labels[v]]))
}

/// Limits on a colouring search. Both are checked between search nodes.
#[derive(Copy, Clone, Debug)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub timeout: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_nodes: None,
            timeout: None,
        }
    }

    pub fn with_timeout(timeout: Duration) -> Self {
        Budget {
            max_nodes: None,
            timeout: Some(timeout),
        }
    }

    pub fn with_nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
            timeout: None,
        }
    }

    pub fn start(&self) -> Meter {
        Meter {
            nodes: 0,
            max_nodes: self.max_nodes,
            deadline: self.timeout.map(|t| Instant::now() + t),
            zero: self.timeout == Some(Duration::ZERO),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}

/// Running count against a [`Budget`].
#[derive(Debug)]
pub struct Meter {
    nodes: u64,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
    zero: bool,
}

impl Meter {
    /// Counts one search node; false once the budget is spent.
    pub fn tick(&mut self) -> bool {
        if self.zero {
            return false;
        }
        self.nodes += 1;
        if self.max_nodes.is_some_and(|m| self.nodes > m) {
            return false;
        }
        if self.nodes.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.zero = true;
                    return false;
                }
            }
        }
        true
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Colourable(Vec<usize>),
    NotColourable,
    Unknown,
}

/// A `q`-colourability decision procedure.
pub trait ColouringStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    /// `adj` holds sorted neighbour lists of vertices `0..adj.len()`.
    fn decide(&self, adj: &[Vec<usize>], q: usize, meter: &mut Meter) -> Decision;
}

/// Backtracking that always branches on the uncoloured vertex with the most
/// distinct neighbour colours (ties: most uncoloured neighbours, then index).
/// A new colour is only ever opened as the next unused one.
pub struct Dsatur;

/// Backtracking over a fixed order (degree descending, then index).
pub struct StaticOrder;

impl ColouringStrategy for Dsatur {
    fn name(&self) -> &'static str {
        "dsatur"
    }

    fn decide(&self, adj: &[Vec<usize>], q: usize, meter: &mut Meter) -> Decision {
        let n = adj.len();
        let mut st = DsaturState {
            adj,
            q,
            colour: vec![usize::MAX; n],
            forbid: vec![vec![0u32; q.max(1)]; n],
            sat: vec![0; n],
        };
        match st.search(0, 0, meter) {
            Some(true) => Decision::Colourable(st.colour),
            Some(false) => Decision::NotColourable,
            None => Decision::Unknown,
        }
    }
}

struct DsaturState<'a> {
    adj: &'a [Vec<usize>],
    q: usize,
    colour: Vec<usize>,
    forbid: Vec<Vec<u32>>,
    sat: Vec<usize>,
}

impl DsaturState<'_> {
    fn pick(&self) -> Option<usize> {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..self.adj.len() {
            if self.colour[v] != usize::MAX {
                continue;
            }
            let free = self.adj[v].iter().filter(|&&w| self.colour[w] == usize::MAX).count();
            let key = (self.sat[v], free, usize::MAX - v);
            if best.is_none_or(|b| key > b) {
                best = Some(key);
            }
        }
        best.map(|(_, _, v)| usize::MAX - v)
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.colour[v] = c;
        for i in 0..self.adj[v].len() {
            let w = self.adj[v][i];
            if self.forbid[w][c] == 0 {
                self.sat[w] += 1;
            }
            self.forbid[w][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.colour[v] = usize::MAX;
        for i in 0..self.adj[v].len() {
            let w = self.adj[v][i];
            self.forbid[w][c] -= 1;
            if self.forbid[w][c] == 0 {
                self.sat[w] -= 1;
            }
        }
    }

    fn search(&mut self, done: usize, used: usize, meter: &mut Meter) -> Option<bool> {
        if done == self.adj.len() {
            return Some(true);
        }
        if !meter.tick() {
            return None;
        }
        let v = self.pick().expect("uncoloured vertex left");
        if self.sat[v] >= self.q {
            return Some(false);
        }
        let limit = (used + 1).min(self.q);
        for c in 0..limit {
            if self.forbid[v][c] > 0 {
                continue;
            }
            self.assign(v, c);
            let r = self.search(done + 1, used.max(c + 1), meter);
            if r == Some(true) {
                return r;
            }
            self.unassign(v, c);
            r?;
        }
        Some(false)
    }
}

impl ColouringStrategy for StaticOrder {
    fn name(&self) -> &'static str {
        "backtrack"
    }

    fn decide(&self, adj: &[Vec<usize>], q: usize, meter: &mut Meter) -> Decision {
        let n = adj.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].len()), v));
        let mut colour = vec![usize::MAX; n];
        fn go(
            i: usize,
            used: usize,
            order: &[usize],
            adj: &[Vec<usize>],
            q: usize,
            colour: &mut [usize],
            meter: &mut Meter,
        ) -> Option<bool> {
            if i == order.len() {
                return Some(true);
            }
            if !meter.tick() {
                return None;
            }
            let v = order[i];
            for c in 0..(used + 1).min(q) {
                if adj[v].iter().any(|&w| colour[w] == c) {
                    continue;
                }
                colour[v] = c;
                match go(i + 1, used.max(c + 1), order, adj, q, colour, meter) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
                colour[v] = usize::MAX;
            }
            Some(false)
        }
        match go(0, 0, &order, adj, q, &mut colour, meter) {
            Some(true) => Decision::Colourable(colour),
            Some(false) => Decision::NotColourable,
            None => Decision::Unknown,
        }
    }
}

/// Colouring strategies by name.
pub fn colouring_strategy(name: &str) -> Option<Box<dyn ColouringStrategy>> {
    match name {
        "dsatur" => Some(Box::new(Dsatur)),
        "backtrack" => Some(Box::new(StaticOrder)),
        _ => None,
    }
}

pub fn colouring_strategy_names() -> &'static [&'static str] {
    &["dsatur", "backtrack"]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chromatic {
    /// The chromatic number with an optimal colouring.
    Exact { chi: usize, colouring: Vec<usize> },
    /// The budget ran out; `lower <= χ <= upper`.
    Inconclusive { lower: usize, upper: usize },
}

impl Chromatic {
    pub fn value(&self) -> Option<usize> {
        match self {
            Chromatic::Exact { chi, .. } => Some(*chi),
            Chromatic::Inconclusive { .. } => None,
        }
    }
}

impl fmt::Display for Chromatic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chromatic::Exact { chi, .. } => write!(f, "chi={chi}"),
            Chromatic::Inconclusive { lower, upper } => write!(f, "inconclusive {lower}<=chi<={upper}"),
        }
    }
}

/// Greedy DSATUR colouring; an upper bound on χ.
pub fn dsatur_greedy(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut colour = vec![usize::MAX; n];
    let mut seen: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colour[v] == usize::MAX)
            .max_by_key(|&v| (seen[v].len(), adj[v].len(), usize::MAX - v))
            .expect("uncoloured vertex");
        let c = (0..).find(|c| !seen[v].contains(c)).expect("free colour");
        colour[v] = c;
        for &w in &adj[v] {
            seen[w].insert(c);
        }
    }
    colour
}

/// A clique found greedily from every start vertex; a lower bound on χ.
pub fn greedy_clique(adj: &[Vec<usize>]) -> Vec<usize> {
    let mut best = Vec::new();
    for s in 0..adj.len() {
        let mut clique = vec![s];
        let mut cand: Vec<usize> = adj[s].clone();
        while !cand.is_empty() {
            let v = *cand
                .iter()
                .max_by_key(|&&v| (cand.iter().filter(|&&w| adj[v].binary_search(&w).is_ok()).count(), usize::MAX - v))
                .expect("nonempty");
            clique.push(v);
            cand.retain(|&w| w != v && adj[v].binary_search(&w).is_ok());
        }
        if clique.len() > best.len() {
            clique.sort_unstable();
            best = clique;
        }
    }
    best
}

/// Exact chromatic number, component by component.
pub fn chromatic_number<L>(g: &SimpleGraph<L>, strategy: &dyn ColouringStrategy, budget: Budget) -> Chromatic {
    let mut meter = budget.start();
    let n = g.num_vertices();
    if n == 0 {
        return Chromatic::Exact {
            chi: 0,
            colouring: Vec::new(),
        };
    }
    let mut colouring = vec![0; n];
    let mut chi = 0;
    let mut lower_all = 0;
    let mut upper_all = 0;
    let mut exact = true;
    for comp in g.connected_components() {
        let pos: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj: Vec<Vec<usize>> = comp
            .iter()
            .map(|&v| {
                let mut nb: Vec<usize> = g.adj[v].iter().map(|w| pos[w]).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        match component_chromatic(&adj, strategy, &mut meter) {
            Ok((c, col)) => {
                for (i, &v) in comp.iter().enumerate() {
                    colouring[v] = col[i];
                }
                chi = chi.max(c);
                lower_all = lower_all.max(c);
                upper_all = upper_all.max(c);
            }
            Err((lo, hi)) => {
                exact = false;
                lower_all = lower_all.max(lo);
                upper_all = upper_all.max(hi);
            }
        }
    }
    if exact {
        Chromatic::Exact { chi, colouring }
    } else {
        Chromatic::Inconclusive {
            lower: lower_all,
            upper: upper_all,
        }
    }
}

fn component_chromatic(
    adj: &[Vec<usize>],
    strategy: &dyn ColouringStrategy,
    meter: &mut Meter,
) -> std::result::Result<(usize, Vec<usize>), (usize, usize)> {
    let mut best = dsatur_greedy(adj);
    let mut upper = best.iter().max().map_or(0, |&c| c + 1);
    let lower = greedy_clique(adj).len().max(1);
    while upper > lower {
        match strategy.decide(adj, upper - 1, meter) {
            Decision::Colourable(c) => {
                best = c;
                upper -= 1;
            }
            Decision::NotColourable => break,
            Decision::Unknown => return Err((lower, upper)),
        }
    }
    Ok((upper, best))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeVerdict {
    /// Deleting the edge lowers χ; carries a colouring of `G - e`.
    Critical(Vec<usize>),
    /// `G - e` still needs the target number of colours.
    NotCritical,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct CriticalityReport<L> {
    pub target: usize,
    pub edges: Vec<((usize, usize), EdgeVerdict)>,
    pub graph: SimpleGraph<L>,
}

impl<L> CriticalityReport<L> {
    pub fn is_critical(&self) -> bool {
        self.edges.iter().all(|(_, v)| matches!(v, EdgeVerdict::Critical(_)))
    }

    pub fn first_violation(&self) -> Option<(usize, usize)> {
        self.edges
            .iter()
            .find(|(_, v)| matches!(v, EdgeVerdict::NotCritical))
            .map(|(e, _)| *e)
    }

    pub fn first_inconclusive(&self) -> Option<(usize, usize)> {
        self.edges
            .iter()
            .find(|(_, v)| matches!(v, EdgeVerdict::Inconclusive))
            .map(|(e, _)| *e)
    }

    pub fn is_conclusive(&self) -> bool {
        self.first_inconclusive().is_none()
    }
}

/// For every edge `e`, decides whether `G - e` is `(target - 1)`-colourable.
/// Each edge gets a fresh search with its own copy of `budget`; edges are
/// processed in parallel.
pub fn check_edge_critical<L: Clone + Send + Sync>(
    g: &SimpleGraph<L>,
    target: usize,
    strategy: &dyn ColouringStrategy,
    budget: Budget,
) -> Result<CriticalityReport<L>> {
    if target == 0 {
        return Err(Error::Precondition("target chromatic number must be positive".into()));
    }
    let edges = g.edges();
    let verdicts: Vec<Result<EdgeVerdict>> = edges
        .par_iter()
        .map(|&(u, v)| {
            let h = g.without_edge(u, v);
            let mut meter = budget.start();
            match strategy.decide(&h.adj, target - 1, &mut meter) {
                Decision::Colourable(c) => {
                    if !h.is_proper_colouring(&c) || c[u] != c[v] {
                        return Err(Error::Structural(format!(
                            "colouring of G - ({u},{v}) would properly colour G with {} colours",
                            target - 1
                        )));
                    }
                    Ok(EdgeVerdict::Critical(c))
                }
                Decision::NotColourable => Ok(EdgeVerdict::NotCritical),
                Decision::Unknown => Ok(EdgeVerdict::Inconclusive),
            }
        })
        .collect();
    let mut out = Vec::with_capacity(edges.len());
    for (e, v) in edges.into_iter().zip(verdicts) {
        out.push((e, v?));
    }
    Ok(CriticalityReport {
        target,
        edges: out,
        graph: g.clone(),
    })
}

/// Removes a vertex from the graph; used for vertex-criticality sweeps.
pub fn without_vertex<L: Clone>(g: &SimpleGraph<L>, v: usize) -> SimpleGraph<L> {
    let keep: Vec<usize> = (0..g.num_vertices()).filter(|&u| u != v).collect();
    g.induced(&keep)
}

/// True iff deleting any single vertex lowers χ.
pub fn is_vertex_critical<L: Clone + Send + Sync>(
    g: &SimpleGraph<L>,
    target: usize,
    strategy: &dyn ColouringStrategy,
    budget: Budget,
) -> Option<bool> {
    let verdicts: Vec<Decision> = (0..g.num_vertices())
        .into_par_iter()
        .map(|v| {
            let h = without_vertex(g, v);
            strategy.decide(&h.adj, target - 1, &mut budget.start())
        })
        .collect();
    if verdicts.contains(&Decision::Unknown) {
        return None;
    }
    Some(verdicts.iter().all(|d| matches!(d, Decision::Colourable(_))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_sphere;

    fn cycle(n: usize) -> SimpleGraph<usize> {
        SimpleGraph::from_edges((0..n).collect(), (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> SimpleGraph<usize> {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        SimpleGraph::from_edges((0..n).collect(), edges).unwrap()
    }

    fn chi<L>(g: &SimpleGraph<L>) -> usize {
        chromatic_number(g, &Dsatur, Budget::unlimited()).value().unwrap()
    }

    #[test]
    fn petersen() {
        let kg = kneser_graph(5, 2).unwrap();
        assert_eq!(kg.num_vertices(), 10);
        assert_eq!(kg.num_edges(), 15);
        assert!(kg.neighbours(0).len() == 3);
        assert_eq!(chi(&kg), 3);
    }

    #[test]
    fn kneser_small() {
        let k4 = kneser_graph(4, 1).unwrap();
        assert_eq!(k4.num_edges(), 6);
        let m = kneser_graph(6, 3).unwrap();
        assert_eq!(m.num_vertices(), 20);
        assert_eq!(m.num_edges(), 10);
        assert!((0..20).all(|v| m.degree(v) == 1));
        assert!(kneser_graph(3, 2).is_err());
    }

    #[test]
    fn schrijver_small() {
        let sg = schrijver_graph(5, 2).unwrap();
        assert_eq!(sg.num_vertices(), 5);
        assert_eq!(sg.num_edges(), 5);
        assert!((0..5).all(|v| sg.degree(v) == 2));
        assert_eq!(schrijver_graph(6, 1).unwrap().num_edges(), 15);
        assert_eq!(schrijver_graph(8, 3).unwrap().num_vertices(), 16);
        assert!(!is_spanning_subgraph(&sg, &kneser_graph(5, 2).unwrap()));
    }

    #[test]
    fn spanning() {
        let c5 = cycle(5);
        let mut chord = c5.clone();
        chord.add_edge(0, 2).unwrap();
        assert!(!is_spanning_subgraph(&chord, &c5));
        assert!(is_spanning_subgraph(&c5, &chord));
        assert!(is_spanning_subgraph(&c5, &c5));
        let kg = kneser_graph(5, 2).unwrap();
        let sg = schrijver_graph(5, 2).unwrap();
        let on_sg: Vec<usize> = sg.labels().iter().map(|l| kg.index_of(l).unwrap()).collect();
        assert!(is_spanning_subgraph(&sg, &kg.induced(&on_sg)));
    }

    #[test]
    fn calibration() {
        for m in 1..=6 {
            assert_eq!(chi(&complete(m)), m);
            assert_eq!(chi(&cycle(2 * m + 1)), 3);
            assert_eq!(chromatic_number(&complete(m), &StaticOrder, Budget::unlimited()).value(), Some(m));
        }
        assert_eq!(chi(&cycle(6)), 2);
        assert_eq!(chi(&SimpleGraph::<u8>::new(vec![1, 2])), 1);
    }

    #[test]
    fn zero_timeout_is_inconclusive() {
        let g = kneser_graph(5, 2).unwrap();
        match chromatic_number(&g, &Dsatur, Budget::with_timeout(Duration::ZERO)) {
            Chromatic::Inconclusive { lower, upper } => assert!(lower <= 3 && 3 <= upper),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn associated_drops_monochromatic_edges() {
        let q = build_sphere(5, 2).unwrap();
        let g = associated_graph(&q);
        assert_eq!(g.num_vertices(), 10);
        assert_eq!(g.num_edges(), 10);
        let q = build_sphere(6, 2).unwrap();
        let g = associated_graph(&q);
        assert!(g.num_edges() < q.faces_of_dim(1).len());
    }

    #[test]
    fn small_quotients() {
        let qg = quotient_graph(&build_sphere(5, 2).unwrap()).unwrap();
        assert_eq!(qg.graph, schrijver_graph(5, 2).unwrap());
        let qg = quotient_graph(&build_sphere(4, 1).unwrap()).unwrap();
        assert_eq!(qg.graph.num_edges(), 6);
        assert!(quotient_graph(&TwoColouredComplex::new()).is_err());
    }

    #[test]
    fn odd_cycle_is_edge_critical() {
        let c5 = cycle(5);
        let r = check_edge_critical(&c5, 3, &Dsatur, Budget::unlimited()).unwrap();
        assert!(r.is_critical());
        let r = check_edge_critical(&complete(4), 4, &StaticOrder, Budget::unlimited()).unwrap();
        assert!(r.is_critical());
        // K4 plus a pendant vertex: the pendant edge is not critical.
        let mut p = SimpleGraph::new((0..5).collect::<Vec<usize>>());
        for (u, v) in complete(4).edges() {
            p.add_edge(u, v).unwrap();
        }
        p.add_edge(3, 4).unwrap();
        let r = check_edge_critical(&p, 4, &Dsatur, Budget::unlimited()).unwrap();
        assert_eq!(r.first_violation(), Some((3, 4)));
    }

    #[test]
    fn strategies_agree() {
        for (n, k) in [(5, 2), (6, 2), (7, 3), (8, 3)] {
            let qg = quotient_graph(&build_sphere(n, k).unwrap()).unwrap().graph;
            let a = chromatic_number(&qg, &Dsatur, Budget::unlimited()).value();
            let b = chromatic_number(&qg, &StaticOrder, Budget::unlimited()).value();
            assert_eq!(a, b);
            assert_eq!(a, Some((n - 2 * k + 2) as usize));
        }
        assert!(colouring_strategy("dsatur").is_some());
        assert!(colouring_strategy("nope").is_none());
    }

    #[test]
    fn schrijver_is_vertex_critical() {
        let sg = schrijver_graph(6, 2).unwrap();
        assert_eq!(is_vertex_critical(&sg, 4, &Dsatur, Budget::unlimited()), Some(true));
        let kg = kneser_graph(5, 2).unwrap();
        assert_eq!(is_vertex_critical(&kg, 3, &Dsatur, Budget::unlimited()), Some(false));
    }
}
