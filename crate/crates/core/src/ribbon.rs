//! Signed rotation systems.
//!
//! A [`RibbonGraph`] stores, for every vertex, the cyclic (clockwise from the
//! chosen side) order of its half-edges, and for every edge the two
//! half-edges it joins plus a twist bit. Half-edges are numbered
//! `0..2·e(G)`; edge `j` is usually, but not necessarily, `(2j, 2j+1)`.
//!
//! Boundary components are traced on *sides*: every half-edge `h` has a
//! `+` side facing its rotation successor and a `-` side facing its
//! predecessor. A corner at a vertex joins `(h,+)` to `(succ h,-)`; an
//! untwisted edge joins `(a,+)` to `(b,-)`, a twisted one `(a,+)` to `(b,+)`.
//! Every side has exactly one corner neighbour and one edge neighbour, so the
//! sides split into disjoint cycles, one per boundary component.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub twisted: bool,
}

impl Edge {
    pub fn new(a: usize, b: usize, twisted: bool) -> Self {
        Edge { a, b, twisted }
    }
}

/// One side of a half-edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Side {
    pub half_edge: usize,
    /// `true` for the side facing the rotation successor.
    pub positive: bool,
}

/// Topological data of a spanning ribbon subgraph `G|_A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SubgraphMetrics {
    pub e: usize,
    pub v: usize,
    pub k: usize,
    pub r: usize,
    pub n: usize,
    pub f: usize,
    /// 0 when orientable, 1 otherwise.
    pub t: u8,
    pub euler_genus: usize,
}

/// Underlying multigraph: loops and parallel edges are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractGraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl AbstractGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        AbstractGraph {
            vertex_count,
            edges,
        }
    }

    /// Symmetric edge-multiplicity matrix; a loop adds 2 to its diagonal
    /// entry.
    pub fn adjacency_counts(&self) -> Vec<Vec<u32>> {
        let n = self.vertex_count;
        let mut adj = vec![vec![0u32; n]; n];
        for &(u, v) in &self.edges {
            adj[u][v] += 1;
            adj[v][u] += 1;
        }
        adj
    }

    pub fn component_count(&self) -> usize {
        let mut uf = ParityUnionFind::new(self.vertex_count);
        for &(u, v) in &self.edges {
            uf.union(u, v, false);
        }
        uf.components
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonGraph {
    rotations: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    vertex_of: Vec<usize>,
    edge_of: Vec<usize>,
    succ: Vec<usize>,
    pred: Vec<usize>,
}

impl RibbonGraph {
    /// Validates and builds a ribbon graph. Edge records are checked before
    /// rotations, so a doubly-paired half-edge is reported as such even when
    /// the rotations are also incomplete.
    pub fn new(vertex_count: usize, rotations: Vec<Vec<usize>>, edges: Vec<Edge>) -> Result<Self> {
        if rotations.len() != vertex_count {
            return Err(Error::CountMismatch {
                what: "vertex rotations",
                declared: vertex_count,
                found: rotations.len(),
            });
        }
        let halves = 2 * edges.len();

        let mut edge_of = vec![usize::MAX; halves];
        for (j, edge) in edges.iter().enumerate() {
            for h in [edge.a, edge.b] {
                if h >= halves {
                    return Err(Error::HalfEdgeOutOfRange(h, halves));
                }
                if edge_of[h] != usize::MAX {
                    return Err(Error::PairedTwice(h));
                }
                edge_of[h] = j;
            }
        }

        let mut vertex_of = vec![usize::MAX; halves];
        let mut succ = vec![0; halves];
        let mut pred = vec![0; halves];
        for (v, rot) in rotations.iter().enumerate() {
            for (i, &h) in rot.iter().enumerate() {
                if h >= halves {
                    return Err(Error::HalfEdgeOutOfRange(h, halves));
                }
                if vertex_of[h] != usize::MAX {
                    return Err(Error::DuplicateInRotation(h));
                }
                vertex_of[h] = v;
                succ[h] = rot[(i + 1) % rot.len()];
                pred[h] = rot[(i + rot.len() - 1) % rot.len()];
            }
        }
        if let Some(h) = vertex_of.iter().position(|&v| v == usize::MAX) {
            return Err(Error::MissingFromRotation(h));
        }
        if let Some(h) = edge_of.iter().position(|&j| j == usize::MAX) {
            return Err(Error::Unpaired(h));
        }

        Ok(RibbonGraph {
            rotations,
            edges,
            vertex_of,
            edge_of,
            succ,
            pred,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn half_edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotations
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotations[v].len()
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    pub fn edge_of(&self, h: usize) -> usize {
        self.edge_of[h]
    }

    pub fn rotation_successor(&self, h: usize) -> usize {
        self.succ[h]
    }

    pub fn rotation_predecessor(&self, h: usize) -> usize {
        self.pred[h]
    }

    pub fn partner(&self, h: usize) -> usize {
        let e = &self.edges[self.edge_of[h]];
        if e.a == h {
            e.b
        } else {
            e.a
        }
    }

    pub fn endpoints(&self, j: usize) -> (usize, usize) {
        let e = &self.edges[j];
        (self.vertex_of[e.a], self.vertex_of[e.b])
    }

    pub fn underlying_graph(&self) -> AbstractGraph {
        AbstractGraph::new(
            self.vertex_count(),
            (0..self.edge_count()).map(|j| self.endpoints(j)).collect(),
        )
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() <= 1 || self.component_count() == 1
    }

    pub fn component_count(&self) -> usize {
        self.underlying_graph().component_count()
    }

    pub fn is_orientable(&self) -> bool {
        self.metrics_of(&vec![true; self.edge_count()]).t == 0
    }

    fn check_subset(&self, subset: &[usize]) -> Result<Vec<bool>> {
        let mut present = vec![false; self.edge_count()];
        for &j in subset {
            if j >= self.edge_count() {
                return Err(Error::EdgeOutOfRange {
                    index: j,
                    edges: self.edge_count(),
                });
            }
            present[j] = true;
        }
        Ok(present)
    }

    /// Metrics of the spanning ribbon subgraph on the edge indices `subset`.
    pub fn subgraph_metrics(&self, subset: &[usize]) -> Result<SubgraphMetrics> {
        let present = self.check_subset(subset)?;
        Ok(self.metrics_of(&present))
    }

    /// Metrics of the whole graph.
    pub fn metrics(&self) -> SubgraphMetrics {
        self.metrics_of(&vec![true; self.edge_count()])
    }

    pub(crate) fn metrics_of(&self, present: &[bool]) -> SubgraphMetrics {
        SubsetTracer::new(self).metrics(present)
    }

    /// Boundary walks of `G|_A`, each a cyclic list of sides. Isolated
    /// vertices carry a boundary circle with no sides and are not listed.
    pub fn boundary_walks(&self, subset: &[usize]) -> Result<Vec<Vec<Side>>> {
        let present = self.check_subset(subset)?;
        let mut tracer = SubsetTracer::new(self);
        tracer.restrict(&present);
        let mut walks = Vec::new();
        let mut seen = vec![false; 2 * self.half_edge_count()];
        for h in 0..self.half_edge_count() {
            if !present[self.edge_of[h]] {
                continue;
            }
            for s in [0usize, 1] {
                let start = 2 * h + s;
                if seen[start] {
                    continue;
                }
                let mut walk = Vec::new();
                let mut cur = start;
                loop {
                    seen[cur] = true;
                    let across = tracer.edge_move(cur);
                    seen[across] = true;
                    walk.push(side_of(cur));
                    walk.push(side_of(across));
                    cur = tracer.corner_move(across);
                    if cur == start {
                        break;
                    }
                }
                walks.push(walk);
            }
        }
        Ok(walks)
    }

    /// Toggles the twist bit on every edge in `subset`.
    pub fn partial_petrial(&self, subset: &[usize]) -> Result<RibbonGraph> {
        let present = self.check_subset(subset)?;
        let mut g = self.clone();
        for (edge, flip) in g.edges.iter_mut().zip(present) {
            edge.twisted ^= flip;
        }
        Ok(g)
    }

    /// The medial graph, cellularly embedded in the same surface.
    ///
    /// Vertex `j` of the result sits on edge `j` of `self`. Medial edge `h`
    /// follows the corner between half-edge `h` and its rotation successor,
    /// and consists of half-edges `2h` (at the `+` side of `h`) and `2h+1`
    /// (at the `-` side of `succ h`). Rotation at vertex `j` is
    /// `[UR, UL, LL, LR]` in the frame of the edge's `a` end; the corners
    /// `UR–UL` and `LL–LR` lie in faces of `self` (white), the other two in
    /// its vertices (black).
    pub fn medial_graph(&self) -> Result<RibbonGraph> {
        if self.edges.is_empty() {
            return Err(Error::NoEdges);
        }
        let k = self.component_count();
        if k != 1 {
            return Err(Error::Disconnected(k));
        }
        let mut rotations = Vec::with_capacity(self.edge_count());
        for j in 0..self.edge_count() {
            rotations.push(self.medial_rotation(j).to_vec());
        }
        let edges = (0..self.half_edge_count())
            .map(|h| {
                let g = self.succ[h];
                Edge::new(
                    2 * h,
                    2 * self.pred[g] + 1,
                    self.flipped_end(h) ^ self.flipped_end(g),
                )
            })
            .collect();
        RibbonGraph::new(self.edge_count(), rotations, edges)
    }

    /// Medial half-edges around the medial vertex of edge `j`, as
    /// `[UR, UL, LL, LR]`.
    pub(crate) fn medial_rotation(&self, j: usize) -> [usize; 4] {
        let e = self.edges[j];
        let ul = medial_half_edge(self, e.a, true);
        let ll = medial_half_edge(self, e.a, false);
        let ur = medial_half_edge(self, e.b, e.twisted);
        let lr = medial_half_edge(self, e.b, !e.twisted);
        [ur, ul, ll, lr]
    }

    /// The `b` end of a twisted edge sees the medial vertex with reversed
    /// orientation.
    fn flipped_end(&self, h: usize) -> bool {
        let e = &self.edges[self.edge_of[h]];
        e.twisted && e.b == h
    }

    /// A random signed rotation system with at most `max_vertices` vertices
    /// (at least one) and at most `max_edges` edges. Each edge is twisted
    /// with probability `twist_probability`.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        max_vertices: usize,
        max_edges: usize,
        twist_probability: f64,
    ) -> RibbonGraph {
        let v = rng.gen_range(1..=max_vertices.max(1));
        let e = rng.gen_range(0..=max_edges);
        let mut rotations = vec![Vec::new(); v];
        for h in 0..2 * e {
            rotations[rng.gen_range(0..v)].push(h);
        }
        for rot in &mut rotations {
            rot.shuffle(rng);
        }
        let mut ids: Vec<usize> = (0..2 * e).collect();
        ids.shuffle(rng);
        let edges = ids
            .chunks(2)
            .map(|p| Edge::new(p[0], p[1], rng.gen_bool(twist_probability)))
            .collect();
        RibbonGraph::new(v, rotations, edges).expect("random rotation system is valid")
    }
}

fn medial_half_edge(g: &RibbonGraph, h: usize, positive: bool) -> usize {
    if positive {
        2 * h
    } else {
        2 * g.pred[h] + 1
    }
}

fn side_of(id: usize) -> Side {
    Side {
        half_edge: id / 2,
        positive: id % 2 == 0,
    }
}

/// Reusable buffers for tracing many subsets of one graph.
pub(crate) struct SubsetTracer<'g> {
    g: &'g RibbonGraph,
    succ: Vec<usize>,
    pred: Vec<usize>,
    stamp: Vec<u32>,
    generation: u32,
    buf: Vec<usize>,
    uf: ParityUnionFind,
}

impl<'g> SubsetTracer<'g> {
    pub(crate) fn new(g: &'g RibbonGraph) -> Self {
        let halves = g.half_edge_count();
        SubsetTracer {
            g,
            succ: vec![0; halves],
            pred: vec![0; halves],
            stamp: vec![0; 2 * halves],
            generation: 0,
            buf: Vec::new(),
            uf: ParityUnionFind::new(g.vertex_count()),
        }
    }

    fn restrict(&mut self, present: &[bool]) -> usize {
        let mut isolated = 0;
        for rot in &self.g.rotations {
            self.buf.clear();
            self.buf
                .extend(rot.iter().copied().filter(|&h| present[self.g.edge_of[h]]));
            let m = self.buf.len();
            if m == 0 {
                isolated += 1;
            }
            for i in 0..m {
                let h = self.buf[i];
                self.succ[h] = self.buf[(i + 1) % m];
                self.pred[h] = self.buf[(i + m - 1) % m];
            }
        }
        isolated
    }

    #[inline]
    fn edge_move(&self, side: usize) -> usize {
        let h = side / 2;
        let e = &self.g.edges[self.g.edge_of[h]];
        let other = if e.a == h { e.b } else { e.a };
        let s = (side % 2) ^ usize::from(!e.twisted);
        2 * other + s
    }

    #[inline]
    fn corner_move(&self, side: usize) -> usize {
        let h = side / 2;
        if side % 2 == 0 {
            2 * self.succ[h] + 1
        } else {
            2 * self.pred[h]
        }
    }

    fn next_generation(&mut self) -> u32 {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        self.generation
    }

    pub(crate) fn metrics(&mut self, present: &[bool]) -> SubgraphMetrics {
        let g = self.g;
        let isolated = self.restrict(present);
        let gen = self.next_generation();
        let mut f = isolated;
        for h in 0..g.half_edge_count() {
            if !present[g.edge_of[h]] {
                continue;
            }
            for s in 0..2 {
                let start = 2 * h + s;
                if self.stamp[start] == gen {
                    continue;
                }
                f += 1;
                let mut cur = start;
                loop {
                    self.stamp[cur] = gen;
                    let across = self.edge_move(cur);
                    self.stamp[across] = gen;
                    cur = self.corner_move(across);
                    if cur == start {
                        break;
                    }
                }
            }
        }

        self.uf.reset();
        let mut e = 0;
        let mut t = 0u8;
        for (j, edge) in g.edges.iter().enumerate() {
            if !present[j] {
                continue;
            }
            e += 1;
            if !self
                .uf
                .union(g.vertex_of[edge.a], g.vertex_of[edge.b], edge.twisted)
            {
                t = 1;
            }
        }
        let v = g.vertex_count();
        let k = self.uf.components;
        let r = v - k;
        let n = e - r;
        SubgraphMetrics {
            e,
            v,
            k,
            r,
            n,
            f,
            t,
            euler_genus: 2 * k + e - v - f,
        }
    }
}

/// Union–find that also tracks the parity of the path between two vertices,
/// used both for components and for orientability.
#[derive(Clone, Debug)]
pub(crate) struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
    pub(crate) components: usize,
}

impl ParityUnionFind {
    pub(crate) fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n).collect(),
            parity: vec![false; n],
            components: n,
        }
    }

    fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
        self.parity.iter_mut().for_each(|p| *p = false);
        self.components = self.parent.len();
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let mut root = x;
        let mut acc = false;
        while self.parent[root] != root {
            acc ^= self.parity[root];
            root = self.parent[root];
        }
        // compress
        let mut cur = x;
        let mut cur_par = acc;
        while self.parent[cur] != root && self.parent[cur] != cur {
            let next = self.parent[cur];
            let next_par = cur_par ^ self.parity[cur];
            self.parent[cur] = root;
            self.parity[cur] = cur_par;
            cur = next;
            cur_par = next_par;
        }
        (root, acc)
    }

    /// Joins `a` and `b` with relative parity `odd`. Returns `false` when the
    /// constraint contradicts an existing one.
    pub(crate) fn union(&mut self, a: usize, b: usize, odd: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == odd;
        }
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ odd;
        self.components -= 1;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn loop_graph(twisted: bool) -> RibbonGraph {
        RibbonGraph::new(1, vec![vec![0, 1]], vec![Edge::new(0, 1, twisted)]).unwrap()
    }

    pub(crate) fn theta() -> RibbonGraph {
        RibbonGraph::new(
            2,
            vec![vec![0, 2, 4], vec![1, 3, 5]],
            vec![
                Edge::new(0, 1, false),
                Edge::new(2, 3, false),
                Edge::new(4, 5, false),
            ],
        )
        .unwrap()
    }

    fn planar_theta() -> RibbonGraph {
        // Reversing one rotation gives the planar embedding.
        RibbonGraph::new(
            2,
            vec![vec![0, 2, 4], vec![5, 3, 1]],
            vec![
                Edge::new(0, 1, false),
                Edge::new(2, 3, false),
                Edge::new(4, 5, false),
            ],
        )
        .unwrap()
    }

    #[test]
    fn builds_loop_and_theta() {
        let g = loop_graph(false);
        assert_eq!((g.vertex_count(), g.edge_count(), g.degree(0)), (1, 1, 2));
        let t = theta();
        assert_eq!(t.edge_count(), 3);
        assert_eq!(t.partner(2), 3);
    }

    #[test]
    fn rejects_double_pairing() {
        let err = RibbonGraph::new(
            1,
            vec![vec![0, 1]],
            vec![Edge::new(0, 1, false), Edge::new(0, 1, false)],
        )
        .unwrap_err();
        assert_eq!(err, Error::PairedTwice(0));
        assert!(err.to_string().contains("half-edge 0 paired twice"));
    }

    #[test]
    fn rejects_bad_rotations() {
        let e = vec![Edge::new(0, 1, false)];
        assert_eq!(
            RibbonGraph::new(1, vec![vec![0, 1, 1]], e.clone()).unwrap_err(),
            Error::DuplicateInRotation(1)
        );
        assert_eq!(
            RibbonGraph::new(1, vec![vec![0]], e.clone()).unwrap_err(),
            Error::MissingFromRotation(1)
        );
        assert_eq!(
            RibbonGraph::new(1, vec![vec![0, 7]], e).unwrap_err(),
            Error::HalfEdgeOutOfRange(7, 2)
        );
    }

    #[test]
    fn annulus_and_moebius() {
        let m = loop_graph(false).subgraph_metrics(&[0]).unwrap();
        assert_eq!(
            m,
            SubgraphMetrics {
                e: 1,
                v: 1,
                k: 1,
                r: 0,
                n: 1,
                f: 2,
                t: 0,
                euler_genus: 0
            }
        );
        let m = loop_graph(true).subgraph_metrics(&[0]).unwrap();
        assert_eq!((m.f, m.t, m.euler_genus), (1, 1, 1));
    }

    #[test]
    fn theta_metrics() {
        let m = planar_theta().metrics();
        assert_eq!(
            m,
            SubgraphMetrics {
                e: 3,
                v: 2,
                k: 1,
                r: 1,
                n: 2,
                f: 3,
                t: 0,
                euler_genus: 0
            }
        );
        // The other rotation puts theta on the torus with a single face.
        let m = theta().metrics();
        assert_eq!((m.f, m.euler_genus), (1, 2));
    }

    #[test]
    fn empty_subset() {
        let m = theta().subgraph_metrics(&[]).unwrap();
        assert_eq!(
            m,
            SubgraphMetrics {
                e: 0,
                v: 2,
                k: 2,
                r: 0,
                n: 0,
                f: 2,
                t: 0,
                euler_genus: 0
            }
        );
        assert_eq!(
            theta().subgraph_metrics(&[3]).unwrap_err(),
            Error::EdgeOutOfRange { index: 3, edges: 3 }
        );
    }

    #[test]
    fn medial_examples() {
        let m = loop_graph(false).medial_graph().unwrap();
        let mm = m.metrics();
        assert_eq!(
            (m.vertex_count(), m.edge_count(), mm.f, mm.euler_genus),
            (1, 2, 3, 0)
        );

        let m = planar_theta().medial_graph().unwrap();
        let mm = m.metrics();
        assert_eq!(
            (m.vertex_count(), m.edge_count(), mm.f, mm.euler_genus),
            (3, 6, 5, 0)
        );
        assert!((0..3).all(|v| m.degree(v) == 4));
    }

    #[test]
    fn medial_rejects_empty_and_disconnected() {
        let single = RibbonGraph::new(1, vec![vec![]], vec![]).unwrap();
        assert_eq!(single.medial_graph().unwrap_err(), Error::NoEdges);
        let two_loops = RibbonGraph::new(
            2,
            vec![vec![0, 1], vec![2, 3]],
            vec![Edge::new(0, 1, false), Edge::new(2, 3, false)],
        )
        .unwrap();
        assert_eq!(
            two_loops.medial_graph().unwrap_err(),
            Error::Disconnected(2)
        );
    }

    #[test]
    fn partial_petrial_examples() {
        let g = theta();
        assert_eq!(g.partial_petrial(&[]).unwrap(), g);
        assert_eq!(
            loop_graph(false).partial_petrial(&[0]).unwrap(),
            loop_graph(true)
        );
        let once = g.partial_petrial(&[0, 2]).unwrap();
        assert_eq!(once.partial_petrial(&[0, 2]).unwrap(), g);
    }

    #[test]
    fn boundary_walks_cover_all_sides() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let g = RibbonGraph::random(&mut rng, 5, 7, 0.3);
            let all: Vec<usize> = (0..g.edge_count()).collect();
            let walks = g.boundary_walks(&all).unwrap();
            let total: usize = walks.iter().map(Vec::len).sum();
            let degree_sum: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
            assert_eq!(total, 2 * degree_sum);
            let isolated = (0..g.vertex_count()).filter(|&v| g.degree(v) == 0).count();
            assert_eq!(walks.len() + isolated, g.metrics().f);
        }
    }
}
