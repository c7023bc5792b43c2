//! Bollobás–Riordan, Tutte and Penrose polynomials.
//!
//! All three are state sums over the `2^e(G)` edge subsets. Subsets are
//! split into contiguous blocks that rayon processes independently; each
//! block accumulates exact integer counts, and blocks are merged in index
//! order, so results do not depend on the number of worker threads.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly, Var};
use crate::ribbon::{AbstractGraph, RibbonGraph, SubsetTracer};

pub const DEFAULT_MAX_EDGES: usize = 26;

/// Enumeration limits. The default admits 26 edges (about 6.7·10⁷ states).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_edges: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_edges: DEFAULT_MAX_EDGES,
        }
    }
}

impl Limits {
    pub fn with_max_edges(max_edges: usize) -> Self {
        Limits { max_edges }
    }

    fn check(&self, edges: usize) -> Result<()> {
        // masks are u64 and one bit is reserved for the block index split
        if edges > self.max_edges || edges > 62 {
            return Err(Error::EnumerationCap {
                edges,
                cap: self.max_edges.min(62),
            });
        }
        Ok(())
    }
}

/// Runs `visit(block_start, block_len)` over a partition of `0..2^edges`
/// and returns per-block results in block order.
fn for_each_block<T, F>(edges: usize, visit: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
{
    let block_bits = edges.min(12);
    let block_len = 1u64 << block_bits;
    let blocks = 1u64 << (edges - block_bits);
    (0..blocks)
        .into_par_iter()
        .map(|b| visit(b * block_len, block_len))
        .collect()
}

fn fill_mask(mask: u64, present: &mut [bool]) {
    for (j, p) in present.iter_mut().enumerate() {
        *p = mask >> j & 1 == 1;
    }
}

/// Exponents of one Bollobás–Riordan state: `(x-1)`, `y`, `z`, `w`.
type BrKey = (u32, u32, u32, u32);

pub fn bollobas_riordan(g: &RibbonGraph, limits: &Limits) -> Result<MultiPoly> {
    let e = g.edge_count();
    limits.check(e)?;
    let rank_g = g.metrics().r;

    let blocks = for_each_block(e, |start, len| {
        let mut tracer = SubsetTracer::new(g);
        let mut present = vec![false; e];
        let mut counts: HashMap<BrKey, u64> = HashMap::new();
        for mask in start..start + len {
            fill_mask(mask, &mut present);
            let m = tracer.metrics(&present);
            let key = (
                (rank_g - m.r) as u32,
                m.n as u32,
                (m.k + m.n - m.f) as u32,
                u32::from(m.t),
            );
            *counts.entry(key).or_default() += 1;
        }
        counts
    });

    let mut total: HashMap<BrKey, u64> = HashMap::new();
    for block in blocks {
        for (k, c) in block {
            *total.entry(k).or_default() += c;
        }
    }

    let x_minus_one = &MultiPoly::var(Var::X) - &MultiPoly::one();
    let mut powers = vec![MultiPoly::one()];
    let mut out = MultiPoly::zero();
    let mut keys: Vec<_> = total.into_iter().collect();
    keys.sort_unstable();
    for ((a, n, zexp, t), count) in keys {
        while powers.len() <= a as usize {
            let next = powers.last().unwrap() * &x_minus_one;
            powers.push(next);
        }
        let mut rest = Monomial::one();
        rest.0[Var::Y.index()] = n;
        rest.0[Var::Z.index()] = zexp;
        rest.0[Var::W.index()] = t;
        for (m, c) in powers[a as usize].terms() {
            out.add_term(*m * rest, c * BigInt::from(count));
        }
    }
    Ok(out)
}

/// `T(G; x, y) = R(G; x, y - 1, 1, 1)`.
pub fn tutte(g: &RibbonGraph, limits: &Limits) -> Result<MultiPoly> {
    let br = bollobas_riordan(g, limits)?;
    Ok(tutte_from_bollobas_riordan(&br))
}

pub fn tutte_from_bollobas_riordan(br: &MultiPoly) -> MultiPoly {
    let one = MultiPoly::one();
    let y_minus_one = &MultiPoly::var(Var::Y) - &one;
    br.substitute(Var::Z, &one)
        .substitute(Var::W, &one)
        .substitute(Var::Y, &y_minus_one)
}

/// Tutte polynomial of an abstract multigraph by deletion–contraction:
/// loops give a factor `y`, bridges a factor `x`, every other edge splits as
/// `T(G - e) + T(G / e)`.
pub fn tutte_deletion_contraction(graph: &AbstractGraph, limits: &Limits) -> Result<MultiPoly> {
    limits.check(graph.edges.len())?;
    let mut memo = HashMap::new();
    Ok(dc(graph.vertex_count, graph.edges.clone(), &mut memo))
}

fn dc(
    n: usize,
    mut edges: Vec<(usize, usize)>,
    memo: &mut HashMap<Vec<(usize, usize)>, MultiPoly>,
) -> MultiPoly {
    let Some((u, v)) = edges.pop() else {
        return MultiPoly::one();
    };
    if u == v {
        return &MultiPoly::var(Var::Y) * &dc(n, edges, memo);
    }
    let key = {
        let mut k: Vec<_> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        k.push((u.min(v), u.max(v)));
        k.sort_unstable();
        k
    };
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let contracted: Vec<_> = edges
        .iter()
        .map(|&(a, b)| (if a == v { u } else { a }, if b == v { u } else { b }))
        .collect();
    let result = if connects(n, &edges, u, v) {
        &dc(n, edges, memo) + &dc(n, contracted, memo)
    } else {
        &MultiPoly::var(Var::X) * &dc(n, contracted, memo)
    };
    memo.insert(key, result.clone());
    result
}

fn connects(n: usize, edges: &[(usize, usize)], from: usize, to: usize) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(x) = stack.pop() {
        if x == to {
            return true;
        }
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    false
}

fn require_connected(g: &RibbonGraph) -> Result<()> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(Error::Disconnected(g.component_count()))
    }
}

fn penrose_from_counts(counts: Vec<i64>) -> MultiPoly {
    let mut out = MultiPoly::zero();
    for (c, coeff) in counts.into_iter().enumerate() {
        out.add_term(Monomial::var(Var::L, c as u32), BigInt::from(coeff));
    }
    out
}

fn merge_counts(blocks: Vec<Vec<i64>>, len: usize) -> Vec<i64> {
    let mut total = vec![0i64; len];
    for block in blocks {
        for (t, b) in total.iter_mut().zip(block) {
            *t += b;
        }
    }
    total
}

/// `P(G; λ) = Σ_A (-1)^{|A|} λ^{f(G^{τ(A)})}`, the sum over all partial
/// Petrials of `G`. A crossing at a medial vertex is a half-twist on the
/// corresponding edge, so this is the Penrose state sum on the medial graph.
pub fn penrose(g: &RibbonGraph, limits: &Limits) -> Result<MultiPoly> {
    require_connected(g)?;
    let e = g.edge_count();
    limits.check(e)?;
    let len = 2 * e + g.vertex_count() + 1;
    let blocks = for_each_block(e, |start, block| {
        let mut counter = FaceCounter::new(g);
        let mut counts = vec![0i64; len];
        for mask in start..start + block {
            let c = counter.count(mask);
            counts[c] += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        }
        counts
    });
    Ok(penrose_from_counts(merge_counts(blocks, len)))
}

/// The Penrose polynomial computed literally on the medial graph: every
/// state picks the white smoothing or the crossing at each medial vertex,
/// and `c(s)` is the number of closed curves that result.
pub fn penrose_via_medial(g: &RibbonGraph, limits: &Limits) -> Result<MultiPoly> {
    require_connected(g)?;
    let e = g.edge_count();
    limits.check(e)?;
    if e == 0 {
        return Ok(MultiPoly::term(
            1,
            Monomial::var(Var::L, g.vertex_count() as u32),
        ));
    }
    // half-edge ids of the medial graph; medial edge of half-edge m is m / 2
    let rotations: Vec<[usize; 4]> = (0..e).map(|j| g.medial_rotation(j)).collect();
    let nodes = 2 * e;
    let len = nodes + 1;
    let blocks = for_each_block(e, |start, block| {
        let mut parent = vec![0usize; nodes];
        let mut counts = vec![0i64; len];
        for mask in start..start + block {
            for (i, p) in parent.iter_mut().enumerate() {
                *p = i;
            }
            let mut curves = nodes;
            for (j, &[ur, ul, ll, lr]) in rotations.iter().enumerate() {
                let pairs = if mask >> j & 1 == 1 {
                    [(ur, ll), (ul, lr)]
                } else {
                    [(ur, ul), (ll, lr)]
                };
                for (a, b) in pairs {
                    let ra = find(&mut parent, a / 2);
                    let rb = find(&mut parent, b / 2);
                    if ra != rb {
                        parent[rb] = ra;
                        curves -= 1;
                    }
                }
            }
            counts[curves] += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        }
        counts
    });
    Ok(penrose_from_counts(merge_counts(blocks, len)))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// `P(G; k)` by substitution into the Penrose polynomial.
pub fn penrose_eval(g: &RibbonGraph, k: u64, limits: &Limits) -> Result<BigInt> {
    let p = penrose(g, limits)?;
    Ok(p.eval_at(&[(Var::L, k as i64)]))
}

/// Counts boundary components of the partial Petrial `G^{τ(A)}` for edge
/// masks `A`. Rotations are fixed; only the edge moves depend on the mask.
struct FaceCounter {
    // per side: corner neighbour
    corner: Vec<u32>,
    // per half-edge: partner half-edge, base side flip and edge index
    partner: Vec<u32>,
    flip: Vec<u8>,
    edge: Vec<u8>,
    stamp: Vec<u32>,
    generation: u32,
    isolated: usize,
}

impl FaceCounter {
    fn new(g: &RibbonGraph) -> Self {
        let halves = g.half_edge_count();
        let mut corner = vec![0u32; 2 * halves];
        for h in 0..halves {
            corner[2 * h] = (2 * g.rotation_successor(h) + 1) as u32;
            corner[2 * h + 1] = (2 * g.rotation_predecessor(h)) as u32;
        }
        FaceCounter {
            corner,
            partner: (0..halves).map(|h| g.partner(h) as u32).collect(),
            flip: (0..halves)
                .map(|h| u8::from(!g.edges()[g.edge_of(h)].twisted))
                .collect(),
            edge: (0..halves).map(|h| g.edge_of(h) as u8).collect(),
            stamp: vec![0; 2 * halves],
            generation: 0,
            isolated: (0..g.vertex_count()).filter(|&v| g.degree(v) == 0).count(),
        }
    }

    #[inline]
    fn count(&mut self, mask: u64) -> usize {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        let gen = self.generation;
        let mut faces = self.isolated;
        for start in 0..self.stamp.len() {
            if self.stamp[start] == gen {
                continue;
            }
            faces += 1;
            let mut cur = start;
            loop {
                self.stamp[cur] = gen;
                let h = cur >> 1;
                let s = (cur & 1) as u8 ^ self.flip[h] ^ ((mask >> self.edge[h]) & 1) as u8;
                let across = 2 * self.partner[h] as usize + s as usize;
                self.stamp[across] = gen;
                cur = self.corner[across] as usize;
                if cur == start {
                    break;
                }
            }
        }
        faces
    }
}
