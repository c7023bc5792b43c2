//! Fraction-free (Bareiss) determinants and Matrix–Tree counts.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ribbon::AbstractGraph;

/// Determinant of a square integer matrix by Bareiss elimination.
///
/// Rows whose entry in the pivot column is zero only get rescaled by
/// `P_k / P_{k-1}` at step `k`; that rescaling is deferred and applied in
/// one exact division when the row is next touched. For banded matrices the
/// work is proportional to the band rather than to the full square.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n), "matrix must be square");
    if n == 0 {
        return BigInt::one();
    }

    // pivots[k + 1] = P_k; pivots[0] = P_{-1} = 1
    let mut pivots: Vec<BigInt> = Vec::with_capacity(n + 1);
    pivots.push(BigInt::one());
    // level[i]: number of elimination steps already applied to row i
    let mut level = vec![0usize; n];
    // hi[i]: one past the last possibly nonzero column of row i
    let mut hi: Vec<usize> = a
        .iter()
        .map(|row| row.iter().rposition(|x| !x.is_zero()).map_or(0, |p| p + 1))
        .collect();
    let mut negate = false;

    let catch_up =
        |row: &mut Vec<BigInt>, from: usize, to: usize, lo: usize, hi: usize, pivots: &[BigInt]| {
            if from == to || hi <= lo {
                return;
            }
            for x in &mut row[lo..hi] {
                if !x.is_zero() {
                    *x *= &pivots[to];
                    *x /= &pivots[from];
                }
            }
        };

    for k in 0..n {
        catch_up(&mut a[k], level[k], k, k, hi[k], &pivots);
        level[k] = k;
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            catch_up(&mut a[r], level[r], k, k, hi[r], &pivots);
            level[r] = k;
            a.swap(k, r);
            hi.swap(k, r);
            negate = !negate;
        }

        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = pivot_row[k].clone();
        let prev = &pivots[k];
        for (off, row) in bottom.iter_mut().enumerate() {
            let i = k + 1 + off;
            if row[k].is_zero() {
                continue;
            }
            catch_up(row, level[i], k, k, hi[i], &pivots);
            let factor = std::mem::take(&mut row[k]);
            let end = hi[i].max(hi[k]);
            for j in k + 1..end {
                let pj = &pivot_row[j];
                let x = &mut row[j];
                if x.is_zero() {
                    if pj.is_zero() {
                        continue;
                    }
                    *x = -(&factor * pj);
                } else {
                    *x *= &pivot;
                    if !pj.is_zero() {
                        *x -= &factor * pj;
                    }
                }
                *x /= prev;
            }
            hi[i] = end;
            level[i] = k + 1;
        }
        pivots.push(pivot);
    }

    let det = pivots.pop().unwrap();
    if negate {
        -det
    } else {
        det
    }
}

/// Number of spanning trees of a multigraph: the Laplacian cofactor with
/// the last vertex removed. Loops do not contribute. Rows are put in
/// breadth-first order first, which keeps the elimination banded for
/// circulant graphs.
pub fn spanning_tree_count(graph: &AbstractGraph) -> BigInt {
    let n = graph.vertex_count;
    if n == 0 {
        return BigInt::zero();
    }
    if n == 1 {
        return BigInt::one();
    }
    let adj = graph.adjacency_counts();
    let keep = n - 1;
    let order = breadth_first_order(&adj, keep);
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut lap = vec![vec![BigInt::zero(); keep]; keep];
    for (u, row) in adj.iter().enumerate() {
        for (v, &m) in row.iter().enumerate() {
            if u == v || m == 0 {
                continue;
            }
            if u < keep {
                lap[pos[u]][pos[u]] += m;
                if v < keep {
                    lap[pos[u]][pos[v]] -= m;
                }
            }
        }
    }
    bareiss_determinant(lap)
}

/// Breadth-first order of vertices `0..keep` using only edges among them,
/// restarting from the smallest unvisited vertex.
fn breadth_first_order(adj: &[Vec<u32>], keep: usize) -> Vec<usize> {
    let mut seen = vec![false; keep];
    let mut order = Vec::with_capacity(keep);
    for root in 0..keep {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut head = order.len();
        order.push(root);
        while head < order.len() {
            let u = order[head];
            head += 1;
            for v in 0..keep {
                if adj[u][v] > 0 && !seen[v] {
                    seen[v] = true;
                    order.push(v);
                }
            }
        }
    }
    order
}
