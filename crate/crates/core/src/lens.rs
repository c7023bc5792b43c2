//! Lens spaces `L(p, q)` and their circulant Heegaard graphs
//! `C_p(±1, ±q)` on the Heegaard torus.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::spanning_tree_count;
use crate::ribbon::{AbstractGraph, Edge, RibbonGraph};

/// Default upper bound on `p` for spanning-tree computations and scans.
pub const DEFAULT_MAX_P: u64 = 400;
/// Largest `p` for which the floating-point eigenvalue product is used as a
/// cross-check.
pub const FLOAT_CHECK_MAX_P: u64 = 64;
/// Relative tolerance for the floating-point cross-check.
pub const FLOAT_RELATIVE_TOLERANCE: f64 = 1e-6;
/// Largest `p` accepted by the factorial isomorphism search.
pub const BRUTE_FORCE_MAX_P: u64 = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LensParams {
    p: u64,
    q: u64,
}

impl LensParams {
    /// `q` is reduced into `1..p`; `p < 3` and `gcd(p, q) != 1` are
    /// rejected.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p < 3 {
            return Err(Error::InvalidLens {
                p,
                q,
                reason: "p must be at least 3",
            });
        }
        let r = q.rem_euclid(p);
        if r == 0 || r.gcd(&p) != 1 {
            return Err(Error::InvalidLens {
                p,
                q,
                reason: "gcd(p, q) must be 1",
            });
        }
        Ok(LensParams {
            p: p as u64,
            q: r as u64,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// All valid parameters with this `p`, in increasing `q`.
    pub fn all_for(p: u64) -> Vec<LensParams> {
        (1..p)
            .filter(|q| q.gcd(&p) == 1)
            .map(|q| LensParams { p, q })
            .collect()
    }
}

impl fmt::Display for LensParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({}, {})", self.p, self.q)
    }
}

/// The set `{±q^{±1}} mod p`, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QOrbit(Vec<u64>);

impl QOrbit {
    pub fn members(&self) -> &[u64] {
        &self.0
    }

    /// Orbit representative: the least member.
    pub fn representative(&self) -> u64 {
        self.0[0]
    }

    pub fn contains(&self, q: u64) -> bool {
        self.0.binary_search(&q).is_ok()
    }
}

impl fmt::Display for QOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let e = (a as i64).extended_gcd(&(m as i64));
    e.x.rem_euclid(m as i64) as u64
}

pub fn q_orbit(params: &LensParams) -> QOrbit {
    let (p, q) = (params.p, params.q);
    let inv = mod_inverse(q, p);
    let mut m = vec![q, p - q, inv, p - inv];
    m.sort_unstable();
    m.dedup();
    QOrbit(m)
}

/// `L(p, q) ≅ L(p', q')` iff `p = p'` and `q' ≡ ±q^{±1} (mod p)`.
pub fn lens_homeomorphic(a: &LensParams, b: &LensParams) -> bool {
    a.p == b.p && q_orbit(a).contains(b.q)
}

/// The Heegaard graph on the torus. Meridian edge `e_i` (index `i`) runs
/// `i → i+1`; the `(p,q)`-curve edge `f_i` (index `p+i`) runs `i → i+q`.
/// Edge `j` has half-edges `2j` (tail) and `2j+1` (head). The rotation at `i`
/// is `(e_{i-1} head, f_{i-q} head, e_i tail, f_i tail)`: the four
/// directions of a square grid, so the faces are the `p` grid squares.
pub fn lens_heegaard_graph(params: &LensParams) -> RibbonGraph {
    let (p, q) = (params.p as usize, params.q as usize);
    let e = |i: usize| i % p;
    let f = |i: usize| p + i % p;
    let rotations = (0..p)
        .map(|i| {
            vec![
                2 * e(i + p - 1) + 1,
                2 * f(i + p - q) + 1,
                2 * e(i),
                2 * f(i),
            ]
        })
        .collect();
    let edges = (0..2 * p)
        .map(|j| Edge::new(2 * j, 2 * j + 1, false))
        .collect();
    let g = RibbonGraph::new(p, rotations, edges).expect("lens rotation system is valid");
    debug_assert!({
        let m = g.metrics();
        m.k == 1 && m.t == 0 && m.f == p && m.euler_genus == 2
    });
    g
}

/// `C_p(±1, ±q)` as an abstract multigraph, in the edge order of
/// [`lens_heegaard_graph`].
pub fn circulant_graph(params: &LensParams) -> AbstractGraph {
    let (p, q) = (params.p as usize, params.q as usize);
    let mut edges: Vec<_> = (0..p).map(|i| (i, (i + 1) % p)).collect();
    edges.extend((0..p).map(|i| (i, (i + q) % p)));
    AbstractGraph::new(p, edges)
}

/// Number of spanning trees of `C_p(±1, ±q)` by an exact Laplacian cofactor.
/// For `p ≤ 64` the floating eigenvalue product is evaluated alongside and
/// must agree to relative `1e-6`.
pub fn tau(params: &LensParams, max_p: u64) -> Result<BigInt> {
    if params.p > max_p {
        return Err(Error::BoundExceeded {
            p: params.p,
            bound: max_p,
        });
    }
    let exact = spanning_tree_count(&circulant_graph(params));
    if params.p <= FLOAT_CHECK_MAX_P {
        let approx = tau_float(params);
        let exact_f = exact.to_f64().unwrap_or(f64::INFINITY);
        if ((exact_f - approx) / exact_f).abs() > FLOAT_RELATIVE_TOLERANCE {
            return Err(Error::CheckFailed(format!(
                "{params}: determinant {exact} disagrees with eigenvalue product {approx}"
            )));
        }
    }
    Ok(exact)
}

/// `(1/p) Π_{j=1}^{p-1} (4 - 2cos(2πj/p) - 2cos(2πqj/p))` in floating point.
pub fn tau_float(params: &LensParams) -> f64 {
    let p = params.p as f64;
    let q = params.q as f64;
    let tau = std::f64::consts::TAU;
    (1..params.p)
        .map(|j| {
            let j = j as f64;
            4.0 - 2.0 * (tau * j / p).cos() - 2.0 * (tau * q * j / p).cos()
        })
        .product::<f64>()
        / p
}

/// Brute-force isomorphism test of `C_p(±1, ±a.q)` and `C_p(±1, ±b.q)` as
/// multigraphs: a backtracking search over vertex bijections.
pub fn circulant_isomorphic_bruteforce(a: &LensParams, b: &LensParams) -> Result<bool> {
    if a.p != b.p {
        return Ok(false);
    }
    if a.p > BRUTE_FORCE_MAX_P {
        return Err(Error::BoundExceeded {
            p: a.p,
            bound: BRUTE_FORCE_MAX_P,
        });
    }
    let left = circulant_graph(a).adjacency_counts();
    let right = circulant_graph(b).adjacency_counts();
    let n = a.p as usize;
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend_bijection(&left, &right, 0, &mut image, &mut used))
}

fn extend_bijection(
    left: &[Vec<u32>],
    right: &[Vec<u32>],
    next: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = left.len();
    if next == n {
        return true;
    }
    for target in 0..n {
        if used[target] {
            continue;
        }
        let consistent = (0..next).all(|u| left[next][u] == right[target][image[u]])
            && left[next][next] == right[target][target];
        if !consistent {
            continue;
        }
        image[next] = target;
        used[target] = true;
        if extend_bijection(left, right, next + 1, image, used) {
            return true;
        }
        used[target] = false;
    }
    image[next] = usize::MAX;
    false
}

/// Outcome of the perfect-square check on `τ(p, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SquareShape {
    /// `p` odd: `τ = p·A²`.
    Odd { tau: BigInt, a: BigInt },
    /// `p` even: `τ = (λ/p)·B²` with `λ = 6 - 2(-1)^q`.
    Even { tau: BigInt, lambda: u32, b: BigInt },
}

pub fn square_shape_check(params: &LensParams, max_p: u64) -> Result<SquareShape> {
    let t = tau(params, max_p)?;
    let p = BigInt::from(params.p);
    let fail = |what: String| Err(Error::CheckFailed(format!("{params}: {what}")));
    if params.p % 2 == 1 {
        let (quot, rem) = t.div_rem(&p);
        if !rem.is_zero() {
            return fail(format!("τ = {t} is not divisible by p"));
        }
        match exact_sqrt(&quot) {
            Some(a) => Ok(SquareShape::Odd { tau: t, a }),
            None => fail(format!("τ/p = {quot} is not a perfect square")),
        }
    } else {
        let lambda: u32 = if params.q % 2 == 0 { 4 } else { 8 };
        let (quot, rem) = (&t * &p).div_rem(&BigInt::from(lambda));
        if !rem.is_zero() {
            return fail(format!(
                "τ·p = {} is not divisible by λ = {lambda}",
                &t * &p
            ));
        }
        match exact_sqrt(&quot) {
            Some(b) => Ok(SquareShape::Even { tau: t, lambda, b }),
            None => fail(format!("τ·p/λ = {quot} is not a perfect square")),
        }
    }
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n < &BigInt::zero() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Orbits of `(ℤ/p)^×` under `q ↦ ±q^{±1}`, ordered by representative.
pub fn orbits(p: u64) -> Vec<QOrbit> {
    let mut seen = BTreeMap::new();
    for params in LensParams::all_for(p) {
        let o = q_orbit(&params);
        seen.entry(o.representative()).or_insert(o);
    }
    seen.into_values().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub p: u64,
    pub orbit: QOrbit,
    pub tau: BigInt,
}

/// Two distinct orbits with the same `p` and the same spanning-tree count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collision {
    pub p: u64,
    pub first: u64,
    pub second: u64,
    pub tau: BigInt,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TauScan {
    pub rows: Vec<ScanRow>,
    pub collisions: Vec<Collision>,
}

impl TauScan {
    pub const CSV_HEADER: &'static str = "p,orbit_rep,orbit,tau";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.p,
                row.orbit.representative(),
                row.orbit,
                row.tau
            ));
        }
        out
    }

    pub fn collisions_for_primes(&self) -> Vec<&Collision> {
        self.collisions.iter().filter(|c| is_prime(c.p)).collect()
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Spanning-tree counts of every orbit for `3 ≤ p ≤ p_max`. Within each
/// orbit, `τ` is computed for every member `q ≤ p/2` (members above `p/2`
/// give the same edge multiset as `p - q`) and must agree; distinct orbits
/// sharing a value are reported as collisions.
pub fn scan_tau_orbits(p_max: u64, max_p: u64) -> Result<TauScan> {
    scan_tau_orbits_filtered(p_max, max_p, |_| true)
}

/// As [`scan_tau_orbits`], restricted to the `p` accepted by `keep`.
pub fn scan_tau_orbits_filtered(
    p_max: u64,
    max_p: u64,
    keep: impl Fn(u64) -> bool + Sync,
) -> Result<TauScan> {
    if !(3..=max_p).contains(&p_max) {
        return Err(Error::BoundExceeded {
            p: p_max,
            bound: max_p,
        });
    }
    let mut jobs: Vec<(u64, QOrbit, u64)> = (3..=p_max)
        .filter(|&p| keep(p))
        .flat_map(|p| {
            orbits(p).into_iter().flat_map(move |o| {
                let members: Vec<u64> = o
                    .members()
                    .iter()
                    .copied()
                    .filter(|&q| 2 * q <= p)
                    .collect();
                members.into_iter().map(move |q| (p, o.clone(), q))
            })
        })
        .collect();
    // largest determinants first so the pool stays busy
    jobs.sort_by_key(|(p, _, _)| std::cmp::Reverse(*p));
    let values: Vec<Result<BigInt>> = jobs
        .par_iter()
        .map(|(p, _, q)| tau(&LensParams { p: *p, q: *q }, max_p))
        .collect();

    type Values = (QOrbit, Vec<(u64, BigInt)>);
    let mut by_orbit: BTreeMap<(u64, u64), Values> = BTreeMap::new();
    for ((p, orbit, q), value) in jobs.into_iter().zip(values) {
        let value = value?;
        by_orbit
            .entry((p, orbit.representative()))
            .or_insert_with(|| (orbit, Vec::new()))
            .1
            .push((q, value));
    }

    let mut scan = TauScan::default();
    let mut per_p: BTreeMap<u64, Vec<(u64, BigInt)>> = BTreeMap::new();
    for ((p, rep), (orbit, values)) in by_orbit {
        let (_, first) = &values[0];
        if let Some((q, other)) = values.iter().find(|(_, v)| v != first) {
            return Err(Error::CheckFailed(format!(
                "τ is not constant on orbit {orbit} of p = {p}: τ(q={rep}) = {first}, τ(q={q}) = {other}"
            )));
        }
        per_p.entry(p).or_default().push((rep, first.clone()));
        scan.rows.push(ScanRow {
            p,
            orbit,
            tau: first.clone(),
        });
    }
    for (p, reps) in per_p {
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                if reps[i].1 == reps[j].1 {
                    scan.collisions.push(Collision {
                        p,
                        first: reps[i].0,
                        second: reps[j].0,
                        tau: reps[i].1.clone(),
                    });
                }
            }
        }
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(p: i64, q: i64) -> LensParams {
        LensParams::new(p, q).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(matches!(
            LensParams::new(4, 2),
            Err(Error::InvalidLens { .. })
        ));
        assert!(LensParams::new(2, 1).is_err());
        assert!(LensParams::new(5, 0).is_err());
        assert_eq!(lp(5, 7).q(), 2);
        assert_eq!(lp(5, -1).q(), 4);
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(q_orbit(&lp(7, 2)).members(), &[2, 3, 4, 5]);
        assert_eq!(q_orbit(&lp(5, 2)).members(), &[2, 3]);
        assert_eq!(q_orbit(&lp(11, 1)).members(), &[1, 10]);
        assert_eq!(q_orbit(&lp(7, 2)).to_string(), "{2|3|4|5}");
    }

    #[test]
    fn homeomorphism_examples() {
        assert!(lens_homeomorphic(&lp(5, 2), &lp(5, 3)));
        assert!(!lens_homeomorphic(&lp(7, 1), &lp(7, 2)));
        assert!(!lens_homeomorphic(&lp(5, 2), &lp(7, 2)));
    }

    #[test]
    fn heegaard_graph_shape() {
        for (p, q) in [(3, 1), (5, 2), (7, 3), (8, 3)] {
            let g = lens_heegaard_graph(&lp(p, q));
            let m = g.metrics();
            assert_eq!(g.vertex_count(), p as usize);
            assert_eq!(g.edge_count(), 2 * p as usize);
            assert!((0..g.vertex_count()).all(|v| g.degree(v) == 4));
            assert_eq!((m.k, m.t, m.f, m.euler_genus), (1, 0, p as usize, 2));
        }
        let u = lens_heegaard_graph(&lp(3, 1)).underlying_graph();
        let adj = u.adjacency_counts();
        assert_eq!(adj[0], vec![0, 2, 2]);
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(&lp(3, 1), DEFAULT_MAX_P).unwrap(), BigInt::from(12));
        assert_eq!(tau(&lp(5, 1), DEFAULT_MAX_P).unwrap(), BigInt::from(80));
        assert_eq!(
            tau(&lp(500, 1), DEFAULT_MAX_P).unwrap_err(),
            Error::BoundExceeded { p: 500, bound: 400 }
        );
        for p in 3..20i64 {
            for q in LensParams::all_for(p as u64) {
                let mirrored = lp(p, p - q.q() as i64);
                assert_eq!(tau(&q, 64).unwrap(), tau(&mirrored, 64).unwrap());
            }
        }
    }

    #[test]
    fn square_shape_examples() {
        assert_eq!(
            square_shape_check(&lp(5, 1), 400).unwrap(),
            SquareShape::Odd {
                tau: 80.into(),
                a: 4.into()
            }
        );
        assert_eq!(
            square_shape_check(&lp(4, 1), 400).unwrap(),
            SquareShape::Even {
                tau: 32.into(),
                lambda: 8,
                b: 4.into()
            }
        );
        assert!(matches!(
            square_shape_check(&lp(6, 1), 400).unwrap(),
            SquareShape::Even { lambda: 8, .. }
        ));
    }

    #[test]
    fn brute_force_examples() {
        assert!(circulant_isomorphic_bruteforce(&lp(7, 2), &lp(7, 4)).unwrap());
        assert!(!circulant_isomorphic_bruteforce(&lp(7, 1), &lp(7, 2)).unwrap());
        assert!(circulant_isomorphic_bruteforce(&lp(5, 1), &lp(5, 1)).unwrap());
        assert!(circulant_isomorphic_bruteforce(&lp(11, 1), &lp(11, 2)).is_err());
    }

    #[test]
    fn scan_small() {
        let scan = scan_tau_orbits(7, 400).unwrap();
        let reps: Vec<(u64, u64)> = scan
            .rows
            .iter()
            .map(|r| (r.p, r.orbit.representative()))
            .collect();
        assert_eq!(
            reps,
            vec![(3, 1), (4, 1), (5, 1), (5, 2), (6, 1), (7, 1), (7, 2)]
        );
        assert!(scan.collisions.is_empty());
        let csv = scan.to_csv();
        assert!(csv.starts_with("p,orbit_rep,orbit,tau\n3,1,{1|2},12\n"));
        assert!(scan_tau_orbits(2, 400).is_err());
        assert!(scan_tau_orbits(401, 400).is_err());
    }
}
