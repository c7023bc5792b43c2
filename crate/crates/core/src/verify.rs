//! Invariant batteries. Each check returns a short summary on success and
//! [`Error::CheckFailed`] naming the first counterexample otherwise.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graphfile::{parse_graph_file, write_graph_file};
use crate::invariants::{
    bollobas_riordan, penrose, penrose_via_medial, tutte, tutte_deletion_contraction, Limits,
};
use crate::lens::{
    circulant_graph, circulant_isomorphic_bruteforce, is_prime, lens_heegaard_graph,
    lens_homeomorphic, scan_tau_orbits_filtered, square_shape_check, tau, tau_float, LensParams,
    SquareShape, DEFAULT_MAX_P, FLOAT_RELATIVE_TOLERANCE,
};
use crate::poincare::{diagrams, reference_penrose};
use crate::poly::{MultiPoly, Var};
use crate::ribbon::RibbonGraph;

fn fail<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::CheckFailed(msg.into()))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        fail(msg())
    }
}

fn lens_params(p_lo: u64, p_hi: u64) -> impl Iterator<Item = LensParams> {
    (p_lo.max(3)..=p_hi).flat_map(LensParams::all_for)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareReport {
    pub polynomials: Vec<(&'static str, MultiPoly)>,
    pub reference: MultiPoly,
}

/// Both shipped diagrams parse, round-trip, have 12 vertices on a genus-2
/// surface, and have equal Penrose polynomials that match the reference.
pub fn verify_poincare(limits: &Limits) -> Result<PoincareReport> {
    let reference = reference_penrose();
    let coeffs = reference
        .univariate_coefficients(Var::L)
        .unwrap_or_default();
    ensure(
        coeffs.len() == 13
            && coeffs[12].is_one()
            && coeffs[1] == BigInt::from(-170496)
            && coeffs[0].is_zero(),
        || format!("reference polynomial has unexpected shape: {reference}"),
    )?;

    let mut polynomials = Vec::new();
    for (name, text) in diagrams() {
        let g = parse_graph_file(text).map_err(|e| Error::CheckFailed(format!("{name}: {e}")))?;
        let again = parse_graph_file(&write_graph_file(&g))?;
        ensure(again == g, || {
            format!("{name}: graph file does not round-trip")
        })?;
        let m = g.metrics();
        ensure(g.vertex_count() == 12, || {
            format!("{name}: {} vertices, expected 12", g.vertex_count())
        })?;
        ensure((0..12).all(|v| g.degree(v) == 4), || {
            format!("{name}: not 4-regular")
        })?;
        ensure(m.k == 1 && m.t == 0 && m.euler_genus == 4, || {
            format!("{name}: expected a connected orientable genus-2 embedding, got {m:?}")
        })?;
        polynomials.push((name, penrose(&g, limits)?));
    }
    for (name, poly) in &polynomials {
        ensure(*poly == reference, || {
            format!("{name}: Penrose polynomial {poly} differs from the reference {reference}")
        })?;
    }
    Ok(PoincareReport {
        polynomials,
        reference,
    })
}

/// Exact τ against Tutte at (1,1) for `p ≤ tutte_p_max`, against the float
/// eigenvalue product for `p ≤ float_p_max`, and against `p·2^{p-1}` at
/// `q = 1`.
pub fn check_tau_consistency(
    p_max: u64,
    tutte_p_max: u64,
    float_p_max: u64,
    limits: &Limits,
) -> Result<String> {
    let mut count = 0;
    for params in lens_params(3, p_max) {
        let p = params.p();
        let t = tau(&params, DEFAULT_MAX_P)?;
        if p <= tutte_p_max {
            let tp = tutte(&lens_heegaard_graph(&params), limits)?;
            let at = tp.eval_at(&[(Var::X, 1), (Var::Y, 1)]);
            ensure(at == t, || format!("{params}: Tutte(1,1) = {at}, τ = {t}"))?;
        }
        if p <= float_p_max {
            let approx = tau_float(&params);
            let exact: f64 = t.to_string().parse().unwrap_or(f64::INFINITY);
            ensure(
                ((exact - approx) / exact).abs() <= FLOAT_RELATIVE_TOLERANCE,
                || format!("{params}: τ = {t}, eigenvalue product {approx}"),
            )?;
        }
        if params.q() == 1 {
            let expected = BigInt::from(p) << (p - 1);
            ensure(t == expected, || {
                format!("{params}: τ = {t}, expected p·2^(p-1) = {expected}")
            })?;
        }
        count += 1;
    }
    Ok(format!("{count} parameter pairs with 3 ≤ p ≤ {p_max}"))
}

/// τ is constant on every orbit `{±q^{±1}}` for `p ≤ p_max`. Members above
/// `p/2` are checked to give the same Laplacian as their negatives, the rest
/// are computed.
pub fn check_orbit_invariance(p_max: u64) -> Result<String> {
    for params in lens_params(3, p_max) {
        let p = params.p();
        if 2 * params.q() > p {
            let mirror = LensParams::new(p as i64, (p - params.q()) as i64)?;
            ensure(
                circulant_graph(&params).adjacency_counts()
                    == circulant_graph(&mirror).adjacency_counts(),
                || format!("{params} and {mirror} have different Laplacians"),
            )?;
        }
    }
    let scan = scan_tau_orbits_filtered(p_max, DEFAULT_MAX_P, |_| true)?;
    let members: usize = scan.rows.iter().map(|r| r.orbit.members().len()).sum();
    Ok(format!(
        "{} orbits ({members} values of q) with p ≤ {p_max}",
        scan.rows.len()
    ))
}

pub fn check_square_shape(p_max: u64) -> Result<String> {
    let mut count = 0;
    for params in lens_params(3, p_max) {
        match square_shape_check(&params, DEFAULT_MAX_P)? {
            SquareShape::Odd { .. } => {
                ensure(params.p() % 2 == 1, || format!("{params}: wrong parity"))?
            }
            SquareShape::Even { lambda, .. } => {
                let expected = if params.q() % 2 == 0 { 4 } else { 8 };
                ensure(params.p() % 2 == 0 && lambda == expected, || {
                    format!("{params}: λ = {lambda}, expected {expected}")
                })?
            }
        }
        count += 1;
    }
    Ok(format!("{count} parameter pairs with p ≤ {p_max}"))
}

/// No two distinct orbits share τ for prime `p ≤ p_max`.
pub fn check_prime_collisions(p_max: u64) -> Result<String> {
    let scan = scan_tau_orbits_filtered(p_max, DEFAULT_MAX_P, is_prime)?;
    if let Some(c) = scan.collisions.first() {
        return fail(format!(
            "p = {}: orbits of {} and {} share τ = {}",
            c.p, c.first, c.second, c.tau
        ));
    }
    let primes = (3..=p_max).filter(|&p| is_prime(p)).count();
    Ok(format!(
        "{primes} primes, {} orbits, no collisions",
        scan.rows.len()
    ))
}

/// `P(1) = 0`, `P(2) = 2^p` and `log₂ P(2) = v` for lens graphs.
pub fn check_penrose_evaluations(p_max: u64, limits: &Limits) -> Result<String> {
    let mut count = 0;
    for params in lens_params(3, p_max) {
        let g = lens_heegaard_graph(&params);
        let pen = penrose(&g, limits)?;
        let at1 = pen.eval_at(&[(Var::L, 1)]);
        let at2 = pen.eval_at(&[(Var::L, 2)]);
        ensure(at1.is_zero(), || format!("{params}: P(1) = {at1}"))?;
        let expected = BigInt::one() << params.p();
        ensure(at2 == expected, || {
            format!("{params}: P(2) = {at2}, expected 2^{}", params.p())
        })?;
        let log = at2.bits() - 1;
        ensure(log == g.vertex_count() as u64, || {
            format!("{params}: log2 P(2) = {log}")
        })?;
        count += 1;
    }
    Ok(format!("{count} lens graphs with p ≤ {p_max}"))
}

/// The top power of `y` in the Tutte polynomial is `y^{p+1}` with
/// coefficient 1.
pub fn check_tutte_top(p_max: u64, limits: &Limits) -> Result<String> {
    let mut count = 0;
    for params in lens_params(3, p_max) {
        let t = tutte(&lens_heegaard_graph(&params), limits)?;
        let (deg, coeff) = t.top_in(Var::Y).expect("Tutte polynomial is nonzero");
        ensure(
            deg as u64 == params.p() + 1 && coeff == MultiPoly::one(),
            || format!("{params}: top y-term is ({coeff})·y^{deg}"),
        )?;
        count += 1;
    }
    Ok(format!("{count} lens graphs with p ≤ {p_max}"))
}

/// Penrose is monic of degree greater than `p` exactly when `q ∈ {1, p-1}`.
pub fn check_q1_characterization(p_max: u64, limits: &Limits) -> Result<String> {
    let mut count = 0;
    for params in lens_params(3, p_max) {
        let pen = penrose(&lens_heegaard_graph(&params), limits)?;
        let coeffs = pen
            .univariate_coefficients(Var::L)
            .expect("Penrose is univariate in L");
        let deg = coeffs.len() as u64 - 1;
        let monic_high = coeffs.last().is_some_and(|c| c.is_one()) && deg > params.p();
        let q_is_one = params.q() == 1 || params.q() == params.p() - 1;
        ensure(monic_high == q_is_one, || {
            format!(
                "{params}: degree {deg}, leading coefficient {}",
                coeffs[deg as usize]
            )
        })?;
        count += 1;
    }
    Ok(format!("{count} lens graphs with p ≤ {p_max}"))
}

/// Brute-force abstract isomorphism agrees with the lens classification.
pub fn check_classification(p_max: u64) -> Result<String> {
    let mut pairs = 0;
    for p in 3..=p_max {
        let all = LensParams::all_for(p);
        for a in &all {
            for b in &all {
                let iso = circulant_isomorphic_bruteforce(a, b)?;
                let homeo = lens_homeomorphic(a, b);
                ensure(iso == homeo, || {
                    format!("{a} vs {b}: isomorphic = {iso}, homeomorphic = {homeo}")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs with p ≤ {p_max}"))
}

/// Engine property bounds.
#[derive(Clone, Copy, Debug)]
pub struct EngineBounds {
    pub lens_p_max: u64,
    pub random_graphs: usize,
    pub tutte_max_edges: usize,
    pub penrose_max_edges: usize,
    pub seed: u64,
}

impl Default for EngineBounds {
    fn default() -> Self {
        EngineBounds {
            lens_p_max: 8,
            random_graphs: 200,
            tutte_max_edges: 12,
            penrose_max_edges: 10,
            seed: 0x5eed,
        }
    }
}

/// Structural and dual-path properties on lens graphs and random rotation
/// systems.
pub fn check_engine_properties(bounds: &EngineBounds, limits: &Limits) -> Result<String> {
    let mut graphs: Vec<(String, RibbonGraph)> = lens_params(3, bounds.lens_p_max)
        .map(|params| (params.to_string(), lens_heegaard_graph(&params)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    for i in 0..bounds.random_graphs {
        let twist = if i % 2 == 0 { 0.0 } else { 0.3 };
        graphs.push((
            format!("random #{i}"),
            RibbonGraph::random(&mut rng, 5, 9, twist),
        ));
    }
    let (mut tutte_checked, mut penrose_checked, mut medial_checked) = (0, 0, 0);
    for (name, g) in &graphs {
        let ctx = |msg: String| format!("{name}: {msg}");
        check_structure(g).map_err(|e| Error::CheckFailed(ctx(e.to_string())))?;

        let e = g.edge_count();
        if e <= bounds.tutte_max_edges {
            let br = bollobas_riordan(g, limits)?;
            let via_br = crate::invariants::tutte_from_bollobas_riordan(&br);
            let dc = tutte_deletion_contraction(&g.underlying_graph(), limits)?;
            ensure(via_br == dc, || {
                ctx(format!(
                    "Tutte from BR {via_br} vs deletion-contraction {dc}"
                ))
            })?;
            tutte_checked += 1;
        }
        if g.is_connected() && e >= 1 {
            let gm = g.medial_graph()?;
            let (mg, mm) = (g.metrics(), gm.metrics());
            ensure(mm.euler_genus == mg.euler_genus, || {
                ctx(format!(
                    "medial Euler genus {} vs {}",
                    mm.euler_genus, mg.euler_genus
                ))
            })?;
            ensure(mm.f == g.vertex_count() + mg.f, || {
                ctx(format!(
                    "medial has {} faces, expected {} + {}",
                    mm.f,
                    g.vertex_count(),
                    mg.f
                ))
            })?;
            ensure(gm.vertex_count() == e && gm.edge_count() == 2 * e, || {
                ctx("medial size".into())
            })?;
            medial_checked += 1;
            if e <= bounds.penrose_max_edges {
                let a = penrose(g, limits)?;
                let b = penrose_via_medial(g, limits)?;
                ensure(a == b, || ctx(format!("Penrose {a} vs medial states {b}")))?;
                let at1 = a.eval_at(&[(Var::L, 1)]);
                ensure(at1.is_zero(), || ctx(format!("P(1) = {at1}")))?;
                penrose_checked += 1;
            }
        }
    }
    Ok(format!(
        "{} graphs; Tutte dual path on {tutte_checked}, medial identities on {medial_checked}, Penrose dual path on {penrose_checked}",
        graphs.len()
    ))
}

fn check_structure(g: &RibbonGraph) -> Result<()> {
    let m = g.metrics();
    let all: Vec<usize> = (0..g.edge_count()).collect();
    let walk_len: usize = g.boundary_walks(&all)?.iter().map(Vec::len).sum();
    let degree_sum: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
    // every half-edge has two sides and each is visited once
    ensure(walk_len == degree_sum * 2, || {
        format!(
            "boundary walks cover {walk_len} sides, expected {}",
            2 * degree_sum
        )
    })?;
    ensure(m.r + m.k == m.v && m.n + m.r == m.e, || {
        format!("rank/nullity {m:?}")
    })?;
    if m.t == 0 {
        ensure(m.euler_genus % 2 == 0, || {
            format!("orientable with odd Euler genus {m:?}")
        })?;
    }
    if m.k == 1 {
        let chi = m.v as i64 - m.e as i64 + m.f as i64;
        ensure(chi == 2 - m.euler_genus as i64, || {
            format!("Euler characteristic {chi} vs {m:?}")
        })?;
    }
    let mut previous = g.vertex_count();
    for j in 0..g.edge_count() {
        let k = g.subgraph_metrics(&all[..=j])?.k;
        ensure(k <= previous && previous - k <= 1, || {
            format!("components went {previous} → {k}")
        })?;
        previous = k;
    }
    let subset: Vec<usize> = all.iter().copied().filter(|j| j % 2 == 0).collect();
    let twisted = g.partial_petrial(&subset)?;
    ensure(twisted.partial_petrial(&subset)? == *g, || {
        "partial Petrial is not an involution".into()
    })?;
    let tm = twisted.metrics();
    ensure(
        (tm.v, tm.e, tm.k, tm.r, tm.n) == (m.v, m.e, m.k, m.r, m.n),
        || format!("partial Petrial changed v/e/k/r/n: {m:?} → {tm:?}"),
    )?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => fail(format!("unknown level `{other}` (expected quick or full)")),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Quick => "quick",
            Level::Full => "full",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub result: std::result::Result<String, String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.result {
            Ok(detail) => write!(f, "PASS {}: {detail}", self.name),
            Err(why) => write!(f, "FAIL {}: {why}", self.name),
        }
    }
}

/// Runs every battery. `quick` keeps `p ≤ 8` and state sums to at most 12
/// edges; `full` scans τ to `p ≤ 200` and includes the 24-edge Poincaré
/// computation. `report` is called after each check.
pub fn run_suite(
    level: Level,
    limits: &Limits,
    mut report: impl FnMut(&CheckOutcome),
) -> Vec<CheckOutcome> {
    type Check<'a> = (&'static str, Box<dyn Fn() -> Result<String> + 'a>);
    let quick = level == Level::Quick;
    let (tau_p, state_p, top_p, scan_p) = if quick {
        (8, 6, 6, 8)
    } else {
        (50, 8, 10, 200)
    };
    let checks: Vec<Check> = vec![
        (
            "engine properties",
            Box::new(move || {
                let bounds = EngineBounds {
                    lens_p_max: if quick { 6 } else { 8 },
                    random_graphs: if quick { 50 } else { 200 },
                    ..EngineBounds::default()
                };
                check_engine_properties(&bounds, limits)
            }),
        ),
        (
            "tau consistency",
            Box::new(move || check_tau_consistency(tau_p, state_p.min(8), tau_p.min(64), limits)),
        ),
        (
            "orbit invariance",
            Box::new(move || check_orbit_invariance(scan_p)),
        ),
        (
            "square shape",
            Box::new(move || check_square_shape(if quick { 8 } else { 100 })),
        ),
        (
            "prime collisions",
            Box::new(move || check_prime_collisions(scan_p)),
        ),
        (
            "penrose evaluations",
            Box::new(move || check_penrose_evaluations(state_p, limits)),
        ),
        (
            "tutte top term",
            Box::new(move || check_tutte_top(top_p, limits)),
        ),
        (
            "q=1 characterization",
            Box::new(move || check_q1_characterization(state_p, limits)),
        ),
        ("classification", Box::new(move || check_classification(8))),
        (
            "poincare",
            Box::new(move || {
                if quick {
                    return Ok("skipped at quick level".into());
                }
                verify_poincare(limits).map(|r| r.reference.to_string())
            }),
        ),
    ];
    checks
        .into_iter()
        .map(|(name, run)| {
            let outcome = CheckOutcome {
                name,
                result: run().map_err(|e| e.to_string()),
            };
            report(&outcome);
            outcome
        })
        .collect()
}
