//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are
//! exact except the eigenvalue product, which is held to relative 1e-6.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;

use hgpoly_core::invariants::{penrose_eval, Limits};
use hgpoly_core::lens::{lens_heegaard_graph, LensParams, FLOAT_RELATIVE_TOLERANCE};
use hgpoly_core::poincare::REFERENCE_PENROSE;
use hgpoly_core::verify::{self, EngineBounds};
use hgpoly_core::{Error, MultiPoly, Result};

/// The target as typeset, in `z`, with Unicode minus signs.
const TYPESET_TARGET: &str =
    "z^{12} − 24z^{11} + 553z^{10} − 6186z^{9} + 42664z^{8} − 193904z^{7} \
+ 595168z^{6} − 1238528z^{5} + 1718528z^{4} − 1518592z^{3} + 770816z^{2} − 170496z";

/// Rewrites the typeset form into the ASCII polynomial grammar.
fn transliterate(typeset: &str) -> String {
    let plain: String = typeset
        .replace('−', "-")
        .chars()
        .filter(|c| !matches!(c, '{' | '}'))
        .collect();
    let mut out = String::new();
    let mut prev_digit = false;
    for c in plain.chars() {
        if c == 'z' {
            if prev_digit {
                out.push('*');
            }
            out.push('L');
        } else {
            out.push(c);
        }
        prev_digit = c.is_ascii_digit();
    }
    out
}

fn poincare(limits: &Limits) -> Result<String> {
    let target: MultiPoly = transliterate(TYPESET_TARGET).parse()?;
    if target.to_string() != REFERENCE_PENROSE {
        return Err(Error::CheckFailed(format!(
            "stored reference differs from the target {target}"
        )));
    }
    let report = verify::verify_poincare(limits)?;
    for (name, poly) in &report.polynomials {
        if *poly != target || poly.to_string() != REFERENCE_PENROSE {
            return Err(Error::CheckFailed(format!("{name} prints as {poly}")));
        }
    }
    Ok(format!(
        "{} diagrams print as the reference",
        report.polynomials.len()
    ))
}

fn penrose_evaluations(limits: &Limits) -> Result<String> {
    let summary = verify::check_penrose_evaluations(8, limits)?;
    // the substitution entry point must agree on the same graphs
    for p in 3..=8u64 {
        for params in LensParams::all_for(p) {
            let g = lens_heegaard_graph(&params);
            let at1 = penrose_eval(&g, 1, limits)?;
            let at2 = penrose_eval(&g, 2, limits)?;
            if !at1.is_zero() || at2 != BigInt::from(1u64 << p) {
                return Err(Error::CheckFailed(format!(
                    "{params}: P(1) = {at1}, P(2) = {at2}"
                )));
            }
        }
    }
    Ok(summary)
}

fn main() -> ExitCode {
    assert_eq!(FLOAT_RELATIVE_TOLERANCE, 1e-6, "tolerance is pinned");
    let limits = Limits::default();
    type Criterion = (&'static str, Box<dyn Fn() -> Result<String>>);
    let criteria: Vec<Criterion> = vec![
        (
            "1 poincare reproduction",
            Box::new(move || poincare(&limits)),
        ),
        (
            "2 tau consistency (p<=50)",
            Box::new(move || verify::check_tau_consistency(50, 8, 50, &limits)),
        ),
        (
            "3 orbit invariance (p<=200)",
            Box::new(|| verify::check_orbit_invariance(200)),
        ),
        (
            "4 square shape (p<=100)",
            Box::new(|| verify::check_square_shape(100)),
        ),
        (
            "5 prime collisions (p<=200)",
            Box::new(|| verify::check_prime_collisions(200)),
        ),
        (
            "6 penrose evaluations (p<=8)",
            Box::new(move || penrose_evaluations(&limits)),
        ),
        (
            "7 tutte top term (p<=10)",
            Box::new(move || verify::check_tutte_top(10, &limits)),
        ),
        (
            "8 q=1 characterization (p<=8)",
            Box::new(move || verify::check_q1_characterization(8, &limits)),
        ),
        (
            "9 classification oracle (p<=8)",
            Box::new(|| verify::check_classification(8)),
        ),
        (
            "10 engine properties",
            Box::new(move || verify::check_engine_properties(&EngineBounds::default(), &limits)),
        ),
    ];

    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.1}s]"),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {name}: {e} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
