use std::path::PathBuf;
use std::process::{Command, Output};

const REFERENCE: &str = "L^12 - 24*L^11 + 553*L^10 - 6186*L^9 + 42664*L^8 - 193904*L^7 \
+ 595168*L^6 - 1238528*L^5 + 1718528*L^4 - 1518592*L^3 + 770816*L^2 - 170496*L";

fn hgpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgpoly"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hgpoly-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn loop_polynomials() {
    let file = scratch(
        "loop.ribbon",
        "# loop\nribbon 1 1\nrot 0: 0 1\nedge 0: 0 1 untwisted\n",
    );
    let f = file.to_str().unwrap();
    let tutte = hgpoly(&["poly", "tutte", f]);
    assert!(tutte.status.success());
    assert_eq!(stdout(&tutte), "y\n");
    assert_eq!(stdout(&hgpoly(&["poly", "br", f])), "y + 1\n");
    assert_eq!(stdout(&hgpoly(&["poly", "penrose", f])), "L^2 - L\n");
    assert_eq!(stdout(&hgpoly(&["poly", "penrose", f, "--at", "1"])), "0\n");
    assert_eq!(
        stdout(&hgpoly(&["poly", "penrose", f, "--at", "5"])),
        "20\n"
    );
}

#[test]
fn lens_commands() {
    let tau = hgpoly(&["lens", "tau", "--p", "5", "--q", "1"]);
    assert_eq!(
        (tau.status.code(), stdout(&tau)),
        (Some(0), "80\n".to_string())
    );
    assert_eq!(
        stdout(&hgpoly(&["lens", "orbit", "--p", "7", "--q", "2"])),
        "{2|3|4|5}\n"
    );
    let graph = stdout(&hgpoly(&["lens", "graph", "--p", "3", "--q", "1"]));
    assert!(graph.starts_with("ribbon 3 6\nrot 0: "));

    let file = scratch("l52.ribbon", "");
    let written = hgpoly(&[
        "lens",
        "graph",
        "--p",
        "5",
        "--q",
        "2",
        "-o",
        file.to_str().unwrap(),
    ]);
    assert!(written.status.success());
    let t = stdout(&hgpoly(&["poly", "tutte", file.to_str().unwrap()]));
    assert!(t.contains("y^6"), "{t}");

    let scan = stdout(&hgpoly(&["lens", "scan", "--pmax", "7"]));
    assert_eq!(
        scan,
        "p,orbit_rep,orbit,tau\n3,1,{1|2},12\n4,1,{1|3},32\n5,1,{1|4},80\n5,2,{2|3},125\n\
6,1,{1|5},192\n7,1,{1|6},448\n7,2,{2|3|4|5},1183\n"
    );
    let primes = stdout(&hgpoly(&["lens", "scan", "--pmax", "7", "--primes-only"]));
    assert_eq!(primes, "p,orbit_rep,orbit,tau\n3,1,{1|2},12\n5,1,{1|4},80\n5,2,{2|3},125\n7,1,{1|6},448\n7,2,{2|3|4|5},1183\n");
    let csv = scratch("scan.csv", "");
    let to_file = hgpoly(&[
        "lens",
        "scan",
        "--pmax",
        "7",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), scan);
}

#[test]
fn exit_codes() {
    assert_eq!(
        hgpoly(&["lens", "tau", "--p", "4", "--q", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hgpoly(&["lens", "scan", "--pmax", "500"]).status.code(),
        Some(2)
    );
    assert_eq!(hgpoly(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        hgpoly(&["poly", "tutte", "/nonexistent/graph"])
            .status
            .code(),
        Some(2)
    );

    let bad = scratch(
        "bad.ribbon",
        "ribbon 1 2\nrot 0: 0 1\nedge 0: 0 1 untwisted\n",
    );
    let out = hgpoly(&["poly", "br", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("declares 2 edges, found 1"));

    let lens8 = scratch(
        "l8.ribbon",
        &stdout(&hgpoly(&["lens", "graph", "--p", "8", "--q", "3"])),
    );
    let capped = hgpoly(&[
        "--max-edges",
        "10",
        "poly",
        "penrose",
        lens8.to_str().unwrap(),
    ]);
    assert_eq!(capped.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&capped.stderr).lines().count(), 1);
}

#[test]
fn output_is_independent_of_jobs() {
    let file = scratch(
        "l7.ribbon",
        &stdout(&hgpoly(&["lens", "graph", "--p", "7", "--q", "3"])),
    );
    let f = file.to_str().unwrap();
    let one = hgpoly(&["--jobs", "1", "poly", "br", f]);
    let four = hgpoly(&["--jobs", "4", "poly", "br", f]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn quick_suite() {
    let out = hgpoly(&["verify", "suite", "--level", "quick"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(
        text.lines().filter(|l| l.starts_with("PASS ")).count(),
        10,
        "{text}"
    );
}

#[test]
fn verify_poincare_prints_reference_for_both_diagrams() {
    let out = hgpoly(&["verify", "poincare"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains(&format!("poincare_a: {REFERENCE}\n")),
        "{text}"
    );
    assert!(
        text.contains(&format!("poincare_b: {REFERENCE}\n")),
        "{text}"
    );
}
