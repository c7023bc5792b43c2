//! The two shipped genus-2 Heegaard graphs of the Poincaré homology sphere
//! and the reference Penrose polynomial they must both produce.

use crate::error::Result;
use crate::graphfile::parse_graph_file;
use crate::poly::MultiPoly;
use crate::ribbon::RibbonGraph;

pub const DIAGRAM_A: &str = include_str!("../data/poincare_a.ribbon");
pub const DIAGRAM_B: &str = include_str!("../data/poincare_b.ribbon");

pub const REFERENCE_PENROSE: &str = "L^12 - 24*L^11 + 553*L^10 - 6186*L^9 + 42664*L^8 \
- 193904*L^7 + 595168*L^6 - 1238528*L^5 + 1718528*L^4 - 1518592*L^3 + 770816*L^2 - 170496*L";

/// Named diagrams in shipping order.
pub fn diagrams() -> [(&'static str, &'static str); 2] {
    [("poincare_a", DIAGRAM_A), ("poincare_b", DIAGRAM_B)]
}

pub fn diagram(name: &str) -> Option<Result<RibbonGraph>> {
    diagrams()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_graph_file(text))
}

pub fn reference_penrose() -> MultiPoly {
    REFERENCE_PENROSE
        .parse()
        .expect("reference polynomial is well formed")
}
