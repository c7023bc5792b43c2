//! Exact sparse polynomials in `x, y, z, w, λ` with big-integer
//! coefficients.
//!
//! Terms are kept in canonical order: descending graded reverse
//! lexicographic with `x > y > z > w > λ`. The text form writes λ as `L`,
//! e.g. `x^2*y + 3*y*z - 1`, and parses back to the same value.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::Error;

pub const VAR_COUNT: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
    W,
    L,
}

impl Var {
    pub const ALL: [Var; VAR_COUNT] = [Var::X, Var::Y, Var::Z, Var::W, Var::L];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> char {
        ['x', 'y', 'z', 'w', 'L'][self.index()]
    }

    fn from_symbol(c: &str) -> Option<Var> {
        Some(match c {
            "x" => Var::X,
            "y" => Var::Y,
            "z" => Var::Z,
            "w" => Var::W,
            "L" => Var::L,
            _ => return None,
        })
    }
}

/// Exponent vector over `(x, y, z, w, λ)`.
///
/// `Ord` is the canonical *printing* order: a monomial sorts first when it
/// is larger in graded reverse lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; VAR_COUNT]);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var, exp: u32) -> Self {
        let mut m = Monomial::default();
        m.0[v.index()] = exp;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    fn grevlex_cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for i in (0..VAR_COUNT).rev() {
                match self.0[i].cmp(&other.0[i]) {
                    Ordering::Equal => continue,
                    // smaller exponent in the last differing variable wins
                    ord => return ord.reverse(),
                }
            }
            Ordering::Equal
        })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grevlex_cmp(other)
            .reverse()
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    // exponents add
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Monomial) -> Monomial {
        let mut out = self;
        for (a, b) in out.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: Var) -> Self {
        Self::term(1, Monomial::var(v, 1))
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(m, c.into());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// Highest exponent of `v` occurring in any term, `None` for zero.
    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    /// Coefficients of a polynomial in `v` alone, index = exponent. `None` if
    /// another variable occurs.
    pub fn univariate_coefficients(&self, v: Var) -> Option<Vec<BigInt>> {
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![BigInt::zero(); deg + 1];
        for (m, c) in &self.terms {
            if m.degree() != m.exp(v) {
                return None;
            }
            out[m.exp(v) as usize] = c.clone();
        }
        Some(out)
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replaces `v` by `value` and expands.
    pub fn substitute(&self, v: Var, value: &MultiPoly) -> MultiPoly {
        let mut powers: Vec<MultiPoly> = vec![MultiPoly::one()];
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut rest = *m;
            rest.0[v.index()] = 0;
            for (pm, pc) in &powers[e].terms {
                out.add_term(rest * *pm, c * pc);
            }
        }
        out
    }

    /// Exact evaluation at an integer point, indexed by [`Var::index`].
    pub fn eval(&self, point: &[BigInt; VAR_COUNT]) -> BigInt {
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (base, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= Pow::pow(base, e);
                }
            }
            total += t;
        }
        total
    }

    /// Evaluation with every unlisted variable set to zero.
    pub fn eval_at(&self, assignments: &[(Var, i64)]) -> BigInt {
        let mut point: [BigInt; VAR_COUNT] = Default::default();
        for &(v, val) in assignments {
            point[v.index()] = BigInt::from(val);
        }
        self.eval(&point)
    }

    /// Leading term with respect to `v`: highest power and its coefficient
    /// polynomial in the remaining variables.
    pub fn top_in(&self, v: Var) -> Option<(u32, MultiPoly)> {
        let deg = self.degree_in(v)?;
        let mut coeff = MultiPoly::zero();
        for (m, c) in &self.terms {
            if m.exp(v) == deg {
                let mut rest = *m;
                rest.0[v.index()] = 0;
                coeff.add_term(rest, c.clone());
            }
        }
        Some((deg, coeff))
    }
}

impl From<i64> for MultiPoly {
    fn from(c: i64) -> Self {
        MultiPoly::constant(c)
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl AddAssign for MultiPoly {
    fn add_assign(&mut self, rhs: MultiPoly) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += rhs;
        self
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(mut self) -> MultiPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(*ma * *mb, ca * cb);
            }
        }
        out
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", v.symbol())?;
            } else {
                write!(f, "{}^{}", v.symbol(), e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if *m == Monomial::one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for MultiPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::PolyParse("empty input".into()));
        }
        let mut out = MultiPoly::zero();
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let negative = match rest.as_bytes()[0] {
                b'+' if !first => {
                    rest = &rest[1..];
                    false
                }
                b'-' => {
                    rest = &rest[1..];
                    true
                }
                _ if first => false,
                _ => return Err(Error::PolyParse(format!("expected sign before `{rest}`"))),
            };
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let (term, tail) = rest.split_at(end);
            let (m, mut c) = parse_term(term)?;
            if negative {
                c = -c;
            }
            out.add_term(m, c);
            rest = tail;
        }
        Ok(out)
    }
}

fn parse_term(term: &str) -> Result<(Monomial, BigInt), Error> {
    if term.is_empty() {
        return Err(Error::PolyParse("empty term".into()));
    }
    let mut coeff = BigInt::one();
    let mut m = Monomial::one();
    for factor in term.split('*') {
        if factor.is_empty() {
            return Err(Error::PolyParse(format!("empty factor in `{term}`")));
        }
        if factor.bytes().all(|b| b.is_ascii_digit()) {
            coeff *= factor
                .parse::<BigInt>()
                .map_err(|e| Error::PolyParse(e.to_string()))?;
            continue;
        }
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<u32>()
                    .map_err(|_| Error::PolyParse(format!("bad exponent in `{factor}`")))?,
            ),
            None => (factor, 1),
        };
        let v = Var::from_symbol(name)
            .ok_or_else(|| Error::PolyParse(format!("unknown variable `{name}`")))?;
        m.0[v.index()] += exp;
    }
    Ok((m, coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> MultiPoly {
        MultiPoly::var(Var::X)
    }
    fn y() -> MultiPoly {
        MultiPoly::var(Var::Y)
    }
    fn z() -> MultiPoly {
        MultiPoly::var(Var::Z)
    }

    #[test]
    fn canonical_text() {
        let p = &(&x().pow(2) * &y()) + &(&MultiPoly::constant(3) * &(&y() * &z()));
        let p = &p - &MultiPoly::one();
        assert_eq!(p.to_string(), "x^2*y + 3*y*z - 1");
        assert_eq!(MultiPoly::zero().to_string(), "0");
        assert_eq!((-x()).to_string(), "-x");
    }

    #[test]
    fn grevlex_breaks_degree_ties_on_last_variable() {
        // x*z vs y^2: grevlex puts y^2 first (smaller z exponent wins).
        let p = &(&x() * &z()) + &y().pow(2);
        assert_eq!(p.to_string(), "y^2 + x*z");
        let q = &(&x() * &y()) + &(&MultiPoly::var(Var::L) * &x());
        assert_eq!(q.to_string(), "x*y + x*L");
    }

    #[test]
    fn substitution_and_evaluation() {
        // (x - 1)^3 at x -> y + 1 gives y^3
        let xm1 = &x() - &MultiPoly::one();
        let p = xm1.pow(3);
        let yp1 = &y() + &MultiPoly::one();
        assert_eq!(p.substitute(Var::X, &yp1), y().pow(3));
        assert_eq!(p.eval_at(&[(Var::X, 3)]), BigInt::from(8));
    }

    #[test]
    fn parse_errors() {
        assert!("x^".parse::<MultiPoly>().is_err());
        assert!("q".parse::<MultiPoly>().is_err());
        assert!("x +".parse::<MultiPoly>().is_err());
        assert!("".parse::<MultiPoly>().is_err());
        assert_eq!("2*3*x".parse::<MultiPoly>().unwrap().to_string(), "6*x");
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec((prop::array::uniform5(0u32..4), -50i64..50), 0..8).prop_map(
            |terms| {
                let mut p = MultiPoly::zero();
                for (e, c) in terms {
                    p.add_term(
                        Monomial(e),
                        BigInt::from(c) * BigInt::from(10).pow(c.unsigned_abs() as u32 % 30),
                    );
                }
                p
            },
        )
    }

    proptest! {
        #[test]
        fn text_round_trip(p in arb_poly()) {
            let text = p.to_string();
            let back: MultiPoly = text.parse().unwrap();
            prop_assert_eq!(&back, &p);
            prop_assert_eq!(back.to_string(), text);
        }

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_poly(), b in arb_poly(), pt in prop::array::uniform5(-3i64..4)) {
            let point: [BigInt; VAR_COUNT] = pt.map(BigInt::from);
            prop_assert_eq!((&a * &b).eval(&point), a.eval(&point) * b.eval(&point));
        }
    }
}
