//! Laurent polynomials in a formal real parameter `q`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exact::GaussRat;

/// `Σ c_k q^k` with finitely many nonzero Gaussian-rational `c_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent {
    terms: BTreeMap<i32, GaussRat>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::monomial(c, 0)
    }

    /// `c · q^k`.
    pub fn monomial(c: GaussRat, k: i32) -> Self {
        let mut out = Self::zero();
        out.add_term(k, c);
        out
    }

    pub fn q_pow(k: i32) -> Self {
        Self::monomial(GaussRat::one(), k)
    }

    fn add_term(&mut self, k: i32, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &GaussRat)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn coefficient(&self, k: i32) -> GaussRat {
        self.terms.get(&k).map_or_else(GaussRat::zero, |c| c.clone())
    }

    /// The sole term `(c, k)` if there is exactly one.
    pub fn as_monomial(&self) -> Option<(&GaussRat, i32)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&k, c)| (c, k))
        } else {
            None
        }
    }

    pub fn add(&self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Laurent) -> Laurent {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (&a, x) in &self.terms {
            for (&b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }

    pub fn scale(&self, s: &GaussRat) -> Laurent {
        let mut out = Laurent::zero();
        for (&k, c) in &self.terms {
            out.add_term(k, c * s);
        }
        out
    }

    /// Inverse of a single nonzero term.
    pub fn inverse_monomial(&self) -> Option<Laurent> {
        let (c, k) = self.as_monomial()?;
        Some(Laurent::monomial(c.inv()?, -k))
    }

    /// Complex conjugation of the coefficients; `q` is real.
    pub fn conj(&self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(&k, c)| (k, c.conj())).collect(),
        }
    }

    /// Value at `q = value`; `None` when `value = 0` meets a negative power.
    pub fn evaluate(&self, value: &GaussRat) -> Option<GaussRat> {
        let mut acc = GaussRat::zero();
        for (&k, c) in &self.terms {
            acc += &(c * &value.powi(k)?);
        }
        Some(acc)
    }

    /// `self` with `q` replaced by a number, as a constant Laurent polynomial.
    pub fn specialize(&self, value: &GaussRat) -> Option<Laurent> {
        self.evaluate(value).map(Laurent::constant)
    }
}

fn q_power(k: i32) -> String {
    match k {
        0 => String::new(),
        1 => "q".into(),
        _ => format!("q^{k}"),
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (&k, c)) in self.terms.iter().enumerate() {
            let negative = c.is_real() && c.re.is_negative();
            let mag = if negative { -c } else { c.clone() };
            match (n > 0, negative) {
                (true, true) => write!(f, " - ")?,
                (true, false) => write!(f, " + ")?,
                (false, true) => write!(f, "-")?,
                (false, false) => {}
            }
            let qk = q_power(k);
            match (qk.is_empty(), mag.is_one(), mag.is_real()) {
                (true, _, true) => write!(f, "{mag}")?,
                (true, _, false) => write!(f, "({mag})")?,
                (false, true, _) => write!(f, "{qk}")?,
                (false, false, true) => write!(f, "{mag} {qk}")?,
                (false, false, false) => write!(f, "({mag}) {qk}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let q = Laurent::q_pow(1);
        let qi = Laurent::q_pow(-1);
        assert!(q.mul(&qi).is_one());
        let one_minus = Laurent::one().sub(&q.mul(&q));
        assert_eq!(one_minus.to_string(), "1 - q^2");
        assert_eq!(one_minus.evaluate(&GaussRat::from_frac(1, 2)), Some(GaussRat::from_frac(3, 4)));
        assert_eq!(qi.evaluate(&GaussRat::zero()), None);
        assert!(q.sub(&q).is_zero());
        assert_eq!(Laurent::monomial(GaussRat::from_int(-2), -1).to_string(), "-2 q^-1");
        assert_eq!(Laurent::monomial(GaussRat::from_int(3), -1).inverse_monomial().unwrap(), Laurent::monomial(GaussRat::from_frac(1, 3), 1));
    }
}
