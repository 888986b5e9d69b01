use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::Coeff;
use super::PuiseuxError;
use crate::value::{format_rational, parse_rational, Rational};

/// A Puiseux series known exactly below its cutoff.
///
/// Stored densely on the lattice `(1/den)·ℤ`: `coeffs[k]` is the coefficient
/// of `t^((start + k) / den)`, and the cutoff is `(start + coeffs.len()) / den`.
/// Everything at or above the cutoff is unknown. The representation is kept
/// canonical (no leading zero, smallest lattice), so `==` compares values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxSeries<F> {
    den: i64,
    start: i64,
    coeffs: Vec<F>,
}

fn lattice_len(r: Rational, den: i64) -> i64 {
    debug_assert_eq!(den % r.denom(), 0);
    r.numer() * (den / r.denom())
}

impl<F: Coeff> PuiseuxSeries<F> {
    /// No known terms below `cutoff`.
    pub fn zero_to(cutoff: Rational) -> Self {
        PuiseuxSeries {
            den: *cutoff.denom(),
            start: *cutoff.numer(),
            coeffs: Vec::new(),
        }
    }

    /// `c·t^exp`, exact up to `cutoff`.
    pub fn monomial(c: F, exp: Rational, cutoff: Rational) -> Self {
        Self::from_terms(vec![(exp, c)], cutoff).expect("single term")
    }

    /// Constant `c`, exact up to `cutoff`.
    pub fn constant(c: F, cutoff: Rational) -> Self {
        Self::monomial(c, Rational::from(0), cutoff)
    }

    /// Terms at or above `cutoff` are dropped; exponents must be distinct.
    pub fn from_terms(
        mut terms: Vec<(Rational, F)>,
        cutoff: Rational,
    ) -> Result<Self, PuiseuxError> {
        terms.retain(|(e, c)| *e < cutoff && !c.is_zero());
        terms.sort_by_key(|a| a.0);
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(PuiseuxError::RepeatedExponent);
        }
        let den = terms
            .iter()
            .fold(*cutoff.denom(), |acc, (e, _)| acc.lcm(e.denom()));
        let end = lattice_len(cutoff, den);
        let Some(first) = terms.first() else {
            return Ok(Self::zero_to(cutoff));
        };
        let start = lattice_len(first.0, den);
        let mut coeffs = vec![F::zero(); (end - start) as usize];
        for (e, c) in terms {
            coeffs[(lattice_len(e, den) - start) as usize] = c;
        }
        Ok(Self::canonical(den, start, coeffs))
    }

    fn canonical(den: i64, mut start: i64, mut coeffs: Vec<F>) -> Self {
        let lead = coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(coeffs.len());
        start += lead as i64;
        coeffs.drain(..lead);
        let end = start + coeffs.len() as i64;
        let mut g = den.gcd(&start).gcd(&end);
        for (k, c) in coeffs.iter().enumerate() {
            if g == 1 {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(&(k as i64));
            }
        }
        if g > 1 {
            let step = g as usize;
            coeffs = coeffs.into_iter().step_by(step).collect();
            PuiseuxSeries {
                den: den / g,
                start: start / g,
                coeffs,
            }
        } else {
            PuiseuxSeries { den, start, coeffs }
        }
    }

    /// Start and coefficients on the finer lattice `(1/den)·ℤ`.
    fn spread(&self, den: i64) -> (i64, Vec<F>) {
        let m = den / self.den;
        if m == 1 {
            return (self.start, self.coeffs.clone());
        }
        let mut out = vec![F::zero(); self.coeffs.len() * m as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k * m as usize] = c.clone();
        }
        (self.start * m, out)
    }

    /// Leading exponent; `None` when zero to the cutoff.
    pub fn deg(&self) -> Option<Rational> {
        (!self.coeffs.is_empty()).then(|| Rational::new(self.start, self.den))
    }

    pub fn cutoff(&self) -> Rational {
        Rational::new(self.start + self.coeffs.len() as i64, self.den)
    }

    pub fn is_zero_to_cutoff(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.first()
    }

    /// Cutoff minus degree.
    pub fn relative_precision(&self) -> Option<Rational> {
        self.deg().map(|d| self.cutoff() - d)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> Vec<(Rational, F)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Rational::new(self.start + k as i64, self.den), c.clone()))
            .collect()
    }

    /// Coefficient of `t^exp`, `None` at or above the cutoff.
    pub fn coefficient(&self, exp: Rational) -> Option<F> {
        if exp >= self.cutoff() {
            return None;
        }
        let den = self.den.lcm(exp.denom());
        let (s, v) = self.spread(den);
        let pos = lattice_len(exp, den) - s;
        Some(if pos < 0 {
            F::zero()
        } else {
            v[pos as usize].clone()
        })
    }

    /// Forget everything at or above `cutoff`.
    pub fn truncate(&self, cutoff: Rational) -> Self {
        if cutoff >= self.cutoff() {
            return self.clone();
        }
        Self::from_terms(self.terms(), cutoff).expect("terms are distinct")
    }

    pub fn add(&self, other: &Self) -> Self {
        let den = self.den.lcm(&other.den);
        let (sa, va) = self.spread(den);
        let (sb, vb) = other.spread(den);
        let start = sa.min(sb);
        let end = (sa + va.len() as i64).min(sb + vb.len() as i64);
        if end <= start {
            return Self::canonical(den, end, Vec::new());
        }
        fn at<F>(s: i64, v: &[F], pos: i64) -> Option<&F> {
            usize::try_from(pos - s).ok().and_then(|k| v.get(k))
        }
        let coeffs = (start..end)
            .map(|pos| match (at(sa, &va, pos), at(sb, &vb, pos)) {
                (Some(x), Some(y)) => x.plus(y),
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => F::zero(),
            })
            .collect();
        Self::canonical(den, start, coeffs)
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            den: self.den,
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| c.negated()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiply by a field constant.
    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero_to(self.cutoff());
        }
        PuiseuxSeries {
            den: self.den,
            start: self.start,
            coeffs: self.coeffs.iter().map(|x| x.times(c)).collect(),
        }
    }

    /// Multiply by `t^e`.
    pub fn shift(&self, e: Rational) -> Self {
        let den = self.den.lcm(e.denom());
        let (s, v) = self.spread(den);
        Self::canonical(den, s + lattice_len(e, den), v)
    }

    /// Product; relative precision is the smaller of the two.
    pub fn mul(&self, other: &Self) -> Self {
        let den = self.den.lcm(&other.den);
        let (sa, va) = self.spread(den);
        let (sb, vb) = other.spread(den);
        let len = va.len().min(vb.len());
        let mut out = vec![F::zero(); len];
        let nz_b: Vec<usize> = (0..vb.len().min(len))
            .filter(|&j| !vb[j].is_zero())
            .collect();
        for (i, x) in va.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for &j in &nz_b {
                if i + j >= len {
                    break;
                }
                out[i + j] = out[i + j].plus(&x.times(&vb[j]));
            }
        }
        Self::canonical(den, sa + sb, out)
    }

    /// Multiplicative inverse with the same relative precision.
    pub fn inv(&self) -> Result<Self, PuiseuxError> {
        let b0 = self.leading().ok_or(PuiseuxError::DivisionByZeroToCutoff)?;
        let inv0 = b0.inverse().expect("leading coefficient is nonzero");
        let n = self.coeffs.len();
        let nz: Vec<usize> = (1..n).filter(|&j| !self.coeffs[j].is_zero()).collect();
        let mut c = vec![F::zero(); n];
        c[0] = inv0.clone();
        for k in 1..n {
            let mut acc = F::zero();
            for &j in &nz {
                if j > k {
                    break;
                }
                if !c[k - j].is_zero() {
                    acc = acc.plus(&self.coeffs[j].times(&c[k - j]));
                }
            }
            c[k] = acc.times(&inv0).negated();
        }
        Ok(Self::canonical(self.den, -self.start, c))
    }

    pub fn div(&self, other: &Self) -> Result<Self, PuiseuxError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Square root whose leading coefficient is `root0`.
    pub fn sqrt_with(&self, root0: &F) -> Result<Self, PuiseuxError> {
        let a0 = self.leading().ok_or(PuiseuxError::NoSquareRoot)?;
        if root0.times(root0) != *a0 {
            return Err(PuiseuxError::NoSquareRoot);
        }
        let (den, start, a) = if self.start % 2 == 0 {
            (self.den, self.start, self.coeffs.clone())
        } else {
            let (s, v) = self.spread(self.den * 2);
            (self.den * 2, s, v)
        };
        let n = a.len();
        let half_inv = root0
            .plus(root0)
            .inverse()
            .expect("characteristic is not 2");
        let mut c = vec![F::zero(); n];
        c[0] = root0.clone();
        for k in 1..n {
            let mut acc = a[k].clone();
            for j in 1..k {
                if !c[j].is_zero() && !c[k - j].is_zero() {
                    acc = acc.minus(&c[j].times(&c[k - j]));
                }
            }
            c[k] = acc.times(&half_inv);
        }
        Ok(Self::canonical(den, start / 2, c))
    }

    /// Square root, if the leading coefficient has one.
    pub fn sqrt(&self) -> Result<Self, PuiseuxError> {
        let root0 = self
            .leading()
            .and_then(|a0| a0.sqrt())
            .ok_or(PuiseuxError::NoSquareRoot)?;
        self.sqrt_with(&root0)
    }
}

impl<F: Coeff> fmt::Display for PuiseuxSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in self.terms() {
            write!(f, "{c}·t^{} + ", format_rational(&e))?;
        }
        write!(f, "O(t^{})", format_rational(&self.cutoff()))
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    terms: Vec<(String, String)>,
    cutoff: String,
}

/// `{"terms": [[exponent, coefficient], …], "cutoff": c}` with string values.
impl<F: Coeff> Serialize for PuiseuxSeries<F> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesJson {
            terms: self
                .terms()
                .into_iter()
                .map(|(e, c)| (format_rational(&e), c.to_string()))
                .collect(),
            cutoff: format_rational(&self.cutoff()),
        }
        .serialize(s)
    }
}

impl<'de, F: Coeff> Deserialize<'de> for PuiseuxSeries<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = SeriesJson::deserialize(d)?;
        let cutoff = parse_rational(&raw.cutoff).map_err(D::Error::custom)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for (e, c) in &raw.terms {
            let e = parse_rational(e).map_err(D::Error::custom)?;
            if e >= cutoff {
                return Err(D::Error::custom("term exponent at or above the cutoff"));
            }
            let c =
                F::parse(c).ok_or_else(|| D::Error::custom(format!("bad coefficient `{c}`")))?;
            terms.push((e, c));
        }
        PuiseuxSeries::from_terms(terms, cutoff).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::super::field::{Fp, Q};
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    fn series(terms: &[(i64, i64, i64)], cutoff: i64) -> PuiseuxSeries<Q> {
        PuiseuxSeries::from_terms(
            terms.iter().map(|&(n, d, c)| (r(n, d), q(c))).collect(),
            r(cutoff, 1),
        )
        .unwrap()
    }

    #[test]
    fn degree_and_cancellation() {
        let a = series(&[(1, 1, -7), (2, 1, 3)], 10);
        assert_eq!(a.deg(), Some(r(1, 1)));
        let one = series(&[(0, 1, 1)], 10);
        let z = one.sub(&one);
        assert!(z.is_zero_to_cutoff());
        assert_eq!(z.deg(), None);
        assert_eq!(z.cutoff(), r(10, 1));
    }

    #[test]
    fn hand_products() {
        let a = series(&[(0, 1, 1), (1, 1, 1)], 10);
        let b = series(&[(0, 1, 1), (1, 1, -1)], 10);
        assert_eq!(a.mul(&b), series(&[(0, 1, 1), (2, 1, -1)], 10));
        let half = series(&[(1, 2, 2)], 10);
        let sq = half.mul(&half);
        assert_eq!(sq.terms(), vec![(r(1, 1), q(4))]);
        assert_eq!(sq.cutoff(), r(21, 2));
    }

    #[test]
    fn geometric_inverse() {
        let b = series(&[(0, 1, 1), (1, 1, -1)], 6);
        let inv = b.inv().unwrap();
        let ones: Vec<(Rational, Q)> = (0..6).map(|k| (r(k, 1), q(1))).collect();
        assert_eq!(inv.terms(), ones);
        let a = series(&[(2, 1, 5), (3, 1, 1)], 9);
        assert_eq!(a.div(&a).unwrap(), series(&[(0, 1, 1)], 7));
        assert!(matches!(
            a.div(&PuiseuxSeries::zero_to(r(3, 1))),
            Err(PuiseuxError::DivisionByZeroToCutoff)
        ));
    }

    #[test]
    fn square_roots() {
        let a = series(&[(0, 1, 1), (1, 1, 2), (2, 1, 1)], 8);
        let s = a.sqrt().unwrap();
        assert_eq!(s, series(&[(0, 1, 1), (1, 1, 1)], 8));
        let odd = series(&[(1, 1, 4)], 7);
        let s = odd.sqrt().unwrap();
        assert_eq!(s.deg(), Some(r(1, 2)));
        assert_eq!(s.mul(&s), odd.truncate(s.mul(&s).cutoff()));
        assert!(series(&[(0, 1, 2)], 4).sqrt().is_err());
    }

    #[test]
    fn canonical_lattice_and_json() {
        let a = series(&[(1, 2, 3), (3, 2, 1)], 5);
        let b = a
            .add(&series(&[(1, 3, 1)], 5))
            .sub(&series(&[(1, 3, 1)], 5));
        assert_eq!(a, b);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"terms":[["1/2","3"],["3/2","1"]],"cutoff":"5"}"#);
        let back: PuiseuxSeries<Q> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        let f: PuiseuxSeries<Fp> = serde_json::from_str(&json).unwrap();
        assert_eq!(f.deg(), Some(r(1, 2)));
        assert!(
            serde_json::from_str::<PuiseuxSeries<Q>>(r#"{"terms":[["6","1"]],"cutoff":"5"}"#)
                .is_err()
        );
    }

    #[test]
    fn coefficient_lookup_and_shift() {
        let a = series(&[(1, 1, 3), (2, 1, -1)], 4);
        assert_eq!(a.coefficient(r(2, 1)), Some(q(-1)));
        assert_eq!(a.coefficient(r(3, 2)), Some(q(0)));
        assert_eq!(a.coefficient(r(4, 1)), None);
        let s = a.shift(r(-1, 2));
        assert_eq!(s.deg(), Some(r(1, 2)));
        assert_eq!(s.cutoff(), r(7, 2));
    }
}
