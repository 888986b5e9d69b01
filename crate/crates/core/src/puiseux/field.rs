use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

/// Coefficient field of a Puiseux series.
pub trait Coeff:
    Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Short name recorded in certificates.
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// `None` for zero.
    fn inverse(&self) -> Option<Self>;
    /// A square root in the field, if one exists.
    fn sqrt(&self) -> Option<Self>;
    fn parse(text: &str) -> Option<Self>;
}

/// Uniform integer in `[1, 2^31]`, never zero in either field.
pub fn random_generic_coefficient<F: Coeff, R: Rng + ?Sized>(rng: &mut R) -> F {
    F::from_i64(rng.gen_range(1..=(1i64 << 31)))
}

/// The prime `2^64 - 2^32 + 1`. It is `1 (mod 4)`, so `-1` is a square.
pub const P: u64 = 0xFFFF_FFFF_0000_0001;
const EPSILON: u64 = 0xFFFF_FFFF;
/// `P - 1 = 2^32 · ODD`.
const TWO_ADICITY: u32 = 32;
const ODD: u64 = 0xFFFF_FFFF;
/// 7 generates the multiplicative group, so it is a non-residue.
const NON_RESIDUE: u64 = 7;

/// Integers modulo [`P`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Fp(u64);

impl Fp {
    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    // 2^64 ≡ 2^32 - 1 and 2^96 ≡ -1.
    fn reduce(x: u128) -> u64 {
        let lo = x as u64;
        let hi = (x >> 64) as u64;
        let (hi_hi, hi_lo) = (hi >> 32, hi & EPSILON);
        let (mut t0, borrow) = lo.overflowing_sub(hi_hi);
        if borrow {
            t0 = t0.wrapping_sub(EPSILON);
        }
        let (t, carry) = t0.overflowing_add(hi_lo * EPSILON);
        let t = t.wrapping_add(EPSILON * carry as u64);
        if t >= P {
            t - P
        } else {
            t
        }
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Coeff for Fp {
    const NAME: &'static str = "goldilocks";

    fn zero() -> Self {
        Fp(0)
    }

    fn one() -> Self {
        Fp(1)
    }

    fn from_i64(v: i64) -> Self {
        Fp((v as i128).rem_euclid(P as i128) as u64)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn plus(&self, other: &Self) -> Self {
        let s = self.0 as u128 + other.0 as u128;
        Fp(if s >= P as u128 {
            (s - P as u128) as u64
        } else {
            s as u64
        })
    }

    fn minus(&self, other: &Self) -> Self {
        Fp(if self.0 >= other.0 {
            self.0 - other.0
        } else {
            P - (other.0 - self.0)
        })
    }

    fn times(&self, other: &Self) -> Self {
        Fp(Fp::reduce(self.0 as u128 * other.0 as u128))
    }

    fn negated(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }

    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.pow(P - 2))
    }

    /// Tonelli-Shanks.
    fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(*self);
        }
        if self.pow((P - 1) / 2) != Fp(1) {
            return None;
        }
        let mut m = TWO_ADICITY;
        let mut c = Fp(NON_RESIDUE).pow(ODD);
        let mut t = self.pow(ODD);
        let mut r = self.pow(ODD.div_ceil(2));
        while t != Fp(1) {
            let mut i = 0;
            let mut t2 = t;
            while t2 != Fp(1) {
                t2 = t2.times(&t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..m - i - 1 {
                b = b.times(&b);
            }
            m = i;
            c = b.times(&b);
            t = t.times(&c);
            r = r.times(&b);
        }
        Some(r)
    }

    fn parse(text: &str) -> Option<Self> {
        let v: u64 = text.trim().parse().ok()?;
        (v < P).then_some(Fp(v))
    }
}

/// Exact rationals with arbitrary precision.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Q(pub BigRational);

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

fn int_sqrt(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    (&r * &r == *v).then_some(r)
}

impl Coeff for Q {
    const NAME: &'static str = "rational";

    fn zero() -> Self {
        Q(BigRational::zero())
    }

    fn one() -> Self {
        Q(BigRational::one())
    }

    fn from_i64(v: i64) -> Self {
        Q(BigRational::from_integer(v.into()))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn plus(&self, other: &Self) -> Self {
        Q(&self.0 + &other.0)
    }

    fn minus(&self, other: &Self) -> Self {
        Q(&self.0 - &other.0)
    }

    fn times(&self, other: &Self) -> Self {
        Q(&self.0 * &other.0)
    }

    fn negated(&self) -> Self {
        Q(-&self.0)
    }

    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Q(self.0.recip()))
    }

    fn sqrt(&self) -> Option<Self> {
        let n = int_sqrt(self.0.numer())?;
        let d = int_sqrt(self.0.denom())?;
        Some(Q(BigRational::new(n, d)))
    }

    fn parse(text: &str) -> Option<Self> {
        let s = text.trim();
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        (!d.is_zero()).then(|| Q(BigRational::new(n, d)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fp_arithmetic() {
        let a = Fp::from_i64(-1);
        assert_eq!(a.value(), P - 1);
        assert_eq!(a.times(&a), Fp::one());
        let x = Fp::from_i64(123_456_789);
        assert_eq!(x.times(&x.inverse().unwrap()), Fp::one());
        assert!(Fp::zero().inverse().is_none());
        let i = a.sqrt().unwrap();
        assert_eq!(i.times(&i), a);
        assert!(Fp::new(NON_RESIDUE).sqrt().is_none());
        assert_eq!(Fp::parse(&x.to_string()), Some(x));
        assert_eq!(Fp::parse(&P.to_string()), None);
    }

    #[test]
    fn fp_reduction_agrees_with_remainder() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let edge = [0, 1, P - 1, P - 2, EPSILON, EPSILON + 1, 1 << 63];
        for k in 0..20_000 {
            let (x, y) = if k < 49 {
                (edge[k % 7], edge[k / 7])
            } else {
                (rng.gen_range(0..P), rng.gen_range(0..P))
            };
            let want = ((x as u128 * y as u128) % P as u128) as u64;
            assert_eq!(Fp(x).times(&Fp(y)).value(), want);
            let want = ((x as u128 + y as u128) % P as u128) as u64;
            assert_eq!(Fp(x).plus(&Fp(y)).value(), want);
            assert_eq!(Fp(x).minus(&Fp(y)).plus(&Fp(y)), Fp(x));
        }
    }

    #[test]
    fn fp_square_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut residues = 0;
        for _ in 0..2000 {
            let x = Fp(rng.gen_range(1..P));
            let r = x.times(&x).sqrt().unwrap();
            assert!(r == x || r == x.negated());
            if let Some(s) = x.sqrt() {
                assert_eq!(s.times(&s), x);
                residues += 1;
            }
        }
        assert!((800..1200).contains(&residues));
    }

    #[test]
    fn q_arithmetic() {
        let a = Q::parse("9/4").unwrap();
        assert_eq!(a.sqrt(), Q::parse("3/2"));
        assert!(Q::parse("2").unwrap().sqrt().is_none());
        assert!(Q::parse("-4").unwrap().sqrt().is_none());
        assert_eq!(a.times(&a.inverse().unwrap()), Q::one());
        assert_eq!(a.to_string(), "9/4");
        assert!(Q::parse("1/0").is_none());
    }

    #[test]
    fn generic_coefficients_are_nonzero_and_seeded() {
        let mut r1 = ChaCha8Rng::seed_from_u64(3);
        let mut r2 = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let a: Fp = random_generic_coefficient(&mut r1);
            let b: Fp = random_generic_coefficient(&mut r2);
            assert!(!a.is_zero());
            assert_eq!(a, b);
        }
    }
}
