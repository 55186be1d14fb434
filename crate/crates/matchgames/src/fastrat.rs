//! Machine-word exact rationals for the simplex hot path.
//!
//! Tableau entries in the matching LPs are tiny fractions, so the solver
//! keeps them as reduced i64 numerator/denominator pairs and does the
//! arithmetic in i128. Any overflow promotes the value losslessly to an
//! arbitrary-precision rational; results are exact either way.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug)]
pub(crate) enum FastRat {
    /// den > 0, gcd(|num|, den) = 1
    Small { num: i64, den: i64 },
    Big(Box<Rational>),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn big_of_i128(v: i128) -> BigInt {
    BigInt::from(v)
}

impl FastRat {
    pub fn zero() -> Self {
        FastRat::Small { num: 0, den: 1 }
    }

    pub fn one() -> Self {
        FastRat::Small { num: 1, den: 1 }
    }

    /// Reduced value of num/den computed in i128; demotes to the small
    /// representation whenever it fits.
    fn make(mut num: i128, mut den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return FastRat::zero();
        }
        if den < 0 {
            num = -num;
            den = -den;
        }
        let g = gcd_i128(num, den);
        num /= g;
        den /= g;
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(n), Ok(d)) => FastRat::Small { num: n, den: d },
            _ => FastRat::Big(Box::new(Rational::new(big_of_i128(num), big_of_i128(den)))),
        }
    }

    fn normalize_big(r: Rational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => FastRat::Small { num: n, den: d },
            _ => FastRat::Big(Box::new(r)),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        Self::normalize_big(r.clone())
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            FastRat::Small { num, den } => Rational::new(BigInt::from(*num), BigInt::from(*den)),
            FastRat::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FastRat::Small { num, .. } => *num == 0,
            FastRat::Big(b) => b.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, FastRat::Small { num: 1, den: 1 })
    }

    pub fn is_negative(&self) -> bool {
        match self {
            FastRat::Small { num, .. } => *num < 0,
            FastRat::Big(b) => b.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            FastRat::Small { num, .. } => *num > 0,
            FastRat::Big(b) => b.is_positive(),
        }
    }

    pub fn mul(&self, other: &FastRat) -> FastRat {
        match (self, other) {
            (FastRat::Small { num: a, den: b }, FastRat::Small { num: c, den: d }) => {
                FastRat::make(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Self::normalize_big(self.to_rational() * other.to_rational()),
        }
    }

    pub fn div(&self, other: &FastRat) -> FastRat {
        debug_assert!(!other.is_zero());
        match (self, other) {
            (FastRat::Small { num: a, den: b }, FastRat::Small { num: c, den: d }) => {
                FastRat::make(*a as i128 * *d as i128, *b as i128 * *c as i128)
            }
            _ => Self::normalize_big(self.to_rational() / other.to_rational()),
        }
    }

    pub fn sub(&self, other: &FastRat) -> FastRat {
        match (self, other) {
            (FastRat::Small { num: a, den: b }, FastRat::Small { num: c, den: d }) => {
                let left = *a as i128 * *d as i128;
                let right = *c as i128 * *b as i128;
                match left.checked_sub(right) {
                    Some(num) => FastRat::make(num, *b as i128 * *d as i128),
                    None => Self::normalize_big(self.to_rational() - other.to_rational()),
                }
            }
            _ => Self::normalize_big(self.to_rational() - other.to_rational()),
        }
    }

    pub fn add(&self, other: &FastRat) -> FastRat {
        match (self, other) {
            (FastRat::Small { num: a, den: b }, FastRat::Small { num: c, den: d }) => {
                let left = *a as i128 * *d as i128;
                let right = *c as i128 * *b as i128;
                match left.checked_add(right) {
                    Some(num) => FastRat::make(num, *b as i128 * *d as i128),
                    None => Self::normalize_big(self.to_rational() + other.to_rational()),
                }
            }
            _ => Self::normalize_big(self.to_rational() + other.to_rational()),
        }
    }

    pub fn neg(&self) -> FastRat {
        match self {
            FastRat::Small { num, den } => FastRat::Small {
                num: -num,
                den: *den,
            },
            FastRat::Big(b) => FastRat::Big(Box::new(-(**b).clone())),
        }
    }

    /// x -= f * p, the elimination kernel. Tableau entries are mostly 0 and
    /// +-1, so those factors skip the general reduce path.
    pub fn sub_mul(&mut self, f: &FastRat, p: &FastRat) {
        let t = match (f, p) {
            (FastRat::Small { num: 1, den: 1 }, _) => p.clone(),
            (FastRat::Small { num: -1, den: 1 }, _) => p.neg(),
            (_, FastRat::Small { num: 1, den: 1 }) => f.clone(),
            (_, FastRat::Small { num: -1, den: 1 }) => f.neg(),
            _ => f.mul(p),
        };
        if self.is_zero() {
            *self = t.neg();
            return;
        }
        if t.is_zero() {
            return;
        }
        if let (FastRat::Small { num: a, den: b }, FastRat::Small { num: c, den: d }) = (&*self, &t)
        {
            if b == d {
                // common denominator: one small gcd against it
                if let Some(num) = a.checked_sub(*c) {
                    *self = FastRat::make(num as i128, *b as i128);
                    return;
                }
            }
        }
        *self = self.sub(&t);
    }

    pub fn cmp_val(&self, other: &FastRat) -> std::cmp::Ordering {
        match (self, other) {
            (FastRat::Small { num: a, den: b }, FastRat::Small { num: c, den: d }) => {
                let left = *a as i128 * *d as i128;
                let right = *c as i128 * *b as i128;
                left.cmp(&right)
            }
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl PartialEq for FastRat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_val(other) == std::cmp::Ordering::Equal
    }
}
