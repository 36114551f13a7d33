//! Tableau scalar: a reduced `i64` fraction with transparent promotion to a
//! big rational on overflow. Assignment-polytope tableaux stay small almost
//! everywhere, so the fast path carries nearly all of the arithmetic.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub(crate) enum Num {
    /// numerator, denominator; denominator > 0, gcd = 1
    Small(i64, i64),
    Big(Box<BigRational>),
}

impl Num {
    pub const ZERO: Num = Num::Small(0, 1);
    pub const ONE: Num = Num::Small(1, 1);

    pub fn from_big(q: &BigRational) -> Num {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) => Num::Small(n, d),
            _ => Num::Big(Box::new(q.clone())),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Num::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Num::Big(b) => (**b).clone(),
        }
    }

    fn from_i128(n: i128, d: i128) -> Num {
        // d > 0 and gcd(n, d) = 1 on entry
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Num::Small(n, d),
            _ => Num::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn demote(q: BigRational) -> Num {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) => Num::Small(n, d),
            _ => Num::Big(Box::new(q)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Num::Small(n, _) => *n == 0,
            Num::Big(b) => b.is_zero(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Num::Small(n, _) => *n > 0,
            Num::Big(b) => b.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Num::Small(n, _) => *n < 0,
            Num::Big(b) => b.is_negative(),
        }
    }

    pub fn neg(&self) -> Num {
        match self {
            // i64::MIN has no positive counterpart
            Num::Small(n, d) if *n != i64::MIN => Num::Small(-n, *d),
            _ => Num::demote(-self.to_big()),
        }
    }

    pub fn add(&self, other: &Num) -> Num {
        if let (Num::Small(a, b), Num::Small(c, d)) = (self, other) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            let g = b.gcd(&d);
            let num = a * (d / g) + c * (b / g);
            let den = b * (d / g);
            let h = num.gcd(&den);
            if h == 0 {
                return Num::ZERO;
            }
            return Num::from_i128(num / h, den / h);
        }
        Num::demote(self.to_big() + other.to_big())
    }

    pub fn sub(&self, other: &Num) -> Num {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Num) -> Num {
        if let (Num::Small(a, b), Num::Small(c, d)) = (self, other) {
            if *a == 0 || *c == 0 {
                return Num::ZERO;
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            let g1 = a.gcd(&d);
            let g2 = c.gcd(&b);
            return Num::from_i128((a / g1) * (c / g2), (b / g2) * (d / g1));
        }
        Num::demote(self.to_big() * other.to_big())
    }

    pub fn div(&self, other: &Num) -> Num {
        assert!(!other.is_zero(), "division by zero in simplex tableau");
        if let (Num::Small(a, b), Num::Small(c, d)) = (self, other) {
            if *a == 0 {
                return Num::ZERO;
            }
            let (a, b, mut c, mut d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if c < 0 {
                c = -c;
                d = -d;
            }
            // a/b * d/c
            let g1 = a.gcd(&c);
            let g2 = d.gcd(&b);
            return Num::from_i128((a / g1) * (d / g2), (b / g2) * (c / g1));
        }
        Num::demote(self.to_big() / other.to_big())
    }

    /// `self - f * x`
    pub fn sub_mul(&self, f: &Num, x: &Num) -> Num {
        self.sub(&f.mul(x))
    }

    pub fn cmp_num(&self, other: &Num) -> Ordering {
        if let (Num::Small(a, b), Num::Small(c, d)) = (self, other) {
            return (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128));
        }
        self.to_big().cmp(&other.to_big())
    }

    pub fn is_one(&self) -> bool {
        match self {
            Num::Small(n, d) => *n == 1 && *d == 1,
            Num::Big(b) => b.is_one(),
        }
    }
}
