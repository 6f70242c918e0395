use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// Field-like scalar the q-series formulas are written over.
///
/// Implemented for every type with field operations, in particular
/// [`crate::Rational`] (exact) and [`crate::Real`].
pub trait Scalar: Num + Clone + Neg<Output = Self> + FromPrimitive + Debug {
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer is representable")
    }

    fn powu(&self, e: u64) -> Self {
        let mut base = self.clone();
        let mut e = e;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl<T> Scalar for T where T: Num + Clone + Neg<Output = T> + FromPrimitive + Debug {}

/// `(-1)^k` as a scalar.
pub fn sign<T: Scalar>(k: u64) -> T {
    if k.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    }
}

/// Binomial coefficient `C(n, k)` for nonnegative `n`, accumulated in `T`.
pub fn binomial<T: Scalar>(n: u64, k: u64) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut c = T::one();
    for i in 0..k {
        c = c * T::from_int((n - i) as i64) / T::from_int((i + 1) as i64);
    }
    c
}
