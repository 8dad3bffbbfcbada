// Copyright 2026 The lnnsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Exact dyadic Gaussian rationals `(a + b i) / 2^k`.
//!
//! Every matrix entry of NOT, CNOT, Toffoli, CV, CV+ and SWAP lies in this
//! ring, so products of gate matrices stay exact. Values are kept in
//! canonical form (`k = 0` or at least one of `a`, `b` odd), which makes
//! derived equality and hashing structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use ibig::IBig;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicGaussian {
    re: IBig,
    im: IBig,
    exp: u32,
}

fn is_zero(x: &IBig) -> bool {
    x.trailing_zeros().is_none()
}

impl DyadicGaussian {
    pub fn new(re: impl Into<IBig>, im: impl Into<IBig>, exp: u32) -> Self {
        let mut z = DyadicGaussian {
            re: re.into(),
            im: im.into(),
            exp,
        };
        z.normalize();
        z
    }

    pub fn zero() -> Self {
        DyadicGaussian::new(0, 0, 0)
    }

    pub fn one() -> Self {
        DyadicGaussian::new(1, 0, 0)
    }

    pub fn i() -> Self {
        DyadicGaussian::new(0, 1, 0)
    }

    /// `(1 + i) / 2`, the scalar in front of the V matrix.
    pub fn half_one_plus_i() -> Self {
        DyadicGaussian::new(1, 1, 1)
    }

    pub fn re_num(&self) -> &IBig {
        &self.re
    }

    pub fn im_num(&self) -> &IBig {
        &self.im
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.re) && is_zero(&self.im)
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0 && self.re == IBig::from(1u8) && is_zero(&self.im)
    }

    fn normalize(&mut self) {
        let shift = match (self.re.trailing_zeros(), self.im.trailing_zeros()) {
            (None, None) => {
                self.exp = 0;
                return;
            }
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.min(b),
        };
        let shift = shift.min(self.exp as usize);
        if shift > 0 {
            self.re = &self.re >> shift;
            self.im = &self.im >> shift;
            self.exp -= shift as u32;
        }
    }

    pub fn conj(&self) -> Self {
        DyadicGaussian {
            re: self.re.clone(),
            im: -&self.im,
            exp: self.exp,
        }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        DyadicGaussian {
            re: -&self.im,
            im: self.re.clone(),
            exp: self.exp,
        }
    }

    /// `|z|^2` as a real dyadic value.
    pub fn norm_sqr(&self) -> DyadicGaussian {
        DyadicGaussian::new(&self.re * &self.re + &self.im * &self.im, 0, 2 * self.exp)
    }

    /// Numerators of `self` and `other` over the common denominator `2^max(k)`.
    fn aligned(&self, other: &Self) -> (IBig, IBig, IBig, IBig, u32) {
        let exp = self.exp.max(other.exp);
        let ls = (exp - self.exp) as usize;
        let lo = (exp - other.exp) as usize;
        (
            &self.re << ls,
            &self.im << ls,
            &other.re << lo,
            &other.im << lo,
            exp,
        )
    }
}

impl Default for DyadicGaussian {
    fn default() -> Self {
        DyadicGaussian::zero()
    }
}

impl Add for &DyadicGaussian {
    type Output = DyadicGaussian;
    fn add(self, rhs: &DyadicGaussian) -> DyadicGaussian {
        let (a, b, c, d, exp) = self.aligned(rhs);
        DyadicGaussian::new(a + c, b + d, exp)
    }
}

impl Sub for &DyadicGaussian {
    type Output = DyadicGaussian;
    fn sub(self, rhs: &DyadicGaussian) -> DyadicGaussian {
        let (a, b, c, d, exp) = self.aligned(rhs);
        DyadicGaussian::new(a - c, b - d, exp)
    }
}

impl Mul for &DyadicGaussian {
    type Output = DyadicGaussian;
    fn mul(self, rhs: &DyadicGaussian) -> DyadicGaussian {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        DyadicGaussian::new(re, im, self.exp + rhs.exp)
    }
}

impl Neg for &DyadicGaussian {
    type Output = DyadicGaussian;
    fn neg(self) -> DyadicGaussian {
        DyadicGaussian {
            re: -&self.re,
            im: -&self.im,
            exp: self.exp,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for DyadicGaussian {
            type Output = DyadicGaussian;
            fn $f(self, rhs: DyadicGaussian) -> DyadicGaussian {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for DyadicGaussian {
    type Output = DyadicGaussian;
    fn neg(self) -> DyadicGaussian {
        -&self
    }
}

impl From<i64> for DyadicGaussian {
    fn from(v: i64) -> Self {
        DyadicGaussian::new(v, 0, 0)
    }
}

impl fmt::Debug for DyadicGaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DyadicGaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "({}{:+}i)", self.re, self.im)
        } else {
            write!(f, "({}{:+}i)/2^{}", self.re, self.im, self.exp)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dg() -> impl Strategy<Value = DyadicGaussian> {
        (-64i64..64, -64i64..64, 0u32..6).prop_map(|(a, b, k)| DyadicGaussian::new(a, b, k))
    }

    #[test]
    fn canonical_form() {
        let a = DyadicGaussian::new(2, 4, 1);
        assert_eq!(a, DyadicGaussian::new(1, 2, 0));
        assert_eq!(a.exp(), 0);
        assert_eq!(DyadicGaussian::new(0, 0, 7).exp(), 0);
        assert_eq!(DyadicGaussian::new(4, 0, 3), DyadicGaussian::new(1, 0, 1));
    }

    #[test]
    fn v_scalar_squares_to_i_over_2() {
        let h = DyadicGaussian::half_one_plus_i();
        assert_eq!(&h * &h, DyadicGaussian::new(0, 1, 1));
        assert_eq!(&h * &h.conj(), DyadicGaussian::new(1, 0, 1));
    }

    proptest! {
        #[test]
        fn ring_laws(a in dg(), b in dg(), c in dg()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(a.mul_i().mul_i(), -&a);
        }

        #[test]
        fn equal_values_have_equal_repr(a in -50i64..50, b in -50i64..50, k in 0u32..5, s in 0u32..4) {
            let x = DyadicGaussian::new(a, b, k);
            let y = DyadicGaussian::new(a << s, b << s, k + s);
            prop_assert_eq!(x, y);
        }
    }
}
