//! Prime field arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field F_p. Only the characteristic is stored; residues are `u8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Field {
    p: u8,
}

impl Field {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=251).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Field { p: p as u8 })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p as u32
    }

    #[inline]
    pub fn is_two(self) -> bool {
        self.p == 2
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u8 {
        x.rem_euclid(self.p as i64) as u8
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        let s = a as u16 + b as u16;
        if s >= self.p as u16 {
            (s - self.p as u16) as u8
        } else {
            s as u8
        }
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        if a >= b {
            a - b
        } else {
            (a as u16 + self.p as u16 - b as u16) as u8
        }
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    pub fn pow(self, a: u8, mut e: u64) -> u8 {
        let mut base = a % self.p;
        let mut acc = 1u8 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u8) -> u8 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// Binomial coefficient C(n, k) mod p via Lucas' theorem.
    pub fn binom(self, mut n: u64, mut k: u64) -> u8 {
        if k > n {
            return 0;
        }
        let p = self.p as u64;
        let mut acc = 1u8;
        while n > 0 || k > 0 {
            let (ni, ki) = (n % p, k % p);
            if ki > ni {
                return 0;
            }
            acc = self.mul(acc, small_binom_mod(ni, ki, p));
            n /= p;
            k /= p;
        }
        acc
    }

    /// Multinomial coefficient (sum parts)! / prod(parts!) mod p.
    pub fn multinomial(self, parts: impl IntoIterator<Item = u64>) -> u8 {
        let mut total = 0u64;
        let mut acc = 1u8;
        for part in parts {
            total += part;
            acc = self.mul(acc, self.binom(total, part));
            if acc == 0 {
                return 0;
            }
        }
        acc
    }
}

fn small_binom_mod(n: u64, k: u64, p: u64) -> u8 {
    // n < p, so the exact value fits comfortably in u128 for p <= 251 only after reduction
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    // den is invertible because k < p
    let mut inv = 1u64;
    let mut base = den;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            inv = inv * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    (num * inv % p) as u8
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// A residue together with its characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    pub value: u8,
    pub field: Field,
}

impl FpScalar {
    pub fn new(field: Field, value: i64) -> Self {
        FpScalar {
            value: field.reduce(value),
            field,
        }
    }
}

impl std::ops::Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.field, rhs.field);
        FpScalar {
            value: self.field.add(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl std::ops::Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.field, rhs.field);
        FpScalar {
            value: self.field.mul(self.value, rhs.value),
            field: self.field,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(Field::new(4).is_err());
        assert!(Field::new(1).is_err());
        assert!(Field::new(7).is_ok());
    }

    #[test]
    fn binomials_match_exact_values() {
        for p in [2u32, 3, 5, 7] {
            let f = Field::new(p).unwrap();
            for n in 0..20u64 {
                let mut row = vec![1u128];
                for k in 1..=n {
                    let prev = *row.last().unwrap();
                    row.push(prev * (n - k + 1) as u128 / k as u128);
                }
                for k in 0..=n {
                    assert_eq!(f.binom(n, k) as u128, row[k as usize] % p as u128);
                }
            }
        }
    }

    #[test]
    fn inverses() {
        let f = Field::new(7).unwrap();
        for a in 1..7u8 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }
}
