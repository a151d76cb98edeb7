//! Arithmetic in GF(2^s) for 2 ≤ s ≤ 63.

use rand::Rng;

use crate::error::{Error, Result};

pub const DEFAULT_BITS: u32 = 32;

/// GF(2^s) modulo the numerically smallest irreducible polynomial of degree `s`.
/// Elements are `u64` values below `2^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Field {
    bits: u32,
    /// Modulus without its leading `x^s` term.
    low: u64,
}

fn clmul(a: u64, b: u64) -> u128 {
    let mut r = 0u128;
    let mut b = b;
    let a = a as u128;
    let mut i = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a << i;
        }
        b >>= 1;
        i += 1;
    }
    r
}

fn reduce(mut x: u128, bits: u32, low: u64) -> u64 {
    let full = (1u128 << bits) | low as u128;
    while x >> bits != 0 {
        let top = 127 - x.leading_zeros();
        x ^= full << (top - bits);
    }
    x as u64
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        while a != 0 && 127 - a.leading_zeros() >= 127 - b.leading_zeros() {
            let shift = b.leading_zeros() - a.leading_zeros();
            a ^= b << shift;
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn prime_factors(mut s: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= s {
        if s.is_multiple_of(p) {
            out.push(p);
            while s.is_multiple_of(p) {
                s /= p;
            }
        }
        p += 1;
    }
    if s > 1 {
        out.push(s);
    }
    out
}

/// Rabin's test: `f` of degree `s` is irreducible iff `x^(2^s) ≡ x (mod f)`
/// and `gcd(x^(2^(s/q)) − x, f) = 1` for every prime `q | s`.
fn is_irreducible(bits: u32, low: u64) -> bool {
    let f = Field { bits, low };
    let x = 2u64;
    let frob = |times: u32| {
        let mut y = x;
        for _ in 0..times {
            y = f.mul(y, y);
        }
        y
    };
    if frob(bits) != x {
        return false;
    }
    let full = (1u128 << bits) | low as u128;
    prime_factors(bits)
        .into_iter()
        .all(|q| poly_gcd(full, (frob(bits / q) ^ x) as u128) == 1)
}

impl Field {
    pub fn new(bits: u32) -> Result<Self> {
        if !(2..=63).contains(&bits) {
            return Err(Error::param(format!("field bits {bits} outside 2..=63")));
        }
        let low = (1u64..)
            .step_by(2)
            .find(|&low| is_irreducible(bits, low))
            .expect("irreducible polynomials exist in every degree");
        Ok(Field { bits, low })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// The modulus with its leading term, as a bit pattern.
    pub fn modulus(&self) -> u128 {
        (1u128 << self.bits) | self.low as u128
    }

    pub fn order(&self) -> u128 {
        1u128 << self.bits
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        reduce(clmul(a, b), self.bits, self.low)
    }

    pub fn pow(&self, mut a: u64, mut e: u128) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        (a != 0).then(|| self.pow(a, self.order() - 2))
    }

    pub fn random(&self, rng: &mut impl Rng) -> u64 {
        rng.gen::<u64>() & ((1u64 << self.bits) - 1)
    }

    /// Determinant of a square matrix given as rows; consumes a copy.
    pub fn det(&self, rows: &mut [Vec<u64>]) -> u64 {
        let n = rows.len();
        let mut det = 1;
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| rows[r][c] != 0) else {
                return 0;
            };
            rows.swap(c, p);
            let pivot = rows[c][c];
            det = self.mul(det, pivot);
            let inv = self.inv(pivot).expect("nonzero pivot");
            for r in c + 1..n {
                let f = self.mul(rows[r][c], inv);
                if f == 0 {
                    continue;
                }
                let (top, bottom) = rows.split_at_mut(r);
                for (x, &y) in bottom[0][c..].iter_mut().zip(&top[c][c..]) {
                    *x ^= self.mul(f, y);
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn known_moduli() {
        assert_eq!(Field::new(2).unwrap().modulus(), 0b111);
        assert_eq!(Field::new(3).unwrap().modulus(), 0b1011);
        assert_eq!(Field::new(4).unwrap().modulus(), 0b10011);
        assert_eq!(Field::new(8).unwrap().modulus(), 0x11b);
        assert!(Field::new(1).is_err());
        assert!(Field::new(64).is_err());
    }

    #[test]
    fn gf16_multiplicative_group_is_cyclic_of_order_15() {
        let f = Field::new(4).unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut x = 1;
        for _ in 0..15 {
            x = f.mul(x, 2);
            seen.insert(x);
        }
        assert_eq!(x, 1);
        assert_eq!(seen.len(), 15);
    }

    #[test]
    fn axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for bits in [DEFAULT_BITS, 7, 63] {
            let f = Field::new(bits).unwrap();
            let trials = if bits == DEFAULT_BITS { 100_000 } else { 5_000 };
            for _ in 0..trials {
                let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                assert_eq!(f.mul(f.add(a, b), c), f.add(f.mul(a, c), f.mul(b, c)));
                assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.add(a, a), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
            }
            assert_eq!(f.inv(0), None);
        }
    }

    #[test]
    fn determinant_small_cases() {
        let f = Field::new(8).unwrap();
        assert_eq!(f.det(&mut [vec![1, 0], vec![0, 1]]), 1);
        assert_eq!(f.det(&mut [vec![3, 5], vec![3, 5]]), 0);
        // 2x2: ad + bc in characteristic 2
        let (a, b, c, d) = (7, 9, 200, 33);
        let want = f.mul(a, d) ^ f.mul(b, c);
        assert_eq!(f.det(&mut [vec![a, b], vec![c, d]]), want);
        assert_eq!(f.det(&mut []), 1);
    }
}
