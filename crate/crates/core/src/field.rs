//! Finite fields of order at most 9, as addition and multiplication tables.
//!
//! Elements are integers `0..q`; for `q = p^k` an element is the polynomial
//! whose base-`p` digits are its coefficients (lowest degree first).

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FiniteField {
    q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
}

impl FiniteField {
    /// Builds GF(q) for q in {2, 3, 4, 5, 7, 8, 9}. Non-prime orders use
    /// x^2+x+1 (q=4), x^3+x+1 (q=8) and x^2+1 (q=9).
    pub fn new(q: u32) -> Result<Self> {
        // (characteristic, degree, low coefficients of the monic modulus)
        let (p, k, modulus): (u32, u32, &[u32]) = match q {
            2 | 3 | 5 | 7 => (q, 1, &[]),
            4 => (2, 2, &[1, 1]),
            8 => (2, 3, &[1, 1, 0]),
            9 => (3, 2, &[1, 0]),
            _ => return Err(Error::UnsupportedOrder(q)),
        };
        let digits = |mut x: u32| -> Vec<u32> {
            (0..k)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let undigits = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&sum);

                let mut prod = vec![0u32; (2 * k - 1) as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // reduce using x^k = -(modulus low coefficients)
                for deg in (k as usize..prod.len()).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    prod[deg] = 0;
                    for (i, m) in modulus.iter().enumerate() {
                        let idx = deg - k as usize + i;
                        prod[idx] = (prod[idx] + (p - (c * m) % p)) % p;
                    }
                }
                mul[(a * q + b) as usize] = undigits(&prod[..k as usize]);
            }
        }
        Ok(FiniteField { q, add, mul })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    pub fn dot3(&self, a: [u32; 3], b: [u32; 3]) -> u32 {
        let mut acc = 0;
        for i in 0..3 {
            acc = self.add(acc, self.mul(a[i], b[i]));
        }
        acc
    }
}
