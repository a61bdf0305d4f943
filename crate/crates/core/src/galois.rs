//! Exact arithmetic in small Galois fields GF(p^m), m ≤ 3.
//!
//! Elements are reduced coefficient vectors `c_0 + c_1 x + … + c_{m-1} x^{m-1}`
//! modulo a fixed monic irreducible polynomial. The integer code
//! `Σ c_i p^i` orders elements lexicographically by `(c_{m-1}, …, c_0)`, so
//! GF(4) enumerates as `0, 1, x, x+1`.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 3;

/// An element of GF(p^m); only meaningful together with its [`GaloisField`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: [u32; MAX_DEGREE],
}

impl FieldElement {
    /// Coefficients from the constant term upwards (unused trailing slots are 0).
    pub fn coeffs(&self) -> &[u32; MAX_DEGREE] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisField {
    p: u32,
    m: usize,
    /// Monic modulus, constant term first, length `m + 1`.
    modulus: Vec<u32>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Remainder of `num` divided by the monic `den` over GF(p); both constant-first.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - lead * c % p) % p;
            }
        }
        r.pop();
    }
    r
}

impl GaloisField {
    /// Builds GF(p^m) from a monic modulus given constant term first.
    pub fn new(p: u32, m: usize, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) || p > 255 || m == 0 || m > MAX_DEGREE {
            return Err(Error::UnsupportedField { p, m: m as u32 });
        }
        if modulus.len() != m + 1 || modulus[m] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidParameter(format!(
                "modulus {modulus:?} is not a reduced monic polynomial of degree {m}"
            )));
        }
        if !Self::is_irreducible(p, &modulus) {
            return Err(Error::ReducibleModulus { p });
        }
        Ok(Self { p, m, modulus })
    }

    /// Exhaustive check that no monic polynomial of degree `1..=deg/2` divides `poly`.
    pub fn is_irreducible(p: u32, poly: &[u32]) -> bool {
        let deg = poly.len() - 1;
        for fdeg in 1..=deg / 2 {
            let count = (p as usize).pow(fdeg as u32);
            for code in 0..count {
                let mut factor = Vec::with_capacity(fdeg + 1);
                let mut rest = code;
                for _ in 0..fdeg {
                    factor.push((rest % p as usize) as u32);
                    rest /= p as usize;
                }
                factor.push(1);
                if poly_rem(poly, &factor, p).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }

    /// GF(p^m) with the fixed moduli x²+x+1 (GF(4)), x³+x+1 (GF(8)),
    /// x²+1 (GF(9)); prime fields use the modulus `x`.
    pub fn standard(p: u32, m: usize) -> Result<Self> {
        let modulus = match (p, m) {
            (_, 1) => vec![0, 1],
            (2, 2) => vec![1, 1, 1],
            (2, 3) => vec![1, 1, 0, 1],
            (3, 2) => vec![1, 0, 1],
            _ => return Err(Error::UnsupportedField { p, m: m as u32 }),
        };
        Self::new(p, m, modulus)
    }

    /// The standard field of order `q = p^m`.
    pub fn with_order(q: usize) -> Result<Self> {
        let (p, m) = prime_power(q).ok_or(Error::UnsupportedField { p: q as u32, m: 1 })?;
        Self::standard(p, m)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.m as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: [0; MAX_DEGREE],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.constant(1)
    }

    pub fn constant(&self, c: u32) -> FieldElement {
        let mut coeffs = [0; MAX_DEGREE];
        coeffs[0] = c % self.p;
        FieldElement { coeffs }
    }

    /// The generator `x` of the polynomial basis (equals the constant 0 when m = 1).
    pub fn x(&self) -> FieldElement {
        if self.m == 1 {
            // x ≡ 0 mod x
            return self.zero();
        }
        let mut coeffs = [0; MAX_DEGREE];
        coeffs[1] = 1;
        FieldElement { coeffs }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.m {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.m
            )));
        }
        let mut out = [0; MAX_DEGREE];
        for (dst, &c) in out.iter_mut().zip(coeffs) {
            *dst = c % self.p;
        }
        Ok(FieldElement { coeffs: out })
    }

    pub fn from_code(&self, code: usize) -> FieldElement {
        let mut coeffs = [0; MAX_DEGREE];
        let mut rest = code % self.order();
        for c in coeffs.iter_mut().take(self.m) {
            *c = (rest % self.p as usize) as u32;
            rest /= self.p as usize;
        }
        FieldElement { coeffs }
    }

    pub fn code(&self, a: &FieldElement) -> usize {
        a.coeffs[..self.m]
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.p as usize + c as usize)
    }

    /// All elements in code order; the first is zero.
    pub fn enumerate(&self) -> Vec<FieldElement> {
        (0..self.order()).map(|c| self.from_code(c)).collect()
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut coeffs = [0; MAX_DEGREE];
        for i in 0..self.m {
            coeffs[i] = (a.coeffs[i] + b.coeffs[i]) % self.p;
        }
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let mut coeffs = [0; MAX_DEGREE];
        for i in 0..self.m {
            coeffs[i] = (self.p - a.coeffs[i]) % self.p;
        }
        FieldElement { coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut prod = vec![0u32; 2 * self.m - 1];
        for i in 0..self.m {
            for j in 0..self.m {
                prod[i + j] = (prod[i + j] + a.coeffs[i] * b.coeffs[j]) % self.p;
            }
        }
        let r = poly_rem(&prod, &self.modulus, self.p);
        let mut coeffs = [0; MAX_DEGREE];
        for (dst, c) in coeffs.iter_mut().zip(r) {
            *dst = c;
        }
        FieldElement { coeffs }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `a^(q-2)`, the inverse of a nonzero element.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.order() as u64 - 2))
    }

    /// Frobenius automorphism `a ↦ a^p`.
    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow(a, self.p as u64)
    }

    /// Absolute trace `Σ_{j<m} a^(p^j)`; lies in the prime subfield.
    pub fn trace(&self, a: &FieldElement) -> FieldElement {
        let mut acc = self.zero();
        let mut term = *a;
        for _ in 0..self.m {
            acc = self.add(&acc, &term);
            term = self.frobenius(&term);
        }
        acc
    }

    /// The trace as an integer in `0..p`.
    pub fn trace_value(&self, a: &FieldElement) -> u32 {
        let t = self.trace(a);
        debug_assert!(t.coeffs[1..].iter().all(|&c| c == 0), "trace left the prime field");
        t.coeffs[0]
    }

    /// Renders an element as a polynomial in `x`.
    pub fn display<'a>(&'a self, a: &'a FieldElement) -> impl fmt::Display + 'a {
        struct Show<'a>(&'a GaloisField, &'a FieldElement);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let terms: Vec<String> = (0..self.0.m)
                    .rev()
                    .filter(|&i| self.1.coeffs[i] != 0)
                    .map(|i| {
                        let c = self.1.coeffs[i];
                        match (i, c) {
                            (0, _) => c.to_string(),
                            (1, 1) => "x".to_string(),
                            (1, _) => format!("{c}x"),
                            (_, 1) => format!("x^{i}"),
                            _ => format!("{c}x^{i}"),
                        }
                    })
                    .collect();
                if terms.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", terms.join("+"))
                }
            }
        }
        Show(self, a)
    }
}

/// Splits `q` as `p^m` with `p` prime, if possible.
pub fn prime_power(q: usize) -> Option<(u32, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|k| q % k == 0)?;
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}
