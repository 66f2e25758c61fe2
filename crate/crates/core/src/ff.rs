//! Prime-field and univariate polynomial arithmetic.
//!
//! Field sizes stay below 2^32 so every product of two reduced elements fits
//! in a `u64` before reduction.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large for single-word arithmetic")]
    ModulusTooLarge(u64),
    #[error("operands live in different fields (q = {0} vs q = {1})")]
    FieldMismatch(u64, u64),
    #[error("duplicate interpolation abscissa {0}")]
    DuplicatePoint(u64),
    #[error("universe size must be positive")]
    EmptyUniverse,
}

/// The prime field F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u64,
}

/// An element of some [`PrimeField`]; always reduced into `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub u64);

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime `q` with `4n <= q`; Bertrand's postulate keeps it below `8n`.
pub fn choose_prime(n: u64) -> Result<PrimeField, FieldError> {
    if n == 0 {
        return Err(FieldError::EmptyUniverse);
    }
    let mut q = 4 * n;
    while !is_prime(q) {
        q += 1;
    }
    debug_assert!(q <= 8 * n);
    PrimeField::new(q)
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self, FieldError> {
        if q >= 1 << 32 {
            return Err(FieldError::ModulusTooLarge(q));
        }
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        Ok(Self { q })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Number of bits needed to write one element, `ceil(log2 q)`.
    pub fn element_bits(&self) -> u64 {
        u64::from(64 - (self.q - 1).leading_zeros())
    }

    #[inline]
    pub fn elem(&self, v: u64) -> Fe {
        Fe(v % self.q)
    }

    /// Embeds a possibly negative integer.
    pub fn from_i64(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.q as i64) as u64)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let s = a.0 + b.0;
        Fe(if s >= self.q { s - self.q } else { s })
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        Fe(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.q - b.0 })
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(if a.0 == 0 { 0 } else { self.q - a.0 })
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(a.0 * b.0 % self.q)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe(1 % self.q);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; `inv(0)` is `0`.
    pub fn inv(&self, a: Fe) -> Fe {
        self.pow(a, self.q - 2)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }
}

/// Univariate polynomial over a prime field, coefficients low degree first.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and equality is plain sequence equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: PrimeField,
    coeffs: Vec<Fe>,
}

impl Polynomial {
    pub fn zero(field: PrimeField) -> Self {
        Self { field, coeffs: Vec::new() }
    }

    pub fn constant(field: PrimeField, c: Fe) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(field: PrimeField, c: Fe, k: usize) -> Self {
        let mut coeffs = vec![Fe(0); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(field, coeffs)
    }

    pub fn from_coeffs(field: PrimeField, coeffs: Vec<Fe>) -> Self {
        let mut coeffs: Vec<Fe> = coeffs.into_iter().map(|c| field.elem(c.0)).collect();
        while coeffs.last() == Some(&Fe(0)) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn from_u64s(field: PrimeField, coeffs: &[u64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| Fe(c)).collect())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Fe {
        self.coeffs.get(k).copied().unwrap_or(Fe(0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Fe(0), |acc, &c| f.add(f.mul(acc, x), c))
    }

    fn check_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch(self.field.q, other.field.q));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_field(other)?;
        let f = self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| f.add(self.coeff(k), other.coeff(k))).collect();
        Ok(Self::from_coeffs(f, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_field(other)?;
        let f = self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| f.sub(self.coeff(k), other.coeff(k))).collect();
        Ok(Self::from_coeffs(f, coeffs))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field));
        }
        let f = self.field;
        let mut out = vec![Fe(0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.0 == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Ok(Self::from_coeffs(f, out))
    }

    pub fn scale(&self, c: Fe) -> Self {
        let f = self.field;
        Self::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn to_u64s(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.0).collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.0 == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}x")?,
                _ => write!(f, "{c}x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Lagrange interpolation through `points`; the result has degree `< points.len()`.
pub fn interpolate(field: PrimeField, points: &[(Fe, Fe)]) -> Result<Polynomial, FieldError> {
    let xs: Vec<Fe> = points.iter().map(|&(x, _)| field.elem(x.0)).collect();
    for (i, x) in xs.iter().enumerate() {
        if xs[..i].contains(x) {
            return Err(FieldError::DuplicatePoint(x.0));
        }
    }
    let mut acc = Polynomial::zero(field);
    for (i, &(_, y)) in points.iter().enumerate() {
        let y = field.elem(y.0);
        if y.0 == 0 {
            continue;
        }
        let basis = lagrange_basis(field, &xs, i);
        acc = acc.add(&basis.scale(y))?;
    }
    Ok(acc)
}

/// The `i`-th Lagrange basis polynomial for the (distinct) nodes `xs`.
pub fn lagrange_basis(field: PrimeField, xs: &[Fe], i: usize) -> Polynomial {
    let mut num = Polynomial::constant(field, Fe(1));
    let mut denom = Fe(1);
    for (j, &xj) in xs.iter().enumerate() {
        if j == i {
            continue;
        }
        let factor = Polynomial::from_coeffs(field, vec![field.neg(xj), Fe(1)]);
        num = num.mul(&factor).expect("same field");
        denom = field.mul(denom, field.sub(xs[i], xj));
    }
    num.scale(field.inv(denom))
}
