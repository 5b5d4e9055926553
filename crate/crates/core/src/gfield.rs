//! Exact arithmetic in prime fields `F_p` and extensions `F_{p^m}`.
//!
//! Elements are stored in the polynomial representation: a vector of `m`
//! residues mod `p`, least degree first. The extension modulus is the
//! lexicographically smallest monic irreducible polynomial of degree `m`,
//! so a field is determined by `(p, m)` alone and every run is reproducible.

use thiserror::Error;

/// Fields larger than this are out of scope for the engine.
pub const MAX_FIELD_ORDER: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("extension degree {0} out of range (must be >= 1)")]
    DegreeOutOfRange(usize),
    #[error("field order p^m = {0}^{1} exceeds supported bound {MAX_FIELD_ORDER}")]
    SizeLimit(u64, usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to this field")]
    FieldMismatch,
}

/// An element of `F_{p^m}`: `m` residues mod `p`, least degree first.
///
/// Elements are plain data; all arithmetic goes through the owning [`Field`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub(crate) Vec<u64>);

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

/// The field `F_{p^m}` with its chosen irreducible modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u64,
    m: usize,
    /// Coefficients `c_0..c_m` of the monic modulus (degree `m`); empty when `m = 1`.
    modulus: Vec<u64>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo monic `b` over `F_p`. Coefficients least degree first.
fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    while a.len() > db {
        let lead = *a.last().unwrap() % p;
        let da = a.len() - 1;
        if lead != 0 {
            for i in 0..db {
                let sub = (lead * b[i]) % p;
                let idx = da - db + i;
                a[idx] = (a[idx] + p - sub) % p;
            }
        }
        a.pop();
        while a.len() > db && *a.last().unwrap() % p == 0 {
            if a.len() == db + 1 {
                break;
            }
            a.pop();
        }
    }
    a
}

fn poly_is_zero(a: &[u64], p: u64) -> bool {
    a.iter().all(|&c| c % p == 0)
}

/// Trial factorization: divides by every monic polynomial of degree <= deg/2.
fn poly_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        // enumerate monic polynomials of degree d by their p-ary digits
        let count = p.pow(d as u32);
        for k in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut kk = k;
            for _ in 0..d {
                divisor.push(kk % p);
                kk /= p;
            }
            divisor.push(1);
            let rem = poly_rem(poly.to_vec(), &divisor, p);
            if poly_is_zero(&rem, p) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds `F_{p^m}` with the lexicographically smallest monic irreducible
    /// modulus (smallest value of `sum c_i p^i` over the non-leading digits).
    pub fn new(p: u64, m: usize) -> Result<Field, FieldError> {
        if m < 1 {
            return Err(FieldError::DegreeOutOfRange(m));
        }
        if !is_prime(p) {
            return Err(FieldError::NonPrimeModulus(p));
        }
        let mut order: u64 = 1;
        for _ in 0..m {
            order = order
                .checked_mul(p)
                .ok_or(FieldError::SizeLimit(p, m))?;
            if order > MAX_FIELD_ORDER {
                return Err(FieldError::SizeLimit(p, m));
            }
        }
        if m == 1 {
            return Ok(Field {
                p,
                m,
                modulus: Vec::new(),
            });
        }
        let count = p.pow(m as u32);
        for k in 0..count {
            let mut poly = Vec::with_capacity(m + 1);
            let mut kk = k;
            for _ in 0..m {
                poly.push(kk % p);
                kk /= p;
            }
            poly.push(1);
            if poly_irreducible(&poly, p) {
                return Ok(Field { p, m, modulus: poly });
            }
        }
        unreachable!("an irreducible polynomial of each degree exists over F_p")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.m as u32)
    }

    /// Non-leading coefficients of the modulus; empty for prime fields.
    pub fn modulus_poly(&self) -> &[u64] {
        &self.modulus
    }

    pub fn check(&self, a: &FieldElement) -> Result<(), FieldError> {
        if a.0.len() != self.m || a.0.iter().any(|&c| c >= self.p) {
            return Err(FieldError::FieldMismatch);
        }
        Ok(())
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(vec![0; self.m])
    }

    pub fn one(&self) -> FieldElement {
        self.elt(1)
    }

    /// Embeds an integer (possibly negative) into the prime subfield.
    pub fn elt(&self, v: i64) -> FieldElement {
        let mut c = vec![0; self.m];
        c[0] = v.rem_euclid(self.p as i64) as u64;
        FieldElement(c)
    }

    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FieldElement, FieldError> {
        if coeffs.len() > self.m {
            return Err(FieldError::FieldMismatch);
        }
        let mut c = vec![0; self.m];
        for (i, &v) in coeffs.iter().enumerate() {
            c[i] = v.rem_euclid(self.p as i64) as u64;
        }
        Ok(FieldElement(c))
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut c = a.0.clone();
        for i in 0..self.m {
            c[i] = (c[i] + b.0[i]) % self.p;
        }
        FieldElement(c)
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut c = a.0.clone();
        for i in 0..self.m {
            c[i] = (c[i] + self.p - b.0[i]) % self.p;
        }
        FieldElement(c)
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let mut c = a.0.clone();
        for v in c.iter_mut() {
            *v = (self.p - *v) % self.p;
        }
        FieldElement(c)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        if self.m == 1 {
            return FieldElement(vec![(a.0[0] * b.0[0]) % self.p]);
        }
        let mut prod = vec![0u64; 2 * self.m - 1];
        for i in 0..self.m {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..self.m {
                prod[i + j] = (prod[i + j] + a.0[i] * b.0[j]) % self.p;
            }
        }
        let mut rem = poly_rem(prod, &self.modulus, self.p);
        rem.resize(self.m, 0);
        FieldElement(rem)
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
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

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// The Frobenius endomorphism `x -> x^p`.
    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow(a, self.p)
    }

    /// Iterates over every element of the field in p-ary counting order.
    pub fn all_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |k| self.element_from_index(k))
    }

    /// The element whose coefficient vector is the p-ary digits of `k`.
    pub fn element_from_index(&self, k: u64) -> FieldElement {
        let mut c = vec![0; self.m];
        let mut kk = k;
        for slot in c.iter_mut() {
            *slot = kk % self.p;
            kk /= self.p;
        }
        FieldElement(c)
    }

    pub fn element_index(&self, a: &FieldElement) -> u64 {
        let mut k = 0u64;
        for &c in a.0.iter().rev() {
            k = k * self.p + c;
        }
        k
    }

    /// Renders an element: decimal residue for prime fields, otherwise
    /// `"c0+c1*t+...+c{m-1}*t^{m-1}"` with every coefficient printed.
    pub fn display(&self, a: &FieldElement) -> String {
        if self.m == 1 {
            return a.0[0].to_string();
        }
        let mut parts = Vec::with_capacity(self.m);
        for (i, &c) in a.0.iter().enumerate() {
            match i {
                0 => parts.push(c.to_string()),
                1 => parts.push(format!("{c}*t")),
                _ => parts.push(format!("{c}*t^{i}")),
            }
        }
        parts.join("+")
    }

    /// Parses either a (possibly negative) decimal residue or the polynomial
    /// form produced by [`Field::display`].
    pub fn parse(&self, s: &str) -> Result<FieldElement, FieldError> {
        let s = s.trim();
        if let Ok(v) = s.parse::<i64>() {
            return Ok(self.elt(v));
        }
        let mut coeffs = vec![0i64; self.m];
        for term in s.split('+') {
            let term = term.trim();
            let (coeff_str, power) = match term.find('*') {
                None => {
                    if let Some(rest) = term.strip_prefix("t^") {
                        ("1", rest.parse::<usize>().map_err(|_| FieldError::FieldMismatch)?)
                    } else if term == "t" {
                        ("1", 1)
                    } else {
                        (term, 0)
                    }
                }
                Some(star) => {
                    let tpart = term[star + 1..].trim();
                    let pw = if tpart == "t" {
                        1
                    } else if let Some(rest) = tpart.strip_prefix("t^") {
                        rest.parse::<usize>().map_err(|_| FieldError::FieldMismatch)?
                    } else {
                        return Err(FieldError::FieldMismatch);
                    };
                    (term[..star].trim(), pw)
                }
            };
            if power >= self.m {
                return Err(FieldError::FieldMismatch);
            }
            let c: i64 = coeff_str.parse().map_err(|_| FieldError::FieldMismatch)?;
            coeffs[power] += c;
        }
        self.from_coeffs(&coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn make_prime_field() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.order(), 5);
        assert!(f.modulus_poly().is_empty());
    }

    #[test]
    fn reject_composite_modulus() {
        assert_eq!(Field::new(4, 1).unwrap_err(), FieldError::NonPrimeModulus(4));
        assert_eq!(Field::new(2, 0).unwrap_err(), FieldError::DegreeOutOfRange(0));
    }

    /// Oracle: enumerate every monic quadratic over F_3 and test reducibility
    /// by root search, independently of the construction path.
    #[test]
    fn f9_modulus_is_lowest_irreducible() {
        let mut expected: Option<(u64, u64)> = None;
        'outer: for k in 0..9u64 {
            let (c0, c1) = (k % 3, k / 3);
            for x in 0..3u64 {
                if (x * x + c1 * x + c0) % 3 == 0 {
                    continue 'outer;
                }
            }
            expected = Some((c0, c1));
            break;
        }
        assert_eq!(expected, Some((1, 0))); // x^2 + 1
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.modulus_poly(), &[1, 0, 1]);
    }

    #[test]
    fn inverse_in_f5() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.inv(&f.elt(2)).unwrap(), f.elt(3));
        assert_eq!(f.inv(&f.zero()).unwrap_err(), FieldError::DivisionByZero);
    }

    #[test]
    fn fermat_in_prime_field() {
        for p in [3u64, 5, 7] {
            let f = Field::new(p, 1).unwrap();
            for a in f.all_elements().skip(1) {
                assert_eq!(f.pow(&a, p - 1), f.one());
            }
        }
    }

    /// Frobenius of every element of F_9 against an exhaustive multiplication
    /// table: x^3 computed by repeated table lookup.
    #[test]
    fn frobenius_matches_exhaustive_table() {
        let f = Field::new(3, 2).unwrap();
        let elts: Vec<_> = f.all_elements().collect();
        let mut table = vec![vec![0usize; 9]; 9];
        for (i, a) in elts.iter().enumerate() {
            for (j, b) in elts.iter().enumerate() {
                let prod = f.mul(a, b);
                table[i][j] = elts.iter().position(|e| *e == prod).unwrap();
            }
        }
        for (i, a) in elts.iter().enumerate() {
            let cube = table[table[i][i]][i];
            assert_eq!(f.frobenius(a), elts[cube]);
        }
    }

    #[test]
    fn qth_power_is_identity_up_to_81() {
        for (p, m) in [(2u64, 1usize), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3), (3, 4), (2, 6)] {
            if p.pow(m as u32) > 81 {
                continue;
            }
            let f = Field::new(p, m).unwrap();
            for a in f.all_elements() {
                assert_eq!(f.pow(&a, f.order()), a);
            }
        }
    }

    /// a^{p-1} = 1 exactly on the nonzero prime subfield.
    #[test]
    fn p_minus_one_power_characterizes_prime_subfield() {
        for (p, m) in [(3u64, 2usize), (5, 2), (3, 3)] {
            let f = Field::new(p, m).unwrap();
            for a in f.all_elements() {
                let in_prime_subfield = a.coeffs()[1..].iter().all(|&c| c == 0);
                let is_one = f.pow(&a, p - 1) == f.one();
                if f.is_zero(&a) {
                    assert!(!is_one);
                } else {
                    assert_eq!(is_one, in_prime_subfield, "element {:?}", a);
                }
            }
        }
    }

    #[test]
    fn display_formats() {
        let f = Field::new(3, 2).unwrap();
        let a = f.from_coeffs(&[1, 2]).unwrap();
        assert_eq!(f.display(&a), "1+2*t");
        assert_eq!(f.parse("1+2*t").unwrap(), a);
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(f5.display(&f5.elt(-1)), "4");
        assert_eq!(f5.parse("-1").unwrap(), f5.elt(4));
    }

    #[test]
    fn size_limit_enforced() {
        assert!(matches!(Field::new(11, 7), Err(FieldError::SizeLimit(_, _))));
    }

    proptest! {
        #[test]
        fn field_axioms_f9(x in 0u64..9, y in 0u64..9, z in 0u64..9) {
            let f = Field::new(3, 2).unwrap();
            let (a, b, c) = (
                f.element_from_index(x),
                f.element_from_index(y),
                f.element_from_index(z),
            );
            prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
            prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            prop_assert_eq!(f.sub(&a, &a), f.zero());
            if !f.is_zero(&a) {
                let ai = f.inv(&a).unwrap();
                prop_assert_eq!(f.mul(&a, &ai), f.one());
            }
        }

        #[test]
        fn field_axioms_f7(x in 0u64..7, y in 0u64..7) {
            let f = Field::new(7, 1).unwrap();
            let a = f.element_from_index(x);
            let b = f.element_from_index(y);
            prop_assert_eq!(f.add(&f.sub(&a, &b), &b), a.clone());
            if !f.is_zero(&b) {
                prop_assert_eq!(f.mul(&f.div(&a, &b).unwrap(), &b), a);
            }
        }
    }
}
