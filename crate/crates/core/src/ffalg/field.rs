use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// An element of GF(p^e), stored as the base-p digit string of its
/// coefficient vector in the polynomial basis 1, x, .., x^(e-1).
///
/// Elements of the prime subfield are the integers `0..p`, whatever `e` is.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn raw(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type FieldRef = Arc<Field>;

const NONE: u32 = u32::MAX;
const ADD_TABLE_LIMIT: u32 = 729;

enum Adder {
    Xor,
    Prime,
    Table(Vec<u32>),
    Zech(Vec<u32>),
}

pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    adder: Adder,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.e)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e
    }
}

impl Eq for Field {}

/// Conway polynomials, coefficients from the constant term up, monic.
fn conway(p: u32, e: u32) -> Option<&'static [u32]> {
    let table: &[&[u32]] = match p {
        2 => &[
            &[1, 1],
            &[1, 1, 1],
            &[1, 1, 0, 1],
            &[1, 1, 0, 0, 1],
            &[1, 0, 1, 0, 0, 1],
            &[1, 1, 0, 1, 1, 0, 1],
            &[1, 1, 0, 0, 0, 0, 0, 1],
            &[1, 0, 1, 1, 1, 0, 0, 0, 1],
        ],
        3 => &[
            &[1, 1],
            &[2, 2, 1],
            &[1, 2, 0, 1],
            &[2, 0, 0, 2, 1],
            &[1, 2, 0, 0, 0, 1],
            &[2, 2, 1, 0, 2, 0, 1],
            &[1, 0, 2, 0, 0, 0, 0, 1],
            &[2, 2, 2, 0, 1, 2, 0, 0, 1],
        ],
        5 => &[
            &[3, 1],
            &[2, 4, 1],
            &[3, 3, 0, 1],
            &[2, 4, 4, 0, 1],
            &[3, 4, 0, 0, 0, 1],
            &[2, 0, 1, 4, 1, 0, 1],
            &[3, 3, 0, 0, 0, 0, 0, 1],
            &[2, 4, 3, 0, 1, 0, 0, 0, 1],
        ],
        _ => return None,
    };
    table.get(e.checked_sub(1)? as usize).copied()
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Remainder of `a` modulo the monic polynomial `m` over F_p.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let off = r.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                r[off + i] = (r[off + i] + (p - lead) * c) % p;
            }
        }
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree at most half.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// GF(p^e) with the Conway modulus when tabulated, otherwise the
    /// lexicographically smallest primitive polynomial.
    pub fn new(p: u32, e: u32) -> Result<FieldRef> {
        static CACHE: OnceLock<Mutex<HashMap<(u32, u32), FieldRef>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(f) = cache.lock().unwrap().get(&(p, e)) {
            return Ok(f.clone());
        }
        let f = Arc::new(Self::build(p, e)?);
        cache.lock().unwrap().insert((p, e), f.clone());
        Ok(f)
    }

    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<FieldRef> {
        Self::new(p, 1)
    }

    /// Parse a field order `q = p^e`.
    pub fn of_order(q: u32) -> Result<FieldRef> {
        let p = (2..=q).find(|d| q % d == 0).ok_or(Error::Field {
            p: q,
            e: 1,
            reason: "order must be at least 2".into(),
        })?;
        let mut e = 0;
        let mut r = q;
        while r % p == 0 {
            r /= p;
            e += 1;
        }
        if r != 1 {
            return Err(Error::Field { p, e, reason: format!("{q} is not a prime power") });
        }
        Self::new(p, e)
    }

    fn build(p: u32, e: u32) -> Result<Field> {
        let err = |reason: &str| Error::Field { p, e, reason: reason.into() };
        if !is_prime(p) {
            return Err(err("characteristic is not prime"));
        }
        if e == 0 {
            return Err(err("degree must be positive"));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= 1 << 24).ok_or(err("order too large"))?;
        let q = q as u32;
        if let Some(m) = conway(p, e) {
            return Self::with_modulus(p, e, q, m.to_vec()).ok_or(err("tabulated modulus is not primitive"));
        }
        let count = (p as u64).pow(e);
        for code in 0..count {
            let mut m = Vec::with_capacity(e as usize + 1);
            let mut c = code;
            for _ in 0..e {
                m.push((c % p as u64) as u32);
                c /= p as u64;
            }
            m.push(1);
            if m[0] == 0 || !is_irreducible(&m, p) {
                continue;
            }
            if let Some(f) = Self::with_modulus(p, e, q, m) {
                return Ok(f);
            }
        }
        Err(err("no primitive polynomial found"))
    }

    /// Builds tables with `x` as generator; `None` unless `m` is primitive.
    fn with_modulus(p: u32, e: u32, q: u32, m: Vec<u32>) -> Option<Field> {
        let eu = e as usize;
        let encode = |v: &[u32]| v.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![NONE; q as usize];
        let mut v = vec![0u32; eu];
        v[0] = 1;
        for k in 0..(q - 1) as usize {
            let code = encode(&v);
            if log[code as usize] != NONE {
                return None;
            }
            log[code as usize] = k as u32;
            exp[k] = code;
            // multiply by x and reduce
            let over = v[eu - 1];
            for i in (1..eu).rev() {
                v[i] = v[i - 1];
            }
            v[0] = 0;
            for i in 0..eu {
                v[i] = (v[i] + (p - over) * m[i]) % p;
            }
        }
        if encode(&v) != 1 {
            return None;
        }
        for k in 0..(q - 1) as usize {
            exp[k + q as usize - 1] = exp[k];
        }
        let digits = |mut a: u32| {
            let mut d = vec![0u32; eu];
            for x in d.iter_mut() {
                *x = a % p;
                a /= p;
            }
            d
        };
        let neg: Vec<u32> = (0..q)
            .map(|a| encode(&digits(a).iter().map(|&c| (p - c) % p).collect::<Vec<_>>()))
            .collect();
        let digit_add = |a: u32, b: u32| {
            let (da, db) = (digits(a), digits(b));
            encode(&da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect::<Vec<_>>())
        };
        let adder = if p == 2 {
            Adder::Xor
        } else if e == 1 {
            Adder::Prime
        } else if q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(a, b);
                }
            }
            Adder::Table(t)
        } else {
            let zech = (0..q - 1)
                .map(|k| {
                    let s = digit_add(1, exp[k as usize]);
                    if s == 0 { NONE } else { log[s as usize] }
                })
                .collect();
            Adder::Zech(zech)
        };
        Some(Field { p, e, q, modulus: m, exp, log, neg, adder })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The primitive element `x` of the polynomial basis.
    pub fn generator(&self) -> Elem {
        Elem(self.exp[1 % (self.q as usize - 1)])
    }

    pub fn elem(&self, raw: u32) -> Result<Elem> {
        if raw < self.q {
            Ok(Elem(raw))
        } else {
            Err(Error::Dimension(format!("{raw} is not an element of GF({})", self.q)))
        }
    }

    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q - 1).map(move |k| Elem(self.exp[k as usize]))
    }

    /// Value in `0..p` when the element lies in the prime subfield.
    pub fn prime_value(&self, a: Elem) -> Option<u32> {
        (a.0 < self.p).then_some(a.0)
    }

    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let mut r = a.0;
        (0..self.e)
            .map(|_| {
                let d = r % self.p;
                r /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> Result<Elem> {
        if d.len() != self.e as usize || d.iter().any(|&c| c >= self.p) {
            return Err(Error::Format(format!("bad digit vector {d:?} for GF({})", self.q)));
        }
        Ok(Elem(d.iter().rev().fold(0, |acc, &c| acc * self.p + c)))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.adder {
            Adder::Xor => Elem(a.0 ^ b.0),
            Adder::Prime => {
                let s = a.0 + b.0;
                Elem(if s >= self.p { s - self.p } else { s })
            }
            Adder::Table(t) => Elem(t[(a.0 * self.q + b.0) as usize]),
            Adder::Zech(z) => {
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let n = self.q - 1;
                let la = self.log[a.0 as usize];
                let lb = self.log[b.0 as usize];
                let k = if lb >= la { lb - la } else { lb + n - la };
                let zk = z[k as usize];
                if zk == NONE {
                    Elem(0)
                } else {
                    Elem(self.exp[(la + zk) as usize])
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem(0);
        }
        Elem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// `a + b*c`
    #[inline]
    pub fn mul_add(&self, a: Elem, b: Elem, c: Elem) -> Elem {
        self.add(a, self.mul(b, c))
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let n = self.q - 1;
        Ok(Elem(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return Elem(1);
        }
        if a.0 == 0 {
            return Elem(0);
        }
        let n = (self.q - 1) as u64;
        Elem(self.exp[((self.log[a.0 as usize] as u64 * (k % n)) % n) as usize])
    }

    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p as u64)
    }

    pub fn frobenius_pow(&self, a: Elem, r: u32) -> Elem {
        (0..r % self.e).fold(a, |x, _| self.frobenius(x))
    }

    /// Discrete log base the generator; `None` for zero.
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conway_table_is_primitive_and_irreducible() {
        for p in [2, 3, 5] {
            for e in 1..=8 {
                let m = conway(p, e).unwrap();
                assert!(is_irreducible(m, p), "p={p} e={e}");
                assert!(Field::new(p, e).is_ok(), "p={p} e={e}");
            }
        }
    }

    #[test]
    fn gf4_generator_satisfies_modulus() {
        let f = Field::new(2, 2).unwrap();
        let x = f.generator();
        assert_eq!(f.add(f.add(f.mul(x, x), x), f.one()), f.zero());
    }

    #[test]
    fn inverse_of_zero_errors() {
        let f = Field::new(3, 2).unwrap();
        assert!(matches!(f.inv(Elem::ZERO), Err(Error::ZeroInverse)));
    }

    #[test]
    fn fallback_field_is_consistent() {
        let f = Field::new(7, 2).unwrap();
        assert_eq!(f.q(), 49);
        for a in f.nonzero() {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        // independent oracle: digit-wise addition, repeated-addition multiplication checks
        for (p, e) in [(2, 3), (3, 2), (5, 1), (3, 7), (2, 5)] {
            let f = Field::new(p, e).unwrap();
            let els: Vec<Elem> = f.elements().take(60).collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                let mut s = f.zero();
                for _ in 0..p {
                    s = f.add(s, a);
                }
                assert_eq!(s, f.zero());
                for &b in &els {
                    let da = f.digits(a);
                    let db = f.digits(b);
                    let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    assert_eq!(f.add(a, b), f.from_digits(&sum).unwrap());
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in els.iter().take(12) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive_and_fixes_prime_field() {
        let f = Field::new(2, 5).unwrap();
        for a in f.elements() {
            for b in f.elements().step_by(5) {
                assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
            }
        }
        let g = Field::new(3, 3).unwrap();
        for k in 0..3 {
            assert_eq!(g.frobenius(g.from_int(k)), g.from_int(k));
        }
    }

    #[test]
    fn of_order_parses() {
        assert_eq!(Field::of_order(27).unwrap().e(), 3);
        assert!(Field::of_order(12).is_err());
    }
}
