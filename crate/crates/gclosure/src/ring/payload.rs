use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Monomial, SparsePoly};
use super::{Ring, RingDesc};

/// Canonical internal representative of a ring element.
///
/// Residues are reduced into `[0, m)`, fractions are in lowest terms,
/// quotient-extension vectors have length `deg(modulus)`, and sparse
/// polynomial maps never store zero coefficients. All arithmetic goes
/// through [`Ring`] so that the canonical form is restored after every
/// operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Int(BigInt),
    Rat(BigRational),
    Res(u64),
    Quot(Vec<Payload>),
    Poly(SparsePoly),
}

fn add_res(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

fn mul_res(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn neg_res(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

/// Modular inverse by extended Euclid; `None` when `a` is not a unit mod `m`.
fn inv_res(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

impl Ring {
    pub(crate) fn zero_p(&self) -> Payload {
        match self.desc() {
            RingDesc::Integers => Payload::Int(BigInt::zero()),
            RingDesc::Rationals => Payload::Rat(BigRational::zero()),
            RingDesc::IntegersMod(_) | RingDesc::PrimeField(_) => Payload::Res(0),
            RingDesc::QuotExt { base, modulus, .. } => {
                Payload::Quot(vec![base.zero_p(); modulus.len() - 1])
            }
            RingDesc::PolyExt { .. } => Payload::Poly(SparsePoly::zero()),
        }
    }

    pub(crate) fn one_p(&self) -> Payload {
        self.from_i64_p(1)
    }

    pub(crate) fn from_bigint_p(&self, n: &BigInt) -> Payload {
        match self.desc() {
            RingDesc::Integers => Payload::Int(n.clone()),
            RingDesc::Rationals => Payload::Rat(BigRational::from_integer(n.clone())),
            RingDesc::IntegersMod(m) | RingDesc::PrimeField(m) => {
                let m_big = BigInt::from(*m);
                let r = n.mod_floor(&m_big);
                let (_, digits) = r.to_u64_digits();
                Payload::Res(if digits.is_empty() { 0 } else { digits[0] })
            }
            RingDesc::QuotExt { base, modulus, .. } => {
                let mut v = vec![base.zero_p(); modulus.len() - 1];
                v[0] = base.from_bigint_p(n);
                Payload::Quot(v)
            }
            RingDesc::PolyExt { base, vars } => {
                let c = base.from_bigint_p(n);
                if base.is_zero_p(&c) {
                    Payload::Poly(SparsePoly::zero())
                } else {
                    Payload::Poly(SparsePoly::constant(Monomial::one(vars.len()), c))
                }
            }
        }
    }

    pub(crate) fn from_i64_p(&self, n: i64) -> Payload {
        self.from_bigint_p(&BigInt::from(n))
    }

    pub(crate) fn is_zero_p(&self, a: &Payload) -> bool {
        match a {
            Payload::Int(x) => x.is_zero(),
            Payload::Rat(x) => x.is_zero(),
            Payload::Res(x) => *x == 0,
            Payload::Quot(v) => {
                let base = self.base_ring();
                v.iter().all(|c| base.is_zero_p(c))
            }
            Payload::Poly(p) => p.terms.is_empty(),
        }
    }

    pub(crate) fn add_p(&self, a: &Payload, b: &Payload) -> Payload {
        match (a, b) {
            (Payload::Int(x), Payload::Int(y)) => Payload::Int(x + y),
            (Payload::Rat(x), Payload::Rat(y)) => Payload::Rat(x + y),
            (Payload::Res(x), Payload::Res(y)) => Payload::Res(add_res(*x, *y, self.modulus())),
            (Payload::Quot(x), Payload::Quot(y)) => {
                let base = self.base_ring();
                Payload::Quot(
                    x.iter()
                        .zip(y.iter())
                        .map(|(p, q)| base.add_p(p, q))
                        .collect(),
                )
            }
            (Payload::Poly(x), Payload::Poly(y)) => {
                let base = self.base_ring();
                let mut out = x.clone();
                for (mono, c) in &y.terms {
                    out.add_term(&base, mono.clone(), c.clone());
                }
                Payload::Poly(out)
            }
            _ => panic!("payload kind mismatch in add"),
        }
    }

    pub(crate) fn neg_p(&self, a: &Payload) -> Payload {
        match a {
            Payload::Int(x) => Payload::Int(-x),
            Payload::Rat(x) => Payload::Rat(-x),
            Payload::Res(x) => Payload::Res(neg_res(*x, self.modulus())),
            Payload::Quot(v) => {
                let base = self.base_ring();
                Payload::Quot(v.iter().map(|c| base.neg_p(c)).collect())
            }
            Payload::Poly(p) => {
                let base = self.base_ring();
                let terms = p
                    .terms
                    .iter()
                    .map(|(m, c)| (m.clone(), base.neg_p(c)))
                    .collect();
                Payload::Poly(SparsePoly { terms })
            }
        }
    }

    pub(crate) fn sub_p(&self, a: &Payload, b: &Payload) -> Payload {
        self.add_p(a, &self.neg_p(b))
    }

    pub(crate) fn mul_p(&self, a: &Payload, b: &Payload) -> Payload {
        match (a, b) {
            (Payload::Int(x), Payload::Int(y)) => Payload::Int(x * y),
            (Payload::Rat(x), Payload::Rat(y)) => Payload::Rat(x * y),
            (Payload::Res(x), Payload::Res(y)) => Payload::Res(mul_res(*x, *y, self.modulus())),
            (Payload::Quot(x), Payload::Quot(y)) => {
                let base = self.base_ring();
                let modulus = self.quot_modulus();
                let deg = modulus.len() - 1;
                // schoolbook product, then reduction by the monic modulus
                let mut prod = vec![base.zero_p(); 2 * deg.max(1)];
                for (i, p) in x.iter().enumerate() {
                    if base.is_zero_p(p) {
                        continue;
                    }
                    for (j, q) in y.iter().enumerate() {
                        let t = base.mul_p(p, q);
                        prod[i + j] = base.add_p(&prod[i + j], &t);
                    }
                }
                for i in (deg..prod.len()).rev() {
                    if base.is_zero_p(&prod[i]) {
                        continue;
                    }
                    let c = std::mem::replace(&mut prod[i], base.zero_p());
                    for (k, mc) in modulus.iter().enumerate().take(deg) {
                        let t = base.mul_p(&c, mc);
                        prod[i - deg + k] = base.sub_p(&prod[i - deg + k], &t);
                    }
                }
                prod.truncate(deg);
                Payload::Quot(prod)
            }
            (Payload::Poly(x), Payload::Poly(y)) => {
                let base = self.base_ring();
                let mut out = SparsePoly::zero();
                for (m1, c1) in &x.terms {
                    for (m2, c2) in &y.terms {
                        let c = base.mul_p(c1, c2);
                        if !base.is_zero_p(&c) {
                            out.add_term(&base, m1.mul(m2), c);
                        }
                    }
                }
                Payload::Poly(out)
            }
            _ => panic!("payload kind mismatch in mul"),
        }
    }

    /// Multiplicative inverse, where one exists.
    pub(crate) fn inv_p(&self, a: &Payload) -> Option<Payload> {
        match a {
            Payload::Int(x) => {
                if x.is_one() || (-x).is_one() {
                    Some(Payload::Int(x.clone()))
                } else {
                    None
                }
            }
            Payload::Rat(x) => {
                if x.is_zero() {
                    None
                } else {
                    Some(Payload::Rat(x.recip()))
                }
            }
            Payload::Res(x) => inv_res(*x, self.modulus()).map(Payload::Res),
            Payload::Quot(_) => {
                // Only needed over enumerable towers, where a scan suffices.
                if !self.is_enumerable() {
                    return None;
                }
                let one = self.one_p();
                self.enumerate_payloads().find(|b| self.mul_p(a, b) == one)
            }
            Payload::Poly(p) => {
                // units of R[x1..xk] with R in our tower: constant units
                let base = self.base_ring();
                if p.terms.len() != 1 {
                    return None;
                }
                let (m, c) = p.terms.iter().next().unwrap();
                if !m.is_one() {
                    return None;
                }
                let ci = base.inv_p(c)?;
                Some(Payload::Poly(SparsePoly::constant(m.clone(), ci)))
            }
        }
    }

    pub(crate) fn pow_p(&self, a: &Payload, mut k: u64) -> Payload {
        let mut base = a.clone();
        let mut acc = self.one_p();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_p(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul_p(&base, &base);
            }
        }
        acc
    }

    /// Exact division: `Some(q)` with `a = q*b` when such a `q` exists and is
    /// computable in this ring (integers, rationals, residues, and
    /// single-term polynomial divisors).
    pub(crate) fn exact_div_p(&self, a: &Payload, b: &Payload) -> Option<Payload> {
        match (a, b) {
            (Payload::Int(x), Payload::Int(y)) => {
                if y.is_zero() {
                    return None;
                }
                let (q, r) = x.div_rem(y);
                if r.is_zero() {
                    Some(Payload::Int(q))
                } else {
                    None
                }
            }
            (Payload::Rat(_), Payload::Rat(_)) => {
                let bi = self.inv_p(b)?;
                Some(self.mul_p(a, &bi))
            }
            (Payload::Res(x), Payload::Res(y)) => {
                let m = self.modulus();
                let g = y.gcd(&m);
                if x % g != 0 {
                    return None;
                }
                // solve y*q = x mod m
                let yi = inv_res(y / g, m / g)?;
                Some(Payload::Res(mul_res(x / g, yi, m) % m))
            }
            _ => {
                let bi = self.inv_p(b)?;
                Some(self.mul_p(a, &bi))
            }
        }
    }

    pub(crate) fn modulus(&self) -> u64 {
        match self.desc() {
            RingDesc::IntegersMod(m) | RingDesc::PrimeField(m) => *m,
            _ => panic!("modulus() on a non-residue ring"),
        }
    }

    pub(crate) fn base_ring(&self) -> Ring {
        match self.desc() {
            RingDesc::QuotExt { base, .. } | RingDesc::PolyExt { base, .. } => base.clone(),
            _ => panic!("base_ring() on a base-level ring"),
        }
    }

    pub(crate) fn quot_modulus(&self) -> &[Payload] {
        match self.desc() {
            RingDesc::QuotExt { modulus, .. } => modulus,
            _ => panic!("quot_modulus() on a non-quotient ring"),
        }
    }
}
