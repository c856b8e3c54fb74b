//! The tower of exactly computable base rings and their elements.

pub mod matrix;
pub mod normal;
pub mod parse;
mod payload;
pub mod poly;
pub mod roots;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;

pub use matrix::{determinant, Matrix};
pub use normal::{kernel_basis, normal_form, NormalForm, NormalFormKind};
pub use parse::{parse_elem, parse_monic_poly, parse_ring};
pub use payload::Payload;
pub use poly::{poly_exact_divide, MonicPoly, Monomial, SparsePoly};
pub use roots::{find_monic_roots, is_primoid, PrimoidVerdict};

use crate::error::{Error, Result};

/// Descriptor of a ring in the tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingDesc {
    Integers,
    Rationals,
    IntegersMod(u64),
    PrimeField(u64),
    PolyExt {
        base: Ring,
        vars: Vec<String>,
    },
    QuotExt {
        base: Ring,
        var: String,
        modulus: Vec<Payload>,
    },
}

/// A shared, immutable ring descriptor. Cheap to clone and safe to share
/// across threads; all element arithmetic is dispatched through it.
#[derive(Clone)]
pub struct Ring(Arc<RingDesc>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({self})")
    }
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

impl Ring {
    pub fn integers() -> Ring {
        Ring(Arc::new(RingDesc::Integers))
    }

    pub fn rationals() -> Ring {
        Ring(Arc::new(RingDesc::Rationals))
    }

    pub fn integers_mod(m: u64) -> Result<Ring> {
        if m < 2 {
            return Err(Error::Precondition(format!("Z/{m} requires m >= 2")));
        }
        Ok(Ring(Arc::new(RingDesc::IntegersMod(m))))
    }

    pub fn prime_field(p: u64) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("GF({p}) requires a prime")));
        }
        Ok(Ring(Arc::new(RingDesc::PrimeField(p))))
    }

    pub fn poly_ext(base: Ring, vars: Vec<String>) -> Result<Ring> {
        if vars.is_empty() {
            return Err(Error::Precondition(
                "polynomial extension needs variables".into(),
            ));
        }
        let mut seen = vars.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != vars.len() {
            return Err(Error::Precondition("duplicate variable names".into()));
        }
        Ok(Ring(Arc::new(RingDesc::PolyExt { base, vars })))
    }

    /// Quotient of `base[var]` by a monic modulus given as dense coefficients
    /// `[c_0, …, c_{d-1}, 1]` over the base.
    pub fn quot_ext(base: Ring, var: impl Into<String>, modulus: Vec<Payload>) -> Result<Ring> {
        if modulus.len() < 2 {
            return Err(Error::Precondition(
                "quotient modulus must have degree >= 1".into(),
            ));
        }
        let lead = modulus.last().unwrap();
        if *lead != base.one_p() {
            return Err(Error::Precondition("quotient modulus must be monic".into()));
        }
        Ok(Ring(Arc::new(RingDesc::QuotExt {
            base,
            var: var.into(),
            modulus,
        })))
    }

    /// Quotient extension with the modulus supplied as a [`MonicPoly`] over
    /// the base ring.
    pub fn quot_ext_poly(base: Ring, modulus: &MonicPoly) -> Result<Ring> {
        assert_eq!(modulus.ring(), &base);
        let n = modulus.degree();
        let mut coeffs: Vec<Payload> = (0..n)
            .map(|i| modulus.signed_coeff(n - i).payload().clone())
            .collect();
        coeffs.push(base.one_p());
        Ring::quot_ext(base, modulus.var().to_string(), coeffs)
    }

    pub fn desc(&self) -> &RingDesc {
        &self.0
    }

    /// All elements can be listed exactly once.
    pub fn is_enumerable(&self) -> bool {
        match self.desc() {
            RingDesc::IntegersMod(_) | RingDesc::PrimeField(_) => true,
            RingDesc::QuotExt { base, .. } => base.is_enumerable(),
            _ => false,
        }
    }

    /// Number of elements of an enumerable ring.
    pub fn cardinality(&self) -> Option<u128> {
        match self.desc() {
            RingDesc::IntegersMod(m) | RingDesc::PrimeField(m) => Some(*m as u128),
            RingDesc::QuotExt { base, modulus, .. } => {
                let b = base.cardinality()?;
                b.checked_pow((modulus.len() - 1) as u32)
            }
            _ => None,
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self.desc(), RingDesc::Rationals | RingDesc::PrimeField(_))
    }

    /// Rings over which we can run echelon/Hermite/Howell linear algebra.
    pub fn supports_linear_algebra(&self) -> bool {
        matches!(
            self.desc(),
            RingDesc::Integers
                | RingDesc::Rationals
                | RingDesc::IntegersMod(_)
                | RingDesc::PrimeField(_)
        )
    }

    pub fn zero(&self) -> RingElem {
        RingElem {
            ring: self.clone(),
            payload: self.zero_p(),
        }
    }

    pub fn one(&self) -> RingElem {
        RingElem {
            ring: self.clone(),
            payload: self.one_p(),
        }
    }

    pub fn from_i64(&self, n: i64) -> RingElem {
        RingElem {
            ring: self.clone(),
            payload: self.from_i64_p(n),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> RingElem {
        RingElem {
            ring: self.clone(),
            payload: self.from_bigint_p(n),
        }
    }

    /// The generator of a quotient extension (the class of the variable), or
    /// the i-th variable of a polynomial extension.
    pub fn generator(&self, i: usize) -> RingElem {
        let payload = match self.desc() {
            RingDesc::QuotExt { base, modulus, .. } => {
                assert_eq!(i, 0);
                let deg = modulus.len() - 1;
                let mut v = vec![base.zero_p(); deg];
                if deg == 1 {
                    // x ≡ -c_0
                    v[0] = base.neg_p(&modulus[0]);
                } else {
                    v[1] = base.one_p();
                }
                Payload::Quot(v)
            }
            RingDesc::PolyExt { base, vars } => {
                assert!(i < vars.len());
                Payload::Poly(SparsePoly::constant(
                    Monomial::var(vars.len(), i),
                    base.one_p(),
                ))
            }
            _ => panic!("generator() on a base-level ring"),
        };
        RingElem {
            ring: self.clone(),
            payload,
        }
    }

    /// Iterator over every element of an enumerable ring, each exactly once.
    pub fn enumerate_elements(&self) -> Result<Vec<RingElem>> {
        if !self.is_enumerable() {
            return Err(Error::capability(format!("ring {self} is not enumerable")));
        }
        Ok(self
            .enumerate_payloads()
            .map(|p| RingElem {
                ring: self.clone(),
                payload: p,
            })
            .collect())
    }

    pub(crate) fn enumerate_payloads(&self) -> Box<dyn Iterator<Item = Payload> + '_> {
        match self.desc() {
            RingDesc::IntegersMod(m) | RingDesc::PrimeField(m) => {
                Box::new((0..*m).map(Payload::Res))
            }
            RingDesc::QuotExt { base, modulus, .. } => {
                let deg = modulus.len() - 1;
                let base_elems: Vec<Payload> = base.enumerate_payloads().collect();
                let total = base_elems.len().pow(deg as u32);
                let iter = (0..total).map(move |mut idx| {
                    let mut v = Vec::with_capacity(deg);
                    for _ in 0..deg {
                        v.push(base_elems[idx % base_elems.len()].clone());
                        idx /= base_elems.len();
                    }
                    Payload::Quot(v)
                });
                Box::new(iter)
            }
            _ => panic!("enumerate_payloads on a non-enumerable ring"),
        }
    }

    /// Embed an element of the base ring of an extension into the extension.
    pub fn embed(&self, e: &RingElem) -> RingElem {
        match self.desc() {
            RingDesc::QuotExt { base, modulus, .. } => {
                assert_eq!(e.ring(), base);
                let mut v = vec![base.zero_p(); modulus.len() - 1];
                v[0] = e.payload.clone();
                RingElem {
                    ring: self.clone(),
                    payload: Payload::Quot(v),
                }
            }
            RingDesc::PolyExt { base, vars } => {
                assert_eq!(e.ring(), base);
                let payload = if base.is_zero_p(&e.payload) {
                    Payload::Poly(SparsePoly::zero())
                } else {
                    Payload::Poly(SparsePoly::constant(
                        Monomial::one(vars.len()),
                        e.payload.clone(),
                    ))
                };
                RingElem {
                    ring: self.clone(),
                    payload,
                }
            }
            _ => panic!("embed() on a base-level ring"),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.desc() {
            RingDesc::Integers => write!(f, "Z"),
            RingDesc::Rationals => write!(f, "Q"),
            RingDesc::IntegersMod(m) => write!(f, "Z/{m}"),
            RingDesc::PrimeField(p) => write!(f, "GF({p})"),
            RingDesc::PolyExt { base, vars } => write!(f, "{}[{}]", base, vars.join(",")),
            RingDesc::QuotExt { base, var, modulus } => {
                let poly = quot_modulus_string(base, var, modulus);
                write!(f, "{base}[{var}]/({poly})")
            }
        }
    }
}

fn quot_modulus_string(base: &Ring, var: &str, modulus: &[Payload]) -> String {
    let deg = modulus.len() - 1;
    let coeffs: Vec<RingElem> = (0..deg)
        .map(|i| RingElem {
            ring: base.clone(),
            payload: modulus[deg - 1 - i].clone(),
        })
        .collect();
    MonicPoly::from_signed_coeffs(base.clone(), var, coeffs).to_string()
}

/// An element of a [`Ring`], always held in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElem {
    ring: Ring,
    payload: Payload,
}

impl RingElem {
    pub(crate) fn from_payload(ring: Ring, payload: Payload) -> Self {
        RingElem { ring, payload }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub(crate) fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn zero(ring: Ring) -> Self {
        ring.zero()
    }

    pub fn one(ring: Ring) -> Self {
        ring.one()
    }

    pub fn is_zero(&self) -> bool {
        self.ring.is_zero_p(&self.payload)
    }

    pub fn is_one(&self) -> bool {
        self.payload == self.ring.one_p()
    }

    pub fn inv(&self) -> Option<RingElem> {
        self.ring.inv_p(&self.payload).map(|p| RingElem {
            ring: self.ring.clone(),
            payload: p,
        })
    }

    pub fn pow(&self, k: u64) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            payload: self.ring.pow_p(&self.payload, k),
        }
    }

    /// `Some(q)` with `self = q * d`, when exact division is possible.
    pub fn exact_div(&self, d: &RingElem) -> Option<RingElem> {
        assert_eq!(self.ring, d.ring);
        self.ring
            .exact_div_p(&self.payload, &d.payload)
            .map(|p| RingElem {
                ring: self.ring.clone(),
                payload: p,
            })
    }

    /// Whether `d` divides `self` in the ring.
    pub fn divisible_by(&self, d: &RingElem) -> bool {
        roots::divides(d, self)
    }

    /// Residue value for `Z/m` and `GF(p)` elements.
    pub fn residue(&self) -> Option<u64> {
        match &self.payload {
            Payload::Res(r) => Some(*r),
            _ => None,
        }
    }

    pub fn to_bigint(&self) -> Option<BigInt> {
        match &self.payload {
            Payload::Int(n) => Some(n.clone()),
            Payload::Res(r) => Some(BigInt::from(*r)),
            Payload::Rat(q) if q.is_integer() => Some(q.to_integer()),
            _ => None,
        }
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", payload_string(&self.ring, &self.payload))
    }
}

fn coeff_factor_string(s: &str) -> String {
    // parenthesize compound coefficients so the output re-parses
    let compound = s[1..].contains(['+', '-']) || s.starts_with('-') && s[1..].contains(['+', '-']);
    if compound || s.contains('+') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

fn payload_string(ring: &Ring, p: &Payload) -> String {
    match p {
        Payload::Int(n) => n.to_string(),
        Payload::Rat(q) => q.to_string(),
        Payload::Res(r) => r.to_string(),
        Payload::Quot(v) => {
            let base = ring.base_ring();
            let var = match ring.desc() {
                RingDesc::QuotExt { var, .. } => var.clone(),
                _ => unreachable!(),
            };
            let mut parts: Vec<String> = Vec::new();
            for (i, c) in v.iter().enumerate().rev() {
                if base.is_zero_p(c) {
                    continue;
                }
                let cs = payload_string(&base, c);
                let mono = match i {
                    0 => String::new(),
                    1 => var.clone(),
                    _ => format!("{var}^{i}"),
                };
                parts.push(term_string(&cs, &mono));
            }
            join_terms(parts)
        }
        Payload::Poly(sp) => {
            let base = ring.base_ring();
            let vars = match ring.desc() {
                RingDesc::PolyExt { vars, .. } => vars.clone(),
                _ => unreachable!(),
            };
            let mut parts: Vec<String> = Vec::new();
            for (m, c) in sp.terms.iter().rev() {
                let cs = payload_string(&base, c);
                let mono =
                    m.0.iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| {
                            if e == 1 {
                                vars[i].clone()
                            } else {
                                format!("{}^{e}", vars[i])
                            }
                        })
                        .collect::<Vec<_>>()
                        .join("*");
                parts.push(term_string(&cs, &mono));
            }
            join_terms(parts)
        }
    }
}

fn term_string(coeff: &str, mono: &str) -> String {
    if mono.is_empty() {
        return coeff.to_string();
    }
    if coeff == "1" {
        return mono.to_string();
    }
    if coeff == "-1" {
        return format!("-{mono}");
    }
    format!("{}*{mono}", coeff_factor_string(coeff))
}

fn join_terms(parts: Vec<String>) -> String {
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = parts[0].clone();
    for t in &parts[1..] {
        if let Some(rest) = t.strip_prefix('-') {
            out.push('-');
            out.push_str(rest);
        } else {
            out.push('+');
            out.push_str(t);
        }
    }
    out
}

macro_rules! elem_binop {
    ($trait:ident, $method:ident, $ring_method:ident) => {
        impl $trait for &RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &RingElem) -> RingElem {
                assert_eq!(self.ring, rhs.ring, "ring mismatch");
                RingElem {
                    ring: self.ring.clone(),
                    payload: self.ring.$ring_method(&self.payload, &rhs.payload),
                }
            }
        }
    };
}

elem_binop!(Add, add, add_p);
elem_binop!(Sub, sub, sub_p);
elem_binop!(Mul, mul, mul_p);

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            payload: self.ring.neg_p(&self.payload),
        }
    }
}
