use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::payload::Payload;
use super::{Ring, RingDesc, RingElem};
use crate::error::{Error, Result};

/// Exponent vector of a multivariate monomial, ordered graded-lexicographically
/// (total degree first, then earlier variables weigh more).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// `self / other`, when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial: monomial → nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    pub terms: BTreeMap<Monomial, Payload>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(mono: Monomial, c: Payload) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(mono, c);
        SparsePoly { terms }
    }

    pub(crate) fn add_term(&mut self, base: &Ring, mono: Monomial, c: Payload) {
        if base.is_zero_p(&c) {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = base.add_p(e.get(), &c);
                if base.is_zero_p(&s) {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    /// Leading term under the graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Payload)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }
}

/// Exact division of multivariate polynomials by monomial-ordered long
/// division; the remainder must vanish.
///
/// Both arguments are elements of the same `PolyExt` ring, with coefficients
/// over `Z` or a field.
pub fn poly_exact_divide(num: &RingElem, den: &RingElem) -> Result<RingElem> {
    let ring = num.ring().clone();
    if ring != *den.ring() {
        return Err(Error::Dimension("operands live in different rings".into()));
    }
    let base = match ring.desc() {
        RingDesc::PolyExt { base, .. } => base.clone(),
        _ => {
            return Err(Error::capability(
                "exact polynomial division expects a polynomial ring",
            ))
        }
    };
    match base.desc() {
        RingDesc::Integers | RingDesc::Rationals | RingDesc::PrimeField(_) => {}
        _ => {
            return Err(Error::capability(
                "exact polynomial division needs integer or field coefficients",
            ))
        }
    }
    let den_p = match den.payload() {
        Payload::Poly(p) => p,
        _ => unreachable!(),
    };
    let (dm, dc) = den_p
        .leading()
        .ok_or_else(|| Error::Divisibility("division by the zero polynomial".into()))?;
    let mut rem = match num.payload() {
        Payload::Poly(p) => p.clone(),
        _ => unreachable!(),
    };
    let mut quot = SparsePoly::zero();
    while let Some((lm, lc)) = rem.leading() {
        let qm = lm.div(dm).ok_or_else(|| {
            Error::Divisibility(format!(
                "leading monomial is not divisible (remainder has {} terms)",
                rem.terms.len()
            ))
        })?;
        let qc = base
            .exact_div_p(lc, dc)
            .ok_or_else(|| Error::Divisibility("leading coefficient does not divide".into()))?;
        // rem -= (qc * qm) * den
        for (m, c) in &den_p.terms {
            let t = base.mul_p(&qc, c);
            rem.add_term(&base, qm.mul(m), base.neg_p(&t));
        }
        quot.add_term(&base, qm, qc);
    }
    Ok(RingElem::from_payload(ring, Payload::Poly(quot)))
}

/// Monic univariate polynomial stored in the alternating-sign convention:
/// the coefficient list `(s_1, …, s_n)` encodes
/// `λ^n − s_1 λ^{n-1} + s_2 λ^{n-2} − … + (−1)^n s_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicPoly {
    ring: Ring,
    var: String,
    sks: Vec<RingElem>,
}

impl MonicPoly {
    pub fn new(ring: Ring, var: impl Into<String>, sks: Vec<RingElem>) -> Self {
        let var = var.into();
        for s in &sks {
            assert_eq!(s.ring(), &ring, "coefficient from the wrong ring");
        }
        MonicPoly { ring, var, sks }
    }

    /// Build from the plain signed coefficients `[c_{n-1}, …, c_0]` of
    /// `λ^n + c_{n-1}λ^{n-1} + … + c_0`.
    pub fn from_signed_coeffs(ring: Ring, var: impl Into<String>, coeffs: Vec<RingElem>) -> Self {
        let sks = coeffs
            .into_iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { -&c } else { c })
            .collect();
        MonicPoly::new(ring, var, sks)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn degree(&self) -> usize {
        self.sks.len()
    }

    /// `s_k` for `k` in `1..=n`.
    pub fn sk(&self, k: usize) -> &RingElem {
        &self.sks[k - 1]
    }

    pub fn sks(&self) -> &[RingElem] {
        &self.sks
    }

    /// The signed coefficient of `λ^{n-k}`, i.e. `(−1)^k s_k`.
    pub fn signed_coeff(&self, k: usize) -> RingElem {
        if k == 0 {
            return RingElem::one(self.ring.clone());
        }
        let s = &self.sks[k - 1];
        if k % 2 == 0 {
            s.clone()
        } else {
            -s
        }
    }

    pub fn eval(&self, x: &RingElem) -> RingElem {
        assert_eq!(x.ring(), &self.ring);
        let n = self.degree();
        let mut acc = RingElem::one(self.ring.clone());
        for k in 1..=n {
            acc = &(&acc * x) + &self.signed_coeff(k);
        }
        acc
    }

    /// The product of two monic polynomials over the same ring.
    pub fn mul(&self, other: &MonicPoly) -> MonicPoly {
        assert_eq!(self.ring, other.ring);
        let (n, m) = (self.degree(), other.degree());
        let mut coeffs = vec![RingElem::zero(self.ring.clone()); n + m + 1];
        for i in 0..=n {
            for j in 0..=m {
                let t = &self.signed_coeff(i) * &other.signed_coeff(j);
                coeffs[i + j] = &coeffs[i + j] + &t;
            }
        }
        MonicPoly::from_signed_coeffs(
            self.ring.clone(),
            self.var.clone(),
            coeffs.into_iter().skip(1).collect(),
        )
    }

    /// Map the coefficients through `f`, producing a polynomial over the ring
    /// of `f`'s outputs.
    pub fn map_coeffs<F>(&self, ring: Ring, f: F) -> MonicPoly
    where
        F: Fn(&RingElem) -> RingElem,
    {
        let sks = self.sks.iter().map(f).collect();
        MonicPoly::new(ring, self.var.clone(), sks)
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        write!(f, "{}", power_str(&self.var, n))?;
        for k in 1..=n {
            let c = self.signed_coeff(k);
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-']) => ("-", rest.to_string()),
                _ => {
                    if cs.contains(['+', '-']) && !(k == n) {
                        ("+", format!("({cs})"))
                    } else if cs.contains(['+', '-']) {
                        ("+", format!("({cs})"))
                    } else {
                        ("+", cs)
                    }
                }
            };
            if k == n {
                write!(f, "{sign}{mag}")?;
            } else if mag == "1" {
                write!(f, "{sign}{}", power_str(&self.var, n - k))?;
            } else {
                write!(f, "{sign}{mag}*{}", power_str(&self.var, n - k))?;
            }
        }
        Ok(())
    }
}

fn power_str(var: &str, k: usize) -> String {
    match k {
        0 => "1".to_string(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}
