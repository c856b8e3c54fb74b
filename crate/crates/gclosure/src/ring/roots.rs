use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::poly::MonicPoly;
use super::{Payload, Ring, RingDesc, RingElem};
use crate::error::{Error, Result};

/// Whether `d` divides `x` in their common ring.
pub(crate) fn divides(d: &RingElem, x: &RingElem) -> bool {
    assert_eq!(d.ring(), x.ring());
    let ring = d.ring();
    match (d.payload(), x.payload()) {
        (Payload::Int(a), Payload::Int(b)) => {
            if a.is_zero() {
                b.is_zero()
            } else {
                (b % a).is_zero()
            }
        }
        (Payload::Rat(a), Payload::Rat(b)) => !a.is_zero() || b.is_zero(),
        (Payload::Res(_), Payload::Res(_)) => x.exact_div(d).is_some(),
        (Payload::Quot(_), Payload::Quot(_)) => {
            if let Some((dd, a, b)) = quadratic_order_parts(ring, d) {
                let (x0, x1) = match quadratic_order_parts(ring, x) {
                    Some((_, x0, x1)) => (x0, x1),
                    None => unreachable!(),
                };
                return quadratic_divides(&dd, (&a, &b), (&x0, &x1)).is_some();
            }
            if ring.is_enumerable() {
                return ring
                    .enumerate_payloads()
                    .any(|q| ring.mul_p(d.payload(), &q) == *x.payload());
            }
            panic!("divisibility is not decidable over {ring}")
        }
        (Payload::Poly(_), Payload::Poly(_)) => {
            if x.is_zero() {
                return true;
            }
            if d.is_zero() {
                return false;
            }
            super::poly::poly_exact_divide(x, d).is_ok()
        }
        _ => unreachable!("payload kinds always match within one ring"),
    }
}

/// For an element `a + b·u` of `Z[u]/(u^2 - D)` with integer base, return
/// `(D, a, b)`.
fn quadratic_order_parts(ring: &Ring, e: &RingElem) -> Option<(BigInt, BigInt, BigInt)> {
    let RingDesc::QuotExt { base, modulus, .. } = ring.desc() else {
        return None;
    };
    if !matches!(base.desc(), RingDesc::Integers) || modulus.len() != 3 {
        return None;
    }
    if !base.is_zero_p(&modulus[1]) {
        return None;
    }
    let d = match &modulus[0] {
        Payload::Int(c0) => -c0.clone(),
        _ => return None,
    };
    let Payload::Quot(v) = e.payload() else {
        return None;
    };
    let a = match &v[0] {
        Payload::Int(x) => x.clone(),
        _ => return None,
    };
    let b = match &v[1] {
        Payload::Int(x) => x.clone(),
        _ => return None,
    };
    Some((d, a, b))
}

/// Solve `(a + b·u)·q = (x0 + x1·u)` for `q` over `Z[u]/(u^2−D)`; returns the
/// quotient coordinates when the division is exact.
fn quadratic_divides(
    d: &BigInt,
    (a, b): (&BigInt, &BigInt),
    (x0, x1): (&BigInt, &BigInt),
) -> Option<(BigInt, BigInt)> {
    // multiplication by a+bu is the matrix [[a, D·b], [b, a]]
    let det = a * a - d * b * b;
    if det.is_zero() {
        if a.is_zero() && b.is_zero() {
            return if x0.is_zero() && x1.is_zero() {
                Some((BigInt::zero(), BigInt::zero()))
            } else {
                None
            };
        }
        panic!("zero-norm divisor in a quadratic order with square discriminant");
    }
    let n0 = a * x0 - d * b * x1;
    let n1 = a * x1 - b * x0;
    let (q0, r0) = n0.div_rem(&det);
    let (q1, r1) = n1.div_rem(&det);
    if r0.is_zero() && r1.is_zero() {
        Some((q0, q1))
    } else {
        None
    }
}

/// The exact, complete set of roots of a monic polynomial in `ring`.
///
/// Enumerable rings are searched exhaustively; over `Z` and `Q` the rational
/// root theorem bounds the candidates; over a real quadratic order
/// `Z[u]/(u^2−d)` with `d > 0` a quadratic is solved through the
/// positive-definite bound on its coordinates. Anything else is a capability
/// error, never a partial answer.
pub fn find_monic_roots(f: &MonicPoly, ring: &Ring) -> Result<Vec<RingElem>> {
    assert_eq!(f.ring(), ring);
    if ring.is_enumerable() {
        let mut roots = Vec::new();
        for e in ring.enumerate_elements()? {
            if f.eval(&e).is_zero() {
                roots.push(e);
            }
        }
        return Ok(roots);
    }
    match ring.desc() {
        RingDesc::Integers => {
            let mut out = integer_roots(f)?
                .into_iter()
                .map(|n| ring.from_bigint(&n))
                .collect::<Vec<_>>();
            out.sort_by_key(|e| e.to_bigint());
            Ok(out)
        }
        RingDesc::Rationals => rational_roots(f),
        RingDesc::QuotExt { .. } => quadratic_order_roots(f, ring),
        _ => Err(Error::capability(format!(
            "root finding over {ring} is not supported"
        ))),
    }
}

fn integer_roots(f: &MonicPoly) -> Result<Vec<BigInt>> {
    let n = f.degree();
    let c0 = f.signed_coeff(n).to_bigint().unwrap();
    if c0.is_zero() {
        // x | f: collect 0 and recurse on f/x
        let mut coeffs: Vec<RingElem> = (1..n).map(|k| f.signed_coeff(k)).collect();
        let mut roots = vec![BigInt::zero()];
        if !coeffs.is_empty() {
            let g = MonicPoly::from_signed_coeffs(
                f.ring().clone(),
                f.var(),
                std::mem::take(&mut coeffs),
            );
            for r in integer_roots(&g)? {
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
        return Ok(roots);
    }
    let mut roots = Vec::new();
    for d in divisors(&c0.abs()) {
        for cand in [BigInt::from(d.clone()), -BigInt::from(d)] {
            let e = f.ring().from_bigint(&cand);
            if f.eval(&e).is_zero() && !roots.contains(&cand) {
                roots.push(cand);
            }
        }
    }
    Ok(roots)
}

fn rational_roots(f: &MonicPoly) -> Result<Vec<RingElem>> {
    use num_rational::BigRational;
    let ring = f.ring().clone();
    let n = f.degree();
    // clear denominators: p/q in lowest terms must have p | d·c0 and q | d
    let mut den_lcm = BigInt::from(1);
    for k in 1..=n {
        if let Payload::Rat(c) = f.signed_coeff(k).payload() {
            den_lcm = den_lcm.lcm(c.denom());
        }
    }
    let c0 = match f.signed_coeff(n).payload() {
        Payload::Rat(c) => c.clone(),
        _ => unreachable!(),
    };
    if c0.is_zero() {
        let mut roots = vec![ring.zero()];
        if n > 1 {
            let coeffs: Vec<RingElem> = (1..n).map(|k| f.signed_coeff(k)).collect();
            let g = MonicPoly::from_signed_coeffs(ring.clone(), f.var(), coeffs);
            for r in rational_roots(&g)? {
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
        return Ok(roots);
    }
    let p_bound = (&c0 * BigRational::from_integer(den_lcm.clone()))
        .to_integer()
        .abs();
    let mut roots = Vec::new();
    for p in divisors(&p_bound) {
        for q in divisors(&den_lcm) {
            for sign in [1i64, -1] {
                let cand =
                    BigRational::new(BigInt::from(p.clone()) * sign, BigInt::from(q.clone()));
                let e = super::RingElem::from_payload(ring.clone(), Payload::Rat(cand));
                if f.eval(&e).is_zero() && !roots.contains(&e) {
                    roots.push(e);
                }
            }
        }
    }
    Ok(roots)
}

fn divisors(n: &BigInt) -> Vec<u64> {
    let n = u64::try_from(n.abs()).expect("divisor search bound exceeds u64");
    if n == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// Quadratic roots over `Z[u]/(u^2−d)` with `d > 0`: the real part of
/// `f(a+bu) = 0` pins `(2a+B0)^2 + d(2b+B1)^2` to an explicit constant, so the
/// solution region is finite and searched exhaustively.
fn quadratic_order_roots(f: &MonicPoly, ring: &Ring) -> Result<Vec<RingElem>> {
    let probe = ring.zero();
    let Some((d, _, _)) = quadratic_order_parts(ring, &probe) else {
        return Err(Error::capability(format!(
            "root finding over {ring} is not supported (need Z[u]/(u^2-d))"
        )));
    };
    if d <= BigInt::zero() {
        return Err(Error::capability(
            "quadratic-order root finding requires u^2 = d with d > 0",
        ));
    }
    if f.degree() != 2 {
        return Err(Error::capability(
            "root finding over a quadratic order is limited to quadratics",
        ));
    }
    // f = x^2 + Bx + C with B = -s1, C = s2
    let b_elem = -f.sk(1);
    let c_elem = f.sk(2).clone();
    let (_, b0, b1) = quadratic_order_parts(ring, &b_elem).unwrap();
    let (_, c0, _c1) = quadratic_order_parts(ring, &c_elem).unwrap();
    // (2a+B0)^2 + d(2b+B1)^2 = B0^2 + d*B1^2 - 4*C0
    let k = &b0 * &b0 + &d * &b1 * &b1 - BigInt::from(4) * &c0;
    if k.is_negative() {
        return Ok(vec![]);
    }
    let mut roots = Vec::new();
    let s_max = k.sqrt();
    let mut s = -s_max.clone();
    while s <= s_max {
        let rest = &k - &s * &s;
        if rest >= BigInt::zero() {
            let (t2, r) = rest.div_rem(&d);
            if r.is_zero() {
                let t = t2.sqrt();
                if &t * &t == t2 {
                    for tt in [t.clone(), -t.clone()] {
                        // a = (s - B0)/2, b = (t - B1)/2
                        let (a, ra) = (&s - &b0).div_rem(&BigInt::from(2));
                        let (bb, rb) = (&tt - &b1).div_rem(&BigInt::from(2));
                        if !ra.is_zero() || !rb.is_zero() {
                            continue;
                        }
                        let cand = RingElem::from_payload(
                            ring.clone(),
                            Payload::Quot(vec![Payload::Int(a), Payload::Int(bb)]),
                        );
                        if f.eval(&cand).is_zero() && !roots.contains(&cand) {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        s += 1;
    }
    Ok(roots)
}

/// Result of a primoid test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimoidVerdict {
    /// `p^2 | ab` implies `p | a` or `p | b`, proved for all pairs.
    Primoid,
    /// No counterexample with coordinates bounded by the search bound.
    PrimoidUpToBound(u64),
    /// A witness pair `(a, b)` with `p^2 | ab` but `p ∤ a` and `p ∤ b`.
    NotPrimoid { witness: (RingElem, RingElem) },
}

/// Decide whether `p` is primoid: whenever `p^2` divides a product `ab`,
/// `p` divides `a` or `b`.
pub fn is_primoid(p: &RingElem, bound: Option<u64>) -> Result<PrimoidVerdict> {
    let ring = p.ring().clone();
    if ring.is_enumerable() {
        let elems = ring.enumerate_elements()?;
        let p2 = p * p;
        for a in &elems {
            if divides(p, a) {
                continue;
            }
            for b in &elems {
                if divides(p, b) {
                    continue;
                }
                if divides(&p2, &(a * b)) {
                    return Ok(PrimoidVerdict::NotPrimoid {
                        witness: (a.clone(), b.clone()),
                    });
                }
            }
        }
        return Ok(PrimoidVerdict::Primoid);
    }
    match ring.desc() {
        RingDesc::Integers => {
            let n = p.to_bigint().unwrap().abs();
            if n.is_zero() || n == BigInt::from(1) {
                return Ok(PrimoidVerdict::Primoid);
            }
            let factors = trial_factor(&n)?;
            if factors.len() == 1 {
                return Ok(PrimoidVerdict::Primoid);
            }
            // p = s·t with coprime s, t > 1: then p^2 | s^2·t^2 but p ∤ s^2, t^2
            let (q0, e0) = factors[0].clone();
            let s = BigInt::from(q0).pow(e0);
            let t = &n / &s;
            let a = ring.from_bigint(&(&s * &s));
            let b = ring.from_bigint(&(&t * &t));
            debug_assert!(divides(&(p * p), &(&a * &b)));
            debug_assert!(!divides(p, &a) && !divides(p, &b));
            Ok(PrimoidVerdict::NotPrimoid { witness: (a, b) })
        }
        RingDesc::QuotExt { .. } => {
            let probe = ring.zero();
            if quadratic_order_parts(&ring, &probe).is_none() {
                return Err(Error::capability(format!(
                    "primoid test over {ring} is not supported"
                )));
            }
            let bound = bound.ok_or_else(|| {
                Error::capability("primoid search over a quadratic order needs a search bound")
            })?;
            let p2 = p * p;
            // scan coordinates smallest-first so a minimal witness is found
            let mut coords: Vec<(i64, i64)> = Vec::new();
            for a0 in -(bound as i64)..=bound as i64 {
                for a1 in -(bound as i64)..=bound as i64 {
                    coords.push((a0, a1));
                }
            }
            coords.sort_by_key(|&(a0, a1)| {
                (a0.abs().max(a1.abs()), a0.abs() + a1.abs(), a0 < 0, a1 < 0)
            });
            let mut candidates = Vec::new();
            for (a0, a1) in coords {
                let e = RingElem::from_payload(
                    ring.clone(),
                    Payload::Quot(vec![
                        Payload::Int(BigInt::from(a0)),
                        Payload::Int(BigInt::from(a1)),
                    ]),
                );
                if !divides(p, &e) {
                    candidates.push(e);
                }
            }
            for a in &candidates {
                for b in &candidates {
                    if divides(&p2, &(a * b)) {
                        return Ok(PrimoidVerdict::NotPrimoid {
                            witness: (a.clone(), b.clone()),
                        });
                    }
                }
            }
            Ok(PrimoidVerdict::PrimoidUpToBound(bound))
        }
        _ => Err(Error::capability(format!(
            "primoid test over {ring} is not supported"
        ))),
    }
}

fn trial_factor(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    let mut n =
        u64::try_from(n).map_err(|_| Error::capability("primoid factoring bound exceeded"))?;
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse::{parse_elem, parse_monic_poly, parse_ring};

    #[test]
    fn roots_over_gf2() {
        let gf2 = parse_ring("GF(2)").unwrap();
        let f = parse_monic_poly(&gf2, "y^2-y").unwrap();
        let roots = find_monic_roots(&f, &gf2).unwrap();
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn golden_ratio_has_no_root_in_z_sqrt5() {
        let r = parse_ring("Z[u]/(u^2-5)").unwrap();
        let f = parse_monic_poly(&r, "x^2-x-1").unwrap();
        assert!(find_monic_roots(&f, &r).unwrap().is_empty());
    }

    #[test]
    fn quadratic_order_roots_when_they_exist() {
        let r = parse_ring("Z[u]/(u^2-5)").unwrap();
        // x^2 - 5 has roots ±u
        let f = parse_monic_poly(&r, "x^2-5").unwrap();
        let roots = find_monic_roots(&f, &r).unwrap();
        assert_eq!(roots.len(), 2);
        let u = parse_elem(&r, "u").unwrap();
        assert!(roots.contains(&u));
        assert!(roots.contains(&(-&u)));
    }

    #[test]
    fn exhaustive_scan_over_gf7() {
        let gf7 = parse_ring("GF(7)").unwrap();
        let f = parse_monic_poly(&gf7, "y^3-4*y").unwrap();
        let roots = find_monic_roots(&f, &gf7).unwrap();
        let vals: Vec<u64> = roots.iter().map(|r| r.residue().unwrap()).collect();
        assert_eq!(vals, vec![0, 2, 5]);
    }

    #[test]
    fn integer_and_rational_roots() {
        let z = parse_ring("Z").unwrap();
        let f = parse_monic_poly(&z, "x^3-x").unwrap();
        let mut roots: Vec<i64> = find_monic_roots(&f, &z)
            .unwrap()
            .iter()
            .map(|r| i64::try_from(&r.to_bigint().unwrap()).unwrap())
            .collect();
        roots.sort();
        assert_eq!(roots, vec![-1, 0, 1]);

        let q = parse_ring("Q").unwrap();
        let f = parse_monic_poly(&q, "x^2-(1/4)").unwrap();
        let roots = find_monic_roots(&f, &q).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&parse_elem(&q, "1/2").unwrap()));
    }

    #[test]
    fn unsupported_root_search_is_a_capability_error() {
        let r = parse_ring("Z[u]/(u^2-5)").unwrap();
        let f = parse_monic_poly(&r, "x^3-1").unwrap();
        assert!(matches!(
            find_monic_roots(&f, &r),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn primoid_verdicts_in_z() {
        let z = parse_ring("Z").unwrap();
        assert_eq!(
            is_primoid(&z.from_i64(2), None).unwrap(),
            PrimoidVerdict::Primoid
        );
        assert_eq!(
            is_primoid(&z.from_i64(0), None).unwrap(),
            PrimoidVerdict::Primoid
        );
        assert_eq!(
            is_primoid(&z.from_i64(8), None).unwrap(),
            PrimoidVerdict::Primoid
        );
        match is_primoid(&z.from_i64(6), None).unwrap() {
            PrimoidVerdict::NotPrimoid { witness: (a, b) } => {
                assert_eq!(a, z.from_i64(4));
                assert_eq!(b, z.from_i64(9));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn two_is_not_primoid_in_z_sqrt5() {
        let r = parse_ring("Z[u]/(u^2-5)").unwrap();
        let two = r.from_i64(2);
        match is_primoid(&two, Some(3)).unwrap() {
            PrimoidVerdict::NotPrimoid { witness: (a, b) } => {
                let p2 = &two * &two;
                assert!(divides(&p2, &(&a * &b)));
                assert!(!divides(&two, &a) && !divides(&two, &b));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
        assert!(is_primoid(&two, None).is_err());
    }

    #[test]
    fn primoid_in_enumerable_rings() {
        let z9 = parse_ring("Z/9").unwrap();
        assert_eq!(
            is_primoid(&z9.from_i64(3), None).unwrap(),
            PrimoidVerdict::Primoid
        );
        let z12 = parse_ring("Z/12").unwrap();
        match is_primoid(&z12.from_i64(6), None).unwrap() {
            PrimoidVerdict::NotPrimoid { .. } => {}
            other => panic!("6 should not be primoid in Z/12, got {other:?}"),
        }
    }
}
