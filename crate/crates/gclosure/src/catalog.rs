//! Explicit parameterizations of closure data: discriminant algebras and
//! Aₙ data, the square-root-of-discriminant correspondence, cubic resolvents
//! and D₄ data, factorization data, product data, and 1-closure data.

use crate::algebra::{
    char_poly, is_universally_norm_preserving, make_product, AlgElem, AlgHom, FreeAlgebra,
};
use crate::closure::{
    closure_algebra, induce, resolvent_algebra, verify_closure_datum, ClosureDatum,
    QuotientAlgebra, ResolventAlgebra,
};
use crate::error::{Error, Result};
use crate::ferrand::{ferrand_eval, ferrand_table};
use crate::ring::{
    determinant, find_monic_roots, is_primoid, poly_exact_divide, Matrix, MonicPoly, Monomial,
    Payload, PrimoidVerdict, Ring, RingDesc, RingElem, SparsePoly,
};
use crate::tensor::{expand_invariant, gamma, OrbitBasis, Perm, PermGroup, TensorAlgebra};

// ---------------------------------------------------------------------------
// Discriminant algebras and Aₙ data.
// ---------------------------------------------------------------------------

/// The rank-2 parameterizer of Aₙ-closure data, as a monic quadratic (and,
/// over linear-algebra-capable rings, the explicit resolvent quotient, whose
/// agreement with the quadratic is asserted).
pub struct DiscriminantAlgebra {
    pub quadratic: MonicPoly,
    pub resolvent: Option<ResolventAlgebra>,
}

/// Build the discriminant algebra of `A` with respect to its basis:
/// `y² − Φ(γ+γ')·y + Φ(γ·γ')` with `γ = γ(θ_1,…,θ_n)` and `γ'` its
/// odd-coset partner.
pub fn discriminant_algebra(algebra: &FreeAlgebra) -> Result<DiscriminantAlgebra> {
    let n = algebra.rank();
    if n < 2 {
        return Err(Error::Precondition(
            "discriminant algebra needs rank at least 2".into(),
        ));
    }
    let ring = algebra.ring().clone();
    let map = ferrand_table(algebra)?;
    let tensor = map.basis().tensor().clone();
    let an_basis = OrbitBasis::new(tensor, PermGroup::alternating(n))?;
    let args: Vec<AlgElem> = (0..n).map(|i| algebra.basis_elem(i)).collect();
    let (g, gp) = gamma(&an_basis, &args)?;
    let sum = expand_invariant(&(&g.expand() + &gp.expand()), map.basis())?;
    let prod = expand_invariant(&(&g.expand() * &gp.expand()), map.basis())?;
    let s1 = ferrand_eval(&map, &sum)?;
    let s2 = ferrand_eval(&map, &prod)?;
    let quadratic = MonicPoly::new(ring.clone(), "y", vec![s1, s2]);

    let resolvent = if ring.supports_linear_algebra() {
        let res = resolvent_algebra(algebra, &PermGroup::alternating(n))?;
        // the class of γ̇ must satisfy the quadratic inside the quotient
        let gamma_coords = g.coords();
        let gamma_sq = res.quotient.mul_classes(&gamma_coords, &gamma_coords)?;
        let mut check = gamma_sq;
        for (i, c) in gamma_coords.iter().enumerate() {
            check[i] = &check[i] - &(s1_of(&quadratic) * c);
        }
        let unit = res.quotient.reduce(&unit_coords_on(&res.g_basis)?);
        for (i, u) in unit.iter().enumerate() {
            check[i] = &check[i] + &(s2_of(&quadratic) * u);
        }
        let reduced = res.quotient.reduce(&check);
        if !reduced.iter().all(|c| c.is_zero()) {
            return Err(Error::Internal(
                "discriminant quadratic disagrees with the resolvent presentation".into(),
            ));
        }
        // when the quotient presents freely on a basis of size 2, the
        // characteristic polynomial of the γ̇-class is exactly the quadratic
        if res.quotient.is_free() && res.quotient.support().len() == 2 {
            let q_alg = res.quotient.as_free_algebra()?;
            let gamma_class = res.quotient.class_coords(&gamma_coords);
            let chi = char_poly(&q_alg.from_coords(gamma_class));
            if chi.sks() != quadratic.sks() {
                return Err(Error::Internal(
                    "discriminant quadratic disagrees with the resolvent presentation".into(),
                ));
            }
        }
        Some(res)
    } else {
        None
    };
    Ok(DiscriminantAlgebra {
        quadratic,
        resolvent,
    })
}

fn s1_of(q: &MonicPoly) -> &RingElem {
    q.sk(1)
}

fn s2_of(q: &MonicPoly) -> &RingElem {
    q.sk(2)
}

fn unit_coords_on(basis: &OrbitBasis) -> Result<Vec<RingElem>> {
    let unit = basis.tensor().as_algebra().unit_elem();
    Ok(expand_invariant(&unit, basis)?.coords().to_vec())
}

/// Solve the r×r system `M·x = rhs` where `M` must be invertible (its
/// determinant a unit); by adjugate, so only one inversion is needed.
pub(crate) fn solve_unit_system(
    ring: &Ring,
    m: &[Vec<RingElem>],
    rhs: &[RingElem],
) -> Result<Vec<RingElem>> {
    let r = m.len();
    let mat = Matrix::from_rows(ring.clone(), m.to_vec());
    let det = determinant(&mat)?;
    let det_inv = det
        .inv()
        .ok_or_else(|| Error::Internal(format!("basis-change determinant {det} is not a unit")))?;
    let mut x = vec![ring.zero(); r];
    for (k, slot) in x.iter_mut().enumerate() {
        for (i, rv) in rhs.iter().enumerate() {
            // adjugate entry (k, i): cofactor C_{i,k}
            let mut minor_rows = Vec::with_capacity(r - 1);
            for (ii, row) in m.iter().enumerate() {
                if ii == i {
                    continue;
                }
                let mut mr = Vec::with_capacity(r - 1);
                for (jj, e) in row.iter().enumerate() {
                    if jj == k {
                        continue;
                    }
                    mr.push(e.clone());
                }
                minor_rows.push(mr);
            }
            let minor = determinant(&Matrix::from_rows(ring.clone(), minor_rows))?;
            let signed = if (i + k) % 2 == 0 { minor } else { -&minor };
            *slot = &*slot + &(&signed * rv);
        }
        *slot = &*slot * &det_inv;
    }
    Ok(x)
}

/// Among all homomorphisms from the resolvent to the base ring, the one
/// sending the class of the given invariant to the prescribed value. Only
/// available over enumerable rings; uniqueness is part of the universal
/// property and asserted here.
fn pick_hom_by_generator(
    res: &ResolventAlgebra,
    generator_coords: &[RingElem],
    image: &RingElem,
) -> Result<ClosureDatum> {
    let ring = res.g_basis.tensor().base().ring().clone();
    if !ring.is_enumerable() {
        return Err(Error::capability(format!(
            "resolvent presentation over {ring} has torsion; datum construction needs an enumerable ring"
        )));
    }
    let homs = crate::closure::quotient_homs_to_ring(&res.quotient)?;
    let mut matches = Vec::new();
    for values in homs {
        let mut v = ring.zero();
        for (c, val) in generator_coords.iter().zip(values.iter()) {
            if !c.is_zero() {
                v = &v + &(c * val);
            }
        }
        if &v == image {
            matches.push(values);
        }
    }
    match matches.len() {
        1 => Ok(res.datum_from_column_values(&matches[0])),
        0 => Err(Error::Internal(format!(
            "no homomorphism sends the generator class to {image}"
        ))),
        k => Err(Error::Internal(format!(
            "{k} homomorphisms send the generator class to {image}; the correspondence is not bijective"
        ))),
    }
}

/// The closure datum determined on a free resolvent quotient by prescribing
/// the images of `r` generator classes.
fn datum_from_generator_images(
    res: &ResolventAlgebra,
    generators: &[Vec<RingElem>],
    images: &[RingElem],
) -> Result<ClosureDatum> {
    let ring = res.g_basis.tensor().base().ring().clone();
    let m: Vec<Vec<RingElem>> = generators
        .iter()
        .map(|g| res.quotient.class_coords(g))
        .collect();
    let x = solve_unit_system(&ring, &m, images)?;
    let values: Vec<RingElem> = (0..res.g_basis.orbit_count())
        .map(|o| {
            let mut v = vec![ring.zero(); res.g_basis.orbit_count()];
            v[o] = ring.one();
            let cls = res.quotient.class_coords(&v);
            let mut acc = ring.zero();
            for (c, xv) in cls.iter().zip(x.iter()) {
                acc = &acc + &(c * xv);
            }
            acc
        })
        .collect();
    Ok(res.datum_from_column_values(&values))
}

/// The Aₙ-closure datum attached to a root of the discriminant-algebra
/// quadratic, through the resolvent reduction map.
pub fn an_closure_from_root(algebra: &FreeAlgebra, root: &RingElem) -> Result<ClosureDatum> {
    let disc = discriminant_algebra(algebra)?;
    if !disc.quadratic.eval(root).is_zero() {
        return Err(Error::Precondition(format!(
            "{root} is not a root of the discriminant quadratic {}",
            disc.quadratic
        )));
    }
    let res = disc.resolvent.ok_or_else(|| {
        Error::capability(format!(
            "building the Aₙ datum over {} needs linear algebra",
            algebra.ring()
        ))
    })?;
    let n = algebra.rank();
    let args: Vec<AlgElem> = (0..n).map(|i| algebra.basis_elem(i)).collect();
    let an_basis = res.g_basis.clone();
    let (g, _) = gamma(&an_basis, &args)?;
    let ring = algebra.ring().clone();
    let datum = if res.quotient.is_free() && res.quotient.support().len() == 2 {
        let unit = expand_invariant(&an_basis.tensor().as_algebra().unit_elem(), &an_basis)?;
        datum_from_generator_images(
            &res,
            &[unit.coords().to_vec(), g.coords().to_vec()],
            &[ring.one(), root.clone()],
        )?
    } else {
        // presentations with column torsion: find the hom sending γ̇ ↦ root
        pick_hom_by_generator(&res, g.coords(), root)?
    };
    verify_closure_datum(&datum)?;
    Ok(datum)
}

// ---------------------------------------------------------------------------
// Square roots of the discriminant.
// ---------------------------------------------------------------------------

/// The correspondence `x ↦ 2x + b` from roots of the discriminant-algebra
/// quadratic `y² + by + c` to square roots of `b² − 4c`.
#[derive(Debug)]
pub struct SqrtDiscCorrespondence {
    pub disc: RingElem,
    /// Pairs (quadratic root, its square root of the discriminant).
    pub pairs: Vec<(RingElem, RingElem)>,
    /// Set when primoidity of 2 was only confirmed up to a search bound.
    pub bounded: Option<u64>,
}

/// Materialize the bijection between quadratic roots and square roots of
/// the discriminant. Requires 2 to be a primoid non-zerodivisor; the error
/// carries the witness when the hypothesis fails.
pub fn sqrt_disc_correspondence(
    algebra: &FreeAlgebra,
    primoid_bound: Option<u64>,
) -> Result<SqrtDiscCorrespondence> {
    let ring = algebra.ring().clone();
    let two = ring.from_i64(2);
    let bounded = match is_primoid(&two, primoid_bound)? {
        PrimoidVerdict::Primoid => None,
        PrimoidVerdict::PrimoidUpToBound(b) => Some(b),
        PrimoidVerdict::NotPrimoid { witness: (a, b) } => {
            return Err(Error::Precondition(format!(
                "primoid hypothesis fails: 2 is not primoid, witness ({a})·({b}) = {}",
                &a * &b
            )));
        }
    };
    if !two_is_non_zerodivisor(&ring)? {
        return Err(Error::Precondition(
            "2 is a zerodivisor in the base ring".into(),
        ));
    }
    let disc_alg = discriminant_algebra(algebra)?;
    // write the quadratic as y² + b·y + c
    let b = -disc_alg.quadratic.sk(1);
    let c = disc_alg.quadratic.sk(2).clone();
    let disc = &(&b * &b) - &(&ring.from_i64(4) * &c);
    let roots = find_monic_roots(&disc_alg.quadratic, &ring)?;
    let sqrt_poly = MonicPoly::new(ring.clone(), "y", vec![ring.zero(), -&disc]);
    let sqrts = find_monic_roots(&sqrt_poly, &ring)?;
    let mut pairs = Vec::with_capacity(roots.len());
    for x in &roots {
        let d = &(&two * x) + &b;
        if !sqrts.contains(&d) {
            return Err(Error::Internal(format!(
                "2·{x}+{b} = {d} is not among the square roots of {disc}"
            )));
        }
        pairs.push((x.clone(), d));
    }
    // bijectivity: the map must cover all square roots, injectively
    let mut images: Vec<&RingElem> = pairs.iter().map(|(_, d)| d).collect();
    images.sort_by_key(|e| e.to_string());
    images.dedup();
    if images.len() != pairs.len() || pairs.len() != sqrts.len() {
        return Err(Error::Internal(format!(
            "root↔square-root correspondence is not bijective: {} roots vs {} square roots",
            pairs.len(),
            sqrts.len()
        )));
    }
    Ok(SqrtDiscCorrespondence {
        disc,
        pairs,
        bounded,
    })
}

fn two_is_non_zerodivisor(ring: &Ring) -> Result<bool> {
    if ring.is_enumerable() {
        let two = ring.from_i64(2);
        for a in ring.enumerate_elements()? {
            if !a.is_zero() && (&two * &a).is_zero() {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    match ring.desc() {
        RingDesc::Integers | RingDesc::Rationals => Ok(true),
        // a quadratic order Z[u]/(u²−d) embeds coordinatewise into Z²
        RingDesc::QuotExt { base, .. } if matches!(base.desc(), RingDesc::Integers) => Ok(true),
        _ => Err(Error::capability(format!(
            "cannot decide whether 2 is a zerodivisor in {ring}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Cubic resolvents and D₄ data.
// ---------------------------------------------------------------------------

/// `m(y) = y³ − s₂y² + (s₁s₃ − 4s₄)y − (s₁²s₄ − 4s₂s₄ + s₃²)` for a monic
/// quartic.
pub fn cubic_resolvent(f: &MonicPoly) -> Result<MonicPoly> {
    if f.degree() != 4 {
        return Err(Error::Dimension(format!(
            "cubic resolvent of a degree-{} polynomial",
            f.degree()
        )));
    }
    let ring = f.ring().clone();
    let (s1, s2, s3, s4) = (f.sk(1), f.sk(2), f.sk(3), f.sk(4));
    let four = ring.from_i64(4);
    let t1 = s2.clone();
    let t2 = &(s1 * s3) - &(&four * s4);
    let t3 = &(&(&(s1 * s1) * s4) - &(&(&four * s2) * s4)) + &(s3 * s3);
    Ok(MonicPoly::new(ring, "y", vec![t1, t2, t3]))
}

fn poly_ring_x4() -> Ring {
    Ring::poly_ext(
        Ring::integers(),
        vec!["x1".into(), "x2".into(), "x3".into(), "x4".into()],
    )
    .unwrap()
}

/// Apply a variable permutation `x_i ↦ x_{σ(i)}` to a polynomial.
fn permute_vars(p: &RingElem, sigma: &Perm) -> RingElem {
    let ring = p.ring().clone();
    let Payload::Poly(sp) = p.payload() else {
        panic!("expected a polynomial")
    };
    let base = match ring.desc() {
        RingDesc::PolyExt { base, .. } => base.clone(),
        _ => panic!("expected a polynomial ring"),
    };
    let mut out = SparsePoly::zero();
    for (mono, coeff) in &sp.terms {
        let mut exps = vec![0u32; mono.0.len()];
        for (i, &e) in mono.0.iter().enumerate() {
            exps[sigma.apply(i)] = e;
        }
        out.add_term(&base, Monomial(exps), coeff.clone());
    }
    RingElem::from_payload(ring, Payload::Poly(out))
}

fn lambda_polys(ring: &Ring) -> (RingElem, RingElem, RingElem) {
    let x: Vec<RingElem> = (0..4).map(|i| ring.generator(i)).collect();
    let l = &(&x[0] * &x[2]) + &(&x[1] * &x[3]);
    let lp = &(&x[0] * &x[1]) + &(&x[2] * &x[3]);
    let lpp = &(&x[0] * &x[3]) + &(&x[1] * &x[2]);
    (l, lp, lpp)
}

/// Split a D₄-invariant polynomial `p ∈ Z[x1..x4]` as `p = qΛ² + rΛ + s`
/// with `q, r, s` symmetric, via the exact-division recurrences
/// `ρ = (p′−p″)/(Λ′−Λ″)`, `q = −(ρ′−ρ″)/(Λ′−Λ″)`, `r = ρ − q(Λ′+Λ″)`,
/// `s = p − qΛ² − rΛ`.
pub fn qrs_decompose(p: &RingElem) -> Result<(RingElem, RingElem, RingElem)> {
    let ring = p.ring().clone();
    match ring.desc() {
        RingDesc::PolyExt { vars, .. } if vars.len() == 4 => {}
        _ => {
            return Err(Error::Precondition(
                "qrs decomposition expects a polynomial in four variables".into(),
            ))
        }
    }
    let d4_gen1 = Perm::from_cycles(4, &[vec![1, 3]]).unwrap();
    let d4_gen2 = Perm::from_cycles(4, &[vec![1, 2, 3, 4]]).unwrap();
    if &permute_vars(p, &d4_gen1) != p || &permute_vars(p, &d4_gen2) != p {
        return Err(Error::Precondition("polynomial is not D4-invariant".into()));
    }
    let (l, lp, lpp) = lambda_polys(&ring);
    let sw14 = Perm::from_cycles(4, &[vec![1, 4]]).unwrap();
    let sw12 = Perm::from_cycles(4, &[vec![1, 2]]).unwrap();
    let prime = |e: &RingElem| permute_vars(e, &sw14);
    let dprime = |e: &RingElem| permute_vars(e, &sw12);

    let denom = &lp - &lpp;
    let rho = poly_exact_divide(&(&prime(p) - &dprime(p)), &denom)?;
    let q = -&poly_exact_divide(&(&prime(&rho) - &dprime(&rho)), &denom)?;
    let r = &rho - &(&q * &(&lp + &lpp));
    let s = &(p - &(&q * &(&l * &l))) - &(&r * &l);
    // reassembly and symmetry are loud internal checks
    let reassembled = &(&(&q * &(&l * &l)) + &(&r * &l)) + &s;
    if &reassembled != p {
        return Err(Error::Internal(
            "qrs decomposition does not reassemble".into(),
        ));
    }
    let s4_gen = Perm::from_cycles(4, &[vec![1, 2]]).unwrap();
    let s4_cycle = Perm::from_cycles(4, &[vec![1, 2, 3, 4]]).unwrap();
    for part in [&q, &r, &s] {
        if &permute_vars(part, &s4_gen) != part || &permute_vars(part, &s4_cycle) != part {
            return Err(Error::Internal("qrs component is not symmetric".into()));
        }
    }
    Ok((q, r, s))
}

/// Rewrite a symmetric polynomial as a polynomial in the elementary
/// symmetric polynomials `e1..en`, by leading-term reduction.
pub fn symmetrize(p: &RingElem) -> Result<RingElem> {
    let ring = p.ring().clone();
    let (base, nvars) = match ring.desc() {
        RingDesc::PolyExt { base, vars } => (base.clone(), vars.len()),
        _ => {
            return Err(Error::Precondition(
                "symmetrize expects a polynomial".into(),
            ))
        }
    };
    // symmetry check on a generating pair
    if nvars >= 2 {
        let sw = Perm::from_cycles(nvars, &[vec![1, 2]]).unwrap();
        let cyc = Perm::from_cycles(nvars, &[(1..=nvars).collect()]).unwrap();
        if &permute_vars(p, &sw) != p || &permute_vars(p, &cyc) != p {
            return Err(Error::Precondition("polynomial is not symmetric".into()));
        }
    }
    let evars: Vec<String> = (1..=nvars).map(|i| format!("e{i}")).collect();
    let target = Ring::poly_ext(base.clone(), evars)?;
    // the elementary symmetric polynomials themselves
    let elementary: Vec<RingElem> = (1..=nvars)
        .map(|k| {
            let mut acc = ring.zero();
            for subset in subsets(nvars, k) {
                let mut term = ring.one();
                for &i in &subset {
                    term = &term * &ring.generator(i);
                }
                acc = &acc + &term;
            }
            acc
        })
        .collect();

    let mut rem = p.clone();
    let mut out = target.zero();
    loop {
        let sp = match rem.payload() {
            Payload::Poly(sp) => sp,
            _ => unreachable!(),
        };
        let Some((mono, coeff)) = sp.leading() else {
            break;
        };
        let alpha = mono.0.clone();
        for w in alpha.windows(2) {
            if w[0] < w[1] {
                return Err(Error::Precondition(
                    "polynomial is not symmetric (unsorted leading exponent)".into(),
                ));
            }
        }
        // e-exponents: α_i − α_{i+1}, with α_{n} last
        let mut e_exps = vec![0u32; nvars];
        for i in 0..nvars {
            let next = if i + 1 < nvars { alpha[i + 1] } else { 0 };
            e_exps[i] = alpha[i] - next;
        }
        let coeff_elem = RingElem::from_payload(base.clone(), coeff.clone());
        // subtract coeff · ∏ e_i^{exps} in the x-variables
        let mut prod = ring.embed(&coeff_elem);
        for (i, &e) in e_exps.iter().enumerate() {
            if e > 0 {
                prod = &prod * &elementary[i].pow(e as u64);
            }
        }
        rem = &rem - &prod;
        // record coeff · ∏ e_i^{exps} in the e-variables
        let mut term = target.embed(&coeff_elem);
        for (i, &e) in e_exps.iter().enumerate() {
            if e > 0 {
                term = &term * &target.generator(i).pow(e as u64);
            }
        }
        out = &out + &term;
    }
    Ok(out)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Evaluate a polynomial in `e1..en` at `e_i ↦ s_i(f)` over the coefficient
/// ring of `f`.
fn eval_symmetric_at_sk(expr: &RingElem, f: &MonicPoly) -> RingElem {
    let ring = f.ring().clone();
    let Payload::Poly(sp) = expr.payload() else {
        panic!("expected a polynomial")
    };
    let mut acc = ring.zero();
    for (mono, coeff) in &sp.terms {
        let c = match coeff {
            Payload::Int(n) => ring.from_bigint(n),
            _ => panic!("symmetrized coefficients are integers"),
        };
        let mut term = c;
        for (i, &e) in mono.0.iter().enumerate() {
            if e > 0 {
                term = &term * &f.sk(i + 1).pow(e as u64);
            }
        }
        acc = &acc + &term;
    }
    acc
}

/// The D₄-closure datum attached to a root of the cubic resolvent, built by
/// two independent routes whose agreement is asserted: the resolvent-algebra
/// reduction (when linear algebra is available) and the symmetric-function
/// decomposition `p = qΛ² + rΛ + s` evaluated at `Λ ↦ ρ`.
pub fn d4_closure_from_root(f: &MonicPoly, ring: &Ring, root: &RingElem) -> Result<ClosureDatum> {
    if f.degree() != 4 {
        return Err(Error::Dimension("D4 data need a quartic".into()));
    }
    let resolvent = cubic_resolvent(f)?;
    if !resolvent.eval(root).is_zero() {
        return Err(Error::Precondition(format!(
            "{root} is not a root of the cubic resolvent {resolvent}"
        )));
    }
    let algebra = FreeAlgebra::monogenic(ring.clone(), f);
    let tensor = TensorAlgebra::new(algebra.clone(), 4)?;
    let d4_basis = OrbitBasis::new(tensor.clone(), PermGroup::dihedral4())?;

    // symmetric-function route: lift each orbit sum to Z[x1..x4], split off
    // q, r, s, and evaluate at e_i ↦ s_i, Λ ↦ ρ
    let zx = poly_ring_x4();
    let mut sym_values = Vec::with_capacity(d4_basis.orbit_count());
    let rho2 = root.pow(2);
    for orbit in d4_basis.orbits() {
        let mut lift = zx.zero();
        for &m in &orbit.members {
            let tuple = tensor.decode(m);
            let mut term = zx.one();
            for (slot, &e) in tuple.iter().enumerate() {
                if e > 0 {
                    term = &term * &zx.generator(slot).pow(e as u64);
                }
            }
            lift = &lift + &term;
        }
        let (q, r, s) = qrs_decompose(&lift)?;
        let q_hat = eval_symmetric_at_sk(&symmetrize(&q)?, f);
        let r_hat = eval_symmetric_at_sk(&symmetrize(&r)?, f);
        let s_hat = eval_symmetric_at_sk(&symmetrize(&s)?, f);
        let value = &(&(&q_hat * &rho2) + &(&r_hat * root)) + &s_hat;
        sym_values.push(value);
    }
    let sym_datum = ClosureDatum::new(d4_basis.clone(), sym_values);

    if ring.supports_linear_algebra() {
        let res = resolvent_algebra(&algebra, &PermGroup::dihedral4())?;
        // Λ = x^{(1)}x^{(3)} + x^{(2)}x^{(4)}
        let x = algebra.generator_elem().unwrap();
        let l13 = &tensor.conjugate_embed(&x, 1)? * &tensor.conjugate_embed(&x, 3)?;
        let l24 = &tensor.conjugate_embed(&x, 2)? * &tensor.conjugate_embed(&x, 4)?;
        let lambda = &l13 + &l24;
        let lambda_inv = expand_invariant(&lambda, &d4_basis)?;
        let datum = if res.quotient.is_free() && res.quotient.support().len() == 3 {
            let lambda2_inv = expand_invariant(&(&lambda * &lambda), &d4_basis)?;
            let unit_inv =
                expand_invariant(&d4_basis.tensor().as_algebra().unit_elem(), &d4_basis)?;
            Some(datum_from_generator_images(
                &res,
                &[
                    unit_inv.coords().to_vec(),
                    lambda_inv.coords().to_vec(),
                    lambda2_inv.coords().to_vec(),
                ],
                &[ring.one(), root.clone(), root.pow(2)],
            )?)
        } else if ring.is_enumerable() {
            Some(pick_hom_by_generator(&res, lambda_inv.coords(), root)?)
        } else {
            None
        };
        if let Some(datum) = datum {
            if datum.values() != sym_datum.values() {
                return Err(Error::Internal(
                    "D4 resolvent route and symmetric-function route disagree".into(),
                ));
            }
        }
    }
    verify_closure_datum(&sym_datum)?;
    Ok(sym_datum)
}

// ---------------------------------------------------------------------------
// Factorization data.
// ---------------------------------------------------------------------------

/// A factorization of `f` into monic factors, checked on construction.
pub struct FactorizationDatum {
    pub poly: MonicPoly,
    pub factors: Vec<MonicPoly>,
}

impl FactorizationDatum {
    pub fn new(poly: MonicPoly, factors: Vec<MonicPoly>) -> Result<FactorizationDatum> {
        if factors.is_empty() {
            return Err(Error::Precondition(
                "a factorization needs at least one factor".into(),
            ));
        }
        let mut prod = factors[0].clone();
        for g in &factors[1..] {
            prod = prod.mul(g);
        }
        if prod.sks() != poly.sks() {
            return Err(Error::Precondition(format!(
                "factors multiply to {prod}, not {poly}"
            )));
        }
        Ok(FactorizationDatum { poly, factors })
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.factors.iter().map(|g| g.degree()).collect()
    }
}

/// The `S_{n1}×…×S_{nk}`-closure datum of a monogenic algebra attached to a
/// factorization of its defining polynomial: pull the product of the
/// factors' canonical data back along the diagonal `x ↦ (x,…,x)`.
pub fn factorization_closure(ring: &Ring, fact: &FactorizationDatum) -> Result<ClosureDatum> {
    let algebra = FreeAlgebra::monogenic(ring.clone(), &fact.poly);
    let factors: Vec<FreeAlgebra> = fact
        .factors
        .iter()
        .map(|g| FreeAlgebra::monogenic(ring.clone(), g))
        .collect();
    let product = make_product(&factors)?;
    // the diagonal is a homomorphism because every factor divides f
    let mut diag_images = Vec::with_capacity(algebra.rank());
    let mut diag_gen = product.algebra.zero_elem();
    for (i, a) in factors.iter().enumerate() {
        let gen = a.generator_elem().expect("monogenic factor");
        let off = product.offsets[i];
        for (k, c) in gen.coords().iter().enumerate() {
            let shifted = &product.algebra.basis_elem(off + k).scale(c);
            diag_gen = &diag_gen + shifted;
        }
    }
    for k in 0..algebra.rank() {
        diag_images.push(diag_gen.pow(k as u64));
    }
    let diag = AlgHom::new(algebra.clone(), product.algebra.clone(), diag_images)?;
    if !is_universally_norm_preserving(&diag)? {
        return Err(Error::Internal(
            "diagonal map of a factorization is not universally norm-preserving".into(),
        ));
    }
    let factor_data: Vec<ClosureDatum> = factors
        .iter()
        .map(|a| {
            let map = ferrand_table(a)?;
            Ok(crate::closure::canonical_sn_datum(&map))
        })
        .collect::<Result<Vec<_>>>()?;
    let product_datum = product_closure(&factor_data)?;
    let datum = pullback_along_unp(&product_datum, &diag)?;
    verify_closure_datum(&datum)?;
    Ok(datum)
}

/// Recover the factorization encoded by a `S_{n1}×…×S_{nk}`-closure datum on
/// a monogenic algebra: the i-th factor is the datum's value, coefficient by
/// coefficient, on `1 ⊗ … ⊗ (λ−x)^{⊗n_i} ⊗ … ⊗ 1`.
pub fn extract_factorization(datum: &ClosureDatum, blocks: &[usize]) -> Result<FactorizationDatum> {
    let algebra = datum.algebra().clone();
    let f = algebra
        .monogenic_poly()
        .ok_or_else(|| Error::Precondition("factor extraction needs a monogenic algebra".into()))?
        .clone();
    let ring = algebra.ring().clone();
    let n = algebra.rank();
    let total: usize = blocks.iter().sum();
    if total != n {
        return Err(Error::Dimension("block sizes must sum to the rank".into()));
    }
    if datum.group() != &PermGroup::product_symmetric(blocks) {
        return Err(Error::Precondition(
            "datum group is not the block product of symmetric groups".into(),
        ));
    }
    let tensor = datum.basis().tensor();
    let x = algebra.generator_elem().expect("monogenic algebra");
    let mut factors = Vec::with_capacity(blocks.len());
    let mut offset = 0;
    for &b in blocks {
        // coefficients of (λ−x)^{⊗b} in the block: e_ℓ(x) within the block
        let mut sks = Vec::with_capacity(b);
        for ell in 1..=b {
            let mut acc = tensor.as_algebra().zero_elem();
            for subset in subsets(b, ell) {
                let factors_t: Vec<AlgElem> = (0..n)
                    .map(|slot| {
                        if slot >= offset && slot < offset + b && subset.contains(&(slot - offset))
                        {
                            x.clone()
                        } else {
                            algebra.unit_elem()
                        }
                    })
                    .collect();
                acc = &acc + &tensor.pure_tensor(&factors_t);
            }
            let inv = expand_invariant(&acc, datum.basis())?;
            sks.push(datum.eval(&inv)?);
        }
        factors.push(MonicPoly::new(ring.clone(), f.var(), sks));
        offset += b;
    }
    FactorizationDatum::new(f, factors)
}

// ---------------------------------------------------------------------------
// Product data.
// ---------------------------------------------------------------------------

fn block_product_group(blocks: &[&PermGroup]) -> PermGroup {
    let n: usize = blocks.iter().map(|g| g.degree()).sum();
    let mut gens = Vec::new();
    let mut off = 0;
    for g in blocks {
        for p in g.generators() {
            let mut one_line: Vec<usize> = (0..n).collect();
            for i in 0..g.degree() {
                one_line[off + i] = off + p.apply(i);
            }
            gens.push(perm_from_one_line(one_line));
        }
        off += g.degree();
    }
    let name = blocks
        .iter()
        .map(|g| g.name().to_string())
        .collect::<Vec<_>>()
        .join("x");
    PermGroup::from_generators(n, gens, name).unwrap()
}

fn perm_from_one_line(map: Vec<usize>) -> Perm {
    // go through cycle form to reuse the validated constructor
    let n = map.len();
    let mut cycles = Vec::new();
    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[i] || map[i] == i {
            seen[i] = true;
            continue;
        }
        let mut cyc = vec![i + 1];
        seen[i] = true;
        let mut j = map[i];
        while j != i {
            seen[j] = true;
            cyc.push(j + 1);
            j = map[j];
        }
        cycles.push(cyc);
    }
    Perm::from_cycles(n, &cycles).unwrap()
}

/// The composite `G_1×…×G_k`-closure datum on `A_1×…×A_k`: the value on a
/// conforming orbit is the product of the factors' values on the block
/// orbits, and 0 on any orbit that mixes blocks.
pub fn product_closure(data: &[ClosureDatum]) -> Result<ClosureDatum> {
    if data.is_empty() {
        return Err(Error::Precondition(
            "a product needs at least one datum".into(),
        ));
    }
    let ring = data[0].algebra().ring().clone();
    for d in data {
        if d.algebra().ring() != &ring {
            return Err(Error::Dimension("product data over different rings".into()));
        }
    }
    if data.len() == 1 {
        return Ok(data[0].clone());
    }
    let factors: Vec<FreeAlgebra> = data.iter().map(|d| d.algebra().clone()).collect();
    let product = make_product(&factors)?;
    let groups: Vec<&PermGroup> = data.iter().map(|d| d.group()).collect();
    let group = block_product_group(&groups);
    let n = product.algebra.rank();
    let tensor = TensorAlgebra::new(product.algebra.clone(), n)?;
    let basis = OrbitBasis::new(tensor, group)?;

    // block of each slot position and of each product-basis index
    let sizes: Vec<usize> = factors.iter().map(|a| a.rank()).collect();
    let mut pos_block = Vec::with_capacity(n);
    for (i, &s) in sizes.iter().enumerate() {
        pos_block.extend(std::iter::repeat_n(i, s));
    }
    let idx_block = pos_block.clone();

    let values: Vec<RingElem> = basis
        .orbits()
        .iter()
        .map(|orbit| {
            let rep = &orbit.rep;
            let conforming = rep
                .iter()
                .enumerate()
                .all(|(pos, &idx)| pos_block[pos] == idx_block[idx]);
            if !conforming {
                return Ok(ring.zero());
            }
            let mut value = ring.one();
            for (i, d) in data.iter().enumerate() {
                let off = product.offsets[i];
                let sub: Vec<usize> = (off..off + sizes[i]).map(|pos| rep[pos] - off).collect();
                let o = d.basis().orbit_of_tuple(&sub);
                value = &value * d.value_on_orbit(o);
            }
            Ok(value)
        })
        .collect::<Result<Vec<_>>>()?;
    let datum = ClosureDatum::new(basis, values);
    verify_closure_datum(&datum)?;
    Ok(datum)
}

/// Outcome of the stronger product theorem: inducing the product datum to a
/// larger group `H` with `H ∩ S_{n_i} = G_i` splits the closure algebra into
/// `(H:G)` orthogonal blocks.
pub struct StrongerProductReport {
    pub closure: QuotientAlgebra,
    pub closure_rank: usize,
    pub idempotents: Vec<Vec<RingElem>>,
    pub index: usize,
    pub factor_ranks: Vec<usize>,
}

pub fn stronger_product_check(
    data: &[ClosureDatum],
    h: &PermGroup,
) -> Result<StrongerProductReport> {
    let product_datum = product_closure(data)?;
    let g = product_datum.group().clone();
    if !g.is_subgroup_of(h) {
        return Err(Error::Precondition(format!(
            "{} does not contain the product group {}",
            h.name(),
            g.name()
        )));
    }
    // H ∩ S_{block} must be exactly the factor group
    let sizes: Vec<usize> = data.iter().map(|d| d.algebra().rank()).collect();
    let mut off = 0;
    for (i, d) in data.iter().enumerate() {
        let b = sizes[i];
        let block: Vec<usize> = (off..off + b).collect();
        let mut intersection = Vec::new();
        for p in h.elements() {
            let fixes_outside = (0..h.degree())
                .filter(|k| !block.contains(k))
                .all(|k| p.apply(k) == k);
            let preserves_block = block.iter().all(|&k| block.contains(&p.apply(k)));
            if fixes_outside && preserves_block {
                intersection.push(p.clone());
            }
        }
        let restricted: Vec<Perm> = intersection
            .iter()
            .map(|p| perm_from_one_line((0..b).map(|k| p.apply(off + k) - off).collect()))
            .collect();
        let as_group = PermGroup::from_generators(b, restricted, "H∩block")?;
        if &as_group != d.group() {
            return Err(Error::Precondition(format!(
                "H ∩ S_{b} on block {i} is not the factor group {}",
                d.group().name()
            )));
        }
        off += b;
    }

    let induced = induce(&product_datum, h)?;
    let closure = closure_algebra(&induced)?;
    let closure_rank = closure.rank();

    let mut factor_ranks = Vec::with_capacity(data.len());
    for d in data {
        factor_ranks.push(closure_algebra(d)?.rank());
    }
    let index = h.order() / g.order();
    let expected: usize = index * factor_ranks.iter().product::<usize>();
    if closure_rank != expected {
        return Err(Error::Internal(format!(
            "induced closure rank {closure_rank} differs from (H:G)·Π ranks = {expected}"
        )));
    }

    // idempotents: the H-orbit of e = e_1^{⊗n_1} ⊗ … ⊗ e_k^{⊗n_k}
    let factors: Vec<FreeAlgebra> = data.iter().map(|d| d.algebra().clone()).collect();
    let product = make_product(&factors)?;
    let tensor = induced.basis().tensor();
    let slot_elems: Vec<AlgElem> = {
        let mut out = Vec::new();
        for (i, _) in factors.iter().enumerate() {
            for _ in 0..sizes[i] {
                out.push(product.idempotents[i].clone());
            }
        }
        out
    };
    let e = tensor.pure_tensor(&slot_elems);
    let mut orbit_elems: Vec<AlgElem> = Vec::new();
    for p in h.elements() {
        let moved = tensor.perm_action(p, &e)?;
        if !orbit_elems.contains(&moved) {
            orbit_elems.push(moved);
        }
    }
    if orbit_elems.len() != index {
        return Err(Error::Internal(format!(
            "idempotent orbit has size {}, expected the index {index}",
            orbit_elems.len()
        )));
    }
    let ring = product.algebra.ring().clone();
    let mut images: Vec<Vec<RingElem>> = Vec::with_capacity(orbit_elems.len());
    for v in &orbit_elems {
        images.push(closure.reduce(&v.coords()));
    }
    // orthogonal idempotents summing to 1
    let mut sum = vec![ring.zero(); tensor.dim()];
    for img in &images {
        for (s, c) in sum.iter_mut().zip(img.iter()) {
            *s = &*s + c;
        }
    }
    let unit_img = closure.unit_image();
    if closure.reduce(&sum) != unit_img {
        return Err(Error::Internal("block idempotents do not sum to 1".into()));
    }
    for (i, u) in images.iter().enumerate() {
        if &closure.mul_classes(u, u)? != u {
            return Err(Error::Internal("block image is not idempotent".into()));
        }
        for v in images.iter().skip(i + 1) {
            if !closure.mul_classes(u, v)?.iter().all(|c| c.is_zero()) {
                return Err(Error::Internal(
                    "block idempotents are not orthogonal".into(),
                ));
            }
        }
    }

    Ok(StrongerProductReport {
        closure,
        closure_rank,
        idempotents: images,
        index,
        factor_ranks,
    })
}

// ---------------------------------------------------------------------------
// 1-closure data.
// ---------------------------------------------------------------------------

/// The trivial-group closure datum compiled from n homomorphisms `A → R`:
/// the value on the (singleton) orbit of `(i_1,…,i_n)` is
/// `Π_k f_k(θ_{i_k})`. The compiled map `Πf_i : A → R^n` must be universally
/// norm-preserving; the error otherwise names a violating element.
pub fn one_closure_from_homs(homs: &[AlgHom]) -> Result<ClosureDatum> {
    if homs.is_empty() {
        return Err(Error::Precondition("need at least one homomorphism".into()));
    }
    let algebra = homs[0].source().clone();
    let ring = algebra.ring().clone();
    let n = algebra.rank();
    if homs.len() != n {
        return Err(Error::Precondition(format!(
            "need exactly {n} homomorphisms for a rank-{n} algebra"
        )));
    }
    for h in homs {
        if h.source() != &algebra || h.target().rank() != 1 {
            return Err(Error::Precondition(
                "homomorphisms must share the source and land in the base ring".into(),
            ));
        }
    }
    let scalar = |h: &AlgHom, i: usize| -> RingElem { h.images()[i].coord(0) };

    // compile Πf_i : A → R^n and check it preserves characteristic polynomials
    let rn = FreeAlgebra::trivial(ring.clone(), n);
    let images: Vec<AlgElem> = (0..n)
        .map(|i| {
            let coords: Vec<RingElem> = homs.iter().map(|h| scalar(h, i)).collect();
            rn.from_coords(coords)
        })
        .collect();
    let compiled = AlgHom::new(algebra.clone(), rn, images)?;
    if !is_universally_norm_preserving(&compiled)? {
        // name a violating element by its characteristic polynomial
        for i in 0..n {
            let src = char_poly(&algebra.basis_elem(i));
            let img = char_poly(&compiled.apply(&algebra.basis_elem(i)));
            if src.sks() != img.sks() {
                return Err(Error::Precondition(format!(
                    "not a closure datum: basis element {i} has characteristic polynomial {src} but its image has {img}"
                )));
            }
        }
        return Err(Error::Precondition(
            "not a closure datum: the generic element changes characteristic polynomial".into(),
        ));
    }

    let tensor = TensorAlgebra::new(algebra.clone(), n)?;
    let basis = OrbitBasis::new(tensor, PermGroup::trivial(n))?;
    let values: Vec<RingElem> = basis
        .orbits()
        .iter()
        .map(|orbit| {
            let mut v = ring.one();
            for (slot, &idx) in orbit.rep.iter().enumerate() {
                v = &v * &scalar(&homs[slot], idx);
            }
            v
        })
        .collect();
    let datum = ClosureDatum::new(basis, values);
    verify_closure_datum(&datum)?;
    Ok(datum)
}

/// Divide a monic polynomial by `(x − r)` when `r` is a root.
fn divide_by_linear(f: &MonicPoly, r: &RingElem) -> MonicPoly {
    let ring = f.ring().clone();
    let n = f.degree();
    // Horner: b_{n-1} = 1, b_{k-1} = a_k + r·b_k with a_k the signed
    // coefficient of x^k
    let mut b = vec![ring.zero(); n];
    b[n - 1] = ring.one();
    for k in (1..n).rev() {
        let a_k = f.signed_coeff(n - k);
        b[k - 1] = &a_k + &(r * &b[k]);
    }
    debug_assert!(f.eval(r).is_zero());
    let signed: Vec<RingElem> = (0..n - 1).map(|i| b[n - 2 - i].clone()).collect();
    MonicPoly::from_signed_coeffs(ring, f.var(), signed)
}

/// All trivial-group closure data of a monogenic algebra, one per ordered
/// factorization of `f` into monic linear factors.
pub fn one_closures_from_linear_factorizations(
    algebra: &FreeAlgebra,
    f: &MonicPoly,
) -> Result<Vec<ClosureDatum>> {
    let ring = algebra.ring().clone();
    let mut sequences: Vec<Vec<RingElem>> = Vec::new();
    let mut current = Vec::new();
    collect_root_sequences(f, &ring, &mut current, &mut sequences)?;
    let r1 = FreeAlgebra::rank_one(ring.clone());
    let mut out = Vec::new();
    for seq in sequences {
        let homs: Vec<AlgHom> = seq
            .iter()
            .map(|r| {
                let images: Vec<AlgElem> = (0..algebra.rank())
                    .map(|k| r1.unit_elem().scale(&r.pow(k as u64)))
                    .collect();
                AlgHom::new(algebra.clone(), r1.clone(), images)
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(one_closure_from_homs(&homs)?);
    }
    Ok(out)
}

fn collect_root_sequences(
    f: &MonicPoly,
    ring: &Ring,
    current: &mut Vec<RingElem>,
    out: &mut Vec<Vec<RingElem>>,
) -> Result<()> {
    if f.degree() == 0 {
        out.push(current.clone());
        return Ok(());
    }
    for r in find_monic_roots(f, ring)? {
        let quotient = if f.degree() == 1 {
            MonicPoly::new(ring.clone(), f.var(), vec![])
        } else {
            divide_by_linear(f, &r)
        };
        current.push(r);
        collect_root_sequences(&quotient, ring, current, out)?;
        current.pop();
    }
    Ok(())
}

/// All `S_{n1}×…×S_{nk}`-closure data of a monogenic algebra, one per
/// ordered factorization of `f` with the given degree profile. Enumerable
/// rings search factor coefficients exhaustively; otherwise only all-linear
/// profiles are supported, through root sequences.
pub fn enumerate_factorization_data(
    algebra: &FreeAlgebra,
    f: &MonicPoly,
    blocks: &[usize],
) -> Result<Vec<ClosureDatum>> {
    let ring = algebra.ring().clone();
    let total: usize = blocks.iter().sum();
    if total != f.degree() {
        return Err(Error::Dimension(
            "blocks must sum to the polynomial degree".into(),
        ));
    }
    let factorizations: Vec<Vec<MonicPoly>> = if ring.is_enumerable() {
        let card = ring.cardinality().unwrap();
        if card
            .checked_pow(total as u32)
            .is_none_or(|t| t > 10_000_000)
        {
            return Err(Error::guard("factorization search space", "10^7"));
        }
        let elems = ring.enumerate_elements()?;
        let mut out: Vec<Vec<MonicPoly>> = vec![Vec::new()];
        for &b in blocks {
            let candidates = all_monic_of_degree(&ring, &elems, b, f.var());
            let mut next = Vec::new();
            for partial in &out {
                for cand in &candidates {
                    let mut ext = partial.clone();
                    ext.push(cand.clone());
                    next.push(ext);
                }
            }
            out = next;
        }
        out.into_iter()
            .filter(|factors| {
                let mut prod = factors[0].clone();
                for g in &factors[1..] {
                    prod = prod.mul(g);
                }
                prod.sks() == f.sks()
            })
            .collect()
    } else if blocks.iter().all(|&b| b == 1) {
        let mut sequences: Vec<Vec<RingElem>> = Vec::new();
        collect_root_sequences(f, &ring, &mut Vec::new(), &mut sequences)?;
        sequences
            .into_iter()
            .map(|seq| {
                seq.iter()
                    .map(|r| MonicPoly::new(ring.clone(), f.var(), vec![r.clone()]))
                    .collect()
            })
            .collect()
    } else {
        return Err(Error::capability(format!(
            "factorization enumeration over {ring} supports only all-linear profiles"
        )));
    };
    factorizations
        .into_iter()
        .map(|factors| {
            let fact = FactorizationDatum::new(f.clone(), factors)?;
            factorization_closure(&ring, &fact)
        })
        .collect()
}

fn all_monic_of_degree(
    ring: &Ring,
    elems: &[RingElem],
    degree: usize,
    var: &str,
) -> Vec<MonicPoly> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; degree];
    'outer: loop {
        let sks: Vec<RingElem> = idx.iter().map(|&i| elems[i].clone()).collect();
        out.push(MonicPoly::new(ring.clone(), var, sks));
        let mut k = 0;
        loop {
            if k == degree {
                break 'outer;
            }
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
    out
}

/// Pull a closure datum back along a universally norm-preserving
/// homomorphism of equal-rank algebras.
pub fn pullback_along_unp(datum: &ClosureDatum, hom: &AlgHom) -> Result<ClosureDatum> {
    if !is_universally_norm_preserving(hom)? {
        return Err(Error::Precondition(
            "pullback needs a universally norm-preserving homomorphism".into(),
        ));
    }
    let source = hom.source().clone();
    let n = source.rank();
    let src_tensor = TensorAlgebra::new(source, n)?;
    let src_basis = OrbitBasis::new(src_tensor.clone(), datum.group().clone())?;
    let tgt_tensor = datum.basis().tensor();
    let values: Vec<RingElem> = src_basis
        .orbits()
        .iter()
        .map(|orbit| {
            let mut acc = tgt_tensor.as_algebra().zero_elem();
            for &m in &orbit.members {
                let tuple = src_tensor.decode(m);
                let factors: Vec<AlgElem> = tuple
                    .iter()
                    .map(|&i| hom.apply(&hom.source().basis_elem(i)))
                    .collect();
                acc = &acc + &tgt_tensor.pure_tensor(&factors);
            }
            let inv = expand_invariant(&acc, datum.basis())?;
            datum.eval(&inv)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClosureDatum::new(src_basis, values))
}

// ---------------------------------------------------------------------------
// Benign pairs.
// ---------------------------------------------------------------------------

/// Check the two sufficient conditions for `(R, G)` to be a benign pair:
/// `R` reduced, or `|G|` a non-zerodivisor in `R`. Returns the reason, or
/// `None` when neither sufficient condition holds (which decides nothing).
pub fn benign_pair_sufficient(ring: &Ring, group: &PermGroup) -> Result<Option<String>> {
    if ring_is_reduced(ring)? {
        return Ok(Some("the base ring is reduced".into()));
    }
    let g = ring.from_i64(group.order() as i64);
    if ring.is_enumerable() {
        let nzd = ring
            .enumerate_elements()?
            .iter()
            .all(|a| a.is_zero() || !(&g * a).is_zero());
        if nzd {
            return Ok(Some(format!(
                "|G| = {} is a non-zerodivisor",
                group.order()
            )));
        }
        return Ok(None);
    }
    match ring.desc() {
        RingDesc::Integers | RingDesc::Rationals => Ok(Some(format!(
            "|G| = {} is a non-zerodivisor",
            group.order()
        ))),
        _ => Ok(None),
    }
}

fn ring_is_reduced(ring: &Ring) -> Result<bool> {
    match ring.desc() {
        RingDesc::Integers | RingDesc::Rationals | RingDesc::PrimeField(_) => Ok(true),
        RingDesc::IntegersMod(m) => {
            let mut m = *m;
            let mut d = 2;
            while d * d <= m {
                if m % (d * d) == 0 {
                    return Ok(false);
                }
                while m % d == 0 {
                    m /= d;
                }
                d += 1;
            }
            Ok(true)
        }
        _ => {
            if !ring.is_enumerable() {
                return Err(Error::capability(format!(
                    "cannot decide reducedness of {ring}"
                )));
            }
            let card = ring.cardinality().unwrap();
            let mut pow = 1u32;
            while (1u128 << pow) < card {
                pow += 1;
            }
            for a in ring.enumerate_elements()? {
                if a.is_zero() {
                    continue;
                }
                // a is nilpotent iff a^(2^k) = 0 for 2^k ≥ |R|
                let mut sq = a.clone();
                for _ in 0..pow {
                    sq = &sq * &sq;
                }
                if sq.is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
