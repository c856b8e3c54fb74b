//! Module-level invariant suites: exact algebraic identities on randomized
//! inputs, seeded for determinism.

use gclosure::algebra::{char_poly, make_product, mult_matrix, norm, trace, AlgElem, FreeAlgebra};
use gclosure::catalog::{cubic_resolvent, qrs_decompose};
use gclosure::closure::{
    base_change, base_change_algebra, closure_algebra, enumerate_closure_data,
    quotients_isomorphic, resolvent_algebra, RingMap,
};
use gclosure::ferrand::{ferrand_eval, ferrand_table};
use gclosure::ring::{
    determinant, find_monic_roots, normal_form, parse_elem, parse_monic_poly, parse_ring,
    poly_exact_divide, Matrix, MonicPoly, Ring, RingElem,
};
use gclosure::tensor::{
    elementary_invariant, expand_invariant, OrbitBasis, PermGroup, TensorAlgebra,
};

struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn small(&mut self, bound: u64) -> i64 {
        (self.next() % bound) as i64
    }

    fn signed(&mut self, bound: i64) -> i64 {
        (self.next() % (2 * bound as u64 + 1)) as i64 - bound
    }
}

fn random_elem(rng: &mut Rng, ring: &Ring) -> RingElem {
    use gclosure::ring::RingDesc;
    match ring.desc() {
        RingDesc::Integers => ring.from_i64(rng.signed(20)),
        RingDesc::Rationals => {
            let num = ring.from_i64(rng.signed(12));
            let den = ring.from_i64(rng.small(6) + 1);
            num.exact_div(&den).unwrap()
        }
        RingDesc::IntegersMod(m) | RingDesc::PrimeField(m) => ring.from_i64(rng.small(*m) as i64),
        RingDesc::QuotExt { .. } => {
            let a = rng.signed(5);
            let b = rng.signed(5);
            let u = ring.generator(0);
            &ring.from_i64(a) + &u.scale_by(b)
        }
        RingDesc::PolyExt { vars, .. } => {
            let mut acc = ring.from_i64(rng.signed(4));
            for i in 0..vars.len() {
                let c = ring.from_i64(rng.signed(4));
                let g = ring.generator(i).pow(1 + (rng.next() % 2));
                acc = &acc + &(&c * &g);
            }
            acc
        }
    }
}

trait ScaleBy {
    fn scale_by(&self, k: i64) -> RingElem;
}

impl ScaleBy for RingElem {
    fn scale_by(&self, k: i64) -> RingElem {
        self * &self.ring().from_i64(k)
    }
}

#[test]
fn determinant_is_multiplicative_over_every_ring_kind() {
    let rings = [
        parse_ring("Z").unwrap(),
        parse_ring("Q").unwrap(),
        parse_ring("Z/9").unwrap(),
        parse_ring("GF(7)").unwrap(),
        parse_ring("Z[u]/(u^2-5)").unwrap(),
        parse_ring("Z[a]").unwrap(),
    ];
    let mut rng = Rng(7);
    for ring in &rings {
        for _ in 0..20 {
            let n = 2 + (rng.next() % 2) as usize;
            let rand_matrix = |rng: &mut Rng| {
                let rows = (0..n)
                    .map(|_| (0..n).map(|_| random_elem(rng, ring)).collect())
                    .collect();
                Matrix::from_rows(ring.clone(), rows)
            };
            let m1 = rand_matrix(&mut rng);
            let m2 = rand_matrix(&mut rng);
            let lhs = determinant(&m1.mul(&m2)).unwrap();
            let rhs = &determinant(&m1).unwrap() * &determinant(&m2).unwrap();
            assert_eq!(lhs, rhs, "det multiplicativity over {ring}");
        }
    }
}

#[test]
fn smith_factors_multiply_to_the_determinant() {
    let z = parse_ring("Z").unwrap();
    let mut rng = Rng(11);
    for _ in 0..50 {
        let n = 2 + (rng.next() % 2) as usize;
        let rows: Vec<Vec<RingElem>> = (0..n)
            .map(|_| (0..n).map(|_| z.from_i64(rng.signed(6))).collect())
            .collect();
        let m = Matrix::from_rows(z.clone(), rows);
        let det = determinant(&m).unwrap().to_bigint().unwrap();
        let nf = normal_form(&m).unwrap();
        let product = nf
            .invariant_factors()
            .unwrap()
            .iter()
            .fold(num_bigint_one(), |acc, d| acc * d);
        if det.sign() == num_bigint::Sign::NoSign {
            assert!(nf.invariant_factors().unwrap().len() < n);
        } else {
            assert_eq!(product, det.magnitude().clone().into());
        }
    }
}

fn num_bigint_one() -> num_bigint::BigInt {
    num_bigint::BigInt::from(1)
}

#[test]
fn canonical_forms_round_trip_through_text() {
    let rings = [
        parse_ring("Z").unwrap(),
        parse_ring("Q").unwrap(),
        parse_ring("Z/9").unwrap(),
        parse_ring("GF(7)").unwrap(),
        parse_ring("Z[u]/(u^2-5)").unwrap(),
        parse_ring("Z[a,b]").unwrap(),
        parse_ring("GF(2)[x]/(x^3+x+1)").unwrap(),
    ];
    let mut rng = Rng(13);
    for ring in &rings {
        for _ in 0..25 {
            let e = random_elem(&mut rng, ring);
            let text = e.to_string();
            let back = parse_elem(ring, &text).unwrap();
            assert_eq!(back, e, "round trip over {ring} via `{text}`");
            assert_eq!(back.to_string(), text);
            // additive inverses cancel exactly
            assert!((&e + &(-&e)).is_zero());
        }
    }
}

#[test]
fn roots_satisfy_and_exhaust() {
    let mut rng = Rng(17);
    let rings = [
        parse_ring("GF(5)").unwrap(),
        parse_ring("Z/9").unwrap(),
        parse_ring("GF(2)[x]/(x^3+x+1)").unwrap(),
    ];
    for ring in &rings {
        for _ in 0..25 {
            let deg = 2 + (rng.next() % 2) as usize;
            let sks: Vec<RingElem> = (0..deg).map(|_| random_elem(&mut rng, ring)).collect();
            let f = MonicPoly::new(ring.clone(), "t", sks);
            let roots = find_monic_roots(&f, ring).unwrap();
            for r in &roots {
                assert!(f.eval(r).is_zero());
            }
            let exhaustive = ring
                .enumerate_elements()
                .unwrap()
                .into_iter()
                .filter(|e| f.eval(e).is_zero())
                .count();
            assert_eq!(roots.len(), exhaustive);
        }
    }
}

#[test]
fn exact_division_round_trips_random_products() {
    let ring = parse_ring("Z[x1,x2,x3]").unwrap();
    let mut rng = Rng(19);
    for _ in 0..40 {
        let a = random_elem(&mut rng, &ring);
        let b = random_elem(&mut rng, &ring);
        if b.is_zero() {
            continue;
        }
        let q = poly_exact_divide(&(&a * &b), &b).unwrap();
        assert_eq!(q, a);
    }
}

#[test]
fn norm_is_multiplicative_and_trace_additive() {
    let mut rng = Rng(23);
    for ring_s in ["GF(5)", "Z/9", "Z"] {
        let ring = parse_ring(ring_s).unwrap();
        for _ in 0..20 {
            let deg = 2 + (rng.next() % 2) as usize;
            let sks: Vec<RingElem> = (0..deg).map(|_| ring.from_i64(rng.signed(4))).collect();
            let f = MonicPoly::new(ring.clone(), "x", sks);
            let alg = FreeAlgebra::monogenic(ring.clone(), &f);
            let a = alg.from_coords((0..deg).map(|_| ring.from_i64(rng.signed(4))).collect());
            let b = alg.from_coords((0..deg).map(|_| ring.from_i64(rng.signed(4))).collect());
            assert_eq!(norm(&(&a * &b)), &norm(&a) * &norm(&b));
            assert_eq!(trace(&(&a + &b)), &trace(&a) + &trace(&b));
        }
    }
}

#[test]
fn product_char_poly_factors_blockwise() {
    let gf5 = parse_ring("GF(5)").unwrap();
    let a1 = FreeAlgebra::monogenic(gf5.clone(), &parse_monic_poly(&gf5, "x^2-2").unwrap());
    let a2 = FreeAlgebra::trivial(gf5.clone(), 1);
    let prod = make_product(&[a1.clone(), a2.clone()]).unwrap();
    let mut rng = Rng(29);
    for _ in 0..30 {
        let u = a1.from_coords(vec![
            gf5.from_i64(rng.small(5) as i64),
            gf5.from_i64(rng.small(5) as i64),
        ]);
        let v = a2.from_coords(vec![gf5.from_i64(rng.small(5) as i64)]);
        let mut coords = u.coords();
        coords.extend(v.coords());
        let w = prod.algebra.from_coords(coords);
        let chi_w = char_poly(&w);
        let chi_uv = char_poly(&u).mul(&char_poly(&v));
        assert_eq!(chi_w.sks(), chi_uv.sks());
    }
}

#[test]
fn elementary_symmetric_generating_function() {
    // Π_i (λ − a^{(i)}) = Σ_k (−1)^k e_k(a) λ^{n−k} inside A^{⊗n}[λ]
    let mut rng = Rng(31);
    for ring_s in ["GF(3)", "GF(5)"] {
        let ring = parse_ring(ring_s).unwrap();
        let pring = Ring::poly_ext(ring.clone(), vec!["lam".into()]).unwrap();
        for _ in 0..10 {
            let n = 2 + (rng.next() % 2) as usize;
            let sks: Vec<RingElem> = (0..n).map(|_| random_elem(&mut rng, &ring)).collect();
            let f = MonicPoly::new(ring.clone(), "x", sks);
            let alg = FreeAlgebra::monogenic(ring.clone(), &f);
            let lifted = alg.map_ring(pring.clone(), |e| pring.embed(e)).unwrap();
            let tensor = TensorAlgebra::new(lifted.clone(), n).unwrap();
            let basis = OrbitBasis::new(tensor.clone(), PermGroup::symmetric(n)).unwrap();
            let a = lifted.from_coords(
                (0..n)
                    .map(|_| pring.embed(&random_elem(&mut rng, &ring)))
                    .collect(),
            );
            let lam = pring.generator(0);
            // left: the product of (λ·1 − a^{(i)})
            let mut lhs = tensor.as_algebra().unit_elem();
            for i in 1..=n {
                let factor = &tensor.as_algebra().unit_elem().scale(&lam)
                    - &tensor.conjugate_embed(&a, i).unwrap();
                lhs = &lhs * &factor;
            }
            // right: Σ_k (−1)^k e_k(a)·λ^{n−k}
            let mut rhs = tensor.as_algebra().zero_elem();
            for k in 0..=n {
                let ek = elementary_invariant(&basis, &a, k).unwrap();
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let coeff = &pring.from_i64(sign) * &lam.pow((n - k) as u64);
                rhs = &rhs + &ek.expand().scale(&coeff);
            }
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn ferrand_is_multiplicative_on_invariants() {
    let mut rng = Rng(37);
    for ring_s in ["GF(3)", "Z/4", "GF(5)"] {
        let ring = parse_ring(ring_s).unwrap();
        for _ in 0..15 {
            let n = 2 + (rng.next() % 2) as usize;
            let sks: Vec<RingElem> = (0..n).map(|_| random_elem(&mut rng, &ring)).collect();
            let f = MonicPoly::new(ring.clone(), "x", sks);
            let alg = FreeAlgebra::monogenic(ring.clone(), &f);
            let map = ferrand_table(&alg).unwrap();
            let a = alg.from_coords((0..n).map(|_| random_elem(&mut rng, &ring)).collect());
            let b = alg.from_coords((0..n).map(|_| random_elem(&mut rng, &ring)).collect());
            let u = elementary_invariant(map.basis(), &a, 1 + (rng.next() % n as u64) as usize)
                .unwrap();
            let v = elementary_invariant(map.basis(), &b, 1 + (rng.next() % n as u64) as usize)
                .unwrap();
            let uv = u.mul(&v).unwrap();
            let lhs = ferrand_eval(&map, &uv).unwrap();
            let rhs = &ferrand_eval(&map, &u).unwrap() * &ferrand_eval(&map, &v).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn ferrand_is_the_unique_hom_sending_ek_to_sk() {
    // desk-scale uniqueness: enumerate every linear functional on the
    // orbit basis, filter to ring homomorphisms sending each e_k(a) to
    // s_k(a), and find exactly the Ferrand table
    for (ring_s, poly_s) in [
        ("GF(2)", "x^2+x+1"),
        ("GF(3)", "x^2-2"),
        ("GF(2)", "x^3+x+1"),
    ] {
        let ring = parse_ring(ring_s).unwrap();
        let f = parse_monic_poly(&ring, poly_s).unwrap();
        let alg = FreeAlgebra::monogenic(ring.clone(), &f);
        let n = alg.rank();
        let map = ferrand_table(&alg).unwrap();
        let basis = map.basis();
        let orbit_count = basis.orbit_count();
        let elems = ring.enumerate_elements().unwrap();
        let all_elems: Vec<AlgElem> = {
            let mut out = Vec::new();
            let mut idx = vec![0usize; n];
            'outer: loop {
                out.push(alg.from_coords(idx.iter().map(|&i| elems[i].clone()).collect()));
                let mut k = 0;
                loop {
                    if k == n {
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
        };
        // precompute e_k(a) expansions and s_k(a) for every element
        let mut conditions = Vec::new();
        for a in &all_elems {
            let chi = char_poly(a);
            for k in 1..=n {
                let ek = elementary_invariant(basis, a, k).unwrap();
                conditions.push((ek, chi.sk(k).clone()));
            }
        }
        let mut matches = 0;
        let mut idx = vec![0usize; orbit_count];
        'candidates: loop {
            let values: Vec<RingElem> = idx.iter().map(|&i| elems[i].clone()).collect();
            let candidate_ok = (|| {
                // homomorphism laws on the orbit basis
                let unit =
                    expand_invariant(&basis.tensor().as_algebra().unit_elem(), basis).unwrap();
                let eval = |inv: &gclosure::tensor::InvariantElem| {
                    let mut acc = ring.zero();
                    for (c, v) in inv.coords().iter().zip(values.iter()) {
                        acc = &acc + &(c * v);
                    }
                    acc
                };
                if !eval(&unit).is_one() {
                    return false;
                }
                for i in 0..orbit_count {
                    for j in i..orbit_count {
                        let prod = basis.product_expansion_elems(i, j).unwrap();
                        let mut lhs = ring.zero();
                        for (c, v) in prod.iter().zip(values.iter()) {
                            lhs = &lhs + &(c * v);
                        }
                        if lhs != &values[i] * &values[j] {
                            return false;
                        }
                    }
                }
                for (ek, sk) in &conditions {
                    if &eval(ek) != sk {
                        return false;
                    }
                }
                true
            })();
            if candidate_ok {
                assert_eq!(values, map.values(), "a stray functional matched");
                matches += 1;
            }
            let mut k = 0;
            loop {
                if k == orbit_count {
                    break 'candidates;
                }
                idx[k] += 1;
                if idx[k] < elems.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
        assert_eq!(matches, 1, "uniqueness fails for {poly_s} over {ring_s}");
    }
}

#[test]
fn base_change_commutes_with_closure() {
    // Z-datum for a split quadratic, reduced mod 5: the closure of the
    // image is the image of the closure (equal rank, isomorphic presentation)
    let z = parse_ring("Z").unwrap();
    let f = parse_monic_poly(&z, "x^2-1").unwrap();
    let a = FreeAlgebra::monogenic(z.clone(), &f);
    let data = enumerate_closure_data(&a, &PermGroup::trivial(2)).unwrap();
    assert_eq!(data.len(), 2);
    let gf5 = parse_ring("GF(5)").unwrap();
    let map = RingMap::mod_reduce(z.clone(), gf5.clone()).unwrap();
    for d in &data {
        let q_z = closure_algebra(d).unwrap();
        let moved = base_change(d, &map).unwrap();
        let q_p = closure_algebra(&moved).unwrap();
        assert_eq!(q_z.rank(), q_p.rank());
        // reduce the integral closure presentation and compare
        let reduced_alg = base_change_algebra(&q_z.as_free_algebra().unwrap(), &map).unwrap();
        let moved_alg = q_p.as_free_algebra().unwrap();
        assert_eq!(reduced_alg.rank(), moved_alg.rank());
        // both are split rank-1: structure constants match exactly
        assert_eq!(reduced_alg, moved_alg);
    }
}

#[test]
fn lambda_class_char_poly_is_the_cubic_resolvent() {
    let mut rng = Rng(41);
    for p in [3u64, 5, 7] {
        let ring = Ring::prime_field(p).unwrap();
        for _ in 0..6 {
            let sks: Vec<RingElem> = (0..4).map(|_| ring.from_i64(rng.small(p) as i64)).collect();
            let f = MonicPoly::new(ring.clone(), "x", sks);
            let alg = FreeAlgebra::monogenic(ring.clone(), &f);
            let res = resolvent_algebra(&alg, &PermGroup::dihedral4()).unwrap();
            if !(res.quotient.is_free() && res.quotient.support().len() == 3) {
                continue;
            }
            let tensor = res.g_basis.tensor();
            let x = alg.generator_elem().unwrap();
            let l13 =
                &tensor.conjugate_embed(&x, 1).unwrap() * &tensor.conjugate_embed(&x, 3).unwrap();
            let l24 =
                &tensor.conjugate_embed(&x, 2).unwrap() * &tensor.conjugate_embed(&x, 4).unwrap();
            let lambda = expand_invariant(&(&l13 + &l24), &res.g_basis).unwrap();
            let q_alg = res.quotient.as_free_algebra().unwrap();
            let cls = res.quotient.class_coords(&lambda.coords().to_vec());
            let chi = char_poly(&q_alg.from_coords(cls));
            let m = cubic_resolvent(&f).unwrap();
            assert_eq!(chi.sks(), m.sks(), "over GF({p}) for {f}");
        }
    }
}

#[test]
fn qrs_reassembles_on_random_d4_invariants() {
    // random D4-invariant polynomials of degree ≤ 8 built from Λ and the
    // elementary symmetric polynomials
    let zx = parse_ring("Z[x1,x2,x3,x4]").unwrap();
    let l = parse_elem(&zx, "x1*x3+x2*x4").unwrap();
    let e1 = parse_elem(&zx, "x1+x2+x3+x4").unwrap();
    let e2 = parse_elem(&zx, "x1*x2+x1*x3+x1*x4+x2*x3+x2*x4+x3*x4").unwrap();
    let e4 = parse_elem(&zx, "x1*x2*x3*x4").unwrap();
    let mut rng = Rng(43);
    for _ in 0..20 {
        let c1 = zx.from_i64(rng.signed(3));
        let c2 = zx.from_i64(rng.signed(3));
        let c3 = zx.from_i64(rng.signed(3));
        let mut p = &(&l.pow(1 + rng.next() % 3) * &c1) + &(&e2.pow(rng.next() % 2) * &c2);
        p = &p + &(&(&e1.pow(rng.next() % 3) * &e4.pow(rng.next() % 2)) * &c3);
        if p.is_zero() {
            continue;
        }
        let (q, r, s) = qrs_decompose(&p).unwrap();
        let back = &(&(&q * &l.pow(2)) + &(&r * &l)) + &s;
        assert_eq!(back, p, "reassembly fails");
    }
}

#[test]
fn irreducible_quartic_has_no_intransitive_data() {
    let gf2 = parse_ring("GF(2)").unwrap();
    let f = parse_monic_poly(&gf2, "x^4+x+1").unwrap();
    // irreducibility check by exhaustive factor products over GF(2)
    let quadratics: Vec<MonicPoly> = (0..4)
        .map(|i| {
            MonicPoly::new(
                gf2.clone(),
                "x",
                vec![gf2.from_i64(i & 1), gf2.from_i64((i >> 1) & 1)],
            )
        })
        .collect();
    assert!(find_monic_roots(&f, &gf2).unwrap().is_empty());
    for g in &quadratics {
        for h in &quadratics {
            assert_ne!(g.mul(h).sks(), f.sks(), "x^4+x+1 factored unexpectedly");
        }
    }
    let a = FreeAlgebra::monogenic(gf2.clone(), &f);
    for blocks in [vec![1, 3], vec![2, 2], vec![1, 1, 2], vec![1, 1, 1, 1]] {
        let group = PermGroup::product_symmetric(&blocks);
        let data = enumerate_closure_data(&a, &group).unwrap();
        assert!(
            data.is_empty(),
            "intransitive data exist for blocks {blocks:?}"
        );
    }
}

#[test]
fn closure_quotients_compare_as_isomorphic_when_they_are() {
    let gf5 = parse_ring("GF(5)").unwrap();
    let t = FreeAlgebra::trivial(gf5.clone(), 3);
    let data = enumerate_closure_data(&t, &PermGroup::alternating(3)).unwrap();
    let q0 = closure_algebra(&data[0]).unwrap();
    let q1 = closure_algebra(&data[1]).unwrap();
    assert!(quotients_isomorphic(&q0, &q1).unwrap());
}

#[test]
fn mult_matrix_columns_are_products() {
    let mut rng = Rng(47);
    let gf7 = parse_ring("GF(7)").unwrap();
    let f = parse_monic_poly(&gf7, "x^3+2*x+1").unwrap();
    let alg = FreeAlgebra::monogenic(gf7.clone(), &f);
    for _ in 0..20 {
        let a = alg.from_coords((0..3).map(|_| gf7.from_i64(rng.small(7) as i64)).collect());
        let m = mult_matrix(&a);
        for j in 0..3 {
            let col = &a * &alg.basis_elem(j);
            for i in 0..3 {
                assert_eq!(m.get(i, j), col.coord(i));
            }
        }
    }
}
