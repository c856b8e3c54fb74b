//! The canonical homomorphism `(A^⊗n)^{Sₙ} → R` for a free rank-n algebra,
//! tabulated on the orbit basis.

use crate::algebra::{generic_mult_matrix, norm, FreeAlgebra};
use crate::error::{Error, Result};
use crate::ring::{determinant, Monomial, Payload, Ring, RingElem};
use crate::tensor::{expand_invariant, InvariantElem, OrbitBasis, PermGroup, TensorAlgebra};

/// Values of the canonical symmetric-invariant homomorphism on every orbit
/// of size-n multisets.
///
/// The table is computed from the generic element: with `a = Σ t_i θ_i` over
/// the polynomial extension, `a^{⊗n} = Σ_μ t^μ e_μ`, and applying the map to
/// both sides forces the value on `e_μ` to be the `t^μ`-coefficient of
/// `det(Σ t_i M_{θ_i})`. The defining properties (norms of diagonals, base
/// change) pin the whole table this way because the monomials are a basis.
pub struct FerrandMap {
    basis: OrbitBasis,
    values: Vec<RingElem>,
}

impl FerrandMap {
    pub fn algebra(&self) -> &FreeAlgebra {
        self.basis.tensor().base()
    }

    pub fn basis(&self) -> &OrbitBasis {
        &self.basis
    }

    pub fn values(&self) -> &[RingElem] {
        &self.values
    }

    pub fn value_on_orbit(&self, orbit: usize) -> &RingElem {
        &self.values[orbit]
    }
}

/// Tabulate the map on every multiset orbit of the Sₙ basis.
pub fn ferrand_table(algebra: &FreeAlgebra) -> Result<FerrandMap> {
    let n = algebra.rank();
    let ring = algebra.ring().clone();
    let tensor = TensorAlgebra::new(algebra.clone(), n)?;
    let basis = OrbitBasis::new(tensor, PermGroup::symmetric(n))?;

    let vars: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
    let pring = Ring::poly_ext(ring.clone(), vars)?;
    let generic = generic_mult_matrix(algebra, &pring, None);
    let det = determinant(&generic)?;
    let sp = match det.payload() {
        Payload::Poly(sp) => sp.clone(),
        _ => unreachable!("determinant over a polynomial extension"),
    };

    let mut values = Vec::with_capacity(basis.orbit_count());
    for orbit in basis.orbits() {
        // multiset exponent vector of the representative tuple
        let mut exps = vec![0u32; n];
        for &i in &orbit.rep {
            exps[i] += 1;
        }
        let mono = Monomial(exps);
        let coeff = sp
            .terms
            .get(&mono)
            .cloned()
            .unwrap_or_else(|| ring.zero_p());
        values.push(RingElem::from_payload(ring.clone(), coeff));
    }
    let map = FerrandMap { basis, values };

    // Φ(1) = 1 and Φ(θ_i ⊗ … ⊗ θ_i) = N(θ_i) hold by construction; check
    // them anyway, loudly.
    let unit = map.basis.tensor().as_algebra().unit_elem();
    let unit_inv = expand_invariant(&unit, &map.basis)?;
    if !ferrand_eval(&map, &unit_inv)?.is_one() {
        return Err(Error::Internal("Ferrand table does not send 1 to 1".into()));
    }
    for i in 0..n {
        let diag = map.basis.orbit_of_tuple(&vec![i; n]);
        if map.values[diag] != norm(&algebra.basis_elem(i)) {
            return Err(Error::Internal(format!(
                "Ferrand value on the diagonal orbit of θ{i} is not the norm"
            )));
        }
    }
    Ok(map)
}

/// Linear extension of the table to any Sₙ-invariant element.
pub fn ferrand_eval(map: &FerrandMap, v: &InvariantElem) -> Result<RingElem> {
    if v.basis() != &map.basis {
        return Err(Error::Dimension(
            "invariant element over a different orbit basis".into(),
        ));
    }
    let ring = map.algebra().ring().clone();
    let mut acc = ring.zero();
    for (c, val) in v.coords().iter().zip(map.values.iter()) {
        if !c.is_zero() {
            acc = &acc + &(c * val);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::char_poly;
    use crate::ring::{parse_elem, parse_monic_poly, parse_ring};
    use crate::tensor::{elementary_invariant, gamma};

    #[test]
    fn trivial_algebra_table_is_the_bijection_projection() {
        // R^2 with idempotent basis: det(t1·M1 + t2·M2) = t1·t2
        let gf3 = parse_ring("GF(3)").unwrap();
        let r2 = FreeAlgebra::trivial(gf3.clone(), 2);
        let map = ferrand_table(&r2).unwrap();
        for (orbit, value) in map.basis().orbits().iter().zip(map.values()) {
            if orbit.rep == vec![0, 1] {
                assert!(value.is_one());
            } else {
                assert!(value.is_zero());
            }
        }
    }

    #[test]
    fn symbolic_cubic_values() {
        let zab = parse_ring("Z[a,b]").unwrap();
        let f = parse_monic_poly(&zab, "x^3+a*x+b").unwrap();
        let alg = FreeAlgebra::monogenic(zab.clone(), &f);
        let map = ferrand_table(&alg).unwrap();
        // Φ on the e_3(x) orbit (= x⊗x⊗x) is the norm of x, which is −b
        let diag = map.basis().orbit_of_tuple(&[1, 1, 1]);
        assert_eq!(map.value_on_orbit(diag), &parse_elem(&zab, "-b").unwrap());
        // Φ on the diagonal orbit of the unit is 1
        let unit_orbit = map.basis().orbit_of_tuple(&[0, 0, 0]);
        assert!(map.value_on_orbit(unit_orbit).is_one());
    }

    #[test]
    fn elementary_invariants_evaluate_to_char_poly_coefficients() {
        let zab = parse_ring("Z[a,b]").unwrap();
        let f = parse_monic_poly(&zab, "x^3+a*x+b").unwrap();
        let alg = FreeAlgebra::monogenic(zab.clone(), &f);
        let map = ferrand_table(&alg).unwrap();
        let x = alg.generator_elem().unwrap();
        let chi = char_poly(&x);
        for k in 1..=3 {
            let ek = elementary_invariant(map.basis(), &x, k).unwrap();
            assert_eq!(&ferrand_eval(&map, &ek).unwrap(), chi.sk(k), "e_{k}");
        }
    }

    #[test]
    fn gamma_sums_match_the_worked_cubic_example() {
        let zab = parse_ring("Z[a,b]").unwrap();
        let f = parse_monic_poly(&zab, "x^3+a*x+b").unwrap();
        let alg = FreeAlgebra::monogenic(zab.clone(), &f);
        let map = ferrand_table(&alg).unwrap();
        let tensor = map.basis().tensor().clone();
        let a3 = OrbitBasis::new(tensor, PermGroup::alternating(3)).unwrap();
        let args = [alg.basis_elem(0), alg.basis_elem(1), alg.basis_elem(2)];
        let (g, gp) = gamma(&a3, &args).unwrap();
        // γ + γ' and γ·γ' are symmetric; transport them to the Sₙ basis
        let sum = expand_invariant(&(&g.expand() + &gp.expand()), map.basis()).unwrap();
        let prod = expand_invariant(&(&g.expand() * &gp.expand()), map.basis()).unwrap();
        assert_eq!(
            ferrand_eval(&map, &sum).unwrap(),
            parse_elem(&zab, "3*b").unwrap()
        );
        assert_eq!(
            ferrand_eval(&map, &prod).unwrap(),
            parse_elem(&zab, "a^3+9*b^2").unwrap()
        );
    }

    #[test]
    fn eval_rejects_mismatched_bases() {
        let gf3 = parse_ring("GF(3)").unwrap();
        let f = parse_monic_poly(&gf3, "x^2+1").unwrap();
        let alg = FreeAlgebra::monogenic(gf3.clone(), &f);
        let map = ferrand_table(&alg).unwrap();
        let other = FreeAlgebra::trivial(gf3, 2);
        let other_map = ferrand_table(&other).unwrap();
        let unit = other_map.basis().tensor().as_algebra().unit_elem();
        let inv = expand_invariant(&unit, other_map.basis()).unwrap();
        assert!(ferrand_eval(&map, &inv).is_err());
    }
}
