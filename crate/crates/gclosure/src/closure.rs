//! Closure data as first-class values: verification, induction, the Sₙ
//! action, base change, resolvent and closure algebras, faithfulness, and a
//! brute-force enumeration oracle.

use num_bigint::BigInt;

use crate::algebra::FreeAlgebra;
use crate::error::{Error, Result};
use crate::ferrand::{ferrand_table, FerrandMap};
use crate::ring::normal::{smith_invariant_factors, ColBound, Reducer};
use crate::ring::{Payload, Ring, RingDesc, RingElem};
use crate::tensor::{expand_invariant, InvariantElem, OrbitBasis, Perm, PermGroup, TensorAlgebra};

/// Ambient tensor dimension above which `closure_algebra` refuses to run
/// without an explicit override (n^n with n = 4).
pub const CLOSURE_DIM_GUARD: usize = 256;

/// A G-closure datum, stored as the values of the homomorphism
/// `(A^⊗n)^G → R` on the orbit basis.
#[derive(Clone)]
pub struct ClosureDatum {
    basis: OrbitBasis,
    values: Vec<RingElem>,
}

impl PartialEq for ClosureDatum {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.values == other.values
    }
}

impl Eq for ClosureDatum {}

impl std::fmt::Debug for ClosureDatum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ClosureDatum({} on rank-{} algebra, {} orbits)",
            self.group().name(),
            self.algebra().rank(),
            self.values.len()
        )
    }
}

impl ClosureDatum {
    pub fn new(basis: OrbitBasis, values: Vec<RingElem>) -> ClosureDatum {
        assert_eq!(values.len(), basis.orbit_count());
        ClosureDatum { basis, values }
    }

    pub fn algebra(&self) -> &FreeAlgebra {
        self.basis.tensor().base()
    }

    pub fn group(&self) -> &PermGroup {
        self.basis.group()
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

    /// Linear extension of the orbit-basis values.
    pub fn eval(&self, v: &InvariantElem) -> Result<RingElem> {
        if v.basis() != &self.basis {
            return Err(Error::Dimension(
                "invariant element over a different orbit basis".into(),
            ));
        }
        let ring = self.algebra().ring().clone();
        let mut acc = ring.zero();
        for (c, val) in v.coords().iter().zip(self.values.iter()) {
            if !c.is_zero() {
                acc = &acc + &(c * val);
            }
        }
        Ok(acc)
    }
}

/// The canonical Sₙ-closure datum: the Ferrand table itself.
pub fn canonical_sn_datum(map: &FerrandMap) -> ClosureDatum {
    ClosureDatum::new(map.basis().clone(), map.values().to_vec())
}

/// Check the three closure-datum laws exhaustively over the orbit basis:
/// the unit maps to 1, the values are multiplicative on orbit-sum pairs, and
/// summing over the G-orbits inside each Sₙ-orbit recovers the Ferrand table.
/// The error names the law and the orbits on which it fails.
pub fn verify_closure_datum(datum: &ClosureDatum) -> Result<()> {
    let basis = datum.basis();
    let tensor = basis.tensor();

    // unit law
    let unit = expand_invariant(&tensor.as_algebra().unit_elem(), basis)?;
    let unit_val = datum.eval(&unit)?;
    if !unit_val.is_one() {
        return Err(Error::Precondition(format!(
            "closure datum sends 1 to {unit_val}, not 1"
        )));
    }

    // multiplicativity on orbit-sum pairs
    let ring = datum.algebra().ring().clone();
    for i in 0..basis.orbit_count() {
        for j in i..basis.orbit_count() {
            let expansion = basis.product_expansion(i, j)?;
            let mut lhs = ring.zero();
            for (c, v) in expansion.iter().zip(datum.values()) {
                if !ring.is_zero_p(c) {
                    lhs = &lhs + &(&RingElem::from_payload(ring.clone(), c.clone()) * v);
                }
            }
            let rhs = datum.value_on_orbit(i) * datum.value_on_orbit(j);
            if lhs != rhs {
                return Err(Error::Precondition(format!(
                    "closure datum is not multiplicative on orbits {i} and {j}: φ(e_i·e_j) = {lhs} but φ(e_i)φ(e_j) = {rhs}"
                )));
            }
        }
    }

    // restriction to the Ferrand homomorphism
    let map = ferrand_table(tensor.base())?;
    let partition = basis.suborbits_within(map.basis())?;
    for (sn_orbit, subs) in partition.iter().enumerate() {
        let ring = datum.algebra().ring().clone();
        let mut sum = ring.zero();
        for &s in subs {
            sum = &sum + datum.value_on_orbit(s);
        }
        if &sum != map.value_on_orbit(sn_orbit) {
            return Err(Error::Precondition(format!(
                "closure datum does not restrict to the Ferrand homomorphism on symmetric orbit {sn_orbit}: sum {} vs {}",
                sum,
                map.value_on_orbit(sn_orbit)
            )));
        }
    }
    Ok(())
}

/// Restrict a G-closure datum to an H-closure datum for `H ⊇ G`: the value
/// on each H-orbit is the sum of the values on the G-orbits composing it.
pub fn induce(datum: &ClosureDatum, h: &PermGroup) -> Result<ClosureDatum> {
    if !datum.group().is_subgroup_of(h) {
        return Err(Error::Precondition(format!(
            "{} does not contain {}",
            h.name(),
            datum.group().name()
        )));
    }
    let coarse = OrbitBasis::new(datum.basis().tensor().clone(), h.clone())?;
    let partition = datum.basis().suborbits_within(&coarse)?;
    let ring = datum.algebra().ring().clone();
    let values: Vec<RingElem> = partition
        .iter()
        .map(|subs| {
            let mut sum = ring.zero();
            for &s in subs {
                sum = &sum + datum.value_on_orbit(s);
            }
            sum
        })
        .collect();
    Ok(ClosureDatum::new(coarse, values))
}

/// Transport a G-closure datum along `σ`: the result is a `σGσ⁻¹`-closure
/// datum whose value on the orbit of a tuple `I` is the original value on the
/// orbit of `I ∘ σ`.
pub fn act(sigma: &Perm, datum: &ClosureDatum) -> Result<ClosureDatum> {
    if sigma.degree() != datum.group().degree() {
        return Err(Error::Dimension("permutation degree mismatch".into()));
    }
    let conj = datum.group().conjugate(sigma);
    let basis = OrbitBasis::new(datum.basis().tensor().clone(), conj)?;
    let values: Vec<RingElem> = basis
        .orbits()
        .iter()
        .map(|orbit| {
            let pre: Vec<usize> = (0..orbit.rep.len())
                .map(|k| orbit.rep[sigma.apply(k)])
                .collect();
            datum
                .value_on_orbit(datum.basis().orbit_of_tuple(&pre))
                .clone()
        })
        .collect();
    Ok(ClosureDatum::new(basis, values))
}

/// Search all of Sₙ for a permutation carrying one datum to the other.
pub fn isomorphic(d1: &ClosureDatum, d2: &ClosureDatum) -> Result<Option<Perm>> {
    let n = d1.group().degree();
    if n != d2.group().degree() || d1.algebra() != d2.algebra() {
        return Ok(None);
    }
    if n > 5 {
        return Err(Error::guard("isomorphism search degree", 5));
    }
    for sigma in PermGroup::symmetric(n).elements() {
        let moved = act(sigma, d1)?;
        if moved.group() == d2.group() && moved.values() == d2.values() {
            return Ok(Some(sigma.clone()));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Base change.
// ---------------------------------------------------------------------------

/// A supported homomorphism between base rings, applied entrywise to
/// algebras and closure data.
#[derive(Clone, Debug)]
pub enum RingMap {
    Identity(Ring),
    /// `Z → Z/m` or `Z → GF(p)`.
    ModReduce {
        source: Ring,
        target: Ring,
    },
    /// Specialize the variables of a polynomial extension into its base.
    Specialize {
        source: Ring,
        assignments: Vec<RingElem>,
    },
    Compose(Box<RingMap>, Box<RingMap>),
}

impl RingMap {
    pub fn mod_reduce(source: Ring, target: Ring) -> Result<RingMap> {
        if !matches!(source.desc(), RingDesc::Integers) {
            return Err(Error::capability("modular reduction starts from Z"));
        }
        if !matches!(
            target.desc(),
            RingDesc::IntegersMod(_) | RingDesc::PrimeField(_)
        ) {
            return Err(Error::capability("modular reduction lands in Z/m or GF(p)"));
        }
        Ok(RingMap::ModReduce { source, target })
    }

    pub fn specialize(source: Ring, assignments: Vec<RingElem>) -> Result<RingMap> {
        let RingDesc::PolyExt { base, vars } = source.desc() else {
            return Err(Error::capability(
                "specialization starts from a polynomial extension",
            ));
        };
        if assignments.len() != vars.len() {
            return Err(Error::Dimension("one assignment per variable".into()));
        }
        for a in &assignments {
            if a.ring() != base {
                return Err(Error::Dimension("assignment from the wrong ring".into()));
            }
        }
        Ok(RingMap::Specialize {
            source,
            assignments,
        })
    }

    pub fn compose(first: RingMap, then: RingMap) -> Result<RingMap> {
        if first.target() != then.source() {
            return Err(Error::Dimension("ring maps do not compose".into()));
        }
        Ok(RingMap::Compose(Box::new(first), Box::new(then)))
    }

    pub fn source(&self) -> Ring {
        match self {
            RingMap::Identity(r) => r.clone(),
            RingMap::ModReduce { source, .. } => source.clone(),
            RingMap::Specialize { source, .. } => source.clone(),
            RingMap::Compose(f, _) => f.source(),
        }
    }

    pub fn target(&self) -> Ring {
        match self {
            RingMap::Identity(r) => r.clone(),
            RingMap::ModReduce { target, .. } => target.clone(),
            RingMap::Specialize { source, .. } => match source.desc() {
                RingDesc::PolyExt { base, .. } => base.clone(),
                _ => unreachable!(),
            },
            RingMap::Compose(_, g) => g.target(),
        }
    }

    pub fn apply(&self, e: &RingElem) -> Result<RingElem> {
        if e.ring() != &self.source() {
            return Err(Error::Dimension("element from the wrong ring".into()));
        }
        match self {
            RingMap::Identity(_) => Ok(e.clone()),
            RingMap::ModReduce { target, .. } => {
                let n = e.to_bigint().expect("integer payload");
                Ok(target.from_bigint(&n))
            }
            RingMap::Specialize {
                source,
                assignments,
            } => {
                let RingDesc::PolyExt { base, .. } = source.desc() else {
                    unreachable!()
                };
                let Payload::Poly(sp) = e.payload() else {
                    unreachable!()
                };
                let mut acc = base.zero();
                for (mono, coeff) in &sp.terms {
                    let mut term = RingElem::from_payload(base.clone(), coeff.clone());
                    for (v, &exp) in mono.0.iter().enumerate() {
                        if exp > 0 {
                            term = &term * &assignments[v].pow(exp as u64);
                        }
                    }
                    acc = &acc + &term;
                }
                Ok(acc)
            }
            RingMap::Compose(f, g) => g.apply(&f.apply(e)?),
        }
    }
}

/// Map an algebra's structure constants and unit through a ring map.
pub fn base_change_algebra(algebra: &FreeAlgebra, map: &RingMap) -> Result<FreeAlgebra> {
    if algebra.ring() != &map.source() {
        return Err(Error::Dimension("algebra over the wrong ring".into()));
    }
    algebra.map_ring(map.target(), |e| map.apply(e).expect("entry maps"))
}

/// Transport a closure datum along a base change; the result is verified as
/// a closure datum for the base-changed algebra.
pub fn base_change(datum: &ClosureDatum, map: &RingMap) -> Result<ClosureDatum> {
    let algebra = base_change_algebra(datum.algebra(), map)?;
    let tensor = TensorAlgebra::new(algebra, datum.basis().tensor().power())?;
    let basis = OrbitBasis::new(tensor, datum.group().clone())?;
    let values = datum
        .values()
        .iter()
        .map(|v| map.apply(v))
        .collect::<Result<Vec<_>>>()?;
    let out = ClosureDatum::new(basis, values);
    verify_closure_datum(&out)?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Quotient presentations.
// ---------------------------------------------------------------------------

/// The module we quotient: either the full tensor power on its basis of
/// pure tensors, or the invariant subring on a G-orbit basis.
#[derive(Clone)]
pub enum Ambient {
    Tensor(TensorAlgebra),
    Invariant(OrbitBasis),
}

impl Ambient {
    pub fn ring(&self) -> Ring {
        match self {
            Ambient::Tensor(t) => t.base().ring().clone(),
            Ambient::Invariant(b) => b.tensor().base().ring().clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Ambient::Tensor(t) => t.dim(),
            Ambient::Invariant(b) => b.orbit_count(),
        }
    }

    pub fn unit_vector(&self) -> Result<Vec<Payload>> {
        match self {
            Ambient::Tensor(t) => Ok(t.as_algebra().unit_payloads().to_vec()),
            Ambient::Invariant(b) => {
                let unit = b.tensor().as_algebra().unit_elem();
                let inv = expand_invariant(&unit, b)?;
                Ok(inv.coords().iter().map(|c| c.payload().clone()).collect())
            }
        }
    }

    /// Coordinates (in this basis) of the product of basis elements i and j.
    pub fn basis_product(&self, i: usize, j: usize) -> Result<Vec<Payload>> {
        match self {
            Ambient::Tensor(t) => Ok(t.as_algebra().basis_product_payloads(i, j)),
            Ambient::Invariant(b) => Ok(b.product_expansion(i, j)?.as_ref().clone()),
        }
    }

    pub fn describe_basis(&self, i: usize) -> String {
        match self {
            Ambient::Tensor(t) => crate::tensor::tuple_string(&t.decode(i)),
            Ambient::Invariant(b) => {
                format!("e{}", crate::tensor::tuple_string(&b.orbits()[i].rep))
            }
        }
    }
}

/// A finite presentation of a quotient of the ambient module by a relation
/// span, with enough structure to multiply canonical representatives.
pub struct QuotientAlgebra {
    ambient: Ambient,
    ring: Ring,
    reducer: Reducer,
    support: Vec<usize>,
    unit_image: Vec<Payload>,
}

impl QuotientAlgebra {
    /// Quotient by the span of the given relation rows. The span is already
    /// an ideal when the rows are closed under multiplication by a module
    /// generating set, which every caller here arranges.
    pub fn from_relations(
        ambient: Ambient,
        rows: impl Iterator<Item = Vec<Payload>>,
    ) -> Result<QuotientAlgebra> {
        let ring = ambient.ring();
        let dim = ambient.dim();
        let mut reducer = Reducer::new(&ring, dim)?;
        for row in rows {
            reducer.insert_payloads(&row);
        }
        QuotientAlgebra::from_reducer(ambient, reducer)
    }

    fn from_reducer(ambient: Ambient, reducer: Reducer) -> Result<QuotientAlgebra> {
        let ring = ambient.ring();
        let support = reducer.support_cols();
        let unit_image = reducer.reduce_payloads(&ambient.unit_vector()?);
        Ok(QuotientAlgebra {
            ambient,
            ring,
            reducer,
            support,
            unit_image,
        })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Canonical representative of an ambient coordinate vector.
    pub fn reduce(&self, v: &[RingElem]) -> Vec<RingElem> {
        let payloads: Vec<Payload> = v.iter().map(|e| e.payload().clone()).collect();
        self.reduce_payloads(&payloads)
            .into_iter()
            .map(|p| RingElem::from_payload(self.ring.clone(), p))
            .collect()
    }

    pub(crate) fn reduce_payloads(&self, v: &[Payload]) -> Vec<Payload> {
        self.reducer.reduce_payloads(v)
    }

    /// Columns on which canonical representatives live.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Number of free module generators (support columns with full freedom).
    pub fn rank(&self) -> usize {
        self.support
            .iter()
            .filter(|&&c| self.reducer.col_bound(c) == ColBound::Free)
            .count()
    }

    /// Whether the quotient is free on its support columns.
    pub fn is_free(&self) -> bool {
        self.support
            .iter()
            .all(|&c| self.reducer.col_bound(c) == ColBound::Free)
    }

    /// Per-column torsion bounds (support columns with a modulus).
    pub fn column_torsion(&self) -> Vec<(usize, BigInt)> {
        self.support
            .iter()
            .filter_map(|&c| match self.reducer.col_bound(c) {
                ColBound::Mod(g) => Some((c, g)),
                _ => None,
            })
            .collect()
    }

    /// Smith invariant factors (> 1) of the relation span, for quotients of
    /// free Z-modules.
    pub fn torsion_invariant_factors(&self) -> Result<Vec<BigInt>> {
        let Reducer::Int(int_reducer) = &self.reducer else {
            return Err(Error::capability(
                "torsion invariant factors are computed over Z",
            ));
        };
        let rows: Vec<Vec<BigInt>> = int_reducer.basis_rows();
        let ncols = self.ambient.dim();
        let factors = smith_invariant_factors(rows, ncols);
        Ok(factors
            .into_iter()
            .filter(|d| *d > BigInt::from(1))
            .collect())
    }

    pub fn unit_image(&self) -> Vec<RingElem> {
        self.unit_image
            .iter()
            .map(|p| RingElem::from_payload(self.ring.clone(), p.clone()))
            .collect()
    }

    pub fn is_zero_algebra(&self) -> bool {
        self.unit_image.iter().all(|p| self.ring.is_zero_p(p))
    }

    /// Multiply two canonical representatives.
    pub fn mul_classes(&self, u: &[RingElem], v: &[RingElem]) -> Result<Vec<RingElem>> {
        let ring = &self.ring;
        let dim = self.ambient.dim();
        let mut acc = vec![ring.zero_p(); dim];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let c = ring.mul_p(a.payload(), b.payload());
                let prod = self.ambient.basis_product(i, j)?;
                for (k, p) in prod.iter().enumerate() {
                    if ring.is_zero_p(p) {
                        continue;
                    }
                    let t = ring.mul_p(&c, p);
                    acc[k] = ring.add_p(&acc[k], &t);
                }
            }
        }
        Ok(self
            .reduce_payloads(&acc)
            .into_iter()
            .map(|p| RingElem::from_payload(self.ring.clone(), p))
            .collect())
    }

    /// Present the quotient as a [`FreeAlgebra`] on its support columns.
    /// Fails when the quotient has column torsion.
    pub fn as_free_algebra(&self) -> Result<FreeAlgebra> {
        if !self.is_free() {
            return Err(Error::capability(
                "quotient has torsion and is not free on its support columns",
            ));
        }
        let r = self.support.len();
        if r == 0 {
            return Err(Error::Precondition(
                "zero algebra has no free presentation".into(),
            ));
        }
        let ring = self.ring.clone();
        let mut table = vec![vec![vec![ring.zero(); r]; r]; r];
        for (ii, &ci) in self.support.iter().enumerate() {
            for (jj, &cj) in self.support.iter().enumerate() {
                let prod = self.ambient.basis_product(ci, cj)?;
                let red = self.reduce_payloads(&prod);
                for (kk, &ck) in self.support.iter().enumerate() {
                    table[ii][jj][kk] = RingElem::from_payload(ring.clone(), red[ck].clone());
                }
            }
        }
        let unit: Vec<RingElem> = self
            .support
            .iter()
            .map(|&c| RingElem::from_payload(ring.clone(), self.unit_image[c].clone()))
            .collect();
        FreeAlgebra::from_table(ring, r, table, unit)
    }

    /// Express an ambient vector's class in support-column coordinates.
    pub fn class_coords(&self, v: &[RingElem]) -> Vec<RingElem> {
        let red = self.reduce(v);
        self.support.iter().map(|&c| red[c].clone()).collect()
    }
}

/// Decide injectivity of `R → Q`, returning a generator of the kernel's
/// annihilator evidence when it fails.
pub fn is_faithful(q: &QuotientAlgebra) -> Result<(bool, Option<RingElem>)> {
    let ring = q.ring().clone();
    match ring.desc() {
        RingDesc::Rationals | RingDesc::PrimeField(_) => {
            if q.is_zero_algebra() {
                Ok((false, Some(ring.one())))
            } else {
                Ok((true, None))
            }
        }
        RingDesc::IntegersMod(m) => {
            let unit: Vec<Payload> = q.unit_image.clone();
            for d in 1..*m {
                if *m % d != 0 {
                    continue;
                }
                let scaled: Vec<Payload> = unit
                    .iter()
                    .map(|p| ring.mul_p(p, &Payload::Res(d)))
                    .collect();
                let red = q.reduce_payloads(&scaled);
                if red.iter().all(|p| ring.is_zero_p(p)) {
                    return Ok((false, Some(ring.from_i64(d as i64))));
                }
            }
            if q.is_zero_algebra() {
                return Ok((false, Some(ring.one())));
            }
            Ok((true, None))
        }
        RingDesc::Integers => {
            if q.is_zero_algebra() {
                return Ok((false, Some(ring.one())));
            }
            // infinite additive order of 1 ⟺ the unit is not in the
            // Q-span of the relations
            let Reducer::Int(int_reducer) = &q.reducer else {
                unreachable!()
            };
            let rat = Ring::rationals();
            let mut rat_reducer = Reducer::new(&rat, q.ambient.dim())?;
            for row in int_reducer.basis_rows() {
                let as_rat: Vec<Payload> = row
                    .iter()
                    .map(|n| rat.from_bigint(n).payload().clone())
                    .collect();
                rat_reducer.insert_payloads(&as_rat);
            }
            let unit_rat: Vec<Payload> = q
                .ambient
                .unit_vector()?
                .iter()
                .map(|p| match p {
                    Payload::Int(n) => rat.from_bigint(n).payload().clone(),
                    _ => unreachable!(),
                })
                .collect();
            let red = rat_reducer.reduce_payloads(&unit_rat);
            if !red.iter().all(|p| rat.is_zero_p(p)) {
                return Ok((true, None));
            }
            // the unit has finite order: find the least annihilating t
            let unit = q.ambient.unit_vector()?;
            let mut t = BigInt::from(1);
            loop {
                let scaled: Vec<Payload> = unit
                    .iter()
                    .map(|p| ring.mul_p(p, &Payload::Int(t.clone())))
                    .collect();
                let red = q.reduce_payloads(&scaled);
                if red.iter().all(|p| ring.is_zero_p(p)) {
                    return Ok((false, Some(ring.from_bigint(&t))));
                }
                t += 1;
            }
        }
        _ => Err(Error::capability(format!(
            "faithfulness over {ring} is not supported"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Resolvent algebras.
// ---------------------------------------------------------------------------

/// The universal parameterizer `(A^⊗n)^G ⊗_{(A^⊗n)^{Sₙ}} R`: its
/// homomorphisms to `R` are exactly the G-closure data for `A`.
pub struct ResolventAlgebra {
    pub quotient: QuotientAlgebra,
    pub g_basis: OrbitBasis,
    pub ferrand: FerrandMap,
}

impl ResolventAlgebra {
    /// The closure datum obtained from a linear functional given by its
    /// values on every G-orbit column (restricted through the quotient).
    pub fn datum_from_column_values(&self, column_values: &[RingElem]) -> ClosureDatum {
        ClosureDatum::new(self.g_basis.clone(), column_values.to_vec())
    }
}

/// Present the resolvent algebra concretely: quotient the G-orbit module by
/// the span of `{β·(α − Φ(α)) : α over the Sₙ orbit basis, β over the G
/// orbit basis}`. One multiplication layer suffices: any product γ·β(α−Φα)
/// re-expands over the orbit basis, landing back in the span.
pub fn resolvent_algebra(algebra: &FreeAlgebra, group: &PermGroup) -> Result<ResolventAlgebra> {
    let ring = algebra.ring().clone();
    if !ring.supports_linear_algebra() {
        return Err(Error::capability(format!(
            "resolvent algebra over {ring} needs a field, Z, or Z/m"
        )));
    }
    let n = algebra.rank();
    if group.degree() != n {
        return Err(Error::Dimension(format!(
            "group degree {} does not match algebra rank {n}",
            group.degree()
        )));
    }
    let tensor = TensorAlgebra::new(algebra.clone(), n)?;
    let g_basis = OrbitBasis::new(tensor.clone(), group.clone())?;
    let ferrand = ferrand_table(algebra)?;
    let partition = g_basis.suborbits_within(ferrand.basis())?;

    let dim = g_basis.orbit_count();
    let mut rows: Vec<Vec<Payload>> = Vec::with_capacity(ferrand.basis().orbit_count() * dim);
    for (sn_orbit, subs) in partition.iter().enumerate() {
        let phi_alpha = ferrand.value_on_orbit(sn_orbit);
        for beta in 0..dim {
            // β·α with α = Σ of the constituent G-orbit sums
            let mut row: Vec<Payload> = vec![ring.zero_p(); dim];
            for &s in subs {
                let part = g_basis.product_expansion(beta, s)?;
                for (slot, p) in row.iter_mut().zip(part.iter()) {
                    *slot = ring.add_p(slot, p);
                }
            }
            // subtract Φ(α)·e_β
            row[beta] = ring.sub_p(&row[beta], phi_alpha.payload());
            rows.push(row);
        }
    }
    let quotient =
        QuotientAlgebra::from_relations(Ambient::Invariant(g_basis.clone()), rows.into_iter())?;
    Ok(ResolventAlgebra {
        quotient,
        g_basis,
        ferrand,
    })
}

// ---------------------------------------------------------------------------
// Closure algebras.
// ---------------------------------------------------------------------------

/// The closure algebra `A^⊗n / (α − φ(α))`, presented as a quotient of the
/// tensor power by the span of `{θ_c · (e_b − φ(e_b)·1)}` over all basis
/// tensors `θ_c` and orbit sums `e_b`.
pub fn closure_algebra(datum: &ClosureDatum) -> Result<QuotientAlgebra> {
    closure_algebra_with_guard(datum, CLOSURE_DIM_GUARD)
}

pub fn closure_algebra_with_guard(datum: &ClosureDatum, max_dim: usize) -> Result<QuotientAlgebra> {
    let basis = datum.basis();
    let tensor = basis.tensor().clone();
    let ring = datum.algebra().ring().clone();
    if tensor.dim() > max_dim {
        return Err(Error::guard(
            format!("closure algebra ambient dimension {}", tensor.dim()),
            max_dim,
        ));
    }
    if !ring.supports_linear_algebra() {
        return Err(Error::capability(format!(
            "closure algebra over {ring} needs a field, Z, or Z/m"
        )));
    }
    let dim = tensor.dim();
    let base = tensor.base().clone();
    let n = tensor.power();
    let rank = base.rank();

    // Seed with {e_b − φ(e_b)·1} and close the span under multiplication by
    // every slot embedding θ_j^{(i)}: a span containing the seeds and closed
    // under those products is closed under every basis tensor, hence is the
    // ideal's underlying module. Only newly inserted remainders need their
    // products queued.
    let mut reducer = Reducer::new(&ring, dim)?;
    let unit_vec = tensor.as_algebra().unit_payloads().to_vec();
    let mut stack: Vec<Vec<Payload>> = Vec::new();
    for b in 0..basis.orbit_count() {
        let eb = basis.orbit_sum(b);
        let phi_b = datum.value_on_orbit(b);
        let mut row: Vec<Payload> = eb.payload_coords().to_vec();
        for (slot, u) in row.iter_mut().zip(unit_vec.iter()) {
            let t = ring.mul_p(phi_b.payload(), u);
            *slot = ring.sub_p(slot, &t);
        }
        stack.push(row);
    }
    // per-slot action of θ_j on a coordinate vector
    let mult_by_slot_gen = |v: &[Payload], slot: usize, j: usize| -> Vec<Payload> {
        let mut out = vec![ring.zero_p(); dim];
        for (idx, c) in v.iter().enumerate() {
            if ring.is_zero_p(c) {
                continue;
            }
            let tuple = tensor.decode(idx);
            let prod = base.basis_product_payloads(tuple[slot], j);
            for (k, p) in prod.iter().enumerate() {
                if ring.is_zero_p(p) {
                    continue;
                }
                let mut t = tuple.clone();
                t[slot] = k;
                let target = tensor.encode(&t);
                let add = ring.mul_p(c, p);
                out[target] = ring.add_p(&out[target], &add);
            }
        }
        out
    };
    while let Some(v) = stack.pop() {
        let w = reducer.reduce_payloads(&v);
        if w.iter().all(|p| ring.is_zero_p(p)) {
            continue;
        }
        reducer.insert_payloads(&w);
        for slot in 0..n {
            for j in 0..rank {
                stack.push(mult_by_slot_gen(&w, slot, j));
            }
        }
    }
    QuotientAlgebra::from_reducer(Ambient::Tensor(tensor), reducer)
}

// ---------------------------------------------------------------------------
// Enumeration.
// ---------------------------------------------------------------------------

/// Upper bound on the candidate space |R|^k explored by the hom search.
const HOM_SEARCH_GUARD: u128 = 100_000_000;

/// All R-algebra homomorphisms from the quotient to R, each given by its
/// values on every ambient column (so linear functionals on the ambient that
/// kill the relation span, preserve the unit, and are multiplicative).
pub fn quotient_homs_to_ring(q: &QuotientAlgebra) -> Result<Vec<Vec<RingElem>>> {
    let ring = q.ring().clone();
    if !ring.is_enumerable() {
        return Err(Error::capability(format!(
            "homomorphism enumeration needs an enumerable ring, not {ring}"
        )));
    }
    let card = ring.cardinality().unwrap();
    if card > 16 {
        return Err(Error::guard("homomorphism enumeration ring size", 16));
    }
    let k = q.support().len() as u32;
    if card.checked_pow(k).is_none_or(|t| t > HOM_SEARCH_GUARD) {
        return Err(Error::guard("homomorphism search space", HOM_SEARCH_GUARD));
    }
    let dim = q.ambient().dim();
    let support = q.support().to_vec();

    // canonical class of every ambient basis column, in support coordinates
    let mut col_class: Vec<Vec<Payload>> = Vec::with_capacity(dim);
    for c in 0..dim {
        let mut v = vec![ring.zero_p(); dim];
        v[c] = ring.one_p();
        let red = q.reduce_payloads(&v);
        col_class.push(support.iter().map(|&s| red[s].clone()).collect());
    }

    // products of support classes, reduced, in support coordinates
    let mut pair_products: Vec<Vec<Vec<Payload>>> =
        vec![vec![Vec::new(); support.len()]; support.len()];
    for (ii, &ci) in support.iter().enumerate() {
        for (jj, &cj) in support.iter().enumerate().skip(ii) {
            let prod = q.ambient().basis_product(ci, cj)?;
            let red = q.reduce_payloads(&prod);
            let coords: Vec<Payload> = support.iter().map(|&s| red[s].clone()).collect();
            pair_products[ii][jj] = coords.clone();
            pair_products[jj][ii] = coords;
        }
    }

    let unit_coords: Vec<Payload> = {
        let red = q.reduce_payloads(&q.ambient().unit_vector()?);
        support.iter().map(|&s| red[s].clone()).collect()
    };

    // relation rows expressed on the support classes: a functional x kills
    // the span iff Σ_c s_c · ⟨class(e_c), x⟩ = 0 for every basis row s
    let relation_rows: Vec<Vec<Payload>> = q
        .reducer_rows_payloads()
        .into_iter()
        .map(|row| {
            let mut acc = vec![ring.zero_p(); support.len()];
            for (c, coeff) in row.iter().enumerate() {
                if ring.is_zero_p(coeff) {
                    continue;
                }
                for (s, cls) in col_class[c].iter().enumerate() {
                    let t = ring.mul_p(coeff, cls);
                    acc[s] = ring.add_p(&acc[s], &t);
                }
            }
            acc
        })
        .collect();

    let elems: Vec<Payload> = ring.enumerate_payloads().collect();
    let eval = |coords: &[Payload], x: &[Payload]| -> Payload {
        let mut acc = ring.zero_p();
        for (c, xv) in coords.iter().zip(x.iter()) {
            if ring.is_zero_p(c) {
                continue;
            }
            let t = ring.mul_p(c, xv);
            acc = ring.add_p(&acc, &t);
        }
        acc
    };

    let mut out = Vec::new();
    let mut idx = vec![0usize; support.len()];
    'outer: loop {
        let x: Vec<Payload> = idx.iter().map(|&i| elems[i].clone()).collect();
        let ok = (|| {
            for row in &relation_rows {
                if !ring.is_zero_p(&eval(row, &x)) {
                    return false;
                }
            }
            if eval(&unit_coords, &x) != ring.one_p() {
                return false;
            }
            for i in 0..support.len() {
                for j in i..support.len() {
                    let lhs = eval(&pair_products[i][j], &x);
                    let rhs = ring.mul_p(&x[i], &x[j]);
                    if lhs != rhs {
                        return false;
                    }
                }
            }
            true
        })();
        if ok {
            // extend to every ambient column through its class
            let full: Vec<RingElem> = col_class
                .iter()
                .map(|cls| RingElem::from_payload(ring.clone(), eval(cls, &x)))
                .collect();
            out.push(full);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
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
    Ok(out)
}

impl QuotientAlgebra {
    fn reducer_rows_payloads(&self) -> Vec<Vec<Payload>> {
        match &self.reducer {
            Reducer::Zmod(r) => r
                .basis_rows()
                .iter()
                .map(|(_, row)| row.iter().map(|&x| Payload::Res(x)).collect())
                .collect(),
            Reducer::Int(r) => r
                .basis_rows()
                .into_iter()
                .map(|row| row.into_iter().map(Payload::Int).collect())
                .collect(),
            Reducer::Field(r) => r.basis_rows(),
        }
    }
}

/// Brute-force oracle: the complete list of G-closure data for `A`.
///
/// Enumerable base rings go through the resolvent algebra and an exhaustive
/// hom search. Non-enumerable rings fall back to the explicit
/// parameterizations (the canonical Sₙ datum, linear factorizations for the
/// trivial group, discriminant-algebra roots for Aₙ, cubic-resolvent roots
/// for D₄). Every returned datum passes `verify_closure_datum`.
pub fn enumerate_closure_data(
    algebra: &FreeAlgebra,
    group: &PermGroup,
) -> Result<Vec<ClosureDatum>> {
    let ring = algebra.ring().clone();
    let n = algebra.rank();
    if group.degree() != n {
        return Err(Error::Dimension(format!(
            "group degree {} does not match algebra rank {n}",
            group.degree()
        )));
    }
    // intransitive products of symmetric groups on a monogenic algebra:
    // data are exactly the matching factorizations, which enumerate far
    // more cheaply than the (large) resolvent of a small group
    if let Some(blocks) = as_block_symmetric(group) {
        if blocks.len() > 1 {
            if let Some(f) = algebra.monogenic_poly() {
                let f = f.clone();
                return crate::catalog::enumerate_factorization_data(algebra, &f, &blocks);
            }
        }
    }
    let data = if ring.is_enumerable() {
        let res = resolvent_algebra(algebra, group)?;
        let homs = quotient_homs_to_ring(&res.quotient)?;
        homs.into_iter()
            .map(|values| res.datum_from_column_values(&values))
            .collect()
    } else {
        enumerate_non_enumerable(algebra, group)?
    };
    for d in &data {
        verify_closure_datum(d)
            .map_err(|e| Error::Internal(format!("enumerated datum fails verification: {e}")))?;
    }
    Ok(data)
}

/// When the group is exactly `S_{n1}×…×S_{nk}` on contiguous blocks, return
/// the block sizes.
fn as_block_symmetric(group: &PermGroup) -> Option<Vec<usize>> {
    let n = group.degree();
    // point orbits under the generators
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(comp: &mut Vec<usize>, i: usize) -> usize {
        if comp[i] != i {
            let root = find(comp, comp[i]);
            comp[i] = root;
        }
        comp[i]
    }
    for g in group.generators() {
        for i in 0..n {
            let (a, b) = (find(&mut comp, i), find(&mut comp, g.apply(i)));
            if a != b {
                comp[a] = b;
            }
        }
    }
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        let root = find(&mut comp, i);
        let mut len = 0;
        while i + len < n && find(&mut comp, i + len) == root {
            len += 1;
        }
        // orbits must be contiguous ranges
        for j in (i + len)..n {
            if find(&mut comp, j) == root {
                return None;
            }
        }
        blocks.push(len);
        i += len;
    }
    if &PermGroup::product_symmetric(&blocks) == group {
        Some(blocks)
    } else {
        None
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn enumerate_non_enumerable(algebra: &FreeAlgebra, group: &PermGroup) -> Result<Vec<ClosureDatum>> {
    let n = algebra.rank();
    if group.order() == factorial(n) {
        // the one and only Sₙ-closure datum
        let map = ferrand_table(algebra)?;
        return Ok(vec![canonical_sn_datum(&map)]);
    }
    if group.order() == 1 {
        if let Some(f) = algebra.monogenic_poly() {
            return crate::catalog::one_closures_from_linear_factorizations(algebra, f);
        }
    }
    if group == &PermGroup::alternating(n) {
        let disc = crate::catalog::discriminant_algebra(algebra)?;
        let roots = crate::ring::find_monic_roots(&disc.quadratic, algebra.ring())?;
        return roots
            .iter()
            .map(|r| crate::catalog::an_closure_from_root(algebra, r))
            .collect();
    }
    if n == 4 && group == &PermGroup::dihedral4() {
        if let Some(f) = algebra.monogenic_poly() {
            let resolvent = crate::catalog::cubic_resolvent(f)?;
            let roots = crate::ring::find_monic_roots(&resolvent, algebra.ring())?;
            return roots
                .iter()
                .map(|r| crate::catalog::d4_closure_from_root(f, algebra.ring(), r))
                .collect();
        }
    }
    Err(Error::capability(format!(
        "closure-data enumeration over {} needs an enumerable ring or a cataloged group (Sn, An, D4, trivial)",
        algebra.ring()
    )))
}

/// Isomorphism testing for quotient presentations, limited to equal rank,
/// equal torsion shape, and (over enumerable rings) exhaustive search for a
/// bijective homomorphism between their free presentations.
pub fn quotients_isomorphic(q1: &QuotientAlgebra, q2: &QuotientAlgebra) -> Result<bool> {
    if q1.ring() != q2.ring() {
        return Ok(false);
    }
    if q1.rank() != q2.rank() {
        return Ok(false);
    }
    let mut t1: Vec<BigInt> = q1.column_torsion().into_iter().map(|(_, g)| g).collect();
    let mut t2: Vec<BigInt> = q2.column_torsion().into_iter().map(|(_, g)| g).collect();
    t1.sort();
    t2.sort();
    if t1 != t2 {
        return Ok(false);
    }
    if !q1.ring().is_enumerable() || !q1.is_free() || !q2.is_free() {
        // rank and torsion agree; no stronger test is available here
        return Ok(true);
    }
    let a1 = q1.as_free_algebra()?;
    let a2 = q2.as_free_algebra()?;
    let homs = crate::algebra::find_algebra_homs(&a1, &a2)?;
    let ring = q1.ring().clone();
    for h in &homs {
        let rows: Vec<Vec<RingElem>> = h.images().iter().map(|img| img.coords()).collect();
        let m = crate::ring::Matrix::from_rows(ring.clone(), rows);
        let nf = crate::ring::normal_form(&m)?;
        // surjective onto a free module of the same finite cardinality is
        // bijective
        let surjective = (0..a2.rank()).all(|k| {
            let mut v = vec![ring.zero(); a2.rank()];
            v[k] = ring.one();
            nf.spans_row(&v)
        });
        if surjective {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_elem, parse_monic_poly, parse_ring};

    fn monogenic(ring_s: &str, poly_s: &str) -> FreeAlgebra {
        let ring = parse_ring(ring_s).unwrap();
        let f = parse_monic_poly(&ring, poly_s).unwrap();
        FreeAlgebra::monogenic(ring, &f)
    }

    #[test]
    fn canonical_sn_datum_verifies() {
        let a = monogenic("GF(2)", "x^3+x+1");
        let map = ferrand_table(&a).unwrap();
        let datum = canonical_sn_datum(&map);
        verify_closure_datum(&datum).unwrap();
    }

    #[test]
    fn verify_names_the_failing_law() {
        let a = monogenic("GF(7)", "x^3-x");
        let data = enumerate_closure_data(&a, &PermGroup::alternating(3)).unwrap();
        assert_eq!(data.len(), 2);
        // corrupt: send the γ-orbit of (1,x,x²) to 3 and its partner to -3,
        // keeping the Ferrand restriction but breaking multiplicativity
        // (3·(−3) = −9 = 5 ≠ a³+9b² = −1 = 6 in GF(7))
        let good = &data[0];
        let basis = good.basis();
        let g_orbit = basis.orbit_of_tuple(&[0, 1, 2]);
        let gp_orbit = basis.orbit_of_tuple(&[0, 2, 1]);
        let ring = a.ring().clone();
        let mut values = good.values().to_vec();
        values[g_orbit] = ring.from_i64(3);
        values[gp_orbit] = ring.from_i64(-3);
        let bad = ClosureDatum::new(basis.clone(), values);
        let err = verify_closure_datum(&bad).unwrap_err();
        assert!(err.to_string().contains("multiplicative"), "{err}");
    }

    #[test]
    fn induce_to_own_group_is_identity() {
        let a = monogenic("GF(7)", "x^3-x");
        let data = enumerate_closure_data(&a, &PermGroup::alternating(3)).unwrap();
        for d in &data {
            let same = induce(d, &PermGroup::alternating(3)).unwrap();
            assert_eq!(&same, d);
        }
    }

    #[test]
    fn inducing_to_sn_recovers_the_ferrand_table() {
        let a = monogenic("GF(7)", "x^3-x");
        let map = ferrand_table(&a).unwrap();
        let data = enumerate_closure_data(&a, &PermGroup::alternating(3)).unwrap();
        for d in &data {
            let up = induce(d, &PermGroup::symmetric(3)).unwrap();
            assert_eq!(up.values(), map.values());
        }
    }

    #[test]
    fn induce_is_functorial() {
        let a = monogenic("GF(5)", "x^3-x");
        let trivial = PermGroup::trivial(3);
        let data = enumerate_closure_data(&a, &trivial).unwrap();
        assert!(!data.is_empty());
        let d = &data[0];
        let via_a3 = induce(
            &induce(d, &PermGroup::alternating(3)).unwrap(),
            &PermGroup::symmetric(3),
        )
        .unwrap();
        let direct = induce(d, &PermGroup::symmetric(3)).unwrap();
        assert_eq!(via_a3, direct);
    }

    #[test]
    fn act_is_a_group_action_preserving_verification() {
        let a = monogenic("GF(7)", "x^3-x");
        let data = enumerate_closure_data(&a, &PermGroup::alternating(3)).unwrap();
        let d = &data[0];
        let id = Perm::identity(3);
        assert_eq!(&act(&id, d).unwrap(), d);
        let s = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
        let t = Perm::from_cycles(3, &[vec![2, 3]]).unwrap();
        let st = s.compose(&t);
        let lhs = act(&st, d).unwrap();
        let rhs = act(&s, &act(&t, d).unwrap()).unwrap();
        assert_eq!(lhs.values(), rhs.values());
        assert_eq!(lhs.group(), rhs.group());
        verify_closure_datum(&lhs).unwrap();
        // elements of G itself act trivially on the datum
        let rho = Perm::from_cycles(3, &[vec![1, 2, 3]]).unwrap();
        let moved = act(&rho, d).unwrap();
        assert_eq!(&moved, d);
    }

    #[test]
    fn normalizer_permutes_the_data_set() {
        let a = monogenic("GF(7)", "x^3-x");
        let data = enumerate_closure_data(&a, &PermGroup::alternating(3)).unwrap();
        // A3 is normal in S3, so every σ maps the set to itself
        for sigma in PermGroup::symmetric(3).elements() {
            for d in &data {
                let moved = act(sigma, d).unwrap();
                assert!(data.contains(&moved));
            }
        }
        // the two data are swapped by a transposition, hence isomorphic
        let sigma = isomorphic(&data[0], &data[1]).unwrap();
        assert!(sigma.is_some());
        assert!(!sigma.unwrap().is_even());
    }

    #[test]
    fn base_change_specialize_then_reduce() {
        // specialize a↦-1, b↦0 in x³+ax+b over Z[a,b], pick the datum with
        // root 1 over Z, reduce mod 7, and the result still verifies
        let zab = parse_ring("Z[a,b]").unwrap();
        let f = parse_monic_poly(&zab, "x^3+a*x+b").unwrap();
        let sym = FreeAlgebra::monogenic(zab.clone(), &f);
        let spec = RingMap::specialize(
            zab.clone(),
            vec![Ring::integers().from_i64(-1), Ring::integers().from_i64(0)],
        )
        .unwrap();
        let over_z = base_change_algebra(&sym, &spec).unwrap();
        assert_eq!(over_z.monogenic_poly().unwrap().to_string(), "x^3-x");
        let data_z = enumerate_closure_data(&over_z, &PermGroup::alternating(3)).unwrap();
        assert_eq!(data_z.len(), 2);
        let gf7 = parse_ring("GF(7)").unwrap();
        let reduce = RingMap::mod_reduce(Ring::integers(), gf7.clone()).unwrap();
        // base_change verifies the transported datum internally
        let moved = base_change(&data_z[0], &reduce).unwrap();
        assert_eq!(moved.algebra().ring(), &gf7);
    }

    #[test]
    fn base_change_identity_is_identity() {
        let a = monogenic("GF(5)", "x^2-4");
        let data = enumerate_closure_data(&a, &PermGroup::trivial(2)).unwrap();
        let id = RingMap::Identity(a.ring().clone());
        for d in &data {
            let same = base_change(d, &id).unwrap();
            assert_eq!(&same, d);
        }
    }

    #[test]
    fn split_quartic_datum_reduces_mod_5() {
        // a Z-datum for a split quartic survives reduction mod 5
        let z = parse_ring("Z").unwrap();
        let f = parse_monic_poly(&z, "x^4-1").unwrap();
        // x^4-1 has integer roots only ±1, so use S2xS2 data... simpler:
        // the A4 datum from the square root of disc? keep it concrete with
        // the canonical S4 datum, which always exists
        let a = FreeAlgebra::monogenic(z.clone(), &f);
        let map = ferrand_table(&a).unwrap();
        let d = canonical_sn_datum(&map);
        let gf5 = parse_ring("GF(5)").unwrap();
        let reduce = RingMap::mod_reduce(z, gf5).unwrap();
        let moved = base_change(&d, &reduce).unwrap();
        verify_closure_datum(&moved).unwrap();
    }

    #[test]
    fn resolvent_ranks_match_theory() {
        // monogenic cubic, A3: the rank-2 discriminant algebra
        let a = monogenic("GF(7)", "x^3-x");
        let res = resolvent_algebra(&a, &PermGroup::alternating(3)).unwrap();
        assert!(res.quotient.is_free());
        assert_eq!(res.quotient.support().len(), 2);
        // monogenic quartic, D4: rank 3
        let q = monogenic("GF(7)", "x^4+1");
        let res = resolvent_algebra(&q, &PermGroup::dihedral4()).unwrap();
        assert_eq!(res.quotient.support().len(), 3);
        // trivial R³ over GF(5), A3: rank-2 split algebra with two homs
        let t = FreeAlgebra::trivial(parse_ring("GF(5)").unwrap(), 3);
        let res = resolvent_algebra(&t, &PermGroup::alternating(3)).unwrap();
        assert_eq!(res.quotient.support().len(), 2);
        let homs = quotient_homs_to_ring(&res.quotient).unwrap();
        assert_eq!(homs.len(), 2);
    }

    #[test]
    fn closure_of_split_algebra_has_orthogonal_idempotents() {
        let gf5 = parse_ring("GF(5)").unwrap();
        let t = FreeAlgebra::trivial(gf5.clone(), 3);
        let data = enumerate_closure_data(&t, &PermGroup::alternating(3)).unwrap();
        assert_eq!(data.len(), 2);
        for d in &data {
            let q = closure_algebra(d).unwrap();
            assert_eq!(q.rank(), 3);
            assert!(is_faithful(&q).unwrap().0);
            let free = q.as_free_algebra().unwrap();
            let idems = free.all_idempotents().unwrap();
            // 2^3 idempotents in a split rank-3 algebra
            assert_eq!(idems.len(), 8);
            // three pairwise-orthogonal nonzero idempotents summing to 1
            let mut found = Vec::new();
            for e in &idems {
                if e.is_zero() {
                    continue;
                }
                if found.iter().all(|f| (e * f).is_zero()) {
                    found.push(e.clone());
                }
            }
            assert_eq!(found.len(), 3);
            let sum = found.iter().fold(free.zero_elem(), |acc, e| &acc + e);
            assert_eq!(sum, free.unit_elem());
        }
    }

    #[test]
    fn s3_closure_of_f8_has_rank_6() {
        let a = monogenic("GF(2)", "x^3+x+1");
        let map = ferrand_table(&a).unwrap();
        let d = canonical_sn_datum(&map);
        let q = closure_algebra(&d).unwrap();
        assert_eq!(q.rank(), 6);
        assert!(is_faithful(&q).unwrap().0);
    }

    #[test]
    fn sn_closure_is_always_faithful_over_z() {
        let a = monogenic("Z", "x^2-x-3");
        let map = ferrand_table(&a).unwrap();
        let q = closure_algebra(&canonical_sn_datum(&map)).unwrap();
        let (ok, _) = is_faithful(&q).unwrap();
        assert!(ok);
        assert!(q.torsion_invariant_factors().unwrap().is_empty());
    }

    #[test]
    fn nilpotent_cubic_closure_kills_three() {
        // the A3 datum of (Z/9)[x]/(x³) with γ̇ ↦ 6 maps 3 to 0
        let a = monogenic("Z/9", "x^3");
        let data = enumerate_closure_data(&a, &PermGroup::alternating(3)).unwrap();
        assert_eq!(data.len(), 3);
        let basis_orbit = data[0].basis().orbit_of_tuple(&[0, 1, 2]);
        let six = a.ring().from_i64(6);
        let chosen = data
            .iter()
            .find(|d| d.value_on_orbit(basis_orbit) == &six)
            .expect("the γ̇ ↦ 6 assignment is one of the data");
        let q = closure_algebra(chosen).unwrap();
        let (faithful, kernel) = is_faithful(&q).unwrap();
        assert!(!faithful);
        assert_eq!(kernel.unwrap(), a.ring().from_i64(3));
    }

    #[test]
    fn enumerate_counts_for_the_field_examples() {
        let f8 = monogenic("GF(2)", "x^3+x+1");
        let a3 = enumerate_closure_data(&f8, &PermGroup::alternating(3)).unwrap();
        assert_eq!(a3.len(), 2);
        for d in &a3 {
            assert_eq!(closure_algebra(d).unwrap().rank(), 3);
        }
        let f4 = monogenic("GF(2)", "x^2+x+1");
        let none = enumerate_closure_data(&f4, &PermGroup::trivial(2)).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn resolvent_universality_count() {
        // |enumerate| equals |homs from the resolvent| exactly
        for (ring_s, poly_s, group) in [
            ("GF(7)", "x^3-x", PermGroup::alternating(3)),
            ("GF(5)", "x^3+x+1", PermGroup::alternating(3)),
            ("Z/4", "x^2+x", PermGroup::trivial(2)),
        ] {
            let a = monogenic(ring_s, poly_s);
            let res = resolvent_algebra(&a, &group).unwrap();
            let homs = quotient_homs_to_ring(&res.quotient).unwrap();
            let data = enumerate_closure_data(&a, &group).unwrap();
            assert_eq!(homs.len(), data.len());
        }
    }

    #[test]
    fn quotient_isomorphism_test() {
        let a = monogenic("GF(5)", "x^3-x");
        let t = FreeAlgebra::trivial(parse_ring("GF(5)").unwrap(), 3);
        // both A3-resolvents are split rank-2 algebras over GF(5)
        let q1 = resolvent_algebra(&a, &PermGroup::alternating(3))
            .unwrap()
            .quotient;
        let q2 = resolvent_algebra(&t, &PermGroup::alternating(3))
            .unwrap()
            .quotient;
        assert!(quotients_isomorphic(&q1, &q2).unwrap());
        // a rank-3 closure is not isomorphic to a rank-2 resolvent
        let d = enumerate_closure_data(&t, &PermGroup::alternating(3)).unwrap();
        let q3 = closure_algebra(&d[0]).unwrap();
        assert!(!quotients_isomorphic(&q1, &q3).unwrap());
    }

    #[test]
    fn howell_quotient_sizes_on_nilpotent_example() {
        let a = monogenic("Z/9", "x^3");
        let data = enumerate_closure_data(&a, &PermGroup::alternating(3)).unwrap();
        // square roots of 0 in Z/9 are {0, 3, 6}
        assert_eq!(data.len(), 3);
        for d in &data {
            verify_closure_datum(d).unwrap();
        }
    }

    #[test]
    fn guard_rejects_oversized_closure() {
        let a = monogenic("GF(2)", "x^3+x+1");
        let map = ferrand_table(&a).unwrap();
        let d = canonical_sn_datum(&map);
        assert!(matches!(
            closure_algebra_with_guard(&d, 8),
            Err(Error::Guard { .. })
        ));
    }
}
