//! Rank-n algebras presented by structure constants over a base ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::matrix::berkowitz_charpoly;
use crate::ring::{determinant, find_monic_roots, Matrix, MonicPoly, Payload, Ring, RingElem};

/// A commutative algebra that is free of rank n as a module over its base
/// ring, with multiplication given on a chosen basis.
#[derive(Clone)]
pub struct FreeAlgebra {
    inner: Arc<AlgebraInner>,
}

struct AlgebraInner {
    ring: Ring,
    rank: usize,
    unit: Vec<Payload>,
    mul: MulBacking,
    monogenic: Option<MonicPoly>,
}

enum MulBacking {
    /// Dense table: entry `i*rank + j` holds the coordinates of θi·θj.
    Table(Vec<Vec<Payload>>),
    /// Lazy tensor power of a smaller algebra; products are computed
    /// slot-wise on demand.
    Power { base: FreeAlgebra, power: usize },
}

impl PartialEq for FreeAlgebra {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.inner, &other.inner) {
            return true;
        }
        if self.ring() != other.ring() || self.rank() != other.rank() {
            return false;
        }
        if self.inner.unit != other.inner.unit {
            return false;
        }
        // two tensor powers agree exactly when their bases do
        if let (
            MulBacking::Power {
                base: b1,
                power: p1,
            },
            MulBacking::Power {
                base: b2,
                power: p2,
            },
        ) = (&self.inner.mul, &other.inner.mul)
        {
            return p1 == p2 && b1 == b2;
        }
        (0..self.rank()).all(|i| {
            (0..self.rank())
                .all(|j| self.basis_product_payloads(i, j) == other.basis_product_payloads(i, j))
        })
    }
}

impl Eq for FreeAlgebra {}

impl fmt::Debug for FreeAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeAlgebra(rank {} over {})", self.rank(), self.ring())
    }
}

pub(crate) fn tuple_encode(n: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &i| acc * n + i)
}

pub(crate) fn tuple_decode(n: usize, power: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; power];
    for k in (0..power).rev() {
        t[k] = idx % n;
        idx /= n;
    }
    t
}

/// Progressive outer product of coordinate vectors.
pub(crate) fn outer_product(ring: &Ring, vecs: &[&[Payload]]) -> Vec<Payload> {
    let mut acc = vec![ring.one_p()];
    for v in vecs {
        let mut next = Vec::with_capacity(acc.len() * v.len());
        for a in &acc {
            if ring.is_zero_p(a) {
                next.extend(std::iter::repeat_with(|| ring.zero_p()).take(v.len()));
                continue;
            }
            for b in v.iter() {
                next.push(ring.mul_p(a, b));
            }
        }
        acc = next;
    }
    acc
}

impl FreeAlgebra {
    /// Build from an explicit structure-constant table, verifying
    /// commutativity, associativity, and the unit law.
    pub fn from_table(
        ring: Ring,
        rank: usize,
        table: Vec<Vec<Vec<RingElem>>>,
        unit: Vec<RingElem>,
    ) -> Result<FreeAlgebra> {
        if rank == 0 {
            return Err(Error::Precondition("rank must be at least 1".into()));
        }
        if table.len() != rank || unit.len() != rank {
            return Err(Error::Dimension(
                "structure-constant table has the wrong shape".into(),
            ));
        }
        let mut flat = Vec::with_capacity(rank * rank);
        for row in &table {
            if row.len() != rank {
                return Err(Error::Dimension(
                    "structure-constant table has the wrong shape".into(),
                ));
            }
            for cell in row {
                if cell.len() != rank {
                    return Err(Error::Dimension(
                        "structure-constant table has the wrong shape".into(),
                    ));
                }
                for e in cell {
                    if e.ring() != &ring {
                        return Err(Error::Dimension(
                            "structure constant from the wrong ring".into(),
                        ));
                    }
                }
                flat.push(cell.iter().map(|e| e.payload().clone()).collect::<Vec<_>>());
            }
        }
        let unit_p: Vec<Payload> = unit.iter().map(|e| e.payload().clone()).collect();
        let alg = FreeAlgebra {
            inner: Arc::new(AlgebraInner {
                ring,
                rank,
                unit: unit_p,
                mul: MulBacking::Table(flat),
                monogenic: None,
            }),
        };
        alg.verify_laws()?;
        Ok(alg)
    }

    fn verify_laws(&self) -> Result<()> {
        let n = self.rank();
        for i in 0..n {
            for j in 0..i {
                if self.basis_product_payloads(i, j) != self.basis_product_payloads(j, i) {
                    return Err(Error::Precondition(format!(
                        "multiplication is not commutative at basis pair ({i},{j})"
                    )));
                }
            }
        }
        let unit = self.unit_elem();
        for i in 0..n {
            if &unit * &self.basis_elem(i) != self.basis_elem(i) {
                return Err(Error::Precondition(format!(
                    "unit law fails on basis element {i}"
                )));
            }
        }
        for i in 0..n {
            for j in 0..=i {
                let ij = &self.basis_elem(i) * &self.basis_elem(j);
                for k in 0..n {
                    let lhs = &ij * &self.basis_elem(k);
                    let rhs = &self.basis_elem(i) * &(&self.basis_elem(j) * &self.basis_elem(k));
                    if lhs != rhs {
                        return Err(Error::Precondition(format!(
                            "multiplication is not associative at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The algebra `R[x]/(f)` with basis `(1, x, …, x^{n-1})`.
    pub fn monogenic(ring: Ring, f: &MonicPoly) -> FreeAlgebra {
        assert_eq!(f.ring(), &ring);
        let n = f.degree();
        // powers of x mod f up to x^{2n-2}
        let mut pows: Vec<Vec<Payload>> = Vec::with_capacity(2 * n - 1);
        for m in 0..n {
            let mut v = vec![ring.zero_p(); n];
            v[m] = ring.one_p();
            pows.push(v);
        }
        for _ in n..=(2 * n - 2) {
            let prev = pows.last().unwrap().clone();
            let mut v = vec![ring.zero_p(); n];
            // multiply by x: shift, then reduce x^n = -(c_{n-1}x^{n-1}+…+c_0)
            let top = prev[n - 1].clone();
            for i in (1..n).rev() {
                v[i] = prev[i - 1].clone();
            }
            if !ring.is_zero_p(&top) {
                for (i, slot) in v.iter_mut().enumerate() {
                    let c = f.signed_coeff(n - i).payload().clone();
                    let t = ring.mul_p(&top, &c);
                    *slot = ring.sub_p(slot, &t);
                }
            }
            pows.push(v);
        }
        let mut flat = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                flat.push(pows[i + j].clone());
            }
        }
        let mut unit = vec![ring.zero_p(); n];
        unit[0] = ring.one_p();
        FreeAlgebra {
            inner: Arc::new(AlgebraInner {
                ring,
                rank: n,
                unit,
                mul: MulBacking::Table(flat),
                monogenic: Some(f.clone()),
            }),
        }
    }

    /// The split algebra `R^n` on a basis of orthogonal idempotents.
    pub fn trivial(ring: Ring, n: usize) -> FreeAlgebra {
        assert!(n >= 1);
        let mut flat = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut v = vec![ring.zero_p(); n];
                if i == j {
                    v[i] = ring.one_p();
                }
                flat.push(v);
            }
        }
        FreeAlgebra {
            inner: Arc::new(AlgebraInner {
                ring: ring.clone(),
                rank: n,
                unit: vec![ring.one_p(); n],
                mul: MulBacking::Table(flat),
                monogenic: None,
            }),
        }
    }

    /// The base ring viewed as a rank-1 algebra over itself.
    pub fn rank_one(ring: Ring) -> FreeAlgebra {
        FreeAlgebra::trivial(ring, 1)
    }

    /// Rebuild this algebra over a new ring by mapping every structure
    /// constant and unit coordinate through `f`.
    pub fn map_ring<F>(&self, target: Ring, f: F) -> Result<FreeAlgebra>
    where
        F: Fn(&RingElem) -> RingElem,
    {
        let n = self.rank();
        let table: Vec<Vec<Vec<RingElem>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.basis_product(i, j).iter().map(&f).collect())
                    .collect()
            })
            .collect();
        let unit: Vec<RingElem> = self.unit_coords().iter().map(&f).collect();
        let mapped = FreeAlgebra::from_table(target, n, table, unit)?;
        if let Some(g) = &self.inner.monogenic {
            let tring = mapped.ring().clone();
            let sks = g.sks().iter().map(&f).collect();
            let fm = MonicPoly::new(tring, g.var(), sks);
            return Ok(mapped.with_monogenic(fm));
        }
        Ok(mapped)
    }

    fn with_monogenic(self, f: MonicPoly) -> FreeAlgebra {
        let inner = self.inner.as_ref();
        FreeAlgebra {
            inner: Arc::new(AlgebraInner {
                ring: inner.ring.clone(),
                rank: inner.rank,
                unit: inner.unit.clone(),
                mul: match &inner.mul {
                    MulBacking::Table(t) => MulBacking::Table(t.clone()),
                    MulBacking::Power { base, power } => MulBacking::Power {
                        base: base.clone(),
                        power: *power,
                    },
                },
                monogenic: Some(f),
            }),
        }
    }

    /// Lazy tensor power `A^{⊗power}` of rank `rank^power`.
    pub(crate) fn tensor_power(base: &FreeAlgebra, power: usize) -> FreeAlgebra {
        let ring = base.ring().clone();
        let n = base.rank();
        let rank = n.pow(power as u32);
        let unit_vec = base.inner.unit.clone();
        let refs: Vec<&[Payload]> = (0..power).map(|_| unit_vec.as_slice()).collect();
        let unit = outer_product(&ring, &refs);
        FreeAlgebra {
            inner: Arc::new(AlgebraInner {
                ring,
                rank,
                unit,
                mul: MulBacking::Power {
                    base: base.clone(),
                    power,
                },
                monogenic: None,
            }),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.inner.ring
    }

    pub fn rank(&self) -> usize {
        self.inner.rank
    }

    /// The defining polynomial, for algebras built as `R[x]/(f)`.
    pub fn monogenic_poly(&self) -> Option<&MonicPoly> {
        self.inner.monogenic.as_ref()
    }

    pub fn unit_coords(&self) -> Vec<RingElem> {
        self.inner
            .unit
            .iter()
            .map(|p| RingElem::from_payload(self.ring().clone(), p.clone()))
            .collect()
    }

    pub(crate) fn unit_payloads(&self) -> &[Payload] {
        &self.inner.unit
    }

    /// Coordinates of θi·θj.
    pub fn basis_product(&self, i: usize, j: usize) -> Vec<RingElem> {
        self.basis_product_payloads(i, j)
            .iter()
            .map(|p| RingElem::from_payload(self.ring().clone(), p.clone()))
            .collect()
    }

    pub(crate) fn basis_product_payloads(&self, i: usize, j: usize) -> Vec<Payload> {
        match &self.inner.mul {
            MulBacking::Table(t) => t[i * self.rank() + j].clone(),
            MulBacking::Power { base, power } => {
                let n = base.rank();
                let ti = tuple_decode(n, *power, i);
                let tj = tuple_decode(n, *power, j);
                let factors: Vec<Vec<Payload>> = ti
                    .iter()
                    .zip(tj.iter())
                    .map(|(&a, &b)| base.basis_product_payloads(a, b))
                    .collect();
                let refs: Vec<&[Payload]> = factors.iter().map(|v| v.as_slice()).collect();
                outer_product(self.ring(), &refs)
            }
        }
    }

    pub fn zero_elem(&self) -> AlgElem {
        AlgElem {
            algebra: self.clone(),
            coords: vec![self.ring().zero_p(); self.rank()],
        }
    }

    pub fn unit_elem(&self) -> AlgElem {
        AlgElem {
            algebra: self.clone(),
            coords: self.inner.unit.clone(),
        }
    }

    pub fn basis_elem(&self, i: usize) -> AlgElem {
        let mut coords = vec![self.ring().zero_p(); self.rank()];
        coords[i] = self.ring().one_p();
        AlgElem {
            algebra: self.clone(),
            coords,
        }
    }

    pub fn from_coords(&self, coords: Vec<RingElem>) -> AlgElem {
        assert_eq!(coords.len(), self.rank());
        for c in &coords {
            assert_eq!(c.ring(), self.ring());
        }
        AlgElem {
            algebra: self.clone(),
            coords: coords.into_iter().map(|e| e.payload().clone()).collect(),
        }
    }

    pub(crate) fn from_payload_coords(&self, coords: Vec<Payload>) -> AlgElem {
        assert_eq!(coords.len(), self.rank());
        AlgElem {
            algebra: self.clone(),
            coords,
        }
    }

    /// The generator `x` of a monogenic algebra.
    pub fn generator_elem(&self) -> Option<AlgElem> {
        let f = self.inner.monogenic.as_ref()?;
        if self.rank() == 1 {
            Some(self.from_coords(vec![f.sk(1).clone()]))
        } else {
            Some(self.basis_elem(1))
        }
    }

    /// Scan for every element with `e*e = e` (enumerable base rings only).
    pub fn all_idempotents(&self) -> Result<Vec<AlgElem>> {
        let ring = self.ring();
        if !ring.is_enumerable() {
            return Err(Error::capability(
                "idempotent scan needs an enumerable ring",
            ));
        }
        let card = ring.cardinality().unwrap();
        let total = card
            .checked_pow(self.rank() as u32)
            .ok_or_else(|| Error::guard("idempotent scan size", "10^7"))?;
        if total > 10_000_000 {
            return Err(Error::guard("idempotent scan size", "10^7"));
        }
        let elems: Vec<Payload> = ring.enumerate_payloads().collect();
        let mut found = Vec::new();
        let mut idx = vec![0usize; self.rank()];
        loop {
            let coords: Vec<Payload> = idx.iter().map(|&i| elems[i].clone()).collect();
            let e = self.from_payload_coords(coords);
            if &e * &e == e {
                found.push(e);
            }
            let mut k = 0;
            loop {
                if k == self.rank() {
                    return Ok(found);
                }
                idx[k] += 1;
                if idx[k] < elems.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

/// Product algebra `A_1 × … × A_k` with its projections and idempotents.
pub struct ProductAlgebra {
    pub algebra: FreeAlgebra,
    pub projections: Vec<AlgHom>,
    pub idempotents: Vec<AlgElem>,
    /// Starting coordinate of each factor's block.
    pub offsets: Vec<usize>,
}

/// Block-diagonal product of algebras over a common ring.
pub fn make_product(factors: &[FreeAlgebra]) -> Result<ProductAlgebra> {
    if factors.is_empty() {
        return Err(Error::Precondition(
            "a product needs at least one factor".into(),
        ));
    }
    let ring = factors[0].ring().clone();
    for a in factors {
        if a.ring() != &ring {
            return Err(Error::Dimension(
                "product factors over different rings".into(),
            ));
        }
    }
    let rank: usize = factors.iter().map(|a| a.rank()).sum();
    let mut offsets = Vec::with_capacity(factors.len());
    let mut off = 0;
    for a in factors {
        offsets.push(off);
        off += a.rank();
    }
    let zero = vec![ring.zero(); rank];
    let mut table = vec![vec![zero.clone(); rank]; rank];
    let mut unit = vec![ring.zero(); rank];
    for (f, a) in factors.iter().enumerate() {
        let o = offsets[f];
        for (i, u) in a.unit_coords().iter().enumerate() {
            unit[o + i] = u.clone();
        }
        for i in 0..a.rank() {
            for j in 0..a.rank() {
                let prod = a.basis_product(i, j);
                for (k, c) in prod.iter().enumerate() {
                    table[o + i][o + j][o + k] = c.clone();
                }
            }
        }
    }
    let product = FreeAlgebra::from_table(ring.clone(), rank, table, unit)?;
    let mut projections = Vec::with_capacity(factors.len());
    let mut idempotents = Vec::with_capacity(factors.len());
    for (f, a) in factors.iter().enumerate() {
        let o = offsets[f];
        let images: Vec<AlgElem> = (0..rank)
            .map(|i| {
                if i >= o && i < o + a.rank() {
                    a.basis_elem(i - o)
                } else {
                    a.zero_elem()
                }
            })
            .collect();
        projections.push(AlgHom::new(product.clone(), a.clone(), images)?);
        let mut e = product.zero_elem();
        for (i, u) in a.unit_coords().iter().enumerate() {
            e.coords[o + i] = u.payload().clone();
        }
        idempotents.push(e);
    }
    Ok(ProductAlgebra {
        algebra: product,
        projections,
        idempotents,
        offsets,
    })
}

/// An element of a [`FreeAlgebra`], stored as its coordinate vector.
#[derive(Clone)]
pub struct AlgElem {
    algebra: FreeAlgebra,
    coords: Vec<Payload>,
}

impl PartialEq for AlgElem {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.coords == other.coords
    }
}

impl Eq for AlgElem {}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coords().iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", cs.join(", "))
    }
}

impl AlgElem {
    pub fn algebra(&self) -> &FreeAlgebra {
        &self.algebra
    }

    pub fn coords(&self) -> Vec<RingElem> {
        let ring = self.algebra.ring().clone();
        self.coords
            .iter()
            .map(|p| RingElem::from_payload(ring.clone(), p.clone()))
            .collect()
    }

    pub(crate) fn payload_coords(&self) -> &[Payload] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> RingElem {
        RingElem::from_payload(self.algebra.ring().clone(), self.coords[i].clone())
    }

    pub fn is_zero(&self) -> bool {
        let ring = self.algebra.ring();
        self.coords.iter().all(|c| ring.is_zero_p(c))
    }

    pub fn scale(&self, c: &RingElem) -> AlgElem {
        assert_eq!(c.ring(), self.algebra.ring());
        let ring = self.algebra.ring();
        AlgElem {
            algebra: self.algebra.clone(),
            coords: self
                .coords
                .iter()
                .map(|x| ring.mul_p(x, c.payload()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u64) -> AlgElem {
        let mut acc = self.algebra.unit_elem();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &AlgElem {
    type Output = AlgElem;
    fn add(self, rhs: &AlgElem) -> AlgElem {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch");
        let ring = self.algebra.ring();
        AlgElem {
            algebra: self.algebra.clone(),
            coords: self
                .coords
                .iter()
                .zip(rhs.coords.iter())
                .map(|(a, b)| ring.add_p(a, b))
                .collect(),
        }
    }
}

impl Sub for &AlgElem {
    type Output = AlgElem;
    fn sub(self, rhs: &AlgElem) -> AlgElem {
        self + &(-rhs)
    }
}

impl Neg for &AlgElem {
    type Output = AlgElem;
    fn neg(self) -> AlgElem {
        let ring = self.algebra.ring();
        AlgElem {
            algebra: self.algebra.clone(),
            coords: self.coords.iter().map(|x| ring.neg_p(x)).collect(),
        }
    }
}

impl Mul for &AlgElem {
    type Output = AlgElem;
    fn mul(self, rhs: &AlgElem) -> AlgElem {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch");
        let ring = self.algebra.ring().clone();
        let n = self.algebra.rank();
        let lhs_nz: Vec<usize> = (0..n)
            .filter(|&i| !ring.is_zero_p(&self.coords[i]))
            .collect();
        let rhs_nz: Vec<usize> = (0..n)
            .filter(|&j| !ring.is_zero_p(&rhs.coords[j]))
            .collect();
        let mut out = vec![ring.zero_p(); n];
        for &i in &lhs_nz {
            for &j in &rhs_nz {
                let c = ring.mul_p(&self.coords[i], &rhs.coords[j]);
                let prod = self.algebra.basis_product_payloads(i, j);
                for (k, p) in prod.iter().enumerate() {
                    if ring.is_zero_p(p) {
                        continue;
                    }
                    let t = ring.mul_p(&c, p);
                    out[k] = ring.add_p(&out[k], &t);
                }
            }
        }
        AlgElem {
            algebra: self.algebra.clone(),
            coords: out,
        }
    }
}

/// Matrix of multiplication by `a`: column j holds the coordinates of `a·θj`.
pub fn mult_matrix(a: &AlgElem) -> Matrix {
    let alg = a.algebra();
    let ring = alg.ring().clone();
    let n = alg.rank();
    let mut m = Matrix::zero(ring, n, n);
    for j in 0..n {
        let col = a * &alg.basis_elem(j);
        for i in 0..n {
            m.set_p(i, j, col.coords[i].clone());
        }
    }
    m
}

/// Characteristic polynomial `det(λI − M_a)` in the alternating-sign
/// convention, via the division-free coefficient recurrence.
pub fn char_poly(a: &AlgElem) -> MonicPoly {
    let ring = a.algebra().ring().clone();
    let m = mult_matrix(a);
    let coeffs = berkowitz_charpoly(&m);
    // coeffs = [1, c_1, …, c_n] with det(λI−M) = λ^n + c_1 λ^{n-1} + …
    let signed: Vec<RingElem> = coeffs[1..]
        .iter()
        .map(|p| RingElem::from_payload(ring.clone(), p.clone()))
        .collect();
    MonicPoly::from_signed_coeffs(ring, "lambda", signed)
}

pub fn trace(a: &AlgElem) -> RingElem {
    mult_matrix(a).trace()
}

pub fn norm(a: &AlgElem) -> RingElem {
    determinant(&mult_matrix(a)).expect("multiplication matrix is square")
}

/// Determinant of the trace-form Gram matrix `(Tr(θi·θj))`.
pub fn disc_of_basis(alg: &FreeAlgebra) -> RingElem {
    let n = alg.rank();
    let ring = alg.ring().clone();
    let mut gram = Matrix::zero(ring, n, n);
    for i in 0..n {
        for j in 0..=i {
            let t = trace(&(&alg.basis_elem(i) * &alg.basis_elem(j)));
            gram.set(i, j, t.clone());
            gram.set(j, i, t);
        }
    }
    determinant(&gram).expect("Gram matrix is square")
}

/// An algebra homomorphism, checked on construction: it must preserve the
/// unit and multiply basis images correctly.
#[derive(Clone)]
pub struct AlgHom {
    source: FreeAlgebra,
    target: FreeAlgebra,
    images: Vec<AlgElem>,
}

impl AlgHom {
    pub fn new(source: FreeAlgebra, target: FreeAlgebra, images: Vec<AlgElem>) -> Result<AlgHom> {
        if source.ring() != target.ring() {
            return Err(Error::Dimension(
                "homomorphism across different base rings".into(),
            ));
        }
        if images.len() != source.rank() {
            return Err(Error::Dimension(
                "one image per source basis element".into(),
            ));
        }
        for img in &images {
            if img.algebra() != &target {
                return Err(Error::Dimension("image from the wrong algebra".into()));
            }
        }
        let hom = AlgHom {
            source,
            target,
            images,
        };
        hom.check_laws()?;
        Ok(hom)
    }

    fn check_laws(&self) -> Result<()> {
        let unit_img = self.apply(&self.source.unit_elem());
        if unit_img != self.target.unit_elem() {
            return Err(Error::Precondition(
                "homomorphism does not preserve the unit".into(),
            ));
        }
        let n = self.source.rank();
        for i in 0..n {
            for j in 0..=i {
                let lhs = self.apply(&(&self.source.basis_elem(i) * &self.source.basis_elem(j)));
                let rhs = &self.images[i] * &self.images[j];
                if lhs != rhs {
                    return Err(Error::Precondition(format!(
                        "homomorphism fails multiplicativity at basis pair ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &FreeAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FreeAlgebra {
        &self.target
    }

    pub fn images(&self) -> &[AlgElem] {
        &self.images
    }

    pub fn apply(&self, a: &AlgElem) -> AlgElem {
        assert_eq!(a.algebra(), &self.source);
        let ring = self.source.ring();
        let mut acc = self.target.zero_elem();
        for (i, c) in a.payload_coords().iter().enumerate() {
            if ring.is_zero_p(c) {
                continue;
            }
            let c = RingElem::from_payload(ring.clone(), c.clone());
            acc = &acc + &self.images[i].scale(&c);
        }
        acc
    }
}

/// True when `f` preserves the characteristic polynomial of the generic
/// element `Σ t_i θ_i`; equality there implies norm preservation after every
/// base change, since the coefficients specialize.
pub fn is_universally_norm_preserving(f: &AlgHom) -> Result<bool> {
    let n = f.source().rank();
    if f.target().rank() != n {
        return Err(Error::Dimension(
            "universally-norm-preserving needs equal ranks".into(),
        ));
    }
    let ring = f.source().ring().clone();
    let vars: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
    let pring = Ring::poly_ext(ring.clone(), vars)?;
    let generic_src = generic_mult_matrix(f.source(), &pring, None);
    let generic_tgt = generic_mult_matrix(f.target(), &pring, Some(f));
    Ok(berkowitz_charpoly(&generic_src) == berkowitz_charpoly(&generic_tgt))
}

/// Multiplication matrix of `Σ t_i θ_i` (or of `Σ t_i f(θ_i)` when a
/// homomorphism is supplied) over the polynomial extension.
pub(crate) fn generic_mult_matrix(alg: &FreeAlgebra, pring: &Ring, hom: Option<&AlgHom>) -> Matrix {
    let n = match hom {
        Some(h) => h.source().rank(),
        None => alg.rank(),
    };
    let rank = alg.rank();
    let mut m = Matrix::zero(pring.clone(), rank, rank);
    for i in 0..n {
        let t = pring.generator(i);
        let base_elem = match hom {
            Some(h) => h.images()[i].clone(),
            None => alg.basis_elem(i),
        };
        let mi = mult_matrix(&base_elem);
        for r in 0..rank {
            for c in 0..rank {
                let entry = pring.embed(&mi.get(r, c));
                let add = &entry * &t;
                m.set(r, c, &m.get(r, c) + &add);
            }
        }
    }
    m
}

/// The complete list of algebra homomorphisms `A → B`.
///
/// Monogenic sources with rank-1 targets reduce to root finding; otherwise an
/// exhaustive search over basis-image tuples filters by the homomorphism laws.
pub fn find_algebra_homs(a: &FreeAlgebra, b: &FreeAlgebra) -> Result<Vec<AlgHom>> {
    if a.ring() != b.ring() {
        return Err(Error::Dimension(
            "homomorphism across different base rings".into(),
        ));
    }
    let ring = a.ring().clone();
    if let (Some(f), 1) = (a.monogenic_poly(), b.rank()) {
        // homs R[x]/(f) → R correspond to roots of f
        let unit = b.unit_coords()[0].clone();
        let mut homs = Vec::new();
        for root in find_monic_roots(f, &ring)? {
            let n = a.rank();
            let mut images = Vec::with_capacity(n);
            let mut pow = ring.one();
            for _ in 0..n {
                images.push(b.from_coords(vec![&pow * &unit]));
                pow = &pow * &root;
            }
            homs.push(AlgHom::new(a.clone(), b.clone(), images)?);
        }
        return Ok(homs);
    }
    if !ring.is_enumerable() {
        return Err(Error::capability(format!(
            "homomorphism search over {ring} needs an enumerable ring or a monogenic source with rank-1 target"
        )));
    }
    let card = ring.cardinality().unwrap();
    let slots = (a.rank() * b.rank()) as u32;
    if card.checked_pow(slots).is_none_or(|t| t > 100_000_000) {
        return Err(Error::guard("homomorphism search space", "10^8"));
    }
    let targets: Vec<AlgElem> = {
        let elems: Vec<Payload> = ring.enumerate_payloads().collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; b.rank()];
        'outer: loop {
            out.push(b.from_payload_coords(idx.iter().map(|&i| elems[i].clone()).collect()));
            let mut k = 0;
            loop {
                if k == b.rank() {
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
    let mut homs = Vec::new();
    let mut images: Vec<AlgElem> = Vec::new();
    search_homs(a, b, &targets, &mut images, &mut homs);
    Ok(homs)
}

fn search_homs(
    a: &FreeAlgebra,
    b: &FreeAlgebra,
    targets: &[AlgElem],
    images: &mut Vec<AlgElem>,
    out: &mut Vec<AlgHom>,
) {
    let n = a.rank();
    if images.len() == n {
        if let Ok(h) = AlgHom::new(a.clone(), b.clone(), images.clone()) {
            out.push(h);
        }
        return;
    }
    let i = images.len();
    'cand: for cand in targets {
        // prune with whatever laws are already decidable
        for j in 0..=i {
            let img_j = if j == i { cand } else { &images[j] };
            let prod = a.basis_product(i, j);
            let mut lhs = b.zero_elem();
            let mut determined = true;
            for (k, c) in prod.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if k > i {
                    determined = false;
                    break;
                }
                let img_k = if k == i { cand } else { &images[k] };
                lhs = &lhs + &img_k.scale(c);
            }
            if determined && lhs != cand * img_j {
                continue 'cand;
            }
        }
        images.push(cand.clone());
        search_homs(a, b, targets, images, out);
        images.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_elem, parse_monic_poly, parse_ring};

    #[test]
    fn monogenic_f8() {
        let gf2 = parse_ring("GF(2)").unwrap();
        let f = parse_monic_poly(&gf2, "x^3+x+1").unwrap();
        let a = FreeAlgebra::monogenic(gf2.clone(), &f);
        assert_eq!(a.rank(), 3);
        // x·x^2 = x+1
        let x = a.basis_elem(1);
        let x2 = a.basis_elem(2);
        let expect = a.from_coords(vec![gf2.one(), gf2.one(), gf2.zero()]);
        assert_eq!(&x * &x2, expect);
    }

    #[test]
    fn monogenic_nilpotent_cubic() {
        let z9 = parse_ring("Z/9").unwrap();
        let f = parse_monic_poly(&z9, "x^3").unwrap();
        let a = FreeAlgebra::monogenic(z9, &f);
        let x = a.basis_elem(1);
        assert!((&x * &a.basis_elem(2)).is_zero());
    }

    #[test]
    fn monogenic_rank_one() {
        let z = parse_ring("Z").unwrap();
        let f = parse_monic_poly(&z, "x-5").unwrap();
        let a = FreeAlgebra::monogenic(z.clone(), &f);
        assert_eq!(a.rank(), 1);
        let x = a.generator_elem().unwrap();
        assert_eq!(x.coord(0), z.from_i64(5));
    }

    #[test]
    fn product_of_trivials() {
        let gf5 = parse_ring("GF(5)").unwrap();
        let one = FreeAlgebra::trivial(gf5.clone(), 1);
        let p = make_product(&[one.clone(), one.clone(), one.clone()]).unwrap();
        assert_eq!(p.algebra.rank(), 3);
        assert_eq!(p.idempotents.len(), 3);
        for (i, e) in p.idempotents.iter().enumerate() {
            assert_eq!(&(e * e), e);
            for (j, f) in p.idempotents.iter().enumerate() {
                if i != j {
                    assert!((e * f).is_zero());
                }
            }
        }
        let sum = p
            .idempotents
            .iter()
            .fold(p.algebra.zero_elem(), |acc, e| &acc + e);
        assert_eq!(sum, p.algebra.unit_elem());
    }

    #[test]
    fn mixed_product_block_constants() {
        let gf2 = parse_ring("GF(2)").unwrap();
        let f4 = FreeAlgebra::monogenic(gf2.clone(), &parse_monic_poly(&gf2, "x^2+x+1").unwrap());
        let one = FreeAlgebra::trivial(gf2.clone(), 1);
        let p = make_product(&[f4.clone(), one]).unwrap();
        assert_eq!(p.algebra.rank(), 3);
        // within the first block, x·x = x+1 still holds
        let x = p.algebra.basis_elem(1);
        let expect = &p.algebra.basis_elem(0) + &p.algebra.basis_elem(1);
        assert_eq!(&x * &x, expect);
        // blocks annihilate each other
        assert!((&x * &p.algebra.basis_elem(2)).is_zero());
    }

    #[test]
    fn mult_matrix_of_unit_and_zero() {
        let gf7 = parse_ring("GF(7)").unwrap();
        let f = parse_monic_poly(&gf7, "x^3-x").unwrap();
        let a = FreeAlgebra::monogenic(gf7.clone(), &f);
        assert_eq!(
            mult_matrix(&a.unit_elem()),
            Matrix::identity(gf7.clone(), 3)
        );
        let z = mult_matrix(&a.zero_elem());
        assert_eq!(z, Matrix::zero(gf7, 3, 3));
    }

    #[test]
    fn companion_matrix_of_x() {
        let zab = parse_ring("Z[a,b]").unwrap();
        let f = parse_monic_poly(&zab, "x^3+a*x+b").unwrap();
        let alg = FreeAlgebra::monogenic(zab.clone(), &f);
        let m = mult_matrix(&alg.generator_elem().unwrap());
        let neg_b = parse_elem(&zab, "-b").unwrap();
        let neg_a = parse_elem(&zab, "-a").unwrap();
        assert_eq!(m.get(0, 2), neg_b);
        assert_eq!(m.get(1, 2), neg_a);
        assert_eq!(m.get(2, 2), zab.zero());
        assert_eq!(m.get(1, 0), zab.one());
        assert_eq!(m.get(2, 1), zab.one());
    }

    #[test]
    fn char_poly_of_generator_recovers_f() {
        let zab = parse_ring("Z[a,b]").unwrap();
        let f = parse_monic_poly(&zab, "x^3+a*x+b").unwrap();
        let alg = FreeAlgebra::monogenic(zab.clone(), &f);
        let x = alg.generator_elem().unwrap();
        let chi = char_poly(&x);
        assert_eq!(chi.sks(), f.sks());
        assert_eq!(trace(&x), zab.zero());
        assert_eq!(norm(&x), parse_elem(&zab, "-b").unwrap());
    }

    #[test]
    fn char_poly_over_gf2() {
        let gf2 = parse_ring("GF(2)").unwrap();
        let f = parse_monic_poly(&gf2, "x^3+x+1").unwrap();
        let alg = FreeAlgebra::monogenic(gf2.clone(), &f);
        let x = alg.generator_elem().unwrap();
        let chi = char_poly(&x);
        assert_eq!(chi.sks(), f.sks());
        assert_eq!(trace(&x), gf2.zero());
        assert_eq!(norm(&x), gf2.one());
        let chi0 = char_poly(&alg.zero_elem());
        assert!(chi0.sks().iter().all(|s| s.is_zero()));
    }

    #[test]
    fn discriminants_match_the_worked_examples() {
        let zab = parse_ring("Z[a,b]").unwrap();
        let f = parse_monic_poly(&zab, "x^3+a*x+b").unwrap();
        let alg = FreeAlgebra::monogenic(zab.clone(), &f);
        assert_eq!(
            disc_of_basis(&alg),
            parse_elem(&zab, "-4*a^3-27*b^2").unwrap()
        );

        let gf2 = parse_ring("GF(2)").unwrap();
        let f4 = FreeAlgebra::monogenic(gf2.clone(), &parse_monic_poly(&gf2, "x^2+x+1").unwrap());
        assert_eq!(disc_of_basis(&f4), gf2.one());

        let r = parse_ring("Z[u]/(u^2-5)").unwrap();
        let a = FreeAlgebra::monogenic(r.clone(), &parse_monic_poly(&r, "x^2-x-1").unwrap());
        assert_eq!(disc_of_basis(&a), r.from_i64(5));
    }

    #[test]
    fn quadratic_disc_is_b2_minus_4c() {
        let zbc = parse_ring("Z[b,c]").unwrap();
        let f = parse_monic_poly(&zbc, "x^2-b*x+c").unwrap();
        let alg = FreeAlgebra::monogenic(zbc.clone(), &f);
        assert_eq!(disc_of_basis(&alg), parse_elem(&zbc, "b^2-4*c").unwrap());
    }

    #[test]
    fn unp_identity_and_folding() {
        let gf2 = parse_ring("GF(2)").unwrap();
        let r2 = FreeAlgebra::trivial(gf2.clone(), 2);
        let id = AlgHom::new(
            r2.clone(),
            r2.clone(),
            vec![r2.basis_elem(0), r2.basis_elem(1)],
        )
        .unwrap();
        assert!(is_universally_norm_preserving(&id).unwrap());
        // (a,b) ↦ (a,a): e1 ↦ e1+e2, e2 ↦ 0
        let fold = AlgHom::new(
            r2.clone(),
            r2.clone(),
            vec![&r2.basis_elem(0) + &r2.basis_elem(1), r2.zero_elem()],
        )
        .unwrap();
        assert!(!is_universally_norm_preserving(&fold).unwrap());
    }

    #[test]
    fn unp_for_char_poly_quotient_map() {
        // R[x]/(χ_a) → A sending x ↦ a is universally norm-preserving
        let gf5 = parse_ring("GF(5)").unwrap();
        let f = parse_monic_poly(&gf5, "x^3+x+2").unwrap();
        let alg = FreeAlgebra::monogenic(gf5.clone(), &f);
        let a = alg.from_coords(vec![gf5.from_i64(1), gf5.from_i64(2), gf5.from_i64(3)]);
        let chi = char_poly(&a);
        let b = FreeAlgebra::monogenic(gf5.clone(), &chi);
        let images: Vec<AlgElem> = (0..3).map(|k| a.pow(k as u64)).collect();
        let hom = AlgHom::new(b, alg, images).unwrap();
        assert!(is_universally_norm_preserving(&hom).unwrap());
    }

    #[test]
    fn hom_construction_rejects_non_multiplicative_images() {
        let gf5 = parse_ring("GF(5)").unwrap();
        let f = parse_monic_poly(&gf5, "x^2-4").unwrap();
        let a = FreeAlgebra::monogenic(gf5.clone(), &f);
        let r1 = FreeAlgebra::rank_one(gf5.clone());
        // x ↦ 1 is not a root of x^2-4
        let bad = AlgHom::new(a.clone(), r1.clone(), vec![r1.unit_elem(), r1.unit_elem()]);
        assert!(bad.is_err());
        let good = AlgHom::new(
            a,
            r1.clone(),
            vec![r1.unit_elem(), r1.unit_elem().scale(&gf5.from_i64(2))],
        );
        assert!(good.is_ok());
    }

    #[test]
    fn hom_search_matches_the_roots() {
        let gf2 = parse_ring("GF(2)").unwrap();
        let r1 = FreeAlgebra::rank_one(gf2.clone());
        let f4 = FreeAlgebra::monogenic(gf2.clone(), &parse_monic_poly(&gf2, "x^2+x+1").unwrap());
        assert!(find_algebra_homs(&f4, &r1).unwrap().is_empty());
        let split = FreeAlgebra::monogenic(gf2.clone(), &parse_monic_poly(&gf2, "x^2+x").unwrap());
        assert_eq!(find_algebra_homs(&split, &r1).unwrap().len(), 2);

        let r = parse_ring("Z[u]/(u^2-5)").unwrap();
        let golden = FreeAlgebra::monogenic(r.clone(), &parse_monic_poly(&r, "x^2-x-1").unwrap());
        assert!(find_algebra_homs(&golden, &FreeAlgebra::rank_one(r))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn exhaustive_hom_search_agrees_with_root_route() {
        let gf5 = parse_ring("GF(5)").unwrap();
        let f = parse_monic_poly(&gf5, "x^2-4").unwrap();
        let a = FreeAlgebra::monogenic(gf5.clone(), &f);
        let r1 = FreeAlgebra::rank_one(gf5.clone());
        let by_roots = find_algebra_homs(&a, &r1).unwrap();
        // rebuild through from_table to drop the monogenic tag, forcing the
        // exhaustive branch
        let table = (0..2)
            .map(|i| (0..2).map(|j| a.basis_product(i, j)).collect())
            .collect();
        let a2 = FreeAlgebra::from_table(gf5.clone(), 2, table, a.unit_coords()).unwrap();
        let by_search = find_algebra_homs(&a2, &r1).unwrap();
        assert_eq!(by_roots.len(), by_search.len());
        assert_eq!(by_search.len(), 2);
    }

    #[test]
    fn cayley_hamilton_spot_check() {
        let z9 = parse_ring("Z/9").unwrap();
        let f = parse_monic_poly(&z9, "x^3+2*x^2+5").unwrap();
        let alg = FreeAlgebra::monogenic(z9.clone(), &f);
        let a = alg.from_coords(vec![z9.from_i64(2), z9.from_i64(7), z9.from_i64(3)]);
        let chi = char_poly(&a);
        let mut acc = alg.unit_elem();
        for k in 1..=3 {
            acc = &(&acc * &a) + &alg.unit_elem().scale(&chi.signed_coeff(k));
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn from_table_rejects_broken_laws() {
        let gf3 = parse_ring("GF(3)").unwrap();
        // non-commutative: θ1·θ0 ≠ θ0·θ1
        let e0 = vec![gf3.one(), gf3.zero()];
        let e1 = vec![gf3.zero(), gf3.one()];
        let table = vec![vec![e0.clone(), e1.clone()], vec![e0.clone(), e1.clone()]];
        assert!(FreeAlgebra::from_table(gf3.clone(), 2, table, e0.clone()).is_err());
    }

    #[test]
    fn tensor_power_products_are_slotwise() {
        let gf7 = parse_ring("GF(7)").unwrap();
        let f = parse_monic_poly(&gf7, "x^2-2").unwrap();
        let a = FreeAlgebra::monogenic(gf7.clone(), &f);
        let t = FreeAlgebra::tensor_power(&a, 2);
        assert_eq!(t.rank(), 4);
        // (x⊗x)·(x⊗x) = x^2⊗x^2 = (2·1)⊗(2·1) = 4·(1⊗1)
        let xx = t.basis_elem(tuple_encode(2, &[1, 1]));
        let sq = &xx * &xx;
        let mut expect = t.zero_elem();
        expect = &expect + &t.basis_elem(0).scale(&gf7.from_i64(4));
        assert_eq!(sq, expect);
    }
}
