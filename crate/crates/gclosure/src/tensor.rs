//! Tensor powers A^⊗n, permutation actions, and orbit-sum bases of the
//! invariant subrings (A^⊗n)^G.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{outer_product, tuple_decode, tuple_encode, AlgElem, FreeAlgebra};
use crate::error::{Error, Result};
use crate::ring::{Payload, RingElem};

/// Largest tensor-algebra dimension we will materialize coordinates for.
pub const TENSOR_DIM_GUARD: usize = 65536;

/// A permutation of `{1, …, n}`, stored 0-indexed in one-line form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    /// Build from a product of cycles given with 1-indexed points, applied
    /// left to right.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
        let mut map: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for p in cycle {
                if *p == 0 || *p > n {
                    return Err(Error::Precondition(format!(
                        "cycle point {p} out of range 1..={n}"
                    )));
                }
            }
            let mut cyc_map: Vec<usize> = (0..n).collect();
            for (i, &pt) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                cyc_map[pt - 1] = next - 1;
            }
            for slot in map.iter_mut() {
                *slot = cyc_map[*slot];
            }
        }
        let mut seen = vec![false; n];
        for &x in &map {
            if seen[x] {
                return Err(Error::Precondition(
                    "cycles do not define a permutation".into(),
                ));
            }
            seen[x] = true;
        }
        Ok(Perm(map))
    }

    pub fn one_line(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn is_even(&self) -> bool {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut parity = true;
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut j = i;
            let mut len = 0;
            while !seen[j] {
                seen[j] = true;
                j = self.0[j];
                len += 1;
            }
            if len % 2 == 0 {
                parity = !parity;
            }
        }
        parity
    }

    /// Cycle notation with 1-indexed points, e.g. `(1,2,3)(4,5)`.
    pub fn cycle_string(&self) -> String {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for i in 0..n {
            if seen[i] || self.0[i] == i {
                seen[i] = true;
                continue;
            }
            let mut cycle = vec![i];
            seen[i] = true;
            let mut j = self.0[i];
            while j != i {
                seen[j] = true;
                cycle.push(j);
                j = self.0[j];
            }
            out.push('(');
            out.push_str(
                &cycle
                    .iter()
                    .map(|p| (p + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

/// A permutation group given by generators, with the full element list
/// enumerated at construction.
#[derive(Clone)]
pub struct PermGroup {
    inner: Arc<GroupInner>,
}

struct GroupInner {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    name: String,
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree() == other.degree() && self.elements() == other.elements()
    }
}

impl Eq for PermGroup {}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name(), self.order())
    }
}

impl PermGroup {
    pub fn from_generators(
        degree: usize,
        generators: Vec<Perm>,
        name: impl Into<String>,
    ) -> Result<PermGroup> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::Dimension("generator degree mismatch".into()));
            }
        }
        // closure under composition, breadth-first from the identity
        let mut elements = vec![Perm::identity(degree)];
        let mut frontier = elements.clone();
        while let Some(p) = frontier.pop() {
            for g in &generators {
                let q = g.compose(&p);
                if !elements.contains(&q) {
                    elements.push(q.clone());
                    frontier.push(q);
                }
            }
        }
        elements.sort();
        Ok(PermGroup {
            inner: Arc::new(GroupInner {
                degree,
                generators,
                elements,
                name: name.into(),
            }),
        })
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::from_generators(degree, vec![], "1").unwrap()
    }

    pub fn symmetric(n: usize) -> PermGroup {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles(n, &[vec![1, 2]]).unwrap());
            gens.push(Perm::from_cycles(n, &[(1..=n).collect()]).unwrap());
        }
        PermGroup::from_generators(n, gens, format!("S{n}")).unwrap()
    }

    pub fn alternating(n: usize) -> PermGroup {
        let mut gens = Vec::new();
        for i in 1..=(n.saturating_sub(2)) {
            gens.push(Perm::from_cycles(n, &[vec![i, i + 1, i + 2]]).unwrap());
        }
        PermGroup::from_generators(n, gens, format!("A{n}")).unwrap()
    }

    /// The dihedral group ⟨(13),(1234)⟩ of order 8 inside S4.
    pub fn dihedral4() -> PermGroup {
        let gens = vec![
            Perm::from_cycles(4, &[vec![1, 3]]).unwrap(),
            Perm::from_cycles(4, &[vec![1, 2, 3, 4]]).unwrap(),
        ];
        PermGroup::from_generators(4, gens, "D4").unwrap()
    }

    /// `S_{n1} × … × S_{nk}` acting block-wise on `n1 + … + nk` points.
    pub fn product_symmetric(blocks: &[usize]) -> PermGroup {
        let n: usize = blocks.iter().sum();
        let mut gens = Vec::new();
        let mut off = 0;
        for &b in blocks {
            if b >= 2 {
                gens.push(Perm::from_cycles(n, &[vec![off + 1, off + 2]]).unwrap());
                gens.push(Perm::from_cycles(n, &[(off + 1..=off + b).collect()]).unwrap());
            }
            off += b;
        }
        let name = blocks
            .iter()
            .map(|b| format!("S{b}"))
            .collect::<Vec<_>>()
            .join("x");
        PermGroup::from_generators(n, gens, name).unwrap()
    }

    /// Parse `S4`, `A3`, `D4`, `S2xS2`, `C4`, `1`, or cycle notation like
    /// `[(1,3),(1,2,3,4)]`; `degree` fixes the ambient number of points.
    pub fn parse(text: &str, degree: usize) -> Result<PermGroup> {
        let t = text.trim();
        if t == "1" {
            return Ok(PermGroup::trivial(degree));
        }
        if let Some(rest) = t.strip_prefix('[') {
            let rest = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::parse(t.len(), "expected `]`"))?;
            let mut cycles_per_gen: Vec<Vec<Vec<usize>>> = Vec::new();
            let mut current: Vec<Vec<usize>> = Vec::new();
            let mut chars = rest.char_indices().peekable();
            while let Some((i, c)) = chars.next() {
                match c {
                    '(' => {
                        let mut cycle = Vec::new();
                        let mut num = String::new();
                        for (j, d) in chars.by_ref() {
                            match d {
                                '0'..='9' => num.push(d),
                                ',' => {
                                    if num.is_empty() {
                                        return Err(Error::parse(j, "expected a point"));
                                    }
                                    cycle.push(num.parse().unwrap());
                                    num.clear();
                                }
                                ')' => {
                                    if !num.is_empty() {
                                        cycle.push(num.parse().unwrap());
                                    }
                                    break;
                                }
                                ' ' => {}
                                _ => return Err(Error::parse(j, format!("unexpected `{d}`"))),
                            }
                        }
                        current.push(cycle);
                        if let Some(&(_, next)) = chars.peek() {
                            if next == ',' {
                                chars.next();
                                cycles_per_gen.push(std::mem::take(&mut current));
                            }
                        }
                    }
                    ' ' => {}
                    _ => return Err(Error::parse(i, format!("unexpected `{c}`"))),
                }
            }
            if !current.is_empty() {
                cycles_per_gen.push(current);
            }
            let gens = cycles_per_gen
                .iter()
                .map(|cycles| Perm::from_cycles(degree, cycles))
                .collect::<Result<Vec<_>>>()?;
            return PermGroup::from_generators(degree, gens, t);
        }
        if t == "D4" {
            if degree != 4 {
                return Err(Error::Precondition("D4 acts on 4 points".into()));
            }
            return Ok(PermGroup::dihedral4());
        }
        if let Some(rest) = t.strip_prefix('C') {
            if let Ok(n) = rest.parse::<usize>() {
                if n != degree {
                    return Err(Error::Precondition(format!("C{n} needs degree {n}")));
                }
                let gen = Perm::from_cycles(n, &[(1..=n).collect()])?;
                return PermGroup::from_generators(n, vec![gen], format!("C{n}"));
            }
        }
        if let Some(rest) = t.strip_prefix('A') {
            if let Ok(n) = rest.parse::<usize>() {
                if n != degree {
                    return Err(Error::Precondition(format!("A{n} needs degree {n}")));
                }
                return Ok(PermGroup::alternating(n));
            }
        }
        if t.starts_with('S') {
            let parts: Vec<&str> = t.split('x').collect();
            let mut blocks = Vec::new();
            for part in &parts {
                let rest = part
                    .strip_prefix('S')
                    .ok_or_else(|| Error::parse(0, format!("cannot parse group `{t}`")))?;
                blocks.push(
                    rest.parse::<usize>()
                        .map_err(|_| Error::parse(0, format!("cannot parse group `{t}`")))?,
                );
            }
            let total: usize = blocks.iter().sum();
            if total != degree {
                return Err(Error::Precondition(format!(
                    "group `{t}` acts on {total} points, expected {degree}"
                )));
            }
            if blocks.len() == 1 {
                return Ok(PermGroup::symmetric(blocks[0]));
            }
            return Ok(PermGroup::product_symmetric(&blocks));
        }
        Err(Error::parse(0, format!("cannot parse group `{t}`")))
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn order(&self) -> usize {
        self.inner.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.inner.elements
    }

    pub fn generators(&self) -> &[Perm] {
        &self.inner.generators
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.inner.elements.binary_search(p).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree() == other.degree() && self.elements().iter().all(|p| other.contains(p))
    }

    /// The conjugate group `σ G σ⁻¹`.
    pub fn conjugate(&self, sigma: &Perm) -> PermGroup {
        let si = sigma.inverse();
        let gens: Vec<Perm> = self
            .generators()
            .iter()
            .map(|g| sigma.compose(g).compose(&si))
            .collect();
        PermGroup::from_generators(
            self.degree(),
            gens,
            format!("{}^{}", self.name(), sigma.cycle_string()),
        )
        .unwrap()
    }
}

/// The tensor power `A^{⊗n}` of a rank-n algebra, with basis indexed by
/// tuples `(i_1, …, i_n)` in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorAlgebra {
    base: FreeAlgebra,
    power: usize,
    algebra: FreeAlgebra,
}

impl fmt::Debug for TensorAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorAlgebra({:?} ^⊗{})", self.base, self.power)
    }
}

impl TensorAlgebra {
    pub fn new(base: FreeAlgebra, power: usize) -> Result<TensorAlgebra> {
        let n = base.rank();
        let dim = n.checked_pow(power as u32).unwrap_or(usize::MAX);
        if dim > TENSOR_DIM_GUARD {
            return Err(Error::guard(
                format!("tensor algebra dimension {n}^{power}"),
                TENSOR_DIM_GUARD,
            ));
        }
        let algebra = FreeAlgebra::tensor_power(&base, power);
        Ok(TensorAlgebra {
            base,
            power,
            algebra,
        })
    }

    pub fn base(&self) -> &FreeAlgebra {
        &self.base
    }

    pub fn power(&self) -> usize {
        self.power
    }

    /// The tensor power viewed as a free algebra of rank `n^power`.
    pub fn as_algebra(&self) -> &FreeAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.rank()
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        assert_eq!(tuple.len(), self.power);
        tuple_encode(self.base.rank(), tuple)
    }

    pub fn decode(&self, idx: usize) -> Vec<usize> {
        tuple_decode(self.base.rank(), self.power, idx)
    }

    /// `v_1 ⊗ v_2 ⊗ … ⊗ v_power`.
    pub fn pure_tensor(&self, factors: &[AlgElem]) -> AlgElem {
        assert_eq!(factors.len(), self.power, "one factor per slot");
        for f in factors {
            assert_eq!(f.algebra(), &self.base);
        }
        let ring = self.base.ring();
        let refs: Vec<&[Payload]> = factors.iter().map(|f| f.payload_coords()).collect();
        self.algebra.from_payload_coords(outer_product(ring, &refs))
    }

    /// `1 ⊗ … ⊗ a ⊗ … ⊗ 1` with `a` in the (1-indexed) slot.
    pub fn conjugate_embed(&self, a: &AlgElem, slot: usize) -> Result<AlgElem> {
        if slot == 0 || slot > self.power {
            return Err(Error::Precondition(format!(
                "slot {slot} out of range 1..={}",
                self.power
            )));
        }
        let factors: Vec<AlgElem> = (1..=self.power)
            .map(|i| {
                if i == slot {
                    a.clone()
                } else {
                    self.base.unit_elem()
                }
            })
            .collect();
        Ok(self.pure_tensor(&factors))
    }

    /// The index action `(i_1,…,i_n) ↦ (i_{σ⁻¹(1)},…,i_{σ⁻¹(n)})` extended
    /// linearly; a ring automorphism of the tensor power.
    pub fn perm_action(&self, sigma: &Perm, t: &AlgElem) -> Result<AlgElem> {
        if sigma.degree() != self.power {
            return Err(Error::Dimension(format!(
                "permutation degree {} does not match tensor power {}",
                sigma.degree(),
                self.power
            )));
        }
        assert_eq!(t.algebra(), &self.algebra);
        let coords = t.payload_coords();
        let mut out = vec![self.base.ring().zero_p(); coords.len()];
        for (j, slot) in out.iter_mut().enumerate() {
            let tuple_j = self.decode(j);
            // source tuple I = J ∘ σ
            let tuple_i: Vec<usize> = (0..self.power).map(|k| tuple_j[sigma.apply(k)]).collect();
            *slot = coords[self.encode(&tuple_i)].clone();
        }
        Ok(self.algebra.from_payload_coords(out))
    }
}

/// One G-orbit of basis tuples; the lexicographically least tuple is the
/// representative.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub rep: Vec<usize>,
    pub members: Vec<usize>,
}

/// The module basis of `(A^⊗n)^G` by G-orbit sums of basis tensors.
#[derive(Clone)]
pub struct OrbitBasis {
    inner: Arc<OrbitBasisInner>,
}

struct OrbitBasisInner {
    tensor: TensorAlgebra,
    group: PermGroup,
    orbits: Vec<Orbit>,
    orbit_of: Vec<u32>,
    /// Orbit-pair product expansions, filled on demand. Only kept for bases
    /// small enough that the table stays tiny.
    pair_cache:
        std::sync::Mutex<std::collections::HashMap<(u32, u32), std::sync::Arc<Vec<Payload>>>>,
}

impl PartialEq for OrbitBasis {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.tensor() == other.tensor() && self.group() == other.group())
    }
}

impl Eq for OrbitBasis {}

impl fmt::Debug for OrbitBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "OrbitBasis({} orbits of {} on {:?})",
            self.orbit_count(),
            self.group().name(),
            self.tensor()
        )
    }
}

impl OrbitBasis {
    pub fn new(tensor: TensorAlgebra, group: PermGroup) -> Result<OrbitBasis> {
        if group.degree() != tensor.power() {
            return Err(Error::Dimension(format!(
                "group degree {} does not match tensor power {}",
                group.degree(),
                tensor.power()
            )));
        }
        let dim = tensor.dim();
        let mut orbit_of = vec![u32::MAX; dim];
        let mut orbits = Vec::new();
        for start in 0..dim {
            if orbit_of[start] != u32::MAX {
                continue;
            }
            let id = orbits.len() as u32;
            let tuple = tensor.decode(start);
            let mut members: Vec<usize> = group
                .elements()
                .iter()
                .map(|sigma| {
                    let si = sigma.inverse();
                    let image: Vec<usize> =
                        (0..tensor.power()).map(|k| tuple[si.apply(k)]).collect();
                    tensor.encode(&image)
                })
                .collect();
            members.sort();
            members.dedup();
            for &m in &members {
                orbit_of[m] = id;
            }
            orbits.push(Orbit {
                rep: tuple,
                members,
            });
        }
        Ok(OrbitBasis {
            inner: Arc::new(OrbitBasisInner {
                tensor,
                group,
                orbits,
                orbit_of,
                pair_cache: std::sync::Mutex::new(std::collections::HashMap::new()),
            }),
        })
    }

    const PAIR_CACHE_LIMIT: usize = 128;

    /// Expansion coordinates (over this basis) of the product `e_i · e_j` of
    /// two orbit sums, verified invariant. Cached for small bases, since the
    /// same products drive both datum verification and resolvent relations.
    pub fn product_expansion(&self, i: usize, j: usize) -> Result<Arc<Vec<Payload>>> {
        let key = (i.min(j) as u32, i.max(j) as u32);
        if self.orbit_count() <= Self::PAIR_CACHE_LIMIT {
            if let Some(hit) = self.inner.pair_cache.lock().unwrap().get(&key) {
                return Ok(hit.clone());
            }
        }
        let prod = &self.orbit_sum(i) * &self.orbit_sum(j);
        let expansion = expand_invariant(&prod, self)?;
        let coords: Arc<Vec<Payload>> = Arc::new(
            expansion
                .coords()
                .iter()
                .map(|c| c.payload().clone())
                .collect(),
        );
        if self.orbit_count() <= Self::PAIR_CACHE_LIMIT {
            self.inner
                .pair_cache
                .lock()
                .unwrap()
                .insert(key, coords.clone());
        }
        Ok(coords)
    }

    /// Ring-element view of [`OrbitBasis::product_expansion`].
    pub fn product_expansion_elems(&self, i: usize, j: usize) -> Result<Vec<RingElem>> {
        let ring = self.tensor().base().ring().clone();
        Ok(self
            .product_expansion(i, j)?
            .iter()
            .map(|p| RingElem::from_payload(ring.clone(), p.clone()))
            .collect())
    }

    pub fn tensor(&self) -> &TensorAlgebra {
        &self.inner.tensor
    }

    pub fn group(&self) -> &PermGroup {
        &self.inner.group
    }

    pub fn orbit_count(&self) -> usize {
        self.inner.orbits.len()
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.inner.orbits
    }

    pub fn orbit_of_index(&self, flat: usize) -> usize {
        self.inner.orbit_of[flat] as usize
    }

    pub fn orbit_of_tuple(&self, tuple: &[usize]) -> usize {
        self.orbit_of_index(self.tensor().encode(tuple))
    }

    /// The orbit sum `e_O` as an element of the tensor power.
    pub fn orbit_sum(&self, orbit: usize) -> AlgElem {
        let tensor = self.tensor();
        let ring = tensor.base().ring();
        let mut coords = vec![ring.zero_p(); tensor.dim()];
        for &m in &self.inner.orbits[orbit].members {
            coords[m] = ring.one_p();
        }
        tensor.as_algebra().from_payload_coords(coords)
    }

    /// For each orbit of the coarser basis (same tensor, larger group), the
    /// ids of this basis's orbits that partition it.
    pub fn suborbits_within(&self, coarser: &OrbitBasis) -> Result<Vec<Vec<usize>>> {
        if self.tensor() != coarser.tensor() {
            return Err(Error::Dimension(
                "orbit bases over different tensor algebras".into(),
            ));
        }
        if !self.group().is_subgroup_of(coarser.group()) {
            return Err(Error::Precondition(format!(
                "{} is not a subgroup of {}",
                self.group().name(),
                coarser.group().name()
            )));
        }
        let mut out = vec![Vec::new(); coarser.orbit_count()];
        for (id, orbit) in self.orbits().iter().enumerate() {
            let big = coarser.orbit_of_index(orbit.members[0]);
            out[big].push(id);
        }
        Ok(out)
    }
}

pub(crate) fn tuple_string(tuple: &[usize]) -> String {
    format!(
        "({})",
        tuple
            .iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

/// A G-invariant element stored by its coordinates on the orbit basis.
#[derive(Clone)]
pub struct InvariantElem {
    basis: OrbitBasis,
    coords: Vec<RingElem>,
}

impl PartialEq for InvariantElem {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.coords == other.coords
    }
}

impl Eq for InvariantElem {}

impl fmt::Debug for InvariantElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}·e{}", c, tuple_string(&self.basis.orbits()[i].rep)))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl InvariantElem {
    pub fn new(basis: OrbitBasis, coords: Vec<RingElem>) -> InvariantElem {
        assert_eq!(coords.len(), basis.orbit_count());
        InvariantElem { basis, coords }
    }

    pub fn basis(&self) -> &OrbitBasis {
        &self.basis
    }

    pub fn coords(&self) -> &[RingElem] {
        &self.coords
    }

    /// The literal expansion into the tensor power.
    pub fn expand(&self) -> AlgElem {
        let tensor = self.basis.tensor();
        let ring = tensor.base().ring();
        let mut coords = vec![ring.zero_p(); tensor.dim()];
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &m in &self.basis.orbits()[i].members {
                coords[m] = c.payload().clone();
            }
        }
        tensor.as_algebra().from_payload_coords(coords)
    }

    pub fn mul(&self, other: &InvariantElem) -> Result<InvariantElem> {
        assert_eq!(self.basis, other.basis);
        let prod = &self.expand() * &other.expand();
        expand_invariant(&prod, &self.basis)
    }

    pub fn add(&self, other: &InvariantElem) -> InvariantElem {
        assert_eq!(self.basis, other.basis);
        let coords = self
            .coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a + b)
            .collect();
        InvariantElem {
            basis: self.basis.clone(),
            coords,
        }
    }
}

/// Read a G-fixed tensor element off the orbit basis, verifying that its
/// coordinate is constant across each orbit.
pub fn expand_invariant(t: &AlgElem, basis: &OrbitBasis) -> Result<InvariantElem> {
    let tensor = basis.tensor();
    assert_eq!(t.algebra(), tensor.as_algebra());
    let ring = tensor.base().ring();
    let coords = t.payload_coords();
    let mut out = Vec::with_capacity(basis.orbit_count());
    for orbit in basis.orbits() {
        let rep_idx = orbit.members[0];
        let value = &coords[rep_idx];
        for &m in &orbit.members[1..] {
            if coords[m] != *value {
                return Err(Error::NotInvariant(
                    tuple_string(&orbit.rep),
                    tuple_string(&tensor.decode(m)),
                ));
            }
        }
        out.push(RingElem::from_payload(ring.clone(), value.clone()));
    }
    Ok(InvariantElem::new(basis.clone(), out))
}

/// The k-th elementary symmetric polynomial in the slot embeddings
/// `a^{(1)}, …, a^{(n)}`, expanded over the Sₙ orbit basis. `e_0 = 1`.
pub fn elementary_invariant(basis: &OrbitBasis, a: &AlgElem, k: usize) -> Result<InvariantElem> {
    let tensor = basis.tensor();
    let n = tensor.power();
    if k > n {
        return Err(Error::Precondition(format!("e_{k} of {n} slots")));
    }
    let mut acc = if k == 0 {
        tensor.as_algebra().unit_elem()
    } else {
        tensor.as_algebra().zero_elem()
    };
    if k > 0 {
        for subset in subsets_of_size(n, k) {
            let factors: Vec<AlgElem> = (0..n)
                .map(|i| {
                    if subset.contains(&i) {
                        a.clone()
                    } else {
                        tensor.base().unit_elem()
                    }
                })
                .collect();
            acc = &acc + &tensor.pure_tensor(&factors);
        }
    }
    expand_invariant(&acc, basis)
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    rec(0, n, k, &mut current, &mut out);
    out
}

/// `γ(a_1,…,a_n) = Σ_{σ even} a_{σ(1)}⊗…⊗a_{σ(n)}` over the Aₙ orbit basis,
/// together with its transposed partner `γ'` (the odd-coset sum).
pub fn gamma(basis: &OrbitBasis, args: &[AlgElem]) -> Result<(InvariantElem, InvariantElem)> {
    let tensor = basis.tensor();
    let n = tensor.power();
    if args.len() != n {
        return Err(Error::Precondition(format!(
            "γ takes {n} arguments, got {}",
            args.len()
        )));
    }
    let sym = PermGroup::symmetric(n);
    let mut even = tensor.as_algebra().zero_elem();
    let mut odd = tensor.as_algebra().zero_elem();
    for sigma in sym.elements() {
        let factors: Vec<AlgElem> = (0..n).map(|k| args[sigma.apply(k)].clone()).collect();
        let term = tensor.pure_tensor(&factors);
        if sigma.is_even() {
            even = &even + &term;
        } else {
            odd = &odd + &term;
        }
    }
    Ok((
        expand_invariant(&even, basis)?,
        expand_invariant(&odd, basis)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_monic_poly, parse_ring};

    #[test]
    fn group_orders() {
        assert_eq!(PermGroup::symmetric(4).order(), 24);
        assert_eq!(PermGroup::alternating(3).order(), 3);
        assert_eq!(PermGroup::alternating(4).order(), 12);
        assert_eq!(PermGroup::dihedral4().order(), 8);
        assert_eq!(PermGroup::trivial(3).order(), 1);
        assert_eq!(PermGroup::product_symmetric(&[2, 2]).order(), 4);
    }

    #[test]
    fn group_parsing() {
        assert_eq!(PermGroup::parse("S4", 4).unwrap(), PermGroup::symmetric(4));
        assert_eq!(
            PermGroup::parse("A3", 3).unwrap(),
            PermGroup::alternating(3)
        );
        assert_eq!(PermGroup::parse("D4", 4).unwrap(), PermGroup::dihedral4());
        assert_eq!(
            PermGroup::parse("[(1,3),(1,2,3,4)]", 4).unwrap(),
            PermGroup::dihedral4()
        );
        assert_eq!(
            PermGroup::parse("S2xS2", 4).unwrap(),
            PermGroup::product_symmetric(&[2, 2])
        );
        assert_eq!(PermGroup::parse("1", 2).unwrap().order(), 1);
        assert!(PermGroup::parse("S3", 4).is_err());
    }

    #[test]
    fn dihedral_membership() {
        let d4 = PermGroup::dihedral4();
        assert!(d4.contains(&Perm::from_cycles(4, &[vec![1, 4], vec![2, 3]]).unwrap()));
        assert!(!d4.contains(&Perm::from_cycles(4, &[vec![1, 2]]).unwrap()));
        assert!(d4.is_subgroup_of(&PermGroup::symmetric(4)));
        assert!(!PermGroup::symmetric(4).is_subgroup_of(&d4));
    }

    #[test]
    fn perm_composition_and_parity() {
        let s = Perm::from_cycles(4, &[vec![1, 2, 3, 4]]).unwrap();
        assert!(!s.is_even());
        let s2 = s.compose(&s);
        assert_eq!(s2, Perm::from_cycles(4, &[vec![1, 3], vec![2, 4]]).unwrap());
        assert!(s2.is_even());
        assert_eq!(s.compose(&s.inverse()), Perm::identity(4));
        assert_eq!(s.cycle_string(), "(1,2,3,4)");
    }

    fn cubic_tensor() -> (TensorAlgebra, FreeAlgebra) {
        let gf7 = parse_ring("GF(7)").unwrap();
        let f = parse_monic_poly(&gf7, "x^3-x").unwrap();
        let a = FreeAlgebra::monogenic(gf7, &f);
        (TensorAlgebra::new(a.clone(), 3).unwrap(), a)
    }

    #[test]
    fn guard_rejects_large_powers() {
        let gf2 = parse_ring("GF(2)").unwrap();
        let f = parse_monic_poly(&gf2, "x^7+x+1").unwrap();
        let a = FreeAlgebra::monogenic(gf2, &f);
        assert!(matches!(TensorAlgebra::new(a, 7), Err(Error::Guard { .. })));
    }

    #[test]
    fn perm_action_on_pure_tensors() {
        let (t, a) = cubic_tensor();
        let x = a.basis_elem(1);
        let one = a.unit_elem();
        let swap = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
        // (12) on x⊗1⊗1 gives 1⊗x⊗1
        let lhs = t
            .perm_action(
                &swap,
                &t.pure_tensor(&[x.clone(), one.clone(), one.clone()]),
            )
            .unwrap();
        let rhs = t.pure_tensor(&[one.clone(), x.clone(), one.clone()]);
        assert_eq!(lhs, rhs);
        // identity acts trivially
        let id = Perm::identity(3);
        assert_eq!(t.perm_action(&id, &rhs).unwrap(), rhs);
    }

    #[test]
    fn four_cycle_has_order_four() {
        let gf5 = parse_ring("GF(5)").unwrap();
        let f = parse_monic_poly(&gf5, "x^4-1").unwrap();
        let a = FreeAlgebra::monogenic(gf5, &f);
        let t = TensorAlgebra::new(a.clone(), 4).unwrap();
        let c = Perm::from_cycles(4, &[vec![1, 2, 3, 4]]).unwrap();
        let v = t.pure_tensor(&[
            a.basis_elem(0),
            a.basis_elem(1),
            a.basis_elem(2),
            a.basis_elem(3),
        ]);
        let mut w = v.clone();
        for _ in 0..4 {
            w = t.perm_action(&c, &w).unwrap();
        }
        assert_eq!(w, v);
        let once = t.perm_action(&c, &v).unwrap();
        assert_ne!(once, v);
    }

    #[test]
    fn perm_action_is_multiplicative() {
        let (t, a) = cubic_tensor();
        let u = t.pure_tensor(&[a.basis_elem(1), a.basis_elem(2), a.unit_elem()]);
        let v = t.pure_tensor(&[a.basis_elem(2), a.basis_elem(1), a.basis_elem(1)]);
        let sigma = Perm::from_cycles(3, &[vec![1, 2, 3]]).unwrap();
        let lhs = t.perm_action(&sigma, &(&u * &v)).unwrap();
        let rhs = &t.perm_action(&sigma, &u).unwrap() * &t.perm_action(&sigma, &v).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugate_embeds_multiply_to_the_diagonal() {
        let (t, a) = cubic_tensor();
        let x = a.basis_elem(1);
        let e1 = t.conjugate_embed(&x, 1).unwrap();
        let e2 = t.conjugate_embed(&x, 2).unwrap();
        let e3 = t.conjugate_embed(&x, 3).unwrap();
        let prod = &(&e1 * &e2) * &e3;
        assert_eq!(prod, t.pure_tensor(&[x.clone(), x.clone(), x.clone()]));
        assert!(t.conjugate_embed(&x, 0).is_err());
        assert!(t.conjugate_embed(&x, 4).is_err());
        // the unit embeds to the unit
        let u = t.conjugate_embed(&a.unit_elem(), 2).unwrap();
        assert_eq!(u, t.as_algebra().unit_elem());
    }

    #[test]
    fn orbit_counts_match_burnside() {
        let (t3, _) = cubic_tensor();
        let s3 = OrbitBasis::new(t3.clone(), PermGroup::symmetric(3)).unwrap();
        assert_eq!(s3.orbit_count(), 10);
        let a3 = OrbitBasis::new(t3, PermGroup::alternating(3)).unwrap();
        assert_eq!(a3.orbit_count(), 11);

        let gf7 = parse_ring("GF(7)").unwrap();
        let f = parse_monic_poly(&gf7, "x^4+1").unwrap();
        let a = FreeAlgebra::monogenic(gf7, &f);
        let t4 = TensorAlgebra::new(a, 4).unwrap();
        let d4 = OrbitBasis::new(t4.clone(), PermGroup::dihedral4()).unwrap();
        assert_eq!(d4.orbit_count(), 55);
        let s4 = OrbitBasis::new(t4, PermGroup::symmetric(4)).unwrap();
        assert_eq!(s4.orbit_count(), 35);
    }

    #[test]
    fn burnside_formula_holds_for_every_constructed_group() {
        let (t, _) = cubic_tensor();
        for group in [
            PermGroup::symmetric(3),
            PermGroup::alternating(3),
            PermGroup::trivial(3),
            PermGroup::parse("[(1,2)]", 3).unwrap(),
        ] {
            let basis = OrbitBasis::new(t.clone(), group.clone()).unwrap();
            let mut fixed = 0usize;
            for sigma in group.elements() {
                // tuples fixed by σ: one free choice per cycle
                let mut seen = vec![false; 3];
                let mut cycles = 0;
                for i in 0..3 {
                    if seen[i] {
                        continue;
                    }
                    cycles += 1;
                    let mut j = i;
                    while !seen[j] {
                        seen[j] = true;
                        j = sigma.apply(j);
                    }
                }
                fixed += 3usize.pow(cycles);
            }
            assert_eq!(basis.orbit_count(), fixed / group.order());
        }
    }

    #[test]
    fn expand_invariant_round_trips() {
        let (t, a) = cubic_tensor();
        let basis = OrbitBasis::new(t.clone(), PermGroup::symmetric(3)).unwrap();
        let x = a.basis_elem(1);
        let e1 = elementary_invariant(&basis, &x, 1).unwrap();
        let e2 = elementary_invariant(&basis, &x, 2).unwrap();
        let prod = e1.mul(&e2).unwrap();
        let again = expand_invariant(&prod.expand(), &basis).unwrap();
        assert_eq!(prod, again);
    }

    #[test]
    fn non_invariant_elements_are_rejected() {
        let (t, a) = cubic_tensor();
        let basis = OrbitBasis::new(t.clone(), PermGroup::symmetric(3)).unwrap();
        let x = a.basis_elem(1);
        let anti = &t.conjugate_embed(&x, 1).unwrap() - &t.conjugate_embed(&x, 2).unwrap();
        assert!(matches!(
            expand_invariant(&anti, &basis),
            Err(Error::NotInvariant(_, _))
        ));
    }

    #[test]
    fn unit_expands_on_the_all_ones_orbit() {
        let (t, _) = cubic_tensor();
        let basis = OrbitBasis::new(t.clone(), PermGroup::symmetric(3)).unwrap();
        let unit = t.as_algebra().unit_elem();
        let inv = expand_invariant(&unit, &basis).unwrap();
        let diag = basis.orbit_of_tuple(&[0, 0, 0]);
        for (i, c) in inv.coords().iter().enumerate() {
            if i == diag {
                assert!(c.is_one());
            } else {
                assert!(c.is_zero());
            }
        }
    }

    #[test]
    fn elementary_invariants_of_x() {
        // e1(x) over GF(5)[x]/(x^2−2): coefficient 1 on the orbit of (1,2)
        let gf5 = parse_ring("GF(5)").unwrap();
        let f = parse_monic_poly(&gf5, "x^2-2").unwrap();
        let a = FreeAlgebra::monogenic(gf5.clone(), &f);
        let t = TensorAlgebra::new(a.clone(), 2).unwrap();
        let basis = OrbitBasis::new(t.clone(), PermGroup::symmetric(2)).unwrap();
        let x = a.basis_elem(1);
        let e1 = elementary_invariant(&basis, &x, 1).unwrap();
        let mixed = basis.orbit_of_tuple(&[0, 1]);
        for (i, c) in e1.coords().iter().enumerate() {
            if i == mixed {
                assert!(c.is_one());
            } else {
                assert!(c.is_zero(), "unexpected coefficient at orbit {i}");
            }
        }
        // e_n(a) = a^{⊗n}
        let en = elementary_invariant(&basis, &x, 2).unwrap();
        assert_eq!(en.expand(), t.pure_tensor(&[x.clone(), x.clone()]));
        // e_1(1) = n·1
        let e1_unit = elementary_invariant(&basis, &a.unit_elem(), 1).unwrap();
        let two = t.as_algebra().unit_elem().scale(&gf5.from_i64(2));
        assert_eq!(e1_unit.expand(), two);
    }

    #[test]
    fn gamma_matches_the_cyclic_sum() {
        let zab = parse_ring("Z[a,b]").unwrap();
        let f = parse_monic_poly(&zab, "x^3+a*x+b").unwrap();
        let a = FreeAlgebra::monogenic(zab, &f);
        let t = TensorAlgebra::new(a.clone(), 3).unwrap();
        let basis = OrbitBasis::new(t.clone(), PermGroup::alternating(3)).unwrap();
        let args = [a.basis_elem(0), a.basis_elem(1), a.basis_elem(2)];
        let (g, gp) = gamma(&basis, &args).unwrap();
        // γ(1,x,x²) = 1⊗x⊗x² + x⊗x²⊗1 + x²⊗1⊗x
        let mut expect = t.pure_tensor(&[args[0].clone(), args[1].clone(), args[2].clone()]);
        expect = &expect + &t.pure_tensor(&[args[1].clone(), args[2].clone(), args[0].clone()]);
        expect = &expect + &t.pure_tensor(&[args[2].clone(), args[0].clone(), args[1].clone()]);
        assert_eq!(g.expand(), expect);
        // γ' is the other three
        let mut expect_p = t.pure_tensor(&[args[0].clone(), args[2].clone(), args[1].clone()]);
        expect_p = &expect_p + &t.pure_tensor(&[args[2].clone(), args[1].clone(), args[0].clone()]);
        expect_p = &expect_p + &t.pure_tensor(&[args[1].clone(), args[0].clone(), args[2].clone()]);
        assert_eq!(gp.expand(), expect_p);
    }

    #[test]
    fn gamma_on_two_slots_is_a_pure_tensor() {
        let gf5 = parse_ring("GF(5)").unwrap();
        let f = parse_monic_poly(&gf5, "x^2-2").unwrap();
        let alg = FreeAlgebra::monogenic(gf5, &f);
        let t = TensorAlgebra::new(alg.clone(), 2).unwrap();
        let basis = OrbitBasis::new(t.clone(), PermGroup::trivial(2)).unwrap();
        let (g, gp) = gamma(&basis, &[alg.basis_elem(0), alg.basis_elem(1)]).unwrap();
        assert_eq!(
            g.expand(),
            t.pure_tensor(&[alg.basis_elem(0), alg.basis_elem(1)])
        );
        assert_eq!(
            gp.expand(),
            t.pure_tensor(&[alg.basis_elem(1), alg.basis_elem(0)])
        );
    }

    #[test]
    fn gamma_of_constant_arguments() {
        let (t, a) = cubic_tensor();
        let basis = OrbitBasis::new(t.clone(), PermGroup::alternating(3)).unwrap();
        let x = a.basis_elem(1);
        let (g, _) = gamma(&basis, &[x.clone(), x.clone(), x.clone()]).unwrap();
        let expect = t
            .pure_tensor(&[x.clone(), x.clone(), x.clone()])
            .scale(&a.ring().from_i64(3));
        assert_eq!(g.expand(), expect);
    }

    #[test]
    fn gamma_plus_partner_is_symmetric_but_gamma_alone_is_not() {
        let (t, a) = cubic_tensor();
        let a3 = OrbitBasis::new(t.clone(), PermGroup::alternating(3)).unwrap();
        let s3 = OrbitBasis::new(t.clone(), PermGroup::symmetric(3)).unwrap();
        let args = [a.basis_elem(0), a.basis_elem(1), a.basis_elem(2)];
        let (g, gp) = gamma(&a3, &args).unwrap();
        assert!(expand_invariant(&(&g.expand() + &gp.expand()), &s3).is_ok());
        assert!(expand_invariant(&(&g.expand() * &gp.expand()), &s3).is_ok());
        assert!(expand_invariant(&g.expand(), &s3).is_err());
    }

    #[test]
    fn suborbit_partition_covers_everything() {
        let (t, _) = cubic_tensor();
        let a3 = OrbitBasis::new(t.clone(), PermGroup::alternating(3)).unwrap();
        let s3 = OrbitBasis::new(t.clone(), PermGroup::symmetric(3)).unwrap();
        let partition = a3.suborbits_within(&s3).unwrap();
        assert_eq!(partition.len(), s3.orbit_count());
        let total: usize = partition.iter().map(|p| p.len()).sum();
        assert_eq!(total, a3.orbit_count());
        for (big, subs) in partition.iter().enumerate() {
            let big_size = s3.orbits()[big].members.len();
            let sub_size: usize = subs.iter().map(|&s| a3.orbits()[s].members.len()).sum();
            assert_eq!(big_size, sub_size);
        }
    }
}
