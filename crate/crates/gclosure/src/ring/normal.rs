use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::payload::Payload;
use super::{Ring, RingDesc, RingElem};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalFormKind {
    Rref,
    Hermite,
    Howell,
}

/// How the canonical coordinate at one column of a quotient module behaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum ColBound {
    /// Always zero (a pivot with unit stride).
    Zero,
    /// Ranges over residues `[0, g)`.
    Mod(BigInt),
    /// Ranges over the whole ring.
    Free,
}

fn extgcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = extgcd_i128(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

// ---------------------------------------------------------------------------
// Row reducers: incremental echelon bases with canonical reduction.
// ---------------------------------------------------------------------------

/// Echelon basis over `Z/m` with Howell-complete pivots, stored in plain
/// `u64` rows. For prime `m` this degenerates to ordinary row reduction.
pub(crate) struct ZmodReducer {
    m: u64,
    ncols: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

fn lead_u64(v: &[u64]) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

impl ZmodReducer {
    pub fn new(m: u64, ncols: usize) -> Self {
        ZmodReducer {
            m,
            ncols,
            rows: Vec::new(),
        }
    }

    fn sub_scaled(&self, v: &mut [u64], r: &[u64], q: u64) {
        let m = self.m as u128;
        let q = q as u128;
        for (x, y) in v.iter_mut().zip(r.iter()) {
            let sub = (*y as u128 * q) % m;
            *x = ((*x as u128 + m - sub) % m) as u64;
        }
    }

    fn combine(&self, x: i128, a: &[u64], y: i128, b: &[u64]) -> Vec<u64> {
        let m = self.m as i128;
        a.iter()
            .zip(b.iter())
            .map(|(&p, &q)| ((x * p as i128 + y * q as i128).rem_euclid(m)) as u64)
            .collect()
    }

    /// Scale a row by a unit so the entry at `j` becomes `gcd(entry, m)`.
    fn normalize_leading(&self, v: &mut [u64], j: usize) -> u64 {
        let m = self.m;
        let b = v[j];
        debug_assert!(b != 0);
        let g = gcd_u64(b, m);
        let mg = m / g;
        let mut u = if mg == 1 {
            1
        } else {
            inv_mod_u64((b / g) % mg, mg).unwrap()
        };
        if u == 0 {
            u = 1;
        }
        let mut steps = 0u64;
        while gcd_u64(u, m) != 1 {
            u += mg;
            steps += 1;
            assert!(steps <= m, "unit lift scan failed");
        }
        for x in v.iter_mut() {
            *x = ((*x as u128 * u as u128) % m as u128) as u64;
        }
        debug_assert_eq!(v[j], g);
        g
    }

    pub fn insert(&mut self, v: Vec<u64>) {
        let mut queue = vec![v];
        while let Some(mut v) = queue.pop() {
            loop {
                let Some(j) = lead_u64(&v) else { break };
                match self.rows.binary_search_by_key(&j, |r| r.0) {
                    Ok(k) => {
                        let a = self.rows[k].1[j];
                        let b = v[j];
                        if b % a == 0 {
                            let row = self.rows[k].1.clone();
                            self.sub_scaled(&mut v, &row, b / a);
                        } else {
                            let (g, x, y) = extgcd_i128(a as i128, b as i128);
                            let mut nr = self.combine(x, &self.rows[k].1, y, &v);
                            let v2 = self.combine(
                                (a as i128) / g,
                                &v,
                                -((b as i128) / g),
                                &self.rows[k].1,
                            );
                            let piv = self.normalize_leading(&mut nr, j);
                            self.rows[k].1 = nr;
                            if piv > 1 {
                                let ann: Vec<u64> = self.rows[k]
                                    .1
                                    .iter()
                                    .map(|&e| {
                                        ((e as u128 * (self.m / piv) as u128) % self.m as u128)
                                            as u64
                                    })
                                    .collect();
                                queue.push(ann);
                            }
                            v = v2;
                        }
                    }
                    Err(pos) => {
                        let g = self.normalize_leading(&mut v, j);
                        if g > 1 {
                            let ann: Vec<u64> = v
                                .iter()
                                .map(|&e| {
                                    ((e as u128 * (self.m / g) as u128) % self.m as u128) as u64
                                })
                                .collect();
                            queue.push(ann);
                        }
                        self.rows.insert(pos, (j, v));
                        break;
                    }
                }
            }
        }
    }

    pub fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (j, r) in &self.rows {
            let q = v[*j] / r[*j];
            if q > 0 {
                self.sub_scaled(&mut v, r, q);
            }
        }
        v
    }

    fn pivot_of(&self, col: usize) -> Option<u64> {
        self.rows
            .binary_search_by_key(&col, |r| r.0)
            .ok()
            .map(|k| self.rows[k].1[self.rows[k].0])
    }

    pub fn basis_rows(&self) -> &[(usize, Vec<u64>)] {
        &self.rows
    }
}

/// Echelon basis over `Z` (Hermite-style) with `BigInt` rows.
pub(crate) struct IntReducer {
    ncols: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
}

fn lead_big(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

impl IntReducer {
    pub fn new(ncols: usize) -> Self {
        IntReducer {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn insert(&mut self, mut v: Vec<BigInt>) {
        loop {
            let Some(j) = lead_big(&v) else { return };
            match self.rows.binary_search_by_key(&j, |r| r.0) {
                Ok(k) => {
                    let a = self.rows[k].1[j].clone();
                    let b = v[j].clone();
                    let (q, rem) = b.div_rem(&a);
                    if rem.is_zero() {
                        for (x, y) in v.iter_mut().zip(self.rows[k].1.iter()) {
                            *x -= &q * y;
                        }
                    } else {
                        let g = a.extended_gcd(&b);
                        let (d, x, y) = (g.gcd, g.x, g.y);
                        let nr: Vec<BigInt> = self.rows[k]
                            .1
                            .iter()
                            .zip(v.iter())
                            .map(|(p, q2)| &x * p + &y * q2)
                            .collect();
                        let ca = &a / &d;
                        let cb = &b / &d;
                        let v2: Vec<BigInt> = v
                            .iter()
                            .zip(self.rows[k].1.iter())
                            .map(|(p, q2)| &ca * p - &cb * q2)
                            .collect();
                        self.rows[k].1 = nr;
                        v = v2;
                    }
                }
                Err(pos) => {
                    if v[j].is_negative() {
                        for x in v.iter_mut() {
                            *x = -(x.clone());
                        }
                    }
                    self.rows.insert(pos, (j, v));
                    return;
                }
            }
        }
    }

    pub fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        for (j, r) in &self.rows {
            let q = v[*j].div_floor(&r[*j]);
            if !q.is_zero() {
                for (x, y) in v.iter_mut().zip(r.iter()) {
                    *x -= &q * y;
                }
            }
        }
        v
    }

    fn pivot_of(&self, col: usize) -> Option<BigInt> {
        self.rows
            .binary_search_by_key(&col, |r| r.0)
            .ok()
            .map(|k| self.rows[k].1[self.rows[k].0].clone())
    }

    pub fn basis_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

/// Echelon basis over a field with generic payload arithmetic (used for Q).
pub(crate) struct FieldReducer {
    ring: Ring,
    ncols: usize,
    rows: Vec<(usize, Vec<Payload>)>,
}

impl FieldReducer {
    pub fn new(ring: Ring, ncols: usize) -> Self {
        FieldReducer {
            ring,
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn insert(&mut self, mut v: Vec<Payload>) {
        let r = self.ring.clone();
        loop {
            let Some(j) = v.iter().position(|x| !r.is_zero_p(x)) else {
                return;
            };
            match self.rows.binary_search_by_key(&j, |row| row.0) {
                Ok(k) => {
                    let c = v[j].clone();
                    for (x, y) in v.iter_mut().zip(self.rows[k].1.iter()) {
                        let t = r.mul_p(&c, y);
                        *x = r.sub_p(x, &t);
                    }
                }
                Err(pos) => {
                    let inv = r
                        .inv_p(&v[j])
                        .expect("nonzero field element has an inverse");
                    for x in v.iter_mut() {
                        *x = r.mul_p(x, &inv);
                    }
                    self.rows.insert(pos, (j, v));
                    return;
                }
            }
        }
    }

    pub fn reduce(&self, mut v: Vec<Payload>) -> Vec<Payload> {
        let r = &self.ring;
        for (j, row) in &self.rows {
            if r.is_zero_p(&v[*j]) {
                continue;
            }
            let c = v[*j].clone();
            for (x, y) in v.iter_mut().zip(row.iter()) {
                let t = r.mul_p(&c, y);
                *x = r.sub_p(x, &t);
            }
        }
        v
    }

    pub fn basis_rows(&self) -> Vec<Vec<Payload>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

/// Unified incremental row-span reducer over the linear-algebra-capable rings.
pub(crate) enum Reducer {
    Zmod(ZmodReducer),
    Int(IntReducer),
    Field(FieldReducer),
}

impl Reducer {
    pub fn new(ring: &Ring, ncols: usize) -> Result<Reducer> {
        match ring.desc() {
            RingDesc::IntegersMod(m) | RingDesc::PrimeField(m) => {
                Ok(Reducer::Zmod(ZmodReducer::new(*m, ncols)))
            }
            RingDesc::Integers => Ok(Reducer::Int(IntReducer::new(ncols))),
            RingDesc::Rationals => Ok(Reducer::Field(FieldReducer::new(ring.clone(), ncols))),
            _ => Err(Error::capability(format!(
                "linear algebra over {ring} is not supported (need a field, Z, or Z/m)"
            ))),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            Reducer::Zmod(r) => r.ncols,
            Reducer::Int(r) => r.ncols,
            Reducer::Field(r) => r.ncols,
        }
    }

    pub fn insert_payloads(&mut self, v: &[Payload]) {
        debug_assert_eq!(v.len(), self.ncols());
        match self {
            Reducer::Zmod(r) => {
                let row = v
                    .iter()
                    .map(|p| match p {
                        Payload::Res(x) => *x,
                        _ => panic!("expected residue payload"),
                    })
                    .collect();
                r.insert(row);
            }
            Reducer::Int(r) => {
                let row = v
                    .iter()
                    .map(|p| match p {
                        Payload::Int(x) => x.clone(),
                        _ => panic!("expected integer payload"),
                    })
                    .collect();
                r.insert(row);
            }
            Reducer::Field(r) => r.insert(v.to_vec()),
        }
    }

    pub fn reduce_payloads(&self, v: &[Payload]) -> Vec<Payload> {
        match self {
            Reducer::Zmod(r) => {
                let row: Vec<u64> = v
                    .iter()
                    .map(|p| match p {
                        Payload::Res(x) => *x,
                        _ => panic!("expected residue payload"),
                    })
                    .collect();
                r.reduce(row).into_iter().map(Payload::Res).collect()
            }
            Reducer::Int(r) => {
                let row: Vec<BigInt> = v
                    .iter()
                    .map(|p| match p {
                        Payload::Int(x) => x.clone(),
                        _ => panic!("expected integer payload"),
                    })
                    .collect();
                r.reduce(row).into_iter().map(Payload::Int).collect()
            }
            Reducer::Field(r) => r.reduce(v.to_vec()),
        }
    }

    /// Canonical-coordinate bound at one column of the quotient by the span.
    pub fn col_bound(&self, col: usize) -> ColBound {
        match self {
            Reducer::Zmod(r) => match r.pivot_of(col) {
                Some(1) => ColBound::Zero,
                Some(g) => ColBound::Mod(BigInt::from(g)),
                None => ColBound::Free,
            },
            Reducer::Int(r) => match r.pivot_of(col) {
                Some(g) if g.is_one() => ColBound::Zero,
                Some(g) => ColBound::Mod(g),
                None => ColBound::Free,
            },
            Reducer::Field(r) => {
                if r.rows.binary_search_by_key(&col, |x| x.0).is_ok() {
                    ColBound::Zero
                } else {
                    ColBound::Free
                }
            }
        }
    }

    /// Columns on which canonical representatives can be nonzero.
    pub fn support_cols(&self) -> Vec<usize> {
        (0..self.ncols())
            .filter(|&c| self.col_bound(c) != ColBound::Zero)
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Public normal forms.
// ---------------------------------------------------------------------------

pub struct NormalForm {
    kind: NormalFormKind,
    ring: Ring,
    form: Matrix,
    transform: Matrix,
    pivots: Vec<(usize, usize)>,
    invariant_factors: Option<Vec<BigInt>>,
    reducer: Reducer,
}

impl NormalForm {
    pub fn kind(&self) -> NormalFormKind {
        self.kind
    }

    pub fn form(&self) -> &Matrix {
        &self.form
    }

    /// Row transform `U` with `U * original = form`.
    pub fn transform(&self) -> &Matrix {
        &self.transform
    }

    pub fn pivots(&self) -> &[(usize, usize)] {
        &self.pivots
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Smith invariant factors (integer matrices only).
    pub fn invariant_factors(&self) -> Option<&[BigInt]> {
        self.invariant_factors.as_deref()
    }

    /// Canonical representative of `v` modulo the row span.
    pub fn reduce_row(&self, v: &[RingElem]) -> Vec<RingElem> {
        let payloads: Vec<Payload> = v.iter().map(|e| e.payload().clone()).collect();
        self.reducer
            .reduce_payloads(&payloads)
            .into_iter()
            .map(|p| RingElem::from_payload(self.ring.clone(), p))
            .collect()
    }

    pub fn spans_row(&self, v: &[RingElem]) -> bool {
        self.reduce_row(v).iter().all(|e| e.is_zero())
    }

    /// Cardinality of the quotient module, when finite.
    pub fn quotient_size(&self) -> Option<BigInt> {
        let mut size = BigInt::one();
        for c in 0..self.reducer.ncols() {
            match self.reducer.col_bound(c) {
                ColBound::Zero => {}
                ColBound::Mod(g) => size *= g,
                ColBound::Free => match self.ring.cardinality() {
                    Some(card) => size *= BigInt::from(card),
                    None => return None,
                },
            }
        }
        Some(size)
    }
}

/// Row normal form of a matrix: reduced echelon over fields, Hermite over Z
/// (with Smith invariant factors attached), Howell over Z/m. The returned
/// transform is verified against the input.
pub fn normal_form(m: &Matrix) -> Result<NormalForm> {
    let ring = m.ring().clone();
    let kind = match ring.desc() {
        RingDesc::Rationals | RingDesc::PrimeField(_) => NormalFormKind::Rref,
        RingDesc::Integers => NormalFormKind::Hermite,
        RingDesc::IntegersMod(_) => NormalFormKind::Howell,
        _ => {
            return Err(Error::capability(format!(
                "no normal form over {ring}; supported rings are fields, Z, and Z/m"
            )))
        }
    };
    let (nrows, ncols) = (m.nrows(), m.ncols());

    // reduce the rows of [A | I]; the second block accumulates the transform
    let mut aug = Reducer::new(&ring, ncols + nrows)?;
    for i in 0..nrows {
        let mut row: Vec<Payload> = m.row_payloads(i).to_vec();
        for k in 0..nrows {
            row.push(if k == i { ring.one_p() } else { ring.zero_p() });
        }
        aug.insert_payloads(&row);
    }

    let mut body_rows: Vec<Vec<Payload>> = Vec::new();
    let mut pivots = Vec::new();
    match &aug {
        Reducer::Zmod(r) => {
            for (j, row) in &r.rows {
                if *j < ncols {
                    pivots.push((body_rows.len(), *j));
                    body_rows.push(row.iter().map(|&x| Payload::Res(x)).collect());
                }
            }
        }
        Reducer::Int(r) => {
            for (j, row) in &r.rows {
                if *j < ncols {
                    pivots.push((body_rows.len(), *j));
                    body_rows.push(row.iter().map(|x| Payload::Int(x.clone())).collect());
                }
            }
        }
        Reducer::Field(r) => {
            for (j, row) in &r.rows {
                if *j < ncols {
                    pivots.push((body_rows.len(), *j));
                    body_rows.push(row.clone());
                }
            }
        }
    }

    // back-reduce entries above pivots so the form is canonical
    for i in (0..body_rows.len()).rev() {
        for k in (i + 1)..body_rows.len() {
            let (_, pc) = pivots[k];
            let pivot = body_rows[k][pc].clone();
            let entry = body_rows[i][pc].clone();
            if ring.is_zero_p(&entry) {
                continue;
            }
            let q = match (&entry, &pivot) {
                (Payload::Res(e), Payload::Res(p)) => Some(ring.from_i64_p((*e / *p) as i64)),
                (Payload::Int(e), Payload::Int(p)) => Some(Payload::Int(e.div_floor(p))),
                _ => ring.exact_div_p(&entry, &pivot),
            };
            if let Some(q) = q {
                if ring.is_zero_p(&q) {
                    continue;
                }
                let sub: Vec<Payload> = body_rows[k].iter().map(|x| ring.mul_p(&q, x)).collect();
                for (x, s) in body_rows[i].iter_mut().zip(sub.iter()) {
                    *x = ring.sub_p(x, s);
                }
            }
        }
    }

    let form_rows: Vec<Vec<Payload>> = body_rows.iter().map(|r| r[..ncols].to_vec()).collect();
    let trans_rows: Vec<Vec<Payload>> = body_rows.iter().map(|r| r[ncols..].to_vec()).collect();
    let form = Matrix::from_payload_rows(ring.clone(), ncols, form_rows);
    let transform = Matrix::from_payload_rows(ring.clone(), nrows, trans_rows);

    // transform * original = form, checked on construction
    if transform.nrows() > 0 {
        let check = transform.mul(m);
        if check != form {
            return Err(Error::Internal(
                "normal-form transform failed verification".into(),
            ));
        }
    }

    let invariant_factors = if matches!(ring.desc(), RingDesc::Integers) {
        let rows: Vec<Vec<BigInt>> = (0..nrows)
            .map(|i| {
                m.row_payloads(i)
                    .iter()
                    .map(|p| match p {
                        Payload::Int(x) => x.clone(),
                        _ => unreachable!(),
                    })
                    .collect()
            })
            .collect();
        Some(smith_invariant_factors(rows, ncols))
    } else {
        None
    };

    // rebuild a plain reducer on the body columns for reduce/membership
    let mut reducer = Reducer::new(&ring, ncols)?;
    for i in 0..form.nrows() {
        reducer.insert_payloads(form.row_payloads(i));
    }

    Ok(NormalForm {
        kind,
        ring,
        form,
        transform,
        pivots,
        invariant_factors,
        reducer,
    })
}

/// Basis of `{x : M x = 0}`.
pub fn kernel_basis(m: &Matrix) -> Result<Vec<Vec<RingElem>>> {
    let ring = m.ring().clone();
    let (nrows, ncols) = (m.nrows(), m.ncols());
    // row-reduce [Mᵀ | I]; rows whose first block vanishes carry kernel vectors
    let mut aug = Reducer::new(&ring, nrows + ncols)?;
    for j in 0..ncols {
        let mut row: Vec<Payload> = (0..nrows).map(|i| m.at(i, j).clone()).collect();
        for k in 0..ncols {
            row.push(if k == j { ring.one_p() } else { ring.zero_p() });
        }
        aug.insert_payloads(&row);
    }
    let rows: Vec<Vec<Payload>> = match &aug {
        Reducer::Zmod(r) => r
            .rows
            .iter()
            .filter(|(j, _)| *j >= nrows)
            .map(|(_, row)| row[nrows..].iter().map(|&x| Payload::Res(x)).collect())
            .collect(),
        Reducer::Int(r) => r
            .rows
            .iter()
            .filter(|(j, _)| *j >= nrows)
            .map(|(_, row)| {
                row[nrows..]
                    .iter()
                    .map(|x| Payload::Int(x.clone()))
                    .collect()
            })
            .collect(),
        Reducer::Field(r) => r
            .rows
            .iter()
            .filter(|(j, _)| *j >= nrows)
            .map(|(_, row)| row[nrows..].to_vec())
            .collect(),
    };
    Ok(rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|p| RingElem::from_payload(ring.clone(), p))
                .collect()
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Smith normal form over Z.
// ---------------------------------------------------------------------------

/// Nonzero diagonal entries `d_1 | d_2 | …` of the Smith form.
pub(crate) fn smith_invariant_factors(mut a: Vec<Vec<BigInt>>, ncols: usize) -> Vec<BigInt> {
    let nrows = a.len();
    for row in &a {
        debug_assert_eq!(row.len(), ncols);
    }
    let n = nrows.min(ncols);
    let mut t = 0;
    while t < n {
        // pick the smallest nonzero entry in the remaining block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in (t + 1)..nrows {
            if a[i][t].is_zero() {
                continue;
            }
            let q = div_round(&a[i][t], &a[t][t]);
            for j in t..ncols {
                let s = &q * &a[t][j];
                a[i][j] -= s;
            }
            if !a[i][t].is_zero() {
                clean = false;
            }
        }
        for j in (t + 1)..ncols {
            if a[t][j].is_zero() {
                continue;
            }
            let q = div_round(&a[t][j], &a[t][t]);
            for row in a.iter_mut().take(nrows).skip(t) {
                let s = &q * &row[t];
                row[j] -= s;
            }
            if !a[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // pivot must divide the rest of the block
        let pivot = a[t][t].clone();
        let mut bad = None;
        'search: for i in (t + 1)..nrows {
            for j in (t + 1)..ncols {
                if !(&a[i][j] % &pivot).is_zero() {
                    bad = Some(i);
                    break 'search;
                }
            }
        }
        if let Some(i) = bad {
            for j in t..ncols {
                let add = a[i][j].clone();
                a[t][j] += add;
            }
            continue;
        }
        t += 1;
    }
    let mut d: Vec<BigInt> = (0..t).map(|i| a[i][i].abs()).collect();
    d.sort();
    d
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // quotient rounding to nearest, which keeps remainders small
    let (q, r) = a.div_rem(b);
    let two_r: BigInt = &r * 2;
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}
