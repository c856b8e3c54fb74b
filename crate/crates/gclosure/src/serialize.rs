//! Document forms for algebras and closure data. Every field that carries a
//! ring element is a string in the same canonical syntax the parsers accept,
//! so documents round-trip exactly.

use serde::{Deserialize, Serialize};

use crate::algebra::FreeAlgebra;
use crate::closure::ClosureDatum;
use crate::error::{Error, Result};
use crate::ring::{parse_elem, parse_monic_poly, parse_ring, Ring};
use crate::tensor::{OrbitBasis, PermGroup, TensorAlgebra};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraDoc {
    pub ring: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure_constants: Option<Vec<Vec<Vec<String>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
}

pub fn algebra_to_doc(algebra: &FreeAlgebra) -> AlgebraDoc {
    let ring = algebra.ring().to_string();
    if let Some(f) = algebra.monogenic_poly() {
        return AlgebraDoc {
            ring,
            poly: Some(f.to_string()),
            rank: None,
            structure_constants: None,
            unit: None,
        };
    }
    let n = algebra.rank();
    let table = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    algebra
                        .basis_product(i, j)
                        .iter()
                        .map(|e| e.to_string())
                        .collect()
                })
                .collect()
        })
        .collect();
    AlgebraDoc {
        ring,
        poly: None,
        rank: Some(n),
        structure_constants: Some(table),
        unit: Some(
            algebra
                .unit_coords()
                .iter()
                .map(|e| e.to_string())
                .collect(),
        ),
    }
}

pub fn algebra_from_doc(doc: &AlgebraDoc) -> Result<FreeAlgebra> {
    let ring = parse_ring(&doc.ring)?;
    if let Some(poly) = &doc.poly {
        let f = parse_monic_poly(&ring, poly)?;
        return Ok(FreeAlgebra::monogenic(ring, &f));
    }
    let (Some(rank), Some(table), Some(unit)) = (doc.rank, &doc.structure_constants, &doc.unit)
    else {
        return Err(Error::Precondition(
            "algebra document needs either `poly` or `rank`+`structure_constants`+`unit`".into(),
        ));
    };
    let parsed_table = table
        .iter()
        .map(|row| {
            row.iter()
                .map(|cell| cell.iter().map(|s| parse_elem(&ring, s)).collect())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let parsed_unit = unit
        .iter()
        .map(|s| parse_elem(&ring, s))
        .collect::<Result<Vec<_>>>()?;
    FreeAlgebra::from_table(ring, rank, parsed_table, parsed_unit)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OrbitValueDoc {
    /// 1-indexed basis tuple representing the orbit.
    pub orbit: Vec<usize>,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DatumDoc {
    pub algebra: AlgebraDoc,
    pub group: String,
    pub values: Vec<OrbitValueDoc>,
}

pub fn datum_to_doc(datum: &ClosureDatum) -> DatumDoc {
    DatumDoc {
        algebra: algebra_to_doc(datum.algebra()),
        group: datum.group().name().to_string(),
        values: datum
            .basis()
            .orbits()
            .iter()
            .zip(datum.values())
            .map(|(orbit, v)| OrbitValueDoc {
                orbit: orbit.rep.iter().map(|i| i + 1).collect(),
                value: v.to_string(),
            })
            .collect(),
    }
}

pub fn datum_from_doc(doc: &DatumDoc) -> Result<ClosureDatum> {
    let algebra = algebra_from_doc(&doc.algebra)?;
    let ring = algebra.ring().clone();
    let n = algebra.rank();
    let group = PermGroup::parse(&doc.group, n)?;
    let tensor = TensorAlgebra::new(algebra, n)?;
    let basis = OrbitBasis::new(tensor, group)?;
    if doc.values.len() != basis.orbit_count() {
        return Err(Error::Precondition(format!(
            "datum document has {} values but the orbit basis has {}",
            doc.values.len(),
            basis.orbit_count()
        )));
    }
    let mut values = vec![ring.zero(); basis.orbit_count()];
    let mut seen = vec![false; basis.orbit_count()];
    for ov in &doc.values {
        let tuple: Vec<usize> = ov
            .orbit
            .iter()
            .map(|&i| {
                if i == 0 || i > n {
                    Err(Error::Precondition(format!(
                        "orbit index {i} out of range 1..={n}"
                    )))
                } else {
                    Ok(i - 1)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if tuple.len() != basis.tensor().power() {
            return Err(Error::Precondition(
                "orbit tuple has the wrong length".into(),
            ));
        }
        let o = basis.orbit_of_tuple(&tuple);
        if seen[o] {
            return Err(Error::Precondition(format!(
                "two values for the orbit of {:?}",
                ov.orbit
            )));
        }
        seen[o] = true;
        values[o] = parse_elem(&ring, &ov.value)?;
    }
    if !seen.iter().all(|&s| s) {
        return Err(Error::Precondition("datum document misses orbits".into()));
    }
    Ok(ClosureDatum::new(basis, values))
}

/// Serialize a ring by its descriptor text.
pub fn ring_to_string(ring: &Ring) -> String {
    ring.to_string()
}
