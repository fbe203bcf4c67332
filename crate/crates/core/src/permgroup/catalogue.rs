use std::collections::BTreeMap;

use super::{GroupError, PermGroup, EXHAUSTIVE_LIMIT};

/// An isomorphism type recognized by order and element-order census.
#[derive(Clone, Copy, Debug)]
pub struct CatalogueEntry {
    pub label: &'static str,
    pub order: u64,
    pub histogram: &'static [(u64, u64)],
}

pub const CATALOGUE: &[CatalogueEntry] = &[
    CatalogueEntry {
        label: "L2(8)",
        order: 504,
        histogram: &[(1, 1), (2, 63), (3, 56), (7, 216), (9, 168)],
    },
    CatalogueEntry {
        label: "L3(2)",
        order: 168,
        histogram: &[(1, 1), (2, 21), (3, 56), (4, 42), (7, 48)],
    },
    // non-split; the split AGL(3,2) has 420 elements of order 4 and none of order 8
    CatalogueEntry {
        label: "2^3.L3(2)",
        order: 1344,
        histogram: &[
            (1, 1),
            (2, 91),
            (3, 224),
            (4, 84),
            (6, 224),
            (7, 384),
            (8, 336),
        ],
    },
    CatalogueEntry {
        label: "3D4(2)",
        order: 211341312,
        histogram: &[
            (1, 1),
            (2, 69615),
            (3, 465920),
            (4, 3498768),
            (6, 11741184),
            (7, 4852224),
            (8, 13208832),
            (9, 11741184),
            (12, 17611776),
            (13, 48771072),
            (14, 11321856),
            (18, 35223552),
            (21, 30191616),
            (28, 22643712),
        ],
    },
];

pub fn element_order_histogram(h: &PermGroup) -> Result<BTreeMap<u64, u64>, GroupError> {
    if h.order() > EXHAUSTIVE_LIMIT {
        return Err(GroupError::ResourceLimit(format!(
            "histogram needs |H| <= {EXHAUSTIVE_LIMIT}, got {}",
            h.order()
        )));
    }
    let mut hist = BTreeMap::new();
    for g in h.elements() {
        *hist.entry(g.order()).or_insert(0) += 1;
    }
    Ok(hist)
}

/// Catalogue label for a group with this order and census, else `unknown(<order>)`.
pub fn identify(order: u64, histogram: &BTreeMap<u64, u64>) -> String {
    CATALOGUE
        .iter()
        .find(|e| {
            e.order == order
                && e.histogram.len() == histogram.len()
                && e.histogram.iter().all(|(k, v)| histogram.get(k) == Some(v))
        })
        .map(|e| e.label.to_string())
        .unwrap_or_else(|| format!("unknown({order})"))
}

pub fn identify_group(h: &PermGroup) -> String {
    match element_order_histogram(h) {
        Ok(hist) => identify(h.order(), &hist),
        Err(_) => format!("unknown({})", h.order()),
    }
}
