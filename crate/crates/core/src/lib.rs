//! Exact character-table arithmetic and permutation-group enumeration for
//! counting Hurwitz (2,3,7) generating triples.

pub mod chartab;
pub mod exactnum;
pub mod hurwitz;
pub mod ledger;
pub mod permgroup;
pub mod report;
pub mod structconst;
