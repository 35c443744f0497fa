//! The *-algebra generated by `p_v`, `s_e` and the tail unitaries, with
//! exact coefficients, normal forms and relation checking.

pub mod coeff;
mod context;
mod parse;
mod term;
mod verify;

pub use coeff::Coeff;
pub use context::{CkContext, TailedGraph};
pub use parse::parse_term;
pub use term::{CkTerm, Letter, NormalMonomial, Segment, SimpleForm, SymbolicError, UnitaryPower};
pub use verify::{
    expand_ck3, verify_all, verify_ck_family, verify_embedding, verify_witness, RelationEntry,
    RelationReport, RelationStatus,
};
