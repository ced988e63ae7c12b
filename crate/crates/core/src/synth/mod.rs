//! Boolean function compilation: expressions and truth tables to two-level
//! RTL netlists and fan-in-capped CMOS netlists.

mod build;
mod expr;
mod qm;
mod table;

pub use build::{synthesize_cmos, synthesize_rtl, OUTPUT_NET};
pub use expr::{parse_expr, BoolExpr, Expr, ExprKind, Pos, MAX_VARS};
pub use qm::{prime_implicants, quine_mccluskey, QM_MAX_VARS};
pub use table::{
    canonical_sop, emit_truth_table, parse_table_source, parse_truth_table, to_truth_table, Cover, Implicant,
    TableSource, TruthTable, TtValue,
};

/// Minimized cover when the table is small enough for Quine–McCluskey,
/// canonical sum of products otherwise.
pub fn minimize(t: &TruthTable) -> crate::Result<Cover> {
    if t.num_vars() <= QM_MAX_VARS {
        quine_mccluskey(t)
    } else {
        Ok(canonical_sop(t))
    }
}
