//! Oracle rectangles `W_i = (U_i, V_i)`, their locality under `D_{n,k}`,
//! the overlap number behind assumption `A_d`, and the OR/AND algebra of
//! rectangles.

mod family;
mod locality;
mod setexpr;

pub use family::{max_overlap, rect_and, rect_or, CompiledFamily, RectFamily, RectPair};
pub use locality::{locality_exact, locality_mc, locality_of_compiled, LocalityMode, LocalityReport};
pub use setexpr::{eval_set_expr, SetExpr, Side};
