//! The power-expression exercise domain.

mod expr;
mod generate;
mod norm;
pub mod rules;
pub mod text;

pub use expr::{is_var_name, mul, pow, recip, var, Expr};
pub use generate::generate_power;
pub use norm::{norm_power, simplify_power};
pub use text::{parse, print};

/// Equal normal forms.
pub fn eq_power(e1: &Expr, e2: &Expr) -> bool {
    norm_power(e1) == norm_power(e2)
}

/// Syntactic equality.
pub fn sim_power(e1: &Expr, e2: &Expr) -> bool {
    e1 == e2
}

/// Not yet in normal form.
pub fn suitable_power(e: &Expr) -> bool {
    norm_power(e) != *e
}

/// Already in normal form.
pub fn ready_power(e: &Expr) -> bool {
    norm_power(e) == *e
}
