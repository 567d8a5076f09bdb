//! Exact semantics on finite spaces: extended-real arithmetic, the two
//! generalized integrals, expression evaluation, identity oracles and
//! ε-selector enumeration.

mod identities;
mod model;
mod select;
mod xreal;

pub use identities::{
    check_identity, random_case, run_case, run_suite, tally, Counterexample, Identity, IdentityCase, OracleRecord,
    Params, UnknownIdentity, Verdict, MAX_ATOMS,
};
pub use model::{eval_func, eval_set, FiniteModel, Kernel, MSpace, Measure, ModelError, Point, Subset, Table};
pub use select::{check_eps_selector, eps_select_enumerate};
pub use xreal::{
    integral_minus, integral_plus, parse_rational, xreal_add, xreal_neg, xreal_prod, xreal_sub, xreal_sum, BadXReal,
    XReal,
};
