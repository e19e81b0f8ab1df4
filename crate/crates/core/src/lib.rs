//! Exact verification of Drinfeld twists of U(gl(N)): Jordanian, extended
//! and chain twists, and the deformed costructures of the Heisenberg
//! subalgebra H̃(2,1).

pub mod error;
pub mod expr;
pub mod hopf;
pub mod props;
pub mod rational;
pub mod roots;
pub mod sparse;
pub mod states;
pub mod suite;
pub mod twist;

pub use error::{Result, TwistError};
pub use expr::{counit_eval, eval_expr, Expr, Morphism, TensorExpr};
pub use hopf::{CheckResult, TwistedCoalgebra, Witness, WitnessKind};
pub use rational::Rational;
pub use sparse::{AnalyticFn, SparseMatrix};
pub use states::{Combinator, CostructureTable, StateId};
pub use suite::{emit_report, run_suite, OutputFormat, Suite, SuiteConfig, SuiteReport};
pub use twist::{TwistFactor, TwistSequence};
