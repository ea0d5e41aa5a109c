//! Scenario bundles and the three evaluation layers: trajectory metrics
//! (L1), structural metrics over the final sequence (L2) and the judge
//! prompt and verdict parser (L3), plus per-model aggregation.

pub mod aggregate;
pub mod l1;
pub mod l2;
pub mod l3;
pub mod scenario;

pub use aggregate::{aggregate, write_csv, ScenarioScores, SummaryRow};
pub use l1::{eval_l1, L1Report};
pub use l2::{eval_l2, eval_l2_sequence, L2Report, DEFAULT_DELTA};
pub use l3::{build_l3_prompt, parse_l3_response, L3Error, L3Report};
pub use scenario::{Edge, EdgeKind, EssentialOp, ScenarioBundle, ScenarioError, Tier};
