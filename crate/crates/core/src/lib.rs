//! Headless cutscene authoring: the sequence data model, camera shot
//! templates, the asset registry and the agent-facing toolkit.

pub mod assets;
pub mod camera;
pub mod canonical;
pub mod math;
pub mod sequence;
pub mod toolkit;
pub mod trajectory;
