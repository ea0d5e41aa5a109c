pub mod camera;
pub mod query;
pub mod roundtrip;
