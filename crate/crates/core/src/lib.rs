pub mod graph;
pub mod interchange;
pub mod knowledge;
pub mod metrics;
pub mod network;
pub mod profile;
pub mod report;
pub mod study;
pub mod survey;
pub mod vocabulary;
