pub mod chain_complex;
pub mod graph_core;
pub mod ainfty;
pub mod algebra;
pub mod hochschild;
pub mod cosimplicial;
pub mod sullivan;
pub mod tqft_action;
pub mod formal_ops;
pub mod report;
