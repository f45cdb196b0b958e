pub mod braid;
pub mod brst;
pub mod complex;
pub mod linalg;
pub mod nf;
pub mod presets;
pub mod records;
pub mod relations;
pub mod scalar;
pub mod tensor;
pub mod uqgl;
