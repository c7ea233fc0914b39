pub mod fixtures;
pub mod limits;
pub mod linalg;
pub mod poset;
pub mod space;
pub mod stanley;
pub mod suite;
pub mod tensor;
pub mod transform;
