pub mod algebra;
pub mod atlas;
pub mod json;
pub mod planarity;
pub mod presets;
pub mod scalar;
pub mod slope;
pub mod subperiods;
pub mod systems;
pub mod tiling;
