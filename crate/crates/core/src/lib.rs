pub mod encoding;
pub mod lasso;
pub mod ltl;
pub mod reduction;
pub mod sat;
pub mod sketcher;
pub mod text;
