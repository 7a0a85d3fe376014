pub mod blowup;
pub mod cli;
pub mod exact;
pub mod io;
pub mod model;
pub mod planar;
pub mod reduce;
pub mod sat;
