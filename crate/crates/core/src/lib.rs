pub mod classify;
pub mod exactgeom;
pub mod trees;
pub mod tropical;
pub mod verify;
