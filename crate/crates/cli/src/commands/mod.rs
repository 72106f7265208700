pub mod construct;
pub mod density;
pub mod estimate;
pub mod regcheck;
pub mod simulate;
pub mod verify;
