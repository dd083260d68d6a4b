pub mod construction;
pub mod doubling;
pub mod freegroups;
pub mod isometries;
pub mod presentations;
pub mod triangulation;
