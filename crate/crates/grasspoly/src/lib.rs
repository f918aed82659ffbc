pub mod estimators;
pub mod grassmann;
pub mod hyperoctahedral;
pub mod polygon;
pub mod quadcells;
pub mod sampling;
pub mod triangle;
pub mod verify;
