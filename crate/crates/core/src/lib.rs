pub mod elementary;
pub mod engine;
pub mod error;
pub mod form_ideal;
pub mod forms;
pub mod matrix;
pub mod ring;
pub mod steinberg;
pub mod subset;
pub mod verify;
