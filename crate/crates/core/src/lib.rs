pub mod bits;
pub mod companions;
pub mod formula;
pub mod heyting;
pub mod io;
pub mod kripke;
pub mod openpairs;
pub mod order;
pub mod semantics;
pub mod tba;
pub mod twist;
pub mod violation;
