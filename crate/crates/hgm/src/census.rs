//! Census engine (under construction).
