//! JSON emission with fixed float formatting.
//!
//! Every f64 is written with 17 significant digits (`{:.16e}`), which
//! round-trips exactly and makes reruns byte-identical; the default
//! shortest-representation formatter would also be deterministic, but pinning
//! the digit count keeps the files diffable across serializer versions.

use std::io;

use serde::Serialize;

pub struct FixedFloatFormatter;

impl serde_json::ser::Formatter for FixedFloatFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        debug_assert!(value.is_finite(), "non-finite float in JSON output");
        write!(writer, "{value:.16e}")
    }
}

/// Serializes with the fixed float formatter (compact layout).
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloatFormatter);
    value
        .serialize(&mut ser)
        .expect("JSON serialization of plain data");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// Fixed-format float for the CSV trace columns.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}
