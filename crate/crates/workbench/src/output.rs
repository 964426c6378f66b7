use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};
use tdirac_core::spectrum::format_f64;
use tdirac_core::{Error, Result};

/// Compact JSON with every float in fixed 17-digit scientific form.
struct FixedFloats(CompactFormatter);

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if !value.is_finite() {
            return Err(io::Error::other(format!("non-finite number {value}")));
        }
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Canonical JSON: keys sorted, floats fixed-width, trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    // serde_json would quietly turn NaN into null inside a `Value`
    let mut probe = serde_json::Serializer::with_formatter(io::sink(), FixedFloats(CompactFormatter));
    value.serialize(&mut probe).map_err(|e| Error::Contract(format!("report: {e}")))?;
    // going through `Value` sorts object keys
    let value = serde_json::to_value(value).map_err(|e| Error::InvalidArgument(format!("serialize: {e}")))?;
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats(CompactFormatter));
    value.serialize(&mut ser).map_err(|e| Error::InvalidArgument(format!("serialize: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("JSON is UTF-8"))
}
