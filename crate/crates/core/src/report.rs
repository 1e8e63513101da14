//! Structured reports shared by the command pipelines.

use serde::Serializer;

use crate::superalg::Element;

/// Serializes an element as its re-parseable text form.
pub fn serialize_element<S: Serializer>(e: &Element, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}
