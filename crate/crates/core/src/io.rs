//! CSV and JSON helpers shared by the serializable result types.

use serde::Serialize;

use crate::scalar::Real;

/// `Some(x as f64)` for finite values, `None` (empty cell / `null`) otherwise.
pub(crate) fn finite<T: Real>(x: Option<T>) -> Option<f64> {
    x.map(|v| v.as_f64()).filter(|v| v.is_finite())
}

pub(crate) fn into_string(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV is UTF-8")
}

/// Serializes records with a header row taken from the field names.
pub(crate) fn to_csv<R: Serialize>(rows: &[R]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory CSV write");
    }
    into_string(w)
}
