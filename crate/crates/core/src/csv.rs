//! Deterministic CSV number formatting.

/// Rounds to 12 significant digits and prints the shortest representation
/// that round-trips the rounded value. `+inf` prints as `inf`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("valid float literal");
    if rounded == 0.0 {
        return "0".into();
    }
    let mag = rounded.abs();
    if (1e-5..1e16).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn fmt_bool(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Joins already-formatted fields into one newline-terminated CSV row.
pub fn row<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut out = fields.into_iter().map(|f| f.as_ref().to_owned()).collect::<Vec<_>>().join(",");
    out.push('\n');
    out
}
