use crate::graph::Iri;

/// Mint an IRI in the namespace of `base` by appending path segments.
///
/// `https://ctrl.example` + `["notices", "x"]` gives `https://ctrl.example/notices/x`.
/// A base ending in `/` or `#` is extended directly.
pub fn mint_iri(base: &Iri, segments: &[&str]) -> Iri {
    let mut out = base.as_str().to_string();
    for seg in segments {
        if !(out.ends_with('/') || out.ends_with('#')) {
            out.push('/');
        }
        out.push_str(seg);
    }
    Iri::new(out).expect("segments appended to a valid IRI keep it valid")
}
