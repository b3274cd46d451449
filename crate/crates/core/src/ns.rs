//! Namespace IRIs and frequently used terms.

pub const DPV: &str = "https://w3id.org/dpv#";
pub const EU_GDPR: &str = "https://w3id.org/dpv/legal/eu/gdpr#";
pub const JUSTIFICATIONS: &str = "https://w3id.org/dpv/justifications#";
pub const ODRL: &str = "http://www.w3.org/ns/odrl/2/";
pub const DCAT: &str = "http://www.w3.org/ns/dcat#";
pub const DCT: &str = "http://purl.org/dc/terms/";
pub const PROV: &str = "http://www.w3.org/ns/prov#";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
/// Engine-local terms with no DPV/ODRL counterpart.
pub const GR: &str = "https://gdpr-rights.example/ns#";
pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";

/// Prefixes every builder-produced graph starts with.
pub const DEFAULT_PREFIXES: &[(&str, &str)] = &[
    ("dcat", DCAT),
    ("dct", DCT),
    ("dpv", DPV),
    ("eu-gdpr", EU_GDPR),
    ("gr", GR),
    ("justifications", JUSTIFICATIONS),
    ("odrl", ODRL),
    ("prov", PROV),
    ("rdf", RDF),
    ("xsd", XSD),
];

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";

/// Expand a `prefix:local` name against [`DEFAULT_PREFIXES`].
pub fn expand_curie(curie: &str) -> Option<String> {
    let (prefix, local) = curie.split_once(':')?;
    DEFAULT_PREFIXES
        .iter()
        .find(|(p, _)| *p == prefix)
        .map(|(_, ns)| format!("{ns}{local}"))
}

/// `dpv:` term.
pub fn dpv(local: &str) -> String {
    format!("{DPV}{local}")
}

pub fn eu_gdpr(local: &str) -> String {
    format!("{EU_GDPR}{local}")
}

pub fn justifications(local: &str) -> String {
    format!("{JUSTIFICATIONS}{local}")
}

pub fn odrl(local: &str) -> String {
    format!("{ODRL}{local}")
}

pub fn dcat(local: &str) -> String {
    format!("{DCAT}{local}")
}

pub fn dct(local: &str) -> String {
    format!("{DCT}{local}")
}

pub fn prov(local: &str) -> String {
    format!("{PROV}{local}")
}

pub fn gr(local: &str) -> String {
    format!("{GR}{local}")
}

pub fn skos(local: &str) -> String {
    format!("{SKOS}{local}")
}
