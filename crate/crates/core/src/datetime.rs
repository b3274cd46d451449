use chrono::{DateTime, SecondsFormat, Utc};

use crate::Timestamp;

/// RFC 3339 form used in `xsd:dateTime` literals, journals and JSON.
pub fn format_timestamp(t: &Timestamp) -> String {
    t.to_rfc3339_opts(SecondsFormat::AutoSi, true)
}

pub fn parse_timestamp(s: &str) -> Option<Timestamp> {
    DateTime::parse_from_rfc3339(s.trim())
        .ok()
        .map(|t| t.with_timezone(&Utc))
}
