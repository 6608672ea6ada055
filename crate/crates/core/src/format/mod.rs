//! On-disk formats: the columnar `.lat.tsv` table and the multi-annotator `.bundle.json`.

mod bundle;
mod lat;
mod text;

pub use bundle::{parse_bundle, serialize_bundle, text_digest, version_token, Bundle, BUNDLE_FORMAT};
pub use lat::{parse_lat, serialize_lat, LAT_HEADER};
pub use text::normalize_text;
