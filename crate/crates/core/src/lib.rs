//! Annotation toolkit for Labovian oral-narrative structure.
//!
//! The crate covers the schema ([`model`]), the on-disk formats ([`format`]),
//! segmentation and label agreement ([`seg`], [`label`]), gold-data adjudication
//! ([`adjudication`]), guideline lints ([`lint`]) and the micro-label decision
//! chart ([`wizard`]). Reports render through [`report`].
//!
//! ```
//! use labov_core::format::parse_lat;
//!
//! let doc = "idx\tspeaker\ttext\tstory\thabitual\thypothetical\tmicro\tmacro\n\
//!            1\tIE\tI bought a lunch at the station\tS\t\t\tN\tCom\n\
//!            2\tIE\tand took the train out there.\tE\t\t\tN\tCom\n";
//! let fragment = parse_lat(doc.as_bytes()).unwrap();
//! assert_eq!(fragment.spans.len(), 1);
//! assert!(fragment.validate().is_ok());
//! ```

pub mod adjudication;
pub mod error;
pub mod format;
pub mod label;
pub mod lint;
pub mod model;
pub mod report;
pub mod seg;
pub mod wizard;

pub use error::{AdjudicationError, FormatError, MetricError, ModelError};
pub use model::{
    AnnotatorLayer, Clause, ClauseId, Fragment, Label, MacroLabel, MicroLabel, NarrativeSpan, NarrativeType, Speaker,
    Topic,
};
pub use seg::Segmentation;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quickstart.md")]
    mod quickstart {}
    #[doc = include_str!("../../../book/src/segmentation.md")]
    mod segmentation {}
    #[doc = include_str!("../../../book/src/labels.md")]
    mod labels {}
    #[doc = include_str!("../../../book/src/adjudication.md")]
    mod adjudication {}
    #[doc = include_str!("../../../book/src/lints.md")]
    mod lints {}
    #[doc = include_str!("../../../book/src/wizard.md")]
    mod wizard {}
}
