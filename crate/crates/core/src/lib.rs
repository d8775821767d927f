//! Structured annotation for legal and regulatory text.
//!
//! lexscan turns raw contract/statute/opinion text into typed, located
//! annotations: sentence and section segmentation, gazetteer matching, and
//! extractors for money, dates, citations, regulations, definitions,
//! constraints, entities, and more. All offsets are Unicode scalar
//! offsets; every annotation's `text` is the exact document slice at its
//! span.
//!
//! ```
//! use lexscan::{Document, quantities::get_money};
//!
//! let doc = Document::new("d1", "a fee of $5 due now", "en").unwrap();
//! let money = get_money(&doc);
//! assert_eq!(money[0].value["amount"], "5");
//! assert_eq!(money[0].value["currency"], "USD");
//! ```

pub mod data;
pub mod dates;
pub mod decimal;
pub mod doc;
pub mod entities;
pub mod error;
pub mod legal;
pub mod lexicon;
pub mod numbers;
pub mod quantities;
pub mod segment;
pub mod stem;
pub mod tokens;

pub use decimal::Dec;
pub use doc::{sort_annotations, Annotation, AnnotationKind, Document, Span};
pub use error::{LexError, Result};
pub use lexicon::{EntityKind, Lexicon, LexiconFormat};
pub use segment::SentenceModel;
