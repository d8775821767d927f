//! Bundled default data: sample lexicons, trigger lists, the default
//! sentence model, and the shipped date filter. File formats are the
//! contract; users can load replacements from disk with the same loaders.

use std::collections::HashSet;
use std::sync::LazyLock;

use crate::lexicon::{EntityKind, Lexicon, LexiconFormat};

macro_rules! bundled_lexicon {
    ($fn_name:ident, $static_name:ident, $path:literal) => {
        static $static_name: LazyLock<Lexicon> = LazyLock::new(|| {
            Lexicon::from_str(include_str!($path), LexiconFormat::Csv).expect(concat!($path, " is well-formed"))
        });

        pub fn $fn_name() -> &'static Lexicon {
            &$static_name
        }
    };
}

bundled_lexicon!(courts, COURTS, "../data/lexicons/courts.csv");
bundled_lexicon!(reporters, REPORTERS, "../data/lexicons/reporters.csv");
bundled_lexicon!(geoentities, GEOENTITIES, "../data/lexicons/geoentities.csv");
bundled_lexicon!(company_suffixes, COMPANY_SUFFIXES, "../data/lexicons/company_suffixes.csv");
bundled_lexicon!(street_suffixes, STREET_SUFFIXES, "../data/lexicons/street_suffixes.csv");
bundled_lexicon!(state_codes, STATE_CODES, "../data/lexicons/state_codes.csv");
bundled_lexicon!(stopword_lexicon, STOPWORDS_LEX, "../data/lexicons/stopwords.csv");

static STOPWORDS: LazyLock<HashSet<String>> = LazyLock::new(|| stopword_lexicon().terms(EntityKind::Stopword));

/// The bundled legal stopword sample, lowercased.
pub fn stopwords() -> &'static HashSet<String> {
    &STOPWORDS
}

pub const CONDITION_TRIGGERS_JSON: &str = include_str!("../data/triggers/conditions.json");
pub const CONSTRAINT_TRIGGERS_JSON: &str = include_str!("../data/triggers/constraints.json");

/// Sample corpus: a purchase-agreement preamble, a deposit definition
/// clause, and a release section.
pub const EXAMPLE1: &str = include_str!("../data/golden/example1.txt");
pub const EXAMPLE2: &str = include_str!("../data/golden/example2.txt");
pub const EXAMPLE3: &str = include_str!("../data/golden/example3.txt");
