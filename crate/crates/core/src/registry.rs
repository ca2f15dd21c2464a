//! Potential-subjective-element categories and the text situations in which
//! each counts as subjective.
//!
//! A category is associated "at the highest level" with one of four groups of
//! text situations. Level 1 is the group in which expectations of
//! subjectivity are strongest (continuing-subjective); level 4 the weakest
//! (presubjective-nonactive). A category at level `k` is subjective in every
//! situation of levels `1..=k`.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::Deserialize;

use crate::error::Error;
use crate::model::TextSituation;

use TextSituation::*;

const LEVEL_1: &[TextSituation] = &[ContinuingSubjective];
const LEVEL_2: &[TextSituation] = &[BrokenSubjective, InterruptedSubjective];
const LEVEL_3: &[TextSituation] = &[PresubjectiveActive, PostsubjectiveNonactive, PostsubjectiveActive];
const LEVEL_4: &[TextSituation] = &[PresubjectiveNonactive];

/// The text situations grouped under `level` (1..=4).
pub fn situations_for_level(level: u8) -> Result<&'static [TextSituation], Error> {
    match level {
        1 => Ok(LEVEL_1),
        2 => Ok(LEVEL_2),
        3 => Ok(LEVEL_3),
        4 => Ok(LEVEL_4),
        _ => Err(Error::InvalidLevel {
            category: None,
            level: level.into(),
        }),
    }
}

/// The level whose situation group contains `situation`.
pub fn level_of(situation: TextSituation) -> u8 {
    match situation {
        ContinuingSubjective => 1,
        BrokenSubjective | InterruptedSubjective => 2,
        PresubjectiveActive | PostsubjectiveNonactive | PostsubjectiveActive => 3,
        PresubjectiveNonactive => 4,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PseCategory {
    pub name: String,
    /// Highest level, 1..=4.
    pub level: u8,
    /// Not taken as evidence against a private-state report when deciding
    /// who the SC of a private-state sentence is.
    pub excluded: bool,
}

impl PseCategory {
    pub fn new(name: impl Into<String>, level: u8, excluded: bool) -> Result<Self, Error> {
        let name = name.into();
        if !(1..=4).contains(&level) {
            return Err(Error::InvalidLevel {
                category: Some(name),
                level: level.into(),
            });
        }
        Ok(PseCategory { name, level, excluded })
    }

    pub fn is_subjective_in(&self, situation: TextSituation) -> bool {
        level_of(situation) <= self.level
    }
}

/// Shipped categories as (name, highest level, excluded).
const DEFAULTS: &[(&str, u8, bool)] = &[
    ("exclamation", 4, false),
    ("question", 4, false),
    ("eval-adjective", 3, false),
    ("eval-noun", 3, false),
    ("eval-adverb", 3, false),
    ("obligation-modal", 3, false),
    ("minimizer", 3, false),
    ("lack-of-knowledge", 3, false),
    ("sentence-fragment", 3, false),
    ("kinship-term", 3, false),
    ("evidential-certainty", 3, false),
    ("evidential-evidence", 3, false),
    ("hedge", 3, false),
    ("expectation-met", 3, false),
    ("expectation-unmet", 3, false),
    ("conjunct", 3, false),
    ("conditional-clause", 3, false),
    ("comparative-like", 3, true),
    ("percept-term", 3, false),
    ("seeming-verb", 3, false),
    ("attitude-noun", 3, false),
    ("as-plus-modifier", 3, true),
    ("degree-intensifier", 3, true),
    ("habitual", 2, true),
    ("past-perfective", 1, false),
    ("progressive", 1, false),
];

/// The set of known categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Registry {
    categories: BTreeMap<String, PseCategory>,
}

impl Default for Registry {
    fn default() -> Self {
        let categories = DEFAULTS
            .iter()
            .map(|&(name, level, excluded)| {
                (
                    name.to_string(),
                    PseCategory {
                        name: name.to_string(),
                        level,
                        excluded,
                    },
                )
            })
            .collect();
        Registry { categories }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    level: i64,
    excluded: Option<bool>,
}

struct Entries(Vec<(String, Entry)>);

impl<'de> Deserialize<'de> for Entries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = Entries;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping category names to {\"level\", \"excluded\"}")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Entries, A::Error> {
                let mut entries = Vec::new();
                while let Some((name, entry)) = map.next_entry::<String, Entry>()? {
                    entries.push((name, entry));
                }
                Ok(Entries(entries))
            }
        }

        deserializer.deserialize_map(EntriesVisitor)
    }
}

impl Registry {
    /// Parses a registry file and merges it over the shipped defaults.
    /// Entries override a default's level; `excluded` falls back to the
    /// default's flag, or `false` for a new category.
    pub fn from_json(bytes: &[u8]) -> Result<Self, Error> {
        let Entries(entries) = serde_json::from_slice(bytes).map_err(Error::from_json)?;
        let mut registry = Registry::default();
        let mut seen = std::collections::BTreeSet::new();
        for (name, entry) in entries {
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateCategory(name));
            }
            if name.is_empty() {
                return Err(Error::EmptyCategoryName);
            }
            let level = u8::try_from(entry.level)
                .ok()
                .filter(|l| (1..=4).contains(l))
                .ok_or(Error::InvalidLevel {
                    category: Some(name.clone()),
                    level: entry.level,
                })?;
            let excluded = entry
                .excluded
                .or_else(|| registry.categories.get(&name).map(|c| c.excluded))
                .unwrap_or(false);
            registry.insert(PseCategory::new(name, level, excluded)?);
        }
        Ok(registry)
    }

    pub fn insert(&mut self, category: PseCategory) {
        self.categories.insert(category.name.clone(), category);
    }

    pub fn lookup(&self, name: &str) -> Option<&PseCategory> {
        self.categories.get(name)
    }

    pub fn categories(&self) -> impl Iterator<Item = &PseCategory> {
        self.categories.values()
    }

    pub fn len(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn level_one_is_continuing_subjective() {
        assert_eq!(situations_for_level(1).unwrap(), &[ContinuingSubjective]);
    }

    #[test]
    fn level_three_situations() {
        let got: BTreeSet<_> = situations_for_level(3).unwrap().iter().copied().collect();
        let want: BTreeSet<_> = [PresubjectiveActive, PostsubjectiveNonactive, PostsubjectiveActive].into();
        assert_eq!(got, want);
    }

    #[test]
    fn levels_partition_the_situations() {
        let mut seen = Vec::new();
        for level in 1..=4 {
            for &ts in situations_for_level(level).unwrap() {
                assert!(!seen.contains(&ts), "{ts} appears twice");
                assert_eq!(level_of(ts), level);
                seen.push(ts);
            }
        }
        assert_eq!(seen.len(), TextSituation::ALL.len());
    }

    #[test]
    fn out_of_range_level_is_rejected() {
        assert!(situations_for_level(0).is_err());
        assert!(situations_for_level(5).is_err());
        assert!(PseCategory::new("x", 0, false).is_err());
    }

    #[test]
    fn shipped_lookups() {
        let r = Registry::default();
        let q = r.lookup("question").unwrap();
        assert_eq!((q.level, q.excluded), (4, false));
        let p = r.lookup("progressive").unwrap();
        assert_eq!((p.level, p.excluded), (1, false));
        let like = r.lookup("comparative-like").unwrap();
        assert_eq!((like.level, like.excluded), (3, true));
        assert!(r.lookup("no-such-thing").is_none());
    }

    #[test]
    fn default_levels_and_exclusions() {
        let r = Registry::default();
        let at = |lvl: u8| -> BTreeSet<&str> {
            r.categories()
                .filter(|c| c.level == lvl)
                .map(|c| c.name.as_str())
                .collect()
        };
        assert_eq!(at(1), ["past-perfective", "progressive"].into());
        assert_eq!(at(2), ["habitual"].into());
        assert_eq!(at(4), ["exclamation", "question"].into());
        assert_eq!(at(3).len(), r.len() - 5);
        let excluded: BTreeSet<&str> = r.categories().filter(|c| c.excluded).map(|c| c.name.as_str()).collect();
        assert_eq!(
            excluded,
            ["habitual", "comparative-like", "as-plus-modifier", "degree-intensifier"].into()
        );
    }

    #[test]
    fn monotone_strength() {
        for cat in Registry::default().categories() {
            for ts in TextSituation::ALL {
                if cat.is_subjective_in(ts) {
                    for lower in 1..level_of(ts) {
                        for &weaker in situations_for_level(lower).unwrap() {
                            assert!(cat.is_subjective_in(weaker), "{} in {ts} but not {weaker}", cat.name);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn registry_file_matching_default_changes_nothing() {
        let r = Registry::from_json(br#"{"question":{"level":4}}"#).unwrap();
        assert_eq!(r, Registry::default());
    }

    #[test]
    fn registry_file_promotes_habitual() {
        let r = Registry::from_json(br#"{"habitual":{"level":3}}"#).unwrap();
        let h = r.lookup("habitual").unwrap();
        assert_eq!((h.level, h.excluded), (3, true));
    }

    #[test]
    fn registry_file_adds_new_category() {
        let r = Registry::from_json(br#"{"rhetorical-aside":{"level":2,"excluded":true}}"#).unwrap();
        assert_eq!(r.len(), Registry::default().len() + 1);
        assert!(r.lookup("rhetorical-aside").unwrap().excluded);
    }

    #[test]
    fn registry_file_errors() {
        assert!(matches!(
            Registry::from_json(br#"{"foo":{"level":5}}"#),
            Err(Error::InvalidLevel { level: 5, .. })
        ));
        assert!(matches!(
            Registry::from_json(br#"{"foo":{"level":-1}}"#),
            Err(Error::InvalidLevel { .. })
        ));
        assert!(matches!(
            Registry::from_json(br#"{"foo":{"level":1},"foo":{"level":2}}"#),
            Err(Error::DuplicateCategory(name)) if name == "foo"
        ));
        assert!(matches!(Registry::from_json(b"[1,2]"), Err(Error::Parse { .. })));
    }
}
