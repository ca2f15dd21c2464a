//! Domain types: characters, text situations, contexts, feature sets and
//! interpretations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::registry::PseCategory;

/// An opaque, non-empty character identifier, unique within a document.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CharacterId(String);

impl CharacterId {
    pub fn new(name: impl Into<String>) -> Result<Self, Error> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::EmptyCharacterId);
        }
        Ok(CharacterId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for CharacterId {
    type Error = Error;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        CharacterId::new(value)
    }
}

impl From<CharacterId> for String {
    fn from(id: CharacterId) -> String {
        id.0
    }
}

impl fmt::Display for CharacterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite set of characters. The empty set stands for "none", and as the
/// result of SC identification it signals failure.
///
/// Iteration order is the lexical order of the identifiers, which keeps every
/// rendering of a set stable.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharacterSet(BTreeSet<CharacterId>);

impl CharacterSet {
    pub fn new() -> Self {
        CharacterSet(BTreeSet::new())
    }

    /// Builds a set from names; panics on an empty name. Meant for tests and
    /// literals; loaders go through [`CharacterId::new`].
    pub fn of<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        names
            .into_iter()
            .map(|n| CharacterId::new(n).expect("character names must be non-empty"))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, id: &CharacterId) -> bool {
        self.0.contains(id)
    }

    pub fn insert(&mut self, id: CharacterId) -> bool {
        self.0.insert(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &CharacterId> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &CharacterSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_superset(&self, other: &CharacterSet) -> bool {
        self.0.is_superset(&other.0)
    }

    pub fn is_strict_subset(&self, other: &CharacterSet) -> bool {
        self.0.len() < other.0.len() && self.is_subset(other)
    }

    pub fn is_strict_superset(&self, other: &CharacterSet) -> bool {
        other.is_strict_subset(self)
    }

    pub fn union(&self, other: &CharacterSet) -> CharacterSet {
        CharacterSet(self.0.union(&other.0).cloned().collect())
    }

    /// Renders the set the way the traces name characters: "Dennys and Sandy",
    /// "A, B and C".
    pub fn prose(&self) -> String {
        let names: Vec<&str> = self.0.iter().map(CharacterId::as_str).collect();
        match names.as_slice() {
            [] => "nobody".to_string(),
            [one] => (*one).to_string(),
            [init @ .., last] => format!("{} and {}", init.join(", "), last),
        }
    }

    /// Comma-joined names, used by the line-oriented CLI output.
    pub fn joined(&self) -> String {
        let names: Vec<&str> = self.0.iter().map(CharacterId::as_str).collect();
        names.join(",")
    }
}

impl FromIterator<CharacterId> for CharacterSet {
    fn from_iter<T: IntoIterator<Item = CharacterId>>(iter: T) -> Self {
        CharacterSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a CharacterSet {
    type Item = &'a CharacterId;
    type IntoIter = std::collections::btree_set::Iter<'a, CharacterId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// The seven discourse states that summarise recent subjectivity, breaks and
/// active characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TextSituation {
    PresubjectiveNonactive,
    PresubjectiveActive,
    ContinuingSubjective,
    BrokenSubjective,
    InterruptedSubjective,
    PostsubjectiveNonactive,
    PostsubjectiveActive,
}

impl TextSituation {
    pub const ALL: [TextSituation; 7] = [
        TextSituation::PresubjectiveNonactive,
        TextSituation::PresubjectiveActive,
        TextSituation::ContinuingSubjective,
        TextSituation::BrokenSubjective,
        TextSituation::InterruptedSubjective,
        TextSituation::PostsubjectiveNonactive,
        TextSituation::PostsubjectiveActive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TextSituation::PresubjectiveNonactive => "presubjective-nonactive",
            TextSituation::PresubjectiveActive => "presubjective-active",
            TextSituation::ContinuingSubjective => "continuing-subjective",
            TextSituation::BrokenSubjective => "broken-subjective",
            TextSituation::InterruptedSubjective => "interrupted-subjective",
            TextSituation::PostsubjectiveNonactive => "postsubjective-nonactive",
            TextSituation::PostsubjectiveActive => "postsubjective-active",
        }
    }

    /// Short form used in traces ("postsubj-nonactive").
    pub fn abbrev(self) -> &'static str {
        match self {
            TextSituation::PresubjectiveNonactive => "presubj-nonactive",
            TextSituation::PresubjectiveActive => "presubj-active",
            TextSituation::ContinuingSubjective => "continuing-subj",
            TextSituation::BrokenSubjective => "broken-subj",
            TextSituation::InterruptedSubjective => "interrupted-subj",
            TextSituation::PostsubjectiveNonactive => "postsubj-nonactive",
            TextSituation::PostsubjectiveActive => "postsubj-active",
        }
    }
}

impl fmt::Display for TextSituation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TextSituation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TextSituation::ALL
            .into_iter()
            .find(|ts| ts.name() == s || ts.abbrev() == s)
            .ok_or_else(|| Error::UnknownSituation(s.to_string()))
    }
}

/// The discourse context in which an input item is interpreted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Context {
    pub last_sc: CharacterSet,
    pub last_active_character: CharacterSet,
    /// Flat union of every character that has been (part of) an SC.
    #[serde(rename = "previousSCs")]
    pub previous_scs: CharacterSet,
    pub situation: TextSituation,
}

impl Context {
    /// The context of the first item of a text.
    pub fn initial() -> Self {
        Context {
            last_sc: CharacterSet::new(),
            last_active_character: CharacterSet::new(),
            previous_scs: CharacterSet::new(),
            situation: TextSituation::PresubjectiveNonactive,
        }
    }
}

impl Default for Context {
    fn default() -> Self {
        Context::initial()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SoaType {
    PrivateStateAction,
    Action,
    PrivateState,
    NonprivateState,
}

impl SoaType {
    pub fn name(self) -> &'static str {
        match self {
            SoaType::PrivateStateAction => "private-state-action",
            SoaType::Action => "action",
            SoaType::PrivateState => "private-state",
            SoaType::NonprivateState => "nonprivate-state",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateOfAffairs {
    pub id: String,
    pub kind: SoaType,
    /// Experiencer or actor; empty when unspecified.
    pub who: CharacterSet,
}

/// Main-verb-phrase properties of a clause.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct VerbFeatures {
    pub simple_past: bool,
    pub negated: bool,
    pub habitual: bool,
    /// Modal auxiliary verb or modal adverb.
    pub modal: bool,
    pub past_perfective: bool,
    pub progressive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub id: String,
    pub soa: String,
    /// Clauses this one is directly subordinated to. Empty for the main clause.
    pub under: Vec<String>,
    pub verb: VerbFeatures,
}

/// A potential subjective element, with its category already resolved
/// against the registry in force when the document was loaded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pse {
    pub id: String,
    pub category: PseCategory,
    /// Clauses whose governing lexical item dominates this element.
    pub under: Vec<String>,
}

/// The annotated features of one sentential input item.
///
/// Construct through [`FeatureSet::new`], which enforces referential
/// integrity: exactly one main clause, acyclic subordination, resolvable
/// references and unique ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureSet {
    clauses: Vec<Clause>,
    soas: Vec<StateOfAffairs>,
    pses: Vec<Pse>,
    parenthetical: Option<CharacterSet>,
    head_noun_soa: Option<String>,
    quoted_speech: bool,
    main: usize,
    /// Transitive closure of `under` for each clause, indexed like `clauses`.
    dominators: Vec<BTreeSet<String>>,
}

/// The raw parts of a feature set, before validation.
#[derive(Clone, Debug, Default)]
pub struct FeatureParts {
    pub clauses: Vec<Clause>,
    pub soas: Vec<StateOfAffairs>,
    pub pses: Vec<Pse>,
    pub parenthetical: Option<CharacterSet>,
    pub head_noun_soa: Option<String>,
    pub quoted_speech: bool,
}

/// A structural defect in a feature set. The loader attaches the sentence id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeatureDefect {
    DuplicateId {
        path: String,
        id: String,
    },
    Dangling {
        path: String,
        kind: &'static str,
        id: String,
    },
    NoMainClause,
    MultipleMainClauses {
        first: String,
        second: String,
    },
    Cycle {
        clause: String,
    },
    Invalid {
        path: String,
        message: String,
    },
}

impl FeatureSet {
    pub fn new(parts: FeatureParts) -> Result<Self, FeatureDefect> {
        let FeatureParts {
            clauses,
            soas,
            pses,
            parenthetical,
            head_noun_soa,
            quoted_speech,
        } = parts;

        check_unique(soas.iter().map(|s| s.id.as_str()), "soas")?;
        check_unique(clauses.iter().map(|c| c.id.as_str()), "clauses")?;
        check_unique(pses.iter().map(|p| p.id.as_str()), "pses")?;

        let soa_ids: BTreeSet<&str> = soas.iter().map(|s| s.id.as_str()).collect();
        let clause_ids: BTreeSet<&str> = clauses.iter().map(|c| c.id.as_str()).collect();

        for (i, clause) in clauses.iter().enumerate() {
            if !soa_ids.contains(clause.soa.as_str()) {
                return Err(FeatureDefect::Dangling {
                    path: format!("clauses[{i}].soa"),
                    kind: "state of affairs",
                    id: clause.soa.clone(),
                });
            }
            for (j, parent) in clause.under.iter().enumerate() {
                if !clause_ids.contains(parent.as_str()) {
                    return Err(FeatureDefect::Dangling {
                        path: format!("clauses[{i}].under[{j}]"),
                        kind: "clause",
                        id: parent.clone(),
                    });
                }
            }
        }
        for (i, pse) in pses.iter().enumerate() {
            for (j, clause) in pse.under.iter().enumerate() {
                if !clause_ids.contains(clause.as_str()) {
                    return Err(FeatureDefect::Dangling {
                        path: format!("pses[{i}].under[{j}]"),
                        kind: "clause",
                        id: clause.clone(),
                    });
                }
            }
        }

        let mut mains = clauses.iter().enumerate().filter(|(_, c)| c.under.is_empty());
        let main = match (mains.next(), mains.next()) {
            (None, _) => return Err(FeatureDefect::NoMainClause),
            (Some((_, a)), Some((_, b))) => {
                return Err(FeatureDefect::MultipleMainClauses {
                    first: a.id.clone(),
                    second: b.id.clone(),
                })
            }
            (Some((i, _)), None) => i,
        };

        if let Some(hn) = &head_noun_soa {
            match soas.iter().find(|s| &s.id == hn) {
                None => {
                    return Err(FeatureDefect::Dangling {
                        path: "headNounPrivateState".into(),
                        kind: "state of affairs",
                        id: hn.clone(),
                    })
                }
                Some(s) if s.kind != SoaType::PrivateState => {
                    return Err(FeatureDefect::Invalid {
                        path: "headNounPrivateState".into(),
                        message: format!("state of affairs `{hn}` is {}, not private-state", s.kind.name()),
                    })
                }
                Some(_) => {}
            }
        }

        if quoted_speech {
            let main_soa = soas.iter().find(|s| s.id == clauses[main].soa).expect("checked above");
            if main_soa.kind != SoaType::Action {
                return Err(FeatureDefect::Invalid {
                    path: "quotedSpeech".into(),
                    message: format!(
                        "quoted speech needs a communicative action as main state of affairs, found {}",
                        main_soa.kind.name()
                    ),
                });
            }
        }

        let dominators = dominator_closure(&clauses)?;

        Ok(FeatureSet {
            clauses,
            soas,
            pses,
            parenthetical,
            head_noun_soa,
            quoted_speech,
            main,
            dominators,
        })
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn states_of_affairs(&self) -> &[StateOfAffairs] {
        &self.soas
    }

    pub fn pses(&self) -> &[Pse] {
        &self.pses
    }

    /// Subject of the narrative parenthetical, if the sentence has one.
    pub fn parenthetical(&self) -> Option<&CharacterSet> {
        self.parenthetical.as_ref()
    }

    pub fn quoted_speech(&self) -> bool {
        self.quoted_speech
    }

    pub fn head_noun_soa_id(&self) -> Option<&str> {
        self.head_noun_soa.as_deref()
    }

    pub fn main_clause(&self) -> &Clause {
        &self.clauses[self.main]
    }

    pub fn main_soa(&self) -> &StateOfAffairs {
        self.soa(&self.main_clause().soa).expect("validated")
    }

    /// The private state the head noun of the main-clause subject is about.
    pub fn head_noun_soa(&self) -> Option<&StateOfAffairs> {
        self.head_noun_soa.as_deref().and_then(|id| self.soa(id))
    }

    pub fn soa(&self, id: &str) -> Option<&StateOfAffairs> {
        self.soas.iter().find(|s| s.id == id)
    }

    pub fn soa_of_clause(&self, clause: &Clause) -> &StateOfAffairs {
        self.soa(&clause.soa).expect("validated")
    }

    /// The clause about `soa`, if any (a head-noun state has none).
    pub fn clause_of(&self, soa: &StateOfAffairs) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.soa == soa.id)
    }

    /// Every clause that `clause` is subordinated to, directly or through
    /// intermediate clauses.
    pub fn subordinating_clauses(&self, clause: &Clause) -> &BTreeSet<String> {
        let idx = self
            .clauses
            .iter()
            .position(|c| c.id == clause.id)
            .expect("clause belongs to this feature set");
        &self.dominators[idx]
    }

    /// True iff `pse` lies in the syntactic scope of the clause with id
    /// `clause_id` (directly or through a nested clause).
    pub fn pse_within_clause(&self, pse: &Pse, clause_id: &str) -> bool {
        pse.under.iter().any(|c| {
            c == clause_id
                || self
                    .clauses
                    .iter()
                    .position(|cl| &cl.id == c)
                    .is_some_and(|i| self.dominators[i].contains(clause_id))
        })
    }

    pub fn into_parts(self) -> FeatureParts {
        FeatureParts {
            clauses: self.clauses,
            soas: self.soas,
            pses: self.pses,
            parenthetical: self.parenthetical,
            head_noun_soa: self.head_noun_soa,
            quoted_speech: self.quoted_speech,
        }
    }

    /// Every character mentioned anywhere in the features.
    pub fn mentioned_characters(&self) -> CharacterSet {
        let mut all = self.parenthetical.clone().unwrap_or_default();
        for soa in &self.soas {
            all = all.union(&soa.who);
        }
        all
    }
}

fn check_unique<'a>(ids: impl Iterator<Item = &'a str>, path: &str) -> Result<(), FeatureDefect> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(FeatureDefect::DuplicateId {
                path: path.to_string(),
                id: id.to_string(),
            });
        }
    }
    Ok(())
}

fn dominator_closure(clauses: &[Clause]) -> Result<Vec<BTreeSet<String>>, FeatureDefect> {
    let parents: BTreeMap<&str, &[String]> = clauses.iter().map(|c| (c.id.as_str(), c.under.as_slice())).collect();
    clauses
        .iter()
        .map(|clause| {
            let mut seen = BTreeSet::new();
            let mut stack: Vec<&str> = clause.under.iter().map(String::as_str).collect();
            while let Some(next) = stack.pop() {
                if next == clause.id {
                    return Err(FeatureDefect::Cycle {
                        clause: clause.id.clone(),
                    });
                }
                if seen.insert(next.to_string()) {
                    stack.extend(parents[next].iter().map(String::as_str));
                }
            }
            Ok(seen)
        })
        .collect()
}

/// A subjective or objective reading of a sentence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "characters", rename_all = "lowercase")]
pub enum Interpretation {
    /// The subjective sentence of `sc`; an empty set means the SC could not
    /// be identified.
    Subjective(CharacterSet),
    /// An objective sentence with the given (possibly empty) active character.
    Objective(CharacterSet),
}

impl Interpretation {
    pub fn is_subjective(&self) -> bool {
        matches!(self, Interpretation::Subjective(_))
    }

    pub fn characters(&self) -> &CharacterSet {
        match self {
            Interpretation::Subjective(c) | Interpretation::Objective(c) => c,
        }
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interpretation::Subjective(sc) => write!(f, "subjective {{{}}}", sc.joined()),
            Interpretation::Objective(ac) => write!(f, "objective {{{}}}", ac.joined()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Break {
    Paragraph,
    Scene,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub id: String,
    pub text: Option<String>,
    pub features: FeatureSet,
    pub gold: Option<Interpretation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputItem {
    Sentence(Box<Sentence>),
    Break(Break),
}

impl InputItem {
    pub fn as_sentence(&self) -> Option<&Sentence> {
        match self {
            InputItem::Sentence(s) => Some(s),
            InputItem::Break(_) => None,
        }
    }
}
