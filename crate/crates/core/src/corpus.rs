//! Annotated documents: JSON schema, validation and serialization.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::{Start, SubjectiveHistory};
use crate::error::Error;
use crate::model::{
    Break, CharacterId, CharacterSet, Clause, Context, FeatureDefect, FeatureParts, FeatureSet, InputItem,
    Interpretation, Pse, Sentence, SoaType, StateOfAffairs, TextSituation, VerbFeatures,
};
use crate::registry::Registry;

/// A validated annotation document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub title: String,
    pub roster: CharacterSet,
    /// Context in force before the first item, for documents that start
    /// mid-text. `None` means the initial context.
    pub preamble: Option<Context>,
    pub items: Vec<InputItem>,
}

impl Document {
    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.items.iter().filter_map(InputItem::as_sentence)
    }

    /// Context and history in force before the first item. Characters named
    /// as previous SCs by the preamble are taken to have a significant
    /// subjective history.
    pub fn start(&self) -> Start {
        let context = self.preamble.clone().unwrap_or_default();
        let mut history = SubjectiveHistory::new();
        history.seed_significant(&context.previous_scs);
        if context.situation == TextSituation::ContinuingSubjective {
            history.resume_run(context.last_sc.clone(), 1);
        }
        Start { context, history }
    }

    pub fn to_json(&self) -> String {
        let raw = RawDocument::from(self);
        let mut out = serde_json::to_string_pretty(&raw).expect("document serializes");
        out.push('\n');
        out
    }
}

/// Parses and validates a document, resolving element categories against
/// `registry`.
pub fn load_document(bytes: &[u8], registry: &Registry) -> Result<Document, Error> {
    let raw: RawDocument = serde_json::from_slice(bytes).map_err(Error::from_json)?;
    raw.validate(registry)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoldWarning {
    Unlabeled { sentence: String },
    OffRoster { sentence: String, character: CharacterId },
}

impl fmt::Display for GoldWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoldWarning::Unlabeled { sentence } => {
                write!(f, "sentence `{sentence}` has no gold label while others do")
            }
            GoldWarning::OffRoster { sentence, character } => {
                write!(
                    f,
                    "sentence `{sentence}`: gold label names `{character}`, who is not in the roster"
                )
            }
        }
    }
}

/// Consistency checks on gold labels. Never fails; problems are reported as
/// warnings.
pub fn validate_gold(doc: &Document) -> Vec<GoldWarning> {
    let any_labeled = doc.sentences().any(|s| s.gold.is_some());
    let mut warnings = Vec::new();
    for s in doc.sentences() {
        match &s.gold {
            None if any_labeled => warnings.push(GoldWarning::Unlabeled { sentence: s.id.clone() }),
            None => {}
            Some(gold) => {
                for c in gold.characters() {
                    if !doc.roster.contains(c) {
                        warnings.push(GoldWarning::OffRoster {
                            sentence: s.id.clone(),
                            character: c.clone(),
                        });
                    }
                }
            }
        }
    }
    warnings
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    title: String,
    #[serde(default)]
    roster: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preamble: Option<RawPreamble>,
    #[serde(default)]
    items: Vec<RawItem>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPreamble {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    situation: Option<String>,
    #[serde(rename = "lastSC", default)]
    last_sc: Vec<String>,
    #[serde(rename = "previousSCs", default)]
    previous_scs: Vec<String>,
    #[serde(rename = "lastActiveCharacter", default)]
    last_active_character: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum RawItem {
    SceneBreak,
    ParagraphBreak,
    Sentence(Box<RawSentence>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSentence {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gold: Option<RawGold>,
    features: RawFeatures,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGold {
    #[serde(rename = "type")]
    kind: GoldKind,
    #[serde(default)]
    characters: Vec<String>,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum GoldKind {
    Subjective,
    Objective,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct RawFeatures {
    #[serde(default)]
    quoted_speech: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parenthetical: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    head_noun_private_state: Option<String>,
    soas: Vec<RawSoa>,
    clauses: Vec<RawClause>,
    #[serde(default)]
    pses: Vec<RawPse>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSoa {
    id: String,
    #[serde(rename = "type")]
    kind: SoaType,
    #[serde(default)]
    who: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClause {
    id: String,
    soa: String,
    #[serde(default)]
    under: Vec<String>,
    #[serde(default)]
    vp: VerbFeatures,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPse {
    id: String,
    category: String,
    #[serde(default)]
    under: Vec<String>,
}

/// Builds a character set, checking every name against the roster.
struct Cast<'a> {
    roster: &'a CharacterSet,
    sentence: &'a str,
}

impl Cast<'_> {
    fn set(&self, names: &[String], path: impl Fn() -> String) -> Result<CharacterSet, Error> {
        names
            .iter()
            .map(|n| {
                let id = CharacterId::new(n.clone()).map_err(|_| Error::Validation {
                    sentence: self.sentence.to_string(),
                    path: path(),
                    message: "empty character name".into(),
                })?;
                if !self.roster.contains(&id) {
                    return Err(Error::UnknownCharacter {
                        sentence: self.sentence.to_string(),
                        path: path(),
                        character: n.clone(),
                    });
                }
                Ok(id)
            })
            .collect()
    }
}

impl RawDocument {
    fn validate(self, registry: &Registry) -> Result<Document, Error> {
        let roster: CharacterSet = self
            .roster
            .into_iter()
            .map(CharacterId::new)
            .collect::<Result<_, _>>()?;

        let preamble = self
            .preamble
            .map(|p| {
                let cast = Cast {
                    roster: &roster,
                    sentence: "<preamble>",
                };
                let situation = match p.situation {
                    Some(s) => s.parse::<TextSituation>().map_err(|e| Error::Preamble(e.to_string()))?,
                    None => TextSituation::PresubjectiveNonactive,
                };
                let last_sc = cast.set(&p.last_sc, || "preamble.lastSC".into())?;
                let previous_scs = cast.set(&p.previous_scs, || "preamble.previousSCs".into())?;
                Ok::<_, Error>(Context {
                    previous_scs: previous_scs.union(&last_sc),
                    last_sc,
                    last_active_character: cast
                        .set(&p.last_active_character, || "preamble.lastActiveCharacter".into())?,
                    situation,
                })
            })
            .transpose()?;

        let mut seen = BTreeSet::new();
        let mut items = Vec::with_capacity(self.items.len());
        for raw in self.items {
            let item = match raw {
                RawItem::SceneBreak => InputItem::Break(Break::Scene),
                RawItem::ParagraphBreak => InputItem::Break(Break::Paragraph),
                RawItem::Sentence(s) => {
                    if s.id.is_empty() {
                        return Err(Error::Validation {
                            sentence: String::new(),
                            path: "id".into(),
                            message: "sentence ids must be non-empty".into(),
                        });
                    }
                    if !seen.insert(s.id.clone()) {
                        return Err(Error::DuplicateSentenceId(s.id));
                    }
                    InputItem::Sentence(Box::new(s.validate(&roster, registry)?))
                }
            };
            items.push(item);
        }

        Ok(Document {
            title: self.title,
            roster,
            preamble,
            items,
        })
    }
}

impl RawSentence {
    fn validate(self, roster: &CharacterSet, registry: &Registry) -> Result<Sentence, Error> {
        let id = self.id;
        let cast = Cast { roster, sentence: &id };
        let f = self.features;

        let soas = f
            .soas
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                Ok(StateOfAffairs {
                    who: cast.set(&s.who, || format!("features.soas[{i}].who"))?,
                    id: s.id,
                    kind: s.kind,
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let clauses = f
            .clauses
            .into_iter()
            .map(|c| Clause {
                id: c.id,
                soa: c.soa,
                under: c.under,
                verb: c.vp,
            })
            .collect();
        let pses = f
            .pses
            .into_iter()
            .map(|p| {
                let category = registry.lookup(&p.category).ok_or_else(|| Error::UnknownCategory {
                    sentence: id.clone(),
                    element: p.id.clone(),
                    category: p.category.clone(),
                })?;
                Ok(Pse {
                    id: p.id,
                    category: category.clone(),
                    under: p.under,
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let parenthetical = f
            .parenthetical
            .map(|names| cast.set(&names, || "features.parenthetical".into()))
            .transpose()?;
        if parenthetical.as_ref().is_some_and(CharacterSet::is_empty) {
            return Err(Error::Validation {
                sentence: id,
                path: "features.parenthetical".into(),
                message: "a narrative parenthetical needs a subject".into(),
            });
        }

        let features = FeatureSet::new(FeatureParts {
            clauses,
            soas,
            pses,
            parenthetical,
            head_noun_soa: f.head_noun_private_state,
            quoted_speech: f.quoted_speech,
        })
        .map_err(|defect| defect_error(&id, defect))?;

        let gold = self
            .gold
            .map(|g| {
                let characters = g
                    .characters
                    .into_iter()
                    .map(CharacterId::new)
                    .collect::<Result<CharacterSet, _>>()
                    .map_err(|_| Error::Validation {
                        sentence: id.clone(),
                        path: "gold.characters".into(),
                        message: "empty character name".into(),
                    })?;
                Ok::<_, Error>(match g.kind {
                    GoldKind::Subjective => Interpretation::Subjective(characters),
                    GoldKind::Objective => Interpretation::Objective(characters),
                })
            })
            .transpose()?;

        Ok(Sentence {
            id,
            text: self.text,
            features,
            gold,
        })
    }
}

fn defect_error(sentence: &str, defect: FeatureDefect) -> Error {
    let sentence = sentence.to_string();
    match defect {
        FeatureDefect::DuplicateId { path, id } => Error::Validation {
            sentence,
            path: format!("features.{path}"),
            message: format!("duplicate id `{id}`"),
        },
        FeatureDefect::Dangling { path, kind, id } => Error::DanglingReference {
            sentence,
            path: format!("features.{path}"),
            kind,
            id,
        },
        FeatureDefect::NoMainClause => Error::NoMainClause { sentence },
        FeatureDefect::MultipleMainClauses { first, second } => Error::MultipleMainClauses {
            sentence,
            first,
            second,
        },
        FeatureDefect::Cycle { clause } => Error::SubordinationCycle { sentence, clause },
        FeatureDefect::Invalid { path, message } => Error::Validation {
            sentence,
            path: format!("features.{path}"),
            message,
        },
    }
}

fn names(set: &CharacterSet) -> Vec<String> {
    set.iter().map(|c| c.as_str().to_string()).collect()
}

impl From<&Document> for RawDocument {
    fn from(doc: &Document) -> Self {
        RawDocument {
            title: doc.title.clone(),
            roster: names(&doc.roster),
            preamble: doc.preamble.as_ref().map(|c| RawPreamble {
                situation: Some(c.situation.name().to_string()),
                last_sc: names(&c.last_sc),
                previous_scs: names(&c.previous_scs),
                last_active_character: names(&c.last_active_character),
            }),
            items: doc
                .items
                .iter()
                .map(|item| match item {
                    InputItem::Break(Break::Scene) => RawItem::SceneBreak,
                    InputItem::Break(Break::Paragraph) => RawItem::ParagraphBreak,
                    InputItem::Sentence(s) => RawItem::Sentence(Box::new(RawSentence::from(&**s))),
                })
                .collect(),
        }
    }
}

impl From<&Sentence> for RawSentence {
    fn from(s: &Sentence) -> Self {
        let f = &s.features;
        RawSentence {
            id: s.id.clone(),
            text: s.text.clone(),
            gold: s.gold.as_ref().map(|g| RawGold {
                kind: match g {
                    Interpretation::Subjective(_) => GoldKind::Subjective,
                    Interpretation::Objective(_) => GoldKind::Objective,
                },
                characters: names(g.characters()),
            }),
            features: RawFeatures {
                quoted_speech: f.quoted_speech(),
                parenthetical: f.parenthetical().map(names),
                head_noun_private_state: f.head_noun_soa_id().map(str::to_string),
                soas: f
                    .states_of_affairs()
                    .iter()
                    .map(|soa| RawSoa {
                        id: soa.id.clone(),
                        kind: soa.kind,
                        who: names(&soa.who),
                    })
                    .collect(),
                clauses: f
                    .clauses()
                    .iter()
                    .map(|c| RawClause {
                        id: c.id.clone(),
                        soa: c.soa.clone(),
                        under: c.under.clone(),
                        vp: c.verb,
                    })
                    .collect(),
                pses: f
                    .pses()
                    .iter()
                    .map(|p| RawPse {
                        id: p.id.clone(),
                        category: p.category.name.clone(),
                        under: p.under.clone(),
                    })
                    .collect(),
            },
        }
    }
}
