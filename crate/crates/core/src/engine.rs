//! Sentence interpretation and the tracking fold.
//!
//! [`Frame`] bundles what a sentence is interpreted against (the context,
//! the subjective history of the characters and the significance policy) and
//! exposes each decision step separately. [`track`] folds the
//! context transitions over a stream of input items.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{
    Break, CharacterId, CharacterSet, Clause, Context, FeatureSet, InputItem, Interpretation, Pse, SoaType,
    StateOfAffairs, TextSituation,
};
use crate::situation::{last_active_character_is_expected, last_sc_is_expected, new_context, new_context_after_break};

/// When a private-state action counts as a private state: its actor must
/// have been an SC, and under the stricter modes that earlier subjective
/// context must also be "significant".
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignificancePolicy {
    #[default]
    #[serde(rename = "any-previous-sc")]
    AnyPreviousSc,
    #[serde(rename = "contains-represented-thought")]
    ContainsRepresentedThought,
    #[serde(rename = "contains-subjective-element")]
    ContainsSubjectiveElement,
    #[serde(rename = "min-length-2")]
    MinLength2,
}

impl SignificancePolicy {
    pub const ALL: [SignificancePolicy; 4] = [
        SignificancePolicy::AnyPreviousSc,
        SignificancePolicy::ContainsRepresentedThought,
        SignificancePolicy::ContainsSubjectiveElement,
        SignificancePolicy::MinLength2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SignificancePolicy::AnyPreviousSc => "any-previous-sc",
            SignificancePolicy::ContainsRepresentedThought => "contains-represented-thought",
            SignificancePolicy::ContainsSubjectiveElement => "contains-subjective-element",
            SignificancePolicy::MinLength2 => "min-length-2",
        }
    }

    fn admits(self, record: &CharacterHistory) -> bool {
        match self {
            SignificancePolicy::AnyPreviousSc => record.ever_sc,
            SignificancePolicy::ContainsRepresentedThought => record.represented_thought,
            SignificancePolicy::ContainsSubjectiveElement => record.subjective_element,
            SignificancePolicy::MinLength2 => record.max_context_length >= 2,
        }
    }
}

impl fmt::Display for SignificancePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SignificancePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SignificancePolicy::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown significance policy `{s}`"))
    }
}

/// What is known about one character's subjective contexts so far.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CharacterHistory {
    pub ever_sc: bool,
    pub represented_thought: bool,
    pub subjective_element: bool,
    /// Longest run of consecutive subjective sentences with this character in the SC.
    pub max_context_length: usize,
}

/// Properties of a subjective sentence that feed [`SubjectiveHistory`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SubjectiveTraits {
    pub represented_thought: bool,
    pub subjective_element: bool,
}

/// Per-character record of earlier subjective contexts. Flags never revert
/// and lengths never decrease.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubjectiveHistory {
    records: BTreeMap<CharacterId, CharacterHistory>,
    run: Option<(CharacterSet, usize)>,
}

impl SubjectiveHistory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Marks characters as having an established, significant subjective
    /// history under every policy. Used for contexts that start mid-text.
    pub fn seed_significant(&mut self, characters: &CharacterSet) {
        for c in characters {
            let rec = self.records.entry(c.clone()).or_default();
            rec.ever_sc = true;
            rec.represented_thought = true;
            rec.subjective_element = true;
            rec.max_context_length = rec.max_context_length.max(2);
        }
    }

    /// Continues a subjective run already in progress (e.g. from a preamble).
    pub fn resume_run(&mut self, sc: CharacterSet, length: usize) {
        if !sc.is_empty() && length > 0 {
            self.run = Some((sc, length));
        }
    }

    pub fn get(&self, character: &CharacterId) -> Option<&CharacterHistory> {
        self.records.get(character)
    }

    pub fn records(&self) -> &BTreeMap<CharacterId, CharacterHistory> {
        &self.records
    }

    pub fn record_sentence(&mut self, interpretation: &Interpretation, traits: SubjectiveTraits) {
        let sc = match interpretation {
            Interpretation::Subjective(sc) if !sc.is_empty() => sc,
            _ => {
                self.run = None;
                return;
            }
        };
        let length = match &self.run {
            Some((run_sc, n)) if run_sc == sc => n + 1,
            _ => 1,
        };
        self.run = Some((sc.clone(), length));
        for c in sc {
            let rec = self.records.entry(c.clone()).or_default();
            rec.ever_sc = true;
            rec.represented_thought |= traits.represented_thought;
            rec.subjective_element |= traits.subjective_element;
            rec.max_context_length = rec.max_context_length.max(length);
        }
    }

    pub fn record_break(&mut self) {
        self.run = None;
    }
}

/// How the state of affairs to consider was selected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "route", content = "clause")]
pub enum ChoiceRoute {
    /// The main clause is about a private state, or a private-state action
    /// treated as one.
    MainClause,
    /// The head noun of the main-clause subject is about a private state.
    HeadNoun,
    /// A non-main clause about a private state that is not itself within the
    /// scope of another private-state clause.
    SubordinatedClause(String),
    /// Nothing better; the main clause.
    MainFallback,
}

#[derive(Clone, Copy, Debug)]
pub struct Choice<'f> {
    pub soa: &'f StateOfAffairs,
    pub clause: Option<&'f Clause>,
}

/// Everything a sentence is interpreted against.
#[derive(Clone, Copy, Debug)]
pub struct Frame<'a> {
    pub context: &'a Context,
    pub history: &'a SubjectiveHistory,
    pub policy: SignificancePolicy,
}

impl<'a> Frame<'a> {
    pub fn new(context: &'a Context, history: &'a SubjectiveHistory, policy: SignificancePolicy) -> Self {
        Frame {
            context,
            history,
            policy,
        }
    }

    /// Whether a private-state action is to be read as a private state: its
    /// actor is specified, has been an SC, and every member satisfies the
    /// significance policy.
    pub fn treat_as_private_state(&self, soa: &StateOfAffairs) -> bool {
        debug_assert_eq!(soa.kind, SoaType::PrivateStateAction);
        !soa.who.is_empty()
            && soa.who.is_subset(&self.context.previous_scs)
            && (self.policy == SignificancePolicy::AnyPreviousSc
                || soa
                    .who
                    .iter()
                    .all(|c| self.history.get(c).is_some_and(|rec| self.policy.admits(rec))))
    }

    fn counts_as_private_state(&self, soa: &StateOfAffairs) -> bool {
        match soa.kind {
            SoaType::PrivateState => true,
            SoaType::PrivateStateAction => self.treat_as_private_state(soa),
            _ => false,
        }
    }

    /// Non-main clauses about a (treated) private state that are not within
    /// the scope of any private-state or private-state-action clause, in
    /// document order.
    pub fn candidate_subordinated_clauses<'f>(&self, fs: &'f FeatureSet) -> Vec<&'f Clause> {
        let main = fs.main_clause();
        fs.clauses()
            .iter()
            .filter(|c| c.id != main.id)
            .filter(|c| self.counts_as_private_state(fs.soa_of_clause(c)))
            .filter(|c| {
                !fs.subordinating_clauses(c).iter().any(|outer| {
                    fs.clauses()
                        .iter()
                        .find(|o| &o.id == outer)
                        .map(|o| fs.soa_of_clause(o).kind)
                        .is_some_and(|k| matches!(k, SoaType::PrivateState | SoaType::PrivateStateAction))
                })
            })
            .collect()
    }

    /// The single state of affairs the rest of the algorithm considers.
    /// Among several candidate subordinated clauses the first in document
    /// order wins.
    pub fn choose<'f>(&self, fs: &'f FeatureSet) -> (Choice<'f>, ChoiceRoute) {
        let main_clause = fs.main_clause();
        let main = fs.main_soa();
        if self.counts_as_private_state(main) {
            return (
                Choice {
                    soa: main,
                    clause: Some(main_clause),
                },
                ChoiceRoute::MainClause,
            );
        }
        if let Some(hn) = fs.head_noun_soa() {
            return (Choice { soa: hn, clause: None }, ChoiceRoute::HeadNoun);
        }
        if let Some(c) = self.candidate_subordinated_clauses(fs).first() {
            return (
                Choice {
                    soa: fs.soa_of_clause(c),
                    clause: Some(c),
                },
                ChoiceRoute::SubordinatedClause(c.id.clone()),
            );
        }
        (
            Choice {
                soa: main,
                clause: Some(main_clause),
            },
            ChoiceRoute::MainFallback,
        )
    }

    pub fn chosen_state_of_affairs<'f>(&self, fs: &'f FeatureSet) -> &'f StateOfAffairs {
        self.choose(fs).0.soa
    }

    /// Potential subjective elements that are subjective in the current situation.
    pub fn subjective_elements<'f>(&self, fs: &'f FeatureSet) -> Vec<&'f Pse> {
        fs.pses()
            .iter()
            .filter(|p| p.category.is_subjective_in(self.context.situation))
            .collect()
    }

    /// Subjective elements that argue against reading a private-state
    /// sentence as a report: those outside the scope of `soa` and not of an
    /// excluded category.
    pub fn subjective_elements_to_consider<'f>(&self, soa: &StateOfAffairs, fs: &'f FeatureSet) -> Vec<&'f Pse> {
        self.subjective_elements(fs)
            .into_iter()
            .filter(|p| !p.category.excluded)
            .filter(|p| !pse_subordinated_to_soa(p, soa, fs))
            .collect()
    }

    pub fn triggers(&self, fs: &FeatureSet) -> Triggers {
        let soa = self.chosen_state_of_affairs(fs);
        Triggers {
            parenthetical: fs.parenthetical().is_some(),
            subjective_elements: !self.subjective_elements(fs).is_empty(),
            private_state: soa.kind == SoaType::PrivateState,
            treated_private_state_action: soa.kind == SoaType::PrivateStateAction && self.treat_as_private_state(soa),
            nonprivate_state_continuing: soa.kind == SoaType::NonprivateState
                && self.context.situation == TextSituation::ContinuingSubjective,
        }
    }

    pub fn sentence_is_subjective(&self, fs: &FeatureSet) -> bool {
        self.triggers(fs).any()
    }

    pub fn identify_sc_from_the_sentence(&self, fs: &FeatureSet) -> CharacterSet {
        if let Some(subject) = fs.parenthetical() {
            return subject.clone();
        }
        let soa = self.chosen_state_of_affairs(fs);
        let who = &soa.who;
        let last_sc = &self.context.last_sc;
        let situation_allows = self.context.situation != TextSituation::ContinuingSubjective
            || who.is_strict_subset(last_sc)
            || who.is_strict_superset(last_sc);
        if !who.is_empty()
            && self.subjective_elements_to_consider(soa, fs).is_empty()
            && self.counts_as_private_state(soa)
            && situation_allows
        {
            who.clone()
        } else {
            CharacterSet::new()
        }
    }

    /// Resolves competition between the last SC and the last active
    /// character: the last SC wins only when the sentence is about the last
    /// active character.
    pub fn choose_an_expected_sc(&self, fs: &FeatureSet) -> CharacterSet {
        if self.chosen_state_of_affairs(fs).who == self.context.last_active_character {
            self.context.last_sc.clone()
        } else {
            self.context.last_active_character.clone()
        }
    }

    pub fn identify_sc(&self, fs: &FeatureSet) -> CharacterSet {
        self.sc_route(fs).1
    }

    fn sc_route(&self, fs: &FeatureSet) -> (ScRoute, CharacterSet) {
        let from_sentence = self.identify_sc_from_the_sentence(fs);
        if !from_sentence.is_empty() {
            let route = if fs.parenthetical().is_some() {
                ScRoute::Parenthetical
            } else {
                ScRoute::Experiencer
            };
            return (route, from_sentence);
        }
        let ctx = self.context;
        match (last_sc_is_expected(ctx), last_active_character_is_expected(ctx)) {
            (true, true) => {
                let about_active = self.chosen_state_of_affairs(fs).who == ctx.last_active_character;
                (ScRoute::Competition { about_active }, self.choose_an_expected_sc(fs))
            }
            (true, false) => (ScRoute::LastSc, ctx.last_sc.clone()),
            (false, true) => (ScRoute::LastActiveCharacter, ctx.last_active_character.clone()),
            (false, false) => (ScRoute::Failed, CharacterSet::new()),
        }
    }

    /// The actor of an actual, current action by a previous SC; empty otherwise.
    pub fn active_character_of(&self, fs: &FeatureSet) -> CharacterSet {
        let (choice, _) = self.choose(fs);
        let soa = choice.soa;
        let is_action = match soa.kind {
            SoaType::Action => true,
            SoaType::PrivateStateAction => !self.treat_as_private_state(soa),
            _ => false,
        };
        let Some(clause) = choice.clause else {
            return CharacterSet::new();
        };
        let vp = clause.verb;
        if is_action
            && !soa.who.is_empty()
            && soa.who.is_subset(&self.context.previous_scs)
            && vp.simple_past
            && !vp.negated
            && !vp.habitual
            && !vp.modal
        {
            soa.who.clone()
        } else {
            CharacterSet::new()
        }
    }

    pub fn pov(&self, fs: &FeatureSet) -> Interpretation {
        if self.sentence_is_subjective(fs) {
            Interpretation::Subjective(self.identify_sc(fs))
        } else {
            Interpretation::Objective(self.active_character_of(fs))
        }
    }

    /// What a subjective reading of `fs` contributes to the history.
    pub fn traits(&self, fs: &FeatureSet) -> SubjectiveTraits {
        let t = self.triggers(fs);
        SubjectiveTraits {
            represented_thought: !t.parenthetical && !t.private_state && !t.treated_private_state_action,
            subjective_element: t.subjective_elements,
        }
    }

    /// The interpretation together with every intermediate decision, for traces.
    pub fn analyze(&self, fs: &FeatureSet) -> Analysis {
        let (choice, route) = self.choose(fs);
        let main = fs.main_soa();
        let psa = (main.kind == SoaType::PrivateStateAction).then(|| {
            let treated = self.treat_as_private_state(main);
            let reason = if treated {
                PsaReason::HasBeenSc
            } else if main.who.is_empty() {
                PsaReason::UnspecifiedActor
            } else if !main.who.is_subset(&self.context.previous_scs) {
                PsaReason::NotPreviousSc
            } else {
                PsaReason::NotSignificant(self.policy)
            };
            PsaTreatment {
                actor: main.who.clone(),
                treated,
                reason,
            }
        });
        let subjective = self.subjective_elements(fs);
        let to_consider = self.subjective_elements_to_consider(choice.soa, fs);
        let triggers = self.triggers(fs);
        let interpretation = self.pov(fs);
        let sc_route = interpretation.is_subjective().then(|| self.sc_route(fs).0);
        let names = |ps: &[&Pse]| ps.iter().map(|p| p.category.name.clone()).collect::<Vec<_>>();
        Analysis {
            chosen: ChosenSoa {
                id: choice.soa.id.clone(),
                kind: choice.soa.kind,
                who: choice.soa.who.clone(),
                route,
            },
            psa,
            considered: fs.pses().iter().map(|p| p.category.name.clone()).collect(),
            subjective_elements: names(&subjective),
            not_considered_for_sc: subjective
                .iter()
                .filter(|p| !to_consider.iter().any(|q| q.id == p.id))
                .map(|p| p.category.name.clone())
                .collect(),
            triggers,
            sc_route,
            interpretation,
        }
    }
}

/// Elements are never within the scope of the head-noun state; otherwise an
/// element is subordinated to `soa` when it lies within a clause about `soa`.
fn pse_subordinated_to_soa(pse: &Pse, soa: &StateOfAffairs, fs: &FeatureSet) -> bool {
    if fs.head_noun_soa_id() == Some(soa.id.as_str()) {
        return false;
    }
    fs.clauses()
        .iter()
        .filter(|c| c.soa == soa.id)
        .any(|c| fs.pse_within_clause(pse, &c.id))
}

/// The conditions under which a sentence is read as subjective.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Triggers {
    pub parenthetical: bool,
    pub subjective_elements: bool,
    pub private_state: bool,
    pub treated_private_state_action: bool,
    pub nonprivate_state_continuing: bool,
}

impl Triggers {
    pub fn any(&self) -> bool {
        self.parenthetical
            || self.subjective_elements
            || self.private_state
            || self.treated_private_state_action
            || self.nonprivate_state_continuing
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScRoute {
    Parenthetical,
    Experiencer,
    Competition { about_active: bool },
    LastSc,
    LastActiveCharacter,
    Failed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsaReason {
    HasBeenSc,
    UnspecifiedActor,
    NotPreviousSc,
    NotSignificant(SignificancePolicy),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsaTreatment {
    pub actor: CharacterSet,
    pub treated: bool,
    pub reason: PsaReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChosenSoa {
    pub id: String,
    pub kind: SoaType,
    pub who: CharacterSet,
    pub route: ChoiceRoute,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Analysis {
    pub chosen: ChosenSoa,
    /// Set when the main clause is about a private-state action.
    pub psa: Option<PsaTreatment>,
    /// Categories of every potential subjective element, in order.
    pub considered: Vec<String>,
    pub subjective_elements: Vec<String>,
    /// Subjective elements ignored when identifying the SC (subordinated or excluded).
    pub not_considered_for_sc: Vec<String>,
    pub triggers: Triggers,
    pub sc_route: Option<ScRoute>,
    pub interpretation: Interpretation,
}

/// Where a fold starts: context and history before the first item.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Start {
    pub context: Context,
    pub history: SubjectiveHistory,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    Sentence { id: String, analysis: Box<Analysis> },
    Break(Break),
}

/// One input item with the contexts around it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub index: usize,
    pub kind: StepKind,
    pub before: Context,
    pub after: Context,
}

impl Step {
    pub fn interpretation(&self) -> Option<&Interpretation> {
        match &self.kind {
            StepKind::Sentence { analysis, .. } => Some(&analysis.interpretation),
            StepKind::Break(_) => None,
        }
    }

    pub fn sentence_id(&self) -> Option<&str> {
        match &self.kind {
            StepKind::Sentence { id, .. } => Some(id),
            StepKind::Break(_) => None,
        }
    }
}

/// Interprets every item in order, threading context and history.
pub fn track(items: &[InputItem], start: Start, policy: SignificancePolicy) -> Vec<Step> {
    let Start {
        mut context,
        mut history,
    } = start;
    let mut steps = Vec::with_capacity(items.len());
    for (index, item) in items.iter().enumerate() {
        let before = context.clone();
        let kind = match item {
            InputItem::Break(brk) => {
                context = new_context_after_break(*brk, &context);
                history.record_break();
                StepKind::Break(*brk)
            }
            InputItem::Sentence(sentence) => {
                let frame = Frame::new(&before, &history, policy);
                let analysis = frame.analyze(&sentence.features);
                let traits = frame.traits(&sentence.features);
                context = new_context(&analysis.interpretation, &before);
                history.record_sentence(&analysis.interpretation, traits);
                StepKind::Sentence {
                    id: sentence.id.clone(),
                    analysis: Box::new(analysis),
                }
            }
        };
        steps.push(Step {
            index,
            kind,
            before,
            after: context.clone(),
        });
    }
    steps
}
