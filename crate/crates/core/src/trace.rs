//! Plain-text rendering of tracker output.
//!
//! Interpretation lines have the form `<id>\tSUBJECTIVE|OBJECTIVE\t<names>`
//! with comma-joined names. Trace lines never contain a tab, so the
//! interpretation lines can always be recovered from a trace with a filter.

use std::fmt::Write as _;

use crate::corpus::Document;
use crate::engine::{ChoiceRoute, PsaReason, ScRoute, Step, StepKind};
use crate::model::{Break, CharacterSet, Context, InputItem, Interpretation, SoaType, TextSituation};
use crate::situation::{last_active_character_is_expected, last_sc_is_expected};

pub fn interpretation_line(id: &str, interpretation: &Interpretation) -> String {
    let (kind, who) = match interpretation {
        Interpretation::Subjective(sc) => ("SUBJECTIVE", sc),
        Interpretation::Objective(ac) => ("OBJECTIVE", ac),
    };
    format!("{id}\t{kind}\t{}", who.joined())
}

/// One interpretation line per sentence.
pub fn render_interpretations(steps: &[Step]) -> String {
    let mut out = String::new();
    for step in steps {
        if let (Some(id), Some(interp)) = (step.sentence_id(), step.interpretation()) {
            out.push_str(&interpretation_line(id, interp));
            out.push('\n');
        }
    }
    out
}

/// Ids of sentences read as subjective whose SC could not be identified.
pub fn sc_failures(steps: &[Step]) -> Vec<&str> {
    steps
        .iter()
        .filter_map(|s| match &s.kind {
            StepKind::Sentence { id, analysis } if analysis.sc_route == Some(ScRoute::Failed) => Some(id.as_str()),
            _ => None,
        })
        .collect()
}

/// The full trace: preamble, then for each item a block of explanation
/// followed (for sentences) by its interpretation line.
pub fn render_trace(doc: &Document, steps: &[Step]) -> String {
    let mut t = Trace(String::new());
    if let Some(pre) = &doc.preamble {
        t.preamble(pre);
    }
    for step in steps {
        match &step.kind {
            StepKind::Break(brk) => t.brk(*brk, step),
            StepKind::Sentence { id, .. } => {
                let text = match &doc.items[step.index] {
                    InputItem::Sentence(s) => s.text.as_deref(),
                    InputItem::Break(_) => None,
                };
                t.sentence(id, text, step);
            }
        }
    }
    t.0
}

struct Trace(String);

impl Trace {
    fn line(&mut self, depth: usize, text: impl AsRef<str>) {
        let _ = writeln!(self.0, "{:indent$}{}", "", text.as_ref(), indent = depth * 2);
    }

    fn list<S: AsRef<str>>(&mut self, depth: usize, singular: &str, plural: &str, items: &[S]) {
        self.line(depth, if items.len() == 1 { singular } else { plural });
        for item in items {
            self.line(depth + 1, item);
        }
    }

    fn preamble(&mut self, c: &Context) {
        self.line(0, format!(": Initialize situation to {}.", c.situation.abbrev()));
        self.line(0, format!("The situation is now {}", c.situation.abbrev()));
        if !c.last_sc.is_empty() {
            self.line(0, format!(": Initialize last_subj_char to {}.", c.last_sc.prose()));
            self.line(0, format!("{} is the last_subj_char", c.last_sc.prose()));
        }
        let earlier: CharacterSet = c
            .previous_scs
            .iter()
            .filter(|p| !c.last_sc.contains(p))
            .cloned()
            .collect();
        if !earlier.is_empty() {
            self.line(0, format!(": Previous subj_chars {}.", earlier.prose()));
            self.line(0, format!("{} has been the subj_char", earlier.prose()));
        }
        if !c.last_active_character.is_empty() {
            self.line(
                0,
                format!(": Initialize last_active_char to {}.", c.last_active_character.prose()),
            );
            self.line(
                0,
                format!("{} is the last_active_char", c.last_active_character.prose()),
            );
        }
    }

    fn expected(&mut self, depth: usize, c: &Context) {
        let mut who = Vec::new();
        if last_sc_is_expected(c) {
            who.push(format!("{}, the last_subj_char", c.last_sc.prose()));
        }
        if last_active_character_is_expected(c) {
            who.push(format!("{}, the last_active_char", c.last_active_character.prose()));
        }
        if who.is_empty() {
            self.line(depth, "No expected subjective character");
        } else {
            self.list(
                depth,
                "Expected subjective character:",
                "Expected subjective characters:",
                &who,
            );
        }
    }

    fn brk(&mut self, brk: Break, step: &Step) {
        let name = match brk {
            Break::Paragraph => "paragraph break",
            Break::Scene => "scene break",
        };
        self.line(
            0,
            match brk {
                Break::Paragraph => ": Paragraph.",
                Break::Scene => ": Scene break.",
            },
        );
        self.line(0, format!("Before the {name}:"));
        self.line(1, format!("The situation is {}", step.before.situation.abbrev()));
        self.expected(1, &step.before);
        self.line(0, format!("After the {name}:"));
        self.line(1, format!("The situation is {}", step.after.situation.abbrev()));
        for (role, test) in [
            (
                "last_active_char",
                last_active_character_is_expected as fn(&Context) -> bool,
            ),
            ("last_subj_char", last_sc_is_expected),
        ] {
            match (test(&step.before), test(&step.after)) {
                (true, true) => self.line(1, format!("The {role} is still an expected subjective character")),
                (true, false) => self.line(1, format!("The {role} is no longer an expected subjective character")),
                (false, true) => self.line(1, format!("The {role} is now an expected subjective character")),
                (false, false) => {}
            }
        }
    }

    fn sentence(&mut self, id: &str, text: Option<&str>, step: &Step) {
        let StepKind::Sentence { analysis: a, .. } = &step.kind else {
            return;
        };
        let before = step.before.situation;
        let after = step.after.situation;
        match text {
            Some(text) => self.line(0, format!(": [{id}] {}", text.replace(['\t', '\n'], " "))),
            None => self.line(0, format!(": [{id}]")),
        }
        self.line(0, "At the beginning of this sentence:");
        self.line(1, format!("The situation is {}", before.abbrev()));
        self.expected(1, &step.before);

        if let Some(psa) = &a.psa {
            let how = if psa.treated { "a private state" } else { "an action" };
            let why = match psa.reason {
                PsaReason::HasBeenSc => "Actor has been the subj_char".to_string(),
                PsaReason::NotPreviousSc => "Actor has not been the subj_char".to_string(),
                PsaReason::UnspecifiedActor => "Actor is unspecified".to_string(),
                PsaReason::NotSignificant(p) => format!("Actor has no significant subjective context under {p}"),
            };
            self.line(
                1,
                format!("Private-state action of {} treated as {how}: {why}", psa.actor.prose()),
            );
        }
        let chosen = &a.chosen;
        let about = format!("{} of {}", chosen.kind.name(), chosen.who.prose());
        match &chosen.route {
            ChoiceRoute::HeadNoun => self.line(1, format!("State of affairs considered: {about}, from the head noun")),
            ChoiceRoute::SubordinatedClause(c) => self.line(
                1,
                format!("State of affairs considered: {about}, from subordinated clause {c}"),
            ),
            ChoiceRoute::MainClause | ChoiceRoute::MainFallback => {}
        }

        let considered: Vec<&String> = a
            .considered
            .iter()
            .filter(|c| !a.not_considered_for_sc.contains(c))
            .collect();
        let fired: Vec<&String> = a
            .subjective_elements
            .iter()
            .filter(|c| !a.not_considered_for_sc.contains(c))
            .collect();
        if !considered.is_empty() {
            self.list(
                1,
                "Potential subjective element considered:",
                "Potential subjective elements considered:",
                &considered,
            );
            if considered.len() == 1 {
                self.line(
                    1,
                    if fired.is_empty() {
                        "It is not a subjective element"
                    } else {
                        "It is a subjective element"
                    },
                );
            } else if fired.len() == considered.len() {
                self.line(1, "All of these are subjective elements");
            } else if fired.is_empty() {
                self.line(1, "None of these are subjective elements");
            } else {
                self.list(
                    1,
                    "Of these, the following is a subjective element:",
                    "Of these, the following are subjective elements:",
                    &fired,
                );
            }
        }
        if !a.not_considered_for_sc.is_empty() {
            self.list(
                1,
                "Potential subjective element not considered:",
                "Potential subjective elements not considered:",
                &a.not_considered_for_sc,
            );
        }

        match &a.interpretation {
            Interpretation::Subjective(sc) => {
                if let Some(ScRoute::Competition { about_active }) = a.sc_route {
                    self.line(1, "Competition between the last_subj_char and the last_active_char");
                    self.line(
                        1,
                        if about_active {
                            "Choosing the last_subj_char because the sentence is about the last_active_char"
                        } else {
                            "Choosing the last_active_char because the sentence is not about the last_active_char"
                        },
                    );
                }
                let mut features: Vec<String> = fired.iter().map(|c| c.to_string()).collect();
                if features.is_empty() {
                    let t = &a.triggers;
                    let who = chosen.who.prose();
                    if t.parenthetical {
                        features.push("narrative parenthetical".into());
                    }
                    if t.private_state {
                        features.push(format!("private_state of {who}"));
                    }
                    if t.treated_private_state_action {
                        features.push(format!("private_state_action of {who}"));
                    }
                    if t.nonprivate_state_continuing {
                        features.push(format!(
                            "{} in continuing-subj situation",
                            SoaType::NonprivateState.name()
                        ));
                    }
                    if features.is_empty() {
                        features.extend(a.subjective_elements.iter().cloned());
                    }
                }
                let verb = if before == TextSituation::ContinuingSubjective {
                    "continued"
                } else {
                    "established"
                };
                self.list(
                    1,
                    &format!("Subjective context {verb} by this feature:"),
                    &format!("Subjective context {verb} by these features:"),
                    &features,
                );
                if sc.is_empty() {
                    self.line(1, "Warning: the subj_char could not be identified");
                } else {
                    self.line(1, format!("The subj_char is {}", sc.prose()));
                }
            }
            Interpretation::Objective(ac) => {
                if !ac.is_empty() {
                    self.line(1, format!("{} is the active_char of this sentence", ac.prose()));
                }
                self.line(1, "The sentence is not subjective");
            }
        }

        if before == after {
            self.line(1, format!("The situation is still {}", after.abbrev()));
        } else {
            let cause = match &a.interpretation {
                Interpretation::Subjective(_) => None,
                Interpretation::Objective(_) if before == TextSituation::ContinuingSubjective => {
                    Some(format!("Objective sentence in {} situation:", before.abbrev()))
                }
                Interpretation::Objective(ac) if !ac.is_empty() => Some(format!(
                    "Sentence with an active_char in {} situation:",
                    before.abbrev()
                )),
                Interpretation::Objective(_) => Some(format!(
                    "Sentence without an active_char in {} situation:",
                    before.abbrev()
                )),
            };
            match cause {
                Some(cause) => {
                    self.line(1, cause);
                    self.line(1, format!("situation is now {}", after.abbrev()));
                }
                None => self.line(1, format!("The situation is now {}", after.abbrev())),
            }
        }
        self.0.push_str(&interpretation_line(id, &a.interpretation));
        self.0.push('\n');
    }
}
