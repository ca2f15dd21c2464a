//! Context transitions after sentences and breaks, and the predicates that
//! say which characters are expected to become the subjective character.

use crate::model::{Break, Context, Interpretation, TextSituation};

use TextSituation::*;

/// Context of the item following a sentence with the given interpretation.
pub fn new_context(interpretation: &Interpretation, context: &Context) -> Context {
    match interpretation {
        Interpretation::Subjective(sc) => Context {
            last_sc: sc.clone(),
            last_active_character: context.last_active_character.clone(),
            previous_scs: sc.union(&context.previous_scs),
            situation: ContinuingSubjective,
        },
        Interpretation::Objective(active) => {
            let has_active = !active.is_empty();
            let situation = match (has_active, context.situation) {
                (true, PresubjectiveNonactive) => PresubjectiveActive,
                (true, PostsubjectiveNonactive | BrokenSubjective) => PostsubjectiveActive,
                (false, BrokenSubjective) => PostsubjectiveNonactive,
                (_, ContinuingSubjective) => InterruptedSubjective,
                (_, unchanged) => unchanged,
            };
            Context {
                last_sc: context.last_sc.clone(),
                last_active_character: if has_active {
                    active.clone()
                } else {
                    context.last_active_character.clone()
                },
                previous_scs: context.previous_scs.clone(),
                situation,
            }
        }
    }
}

/// Context of the item following a paragraph or scene break.
pub fn new_context_after_break(brk: Break, context: &Context) -> Context {
    let situation = match (brk, context.situation) {
        (Break::Scene, _) => PresubjectiveNonactive,
        (Break::Paragraph, PresubjectiveNonactive) => PresubjectiveNonactive,
        (Break::Paragraph, PresubjectiveActive) => PresubjectiveNonactive,
        (Break::Paragraph, ContinuingSubjective) => BrokenSubjective,
        (Break::Paragraph, BrokenSubjective) => BrokenSubjective,
        (Break::Paragraph, InterruptedSubjective) => PostsubjectiveNonactive,
        (Break::Paragraph, PostsubjectiveNonactive) => PostsubjectiveNonactive,
        (Break::Paragraph, PostsubjectiveActive) => PostsubjectiveNonactive,
    };
    Context {
        situation,
        ..context.clone()
    }
}

/// The last SC is expected once a subjective sentence has appeared in the scene.
pub fn last_sc_is_expected(context: &Context) -> bool {
    !matches!(context.situation, PresubjectiveNonactive | PresubjectiveActive)
}

/// The last active character is expected when a sentence with an active
/// character, and no subjective sentence, has appeared earlier in the paragraph.
pub fn last_active_character_is_expected(context: &Context) -> bool {
    matches!(context.situation, PresubjectiveActive | PostsubjectiveActive)
}
