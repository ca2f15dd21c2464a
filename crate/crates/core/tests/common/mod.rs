#![allow(dead_code)]

use std::path::PathBuf;

use proptest::prelude::*;
use proptest::sample::subsequence;

use povtrack::model::{Clause, FeatureParts, Pse, Sentence, StateOfAffairs, VerbFeatures};
use povtrack::{
    load_document, Break, CharacterSet, Context, Document, FeatureSet, InputItem, Interpretation, Registry, SoaType,
    TextSituation,
};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> Document {
    let bytes = std::fs::read(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    load_document(&bytes, &Registry::default()).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn set(names: &[&str]) -> CharacterSet {
    CharacterSet::of(names.iter().copied())
}

pub fn subj(names: &[&str]) -> Interpretation {
    Interpretation::Subjective(set(names))
}

pub fn obj(names: &[&str]) -> Interpretation {
    Interpretation::Objective(set(names))
}

pub const CAST: [&str; 3] = ["Ann", "Ben", "Cal"];

pub fn arb_situation() -> impl Strategy<Value = TextSituation> {
    prop::sample::select(TextSituation::ALL.to_vec())
}

pub fn arb_characters() -> impl Strategy<Value = CharacterSet> {
    subsequence(CAST.to_vec(), 0..=CAST.len()).prop_map(CharacterSet::of)
}

pub fn arb_nonempty_characters() -> impl Strategy<Value = CharacterSet> {
    subsequence(CAST.to_vec(), 1..=CAST.len()).prop_map(CharacterSet::of)
}

pub fn arb_context() -> impl Strategy<Value = Context> {
    (arb_characters(), arb_characters(), arb_characters(), arb_situation()).prop_map(|(last, active, prev, ts)| {
        Context {
            previous_scs: prev.union(&last),
            last_sc: last,
            last_active_character: active,
            situation: ts,
        }
    })
}

pub fn arb_kind() -> impl Strategy<Value = SoaType> {
    prop::sample::select(vec![
        SoaType::PrivateStateAction,
        SoaType::Action,
        SoaType::PrivateState,
        SoaType::NonprivateState,
    ])
}

pub fn arb_verb() -> impl Strategy<Value = VerbFeatures> {
    prop::array::uniform6(any::<bool>()).prop_map(|b| VerbFeatures {
        simple_past: b[0],
        negated: b[1],
        habitual: b[2],
        modal: b[3],
        past_perfective: b[4],
        progressive: b[5],
    })
}

/// Well-formed feature sets over [`CAST`]: a clause tree rooted at `c0`,
/// one state of affairs per clause, an optional head-noun private state and
/// elements of any default category.
pub fn arb_features() -> impl Strategy<Value = FeatureSet> {
    let categories: Vec<String> = Registry::default().categories().map(|c| c.name.clone()).collect();
    (1usize..=4)
        .prop_flat_map(move |n| {
            (
                prop::collection::vec((arb_kind(), arb_characters(), arb_verb()), n),
                prop::collection::vec(any::<prop::sample::Index>(), n),
                prop::collection::vec((prop::sample::select(categories.clone()), prop::option::of(0..n)), 0..4),
                prop::option::weighted(0.15, arb_nonempty_characters()),
                prop::option::weighted(0.2, arb_characters()),
                any::<bool>(),
            )
        })
        .prop_map(|(clauses, parents, pses, parenthetical, head_noun, quoted)| {
            let registry = Registry::default();
            let mut parts = FeatureParts::default();
            for (i, (kind, who, verb)) in clauses.iter().enumerate() {
                parts.soas.push(StateOfAffairs {
                    id: format!("a{i}"),
                    kind: *kind,
                    who: who.clone(),
                });
                parts.clauses.push(Clause {
                    id: format!("c{i}"),
                    soa: format!("a{i}"),
                    under: if i == 0 {
                        vec![]
                    } else {
                        vec![format!("c{}", parents[i].index(i))]
                    },
                    verb: *verb,
                });
            }
            for (i, (category, under)) in pses.into_iter().enumerate() {
                parts.pses.push(Pse {
                    id: format!("p{i}"),
                    category: registry.lookup(&category).unwrap().clone(),
                    under: under.map(|c| vec![format!("c{c}")]).unwrap_or_default(),
                });
            }
            if let Some(who) = head_noun {
                parts.soas.push(StateOfAffairs {
                    id: "hn".into(),
                    kind: SoaType::PrivateState,
                    who,
                });
                parts.head_noun_soa = Some("hn".into());
            }
            parts.parenthetical = parenthetical;
            parts.quoted_speech = quoted && clauses[0].0 == SoaType::Action;
            FeatureSet::new(parts).expect("generated feature sets are well formed")
        })
}

#[derive(Clone, Debug)]
pub enum Shape {
    Sentence(FeatureSet),
    Paragraph,
    Scene,
}

pub fn arb_shape() -> impl Strategy<Value = Shape> {
    prop_oneof![
        6 => arb_features().prop_map(Shape::Sentence),
        2 => Just(Shape::Paragraph),
        1 => Just(Shape::Scene),
    ]
}

pub fn items_from(shapes: Vec<Shape>) -> Vec<InputItem> {
    shapes
        .into_iter()
        .enumerate()
        .map(|(i, shape)| match shape {
            Shape::Sentence(features) => InputItem::Sentence(Box::new(Sentence {
                id: format!("s{i}"),
                text: None,
                features,
                gold: None,
            })),
            Shape::Paragraph => InputItem::Break(Break::Paragraph),
            Shape::Scene => InputItem::Break(Break::Scene),
        })
        .collect()
}

pub fn arb_document() -> impl Strategy<Value = Document> {
    (
        prop::collection::vec(arb_shape(), 0..25),
        prop::option::of(arb_context()),
        prop::option::of(any::<String>()),
    )
        .prop_map(|(shapes, preamble, text)| {
            let mut items = items_from(shapes);
            if let (Some(text), Some(InputItem::Sentence(s))) = (text, items.first_mut()) {
                s.text = Some(text);
            }
            Document {
                title: "generated".into(),
                roster: set(&CAST),
                preamble,
                items,
            }
        })
}
