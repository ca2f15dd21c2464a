//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use povtrack::engine::{PsaReason, ScRoute};
use povtrack::eval::{
    classify_operation, NON_QUOTED_ROW, OBJECTIVE_ROW, SUBJECTIVE_ROW, WRONG_CHARACTER, WRONG_OBJECTIVE,
};
use povtrack::situation::{
    last_active_character_is_expected, last_sc_is_expected, new_context, new_context_after_break,
};
use povtrack::trace::sc_failures;
use povtrack::{
    evaluate, load_document, track_document, Analysis, Break, Context, Document, InputItem, Interpretation,
    PovOperation, Registry, SignificancePolicy, Step, StepKind, TextSituation,
};

use TextSituation::*;

const POLICY: SignificancePolicy = SignificancePolicy::AnyPreviousSc;

fn analysis(step: &Step) -> &Analysis {
    match &step.kind {
        StepKind::Sentence { analysis, .. } => analysis,
        StepKind::Break(_) => panic!("item {} is a break", step.index),
    }
}

fn timed_run(name: &str) -> (Document, Vec<Step>) {
    let start = Instant::now();
    let doc = fixture(name);
    let steps = track_document(&doc, POLICY);
    assert!(
        start.elapsed() < Duration::from_secs(1),
        "{name} took {:?}",
        start.elapsed()
    );
    (doc, steps)
}

fn situations(steps: &[Step]) -> Vec<(TextSituation, TextSituation)> {
    steps.iter().map(|s| (s.before.situation, s.after.situation)).collect()
}

fn interpretations(steps: &[Step]) -> Vec<Interpretation> {
    steps.iter().filter_map(|s| s.interpretation().cloned()).collect()
}

fn interpretation_of(steps: &[Step], id: &str) -> Interpretation {
    steps
        .iter()
        .find(|s| s.sentence_id() == Some(id))
        .and_then(|s| s.interpretation().cloned())
        .unwrap_or_else(|| panic!("no sentence {id}"))
}

fn demo1() {
    let (_, steps) = timed_run("demo1.json");
    assert_eq!(
        interpretations(&steps),
        [
            obj(&[]),
            obj(&[]),
            obj(&[]),
            subj(&["Dennys", "Sandy"]),
            obj(&[]),
            obj(&[]),
            subj(&["Dennys", "Sandy"])
        ]
    );
    assert_eq!(
        situations(&steps),
        [
            (PostsubjectiveNonactive, PostsubjectiveNonactive),
            (PostsubjectiveNonactive, PostsubjectiveNonactive),
            (PostsubjectiveNonactive, PostsubjectiveNonactive),
            (PostsubjectiveNonactive, ContinuingSubjective),
            (ContinuingSubjective, InterruptedSubjective),
            (InterruptedSubjective, InterruptedSubjective),
            (InterruptedSubjective, ContinuingSubjective),
        ]
    );
    let psa = analysis(&steps[0])
        .psa
        .as_ref()
        .expect("item 1 is a private-state action");
    assert!(!psa.treated);
    assert_eq!(psa.reason, PsaReason::NotPreviousSc);
    assert_eq!(analysis(&steps[3]).subjective_elements, ["sentence-fragment"]);
    assert_eq!(
        analysis(&steps[6]).subjective_elements,
        ["sentence-fragment", "seeming-verb"]
    );
    assert!(analysis(&steps[6]).considered.iter().any(|c| c == "progressive"));
}

fn demo2() {
    let (_, steps) = timed_run("demo2.json");
    assert_eq!(
        interpretations(&steps),
        [subj(&["the girl"]), subj(&["Johnnie Martin"])]
    );
    assert_eq!(
        situations(&steps),
        [
            (ContinuingSubjective, ContinuingSubjective),
            (ContinuingSubjective, BrokenSubjective),
            (BrokenSubjective, ContinuingSubjective),
        ]
    );
    let first = analysis(&steps[0]);
    let mut fired = first.subjective_elements.clone();
    fired.sort();
    assert_eq!(fired, ["eval-adjective", "past-perfective", "question"]);
    let last = analysis(&steps[2]);
    assert!(last.triggers.private_state);
    assert_eq!(last.sc_route, Some(ScRoute::Experiencer));
    assert_eq!(last.not_considered_for_sc, ["percept-term", "attitude-noun"]);
}

fn demo3() {
    let (_, steps) = timed_run("demo3.json");
    assert_eq!(
        interpretations(&steps),
        [
            obj(&["Newt"]),
            obj(&["Newt"]),
            obj(&["Jake"]),
            obj(&[]),
            subj(&["Newt"])
        ]
    );
    assert_eq!(
        situations(&steps),
        [
            (BrokenSubjective, PostsubjectiveActive),
            (PostsubjectiveActive, PostsubjectiveNonactive),
            (PostsubjectiveNonactive, PostsubjectiveActive),
            (PostsubjectiveActive, PostsubjectiveNonactive),
            (PostsubjectiveNonactive, PostsubjectiveActive),
            (PostsubjectiveActive, PostsubjectiveActive),
            (PostsubjectiveActive, ContinuingSubjective),
        ]
    );
    assert_eq!(
        analysis(&steps[6]).sc_route,
        Some(ScRoute::Competition { about_active: true })
    );
}

/// Situation after a sentence, derived by hand from the update rules:
/// (before, after a subjective sentence, after an objective sentence with an
/// active character, after an objective sentence without one).
const SENTENCE_TABLE: [(TextSituation, TextSituation, TextSituation, TextSituation); 7] = [
    (
        PresubjectiveNonactive,
        ContinuingSubjective,
        PresubjectiveActive,
        PresubjectiveNonactive,
    ),
    (
        PresubjectiveActive,
        ContinuingSubjective,
        PresubjectiveActive,
        PresubjectiveActive,
    ),
    (
        ContinuingSubjective,
        ContinuingSubjective,
        InterruptedSubjective,
        InterruptedSubjective,
    ),
    (
        BrokenSubjective,
        ContinuingSubjective,
        PostsubjectiveActive,
        PostsubjectiveNonactive,
    ),
    (
        InterruptedSubjective,
        ContinuingSubjective,
        InterruptedSubjective,
        InterruptedSubjective,
    ),
    (
        PostsubjectiveNonactive,
        ContinuingSubjective,
        PostsubjectiveActive,
        PostsubjectiveNonactive,
    ),
    (
        PostsubjectiveActive,
        ContinuingSubjective,
        PostsubjectiveActive,
        PostsubjectiveActive,
    ),
];

/// (before, after a paragraph break, after a scene break).
const BREAK_TABLE: [(TextSituation, TextSituation, TextSituation); 7] = [
    (PresubjectiveNonactive, PresubjectiveNonactive, PresubjectiveNonactive),
    (PresubjectiveActive, PresubjectiveNonactive, PresubjectiveNonactive),
    (ContinuingSubjective, BrokenSubjective, PresubjectiveNonactive),
    (BrokenSubjective, BrokenSubjective, PresubjectiveNonactive),
    (InterruptedSubjective, PostsubjectiveNonactive, PresubjectiveNonactive),
    (PostsubjectiveNonactive, PostsubjectiveNonactive, PresubjectiveNonactive),
    (PostsubjectiveActive, PostsubjectiveNonactive, PresubjectiveNonactive),
];

fn transitions() {
    let base = |situation| Context {
        last_sc: set(&["Ann"]),
        last_active_character: set(&["Ben"]),
        previous_scs: set(&["Ann", "Cal"]),
        situation,
    };
    assert_eq!(SENTENCE_TABLE.len(), TextSituation::ALL.len());
    let mut edges = Vec::new();
    for (ts, after_subj, after_active, after_empty) in SENTENCE_TABLE {
        let c = base(ts);

        let s = new_context(&subj(&["Ben"]), &c);
        assert_eq!(
            s,
            Context {
                last_sc: set(&["Ben"]),
                previous_scs: set(&["Ann", "Ben", "Cal"]),
                situation: after_subj,
                ..c.clone()
            }
        );

        let a = new_context(&obj(&["Cal"]), &c);
        assert_eq!(
            a,
            Context {
                last_active_character: set(&["Cal"]),
                situation: after_active,
                ..c.clone()
            }
        );

        let e = new_context(&obj(&[]), &c);
        assert_eq!(
            e,
            Context {
                situation: after_empty,
                ..c.clone()
            }
        );

        edges.extend([
            (ts, "subjective", s.situation),
            (ts, "objective", a.situation),
            (ts, "objective", e.situation),
        ]);
    }
    for (ts, after_paragraph, after_scene) in BREAK_TABLE {
        let c = base(ts);
        assert_eq!(
            new_context_after_break(Break::Paragraph, &c),
            Context {
                situation: after_paragraph,
                ..c.clone()
            }
        );
        assert_eq!(
            new_context_after_break(Break::Scene, &c),
            Context {
                situation: after_scene,
                ..c.clone()
            }
        );
        edges.extend([(ts, "paragraph", after_paragraph), (ts, "scene", after_scene)]);
    }
    for &(from, event, to) in &edges {
        match event {
            "scene" => assert_eq!(to, PresubjectiveNonactive),
            "subjective" => assert_eq!(to, ContinuingSubjective),
            _ => {}
        }
        if to == InterruptedSubjective && from != InterruptedSubjective {
            assert_eq!((from, event), (ContinuingSubjective, "objective"));
        }
    }
}

fn predicates() {
    let expected = [
        (PresubjectiveNonactive, false, false),
        (PresubjectiveActive, false, true),
        (ContinuingSubjective, true, false),
        (BrokenSubjective, true, false),
        (InterruptedSubjective, true, false),
        (PostsubjectiveNonactive, true, false),
        (PostsubjectiveActive, true, true),
    ];
    for (ts, sc, active) in expected {
        let c = Context {
            situation: ts,
            ..Context::initial()
        };
        assert_eq!(last_sc_is_expected(&c), sc, "{ts:?}");
        assert_eq!(last_active_character_is_expected(&c), active, "{ts:?}");
    }
    assert_eq!(TextSituation::ALL.len(), expected.len());
}

fn passages() {
    let (p15, steps) = timed_run("passages/p15.json");
    assert_eq!(interpretation_of(&steps, "15.11"), subj(&["Zoe"]));
    let at = p15
        .items
        .iter()
        .position(|i| i.as_sentence().is_some_and(|s| s.id == "15.11"))
        .unwrap();
    assert_eq!(classify_operation(&p15, at).unwrap(), Some(PovOperation::Resumption));

    assert_eq!(
        interpretation_of(&timed_run("passages/p17.json").1, "17.9"),
        subj(&["Augustus"])
    );
    assert_eq!(
        interpretation_of(&timed_run("passages/p18.json").1, "18.2"),
        subj(&["Lorena"])
    );

    let (_, steps) = timed_run("passages/p24.json");
    assert_eq!(interpretation_of(&steps, "24.1"), subj(&["Dennys", "Sandy"]));
    let plain = std::fs::read_to_string(fixture_path("passages/p24.json"))
        .unwrap()
        .replace(
            r#"{"id": "p1", "category": "evidential-certainty", "under": ["c1"]}"#,
            "",
        );
    let plain = load_document(plain.as_bytes(), &Registry::default()).unwrap();
    assert!(plain.sentences().all(|s| s.features.pses().is_empty()));
    assert_eq!(
        interpretation_of(&track_document(&plain, POLICY), "24.1"),
        subj(&["Japheth"])
    );

    let (_, steps) = timed_run("passages/p26.json");
    assert_eq!(interpretation_of(&steps, "26.2"), subj(&["Augustus"]));

    let (_, steps) = timed_run("passages/p27.json");
    let step = steps.iter().find(|s| s.sentence_id() == Some("27.2")).unwrap();
    assert_eq!(analysis(step).interpretation, subj(&["Sandy"]));
    assert_eq!(step.before.last_sc, set(&["Sandy"]));

    let (_, steps) = timed_run("passages/p31.json");
    let sentences: Vec<&Step> = steps.iter().filter(|s| s.sentence_id().is_some()).collect();
    assert_eq!(sentences.len(), 9);
    for s in sentences {
        assert!(
            matches!(s.interpretation(), Some(Interpretation::Objective(_))),
            "{:?}",
            s.sentence_id()
        );
        assert_eq!(s.before.situation, PresubjectiveNonactive);
    }

    let (_, steps) = timed_run("passages/p19.json");
    assert_eq!(interpretation_of(&steps, "19.1"), subj(&[]));
    assert_eq!(sc_failures(&steps), ["19.1"]);
}

fn with_engine_gold(mut doc: Document) -> Document {
    let steps = track_document(&doc, POLICY);
    for (item, step) in doc.items.iter_mut().zip(&steps) {
        if let InputItem::Sentence(s) = item {
            s.gold = step.interpretation().cloned();
        }
    }
    doc
}

fn evaluator() {
    let r = evaluate(&fixture("mini_corpus.json"), POLICY).unwrap();
    let ids = |rs: &[povtrack::eval::ErrorRecord]| rs.iter().map(|e| e.sentence.clone()).collect::<Vec<_>>();
    assert_eq!(r.sentences, 43);
    assert_eq!(r.simple_quoted_speech, 14);
    assert_eq!(ids(&r.primary_errors), ["19.1", "18.2", "30.1"]);
    assert_eq!(ids(&r.secondary_errors), ["30.5", "30.6"]);

    let sub = r.interpretation_row(SUBJECTIVE_ROW).unwrap();
    assert_eq!((sub.instances, sub.primary_errors), (18, 3));
    assert_eq!((sub.count(WRONG_OBJECTIVE), sub.count(WRONG_CHARACTER)), (2, 1));
    let ob = r.interpretation_row(OBJECTIVE_ROW).unwrap();
    assert_eq!((ob.instances, ob.primary_errors), (25, 0));
    let nq = r.interpretation_row(NON_QUOTED_ROW).unwrap();
    assert_eq!((nq.instances, nq.primary_errors), (11, 0));

    let counts: Vec<(usize, usize)> = ["continuation", "resumption", "initiation"]
        .iter()
        .map(|op| {
            let row = r.operation_row(op).unwrap();
            (row.instances, row.primary_errors)
        })
        .collect();
    assert_eq!(counts, [(8, 0), (2, 0), (8, 3)]);
    let init = r.operation_row("initiation").unwrap();
    assert_eq!((init.count("initiation"), init.count(WRONG_OBJECTIVE)), (1, 2));

    for name in [
        "mini_corpus.json",
        "demo1.json",
        "demo3.json",
        "flipped_gold.json",
        "lynette.json",
    ] {
        let r = evaluate(&with_engine_gold(fixture(name)), POLICY).unwrap();
        assert_eq!((r.primary_errors.len(), r.secondary_errors.len()), (0, 0), "{name}");
    }
}

fn significance() {
    let doc = fixture("lynette.json");
    let default = evaluate(&doc, SignificancePolicy::AnyPreviousSc).unwrap();
    let strict = evaluate(&doc, SignificancePolicy::MinLength2).unwrap();
    let ids: Vec<&str> = default.primary_errors.iter().map(|e| e.sentence.as_str()).collect();
    assert_eq!(ids, ["l2", "l3"]);
    assert_eq!(strict.primary_errors.len(), 0);
    assert!(strict.primary_errors.len() < default.primary_errors.len());
}

fn desk_scale() {
    // The novels behind the published error rates are not available, so
    // only the runtime target is checked here; criteria 1-8 stand in.
    let start = Instant::now();
    for name in [
        "demo1.json",
        "demo2.json",
        "demo3.json",
        "mini_corpus.json",
        "lynette.json",
        "flipped_gold.json",
    ] {
        let doc = fixture(name);
        for policy in SignificancePolicy::ALL {
            evaluate(&doc, policy).unwrap();
        }
    }
    assert!(start.elapsed() < Duration::from_secs(10));
}

fn main() {
    let criteria: [(&str, fn()); 9] = [
        ("demo 1 replay", demo1),
        ("demo 2 replay", demo2),
        ("demo 3 replay", demo3),
        ("transition tables", transitions),
        ("expectation predicates", predicates),
        ("passage outcomes", passages),
        ("evaluator oracle", evaluator),
        ("significance-policy differential", significance),
        ("desk-scale runtime (novel-scale rates not reproducible)", desk_scale),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.into_iter().enumerate() {
        let ok = catch_unwind(AssertUnwindSafe(check)).is_ok();
        if !ok {
            failed += 1;
        }
        println!("criterion {}: {} {name}", n + 1, if ok { "PASS" } else { "FAIL" });
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
