//! Scoring the tracker against gold labels.
//!
//! Each sentence is interpreted twice: under its *actual* context, folded
//! from the gold labels of everything before it, and under the context the
//! tracker computed itself. A wrong answer under the actual context is a
//! primary error; a right answer there but a wrong one under the computed
//! context is a secondary error, caused only by earlier mistakes.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::corpus::Document;
use crate::engine::{track, Frame, SignificancePolicy, SubjectiveHistory};
use crate::error::Error;
use crate::model::{
    Break, CharacterSet, Context, FeatureSet, InputItem, Interpretation, Sentence, SoaType, TextSituation,
};
use crate::situation::{new_context, new_context_after_break};

/// What a sentence does to the point of view, relative to the text before it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PovOperation {
    Continuation,
    Resumption,
    Initiation,
    Objective,
}

impl PovOperation {
    pub const ALL: [PovOperation; 4] = [
        PovOperation::Continuation,
        PovOperation::Resumption,
        PovOperation::Initiation,
        PovOperation::Objective,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PovOperation::Continuation => "continuation",
            PovOperation::Resumption => "resumption",
            PovOperation::Initiation => "initiation",
            PovOperation::Objective => "objective",
        }
    }
}

impl fmt::Display for PovOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Gold-labelled history of the current scene, as needed to classify the
/// next sentence's operation.
#[derive(Clone, Debug, Default)]
struct SceneHistory {
    previous: Option<Interpretation>,
    last_sc: Option<CharacterSet>,
    objective_since: bool,
}

impl SceneHistory {
    /// A document that starts mid-text is treated as if its preamble had
    /// been produced by earlier sentences of the same scene.
    fn from_preamble(context: Option<&Context>) -> Self {
        use TextSituation::*;
        let Some(c) = context else {
            return Self::default();
        };
        let subjective = Interpretation::Subjective(c.last_sc.clone());
        match c.situation {
            PresubjectiveNonactive | PresubjectiveActive => Self::default(),
            ContinuingSubjective | BrokenSubjective => SceneHistory {
                previous: Some(subjective),
                last_sc: Some(c.last_sc.clone()),
                objective_since: false,
            },
            InterruptedSubjective | PostsubjectiveNonactive | PostsubjectiveActive => SceneHistory {
                previous: Some(Interpretation::Objective(CharacterSet::new())),
                last_sc: Some(c.last_sc.clone()),
                objective_since: true,
            },
        }
    }

    fn classify(&self, interpretation: &Interpretation) -> PovOperation {
        let y = match interpretation {
            Interpretation::Objective(_) => return PovOperation::Objective,
            Interpretation::Subjective(y) if y.is_empty() => return PovOperation::Initiation,
            Interpretation::Subjective(y) => y,
        };
        if matches!(&self.previous, Some(Interpretation::Subjective(p)) if p == y) {
            PovOperation::Continuation
        } else if self.objective_since && self.last_sc.as_ref() == Some(y) {
            PovOperation::Resumption
        } else {
            PovOperation::Initiation
        }
    }

    fn advance(&mut self, gold: &Interpretation) {
        match gold {
            Interpretation::Subjective(sc) => {
                self.last_sc = Some(sc.clone());
                self.objective_since = false;
            }
            Interpretation::Objective(_) => self.objective_since = true,
        }
        self.previous = Some(gold.clone());
    }
}

fn gold_of(sentence: &Sentence) -> Result<&Interpretation, Error> {
    sentence
        .gold
        .as_ref()
        .ok_or_else(|| Error::MissingGold(sentence.id.clone()))
}

/// Operation performed by each sentence according to its gold label, in
/// document order (breaks are skipped).
pub fn operations(doc: &Document) -> Result<Vec<PovOperation>, Error> {
    let mut scene = SceneHistory::from_preamble(doc.preamble.as_ref());
    let mut ops = Vec::new();
    for item in &doc.items {
        match item {
            InputItem::Break(Break::Scene) => scene = SceneHistory::default(),
            InputItem::Break(Break::Paragraph) => {}
            InputItem::Sentence(s) => {
                let gold = gold_of(s)?;
                ops.push(scene.classify(gold));
                scene.advance(gold);
            }
        }
    }
    Ok(ops)
}

/// The gold operation of the sentence at item position `index`, or `None`
/// if that item is a break.
pub fn classify_operation(doc: &Document, index: usize) -> Result<Option<PovOperation>, Error> {
    if !matches!(doc.items.get(index), Some(InputItem::Sentence(_))) {
        return Ok(None);
    }
    let position = doc.items[..index].iter().filter(|i| i.as_sentence().is_some()).count();
    Ok(Some(operations(doc)?[position]))
}

/// The actual context before each item, folded from gold labels.
pub fn actual_contexts(doc: &Document, policy: SignificancePolicy) -> Result<Vec<Context>, Error> {
    Ok(actual_fold(doc, policy)?.into_iter().map(|a| a.context).collect())
}

struct Actual {
    context: Context,
    /// Interpretation under the actual context, for sentences.
    got: Option<Interpretation>,
}

fn actual_fold(doc: &Document, policy: SignificancePolicy) -> Result<Vec<Actual>, Error> {
    let start = doc.start();
    let (mut context, mut history): (Context, SubjectiveHistory) = (start.context, start.history);
    let mut out = Vec::with_capacity(doc.items.len());
    for item in &doc.items {
        let before = context.clone();
        let got = match item {
            InputItem::Break(brk) => {
                context = new_context_after_break(*brk, &context);
                history.record_break();
                None
            }
            InputItem::Sentence(s) => {
                let gold = gold_of(s)?;
                let frame = Frame::new(&before, &history, policy);
                let got = frame.pov(&s.features);
                let traits = frame.traits(&s.features);
                context = new_context(gold, &before);
                history.record_sentence(gold, traits);
                Some(got)
            }
        };
        out.push(Actual { context: before, got });
    }
    Ok(out)
}

/// Quoted speech with nothing around the quotation that could bear on point
/// of view: no potential subjective elements and no subordinated clause
/// about a private state or private-state action.
pub fn is_simple_quoted_speech(fs: &FeatureSet) -> bool {
    let main = fs.main_clause();
    fs.quoted_speech()
        && fs.pses().is_empty()
        && fs.clauses().iter().filter(|c| c.id != main.id).all(|c| {
            !matches!(
                fs.soa_of_clause(c).kind,
                SoaType::PrivateState | SoaType::PrivateStateAction
            )
        })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ErrorRecord {
    pub sentence: String,
    pub gold: Interpretation,
    pub got: Interpretation,
    pub operation: PovOperation,
}

/// Count of wrong answers of one kind within a row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bucket {
    pub label: String,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Row {
    pub label: String,
    pub instances: usize,
    pub primary_errors: usize,
    /// Non-empty buckets only, in a fixed order.
    pub incorrect: Vec<Bucket>,
}

impl Row {
    fn new(label: &str) -> Self {
        Row {
            label: label.to_string(),
            instances: 0,
            primary_errors: 0,
            incorrect: Vec::new(),
        }
    }

    pub fn count(&self, label: &str) -> usize {
        self.incorrect.iter().find(|b| b.label == label).map_or(0, |b| b.count)
    }

    fn add(&mut self, label: &str) {
        match self.incorrect.iter_mut().find(|b| b.label == label) {
            Some(b) => b.count += 1,
            None => self.incorrect.push(Bucket {
                label: label.to_string(),
                count: 1,
            }),
        }
    }

    fn sort_by(&mut self, order: &[&str]) {
        self.incorrect
            .sort_by_key(|b| order.iter().position(|l| *l == b.label).unwrap_or(order.len()));
    }
}

pub const SUBJECTIVE_ROW: &str = "subjective";
pub const OBJECTIVE_ROW: &str = "objective";
pub const NON_QUOTED_ROW: &str = "objective, other than simple quoted speech";

pub const WRONG_OBJECTIVE: &str = "objective";
pub const WRONG_SUBJECTIVE: &str = "subjective";
pub const WRONG_CHARACTER: &str = "subjective, other character";
pub const WRONG_ACTIVE: &str = "objective, other active character";

const INTERPRETATION_ORDER: &[&str] = &[WRONG_OBJECTIVE, WRONG_CHARACTER, WRONG_SUBJECTIVE, WRONG_ACTIVE];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EvalReport {
    pub title: String,
    pub policy: SignificancePolicy,
    pub sentences: usize,
    pub simple_quoted_speech: usize,
    pub primary_errors: Vec<ErrorRecord>,
    pub secondary_errors: Vec<ErrorRecord>,
    /// Subjective, objective and objective-other-than-simple-quoted-speech rows.
    pub by_interpretation: Vec<Row>,
    /// One row per operation plus objective-other-than-simple-quoted-speech.
    pub by_operation: Vec<Row>,
}

impl EvalReport {
    pub fn interpretation_row(&self, label: &str) -> Option<&Row> {
        self.by_interpretation.iter().find(|r| r.label == label)
    }

    pub fn operation_row(&self, label: &str) -> Option<&Row> {
        self.by_operation.iter().find(|r| r.label == label)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

/// Scores `doc` against its gold labels. Every sentence must be labelled.
pub fn evaluate(doc: &Document, policy: SignificancePolicy) -> Result<EvalReport, Error> {
    let actual = actual_fold(doc, policy)?;
    let gold_ops = operations(doc)?;
    let computed = track(&doc.items, doc.start(), policy);

    let mut by_interpretation = vec![
        Row::new(SUBJECTIVE_ROW),
        Row::new(OBJECTIVE_ROW),
        Row::new(NON_QUOTED_ROW),
    ];
    let mut by_operation: Vec<Row> = PovOperation::ALL
        .iter()
        .map(|op| Row::new(op.name()))
        .chain([Row::new(NON_QUOTED_ROW)])
        .collect();
    let mut report = EvalReport {
        title: doc.title.clone(),
        policy,
        sentences: 0,
        simple_quoted_speech: 0,
        primary_errors: Vec::new(),
        secondary_errors: Vec::new(),
        by_interpretation: Vec::new(),
        by_operation: Vec::new(),
    };

    let mut scene = SceneHistory::from_preamble(doc.preamble.as_ref());
    let mut ops = gold_ops.into_iter();
    for ((item, actual), step) in doc.items.iter().zip(&actual).zip(&computed) {
        let sentence = match item {
            InputItem::Break(Break::Scene) => {
                scene = SceneHistory::default();
                continue;
            }
            InputItem::Break(Break::Paragraph) => continue,
            InputItem::Sentence(s) => s,
        };
        let gold = gold_of(sentence)?;
        let op = ops.next().expect("one operation per sentence");
        let got = actual.got.as_ref().expect("sentences have an actual reading");
        let free = step.interpretation().expect("sentences have a computed reading");
        let simple = is_simple_quoted_speech(&sentence.features);

        report.sentences += 1;
        report.simple_quoted_speech += usize::from(simple);

        let interp_rows: &[usize] = match (gold.is_subjective(), simple) {
            (true, _) => &[0],
            (false, true) => &[1],
            (false, false) => &[1, 2],
        };
        let op_rows: &[usize] = match (op, simple) {
            (PovOperation::Objective, false) => &[3, 4],
            (PovOperation::Objective, true) => &[3],
            (PovOperation::Continuation, _) => &[0],
            (PovOperation::Resumption, _) => &[1],
            (PovOperation::Initiation, _) => &[2],
        };
        for &r in interp_rows {
            by_interpretation[r].instances += 1;
        }
        for &r in op_rows {
            by_operation[r].instances += 1;
        }

        if got != gold {
            let wrong = match (gold, got) {
                (Interpretation::Subjective(_), Interpretation::Objective(_)) => WRONG_OBJECTIVE,
                (Interpretation::Subjective(_), Interpretation::Subjective(_)) => WRONG_CHARACTER,
                (Interpretation::Objective(_), Interpretation::Subjective(_)) => WRONG_SUBJECTIVE,
                (Interpretation::Objective(_), Interpretation::Objective(_)) => WRONG_ACTIVE,
            };
            let got_op = match (gold, got) {
                (Interpretation::Objective(_), Interpretation::Objective(_)) => WRONG_ACTIVE,
                _ => scene.classify(got).name(),
            };
            for &r in interp_rows {
                by_interpretation[r].primary_errors += 1;
                by_interpretation[r].add(wrong);
            }
            for &r in op_rows {
                by_operation[r].primary_errors += 1;
                by_operation[r].add(got_op);
            }
            report.primary_errors.push(ErrorRecord {
                sentence: sentence.id.clone(),
                gold: gold.clone(),
                got: got.clone(),
                operation: op,
            });
        } else if free != gold {
            report.secondary_errors.push(ErrorRecord {
                sentence: sentence.id.clone(),
                gold: gold.clone(),
                got: free.clone(),
                operation: op,
            });
        }
        scene.advance(gold);
    }

    let op_order: Vec<&str> = PovOperation::ALL
        .iter()
        .map(|op| op.name())
        .chain([WRONG_ACTIVE])
        .collect();
    for row in &mut by_interpretation {
        row.sort_by(INTERPRETATION_ORDER);
    }
    for row in &mut by_operation {
        row.sort_by(&op_order);
    }
    report.by_interpretation = by_interpretation;
    report.by_operation = by_operation;
    Ok(report)
}

fn ratio(n: usize, d: usize) -> String {
    if d == 0 {
        format!("{n}/{d}")
    } else {
        format!("{n}/{d} ({:.0}%)", 100.0 * n as f64 / d as f64)
    }
}

fn table(out: &mut String, heading: &str, rows: &[Row], total: usize) {
    let cells: Vec<[String; 4]> = rows
        .iter()
        .map(|r| {
            let incorrect = if r.incorrect.is_empty() {
                "-".to_string()
            } else {
                r.incorrect
                    .iter()
                    .map(|b| {
                        let plural = b.count != 1 && PovOperation::ALL[..3].iter().any(|op| op.name() == b.label);
                        format!("{} {}{}", b.count, b.label, if plural { "s" } else { "" })
                    })
                    .collect::<Vec<_>>()
                    .join("; ")
            };
            [
                r.label.clone(),
                ratio(r.instances, total),
                ratio(r.primary_errors, r.instances),
                incorrect,
            ]
        })
        .collect();
    let header = [
        heading,
        "Actual Instances",
        "Primary Errors",
        "Incorrect Interpretations",
    ];
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |out: &mut String, cols: [&str; 4]| {
        let _ = writeln!(
            out,
            "{:<w0$}  {:<w1$}  {:<w2$}  {}",
            cols[0],
            cols[1],
            cols[2],
            cols[3],
            w0 = widths[0],
            w1 = widths[1],
            w2 = widths[2]
        );
    };
    line(out, header);
    for row in &cells {
        line(out, [&row[0], &row[1], &row[2], &row[3]]);
    }
}

fn records(out: &mut String, heading: &str, records: &[ErrorRecord]) {
    if records.is_empty() {
        return;
    }
    let _ = writeln!(out, "\n{heading}");
    for r in records {
        let _ = writeln!(
            out,
            "  {}  ({})  expected {}  got {}",
            r.sentence, r.operation, r.gold, r.got
        );
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.sentences;
        let mut out = String::new();
        let _ = writeln!(out, "{} (policy {})", self.title, self.policy);
        let _ = writeln!(out, "Sentential items: {n}");
        let _ = writeln!(out, "Primary errors: {}", ratio(self.primary_errors.len(), n));
        let _ = writeln!(out, "Secondary errors: {}", ratio(self.secondary_errors.len(), n));
        let _ = writeln!(out, "Simple quoted speech: {}", ratio(self.simple_quoted_speech, n));
        out.push('\n');
        table(&mut out, "Interpretation", &self.by_interpretation, n);
        out.push('\n');
        table(&mut out, "Point-of-View Operation", &self.by_operation, n);
        records(&mut out, "Primary errors", &self.primary_errors);
        records(&mut out, "Secondary errors", &self.secondary_errors);
        f.write_str(&out)
    }
}
