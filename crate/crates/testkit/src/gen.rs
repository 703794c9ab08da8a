//! Seeded generators for case-shaped documents and query text.
//!
//! Documents look like stored refactoring cases with a few extra,
//! loosely typed fields (arrays, nulls, numbers written as strings) so
//! that queries hit every comparison rule. Queries are produced as text in
//! varied spellings: extra parentheses, missing spaces, bare and quoted
//! words.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

pub const TYPES: [&str; 12] = [
    "Extract Method",
    "Rename Method",
    "Move Method",
    "Inline Method",
    "Extract And Move Method",
    "Rename Class",
    "Move Class",
    "Pull Up Method",
    "Push Down Method",
    "Extract Superclass",
    "Extract Interface",
    "Change Method Signature",
];

pub const REPOSITORIES: [&str; 4] = [
    "https://github.com/gradle/gradle",
    "https://github.com/apache/commons-lang",
    "https://gitlab.com/acme/widgets",
    "https://github.com/square/okhttp",
];

const TOOLS: [&str; 2] = ["RefDiff", "RefactoringMiner"];
const VERBS: [&str; 8] = ["get", "set", "load", "retrieve", "compute", "build", "is", "fetch"];
const NOUNS: [&str; 8] = ["Loader", "Name", "Value", "Config", "Class", "Item", "Path", "Cache"];
const WORDS: [&str; 10] = [
    "Polish", "extract", "helper", "Fix", "rename", "cleanup", "Refactor", "tests", "API", "merge",
];
const TAGS: [&str; 6] = ["core", "api", "x", "y", "7", "07"];

fn pick<'a, R: Rng>(rng: &mut R, items: &[&'a str]) -> &'a str {
    items.choose(rng).expect("non-empty")
}

fn method_name<R: Rng>(rng: &mut R) -> String {
    format!("{}{}(Class)", pick(rng, &VERBS), pick(rng, &NOUNS))
}

fn date<R: Rng>(rng: &mut R) -> String {
    format!(
        "{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z",
        rng.gen_range(2013..=2023),
        rng.gen_range(1..=12),
        rng.gen_range(1..=28),
        rng.gen_range(0..24),
        rng.gen_range(0..60),
        rng.gen_range(0..60)
    )
}

fn fragment<R: Rng>(rng: &mut R, name: String) -> Value {
    let begin: u64 = rng.gen_range(1..400);
    let lines: u64 = rng.gen_range(1..250);
    json!({
        "name": name,
        "location": {
            "file": format!("src/main/java/{}.java", pick(rng, &NOUNS)),
            "lines": lines,
            "begin": begin,
            "end": begin + lines - 1,
        }
    })
}

fn loose_value<R: Rng>(rng: &mut R) -> Option<Value> {
    Some(match rng.gen_range(0..9) {
        0 => return None,
        1 => Value::Null,
        2 => json!(rng.gen_bool(0.5)),
        3 => json!(rng.gen_range(-5..300)),
        4 => json!(rng.gen_range(-50..50) as f64 / 4.0),
        5 => json!(pick(rng, &["7", "07", "1.5", "-2", "abc"])),
        6 => json!([rng.gen_range(0..10), pick(rng, &TAGS)]),
        7 => json!([]),
        _ => json!({"nested": rng.gen_range(0..10)}),
    })
}

/// One case-shaped document without an `id`.
pub fn case_doc<R: Rng>(rng: &mut R) -> Value {
    let kind = pick(rng, &TYPES);
    let tool = pick(rng, &TOOLS);
    let sha1: String = (0..40)
        .map(|_| char::from_digit(rng.gen_range(0..16), 16).unwrap())
        .collect();
    let before_name = method_name(rng);
    let after_name = method_name(rng);
    let mut doc = Map::new();
    doc.insert("type".into(), json!(kind));
    doc.insert(
        "description".into(),
        json!(format!("{kind} {after_name} from {before_name}")),
    );
    doc.insert("repository".into(), json!(pick(rng, &REPOSITORIES)));
    let before = fragment(rng, before_name.clone());
    let after = fragment(rng, after_name.clone());
    if rng.gen_bool(0.9) {
        doc.insert("before".into(), before.clone());
    }
    if rng.gen_bool(0.9) {
        doc.insert("after".into(), after.clone());
    }
    let message = format!(
        "{} {} {}",
        pick(rng, &WORDS),
        pick(rng, &WORDS),
        pick(rng, &NOUNS)
    );
    doc.insert(
        "commit".into(),
        json!({
            "sha1": sha1,
            "date": date(rng),
            "message": message,
            "authorName": format!("Dev {}", rng.gen_range(0..20)),
            "size": {
                "files": {"changed": rng.gen_range(0..40)},
                "lines": {"inserted": rng.gen_range(0..900), "deleted": rng.gen_range(0..900)}
            },
            "refactorings": {"total": rng.gen_range(1..30)}
        }),
    );
    if kind.starts_with("Extract") && kind.ends_with("Method") && doc.contains_key("after") {
        doc.insert(
            "extractMethod".into(),
            json!({
                "sourceMethodsCount": rng.gen_range(1..4),
                "sourceMethodLines": before["location"]["lines"],
                "extractedLines": after["location"]["lines"],
            }),
        );
    }
    if kind.starts_with("Rename") {
        let simple = |n: &str| n.split('(').next().unwrap().to_owned();
        doc.insert(
            "rename".into(),
            json!({"from": simple(&before_name), "to": simple(&after_name)}),
        );
    }
    doc.insert("meta".into(), json!({"tool": tool}));

    let tag_count = rng.gen_range(0..4);
    let tags: Vec<&str> = (0..tag_count).map(|_| pick(rng, &TAGS)).collect();
    if rng.gen_bool(0.8) {
        doc.insert("tags".into(), json!(tags));
    }
    if let Some(v) = loose_value(rng) {
        doc.insert("score".into(), v);
    }
    if rng.gen_bool(0.6) {
        let items: Vec<Value> = (0..rng.gen_range(0..4))
            .map(|_| {
                if rng.gen_bool(0.2) {
                    json!({"other": 1})
                } else {
                    json!({"k": rng.gen_range(0..10), "s": pick(rng, &TAGS)})
                }
            })
            .collect();
        doc.insert("items".into(), json!(items));
    }
    Value::Object(doc)
}

pub fn case_docs(seed: u64, n: usize) -> Vec<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| case_doc(&mut rng)).collect()
}

const STR_PATHS: [&str; 12] = [
    "type",
    "repository",
    "commit.date",
    "commit.message",
    "rename.from",
    "rename.to",
    "meta.tool",
    "before.name",
    "tags",
    "items.s",
    "description",
    "score",
];
const NUM_PATHS: [&str; 10] = [
    "commit.size.files.changed",
    "commit.size.lines.inserted",
    "extractMethod.sourceMethodLines",
    "extractMethod.sourceMethodsCount",
    "extractMethod.extractedLines",
    "commit.refactorings.total",
    "items.k",
    "score",
    "before.location.lines",
    "score.nested",
];
const PATTERNS: [&str; 14] = [
    "^Extract",
    "Method$",
    "^get",
    "^retrieve",
    "Rename",
    "gradle",
    "[0-9]+",
    "^2019",
    "e.*o",
    "(Move|Pull) ",
    "^$",
    "load",
    "^7$",
    "Class\\)",
];
const NUMBERS: [&str; 14] = [
    "0", "1", "2", "7", "07", "10", "97", "100", "167", "-2", "+3", "1.5", "250", "0.25",
];

fn str_literal<R: Rng>(rng: &mut R, path: &str) -> String {
    match path {
        "type" => pick(rng, &TYPES).to_owned(),
        "repository" => pick(rng, &REPOSITORIES).to_owned(),
        "commit.date" => match rng.gen_range(0..3) {
            0 => format!("{}", rng.gen_range(2013..=2024)),
            1 => format!("{}-{:02}-01", rng.gen_range(2013..=2024), rng.gen_range(1..=12)),
            _ => date(rng),
        },
        "meta.tool" => pick(rng, &TOOLS).to_owned(),
        "rename.from" | "rename.to" => pick(rng, &VERBS).to_owned() + pick(rng, &NOUNS),
        "tags" | "items.s" | "score" => pick(rng, &TAGS).to_owned(),
        _ => pick(rng, &WORDS).to_owned(),
    }
}

/// Renders a string so the query language reads it back as that string.
fn render_str<R: Rng>(rng: &mut R, text: &str) -> String {
    let bare_ok = !text.is_empty()
        && text
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "-_:.".contains(c))
        && !text.bytes().all(|b| b.is_ascii_digit() || b == b'.' || b == b'-' || b == b'+');
    if bare_ok && rng.gen_bool(0.4) {
        text.to_owned()
    } else {
        let mut out = String::from("\"");
        for c in text.chars() {
            if c == '"' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('"');
        out
    }
}

fn comparison<R: Rng>(rng: &mut R) -> String {
    let numeric = rng.gen_bool(0.45);
    let path = if rng.gen_bool(0.05) {
        "no.such.key"
    } else if numeric {
        pick(rng, &NUM_PATHS)
    } else {
        pick(rng, &STR_PATHS)
    };
    let ops = ["=", "!=", "~", "<", "<=", ">", ">="];
    let op = pick(rng, &ops);
    let literal = if op == "~" {
        match rng.gen_range(0..4) {
            0 => {
                let text = str_literal(rng, path);
                render_str(rng, &text)
            }
            1 => {
                let text = pick(rng, &["a(b", "Method", "7", "get"]);
                render_str(rng, text)
            }
            _ => {
                let flag = if rng.gen_bool(0.3) { "i" } else { "" };
                format!("/{}/{flag}", pick(rng, &PATTERNS))
            }
        }
    } else if numeric != rng.gen_bool(0.1) {
        pick(rng, &NUMBERS).to_owned()
    } else {
        let text = str_literal(rng, path);
        render_str(rng, &text)
    };
    if rng.gen_bool(0.15) && !literal.starts_with('/') {
        format!("{path}{op}{literal}")
    } else {
        format!("{path} {op} {literal}")
    }
}

fn expression<R: Rng>(rng: &mut R, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.35) {
        let leaf = comparison(rng);
        return if rng.gen_bool(0.1) { format!("({leaf})") } else { leaf };
    }
    let left = expression(rng, depth - 1);
    let right = expression(rng, depth - 1);
    let op = if rng.gen_bool(0.5) { "&" } else { "|" };
    let joined = if rng.gen_bool(0.2) {
        format!("{left}{op}{right}")
    } else {
        format!("{left} {op} {right}")
    };
    if rng.gen_bool(0.4) {
        format!("({joined})")
    } else {
        joined
    }
}

/// One query, up to three levels of `&`/`|` deep.
pub fn query_text<R: Rng>(rng: &mut R) -> String {
    expression(rng, 3)
}

pub fn query_texts(seed: u64, n: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| query_text(&mut rng)).collect()
}

/// Strategy form of [`case_doc`], driven by a seed.
pub fn arb_case_doc() -> impl Strategy<Value = Value> {
    any::<u64>().prop_map(|seed| case_doc(&mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Strategy form of [`query_text`], driven by a seed.
pub fn arb_query_text() -> impl Strategy<Value = String> {
    any::<u64>().prop_map(|seed| query_text(&mut ChaCha8Rng::seed_from_u64(seed)))
}
