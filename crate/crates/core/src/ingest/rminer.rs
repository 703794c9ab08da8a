use serde_json::Value;

use super::{
    CodeElement, DetectorError, DetectorRecord, ElementRole, ParsedRecords, Rejection,
    REFACTORING_MINER,
};

/// Parses a RefactoringMiner JSON export:
/// `{"commits":[{"sha1":…, "refactorings":[{"type", "description",
/// "leftSideLocations":[…], "rightSideLocations":[…]}]}]}`.
///
/// Declarations on the left side become source elements; declarations on
/// the right side become targets unless they describe the source method
/// after the change. Everything else is context.
pub fn parse_rminer_output(text: &str) -> Result<ParsedRecords, DetectorError> {
    let root: Value = serde_json::from_str(text)?;
    let commits = root
        .get("commits")
        .and_then(Value::as_array)
        .ok_or_else(|| DetectorError::Shape("expected a top-level \"commits\" array".into()))?;

    let mut out = ParsedRecords::default();
    for (ci, commit) in commits.iter().enumerate() {
        let sha1 = commit
            .get("sha1")
            .and_then(Value::as_str)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| DetectorError::MissingSha1(format!("commits[{ci}]")))?;
        let Some(refactorings) = commit.get("refactorings").and_then(Value::as_array) else {
            continue;
        };
        for (ri, entry) in refactorings.iter().enumerate() {
            let locator = format!("commits[{ci}].refactorings[{ri}]");
            let Some(kind) = entry.get("type").and_then(Value::as_str).filter(|s| !s.is_empty())
            else {
                out.rejected.push(Rejection {
                    locator,
                    reason: "refactoring entry has no type".into(),
                });
                continue;
            };
            let description = entry
                .get("description")
                .and_then(Value::as_str)
                .unwrap_or_default()
                .to_owned();
            let left = locations(entry, "leftSideLocations", Side::Left);
            let right = locations(entry, "rightSideLocations", Side::Right);
            if left.is_empty() && right.is_empty() && description.is_empty() {
                out.rejected.push(Rejection {
                    locator,
                    reason: "refactoring entry has neither locations nor description".into(),
                });
                continue;
            }
            out.records.push(DetectorRecord {
                tool: REFACTORING_MINER.to_owned(),
                commit_sha1: sha1.to_owned(),
                refactoring_type: kind.to_owned(),
                description,
                left_elements: left,
                right_elements: right,
                raw: entry.clone(),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

fn locations(entry: &Value, key: &str, side: Side) -> Vec<CodeElement> {
    let Some(items) = entry.get(key).and_then(Value::as_array) else {
        return Vec::new();
    };
    items
        .iter()
        .map(|loc| {
            let str_field = |k: &str| loc.get(k).and_then(Value::as_str).unwrap_or_default();
            let element_type = str_field("codeElementType");
            let detail = str_field("description");
            let code = str_field("codeElement");
            let declaration = element_type.ends_with("_DECLARATION");
            let role = match side {
                Side::Left if declaration => ElementRole::Source,
                Side::Right if declaration && !detail.starts_with("source ") => ElementRole::Target,
                _ => ElementRole::Context,
            };
            let name = if element_type == "METHOD_DECLARATION" {
                simplify_method_signature(code)
            } else {
                code.to_owned()
            };
            CodeElement {
                role,
                name,
                file: str_field("filePath").to_owned(),
                begin_line: loc.get("startLine").and_then(Value::as_u64),
                end_line: loc.get("endLine").and_then(Value::as_u64),
            }
        })
        .collect()
}

/// Rewrites `public loaderFor(publicType Class<T>) : Loader<T>` as
/// `loaderFor(Class)`: modifiers, parameter names, generic arguments and
/// the return type are dropped.
pub fn simplify_method_signature(signature: &str) -> String {
    let Some(open) = signature.find('(') else {
        return signature.trim().to_owned();
    };
    let head = &signature[..open];
    let name = head.split_whitespace().last().unwrap_or_default();
    let Some(close) = matching_paren(signature, open) else {
        return signature.trim().to_owned();
    };
    let params = split_top_level(&signature[open + 1..close])
        .into_iter()
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let p = p.trim();
            let ty = match p.split_once(' ') {
                Some((_, ty)) => ty.trim(),
                None => p,
            };
            strip_generics(ty)
        })
        .collect::<Vec<_>>();
    format!("{name}({})", params.join(", "))
}

fn matching_paren(text: &str, open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in text[open..].char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + i);
                }
            }
            _ => {}
        }
    }
    None
}

fn split_top_level(params: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in params.char_indices() {
        match c {
            '<' => depth += 1,
            '>' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&params[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&params[start..]);
    out
}

fn strip_generics(ty: &str) -> String {
    let mut out = String::with_capacity(ty.len());
    let mut depth = 0i32;
    for c in ty.chars() {
        match c {
            '<' => depth += 1,
            '>' => depth -= 1,
            _ if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out.trim().to_owned()
}
