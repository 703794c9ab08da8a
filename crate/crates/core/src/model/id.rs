use sha2::{Digest, Sha256};

use super::RefactoringCase;

/// Content-derived identifier: the first 40 hex digits of SHA-256 over
/// repository, commit, tool, type, description and the before/after
/// element names. Each part is written as `<byte length>:<bytes>`, with
/// absent names as empty parts.
pub fn case_id(case: &RefactoringCase) -> String {
    let parts = [
        case.repository.as_str(),
        case.commit.sha1.as_str(),
        case.meta.tool.as_str(),
        case.refactoring_type.as_str(),
        case.description.as_str(),
        case.before.as_ref().map_or("", |f| f.name.as_str()),
        case.after.as_ref().map_or("", |f| f.name.as_str()),
    ];
    let mut hasher = Sha256::new();
    for part in parts {
        hasher.update(part.len().to_string().as_bytes());
        hasher.update(b":");
        hasher.update(part.as_bytes());
    }
    let mut hex = hex::encode(hasher.finalize());
    hex.truncate(40);
    hex
}
