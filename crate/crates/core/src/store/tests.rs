use super::*;
use crate::model::case_id;
use crate::model::tests::gradle_case;
use crate::query::parse_query;

fn variant(n: usize, kind: &str, date: &str) -> RefactoringCase {
    let mut case = gradle_case();
    case.refactoring_type = kind.to_owned();
    case.description = format!("{kind} #{n}");
    case.commit.date = date.to_owned();
    case.extract_method = None;
    if kind == "Extract Method" {
        case.extract_method = gradle_case().extract_method;
    }
    case.id = case_id(&case);
    case
}

fn q(text: &str) -> QueryAst {
    parse_query(text).unwrap()
}

#[test]
fn round_trip_by_id() {
    let store = Store::open_in_memory();
    let case = gradle_case();
    let outcome = store.put_cases(std::slice::from_ref(&case)).unwrap();
    assert_eq!(outcome, PutOutcome { stored: 1, skipped_duplicate: 0 });
    assert_eq!(store.get_case(&case.id), Some(case.clone()));
    assert_eq!(store.get_document(&case.id), Some(to_json(&case)));
    assert_eq!(store.get_case("nope"), None);
}

#[test]
fn second_insert_of_a_batch_stores_nothing() {
    let store = Store::open_in_memory();
    let batch = vec![variant(1, "Extract Method", "2020-01-01T00:00:00Z"), variant(2, "Rename Method", "2021-01-01T00:00:00Z")];
    assert_eq!(store.put_cases(&batch).unwrap().stored, 2);
    let again = store.put_cases(&batch).unwrap();
    assert_eq!(again, PutOutcome { stored: 0, skipped_duplicate: 2 });
    assert_eq!(store.len(), 2);
}

#[test]
fn invalid_batches_are_refused_whole() {
    let store = Store::open_in_memory();
    let mut bad = variant(2, "Rename Method", "2021-01-01T00:00:00Z");
    bad.commit.sha1 = "xyz".into();
    let err = store
        .put_cases(&[variant(1, "Extract Method", "2020-01-01T00:00:00Z"), bad])
        .unwrap_err();
    assert!(matches!(err, StoreError::Invalid { .. }));
    assert!(store.is_empty());
}

#[test]
fn plans_follow_index_priority() {
    let store = Store::open_in_memory();
    let show = |text: &str| store.plan(Some(&q(text))).access.to_string();
    assert_eq!(show(r#"type = "Extract Method""#), r#"IndexEq(type, "Extract Method")"#);
    assert_eq!(show("type ~ /^Rename/"), "FullScan");
    assert_eq!(
        show("commit.date >= 2022-01-01 & commit.date < 2023-01-01"),
        r#"IndexRange(commit.date, >= "2022-01-01", < "2023-01-01")"#
    );
    assert_eq!(
        show(r#"commit.date > 2020 & repository = "r" & type = "x""#),
        r#"IndexEq(type, "x")"#
    );
    assert_eq!(show(r#"type = "a" | repository = "b""#), "FullScan");
    assert_eq!(store.plan(None).access, AccessPath::FullScan);
}

#[test]
fn search_orders_newest_first_with_id_tie_break() {
    let store = Store::open_in_memory();
    let cases = vec![
        variant(1, "Extract Method", "2020-01-01T00:00:00Z"),
        variant(2, "Extract Method", "2022-01-01T00:00:00Z"),
        variant(3, "Rename Method", "2021-01-01T00:00:00Z"),
        variant(4, "Rename Method", "2021-01-01T00:00:00Z"),
    ];
    store.put_cases(&cases).unwrap();
    let page = store.search(None, &SearchOptions::default()).unwrap();
    assert_eq!(page.total, 4);
    let dates: Vec<_> = page.items.iter().map(|c| c.commit.date.as_str()).collect();
    assert_eq!(dates[0], "2022-01-01T00:00:00Z");
    assert_eq!(dates[3], "2020-01-01T00:00:00Z");
    assert!(page.items[1].id < page.items[2].id);

    let ast = q("extractMethod.sourceMethodLines >= 100");
    let page = store.search(Some(&ast), &SearchOptions::default()).unwrap();
    assert_eq!(page.total, 2);
}

#[test]
fn pages_concatenate_to_the_full_list() {
    let store = Store::open_in_memory();
    let cases: Vec<_> = (0..37)
        .map(|i| variant(i, if i % 3 == 0 { "Rename Method" } else { "Extract Method" }, &format!("20{:02}-01-01T00:00:00Z", 10 + i % 7)))
        .collect();
    store.put_cases(&cases).unwrap();
    let ast = q(r#"type = "Extract Method""#);
    let all = store.matching_ids(Some(&ast), &SortSpec::default(), false);
    for limit in [1, 5, 7, 200] {
        let mut got = Vec::new();
        let mut offset = 0;
        loop {
            let options = SearchOptions { offset, limit, ..SearchOptions::default() };
            let page = store.search(Some(&ast), &options).unwrap();
            assert_eq!(page.total, all.len());
            if page.items.is_empty() {
                break;
            }
            got.extend(page.items.into_iter().map(|c| c.id));
            offset += limit;
        }
        assert_eq!(got, all);
    }
    let over = SearchOptions { limit: 201, ..SearchOptions::default() };
    assert!(matches!(store.search(None, &over), Err(StoreError::LimitTooLarge(201))));
    let zero = SearchOptions { limit: 0, ..SearchOptions::default() };
    let page = store.search(Some(&ast), &zero).unwrap();
    assert!(page.items.is_empty() && page.total == all.len());
}

#[test]
fn empty_store_answers_with_zeros() {
    let store = Store::open_in_memory();
    let page = store.search(None, &SearchOptions::default()).unwrap();
    assert_eq!((page.total, page.items.len()), (0, 0));
    assert_eq!(store.stats(), StoreStats::default());
    for report in store.rebuild_indexes() {
        assert_eq!(report.stats.entries, 0);
    }
}

#[test]
fn stats_count_types_tools_and_commits() {
    let store = Store::open_in_memory();
    let mut cases: Vec<_> = (0..10)
        .map(|i| variant(i, if i < 4 { "Rename Method" } else { "Extract Method" }, "2020-01-01T00:00:00Z"))
        .collect();
    cases[0].meta.tool = "RefactoringMiner".into();
    cases[0].id = case_id(&cases[0]);
    store.put_cases(&cases).unwrap();
    let stats = store.stats();
    assert_eq!(stats.case_count, 10);
    assert_eq!(stats.counts_by_type.values().sum::<usize>(), 10);
    assert_eq!(stats.counts_by_type["Rename Method"], 4);
    assert_eq!(stats.counts_by_tool.keys().collect::<Vec<_>>(), ["RefDiff", "RefactoringMiner"]);
    assert_eq!((stats.commit_count, stats.repository_count), (1, 1));
}

#[test]
fn rebuild_keeps_counts_and_results() {
    let store = Store::open_in_memory();
    let cases: Vec<_> = (0..50).map(|i| variant(i, "Extract Method", "2020-01-01T00:00:00Z")).collect();
    store.put_cases(&cases).unwrap();
    let before = store.matching_ids(Some(&q(r#"type = "Extract Method""#)), &SortSpec::default(), false);
    for report in store.rebuild_indexes() {
        assert_eq!(report.stats.entries, 50, "{}", report.name);
    }
    let after = store.matching_ids(Some(&q(r#"type = "Extract Method""#)), &SortSpec::default(), false);
    assert_eq!(before, after);
}

#[test]
fn purge_removes_a_repository_durably() {
    let dir = tempfile::tempdir().unwrap();
    let keep = variant(1, "Extract Method", "2020-01-01T00:00:00Z");
    let mut gone = variant(2, "Extract Method", "2020-01-01T00:00:00Z");
    gone.repository = "https://github.com/other/repo".into();
    gone.id = case_id(&gone);
    {
        let store = Store::open(dir.path()).unwrap();
        store.put_cases(&[keep.clone(), gone.clone()]).unwrap();
        assert_eq!(store.purge_repository("https://github.com/other/repo").unwrap(), 1);
        assert_eq!(store.get_case(&gone.id), None);
    }
    let store = Store::open(dir.path()).unwrap();
    assert_eq!(store.len(), 1);
    assert_eq!(store.get_case(&gone.id), None);
    assert!(store.get_case(&keep.id).is_some());
    let page = store.search(Some(&q(r#"repository = "https://github.com/other/repo""#)), &SearchOptions::default()).unwrap();
    assert_eq!(page.total, 0);
}

#[test]
fn reopening_restores_documents_and_indexes() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<_> = (0..5).map(|i| variant(i, "Extract Method", "2020-01-01T00:00:00Z")).collect();
    Store::open(dir.path()).unwrap().put_cases(&cases).unwrap();
    let store = Store::open(dir.path()).unwrap();
    assert_eq!(store.len(), 5);
    let page = store.search(Some(&q(r#"type = "Extract Method""#)), &SearchOptions::default()).unwrap();
    assert_eq!(page.total, 5);
}

/// Cuts the log at every byte of the second batch's record and reopens:
/// the batch is either entirely present or entirely absent.
#[test]
fn batches_survive_crashes_whole_or_not_at_all() {
    let dir = tempfile::tempdir().unwrap();
    let first = vec![variant(0, "Extract Method", "2020-01-01T00:00:00Z")];
    let second = vec![
        variant(1, "Rename Method", "2021-01-01T00:00:00Z"),
        variant(2, "Rename Method", "2021-01-01T00:00:00Z"),
    ];
    let log = dir.path().join(LOG_FILE);
    let store = Store::open(dir.path()).unwrap();
    store.put_cases(&first).unwrap();
    let boundary = std::fs::metadata(&log).unwrap().len();
    store.put_cases(&second).unwrap();
    drop(store);
    let full = std::fs::read(&log).unwrap();

    for cut in boundary..=full.len() as u64 {
        let crash = tempfile::tempdir().unwrap();
        std::fs::write(crash.path().join(LOG_FILE), &full[..cut as usize]).unwrap();
        let store = Store::open(crash.path()).unwrap();
        let n = store.len();
        let expected = if cut == full.len() as u64 { 3 } else { 1 };
        assert_eq!(n, expected, "cut at byte {cut}");
        // The store keeps working after recovery.
        store.put_cases(&second).unwrap();
        assert_eq!(store.len(), 3);
        drop(store);
        assert_eq!(Store::open(crash.path()).unwrap().len(), 3);
    }
}

#[test]
fn export_then_import_is_lossless() {
    let source = Store::open_in_memory();
    let mut case = gradle_case();
    case.extra.insert("note".into(), serde_json::json!({"kept": [1, 2.5, "x"]}));
    source.put_cases(&[case, variant(1, "Rename Method", "2021-01-01T00:00:00Z")]).unwrap();
    let mut buf = Vec::new();
    assert_eq!(source.export_jsonl(&mut buf).unwrap(), 2);

    let target = Store::open_in_memory();
    let outcome = target.import_jsonl(&buf[..]).unwrap();
    assert_eq!(outcome.stored, 2);
    let mut again = Vec::new();
    target.export_jsonl(&mut again).unwrap();
    assert_eq!(buf, again);
}

#[test]
fn import_errors_name_the_line() {
    let store = Store::open_in_memory();
    let good = serde_json::to_string(&to_json(&gradle_case())).unwrap();
    let text = format!("{good}\n\n{{\"type\": 3}}\n");
    let err = store.import_jsonl(text.as_bytes()).unwrap_err();
    assert!(matches!(err, StoreError::Import { line: 3, .. }), "{err}");
    assert!(store.is_empty());
}
