//! Reading and writing datasets.
//!
//! Tabular input comes in two schemas, selected by header names:
//!
//! * long form: `group_id,researcher_id,paper_id,citations`, one row per paper;
//! * summary form: `group_id,researcher_id,h_index,total_citations`, one row per
//!   member, `total_citations` may be empty or absent.
//!
//! The JSON document mirrors [`Dataset`] and rejects unknown keys.
//! Problems are collected into an [`IngestReport`] rather than aborting at the
//! first bad row.

use std::collections::{BTreeSet, HashMap};
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::model::{validate, Dataset, Group, ResearcherProfile};

pub const LONG_FORM_COLUMNS: [&str; 4] = ["group_id", "researcher_id", "paper_id", "citations"];
pub const SUMMARY_FORM_COLUMNS: [&str; 4] = ["group_id", "researcher_id", "h_index", "total_citations"];

/// Outcome of an ingest. `dataset` is present exactly when `errors` is empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestReport {
    pub dataset: Option<Dataset>,
    pub warnings: Vec<String>,
    pub errors: Vec<String>,
}

impl IngestReport {
    fn finish(dataset: Dataset, warnings: Vec<String>, mut errors: Vec<String>) -> Self {
        errors.extend(validate(&dataset).into_iter().map(|v| v.to_string()));
        let dataset = errors.is_empty().then_some(dataset);
        Self { dataset, warnings, errors }
    }

    fn failed(error: String) -> Self {
        Self {
            dataset: None,
            warnings: Vec::new(),
            errors: vec![error],
        }
    }

    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Which tabular schema a header row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TabularSchema {
    LongForm,
    SummaryForm,
}

/// Groups and members in first-appearance order.
struct Builder<M> {
    groups: Vec<(String, Vec<(String, M)>)>,
    group_index: HashMap<String, usize>,
    member_index: HashMap<(usize, String), usize>,
}

impl<M> Builder<M> {
    fn new() -> Self {
        Self {
            groups: Vec::new(),
            group_index: HashMap::new(),
            member_index: HashMap::new(),
        }
    }

    /// Returns the member slot and whether it already existed.
    fn slot(&mut self, group: &str, member: &str, init: impl FnOnce() -> M) -> (&mut M, bool) {
        let gi = *self.group_index.entry(group.to_string()).or_insert_with(|| {
            self.groups.push((group.to_string(), Vec::new()));
            self.groups.len() - 1
        });
        let members = &mut self.groups[gi].1;
        let mut existed = true;
        let mi = *self
            .member_index
            .entry((gi, member.to_string()))
            .or_insert_with(|| {
                existed = false;
                members.push((member.to_string(), init()));
                members.len() - 1
            });
        (&mut self.groups[gi].1[mi].1, existed)
    }
}

fn csv_reader<R: Read>(input: R, delimiter: u8) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input)
}

/// Header positions of `required` columns, plus `optional` ones when present.
fn locate(
    headers: &csv::StringRecord,
    required: &[&str],
    optional: &[&str],
) -> Result<HashMap<String, usize>, String> {
    let mut at = HashMap::new();
    for (i, name) in headers.iter().enumerate() {
        if at.insert(name.to_string(), i).is_some() {
            return Err(format!("header names column `{name}` twice"));
        }
    }
    let missing: Vec<&str> = required.iter().copied().filter(|c| !at.contains_key(*c)).collect();
    if !missing.is_empty() {
        return Err(format!("header is missing column(s): {}", missing.join(", ")));
    }
    let known: BTreeSet<&str> = required.iter().chain(optional).copied().collect();
    let unknown: Vec<&str> = headers.iter().filter(|h| !known.contains(h)).collect();
    if !unknown.is_empty() {
        return Err(format!("header has unknown column(s): {}", unknown.join(", ")));
    }
    Ok(at)
}

fn field<'r>(record: &'r csv::StringRecord, at: &HashMap<String, usize>, name: &str) -> &'r str {
    at.get(name).and_then(|&i| record.get(i)).unwrap_or("")
}

fn non_blank<'r>(value: &'r str, column: &str, row: u64) -> Result<&'r str, String> {
    if value.is_empty() {
        Err(format!("row {row}: blank {column}"))
    } else {
        Ok(value)
    }
}

fn count<T: std::str::FromStr>(value: &str, column: &str, row: u64) -> Result<T, String> {
    value
        .parse::<T>()
        .map_err(|_| format!("row {row}: {column} must be a non-negative integer, got `{value}`"))
}

/// Picks the schema from the header row.
pub fn detect_schema(header: &str, delimiter: u8) -> Option<TabularSchema> {
    let mut rdr = csv_reader(header.as_bytes(), delimiter);
    let h = rdr.headers().ok()?;
    let has = |c: &str| h.iter().any(|x| x == c);
    if has("paper_id") || has("citations") {
        Some(TabularSchema::LongForm)
    } else if has("h_index") {
        Some(TabularSchema::SummaryForm)
    } else {
        None
    }
}

/// Reads either tabular schema, chosen by header.
pub fn read_tabular<R: Read>(mut input: R, delimiter: u8) -> IngestReport {
    let mut text = String::new();
    if let Err(e) = input.read_to_string(&mut text) {
        return IngestReport::failed(format!("cannot read input: {e}"));
    }
    let header = text.lines().next().unwrap_or("");
    match detect_schema(header, delimiter) {
        Some(TabularSchema::LongForm) => read_long_form(text.as_bytes(), delimiter),
        Some(TabularSchema::SummaryForm) => read_summary_form(text.as_bytes(), delimiter),
        None if text.trim().is_empty() => IngestReport::failed("no rows".into()),
        None => IngestReport::failed(format!(
            "unrecognized header `{header}`; expected {} or {}",
            LONG_FORM_COLUMNS.join(","),
            SUMMARY_FORM_COLUMNS.join(",")
        )),
    }
}

/// One row per paper. Each member's h-index and total are computed from
/// their papers.
pub fn read_long_form<R: Read>(input: R, delimiter: u8) -> IngestReport {
    let mut rdr = csv_reader(input, delimiter);
    let at = match rdr.headers() {
        Ok(h) if h.is_empty() => return IngestReport::failed("no rows".into()),
        Ok(h) => match locate(h, &LONG_FORM_COLUMNS, &[]) {
            Ok(at) => at,
            Err(e) => return IngestReport::failed(e),
        },
        Err(e) => return IngestReport::failed(format!("cannot read header: {e}")),
    };

    let mut builder: Builder<(Vec<u64>, BTreeSet<String>)> = Builder::new();
    let mut errors = Vec::new();
    let mut rows = 0usize;
    for record in rdr.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let row = e.position().map_or(0, |p| p.line());
                errors.push(format!("row {row}: {e}"));
                continue;
            }
        };
        rows += 1;
        let row = record.position().map_or(0, |p| p.line());
        let parsed = (|| {
            let g = non_blank(field(&record, &at, "group_id"), "group_id", row)?;
            let r = non_blank(field(&record, &at, "researcher_id"), "researcher_id", row)?;
            let p = non_blank(field(&record, &at, "paper_id"), "paper_id", row)?;
            let c: u64 = count(field(&record, &at, "citations"), "citations", row)?;
            Ok::<_, String>((g, r, p, c))
        })();
        match parsed {
            Ok((g, r, p, c)) => {
                let ((papers, seen), _) = builder.slot(g, r, || (Vec::new(), BTreeSet::new()));
                if seen.insert(p.to_string()) {
                    papers.push(c);
                } else {
                    errors.push(format!(
                        "row {row}: paper `{p}` listed twice for researcher `{r}` in group `{g}`"
                    ));
                }
            }
            Err(e) => errors.push(e),
        }
    }
    if rows == 0 {
        return IngestReport::failed("no rows".into());
    }

    let groups = builder
        .groups
        .into_iter()
        .filter_map(|(gid, members)| {
            let members = members
                .into_iter()
                .map(|(mid, (papers, _))| ResearcherProfile::from_citations(mid, papers))
                .collect();
            Group::unlabeled(gid, members).ok()
        })
        .collect();
    IngestReport::finish(Dataset::new(groups), Vec::new(), errors)
}

/// One row per member with `h_index` and an optional `total_citations`.
pub fn read_summary_form<R: Read>(input: R, delimiter: u8) -> IngestReport {
    let mut rdr = csv_reader(input, delimiter);
    let at = match rdr.headers() {
        Ok(h) if h.is_empty() => return IngestReport::failed("no rows".into()),
        Ok(h) => match locate(h, &SUMMARY_FORM_COLUMNS[..3], &SUMMARY_FORM_COLUMNS[3..]) {
            Ok(at) => at,
            Err(e) => return IngestReport::failed(e),
        },
        Err(e) => return IngestReport::failed(format!("cannot read header: {e}")),
    };

    let mut builder: Builder<(u32, Option<u64>)> = Builder::new();
    let mut errors = Vec::new();
    let mut no_total = Vec::new();
    let mut rows = 0usize;
    for record in rdr.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let row = e.position().map_or(0, |p| p.line());
                errors.push(format!("row {row}: {e}"));
                continue;
            }
        };
        rows += 1;
        let row = record.position().map_or(0, |p| p.line());
        let parsed = (|| {
            let g = non_blank(field(&record, &at, "group_id"), "group_id", row)?;
            let r = non_blank(field(&record, &at, "researcher_id"), "researcher_id", row)?;
            let h: u32 = count(field(&record, &at, "h_index"), "h_index", row)?;
            let t = match field(&record, &at, "total_citations") {
                "" => None,
                v => Some(count::<u64>(v, "total_citations", row)?),
            };
            if let Some(t) = t {
                if u64::from(h) > t {
                    return Err(format!(
                        "row {row}: h_index {h} exceeds total_citations {t} for researcher `{r}`"
                    ));
                }
            }
            Ok::<_, String>((g, r, h, t))
        })();
        match parsed {
            Ok((g, r, h, t)) => {
                let (_, existed) = builder.slot(g, r, || (h, t));
                if existed {
                    errors.push(format!("row {row}: researcher `{r}` listed twice in group `{g}`"));
                } else if t.is_none() {
                    no_total.push(format!("{g}/{r}"));
                }
            }
            Err(e) => errors.push(e),
        }
    }
    if rows == 0 {
        return IngestReport::failed("no rows".into());
    }

    let mut warnings = Vec::new();
    if !no_total.is_empty() {
        warnings.push(format!(
            "{} member(s) have no total_citations and are excluded from citation-count analyses: {}",
            no_total.len(),
            no_total.join(", ")
        ));
    }
    let groups = builder
        .groups
        .into_iter()
        .filter_map(|(gid, members)| {
            let members = members
                .into_iter()
                .map(|(mid, (h, t))| ResearcherProfile::summary(mid, h, t))
                .collect();
            Group::unlabeled(gid, members).ok()
        })
        .collect();
    IngestReport::finish(Dataset::new(groups), warnings, errors)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocMember {
    id: String,
    h_index: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    total_citations: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    paper_citations: Option<Vec<u64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocGroup {
    id: String,
    #[serde(default)]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quality_tag: Option<String>,
    members: Vec<DocMember>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    groups: Vec<DocGroup>,
}

/// Pretty-printed JSON document for `dataset`.
pub fn write_dataset(dataset: &Dataset) -> String {
    let doc = Document {
        groups: dataset
            .groups
            .iter()
            .map(|g| DocGroup {
                id: g.id().to_string(),
                label: Some(g.label().to_string()),
                quality_tag: g.quality_tag().map(str::to_string),
                members: g
                    .members()
                    .iter()
                    .map(|m| DocMember {
                        id: m.id().to_string(),
                        h_index: m.h_index(),
                        total_citations: m.total_citations(),
                        paper_citations: m.paper_citations().map(<[u64]>::to_vec),
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("dataset documents always serialize");
    out.push('\n');
    out
}

/// Parses a JSON document; schema problems are reported with their path.
pub fn read_dataset(document: &str) -> IngestReport {
    let de = &mut serde_json::Deserializer::from_str(document);
    let doc: Document = match serde_path_to_error::deserialize(de) {
        Ok(d) => d,
        Err(e) => {
            let path = e.path().to_string();
            let inner = e.into_inner();
            return IngestReport::failed(if path == "." {
                format!("{inner}")
            } else {
                format!("at `{path}`: {inner}")
            });
        }
    };

    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let mut groups = Vec::new();
    for (gi, g) in doc.groups.into_iter().enumerate() {
        let missing_total = g.members.iter().filter(|m| m.total_citations.is_none()).count();
        if missing_total > 0 {
            warnings.push(format!(
                "group `{}`: {missing_total} member(s) have no total_citations",
                g.id
            ));
        }
        let members = g
            .members
            .into_iter()
            .map(|m| ResearcherProfile::from_parts(m.id, m.h_index, m.total_citations, m.paper_citations))
            .collect();
        let label = g.label.unwrap_or_else(|| g.id.clone());
        match Group::new(g.id, label, g.quality_tag, members) {
            Ok(group) => groups.push(group),
            Err(e) => errors.push(format!("at `groups[{gi}].members`: {e}")),
        }
    }
    IngestReport::finish(Dataset::new(groups), warnings, errors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(report: &IngestReport) -> &Dataset {
        assert!(report.errors.is_empty(), "{:?}", report.errors);
        report.dataset.as_ref().unwrap()
    }

    #[test]
    fn long_form_example() {
        let csv = "group_id,researcher_id,paper_id,citations\ng,r,p1,10\ng,r,p2,3\n";
        let r = read_long_form(csv.as_bytes(), b',');
        let d = ok(&r);
        let m = &d.groups[0].members()[0];
        assert_eq!((m.h_index(), m.total_citations()), (2, Some(13)));
        assert_eq!(m.paper_citations(), Some(&[10, 3][..]));
    }

    #[test]
    fn long_form_bad_rows_name_the_row() {
        let csv = "group_id,researcher_id,paper_id,citations\ng,r,p1,10\ng,r,p2,-1\n,r,p3,4\n";
        let r = read_long_form(csv.as_bytes(), b',');
        assert!(r.dataset.is_none());
        assert_eq!(r.errors.len(), 2, "{:?}", r.errors);
        assert!(r.errors[0].starts_with("row 3:") && r.errors[0].contains("-1"));
        assert!(r.errors[1].starts_with("row 4:") && r.errors[1].contains("group_id"));
    }

    #[test]
    fn empty_inputs() {
        for text in ["", "group_id,researcher_id,paper_id,citations\n"] {
            let r = read_long_form(text.as_bytes(), b',');
            assert_eq!(r.errors, vec!["no rows".to_string()]);
        }
        assert_eq!(read_tabular("".as_bytes(), b',').errors, vec!["no rows".to_string()]);
    }

    #[test]
    fn header_by_name_and_tab_delimiter() {
        let tsv = "citations\tpaper_id\tresearcher_id\tgroup_id\n5\tp\tr\tg\n";
        let d = read_long_form(tsv.as_bytes(), b'\t');
        assert_eq!(ok(&d).groups[0].members()[0].h_index(), 1);
        let missing = read_long_form("group_id,researcher_id\ng,r\n".as_bytes(), b',');
        assert!(missing.errors[0].contains("paper_id"));
    }

    #[test]
    fn member_order_follows_first_appearance() {
        let csv = "group_id,researcher_id,paper_id,citations\n\
                   b,z,p,1\na,y,p,2\nb,x,p,3\nb,z,q,4\na,z,p,5\n";
        let d = read_long_form(csv.as_bytes(), b',');
        let d = ok(&d);
        assert_eq!(d.groups.iter().map(|g| g.id()).collect::<Vec<_>>(), ["b", "a"]);
        let ids: Vec<_> = d.groups[0].members().iter().map(|m| m.id()).collect();
        assert_eq!(ids, ["z", "x"]);
        // same researcher in two groups is kept in both
        assert_eq!(d.groups[1].members()[1].id(), "z");
    }

    #[test]
    fn duplicate_paper_is_an_error() {
        let csv = "group_id,researcher_id,paper_id,citations\ng,r,p,1\ng,r,p,2\n";
        let r = read_long_form(csv.as_bytes(), b',');
        assert!(r.errors[0].contains("row 3"));
    }

    #[test]
    fn summary_form_examples() {
        let csv = "group_id,researcher_id,h_index,total_citations\ng,a,12,500\ng,b,12,\n";
        let r = read_summary_form(csv.as_bytes(), b',');
        let d = ok(&r);
        assert_eq!(d.groups[0].members()[0].total_citations(), Some(500));
        assert_eq!(d.groups[0].members()[1].total_citations(), None);
        assert_eq!(r.warnings.len(), 1);
        assert!(r.warnings[0].contains("g/b"));

        let bad = read_summary_form("group_id,researcher_id,h_index,total_citations\ng,r,12,5\n".as_bytes(), b',');
        assert!(bad.dataset.is_none());
        assert!(bad.errors[0].contains("row 2") && bad.errors[0].contains("exceeds"));
    }

    #[test]
    fn summary_form_without_total_column() {
        let r = read_tabular("group_id,researcher_id,h_index\ng,r,3\n".as_bytes(), b',');
        assert_eq!(ok(&r).groups[0].members()[0].h_index(), 3);
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn json_round_trip() {
        let g1 = Group::new(
            "DOCENG",
            "DocEng 2005",
            Some("A".into()),
            vec![
                ResearcherProfile::from_citations("r1", vec![10, 8, 5, 4, 3]),
                ResearcherProfile::summary("r2", 7, Some(300)),
                ResearcherProfile::summary("r3", 2, None),
            ],
        )
        .unwrap();
        let g2 = Group::unlabeled("SEKE", vec![ResearcherProfile::summary("r1", 4, Some(40))]).unwrap();
        let d = Dataset::new(vec![g1, g2]);
        let text = write_dataset(&d);
        let back = read_dataset(&text);
        assert_eq!(ok(&back), &d);
        assert_eq!(write_dataset(ok(&back)), text);
    }

    #[test]
    fn json_schema_errors_carry_paths() {
        let r = read_dataset(r#"{"groups":[{"id":"g"}]}"#);
        assert!(r.errors[0].contains("groups[0]") && r.errors[0].contains("members"), "{:?}", r.errors);

        let r = read_dataset(r#"{"groups":[{"id":"g","members":[{"id":"a","h_index":1,"x":2}]}]}"#);
        assert!(r.errors[0].contains("groups[0].members[0]"), "{:?}", r.errors);

        let r = read_dataset(r#"{"groups":[{"id":"g","members":[{"id":"a","h_index":-1}]}]}"#);
        assert!(r.errors[0].contains("h_index"), "{:?}", r.errors);
    }

    #[test]
    fn json_semantic_errors() {
        let dup = r#"{"groups":[
            {"id":"g","members":[{"id":"a","h_index":1}]},
            {"id":"g","members":[{"id":"b","h_index":2}]}]}"#;
        let r = read_dataset(dup);
        assert!(r.dataset.is_none());
        assert!(r.errors[0].contains("`g`"));

        let empty = read_dataset(r#"{"groups":[{"id":"g","members":[]}]}"#);
        assert!(empty.errors[0].contains("no members"));

        let inconsistent = read_dataset(
            r#"{"groups":[{"id":"g","members":[{"id":"a","h_index":3,"total_citations":13,"paper_citations":[10,3]}]}]}"#,
        );
        assert!(inconsistent.errors[0].contains("give 2"));
    }
}
