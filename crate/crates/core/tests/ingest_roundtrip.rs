use std::collections::BTreeMap;

use alphaindex::ingest::{read_dataset, read_long_form, read_summary_form, write_dataset};
use alphaindex::{validate, Dataset, Group, ResearcherProfile};
use proptest::prelude::*;

fn scan_h(citations: &[u64]) -> u32 {
    (1..=citations.len() as u64)
        .rev()
        .find(|&h| citations.iter().filter(|&&c| c >= h).count() as u64 >= h)
        .unwrap_or(0) as u32
}

fn member() -> impl Strategy<Value = ResearcherProfile> {
    prop_oneof![
        prop::collection::vec(0u64..500, 0..15).prop_map(|p| ResearcherProfile::from_citations("", p)),
        (0u32..60, 0u64..100).prop_map(|(h, extra)| ResearcherProfile::summary("", h, Some(u64::from(h) * u64::from(h) + extra))),
        (0u32..60).prop_map(|h| ResearcherProfile::summary("", h, None)),
    ]
}

fn with_id(p: ResearcherProfile, id: String) -> ResearcherProfile {
    ResearcherProfile::from_parts(id, p.h_index(), p.total_citations(), p.paper_citations().map(<[u64]>::to_vec))
}

fn dataset() -> impl Strategy<Value = Dataset> {
    let group = (
        "[A-Za-z][A-Za-z0-9 _\\-\u{e9}]{0,12}",
        prop::option::of("[ABC]"),
        prop::collection::vec(member(), 1..12),
    );
    prop::collection::vec(group, 0..6).prop_map(|groups| {
        Dataset::new(
            groups
                .into_iter()
                .enumerate()
                .map(|(gi, (label, tag, members))| {
                    let members = members
                        .into_iter()
                        .enumerate()
                        .map(|(mi, m)| with_id(m, format!("r{mi}\"x,{gi}")))
                        .collect();
                    Group::new(format!("G{gi}"), label, tag, members).unwrap()
                })
                .collect(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn json_round_trip(d in dataset()) {
        prop_assert!(validate(&d).is_empty());
        let text = write_dataset(&d);
        let back = read_dataset(&text);
        prop_assert!(back.errors.is_empty(), "{:?}", back.errors);
        prop_assert_eq!(back.dataset.as_ref().unwrap(), &d);
    }

    #[test]
    fn long_form_h_matches_scan(
        members in prop::collection::vec(prop::collection::vec(0u64..300, 1..25), 1..10),
    ) {
        let mut csv = String::from("group_id,researcher_id,paper_id,citations\n");
        for (mi, papers) in members.iter().enumerate() {
            for (pi, c) in papers.iter().enumerate() {
                csv.push_str(&format!("g{},r{mi},p{pi},{c}\n", mi % 3));
            }
        }
        let report = read_long_form(csv.as_bytes(), b',');
        prop_assert!(report.errors.is_empty(), "{:?}", report.errors);
        let d = report.dataset.unwrap();
        let by_id: BTreeMap<&str, &ResearcherProfile> =
            d.groups.iter().flat_map(|g| g.members()).map(|m| (m.id(), m)).collect();
        for (mi, papers) in members.iter().enumerate() {
            let m = by_id[format!("r{mi}").as_str()];
            prop_assert_eq!(m.h_index(), scan_h(papers));
            prop_assert_eq!(m.total_citations(), Some(papers.iter().sum()));
        }
    }

    #[test]
    fn long_form_row_order_only_changes_member_order(
        papers in prop::collection::vec((0usize..4, 0u64..50), 1..40),
        rotate in 0usize..40,
    ) {
        let rows: Vec<String> = papers
            .iter()
            .enumerate()
            .map(|(i, (r, c))| format!("g,r{r},p{i},{c}\n"))
            .collect();
        let mut rotated = rows.clone();
        let k = rotate % rotated.len();
        rotated.rotate_left(k);
        let read = |rows: &[String]| {
            let text = format!("group_id,researcher_id,paper_id,citations\n{}", rows.concat());
            let d = read_long_form(text.as_bytes(), b',').dataset.unwrap();
            let mut summary: Vec<(String, u32, Option<u64>)> = d.groups[0]
                .members()
                .iter()
                .map(|m| (m.id().to_string(), m.h_index(), m.total_citations()))
                .collect();
            summary.sort();
            summary
        };
        prop_assert_eq!(read(&rows), read(&rotated));
    }
}

#[test]
fn summary_csv_then_json_round_trip() {
    let csv = "group_id,researcher_id,h_index,total_citations\nA,x,3,40\nA,y,0,\nB,x,7,100\n";
    let r = read_summary_form(csv.as_bytes(), b',');
    let d = r.dataset.unwrap();
    // the same researcher may sit in two groups
    assert_eq!(d.groups[0].members()[0].id(), d.groups[1].members()[0].id());
    assert_eq!(read_dataset(&write_dataset(&d)).dataset.unwrap(), d);
}
