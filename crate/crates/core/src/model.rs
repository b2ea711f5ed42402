//! Domain types: researchers, groups (committees, boards) and datasets.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::metrics::h_index;

/// One member of a group.
///
/// A profile either carries the full per-paper citation list, from which the
/// summary fields are derived, or only the summary fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResearcherProfile {
    id: String,
    paper_citations: Option<Vec<u64>>,
    h_index: u32,
    total_citations: Option<u64>,
}

impl ResearcherProfile {
    /// Builds a profile from per-paper citation counts; h-index and total are computed.
    pub fn from_citations(id: impl Into<String>, paper_citations: Vec<u64>) -> Self {
        let h = h_index(&paper_citations);
        let total = paper_citations.iter().sum();
        Self {
            id: id.into(),
            paper_citations: Some(paper_citations),
            h_index: h,
            total_citations: Some(total),
        }
    }

    /// Summary-only profile. `total_citations` may be unknown.
    pub fn summary(id: impl Into<String>, h_index: u32, total_citations: Option<u64>) -> Self {
        Self {
            id: id.into(),
            paper_citations: None,
            h_index,
            total_citations,
        }
    }

    /// Profile with every field as declared by the source, consistent or not.
    /// Use [`validate`] to find inconsistencies.
    pub fn from_parts(
        id: impl Into<String>,
        h_index: u32,
        total_citations: Option<u64>,
        paper_citations: Option<Vec<u64>>,
    ) -> Self {
        Self {
            id: id.into(),
            paper_citations,
            h_index,
            total_citations,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn h_index(&self) -> u32 {
        self.h_index
    }

    pub fn total_citations(&self) -> Option<u64> {
        self.total_citations
    }

    pub fn paper_citations(&self) -> Option<&[u64]> {
        self.paper_citations.as_deref()
    }
}

/// A named group of researchers. Never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    id: String,
    label: String,
    quality_tag: Option<String>,
    members: Vec<ResearcherProfile>,
}

impl Group {
    pub fn new(
        id: impl Into<String>,
        label: impl Into<String>,
        quality_tag: Option<String>,
        members: Vec<ResearcherProfile>,
    ) -> Result<Self> {
        let id = id.into();
        if members.is_empty() {
            return Err(Error::EmptyGroup { group_id: id });
        }
        Ok(Self {
            id,
            label: label.into(),
            quality_tag,
            members,
        })
    }

    /// Group whose label is its id and which carries no quality tag.
    pub fn unlabeled(id: impl Into<String>, members: Vec<ResearcherProfile>) -> Result<Self> {
        let id = id.into();
        let label = id.clone();
        Self::new(id, label, None, members)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn quality_tag(&self) -> Option<&str> {
        self.quality_tag.as_deref()
    }

    pub fn members(&self) -> &[ResearcherProfile] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member h-indexes in member order.
    pub fn h_indexes(&self) -> Vec<u32> {
        self.members.iter().map(|m| m.h_index).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub groups: Vec<Group>,
}

impl Dataset {
    pub fn new(groups: Vec<Group>) -> Self {
        Self { groups }
    }

    pub fn group(&self, id: &str) -> Option<&Group> {
        self.groups.iter().find(|g| g.id == id)
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

/// One broken invariant found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub group_id: String,
    pub member_id: Option<String>,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.member_id {
            Some(m) => write!(f, "group `{}`, member `{}`: {}", self.group_id, m, self.reason),
            None => write!(f, "group `{}`: {}", self.group_id, self.reason),
        }
    }
}

/// Lists every invariant violation in the dataset. An empty list means the
/// dataset is valid.
pub fn validate(dataset: &Dataset) -> Vec<Violation> {
    let mut out = Vec::new();

    let mut group_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for g in &dataset.groups {
        *group_counts.entry(g.id.as_str()).or_default() += 1;
    }
    for (id, count) in &group_counts {
        if *count > 1 {
            out.push(Violation {
                group_id: id.to_string(),
                member_id: None,
                reason: format!("group id used by {count} groups"),
            });
        }
    }

    for g in &dataset.groups {
        if g.members.is_empty() {
            out.push(Violation {
                group_id: g.id.clone(),
                member_id: None,
                reason: "group has no members".into(),
            });
        }

        let mut member_counts: BTreeMap<&str, usize> = BTreeMap::new();
        for m in &g.members {
            *member_counts.entry(m.id.as_str()).or_default() += 1;
        }
        for (id, count) in &member_counts {
            if *count > 1 {
                out.push(Violation {
                    group_id: g.id.clone(),
                    member_id: Some(id.to_string()),
                    reason: format!("member id appears {count} times in the group"),
                });
            }
        }

        for m in &g.members {
            for reason in profile_violations(m) {
                out.push(Violation {
                    group_id: g.id.clone(),
                    member_id: Some(m.id.clone()),
                    reason,
                });
            }
        }
    }
    out
}

fn profile_violations(m: &ResearcherProfile) -> Vec<String> {
    let mut reasons = Vec::new();
    if let Some(papers) = &m.paper_citations {
        let h = h_index(papers);
        if h != m.h_index {
            reasons.push(format!(
                "declared h-index {} but paper citations give {} ({} papers)",
                m.h_index,
                h,
                papers.len()
            ));
        }
        let sum: u64 = papers.iter().sum();
        match m.total_citations {
            Some(t) if t == sum => {}
            Some(t) => reasons.push(format!(
                "declared total citations {t} but paper citations sum to {sum}"
            )),
            None => reasons.push(format!(
                "total citations missing although paper citations sum to {sum}"
            )),
        }
    }
    if let Some(t) = m.total_citations {
        if u64::from(m.h_index) > t {
            reasons.push(format!(
                "h-index {} exceeds total citations {}",
                m.h_index, t
            ));
        }
    }
    reasons
}
