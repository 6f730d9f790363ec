//! Edited nearest neighbours, Tomek links, the SMOTE-ENN / SMOTE-Tomek
//! hybrids, and STEM (SMOTE, then ENN, then same-class Mixup).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neighbors::{build_index, DistanceKind};
use crate::samplers::{mixup_augment_counts, smote, MixupConfig, Resampled, SmoteConfig};
use crate::tabular::{minority_class, Dataset, RowOrigin};

/// Neighbours consulted by ENN.
pub const ENN_NEIGHBORS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnnScope {
    AllRows,
    MajorityOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalReason {
    EnnMisclassified,
    TomekMajority,
    TomekMinority,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovedRow {
    /// Position in the dataset the cleaner ran on.
    pub row: usize,
    pub origin: RowOrigin,
    pub label: u8,
    pub reason: RemovalReason,
}

/// Audit trail of one cleaning pass.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanReport {
    pub stage: String,
    pub removed: Vec<RemovedRow>,
    pub before: [usize; 2],
    pub after: [usize; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TomekLink {
    pub minority_idx: usize,
    pub majority_idx: usize,
    pub distance: f64,
}

fn require_both_classes(data: &Dataset, rows: &[usize]) -> Result<[usize; 2]> {
    let counts = data.class_counts(rows);
    if counts[0] == 0 || counts[1] == 0 {
        return Err(Error::SingleClass);
    }
    Ok(counts)
}

/// Edited nearest neighbours with `k = 3`.
///
/// A tested row is deleted when the majority label of its three nearest
/// neighbours within `rows` differs from its own. Votes are taken on the
/// original neighbourhood; deletions do not cascade. Returns the surviving
/// rows in input order.
pub fn enn(data: &Dataset, rows: &[usize], scope: EnnScope) -> Result<(Vec<usize>, CleanReport)> {
    if rows.len() <= ENN_NEIGHBORS {
        return Err(Error::TooFewRows {
            needed: ENN_NEIGHBORS + 1,
            found: rows.len(),
        });
    }
    let before = require_both_classes(data, rows)?;
    let majority = 1 - minority_class(before);
    let index = build_index(data, rows, DistanceKind::for_dataset(data, rows), None)?;
    let mut survivors = Vec::with_capacity(rows.len());
    let mut removed = Vec::new();
    for &r in rows {
        let label = data.label(r);
        let tested = scope == EnnScope::AllRows || label == majority;
        let misclassified = tested && {
            let ones = index
                .knn_of_row(r, ENN_NEIGHBORS)?
                .iter()
                .filter(|n| data.label(n.row) == 1)
                .count();
            u8::from(2 * ones > ENN_NEIGHBORS) != label
        };
        if misclassified {
            removed.push(RemovedRow {
                row: r,
                origin: data.origin(r),
                label,
                reason: RemovalReason::EnnMisclassified,
            });
        } else {
            survivors.push(r);
        }
    }
    let after = data.class_counts(&survivors);
    Ok((
        survivors,
        CleanReport {
            stage: "enn".into(),
            removed,
            before,
            after,
        },
    ))
}

/// Cross-class pairs that are each other's nearest neighbours: no third row
/// is strictly closer to either endpoint. Sorted by minority then majority
/// index.
pub fn find_tomek_links(data: &Dataset, rows: &[usize]) -> Result<Vec<TomekLink>> {
    let counts = require_both_classes(data, rows)?;
    tomek_links_for(data, rows, minority_class(counts))
}

fn tomek_links_for(data: &Dataset, rows: &[usize], minority: u8) -> Result<Vec<TomekLink>> {
    require_both_classes(data, rows)?;
    let index = build_index(data, rows, DistanceKind::for_dataset(data, rows), None)?;
    let nearest: Vec<Option<(f64, Vec<usize>)>> = rows.iter().map(|&r| index.nearest_ties(r)).collect();
    let position = |row: usize| rows.iter().position(|&r| r == row);
    let mut links = Vec::new();
    for (i, &a) in rows.iter().enumerate() {
        if data.label(a) != minority {
            continue;
        }
        let Some((d2, candidates)) = &nearest[i] else { continue };
        for &b in candidates {
            if data.label(b) == minority {
                continue;
            }
            let reciprocal = position(b)
                .and_then(|j| nearest[j].as_ref())
                .is_some_and(|(db, _)| db == d2);
            if reciprocal {
                links.push(TomekLink {
                    minority_idx: a,
                    majority_idx: b,
                    distance: d2.sqrt(),
                });
            }
        }
    }
    links.sort_by(|x, y| x.minority_idx.cmp(&y.minority_idx).then(x.majority_idx.cmp(&y.majority_idx)));
    Ok(links)
}

/// Keeps `keep` (positions in `out.data`), dropping provenance of removed
/// synthetic rows and appending `report`.
fn retain(out: Resampled, keep: &[usize], report: CleanReport) -> Result<Resampled> {
    if report.after[0] == 0 || report.after[1] == 0 {
        return Err(Error::Degenerate(format!("{} would empty a class", report.stage)));
    }
    let data = out.data.subset(keep);
    let alive: BTreeSet<RowOrigin> = data.origins().iter().copied().collect();
    let provenance = out
        .provenance
        .into_iter()
        .filter(|p| alive.contains(&RowOrigin::Synthetic(p.id)))
        .collect();
    let mut cleaning = out.cleaning;
    cleaning.push(report);
    Ok(Resampled {
        data,
        provenance,
        cleaning,
        warnings: out.warnings,
    })
}

/// SMOTE followed by removal of the majority endpoint of every Tomek link in
/// the oversampled set (both endpoints when `remove_both`).
pub fn smote_tomek(data: &Dataset, train_rows: &[usize], cfg: &SmoteConfig, remove_both: bool) -> Result<Resampled> {
    let original_minority = minority_class(data.class_counts(train_rows));
    let out = smote(data, train_rows, cfg)?;
    let all = out.data.all_rows();
    let links = tomek_links_for(&out.data, &all, original_minority)?;
    let mut drop: BTreeSet<(usize, RemovalReason)> = BTreeSet::new();
    for link in &links {
        drop.insert((link.majority_idx, RemovalReason::TomekMajority));
        if remove_both {
            drop.insert((link.minority_idx, RemovalReason::TomekMinority));
        }
    }
    let dropped: BTreeSet<usize> = drop.iter().map(|(r, _)| *r).collect();
    let keep: Vec<usize> = all.iter().copied().filter(|r| !dropped.contains(r)).collect();
    let mut removed: Vec<RemovedRow> = drop
        .into_iter()
        .map(|(row, reason)| RemovedRow {
            row,
            origin: out.data.origin(row),
            label: out.data.label(row),
            reason,
        })
        .collect();
    removed.sort_by_key(|r| r.row);
    let report = CleanReport {
        stage: "tomek".into(),
        removed,
        before: out.class_counts(),
        after: out.data.class_counts(&keep),
    };
    retain(out, &keep, report)
}

/// SMOTE followed by ENN over every row (both classes cleanable).
pub fn smote_enn(data: &Dataset, train_rows: &[usize], cfg: &SmoteConfig) -> Result<Resampled> {
    let out = smote(data, train_rows, cfg)?;
    let (keep, report) = enn(&out.data, &out.data.all_rows(), EnnScope::AllRows)?;
    retain(out, &keep, report)
}

/// Per-class Mixup counts for the last STEM stage.
///
/// The larger class grows by `pairs_per_class` (default: its own size) and
/// the smaller class is topped up so the final ratio is `target_ratio`.
/// `pairs_per_class = Some(0)` disables the stage.
pub fn stem_mixup_counts(counts: [usize; 2], cfg: &MixupConfig) -> [usize; 2] {
    if cfg.pairs_per_class == Some(0) {
        return [0, 0];
    }
    let minority = minority_class(counts) as usize;
    let majority = 1 - minority;
    let base = cfg.pairs_per_class.unwrap_or(counts[majority]);
    let final_majority = counts[majority] + base;
    let final_minority = (cfg.target_ratio * final_majority as f64).round() as usize;
    let mut out = [0usize; 2];
    out[majority] = base;
    out[minority] = final_minority.saturating_sub(counts[minority]);
    out
}

/// STEM: SMOTE, then ENN over all rows, then same-class Mixup that grows
/// both classes and restores the target ratio.
pub fn stem(data: &Dataset, train_rows: &[usize], smote_cfg: &SmoteConfig, mixup_cfg: &MixupConfig) -> Result<Resampled> {
    let cleaned = smote_enn(data, train_rows, smote_cfg)?;
    let counts = cleaned.class_counts();
    for class in 0..2u8 {
        if counts[class as usize] < 2 {
            return Err(Error::Degenerate(format!(
                "class {class} has {} rows after ENN; mixup needs 2",
                counts[class as usize]
            )));
        }
    }
    let mix_counts = stem_mixup_counts(counts, mixup_cfg);
    let mixed = mixup_augment_counts(&cleaned.data, &cleaned.data.all_rows(), mix_counts, mixup_cfg)?;
    let mut provenance = cleaned.provenance;
    provenance.extend(mixed.provenance);
    let mut warnings = cleaned.warnings;
    warnings.extend(mixed.warnings);
    Ok(Resampled {
        data: mixed.data,
        provenance,
        cleaning: cleaned.cleaning,
        warnings,
    })
}
