//! Dataset model, CSV ingestion, stratified splitting and standardisation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    Continuous,
    Nominal,
}

/// Where a row came from.
///
/// `Original(i)` points at row `i` of the dataset the pipeline started from;
/// it survives subsetting, so cleaners and samplers never lose track of it.
/// `Synthetic(id)` is a generated row whose recipe is in the provenance log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowOrigin {
    Original(usize),
    Synthetic(u64),
}

impl RowOrigin {
    pub fn is_synthetic(self) -> bool {
        matches!(self, RowOrigin::Synthetic(_))
    }
}

impl fmt::Display for RowOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowOrigin::Original(i) => write!(f, "o{i}"),
            RowOrigin::Synthetic(id) => write!(f, "s{id}"),
        }
    }
}

/// Binary-labelled feature matrix. Class 1 is the positive (minority) class
/// for loaded data.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    n_cols: usize,
    labels: Vec<u8>,
    kinds: Vec<ColumnKind>,
    origins: Vec<RowOrigin>,
    names: Vec<String>,
    categories: Vec<Vec<String>>,
    class_names: [String; 2],
}

impl Dataset {
    /// Builds a dataset of original rows. Column names default to `x0, x1, ...`.
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<u8>, kinds: Vec<ColumnKind>) -> Result<Self> {
        let n_cols = kinds.len();
        if n_cols == 0 {
            return Err(Error::InvalidInput("dataset needs at least one column".into()));
        }
        if rows.len() != labels.len() {
            return Err(Error::LengthMismatch(rows.len(), labels.len()));
        }
        let mut features = Vec::with_capacity(rows.len() * n_cols);
        for row in &rows {
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    expected: n_cols,
                    found: row.len(),
                });
            }
            features.extend_from_slice(row);
        }
        let data = Dataset {
            features,
            n_cols,
            origins: (0..labels.len()).map(RowOrigin::Original).collect(),
            labels,
            names: (0..n_cols).map(|i| format!("x{i}")).collect(),
            categories: vec![Vec::new(); n_cols],
            kinds,
            class_names: ["0".into(), "1".into()],
        };
        data.validate()?;
        Ok(data)
    }

    /// Dense dataset of continuous columns only.
    pub fn continuous(rows: Vec<Vec<f64>>, labels: Vec<u8>) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        Self::new(rows, labels, vec![ColumnKind::Continuous; d])
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n_cols {
            return Err(Error::LengthMismatch(names.len(), self.n_cols));
        }
        self.names = names;
        Ok(self)
    }

    pub fn with_class_names(mut self, negative: &str, positive: &str) -> Self {
        self.class_names = [negative.to_string(), positive.to_string()];
        self
    }

    fn validate(&self) -> Result<()> {
        for (r, &y) in self.labels.iter().enumerate() {
            if y > 1 {
                return Err(Error::InvalidInput(format!("row {r}: label {y} is not 0/1")));
            }
        }
        for r in 0..self.n_rows() {
            for (c, &v) in self.row(r).iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::InvalidInput(format!("row {r}, column {c}: non-finite value")));
                }
                if self.kinds[c] == ColumnKind::Nominal && (v.fract() != 0.0 || v < 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "row {r}, column {c}: nominal value {v} is not a category code"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn label(&self, i: usize) -> u8 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn origin(&self, i: usize) -> RowOrigin {
        self.origins[i]
    }

    pub fn origins(&self) -> &[RowOrigin] {
        &self.origins
    }

    pub fn kinds(&self) -> &[ColumnKind] {
        &self.kinds
    }

    pub fn feature_names(&self) -> &[String] {
        &self.names
    }

    pub fn class_names(&self) -> &[String; 2] {
        &self.class_names
    }

    /// Category dictionary of a nominal column (empty for continuous ones).
    pub fn categories(&self, col: usize) -> &[String] {
        &self.categories[col]
    }

    pub fn has_nominal(&self) -> bool {
        self.kinds.contains(&ColumnKind::Nominal)
    }

    pub fn continuous_columns(&self) -> Vec<usize> {
        (0..self.n_cols)
            .filter(|&c| self.kinds[c] == ColumnKind::Continuous)
            .collect()
    }

    pub fn all_rows(&self) -> Vec<usize> {
        (0..self.n_rows()).collect()
    }

    /// Per-class counts over `rows`, indexed by class id.
    pub fn class_counts(&self, rows: &[usize]) -> [usize; 2] {
        let mut counts = [0usize; 2];
        for &r in rows {
            counts[self.labels[r] as usize] += 1;
        }
        counts
    }

    pub fn rows_of_class(&self, rows: &[usize], class: u8) -> Vec<usize> {
        rows.iter().copied().filter(|&r| self.labels[r] == class).collect()
    }

    /// Copies `rows` (in the given order) into a new dataset, keeping origins.
    pub fn subset(&self, rows: &[usize]) -> Dataset {
        let mut features = Vec::with_capacity(rows.len() * self.n_cols);
        for &r in rows {
            features.extend_from_slice(self.row(r));
        }
        Dataset {
            features,
            n_cols: self.n_cols,
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            kinds: self.kinds.clone(),
            origins: rows.iter().map(|&r| self.origins[r]).collect(),
            names: self.names.clone(),
            categories: self.categories.clone(),
            class_names: self.class_names.clone(),
        }
    }

    pub(crate) fn push_row(&mut self, values: &[f64], label: u8, origin: RowOrigin) {
        debug_assert_eq!(values.len(), self.n_cols);
        self.features.extend_from_slice(values);
        self.labels.push(label);
        self.origins.push(origin);
    }

    pub(crate) fn set_values(&mut self, row: usize, cols: &[usize], values: &[f64]) {
        for (&c, &v) in cols.iter().zip(values) {
            self.features[row * self.n_cols + c] = v;
        }
    }

    /// Largest synthetic id present, if any.
    pub fn max_synthetic_id(&self) -> Option<u64> {
        self.origins
            .iter()
            .filter_map(|o| match o {
                RowOrigin::Synthetic(id) => Some(*id),
                RowOrigin::Original(_) => None,
            })
            .max()
    }
}

/// Minority class of a pair of counts; equal counts resolve to class 1.
pub fn minority_class(counts: [usize; 2]) -> u8 {
    if counts[1] <= counts[0] {
        1
    } else {
        0
    }
}

/// Column roles for [`load_csv`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CsvSchema {
    pub label_column: String,
    #[serde(default)]
    pub nominal_columns: Vec<String>,
    /// Columns dropped on load (ids, free text).
    #[serde(default)]
    pub ignore_columns: Vec<String>,
}

impl CsvSchema {
    pub fn new(label_column: &str) -> Self {
        CsvSchema {
            label_column: label_column.to_string(),
            ..Default::default()
        }
    }
}

/// Reads a headed, comma-separated table.
///
/// The less frequent label becomes class 1; on equal counts the
/// lexicographically smaller label does. Nominal columns are integer-coded
/// by the position of each value in the sorted list of distinct values.
pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let headers: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();

    let label_idx = headers
        .iter()
        .position(|h| *h == schema.label_column)
        .ok_or_else(|| Error::MissingColumn(schema.label_column.clone()))?;
    for name in schema.nominal_columns.iter().chain(&schema.ignore_columns) {
        if !headers.contains(name) {
            return Err(Error::MissingColumn(name.clone()));
        }
    }
    let feature_cols: Vec<usize> = (0..headers.len())
        .filter(|&i| i != label_idx && !schema.ignore_columns.contains(&headers[i]))
        .collect();
    if feature_cols.is_empty() {
        return Err(Error::InvalidInput("no feature columns".into()));
    }
    let kinds: Vec<ColumnKind> = feature_cols
        .iter()
        .map(|&i| {
            if schema.nominal_columns.contains(&headers[i]) {
                ColumnKind::Nominal
            } else {
                ColumnKind::Continuous
            }
        })
        .collect();

    let mut raw_labels = Vec::new();
    let mut cells: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        raw_labels.push(record.get(label_idx).unwrap_or("").trim().to_string());
        cells.push(feature_cols.iter().map(|&i| record.get(i).unwrap_or("").trim().to_string()).collect());
    }

    let mut label_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in &raw_labels {
        *label_counts.entry(l.as_str()).or_default() += 1;
    }
    if label_counts.len() != 2 {
        return Err(Error::NotBinary(label_counts.len()));
    }
    // BTreeMap order is lexicographic, so on a tie the first entry wins.
    let mut entries: Vec<(&str, usize)> = label_counts.into_iter().collect();
    let positive = if entries[1].1 < entries[0].1 { entries.remove(1) } else { entries.remove(0) };
    let negative = entries.remove(0);
    let positive_name = positive.0.to_string();
    let negative_name = negative.0.to_string();

    let mut categories = vec![Vec::new(); feature_cols.len()];
    for (c, kind) in kinds.iter().enumerate() {
        if *kind == ColumnKind::Nominal {
            let mut values: Vec<String> = cells.iter().map(|row| row[c].clone()).collect();
            values.sort();
            values.dedup();
            categories[c] = values;
        }
    }

    let mut rows = Vec::with_capacity(cells.len());
    for (r, row) in cells.iter().enumerate() {
        let mut values = Vec::with_capacity(row.len());
        for (c, cell) in row.iter().enumerate() {
            let v = match kinds[c] {
                ColumnKind::Nominal => categories[c].binary_search(cell).expect("category present") as f64,
                ColumnKind::Continuous => match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => v,
                    _ => {
                        return Err(Error::NonNumeric {
                            column: headers[feature_cols[c]].clone(),
                            row: r,
                            value: cell.clone(),
                        })
                    }
                },
            };
            values.push(v);
        }
        rows.push(values);
    }
    let labels = raw_labels.iter().map(|l| u8::from(*l == positive_name)).collect();
    let names = feature_cols.iter().map(|&i| headers[i].clone()).collect();
    let mut data = Dataset::new(rows, labels, kinds)?
        .with_feature_names(names)?
        .with_class_names(&negative_name, &positive_name);
    data.categories = categories;
    Ok(data)
}

/// Writes `data` as CSV with a trailing `label` column holding class names.
///
/// Floats are written in shortest round-trip form, so a reload is bit-exact.
/// When nominal columns exist their dictionaries go to `<path>.categories.json`.
pub fn save_csv(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = csv::Writer::from_writer(file);
    let mut header: Vec<&str> = data.names.iter().map(String::as_str).collect();
    header.push("label");
    writer.write_record(&header)?;
    for r in 0..data.n_rows() {
        let mut record: Vec<String> = data
            .row(r)
            .iter()
            .enumerate()
            .map(|(c, v)| match data.kinds[c] {
                ColumnKind::Nominal if !data.categories[c].is_empty() => data.categories[c][*v as usize].clone(),
                _ => v.to_string(),
            })
            .collect();
        record.push(data.class_names[data.labels[r] as usize].clone());
        writer.write_record(&record)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;

    if data.has_nominal() {
        let dict: BTreeMap<&str, &[String]> = (0..data.n_cols)
            .filter(|&c| data.kinds[c] == ColumnKind::Nominal)
            .map(|c| (data.names[c].as_str(), data.categories[c].as_slice()))
            .collect();
        let sidecar = path.with_extension("categories.json");
        let text = serde_json::to_string_pretty(&dict)?;
        std::fs::write(&sidecar, text).map_err(|e| Error::io(&sidecar, e))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitFractions {
    pub train: f64,
    pub validation: f64,
    pub holdout: f64,
}

impl Default for SplitFractions {
    fn default() -> Self {
        SplitFractions {
            train: 0.8,
            validation: 0.1,
            holdout: 0.1,
        }
    }
}

/// Disjoint train/validation/holdout row lists, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub holdout: Vec<usize>,
}

/// Largest-remainder apportionment of `total` units over `quotas`.
/// Ties on the fractional part go to the lower index.
pub(crate) fn apportion(quotas: &[f64], total: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.max(0.0).floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..quotas.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = quotas[a] - quotas[a].max(0.0).floor();
        let fb = quotas[b] - quotas[b].max(0.0).floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    if assigned < total {
        for &i in order.iter().cycle().take(total - assigned) {
            counts[i] += 1;
        }
    } else {
        let mut excess = assigned - total;
        for &i in order.iter().rev() {
            while excess > 0 && counts[i] > 0 {
                counts[i] -= 1;
                excess -= 1;
            }
        }
    }
    counts
}

/// Stratified three-way split.
///
/// Part sizes are `round(N * fraction)` for validation and holdout; each is
/// apportioned across classes by largest remainder. Each class is shuffled
/// with a seeded stream and sliced contiguously (validation, holdout, then
/// train), so the training part absorbs rounding remainders.
pub fn stratified_split(data: &Dataset, fractions: SplitFractions, seed: u64) -> Result<SplitIndices> {
    let SplitFractions {
        train,
        validation,
        holdout,
    } = fractions;
    if [train, validation, holdout].iter().any(|f| !(0.0..=1.0).contains(f))
        || (train + validation + holdout - 1.0).abs() > 1e-9
    {
        return Err(Error::InvalidInput(format!(
            "split fractions must be in [0,1] and sum to 1, got {train}/{validation}/{holdout}"
        )));
    }
    let all = data.all_rows();
    let counts = data.class_counts(&all);
    for class in 0..2u8 {
        if counts[class as usize] < 3 {
            return Err(Error::ClassTooSmall {
                class,
                count: counts[class as usize],
                needed: 3,
            });
        }
    }
    let n = data.n_rows() as f64;
    let val_total = (n * validation).round() as usize;
    let hold_total = (n * (validation + holdout)).round() as usize - val_total;
    let val_quota: Vec<f64> = counts.iter().map(|&c| c as f64 * validation).collect();
    let val_counts = apportion(&val_quota, val_total);
    let hold_quota: Vec<f64> = counts
        .iter()
        .zip(&val_counts)
        .map(|(&c, &v)| c as f64 * (validation + holdout) - v as f64)
        .collect();
    let hold_counts = apportion(&hold_quota, hold_total);

    let mut rng = rng::stream(seed, "stratified_split");
    let mut split = SplitIndices {
        train: Vec::new(),
        validation: Vec::new(),
        holdout: Vec::new(),
    };
    for class in 0..2u8 {
        let mut members = data.rows_of_class(&all, class);
        members.shuffle(&mut rng);
        let c = class as usize;
        if val_counts[c] + hold_counts[c] > members.len() {
            return Err(Error::ClassTooSmall {
                class,
                count: members.len(),
                needed: val_counts[c] + hold_counts[c],
            });
        }
        let (val, rest) = members.split_at(val_counts[c]);
        let (hold, tr) = rest.split_at(hold_counts[c]);
        split.validation.extend_from_slice(val);
        split.holdout.extend_from_slice(hold);
        split.train.extend_from_slice(tr);
    }
    split.train.sort_unstable();
    split.validation.sort_unstable();
    split.holdout.sort_unstable();
    Ok(split)
}

/// Per-column z-score parameters; `None` for nominal columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<Option<f64>>,
    pub stds: Vec<Option<f64>>,
}

/// Fits population (1/N) means and deviations on `rows` only.
pub fn fit_standardizer(data: &Dataset, rows: &[usize]) -> Result<Standardizer> {
    if rows.is_empty() {
        return Err(Error::EmptyRows);
    }
    let n = rows.len() as f64;
    let mut means = Vec::with_capacity(data.n_cols());
    let mut stds = Vec::with_capacity(data.n_cols());
    for c in 0..data.n_cols() {
        if data.kinds[c] == ColumnKind::Nominal {
            means.push(None);
            stds.push(None);
            continue;
        }
        let mean = rows.iter().map(|&r| data.row(r)[c]).sum::<f64>() / n;
        let var = rows.iter().map(|&r| (data.row(r)[c] - mean).powi(2)).sum::<f64>() / n;
        means.push(Some(mean));
        stds.push(Some(var.sqrt()));
    }
    Ok(Standardizer { means, stds })
}

impl Standardizer {
    fn check(&self, data: &Dataset) -> Result<()> {
        if data.n_cols() != self.means.len() {
            return Err(Error::DimensionMismatch {
                expected: self.means.len(),
                found: data.n_cols(),
            });
        }
        Ok(())
    }

    fn map(&self, data: &Dataset, f: impl Fn(f64, f64, f64) -> f64) -> Result<Dataset> {
        self.check(data)?;
        let mut out = data.clone();
        let d = data.n_cols();
        for (i, v) in out.features.iter_mut().enumerate() {
            let c = i % d;
            if let (Some(mean), Some(std)) = (self.means[c], self.stds[c]) {
                *v = f(*v, mean, std);
            }
        }
        Ok(out)
    }

    /// Z-scores continuous columns; zero-deviation columns become 0.
    pub fn transform(&self, data: &Dataset) -> Result<Dataset> {
        self.map(data, |v, mean, std| if std > 0.0 { (v - mean) / std } else { 0.0 })
    }

    pub fn inverse_transform(&self, data: &Dataset) -> Result<Dataset> {
        self.map(data, |v, mean, std| if std > 0.0 { v * std + mean } else { mean })
    }
}
