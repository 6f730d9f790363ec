use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::texture::{extract_features, feature_names, preprocess, read_pgm, FeatureRecord, Segment, TextureConfig};

/// `F`: one whole-image row per image. `S`: top, mid and bottom rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetupMode {
    S,
    F,
}

impl FromStr for SetupMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S" | "s" => Ok(SetupMode::S),
            "F" | "f" => Ok(SetupMode::F),
            other => Err(Error::InvalidInput(format!("mode must be S or F, got `{other}`"))),
        }
    }
}

impl SetupMode {
    fn keeps(self, seg: Segment) -> bool {
        match self {
            SetupMode::F => seg == Segment::Whole,
            SetupMode::S => seg != Segment::Whole,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TextureRow {
    pub image_id: String,
    pub segment: Segment,
    pub values: Vec<f64>,
    pub label: String,
}

/// `image_id,label`; the id is the image file stem.
pub fn read_labels(path: &Path) -> Result<HashMap<String, String>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::InvalidInput(format!("{other:?}")),
    })?;
    let headers = r.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name).ok_or_else(|| Error::MissingColumn(name.to_string()));
    let (id, label) = (col("image_id")?, col("label")?);
    let mut out = HashMap::new();
    for rec in r.records() {
        let rec = rec?;
        out.insert(rec[id].to_string(), rec[label].to_string());
    }
    Ok(out)
}

/// `*.pgm` files of `dir`, sorted by file name.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("pgm")))
        .collect();
    paths.sort();
    Ok(paths)
}

/// Feature rows for every image in `dir`, in file-name order.
pub fn extract_texture_dataset(dir: &Path, labels: &Path, mode: SetupMode, cfg: &TextureConfig) -> Result<Vec<TextureRow>> {
    let labels = read_labels(labels)?;
    let images = list_images(dir)?;
    let per_image: Vec<Result<Vec<TextureRow>>> = images
        .par_iter()
        .map(|path| {
            let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let label = labels.get(&id).cloned().ok_or_else(|| Error::MissingLabel(id.clone()))?;
            let img = read_pgm(path)?;
            let pre = preprocess(&img, cfg)?;
            for w in &pre.warnings {
                log::warn!("{id}: {w}");
            }
            let records: Vec<FeatureRecord> = extract_features(&pre.image, Some(&pre.mask), cfg)?;
            Ok(records
                .into_iter()
                .filter(|r| mode.keeps(r.segment))
                .map(|r| TextureRow {
                    image_id: id.clone(),
                    segment: r.segment,
                    values: r.values,
                    label: label.clone(),
                })
                .collect())
        })
        .collect();
    let mut out = Vec::new();
    for rows in per_image {
        out.extend(rows?);
    }
    Ok(out)
}

/// `image_id,segment,f_0_1..f_135_13,label`. Readable by `load_csv` with
/// `label_column = "label"` and the first two columns ignored.
pub fn write_texture_csv(rows: &[TextureRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::InvalidInput(format!("{other:?}")),
    })?;
    let mut header = vec!["image_id".to_string(), "segment".to_string()];
    header.extend(feature_names());
    header.push("label".into());
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.image_id.clone(), r.segment.name().to_string()];
        rec.extend(r.values.iter().map(|v| v.to_string()));
        rec.push(r.label.clone());
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::phantom_image;
    use crate::tabular::{load_csv, CsvSchema};
    use crate::texture::{write_pgm, FEATURES_PER_RECORD};

    fn corpus(dir: &Path, n: usize) {
        let mut labels = String::from("image_id,label\n");
        for i in 0..n {
            let textured = i % 2 == 1;
            write_pgm(&phantom_image(48, 60, textured, i as u64), dir.join(format!("img{i:02}.pgm"))).unwrap();
            labels.push_str(&format!("img{i:02},{}\n", if textured { "textured" } else { "flat" }));
        }
        std::fs::write(dir.join("labels.csv"), labels).unwrap();
    }

    #[test]
    fn row_counts_per_mode() {
        let tmp = tempfile::tempdir().unwrap();
        corpus(tmp.path(), 4);
        let cfg = TextureConfig::default();
        let f = extract_texture_dataset(tmp.path(), &tmp.path().join("labels.csv"), SetupMode::F, &cfg).unwrap();
        let s = extract_texture_dataset(tmp.path(), &tmp.path().join("labels.csv"), SetupMode::S, &cfg).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(s.len(), 12);
        assert!(f.iter().chain(&s).all(|r| r.values.len() == FEATURES_PER_RECORD));
        assert_eq!(s[0].segment, Segment::Top);
        assert_eq!(s[2].segment, Segment::Bottom);

        let out = tmp.path().join("s.csv");
        write_texture_csv(&s, &out).unwrap();
        let mut schema = CsvSchema::new("label");
        schema.ignore_columns = vec!["image_id".into(), "segment".into()];
        let d = load_csv(&out, &schema).unwrap();
        assert_eq!((d.n_rows(), d.n_cols()), (12, 52));
    }

    #[test]
    fn missing_label_is_reported() {
        let tmp = tempfile::tempdir().unwrap();
        corpus(tmp.path(), 2);
        std::fs::write(tmp.path().join("labels.csv"), "image_id,label\nimg00,flat\n").unwrap();
        let err = extract_texture_dataset(tmp.path(), &tmp.path().join("labels.csv"), SetupMode::F, &TextureConfig::default());
        assert!(matches!(err, Err(Error::MissingLabel(id)) if id == "img01"));
    }

    #[test]
    fn modes_parse() {
        assert_eq!("S".parse::<SetupMode>().unwrap(), SetupMode::S);
        assert_eq!("f".parse::<SetupMode>().unwrap(), SetupMode::F);
        assert!("X".parse::<SetupMode>().is_err());
    }
}
