//! Six from-scratch binary classifiers and the top-3 majority-vote ensemble.
//!
//! Every model maps a feature vector to `p = P(class 1)` in `[0, 1]`; the
//! hard prediction is `p >= 0.5`.

mod boost;
mod discriminant;
mod ensemble;
mod logistic;
mod trees;

use serde::{Deserialize, Serialize};

pub use boost::AdaBoostParams;
pub use discriminant::{LdaParams, QdaParams};
pub use ensemble::{code_of, score_model, select_top3, Ensemble, ModelScore};
pub use logistic::{logistic_loss_and_grad, LogisticParams};
pub use trees::ExtraTreesParams;

use crate::error::{Error, Result};
use crate::neighbors::{build_index, DistanceKind};
use crate::tabular::Dataset;

/// Model families in their fixed tie-break (and ensemble-code) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Lda,
    Qda,
    ExtraTrees,
    AdaBoost,
    Knn,
    Logistic,
}

impl Family {
    pub fn initial(self) -> &'static str {
        match self {
            Family::Lda => "Ld",
            Family::Qda => "Q",
            Family::ExtraTrees => "E",
            Family::AdaBoost => "A",
            Family::Knn => "K",
            Family::Logistic => "Lr",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Lda => "lda",
            Family::Qda => "qda",
            Family::ExtraTrees => "extra_trees",
            Family::AdaBoost => "adaboost",
            Family::Knn => "knn",
            Family::Logistic => "logistic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KnnParams {
    pub k: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        KnnParams { k: 5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassifierKind {
    Lda(LdaParams),
    Qda(QdaParams),
    ExtraTrees(ExtraTreesParams),
    #[serde(alias = "adaboost_stumps")]
    Adaboost(AdaBoostParams),
    Knn(KnnParams),
    Logistic(LogisticParams),
}

impl ClassifierKind {
    pub fn family(&self) -> Family {
        match self {
            ClassifierKind::Lda(_) => Family::Lda,
            ClassifierKind::Qda(_) => Family::Qda,
            ClassifierKind::ExtraTrees(_) => Family::ExtraTrees,
            ClassifierKind::Adaboost(_) => Family::AdaBoost,
            ClassifierKind::Knn(_) => Family::Knn,
            ClassifierKind::Logistic(_) => Family::Logistic,
        }
    }

    /// All six families with default hyperparameters, in family order.
    pub fn defaults() -> Vec<ClassifierKind> {
        vec![
            ClassifierKind::Lda(LdaParams::default()),
            ClassifierKind::Qda(QdaParams::default()),
            ClassifierKind::ExtraTrees(ExtraTreesParams::default()),
            ClassifierKind::Adaboost(AdaBoostParams::default()),
            ClassifierKind::Knn(KnnParams::default()),
            ClassifierKind::Logistic(LogisticParams::default()),
        ]
    }
}

#[derive(Debug, Clone)]
enum Fitted {
    Linear(discriminant::Linear),
    Qda(discriminant::Quadratic),
    Trees(trees::Forest),
    Boost(boost::Stumps),
    Knn { train: Dataset, k: usize },
}

/// Immutable fitted model.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    kind: ClassifierKind,
    dim: usize,
    fitted: Fitted,
}

fn features_and_labels<'a>(data: &'a Dataset, rows: &[usize]) -> (Vec<&'a [f64]>, Vec<u8>) {
    (rows.iter().map(|&r| data.row(r)).collect(), rows.iter().map(|&r| data.label(r)).collect())
}

/// Fits `kind` on `rows` of `data`. Deterministic in `seed`.
pub fn train(kind: &ClassifierKind, data: &Dataset, rows: &[usize], seed: u64) -> Result<TrainedModel> {
    let counts = data.class_counts(rows);
    if counts[0] == 0 || counts[1] == 0 {
        return Err(Error::SingleClass);
    }
    if data.n_cols() == 0 {
        return Err(Error::InvalidInput("no feature columns".into()));
    }
    let (xs, ys) = features_and_labels(data, rows);
    let fitted = match kind {
        ClassifierKind::Lda(p) => Fitted::Linear(discriminant::fit_lda(&xs, &ys, p)?),
        ClassifierKind::Qda(p) => Fitted::Qda(discriminant::fit_qda(&xs, &ys, p)?),
        ClassifierKind::Logistic(p) => Fitted::Linear(logistic::fit(&xs, &ys, p)?),
        ClassifierKind::ExtraTrees(p) => Fitted::Trees(trees::fit(&xs, &ys, p, seed)?),
        ClassifierKind::Adaboost(p) => Fitted::Boost(boost::fit(&xs, &ys, p)?),
        ClassifierKind::Knn(p) => {
            if p.k == 0 {
                return Err(Error::InvalidInput("knn needs k >= 1".into()));
            }
            Fitted::Knn {
                train: data.subset(rows),
                k: p.k.min(rows.len()),
            }
        }
    };
    Ok(TrainedModel {
        kind: *kind,
        dim: data.n_cols(),
        fitted,
    })
}

impl TrainedModel {
    pub fn kind(&self) -> &ClassifierKind {
        &self.kind
    }

    pub fn family(&self) -> Family {
        self.kind.family()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn predict_proba(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        let p = match &self.fitted {
            Fitted::Linear(m) => m.proba(x),
            Fitted::Qda(m) => m.proba(x),
            Fitted::Trees(m) => m.proba(x),
            Fitted::Boost(m) => m.proba(x),
            Fitted::Knn { train, k } => {
                let rows = train.all_rows();
                let index = build_index(train, &rows, DistanceKind::for_dataset(train, &rows), None)?;
                let nn = index.knn(x, *k)?;
                nn.iter().filter(|n| train.label(n.row) == 1).count() as f64 / nn.len() as f64
            }
        };
        Ok(p.clamp(0.0, 1.0))
    }

    pub fn predict(&self, x: &[f64]) -> Result<u8> {
        Ok(u8::from(self.predict_proba(x)? >= 0.5))
    }

    /// `P(class 1)` for each row of `rows`.
    pub fn predict_rows(&self, data: &Dataset, rows: &[usize]) -> Result<Vec<f64>> {
        rows.iter().map(|&r| self.predict_proba(data.row(r))).collect()
    }

    /// Normal vector and offset of the decision hyperplane, for linear models.
    pub fn linear_boundary(&self) -> Option<(&[f64], f64)> {
        match &self.fitted {
            Fitted::Linear(m) => Some((&m.weights, m.bias)),
            _ => None,
        }
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    fn blobs(seed: u64) -> Dataset {
        synth::two_gaussians(&synth::TwoGaussians {
            rows: 200,
            positive_fraction: 0.5,
            dim: 2,
            separation: 12.0,
            seed,
        })
    }

    #[test]
    fn separable_blobs_are_learned_by_every_family() {
        let d = blobs(1);
        let rows = d.all_rows();
        for kind in ClassifierKind::defaults() {
            let m = train(&kind, &d, &rows, 7).unwrap();
            let correct = rows.iter().filter(|&&r| m.predict(d.row(r)).unwrap() == d.label(r)).count();
            assert_eq!(correct, rows.len(), "{:?}", kind.family());
        }
    }

    #[test]
    fn one_nearest_neighbour_reproduces_labels() {
        let d = synth::two_moons(30, 60, 0.3, 2);
        let m = train(&ClassifierKind::Knn(KnnParams { k: 1 }), &d, &d.all_rows(), 0).unwrap();
        for r in 0..d.n_rows() {
            assert_eq!(m.predict(d.row(r)).unwrap(), d.label(r));
        }
    }

    #[test]
    fn unanimous_neighbours_give_certainty() {
        let d = blobs(2);
        let m = train(&ClassifierKind::Knn(KnnParams::default()), &d, &d.all_rows(), 0).unwrap();
        let far_positive = vec![12.0 / 2f64.sqrt(); 2];
        assert_eq!(m.predict_proba(&far_positive).unwrap(), 1.0);
        assert!(m.predict_proba(&[0.0]).is_err());
    }

    #[test]
    fn xor_defeats_logistic_regression() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (i, (x, y)) in [(0.0, 0.0), (1.0, 1.0), (0.0, 1.0), (1.0, 0.0)].into_iter().enumerate() {
            for j in 0..25 {
                let jitter = 0.01 * j as f64;
                rows.push(vec![x + jitter, y - jitter]);
                labels.push(u8::from(i >= 2));
            }
        }
        let d = Dataset::continuous(rows, labels).unwrap();
        let m = train(&ClassifierKind::Logistic(LogisticParams::default()), &d, &d.all_rows(), 0).unwrap();
        let p = m.predict_rows(&d, &d.all_rows()).unwrap();
        assert!(crate::metrics::auc(d.labels(), &p).unwrap() <= 0.6);
    }

    #[test]
    fn single_class_is_rejected() {
        let d = Dataset::continuous(vec![vec![0.0], vec![1.0]], vec![1, 1]).unwrap();
        for kind in ClassifierKind::defaults() {
            assert!(matches!(train(&kind, &d, &[0, 1], 0), Err(Error::SingleClass)));
        }
    }

    #[test]
    fn kinds_parse_from_toml_with_defaults() {
        #[derive(Deserialize)]
        struct Wrapper {
            classifier: Vec<ClassifierKind>,
        }
        let w: Wrapper = toml::from_str(
            "[[classifier]]\nkind = \"knn\"\nk = 3\n[[classifier]]\nkind = \"extra_trees\"\n[[classifier]]\nkind = \"adaboost_stumps\"\nrounds = 10\n",
        )
        .unwrap();
        assert_eq!(w.classifier[0], ClassifierKind::Knn(KnnParams { k: 3 }));
        assert_eq!(w.classifier[1], ClassifierKind::ExtraTrees(ExtraTreesParams::default()));
        assert_eq!(w.classifier[2], ClassifierKind::Adaboost(AdaBoostParams { rounds: 10 }));
    }
}
