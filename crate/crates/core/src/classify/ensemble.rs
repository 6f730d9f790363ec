use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{Family, TrainedModel};
use crate::error::{Error, Result};
use crate::metrics;
use crate::tabular::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelScore {
    pub family: Family,
    pub auc: f64,
    pub f1: f64,
}

/// Three members sorted by descending validation AUC.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub members: Vec<TrainedModel>,
    pub selection_scores: Vec<ModelScore>,
}

fn rank(a: &ModelScore, b: &ModelScore) -> Ordering {
    b.auc.total_cmp(&a.auc).then(b.f1.total_cmp(&a.f1)).then(a.family.cmp(&b.family))
}

pub fn score_model(model: &TrainedModel, data: &Dataset, rows: &[usize]) -> Result<ModelScore> {
    let p = model.predict_rows(data, rows)?;
    let labels: Vec<u8> = rows.iter().map(|&r| data.label(r)).collect();
    let hard: Vec<u8> = p.iter().map(|&v| u8::from(v >= 0.5)).collect();
    Ok(ModelScore {
        family: model.family(),
        auc: metrics::auc(&labels, &p)?,
        f1: metrics::f1(&metrics::confusion(&labels, &hard)?)?.value,
    })
}

/// Keeps the three best models by validation AUC, then F1, then family
/// order. Returns the ensemble and every candidate's score in input order.
pub fn select_top3(models: Vec<TrainedModel>, data: &Dataset, validation: &[usize]) -> Result<(Ensemble, Vec<ModelScore>)> {
    if models.len() < 3 {
        return Err(Error::TooFewModels(models.len()));
    }
    let scores: Vec<ModelScore> = models.iter().map(|m| score_model(m, data, validation)).collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..models.len()).collect();
    order.sort_by(|&a, &b| rank(&scores[a], &scores[b]).then(a.cmp(&b)));
    order.truncate(3);
    let mut slots: Vec<Option<TrainedModel>> = models.into_iter().map(Some).collect();
    let members = order.iter().map(|&i| slots[i].take().expect("distinct indices")).collect();
    let selection_scores = order.iter().map(|&i| scores[i]).collect();
    Ok((
        Ensemble {
            members,
            selection_scores,
        },
        scores,
    ))
}

impl Ensemble {
    /// An ensemble over exactly three given models, scores unset.
    pub fn from_members(members: Vec<TrainedModel>) -> Result<Self> {
        if members.len() != 3 {
            return Err(Error::TooFewModels(members.len()));
        }
        let selection_scores = members
            .iter()
            .map(|m| ModelScore {
                family: m.family(),
                auc: f64::NAN,
                f1: f64::NAN,
            })
            .collect();
        Ok(Ensemble {
            members,
            selection_scores,
        })
    }

    /// Majority of the members' hard votes (`p >= 0.5`).
    pub fn vote(&self, x: &[f64]) -> Result<u8> {
        let mut ones = 0;
        for m in &self.members {
            ones += usize::from(m.predict(x)?);
        }
        Ok(u8::from(2 * ones > self.members.len()))
    }

    /// Mean member probability; the ensemble's ranking score.
    pub fn proba(&self, x: &[f64]) -> Result<f64> {
        let mut s = 0.0;
        for m in &self.members {
            s += m.predict_proba(x)?;
        }
        Ok(s / self.members.len() as f64)
    }

    pub fn families(&self) -> Vec<Family> {
        let mut f: Vec<Family> = self.members.iter().map(TrainedModel::family).collect();
        f.sort();
        f
    }

    /// Member initials in family order, e.g. `LdQE`.
    pub fn code(&self) -> String {
        code_of(&self.families())
    }
}

pub fn code_of(families: &[Family]) -> String {
    let mut f = families.to_vec();
    f.sort();
    f.iter().map(|f| f.initial()).collect()
}

#[cfg(test)]
mod tests {
    use super::super::{train, ClassifierKind, KnnParams, LdaParams, LogisticParams};
    use super::*;
    use crate::synth;
    use rand::{Rng, SeedableRng};

    #[test]
    fn codes_use_fixed_order() {
        assert_eq!(code_of(&[Family::ExtraTrees, Family::Lda, Family::Qda]), "LdQE");
        assert_eq!(code_of(&[Family::Logistic, Family::AdaBoost, Family::Knn]), "AKLr");
    }

    #[test]
    fn ranking_prefers_auc_then_f1_then_family() {
        let s = |family, auc, f1| ModelScore { family, auc, f1 };
        let mut v = [
            s(Family::Knn, 0.9, 0.5),
            s(Family::Lda, 0.8, 0.9),
            s(Family::Qda, 0.9, 0.7),
            s(Family::Logistic, 0.9, 0.7),
        ];
        v.sort_by(rank);
        let fam: Vec<Family> = v.iter().map(|m| m.family).collect();
        assert_eq!(fam, vec![Family::Qda, Family::Logistic, Family::Knn, Family::Lda]);
    }

    #[test]
    fn votes_and_copies() {
        let d = synth::two_gaussians(&synth::TwoGaussians {
            rows: 200,
            positive_fraction: 0.5,
            dim: 2,
            separation: 1.0,
            seed: 4,
        });
        let rows = d.all_rows();
        let m = train(&ClassifierKind::Lda(LdaParams::default()), &d, &rows, 0).unwrap();
        let e = Ensemble::from_members(vec![m.clone(), m.clone(), m.clone()]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let x = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            assert_eq!(e.vote(&x).unwrap(), m.predict(&x).unwrap());
        }
        let knn = train(&ClassifierKind::Knn(KnnParams::default()), &d, &rows, 0).unwrap();
        let lr = train(&ClassifierKind::Logistic(LogisticParams::default()), &d, &rows, 0).unwrap();
        let a = Ensemble::from_members(vec![m.clone(), knn.clone(), lr.clone()]).unwrap();
        let b = Ensemble::from_members(vec![lr, m, knn]).unwrap();
        for r in 0..50 {
            assert_eq!(a.vote(d.row(r)).unwrap(), b.vote(d.row(r)).unwrap());
        }
        assert_eq!(a.code(), "LdKLr");
    }

    #[test]
    fn top3_keeps_the_best() {
        let d = synth::two_gaussians(&synth::TwoGaussians {
            rows: 300,
            positive_fraction: 0.3,
            dim: 3,
            separation: 2.0,
            seed: 5,
        });
        let train_rows: Vec<usize> = (0..300).filter(|r| r % 3 != 0).collect();
        let val: Vec<usize> = (0..300).filter(|r| r % 3 == 0).collect();
        let models: Vec<TrainedModel> = ClassifierKind::defaults().iter().map(|k| train(k, &d, &train_rows, 1).unwrap()).collect();
        let (e, all) = select_top3(models, &d, &val).unwrap();
        assert_eq!(e.members.len(), 3);
        let mut sorted = all.clone();
        sorted.sort_by(rank);
        assert_eq!(e.selection_scores, sorted[..3].to_vec());
        assert!(e.selection_scores.windows(2).all(|w| w[0].auc >= w[1].auc));
        let too_few: Vec<TrainedModel> = e.members;
        assert!(matches!(select_top3(too_few[..2].to_vec(), &d, &val), Err(Error::TooFewModels(2))));
    }
}
