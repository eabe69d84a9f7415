use crate::dataset::LabeledDataset;
use crate::error::{FagcError, Result};
use crate::preshape::{angle_between, check_same_dim, PreShape};

/// Majority label among the `k` geodesic-nearest training members.
///
/// Neighbors are ordered by distance, then by position in `train`. Vote ties
/// go to the label with the smaller mean neighbor distance, then to the
/// lexicographically smaller label.
pub fn knn_predict<'a>(train: &'a LabeledDataset, query: &PreShape, k: usize) -> Result<&'a str> {
    if train.is_empty() {
        return Err(FagcError::EmptyTrainingSet);
    }
    if k == 0 || k > train.len() {
        return Err(FagcError::InvalidConfig(format!(
            "k must lie in [1, {}], got {k}",
            train.len()
        )));
    }
    check_same_dim(train.dim().expect("non-empty"), query.dim())?;

    let mut neighbors: Vec<(f64, &str)> = train
        .iter()
        .map(|(label, m)| (angle_between(m.shape.coords(), query.coords()), label))
        .collect();
    // stable sort keeps dataset order among equal distances
    neighbors.sort_by(|a, b| a.0.total_cmp(&b.0));
    neighbors.truncate(k);

    let mut votes: Vec<(&str, usize, f64)> = Vec::new();
    for (d, label) in neighbors {
        match votes.iter_mut().find(|v| v.0 == label) {
            Some(v) => {
                v.1 += 1;
                v.2 += d;
            }
            None => votes.push((label, 1, d)),
        }
    }
    let winner = votes
        .into_iter()
        .min_by(|a, b| {
            b.1.cmp(&a.1)
                .then((a.2 / a.1 as f64).total_cmp(&(b.2 / b.1 as f64)))
                .then(a.0.cmp(b.0))
        })
        .expect("k >= 1");
    Ok(winner.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Provenance;

    fn at(t: f64) -> PreShape {
        PreShape::new(vec![t.cos(), t.sin()]).unwrap()
    }

    fn train() -> LabeledDataset {
        LabeledDataset::from_members(
            [
                ("b", at(0.0)),
                ("a", at(1.0)),
                ("b", at(0.1)),
                ("a", at(1.2)),
            ],
            Provenance::Real,
        )
        .unwrap()
    }

    #[test]
    fn exact_member_with_k1() {
        let ds = train();
        assert_eq!(knn_predict(&ds, &at(1.2), 1).unwrap(), "a");
        assert_eq!(knn_predict(&ds, &at(0.1), 1).unwrap(), "b");
    }

    #[test]
    fn equidistant_tie_uses_label_order() {
        let ds = LabeledDataset::from_members([("y", at(0.0)), ("x", at(1.0))], Provenance::Real)
            .unwrap();
        assert_eq!(knn_predict(&ds, &at(0.5), 2).unwrap(), "x");
    }

    #[test]
    fn vote_tie_uses_mean_distance() {
        // two votes each; "b" neighbors are closer on average
        assert_eq!(knn_predict(&train(), &at(0.3), 4).unwrap(), "b");
    }

    #[test]
    fn errors() {
        assert_eq!(
            knn_predict(&LabeledDataset::new(), &at(0.0), 1),
            Err(FagcError::EmptyTrainingSet)
        );
        assert!(matches!(
            knn_predict(&train(), &at(0.0), 5),
            Err(FagcError::InvalidConfig(_))
        ));
        assert!(matches!(
            knn_predict(&train(), &at(0.0), 0),
            Err(FagcError::InvalidConfig(_))
        ));
    }
}
