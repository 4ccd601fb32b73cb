use std::io::{Read, Write};

use rand::Rng;

use super::PopulationModel;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rng::{Seed, Substream};

/// An observed `n × K` data matrix, optionally with ground-truth labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    data: Matrix,
    labels: Option<Vec<usize>>,
    normalized: bool,
}

impl SampleMatrix {
    /// Wraps raw 0/1 data.
    pub fn from_bits(data: Matrix, labels: Option<Vec<usize>>) -> Result<Self> {
        if let Some((i, x)) = data
            .as_slice()
            .iter()
            .enumerate()
            .find(|(_, &x)| x != 0.0 && x != 1.0)
        {
            return Err(Error::InvalidInput(format!(
                "raw sample entry {i} is {x}, expected 0 or 1"
            )));
        }
        Self::check_labels(&data, labels.as_deref())?;
        Ok(SampleMatrix {
            data,
            labels,
            normalized: false,
        })
    }

    /// Wraps real raw-scale data such as an expected matrix. Entries must lie
    /// in `[0, 1]`.
    pub fn from_probabilities(data: Matrix, labels: Option<Vec<usize>>) -> Result<Self> {
        if !data.is_finite() || data.as_slice().iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::InvalidInput("raw entries must lie in [0, 1]".into()));
        }
        Self::check_labels(&data, labels.as_deref())?;
        Ok(SampleMatrix {
            data,
            labels,
            normalized: false,
        })
    }

    /// Wraps already-normalized real data. Entries must lie in `[1/2, 1]`.
    pub fn from_normalized(data: Matrix, labels: Option<Vec<usize>>) -> Result<Self> {
        if !data.is_finite() || data.as_slice().iter().any(|&x| !(0.5..=1.0).contains(&x)) {
            return Err(Error::InvalidInput(
                "normalized entries must lie in [1/2, 1]".into(),
            ));
        }
        Self::check_labels(&data, labels.as_deref())?;
        Ok(SampleMatrix {
            data,
            labels,
            normalized: true,
        })
    }

    fn check_labels(data: &Matrix, labels: Option<&[usize]>) -> Result<()> {
        match labels {
            Some(l) if l.len() != data.rows() => Err(Error::InvalidInput(format!(
                "{} labels for {} rows",
                l.len(),
                data.rows()
            ))),
            _ => Ok(()),
        }
    }

    pub fn data(&self) -> &Matrix {
        &self.data
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn individuals(&self) -> usize {
        self.data.rows()
    }

    pub fn features(&self) -> usize {
        self.data.cols()
    }

    /// The sample restricted to the listed feature columns.
    pub fn select_features(&self, features: &[usize]) -> Result<SampleMatrix> {
        Ok(SampleMatrix {
            data: self.data.select_columns(features)?,
            labels: self.labels.clone(),
            normalized: self.normalized,
        })
    }

    /// The sample restricted to the listed individuals, labels permuted alike.
    pub fn select_individuals(&self, rows: &[usize]) -> Result<SampleMatrix> {
        Ok(SampleMatrix {
            data: self.data.select_rows(rows)?,
            labels: self
                .labels
                .as_ref()
                .map(|l| rows.iter().map(|&r| l[r]).collect()),
            normalized: self.normalized,
        })
    }

    /// Per-column means over the rows whose label is `population`.
    pub fn column_means(&self, population: usize) -> Option<Vec<f64>> {
        let labels = self.labels.as_ref()?;
        let mut sums = vec![0.0; self.features()];
        let mut count = 0usize;
        for (i, &l) in labels.iter().enumerate() {
            if l == population {
                count += 1;
                for (s, x) in sums.iter_mut().zip(self.data.row(i)) {
                    *s += x;
                }
            }
        }
        (count > 0).then(|| sums.into_iter().map(|s| s / count as f64).collect())
    }

    /// Writes the sample as CSV: header `f0..f{K-1}` plus `label` when present.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (0..self.features()).map(|j| format!("f{j}")).collect();
        if self.labels.is_some() {
            header.push("label".into());
        }
        w.write_record(&header)?;
        let mut record: Vec<String> = Vec::with_capacity(header.len());
        for i in 0..self.individuals() {
            record.clear();
            record.extend(self.data.row(i).iter().map(|&x| {
                if self.normalized {
                    format!("{x}")
                } else {
                    format!("{}", x as u8)
                }
            }));
            if let Some(l) = &self.labels {
                record.push(l[i].to_string());
            }
            w.write_record(&record)?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(())
    }

    /// Reads a raw 0/1 sample written by [`SampleMatrix::write_csv`]. A final
    /// column named `label` is taken as ground truth.
    pub fn read_csv<R: Read>(input: R) -> Result<SampleMatrix> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.clone();
        let has_label = header.iter().next_back() == Some("label");
        let features = header.len() - usize::from(has_label);
        if features == 0 {
            return Err(Error::Parse("sample has no feature columns".into()));
        }
        let mut data = Vec::new();
        let mut labels = Vec::new();
        let mut rows = 0usize;
        for (line, rec) in r.records().enumerate() {
            let rec = rec?;
            if rec.len() != header.len() {
                return Err(Error::Parse(format!(
                    "row {} has {} fields, expected {}",
                    line + 1,
                    rec.len(),
                    header.len()
                )));
            }
            for field in rec.iter().take(features) {
                let x: f64 = field.trim().parse().map_err(|_| {
                    Error::Parse(format!("row {}: cannot parse '{field}'", line + 1))
                })?;
                data.push(x);
            }
            if has_label {
                let field = &rec[features];
                labels.push(
                    field.trim().parse::<usize>().map_err(|_| {
                        Error::Parse(format!("row {}: bad label '{field}'", line + 1))
                    })?,
                );
            }
            rows += 1;
        }
        if rows == 0 {
            return Err(Error::Parse("sample has no rows".into()));
        }
        SampleMatrix::from_bits(
            Matrix::from_vec(rows, features, data)?,
            has_label.then_some(labels),
        )
    }
}

/// Draws one sample from `model`: row block `t` holds i.i.d.
/// `Bernoulli(p_t^i)` entries. Row `r` uses the substream `(seed, r)`.
pub fn sample(model: &PopulationModel, seed: Seed) -> SampleMatrix {
    let features = model.features();
    let labels = model.labels();
    let root = Substream::new(seed);
    let mut data = Vec::with_capacity(labels.len() * features);
    for (r, &t) in labels.iter().enumerate() {
        let mut rng = root.child(r as u64).rng();
        let probs = model.row(t);
        data.extend(
            probs
                .iter()
                .map(|&p| if rng.random::<f64>() < p { 1.0 } else { 0.0 }),
        );
    }
    SampleMatrix {
        data: Matrix::from_vec(labels.len(), features, data).expect("model has rows and features"),
        labels: Some(labels),
        normalized: false,
    }
}

/// Maps every raw bit `b` to `(b + 1)/2`.
pub fn normalize(s: &SampleMatrix) -> Result<SampleMatrix> {
    if s.normalized {
        return Err(Error::InvalidState("sample is already normalized".into()));
    }
    Ok(SampleMatrix {
        data: s.data.map(|b| (b + 1.0) / 2.0),
        labels: s.labels.clone(),
        normalized: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::popmodel::two_block_model;

    #[test]
    fn constant_models() {
        let ones = PopulationModel::new(vec![vec![1.0; 6]; 2], vec![2, 3]).unwrap();
        let s = sample(&ones, 1);
        assert!(s.data().as_slice().iter().all(|&x| x == 1.0));
        let zeros = PopulationModel::new(vec![vec![0.0; 6]; 2], vec![2, 3]).unwrap();
        assert!(sample(&zeros, 1)
            .data()
            .as_slice()
            .iter()
            .all(|&x| x == 0.0));
    }

    #[test]
    fn deterministic_bits_match_probabilities() {
        let m = two_block_model(1.0, 0.0, 8, 5).unwrap();
        let s = sample(&m, 3);
        for t in 0..2 {
            assert_eq!(s.column_means(t).unwrap(), m.row(t));
        }
    }

    #[test]
    fn reproducible_and_seed_sensitive() {
        let m = two_block_model(0.2, 0.02, 40, 10).unwrap();
        assert_eq!(sample(&m, 5), sample(&m, 5));
        assert_ne!(sample(&m, 5), sample(&m, 6));
    }

    #[test]
    fn normalize_maps_bits_and_rejects_twice() {
        let data = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let s = SampleMatrix::from_bits(data, Some(vec![0, 1])).unwrap();
        let x = normalize(&s).unwrap();
        assert_eq!(x.data().as_slice(), &[0.5, 1.0, 1.0, 1.0]);
        assert_eq!(x.labels(), Some(&[0usize, 1][..]));
        assert!(x.is_normalized());
        assert!(matches!(normalize(&x), Err(Error::InvalidState(_))));
    }

    #[test]
    fn rejects_non_bits() {
        let data = Matrix::from_rows(&[vec![0.0, 0.5]]).unwrap();
        assert!(SampleMatrix::from_bits(data, None).is_err());
        let data = Matrix::from_rows(&[vec![0.0, 1.0]]).unwrap();
        assert!(SampleMatrix::from_bits(data, Some(vec![0, 1])).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let m = two_block_model(0.3, 0.0, 6, 3).unwrap();
        let s = sample(&m, 11);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("f0,f1,f2,f3,f4,f5,label\n"));
        assert_eq!(SampleMatrix::read_csv(&buf[..]).unwrap(), s);
    }

    #[test]
    fn csv_without_labels() {
        let text = "f0,f1\n0,1\n1,1\n";
        let s = SampleMatrix::read_csv(text.as_bytes()).unwrap();
        assert!(s.labels().is_none());
        assert_eq!(s.individuals(), 2);
        assert!(SampleMatrix::read_csv("f0,f1\n0,2\n".as_bytes()).is_err());
        assert!(SampleMatrix::read_csv("f0,f1\n".as_bytes()).is_err());
    }
}
