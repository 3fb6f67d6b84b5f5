//! Dataset, model encoding and objective types, plus CSV ingestion.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Predictor matrix, response vector and column labels.
///
/// Predictors are stored column-major so that the columns selected by a
/// [`ModelMask`] can be copied out as contiguous slices.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    x: DMatrix<f64>,
    y: DVector<f64>,
    names: Vec<String>,
}

impl Dataset {
    pub fn new(x: DMatrix<f64>, y: DVector<f64>, names: Vec<String>) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(Error::Dimension(format!(
                "{} predictor rows but {} responses",
                x.nrows(),
                y.len()
            )));
        }
        if x.ncols() != names.len() {
            return Err(Error::Dimension(format!(
                "{} predictor columns but {} names",
                x.ncols(),
                names.len()
            )));
        }
        if y.len() < 2 {
            return Err(Error::TooFewRows { min: 2, found: y.len() });
        }
        if x.ncols() == 0 {
            return Err(Error::InvalidParameter("dataset needs at least one predictor".into()));
        }
        if let Some(j) = (0..x.ncols()).find(|&j| x.column(j).iter().any(|v| !v.is_finite())) {
            return Err(Error::NonFinite(format!("predictor {:?}", names[j])));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("response".into()));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
        }
        Ok(Self { x, y, names })
    }

    /// Builds a dataset from predictor columns.
    pub fn from_columns(columns: Vec<Vec<f64>>, y: Vec<f64>, names: Vec<String>) -> Result<Self> {
        let n = y.len();
        if let Some(c) = columns.iter().find(|c| c.len() != n) {
            return Err(Error::Dimension(format!(
                "column of length {} against {} responses",
                c.len(),
                n
            )));
        }
        let k = columns.len();
        let flat: Vec<f64> = columns.into_iter().flatten().collect();
        Self::new(DMatrix::from_vec(n, k, flat), DVector::from_vec(y), names)
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn k(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, j: usize) -> &[f64] {
        let n = self.n();
        &self.x.as_slice()[j * n..(j + 1) * n]
    }

    /// Dataset restricted to the given predictor columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Dataset> {
        if let Some(&j) = columns.iter().find(|&&j| j >= self.k()) {
            return Err(Error::Dimension(format!("column {j} out of range for K={}", self.k())));
        }
        let cols = columns.iter().map(|&j| self.column(j).to_vec()).collect();
        let names = columns.iter().map(|&j| self.names[j].clone()).collect();
        Dataset::from_columns(cols, self.y.as_slice().to_vec(), names)
    }

    /// Dataset restricted to the first `k` predictor columns.
    pub fn truncate_predictors(&self, k: usize) -> Result<Dataset> {
        let cols: Vec<usize> = (0..k.min(self.k())).collect();
        self.select_columns(&cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Result<Dataset> {
        if let Some(&i) = rows.iter().find(|&&i| i >= self.n()) {
            return Err(Error::Dimension(format!("row {i} out of range for n={}", self.n())));
        }
        let x = self.x.select_rows(rows);
        let y = self.y.select_rows(rows);
        Dataset::new(x, y, self.names.clone())
    }

    /// Writes the response followed by every predictor, with a header row.
    /// Numbers use the shortest decimal form that round-trips exactly.
    pub fn write_csv(&self, path: impl AsRef<Path>, target: &str) -> Result<()> {
        let path = path.as_ref();
        let io_err = |source| Error::Io { path: path.to_path_buf(), source };
        let file = File::create(path).map_err(io_err)?;
        let mut out = std::io::BufWriter::new(file);
        self.write_csv_to(&mut out, target).map_err(io_err)?;
        out.flush().map_err(io_err)
    }

    pub fn write_csv_to(&self, out: &mut impl Write, target: &str) -> std::io::Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let header = std::iter::once(target).chain(self.names.iter().map(String::as_str));
        wtr.write_record(header)?;
        let mut record = Vec::with_capacity(self.k() + 1);
        for i in 0..self.n() {
            record.clear();
            record.push(self.y[i].to_string());
            record.extend((0..self.k()).map(|j| self.x[(i, j)].to_string()));
            wtr.write_record(&record)?;
        }
        wtr.flush()
    }
}

/// Reads a numeric CSV file. The `target` column becomes the response and the
/// remaining columns, in file order, become predictors.
///
/// Without a header row, predictors are named `x1..xK` and `target` must be a
/// 1-based column index.
pub fn load_csv(path: impl AsRef<Path>, target: &str, header: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    read_csv(file, target, header)
}

pub fn read_csv(input: impl std::io::Read, target: &str, header: bool) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(input);
    let mut records = rdr.records();

    let (columns, target_idx) = if header {
        let head = match records.next() {
            Some(r) => r?,
            None => return Err(Error::TooFewRows { min: 2, found: 0 }),
        };
        let columns: Vec<String> = head.iter().map(str::to_string).collect();
        let mut seen = HashSet::new();
        for c in &columns {
            if !seen.insert(c.as_str()) {
                return Err(Error::DuplicateColumn(c.clone()));
            }
        }
        let idx = columns
            .iter()
            .position(|c| c == target)
            .ok_or_else(|| Error::MissingTarget(target.to_string()))?;
        (Some(columns), idx)
    } else {
        let idx = target
            .parse::<usize>()
            .ok()
            .filter(|&i| i >= 1)
            .ok_or_else(|| Error::MissingTarget(target.to_string()))?;
        (None, idx - 1)
    };

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = columns.as_ref().map(Vec::len);
    for record in records {
        let record = record?;
        let row_no = rows.len() + 1;
        let w = *width.get_or_insert(record.len());
        if target_idx >= w {
            return Err(Error::MissingTarget(target.to_string()));
        }
        if record.len() != w {
            return Err(Error::Dimension(format!(
                "row {row_no} has {} fields, expected {w}",
                record.len()
            )));
        }
        let mut values = Vec::with_capacity(w);
        for (j, cell) in record.iter().enumerate() {
            let v = cell.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                let column = match &columns {
                    Some(c) => c[j].clone(),
                    None => format!("#{}", j + 1),
                };
                Error::Parse { row: row_no, column, value: cell.to_string() }
            })?;
            values.push(v);
        }
        rows.push(values);
    }
    if rows.len() < 2 {
        return Err(Error::TooFewRows { min: 2, found: rows.len() });
    }
    let w = width.unwrap_or(0);
    let names: Vec<String> = match columns {
        Some(c) => c.into_iter().enumerate().filter(|&(j, _)| j != target_idx).map(|(_, c)| c).collect(),
        None => (1..w).map(|j| format!("x{j}")).collect(),
    };
    let n = rows.len();
    let y: Vec<f64> = rows.iter().map(|r| r[target_idx]).collect();
    let predictor_cols: Vec<usize> = (0..w).filter(|&j| j != target_idx).collect();
    let x = DMatrix::from_fn(n, predictor_cols.len(), |i, c| rows[i][predictor_cols[c]]);
    Dataset::new(x, DVector::from_vec(y), names)
}

/// Bit mask over the predictor columns; bit `k` set means predictor `k` is
/// in the model. The intercept is implicit and always present.
///
/// Ordering is lexicographic on the bit string read left to right, with
/// `0 < 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModelMask(Vec<bool>);

impl ModelMask {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn empty(k: usize) -> Self {
        Self(vec![false; k])
    }

    pub fn full(k: usize) -> Self {
        Self(vec![true; k])
    }

    pub fn from_indices(k: usize, selected: &[usize]) -> Self {
        let mut bits = vec![false; k];
        for &j in selected {
            bits[j] = true;
        }
        Self(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, j: usize) -> bool {
        self.0[j]
    }

    pub fn set(&mut self, j: usize, value: bool) {
        self.0[j] = value;
    }

    pub fn flip(&mut self, j: usize) {
        self.0[j] = !self.0[j];
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// Indices of the selected predictors, ascending.
    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j).collect()
    }

    pub fn is_subset_of(&self, other: &ModelMask) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| !a || b)
    }

    /// Number of positions where the two masks differ.
    pub fn hamming(&self, other: &ModelMask) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl fmt::Display for ModelMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for ModelMask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidParameter(format!("mask character {other:?} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(ModelMask)
    }
}

/// Model complexity: the number of selected predictors, plus one when the
/// intercept is counted as a coefficient.
pub fn mask_complexity(mask: &ModelMask, count_intercept: bool) -> usize {
    mask.count_ones() + usize::from(count_intercept)
}

/// The two minimized objectives of a candidate model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObjectiveVector {
    /// Number of selected predictors (intercept excluded).
    pub complexity: usize,
    /// In-sample or cross-validated mean squared error.
    pub error: f64,
}

impl ObjectiveVector {
    pub fn new(complexity: usize, error: f64) -> Self {
        Self { complexity, error }
    }
}

/// A mask together with its fitted least-squares model and objectives.
/// `coefficients` follow the order of the mask's set bits.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluatedModel {
    pub mask: ModelMask,
    pub objective: ObjectiveVector,
    pub intercept: f64,
    pub coefficients: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str, target: &str) -> Result<Dataset> {
        read_csv(text.as_bytes(), target, true)
    }

    #[test]
    fn three_row_file_maps_target_out_of_predictors() {
        let d = read("a,b,y\n1,2,3\n4,5,6\n7,8,9.5\n", "y").unwrap();
        assert_eq!((d.n(), d.k()), (3, 2));
        assert_eq!(d.names(), ["a", "b"]);
        assert_eq!(d.column(1), [2.0, 5.0, 8.0]);
        assert_eq!(d.y().as_slice(), [3.0, 6.0, 9.5]);
    }

    #[test]
    fn target_in_the_middle_preserves_column_order() {
        let d = read("a,y,b\n1,2,3\n4,5,6e-1\n", "y").unwrap();
        assert_eq!(d.names(), ["a", "b"]);
        assert_eq!(d.column(1), [3.0, 0.6]);
    }

    #[test]
    fn empty_cell_names_row_and_column() {
        let err = read("a,b,y\n1,2,3\n4,,6\n", "y").unwrap_err();
        match err {
            Error::Parse { row, ref column, .. } => {
                assert_eq!(row, 2);
                assert_eq!(column, "b");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("row 2"));
    }

    #[test]
    fn non_finite_cells_are_rejected() {
        assert!(matches!(read("a,y\n1,2\nNaN,3\n", "y"), Err(Error::Parse { .. })));
        assert!(matches!(read("a,y\n1,2\ninf,3\n", "y"), Err(Error::Parse { .. })));
    }

    #[test]
    fn ingestion_errors() {
        assert!(matches!(read("a,b\n1,2\n3,4\n", "y"), Err(Error::MissingTarget(_))));
        assert!(matches!(read("a,a,y\n1,2,3\n3,4,5\n", "y"), Err(Error::DuplicateColumn(_))));
        assert!(matches!(read("a,y\n1,2\n", "y"), Err(Error::TooFewRows { found: 1, .. })));
        assert!(matches!(
            load_csv("/definitely/not/here.csv", "y", true),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn headerless_files_use_positional_target() {
        let d = read_csv("1,2,3\n4,5,6\n".as_bytes(), "2", false).unwrap();
        assert_eq!(d.names(), ["x1", "x2"]);
        assert_eq!(d.y().as_slice(), [2.0, 5.0]);
        assert_eq!(d.column(1), [3.0, 6.0]);
        assert!(read_csv("1,2\n3,4\n".as_bytes(), "y", false).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let d = Dataset::from_columns(
            vec![vec![0.1, 1.0 / 3.0, -2.5e-300], vec![std::f64::consts::PI, 1e22, 7.0]],
            vec![1.0 / 7.0, 0.0, -0.0],
            vec!["p".into(), "q".into()],
        )
        .unwrap();
        let mut buf = Vec::new();
        d.write_csv_to(&mut buf, "y").unwrap();
        let back = read_csv(buf.as_slice(), "y", true).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn dataset_invariants_enforced() {
        let names = vec!["a".to_string()];
        assert!(Dataset::from_columns(vec![vec![1.0]], vec![1.0], names.clone()).is_err());
        assert!(Dataset::from_columns(vec![vec![1.0, f64::NAN]], vec![1.0, 2.0], names.clone()).is_err());
        assert!(Dataset::from_columns(vec![], vec![1.0, 2.0], vec![]).is_err());
        assert!(Dataset::from_columns(
            vec![vec![1.0, 2.0], vec![3.0, 4.0]],
            vec![1.0, 2.0],
            vec!["a".into(), "a".into()]
        )
        .is_err());
    }

    #[test]
    fn mask_complexity_examples() {
        let m: ModelMask = "00000".parse().unwrap();
        assert_eq!(mask_complexity(&m, false), 0);
        let m: ModelMask = "10010".parse().unwrap();
        assert_eq!(mask_complexity(&m, false), 2);
        assert_eq!(mask_complexity(&ModelMask::full(25), true), 26);
    }

    #[test]
    fn mask_text_round_trip_and_order() {
        let m: ModelMask = "0110".parse().unwrap();
        assert_eq!(m.to_string(), "0110");
        assert_eq!(m.indices(), vec![1, 2]);
        assert!("012".parse::<ModelMask>().is_err());
        let a: ModelMask = "0011".parse().unwrap();
        let b: ModelMask = "0100".parse().unwrap();
        assert!(a < b);
    }

    proptest::proptest! {
        #[test]
        fn intercept_flag_adds_exactly_one(bits in proptest::collection::vec(proptest::bool::ANY, 0..64)) {
            let m = ModelMask::new(bits);
            proptest::prop_assert_eq!(mask_complexity(&m, false) + 1, mask_complexity(&m, true));
        }
    }
}
