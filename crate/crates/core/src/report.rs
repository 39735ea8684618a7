//! Format-neutral tabular output shared by every experiment.

/// One table cell. Integers are kept apart so they print without an exponent.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(i) => Some(i as f64),
            Cell::Real(x) => Some(x),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerdictValue {
    Bool(bool),
    Real(f64),
    Text(String),
}

impl From<bool> for VerdictValue {
    fn from(b: bool) -> Self {
        VerdictValue::Bool(b)
    }
}

impl From<f64> for VerdictValue {
    fn from(x: f64) -> Self {
        VerdictValue::Real(x)
    }
}

impl From<&str> for VerdictValue {
    fn from(s: &str) -> Self {
        VerdictValue::Text(s.to_string())
    }
}

/// Parameter header, named columns, rows and a verdict footer.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub params: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub verdicts: Vec<(String, VerdictValue)>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn param(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn verdict(&mut self, key: impl Into<String>, value: impl Into<VerdictValue>) -> &mut Self {
        self.verdicts.push((key.into(), value.into()));
        self
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[idx].as_f64()).collect()
    }
}
