use thiserror::Error;

#[derive(Debug, Error)]
pub enum HiveError {
    #[error("hive was built without a lookup table")]
    TableNotBuilt,
    #[error("grid coordinate {x} is outside the lookup table (width {width})")]
    OutOfTable { x: u32, width: u32 },
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: expected {expected} fields, found {found}")]
    FieldCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: cannot parse {field} value {text:?}")]
    BadNumber {
        line: usize,
        field: &'static str,
        text: String,
    },
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
