use nalgebra::DMatrix;
use serde_json::Value;
use std::fmt::Write as _;

/// A command result in both renderings.
pub struct Output {
    pub json: Value,
    pub text: String,
}

impl Output {
    pub fn new(json: Value, text: String) -> Self {
        Output { json, text }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

/// Row-major nested arrays.
pub fn matrix_json(m: &DMatrix<f64>) -> Value {
    Value::from((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect::<Vec<f64>>()).collect::<Vec<_>>())
}

pub fn matrix_table(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let _ = write!(out, "{:>21.12e}", m[(i, j)]);
        }
        out.push('\n');
    }
    out
}
