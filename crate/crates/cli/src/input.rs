//! Reading tensors, hypercubes and certificates from files.
//!
//! JSON objects are told apart by their keys: `"kind": "latin"` marks a
//! hypercube, `"terms"` a certificate, anything else a tensor. Files that are
//! not JSON are read as the text form of a Latin hypercube.

use std::fs;

use polystoch::{latin, Error, HullCertificate, LatinHypercube, Result, Tensor};
use serde_json::Value;

pub enum Object {
    Tensor(Tensor),
    Latin(LatinHypercube),
    Certificate(HullCertificate),
}

pub fn read(path: &str) -> Result<Object> {
    let text = if path == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        fs::read_to_string(path)
    }
    .map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    parse(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

pub fn parse(text: &str) -> Result<Object> {
    if !text.trim_start().starts_with('{') {
        return LatinHypercube::from_text(text).map(Object::Latin);
    }
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if value.get("terms").is_some() {
        HullCertificate::from_json(text).map(Object::Certificate)
    } else if value.get("kind").and_then(Value::as_str) == Some("latin") {
        LatinHypercube::from_json(text).map(Object::Latin)
    } else {
        Tensor::from_json(text).map(Object::Tensor)
    }
}

/// A hypercube is read as its permutation matrix.
pub fn tensor(path: &str) -> Result<Tensor> {
    match read(path)? {
        Object::Tensor(t) => Ok(t),
        Object::Latin(h) => Ok(latin::p_of_h(&h)),
        Object::Certificate(_) => Err(Error::Parse(format!("{path}: expected a tensor, found a certificate"))),
    }
}

/// A 1-permutation matrix is read as its hypercube.
pub fn hypercube(path: &str) -> Result<LatinHypercube> {
    match read(path)? {
        Object::Latin(h) => Ok(h),
        Object::Tensor(t) => latin::h_of_p(&t),
        Object::Certificate(_) => Err(Error::Parse(format!("{path}: expected a hypercube, found a certificate"))),
    }
}

pub fn certificate(path: &str) -> Result<HullCertificate> {
    match read(path)? {
        Object::Certificate(c) => Ok(c),
        _ => Err(Error::Parse(format!("{path}: expected a certificate"))),
    }
}
