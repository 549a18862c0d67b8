//! Text and JSON forms of Latin hypercubes.
//!
//! Text form: one row per line, symbols `0-9` then `a-z`. Consecutive
//! layers are separated by a blank line, blocks of layers along the next
//! axis by two blank lines, and so on. Rows may instead list decimal
//! symbols separated by whitespace, which also covers orders above 36.

use serde::{Deserialize, Serialize};

use super::LatinHypercube;
use crate::error::{Error, Result};

const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

fn symbol_char(s: usize) -> char {
    DIGITS[s] as char
}

fn char_symbol(c: char) -> Option<usize> {
    let c = c.to_ascii_lowercase();
    DIGITS.iter().position(|&d| d as char == c)
}

impl LatinHypercube {
    pub fn to_text(&self) -> String {
        let n = self.order;
        let wide = n > DIGITS.len();
        let mut out = String::new();
        for (r, row) in self.symbols.chunks(n).enumerate() {
            if r > 0 && self.dim > 2 {
                let mut blanks = 0;
                let mut q = r;
                while q % n == 0 && blanks < self.dim - 2 {
                    blanks += 1;
                    q /= n;
                }
                for _ in 0..blanks {
                    out.push('\n');
                }
            }
            if wide {
                let parts: Vec<String> = row.iter().map(usize::to_string).collect();
                out.push_str(&parts.join(" "));
            } else {
                out.extend(row.iter().map(|&s| symbol_char(s)));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text form; the dimension is inferred from the row count.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<usize>> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = if line.contains(char::is_whitespace) {
                line.split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad symbol {t:?}"))))
                    .collect::<Result<Vec<_>>>()?
            } else {
                line.chars()
                    .map(|c| char_symbol(c).ok_or_else(|| Error::Parse(format!("bad symbol {c:?}"))))
                    .collect::<Result<Vec<_>>>()?
            };
            rows.push(row);
        }
        let n = rows.first().map(Vec::len).ok_or_else(|| Error::Parse("empty hypercube".into()))?;
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Parse(format!("row of length {} in a hypercube of order {n}", r.len())));
        }
        let mut dim = 1;
        let mut count = rows.len();
        while count > 1 {
            if n < 2 || !count.is_multiple_of(n) {
                return Err(Error::Parse(format!("{} rows is not a power of the order {n}", rows.len())));
            }
            count /= n;
            dim += 1;
        }
        LatinHypercube::new(dim, n, rows.concat())
    }
}

#[derive(Serialize, Deserialize)]
struct LatinJson {
    kind: String,
    dim: usize,
    order: usize,
    entries: Vec<usize>,
}

impl Serialize for LatinHypercube {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        LatinJson { kind: "latin".into(), dim: self.dim, order: self.order, entries: self.symbols.clone() }
            .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for LatinHypercube {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = LatinJson::deserialize(de)?;
        if raw.kind != "latin" {
            return Err(D::Error::custom(format!("expected kind \"latin\", found {:?}", raw.kind)));
        }
        LatinHypercube::new(raw.dim, raw.order, raw.entries).map_err(D::Error::custom)
    }
}

impl LatinHypercube {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("hypercube serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latin::{cyclic, linear_hypercube};
    use proptest::prelude::*;

    #[test]
    fn square_text() {
        let c = cyclic(2, 3).unwrap();
        assert_eq!(c.to_text(), "012\n120\n201\n");
        assert_eq!(LatinHypercube::from_text("012\n120\n201\n").unwrap(), c);
    }

    #[test]
    fn cube_layers_are_blank_separated() {
        let c = cyclic(3, 2).unwrap();
        assert_eq!(c.to_text(), "01\n10\n\n10\n01\n");
        let c4 = cyclic(4, 2).unwrap();
        assert!(c4.to_text().contains("\n\n\n"));
        assert_eq!(LatinHypercube::from_text(&c4.to_text()).unwrap(), c4);
    }

    #[test]
    fn wide_orders_use_decimal_tokens() {
        let c = cyclic(2, 40).unwrap();
        let t = c.to_text();
        assert!(t.starts_with("0 1 2"));
        assert_eq!(LatinHypercube::from_text(&t).unwrap(), c);
    }

    #[test]
    fn parse_errors() {
        assert!(LatinHypercube::from_text("").is_err());
        assert!(LatinHypercube::from_text("01\n1\n").is_err());
        assert!(LatinHypercube::from_text("012\n120\n").is_err());
        assert!(matches!(LatinHypercube::from_text("00\n11\n"), Err(Error::NotLatin(_))));
        assert!(LatinHypercube::from_text("0?\n?0\n").is_err());
    }

    #[test]
    fn json_kind_is_checked() {
        let c = cyclic(2, 4).unwrap();
        let js = c.to_json();
        assert!(js.contains("\"kind\":\"latin\""));
        assert_eq!(LatinHypercube::from_json(&js).unwrap(), c);
        assert!(LatinHypercube::from_json(r#"{"kind":"tensor","dim":1,"order":1,"entries":[0]}"#).is_err());
    }

    proptest! {
        #[test]
        fn text_and_json_round_trip(k in 1usize..4, n in 2usize..6, shift in 0i64..6, c0 in 0usize..3) {
            let units: Vec<i64> = (1..n as i64).filter(|c| num_integer::gcd(*c, n as i64) == 1).collect();
            let coeffs: Vec<i64> = (0..k).map(|i| units[(c0 + i) % units.len()]).collect();
            let h = linear_hypercube(k, n, shift, &coeffs).unwrap();
            prop_assert_eq!(LatinHypercube::from_text(&h.to_text()).unwrap(), h.clone());
            prop_assert_eq!(LatinHypercube::from_json(&h.to_json()).unwrap(), h);
        }
    }
}
