//! Insertion lists such as `tau(1):one, tau(0,2):h, h2`.

use gwdesc::{CurveClass, Error, GeometryModel, Insertion, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawInsertion {
    pub d: u32,
    pub e: u32,
    pub label: String,
    /// Byte offset of the label in the input.
    pub pos: usize,
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn int(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a non-negative integer");
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        text.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("integer {text} is too large"),
        })
    }

    fn word(&mut self) -> Result<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a basis label");
        }
        let w = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii word");
        Ok((w.to_string(), start))
    }
}

/// `tau(d):label`, `tau(d,e):label` or a bare `label` (meaning `tau(0)`),
/// separated by commas. The empty string is the empty list.
pub fn parse_insertions(text: &str) -> Result<Vec<RawInsertion>> {
    let mut c = Cursor { s: text.as_bytes(), pos: 0 };
    let mut out = Vec::new();
    c.skip_ws();
    if c.peek().is_none() {
        return Ok(out);
    }
    loop {
        let (word, start) = c.word()?;
        let item = if word == "tau" && c.eat(b'(') {
            let d = c.int()?;
            let e = if c.eat(b',') { c.int()? } else { 0 };
            c.expect(b')')?;
            c.expect(b':')?;
            let (label, pos) = c.word()?;
            RawInsertion { d, e, label, pos }
        } else {
            RawInsertion {
                d: 0,
                e: 0,
                label: word,
                pos: start,
            }
        };
        out.push(item);
        c.skip_ws();
        match c.peek() {
            None => return Ok(out),
            Some(b',') => c.pos += 1,
            Some(ch) => return c.err(format!("unexpected '{}'", ch as char)),
        }
    }
}

pub fn resolve(model: &GeometryModel, raw: &[RawInsertion]) -> Result<Vec<Insertion>> {
    raw.iter()
        .map(|r| {
            let a = model.index_of(&r.label).ok_or_else(|| Error::Parse {
                pos: r.pos,
                msg: format!("unknown label {:?} for model {}", r.label, model.name()),
            })?;
            Ok(Insertion::new(r.d, r.e, a))
        })
        .collect()
}

/// Comma-separated lattice coordinates; `0` or nothing for the zero class
/// of a trivial lattice.
pub fn parse_beta(model: &GeometryModel, text: &str) -> Result<CurveClass> {
    let parts: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let mut coords = Vec::with_capacity(parts.len());
    let mut offset = 0;
    for p in text.split(',') {
        let t = p.trim();
        if !t.is_empty() {
            let lead = p.len() - p.trim_start().len();
            coords.push(t.parse::<u32>().map_err(|_| Error::Parse {
                pos: offset + lead,
                msg: format!("curve class coordinate {t:?} is not a non-negative integer"),
            })?);
        }
        offset += p.len() + 1;
    }
    let rank = model.lattice_rank();
    if rank == 0 && coords.iter().all(|&x| x == 0) {
        return Ok(CurveClass::zero(0));
    }
    if coords.len() != rank {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("curve class needs {rank} coordinates, got {}", parts.len()),
        });
    }
    Ok(CurveClass(coords))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(d: u32, e: u32, label: &str, pos: usize) -> RawInsertion {
        RawInsertion {
            d,
            e,
            label: label.into(),
            pos,
        }
    }

    #[test]
    fn mixed_list() {
        let got = parse_insertions("tau(1):one, tau(0,2):h,h2").unwrap();
        assert_eq!(got, vec![raw(1, 0, "one", 7), raw(0, 2, "h", 21), raw(0, 0, "h2", 23)]);
        assert!(parse_insertions("  ").unwrap().is_empty());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_insertions("tau(1:h") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        match parse_insertions("tau(0):h,,h") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 9),
            other => panic!("{other:?}"),
        }
        match parse_insertions("tau(x):h") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn labels_resolve_against_the_model() {
        let f = gwdesc::fixtures::load_fixture("P1").unwrap();
        let ins = resolve(&f.model, &parse_insertions("tau(2):h,one").unwrap()).unwrap();
        assert_eq!(ins, vec![Insertion::new(2, 0, 1), Insertion::primary(0)]);
        match resolve(&f.model, &parse_insertions("h, tau(0):h3").unwrap()) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn curve_classes() {
        let f = gwdesc::fixtures::load_fixture("P1").unwrap();
        assert_eq!(parse_beta(&f.model, "3").unwrap(), CurveClass(vec![3]));
        assert!(parse_beta(&f.model, "1,2").is_err());
        match parse_beta(&f.model, " x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 1),
            other => panic!("{other:?}"),
        }
        let pt = gwdesc::fixtures::load_fixture("point").unwrap();
        assert_eq!(parse_beta(&pt.model, "0").unwrap(), CurveClass::zero(0));
    }
}
