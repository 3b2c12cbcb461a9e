//! Divisor expressions such as `2H - 3/2*E1 + E2`.
//!
//! ```text
//! expr     := [sign] term (sign term)*
//! term     := [rational ['*']] ident
//! rational := int | int '/' int
//! ```
//!
//! Whitespace is ignored everywhere; reported offsets index the expression
//! with whitespace removed.

use locpos::lattice::{DivisorClass, SurfaceModel};
use locpos::scalars::Rational;
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("expected {expected} at offset {offset}")]
    Syntax { offset: usize, expected: String },
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "ParseError",
            ParseError::UnknownSymbol(_) => "UnknownSymbol",
        }
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.pos,
            expected: expected.to_string(),
        })
    }

    fn int(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect::<String>().parse().expect("digits"))
    }

    fn ident(&mut self) -> Option<String> {
        let start = self.pos;
        if !self.peek().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') {
            return None;
        }
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') {
            self.pos += 1;
        }
        Some(self.chars[start..self.pos].iter().collect())
    }

    fn term(&mut self) -> Result<(Rational, String), ParseError> {
        let coeff = match self.int() {
            Some(n) => {
                let d = if self.peek() == Some('/') {
                    self.pos += 1;
                    let at = self.pos;
                    match self.int() {
                        Some(d) if !d.is_zero() => d,
                        Some(_) => {
                            return Err(ParseError::Syntax {
                                offset: at,
                                expected: "non-zero denominator".into(),
                            })
                        }
                        None => return self.fail("integer"),
                    }
                } else {
                    BigInt::from(1)
                };
                if self.peek() == Some('*') {
                    self.pos += 1;
                }
                Rational::new(n, d)
            }
            None => Rational::from_integer(1.into()),
        };
        match self.ident() {
            Some(name) => Ok((coeff, name)),
            None => self.fail("identifier"),
        }
    }
}

/// Parses into `(coefficient, symbol)` pairs without resolving symbols.
pub fn parse_terms(text: &str) -> Result<Vec<(Rational, String)>, ParseError> {
    let mut cur = Cursor {
        chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
    };
    if cur.chars.is_empty() {
        return cur.fail("term");
    }
    let mut out = Vec::new();
    let mut sign = match cur.peek() {
        Some('-') => {
            cur.pos += 1;
            -1
        }
        Some('+') => {
            cur.pos += 1;
            1
        }
        _ => 1,
    };
    loop {
        let (c, name) = cur.term()?;
        out.push((if sign < 0 { -c } else { c }, name));
        match cur.peek() {
            None => return Ok(out),
            Some('+') => sign = 1,
            Some('-') => sign = -1,
            Some(_) => return cur.fail("'+' or '-'"),
        }
        cur.pos += 1;
        if cur.peek().is_none() {
            return cur.fail("term");
        }
    }
}

/// Resolves symbols against basis labels first, then curve names.
pub fn parse_divisor(text: &str, model: &SurfaceModel) -> Result<DivisorClass, ParseError> {
    let mut d = DivisorClass::zero(model.rank());
    for (c, name) in parse_terms(text)? {
        let class = if let Some(i) = model.basis_index(&name) {
            DivisorClass::basis(model.rank(), i)
        } else if let Some(curve) = model.curve(&name) {
            curve.class.clone()
        } else {
            return Err(ParseError::UnknownSymbol(name));
        };
        d = d.add_scaled(&c, &class);
    }
    Ok(d)
}
