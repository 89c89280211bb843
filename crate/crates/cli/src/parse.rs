//! Polynomial text: `x1..xN`, integers, `+ - * ^` and parentheses.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := INT | VAR ('^' SIGNED_INT)? | '(' expr ')'
//! ```

use bettibound::polytope::LaurentPolynomial;
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("variable x{index} at offset {offset} is outside x1..x{nvars}")]
    VariableOutOfRange { index: usize, nvars: usize, offset: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(v) => format!("integer {v}"),
        Tok::Var(i) => format!("variable x{i}"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Caret => "'^'".into(),
        Tok::Open => "'('".into(),
        Tok::Close => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect::<String>()
    };
    while i < chars.len() {
        let c = chars[i];
        let at = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::Open,
            ')' => Tok::Close,
            '0'..='9' => {
                let s = digits(&mut i);
                out.push((at, Tok::Int(s.parse().expect("digits"))));
                continue;
            }
            'x' | 'X' => {
                i += 1;
                let s = digits(&mut i);
                if s.is_empty() {
                    return Err(ParseError::Syntax { offset: at, message: "expected a variable index after 'x'".into() });
                }
                let index = s.parse().map_err(|_| ParseError::Syntax {
                    offset: at,
                    message: "variable index too large".into(),
                })?;
                out.push((at, Tok::Var(index)));
                continue;
            }
            other => {
                return Err(ParseError::Syntax { offset: at, message: format!("unexpected character {other:?}") })
            }
        };
        out.push((at, tok));
        i += 1;
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            message: format!("expected {wanted}, found {}", describe(self.peek())),
        })
    }

    fn expr(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(LaurentPolynomial::constant(self.nvars, v))
            }
            Tok::Var(index) => {
                self.bump();
                if index == 0 || index > self.nvars {
                    return Err(ParseError::VariableOutOfRange { index, nvars: self.nvars, offset: at });
                }
                let mut exp = 1i64;
                if *self.peek() == Tok::Caret {
                    self.bump();
                    exp = self.signed_int()?;
                }
                let mut e = vec![0i64; self.nvars];
                e[index - 1] = exp;
                Ok(LaurentPolynomial::monomial(self.nvars, 1, e))
            }
            Tok::Open => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::Close {
                    return self.unexpected("')'");
                }
                self.bump();
                Ok(inner)
            }
            _ => self.unexpected("an integer, a variable or '('"),
        }
    }

    fn signed_int(&mut self) -> Result<i64, ParseError> {
        let neg = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                let v: i64 = v.try_into().map_err(|_| ParseError::Syntax {
                    offset: at,
                    message: "exponent too large".into(),
                })?;
                Ok(if neg { -v } else { v })
            }
            _ => self.unexpected("an exponent"),
        }
    }
}

/// Parses `src` as a Laurent polynomial in `x1..x{nvars}`. Offsets in errors
/// count characters from zero.
pub fn parse_polynomial(src: &str, nvars: usize) -> Result<LaurentPolynomial, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0, nvars };
    let poly = p.expr()?;
    if *p.peek() != Tok::End {
        return p.unexpected("an operator or end of input");
    }
    Ok(poly)
}

/// Smallest `n` such that every variable in `src` lies in `x1..xn`.
pub fn variable_count(src: &str) -> Result<usize, ParseError> {
    Ok(lex(src)?
        .into_iter()
        .filter_map(|(_, t)| if let Tok::Var(i) = t { Some(i) } else { None })
        .max()
        .unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms(p: &LaurentPolynomial) -> Vec<(Vec<i64>, i64)> {
        p.terms().iter().map(|(e, c)| (e.clone(), i64::try_from(c).unwrap())).collect()
    }

    #[test]
    fn examples() {
        let p = parse_polynomial("x1^2*x2 - 3", 2).unwrap();
        assert_eq!(terms(&p), vec![(vec![0, 0], -3), (vec![2, 1], 1)]);
        let p = parse_polynomial("x1^-1 + x1", 1).unwrap();
        assert_eq!(terms(&p), vec![(vec![-1], 1), (vec![1], 1)]);
        let err = parse_polynomial("x1 + + x2", 2).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 5, .. }), "{err}");
    }

    #[test]
    fn collects_and_drops_zero_terms() {
        let p = parse_polynomial("x1*x2 - x2*x1 + 2*(x1 + 1) - 2", 2).unwrap();
        assert_eq!(terms(&p), vec![(vec![1, 0], 2)]);
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_polynomial("x3", 2).unwrap_err(),
            ParseError::VariableOutOfRange { index: 3, nvars: 2, offset: 0 }
        );
        assert!(matches!(parse_polynomial("x0", 2), Err(ParseError::VariableOutOfRange { .. })));
        assert!(matches!(parse_polynomial("(x1", 1), Err(ParseError::Syntax { offset: 3, .. })));
        assert!(matches!(parse_polynomial("x1 x2", 2), Err(ParseError::Syntax { offset: 3, .. })));
        assert!(matches!(parse_polynomial("2 $ 3", 2), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_polynomial("x1^", 1), Err(ParseError::Syntax { offset: 3, .. })));
        assert!(parse_polynomial("", 1).is_err());
    }

    #[test]
    fn leading_sign_and_big_integers() {
        let p = parse_polynomial("-x1 + 123456789012345678901234567890", 1).unwrap();
        assert_eq!(p.to_string(), "-x1 + 123456789012345678901234567890");
        assert_eq!(variable_count("x1 + x7^2").unwrap(), 7);
    }
}
