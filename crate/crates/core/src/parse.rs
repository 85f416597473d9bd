//! Parser for homogeneous polynomial expressions.
//!
//! Grammar (whitespace insignificant, no implicit multiplication):
//!
//! ```text
//! expression  := ['-'] term (('+'|'-') term)*
//! term        := factor ('*' factor)*
//! factor      := coefficient | variable ('^' integer)?
//! coefficient := integer | integer '/' integer
//! integer     := [0-9]+
//! ```
//!
//! The optional leading '-' closes the grammar under printing: a polynomial
//! whose leading coefficient is negative could not otherwise round-trip.
//! Variables are caller-declared identifiers; [`parse_with_default_vars`]
//! accepts the built-in aliases `x, y, z, w` (indices 0..3) and `x0`..`x9`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::field::Field;
use crate::poly::{HomPoly, Monomial, PolyError};

/// Position-annotated parse failure. Positions are byte offsets into the
/// input text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    EmptyInput,
    UnexpectedChar(char),
    /// Found the named token where a factor, operator, or end was expected.
    UnexpectedToken(String),
    UnexpectedEnd,
    UnknownVariable(String),
    ExponentTooLarge,
    /// Terms of two different total degrees.
    Inhomogeneous { first_degree: u32, found_degree: u32 },
    /// Coefficient has no image in the field (zero denominator mod p, or /0).
    CoefficientNotInField,
    /// F_p inputs require p to exceed the polynomial degree.
    CharacteristicTooSmall { p: u64, degree: u32 },
    NoVariables,
    DuplicateVariable(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: ", self.position)?;
        match &self.kind {
            ParseErrorKind::EmptyInput => write!(f, "empty input"),
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character '{c}'"),
            ParseErrorKind::UnexpectedToken(t) => {
                write!(f, "unexpected {t} (missing '*', '+', or '-'?)")
            }
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable '{v}'"),
            ParseErrorKind::ExponentTooLarge => write!(f, "exponent too large"),
            ParseErrorKind::Inhomogeneous {
                first_degree,
                found_degree,
            } => write!(
                f,
                "inhomogeneous input: term of degree {found_degree} after degree {first_degree}"
            ),
            ParseErrorKind::CoefficientNotInField => {
                write!(f, "coefficient is not an element of the field")
            }
            ParseErrorKind::CharacteristicTooSmall { p, degree } => write!(
                f,
                "field characteristic {p} must exceed the polynomial degree {degree}"
            ),
            ParseErrorKind::NoVariables => write!(f, "no variables declared"),
            ParseErrorKind::DuplicateVariable(v) => write!(f, "duplicate variable '{v}'"),
        }
    }
}

impl core::error::Error for ParseError {}

fn err<T>(position: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
    Err(ParseError { position, kind })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(s) => alloc::format!("integer '{s}'"),
            Tok::Ident(s) => alloc::format!("identifier '{s}'"),
            Tok::Plus => "'+'".to_string(),
            Tok::Minus => "'-'".to_string(),
            Tok::Star => "'*'".to_string(),
            Tok::Caret => "'^'".to_string(),
            Tok::Slash => "'/'".to_string(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((start, Tok::Int(text[start..i].to_string())));
            }
            _ if b.is_ascii_alphabetic() || b == b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => return err(i, ParseErrorKind::UnexpectedChar(text[i..].chars().next().unwrap())),
        }
    }
    Ok(toks)
}

struct Parser<'a, F: Field> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    field: &'a F,
    n_vars: usize,
    resolve: &'a dyn Fn(&str) -> Option<usize>,
}

impl<'a, F: Field> Parser<'a, F> {
    fn peek(&self) -> Option<&(usize, Tok)> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<&'a (usize, Tok)> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    /// coefficient := integer ('/' integer)?
    fn coefficient(&mut self, digits: &str, at: usize) -> Result<F::Elem, ParseError> {
        let num = self.field.from_decimal(digits);
        if matches!(self.peek(), Some((_, Tok::Slash))) {
            self.bump();
            match self.bump() {
                Some((dp, Tok::Int(d))) => {
                    let den = self.field.from_decimal(d);
                    self.field
                        .div(&num, &den)
                        .map_err(|_| ParseError {
                            position: *dp,
                            kind: ParseErrorKind::CoefficientNotInField,
                        })
                }
                Some((p, t)) => err(*p, ParseErrorKind::UnexpectedToken(t.describe())),
                None => err(self.end, ParseErrorKind::UnexpectedEnd),
            }
        } else {
            let _ = at;
            Ok(num)
        }
    }

    /// term := factor ('*' factor)*; returns (monomial exponents, coefficient).
    fn term(&mut self) -> Result<(Vec<u32>, F::Elem), ParseError> {
        let mut exps = alloc::vec![0u32; self.n_vars];
        let mut coeff = self.field.one();
        loop {
            match self.bump() {
                Some((p, Tok::Int(digits))) => {
                    let c = self.coefficient(digits, *p)?;
                    coeff = self.field.mul(&coeff, &c);
                }
                Some((p, Tok::Ident(name))) => {
                    let Some(idx) = (self.resolve)(name) else {
                        return err(*p, ParseErrorKind::UnknownVariable(name.clone()));
                    };
                    let mut e = 1u32;
                    if matches!(self.peek(), Some((_, Tok::Caret))) {
                        self.bump();
                        match self.bump() {
                            Some((ep, Tok::Int(d))) => {
                                e = d.parse::<u32>().map_err(|_| ParseError {
                                    position: *ep,
                                    kind: ParseErrorKind::ExponentTooLarge,
                                })?;
                                if e > 1_000_000 {
                                    return err(*ep, ParseErrorKind::ExponentTooLarge);
                                }
                            }
                            Some((p2, t)) => {
                                return err(*p2, ParseErrorKind::UnexpectedToken(t.describe()))
                            }
                            None => return err(self.end, ParseErrorKind::UnexpectedEnd),
                        }
                    }
                    exps[idx] += e;
                }
                Some((p, t)) => return err(*p, ParseErrorKind::UnexpectedToken(t.describe())),
                None => return err(self.end, ParseErrorKind::UnexpectedEnd),
            }
            if matches!(self.peek(), Some((_, Tok::Star))) {
                self.bump();
                continue;
            }
            break;
        }
        Ok((exps, coeff))
    }

    fn expression(&mut self) -> Result<Vec<(usize, Vec<u32>, F::Elem)>, ParseError> {
        let mut terms = Vec::new();
        let mut negate = false;
        if matches!(self.peek(), Some((_, Tok::Minus))) {
            self.bump();
            negate = true;
        }
        loop {
            let at = self.here();
            let (exps, mut coeff) = self.term()?;
            if negate {
                coeff = self.field.neg(&coeff);
            }
            terms.push((at, exps, coeff));
            match self.bump() {
                None => break,
                Some((_, Tok::Plus)) => negate = false,
                Some((_, Tok::Minus)) => negate = true,
                Some((p, t)) => return err(*p, ParseErrorKind::UnexpectedToken(t.describe())),
            }
        }
        Ok(terms)
    }
}

fn parse_internal<F: Field>(
    text: &str,
    resolve: &dyn Fn(&str) -> Option<usize>,
    n_vars: usize,
    field: F,
) -> Result<HomPoly<F>, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return err(0, ParseErrorKind::EmptyInput);
    }
    let mut parser = Parser {
        toks: &toks,
        pos: 0,
        end: text.len(),
        field: &field,
        n_vars,
        resolve,
    };
    let terms = parser.expression()?;
    let degree = terms[0].1.iter().sum::<u32>();
    for (at, exps, _) in &terms {
        let d: u32 = exps.iter().sum();
        if d != degree {
            return err(
                *at,
                ParseErrorKind::Inhomogeneous {
                    first_degree: degree,
                    found_degree: d,
                },
            );
        }
    }
    HomPoly::from_terms(
        field,
        n_vars,
        degree,
        terms
            .into_iter()
            .map(|(_, exps, c)| (Monomial::new(exps), c))
            .collect(),
    )
    .map_err(|e| match e {
        PolyError::CharacteristicTooSmall { p, degree } => ParseError {
            position: 0,
            kind: ParseErrorKind::CharacteristicTooSmall { p, degree },
        },
        other => unreachable!("homogeneity already checked: {other}"),
    })
}

/// Parse a homogeneous polynomial with explicitly declared variable names
/// (mapped to indices in declaration order).
pub fn parse_poly<F: Field>(
    text: &str,
    var_names: &[&str],
    field: F,
) -> Result<HomPoly<F>, ParseError> {
    if var_names.is_empty() {
        return err(0, ParseErrorKind::NoVariables);
    }
    for (i, a) in var_names.iter().enumerate() {
        if var_names[..i].contains(a) {
            return err(0, ParseErrorKind::DuplicateVariable((*a).to_string()));
        }
    }
    let resolve = |name: &str| var_names.iter().position(|v| *v == name);
    parse_internal(text, &resolve, var_names.len(), field)
}

fn alias_index(name: &str) -> Option<usize> {
    match name {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        "w" => Some(3),
        _ => {
            let digits = name.strip_prefix('x')?;
            if digits.len() == 1 && digits.as_bytes()[0].is_ascii_digit() {
                Some((digits.as_bytes()[0] - b'0') as usize)
            } else {
                None
            }
        }
    }
}

/// Parse using the default variable aliases `x, y, z, w` and `x0`..`x9`.
/// The variable count is the smallest prefix covering every index that
/// appears. Returns the polynomial together with the display names chosen.
pub fn parse_with_default_vars<F: Field>(
    text: &str,
    field: F,
) -> Result<(HomPoly<F>, Vec<String>), ParseError> {
    let toks = tokenize(text)?;
    let mut max_idx = 0usize;
    let mut saw_numbered = false;
    for (p, t) in &toks {
        if let Tok::Ident(name) = t {
            let Some(idx) = alias_index(name) else {
                return err(*p, ParseErrorKind::UnknownVariable(name.clone()));
            };
            max_idx = max_idx.max(idx);
            if name.len() > 1 {
                saw_numbered = true;
            }
        }
    }
    let n_vars = max_idx + 1;
    let poly = parse_internal(text, &|name| alias_index(name), n_vars, field)?;
    let names = if saw_numbered || n_vars > 4 {
        (0..n_vars).map(|i| alloc::format!("x{i}")).collect()
    } else {
        HomPoly::<F>::default_names(n_vars)
    };
    Ok((poly, names))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn parses_fermat_cubic() {
        let f = parse_poly("x^3 + y^3 + z^3", &["x", "y", "z"], Rationals).unwrap();
        assert_eq!(f.degree(), 3);
        assert_eq!(f.num_terms(), 3);
        assert_eq!(f.n_vars(), 3);
    }

    #[test]
    fn cancellation_keeps_degree() {
        let f = parse_poly("x*y - y*x", &["x", "y"], Rationals).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.degree(), 2);
    }

    #[test]
    fn inhomogeneous_rejected_with_position() {
        let e = parse_poly("x^2 + y^3", &["x", "y"], Rationals).unwrap_err();
        assert_eq!(e.position, 6);
        assert_eq!(
            e.kind,
            ParseErrorKind::Inhomogeneous {
                first_degree: 2,
                found_degree: 3
            }
        );
    }

    #[test]
    fn implicit_multiplication_rejected() {
        let e = parse_poly("3x", &["x"], Rationals).unwrap_err();
        assert_eq!(e.position, 1);
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedToken(_)));
    }

    #[test]
    fn unknown_variable_reported() {
        let e = parse_poly("x + t", &["x", "y"], Rationals).unwrap_err();
        assert_eq!(e.position, 4);
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable("t".into()));
    }

    #[test]
    fn rational_coefficients() {
        let f = parse_poly("1/2*x^2 - 3*x*y + y^2", &["x", "y"], Rationals).unwrap();
        assert_eq!(f.format_with(&["x", "y"]), "1/2*x^2 - 3*x*y + y^2");
    }

    #[test]
    fn leading_minus_allowed() {
        let f = parse_poly("-x^3 + y^3", &["x", "y"], Rationals).unwrap();
        assert_eq!(f.format_with(&["x", "y"]), "-x^3 + y^3");
    }

    #[test]
    fn coefficient_not_in_field() {
        let f7 = PrimeField::new(7).unwrap();
        let e = parse_poly("1/7*x", &["x"], f7).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::CoefficientNotInField);
        let e = parse_poly("1/0*x", &["x"], Rationals).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::CoefficientNotInField);
    }

    #[test]
    fn characteristic_restriction_reported() {
        let f3 = PrimeField::new(3).unwrap();
        let e = parse_poly("x^3 + y^3", &["x", "y"], f3).unwrap_err();
        assert_eq!(
            e.kind,
            ParseErrorKind::CharacteristicTooSmall { p: 3, degree: 3 }
        );
    }

    #[test]
    fn default_aliases() {
        let (f, names) = parse_with_default_vars("x^2*w - z^3 + x*y*z", Rationals).unwrap();
        assert_eq!(f.n_vars(), 4);
        assert_eq!(names, vec!["x", "y", "z", "w"]);
        let (g, names) = parse_with_default_vars("x0^2 + x1*x2", Rationals).unwrap();
        assert_eq!(g.n_vars(), 3);
        assert_eq!(names, vec!["x0", "x1", "x2"]);
        // y alone still makes a 2-variable ring (prefix through index 1)
        let (h, _) = parse_with_default_vars("y^2", Rationals).unwrap();
        assert_eq!(h.n_vars(), 2);
    }

    #[test]
    fn format_parse_roundtrip() {
        for text in [
            "x^3 + y^3 + z^3",
            "-2*x^2*y + 1/3*y^3 - z^3",
            "x*y*z",
            "5*x^4 - x^2*y^2 + 7/2*y^4",
        ] {
            let (f, names) = parse_with_default_vars(text, Rationals).unwrap();
            let refs: alloc::vec::Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let printed = f.format_with(&refs);
            let (g, _) = parse_with_default_vars(&printed, Rationals).unwrap();
            assert_eq!(f, g, "round trip failed for {text} -> {printed}");
        }
    }

    #[test]
    fn stray_characters_rejected() {
        let e = parse_poly("x^2 $ y", &["x", "y"], Rationals).unwrap_err();
        assert_eq!(e.position, 4);
        assert_eq!(e.kind, ParseErrorKind::UnexpectedChar('$'));
        let e = parse_poly("x^", &["x"], Rationals).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
    }
}
