//! Polynomial expressions and presentation files.
//!
//! Expressions: generator names (longest match against the alphabet, so
//! `ga*` reads as `g a*`), postfix `*` for the star, `^n` powers (`^-n` only
//! on nonzero scalars), the scalars `q` and `i`, integer and rational literals,
//! `+ - ( )`, and juxtaposition for products.
//!
//! Presentation files:
//!
//! ```text
//! name su_q2
//! alphabet a a* g g*      # increasing order; `x*` names the star of `x`
//! weights 1 1 0 0         # optional, default all 0
//! alias α a               # optional extra spellings
//! rule a* a -> 1 - g g*
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Laurent, NCPoly, Presentation, Rule, Word};
use crate::error::{Error, Result};
use crate::exact::GaussRat;

const MAX_POWER: i64 = 64;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Letter(u8),
    Q,
    I,
    Num(BigRational),
    Int(i64),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    pres: &'a Presentation,
    chars: Vec<char>,
    pos: usize,
}

impl Lexer<'_> {
    fn names(&self) -> Vec<(String, Tok)> {
        let mut names: Vec<(String, Tok)> = self
            .pres
            .letters()
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.ends_with('*'))
            .map(|(k, l)| (l.clone(), Tok::Letter(k as u8)))
            .chain(self.pres.aliases().iter().map(|(a, k)| (a.clone(), Tok::Letter(*k))))
            .collect();
        names.push(("q".into(), Tok::Q));
        names.push(("i".into(), Tok::I));
        names.sort_by_key(|(n, _)| std::cmp::Reverse(n.chars().count()));
        names
    }

    fn run(mut self) -> Result<Vec<(usize, Tok)>> {
        let names = self.names();
        let mut out = Vec::new();
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            let col = self.pos + 1;
            if c.is_whitespace() {
                self.pos += 1;
                continue;
            }
            let single = match c {
                '+' => Some(Tok::Plus),
                '-' => Some(Tok::Minus),
                '*' => Some(Tok::Star),
                '^' => Some(Tok::Caret),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                _ => None,
            };
            if let Some(t) = single {
                out.push((col, t));
                self.pos += 1;
            } else if c.is_ascii_digit() {
                let digits = |lx: &mut Self| {
                    let start = lx.pos;
                    while lx.pos < lx.chars.len() && lx.chars[lx.pos].is_ascii_digit() {
                        lx.pos += 1;
                    }
                    lx.chars[start..lx.pos].iter().collect::<String>()
                };
                let num: BigInt = digits(&mut self).parse().expect("digits");
                let after_caret = matches!(out.last(), Some((_, Tok::Caret)))
                    || matches!(out.as_slice(), [.., (_, Tok::Caret), (_, Tok::Minus)]);
                if self.chars.get(self.pos) == Some(&'/') {
                    self.pos += 1;
                    if !self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
                        return Err(Error::parse(1, self.pos + 1, "expected a denominator after `/`"));
                    }
                    let den: BigInt = digits(&mut self).parse().expect("digits");
                    if den.is_zero() {
                        return Err(Error::parse(1, col, "zero denominator"));
                    }
                    out.push((col, Tok::Num(BigRational::new(num, den))));
                } else if after_caret {
                    let n = i64::try_from(num).ok().filter(|n| *n <= MAX_POWER).ok_or_else(|| {
                        Error::parse(1, col, format!("exponent above {MAX_POWER}"))
                    })?;
                    out.push((col, Tok::Int(n)));
                } else {
                    out.push((col, Tok::Num(BigRational::from_integer(num))));
                }
            } else if c.is_alphabetic() {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_alphabetic() {
                    self.pos += 1;
                }
                let mut at = start;
                while at < self.pos {
                    let rest: String = self.chars[at..self.pos].iter().collect();
                    let Some((name, tok)) = names.iter().find(|(n, _)| rest.starts_with(n.as_str())) else {
                        return Err(Error::UnknownGenerator {
                            name: rest,
                            column: at + 1,
                        });
                    };
                    out.push((at + 1, tok.clone()));
                    at += name.chars().count();
                }
            } else {
                return Err(Error::parse(1, col, format!("unexpected character `{c}`")));
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    pres: &'a Presentation,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(c, _)| *c)
    }

    fn expr(&mut self) -> Result<NCPoly> {
        let mut acc = NCPoly::zero();
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Letter(_) | Tok::Q | Tok::I | Tok::Num(_) | Tok::LParen))
    }

    fn term(&mut self) -> Result<NCPoly> {
        if !self.starts_factor() {
            return Err(Error::parse(1, self.col(), "expected a generator, scalar or `(`"));
        }
        let mut acc = self.factor()?;
        while self.starts_factor() {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<NCPoly> {
        let col = self.col();
        let mut p = match self.toks.get(self.pos).map(|(_, t)| t.clone()) {
            Some(Tok::Letter(l)) => NCPoly::word(Word(vec![l])),
            Some(Tok::Q) => NCPoly::constant(Laurent::q_pow(1)),
            Some(Tok::I) => NCPoly::constant(Laurent::constant(GaussRat::i())),
            Some(Tok::Num(r)) => NCPoly::constant(Laurent::constant(GaussRat::from(r))),
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Error::parse(1, self.col(), format!("expected `)` to close the group at column {col}")));
                }
                inner
            }
            _ => return Err(Error::parse(1, col, "expected a generator, scalar or `(`")),
        };
        self.pos += 1;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    let at = self.col();
                    p = self.pres.star(&p).map_err(|e| Error::parse(1, at, e.to_string()))?;
                    self.pos += 1;
                }
                Some(Tok::Caret) => {
                    let at = self.col();
                    self.pos += 1;
                    let negative = self.peek() == Some(&Tok::Minus);
                    if negative {
                        self.pos += 1;
                    }
                    let Some(Tok::Int(n)) = self.peek().cloned() else {
                        return Err(Error::parse(1, self.col(), "expected an integer exponent"));
                    };
                    self.pos += 1;
                    if negative {
                        let inv = p
                            .as_constant()
                            .and_then(|c| c.inverse_monomial())
                            .ok_or_else(|| Error::parse(1, at, "negative powers need a nonzero scalar monomial"))?;
                        p = NCPoly::constant(inv);
                    }
                    p = p.pow(n as u32);
                }
                _ => return Ok(p),
            }
        }
    }
}

impl Presentation {
    /// Parses an expression into an unreduced polynomial. Errors report line 1
    /// and the character column.
    pub fn parse(&self, text: &str) -> Result<NCPoly> {
        let chars: Vec<char> = text.chars().collect();
        let end = chars.len() + 1;
        let toks = Lexer {
            pres: self,
            chars,
            pos: 0,
        }
        .run()?;
        if toks.is_empty() {
            return Err(Error::parse(1, 1, "empty expression"));
        }
        let mut parser = Parser {
            pres: self,
            toks,
            pos: 0,
            end,
        };
        let p = parser.expr()?;
        if parser.pos != parser.toks.len() {
            return Err(Error::parse(1, parser.col(), "unexpected token"));
        }
        Ok(p)
    }

    /// Parses a single word with coefficient 1.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let p = self.parse(text)?;
        match p.terms().collect::<Vec<_>>().as_slice() {
            [(w, c)] if c.is_one() => Ok((*w).clone()),
            _ => Err(Error::parse(1, 1, format!("`{text}` is not a single word"))),
        }
    }
}

fn relocate(err: Error, line: usize, offset: usize) -> Error {
    match err {
        Error::Parse { column, message, .. } => Error::parse(line, column + offset, message),
        Error::UnknownGenerator { name, column } => {
            Error::parse(line, column + offset, format!("unknown generator `{name}`"))
        }
        other => Error::parse(line, offset + 1, other.to_string()),
    }
}

/// Reads the presentation file format described in the module docs.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut name = String::from("custom");
    let mut alphabet: Option<(usize, Vec<String>)> = None;
    let mut weights: Option<Vec<u32>> = None;
    let mut aliases: Vec<(usize, usize, String, String)> = Vec::new();
    let mut rules: Vec<(usize, usize, String)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let lead = body.chars().count() - trimmed.chars().count();
        let (keyword, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let rest_offset = lead + keyword.chars().count() + 1;
        let words: Vec<&str> = rest.split_whitespace().collect();
        match keyword {
            "name" => name = words.first().copied().unwrap_or("custom").to_string(),
            "alphabet" => {
                if words.is_empty() {
                    return Err(Error::parse(line, lead + 1, "empty alphabet"));
                }
                alphabet = Some((line, words.iter().map(|s| s.to_string()).collect()));
            }
            "weights" => {
                weights = Some(
                    words
                        .iter()
                        .map(|w| {
                            w.parse()
                                .map_err(|_| Error::parse(line, rest_offset + 1, format!("bad weight `{w}`")))
                        })
                        .collect::<Result<_>>()?,
                );
            }
            "alias" => {
                let [alias, letter] = words.as_slice() else {
                    return Err(Error::parse(line, lead + 1, "`alias` takes a spelling and a generator"));
                };
                aliases.push((line, lead + 1, alias.to_string(), letter.to_string()));
            }
            "rule" => rules.push((line, rest_offset, rest.to_string())),
            other => return Err(Error::parse(line, lead + 1, format!("unknown keyword `{other}`"))),
        }
    }
    let (alpha_line, letters) = alphabet.ok_or_else(|| Error::parse(1, 1, "missing `alphabet`"))?;
    let weights = weights.unwrap_or_else(|| vec![0; letters.len()]);
    let letter_refs: Vec<&str> = letters.iter().map(String::as_str).collect();
    let mut pres =
        Presentation::new(&name, &letter_refs, &weights, Vec::new()).map_err(|e| relocate(e, alpha_line, 0))?;
    let mut alias_table = Vec::new();
    for (line, col, alias, letter) in aliases {
        let l = pres
            .letter(&letter)
            .ok_or_else(|| Error::parse(line, col, format!("alias for unknown generator `{letter}`")))?;
        alias_table.push((alias, l));
    }
    pres.set_aliases(alias_table.clone());
    let mut parsed = Vec::new();
    for (line, offset, text) in rules {
        let Some((lhs, rhs)) = text.split_once("->") else {
            return Err(Error::parse(line, offset + 1, "rule needs `->`"));
        };
        let lhs_word = pres.parse_word(lhs).map_err(|e| relocate(e, line, offset))?;
        let rhs_offset = offset + lhs.chars().count() + 2;
        let rhs_poly = pres.parse(rhs).map_err(|e| relocate(e, line, rhs_offset))?;
        parsed.push(Rule {
            lhs: lhs_word,
            rhs: rhs_poly,
        });
    }
    let mut out = Presentation::new(&name, &letter_refs, &weights, parsed)?;
    out.set_aliases(alias_table);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_basic_expressions() {
        let su = Presentation::su_q2();
        let p = su.parse("a*a + g*g").unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.coefficient(&Word(vec![1, 0])).is_one());
        assert!(p.coefficient(&Word(vec![3, 2])).is_one());
        let p = su.parse("q g a").unwrap();
        assert_eq!(p.coefficient(&Word(vec![2, 0])), Laurent::q_pow(1));
        assert_eq!(su.parse("qga").unwrap(), p);
        assert_eq!(su.parse("q γ α").unwrap(), p);
    }

    #[test]
    fn star_of_a_group_reverses() {
        let su = Presentation::su_q2();
        assert_eq!(su.parse("(a g)*").unwrap(), su.parse("g* a*").unwrap());
        assert_eq!(su.parse("(i q a)*").unwrap(), su.parse("-i q a*").unwrap());
        assert_eq!(su.parse("a g*").unwrap(), su.parse("a (g*)").unwrap());
    }

    #[test]
    fn powers() {
        let su = Presentation::su_q2();
        assert_eq!(su.parse("q^-2").unwrap(), NCPoly::constant(Laurent::q_pow(-2)));
        assert_eq!(su.parse("(2q)^-1").unwrap(), NCPoly::constant(Laurent::monomial(GaussRat::from_frac(1, 2), -1)));
        assert_eq!(su.parse("a^0").unwrap(), NCPoly::one());
        assert!(matches!(su.parse("a^-1"), Err(Error::Parse { column: 2, .. })));
    }

    #[test]
    fn errors_carry_positions() {
        let su = Presentation::su_q2();
        assert_eq!(
            su.parse("a + x g"),
            Err(Error::UnknownGenerator {
                name: "x".into(),
                column: 5
            })
        );
        assert!(matches!(su.parse("a + "), Err(Error::Parse { column: 5, .. })));
        assert!(matches!(su.parse("(a"), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(su.parse("a ) g"), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(su.parse("1/0"), Err(Error::Parse { .. })));
        let sl = Presentation::sl_q2();
        assert!(matches!(sl.parse("a*"), Err(Error::Parse { column: 2, .. })));
    }

    #[test]
    fn presentation_file_round_trip() {
        for pres in [Presentation::su_q2(), Presentation::sl_q2()] {
            let back = parse_presentation(&pres.to_text()).unwrap();
            assert_eq!(back, pres);
        }
        let err = parse_presentation("alphabet x y\nrule y x -> x z\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 15, .. }), "{err:?}");
        let err = parse_presentation("alphabet x y\nrule x y -> y x\n").unwrap_err();
        assert!(matches!(err, Error::Domain(_)), "{err:?}");
    }
}
