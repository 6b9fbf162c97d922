//! Presented algebras over Laurent polynomials in `q`: parsing, normal forms by
//! ordered rewriting, the star involution, and Hopf-axiom checks.
//!
//! Words are ordered by length, then by a per-letter weight sum, then
//! lexicographically by alphabet position. Every rule must strictly decrease
//! a word in this order, so rewriting terminates. The weight layer lets
//! `α*α → 1 − γγ*` and `ad → 1 + q bc` point downhill even though plain
//! degree-lex would orient them the other way.

mod hopf;
mod laurent;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;
use rayon::prelude::*;

pub use hopf::{hopf_axiom_check, HopfFailure, HopfLaw, HopfReport, HopfStructure, Tensor};
pub use laurent::Laurent;
pub use parse::parse_presentation;

use crate::error::{check_size, Error, Result};
use crate::exact::GaussRat;

pub const DEFAULT_STEP_LIMIT: usize = 1_000_000;
pub const MAX_CHECK_DEGREE: usize = 5;

/// A word over the alphabet, stored as letter positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<u8>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.0.len(), &self.0).cmp(&(other.0.len(), &other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, rhs: &Word) -> Word {
        let mut w = self.0.clone();
        w.extend_from_slice(&rhs.0);
        Word(w)
    }
}

/// Noncommutative polynomial with Laurent coefficients, terms in degree-lex order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NCPoly {
    terms: BTreeMap<Word, Laurent>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Laurent::one())
    }

    pub fn constant(c: Laurent) -> Self {
        Self::term(Word::empty(), c)
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, Laurent::one())
    }

    pub fn term(w: Word, c: Laurent) -> Self {
        let mut p = Self::zero();
        p.add_term(w, &c);
        p
    }

    fn add_term(&mut self, w: Word, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(slot) => {
                *slot = slot.add(c);
                if slot.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Laurent)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Laurent {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::len)
    }

    /// The constant term when nothing else is present.
    pub fn as_constant(&self) -> Option<Laurent> {
        match self.terms.len() {
            0 => Some(Laurent::zero()),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, rhs: &NCPoly) -> NCPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> NCPoly {
        self.scale(&Laurent::one().neg())
    }

    pub fn scale(&self, s: &Laurent) -> NCPoly {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &c.mul(s));
        }
        out
    }

    /// Product by concatenation, without reduction.
    pub fn mul(&self, rhs: &NCPoly) -> NCPoly {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.concat(v), &a.mul(b));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> NCPoly {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Substitutes a number for `q` in every coefficient.
    pub fn specialize(&self, q: &GaussRat) -> Result<NCPoly> {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let v = c
                .specialize(q)
                .ok_or_else(|| Error::Domain("negative power of q at q = 0".into()))?;
            out.add_term(w.clone(), &v);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: NCPoly,
}

/// Which redex to rewrite first when several occur in a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// Alphabet with its order, an optional star involution, and rewrite rules.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    name: String,
    letters: Vec<String>,
    weights: Vec<u32>,
    aliases: Vec<(String, u8)>,
    star: Option<Vec<u8>>,
    rules: Vec<Rule>,
    step_limit: usize,
}

// (length, weight, letters): the order every rule must decrease.
type OrderKey = (usize, u32, Vec<u8>);

impl Presentation {
    /// Builds a presentation and certifies termination: each rule's right
    /// side must be strictly below its left word.
    ///
    /// Letters named `x*` declare the star of `x`; a star involution exists
    /// when every letter has its partner.
    pub fn new(name: &str, letters: &[&str], weights: &[u32], rules: Vec<Rule>) -> Result<Self> {
        if letters.is_empty() || letters.len() > 255 {
            return Err(Error::InvalidDimension(format!("alphabet of {} letters", letters.len())));
        }
        if weights.len() != letters.len() {
            return Err(Error::Shape(format!("{} weights for {} letters", weights.len(), letters.len())));
        }
        let letters: Vec<String> = letters.iter().map(|s| s.to_string()).collect();
        for (i, l) in letters.iter().enumerate() {
            let base = l.strip_suffix('*').unwrap_or(l);
            if base.is_empty() || !base.chars().all(char::is_alphabetic) || base == "q" || base == "i" {
                return Err(Error::Domain(format!("`{l}` is not a valid generator name")));
            }
            if letters[..i].contains(l) {
                return Err(Error::Domain(format!("generator `{l}` declared twice")));
            }
        }
        let partner = |l: &String| match l.strip_suffix('*') {
            Some(base) => letters.iter().position(|m| m == base),
            None => letters.iter().position(|m| *m == format!("{l}*")),
        };
        let star = letters
            .iter()
            .map(|l| partner(l).map(|p| p as u8))
            .collect::<Option<Vec<u8>>>();
        for l in &letters {
            if l.ends_with('*') && partner(l).is_none() {
                return Err(Error::Domain(format!("`{l}` has no unstarred partner")));
            }
        }
        let pres = Presentation {
            name: name.to_string(),
            letters,
            weights: weights.to_vec(),
            aliases: Vec::new(),
            star,
            rules,
            step_limit: DEFAULT_STEP_LIMIT,
        };
        for (k, rule) in pres.rules.iter().enumerate() {
            if rule.lhs.is_empty() {
                return Err(Error::Domain(format!("rule {} rewrites the empty word", k + 1)));
            }
            if pres.rules[..k].iter().any(|r| r.lhs == rule.lhs) {
                return Err(Error::Domain(format!("two rules for `{}`", pres.format_word(&rule.lhs))));
            }
            let letters_ok = |w: &Word| w.0.iter().all(|&l| (l as usize) < pres.letters.len());
            if !letters_ok(&rule.lhs) || !rule.rhs.terms().all(|(w, _)| letters_ok(w)) {
                return Err(Error::Domain(format!("rule {} uses a letter outside the alphabet", k + 1)));
            }
            for (w, _) in rule.rhs.terms() {
                if pres.compare(w, &rule.lhs) != Ordering::Less {
                    return Err(Error::Domain(format!(
                        "rule `{} -> {}` does not decrease the word order",
                        pres.format_word(&rule.lhs),
                        pres.format(&rule.rhs)
                    )));
                }
            }
        }
        Ok(pres)
    }

    /// `A_q`: generators α, γ with `α*α + γ*γ = 1`, `αα* + q²γγ* = 1`,
    /// `γγ* = γ*γ`, `qγα = αγ`, `qγ*α = αγ*`, written `a`, `g`.
    pub fn su_q2() -> Self {
        let rules = [
            ("a* a", "1 - g g*"),
            ("a a*", "1 - q^2 g g*"),
            ("g* g", "g g*"),
            ("g a", "q^-1 a g"),
            ("g* a", "q^-1 a g*"),
            ("g a*", "q a* g"),
            ("g* a*", "q a* g*"),
        ];
        let mut p = Self::new("su_q2", &["a", "a*", "g", "g*"], &[1, 1, 0, 0], Vec::new())
            .expect("valid alphabet");
        p.aliases = vec![("α".into(), 0), ("γ".into(), 2)];
        p.with_rule_texts(&rules).expect("preset rules are valid")
    }

    /// `Pol(SL_q(2))`: `ab = qba`, `ac = qca`, `bd = qdb`, `cd = qdc`,
    /// `bc = cb`, `ad − qbc = 1`, `da − q⁻¹bc = 1`.
    ///
    /// The letters are ordered `a < d < b < c` so that `d` moves left past
    /// `b` and `c` and meets `a`; normal words are `a^i b^j c^k` and
    /// `d^l b^j c^k`. With `d` last the rules would leave `a b c d`
    /// irreducible, and the system would not be confluent.
    pub fn sl_q2() -> Self {
        let rules = [
            ("b a", "q^-1 a b"),
            ("c a", "q^-1 a c"),
            ("b d", "q d b"),
            ("c d", "q d c"),
            ("c b", "b c"),
            ("a d", "1 + q b c"),
            ("d a", "1 + q^-1 b c"),
        ];
        Self::new("sl_q2", &["a", "d", "b", "c"], &[1, 1, 0, 0], Vec::new())
            .expect("valid alphabet")
            .with_rule_texts(&rules)
            .expect("preset rules are valid")
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "su_q2" => Ok(Self::su_q2()),
            "sl_q2" => Ok(Self::sl_q2()),
            other => Err(Error::Unsupported(format!("no preset named `{other}` (known: su_q2, sl_q2)"))),
        }
    }

    fn with_rule_texts(self, rules: &[(&str, &str)]) -> Result<Self> {
        let mut parsed = Vec::new();
        for (l, r) in rules {
            parsed.push(Rule {
                lhs: self.parse_word(l)?,
                rhs: self.parse(r)?,
            });
        }
        let letters: Vec<&str> = self.letters.iter().map(String::as_str).collect();
        let mut out = Self::new(&self.name, &letters, &self.weights, parsed)?;
        out.aliases = self.aliases;
        Ok(out)
    }

    pub(crate) fn set_aliases(&mut self, aliases: Vec<(String, u8)>) {
        self.aliases = aliases;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn has_star(&self) -> bool {
        self.star.is_some()
    }

    pub fn step_limit(&self) -> usize {
        self.step_limit
    }

    pub fn set_step_limit(&mut self, limit: usize) {
        self.step_limit = limit;
    }

    pub fn letter(&self, name: &str) -> Option<u8> {
        self.letters
            .iter()
            .position(|l| l == name)
            .map(|p| p as u8)
            .or_else(|| self.aliases.iter().find(|(a, _)| a == name).map(|&(_, l)| l))
    }

    pub(crate) fn aliases(&self) -> &[(String, u8)] {
        &self.aliases
    }

    fn key(&self, w: &Word) -> OrderKey {
        let weight = w.0.iter().map(|&l| self.weights[l as usize]).sum();
        (w.len(), weight, w.0.clone())
    }

    /// The word order used to orient rules.
    pub fn compare(&self, a: &Word, b: &Word) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    fn redex(&self, w: &Word, strategy: Strategy) -> Option<(usize, &Rule)> {
        let n = w.len();
        let at = |pos: usize| {
            self.rules
                .iter()
                .find(|r| w.0[pos..].starts_with(&r.lhs.0))
                .map(|r| (pos, r))
        };
        match strategy {
            Strategy::Leftmost => (0..n).find_map(at),
            Strategy::Rightmost => (0..n).rev().find_map(at),
        }
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.redex(w, Strategy::Leftmost).is_none()
    }

    /// All irreducible words of length at most `max_degree`, shortest first.
    pub fn normal_words(&self, max_degree: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut frontier = vec![Word::empty()];
        for _ in 0..max_degree {
            let mut next = Vec::new();
            for w in &frontier {
                for l in 0..self.letters.len() as u8 {
                    let mut v = w.clone();
                    v.0.push(l);
                    // Prefixes of normal words are normal, so only redexes ending at `l` matter.
                    let tail_ok = self.rules.iter().all(|r| !v.0.ends_with(&r.lhs.0));
                    if tail_ok {
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    pub fn normal_form(&self, p: &NCPoly) -> Result<NCPoly> {
        self.normal_form_with(p, Strategy::Leftmost)
    }

    pub fn normal_form_with(&self, p: &NCPoly, strategy: Strategy) -> Result<NCPoly> {
        self.reduce(p, strategy, None)
    }

    /// Normal form together with one line per rewrite step.
    pub fn normal_form_traced(&self, p: &NCPoly) -> Result<(NCPoly, Vec<String>)> {
        let mut trace = Vec::new();
        let nf = self.reduce(p, Strategy::Leftmost, Some(&mut trace))?;
        Ok((nf, trace))
    }

    fn reduce(&self, p: &NCPoly, strategy: Strategy, mut trace: Option<&mut Vec<String>>) -> Result<NCPoly> {
        // Largest words first: rewriting only produces smaller words, so each
        // word is handled once after all its contributions have merged.
        let mut todo: BTreeMap<OrderKey, (Word, Laurent)> = BTreeMap::new();
        let push = |todo: &mut BTreeMap<OrderKey, (Word, Laurent)>, w: Word, c: Laurent| {
            let key = self.key(&w);
            match todo.get_mut(&key) {
                Some(slot) => {
                    slot.1 = slot.1.add(&c);
                    if slot.1.is_zero() {
                        todo.remove(&key);
                    }
                }
                None if !c.is_zero() => {
                    todo.insert(key, (w, c));
                }
                None => {}
            }
        };
        for (w, c) in p.terms() {
            push(&mut todo, w.clone(), c.clone());
        }
        let mut out = NCPoly::zero();
        let mut steps = 0;
        while let Some((_, (w, c))) = todo.pop_last() {
            let Some((pos, rule)) = self.redex(&w, strategy) else {
                out.add_term(w, &c);
                continue;
            };
            steps += 1;
            if steps > self.step_limit {
                return Err(Error::Nontermination(self.step_limit));
            }
            if let Some(t) = trace.as_deref_mut() {
                t.push(format!(
                    "{}: {} -> {}",
                    self.format(&NCPoly::term(w.clone(), c.clone())),
                    self.format_word(&rule.lhs),
                    self.format(&rule.rhs)
                ));
            }
            let end = pos + rule.lhs.len();
            for (r, rc) in rule.rhs.terms() {
                let mut v = w.0[..pos].to_vec();
                v.extend_from_slice(&r.0);
                v.extend_from_slice(&w.0[end..]);
                push(&mut todo, Word(v), c.mul(rc));
            }
        }
        Ok(out)
    }

    /// `p*`: reverse each word, star each letter, conjugate coefficients (`q` real).
    pub fn star(&self, p: &NCPoly) -> Result<NCPoly> {
        let star = self
            .star
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("presentation `{}` has no star involution", self.name)))?;
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let v = Word(w.0.iter().rev().map(|&l| star[l as usize]).collect());
            out.add_term(v, &c.conj());
        }
        Ok(out)
    }

    /// The same rules with `q` replaced by a number.
    pub fn specialize(&self, q: &GaussRat) -> Result<Presentation> {
        let mut out = self.clone();
        for r in &mut out.rules {
            r.rhs = r.rhs.specialize(q)?;
        }
        Ok(out)
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.0.iter()
            .map(|&l| self.letters[l as usize].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Text that [`Presentation::parse`] reads back to the same polynomial.
    pub fn format(&self, p: &NCPoly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (w, c)) in p.terms().enumerate() {
            let (negative, body) = match c.as_monomial() {
                Some((coef, k)) if coef.is_real() => {
                    let negative = coef.re.is_negative();
                    let mag = if negative { -coef } else { coef.clone() };
                    let mut parts = Vec::new();
                    if mag != GaussRat::from_int(1) || (k == 0 && w.is_empty()) {
                        parts.push(mag.to_string());
                    }
                    match k {
                        0 => {}
                        1 => parts.push("q".into()),
                        _ => parts.push(format!("q^{k}")),
                    }
                    if !w.is_empty() {
                        parts.push(self.format_word(w));
                    }
                    (negative, parts.join(" "))
                }
                _ if w.is_empty() => (false, format!("({c})")),
                _ => (false, format!("({c}) {}", self.format_word(w))),
            };
            out.push_str(match (n > 0, negative) {
                (true, true) => " - ",
                (true, false) => " + ",
                (false, true) => "-",
                (false, false) => "",
            });
            out.push_str(&body);
        }
        out
    }

    /// Reads the presentation file format, see [`parse_presentation`].
    pub fn to_text(&self) -> String {
        let mut out = format!("name {}\nalphabet {}\nweights", self.name, self.letters.join(" "));
        for w in &self.weights {
            out.push_str(&format!(" {w}"));
        }
        out.push('\n');
        for (a, l) in &self.aliases {
            out.push_str(&format!("alias {a} {}\n", self.letters[*l as usize]));
        }
        for r in &self.rules {
            out.push_str(&format!("rule {} -> {}\n", self.format_word(&r.lhs), self.format(&r.rhs)));
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// First pair of normal words `(u, v)` of length at most `max_degree` with
/// `uv ≠ vu` after specializing `q`.
pub fn commutativity_counterexample(pres: &Presentation, q: &GaussRat, max_degree: usize) -> Result<Option<(Word, Word)>> {
    check_size("commutativity check degree", max_degree as u128, MAX_CHECK_DEGREE as u128)?;
    let special = pres.specialize(q)?;
    let words = special.normal_words(max_degree);
    let pairs: Vec<(usize, usize)> = (0..words.len())
        .flat_map(|i| (i + 1..words.len()).map(move |j| (i, j)))
        .collect();
    let found = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (u, v) = (&words[i], &words[j]);
            let comm = NCPoly::word(u.concat(v)).sub(&NCPoly::word(v.concat(u)));
            special.normal_form(&comm).map(|nf| (!nf.is_zero()).then(|| (u.clone(), v.clone())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().next())
}

/// Whether the algebra becomes commutative at `q = 1`, tested on all pairs
/// of normal words up to `max_degree`.
pub fn q1_commutativity_check(pres: &Presentation, max_degree: usize) -> Result<bool> {
    Ok(commutativity_counterexample(pres, &GaussRat::from_int(1), max_degree)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_reduce_known_relations() {
        let su = Presentation::su_q2();
        let nf = su.normal_form(&su.parse("a* a").unwrap()).unwrap();
        assert_eq!(nf, su.parse("1 - g g*").unwrap());
        let rel = su.parse("g a - q^-1 a g").unwrap();
        assert!(su.normal_form(&rel).unwrap().is_zero());
        let sl = Presentation::sl_q2();
        let det = sl.parse("a d - q b c").unwrap();
        assert_eq!(sl.normal_form(&det).unwrap(), NCPoly::one());
    }

    #[test]
    fn rules_must_decrease() {
        let bad = Rule {
            lhs: Word(vec![0, 1]),
            rhs: NCPoly::word(Word(vec![1, 0])),
        };
        assert!(Presentation::new("bad", &["x", "y"], &[0, 0], vec![bad]).is_err());
    }

    #[test]
    fn step_limit_reports_nontermination() {
        let mut su = Presentation::su_q2();
        su.set_step_limit(1);
        let p = su.parse("g* g a a*").unwrap();
        assert_eq!(su.normal_form(&p), Err(Error::Nontermination(1)));
    }

    #[test]
    fn normal_words_are_irreducible() {
        let su = Presentation::su_q2();
        let words = su.normal_words(3);
        assert!(words.iter().all(|w| su.is_normal(w)));
        // Degree-2 normal words: α², α*², and the 3 + 3 + 3 words below the rules' left sides.
        let deg2 = words.iter().filter(|w| w.len() == 2).count();
        assert_eq!(deg2, 16 - su.rules().len());
    }

    #[test]
    fn format_round_trip() {
        let su = Presentation::su_q2();
        for text in ["1 - q^2 g g*", "-2 q^-1 a g + 1/2", "(1 + q) a* g", "(i) g"] {
            let p = su.parse(text).unwrap();
            assert_eq!(su.parse(&su.format(&p)).unwrap(), p, "{text}");
        }
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(Presentation::preset("so_q3"), Err(Error::Unsupported(_))));
    }
}
