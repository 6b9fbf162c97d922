//! Coproduct, counit and antipode of `A_q`, and exact checks of the Hopf axioms.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use super::{Laurent, NCPoly, Presentation, Word, MAX_CHECK_DEGREE};
use crate::error::{check_size, Error, Result};
use crate::exact::GaussRat;

/// Element of a `k`-fold tensor power, one word per factor.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tensor {
    factors: usize,
    terms: BTreeMap<Vec<Word>, Laurent>,
}

impl Tensor {
    pub fn zero(factors: usize) -> Self {
        Tensor {
            factors,
            terms: BTreeMap::new(),
        }
    }

    /// `1 ⊗ ⋯ ⊗ 1`.
    pub fn one(factors: usize) -> Self {
        let mut t = Self::zero(factors);
        t.add_term(vec![Word::empty(); factors], &Laurent::one());
        t
    }

    /// `p_1 ⊗ ⋯ ⊗ p_k`.
    pub fn product_of(parts: &[NCPoly]) -> Self {
        let mut acc = Self::one(0);
        for p in parts {
            let mut next = Self::zero(acc.factors + 1);
            for (ws, c) in &acc.terms {
                for (w, d) in p.terms() {
                    let mut v = ws.clone();
                    v.push(w.clone());
                    next.add_term(v, &c.mul(d));
                }
            }
            acc = next;
        }
        acc
    }

    fn add_term(&mut self, ws: Vec<Word>, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(ws).or_default();
        *slot = slot.add(c);
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Word], &Laurent)> {
        self.terms.iter().map(|(w, c)| (w.as_slice(), c))
    }

    pub fn add(&self, rhs: &Tensor) -> Tensor {
        let mut out = self.clone();
        for (ws, c) in &rhs.terms {
            out.add_term(ws.clone(), c);
        }
        out
    }

    pub fn sub(&self, rhs: &Tensor) -> Tensor {
        self.add(&rhs.scale(&Laurent::one().neg()))
    }

    pub fn scale(&self, s: &Laurent) -> Tensor {
        let mut out = Self::zero(self.factors);
        for (ws, c) in &self.terms {
            out.add_term(ws.clone(), &c.mul(s));
        }
        out
    }

    /// Factorwise product.
    pub fn mul(&self, rhs: &Tensor) -> Tensor {
        let mut out = Self::zero(self.factors);
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                let ws = u.iter().zip(v).map(|(x, y)| x.concat(y)).collect();
                out.add_term(ws, &a.mul(b));
            }
        }
        out
    }

    /// Reduces every factor to normal form independently.
    pub fn normalize(&self, pres: &Presentation) -> Result<Tensor> {
        let mut cache: BTreeMap<Word, NCPoly> = BTreeMap::new();
        let mut out = Self::zero(self.factors);
        for (ws, c) in &self.terms {
            let mut parts = Vec::with_capacity(ws.len());
            for w in ws {
                if !cache.contains_key(w) {
                    cache.insert(w.clone(), pres.normal_form(&NCPoly::word(w.clone()))?);
                }
                parts.push(cache[w].clone());
            }
            out = out.add(&Self::product_of(&parts).scale(c));
        }
        Ok(out)
    }

    /// Replaces factor `slot` by `f(word)`, a tensor with `m` factors.
    fn expand_at(&self, slot: usize, f: impl Fn(&Word) -> Result<Tensor>) -> Result<Tensor> {
        let mut out: Option<Tensor> = None;
        for (ws, c) in &self.terms {
            let inner = f(&ws[slot])?;
            let acc = out.get_or_insert_with(|| Tensor::zero(self.factors - 1 + inner.factors));
            for (vs, d) in &inner.terms {
                let mut full = ws[..slot].to_vec();
                full.extend(vs.iter().cloned());
                full.extend(ws[slot + 1..].iter().cloned());
                acc.add_term(full, &c.mul(d));
            }
        }
        Ok(out.unwrap_or_else(|| Tensor::zero(self.factors + 1)))
    }

    pub fn format(&self, pres: &Presentation) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(ws, c)| {
                let body = ws.iter().map(|w| pres.format_word(w)).collect::<Vec<_>>().join(" ⊗ ");
                if c.is_one() { body } else { format!("({c}) {body}") }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Coproduct, counit and antipode on the generators of a presentation.
#[derive(Clone, Debug, PartialEq)]
pub struct HopfStructure {
    pres: Presentation,
    coproduct: Vec<Tensor>,
    counit: Vec<Laurent>,
    antipode: Vec<NCPoly>,
}

impl HopfStructure {
    /// `Δ(α) = α⊗α − qγ*⊗γ`, `Δ(γ) = γ⊗α + α*⊗γ`, `S(α) = α*`, `S(γ) = −qγ`,
    /// `S(γ*) = −q⁻¹γ*`, `ε(α) = 1`, `ε(γ) = 0`; the starred generators get
    /// the starred images since Δ and ε are *-maps.
    pub fn su_q2() -> Self {
        let pres = Presentation::su_q2();
        let p = |s: &str| pres.parse(s).expect("preset text");
        let pair = |terms: &[(&str, &str, &str)]| {
            terms.iter().fold(Tensor::zero(2), |acc, (c, l, r)| {
                let coeff = p(c).as_constant().expect("scalar");
                acc.add(&Tensor::product_of(&[p(l), p(r)]).scale(&coeff))
            })
        };
        let delta_a = pair(&[("1", "a", "a"), ("-q", "g*", "g")]);
        let delta_g = pair(&[("1", "g", "a"), ("1", "a*", "g")]);
        let star = |t: &Tensor| {
            let mut out = Tensor::zero(2);
            for (ws, c) in t.terms() {
                let parts: Vec<NCPoly> = ws
                    .iter()
                    .map(|w| pres.star(&NCPoly::word(w.clone())).expect("su_q2 has a star"))
                    .collect();
                out = out.add(&Tensor::product_of(&parts).scale(&c.conj()));
            }
            out
        };
        let coproduct = vec![delta_a.clone(), star(&delta_a), delta_g.clone(), star(&delta_g)];
        let counit = vec![Laurent::one(), Laurent::one(), Laurent::zero(), Laurent::zero()];
        let antipode = vec![p("a*"), p("a"), p("-q g"), p("-q^-1 g*")];
        HopfStructure {
            pres,
            coproduct,
            counit,
            antipode,
        }
    }

    /// A structure from explicit images of each generator, in alphabet order.
    pub fn new(pres: Presentation, coproduct: Vec<Tensor>, counit: Vec<Laurent>, antipode: Vec<NCPoly>) -> Result<Self> {
        let n = pres.letters().len();
        if coproduct.len() != n || counit.len() != n || antipode.len() != n {
            return Err(Error::Shape(format!(
                "{n} generators but {} coproduct, {} counit and {} antipode images",
                coproduct.len(),
                counit.len(),
                antipode.len()
            )));
        }
        if let Some(t) = coproduct.iter().find(|t| t.factors != 2) {
            return Err(Error::Shape(format!("coproduct image with {} tensor factors", t.factors)));
        }
        Ok(HopfStructure {
            pres,
            coproduct,
            counit,
            antipode,
        })
    }

    pub fn coproduct_images(&self) -> &[Tensor] {
        &self.coproduct
    }

    pub fn counit_images(&self) -> &[Laurent] {
        &self.counit
    }

    pub fn antipode_images(&self) -> &[NCPoly] {
        &self.antipode
    }

    pub fn for_preset(name: &str) -> Result<Self> {
        match name {
            "su_q2" => Ok(Self::su_q2()),
            "sl_q2" => Err(Error::Unsupported(
                "no coproduct is given for sl_q2; only algebra-level checks are available".into(),
            )),
            other => Err(Error::Unsupported(format!("no Hopf structure for `{other}`"))),
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    /// Replaces `q` by a number everywhere.
    pub fn specialize(&self, q: &GaussRat) -> Result<Self> {
        let sp = |c: &Laurent| c.specialize(q).ok_or_else(|| Error::Domain("negative power of q at q = 0".into()));
        let coproduct = self
            .coproduct
            .iter()
            .map(|t| {
                let mut out = Tensor::zero(t.factors);
                for (ws, c) in t.terms() {
                    out.add_term(ws.to_vec(), &sp(c)?);
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        Ok(HopfStructure {
            pres: self.pres.specialize(q)?,
            coproduct,
            counit: self.counit.iter().map(sp).collect::<Result<_>>()?,
            antipode: self.antipode.iter().map(|p| p.specialize(q)).collect::<Result<_>>()?,
        })
    }

    fn coproduct_word(&self, w: &Word) -> Tensor {
        w.0.iter()
            .fold(Tensor::one(2), |acc, &l| acc.mul(&self.coproduct[l as usize]))
    }

    /// `Δ(p)` extended multiplicatively, factors in normal form.
    pub fn coproduct(&self, p: &NCPoly) -> Result<Tensor> {
        let mut out = Tensor::zero(2);
        for (w, c) in p.terms() {
            out = out.add(&self.coproduct_word(w).scale(c));
        }
        out.normalize(&self.pres)
    }

    fn counit_word(&self, w: &Word) -> Laurent {
        w.0.iter().fold(Laurent::one(), |acc, &l| acc.mul(&self.counit[l as usize]))
    }

    pub fn counit(&self, p: &NCPoly) -> Laurent {
        p.terms()
            .fold(Laurent::zero(), |acc, (w, c)| acc.add(&self.counit_word(w).mul(c)))
    }

    fn antipode_word(&self, w: &Word) -> NCPoly {
        w.0.iter()
            .rev()
            .fold(NCPoly::one(), |acc, &l| acc.mul(&self.antipode[l as usize]))
    }

    /// `S(p)` extended anti-multiplicatively, in normal form.
    pub fn antipode(&self, p: &NCPoly) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            out = out.add(&self.antipode_word(w).scale(c));
        }
        self.pres.normal_form(&out)
    }

    /// `m(S ⊗ id)Δ(p)` when `left`, otherwise `m(id ⊗ S)Δ(p)`, in normal form.
    pub fn antipode_contraction(&self, p: &NCPoly, left: bool) -> Result<NCPoly> {
        let delta = self.coproduct(p)?;
        let mut out = NCPoly::zero();
        for (ws, c) in delta.terms() {
            let (u, v) = (NCPoly::word(ws[0].clone()), NCPoly::word(ws[1].clone()));
            let prod = if left {
                self.antipode_word(&ws[0]).mul(&v)
            } else {
                u.mul(&self.antipode_word(&ws[1]))
            };
            out = out.add(&prod.scale(c));
        }
        self.pres.normal_form(&out)
    }

    fn check_word(&self, w: &Word) -> Result<Option<HopfFailure>> {
        let p = NCPoly::word(w.clone());
        let nf = self.pres.normal_form(&p)?;
        let witness = self.pres.format_word(w);
        let fail = |law, residual: String| {
            Ok(Some(HopfFailure {
                law,
                witness: witness.clone(),
                residual,
            }))
        };
        let delta = self.coproduct(&p)?;
        let lhs = delta
            .expand_at(0, |u| Ok(self.coproduct_word(u)))?
            .normalize(&self.pres)?;
        let rhs = delta
            .expand_at(1, |v| Ok(self.coproduct_word(v)))?
            .normalize(&self.pres)?;
        let diff = lhs.sub(&rhs);
        if !diff.is_zero() {
            return fail(HopfLaw::Coassociativity, diff.format(&self.pres));
        }
        for (law, slot) in [(HopfLaw::LeftCounit, 0), (HopfLaw::RightCounit, 1)] {
            let mut acc = NCPoly::zero();
            for (ws, c) in delta.terms() {
                let kept = &ws[1 - slot];
                acc = acc.add(&NCPoly::term(kept.clone(), self.counit_word(&ws[slot]).mul(c)));
            }
            let diff = self.pres.normal_form(&acc)?.sub(&nf);
            if !diff.is_zero() {
                return fail(law, self.pres.format(&diff));
            }
        }
        let eps = NCPoly::constant(self.counit(&p));
        for (law, left) in [(HopfLaw::LeftAntipode, true), (HopfLaw::RightAntipode, false)] {
            let diff = self.antipode_contraction(&p, left)?.sub(&eps);
            if !diff.is_zero() {
                return fail(law, self.pres.format(&diff));
            }
        }
        Ok(None)
    }

    fn check_rules(&self) -> Result<Option<HopfFailure>> {
        for rule in self.pres.rules() {
            let rel = NCPoly::word(rule.lhs.clone()).sub(&rule.rhs);
            let witness = format!("{} -> {}", self.pres.format_word(&rule.lhs), self.pres.format(&rule.rhs));
            let delta = self.coproduct(&rel)?;
            if !delta.is_zero() {
                return Ok(Some(HopfFailure {
                    law: HopfLaw::CoproductRespectsRelations,
                    witness,
                    residual: delta.format(&self.pres),
                }));
            }
            let eps = self.counit(&rel);
            if !eps.is_zero() {
                return Ok(Some(HopfFailure {
                    law: HopfLaw::CounitRespectsRelations,
                    witness,
                    residual: eps.to_string(),
                }));
            }
            let s = self.antipode(&rel)?;
            if !s.is_zero() {
                return Ok(Some(HopfFailure {
                    law: HopfLaw::AntipodeRespectsRelations,
                    witness,
                    residual: self.pres.format(&s),
                }));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HopfLaw {
    CoproductRespectsRelations,
    CounitRespectsRelations,
    AntipodeRespectsRelations,
    Coassociativity,
    LeftCounit,
    RightCounit,
    LeftAntipode,
    RightAntipode,
}

impl fmt::Display for HopfLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HopfLaw::CoproductRespectsRelations => "Δ respects the relations",
            HopfLaw::CounitRespectsRelations => "ε respects the relations",
            HopfLaw::AntipodeRespectsRelations => "S respects the relations",
            HopfLaw::Coassociativity => "(Δ⊗id)Δ = (id⊗Δ)Δ",
            HopfLaw::LeftCounit => "(ε⊗id)Δ = id",
            HopfLaw::RightCounit => "(id⊗ε)Δ = id",
            HopfLaw::LeftAntipode => "m(S⊗id)Δ = ε1",
            HopfLaw::RightAntipode => "m(id⊗S)Δ = ε1",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HopfFailure {
    pub law: HopfLaw,
    /// The monomial or rule at which the law fails.
    pub witness: String,
    /// What is left after subtracting the two sides.
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HopfReport {
    pub max_degree: usize,
    pub monomials: usize,
    pub rules: usize,
    pub failure: Option<HopfFailure>,
}

impl HopfReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks that Δ, ε, S respect the relations, then coassociativity and both
/// counit and antipode laws on every normal monomial up to `max_degree`.
pub fn hopf_axiom_check(h: &HopfStructure, max_degree: usize) -> Result<HopfReport> {
    check_size("Hopf check degree", max_degree as u128, MAX_CHECK_DEGREE as u128)?;
    let words = h.pres.normal_words(max_degree);
    let rules = h.pres.rules().len();
    let mut failure = h.check_rules()?;
    if failure.is_none() {
        let results = words
            .par_iter()
            .map(|w| h.check_word(w))
            .collect::<Result<Vec<_>>>()?;
        failure = results.into_iter().flatten().next();
    }
    Ok(HopfReport {
        max_degree,
        monomials: words.len(),
        rules,
        failure,
    })
}
