//! Free model of the Hopf algebra generated by `Λ^n_m`, `p^n` and their
//! iterated antipodes.
//!
//! Text form: `L[a,b]` is `Λ^a_b`, `P[a]` is `p^a`, `S(x)` and `S^k(x)`
//! are antipoded letters, juxtaposition separated by spaces is the
//! product, `I` is the unit. Terms are joined by ` + ` / ` - ` with an
//! optional leading coefficient such as `2/3` or `(1+2i)`, e.g.
//! `L[0,1] S(P[0]) - 2/3 I`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    /// `Λ^a_b`
    Lambda(u16, u16),
    /// `p^a`
    P(u16),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: Gen,
    /// Number of antipode applications.
    pub s: u16,
}

impl Letter {
    pub fn lambda(a: usize, b: usize) -> Self {
        Letter { gen: Gen::Lambda(a as u16, b as u16), s: 0 }
    }

    pub fn p(a: usize) -> Self {
        Letter { gen: Gen::P(a as u16), s: 0 }
    }

    pub fn antipoded(self, k: u16) -> Self {
        Letter { gen: self.gen, s: self.s + k }
    }

    pub fn is_p(&self) -> bool {
        matches!(self.gen, Gen::P(_))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = match self.s {
            0 => String::new(),
            1 => String::from("S("),
            k => alloc::format!("S^{k}("),
        };
        let close = if self.s == 0 { "" } else { ")" };
        match self.gen {
            Gen::Lambda(a, b) => write!(f, "{open}L[{a},{b}]{close}"),
            Gen::P(a) => write!(f, "{open}P[{a}]{close}"),
        }
    }
}

/// Ordered product of letters; the empty word is the unit `I`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + o.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&o.0);
        Word(v)
    }

    /// Number of `p` letters (of any antipode degree).
    pub fn p_degree(&self) -> usize {
        self.0.iter().filter(|l| l.is_p()).count()
    }

    /// Every letter is a `Λ` letter.
    pub fn is_lambda_only(&self) -> bool {
        self.p_degree() == 0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Finite linear combination of words, zero coefficients pruned.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<S> {
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> Default for Element<S> {
    fn default() -> Self {
        Element { terms: BTreeMap::new() }
    }
}

impl<S: Scalar> Element<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::from_word(Word::unit())
    }

    pub fn from_word(w: Word) -> Self {
        Self::term(S::one(), w)
    }

    pub fn term(c: S, w: Word) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn add_term(&mut self, w: Word, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                v.add_assign(&c);
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&S::one().neg()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v.mul(c));
        }
        out
    }

    /// Free-algebra product.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                out.add_term(u.concat(v), a.mul(b));
            }
        }
        out
    }

    /// Parses the text form described in the module docs.
    pub fn parse(src: &str) -> Option<Self> {
        parse_element(src)
    }
}

fn display_terms<S: Scalar, K>(
    f: &mut fmt::Formatter<'_>,
    terms: &[(K, &S)],
    show: impl Fn(&K, &mut fmt::Formatter<'_>) -> fmt::Result,
) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (i, (w, c)) in terms.iter().enumerate() {
        let text = alloc::format!("{c}");
        let (neg, mag) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text.as_str()),
        };
        match (i, neg) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        if mag != "1" {
            write!(f, "{mag} ")?;
        }
        show(w, f)?;
    }
    Ok(())
}

impl<S: Scalar> fmt::Display for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // longest words first, so the unit term trails
        let mut terms: Vec<(&Word, &S)> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(b.0)));
        display_terms(f, &terms, |w, f| write!(f, "{w}"))
    }
}

/// Finite map from `k`-tuples of words to coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorElement<S> {
    k: usize,
    terms: BTreeMap<Vec<Word>, S>,
}

impl<S: Scalar> TensorElement<S> {
    pub fn zero(k: usize) -> Self {
        TensorElement { k, terms: BTreeMap::new() }
    }

    pub fn slots(&self) -> usize {
        self.k
    }

    pub fn add_term(&mut self, ws: Vec<Word>, c: S) {
        assert_eq!(ws.len(), self.k, "slot count mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&ws) {
            Some(v) => {
                v.add_assign(&c);
                if v.is_zero() {
                    self.terms.remove(&ws);
                }
            }
            None => {
                self.terms.insert(ws, c);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Word>, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.neg());
        }
        out
    }
}

impl<S: Scalar> fmt::Display for TensorElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(&Vec<Word>, &S)> = self.terms.iter().collect();
        display_terms(f, &terms, |ws, f| {
            for (i, w) in ws.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ⊗ ")?;
                }
                if w.len() > 1 {
                    write!(f, "({w})")?;
                } else {
                    write!(f, "{w}")?;
                }
            }
            Ok(())
        })
    }
}

/// Structure maps of the free model for a fixed dimension `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeHopf {
    n: usize,
}

impl FreeHopf {
    pub fn new(n: usize) -> Self {
        FreeHopf { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coproduct of one canonical letter; every term has coefficient 1.
    pub fn letter_coproduct(&self, l: Letter) -> Vec<(Word, Word)> {
        let s = l.s;
        let mk = |g: Gen| Word::letter(Letter { gen: g, s });
        let n = self.n as u16;
        match l.gen {
            Gen::Lambda(a, b) => (0..n)
                .map(|c| {
                    let left = mk(Gen::Lambda(a, c));
                    let right = mk(Gen::Lambda(c, b));
                    if s.is_multiple_of(2) {
                        (left, right)
                    } else {
                        (right, left)
                    }
                })
                .collect(),
            Gen::P(a) => {
                assert!(s <= 1, "non-canonical p letter");
                let mut out: Vec<(Word, Word)> = (0..n)
                    .map(|k| {
                        let lam = Word::letter(Letter { gen: Gen::Lambda(a, k), s });
                        let p = mk(Gen::P(k));
                        if s == 0 {
                            (lam, p)
                        } else {
                            (p, lam)
                        }
                    })
                    .collect();
                if s == 0 {
                    out.push((mk(Gen::P(a)), Word::unit()));
                } else {
                    out.push((Word::unit(), mk(Gen::P(a))));
                }
                out
            }
        }
    }

    /// Coproduct terms of a word (each with coefficient 1, pairwise distinct).
    pub fn word_coproduct(&self, w: &Word) -> Vec<(Word, Word)> {
        let mut acc = vec![(Word::unit(), Word::unit())];
        for &l in w.letters() {
            let lc = self.letter_coproduct(l);
            let mut next = Vec::with_capacity(acc.len() * lc.len());
            for (a, b) in &acc {
                for (c, d) in &lc {
                    next.push((a.concat(c), b.concat(d)));
                }
            }
            acc = next;
        }
        acc
    }

    /// `Δ^{k-1}` on a word as `k`-tuples, iterating on the last slot.
    pub fn word_iterated_coproduct(&self, w: &Word, k: usize) -> Vec<Vec<Word>> {
        assert!(k >= 1, "k must be positive");
        let mut acc = vec![vec![w.clone()]];
        for _ in 1..k {
            let mut next = Vec::new();
            for mut t in acc {
                let last = t.pop().expect("nonempty");
                for (a, b) in self.word_coproduct(&last) {
                    let mut u = t.clone();
                    u.push(a);
                    u.push(b);
                    next.push(u);
                }
            }
            acc = next;
        }
        acc
    }

    pub fn coproduct<S: Scalar>(&self, x: &Element<S>) -> TensorElement<S> {
        self.iterated_coproduct(x, 2)
    }

    /// `Δ^{k-1}(x)`; `k = 1` returns `x` in a single slot.
    pub fn iterated_coproduct<S: Scalar>(&self, x: &Element<S>, k: usize) -> TensorElement<S> {
        let mut out = TensorElement::zero(k);
        for (w, c) in x.iter() {
            for t in self.word_iterated_coproduct(w, k) {
                out.add_term(t, c.clone());
            }
        }
        out
    }

    /// `(Δ ⊗ id ⊗ … ⊗ id)` applied at slot `slot` of a tensor element.
    pub fn coproduct_at<S: Scalar>(&self, x: &TensorElement<S>, slot: usize) -> TensorElement<S> {
        let mut out = TensorElement::zero(x.slots() + 1);
        for (ws, c) in x.iter() {
            for (a, b) in self.word_coproduct(&ws[slot]) {
                let mut u = Vec::with_capacity(ws.len() + 1);
                u.extend_from_slice(&ws[..slot]);
                u.push(a);
                u.push(b);
                u.extend_from_slice(&ws[slot + 1..]);
                out.add_term(u, c.clone());
            }
        }
        out
    }

    pub fn letter_counit(&self, l: Letter) -> bool {
        match l.gen {
            Gen::Lambda(a, b) => a == b,
            Gen::P(_) => false,
        }
    }

    pub fn word_counit(&self, w: &Word) -> bool {
        w.letters().iter().all(|&l| self.letter_counit(l))
    }

    pub fn counit<S: Scalar>(&self, x: &Element<S>) -> S {
        let mut acc = S::zero();
        for (w, c) in x.iter() {
            if self.word_counit(w) {
                acc.add_assign(c);
            }
        }
        acc
    }

    /// Antipode of a canonical letter, canonicalized: `S(S(p^n))` becomes
    /// `−Σ_k S(p^k) S²(Λ^n_k)`.
    pub fn letter_antipode(&self, l: Letter) -> Vec<(Word, i64)> {
        match (l.gen, l.s) {
            (Gen::P(a), 1) => (0..self.n as u16)
                .map(|k| {
                    let w = Word(vec![
                        Letter { gen: Gen::P(k), s: 1 },
                        Letter { gen: Gen::Lambda(a, k), s: 2 },
                    ]);
                    (w, -1)
                })
                .collect(),
            _ => vec![(Word::letter(l.antipoded(1)), 1)],
        }
    }

    /// Signed word expansion of `S(w)`.
    pub fn word_antipode_terms(&self, w: &Word) -> Vec<(Word, i64)> {
        let mut acc = vec![(Word::unit(), 1i64)];
        for &l in w.letters().iter().rev() {
            let la = self.letter_antipode(l);
            let mut next = Vec::with_capacity(acc.len() * la.len());
            for (u, c) in &acc {
                for (v, d) in &la {
                    next.push((u.concat(v), c * d));
                }
            }
            acc = next;
        }
        acc
    }

    pub fn word_antipode<S: Scalar>(&self, w: &Word) -> Element<S> {
        let mut out = Element::zero();
        for (u, c) in self.word_antipode_terms(w) {
            out.add_term(u, S::from_i64(c));
        }
        out
    }

    pub fn antipode<S: Scalar>(&self, x: &Element<S>) -> Element<S> {
        let mut out = Element::zero();
        for (w, c) in x.iter() {
            for (u, d) in self.word_antipode_terms(w) {
                out.add_term(u, c.mul(&S::from_i64(d)));
            }
        }
        out
    }

    /// `Ad(w) = w₁ S(w₃) ⊗ w₂`.
    pub fn adjoint_coaction<S: Scalar>(&self, x: &Element<S>) -> TensorElement<S> {
        let mut out = TensorElement::zero(2);
        for (w, c) in x.iter() {
            for t in self.word_iterated_coproduct(w, 3) {
                for (s3, d) in self.word_antipode_terms(&t[2]) {
                    out.add_term(vec![t[0].concat(&s3), t[1].clone()], c.mul(&S::from_i64(d)));
                }
            }
        }
        out
    }

    /// `Ad` applied at slot `slot` of a tensor element.
    pub fn adjoint_at<S: Scalar>(&self, x: &TensorElement<S>, slot: usize) -> TensorElement<S> {
        let mut out = TensorElement::zero(x.slots() + 1);
        for (ws, c) in x.iter() {
            for t in self.word_iterated_coproduct(&ws[slot], 3) {
                for (s3, d) in self.word_antipode_terms(&t[2]) {
                    let mut u = Vec::with_capacity(ws.len() + 1);
                    u.extend_from_slice(&ws[..slot]);
                    u.push(t[0].concat(&s3));
                    u.push(t[1].clone());
                    u.extend_from_slice(&ws[slot + 1..]);
                    out.add_term(u, c.mul(&S::from_i64(d)));
                }
            }
        }
        out
    }

    /// Letters `Λ^a_b`, `p^a` and their first antipodes.
    pub fn alphabet(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for s in 0..2 {
            for a in 0..self.n {
                for b in 0..self.n {
                    out.push(Letter::lambda(a, b).antipoded(s));
                }
            }
            for a in 0..self.n {
                out.push(Letter::p(a).antipoded(s));
            }
        }
        out
    }

    /// The generators `Λ^a_b` and `p^a`.
    pub fn generators(&self) -> Vec<Letter> {
        self.alphabet().into_iter().filter(|l| l.s == 0).collect()
    }

    /// All words over `letters` of length at most `max_len`, shortest first.
    pub fn words_up_to(letters: &[Letter], max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::unit()];
        let mut layer = vec![Word::unit()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * letters.len());
            for w in &layer {
                for &l in letters {
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

// ---- text parser ----

fn parse_letter(tok: &str) -> Option<Letter> {
    let (s, inner) = if let Some(rest) = tok.strip_prefix("S^") {
        let open = rest.find('(')?;
        let k: u16 = rest[..open].parse().ok()?;
        (k, rest[open + 1..].strip_suffix(')')?)
    } else if let Some(rest) = tok.strip_prefix("S(") {
        (1, rest.strip_suffix(')')?)
    } else {
        (0, tok)
    };
    let body = inner.strip_suffix(']')?;
    let gen = if let Some(ix) = body.strip_prefix("L[") {
        let (a, b) = ix.split_once(',')?;
        Gen::Lambda(a.trim().parse().ok()?, b.trim().parse().ok()?)
    } else {
        Gen::P(body.strip_prefix("P[")?.trim().parse().ok()?)
    };
    Some(Letter { gen, s })
}

fn parse_word(src: &str) -> Option<Word> {
    let src = src.trim();
    if src == "I" {
        return Some(Word::unit());
    }
    src.split_whitespace().map(parse_letter).collect::<Option<Vec<_>>>().map(Word)
}

/// Splits at top-level ` + ` / ` - ` separators (outside brackets).
fn split_terms(src: &str) -> Vec<(bool, &str)> {
    let src = src.trim();
    let (mut neg, body) = match src.strip_prefix('-') {
        Some(r) => (true, r.trim_start()),
        None => (false, src),
    };
    let bytes = body.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b' ' if depth == 0 && i + 2 < bytes.len() && bytes[i + 2] == b' ' => {
                let c = bytes[i + 1];
                if c == b'+' || c == b'-' {
                    out.push((neg, &body[start..i]));
                    neg = c == b'-';
                    i += 3;
                    start = i;
                    continue;
                }
            }
            _ => {}
        }
        i += 1;
    }
    out.push((neg, &body[start..]));
    out
}

fn parse_element<S: Scalar>(src: &str) -> Option<Element<S>> {
    let src = src.trim();
    if src == "0" {
        return Some(Element::zero());
    }
    let mut out = Element::zero();
    for (neg, term) in split_terms(src) {
        let term = term.trim();
        let (coef, rest) = match term.find(['L', 'P', 'S', 'I']) {
            Some(0) => (S::one(), term),
            Some(p) => (parse_coefficient::<S>(term[..p].trim())?, &term[p..]),
            None => return None,
        };
        let w = parse_word(rest)?;
        out.add_term(w, if neg { coef.neg() } else { coef });
    }
    Some(out)
}

fn parse_coefficient<S: Scalar>(s: &str) -> Option<S> {
    let s = s.trim_start_matches('(').trim_end_matches(')');
    let e = crate::scalar::Exact::parse(s)?;
    let re = (e.re.numer().try_into().ok()?, e.re.denom().try_into().ok()?);
    let im = (e.im.numer().try_into().ok()?, e.im.denom().try_into().ok()?);
    S::from_parts(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use alloc::string::ToString;

    type E = Element<Exact>;

    fn l(a: usize, b: usize) -> Letter {
        Letter::lambda(a, b)
    }
    fn p(a: usize) -> Letter {
        Letter::p(a)
    }
    fn w(ls: &[Letter]) -> Word {
        Word(ls.to_vec())
    }

    #[test]
    fn unit_coproduct_and_counit() {
        let h = FreeHopf::new(2);
        let d = h.coproduct(&E::unit());
        assert_eq!(d.len(), 1);
        assert_eq!(d.iter().next().unwrap().0, &vec![Word::unit(), Word::unit()]);
        assert_eq!(h.counit(&E::unit()), Exact::one());
        assert_eq!(h.iterated_coproduct(&E::unit(), 3).iter().next().unwrap().0.len(), 3);
    }

    #[test]
    fn p_coproduct() {
        let h = FreeHopf::new(2);
        let d = h.coproduct(&E::from_word(Word::letter(p(1))));
        let mut want = TensorElement::zero(2);
        for k in 0..2 {
            want.add_term(vec![Word::letter(l(1, k)), Word::letter(p(k))], Exact::one());
        }
        want.add_term(vec![Word::letter(p(1)), Word::unit()], Exact::one());
        assert_eq!(d, want);
    }

    #[test]
    fn lambda_p_product_has_2n_terms() {
        let h = FreeHopf::new(2);
        let d = h.coproduct(&E::from_word(w(&[l(0, 0), p(1)])));
        // (Λ^0_a ⊗ Λ^a_0)(Λ^1_k ⊗ p^k + p^1 ⊗ I): N·(N+1) products
        assert_eq!(d.len(), 2 * 3);
    }

    #[test]
    fn counit_values() {
        let h = FreeHopf::new(2);
        assert_eq!(h.counit(&E::from_word(Word::letter(p(0)))), Exact::zero());
        assert_eq!(h.counit(&E::from_word(w(&[l(0, 1), l(1, 0)]))), Exact::zero());
        assert_eq!(h.counit(&E::from_word(w(&[l(1, 1).antipoded(3), l(0, 0)]))), Exact::one());
    }

    #[test]
    fn antipode_canonicalizes_p() {
        let h = FreeHopf::new(2);
        // S(Λ^a_e S(p^g)) = −Σ_k S(p^k) S²(Λ^g_k) S(Λ^a_e)
        let x = w(&[l(0, 1), p(1).antipoded(1)]);
        let got: E = h.word_antipode(&x);
        let mut want = E::zero();
        for k in 0..2 {
            want.add_term(
                w(&[p(k).antipoded(1), l(1, k).antipoded(2), l(0, 1).antipoded(1)]),
                Exact::from_i64(-1),
            );
        }
        assert_eq!(got, want);
        assert_eq!(h.antipode(&E::unit()), E::unit());
        let s2: E = h.antipode(&h.antipode(&E::from_word(Word::letter(l(0, 1)))));
        assert_eq!(s2, E::from_word(Word::letter(l(0, 1).antipoded(2))));
    }

    #[test]
    fn coassociativity_on_words() {
        let h = FreeHopf::new(2);
        for x in FreeHopf::words_up_to(&h.alphabet(), 2) {
            let e = E::from_word(x);
            let d = h.coproduct(&e);
            assert_eq!(h.coproduct_at(&d, 0), h.coproduct_at(&d, 1));
        }
    }

    #[test]
    fn adjoint_of_lambda() {
        let h = FreeHopf::new(2);
        let ad = h.adjoint_coaction(&E::from_word(Word::letter(l(0, 1))));
        let mut want = TensorElement::zero(2);
        for a in 0..2 {
            for b in 0..2 {
                want.add_term(vec![w(&[l(0, a), l(b, 1).antipoded(1)]), Word::letter(l(a, b))], Exact::one());
            }
        }
        assert_eq!(ad, want);
        let unit = h.adjoint_coaction(&E::unit());
        assert_eq!(unit.iter().next().unwrap().0, &vec![Word::unit(), Word::unit()]);
    }

    #[test]
    fn adjoint_coassociativity_on_p() {
        let h = FreeHopf::new(2);
        let ad = h.adjoint_coaction(&E::from_word(Word::letter(p(0))));
        assert_eq!(h.coproduct_at(&ad, 0), h.adjoint_at(&ad, 1));
    }

    #[test]
    fn text_roundtrip() {
        let x = E::parse("L[0,1] S(P[0]) - 2/3 I").unwrap();
        assert_eq!(x.to_string(), "L[0,1] S(P[0]) - 2/3 I");
        assert_eq!(x.coefficient(&Word::unit()), Exact::ratio(-2, 3));
        let y = E::parse("-S^2(L[1,0]) P[1] + (1+2i) L[0,0]").unwrap();
        assert_eq!(E::parse(&y.to_string()).unwrap(), y);
        assert_eq!(E::parse("0").unwrap(), E::zero());
        assert!(E::parse("Q[0]").is_none());
    }
}
