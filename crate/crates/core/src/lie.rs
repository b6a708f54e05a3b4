//! Quantum trace, the generators `L_A`, the braiding `σ` and the quantum
//! brackets.
//!
//! With `x_A` the components of the trace (`x_{Θ(n,m)} = V^m_n`,
//! `x_{Π} = 0`) every generator is a row of one vector identity:
//! `L_C(w) = x_C ε(w) − Σ_B x_B M[B][C](S(w))`.
//!
//! Bracket, Leibniz, Jacobi and coaction checks run over words in the
//! generators `Λ^a_b`, `p^a`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::forms::FormIndex;
use crate::functionals::{Atom, EvaluationTables, FunctionalExpr, Primitive};
use crate::report::{CheckEntry, CheckReport, Status, Tally};
use crate::scalar::Scalar;
use crate::tensor::Matrix;
use crate::words::{Element, FreeHopf, Letter, TensorElement, Word};

/// Bracket evaluation route.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// `Σ_G C[A][B][G] L_G(w)`.
    ClosedForm,
    /// `(L_A ⊗ L_B) Ad(w)`.
    Adjoint,
    /// `(L_A ⋆ L_B)(w) − σ^{CD}_{AB} (L_C ⋆ L_D)(w)`.
    SigmaConv,
}

/// `σ(Π^A ⊗ Π^B) = Σ σ[A][B][C][E] Π^C ⊗ Π^E`, flat in `FormIndex` order.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaTensor<S> {
    n: usize,
    d: usize,
    data: Vec<S>,
}

impl<S: Scalar> SigmaTensor<S> {
    pub fn from_data(n: usize, data: Vec<S>) -> Option<Self> {
        let d = FormIndex::count(n);
        (data.len() == d * d * d * d).then_some(SigmaTensor { n, d, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn get(&self, a: usize, b: usize, c: usize, e: usize) -> &S {
        let d = self.d;
        &self.data[((a * d + b) * d + c) * d + e]
    }

    /// Entries with a `Π ⊗ Θ` input come from the rebuilt middle block.
    pub fn is_reconstructed(&self, a: usize, b: usize) -> bool {
        FormIndex::from_index(a, self.n).is_pi() && !FormIndex::from_index(b, self.n).is_pi()
    }

    /// `D² × D²` operator, row `A·D+B`, column `C·D+E`.
    pub fn as_matrix(&self) -> Matrix<S> {
        let dd = self.d * self.d;
        Matrix::from_fn(dd, dd, |i, j| self.data[i * dd + j].clone())
    }
}

/// Structure constants `[L_A, L_B] = Σ_G C[A][B][G] L_G`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<S> {
    n: usize,
    d: usize,
    data: Vec<S>,
}

impl<S: Scalar> StructureConstants<S> {
    pub fn get(&self, a: usize, b: usize, g: usize) -> &S {
        &self.data[(a * self.d + b) * self.d + g]
    }

    /// Nonzero entries as `(A, B, G, value)`.
    pub fn sparse(&self) -> Vec<(FormIndex, FormIndex, FormIndex, S)> {
        let d = self.d;
        let mut out = Vec::new();
        for (i, v) in self.data.iter().enumerate() {
            if !v.is_zero() {
                let f = |k: usize| FormIndex::from_index(k, self.n);
                out.push((f(i / (d * d)), f((i / d) % d), f(i % d), v.clone()));
            }
        }
        out
    }
}

/// Quantum Lie structure over a set of evaluation tables.
pub struct QuantumLie<'t, S: Scalar> {
    t: &'t EvaluationTables<S>,
    n: usize,
    d: usize,
    v: Matrix<S>,
    x: Vec<S>,
    sigma: SigmaTensor<S>,
    consts: StructureConstants<S>,
    l_cache: RefCell<BTreeMap<Word, Rc<Vec<S>>>>,
}

/// Words whose `L` row is memoized.
const L_CACHE_LEN: usize = 4;

impl<'t, S: Scalar> QuantumLie<'t, S> {
    pub fn new(t: &'t EvaluationTables<S>) -> Self {
        let n = t.n();
        let d = t.d();
        // V^a_b = Σ_k f̃^a_k(Λ^k_b)
        let v = Matrix::from_fn(n, n, |a, b| {
            let mut acc = S::zero();
            for k in 0..n {
                acc.add_assign(&t.evaluate(Primitive::Ftilde(a, k), &Word::letter(Letter::lambda(k, b))));
            }
            acc
        });
        let x: Vec<S> = FormIndex::all(n)
            .map(|f| match f {
                FormIndex::Theta(a, b) => v.get(b, a).clone(),
                FormIndex::Pi(_) => S::zero(),
            })
            .collect();
        let sigma = build_sigma(t);
        let mut c = vec![S::zero(); d * d * d];
        for a in 0..d {
            for b in 0..d {
                for g in 0..d {
                    let mut acc = if b == g { x[a].clone() } else { S::zero() };
                    for (e, xe) in x.iter().enumerate() {
                        if !xe.is_zero() {
                            acc = acc.sub(&xe.mul(sigma.get(g, e, a, b)));
                        }
                    }
                    c[(a * d + b) * d + g] = acc;
                }
            }
        }
        QuantumLie {
            t,
            n,
            d,
            v,
            x,
            sigma,
            consts: StructureConstants { n, d, data: c },
            l_cache: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn tables(&self) -> &'t EvaluationTables<S> {
        self.t
    }

    /// `V^a_b` as an `N × N` matrix.
    pub fn v(&self) -> &Matrix<S> {
        &self.v
    }

    /// Components of the quantum trace on the form basis.
    pub fn trace_components(&self) -> &[S] {
        &self.x
    }

    pub fn sigma(&self) -> &SigmaTensor<S> {
        &self.sigma
    }

    pub fn structure_constants(&self) -> &StructureConstants<S> {
        &self.consts
    }

    fn hopf(&self) -> &FreeHopf {
        self.t.hopf()
    }

    fn tol(&self) -> f64 {
        self.t.tolerance()
    }

    /// `L_A` written out in primitive functionals:
    /// `L^a_b = V^a_b ε − V^c_d (f̃^a_c ⋆ f^d_b)∘S`, `L_a = −V^c_d (η̃_c ⋆ f^d_a)∘S`.
    pub fn generator_expr(&self, a: FormIndex) -> (FunctionalExpr<S>, FunctionalExpr<S>) {
        let n = self.n;
        let mut unit = FunctionalExpr::zero();
        let mut twisted = FunctionalExpr::zero();
        for c in 0..n {
            for d in 0..n {
                let coef = self.v.get(c, d).neg();
                let atoms = match a {
                    FormIndex::Theta(b, a) => {
                        vec![Atom::Prim(Primitive::Ftilde(a, c)), Atom::Prim(Primitive::F(d, b))]
                    }
                    FormIndex::Pi(a) => {
                        vec![Atom::Prim(Primitive::EtaDown(c)), Atom::Prim(Primitive::F(d, a))]
                    }
                };
                twisted.push(coef, atoms);
            }
        }
        if let FormIndex::Theta(b, a) = a {
            unit.push(self.v.get(a, b).clone(), Vec::new());
        }
        (unit, twisted.after_antipode())
    }

    /// `L_A(w)` for every `A`.
    pub fn l_row(&self, w: &Word) -> Rc<Vec<S>> {
        if let Some(r) = self.l_cache.borrow().get(w) {
            return r.clone();
        }
        let mut row: Vec<S> = self.t.form_row_antipode(&self.x, w).into_iter().map(|v| v.neg()).collect();
        if self.hopf().word_counit(w) {
            for (r, x) in row.iter_mut().zip(&self.x) {
                r.add_assign(x);
            }
        }
        let row = Rc::new(row);
        if w.len() <= L_CACHE_LEN {
            self.l_cache.borrow_mut().insert(w.clone(), row.clone());
        }
        row
    }

    pub fn l_value(&self, a: FormIndex, w: &Word) -> S {
        self.l_row(w)[a.index(self.n)].clone()
    }

    pub fn l_row_el(&self, x: &Element<S>) -> Vec<S> {
        let mut out = vec![S::zero(); self.d];
        for (w, c) in x.iter() {
            for (o, v) in out.iter_mut().zip(self.l_row(w).iter()) {
                if !v.is_zero() {
                    o.add_assign(&c.mul(v));
                }
            }
        }
        out
    }

    /// `A ↦ (w ⋆ L_A) = Σ L_A(w₁) w₂`.
    pub fn differential(&self, x: &Element<S>) -> Vec<Element<S>> {
        let mut out = vec![Element::zero(); self.d];
        for (w, c) in x.iter() {
            for (u, v) in self.hopf().word_coproduct(w) {
                let row = self.l_row(&u);
                for (a, l) in row.iter().enumerate() {
                    if !l.is_zero() {
                        out[a].add_term(v.clone(), c.mul(l));
                    }
                }
            }
        }
        out
    }

    /// `C ↦ (x ⋆ M[A][C]) = Σ M[A][C](x₁) x₂`, so that `Π^A x = Σ_C (x ⋆ M[A][C]) Π^C`.
    pub fn push_form_right(&self, a: FormIndex, x: &Element<S>) -> Vec<Element<S>> {
        let ai = a.index(self.n);
        let mut out = vec![Element::zero(); self.d];
        for (w, c) in x.iter() {
            for (u, v) in self.hopf().word_coproduct(w) {
                let m = self.t.form_matrix(&u);
                for (ci, o) in out.iter_mut().enumerate() {
                    let e = m.get(ai, ci);
                    if !e.is_zero() {
                        o.add_term(v.clone(), c.mul(e));
                    }
                }
            }
        }
        out
    }

    /// `(L_C ⋆ L_D)(w)` for all `C, D`.
    pub fn convolution_table(&self, w: &Word) -> Matrix<S> {
        let mut k = Matrix::zeros(self.d, self.d);
        for (u, v) in self.hopf().word_coproduct(w) {
            let (lu, lv) = (self.l_row(&u), self.l_row(&v));
            outer_add(&mut k, &lu, &lv, &S::one());
        }
        k
    }

    fn adjoint_table(&self, ad: &TensorElement<S>) -> Matrix<S> {
        let mut k = Matrix::zeros(self.d, self.d);
        for (ws, c) in ad.iter() {
            outer_add(&mut k, &self.l_row(&ws[0]), &self.l_row(&ws[1]), c);
        }
        k
    }

    /// `[L_A, L_B](w)` for all `A, B` along one route.
    pub fn bracket_table(&self, w: &Word, route: Route) -> Matrix<S> {
        let d = self.d;
        match route {
            Route::Adjoint => self.adjoint_table(&self.hopf().adjoint_coaction(&Element::from_word(w.clone()))),
            Route::SigmaConv => {
                let k = self.convolution_table(w);
                self.sigma_correct(&k, |c, dd| k.get(c, dd).clone())
            }
            Route::ClosedForm => {
                let l = self.l_row(w);
                Matrix::from_fn(d, d, |a, b| {
                    let mut acc = S::zero();
                    for (g, lg) in l.iter().enumerate() {
                        if !lg.is_zero() {
                            acc.add_assign(&self.consts.get(a, b, g).mul(lg));
                        }
                    }
                    acc
                })
            }
        }
    }

    /// `K[A][B] − Σ_{C,D} σ[C][D][A][B] pick(C, D)`.
    fn sigma_correct(&self, k: &Matrix<S>, pick: impl Fn(usize, usize) -> S) -> Matrix<S> {
        let d = self.d;
        let mut out = k.clone();
        for c in 0..d {
            for dd in 0..d {
                let v = pick(c, dd);
                if v.is_zero() {
                    continue;
                }
                for a in 0..d {
                    for b in 0..d {
                        let s = self.sigma.get(c, dd, a, b);
                        if !s.is_zero() {
                            out.add_at(a, b, &s.mul(&v).neg());
                        }
                    }
                }
            }
        }
        out
    }

    pub fn bracket(&self, a: FormIndex, b: FormIndex, w: &Word, route: Route) -> S {
        self.bracket_table(w, route).get(a.index(self.n), b.index(self.n)).clone()
    }

    fn close(&self, m: &Matrix<S>) -> bool {
        m.data().iter().all(|v| v.is_negligible(self.tol()))
    }

    fn bracket_words(&self, max_len: usize) -> Vec<Word> {
        let mut words = FreeHopf::words_up_to(&self.hopf().generators(), max_len);
        // translation pairs always take part
        if max_len < 2 {
            for a in 0..self.n {
                for b in 0..self.n {
                    words.push(Word(vec![Letter::p(a), Letter::p(b)]));
                }
            }
        }
        words
    }

    /// `Σ_{c,k} V^k_c Λ^c_b S(Λ^n_k) = V^n_b I`, pairing-checked.
    pub fn check_quantum_trace(&self, order: usize) -> CheckEntry {
        let n = self.n;
        let mut tally = Tally::default();
        for i in 0..n {
            for b in 0..n {
                let mut x = Element::zero();
                for c in 0..n {
                    for k in 0..n {
                        let w = Word(vec![Letter::lambda(c, b), Letter::lambda(i, k).antipoded(1)]);
                        x.add_term(w, self.v.get(k, c).clone());
                    }
                }
                x.add_term(Word::unit(), self.v.get(i, b).neg());
                let out = self.t.pairing_residual(&x, order);
                tally.record(out.residual, !out.zero, || {
                    format!("n={i}, b={b}: {}", out.witness.clone().unwrap_or_default())
                });
            }
        }
        tally.entry("quantum_trace").with_note(format!("pairing order {order}"))
    }

    /// `L(I) = 0`, `L_a` on `Λ`-words, and the primitive transcription of
    /// each generator against the vector identity.
    pub fn check_generators(&self, max_len: usize) -> CheckReport {
        let tol = self.tol();
        let mut rep = CheckReport::new();
        let mut unit = Tally::default();
        for (a, v) in self.l_row(&Word::unit()).iter().enumerate() {
            unit.record(v.magnitude(), !v.is_negligible(tol), || format!("{}", FormIndex::from_index(a, self.n)));
        }
        rep.push(unit.entry("generators_vanish_at_unit"));

        let words = FreeHopf::words_up_to(&self.hopf().alphabet(), max_len);
        let mut lam = Tally::default();
        for w in words.iter().filter(|w| w.is_lambda_only()) {
            let row = self.l_row(w);
            for a in 0..self.n {
                let v = &row[FormIndex::Pi(a).index(self.n)];
                lam.record(v.magnitude(), !v.is_negligible(tol), || format!("L_{a}({w})"));
            }
        }
        rep.push(lam.entry("translation_generators_vanish_on_lambda_words"));

        let mut expr = Tally::default();
        let short: Vec<&Word> = words.iter().filter(|w| w.len() <= 2).collect();
        for f in FormIndex::all(self.n) {
            let (unit, twisted) = self.generator_expr(f);
            for w in &short {
                let x = Element::from_word((*w).clone());
                let want = self.t.evaluate_expr(&unit, &x).add(&self.t.evaluate_expr(&twisted, &x));
                let r = want.sub(&self.l_value(f, w));
                expr.record(r.magnitude(), !r.is_negligible(tol), || format!("L at {f} on {w}"));
            }
        }
        rep.push(expr.entry("generator_transcription"));
        rep
    }

    /// Properties of `σ`: the `Θ ⊗ Θ` block stays in `Θ ⊗ Θ`, and
    /// whether `σ² = id` (recorded, not required).
    pub fn check_sigma(&self) -> CheckReport {
        let d = self.d;
        let n = self.n;
        let mut rep = CheckReport::new();
        let mut sector = Tally::default();
        for a in 0..n * n {
            for b in 0..n * n {
                for c in 0..d {
                    for e in 0..d {
                        if c < n * n && e < n * n {
                            continue;
                        }
                        let v = self.sigma.get(a, b, c, e);
                        sector.record(v.magnitude(), !v.is_negligible(self.tol()), || {
                            let f = |k| FormIndex::from_index(k, n);
                            format!("σ[{},{}][{},{}]", f(a), f(b), f(c), f(e))
                        });
                    }
                }
            }
        }
        rep.push(sector.entry("sigma_theta_sector"));
        let m = self.sigma.as_matrix();
        let r = m.mul(&m).sub(&Matrix::identity(d * d));
        let involutive = self.close(&r);
        let mut e = CheckEntry::new("sigma_involutive", true, r.max_abs())
            .with_note(if involutive { "σ² = id" } else { "σ² ≠ id" });
        e.status = Status::Pass;
        rep.push(e);
        rep
    }

    /// Route agreement on all words up to `max_len` plus translation pairs.
    pub fn check_brackets(&self, max_len: usize) -> CheckReport {
        let d = self.d;
        let n = self.n;
        let tol = self.tol();
        let mut rep = CheckReport::new();
        let mut adj_sig = Tally::default();
        let mut closed = Tally::default();
        let mut literal = Tally::default();
        let mut low = Tally::default();
        let mut high = Tally::default();
        let mut closed_recon = false;
        let pis: Vec<usize> = (0..n).map(|a| FormIndex::Pi(a).index(n)).collect();
        for w in self.bracket_words(max_len) {
            let adj = self.bracket_table(&w, Route::Adjoint);
            let k = self.convolution_table(&w);
            let sig = self.sigma_correct(&k, |c, dd| k.get(c, dd).clone());
            let r = adj.sub(&sig);
            let at = |m: &Matrix<S>| {
                m.argmax_abs()
                    .map(|(a, b, _)| format!("[{},{}] on {w}", FormIndex::from_index(a, n), FormIndex::from_index(b, n)))
                    .unwrap_or_default()
            };
            adj_sig.record(r.max_abs(), !self.close(&r), || at(&r));

            let cf = self.bracket_table(&w, Route::ClosedForm);
            let r = cf.sub(&adj);
            if !self.close(&r) {
                if let Some((a, b, _)) = r.argmax_abs() {
                    closed_recon |= self.sigma.is_reconstructed(a, b);
                }
            }
            closed.record(r.max_abs(), !self.close(&r), || at(&r));

            // reading the correction as (L_C ⋆ L_B)
            let lit = self.sigma_correct(&k, |_, _| S::zero());
            let mut lit = lit;
            for c in 0..d {
                for dd in 0..d {
                    for a in 0..d {
                        for b in 0..d {
                            let s = self.sigma.get(c, dd, a, b);
                            if !s.is_zero() {
                                lit.add_at(a, b, &s.mul(k.get(c, b)).neg());
                            }
                        }
                    }
                }
            }
            let r = lit.sub(&adj);
            literal.record(r.max_abs(), !self.close(&r), || at(&r));

            let tally = if w.p_degree() <= 1 { &mut low } else { &mut high };
            for &a in &pis {
                for &b in &pis {
                    let v = adj.get(a, b);
                    tally.record(v.magnitude(), !v.is_negligible(tol), || {
                        format!("[{},{}] on {w}", FormIndex::from_index(a, n), FormIndex::from_index(b, n))
                    });
                }
            }
        }
        rep.push(adj_sig.entry("bracket_adjoint_vs_sigma_conv").with_note(format!("words up to length {max_len}")));
        let mut e = closed.entry("bracket_closed_form_vs_adjoint");
        if closed_recon {
            e = e.reconstructed();
        }
        rep.push(e);
        // the literal reading must disagree wherever brackets are not all trivial
        let lit = if literal.failed {
            CheckEntry::new("bracket_literal_reading_rejected", true, literal.residual)
                .with_note(format!("literal reading differs: {}", literal.first.unwrap_or_default()))
        } else {
            CheckEntry::skipped("bracket_literal_reading_rejected", "literal reading agrees on this word set")
        };
        rep.push(lit);
        rep.push(low.entry("bracket_translation_pair_low_degree"));
        let mut e = CheckEntry::new("bracket_translation_pair_degree_two", true, high.residual);
        e = e.with_note(if high.failed {
            format!("nonzero on p-degree 2, first at {}", high.first.unwrap_or_default())
        } else {
            String::from("zero on every p-degree 2 word")
        });
        rep.push(e);
        rep
    }

    /// `L_C(uv) = L_C(u)ε(v) + Σ_B c_{BC}(S(u)) L_B(v)`, with the
    /// coefficients written as primitive convolutions.
    pub fn check_twisted_leibniz(&self, max_len: usize) -> CheckEntry {
        let n = self.n;
        let d = self.d;
        let words = FreeHopf::words_up_to(&self.hopf().generators(), max_len);
        // coefficient functional c_{BC} before S
        let coef = |b: FormIndex, c: FormIndex| -> Vec<Atom> {
            use Primitive::*;
            let p = |x| Atom::Prim(x);
            match (c, b) {
                (FormIndex::Theta(bb, a), FormIndex::Theta(dd, cc)) => vec![p(Ftilde(a, cc)), p(F(dd, bb))],
                (FormIndex::Theta(bb, a), FormIndex::Pi(cc)) => vec![p(EtaUp(a)), p(F(cc, bb))],
                (FormIndex::Pi(a), FormIndex::Pi(bb)) => vec![p(F(bb, a))],
                (FormIndex::Pi(a), FormIndex::Theta(dd, cc)) => vec![p(EtaDown(cc)), p(F(dd, a))],
            }
        };
        let forms: Vec<FormIndex> = FormIndex::all(n).collect();
        let mut tally = Tally::default();
        for u in words.iter() {
            let su = self.hopf().word_antipode::<S>(u);
            let mut cm = Matrix::zeros(d, d);
            for &b in &forms {
                for &c in &forms {
                    let atoms = coef(b, c);
                    let mut acc = S::zero();
                    for (w, k) in su.iter() {
                        acc.add_assign(&k.mul(&self.t.evaluate_conv(&atoms, w)));
                    }
                    cm.set(b.index(n), c.index(n), acc);
                }
            }
            let lu = self.l_row(u);
            for v in words.iter().filter(|v| u.len() + v.len() <= max_len) {
                let lv = self.l_row(v);
                let luv = self.l_row(&u.concat(v));
                let mut rhs = cm.left_mul_vec(&lv);
                if self.hopf().word_counit(v) {
                    for (r, x) in rhs.iter_mut().zip(lu.iter()) {
                        r.add_assign(x);
                    }
                }
                for c in 0..d {
                    let r = luv[c].sub(&rhs[c]);
                    tally.record(r.magnitude(), !r.is_negligible(self.tol()), || {
                        format!("L at {} on ({u}, {v})", FormIndex::from_index(c, n))
                    });
                }
            }
        }
        tally.entry("twisted_leibniz").with_note(format!("word pairs up to total length {max_len}"))
    }

    /// The coproduct of `L` in composite form, `S'(L) = L∘S`, and `ε'(L) = 0`.
    pub fn check_l_coproduct(&self, max_len: usize) -> CheckReport {
        let n = self.n;
        let d = self.d;
        let tol = self.tol();
        let words = FreeHopf::words_up_to(&self.hopf().generators(), max_len);
        let mut rep = CheckReport::new();
        let mut cop = Tally::default();
        for u in &words {
            let ms = self.t.form_matrix_antipode(u);
            let lu = self.l_row(u);
            for v in words.iter().filter(|v| u.len() + v.len() <= max_len) {
                let lv = self.l_row(v);
                let luv = self.l_row(&u.concat(v));
                let eps_v = self.hopf().word_counit(v);
                for c in FormIndex::all(n) {
                    // L^a_b ⊗ ε + S'(f^{da}_{cb}) ⊗ L^c_d + S'(f^{ca}_b) ⊗ L_c, and the Π analogue
                    let ci = c.index(n);
                    let mut rhs = if eps_v { lu[ci].clone() } else { S::zero() };
                    for b in 0..d {
                        let m = ms.get(b, ci);
                        if !m.is_zero() && !lv[b].is_zero() {
                            rhs.add_assign(&m.mul(&lv[b]));
                        }
                    }
                    let r = luv[ci].sub(&rhs);
                    cop.record(r.magnitude(), !r.is_negligible(tol), || format!("{c} on ({u}, {v})"));
                }
            }
        }
        rep.push(cop.entry("generator_coproduct"));

        let mut anti = Tally::default();
        for w in &words {
            let lhs = self.l_row_el(&self.hopf().word_antipode(w));
            let mut rhs = vec![S::zero(); d];
            for (a, b) in self.hopf().word_coproduct(w) {
                let s2 = self.hopf().antipode(&self.hopf().word_antipode::<S>(&a));
                let m = self.t.form_matrix_el(&s2);
                let lb = self.l_row(&b);
                for (c, o) in rhs.iter_mut().enumerate() {
                    for (bb, l) in lb.iter().enumerate() {
                        let e = m.get(bb, c);
                        if !e.is_zero() && !l.is_zero() {
                            *o = o.sub(&e.mul(l));
                        }
                    }
                }
            }
            for c in 0..d {
                let r = lhs[c].sub(&rhs[c]);
                anti.record(r.magnitude(), !r.is_negligible(tol), || format!("{} on {w}", FormIndex::from_index(c, n)));
            }
        }
        rep.push(anti.entry("generator_antipode"));

        let mut counit = Tally::default();
        for (c, v) in self.l_row(&Word::unit()).iter().enumerate() {
            counit.record(v.magnitude(), !v.is_negligible(tol), || format!("{}", FormIndex::from_index(c, n)));
        }
        rep.push(counit.entry("generator_counit"));
        rep
    }

    /// `d(I) = 0` and `d(uv)_C = d(u)_C v + Σ_B (u ⋆ M[B][C]∘S) d(v)_B`.
    pub fn check_differential(&self, max_len: usize, order: usize) -> CheckReport {
        let n = self.n;
        let d = self.d;
        let mut rep = CheckReport::new();
        let du = self.differential(&Element::unit());
        let zero = du.iter().all(Element::is_zero);
        rep.push(CheckEntry::new("differential_of_unit", zero, 0.0));

        let words = FreeHopf::words_up_to(&self.hopf().generators(), max_len);
        let mut tally = Tally::default();
        for u in &words {
            let xu = Element::from_word(u.clone());
            let d_u = self.differential(&xu);
            // (u ⋆ M[B][C]∘S) = Σ M[B][C](S(u₁)) u₂
            let mut push: Vec<Vec<Element<S>>> = vec![vec![Element::zero(); d]; d];
            for (a, b) in self.hopf().word_coproduct(u) {
                let m = self.t.form_matrix_antipode(&a);
                for (bb, row) in push.iter_mut().enumerate() {
                    for (c, el) in row.iter_mut().enumerate() {
                        let e = m.get(bb, c);
                        if !e.is_zero() {
                            el.add_term(b.clone(), e.clone());
                        }
                    }
                }
            }
            for v in words.iter().filter(|v| u.len() + v.len() <= max_len) {
                let xv = Element::from_word(v.clone());
                let d_v = self.differential(&xv);
                let d_uv = self.differential(&xu.mul(&xv));
                for c in 0..d {
                    let mut rhs = d_u[c].mul(&xv);
                    for (bb, dv) in d_v.iter().enumerate() {
                        if !dv.is_zero() && !push[bb][c].is_zero() {
                            rhs = rhs.add(&push[bb][c].mul(dv));
                        }
                    }
                    let diff = d_uv[c].sub(&rhs);
                    if diff.is_zero() {
                        tally.record(0.0, false, String::new);
                        continue;
                    }
                    let out = self.t.pairing_residual(&diff, order);
                    tally.record(out.residual, !out.zero, || {
                        format!("{} on ({u}, {v})", FormIndex::from_index(c, n))
                    });
                }
            }
        }
        rep.push(tally.entry("differential_leibniz").with_note(format!("pairing order {order}")));
        rep
    }

    /// `(id ⊗ Ad)Ad = (Δ ⊗ id)Ad` as tensor elements.
    pub fn check_adjoint_coassociativity(&self, max_len: usize) -> CheckEntry {
        let h = self.hopf();
        let mut tally = Tally::default();
        let mut formal = true;
        for w in FreeHopf::words_up_to(&h.generators(), max_len) {
            let ad = h.adjoint_coaction(&Element::<S>::from_word(w.clone()));
            let r = h.adjoint_at(&ad, 1).sub(&h.coproduct_at(&ad, 0));
            if r.is_zero() {
                tally.record(0.0, false, String::new);
                continue;
            }
            // the canonical form of S²(p) hides the identity from word comparison
            formal = false;
            let out = self.t.tensor_pairing_residual(&r);
            tally.record(out.residual, !out.zero, || format!("{w}: {}", out.witness.clone().unwrap_or_default()));
        }
        let e = tally.entry("adjoint_coassociativity");
        if formal {
            e.with_note("equal as tensor words")
        } else {
            e.with_note("equal under slotwise pairing where words differ")
        }
    }

    /// `[L_A,[L_B,L_C]] − [[L_A,L_B],L_C] − σ^{EF}_{AB}[L_E,[L_F,L_C]]`
    /// in the adjoint picture: both nested brackets are
    /// `(L⊗L⊗L)` of `(id⊗Ad)Ad(w)` and `(Ad⊗id)Ad(w)`, summed slot by slot.
    pub fn check_jacobi(&self, max_len: usize) -> CheckEntry {
        let h = self.hopf();
        let n = self.n;
        let d = self.d;
        let at = |a: usize, b: usize, c: usize| (a * d + b) * d + c;
        let mut inner: BTreeMap<Word, Matrix<S>> = BTreeMap::new();
        let mut tally = Tally::default();
        for w in FreeHopf::words_up_to(&h.generators(), max_len) {
            let ad = h.adjoint_coaction(&Element::<S>::from_word(w.clone()));
            let mut nested_right = vec![S::zero(); d * d * d];
            let mut nested_left = vec![S::zero(); d * d * d];
            // Σ c L(v) per first-slot word u
            let mut by_u: BTreeMap<&Word, Vec<S>> = BTreeMap::new();
            for (ws, c) in ad.iter() {
                let (u, v) = (&ws[0], &ws[1]);
                let lv = self.l_row(v);
                if lv.iter().any(|x| !x.is_zero()) {
                    let acc = by_u.entry(u).or_insert_with(|| vec![S::zero(); d]);
                    for (a, x) in acc.iter_mut().zip(lv.iter()) {
                        a.add_assign(&c.mul(x));
                    }
                }
                let lu = self.l_row(u);
                if lu.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let bv = inner.entry(v.clone()).or_insert_with(|| self.adjoint_pair_table(v));
                for (a, x) in lu.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let cx = c.mul(x);
                    for b in 0..d {
                        for e in 0..d {
                            let y = bv.get(b, e);
                            if !y.is_zero() {
                                nested_right[at(a, b, e)].add_assign(&cx.mul(y));
                            }
                        }
                    }
                }
            }
            for (u, lsum) in by_u {
                if lsum.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let bu = self.adjoint_pair_table(u);
                for a in 0..d {
                    for b in 0..d {
                        let y = bu.get(a, b);
                        if y.is_zero() {
                            continue;
                        }
                        for (e, x) in lsum.iter().enumerate() {
                            if !x.is_zero() {
                                nested_left[at(a, b, e)].add_assign(&y.mul(x));
                            }
                        }
                    }
                }
            }
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        let mut r = nested_right[at(a, b, c)].sub(&nested_left[at(a, b, c)]);
                        for e in 0..d {
                            for f in 0..d {
                                let s = self.sigma.get(e, f, a, b);
                                if !s.is_zero() {
                                    r = r.sub(&s.mul(&nested_right[at(e, f, c)]));
                                }
                            }
                        }
                        tally.record(r.magnitude(), !r.is_negligible(self.tol()), || {
                            let f = |k| FormIndex::from_index(k, n);
                            format!("({}, {}, {}) on {w}", f(a), f(b), f(c))
                        });
                    }
                }
            }
        }
        tally.entry("jacobi").with_note(format!("words up to length {max_len}"))
    }

    /// `(L ⊗ L)Ad(u)` streamed over `u₁ S(u₃) ⊗ u₂` without collecting terms.
    fn adjoint_pair_table(&self, u: &Word) -> Matrix<S> {
        let h = self.hopf();
        let mut k = Matrix::zeros(self.d, self.d);
        for t in h.word_iterated_coproduct(u, 3) {
            let l1 = self.l_row(&t[1]);
            if l1.iter().all(|x| x.is_zero()) {
                continue;
            }
            for (s3, c) in h.word_antipode_terms(&t[2]) {
                outer_add(&mut k, &self.l_row(&t[0].concat(&s3)), &l1, &S::from_i64(c));
            }
        }
        k
    }

    /// `L` vanishes identically on words up to `max_len`.
    pub fn check_degenerate(&self, max_len: usize) -> CheckEntry {
        let mut tally = Tally::default();
        for w in FreeHopf::words_up_to(&self.hopf().alphabet(), max_len) {
            for (a, v) in self.l_row(&w).iter().enumerate() {
                tally.record(v.magnitude(), !v.is_zero(), || format!("{} on {w}", FormIndex::from_index(a, self.n)));
            }
        }
        tally.entry("generators_identically_zero")
    }
}

fn outer_add<S: Scalar>(k: &mut Matrix<S>, a: &[S], b: &[S], c: &S) {
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let cx = c.mul(x);
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                k.add_at(i, j, &cx.mul(y));
            }
        }
    }
}

/// `σ[A][B][C][E] = M[B][C](S(𝒜^A_E))` with
/// `𝒜^{Θ(n,m)}_{Θ(l,k)} = Λ^n_l S(Λ^k_m)`, `𝒜^{Π n}_{Π k} = Λ^n_k`,
/// `𝒜^{Π n}_{Θ(k,l)} = Λ^n_k S(p^l)` and `𝒜^{Θ}_{Π} = 0`.
pub fn build_sigma<S: Scalar>(t: &EvaluationTables<S>) -> SigmaTensor<S> {
    let n = t.n();
    let d = t.d();
    let mut data = vec![S::zero(); d * d * d * d];
    for a in FormIndex::all(n) {
        for e in FormIndex::all(n) {
            let word = match (a, e) {
                (FormIndex::Theta(nn, m), FormIndex::Theta(l, k)) => {
                    Word(vec![Letter::lambda(nn, l), Letter::lambda(k, m).antipoded(1)])
                }
                (FormIndex::Pi(nn), FormIndex::Pi(k)) => Word::letter(Letter::lambda(nn, k)),
                (FormIndex::Pi(nn), FormIndex::Theta(k, l)) => {
                    Word(vec![Letter::lambda(nn, k), Letter::p(l).antipoded(1)])
                }
                (FormIndex::Theta(..), FormIndex::Pi(_)) => continue,
            };
            let m = t.form_matrix_antipode(&word);
            let (ai, ei) = (a.index(n), e.index(n));
            for b in 0..d {
                for c in 0..d {
                    data[((ai * d + b) * d + c) * d + ei] = m.get(b, c).clone();
                }
            }
        }
    }
    SigmaTensor { n, d, data }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::QGroupInstance;
    use crate::scalar::Exact;

    type I = QGroupInstance<Exact>;

    fn q(a: i64, b: i64) -> Exact {
        Exact::ratio(a, b)
    }

    fn builtins() -> Vec<I> {
        vec![
            I::classical(2).unwrap(),
            I::graded(&[1, -1]).unwrap(),
            I::scalar1(q(1, 1), q(-2, 1), q(3, 1), q(1, 1)).unwrap(),
            I::scalar1(q(1, 2), q(-3, 2), q(1, 1), q(2, 1)).unwrap(),
        ]
    }

    #[test]
    fn classical_trace_is_identity_and_sigma_flips() {
        let t = EvaluationTables::build(&I::classical(2).unwrap()).unwrap();
        let ql = QuantumLie::new(&t);
        assert_eq!(*ql.v(), Matrix::identity(2));
        let d = 6;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let want = if a == e && b == c { Exact::one() } else { Exact::zero() };
                        assert_eq!(*ql.sigma().get(a, b, c, e), want);
                    }
                }
            }
        }
        assert!(ql.structure_constants().sparse().is_empty());
        assert!(ql.check_degenerate(2).passed());
    }

    #[test]
    fn push_of_unit_is_identity() {
        let t = EvaluationTables::build(&I::graded(&[1, -1]).unwrap()).unwrap();
        let ql = QuantumLie::new(&t);
        for a in FormIndex::all(2) {
            let out = ql.push_form_right(a, &Element::unit());
            for (c, el) in out.iter().enumerate() {
                let want = if c == a.index(2) { Element::unit() } else { Element::zero() };
                assert_eq!(*el, want);
            }
        }
        let t = EvaluationTables::build(&I::classical(2).unwrap()).unwrap();
        let ql = QuantumLie::new(&t);
        let x = Element::from_word(Word::letter(Letter::lambda(0, 1)));
        let out = ql.push_form_right(FormIndex::Pi(1), &x);
        assert_eq!(out[FormIndex::Pi(1).index(2)], x);
    }

    #[test]
    fn generators_and_sigma_properties() {
        for inst in builtins() {
            let t = EvaluationTables::build(&inst).unwrap();
            let ql = QuantumLie::new(&t);
            let rep = ql.check_generators(3);
            assert!(rep.all_passed(), "{}: {rep:?}", inst.name());
            let rep = ql.check_sigma();
            assert!(rep.all_passed(), "{}: {rep:?}", inst.name());
            assert!(ql.check_quantum_trace(2).passed());
        }
    }

    #[test]
    fn graded_sigma_is_involutive() {
        let t = EvaluationTables::build(&I::graded(&[1, -1]).unwrap()).unwrap();
        let ql = QuantumLie::new(&t);
        let e = ql.check_sigma();
        assert_eq!(e.get("sigma_involutive").unwrap().note.as_deref(), Some("σ² = id"));
    }

    #[test]
    fn bracket_routes_agree() {
        for inst in builtins() {
            let t = EvaluationTables::build(&inst).unwrap();
            let ql = QuantumLie::new(&t);
            let rep = ql.check_brackets(2);
            assert!(rep.all_passed(), "{}: {rep:?}", inst.name());
        }
    }

    #[test]
    fn leibniz_jacobi_and_coproduct() {
        for inst in builtins() {
            let t = EvaluationTables::build(&inst).unwrap();
            let ql = QuantumLie::new(&t);
            let e = ql.check_twisted_leibniz(2);
            assert!(e.passed(), "{}: {e:?}", inst.name());
            let rep = ql.check_l_coproduct(2);
            assert!(rep.all_passed(), "{}: {rep:?}", inst.name());
            let e = ql.check_jacobi(1);
            assert!(e.passed(), "{}: {e:?}", inst.name());
            let e = ql.check_adjoint_coassociativity(2);
            assert!(e.passed(), "{}: {e:?}", inst.name());
            let rep = ql.check_differential(2, 2);
            assert!(rep.all_passed(), "{}: {rep:?}", inst.name());
        }
    }

    #[test]
    fn streamed_pair_table_matches_collected_adjoint() {
        for inst in &builtins()[2..] {
            let t = EvaluationTables::build(inst).unwrap();
            let ql = QuantumLie::new(&t);
            let h = t.hopf();
            let mut nonzero = 0;
            for w in FreeHopf::words_up_to(&h.alphabet(), 3) {
                let collected = ql.adjoint_table(&h.adjoint_coaction(&Element::from_word(w.clone())));
                assert_eq!(ql.adjoint_pair_table(&w), collected, "{w}");
                nonzero += usize::from(!collected.is_zero());
            }
            assert!(nonzero > 0);
            assert!(ql.check_jacobi(2).passed());
        }
    }

    #[test]
    fn translation_generators_see_translations() {
        let p = Element::from_word(Word::letter(Letter::p(0)));
        let t = EvaluationTables::build(&builtins()[2]).unwrap();
        let ql = QuantumLie::new(&t);
        assert!(ql.differential(&p).iter().any(|e| !e.is_zero()));
        // λ = 0 with Z = T = 0 leaves nothing for the translations to see
        let t = EvaluationTables::build(&I::graded(&[1, -1]).unwrap()).unwrap();
        let ql = QuantumLie::new(&t);
        assert!(ql.differential(&p).iter().all(Element::is_zero));
    }
}
