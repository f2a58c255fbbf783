//! The shuffle Hopf algebra of bar words.
//!
//! Letters name logarithmic generators `dlog(z - a_i)` of a scene (or, for
//! purely combinatorial work, abstract symbols).  Words multiply by shuffle,
//! comultiply by deconcatenation, and the antipode is signed reversal.  All
//! coefficients are exact rationals, so the Hopf axioms can be checked
//! exhaustively on bounded alphabets.
//!
//! Orientation convention for the coproduct: a word's first letter is the one
//! integrated *last* along a path (nearest the path's end), so in
//! `deconcat(w) = sum suffix (x) prefix` the **first tensor factor is the
//! suffix** and pairs with the leg leaving the initial basepoint, while the
//! second factor (the prefix) pairs with the leg arriving at the final
//! basepoint.  [`FactorRoles`] records this on every tensor.

use crate::exact::ExactScalar;
use std::collections::BTreeMap;
use std::fmt;

/// A letter of the bar alphabet.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// `dlog(z - a_i)` for puncture index `i` of an ambient scene.
    Dlog(usize),
    /// An abstract symbol, for alphabet-only computations.
    Symbol(u32),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Dlog(i) => write!(f, "dlog:{i}"),
            Letter::Symbol(s) => write!(f, "sym:{s}"),
        }
    }
}

impl Letter {
    /// Parse "dlog:i" or "sym:s".
    pub fn parse(s: &str) -> Result<Letter, WordError> {
        if let Some(rest) = s.strip_prefix("dlog:") {
            return rest
                .parse()
                .map(Letter::Dlog)
                .map_err(|_| WordError::BadLetter(s.to_string()));
        }
        if let Some(rest) = s.strip_prefix("sym:") {
            return rest
                .parse()
                .map(Letter::Symbol)
                .map_err(|_| WordError::BadLetter(s.to_string()));
        }
        Err(WordError::BadLetter(s.to_string()))
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WordError {
    #[error("cannot parse letter {0:?} (expected \"dlog:<index>\" or \"sym:<id>\")")]
    BadLetter(String),
}

/// A bar word: a finite sequence of letters.  The empty word is the unit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BarWord(pub Vec<Letter>);

impl BarWord {
    pub fn empty() -> BarWord {
        BarWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> BarWord {
        let mut v = self.0.clone();
        v.reverse();
        BarWord(v)
    }
}

impl fmt::Display for BarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

/// A finite rational linear combination of bar words.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BarElement {
    pub terms: BTreeMap<BarWord, ExactScalar>,
}

impl BarElement {
    pub fn zero() -> BarElement {
        BarElement::default()
    }

    pub fn from_word(w: BarWord) -> BarElement {
        let mut e = BarElement::zero();
        e.add_term(w, ExactScalar::one());
        e
    }

    /// The unit: the empty word with coefficient one.
    pub fn one() -> BarElement {
        BarElement::from_word(BarWord::empty())
    }

    pub fn add_term(&mut self, w: BarWord, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let cur = self.terms.remove(&w).unwrap_or_else(ExactScalar::zero);
        let s = &cur + &c;
        if !s.is_zero() {
            self.terms.insert(w, s);
        }
    }

    pub fn add(&self, other: &BarElement) -> BarElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &ExactScalar) -> BarElement {
        let mut out = BarElement::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), c * v);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Deterministic JSON rendering with exact rational coefficients.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "terms": self.terms.iter().map(|(w, c)| serde_json::json!({
                "word": w.0.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "coeff": c.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Which path leg each tensor factor of a coproduct pairs against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorRoles {
    /// First factor pairs with the leg from the initial basepoint; second
    /// factor with the leg into the final basepoint.  This is the convention
    /// produced by [`deconcat`].
    FirstFactorInitialLeg,
}

/// A rational linear combination of two-fold tensors of bar words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    pub terms: BTreeMap<(BarWord, BarWord), ExactScalar>,
    pub roles: FactorRoles,
}

impl TensorElement {
    pub fn zero() -> TensorElement {
        TensorElement {
            terms: BTreeMap::new(),
            roles: FactorRoles::FirstFactorInitialLeg,
        }
    }

    pub fn add_term(&mut self, a: BarWord, b: BarWord, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let cur = self.terms.remove(&key).unwrap_or_else(ExactScalar::zero);
        let s = &cur + &c;
        if !s.is_zero() {
            self.terms.insert(key, s);
        }
    }

    /// Deterministic JSON rendering; the `roles` field records which path
    /// leg each factor pairs against.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "roles": "first_factor_initial_leg",
            "terms": self.terms.iter().map(|((a, b), c)| serde_json::json!({
                "first": a.0.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "second": b.0.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "coeff": c.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Shuffle product of two words as an element.
pub fn shuffle_words(u: &BarWord, v: &BarWord) -> BarElement {
    let mut out = BarElement::zero();
    let mut buf = Vec::with_capacity(u.len() + v.len());
    shuffle_rec(&u.0, &v.0, &mut buf, &mut out);
    out
}

fn shuffle_rec(u: &[Letter], v: &[Letter], buf: &mut Vec<Letter>, out: &mut BarElement) {
    if u.is_empty() && v.is_empty() {
        let mut w = buf.clone();
        w.shrink_to_fit();
        out.add_term(BarWord(w), ExactScalar::one());
        return;
    }
    if !u.is_empty() {
        buf.push(u[0].clone());
        shuffle_rec(&u[1..], v, buf, out);
        buf.pop();
    }
    if !v.is_empty() {
        buf.push(v[0].clone());
        shuffle_rec(u, &v[1..], buf, out);
        buf.pop();
    }
}

/// Bilinear extension of the shuffle product to elements.
pub fn shuffle(a: &BarElement, b: &BarElement) -> BarElement {
    let mut out = BarElement::zero();
    for (u, cu) in &a.terms {
        for (v, cv) in &b.terms {
            let prod = shuffle_words(u, v);
            for (w, c) in prod.terms {
                out.add_term(w, &(cu * cv) * &c);
            }
        }
    }
    out
}

/// Deconcatenation coproduct of a word.
///
/// `deconcat([w1..wk]) = sum_{i=0}^{k} [w_{i+1}..w_k] (x) [w_1..w_i]`: the
/// first factor is the suffix (initial-leg factor), the second the prefix
/// (final-leg factor).
pub fn deconcat_word(w: &BarWord) -> TensorElement {
    let mut out = TensorElement::zero();
    for i in 0..=w.len() {
        let prefix = BarWord(w.0[..i].to_vec());
        let suffix = BarWord(w.0[i..].to_vec());
        out.add_term(suffix, prefix, ExactScalar::one());
    }
    out
}

/// Linear extension of [`deconcat_word`].
pub fn deconcat(a: &BarElement) -> TensorElement {
    let mut out = TensorElement::zero();
    for (w, c) in &a.terms {
        for ((x, y), d) in deconcat_word(w).terms {
            out.add_term(x, y, c * &d);
        }
    }
    out
}

/// Antipode: signed reversal, extended linearly.
pub fn antipode(a: &BarElement) -> BarElement {
    let mut out = BarElement::zero();
    for (w, c) in &a.terms {
        let sign = if w.len() % 2 == 0 {
            c.clone()
        } else {
            -c
        };
        out.add_term(w.reversed(), sign);
    }
    out
}

/// Counit: the coefficient of the empty word.
pub fn counit(a: &BarElement) -> ExactScalar {
    a.terms
        .get(&BarWord::empty())
        .cloned()
        .unwrap_or_else(ExactScalar::zero)
}

/// One failed identity instance found by [`check_hopf_axioms`].
#[derive(Clone, Debug)]
pub struct HopfFailure {
    pub identity: &'static str,
    pub witness: String,
}

/// Report of an exhaustive Hopf-axiom check.
#[derive(Clone, Debug)]
pub struct HopfReport {
    pub alphabet_size: u32,
    pub max_len: usize,
    pub words_checked: usize,
    pub pairs_checked: usize,
    pub failures: Vec<HopfFailure>,
}

impl HopfReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn all_words(alphabet: u32, max_len: usize) -> Vec<BarWord> {
    let mut out = vec![BarWord::empty()];
    let mut layer = vec![BarWord::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..alphabet {
                let mut v = w.0.clone();
                v.push(Letter::Symbol(s));
                next.push(BarWord(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

type Triple = BTreeMap<(BarWord, BarWord, BarWord), ExactScalar>;

fn add_triple(t: &mut Triple, k: (BarWord, BarWord, BarWord), c: ExactScalar) {
    if c.is_zero() {
        return;
    }
    let cur = t.remove(&k).unwrap_or_else(ExactScalar::zero);
    let s = &cur + &c;
    if !s.is_zero() {
        t.insert(k, s);
    }
}

/// Exhaustively check the Hopf-algebra axioms over an abstract alphabet, on
/// all words up to `max_len` letters (and all pairs of words whose combined
/// length is at most `max_len`, for the identities that take two arguments).
///
/// Identities checked: counit laws, coassociativity, both antipode
/// convolution identities, compatibility of coproduct and antipode with the
/// shuffle product, and involutivity of the antipode.
pub fn check_hopf_axioms(alphabet_size: u32, max_len: usize) -> HopfReport {
    let words = all_words(alphabet_size, max_len);
    let mut failures = Vec::new();
    let mut fail = |identity: &'static str, witness: String| {
        failures.push(HopfFailure { identity, witness });
    };

    for w in &words {
        let el = BarElement::from_word(w.clone());
        let cop = deconcat(&el);

        // Counit laws: (eps (x) id) o Delta = id = (id (x) eps) o Delta.
        let mut left = BarElement::zero();
        let mut right = BarElement::zero();
        for ((a, b), c) in &cop.terms {
            if a.is_empty() {
                left.add_term(b.clone(), c.clone());
            }
            if b.is_empty() {
                right.add_term(a.clone(), c.clone());
            }
        }
        if left != el {
            fail("counit-left", w.to_string());
        }
        if right != el {
            fail("counit-right", w.to_string());
        }

        // Coassociativity.
        let mut lhs: Triple = Triple::new();
        let mut rhs: Triple = Triple::new();
        for ((a, b), c) in &cop.terms {
            for ((a1, a2), d) in deconcat_word(a).terms {
                add_triple(&mut lhs, (a1, a2, b.clone()), c * &d);
            }
            for ((b1, b2), d) in deconcat_word(b).terms {
                add_triple(&mut rhs, (a.clone(), b1, b2), c * &d);
            }
        }
        if lhs != rhs {
            fail("coassociativity", w.to_string());
        }

        // Antipode convolutions: nabla (S (x) id) Delta = eta eps = nabla (id (x) S) Delta.
        let mut conv_l = BarElement::zero();
        let mut conv_r = BarElement::zero();
        for ((a, b), c) in &cop.terms {
            let sa = antipode(&BarElement::from_word(a.clone()));
            let sb = antipode(&BarElement::from_word(b.clone()));
            let l = shuffle(&sa, &BarElement::from_word(b.clone()));
            let r = shuffle(&BarElement::from_word(a.clone()), &sb);
            conv_l = conv_l.add(&l.scale(c));
            conv_r = conv_r.add(&r.scale(c));
        }
        let unit_eps = BarElement::one().scale(&counit(&el));
        if conv_l != unit_eps {
            fail("antipode-left-convolution", w.to_string());
        }
        if conv_r != unit_eps {
            fail("antipode-right-convolution", w.to_string());
        }

        // S o S = id.
        if antipode(&antipode(&el)) != el {
            fail("antipode-involution", w.to_string());
        }
    }

    let mut pairs_checked = 0;
    for u in &words {
        for v in &words {
            if u.len() + v.len() > max_len {
                continue;
            }
            pairs_checked += 1;
            let eu = BarElement::from_word(u.clone());
            let ev = BarElement::from_word(v.clone());
            let prod = shuffle(&eu, &ev);

            // Delta(u shuffle v) = Delta(u) shuffle Delta(v), componentwise.
            let lhs = deconcat(&prod);
            let mut rhs = TensorElement::zero();
            for ((a1, a2), c) in &deconcat(&eu).terms {
                for ((b1, b2), d) in &deconcat(&ev).terms {
                    let f1 = shuffle_words(a1, b1);
                    let f2 = shuffle_words(a2, b2);
                    for (x, cx) in &f1.terms {
                        for (y, cy) in &f2.terms {
                            rhs.add_term(
                                x.clone(),
                                y.clone(),
                                &(&(c * d) * cx) * cy,
                            );
                        }
                    }
                }
            }
            if lhs.terms != rhs.terms {
                fail("bialgebra-compatibility", format!("{u} , {v}"));
            }

            // S(u shuffle v) = S(u) shuffle S(v).
            if antipode(&prod) != shuffle(&antipode(&eu), &antipode(&ev)) {
                fail("antipode-multiplicativity", format!("{u} , {v}"));
            }
        }
    }

    HopfReport {
        alphabet_size,
        max_len,
        words_checked: words.len(),
        pairs_checked,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(letters: &[u32]) -> BarWord {
        BarWord(letters.iter().map(|&s| Letter::Symbol(s)).collect())
    }

    #[test]
    fn shuffle_small_cases() {
        // [a] sh [b] = [a|b] + [b|a].
        let p = shuffle_words(&w(&[0]), &w(&[1]));
        assert_eq!(p.terms.len(), 2);
        assert_eq!(p.terms[&w(&[0, 1])], ExactScalar::one());
        assert_eq!(p.terms[&w(&[1, 0])], ExactScalar::one());
        // [a] sh [a] = 2 [a|a].
        let p = shuffle_words(&w(&[0]), &w(&[0]));
        assert_eq!(p.terms[&w(&[0, 0])], ExactScalar::from_int(2));
        // Empty word is the unit.
        let p = shuffle_words(&w(&[0, 1]), &BarWord::empty());
        assert_eq!(p, BarElement::from_word(w(&[0, 1])));
        // Counting: (2,2)-shuffles have binomial(4,2) = 6 terms with multiplicity.
        let p = shuffle_words(&w(&[0, 1]), &w(&[2, 3]));
        let total: ExactScalar = p
            .terms
            .values()
            .fold(ExactScalar::zero(), |acc, c| &acc + c);
        assert_eq!(total, ExactScalar::from_int(6));
    }

    #[test]
    fn deconcat_orientation() {
        // deconcat([a|b]) = [a|b](x)[] + [b](x)[a] + [](x)[a|b],
        // first factor = suffix.
        let t = deconcat_word(&w(&[0, 1]));
        assert_eq!(t.terms.len(), 3);
        assert_eq!(t.terms[&(w(&[0, 1]), BarWord::empty())], ExactScalar::one());
        assert_eq!(t.terms[&(w(&[1]), w(&[0]))], ExactScalar::one());
        assert_eq!(t.terms[&(BarWord::empty(), w(&[0, 1]))], ExactScalar::one());
        assert_eq!(t.roles, FactorRoles::FirstFactorInitialLeg);
    }

    #[test]
    fn antipode_and_counit() {
        let el = BarElement::from_word(w(&[0, 1, 2]));
        let s = antipode(&el);
        assert_eq!(s.terms[&w(&[2, 1, 0])], ExactScalar::from_int(-1));
        assert_eq!(counit(&BarElement::one()), ExactScalar::one());
        assert_eq!(counit(&el), ExactScalar::zero());
    }

    #[test]
    fn hopf_axioms_small() {
        let report = check_hopf_axioms(2, 3);
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert_eq!(report.words_checked, 1 + 2 + 4 + 8);
    }

    proptest! {
        #[test]
        fn shuffle_commutes_and_associates(
            u in proptest::collection::vec(0u32..3, 0..4),
            v in proptest::collection::vec(0u32..3, 0..4),
            t in proptest::collection::vec(0u32..3, 0..3),
        ) {
            let (eu, ev, et) = (
                BarElement::from_word(w(&u)),
                BarElement::from_word(w(&v)),
                BarElement::from_word(w(&t)),
            );
            prop_assert_eq!(shuffle(&eu, &ev), shuffle(&ev, &eu));
            prop_assert_eq!(
                shuffle(&shuffle(&eu, &ev), &et),
                shuffle(&eu, &shuffle(&ev, &et))
            );
        }

        #[test]
        fn shuffle_term_count(
            u in proptest::collection::vec(0u32..5, 0..5),
            v in proptest::collection::vec(0u32..5, 0..5),
        ) {
            // Total coefficient mass is binomial(|u|+|v|, |u|).
            let p = shuffle_words(&w(&u), &w(&v));
            let total = p.terms.values().fold(ExactScalar::zero(), |a, c| &a + c);
            let mut binom = ExactScalar::one();
            for i in 0..u.len() {
                binom = &binom * &ExactScalar::from_frac(
                    (u.len() + v.len() - i) as i64,
                    (i + 1) as i64,
                );
            }
            prop_assert_eq!(total, binom);
        }
    }
}
