//! Finitely presented commutative differential graded algebras and their
//! reduced, length-filtered bar complexes.
//!
//! A presentation lists a finite graded basis with the unit in degree zero,
//! a differential and a product given by structure constants, and a pair of
//! augmentations (the two "feet" of the pointed bar construction).
//! [`validate_cdga`] checks every algebraic identity exactly and reports
//! violations; the bar machinery refuses presentations it cannot handle
//! (non-connected ones) with a hard error.
//!
//! The bar complex used here is the reduced one: slice words have letters of
//! positive degree, a word `[w1|...|wq]` sits in total degree
//! `sum(deg) - q`, and the length filtration caps `q`.  The differential is
//!
//! * internal: replace slot j by its differential, with sign `(-1)^{e_{j-1}}`,
//! * external: merge slots j and j+1 by the product, with sign `(-1)^{e_j}`,
//!
//! where `e_m = sum_{l <= m} (deg w_l - 1)`.  The end faces vanish on a
//! connected algebra because the augmentations kill positive degree.  The
//! external sign is the Koszul one; `d o d = 0` fails for the naive
//! alternating sign `(-1)^j` as soon as internal and external terms interact.

use crate::exact::{ExactMatrix, ExactScalar};
use crate::geom::Scene;
use rand::Rng;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CdgaError {
    #[error("basis index {0} out of range ({1} basis elements)")]
    IndexOutOfRange(usize, usize),
    #[error("unit must have degree 0, found degree {0}")]
    UnitDegree(usize),
    #[error("differential entry {to} <- {from} violates degrees ({dto} vs {dfrom}+1)")]
    DiffDegree {
        to: usize,
        from: usize,
        dto: usize,
        dfrom: usize,
    },
    #[error("product entry ({i},{j}) -> {l} violates degrees ({dl} vs {di}+{dj})")]
    ProductDegree {
        i: usize,
        j: usize,
        l: usize,
        di: usize,
        dj: usize,
        dl: usize,
    },
    #[error("augmentation value on basis element {0}, which is not in degree 0")]
    AugmentationDegree(usize),
    #[error(
        "bar complex requires a connected presentation; basis element {0} has degree 0 \
         but is not the unit"
    )]
    NonConnected(usize),
    #[error("cannot parse CDGA JSON: {0}")]
    Json(String),
}

/// One basis element of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BasisElement {
    pub label: String,
    pub degree: usize,
}

/// An augmentation: a functional on the degree-zero part, given by its values
/// on degree-zero basis elements.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Augmentation {
    pub values: BTreeMap<usize, ExactScalar>,
}

impl Augmentation {
    /// The augmentation of a connected presentation: unit -> 1.
    pub fn connected(unit: usize) -> Augmentation {
        let mut values = BTreeMap::new();
        values.insert(unit, ExactScalar::one());
        Augmentation { values }
    }

    pub fn value(&self, idx: usize) -> ExactScalar {
        self.values
            .get(&idx)
            .cloned()
            .unwrap_or_else(ExactScalar::zero)
    }
}

/// A sparse linear combination of basis elements.
pub type Combo = Vec<(usize, ExactScalar)>;

fn combo_add(acc: &mut BTreeMap<usize, ExactScalar>, idx: usize, c: ExactScalar) {
    if c.is_zero() {
        return;
    }
    let cur = acc.remove(&idx).unwrap_or_else(ExactScalar::zero);
    let s = &cur + &c;
    if !s.is_zero() {
        acc.insert(idx, s);
    }
}

fn combo_from_map(m: BTreeMap<usize, ExactScalar>) -> Combo {
    m.into_iter().collect()
}

/// A finitely presented CDGA with two augmentations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdgaPresentation {
    pub basis: Vec<BasisElement>,
    pub unit: usize,
    /// Differential: basis index -> combination in degree + 1.
    pub diff: BTreeMap<usize, Combo>,
    /// Product structure constants: (i, j) -> combination in degree di + dj.
    /// Absent pairs multiply to zero.
    pub product: BTreeMap<(usize, usize), Combo>,
    /// The two augmentations of the pointed bar construction.
    pub aug_x: Augmentation,
    pub aug_y: Augmentation,
}

/// Result of the exact identity checks.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl CdgaPresentation {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, idx: usize) -> usize {
        self.basis[idx].degree
    }

    fn check_index(&self, idx: usize) -> Result<(), CdgaError> {
        if idx >= self.basis.len() {
            Err(CdgaError::IndexOutOfRange(idx, self.basis.len()))
        } else {
            Ok(())
        }
    }

    /// Structural consistency: all indices in range and all structure
    /// constants degree-homogeneous.  These are hard errors, not violations.
    pub fn check_structure(&self) -> Result<(), CdgaError> {
        self.check_index(self.unit)?;
        if self.degree(self.unit) != 0 {
            return Err(CdgaError::UnitDegree(self.degree(self.unit)));
        }
        for (&from, combo) in &self.diff {
            self.check_index(from)?;
            for (to, _) in combo {
                self.check_index(*to)?;
                if self.degree(*to) != self.degree(from) + 1 {
                    return Err(CdgaError::DiffDegree {
                        to: *to,
                        from,
                        dto: self.degree(*to),
                        dfrom: self.degree(from),
                    });
                }
            }
        }
        for (&(i, j), combo) in &self.product {
            self.check_index(i)?;
            self.check_index(j)?;
            for (l, _) in combo {
                self.check_index(*l)?;
                if self.degree(*l) != self.degree(i) + self.degree(j) {
                    return Err(CdgaError::ProductDegree {
                        i,
                        j,
                        l: *l,
                        di: self.degree(i),
                        dj: self.degree(j),
                        dl: self.degree(*l),
                    });
                }
            }
        }
        for aug in [&self.aug_x, &self.aug_y] {
            for &idx in aug.values.keys() {
                self.check_index(idx)?;
                if self.degree(idx) != 0 {
                    return Err(CdgaError::AugmentationDegree(idx));
                }
            }
        }
        Ok(())
    }

    /// Differential of a basis element as a combination.
    pub fn d_basis(&self, idx: usize) -> Combo {
        self.diff.get(&idx).cloned().unwrap_or_default()
    }

    /// Product of two basis elements as a combination.
    pub fn mult_basis(&self, i: usize, j: usize) -> Combo {
        self.product.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Product of two combinations.
    pub fn mult(&self, a: &Combo, b: &Combo) -> Combo {
        let mut acc = BTreeMap::new();
        for (i, ci) in a {
            for (j, cj) in b {
                for (l, cl) in self.mult_basis(*i, *j) {
                    combo_add(&mut acc, l, &(ci * cj) * &cl);
                }
            }
        }
        combo_from_map(acc)
    }

    /// Differential of a combination.
    pub fn d(&self, a: &Combo) -> Combo {
        let mut acc = BTreeMap::new();
        for (i, ci) in a {
            for (l, cl) in self.d_basis(*i) {
                combo_add(&mut acc, l, ci * &cl);
            }
        }
        combo_from_map(acc)
    }

    /// Indices of the positive-degree basis elements (the bar letters).
    pub fn letters(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) > 0).collect()
    }

    /// Hard error if the presentation has degree-zero basis beyond the unit;
    /// the reduced bar complex implemented here assumes connectedness.
    pub fn require_connected(&self) -> Result<(), CdgaError> {
        for i in 0..self.dim() {
            if self.degree(i) == 0 && i != self.unit {
                return Err(CdgaError::NonConnected(i));
            }
        }
        Ok(())
    }
}

/// Check all CDGA identities exactly.  Structural inconsistencies are hard
/// errors; algebraic violations (failing identities) are collected in the
/// report.
pub fn validate_cdga(a: &CdgaPresentation) -> Result<ValidationReport, CdgaError> {
    a.check_structure()?;
    let mut report = ValidationReport::default();
    let n = a.dim();
    let unit: Combo = vec![(a.unit, ExactScalar::one())];

    // Unit laws.
    for i in 0..n {
        let ei: Combo = vec![(i, ExactScalar::one())];
        if a.mult(&unit, &ei) != ei {
            report.violations.push(format!("unit * e{i} != e{i}"));
        }
        if a.mult(&ei, &unit) != ei {
            report.violations.push(format!("e{i} * unit != e{i}"));
        }
    }

    // Graded commutativity.
    for i in 0..n {
        for j in 0..n {
            let ij = a.mult_basis(i, j);
            let ji = a.mult_basis(j, i);
            let sign_flip = (a.degree(i) * a.degree(j)) % 2 == 1;
            let expect: Combo = ji
                .into_iter()
                .map(|(l, c)| (l, if sign_flip { -&c } else { c }))
                .collect();
            let ij_map: BTreeMap<_, _> = ij.into_iter().collect();
            let ex_map: BTreeMap<_, _> = expect.into_iter().collect();
            if ij_map != ex_map {
                report
                    .violations
                    .push(format!("graded commutativity fails on (e{i}, e{j})"));
            }
        }
    }

    // Associativity.
    for i in 0..n {
        for j in 0..n {
            let ij = a.mult_basis(i, j);
            for k in 0..n {
                let ek: Combo = vec![(k, ExactScalar::one())];
                let jk = a.mult_basis(j, k);
                let ei: Combo = vec![(i, ExactScalar::one())];
                if a.mult(&ij, &ek) != a.mult(&ei, &jk) {
                    report
                        .violations
                        .push(format!("associativity fails on (e{i}, e{j}, e{k})"));
                }
            }
        }
    }

    // d o d = 0.
    for i in 0..n {
        let dd = a.d(&a.d_basis(i));
        if !dd.is_empty() {
            report.violations.push(format!("d(d(e{i})) != 0"));
        }
    }

    // Leibniz: d(xy) = dx y + (-1)^{|x|} x dy.
    for i in 0..n {
        for j in 0..n {
            let lhs = a.d(&a.mult_basis(i, j));
            let ej: Combo = vec![(j, ExactScalar::one())];
            let ei: Combo = vec![(i, ExactScalar::one())];
            let mut acc = BTreeMap::new();
            for (l, c) in a.mult(&a.d_basis(i), &ej) {
                combo_add(&mut acc, l, c);
            }
            let sign = a.degree(i) % 2 == 1;
            for (l, c) in a.mult(&ei, &a.d_basis(j)) {
                combo_add(&mut acc, l, if sign { -&c } else { c });
            }
            if lhs.into_iter().collect::<BTreeMap<_, _>>() != acc {
                report
                    .violations
                    .push(format!("Leibniz fails on (e{i}, e{j})"));
            }
        }
    }

    // Augmentations: unital and multiplicative on the degree-zero part.
    for (name, aug) in [("x", &a.aug_x), ("y", &a.aug_y)] {
        if !aug.value(a.unit).is_one() {
            report
                .violations
                .push(format!("augmentation {name} does not send the unit to 1"));
        }
        let deg0: Vec<usize> = (0..n).filter(|&i| a.degree(i) == 0).collect();
        for &i in &deg0 {
            for &j in &deg0 {
                let mut prod_val = ExactScalar::zero();
                for (l, c) in a.mult_basis(i, j) {
                    prod_val += &c * &aug.value(l);
                }
                let sep = &aug.value(i) * &aug.value(j);
                if prod_val != sep {
                    report.violations.push(format!(
                        "augmentation {name} not multiplicative on (e{i}, e{j})"
                    ));
                }
            }
        }
    }

    Ok(report)
}

/// One homogeneous slice of the reduced bar complex: the words of a fixed
/// total degree, up to the length cap, in a fixed deterministic order
/// (by length, then lexicographically in basis indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarSlice {
    pub total_degree: usize,
    pub length_cap: usize,
    pub words: Vec<Vec<usize>>,
}

/// Enumerate the slice basis: words `[w1|...|wq]`, letters of positive
/// degree, `sum(deg-1) = total_degree`, `q <= length_cap`.
pub fn bar_slice(
    a: &CdgaPresentation,
    total_degree: usize,
    length_cap: usize,
) -> Result<BarSlice, CdgaError> {
    a.check_structure()?;
    a.require_connected()?;
    let letters = a.letters();
    // Depth-first in index order gives, per length, lexicographic word order.
    fn rec(
        letters: &[usize],
        a: &CdgaPresentation,
        word: &mut Vec<usize>,
        q: usize,
        weight_left: i64,
        out: &mut Vec<Vec<usize>>,
    ) {
        if word.len() == q {
            if weight_left == 0 {
                out.push(word.clone());
            }
            return;
        }
        for &l in letters {
            let w = a.degree(l) as i64 - 1;
            if weight_left - w < 0 {
                continue;
            }
            word.push(l);
            rec(letters, a, word, q, weight_left - w, out);
            word.pop();
        }
    }
    let mut words = Vec::new();
    for q in 0..=length_cap {
        rec(
            &letters,
            a,
            &mut Vec::new(),
            q,
            total_degree as i64,
            &mut words,
        );
    }
    Ok(BarSlice {
        total_degree,
        length_cap,
        words,
    })
}

/// The total bar differential from the degree-`n` slice to the degree-`n+1`
/// slice (both with the same length cap), as a sparse exact matrix with
/// rows indexed by the target slice basis and columns by the source.
pub fn bar_total_differential(
    a: &CdgaPresentation,
    total_degree: usize,
    length_cap: usize,
) -> Result<ExactMatrix, CdgaError> {
    let src = bar_slice(a, total_degree, length_cap)?;
    let dst = bar_slice(a, total_degree + 1, length_cap)?;
    let index: BTreeMap<&[usize], usize> = dst
        .words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_slice(), i))
        .collect();
    let mut m = ExactMatrix::new(dst.words.len(), src.words.len());
    for (col, word) in src.words.iter().enumerate() {
        let q = word.len();
        // e[m] = sum_{l<=m} (deg - 1); e[0] = 0.
        let mut e = vec![0i64; q + 1];
        for (l, &idx) in word.iter().enumerate() {
            e[l + 1] = e[l] + a.degree(idx) as i64 - 1;
        }
        // Internal terms.
        for j in 0..q {
            let sign_neg = e[j].rem_euclid(2) == 1;
            for (to, c) in a.d_basis(word[j]) {
                let mut w2 = word.clone();
                w2[j] = to;
                if let Some(&row) = index.get(w2.as_slice()) {
                    let v = if sign_neg { -&c } else { c };
                    m.add_to(row, col, v);
                }
            }
        }
        // External terms: merge slots j and j+1 (0-based j).
        for j in 0..q.saturating_sub(1) {
            let sign_neg = e[j + 1].rem_euclid(2) == 1;
            for (to, c) in a.mult_basis(word[j], word[j + 1]) {
                if a.degree(to) == 0 {
                    continue; // cannot occur for positive-degree letters
                }
                let mut w2 = Vec::with_capacity(q - 1);
                w2.extend_from_slice(&word[..j]);
                w2.push(to);
                w2.extend_from_slice(&word[j + 2..]);
                if let Some(&row) = index.get(w2.as_slice()) {
                    let v = if sign_neg { -&c } else { c };
                    m.add_to(row, col, v);
                }
            }
        }
    }
    Ok(m)
}

/// Dimension of the degree-zero bar cohomology at the given length cap:
/// the kernel of the bar differential out of total degree zero.
pub fn bar_h0(a: &CdgaPresentation, length_cap: usize) -> Result<usize, CdgaError> {
    let d0 = bar_total_differential(a, 0, length_cap)?;
    Ok(d0.cols - d0.rank())
}

/// A basis of the degree-zero bar cohomology, as coefficient vectors over the
/// degree-zero slice basis (see [`bar_slice`] for the word order).
pub fn bar_h0_basis(
    a: &CdgaPresentation,
    length_cap: usize,
) -> Result<(BarSlice, Vec<Vec<ExactScalar>>), CdgaError> {
    let slice = bar_slice(a, 0, length_cap)?;
    let d0 = bar_total_differential(a, 0, length_cap)?;
    Ok((slice, d0.kernel_basis()))
}

/// The logarithmic model CDGA of a scene: the unit in degree zero and one
/// closed degree-one generator `dlog(z - a_i)` per puncture, with all
/// products of degree-one elements zero (the ambient curve is
/// one-dimensional).
pub fn model_cdga(scene: &Scene) -> CdgaPresentation {
    let m = scene.punctures.len();
    let mut basis = vec![BasisElement {
        label: "1".to_string(),
        degree: 0,
    }];
    for i in 0..m {
        basis.push(BasisElement {
            label: format!("dlog:{i}"),
            degree: 1,
        });
    }
    let mut product = BTreeMap::new();
    product.insert((0, 0), vec![(0, ExactScalar::one())]);
    for i in 1..=m {
        product.insert((0, i), vec![(i, ExactScalar::one())]);
        product.insert((i, 0), vec![(i, ExactScalar::one())]);
    }
    CdgaPresentation {
        basis,
        unit: 0,
        diff: BTreeMap::new(),
        product,
        aug_x: Augmentation::connected(0),
        aug_y: Augmentation::connected(0),
    }
}

/// The circle model: one closed degree-one generator with square zero.
pub fn circle_cdga() -> CdgaPresentation {
    model_cdga(&Scene {
        punctures: vec![crate::exact::ExactComplex::zero()],
    })
}

// ---------------------------------------------------------------------------
// Randomized valid presentations (used by property tests and the acceptance
// suite): truncated free graded-commutative algebras on a few generators,
// with the differential of every non-closed generator a random polynomial in
// the closed generators.  This makes d^2 = 0, Leibniz, and associativity hold
// by construction while still exercising signs and nontrivial products.

#[derive(Clone, Debug)]
struct FreeShape {
    gen_degrees: Vec<usize>,
    cap: usize,
}

/// Shapes with at most 6 monomials up to the cap.
fn shapes() -> Vec<FreeShape> {
    vec![
        FreeShape { gen_degrees: vec![1], cap: 2 },
        FreeShape { gen_degrees: vec![2], cap: 4 },
        FreeShape { gen_degrees: vec![1, 1], cap: 2 },
        FreeShape { gen_degrees: vec![1, 2], cap: 4 },
        FreeShape { gen_degrees: vec![1, 1, 2], cap: 2 },
        FreeShape { gen_degrees: vec![1, 3], cap: 4 },
        FreeShape { gen_degrees: vec![2, 3], cap: 4 },
    ]
}

/// A monomial: one exponent per generator (odd generators capped at 1).
type Monomial = Vec<u32>;

fn monomial_degree(m: &Monomial, degs: &[usize]) -> usize {
    m.iter()
        .zip(degs)
        .map(|(&e, &d)| e as usize * d)
        .sum()
}

/// Signed product of monomials in a free graded-commutative algebra:
/// returns None when an odd generator squares to zero.
fn monomial_mult(a: &Monomial, b: &Monomial, degs: &[usize]) -> Option<(Monomial, bool)> {
    let mut sign_neg = false;
    // Koszul sign: odd factors of b's generator j move past odd factors of
    // a's generators i > j.
    for j in 0..b.len() {
        if degs[j] % 2 == 0 || b[j] == 0 {
            continue;
        }
        for i in (j + 1)..a.len() {
            if degs[i] % 2 == 1 && a[i] == 1 {
                sign_neg = !sign_neg;
            }
        }
    }
    let mut out = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        let e = a[i] + b[i];
        if degs[i] % 2 == 1 && e > 1 {
            return None;
        }
        out.push(e);
    }
    Some((out, sign_neg))
}

/// Build a random valid presentation from a random shape.
pub fn random_truncated_cdga<R: Rng>(rng: &mut R) -> CdgaPresentation {
    let all = shapes();
    let shape = all[rng.gen_range(0..all.len())].clone();
    let degs = shape.gen_degrees.clone();
    let g = degs.len();

    // Enumerate monomials up to the cap, ordered by (degree, lex).
    let mut monos: Vec<Monomial> = vec![vec![0; g]];
    let mut frontier = monos.clone();
    loop {
        let mut next = Vec::new();
        for m in &frontier {
            for i in 0..g {
                let mut m2 = m.clone();
                m2[i] += 1;
                if degs[i] % 2 == 1 && m2[i] > 1 {
                    continue;
                }
                if monomial_degree(&m2, &degs) > shape.cap {
                    continue;
                }
                if !monos.contains(&m2) && !next.contains(&m2) {
                    next.push(m2);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        monos.extend(next.iter().cloned());
        frontier = next;
    }
    monos.sort_by_key(|m| (monomial_degree(m, &degs), m.clone()));
    let index: BTreeMap<Monomial, usize> =
        monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();

    let basis: Vec<BasisElement> = monos
        .iter()
        .map(|m| {
            let label = if m.iter().all(|&e| e == 0) {
                "1".to_string()
            } else {
                m.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| format!("g{i}^{e}"))
                    .collect::<Vec<_>>()
                    .join("*")
            };
            BasisElement {
                label,
                degree: monomial_degree(m, &degs),
            }
        })
        .collect();

    // Product table (degree-truncated).
    let mut product = BTreeMap::new();
    for (i, a) in monos.iter().enumerate() {
        for (j, b) in monos.iter().enumerate() {
            if let Some((m, neg)) = monomial_mult(a, b, &degs) {
                if let Some(&l) = index.get(&m) {
                    let c = if neg {
                        ExactScalar::from_int(-1)
                    } else {
                        ExactScalar::one()
                    };
                    product.insert((i, j), vec![(l, c)]);
                }
            }
        }
    }

    // Differential: a random subset of generators is closed; every other
    // generator maps to a random polynomial in the closed generators.
    let closed: Vec<bool> = (0..g).map(|_| rng.gen_bool(0.6)).collect();
    let mut dgen: Vec<Combo> = vec![Vec::new(); g];
    for i in 0..g {
        if closed[i] {
            continue;
        }
        let target_deg = degs[i] + 1;
        let candidates: Vec<usize> = monos
            .iter()
            .enumerate()
            .filter(|(_, m)| {
                monomial_degree(m, &degs) == target_deg
                    && m.iter()
                        .enumerate()
                        .all(|(l, &e)| e == 0 || closed[l])
            })
            .map(|(idx, _)| idx)
            .collect();
        let mut combo = BTreeMap::new();
        for idx in candidates {
            let c = rng.gen_range(-3i64..=3);
            combo_add(&mut combo, idx, ExactScalar::from_int(c));
        }
        dgen[i] = combo_from_map(combo);
    }

    // Extend d to monomials by the Leibniz rule, multiplying in original
    // factor order so the Koszul signs come out of monomial_mult.
    let mut diff = BTreeMap::new();
    for (mi, m) in monos.iter().enumerate() {
        let mut acc: BTreeMap<usize, ExactScalar> = BTreeMap::new();
        for i in 0..g {
            if m[i] == 0 || dgen[i].is_empty() {
                continue;
            }
            // m = before * g_i^{e} * after.
            let mut before = vec![0u32; g];
            let mut after = vec![0u32; g];
            for l in 0..g {
                if l < i {
                    before[l] = m[l];
                } else if l > i {
                    after[l] = m[l];
                }
            }
            let e = m[i];
            let mut mid = vec![0u32; g];
            mid[i] = e - 1;
            let deg_before: usize = (0..i).map(|l| m[l] as usize * degs[l]).sum();
            let lead_neg = deg_before % 2 == 1;
            // Multiplicity e for even generators (e is 1 for odd ones).
            let mult = ExactScalar::from_int(e as i64);
            for (didx, dc) in &dgen[i] {
                // term = before * mid * dmono * after, multiplied stepwise.
                let dmono = &monos[*didx];
                let Some((p1, n1)) = monomial_mult(&before, &mid, &degs) else {
                    continue;
                };
                let Some((p2, n2)) = monomial_mult(&p1, dmono, &degs) else {
                    continue;
                };
                let Some((p3, n3)) = monomial_mult(&p2, &after, &degs) else {
                    continue;
                };
                let Some(&target) = index.get(&p3) else {
                    continue; // beyond the cap: killed by the truncation
                };
                let mut c = &mult * dc;
                if lead_neg ^ n1 ^ n2 ^ n3 {
                    c = -&c;
                }
                combo_add(&mut acc, target, c);
            }
        }
        if !acc.is_empty() {
            diff.insert(mi, combo_from_map(acc));
        }
    }

    CdgaPresentation {
        basis,
        unit: 0,
        diff,
        product,
        aug_x: Augmentation::connected(0),
        aug_y: Augmentation::connected(0),
    }
}

// ---------------------------------------------------------------------------
// JSON interchange.

#[derive(serde::Serialize, serde::Deserialize)]
struct CdgaJson {
    basis: Vec<BasisElement>,
    unit: usize,
    diff: Vec<(usize, usize, ExactScalar)>,
    product: Vec<(usize, usize, usize, ExactScalar)>,
    augmentations: AugJson,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct AugJson {
    x: Vec<(usize, ExactScalar)>,
    y: Vec<(usize, ExactScalar)>,
}

pub fn cdga_to_json(a: &CdgaPresentation) -> serde_json::Value {
    let mut diff = Vec::new();
    for (&from, combo) in &a.diff {
        for (to, c) in combo {
            diff.push((*to, from, c.clone()));
        }
    }
    let mut product = Vec::new();
    for (&(i, j), combo) in &a.product {
        for (l, c) in combo {
            product.push((i, j, *l, c.clone()));
        }
    }
    serde_json::to_value(CdgaJson {
        basis: a.basis.clone(),
        unit: a.unit,
        diff,
        product,
        augmentations: AugJson {
            x: a.aug_x.values.iter().map(|(&i, c)| (i, c.clone())).collect(),
            y: a.aug_y.values.iter().map(|(&i, c)| (i, c.clone())).collect(),
        },
    })
    .expect("CDGA serialization cannot fail")
}

pub fn cdga_from_json(v: &serde_json::Value) -> Result<CdgaPresentation, CdgaError> {
    let j: CdgaJson =
        serde_json::from_value(v.clone()).map_err(|e| CdgaError::Json(e.to_string()))?;
    let mut diff: BTreeMap<usize, BTreeMap<usize, ExactScalar>> = BTreeMap::new();
    for (to, from, c) in j.diff {
        combo_add(diff.entry(from).or_default(), to, c);
    }
    let mut product: BTreeMap<(usize, usize), BTreeMap<usize, ExactScalar>> = BTreeMap::new();
    for (i, jx, l, c) in j.product {
        combo_add(product.entry((i, jx)).or_default(), l, c);
    }
    let a = CdgaPresentation {
        basis: j.basis,
        unit: j.unit,
        diff: diff
            .into_iter()
            .map(|(k, v)| (k, combo_from_map(v)))
            .filter(|(_, v)| !v.is_empty())
            .collect(),
        product: product
            .into_iter()
            .map(|(k, v)| (k, combo_from_map(v)))
            .filter(|(_, v)| !v.is_empty())
            .collect(),
        aug_x: Augmentation {
            values: j.augmentations.x.into_iter().collect(),
        },
        aug_y: Augmentation {
            values: j.augmentations.y.into_iter().collect(),
        },
    };
    a.check_structure()?;
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn model_cdga_validates() {
        let a = model_cdga(&Scene::zero_one());
        let report = validate_cdga(&a).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn validate_catches_broken_leibniz() {
        // x in degree 1 with dx = y but x*unit product tampered with.
        let mut a = model_cdga(&Scene::zero_one());
        a.product.insert((0, 1), vec![(2, ExactScalar::one())]);
        let report = validate_cdga(&a).unwrap();
        assert!(!report.passed());
        // Structural degree errors are hard errors, not violations.
        let mut b = model_cdga(&Scene::zero_one());
        b.diff.insert(1, vec![(1, ExactScalar::one())]);
        assert!(matches!(
            validate_cdga(&b),
            Err(CdgaError::DiffDegree { .. })
        ));
    }

    #[test]
    fn slice_dims_model_two_punctures() {
        let a = model_cdga(&Scene::zero_one());
        for cap in 0..=3usize {
            let s = bar_slice(&a, 0, cap).unwrap();
            assert_eq!(s.words.len(), (1 << (cap + 1)) - 1);
        }
        // Degree-one slice is empty for this model: no degree-2 letters.
        assert!(bar_slice(&a, 1, 3).unwrap().words.is_empty());
    }

    #[test]
    fn h0_dims_match_formula() {
        // Scene with m punctures: (m^{n+1} - 1)/(m - 1) at cap n (m > 1).
        for m in 2..=3usize {
            let scene = Scene {
                punctures: (0..m)
                    .map(|i| crate::exact::ExactComplex::from_int(i as i64, 0))
                    .collect(),
            };
            let a = model_cdga(&scene);
            for cap in 0..=3usize {
                let expect = (m.pow(cap as u32 + 1) - 1) / (m - 1);
                assert_eq!(bar_h0(&a, cap).unwrap(), expect);
            }
        }
        // Circle: n + 1.
        let c = circle_cdga();
        for cap in 0..=4usize {
            assert_eq!(bar_h0(&c, cap).unwrap(), cap + 1);
        }
    }

    #[test]
    fn random_cdgas_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let a = random_truncated_cdga(&mut rng);
            assert!(a.dim() <= 6, "shape too large: {}", a.dim());
            let report = validate_cdga(&a).unwrap();
            assert!(report.passed(), "{:?}\n{:#?}", report.violations, a);
        }
    }

    #[test]
    fn bar_differential_squares_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let a = random_truncated_cdga(&mut rng);
            for cap in 1..=3usize {
                for n in 0..=2usize {
                    let d0 = bar_total_differential(&a, n, cap).unwrap();
                    let d1 = bar_total_differential(&a, n + 1, cap).unwrap();
                    let dd = d1.matmul(&d0);
                    assert!(dd.is_zero(), "d^2 != 0 at n={n} cap={cap}: {:#?}", a);
                }
            }
        }
    }

    #[test]
    fn bar_refuses_non_connected() {
        let mut a = model_cdga(&Scene::zero_one());
        a.basis.push(BasisElement {
            label: "e".into(),
            degree: 0,
        });
        assert!(matches!(
            bar_slice(&a, 0, 2),
            Err(CdgaError::NonConnected(_))
        ));
    }

    #[test]
    fn json_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let a = random_truncated_cdga(&mut rng);
            let v = cdga_to_json(&a);
            let b = cdga_from_json(&v).unwrap();
            assert_eq!(a, b);
        }
    }
}
