//! The acceptance suite: every advertised guarantee of the crate as one
//! executable criterion each, with stated tolerances.  The CLI `suite`
//! subcommand and the `acceptance` integration test both run [`run_all`].

use crate::cdga::{
    bar_h0, bar_total_differential, circle_cdga, model_cdga, random_truncated_cdga,
    validate_cdga,
};
use crate::exact::{ExactComplex, ExactScalar};
use crate::geom::{pullback_form, push_tangential, LineMap, LogOneForm, MonomialMap, Scene,
    SncLocalModel, TangentialBasepoint};
use crate::jsonout::{regularized_json, to_canonical_string};
use crate::path::{reverse_path, standard_dch, standard_jet, standard_loop, Path, Segment};
use crate::regint::{mzv_series, period_pairing, regularize, QuadratureConfig};
use crate::words::{antipode, check_hopf_axioms, deconcat_word, shuffle_words, BarElement,
    BarWord, Letter};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{}  {:2}  {:<24}  {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

fn cfg(parallel: bool) -> QuadratureConfig {
    QuadratureConfig {
        parallel,
        ..QuadratureConfig::default()
    }
}

struct Ctx {
    cfg: QuadratureConfig,
    cache: BTreeMap<(String, BarWord), Complex64>,
}

impl Ctx {
    fn new(parallel: bool) -> Ctx {
        Ctx {
            cfg: cfg(parallel),
            cache: BTreeMap::new(),
        }
    }

    /// Pairing of a single dlog word against a named path, cached.
    fn reg(&mut self, tag: &str, scene: &Scene, path: &Path, letters: &[usize]) -> Complex64 {
        let word = BarWord(letters.iter().map(|&i| Letter::Dlog(i)).collect());
        if let Some(v) = self.cache.get(&(tag.to_string(), word.clone())) {
            return *v;
        }
        let forms: Vec<LogOneForm> = letters.iter().map(|&i| LogOneForm::dlog(i)).collect();
        let r = regularize(scene, path, &forms, &self.cfg)
            .unwrap_or_else(|e| panic!("regularize({tag}, {word}) failed: {e}"));
        let v = Complex64::new(r.value.0, r.value.1);
        self.cache.insert((tag.to_string(), word), v);
        v
    }
}

fn words_up_to(letters: &[usize], max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in letters {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn bez(p: [(i64, i64, i64); 4]) -> Segment {
    // control points as (num_re, den_re?, ...) -- see call sites; each tuple
    // is (numerator_re, denominator, numerator_im) over a shared denominator.
    let mk = |(n, d, ni): (i64, i64, i64)| {
        ExactComplex::new(ExactScalar::from_frac(n, d), ExactScalar::from_frac(ni, d))
    };
    Segment::Bezier {
        p0: mk(p[0]),
        p1: mk(p[1]),
        p2: mk(p[2]),
        p3: mk(p[3]),
    }
}

// --- criteria -------------------------------------------------------------

fn c1_hopf() -> CriterionResult {
    let report = check_hopf_axioms(3, 5);
    CriterionResult {
        id: 1,
        name: "hopf-axioms",
        pass: report.passed(),
        detail: format!(
            "alphabet 3, words to length 5: {} words, {} pairs, {} failures (exact)",
            report.words_checked,
            report.pairs_checked,
            report.failures.len()
        ),
    }
}

fn c2_bar_d_squared() -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    let mut pass = true;
    let mut detail = String::new();
    for i in 0..20 {
        let a = random_truncated_cdga(&mut rng);
        let report = validate_cdga(&a).expect("random presentation is structurally sound");
        if !report.passed() {
            pass = false;
            detail = format!("presentation {i} fails validation: {:?}", report.violations);
            break;
        }
        for cap in 1..=3usize {
            for n in 0..=2usize {
                let d0 = bar_total_differential(&a, n, cap).unwrap();
                let d1 = bar_total_differential(&a, n + 1, cap).unwrap();
                if !d1.matmul(&d0).is_zero() {
                    pass = false;
                    detail = format!("d^2 != 0 for presentation {i}, n={n}, cap={cap}");
                }
                checked += 1;
            }
        }
    }
    if pass {
        detail = format!("20 random presentations, {checked} compositions exactly zero");
    }
    CriterionResult {
        id: 2,
        name: "bar-d-squared",
        pass,
        detail,
    }
}

fn c3_h0_dims() -> CriterionResult {
    let two = model_cdga(&Scene::zero_one());
    let mut dims = Vec::new();
    for cap in 0..=3usize {
        dims.push(bar_h0(&two, cap).unwrap());
    }
    let circle = circle_cdga();
    let circle_ok = (0..=4usize).all(|cap| bar_h0(&circle, cap).unwrap() == cap + 1);
    let pass = dims == vec![1, 3, 7, 15] && circle_ok;
    CriterionResult {
        id: 3,
        name: "h0-dimensions",
        pass,
        detail: format!("two punctures: {dims:?} (expect [1, 3, 7, 15]); circle: n+1 {circle_ok}"),
    }
}

fn c4_zeta(ctx: &mut Ctx) -> CriterionResult {
    let scene = Scene::zero_one();
    let dch = standard_dch(&scene).unwrap();
    let z2 = mzv_series(2);
    let z3 = mzv_series(3);
    // With the first letter attached to the largest time, [dlog0|dlog1]
    // pairs to -zeta(2) and [dlog0|dlog0|dlog1] to -zeta(3) on dch.
    let v2 = ctx.reg("dch", &scene, &dch, &[0, 1]);
    let v3 = ctx.reg("dch", &scene, &dch, &[0, 0, 1]);
    let e2 = (v2 + z2.value).norm();
    let e3 = (v3 + z3.value).norm();
    CriterionResult {
        id: 4,
        name: "zeta-values",
        pass: e2 < 1e-6 && e3 < 1e-6,
        detail: format!("|value+zeta(2)| = {e2:.2e}, |value+zeta(3)| = {e3:.2e} (tol 1e-6)"),
    }
}

fn c5_regularization(ctx: &mut Ctx) -> CriterionResult {
    let scene = Scene::zero_one();
    let dch = standard_dch(&scene).unwrap();
    let v = ctx.reg("dch", &scene, &dch, &[0]);
    let e_dch = v.norm();
    let jet_scene = Scene::new(vec![ExactComplex::zero()]).unwrap();
    let mut worst_jet = 0.0f64;
    for lam in [
        ExactScalar::from_int(2),
        ExactScalar::from_frac(1, 2),
        ExactScalar::from_int(3),
    ] {
        let p = standard_jet(&jet_scene, &lam).unwrap();
        let v = ctx.reg(&format!("jet{lam}"), &jet_scene, &p, &[0]);
        let expect = -lam.to_f64().ln();
        worst_jet = worst_jet.max((v - expect).norm());
    }
    CriterionResult {
        id: 5,
        name: "regularized-basics",
        pass: e_dch < 1e-8 && worst_jet < 1e-6,
        detail: format!(
            "[dz/z] on dch: {e_dch:.2e} (tol 1e-8); jet paths vs -log(lambda): {worst_jet:.2e} (tol 1e-6)"
        ),
    }
}

fn c6_multiplicativity(ctx: &mut Ctx) -> CriterionResult {
    let scene = Scene::zero_one();
    let dch = standard_dch(&scene).unwrap();
    let words = {
        let mut ws = words_up_to(&[0, 1], 2);
        ws.retain(|w| !w.is_empty());
        ws
    };
    let mut worst = 0.0f64;
    for u in &words {
        for v in &words {
            let bu = BarWord(u.iter().map(|&i| Letter::Dlog(i)).collect());
            let bv = BarWord(v.iter().map(|&i| Letter::Dlog(i)).collect());
            let prod = shuffle_words(&bu, &bv);
            let mut lhs = Complex64::new(0.0, 0.0);
            for (w, c) in &prod.terms {
                let letters: Vec<usize> = w
                    .0
                    .iter()
                    .map(|l| match l {
                        Letter::Dlog(i) => *i,
                        _ => unreachable!(),
                    })
                    .collect();
                lhs += c.to_f64() * ctx.reg("dch", &scene, &dch, &letters);
            }
            let rhs = ctx.reg("dch", &scene, &dch, u) * ctx.reg("dch", &scene, &dch, v);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    CriterionResult {
        id: 6,
        name: "shuffle-multiplicativity",
        pass: worst < 1e-5,
        detail: format!(
            "all pairs |u|,|v| <= 2 incl. divergent words: worst {worst:.2e} (tol 1e-5)"
        ),
    }
}

fn c7_antipode(ctx: &mut Ctx) -> CriterionResult {
    let scene = Scene::zero_one();
    let dch = standard_dch(&scene).unwrap();
    let rdch = reverse_path(&dch);
    // The pairing of S(w) with a path equals the pairing of w with the
    // reversed path; evaluate S through the Hopf layer, not by hand.
    let eval_antipode = |ctx: &mut Ctx, tag: &str, path: &Path, w: &[usize]| {
        let el = antipode(&BarElement::from_word(BarWord(
            w.iter().map(|&i| Letter::Dlog(i)).collect(),
        )));
        let mut total = Complex64::new(0.0, 0.0);
        for (word, c) in &el.terms {
            let letters: Vec<usize> = word
                .0
                .iter()
                .map(|l| match l {
                    Letter::Dlog(i) => *i,
                    _ => unreachable!(),
                })
                .collect();
            total += c.to_f64() * ctx.reg(tag, &scene, path, &letters);
        }
        total
    };
    let mut worst = 0.0f64;
    for w in words_up_to(&[0, 1], 3) {
        let lhs = ctx.reg("rdch", &scene, &rdch, &w);
        let rhs = eval_antipode(ctx, "dch", &dch, &w);
        worst = worst.max((lhs - rhs).norm());
    }
    let lp = standard_loop(&scene, 0, ExactScalar::from_frac(1, 2)).unwrap();
    let rlp = reverse_path(&lp);
    let mut worst_loop = 0.0f64;
    for w in words_up_to(&[0], 3) {
        let lhs = ctx.reg("rloop0", &scene, &rlp, &w);
        let rhs = eval_antipode(ctx, "loop0", &lp, &w);
        worst_loop = worst_loop.max((lhs - rhs).norm());
    }
    let worst_all = worst.max(worst_loop);
    CriterionResult {
        id: 7,
        name: "antipode-reversal",
        pass: worst_all < 1e-6,
        detail: format!(
            "words to length 3: dch worst {worst:.2e}, loop worst {worst_loop:.2e} (tol 1e-6)"
        ),
    }
}

fn c8_deconcat(ctx: &mut Ctx) -> CriterionResult {
    let scene = Scene::zero_one();
    let dch = standard_dch(&scene).unwrap();
    // Halves of dch with unit one-jets at their tangential ends: cubic
    // Beziers 0 -> 1/2 and 1/2 -> 1 with derivative exactly 1 at the
    // puncture-anchored endpoint.
    let p1 = Path {
        segments: vec![bez([(0, 1, 0), (1, 3, 0), (5, 12, 0), (1, 2, 0)])],
        start: TangentialBasepoint::at_puncture(0, ExactComplex::one()),
        end: TangentialBasepoint::ordinary(ExactComplex::new(
            ExactScalar::from_frac(1, 2),
            ExactScalar::zero(),
        )),
    };
    let p2 = Path {
        segments: vec![bez([(1, 2, 0), (7, 12, 0), (2, 3, 0), (1, 1, 0)])],
        start: TangentialBasepoint::ordinary(ExactComplex::new(
            ExactScalar::from_frac(1, 2),
            ExactScalar::zero(),
        )),
        end: TangentialBasepoint::at_puncture(1, -&ExactComplex::one()),
    };
    let mut worst = 0.0f64;
    for w in words_up_to(&[0, 1], 3) {
        let full = ctx.reg("dch", &scene, &dch, &w);
        let word = BarWord(w.iter().map(|&i| Letter::Dlog(i)).collect());
        let cop = deconcat_word(&word);
        let mut total = Complex64::new(0.0, 0.0);
        // First factor (suffix) pairs with the initial leg p1, second
        // factor (prefix) with the final leg p2.
        for ((suffix, prefix), c) in &cop.terms {
            let ls: Vec<usize> = suffix
                .0
                .iter()
                .map(|l| match l {
                    Letter::Dlog(i) => *i,
                    _ => unreachable!(),
                })
                .collect();
            let lp: Vec<usize> = prefix
                .0
                .iter()
                .map(|l| match l {
                    Letter::Dlog(i) => *i,
                    _ => unreachable!(),
                })
                .collect();
            total += c.to_f64() * ctx.reg("p1", &scene, &p1, &ls) * ctx.reg("p2", &scene, &p2, &lp);
        }
        worst = worst.max((full - total).norm());
    }
    CriterionResult {
        id: 8,
        name: "deconcat-composition",
        pass: worst < 1e-6,
        detail: format!(
            "words to length 3, dch split at 1/2 with unit jets: worst {worst:.2e} (tol 1e-6)"
        ),
    }
}

fn c9_monodromy(ctx: &mut Ctx) -> CriterionResult {
    let scene = Scene::zero_one();
    let lp = standard_loop(&scene, 0, ExactScalar::from_frac(1, 2)).unwrap();
    let tau = std::f64::consts::TAU;
    let v1 = ctx.reg("loop0", &scene, &lp, &[0]);
    let e1 = (v1 - Complex64::new(0.0, tau)).norm();
    let v2 = ctx.reg("loop0", &scene, &lp, &[0, 0]);
    let expect2 = Complex64::new(0.0, tau) * Complex64::new(0.0, tau) / 2.0;
    let e2 = (v2 - expect2).norm();
    CriterionResult {
        id: 9,
        name: "monodromy",
        pass: e1 < 1e-8 && e2 < 1e-6,
        detail: format!(
            "[dz/z] vs 2 pi i: {e1:.2e} (tol 1e-8); [dz/z|dz/z] vs (2 pi i)^2/2: {e2:.2e} (tol 1e-6)"
        ),
    }
}

fn c10_functoriality(ctx: &mut Ctx) -> CriterionResult {
    // Exact pushforward: z -> z^2 with tangent scale 3 pushes to 9.
    let map = MonomialMap {
        exponents: vec![vec![2]],
        units: vec![ExactComplex::one()],
    };
    let model = SncLocalModel::new(vec![ExactComplex::from_int(3, 0)]).unwrap();
    let pushed = push_tangential(&map, &model).unwrap();
    let push_ok = pushed.scales == vec![ExactComplex::from_int(9, 0)];

    // Integral triangle for f(z) = z^2: along the ordinary line
    // gamma: 1/4 -> 3/4 the pullback of dlog(z-1) integrates to the same
    // value as dlog(z-1) along f o gamma.
    let source = Scene::new(vec![
        ExactComplex::zero(),
        ExactComplex::one(),
        ExactComplex::from_int(-1, 0),
    ])
    .unwrap();
    let target = Scene::zero_one();
    let f = LineMap::Power { n: 2 };
    let form = LogOneForm::dlog(1);
    let pb = pullback_form(&f, &source, &target, &form).unwrap();
    let q = |n: i64, d: i64| ExactScalar::from_frac(n, d);
    let gamma = Path {
        segments: vec![Segment::Line {
            from: ExactComplex::new(q(1, 4), ExactScalar::zero()),
            to: ExactComplex::new(q(3, 4), ExactScalar::zero()),
        }],
        start: TangentialBasepoint::ordinary(ExactComplex::new(q(1, 4), ExactScalar::zero())),
        end: TangentialBasepoint::ordinary(ExactComplex::new(q(3, 4), ExactScalar::zero())),
    };
    // f o gamma = (1/4 + t/2)^2 as an exact cubic Bezier.
    let fgamma = Path {
        segments: vec![bez([(1, 16, 0), (7, 48, 0), (5, 16, 0), (9, 16, 0)])],
        start: TangentialBasepoint::ordinary(ExactComplex::new(q(1, 16), ExactScalar::zero())),
        end: TangentialBasepoint::ordinary(ExactComplex::new(q(9, 16), ExactScalar::zero())),
    };
    let lhs = regularize(&source, &gamma, &[pb], &ctx.cfg).unwrap();
    let rhs = regularize(&target, &fgamma, &[form], &ctx.cfg).unwrap();
    let e_tri = (Complex64::new(lhs.value.0, lhs.value.1)
        - Complex64::new(rhs.value.0, rhs.value.1))
    .norm();

    // Jet functoriality on the regularized side: pulling dz/z back along
    // z -> z^2 doubles it, so the jet-4 path pairs to twice the jet-2 path.
    let jet_scene = Scene::new(vec![ExactComplex::zero()]).unwrap();
    let p4 = standard_jet(&jet_scene, &ExactScalar::from_int(4)).unwrap();
    let p2 = standard_jet(&jet_scene, &ExactScalar::from_int(2)).unwrap();
    let v4 = ctx.reg("jet4", &jet_scene, &p4, &[0]);
    let v2 = ctx.reg("jet2", &jet_scene, &p2, &[0]);
    let e_jet = (v4 - 2.0 * v2).norm();

    CriterionResult {
        id: 10,
        name: "functoriality",
        pass: push_ok && e_tri < 1e-6 && e_jet < 1e-6,
        detail: format!(
            "push(z^2, 3) = 9 exact: {push_ok}; pullback triangle: {e_tri:.2e}; \
             jet doubling: {e_jet:.2e} (tol 1e-6)"
        ),
    }
}

fn c11_homotopy(ctx: &mut Ctx) -> CriterionResult {
    let scene = Scene::zero_one();
    let dch = standard_dch(&scene).unwrap();
    // A two-segment Bezier detour through 1/2 + 3i/10 with the same
    // tangential endpoint data as dch (global one-jets exactly 1).
    let detour = Path {
        segments: vec![
            bez([(0, 1, 0), (1, 6, 0), (5, 20, 6), (5, 10, 3)]),
            bez([(5, 10, 3), (15, 20, 6), (5, 6, 0), (1, 1, 0)]),
        ],
        start: TangentialBasepoint::at_puncture(0, ExactComplex::one()),
        end: TangentialBasepoint::at_puncture(1, -&ExactComplex::one()),
    };
    let a = ctx.reg("dch", &scene, &dch, &[0, 1]);
    let b = ctx.reg("detour", &scene, &detour, &[0, 1]);
    let e = (a - b).norm();
    CriterionResult {
        id: 11,
        name: "homotopy-invariance",
        pass: e < 1e-6,
        detail: format!("dch vs Bezier detour for [dz/z|dz/(z-1)]: {e:.2e} (tol 1e-6)"),
    }
}

fn c12_determinism() -> CriterionResult {
    let scene = Scene::zero_one();
    let dch = standard_dch(&scene).unwrap();
    let el = BarElement::from_word(BarWord(vec![Letter::Dlog(0), Letter::Dlog(1)]));
    let c = cfg(false);
    let render = || {
        let r = period_pairing(&scene, &dch, &el, &c).unwrap();
        to_canonical_string(&regularized_json(&r))
    };
    let a = render();
    let b = render();
    let pass = a == b;
    CriterionResult {
        id: 12,
        name: "determinism",
        pass,
        detail: if pass {
            format!("two serial runs render identically ({} bytes)", a.len())
        } else {
            "serial renders differ".to_string()
        },
    }
}

/// Run all acceptance criteria.
pub fn run_all(parallel: bool) -> Vec<CriterionResult> {
    let mut ctx = Ctx::new(parallel);
    vec![
        c1_hopf(),
        c2_bar_d_squared(),
        c3_h0_dims(),
        c4_zeta(&mut ctx),
        c5_regularization(&mut ctx),
        c6_multiplicativity(&mut ctx),
        c7_antipode(&mut ctx),
        c8_deconcat(&mut ctx),
        c9_monodromy(&mut ctx),
        c10_functoriality(&mut ctx),
        c11_homotopy(&mut ctx),
        c12_determinism(),
    ]
}

/// Render the suite as one deterministic JSON document.
pub fn suite_json(results: &[CriterionResult]) -> serde_json::Value {
    serde_json::json!({
        "criteria": results.iter().map(|r| serde_json::json!({
            "id": r.id,
            "name": r.name,
            "pass": r.pass,
            "detail": r.detail,
        })).collect::<Vec<_>>(),
        "pass": results.iter().all(|r| r.pass),
    })
}
