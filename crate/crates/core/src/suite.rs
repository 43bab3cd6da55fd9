//! Identity suites shared by the test gate and the `verify` command.
//!
//! Each check enumerates a finite generating set and reports how many cases
//! it evaluated. Where a check visits a reduced set of tuples the reduction is
//! stated next to its configuration.

use std::fmt::Display;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chevalley::{
    cochain_bracket, cochain_differential, cochain_equal_on_basis, phi, structure_cochain,
    symmetry_defect, vanishes_on_basis, BasisBounds, Cochain,
};
use crate::deform::{
    defect_series, gauge_equivalent, gauge_flow, mc_solve, ArtinRing, ArtinSeries, GaugeParam,
    SolveStatus,
};
use crate::error::Result;
use crate::form::{form_basis, DiffForm};
use crate::hochschild::{
    cochain_basis, cup, delta_primitive, gerstenhaber, hkr, hoch_delta, i_func_hoch, MultiDiffOp,
    PrimitiveBounds, PrimitiveOutcome,
};
use crate::multivector::{multivector_basis, PolyVector};
use crate::poly::{Monomial, Polynomial};
use crate::rational::Rational;
use crate::twisted::{linfty_relations_check, make_twisted, LinftyBounds, TwistedStructure};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    /// First counterexample, or a note on what was certified.
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn cases(&self) -> u64 {
        self.checks.iter().map(|c| c.cases).sum()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Runs `body` over cases; `body` returns a failure description to stop.
struct Tally {
    cases: u64,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failure: None,
        }
    }

    /// Records one case; returns whether to continue.
    fn case(&mut self, failure: Option<String>) -> bool {
        self.cases += 1;
        if failure.is_some() {
            self.failure = failure;
            return false;
        }
        true
    }

    fn finish(self, name: impl Into<String>) -> CheckResult {
        CheckResult {
            name: name.into(),
            passed: self.failure.is_none(),
            cases: self.cases,
            detail: self.failure,
        }
    }
}

fn sign(e: usize) -> Rational {
    Rational::sign_power(e as i64)
}

fn deg(p: &PolyVector) -> usize {
    p.degree().unwrap_or(0)
}

fn describe<T: Display>(items: &[&T]) -> String {
    items.iter().map(|x| format!("({x})")).collect::<Vec<_>>().join(", ")
}

fn phi_or_zero(omega: &DiffForm, nvars: usize, arity: usize) -> Result<Cochain> {
    if omega.is_zero() {
        Ok(Cochain::zero(nvars, arity, arity as i64 - 2))
    } else {
        phi(omega)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SchoutenConfig {
    pub max_nvars: usize,
    pub poly_degree: u32,
    pub mv_degree: usize,
}

impl Default for SchoutenConfig {
    fn default() -> Self {
        SchoutenConfig {
            max_nvars: 4,
            poly_degree: 2,
            mv_degree: 3,
        }
    }
}

/// Graded antisymmetry (ordered pairs), graded Jacobi (triples up to order,
/// which suffices once antisymmetry holds), the derivation rule for wedge
/// (all `a`, unordered `b, c`, the other order following from graded
/// commutativity), the contraction derivation rule, and `d² = 0` with the
/// Leibniz rule for forms.
pub fn schouten_suite(cfg: SchoutenConfig) -> SuiteReport {
    let mut checks = Vec::new();
    for n in 1..=cfg.max_nvars {
        let basis = multivector_basis(n, cfg.poly_degree, cfg.mv_degree);

        let mut t = Tally::new();
        'outer: for a in &basis {
            for b in &basis {
                let lhs = a.schouten(b).unwrap();
                let rhs = b.schouten(a).unwrap().scale(&-sign((deg(a) + 1) * (deg(b) + 1)));
                if !t.case((lhs != rhs).then(|| describe(&[a, b]))) {
                    break 'outer;
                }
            }
        }
        checks.push(t.finish(format!("antisymmetry n={n}")));

        let mut t = Tally::new();
        'outer: for i in 0..basis.len() {
            for j in i..basis.len() {
                let ab = basis[i].schouten(&basis[j]).unwrap();
                for k in j..basis.len() {
                    let (a, b, c) = (&basis[i], &basis[j], &basis[k]);
                    let bc = b.schouten(c).unwrap();
                    let ca = c.schouten(a).unwrap();
                    let sum = ab
                        .schouten(c)
                        .unwrap()
                        .scale(&sign((deg(a) + 1) * (deg(c) + 1)))
                        .add(&bc.schouten(a).unwrap().scale(&sign((deg(b) + 1) * (deg(a) + 1))))
                        .unwrap()
                        .add(&ca.schouten(b).unwrap().scale(&sign((deg(c) + 1) * (deg(b) + 1))))
                        .unwrap();
                    if !t.case((!sum.is_zero()).then(|| describe(&[a, b, c]))) {
                        break 'outer;
                    }
                }
            }
        }
        checks.push(t.finish(format!("jacobi n={n}")));

        let mut t = Tally::new();
        'outer: for a in &basis {
            for j in 0..basis.len() {
                let b = &basis[j];
                let ab = a.schouten(b).unwrap();
                for c in &basis[j..] {
                    let bc = b.wedge(c).unwrap();
                    let lhs = a.schouten(&bc).unwrap();
                    let rhs = ab
                        .wedge(c)
                        .unwrap()
                        .add(&b.wedge(&a.schouten(c).unwrap()).unwrap().scale(&sign((deg(a) + 1) * deg(b))))
                        .unwrap();
                    if !t.case((lhs != rhs).then(|| describe(&[a, b, c]))) {
                        break 'outer;
                    }
                }
            }
        }
        checks.push(t.finish(format!("wedge leibniz n={n}")));

        // contraction is function-linear in the form
        let mut t = Tally::new();
        'outer: for c in 0..n {
            let alpha = DiffForm::coframe(n, &[c]).unwrap();
            for p in &basis {
                let ap = p.contract(&alpha).unwrap();
                for r in &basis {
                    let lhs = p.wedge(r).unwrap().contract(&alpha).unwrap();
                    let rhs = ap
                        .wedge(r)
                        .unwrap()
                        .add(&p.wedge(&r.contract(&alpha).unwrap()).unwrap().scale(&sign(deg(p))))
                        .unwrap();
                    if !t.case((lhs != rhs).then(|| format!("dx{} on {}", c + 1, describe(&[p, r])))) {
                        break 'outer;
                    }
                }
            }
        }
        checks.push(t.finish(format!("contraction derivation n={n}")));

        let forms = form_basis(n, cfg.poly_degree, n);
        let mut t = Tally::new();
        'outer: for a in &forms {
            if !t.case((!a.d().d().is_zero()).then(|| describe(&[a]))) {
                break;
            }
            let da = a.d();
            let ka = a.degree().unwrap_or(0);
            for b in &forms {
                let lhs = a.wedge(b).unwrap().d();
                let rhs = da.wedge(b).unwrap().add(&a.wedge(&b.d()).unwrap().scale(&sign(ka))).unwrap();
                if !t.case((lhs != rhs).then(|| describe(&[a, b]))) {
                    break 'outer;
                }
            }
        }
        checks.push(t.finish(format!("de rham n={n}")));
    }
    SuiteReport {
        suite: "schouten",
        checks,
    }
}

#[derive(Clone, Debug)]
pub struct LemmaConfig {
    pub nvars: Vec<usize>,
    pub form_poly_degree: u32,
    pub form_degree: usize,
    pub mv_degree: usize,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        LemmaConfig {
            nvars: vec![2, 3, 4],
            form_poly_degree: 2,
            form_degree: 3,
            mv_degree: 3,
        }
    }
}

/// `∂Φ(α) = Φ(dα)` for every basis form; both sides are graded symmetric
/// and of total order at most one in the arguments, so unordered tuples of
/// total coefficient degree at most one determine them. `[Φ(α), Φ(β)]` is
/// function-linear in all inputs and is checked on constant data. The
/// pairing identity for one-forms and vector fields is checked verbatim.
pub fn lemma_suite(cfg: &LemmaConfig) -> SuiteReport {
    let mut checks = Vec::new();
    for &n in &cfg.nvars {
        let mv = cfg.mv_degree;

        let mut t = Tally::new();
        for a in form_basis(n, cfg.form_poly_degree, cfg.form_degree) {
            let k = a.degree().unwrap_or(0);
            let lhs = cochain_differential(&phi(&a).unwrap()).unwrap();
            let rhs = phi_or_zero(&a.d(), n, k + 1).unwrap();
            let r = cochain_equal_on_basis(&lhs, &rhs, BasisBounds::new(1, mv).with_total_poly_degree(1).unordered())
                .unwrap();
            t.cases += r.tuples_checked.saturating_sub(1);
            let fail = r.witness.map(|(args, _, _)| {
                format!("alpha = {a} on {}", describe(&args.iter().collect::<Vec<_>>()))
            });
            if !t.case(fail) {
                break;
            }
        }
        checks.push(t.finish(format!("d intertwines n={n}")));

        let constant_forms = form_basis(n, 0, cfg.form_degree);
        let mut t = Tally::new();
        'outer: for a in &constant_forms {
            for b in &constant_forms {
                if a.degree() == Some(0) && b.degree() == Some(0) {
                    continue;
                }
                let c = cochain_bracket(&phi(a).unwrap(), &phi(b).unwrap()).unwrap();
                let r = vanishes_on_basis(&c, BasisBounds::new(0, mv).unordered());
                t.cases += r.tuples_checked.saturating_sub(1);
                let fail = r.witness.map(|(args, _, _)| {
                    format!("[{a}, {b}] on {}", describe(&args.iter().collect::<Vec<_>>()))
                });
                if !t.case(fail) {
                    break 'outer;
                }
            }
        }
        checks.push(t.finish(format!("phi brackets vanish n={n}")));

        let mut t = Tally::new();
        let m = structure_cochain(n);
        let bounds = BasisBounds::new(1, mv).with_total_poly_degree(1);
        let fail = symmetry_defect(&m, bounds).map(|(args, i)| format!("m, slot {i}, {args:?}"));
        t.case(fail);
        for a in &constant_forms {
            if !t.case(symmetry_defect(&phi(a).unwrap(), BasisBounds::new(0, mv)).map(|(_, i)| format!("{a}, slot {i}"))) {
                break;
            }
        }
        checks.push(t.finish(format!("graded symmetry n={n}")));

        // ⟨ω,[X,Y]⟩ - [⟨ω,X⟩,Y] - [X,⟨ω,Y⟩] = Φ(dω)(X,Y)
        let fields: Vec<PolyVector> = multivector_basis(n, cfg.form_poly_degree, 1)
            .into_iter()
            .filter(|v| v.degree() == Some(1))
            .collect();
        let mut t = Tally::new();
        'outer: for w in form_basis(n, cfg.form_poly_degree, 1).iter().filter(|w| w.degree() == Some(1)) {
            let dw = phi_or_zero(&w.d(), n, 2).unwrap();
            for x in &fields {
                let wx = x.contract(w).unwrap();
                for y in &fields {
                    let lhs = x
                        .schouten(y)
                        .unwrap()
                        .contract(w)
                        .unwrap()
                        .sub(&wx.schouten(y).unwrap())
                        .unwrap()
                        .sub(&x.schouten(&y.contract(w).unwrap()).unwrap())
                        .unwrap();
                    let rhs = dw.eval(&[x.clone(), y.clone()]).unwrap();
                    if !t.case((lhs != rhs).then(|| format!("omega = {w}, X = {x}, Y = {y}"))) {
                        break 'outer;
                    }
                }
            }
        }
        checks.push(t.finish(format!("pairing identity n={n}")));
    }
    SuiteReport {
        suite: "lemma",
        checks,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LinftyConfig {
    pub mv_degree: usize,
}

impl Default for LinftyConfig {
    fn default() -> Self {
        LinftyConfig { mv_degree: 3 }
    }
}

fn coframe(n: usize, idx: &[usize]) -> DiffForm {
    DiffForm::coframe(n, idx).unwrap()
}

fn frame(n: usize, idx: &[usize]) -> PolyVector {
    PolyVector::frame(n, idx).unwrap()
}

/// `dx1∧dx2∧dx3` and `∂1∧∂2 + ∂3∧∂4` on four variables.
pub fn r4_counterexample() -> (DiffForm, PolyVector) {
    (coframe(4, &[0, 1, 2]), frame(4, &[0, 1]).add(&frame(4, &[2, 3])).unwrap())
}

fn relation_checks(prefix: &str, l2: &Cochain, l3: &Cochain, bounds: LinftyBounds, checks: &mut Vec<CheckResult>) {
    let report = linfty_relations_check(l2, l3, bounds).unwrap();
    for r in report.relations {
        checks.push(CheckResult {
            name: format!("{prefix} {}", r.name),
            passed: r.passed,
            cases: r.tuples_checked,
            detail: r
                .witness
                .map(|(args, v)| format!("{} -> {v}", describe(&args.iter().collect::<Vec<_>>()))),
        });
    }
}

/// The L∞ relations for closed, zero and cohomologous twists and their
/// failure for a non-closed twist.
pub fn linfty_suite(cfg: LinftyConfig) -> SuiteReport {
    let mut checks = Vec::new();
    let bounds = LinftyBounds::for_context(cfg.mv_degree);
    let n = 4;
    let h = coframe(n, &[0, 1, 2]);
    let closed = make_twisted(&h).unwrap();
    relation_checks("closed", closed.l2(), closed.l3(), bounds, &mut checks);

    let untwisted = TwistedStructure::untwisted(n);
    relation_checks("untwisted", untwisted.l2(), untwisted.l3(), bounds, &mut checks);

    // H + dB with B = x1 dx2∧dx4
    let b = coframe(n, &[1, 3]).wedge(&DiffForm::function(Polynomial::var(n, 0))).unwrap();
    let shifted = make_twisted(&h.add(&b.d()).unwrap()).unwrap();
    relation_checks("cohomologous", shifted.l2(), shifted.l3(), bounds, &mut checks);

    let h_bad = h.wedge(&DiffForm::function(Polynomial::var(n, 3))).unwrap();
    let l3_bad = phi(&h_bad).unwrap();
    let report = linfty_relations_check(&structure_cochain(n), &l3_bad, bounds).unwrap();
    let mixed = report.relation("[l2,l3]").unwrap();
    checks.push(CheckResult {
        name: "non-closed [l2,l3] fails".into(),
        passed: !mixed.passed && mixed.witness.is_some(),
        cases: mixed.tuples_checked,
        detail: mixed
            .witness
            .as_ref()
            .map(|(args, v)| format!("witness {} -> {v}", describe(&args.iter().collect::<Vec<_>>()))),
    });
    checks.push(CheckResult {
        name: "non-closed twist rejected".into(),
        passed: make_twisted(&h_bad).is_err(),
        cases: 1,
        detail: None,
    });

    // every bivector in two variables is twisted Poisson
    let s2 = TwistedStructure::untwisted(2);
    let bivs: Vec<PolyVector> = multivector_basis(2, 2, 2).into_iter().filter(|p| deg(p) == 2).collect();
    let mut t = Tally::new();
    'outer: for a in &bivs {
        for b in &bivs {
            let p = a.add(b).unwrap();
            if !t.case((!s2.is_twisted_poisson(&p).unwrap()).then(|| p.to_string())) {
                break 'outer;
            }
        }
    }
    checks.push(t.finish("two variables always twisted poisson"));
    SuiteReport {
        suite: "linfty",
        checks,
    }
}

/// The defining equation on the standard examples.
pub fn twisted_oracle_suite() -> SuiteReport {
    let mut checks = Vec::new();
    let r3 = make_twisted(&coframe(3, &[0, 1, 2])).unwrap();
    let (h4, pi4) = r4_counterexample();
    let r4 = make_twisted(&h4).unwrap();
    let y_pxz = frame(3, &[0, 2]).mul_poly(&Polynomial::var(3, 1)).unwrap();
    let oracle = [
        ("dx^dy^dz, dx^dy", r3.is_twisted_poisson(&frame(3, &[0, 1])).unwrap(), true),
        ("dx^dy^dz, y dx^dz", r3.is_twisted_poisson(&y_pxz).unwrap(), true),
        ("R4 counterexample", r4.is_twisted_poisson(&pi4).unwrap(), false),
    ];
    for (name, got, want) in oracle {
        checks.push(CheckResult {
            name: format!("twisted poisson {name}"),
            passed: got == want,
            cases: 1,
            detail: Some(format!("got {got}")),
        });
    }

    SuiteReport {
        suite: "twisted",
        checks,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HochschildConfig {
    pub nvars: usize,
    pub bounds: PrimitiveBounds,
    pub max_arity: usize,
    /// Bounds of the exhaustive Jacobi check.
    pub jacobi_nvars: usize,
    pub jacobi_bounds: PrimitiveBounds,
    pub jacobi_max_arity: usize,
    /// Random dense triples checked at the full bounds.
    pub jacobi_samples: usize,
    pub seed: u64,
    /// Bounds of the formality shadow: basis multivectors and primitives.
    pub shadow_nvars: usize,
    pub shadow_poly_degree: u32,
    pub shadow_mv_degree: usize,
    pub shadow_primitive: PrimitiveBounds,
}

impl Default for HochschildConfig {
    fn default() -> Self {
        HochschildConfig {
            nvars: 3,
            bounds: PrimitiveBounds {
                poly_degree: 2,
                op_order: 2,
            },
            max_arity: 3,
            jacobi_nvars: 2,
            jacobi_bounds: PrimitiveBounds {
                poly_degree: 1,
                op_order: 1,
            },
            jacobi_max_arity: 3,
            jacobi_samples: 100,
            seed: 7,
            shadow_nvars: 2,
            shadow_poly_degree: 1,
            shadow_mv_degree: 2,
            shadow_primitive: PrimitiveBounds {
                poly_degree: 2,
                op_order: 2,
            },
        }
    }
}

/// `(-1)^{(k-1)(l-1)}`.
fn gsign(k: usize, l: usize) -> Rational {
    sign((k + 1) * (l + 1))
}

fn jacobiator(a: &MultiDiffOp, b: &MultiDiffOp, c: &MultiDiffOp) -> MultiDiffOp {
    let (ka, kb, kc) = (a.arity(), b.arity(), c.arity());
    let g = |p: &MultiDiffOp, q: &MultiDiffOp| gerstenhaber(p, q).unwrap();
    g(&g(a, b), c)
        .scale(&gsign(ka, kc))
        .add(&g(&g(b, c), a).scale(&gsign(kb, ka)))
        .unwrap()
        .add(&g(&g(c, a), b).scale(&gsign(kc, kb)))
        .unwrap()
}

fn random_op(rng: &mut ChaCha8Rng, basis: &[Vec<MultiDiffOp>], n: usize) -> MultiDiffOp {
    let arity = rng.gen_range(0..basis.len());
    let mut acc = MultiDiffOp::zero(n, arity);
    for _ in 0..4 {
        let b = &basis[arity][rng.gen_range(0..basis[arity].len())];
        acc = acc.add(&b.scale(&Rational::from_integer(rng.gen_range(-3..=3)))).unwrap();
    }
    acc
}

/// Identities of the Hochschild calculus on basis cochains. Pair identities
/// are checked on pairs whose result has arity at most `max_arity`; the
/// graded Jacobi identity exhaustively at the smaller `jacobi_*` bounds and
/// on random dense combinations at the full bounds.
pub fn hochschild_suite(cfg: HochschildConfig) -> SuiteReport {
    let n = cfg.nvars;
    let basis: Vec<Vec<MultiDiffOp>> = (0..=cfg.max_arity).map(|k| cochain_basis(n, k, cfg.bounds)).collect();
    let all = || basis.iter().flatten();
    let mut checks = Vec::new();

    let mut t = Tally::new();
    for d in all() {
        if !t.case((!hoch_delta(&hoch_delta(d)).is_zero()).then(|| d.to_string())) {
            break;
        }
    }
    checks.push(t.finish("delta squared"));

    let mu = MultiDiffOp::multiplication(n);
    let mut t = Tally::new();
    for d in all() {
        let diff = gerstenhaber(&mu, d).unwrap().sub(&hoch_delta(d)).unwrap();
        if !t.case((!diff.is_zero()).then(|| d.to_string())) {
            break;
        }
    }
    checks.push(t.finish("delta is bracket with mu"));

    let mut t = Tally::new();
    'outer: for k in 0..=cfg.max_arity {
        for l in k..=(cfg.max_arity + 1 - k).min(cfg.max_arity) {
            for (i, d) in basis[k].iter().enumerate() {
                let start = if k == l { i } else { 0 };
                for e in &basis[l][start..] {
                    let lhs = gerstenhaber(d, e).unwrap();
                    let rhs = gerstenhaber(e, d).unwrap().scale(&-gsign(k, l));
                    if !t.case((!lhs.sub(&rhs).unwrap().is_zero()).then(|| format!("{d} ; {e}"))) {
                        break 'outer;
                    }
                }
            }
        }
    }
    checks.push(t.finish("bracket antisymmetry"));

    let jb: Vec<MultiDiffOp> = (0..=cfg.jacobi_max_arity)
        .flat_map(|k| cochain_basis(cfg.jacobi_nvars, k, cfg.jacobi_bounds))
        .collect();
    let mut t = Tally::new();
    'outer: for i in 0..jb.len() {
        for j in i..jb.len() {
            for k in j..jb.len() {
                let (a, b, c) = (&jb[i], &jb[j], &jb[k]);
                if a.arity() + b.arity() + c.arity() > cfg.jacobi_max_arity + 2 {
                    continue;
                }
                if !t.case((!jacobiator(a, b, c).is_zero()).then(|| format!("{a} ; {b} ; {c}"))) {
                    break 'outer;
                }
            }
        }
    }
    checks.push(t.finish("jacobi exhaustive"));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut t = Tally::new();
    for _ in 0..cfg.jacobi_samples {
        let (a, b, c) = (random_op(&mut rng, &basis, n), random_op(&mut rng, &basis, n), random_op(&mut rng, &basis, n));
        if !t.case((!jacobiator(&a, &b, &c).is_zero()).then(|| format!("{a} ; {b} ; {c}"))) {
            break;
        }
    }
    checks.push(t.finish("jacobi random dense"));

    let monos: Vec<Polynomial> = Monomial::all_up_to(n, cfg.bounds.poly_degree)
        .into_iter()
        .map(|m| Polynomial::monomial(m, Rational::from_integer(1)))
        .collect();

    // δ(D∪E) = δD∪E + (-1)^k D∪δE and i_a(D∪E) = i_aD∪E + (-1)^k D∪i_aE
    let mut td = Tally::new();
    let mut ti = Tally::new();
    'outer: for k in 0..=cfg.max_arity {
        for l in 0..=cfg.max_arity - k {
            for d in &basis[k] {
                let dd = hoch_delta(d);
                for e in &basis[l] {
                    let de = cup(d, e).unwrap();
                    let lhs = hoch_delta(&de);
                    let rhs = cup(&dd, e).unwrap().add(&cup(d, &hoch_delta(e)).unwrap().scale(&sign(k))).unwrap();
                    if !td.case((!lhs.sub(&rhs).unwrap().is_zero()).then(|| format!("{d} ; {e}"))) {
                        break 'outer;
                    }
                    for a in &monos {
                        let lhs = i_func_hoch(a, &de).unwrap();
                        let rhs = cup(&i_func_hoch(a, d).unwrap(), e)
                            .unwrap()
                            .add(&cup(d, &i_func_hoch(a, e).unwrap()).unwrap().scale(&sign(k)))
                            .unwrap();
                        if !ti.case((!lhs.sub(&rhs).unwrap().is_zero()).then(|| format!("a = {a}: {d} ; {e}"))) {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    checks.push(td.finish("delta derivation of cup"));
    checks.push(ti.finish("i_a derivation of cup"));

    let mut t = Tally::new();
    'outer: for d in basis.iter().take(cfg.max_arity).flatten() {
        let dd = hoch_delta(d);
        for a in &monos {
            let s = i_func_hoch(a, &dd).unwrap().add(&hoch_delta(&i_func_hoch(a, d).unwrap())).unwrap();
            if !t.case((!s.is_zero()).then(|| format!("a = {a}: {d}"))) {
                break 'outer;
            }
        }
    }
    checks.push(t.finish("i_a anticommutes with delta"));

    let mvs = multivector_basis(n, cfg.bounds.poly_degree, cfg.max_arity);
    let mut t = Tally::new();
    for p in &mvs {
        if !t.case((!hoch_delta(&hkr(p).unwrap()).is_zero()).then(|| p.to_string())) {
            break;
        }
    }
    checks.push(t.finish("hkr cocycle"));

    // hkr(i_a π) = -i_a(hkr π)
    let mut t = Tally::new();
    'outer: for p in &mvs {
        let hp = hkr(p).unwrap();
        for a in &monos {
            let lhs = hkr(&p.i_func(a).unwrap()).unwrap();
            let rhs = i_func_hoch(a, &hp).unwrap().neg();
            if !t.case((!lhs.sub(&rhs).unwrap().is_zero()).then(|| format!("a = {a}: {p}"))) {
                break 'outer;
            }
        }
    }
    checks.push(t.finish("hkr intertwines i_a"));

    SuiteReport {
        suite: "hochschild",
        checks,
    }
}

/// `[hkr π, hkr ρ] - hkr [π, ρ]` is a coboundary within bounds for every
/// basis pair, while `hkr(∂1∧∂2)` is not.
pub fn formality_suite(cfg: &HochschildConfig) -> SuiteReport {
    let n = cfg.shadow_nvars;
    let mvs = multivector_basis(n, cfg.shadow_poly_degree, cfg.shadow_mv_degree);
    let mut t = Tally::new();
    'outer: for p in &mvs {
        let hp = hkr(p).unwrap();
        for r in &mvs {
            let target = gerstenhaber(&hp, &hkr(r).unwrap())
                .unwrap()
                .sub(&hkr(&p.schouten(r).unwrap()).unwrap())
                .unwrap();
            let fail = match delta_primitive(&target, cfg.shadow_primitive) {
                PrimitiveOutcome::Found(x) => (!hoch_delta(&x).sub(&target).unwrap().is_zero()).then(|| format!("bad primitive for {p} ; {r}")),
                PrimitiveOutcome::NotFound { residual, .. } => Some(format!("{p} ; {r}: residual {residual}")),
            };
            if !t.case(fail) {
                break 'outer;
            }
        }
    }
    let mut out = vec![t.finish("formality shadow")];
    let target = hkr(&frame(n, &[0, 1])).unwrap();
    let (passed, detail) = match delta_primitive(&target, cfg.shadow_primitive) {
        PrimitiveOutcome::Found(x) => (false, format!("unexpected primitive {x}")),
        PrimitiveOutcome::NotFound { rank, unknowns, .. } => (true, format!("rank {rank} of {unknowns} unknowns")),
    };
    out.push(CheckResult {
        name: "hkr bivector not a coboundary".into(),
        passed,
        cases: 1,
        detail: Some(detail),
    });
    SuiteReport {
        suite: "formality",
        checks: out,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DeformConfig {
    pub samples: usize,
    pub truncation: usize,
    pub poly_degree: u32,
    pub seed: u64,
}

impl Default for DeformConfig {
    fn default() -> Self {
        DeformConfig {
            samples: 20,
            truncation: 3,
            poly_degree: 2,
            seed: 11,
        }
    }
}

fn rand_q(rng: &mut ChaCha8Rng) -> Rational {
    Rational::from_integer(rng.gen_range(-3..=3))
}

fn random_field(rng: &mut ChaCha8Rng, n: usize, fields: &[PolyVector]) -> PolyVector {
    let mut v = PolyVector::zero(n);
    for _ in 0..3 {
        v = v.add(&fields[rng.gen_range(0..fields.len())].scale(&rand_q(rng))).unwrap();
    }
    v
}

/// Formal solving examples and gauge invariance of the Maurer–Cartan
/// condition on randomly generated solutions.
pub fn deform_suite(cfg: DeformConfig) -> SuiteReport {
    let mut checks = Vec::new();

    let flat = TwistedStructure::untwisted(2);
    let r = mc_solve(&flat, &frame(2, &[0, 1]), 4, cfg.poly_degree).unwrap();
    let ok = r.is_solved()
        && r.solution.coeffs()[1..].iter().all(|c| c.is_zero())
        && defect_series(&flat, &r.solution).unwrap().iter().all(|d| d.is_zero());
    checks.push(CheckResult {
        name: "flat constant bivector solves".into(),
        passed: ok,
        cases: 1,
        detail: None,
    });

    let (h, pi) = r4_counterexample();
    let s = make_twisted(&h).unwrap();
    let linear = mc_solve(&s, &pi, 2, 1).unwrap();
    let constant = mc_solve(&s, &pi, 2, 0).unwrap();
    checks.push(CheckResult {
        name: "R4 solves with linear terms".into(),
        passed: linear.is_solved(),
        cases: 1,
        detail: Some(format!("pi_2 = {}", linear.solution.coeff(2))),
    });
    let (passed, detail) = match &constant.status {
        SolveStatus::Obstructed { order, residual } => (*order == 3 && !residual.is_zero(), format!("order {order}, residual {residual}")),
        SolveStatus::Solved => (false, "solved".into()),
    };
    checks.push(CheckResult {
        name: "R4 obstructed with constant terms".into(),
        passed,
        cases: 1,
        detail: Some(detail),
    });

    // random constant twist and bivector on R^4, extended by the solver
    let n = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ring = ArtinRing::new(cfg.truncation).unwrap();
    let fields: Vec<PolyVector> = multivector_basis(n, 1, 1).into_iter().filter(|v| deg(v) == 1).collect();
    let three_forms: Vec<DiffForm> = form_basis(n, 0, 3).into_iter().filter(|f| f.degree() == Some(3)).collect();
    let bivectors: Vec<PolyVector> = multivector_basis(n, 0, 2).into_iter().filter(|v| deg(v) == 2).collect();
    let mut flow_t = Tally::new();
    let mut equiv_t = Tally::new();
    let mut attempts = 0;
    while flow_t.cases < cfg.samples as u64 && flow_t.failure.is_none() && attempts < 20 * cfg.samples {
        attempts += 1;
        let mut h = DiffForm::zero(n);
        for f in &three_forms {
            h = h.add(&f.scale(&rand_q(&mut rng))).unwrap();
        }
        let mut pi1 = PolyVector::zero(n);
        for b in &bivectors {
            pi1 = pi1.add(&b.scale(&rand_q(&mut rng))).unwrap();
        }
        let s = make_twisted(&h).unwrap();
        let report = mc_solve(&s, &pi1, cfg.truncation, cfg.poly_degree).unwrap();
        if !report.is_solved() {
            continue;
        }
        let gamma = report.solution;
        let coeffs: Vec<PolyVector> = (1..cfg.truncation).map(|_| random_field(&mut rng, n, &fields)).collect();
        let xi = GaugeParam::new(ArtinSeries::new(ring, n, coeffs).unwrap()).unwrap();
        let image = gauge_flow(&s, &gamma, &xi).unwrap();
        let defect = defect_series(&s, &image).unwrap();
        let fail = defect
            .iter()
            .position(|d| !d.is_zero())
            .map(|k| format!("H = {h}, pi_1 = {pi1}: defect at order {}", k + 1));
        flow_t.case(fail);
        let back = gauge_equivalent(&s, &gamma, &image, cfg.poly_degree).unwrap();
        let fail = match &back.witness {
            Some(w) if gauge_flow(&s, &gamma, w).unwrap() == image => None,
            _ => Some(format!("H = {h}, pi_1 = {pi1}: no witness for a flowed solution")),
        };
        equiv_t.case(fail);
    }
    if flow_t.cases < cfg.samples as u64 && flow_t.failure.is_none() {
        flow_t.failure = Some(format!("only {} solvable samples in {attempts} attempts", flow_t.cases));
    }
    checks.push(flow_t.finish("gauge flow preserves solutions"));
    checks.push(equiv_t.finish("gauge search recovers flows"));

    // the t^{k+1} coefficient depends on ξ_k through -[ξ_k, γ_1]
    let mut t = Tally::new();
    let (h, pi) = r4_counterexample();
    let s = make_twisted(&h).unwrap();
    let gamma = mc_solve(&s, &pi, cfg.truncation, cfg.poly_degree).unwrap().solution;
    for _ in 0..cfg.samples {
        let coeffs: Vec<PolyVector> = (0..cfg.truncation).map(|_| random_field(&mut rng, n, &fields)).collect();
        let k = rng.gen_range(1..cfg.truncation);
        let v = random_field(&mut rng, n, &fields);
        let mut bumped = coeffs.clone();
        bumped[k - 1] = bumped[k - 1].add(&v).unwrap();
        let base = gauge_flow(&s, &gamma, &GaugeParam::new(ArtinSeries::new(ring, n, coeffs).unwrap()).unwrap()).unwrap();
        let moved = gauge_flow(&s, &gamma, &GaugeParam::new(ArtinSeries::new(ring, n, bumped).unwrap()).unwrap()).unwrap();
        let diff = moved.coeff(k + 1).sub(&base.coeff(k + 1)).unwrap();
        let expected = v.schouten(&gamma.coeff(1)).unwrap().neg();
        if !t.case((diff != expected).then(|| format!("xi_{k} += {v}"))) {
            break;
        }
    }
    checks.push(t.finish("gauge flow linear in leading field"));

    SuiteReport {
        suite: "deform",
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let s = schouten_suite(SchoutenConfig {
            max_nvars: 2,
            poly_degree: 1,
            mv_degree: 2,
        });
        assert!(s.passed(), "{s:?}");
        let l = lemma_suite(&LemmaConfig {
            nvars: vec![2],
            form_poly_degree: 1,
            form_degree: 2,
            mv_degree: 2,
        });
        assert!(l.passed(), "{l:?}");
        let d = deform_suite(DeformConfig {
            samples: 2,
            ..DeformConfig::default()
        });
        assert!(d.passed(), "{d:?}");
    }

    #[test]
    fn hochschild_small() {
        let h = hochschild_suite(HochschildConfig {
            nvars: 2,
            bounds: PrimitiveBounds {
                poly_degree: 1,
                op_order: 1,
            },
            max_arity: 2,
            jacobi_max_arity: 2,
            jacobi_samples: 10,
            ..HochschildConfig::default()
        });
        assert!(h.passed(), "{h:?}");
        assert!(formality_suite(&HochschildConfig::default()).passed());
        assert!(twisted_oracle_suite().passed());
    }
}
