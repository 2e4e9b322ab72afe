//! Named checks.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use super::certify::{first_not_among, first_not_short_commutator_word, first_outside_level};
use super::config::{CheckSpec, Scenario};
use super::report::{CheckReport, ReportStatus};
use super::witness::{Claim, Witness};
use crate::elementary::{eu_generator_set, fu_generators, fu_generators_raw, theorem_generators};
use crate::engine::{closure_enumerate, enumerate_bracketings, normal_closure, CommExpr, LeafKind, Level, SubgroupHandle};
use crate::error::{Error, Result};
use crate::form_ideal::{symmetrized_product, validate_form_ideal};
use crate::forms::congruence_membership;
use crate::matrix::{KeyCodec, UMatrix};
use crate::ring::validate_form_ring;
use crate::steinberg::{sweep, SweepMode};

pub const CHECK_NAMES: &[&str] = &[
    "validate",
    "steinberg",
    "genelm",
    "perfectness",
    "habdank-chain",
    "level",
    "standard",
    "absolute",
    "triple",
    "multi",
    "bracketing",
    "double-reduction",
    "m-conditions",
    "comgenerator",
    "probe-assoc",
    "probe-product",
];

// checks stated for rank at least 3
const RANK_THREE: &[&str] = &[
    "perfectness",
    "standard",
    "absolute",
    "triple",
    "multi",
    "bracketing",
    "double-reduction",
    "m-conditions",
    "comgenerator",
];

const MAX_MULTI_LEAVES: usize = 4;

#[derive(Clone, Debug)]
enum Verdict {
    Pass,
    Certified(String),
    Sampled,
    Fail(Box<Witness>),
    Budget(String),
    Skipped(String),
}

impl Verdict {
    fn fail(claim: Claim, m: Option<&UMatrix>) -> Self {
        Verdict::Fail(Box::new(Witness::new(claim, m)))
    }

    fn rank(&self) -> u8 {
        match self {
            Verdict::Fail(_) => 5,
            Verdict::Budget(_) => 4,
            Verdict::Skipped(_) => 3,
            Verdict::Sampled => 2,
            Verdict::Certified(_) => 1,
            Verdict::Pass => 0,
        }
    }

    /// The weaker of two verdicts on parts of one statement.
    fn and(self, other: Verdict) -> Verdict {
        if other.rank() > self.rank() {
            other
        } else {
            self
        }
    }

    fn describe(&self) -> String {
        match self {
            Verdict::Pass => "pass".into(),
            Verdict::Certified(why) => format!("pass, certified: {why}"),
            Verdict::Sampled => "verified-sampled".into(),
            Verdict::Fail(_) => "fail".into(),
            Verdict::Budget(why) => format!("budget-exceeded: {why}"),
            Verdict::Skipped(why) => format!("skipped: {why}"),
        }
    }
}

fn skip(e: Error) -> Verdict {
    match e {
        Error::BudgetExceeded { budget } => Verdict::Budget(format!("more than {budget} elements")),
        e => Verdict::Skipped(e.to_string()),
    }
}

struct Run<'a> {
    s: &'a Scenario,
    spec: &'a CheckSpec,
    items: Vec<(String, Verdict)>,
    sizes: BTreeMap<String, usize>,
    details: Vec<String>,
    flags: BTreeSet<String>,
}

impl<'a> Run<'a> {
    fn n(&self) -> usize {
        self.s.instance.n
    }

    fn item(&mut self, label: impl Into<String>, v: Verdict) {
        let label = label.into();
        if let Verdict::Certified(_) = v {
            self.flags.insert(format!("certified: {label}"));
        }
        self.items.push((label, v));
    }

    fn size(&mut self, key: String, h: &SubgroupHandle) {
        if let Some(s) = h.size() {
            self.sizes.insert(key, s);
        }
    }

    fn eval(&self, e: &CommExpr) -> std::result::Result<Arc<SubgroupHandle>, Verdict> {
        self.s.instance.evaluate(e).map_err(skip)
    }

    fn leaf(&self, kind: LeafKind, l: &Level) -> std::result::Result<Arc<SubgroupHandle>, Verdict> {
        self.s.instance.leaf(kind, &l.ideal).map_err(skip)
    }

    fn product(&self, a: &Level, b: &Level) -> Level {
        Level { name: format!("({}∘{})", a.name, b.name), ideal: symmetrized_product(self.s.fr(), &a.ideal, &b.ideal) }
    }

    fn unit(&self) -> Level {
        self.s.unit_level()
    }

    fn singles(&self) -> Result<Vec<Level>> {
        match &self.spec.ideals {
            Some(names) => names.iter().map(|x| self.s.level(x)).collect(),
            None => Ok(self.s.universe.clone()),
        }
    }

    fn pairs(&self, ordered: bool) -> Result<Vec<[Level; 2]>> {
        if let Some(p) = &self.spec.pairs {
            return p.iter().map(|[a, b]| Ok([self.s.level(a)?, self.s.level(b)?])).collect();
        }
        let u = self.singles()?;
        let mut out = Vec::new();
        for (i, a) in u.iter().enumerate() {
            for (j, b) in u.iter().enumerate() {
                if ordered || i <= j {
                    out.push([a.clone(), b.clone()]);
                }
            }
        }
        Ok(out)
    }

    fn triples(&self) -> Result<Vec<[Level; 3]>> {
        if let Some(t) = &self.spec.triples {
            return t.iter().map(|[a, b, c]| Ok([self.s.level(a)?, self.s.level(b)?, self.s.level(c)?])).collect();
        }
        let u = self.singles()?;
        let mut out = Vec::new();
        for a in &u {
            for b in &u {
                for c in &u {
                    out.push([a.clone(), b.clone(), c.clone()]);
                }
            }
        }
        Ok(out)
    }

    /// Configured tuples, or each ideal repeated for every default length.
    fn tuples(&self, default_lengths: &[usize]) -> Result<Vec<Vec<Level>>> {
        if let Some(t) = &self.spec.tuples {
            return t.iter().map(|row| row.iter().map(|x| self.s.level(x)).collect()).collect();
        }
        let u = self.singles()?;
        Ok(default_lengths.iter().flat_map(|&len| u.iter().map(move |l| vec![l.clone(); len])).collect())
    }

    /// `lhs ⊆ rhs` by membership of every generator of `lhs` in the store of `rhs`.
    fn includes(&self, lhs: &SubgroupHandle, rhs: &SubgroupHandle, rhs_claim: impl FnOnce() -> Claim) -> Verdict {
        let Some(store) = &rhs.store else {
            return Verdict::Budget("right-hand side is not enumerated".into());
        };
        if let Some(g) = lhs.generators.iter().find(|g| !store.contains(g)) {
            return Verdict::fail(rhs_claim(), Some(g));
        }
        if lhs.generators_complete {
            Verdict::Pass
        } else {
            Verdict::Sampled
        }
    }

    fn equal(&self, lhs: &SubgroupHandle, lhs_expr: &CommExpr, rhs: &SubgroupHandle, rhs_expr: &CommExpr) -> Verdict {
        let a = self.includes(lhs, rhs, || Claim::InSubgroup { expr: rhs_expr.clone() });
        if let Verdict::Fail(_) = a {
            return a;
        }
        let b = self.includes(rhs, lhs, || Claim::InSubgroup { expr: lhs_expr.clone() });
        if let (Some(x), Some(y)) = (lhs.size(), rhs.size()) {
            debug_assert!(!matches!((&a, &b), (Verdict::Pass, Verdict::Pass)) || x == y);
        }
        a.and(b)
    }

    /// Evaluates both sides and compares them as stores; a left side that
    /// cannot be generated falls back to sampled commutators.
    fn compare(&mut self, label: &str, lhs_expr: &CommExpr, rhs_expr: &CommExpr) -> Verdict {
        let rhs = match self.eval(rhs_expr) {
            Ok(h) => h,
            Err(v) => return v,
        };
        self.size(format!("{label}:rhs"), &rhs);
        let lhs = match self.eval(lhs_expr) {
            Ok(h) => h,
            Err(Verdict::Skipped(_)) => return self.sampled_bracket(label, lhs_expr, &rhs, rhs_expr),
            Err(v) => return v,
        };
        self.size(format!("{label}:lhs"), &lhs);
        if lhs.is_trivial() == Some(true) && rhs.is_trivial() == Some(true) {
            self.flags.insert(format!("trivial: {label}"));
        }
        self.equal(&lhs, lhs_expr, &rhs, rhs_expr)
    }

    fn sampled_bracket(&mut self, label: &str, expr: &CommExpr, rhs: &SubgroupHandle, rhs_expr: &CommExpr) -> Verdict {
        let Some((a, b)) = expr.split() else {
            return Verdict::Skipped(format!("{expr} is not computable"));
        };
        if rhs.store.is_none() {
            return Verdict::Budget("right-hand side is not enumerated".into());
        }
        let count = self.spec.samples.unwrap_or(self.s.config.samples);
        let seed = self.s.config.seed ^ (self.items.len() as u64).wrapping_mul(0x9e37_79b9);
        let draw = |e: &CommExpr, seed: u64| -> std::result::Result<Vec<UMatrix>, Verdict> {
            let h = self.eval(e)?;
            let layer = match e {
                CommExpr::Leaf { kind: LeafKind::G, level } => Some(level.ideal),
                _ => None,
            };
            self.s.instance.sample(&h, layer.as_ref(), count, seed).map_err(skip)
        };
        let (xs, ys) = match (draw(a, seed), draw(b, seed.wrapping_add(1))) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(v), _) | (_, Err(v)) => return v,
        };
        let ring = &*self.s.fr().ring;
        for (x, y) in xs.iter().zip(&ys) {
            let c = match UMatrix::commutator(ring, x, y) {
                Ok(c) => c,
                Err(e) => return skip(e),
            };
            if rhs.contains(&c) == Some(false) {
                return Verdict::fail(Claim::InSubgroup { expr: rhs_expr.clone() }, Some(&c));
            }
        }
        self.flags.insert(format!("sampled: {label}"));
        self.details.push(format!("{label}: {count} sampled commutators of {expr} lie in {rhs_expr}"));
        Verdict::Sampled
    }

    fn finish(self, name: &str, elapsed_ms: u64) -> CheckReport {
        let mut witness = None;
        let mut status = ReportStatus::Skipped;
        let mut worst = 0;
        let mut details = Vec::new();
        for (label, v) in &self.items {
            details.push(format!("{label}: {}", v.describe()));
            let (rank, st) = match v {
                Verdict::Fail(w) => {
                    if witness.is_none() {
                        witness = Some((**w).clone());
                    }
                    (4, ReportStatus::Fail)
                }
                Verdict::Budget(_) => (3, ReportStatus::BudgetExceeded),
                Verdict::Sampled => (2, ReportStatus::VerifiedSampled),
                Verdict::Pass | Verdict::Certified(_) => (1, ReportStatus::Pass),
                Verdict::Skipped(_) => (0, ReportStatus::Skipped),
            };
            if rank > worst {
                worst = rank;
                status = st;
            }
        }
        if self.items.is_empty() {
            details.push("nothing to check".into());
        }
        details.extend(self.details);
        CheckReport {
            name: name.to_string(),
            status,
            witness,
            elapsed_ms,
            sizes: self.sizes,
            details,
            flags: self.flags.into_iter().collect(),
        }
    }
}

fn e(l: &Level) -> CommExpr {
    CommExpr::leaf(LeafKind::E, l)
}

fn g(l: &Level) -> CommExpr {
    CommExpr::leaf(LeafKind::G, l)
}

fn br(a: CommExpr, b: CommExpr) -> CommExpr {
    CommExpr::bracket(a, b)
}

fn names(levels: &[Level]) -> String {
    levels.iter().map(|l| l.name.as_str()).collect::<Vec<_>>().join(",")
}

/// Runs one configured check; configuration errors are returned, every
/// other problem becomes part of the report.
pub fn run_check(s: &Scenario, spec: &CheckSpec) -> Result<CheckReport> {
    let name = spec.name.as_str();
    if !CHECK_NAMES.contains(&name) {
        return Err(Error::Config(format!("unknown check {name:?}")));
    }
    if RANK_THREE.contains(&name) && s.instance.n < 3 {
        return Ok(CheckReport::skipped(name, format!("needs n ≥ 3, scenario has n = {}", s.instance.n)));
    }
    let start = Instant::now();
    let mut run = Run { s, spec, items: Vec::new(), sizes: BTreeMap::new(), details: Vec::new(), flags: BTreeSet::new() };
    match name {
        "validate" => validate(&mut run),
        "steinberg" => steinberg(&mut run)?,
        "genelm" => genelm(&mut run)?,
        "perfectness" => perfectness(&mut run)?,
        "habdank-chain" => habdank_chain(&mut run)?,
        "level" => level(&mut run)?,
        "standard" => {
            for [a, b] in run.pairs(true)? {
                let label = names(&[a.clone(), b.clone()]);
                let v = run.compare(&label, &br(e(&a), g(&b)), &br(e(&a), e(&b)));
                run.item(label, v);
            }
        }
        "absolute" => absolute(&mut run)?,
        "triple" => {
            for [a, b, c] in run.triples()? {
                let label = names(&[a.clone(), b.clone(), c.clone()]);
                if run.product(&a, &b).ideal.is_zero() {
                    run.flags.insert(format!("degenerate: {label}"));
                }
                let v = run.compare(&label, &br(br(e(&a), g(&b)), g(&c)), &br(br(e(&a), e(&b)), e(&c)));
                run.item(label, v);
            }
        }
        "multi" => multi(&mut run)?,
        "bracketing" => bracketing(&mut run)?,
        "double-reduction" => double_reduction(&mut run)?,
        "m-conditions" => m_conditions(&mut run)?,
        "comgenerator" => comgenerator(&mut run)?,
        "probe-assoc" => probe_assoc(&mut run)?,
        "probe-product" => probe_product(&mut run)?,
        _ => unreachable!(),
    }
    Ok(run.finish(name, start.elapsed().as_millis() as u64))
}

fn validate(run: &mut Run) {
    let fr = run.s.fr();
    let report = validate_form_ring(fr);
    if report.is_valid() {
        run.item("form ring", Verdict::Pass);
    } else {
        let laws: Vec<String> = report.violations.iter().map(|v| v.detail.clone()).collect();
        run.details.push(format!("form ring: {}", laws.join("; ")));
        run.item("form ring", Verdict::fail(Claim::FormRingValid, None));
    }
    let n = run.n();
    let user: Vec<Level> = run.s.config.ideals.keys().map(|k| run.s.levels[k].clone()).collect();
    for level in user {
        let report = validate_form_ideal(fr, &level.ideal);
        if report.is_valid() {
            run.item(level.name.clone(), Verdict::Pass);
            continue;
        }
        let laws: Vec<String> = report.violations.iter().map(|v| v.detail.clone()).collect();
        run.details.push(format!("{}: {}", level.name, laws.join("; ")));
        // a transvection of the declared level outside GU(2n, I, Γ) shows the
        // inconsistency as a matrix
        let m = fu_generators_raw(fr, &level.ideal, n).into_iter().find(|t| !congruence_membership(fr, &level.ideal, t));
        run.item(level.name.clone(), Verdict::fail(Claim::FormIdealValid { level: level.clone() }, m.as_ref()));
    }
}

fn steinberg(run: &mut Run) -> Result<()> {
    let mode = match run.spec.mode.as_deref() {
        None | Some("exhaustive") => SweepMode::Exhaustive,
        Some("random") => SweepMode::Random {
            per_relation: run.spec.per_relation.unwrap_or(run.s.config.samples),
            seed: run.s.config.seed,
        },
        Some(other) => return Err(Error::Config(format!("unknown sweep mode {other:?}"))),
    };
    let report = sweep(run.s.fr(), run.n(), mode);
    for (rel, count) in &report.checked {
        run.sizes.insert(format!("{rel:?}"), *count);
    }
    match report.failures.first() {
        Some(f) => {
            run.details.push(format!("{} failing instances", report.failures.len()));
            run.item("R1-R6", Verdict::fail(Claim::Relation { instance: *f }, None));
        }
        None => run.item("R1-R6", Verdict::Pass),
    }
    Ok(())
}

fn genelm(run: &mut Run) -> Result<()> {
    let s = run.s;
    let fr = s.fr();
    let n = run.n();
    let codec = KeyCodec::new(&fr.ring, n)?;
    let ambient = s.instance.ambient_generators();
    for level in run.singles()? {
        let label = level.name.clone();
        let z = match run.leaf(LeafKind::E, &level) {
            Ok(h) => h,
            Err(v) => {
                run.item(label, v);
                continue;
            }
        };
        run.size(format!("{label}:closure"), &z);
        if z.store.is_none() {
            // the Z-generators include all of EU(A)'s, and both sides lie in EU(A)
            let all_z = eu_generator_set(fr, &level.ideal, n);
            let v = match first_not_among(&codec, &ambient, &all_z) {
                None => Verdict::Certified("every EU(A) generator is a Z-generator, so both sides equal EU(A)".into()),
                Some(_) => Verdict::Budget("closure of the Z-generators is not enumerated".into()),
            };
            run.item(label, v);
            continue;
        }
        let nc = normal_closure(&fr.ring, n, &fu_generators(fr, &level.ideal, n), &ambient, s.config.budget)?;
        run.size(format!("{label}:normal"), &nc);
        let (Some(zs), Some(ns)) = (&z.store, &nc.store) else {
            run.item(label, Verdict::Budget("normal closure is not enumerated".into()));
            continue;
        };
        let v = if let Some(m) = zs.first_missing_from(ns) {
            Verdict::fail(Claim::InNormalClosure { level: level.clone() }, Some(&m))
        } else if let Some(m) = ns.first_missing_from(zs) {
            Verdict::fail(Claim::InSubgroup { expr: e(&level) }, Some(&m))
        } else {
            Verdict::Pass
        };
        run.item(label, v);
    }
    Ok(())
}

fn perfectness(run: &mut Run) -> Result<()> {
    let unit = run.unit();
    let ring = &*run.s.fr().ring;
    let n = run.n();
    for level in run.singles()? {
        let label = level.name.clone();
        let lhs = match run.leaf(LeafKind::E, &level) {
            Ok(h) => h,
            Err(v) => {
                run.item(label, v);
                continue;
            }
        };
        if lhs.store.is_none() {
            let v = if level.ideal == unit.ideal {
                let gens = run.s.instance.ambient_generators();
                match first_not_short_commutator_word(ring, n, &gens, &gens, &gens)? {
                    None => Verdict::Certified("each EU(A) generator is a product of at most two commutators of EU(A) generators".into()),
                    Some(m) => Verdict::Budget(format!("no short commutator word for {m:?}")),
                }
            } else {
                Verdict::Budget("EU(I) is not enumerated".into())
            };
            run.item(label, v);
            continue;
        }
        let v = run.compare(&label, &e(&level), &br(e(&level), e(&unit)));
        run.item(label, v);
    }
    Ok(())
}

fn habdank_chain(run: &mut Run) -> Result<()> {
    let fr = run.s.fr();
    let ring = &*fr.ring;
    let n = run.n();
    let codec = KeyCodec::new(ring, n)?;
    let unit = run.unit();
    for [a, b] in run.pairs(false)? {
        let label = names(&[a.clone(), b.clone()]);
        let p = run.product(&a, &b);
        let f_expr = br(CommExpr::leaf(LeafKind::F, &a), CommExpr::leaf(LeafKind::F, &b));
        let e_expr = br(e(&a), e(&b));
        let ep = run.leaf(LeafKind::E, &p);
        let fab = run.eval(&f_expr);
        let eab = run.eval(&e_expr);
        for (key, h) in [("E(I∘J)", &ep), ("[F,F]", &fab), ("[E,E]", &eab)] {
            if let Ok(h) = h {
                run.size(format!("{label}:{key}"), h);
            }
        }
        // E(I∘J) ⊆ [F(I), F(J)]
        let first = match (&ep, &fab) {
            (Ok(x), Ok(y)) if y.store.is_some() => run.includes(x, y, || Claim::InSubgroup { expr: f_expr.clone() }),
            (Err(v), _) | (_, Err(v)) => v.clone(),
            _ if p.ideal == unit.ideal => {
                let targets = run.s.instance.ambient_generators();
                let (fa, fb) = (fu_generators(fr, &a.ideal, n), fu_generators(fr, &b.ideal, n));
                match first_not_short_commutator_word(ring, n, &targets, &fa, &fb)? {
                    None => Verdict::Certified("EU(A) generators are short commutator words in FU generators".into()),
                    Some(_) => Verdict::Budget("[FU(I), FU(J)] is not enumerated".into()),
                }
            }
            _ => Verdict::Budget("[FU(I), FU(J)] is not enumerated".into()),
        };
        // [F(I), F(J)] ⊆ [E(I), E(J)]
        let second = match (&fab, &eab) {
            (Ok(x), Ok(y)) if y.store.is_some() => run.includes(x, y, || Claim::InSubgroup { expr: e_expr.clone() }),
            _ => {
                let fa = first_not_among(&codec, &fu_generators(fr, &a.ideal, n), &eu_generator_set(fr, &a.ideal, n));
                let fb = first_not_among(&codec, &fu_generators(fr, &b.ideal, n), &eu_generator_set(fr, &b.ideal, n));
                if fa.is_none() && fb.is_none() {
                    Verdict::Certified("FU generators are Z-generators, so [FU(I), FU(J)] ⊆ [EU(I), EU(J)]".into())
                } else {
                    Verdict::Budget("[EU(I), EU(J)] is not enumerated".into())
                }
            }
        };
        // [E(I), E(J)] ⊆ GU(I∘J), element by element
        let third = match &eab {
            Ok(h) => match &h.store {
                Some(store) => match store.iter().find(|m| !congruence_membership(fr, &p.ideal, m)) {
                    Some(m) => Verdict::fail(Claim::Congruent { level: p.clone() }, Some(&m)),
                    None => Verdict::Pass,
                },
                None => {
                    let (ga, gb) = (eu_generator_set(fr, &a.ideal, n), eu_generator_set(fr, &b.ideal, n));
                    match first_outside_level(fr, n, &p.ideal, &ga, &gb)? {
                        None => Verdict::Certified("generator commutators are congruent and GU(I∘J) is normal".into()),
                        Some(m) => Verdict::fail(Claim::Congruent { level: p.clone() }, Some(&m)),
                    }
                }
            },
            Err(v) => v.clone(),
        };
        run.item(label, first.and(second).and(third));
    }
    Ok(())
}

fn level(run: &mut Run) -> Result<()> {
    let fr = run.s.fr();
    let n = run.n();
    let count = run.spec.samples.unwrap_or(run.s.config.samples);
    for (idx, [a, b]) in run.pairs(false)?.into_iter().enumerate() {
        let label = names(&[a.clone(), b.clone()]);
        let p = run.product(&a, &b);
        let (ga, gb) = match (run.leaf(LeafKind::G, &a), run.leaf(LeafKind::G, &b)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(v), _) | (_, Err(v)) => {
                run.item(label, v);
                continue;
            }
        };
        let seed = run.s.config.seed.wrapping_add(idx as u64);
        let xs = run.s.instance.sample(&ga, Some(&a.ideal), count, seed)?;
        let ys = run.s.instance.sample(&gb, Some(&b.ideal), count, seed ^ 0xabcdef)?;
        let mut verdict = None;
        for (x, y) in xs.iter().zip(&ys) {
            let c = UMatrix::commutator(&fr.ring, x, y)?;
            if !congruence_membership(fr, &p.ideal, &c) {
                verdict = Some(Verdict::fail(Claim::Congruent { level: p.clone() }, Some(&c)));
                break;
            }
        }
        run.sizes.insert(format!("{label}:samples"), count);
        let verdict = match verdict {
            Some(v) => v,
            None if ga.generators_complete && gb.generators_complete => {
                match first_outside_level(fr, n, &p.ideal, &ga.generators, &gb.generators)? {
                    None => Verdict::Pass,
                    Some(m) => Verdict::fail(Claim::Congruent { level: p.clone() }, Some(&m)),
                }
            }
            None => Verdict::Sampled,
        };
        run.item(label, verdict);
    }
    Ok(())
}

fn absolute(run: &mut Run) -> Result<()> {
    let unit = run.unit();
    let ambient = match run.leaf(LeafKind::G, &unit) {
        Ok(h) if h.store.is_some() => h,
        _ => {
            run.item("GU(A)", Verdict::Skipped("the ambient unitary group is not enumerable".into()));
            return Ok(());
        }
    };
    run.size("GU(A)".into(), &ambient);
    for level in run.singles()? {
        let label = level.name.clone();
        let c = CommExpr::leaf(LeafKind::C, &level);
        let v1 = run.compare(&format!("{label}:[G(A),E(I)]"), &br(g(&unit), e(&level)), &e(&level));
        let v2 = run.compare(&format!("{label}:[E(A),C(I)]"), &br(e(&unit), c), &e(&level));
        run.item(label, v1.and(v2));
    }
    Ok(())
}

fn multi(run: &mut Run) -> Result<()> {
    for t in run.tuples(&[3, 4])? {
        let label = names(&t);
        if t.len() < 2 || t.len() > MAX_MULTI_LEAVES {
            run.item(label, Verdict::Skipped(format!("multi-commutators take 2 to {MAX_MULTI_LEAVES} ideals")));
            continue;
        }
        let lhs = CommExpr::left_normed(t.iter().enumerate().map(|(i, l)| if i == 0 { e(l) } else { g(l) }).collect());
        let rhs = CommExpr::left_normed(t.iter().map(e).collect());
        let (lhs, rhs) = (lhs.expect("nonempty"), rhs.expect("nonempty"));
        let v = run.compare(&label, &lhs, &rhs);
        run.item(label, v);
    }
    Ok(())
}

fn bracketing(run: &mut Run) -> Result<()> {
    for t in run.tuples(&[4])? {
        let all_e: Vec<CommExpr> = t.iter().map(e).collect();
        let positions = run.spec.e_positions.clone().unwrap_or_else(|| (0..t.len()).collect());
        for (si, shape) in enumerate_bracketings(t.len()).iter().enumerate() {
            let rhs = shape.fill(&all_e);
            for &j in &positions {
                if j >= t.len() {
                    return Err(Error::Config(format!("leaf position {j} out of range")));
                }
                let leaves: Vec<CommExpr> = t.iter().enumerate().map(|(i, l)| if i == j { e(l) } else { g(l) }).collect();
                let label = format!("{} tree {si} E@{j}", names(&t));
                let v = run.compare(&label, &shape.fill(&leaves), &rhs);
                run.item(label, v);
            }
        }
    }
    Ok(())
}

fn double_reduction(run: &mut Run) -> Result<()> {
    for t in run.tuples(&[3])? {
        let all_e: Vec<CommExpr> = t.iter().map(e).collect();
        for (si, shape) in enumerate_bracketings(t.len()).iter().enumerate() {
            let split = shape.outer_split().expect("at least two leaves");
            if run.spec.k.is_some_and(|k| k + 1 != split) {
                continue;
            }
            let lhs = shape.fill(&all_e);
            let (a, b) = lhs.split().expect("bracket");
            let fr = run.s.fr();
            let rhs = br(e(&a.product_level(fr)), e(&b.product_level(fr)));
            let label = format!("{} tree {si} k={}", names(&t), split - 1);
            let v = run.compare(&label, &lhs, &rhs);
            run.item(label, v);
        }
    }
    Ok(())
}

fn m_conditions(run: &mut Run) -> Result<()> {
    let u = run.singles()?;
    for a in &u {
        for b in &u {
            if a.ideal != b.ideal && a.ideal.is_subset(&b.ideal) {
                let label = format!("M1 {}⊆{}", a.name, b.name);
                let mut v = Verdict::Pass;
                for kind in [LeafKind::E, LeafKind::G] {
                    let part = match (run.leaf(kind, a), run.leaf(kind, b)) {
                        (Ok(x), Ok(y)) => run.includes(&x, &y, || Claim::InSubgroup { expr: CommExpr::leaf(kind, b) }),
                        (Err(w), _) | (_, Err(w)) => w,
                    };
                    v = v.and(part);
                }
                run.item(label, v);
            }
        }
    }
    for a in &u {
        for b in &u {
            let label = format!("M2 {},{}", a.name, b.name);
            let v = run.compare(&label, &br(e(a), g(b)), &br(e(a), e(b)));
            run.item(label, v);
        }
    }
    for [a, b, c] in run.triples()? {
        let label = format!("M3 {}", names(&[a.clone(), b.clone(), c.clone()]));
        let v = run.compare(&label, &br(br(e(&a), g(&b)), g(&c)), &br(br(e(&a), e(&b)), e(&c)));
        run.item(label, v);
    }
    for a in &u {
        for b in &u {
            let label = format!("M4 {},{}", a.name, b.name);
            let p = run.product(a, b);
            let chain = [
                CommExpr::leaf(LeafKind::E, &p),
                br(e(a), e(b)),
                br(e(a), g(b)),
                br(g(a), g(b)),
                CommExpr::leaf(LeafKind::G, &p),
            ];
            let mut v = Verdict::Pass;
            for w in chain.windows(2) {
                let part = match (run.eval(&w[0]), run.eval(&w[1])) {
                    (Ok(x), Ok(y)) => run.includes(&x, &y, || Claim::InSubgroup { expr: w[1].clone() }),
                    (Err(x), _) | (_, Err(x)) => x,
                };
                v = v.and(part);
            }
            run.item(label, v);
        }
    }
    Ok(())
}

fn comgenerator(run: &mut Run) -> Result<()> {
    let fr = run.s.fr();
    let ring = &*fr.ring;
    let n = run.n();
    let budget = run.s.config.budget;
    let ambient = run.s.instance.ambient_generators();
    for [a, b] in run.pairs(false)? {
        let label = names(&[a.clone(), b.clone()]);
        let rhs_expr = br(e(&a), e(&b));
        let rhs = match run.eval(&rhs_expr) {
            Ok(h) => h,
            Err(v) => {
                run.item(label, v);
                continue;
            }
        };
        let lhs = match run.spec.conjugator_length {
            Some(len) => {
                let conj = words_up_to(ring, n, &ambient, len);
                closure_enumerate(ring, n, &theorem_generators(fr, &a.ideal, &b.ideal, n, &conj)?, budget)?
            }
            None => normal_closure(ring, n, &theorem_generators(fr, &a.ideal, &b.ideal, n, &[])?, &ambient, budget)?,
        };
        run.size(format!("{label}:generated"), &lhs);
        run.size(format!("{label}:commutator"), &rhs);
        let v = run
            .includes(&lhs, &rhs, || Claim::InSubgroup { expr: rhs_expr.clone() })
            .and(run.includes(&rhs, &lhs, || Claim::InTheoremClosure { left: a.clone(), right: b.clone(), conjugator_length: run.spec.conjugator_length }));
        run.item(label, v);
    }
    Ok(())
}

/// Distinct products of at most `len` letters.
pub fn words_up_to(ring: &crate::ring::InvolutiveRing, n: usize, letters: &[UMatrix], len: usize) -> Vec<UMatrix> {
    let codec = KeyCodec::new(ring, n).expect("matrix encoding fits");
    let mut seen = crate::engine::store::KeySet::default();
    let id = UMatrix::identity(ring, n);
    seen.insert(codec.encode(&id));
    let mut frontier = vec![id];
    let mut out = Vec::new();
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in letters {
                let x = w.mul(ring, l);
                if seen.insert(codec.encode(&x)) {
                    next.push(x.clone());
                    out.push(x);
                }
            }
        }
        frontier = next;
    }
    out
}

fn probe_assoc(run: &mut Run) -> Result<()> {
    for [a, b, c] in run.triples()? {
        let label = names(&[a.clone(), b.clone(), c.clone()]);
        let left = run.eval(&br(br(e(&a), e(&b)), e(&c)));
        let right = run.eval(&br(e(&a), br(e(&b), e(&c))));
        let v = probe_outcome(run, &label, left, right);
        run.item(label, v);
    }
    Ok(())
}

fn probe_product(run: &mut Run) -> Result<()> {
    for [a, b] in run.pairs(false)? {
        let label = names(&[a.clone(), b.clone()]);
        let p = run.product(&a, &b);
        let left = run.leaf(LeafKind::E, &p);
        let right = run.eval(&br(e(&a), e(&b)));
        let v = probe_outcome(run, &label, left, right);
        run.item(label, v);
    }
    Ok(())
}

// probes record what they find and never fail
fn probe_outcome(
    run: &mut Run,
    label: &str,
    left: std::result::Result<Arc<SubgroupHandle>, Verdict>,
    right: std::result::Result<Arc<SubgroupHandle>, Verdict>,
) -> Verdict {
    match (left, right) {
        (Ok(x), Ok(y)) => match x.same_elements(&y) {
            Some(true) => {
                run.details.push(format!("{label}: coincide ({} elements)", x.size().unwrap_or(0)));
                Verdict::Pass
            }
            Some(false) => {
                run.details.push(format!(
                    "{label}: differ ({} vs {} elements)",
                    x.size().unwrap_or(0),
                    y.size().unwrap_or(0)
                ));
                run.flags.insert(format!("found: {label}"));
                Verdict::Pass
            }
            None => Verdict::Skipped("not enumerated".into()),
        },
        (Err(v), _) | (_, Err(v)) => match v {
            Verdict::Budget(why) => Verdict::Skipped(why),
            v => v,
        },
    }
}
