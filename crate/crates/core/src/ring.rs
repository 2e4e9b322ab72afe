//! Finite rings with involution, symmetries and form parameters.
//!
//! Rings are stored as dense operation tables over element indices
//! `0..order`. Every constructor funnels through [`InvolutiveRing::from_tables`],
//! which scans the tables and rejects anything that is not an associative
//! unital ring with an anti-automorphism of order at most two.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::Subset;

/// Element index.
pub type Elem = u8;

/// Largest supported ring order (subsets are 64-bit masks).
pub const MAX_ORDER: usize = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct InvolutiveRing {
    order: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    conj: Vec<Elem>,
    inv: Vec<Option<Elem>>,
    zero: Elem,
    one: Elem,
    commutative: bool,
    labels: Vec<String>,
}

impl fmt::Debug for InvolutiveRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InvolutiveRing")
            .field("order", &self.order)
            .field("commutative", &self.commutative)
            .field("labels", &self.labels)
            .finish()
    }
}

impl InvolutiveRing {
    /// Builds a ring from raw tables, checking every ring and involution law.
    pub fn from_tables(
        order: usize,
        add: Vec<Elem>,
        mul: Vec<Elem>,
        conj: Vec<Elem>,
        zero: Elem,
        one: Elem,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidRing(msg));
        if !(2..=MAX_ORDER).contains(&order) {
            return bad(format!("order {order} outside 2..={MAX_ORDER}"));
        }
        if add.len() != order * order || mul.len() != order * order || conj.len() != order {
            return bad("table sizes do not match the order".into());
        }
        if add.iter().chain(&mul).chain(&conj).any(|&x| x as usize >= order)
            || zero as usize >= order
            || one as usize >= order
        {
            return bad("table entry out of range".into());
        }
        let at = |t: &[Elem], a: usize, b: usize| t[a * order + b] as usize;

        for a in 0..order {
            if at(&add, a, zero as usize) != a || at(&add, zero as usize, a) != a {
                return bad(format!("{zero} is not an additive identity"));
            }
            if at(&mul, a, one as usize) != a || at(&mul, one as usize, a) != a {
                return bad(format!("{one} is not a multiplicative identity"));
            }
            for b in 0..order {
                if at(&add, a, b) != at(&add, b, a) {
                    return bad(format!("addition not commutative at ({a},{b})"));
                }
            }
        }
        let mut neg = vec![0 as Elem; order];
        for a in 0..order {
            match (0..order).find(|&b| at(&add, a, b) == zero as usize) {
                Some(b) => neg[a] = b as Elem,
                None => return bad(format!("{a} has no additive inverse")),
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if at(&add, at(&add, a, b), c) != at(&add, a, at(&add, b, c)) {
                        return bad(format!("addition not associative at ({a},{b},{c})"));
                    }
                    if at(&mul, at(&mul, a, b), c) != at(&mul, a, at(&mul, b, c)) {
                        return bad(format!("multiplication not associative at ({a},{b},{c})"));
                    }
                    if at(&mul, a, at(&add, b, c)) != at(&add, at(&mul, a, b), at(&mul, a, c))
                        || at(&mul, at(&add, b, c), a)
                            != at(&add, at(&mul, b, a), at(&mul, c, a))
                    {
                        return bad(format!("distributivity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        for a in 0..order {
            if conj[conj[a] as usize] as usize != a {
                return bad(format!("involution does not have order <= 2 at {a}"));
            }
            for b in 0..order {
                let ca = conj[a] as usize;
                let cb = conj[b] as usize;
                if conj[at(&add, a, b)] as usize != at(&add, ca, cb) {
                    return bad(format!("involution not additive at ({a},{b})"));
                }
                if conj[at(&mul, a, b)] as usize != at(&mul, cb, ca) {
                    return bad(format!("involution not an anti-homomorphism at ({a},{b})"));
                }
            }
        }

        let commutative = (0..order).all(|a| (0..order).all(|b| at(&mul, a, b) == at(&mul, b, a)));
        let inv = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| at(&mul, a, b) == one as usize && at(&mul, b, a) == one as usize)
                    .map(|b| b as Elem)
            })
            .collect();
        let labels = match labels {
            Some(l) if l.len() == order => l,
            _ => (0..order).map(|a| a.to_string()).collect(),
        };
        Ok(InvolutiveRing { order, add, mul, neg, conj, inv, zero, one, commutative, labels })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order as u16).map(|a| a as Elem)
    }

    pub fn all(&self) -> Subset {
        Subset::full(self.order)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn conj(&self, a: Elem) -> Elem {
        self.conj[a as usize]
    }

    pub fn inverse(&self, a: Elem) -> Option<Elem> {
        self.inv[a as usize]
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.inv[a as usize].is_some()
    }

    pub fn is_central(&self, a: Elem) -> bool {
        self.elements().all(|b| self.mul(a, b) == self.mul(b, a))
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a as usize]
    }

    /// `a * b * c`, left to right.
    pub fn mul3(&self, a: Elem, b: Elem, c: Elem) -> Elem {
        self.mul(self.mul(a, b), c)
    }

    /// Smallest additive subgroup containing `set`.
    pub fn additive_closure(&self, set: Subset) -> Subset {
        let mut closed = Subset::singleton(self.zero);
        let mut frontier: Vec<Elem> = Vec::new();
        for g in set.iter() {
            if closed.contains(g) {
                continue;
            }
            // adding g to a subgroup H: H + <g> is the union of cosets H + k·g
            frontier.clear();
            frontier.extend(closed.iter());
            let mut multiple = g;
            while !closed.contains(multiple) {
                for &h in &frontier {
                    closed.insert(self.add(h, multiple));
                }
                multiple = self.add(multiple, g);
            }
        }
        closed
    }

    pub fn is_additive_subgroup(&self, set: Subset) -> bool {
        set.contains(self.zero)
            && set.iter().all(|a| set.iter().all(|b| set.contains(self.add(a, b))))
    }

    /// `{ scale * x | x in set }`.
    pub fn scale(&self, scale: Elem, set: Subset) -> Subset {
        set.iter().map(|x| self.mul(scale, x)).collect()
    }
}

/// Involution choices for built-in constructors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvolutionKind {
    #[default]
    Trivial,
    Swap,
    Componentwise,
}

/// Ring description as it appears in scenario files.
///
/// Element indices of built-in rings: `Z/m` uses the residue itself; a
/// quadratic extension `B[x]/(x^2 + c1 x + c0)` maps `b0 + b1 x` to
/// `b0 + |B| * b1`; a product maps `(a, b)` to `a + |A1| * b` (and so on for
/// more factors, first factor fastest).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingSpec {
    Zmod {
        m: u32,
        #[serde(default)]
        involution: InvolutionKind,
    },
    Quadratic {
        #[serde(default)]
        m: Option<u32>,
        #[serde(default)]
        base: Option<Box<RingSpec>>,
        /// Coefficients `[c0, c1, 1]` of the monic quadratic, lowest first.
        poly: Vec<u32>,
        /// Image of `x` under the involution, as `[b0, b1]` meaning `b0 + b1 x`.
        conj_x: Vec<u32>,
    },
    Product {
        factors: Vec<RingSpec>,
        #[serde(default = "default_product_involution")]
        involution: InvolutionKind,
    },
    Tables {
        order: usize,
        add: Vec<Vec<u32>>,
        mul: Vec<Vec<u32>>,
        conj: Vec<u32>,
        #[serde(default)]
        zero: u32,
        #[serde(default = "one_index")]
        one: u32,
    },
}

fn default_product_involution() -> InvolutionKind {
    InvolutionKind::Componentwise
}

fn one_index() -> u32 {
    1
}

/// Builds and validates a ring from its description.
pub fn build_ring(spec: &RingSpec) -> Result<InvolutiveRing> {
    match spec {
        RingSpec::Zmod { m, involution } => {
            if *involution != InvolutionKind::Trivial {
                return Err(Error::InvalidRing("Z/m only supports the trivial involution".into()));
            }
            zmod(*m as usize)
        }
        RingSpec::Quadratic { m, base, poly, conj_x } => {
            let base = match (m, base) {
                (Some(m), None) => zmod(*m as usize)?,
                (None, Some(b)) => build_ring(b)?,
                _ => {
                    return Err(Error::InvalidRing(
                        "quadratic ring needs exactly one of `m` or `base`".into(),
                    ))
                }
            };
            quadratic(&base, poly, conj_x)
        }
        RingSpec::Product { factors, involution } => {
            let rings = factors.iter().map(build_ring).collect::<Result<Vec<_>>>()?;
            product(&rings, *involution)
        }
        RingSpec::Tables { order, add, mul, conj, zero, one } => {
            let flatten = |t: &Vec<Vec<u32>>| -> Result<Vec<Elem>> {
                if t.len() != *order || t.iter().any(|r| r.len() != *order) {
                    return Err(Error::InvalidRing("table is not order x order".into()));
                }
                narrow(t.iter().flatten().copied())
            };
            InvolutiveRing::from_tables(
                *order,
                flatten(add)?,
                flatten(mul)?,
                narrow(conj.iter().copied())?,
                narrow_one(*zero)?,
                narrow_one(*one)?,
                None,
            )
        }
    }
}

fn narrow(it: impl Iterator<Item = u32>) -> Result<Vec<Elem>> {
    it.map(narrow_one).collect()
}

fn narrow_one(x: u32) -> Result<Elem> {
    Elem::try_from(x).map_err(|_| Error::InvalidRing(format!("element index {x} too large")))
}

/// `Z/m` with the trivial involution.
pub fn zmod(m: usize) -> Result<InvolutiveRing> {
    if !(2..=MAX_ORDER).contains(&m) {
        return Err(Error::InvalidRing(format!("Z/{m}: modulus outside 2..={MAX_ORDER}")));
    }
    let mut add = Vec::with_capacity(m * m);
    let mut mul = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            add.push(((a + b) % m) as Elem);
            mul.push(((a * b) % m) as Elem);
        }
    }
    let conj = (0..m).map(|a| a as Elem).collect();
    InvolutiveRing::from_tables(m, add, mul, conj, 0, 1, None)
}

/// `B[x]/(x^2 + c1 x + c0)` with involution extending the one on `B` by
/// `x -> conj_x`.
pub fn quadratic(base: &InvolutiveRing, poly: &[u32], conj_x: &[u32]) -> Result<InvolutiveRing> {
    let b = base.order();
    if poly.len() != 3 || poly[2] as usize != base.one() as usize {
        return Err(Error::InvalidRing("polynomial must be monic quadratic [c0, c1, 1]".into()));
    }
    if conj_x.len() != 2 {
        return Err(Error::InvalidRing("conj_x must be [b0, b1]".into()));
    }
    if b * b > MAX_ORDER {
        return Err(Error::InvalidRing(format!("order {} exceeds {MAX_ORDER}", b * b)));
    }
    let coef = |x: u32| -> Result<Elem> {
        if (x as usize) < b {
            Ok(x as Elem)
        } else {
            Err(Error::InvalidRing(format!("coefficient {x} is not an element of the base")))
        }
    };
    let (c0, c1) = (coef(poly[0])?, coef(poly[1])?);
    let (x0, x1) = (coef(conj_x[0])?, coef(conj_x[1])?);
    let order = b * b;
    let split = |e: usize| ((e % b) as Elem, (e / b) as Elem);
    let join = |lo: Elem, hi: Elem| (lo as usize + b * hi as usize) as Elem;
    // x^2 = -c0 - c1 x
    let sq0 = base.neg(c0);
    let sq1 = base.neg(c1);
    let mut add = Vec::with_capacity(order * order);
    let mut mul = Vec::with_capacity(order * order);
    for p in 0..order {
        for q in 0..order {
            let (a0, a1) = split(p);
            let (b0, b1) = split(q);
            add.push(join(base.add(a0, b0), base.add(a1, b1)));
            let cross = base.mul(a1, b1);
            let lo = base.add(base.mul(a0, b0), base.mul(cross, sq0));
            let hi = base.add(
                base.add(base.mul(a0, b1), base.mul(a1, b0)),
                base.mul(cross, sq1),
            );
            mul.push(join(lo, hi));
        }
    }
    // conj(a0 + a1 x) = conj(a0) + conj(a1) (x0 + x1 x)
    let conj = (0..order)
        .map(|p| {
            let (a0, a1) = split(p);
            let (ca0, ca1) = (base.conj(a0), base.conj(a1));
            join(base.add(ca0, base.mul(ca1, x0)), base.mul(ca1, x1))
        })
        .collect();
    let labels = (0..order)
        .map(|p| {
            let (a0, a1) = split(p);
            match (a0, a1) {
                (_, 0) => base.label(a0).to_string(),
                (0, _) if a1 == base.one() => "x".to_string(),
                (0, _) => format!("{}x", base.label(a1)),
                _ if a1 == base.one() => format!("{}+x", base.label(a0)),
                _ => format!("{}+{}x", base.label(a0), base.label(a1)),
            }
        })
        .collect();
    InvolutiveRing::from_tables(order, add, mul, conj, base.zero(), base.one(), Some(labels))
        .map_err(|e| match e {
            Error::InvalidRing(msg) => Error::InvalidRing(format!(
                "quadratic extension (involution image of x may not extend): {msg}"
            )),
            other => other,
        })
}

/// Direct product, with either componentwise involutions or the swap
/// `(a, b) -> (b, a)` on two equal factors.
pub fn product(factors: &[InvolutiveRing], involution: InvolutionKind) -> Result<InvolutiveRing> {
    if factors.is_empty() {
        return Err(Error::InvalidRing("product of zero factors".into()));
    }
    let order: usize = factors.iter().map(|f| f.order()).product();
    if order > MAX_ORDER {
        return Err(Error::InvalidRing(format!("order {order} exceeds {MAX_ORDER}")));
    }
    let split = |mut e: usize| -> Vec<Elem> {
        factors
            .iter()
            .map(|f| {
                let c = e % f.order();
                e /= f.order();
                c as Elem
            })
            .collect()
    };
    let join = |cs: &[Elem]| -> Elem {
        let mut e = 0usize;
        for (f, &c) in factors.iter().zip(cs).rev() {
            e = e * f.order() + c as usize;
        }
        e as Elem
    };
    let mut add = Vec::with_capacity(order * order);
    let mut mul = Vec::with_capacity(order * order);
    for p in 0..order {
        let a = split(p);
        for q in 0..order {
            let b = split(q);
            let s: Vec<Elem> = factors.iter().enumerate().map(|(k, f)| f.add(a[k], b[k])).collect();
            let m: Vec<Elem> = factors.iter().enumerate().map(|(k, f)| f.mul(a[k], b[k])).collect();
            add.push(join(&s));
            mul.push(join(&m));
        }
    }
    let conj: Vec<Elem> = match involution {
        InvolutionKind::Componentwise | InvolutionKind::Trivial => (0..order)
            .map(|p| {
                let a = split(p);
                let c: Vec<Elem> = factors
                    .iter()
                    .enumerate()
                    .map(|(k, f)| if involution == InvolutionKind::Trivial { a[k] } else { f.conj(a[k]) })
                    .collect();
                join(&c)
            })
            .collect(),
        InvolutionKind::Swap => {
            if factors.len() != 2 || factors[0] != factors[1] {
                return Err(Error::InvalidRing("swap involution needs two equal factors".into()));
            }
            (0..order)
                .map(|p| {
                    let a = split(p);
                    join(&[a[1], a[0]])
                })
                .collect()
        }
    };
    let labels = (0..order)
        .map(|p| {
            let a = split(p);
            let parts: Vec<&str> = factors.iter().zip(&a).map(|(f, &c)| f.label(c)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let zero = join(&factors.iter().map(|f| f.zero()).collect::<Vec<_>>());
    let one = join(&factors.iter().map(|f| f.one()).collect::<Vec<_>>());
    InvolutiveRing::from_tables(order, add, mul, conj, zero, one, Some(labels))
}

/// A symmetry `λ`: central with `λ·conj(λ) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symmetry {
    pub lambda: Elem,
}

impl Symmetry {
    pub fn new(ring: &InvolutiveRing, lambda: Elem) -> Result<Self> {
        if lambda as usize >= ring.order() {
            return Err(Error::InvalidSymmetry(format!("{lambda} is not a ring element")));
        }
        if !ring.is_central(lambda) {
            return Err(Error::InvalidSymmetry(format!("{} is not central", ring.label(lambda))));
        }
        if ring.mul(lambda, ring.conj(lambda)) != ring.one() {
            return Err(Error::InvalidSymmetry(format!(
                "{} * conj({}) != 1",
                ring.label(lambda),
                ring.label(lambda)
            )));
        }
        Ok(Symmetry { lambda })
    }

    /// Every valid symmetry of the ring, in index order.
    pub fn all(ring: &InvolutiveRing) -> Vec<Symmetry> {
        ring.elements().filter_map(|l| Symmetry::new(ring, l).ok()).collect()
    }
}

/// Additive subgroup `Λ` used as form parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormParameter {
    pub members: Subset,
}

/// `(Λ_min, Λ_max)` for the given symmetry.
pub fn lambda_bounds(ring: &InvolutiveRing, sym: Symmetry) -> (Subset, Subset) {
    let l = sym.lambda;
    let min = ring.elements().map(|a| ring.sub(a, ring.mul(l, ring.conj(a)))).collect();
    let max = ring
        .elements()
        .filter(|&a| a == ring.neg(ring.mul(l, ring.conj(a))))
        .collect();
    (min, max)
}

/// Subring generated by all `a·conj(a)`.
pub fn r0_subring(ring: &InvolutiveRing) -> Subset {
    let mut set: Subset = ring.elements().map(|a| ring.mul(a, ring.conj(a))).collect();
    loop {
        let mut next = ring.additive_closure(set);
        for a in next.iter() {
            for b in next.iter() {
                next.insert(ring.mul(a, b));
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

/// One violated law, with the elements exhibiting it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<Elem>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, law: &str, detail: String, elements: Vec<Elem>) {
        self.violations.push(Violation { law: law.to_string(), detail, elements });
    }
}

/// Reports violations of `α·S·conj(α) ⊆ S`.
pub(crate) fn check_conjugation_stable(
    ring: &InvolutiveRing,
    set: Subset,
    name: &str,
    report: &mut ValidationReport,
) {
    for a in ring.elements() {
        for x in set.iter() {
            let y = ring.mul3(a, x, ring.conj(a));
            if !set.contains(y) {
                report.push(
                    "conjugation-stability",
                    format!(
                        "{} * {} * conj({}) = {} not in {name}",
                        ring.label(a),
                        ring.label(x),
                        ring.label(a),
                        ring.label(y)
                    ),
                    vec![a, x, y],
                );
                return;
            }
        }
    }
}

pub(crate) fn check_additive(
    ring: &InvolutiveRing,
    set: Subset,
    name: &str,
    report: &mut ValidationReport,
) {
    if !set.contains(ring.zero()) {
        report.push("additive-subgroup", format!("0 not in {name}"), vec![ring.zero()]);
        return;
    }
    for a in set.iter() {
        for b in set.iter() {
            let s = ring.add(a, b);
            if !set.contains(s) {
                report.push(
                    "additive-subgroup",
                    format!("{} + {} = {} not in {name}", ring.label(a), ring.label(b), ring.label(s)),
                    vec![a, b, s],
                );
                return;
            }
        }
    }
}

/// A ring with involution, a symmetry and a form parameter.
#[derive(Clone, Debug)]
pub struct FormRing {
    pub ring: Arc<InvolutiveRing>,
    pub symmetry: Symmetry,
    pub lambda_param: FormParameter,
}

impl FormRing {
    pub fn new(ring: Arc<InvolutiveRing>, symmetry: Symmetry, lambda_param: FormParameter) -> Self {
        FormRing { ring, symmetry, lambda_param }
    }

    /// Form ring with `Λ = Λ_min` or `Λ = Λ_max`.
    pub fn with_bound(ring: Arc<InvolutiveRing>, lambda: Elem, maximal: bool) -> Result<Self> {
        let sym = Symmetry::new(&ring, lambda)?;
        let (min, max) = lambda_bounds(&ring, sym);
        let members = if maximal { max } else { min };
        Ok(FormRing { ring, symmetry: sym, lambda_param: FormParameter { members } })
    }

    pub fn lambda(&self) -> Elem {
        self.symmetry.lambda
    }

    /// `Λ` as a subset.
    pub fn lam(&self) -> Subset {
        self.lambda_param.members
    }

    /// `λ^e` for `e ∈ {-1, 0, 1}`; `λ^{-1} = conj(λ)`.
    pub fn lambda_pow(&self, e: i32) -> Elem {
        match e {
            0 => self.ring.one(),
            1 => self.lambda(),
            -1 => self.ring.conj(self.lambda()),
            _ => panic!("lambda exponent {e} outside -1..=1"),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate_form_ring(self)
    }
}

/// Checks the form ring laws: bounds, additivity, `αΛᾱ ⊆ Λ`, `R₀Λ ⊆ Λ`.
pub fn validate_form_ring(fr: &FormRing) -> ValidationReport {
    let ring = &fr.ring;
    let mut report = ValidationReport::default();
    if let Err(e) = Symmetry::new(ring, fr.lambda()) {
        report.push("symmetry", e.to_string(), vec![fr.lambda()]);
        return report;
    }
    let lam = fr.lam();
    let (min, max) = lambda_bounds(ring, fr.symmetry);
    if !min.is_subset(lam) {
        let missing = min.difference(lam).to_vec();
        report.push("lower-bound", format!("Λ_min ⊄ Λ, missing {missing:?}"), missing);
    }
    if !lam.is_subset(max) {
        let extra = lam.difference(max).to_vec();
        report.push("upper-bound", format!("Λ ⊄ Λ_max, extra {extra:?}"), extra);
    }
    check_additive(ring, lam, "Λ", &mut report);
    check_conjugation_stable(ring, lam, "Λ", &mut report);
    let r0 = r0_subring(ring);
    'outer: for r in r0.iter() {
        for x in lam.iter() {
            if !lam.contains(ring.mul(r, x)) {
                report.push(
                    "r0-module",
                    format!("{} * {} not in Λ", ring.label(r), ring.label(x)),
                    vec![r, x],
                );
                break 'outer;
            }
        }
    }
    report
}

/// All additive subgroups `S` with `lower ⊆ S ⊆ upper`, sorted by mask.
///
/// `lower` must itself be an additive subgroup. Fails once more than
/// `budget` subgroups have been discovered.
pub fn subgroups_between(
    ring: &InvolutiveRing,
    lower: Subset,
    upper: Subset,
    budget: usize,
) -> Result<Vec<Subset>> {
    let lower = ring.additive_closure(lower);
    if !lower.is_subset(upper) {
        return Ok(Vec::new());
    }
    let mut seen = BTreeSet::new();
    seen.insert(lower);
    let mut queue = vec![lower];
    while let Some(s) = queue.pop() {
        for x in upper.difference(s).iter() {
            let t = ring.additive_closure(s.with(x));
            if t.is_subset(upper) && seen.insert(t) {
                if seen.len() > budget {
                    return Err(Error::BudgetExceeded { budget });
                }
                queue.push(t);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// All form parameters for `(ring, sym)` in canonical order.
pub fn enumerate_form_parameters(
    ring: &InvolutiveRing,
    sym: Symmetry,
    budget: usize,
) -> Result<Vec<FormParameter>> {
    let (min, max) = lambda_bounds(ring, sym);
    let candidates = subgroups_between(ring, min, max, budget)?;
    Ok(candidates
        .into_iter()
        .filter(|&s| {
            ring.elements()
                .all(|a| s.iter().all(|x| s.contains(ring.mul3(a, x, ring.conj(a)))))
        })
        .map(|members| FormParameter { members })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> InvolutiveRing {
        build_ring(&RingSpec::Quadratic { m: Some(2), base: None, poly: vec![1, 1, 1], conj_x: vec![1, 1] })
            .unwrap()
    }

    fn s(v: &[Elem]) -> Subset {
        v.iter().copied().collect()
    }

    #[test]
    fn zmod4_trivial_involution() {
        let r = zmod(4).unwrap();
        assert_eq!(r.order(), 4);
        assert!(r.elements().all(|a| r.conj(a) == a));
        assert!(r.is_commutative());
        assert_eq!(r.inverse(3), Some(3));
        assert_eq!(r.inverse(2), None);
    }

    #[test]
    fn f4_frobenius() {
        let r = f4();
        assert_eq!(r.order(), 4);
        // x = index 2, x + 1 = index 3
        assert_eq!(r.conj(2), 3);
        assert_eq!(r.conj(3), 2);
        // brute force: conj is a ring automorphism (commutative) of order 2
        for a in r.elements() {
            assert_eq!(r.conj(r.conj(a)), a);
            for b in r.elements() {
                assert_eq!(r.conj(r.mul(a, b)), r.mul(r.conj(a), r.conj(b)));
            }
        }
        assert!(r.elements().filter(|&a| a != 0).all(|a| r.is_unit(a)));
    }

    #[test]
    fn bad_conj_x_rejected() {
        // x -> x is fine, x -> 0 is not a ring map
        let err = build_ring(&RingSpec::Quadratic { m: Some(2), base: None, poly: vec![1, 1, 1], conj_x: vec![0, 0] });
        assert!(matches!(err, Err(Error::InvalidRing(_))));
        // x -> 1 does not satisfy x^2 + x + 1 = 0
        let err = build_ring(&RingSpec::Quadratic { m: Some(2), base: None, poly: vec![1, 1, 1], conj_x: vec![1, 0] });
        assert!(err.is_err());
    }

    #[test]
    fn z3_squared_swap() {
        let r = build_ring(&RingSpec::Product {
            factors: vec![
                RingSpec::Zmod { m: 3, involution: InvolutionKind::Trivial },
                RingSpec::Zmod { m: 3, involution: InvolutionKind::Trivial },
            ],
            involution: InvolutionKind::Swap,
        })
        .unwrap();
        assert_eq!(r.order(), 9);
        for a in 0..3u8 {
            for b in 0..3u8 {
                assert_eq!(r.conj(a + 3 * b), b + 3 * a);
            }
        }
    }

    #[test]
    fn non_associative_tables_rejected() {
        // Z/2 addition with a broken multiplication: 1*1 = 0 breaks unitality
        let spec = RingSpec::Tables {
            order: 2,
            add: vec![vec![0, 1], vec![1, 0]],
            mul: vec![vec![0, 0], vec![0, 0]],
            conj: vec![0, 1],
            zero: 0,
            one: 1,
        };
        assert!(build_ring(&spec).is_err());
    }

    #[test]
    fn lambda_bounds_examples() {
        let r = zmod(4).unwrap();
        assert_eq!(lambda_bounds(&r, Symmetry::new(&r, 3).unwrap()), (s(&[0, 2]), s(&[0, 1, 2, 3])));
        assert_eq!(lambda_bounds(&r, Symmetry::new(&r, 1).unwrap()), (s(&[0]), s(&[0, 2])));
        let f2 = zmod(2).unwrap();
        assert_eq!(lambda_bounds(&f2, Symmetry::new(&f2, 1).unwrap()), (s(&[0]), s(&[0, 1])));
    }

    #[test]
    fn symmetry_must_be_norm_one() {
        let r = zmod(4).unwrap();
        assert!(Symmetry::new(&r, 2).is_err());
        assert_eq!(Symmetry::all(&r).iter().map(|s| s.lambda).collect::<Vec<_>>(), vec![1, 3]);
    }

    #[test]
    fn validate_examples() {
        let r = Arc::new(zmod(4).unwrap());
        let fr = FormRing::with_bound(r.clone(), 3, true).unwrap();
        assert!(fr.validate().is_valid());
        let bad = FormRing::new(r.clone(), Symmetry::new(&r, 1).unwrap(), FormParameter { members: s(&[0, 1]) });
        let rep = bad.validate();
        assert!(!rep.is_valid());
        assert!(rep.violations.iter().any(|v| v.law == "upper-bound"));
        for l in Symmetry::all(&r) {
            let fr = FormRing::with_bound(r.clone(), l.lambda, false).unwrap();
            assert!(fr.validate().is_valid());
        }
    }

    #[test]
    fn r0_examples() {
        assert_eq!(r0_subring(&zmod(4).unwrap()), s(&[0, 1, 2, 3]));
        assert_eq!(r0_subring(&f4()), s(&[0, 1]));
        let swap = product(&[zmod(2).unwrap(), zmod(2).unwrap()], InvolutionKind::Swap).unwrap();
        // (0,0) = 0, (1,1) = 3
        assert_eq!(r0_subring(&swap), s(&[0, 3]));
    }

    #[test]
    fn form_parameter_enumeration() {
        let r = zmod(4).unwrap();
        let p3 = enumerate_form_parameters(&r, Symmetry::new(&r, 3).unwrap(), 100).unwrap();
        assert_eq!(p3.iter().map(|p| p.members).collect::<Vec<_>>(), vec![s(&[0, 2]), s(&[0, 1, 2, 3])]);
        let p1 = enumerate_form_parameters(&r, Symmetry::new(&r, 1).unwrap(), 100).unwrap();
        assert_eq!(p1.iter().map(|p| p.members).collect::<Vec<_>>(), vec![s(&[0]), s(&[0, 2])]);
        let f2 = zmod(2).unwrap();
        assert_eq!(enumerate_form_parameters(&f2, Symmetry::new(&f2, 1).unwrap(), 100).unwrap().len(), 2);
    }

    #[test]
    fn enumeration_budget() {
        let r = zmod(2).unwrap();
        let prod = product(&[r.clone(), r.clone(), r.clone(), r], InvolutionKind::Trivial).unwrap();
        let sym = Symmetry::new(&prod, prod.one()).unwrap();
        assert!(matches!(enumerate_form_parameters(&prod, sym, 3), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn additive_closure_z8() {
        let r = zmod(8).unwrap();
        assert_eq!(r.additive_closure(s(&[6])), s(&[0, 2, 4, 6]));
        assert_eq!(r.additive_closure(s(&[4, 6])), s(&[0, 2, 4, 6]));
        assert_eq!(r.additive_closure(s(&[3])), Subset::full(8));
    }
}
