//! Groupoid actions, torsors and bitorsors, and the functors relating them
//! to pregroupoids.
//!
//! A left action of `G` on `alpha: X -> A` (with `G0 = A`) is defined at
//! `(g, x)` when `alpha(x) = d1(g)` and lands over `d0(g)`: it is
//! precomposition. A right action of `H` on `beta: X -> B` is defined at
//! `(x, h)` when `beta(x) = d0(h)` and lands over `d1(h)`: postcomposition.

use crate::envelope::{Envelope, EnvelopeOptions};
use crate::error::{StructureError, TorsorError};
use crate::groupoid::{FiniteGroupoid, GroupoidFunctor};
use crate::pregroupoid::{Pregroupoid, PregroupoidMorphism};
use crate::report::{ValidationReport, Violation};
use crate::set::{check_map, FiniteSet, Table2};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftAction {
    group: FiniteGroupoid,
    carrier: FiniteSet,
    alpha: Vec<usize>,
    act: Table2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightAction {
    group: FiniteGroupoid,
    carrier: FiniteSet,
    beta: Vec<usize>,
    act: Table2,
}

impl LeftAction {
    pub fn new(
        group: FiniteGroupoid,
        carrier: FiniteSet,
        alpha: Vec<usize>,
        act: Table2,
    ) -> Result<Self, StructureError> {
        if carrier.is_empty() {
            return Err(StructureError::Empty("action carrier"));
        }
        check_map("alpha", &alpha, carrier.len(), group.objects().len())?;
        if act.rows() != group.arrow_count() || act.cols() != carrier.len() {
            return Err(StructureError::LengthMismatch {
                map: "left action".into(),
                expected: group.arrow_count() * carrier.len(),
                found: act.rows() * act.cols(),
            });
        }
        act.check_values("left action", carrier.len())?;
        Ok(LeftAction {
            group,
            carrier,
            alpha,
            act,
        })
    }

    /// Tabulates `act` where `alpha(x) = d1(g)`.
    pub fn from_fn(
        group: FiniteGroupoid,
        carrier: FiniteSet,
        alpha: Vec<usize>,
        mut act: impl FnMut(usize, usize) -> Option<usize>,
    ) -> Result<Self, StructureError> {
        check_map("alpha", &alpha, carrier.len(), group.objects().len())?;
        let mut table = Table2::new(group.arrow_count(), carrier.len());
        for g in group.arrows().indices() {
            for x in carrier.indices() {
                if alpha[x] == group.d1(g) {
                    table.set(g, x, act(g, x));
                }
            }
        }
        LeftAction::new(group, carrier, alpha, table)
    }

    pub fn group(&self) -> &FiniteGroupoid {
        &self.group
    }

    pub fn carrier(&self) -> &FiniteSet {
        &self.carrier
    }

    pub fn alpha(&self, x: usize) -> usize {
        self.alpha[x]
    }

    pub fn alpha_map(&self) -> &[usize] {
        &self.alpha
    }

    pub fn act(&self, g: usize, x: usize) -> Option<usize> {
        self.act.get(g, x)
    }

    pub fn table(&self) -> &Table2 {
        &self.act
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        self.check_into(&mut r);
        r
    }

    pub fn check_into(&self, r: &mut ValidationReport) {
        let g = &self.group;
        let mut inner = ValidationReport::with_cap(r.cap());
        g.check_into(&mut inner);
        r.absorb("group", inner);
        let lx = |x: usize| self.carrier.label(x).to_string();
        let lg = |f: usize| g.arrows().label(f).to_string();
        for f in g.arrows().indices() {
            for x in self.carrier.indices() {
                let expected = self.alpha[x] == g.d1(f);
                match self.act(f, x) {
                    Some(_) if !expected => r.push("action-domain", vec![lg(f), lx(x)]),
                    None if expected => r.push("action-domain", vec![lg(f), lx(x)]),
                    Some(y) if self.alpha[y] != g.d0(f) => r.push("action-bookkeeping", vec![lg(f), lx(x)]),
                    _ => {}
                }
            }
        }
        for x in self.carrier.indices() {
            if self.act(g.identity(self.alpha[x]), x) != Some(x) {
                r.push("action-unit", vec![lx(x)]);
            }
        }
        for (f, h, fh) in g.composition_table().defined() {
            for x in self.carrier.indices() {
                if self.alpha[x] != g.d1(h) {
                    continue;
                }
                let left = self.act(fh, x);
                let right = self.act(h, x).and_then(|hx| self.act(f, hx));
                if left != right {
                    r.push("action-associativity", vec![lg(f), lg(h), lx(x)]);
                }
            }
        }
    }

    /// The unique `g` with `g·x = y`, if the action is free there.
    pub fn fraction(&self, y: usize, x: usize) -> Option<usize> {
        let mut found = None;
        for g in self.group.arrows().indices() {
            if self.act(g, x) == Some(y) {
                if found.is_some() {
                    return None;
                }
                found = Some(g);
            }
        }
        found
    }

    fn freeness_witness(&self) -> Option<Violation> {
        for x in self.carrier.indices() {
            let mut seen = vec![None; self.carrier.len()];
            for g in self.group.arrows().indices() {
                if let Some(y) = self.act(g, x) {
                    if let Some(prev) = seen[y] {
                        return Some(Violation::new(
                            "free",
                            vec![
                                self.group.arrows().label(prev).to_string(),
                                self.group.arrows().label(g).to_string(),
                                self.carrier.label(x).to_string(),
                            ],
                        ));
                    }
                    seen[y] = Some(g);
                }
            }
        }
        None
    }

    /// The orbit set, each orbit labelled by its least member, and the
    /// projection onto it.
    pub fn orbit_quotient(&self) -> Result<(FiniteSet, Vec<usize>), TorsorError> {
        if let Some(v) = self.freeness_witness() {
            return Err(TorsorError::NotFree(v));
        }
        Ok(orbits(&self.carrier, |x, y| {
            self.group.arrows().indices().any(|g| self.act(g, x) == Some(y))
        }))
    }
}

impl RightAction {
    pub fn new(
        group: FiniteGroupoid,
        carrier: FiniteSet,
        beta: Vec<usize>,
        act: Table2,
    ) -> Result<Self, StructureError> {
        if carrier.is_empty() {
            return Err(StructureError::Empty("action carrier"));
        }
        check_map("beta", &beta, carrier.len(), group.objects().len())?;
        if act.rows() != carrier.len() || act.cols() != group.arrow_count() {
            return Err(StructureError::LengthMismatch {
                map: "right action".into(),
                expected: group.arrow_count() * carrier.len(),
                found: act.rows() * act.cols(),
            });
        }
        act.check_values("right action", carrier.len())?;
        Ok(RightAction {
            group,
            carrier,
            beta,
            act,
        })
    }

    /// Tabulates `act` where `beta(x) = d0(h)`.
    pub fn from_fn(
        group: FiniteGroupoid,
        carrier: FiniteSet,
        beta: Vec<usize>,
        mut act: impl FnMut(usize, usize) -> Option<usize>,
    ) -> Result<Self, StructureError> {
        check_map("beta", &beta, carrier.len(), group.objects().len())?;
        let mut table = Table2::new(carrier.len(), group.arrow_count());
        for x in carrier.indices() {
            for h in group.arrows().indices() {
                if beta[x] == group.d0(h) {
                    table.set(x, h, act(x, h));
                }
            }
        }
        RightAction::new(group, carrier, beta, table)
    }

    pub fn group(&self) -> &FiniteGroupoid {
        &self.group
    }

    pub fn carrier(&self) -> &FiniteSet {
        &self.carrier
    }

    pub fn beta(&self, x: usize) -> usize {
        self.beta[x]
    }

    pub fn beta_map(&self) -> &[usize] {
        &self.beta
    }

    pub fn act(&self, x: usize, h: usize) -> Option<usize> {
        self.act.get(x, h)
    }

    pub fn table(&self) -> &Table2 {
        &self.act
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        self.check_into(&mut r);
        r
    }

    pub fn check_into(&self, r: &mut ValidationReport) {
        let g = &self.group;
        let mut inner = ValidationReport::with_cap(r.cap());
        g.check_into(&mut inner);
        r.absorb("group", inner);
        let lx = |x: usize| self.carrier.label(x).to_string();
        let lg = |f: usize| g.arrows().label(f).to_string();
        for x in self.carrier.indices() {
            for h in g.arrows().indices() {
                let expected = self.beta[x] == g.d0(h);
                match self.act(x, h) {
                    Some(_) if !expected => r.push("action-domain", vec![lx(x), lg(h)]),
                    None if expected => r.push("action-domain", vec![lx(x), lg(h)]),
                    Some(y) if self.beta[y] != g.d1(h) => r.push("action-bookkeeping", vec![lx(x), lg(h)]),
                    _ => {}
                }
            }
        }
        for x in self.carrier.indices() {
            if self.act(x, g.identity(self.beta[x])) != Some(x) {
                r.push("action-unit", vec![lx(x)]);
            }
        }
        for (h, k, hk) in g.composition_table().defined() {
            for x in self.carrier.indices() {
                if self.beta[x] != g.d0(h) {
                    continue;
                }
                let left = self.act(x, hk);
                let right = self.act(x, h).and_then(|xh| self.act(xh, k));
                if left != right {
                    r.push("action-associativity", vec![lx(x), lg(h), lg(k)]);
                }
            }
        }
    }

    /// The unique `h` with `x·h = z`, if the action is free there.
    pub fn fraction(&self, x: usize, z: usize) -> Option<usize> {
        let mut found = None;
        for h in self.group.arrows().indices() {
            if self.act(x, h) == Some(z) {
                if found.is_some() {
                    return None;
                }
                found = Some(h);
            }
        }
        found
    }

    fn freeness_witness(&self) -> Option<Violation> {
        for x in self.carrier.indices() {
            let mut seen = vec![None; self.carrier.len()];
            for h in self.group.arrows().indices() {
                if let Some(y) = self.act(x, h) {
                    if let Some(prev) = seen[y] {
                        return Some(Violation::new(
                            "free",
                            vec![
                                self.carrier.label(x).to_string(),
                                self.group.arrows().label(prev).to_string(),
                                self.group.arrows().label(h).to_string(),
                            ],
                        ));
                    }
                    seen[y] = Some(h);
                }
            }
        }
        None
    }

    pub fn orbit_quotient(&self) -> Result<(FiniteSet, Vec<usize>), TorsorError> {
        if let Some(v) = self.freeness_witness() {
            return Err(TorsorError::NotFree(v));
        }
        Ok(orbits(&self.carrier, |x, z| {
            self.group.arrows().indices().any(|h| self.act(x, h) == Some(z))
        }))
    }
}

/// Partition by a relation assumed to be an equivalence; blocks are ordered
/// and labelled by their least member.
fn orbits(carrier: &FiniteSet, related: impl Fn(usize, usize) -> bool) -> (FiniteSet, Vec<usize>) {
    let mut block = vec![usize::MAX; carrier.len()];
    let mut labels = Vec::new();
    for x in carrier.indices() {
        if block[x] != usize::MAX {
            continue;
        }
        let id = labels.len();
        labels.push(carrier.label(x).to_string());
        for y in x..carrier.len() {
            if block[y] == usize::MAX && related(x, y) {
                block[y] = id;
            }
        }
    }
    (FiniteSet::new(labels).expect("carrier labels are distinct"), block)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftTorsor {
    action: LeftAction,
    b: FiniteSet,
    beta: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightTorsor {
    action: RightAction,
    a: FiniteSet,
    alpha: Vec<usize>,
}

impl LeftTorsor {
    pub fn new(action: LeftAction, b: FiniteSet, beta: Vec<usize>) -> Result<Self, StructureError> {
        check_map("beta", &beta, action.carrier.len(), b.len())?;
        Ok(LeftTorsor { action, b, beta })
    }

    /// The torsor whose `B` is the orbit quotient of `action`.
    pub fn from_action(action: LeftAction) -> Result<Self, TorsorError> {
        let (b, beta) = action.orbit_quotient()?;
        Ok(LeftTorsor::new(action, b, beta)?)
    }

    pub fn action(&self) -> &LeftAction {
        &self.action
    }

    pub fn group(&self) -> &FiniteGroupoid {
        &self.action.group
    }

    pub fn carrier(&self) -> &FiniteSet {
        &self.action.carrier
    }

    pub fn a(&self) -> &FiniteSet {
        self.action.group.objects()
    }

    pub fn b(&self) -> &FiniteSet {
        &self.b
    }

    pub fn alpha(&self, x: usize) -> usize {
        self.action.alpha[x]
    }

    pub fn beta(&self, x: usize) -> usize {
        self.beta[x]
    }

    pub fn beta_map(&self) -> &[usize] {
        &self.beta
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        self.check_into(&mut r);
        r
    }

    pub fn check_into(&self, r: &mut ValidationReport) {
        let before = r.total();
        self.action.check_into(r);
        let action_clean = r.total() == before;
        let lx = |x: usize| self.carrier().label(x).to_string();
        check_surjective(r, "alpha-surjective", &self.action.alpha, self.a());
        check_surjective(r, "beta-surjective", &self.beta, &self.b);
        if let Some(v) = self.action.freeness_witness() {
            r.push_violation(v);
        }
        if !action_clean {
            return;
        }
        let g = self.group();
        for x in self.carrier().indices() {
            for y in self.carrier().indices() {
                let related = g.arrows().indices().any(|f| self.action.act(f, x) == Some(y));
                if related != (self.beta[x] == self.beta[y]) {
                    r.push("orbit-quotient", vec![lx(x), lx(y)]);
                }
            }
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_clean()
    }

    /// The same torsor with its objects and orbits renamed.
    pub fn relabel_ends(&self, a: FiniteSet, b: FiniteSet) -> Result<LeftTorsor, StructureError> {
        if b.len() != self.b.len() {
            return Err(StructureError::Mismatch("relabelling changes the size of B".into()));
        }
        let mut t = self.clone();
        t.action.group = t.action.group.relabel_objects(a)?;
        t.b = b;
        Ok(t)
    }
}

impl RightTorsor {
    pub fn new(action: RightAction, a: FiniteSet, alpha: Vec<usize>) -> Result<Self, StructureError> {
        check_map("alpha", &alpha, action.carrier.len(), a.len())?;
        Ok(RightTorsor { action, a, alpha })
    }

    pub fn from_action(action: RightAction) -> Result<Self, TorsorError> {
        let (a, alpha) = action.orbit_quotient()?;
        Ok(RightTorsor::new(action, a, alpha)?)
    }

    pub fn action(&self) -> &RightAction {
        &self.action
    }

    pub fn group(&self) -> &FiniteGroupoid {
        &self.action.group
    }

    pub fn carrier(&self) -> &FiniteSet {
        &self.action.carrier
    }

    pub fn a(&self) -> &FiniteSet {
        &self.a
    }

    pub fn b(&self) -> &FiniteSet {
        self.action.group.objects()
    }

    pub fn alpha(&self, x: usize) -> usize {
        self.alpha[x]
    }

    pub fn alpha_map(&self) -> &[usize] {
        &self.alpha
    }

    pub fn beta(&self, x: usize) -> usize {
        self.action.beta[x]
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        self.check_into(&mut r);
        r
    }

    pub fn check_into(&self, r: &mut ValidationReport) {
        let before = r.total();
        self.action.check_into(r);
        let action_clean = r.total() == before;
        let lx = |x: usize| self.carrier().label(x).to_string();
        check_surjective(r, "beta-surjective", &self.action.beta, self.b());
        check_surjective(r, "alpha-surjective", &self.alpha, &self.a);
        if let Some(v) = self.action.freeness_witness() {
            r.push_violation(v);
        }
        if !action_clean {
            return;
        }
        let g = self.group();
        for x in self.carrier().indices() {
            for z in self.carrier().indices() {
                let related = g.arrows().indices().any(|h| self.action.act(x, h) == Some(z));
                if related != (self.alpha[x] == self.alpha[z]) {
                    r.push("orbit-quotient", vec![lx(x), lx(z)]);
                }
            }
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_clean()
    }

    pub fn relabel_ends(&self, a: FiniteSet, b: FiniteSet) -> Result<RightTorsor, StructureError> {
        if a.len() != self.a.len() {
            return Err(StructureError::Mismatch("relabelling changes the size of A".into()));
        }
        let mut t = self.clone();
        t.action.group = t.action.group.relabel_objects(b)?;
        t.a = a;
        Ok(t)
    }
}

fn check_surjective(r: &mut ValidationReport, clause: &str, map: &[usize], codomain: &FiniteSet) {
    let mut hit = vec![false; codomain.len()];
    for &v in map {
        hit[v] = true;
    }
    for (i, h) in hit.into_iter().enumerate() {
        if !h {
            r.push(clause, vec![codomain.label(i).to_string()]);
        }
    }
}

/// Commuting left and right torsor structures on one span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitorsor {
    left: LeftTorsor,
    right: RightTorsor,
}

impl Bitorsor {
    /// Pairs the two structures after checking that they share the carrier
    /// and that each orbit map is the other side's structural map.
    pub fn new(left: LeftTorsor, right: RightTorsor) -> Result<Self, StructureError> {
        let mismatch = |what: &str| Err(StructureError::Mismatch(format!("bitorsor sides disagree on {what}")));
        if left.carrier() != right.carrier() {
            return mismatch("the carrier");
        }
        if left.a() != right.a() || left.action.alpha != right.alpha {
            return mismatch("alpha");
        }
        if left.b() != right.b() || left.beta != right.action.beta {
            return mismatch("beta");
        }
        Ok(Bitorsor { left, right })
    }

    pub fn left(&self) -> &LeftTorsor {
        &self.left
    }

    pub fn right(&self) -> &RightTorsor {
        &self.right
    }

    pub fn carrier(&self) -> &FiniteSet {
        self.left.carrier()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        self.check_into(&mut r);
        r
    }

    pub fn check_into(&self, r: &mut ValidationReport) {
        let mut left = ValidationReport::with_cap(r.cap());
        self.left.check_into(&mut left);
        let left_clean = left.is_clean();
        r.absorb("left", left);
        let mut right = ValidationReport::with_cap(r.cap());
        self.right.check_into(&mut right);
        let right_clean = right.is_clean();
        r.absorb("right", right);
        if !(left_clean && right_clean) {
            return;
        }
        let (l, rt) = (&self.left.action, &self.right.action);
        let lx = |x: usize| self.carrier().label(x).to_string();
        for g in l.group.arrows().indices() {
            for x in self.carrier().indices() {
                let Some(gx) = l.act(g, x) else { continue };
                for h in rt.group.arrows().indices() {
                    let Some(xh) = rt.act(x, h) else { continue };
                    if rt.act(gx, h) != l.act(g, xh) {
                        r.push(
                            "commute",
                            vec![
                                l.group.arrows().label(g).to_string(),
                                lx(x),
                                rt.group.arrows().label(h).to_string(),
                            ],
                        );
                    }
                }
            }
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_clean()
    }
}

pub fn forget_right(bi: &Bitorsor) -> LeftTorsor {
    bi.left.clone()
}

pub fn forget_left(bi: &Bitorsor) -> RightTorsor {
    bi.right.clone()
}

fn require_valid(report: ValidationReport) -> Result<(), TorsorError> {
    if report.is_clean() {
        Ok(())
    } else {
        Err(TorsorError::Invalid(report))
    }
}

/// The pregroupoid `yx^-1z := g·z`, where `g` is the unique arrow with
/// `g·x = y`.
pub fn c_left(t: &LeftTorsor) -> Result<Pregroupoid, TorsorError> {
    require_valid(t.validate())?;
    let l = &t.action;
    Ok(Pregroupoid::from_fn(
        t.carrier().clone(),
        t.a().clone(),
        t.b.clone(),
        l.alpha.clone(),
        t.beta.clone(),
        |y, x, z| l.act(l.fraction(y, x)?, z),
    )?)
}

/// The pregroupoid `yx^-1z := y·h`, where `h` is the unique arrow with
/// `x·h = z`.
pub fn c_right(t: &RightTorsor) -> Result<Pregroupoid, TorsorError> {
    require_valid(t.validate())?;
    let r = &t.action;
    Ok(Pregroupoid::from_fn(
        t.carrier().clone(),
        t.a.clone(),
        t.b().clone(),
        t.alpha.clone(),
        r.beta.clone(),
        |y, x, z| r.act(y, r.fraction(x, z)?),
    )?)
}

/// `K(A,A)` acting on `K(A,B)` by precomposition and `K(B,B)` by
/// postcomposition.
pub fn bitorsor_from_groupoid(k: &FiniteGroupoid, a_objs: &[usize], b_objs: &[usize]) -> Result<Bitorsor, TorsorError> {
    let p = k.underlying_pregroupoid(a_objs, b_objs)?;
    let hom = k.hom_subset(a_objs, b_objs);
    let (ga, ia) = k.full_subgroupoid(a_objs)?;
    let (gb, ib) = k.full_subgroupoid(b_objs)?;
    let mut position = vec![None; k.arrow_count()];
    for (i, &f) in hom.arrows.iter().enumerate() {
        position[f] = Some(i);
    }
    let carrier = p.carrier().clone();
    let left = LeftAction::from_fn(ga, carrier.clone(), p.alpha_map().to_vec(), |g, x| {
        position[k.compose(ia.map_arrow(g), hom.arrows[x])?]
    })?;
    let right = RightAction::from_fn(gb, carrier, p.beta_map().to_vec(), |x, h| {
        position[k.compose(hom.arrows[x], ib.map_arrow(h))?]
    })?;
    let left = LeftTorsor::new(left, p.b().clone(), p.beta_map().to_vec())?;
    let right = RightTorsor::new(right, p.a().clone(), p.alpha_map().to_vec())?;
    Ok(Bitorsor::new(left, right)?)
}

/// The bitorsor `X+(A,A) ⟳ X ⟲ X+(B,B)` carried by the AB block of an
/// envelope, with objects named by the base's own `A` and `B` labels.
pub fn envelope_bitorsor(e: &Envelope) -> Result<Bitorsor, TorsorError> {
    let bi = bitorsor_from_groupoid(e.groupoid(), &e.a_objects(), &e.b_objects())?;
    let (a, b) = (e.base().a().clone(), e.base().b().clone());
    let left = bi.left.relabel_ends(a.clone(), b.clone())?;
    let right = bi.right.relabel_ends(a, b)?;
    Ok(Bitorsor::new(left, right)?)
}

pub fn env_to_bitorsor(p: &Pregroupoid) -> Result<Bitorsor, TorsorError> {
    env_to_bitorsor_with(p, EnvelopeOptions::default())
}

pub fn env_to_bitorsor_with(p: &Pregroupoid, options: EnvelopeOptions) -> Result<Bitorsor, TorsorError> {
    envelope_bitorsor(&Envelope::build(p, options)?)
}

/// `c_left` and `c_right` of the two sides agree entry for entry.
pub fn square_commutes(bi: &Bitorsor) -> Result<(), TorsorError> {
    let l = c_left(&bi.left)?;
    let r = c_right(&bi.right)?;
    match l.first_difference(&r) {
        None => Ok(()),
        Some(v) => Err(TorsorError::Mismatch(v)),
    }
}

/// `c_left(forget_right(env_to_bitorsor(P)))` is `P` itself, label for label.
pub fn cyclic_identity(p: &Pregroupoid) -> Result<(), TorsorError> {
    let back = c_left(&forget_right(&env_to_bitorsor(p)?))?;
    match back.first_difference(p) {
        None => Ok(()),
        Some(v) => Err(TorsorError::Mismatch(v)),
    }
}

/// An isomorphism of acting groupoids that, together with `carrier_map`,
/// intertwines two actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorIsomorphism {
    pub forward: GroupoidFunctor,
    pub inverse: GroupoidFunctor,
    pub carrier_map: Vec<usize>,
}

fn match_labels(from: &FiniteSet, to: &FiniteSet, what: &str) -> Result<Vec<usize>, TorsorError> {
    if from.len() != to.len() {
        return Err(TorsorError::Mismatch(Violation::new(
            format!("{what}-size"),
            vec![from.len().to_string(), to.len().to_string()],
        )));
    }
    Ok(from
        .labels()
        .iter()
        .map(|l| to.resolve(l, what))
        .collect::<Result<_, _>>()?)
}

fn finish_iso(
    source: &FiniteGroupoid,
    target: &FiniteGroupoid,
    object_map: Vec<usize>,
    arrow_map: Vec<usize>,
    carrier_map: Vec<usize>,
) -> Result<TorsorIsomorphism, TorsorError> {
    let forward = GroupoidFunctor::new(source.clone(), target.clone(), object_map, arrow_map)?;
    if let Some(v) = forward.validate().first() {
        return Err(TorsorError::Mismatch(v.clone()));
    }
    let inverse = forward
        .inverse()
        .ok_or_else(|| TorsorError::Mismatch(Violation::new("not-bijective", vec![])))?;
    Ok(TorsorIsomorphism {
        forward,
        inverse,
        carrier_map,
    })
}

/// The isomorphism `s ≅ t` of left torsors on the same labelled carrier
/// that is the identity on labels: `g` goes to the unique `g'` with
/// `g'·x = g·x`. Checked for every admissible `x`, so the result does not
/// depend on a choice.
pub fn left_torsor_iso(s: &LeftTorsor, t: &LeftTorsor) -> Result<TorsorIsomorphism, TorsorError> {
    require_valid(s.validate())?;
    require_valid(t.validate())?;
    let cm = match_labels(s.carrier(), t.carrier(), "carrier")?;
    let om = match_labels(s.a(), t.a(), "objects")?;
    let bm = match_labels(s.b(), t.b(), "orbits")?;
    for x in s.carrier().indices() {
        if t.alpha(cm[x]) != om[s.alpha(x)] || t.beta(cm[x]) != bm[s.beta(x)] {
            return Err(TorsorError::Mismatch(Violation::new(
                "structural-map",
                vec![s.carrier().label(x).to_string()],
            )));
        }
    }
    let (sg, sa, ta) = (s.group(), &s.action, &t.action);
    let mut arrow_map = Vec::with_capacity(sg.arrow_count());
    for g in sg.arrows().indices() {
        let mut image = None;
        for x in s.carrier().indices().filter(|&x| s.alpha(x) == sg.d1(g)) {
            let y = sa.act(g, x).expect("valid action");
            let candidate = ta.fraction(cm[y], cm[x]);
            match (image, candidate) {
                (_, None) => {
                    return Err(TorsorError::Mismatch(Violation::new(
                        "no-fraction",
                        vec![sg.arrows().label(g).to_string(), s.carrier().label(x).to_string()],
                    )))
                }
                (None, Some(c)) => image = Some(c),
                (Some(prev), Some(c)) if prev != c => {
                    return Err(TorsorError::Mismatch(Violation::new(
                        "representative-dependence",
                        vec![sg.arrows().label(g).to_string(), s.carrier().label(x).to_string()],
                    )))
                }
                _ => {}
            }
        }
        arrow_map.push(image.expect("alpha is surjective"));
    }
    finish_iso(sg, t.group(), om, arrow_map, cm)
}

/// Mirror of [`left_torsor_iso`]: `h` goes to the unique `h'` with
/// `x·h' = x·h`.
pub fn right_torsor_iso(s: &RightTorsor, t: &RightTorsor) -> Result<TorsorIsomorphism, TorsorError> {
    require_valid(s.validate())?;
    require_valid(t.validate())?;
    let cm = match_labels(s.carrier(), t.carrier(), "carrier")?;
    let om = match_labels(s.b(), t.b(), "objects")?;
    let am = match_labels(s.a(), t.a(), "orbits")?;
    for x in s.carrier().indices() {
        if t.beta(cm[x]) != om[s.beta(x)] || t.alpha(cm[x]) != am[s.alpha(x)] {
            return Err(TorsorError::Mismatch(Violation::new(
                "structural-map",
                vec![s.carrier().label(x).to_string()],
            )));
        }
    }
    let (sg, sa, ta) = (s.group(), &s.action, &t.action);
    let mut arrow_map = Vec::with_capacity(sg.arrow_count());
    for h in sg.arrows().indices() {
        let mut image = None;
        for x in s.carrier().indices().filter(|&x| s.beta(x) == sg.d0(h)) {
            let z = sa.act(x, h).expect("valid action");
            let candidate = ta.fraction(cm[x], cm[z]);
            match (image, candidate) {
                (_, None) => {
                    return Err(TorsorError::Mismatch(Violation::new(
                        "no-fraction",
                        vec![s.carrier().label(x).to_string(), sg.arrows().label(h).to_string()],
                    )))
                }
                (None, Some(c)) => image = Some(c),
                (Some(prev), Some(c)) if prev != c => {
                    return Err(TorsorError::Mismatch(Violation::new(
                        "representative-dependence",
                        vec![s.carrier().label(x).to_string(), sg.arrows().label(h).to_string()],
                    )))
                }
                _ => {}
            }
        }
        arrow_map.push(image.expect("beta is surjective"));
    }
    finish_iso(sg, t.group(), om, arrow_map, cm)
}

/// `G ≅ X+(A,A)` by `g ↦ yx^-1` with `y = g·x`, where `X+` is the envelope of
/// `c_left(t)`.
pub fn roundtrip_iso_left(t: &LeftTorsor) -> Result<TorsorIsomorphism, TorsorError> {
    let back = forget_right(&env_to_bitorsor(&c_left(t)?)?);
    left_torsor_iso(t, &back)
}

/// `H ≅ X+(B,B)` by `h ↦ x^-1z` with `z = x·h`.
pub fn roundtrip_iso_right(t: &RightTorsor) -> Result<TorsorIsomorphism, TorsorError> {
    let back = forget_left(&env_to_bitorsor(&c_right(t)?)?);
    right_torsor_iso(t, &back)
}

/// The right torsor under the gauge groupoid `X+(B,B)`.
pub fn ad(t: &LeftTorsor) -> Result<RightTorsor, TorsorError> {
    Ok(forget_left(&env_to_bitorsor(&c_left(t)?)?))
}

/// Mirror of [`ad`].
pub fn ad_right(t: &RightTorsor) -> Result<LeftTorsor, TorsorError> {
    Ok(forget_right(&env_to_bitorsor(&c_right(t)?)?))
}

/// A functor between acting groupoids with an equivariant map of carriers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorMorphism {
    source: LeftTorsor,
    target: LeftTorsor,
    functor: GroupoidFunctor,
    carrier_map: Vec<usize>,
}

impl TorsorMorphism {
    pub fn new(
        source: LeftTorsor,
        target: LeftTorsor,
        functor: GroupoidFunctor,
        carrier_map: Vec<usize>,
    ) -> Result<Self, StructureError> {
        if functor.source() != source.group() || functor.target() != target.group() {
            return Err(StructureError::Mismatch(
                "functor does not connect the acting groupoids".into(),
            ));
        }
        check_map(
            "carrier map",
            &carrier_map,
            source.carrier().len(),
            target.carrier().len(),
        )?;
        Ok(TorsorMorphism {
            source,
            target,
            functor,
            carrier_map,
        })
    }

    pub fn functor(&self) -> &GroupoidFunctor {
        &self.functor
    }

    pub fn carrier_map(&self) -> &[usize] {
        &self.carrier_map
    }

    /// The map of orbit sets, if `beta` factors through it.
    pub fn orbit_map(&self) -> Option<Vec<usize>> {
        let mut map = vec![None; self.source.b().len()];
        for x in self.source.carrier().indices() {
            let image = self.target.beta(self.carrier_map[x]);
            match map[self.source.beta(x)] {
                None => map[self.source.beta(x)] = Some(image),
                Some(prev) if prev != image => return None,
                _ => {}
            }
        }
        map.into_iter().collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let mut inner = ValidationReport::default();
        self.functor.check_into(&mut inner);
        r.absorb("functor", inner);
        let (s, t, f) = (&self.source, &self.target, &self.functor);
        let lx = |x: usize| s.carrier().label(x).to_string();
        for x in s.carrier().indices() {
            if t.alpha(self.carrier_map[x]) != f.map_object(s.alpha(x)) {
                r.push("morphism-alpha", vec![lx(x)]);
            }
        }
        for g in s.group().arrows().indices() {
            for x in s.carrier().indices() {
                let Some(gx) = s.action.act(g, x) else { continue };
                if t.action.act(f.map_arrow(g), self.carrier_map[x]) != Some(self.carrier_map[gx]) {
                    r.push("morphism-action", vec![s.group().arrows().label(g).to_string(), lx(x)]);
                }
            }
        }
        if self.orbit_map().is_none() {
            r.push("morphism-orbits", vec![]);
        }
        r
    }

    /// The induced morphism `c_left(source) -> c_left(target)`.
    pub fn c_left_morphism(&self) -> Result<PregroupoidMorphism, TorsorError> {
        require_valid(self.validate())?;
        Ok(PregroupoidMorphism::new(
            c_left(&self.source)?,
            c_left(&self.target)?,
            self.carrier_map.clone(),
            self.functor.object_map().to_vec(),
            self.orbit_map().expect("validated"),
        )?)
    }
}

/// A pair of functors with one map of carriers, equivariant for both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitorsorMorphism {
    pub left: TorsorMorphism,
    pub right_functor: GroupoidFunctor,
    source: Bitorsor,
    target: Bitorsor,
}

impl BitorsorMorphism {
    pub fn new(
        source: Bitorsor,
        target: Bitorsor,
        left_functor: GroupoidFunctor,
        right_functor: GroupoidFunctor,
        carrier_map: Vec<usize>,
    ) -> Result<Self, StructureError> {
        if right_functor.source() != source.right.group() || right_functor.target() != target.right.group() {
            return Err(StructureError::Mismatch(
                "functor does not connect the right groupoids".into(),
            ));
        }
        let left = TorsorMorphism::new(source.left.clone(), target.left.clone(), left_functor, carrier_map)?;
        Ok(BitorsorMorphism {
            left,
            right_functor,
            source,
            target,
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = self.left.validate();
        let mut inner = ValidationReport::default();
        self.right_functor.check_into(&mut inner);
        r.absorb("right-functor", inner);
        let (s, t, f, cm) = (
            &self.source.right,
            &self.target.right,
            &self.right_functor,
            &self.left.carrier_map,
        );
        for x in s.carrier().indices() {
            for h in s.group().arrows().indices() {
                let Some(xh) = s.action.act(x, h) else { continue };
                if t.action.act(cm[x], f.map_arrow(h)) != Some(cm[xh]) {
                    r.push(
                        "morphism-right-action",
                        vec![
                            s.carrier().label(x).to_string(),
                            s.group().arrows().label(h).to_string(),
                        ],
                    );
                }
            }
        }
        r
    }
}
