//! The enveloping groupoid `X+` of a pregroupoid `A <- X -> B`.
//!
//! Objects are the disjoint sum `A + B`, tagged `A:` and `B:`. Arrows come in
//! four blocks, laid out in this order:
//!
//! | block | arrows        | from → to                  |
//! |-------|---------------|----------------------------|
//! | AA    | classes `yx^-1` | `alpha(y) → alpha(x)`    |
//! | AB    | `x ∈ X`       | `alpha(x) → beta(x)`       |
//! | BA    | `x^-1`        | `beta(x) → alpha(x)`       |
//! | BB    | classes `x^-1z` | `beta(x) → beta(z)`      |
//!
//! Composition is the eight-entry multiplication table, evaluated on
//! representatives. In strict mode every entry is recomputed from every
//! choice of representatives and compared.

use crate::error::EnvelopeError;
use crate::groupoid::{FiniteGroupoid, GroupoidFunctor};
use crate::pregroupoid::{operand, Pregroupoid, PregroupoidMorphism, QuotientSet};
use crate::report::Violation;
use crate::set::FiniteSet;

/// An arrow of `X+` by block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnvelopeArrow {
    /// Horizontal class index.
    Aa(usize),
    /// Element of `X`.
    Ab(usize),
    /// Formal inverse of an element of `X`.
    Ba(usize),
    /// Vertical class index.
    Bb(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnvelopeOptions {
    /// Check representative independence of every table entry.
    pub strict: bool,
}

impl Default for EnvelopeOptions {
    fn default() -> Self {
        EnvelopeOptions { strict: true }
    }
}

/// Sizes of the four arrow blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockCounts {
    pub aa: usize,
    pub ab: usize,
    pub ba: usize,
    pub bb: usize,
}

impl BlockCounts {
    pub fn total(&self) -> usize {
        self.aa + self.ab + self.ba + self.bb
    }
}

#[derive(Clone, Debug)]
pub struct Envelope {
    layout: Layout,
    groupoid: FiniteGroupoid,
    unit_reps: Vec<usize>,
}

/// The pregroupoid with its two quotients: enough to name and multiply
/// arrows of `X+`.
#[derive(Clone, Debug)]
struct Layout {
    base: Pregroupoid,
    horizontal: QuotientSet,
    vertical: QuotientSet,
}

/// A table operand: a concrete representative of an arrow.
#[derive(Clone, Copy, Debug)]
enum Operand {
    /// Horizontal pair `(x, y)` standing for `yx^-1`.
    Aa(usize, usize),
    Ab(usize),
    Ba(usize),
    /// Vertical pair `(x, z)` standing for `x^-1z`.
    Bb(usize, usize),
}

pub fn build_envelope(p: &Pregroupoid) -> Result<Envelope, EnvelopeError> {
    Envelope::build(p, EnvelopeOptions::default())
}

impl Layout {
    fn total(&self) -> usize {
        self.horizontal.len() + 2 * self.base.size() + self.vertical.len()
    }

    fn arrow_kind(&self, f: usize) -> EnvelopeArrow {
        let (h, n) = (self.horizontal.len(), self.base.size());
        if f < h {
            EnvelopeArrow::Aa(f)
        } else if f < h + n {
            EnvelopeArrow::Ab(f - h)
        } else if f < h + 2 * n {
            EnvelopeArrow::Ba(f - h - n)
        } else {
            EnvelopeArrow::Bb(f - h - 2 * n)
        }
    }

    fn arrow(&self, kind: EnvelopeArrow) -> usize {
        let (h, n) = (self.horizontal.len(), self.base.size());
        match kind {
            EnvelopeArrow::Aa(c) => c,
            EnvelopeArrow::Ab(x) => h + x,
            EnvelopeArrow::Ba(x) => h + n + x,
            EnvelopeArrow::Bb(c) => h + 2 * n + c,
        }
    }

    fn label(&self, f: usize) -> String {
        let p = &self.base;
        match self.arrow_kind(f) {
            EnvelopeArrow::Aa(c) => self.horizontal.class(c).name.clone(),
            EnvelopeArrow::Ab(x) => p.carrier().label(x).to_string(),
            EnvelopeArrow::Ba(x) => format!("{}^-1", operand(p.carrier().label(x))),
            EnvelopeArrow::Bb(c) => self.vertical.class(c).name.clone(),
        }
    }

    fn ends(&self, f: usize) -> (usize, usize) {
        let p = &self.base;
        let na = p.a().len();
        match self.arrow_kind(f) {
            EnvelopeArrow::Aa(c) => {
                let c = self.horizontal.class(c);
                (c.d0, c.d1)
            }
            EnvelopeArrow::Ab(x) => (p.alpha(x), na + p.beta(x)),
            EnvelopeArrow::Ba(x) => (na + p.beta(x), p.alpha(x)),
            EnvelopeArrow::Bb(c) => {
                let c = self.vertical.class(c);
                (na + c.d0, na + c.d1)
            }
        }
    }

    fn inverse(&self, f: usize) -> usize {
        self.arrow(match self.arrow_kind(f) {
            EnvelopeArrow::Aa(c) => {
                let (x, y) = self.horizontal.class(c).representative;
                EnvelopeArrow::Aa(self.horizontal.class_of(y, x).expect("horizontal pair"))
            }
            EnvelopeArrow::Ab(x) => EnvelopeArrow::Ba(x),
            EnvelopeArrow::Ba(x) => EnvelopeArrow::Ab(x),
            EnvelopeArrow::Bb(c) => {
                let (x, z) = self.vertical.class(c).representative;
                EnvelopeArrow::Bb(self.vertical.class_of(z, x).expect("vertical pair"))
            }
        })
    }

    fn representative(&self, f: usize) -> Operand {
        match self.arrow_kind(f) {
            EnvelopeArrow::Aa(c) => {
                let (x, y) = self.horizontal.class(c).representative;
                Operand::Aa(x, y)
            }
            EnvelopeArrow::Ab(x) => Operand::Ab(x),
            EnvelopeArrow::Ba(x) => Operand::Ba(x),
            EnvelopeArrow::Bb(c) => {
                let (x, z) = self.vertical.class(c).representative;
                Operand::Bb(x, z)
            }
        }
    }

    fn members(&self, f: usize) -> Vec<Operand> {
        match self.arrow_kind(f) {
            EnvelopeArrow::Aa(c) => self
                .horizontal
                .class(c)
                .members
                .iter()
                .map(|&(x, y)| Operand::Aa(x, y))
                .collect(),
            EnvelopeArrow::Ab(x) => vec![Operand::Ab(x)],
            EnvelopeArrow::Ba(x) => vec![Operand::Ba(x)],
            EnvelopeArrow::Bb(c) => self
                .vertical
                .class(c)
                .members
                .iter()
                .map(|&(x, z)| Operand::Bb(x, z))
                .collect(),
        }
    }

    /// The multiplication table. Digits name elements of `X` as in
    /// `12^-1 ∘ 34^-1 := (12^-1 3)4^-1`.
    fn table_entry(&self, f: Operand, g: Operand) -> Option<EnvelopeArrow> {
        let p = &self.base;
        let t = |y, x, z| p.ternary(y, x, z);
        let h = |x, y| self.horizontal.class_of(x, y).map(EnvelopeArrow::Aa);
        let v = |x, z| self.vertical.class_of(x, z).map(EnvelopeArrow::Bb);
        match (f, g) {
            // 12^-1 ∘ 34^-1 := (12^-1 3)4^-1
            (Operand::Aa(e2, e1), Operand::Aa(e4, e3)) => h(e4, t(e1, e2, e3)?),
            // 12^-1 ∘ 3 := 12^-1 3
            (Operand::Aa(e2, e1), Operand::Ab(e3)) => t(e1, e2, e3).map(EnvelopeArrow::Ab),
            // 1 ∘ 2^-1 := 12^-1
            (Operand::Ab(e1), Operand::Ba(e2)) => h(e2, e1),
            // 1 ∘ 2^-1 3 := 12^-1 3
            (Operand::Ab(e1), Operand::Bb(e2, e3)) => t(e1, e2, e3).map(EnvelopeArrow::Ab),
            // 3^-1 ∘ 21^-1 := (12^-1 3)^-1
            (Operand::Ba(e3), Operand::Aa(e1, e2)) => t(e1, e2, e3).map(EnvelopeArrow::Ba),
            // 2^-1 ∘ 3 := 2^-1 3
            (Operand::Ba(e2), Operand::Ab(e3)) => v(e2, e3),
            // 3^-1 2 ∘ 1^-1 := (12^-1 3)^-1
            (Operand::Bb(e3, e2), Operand::Ba(e1)) => t(e1, e2, e3).map(EnvelopeArrow::Ba),
            // 2^-1 3 ∘ 4^-1 5 := 2^-1(34^-1 5)
            (Operand::Bb(e2, e3), Operand::Bb(e4, e5)) => v(e2, t(e3, e4, e5)?),
            _ => None,
        }
    }

    fn compose(&self, f: usize, g: usize) -> Option<EnvelopeArrow> {
        self.table_entry(self.representative(f), self.representative(g))
    }

    fn check_independent(&self, f: usize, g: usize, expected: Option<EnvelopeArrow>) -> Result<(), Violation> {
        for mf in self.members(f) {
            for mg in self.members(g) {
                if self.table_entry(mf, mg) != expected {
                    return Err(Violation::new(
                        "representative-independence",
                        vec![
                            self.label(f),
                            self.label(g),
                            self.operand_label(mf),
                            self.operand_label(mg),
                        ],
                    ));
                }
            }
        }
        Ok(())
    }

    fn operand_label(&self, o: Operand) -> String {
        let l = |x: usize| operand(self.base.carrier().label(x));
        match o {
            Operand::Aa(x, y) => format!("{}*{}^-1", l(y), l(x)),
            Operand::Ab(x) => l(x),
            Operand::Ba(x) => format!("{}^-1", l(x)),
            Operand::Bb(x, z) => format!("{}^-1*{}", l(x), l(z)),
        }
    }
}

impl Envelope {
    pub fn build(p: &Pregroupoid, options: EnvelopeOptions) -> Result<Envelope, EnvelopeError> {
        let report = p.validate();
        if !report.is_clean() {
            return Err(EnvelopeError::InvalidPregroupoid(report));
        }
        let layout = Layout {
            base: p.clone(),
            horizontal: p.horizontal_quotient(),
            vertical: p.vertical_quotient(),
        };
        let total = layout.total();

        let objects = FiniteSet::new(
            p.a()
                .labels()
                .iter()
                .map(|l| format!("A:{l}"))
                .chain(p.b().labels().iter().map(|l| format!("B:{l}"))),
        )?;
        let arrows = FiniteSet::new((0..total).map(|f| layout.label(f)))?;
        let (d0, d1): (Vec<usize>, Vec<usize>) = (0..total).map(|f| layout.ends(f)).unzip();

        let mut unit_reps = Vec::with_capacity(p.a().len() + p.b().len());
        let mut identity = Vec::with_capacity(unit_reps.capacity());
        for a in p.a().indices() {
            let x = p.alpha_fiber(a)[0];
            unit_reps.push(x);
            identity.push(layout.arrow(EnvelopeArrow::Aa(layout.horizontal.class_of(x, x).expect("unit pair"))));
        }
        for b in p.b().indices() {
            let x = p.beta_fiber(b)[0];
            unit_reps.push(x);
            identity.push(layout.arrow(EnvelopeArrow::Bb(layout.vertical.class_of(x, x).expect("unit pair"))));
        }
        let inverse = (0..total).map(|f| layout.inverse(f)).collect();

        let mut failure = None;
        let groupoid = FiniteGroupoid::from_fn(
            objects,
            arrows,
            d0,
            d1,
            |f, g| {
                let value = layout.compose(f, g);
                if options.strict && failure.is_none() {
                    if let Err(v) = layout.check_independent(f, g, value) {
                        failure = Some(v);
                    }
                }
                value.map(|k| layout.arrow(k))
            },
            identity,
            inverse,
        )?;
        if let Some(v) = failure {
            return Err(EnvelopeError::RepresentativeDependence(v));
        }
        Ok(Envelope {
            layout,
            groupoid,
            unit_reps,
        })
    }

    pub fn base(&self) -> &Pregroupoid {
        &self.layout.base
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn horizontal(&self) -> &QuotientSet {
        &self.layout.horizontal
    }

    pub fn vertical(&self) -> &QuotientSet {
        &self.layout.vertical
    }

    /// The element of `X` whose unit class gives the identity at each object.
    pub fn unit_reps(&self) -> &[usize] {
        &self.unit_reps
    }

    pub fn counts(&self) -> BlockCounts {
        BlockCounts {
            aa: self.layout.horizontal.len(),
            ab: self.layout.base.size(),
            ba: self.layout.base.size(),
            bb: self.layout.vertical.len(),
        }
    }

    pub fn a_object(&self, a: usize) -> usize {
        a
    }

    pub fn b_object(&self, b: usize) -> usize {
        self.base().a().len() + b
    }

    pub fn a_objects(&self) -> Vec<usize> {
        (0..self.base().a().len()).collect()
    }

    pub fn b_objects(&self) -> Vec<usize> {
        let na = self.base().a().len();
        (na..na + self.base().b().len()).collect()
    }

    pub fn arrow_kind(&self, f: usize) -> EnvelopeArrow {
        self.layout.arrow_kind(f)
    }

    pub fn arrow(&self, kind: EnvelopeArrow) -> usize {
        self.layout.arrow(kind)
    }

    fn groupoid_label(&self, f: usize) -> String {
        self.layout.label(f)
    }

    /// The unit of the adjunction: `X` as the AB block of `X+`, into the
    /// underlying pregroupoid `X+(A, B)`.
    pub fn eta(&self) -> PregroupoidMorphism {
        let target = self
            .groupoid
            .underlying_pregroupoid(&self.a_objects(), &self.b_objects())
            .expect("X+ is A-B-transitive");
        let p = &self.layout.base;
        PregroupoidMorphism::new(
            p.clone(),
            target,
            p.carrier().indices().collect(),
            p.a().indices().collect(),
            p.b().indices().collect(),
        )
        .expect("AB block has the shape of X")
    }

    /// The unique functor `X+ -> G` extending `phi`.
    ///
    /// `phi` must map `X` into an underlying pregroupoid `G(A', B')` of
    /// `target`; its target is matched to `target` by labels. The result is
    /// checked as a functor, checked against `phi` on the AB block, and
    /// checked to be forced: every arrow of `X+` is recomputed from each of
    /// its factorisations into AB arrows and their inverses.
    pub fn extend(&self, target: &FiniteGroupoid, phi: &PregroupoidMorphism) -> Result<GroupoidFunctor, EnvelopeError> {
        if phi.source() != &self.layout.base {
            return Err(EnvelopeError::TargetMismatch(
                "morphism source is not the base pregroupoid".into(),
            ));
        }
        let report = phi.validate();
        if !report.is_clean() {
            return Err(EnvelopeError::InvalidMorphism(report));
        }
        let pt = phi.target();
        let arrow_of: Vec<usize> = pt
            .carrier()
            .labels()
            .iter()
            .map(|l| target.arrows().resolve(l, "extension target arrows"))
            .collect::<Result<_, _>>()?;
        let a_obj: Vec<usize> = pt
            .a()
            .labels()
            .iter()
            .map(|l| target.objects().resolve(l, "extension target objects"))
            .collect::<Result<_, _>>()?;
        let b_obj: Vec<usize> = pt
            .b()
            .labels()
            .iter()
            .map(|l| target.objects().resolve(l, "extension target objects"))
            .collect::<Result<_, _>>()?;
        for x in pt.carrier().indices() {
            let f = arrow_of[x];
            if target.d0(f) != a_obj[pt.alpha(x)] || target.d1(f) != b_obj[pt.beta(x)] {
                return Err(EnvelopeError::TargetMismatch(format!(
                    "book-keeping of `{}` disagrees with the groupoid",
                    pt.carrier().label(x)
                )));
            }
        }
        for (y, x, z, u) in pt.table().defined() {
            let composite = target
                .compose(arrow_of[y], target.inverse(arrow_of[x]))
                .and_then(|yx| target.compose(yx, arrow_of[z]));
            if composite != Some(arrow_of[u]) {
                return Err(EnvelopeError::TargetMismatch(format!(
                    "ternary entry ({}, {}, {}) is not y∘x^-1∘z",
                    pt.carrier().label(y),
                    pt.carrier().label(x),
                    pt.carrier().label(z)
                )));
            }
        }

        let image = |x: usize| arrow_of[phi.map_x(x)];
        let fail =
            |clause: &str, f: usize| EnvelopeError::Extension(Violation::new(clause, vec![self.groupoid_label(f)]));
        let g = &self.groupoid;
        let object_map: Vec<usize> = self
            .base()
            .a()
            .indices()
            .map(|a| a_obj[phi.map_a(a)])
            .chain(self.layout.base.b().indices().map(|b| b_obj[phi.map_b(b)]))
            .collect();
        let mut arrow_map = Vec::with_capacity(g.arrow_count());
        for f in g.arrows().indices() {
            let value = match self.arrow_kind(f) {
                EnvelopeArrow::Ab(x) => Some(image(x)),
                EnvelopeArrow::Ba(x) => Some(target.inverse(image(x))),
                EnvelopeArrow::Aa(c) => {
                    let (x, y) = self.layout.horizontal.class(c).representative;
                    target.compose(image(y), target.inverse(image(x)))
                }
                EnvelopeArrow::Bb(c) => {
                    let (x, z) = self.layout.vertical.class(c).representative;
                    target.compose(target.inverse(image(x)), image(z))
                }
            };
            arrow_map.push(value.ok_or_else(|| fail("extension-undefined", f))?);
        }
        let functor = GroupoidFunctor::new(g.clone(), target.clone(), object_map, arrow_map)?;
        if let Some(v) = functor.validate().first() {
            return Err(EnvelopeError::Extension(v.clone()));
        }
        for x in self.layout.base.carrier().indices() {
            if functor.map_arrow(self.arrow(EnvelopeArrow::Ab(x))) != image(x) {
                return Err(fail("triangle", self.arrow(EnvelopeArrow::Ab(x))));
            }
        }
        self.certify_forced(target, &functor, &image)?;
        Ok(functor)
    }

    /// Every arrow of `X+` is a composite of AB arrows and their inverses, in
    /// every way its class allows, and the functor agrees with the forced
    /// value on each such word. Any functor agreeing with `phi` on the AB
    /// block therefore equals this one.
    fn certify_forced(
        &self,
        target: &FiniteGroupoid,
        functor: &GroupoidFunctor,
        image: &dyn Fn(usize) -> usize,
    ) -> Result<(), EnvelopeError> {
        let g = &self.groupoid;
        let fail = |f: usize, w: Vec<usize>| {
            let mut witness = vec![self.groupoid_label(f)];
            witness.extend(w.iter().map(|&x| self.layout.base.carrier().label(x).to_string()));
            EnvelopeError::Extension(Violation::new("not-forced", witness))
        };
        for f in g.arrows().indices() {
            match self.arrow_kind(f) {
                EnvelopeArrow::Ab(_) => {}
                EnvelopeArrow::Ba(x) => {
                    if g.inverse(self.arrow(EnvelopeArrow::Ab(x))) != f
                        || functor.map_arrow(f) != target.inverse(image(x))
                    {
                        return Err(fail(f, vec![x]));
                    }
                }
                EnvelopeArrow::Aa(c) => {
                    for &(x, y) in &self.layout.horizontal.class(c).members {
                        let word = g.compose(self.arrow(EnvelopeArrow::Ab(y)), self.arrow(EnvelopeArrow::Ba(x)));
                        let forced = target.compose(image(y), target.inverse(image(x)));
                        if word != Some(f) || forced != Some(functor.map_arrow(f)) {
                            return Err(fail(f, vec![x, y]));
                        }
                    }
                }
                EnvelopeArrow::Bb(c) => {
                    for &(x, z) in &self.layout.vertical.class(c).members {
                        let word = g.compose(self.arrow(EnvelopeArrow::Ba(x)), self.arrow(EnvelopeArrow::Ab(z)));
                        let forced = target.compose(target.inverse(image(x)), image(z));
                        if word != Some(f) || forced != Some(functor.map_arrow(f)) {
                            return Err(fail(f, vec![x, z]));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The full subgroupoids `X+(A, A)` and `X+(B, B)` with their inclusions.
    pub fn edge_inclusions(&self) -> ((FiniteGroupoid, GroupoidFunctor), (FiniteGroupoid, GroupoidFunctor)) {
        let a = self.groupoid.full_subgroupoid(&self.a_objects()).expect("A inhabited");
        let b = self.groupoid.full_subgroupoid(&self.b_objects()).expect("B inhabited");
        (a, b)
    }

    /// `XX^-1` and `X^-1X` as groupoids.
    pub fn edge_groupoids(&self) -> (FiniteGroupoid, FiniteGroupoid) {
        let ((a, _), (b, _)) = self.edge_inclusions();
        (a, b)
    }
}

/// `X+` applied to a morphism: the extension of `m` followed by the unit of
/// the target.
pub fn envelope_map(
    source: &Envelope,
    target: &Envelope,
    m: &PregroupoidMorphism,
) -> Result<GroupoidFunctor, EnvelopeError> {
    let into = m.then(&target.eta())?;
    source.extend(target.groupoid(), &into)
}
