//! Fibrations in groupoids over the generic invertible arrow `I`, their
//! equivalence with bitorsors, and the encoding of 2-cells between functors
//! over `I` by the partial maps `t` and `s`.

use crate::envelope::{Envelope, EnvelopeOptions};
use crate::error::{FibrationError, StructureError, TwoCellError};
use crate::groupoid::{inclusion_properties, FiniteGroupoid, GroupoidFunctor, InclusionProperties};
use crate::pregroupoid::{Pregroupoid, PregroupoidMorphism};
use crate::report::{ValidationReport, Violation};
use crate::set::{FiniteSet, Table2};
use crate::torsor::{bitorsor_from_groupoid, c_left, forget_right, Bitorsor};

pub const A0: usize = 0;
pub const B0: usize = 1;
pub const ID_A0: usize = 0;
pub const ID_B0: usize = 1;
pub const I: usize = 2;
pub const I_INV: usize = 3;

/// Objects `a0`, `b0`; arrows `id_a0`, `id_b0`, `i: a0 -> b0`, `i^-1`.
pub fn make_i() -> FiniteGroupoid {
    let ends = |f: usize| match f {
        ID_A0 => (A0, A0),
        ID_B0 => (B0, B0),
        I => (A0, B0),
        _ => (B0, A0),
    };
    let arrow = |p: usize, q: usize| match (p, q) {
        (A0, A0) => ID_A0,
        (B0, B0) => ID_B0,
        (A0, B0) => I,
        _ => I_INV,
    };
    FiniteGroupoid::from_fn(
        FiniteSet::new(["a0", "b0"]).expect("distinct"),
        FiniteSet::new(["id_a0", "id_b0", "i", "i^-1"]).expect("distinct"),
        (0..4).map(|f| ends(f).0).collect(),
        (0..4).map(|f| ends(f).1).collect(),
        |f, g| Some(arrow(ends(f).0, ends(g).1)),
        vec![ID_A0, ID_B0],
        vec![ID_A0, ID_B0, I_INV, I],
    )
    .expect("I is well formed")
}

/// The terminal pregroupoid `1 <- 1 -> 1`, realised as `I(a0, b0)`.
pub fn terminal_in_i() -> Pregroupoid {
    make_i().underlying_pregroupoid(&[A0], &[B0]).expect("I is transitive")
}

/// The functor to `I` sending `a_objs` to `a0` and every other object to
/// `b0`.
pub fn collapse_to_i(k: &FiniteGroupoid, a_objs: &[usize]) -> Result<GroupoidFunctor, StructureError> {
    let side: Vec<usize> = k
        .objects()
        .indices()
        .map(|o| if a_objs.contains(&o) { A0 } else { B0 })
        .collect();
    let arrow_map = k
        .arrows()
        .indices()
        .map(|f| match (side[k.d0(f)], side[k.d1(f)]) {
            (A0, A0) => ID_A0,
            (B0, B0) => ID_B0,
            (A0, _) => I,
            _ => I_INV,
        })
        .collect();
    GroupoidFunctor::new(k.clone(), make_i(), side, arrow_map)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationOverI {
    total: FiniteGroupoid,
    gamma: GroupoidFunctor,
}

impl FibrationOverI {
    pub fn new(gamma: GroupoidFunctor) -> Result<Self, StructureError> {
        if gamma.target() != &make_i() {
            return Err(StructureError::Mismatch("functor does not land in I".into()));
        }
        Ok(FibrationOverI {
            total: gamma.source().clone(),
            gamma,
        })
    }

    pub fn total(&self) -> &FiniteGroupoid {
        &self.total
    }

    pub fn gamma(&self) -> &GroupoidFunctor {
        &self.gamma
    }

    /// Objects over `a0`.
    pub fn a_objects(&self) -> Vec<usize> {
        self.fibre(A0)
    }

    /// Objects over `b0`.
    pub fn b_objects(&self) -> Vec<usize> {
        self.fibre(B0)
    }

    fn fibre(&self, side: usize) -> Vec<usize> {
        self.total
            .objects()
            .indices()
            .filter(|&o| self.gamma.map_object(o) == side)
            .collect()
    }

    /// Every arrow of `I` into `gamma(e)` lifts to an arrow into `e`.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        self.check_into(&mut r);
        r
    }

    pub fn check_into(&self, r: &mut ValidationReport) {
        let mut inner = ValidationReport::with_cap(r.cap());
        self.gamma.check_into(&mut inner);
        r.absorb("gamma", inner);
        let i = self.gamma.target();
        for e in self.total.objects().indices() {
            let over = self.gamma.map_object(e);
            for k in i.arrows().indices().filter(|&k| i.d1(k) == over) {
                let lifted = self
                    .total
                    .arrows()
                    .indices()
                    .any(|f| self.total.d1(f) == e && self.gamma.map_arrow(f) == k);
                if !lifted {
                    r.push(
                        "lifting",
                        vec![
                            self.total.objects().label(e).to_string(),
                            i.arrows().label(k).to_string(),
                        ],
                    );
                }
            }
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_clean()
    }

    /// Inclusions of `X(A,A)` and `X(B,B)` into the total groupoid.
    pub fn end_inclusions(&self) -> Result<(GroupoidFunctor, GroupoidFunctor), FibrationError> {
        require_valid(self.validate())?;
        let (_, a) = self.total.full_subgroupoid(&self.a_objects())?;
        let (_, b) = self.total.full_subgroupoid(&self.b_objects())?;
        Ok((a, b))
    }

    pub fn end_inclusion_properties(&self) -> Result<(InclusionProperties, InclusionProperties), FibrationError> {
        let (a, b) = self.end_inclusions()?;
        Ok((inclusion_properties(&a), inclusion_properties(&b)))
    }
}

fn require_valid(report: ValidationReport) -> Result<(), FibrationError> {
    if report.is_clean() {
        Ok(())
    } else {
        Err(FibrationError::Invalid(report))
    }
}

/// `X(A,B)` with `X(A,A)` acting by precomposition and `X(B,B)` by
/// postcomposition.
pub fn fibration_to_bitorsor(f: &FibrationOverI) -> Result<Bitorsor, FibrationError> {
    require_valid(f.validate())?;
    Ok(bitorsor_from_groupoid(&f.total, &f.a_objects(), &f.b_objects())?)
}

/// The envelope of the bitorsor's pregroupoid, over `I` by the extension of
/// the terminal morphism.
pub fn bitorsor_to_fibration(bi: &Bitorsor) -> Result<FibrationOverI, FibrationError> {
    bitorsor_to_fibration_with(bi, EnvelopeOptions::default())
}

pub fn bitorsor_to_fibration_with(bi: &Bitorsor, options: EnvelopeOptions) -> Result<FibrationOverI, FibrationError> {
    let p = c_left(&forget_right(bi))?;
    envelope_fibration(&Envelope::build(&p, options)?)
}

/// `X+ -> I` as the unique extension of `X -> 1`, checked against the
/// object-wise collapse.
pub fn envelope_fibration(e: &Envelope) -> Result<FibrationOverI, FibrationError> {
    let i = make_i();
    let to_terminal = PregroupoidMorphism::to_terminal(e.base(), &terminal_in_i())?;
    let gamma = e.extend(&i, &to_terminal)?;
    let direct = collapse_to_i(e.groupoid(), &e.a_objects())?;
    if gamma != direct {
        let f = (0..gamma.arrow_map().len())
            .find(|&f| gamma.map_arrow(f) != direct.map_arrow(f))
            .unwrap_or(0);
        return Err(FibrationError::Mismatch(Violation::new(
            "gamma-not-collapse",
            vec![e.groupoid().arrows().label(f).to_string()],
        )));
    }
    Ok(FibrationOverI::new(gamma)?)
}

/// An isomorphism over `I` between the rebuilt fibration and the original.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidIso {
    /// `(rebuilt total) -> (original total)`.
    pub forward: GroupoidFunctor,
    pub inverse: GroupoidFunctor,
    pub rebuilt: FibrationOverI,
}

/// The canonical functor from the envelope of `X(A,B)` back to the total
/// groupoid: identity on `A`, `B` and `X`, `yx^-1 ↦ y ∘ x^-1`,
/// `x^-1z ↦ x^-1 ∘ z`. Checked to be an isomorphism commuting with both
/// functors to `I`.
pub fn canonical_roundtrip_iso(f: &FibrationOverI) -> Result<GroupoidIso, FibrationError> {
    let bi = fibration_to_bitorsor(f)?;
    let p = c_left(&forget_right(&bi))?;
    let e = Envelope::build(&p, EnvelopeOptions::default())?;
    let rebuilt = envelope_fibration(&e)?;
    let hom = f.total.underlying_pregroupoid(&f.a_objects(), &f.b_objects())?;
    let into = PregroupoidMorphism::new(
        p.clone(),
        hom,
        p.carrier().indices().collect(),
        p.a().indices().collect(),
        p.b().indices().collect(),
    )?;
    let forward = e.extend(&f.total, &into)?;
    let inverse = forward.inverse().ok_or_else(|| {
        let mut hit = vec![false; f.total.arrow_count()];
        for &g in forward.arrow_map() {
            hit[g] = true;
        }
        let missing = hit.iter().position(|h| !h).unwrap_or(0);
        FibrationError::Mismatch(Violation::new(
            "not-generated",
            vec![f.total.arrows().label(missing).to_string()],
        ))
    })?;
    if forward.then(&f.gamma)? != rebuilt.gamma {
        return Err(FibrationError::Mismatch(Violation::new(
            "iso-not-over-i",
            vec!["forward".into()],
        )));
    }
    if inverse.then(&rebuilt.gamma)? != f.gamma {
        return Err(FibrationError::Mismatch(Violation::new(
            "iso-not-over-i",
            vec!["inverse".into()],
        )));
    }
    Ok(GroupoidIso {
        forward,
        inverse,
        rebuilt,
    })
}

/// A functor between fibrations commuting strictly with the functors to `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorOverI {
    source: FibrationOverI,
    target: FibrationOverI,
    functor: GroupoidFunctor,
}

impl FunctorOverI {
    pub fn new(source: FibrationOverI, target: FibrationOverI, functor: GroupoidFunctor) -> Result<Self, TwoCellError> {
        if functor.source() != source.total() || functor.target() != target.total() {
            return Err(StructureError::Mismatch("functor does not connect the total groupoids".into()).into());
        }
        if let Some(v) = functor.validate().first() {
            return Err(TwoCellError::NotOverI(v.clone()));
        }
        for f in source.total.arrows().indices() {
            if target.gamma.map_arrow(functor.map_arrow(f)) != source.gamma.map_arrow(f) {
                return Err(TwoCellError::NotOverI(Violation::new(
                    "over-i",
                    vec![source.total.arrows().label(f).to_string()],
                )));
            }
        }
        Ok(FunctorOverI {
            source,
            target,
            functor,
        })
    }

    pub fn identity(f: &FibrationOverI) -> Self {
        FunctorOverI {
            source: f.clone(),
            target: f.clone(),
            functor: GroupoidFunctor::identity(&f.total),
        }
    }

    pub fn source(&self) -> &FibrationOverI {
        &self.source
    }

    pub fn target(&self) -> &FibrationOverI {
        &self.target
    }

    pub fn functor(&self) -> &GroupoidFunctor {
        &self.functor
    }
}

/// A natural transformation `from ⇒ to` with components
/// `tau_o: from(o) -> to(o)`, natural in the sense
/// `from(k) ∘ tau_o' = tau_o ∘ to(k)` for `k: o -> o'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCell {
    from: FunctorOverI,
    to: FunctorOverI,
    components: Vec<usize>,
}

fn same_ends(f: &FunctorOverI, g: &FunctorOverI) -> Result<(), TwoCellError> {
    if f.source != g.source || f.target != g.target {
        return Err(StructureError::Mismatch("functors have different ends".into()).into());
    }
    Ok(())
}

impl TwoCell {
    pub fn new(from: FunctorOverI, to: FunctorOverI, components: Vec<usize>) -> Result<Self, TwoCellError> {
        same_ends(&from, &to)?;
        let (src, tgt) = (from.source.total(), from.target.total());
        crate::set::check_map("components", &components, src.objects().len(), tgt.arrow_count())?;
        let cell = TwoCell { from, to, components };
        if let Some(v) = cell.naturality_witness() {
            return Err(TwoCellError::NotNatural(v));
        }
        Ok(cell)
    }

    pub fn identity(f: &FunctorOverI) -> Self {
        let tgt = f.target.total();
        let components = f
            .source
            .total
            .objects()
            .indices()
            .map(|o| tgt.identity(f.functor.map_object(o)))
            .collect();
        TwoCell {
            from: f.clone(),
            to: f.clone(),
            components,
        }
    }

    pub fn from(&self) -> &FunctorOverI {
        &self.from
    }

    pub fn to(&self) -> &FunctorOverI {
        &self.to
    }

    pub fn components(&self) -> &[usize] {
        &self.components
    }

    fn naturality_witness(&self) -> Option<Violation> {
        let (src, tgt) = (self.from.source.total(), self.from.target.total());
        let (f, g) = (&self.from.functor, &self.to.functor);
        for o in src.objects().indices() {
            let c = self.components[o];
            if tgt.d0(c) != f.map_object(o) || tgt.d1(c) != g.map_object(o) {
                return Some(Violation::new(
                    "component-ends",
                    vec![src.objects().label(o).to_string()],
                ));
            }
        }
        for k in src.arrows().indices() {
            let left = tgt.compose(f.map_arrow(k), self.components[src.d1(k)]);
            let right = tgt.compose(self.components[src.d0(k)], g.map_arrow(k));
            if left != right {
                return Some(Violation::new("naturality", vec![src.arrows().label(k).to_string()]));
            }
        }
        None
    }
}

/// The 2-cell `f ⇒ g` with components `tau_o`, where
/// `g(k) := tau_o^-1 ∘ f(k) ∘ tau_o'`. Each component must start at `f(o)`
/// and stay in the same fibre.
pub fn conjugate(f: &FunctorOverI, components: Vec<usize>) -> Result<TwoCell, TwoCellError> {
    let (src, tgt) = (f.source.total(), f.target.total());
    crate::set::check_map("components", &components, src.objects().len(), tgt.arrow_count())?;
    for o in src.objects().indices() {
        let c = components[o];
        if tgt.d0(c) != f.functor.map_object(o)
            || f.target.gamma.map_arrow(c) != f.target.gamma.target().identity(f.source.gamma.map_object(o))
        {
            return Err(TwoCellError::NotNatural(Violation::new(
                "component-ends",
                vec![src.objects().label(o).to_string()],
            )));
        }
    }
    let object_map = components.iter().map(|&c| tgt.d1(c)).collect();
    let arrow_map = src
        .arrows()
        .indices()
        .map(|k| {
            let inv = tgt.inverse(components[src.d0(k)]);
            tgt.compose(inv, f.functor.map_arrow(k))
                .and_then(|m| tgt.compose(m, components[src.d1(k)]))
                .expect("composable by construction")
        })
        .collect();
    let g = GroupoidFunctor::new(src.clone(), tgt.clone(), object_map, arrow_map)?;
    let g = FunctorOverI::new(f.source.clone(), f.target.clone(), g)?;
    TwoCell::new(f.clone(), g, components)
}

/// The identity 2-cell on the identity functor of `f`, followed by up to
/// `limit` conjugation cells whose components are spread evenly over all
/// choices of one fibre-preserving arrow out of each object.
pub fn conjugation_samples(f: &FibrationOverI, limit: usize) -> Vec<TwoCell> {
    let id = FunctorOverI::identity(f);
    let g = f.total();
    let options: Vec<Vec<usize>> = g
        .objects()
        .indices()
        .map(|o| {
            g.arrows()
                .indices()
                .filter(|&k| g.d0(k) == o && f.gamma.map_object(g.d1(k)) == f.gamma.map_object(o))
                .collect()
        })
        .collect();
    let total = options.iter().fold(1usize, |acc, o| acc.saturating_mul(o.len()));
    let count = limit.min(total);
    let mut cells = vec![TwoCell::identity(&id)];
    for i in 0..count {
        let mut k = (i as u128 * total as u128 / count as u128) as usize;
        let mut components = Vec::with_capacity(options.len());
        for o in &options {
            components.push(o[k % o.len()]);
            k /= o.len();
        }
        cells.push(conjugate(&id, components).expect("fibre-preserving components"));
    }
    cells
}

/// `t(a, u) = tau_a ∘ u` and `s(b, v) = v ∘ tau_b`, indexed by positions in
/// the source fibres `A`, `B` and in the target's `X' = X'(A', B')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCellEncoding {
    from: FunctorOverI,
    to: FunctorOverI,
    t: Table2,
    s: Table2,
}

/// Fibres and hom-set bookkeeping shared by encoding and decoding.
struct Frame {
    a: Vec<usize>,
    b: Vec<usize>,
    x: Vec<usize>,
    /// total-groupoid arrow -> position in `x`
    position: Vec<Option<usize>>,
    /// source `X(A,B)` as source arrows
    source_x: Vec<usize>,
}

impl Frame {
    fn new(f: &FunctorOverI) -> Frame {
        let (src, tgt) = (&f.source, &f.target);
        let hom = tgt.total.hom_subset(&tgt.a_objects(), &tgt.b_objects());
        let mut position = vec![None; tgt.total.arrow_count()];
        for (i, &u) in hom.arrows.iter().enumerate() {
            position[u] = Some(i);
        }
        Frame {
            a: src.a_objects(),
            b: src.b_objects(),
            x: hom.arrows,
            position,
            source_x: src.total.hom_subset(&src.a_objects(), &src.b_objects()).arrows,
        }
    }
}

pub fn encode_two_cell(tau: &TwoCell) -> TwoCellEncoding {
    let frame = Frame::new(&tau.from);
    let tgt = tau.from.target.total();
    let (f, g) = (&tau.from.functor, &tau.to.functor);
    let mut t = Table2::new(frame.a.len(), frame.x.len());
    for (ai, &a) in frame.a.iter().enumerate() {
        for (ui, &u) in frame.x.iter().enumerate() {
            if tgt.d0(u) == g.map_object(a) {
                t.set(
                    ai,
                    ui,
                    tgt.compose(tau.components[a], u).and_then(|w| frame.position[w]),
                );
            }
        }
    }
    let mut s = Table2::new(frame.b.len(), frame.x.len());
    for (bi, &b) in frame.b.iter().enumerate() {
        for (vi, &v) in frame.x.iter().enumerate() {
            if tgt.d1(v) == f.map_object(b) {
                s.set(
                    bi,
                    vi,
                    tgt.compose(v, tau.components[b]).and_then(|w| frame.position[w]),
                );
            }
        }
    }
    TwoCellEncoding {
        from: tau.from.clone(),
        to: tau.to.clone(),
        t,
        s,
    }
}

impl TwoCellEncoding {
    pub fn new(from: FunctorOverI, to: FunctorOverI, t: Table2, s: Table2) -> Result<Self, TwoCellError> {
        same_ends(&from, &to)?;
        let frame = Frame::new(&from);
        if t.rows() != frame.a.len()
            || t.cols() != frame.x.len()
            || s.rows() != frame.b.len()
            || s.cols() != frame.x.len()
        {
            return Err(StructureError::Mismatch("encoding tables have the wrong shape".into()).into());
        }
        t.check_values("t", frame.x.len())?;
        s.check_values("s", frame.x.len())?;
        Ok(TwoCellEncoding { from, to, t, s })
    }

    pub fn t(&self) -> &Table2 {
        &self.t
    }

    pub fn s(&self) -> &Table2 {
        &self.s
    }

    pub fn t_mut(&mut self) -> &mut Table2 {
        &mut self.t
    }

    pub fn s_mut(&mut self) -> &mut Table2 {
        &mut self.s
    }

    /// Definedness, book-keeping and the three equations, exhaustively.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let frame = Frame::new(&self.from);
        let tgt = self.from.target.total();
        let (f, g) = (&self.from.functor, &self.to.functor);
        let src = self.from.source.total();
        let x = &frame.x;
        let (d0, d1) = (|u: usize| tgt.d0(x[u]), |u: usize| tgt.d1(x[u]));
        let lu = |u: usize| tgt.arrows().label(x[u]).to_string();
        let lo = |o: usize| src.objects().label(o).to_string();
        let ternary = |y: usize, w: usize, z: usize| {
            tgt.compose(x[y], tgt.inverse(x[w]))
                .and_then(|m| tgt.compose(m, x[z]))
                .and_then(|m| frame.position[m])
        };
        for (ai, &a) in frame.a.iter().enumerate() {
            for u in 0..x.len() {
                let defined = d0(u) == g.map_object(a);
                match self.t.get(ai, u) {
                    None if defined => r.push("t-domain", vec![lo(a), lu(u)]),
                    Some(_) if !defined => r.push("t-domain", vec![lo(a), lu(u)]),
                    Some(w) if d0(w) != f.map_object(a) || d1(w) != d1(u) => {
                        r.push("t-bookkeeping", vec![lo(a), lu(u)])
                    }
                    _ => {}
                }
            }
        }
        for (bi, &b) in frame.b.iter().enumerate() {
            for v in 0..x.len() {
                let defined = d1(v) == f.map_object(b);
                match self.s.get(bi, v) {
                    None if defined => r.push("s-domain", vec![lo(b), lu(v)]),
                    Some(_) if !defined => r.push("s-domain", vec![lo(b), lu(v)]),
                    Some(w) if d1(w) != g.map_object(b) || d0(w) != d0(v) => {
                        r.push("s-bookkeeping", vec![lo(b), lu(v)])
                    }
                    _ => {}
                }
            }
        }
        if !r.is_clean() {
            return r;
        }
        let a_pos = |o: usize| frame.a.iter().position(|&p| p == o).expect("object over a0");
        let b_pos = |o: usize| frame.b.iter().position(|&p| p == o).expect("object over b0");
        // t(a, g(x)) = s(b, f(x)) for x: a -> b
        for &k in &frame.source_x {
            let (a, b) = (src.d0(k), src.d1(k));
            let gx = frame.position[g.map_arrow(k)].expect("functor over I");
            let fx = frame.position[f.map_arrow(k)].expect("functor over I");
            if self.t.get(a_pos(a), gx) != self.s.get(b_pos(b), fx) {
                r.push("eq-t-s", vec![src.arrows().label(k).to_string()]);
            }
        }
        // t(a, u)v^-1w = t(a, uv^-1w)
        for ai in 0..frame.a.len() {
            for u in 0..x.len() {
                let Some(tu) = self.t.get(ai, u) else { continue };
                for v in (0..x.len()).filter(|&v| d1(v) == d1(u)) {
                    for w in (0..x.len()).filter(|&w| d0(w) == d0(v)) {
                        let left = ternary(tu, v, w);
                        let right = ternary(u, v, w).and_then(|m| self.t.get(ai, m));
                        if left != right {
                            r.push("eq-t-ternary", vec![lo(frame.a[ai]), lu(u), lu(v), lu(w)]);
                        }
                    }
                }
            }
        }
        // wu^-1 s(b, v) = s(b, wu^-1v)
        for bi in 0..frame.b.len() {
            for v in 0..x.len() {
                let Some(sv) = self.s.get(bi, v) else { continue };
                for u in (0..x.len()).filter(|&u| d0(u) == d0(v)) {
                    for w in (0..x.len()).filter(|&w| d1(w) == d1(u)) {
                        let left = ternary(w, u, sv);
                        let right = ternary(w, u, v).and_then(|m| self.s.get(bi, m));
                        if left != right {
                            r.push("eq-s-ternary", vec![lo(frame.b[bi]), lu(w), lu(u), lu(v)]);
                        }
                    }
                }
            }
        }
        r
    }
}

/// The unique 2-cell with the given encoding: `tau_a = t(a,u) ∘ u^-1` and
/// `tau_b = v^-1 ∘ s(b,v)`, each checked against every admissible `u`, `v`.
pub fn decode_two_cell(enc: &TwoCellEncoding) -> Result<TwoCell, TwoCellError> {
    if let Some(v) = enc.validate().first() {
        return Err(TwoCellError::EquationViolation(v.clone()));
    }
    let frame = Frame::new(&enc.from);
    let tgt = enc.from.target.total();
    let src = enc.from.source.total();
    let x = &frame.x;
    let mut components = vec![usize::MAX; src.objects().len()];
    let choice = |o: usize| {
        TwoCellError::EquationViolation(Violation::new(
            "choice-dependence",
            vec![src.objects().label(o).to_string()],
        ))
    };
    for (ai, &a) in frame.a.iter().enumerate() {
        let mut found = None;
        for u in 0..x.len() {
            let Some(tu) = enc.t.get(ai, u) else { continue };
            let c = tgt.compose(x[tu], tgt.inverse(x[u])).expect("book-keeping checked");
            if found.is_some_and(|p| p != c) {
                return Err(choice(a));
            }
            found = Some(c);
        }
        components[a] = found.ok_or_else(|| choice(a))?;
    }
    for (bi, &b) in frame.b.iter().enumerate() {
        let mut found = None;
        for v in 0..x.len() {
            let Some(sv) = enc.s.get(bi, v) else { continue };
            let c = tgt.compose(tgt.inverse(x[v]), x[sv]).expect("book-keeping checked");
            if found.is_some_and(|p| p != c) {
                return Err(choice(b));
            }
            found = Some(c);
        }
        components[b] = found.ok_or_else(|| choice(b))?;
    }
    TwoCell::new(enc.from.clone(), enc.to.clone(), components)
}

/// Components on `B` forced by components on `A`:
/// `tau_b = f(x)^-1 ∘ tau_a ∘ g(x)` for any `x: a -> b`.
pub fn components_from_a(f: &FunctorOverI, g: &FunctorOverI, on_a: &[usize]) -> Result<Vec<usize>, TwoCellError> {
    complete_components(f, g, on_a, true)
}

/// Components on `A` forced by components on `B`:
/// `tau_a = f(x) ∘ tau_b ∘ g(x)^-1` for any `x: a -> b`.
pub fn components_from_b(f: &FunctorOverI, g: &FunctorOverI, on_b: &[usize]) -> Result<Vec<usize>, TwoCellError> {
    complete_components(f, g, on_b, false)
}

fn complete_components(
    f: &FunctorOverI,
    g: &FunctorOverI,
    known: &[usize],
    from_a: bool,
) -> Result<Vec<usize>, TwoCellError> {
    same_ends(f, g)?;
    let src = f.source.total();
    let tgt = f.target.total();
    let (a, b) = (f.source.a_objects(), f.source.b_objects());
    let (given, wanted) = if from_a { (&a, &b) } else { (&b, &a) };
    if known.len() != given.len() {
        return Err(StructureError::LengthMismatch {
            map: "components".into(),
            expected: given.len(),
            found: known.len(),
        }
        .into());
    }
    let mut components = vec![usize::MAX; src.objects().len()];
    for (i, &o) in given.iter().enumerate() {
        components[o] = known[i];
    }
    for &o in wanted {
        let mut found = None;
        for k in src.arrows().indices() {
            let (ka, kb) = (src.d0(k), src.d1(k));
            let c = if from_a {
                if kb != o || !a.contains(&ka) {
                    continue;
                }
                tgt.compose(tgt.inverse(f.functor.map_arrow(k)), components[ka])
                    .and_then(|m| tgt.compose(m, g.functor.map_arrow(k)))
            } else {
                if ka != o || !b.contains(&kb) {
                    continue;
                }
                tgt.compose(f.functor.map_arrow(k), components[kb])
                    .and_then(|m| tgt.compose(m, tgt.inverse(g.functor.map_arrow(k))))
            };
            let Some(c) = c else {
                return Err(TwoCellError::NotNatural(Violation::new(
                    "component-ends",
                    vec![src.arrows().label(k).to_string()],
                )));
            };
            if found.is_some_and(|p| p != c) {
                return Err(TwoCellError::NotNatural(Violation::new(
                    "naturality",
                    vec![src.arrows().label(k).to_string()],
                )));
            }
            found = Some(c);
        }
        components[o] = found.ok_or_else(|| {
            TwoCellError::NotNatural(Violation::new("lifting", vec![src.objects().label(o).to_string()]))
        })?;
    }
    Ok(components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::build_envelope;
    use crate::set::Table3;

    fn pair(n: usize) -> FiniteGroupoid {
        let objects = FiniteSet::numbered("o", n);
        let arrows = FiniteSet::new((0..n * n).map(|i| format!("({},{})", i / n, i % n))).unwrap();
        FiniteGroupoid::from_fn(
            objects,
            arrows,
            (0..n * n).map(|i| i / n).collect(),
            (0..n * n).map(|i| i % n).collect(),
            |f, g| Some((f / n) * n + g % n),
            (0..n).map(|o| o * n + o).collect(),
            (0..n * n).map(|i| (i % n) * n + i / n).collect(),
        )
        .unwrap()
    }

    /// Heap of the cyclic group of order `n`.
    fn heap(n: usize) -> Pregroupoid {
        let mut t = Table3::new(n);
        for y in 0..n {
            for x in 0..n {
                for z in 0..n {
                    t.set(y, x, z, Some((y + n - x + z) % n));
                }
            }
        }
        Pregroupoid::new(
            FiniteSet::numbered("x", n),
            FiniteSet::point(),
            FiniteSet::point(),
            vec![0; n],
            vec![0; n],
            t,
        )
        .unwrap()
    }

    #[test]
    fn i_is_a_groupoid_with_four_arrows() {
        let i = make_i();
        assert!(i.validate().is_clean());
        assert_eq!(i.arrow_count(), 4);
        assert_eq!(i.compose(I, I_INV), Some(ID_A0));
        assert_eq!(i.compose(I_INV, I), Some(ID_B0));
    }

    #[test]
    fn i_is_the_envelope_of_the_terminal_pregroupoid() {
        let e = build_envelope(&terminal_in_i()).unwrap();
        let g = e.groupoid();
        let collapse = collapse_to_i(g, &e.a_objects()).unwrap();
        assert!(collapse.validate().is_clean());
        assert!(collapse.is_bijective());
    }

    #[test]
    fn collapse_of_pair_groupoid_is_a_fibration() {
        let f = FibrationOverI::new(collapse_to_i(&pair(4), &[0, 1]).unwrap()).unwrap();
        assert!(f.is_valid(), "{}", f.validate());
    }

    #[test]
    fn stranded_object_fails_lifting() {
        // objects o0, o1 connected; o2 alone over b0
        let g = FiniteGroupoid::from_fn(
            FiniteSet::numbered("o", 3),
            FiniteSet::new(["1_0", "1_1", "1_2", "f", "f^-1"]).unwrap(),
            vec![0, 1, 2, 0, 1],
            vec![0, 1, 2, 1, 0],
            |f, g| {
                let ends = [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)];
                let (p, q) = (ends[f].0, ends[g].1);
                ends.iter().position(|&e| e == (p, q))
            },
            vec![0, 1, 2],
            vec![0, 1, 2, 4, 3],
        )
        .unwrap();
        assert!(g.validate().is_clean());
        let f = FibrationOverI::new(collapse_to_i(&g, &[0]).unwrap()).unwrap();
        let r = f.validate();
        assert!(r.has_clause("lifting"));
        assert_eq!(r.first().unwrap().witness[0], "o2");
    }

    #[test]
    fn i_over_itself_gives_the_trivial_bitorsor() {
        let f = FibrationOverI::new(GroupoidFunctor::identity(&make_i())).unwrap();
        let bi = fibration_to_bitorsor(&f).unwrap();
        assert_eq!(bi.carrier().len(), 1);
        assert_eq!(bi.left().group().arrow_count(), 1);
        assert_eq!(bi.right().group().arrow_count(), 1);
    }

    #[test]
    fn envelope_fibration_roundtrip_is_identity() {
        let e = build_envelope(&heap(3)).unwrap();
        let f = envelope_fibration(&e).unwrap();
        let iso = canonical_roundtrip_iso(&f).unwrap();
        assert_eq!(
            iso.forward.arrow_map(),
            (0..f.total().arrow_count()).collect::<Vec<_>>()
        );
        assert_eq!(
            iso.forward.object_map(),
            (0..f.total().objects().len()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn pair_groupoid_roundtrip_iso() {
        let f = FibrationOverI::new(collapse_to_i(&pair(4), &[0, 2]).unwrap()).unwrap();
        let iso = canonical_roundtrip_iso(&f).unwrap();
        assert!(iso.forward.is_bijective());
        let (a, b) = f.end_inclusion_properties().unwrap();
        assert!(a.is_equivalence() && b.is_equivalence());
    }

    #[test]
    fn identity_two_cell_encodes_to_identity_tables() {
        let f = envelope_fibration(&build_envelope(&heap(2)).unwrap()).unwrap();
        let id = FunctorOverI::identity(&f);
        let cell = TwoCell::identity(&id);
        let enc = encode_two_cell(&cell);
        for (_, u, w) in enc.t().defined() {
            assert_eq!(u, w);
        }
        for (_, v, w) in enc.s().defined() {
            assert_eq!(v, w);
        }
        assert_eq!(decode_two_cell(&enc).unwrap(), cell);
    }

    #[test]
    fn conjugation_cells_roundtrip() {
        let e = build_envelope(&heap(3)).unwrap();
        let f = envelope_fibration(&e).unwrap();
        let id = FunctorOverI::identity(&f);
        let g = f.total();
        // components: any AA arrow at A, any BB arrow at B
        for ca in g.arrows_between(0, 0).collect::<Vec<_>>() {
            for cb in g.arrows_between(1, 1).collect::<Vec<_>>() {
                let cell = conjugate(&id, vec![ca, cb]).unwrap();
                let enc = encode_two_cell(&cell);
                assert!(enc.validate().is_clean(), "{}", enc.validate());
                assert_eq!(decode_two_cell(&enc).unwrap(), cell);
                let from_a = components_from_a(cell.from(), cell.to(), &[ca]).unwrap();
                let from_b = components_from_b(cell.from(), cell.to(), &[cb]).unwrap();
                assert_eq!(from_a, cell.components());
                assert_eq!(from_b, cell.components());
            }
        }
    }

    #[test]
    fn corrupted_t_entry_is_rejected() {
        let e = build_envelope(&heap(3)).unwrap();
        let f = envelope_fibration(&e).unwrap();
        let id = FunctorOverI::identity(&f);
        let cell = conjugate(&id, vec![1, 3 + 3 + 3 + 1]).unwrap();
        let mut enc = encode_two_cell(&cell);
        let (a, u, w) = enc.t().defined().next().unwrap();
        enc.t_mut().set(a, u, Some((w + 1) % 3));
        assert!(matches!(decode_two_cell(&enc), Err(TwoCellError::EquationViolation(_))));
    }

    #[test]
    fn non_natural_components_are_rejected() {
        let e = build_envelope(&heap(3)).unwrap();
        let f = envelope_fibration(&e).unwrap();
        let id = FunctorOverI::identity(&f);
        // a non-identity AA component with the identity BB component breaks
        // naturality for the identity functor on both sides
        assert!(matches!(
            TwoCell::new(id.clone(), id.clone(), vec![1, f.total().identity(1)]),
            Err(TwoCellError::NotNatural(_))
        ));
    }

    /// Functors `I -> X+` over `I` are determined by the image of `i`; they
    /// agree on the (trivial) end groupoids, yet differ.
    #[test]
    fn end_groupoids_do_not_determine_functors() {
        let e = build_envelope(&heap(2)).unwrap();
        let target = envelope_fibration(&e).unwrap();
        let source = FibrationOverI::new(GroupoidFunctor::identity(&make_i())).unwrap();
        let g = e.groupoid();
        let make = |x: usize| {
            let ab = e.arrow(crate::envelope::EnvelopeArrow::Ab(x));
            let functor = GroupoidFunctor::new(
                make_i(),
                g.clone(),
                vec![0, 1],
                vec![g.identity(0), g.identity(1), ab, g.inverse(ab)],
            )
            .unwrap();
            FunctorOverI::new(source.clone(), target.clone(), functor).unwrap()
        };
        let (f0, f1) = (make(0), make(1));
        assert_ne!(f0.functor(), f1.functor());
        for k in [ID_A0, ID_B0] {
            assert_eq!(f0.functor().map_arrow(k), f1.functor().map_arrow(k));
        }
    }
}
