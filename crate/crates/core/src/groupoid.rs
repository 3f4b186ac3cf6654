//! Finite groupoids with left-to-right composition: `f ∘ g` is defined when
//! `d1(f) = d0(g)` and means "first `f`, then `g`".

use crate::error::{GroupoidError, StructureError};
use crate::pregroupoid::Pregroupoid;
use crate::report::ValidationReport;
use crate::set::{check_map, FiniteSet, Table2};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: FiniteSet,
    arrows: FiniteSet,
    d0: Vec<usize>,
    d1: Vec<usize>,
    comp: Table2,
    identity: Vec<usize>,
    inverse: Vec<usize>,
}

impl FiniteGroupoid {
    pub fn new(
        objects: FiniteSet,
        arrows: FiniteSet,
        d0: Vec<usize>,
        d1: Vec<usize>,
        comp: Table2,
        identity: Vec<usize>,
        inverse: Vec<usize>,
    ) -> Result<Self, StructureError> {
        if objects.is_empty() {
            return Err(StructureError::Empty("groupoid objects"));
        }
        let n = arrows.len();
        check_map("d0", &d0, n, objects.len())?;
        check_map("d1", &d1, n, objects.len())?;
        check_map("identity", &identity, objects.len(), n)?;
        check_map("inverse", &inverse, n, n)?;
        if comp.rows() != n || comp.cols() != n {
            return Err(StructureError::LengthMismatch {
                map: "composition".into(),
                expected: n * n,
                found: comp.rows() * comp.cols(),
            });
        }
        comp.check_values("composition", n)?;
        Ok(FiniteGroupoid {
            objects,
            arrows,
            d0,
            d1,
            comp,
            identity,
            inverse,
        })
    }

    /// Tabulates `compose` on exactly the composable pairs.
    pub fn from_fn(
        objects: FiniteSet,
        arrows: FiniteSet,
        d0: Vec<usize>,
        d1: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> Option<usize>,
        identity: Vec<usize>,
        inverse: Vec<usize>,
    ) -> Result<Self, StructureError> {
        let n = arrows.len();
        check_map("d0", &d0, n, objects.len())?;
        check_map("d1", &d1, n, objects.len())?;
        let mut comp = Table2::new(n, n);
        for f in 0..n {
            for g in 0..n {
                if d1[f] == d0[g] {
                    comp.set(f, g, compose(f, g));
                }
            }
        }
        FiniteGroupoid::new(objects, arrows, d0, d1, comp, identity, inverse)
    }

    pub fn objects(&self) -> &FiniteSet {
        &self.objects
    }

    pub fn arrows(&self) -> &FiniteSet {
        &self.arrows
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn d0(&self, f: usize) -> usize {
        self.d0[f]
    }

    pub fn d1(&self, f: usize) -> usize {
        self.d1[f]
    }

    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.comp.get(f, g)
    }

    pub fn composition_table(&self) -> &Table2 {
        &self.comp
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identity[o]
    }

    pub fn inverse(&self, f: usize) -> usize {
        self.inverse[f]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identity[self.d0[f]] == f
    }

    /// Arrows `p -> q`, in canonical order.
    pub fn arrows_between(&self, p: usize, q: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows
            .indices()
            .filter(move |&f| self.d0[f] == p && self.d1[f] == q)
    }

    pub(crate) fn arrow_labels(&self, fs: &[usize]) -> Vec<String> {
        fs.iter().map(|&f| self.arrows.label(f).to_string()).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        self.check_into(&mut report);
        report
    }

    pub fn check_into(&self, report: &mut ValidationReport) {
        let n = self.arrows.len();
        let l = |fs: &[usize]| self.arrow_labels(fs);
        for f in 0..n {
            for g in 0..n {
                let composable = self.d1[f] == self.d0[g];
                match self.comp.get(f, g) {
                    Some(h) if !composable => report.push("domain-exactness", l(&[f, g, h])),
                    None if composable => report.push("domain-exactness", l(&[f, g])),
                    Some(h) => {
                        if self.d0[h] != self.d0[f] {
                            report.push("composite-d0", l(&[f, g, h]));
                        }
                        if self.d1[h] != self.d1[g] {
                            report.push("composite-d1", l(&[f, g, h]));
                        }
                    }
                    None => {}
                }
            }
        }
        for f in 0..n {
            for g in (0..n).filter(|&g| self.d1[f] == self.d0[g]) {
                let Some(fg) = self.compose(f, g) else { continue };
                for h in (0..n).filter(|&h| self.d1[g] == self.d0[h]) {
                    let left = self.compose(fg, h);
                    let right = self.compose(g, h).and_then(|gh| self.compose(f, gh));
                    if let (Some(left), Some(right)) = (left, right) {
                        if left != right {
                            report.push("associativity", l(&[f, g, h]));
                        }
                    }
                }
            }
        }
        for o in self.objects.indices() {
            let e = self.identity[o];
            if self.d0[e] != o || self.d1[e] != o {
                report.push(
                    "identity-bookkeeping",
                    vec![self.objects.label(o).to_string(), self.arrows.label(e).to_string()],
                );
            }
        }
        for f in 0..n {
            let (ea, eb) = (self.identity[self.d0[f]], self.identity[self.d1[f]]);
            if self.d1[ea] == self.d0[f] && self.compose(ea, f) != Some(f) {
                report.push("left-identity", l(&[f]));
            }
            if self.d1[f] == self.d0[eb] && self.compose(f, eb) != Some(f) {
                report.push("right-identity", l(&[f]));
            }
            let g = self.inverse[f];
            if self.d0[g] != self.d1[f] || self.d1[g] != self.d0[f] {
                report.push("inverse-bookkeeping", l(&[f, g]));
                continue;
            }
            if self.compose(g, f) != Some(eb) {
                report.push("left-inverse", l(&[f, g]));
            }
            if self.compose(f, g) != Some(ea) {
                report.push("right-inverse", l(&[f, g]));
            }
        }
    }

    fn resolve_objects(&self, labels: &[&str]) -> Result<Vec<usize>, StructureError> {
        labels
            .iter()
            .map(|l| self.objects.resolve(l, "object subset"))
            .collect()
    }

    /// `G(A, B)`: arrows with domain in `a` and codomain in `b`.
    pub fn hom_subset(&self, a: &[usize], b: &[usize]) -> ArrowSet {
        let arrows: Vec<usize> = self
            .arrows
            .indices()
            .filter(|&f| a.contains(&self.d0[f]) && b.contains(&self.d1[f]))
            .collect();
        ArrowSet {
            d0: arrows.iter().map(|&f| self.d0[f]).collect(),
            d1: arrows.iter().map(|&f| self.d1[f]).collect(),
            arrows,
        }
    }

    pub fn hom_subset_by_labels(&self, a: &[&str], b: &[&str]) -> Result<ArrowSet, StructureError> {
        Ok(self.hom_subset(&self.resolve_objects(a)?, &self.resolve_objects(b)?))
    }

    /// Every `a` in `a_objs` has an arrow into `b_objs` and every `b` in
    /// `b_objs` has an arrow from `a_objs`.
    pub fn is_ab_transitive(&self, a_objs: &[usize], b_objs: &[usize]) -> bool {
        self.transitivity_witness(a_objs, b_objs).is_none()
    }

    fn transitivity_witness(&self, a_objs: &[usize], b_objs: &[usize]) -> Option<usize> {
        let hom = self.hom_subset(a_objs, b_objs);
        a_objs
            .iter()
            .find(|a| !hom.d0.contains(a))
            .or_else(|| b_objs.iter().find(|b| !hom.d1.contains(b)))
            .copied()
    }

    /// The pregroupoid `G(A, B)` with `yx^-1z := y ∘ x^-1 ∘ z`.
    pub fn underlying_pregroupoid(&self, a_objs: &[usize], b_objs: &[usize]) -> Result<Pregroupoid, GroupoidError> {
        if a_objs.is_empty() {
            return Err(GroupoidError::EmptySubset("A"));
        }
        if b_objs.is_empty() {
            return Err(GroupoidError::EmptySubset("B"));
        }
        if let Some(o) = self.transitivity_witness(a_objs, b_objs) {
            return Err(GroupoidError::NotTransitive(self.objects.label(o).to_string()));
        }
        let hom = self.hom_subset(a_objs, b_objs);
        let mut position = vec![None; self.arrows.len()];
        for (i, &f) in hom.arrows.iter().enumerate() {
            position[f] = Some(i);
        }
        let pos_a = |o: usize| a_objs.iter().position(|&p| p == o).expect("d0 in A");
        let pos_b = |o: usize| b_objs.iter().position(|&p| p == o).expect("d1 in B");
        let arrows = &hom.arrows;
        Ok(Pregroupoid::from_fn(
            self.arrows.restrict(arrows),
            self.objects.restrict(a_objs),
            self.objects.restrict(b_objs),
            hom.d0.iter().map(|&o| pos_a(o)).collect(),
            hom.d1.iter().map(|&o| pos_b(o)).collect(),
            |y, x, z| {
                let yx = self.compose(arrows[y], self.inverse(arrows[x]))?;
                position[self.compose(yx, arrows[z])?]
            },
        )?)
    }

    /// The full subgroupoid on `objs` (in the given order) and its inclusion.
    pub fn full_subgroupoid(&self, objs: &[usize]) -> Result<(FiniteGroupoid, GroupoidFunctor), StructureError> {
        if objs.is_empty() {
            return Err(StructureError::Empty("subgroupoid objects"));
        }
        let hom = self.hom_subset(objs, objs);
        let mut position = vec![None; self.arrows.len()];
        for (i, &f) in hom.arrows.iter().enumerate() {
            position[f] = Some(i);
        }
        let pos = |o: usize| objs.iter().position(|&p| p == o).expect("object in subset");
        let sub = FiniteGroupoid::from_fn(
            self.objects.restrict(objs),
            self.arrows.restrict(&hom.arrows),
            hom.d0.iter().map(|&o| pos(o)).collect(),
            hom.d1.iter().map(|&o| pos(o)).collect(),
            |f, g| position[self.compose(hom.arrows[f], hom.arrows[g])?],
            objs.iter()
                .map(|&o| {
                    position[self.identity(o)].ok_or(StructureError::Mismatch("identity outside subgroupoid".into()))
                })
                .collect::<Result<_, _>>()?,
            hom.arrows
                .iter()
                .map(|&f| {
                    position[self.inverse(f)].ok_or(StructureError::Mismatch("inverse outside subgroupoid".into()))
                })
                .collect::<Result<_, _>>()?,
        )?;
        let inclusion = GroupoidFunctor::new(sub.clone(), self.clone(), objs.to_vec(), hom.arrows)?;
        Ok((sub, inclusion))
    }

    /// Same groupoid, objects renamed.
    pub fn relabel_objects(&self, objects: FiniteSet) -> Result<FiniteGroupoid, StructureError> {
        if objects.len() != self.objects.len() {
            return Err(StructureError::Mismatch(
                "relabelling changes the number of objects".into(),
            ));
        }
        let mut g = self.clone();
        g.objects = objects;
        Ok(g)
    }

    /// All composable pairs commute wherever both composites exist.
    pub fn is_abelian(&self) -> bool {
        let n = self.arrows.len();
        (0..n).all(|f| {
            (0..n).all(|g| match (self.compose(f, g), self.compose(g, f)) {
                (Some(x), Some(y)) => x == y,
                _ => true,
            })
        })
    }

    /// Objects connected to `o` by some arrow.
    pub fn component_of(&self, o: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .arrows
            .indices()
            .filter(|&f| self.d0[f] == o)
            .map(|f| self.d1[f])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Arrows of `G(A, B)` with their restricted book-keeping maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowSet {
    pub arrows: Vec<usize>,
    pub d0: Vec<usize>,
    pub d1: Vec<usize>,
}

impl ArrowSet {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidFunctor {
    source: FiniteGroupoid,
    target: FiniteGroupoid,
    object_map: Vec<usize>,
    arrow_map: Vec<usize>,
}

impl GroupoidFunctor {
    pub fn new(
        source: FiniteGroupoid,
        target: FiniteGroupoid,
        object_map: Vec<usize>,
        arrow_map: Vec<usize>,
    ) -> Result<Self, StructureError> {
        check_map(
            "functor object map",
            &object_map,
            source.objects.len(),
            target.objects.len(),
        )?;
        check_map(
            "functor arrow map",
            &arrow_map,
            source.arrows.len(),
            target.arrows.len(),
        )?;
        Ok(GroupoidFunctor {
            source,
            target,
            object_map,
            arrow_map,
        })
    }

    pub fn identity(g: &FiniteGroupoid) -> Self {
        GroupoidFunctor {
            source: g.clone(),
            target: g.clone(),
            object_map: g.objects.indices().collect(),
            arrow_map: g.arrows.indices().collect(),
        }
    }

    pub fn source(&self) -> &FiniteGroupoid {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroupoid {
        &self.target
    }

    pub fn map_object(&self, o: usize) -> usize {
        self.object_map[o]
    }

    pub fn map_arrow(&self, f: usize) -> usize {
        self.arrow_map[f]
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    pub fn arrow_map(&self) -> &[usize] {
        &self.arrow_map
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupoidFunctor) -> Result<GroupoidFunctor, StructureError> {
        if self.target != next.source {
            return Err(StructureError::Mismatch("functors are not composable".into()));
        }
        GroupoidFunctor::new(
            self.source.clone(),
            next.target.clone(),
            self.object_map.iter().map(|&o| next.object_map[o]).collect(),
            self.arrow_map.iter().map(|&f| next.arrow_map[f]).collect(),
        )
    }

    pub fn is_bijective(&self) -> bool {
        fn bijective(map: &[usize], n: usize) -> bool {
            let mut hit = vec![false; n];
            map.len() == n && map.iter().all(|&v| !std::mem::replace(&mut hit[v], true))
        }
        bijective(&self.object_map, self.target.objects.len()) && bijective(&self.arrow_map, self.target.arrows.len())
    }

    /// The inverse functor, when both maps are bijections.
    pub fn inverse(&self) -> Option<GroupoidFunctor> {
        if !self.is_bijective() {
            return None;
        }
        let mut objects = vec![0; self.object_map.len()];
        for (o, &p) in self.object_map.iter().enumerate() {
            objects[p] = o;
        }
        let mut arrows = vec![0; self.arrow_map.len()];
        for (f, &g) in self.arrow_map.iter().enumerate() {
            arrows[g] = f;
        }
        GroupoidFunctor::new(self.target.clone(), self.source.clone(), objects, arrows).ok()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        self.check_into(&mut report);
        report
    }

    pub fn check_into(&self, report: &mut ValidationReport) {
        let (s, t) = (&self.source, &self.target);
        let l = |f: usize| s.arrows.label(f).to_string();
        for f in s.arrows.indices() {
            let g = self.arrow_map[f];
            if t.d0[g] != self.object_map[s.d0[f]] {
                report.push("functor-d0", vec![l(f)]);
            }
            if t.d1[g] != self.object_map[s.d1[f]] {
                report.push("functor-d1", vec![l(f)]);
            }
        }
        for o in s.objects.indices() {
            if self.arrow_map[s.identity[o]] != t.identity[self.object_map[o]] {
                report.push("functor-identity", vec![s.objects.label(o).to_string()]);
            }
        }
        for (f, g, h) in s.comp.defined() {
            let mapped = t.compose(self.arrow_map[f], self.arrow_map[g]);
            if mapped != Some(self.arrow_map[h]) {
                report.push("functor-composition", vec![l(f), l(g)]);
            }
        }
    }
}

/// Full, faithful and essentially surjective flags for the inclusion of a
/// full subgroupoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InclusionProperties {
    pub full: bool,
    pub faithful: bool,
    pub essentially_surjective: bool,
}

impl InclusionProperties {
    pub fn is_equivalence(&self) -> bool {
        self.full && self.faithful && self.essentially_surjective
    }
}

/// Checks the three properties for a functor `sub -> g` that is meant to be
/// the inclusion of a full subgroupoid.
pub fn inclusion_properties(inclusion: &GroupoidFunctor) -> InclusionProperties {
    let (s, g) = (inclusion.source(), inclusion.target());
    let mut hit = vec![false; g.arrow_count()];
    let mut faithful = true;
    for &f in inclusion.arrow_map() {
        faithful &= !std::mem::replace(&mut hit[f], true);
    }
    let image: Vec<usize> = inclusion.object_map().to_vec();
    let full = image
        .iter()
        .all(|&p| image.iter().all(|&q| g.arrows_between(p, q).all(|f| hit[f])))
        && s.arrows.indices().all(|f| {
            let h = inclusion.map_arrow(f);
            g.d0(h) == inclusion.map_object(s.d0(f)) && g.d1(h) == inclusion.map_object(s.d1(f))
        });
    let essentially_surjective = g
        .objects()
        .indices()
        .all(|o| g.component_of(o).iter().any(|p| image.contains(p)));
    InclusionProperties {
        full,
        faithful,
        essentially_surjective,
    }
}
