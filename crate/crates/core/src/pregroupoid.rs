//! Finite pregroupoids `A <- X -> B` with their partial ternary operation
//! `yx^-1z`.
//!
//! The operation is stored as an explicit table. Nothing about it is trusted:
//! [`Pregroupoid::validate`] checks domain exactness, the book-keeping of
//! outputs, the two unit laws and the two concatenation laws exhaustively.

use crate::error::{BookkeepingError, StructureError};
use crate::report::{ValidationReport, Violation};
use crate::set::{check_map, FiniteSet, Table3};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pregroupoid {
    carrier: FiniteSet,
    a: FiniteSet,
    b: FiniteSet,
    alpha: Vec<usize>,
    beta: Vec<usize>,
    ternary: Table3,
    alpha_fibers: Vec<Vec<usize>>,
    beta_fibers: Vec<Vec<usize>>,
}

fn fibers(map: &[usize], codomain: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); codomain];
    for (x, &v) in map.iter().enumerate() {
        out[v].push(x);
    }
    out
}

/// Wraps a label in parentheses when it would be ambiguous as an operand of
/// a fraction name.
pub(crate) fn operand(label: &str) -> String {
    if label.contains(['*', '^', ' ']) {
        format!("({label})")
    } else {
        label.to_string()
    }
}

impl Pregroupoid {
    pub fn new(
        carrier: FiniteSet,
        a: FiniteSet,
        b: FiniteSet,
        alpha: Vec<usize>,
        beta: Vec<usize>,
        ternary: Table3,
    ) -> Result<Self, StructureError> {
        if carrier.is_empty() {
            return Err(StructureError::Empty("pregroupoid carrier"));
        }
        let n = carrier.len();
        check_map("alpha", &alpha, n, a.len())?;
        check_map("beta", &beta, n, b.len())?;
        if ternary.size() != n {
            return Err(StructureError::LengthMismatch {
                map: "ternary".into(),
                expected: n,
                found: ternary.size(),
            });
        }
        ternary.check_values("ternary", n)?;
        let alpha_fibers = fibers(&alpha, a.len());
        let beta_fibers = fibers(&beta, b.len());
        Ok(Pregroupoid {
            carrier,
            a,
            b,
            alpha,
            beta,
            ternary,
            alpha_fibers,
            beta_fibers,
        })
    }

    /// Tabulates `op` on exactly the book-keeping domain
    /// `beta(x) = beta(y)`, `alpha(x) = alpha(z)`.
    pub fn from_fn(
        carrier: FiniteSet,
        a: FiniteSet,
        b: FiniteSet,
        alpha: Vec<usize>,
        beta: Vec<usize>,
        mut op: impl FnMut(usize, usize, usize) -> Option<usize>,
    ) -> Result<Self, StructureError> {
        let n = carrier.len();
        check_map("alpha", &alpha, n, a.len())?;
        check_map("beta", &beta, n, b.len())?;
        let mut table = Table3::new(n);
        for y in 0..n {
            for x in 0..n {
                if beta[x] != beta[y] {
                    continue;
                }
                for z in 0..n {
                    if alpha[x] == alpha[z] {
                        table.set(y, x, z, op(y, x, z));
                    }
                }
            }
        }
        Pregroupoid::new(carrier, a, b, alpha, beta, table)
    }

    pub fn carrier(&self) -> &FiniteSet {
        &self.carrier
    }

    pub fn a(&self) -> &FiniteSet {
        &self.a
    }

    pub fn b(&self) -> &FiniteSet {
        &self.b
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn alpha(&self, x: usize) -> usize {
        self.alpha[x]
    }

    pub fn beta(&self, x: usize) -> usize {
        self.beta[x]
    }

    pub fn alpha_map(&self) -> &[usize] {
        &self.alpha
    }

    pub fn beta_map(&self) -> &[usize] {
        &self.beta
    }

    pub fn table(&self) -> &Table3 {
        &self.ternary
    }

    /// Elements over `a`, in canonical order.
    pub fn alpha_fiber(&self, a: usize) -> &[usize] {
        &self.alpha_fibers[a]
    }

    /// Elements over `b`, in canonical order.
    pub fn beta_fiber(&self, b: usize) -> &[usize] {
        &self.beta_fibers[b]
    }

    /// Raw table lookup of `yx^-1z`.
    pub fn ternary(&self, y: usize, x: usize, z: usize) -> Option<usize> {
        self.ternary.get(y, x, z)
    }

    pub fn in_domain(&self, y: usize, x: usize, z: usize) -> bool {
        self.beta[x] == self.beta[y] && self.alpha[x] == self.alpha[z]
    }

    /// `yx^-1z`, with the failing side condition named on error.
    pub fn apply(&self, y: usize, x: usize, z: usize) -> Result<usize, BookkeepingError> {
        let l = |i: usize| self.carrier.label(i).to_string();
        if self.beta[x] != self.beta[y] {
            return Err(BookkeepingError::Beta { y: l(y), x: l(x) });
        }
        if self.alpha[x] != self.alpha[z] {
            return Err(BookkeepingError::Alpha { x: l(x), z: l(z) });
        }
        self.ternary(y, x, z).ok_or_else(|| BookkeepingError::Undefined {
            y: l(y),
            x: l(x),
            z: l(z),
        })
    }

    /// `ternary_apply` by labels.
    pub fn apply_labels(&self, y: &str, x: &str, z: &str) -> Result<&str, ApplyError> {
        let idx = |s: &str| {
            self.carrier
                .resolve(s, "pregroupoid carrier")
                .map_err(ApplyError::Structure)
        };
        let u = self.apply(idx(y)?, idx(x)?, idx(z)?).map_err(ApplyError::Bookkeeping)?;
        Ok(self.carrier.label(u))
    }

    pub(crate) fn labels(&self, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| self.carrier.label(x).to_string()).collect()
    }

    /// Checks the defining clauses: surjectivity, domain exactness, output
    /// book-keeping, the unit laws and the concatenation laws.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        self.check_into(&mut report);
        report
    }

    pub fn check_into(&self, report: &mut ValidationReport) {
        let n = self.size();
        for a in self.a.indices() {
            if self.alpha_fibers[a].is_empty() {
                report.push("alpha-surjective", vec![self.a.label(a).to_string()]);
            }
        }
        for b in self.b.indices() {
            if self.beta_fibers[b].is_empty() {
                report.push("beta-surjective", vec![self.b.label(b).to_string()]);
            }
        }
        for y in 0..n {
            for x in 0..n {
                for z in 0..n {
                    let expected = self.in_domain(y, x, z);
                    match self.ternary(y, x, z) {
                        Some(u) if !expected => report.push("domain-exactness", self.labels(&[y, x, z, u])),
                        None if expected => report.push("domain-exactness", self.labels(&[y, x, z])),
                        Some(u) => {
                            if self.alpha[u] != self.alpha[y] {
                                report.push("output-alpha", self.labels(&[y, x, z, u]));
                            }
                            if self.beta[u] != self.beta[z] {
                                report.push("output-beta", self.labels(&[y, x, z, u]));
                            }
                        }
                        None => {}
                    }
                }
            }
        }
        let t = |y, x, z| self.ternary(y, x, z);
        // xx^-1z = z
        for x in 0..n {
            for &z in self.alpha_fiber(self.alpha[x]) {
                if let Some(u) = t(x, x, z) {
                    if u != z {
                        report.push("left-unit", self.labels(&[x, z]));
                    }
                }
            }
        }
        // yx^-1x = y
        for x in 0..n {
            for &y in self.beta_fiber(self.beta[x]) {
                if let Some(u) = t(y, x, x) {
                    if u != y {
                        report.push("right-unit", self.labels(&[y, x]));
                    }
                }
            }
        }
        // vy^-1(yx^-1z) = vx^-1z
        for x in 0..n {
            let same_beta = self.beta_fiber(self.beta[x]);
            for &y in same_beta {
                for &z in self.alpha_fiber(self.alpha[x]) {
                    let Some(w) = t(y, x, z) else { continue };
                    for &v in same_beta {
                        if let (Some(l), Some(r)) = (t(v, y, w), t(v, x, z)) {
                            if l != r {
                                report.push("left-concatenation", self.labels(&[v, y, x, z]));
                            }
                        }
                    }
                }
            }
        }
        // (yx^-1z)z^-1w = yx^-1w
        for x in 0..n {
            let same_alpha = self.alpha_fiber(self.alpha[x]);
            for &y in self.beta_fiber(self.beta[x]) {
                for &z in same_alpha {
                    let Some(u) = t(y, x, z) else { continue };
                    for &w in same_alpha {
                        if let (Some(l), Some(r)) = (t(u, z, w), t(y, x, w)) {
                            if l != r {
                                report.push("right-concatenation", self.labels(&[y, x, z, w]));
                            }
                        }
                    }
                }
            }
        }
    }

    /// Exhaustively checks the consequences of the axioms: the relabelled
    /// concatenation law, associativity, the two mirror laws, the
    /// three-quadrangle law and the two fraction identities.
    ///
    /// These are theorems, so a non-empty report on an input that passes
    /// [`Pregroupoid::validate`] means a bug somewhere.
    pub fn verify_derived_equations(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        self.check_derived_into(&mut report);
        report
    }

    pub fn check_derived_into(&self, report: &mut ValidationReport) {
        let n = self.size();
        let t = |y, x, z| self.ternary(y, x, z);
        let mut check = |clause: &str, l: Option<usize>, r: Option<usize>, w: &[usize]| {
            if let (Some(l), Some(r)) = (l, r) {
                if l != r {
                    report.push(clause, self.labels(w));
                }
            }
        };
        for p1 in 0..n {
            for &p2 in self.beta_fiber(self.beta[p1]) {
                for &p3 in self.alpha_fiber(self.alpha[p2]) {
                    let q = t(p1, p2, p3);
                    // 41^-1(12^-1 3) = 42^-1 3
                    for &p4 in self.beta_fiber(self.beta[p1]) {
                        check(
                            "relabelled-concatenation",
                            q.and_then(|q| t(p4, p1, q)),
                            t(p4, p2, p3),
                            &[p1, p2, p3, p4],
                        );
                    }
                    // 21^-1(12^-1 3) = 3
                    check("vertical-mirror", q.and_then(|q| t(p2, p1, q)), Some(p3), &[p1, p2, p3]);
                    // (12^-1 3)3^-1 2 = 1
                    check(
                        "horizontal-mirror",
                        q.and_then(|q| t(q, p3, p2)),
                        Some(p1),
                        &[p1, p2, p3],
                    );
                    for &p4 in self.beta_fiber(self.beta[p3]) {
                        // 1 = (12^-1 3)4^-1(43^-1 2)
                        let v = t(p4, p3, p2);
                        check(
                            "horizontal-fraction",
                            q.zip(v).and_then(|(q, v)| t(q, p4, v)),
                            Some(p1),
                            &[p1, p2, p3, p4],
                        );
                        for &p5 in self.alpha_fiber(self.alpha[p4]) {
                            // (12^-1 3)4^-1 5 = 12^-1(34^-1 5)
                            check(
                                "associativity",
                                q.and_then(|q| t(q, p4, p5)),
                                t(p3, p4, p5).and_then(|r| t(p1, p2, r)),
                                &[p1, p2, p3, p4, p5],
                            );
                        }
                    }
                }
            }
        }
        for p3 in 0..n {
            for &p4 in self.beta_fiber(self.beta[p3]) {
                for &p5 in self.alpha_fiber(self.alpha[p4]) {
                    let u = t(p3, p4, p5);
                    for &p2 in self.alpha_fiber(self.alpha[p3]) {
                        let v = t(p4, p3, p2);
                        // 34^-1 5 = 2(43^-1 2)^-1 5
                        check("vertical-fraction", u, v.and_then(|v| t(p2, v, p5)), &[p2, p3, p4, p5]);
                        // 6(34^-1 5)^-1 2 = 65^-1(43^-1 2)
                        for &p6 in self.beta_fiber(self.beta[p5]) {
                            check(
                                "three-quadrangle",
                                u.and_then(|u| t(p6, u, p2)),
                                v.and_then(|v| t(p6, p5, v)),
                                &[p2, p3, p4, p5, p6],
                            );
                        }
                    }
                }
            }
        }
    }

    /// `(x, y)` and `(z, u)` are horizontal pairs forming a good quadrangle.
    pub fn horizontally_equivalent(&self, p: (usize, usize), q: (usize, usize)) -> bool {
        let ((x, y), (z, u)) = (p, q);
        self.beta[x] == self.beta[y]
            && self.beta[z] == self.beta[u]
            && self.in_domain(y, x, z)
            && self.ternary(y, x, z) == Some(u)
    }

    /// `(x, z)` and `(y, u)` are vertical pairs forming a good quadrangle.
    pub fn vertically_equivalent(&self, p: (usize, usize), q: (usize, usize)) -> bool {
        let ((x, z), (y, u)) = (p, q);
        self.alpha[x] == self.alpha[z]
            && self.alpha[y] == self.alpha[u]
            && self.in_domain(y, x, z)
            && self.ternary(y, x, z) == Some(u)
    }

    pub fn is_good_quadrangle(&self, q: Quadrangle) -> bool {
        self.in_domain(q.y, q.x, q.z) && self.ternary(q.y, q.x, q.z) == Some(q.u)
    }

    /// The orbit of a good quadrangle under the two mirrors: `[q, horizontal,
    /// vertical, both]`.
    pub fn four_group_images(&self, q: Quadrangle) -> Result<[Quadrangle; 4], NotGood> {
        if !self.is_good_quadrangle(q) {
            return Err(NotGood(q));
        }
        Ok([
            q,
            q.horizontal_mirror(),
            q.vertical_mirror(),
            q.horizontal_mirror().vertical_mirror(),
        ])
    }

    /// Partition of horizontal pairs (`beta(x) = beta(y)`) into fractions
    /// `yx^-1`.
    pub fn horizontal_quotient(&self) -> QuotientSet {
        let n = self.size();
        let mut q = QuotientSet::empty(PairKind::Horizontal, n);
        for x in 0..n {
            for &y in self.beta_fiber(self.beta[x]) {
                if q.class_of(x, y).is_some() {
                    continue;
                }
                let members: Vec<_> = self
                    .alpha_fiber(self.alpha[x])
                    .iter()
                    .filter_map(|&z| self.ternary(y, x, z).map(|u| (z, u)))
                    .collect();
                q.add_class((x, y), members, self.alpha[y], self.alpha[x], |&(x, y)| {
                    format!(
                        "{}*{}^-1",
                        operand(self.carrier.label(y)),
                        operand(self.carrier.label(x))
                    )
                });
            }
        }
        q
    }

    /// Partition of vertical pairs (`alpha(x) = alpha(z)`) into fractions
    /// `x^-1z`.
    pub fn vertical_quotient(&self) -> QuotientSet {
        let n = self.size();
        let mut q = QuotientSet::empty(PairKind::Vertical, n);
        for x in 0..n {
            for &z in self.alpha_fiber(self.alpha[x]) {
                if q.class_of(x, z).is_some() {
                    continue;
                }
                let members: Vec<_> = self
                    .beta_fiber(self.beta[x])
                    .iter()
                    .filter_map(|&y| self.ternary(y, x, z).map(|u| (y, u)))
                    .collect();
                q.add_class((x, z), members, self.beta[x], self.beta[z], |&(x, z)| {
                    format!(
                        "{}^-1*{}",
                        operand(self.carrier.label(x)),
                        operand(self.carrier.label(z))
                    )
                });
            }
        }
        q
    }

    /// First label-level difference from `other`, if any.
    pub fn first_difference(&self, other: &Pregroupoid) -> Option<Violation> {
        let sets = [
            ("carrier", &self.carrier, &other.carrier),
            ("a", &self.a, &other.a),
            ("b", &self.b, &other.b),
        ];
        for (name, mine, theirs) in sets {
            if mine != theirs {
                return Some(Violation::new(
                    format!("{name}-differs"),
                    vec![format!("{mine:?}"), format!("{theirs:?}")],
                ));
            }
        }
        for x in self.carrier.indices() {
            if self.alpha[x] != other.alpha[x] {
                return Some(Violation::new("alpha-differs", self.labels(&[x])));
            }
            if self.beta[x] != other.beta[x] {
                return Some(Violation::new("beta-differs", self.labels(&[x])));
            }
        }
        let n = self.size();
        for y in 0..n {
            for x in 0..n {
                for z in 0..n {
                    let (l, r) = (self.ternary(y, x, z), other.ternary(y, x, z));
                    if l != r {
                        let show =
                            |v: Option<usize>| v.map_or("undefined".to_string(), |u| self.carrier.label(u).to_string());
                        let mut w = self.labels(&[y, x, z]);
                        w.push(show(l));
                        w.push(show(r));
                        return Some(Violation::new("ternary-differs", w));
                    }
                }
            }
        }
        None
    }

    /// The same structure with new labels for `A` and `B`.
    pub fn relabel_ends(&self, a: FiniteSet, b: FiniteSet) -> Result<Pregroupoid, StructureError> {
        if a.len() != self.a.len() || b.len() != self.b.len() {
            return Err(StructureError::Mismatch(
                "relabelling changes the size of A or B".into(),
            ));
        }
        Pregroupoid::new(
            self.carrier.clone(),
            a,
            b,
            self.alpha.clone(),
            self.beta.clone(),
            self.ternary.clone(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ApplyError {
    #[error(transparent)]
    Structure(StructureError),
    #[error(transparent)]
    Bookkeeping(BookkeepingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("quadrangle {0:?} is not good")]
pub struct NotGood(pub Quadrangle);

/// Four elements laid out as
///
/// ```text
///   z ===== u
///   |       |      single lines: same beta
///   x ----- y      double lines: same alpha
/// ```
///
/// The quadrangle is good when `u = yx^-1z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quadrangle {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub u: usize,
}

impl Quadrangle {
    pub fn new(x: usize, y: usize, z: usize, u: usize) -> Self {
        Quadrangle { x, y, z, u }
    }

    /// Reflection swapping the top and bottom rows.
    pub fn horizontal_mirror(self) -> Self {
        Quadrangle::new(self.z, self.u, self.x, self.y)
    }

    /// Reflection swapping the left and right columns.
    pub fn vertical_mirror(self) -> Self {
        Quadrangle::new(self.y, self.x, self.u, self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// `(x, y)` with `beta(x) = beta(y)`, class written `yx^-1`.
    Horizontal,
    /// `(x, z)` with `alpha(x) = alpha(z)`, class written `x^-1z`.
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionClass {
    /// Least pair of the class in canonical order.
    pub representative: (usize, usize),
    pub members: Vec<(usize, usize)>,
    pub d0: usize,
    pub d1: usize,
    pub name: String,
}

/// The set `XX^-1` or `X^-1X` of fraction classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSet {
    kind: PairKind,
    n: usize,
    classes: Vec<FractionClass>,
    class_of: Vec<Option<usize>>,
}

impl QuotientSet {
    fn empty(kind: PairKind, n: usize) -> Self {
        QuotientSet {
            kind,
            n,
            classes: Vec::new(),
            class_of: vec![None; n * n],
        }
    }

    fn add_class(
        &mut self,
        representative: (usize, usize),
        mut members: Vec<(usize, usize)>,
        d0: usize,
        d1: usize,
        name: impl Fn(&(usize, usize)) -> String,
    ) {
        let id = self.classes.len();
        if !members.contains(&representative) {
            members.push(representative);
        }
        members.sort_unstable();
        for &(p, q) in &members {
            let slot = &mut self.class_of[p * self.n + q];
            if slot.is_none() {
                *slot = Some(id);
            }
        }
        self.classes.push(FractionClass {
            representative,
            name: name(&representative),
            members,
            d0,
            d1,
        });
    }

    pub fn kind(&self) -> PairKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[FractionClass] {
        &self.classes
    }

    pub fn class(&self, id: usize) -> &FractionClass {
        &self.classes[id]
    }

    pub fn class_of(&self, p: usize, q: usize) -> Option<usize> {
        self.class_of[p * self.n + q]
    }

    pub fn names(&self) -> Vec<String> {
        self.classes.iter().map(|c| c.name.clone()).collect()
    }
}

/// A triple of maps `X -> X'`, `A -> A'`, `B -> B'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PregroupoidMorphism {
    source: Pregroupoid,
    target: Pregroupoid,
    carrier_map: Vec<usize>,
    a_map: Vec<usize>,
    b_map: Vec<usize>,
}

impl PregroupoidMorphism {
    pub fn new(
        source: Pregroupoid,
        target: Pregroupoid,
        carrier_map: Vec<usize>,
        a_map: Vec<usize>,
        b_map: Vec<usize>,
    ) -> Result<Self, StructureError> {
        check_map("morphism carrier map", &carrier_map, source.size(), target.size())?;
        check_map("morphism A map", &a_map, source.a.len(), target.a.len())?;
        check_map("morphism B map", &b_map, source.b.len(), target.b.len())?;
        Ok(PregroupoidMorphism {
            source,
            target,
            carrier_map,
            a_map,
            b_map,
        })
    }

    pub fn identity(p: &Pregroupoid) -> Self {
        PregroupoidMorphism {
            source: p.clone(),
            target: p.clone(),
            carrier_map: p.carrier.indices().collect(),
            a_map: p.a.indices().collect(),
            b_map: p.b.indices().collect(),
        }
    }

    /// The unique morphism into a pregroupoid on one-point sets.
    pub fn to_terminal(source: &Pregroupoid, terminal: &Pregroupoid) -> Result<Self, StructureError> {
        if terminal.size() != 1 || terminal.a.len() != 1 || terminal.b.len() != 1 {
            return Err(StructureError::Mismatch("target is not a terminal pregroupoid".into()));
        }
        PregroupoidMorphism::new(
            source.clone(),
            terminal.clone(),
            vec![0; source.size()],
            vec![0; source.a.len()],
            vec![0; source.b.len()],
        )
    }

    pub fn source(&self) -> &Pregroupoid {
        &self.source
    }

    pub fn target(&self) -> &Pregroupoid {
        &self.target
    }

    pub fn map_x(&self, x: usize) -> usize {
        self.carrier_map[x]
    }

    pub fn map_a(&self, a: usize) -> usize {
        self.a_map[a]
    }

    pub fn map_b(&self, b: usize) -> usize {
        self.b_map[b]
    }

    pub fn carrier_map(&self) -> &[usize] {
        &self.carrier_map
    }

    pub fn a_map(&self) -> &[usize] {
        &self.a_map
    }

    pub fn b_map(&self) -> &[usize] {
        &self.b_map
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.carrier_map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &PregroupoidMorphism) -> Result<PregroupoidMorphism, StructureError> {
        if self.target != next.source {
            return Err(StructureError::Mismatch("morphisms are not composable".into()));
        }
        PregroupoidMorphism::new(
            self.source.clone(),
            next.target.clone(),
            self.carrier_map.iter().map(|&x| next.carrier_map[x]).collect(),
            self.a_map.iter().map(|&a| next.a_map[a]).collect(),
            self.b_map.iter().map(|&b| next.b_map[b]).collect(),
        )
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        self.check_into(&mut report);
        report
    }

    pub fn check_into(&self, report: &mut ValidationReport) {
        let (s, t) = (&self.source, &self.target);
        for x in s.carrier.indices() {
            let fx = self.carrier_map[x];
            if t.alpha[fx] != self.a_map[s.alpha[x]] {
                report.push("alpha-square", s.labels(&[x]));
            }
            if t.beta[fx] != self.b_map[s.beta[x]] {
                report.push("beta-square", s.labels(&[x]));
            }
        }
        for (y, x, z, u) in s.ternary.defined() {
            let f = |v: usize| self.carrier_map[v];
            if t.ternary(f(y), f(x), f(z)) != Some(f(u)) {
                report.push("ternary-preserved", s.labels(&[y, x, z]));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn singleton(defined: bool) -> Pregroupoid {
        let mut t = Table3::new(1);
        if defined {
            t.set(0, 0, 0, Some(0));
        }
        Pregroupoid::new(
            FiniteSet::point(),
            FiniteSet::point(),
            FiniteSet::point(),
            vec![0],
            vec![0],
            t,
        )
        .unwrap()
    }

    /// `A x B` with `(a1,b)(a2,b)^-1(a2,b2) = (a1,b2)`.
    fn pair(na: usize, nb: usize) -> Pregroupoid {
        let n = na * nb;
        let carrier = FiniteSet::new((0..n).map(|i| format!("({},{})", i / nb, i % nb))).unwrap();
        Pregroupoid::from_fn(
            carrier,
            FiniteSet::numbered("a", na),
            FiniteSet::numbered("b", nb),
            (0..n).map(|i| i / nb).collect(),
            (0..n).map(|i| i % nb).collect(),
            |y, _x, z| Some((y / nb) * nb + z % nb),
        )
        .unwrap()
    }

    #[test]
    fn singleton_is_clean() {
        let p = singleton(true);
        assert!(p.validate().is_clean());
        assert!(p.verify_derived_equations().is_clean());
        assert_eq!(p.horizontal_quotient().len(), 1);
        assert_eq!(p.vertical_quotient().len(), 1);
    }

    #[test]
    fn undefined_entry_on_domain_is_a_domain_violation() {
        let r = singleton(false).validate();
        assert!(r.has_clause("domain-exactness"));
        assert_eq!(r.first().unwrap().witness, vec!["*", "*", "*"]);
    }

    #[test]
    fn entry_off_domain_is_a_domain_violation() {
        let p = pair(2, 2);
        let mut table = p.table().clone();
        // beta((0,0)) != beta((0,1)), so ((0,0),(0,1),*) is off the domain
        table.set(0, 1, 0, Some(0));
        let q = Pregroupoid::new(
            p.carrier().clone(),
            p.a().clone(),
            p.b().clone(),
            p.alpha_map().to_vec(),
            p.beta_map().to_vec(),
            table,
        )
        .unwrap();
        assert!(q.validate().has_clause("domain-exactness"));
    }

    #[test]
    fn apply_names_failing_condition() {
        let p = pair(2, 2);
        let ix = |s| p.carrier().index_of(s).unwrap();
        assert!(matches!(
            p.apply(ix("(0,0)"), ix("(0,1)"), ix("(0,1)")),
            Err(BookkeepingError::Beta { .. })
        ));
        assert!(matches!(
            p.apply(ix("(0,0)"), ix("(1,0)"), ix("(0,1)")),
            Err(BookkeepingError::Alpha { .. })
        ));
        assert_eq!(p.apply_labels("(0,0)", "(1,0)", "(1,1)").unwrap(), "(0,1)");
        assert!(matches!(
            p.apply_labels("nope", "(1,0)", "(1,1)"),
            Err(ApplyError::Structure(_))
        ));
    }

    #[test]
    fn unit_laws_on_pair_pregroupoid() {
        let p = pair(2, 3);
        for x in 0..p.size() {
            for &z in p.alpha_fiber(p.alpha(x)) {
                assert_eq!(p.apply(x, x, z).unwrap(), z);
            }
            for &y in p.beta_fiber(p.beta(x)) {
                assert_eq!(p.apply(y, x, x).unwrap(), y);
            }
        }
    }

    #[test]
    fn missing_surjectivity_is_reported() {
        let p = Pregroupoid::from_fn(
            FiniteSet::point(),
            FiniteSet::new(["a0", "a1"]).unwrap(),
            FiniteSet::point(),
            vec![0],
            vec![0],
            |_, _, z| Some(z),
        )
        .unwrap();
        let r = p.validate();
        assert!(r.has_clause("alpha-surjective"));
        assert_eq!(r.first().unwrap().witness, vec!["a1"]);
    }

    #[test]
    fn empty_carrier_is_rejected() {
        let err = Pregroupoid::new(
            FiniteSet::default(),
            FiniteSet::point(),
            FiniteSet::point(),
            vec![],
            vec![],
            Table3::new(0),
        )
        .unwrap_err();
        assert_eq!(err, StructureError::Empty("pregroupoid carrier"));
    }

    #[test]
    fn broken_concatenation_is_caught() {
        // Majority-style table on two points: satisfies both unit laws but
        // fails concatenation.
        let p = Pregroupoid::from_fn(
            FiniteSet::numbered("x", 2),
            FiniteSet::point(),
            FiniteSet::point(),
            vec![0, 0],
            vec![0, 0],
            |y, x, z| Some(if x == y { z } else { y }),
        )
        .unwrap();
        let r = p.validate();
        assert!(!r.has_clause("left-unit") && !r.has_clause("right-unit"));
        assert!(r.has_clause("left-concatenation") || r.has_clause("right-concatenation"));
    }

    #[test]
    fn pair_quotients_are_indexed_by_end_pairs() {
        let p = pair(2, 3);
        let h = p.horizontal_quotient();
        let v = p.vertical_quotient();
        assert_eq!(h.len(), 4);
        assert_eq!(v.len(), 9);
        for c in h.classes() {
            assert_eq!(c.members.len(), 3);
            assert_eq!(c.members[0], c.representative);
        }
        assert_eq!(h.class(0).name, "(0,0)*(0,0)^-1");
        assert_eq!(v.class(1).name, "(0,0)^-1*(0,1)");
    }

    #[test]
    fn quadrangle_mirrors_form_a_four_group() {
        let p = pair(2, 2);
        let n = p.size();
        for x in 0..n {
            for &y in p.beta_fiber(p.beta(x)) {
                for &z in p.alpha_fiber(p.alpha(x)) {
                    let q = Quadrangle::new(x, y, z, p.apply(y, x, z).unwrap());
                    let images = p.four_group_images(q).unwrap();
                    for img in images {
                        assert!(p.is_good_quadrangle(img));
                    }
                    assert_eq!(q.horizontal_mirror().horizontal_mirror(), q);
                    assert_eq!(q.vertical_mirror().vertical_mirror(), q);
                    assert_eq!(
                        q.horizontal_mirror().vertical_mirror(),
                        q.vertical_mirror().horizontal_mirror()
                    );
                }
            }
        }
    }

    #[test]
    fn bad_quadrangle_is_rejected() {
        let p = pair(2, 2);
        // beta((0,0)) != beta((0,1))
        let q = Quadrangle::new(0, 1, 0, 1);
        assert!(!p.is_good_quadrangle(q));
        assert_eq!(p.four_group_images(q), Err(NotGood(q)));
    }

    #[test]
    fn degenerate_quadrangle_images() {
        let p = pair(2, 2);
        // (0,0) and (0,1) lie over the same a
        let (x, z) = (0, 1);
        let q = Quadrangle::new(x, x, z, z);
        let images = p.four_group_images(q).unwrap();
        assert_eq!(images[1], Quadrangle::new(z, z, x, x));
        assert_eq!(images[2], q);
        assert_eq!(images[3], Quadrangle::new(z, z, x, x));
    }

    #[test]
    fn morphism_checks() {
        let p = pair(2, 2);
        assert!(PregroupoidMorphism::identity(&p).validate().is_clean());
        let term = singleton(true);
        assert!(PregroupoidMorphism::to_terminal(&p, &term)
            .unwrap()
            .validate()
            .is_clean());
        // Swap two elements of X only: breaks the alpha square.
        let mut map: Vec<usize> = (0..4).collect();
        map.swap(0, 3);
        let bad = PregroupoidMorphism::new(p.clone(), p.clone(), map, vec![0, 1], vec![0, 1]).unwrap();
        assert!(bad.validate().has_clause("alpha-square"));
    }

    #[test]
    fn morphism_breaking_ternary_reports_witness() {
        // Constant map on X into a pair pregroupoid with collapsed ends
        // commutes with alpha, beta but not the operation when the target
        // table is perturbed.
        let p = pair(1, 2);
        let mut table = p.table().clone();
        table.set(0, 0, 1, Some(1));
        table.set(1, 1, 0, Some(1));
        let q = Pregroupoid::new(
            p.carrier().clone(),
            p.a().clone(),
            p.b().clone(),
            p.alpha_map().to_vec(),
            p.beta_map().to_vec(),
            table,
        )
        .unwrap();
        let m = PregroupoidMorphism::new(p.clone(), q, vec![0, 1], vec![0], vec![0, 1]).unwrap();
        let r = m.validate();
        assert!(r.has_clause("ternary-preserved"));
        assert_eq!(r.first().unwrap().witness.len(), 3);
    }
}
