//! JSON documents holding one structure as label tables.
//!
//! ```json
//! {
//!   "version": 1,
//!   "composition": "left-to-right",
//!   "kind": "pregroupoid",
//!   "data": { ... }
//! }
//! ```
//!
//! Maps are objects keyed by label. A partial table is a nested object in
//! which undefined entries are simply absent. Saving lists every set and
//! every key in canonical order, so a saved document loads and saves again
//! to the same bytes.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::StructureError;
use crate::fibration::{make_i, FibrationOverI};
use crate::groupoid::{FiniteGroupoid, GroupoidFunctor};
use crate::pregroupoid::Pregroupoid;
use crate::set::{FiniteSet, Table2, Table3};
use crate::torsor::{Bitorsor, LeftAction, LeftTorsor, RightAction, RightTorsor};

pub const FORMAT_VERSION: u32 = 1;
pub const COMPOSITION: &str = "left-to-right";

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("composition convention `{0}` is not `left-to-right`")]
    Convention(String),
    #[error("unknown kind `{0}`")]
    UnknownKind(String),
    #[error("expected a {expected} document, found {found}")]
    WrongKind { expected: Kind, found: Kind },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Pregroupoid,
    Groupoid,
    LeftTorsor,
    RightTorsor,
    Bitorsor,
    Fibration,
}

impl Kind {
    pub const ALL: [Kind; 6] = [
        Kind::Pregroupoid,
        Kind::Groupoid,
        Kind::LeftTorsor,
        Kind::RightTorsor,
        Kind::Bitorsor,
        Kind::Fibration,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Pregroupoid => "pregroupoid",
            Kind::Groupoid => "groupoid",
            Kind::LeftTorsor => "left_torsor",
            Kind::RightTorsor => "right_torsor",
            Kind::Bitorsor => "bitorsor",
            Kind::Fibration => "fibration",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = DocumentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| DocumentError::UnknownKind(s.to_string()))
    }
}

/// One structure of any supported kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Pregroupoid(Pregroupoid),
    Groupoid(FiniteGroupoid),
    LeftTorsor(LeftTorsor),
    RightTorsor(RightTorsor),
    Bitorsor(Bitorsor),
    Fibration(FibrationOverI),
}

impl Structure {
    pub fn kind(&self) -> Kind {
        match self {
            Structure::Pregroupoid(_) => Kind::Pregroupoid,
            Structure::Groupoid(_) => Kind::Groupoid,
            Structure::LeftTorsor(_) => Kind::LeftTorsor,
            Structure::RightTorsor(_) => Kind::RightTorsor,
            Structure::Bitorsor(_) => Kind::Bitorsor,
            Structure::Fibration(_) => Kind::Fibration,
        }
    }
}

type Map = IndexMap<String, String>;
type Table2Doc = IndexMap<String, Map>;
type Table3Doc = IndexMap<String, IndexMap<String, Map>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header<T> {
    version: u32,
    composition: String,
    kind: String,
    data: T,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PregroupoidDoc {
    #[serde(rename = "X")]
    x: Vec<String>,
    #[serde(rename = "A")]
    a: Vec<String>,
    #[serde(rename = "B")]
    b: Vec<String>,
    alpha: Map,
    beta: Map,
    ternary: Table3Doc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupoidDoc {
    objects: Vec<String>,
    arrows: Vec<String>,
    d0: Map,
    d1: Map,
    compose: Table2Doc,
    identity: Map,
    inverse: Map,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LeftTorsorDoc {
    group: GroupoidDoc,
    #[serde(rename = "X")]
    x: Vec<String>,
    alpha: Map,
    #[serde(rename = "B")]
    b: Vec<String>,
    beta: Map,
    /// `act[g][x] = g·x`
    act: Table2Doc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RightTorsorDoc {
    group: GroupoidDoc,
    #[serde(rename = "X")]
    x: Vec<String>,
    beta: Map,
    #[serde(rename = "A")]
    a: Vec<String>,
    alpha: Map,
    /// `act[x][h] = x·h`
    act: Table2Doc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BitorsorDoc {
    left: LeftTorsorDoc,
    right: RightTorsorDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GammaDoc {
    objects: Map,
    arrows: Map,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FibrationDoc {
    total: GroupoidDoc,
    gamma: GammaDoc,
}

fn set(labels: Vec<String>) -> Result<FiniteSet, StructureError> {
    FiniteSet::new(labels)
}

fn map_to_vec(name: &str, map: &Map, domain: &FiniteSet, codomain: &FiniteSet) -> Result<Vec<usize>, StructureError> {
    for k in map.keys() {
        domain.resolve(k, name)?;
    }
    domain
        .labels()
        .iter()
        .map(|l| {
            let v = map.get(l).ok_or_else(|| StructureError::NotTotal {
                map: name.to_string(),
                label: l.clone(),
            })?;
            codomain.resolve(v, name)
        })
        .collect()
}

fn vec_to_map(values: &[usize], domain: &FiniteSet, codomain: &FiniteSet) -> Map {
    domain
        .indices()
        .map(|i| (domain.label(i).to_string(), codomain.label(values[i]).to_string()))
        .collect()
}

fn table2_from_doc(
    name: &str,
    doc: &Table2Doc,
    rows: &FiniteSet,
    cols: &FiniteSet,
    values: &FiniteSet,
) -> Result<Table2, StructureError> {
    let mut t = Table2::new(rows.len(), cols.len());
    for (r, inner) in doc {
        let i = rows.resolve(r, name)?;
        for (c, v) in inner {
            t.set(i, cols.resolve(c, name)?, Some(values.resolve(v, name)?));
        }
    }
    Ok(t)
}

fn table2_to_doc(t: &Table2, rows: &FiniteSet, cols: &FiniteSet, values: &FiniteSet) -> Table2Doc {
    let mut doc = Table2Doc::new();
    for (i, j, v) in t.defined() {
        doc.entry(rows.label(i).to_string())
            .or_default()
            .insert(cols.label(j).to_string(), values.label(v).to_string());
    }
    doc
}

fn pregroupoid_from_doc(d: &PregroupoidDoc) -> Result<Pregroupoid, StructureError> {
    let (x, a, b) = (set(d.x.clone())?, set(d.a.clone())?, set(d.b.clone())?);
    let alpha = map_to_vec("alpha", &d.alpha, &x, &a)?;
    let beta = map_to_vec("beta", &d.beta, &x, &b)?;
    let mut t = Table3::new(x.len());
    for (y, by_x) in &d.ternary {
        let yi = x.resolve(y, "ternary")?;
        for (xl, by_z) in by_x {
            let xi = x.resolve(xl, "ternary")?;
            for (z, u) in by_z {
                t.set(yi, xi, x.resolve(z, "ternary")?, Some(x.resolve(u, "ternary")?));
            }
        }
    }
    Pregroupoid::new(x, a, b, alpha, beta, t)
}

fn pregroupoid_to_doc(p: &Pregroupoid) -> PregroupoidDoc {
    let x = p.carrier();
    let mut ternary = Table3Doc::new();
    for (y, xi, z, u) in p.table().defined() {
        ternary
            .entry(x.label(y).to_string())
            .or_default()
            .entry(x.label(xi).to_string())
            .or_default()
            .insert(x.label(z).to_string(), x.label(u).to_string());
    }
    PregroupoidDoc {
        x: x.labels().to_vec(),
        a: p.a().labels().to_vec(),
        b: p.b().labels().to_vec(),
        alpha: vec_to_map(p.alpha_map(), x, p.a()),
        beta: vec_to_map(p.beta_map(), x, p.b()),
        ternary,
    }
}

fn groupoid_from_doc(d: &GroupoidDoc) -> Result<FiniteGroupoid, StructureError> {
    let (objects, arrows) = (set(d.objects.clone())?, set(d.arrows.clone())?);
    let d0 = map_to_vec("d0", &d.d0, &arrows, &objects)?;
    let d1 = map_to_vec("d1", &d.d1, &arrows, &objects)?;
    let comp = table2_from_doc("compose", &d.compose, &arrows, &arrows, &arrows)?;
    let identity = map_to_vec("identity", &d.identity, &objects, &arrows)?;
    let inverse = map_to_vec("inverse", &d.inverse, &arrows, &arrows)?;
    FiniteGroupoid::new(objects, arrows, d0, d1, comp, identity, inverse)
}

fn groupoid_to_doc(g: &FiniteGroupoid) -> GroupoidDoc {
    let (o, a) = (g.objects(), g.arrows());
    let all = |f: &dyn Fn(usize) -> usize| a.indices().map(f).collect::<Vec<_>>();
    GroupoidDoc {
        objects: o.labels().to_vec(),
        arrows: a.labels().to_vec(),
        d0: vec_to_map(&all(&|f| g.d0(f)), a, o),
        d1: vec_to_map(&all(&|f| g.d1(f)), a, o),
        compose: table2_to_doc(g.composition_table(), a, a, a),
        identity: vec_to_map(&o.indices().map(|p| g.identity(p)).collect::<Vec<_>>(), o, a),
        inverse: vec_to_map(&all(&|f| g.inverse(f)), a, a),
    }
}

fn left_from_doc(d: &LeftTorsorDoc) -> Result<LeftTorsor, StructureError> {
    let group = groupoid_from_doc(&d.group)?;
    let (x, b) = (set(d.x.clone())?, set(d.b.clone())?);
    let alpha = map_to_vec("alpha", &d.alpha, &x, group.objects())?;
    let beta = map_to_vec("beta", &d.beta, &x, &b)?;
    let act = table2_from_doc("act", &d.act, group.arrows(), &x, &x)?;
    LeftTorsor::new(LeftAction::new(group, x, alpha, act)?, b, beta)
}

fn left_to_doc(t: &LeftTorsor) -> LeftTorsorDoc {
    let (g, x) = (t.group(), t.carrier());
    LeftTorsorDoc {
        group: groupoid_to_doc(g),
        x: x.labels().to_vec(),
        alpha: vec_to_map(t.action().alpha_map(), x, g.objects()),
        b: t.b().labels().to_vec(),
        beta: vec_to_map(t.beta_map(), x, t.b()),
        act: table2_to_doc(t.action().table(), g.arrows(), x, x),
    }
}

fn right_from_doc(d: &RightTorsorDoc) -> Result<RightTorsor, StructureError> {
    let group = groupoid_from_doc(&d.group)?;
    let (x, a) = (set(d.x.clone())?, set(d.a.clone())?);
    let beta = map_to_vec("beta", &d.beta, &x, group.objects())?;
    let alpha = map_to_vec("alpha", &d.alpha, &x, &a)?;
    let act = table2_from_doc("act", &d.act, &x, group.arrows(), &x)?;
    RightTorsor::new(RightAction::new(group, x, beta, act)?, a, alpha)
}

fn right_to_doc(t: &RightTorsor) -> RightTorsorDoc {
    let (g, x) = (t.group(), t.carrier());
    RightTorsorDoc {
        group: groupoid_to_doc(g),
        x: x.labels().to_vec(),
        beta: vec_to_map(t.action().beta_map(), x, g.objects()),
        a: t.a().labels().to_vec(),
        alpha: vec_to_map(t.alpha_map(), x, t.a()),
        act: table2_to_doc(t.action().table(), x, g.arrows(), x),
    }
}

fn fibration_from_doc(d: &FibrationDoc) -> Result<FibrationOverI, StructureError> {
    let total = groupoid_from_doc(&d.total)?;
    let i = make_i();
    let object_map = map_to_vec("gamma objects", &d.gamma.objects, total.objects(), i.objects())?;
    let arrow_map = map_to_vec("gamma arrows", &d.gamma.arrows, total.arrows(), i.arrows())?;
    FibrationOverI::new(GroupoidFunctor::new(total, i, object_map, arrow_map)?)
}

fn fibration_to_doc(f: &FibrationOverI) -> FibrationDoc {
    let (t, g) = (f.total(), f.gamma());
    let i = g.target();
    FibrationDoc {
        total: groupoid_to_doc(t),
        gamma: GammaDoc {
            objects: vec_to_map(g.object_map(), t.objects(), i.objects()),
            arrows: vec_to_map(g.arrow_map(), t.arrows(), i.arrows()),
        },
    }
}

fn render<T: Serialize>(kind: Kind, data: T) -> String {
    let doc = Header {
        version: FORMAT_VERSION,
        composition: COMPOSITION.to_string(),
        kind: kind.as_str().to_string(),
        data,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("documents serialise");
    s.push('\n');
    s
}

/// The canonical text of `s`.
pub fn save(s: &Structure) -> String {
    match s {
        Structure::Pregroupoid(p) => render(s.kind(), pregroupoid_to_doc(p)),
        Structure::Groupoid(g) => render(s.kind(), groupoid_to_doc(g)),
        Structure::LeftTorsor(t) => render(s.kind(), left_to_doc(t)),
        Structure::RightTorsor(t) => render(s.kind(), right_to_doc(t)),
        Structure::Bitorsor(b) => render(
            s.kind(),
            BitorsorDoc {
                left: left_to_doc(b.left()),
                right: right_to_doc(b.right()),
            },
        ),
        Structure::Fibration(f) => render(s.kind(), fibration_to_doc(f)),
    }
}

/// Parses a document. Structural problems (unknown labels, missing map
/// entries, duplicate labels) are errors here; axiom failures are left to
/// the validators.
pub fn load(text: &str) -> Result<Structure, DocumentError> {
    let header: Header<serde_json::Value> = serde_json::from_str(text)?;
    if header.version != FORMAT_VERSION {
        return Err(DocumentError::Version(header.version));
    }
    if header.composition != COMPOSITION {
        return Err(DocumentError::Convention(header.composition));
    }
    let kind: Kind = header.kind.parse()?;
    let data = header.data;
    Ok(match kind {
        Kind::Pregroupoid => Structure::Pregroupoid(pregroupoid_from_doc(&serde_json::from_value(data)?)?),
        Kind::Groupoid => Structure::Groupoid(groupoid_from_doc(&serde_json::from_value(data)?)?),
        Kind::LeftTorsor => Structure::LeftTorsor(left_from_doc(&serde_json::from_value(data)?)?),
        Kind::RightTorsor => Structure::RightTorsor(right_from_doc(&serde_json::from_value(data)?)?),
        Kind::Bitorsor => {
            let d: BitorsorDoc = serde_json::from_value(data)?;
            Structure::Bitorsor(Bitorsor::new(left_from_doc(&d.left)?, right_from_doc(&d.right)?)?)
        }
        Kind::Fibration => Structure::Fibration(fibration_from_doc(&serde_json::from_value(data)?)?),
    })
}

/// [`load`], insisting on a kind.
pub fn load_kind(text: &str, expected: Kind) -> Result<Structure, DocumentError> {
    let s = load(text)?;
    if s.kind() != expected {
        return Err(DocumentError::WrongKind {
            expected,
            found: s.kind(),
        });
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build_envelope;
    use crate::fibration::envelope_fibration;
    use crate::generators::{bijection_pregroup_n, group_regular_torsor, pair_pregroupoid_n};
    use crate::torsor::{ad, env_to_bitorsor};

    fn roundtrip(s: Structure) {
        let text = save(&s);
        let back = load(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(save(&back), text);
    }

    #[test]
    fn every_kind_round_trips() {
        let p = bijection_pregroup_n(3).unwrap();
        let e = build_envelope(&p).unwrap();
        roundtrip(Structure::Pregroupoid(p.clone()));
        roundtrip(Structure::Groupoid(e.groupoid().clone()));
        roundtrip(Structure::LeftTorsor(group_regular_torsor(3).unwrap()));
        roundtrip(Structure::RightTorsor(ad(&group_regular_torsor(3).unwrap()).unwrap()));
        roundtrip(Structure::Bitorsor(
            env_to_bitorsor(&pair_pregroupoid_n(2, 2).unwrap()).unwrap(),
        ));
        roundtrip(Structure::Fibration(envelope_fibration(&e).unwrap()));
    }

    #[test]
    fn header_is_checked() {
        let text = save(&Structure::Pregroupoid(pair_pregroupoid_n(1, 1).unwrap()));
        let wrong = text.replace("left-to-right", "right-to-left");
        assert!(matches!(load(&wrong), Err(DocumentError::Convention(_))));
        let wrong = text.replace("\"version\": 1", "\"version\": 7");
        assert!(matches!(load(&wrong), Err(DocumentError::Version(7))));
        assert!(matches!(load("{"), Err(DocumentError::Json(_))));
        assert!(matches!(
            load_kind(&text, Kind::Groupoid),
            Err(DocumentError::WrongKind { .. })
        ));
    }

    #[test]
    fn partial_maps_are_structural_errors() {
        let text = save(&Structure::Pregroupoid(pair_pregroupoid_n(1, 2).unwrap()));
        let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        doc["data"]["alpha"].as_object_mut().unwrap().remove("(a0,b1)");
        assert!(matches!(
            load(&doc.to_string()),
            Err(DocumentError::Structure(StructureError::NotTotal { .. }))
        ));
        let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        doc["data"]["alpha"]["(a0,b1)"] = "zz".into();
        assert!(matches!(
            load(&doc.to_string()),
            Err(DocumentError::Structure(StructureError::UnknownLabel { .. }))
        ));
    }

    #[test]
    fn absent_entries_mean_undefined() {
        let p = pair_pregroupoid_n(2, 1).unwrap();
        let text = save(&Structure::Pregroupoid(p));
        assert!(!text.contains("null"));
    }
}
